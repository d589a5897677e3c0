//! JSON exchange documents for topologies and preorders.

use serde::{Deserialize, Serialize};

use super::{FiniteTopology, GroundSet, Preorder, TopologyError};

/// `{"elements": [...], "opens": [[...], ...]}`, opens in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub elements: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl TopologyDoc {
    pub fn from_topology(t: &FiniteTopology) -> Self {
        Self { elements: t.ground().elements().to_vec(), opens: t.named_opens() }
    }

    pub fn to_topology(&self) -> Result<FiniteTopology, TopologyError> {
        let ground = GroundSet::new(self.elements.iter().cloned())?;
        let family = self.opens.iter().map(|o| ground.mask_of(o)).collect::<Result<Vec<_>, _>>()?;
        FiniteTopology::new(ground, family)
    }
}

/// `{"elements": [...], "leq": [[x, y], ...]}` listing every pair `x ⪯ y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderDoc {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
}

impl PreorderDoc {
    pub fn from_preorder(p: &Preorder) -> Self {
        let g = p.ground();
        Self { elements: g.elements().to_vec(), leq: p.pairs().map(|(i, j)| (g.name(i).to_string(), g.name(j).to_string())).collect() }
    }

    pub fn to_preorder(&self) -> Result<Preorder, TopologyError> {
        let ground = GroundSet::new(self.elements.iter().cloned())?;
        let mut pairs = Vec::with_capacity(self.leq.len());
        for (x, y) in &self.leq {
            let i = ground.position(x).ok_or_else(|| TopologyError::UnknownElement(x.clone()))?;
            let j = ground.position(y).ok_or_else(|| TopologyError::UnknownElement(y.clone()))?;
            pairs.push((i, j));
        }
        Preorder::from_pairs(ground, pairs)
    }
}
