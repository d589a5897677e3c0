use std::collections::HashMap;

use super::{SubsetMask, TopologyError, MAX_ELEMENTS};

/// The finite, nonempty set of points a space is built on.
///
/// Elements keep their insertion order; that order fixes the bit positions
/// used by every [`SubsetMask`] over this ground set.
#[derive(Debug, Clone)]
pub struct GroundSet {
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for GroundSet {}

impl GroundSet {
    pub fn new<I, S>(elements: I) -> Result<Self, TopologyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(TopologyError::EmptyGround);
        }
        if elements.len() > MAX_ELEMENTS {
            return Err(TopologyError::TooManyElements(elements.len()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(TopologyError::DuplicateElement(e.clone()));
            }
        }
        Ok(Self { elements, index })
    }

    /// Ground set `{0, 1, ..., n-1}` with decimal labels.
    pub fn numbered(n: usize) -> Result<Self, TopologyError> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn position(&self, element: &str) -> Option<usize> {
        self.index.get(element).copied()
    }

    pub fn empty_mask(&self) -> SubsetMask {
        SubsetMask::empty(self.len())
    }

    pub fn full_mask(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    /// Builds a mask from element names.
    pub fn mask_of<I, S>(&self, names: I) -> Result<SubsetMask, TopologyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = self.empty_mask();
        for name in names {
            let name = name.as_ref();
            let i = self.position(name).ok_or_else(|| TopologyError::UnknownElement(name.to_string()))?;
            mask = mask.with(i);
        }
        Ok(mask)
    }

    /// Element names of a mask, in ground-set order.
    pub fn names_of(&self, mask: SubsetMask) -> Vec<&str> {
        mask.iter().map(|i| self.elements[i].as_str()).collect()
    }

    /// `{a, b}` rendering of a mask.
    pub fn format_mask(&self, mask: SubsetMask) -> String {
        format!("{{{}}}", self.names_of(mask).join(", "))
    }

    pub(crate) fn check_width(&self, mask: SubsetMask) -> Result<(), TopologyError> {
        if mask.width() != self.len() {
            return Err(TopologyError::WidthMismatch { expected: self.len(), found: mask.width() });
        }
        Ok(())
    }
}
