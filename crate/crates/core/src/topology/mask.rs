use std::cmp::Ordering;
use std::fmt;

/// A subset of a ground set, one bit per element.
///
/// Ordering is canonical: by cardinality first, then by numeric value of the
/// bit pattern. Families of masks sorted this way serialize identically
/// across runs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u64,
    width: u8,
}

impl SubsetMask {
    pub fn empty(width: usize) -> Self {
        debug_assert!(width <= 64);
        Self { bits: 0, width: width as u8 }
    }

    pub fn full(width: usize) -> Self {
        let bits = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        Self { bits, width: width as u8 }
    }

    pub fn singleton(width: usize, i: usize) -> Self {
        Self::empty(width).with(i)
    }

    /// Raw constructor; bits above `width` are discarded.
    pub fn from_bits(width: usize, bits: u64) -> Self {
        Self { bits: bits & Self::full(width).bits, width: width as u8 }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        indices.into_iter().fold(Self::empty(width), Self::with)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn with(self, i: usize) -> Self {
        debug_assert!(i < self.width());
        Self { bits: self.bits | (1 << i), width: self.width }
    }

    pub fn without(self, i: usize) -> Self {
        Self { bits: self.bits & !(1 << i), width: self.width }
    }

    pub fn contains(self, i: usize) -> bool {
        i < self.width() && self.bits >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self == Self::full(self.width())
    }

    pub fn union(self, other: Self) -> Self {
        Self { bits: self.bits | other.bits, width: self.width }
    }

    pub fn intersection(self, other: Self) -> Self {
        Self { bits: self.bits & other.bits, width: self.width }
    }

    pub fn difference(self, other: Self) -> Self {
        Self { bits: self.bits & !other.bits, width: self.width }
    }

    pub fn complement(self) -> Self {
        Self { bits: !self.bits & Self::full(self.width()).bits, width: self.width }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Indices of members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Lowest member index.
    pub fn first(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// All `2^width` subsets in increasing numeric order.
    pub fn all(width: usize) -> impl Iterator<Item = Self> {
        assert!(width < 64, "cannot enumerate the power set of {width} elements");
        (0..1u64 << width).map(move |bits| Self { bits, width: width as u8 })
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then(self.bits.cmp(&other.bits)).then(self.width.cmp(&other.width))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}/{}", self.width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_popcount_then_value() {
        let mut v: Vec<_> = SubsetMask::all(3).collect();
        v.sort();
        let bits: Vec<u64> = v.iter().map(|m| m.bits()).collect();
        assert_eq!(bits, vec![0, 1, 2, 4, 3, 5, 6, 7]);
    }

    #[test]
    fn set_algebra() {
        let a = SubsetMask::from_indices(4, [0, 1]);
        let b = SubsetMask::from_indices(4, [1, 3]);
        assert_eq!(a.union(b), SubsetMask::from_indices(4, [0, 1, 3]));
        assert_eq!(a.intersection(b), SubsetMask::singleton(4, 1));
        assert_eq!(a.complement(), SubsetMask::from_indices(4, [2, 3]));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(SubsetMask::full(4).is_full());
        assert!(SubsetMask::singleton(4, 1).is_subset(a));
    }
}
