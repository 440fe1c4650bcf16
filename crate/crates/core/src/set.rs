//! Element handles and bitset-backed element sets.
//!
//! Every lattice handled by this crate has at most [`MAX_ELEMENTS`] elements,
//! so a set of elements fits in one machine word.

use std::fmt;

/// Hard ceiling on the number of elements of a [`crate::Lattice`].
pub const MAX_ELEMENTS: usize = 64;

/// Index of an element, valid relative to one lattice.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementId(u8);

impl ElementId {
    /// Panics if `index >= MAX_ELEMENTS`.
    pub const fn new(index: usize) -> Self {
        assert!(index < MAX_ELEMENTS, "element index out of range");
        ElementId(index as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of elements stored as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: ElementId) -> Self {
        ElementSet(1u64 << e.index())
    }

    pub fn contains(self, e: ElementId) -> bool {
        self.0 >> e.index() & 1 == 1
    }

    pub fn insert(&mut self, e: ElementId) {
        self.0 |= 1u64 << e.index();
    }

    pub fn remove(&mut self, e: ElementId) {
        self.0 &= !(1u64 << e.index());
    }

    pub fn with(self, e: ElementId) -> Self {
        ElementSet(self.0 | 1u64 << e.index())
    }

    pub fn without(self, e: ElementId) -> Self {
        ElementSet(self.0 & !(1u64 << e.index()))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member by index.
    pub fn first(self) -> Option<ElementId> {
        (self.0 != 0).then(|| ElementId(self.0.trailing_zeros() as u8))
    }

    /// Members in increasing index order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<ElementId> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing order of their bit patterns.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl IntoIterator for ElementSet {
    type Item = ElementId;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = ElementId;

    fn next(&mut self) -> Option<ElementId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(ElementId(i as u8))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Subset enumeration of a mask (Gosper-free "next submask" walk, ascending).
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // increment within the mask: ((cur | !mask) + 1) & mask
            Some((cur | !self.mask).wrapping_add(1) & self.mask)
        };
        Some(ElementSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_of_mask_are_complete_and_ascending() {
        let s = ElementSet::from_bits(0b1011);
        let all: Vec<u64> = s.subsets().map(|x| x.bits()).collect();
        assert_eq!(all, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(ElementSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn iteration_order_is_by_index() {
        let s: ElementSet = [5, 1, 3].into_iter().map(ElementId::new).collect();
        assert_eq!(s.to_vec(), vec![ElementId::new(1), ElementId::new(3), ElementId::new(5)]);
        assert_eq!(s.first(), Some(ElementId::new(1)));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn full_set_at_capacity() {
        assert_eq!(ElementSet::full(64).len(), 64);
        assert_eq!(ElementSet::full(0), ElementSet::EMPTY);
    }
}
