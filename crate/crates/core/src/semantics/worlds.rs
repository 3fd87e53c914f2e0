use fixedbitset::FixedBitSet;

/// A set of precisifications, indexed `0..n`.
pub trait WorldSet: Clone + PartialEq + std::fmt::Debug {
    fn empty(n: usize) -> Self;
    fn full(n: usize) -> Self;
    fn contains(&self, i: usize) -> bool;
    fn insert(&mut self, i: usize);
    fn meet(&self, other: &Self) -> Self;
    fn join(&self, other: &Self) -> Self;
    fn complement(&self, n: usize) -> Self;
    fn is_subset(&self, other: &Self) -> bool;
    fn is_empty(&self) -> bool;
    fn intersects(&self, other: &Self) -> bool {
        !self.meet(other).is_empty()
    }
    fn members(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.contains(i)).collect()
    }
}

/// Bitmask sets for structures with at most 64 precisifications.
impl WorldSet for u64 {
    fn empty(_: usize) -> Self {
        0
    }

    fn full(n: usize) -> Self {
        if n >= 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn contains(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        *self |= 1 << i;
    }

    fn meet(&self, other: &Self) -> Self {
        self & other
    }

    fn join(&self, other: &Self) -> Self {
        self | other
    }

    fn complement(&self, n: usize) -> Self {
        !self & u64::full(n)
    }

    fn is_subset(&self, other: &Self) -> bool {
        self & !other == 0
    }

    fn is_empty(&self) -> bool {
        *self == 0
    }

    fn intersects(&self, other: &Self) -> bool {
        self & other != 0
    }
}

impl WorldSet for FixedBitSet {
    fn empty(n: usize) -> Self {
        FixedBitSet::with_capacity(n)
    }

    fn full(n: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        s
    }

    fn contains(&self, i: usize) -> bool {
        FixedBitSet::contains(self, i)
    }

    fn insert(&mut self, i: usize) {
        FixedBitSet::insert(self, i)
    }

    fn meet(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    fn join(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    fn complement(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.grow(n);
        s.toggle_range(..n);
        s
    }

    fn is_subset(&self, other: &Self) -> bool {
        FixedBitSet::is_subset(self, other)
    }

    fn is_empty(&self) -> bool {
        self.is_clear()
    }

    fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
}
