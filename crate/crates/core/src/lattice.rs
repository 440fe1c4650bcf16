//! Finite bounded lattices.
//!
//! A [`Lattice`] is built once from a cover relation (or any generating
//! relation) and then answers order, meet and join queries by table lookup.
//! All brute-force machinery elsewhere in the crate sits on top of these
//! constant-time primitives.

use std::fmt;

use crate::error::{Error, Result};
use crate::set::{ElementId, ElementSet, MAX_ELEMENTS};

/// Largest lattice for which directed-subset enumeration is attempted.
pub const EXHAUSTIVE_CONTINUITY_LIMIT: usize = 12;

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    /// `up[a]` is `{ b : a <= b }`.
    up: Vec<ElementSet>,
    /// `down[a]` is `{ b : b <= a }`.
    down: Vec<ElementSet>,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
    bottom: ElementId,
    top: ElementId,
    names: Option<Vec<String>>,
}

impl Lattice {
    /// Builds a lattice whose order is the reflexive-transitive closure of
    /// `covers`. Pairs need not be genuine covers; implied pairs are absorbed.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        check_size(n)?;
        let mut up: Vec<ElementSet> = (0..n).map(|i| ElementSet::singleton(ElementId::new(i))).collect();
        for &(a, b) in covers {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if a == b {
                return Err(Error::NotAPoset { a, b });
            }
            up[a].insert(ElementId::new(b));
        }
        Self::from_generating_up_sets(up)
    }

    /// Builds a lattice from an order predicate; the predicate is closed
    /// reflexively and transitively before validation.
    pub fn from_order(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        check_size(n)?;
        let up = (0..n).map(|a| (0..n).filter(|&b| a == b || leq(a, b)).map(ElementId::new).collect()).collect();
        Self::from_generating_up_sets(up)
    }

    pub(crate) fn from_generating_up_sets(mut up: Vec<ElementSet>) -> Result<Self> {
        let n = up.len();
        check_size(n)?;
        for (a, s) in up.iter_mut().enumerate() {
            s.insert(ElementId::new(a));
        }
        // Warshall over bit rows
        for k in 0..n {
            let kid = ElementId::new(k);
            let row_k = up[k];
            for row in up.iter_mut() {
                if row.contains(kid) {
                    *row = row.union(row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].iter().filter(|b| b.index() > a) {
                if up[b.index()].contains(ElementId::new(a)) {
                    return Err(Error::NotAPoset { a, b: b.index() });
                }
            }
        }
        let mut down = vec![ElementSet::EMPTY; n];
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                down[b.index()].insert(ElementId::new(a));
            }
        }
        let all = ElementSet::full(n);
        let bottom = (0..n).find(|&a| up[a] == all).ok_or(Error::Unbounded)?;
        let top = (0..n).find(|&a| down[a] == all).ok_or(Error::Unbounded)?;

        let mut meet = vec![ElementId::default(); n * n];
        let mut join = vec![ElementId::default(); n * n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(down[b]);
                let glb = lower.iter().find(|x| lower.is_subset(down[x.index()])).ok_or(Error::NotALattice {
                    a,
                    b,
                    bound: "meet",
                })?;
                let upper = up[a].intersection(up[b]);
                let lub = upper.iter().find(|x| upper.is_subset(up[x.index()])).ok_or(Error::NotALattice {
                    a,
                    b,
                    bound: "join",
                })?;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }
        Ok(Lattice { up, down, meet, join, bottom: ElementId::new(bottom), top: ElementId::new(top), names: None })
    }

    /// The one-element lattice, where bottom and top coincide.
    pub fn trivial() -> Self {
        Self::chain(1)
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        Self::from_order(n, |a, b| a <= b).expect("chains are lattices")
    }

    pub fn with_names<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.size() {
            return Err(Error::parse(format!("{} names given for {} elements", names.len(), self.size())));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_names(mut self) -> Self {
        self.names = None;
        self
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label: the element's name when present, its index otherwise.
    pub fn name(&self, e: ElementId) -> String {
        match &self.names {
            Some(names) => names[e.index()].clone(),
            None => e.index().to_string(),
        }
    }

    /// Resolves a label or a decimal index to an element.
    pub fn element(&self, label: &str) -> Option<ElementId> {
        if let Some(names) = &self.names {
            if let Some(i) = names.iter().position(|n| n == label) {
                return Some(ElementId::new(i));
            }
        }
        label.parse::<usize>().ok().filter(|&i| i < self.size()).map(ElementId::new)
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.size() == 1
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator {
        (0..self.size()).map(ElementId::new)
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.size())
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn check(&self, e: ElementId) -> Result<ElementId> {
        if e.index() < self.size() {
            Ok(e)
        } else {
            Err(Error::IndexOutOfRange { index: e.index(), n: self.size() })
        }
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.up[a.index()].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet[a.index() * self.size() + b.index()]
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a.index() * self.size() + b.index()]
    }

    /// `a ∧ b = 0`.
    #[inline]
    pub fn disjoint(&self, a: ElementId, b: ElementId) -> bool {
        self.meet(a, b) == self.bottom
    }

    /// Join of a set; the empty join is bottom.
    pub fn join_all(&self, set: ElementSet) -> ElementId {
        set.iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a set; the empty meet is top.
    pub fn meet_all(&self, set: ElementSet) -> ElementId {
        set.iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn up_set(&self, a: ElementId) -> ElementSet {
        self.up[a.index()]
    }

    pub fn down_set(&self, a: ElementId) -> ElementSet {
        self.down[a.index()]
    }

    /// `{ x : low <= x <= high }`.
    pub fn between(&self, low: ElementId, high: ElementId) -> ElementSet {
        self.up_set(low).intersection(self.down_set(high))
    }

    pub fn nonzero(&self) -> ElementSet {
        self.all().without(self.bottom)
    }

    pub fn upper_covers(&self, a: ElementId) -> ElementSet {
        let strict = self.up_set(a).without(a);
        strict.iter().filter(|&b| strict.intersection(self.down_set(b)) == ElementSet::singleton(b)).collect()
    }

    pub fn lower_covers(&self, a: ElementId) -> ElementSet {
        let strict = self.down_set(a).without(a);
        strict.iter().filter(|&b| strict.intersection(self.up_set(b)) == ElementSet::singleton(b)).collect()
    }

    /// All cover pairs `(a, b)` with `a ⋖ b`, sorted ascending.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        self.elements().flat_map(|a| self.upper_covers(a).iter().map(move |b| (a, b))).collect()
    }

    /// Length of the longest chain from bottom to each element.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<ElementId> = self.elements().collect();
        order.sort_by_key(|&e| self.down_set(e).len());
        let mut rank = vec![0usize; self.size()];
        for &e in &order {
            rank[e.index()] = self.lower_covers(e).iter().map(|c| rank[c.index()] + 1).max().unwrap_or(0);
        }
        rank
    }

    /// Length of the longest chain (number of elements minus one).
    pub fn height(&self) -> usize {
        self.ranks()[self.top.index()]
    }

    /// First triple `(a, b, c)` in lexicographic index order with `b <= a`
    /// and `a ∧ (b ∨ c) != b ∨ (a ∧ c)`.
    pub fn modularity_violation(&self) -> Option<(ElementId, ElementId, ElementId)> {
        for a in self.elements() {
            for b in self.down_set(a).iter() {
                for c in self.elements() {
                    if self.meet(a, self.join(b, c)) != self.join(b, self.meet(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_modular(&self) -> bool {
        self.modularity_violation().is_none()
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                self.elements().all(|c| self.meet(a, self.join(b, c)) == self.join(self.meet(a, b), self.meet(a, c)))
            })
        })
    }

    /// Nonempty upward-directed subsets, by direct check of the definition.
    pub fn directed_subsets(&self) -> Result<Vec<ElementSet>> {
        let n = self.size();
        if n > EXHAUSTIVE_CONTINUITY_LIMIT {
            return Err(Error::SizeLimitExceeded { n, limit: EXHAUSTIVE_CONTINUITY_LIMIT });
        }
        Ok(self
            .all()
            .subsets()
            .filter(|d| !d.is_empty())
            .filter(|&d| {
                d.iter()
                    .all(|x| d.iter().all(|y| !self.up_set(x).intersection(self.up_set(y)).intersection(d).is_empty()))
            })
            .collect())
    }

    /// Checks `a ∧ ⋁D = ⋁(a ∧ d)` over every element and directed subset.
    /// Always true for finite lattices; kept as a self-test of the definition.
    pub fn is_upper_continuous_exhaustive(&self) -> Result<bool> {
        let directed = self.directed_subsets()?;
        Ok(directed.iter().all(|&d| {
            let sup = self.join_all(d);
            self.elements().all(|a| {
                let pointwise = d.iter().fold(self.bottom, |acc, x| self.join(acc, self.meet(a, x)));
                self.meet(a, sup) == pointwise
            })
        }))
    }

    /// Compact elements. With `exhaustive`, each element is tested against
    /// the directed-set (S-compact) criterion; otherwise every element is
    /// returned, which is the answer for any finite lattice.
    pub fn compact_elements(&self, exhaustive: bool) -> Result<ElementSet> {
        if !exhaustive {
            return Ok(self.all());
        }
        let directed = self.directed_subsets()?;
        Ok(self
            .elements()
            .filter(|&c| directed.iter().all(|&d| !self.leq(c, self.join_all(d)) || d.iter().any(|x| self.leq(c, x))))
            .collect())
    }

    pub fn is_compactly_generated(&self) -> bool {
        let exhaustive = self.size() <= EXHAUSTIVE_CONTINUITY_LIMIT;
        let compact = self.compact_elements(exhaustive).expect("size checked against the exhaustive limit");
        self.elements().all(|a| self.join_all(compact.intersection(self.down_set(a))) == a)
    }

    /// Finite lattices are complete and upper continuous, so an idiom is
    /// exactly a modular one.
    pub fn is_idiom(&self) -> bool {
        self.is_modular()
    }

    /// Extracts the interval `high/low = { x : low <= x <= high }`.
    pub fn interval(&self, low: ElementId, high: ElementId) -> Result<Interval> {
        self.check(low)?;
        self.check(high)?;
        if !self.leq(low, high) {
            return Err(Error::NotComparable { low: low.index(), high: high.index() });
        }
        let embedding = self.between(low, high).to_vec();
        let up = embedding
            .iter()
            .map(|&x| {
                embedding.iter().enumerate().filter(|&(_, &y)| self.leq(x, y)).map(|(j, _)| ElementId::new(j)).collect()
            })
            .collect();
        let mut lattice = Lattice::from_generating_up_sets(up).expect("intervals of lattices are lattices");
        if let Some(names) = &self.names {
            lattice.names = Some(embedding.iter().map(|e| names[e.index()].clone()).collect());
        }
        Ok(Interval { lattice, embedding, low, high })
    }

    /// The initial interval `a/0` as a lattice.
    pub fn initial(&self, a: ElementId) -> Lattice {
        self.interval(self.bottom, a).expect("bottom <= a").lattice
    }

    /// Nonzero members whose pairwise structure satisfies
    /// `e ∧ ⋁(others) = 0` for every member `e`.
    pub fn independent(&self, elems: ElementSet) -> bool {
        if elems.contains(self.bottom) {
            return false;
        }
        elems.iter().all(|e| self.disjoint(e, self.join_all(elems.without(e))))
    }

    /// `b` with `a ∨ b = 1` and `a ∧ b = 0`.
    pub fn complements(&self, a: ElementId) -> ElementSet {
        self.elements().filter(|&b| self.join(a, b) == self.top && self.disjoint(a, b)).collect()
    }

    /// Unordered complement pairs `(a, b)` with `a <= b` by index.
    pub fn complement_pairs(&self) -> Vec<(ElementId, ElementId)> {
        self.elements().flat_map(|a| self.complements(a).iter().filter(move |&b| b >= a).map(move |b| (a, b))).collect()
    }

    /// Copy with element `perm[i]` of `self` moved to position `i`.
    pub fn relabeled(&self, perm: &[ElementId]) -> Lattice {
        assert_eq!(perm.len(), self.size());
        let mut pos = vec![0usize; self.size()];
        for (i, e) in perm.iter().enumerate() {
            pos[e.index()] = i;
        }
        let up =
            perm.iter().map(|&e| self.up_set(e).iter().map(|x| ElementId::new(pos[x.index()])).collect()).collect();
        let mut out = Lattice::from_generating_up_sets(up).expect("relabeling preserves the lattice");
        out.names = self.names.as_ref().map(|names| perm.iter().map(|e| names[e.index()].clone()).collect());
        out
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > MAX_ELEMENTS {
        return Err(Error::SizeLimitExceeded { n, limit: MAX_ELEMENTS });
    }
    Ok(())
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(String, String)> =
            self.covers().into_iter().map(|(a, b)| (self.name(a), self.name(b))).collect();
        f.debug_struct("Lattice").field("n", &self.size()).field("covers", &covers).finish()
    }
}

/// An interval `high/low` extracted as a lattice in its own right.
#[derive(Clone, Debug)]
pub struct Interval {
    pub lattice: Lattice,
    /// `embedding[i]` is the parent element at interval position `i`.
    pub embedding: Vec<ElementId>,
    pub low: ElementId,
    pub high: ElementId,
}

impl Interval {
    pub fn to_parent(&self, e: ElementId) -> ElementId {
        self.embedding[e.index()]
    }

    pub fn from_parent(&self, e: ElementId) -> Option<ElementId> {
        self.embedding.iter().position(|&x| x == e).map(ElementId::new)
    }

    pub fn set_to_parent(&self, s: ElementSet) -> ElementSet {
        s.iter().map(|e| self.to_parent(e)).collect()
    }
}
