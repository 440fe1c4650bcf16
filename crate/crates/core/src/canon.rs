//! Canonical labeling and isomorphism testing.
//!
//! Elements are first partitioned by order invariants (rank, co-rank, sizes
//! of down- and up-sets, cover degrees) and the partition is refined until
//! stable. A backtracking search then picks, cell by cell, the ordering whose
//! order matrix is lexicographically smallest. Twins (elements with identical
//! strict up- and down-sets) are interchangeable by an automorphism, so only
//! one twin per class is branched on.

use std::cmp::Ordering;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

/// Byte encoding equal for two lattices exactly when they are isomorphic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0[0] as usize
    }

    pub fn to_hex(&self) -> String {
        hex(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 || s.is_empty() {
            return Err(Error::parse(format!("bad canonical form {s:?}")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|e| Error::parse(format!("bad canonical form {s:?}: {e}")))?;
        let form = CanonicalForm(bytes);
        form.to_lattice()?;
        Ok(form)
    }

    /// First 16 hex digits of the SHA-256 of the encoding.
    pub fn short_hash(&self) -> String {
        let digest = Sha256::digest(&self.0);
        hex(&digest[..8])
    }

    /// Rebuilds the lattice in canonical labeling.
    pub fn to_lattice(&self) -> Result<Lattice> {
        let n = *self.0.first().ok_or(Error::Empty)? as usize;
        let bits = &self.0[1..];
        let needed = (n * n.saturating_sub(1) / 2).div_ceil(8);
        if bits.len() != needed {
            return Err(Error::parse("canonical form has the wrong length"));
        }
        let mut up = vec![ElementSet::EMPTY; n];
        let mut cursor = 0usize;
        for k in 1..n {
            for row in up.iter_mut().take(k) {
                if bits[cursor / 8] >> (7 - cursor % 8) & 1 == 1 {
                    row.insert(ElementId::new(k));
                }
                cursor += 1;
            }
        }
        Lattice::from_generating_up_sets(up)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical ordering: position `i` holds element `labeling[i]`.
/// Positions follow a linear extension, so bottom comes first and top last.
pub fn canonical_labeling(l: &Lattice) -> Vec<ElementId> {
    canonize(l).1
}

pub fn canonical_form(l: &Lattice) -> CanonicalForm {
    canonize(l).0
}

/// The lattice relabeled into canonical order (names carried along).
pub fn canonical_relabel(l: &Lattice) -> Lattice {
    l.relabeled(&canonical_labeling(l))
}

/// A bijection `f` (`f[a]` is the image of `a`) preserving order both ways,
/// if one exists.
pub fn is_isomorphic(l1: &Lattice, l2: &Lattice) -> Option<Vec<ElementId>> {
    if l1.size() != l2.size() {
        return None;
    }
    let (f1, p1) = canonize(l1);
    let (f2, p2) = canonize(l2);
    if f1 != f2 {
        return None;
    }
    let mut map = vec![ElementId::default(); l1.size()];
    for (a, b) in p1.iter().zip(&p2) {
        map[a.index()] = *b;
    }
    debug_assert!(l1.elements().all(|a| l1.elements().all(|b| l1.leq(a, b) == l2.leq(map[a.index()], map[b.index()]))));
    Some(map)
}

fn canonize(l: &Lattice) -> (CanonicalForm, Vec<ElementId>) {
    let n = l.size();
    let colors = refined_colors(l);
    let mut slots: Vec<usize> = colors.clone();
    slots.sort_unstable();

    let mut search = Search {
        l,
        colors: &colors,
        slot_colors: &slots,
        perm: Vec::with_capacity(n),
        used: ElementSet::EMPTY,
        rows: Vec::with_capacity(n),
        best_rows: None,
        best_perm: Vec::new(),
    };
    search.descend(Ordering::Equal);
    let perm = search.best_perm;
    let rows = search.best_rows.expect("search visits at least one leaf");

    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut filled = 0;
    for (k, row) in rows.iter().enumerate().skip(1) {
        for j in 0..k {
            acc = acc << 1 | (row >> j & 1) as u8;
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    (CanonicalForm(bytes), perm)
}

struct Search<'a> {
    l: &'a Lattice,
    colors: &'a [usize],
    slot_colors: &'a [usize],
    perm: Vec<ElementId>,
    used: ElementSet,
    rows: Vec<u64>,
    best_rows: Option<Vec<u64>>,
    best_perm: Vec<ElementId>,
}

impl Search<'_> {
    fn descend(&mut self, state: Ordering) {
        let k = self.perm.len();
        if k == self.slot_colors.len() {
            if self.best_rows.is_none() || state == Ordering::Less {
                self.best_rows = Some(self.rows.clone());
                self.best_perm = self.perm.clone();
            }
            return;
        }
        let want = self.slot_colors[k];
        let mut tried: Vec<ElementId> = Vec::new();
        for e in self.l.elements() {
            if self.used.contains(e) || self.colors[e.index()] != want {
                continue;
            }
            if tried.iter().any(|&t| self.twins(t, e)) {
                continue;
            }
            tried.push(e);
            let row =
                self.perm.iter().enumerate().filter(|&(_, &p)| self.l.leq(p, e)).fold(0u64, |acc, (j, _)| acc | 1 << j);
            let next = match (state, &self.best_rows) {
                (Ordering::Equal, Some(best)) => match row.cmp(&best[k]) {
                    Ordering::Greater => continue,
                    o => o,
                },
                (s, _) => s,
            };
            self.perm.push(e);
            self.used.insert(e);
            self.rows.push(row);
            self.descend(next);
            self.rows.pop();
            self.used.remove(e);
            self.perm.pop();
        }
    }

    fn twins(&self, a: ElementId, b: ElementId) -> bool {
        let l = self.l;
        l.up_set(a).without(a) == l.up_set(b).without(b) && l.down_set(a).without(a) == l.down_set(b).without(b)
    }
}

/// Color refinement seeded with order invariants. Colors are ranks of
/// signatures, so sorting by color keeps rank order (a linear extension).
fn refined_colors(l: &Lattice) -> Vec<usize> {
    let ranks = l.ranks();
    let coranks = coranks(l);
    let seeds: Vec<Vec<usize>> = l
        .elements()
        .map(|e| {
            vec![
                ranks[e.index()],
                coranks[e.index()],
                l.down_set(e).len(),
                l.up_set(e).len(),
                l.lower_covers(e).len(),
                l.upper_covers(e).len(),
            ]
        })
        .collect();
    let mut colors = rank_signatures(&seeds);
    loop {
        let sigs: Vec<Vec<usize>> = l
            .elements()
            .map(|e| {
                let mut up: Vec<usize> = l.upper_covers(e).iter().map(|x| colors[x.index()]).collect();
                let mut down: Vec<usize> = l.lower_covers(e).iter().map(|x| colors[x.index()]).collect();
                up.sort_unstable();
                down.sort_unstable();
                let mut sig = vec![colors[e.index()], usize::MAX];
                sig.extend(up);
                sig.push(usize::MAX);
                sig.extend(down);
                sig
            })
            .collect();
        let next = rank_signatures(&sigs);
        let count = |c: &[usize]| c.iter().max().map_or(0, |m| m + 1);
        if count(&next) == count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn rank_signatures(sigs: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect()
}

fn coranks(l: &Lattice) -> Vec<usize> {
    let mut order: Vec<ElementId> = l.elements().collect();
    order.sort_by_key(|&e| l.up_set(e).len());
    let mut corank = vec![0usize; l.size()];
    for &e in &order {
        corank[e.index()] = l.upper_covers(e).iter().map(|c| corank[c.index()] + 1).max().unwrap_or(0);
    }
    corank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn relabeled_diamond_is_isomorphic() {
        let m3 = fixtures::m3();
        let perm: Vec<ElementId> = [0, 3, 1, 2, 4].into_iter().map(ElementId::new).collect();
        let shuffled = m3.relabeled(&perm);
        let f = is_isomorphic(&m3, &shuffled).expect("isomorphic");
        for a in m3.elements() {
            for b in m3.elements() {
                assert_eq!(m3.leq(a, b), shuffled.leq(f[a.index()], f[b.index()]));
            }
        }
        assert_eq!(canonical_form(&m3), canonical_form(&shuffled));
    }

    #[test]
    fn diamond_and_pentagon_differ() {
        assert!(is_isomorphic(&fixtures::m3(), &fixtures::n5()).is_none());
        assert_ne!(canonical_form(&fixtures::m3()), canonical_form(&fixtures::n5()));
    }

    #[test]
    fn pentagon_lower_interval_is_a_three_chain() {
        let n5 = fixtures::n5();
        let r = n5.element("r").unwrap();
        let iv = n5.interval(n5.bottom(), r).unwrap();
        assert_eq!(canonical_form(&fixtures::c3()), canonical_form(&iv.lattice));
    }

    #[test]
    fn whole_interval_is_a_copy() {
        for (_, l) in fixtures::all() {
            let iv = l.interval(l.bottom(), l.top()).unwrap();
            assert!(is_isomorphic(&l, &iv.lattice).is_some());
        }
    }

    #[test]
    fn canonical_form_decodes() {
        for (_, l) in fixtures::all() {
            let f = canonical_form(&l);
            let back = f.to_lattice().unwrap();
            assert_eq!(canonical_form(&back), f);
            assert_eq!(CanonicalForm::from_hex(&f.to_hex()).unwrap(), f);
        }
    }

    #[test]
    fn canonical_order_is_a_linear_extension() {
        let l = canonical_relabel(&fixtures::n5());
        assert_eq!(l.bottom(), ElementId::new(0));
        assert_eq!(l.top(), ElementId::new(4));
        for a in l.elements() {
            for b in l.elements() {
                if l.leq(a, b) {
                    assert!(a <= b);
                }
            }
        }
    }

    #[test]
    fn wide_diamond_is_fast() {
        // M10: 12 elements, 10 interchangeable atoms
        let n = 12;
        let covers: Vec<(usize, usize)> = (1..=10).flat_map(|i| [(0, i), (i, 11)]).collect();
        let m10 = Lattice::from_covers(n, &covers).unwrap();
        let perm: Vec<ElementId> = (0..n).rev().map(ElementId::new).collect();
        assert!(is_isomorphic(&m10, &m10.relabeled(&perm)).is_some());
    }
}
