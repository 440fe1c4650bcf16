//! Distinguished element sets: essential elements `E(L)`, pseudocomplements
//! `P(a)` and `P(L)`, closed elements `C(L)`, direct summands `D(L)`, and
//! essential closures.
//!
//! Throughout, "`a ≤e c`" means `a <= c` and `a` is essential in the
//! interval `c/0`.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

/// Every nonzero `b` meets `a` nontrivially.
pub fn is_essential(l: &Lattice, a: ElementId) -> bool {
    l.nonzero().iter().all(|b| !l.disjoint(a, b))
}

/// `a` is essential in `high/low`: every `x` with `low < x <= high`
/// satisfies `a ∧ x > low`.
pub fn is_essential_in(l: &Lattice, a: ElementId, low: ElementId, high: ElementId) -> Result<bool> {
    if !l.leq(low, a) || !l.leq(a, high) {
        return Err(Error::NotInInterval { element: a.index(), low: low.index(), high: high.index() });
    }
    Ok(essential_in_unchecked(l, a, low, high))
}

fn essential_in_unchecked(l: &Lattice, a: ElementId, low: ElementId, high: ElementId) -> bool {
    l.between(low, high).without(low).iter().all(|x| l.meet(a, x) != low)
}

/// `a ≤e c`; false when `a` is not below `c`.
pub fn is_essential_below(l: &Lattice, a: ElementId, c: ElementId) -> bool {
    l.leq(a, c) && essential_in_unchecked(l, a, l.bottom(), c)
}

pub fn essentials(l: &Lattice) -> ElementSet {
    l.elements().filter(|&a| is_essential(l, a)).collect()
}

/// Elements disjoint from `a`.
pub fn annihilator(l: &Lattice, a: ElementId) -> ElementSet {
    l.elements().filter(|&x| l.disjoint(a, x)).collect()
}

/// Maximal elements of a set under the lattice order.
pub fn maximal(l: &Lattice, s: ElementSet) -> ElementSet {
    s.iter().filter(|&x| s.intersection(l.up_set(x)) == ElementSet::singleton(x)).collect()
}

/// `P(a)`: maximal elements of `{ x : a ∧ x = 0 }`.
pub fn pseudocomplements(l: &Lattice, a: ElementId) -> ElementSet {
    maximal(l, annihilator(l, a))
}

/// `P(L)`: elements that are a pseudocomplement of something.
pub fn pseudocomplement_range(l: &Lattice) -> ElementSet {
    l.elements().fold(ElementSet::EMPTY, |acc, a| acc.union(pseudocomplements(l, a)))
}

/// No `b > a` has `a ≤e b`.
pub fn is_closed(l: &Lattice, a: ElementId) -> bool {
    l.up_set(a).without(a).iter().all(|b| !is_essential_below(l, a, b))
}

pub fn closed_elements(l: &Lattice) -> ElementSet {
    l.elements().filter(|&a| is_closed(l, a)).collect()
}

/// `D(L)`: elements with a complement.
pub fn summand_elements(l: &Lattice) -> ElementSet {
    l.elements().filter(|&a| !l.complements(a).is_empty()).collect()
}

/// Closed `c` with `a ≤e c`.
pub fn essential_closures(l: &Lattice, a: ElementId) -> ElementSet {
    l.up_set(a).iter().filter(|&c| is_essential_below(l, a, c) && is_closed(l, c)).collect()
}

/// Maximal `d <= high` with `c ∧ d = 0`.
pub fn relative_pseudocomplements(l: &Lattice, c: ElementId, high: ElementId) -> Result<ElementSet> {
    if !l.leq(c, high) {
        return Err(Error::NotInInterval { element: c.index(), low: l.bottom().index(), high: high.index() });
    }
    Ok(maximal(l, annihilator(l, c).intersection(l.down_set(high))))
}

/// `a <= b` and `b/a` has exactly two elements.
pub fn dominates(l: &Lattice, b: ElementId, a: ElementId) -> bool {
    l.leq(a, b) && l.between(a, b).len() == 2
}

/// Precomputed element classes of one lattice.
#[derive(Clone, Debug)]
pub struct ElementClassTable<'a> {
    pub lattice: &'a Lattice,
    pub essentials: ElementSet,
    pub pseudocomplements_of: Vec<ElementSet>,
    pub pseudocomplement_range: ElementSet,
    pub closed: ElementSet,
    pub summands: ElementSet,
    /// `essential_extensions[a]` is `{ c : a ≤e c }`.
    pub essential_extensions: Vec<ElementSet>,
    pub complements_of: Vec<ElementSet>,
}

impl<'a> ElementClassTable<'a> {
    pub fn new(l: &'a Lattice) -> Self {
        let mut essential_extensions = vec![ElementSet::EMPTY; l.size()];
        for c in l.elements() {
            for a in l.down_set(c).iter() {
                if essential_in_unchecked(l, a, l.bottom(), c) {
                    essential_extensions[a.index()].insert(c);
                }
            }
        }
        let closed: ElementSet =
            l.elements().filter(|&a| essential_extensions[a.index()] == ElementSet::singleton(a)).collect();
        let pseudocomplements_of: Vec<ElementSet> = l.elements().map(|a| pseudocomplements(l, a)).collect();
        let pseudocomplement_range = pseudocomplements_of.iter().fold(ElementSet::EMPTY, |acc, &s| acc.union(s));
        let complements_of: Vec<ElementSet> = l.elements().map(|a| l.complements(a)).collect();
        let summands = l.elements().filter(|a| !complements_of[a.index()].is_empty()).collect();
        ElementClassTable {
            lattice: l,
            essentials: essential_extensions
                .iter()
                .enumerate()
                .filter(|(_, ext)| ext.contains(l.top()))
                .map(|(a, _)| ElementId::new(a))
                .collect(),
            pseudocomplements_of,
            pseudocomplement_range,
            closed,
            summands,
            essential_extensions,
            complements_of,
        }
    }

    pub fn p(&self, a: ElementId) -> ElementSet {
        self.pseudocomplements_of[a.index()]
    }

    /// `a ≤e c`.
    pub fn ess(&self, a: ElementId, c: ElementId) -> bool {
        self.essential_extensions[a.index()].contains(c)
    }

    pub fn closures(&self, a: ElementId) -> ElementSet {
        self.essential_extensions[a.index()].intersection(self.closed)
    }

    pub fn is_summand(&self, a: ElementId) -> bool {
        self.summands.contains(a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }
}

impl Serialize for ElementClassTable<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let l = self.lattice;
        let labels = |s: ElementSet| -> Vec<serde_json::Value> { s.iter().map(|e| label_value(l, e)).collect() };
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("E", &labels(self.essentials))?;
        map.serialize_entry("C", &labels(self.closed))?;
        map.serialize_entry("D", &labels(self.summands))?;
        let p = PseudocomplementMap(self);
        map.serialize_entry("P", &p)?;
        map.end()
    }
}

struct PseudocomplementMap<'t, 'a>(&'t ElementClassTable<'a>);

impl Serialize for PseudocomplementMap<'_, '_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let t = self.0;
        let l = t.lattice;
        let mut map = serializer.serialize_map(Some(l.size()))?;
        for a in l.elements() {
            let values: Vec<serde_json::Value> = t.p(a).iter().map(|e| label_value(l, e)).collect();
            map.serialize_entry(&l.name(a), &values)?;
        }
        map.end()
    }
}

/// Element name as a JSON string when the lattice is labeled, index otherwise.
pub(crate) fn label_value(l: &Lattice, e: ElementId) -> serde_json::Value {
    match l.names() {
        Some(names) => serde_json::Value::String(names[e.index()].clone()),
        None => serde_json::Value::from(e.index()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(l: &Lattice, names: &[&str]) -> ElementSet {
        names.iter().map(|n| l.element(n).unwrap()).collect()
    }

    fn e(l: &Lattice, name: &str) -> ElementId {
        l.element(name).unwrap()
    }

    #[test]
    fn essentiality() {
        let c3 = fixtures::c3();
        assert!(is_essential(&c3, e(&c3, "m")));
        let m3 = fixtures::m3();
        assert!(!is_essential(&m3, e(&m3, "a")));
        assert_eq!(essentials(&m3), set(&m3, &["1"]));
        let n5 = fixtures::n5();
        assert!(is_essential_in(&n5, e(&n5, "r"), e(&n5, "p"), n5.top()).unwrap());
        assert_eq!(
            is_essential_in(&n5, e(&n5, "q"), e(&n5, "p"), n5.top()),
            Err(Error::NotInInterval { element: 2, low: 1, high: 4 })
        );
    }

    #[test]
    fn bottom_is_essential_only_in_the_trivial_lattice() {
        assert!(is_essential(&Lattice::trivial(), ElementId::new(0)));
        for (_, l) in fixtures::all() {
            assert!(!is_essential(&l, l.bottom()));
            assert!(is_essential(&l, l.top()));
        }
    }

    #[test]
    fn pseudocomplement_sets() {
        let m3 = fixtures::m3();
        assert_eq!(pseudocomplements(&m3, e(&m3, "a")), set(&m3, &["b", "c"]));
        let b2 = fixtures::b2();
        assert_eq!(pseudocomplements(&b2, e(&b2, "x")), set(&b2, &["y"]));
        for (_, l) in fixtures::all() {
            assert_eq!(pseudocomplements(&l, l.bottom()), ElementSet::singleton(l.top()));
            for a in l.elements() {
                assert!(!pseudocomplements(&l, a).is_empty());
            }
        }
    }

    #[test]
    fn closed_and_summands() {
        let m3 = fixtures::m3();
        assert_eq!(closed_elements(&m3), m3.all());
        assert_eq!(summand_elements(&m3), m3.all());
        let c3 = fixtures::c3();
        assert_eq!(closed_elements(&c3), set(&c3, &["0", "1"]));
        assert_eq!(summand_elements(&c3), set(&c3, &["0", "1"]));
        let n5 = fixtures::n5();
        assert_eq!(summand_elements(&n5), n5.all());
        // p ≤e r, so p is not closed
        assert_eq!(closed_elements(&n5), set(&n5, &["0", "q", "r", "1"]));
    }

    #[test]
    fn closures() {
        let c3 = fixtures::c3();
        assert_eq!(essential_closures(&c3, e(&c3, "m")), set(&c3, &["1"]));
        let m3 = fixtures::m3();
        assert_eq!(essential_closures(&m3, e(&m3, "a")), set(&m3, &["a"]));
        let n5 = fixtures::n5();
        assert_eq!(essential_closures(&n5, e(&n5, "p")), set(&n5, &["r"]));
        for (_, l) in fixtures::all() {
            assert_eq!(essential_closures(&l, l.top()), ElementSet::singleton(l.top()));
        }
    }

    #[test]
    fn relative_pseudocomplement_sets() {
        let m3 = fixtures::m3();
        assert_eq!(relative_pseudocomplements(&m3, e(&m3, "a"), m3.top()).unwrap(), set(&m3, &["b", "c"]));
        let n5 = fixtures::n5();
        assert_eq!(relative_pseudocomplements(&n5, e(&n5, "p"), e(&n5, "r")).unwrap(), set(&n5, &["0"]));
        assert!(relative_pseudocomplements(&n5, e(&n5, "q"), e(&n5, "r")).is_err());
        for (_, l) in fixtures::all() {
            for h in l.elements() {
                assert_eq!(relative_pseudocomplements(&l, l.bottom(), h).unwrap(), ElementSet::singleton(h));
            }
        }
    }

    #[test]
    fn domination() {
        let c3 = fixtures::c3();
        assert!(dominates(&c3, e(&c3, "m"), c3.bottom()));
        let m3 = fixtures::m3();
        assert!(dominates(&m3, m3.top(), e(&m3, "a")));
        assert!(!dominates(&m3, m3.top(), m3.bottom()));
    }

    #[test]
    fn table_agrees_with_free_functions() {
        for (_, l) in fixtures::all() {
            let t = ElementClassTable::new(&l);
            assert_eq!(t.essentials, essentials(&l));
            assert_eq!(t.closed, closed_elements(&l));
            assert_eq!(t.summands, summand_elements(&l));
            assert_eq!(t.pseudocomplement_range, pseudocomplement_range(&l));
            for a in l.elements() {
                assert_eq!(t.closures(a), essential_closures(&l, a));
            }
            assert!(t.summands.contains(l.bottom()) && t.summands.contains(l.top()));
            assert!(t.closed.contains(l.bottom()) && t.closed.contains(l.top()));
        }
    }

    #[test]
    fn table_json_layout() {
        let c3 = fixtures::c3();
        let json = serde_json::to_string(&ElementClassTable::new(&c3)).unwrap();
        assert_eq!(json, r#"{"E":["m","1"],"C":["0","1"],"D":["0","1"],"P":{"0":["1"],"m":["0"],"1":["0"]}}"#);
        let bare = Lattice::chain(2);
        let json = serde_json::to_string(&ElementClassTable::new(&bare)).unwrap();
        assert_eq!(json, r#"{"E":[1],"C":[0,1],"D":[0,1],"P":{"0":[1],"1":[0]}}"#);
    }
}
