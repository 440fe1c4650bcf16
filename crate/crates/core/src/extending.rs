//! Extending-type properties of a finite lattice relative to a class.
//!
//! Type-1 and type-2 quantify over every pseudocomplement (resp. essential
//! closure) of an `X`-interval; the weak variants ask for one. A failing
//! verdict carries the first violating tuple in element order.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;

use crate::class::ClassSpec;
use crate::elements::{self, ElementClassTable};
use crate::error::{Error, Result};
use crate::grammar::Cursor;
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    Extending,
    Type1(ClassSpec),
    WeakType1(ClassSpec),
    Type2(ClassSpec),
    WeakType2(ClassSpec),
    QuasiContinuous,
    Q(ClassSpec),
    C1(ClassSpec),
    C3(ClassSpec),
    XQuasiContinuous(ClassSpec),
    Indecomposable,
    Uniform,
    FiniteUniformDim,
    Modular,
    /// Modular and upper continuous; the latter is automatic for finite lattices.
    Idiom,
    Distributive,
}

impl Property {
    pub fn parse(src: &str) -> Result<Self> {
        let mut cur = Cursor::new(src);
        let p = Self::parse_from(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(p)
    }

    pub(crate) fn parse_from(cur: &mut Cursor) -> Result<Self> {
        let word = cur.ident().ok_or_else(|| cur.error("expected a property"))?;
        let lower = word.to_ascii_lowercase();
        let simple = match lower.as_str() {
            "extending" => Some(Property::Extending),
            "qc" => Some(Property::QuasiContinuous),
            "indecomposable" => Some(Property::Indecomposable),
            "uniform" => Some(Property::Uniform),
            "udim" => Some(Property::FiniteUniformDim),
            "modular" => Some(Property::Modular),
            "idiom" => Some(Property::Idiom),
            "distributive" => Some(Property::Distributive),
            _ => None,
        };
        if let Some(p) = simple {
            return Ok(p);
        }
        let build: fn(ClassSpec) -> Property = match lower.as_str() {
            "type1" => Property::Type1,
            "wtype1" => Property::WeakType1,
            "type2" => Property::Type2,
            "wtype2" => Property::WeakType2,
            "q" => Property::Q,
            "c1" => Property::C1,
            "c3" => Property::C3,
            "xqc" => Property::XQuasiContinuous,
            other => return Err(cur.error(&format!("unknown property {other:?}"))),
        };
        cur.expect('(')?;
        let class = ClassSpec::parse_from(cur)?;
        cur.expect(')')?;
        Ok(build(class))
    }

    pub fn class(&self) -> Option<&ClassSpec> {
        match self {
            Property::Type1(x)
            | Property::WeakType1(x)
            | Property::Type2(x)
            | Property::WeakType2(x)
            | Property::Q(x)
            | Property::C1(x)
            | Property::C3(x)
            | Property::XQuasiContinuous(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Extending => f.write_str("extending"),
            Property::Type1(x) => write!(f, "type1({x})"),
            Property::WeakType1(x) => write!(f, "wtype1({x})"),
            Property::Type2(x) => write!(f, "type2({x})"),
            Property::WeakType2(x) => write!(f, "wtype2({x})"),
            Property::QuasiContinuous => f.write_str("qc"),
            Property::Q(x) => write!(f, "Q({x})"),
            Property::C1(x) => write!(f, "C1({x})"),
            Property::C3(x) => write!(f, "C3({x})"),
            Property::XQuasiContinuous(x) => write!(f, "xqc({x})"),
            Property::Indecomposable => f.write_str("indecomposable"),
            Property::Uniform => f.write_str("uniform"),
            Property::FiniteUniformDim => f.write_str("udim"),
            Property::Modular => f.write_str("modular"),
            Property::Idiom => f.write_str("idiom"),
            Property::Distributive => f.write_str("distributive"),
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::parse(s)
    }
}

/// Elements playing named roles in a violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub roles: Vec<(&'static str, ElementId)>,
    pub reason: &'static str,
}

impl Witness {
    fn new(reason: &'static str, roles: &[(&'static str, ElementId)]) -> Self {
        Witness { roles: roles.to_vec(), reason }
    }

    pub fn role(&self, name: &str) -> Option<ElementId> {
        self.roles.iter().find(|(r, _)| *r == name).map(|&(_, e)| e)
    }

    pub fn to_json(&self, l: &Lattice) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for &(role, e) in &self.roles {
            map.insert(role.to_string(), serde_json::Value::String(l.name(e)));
        }
        map.insert("reason".into(), self.reason.into());
        serde_json::Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyVerdict {
    fn from_witness(property: &Property, witness: Option<Witness>) -> Self {
        PropertyVerdict { property: property.clone(), holds: witness.is_none(), witness }
    }

    pub fn to_json(&self, l: &Lattice) -> serde_json::Value {
        serde_json::json!({
            "property": self.property.to_string(),
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| w.to_json(l)),
        })
    }
}

/// Per-lattice evaluation context caching the element classes and
/// `X`-interval sets.
pub struct Analysis<'a> {
    pub lattice: &'a Lattice,
    pub table: ElementClassTable<'a>,
    complement_pairs: Vec<(ElementId, ElementId)>,
    x_cache: RefCell<BTreeMap<String, ElementSet>>,
    modular: std::cell::OnceCell<bool>,
}

impl<'a> Analysis<'a> {
    pub fn new(lattice: &'a Lattice) -> Self {
        let table = ElementClassTable::new(lattice);
        let complement_pairs =
            lattice.elements().flat_map(|c| table.complements_of[c.index()].iter().map(move |d| (c, d))).collect();
        Analysis {
            lattice,
            table,
            complement_pairs,
            x_cache: RefCell::new(BTreeMap::new()),
            modular: std::cell::OnceCell::new(),
        }
    }

    pub fn is_modular(&self) -> bool {
        *self.modular.get_or_init(|| self.lattice.is_modular())
    }

    pub fn x_intervals(&self, x: &ClassSpec) -> ElementSet {
        let key = x.to_string();
        if let Some(&s) = self.x_cache.borrow().get(&key) {
            return s;
        }
        let s = x.x_intervals(self.lattice);
        self.x_cache.borrow_mut().insert(key, s);
        s
    }

    pub fn summands(&self) -> ElementSet {
        self.table.summands
    }

    pub fn evaluate(&self, property: &Property) -> PropertyVerdict {
        let witness = match property {
            Property::Extending => self.extending(),
            Property::Type1(x) => self.type1(x),
            Property::WeakType1(x) => self.weak_type1(x),
            Property::Type2(x) => self.type2(x),
            Property::WeakType2(x) => self.weak_type2(x),
            Property::QuasiContinuous => self.q(&ClassSpec::All),
            Property::Q(x) => self.q(x),
            Property::C1(x) => self.c1(x),
            Property::C3(x) => self.c3(x),
            Property::XQuasiContinuous(x) => self.c1(x).or_else(|| self.c3(x)),
            Property::Indecomposable => self.indecomposable(),
            Property::Uniform => {
                let l = self.lattice;
                l.nonzero()
                    .difference(self.table.essentials)
                    .first()
                    .map(|a| Witness::new("nonzero element is not essential", &[("a", a)]))
            }
            Property::FiniteUniformDim => None,
            Property::Modular | Property::Idiom => self.lattice.modularity_violation().map(|(a, b, c)| {
                Witness::new("b <= a but a ∧ (b ∨ c) != b ∨ (a ∧ c)", &[("a", a), ("b", b), ("c", c)])
            }),
            Property::Distributive => self.distributivity_violation(),
        };
        PropertyVerdict::from_witness(property, witness)
    }

    pub fn holds(&self, property: &Property) -> bool {
        self.evaluate(property).holds
    }

    fn extending(&self) -> Option<Witness> {
        let t = &self.table;
        self.lattice
            .elements()
            .find(|&a| t.essential_extensions[a.index()].intersection(t.summands).is_empty())
            .map(|a| Witness::new("no summand d with a ≤e d", &[("a", a)]))
    }

    fn type1(&self, x: &ClassSpec) -> Option<Witness> {
        let t = &self.table;
        self.x_intervals(x).iter().find_map(|a| {
            t.p(a)
                .difference(t.summands)
                .first()
                .map(|b| Witness::new("pseudocomplement b of a is not a summand", &[("a", a), ("b", b)]))
        })
    }

    fn weak_type1(&self, x: &ClassSpec) -> Option<Witness> {
        let t = &self.table;
        self.x_intervals(x)
            .iter()
            .find(|&a| t.p(a).intersection(t.summands).is_empty())
            .map(|a| Witness::new("no pseudocomplement of a is a summand", &[("a", a)]))
    }

    fn type2(&self, x: &ClassSpec) -> Option<Witness> {
        let t = &self.table;
        self.x_intervals(x).iter().find_map(|a| {
            t.closures(a)
                .difference(t.summands)
                .first()
                .map(|c| Witness::new("essential closure c of a is not a summand", &[("a", a), ("c", c)]))
        })
    }

    fn weak_type2(&self, x: &ClassSpec) -> Option<Witness> {
        let t = &self.table;
        self.x_intervals(x)
            .iter()
            .find(|&a| t.closures(a).intersection(t.summands).is_empty())
            .map(|a| Witness::new("no essential closure of a is a summand", &[("a", a)]))
    }

    fn q(&self, x: &ClassSpec) -> Option<Witness> {
        let l = self.lattice;
        for a in self.x_intervals(x).iter() {
            for b in l.elements().filter(|&b| l.disjoint(a, b)) {
                let split = self.complement_pairs.iter().any(|&(c, d)| l.leq(a, c) && l.leq(b, d));
                if !split {
                    return Some(Witness::new("no c ⊕ d = 1 with a <= c and b <= d", &[("a", a), ("b", b)]));
                }
            }
        }
        None
    }

    fn c1(&self, x: &ClassSpec) -> Option<Witness> {
        let t = &self.table;
        self.x_intervals(x)
            .iter()
            .find(|&a| t.essential_extensions[a.index()].intersection(t.summands).is_empty())
            .map(|a| Witness::new("no summand b with a ≤e b", &[("a", a)]))
    }

    fn c3(&self, x: &ClassSpec) -> Option<Witness> {
        let (l, t) = (self.lattice, &self.table);
        for a in self.x_intervals(x).intersection(t.summands).iter() {
            for b in t.summands.iter() {
                if l.disjoint(a, b) && !t.is_summand(l.join(a, b)) {
                    return Some(Witness::new(
                        "summands a, b with a ∧ b = 0 but a ∨ b is not a summand",
                        &[("a", a), ("b", b)],
                    ));
                }
            }
        }
        None
    }

    fn indecomposable(&self) -> Option<Witness> {
        let l = self.lattice;
        if l.is_trivial() {
            return Some(Witness::new("trivial lattice", &[]));
        }
        let proper = self.table.summands.without(l.bottom()).without(l.top());
        proper.first().map(|d| {
            let d2 = self.table.complements_of[d.index()].first().expect("summand has a complement");
            Witness::new("proper complemented pair", &[("d", d), ("complement", d2)])
        })
    }

    fn distributivity_violation(&self) -> Option<Witness> {
        let l = self.lattice;
        for a in l.elements() {
            for b in l.elements() {
                for c in l.elements() {
                    if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
                        return Some(Witness::new("a ∧ (b ∨ c) != (a ∧ b) ∨ (a ∧ c)", &[("a", a), ("b", b), ("c", c)]));
                    }
                }
            }
        }
        None
    }
}

/// Re-checks a failing verdict's witness against the definitions, computing
/// everything from scratch rather than from the cached tables.
pub fn confirms_violation(l: &Lattice, verdict: &PropertyVerdict) -> bool {
    let Some(w) = &verdict.witness else {
        return false;
    };
    let summands = elements::summand_elements(l);
    let role = |name| w.role(name);
    let in_x = |x: &ClassSpec, a: ElementId| x.member(&l.initial(a));
    let ess_summand = |a: ElementId| summands.iter().any(|d| elements::is_essential_below(l, a, d));
    let splits = |a: ElementId, b: ElementId| {
        l.elements()
            .any(|c| l.elements().any(|d| l.join(c, d) == l.top() && l.disjoint(c, d) && l.leq(a, c) && l.leq(b, d)))
    };
    match &verdict.property {
        Property::Extending => role("a").is_some_and(|a| !ess_summand(a)),
        Property::Type1(x) => match (role("a"), role("b")) {
            (Some(a), Some(b)) => in_x(x, a) && elements::pseudocomplements(l, a).contains(b) && !summands.contains(b),
            _ => false,
        },
        Property::WeakType1(x) => {
            role("a").is_some_and(|a| in_x(x, a) && elements::pseudocomplements(l, a).intersection(summands).is_empty())
        }
        Property::Type2(x) => match (role("a"), role("c")) {
            (Some(a), Some(c)) => {
                in_x(x, a)
                    && elements::is_essential_below(l, a, c)
                    && elements::is_closed(l, c)
                    && !summands.contains(c)
            }
            _ => false,
        },
        Property::WeakType2(x) => role("a")
            .is_some_and(|a| in_x(x, a) && elements::essential_closures(l, a).intersection(summands).is_empty()),
        Property::QuasiContinuous | Property::Q(_) => match (role("a"), role("b")) {
            (Some(a), Some(b)) => {
                let x = verdict.property.class().unwrap_or(&ClassSpec::All);
                in_x(x, a) && l.disjoint(a, b) && !splits(a, b)
            }
            _ => false,
        },
        Property::C1(x) => role("a").is_some_and(|a| in_x(x, a) && !ess_summand(a)),
        Property::C3(x) => match (role("a"), role("b")) {
            (Some(a), Some(b)) => {
                in_x(x, a)
                    && summands.contains(a)
                    && summands.contains(b)
                    && l.disjoint(a, b)
                    && !summands.contains(l.join(a, b))
            }
            _ => false,
        },
        Property::XQuasiContinuous(x) => {
            let c1 = PropertyVerdict { property: Property::C1(x.clone()), ..verdict.clone() };
            let c3 = PropertyVerdict { property: Property::C3(x.clone()), ..verdict.clone() };
            confirms_violation(l, &c1) || confirms_violation(l, &c3)
        }
        Property::Indecomposable => match (role("d"), role("complement")) {
            (Some(d), Some(e)) => d != l.bottom() && d != l.top() && l.disjoint(d, e) && l.join(d, e) == l.top(),
            _ => l.is_trivial(),
        },
        Property::Uniform => role("a").is_some_and(|a| a != l.bottom() && !elements::is_essential(l, a)),
        Property::FiniteUniformDim => false,
        Property::Modular | Property::Idiom | Property::Distributive => match (role("a"), role("b"), role("c")) {
            (Some(a), Some(b), Some(c)) => {
                if matches!(verdict.property, Property::Distributive) {
                    l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))
                } else {
                    l.leq(b, a) && l.meet(a, l.join(b, c)) != l.join(b, l.meet(a, c))
                }
            }
            _ => false,
        },
    }
}

/// Convenience wrapper for one-off checks.
pub fn check(l: &Lattice, property: &Property) -> PropertyVerdict {
    Analysis::new(l).evaluate(property)
}

pub fn is_indecomposable(l: &Lattice) -> bool {
    check(l, &Property::Indecomposable).holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn holds(l: &Lattice, p: &str) -> bool {
        let verdict = check(l, &Property::parse(p).unwrap());
        if !verdict.holds {
            assert!(confirms_violation(l, &verdict), "{p}: witness does not reproduce");
        }
        verdict.holds
    }

    #[test]
    fn extending_examples() {
        for l in [fixtures::b2(), fixtures::m3(), fixtures::c3()] {
            assert!(holds(&l, "extending"));
            assert!(holds(&l, "type1(all)"));
            assert!(holds(&l, "type2(all)"));
            assert!(holds(&l, "qc"));
            assert!(holds(&l, "xqc(all)"));
        }
    }

    #[test]
    fn zero_class_is_vacuous() {
        for (_, l) in fixtures::all() {
            for p in ["type1(zero)", "wtype1(zero)", "type2(zero)", "wtype2(zero)", "Q(zero)", "C1(zero)", "C3(zero)"] {
                assert!(holds(&l, p), "{p}");
            }
        }
    }

    #[test]
    fn pentagon() {
        let n5 = fixtures::n5();
        let t = ElementClassTable::new(&n5);
        let (p, r) = (n5.element("p").unwrap(), n5.element("r").unwrap());
        assert_eq!(t.closures(p), ElementSet::singleton(r));
        assert!(t.is_summand(r));
        // every element has a summand essential extension in N5
        assert!(holds(&n5, "extending"));
        assert!(holds(&n5, "type2(all)"));
        assert!(!holds(&n5, "modular"));
        assert!(!holds(&n5, "distributive"));
    }

    #[test]
    fn indecomposability() {
        assert!(is_indecomposable(&fixtures::c3()));
        assert!(!is_indecomposable(&fixtures::b2()));
        assert!(!is_indecomposable(&fixtures::m3()));
        assert!(!is_indecomposable(&Lattice::trivial()));
        assert!(is_indecomposable(&fixtures::c2()));
    }

    #[test]
    fn failing_verdicts_carry_witnesses() {
        // 0 < a, b < m < 1: a two-atom block under a top chain
        let l = Lattice::from_covers(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let verdict = check(&l, &Property::parse("type1(all)").unwrap());
        assert!(!verdict.holds);
        assert!(confirms_violation(&l, &verdict));
        let w = verdict.witness.unwrap();
        assert_eq!(w.roles, vec![("a", ElementId::new(1)), ("b", ElementId::new(2))]);
        assert!(!holds(&l, "extending"));
        assert!(!holds(&l, "qc"));
        assert!(holds(&l, "C3(all)"));
    }

    #[test]
    fn property_grammar() {
        for src in [
            "extending",
            "type1(simple)",
            "wtype2(e(uniform))",
            "Q(sum(simple,uniform))",
            "C1(all)",
            "C3(zero)",
            "xqc(all)",
            "qc",
            "indecomposable",
            "idiom",
        ] {
            assert_eq!(Property::parse(src).unwrap().to_string(), src);
        }
        assert!(Property::parse("type1").is_err());
        assert!(Property::parse("nonsense").is_err());
    }
}
