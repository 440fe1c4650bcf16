//! Executable statements checked over corpora of finite lattices.
//!
//! Each registered check is an implication or equivalence between
//! properties, evaluated on every lattice its scope admits and, for
//! class-parameterized checks, for every admissible class binding.
//! Class-level hypotheses (inclusions, closure under initial intervals or
//! quotients, `X = X^e`) cannot be decided in general; they are tested on
//! a sample made of the corpus lattices and all of their intervals, and a
//! binding that fails on the sample is skipped and listed in the report.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canon::{canonical_form, CanonicalForm};
use crate::class::ClassSpec;
use crate::corpus::{enumerate_up_to, Corpus};
use crate::elements::{self, is_essential_in};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::extending::{Analysis, Property};
use crate::io;
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Any,
    /// Finite modular lattices, which are exactly the finite idioms.
    Modular,
    ModularIndecomposable,
}

impl Scope {
    pub fn admits(self, an: &Analysis) -> bool {
        match self {
            Scope::Any => true,
            Scope::Modular => an.is_modular(),
            Scope::ModularIndecomposable => an.is_modular() && an.holds(&Property::Indecomposable),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::Any => "any",
            Scope::Modular => "modular",
            Scope::ModularIndecomposable => "modular+indecomposable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    AlwaysHolds,
    Exploratory,
}

impl Expected {
    pub fn name(self) -> &'static str {
        match self {
            Expected::AlwaysHolds => "always-holds",
            Expected::Exploratory => "exploratory",
        }
    }
}

/// Class hypotheses attached to a check's bindings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Params {
    None,
    One(ClassHyp),
    Two(PairHyp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ClassHyp {
    Any,
    ClosedUnderInitial,
    EssentiallyClosed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PairHyp {
    Any,
    /// First class contained in the second.
    Subset,
    /// Second class closed under initial intervals.
    SecondInitial,
    /// Second class closed under initial intervals or under quotients.
    SecondInitialOrQuotient,
}

type Eval = fn(&Analysis, &[ClassSpec]) -> Option<Value>;

pub struct TheoremCheck {
    pub id: &'static str,
    pub statement: &'static str,
    pub scope: Scope,
    pub expected: Expected,
    /// Why the statement says little at finite scale, when it doesn't.
    pub degenerate: Option<&'static str>,
    params: Params,
    eval: Eval,
}

impl TheoremCheck {
    pub fn arity(&self) -> usize {
        match self.params {
            Params::None => 0,
            Params::One(_) => 1,
            Params::Two(_) => 2,
        }
    }
}

impl std::fmt::Debug for TheoremCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TheoremCheck")
            .field("id", &self.id)
            .field("scope", &self.scope)
            .field("expected", &self.expected)
            .finish()
    }
}

// ---------------------------------------------------------------------------
// witness helpers

fn roles(l: &Lattice, rs: &[(&str, ElementId)]) -> Value {
    Value::Object(rs.iter().map(|&(r, e)| (r.to_string(), Value::String(l.name(e)))).collect())
}

fn flags(fs: &[(String, bool)]) -> Value {
    Value::Object(fs.iter().map(|(k, v)| (k.clone(), Value::Bool(*v))).collect())
}

/// All flags agree, or a witness listing them.
fn equivalent(fs: Vec<(String, bool)>) -> Option<Value> {
    let first = fs.first().map(|f| f.1);
    if fs.iter().all(|f| Some(f.1) == first) {
        None
    } else {
        Some(flags(&fs))
    }
}

fn implies(hyp: (String, bool), concl: (String, bool)) -> Option<Value> {
    (hyp.1 && !concl.1).then(|| flags(&[hyp, concl]))
}

fn holds(an: &Analysis, p: Property) -> (String, bool) {
    let v = an.holds(&p);
    (p.to_string(), v)
}

fn all_of(parts: Vec<(String, bool)>) -> (String, bool) {
    let names: Vec<String> = parts.iter().map(|p| p.0.clone()).collect();
    (names.join(" and "), parts.iter().all(|p| p.1))
}

fn e(x: &ClassSpec) -> ClassSpec {
    x.clone().essential_hull()
}

fn sum2(x: &ClassSpec, y: &ClassSpec) -> ClassSpec {
    ClassSpec::Sum(vec![x.clone(), y.clone()])
}

fn prod2(x: &ClassSpec, y: &ClassSpec) -> ClassSpec {
    ClassSpec::Product(vec![x.clone(), y.clone()])
}

fn triples(l: &Lattice) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> + '_ {
    l.elements().flat_map(move |a| l.elements().flat_map(move |b| l.elements().map(move |c| (a, b, c))))
}

fn pairs(l: &Lattice) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
    l.elements().flat_map(move |a| l.elements().map(move |b| (a, b)))
}

/// Closed elements of `a/0`, as elements of the whole lattice.
fn closed_below(an: &Analysis, a: ElementId) -> ElementSet {
    let (l, t) = (an.lattice, &an.table);
    l.down_set(a)
        .iter()
        .filter(|&b| t.essential_extensions[b.index()].intersection(l.down_set(a)) == ElementSet::singleton(b))
        .collect()
}

/// Evaluates `p` on the initial interval `a/0`.
fn holds_below(l: &Lattice, a: ElementId, p: &Property) -> bool {
    let sub = l.initial(a);
    Analysis::new(&sub).holds(p)
}

/// Quasi-continuity straight from the definition, without the
/// complement table used by [`Analysis`].
fn quasi_continuous_raw(l: &Lattice) -> bool {
    pairs(l)
        .filter(|&(a, b)| l.disjoint(a, b))
        .all(|(a, b)| pairs(l).any(|(c, d)| l.join(c, d) == l.top() && l.disjoint(c, d) && l.leq(a, c) && l.leq(b, d)))
}

// ---------------------------------------------------------------------------
// evaluators

fn r1(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let l = an.lattice;
    triples(l)
        .find(|&(a, b, c)| l.disjoint(a, b) && l.disjoint(l.join(a, b), c) && !l.disjoint(a, l.join(b, c)))
        .map(|(a, b, c)| roles(l, &[("a", a), ("b", b), ("c", c)]))
}

fn r2(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    pairs(l)
        .find(|&(a, b)| {
            let lhs = t.p(a).contains(b);
            let rhs = t.closed.contains(b) && l.disjoint(a, b) && t.essentials.contains(l.join(a, b));
            lhs != rhs
        })
        .map(|(a, b)| roles(l, &[("a", a), ("b", b)]))
}

fn r3(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    pairs(l)
        .find(|&(a, b)| {
            let lhs = t.p(a).contains(b);
            let j = l.join(a, b);
            let rhs = l.disjoint(a, b) && is_essential_in(l, j, b, l.top()).expect("b <= a ∨ b <= 1");
            lhs != rhs
        })
        .map(|(a, b)| roles(l, &[("a", a), ("b", b)]))
}

fn r4(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let l = an.lattice;
    l.elements().find(|&a| an.table.closures(a).is_empty()).map(|a| roles(l, &[("a", a)]))
}

fn r5(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    triples(l)
        .find(|&(a, b, c)| t.ess(a, c) && !t.ess(l.meet(a, b), l.meet(c, b)))
        .map(|(a, b, c)| roles(l, &[("a", a), ("b", b), ("c", c)]))
}

fn r6(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    triples(l)
        .find(|&(a, b, c)| t.ess(a, c) && l.disjoint(c, b) && !t.ess(l.join(a, b), l.join(c, b)))
        .map(|(a, b, c)| roles(l, &[("a", a), ("b", b), ("c", c)]))
}

fn r7(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    pairs(l)
        .find(|&(a, b)| t.ess(l.meet(a, b), b) && !t.ess(a, l.join(a, b)))
        .map(|(a, b)| roles(l, &[("a", a), ("b", b)]))
}

fn r8(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let t = &an.table;
    t.summands.difference(t.closed).first().map(|d| roles(an.lattice, &[("d", d)]))
}

fn r9(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    for a in l.elements() {
        for b in t.p(a).iter() {
            for c in t.p(b).iter() {
                if l.leq(a, c) && !t.ess(a, c) {
                    return Some(roles(l, &[("a", a), ("b", b), ("c", c)]));
                }
            }
        }
    }
    None
}

fn r10(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![
        holds(an, Property::Extending),
        holds(an, Property::Type1(ClassSpec::All)),
        holds(an, Property::Type2(ClassSpec::All)),
    ])
}

fn r11(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    implies(holds(an, Property::Type2(x[0].clone())), holds(an, Property::WeakType1(x[0].clone())))
}

fn r12(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    implies(holds(an, Property::WeakType1(xy[1].clone())), holds(an, Property::WeakType1(xy[0].clone())))
}

fn r13(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::WeakType1(x[0].clone())), holds(an, Property::WeakType1(e(&x[0])))])
}

fn r14(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Type2(e(&x[0]))), holds(an, Property::WeakType2(e(&x[0])))])
}

fn r15(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Type1(e(&x[0]))), holds(an, Property::Type1(x[0].clone()))])
}

fn r16(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Type2(x[0].clone())), holds(an, Property::WeakType2(e(&x[0])))])
}

fn r17(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::WeakType2(ClassSpec::All)), holds(an, Property::Extending)])
}

fn r18(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let l = an.lattice;
    let atoms = l.upper_covers(l.bottom());
    let uniform = ClassSpec::Uniform.x_intervals(l);
    let split =
        atoms.iter().find_map(|s| an.table.complements_of[s.index()].intersection(uniform).first().map(|u| (s, u)))?;
    let concl = holds(an, Property::WeakType1(ClassSpec::All));
    (!concl.1).then(|| {
        let mut w = roles(l, &[("s", split.0), ("u", split.1)]);
        w[concl.0] = Value::Bool(false);
        w
    })
}

fn r19(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    for a in t.closed.iter() {
        if let Some(b) = closed_below(an, a).difference(t.closed).first() {
            return Some(roles(l, &[("a", a), ("b", b)]));
        }
    }
    None
}

fn r20(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    for a in l.elements() {
        for b in t.complements_of[a.index()].iter() {
            for c in l.down_set(a).iter() {
                let relative = elements::relative_pseudocomplements(l, c, a).expect("c <= a");
                for d in l.down_set(a).iter() {
                    let lhs = relative.contains(d);
                    let rhs = t.p(c).contains(l.join(d, b));
                    if lhs != rhs {
                        return Some(roles(l, &[("a", a), ("b", b), ("c", c), ("d", d)]));
                    }
                }
            }
        }
    }
    None
}

fn heredity(an: &Analysis, p: Property, over: ElementSet) -> Option<Value> {
    let l = an.lattice;
    let whole = an.holds(&p);
    let failing = over.iter().find(|&a| !holds_below(l, a, &p));
    match (whole, failing) {
        (true, Some(a)) => {
            let mut w = roles(l, &[("a", a)]);
            w[format!("{p} on L")] = Value::Bool(true);
            w[format!("{p} on a/0")] = Value::Bool(false);
            Some(w)
        }
        (false, None) => Some(json!({ format!("{p} on L"): false, "intervals": "all hold" })),
        _ => None,
    }
}

fn r21(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    heredity(an, Property::Type1(x[0].clone()), an.summands())
}

fn r21_literal(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    heredity(an, Property::Type1(x[0].clone()), an.lattice.all())
}

fn r22(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    heredity(an, Property::Type2(x[0].clone()), an.table.closed)
}

fn r23(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    for c in t.closed.iter() {
        for a in t.essentials.intersection(l.up_set(c)).without(c).iter() {
            if !is_essential_in(l, a, c, l.top()).expect("c <= a") {
                return Some(roles(l, &[("c", c), ("a", a)]));
            }
        }
    }
    None
}

/// Closed `a` such that some `c` essential in `1/a` has `c/a` in `x`, but `a`
/// is not a summand.
fn closed_quotient_condition(an: &Analysis, x: &ClassSpec) -> Option<ElementId> {
    let (l, t) = (an.lattice, &an.table);
    t.closed.difference(t.summands).iter().find(|&a| {
        l.up_set(a).iter().any(|c| {
            is_essential_in(l, c, a, l.top()).expect("a <= c") && x.member(&l.interval(a, c).expect("a <= c").lattice)
        })
    })
}

fn r24(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let lhs = holds(an, Property::Type1(x[0].clone()));
    let bad = closed_quotient_condition(an, &x[0]);
    (lhs.1 == bad.is_some()).then(|| {
        let mut w = json!({ lhs.0: lhs.1, "quotient condition": bad.is_none() });
        if let Some(a) = bad {
            w["a"] = Value::String(an.lattice.name(a));
        }
        w
    })
}

fn r25(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    let lhs = holds(an, Property::Type1(ClassSpec::FiniteUniformDim));
    let bad = t
        .closed
        .difference(t.summands)
        .iter()
        .find(|&a| ClassSpec::FiniteUniformDim.member(&l.interval(a, l.top()).expect("a <= 1").lattice));
    (lhs.1 == bad.is_some()).then(|| json!({ lhs.0: lhs.1, "closed with 1/a in udim are summands": bad.is_none() }))
}

fn r26(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![
        holds(an, Property::Uniform),
        holds(an, Property::Type1(ClassSpec::Compact)),
        holds(an, Property::Type2(ClassSpec::Compact)),
    ])
}

fn r27(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Type1(sum2(x, y))),
        all_of(vec![holds(an, Property::Type1(x.clone())), holds(an, Property::Type1(y.clone()))]),
    ])
}

fn r28(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Type2(sum2(x, y))),
        all_of(vec![holds(an, Property::Type2(x.clone())), holds(an, Property::Type2(y.clone()))]),
    ])
}

fn r29(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let d = x[0].clone().direct_sum_power();
    equivalent(vec![holds(an, Property::Type1(x[0].clone())), holds(an, Property::Type1(d.clone()))])
        .or_else(|| equivalent(vec![holds(an, Property::Type2(x[0].clone())), holds(an, Property::Type2(d))]))
}

fn r30(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let (u, u1) = (ClassSpec::FiniteUniformDim, ClassSpec::Uniform);
    equivalent(vec![holds(an, Property::Type1(u.clone())), holds(an, Property::Type1(u1.clone()))])
        .or_else(|| equivalent(vec![holds(an, Property::Type2(u)), holds(an, Property::Type2(u1))]))
}

fn r31(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    let l = an.lattice;
    let w1 = Property::WeakType1(ClassSpec::Uniform);
    let wu = Property::WeakType1(ClassSpec::FiniteUniformDim);
    let hyp = an.holds(&w1) && an.summands().iter().all(|d| holds_below(l, d, &w1));
    if !hyp {
        return None;
    }
    if !an.holds(&wu) {
        return Some(json!({ "hypothesis": true, wu.to_string(): false }));
    }
    an.summands().iter().find(|&d| !holds_below(l, d, &wu)).map(|d| {
        let mut w = roles(l, &[("d", d)]);
        w[format!("{wu} on d/0")] = Value::Bool(false);
        w
    })
}

fn r32(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Type2(prod2(x, y))),
        all_of(vec![holds(an, Property::Type2(x.clone())), holds(an, Property::Type2(y.clone()))]),
    ])
}

fn r33(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Type1(prod2(x, y))),
        all_of(vec![holds(an, Property::Type1(x.clone())), holds(an, Property::Type1(y.clone()))]),
    ])
}

fn r34(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Type2(ClassSpec::FiniteLength)), holds(an, Property::Type2(ClassSpec::Simple))])
}

fn r35(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Type1(ClassSpec::Simple)), holds(an, Property::Extending)])
}

fn c1_c3(an: &Analysis) -> (String, bool) {
    all_of(vec![holds(an, Property::C1(ClassSpec::All)), holds(an, Property::C3(ClassSpec::All))])
}

fn r36(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    implies(c1_c3(an), holds(an, Property::QuasiContinuous))
}

fn r36_converse(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    implies(holds(an, Property::QuasiContinuous), c1_c3(an))
}

fn r37(an: &Analysis, _: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![
        holds(an, Property::Q(ClassSpec::All)),
        ("quasi-continuous (direct)".into(), quasi_continuous_raw(an.lattice)),
    ])
}

fn r38(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let l = an.lattice;
    let q = Property::Q(x[0].clone());
    if !an.holds(&q) {
        return None;
    }
    an.summands().iter().find(|&a| !holds_below(l, a, &q)).map(|a| {
        let mut w = roles(l, &[("a", a)]);
        w[format!("{q} on a/0")] = Value::Bool(false);
        w
    })
}

fn r39(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    if !an.holds(&Property::Q(x[0].clone())) {
        return None;
    }
    for a in an.x_intervals(&x[0]).iter() {
        for b in t.p(a).iter() {
            let found = t.complements_of[b.index()].iter().any(|a2| t.ess(a, a2));
            if !found {
                return Some(roles(l, &[("a", a), ("b", b)]));
            }
        }
    }
    None
}

fn r39_cor(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    an.x_intervals(&x[0])
        .iter()
        .find(|&a| !t.p(a).iter().any(|b| t.complements_of[b.index()].iter().any(|a2| t.ess(a, a2))))
        .map(|a| roles(l, &[("a", a)]))
}

fn r40(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let (l, t) = (an.lattice, &an.table);
    let lhs = holds(an, Property::C3(x[0].clone()));
    let rhs = an.x_intervals(&x[0]).intersection(t.summands).iter().all(|a| {
        t.summands
            .iter()
            .filter(|&b| l.disjoint(a, b))
            .all(|b| t.complements_of[a.index()].iter().any(|b2| l.leq(b, b2)))
    });
    equivalent(vec![lhs, ("complement of a above every disjoint summand b".into(), rhs)])
}

fn r41(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    implies(
        holds(an, Property::Q(x[0].clone())),
        all_of(vec![holds(an, Property::Type1(x[0].clone())), holds(an, Property::C1(x[0].clone()))]),
    )
}

fn r42(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    implies(holds(an, Property::Q(x[0].clone())), holds(an, Property::XQuasiContinuous(x[0].clone())))
}

fn r43(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    let x = &x[0];
    equivalent(vec![
        holds(an, Property::Q(x.clone())),
        all_of(vec![holds(an, Property::XQuasiContinuous(x.clone())), holds(an, Property::Type1(x.clone()))]),
        all_of(vec![
            holds(an, Property::Type1(x.clone())),
            holds(an, Property::Type2(x.clone())),
            holds(an, Property::C3(x.clone())),
        ]),
    ])
}

fn r44(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    implies(holds(an, Property::Q(xy[1].clone())), holds(an, Property::Q(xy[0].clone())))
}

fn r45(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Q(sum2(x, y))),
        all_of(vec![holds(an, Property::Q(x.clone())), holds(an, Property::Q(y.clone()))]),
    ])
}

fn r46(an: &Analysis, x: &[ClassSpec]) -> Option<Value> {
    equivalent(vec![holds(an, Property::Q(x[0].clone())), holds(an, Property::Q(x[0].clone().direct_sum_power()))])
}

fn r47(an: &Analysis, xy: &[ClassSpec]) -> Option<Value> {
    let (x, y) = (&xy[0], &xy[1]);
    equivalent(vec![
        holds(an, Property::Q(e(&sum2(x, y)))),
        all_of(vec![holds(an, Property::Q(e(x))), holds(an, Property::Q(e(y)))]),
    ])
}

// ---------------------------------------------------------------------------
// registry

const U_ALL: &str = "every finite lattice has finite uniform dimension, so this class is all lattices";
const G_ALL: &str = "finite lattices are compactly generated and compact, so this class is all lattices";
const LF_ALL: &str = "every finite lattice has finite length, so this class is all lattices";

macro_rules! check {
    ($id:expr, $scope:ident, $params:expr, $eval:expr, $stmt:expr) => {
        check!($id, $scope, $params, $eval, $stmt, None, AlwaysHolds)
    };
    ($id:expr, $scope:ident, $params:expr, $eval:expr, $stmt:expr, $degen:expr) => {
        check!($id, $scope, $params, $eval, $stmt, $degen, AlwaysHolds)
    };
    ($id:expr, $scope:ident, $params:expr, $eval:expr, $stmt:expr, $degen:expr, $exp:ident) => {
        TheoremCheck {
            id: $id,
            statement: $stmt,
            scope: Scope::$scope,
            expected: Expected::$exp,
            degenerate: $degen,
            params: $params,
            eval: $eval,
        }
    };
}

use ClassHyp as H;
use PairHyp as PH;

pub fn registry() -> &'static [TheoremCheck] {
    static REGISTRY: std::sync::OnceLock<Vec<TheoremCheck>> = std::sync::OnceLock::new();
    REGISTRY.get_or_init(|| {
        let one = Params::One(H::Any);
        let two = Params::Two(PH::Any);
        vec![
            check!("R1", Modular, Params::None, r1, "a∧b=0 and (a∨b)∧c=0 imply a∧(b∨c)=0"),
            check!("R2", Modular, Params::None, r2, "b∈P(a) iff b∈C(L), a∧b=0 and a∨b essential"),
            check!("R3", Modular, Params::None, r3, "b∈P(a) iff a∧b=0 and a∨b essential in 1/b"),
            check!("R4", Modular, Params::None, r4, "every element has an essential closure"),
            check!("R5", Any, Params::None, r5, "a ≤e c implies a∧b ≤e c∧b"),
            check!("R6", Modular, Params::None, r6, "a ≤e c and c∧b=0 imply a∨b ≤e c∨b"),
            check!("R7", Modular, Params::None, r7, "a∧b ≤e b implies a ≤e a∨b"),
            check!("R8", Modular, Params::None, r8, "D(L) ⊆ C(L)"),
            check!("R9", Modular, Params::None, r9, "b∈P(a), c∈P(b), a≤c imply a ≤e c"),
            check!("R10", Modular, Params::None, r10, "extending iff type1(all) iff type2(all)"),
            check!("R11", Modular, one, r11, "type2(X) implies wtype1(X)"),
            check!("R12", Any, Params::Two(PH::Subset), r12, "X ⊆ Y: wtype1(Y) implies wtype1(X)"),
            check!("R13", Modular, one, r13, "wtype1(X) iff wtype1(e(X))"),
            check!("R14", Modular, one, r14, "type2(e(X)) iff wtype2(e(X))"),
            check!("R15", Modular, one, r15, "type1(e(X)) iff type1(X)"),
            check!("R16", Modular, one, r16, "type2(X) iff wtype2(e(X))"),
            check!("R17", Modular, Params::None, r17, "wtype2(all) iff extending"),
            check!("R18", Modular, Params::None, r18, "1 = s⊕u with s an atom and u/0 uniform implies wtype1(all)"),
            check!("R19", Modular, Params::None, r19, "a∈C(L) and b closed in a/0 imply b∈C(L)"),
            check!("R20", Modular, Params::None, r20, "1=a⊕b, c,d≤a: d relative pseudocomplement of c in a/0 iff d∨b∈P(c)"),
            check!("R21", Modular, one, r21, "type1(X) iff a/0 is type1(X) for every a∈D(L)"),
            check!(
                "R21-literal",
                Modular,
                one,
                r21_literal,
                "type1(X) iff a/0 is type1(X) for every a∈L",
                None,
                Exploratory
            ),
            check!("R22", Modular, one, r22, "type2(X) iff c/0 is type2(X) for every c∈C(L)"),
            check!("R23", Modular, Params::None, r23, "c∈C(L), a>c, a∈E(L) imply a essential in 1/c"),
            check!(
                "R24",
                Modular,
                Params::One(H::ClosedUnderInitial),
                r24,
                "X closed under initial intervals: type1(X) iff every closed a with some c essential in 1/a, c/a∈X, is in D(L)"
            ),
            check!(
                "R25",
                Modular,
                Params::None,
                r25,
                "type1(udim) iff every closed a with 1/a in udim is in D(L)",
                Some(U_ALL)
            ),
            check!(
                "R26",
                ModularIndecomposable,
                Params::None,
                r26,
                "uniform iff type1(compactcls) iff type2(compactcls)",
                Some(G_ALL)
            ),
            check!("R27", Modular, two, r27, "type1(sum(X,Y)) iff type1(X) and type1(Y)"),
            check!("R28", Modular, two, r28, "type2(sum(X,Y)) iff type2(X) and type2(Y)"),
            check!("R29", Modular, one, r29, "type1(X) iff type1(dsum(X)); same for type2"),
            check!(
                "R30",
                Modular,
                Params::None,
                r30,
                "type1(udim) iff type1(uniform); same for type2",
                Some(U_ALL)
            ),
            check!(
                "R31",
                Modular,
                Params::None,
                r31,
                "L and every d/0 (d∈D(L)) wtype1(uniform) imply the same for wtype1(udim)"
            ),
            check!(
                "R32",
                Modular,
                Params::Two(PH::SecondInitialOrQuotient),
                r32,
                "Y closed under initial intervals or quotients: type2(prod(X,Y)) iff type2(X) and type2(Y)"
            ),
            check!(
                "R33",
                Modular,
                Params::Two(PH::SecondInitial),
                r33,
                "Y closed under initial intervals: type1(prod(X,Y)) iff type1(X) and type1(Y)"
            ),
            check!(
                "R34",
                Modular,
                Params::None,
                r34,
                "type2(flen) iff type2(simple)",
                Some(LF_ALL)
            ),
            check!("R35", Modular, Params::None, r35, "type1(simple) iff extending"),
            check!("R36", Modular, Params::None, r36, "C1(all) and C3(all) imply qc"),
            check!("R36-converse", Modular, Params::None, r36_converse, "qc implies C1(all) and C3(all)"),
            check!("R37", Any, Params::None, r37, "Q(all) iff quasi-continuous"),
            check!("R38", Modular, one, r38, "Q(X) and a∈D(L) imply a/0 satisfies Q(X)"),
            check!(
                "R39",
                Modular,
                one,
                r39,
                "Q(X), a/0∈X, b∈P(a) imply 1 = a'⊕b for some a' with a ≤e a'"
            ),
            check!(
                "R39-cor",
                Modular,
                one,
                r39_cor,
                "a/0∈X implies 1 = a'⊕b for some b∈P(a) and a ≤e a'",
                None,
                Exploratory
            ),
            check!(
                "R40",
                Modular,
                one,
                r40,
                "C3(X) iff for summands a,b with a/0∈X, a∧b=0 some complement of a lies above b"
            ),
            check!("R41", Modular, one, r41, "Q(X) implies type1(X) and C1(X)"),
            check!("R42", Modular, one, r42, "Q(X) implies xqc(X)"),
            check!(
                "R43",
                Modular,
                Params::One(H::EssentiallyClosed),
                r43,
                "X = e(X): Q(X) iff xqc(X) and type1(X) iff type1(X), type2(X) and C3(X)"
            ),
            check!("R44", Any, Params::Two(PH::Subset), r44, "X ⊆ Y: Q(Y) implies Q(X)"),
            check!("R45", Modular, two, r45, "Q(sum(X,Y)) iff Q(X) and Q(Y)"),
            check!("R46", Modular, one, r46, "Q(X) iff Q(dsum(X))"),
            check!("R47", Modular, two, r47, "Q(e(sum(X,Y))) iff Q(e(X)) and Q(e(Y))"),
        ]
    })
}

pub fn lookup(id: &str) -> Option<&'static TheoremCheck> {
    registry().iter().find(|c| c.id.eq_ignore_ascii_case(id))
}

/// Resolves a selection; `all` expands to the whole registry.
pub fn select(ids: &[String]) -> Result<Vec<&'static TheoremCheck>> {
    let mut out: Vec<&'static TheoremCheck> = Vec::new();
    for id in ids {
        let id = id.trim();
        if id.eq_ignore_ascii_case("all") {
            out.extend(registry().iter());
            continue;
        }
        out.push(lookup(id).ok_or_else(|| Error::UnknownCheckId(id.to_string()))?);
    }
    let mut seen = BTreeSet::new();
    out.retain(|c| seen.insert(c.id));
    Ok(out)
}

// ---------------------------------------------------------------------------
// class bindings and their sampled hypotheses

#[derive(Clone, Debug)]
pub struct Bindings {
    pub classes: Vec<ClassSpec>,
}

impl Default for Bindings {
    fn default() -> Self {
        Bindings {
            classes: vec![
                ClassSpec::All,
                ClassSpec::Simple,
                ClassSpec::Uniform,
                ClassSpec::Simple.essential_hull(),
                ClassSpec::Sum(vec![ClassSpec::Simple, ClassSpec::Uniform]),
            ],
        }
    }
}

impl Bindings {
    pub fn with_extra(mut self, extra: impl IntoIterator<Item = ClassSpec>) -> Self {
        for x in extra {
            if !self.classes.contains(&x) {
                self.classes.push(x);
            }
        }
        self
    }
}

/// Corpus lattices and all their intervals, one per isomorphism type.
pub struct ClassSample {
    lattices: Vec<Lattice>,
}

impl ClassSample {
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let mut by_form: BTreeMap<CanonicalForm, Lattice> = BTreeMap::new();
        for l in corpus.lattices() {
            for a in l.elements() {
                for b in l.up_set(a).iter() {
                    let iv = l.interval(a, b).expect("a <= b").lattice.without_names();
                    by_form.entry(canonical_form(&iv)).or_insert(iv);
                }
            }
        }
        ClassSample { lattices: by_form.into_values().collect() }
    }

    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    pub fn subset(&self, x: &ClassSpec, y: &ClassSpec) -> bool {
        self.lattices.iter().all(|l| !x.member(l) || y.member(l))
    }

    pub fn closed_under_initial(&self, x: &ClassSpec) -> bool {
        self.lattices.iter().filter(|l| x.member(l)).all(|l| l.elements().all(|a| x.member(&l.initial(a))))
    }

    pub fn closed_under_quotients(&self, x: &ClassSpec) -> bool {
        self.lattices
            .iter()
            .filter(|l| x.member(l))
            .all(|l| l.elements().all(|a| x.member(&l.interval(a, l.top()).expect("a <= 1").lattice)))
    }

    pub fn essentially_closed(&self, x: &ClassSpec) -> bool {
        let hull = x.clone().essential_hull();
        self.lattices.iter().all(|l| x.member(l) == hull.member(l))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Skipped {
    pub binding: Vec<String>,
    pub reason: String,
}

fn binding_plan(
    check: &TheoremCheck,
    bindings: &Bindings,
    sample: &ClassSample,
) -> (Vec<Vec<ClassSpec>>, Vec<Skipped>) {
    let mut run = Vec::new();
    let mut skipped = Vec::new();
    let mut consider = |binding: Vec<ClassSpec>, failed: Option<&str>| match failed {
        None => run.push(binding),
        Some(reason) => skipped
            .push(Skipped { binding: binding.iter().map(ToString::to_string).collect(), reason: reason.to_string() }),
    };
    match check.params {
        Params::None => consider(Vec::new(), None),
        Params::One(hyp) => {
            for x in &bindings.classes {
                let failed = match hyp {
                    H::Any => None,
                    H::ClosedUnderInitial => {
                        (!sample.closed_under_initial(x)).then_some("not closed under initial intervals on the sample")
                    }
                    H::EssentiallyClosed => {
                        (!sample.essentially_closed(x)).then_some("X differs from e(X) on the sample")
                    }
                };
                consider(vec![x.clone()], failed);
            }
        }
        Params::Two(hyp) => {
            for x in &bindings.classes {
                for y in &bindings.classes {
                    let failed = match hyp {
                        PH::Any => None,
                        PH::Subset => (!sample.subset(x, y)).then_some("X ⊄ Y on the sample"),
                        PH::SecondInitial => (!sample.closed_under_initial(y))
                            .then_some("Y not closed under initial intervals on the sample"),
                        PH::SecondInitialOrQuotient => (!sample.closed_under_initial(y)
                            && !sample.closed_under_quotients(y))
                        .then_some("Y closed under neither initial intervals nor quotients on the sample"),
                    };
                    consider(vec![x.clone(), y.clone()], failed);
                }
            }
        }
    }
    (run, skipped)
}

// ---------------------------------------------------------------------------
// running

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Violation {
    /// Canonical form, hex encoded.
    pub lattice: String,
    pub binding: Vec<String>,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub id: String,
    pub expected: String,
    pub scope: String,
    pub scope_count: usize,
    pub tested: usize,
    pub violations: Vec<Violation>,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<Skipped>,
    pub ms: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub corpus: String,
    pub checks: Vec<CheckReport>,
}

impl Report {
    /// Violations of checks expected to always hold.
    pub fn faults(&self) -> usize {
        self.checks.iter().filter(|c| c.expected == Expected::AlwaysHolds.name()).map(|c| c.violations.len()).sum()
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Record wall time per check (otherwise `ms` is 0, keeping output stable).
    pub timing: bool,
}

struct LatticeOutcome {
    in_scope: bool,
    tested: usize,
    violations: Vec<Violation>,
    nanos: u128,
}

pub fn run_suite(
    corpus: &Corpus,
    checks: &[&'static TheoremCheck],
    bindings: &Bindings,
    options: &RunOptions,
) -> Result<Report> {
    let sample = ClassSample::from_corpus(corpus);
    let plans: Vec<(Vec<Vec<ClassSpec>>, Vec<Skipped>)> =
        checks.iter().map(|c| binding_plan(c, bindings, &sample)).collect();

    let evaluate = || -> Vec<Vec<LatticeOutcome>> {
        corpus
            .items
            .par_iter()
            .map(|item| {
                let an = Analysis::new(&item.lattice);
                let hex = item.form.to_hex();
                checks
                    .iter()
                    .zip(&plans)
                    .map(|(check, (run, _))| {
                        let start = Instant::now();
                        let mut outcome = LatticeOutcome {
                            in_scope: check.scope.admits(&an),
                            tested: 0,
                            violations: Vec::new(),
                            nanos: 0,
                        };
                        if outcome.in_scope {
                            for binding in run {
                                outcome.tested += 1;
                                if let Some(witness) = (check.eval)(&an, binding) {
                                    outcome.violations.push(Violation {
                                        lattice: hex.clone(),
                                        binding: binding.iter().map(ToString::to_string).collect(),
                                        witness,
                                    });
                                }
                            }
                        }
                        outcome.nanos = start.elapsed().as_nanos();
                        outcome
                    })
                    .collect()
            })
            .collect()
    };
    let per_lattice = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::parse(format!("thread pool: {e}")))?
            .install(evaluate),
        None => evaluate(),
    };

    let reports = checks
        .iter()
        .zip(plans)
        .enumerate()
        .map(|(i, (check, (_, skipped)))| {
            let mut report = CheckReport {
                id: check.id.to_string(),
                expected: check.expected.name().to_string(),
                scope: check.scope.name().to_string(),
                scope_count: 0,
                tested: 0,
                violations: Vec::new(),
                degenerate: check.degenerate.is_some(),
                note: check.degenerate.map(str::to_string),
                skipped,
                ms: 0,
            };
            let mut nanos = 0u128;
            for outcomes in &per_lattice {
                let o = &outcomes[i];
                report.scope_count += usize::from(o.in_scope);
                report.tested += o.tested;
                report.violations.extend(o.violations.iter().cloned());
                nanos += o.nanos;
            }
            if options.timing {
                report.ms = (nanos / 1_000_000) as u64;
            }
            report
        })
        .collect();
    Ok(Report { corpus: corpus.description.clone(), checks: reports })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("corpus: {}\n", report.corpus);
            for c in &report.checks {
                let status = if c.violations.is_empty() { "ok" } else { "VIOLATED" };
                s.push_str(&format!(
                    "{:<12} {:<13} {:<8} scope {:>5}  tested {:>6}  violations {:>4}",
                    c.id,
                    c.expected,
                    status,
                    c.scope_count,
                    c.tested,
                    c.violations.len()
                ));
                if c.ms > 0 {
                    s.push_str(&format!("  {} ms", c.ms));
                }
                s.push('\n');
                if let Some(note) = &c.note {
                    s.push_str(&format!("    degenerate: {note}\n"));
                }
                for k in &c.skipped {
                    s.push_str(&format!("    skipped [{}]: {}\n", k.binding.join(", "), k.reason));
                }
                for v in c.violations.iter().take(5) {
                    s.push_str(&format!("    {} [{}] {}\n", v.lattice, v.binding.join(", "), v.witness));
                }
                if c.violations.len() > 5 {
                    s.push_str(&format!("    ... {} more\n", c.violations.len() - 5));
                }
            }
            s.push_str(&format!("always-holds violations: {}\n", report.faults()));
            s
        }
    }
}

// ---------------------------------------------------------------------------
// counterexample search

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MineOutcome {
    /// Smallest lattice by `(n, canonical form)` satisfying both expressions.
    Witness {
        lattice: Lattice,
        form: CanonicalForm,
        examined: usize,
    },
    Exhausted {
        max_n: usize,
        examined: usize,
    },
}

impl MineOutcome {
    pub fn to_json(&self, hypothesis: &Expr, negated: &Expr) -> Value {
        match self {
            MineOutcome::Witness { lattice, form, examined } => json!({
                "hypothesis": hypothesis.to_string(),
                "negated_conclusion": negated.to_string(),
                "result": "witness",
                "n": lattice.size(),
                "canonical": form.to_hex(),
                "lattice": serde_json::from_str::<Value>(&io::serialize_lattice(lattice)).expect("valid json"),
                "examined": examined,
            }),
            MineOutcome::Exhausted { max_n, examined } => json!({
                "hypothesis": hypothesis.to_string(),
                "negated_conclusion": negated.to_string(),
                "result": "exhausted",
                "max_n": max_n,
                "examined": examined,
            }),
        }
    }
}

/// Searches all lattices with at most `max_n` elements for one satisfying
/// `hypothesis` and `negated_conclusion`.
pub fn find_counterexample(
    hypothesis: &Expr,
    negated_conclusion: &Expr,
    max_n: usize,
    cap: usize,
) -> Result<MineOutcome> {
    let corpus = enumerate_up_to(max_n, cap, None)?;
    let hit = corpus.items.par_iter().position_first(|item| {
        let an = Analysis::new(&item.lattice);
        hypothesis.eval(&an) && negated_conclusion.eval(&an)
    });
    Ok(match hit {
        Some(i) => MineOutcome::Witness {
            lattice: corpus.items[i].lattice.clone(),
            form: corpus.items[i].form.clone(),
            examined: i + 1,
        },
        None => MineOutcome::Exhausted { max_n, examined: corpus.len() },
    })
}
