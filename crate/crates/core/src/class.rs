//! Abstract classes of finite lattices and their combinators.
//!
//! Every class contains the one-element lattice, and membership only
//! depends on the isomorphism type. The classes of lattices with finite
//! uniform dimension, compact lattices and lattices of finite length
//! contain every finite lattice; they stay separate constructors so that
//! statements mentioning them can be run as written.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::canon::{canonical_form, CanonicalForm};
use crate::corpus::load_corpus;
use crate::elements::essentials;
use crate::error::{Error, Result};
use crate::grammar::Cursor;
use crate::io::{read_lattices, ParseMode};
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    All,
    /// Two-element lattices (and the trivial one).
    Simple,
    /// Every nonzero element is essential.
    Uniform,
    FiniteUniformDim,
    Compact,
    FiniteLength,
    ZeroOnly,
    /// Isomorphism types listed in a file.
    UserSet {
        source: String,
        forms: Arc<BTreeSet<CanonicalForm>>,
    },
    EssentialHull(Box<ClassSpec>),
    DirectSumPower(Box<ClassSpec>),
    Sum(Vec<ClassSpec>),
    Product(Vec<ClassSpec>),
    Power(Box<ClassSpec>, usize),
}

impl ClassSpec {
    pub fn essential_hull(self) -> Self {
        ClassSpec::EssentialHull(Box::new(self))
    }

    pub fn direct_sum_power(self) -> Self {
        ClassSpec::DirectSumPower(Box::new(self))
    }

    pub fn user_set(source: impl Into<String>, lattices: impl IntoIterator<Item = Lattice>) -> Self {
        ClassSpec::UserSet {
            source: source.into(),
            forms: Arc::new(lattices.into_iter().map(|l| canonical_form(&l)).collect()),
        }
    }

    /// Parses the class grammar:
    /// `all | simple | uniform | udim | compactcls | flen | zero | file(PATH)
    ///  | e(X) | dsum(X) | sum(X,...) | prod(X,...) | pow(X,n)`.
    pub fn parse(src: &str) -> Result<Self> {
        let mut cur = Cursor::new(src);
        let spec = Self::parse_from(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(spec)
    }

    pub(crate) fn parse_from(cur: &mut Cursor) -> Result<Self> {
        let word = cur.ident().ok_or_else(|| cur.error("expected a class"))?;
        let spec = match word.to_ascii_lowercase().as_str() {
            "all" => ClassSpec::All,
            "simple" => ClassSpec::Simple,
            "uniform" => ClassSpec::Uniform,
            "udim" => ClassSpec::FiniteUniformDim,
            "compactcls" => ClassSpec::Compact,
            "flen" => ClassSpec::FiniteLength,
            "zero" => ClassSpec::ZeroOnly,
            "file" => {
                cur.expect('(')?;
                let path = cur.raw_until_close()?;
                return Self::from_path(Path::new(path));
            }
            "e" | "dsum" => {
                cur.expect('(')?;
                let child = Self::parse_from(cur)?;
                cur.expect(')')?;
                if word.eq_ignore_ascii_case("e") {
                    child.essential_hull()
                } else {
                    child.direct_sum_power()
                }
            }
            "sum" | "prod" => {
                cur.expect('(')?;
                let mut children = vec![Self::parse_from(cur)?];
                while cur.eat(',') {
                    children.push(Self::parse_from(cur)?);
                }
                cur.expect(')')?;
                if word.eq_ignore_ascii_case("sum") {
                    ClassSpec::Sum(children)
                } else {
                    ClassSpec::Product(children)
                }
            }
            "pow" => {
                cur.expect('(')?;
                let child = Self::parse_from(cur)?;
                cur.expect(',')?;
                let n = cur.number()?;
                if n == 0 {
                    return Err(cur.error("power exponent must be positive"));
                }
                cur.expect(')')?;
                ClassSpec::Power(Box::new(child), n)
            }
            other => return Err(cur.error(&format!("unknown class {other:?}"))),
        };
        Ok(spec)
    }

    /// A JSON file (one lattice or an array) or a directory of lattice files.
    pub fn from_path(path: &Path) -> Result<Self> {
        let lattices = if path.is_dir() {
            let (corpus, mut errors) = load_corpus(path, ParseMode::Strict)?;
            if !errors.is_empty() {
                return Err(errors.swap_remove(0));
            }
            corpus.items.into_iter().map(|i| i.lattice).collect()
        } else {
            read_lattices(path, ParseMode::Strict)?
        };
        Ok(Self::user_set(path.display().to_string(), lattices))
    }

    pub fn member(&self, l: &Lattice) -> bool {
        if l.is_trivial() {
            return true;
        }
        match self {
            ClassSpec::All | ClassSpec::FiniteUniformDim | ClassSpec::Compact | ClassSpec::FiniteLength => true,
            ClassSpec::Simple => l.size() == 2,
            ClassSpec::Uniform => l.nonzero().is_subset(essentials(l)),
            ClassSpec::ZeroOnly => false,
            ClassSpec::UserSet { forms, .. } => forms.contains(&canonical_form(l)),
            ClassSpec::EssentialHull(x) => essentials(l).iter().any(|a| x.member(&l.initial(a))),
            ClassSpec::DirectSumPower(x) => {
                let mut ok = MembershipCache::new(l, std::slice::from_ref(x.as_ref()));
                let mut found = false;
                independent_sets(l, l.size(), &mut |s| {
                    found = l.join_all(s) == l.top() && s.iter().all(|a| ok.get(0, a));
                    found
                });
                found
            }
            ClassSpec::Sum(children) => sum_member(children, l),
            ClassSpec::Product(children) => product_member(children.iter(), l),
            ClassSpec::Power(x, n) => product_member(std::iter::repeat(x.as_ref()).take(*n), l),
        }
    }

    /// Elements `a` whose initial interval `a/0` is in the class.
    pub fn x_intervals(&self, l: &Lattice) -> ElementSet {
        l.elements().filter(|&a| self.member(&l.initial(a))).collect()
    }

    /// Whether the class is built without file-backed sets.
    pub fn is_builtin(&self) -> bool {
        match self {
            ClassSpec::UserSet { .. } => false,
            ClassSpec::EssentialHull(x) | ClassSpec::DirectSumPower(x) | ClassSpec::Power(x, _) => x.is_builtin(),
            ClassSpec::Sum(xs) | ClassSpec::Product(xs) => xs.iter().all(ClassSpec::is_builtin),
            _ => true,
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, xs: &[ClassSpec]) -> fmt::Result {
            write!(f, "{head}(")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        }
        match self {
            ClassSpec::All => f.write_str("all"),
            ClassSpec::Simple => f.write_str("simple"),
            ClassSpec::Uniform => f.write_str("uniform"),
            ClassSpec::FiniteUniformDim => f.write_str("udim"),
            ClassSpec::Compact => f.write_str("compactcls"),
            ClassSpec::FiniteLength => f.write_str("flen"),
            ClassSpec::ZeroOnly => f.write_str("zero"),
            ClassSpec::UserSet { source, .. } => write!(f, "file({source})"),
            ClassSpec::EssentialHull(x) => write!(f, "e({x})"),
            ClassSpec::DirectSumPower(x) => write!(f, "dsum({x})"),
            ClassSpec::Sum(xs) => list(f, "sum", xs),
            ClassSpec::Product(xs) => list(f, "prod", xs),
            ClassSpec::Power(x, n) => write!(f, "pow({x},{n})"),
        }
    }
}

impl std::str::FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassSpec::parse(s)
    }
}

/// Lazily evaluated `member(classes[slot], a/0)`.
struct MembershipCache<'a> {
    lattice: &'a Lattice,
    classes: &'a [ClassSpec],
    table: Vec<Vec<Option<bool>>>,
}

impl<'a> MembershipCache<'a> {
    fn new(lattice: &'a Lattice, classes: &'a [ClassSpec]) -> Self {
        MembershipCache { lattice, classes, table: vec![vec![None; lattice.size()]; classes.len()] }
    }

    fn get(&mut self, slot: usize, a: ElementId) -> bool {
        let (l, classes) = (self.lattice, self.classes);
        *self.table[slot][a.index()].get_or_insert_with(|| classes[slot].member(&l.initial(a)))
    }
}

/// Visits independent sets of nonzero elements with at most `max_size`
/// members, depth first in ascending element order. Independence is
/// hereditary, so dependent sets are pruned with all their supersets.
/// Stops as soon as `visit` returns true.
pub fn independent_sets(l: &Lattice, max_size: usize, visit: &mut dyn FnMut(ElementSet) -> bool) -> bool {
    fn go(
        l: &Lattice,
        current: ElementSet,
        next: usize,
        max_size: usize,
        visit: &mut dyn FnMut(ElementSet) -> bool,
    ) -> bool {
        if current.len() == max_size {
            return false;
        }
        for i in next..l.size() {
            let e = ElementId::new(i);
            if e == l.bottom() {
                continue;
            }
            let grown = current.with(e);
            if !l.independent(grown) {
                continue;
            }
            if visit(grown) || go(l, grown, i + 1, max_size, visit) {
                return true;
            }
        }
        false
    }
    go(l, ElementSet::EMPTY, 0, max_size, visit)
}

fn sum_member(children: &[ClassSpec], l: &Lattice) -> bool {
    let mut ok = MembershipCache::new(l, children);
    let mut found = false;
    independent_sets(l, children.len(), &mut |s| {
        found = l.join_all(s) == l.top() && assign_slots(&s.to_vec(), &mut vec![false; children.len()], &mut ok);
        found
    });
    found
}

/// Injective assignment of summands to slots accepting them; unused slots
/// take the zero summand.
fn assign_slots(summands: &[ElementId], used: &mut Vec<bool>, ok: &mut MembershipCache) -> bool {
    let Some((&first, rest)) = summands.split_first() else {
        return true;
    };
    for slot in 0..used.len() {
        if !used[slot] && ok.get(slot, first) {
            used[slot] = true;
            if assign_slots(rest, used, ok) {
                return true;
            }
            used[slot] = false;
        }
    }
    false
}

/// Chains `0 = a_0 <= ... <= a_n = 1` with `a_i/a_{i-1}` in the `i`-th class.
fn product_member<'x>(children: impl Iterator<Item = &'x ClassSpec>, l: &Lattice) -> bool {
    let mut reached = ElementSet::singleton(l.bottom());
    for x in children {
        let mut next = ElementSet::EMPTY;
        for low in reached.iter() {
            for high in l.up_set(low).iter() {
                if !next.contains(high) {
                    let iv = l.interval(low, high).expect("comparable");
                    if x.member(&iv.lattice) {
                        next.insert(high);
                    }
                }
            }
        }
        reached = next;
    }
    reached.contains(l.top())
}

/// Largest size of an independent set of nonzero elements.
pub fn uniform_dimension(l: &Lattice) -> usize {
    let mut best = 0;
    independent_sets(l, l.size(), &mut |s| {
        best = best.max(s.len());
        false
    });
    best
}

/// Length of the longest chain, counted in covers.
pub fn finite_length(l: &Lattice) -> usize {
    l.height()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(l: &Lattice, s: ElementSet) -> Vec<String> {
        s.iter().map(|e| l.name(e)).collect()
    }

    #[test]
    fn builtin_membership() {
        assert!(ClassSpec::Simple.member(&fixtures::c2()));
        assert!(!ClassSpec::Simple.member(&fixtures::c3()));
        assert!(ClassSpec::Uniform.member(&fixtures::c3()));
        assert!(!ClassSpec::Uniform.member(&fixtures::b2()));
        assert!(!ClassSpec::ZeroOnly.member(&fixtures::c2()));
        for spec in [
            "all",
            "simple",
            "uniform",
            "udim",
            "compactcls",
            "flen",
            "zero",
            "e(zero)",
            "sum(zero,zero)",
            "prod(simple)",
            "pow(simple,2)",
            "dsum(simple)",
        ] {
            assert!(ClassSpec::parse(spec).unwrap().member(&Lattice::trivial()), "{spec}");
        }
    }

    #[test]
    fn combinators() {
        let sum = ClassSpec::Sum(vec![ClassSpec::Simple, ClassSpec::Simple]);
        assert!(sum.member(&fixtures::b2()));
        assert!(sum.member(&fixtures::m3()));
        assert!(!sum.member(&fixtures::c3()));
        // a single simple summand fills one slot, the other is zero
        assert!(sum.member(&fixtures::c2()));
        assert!(ClassSpec::Simple.essential_hull().member(&fixtures::c3()));
        assert!(!ClassSpec::Simple.essential_hull().member(&fixtures::b2()));
        assert!(ClassSpec::Simple.direct_sum_power().member(&fixtures::b2()));
        // {p, q} is independent with join 1
        assert!(ClassSpec::Simple.direct_sum_power().member(&fixtures::n5()));
        assert!(!ClassSpec::Simple.direct_sum_power().member(&fixtures::c3()));
        let square = ClassSpec::Power(Box::new(ClassSpec::Simple), 2);
        assert!(square.member(&fixtures::c3()));
        assert!(square.member(&fixtures::b2()));
        assert!(!square.member(&Lattice::chain(4)));
        assert!(ClassSpec::Product(vec![ClassSpec::Simple, ClassSpec::Simple]).member(&fixtures::m3()));
        // 0 < q < 1
        assert!(ClassSpec::Product(vec![ClassSpec::Simple, ClassSpec::Simple]).member(&fixtures::n5()));
        assert!(!ClassSpec::Product(vec![ClassSpec::Simple, ClassSpec::Simple]).member(&Lattice::chain(4)));
    }

    #[test]
    fn intervals() {
        let m3 = fixtures::m3();
        assert_eq!(names(&m3, ClassSpec::Simple.x_intervals(&m3)), ["0", "a", "b", "c"]);
        assert_eq!(ClassSpec::All.x_intervals(&m3), m3.all());
        let n5 = fixtures::n5();
        assert_eq!(names(&n5, ClassSpec::Uniform.x_intervals(&n5)), ["0", "p", "q", "r"]);
    }

    #[test]
    fn dimensions_and_lengths() {
        assert_eq!(uniform_dimension(&Lattice::chain(5)), 1);
        assert_eq!(uniform_dimension(&fixtures::m3()), 2);
        assert_eq!(uniform_dimension(&fixtures::b2()), 2);
        assert_eq!(uniform_dimension(&Lattice::trivial()), 0);
        assert_eq!(finite_length(&fixtures::c3()), 2);
        assert_eq!(finite_length(&fixtures::m3()), 2);
        assert_eq!(finite_length(&fixtures::n5()), 3);
    }

    #[test]
    fn grammar_round_trip() {
        for src in ["sum(simple,uniform)", "e(dsum(prod(all,zero,flen)))", "pow(udim,3)", "compactcls"] {
            assert_eq!(ClassSpec::parse(src).unwrap().to_string(), src);
        }
        assert_eq!(ClassSpec::parse(" Sum( simple , e(uniform) ) ").unwrap().to_string(), "sum(simple,e(uniform))");
        for bad in ["", "sum()", "pow(simple,0)", "bogus", "e(simple", "simple simple"] {
            assert!(matches!(ClassSpec::parse(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn user_sets_are_isomorphism_closed() {
        let class = ClassSpec::user_set("test", [fixtures::n5()]);
        let relabeled = fixtures::n5().relabeled(&[4, 2, 3, 1, 0].map(ElementId::new));
        assert!(class.member(&relabeled));
        assert!(!class.member(&fixtures::m3()));
        assert!(class.member(&Lattice::trivial()));
    }
}
