//! Linear morphisms between bounded lattices and complement projections.
//!
//! A map `φ: L → L'` is linear with kernel `k ∈ L` and image `a ∈ L'` when
//! `φ(x) = φ(x ∨ k)` for all `x`, and `φ` restricted to `1/k` is a lattice
//! isomorphism onto `a/0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::set::ElementId;

#[derive(Clone, Debug)]
pub struct LinearMorphism {
    pub domain: Lattice,
    pub codomain: Lattice,
    /// `values[x]` is `φ(x)`.
    pub values: Vec<ElementId>,
    pub kernel: ElementId,
    pub image: ElementId,
}

/// Why a candidate failed [`LinearMorphism::verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismDefect {
    TableSize {
        expected: usize,
        got: usize,
    },
    ValueOutOfRange {
        at: ElementId,
    },
    /// `φ(x) != φ(x ∨ k)`.
    KernelAbsorption {
        at: ElementId,
    },
    /// `φ` on `1/k` does not land in `a/0`.
    OutsideImage {
        at: ElementId,
    },
    /// `φ` on `1/k` is not injective.
    NotInjective {
        first: ElementId,
        second: ElementId,
    },
    /// `φ` on `1/k` misses part of `a/0`.
    NotSurjective {
        missed: ElementId,
    },
    /// order is not preserved (or reflected) on `1/k`.
    OrderMismatch {
        x: ElementId,
        y: ElementId,
    },
}

impl std::fmt::Display for MorphismDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MorphismDefect::TableSize { expected, got } => {
                write!(f, "value table has {got} entries, domain has {expected}")
            }
            MorphismDefect::ValueOutOfRange { at } => write!(f, "value at {at} is not a codomain element"),
            MorphismDefect::KernelAbsorption { at } => write!(f, "φ({at}) != φ({at} ∨ kernel)"),
            MorphismDefect::OutsideImage { at } => write!(f, "φ({at}) is not below the image"),
            MorphismDefect::NotInjective { first, second } => {
                write!(f, "φ({first}) = φ({second}) on the upper interval of the kernel")
            }
            MorphismDefect::NotSurjective { missed } => write!(f, "{missed} below the image is never hit"),
            MorphismDefect::OrderMismatch { x, y } => {
                write!(f, "order between {x} and {y} is not preserved both ways")
            }
        }
    }
}

impl LinearMorphism {
    /// Checks both defining clauses for the declared kernel and image.
    pub fn verify(&self) -> std::result::Result<(), MorphismDefect> {
        let (dom, cod) = (&self.domain, &self.codomain);
        if self.values.len() != dom.size() {
            return Err(MorphismDefect::TableSize { expected: dom.size(), got: self.values.len() });
        }
        for x in dom.elements() {
            if self.values[x.index()].index() >= cod.size() {
                return Err(MorphismDefect::ValueOutOfRange { at: x });
            }
        }
        if self.kernel.index() >= dom.size() || self.image.index() >= cod.size() {
            return Err(MorphismDefect::ValueOutOfRange { at: self.kernel });
        }
        for x in dom.elements() {
            if self.apply(x) != self.apply(dom.join(x, self.kernel)) {
                return Err(MorphismDefect::KernelAbsorption { at: x });
            }
        }
        let upper = dom.between(self.kernel, dom.top());
        for x in upper.iter() {
            if !cod.leq(self.apply(x), self.image) {
                return Err(MorphismDefect::OutsideImage { at: x });
            }
            for y in upper.iter().filter(|&y| y > x) {
                if self.apply(x) == self.apply(y) {
                    return Err(MorphismDefect::NotInjective { first: x, second: y });
                }
            }
        }
        let hit: Vec<ElementId> = upper.iter().map(|x| self.apply(x)).collect();
        if let Some(missed) = cod.down_set(self.image).iter().find(|e| !hit.contains(e)) {
            return Err(MorphismDefect::NotSurjective { missed });
        }
        for x in upper.iter() {
            for y in upper.iter() {
                if dom.leq(x, y) != cod.leq(self.apply(x), self.apply(y)) {
                    return Err(MorphismDefect::OrderMismatch { x, y });
                }
            }
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.verify().is_ok()
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.values[x.index()]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.values.clone();
        seen.sort();
        seen.dedup();
        seen.len() == self.values.len()
    }

    /// Restriction to the interval `high/low` of the domain. The new domain
    /// is that interval, the new codomain is `φ(high)/φ(low)`, and the kernel
    /// becomes `(k ∧ high) ∨ low`.
    pub fn restrict(&self, low: ElementId, high: ElementId) -> Result<LinearMorphism> {
        let dom_iv = self.domain.interval(low, high)?;
        let (lo_img, hi_img) = (self.apply(low), self.apply(high));
        let cod_iv = self.codomain.interval(lo_img, hi_img)?;
        let values = dom_iv
            .embedding
            .iter()
            .map(|&x| {
                cod_iv.from_parent(self.apply(x)).ok_or(Error::NotInInterval {
                    element: self.apply(x).index(),
                    low: lo_img.index(),
                    high: hi_img.index(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let kernel_parent = self.domain.join(self.domain.meet(self.kernel, high), low);
        Ok(LinearMorphism {
            kernel: dom_iv.from_parent(kernel_parent).expect("kernel adjusted into interval"),
            image: cod_iv.from_parent(hi_img).expect("image endpoint"),
            values,
            domain: dom_iv.lattice,
            codomain: cod_iv.lattice,
        })
    }

    /// Value table for witness reports.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Table {
            values: Vec<String>,
            kernel: String,
            image: String,
        }
        serde_json::to_value(Table {
            values: self.values.iter().map(|&v| self.codomain.name(v)).collect(),
            kernel: self.domain.name(self.kernel),
            image: self.codomain.name(self.image),
        })
        .expect("table serializes")
    }
}

/// Projection `π(e) = (e ∨ kernel) ∧ target` onto `target` along its
/// complement `kernel`.
pub fn projection_onto(l: &Lattice, target: ElementId, kernel: ElementId) -> Result<LinearMorphism> {
    l.check(target)?;
    l.check(kernel)?;
    if !l.is_modular() {
        return Err(Error::NotModular);
    }
    if l.join(target, kernel) != l.top() || !l.disjoint(target, kernel) {
        return Err(Error::NotComplementPair { a: target.index(), b: kernel.index() });
    }
    let values = l.elements().map(|e| l.meet(l.join(e, kernel), target)).collect();
    Ok(LinearMorphism { domain: l.clone(), codomain: l.clone(), values, kernel, image: target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn e(l: &Lattice, name: &str) -> ElementId {
        l.element(name).unwrap()
    }

    #[test]
    fn identity_and_zero_maps() {
        let m3 = fixtures::m3();
        let identity = LinearMorphism {
            domain: m3.clone(),
            codomain: m3.clone(),
            values: m3.elements().collect(),
            kernel: m3.bottom(),
            image: m3.top(),
        };
        assert_eq!(identity.verify(), Ok(()));

        let zero =
            LinearMorphism { values: vec![m3.bottom(); 5], kernel: m3.top(), image: m3.bottom(), ..identity.clone() };
        assert_eq!(zero.verify(), Ok(()));

        let wrong_kernel = LinearMorphism { kernel: e(&m3, "a"), ..identity };
        assert_eq!(wrong_kernel.verify(), Err(MorphismDefect::KernelAbsorption { at: m3.bottom() }));
    }

    #[test]
    fn boolean_projection() {
        let b2 = fixtures::b2();
        let pi = projection_onto(&b2, e(&b2, "x"), e(&b2, "y")).unwrap();
        let names: Vec<String> = pi.values.iter().map(|&v| b2.name(v)).collect();
        assert_eq!(names, ["0", "x", "0", "x"]);
        assert!(pi.is_linear());
    }

    #[test]
    fn diamond_projection() {
        let m3 = fixtures::m3();
        let pi = projection_onto(&m3, e(&m3, "a"), e(&m3, "b")).unwrap();
        assert_eq!(pi.apply(e(&m3, "c")), e(&m3, "a"));
        assert!(pi.is_linear());
    }

    #[test]
    fn trivial_projection_is_identity() {
        for (_, l) in fixtures::all().into_iter().filter(|(_, l)| l.is_modular()) {
            let pi = projection_onto(&l, l.top(), l.bottom()).unwrap();
            assert_eq!(pi.values, l.elements().collect::<Vec<_>>());
        }
    }

    #[test]
    fn projection_preconditions() {
        let m3 = fixtures::m3();
        assert_eq!(
            projection_onto(&m3, e(&m3, "a"), e(&m3, "a")).unwrap_err(),
            Error::NotComplementPair { a: 1, b: 1 }
        );
        let n5 = fixtures::n5();
        assert_eq!(projection_onto(&n5, e(&n5, "p"), e(&n5, "q")).unwrap_err(), Error::NotModular);
    }

    #[test]
    fn restrictions() {
        let b2 = fixtures::b2();
        let (x, y) = (e(&b2, "x"), e(&b2, "y"));
        let pi = projection_onto(&b2, x, y).unwrap();
        let on_x = pi.restrict(b2.bottom(), x).unwrap();
        assert_eq!(on_x.domain.size(), 2);
        assert_eq!(on_x.values, on_x.domain.elements().collect::<Vec<_>>());
        assert!(on_x.is_linear());

        let on_kernel = pi.restrict(b2.bottom(), y).unwrap();
        assert!(on_kernel.values.iter().all(|&v| v == on_kernel.codomain.bottom()));
        assert!(on_kernel.is_linear());

        let m3 = fixtures::m3();
        let pi = projection_onto(&m3, e(&m3, "a"), e(&m3, "b")).unwrap();
        let on_c = pi.restrict(m3.bottom(), e(&m3, "c")).unwrap();
        assert!(on_c.is_injective());
        assert_eq!(on_c.kernel, on_c.domain.bottom());
        assert!(on_c.is_linear());

        assert!(matches!(pi.restrict(e(&m3, "a"), e(&m3, "b")), Err(Error::NotComparable { .. })));
    }
}
