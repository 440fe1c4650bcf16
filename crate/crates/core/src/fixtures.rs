//! Small named lattices used throughout tests, docs and the CLI.

use crate::lattice::Lattice;

/// Two-element chain `0 < 1`.
pub fn c2() -> Lattice {
    named(2, &[(0, 1)], &["0", "1"])
}

/// Three-element chain `0 < m < 1`.
pub fn c3() -> Lattice {
    named(3, &[(0, 1), (1, 2)], &["0", "m", "1"])
}

/// Four-element Boolean lattice with atoms `x`, `y`.
pub fn b2() -> Lattice {
    named(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &["0", "x", "y", "1"])
}

/// Diamond with atoms `a`, `b`, `c`.
pub fn m3() -> Lattice {
    named(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], &["0", "a", "b", "c", "1"])
}

/// Pentagon `0 < p < r < 1`, `0 < q < 1`.
pub fn n5() -> Lattice {
    named(5, &[(0, 1), (0, 2), (1, 3), (3, 4), (2, 4)], &["0", "p", "q", "r", "1"])
}

/// All five named fixtures with their conventional names.
pub fn all() -> Vec<(&'static str, Lattice)> {
    vec![("C2", c2()), ("C3", c3()), ("B2", b2()), ("M3", m3()), ("N5", n5())]
}

fn named(n: usize, covers: &[(usize, usize)], names: &[&str]) -> Lattice {
    Lattice::from_covers(n, covers).and_then(|l| l.with_names(names.iter().copied())).expect("fixture is a lattice")
}
