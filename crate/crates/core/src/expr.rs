//! Boolean predicates over a single lattice.
//!
//! ```text
//! expr   := term (("or" | "|") term)*
//! term   := factor (("and" | "&") factor)*
//! factor := ("not" | "!") factor | "(" expr ")" | atom
//! atom   := property | "dsubc" | "true" | "false" | "in(" class ")" | class
//! ```
//!
//! Properties use the names of [`Property`]. A bare class expression means
//! membership of the whole lattice in that class; `dsubc` is `D(L) ⊆ C(L)`.

use std::fmt;

use crate::class::ClassSpec;
use crate::error::{Error, Result};
use crate::extending::{Analysis, Property};
use crate::grammar::Cursor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(bool),
    Prop(Property),
    Member(ClassSpec),
    SummandsClosed,
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut cur = Cursor::new(src);
        let e = parse_or(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, an: &Analysis) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Prop(p) => an.holds(p),
            Expr::Member(x) => x.member(an.lattice),
            Expr::SummandsClosed => an.table.summands.is_subset(an.table.closed),
            Expr::Not(e) => !e.eval(an),
            Expr::And(es) => es.iter().all(|e| e.eval(an)),
            Expr::Or(es) => es.iter().any(|e| e.eval(an)),
        }
    }

    pub fn negate(self) -> Expr {
        match self {
            Expr::Not(e) => *e,
            other => Expr::Not(Box::new(other)),
        }
    }
}

fn parse_or(cur: &mut Cursor) -> Result<Expr> {
    let mut terms = vec![parse_and(cur)?];
    while cur.eat('|') || cur.eat_word("or") {
        terms.push(parse_and(cur)?);
    }
    Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Or(terms) })
}

fn parse_and(cur: &mut Cursor) -> Result<Expr> {
    let mut factors = vec![parse_factor(cur)?];
    while cur.eat('&') || cur.eat_word("and") {
        factors.push(parse_factor(cur)?);
    }
    Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::And(factors) })
}

fn parse_factor(cur: &mut Cursor) -> Result<Expr> {
    if cur.eat('!') || cur.eat_word("not") {
        return Ok(Expr::Not(Box::new(parse_factor(cur)?)));
    }
    if cur.eat('(') {
        let e = parse_or(cur)?;
        cur.expect(')')?;
        return Ok(e);
    }
    parse_atom(cur)
}

fn parse_atom(cur: &mut Cursor) -> Result<Expr> {
    if cur.eat_word("true") {
        return Ok(Expr::Const(true));
    }
    if cur.eat_word("false") {
        return Ok(Expr::Const(false));
    }
    if cur.eat_word("dsubc") {
        return Ok(Expr::SummandsClosed);
    }
    if cur.eat_word("in") {
        cur.expect('(')?;
        let x = ClassSpec::parse_from(cur)?;
        cur.expect(')')?;
        return Ok(Expr::Member(x));
    }
    let mut probe = cur.clone();
    if let Ok(p) = Property::parse_from(&mut probe) {
        *cur = probe;
        return Ok(Expr::Prop(p));
    }
    let mut probe = cur.clone();
    match ClassSpec::parse_from(&mut probe) {
        Ok(x) => {
            *cur = probe;
            Ok(Expr::Member(x))
        }
        Err(_) => Err(cur.error("expected a property, class or parenthesized expression")),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, es: &[Expr], op: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")
        }
        match self {
            Expr::Const(b) => write!(f, "{b}"),
            Expr::Prop(p) => write!(f, "{p}"),
            Expr::Member(x) => write!(f, "in({x})"),
            Expr::SummandsClosed => f.write_str("dsubc"),
            Expr::Not(e) => write!(f, "not {e}"),
            Expr::And(es) => join(f, es, "and"),
            Expr::Or(es) => join(f, es, "or"),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn eval(src: &str, l: &crate::Lattice) -> bool {
        Expr::parse(src).unwrap().eval(&Analysis::new(l))
    }

    #[test]
    fn evaluation() {
        let n5 = fixtures::n5();
        let m3 = fixtures::m3();
        assert!(eval("not modular", &n5));
        assert!(eval("modular and type1(all)", &m3));
        assert!(eval("!modular | distributive", &n5));
        assert!(!eval("modular & !modular", &m3));
        assert!(eval("pow(simple,2)", &m3));
        assert!(eval("in(sum(simple,simple))", &m3));
        assert!(eval("dsubc", &m3));
        assert!(eval("simple", &fixtures::c2()));
        assert!(eval("not (simple or uniform)", &fixtures::b2()));
    }

    #[test]
    fn precedence_and_display() {
        let e = Expr::parse("a_bogus_name").unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        let e = Expr::parse("modular or extending and not qc").unwrap();
        assert_eq!(e.to_string(), "(modular or (extending and not qc))");
        assert_eq!(Expr::parse("uniform").unwrap(), Expr::Prop(Property::Uniform));
    }
}
