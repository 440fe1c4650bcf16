//! JSON lattice files.
//!
//! ```json
//! {"n": 5, "covers": [[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]], "names": ["0","a","b","c","1"]}
//! ```
//!
//! Each `[u, v]` is a cover `u ⋖ v`. The serializer emits covers sorted
//! ascending. Strict parsing rejects duplicate pairs and pairs that are not
//! covers of the resulting order; [`ParseMode::Reduce`] accepts them and
//! reports a warning per dropped pair instead.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Reduce,
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub lattice: Lattice,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    n: usize,
    covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

pub fn parse_lattice(text: &str, mode: ParseMode) -> Result<Parsed> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
    from_file(file, mode)
}

fn from_file(file: LatticeFile, mode: ParseMode) -> Result<Parsed> {
    let pairs: Vec<(usize, usize)> = file.covers.iter().map(|&[u, v]| (u, v)).collect();
    let mut lattice = Lattice::from_covers(file.n, &pairs)?;
    let mut warnings = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for &(u, v) in &pairs {
        let problem = if !seen.insert((u, v)) {
            Some("duplicate pair")
        } else if !lattice.upper_covers(crate::ElementId::new(u)).contains(crate::ElementId::new(v)) {
            Some("not a cover (implied by transitivity)")
        } else {
            None
        };
        if let Some(problem) = problem {
            let msg = format!("[{u},{v}]: {problem}");
            match mode {
                ParseMode::Strict => return Err(Error::parse(msg)),
                ParseMode::Reduce => warnings.push(msg),
            }
        }
    }
    if let Some(names) = file.names {
        let mut sorted = names.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::parse("element names must be distinct"));
        }
        lattice = lattice.with_names(names)?;
    }
    Ok(Parsed { lattice, warnings })
}

pub fn serialize_lattice(l: &Lattice) -> String {
    let file = LatticeFile {
        n: l.size(),
        covers: l.covers().into_iter().map(|(a, b)| [a.index(), b.index()]).collect(),
        names: l.names().map(<[String]>::to_vec),
    };
    serde_json::to_string(&file).expect("lattice serializes")
}

pub fn read_lattice(path: &std::path::Path, mode: ParseMode) -> Result<Parsed> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lattice(&text, mode).map_err(|e| Error::io(path, e))
}

/// A file holding either one lattice object or an array of them.
pub fn read_lattices(path: &std::path::Path, mode: ParseMode) -> Result<Vec<Lattice>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::io(path, e))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        other => vec![other],
    };
    items
        .into_iter()
        .map(|v| {
            let file: LatticeFile = serde_json::from_value(v).map_err(|e| Error::io(path, e))?;
            from_file(file, mode).map(|p| p.lattice).map_err(|e| Error::io(path, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const M3: &str = r#"{"n":5,"covers":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]],"names":["0","a","b","c","1"]}"#;

    #[test]
    fn round_trip_is_canonical() {
        let parsed = parse_lattice(M3, ParseMode::Strict).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(serialize_lattice(&parsed.lattice), M3);
        // unsorted input serializes sorted
        let shuffled = r#"{"names":["0","a","b","c","1"],"covers":[[3,4],[0,1],[2,4],[0,2],[1,4],[0,3]],"n":5}"#;
        let l = parse_lattice(shuffled, ParseMode::Strict).unwrap().lattice;
        assert_eq!(serialize_lattice(&l), M3);
    }

    #[test]
    fn implied_pairs() {
        let text = r#"{"n":3,"covers":[[0,1],[1,2],[0,2]]}"#;
        assert!(matches!(parse_lattice(text, ParseMode::Strict), Err(Error::Parse(_))));
        let parsed = parse_lattice(text, ParseMode::Reduce).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(serialize_lattice(&parsed.lattice), r#"{"n":3,"covers":[[0,1],[1,2]]}"#);
    }

    #[test]
    fn duplicates() {
        let text = r#"{"n":2,"covers":[[0,1],[0,1]]}"#;
        assert!(parse_lattice(text, ParseMode::Strict).is_err());
        assert_eq!(parse_lattice(text, ParseMode::Reduce).unwrap().warnings.len(), 1);
    }

    #[test]
    fn pentagon_parses_non_modular() {
        let text = serialize_lattice(&fixtures::n5());
        let l = parse_lattice(&text, ParseMode::Strict).unwrap().lattice;
        assert!(!l.is_modular());
    }

    #[test]
    fn structural_errors_are_delegated() {
        assert!(matches!(
            parse_lattice(r#"{"n":4,"covers":[[0,1],[0,2],[1,3]]}"#, ParseMode::Strict),
            Err(Error::Unbounded)
        ));
        assert!(matches!(parse_lattice("{", ParseMode::Strict), Err(Error::Parse(_))));
        assert!(matches!(
            parse_lattice(r#"{"n":2,"covers":[[0,1]],"names":["x"]}"#, ParseMode::Strict),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_lattice(r#"{"n":2,"covers":[[0,1]],"names":["x","x"]}"#, ParseMode::Strict),
            Err(Error::Parse(_))
        ));
    }
}
