//! Corpora of pairwise non-isomorphic lattices: exhaustive enumeration and
//! directory ingest.
//!
//! Enumeration grows lattices one coatom at a time. Deleting a coatom from a
//! lattice with at least three elements leaves a lattice (pairs whose join
//! was the coatom now join at the top), so every `n`-element lattice arises
//! from some `(n-1)`-element lattice by adding a new element below the top
//! whose strict down-set is an order ideal of the non-top part. Candidates
//! are validated, canonized and deduplicated by canonical form.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::canon::{canonical_form, canonical_relabel, CanonicalForm};
use crate::error::{Error, Result};
use crate::io::{self, ParseMode};
use crate::lattice::Lattice;
use crate::set::{ElementId, ElementSet};

/// Default upper bound on the size accepted by [`enumerate_lattices`].
pub const ENUMERATION_CAP: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Enumerated,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    /// Relabeled into canonical order, names preserved.
    pub lattice: Lattice,
    pub form: CanonicalForm,
    pub provenance: Provenance,
}

/// Non-isomorphic lattices ordered by `(size, canonical form)`.
#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub description: String,
    pub items: Vec<CorpusItem>,
}

impl Corpus {
    /// Deduplicates by canonical form (first occurrence wins) and sorts.
    pub fn from_lattices(
        description: impl Into<String>,
        lattices: impl IntoIterator<Item = (Lattice, Provenance)>,
    ) -> Self {
        let mut by_key: BTreeMap<(usize, CanonicalForm), CorpusItem> = BTreeMap::new();
        for (lattice, provenance) in lattices {
            let form = canonical_form(&lattice);
            by_key.entry((lattice.size(), form.clone())).or_insert_with(|| CorpusItem {
                lattice: canonical_relabel(&lattice),
                form,
                provenance,
            });
        }
        Corpus { description: description.into(), items: by_key.into_values().collect() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn lattices(&self) -> impl Iterator<Item = &Lattice> {
        self.items.iter().map(|i| &i.lattice)
    }

    pub fn filter(&self, keep: impl Fn(&Lattice) -> bool) -> Corpus {
        Corpus {
            description: self.description.clone(),
            items: self.items.iter().filter(|i| keep(&i.lattice)).cloned().collect(),
        }
    }

    /// Writes one `<n>-<hash>.json` file per member.
    pub fn export(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.items
            .iter()
            .map(|item| {
                let path = dir.join(format!("{}-{}.json", item.lattice.size(), item.form.short_hash()));
                let mut text = io::serialize_lattice(&item.lattice);
                text.push('\n');
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                Ok(path)
            })
            .collect()
    }
}

/// All `n`-element lattices up to isomorphism that pass `filter`.
pub fn enumerate_lattices(n: usize, filter: Option<&(dyn Fn(&Lattice) -> bool + Sync)>) -> Result<Corpus> {
    enumerate_lattices_capped(n, ENUMERATION_CAP, filter)
}

pub fn enumerate_lattices_capped(
    n: usize,
    cap: usize,
    filter: Option<&(dyn Fn(&Lattice) -> bool + Sync)>,
) -> Result<Corpus> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > cap {
        return Err(Error::SizeLimitExceeded { n, limit: cap });
    }
    let level = generate_levels(n).pop().expect("at least one level");
    Ok(Corpus {
        description: format!("all lattices with {n} elements"),
        items: level
            .into_iter()
            .filter(|(_, l)| filter.map_or(true, |f| f(l)))
            .map(|(form, lattice)| CorpusItem { lattice, form, provenance: Provenance::Enumerated })
            .collect(),
    })
}

/// All lattices with `1..=max_n` elements, in corpus order.
pub fn enumerate_up_to(max_n: usize, cap: usize, filter: Option<&(dyn Fn(&Lattice) -> bool + Sync)>) -> Result<Corpus> {
    if max_n == 0 {
        return Err(Error::Empty);
    }
    if max_n > cap {
        return Err(Error::SizeLimitExceeded { n: max_n, limit: cap });
    }
    let items = generate_levels(max_n)
        .into_iter()
        .flatten()
        .filter(|(_, l)| filter.map_or(true, |f| f(l)))
        .map(|(form, lattice)| CorpusItem { lattice, form, provenance: Provenance::Enumerated })
        .collect();
    Ok(Corpus { description: format!("all lattices with at most {max_n} elements"), items })
}

type Level = Vec<(CanonicalForm, Lattice)>;

fn generate_levels(max_n: usize) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let level = match n {
            1 | 2 => {
                let l = Lattice::chain(n);
                vec![(canonical_form(&l), l)]
            }
            _ => extend_level(levels.last().expect("previous level")),
        };
        levels.push(level);
    }
    levels
}

fn extend_level(parents: &Level) -> Level {
    let found: Vec<(CanonicalForm, Lattice)> = parents
        .par_iter()
        .flat_map_iter(|(_, parent)| coatom_extensions(parent))
        .map(|l| (canonical_form(&l), l))
        .collect();
    let mut unique: BTreeMap<CanonicalForm, Lattice> = BTreeMap::new();
    for (form, l) in found {
        unique.entry(form).or_insert(l);
    }
    unique
        .into_iter()
        .map(|(form, l)| {
            let relabeled = canonical_relabel(&l);
            (form, relabeled)
        })
        .collect()
}

/// Lattices obtained from `parent` by adding one new coatom.
fn coatom_extensions(parent: &Lattice) -> Vec<Lattice> {
    let m = parent.size();
    let top = parent.top();
    let body = parent.all().without(top);
    let fresh = ElementId::new(m);
    body.subsets()
        .filter(|s| s.contains(parent.bottom()))
        .filter(|&s| s.iter().all(|x| parent.down_set(x).is_subset(s)))
        .filter_map(|ideal| {
            let mut up: Vec<ElementSet> = parent.elements().map(|x| parent.up_set(x)).collect();
            for x in ideal.iter() {
                up[x.index()].insert(fresh);
            }
            up.push(ElementSet::singleton(fresh).with(top));
            Lattice::from_generating_up_sets(up).ok()
        })
        .collect()
}

/// Reads every `*.json` file in `dir` (sorted by file name). Per-file
/// failures are collected rather than aborting the load.
pub fn load_corpus(dir: &Path, mode: ParseMode) -> Result<(Corpus, Vec<Error>)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut errors = Vec::new();
    let mut lattices = Vec::new();
    for path in paths {
        match io::read_lattice(&path, mode) {
            Ok(parsed) => lattices.push((parsed.lattice, Provenance::File(path))),
            Err(e) => errors.push(e),
        }
    }
    Ok((Corpus::from_lattices(dir.display().to_string(), lattices), errors))
}
