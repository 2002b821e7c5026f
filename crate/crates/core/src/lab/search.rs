//! Searching for covers with prescribed properties, and the fixture store.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{enumerate_binary_trees, random_instance, CoverPolicy};
use crate::cover::{canonical_cover, is_minimal, is_sparse, is_triplet_cover, Assigned, TripletCover};
use crate::error::{Error, Result};
use crate::newick::{parse_newick, write_newick};
use crate::shelling::{is_shellable, shellable_via_patchwork, PatchworkVerdict};
use crate::taxa::{Taxa, Triple};
use crate::tree::{PhyloTree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixturePredicate {
    /// Minimal but not sparse.
    MinimalNotSparse,
    /// Sparse, minimal, every taxon in at least four cords.
    SparseMinimalMu4,
    /// Sparse and not shellable.
    SparseNotShellable,
    /// Sparse, minimal and shellable, with a patchwork that is not ample.
    ShellableNotAmple,
    /// Exactly `2n - 3` cords.
    Minimum,
}

impl FixturePredicate {
    pub const ALL: [FixturePredicate; 5] = [
        FixturePredicate::MinimalNotSparse,
        FixturePredicate::SparseMinimalMu4,
        FixturePredicate::SparseNotShellable,
        FixturePredicate::ShellableNotAmple,
        FixturePredicate::Minimum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixturePredicate::MinimalNotSparse => "minimal-not-sparse",
            FixturePredicate::SparseMinimalMu4 => "sparse-minimal-mu4",
            FixturePredicate::SparseNotShellable => "sparse-not-shellable",
            FixturePredicate::ShellableNotAmple => "shellable-not-ample",
            FixturePredicate::Minimum => "minimum",
        }
    }

    /// Whether the flags satisfy the predicate.
    pub fn accepts(self, f: &Flags) -> bool {
        f.is_cover
            && match self {
                FixturePredicate::MinimalNotSparse => f.is_minimal && !f.is_sparse,
                FixturePredicate::SparseMinimalMu4 => f.is_sparse && f.is_minimal && f.mu == 4,
                FixturePredicate::SparseNotShellable => f.is_sparse && !f.is_shellable,
                FixturePredicate::ShellableNotAmple => {
                    f.is_sparse && f.is_minimal && f.is_shellable && f.ample == Some(false)
                }
                FixturePredicate::Minimum => f.is_minimum,
            }
    }

    /// Cheap screen on the cover alone before computing full flags.
    fn may_accept(self, tree: &PhyloTree, cover: &TripletCover) -> Result<bool> {
        let n = tree.leaf_count();
        Ok(match self {
            FixturePredicate::SparseMinimalMu4 => cover.mu() >= 4 && is_sparse(tree, cover)?,
            FixturePredicate::Minimum => cover.len() == 2 * n - 3,
            FixturePredicate::SparseNotShellable | FixturePredicate::ShellableNotAmple => is_sparse(tree, cover)?,
            FixturePredicate::MinimalNotSparse => !is_sparse(tree, cover)? && is_minimal(tree, cover)?,
        })
    }
}

impl fmt::Display for FixturePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixturePredicate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FixturePredicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown predicate `{s}`")))
    }
}

/// Classification of a stored instance. Always recomputed, never trusted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub is_cover: bool,
    pub is_minimal: bool,
    pub is_minimum: bool,
    pub is_sparse: bool,
    pub mu: usize,
    pub is_shellable: bool,
    /// `None` when the section search hit its limits.
    pub ample: Option<bool>,
}

impl Flags {
    pub fn compute(tree: &PhyloTree, cover: &TripletCover) -> Result<Flags> {
        let n = tree.leaf_count();
        if !is_triplet_cover(tree, cover)? {
            return Ok(Flags {
                is_cover: false,
                is_minimal: false,
                is_minimum: false,
                is_sparse: false,
                mu: cover.mu(),
                is_shellable: false,
                ample: None,
            });
        }
        let ample = match shellable_via_patchwork(
            tree,
            cover,
            crate::shelling::DEFAULT_SECTION_LIMIT,
            crate::shelling::DEFAULT_AMPLE_CAP,
        )? {
            PatchworkVerdict::Ample { .. } => Some(true),
            PatchworkVerdict::NotAmple => Some(false),
            PatchworkVerdict::Indeterminate(_) => None,
        };
        Ok(Flags {
            is_cover: true,
            is_minimal: is_minimal(tree, cover)?,
            is_minimum: cover.len() == 2 * n - 3,
            is_sparse: is_sparse(tree, cover)?,
            mu: cover.mu(),
            is_shellable: is_shellable(tree, cover)?.is_some(),
            ample,
        })
    }
}

/// A stored instance: tree, cover, flags and where it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub predicate: String,
    /// `exhaustive` or `seeded:<cover policy>`.
    pub generator: String,
    pub seed: u64,
    pub tree: String,
    pub taxa: Vec<String>,
    pub cords: Vec<[String; 2]>,
    pub flags: Flags,
}

impl InstanceRecord {
    pub fn new(
        predicate: FixturePredicate,
        generator: impl Into<String>,
        seed: u64,
        tree: &PhyloTree,
        cover: &TripletCover,
    ) -> Result<Self> {
        Ok(InstanceRecord {
            predicate: predicate.name().to_string(),
            generator: generator.into(),
            seed,
            tree: write_newick(tree),
            taxa: tree.taxa().labels(),
            cords: cover.cords().iter().map(|c| c.labels(cover.taxa())).collect(),
            flags: Flags::compute(tree, cover)?,
        })
    }

    pub fn instance(&self) -> Result<(PhyloTree, TripletCover)> {
        let tree = parse_newick(&self.tree)?;
        let taxa = Taxa::from_strs(&self.taxa)?;
        if &taxa != tree.taxa() {
            return Err(Error::TaxonMismatch);
        }
        let pairs: Vec<(&str, &str)> = self.cords.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let cover = TripletCover::from_labels(taxa, &pairs)?;
        Ok((tree, cover))
    }

    /// Recomputes the flags and checks them against the stored ones and
    /// against the predicate.
    pub fn verify(&self) -> Result<(PhyloTree, TripletCover)> {
        let (tree, cover) = self.instance()?;
        let flags = Flags::compute(&tree, &cover)?;
        if flags != self.flags {
            return Err(Error::invalid(format!(
                "stored flags {:?} disagree with recomputed {:?}",
                self.flags, flags
            )));
        }
        let predicate: FixturePredicate = self.predicate.parse()?;
        if !predicate.accepts(&flags) {
            return Err(Error::invalid(format!("instance does not satisfy {predicate}")));
        }
        Ok((tree, cover))
    }

    /// `<dir>/<predicate>/<n>/<seed>.json`
    pub fn path_in(&self, dir: &Path) -> PathBuf {
        dir.join(&self.predicate)
            .join(self.taxa.len().to_string())
            .join(format!("{}.json", self.seed))
    }

    pub fn save(&self, dir: &Path) -> std::io::Result<PathBuf> {
        let path = self.path_in(dir);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        fs::write(&path, text + "\n")?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Limits for [`search_fixture`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Exhaustive sweep over topologies and leaf choices up to this size.
    pub exhaustive_max_n: usize,
    /// Seeds tried per taxon count beyond the exhaustive range.
    pub seeds_per_n: u64,
    /// Worker threads for the seeded sweep (1 runs inline).
    pub jobs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_max_n: 6,
            seeds_per_n: 2000,
            jobs: 1,
        }
    }
}

/// Cover policies tried per seed, in order.
const SEEDED_POLICIES: [CoverPolicy; 3] = [CoverPolicy::Balanced, CoverPolicy::Random, CoverPolicy::UnionMinimal];

/// First instance satisfying the predicate: exhaustive over every topology
/// and every leaf choice for small `n`, then seeds in increasing order.
pub fn search_fixture(
    predicate: FixturePredicate,
    sizes: std::ops::RangeInclusive<usize>,
    budget: SearchBudget,
) -> Result<Option<InstanceRecord>> {
    for n in sizes {
        let found = if n <= budget.exhaustive_max_n {
            exhaustive(predicate, n)?
        } else {
            seeded(predicate, n, budget)?
        };
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn exhaustive(predicate: FixturePredicate, n: usize) -> Result<Option<InstanceRecord>> {
    let mut index = 0u64;
    for topology in enumerate_binary_trees(&Taxa::standard(n))? {
        let options: Vec<(VertexId, Vec<Triple>)> = topology
            .interior_vertices()
            .map(|v| {
                let comps = topology.components(v);
                let mut triples = Vec::new();
                for &a in &comps[0] {
                    for &b in &comps[1] {
                        for &c in &comps[2] {
                            triples.push(Triple::new(a, b, c));
                        }
                    }
                }
                (v, triples)
            })
            .collect();
        let mut digits = vec![0usize; options.len()];
        loop {
            let assigned: BTreeMap<VertexId, Triple> =
                options.iter().zip(&digits).map(|((v, ts), &d)| (*v, ts[d])).collect();
            let cover = canonical_cover(&topology, &mut Assigned(assigned));
            if predicate.may_accept(&topology, &cover)? {
                let record = InstanceRecord::new(predicate, "exhaustive", index, &topology, &cover)?;
                if predicate.accepts(&record.flags) {
                    return Ok(Some(record));
                }
            }
            index += 1;
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < options[i].1.len() {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(None)
}

fn try_seed(predicate: FixturePredicate, n: usize, seed: u64) -> Result<Option<InstanceRecord>> {
    for policy in SEEDED_POLICIES {
        let (tree, cover) = random_instance(n, seed, policy)?;
        if predicate.may_accept(&tree, &cover)? {
            let record = InstanceRecord::new(predicate, format!("seeded:{policy}"), seed, &tree, &cover)?;
            if predicate.accepts(&record.flags) {
                return Ok(Some(record));
            }
        }
    }
    Ok(None)
}

fn seeded(predicate: FixturePredicate, n: usize, budget: SearchBudget) -> Result<Option<InstanceRecord>> {
    if budget.jobs <= 1 {
        for seed in 0..budget.seeds_per_n {
            if let Some(r) = try_seed(predicate, n, seed)? {
                return Ok(Some(r));
            }
        }
        return Ok(None);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.jobs)
        .build()
        .map_err(|e| Error::invalid(e.to_string()))?;
    // the first seed in order wins, whichever worker finds it
    pool.install(|| {
        (0..budget.seeds_per_n)
            .into_par_iter()
            .map(|seed| try_seed(predicate, n, seed))
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            })
            .unwrap_or(Ok(None))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicate_names_round_trip() {
        for p in FixturePredicate::ALL {
            assert_eq!(p.name().parse::<FixturePredicate>().unwrap(), p);
        }
    }

    #[test]
    fn minimum_found_small() {
        let r = search_fixture(FixturePredicate::Minimum, 4..=5, SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(r.taxa.len(), 4);
        assert_eq!(r.cords.len(), 5);
        r.verify().unwrap();
    }

    #[test]
    fn tampered_flags_rejected() {
        let mut r = search_fixture(FixturePredicate::Minimum, 5..=5, SearchBudget::default())
            .unwrap()
            .unwrap();
        r.flags.mu += 1;
        assert!(r.verify().is_err());
    }

    #[test]
    fn store_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = search_fixture(FixturePredicate::Minimum, 5..=5, SearchBudget::default())
            .unwrap()
            .unwrap();
        let path = r.save(dir.path()).unwrap();
        assert!(path.ends_with(format!("minimum/5/{}.json", r.seed)));
        let back = InstanceRecord::load(&path).unwrap();
        assert_eq!(back, r);
        back.verify().unwrap();
    }

    #[test]
    fn parallel_matches_serial() {
        let serial = SearchBudget { exhaustive_max_n: 0, seeds_per_n: 200, jobs: 1 };
        let parallel = SearchBudget { jobs: 4, ..serial };
        let a = search_fixture(FixturePredicate::MinimalNotSparse, 7..=7, serial).unwrap();
        let b = search_fixture(FixturePredicate::MinimalNotSparse, 7..=7, parallel).unwrap();
        assert_eq!(a, b);
    }
}
