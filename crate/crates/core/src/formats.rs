//! JSON file formats for covers, distances, shellings and tree dumps.
//!
//! Rationals are always strings such as `"2"` or `"7/2"`; decimals like
//! `"0.25"` are accepted on input and converted exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cover::TripletCover;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_positive};
use crate::reconstruction::PartialDistances;
use crate::shelling::ShellingStep;
use crate::taxa::{Cord, Taxa};
use crate::tree::PhyloTree;

/// `{"taxa": ["a", ...], "cords": [["a", "b"], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub taxa: Vec<String>,
    pub cords: Vec<[String; 2]>,
}

impl CoverFile {
    pub fn from_cover(cover: &TripletCover) -> Self {
        CoverFile {
            taxa: cover.taxa().labels(),
            cords: cover.cords().iter().map(|c| c.labels(cover.taxa())).collect(),
        }
    }

    pub fn to_cover(&self) -> Result<TripletCover> {
        let taxa = Taxa::from_strs(&self.taxa)?;
        let pairs: Vec<(&str, &str)> = self.cords.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        TripletCover::from_labels(taxa, &pairs)
    }
}

/// `{"taxa": [...], "distances": [["a", "b", "2"], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceFile {
    pub taxa: Vec<String>,
    pub distances: Vec<[String; 3]>,
}

impl DistanceFile {
    pub fn from_distances(dist: &PartialDistances) -> Self {
        let taxa = dist.taxa();
        DistanceFile {
            taxa: taxa.labels(),
            distances: dist
                .iter()
                .map(|(c, d)| [taxa.name(c.lo()).into(), taxa.name(c.hi()).into(), format_rational(d)])
                .collect(),
        }
    }

    pub fn to_distances(&self) -> Result<PartialDistances> {
        let taxa = Taxa::from_strs(&self.taxa)?;
        let mut values = BTreeMap::new();
        for [a, b, d] in &self.distances {
            let (x, y) = (taxa.require(a)?, taxa.require(b)?);
            if x == y {
                return Err(Error::invalid(format!("distance from {a} to itself")));
            }
            if values.insert(Cord::new(x, y), parse_positive(d)?).is_some() {
                return Err(Error::invalid(format!("duplicate distance for {a}{b}")));
            }
        }
        PartialDistances::new(taxa, values)
    }
}

/// One shelling step as written to disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub cord: [String; 2],
    pub witness_pair: [String; 2],
    /// `xa|yb`; informational, the verifier recomputes it from the tree.
    pub quartet: String,
}

/// `{"steps": [{"cord": ["a","e"], "witness_pair": ["b","c"], "quartet": "ba|ce"}, ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellingFile {
    pub steps: Vec<StepRecord>,
}

impl ShellingFile {
    pub fn from_steps(taxa: &Taxa, steps: &[ShellingStep]) -> Self {
        ShellingFile {
            steps: steps
                .iter()
                .map(|s| StepRecord {
                    cord: [taxa.name(s.cord.0).into(), taxa.name(s.cord.1).into()],
                    witness_pair: [taxa.name(s.witness.0).into(), taxa.name(s.witness.1).into()],
                    quartet: s.quartet(taxa),
                })
                .collect(),
        }
    }

    pub fn to_steps(&self, taxa: &Taxa) -> Result<Vec<ShellingStep>> {
        self.steps
            .iter()
            .map(|r| {
                Ok(ShellingStep {
                    cord: (taxa.require(&r.cord[0])?, taxa.require(&r.cord[1])?),
                    witness: (taxa.require(&r.witness_pair[0])?, taxa.require(&r.witness_pair[1])?),
                })
            })
            .collect()
    }
}

/// An exact rational as numerator and denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    /// Taxon label for leaves, `med(xyz)` for interior vertices.
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub ends: [usize; 2],
    pub length: RationalRecord,
}

/// Debugging dump of a tree: vertex `i < n` is the `i`-th taxon in sorted
/// order; edges are listed by their lower endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDump {
    pub taxa: Vec<String>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

impl TreeDump {
    pub fn new(tree: &PhyloTree) -> Self {
        let vertices = (0..tree.vertex_count())
            .map(|i| {
                let v = crate::tree::VertexId(i);
                VertexRecord {
                    id: i,
                    name: tree.vertex_name(v),
                }
            })
            .collect();
        let mut edges: Vec<EdgeRecord> = tree
            .edges()
            .iter()
            .map(|e| {
                let (u, v) = (e.ends.0.index(), e.ends.1.index());
                EdgeRecord {
                    ends: [u.min(v), u.max(v)],
                    length: RationalRecord {
                        num: e.length.numer().to_string(),
                        den: e.length.denom().to_string(),
                    },
                }
            })
            .collect();
        edges.sort_by_key(|e| e.ends);
        TreeDump {
            taxa: tree.taxa().labels(),
            vertices,
            edges,
        }
    }
}

/// Labels of a triple family, e.g. `["abc", "bce"]`.
pub fn triple_labels(taxa: &Taxa, triples: &BTreeSet<crate::taxa::Triple>) -> Vec<String> {
    triples.iter().map(|t| t.display(taxa)).collect()
}
