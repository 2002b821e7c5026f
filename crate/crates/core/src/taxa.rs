//! Taxon labels, taxon sets, and the index-based pair/triple types built on them.
//!
//! Every tree and cover carries a [`Taxa`] value: the sorted list of its
//! labels. Cords and triples refer to taxa by their position in that list,
//! so index order coincides with lexicographic label order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RESERVED: &[char] = &['(', ')', ',', ':', ';'];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Taxon(String);

impl Taxon {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.is_empty()
            || label.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
        {
            return Err(Error::InvalidLabel(label));
        }
        Ok(Taxon(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Taxon {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Taxon::new(s)
    }
}

impl From<Taxon> for String {
    fn from(t: Taxon) -> String {
        t.0
    }
}

impl fmt::Display for Taxon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A sorted set of distinct taxa. Position in the set is the taxon index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Taxa(Vec<Taxon>);

impl Taxa {
    /// Builds the set, rejecting duplicates.
    pub fn new(labels: impl IntoIterator<Item = Taxon>) -> Result<Self> {
        let mut v: Vec<Taxon> = labels.into_iter().collect();
        v.sort();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateTaxon(w[0].to_string()));
            }
        }
        Ok(Taxa(v))
    }

    pub fn from_strs<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Taxa::new(
            labels
                .iter()
                .map(|s| Taxon::new(s.as_ref()))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Default labels for generated instances: `a`..`z` for up to 26 taxa,
    /// otherwise zero-padded `t01`, `t02`, ... so that label order is index order.
    pub fn standard(n: usize) -> Self {
        let labels: Vec<Taxon> = if n <= 26 {
            (0..n)
                .map(|i| Taxon(((b'a' + i as u8) as char).to_string()))
                .collect()
        } else {
            let width = n.to_string().len();
            (1..=n).map(|i| Taxon(format!("t{i:0width$}"))).collect()
        };
        Taxa(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> &Taxon {
        &self.0[index]
    }

    pub fn name(&self, index: usize) -> &str {
        self.0[index].as_str()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.binary_search_by(|t| t.as_str().cmp(label)).ok()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownTaxon(label.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Taxon> {
        self.0.iter()
    }

    pub fn labels(&self) -> Vec<String> {
        self.0.iter().map(|t| t.0.clone()).collect()
    }

    /// The subset at the given indices (must be sorted and distinct).
    pub fn subset(&self, indices: &BTreeSet<usize>) -> Taxa {
        Taxa(indices.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// Maps an index of `self` into `sub`, which must be a subset.
    pub(crate) fn reindex_into(&self, sub: &Taxa) -> Vec<Option<usize>> {
        self.0.iter().map(|t| sub.index_of(t.as_str())).collect()
    }
}

/// An unordered pair of distinct taxa, stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cord(usize, usize);

impl Cord {
    pub fn new(x: usize, y: usize) -> Self {
        assert_ne!(x, y, "a cord joins two distinct taxa");
        if x < y {
            Cord(x, y)
        } else {
            Cord(y, x)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    /// The endpoint that is not `x`.
    pub fn other(self, x: usize) -> Option<usize> {
        if self.0 == x {
            Some(self.1)
        } else if self.1 == x {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn display(self, taxa: &Taxa) -> String {
        format!("{}{}", taxa.name(self.0), taxa.name(self.1))
    }

    pub fn labels(self, taxa: &Taxa) -> [String; 2] {
        [taxa.name(self.0).to_string(), taxa.name(self.1).to_string()]
    }
}

/// Three distinct taxa in increasing index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple([usize; 3]);

impl Triple {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut t = [a, b, c];
        t.sort_unstable();
        assert!(t[0] != t[1] && t[1] != t[2], "a triple has three distinct taxa");
        Triple(t)
    }

    pub fn members(self) -> [usize; 3] {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        self.0.contains(&x)
    }

    pub fn cords(self) -> [Cord; 3] {
        let [a, b, c] = self.0;
        [Cord(a, b), Cord(a, c), Cord(b, c)]
    }

    /// Number of shared taxa.
    pub fn overlap(self, other: Triple) -> usize {
        self.0.iter().filter(|x| other.0.contains(x)).count()
    }

    pub fn display(self, taxa: &Taxa) -> String {
        self.0.iter().map(|&i| taxa.name(i)).collect()
    }

    pub fn labels(self, taxa: &Taxa) -> [String; 3] {
        self.0.map(|i| taxa.name(i).to_string())
    }
}

pub type TripleSet = BTreeSet<Triple>;

/// Union of the members of a family of triples.
pub fn union_of<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> BTreeSet<usize> {
    triples.into_iter().flat_map(|t| t.0).collect()
}
