//! Triplet covers and their classification.
//!
//! A cover is a set of cords over a taxon set. Relative to a tree, a triple
//! `abc` supports interior vertex `v` when `a`, `b`, `c` lie in the three
//! different components of `T - v` and all three of `ab`, `ac`, `bc` are
//! cords. The cover is a triplet cover when every interior vertex has
//! nonempty support.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigUint, One};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::taxa::{union_of, Cord, Taxa, Triple, TripleSet};
use crate::tree::{PhyloTree, VertexId};

/// Largest triple family [`is_hall_type`] will enumerate by default.
pub const DEFAULT_HALL_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripletCover {
    taxa: Taxa,
    cords: BTreeSet<Cord>,
}

impl TripletCover {
    pub fn new(taxa: Taxa, cords: impl IntoIterator<Item = Cord>) -> Result<Self> {
        let cords: BTreeSet<Cord> = cords.into_iter().collect();
        if let Some(c) = cords.iter().find(|c| c.hi() >= taxa.len()) {
            return Err(Error::UnknownTaxon(format!("#{}", c.hi())));
        }
        Ok(TripletCover { taxa, cords })
    }

    /// Builds a cover from label pairs such as `[("a", "b"), ...]`.
    pub fn from_labels(taxa: Taxa, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut cords = BTreeSet::new();
        for (x, y) in pairs {
            let (i, j) = (taxa.require(x)?, taxa.require(y)?);
            if i == j {
                return Err(Error::RepeatedTaxon);
            }
            if !cords.insert(Cord::new(i, j)) {
                return Err(Error::invalid(format!("duplicate cord {x}{y}")));
            }
        }
        TripletCover::new(taxa, cords)
    }

    /// Every pair of taxa.
    pub fn complete(taxa: Taxa) -> Self {
        let n = taxa.len();
        let cords = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| Cord::new(i, j)))
            .collect();
        TripletCover { taxa, cords }
    }

    pub fn taxa(&self) -> &Taxa {
        &self.taxa
    }

    pub fn cords(&self) -> &BTreeSet<Cord> {
        &self.cords
    }

    pub fn len(&self) -> usize {
        self.cords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cords.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x != y && self.cords.contains(&Cord::new(x, y))
    }

    pub fn with_cord(&self, c: Cord) -> Self {
        let mut out = self.clone();
        out.cords.insert(c);
        out
    }

    pub fn without_cord(&self, c: Cord) -> Self {
        let mut out = self.clone();
        out.cords.remove(&c);
        out
    }

    /// Number of cords containing `x`.
    pub fn multiplicity(&self, x: usize) -> Result<usize> {
        if x >= self.taxa.len() {
            return Err(Error::UnknownTaxon(format!("#{x}")));
        }
        Ok(self.cords.iter().filter(|c| c.contains(x)).count())
    }

    /// Least multiplicity over all taxa.
    pub fn mu(&self) -> usize {
        let mut counts = vec![0usize; self.taxa.len()];
        for c in &self.cords {
            counts[c.lo()] += 1;
            counts[c.hi()] += 1;
        }
        counts.into_iter().min().unwrap_or(0)
    }

    /// `T^{-x}`: drop every cord containing `x` and the taxon itself.
    pub fn remove_taxon(&self, x: usize) -> Result<TripletCover> {
        if x >= self.taxa.len() {
            return Err(Error::UnknownTaxon(format!("#{x}")));
        }
        let keep: BTreeSet<usize> = (0..self.taxa.len()).filter(|&y| y != x).collect();
        Ok(self.restrict(&keep))
    }

    /// `T|_A`: cords with both ends in `keep`, over the taxon set `keep`.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> TripletCover {
        let sub = self.taxa.subset(keep);
        let map = self.taxa.reindex_into(&sub);
        let cords = self
            .cords
            .iter()
            .filter_map(|c| Some(Cord::new(map[c.lo()]?, map[c.hi()]?)))
            .collect();
        TripletCover { taxa: sub, cords }
    }

    pub fn display(&self) -> String {
        let names: Vec<String> = self.cords.iter().map(|c| c.display(&self.taxa)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// Support of each interior vertex, in interior-vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMap {
    entries: Vec<(VertexId, TripleSet)>,
}

impl SupportMap {
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &TripleSet)> {
        self.entries.iter().map(|(v, s)| (*v, s))
    }

    pub fn get(&self, v: VertexId) -> Option<&TripleSet> {
        self.entries.iter().find(|(w, _)| *w == v).map(|(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First interior vertex with empty support.
    pub fn unsupported(&self) -> Option<VertexId> {
        self.entries.iter().find(|(_, s)| s.is_empty()).map(|(v, _)| *v)
    }

    pub fn is_cover(&self) -> bool {
        self.unsupported().is_none()
    }

    /// `C(T)`, the disjoint union of all supports.
    pub fn triple_set(&self) -> TripleSet {
        self.entries.iter().flat_map(|(_, s)| s.iter().copied()).collect()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, s)| s.len()).sum()
    }

    /// Number of sections: the product of the support sizes.
    pub fn section_count(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (_, s)| acc * BigUint::from(s.len()))
    }

    /// Lazy cursor over the sections in odometer order (the last interior
    /// vertex varies fastest, each support in triple order).
    pub fn sections(&self) -> Result<Sections> {
        if let Some((v, _)) = self.entries.iter().find(|(_, s)| s.is_empty()) {
            return Err(Error::NotACover(format!("#{}", v.index())));
        }
        Ok(Sections {
            supports: self
                .entries
                .iter()
                .map(|(_, s)| s.iter().copied().collect())
                .collect(),
            digits: Some(vec![0; self.entries.len()]),
        })
    }
}

pub struct Sections {
    supports: Vec<Vec<Triple>>,
    digits: Option<Vec<usize>>,
}

impl Iterator for Sections {
    type Item = TripleSet;

    fn next(&mut self) -> Option<TripleSet> {
        let digits = self.digits.as_mut()?;
        let out = digits
            .iter()
            .zip(&self.supports)
            .map(|(&d, s)| s[d])
            .collect();
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.supports[i].len() {
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    }
}

fn check_taxa(tree: &PhyloTree, cover: &TripletCover) -> Result<()> {
    if tree.taxa() != cover.taxa() {
        return Err(Error::TaxonMismatch);
    }
    Ok(())
}

/// `S_v(T)` for every interior vertex `v`.
pub fn support_map(tree: &PhyloTree, cover: &TripletCover) -> Result<SupportMap> {
    check_taxa(tree, cover)?;
    let entries = tree
        .interior_vertices()
        .map(|v| (v, vertex_support(tree, cover, v)))
        .collect();
    Ok(SupportMap { entries })
}

fn vertex_support(tree: &PhyloTree, cover: &TripletCover, v: VertexId) -> TripleSet {
    let comps = tree.components(v);
    let mut out = TripleSet::new();
    for &a in &comps[0] {
        for &b in &comps[1] {
            if !cover.contains(a, b) {
                continue;
            }
            for &c in &comps[2] {
                if cover.contains(a, c) && cover.contains(b, c) {
                    out.insert(Triple::new(a, b, c));
                }
            }
        }
    }
    out
}

pub fn is_triplet_cover(tree: &PhyloTree, cover: &TripletCover) -> Result<bool> {
    check_taxa(tree, cover)?;
    Ok(tree
        .interior_vertices()
        .all(|v| !vertex_support(tree, cover, v).is_empty()))
}

/// Errors with [`Error::NotACover`] naming the first unsupported vertex.
pub fn require_cover(tree: &PhyloTree, cover: &TripletCover) -> Result<SupportMap> {
    let sm = support_map(tree, cover)?;
    if let Some(v) = sm.unsupported() {
        return Err(Error::NotACover(tree.vertex_name(v)));
    }
    Ok(sm)
}

pub fn triple_set(tree: &PhyloTree, cover: &TripletCover) -> Result<TripleSet> {
    Ok(support_map(tree, cover)?.triple_set())
}

pub fn is_minimal(tree: &PhyloTree, cover: &TripletCover) -> Result<bool> {
    let sm = require_cover(tree, cover)?;
    // removing cord c breaks the cover iff some vertex has every supporting
    // triple using c
    Ok(cover.cords().iter().all(|&c| {
        sm.iter()
            .any(|(_, s)| s.iter().all(|t| t.cords().contains(&c)))
    }))
}

/// Order in which [`minimalize`] tries to drop cords.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalOrder {
    Lexicographic,
    Seeded(u64),
}

/// Greedily drops cords while the cover property survives.
///
/// A single pass suffices: supports only shrink as cords go, so a cord that
/// could not be dropped earlier never becomes droppable later.
pub fn minimalize(tree: &PhyloTree, cover: &TripletCover, order: RemovalOrder) -> Result<TripletCover> {
    require_cover(tree, cover)?;
    let mut candidates: Vec<Cord> = cover.cords().iter().copied().collect();
    if let RemovalOrder::Seeded(seed) = order {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut current = cover.clone();
    for c in candidates {
        let trial = current.without_cord(c);
        if is_triplet_cover(tree, &trial)? {
            current = trial;
        }
    }
    Ok(current)
}

/// `|C(T)| = |X| - 2`.
pub fn is_sparse(tree: &PhyloTree, cover: &TripletCover) -> Result<bool> {
    let sm = require_cover(tree, cover)?;
    Ok(sm.total() == tree.leaf_count() - 2)
}

/// Hall-type test by enumerating every nonempty subfamily.
///
/// True iff the triples cover all `taxa` and every nonempty subfamily `C'`
/// spans at least `|C'| + 2` taxa.
pub fn is_hall_type(taxa: &Taxa, triples: &TripleSet, cap: usize) -> Result<bool> {
    let n = taxa.len();
    if triples.iter().any(|t| t.members()[2] >= n) {
        return Err(Error::invalid("triple outside the taxon set"));
    }
    // the whole family is itself a subfamily
    if union_of(triples).len() != n || n < triples.len() + 2 {
        return Ok(false);
    }
    if triples.len() > cap {
        return Err(Error::Capacity {
            what: "Hall-type subset enumeration",
            limit: cap,
            actual: triples.len(),
        });
    }
    // the union covers X, so n <= 3 * cap; masks need one bit per taxon
    if n > 128 {
        return Err(Error::Capacity {
            what: "Hall-type taxon count",
            limit: 128,
            actual: n,
        });
    }
    let masks: Vec<u128> = triples
        .iter()
        .map(|t| t.members().iter().fold(0u128, |m, &x| m | (1u128 << x)))
        .collect();

    fn walk(masks: &[u128], i: usize, union: u128, chosen: u32) -> bool {
        if i == masks.len() {
            return chosen == 0 || union.count_ones() >= chosen + 2;
        }
        walk(masks, i + 1, union, chosen) && walk(masks, i + 1, union | masks[i], chosen + 1)
    }
    Ok(walk(&masks, 0, 0, 0))
}

/// Up to `limit` sections, in the order of [`SupportMap::sections`].
pub fn enumerate_sections(support: &SupportMap, limit: usize) -> Result<Vec<TripleSet>> {
    if limit == 0 {
        return Err(Error::invalid("section limit must be positive"));
    }
    Ok(support.sections()?.take(limit).collect())
}

/// `Co(C)`: all pairs inside some member.
pub fn cord_set(triples: &TripleSet) -> BTreeSet<Cord> {
    triples.iter().flat_map(|t| t.cords()).collect()
}

/// Picks one leaf from each component of `T - v` for the canonical cover.
pub trait LeafChooser {
    fn choose(&mut self, tree: &PhyloTree, v: VertexId, components: &[BTreeSet<usize>]) -> Triple;
}

/// The least taxon of each component.
#[derive(Debug, Default, Clone, Copy)]
pub struct LeastLabel;

impl LeafChooser for LeastLabel {
    fn choose(&mut self, _: &PhyloTree, _: VertexId, comps: &[BTreeSet<usize>]) -> Triple {
        let first = |c: &BTreeSet<usize>| *c.iter().next().unwrap();
        Triple::new(first(&comps[0]), first(&comps[1]), first(&comps[2]))
    }
}

/// A uniformly random taxon of each component, from a seeded stream.
#[derive(Debug, Clone)]
pub struct SeededRandom(ChaCha8Rng);

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        SeededRandom(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl LeafChooser for SeededRandom {
    fn choose(&mut self, _: &PhyloTree, _: VertexId, comps: &[BTreeSet<usize>]) -> Triple {
        let mut pick = |c: &BTreeSet<usize>| *c.iter().nth(self.0.gen_range(0..c.len())).unwrap();
        let (a, b, c) = (pick(&comps[0]), pick(&comps[1]), pick(&comps[2]));
        Triple::new(a, b, c)
    }
}

/// A fixed triple per interior vertex, e.g. from an exhaustive sweep.
#[derive(Debug, Clone)]
pub struct Assigned(pub BTreeMap<VertexId, Triple>);

impl LeafChooser for Assigned {
    fn choose(&mut self, tree: &PhyloTree, v: VertexId, comps: &[BTreeSet<usize>]) -> Triple {
        match self.0.get(&v) {
            Some(t) => *t,
            None => LeastLabel.choose(tree, v, comps),
        }
    }
}

/// Union over interior vertices of the three cords of the chosen triple.
pub fn canonical_cover(tree: &PhyloTree, chooser: &mut dyn LeafChooser) -> TripletCover {
    let mut cords = BTreeSet::new();
    for v in tree.interior_vertices() {
        let comps = tree.components(v);
        let t = chooser.choose(tree, v, &comps);
        debug_assert!(
            comps.iter().all(|c| t.members().iter().filter(|x| c.contains(x)).count() == 1),
            "chooser must pick one leaf per component"
        );
        cords.extend(t.cords());
    }
    TripletCover {
        taxa: tree.taxa().clone(),
        cords,
    }
}
