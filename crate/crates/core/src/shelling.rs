//! Shellings of triplet covers, cord closure, and ample patchworks.
//!
//! A shelling adds the missing cords one at a time. Cord `ab` may be added
//! once there are taxa `x, y` such that `T` restricted to `{a, b, x, y}` is
//! the quartet `xa|yb` and the other five pairs of that set are already
//! available. Adding cords never removes a witness, so a greedy closure that
//! adds whatever it can reaches the same final set in every order, and a
//! cover is shellable exactly when that closure is complete.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cover::{require_cover, support_map, TripletCover};
use crate::error::{Error, Result};
use crate::taxa::{union_of, Cord, Taxa, TripleSet};
use crate::tree::{PhyloTree, Quartet};

/// Default number of sections examined by [`shellable_via_patchwork`].
pub const DEFAULT_SECTION_LIMIT: usize = 10_000;
/// Largest section [`is_ample`] will search.
pub const DEFAULT_AMPLE_CAP: usize = 16;

/// One added cord `ab` with witnesses `x, y` such that `T|{a,b,x,y}` is `xa|yb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShellingStep {
    pub cord: (usize, usize),
    pub witness: (usize, usize),
}

impl ShellingStep {
    /// The witness quartet written `xa|yb`.
    pub fn quartet(&self, taxa: &Taxa) -> String {
        let (a, b) = self.cord;
        let (x, y) = self.witness;
        format!("{}{}|{}{}", taxa.name(x), taxa.name(a), taxa.name(y), taxa.name(b))
    }

    fn required(&self) -> [Cord; 5] {
        let (a, b) = self.cord;
        let (x, y) = self.witness;
        [Cord::new(x, a), Cord::new(x, b), Cord::new(y, a), Cord::new(y, b), Cord::new(x, y)]
    }
}

/// Result of saturating a cover under shelling steps.
#[derive(Debug, Clone)]
pub struct Closure {
    pub cords: BTreeSet<Cord>,
    pub steps: Vec<ShellingStep>,
    n: usize,
}

impl Closure {
    pub fn is_complete(&self) -> bool {
        self.cords.len() == self.n * (self.n - 1) / 2
    }

    pub fn missing(&self) -> Vec<Cord> {
        (0..self.n)
            .flat_map(|a| (a + 1..self.n).map(move |b| Cord::new(a, b)))
            .filter(|c| !self.cords.contains(c))
            .collect()
    }
}

/// Greedy closure scanning missing cords in lexicographic order and
/// restarting from the first after every addition.
pub fn cord_closure(tree: &PhyloTree, cover: &TripletCover) -> Result<Closure> {
    close(tree, cover, None)
}

/// The closure with missing cords tried in a seeded random priority order.
pub fn cord_closure_shuffled(tree: &PhyloTree, cover: &TripletCover, seed: u64) -> Result<Closure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cover.taxa().len();
    let mut order: Vec<Cord> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| Cord::new(a, b)))
        .collect();
    order.shuffle(&mut rng);
    close(tree, cover, Some(order))
}

fn close(tree: &PhyloTree, cover: &TripletCover, order: Option<Vec<Cord>>) -> Result<Closure> {
    require_cover(tree, cover)?;
    let n = cover.taxa().len();
    let hops = tree.hop_matrix();
    let mut present = vec![vec![false; n]; n];
    for c in cover.cords() {
        present[c.lo()][c.hi()] = true;
        present[c.hi()][c.lo()] = true;
    }
    let order = order.unwrap_or_else(|| {
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| Cord::new(a, b)))
            .collect()
    });
    let mut pending: Vec<Cord> = order.into_iter().filter(|c| !present[c.lo()][c.hi()]).collect();
    let mut steps = Vec::new();
    'scan: loop {
        for i in 0..pending.len() {
            let c = pending[i];
            let (a, b) = (c.lo(), c.hi());
            if let Some(witness) = find_witness(&present, &hops, a, b) {
                let step = ShellingStep { cord: (a, b), witness };
                let (x, y) = witness;
                if tree.quartet_topology(a, b, x, y)? != Quartet::AxBy {
                    return Err(Error::Invariant(format!(
                        "closure accepted {} with a witness the tree does not display",
                        step.quartet(tree.taxa())
                    )));
                }
                present[a][b] = true;
                present[b][a] = true;
                steps.push(step);
                pending.remove(i);
                continue 'scan;
            }
        }
        break;
    }
    let mut cords = cover.cords().clone();
    cords.extend(steps.iter().map(|s| Cord::new(s.cord.0, s.cord.1)));
    Ok(Closure { cords, steps, n })
}

/// Least witness pair `(x, y)` for cord `ab`, using hop counts: in a binary
/// tree the pairing of a quartet is the one with strictly least path sum.
fn find_witness(present: &[Vec<bool>], hops: &[Vec<u32>], a: usize, b: usize) -> Option<(usize, usize)> {
    let n = present.len();
    let linked = |x: usize| x != a && x != b && present[x][a] && present[x][b];
    for x in (0..n).filter(|&x| linked(x)) {
        for y in (0..n).filter(|&y| y != x && linked(y) && present[x][y]) {
            let split = hops[x][a] + hops[y][b];
            if split < hops[a][b] + hops[x][y] && split < hops[x][b] + hops[y][a] {
                return Some((x, y));
            }
        }
    }
    None
}

/// A shelling when the cover is shellable.
pub fn is_shellable(tree: &PhyloTree, cover: &TripletCover) -> Result<Option<Vec<ShellingStep>>> {
    let closure = cord_closure(tree, cover)?;
    Ok(closure.is_complete().then_some(closure.steps))
}

/// Checks a proposed shelling step by step against the tree, without using
/// the closure machinery.
pub fn verify_shelling(tree: &PhyloTree, cover: &TripletCover, steps: &[ShellingStep]) -> Result<()> {
    require_cover(tree, cover)?;
    let n = cover.taxa().len();
    let taxa = tree.taxa();
    let mut have = cover.cords().clone();
    for (i, step) in steps.iter().enumerate() {
        let fail = |reason: String| Error::InvalidShelling { step: i, reason };
        let (a, b) = step.cord;
        let (x, y) = step.witness;
        if [a, b, x, y].iter().any(|&t| t >= n) {
            return Err(fail("taxon out of range".into()));
        }
        if [a, b, x, y].iter().collect::<BTreeSet<_>>().len() != 4 {
            return Err(fail("cord and witnesses must be four distinct taxa".into()));
        }
        let cord = Cord::new(a, b);
        if have.contains(&cord) {
            return Err(fail(format!("cord {} is already available", cord.display(taxa))));
        }
        if tree.quartet_topology(a, b, x, y)? != Quartet::AxBy {
            return Err(fail(format!("tree does not display {}", step.quartet(taxa))));
        }
        if let Some(c) = step.required().iter().find(|c| !have.contains(c)) {
            return Err(fail(format!("cord {} is not yet available", c.display(taxa))));
        }
        have.insert(cord);
    }
    if have.len() != n * (n - 1) / 2 {
        return Err(Error::InvalidShelling {
            step: steps.len(),
            reason: format!("{} cords still missing", n * (n - 1) / 2 - have.len()),
        });
    }
    Ok(())
}

/// Picks witnesses for a prescribed order of missing cords, checking each
/// quartet directly on the tree. Fails at the first cord with no witness.
pub fn shelling_for_order(tree: &PhyloTree, cover: &TripletCover, order: &[Cord]) -> Result<Vec<ShellingStep>> {
    require_cover(tree, cover)?;
    let n = cover.taxa().len();
    let mut have = cover.cords().clone();
    let mut steps = Vec::new();
    for (i, &c) in order.iter().enumerate() {
        let (a, b) = (c.lo(), c.hi());
        let mut found = None;
        'search: for x in 0..n {
            for y in 0..n {
                if [a, b].contains(&x) || [a, b, x].contains(&y) {
                    continue;
                }
                let step = ShellingStep { cord: (a, b), witness: (x, y) };
                if step.required().iter().all(|r| have.contains(r))
                    && tree.quartet_topology(a, b, x, y)? == Quartet::AxBy
                {
                    found = Some(step);
                    break 'search;
                }
            }
        }
        let step = found.ok_or_else(|| Error::InvalidShelling {
            step: i,
            reason: format!("no witness for {}", c.display(tree.taxa())),
        })?;
        have.insert(c);
        steps.push(step);
    }
    Ok(steps)
}

/// `C'` belongs to `P(C)` when `|∪C'| = |C'| + 2`.
pub fn patchwork_membership(section: &TripleSet, subset: &TripleSet) -> Result<bool> {
    if subset.is_empty() {
        return Err(Error::invalid("empty subset"));
    }
    if !subset.is_subset(section) {
        return Err(Error::invalid("subset is not contained in the section"));
    }
    Ok(union_of(subset).len() == subset.len() + 2)
}

/// A maximal hierarchy as a binary tree of nested subsets: every set with
/// more than one triple is the disjoint union of its two children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hierarchy {
    pub set: TripleSet,
    pub children: Option<Box<[Hierarchy; 2]>>,
}

impl Hierarchy {
    /// All member sets, parents before children.
    pub fn members(&self) -> Vec<TripleSet> {
        let mut out = vec![self.set.clone()];
        if let Some(kids) = &self.children {
            out.extend(kids[0].members());
            out.extend(kids[1].members());
        }
        out
    }

    /// Laminar, contains the full set and singletons, and has `2k - 1`
    /// members on a `k`-set, hence maximal.
    pub fn is_maximal_on(&self, ground: &TripleSet) -> bool {
        let members = self.members();
        let laminar = members.iter().enumerate().all(|(i, a)| {
            members[i + 1..]
                .iter()
                .all(|b| a.is_disjoint(b) || a.is_subset(b) || b.is_subset(a))
        });
        let distinct: BTreeSet<&TripleSet> = members.iter().collect();
        laminar
            && self.set == *ground
            && distinct.len() == members.len()
            && members.len() == 2 * ground.len() - 1
            && members.iter().all(|m| m.is_subset(ground))
            && ground.iter().all(|t| members.iter().any(|m| m.len() == 1 && m.contains(t)))
    }
}

/// Whether `P(C)` is ample, with a maximal hierarchy inside it as witness.
///
/// A maximal hierarchy is a recursive splitting of the section into two
/// disjoint parts, so the search asks whether the full section can be split
/// recursively with every part in `P(C)`.
pub fn is_ample(taxon_count: usize, section: &TripleSet, cap: usize) -> Result<Option<Hierarchy>> {
    if section.len() + 2 != taxon_count || union_of(section).len() != taxon_count {
        return Err(Error::invalid(format!(
            "not section-shaped: {} triples over {} taxa",
            section.len(),
            taxon_count
        )));
    }
    if section.len() > cap.min(32) {
        return Err(Error::Capacity {
            what: "ample patchwork search section size",
            limit: cap.min(32),
            actual: section.len(),
        });
    }
    let triples: Vec<_> = section.iter().copied().collect();
    let masks: Vec<u128> = triples
        .iter()
        .map(|t| t.members().iter().fold(0u128, |m, &x| m | (1u128 << x)))
        .collect();
    if taxon_count > 128 {
        return Err(Error::Capacity {
            what: "ample patchwork search taxon count",
            limit: 128,
            actual: taxon_count,
        });
    }
    let mut search = AmpleSearch {
        masks,
        memo: HashMap::new(),
    };
    let full = if triples.len() == 32 { u32::MAX } else { (1u32 << triples.len()) - 1 };
    if !search.feasible(full)? {
        return Ok(None);
    }
    Ok(Some(search.hierarchy(full, &triples)))
}

struct AmpleSearch {
    masks: Vec<u128>,
    /// For each decided set, the first part of a good split (`None` if unsplittable).
    memo: HashMap<u32, Option<u32>>,
}

impl AmpleSearch {
    fn union(&self, s: u32) -> u128 {
        (0..self.masks.len())
            .filter(|i| s & (1 << i) != 0)
            .fold(0, |m, i| m | self.masks[i])
    }

    fn in_patchwork(&self, s: u32) -> bool {
        self.union(s).count_ones() == s.count_ones() + 2
    }

    fn feasible(&mut self, s: u32) -> Result<bool> {
        if s.count_ones() == 1 {
            return Ok(true);
        }
        if let Some(r) = self.memo.get(&s) {
            return Ok(r.is_some());
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let first = low | sub;
            let second = s ^ first;
            if second != 0 && self.in_patchwork(first) && self.in_patchwork(second) {
                let shared = (self.union(first) & self.union(second)).count_ones();
                if shared != 2 {
                    return Err(Error::Invariant(format!(
                        "disjoint patchwork members whose union is a member share {shared} taxa"
                    )));
                }
                if self.feasible(first)? && self.feasible(second)? {
                    self.memo.insert(s, Some(first));
                    return Ok(true);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        self.memo.insert(s, None);
        Ok(false)
    }

    fn hierarchy(&self, s: u32, triples: &[crate::taxa::Triple]) -> Hierarchy {
        let set = (0..triples.len())
            .filter(|i| s & (1 << i) != 0)
            .map(|i| triples[i])
            .collect();
        let children = self.memo.get(&s).copied().flatten().map(|first| {
            Box::new([self.hierarchy(first, triples), self.hierarchy(s ^ first, triples)])
        });
        Hierarchy { set, children }
    }
}

/// Outcome of looking for a section with an ample patchwork.
#[derive(Debug, Clone)]
pub enum PatchworkVerdict {
    Ample { section: TripleSet, hierarchy: Hierarchy },
    NotAmple,
    /// The search stopped at a configured limit before finding one.
    Indeterminate(String),
}

impl PatchworkVerdict {
    pub fn is_ample(&self) -> bool {
        matches!(self, PatchworkVerdict::Ample { .. })
    }
}

pub fn shellable_via_patchwork(
    tree: &PhyloTree,
    cover: &TripletCover,
    section_limit: usize,
    ample_cap: usize,
) -> Result<PatchworkVerdict> {
    let support = require_cover(tree, cover)?;
    let n = cover.taxa().len();
    if n - 2 > ample_cap {
        return Ok(PatchworkVerdict::Indeterminate(format!(
            "sections have {} triples, above the ample search cap {ample_cap}",
            n - 2
        )));
    }
    let total = support.section_count();
    for section in support.sections()?.take(section_limit) {
        if let Some(hierarchy) = is_ample(n, &section, ample_cap)? {
            return Ok(PatchworkVerdict::Ample { section, hierarchy });
        }
    }
    if total > section_limit.into() {
        return Ok(PatchworkVerdict::Indeterminate(format!(
            "examined {section_limit} of {total} sections"
        )));
    }
    Ok(PatchworkVerdict::NotAmple)
}

/// Builds a shelling bottom-up from a hierarchy in `P(C)`.
///
/// Leaves of the hierarchy are supporting triples, whose three cords are in
/// the cover. At an inner node the two parts overlap in exactly two taxa
/// `y, z`, and each cross cord `pq` gets witnesses `y, z` in whichever order
/// the tree's quartet on `{p, q, y, z}` dictates.
pub fn shelling_from_hierarchy(
    tree: &PhyloTree,
    cover: &TripletCover,
    hierarchy: &Hierarchy,
) -> Result<Vec<ShellingStep>> {
    require_cover(tree, cover)?;
    let mut have = cover.cords().clone();
    let mut steps = Vec::new();
    build(tree, hierarchy, &mut have, &mut steps)?;
    Ok(steps)
}

fn build(
    tree: &PhyloTree,
    node: &Hierarchy,
    have: &mut BTreeSet<Cord>,
    steps: &mut Vec<ShellingStep>,
) -> Result<BTreeSet<usize>> {
    let Some(kids) = &node.children else {
        let t = node.set.iter().next().ok_or_else(|| Error::invalid("empty hierarchy member"))?;
        if node.set.len() != 1 || t.cords().iter().any(|c| !have.contains(c)) {
            return Err(Error::invalid("hierarchy leaf is not a single supporting triple"));
        }
        return Ok(t.members().into_iter().collect());
    };
    let first = build(tree, &kids[0], have, steps)?;
    let second = build(tree, &kids[1], have, steps)?;
    let shared: Vec<usize> = first.intersection(&second).copied().collect();
    let &[y, z] = shared.as_slice() else {
        return Err(Error::Invariant(format!(
            "hierarchy parts share {} taxa instead of 2",
            shared.len()
        )));
    };
    for &p in first.iter().filter(|&&p| p != y && p != z) {
        for &q in second.iter().filter(|&&q| q != y && q != z) {
            if have.contains(&Cord::new(p, q)) {
                continue;
            }
            let witness = match tree.quartet_topology(p, q, y, z)? {
                Quartet::AxBy => (y, z),
                Quartet::AyBx => (z, y),
                _ => {
                    return Err(Error::Invariant(format!(
                        "cross pair {} sits with {} in the tree's quartet",
                        Cord::new(p, q).display(tree.taxa()),
                        Cord::new(y, z).display(tree.taxa())
                    )))
                }
            };
            let (a, b) = (p.min(q), p.max(q));
            let witness = if a == p { witness } else { (witness.1, witness.0) };
            steps.push(ShellingStep { cord: (a, b), witness });
            have.insert(Cord::new(p, q));
        }
    }
    Ok(&first | &second)
}

/// `(T|_A, T|_A)`: the restricted tree and the cords inside `A`, both
/// relabelled over `A`.
pub fn restriction_cover(
    tree: &PhyloTree,
    cover: &TripletCover,
    keep: &BTreeSet<usize>,
) -> Result<(PhyloTree, TripletCover)> {
    if keep.len() < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: keep.len() });
    }
    if tree.taxa() != cover.taxa() {
        return Err(Error::TaxonMismatch);
    }
    Ok((tree.restrict(keep)?, cover.restrict(keep)))
}

/// Whether every interior vertex of `T|_A` is supported by the cords inside `A`.
pub fn restriction_is_cover(tree: &PhyloTree, cover: &TripletCover, keep: &BTreeSet<usize>) -> Result<bool> {
    let (t, c) = restriction_cover(tree, cover, keep)?;
    Ok(support_map(&t, &c)?.is_cover())
}
