//! Rebuilding a tree and its edge lengths from distances on a triplet cover.
//!
//! Pendant lengths are read off fully covered triples, a cherry is any
//! cord whose distance is the sum of its two pendant lengths, and removing
//! one leaf of the cherry leaves a smaller instance of the same kind. The
//! tree is grown back by re-attaching the removed leaves in reverse.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::cover::TripletCover;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Length};
use crate::taxa::{Cord, Taxa, Taxon};
use crate::tree::PhyloTree;

/// Exact distances on a set of cords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDistances {
    taxa: Taxa,
    values: BTreeMap<Cord, Length>,
}

impl PartialDistances {
    pub fn new(taxa: Taxa, values: BTreeMap<Cord, Length>) -> Result<Self> {
        for (c, d) in &values {
            if c.hi() >= taxa.len() {
                return Err(Error::UnknownTaxon(format!("#{}", c.hi())));
            }
            if !d.is_positive() {
                return Err(Error::NonPositiveLength(format!(
                    "d({}) = {}",
                    c.display(&taxa),
                    format_rational(d)
                )));
            }
        }
        Ok(PartialDistances { taxa, values })
    }

    /// Distances induced by `tree` on the cords of `cover`.
    pub fn from_tree(tree: &PhyloTree, cover: &TripletCover) -> Result<Self> {
        if tree.taxa() != cover.taxa() {
            return Err(Error::TaxonMismatch);
        }
        let values = cover
            .cords()
            .iter()
            .map(|&c| Ok((c, tree.path_distance(c.lo(), c.hi())?)))
            .collect::<Result<_>>()?;
        Ok(PartialDistances {
            taxa: tree.taxa().clone(),
            values,
        })
    }

    pub fn taxa(&self) -> &Taxa {
        &self.taxa
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&Length> {
        self.values.get(&Cord::new(x, y))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Cord, &Length)> {
        self.values.iter().map(|(c, d)| (*c, d))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The cover whose cords are exactly the keys.
    pub fn cover(&self) -> TripletCover {
        TripletCover::new(self.taxa.clone(), self.values.keys().copied())
            .expect("keys are valid cords over the taxa")
    }

    pub fn with_value(&self, x: usize, y: usize, d: Length) -> Result<Self> {
        let mut values = self.values.clone();
        values.insert(Cord::new(x, y), d);
        PartialDistances::new(self.taxa.clone(), values)
    }
}

fn check_domain(cover: &TripletCover, dist: &PartialDistances) -> Result<()> {
    if cover.taxa() != dist.taxa() {
        return Err(Error::TaxonMismatch);
    }
    if !cover.cords().iter().eq(dist.values.keys()) {
        return Err(Error::invalid("distances must be given on exactly the cover's cords"));
    }
    Ok(())
}

fn stage(taxa: &Taxa, what: &str) -> String {
    format!("{what} with {} taxa", taxa.len())
}

/// Pendant length at `x`: half the least `d(x,z) + d(x,z') - d(z,z')` over
/// triples `xzz'` whose three cords are all in the cover.
///
/// Every such term is at least the pendant length, and the triple chosen
/// at `x`'s neighbour attains it, so restricting to fully covered triples
/// loses nothing.
pub fn lambda(x: usize, cover: &TripletCover, dist: &PartialDistances) -> Result<Length> {
    check_domain(cover, dist)?;
    lambda_unchecked(x, dist)
}

fn lambda_unchecked(x: usize, dist: &PartialDistances) -> Result<Length> {
    let taxa = &dist.taxa;
    let partners: Vec<usize> = (0..taxa.len())
        .filter(|&z| z != x && dist.get(x, z).is_some())
        .collect();
    let mut best: Option<Length> = None;
    for (i, &z) in partners.iter().enumerate() {
        for &w in &partners[i + 1..] {
            if let Some(dzw) = dist.get(z, w) {
                let term = dist.get(x, z).unwrap() + dist.get(x, w).unwrap() - dzw;
                if best.as_ref().is_none_or(|b| term < *b) {
                    best = Some(term);
                }
            }
        }
    }
    let best = best.ok_or_else(|| {
        Error::unrealizable(
            stage(taxa, "pendant length"),
            format!("no fully covered triple contains {}", taxa.name(x)),
        )
    })? / Length::from_integer(2.into());
    if !best.is_positive() {
        return Err(Error::unrealizable(
            stage(taxa, "pendant length"),
            format!("pendant length at {} would be {}", taxa.name(x), format_rational(&best)),
        ));
    }
    Ok(best)
}

/// Least cord `xy` with `d(x,y) = λ(x) + λ(y)`.
pub fn find_cherry(cover: &TripletCover, dist: &PartialDistances) -> Result<(usize, usize)> {
    check_domain(cover, dist)?;
    let lambdas = all_lambdas(dist)?;
    cherry_from(dist, &lambdas)
}

fn all_lambdas(dist: &PartialDistances) -> Result<Vec<Length>> {
    (0..dist.taxa.len()).map(|x| lambda_unchecked(x, dist)).collect()
}

fn cherry_from(dist: &PartialDistances, lambdas: &[Length]) -> Result<(usize, usize)> {
    dist.iter()
        .find(|(c, d)| **d == &lambdas[c.lo()] + &lambdas[c.hi()])
        .map(|(c, _)| (c.lo(), c.hi()))
        .ok_or_else(|| {
            let shown: Vec<String> = lambdas
                .iter()
                .enumerate()
                .map(|(x, l)| format!("{}={}", dist.taxa.name(x), format_rational(l)))
                .collect();
            Error::unrealizable(
                stage(&dist.taxa, "cherry search"),
                format!("no cord has d(x,y) = λ(x) + λ(y); λ: {}", shown.join(", ")),
            )
        })
}

/// Drops `x` from the cherry `(x, y)`: cord `xy` goes, every other `xz`
/// becomes `yz` with `d'(y,z) = d(x,z) + λ(y) - λ(x)`.
pub fn reduce_instance(
    cover: &TripletCover,
    dist: &PartialDistances,
    cherry: (usize, usize),
) -> Result<(TripletCover, PartialDistances)> {
    check_domain(cover, dist)?;
    let (x, y) = cherry;
    if dist.get(x, y).is_none() {
        return Err(Error::invalid("cherry pair is not a cord"));
    }
    let lx = lambda_unchecked(x, dist)?;
    let ly = lambda_unchecked(y, dist)?;
    let reduced = reduce(dist, x, y, &lx, &ly)?;
    Ok((reduced.cover(), reduced))
}

fn reduce(dist: &PartialDistances, x: usize, y: usize, lx: &Length, ly: &Length) -> Result<PartialDistances> {
    let taxa = &dist.taxa;
    let keep = (0..taxa.len()).filter(|&t| t != x).collect();
    let sub = taxa.subset(&keep);
    let map = taxa.reindex_into(&sub);
    let mut values: BTreeMap<Cord, Length> = BTreeMap::new();
    let mut moved: Vec<(usize, Length)> = Vec::new();
    for (c, d) in dist.iter() {
        if c == Cord::new(x, y) {
            continue;
        }
        match c.other(x) {
            Some(z) => moved.push((z, d + ly - lx)),
            None => {
                values.insert(Cord::new(map[c.lo()].unwrap(), map[c.hi()].unwrap()), d.clone());
            }
        }
    }
    let y2 = map[y].unwrap();
    for (z, d) in moved {
        let cord = Cord::new(y2, map[z].unwrap());
        match values.get(&cord) {
            Some(existing) if *existing != d => {
                return Err(Error::unrealizable(
                    stage(taxa, "reduction"),
                    format!(
                        "removing {} predicts d({},{}) = {} but the input has {}",
                        taxa.name(x),
                        taxa.name(y),
                        taxa.name(z),
                        format_rational(&d),
                        format_rational(existing)
                    ),
                ))
            }
            Some(_) => {}
            None => {
                values.insert(cord, d);
            }
        }
    }
    PartialDistances::new(sub, values).map_err(|e| Error::unrealizable(stage(taxa, "reduction"), e.to_string()))
}

/// One removal: `removed` and `kept` formed a cherry with the given pendant lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CherryStep {
    pub removed: Taxon,
    pub kept: Taxon,
    pub removed_length: Length,
    pub kept_length: Length,
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub tree: PhyloTree,
    pub cherry_log: Vec<CherryStep>,
}

/// The unique tree with positive lengths whose distances agree with `dist`
/// on every cord, or the stage at which the input proved unrealizable.
pub fn reconstruct(cover: &TripletCover, dist: &PartialDistances) -> Result<ReconstructionResult> {
    check_domain(cover, dist)?;
    if dist.taxa.len() < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: dist.taxa.len() });
    }
    let mut current = dist.clone();
    let mut log = Vec::new();
    while current.taxa.len() > 3 {
        let lambdas = all_lambdas(&current)?;
        let (x, y) = cherry_from(&current, &lambdas)?;
        log.push(CherryStep {
            removed: current.taxa.get(x).clone(),
            kept: current.taxa.get(y).clone(),
            removed_length: lambdas[x].clone(),
            kept_length: lambdas[y].clone(),
        });
        current = reduce(&current, x, y, &lambdas[x], &lambdas[y])?;
    }
    let mut tree = three_leaf(&current)?;
    for step in log.iter().rev() {
        tree = attach(&tree, step)?;
    }
    for (c, d) in dist.iter() {
        let got = tree.path_distance(c.lo(), c.hi())?;
        if got != *d {
            return Err(Error::unrealizable(
                "final verification",
                format!(
                    "rebuilt tree gives d({}) = {}, input has {}",
                    c.display(&dist.taxa),
                    format_rational(&got),
                    format_rational(d)
                ),
            ));
        }
    }
    Ok(ReconstructionResult { tree, cherry_log: log })
}

fn three_leaf(dist: &PartialDistances) -> Result<PhyloTree> {
    let d = |x, y| {
        dist.get(x, y).cloned().ok_or_else(|| {
            Error::unrealizable(
                stage(&dist.taxa, "base case"),
                format!("cord {} is missing", Cord::new(x, y).display(&dist.taxa)),
            )
        })
    };
    let (ab, ac, bc) = (d(0, 1)?, d(0, 2)?, d(1, 2)?);
    let half = Length::from_integer(2.into());
    let lengths = [
        (&ab + &ac - &bc) / &half,
        (&ab + &bc - &ac) / &half,
        (&ac + &bc - &ab) / &half,
    ];
    if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
        return Err(Error::unrealizable(
            stage(&dist.taxa, "base case"),
            format!("pendant length at {} would be {}", dist.taxa.name(i), format_rational(&lengths[i])),
        ));
    }
    let edges = lengths.into_iter().enumerate().map(|(i, l)| (i, 3, l)).collect();
    PhyloTree::from_edges(dist.taxa.clone(), 4, edges)
}

/// Re-inserts `step.removed` by subdividing the pendant edge of `step.kept`.
fn attach(tree: &PhyloTree, step: &CherryStep) -> Result<PhyloTree> {
    let old = tree.taxa();
    let taxa = Taxa::new(old.iter().cloned().chain([step.removed.clone()]))?;
    let n = taxa.len();
    let y_old = old.require(step.kept.as_str())?;
    let place = |v: usize| -> usize {
        if v < old.len() {
            taxa.index_of(old.name(v)).unwrap()
        } else {
            v + 1
        }
    };
    let w = 2 * n - 3;
    let mut edges = Vec::with_capacity(2 * n - 3);
    for e in tree.edges() {
        let (u, v) = (e.ends.0.index(), e.ends.1.index());
        if u == y_old || v == y_old {
            let p = if u == y_old { v } else { u };
            let rest = &e.length - &step.kept_length;
            if !rest.is_positive() {
                return Err(Error::unrealizable(
                    stage(&taxa, "re-attaching"),
                    format!(
                        "edge above the cherry {}{} would have length {}",
                        step.removed,
                        step.kept,
                        format_rational(&rest)
                    ),
                ));
            }
            edges.push((place(y_old), w, step.kept_length.clone()));
            edges.push((w, place(p), rest));
        } else {
            edges.push((place(u), place(v), e.length.clone()));
        }
    }
    edges.push((taxa.require(step.removed.as_str())?, w, step.removed_length.clone()));
    if edges.iter().any(|(_, _, l)| l.is_zero()) {
        return Err(Error::Invariant("zero-length edge after re-attachment".into()));
    }
    PhyloTree::from_edges(taxa, 2 * n - 2, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{canonical_cover, LeastLabel};
    use crate::newick::parse_newick;
    use crate::rational::{int, ratio};

    const WORKED: &str = "((a:1,b:1):1,c:1,(d:1,e:1):1);";

    fn worked() -> (PhyloTree, TripletCover, PartialDistances) {
        let tree = parse_newick(WORKED).unwrap();
        let cover = TripletCover::from_labels(
            tree.taxa().clone(),
            &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "e"), ("c", "e"), ("c", "d"), ("d", "e")],
        )
        .unwrap();
        let dist = PartialDistances::from_tree(&tree, &cover).unwrap();
        (tree, cover, dist)
    }

    #[test]
    fn worked_distances() {
        let (_, _, dist) = worked();
        let listed: Vec<String> = dist
            .iter()
            .map(|(c, d)| format!("{}:{}", c.display(dist.taxa()), format_rational(d)))
            .collect();
        assert_eq!(listed, ["ab:2", "ac:3", "bc:3", "be:4", "cd:3", "ce:3", "de:2"]);
    }

    #[test]
    fn worked_lambdas() {
        let (_, cover, dist) = worked();
        for x in 0..5 {
            assert_eq!(lambda(x, &cover, &dist).unwrap(), int(1));
        }
    }

    #[test]
    fn three_point_lambda() {
        let tree = parse_newick("(a:1/2,b:2,c:3);").unwrap();
        let cover = TripletCover::complete(tree.taxa().clone());
        let dist = PartialDistances::from_tree(&tree, &cover).unwrap();
        assert_eq!(lambda(0, &cover, &dist).unwrap(), ratio(1, 2));
        assert_eq!(lambda(2, &cover, &dist).unwrap(), int(3));
    }

    #[test]
    fn lambda_needs_a_covered_triple() {
        let (tree, cover, dist) = worked();
        let thin = cover.without_cord(Cord::new(0, 2)).without_cord(Cord::new(1, 2));
        let thin_dist = PartialDistances::from_tree(&tree, &thin).unwrap();
        assert!(matches!(lambda(0, &thin, &thin_dist), Err(Error::Unrealizable { .. })));
        // mismatched domain
        assert!(lambda(0, &thin, &dist).is_err());
    }

    #[test]
    fn worked_cherry() {
        let (_, cover, dist) = worked();
        assert_eq!(find_cherry(&cover, &dist).unwrap(), (0, 1));
    }

    #[test]
    fn quartet_cherry() {
        let tree = parse_newick("((a:1,b:1):1,(c:1,d:1):1);").unwrap();
        let cover = canonical_cover(&tree, &mut LeastLabel);
        let dist = PartialDistances::from_tree(&tree, &cover).unwrap();
        assert_eq!(find_cherry(&cover, &dist).unwrap(), (0, 1));
    }

    #[test]
    fn perturbed_distances() {
        let (_, cover, dist) = worked();
        // d(a,b) = 5/2 is still realizable: the ab cherry gets pendants 5/4
        let shifted = dist.with_value(0, 1, ratio(5, 2)).unwrap();
        let r = reconstruct(&cover, &shifted).unwrap();
        assert_eq!(r.tree.pendant_length(0), &ratio(5, 4));
        // d(a,b) = 7 breaks the triangle inequality on abc
        let broken = dist.with_value(0, 1, int(7)).unwrap();
        assert!(matches!(reconstruct(&cover, &broken), Err(Error::Unrealizable { .. })));
    }

    #[test]
    fn worked_reduction() {
        let (_, cover, dist) = worked();
        let (c2, d2) = reduce_instance(&cover, &dist, (0, 1)).unwrap();
        assert_eq!(c2.display(), "{bc, be, cd, ce, de}");
        assert_eq!(d2.get(0, 1), Some(&int(3)));
    }

    #[test]
    fn inconsistent_collision() {
        // quartet ab|cd, unit lengths, with d(a,d) raised to 4: λ(a) = 1,
        // λ(b) = 1/2, so ac predicts d(b,c) = 5/2 against the stored 3
        let taxa = Taxa::standard(4);
        let values = [((0, 1), 2), ((0, 2), 3), ((0, 3), 4), ((1, 2), 3), ((1, 3), 3), ((2, 3), 2)]
            .into_iter()
            .map(|((x, y), d)| (Cord::new(x, y), int(d)))
            .collect();
        let dist = PartialDistances::new(taxa, values).unwrap();
        assert!(matches!(
            reduce_instance(&dist.cover(), &dist, (0, 1)),
            Err(Error::Unrealizable { .. })
        ));
    }

    #[test]
    fn worked_round_trip() {
        let (tree, cover, dist) = worked();
        let r = reconstruct(&cover, &dist).unwrap();
        assert!(r.tree.is_isomorphic(&tree, true).unwrap());
        assert_eq!(r.cherry_log.len(), 2);
        assert_eq!(r.cherry_log[0].removed.as_str(), "a");
    }

    #[test]
    fn base_case() {
        let taxa = Taxa::standard(3);
        let values = [(Cord::new(0, 1), int(2)), (Cord::new(0, 2), int(3)), (Cord::new(1, 2), int(3))]
            .into_iter()
            .collect();
        let dist = PartialDistances::new(taxa, values).unwrap();
        let r = reconstruct(&dist.cover(), &dist).unwrap();
        let lengths: Vec<Length> = (0..3).map(|x| r.tree.pendant_length(x).clone()).collect();
        assert_eq!(lengths, [int(1), int(1), int(2)]);
        let flat = dist.with_value(0, 1, int(6)).unwrap();
        assert!(reconstruct(&flat.cover(), &flat).is_err());
    }

    #[test]
    fn unequal_cherry_lengths() {
        let tree = parse_newick("((a:1/3,b:5):2,c:1,(d:7/2,e:1):1/4);").unwrap();
        let cover = canonical_cover(&tree, &mut LeastLabel);
        let dist = PartialDistances::from_tree(&tree, &cover).unwrap();
        let r = reconstruct(&cover, &dist).unwrap();
        assert!(r.tree.is_isomorphic(&tree, true).unwrap());
    }

    #[test]
    fn rejects_nonpositive_distances() {
        let taxa = Taxa::standard(3);
        let values = [(Cord::new(0, 1), int(0))].into_iter().collect();
        assert!(PartialDistances::new(taxa, values).is_err());
    }
}
