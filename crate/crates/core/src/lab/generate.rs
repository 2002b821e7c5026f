//! Seeded trees and covers, and the exhaustive topology enumerator.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{canonical_cover, minimalize, LeafChooser, LeastLabel, RemovalOrder, SeededRandom, TripletCover};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, Length};
use crate::taxa::{Cord, Taxa, Triple};
use crate::tree::{PhyloTree, VertexId};

/// Largest taxon count [`enumerate_binary_trees`] accepts.
pub const ENUMERATION_CAP: usize = 8;

/// Leaf-attachment construction: start from the star on taxa 0, 1, 2 and
/// hang taxon `k` (k >= 3) off the middle of edge `choices[k - 3]`. Every
/// choice sequence gives a different topology and every topology arises
/// once, so uniform choices give uniform topologies.
fn attach_edges(n: usize, choices: &[usize]) -> Vec<(usize, usize)> {
    let mut edges = vec![(0, n), (1, n), (2, n)];
    for (k, &i) in (3..n).zip(choices) {
        let w = n + k - 2;
        let (u, v) = edges[i];
        edges[i] = (u, w);
        edges.push((w, v));
        edges.push((k, w));
    }
    edges
}

/// A length in `[1/4, 4]` with denominator at most 8.
fn sample_length(rng: &mut impl Rng) -> Length {
    let den: i64 = rng.gen_range(1..=8);
    let lo = (den + 3) / 4;
    ratio(rng.gen_range(lo..=4 * den), den)
}

/// Uniformly random topology on the standard taxa `a, b, c, ...` with
/// seeded rational lengths in `[1/4, 4]`.
pub fn random_binary_tree(n: usize, seed: u64) -> Result<PhyloTree> {
    random_binary_tree_with(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

pub fn random_binary_tree_with(rng: &mut impl Rng, n: usize) -> Result<PhyloTree> {
    if n < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: n });
    }
    let choices: Vec<usize> = (3..n).map(|k| rng.gen_range(0..2 * k - 3)).collect();
    let edges = attach_edges(n, &choices)
        .into_iter()
        .map(|(u, v)| (u, v, sample_length(rng)))
        .collect();
    PhyloTree::from_edges(Taxa::standard(n), 2 * n - 2, edges)
}

/// Every binary topology on `taxa`, with unit lengths.
pub fn enumerate_binary_trees(taxa: &Taxa) -> Result<Vec<PhyloTree>> {
    let n = taxa.len();
    if n < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: n });
    }
    if n > ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "topology enumeration taxon count",
            limit: ENUMERATION_CAP,
            actual: n,
        });
    }
    let mut out = Vec::new();
    let mut choices = vec![0usize; n - 3];
    loop {
        let edges = attach_edges(n, &choices)
            .into_iter()
            .map(|(u, v)| (u, v, int(1)))
            .collect();
        out.push(PhyloTree::from_edges(taxa.clone(), 2 * n - 2, edges)?);
        // odometer: position i ranges over the 2(i+3) - 3 edges present then
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choices[i] += 1;
            if choices[i] < 2 * (i + 3) - 3 {
                break;
            }
            choices[i] = 0;
        }
    }
}

/// In each component, the taxon used least so far (ties broken at random).
/// Spreads the chosen triples over the taxa, which raises multiplicities.
#[derive(Debug, Clone)]
pub struct Balanced {
    rng: ChaCha8Rng,
    usage: Vec<usize>,
}

impl Balanced {
    pub fn new(seed: u64, n: usize) -> Self {
        Balanced {
            rng: ChaCha8Rng::seed_from_u64(seed),
            usage: vec![0; n],
        }
    }
}

impl LeafChooser for Balanced {
    fn choose(&mut self, _: &PhyloTree, _: VertexId, comps: &[BTreeSet<usize>]) -> Triple {
        let mut pick = |c: &BTreeSet<usize>| {
            let least = c.iter().map(|&x| self.usage[x]).min().unwrap();
            let tied: Vec<usize> = c.iter().copied().filter(|&x| self.usage[x] == least).collect();
            let x = *tied.choose(&mut self.rng).unwrap();
            self.usage[x] += 1;
            x
        };
        let (a, b, c) = (pick(&comps[0]), pick(&comps[1]), pick(&comps[2]));
        Triple::new(a, b, c)
    }
}

/// How a generated instance builds its cover from the tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverPolicy {
    /// Least taxon of each component at every vertex.
    LeastLabel,
    /// Uniformly random taxon of each component.
    Random,
    /// Least-used taxon of each component.
    Balanced,
    /// Two random canonical covers merged, then minimalized in random order.
    UnionMinimal,
    /// A random canonical cover plus a few random extra cords.
    Padded,
}

impl CoverPolicy {
    pub const ALL: [CoverPolicy; 5] = [
        CoverPolicy::LeastLabel,
        CoverPolicy::Random,
        CoverPolicy::Balanced,
        CoverPolicy::UnionMinimal,
        CoverPolicy::Padded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverPolicy::LeastLabel => "least-label",
            CoverPolicy::Random => "random",
            CoverPolicy::Balanced => "balanced",
            CoverPolicy::UnionMinimal => "union-minimal",
            CoverPolicy::Padded => "padded",
        }
    }
}

impl fmt::Display for CoverPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CoverPolicy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown cover policy `{s}`")))
    }
}

/// A triplet cover of `tree` built under `policy`.
pub fn random_cover(tree: &PhyloTree, policy: CoverPolicy, seed: u64) -> Result<TripletCover> {
    let n = tree.leaf_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match policy {
        CoverPolicy::LeastLabel => canonical_cover(tree, &mut LeastLabel),
        CoverPolicy::Random => canonical_cover(tree, &mut SeededRandom::new(rng.gen())),
        CoverPolicy::Balanced => canonical_cover(tree, &mut Balanced::new(rng.gen(), n)),
        CoverPolicy::UnionMinimal => {
            let first = canonical_cover(tree, &mut SeededRandom::new(rng.gen()));
            let second = canonical_cover(tree, &mut SeededRandom::new(rng.gen()));
            let union = TripletCover::new(tree.taxa().clone(), first.cords().iter().chain(second.cords()).copied())?;
            minimalize(tree, &union, RemovalOrder::Seeded(rng.gen()))?
        }
        CoverPolicy::Padded => {
            let mut cover = canonical_cover(tree, &mut SeededRandom::new(rng.gen()));
            let mut absent: Vec<Cord> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| Cord::new(a, b)))
                .filter(|c| !cover.cords().contains(c))
                .collect();
            absent.shuffle(&mut rng);
            let extra = rng.gen_range(1..=n).min(absent.len());
            for c in &absent[..extra] {
                cover = cover.with_cord(*c);
            }
            cover
        }
    })
}

/// Tree and cover for one seed: the tree from `seed`, the cover from a
/// derived stream so the two are not correlated.
pub fn random_instance(n: usize, seed: u64, policy: CoverPolicy) -> Result<(PhyloTree, TripletCover)> {
    let tree = random_binary_tree(n, seed)?;
    let cover = random_cover(&tree, policy, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    Ok((tree, cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{is_minimal, is_triplet_cover};
    use crate::newick::write_newick;
    use num::Signed;

    #[test]
    fn three_leaves() {
        let t = random_binary_tree(3, 7).unwrap();
        assert_eq!(t.leaf_count(), 3);
        assert!(random_binary_tree(2, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let a = random_binary_tree(9, 42).unwrap();
        let b = random_binary_tree(9, 42).unwrap();
        assert_eq!(write_newick(&a), write_newick(&b));
        let c = random_binary_tree(9, 43).unwrap();
        assert_ne!(write_newick(&a), write_newick(&c));
    }

    #[test]
    fn lengths_in_range() {
        for seed in 0..50 {
            let t = random_binary_tree(8, seed).unwrap();
            for e in t.edges() {
                assert!(e.length >= ratio(1, 4) && e.length <= int(4) && e.length.is_positive());
                assert!(*e.length.denom() <= 8.into());
            }
        }
    }

    #[test]
    fn policies_give_covers() {
        for seed in 0..20 {
            for policy in CoverPolicy::ALL {
                let (tree, cover) = random_instance(7, seed, policy).unwrap();
                assert!(is_triplet_cover(&tree, &cover).unwrap(), "{policy} {seed}");
                if policy == CoverPolicy::UnionMinimal {
                    assert!(is_minimal(&tree, &cover).unwrap());
                }
            }
        }
        assert_eq!("balanced".parse::<CoverPolicy>().unwrap(), CoverPolicy::Balanced);
        assert!("nope".parse::<CoverPolicy>().is_err());
    }
}
