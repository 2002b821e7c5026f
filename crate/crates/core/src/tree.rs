//! Binary phylogenetic X-trees with exact positive edge lengths.
//!
//! Vertex layout: for a tree on `n` taxa the leaves are vertices `0..n`, with
//! leaf `i` carrying taxon `i` of the tree's [`Taxa`]; the `n - 2` interior
//! vertices follow. Interior vertex ids are otherwise opaque. Reports name an
//! interior vertex by its canonical triple (the least taxon of each component
//! of `T - v`), see [`PhyloTree::canonical_triple`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::Signed;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Length};
use crate::taxa::{Cord, Taxa, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub(crate) usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub ends: (VertexId, VertexId),
    pub length: Length,
}

#[derive(Debug, Clone)]
pub struct PhyloTree {
    taxa: Taxa,
    /// `adj[v]` lists `(neighbour, edge index)`.
    adj: Vec<Vec<(usize, usize)>>,
    edges: Vec<Edge>,
}

/// A bipartition of the taxa induced by cutting one edge.
///
/// Stored canonically as the block that contains taxon 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    first: BTreeSet<usize>,
    n: usize,
}

impl Split {
    /// Builds the split with `side | complement`. Either side may be given.
    pub fn new(side: BTreeSet<usize>, n: usize) -> Result<Self> {
        if side.is_empty() || side.len() >= n || side.iter().any(|&x| x >= n) {
            return Err(Error::invalid("a split needs two nonempty blocks"));
        }
        let first = if side.contains(&0) {
            side
        } else {
            (0..n).filter(|x| !side.contains(x)).collect()
        };
        Ok(Split { first, n })
    }

    pub fn block_a(&self) -> &BTreeSet<usize> {
        &self.first
    }

    pub fn block_b(&self) -> BTreeSet<usize> {
        (0..self.n).filter(|x| !self.first.contains(x)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.first.len() == 1 || self.first.len() == self.n - 1
    }

    /// True if `x` and `y` lie on different sides.
    pub fn separates(&self, x: usize, y: usize) -> bool {
        self.first.contains(&x) != self.first.contains(&y)
    }

    pub fn is_compatible(&self, other: &Split) -> bool {
        let a = &self.first;
        let b = self.block_b();
        let c = &other.first;
        let d = other.block_b();
        a.is_disjoint(c) || a.is_disjoint(&d) || b.is_disjoint(c) || b.is_disjoint(&d)
    }

    pub fn display(&self, taxa: &Taxa) -> String {
        let names = |s: &BTreeSet<usize>| s.iter().map(|&i| taxa.name(i)).collect::<Vec<_>>().join(",");
        format!("{{{}}}|{{{}}}", names(&self.first), names(&self.block_b()))
    }
}

/// The resolution of four taxa `a, b, x, y` in the order they were passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quartet {
    /// `ab|xy`
    AbXy,
    /// `ax|by`
    AxBy,
    /// `ay|bx`
    AyBx,
    /// Unresolved; never produced for a binary tree.
    Star,
}

pub(crate) struct Rooted {
    /// Vertices in preorder from the root.
    pub order: Vec<usize>,
    /// `(parent, edge to parent)`.
    pub parent: Vec<Option<(usize, usize)>>,
}

impl PhyloTree {
    /// Validates and builds a tree. Vertices `0..taxa.len()` are the leaves.
    pub fn from_edges(
        taxa: Taxa,
        vertex_count: usize,
        edges: Vec<(usize, usize, Length)>,
    ) -> Result<Self> {
        let n = taxa.len();
        if n < 3 {
            return Err(Error::TooFewTaxa { needed: 3, got: n });
        }
        if vertex_count != 2 * n - 2 {
            return Err(Error::NonBinary(format!(
                "{n} taxa need {} vertices, got {vertex_count}",
                2 * n - 2
            )));
        }
        if edges.len() != 2 * n - 3 {
            return Err(Error::NonBinary(format!(
                "{n} taxa need {} edges, got {}",
                2 * n - 3,
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertex_count];
        let mut stored = Vec::with_capacity(edges.len());
        for (i, (u, v, len)) in edges.into_iter().enumerate() {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::invalid(format!("bad edge ({u}, {v})")));
            }
            if !len.is_positive() {
                return Err(Error::NonPositiveLength(format_rational(&len)));
            }
            adj[u].push((v, i));
            adj[v].push((u, i));
            stored.push(Edge {
                ends: (VertexId(u), VertexId(v)),
                length: len,
            });
        }
        for (v, nbrs) in adj.iter().enumerate() {
            let want = if v < n { 1 } else { 3 };
            if nbrs.len() != want {
                let what = if v < n {
                    format!("leaf `{}` has degree {}", taxa.name(v), nbrs.len())
                } else {
                    format!("interior vertex has degree {}", nbrs.len())
                };
                return Err(Error::NonBinary(what));
            }
        }
        let tree = PhyloTree {
            taxa,
            adj,
            edges: stored,
        };
        // |E| = |V| - 1 plus connectivity makes it a tree.
        if tree.rooted(0).order.len() != vertex_count {
            return Err(Error::invalid("graph is not connected"));
        }
        Ok(tree)
    }

    pub fn taxa(&self) -> &Taxa {
        &self.taxa
    }

    pub fn leaf_count(&self) -> usize {
        self.taxa.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Taxon index for a label.
    pub fn idx(&self, label: &str) -> Result<usize> {
        self.taxa.require(label)
    }

    pub fn leaf(&self, taxon: usize) -> VertexId {
        assert!(taxon < self.leaf_count());
        VertexId(taxon)
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        v.0 < self.leaf_count()
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> {
        (self.leaf_count()..self.vertex_count()).map(VertexId)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v.0].iter().map(|&(w, _)| VertexId(w))
    }

    /// Length of the pendant edge at leaf `x`.
    pub fn pendant_length(&self, x: usize) -> &Length {
        &self.edges[self.adj[x][0].1].length
    }

    pub(crate) fn rooted(&self, root: usize) -> Rooted {
        let mut parent = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        let mut order = Vec::with_capacity(self.adj.len());
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, e) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    stack.push(w);
                }
            }
        }
        Rooted { order, parent }
    }

    /// Edge indices on the path between two vertices.
    pub(crate) fn path_edges(&self, from: usize, to: usize) -> Vec<usize> {
        let r = self.rooted(from);
        let mut out = Vec::new();
        let mut v = to;
        while let Some((p, e)) = r.parent[v] {
            out.push(e);
            v = p;
        }
        out
    }

    pub(crate) fn path_vertices(&self, from: usize, to: usize) -> BTreeSet<usize> {
        let r = self.rooted(from);
        let mut out = BTreeSet::from([to]);
        let mut v = to;
        while let Some((p, _)) = r.parent[v] {
            out.insert(p);
            v = p;
        }
        out
    }

    fn check_taxon(&self, x: usize) -> Result<()> {
        if x < self.leaf_count() {
            Ok(())
        } else {
            Err(Error::UnknownTaxon(format!("#{x}")))
        }
    }

    /// Sum of edge lengths on the path between leaves `x` and `y`.
    pub fn path_distance(&self, x: usize, y: usize) -> Result<Length> {
        self.check_taxon(x)?;
        self.check_taxon(y)?;
        Ok(self.vertex_distance(VertexId(x), VertexId(y)))
    }

    pub fn vertex_distance(&self, u: VertexId, v: VertexId) -> Length {
        self.path_edges(u.0, v.0)
            .into_iter()
            .map(|e| &self.edges[e].length)
            .sum()
    }

    /// All leaf-to-leaf path lengths.
    pub fn distance_matrix(&self) -> Vec<Vec<Length>> {
        let n = self.leaf_count();
        (0..n)
            .map(|x| {
                let r = self.rooted(x);
                let mut dist = vec![Length::default(); self.vertex_count()];
                for &v in &r.order[1..] {
                    let (p, e) = r.parent[v].unwrap();
                    dist[v] = &dist[p] + &self.edges[e].length;
                }
                dist.truncate(n);
                dist
            })
            .collect()
    }

    /// Leaf-to-leaf path lengths counted in edges.
    pub fn hop_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.leaf_count();
        (0..n)
            .map(|x| {
                let r = self.rooted(x);
                let mut dist = vec![0u32; self.vertex_count()];
                for &v in &r.order[1..] {
                    let (p, _) = r.parent[v].unwrap();
                    dist[v] = dist[p] + 1;
                }
                dist.truncate(n);
                dist
            })
            .collect()
    }

    /// The unique vertex lying on all three paths between `x`, `y` and `z`.
    pub fn median(&self, x: usize, y: usize, z: usize) -> Result<VertexId> {
        for t in [x, y, z] {
            self.check_taxon(t)?;
        }
        if x == y || x == z || y == z {
            return Err(Error::RepeatedTaxon);
        }
        let r = self.rooted(x);
        let mut on_y_path = vec![false; self.vertex_count()];
        let mut v = y;
        on_y_path[v] = true;
        while let Some((p, _)) = r.parent[v] {
            on_y_path[p] = true;
            v = p;
        }
        let mut v = z;
        while !on_y_path[v] {
            v = r.parent[v].expect("root lies on every path").0;
        }
        Ok(VertexId(v))
    }

    /// Leaf sets of the components of `T - v`, ordered by their least taxon.
    pub fn components(&self, v: VertexId) -> Vec<BTreeSet<usize>> {
        let n = self.leaf_count();
        let mut comps: Vec<BTreeSet<usize>> = self.adj[v.0]
            .iter()
            .map(|&(start, _)| {
                let mut leaves = BTreeSet::new();
                let mut stack = vec![(start, v.0)];
                while let Some((w, from)) = stack.pop() {
                    if w < n {
                        leaves.insert(w);
                    }
                    for &(u, _) in &self.adj[w] {
                        if u != from {
                            stack.push((u, w));
                        }
                    }
                }
                leaves
            })
            .collect();
        comps.sort_by_key(|c| *c.iter().next().unwrap());
        comps
    }

    /// The least taxon of each component of `T - v`, for an interior `v`.
    pub fn canonical_triple(&self, v: VertexId) -> Triple {
        assert!(!self.is_leaf(v), "canonical triple of a leaf");
        let c = self.components(v);
        Triple::new(
            *c[0].iter().next().unwrap(),
            *c[1].iter().next().unwrap(),
            *c[2].iter().next().unwrap(),
        )
    }

    /// Human-readable vertex name: the taxon label, or the canonical triple.
    pub fn vertex_name(&self, v: VertexId) -> String {
        if self.is_leaf(v) {
            self.taxa.name(v.0).to_string()
        } else {
            format!("med({})", self.canonical_triple(v).display(&self.taxa))
        }
    }

    /// Splits keyed to the length of the edge that induces them.
    pub fn split_lengths(&self) -> BTreeMap<Split, Length> {
        let n = self.leaf_count();
        let r = self.rooted(0);
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.vertex_count()];
        let mut out = BTreeMap::new();
        for &v in r.order.iter().rev() {
            if v < n {
                below[v].insert(v);
            }
            if let Some((p, e)) = r.parent[v] {
                let side = std::mem::take(&mut below[v]);
                let split = Split::new(side.clone(), n).expect("edge splits are proper");
                out.insert(split, self.edges[e].length.clone());
                below[p].extend(side);
            }
        }
        out
    }

    pub fn splits(&self) -> BTreeSet<Split> {
        self.split_lengths().into_keys().collect()
    }

    pub fn is_isomorphic(&self, other: &PhyloTree, compare_lengths: bool) -> Result<bool> {
        if self.taxa != other.taxa {
            return Err(Error::TaxonMismatch);
        }
        if compare_lengths {
            Ok(self.split_lengths() == other.split_lengths())
        } else {
            Ok(self.splits() == other.splits())
        }
    }

    /// The subtree spanned by `keep`, with degree-2 vertices suppressed and
    /// their incident lengths summed.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Result<PhyloTree> {
        if keep.len() < 3 {
            return Err(Error::TooFewTaxa {
                needed: 3,
                got: keep.len(),
            });
        }
        for &x in keep {
            self.check_taxon(x)?;
        }
        let n = self.leaf_count();
        let root = *keep.iter().next().unwrap();
        let r = self.rooted(root);
        // a vertex is spanned iff its subtree (away from the root) meets `keep`
        let mut spanned = vec![false; self.vertex_count()];
        for &v in r.order.iter().rev() {
            if v < n && keep.contains(&v) {
                spanned[v] = true;
            }
            if spanned[v] {
                if let Some((p, _)) = r.parent[v] {
                    spanned[p] = true;
                }
            }
        }
        let degree = |v: usize| self.adj[v].iter().filter(|&&(w, _)| spanned[w]).count();

        // kept vertices: the selected leaves plus spanned branching vertices
        let sub_taxa = self.taxa.subset(keep);
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &x) in keep.iter().enumerate() {
            new_id[x] = i;
        }
        let mut next = keep.len();
        for v in n..self.vertex_count() {
            if spanned[v] && degree(v) == 3 {
                new_id[v] = next;
                next += 1;
            }
        }

        let mut edges = Vec::new();
        for v in 0..self.vertex_count() {
            if new_id[v] == usize::MAX {
                continue;
            }
            for &(first, e0) in &self.adj[v] {
                if !spanned[first] {
                    continue;
                }
                let (mut prev, mut cur) = (v, first);
                let mut len = self.edges[e0].length.clone();
                while new_id[cur] == usize::MAX {
                    let (nxt, e) = *self.adj[cur]
                        .iter()
                        .find(|&&(w, _)| w != prev && spanned[w])
                        .expect("suppressed vertex has two spanned neighbours");
                    len += &self.edges[e].length;
                    prev = cur;
                    cur = nxt;
                }
                if v < cur {
                    edges.push((new_id[v], new_id[cur], len));
                }
            }
        }
        PhyloTree::from_edges(sub_taxa, next, edges)
    }

    /// `T - x`: drop leaf `x` and suppress its former neighbour.
    pub fn remove_leaf(&self, x: usize) -> Result<PhyloTree> {
        self.check_taxon(x)?;
        if self.leaf_count() <= 3 {
            return Err(Error::TooFewTaxa {
                needed: 4,
                got: self.leaf_count(),
            });
        }
        let keep: BTreeSet<usize> = (0..self.leaf_count()).filter(|&y| y != x).collect();
        self.restrict(&keep)
    }

    /// The quartet displayed on `{a, b, x, y}`: `ab|xy` when the `a`-`b`
    /// path and the `x`-`y` path share no vertex, and so on.
    pub fn quartet_topology(&self, a: usize, b: usize, x: usize, y: usize) -> Result<Quartet> {
        let four = [a, b, x, y];
        for &t in &four {
            self.check_taxon(t)?;
        }
        if four.iter().collect::<BTreeSet<_>>().len() != 4 {
            return Err(Error::RepeatedTaxon);
        }
        let disjoint = |p: (usize, usize), q: (usize, usize)| {
            self.path_vertices(p.0, p.1)
                .is_disjoint(&self.path_vertices(q.0, q.1))
        };
        Ok(if disjoint((a, b), (x, y)) {
            Quartet::AbXy
        } else if disjoint((a, x), (b, y)) {
            Quartet::AxBy
        } else if disjoint((a, y), (b, x)) {
            Quartet::AyBx
        } else {
            Quartet::Star
        })
    }

    /// Pairs of leaves adjacent to a common vertex.
    pub fn cherries(&self) -> BTreeSet<Cord> {
        let n = self.leaf_count();
        let mut out = BTreeSet::new();
        for v in n..self.vertex_count() {
            let leaves: Vec<usize> = self.adj[v]
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| w < n)
                .collect();
            for i in 0..leaves.len() {
                for j in i + 1..leaves.len() {
                    out.insert(Cord::new(leaves[i], leaves[j]));
                }
            }
        }
        out
    }

    /// Same topology with every edge given length 1.
    pub fn with_unit_lengths(&self) -> PhyloTree {
        let mut t = self.clone();
        for e in &mut t.edges {
            e.length = crate::rational::int(1);
        }
        t
    }

    /// Same topology with new lengths, one per edge in [`PhyloTree::edges`] order.
    pub fn with_lengths(&self, lengths: Vec<Length>) -> Result<PhyloTree> {
        if lengths.len() != self.edges.len() {
            return Err(Error::invalid(format!(
                "{} lengths for {} edges",
                lengths.len(),
                self.edges.len()
            )));
        }
        let mut t = self.clone();
        for (e, l) in t.edges.iter_mut().zip(lengths) {
            if !l.is_positive() {
                return Err(Error::NonPositiveLength(format_rational(&l)));
            }
            e.length = l;
        }
        Ok(t)
    }

    /// Edge indices on the path between leaves `x` and `y`.
    pub fn leaf_path_edges(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        self.check_taxon(x)?;
        self.check_taxon(y)?;
        Ok(self.path_edges(x, y))
    }
}

impl fmt::Display for PhyloTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::newick::write_newick(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::rational::int;

    const WORKED: &str = "((a:1,b:1):1,c:1,(d:1,e:1):1);";

    fn worked() -> PhyloTree {
        parse_newick(WORKED).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn counts() {
        let t = worked();
        assert_eq!(t.leaf_count(), 5);
        assert_eq!(t.edges().len(), 7);
        assert_eq!(t.interior_vertices().count(), 3);
    }

    #[test]
    fn worked_splits() {
        let t = worked();
        let s = t.splits();
        assert_eq!(s.len(), 7);
        assert!(s.contains(&Split::new(set(&[0, 1]), 5).unwrap()));
        assert!(s.contains(&Split::new(set(&[3, 4]), 5).unwrap()));
        assert_eq!(s.iter().filter(|s| !s.is_trivial()).count(), 2);
        for a in &s {
            for b in &s {
                assert!(a.is_compatible(b));
            }
        }
    }

    #[test]
    fn star_splits_are_trivial() {
        let t = parse_newick("(a:1,b:2,c:3);").unwrap();
        let s = t.splits();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(Split::is_trivial));
    }

    #[test]
    fn isomorphism() {
        let t = worked();
        let again = parse_newick("(c:1,(e:1,d:1):1,(b:1,a:1):1);").unwrap();
        assert!(t.is_isomorphic(&again, true).unwrap());
        let cat = parse_newick("((a:1,c:1):1,b:1,(d:1,e:1):1);").unwrap();
        assert!(!t.is_isomorphic(&cat, false).unwrap());
        let stretched = parse_newick("((a:1,b:1):1,c:1,(d:1,e:2):1);").unwrap();
        assert!(t.is_isomorphic(&stretched, false).unwrap());
        assert!(!t.is_isomorphic(&stretched, true).unwrap());
        let other = parse_newick("(a:1,b:1,z:1);").unwrap();
        assert!(matches!(t.is_isomorphic(&other, false), Err(Error::TaxonMismatch)));
    }

    #[test]
    fn medians() {
        let t = worked();
        let u = t.median(0, 1, 2).unwrap();
        // the vertex adjacent to a and b
        assert!(t.neighbors(u).any(|w| w == t.leaf(0)));
        assert!(t.neighbors(u).any(|w| w == t.leaf(1)));
        let w = t.median(2, 3, 4).unwrap();
        assert!(t.neighbors(w).any(|x| x == t.leaf(3)));
        assert!(t.neighbors(w).any(|x| x == t.leaf(4)));
        assert_eq!(t.canonical_triple(u), Triple::new(0, 1, 2));
        assert_eq!(t.canonical_triple(w), Triple::new(0, 3, 4));
        assert!(matches!(t.median(0, 0, 1), Err(Error::RepeatedTaxon)));

        let star = parse_newick("(a:1,b:2,c:3);").unwrap();
        let c = star.median(0, 1, 2).unwrap();
        assert!(!star.is_leaf(c));
    }

    #[test]
    fn distances() {
        let t = worked();
        assert_eq!(t.path_distance(0, 1).unwrap(), int(2));
        assert_eq!(t.path_distance(2, 2).unwrap(), int(0));
        assert_eq!(t.path_distance(1, 4).unwrap(), int(4));
        let m = t.distance_matrix();
        assert_eq!(m[1][4], int(4));
        assert_eq!(t.hop_matrix()[1][4], 4);
        assert!(t.path_distance(0, 9).is_err());
    }

    #[test]
    fn restriction() {
        let t = worked();
        let abc = t.restrict(&set(&[0, 1, 2])).unwrap();
        assert_eq!(abc.leaf_count(), 3);
        assert_eq!(abc.pendant_length(0), &int(1));
        assert_eq!(abc.pendant_length(1), &int(1));
        assert_eq!(abc.pendant_length(2), &int(2));

        let ade = t.restrict(&set(&[0, 3, 4])).unwrap();
        assert_eq!(ade.pendant_length(0), &int(3));
        assert_eq!(ade.pendant_length(1), &int(1));
        assert_eq!(ade.pendant_length(2), &int(1));

        let all = t.restrict(&set(&[0, 1, 2, 3, 4])).unwrap();
        assert!(t.is_isomorphic(&all, true).unwrap());
        assert!(t.restrict(&set(&[0, 1])).is_err());
    }

    #[test]
    fn leaf_removal() {
        let t = worked();
        let r = t.remove_leaf(0).unwrap();
        assert_eq!(r.taxa().labels(), vec!["b", "c", "d", "e"]);
        assert_eq!(r.pendant_length(0), &int(2));
        let via_restrict = t.restrict(&set(&[1, 2, 3, 4])).unwrap();
        assert!(r.is_isomorphic(&via_restrict, true).unwrap());
        let star = parse_newick("(a:1,b:2,c:3);").unwrap();
        assert!(star.remove_leaf(0).is_err());
    }

    #[test]
    fn quartets() {
        let t = worked();
        let (a, b, c, d, e) = (0, 1, 2, 3, 4);
        assert_eq!(t.quartet_topology(a, b, d, e).unwrap(), Quartet::AbXy);
        assert_eq!(t.quartet_topology(a, b, c, d).unwrap(), Quartet::AbXy);
        assert_eq!(t.quartet_topology(a, c, d, e).unwrap(), Quartet::AbXy);
        assert_eq!(t.quartet_topology(a, d, b, e).unwrap(), Quartet::AxBy);
        assert_eq!(t.quartet_topology(a, d, e, b).unwrap(), Quartet::AyBx);
        assert!(t.quartet_topology(a, a, d, e).is_err());
    }

    #[test]
    fn cherry_sets() {
        let t = worked();
        assert_eq!(t.cherries(), BTreeSet::from([Cord::new(0, 1), Cord::new(3, 4)]));
        let star = parse_newick("(a:1,b:2,c:3);").unwrap();
        assert_eq!(star.cherries().len(), 3);
        let q = parse_newick("((a:1,b:1):1,(c:1,d:1):1);").unwrap();
        assert_eq!(q.cherries(), BTreeSet::from([Cord::new(0, 1), Cord::new(2, 3)]));
    }

    #[test]
    fn construction_rejects_bad_shapes() {
        let taxa = Taxa::standard(3);
        // leaf attached to leaf
        let bad = PhyloTree::from_edges(
            taxa.clone(),
            4,
            vec![(0, 3, int(1)), (1, 3, int(1)), (2, 1, int(1))],
        );
        assert!(bad.is_err());
        let zero = PhyloTree::from_edges(
            taxa,
            4,
            vec![(0, 3, int(1)), (1, 3, int(0)), (2, 3, int(1))],
        );
        assert!(matches!(zero, Err(Error::NonPositiveLength(_))));
    }
}
