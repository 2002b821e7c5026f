//! The cover graph of a cord set and its 2-tree decompositions.
//!
//! A 2-tree is a graph with an ordering `v1, ..., vq` in which `v1 v2` is an
//! edge and every later `vi` has degree 2 in the graph induced on
//! `v1..vi` and lies in exactly one triangle there. A 2-tree decomposition
//! splits the edge set into 2-tree blocks that together touch every vertex;
//! it is strict when each triangle of the whole graph sits inside one block.

use std::collections::{BTreeMap, BTreeSet};

use crate::cover::{cord_set, TripletCover};
use crate::error::{Error, Result};
use crate::taxa::{union_of, Cord, Triple, TripleSet};

/// Most triangles [`all_decompositions`] will search over by default.
pub const DEFAULT_DECOMPOSITION_CAP: usize = 12;

/// Simple undirected graph on the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverGraph {
    adj: Vec<BTreeSet<usize>>,
}

impl CoverGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Cord>) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        for e in edges {
            adj[e.lo()].insert(e.hi());
            adj[e.hi()].insert(e.lo());
        }
        CoverGraph { adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> BTreeSet<Cord> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| Cord::new(u, v)))
            .collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    fn connected_without(&self, removed: Option<usize>) -> bool {
        let alive = |v: usize| Some(v) != removed;
        let Some(start) = (0..self.adj.len()).find(|&v| alive(v)) else {
            return true;
        };
        let mut seen = vec![false; self.adj.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if alive(w) && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.adj.len() - usize::from(removed.is_some())
    }
}

/// `Γ(T)`: vertex set `X`, edge set the cords.
pub fn build_cover_graph(cover: &TripletCover) -> CoverGraph {
    CoverGraph::new(cover.taxa().len(), cover.cords().iter().copied())
}

pub fn triangles(graph: &CoverGraph) -> TripleSet {
    triangles_of(&graph.adj)
}

fn triangles_of(adj: &[BTreeSet<usize>]) -> TripleSet {
    let mut out = TripleSet::new();
    for (u, nb) in adj.iter().enumerate() {
        for &v in nb.range(u + 1..) {
            for &w in adj[v].range(v + 1..) {
                if nb.contains(&w) {
                    out.insert(Triple::new(u, v, w));
                }
            }
        }
    }
    out
}

/// Connected, and stays connected after deleting any one vertex.
pub fn is_two_connected(graph: &CoverGraph) -> Result<bool> {
    let n = graph.vertex_count();
    if n < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: n });
    }
    Ok(graph.connected_without(None) && (0..n).all(|v| graph.connected_without(Some(v))))
}

/// A 2-tree construction order `v1, ..., vq` when the graph is a 2-tree.
pub fn is_two_tree(graph: &CoverGraph) -> Option<Vec<usize>> {
    let vertices: BTreeSet<usize> = (0..graph.vertex_count()).collect();
    two_tree_order(&vertices, &graph.edges())
}

/// Recognition by repeatedly deleting a degree-2 vertex whose two
/// neighbours are adjacent, down to a single edge.
pub fn two_tree_order(vertices: &BTreeSet<usize>, edges: &BTreeSet<Cord>) -> Option<Vec<usize>> {
    if vertices.len() < 3 || edges.len() != 2 * vertices.len() - 3 {
        return None;
    }
    let mut adj: BTreeMap<usize, BTreeSet<usize>> =
        vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
    for e in edges {
        if !vertices.contains(&e.lo()) || !vertices.contains(&e.hi()) {
            return None;
        }
        adj.get_mut(&e.lo()).unwrap().insert(e.hi());
        adj.get_mut(&e.hi()).unwrap().insert(e.lo());
    }
    let mut eliminated = Vec::new();
    while adj.len() > 2 {
        let v = adj.iter().find_map(|(&v, nb)| {
            if nb.len() != 2 {
                return None;
            }
            let mut it = nb.iter();
            let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
            adj[&a].contains(&b).then_some(v)
        })?;
        for w in adj.remove(&v).unwrap() {
            adj.get_mut(&w).unwrap().remove(&v);
        }
        eliminated.push(v);
    }
    let rest: Vec<usize> = adj.keys().copied().collect();
    if !adj[&rest[0]].contains(&rest[1]) {
        return None;
    }
    eliminated.extend(rest.into_iter().rev());
    eliminated.reverse();
    Some(eliminated)
}

/// One 2-tree block `H_i = (W_i, F_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTreeBlock {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<Cord>,
    /// The triangles in the order they were attached.
    pub construction_order: Vec<Triple>,
}

impl TwoTreeBlock {
    /// The block spanned by a triangle family, if it is a 2-tree whose
    /// triangles are exactly that family.
    pub fn from_triangles(order: Vec<Triple>) -> Option<Self> {
        let set: TripleSet = order.iter().copied().collect();
        let vertices = union_of(&set);
        let edges = cord_set(&set);
        two_tree_order(&vertices, &edges)?;
        let block = TwoTreeBlock {
            vertices,
            edges,
            construction_order: order,
        };
        (block.triangles() == set).then_some(block)
    }

    /// `Δ(H_i)`, computed from the block's own edges.
    pub fn triangles(&self) -> TripleSet {
        let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.lo()).or_default().insert(e.hi());
            adj.entry(e.hi()).or_default().insert(e.lo());
        }
        let mut out = TripleSet::new();
        for (&u, nb) in &adj {
            for &v in nb.range(u + 1..) {
                for &w in adj[&v].range(v + 1..) {
                    if nb.contains(&w) {
                        out.insert(Triple::new(u, v, w));
                    }
                }
            }
        }
        out
    }

    pub fn is_two_tree(&self) -> bool {
        self.vertices.len() >= 3 && two_tree_order(&self.vertices, &self.edges).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTreeDecomposition {
    pub blocks: Vec<TwoTreeBlock>,
}

impl TwoTreeDecomposition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Order-free identity of the decomposition: its set of edge sets.
    pub fn key(&self) -> BTreeSet<BTreeSet<Cord>> {
        self.blocks.iter().map(|b| b.edges.clone()).collect()
    }

    /// Union of the blocks' triangle sets.
    pub fn triangles(&self) -> TripleSet {
        self.blocks.iter().flat_map(|b| b.triangles()).collect()
    }

    /// Whether this is a 2-tree decomposition of `graph`: 2-tree blocks on at
    /// least three vertices, covering all vertices, edge sets partitioning
    /// the graph's edges.
    pub fn is_decomposition_of(&self, graph: &CoverGraph) -> bool {
        if self.blocks.is_empty() || !self.blocks.iter().all(TwoTreeBlock::is_two_tree) {
            return false;
        }
        let mut seen = BTreeSet::new();
        for b in &self.blocks {
            for e in &b.edges {
                if !seen.insert(*e) {
                    return false;
                }
            }
        }
        let covered: BTreeSet<usize> = self.blocks.iter().flat_map(|b| b.vertices.iter().copied()).collect();
        seen == graph.edges() && covered.len() == graph.vertex_count()
    }
}

/// The decomposition `H_C` grown from a section by triple accretion.
///
/// Starting from the least unused triple, repeatedly attach the least unused
/// triple sharing two taxa with one already in the block; when none is left,
/// close the block and start the next one.
pub fn decomposition_from_section(section: &TripleSet) -> Result<TwoTreeDecomposition> {
    if section.is_empty() {
        return Err(Error::invalid("empty section"));
    }
    let mut remaining = section.clone();
    let mut blocks: Vec<TwoTreeBlock> = Vec::new();
    while let Some(&first) = remaining.iter().next() {
        remaining.remove(&first);
        let mut order = vec![first];
        while let Some(&t) = remaining
            .iter()
            .find(|t| order.iter().any(|s| s.overlap(**t) == 2))
        {
            remaining.remove(&t);
            order.push(t);
        }
        let block = TwoTreeBlock::from_triangles(order.clone()).ok_or_else(|| {
            Error::invalid(format!(
                "not a section: triples grown from {first:?} do not form a 2-tree"
            ))
        })?;
        if let Some(prev) = blocks.iter().find(|b| !b.edges.is_disjoint(&block.edges)) {
            return Err(Error::invalid(format!(
                "not a section: blocks starting at {:?} and {first:?} share an edge",
                prev.construction_order[0]
            )));
        }
        blocks.push(block);
    }
    Ok(TwoTreeDecomposition { blocks })
}

/// True iff every triangle of the graph has all three edges in one block.
pub fn is_strict(graph: &CoverGraph, decomposition: &TwoTreeDecomposition) -> Result<bool> {
    let all = graph.edges();
    for (i, b) in decomposition.blocks.iter().enumerate() {
        if !b.edges.is_subset(&all) || b.vertices.iter().any(|&v| v >= graph.vertex_count()) {
            return Err(Error::invalid(format!("block {i} is not a subgraph")));
        }
    }
    Ok(triangles(graph).iter().all(|t| {
        decomposition
            .blocks
            .iter()
            .any(|b| t.cords().iter().all(|c| b.edges.contains(c)))
    }))
}

/// `|F| = 2|W| - 4 + m` over the union of the blocks.
///
/// The identity needs `|W| - 2` to equal the total triangle count of the
/// blocks, which holds for decompositions grown from a section of a minimal
/// cover but not in general: two triangles sharing one vertex give
/// `6 != 2*5 - 4 + 2`.
pub fn verify_counting(decomposition: &TwoTreeDecomposition) -> bool {
    let w: BTreeSet<usize> = decomposition
        .blocks
        .iter()
        .flat_map(|b| b.vertices.iter().copied())
        .collect();
    let f: BTreeSet<Cord> = decomposition
        .blocks
        .iter()
        .flat_map(|b| b.edges.iter().copied())
        .collect();
    let m = decomposition.blocks.len();
    f.len() + 4 == 2 * w.len() + m
}

/// Every 2-tree decomposition of the graph, by exhaustive search.
///
/// A 2-tree block is determined by its triangles (each edge of a 2-tree lies
/// in a triangle), so candidate blocks are the triangle subsets that span a
/// 2-tree with exactly those triangles; decompositions are the ways of
/// tiling the edge set with disjoint candidates.
pub fn all_decompositions(graph: &CoverGraph, cap: usize) -> Result<Vec<TwoTreeDecomposition>> {
    let tris: Vec<Triple> = triangles(graph).into_iter().collect();
    if tris.len() > cap {
        return Err(Error::Capacity {
            what: "decomposition search triangle count",
            limit: cap,
            actual: tris.len(),
        });
    }
    let mut candidates: Vec<TwoTreeBlock> = Vec::new();
    for mask in 1u32..(1u32 << tris.len()) {
        let chosen: Vec<Triple> = (0..tris.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| tris[i])
            .collect();
        if let Some(mut block) = TwoTreeBlock::from_triangles(chosen) {
            if let Some(order) = two_tree_order(&block.vertices, &block.edges) {
                block.construction_order = attach_order(&order, &block.edges);
            }
            candidates.push(block);
        }
    }

    let edges: Vec<Cord> = graph.edges().into_iter().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used: BTreeSet<Cord> = BTreeSet::new();

    fn search(
        edges: &[Cord],
        candidates: &[TwoTreeBlock],
        used: &mut BTreeSet<Cord>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<TwoTreeDecomposition>,
        n: usize,
    ) {
        let Some(next) = edges.iter().find(|e| !used.contains(e)) else {
            let covered: BTreeSet<usize> = chosen
                .iter()
                .flat_map(|&i| candidates[i].vertices.iter().copied())
                .collect();
            if covered.len() == n && !chosen.is_empty() {
                out.push(TwoTreeDecomposition {
                    blocks: chosen.iter().map(|&i| candidates[i].clone()).collect(),
                });
            }
            return;
        };
        for (i, c) in candidates.iter().enumerate() {
            if c.edges.contains(next) && c.edges.is_disjoint(used) {
                used.extend(c.edges.iter().copied());
                chosen.push(i);
                search(edges, candidates, used, chosen, out, n);
                chosen.pop();
                for e in &c.edges {
                    used.remove(e);
                }
            }
        }
    }
    search(&edges, &candidates, &mut used, &mut chosen, &mut out, graph.vertex_count());
    Ok(out)
}

/// Triangle attachment order for a 2-tree vertex ordering.
fn attach_order(order: &[usize], edges: &BTreeSet<Cord>) -> Vec<Triple> {
    let mut out = Vec::new();
    for i in 2..order.len() {
        let v = order[i];
        let earlier: Vec<usize> = order[..i]
            .iter()
            .copied()
            .filter(|&u| edges.contains(&Cord::new(u, v)))
            .collect();
        out.push(Triple::new(v, earlier[0], earlier[1]));
    }
    out
}
