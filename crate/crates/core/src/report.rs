//! Machine-readable reports for a tree and a cover.

use serde::Serialize;

use crate::cover::{is_hall_type, is_minimal, require_cover, TripletCover};
use crate::error::{Error, Result};
use crate::formats::{triple_labels, ShellingFile};
use crate::graph::{
    build_cover_graph, decomposition_from_section, is_strict, is_two_connected, is_two_tree, triangles,
    verify_counting, TwoTreeDecomposition,
};
use crate::shelling::{cord_closure, shellable_via_patchwork, PatchworkVerdict};
use crate::taxa::Taxa;
use crate::tree::PhyloTree;

/// Capacity ceilings shared by the analyses.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub sections: usize,
    pub ample_cap: usize,
    pub hall_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            sections: crate::shelling::DEFAULT_SECTION_LIMIT,
            ample_cap: crate::shelling::DEFAULT_AMPLE_CAP,
            hall_cap: crate::cover::DEFAULT_HALL_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub triangles: Vec<String>,
    pub construction_order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub section: Vec<String>,
    /// The structural guarantees for these blocks hold only for minimal covers.
    pub cover_is_minimal: bool,
    pub blocks: Vec<BlockReport>,
    pub strict: bool,
    pub counting_identity: bool,
}

impl DecompositionReport {
    pub fn new(
        taxa: &Taxa,
        cover: &TripletCover,
        section: &crate::taxa::TripleSet,
        d: &TwoTreeDecomposition,
        minimal: bool,
    ) -> Result<Self> {
        let graph = build_cover_graph(cover);
        Ok(DecompositionReport {
            section: triple_labels(taxa, section),
            cover_is_minimal: minimal,
            blocks: d
                .blocks
                .iter()
                .map(|b| BlockReport {
                    vertices: b.vertices.iter().map(|&v| taxa.name(v).to_string()).collect(),
                    edges: b.edges.iter().map(|c| c.labels(taxa)).collect(),
                    triangles: triple_labels(taxa, &b.triangles()),
                    construction_order: b.construction_order.iter().map(|t| t.display(taxa)).collect(),
                })
                .collect(),
            strict: is_strict(&graph, d)?,
            counting_identity: verify_counting(d),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellingReport {
    pub shellable: bool,
    /// Closure steps in the order taken; a full shelling when `shellable`.
    #[serde(flatten)]
    pub witness: ShellingFile,
    /// Cords the closure could not add.
    pub missing: Vec<[String; 2]>,
}

pub fn shelling_report(tree: &PhyloTree, cover: &TripletCover) -> Result<ShellingReport> {
    let closure = cord_closure(tree, cover)?;
    let taxa = tree.taxa();
    Ok(ShellingReport {
        shellable: closure.is_complete(),
        witness: ShellingFile::from_steps(taxa, &closure.steps),
        missing: closure.missing().iter().map(|c| c.labels(taxa)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatchworkReport {
    /// `ample`, `not-ample` or `indeterminate`.
    pub verdict: &'static str,
    pub section: Option<Vec<String>>,
    pub hierarchy: Option<Vec<Vec<String>>>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub blocks: usize,
    pub strict: bool,
    pub counting_identity: bool,
}

/// Classification of a cover relative to a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub taxa: usize,
    pub cords: usize,
    pub is_cover: bool,
    pub is_minimal: bool,
    pub is_minimum: bool,
    pub is_sparse: bool,
    /// `None` when the triple set exceeds the Hall-check cap.
    pub hall_type: Option<bool>,
    pub mu: usize,
    pub section_count: String,
    pub triple_set: Vec<String>,
    pub triangles_match_triples: bool,
    pub two_connected: bool,
    pub cover_graph_is_two_tree: bool,
    /// Decomposition grown from the first section.
    pub decomposition: DecompositionSummary,
    pub shelling: ShellingReport,
    pub patchwork: PatchworkReport,
}

/// Full report. Fails with [`Error::NotACover`] when some interior vertex is
/// unsupported.
pub fn analyze(tree: &PhyloTree, cover: &TripletCover, limits: Limits) -> Result<AnalysisReport> {
    let support = require_cover(tree, cover)?;
    let taxa = tree.taxa();
    let n = taxa.len();
    let triple_set = support.triple_set();
    let graph = build_cover_graph(cover);
    let hall_type = match is_hall_type(taxa, &triple_set, limits.hall_cap) {
        Ok(b) => Some(b),
        Err(Error::Capacity { .. }) => None,
        Err(e) => return Err(e),
    };
    let first_section = support
        .sections()?
        .next()
        .ok_or_else(|| Error::Invariant("a cover has at least one section".into()))?;
    let decomposition = decomposition_from_section(&first_section)?;
    let patchwork = match shellable_via_patchwork(tree, cover, limits.sections, limits.ample_cap)? {
        PatchworkVerdict::Ample { section, hierarchy } => PatchworkReport {
            verdict: "ample",
            section: Some(triple_labels(taxa, &section)),
            hierarchy: Some(hierarchy.members().iter().map(|m| triple_labels(taxa, m)).collect()),
            detail: None,
        },
        PatchworkVerdict::NotAmple => PatchworkReport {
            verdict: "not-ample",
            section: None,
            hierarchy: None,
            detail: None,
        },
        PatchworkVerdict::Indeterminate(why) => PatchworkReport {
            verdict: "indeterminate",
            section: None,
            hierarchy: None,
            detail: Some(why),
        },
    };
    Ok(AnalysisReport {
        taxa: n,
        cords: cover.len(),
        is_cover: true,
        is_minimal: is_minimal(tree, cover)?,
        is_minimum: cover.len() == 2 * n - 3,
        is_sparse: triple_set.len() == n - 2,
        hall_type,
        mu: cover.mu(),
        section_count: support.section_count().to_string(),
        triple_set: triple_labels(taxa, &triple_set),
        triangles_match_triples: triangles(&graph) == triple_set,
        two_connected: is_two_connected(&graph)?,
        cover_graph_is_two_tree: is_two_tree(&graph).is_some(),
        decomposition: DecompositionSummary {
            blocks: decomposition.block_count(),
            strict: is_strict(&graph, &decomposition)?,
            counting_identity: verify_counting(&decomposition),
        },
        shelling: shelling_report(tree, cover)?,
        patchwork,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;

    #[test]
    fn worked_report() {
        let tree = parse_newick("((a:1,b:1):1,c:1,(d:1,e:1):1);").unwrap();
        let cover = TripletCover::from_labels(
            tree.taxa().clone(),
            &[("a", "b"), ("a", "c"), ("b", "c"), ("b", "e"), ("c", "e"), ("c", "d"), ("d", "e")],
        )
        .unwrap();
        let r = analyze(&tree, &cover, Limits::default()).unwrap();
        assert!(r.is_cover && r.is_minimal && r.is_minimum && r.is_sparse);
        assert_eq!(r.hall_type, Some(true));
        assert_eq!((r.mu, r.section_count.as_str()), (2, "1"));
        assert_eq!(r.triple_set, ["abc", "bce", "cde"]);
        assert!(r.triangles_match_triples && r.two_connected && r.cover_graph_is_two_tree);
        assert_eq!(r.decomposition, DecompositionSummary { blocks: 1, strict: true, counting_identity: true });
        assert!(r.shelling.shellable);
        assert_eq!(r.shelling.witness.steps.len(), 3);
        assert_eq!(r.patchwork.verdict, "ample");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["shelling"]["steps"][0]["quartet"], "ba|ce");
    }

    #[test]
    fn non_cover_fails() {
        let tree = parse_newick("((a:1,b:1):1,c:1,(d:1,e:1):1);").unwrap();
        let cover = TripletCover::from_labels(tree.taxa().clone(), &[("a", "b"), ("a", "c"), ("b", "c")]).unwrap();
        assert!(matches!(analyze(&tree, &cover, Limits::default()), Err(Error::NotACover(_))));
    }
}
