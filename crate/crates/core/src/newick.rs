//! Newick input and canonical output.
//!
//! Accepted grammar (whitespace allowed between tokens):
//!
//! ```text
//! tree    := subtree ";"
//! subtree := leaf | "(" subtree ("," subtree)+ ")" [":" length]
//! leaf    := label ":" length
//! length  := decimal | integer "/" integer
//! ```
//!
//! The outermost group may have two children (a rooted file); its two edges
//! are merged into one. Every other group must have exactly two children,
//! and the outermost group at most three.
//!
//! Output is rooted at the interior vertex adjacent to the least taxon and
//! lists children by the least taxon below them, so equal trees print equally.

use std::collections::BTreeMap;

use num::Signed;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Length};
use crate::taxa::{Taxa, Taxon};
use crate::tree::PhyloTree;

struct Node {
    label: Option<String>,
    length: Option<Length>,
    children: Vec<usize>,
    /// byte offset where the node starts, for error messages
    pos: usize,
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected `{}`, found `{}`", b as char, c as char)),
            None => self.err(format!("expected `{}`, found end of input", b as char)),
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_whitespace() || b"(),:;".contains(&c) {
                break;
            }
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn length(&mut self) -> Result<Option<Length>> {
        if self.peek() != Some(b':') {
            return Ok(None);
        }
        self.pos += 1;
        let at = self.pos;
        let tok = self.token();
        if tok.is_empty() {
            return self.err("missing branch length after `:`");
        }
        match parse_rational(tok) {
            Ok(v) if v.is_positive() => Ok(Some(v)),
            Ok(_) => Err(Error::NonPositiveLength(tok.to_string())),
            Err(_) => Err(Error::Syntax {
                pos: at,
                msg: format!("bad branch length `{tok}`"),
            }),
        }
    }

    fn subtree(&mut self) -> Result<usize> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let mut node = Node {
            label: None,
            length: None,
            children: Vec::new(),
            pos: start,
        };
        if self.peek() == Some(b'(') {
            self.pos += 1;
            node.children.push(self.subtree()?);
            while self.peek() == Some(b',') {
                self.pos += 1;
                node.children.push(self.subtree()?);
            }
            self.expect(b')')?;
            if node.children.len() < 2 {
                self.pos = start;
                return self.err("a group needs at least two members");
            }
            if !self.token().is_empty() {
                return self.err("interior vertices cannot carry labels");
            }
        } else {
            let label = self.token();
            if label.is_empty() {
                return match self.peek() {
                    Some(c) => self.err(format!("expected a taxon label, found `{}`", c as char)),
                    None => self.err("unexpected end of input"),
                };
            }
            node.label = Some(label.to_string());
        }
        node.length = self.length()?;
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }
}

pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    p.expect(b';')?;
    if p.peek().is_some() {
        return p.err("trailing characters after `;`");
    }
    build(p.nodes, root)
}

fn build(nodes: Vec<Node>, root: usize) -> Result<PhyloTree> {
    if nodes[root].children.is_empty() {
        return Err(Error::TooFewTaxa { needed: 3, got: 1 });
    }
    let mut labels = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        if i != root && node.length.is_none() {
            return Err(Error::Syntax {
                pos: node.pos,
                msg: "missing branch length".into(),
            });
        }
        if let Some(l) = &node.label {
            labels.push(Taxon::new(l.clone())?);
        }
        let arity = node.children.len();
        if i == root {
            if arity > 3 {
                return Err(Error::NonBinary(format!(
                    "outermost group has {arity} members"
                )));
            }
        } else if arity > 2 {
            return Err(Error::NonBinary(format!(
                "group at byte {} has {arity} members",
                node.pos
            )));
        }
    }
    let taxa = Taxa::new(labels)?;
    let n = taxa.len();
    if n < 3 {
        return Err(Error::TooFewTaxa { needed: 3, got: n });
    }

    // number the interior groups after the leaves; a two-member root is dropped
    let merge_root = nodes[root].children.len() == 2;
    let mut id = vec![usize::MAX; nodes.len()];
    let mut next = n;
    for (i, node) in nodes.iter().enumerate() {
        match &node.label {
            Some(l) => id[i] = taxa.index_of(l).unwrap(),
            None if i == root && merge_root => {}
            None => {
                id[i] = next;
                next += 1;
            }
        }
    }

    let mut edges = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        if i == root && merge_root {
            continue;
        }
        for &c in &node.children {
            edges.push((id[i], id[c], nodes[c].length.clone().unwrap()));
        }
    }
    if merge_root {
        let [l, r] = [nodes[root].children[0], nodes[root].children[1]];
        let len = nodes[l].length.clone().unwrap() + nodes[r].length.clone().unwrap();
        edges.push((id[l], id[r], len));
    }
    PhyloTree::from_edges(taxa, next, edges)
}

/// Canonical Newick text for a tree.
pub fn write_newick(tree: &PhyloTree) -> String {
    let root = tree.neighbors(tree.leaf(0)).next().unwrap().index();
    let r = tree.rooted(root);
    let n = tree.leaf_count();

    let mut least = vec![usize::MAX; tree.vertex_count()];
    for &v in r.order.iter().rev() {
        if v < n {
            least[v] = v;
        }
        if let Some((p, _)) = r.parent[v] {
            least[p] = least[p].min(least[v]);
        }
    }
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &r.order {
        if let Some((p, _)) = r.parent[v] {
            children.entry(p).or_default().push(v);
        }
    }
    for kids in children.values_mut() {
        kids.sort_by_key(|&k| least[k]);
    }

    fn emit(
        v: usize,
        tree: &PhyloTree,
        r: &crate::tree::Rooted,
        children: &BTreeMap<usize, Vec<usize>>,
        out: &mut String,
    ) {
        if v < tree.leaf_count() {
            out.push_str(tree.taxa().name(v));
        } else {
            out.push('(');
            for (i, &c) in children[&v].iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                emit(c, tree, r, children, out);
            }
            out.push(')');
        }
        if let Some((_, e)) = r.parent[v] {
            out.push(':');
            out.push_str(&format_rational(&tree.edges()[e].length));
        }
    }

    let mut out = String::new();
    emit(root, tree, &r, &children, &mut out);
    out.push(';');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn worked_parses() {
        let t = parse_newick("((a:1,b:1):1,c:1,(d:1,e:1):1);").unwrap();
        assert_eq!(t.leaf_count(), 5);
        assert!(t.edges().iter().all(|e| e.length == int(1)));
    }

    #[test]
    fn smallest_tree() {
        let t = parse_newick("(a:1,b:2,c:3);").unwrap();
        assert_eq!(t.leaf_count(), 3);
        assert_eq!(t.pendant_length(2), &int(3));
    }

    #[test]
    fn missing_interior_length() {
        let err = parse_newick("((a:1,b:1),c:1);").unwrap_err();
        assert!(matches!(err, Error::Syntax { pos: 1, .. }), "{err}");
    }

    #[test]
    fn rooted_input_is_merged() {
        let t = parse_newick("((a:1,b:1):1/2,(c:1,d:1):3/2);").unwrap();
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.edges().len(), 5);
        assert!(t.edges().iter().any(|e| e.length == int(2)));
        let t = parse_newick("((a:1,b:1):1,c:1);").unwrap();
        assert_eq!(t.pendant_length(2), &int(2));
    }

    #[test]
    fn decimal_lengths_are_exact() {
        let t = parse_newick("(a:0.1,b:2.5,c:1e-1);").unwrap();
        assert_eq!(t.pendant_length(0), &ratio(1, 10));
        assert_eq!(t.pendant_length(1), &ratio(5, 2));
        assert_eq!(t.pendant_length(2), &ratio(1, 10));
    }

    #[test]
    fn errors() {
        let cases: &[(&str, fn(&Error) -> bool)] = &[
            ("(a:1,b:1,c:1)", |e| matches!(e, Error::Syntax { .. })),
            ("(a:1,b:1,c:1);x", |e| matches!(e, Error::Syntax { .. })),
            ("(a:1,b:1,c:1,d:1);", |e| matches!(e, Error::NonBinary(_))),
            ("((a:1,b:1,c:1):1,d:1,e:1);", |e| matches!(e, Error::NonBinary(_))),
            ("(a:1,a:1,c:1);", |e| matches!(e, Error::DuplicateTaxon(_))),
            ("(a:1,b:0,c:1);", |e| matches!(e, Error::NonPositiveLength(_))),
            ("(a:1,b:-2,c:1);", |e| matches!(e, Error::NonPositiveLength(_))),
            ("(a:1,b:x,c:1);", |e| matches!(e, Error::Syntax { .. })),
            ("(a,b:1,c:1);", |e| matches!(e, Error::Syntax { .. })),
            ("(a:1,b:1);", |e| matches!(e, Error::TooFewTaxa { .. })),
            ("((a:1,b:1)x:1,c:1,d:1);", |e| matches!(e, Error::Syntax { .. })),
            ("((a:1):1,b:1,c:1);", |e| matches!(e, Error::Syntax { .. })),
            ("", |e| matches!(e, Error::Syntax { .. })),
        ];
        for (text, check) in cases {
            let err = parse_newick(text).unwrap_err();
            assert!(check(&err), "{text}: {err}");
        }
    }

    #[test]
    fn canonical_output() {
        // rooted at the neighbour of `a`, children by least taxon
        let t = parse_newick("((a:1,b:1):1,c:1,(d:1,e:1):1);").unwrap();
        assert_eq!(write_newick(&t), "(a:1,b:1,(c:1,(d:1,e:1):1):1);");
        let back = parse_newick(&write_newick(&t)).unwrap();
        assert!(back.is_isomorphic(&t, true).unwrap());
        let shuffled = parse_newick("((e:1,d:1):1,(b:1,a:1):1,c:1);").unwrap();
        assert_eq!(write_newick(&shuffled), write_newick(&t));
        let star = parse_newick("(c:3,b:2,a:1);").unwrap();
        assert_eq!(write_newick(&star), "(a:1,b:2,c:3);");
        let frac = parse_newick("(a:0.5,b:2,c:7/2);").unwrap();
        assert_eq!(write_newick(&frac), "(a:1/2,b:2,c:7/2);");
    }

    #[test]
    fn round_trip() {
        let t = parse_newick("(((a:1,f:2):3,(b:1/3,c:1):1):1,g:4,(d:1,e:1):2/7);").unwrap();
        let again = parse_newick(&write_newick(&t)).unwrap();
        assert!(t.is_isomorphic(&again, true).unwrap());
        assert_eq!(write_newick(&again), write_newick(&t));
    }
}
