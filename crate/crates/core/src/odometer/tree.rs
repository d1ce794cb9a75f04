use crate::bigraph::BigraphPair;
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum NodeStatus {
    /// Still a weed when the run stopped.
    Active,
    /// Matched a stop weed; kept as a weed without extending.
    Frozen,
    /// Extended by one depth; its surviving children are its tree children.
    Extended,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub pair: BigraphPair,
    pub status: NodeStatus,
    /// Passed the full associativity test when extended.
    pub vine: bool,
    /// Unequal extensions that passed as vines.
    pub unequal_vines: Vec<BigraphPair>,
}

/// Every weed a run produced, with parent links.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct OdometerTree {
    pub nodes: Vec<TreeNode>,
}

impl OdometerTree {
    pub(crate) fn push(&mut self, parent: Option<usize>, pair: BigraphPair) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            id,
            parent,
            pair,
            status: NodeStatus::Active,
            vine: false,
            unequal_vines: Vec::new(),
        });
        id
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    pub fn roots(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.parent.is_none())
    }

    /// Nodes that are weeds of the final statement.
    pub fn is_weed(&self, id: usize) -> bool {
        matches!(self.nodes[id].status, NodeStatus::Active | NodeStatus::Frozen)
    }

    /// Indented outline, one node per line: `W` marks final weeds, `-` the rest.
    pub fn outline(&self) -> String {
        let mut out = String::new();
        for root in self.roots() {
            self.outline_rec(root.id, 0, &mut out);
        }
        out
    }

    fn outline_rec(&self, id: usize, depth: usize, out: &mut String) {
        let mark = if self.is_weed(id) { 'W' } else { '-' };
        let _ = writeln!(out, "{}{} {}", "  ".repeat(depth), mark, self.nodes[id].pair);
        for c in self.children(id) {
            self.outline_rec(c.id, depth + 1, out);
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph odometer {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let mut attrs = format!("label=\"{}\\n{}\"", n.pair.first(), n.pair.second());
            if self.is_weed(n.id) {
                attrs.push_str(", style=filled, fillcolor=\"#f4b6b6\"");
            }
            if n.vine {
                attrs.push_str(", peripheries=2");
            }
            let _ = writeln!(out, "  n{} [{}];", n.id, attrs);
        }
        for n in &self.nodes {
            if let Some(p) = n.parent {
                let _ = writeln!(out, "  n{} -> n{};", p, n.id);
            }
        }
        out.push_str("}\n");
        out
    }
}
