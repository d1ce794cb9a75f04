//! Canonical representatives of bigraph pairs.
//!
//! A pair isomorphism relabels the vertices of each depth of each graph,
//! with the same permutation on both graphs at shared odd depths (those
//! vertices are matched across graphs by position). The canonical form is
//! the relabeling whose serialization is lexicographically least.
//!
//! The key is laid out in serialization order: first graph matrices, first
//! graph duals, second graph matrices, second graph duals. Once the column
//! order of a depth is fixed, the least block sorts its rows, so the search
//! only branches on runs of identical rows.

use super::{BigraphPair, BigraphWithDuals, InclusionMatrix};
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Per-depth permutations for both graphs; `first[d][new] = old`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub first: Vec<Vec<usize>>,
    pub second: Vec<Vec<usize>>,
}

impl Relabeling {
    pub fn identity(p: &BigraphPair) -> Self {
        let ids = |g: &BigraphWithDuals| (0..=g.depth()).map(|d| (0..g.vertex_count(d)).collect()).collect();
        Relabeling { first: ids(p.first()), second: ids(p.second()) }
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in p {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (new, &old) in p.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

fn relabel_graph(g: &BigraphWithDuals, perm: &[Vec<usize>]) -> BigraphWithDuals {
    let mut matrices = Vec::with_capacity(g.depth());
    for d in 1..=g.depth() {
        let m = g.graph().matrix(d);
        let (rows, cols) = (&perm[d], &perm[d - 1]);
        let new_rows = rows.iter().map(|&i| cols.iter().map(|&j| m.entry(i, j)).collect()).collect();
        matrices.push(InclusionMatrix { rows: new_rows, cols: m.column_count() });
    }
    let mut involutions = Vec::new();
    for d in (0..=g.depth()).step_by(2) {
        let inv = g.duals().at(d);
        let pos = inverse(&perm[d]);
        involutions.push(perm[d].iter().map(|&old| pos[inv[old]]).collect());
    }
    BigraphWithDuals::from_parts(super::Bigraph { matrices }, involutions)
}

/// Applies a relabeling, checking that it is a valid pair isomorphism.
pub fn relabel(p: &BigraphPair, r: &Relabeling) -> Result<BigraphPair> {
    for (g, perm) in [(p.first(), &r.first), (p.second(), &r.second)] {
        if perm.len() != g.depth() + 1 {
            return Err(Error::InvalidArgument("relabeling has wrong number of depths".into()));
        }
        for (d, pd) in perm.iter().enumerate() {
            if !is_permutation(pd, g.vertex_count(d)) {
                return Err(Error::InvalidArgument(format!("not a permutation at depth {d}")));
            }
        }
    }
    let shared = p.first().depth().min(p.second().depth());
    for d in (1..=shared).step_by(2) {
        if r.first[d] != r.second[d] {
            return Err(Error::InvalidArgument(format!("odd depth {d} relabeled differently")));
        }
    }
    Ok(BigraphPair::new_unchecked(relabel_graph(p.first(), &r.first), relabel_graph(p.second(), &r.second)))
}

/// All permutations of `items`, in lexicographic order of positions.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Row orders of a depth that give the least block for a fixed column
/// order, together with that block.
fn sorted_orders(m: &InclusionMatrix, cols: &[usize]) -> (Vec<u16>, Vec<Vec<usize>>) {
    let permuted: Vec<Vec<u8>> =
        m.rows().iter().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
    let mut idx: Vec<usize> = (0..permuted.len()).collect();
    idx.sort_by(|&a, &b| permuted[a].cmp(&permuted[b]));
    let block: Vec<u16> = idx.iter().flat_map(|&i| permuted[i].iter().map(|&e| e as u16)).collect();

    let mut orders: Vec<Vec<usize>> = vec![Vec::new()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && permuted[idx[end]] == permuted[idx[start]] {
            end += 1;
        }
        let group_perms = if end - start == 1 { vec![vec![idx[start]]] } else { permutations(&idx[start..end]) };
        let mut next = Vec::with_capacity(orders.len() * group_perms.len());
        for o in &orders {
            for gp in &group_perms {
                let mut v = o.clone();
                v.extend_from_slice(gp);
                next.push(v);
            }
        }
        orders = next;
        start = end;
    }
    (block, orders)
}

fn fixed_block(m: &InclusionMatrix, rows: &[usize], cols: &[usize]) -> Vec<u16> {
    rows.iter().flat_map(|&i| cols.iter().map(move |&j| m.entry(i, j) as u16)).collect()
}

fn duals_block(g: &BigraphWithDuals, perm: &[Vec<usize>]) -> Vec<u16> {
    let mut out = Vec::new();
    for d in (0..=g.depth()).step_by(2) {
        let inv = g.duals().at(d);
        let pos = inverse(&perm[d]);
        out.extend(perm[d].iter().map(|&old| pos[inv[old]] as u16));
    }
    out
}

struct Search<'a> {
    graphs: [&'a BigraphWithDuals; 2],
    perm: [Vec<Vec<usize>>; 2],
    key: Vec<u16>,
    best: Option<(Vec<u16>, [Vec<Vec<usize>>; 2])>,
}

impl<'a> Search<'a> {
    /// Compares the key built so far with the same-length prefix of the best.
    fn against_best(&self) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some((best, _)) => self.key.as_slice().cmp(&best[..self.key.len()]),
        }
    }

    fn push(&mut self, block: &[u16]) -> bool {
        self.key.extend_from_slice(block);
        self.against_best() != Ordering::Greater
    }

    fn pop(&mut self, n: usize) {
        let len = self.key.len() - n;
        self.key.truncate(len);
    }

    fn shared_odd(&self, d: usize) -> bool {
        d % 2 == 1 && d <= self.graphs[0].depth() && d <= self.graphs[1].depth()
    }

    fn first_graph(&mut self, d: usize) {
        let g = self.graphs[0];
        if d > g.depth() {
            let block = duals_block(g, &self.perm[0]);
            if self.push(&block) {
                self.second_graph(1);
            }
            self.pop(block.len());
            return;
        }
        let (block, orders) = sorted_orders(g.graph().matrix(d), &self.perm[0][d - 1]);
        if self.push(&block) {
            let shared = self.shared_odd(d);
            for order in orders {
                if shared {
                    self.perm[1][d] = order.clone();
                }
                self.perm[0][d] = order;
                self.first_graph(d + 1);
            }
        }
        self.pop(block.len());
    }

    fn second_graph(&mut self, d: usize) {
        let g = self.graphs[1];
        if d > g.depth() {
            let block = duals_block(g, &self.perm[1]);
            self.key.extend_from_slice(&block);
            if self.against_best() == Ordering::Less {
                self.best = Some((self.key.clone(), self.perm.clone()));
            }
            self.pop(block.len());
            return;
        }
        let m = g.graph().matrix(d);
        if self.shared_odd(d) {
            let block = fixed_block(m, &self.perm[1][d], &self.perm[1][d - 1]);
            if self.push(&block) {
                self.second_graph(d + 1);
            }
            self.pop(block.len());
            return;
        }
        let (block, orders) = sorted_orders(m, &self.perm[1][d - 1]);
        if self.push(&block) {
            for order in orders {
                self.perm[1][d] = order;
                self.second_graph(d + 1);
            }
        }
        self.pop(block.len());
    }
}

fn best_relabeling(p: &BigraphPair) -> Relabeling {
    let id = Relabeling::identity(p);
    let mut s = Search {
        graphs: [p.first(), p.second()],
        perm: [id.first, id.second],
        key: Vec::new(),
        best: None,
    };
    s.first_graph(1);
    let (_, [first, second]) = s.best.expect("search visits at least one labeling");
    Relabeling { first, second }
}

/// The isomorphism-class representative of `p`; exchanging the two graphs
/// is not an isomorphism here.
pub fn canonical_form(p: &BigraphPair) -> BigraphPair {
    relabel(p, &best_relabeling(p)).expect("search yields valid relabelings")
}

/// Serialization of [`canonical_form`].
pub fn canonical_key(p: &BigraphPair) -> String {
    canonical_form(p).to_string()
}

/// The lesser of the canonical forms of `p` and of `p` with its graphs
/// exchanged. Lists of candidates are kept modulo this exchange.
pub fn canonical_form_up_to_swap(p: &BigraphPair) -> BigraphPair {
    let a = canonical_form(p);
    let b = canonical_form(&p.swapped());
    if b.to_string() < a.to_string() {
        b
    } else {
        a
    }
}

pub fn canonical_key_up_to_swap(p: &BigraphPair) -> String {
    canonical_form_up_to_swap(p).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::parse_pair;

    #[test]
    fn rows_sort_ascending() {
        let p = parse_pair("bwd1v1v1v1p1v1x0p0x1duals1v1v1x2 bwd1v1v1v1p1v1x0p0x1duals1v1v1x2").unwrap();
        let c = canonical_form(&p);
        assert_eq!(c.to_string(), "bwd1v1v1v1p1v0x1p1x0duals1v1v1x2 bwd1v1v1v1p1v0x1p1x0duals1v1v1x2");
    }

    #[test]
    fn odd_depths_move_together() {
        // the depth-4 vertex hangs off a different depth-3 vertex on each graph
        let p = parse_pair("bwd1v1v1p1v1x0duals1v1v1 bwd1v1v1p1v0x1duals1v1v1").unwrap();
        let q = parse_pair("bwd1v1v1p1v0x1duals1v1v1 bwd1v1v1p1v1x0duals1v1v1").unwrap();
        assert_eq!(canonical_key(&p), canonical_key(&q));
        let r = parse_pair("bwd1v1v1p1v1x0duals1v1v1 bwd1v1v1p1v1x0duals1v1v1").unwrap();
        assert_ne!(canonical_key(&p), canonical_key(&r));
    }

    #[test]
    fn duals_conjugate() {
        let p = parse_pair("bwd1v1v1v1p1p1duals1v1v1x3x2 bwd1v1v1v1p1p1duals1v1v1x3x2").unwrap();
        let q = parse_pair("bwd1v1v1v1p1p1duals1v1v2x1x3 bwd1v1v1v1p1p1duals1v1v2x1x3").unwrap();
        assert_eq!(canonical_key(&p), canonical_key(&q));
    }
}
