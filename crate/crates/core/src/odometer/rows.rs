//! New-row enumeration under a norm budget.

use crate::bigraph::{Bigraph, InclusionMatrix};
use crate::spectral::norm_below;

pub type Row = Vec<u8>;

fn within(g: &Bigraph, rows: &[Row], budget: f64) -> bool {
    let m = InclusionMatrix::new(rows.to_vec()).expect("nonzero rows of the right width");
    norm_below(&g.extended(m).expect("width matches"), budget)
}

/// Rows `r` that keep the norm of `g` extended by `pending ++ [r]` below
/// `budget`, and are lexicographically at most `ordered_after` when given.
///
/// Entries are raised one position at a time; once a value pushes the norm
/// over budget, larger values at that position are skipped, since adding
/// edges never lowers the norm.
pub fn enumerate_new_rows(g: &Bigraph, pending: &[Row], budget: f64, ordered_after: Option<&[u8]>) -> Vec<Row> {
    let n = g.vertex_count(g.depth());
    let mut rows = pending.to_vec();
    rows.push(vec![0; n]);
    let mut out = Vec::new();
    rec(g, &mut rows, 0, true, ordered_after, budget, &mut out);
    out
}

fn rec(
    g: &Bigraph,
    rows: &mut Vec<Row>,
    pos: usize,
    tight: bool,
    bound: Option<&[u8]>,
    budget: f64,
    out: &mut Vec<Row>,
) {
    let last = rows.len() - 1;
    let n = rows[last].len();
    if pos == n {
        if rows[last].iter().any(|&e| e > 0) {
            out.push(rows[last].clone());
        }
        return;
    }
    let cap = match bound {
        Some(b) if tight => b[pos],
        _ => 9,
    };
    for v in 0..=cap {
        rows[last][pos] = v;
        if v > 0 && !within(g, rows, budget) {
            break;
        }
        rec(g, rows, pos + 1, tight && v == cap, bound, budget, out);
    }
    rows[last][pos] = 0;
}

/// Every nonempty block of new rows in non-increasing order, with the
/// whole extension under budget.
pub fn new_row_blocks(g: &Bigraph, budget: f64) -> Vec<Vec<Row>> {
    let mut out = Vec::new();
    let mut pending = Vec::new();
    blocks_rec(g, budget, &mut pending, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn blocks_rec(g: &Bigraph, budget: f64, pending: &mut Vec<Row>, out: &mut Vec<Vec<Row>>) {
    let after = pending.last().cloned();
    for r in enumerate_new_rows(g, pending, budget, after.as_deref()) {
        pending.push(r);
        out.push(pending.clone());
        blocks_rec(g, budget, pending, out);
        pending.pop();
    }
}

/// All involutions of `0..k`.
pub fn involutions(k: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(i) = cur.iter().position(|x| x.is_none()) else {
            out.push(cur.iter().map(|x| x.unwrap()).collect());
            return;
        };
        cur[i] = Some(i);
        go(cur, out);
        for j in i + 1..cur.len() {
            if cur[j].is_none() {
                cur[i] = Some(j);
                cur[j] = Some(i);
                go(cur, out);
                cur[j] = None;
            }
        }
        cur[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; k], &mut out);
    out
}

/// Distinct orderings of a multiset of rows.
pub fn distinct_orderings(block: &[Row]) -> Vec<Vec<Row>> {
    let mut cur = block.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next permutation in lexicographic order
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involution_counts() {
        let counts: Vec<usize> = (0..7).map(|k| involutions(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26, 76]);
    }

    #[test]
    fn orderings_of_multiset() {
        let b = vec![vec![1, 0], vec![1, 0], vec![0, 1]];
        assert_eq!(distinct_orderings(&b).len(), 3);
    }

    #[test]
    fn no_headroom_no_rows() {
        let g = Bigraph::chain(3);
        let budget = crate::spectral::graph_norm(&g) - 1e-6;
        assert!(enumerate_new_rows(&g, &[], budget, None).is_empty());
    }
}
