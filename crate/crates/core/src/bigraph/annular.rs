//! Closed walks at the root and the annular multiplicities derived from them.

use super::Bigraph;
use crate::error::{Error, Result};

/// Number of closed walks of length `2r` at the root, with edge multiplicities.
///
/// Such a walk never leaves depths `0..=r`, so the graph must be known to depth `r`.
pub fn loop_count(g: &Bigraph, r: usize) -> Result<i128> {
    if r > g.depth() {
        return Err(Error::InsufficientDepth { needed: r, available: g.depth() });
    }
    let g = g.truncated(r);
    let mut cur: Vec<Vec<i128>> = (0..=g.depth()).map(|d| vec![0; g.vertex_count(d)]).collect();
    cur[0][0] = 1;
    for _ in 0..2 * r {
        let mut next: Vec<Vec<i128>> = cur.iter().map(|v| vec![0; v.len()]).collect();
        for d in 1..=g.depth() {
            let m = g.matrix(d);
            for (i, row) in m.rows().iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    if e > 0 {
                        let e = e as i128;
                        next[d][i] += e * cur[d - 1][j];
                        next[d - 1][j] += e * cur[d][i];
                    }
                }
            }
        }
        cur = next;
    }
    Ok(cur[0][0])
}

fn binomial(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn catalan(r: usize) -> i128 {
    binomial(2 * r as i128, r as i128) / (r as i128 + 1)
}

fn multiplicity_from_loops(w: &[i128], n: usize) -> i128 {
    if n == 0 {
        return 1;
    }
    let n_ = n as i128;
    (0..=n)
        .map(|r| {
            let r_ = r as i128;
            let coeff = 2 * n_ * binomial(n_ + r_, n_ - r_) / (n_ + r_);
            let sign = if (n - r).is_multiple_of(2) { 1 } else { -1 };
            sign * coeff * (w[r] - catalan(r))
        })
        .sum()
}

/// `a_n` for `n >= 1`; `a_0 = 1` by convention.
///
/// The walk counts are taken relative to the chain (Catalan numbers), which
/// changes only `a_1`: the bare alternating sum gives -1 there for every graph.
pub fn annular_multiplicity(g: &Bigraph, n: usize) -> Result<i128> {
    let w = (0..=n).map(|r| loop_count(g, r)).collect::<Result<Vec<_>>>()?;
    Ok(multiplicity_from_loops(&w, n))
}

/// `a_0..=a_n`.
pub fn annular_multiplicities(g: &Bigraph, n: usize) -> Result<Vec<i128>> {
    Ok(annular_profile(g, n)?.multiplicities)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AnnularProfile {
    pub loop_counts: Vec<i128>,
    pub multiplicities: Vec<i128>,
}

pub fn annular_profile(g: &Bigraph, n: usize) -> Result<AnnularProfile> {
    let loop_counts = (0..=n).map(|r| loop_count(g, r)).collect::<Result<Vec<_>>>()?;
    let multiplicities = (0..=n).map(|k| multiplicity_from_loops(&loop_counts, k)).collect();
    Ok(AnnularProfile { loop_counts, multiplicities })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_walks_are_catalan() {
        let g = Bigraph::chain(6);
        let w: Vec<i128> = (0..=6).map(|r| loop_count(&g, r).unwrap()).collect();
        assert_eq!(w, vec![1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn coefficients_are_integral() {
        for n in 1..30i128 {
            for r in 0..=n {
                assert_eq!((2 * n * binomial(n + r, n - r)) % (n + r), 0);
            }
        }
    }
}
