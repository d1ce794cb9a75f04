//! Combinatorial tests a principal graph pair must pass.

use crate::bigraph::{starts_like, BigraphPair, Side, Vertex};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Pass,
    Fail,
}

/// What made a test fail.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Witness {
    /// Vertex `v` of the first graph and `w` of the second with unequal
    /// counts of paths through duals.
    Associativity { v: Vertex, w: Vertex, through_first: u64, through_second: u64 },
    TriplePoint { quintuple: ForbiddenQuintuple, orientation: Side },
    DualCounts { first: (usize, usize), second: (usize, usize) },
    ForbiddenPrefix { translation: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl ObstructionReport {
    fn pass() -> Self {
        ObstructionReport { verdict: Verdict::Pass, witness: None }
    }

    fn fail(w: Witness) -> Self {
        ObstructionReport { verdict: Verdict::Fail, witness: Some(w) }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Which vertex pairs the associativity test compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum AssociativityScope {
    /// Skip pairs with both vertices at the deepest depth, whose counts may
    /// still change in an extension. For weeds.
    InteriorOnly,
    /// Every pair. For vines, whose graphs are complete up to translation.
    IncludeDeepest,
}

/// Edge multiplicity between two vertices of the same graph.
#[inline]
fn adjacency(p: &BigraphPair, a: Vertex, b: Vertex) -> u64 {
    if a.side != b.side || !p.contains(a) || !p.contains(b) {
        return 0;
    }
    p.side(a.side).graph().edge(a.depth, a.index, b.depth, b.index) as u64
}

fn neighbours(p: &BigraphPair, v: Vertex) -> Vec<(Vertex, u64)> {
    p.side(v.side)
        .graph()
        .neighbours(v.depth, v.index)
        .into_iter()
        .map(|(d, i, m)| (Vertex::new(v.side, d, i), m as u64))
        .collect()
}

/// `Σ_{Z ~ V} m(V,Z) · m(Z*, W*)`.
fn path_count(p: &BigraphPair, v: Vertex, w: Vertex) -> u64 {
    let w_dual = p.dual(w);
    neighbours(p, v).into_iter().map(|(z, m)| m * adjacency(p, p.dual(z), w_dual)).sum()
}

/// For `V` in the first graph and `W` in the second at the same parity with
/// depths at most two apart, the number of paths `V - Z` with `Z*` adjacent
/// to `W*` must equal the number of paths `W - U` with `U*` adjacent to `V*`
/// (counted with multiplicity).
pub fn associativity_check(p: &BigraphPair, scope: AssociativityScope) -> ObstructionReport {
    associativity_check_from(p, scope, 0)
}

/// As [`associativity_check`], restricted to pairs with a vertex at depth
/// at least `min_depth`. The excluded pairs have the same counts in every
/// pair that starts like `p` truncated to `min_depth - 1`.
pub fn associativity_check_from(p: &BigraphPair, scope: AssociativityScope, min_depth: usize) -> ObstructionReport {
    let g1 = p.first();
    let g2 = p.second();
    let (d1, d2) = (g1.depth(), g2.depth());
    for dv in 0..=d1 {
        for dw in [dv.wrapping_sub(2), dv, dv + 2] {
            if dw > d2 || dv.max(dw) < min_depth {
                continue;
            }
            if dv == 0 && dw == 0 {
                continue;
            }
            if scope == AssociativityScope::InteriorOnly && dv == d1 && dw == d2 {
                continue;
            }
            for i in 0..g1.vertex_count(dv) {
                let v = Vertex::new(Side::First, dv, i);
                for j in 0..g2.vertex_count(dw) {
                    let w = Vertex::new(Side::Second, dw, j);
                    let a = path_count(p, v, w);
                    let b = path_count(p, w, v);
                    if a != b {
                        return ObstructionReport::fail(Witness::Associativity {
                            v,
                            w,
                            through_first: a,
                            through_second: b,
                        });
                    }
                }
            }
        }
    }
    ObstructionReport::pass()
}

/// `(S, A₁, A₂, A′₁, A′₂)` with the `A`'s drawn from the vertices `S` at
/// depth `n + 2` past an initial triple point.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ForbiddenQuintuple {
    pub s: BTreeSet<usize>,
    pub a1: BTreeSet<usize>,
    pub a2: BTreeSet<usize>,
    pub a1p: BTreeSet<usize>,
    pub a2p: BTreeSet<usize>,
}

pub fn is_forbidden(q: &ForbiddenQuintuple) -> bool {
    q.a1.is_disjoint(&q.a2)
        && q.a1p.is_disjoint(&q.a2p)
        && ((q.a1 == q.a1p && q.a2 == q.a2p) || (q.a1 == q.a2p && q.a2 == q.a1p))
}

/// Depth-(n+2) neighbours of the two depth-(n+1) vertices, if depth n+1 is
/// exactly two vertices with simple edges to the branch point.
fn triple_point_sets(g: &crate::bigraph::BigraphWithDuals, n: usize) -> Option<[BTreeSet<usize>; 2]> {
    if g.depth() < n + 2 || g.vertex_count(n) != 1 || g.vertex_count(n + 1) != 2 {
        return None;
    }
    let m = g.graph().matrix(n + 1);
    if m.rows().iter().any(|r| r[0] != 1) {
        return None;
    }
    let next = g.graph().matrix(n + 2);
    let set = |col: usize| -> BTreeSet<usize> {
        next.rows().iter().enumerate().filter(|(_, r)| r[col] > 0).map(|(i, _)| i).collect()
    };
    Some([set(0), set(1)])
}

fn triple_point_quintuple(p: &BigraphPair) -> Option<ForbiddenQuintuple> {
    let n = p.first().supertransitivity();
    if p.second().supertransitivity() != n || n == 0 {
        return None;
    }
    let [a1, a2] = triple_point_sets(p.first(), n)?;
    // Dual triple points: the other graph branches the same way.
    let [b1, b2] = triple_point_sets(p.second(), n)?;
    let s: BTreeSet<usize> = (0..p.first().vertex_count(n + 2)).collect();
    let (a1p, a2p) = if n % 2 == 1 {
        // Depth n+2 is odd, so duals are the same positions on the other graph.
        if p.second().vertex_count(n + 2) != s.len() {
            return None;
        }
        (b1, b2)
    } else {
        let g = p.first();
        let dualize = |a: &BTreeSet<usize>| a.iter().map(|&i| g.dual_even(n + 2, i)).collect();
        (dualize(&a1), dualize(&a2))
    };
    Some(ForbiddenQuintuple { s, a1, a2, a1p, a2p })
}

/// Initial triple point test, applied with each graph of the pair as the
/// principal graph. Not applicable unless both graphs have a triple point
/// at depth `n` (the supertransitivity) and reach depth `n + 2`.
pub fn triple_point_check(p: &BigraphPair) -> Result<ObstructionReport> {
    let mut applicable = false;
    for (side, q) in [(Side::First, p.clone()), (Side::Second, p.swapped())] {
        if let Some(quint) = triple_point_quintuple(&q) {
            applicable = true;
            if is_forbidden(&quint) {
                return Ok(ObstructionReport::fail(Witness::TriplePoint { quintuple: quint, orientation: side }));
            }
        }
    }
    if applicable {
        Ok(ObstructionReport::pass())
    } else {
        Err(Error::NotApplicable("no dual initial triple points with data two depths past".into()))
    }
}

/// Past an odd branch the counts of self-dual vertices and of swapped
/// pairs must agree between the two graphs.
pub fn dual_count_check(p: &BigraphPair) -> Result<ObstructionReport> {
    let a = p.first().dual_counts_at_branch()?;
    let b = p.second().dual_counts_at_branch()?;
    if a == b {
        Ok(ObstructionReport::pass())
    } else {
        Ok(ObstructionReport::fail(Witness::DualCounts {
            first: (a.self_dual, a.non_self_dual_pairs),
            second: (b.self_dual, b.non_self_dual_pairs),
        }))
    }
}

/// The pair that no principal graph pair starts like, in any translate.
pub fn forbidden_even_quadruple() -> &'static BigraphPair {
    static PAIR: OnceLock<BigraphPair> = OnceLock::new();
    PAIR.get_or_init(|| {
        crate::bigraph::parse_pair("bwd1v1v1p1p1v1x0x0duals1v1v1 bwd1v1v1p1p1v1x0x0duals1v1v1")
            .expect("valid literal")
    })
}

pub fn even_quadruple_prefix_check(p: &BigraphPair) -> ObstructionReport {
    let seed = forbidden_even_quadruple();
    for q in [p.clone(), p.swapped()] {
        if starts_like(&q, seed) {
            let k = q.supertransitivity() - seed.supertransitivity();
            return ObstructionReport::fail(Witness::ForbiddenPrefix { translation: k });
        }
    }
    ObstructionReport::pass()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn forbidden_cases() {
        let mk = |a1: &[usize], a2: &[usize], b1: &[usize], b2: &[usize]| ForbiddenQuintuple {
            s: set(&[0, 1]),
            a1: set(a1),
            a2: set(a2),
            a1p: set(b1),
            a2p: set(b2),
        };
        assert!(is_forbidden(&mk(&[0], &[1], &[0], &[1])));
        assert!(is_forbidden(&mk(&[0], &[1], &[1], &[0])));
        assert!(!is_forbidden(&mk(&[0, 1], &[1], &[0, 1], &[1])));
        assert!(!is_forbidden(&mk(&[0], &[1], &[0, 1], &[])));
    }
}
