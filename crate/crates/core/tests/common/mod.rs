//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use bigraph_odometer::bigraph::{canonical_key_up_to_swap, serialize_pair, Bigraph, DualData, InclusionMatrix};
use bigraph_odometer::obstructions::{associativity_check, AssociativityScope};
use bigraph_odometer::spectral::graph_norm;
use bigraph_odometer::{BigraphPair, BigraphWithDuals};
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Deterministic reader over random bytes, so strategies can build
/// structured values without a cascade of dependent strategies.
pub struct Tape<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Tape<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Tape { bytes, pos: 0 }
    }

    pub fn next(&mut self, n: usize) -> usize {
        let b = self.bytes.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        b as usize % n.max(1)
    }
}

pub fn random_involution(t: &mut Tape, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, t.next(i + 1));
    }
    let mut inv: Vec<usize> = (0..n).collect();
    let pairs = t.next(n / 2 + 1);
    for k in 0..pairs {
        let (a, b) = (order[2 * k], order[2 * k + 1]);
        inv[a] = b;
        inv[b] = a;
    }
    inv
}

pub fn random_permutation(t: &mut Tape, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, t.next(i + 1));
    }
    p
}

/// A random matrix with nonzero rows and entries in `0..=max_entry`.
pub fn random_matrix(t: &mut Tape, rows: usize, cols: usize, max_entry: u8) -> InclusionMatrix {
    let weights: &[u8] = &[0, 0, 0, 1, 1, 2, 3];
    let mut m = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut row: Vec<u8> = (0..cols).map(|_| weights[t.next(weights.len())].min(max_entry)).collect();
        if row.iter().all(|&x| x == 0) {
            row[t.next(cols)] = 1;
        }
        m.push(row);
    }
    InclusionMatrix::new(m).expect("nonzero rows")
}

pub fn graph_from_counts(t: &mut Tape, counts: &[usize], max_entry: u8) -> BigraphWithDuals {
    let matrices = (1..counts.len()).map(|d| random_matrix(t, counts[d], counts[d - 1], max_entry)).collect();
    let graph = Bigraph::new(matrices).expect("valid matrices");
    let duals = (0..counts.len()).step_by(2).map(|d| random_involution(t, counts[d])).collect();
    BigraphWithDuals::new(graph, DualData::new(duals).expect("involutions")).expect("consistent")
}

/// A random pair with at most `max_vertices` per depth and depth at most `max_depth`.
pub fn random_pair(bytes: &[u8], max_vertices: usize, max_depth: usize) -> Option<BigraphPair> {
    let mut t = Tape::new(bytes);
    let depth = t.next(max_depth + 1);
    let d2 = if depth >= 1 && depth % 2 == 1 && t.next(3) == 0 { depth + 1 } else { depth };
    let mut c1 = vec![1];
    let mut c2 = vec![1];
    for d in 1..=d2 {
        let a = 1 + t.next(max_vertices);
        if d <= depth {
            c1.push(a);
        }
        if d % 2 == 1 {
            c2.push(a);
        } else {
            c2.push(1 + t.next(max_vertices));
        }
    }
    let g1 = graph_from_counts(&mut t, &c1, 3);
    let g2 = graph_from_counts(&mut t, &c2, 3);
    let p = if t.next(2) == 0 { BigraphPair::new(g1, g2) } else { BigraphPair::new(g2, g1) };
    p.ok()
}

pub fn pair_strategy(max_vertices: usize, max_depth: usize) -> impl Strategy<Value = BigraphPair> {
    prop::collection::vec(any::<u8>(), 256).prop_filter_map("invalid pair", move |b| random_pair(&b, max_vertices, max_depth))
}

/// A random connected graph; used for spectral properties.
pub fn graph_strategy(max_vertices: usize, max_depth: usize) -> impl Strategy<Value = BigraphWithDuals> {
    prop::collection::vec(any::<u8>(), 256).prop_map(move |b| {
        let mut t = Tape::new(&b);
        let depth = 1 + t.next(max_depth);
        let counts: Vec<usize> = (0..=depth).map(|d| if d == 0 { 1 } else { 1 + t.next(max_vertices) }).collect();
        graph_from_counts(&mut t, &counts, 2)
    })
}

// ---------------------------------------------------------------------------
// Relabeling oracle

fn apply_perms(g: &BigraphWithDuals, perm: &[Vec<usize>]) -> BigraphWithDuals {
    let matrices = (1..=g.depth())
        .map(|d| {
            let m = g.graph().matrix(d);
            let rows = perm[d].iter().map(|&i| perm[d - 1].iter().map(|&j| m.entry(i, j)).collect()).collect();
            InclusionMatrix::new(rows).unwrap()
        })
        .collect();
    let duals = (0..=g.depth())
        .step_by(2)
        .map(|d| {
            let inv = g.duals().at(d);
            let mut pos = vec![0; perm[d].len()];
            for (new, &old) in perm[d].iter().enumerate() {
                pos[old] = new;
            }
            perm[d].iter().map(|&old| pos[inv[old]]).collect()
        })
        .collect();
    BigraphWithDuals::new(Bigraph::new(matrices).unwrap(), DualData::new(duals).unwrap()).unwrap()
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Independent choices of a relabeling: per odd depth (shared), and per even depth of each graph.
fn slots(p: &BigraphPair) -> Vec<(u8, usize, usize)> {
    let mut s = Vec::new();
    let depth = p.first().depth().max(p.second().depth());
    for d in 0..=depth {
        if d % 2 == 1 {
            s.push((2, d, p.first().vertex_count(d)));
        } else {
            if d <= p.first().depth() {
                s.push((0, d, p.first().vertex_count(d)));
            }
            if d <= p.second().depth() {
                s.push((1, d, p.second().vertex_count(d)));
            }
        }
    }
    s
}

pub fn relabeling_count(p: &BigraphPair) -> usize {
    slots(p).iter().map(|&(_, _, n)| (1..=n).product::<usize>()).product()
}

/// Applies shared odd and per-graph even permutations chosen by `choice`.
pub fn relabel_with(p: &BigraphPair, choice: &[Vec<usize>]) -> BigraphPair {
    let s = slots(p);
    let mut p1: Vec<Vec<usize>> = vec![Vec::new(); p.first().depth() + 1];
    let mut p2: Vec<Vec<usize>> = vec![Vec::new(); p.second().depth() + 1];
    for ((kind, d, _), perm) in s.iter().zip(choice) {
        match kind {
            0 => p1[*d] = perm.clone(),
            1 => p2[*d] = perm.clone(),
            _ => {
                if *d <= p.first().depth() {
                    p1[*d] = perm.clone();
                }
                if *d <= p.second().depth() {
                    p2[*d] = perm.clone();
                }
            }
        }
    }
    BigraphPair::new(apply_perms(p.first(), &p1), apply_perms(p.second(), &p2)).unwrap()
}

pub fn random_relabeling(p: &BigraphPair, t: &mut Tape) -> Vec<Vec<usize>> {
    slots(p).iter().map(|&(_, _, n)| random_permutation(t, n)).collect()
}

/// The least serialization over every pair isomorphism, by exhaustion.
pub fn brute_canonical_string(p: &BigraphPair) -> String {
    let options: Vec<Vec<Vec<usize>>> = slots(p).iter().map(|&(_, _, n)| all_permutations(n)).collect();
    let mut best: Option<String> = None;
    let mut idx = vec![0usize; options.len()];
    loop {
        let choice: Vec<Vec<usize>> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
        let s = serialize_pair(&relabel_with(p, &choice));
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best.unwrap();
            }
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Enumerate-everything odometer oracle

fn involutions_brute(n: usize) -> Vec<Vec<usize>> {
    all_permutations(n).into_iter().filter(|p| (0..n).all(|i| p[p[i]] == i)).collect()
}

/// Every one-depth extension under the norm budget: all ordered row
/// sequences, all involutions, pruned only by the norm.
pub fn brute_extensions(g: &BigraphWithDuals, budget: f64) -> Vec<BigraphWithDuals> {
    let cols = g.vertex_count(g.depth());
    let max_entry = budget.floor() as u8;
    let mut rows_all: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..cols {
        rows_all = rows_all.into_iter().flat_map(|r| (0..=max_entry).map(move |x| [r.clone(), vec![x]].concat())).collect();
    }
    rows_all.retain(|r| r.iter().any(|&x| x > 0));

    let mut blocks: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut stack: Vec<Vec<Vec<u8>>> = vec![vec![]];
    while let Some(block) = stack.pop() {
        for r in &rows_all {
            let mut b = block.clone();
            b.push(r.clone());
            let m = InclusionMatrix::new(b.clone()).unwrap();
            let ext = g.graph().extended(m).unwrap();
            if graph_norm(&ext) <= budget {
                blocks.push(b.clone());
                stack.push(b);
            }
        }
    }
    let new_depth = g.depth() + 1;
    let mut out = Vec::new();
    for b in blocks {
        let m = InclusionMatrix::new(b.clone()).unwrap();
        if new_depth.is_multiple_of(2) {
            for inv in involutions_brute(b.len()) {
                out.push(g.extended(m.clone(), Some(inv)).unwrap());
            }
        } else {
            out.push(g.extended(m, None).unwrap());
        }
    }
    out
}

pub struct OracleRun {
    pub vines: BTreeSet<String>,
    pub weeds: BTreeSet<String>,
}

/// `steps` levels of the odometer semantics, shortcut off, by exhaustion.
pub fn brute_odometer(seed: &BigraphPair, budget: f64, steps: usize) -> OracleRun {
    let mut weeds: BTreeMap<String, BigraphPair> = BTreeMap::new();
    weeds.insert(canonical_key_up_to_swap(seed), seed.clone());
    let mut vines = BTreeSet::new();
    for _ in 0..steps {
        let mut next = BTreeMap::new();
        for w in weeds.values() {
            if associativity_check(w, AssociativityScope::IncludeDeepest).passed() {
                vines.insert(canonical_key_up_to_swap(w));
            }
            let e1 = brute_extensions(w.first(), budget);
            let e2 = brute_extensions(w.second(), budget);
            if w.first().depth() % 2 == 1 {
                let one_sided = e1
                    .iter()
                    .filter_map(|g| BigraphPair::new(g.clone(), w.second().clone()).ok())
                    .chain(e2.iter().filter_map(|g| BigraphPair::new(w.first().clone(), g.clone()).ok()));
                for p in one_sided {
                    if associativity_check(&p, AssociativityScope::IncludeDeepest).passed() {
                        vines.insert(canonical_key_up_to_swap(&p));
                    }
                }
            }
            let new_depth = w.first().depth() + 1;
            for g1 in &e1 {
                for g2 in &e2 {
                    if new_depth % 2 == 1 && g1.vertex_count(new_depth) != g2.vertex_count(new_depth) {
                        continue;
                    }
                    let Ok(p) = BigraphPair::new(g1.clone(), g2.clone()) else { continue };
                    if associativity_check(&p, AssociativityScope::InteriorOnly).passed() {
                        next.entry(canonical_key_up_to_swap(&p)).or_insert(p);
                    }
                }
            }
        }
        weeds = next;
    }
    OracleRun { vines, weeds: weeds.into_keys().collect() }
}
