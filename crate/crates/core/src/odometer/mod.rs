//! One-depth extensions and the classification-statement step.

mod rows;
mod tree;

pub use rows::{distinct_orderings, enumerate_new_rows, involutions, new_row_blocks, Row};
pub use tree::{NodeStatus, OdometerTree, TreeNode};

use crate::bigraph::{
    canonical_form_up_to_swap, starts_like, Bigraph, BigraphPair, BigraphWithDuals, InclusionMatrix,
};
use crate::error::{Error, Result};
use crate::obstructions::{associativity_check, associativity_check_from, AssociativityScope};
use crate::spectral::graph_norm;
use rayon::prelude::*;
use std::collections::BTreeMap;

pub const DEFAULT_SLACK: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct OdometerConfig {
    pub index_limit: f64,
    /// Added to `sqrt(index_limit)` to absorb rounding in norm comparisons.
    pub slack: f64,
    /// Drop `(W₁′, W₂′)` when `(W₁′, W₂)` or `(W₁, W₂′)` is already a vine.
    pub vine_shortcut: bool,
    /// Also discard graphs whose exact index is not strictly below the
    /// limit. The slack alone keeps graphs sitting on the limit.
    pub strict_limit: bool,
}

/// Index values within this of the limit count as reaching it.
pub const STRICT_TOLERANCE: f64 = 1e-9;

impl OdometerConfig {
    pub fn new(index_limit: f64) -> Self {
        OdometerConfig { index_limit, slack: DEFAULT_SLACK, vine_shortcut: true, strict_limit: false }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn with_vine_shortcut(mut self, on: bool) -> Self {
        self.vine_shortcut = on;
        self
    }

    pub fn with_strict_limit(mut self, on: bool) -> Self {
        self.strict_limit = on;
        self
    }

    pub fn norm_budget(&self) -> f64 {
        self.index_limit.sqrt() + self.slack
    }

    fn admits(&self, g: &Bigraph) -> bool {
        if !self.strict_limit {
            return true;
        }
        let n = graph_norm(g);
        n * n < self.index_limit - STRICT_TOLERANCE
    }
}

fn admitted_blocks(g: &BigraphWithDuals, cfg: &OdometerConfig) -> Vec<Vec<Row>> {
    let mut blocks = new_row_blocks(g.graph(), cfg.norm_budget());
    if cfg.strict_limit {
        blocks.retain(|b| {
            let m = InclusionMatrix::new(b.clone()).expect("enumerated rows are valid");
            cfg.admits(&g.graph().extended(m).expect("sizes match"))
        });
    }
    blocks
}

fn extend_with_block(g: &BigraphWithDuals, block: &[Row]) -> Vec<BigraphWithDuals> {
    let m = InclusionMatrix::new(block.to_vec()).expect("enumerated rows are valid");
    if (g.depth() + 1).is_multiple_of(2) {
        involutions(block.len())
            .into_iter()
            .map(|inv| g.extended(m.clone(), Some(inv)).expect("sizes match"))
            .collect()
    } else {
        vec![g.extended(m, None).expect("sizes match")]
    }
}

/// All one-depth extensions of `g` under the norm budget, with rows in
/// non-increasing order; at a new even depth, every involution of the new
/// vertices. Under a strict limit, only graphs strictly below it.
pub fn extend_graph(g: &BigraphWithDuals, cfg: &OdometerConfig) -> Vec<BigraphWithDuals> {
    admitted_blocks(g, cfg).iter().flat_map(|b| extend_with_block(g, b)).collect()
}

/// One-depth extensions of one graph, keeping the row blocks.
struct Extensions {
    /// `(block, extensions with that block)`.
    by_block: Vec<(Vec<Row>, Vec<BigraphWithDuals>)>,
}

impl Extensions {
    fn new(g: &BigraphWithDuals, cfg: &OdometerConfig) -> Self {
        let by_block = admitted_blocks(g, cfg)
            .into_iter()
            .map(|b| {
                let ext = extend_with_block(g, &b);
                (b, ext)
            })
            .collect();
        Extensions { by_block }
    }

    fn all(&self) -> impl Iterator<Item = &BigraphWithDuals> {
        self.by_block.iter().flat_map(|(_, e)| e.iter())
    }

    fn len(&self) -> usize {
        self.by_block.iter().map(|(_, e)| e.len()).sum()
    }
}

/// Raw equal-depth candidates for `w`, calling `sink` for each.
///
/// At a new odd depth the counts of new vertices must agree and odd
/// vertices are matched by position, so only the first graph's rows are
/// normalized and the second graph gets every distinct row order. At a new
/// even depth the graphs are extended independently.
fn for_each_equal_candidate<F>(
    w: &BigraphPair,
    ext1: &Extensions,
    ext2: &Extensions,
    skip1: &[bool],
    skip2: &[bool],
    mut sink: F,
) where
    F: FnMut(BigraphPair),
{
    let new_depth = w.first().depth() + 1;
    if new_depth % 2 == 1 {
        for (b1, e1) in &ext1.by_block {
            let g1 = &e1[0];
            for (b2, _) in ext2.by_block.iter().filter(|(b2, _)| b2.len() == b1.len()) {
                for order in distinct_orderings(b2) {
                    let m = InclusionMatrix::new(order).expect("valid rows");
                    let g2 = w.second().extended(m, None).expect("sizes match");
                    if let Ok(p) = BigraphPair::new(g1.clone(), g2) {
                        sink(p);
                    }
                }
            }
        }
    } else {
        for (i, g1) in ext1.all().enumerate() {
            if skip1[i] {
                continue;
            }
            for (j, g2) in ext2.all().enumerate() {
                if skip2[j] {
                    continue;
                }
                if let Ok(p) = BigraphPair::new(g1.clone(), g2.clone()) {
                    sink(p);
                }
            }
        }
    }
}

fn require_equal(w: &BigraphPair) -> Result<()> {
    if w.is_equal_depth() {
        Ok(())
    } else {
        Err(Error::InvalidPair("expected an equal-depth pair".into()))
    }
}

/// Inserts up to exchanging the graphs; keeps the first representative.
fn insert_class(set: &mut BTreeMap<String, BigraphPair>, p: BigraphPair) {
    let c = canonical_form_up_to_swap(&p);
    set.entry(c.to_string()).or_insert(c);
}

/// All equal-depth one-depth extensions of `w`, one per isomorphism class
/// up to exchanging the graphs, sorted by canonical string.
pub fn extend_pair_equal(w: &BigraphPair, cfg: &OdometerConfig) -> Result<Vec<BigraphPair>> {
    require_equal(w)?;
    let ext1 = Extensions::new(w.first(), cfg);
    let ext2 = Extensions::new(w.second(), cfg);
    let (n1, n2) = (ext1.len(), ext2.len());
    let mut set = BTreeMap::new();
    for_each_equal_candidate(w, &ext1, &ext2, &vec![false; n1], &vec![false; n2], |p| insert_class(&mut set, p));
    Ok(set.into_values().collect())
}

fn unequal_candidates(w: &BigraphPair, ext1: &Extensions, ext2: &Extensions) -> Vec<(usize, usize, BigraphPair)> {
    if w.first().depth().is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, g1) in ext1.all().enumerate() {
        if let Ok(p) = BigraphPair::new(g1.clone(), w.second().clone()) {
            out.push((0, i, p));
        }
    }
    for (j, g2) in ext2.all().enumerate() {
        if let Ok(p) = BigraphPair::new(w.first().clone(), g2.clone()) {
            out.push((1, j, p));
        }
    }
    out
}

/// Pairs where exactly one graph of `w` is extended; empty when `w` has even depth.
pub fn extend_pair_unequal(w: &BigraphPair, cfg: &OdometerConfig) -> Result<Vec<BigraphPair>> {
    require_equal(w)?;
    let ext1 = Extensions::new(w.first(), cfg);
    let ext2 = Extensions::new(w.second(), cfg);
    let mut set = BTreeMap::new();
    for (_, _, p) in unequal_candidates(w, &ext1, &ext2) {
        insert_class(&mut set, p);
    }
    Ok(set.into_values().collect())
}

/// What one odometer step does to a single weed.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    /// The weed itself passed the full associativity test.
    pub weed_is_vine: bool,
    pub unequal_vines: Vec<BigraphPair>,
    pub weeds: Vec<BigraphPair>,
}

/// Extends a weed by one depth and filters by associativity.
pub fn step_weed(w: &BigraphPair, cfg: &OdometerConfig) -> Result<StepOutcome> {
    require_equal(w)?;
    let weed_is_vine = associativity_check(w, AssociativityScope::IncludeDeepest).passed();

    let ext1 = Extensions::new(w.first(), cfg);
    let ext2 = Extensions::new(w.second(), cfg);
    let (n1, n2) = (ext1.len(), ext2.len());
    let mut skip1 = vec![false; n1];
    let mut skip2 = vec![false; n2];

    let mut vines = BTreeMap::new();
    for (side, idx, p) in unequal_candidates(w, &ext1, &ext2) {
        if associativity_check(&p, AssociativityScope::IncludeDeepest).passed() {
            if cfg.vine_shortcut {
                if side == 0 {
                    skip1[idx] = true;
                } else {
                    skip2[idx] = true;
                }
            }
            insert_class(&mut vines, p);
        }
    }

    // Pairs among the old depths keep the counts they had in `w`.
    let parent_ok = associativity_check(w, AssociativityScope::InteriorOnly).passed();
    let min_depth = if parent_ok { w.depth() } else { 0 };
    let mut weeds = BTreeMap::new();
    for_each_equal_candidate(w, &ext1, &ext2, &skip1, &skip2, |p| {
        if associativity_check_from(&p, AssociativityScope::InteriorOnly, min_depth).passed() {
            insert_class(&mut weeds, p);
        }
    });

    Ok(StepOutcome {
        weed_is_vine,
        unequal_vines: vines.into_values().collect(),
        weeds: weeds.into_values().collect(),
    })
}

/// `(Γ₀, Λ, 𝒱, 𝒲)`: every principal graph pair below index `Λ` starting
/// like the seed is a translate of a vine or a translated extension of a weed.
///
/// Vines and weeds are kept as canonical forms up to exchanging the two
/// graphs, sorted by their strings.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClassificationStatement {
    pub seed: BigraphPair,
    pub index_limit: f64,
    pub vines: Vec<BigraphPair>,
    pub weeds: Vec<BigraphPair>,
}

impl ClassificationStatement {
    /// The trivial statement with the seed as its only weed.
    pub fn new(seed: BigraphPair, index_limit: f64) -> Self {
        let weeds = vec![canonical_form_up_to_swap(&seed)];
        ClassificationStatement { seed, index_limit, vines: Vec::new(), weeds }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    fn normalize(&mut self) {
        for list in [&mut self.vines, &mut self.weeds] {
            let mut set = BTreeMap::new();
            for p in list.drain(..) {
                insert_class(&mut set, p);
            }
            *list = set.into_values().collect();
        }
    }
}

/// Replaces `w` by its surviving extensions; `w` and its surviving unequal
/// extensions join the vines.
pub fn odometer_step(
    s: &ClassificationStatement,
    w: &BigraphPair,
    cfg: &OdometerConfig,
) -> Result<ClassificationStatement> {
    let key = canonical_form_up_to_swap(w).to_string();
    let pos = s
        .weeds
        .iter()
        .position(|x| canonical_form_up_to_swap(x).to_string() == key)
        .ok_or_else(|| Error::InvalidArgument("not a weed of the statement".into()))?;
    let out = step_weed(w, cfg)?;
    let mut next = s.clone();
    next.weeds.remove(pos);
    if out.weed_is_vine {
        next.vines.push(w.clone());
    }
    next.vines.extend(out.unequal_vines);
    next.weeds.extend(out.weeds);
    next.normalize();
    Ok(next)
}

fn matches_stop(p: &BigraphPair, stops: &[BigraphPair]) -> bool {
    stops.iter().any(|s| starts_like(p, s) || starts_like(&p.swapped(), s))
}

/// Steps every weed, one depth level at a time, until no weeds remain, `max_steps`
/// levels have been processed, or the remaining weeds all start like a stop weed.
/// Weeds matching a stop weed are frozen and reported as weeds.
pub fn run_odometer(
    s: &ClassificationStatement,
    cfg: &OdometerConfig,
    max_steps: Option<usize>,
    stops: &[BigraphPair],
) -> Result<(ClassificationStatement, OdometerTree)> {
    let mut tree = OdometerTree::default();
    let mut frontier: Vec<usize> = Vec::new();
    let mut initial = BTreeMap::new();
    for w in &s.weeds {
        insert_class(&mut initial, w.clone());
    }
    for p in initial.into_values() {
        frontier.push(tree.push(None, p));
    }
    let mut vines = BTreeMap::new();
    for v in &s.vines {
        insert_class(&mut vines, v.clone());
    }

    let mut level = 0;
    while !frontier.is_empty() && max_steps.is_none_or(|m| level < m) {
        level += 1;
        let work: Vec<(usize, BigraphPair)> = frontier.iter().map(|&id| (id, tree.nodes[id].pair.clone())).collect();
        let results: Vec<Result<Option<StepOutcome>>> = work
            .par_iter()
            .map(|(_, w)| if matches_stop(w, stops) { Ok(None) } else { step_weed(w, cfg).map(Some) })
            .collect();

        let mut next = Vec::new();
        let mut seen = BTreeMap::new();
        for ((id, w), res) in work.into_iter().zip(results) {
            match res? {
                None => tree.nodes[id].status = NodeStatus::Frozen,
                Some(out) => {
                    tree.nodes[id].status = NodeStatus::Extended;
                    if out.weed_is_vine {
                        tree.nodes[id].vine = true;
                        insert_class(&mut vines, w);
                    }
                    for u in out.unequal_vines {
                        tree.nodes[id].unequal_vines.push(u.clone());
                        insert_class(&mut vines, u);
                    }
                    for c in out.weeds {
                        let key = c.to_string();
                        if seen.insert(key, ()).is_none() {
                            next.push(tree.push(Some(id), c));
                        }
                    }
                }
            }
        }
        frontier = next;
    }

    let weeds = tree
        .nodes
        .iter()
        .filter(|n| matches!(n.status, NodeStatus::Active | NodeStatus::Frozen))
        .map(|n| n.pair.clone())
        .collect();
    let mut out = ClassificationStatement {
        seed: s.seed.clone(),
        index_limit: s.index_limit,
        vines: vines.into_values().collect(),
        weeds,
    };
    out.normalize();
    Ok((out, tree))
}
