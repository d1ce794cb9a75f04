//! Graded bipartite graphs with dual data.
//!
//! A [`Bigraph`] is stored as its inclusion matrices `M_1..M_D`; rows of `M_d`
//! are the vertices at depth `d`, columns the vertices at depth `d - 1`.
//! Indices are 0-based everywhere in the API; only the codec uses 1-based
//! involution entries.

mod annular;
mod canonical;
mod codec;
mod ops;

pub use annular::{
    annular_multiplicities, annular_multiplicity, annular_profile, loop_count, AnnularProfile,
};
pub use canonical::{
    canonical_form, canonical_form_up_to_swap, canonical_key, canonical_key_up_to_swap, relabel,
    Relabeling,
};
pub use codec::{parse_bigraph, parse_pair, serialize_bigraph, serialize_pair};
pub use ops::{starts_like, translate};

use crate::error::{structure, Error, Result};
use std::fmt;

/// Which graph of a pair a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// A vertex of a bigraph pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Vertex {
    pub side: Side,
    pub depth: usize,
    pub index: usize,
}

impl Vertex {
    pub fn new(side: Side, depth: usize, index: usize) -> Self {
        Vertex { side, depth, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.side == Side::Second { "'" } else { "" };
        write!(f, "v{}{}[{}]", self.depth, prime, self.index + 1)
    }
}

/// Edge multiplicities between depth `d` (rows) and depth `d - 1` (columns).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InclusionMatrix {
    rows: Vec<Vec<u8>>,
    cols: usize,
}

impl InclusionMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let cols = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| structure("inclusion matrix has no rows"))?;
        if cols == 0 {
            return Err(structure("inclusion matrix has no columns"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(structure(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    cols
                )));
            }
            if row.iter().all(|&e| e == 0) {
                return Err(structure(format!("row {} is zero", i + 1)));
            }
            if row.iter().any(|&e| e > 9) {
                return Err(structure(format!("row {} has an entry above 9", i + 1)));
            }
        }
        Ok(InclusionMatrix { rows, cols })
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_count(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.rows[row][col]
    }

    pub fn max_entry(&self) -> u8 {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// A rooted graded bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bigraph {
    matrices: Vec<InclusionMatrix>,
}

impl Bigraph {
    /// The lone root vertex.
    pub fn root() -> Self {
        Bigraph { matrices: Vec::new() }
    }

    pub fn new(matrices: Vec<InclusionMatrix>) -> Result<Self> {
        let mut above = 1;
        for (i, m) in matrices.iter().enumerate() {
            if m.column_count() != above {
                return Err(structure(format!(
                    "matrix at depth {} has {} columns but depth {} has {} vertices",
                    i + 1,
                    m.column_count(),
                    i,
                    above
                )));
            }
            above = m.row_count();
        }
        Ok(Bigraph { matrices })
    }

    /// The chain with `depth` edges.
    pub fn chain(depth: usize) -> Self {
        let m = InclusionMatrix { rows: vec![vec![1]], cols: 1 };
        Bigraph { matrices: vec![m; depth] }
    }

    pub fn depth(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[InclusionMatrix] {
        &self.matrices
    }

    /// Inclusion matrix into depth `d`, for `1 <= d <= depth`.
    pub fn matrix(&self, d: usize) -> &InclusionMatrix {
        &self.matrices[d - 1]
    }

    pub fn vertex_count(&self, d: usize) -> usize {
        if d == 0 {
            1
        } else {
            self.matrices[d - 1].row_count()
        }
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        (0..=self.depth()).map(|d| self.vertex_count(d)).collect()
    }

    pub fn total_vertices(&self) -> usize {
        1 + self.matrices.iter().map(|m| m.row_count()).sum::<usize>()
    }

    /// Multiplicity of the edge between vertex `i` at depth `d` and vertex
    /// `j` at depth `e`; zero unless the depths are adjacent.
    pub fn edge(&self, d: usize, i: usize, e: usize, j: usize) -> u8 {
        if e + 1 == d && d <= self.depth() {
            self.matrices[d - 1].entry(i, j)
        } else if d + 1 == e && e <= self.depth() {
            self.matrices[e - 1].entry(j, i)
        } else {
            0
        }
    }

    /// Neighbours `(depth, index, multiplicity)` of vertex `i` at depth `d`.
    pub fn neighbours(&self, d: usize, i: usize) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        if d >= 1 {
            for (j, &m) in self.matrices[d - 1].rows[i].iter().enumerate() {
                if m > 0 {
                    out.push((d - 1, j, m));
                }
            }
        }
        if d < self.depth() {
            for (j, row) in self.matrices[d].rows.iter().enumerate() {
                if row[i] > 0 {
                    out.push((d + 1, j, row[i]));
                }
            }
        }
        out
    }

    /// Depth-indexed offsets into a flat vertex numbering.
    pub fn vertex_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.depth() + 2);
        let mut acc = 0;
        for d in 0..=self.depth() {
            offsets.push(acc);
            acc += self.vertex_count(d);
        }
        offsets.push(acc);
        offsets
    }

    pub fn extended(&self, m: InclusionMatrix) -> Result<Bigraph> {
        if m.column_count() != self.vertex_count(self.depth()) {
            return Err(structure(format!(
                "new matrix has {} columns, deepest level has {} vertices",
                m.column_count(),
                self.vertex_count(self.depth())
            )));
        }
        let mut matrices = self.matrices.clone();
        matrices.push(m);
        Ok(Bigraph { matrices })
    }

    /// Keeps depths `0..=depth`.
    pub fn truncated(&self, depth: usize) -> Bigraph {
        Bigraph { matrices: self.matrices[..depth.min(self.depth())].to_vec() }
    }

    /// Prepends a chain of `k` edges; the old root ends up at depth `k`.
    pub fn translated(&self, k: usize) -> Bigraph {
        let mut matrices = Bigraph::chain(k).matrices;
        matrices.extend(self.matrices.iter().cloned());
        Bigraph { matrices }
    }

    /// Largest `n` such that the graph is the chain `A_n` through depth `n`.
    pub fn supertransitivity(&self) -> usize {
        for d in 0..self.depth() {
            let m = &self.matrices[d];
            if m.row_count() != 1 || m.entry(0, 0) != 1 {
                return d;
            }
        }
        self.depth()
    }

    pub fn is_chain(&self) -> bool {
        self.supertransitivity() == self.depth()
    }
}

/// One involution per even depth `0, 2, ..., <= D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualData {
    involutions: Vec<Vec<usize>>,
}

impl DualData {
    pub fn new(involutions: Vec<Vec<usize>>) -> Result<Self> {
        for (g, inv) in involutions.iter().enumerate() {
            check_involution(inv).map_err(|m| structure(format!("duals at depth {}: {m}", 2 * g)))?;
        }
        if let Some(first) = involutions.first() {
            if first.as_slice() != [0] {
                return Err(structure("depth-0 duals must be the single fixed root"));
            }
        }
        Ok(DualData { involutions })
    }

    /// Involution at even depth `d`.
    pub fn at(&self, d: usize) -> &[usize] {
        debug_assert!(d.is_multiple_of(2));
        &self.involutions[d / 2]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.involutions
    }
}

pub(crate) fn check_involution(inv: &[usize]) -> std::result::Result<(), String> {
    for (i, &j) in inv.iter().enumerate() {
        if j >= inv.len() {
            return Err(format!("entry {} out of range", j + 1));
        }
        if inv[j] != i {
            return Err(format!("not an involution ({} -> {} -> {})", i + 1, j + 1, inv[j] + 1));
        }
    }
    Ok(())
}

/// A bigraph together with duality on its even vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigraphWithDuals {
    graph: Bigraph,
    duals: DualData,
}

impl BigraphWithDuals {
    pub fn new(graph: Bigraph, duals: DualData) -> Result<Self> {
        let groups = graph.depth() / 2 + 1;
        if duals.groups().len() != groups {
            return Err(structure(format!(
                "depth {} needs {} dual groups, found {}",
                graph.depth(),
                groups,
                duals.groups().len()
            )));
        }
        for (g, inv) in duals.groups().iter().enumerate() {
            let n = graph.vertex_count(2 * g);
            if inv.len() != n {
                return Err(structure(format!(
                    "duals at depth {} have {} entries for {} vertices",
                    2 * g,
                    inv.len(),
                    n
                )));
            }
        }
        Ok(BigraphWithDuals { graph, duals })
    }

    pub(crate) fn from_parts(graph: Bigraph, involutions: Vec<Vec<usize>>) -> Self {
        BigraphWithDuals { graph, duals: DualData { involutions } }
    }

    /// The chain with `depth` edges and trivial duality.
    pub fn chain(depth: usize) -> Self {
        let involutions = vec![vec![0]; depth / 2 + 1];
        BigraphWithDuals::from_parts(Bigraph::chain(depth), involutions)
    }

    pub fn graph(&self) -> &Bigraph {
        &self.graph
    }

    pub fn duals(&self) -> &DualData {
        &self.duals
    }

    pub fn depth(&self) -> usize {
        self.graph.depth()
    }

    pub fn vertex_count(&self, d: usize) -> usize {
        self.graph.vertex_count(d)
    }

    pub fn supertransitivity(&self) -> usize {
        self.graph.supertransitivity()
    }

    /// Adds one depth. `involution` is required exactly when the new depth is even.
    pub fn extended(&self, m: InclusionMatrix, involution: Option<Vec<usize>>) -> Result<Self> {
        let graph = self.graph.extended(m)?;
        let mut involutions = self.duals.involutions.clone();
        match (graph.depth() % 2 == 0, involution) {
            (true, Some(inv)) => {
                if inv.len() != graph.vertex_count(graph.depth()) {
                    return Err(structure("involution size does not match new depth"));
                }
                check_involution(&inv).map_err(structure)?;
                involutions.push(inv);
            }
            (false, None) => {}
            (true, None) => return Err(structure("even depth needs an involution")),
            (false, Some(_)) => return Err(structure("odd depth takes no involution")),
        }
        Ok(BigraphWithDuals { graph, duals: DualData { involutions } })
    }

    pub fn truncated(&self, depth: usize) -> Self {
        let graph = self.graph.truncated(depth);
        let groups = graph.depth() / 2 + 1;
        let involutions = self.duals.involutions[..groups].to_vec();
        BigraphWithDuals { graph, duals: DualData { involutions } }
    }

    /// Translation by an even number of edges; new even vertices are self-dual.
    pub fn translated(&self, k: usize) -> Result<Self> {
        if !k.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("translation by odd k = {k}")));
        }
        let mut involutions = vec![vec![0]; k / 2];
        involutions.extend(self.duals.involutions.iter().cloned());
        Ok(BigraphWithDuals { graph: self.graph.translated(k), duals: DualData { involutions } })
    }

    /// Dual of the even vertex `i` at depth `d`.
    #[inline]
    pub fn dual_even(&self, d: usize, i: usize) -> usize {
        self.duals.involutions[d / 2][i]
    }

    /// `(a, b)`: self-dual vertices and swapped pairs at depth `n + 1`,
    /// where `n` is the (odd) supertransitivity.
    pub fn dual_counts_at_branch(&self) -> Result<DualCountSummary> {
        let n = self.supertransitivity();
        if n.is_multiple_of(2) {
            return Err(Error::NotApplicable(format!("supertransitivity {n} is even")));
        }
        if self.depth() < n + 1 {
            return Err(Error::InsufficientDepth { needed: n + 1, available: self.depth() });
        }
        let inv = self.duals.at(n + 1);
        let fixed = inv.iter().enumerate().filter(|&(i, &j)| i == j).count();
        Ok(DualCountSummary { self_dual: fixed, non_self_dual_pairs: (inv.len() - fixed) / 2 })
    }
}

impl fmt::Display for BigraphWithDuals {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_bigraph(self))
    }
}

impl std::str::FromStr for BigraphWithDuals {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_bigraph(s)
    }
}

/// Self-dual count `a` and non-self-dual pair count `b` at the depth past an odd branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DualCountSummary {
    pub self_dual: usize,
    pub non_self_dual_pairs: usize,
}

/// Principal graph and dual principal graph candidates.
///
/// Odd vertices with the same index at the same depth are dual to each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigraphPair {
    first: BigraphWithDuals,
    second: BigraphWithDuals,
}

impl BigraphPair {
    pub fn new(first: BigraphWithDuals, second: BigraphWithDuals) -> Result<Self> {
        let (d1, d2) = (first.depth(), second.depth());
        if d1.abs_diff(d2) > 1 {
            return Err(Error::InvalidPair(format!("depths {d1} and {d2} differ by more than one")));
        }
        if d1 != d2 && d1.max(d2) % 2 != 0 {
            return Err(Error::InvalidPair(format!(
                "unequal depths {d1} and {d2}: the deeper graph must have even depth"
            )));
        }
        for d in (1..=d1.min(d2)).step_by(2) {
            if first.vertex_count(d) != second.vertex_count(d) {
                return Err(Error::InvalidPair(format!(
                    "depth {d} has {} and {} vertices",
                    first.vertex_count(d),
                    second.vertex_count(d)
                )));
            }
        }
        let (s1, s2) = (first.supertransitivity(), second.supertransitivity());
        let chain_ok = |s: usize, g: &BigraphWithDuals, other: usize| g.graph().is_chain() && s <= other;
        if s1 != s2 && !chain_ok(s1, &first, s2) && !chain_ok(s2, &second, s1) {
            return Err(Error::InvalidPair(format!("supertransitivities {s1} and {s2} differ")));
        }
        Ok(BigraphPair { first, second })
    }

    pub(crate) fn new_unchecked(first: BigraphWithDuals, second: BigraphWithDuals) -> Self {
        BigraphPair { first, second }
    }

    pub fn first(&self) -> &BigraphWithDuals {
        &self.first
    }

    pub fn second(&self) -> &BigraphWithDuals {
        &self.second
    }

    pub fn side(&self, side: Side) -> &BigraphWithDuals {
        match side {
            Side::First => &self.first,
            Side::Second => &self.second,
        }
    }

    pub fn into_parts(self) -> (BigraphWithDuals, BigraphWithDuals) {
        (self.first, self.second)
    }

    pub fn is_equal_depth(&self) -> bool {
        self.first.depth() == self.second.depth()
    }

    /// Depth of the deeper graph.
    pub fn depth(&self) -> usize {
        self.first.depth().max(self.second.depth())
    }

    pub fn swapped(&self) -> Self {
        BigraphPair { first: self.second.clone(), second: self.first.clone() }
    }

    pub fn supertransitivity(&self) -> usize {
        self.first.supertransitivity().min(self.second.supertransitivity())
    }

    pub fn is_chain(&self) -> bool {
        self.first.graph().is_chain() && self.second.graph().is_chain()
    }

    pub fn truncated(&self, d1: usize, d2: usize) -> Self {
        BigraphPair { first: self.first.truncated(d1), second: self.second.truncated(d2) }
    }

    pub fn translated(&self, k: usize) -> Result<Self> {
        Ok(BigraphPair { first: self.first.translated(k)?, second: self.second.translated(k)? })
    }

    /// The dual of a vertex: even vertices through the involution of their
    /// own graph, odd vertices to the same index on the other graph.
    #[inline]
    pub fn dual(&self, v: Vertex) -> Vertex {
        if v.depth.is_multiple_of(2) {
            let g = self.side(v.side);
            Vertex { index: g.dual_even(v.depth, v.index), ..v }
        } else {
            Vertex { side: v.side.other(), ..v }
        }
    }

    /// Whether `v` names an existing vertex.
    pub fn contains(&self, v: Vertex) -> bool {
        let g = self.side(v.side);
        v.depth <= g.depth() && v.index < g.vertex_count(v.depth)
    }
}

impl fmt::Display for BigraphPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.first, self.second)
    }
}

impl serde::Serialize for BigraphWithDuals {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&serialize_bigraph(self))
    }
}

impl<'de> serde::Deserialize<'de> for BigraphWithDuals {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = <String as serde::Deserialize>::deserialize(d)?;
        parse_bigraph(&text).map_err(serde::de::Error::custom)
    }
}

/// A pair is written as `[first, second]`.
impl serde::Serialize for BigraphPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.first)?;
        t.serialize_element(&self.second)?;
        t.end()
    }
}

impl<'de> serde::Deserialize<'de> for BigraphPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (first, second) = <(BigraphWithDuals, BigraphWithDuals) as serde::Deserialize>::deserialize(d)?;
        BigraphPair::new(first, second).map_err(serde::de::Error::custom)
    }
}
