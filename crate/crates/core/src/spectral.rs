//! Graph norms, dimension vectors and quantum-integer screens.

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Graphs with fewer vertices are handled by a dense eigensolve.
const DENSE_LIMIT: usize = 64;

/// `B` with even vertices as rows and odd vertices as columns.
fn bipartite_block(g: &Bigraph) -> DMatrix<f64> {
    let mut even_off = vec![0; g.depth() + 1];
    let mut odd_off = vec![0; g.depth() + 1];
    let (mut ne, mut no) = (0, 0);
    for d in 0..=g.depth() {
        if d % 2 == 0 {
            even_off[d] = ne;
            ne += g.vertex_count(d);
        } else {
            odd_off[d] = no;
            no += g.vertex_count(d);
        }
    }
    let mut b = DMatrix::zeros(ne, no);
    for d in 1..=g.depth() {
        for (i, row) in g.matrix(d).rows().iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (r, c) = if d % 2 == 0 {
                    (even_off[d] + i, odd_off[d - 1] + j)
                } else {
                    (even_off[d - 1] + j, odd_off[d] + i)
                };
                b[(r, c)] = e as f64;
            }
        }
    }
    b
}

/// The smaller of `B Bᵗ` and `Bᵗ B`; its top eigenvalue is the squared norm.
fn gram(g: &Bigraph) -> DMatrix<f64> {
    let b = bipartite_block(g);
    if b.nrows() <= b.ncols() {
        &b * b.transpose()
    } else {
        b.transpose() * &b
    }
}

/// Full symmetric adjacency matrix, vertices numbered depth by depth.
pub fn adjacency_matrix(g: &Bigraph) -> DMatrix<f64> {
    let off = g.vertex_offsets();
    let n = g.total_vertices();
    let mut a = DMatrix::zeros(n, n);
    for d in 1..=g.depth() {
        for (i, row) in g.matrix(d).rows().iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                a[(off[d] + i, off[d - 1] + j)] = e as f64;
                a[(off[d - 1] + j, off[d] + i)] = e as f64;
            }
        }
    }
    a
}

fn top_eigenvalue_dense(m: DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Power iteration on a positive semidefinite matrix.
fn top_eigenvalue_power(m: &DMatrix<f64>, tol: f64) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..1_000_000 {
        let w = m * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / norm;
        if (next - lambda).abs() <= tol * next.abs().max(1.0) {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// Largest eigenvalue of the adjacency matrix.
pub fn graph_norm(g: &Bigraph) -> f64 {
    let m = gram(g);
    let lambda = if g.total_vertices() < DENSE_LIMIT {
        top_eigenvalue_dense(m)
    } else {
        top_eigenvalue_power(&m, 1e-15)
    };
    lambda.max(0.0).sqrt()
}

/// Same value computed from the full adjacency matrix.
pub fn graph_norm_dense(g: &Bigraph) -> f64 {
    top_eigenvalue_dense(adjacency_matrix(g))
}

/// Same value by power iteration on the bipartite Gram matrix.
pub fn graph_norm_power(g: &Bigraph) -> f64 {
    top_eigenvalue_power(&gram(g), 1e-15).max(0.0).sqrt()
}

/// Squared norm.
pub fn index(g: &Bigraph) -> f64 {
    let n = graph_norm(g);
    n * n
}

/// Whether `graph_norm(g) < bound`, decided by a Cholesky factorization of
/// `bound² I - B Bᵗ` (positive definite exactly when the norm is below bound).
pub fn norm_below(g: &Bigraph, bound: f64) -> bool {
    if bound <= 0.0 {
        return false;
    }
    let m = gram(g);
    let n = m.nrows();
    let shifted = DMatrix::from_diagonal_element(n, n, bound * bound) - m;
    nalgebra::Cholesky::new(shifted).is_some()
}

/// `[n]_q = (qⁿ - q⁻ⁿ) / (q - q⁻¹)`.
pub fn quantum_integer(n: i32, q: f64) -> f64 {
    (q.powi(n) - q.powi(-n)) / (q - 1.0 / q)
}

/// `q` with `q + q⁻¹ = delta`, taking the root above 1.
pub fn q_from_delta(delta: f64) -> f64 {
    (delta + (delta * delta - 4.0).max(0.0).sqrt()) / 2.0
}

/// Which eigen-equations constrain the dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum DimensionMode {
    /// Every vertex above the deepest depth; deepest vertices may gain
    /// neighbours in an extension.
    Truncated,
    /// Every vertex; the graph is complete.
    Finite,
}

/// Per-vertex dimensions at a deformation parameter.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DimensionProfile {
    pub q: f64,
    pub delta: f64,
    /// `dims[d][i]`, `None` where the equations leave the value free.
    pub dims: Vec<Vec<Option<f64>>>,
}

impl DimensionProfile {
    pub fn dim(&self, depth: usize, index: usize) -> Option<f64> {
        self.dims[depth][index]
    }
}

/// A solved eigen-equation system, able to evaluate linear functionals.
pub struct DimensionSystem {
    offsets: Vec<usize>,
    solution: DVector<f64>,
    /// Projector onto the orthogonal complement of the row space.
    null_projector: DMatrix<f64>,
    residual: f64,
    delta: f64,
}

const DETERMINED_TOL: f64 = 1e-8;

impl DimensionSystem {
    /// Sets up `delta·x_v = Σ m(v,w) x_w` for the constrained vertices, plus `x_root = 1`.
    pub fn new(g: &Bigraph, q: f64, mode: DimensionMode) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::InvalidArgument(format!("q = {q} must exceed 1")));
        }
        let delta = q + 1.0 / q;
        let offsets = g.vertex_offsets();
        let n = g.total_vertices();
        let last = match mode {
            DimensionMode::Truncated => g.depth().saturating_sub(1),
            DimensionMode::Finite => g.depth(),
        };
        let constrained = if g.depth() == 0 && mode == DimensionMode::Truncated { 0 } else { offsets[last + 1] };
        let mut e = DMatrix::zeros(constrained + 1, n);
        let mut b = DVector::zeros(constrained + 1);
        for d in 0..=last {
            if constrained == 0 {
                break;
            }
            for i in 0..g.vertex_count(d) {
                let row = offsets[d] + i;
                e[(row, row)] = delta;
                for (dd, j, m) in g.neighbours(d, i) {
                    e[(row, offsets[dd] + j)] -= m as f64;
                }
            }
        }
        e[(constrained, 0)] = 1.0;
        b[constrained] = 1.0;

        let svd = e.clone().svd(true, true);
        let v_t = svd.v_t.as_ref().expect("requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let tol = smax * 1e-10 * (n.max(constrained + 1) as f64);
        let mut row_space_proj = DMatrix::zeros(n, n);
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > tol {
                let vk = v_t.row(k).transpose();
                row_space_proj += &vk * vk.transpose();
            }
        }
        let solution = svd.solve(&b, tol).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let residual = (&e * &solution - &b).norm();
        let null_projector = DMatrix::identity(n, n) - row_space_proj;
        Ok(DimensionSystem { offsets, solution, null_projector, residual, delta })
    }

    pub fn is_consistent(&self) -> bool {
        self.residual < 1e-7
    }

    /// Value of `Σ c·dim(v)` if the equations force it.
    pub fn functional(&self, terms: &[((usize, usize), f64)]) -> Option<f64> {
        let n = self.solution.len();
        let mut c = DVector::zeros(n);
        for &((d, i), w) in terms {
            c[self.offsets[d] + i] += w;
        }
        let free = (&self.null_projector * &c).norm();
        if free > DETERMINED_TOL * c.norm().max(1.0) {
            return None;
        }
        Some(c.dot(&self.solution))
    }

    pub fn dim(&self, depth: usize, index: usize) -> Option<f64> {
        self.functional(&[((depth, index), 1.0)])
    }
}

/// Dimensions forced by the eigen-equations, root normalized to 1.
///
/// Fails when `q + q⁻¹` is below the graph norm, when the system is
/// inconsistent, or when some forced dimension is not positive.
pub fn dimension_vector(g: &Bigraph, q: f64, mode: DimensionMode) -> Result<DimensionProfile> {
    let sys = DimensionSystem::new(g, q, mode)?;
    let norm = graph_norm(g);
    if sys.delta < norm - 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "q + 1/q = {} is below the graph norm {norm}",
            sys.delta
        )));
    }
    if !sys.is_consistent() {
        return Err(Error::InvalidArgument(format!("eigen-equations inconsistent at q = {q}")));
    }
    let mut dims = Vec::with_capacity(g.depth() + 1);
    for d in 0..=g.depth() {
        let mut level = Vec::with_capacity(g.vertex_count(d));
        for i in 0..g.vertex_count(d) {
            let v = sys.dim(d, i);
            if let Some(x) = v {
                if x <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "dimension of vertex ({d}, {}) forced to {x} at q = {q}",
                        i + 1
                    )));
                }
            }
            level.push(v);
        }
        dims.push(level);
    }
    Ok(DimensionProfile { q, delta: sys.delta, dims })
}

/// Condition a sampled value must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub enum ScreenCondition {
    Below(f64),
    Above(f64),
    /// Strictly between the bounds.
    Inside(f64, f64),
}

impl ScreenCondition {
    /// Positive when satisfied; the distance to the nearest violated bound.
    fn margin(&self, x: f64) -> f64 {
        match *self {
            ScreenCondition::Below(b) => b - x,
            ScreenCondition::Above(b) => x - b,
            ScreenCondition::Inside(lo, hi) => (x - lo).min(hi - x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ScreenResult {
    pub holds: bool,
    /// Sample nearest to violating the condition (or the first violating one).
    pub witness_q: f64,
    pub witness_value: Option<f64>,
    /// Where the condition first breaks, located by bisection.
    pub crossing: Option<f64>,
}

pub const SCREEN_SAMPLES: usize = 10_000;

/// Samples `f` over the open interval `(q_low, q_high)` and checks `cond`
/// at every sample, with bisection to locate the first violation.
pub fn screen<F>(f: F, q_low: f64, q_high: f64, cond: ScreenCondition) -> Result<ScreenResult>
where
    F: Fn(f64) -> Option<f64>,
{
    if !(q_low < q_high) {
        return Err(Error::InvalidArgument(format!("empty interval ({q_low}, {q_high})")));
    }
    let inset = (q_high - q_low) * 1e-9;
    let (a, b) = (q_low + inset, q_high - inset);
    let ok = |q: f64| f(q).map(|x| cond.margin(x) > 0.0).unwrap_or(false);

    let mut witness = (a, f(a));
    let mut worst = f64::INFINITY;
    let mut prev_q: Option<f64> = None;
    for i in 0..=SCREEN_SAMPLES {
        let q = a + (b - a) * (i as f64) / (SCREEN_SAMPLES as f64);
        let value = f(q);
        let margin = value.map(|x| cond.margin(x)).unwrap_or(f64::NEG_INFINITY);
        if margin <= 0.0 {
            let crossing = prev_q.map(|mut lo| {
                let mut hi = q;
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    if ok(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            });
            return Ok(ScreenResult { holds: false, witness_q: q, witness_value: value, crossing });
        }
        if margin < worst {
            worst = margin;
            witness = (q, value);
        }
        prev_q = Some(q);
    }
    Ok(ScreenResult { holds: true, witness_q: witness.0, witness_value: witness.1, crossing: None })
}

/// Screens a linear combination of dimensions over `(q_low, q_high)`.
pub fn dimension_screen(
    g: &Bigraph,
    mode: DimensionMode,
    terms: &[((usize, usize), f64)],
    q_low: f64,
    q_high: f64,
    cond: ScreenCondition,
) -> Result<ScreenResult> {
    screen(
        |q| DimensionSystem::new(g, q, mode).ok().and_then(|s| s.functional(terms)),
        q_low,
        q_high,
        cond,
    )
}

/// Largest real root of a real polynomial on `(lo, hi)`, by sign scan and bisection.
pub fn largest_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, samples: usize) -> Option<f64> {
    let step = (hi - lo) / samples as f64;
    let mut right = hi;
    let mut fr = f(right);
    for i in (0..samples).rev() {
        let left = lo + step * i as f64;
        let fl = f(left);
        if fl == 0.0 {
            return Some(left);
        }
        if fl.signum() != fr.signum() {
            let (mut a, mut b, fa) = (left, right, fl);
            while b - a > 1e-14 {
                let m = 0.5 * (a + b);
                if f(m).signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        right = left;
        fr = fl;
    }
    None
}
