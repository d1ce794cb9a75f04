mod common;

use bigraph_odometer::bigraph::{annular_multiplicities, annular_multiplicity, loop_count, Bigraph, InclusionMatrix};
use bigraph_odometer::fixtures;
use bigraph_odometer::spectral::{
    dimension_screen, dimension_vector, DimensionSystem, graph_norm, graph_norm_dense, graph_norm_power, index, largest_root,
    norm_below, q_from_delta, quantum_integer, screen, DimensionMode, ScreenCondition,
};
use bigraph_odometer::{parse_pair, BigraphWithDuals};
use common::graph_strategy;
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn pair_index(s: &str) -> (f64, f64) {
    let p = parse_pair(s).unwrap();
    (index(p.first().graph()), index(p.second().graph()))
}

#[test]
fn known_indices() {
    let cases = [
        (
            "bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1 bwd1v1v1v1p1v1x0p1x0duals1v1v1x2",
            (5.0 + 13f64.sqrt()) / 2.0,
        ),
        ("bwd1v1v1v1p1p1v1x0x0v1duals1v1v1x2x3v1 bwd1v1v1v1p1p1v1x0x0v1duals1v1v1x2x3v1", 3.0 + 3f64.sqrt()),
        ("bwd1v1v1p1p1v1x0x0p0x1x0duals1v1v2x1 bwd1v1v1p1p1v1x0x0p0x1x0duals1v1v2x1", (5.0 + 21f64.sqrt()) / 2.0),
        (
            "bwd1v1v1v1v1v1p1v1x0p0x1v1x0p0x1p0x1v1x0x0v1duals1v1v1v1x2v2x1x3v1 bwd1v1v1v1v1v1p1v0x1p0x1v0x1v1duals1v1v1v1x2v1",
            (5.0 + 17f64.sqrt()) / 2.0,
        ),
    ];
    for (s, want) in cases {
        let (a, b) = pair_index(s);
        assert!((a - want).abs() < TOL && (b - want).abs() < TOL, "{s}: {a} {b} vs {want}");
    }
}

#[test]
fn dynkin_norms() {
    // A_n has norm 2cos(pi/(n+1)); D_n-like graphs approach 2.
    for n in 1..12 {
        let want = 2.0 * (std::f64::consts::PI / (n as f64 + 2.0)).cos();
        assert!((graph_norm(&Bigraph::chain(n)) - want).abs() < TOL);
    }
    let d4 = Bigraph::new(vec![
        InclusionMatrix::new(vec![vec![1]]).unwrap(),
        InclusionMatrix::new(vec![vec![1], vec![1]]).unwrap(),
    ])
    .unwrap();
    assert!((graph_norm(&d4) - 3f64.sqrt()).abs() < TOL);
}

fn p4621(q: f64) -> f64 {
    let c = [(-10, 1.0), (-8, -1.0), (-6, -2.0), (-4, -3.0), (-2, -4.0), (0, -6.0), (2, -4.0), (4, -3.0), (6, -2.0), (8, -1.0), (10, 1.0)];
    c.iter().map(|&(e, k)| k * q.powi(e)).sum()
}

#[test]
fn largest_root_of_the_depth_ten_polynomial() {
    let r = largest_root(p4621, 1.0, 2.0, 10_000).unwrap();
    assert!((r - 1.61501).abs() < 1e-4, "{r}");
    assert!((p4621(golden()) - 1.0).abs() < 1e-9);
}

#[test]
fn translated_4621_exceeds_five() {
    let g = fixtures::pairs("weed_4621").remove(0).translated(2).unwrap();
    let i = index(g.first().graph());
    assert!((i - 5.0062).abs() < 1e-3, "{i}");
    assert!(!norm_below(g.first().graph(), 5f64.sqrt()));
}

#[test]
fn quantum_ratios_lie_strictly_between_cosines() {
    let c = |n: f64| 2.0 * (std::f64::consts::PI / n).cos();
    let r = screen(|q| Some(quantum_integer(4, q) / quantum_integer(3, q)), 1.59, golden(), ScreenCondition::Inside(c(5.0), c(6.0))).unwrap();
    assert!(r.holds);
    let r = screen(|q| Some(quantum_integer(3, q) / quantum_integer(2, q)), 1.56, golden(), ScreenCondition::Inside(c(6.0), c(7.0))).unwrap();
    assert!(r.holds);
    // The second ratio leaves the window below q = 1.56.
    let r = screen(|q| Some(quantum_integer(3, q) / quantum_integer(2, q)), 1.0001, golden(), ScreenCondition::Inside(c(6.0), c(7.0))).unwrap();
    assert!(!r.holds);
    assert!(r.witness_q < 1.568);
}

#[test]
fn univalent_dimensions_are_quantum_ratios() {
    let o2a_w2 = fixtures::pairs("weeds_o2a").remove(1);
    let e2_w2 = fixtures::pairs("weeds_e2").remove(1);
    for q in [1.595, 1.60, 1.61, 1.617] {
        let d = dimension_vector(o2a_w2.first().graph(), q, DimensionMode::Truncated).unwrap();
        let want = quantum_integer(4, q) / quantum_integer(3, q);
        assert!((d.dim(5, 1).unwrap() - want).abs() < 1e-9);
        let d = dimension_vector(e2_w2.first().graph(), q, DimensionMode::Truncated).unwrap();
        let want = quantum_integer(3, q) / quantum_integer(2, q);
        assert!((d.dim(3, 2).unwrap() - want).abs() < 1e-9);
    }
}

#[test]
fn depth_five_dimension_sum_matches_the_closed_form() {
    let w3 = fixtures::pairs("weeds_e2").remove(2);
    for q in [1.595f64, 1.60, 1.61, 1.617] {
        let closed = (1.0 - 3.0 * q.powi(4) - 5.0 * q.powi(6) - 3.0 * q.powi(8) + q.powi(12)) / (q.powi(5) + q.powi(7));
        // Only the sum is forced by the eigen-equations.
        let s = DimensionSystem::new(w3.first().graph(), q, DimensionMode::Truncated).unwrap();
        let sum = s.functional(&[((5, 0), 1.0), ((5, 1), 1.0)]).unwrap();
        assert!((sum - closed).abs() < 1e-8, "{q}: {sum} vs {closed}");
    }
    let g = w3.first().graph();
    let lo = q_from_delta(graph_norm(g));
    assert!((lo - 1.59438).abs() < 1e-5, "{lo}");
    let r = dimension_screen(g, DimensionMode::Truncated, &[((5, 0), 1.0), ((5, 1), 1.0)], lo, golden(), ScreenCondition::Below(2.0)).unwrap();
    assert!(r.holds);
}

#[test]
fn finite_graphs_have_perron_frobenius_dimensions() {
    let haagerup = parse_pair("bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1 bwd1v1v1v1p1v1x0p1x0duals1v1v1x2").unwrap();
    for g in [haagerup.first(), haagerup.second()] {
        let delta = graph_norm(g.graph());
        let d = dimension_vector(g.graph(), q_from_delta(delta), DimensionMode::Finite).unwrap();
        let adj = bigraph_odometer::spectral::adjacency_matrix(g.graph());
        let x: Vec<f64> = d.dims.iter().flatten().map(|v| v.unwrap()).collect();
        for (i, xi) in x.iter().enumerate() {
            assert!(*xi > 0.0);
            let s: f64 = (0..x.len()).map(|j| adj[(i, j)] * x[j]).sum();
            assert!((delta * xi - s).abs() < 1e-8);
        }
    }
}

#[test]
fn chains_have_no_annular_multiplicity() {
    for l in 1..10 {
        let a = annular_multiplicities(&Bigraph::chain(l), l).unwrap();
        assert_eq!(a[0], 1);
        assert!(a[1..].iter().all(|&x| x == 0), "A_{l}: {a:?}");
    }
}

#[test]
fn families_have_their_multiplicities() {
    for (name, want) in [("family_10", (1, 0)), ("family_11", (1, 1)), ("family_12", (1, 2))] {
        for p in fixtures::pairs(name) {
            let n = p.supertransitivity();
            for g in [p.first(), p.second()] {
                let got = (annular_multiplicity(g.graph(), n + 1).unwrap(), annular_multiplicity(g.graph(), n + 2).unwrap());
                assert_eq!(got, want, "{name}: {g}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_grows_with_edges(g in graph_strategy(4, 5), pick in any::<(u16, u16, bool)>()) {
        let before = graph_norm(g.graph());
        let d = 1 + pick.0 as usize % g.depth();
        let m = g.graph().matrix(d);
        let mut rows = m.rows().to_vec();
        if pick.2 {
            let i = pick.1 as usize % rows.len();
            let j = (pick.1 as usize / 7) % m.column_count();
            rows[i][j] += 1;
        } else {
            let mut r = vec![0; m.column_count()];
            let k = pick.1 as usize % r.len();
            r[k] = 1;
            rows.push(r);
            if d < g.depth() {
                // Keep later matrices valid by leaving the new vertex without children.
                let mut matrices = g.graph().matrices().to_vec();
                matrices[d - 1] = InclusionMatrix::new(rows).unwrap();
                let next = &matrices[d];
                let widened = next.rows().iter().map(|r| [r.clone(), vec![0]].concat()).collect();
                matrices[d] = InclusionMatrix::new(widened).unwrap();
                let h = Bigraph::new(matrices).unwrap();
                prop_assert!(graph_norm(&h) > before - 1e-12);
                return Ok(());
            }
        }
        let mut matrices = g.graph().matrices().to_vec();
        matrices[d - 1] = InclusionMatrix::new(rows).unwrap();
        let h = Bigraph::new(matrices).unwrap();
        prop_assert!(graph_norm(&h) > before - 1e-12);
    }

    #[test]
    fn norm_methods_agree(g in graph_strategy(4, 6)) {
        let a = graph_norm(g.graph());
        prop_assert!((a - graph_norm_dense(g.graph())).abs() < 1e-10);
        prop_assert!((a - graph_norm_power(g.graph())).abs() < 1e-7);
        prop_assert!(norm_below(g.graph(), a + 1e-7));
        prop_assert!(!norm_below(g.graph(), a - 1e-7));
    }

    #[test]
    fn annular_multiplicities_only_see_their_depth(g in graph_strategy(3, 6)) {
        let g: BigraphWithDuals = g;
        for n in 0..=g.depth() {
            let full = loop_count(g.graph(), n).unwrap();
            let cut = loop_count(&g.graph().truncated(n), n).unwrap();
            prop_assert_eq!(full, cut);
            prop_assert_eq!(annular_multiplicity(g.graph(), n).unwrap(), annular_multiplicity(&g.graph().truncated(n), n).unwrap());
        }
    }
}
