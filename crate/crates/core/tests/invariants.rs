use itertools::Itertools;
use permzero_core::cluster::{cluster_coefficient, ursell_phi};
use permzero_core::graph::{erdos_renyi, line_graph_knn, path, Graph, WeightVector};
use permzero_core::hardcore::{
    hardcore_exact_second_moment, hardcore_x1, hardcore_z, hardcore_z_poly, matching_z,
};
use permzero_core::interp::poly_from_matrix;
use permzero_core::matrix::{d1, d2, project_mixed, project_parallel, ComplexMatrix};
use permzero_core::montecarlo::{mc_estimate, mc_moment, Statistic};
use permzero_core::pair::{pair_activities, pair_z, second_moment_via_pair, PairActivities};
use permzero_core::permanent::permanent_ryser;
use permzero_core::poly::{log_coeffs, truncated_log};
use permzero_core::rescaled::RescaledExpansion;
use permzero_core::reweight::{exact_x1_moment, x1, x2, MomentParameters};
use permzero_core::roots::roots;
use permzero_core::{sample_matrix, Complex64, EntryDistribution, SeededStream};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cg() -> EntryDistribution {
    EntryDistribution::complex_gaussian(1.0)
}

fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
    sample_matrix(&cg(), n, SeededStream::new(seed, 0)).unwrap()
}

fn random_weights(len: usize, scale: f64, seed: u64) -> WeightVector {
    let mut rng = SeededStream::new(seed, 1).rng();
    WeightVector::new(cg().sample_vec(len, &mut rng).into_iter().map(|v| v * scale).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projections_idempotent_and_complementary(n in 1usize..=16, seed in any::<u64>()) {
        let w = random_matrix(n, seed);
        let par = project_parallel(&w);
        let mix = project_mixed(&w);
        prop_assert!(project_parallel(&par).max_abs_diff(&par) <= 1e-12);
        prop_assert!(project_mixed(&mix).max_abs_diff(&mix) <= 1e-12);
        prop_assert!(par.combine(c(1.0, 0.0), &mix, c(1.0, 0.0)).max_abs_diff(&w) <= 1e-14);
    }

    #[test]
    fn d1_is_first_coefficient(n in 1usize..=10, seed in any::<u64>()) {
        let w = random_matrix(n, seed);
        let g = poly_from_matrix(&w).unwrap();
        let diff = (g.get(1) - d1(&w)).norm();
        prop_assert!(diff <= 1e-12, "diff {:e}", diff);
    }

    #[test]
    fn row_scaling_is_linear(seed in any::<u64>(), row in 0usize..5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let w = random_matrix(5, seed);
        let s = c(re, im);
        let scaled = ComplexMatrix::from_fn(5, |i, j| if i == row { s * w[(i, j)] } else { w[(i, j)] });
        let base = permanent_ryser(&w).unwrap();
        let lhs = permanent_ryser(&scaled).unwrap();
        prop_assert!((lhs - s * base).norm() <= 1e-10 * (s * base).norm().max(1e-300));
    }

    #[test]
    fn disjoint_union_factorizes(s1 in any::<u64>(), s2 in any::<u64>(), k1 in 1usize..7, k2 in 1usize..7) {
        let g1 = erdos_renyi(k1, 0.5, SeededStream::new(s1, 0)).unwrap();
        let g2 = erdos_renyi(k2, 0.5, SeededStream::new(s2, 0)).unwrap();
        let w1 = random_weights(k1, 0.7, s1);
        let w2 = random_weights(k2, 0.7, s2);
        let mut all = w1.values().to_vec();
        all.extend_from_slice(w2.values());
        let joint = hardcore_z(&g1.disjoint_union(&g2), &WeightVector::new(all).unwrap()).unwrap();
        let prod = hardcore_z(&g1, &w1).unwrap() * hardcore_z(&g2, &w2).unwrap();
        prop_assert!((joint - prod).norm() <= 1e-12 * prod.norm().max(1.0));
    }

    #[test]
    fn rotation_moves_phase_into_z(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU, zr in 0.1f64..0.8) {
        let w = random_matrix(5, seed);
        let rot = Complex64::from_polar(1.0, theta);
        let z = c(zr, 0.0);
        let a = x1(&w.scale(rot), z).unwrap();
        let b = x1(&w, z * rot).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }
}

#[test]
fn log_series_reproduces_polynomial_inside_zero_free_disk() {
    for seed in 0..5 {
        let w = random_matrix(8, seed);
        let g = poly_from_matrix(&w).unwrap();
        let rs = roots(&g).unwrap();
        let r_min = rs.roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
        let a = log_coeffs(&g, 80).unwrap();
        let mut rng = SeededStream::new(seed, 7).rng();
        for _ in 0..10 {
            use rand::Rng;
            let z = Complex64::from_polar(rng.random_range(0.0..0.5) * r_min, rng.random_range(0.0..std::f64::consts::TAU));
            let approx = truncated_log(&a, z, 80).exp();
            let exact = g.eval(z);
            assert!((approx - exact).norm() <= 1e-8 * exact.norm(), "seed {seed}");
        }
    }
}

#[test]
fn root_product_reevaluates_polynomial() {
    use rand::Rng;
    for seed in 0..10 {
        let n = 3 + seed as usize % 10;
        let w = random_matrix(n, 100 + seed);
        let g = poly_from_matrix(&w).unwrap();
        let rs = roots(&g).unwrap();
        assert_eq!(rs.len(), g.effective_degree());
        let mut rng = SeededStream::new(seed, 3).rng();
        for _ in 0..5 {
            let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let prod = rs.roots.iter().fold(c(1.0, 0.0), |p, r| p * (1.0 - z / r));
            let target = g.eval(z) / g.get(0);
            assert!((prod - target).norm() <= 1e-6 * target.norm(), "seed {seed}");
        }
    }
}

#[test]
fn d2_variance_scales_as_four_nu_squared_over_n() {
    for nu in [1.0, 2.5] {
        let dist = EntryDistribution::complex_gaussian(nu);
        let n = 8;
        let est = mc_estimate(100_000, SeededStream::new(77, 0), |s| {
            Ok(c(d2(&sample_matrix(&dist, n, s)?)?.norm_sqr(), 0.0))
        })
        .unwrap();
        let target = 4.0 * nu * nu / n as f64;
        assert!(est.within(c(target, 0.0), 4.0), "nu {nu}: {} vs {target}", est.mean.re);
    }
}

#[test]
fn exact_moment_at_least_one_on_grid() {
    for n in 2..=20 {
        let mut t = 0.01;
        while t <= 0.9 * n as f64 {
            let v = exact_x1_moment(&MomentParameters::new(n, t, 1.0).unwrap()).unwrap();
            assert!(v >= 1.0 - 1e-12, "n {n}, t {t}: {v}");
            t += 0.01 * n as f64;
        }
    }
}

#[test]
fn exact_moment_excess_decreases_in_n() {
    let t = 0.36;
    let vals: Vec<f64> = [4, 8, 12, 16, 100]
        .iter()
        .map(|&n| exact_x1_moment(&MomentParameters::new(n, t, 1.0).unwrap()).unwrap())
        .collect();
    for (n, v) in [4, 8, 12, 16, 100].iter().zip(&vals) {
        assert!(v.ln().abs() <= 5.0 * t * t / *n as f64);
    }
    assert!(vals.windows(2).all(|p| p[1] - 1.0 < p[0] - 1.0), "{vals:?}");
}

#[test]
fn reweightings_vanish_exactly_with_the_permanent() {
    // W = J_2 gives P(z) = (1 + z)^2, an exact double zero at z = -1
    let w = ComplexMatrix::ones(2);
    assert_eq!(x1(&w, c(-1.0, 0.0)).unwrap().norm(), 0.0);
    assert_eq!(x2(&w, c(-1.0, 0.0)).unwrap().norm(), 0.0);
    let w = random_matrix(4, 9);
    for z in [c(0.3, 0.0), c(-1.2, 0.7), c(2.0, -2.0)] {
        let p = permanent_ryser(&w.shifted_by_ones(z)).unwrap() / 24.0;
        assert!(x1(&w, z).unwrap().norm() > 0.0 && p.norm() > 0.0);
        assert!((x1(&w, z).unwrap() / p).norm() > 0.0);
        assert!((x2(&w, z).unwrap() / p).norm() > 0.0);
    }
}

#[test]
fn mc_moment_is_reproducible() {
    let s = SeededStream::new(5, 0);
    let a = mc_moment(Statistic::X1Sq(c(0.4, 0.1)), &cg(), 4, 500, s).unwrap();
    let b = mc_moment(Statistic::X1Sq(c(0.4, 0.1)), &cg(), 4, 500, s).unwrap();
    assert_eq!(a.mean.re.to_bits(), b.mean.re.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
}

fn labelled_graphs(k: usize, max_edges: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    (0u32..1 << pairs.len())
        .filter(|m| m.count_ones() as usize <= max_edges)
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            Graph::from_edges(k, &edges).unwrap()
        })
        .collect()
}

#[test]
fn ursell_vanishes_on_disconnected_graphs() {
    let mut seen = 0;
    for k in 2..=6 {
        for h in labelled_graphs(k, 20) {
            if !h.is_connected() {
                assert_eq!(ursell_phi(&h).unwrap(), 0);
                seen += 1;
            }
        }
    }
    assert!(seen > 5_000);
}

/// Matching sum by direct edge-subset enumeration.
fn brute_matching(base: &Graph, w: &WeightVector) -> Complex64 {
    let edges = base.edges();
    let mut total = c(0.0, 0.0);
    for mask in 0u32..1 << edges.len() {
        let mut used = 0u64;
        let mut ok = true;
        let mut prod = c(1.0, 0.0);
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used >> u & 1 == 1 || used >> v & 1 == 1 {
                    ok = false;
                    break;
                }
                used |= 1 << u | 1 << v;
                prod *= w[i];
            }
        }
        if ok {
            total += prod;
        }
    }
    total
}

#[test]
fn matching_is_hardcore_on_line_graph() {
    let mut checked = 0;
    for k in 1..=5 {
        for (i, base) in labelled_graphs(k, 8).into_iter().enumerate() {
            let w = random_weights(base.edge_count(), 0.8, (k * 10_000 + i) as u64);
            let m = matching_z(&base, &w).unwrap();
            let h = hardcore_z(&base.line_graph(), &w).unwrap();
            let b = brute_matching(&base, &w);
            assert!((m - h).norm() <= 1e-12 * h.norm().max(1.0));
            assert!((m - b).norm() <= 1e-12 * b.norm().max(1.0));
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn permanent_coefficients_count_matchings() {
    // g_k = ((n-k)!/n!) * sum over k-matchings of K_{n,n} of prod W_e
    for n in 1..=5 {
        let w = random_matrix(n, 40 + n as u64);
        let g = poly_from_matrix(&w).unwrap();
        let sizes = hardcore_z_poly(&line_graph_knn(n), &WeightVector::new(w.entries().to_vec()).unwrap()).unwrap();
        let fact = |m: usize| (1..=m).map(|i| i as f64).product::<f64>();
        for k in 0..=n {
            let expect = sizes.get(k) * fact(n - k) / fact(n);
            assert!((g.get(k) - expect).norm() <= 1e-9, "n {n}, k {k}");
        }
    }
}

#[test]
fn left_only_pair_model_is_hardcore() {
    for seed in 0..10 {
        let g = erdos_renyi(8, 0.4, SeededStream::new(seed, 0)).unwrap();
        let al = c(0.3, -0.2);
        let a = PairActivities::new(al, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        let h = hardcore_z(&g, &WeightVector::uniform(8, al)).unwrap();
        assert!((pair_z(&g, &a).unwrap() - h).norm() <= 1e-12 * h.norm());
    }
}

#[test]
fn cluster_series_matches_to_fourth_order() {
    for seed in 0..10 {
        let g = erdos_renyi(6, 0.5, SeededStream::new(seed, 0)).unwrap();
        let w = random_weights(6, 1.0, seed);
        let a: Vec<Complex64> = (1..=3).map(|k| cluster_coefficient(&g, &w, k).unwrap()).collect();
        let lambda: f64 = 1e-2;
        let series = (lambda * a[0] + lambda.powi(2) * a[1] + lambda.powi(3) * a[2]).exp();
        let z = hardcore_z(&g, &w.scaled(c(lambda, 0.0))).unwrap();
        let scale = w.values().iter().map(|v| v.norm()).sum::<f64>().powi(4);
        assert!((z / series - 1.0).norm() <= 10.0 * lambda.powi(4) * scale.max(1.0), "seed {seed}");
    }
}

#[test]
fn hardcore_first_moment_is_one() {
    let g = path(5);
    let lambda = c(0.2, 0.0);
    let est = mc_estimate(100_000, SeededStream::new(11, 0), |s| {
        let mut rng = s.rng();
        let w = WeightVector::new(cg().sample_vec(5, &mut rng))?;
        hardcore_x1(&g, &w, lambda)
    })
    .unwrap();
    assert!(est.within(c(1.0, 0.0), 4.0), "{:?}", est.mean);
}

#[test]
fn single_vertex_second_moment() {
    let g = path(1);
    for t in [0.0, 0.04, 0.3] {
        let v = hardcore_exact_second_moment(&g, t, 30).unwrap().value;
        let mut oracle = 1.0;
        let mut fact = 1.0;
        for m in 1..60 {
            fact *= m as f64;
            oracle += t.powi(m) * ((m - 1) as f64).powi(2) / fact;
        }
        assert!((v - oracle).abs() <= 1e-12, "t {t}");
    }
}

#[test]
fn pair_matches_single_vertex_mc() {
    let lambda = c(0.3, 0.1);
    let closed = second_moment_via_pair(&path(1), &cg(), lambda).unwrap();
    let est = mc_estimate(400_000, SeededStream::new(13, 0), |s| {
        let mut rng = s.rng();
        let w = WeightVector::new(cg().sample_vec(1, &mut rng))?;
        Ok(c(hardcore_x1(&path(1), &w, lambda)?.norm_sqr(), 0.0))
    })
    .unwrap();
    assert!(est.within(c(closed, 0.0), 4.0), "{closed} vs {}", est.mean.re);
    let a = pair_activities(&cg(), c(0.0, 0.0)).unwrap();
    assert_eq!(a.a_b, c(0.0, 0.0));
}

#[test]
fn zero_matrix_expansion_is_exact_off_origin() {
    let w = ComplexMatrix::zeros(5);
    let e = RescaledExpansion::new(&w, 3).unwrap();
    for z in [c(1.0, 0.0), c(-0.3, 2.0), c(0.01, -0.01)] {
        assert!(e.evaluate(z, 0).unwrap().rel_error <= 1e-12);
    }
}
