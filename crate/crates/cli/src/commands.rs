//! The seven experiment commands.

use permzero_core::cluster::{
    cluster_coefficient, kp_bound, kp_check, log_hardcore_z, matching_cluster_bound_check, ursell_phi,
    spanning_tree_count,
};
use permzero_core::graph::{complete, cycle, erdos_renyi, path};
use permzero_core::hardcore::{
    hardcore_exact_second_moment_with_tolerance, hardcore_x1, hardcore_z, hardcore_z_poly, matching_z, TruncatedMoment,
};
use permzero_core::monomer_dimer::{catalan_weighted_count, monomer_dimer_x1, monomer_dimer_x2};
use permzero_core::montecarlo::{
    log_perm_lower_bound, log_perm_lower_check, mc_estimate, mc_moment, summarize, McEstimate, Statistic,
};
use permzero_core::pair::{pair_activities, pair_z, second_moment_via_pair, PairActivities};
use permzero_core::permanent::permanent_ryser;
use permzero_core::poly::log_coeffs;
use permzero_core::interp::poly_from_matrix;
use permzero_core::rescaled::{rescaled_permanent_poly, RescaledExpansion};
use permzero_core::reweight::{first_moment_formula, stability_bound, stability_exact, universal_x_moment};
use permzero_core::roots::roots;
use permzero_core::{
    sample_matrix, Complex64, DistributionKind, EntryDistribution, Error, Graph, SeededStream, WeightVector,
};
use rayon::prelude::*;

use crate::output::{format_float, Cell, RunResult, Table};
use crate::spec::{Command, ExperimentSpec};

pub type CmdResult = std::result::Result<RunResult, Error>;

/// Largest `n` for the heatmap.
pub const HEATMAP_MAX_N: usize = 16;
/// Largest `n` for the truncation grid.
pub const TRUNCATION_MAX_N: usize = 14;
/// Cells below this relative error count as reliably approximated.
pub const RELIABLE_REL_ERROR: f64 = 1e-2;
/// Tail tolerance for the exact hardcore second moment.
pub const HARDCORE_TAIL_TOLERANCE: f64 = 1e-10;
/// Truncation orders tried in turn for the exact hardcore second moment.
pub const HARDCORE_M_MAX: [u32; 6] = [12, 16, 20, 24, 32, 40];
/// Random instances drawn per structural hardcore check.
pub const SUITE_INSTANCES: u64 = 5;
/// Number of standard errors allowed in Monte Carlo comparisons.
pub const SE_MULTIPLIER: f64 = 4.0;

pub fn run(spec: &ExperimentSpec) -> CmdResult {
    match spec.command {
        Command::ZerosHeatmap => zeros_heatmap(spec),
        Command::TruncationGrid => truncation_grid(spec),
        Command::CoeffScaling => coeff_scaling(spec),
        Command::SecondMoment => second_moment(spec),
        Command::HardcoreSuite => hardcore_suite(spec),
        Command::Stability => stability(spec),
        Command::Anticoncentration => anticoncentration(spec),
    }
}

fn guard(what: &'static str, n: usize, limit: usize) -> Result<(), Error> {
    if n > limit {
        return Err(Error::DimensionExceedsGuard { what, n, limit });
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn f(v: f64) -> Cell {
    Cell::Float(v)
}

fn text(s: &str) -> Cell {
    Cell::Text(s.into())
}

fn result(spec: &ExperimentSpec, summary: Vec<(String, String)>, table: Table, sidecars: Vec<Table>) -> RunResult {
    let mut meta = spec.metadata();
    meta.extend(summary);
    RunResult {
        meta,
        table,
        sidecars,
    }
}

pub fn zeros_heatmap(spec: &ExperimentSpec) -> CmdResult {
    let n = spec.n;
    guard("zeros heatmap", n, HEATMAP_MAX_N)?;
    let w = sample_matrix(&spec.dist, n, SeededStream::new(spec.seed, 0))?;
    let root_n = (n as f64).sqrt();
    let points = spec.grid.points();
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|&z| permanent_ryser(&w.plus_constant(z / root_n)))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new("", &["re", "im", "log_mag", "status"]);
    for (z, v) in points.iter().zip(&values) {
        let (mag, status) = if v.norm() == 0.0 {
            (f64::NEG_INFINITY, "zero")
        } else if v.is_finite() {
            (v.norm().ln(), "ok")
        } else {
            (f64::NAN, "nonfinite")
        };
        table.push(vec![f(z.re), f(z.im), f(mag), text(status)]);
    }

    let poly = rescaled_permanent_poly(&w, 1.0)?;
    let rs = roots(&poly)?;
    let mut found = rs.roots.clone();
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = poly.max_abs_coeff();
    let mut root_table = Table::new("roots", &["re", "im", "residual"]);
    for r in &found {
        root_table.push(vec![f(r.re), f(r.im), f(poly.eval(*r).norm() / scale)]);
    }
    let max_re = found.iter().map(|r| r.re.abs()).fold(0.0, f64::max);
    let max_im = found.iter().map(|r| r.im.abs()).fold(0.0, f64::max);
    let summary = vec![
        ("root_count".into(), found.len().to_string()),
        ("root_max_abs_re".into(), format_float(max_re)),
        ("root_max_abs_im".into(), format_float(max_im)),
        ("root_backward_error".into(), format_float(rs.backward_error)),
    ];
    Ok(result(spec, summary, table, vec![root_table]))
}

pub fn truncation_grid(spec: &ExperimentSpec) -> CmdResult {
    let n = spec.n;
    guard("truncation grid", n, TRUNCATION_MAX_N)?;
    let w = sample_matrix(&spec.dist, n, SeededStream::new(spec.seed, 0))?;
    let max_degree = *spec.degrees.iter().max().expect("validated nonempty");
    let expansion = RescaledExpansion::new(&w, max_degree)?;
    let points = spec.grid.points();
    let exact: Vec<Complex64> = points
        .par_iter()
        .map(|&z| expansion.exact(z))
        .collect::<Result<_, _>>()?;

    let mut table = Table::new("", &["degree", "re", "im", "rel_error", "status"]);
    let mut summary_table = Table::new("summary", &["degree", "fraction_below"]);
    let mut summary = Vec::new();
    for &d in &spec.degrees {
        let mut reliable = 0usize;
        for (&z, &p) in points.iter().zip(&exact) {
            let (err, status) = if z.norm() == 0.0 {
                (f64::NAN, "origin")
            } else {
                match expansion.evaluate_with_exact(z, d, p) {
                    Ok(pt) => (pt.rel_error, "ok"),
                    Err(Error::ZeroPermanent) => (f64::NAN, "zero"),
                    Err(e) => return Err(e),
                }
            };
            if status == "ok" && err < RELIABLE_REL_ERROR {
                reliable += 1;
            }
            table.push(vec![Cell::Int(d as i64), f(z.re), f(z.im), f(err), text(status)]);
        }
        let fraction = reliable as f64 / points.len() as f64;
        summary_table.push(vec![Cell::Int(d as i64), f(fraction)]);
        summary.push((format!("fraction_below_degree_{d}"), format_float(fraction)));
    }
    Ok(result(spec, summary, table, vec![summary_table]))
}

/// Least-squares slope of `ln y` against `ln x`; NaN with fewer than two
/// usable points.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return f64::NAN;
    }
    sxy / sxx
}

/// Orders of log-coefficients reported by coeff-scaling.
pub const SCALING_ORDERS: [usize; 3] = [1, 2, 3];

pub fn coeff_scaling(spec: &ExperimentSpec) -> CmdResult {
    for &n in &spec.sizes {
        guard("coefficient scaling", n, 16)?;
    }
    let mut estimates = vec![Vec::new(); SCALING_ORDERS.len()];
    let mut dropped = Vec::new();
    for &n in &spec.sizes {
        // disjoint stream blocks per size
        let stream = SeededStream::new(spec.seed, (n as u64) << 32);
        let draws: Vec<Option<[f64; 3]>> = (0..spec.samples as u64)
            .into_par_iter()
            .map(|k| {
                let w = sample_matrix(&spec.dist, n, stream.substream(k))?;
                let g = match poly_from_matrix(&w) {
                    Ok(g) => g,
                    Err(Error::InterpolationConditioning { .. }) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let a = log_coeffs(&g, 3)?;
                Ok(Some([a.get(1).norm_sqr(), a.get(2).norm_sqr(), a.get(3).norm_sqr()]))
            })
            .collect::<Result<_, Error>>()?;
        let kept: Vec<[f64; 3]> = draws.iter().flatten().copied().collect();
        dropped.push((n, draws.len() - kept.len()));
        for (i, est) in estimates.iter_mut().enumerate() {
            let vals: Vec<Complex64> = kept.iter().map(|v| c(v[i], 0.0)).collect();
            est.push(summarize(&vals, spec.seed)?);
        }
    }
    let mut table = Table::new("", &["k", "n", "estimate", "se"]);
    let mut summary = Vec::new();
    let xs: Vec<f64> = spec.sizes.iter().map(|&n| n as f64).collect();
    for (i, &k) in SCALING_ORDERS.iter().enumerate() {
        for (j, &n) in spec.sizes.iter().enumerate() {
            let e = &estimates[i][j];
            table.push(vec![Cell::Int(k as i64), Cell::Int(n as i64), f(e.mean.re), f(e.std_error)]);
        }
        let ys: Vec<f64> = estimates[i].iter().map(|e| e.mean.re).collect();
        summary.push((format!("slope_k{k}"), format_float(log_log_slope(&xs, &ys))));
    }
    for (n, d) in dropped {
        summary.push((format!("dropped_n{n}"), d.to_string()));
    }
    Ok(result(spec, summary, table, vec![]))
}

struct Suite {
    table: Table,
}

impl Suite {
    fn new() -> Self {
        Self {
            table: Table::new("", &["check_id", "value_a", "value_b", "tolerance", "pass"]),
        }
    }

    fn row(&mut self, id: &str, a: f64, b: f64, tol: f64, pass: bool) {
        self.table.push(vec![text(id), f(a), f(b), f(tol), Cell::Bool(pass)]);
    }

    /// `|a - b| <= tol`.
    fn close(&mut self, id: &str, a: f64, b: f64, tol: f64) {
        self.row(id, a, b, tol, (a - b).abs() <= tol);
    }

    /// Closed form `a` against a Monte Carlo estimate.
    fn mc(&mut self, id: &str, closed: Complex64, est: &McEstimate) {
        let tol = SE_MULTIPLIER * est.std_error;
        self.row(id, closed.re, est.mean.re, tol, (closed - est.mean).norm() <= tol);
    }
}

fn require_standard_gaussian(spec: &ExperimentSpec) -> Result<(), Error> {
    if spec.dist.kind() != DistributionKind::ComplexGaussian || spec.dist.variance() != 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{} needs --dist complex-gaussian --variance 1",
            spec.command.name()
        )));
    }
    Ok(())
}

pub fn second_moment(spec: &ExperimentSpec) -> CmdResult {
    let (n, z, dist) = (spec.n, spec.z, &spec.dist);
    let stream = SeededStream::new(spec.seed, 0);
    let mut s = Suite::new();

    let closed = universal_x_moment(dist, n, z)?;
    let x1_sq = mc_moment(Statistic::X1Sq(z), dist, n, spec.samples, stream)?;
    s.mc("x1_sq_closed_form_vs_mc", c(closed, 0.0), &x1_sq);
    s.row("x1_sq_closed_form_at_least_one", closed, 1.0, 0.0, closed >= 1.0);

    let first = first_moment_formula(dist, n, z)?;
    let x1_mean = mc_moment(Statistic::X1(z), dist, n, spec.samples, stream)?;
    s.mc("x1_mean_first_moment_vs_mc", first, &x1_mean);

    if dist.kind() == DistributionKind::ComplexGaussian {
        // same stream, so the same matrices feed both estimators
        let x2_sq = mc_moment(Statistic::X2Sq(z), dist, n, spec.samples, stream)?;
        let d2 = (x2_sq.mean.re - 1.0).abs();
        let d1 = (x1_sq.mean.re - 1.0).abs();
        s.row("x2_sq_closer_to_one_than_x1_sq", d2, d1, 0.0, d2 < d1);
        // the gain must exceed the combined Monte Carlo error of both means
        let budget = SE_MULTIPLIER * (x1_sq.std_error + x2_sq.std_error);
        s.row("x2_sq_gain_exceeds_mc_error", d1 - d2, 0.0, budget, d1 - d2 > budget);
    }
    let summary = vec![
        ("x1_sq_mc_se".into(), format_float(x1_sq.std_error)),
        ("x1_mean_mc_se".into(), format_float(x1_mean.std_error)),
    ];
    Ok(result(spec, summary, s.table, vec![]))
}

fn small_weights(dist: &EntryDistribution, len: usize, scale: f64, stream: SeededStream) -> Result<WeightVector, Error> {
    let mut rng = stream.rng();
    WeightVector::new(dist.sample_vec(len, &mut rng).into_iter().map(|v| v * scale).collect())
}

/// Connected graphs on `k` labelled vertices.
fn connected_graphs(k: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::from_edges(k, &edges).expect("simple");
            g.is_connected().then_some(g)
        })
        .collect()
}

/// Smallest order in [`HARDCORE_M_MAX`] whose tail bound meets the tolerance.
fn exact_hardcore_moment(g: &Graph, t: f64) -> Result<TruncatedMoment, Error> {
    let mut last = None;
    for m in HARDCORE_M_MAX {
        match hardcore_exact_second_moment_with_tolerance(g, t, m, HARDCORE_TAIL_TOLERANCE) {
            Err(err @ Error::TailTooLarge { .. }) => last = Some(err),
            other => return other,
        }
    }
    Err(last.expect("at least one order tried"))
}

pub fn hardcore_suite(spec: &ExperimentSpec) -> CmdResult {
    let lambda = spec.z;
    let mut s = Suite::new();
    let one = c(1.0, 0.0);

    // partition-function basics
    let zc = hardcore_z(&cycle(6), &WeightVector::zeros(6))?;
    s.close("hardcore_zero_weights_is_one", zc.re, 1.0, 1e-15);
    let k22 = Graph::from_edges(4, &[(0, 2), (0, 3), (1, 2), (1, 3)])?;
    let mz = matching_z(&k22, &WeightVector::uniform(4, one))?;
    s.close("matching_k22_unit_weights", mz.re, 7.0, 1e-12);

    // Ursell function
    for m in 1..=6usize {
        let phi = ursell_phi(&complete(m))? as f64;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        let expect = sign * (1..m).map(|i| i as f64).product::<f64>();
        s.close(&format!("ursell_complete_{m}"), phi, expect, 0.0);
    }
    let mut violations = 0usize;
    let mut checked = 0usize;
    for k in 1..=5 {
        for h in connected_graphs(k) {
            checked += 1;
            if ursell_phi(&h)?.unsigned_abs() > spanning_tree_count(&h)? {
                violations += 1;
            }
        }
    }
    s.row("ursell_spanning_tree_bound", violations as f64, checked as f64, 0.0, violations == 0);
    let disconnected = Graph::from_edges(4, &[(0, 1), (2, 3)])?;
    s.close("ursell_disconnected_is_zero", ursell_phi(&disconnected)? as f64, 0.0, 0.0);

    // cluster expansion on random graphs
    let mut worst_a1 = 0.0f64;
    let mut worst_series = 0.0f64;
    for i in 0..SUITE_INSTANCES {
        let g = erdos_renyi(7, 0.4, SeededStream::new(spec.seed, 100 + i))?;
        let w = small_weights(&spec.dist, 7, 1.0, SeededStream::new(spec.seed, 200 + i))?;
        let a1 = cluster_coefficient(&g, &w, 1)?;
        worst_a1 = worst_a1.max((a1 - w.sum()).norm());
        let series = log_coeffs(&hardcore_z_poly(&g, &w)?, 3)?;
        for k in 1..=3 {
            let a = cluster_coefficient(&g, &w, k)?;
            let q = series.get(k);
            worst_series = worst_series.max((a - q).norm() / q.norm().max(1.0));
        }
    }
    s.close("cluster_a1_is_weight_sum", worst_a1, 0.0, 1e-12);
    s.close("cluster_terms_vs_log_series", worst_series, 0.0, 1e-9);

    // KP and matching cluster bounds
    for i in 0..SUITE_INSTANCES {
        let g = erdos_renyi(8, 0.3, SeededStream::new(spec.seed, 300 + i))?;
        let w = small_weights(&spec.dist, 8, 0.02, SeededStream::new(spec.seed, 400 + i))?;
        let a = vec![0.2; 8];
        if kp_check(&g, &w, &a)? {
            let lhs = log_hardcore_z(&g, &w)?.norm();
            let rhs = kp_bound(&g, &a)?;
            s.row(&format!("kp_bound_{i}"), lhs, rhs, 0.0, lhs <= rhs);
        }
        let base = erdos_renyi(6, 0.5, SeededStream::new(spec.seed, 500 + i))?;
        let ew = small_weights(&spec.dist, base.edge_count(), 0.01, SeededStream::new(spec.seed, 600 + i))?;
        let mc = matching_cluster_bound_check(&base, &ew)?;
        s.row(&format!("matching_cluster_bound_{i}"), mc.lhs, mc.rhs, 0.0, mc.pass);
    }

    // pair model
    let acts = PairActivities::new(c(0.2, 0.1), c(0.2, -0.1), c(0.05, 0.0))?;
    let single = pair_z(&path(1), &acts)?;
    s.close(
        "pair_single_vertex",
        (single - (one + acts.a_l + acts.a_r + acts.a_b)).norm(),
        0.0,
        1e-15,
    );
    let edge = pair_z(&path(2), &acts)?;
    let expect = one + 2.0 * (acts.a_l + acts.a_r + acts.a_b) + 2.0 * acts.a_l * acts.a_r;
    s.close("pair_edge", (edge - expect).norm(), 0.0, 1e-15);
    let empty = pair_z(&Graph::empty(4), &acts)?;
    s.close("pair_edgeless_factorizes", (empty - single.powi(4)).norm(), 0.0, 1e-14);

    let p4 = path(4);
    let std = EntryDistribution::complex_gaussian(1.0);
    let exact = exact_hardcore_moment(&p4, lambda.norm_sqr())?;
    let hc_mc = mc_estimate(spec.samples, SeededStream::new(spec.seed, 1 << 40), |st| {
        let mut rng = st.rng();
        let w = WeightVector::new(std.sample_vec(4, &mut rng))?;
        Ok(c(hardcore_x1(&p4, &w, lambda)?.norm_sqr(), 0.0))
    })?;
    s.mc("hardcore_exact_second_moment_vs_mc", c(exact.value, 0.0), &hc_mc);
    let via_pair = second_moment_via_pair(&p4, &std, lambda)?;
    s.close("pair_matches_exact_sum", via_pair, exact.value, 1e-9 * exact.value);

    let pair_closed = second_moment_via_pair(&p4, &spec.dist, lambda)?;
    let pair_mc = mc_estimate(spec.samples, SeededStream::new(spec.seed, 2 << 40), |st| {
        let mut rng = st.rng();
        let w = WeightVector::new(spec.dist.sample_vec(4, &mut rng))?;
        Ok(c(hardcore_x1(&p4, &w, lambda)?.norm_sqr(), 0.0))
    })?;
    s.mc("pair_second_moment_vs_mc", c(pair_closed, 0.0), &pair_mc);
    let acts = pair_activities(&spec.dist, lambda)?;

    // monomer-dimer reweightings on shared matrices, n |z|^2 = 0.1
    let md_n = 3;
    let md_z = c((0.1 / md_n as f64).sqrt(), 0.0);
    let md_stream = SeededStream::new(spec.seed, 3 << 40);
    let md1 = mc_estimate(spec.samples, md_stream, |st| {
        Ok(c(monomer_dimer_x1(&sample_matrix(&std, md_n, st)?, md_z)?.norm_sqr(), 0.0))
    })?;
    let md2 = mc_estimate(spec.samples, md_stream, |st| {
        Ok(c(monomer_dimer_x2(&sample_matrix(&std, md_n, st)?, md_z)?.norm_sqr(), 0.0))
    })?;
    let (e1, e2) = ((md1.mean.re - 1.0).abs(), (md2.mean.re - 1.0).abs());
    s.row("monomer_dimer_second_order_closer", e2, e1, 0.0, e2 < e1);

    for m in 1..=3 {
        for n in [2, 3] {
            let cc = catalan_weighted_count(n, m)?;
            s.row(&format!("catalan_m{m}_n{n}"), cc.lhs as f64, cc.rhs as f64, 0.0, cc.lhs <= cc.rhs);
        }
    }

    let summary = vec![
        ("lambda".into(), format!("{},{}", lambda.re, lambda.im)),
        ("hardcore_tail_bound".into(), format_float(exact.tail_bound)),
        ("pair_a_l".into(), format!("{},{}", acts.a_l.re, acts.a_l.im)),
        ("pair_a_b".into(), format_float(acts.a_b.re)),
    ];
    Ok(result(spec, summary, s.table, vec![]))
}

pub fn stability(spec: &ExperimentSpec) -> CmdResult {
    require_standard_gaussian(spec)?;
    let n = spec.n;
    let mu = c(spec.c / (n as f64).sqrt(), 0.0);
    let exact = stability_exact(n, mu)?;
    let bound = stability_bound(n, spec.c)?;
    let est = mc_moment(Statistic::DeltaSq(mu), &spec.dist, n, spec.samples, SeededStream::new(spec.seed, 0))?;
    let mut s = Suite::new();
    s.row("exact_at_most_bound", exact, bound, 0.0, exact <= bound);
    s.mc("exact_vs_mc", c(exact, 0.0), &est);
    let summary = vec![("mu".into(), format_float(mu.re))];
    Ok(result(spec, summary, s.table, vec![]))
}

pub fn anticoncentration(spec: &ExperimentSpec) -> CmdResult {
    require_standard_gaussian(spec)?;
    let n = spec.n;
    let est = log_perm_lower_check(n, spec.samples, SeededStream::new(spec.seed, 0))?;
    let lower = log_perm_lower_bound(n);
    let upper = (1..=n).map(|i| (i as f64).ln()).sum::<f64>();
    let tol = SE_MULTIPLIER * est.std_error;
    let mut s = Suite::new();
    s.row("lower_bound", est.mean.re, lower, tol, est.mean.re >= lower - tol);
    // Jensen: E log|per|^2 <= log E|per|^2 = log n!
    s.row("jensen_upper_bound", est.mean.re, upper, tol, est.mean.re <= upper + tol);
    let summary = vec![("redrawn".into(), est.redrawn.to_string())];
    Ok(result(spec, summary, s.table, vec![]))
}
