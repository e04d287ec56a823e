//! Reproducible verification suites. Each suite runs named checks at pinned
//! tolerances and renders one JSON line per check plus a summary line; the
//! acceptance test target drives the same functions.

use anyhow::{bail, Result};
use num_complex::Complex64 as Cplx;
use serde_json::json;

use plurigreen::bounds::{self, BoundInterval};
use plurigreen::compactify::{invariance_test, norming_form, single_linkage};
use plurigreen::disk;
use plurigreen::geometry::{
    deterministic_directions, ComplexPoint, Direction, DomainSpec, MapKind, SublevelParams, LN_2,
};
use plurigreen::hyperconvex::{
    classify_pole, continuity_scan, ratio_test, ContinuityVerdict, EngineSource, PoleClass,
};
use plurigreen::jensen::{lelong_jensen_residual, SmoothField};
use plurigreen::metrics::{
    azukawa, bergman_constants, sigma_estimates, suita_check, HermitianMetric,
};
use plurigreen::optim::restart_rng;
use plurigreen::SearchBudget;

pub const SUITES: &[&str] = &[
    "chain",
    "monotone",
    "pole",
    "ratio",
    "azukawa",
    "sigma",
    "suita",
    "jensen",
    "discontinuity",
    "compactify",
];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let line = json!({
                "suite": self.suite,
                "check": c.name,
                "pass": c.pass,
                "detail": c.detail,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let summary = json!({
            "suite": self.suite,
            "total": self.checks.len(),
            "failed": failed,
            "pass": failed == 0,
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

pub fn run_suite(name: &str, budget: &SearchBudget) -> Result<SuiteResult> {
    let checks = match name {
        "chain" => chain_suite(budget),
        "monotone" => monotone_suite(budget),
        "pole" => pole_suite(budget),
        "ratio" => ratio_suite(budget),
        "azukawa" => azukawa_suite(budget),
        "sigma" => sigma_suite(budget),
        "suita" => suita_suite(budget),
        "jensen" => jensen_suite(budget),
        "discontinuity" => discontinuity_suite(budget),
        "compactify" => compactify_suite(budget),
        other => bail!("unknown suite '{other}'"),
    }?;
    Ok(SuiteResult { suite: name.to_string(), checks })
}

fn fmt_interval(b: &BoundInterval) -> String {
    format!("[{:.6}, {:.6}] lo={} hi={}", b.lo, b.hi, b.lo_witness, b.hi_witness)
}

/// Inequality chain c ≤ g ≤ k on the bidisk, 100 seeded pairs, slack ≥ −1e−9.
fn chain_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let dom = DomainSpec::unit_bidisk();
    let mut rng = restart_rng(budget.seed, 101);
    let pts = dom.sample_interior(&mut rng, 200);
    let mut checks = Vec::new();
    let engine_budget = SearchBudget { restarts: 2, simplex_iters: 150, ..budget.clone() };
    let mut feasible_near = 0usize;
    let mut total_near = 0usize;
    for (i, pair) in pts.chunks(2).take(100).enumerate() {
        let (z, w) = (&pair[0], &pair[1]);
        if z.dist(w) < 1e-9 {
            continue;
        }
        // pseudo-hyperbolic separation: degree-6 disks cannot reach hits at
        // modulus ≈ 1, so feasibility is only demanded in the reachable range
        let rho = (0..2)
            .map(|i| plurigreen::geometry::moebius(w.coord(i), z.coord(i)).norm())
            .fold(0.0f64, f64::max);
        let cara = bounds::caratheodory_bound(&dom, z, w, budget)?;
        let g = bounds::green_interval(&dom, z, w, &SearchBudget::no_engine())?;
        // an infeasible search is the documented +∞ sentinel, not an error
        let k_finite;
        let k_hi = match disk::kobayashi_bound(&dom, z, w, &engine_budget) {
            Ok(k) => {
                k_finite = true;
                k.hi
            }
            Err(plurigreen::Error::Infeasible(_)) => {
                k_finite = false;
                f64::INFINITY
            }
            Err(e) => return Err(e.into()),
        };
        if rho <= 0.9 {
            total_near += 1;
            if k_finite {
                feasible_near += 1;
            }
        }
        let ok = cara.lo <= g.lo + 1e-9 && g.lo <= g.hi + 1e-9 && g.hi <= k_hi + 1e-9;
        checks.push(Check::new(
            format!("pair_{i:03}"),
            ok,
            format!("c={:.6} g={} k={:.6}", cara.lo, fmt_interval(&g), k_hi),
        ));
    }
    checks.push(Check::new(
        "kobayashi_feasibility",
        feasible_near * 10 >= total_near * 9,
        format!("{feasible_near}/{total_near} pairs with separation ≤ 0.9 established a finite bound"),
    ));
    Ok(checks)
}

/// Ball closed form (50 z's) and domain monotonicity (200 pairs).
fn monotone_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ball = DomainSpec::unit_ball(2);
    let origin = ComplexPoint::origin(2);
    let mut rng = restart_rng(budget.seed, 103);
    let mut accepted = 0usize;
    while accepted < 50 {
        let pts = ball.sample_interior(&mut rng, 4);
        let Some(z) = pts.iter().find(|z| (0.1..=0.9).contains(&z.norm())) else {
            continue;
        };
        let b = bounds::green_interval(&ball, z, &origin, budget)?;
        let target = z.norm().ln();
        let ok = b.contains_tol(target, 1e-12) && b.width() <= 0.05;
        checks.push(Check::new(
            format!("ball_closed_form_{accepted:02}"),
            ok,
            format!("target={target:.6} got={}", fmt_interval(&b)),
        ));
        accepted += 1;
    }

    let small = DomainSpec::Ball { center: origin, radius: 0.5 };
    let mut rng = restart_rng(budget.seed, 104);
    let pts = small.sample_interior(&mut rng, 400);
    let mut worst_gap = f64::INFINITY;
    let mut pairs = 0usize;
    let mut exact_ok = true;
    let mut interval_ok = true;
    for pair in pts.chunks(2).take(200) {
        let (z, w) = (&pair[0], &pair[1]);
        if z.dist(w) < 1e-9 {
            continue;
        }
        pairs += 1;
        let gs = bounds::closed_form_green(&small, z, w).unwrap();
        let gb = bounds::closed_form_green(&ball, z, w).unwrap();
        exact_ok &= gs >= gb;
        worst_gap = worst_gap.min(gs - gb);
        let is = bounds::green_interval(&small, z, w, &SearchBudget::no_engine())?;
        let ib = bounds::green_interval(&ball, z, w, &SearchBudget::no_engine())?;
        interval_ok &= is.lo >= ib.lo - 1e-9;
    }
    checks.push(Check::new(
        "monotonicity_closed_form",
        exact_ok,
        format!("{pairs} pairs, min(g_small − g_big) = {worst_gap:.3e}"),
    ));
    checks.push(Check::new(
        "monotonicity_intervals",
        interval_ok,
        format!("{pairs} pairs, small.lo ≥ big.lo − 1e−9"),
    ));
    Ok(checks)
}

/// Strict poles on ball/polydisk/sublevel; ball constants within 0.02.
fn pole_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    let cases: [(&str, DomainSpec); 3] = [
        ("ball", DomainSpec::unit_ball(2)),
        ("polydisk", DomainSpec::unit_bidisk()),
        ("sublevel", DomainSpec::SublevelDcg(SublevelParams::default_instance())),
    ];
    for (name, dom) in cases {
        let src = EngineSource { domain: &dom, cfg: cfg.clone() };
        let fit = classify_pole(&src, &dom, &ComplexPoint::origin(2), &cfg, 0.5)?;
        let strict = fit.class == PoleClass::Strict;
        let constants_ok = if name == "ball" {
            fit.c1.abs() <= 0.02 && fit.c2.abs() <= 0.02
        } else {
            true
        };
        checks.push(Check::new(
            format!("pole_{name}"),
            strict && constants_ok,
            format!("class={:?} c1={:.4} c2={:.4}", fit.class, fit.c1, fit.c2),
        ));
    }
    Ok(checks)
}

/// Ratio lemma on the ball: δ ≥ 0.01 at ε = 0.1 with excluded radius 0.3.
fn ratio_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let dom = DomainSpec::unit_ball(2);
    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    let rep = ratio_test(&dom, &ComplexPoint::origin(2), 0.3, 0.1, &cfg)?;
    let delta = rep.delta.unwrap_or(0.0);
    Ok(vec![Check::new(
        "ratio_ball",
        delta >= 0.01,
        format!("delta={delta} deviation={:.4}", rep.deviation),
    )])
}

/// Azukawa on the ball (16 directions) and Royden ≥ Azukawa on ball+bidisk.
fn azukawa_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ball = DomainSpec::unit_ball(2);
    let origin = ComplexPoint::origin(2);
    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    for (i, v) in deterministic_directions(2, 16).into_iter().enumerate() {
        let a = azukawa(&ball, &Direction::new(origin, v)?, &cfg)?;
        let ok = a.hi - a.lo <= 0.1 && a.lo <= 1e-9 && -1e-9 <= a.hi;
        checks.push(Check::new(
            format!("azukawa_ball_{i:02}"),
            ok,
            format!("[{:.6}, {:.6}]", a.lo, a.hi),
        ));
    }

    let royden_budget = SearchBudget { restarts: 2, simplex_iters: 150, ..budget.clone() };
    for (tag, dom) in [("ball", ball.clone()), ("bidisk", DomainSpec::unit_bidisk())] {
        let mut rng = restart_rng(budget.seed, 105);
        let ws = dom.sample_interior(&mut rng, 16);
        let dirs = deterministic_directions(2, 16);
        for (i, (w, v)) in ws.iter().zip(dirs.iter().cycle()).take(16).enumerate() {
            let dir = Direction::new(*w, *v)?;
            let a = azukawa(&dom, &dir, &cfg)?;
            let r = disk::royden_bound(&dom, &dir, &royden_budget)?;
            let ok = r.hi >= a.hi - 0.02;
            checks.push(Check::new(
                format!("royden_vs_azukawa_{tag}_{i:02}"),
                ok,
                format!("R_hi={:.6} A_hi={:.6}", r.hi, a.hi),
            ));
        }
    }
    Ok(checks)
}

/// Bergman σ constants, closed form and numerical, at m = 2.
fn sigma_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let ball = DomainSpec::unit_ball(2);
    let poly = DomainSpec::unit_bidisk();
    let origin = ComplexPoint::origin(2);
    let cb = bergman_constants(&ball)?;
    let cp = bergman_constants(&poly)?;
    let sqrt3 = 3.0f64.sqrt();
    let sqrt2 = 2.0f64.sqrt();
    checks.push(Check::new(
        "bergman_ball_closed_form",
        (cb.sigma_s + sqrt3.ln()).abs() < 1e-14 && (cb.sigma_i + sqrt3.ln()).abs() < 1e-14,
        format!("sigma = {:.12}", cb.sigma_s),
    ));
    checks.push(Check::new(
        "bergman_polydisk_closed_form",
        (cp.sigma_s + sqrt2.ln()).abs() < 1e-14 && (cp.sigma_i + 2.0f64.ln()).abs() < 1e-14,
        format!("sigma_s = {:.12} sigma_i = {:.12}", cp.sigma_s, cp.sigma_i),
    ));

    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    let sb = sigma_estimates(&ball, &origin, HermitianMetric::BergmanBall { m: 2 }, &cfg)?;
    checks.push(Check::new(
        "sigma_ball_numeric",
        (sb.s_hi - cb.sigma_s).abs() <= 0.1 && (sb.i_lo - cb.sigma_i).abs() <= 0.1,
        format!("s∈[{:.4},{:.4}] i∈[{:.4},{:.4}] dirs={}", sb.s_lo, sb.s_hi, sb.i_lo, sb.i_hi, sb.directions),
    ));
    let sp = sigma_estimates(&poly, &origin, HermitianMetric::BergmanPolydisk { m: 2 }, &cfg)?;
    checks.push(Check::new(
        "sigma_polydisk_numeric",
        (sp.s_hi - cp.sigma_s).abs() <= 0.1 && (sp.i_lo - cp.sigma_i).abs() <= 0.1,
        format!("s∈[{:.4},{:.4}] i∈[{:.4},{:.4}]", sp.s_lo, sp.s_hi, sp.i_lo, sp.i_hi),
    ));
    Ok(checks)
}

/// Suita with near-equality on the disk at w ∈ {0, 0.3, 0.6}.
fn suita_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    let mut checks = Vec::new();
    for &x in &[0.0, 0.3, 0.6] {
        let rep = suita_check(Cplx::new(x, 0.0), 1.0, 0.05, &cfg)?;
        let ok = rep.holds && (rep.lhs - rep.rhs).abs() <= 0.05;
        checks.push(Check::new(
            format!("suita_w_{x}"),
            ok,
            format!("lhs={:.6} rhs={:.6}", rep.lhs, rep.rhs),
        ));
    }
    Ok(checks)
}

/// Lelong–Jensen residuals ≤ 1e−3 on the disk.
fn jensen_suite(_budget: &SearchBudget) -> Result<Vec<Check>> {
    let disk_dom = DomainSpec::unit_disk();
    let mut checks = Vec::new();
    for &x in &[0.0, 0.5] {
        let w = ComplexPoint::one(Cplx::new(x, 0.0));
        for (name, f) in [
            ("re_z", SmoothField::ReCoord(0)),
            ("abs_sq", SmoothField::NormSq),
            ("abs_quad", SmoothField::NormQuad),
        ] {
            let r = lelong_jensen_residual(&disk_dom, f, &w, 128)?;
            checks.push(Check::new(
                format!("jensen_{name}_w{x}"),
                r <= 1e-3,
                format!("residual={r:.3e}"),
            ));
        }
    }
    Ok(checks)
}

/// The designed discontinuity on the sublevel model.
fn discontinuity_suite(budget: &SearchBudget) -> Result<Vec<Check>> {
    let params = SublevelParams::default_instance();
    let dom = DomainSpec::SublevelDcg(params.clone());
    let origin = ComplexPoint::origin(2);
    let half = ComplexPoint::two(Cplx::new(0.5, 0.0), Cplx::ZERO);
    let mut checks = Vec::new();

    let lo = bounds::psh_lower_bound(&dom, &half, &origin)?;
    checks.push(Check::new(
        "psh_lower_bound_at_half",
        lo.lo >= -1.5 * LN_2 - 1e-12,
        format!("lo={:.12} target={:.12}", lo.lo, -1.5 * LN_2),
    ));

    let j = params.c().len() - 1;
    let cj = params.c()[j];
    let zj = ComplexPoint::two(Cplx::new(0.5, 0.0), Cplx::new(cj / 2.0, 0.0));
    let hi = bounds::green_interval(&dom, &zj, &origin, &SearchBudget::no_engine())?;
    checks.push(Check::new(
        "pushforward_upper_bound_tail",
        hi.hi <= -2.0 * LN_2 + 0.1,
        format!("hi={:.6} target≤{:.6}", hi.hi, -2.0 * LN_2 + 0.1),
    ));

    let cfg = SearchBudget::no_engine().with_seed(budget.seed);
    let src = EngineSource { domain: &dom, cfg };
    let mut path: Vec<(ComplexPoint, ComplexPoint)> = params
        .c()
        .iter()
        .skip(2)
        .map(|&c| (ComplexPoint::two(Cplx::new(0.5, 0.0), Cplx::new(c / 2.0, 0.0)), origin))
        .collect();
    path.push((half, origin));
    let rep = continuity_scan(&src, &path)?;
    checks.push(Check::new(
        "continuity_scan_witness",
        rep.verdict == ContinuityVerdict::DiscontinuityWitness,
        format!("verdict={:?} gap={:.6}", rep.verdict, rep.gap),
    ));
    Ok(checks)
}

/// Boundary clusters, Cauchy tails and Möbius invariance on the disk.
fn compactify_suite(_budget: &SearchBudget) -> Result<Vec<Check>> {
    let disk_dom = DomainSpec::unit_disk();
    let form = norming_form(&disk_dom, 64)?;
    let angles = [0.0, core::f64::consts::FRAC_PI_2, core::f64::consts::PI];
    let depth = 10;
    let seq = |angle: f64| -> Vec<ComplexPoint> {
        (1..=depth)
            .map(|j| {
                let r = 1.0 - 0.5f64.powi(j);
                ComplexPoint::one(Cplx::new(r * angle.cos(), r * angle.sin()))
            })
            .collect()
    };
    let mut checks = Vec::new();
    let mut finals = Vec::new();
    for (i, &angle) in angles.iter().enumerate() {
        let s = seq(angle);
        let trace = plurigreen::compactify::boundary_trace(&form, &s, Some(angle))?;
        let last = *trace.successive.last().unwrap();
        checks.push(Check::new(
            format!("cauchy_angle_{i}"),
            last <= 0.05,
            format!("last successive distance {last:.4}"),
        ));
        finals.push(form.phi_v(s.last().unwrap())?);
    }
    let mut sep_ok = true;
    let mut min_sep = f64::INFINITY;
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            let d = form.l1_distance(&finals[i], &finals[j]);
            min_sep = min_sep.min(d);
            sep_ok &= d >= 0.5;
        }
    }
    checks.push(Check::new(
        "cluster_separation",
        sep_ok,
        format!("min pairwise separation {min_sep:.4}"),
    ));

    let mut samples = Vec::new();
    for &angle in &angles {
        samples.extend(seq(angle).into_iter().skip(depth as usize - 4));
    }
    let moebius = MapKind::MoebiusCoord { index: 0, a: Cplx::new(-0.5, 0.0) };
    let rep = invariance_test(&form, &form, &moebius, &samples, &[0.5, 0.2, 0.1])?;
    checks.push(Check::new(
        "invariance_moebius",
        rep.max_distance == 0,
        format!("{:?}", rep.per_eps),
    ));

    // sanity: the three-cluster structure is what single linkage reports
    let n = samples.len();
    let mut dist = vec![vec![0.0; n]; n];
    let embeds: Result<Vec<_>, _> = samples.iter().map(|w| form.phi_v(w)).collect();
    let embeds = embeds?;
    for i in 0..n {
        for j in i + 1..n {
            let d = form.l1_distance(&embeds[i], &embeds[j]);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let labels = single_linkage(&dist, 0.2);
    let k = labels.iter().max().map(|m| m + 1).unwrap_or(0);
    checks.push(Check::new(
        "three_clusters_at_eps_0.2",
        k == 3,
        format!("clusters={k}"),
    ));
    Ok(checks)
}
