//! Strict-pole classification, the glued competitor from the locally-uniform
//! construction, the ratio-continuity test, and exhaustion/continuity
//! diagnostics on the hyperconvex models.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bounds::{self, BoundInterval};
use crate::config::SearchBudget;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{deterministic_directions, ComplexPoint, DomainSpec, LN_2};
use crate::Cplx;

/// Anything that can produce certified Green intervals; the production source
/// is the bound engine, tests may substitute degenerate models.
pub trait GreenSource {
    fn interval(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<BoundInterval>;
}

pub struct EngineSource<'a> {
    pub domain: &'a DomainSpec,
    pub cfg: SearchBudget,
}

impl GreenSource for EngineSource<'_> {
    fn interval(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<BoundInterval> {
        bounds::green_interval(self.domain, z, w, &self.cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleClass {
    Strict,
    LogarithmicOnly,
    NoPole,
    Inconclusive,
}

/// Annulus envelope data for g(·, w) − log‖z − w‖ and the fitted two-sided
/// constants of a strict logarithmic pole.
#[derive(Debug, Clone)]
pub struct PoleFit {
    pub w: ComplexPoint,
    pub radii: Vec<f64>,
    pub lower_min: Vec<f64>,
    pub lower_max: Vec<f64>,
    pub upper_min: Vec<f64>,
    pub upper_max: Vec<f64>,
    pub class: PoleClass,
    pub c1: f64,
    pub c2: f64,
}

/// Classifies the pole of g(·, w) on geometric annuli t_k = t₀·10^{−k/2},
/// t₀ = 0.1 shrunk until every annulus stays in the domain.
pub fn classify_pole(
    source: &dyn GreenSource,
    domain: &DomainSpec,
    w: &ComplexPoint,
    cfg: &SearchBudget,
    spread_bound: f64,
) -> Result<PoleFit> {
    let m = domain.contains(w)?;
    if m <= 0.0 {
        return Err(Error::OutsideDomain { margin: m });
    }
    let dirs = deterministic_directions(w.dim(), cfg.annulus_angles.max(4));
    let k_max = cfg.annuli.max(3);

    let mut shrink = 1.0f64;
    'scale: for _ in 0..60 {
        for k in 0..k_max {
            let t = shrink * 0.1 * 10f64.powf(-(k as f64) / 2.0);
            for d in &dirs {
                let z = w.add(&d.scale(Cplx::new(t, 0.0)));
                if !matches!(domain.contains(&z), Ok(mm) if mm > 0.0) {
                    shrink *= 0.5;
                    continue 'scale;
                }
            }
        }
        break;
    }

    let mut radii = Vec::with_capacity(k_max);
    let mut lower_min = Vec::with_capacity(k_max);
    let mut lower_max = Vec::with_capacity(k_max);
    let mut upper_min = Vec::with_capacity(k_max);
    let mut upper_max = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let t = shrink * 0.1 * 10f64.powf(-(k as f64) / 2.0);
        let mut lmin = f64::INFINITY;
        let mut lmax = f64::NEG_INFINITY;
        let mut umin = f64::INFINITY;
        let mut umax = f64::NEG_INFINITY;
        for d in &dirs {
            let z = w.add(&d.scale(Cplx::new(t, 0.0)));
            let b = source.interval(&z, w)?;
            let lo = b.lo - t.ln();
            let hi = b.hi - t.ln();
            lmin = lmin.min(lo);
            lmax = lmax.max(lo);
            umin = umin.min(hi);
            umax = umax.max(hi);
        }
        radii.push(t);
        lower_min.push(lmin);
        lower_max.push(lmax);
        upper_min.push(umin);
        upper_max.push(umax);
    }

    let tail = k_max.min(4);
    let tail_lower = &lower_min[k_max - tail..];
    let tail_upper = &upper_max[k_max - tail..];
    let lower_finite = tail_lower.iter().all(|v| v.is_finite());
    let upper_finite = tail_upper.iter().all(|v| v.is_finite());
    let spread = |vals: &[f64]| -> f64 {
        let mn = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let mx = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        mx - mn
    };
    let lower_ok = lower_finite && spread(tail_lower) <= spread_bound;
    let upper_ok = upper_finite && spread(tail_upper) <= spread_bound;
    let upper_diverges = upper_finite
        && tail_upper.last().unwrap() - tail_upper.first().unwrap() > 1.0;

    let class = if lower_ok && upper_ok {
        PoleClass::Strict
    } else if upper_ok && !lower_ok {
        PoleClass::LogarithmicOnly
    } else if upper_diverges {
        PoleClass::NoPole
    } else {
        PoleClass::Inconclusive
    };
    let c1 = tail_lower.iter().cloned().fold(f64::INFINITY, f64::min);
    let c2 = tail_upper.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PoleFit { w: *w, radii, lower_min, lower_max, upper_min, upper_max, class, c1, c2 })
}

/// The glued competitor v_w: g_B + h/d on U, max{g_B + h/d, u/d} on B∖U,
/// u/d outside B. Continuous and negative PSH by the seam inequalities,
/// with a unit logarithmic pole at w.
#[derive(Debug, Clone, PartialEq)]
pub struct GluedCompetitor {
    w: ComplexPoint,
    center: ComplexPoint,
    ball_radius: f64,
    inner_radius: f64,
    /// h(z) = h_const + 2·Re⟨z − center, h_lin⟩, pluriharmonic.
    h_const: f64,
    h_lin: ComplexPoint,
    d: f64,
    base: ScalarField,
    /// a = u(w₀) − h(w₀) < 0, recorded from the construction.
    pub a: f64,
}

impl GluedCompetitor {
    pub fn eval(&self, p: &ComplexPoint) -> f64 {
        let t = p.dist(&self.center);
        let outer = self.base.eval(p) / self.d;
        if t >= self.ball_radius {
            return outer;
        }
        let gb = ScalarField::BallGreen {
            center: self.center,
            radius: self.ball_radius,
            pole: self.w,
        }
        .eval(p);
        let inner = gb + self.h(p) / self.d;
        if t < self.inner_radius {
            inner
        } else {
            inner.max(outer)
        }
    }

    fn h(&self, p: &ComplexPoint) -> f64 {
        self.h_const + 2.0 * p.sub(&self.center).inner(&self.h_lin).re
    }

    pub fn pole(&self) -> ComplexPoint {
        self.w
    }

    pub fn ball_radius(&self) -> f64 {
        self.ball_radius
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn scale(&self) -> f64 {
        self.d
    }

    /// The constant C with v_w(z) ≥ log‖z − w‖ − C near w (inside U).
    pub fn pole_offset(&self) -> f64 {
        // on U: v_w = log(‖·‖-ish/r) + h/d; h varies by at most its span on U
        let span = 2.0 * self.inner_radius * self.h_lin.norm();
        self.ball_radius.ln() - (self.h_const - span) / self.d
    }
}

/// Builds the glued competitor at `w` from a bounded strictly PSH quadratic
/// base field, searching pluriharmonic candidates h = Re(affine holomorphic).
pub fn glue_competitor(
    domain: &DomainSpec,
    u: &ScalarField,
    w: &ComplexPoint,
) -> Result<GluedCompetitor> {
    let margin = domain.contains(w)?;
    if margin <= 0.0 {
        return Err(Error::OutsideDomain { margin });
    }
    let (u_center, u_scale) = match u {
        ScalarField::QuadraticNeg { center, scale, .. } => (*center, *scale),
        _ => {
            return Err(Error::Unsupported(
                "glue construction ships with quadratic base fields".into(),
            ))
        }
    };
    let dirs = deterministic_directions(w.dim(), 32);
    let sphere_ok = |r: f64| -> bool {
        dirs.iter().all(|d| {
            matches!(domain.contains(&w.add(&d.scale(Cplx::new(r, 0.0)))), Ok(m) if m > 0.0)
        })
    };
    let mut r = 1e-3;
    while sphere_ok(r * 2.0) && r < 1e3 {
        r *= 2.0;
    }
    for _ in 0..40 {
        if sphere_ok(r) {
            break;
        }
        r *= 0.7;
    }
    if !sphere_ok(r) {
        return Err(Error::Infeasible("no coordinate ball fits around w".into()));
    }
    r *= 0.9;

    let delta0 = r * r / 2.0;
    let uw = u.eval(w);
    // candidate linear parts: the gradient of u first, then a direction sweep
    let grad = w.sub(&u_center).scale(Cplx::new(u_scale, 0.0));
    let mut candidates = Vec::with_capacity(65);
    candidates.push(grad);
    for d in deterministic_directions(w.dim(), 64) {
        candidates.push(d.scale(Cplx::new(grad.norm().max(1e-6), 0.0)));
    }

    for h_lin in candidates {
        let h_const = uw + u_scale * delta0;
        let h = |p: &ComplexPoint| h_const + 2.0 * p.sub(w).inner(&h_lin).re;
        let a = uw - h_const;
        if a >= 0.0 {
            continue;
        }
        // u − h > 0 near ∂B
        let on_ball = dirs
            .iter()
            .map(|d| {
                let z = w.add(&d.scale(Cplx::new(r, 0.0)));
                u.eval(&z) - h(&z)
            })
            .fold(f64::INFINITY, f64::min);
        if on_ball <= 0.0 {
            continue;
        }
        let s = (delta0 / 2.0).sqrt() * 0.95;
        if s >= r {
            continue;
        }
        // u − h < a/2 on ∂U
        let on_inner = dirs
            .iter()
            .map(|d| {
                let z = w.add(&d.scale(Cplx::new(s, 0.0)));
                u.eval(&z) - h(&z)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if on_inner >= a / 2.0 {
            continue;
        }
        // d with d·log(s/r) > a/4, then verified on the seams
        let mut d_scale = a / (8.0 * (s / r).ln());
        let gb = ScalarField::BallGreen { center: *w, radius: r, pole: *w };
        let mut ok = false;
        for _ in 0..30 {
            let seam = dirs
                .iter()
                .map(|dir| {
                    let z = w.add(&dir.scale(Cplx::new(s, 0.0)));
                    d_scale * gb.eval(&z) - (u.eval(&z) - h(&z))
                })
                .fold(f64::INFINITY, f64::min);
            if seam > 0.0 {
                ok = true;
                break;
            }
            d_scale *= 0.5;
        }
        if !ok || d_scale <= 0.0 {
            continue;
        }
        let glued = GluedCompetitor {
            w: *w,
            center: *w,
            ball_radius: r,
            inner_radius: s,
            h_const,
            h_lin,
            d: d_scale,
            base: u.clone(),
            a,
        };
        // type invariants: seam continuity and global negativity on samples
        let mut seams_ok = true;
        for dir in &dirs {
            for &seam in &[glued.inner_radius, glued.ball_radius] {
                let inside = w.add(&dir.scale(Cplx::new(seam - 1e-9, 0.0)));
                let outside = w.add(&dir.scale(Cplx::new(seam + 1e-9, 0.0)));
                if (glued.eval(&inside) - glued.eval(&outside)).abs() > 1e-9 + 1e-6 * glued.eval(&inside).abs() {
                    seams_ok = false;
                }
            }
        }
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x67_6c_75_65);
        let sample = domain.sample_interior(&mut rng, 500);
        let negative = sample.iter().all(|p| glued.eval(p) < 0.0);
        if seams_ok && negative {
            return Ok(glued);
        }
    }
    Err(Error::Infeasible("no admissible (B, h, d) found".into()))
}

/// Result of the ratio-continuity search.
#[derive(Debug, Clone)]
pub struct RatioReport {
    /// Largest tested δ achieving deviation ≤ ε, if any.
    pub delta: Option<f64>,
    /// Deviation at the returned δ.
    pub deviation: f64,
    /// (δ, max deviation) table over the tested schedule.
    pub table: Vec<(f64, f64)>,
}

/// For shrinking neighborhoods Y = B(w₀, δ), the worst ratio deviation
/// |g(z, w₀)/g(z, w) − 1| over sampled z with ‖z − w₀‖ ≥ excluded radius and
/// w ∈ ∂Y, via closed forms (ball/polydisk only).
pub fn ratio_test(
    domain: &DomainSpec,
    w0: &ComplexPoint,
    excluded_radius: f64,
    eps: f64,
    cfg: &SearchBudget,
) -> Result<RatioReport> {
    if !matches!(domain, DomainSpec::Ball { .. } | DomainSpec::Polydisk { .. }) {
        return Err(Error::Unsupported("ratio test ships on ball/polydisk closed forms".into()));
    }
    let m0 = domain.contains(w0)?;
    if m0 <= 0.0 {
        return Err(Error::OutsideDomain { margin: m0 });
    }
    let dirs = deterministic_directions(w0.dim(), cfg.annulus_angles.max(8));
    // z-samples: a fixed geometric radius ladder per direction, clipped at
    // the excluded sphere. Growing the excluded radius filters the same set,
    // so the reported deviation is monotone in it by construction.
    let mut z_samples = Vec::new();
    for d in &dirs {
        let mut lo = 1e-6;
        let mut hi = 1e-6;
        while matches!(
            domain.contains(&w0.add(&d.scale(Cplx::new(hi * 2.0, 0.0)))),
            Ok(m) if m > 0.0
        ) && hi < 1e4
        {
            hi *= 2.0;
        }
        for _ in 0..40 {
            let mid = 0.5 * (lo + hi);
            if matches!(domain.contains(&w0.add(&d.scale(Cplx::new(mid, 0.0)))), Ok(m) if m > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rmax = lo * 0.9999;
        for k in 0..20 {
            // cluster toward the boundary where the ratio is binding
            let rho = rmax * (1.0 - 0.7f64 * 0.85f64.powi(19 - k));
            if rho >= excluded_radius {
                z_samples.push(w0.add(&d.scale(Cplx::new(rho, 0.0))));
            }
        }
    }

    let mut table = Vec::new();
    let mut found: Option<(f64, f64)> = None;
    for j in 0..12 {
        let delta = 0.05 * 0.5f64.powi(j);
        if delta >= excluded_radius / 2.0 || delta >= m0 {
            continue;
        }
        let mut dev = 0.0f64;
        for dw in &dirs {
            let w = w0.add(&dw.scale(Cplx::new(delta, 0.0)));
            if !matches!(domain.contains(&w), Ok(m) if m > 0.0) {
                dev = f64::INFINITY;
                break;
            }
            for z in &z_samples {
                let g0 = bounds::closed_form_green(domain, z, w0).unwrap_or(f64::NAN);
                let gw = bounds::closed_form_green(domain, z, &w).unwrap_or(f64::NAN);
                if !(g0 < 0.0 && gw < 0.0) {
                    continue;
                }
                dev = dev.max((g0 / gw - 1.0).abs());
            }
        }
        table.push((delta, dev));
        if dev <= eps {
            found = Some((delta, dev));
            break; // largest δ in the descending schedule
        }
    }
    Ok(RatioReport {
        delta: found.map(|(d, _)| d),
        deviation: found.map(|(_, v)| v).unwrap_or(f64::INFINITY),
        table,
    })
}

#[derive(Debug, Clone)]
pub struct LevelClearance {
    pub level: f64,
    pub samples_in_sublevel: usize,
    pub min_margin: f64,
}

#[derive(Debug, Clone)]
pub struct ExhaustionReport {
    /// Scale with g ≥ b·u claimed from the sphere around w.
    pub b: f64,
    pub bu_holds: bool,
    pub bu_worst_slack: f64,
    pub levels: Vec<LevelClearance>,
}

/// Per-level boundary clearance of {g_hi < a} plus the g ≥ b·u comparison
/// from the proof recipe (b from the small sphere around w).
pub fn exhaustion_check(
    domain: &DomainSpec,
    w: &ComplexPoint,
    levels: &[f64],
    cfg: &SearchBudget,
) -> Result<ExhaustionReport> {
    let exhaustion = domain
        .defining_psh()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Unsupported("domain ships no exhaustion candidate".into()))?;
    let m0 = domain.contains(w)?;
    if m0 <= 0.0 {
        return Err(Error::OutsideDomain { margin: m0 });
    }

    // b from max of g_lo/u on a small sphere around w
    let dirs = deterministic_directions(w.dim(), 16);
    let mut t_b = 0.05;
    while !dirs.iter().all(|d| {
        matches!(domain.contains(&w.add(&d.scale(Cplx::new(t_b, 0.0)))), Ok(m) if m > 0.0)
    }) && t_b > 1e-8
    {
        t_b *= 0.5;
    }
    let mut b = 0.0f64;
    for d in &dirs {
        let z = w.add(&d.scale(Cplx::new(t_b, 0.0)));
        let g = bounds::green_interval(domain, &z, w, cfg)?;
        let uv = exhaustion.eval(&z);
        if g.lo.is_finite() && uv < 0.0 {
            b = b.max(g.lo / uv);
        }
    }

    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    let cloud = domain.sample_interior(&mut rng, 1500);
    let mut bu_worst: f64 = f64::INFINITY;
    let mut levels_out = Vec::with_capacity(levels.len());
    let mut intervals = Vec::with_capacity(cloud.len());
    for z in &cloud {
        if z.dist(w) < 1e-9 {
            intervals.push(BoundInterval::pole());
            continue;
        }
        let g = bounds::green_interval(domain, z, w, cfg)?;
        let uv = exhaustion.eval(z);
        if g.lo.is_finite() && uv.is_finite() {
            bu_worst = bu_worst.min(g.lo - b * uv);
        }
        intervals.push(g);
    }
    for &a in levels {
        let mut min_margin = f64::INFINITY;
        let mut count = 0usize;
        for (z, g) in cloud.iter().zip(&intervals) {
            if g.hi < a {
                count += 1;
                min_margin = min_margin.min(domain.contains(z)?);
            }
        }
        levels_out.push(LevelClearance { level: a, samples_in_sublevel: count, min_margin });
    }
    Ok(ExhaustionReport {
        b,
        bu_holds: bu_worst >= -1e-9,
        bu_worst_slack: bu_worst,
        levels: levels_out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityVerdict {
    Converges,
    DiscontinuityWitness,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub verdict: ContinuityVerdict,
    /// limit.lo − max tail hi; positive gaps witness discontinuity.
    pub gap: f64,
    pub limit: BoundInterval,
    pub tail: Vec<BoundInterval>,
    pub tail_width: f64,
    pub limit_width: f64,
}

/// Scans interval sequences along a path (z_j, w_j) whose final entry is the
/// limit pair. A witness requires a positive certified gap with both interval
/// widths summing below half of the analytic gap log 2 / 2.
pub fn continuity_scan(
    source: &dyn GreenSource,
    path: &[(ComplexPoint, ComplexPoint)],
) -> Result<ContinuityReport> {
    if path.len() < 2 {
        return Err(Error::InvalidParameter("path needs at least two pairs".into()));
    }
    let (z0, w0) = path[path.len() - 1];
    let limit = source.interval(&z0, &w0)?;
    let tail_start = path.len().saturating_sub(5);
    let mut tail = Vec::new();
    for (z, w) in &path[tail_start..path.len() - 1] {
        tail.push(source.interval(z, w)?);
    }
    let hi_tail = tail.iter().map(|b| b.hi).fold(f64::NEG_INFINITY, f64::max);
    let tail_width = tail
        .iter()
        .map(|b| if b.is_pole() { 0.0 } else { b.width() })
        .fold(0.0, f64::max);
    let limit_width = if limit.is_pole() { 0.0 } else { limit.width() };
    let gap = limit.lo - hi_tail;

    let verdict = if gap > 0.0 && tail_width + limit_width < 0.5 * (LN_2 / 2.0) {
        ContinuityVerdict::DiscontinuityWitness
    } else {
        let last = tail.last().unwrap_or(&limit);
        let overlap = last.lo - 0.05 <= limit.hi && limit.lo - 0.05 <= last.hi;
        if overlap {
            ContinuityVerdict::Converges
        } else {
            ContinuityVerdict::Inconclusive
        }
    };
    Ok(ContinuityReport { verdict, gap, limit, tail, tail_width, limit_width })
}

/// Convert a verdict to its report string.
pub fn verdict_name(v: ContinuityVerdict) -> &'static str {
    match v {
        ContinuityVerdict::Converges => "CONVERGES",
        ContinuityVerdict::DiscontinuityWitness => "DISCONTINUITY WITNESS",
        ContinuityVerdict::Inconclusive => "INCONCLUSIVE",
    }
}

/// Ships the bounded strictly PSH base field used in glue demonstrations.
pub fn quadratic_base(domain: &DomainSpec) -> Result<ScalarField> {
    match domain {
        DomainSpec::Ball { center, radius } => Ok(ScalarField::QuadraticNeg {
            center: *center,
            scale: 1.0 / (radius * radius),
            level: radius * radius,
        }),
        DomainSpec::Polydisk { center, radii } => {
            let rsq: f64 = radii.iter().map(|r| r * r).sum();
            Ok(ScalarField::QuadraticNeg { center: *center, scale: 1.0 / rsq, level: rsq })
        }
        DomainSpec::SublevelDcg(_) => Ok(ScalarField::QuadraticNeg {
            center: ComplexPoint::origin(2),
            scale: 1.0 / 65.0,
            level: 65.0,
        }),
        _ => Err(Error::Unsupported("no shipped quadratic base for this domain".into())),
    }
}

pub use self::report_strings::pole_class_name;

mod report_strings {
    use super::PoleClass;

    pub fn pole_class_name(c: PoleClass) -> &'static str {
        match c {
            PoleClass::Strict => "Strict",
            PoleClass::LogarithmicOnly => "LogarithmicOnly",
            PoleClass::NoPole => "NoPole",
            PoleClass::Inconclusive => "Inconclusive",
        }
    }
}
