//! Directional invariants: the Azukawa function via annulus scans of the
//! Green bounds, σ^i/σ^s capacities against a Hermitian metric, closed-form
//! Bergman constants, the Suita inequality check and the disk derivative
//! bound.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bounds;
use crate::config::SearchBudget;
use crate::disk;
use crate::error::{Error, Result};
use crate::geometry::{deterministic_directions, ComplexPoint, Direction, DomainSpec};
use crate::Cplx;

/// Hermitian metrics shipped with the models; evaluation is (w, v) ↦ ‖v‖_H.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermitianMetric {
    Euclidean,
    BergmanBall { m: usize },
    BergmanPolydisk { m: usize },
}

impl HermitianMetric {
    pub fn norm(&self, w: &ComplexPoint, v: &ComplexPoint) -> f64 {
        match self {
            HermitianMetric::Euclidean => v.norm(),
            HermitianMetric::BergmanBall { m } => {
                let wn = w.norm_sqr();
                let denom = (1.0 - wn) * (1.0 - wn);
                let mixed = v.inner(w).norm_sqr();
                ((*m as f64 + 1.0) * ((1.0 - wn) * v.norm_sqr() + mixed) / denom).sqrt()
            }
            HermitianMetric::BergmanPolydisk { m } => {
                let mut acc = 0.0;
                for i in 0..*m {
                    let d = 1.0 - w.coord(i).norm_sqr();
                    acc += 2.0 * v.coord(i).norm_sqr() / (d * d);
                }
                acc.sqrt()
            }
        }
    }
}

/// One directional record, CSV-shaped.
#[derive(Debug, Clone)]
pub struct DirectionalSample {
    pub w: ComplexPoint,
    pub v: ComplexPoint,
    pub a_lo: f64,
    pub a_hi: f64,
    pub r_hi: f64,
}

/// Azukawa enclosure along the linear jet f(ζ) = w + ζv.
#[derive(Debug, Clone, Copy)]
pub struct AzukawaInterval {
    pub lo: f64,
    pub hi: f64,
    /// Intercept of the (log t, value) tail fit, reported as metadata; the
    /// conservative enclosure above is what downstream checks consume.
    pub intercept: f64,
}

/// Evaluates g on annuli w + t_k e^{iθ} v, t_k = t₀·2^{−k}, and extracts a
/// conservative enclosure of limsup (g − log t). Homogeneity is honored by
/// normalizing v first and adding log‖v‖ back.
pub fn azukawa(domain: &DomainSpec, dir: &Direction, cfg: &SearchBudget) -> Result<AzukawaInterval> {
    let w = dir.base;
    let m = domain.contains(&w)?;
    if m <= 0.0 {
        return Err(Error::OutsideDomain { margin: m });
    }
    let vn = dir.vector.norm();
    let log_norm = vn.ln();
    let vhat = dir.vector.scale(Cplx::new(1.0 / vn, 0.0));

    let k_max = cfg.annuli.max(4);
    let angles = cfg.annulus_angles.max(8);
    let mut t0 = 0.1;
    'shrink: for _ in 0..200 {
        for k in 0..k_max {
            let t = t0 * 0.5f64.powi(k as i32);
            for j in 0..angles {
                let th = 2.0 * core::f64::consts::PI * j as f64 / angles as f64;
                let zeta = Cplx::new(t * th.cos(), t * th.sin());
                let z = w.add(&vhat.scale(zeta));
                if !matches!(domain.contains(&z), Ok(mm) if mm > 0.0) {
                    t0 *= 0.5;
                    continue 'shrink;
                }
            }
        }
        break;
    }

    let mut his = Vec::with_capacity(k_max);
    let mut los = Vec::with_capacity(k_max);
    let mut logts = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let t = t0 * 0.5f64.powi(k as i32);
        let mut hi_k = f64::NEG_INFINITY;
        let mut lo_k = f64::NEG_INFINITY;
        for j in 0..angles {
            let th = 2.0 * core::f64::consts::PI * j as f64 / angles as f64;
            let zeta = Cplx::new(t * th.cos(), t * th.sin());
            let z = w.add(&vhat.scale(zeta));
            let b = bounds::green_interval(domain, &z, &w, cfg)?;
            hi_k = hi_k.max(b.hi - t.ln());
            lo_k = lo_k.max(b.lo - t.ln());
        }
        his.push(hi_k);
        los.push(lo_k);
        logts.push(t.ln());
    }
    let tail = k_max.min(4);
    let hi = his[k_max - tail..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = los[k_max - tail..].iter().cloned().fold(f64::INFINITY, f64::min);
    let intercept = fit_intercept(&logts[k_max - tail..], &his[k_max - tail..]);
    Ok(AzukawaInterval { lo: lo + log_norm, hi: hi + log_norm, intercept: intercept + log_norm })
}

fn fit_intercept(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return f64::NAN;
    }
    let mx: f64 = xs.iter().sum::<f64>() / n;
    let my: f64 = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        my
    } else {
        my - (num / den) * mx
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SigmaEstimates {
    pub s_lo: f64,
    pub s_hi: f64,
    pub i_lo: f64,
    pub i_hi: f64,
    /// Direction-grid size behind the estimate; reported, never claimed as a
    /// true inf/sup.
    pub directions: usize,
}

/// σ^s ≈ sup over sampled H-unit directions of A(w, v), σ^i ≈ inf; the
/// directions come from a deterministic low-discrepancy sweep.
pub fn sigma_estimates(
    domain: &DomainSpec,
    w: &ComplexPoint,
    metric: HermitianMetric,
    cfg: &SearchBudget,
) -> Result<SigmaEstimates> {
    let count = if w.dim() == 1 { 1 } else { 64 };
    let dirs = deterministic_directions(w.dim(), count);
    let mut s_lo = f64::NEG_INFINITY;
    let mut s_hi = f64::NEG_INFINITY;
    let mut i_lo = f64::INFINITY;
    let mut i_hi = f64::INFINITY;
    for d in &dirs {
        let hn = metric.norm(w, d);
        let v = d.scale(Cplx::new(1.0 / hn, 0.0));
        let a = azukawa(domain, &Direction::new(*w, v)?, cfg)?;
        s_lo = s_lo.max(a.lo);
        s_hi = s_hi.max(a.hi);
        i_lo = i_lo.min(a.lo);
        i_hi = i_hi.min(a.hi);
    }
    Ok(SigmaEstimates { s_lo, s_hi, i_lo, i_hi, directions: dirs.len() })
}

/// Closed-form Bergman data at the symmetric point of the ball/polydisk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BergmanConstants {
    pub m: usize,
    /// B(0, v) = b_coeff·‖v‖²_E.
    pub b_coeff: f64,
    /// ‖v‖_B = norm_factor·‖v‖_E.
    pub norm_factor: f64,
    pub sigma_s: f64,
    pub sigma_i: f64,
}

pub fn bergman_constants(domain: &DomainSpec) -> Result<BergmanConstants> {
    match domain {
        DomainSpec::Ball { center, .. } => {
            let m = center.dim();
            let mf = m as f64;
            Ok(BergmanConstants {
                m,
                b_coeff: mf + 1.0,
                norm_factor: (mf + 1.0).sqrt(),
                sigma_s: -(mf + 1.0).sqrt().ln(),
                sigma_i: -(mf + 1.0).sqrt().ln(),
            })
        }
        DomainSpec::Polydisk { center, radii } => {
            if radii.iter().any(|&r| (r - 1.0).abs() > 1e-12) {
                return Err(Error::Unsupported("Bergman constants ship for the unit polydisk".into()));
            }
            let m = center.dim();
            Ok(BergmanConstants {
                m,
                b_coeff: 2.0,
                norm_factor: 2.0f64.sqrt(),
                sigma_s: -(2.0f64.sqrt()).ln(),
                sigma_i: -(m as f64).ln(),
            })
        }
        _ => Err(Error::Unsupported("Bergman constants ship for ball and polydisk".into())),
    }
}

/// d_B(0, z) = √(m+1)·log((1 + ‖z‖)/(1 − ‖z‖)) on the unit ball.
pub fn bergman_distance_ball(m: usize, z_norm: f64) -> f64 {
    (m as f64 + 1.0).sqrt() * ((1.0 + z_norm) / (1.0 - z_norm)).ln()
}

/// Bergman kernel density of the unit disk, B(w) = π^{−1}(1 − |w|²)^{−2}.
/// Tests re-derive this from the reproducing-kernel series before use.
pub fn disk_bergman_kernel_density(w: Cplx) -> f64 {
    let d = 1.0 - w.norm_sqr();
    1.0 / (core::f64::consts::PI * d * d)
}

#[derive(Debug, Clone, Copy)]
pub struct SuitaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// σ^s_H(w) ≤ log √(π·α_{B,H}(w)) on the unit disk, with H a constant
/// multiple of the Euclidean metric (density `h_density`).
pub fn suita_check(w: Cplx, h_density: f64, tol: f64, cfg: &SearchBudget) -> Result<SuitaReport> {
    let disk_dom = DomainSpec::unit_disk();
    let base = ComplexPoint::one(w);
    let dir = Direction::new(base, ComplexPoint::one(Cplx::new(1.0, 0.0)))?;
    let a = azukawa(&disk_dom, &dir, cfg)?;
    let lhs = a.hi - 0.5 * h_density.ln();
    let alpha = disk_bergman_kernel_density(w) / h_density;
    let rhs = (core::f64::consts::PI * alpha).sqrt().ln();
    Ok(SuitaReport { lhs, rhs, holds: lhs <= rhs + tol })
}

#[derive(Debug, Clone, Copy)]
pub struct DerivativeBoundReport {
    /// e^{−σ^i_lo(w)}, the certified ceiling for ‖f'(0)‖_H.
    pub bound: f64,
    pub max_derivative: f64,
    pub max_violation: f64,
    pub trials: usize,
}

/// Samples certified analytic disks with f(0) = w and compares ‖f'(0)‖_H
/// against e^{−σ^i}; violations should stay ≤ 0.
pub fn derivative_bound_check(
    domain: &DomainSpec,
    w: &ComplexPoint,
    metric: HermitianMetric,
    trials: usize,
    cfg: &SearchBudget,
) -> Result<DerivativeBoundReport> {
    let sigma = sigma_estimates(domain, w, metric, cfg)?;
    let bound = (-sigma.i_lo).exp();
    let disks = disk::sample_certified_disks(domain, w, trials, cfg);
    let mut max_derivative = 0.0f64;
    for d in &disks {
        let v = d.derivative0();
        max_derivative = max_derivative.max(metric.norm(w, &v));
    }
    Ok(DerivativeBoundReport {
        bound,
        max_derivative,
        max_violation: max_derivative - bound,
        trials: disks.len(),
    })
}

/// Scan of g(f(ζ), w) − log|ζ| along an arbitrary polynomial jet, at caller
/// supplied radii; records per-radius minima of the lower and upper Green
/// bounds. Used to exhibit jet-dependence of the liminf on the degenerate
/// models (recorded as data, not failure).
#[derive(Debug, Clone)]
pub struct JetScan {
    pub radii: Vec<f64>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

pub fn jet_liminf_scan(
    domain: &DomainSpec,
    curve: &[Vec<Cplx>],
    w: &ComplexPoint,
    radii: &[f64],
    cfg: &SearchBudget,
) -> Result<JetScan> {
    let mut lo = Vec::with_capacity(radii.len());
    let mut hi = Vec::with_capacity(radii.len());
    for &t in radii {
        let mut zc = [Cplx::ZERO; 2];
        for (i, coeffs) in curve.iter().enumerate() {
            let mut acc = Cplx::ZERO;
            for &c in coeffs.iter().rev() {
                acc = acc * Cplx::new(t, 0.0) + c;
            }
            zc[i] = acc;
        }
        let z = match curve.len() {
            1 => ComplexPoint::one(zc[0]),
            _ => ComplexPoint::two(zc[0], zc[1]),
        };
        let b = bounds::green_interval(domain, &z, w, cfg)?;
        lo.push(b.lo - t.ln());
        hi.push(b.hi - t.ln());
    }
    Ok(JetScan { radii: radii.to_vec(), lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SublevelParams, LN_2};
    use approx::assert_relative_eq;

    fn pt2(x: f64, y: f64) -> ComplexPoint {
        ComplexPoint::two(Cplx::new(x, 0.0), Cplx::new(y, 0.0))
    }

    fn origin2() -> ComplexPoint {
        ComplexPoint::origin(2)
    }

    #[test]
    fn azukawa_on_unit_ball_is_log_norm() {
        let dom = DomainSpec::unit_ball(2);
        let cfg = SearchBudget::no_engine();
        for d in deterministic_directions(2, 16) {
            let dir = Direction::new(origin2(), d).unwrap();
            let a = azukawa(&dom, &dir, &cfg).unwrap();
            assert!(a.hi - a.lo <= 0.1, "width {}", a.hi - a.lo);
            assert!(a.lo <= 1e-9 && -1e-9 <= a.hi, "[{}, {}]", a.lo, a.hi);
        }
    }

    #[test]
    fn azukawa_scaling_on_radius_two_ball() {
        let dom = DomainSpec::Ball { center: origin2(), radius: 2.0 };
        let dir = Direction::new(origin2(), pt2(1.0, 0.0)).unwrap();
        let a = azukawa(&dom, &dir, &SearchBudget::no_engine()).unwrap();
        assert!(a.lo <= -LN_2 + 1e-9 && -LN_2 <= a.hi + 1e-9);
        assert!(a.hi - a.lo <= 0.05);
    }

    #[test]
    fn azukawa_homogeneity() {
        let dom = DomainSpec::unit_ball(2);
        let cfg = SearchBudget::no_engine();
        let base = azukawa(&dom, &Direction::new(origin2(), pt2(0.3, 0.4)).unwrap(), &cfg).unwrap();
        for alpha in [Cplx::new(2.0, 0.0), Cplx::new(0.0, 1.0), Cplx::new(0.5, 0.0)] {
            let v = pt2(0.3, 0.4).scale(alpha);
            let scaled = azukawa(&dom, &Direction::new(origin2(), v).unwrap(), &cfg).unwrap();
            assert_relative_eq!(scaled.hi - base.hi, alpha.norm().ln(), epsilon = 1e-6);
            assert_relative_eq!(scaled.lo - base.lo, alpha.norm().ln(), epsilon = 1e-6);
        }
    }

    #[test]
    fn sigma_on_ball_with_bergman_metric() {
        let dom = DomainSpec::unit_ball(2);
        let s = sigma_estimates(&dom, &origin2(), HermitianMetric::BergmanBall { m: 2 }, &SearchBudget::no_engine())
            .unwrap();
        let expected = -(3.0f64.sqrt()).ln();
        assert!((s.s_hi - expected).abs() <= 0.1, "σ_s = {}", s.s_hi);
        assert!((s.i_lo - expected).abs() <= 0.1, "σ_i = {}", s.i_lo);
        assert!((s.s_hi - s.i_lo).abs() <= 0.1);
    }

    #[test]
    fn sigma_on_polydisk_with_bergman_metric() {
        let dom = DomainSpec::unit_bidisk();
        let s = sigma_estimates(&dom, &origin2(), HermitianMetric::BergmanPolydisk { m: 2 }, &SearchBudget::no_engine())
            .unwrap();
        assert!((s.s_hi - (-(2.0f64.sqrt()).ln())).abs() <= 0.1, "σ_s = {}", s.s_hi);
        assert!((s.i_lo - (-2.0f64.ln())).abs() <= 0.1, "σ_i = {}", s.i_lo);
    }

    #[test]
    fn sigma_euclidean_disk_is_zero_at_center() {
        let dom = DomainSpec::unit_disk();
        let w = ComplexPoint::one(Cplx::ZERO);
        let s = sigma_estimates(&dom, &w, HermitianMetric::Euclidean, &SearchBudget::no_engine()).unwrap();
        assert!(s.s_hi.abs() <= 1e-9 && s.i_lo.abs() <= 1e-9);
    }

    #[test]
    fn bergman_constant_closed_forms() {
        let ball2 = DomainSpec::unit_ball(2);
        let c = bergman_constants(&ball2).unwrap();
        assert_relative_eq!(c.b_coeff, 3.0, epsilon = 1e-15);
        assert_relative_eq!(c.sigma_s, -(3.0f64.sqrt()).ln(), epsilon = 1e-15);

        let ball1 = DomainSpec::unit_ball(1);
        let c1 = bergman_constants(&ball1).unwrap();
        assert_relative_eq!(c1.b_coeff, 2.0, epsilon = 1e-15);
        assert_relative_eq!(c1.sigma_s, -(2.0f64.sqrt()).ln(), epsilon = 1e-15);

        let poly = DomainSpec::unit_bidisk();
        let cp = bergman_constants(&poly).unwrap();
        assert_relative_eq!(cp.sigma_s, -(2.0f64.sqrt()).ln(), epsilon = 1e-15);
        assert_relative_eq!(cp.sigma_i, -2.0f64.ln(), epsilon = 1e-15);

        assert!(bergman_distance_ball(2, 0.5) > 0.0);
    }

    #[test]
    fn bergman_kernel_series_oracle() {
        // K(w, w) = Σ_k (k+1)|w|^{2k} / π must match π^{−1}(1−|w|²)^{−2}.
        for &r in &[0.0, 0.3, 0.6, 0.8] {
            let w = Cplx::new(r, 0.0);
            let mut series = 0.0;
            for k in 0..4000 {
                series += (k as f64 + 1.0) * r.powi(2 * k);
            }
            series /= core::f64::consts::PI;
            assert_relative_eq!(series, disk_bergman_kernel_density(w), epsilon = 1e-8);
        }
    }

    #[test]
    fn suita_near_equality_on_disk() {
        let cfg = SearchBudget::no_engine();
        for &x in &[0.0, 0.3, 0.6] {
            let rep = suita_check(Cplx::new(x, 0.0), 1.0, 0.05, &cfg).unwrap();
            assert!(rep.holds, "Suita fails at {x}: lhs {} rhs {}", rep.lhs, rep.rhs);
            assert!((rep.lhs - rep.rhs).abs() <= 0.05, "equality case violated at {x}");
        }
        // scaling H by 4 shifts both sides by −log 2
        let base = suita_check(Cplx::new(0.3, 0.0), 1.0, 0.05, &cfg).unwrap();
        let scaled = suita_check(Cplx::new(0.3, 0.0), 4.0, 0.05, &cfg).unwrap();
        assert_relative_eq!(scaled.lhs - base.lhs, -LN_2, epsilon = 1e-9);
        assert_relative_eq!(scaled.rhs - base.rhs, -LN_2, epsilon = 1e-9);
        assert_eq!(base.holds, scaled.holds);
    }

    #[test]
    fn derivative_bound_on_disk_and_balls() {
        let cfg = SearchBudget { restarts: 2, ..SearchBudget::default() };
        let disk_dom = DomainSpec::unit_disk();
        let w1 = ComplexPoint::one(Cplx::ZERO);
        let rep = derivative_bound_check(&disk_dom, &w1, HermitianMetric::Euclidean, 12, &cfg).unwrap();
        assert!(rep.max_violation <= 1e-9, "Schwarz violated: {}", rep.max_violation);
        assert!((rep.bound - 1.0).abs() <= 0.05);

        let ball2 = DomainSpec::Ball { center: origin2(), radius: 2.0 };
        let rep2 = derivative_bound_check(&ball2, &origin2(), HermitianMetric::Euclidean, 12, &cfg).unwrap();
        assert!(rep2.max_violation <= 0.05);
        assert!((rep2.bound - 2.0).abs() <= 0.05, "bound {}", rep2.bound);
        // near-extremal linear disks should approach the ceiling
        assert!(rep2.max_derivative >= 1.8, "max deriv {}", rep2.max_derivative);
    }

    #[test]
    fn liminf_depends_on_jet_on_the_sublevel_model() {
        // flat jet f(ζ) = (ζ, 0): g − log t ≡ −log 2 / 2 exactly;
        // parabola g(ζ) = (ζ, ζ²) sampled at t = c_j: → −3 log 2.
        let params = SublevelParams::default_instance();
        let dom = DomainSpec::SublevelDcg(params.clone());
        let cfg = SearchBudget::no_engine();
        let w = origin2();

        let flat = alloc::vec![
            alloc::vec![Cplx::ZERO, Cplx::new(1.0, 0.0)],
            alloc::vec![Cplx::ZERO],
        ];
        let radii: Vec<f64> = (1..6).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        let scan = jet_liminf_scan(&dom, &flat, &w, &radii, &cfg).unwrap();
        for (lo, hi) in scan.lo.iter().zip(&scan.hi) {
            assert_relative_eq!(*lo, -0.5 * LN_2, epsilon = 1e-9);
            assert_relative_eq!(*hi, -0.5 * LN_2, epsilon = 1e-9);
        }

        let parabola = alloc::vec![
            alloc::vec![Cplx::ZERO, Cplx::new(1.0, 0.0)],
            alloc::vec![Cplx::ZERO, Cplx::ZERO, Cplx::new(1.0, 0.0)],
        ];
        let cs: Vec<f64> = params.c().iter().skip(3).cloned().collect();
        let scan2 = jet_liminf_scan(&dom, &parabola, &w, &cs, &cfg).unwrap();
        let last = *scan2.hi.last().unwrap();
        assert!(last <= -2.5 * LN_2, "parabola scan too high: {last}");
        // the two jets genuinely disagree
        assert!(last < -0.5 * LN_2 - 1.0);
    }
}
