//! Root localization for complex coefficient polynomials.
//!
//! Aberth–Ehrlich simultaneous iteration with Newton polishing. The caller
//! gets either the full root multiset with a residual certificate or an
//! inconclusive flag; the bound machinery treats inconclusive as
//! "not certified", never as "no roots".

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::Cplx;

/// Evaluate p(z) = Σ coeffs[k] z^k and its derivative by Horner.
pub fn eval_poly(coeffs: &[Cplx], z: Cplx) -> (Cplx, Cplx) {
    let mut p = Cplx::ZERO;
    let mut dp = Cplx::ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Strip negligible leading coefficients relative to the largest one.
fn trim(coeffs: &[Cplx]) -> Vec<Cplx> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut v: Vec<Cplx> = coeffs.to_vec();
    while v.len() > 1 && v.last().map(|c| c.norm()).unwrap_or(0.0) <= 1e-13 * scale {
        v.pop();
    }
    v
}

/// All roots of the polynomial, certified by the residual
/// max_k |p(z_k)| ≤ tol·scale. Returns `RootsInconclusive` if the iteration
/// stalls or the residual stays large.
pub fn all_roots(coeffs: &[Cplx], tol: f64) -> Result<Vec<Cplx>> {
    let p = trim(coeffs);
    let deg = p.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p[deg];
    if lead.norm() == 0.0 {
        return Err(Error::RootsInconclusive("zero leading coefficient after trim".into()));
    }

    // Cauchy bound on root moduli.
    let bound = 1.0
        + p[..deg]
            .iter()
            .map(|c| (*c / lead).norm())
            .fold(0.0, f64::max);

    // Initial guesses on a slightly irregular circle.
    let mut roots: Vec<Cplx> = (0..deg)
        .map(|k| {
            let th = 2.0 * core::f64::consts::PI * (k as f64 + 0.35) / deg as f64 + 0.5;
            Cplx::new(th.cos(), th.sin()) * (0.7 * bound)
        })
        .collect();

    let scale = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut converged = false;
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let (pv, dv) = eval_poly(&p, roots[i]);
            let newton = if dv.norm() > 0.0 { pv / dv } else { pv };
            let mut repulse = Cplx::ZERO;
            for j in 0..deg {
                if j != i {
                    let d = roots[i] - roots[j];
                    if d.norm() > 1e-300 {
                        repulse += d.inv();
                    }
                }
            }
            let denom = Cplx::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * (1.0 + bound) {
            converged = true;
            break;
        }
    }
    // Newton polish.
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (pv, dv) = eval_poly(&p, *r);
            if dv.norm() > 1e-300 {
                *r -= pv / dv;
            }
        }
    }
    let resid = roots
        .iter()
        .map(|r| eval_poly(&p, *r).0.norm())
        .fold(0.0, f64::max);
    // Residual certificate; multiple roots converge slowly but polish well
    // within this envelope for the low degrees used here.
    let envelope = tol.max(1e-9) * scale.max(1.0) * (1.0 + bound).powi(deg as i32);
    if !converged && resid > envelope {
        return Err(Error::RootsInconclusive(format!(
            "residual {resid:.3e} above certificate {envelope:.3e}"
        )));
    }
    Ok(roots)
}

/// Roots of p inside the closed disk |z| ≤ radius (with slack `edge_tol` for
/// boundary jitter).
pub fn roots_in_disk(coeffs: &[Cplx], radius: f64, edge_tol: f64, tol: f64) -> Result<Vec<Cplx>> {
    Ok(all_roots(coeffs, tol)?
        .into_iter()
        .filter(|r| r.norm() <= radius + edge_tol)
        .collect())
}
