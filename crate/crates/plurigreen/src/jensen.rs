//! Lelong–Jensen residual check: u(w) minus the harmonic-measure boundary
//! term minus the weighted Green potential of dd^c u must vanish for smooth
//! test fields. The disk uses the Poisson kernel and a pole-centered rule;
//! the C² ball uses the invariant Poisson kernel and slice decomposition of
//! dd^c g through the automorphism moving w to 0.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{ball_automorphism, moebius, ComplexPoint, DomainSpec};
use crate::quad::{gauss_legendre_on, PoleCenteredDiskRule};
use crate::Cplx;

/// Smooth test fields with closed-form complex Hessians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothField {
    /// Re z_i — pluriharmonic, the interior term vanishes.
    ReCoord(usize),
    /// ‖z‖².
    NormSq,
    /// ‖z‖⁴.
    NormQuad,
}

impl SmoothField {
    pub fn value(&self, p: &ComplexPoint) -> f64 {
        match self {
            SmoothField::ReCoord(i) => p.coord(*i).re,
            SmoothField::NormSq => p.norm_sqr(),
            SmoothField::NormQuad => {
                let n = p.norm_sqr();
                n * n
            }
        }
    }

    /// Complex Hessian quadratic form Σ ∂²u/∂z_i∂z̄_j · a_i ā_j at p.
    pub fn hessian_form(&self, p: &ComplexPoint, a: &ComplexPoint) -> f64 {
        match self {
            SmoothField::ReCoord(_) => 0.0,
            SmoothField::NormSq => a.norm_sqr(),
            SmoothField::NormQuad => {
                let mixed = a.inner(p).norm_sqr();
                2.0 * (mixed + p.norm_sqr() * a.norm_sqr())
            }
        }
    }

    /// Euclidean Laplacian along a holomorphic curve s at parameter ζ:
    /// Δ(u∘s)(ζ) = 4·H(s(ζ))[s'(ζ)].
    pub fn slice_laplacian(&self, s_val: &ComplexPoint, s_der: &ComplexPoint) -> f64 {
        4.0 * self.hessian_form(s_val, s_der)
    }
}

/// |u(w) − ∫_∂ u dμ_w − (2π)^{−n} ∫ g·dd^c u ∧ (dd^c g)^{n−1}| by quadrature.
pub fn lelong_jensen_residual(
    domain: &DomainSpec,
    field: SmoothField,
    w: &ComplexPoint,
    resolution: usize,
) -> Result<f64> {
    match domain {
        DomainSpec::Ball { center, radius } if center.dim() == 1 => {
            if (radius - 1.0).abs() > 1e-12 || center.norm() > 0.0 {
                return Err(Error::Unsupported("disk residual ships on the unit disk".into()));
            }
            disk_residual(field, w.coord(0), resolution)
        }
        DomainSpec::Ball { center, radius } if center.dim() == 2 => {
            if (radius - 1.0).abs() > 1e-12 || center.norm() > 0.0 {
                return Err(Error::Unsupported("ball residual ships on the unit ball".into()));
            }
            ball_residual(field, w, resolution)
        }
        _ => Err(Error::Unsupported("Lelong–Jensen ships on the disk and the C² ball".into())),
    }
}

fn disk_residual(field: SmoothField, w: Cplx, resolution: usize) -> Result<f64> {
    if w.norm() >= 1.0 {
        return Err(Error::OutsideDomain { margin: 1.0 - w.norm() });
    }
    let angular = (4 * resolution).max(64);
    // Poisson boundary term
    let mut boundary = 0.0;
    for j in 0..angular {
        let th = 2.0 * core::f64::consts::PI * j as f64 / angular as f64;
        let xi = Cplx::new(th.cos(), th.sin());
        let p = (1.0 - w.norm_sqr()) / (xi - w).norm_sqr();
        boundary += field.value(&ComplexPoint::one(xi)) * p;
    }
    boundary /= angular as f64;

    // Green potential of Δu with the pole-centered rule
    let rule = PoleCenteredDiskRule::unit_disk(w, resolution.max(16), (2 * resolution).max(32));
    let one = ComplexPoint::one(Cplx::new(1.0, 0.0));
    let interior = rule.integrate(|z| {
        let g = moebius(z, w).norm().max(1e-300).ln();
        let lap = field.slice_laplacian(&ComplexPoint::one(z), &one);
        g * lap
    }) / (2.0 * core::f64::consts::PI);

    let u_w = field.value(&ComplexPoint::one(w));
    Ok((u_w - boundary - interior).abs())
}

/// Hopf-coordinate quadrature over S³: directions with weights summing to 1
/// against the uniform surface measure.
fn hopf_sphere(radial: usize, angular: usize) -> Vec<(ComplexPoint, f64)> {
    let (xs, ws) = gauss_legendre_on(radial, 0.0, 1.0);
    let mut out = Vec::with_capacity(radial * angular * angular);
    for (x, wx) in xs.iter().zip(&ws) {
        let c = (1.0 - x).max(0.0).sqrt(); // cos η with sin²η = x uniform
        let s = x.max(0.0).sqrt();
        for j1 in 0..angular {
            let p1 = 2.0 * core::f64::consts::PI * j1 as f64 / angular as f64;
            for j2 in 0..angular {
                let p2 = 2.0 * core::f64::consts::PI * j2 as f64 / angular as f64;
                let dir = ComplexPoint::two(
                    Cplx::new(c * p1.cos(), c * p1.sin()),
                    Cplx::new(s * p2.cos(), s * p2.sin()),
                );
                out.push((dir, *wx));
            }
        }
    }
    // normalize to a probability measure
    let total: f64 = out.iter().map(|(_, w)| *w).sum();
    for (_, w) in out.iter_mut() {
        *w /= total;
    }
    out
}

fn ball_residual(field: SmoothField, w: &ComplexPoint, resolution: usize) -> Result<f64> {
    if w.norm() >= 1.0 {
        return Err(Error::OutsideDomain { margin: 1.0 - w.norm() });
    }
    let sphere = hopf_sphere((resolution / 2).max(12), (resolution / 2).max(12));

    // invariant Poisson boundary term: ((1−‖w‖²)/|1−⟨ξ,w⟩|²)²
    let mut boundary = 0.0;
    for (xi, weight) in &sphere {
        let p = (1.0 - w.norm_sqr()) / (Cplx::new(1.0, 0.0) - xi.inner(w)).norm_sqr();
        boundary += field.value(xi) * p * p * weight;
    }

    // slice decomposition of the interior term through φ_w
    let rule = PoleCenteredDiskRule::unit_disk(Cplx::ZERO, resolution.max(16), (2 * resolution).max(32));
    let h = 1e-5;
    let mut interior = 0.0;
    for (omega, weight) in &sphere {
        let slice = |zeta: Cplx| -> ComplexPoint { ball_automorphism(w, &omega.scale(zeta)) };
        let val = rule.integrate(|zeta| {
            let s = slice(zeta);
            // holomorphic curve derivative by central difference
            let dh = Cplx::new(h, 0.0);
            let sp = slice(zeta + dh);
            let sm = slice(zeta - dh);
            let der = sp.sub(&sm).scale(Cplx::new(0.5 / h, 0.0));
            zeta.norm().max(1e-300).ln() * field.slice_laplacian(&s, &der)
        }) / (2.0 * core::f64::consts::PI);
        interior += val * weight;
    }

    let u_w = field.value(w);
    Ok((u_w - boundary - interior).abs())
}

/// Interior term of the disk identity alone; tests compare it with the
/// mean-value oracle (|w|^{2m} − 1 for u = |z|^{2m}).
pub fn disk_interior_term(field: SmoothField, w: Cplx, resolution: usize) -> f64 {
    let rule = PoleCenteredDiskRule::unit_disk(w, resolution.max(16), (2 * resolution).max(32));
    let one = ComplexPoint::one(Cplx::new(1.0, 0.0));
    rule.integrate(|z| {
        let g = moebius(z, w).norm().max(1e-300).ln();
        g * field.slice_laplacian(&ComplexPoint::one(z), &one)
    }) / (2.0 * core::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_field_has_tiny_residual() {
        let disk = DomainSpec::unit_disk();
        let w = ComplexPoint::one(Cplx::new(0.3, 0.0));
        let r = lelong_jensen_residual(&disk, SmoothField::ReCoord(0), &w, 64).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn interior_term_matches_mean_value_oracle() {
        // For u = |z|², the Green potential equals |w|² − 1 (circle means of
        // log|z−w| are max(log r, log|w|), log|1−w̄z| averages to zero).
        for &x in &[0.0, 0.5] {
            let w = Cplx::new(x, 0.0);
            let term = disk_interior_term(SmoothField::NormSq, w, 96);
            assert_relative_eq!(term, w.norm_sqr() - 1.0, epsilon = 2e-4);
            // u = |z|⁴: oracle |w|⁴ − 1
            let term4 = disk_interior_term(SmoothField::NormQuad, w, 96);
            assert_relative_eq!(term4, w.norm_sqr() * w.norm_sqr() - 1.0, epsilon = 2e-4);
        }
    }

    #[test]
    fn disk_residuals_below_tolerance() {
        let disk = DomainSpec::unit_disk();
        for &x in &[0.0, 0.5] {
            let w = ComplexPoint::one(Cplx::new(x, 0.0));
            for f in [SmoothField::ReCoord(0), SmoothField::NormSq, SmoothField::NormQuad] {
                let r = lelong_jensen_residual(&disk, f, &w, 96).unwrap();
                assert!(r < 1e-3, "residual {r} for {f:?} at {x}");
            }
        }
    }

    #[test]
    fn ball_residual_at_center_and_off_center() {
        let ball = DomainSpec::unit_ball(2);
        let w0 = ComplexPoint::origin(2);
        let r = lelong_jensen_residual(&ball, SmoothField::NormSq, &w0, 48).unwrap();
        assert!(r < 1e-3, "center residual {r}");

        let w1 = ComplexPoint::two(Cplx::new(0.3, 0.0), Cplx::ZERO);
        let r1 = lelong_jensen_residual(&ball, SmoothField::NormSq, &w1, 48).unwrap();
        assert!(r1 < 1e-2, "off-center residual {r1}");
    }
}
