//! Extended-real scalar fields on domains: defining functions, explicit
//! plurisubharmonic competitors and glued constructions.
//!
//! Everything here is PSH by construction (logs of moduli of holomorphic
//! maps, maxima, positive combinations, quadratics); no variant relies on a
//! sampled PSH check.

use alloc::boxed::Box;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::{ball_automorphism, moebius, ComplexPoint, HartogsParams, SublevelParams};
use crate::hyperconvex::GluedCompetitor;
use crate::Cplx;

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarField {
    /// log(‖z − center‖ / radius): ball Green function with pole at the center.
    BallLog { center: ComplexPoint, radius: f64 },
    /// Ball Green function with arbitrary pole, via the automorphism formula.
    BallGreen { center: ComplexPoint, radius: f64, pole: ComplexPoint },
    /// max_j log(|z_j − c_j| / r_j): polydisk Green function with pole at the center.
    CoordDiskLogMax { center: ComplexPoint, radii: Vec<f64> },
    /// Polydisk Green function with arbitrary pole (coordinate Möbius maxima).
    PolydiskGreen { center: ComplexPoint, radii: Vec<f64>, pole: ComplexPoint },
    /// u(z) = (log‖z‖ + v(z))/2 on the sublevel model; pole at the origin.
    SublevelU(SublevelParams),
    /// max of the three defining functions of the Hartogs model.
    HartogsDefining(HartogsParams),
    /// h(z) = max{log|z₂ − w₂| + v(z₁) − log(2e), log|z₁|}; pole at (0, w₂).
    HartogsH { params: HartogsParams, w2: Cplx },
    /// g_{D²}(F(z), F(w)) pulled back through F(z) = (z₁, z₁z₂).
    HartogsBidiskPullback { fw: [Cplx; 2] },
    /// scale·(‖z − center‖² − level); bounded strictly PSH, negative when
    /// level exceeds the squared circumscribed radius.
    QuadraticNeg { center: ComplexPoint, scale: f64, level: f64 },
    /// factor · inner, factor > 0.
    Scaled { inner: Box<ScalarField>, factor: f64 },
    MaxOf(Vec<ScalarField>),
    /// Glued competitor from the locally-uniform construction.
    Glued(Box<GluedCompetitor>),
}

impl ScalarField {
    pub fn eval(&self, p: &ComplexPoint) -> f64 {
        match self {
            ScalarField::BallLog { center, radius } => {
                let d = p.dist(center);
                if d == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    (d / radius).ln()
                }
            }
            ScalarField::BallGreen { center, radius, pole } => {
                let inv = Cplx::new(1.0 / radius, 0.0);
                let zh = p.sub(center).scale(inv);
                let wh = pole.sub(center).scale(inv);
                let n = ball_automorphism(&wh, &zh).norm();
                if n == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    n.ln()
                }
            }
            ScalarField::CoordDiskLogMax { center, radii } => {
                let mut m = f64::NEG_INFINITY;
                for (i, &r) in radii.iter().enumerate() {
                    let d = (p.coord(i) - center.coord(i)).norm();
                    let t = if d == 0.0 { f64::NEG_INFINITY } else { (d / r).ln() };
                    m = m.max(t);
                }
                m
            }
            ScalarField::PolydiskGreen { center, radii, pole } => {
                let mut m = f64::NEG_INFINITY;
                for (i, &r) in radii.iter().enumerate() {
                    let zh = (p.coord(i) - center.coord(i)) / r;
                    let wh = (pole.coord(i) - center.coord(i)) / r;
                    let d = moebius(zh, wh).norm();
                    let t = if d == 0.0 { f64::NEG_INFINITY } else { d.ln() };
                    m = m.max(t);
                }
                m
            }
            ScalarField::SublevelU(params) => params.u(p),
            ScalarField::HartogsDefining(params) => {
                let z1 = p.coord(0);
                let z2 = p.coord(1);
                let a = z1.norm().ln();
                let b = if z2.norm() == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    z2.norm().ln() + params.v(z1)
                };
                let c = (z1 * z2).norm().ln();
                a.max(b).max(c)
            }
            ScalarField::HartogsH { params, w2 } => params.h(*w2, p),
            ScalarField::HartogsBidiskPullback { fw } => {
                let f1 = p.coord(0);
                let f2 = p.coord(0) * p.coord(1);
                let m1 = moebius(f1, fw[0]).norm();
                let m2 = moebius(f2, fw[1]).norm();
                let a = if m1 == 0.0 { f64::NEG_INFINITY } else { m1.ln() };
                let b = if m2 == 0.0 { f64::NEG_INFINITY } else { m2.ln() };
                a.max(b)
            }
            ScalarField::QuadraticNeg { center, scale, level } => {
                scale * (p.sub(center).norm_sqr() - level)
            }
            ScalarField::Scaled { inner, factor } => factor * inner.eval(p),
            ScalarField::MaxOf(parts) => {
                parts.iter().map(|f| f.eval(p)).fold(f64::NEG_INFINITY, f64::max)
            }
            ScalarField::Glued(g) => g.eval(p),
        }
    }

    /// Location of the logarithmic pole, when the field certifies one
    /// (u(z) ≤ log‖z − w‖ + C near w).
    pub fn log_pole(&self) -> Option<ComplexPoint> {
        match self {
            ScalarField::BallLog { center, .. } => Some(*center),
            ScalarField::BallGreen { pole, .. } => Some(*pole),
            ScalarField::CoordDiskLogMax { center, .. } => Some(*center),
            ScalarField::PolydiskGreen { pole, .. } => Some(*pole),
            ScalarField::SublevelU(_) => Some(ComplexPoint::origin(2)),
            ScalarField::HartogsDefining(_) => None,
            ScalarField::HartogsH { w2, .. } => {
                Some(ComplexPoint::two(Cplx::ZERO, *w2))
            }
            ScalarField::HartogsBidiskPullback { fw } => {
                if fw[0].norm() < 1e-14 {
                    None
                } else {
                    Some(ComplexPoint::two(fw[0], fw[1] / fw[0]))
                }
            }
            ScalarField::QuadraticNeg { .. } => None,
            // A pole scaled by factor < 1 is no longer bounded above by
            // log‖z − w‖ + C from below the unit strength, but it still is
            // from above only when factor ≥ 1.
            ScalarField::Scaled { inner, factor } => {
                if *factor >= 1.0 {
                    inner.log_pole()
                } else {
                    None
                }
            }
            ScalarField::MaxOf(parts) => {
                let mut pole = None;
                for part in parts {
                    match (pole, part.log_pole()) {
                        (None, Some(p)) => pole = Some(p),
                        (Some(q), Some(p)) if q.dist(&p) <= 1e-12 => {}
                        _ => return None,
                    }
                }
                pole
            }
            ScalarField::Glued(g) => Some(g.pole()),
        }
    }

    /// Maximum of the field over a sample set; used for negativity checks.
    pub fn max_on(&self, pts: &[ComplexPoint]) -> f64 {
        pts.iter().map(|p| self.eval(p)).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LN_2;
    use approx::assert_relative_eq;

    fn pt2(x: f64, y: f64) -> ComplexPoint {
        ComplexPoint::two(Cplx::new(x, 0.0), Cplx::new(y, 0.0))
    }

    #[test]
    fn ball_log_matches_closed_form() {
        let f = ScalarField::BallLog { center: ComplexPoint::origin(2), radius: 1.0 };
        assert_relative_eq!(f.eval(&pt2(0.5, 0.0)), 0.5f64.ln(), epsilon = 1e-15);
        assert_eq!(f.eval(&ComplexPoint::origin(2)), f64::NEG_INFINITY);
    }

    #[test]
    fn ball_green_reduces_to_ball_log_at_center_pole() {
        let f = ScalarField::BallGreen {
            center: ComplexPoint::origin(2),
            radius: 2.0,
            pole: ComplexPoint::origin(2),
        };
        assert_relative_eq!(f.eval(&pt2(0.5, 0.0)), 0.25f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn polydisk_green_is_max_of_moebius_logs() {
        let f = ScalarField::PolydiskGreen {
            center: ComplexPoint::origin(2),
            radii: alloc::vec![1.0, 1.0],
            pole: ComplexPoint::origin(2),
        };
        assert_relative_eq!(f.eval(&pt2(0.5, 0.25)), 0.5f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn sublevel_u_field_value() {
        let f = ScalarField::SublevelU(SublevelParams::default_instance());
        assert_relative_eq!(f.eval(&pt2(0.5, 0.0)), -1.5 * LN_2, epsilon = 1e-12);
        assert_eq!(f.log_pole().unwrap().dist(&ComplexPoint::origin(2)), 0.0);
    }

    #[test]
    fn hartogs_h_is_negative_on_samples_and_matches_formula() {
        use rand_chacha::rand_core::SeedableRng;
        let params = HartogsParams::default_instance();
        let w2 = Cplx::new(0.4, 0.1);
        let field = ScalarField::HartogsH { params: params.clone(), w2 };
        let dom = crate::geometry::DomainSpec::HartogsPgvlu(params.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts = dom.sample_interior(&mut rng, 500);
        assert!(pts.len() > 400);
        for p in &pts {
            let val = field.eval(p);
            assert!(val <= 0.0, "h must be ≤ 0 on D, got {val}");
            let direct = ((p.coord(1) - w2).norm().ln() + params.v(p.coord(0))
                - (2.0 * core::f64::consts::E).ln())
            .max(p.coord(0).norm().ln());
            if val.is_finite() {
                assert_relative_eq!(val, direct, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn max_of_requires_common_pole() {
        let a = ScalarField::BallLog { center: ComplexPoint::origin(2), radius: 1.0 };
        let b = ScalarField::BallLog { center: pt2(0.5, 0.0), radius: 2.0 };
        assert!(ScalarField::MaxOf(alloc::vec![a.clone(), a.clone()]).log_pole().is_some());
        assert!(ScalarField::MaxOf(alloc::vec![a, b]).log_pole().is_none());
    }
}
