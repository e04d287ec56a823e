//! Points, directions, model domains and holomorphic maps between them.
//!
//! All domains are bounded open connected subsets of C^1 or C^2 described by
//! finitely many defining inequalities. Membership is reported as a signed
//! margin (minimum slack over the defining inequalities), so `margin > 0`
//! means strictly inside and `margin = 0` means boundary.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::Cplx;

pub const LN_2: f64 = core::f64::consts::LN_2;

/// A point of C^n, n ∈ {1, 2}. Copyable; coordinates always finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    dim: usize,
    c: [Cplx; 2],
}

impl ComplexPoint {
    pub fn one(z: Cplx) -> Self {
        Self { dim: 1, c: [z, Cplx::ZERO] }
    }

    pub fn two(z1: Cplx, z2: Cplx) -> Self {
        Self { dim: 2, c: [z1, z2] }
    }

    pub fn from_coords(coords: &[Cplx]) -> Result<Self> {
        match coords.len() {
            1 => Ok(Self::one(coords[0])),
            2 => Ok(Self::two(coords[0], coords[1])),
            n => Err(Error::InvalidParameter(format!("dimension {n} not supported"))),
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self { dim, c: [Cplx::ZERO, Cplx::ZERO] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, i: usize) -> Cplx {
        self.c[i]
    }

    pub fn coords(&self) -> &[Cplx] {
        &self.c[..self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut c = [Cplx::ZERO; 2];
        for i in 0..self.dim {
            c[i] = self.c[i] - other.c[i];
        }
        Self { dim: self.dim, c }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut c = [Cplx::ZERO; 2];
        for i in 0..self.dim {
            c[i] = self.c[i] + other.c[i];
        }
        Self { dim: self.dim, c }
    }

    pub fn scale(&self, s: Cplx) -> Self {
        let mut c = [Cplx::ZERO; 2];
        for i in 0..self.dim {
            c[i] = self.c[i] * s;
        }
        Self { dim: self.dim, c }
    }

    /// Hermitian inner product Σ z_j conj(w_j).
    pub fn inner(&self, other: &Self) -> Cplx {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = Cplx::ZERO;
        for i in 0..self.dim {
            acc += self.c[i] * other.c[i].conj();
        }
        acc
    }
}

/// A tangent direction at a base point; the vector is never zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub base: ComplexPoint,
    pub vector: ComplexPoint,
}

impl Direction {
    pub fn new(base: ComplexPoint, vector: ComplexPoint) -> Result<Self> {
        if base.dim() != vector.dim() {
            return Err(Error::DimensionMismatch { expected: base.dim(), got: vector.dim() });
        }
        if vector.norm() <= 0.0 || !vector.is_finite() {
            return Err(Error::InvalidParameter("direction vector must be nonzero".into()));
        }
        Ok(Self { base, vector })
    }

    pub fn normalized(&self) -> Self {
        let n = self.vector.norm();
        Self { base: self.base, vector: self.vector.scale(Cplx::new(1.0 / n, 0.0)) }
    }
}

/// Parameters of the sublevel domain M = {‖z‖ < 8, u(z) < 0} with
/// u = (log‖z‖ + v)/2, v(z) = Σ k_j log|z₂ − c_j z₁|.
///
/// Construction enforces Σ k_j = 1 and Σ k_j log c_j = −log 2 to 1e−12.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelParams {
    c: Vec<f64>,
    k: Vec<f64>,
}

impl SublevelParams {
    pub const OUTER_RADIUS: f64 = 8.0;

    pub fn new(c: Vec<f64>, k: Vec<f64>) -> Result<Self> {
        if c.len() != k.len() || c.is_empty() {
            return Err(Error::InvalidParameter("c and k must have equal positive length".into()));
        }
        if c.iter().any(|&x| x <= 0.0) || k.iter().any(|&x| x <= 0.0) {
            return Err(Error::InvalidParameter("c_j and k_j must be positive".into()));
        }
        for w in c.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidParameter("c_j must be strictly decreasing".into()));
            }
        }
        let mass: f64 = k.iter().sum();
        let logsum: f64 = k.iter().zip(&c).map(|(k, c)| k * c.ln()).sum();
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("Σ k_j = {mass}, expected 1")));
        }
        if (logsum + LN_2).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("Σ k_j log c_j = {logsum}, expected −log 2")));
        }
        Ok(Self { c, k })
    }

    /// The reproducible instance: tail c_j = 2^{−j} (j = 2..J) with geometric
    /// weights carrying total mass `s`, and c₁ ∈ (1/2, 1) solved in closed
    /// form so that Σ k_j log c_j = −log 2 with k₁ = 1 − s.
    pub fn shipped(terms: usize, mass: f64) -> Result<Self> {
        if terms < 2 || !(0.0 < mass && mass < 0.25) {
            return Err(Error::InvalidParameter("need J ≥ 2 and s ∈ (0, 1/4)".into()));
        }
        let j_max = terms;
        let denom = 1.0 - 0.5f64.powi(j_max as i32 - 1);
        let mut c = vec![0.0; j_max];
        let mut k = vec![0.0; j_max];
        for j in 2..=j_max {
            c[j - 1] = 0.5f64.powi(j as i32);
            k[j - 1] = mass * 0.5f64.powi(j as i32 - 1) / denom;
        }
        let t: f64 = (2..=j_max).map(|j| j as f64 * k[j - 1]).sum();
        k[0] = 1.0 - mass;
        c[0] = 2.0f64.powf((t - 1.0) / (1.0 - mass));
        Self::new(c, k)
    }

    pub fn default_instance() -> Self {
        // J = 8, s = 1/8; c₁ ≈ 0.63 keeps the sequence strictly decreasing.
        Self::shipped(8, 0.125).expect("shipped parameters are valid")
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    /// v(z) = Σ k_j log|z₂ − c_j z₁|; −∞ on the lines z₂ = c_j z₁.
    pub fn v(&self, z1: Cplx, z2: Cplx) -> f64 {
        let mut acc = 0.0;
        for (&cj, &kj) in self.c.iter().zip(&self.k) {
            let m = (z2 - z1 * cj).norm();
            if m == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += kj * m.ln();
        }
        acc
    }

    /// u(z) = (log‖z‖ + v(z))/2.
    pub fn u(&self, p: &ComplexPoint) -> f64 {
        let n = p.norm();
        if n == 0.0 {
            return f64::NEG_INFINITY;
        }
        0.5 * (n.ln() + self.v(p.coord(0), p.coord(1)))
    }

    /// Direction constant C(ω) = Σ k_j log|ω₂ − c_j ω₁| for a unit direction.
    /// The radial slice {sω : |s| < r(ω)} stays in M for
    /// r(ω) = min(8, e^{−C(ω)/2}).
    pub fn slice_radius(&self, unit_dir: &ComplexPoint) -> f64 {
        let c = self.v(unit_dir.coord(0), unit_dir.coord(1));
        if c == f64::NEG_INFINITY {
            Self::OUTER_RADIUS
        } else {
            Self::OUTER_RADIUS.min((-0.5 * c).exp())
        }
    }
}

/// Parameters of the Hartogs-type pseudoconvex domain
/// D = {|z₁| < 1, log|z₂| + v(z₁) < 0, |z₁z₂| < 1} with
/// v(ζ) = Σ k_j log|(ζ − c_j)/(1 − c_j ζ)|.
///
/// Construction verifies (1) Σ k_j log c_j > −1 and (2) {v < −2} ⊂ ∪ D(c_j, r_j)
/// on a 400×400 grid of the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct HartogsParams {
    c: Vec<f64>,
    r: Vec<f64>,
    k: Vec<f64>,
    /// sup |z₂| over D, used for circumscribed-radius competitors.
    z2_bound: f64,
}

impl HartogsParams {
    pub fn new(c: Vec<f64>, r: Vec<f64>, k: Vec<f64>) -> Result<Self> {
        let n = c.len();
        if n == 0 || r.len() != n || k.len() != n {
            return Err(Error::InvalidParameter("c, r, k must have equal positive length".into()));
        }
        for j in 0..n {
            if !(c[j] > 0.0 && c[j] < 1.0) || !(r[j] > 0.0 && r[j] < c[j]) || k[j] <= 0.0 {
                return Err(Error::InvalidParameter("need 0 < r_j < c_j < 1 and k_j > 0".into()));
            }
            if j + 1 < n && c[j + 1] >= c[j] {
                return Err(Error::InvalidParameter("c_j must be strictly decreasing".into()));
            }
        }
        // disks mutually disjoint
        for i in 0..n {
            for j in i + 1..n {
                if (c[i] - c[j]).abs() <= r[i] + r[j] {
                    return Err(Error::InvalidParameter(format!("disks {i} and {j} overlap")));
                }
            }
        }
        let logsum: f64 = k.iter().zip(&c).map(|(k, c)| k * c.ln()).sum();
        if logsum <= -1.0 {
            return Err(Error::InvalidParameter(format!(
                "constraint (1) fails: Σ k_j log c_j = {logsum} ≤ −1"
            )));
        }
        let mut params = Self { c, r, k, z2_bound: 0.0 };
        params.verify_sublevel_grid(400)?;
        // |z₂| < min(e^{−v(z₁)}, 1/|z₁|); away from the removed disks v is
        // bounded below, inside each D_j the cap 1/|z₁| rules.
        let j_last = params.c.len() - 1;
        let cap = 1.0 / (params.c[j_last] - params.r[j_last]);
        let mut outside_max: f64 = core::f64::consts::E; // conservative floor
        let steps = 400;
        for i in 0..steps {
            for l in 0..steps {
                let x = -1.0 + 2.0 * (i as f64 + 0.5) / steps as f64;
                let y = -1.0 + 2.0 * (l as f64 + 0.5) / steps as f64;
                let zeta = Cplx::new(x, y);
                if zeta.norm() >= 1.0 || params.in_removed_disk(zeta) {
                    continue;
                }
                let bound = (-params.v(zeta)).exp().min(1.0 / zeta.norm().max(1e-12));
                outside_max = outside_max.max(bound);
            }
        }
        params.z2_bound = cap.max(outside_max);
        Ok(params)
    }

    /// The reproducible instance: c_j = 3^{−j}, r_j = c_j/4 and k_j ∝ 2^{−j}
    /// normalized so Σ k_j log c_j = −0.9 (slack 0.1 against constraint (1)).
    pub fn shipped(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::InvalidParameter("need at least one term".into()));
        }
        let mut c = vec![0.0; terms];
        let mut r = vec![0.0; terms];
        let mut weight = vec![0.0; terms];
        let mut norm = 0.0;
        for j in 1..=terms {
            c[j - 1] = 3.0f64.powi(-(j as i32));
            r[j - 1] = c[j - 1] / 4.0;
            weight[j - 1] = 0.5f64.powi(j as i32);
            norm += weight[j - 1] * j as f64;
        }
        let beta = 0.9 / (3.0f64.ln() * norm);
        let k: Vec<f64> = weight.iter().map(|w| w * beta).collect();
        Self::new(c, r, k)
    }

    pub fn default_instance() -> Self {
        Self::shipped(6).expect("shipped parameters are valid")
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn z2_bound(&self) -> f64 {
        self.z2_bound
    }

    fn in_removed_disk(&self, zeta: Cplx) -> bool {
        self.c.iter().zip(&self.r).any(|(&cj, &rj)| (zeta - cj).norm() < rj)
    }

    fn verify_sublevel_grid(&self, steps: usize) -> Result<()> {
        for i in 0..steps {
            for l in 0..steps {
                let x = -1.0 + 2.0 * (i as f64 + 0.5) / steps as f64;
                let y = -1.0 + 2.0 * (l as f64 + 0.5) / steps as f64;
                let zeta = Cplx::new(x, y);
                if zeta.norm() >= 1.0 {
                    continue;
                }
                if self.v(zeta) < -2.0 && !self.in_removed_disk(zeta) {
                    return Err(Error::InvalidParameter(format!(
                        "constraint (2) fails at ({x}, {y}): v < −2 outside the removed disks"
                    )));
                }
            }
        }
        Ok(())
    }

    /// v(ζ) = Σ k_j log|(ζ − c_j)/(1 − c_j ζ)| ≤ 0 on the unit disk.
    pub fn v(&self, zeta: Cplx) -> f64 {
        let mut acc = 0.0;
        for (&cj, &kj) in self.c.iter().zip(&self.k) {
            let num = (zeta - cj).norm();
            if num == 0.0 {
                return f64::NEG_INFINITY;
            }
            let den = (Cplx::new(1.0, 0.0) - zeta * cj).norm();
            acc += kj * (num / den).ln();
        }
        acc
    }

    /// The competitor h(z) = max{log|z₂ − w₂| + v(z₁) − log(2e), log|z₁|}
    /// for poles (0, w₂); negative on D with a logarithmic pole at (0, w₂).
    pub fn h(&self, w2: Cplx, p: &ComplexPoint) -> f64 {
        let z1 = p.coord(0);
        let z2 = p.coord(1);
        let first = (z2 - w2).norm().ln() + self.v(z1) - (2.0 * core::f64::consts::E).ln();
        let second = z1.norm().ln();
        first.max(second)
    }
}

/// Tagged description of a model domain.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    Ball { center: ComplexPoint, radius: f64 },
    Polydisk { center: ComplexPoint, radii: Vec<f64> },
    /// Large disk D(0, outer) in C with finitely many closed disks removed.
    PlanarComplement { outer_radius: f64, removed: Vec<(Cplx, f64)> },
    HartogsPgvlu(HartogsParams),
    SublevelDcg(SublevelParams),
    /// Image model, used only through its map.
    Pushforward { source: Box<DomainSpec>, map: Box<HoloMap> },
}

impl DomainSpec {
    pub fn unit_disk() -> Self {
        DomainSpec::Ball { center: ComplexPoint::origin(1), radius: 1.0 }
    }

    pub fn unit_ball(dim: usize) -> Self {
        DomainSpec::Ball { center: ComplexPoint::origin(dim), radius: 1.0 }
    }

    pub fn unit_bidisk() -> Self {
        DomainSpec::Polydisk { center: ComplexPoint::origin(2), radii: vec![1.0, 1.0] }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball { center, .. } => center.dim(),
            DomainSpec::Polydisk { center, .. } => center.dim(),
            DomainSpec::PlanarComplement { .. } => 1,
            DomainSpec::HartogsPgvlu(_) | DomainSpec::SublevelDcg(_) => 2,
            DomainSpec::Pushforward { map, .. } => map.target_dim(),
        }
    }

    /// Signed membership margin: minimum slack over the defining inequalities.
    /// Positive iff the point lies in the open domain.
    pub fn contains(&self, p: &ComplexPoint) -> Result<f64> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        Ok(match self {
            DomainSpec::Ball { center, radius } => radius - p.dist(center),
            DomainSpec::Polydisk { center, radii } => {
                let mut m = f64::INFINITY;
                for (i, &r) in radii.iter().enumerate() {
                    m = m.min(r - (p.coord(i) - center.coord(i)).norm());
                }
                m
            }
            DomainSpec::PlanarComplement { outer_radius, removed } => {
                let z = p.coord(0);
                let mut m = outer_radius - z.norm();
                for &(a, r) in removed {
                    m = m.min((z - a).norm() - r);
                }
                m
            }
            DomainSpec::HartogsPgvlu(params) => {
                let z1 = p.coord(0);
                let z2 = p.coord(1);
                let mut m = 1.0 - z1.norm();
                let log_term = if z2.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    -(z2.norm().ln() + params.v(z1))
                };
                m = m.min(log_term);
                m.min(1.0 - (z1 * z2).norm())
            }
            DomainSpec::SublevelDcg(params) => {
                let m = SublevelParams::OUTER_RADIUS - p.norm();
                m.min(-params.u(p))
            }
            DomainSpec::Pushforward { source, map } => {
                let pre = map.invert(p)?;
                source.contains(&pre)?
            }
        })
    }

    pub fn is_inside(&self, p: &ComplexPoint) -> bool {
        matches!(self.contains(p), Ok(m) if m > 0.0)
    }

    /// True when every defining function is plurisubharmonic, so a
    /// maximum-principle boundary check certifies disk containment.
    pub fn all_defining_psh(&self) -> bool {
        match self {
            DomainSpec::Ball { .. }
            | DomainSpec::Polydisk { .. }
            | DomainSpec::HartogsPgvlu(_)
            | DomainSpec::SublevelDcg(_) => true,
            DomainSpec::PlanarComplement { .. } => false,
            DomainSpec::Pushforward { .. } => false,
        }
    }

    /// Negative PSH defining/exhaustion candidates for the shipped models.
    pub fn defining_psh(&self) -> Vec<ScalarField> {
        match self {
            DomainSpec::Ball { center, radius } => {
                vec![ScalarField::BallLog { center: *center, radius: *radius }]
            }
            DomainSpec::Polydisk { center, radii } => {
                vec![ScalarField::CoordDiskLogMax { center: *center, radii: radii.clone() }]
            }
            DomainSpec::PlanarComplement { outer_radius, .. } => {
                vec![ScalarField::BallLog {
                    center: ComplexPoint::origin(1),
                    radius: *outer_radius,
                }]
            }
            DomainSpec::HartogsPgvlu(params) => vec![ScalarField::HartogsDefining(params.clone())],
            DomainSpec::SublevelDcg(params) => vec![ScalarField::SublevelU(params.clone())],
            DomainSpec::Pushforward { .. } => Vec::new(),
        }
    }

    /// Radius of a circumscribed ball centered at `w`; every bounded model
    /// satisfies g(z, w) ≥ log(‖z − w‖ / R_w) with this radius.
    pub fn bounding_radius_at(&self, w: &ComplexPoint) -> f64 {
        match self {
            DomainSpec::Ball { center, radius } => radius + w.dist(center),
            DomainSpec::Polydisk { center, radii } => {
                let mut acc = 0.0;
                for (i, &r) in radii.iter().enumerate() {
                    let d = (w.coord(i) - center.coord(i)).norm() + r;
                    acc += d * d;
                }
                acc.sqrt()
            }
            DomainSpec::PlanarComplement { outer_radius, .. } => outer_radius + w.norm(),
            DomainSpec::HartogsPgvlu(params) => {
                let corner = (1.0 + params.z2_bound() * params.z2_bound()).sqrt();
                corner + w.norm()
            }
            DomainSpec::SublevelDcg(_) => SublevelParams::OUTER_RADIUS + w.norm(),
            DomainSpec::Pushforward { .. } => f64::INFINITY,
        }
    }

    /// Deterministic interior sample, biased toward the center; used for
    /// validation scans, not for quadrature.
    pub fn sample_interior(&self, rng: &mut dyn RngCore, count: usize) -> Vec<ComplexPoint> {
        let mut out = Vec::with_capacity(count);
        let mut guard = 0usize;
        while out.len() < count && guard < count * 1000 {
            guard += 1;
            let p = match self {
                DomainSpec::Ball { center, radius } => {
                    let dir = random_unit(rng, center.dim());
                    let r = radius * uniform(rng);
                    center.add(&dir.scale(Cplx::new(r, 0.0)))
                }
                DomainSpec::Polydisk { center, radii } => {
                    let mut c = [Cplx::ZERO; 2];
                    for (i, &r) in radii.iter().enumerate() {
                        c[i] = center.coord(i) + random_disk(rng) * r;
                    }
                    ComplexPoint { dim: center.dim(), c }
                }
                DomainSpec::PlanarComplement { outer_radius, .. } => {
                    ComplexPoint::one(random_disk(rng) * *outer_radius)
                }
                DomainSpec::HartogsPgvlu(params) => {
                    let z1 = random_disk(rng);
                    if z1.norm() >= 1.0 {
                        continue;
                    }
                    let cap = (-params.v(z1)).exp().min(1.0 / z1.norm().max(1e-9));
                    let z2 = random_disk(rng) * cap * 0.999;
                    ComplexPoint::two(z1, z2)
                }
                DomainSpec::SublevelDcg(_) => {
                    let dir = random_unit(rng, 2);
                    let r = SublevelParams::OUTER_RADIUS * uniform(rng);
                    dir.scale(Cplx::new(r, 0.0))
                }
                DomainSpec::Pushforward { source, map } => {
                    let pre = source.sample_interior(rng, 1);
                    match pre.first().map(|q| map.apply(q)) {
                        Some(Ok(img)) => img,
                        _ => continue,
                    }
                }
            };
            if matches!(self.contains(&p), Ok(m) if m > 1e-12) {
                out.push(p);
            }
        }
        out
    }
}

/// Uniform f64 in [0, 1) from a raw RNG stream.
pub fn uniform(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_in(rng: &mut dyn RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// Uniform point of the closed unit disk in C.
pub fn random_disk(rng: &mut dyn RngCore) -> Cplx {
    let r = uniform(rng).sqrt();
    let th = uniform(rng) * 2.0 * core::f64::consts::PI;
    Cplx::new(r * th.cos(), r * th.sin())
}

/// Deterministic unit directions: roots of unity for n = 1, a Hopf-coordinate
/// low-discrepancy set on S³ for n = 2.
pub fn deterministic_directions(dim: usize, count: usize) -> Vec<ComplexPoint> {
    let mut out = Vec::with_capacity(count);
    if dim == 1 {
        for j in 0..count {
            let th = 2.0 * core::f64::consts::PI * j as f64 / count.max(1) as f64;
            out.push(ComplexPoint::one(Cplx::new(th.cos(), th.sin())));
        }
        return out;
    }
    // coordinate axes first: they probe product degeneracies exactly
    out.push(ComplexPoint::two(Cplx::new(1.0, 0.0), Cplx::ZERO));
    if count > 1 {
        out.push(ComplexPoint::two(Cplx::ZERO, Cplx::new(1.0, 0.0)));
    }
    // R2 sequence angles with stratified cos²η; covers S³ evenly.
    const A1: f64 = 0.7548776662466927;
    const A2: f64 = 0.5698402909980532;
    for j in out.len()..count {
        let u = (j as f64 + 0.5) / count.max(1) as f64;
        let eta = u.sqrt().min(1.0).acos();
        let p1 = 2.0 * core::f64::consts::PI * ((j as f64 * A1).fract());
        let p2 = 2.0 * core::f64::consts::PI * ((j as f64 * A2).fract());
        let (c, s) = (eta.cos(), eta.sin());
        out.push(ComplexPoint::two(
            Cplx::new(c * p1.cos(), c * p1.sin()),
            Cplx::new(s * p2.cos(), s * p2.sin()),
        ));
    }
    out
}

/// Uniform unit vector of C^n (surface measure).
pub fn random_unit(rng: &mut dyn RngCore, dim: usize) -> ComplexPoint {
    loop {
        let mut c = [Cplx::ZERO; 2];
        let mut nsq = 0.0;
        for slot in c.iter_mut().take(dim) {
            // Box-Muller pairs give an isotropic Gaussian.
            let u1 = uniform(rng).max(1e-300);
            let u2 = uniform(rng);
            let rho = (-2.0 * u1.ln()).sqrt();
            let ang = 2.0 * core::f64::consts::PI * u2;
            *slot = Cplx::new(rho * ang.cos(), rho * ang.sin());
            nsq += slot.norm_sqr();
        }
        if nsq > 1e-12 {
            let inv = Cplx::new(1.0 / nsq.sqrt(), 0.0);
            let p = ComplexPoint { dim, c };
            return p.scale(inv);
        }
    }
}

/// Holomorphic map kinds supported between the shipped models.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    /// C^2 → C, z ↦ z_index.
    CoordProjection { index: usize },
    /// Unit-disk Möbius applied to one coordinate: z_i ↦ (z_i − a)/(1 − ā z_i).
    MoebiusCoord { index: usize, a: Cplx },
    /// Coordinate-wise Möbius product (automorphism of the unit polydisk).
    MoebiusProduct { a: Vec<Cplx> },
    /// F(z) = (z₁, z₁z₂).
    HartogsFold,
    /// Involutive automorphism of the unit ball exchanging w and 0.
    BallAutomorphism { w: ComplexPoint },
    /// Disk parameter slice ζ ↦ base + ζ·dir.
    AffineSlice { base: ComplexPoint, dir: ComplexPoint },
    /// (z₁, z₂) ↦ (z₂, z₁).
    CoordSwap,
    Compose(Vec<MapKind>),
}

impl MapKind {
    pub fn apply(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        Ok(match self {
            MapKind::Identity => *p,
            MapKind::CoordProjection { index } => ComplexPoint::one(p.coord(*index)),
            MapKind::MoebiusCoord { index, a } => {
                let mut q = *p;
                q.c[*index] = moebius(p.coord(*index), *a);
                q
            }
            MapKind::MoebiusProduct { a } => {
                let mut q = *p;
                for (i, &ai) in a.iter().enumerate() {
                    q.c[i] = moebius(p.coord(i), ai);
                }
                q
            }
            MapKind::HartogsFold => ComplexPoint::two(p.coord(0), p.coord(0) * p.coord(1)),
            MapKind::BallAutomorphism { w } => ball_automorphism(w, p),
            MapKind::AffineSlice { base, dir } => base.add(&dir.scale(p.coord(0))),
            MapKind::CoordSwap => ComplexPoint::two(p.coord(1), p.coord(0)),
            MapKind::Compose(chain) => {
                let mut q = *p;
                for m in chain {
                    q = m.apply(&q)?;
                }
                q
            }
        })
    }

    pub fn invert(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        Ok(match self {
            MapKind::Identity => *p,
            MapKind::MoebiusCoord { index, a } => {
                let mut q = *p;
                q.c[*index] = moebius(p.coord(*index), -*a);
                q
            }
            MapKind::MoebiusProduct { a } => {
                let mut q = *p;
                for (i, &ai) in a.iter().enumerate() {
                    q.c[i] = moebius(p.coord(i), -ai);
                }
                q
            }
            MapKind::BallAutomorphism { w } => ball_automorphism(w, p),
            MapKind::HartogsFold => {
                let z1 = p.coord(0);
                if z1.norm() < 1e-14 {
                    return Err(Error::Unsupported("HartogsFold is not invertible at z₁ = 0".into()));
                }
                ComplexPoint::two(z1, p.coord(1) / z1)
            }
            MapKind::AffineSlice { base, dir } => {
                // Least-squares parameter, then consistency check.
                let d = p.sub(base);
                let t = d.inner(dir) / Cplx::new(dir.norm_sqr(), 0.0);
                let rec = base.add(&dir.scale(t));
                if rec.dist(p) > 1e-9 * (1.0 + p.norm()) {
                    return Err(Error::OutsideDomain { margin: -rec.dist(p) });
                }
                ComplexPoint::one(t)
            }
            MapKind::CoordSwap => ComplexPoint::two(p.coord(1), p.coord(0)),
            MapKind::Compose(chain) => {
                let mut q = *p;
                for m in chain.iter().rev() {
                    q = m.invert(&q)?;
                }
                q
            }
            MapKind::CoordProjection { .. } => {
                return Err(Error::Unsupported("coordinate projection is not invertible".into()))
            }
        })
    }
}

pub fn moebius(z: Cplx, a: Cplx) -> Cplx {
    (z - a) / (Cplx::new(1.0, 0.0) - a.conj() * z)
}

/// φ_w(z) for the unit ball of C^n; φ_w(0) = w, φ_w(w) = 0, involutive.
pub fn ball_automorphism(w: &ComplexPoint, z: &ComplexPoint) -> ComplexPoint {
    let wn2 = w.norm_sqr();
    if wn2 == 0.0 {
        return z.scale(Cplx::new(-1.0, 0.0));
    }
    let s = (1.0 - wn2).max(0.0).sqrt();
    let zw = z.inner(w);
    let proj = w.scale(zw / Cplx::new(wn2, 0.0));
    let orth = z.sub(&proj);
    let num = w.sub(&proj).sub(&orth.scale(Cplx::new(s, 0.0)));
    let den = Cplx::new(1.0, 0.0) - zw;
    num.scale(den.inv())
}

/// A map kind together with declared source and target domains; construction
/// spot-checks that sampled source points land inside the target.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloMap {
    kind: MapKind,
    source: DomainSpec,
    target: DomainSpec,
}

impl HoloMap {
    pub fn new(kind: MapKind, source: DomainSpec, target: DomainSpec) -> Result<Self> {
        let map = Self { kind, source, target };
        map.spot_check(1000, 0x9e3779b97f4a7c15)?;
        Ok(map)
    }

    /// Construction without the sampling check, for maps used as plumbing
    /// (e.g. inside Pushforward specs referencing themselves).
    pub fn new_unchecked(kind: MapKind, source: DomainSpec, target: DomainSpec) -> Self {
        Self { kind, source, target }
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn source(&self) -> &DomainSpec {
        &self.source
    }

    pub fn target(&self) -> &DomainSpec {
        &self.target
    }

    pub fn target_dim(&self) -> usize {
        self.target.dim()
    }

    fn spot_check(&self, samples: usize, seed: u64) -> Result<()> {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pts = self.source.sample_interior(&mut rng, samples);
        if pts.len() < samples / 2 {
            return Err(Error::InvalidParameter("source sampler starved".into()));
        }
        for p in &pts {
            let img = self.kind.apply(p)?;
            let m = self.target.contains(&img)?;
            if m <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "map sends a sampled source point outside the target (margin {m})"
                )));
            }
        }
        Ok(())
    }

    /// Applies the map; errors if `p` is outside the declared source.
    pub fn apply(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        let m = self.source.contains(p)?;
        if m < -1e-12 {
            return Err(Error::OutsideDomain { margin: m });
        }
        self.kind.apply(p)
    }

    pub fn invert(&self, p: &ComplexPoint) -> Result<ComplexPoint> {
        self.kind.invert(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt2(x: f64, y: f64) -> ComplexPoint {
        ComplexPoint::two(Cplx::new(x, 0.0), Cplx::new(y, 0.0))
    }

    #[test]
    fn ball_margin_examples() {
        let ball = DomainSpec::unit_ball(2);
        assert_relative_eq!(ball.contains(&pt2(0.5, 0.0)).unwrap(), 0.5, epsilon = 1e-15);
        assert_relative_eq!(ball.contains(&pt2(1.0, 0.0)).unwrap(), 0.0, epsilon = 1e-15);
        assert!(ball.contains(&pt2(1.2, 0.0)).unwrap() < 0.0);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let ball = DomainSpec::unit_ball(2);
        let p = ComplexPoint::one(Cplx::new(0.1, 0.0));
        assert!(matches!(ball.contains(&p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sublevel_constraints_hold_to_1e12() {
        let params = SublevelParams::default_instance();
        let mass: f64 = params.k().iter().sum();
        let logsum: f64 = params.k().iter().zip(params.c()).map(|(k, c)| k * c.ln()).sum();
        assert!((mass - 1.0).abs() <= 1e-12);
        assert!((logsum + LN_2).abs() <= 1e-12);
        assert!(params.c()[0] > 0.5 && params.c()[0] < 1.0);
    }

    #[test]
    fn sublevel_u_at_half_is_minus_three_halves_log2() {
        // v(1/2, 0) = Σ k_j log(c_j/2) = −2 log 2, so u = −(3/2) log 2.
        let params = SublevelParams::default_instance();
        let z = pt2(0.5, 0.0);
        assert_relative_eq!(params.u(&z), -1.5 * LN_2, epsilon = 1e-12);
        let dom = DomainSpec::SublevelDcg(params);
        let m = dom.contains(&z).unwrap();
        assert_relative_eq!(m, 1.5 * LN_2, epsilon = 1e-12);
    }

    #[test]
    fn sublevel_slice_radius_matches_hand_computation() {
        let params = SublevelParams::default_instance();
        // Direction (1, 0): C(ω) = Σ k_j log c_j = −log 2, radius √2.
        let dir = pt2(1.0, 0.0);
        assert_relative_eq!(params.slice_radius(&dir), 2.0f64.sqrt(), epsilon = 1e-12);
        // Along a removed line the slice radius caps at 8.
        let c1 = params.c()[0];
        let n = (1.0 + c1 * c1).sqrt();
        let on_line = pt2(1.0 / n, c1 / n);
        assert_relative_eq!(params.slice_radius(&on_line), 8.0, epsilon = 1e-9);
    }

    #[test]
    fn hartogs_shipped_constraints() {
        let params = HartogsParams::default_instance();
        let logsum: f64 = params.k().iter().zip(params.c()).map(|(k, c)| k * c.ln()).sum();
        assert_relative_eq!(logsum, -0.9, epsilon = 1e-12);
        assert!(params.z2_bound() > core::f64::consts::E);
        // v ≤ 0 on the disk and v(0) = Σ k_j log c_j.
        assert_relative_eq!(params.v(Cplx::ZERO), -0.9, epsilon = 1e-12);
    }

    #[test]
    fn hartogs_fold_example() {
        let f = MapKind::HartogsFold;
        let p = pt2(0.5, 0.5);
        let img = f.apply(&p).unwrap();
        assert_relative_eq!(img.coord(0).re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(img.coord(1).re, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn ball_automorphism_moves_w_to_origin() {
        let w = pt2(0.3, 0.2);
        let img = ball_automorphism(&w, &w);
        assert!(img.norm() <= 1e-12);
        let back = ball_automorphism(&w, &ComplexPoint::origin(2));
        assert!(back.dist(&w) <= 1e-12);
        // involution on a generic point
        let z = pt2(0.1, -0.4);
        let twice = ball_automorphism(&w, &ball_automorphism(&w, &z));
        assert!(twice.dist(&z) <= 1e-12);
    }

    #[test]
    fn ball_automorphism_norm_identity() {
        // 1 − ‖φ_w(z)‖² = (1 − ‖w‖²)(1 − ‖z‖²)/|1 − ⟨z, w⟩|²
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let ball = DomainSpec::unit_ball(2);
        let pts = ball.sample_interior(&mut rng, 200);
        for pair in pts.chunks(2) {
            if pair.len() < 2 {
                continue;
            }
            let (z, w) = (&pair[0], &pair[1]);
            let lhs = 1.0 - ball_automorphism(w, z).norm_sqr();
            let den = (Cplx::new(1.0, 0.0) - z.inner(w)).norm_sqr();
            let rhs = (1.0 - w.norm_sqr()) * (1.0 - z.norm_sqr()) / den;
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn holo_map_construction_spot_checks_containment() {
        // F maps the Hartogs domain into the unit bidisk.
        let hartogs = DomainSpec::HartogsPgvlu(HartogsParams::default_instance());
        let map = HoloMap::new(MapKind::HartogsFold, hartogs, DomainSpec::unit_bidisk());
        assert!(map.is_ok());

        // A dilation violating the target is rejected.
        let bad = HoloMap::new(
            MapKind::AffineSlice {
                base: ComplexPoint::origin(1),
                dir: ComplexPoint::one(Cplx::new(3.0, 0.0)),
            },
            DomainSpec::unit_disk(),
            DomainSpec::unit_disk(),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn apply_rejects_points_outside_source() {
        let map = HoloMap::new(
            MapKind::Identity,
            DomainSpec::unit_disk(),
            DomainSpec::unit_disk(),
        )
        .unwrap();
        let out = map.apply(&ComplexPoint::one(Cplx::new(2.0, 0.0)));
        assert!(matches!(out, Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn margin_is_lipschitz_on_samples() {
        use rand_chacha::rand_core::SeedableRng;
        // Per-domain constants on the sampled compacts; the sublevel model is
        // probed away from the lines z₂ = c_j z₁ where u has steep gradients.
        let params = SublevelParams::default_instance();
        let domains = [
            (DomainSpec::unit_ball(2), 1.5),
            (DomainSpec::unit_bidisk(), 1.5),
            (DomainSpec::SublevelDcg(params.clone()), 60.0),
        ];
        for (dom, lip) in domains {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            let pts = dom.sample_interior(&mut rng, 200);
            for p in &pts {
                if matches!(dom, DomainSpec::SublevelDcg(_)) {
                    let line_dist = params
                        .c()
                        .iter()
                        .map(|&c| (p.coord(1) - p.coord(0) * c).norm() / (1.0 + c * c).sqrt())
                        .fold(f64::INFINITY, f64::min);
                    if line_dist < 0.02 {
                        continue;
                    }
                }
                let h = 1e-5;
                let q = p.add(&ComplexPoint::two(Cplx::new(h, 0.0), Cplx::new(0.0, h)));
                if q.dim() != dom.dim() {
                    continue;
                }
                let (mp, mq) = (dom.contains(p).unwrap(), dom.contains(&q).unwrap());
                if mp.is_finite() && mq.is_finite() && mp > 0.05 {
                    assert!(
                        (mp - mq).abs() <= lip * p.dist(&q) + 1e-12,
                        "lipschitz violation on {dom:?}"
                    );
                }
            }
        }
    }
}
