//! Analytic-disk engine: polynomial disks with exact interpolation
//! constraints, containment certificates, the Poletsky functional, and the
//! multi-start searches producing certified upper bounds for g, k and R.
//!
//! A disk contributes a bound only after (a) its interpolation constraints
//! check out to 1e−12, (b) a containment certificate with positive slack, and
//! (c) for the Green functional, root localization of f − w over the closed
//! disk. Missing a preimage only weakens the bound (the hit sum over a subset
//! is larger), so certification failures degrade sharpness, never soundness.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

#[allow(unused_imports)]
use num_traits::Float;

use crate::bounds::BoundInterval;
use crate::config::SearchBudget;
use crate::error::{Error, Result};
use crate::geometry::{uniform_in, ComplexPoint, Direction, DomainSpec};
use crate::optim::{nelder_mead, restart_rng};
use crate::roots;
use crate::Cplx;

/// Polynomial analytic disk f: {|ζ| ≤ r} → C^n with interpolation data.
#[derive(Debug, Clone)]
pub struct AnalyticDisk {
    dim: usize,
    radius: f64,
    /// coeffs[i][k] multiplies ζ^k in coordinate i.
    coeffs: Vec<Vec<Cplx>>,
    /// Declared preimages of the target.
    hits: Vec<Cplx>,
    target: Option<ComplexPoint>,
}

impl AnalyticDisk {
    /// Disk with explicit coefficients and no interpolation structure.
    pub fn from_coeffs(coeffs: Vec<Vec<Cplx>>, radius: f64) -> Result<Self> {
        let dim = coeffs.len();
        if dim == 0 || dim > 2 || !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::InvalidParameter("need 1 ≤ dim ≤ 2 and r ∈ (0, 1]".into()));
        }
        Ok(Self { dim, radius, coeffs, hits: Vec::new(), target: None })
    }

    pub fn constant(z: &ComplexPoint) -> Self {
        let coeffs = z.coords().iter().map(|&c| vec![c]).collect();
        Self { dim: z.dim(), radius: 1.0, coeffs, hits: Vec::new(), target: None }
    }

    /// Green-mode disk: f(0) = z exactly, f(ζ_j) = w exactly for all hits,
    /// with the free part supplied per coordinate (degree ≤ degree−1 each)
    /// and a Lagrange correction on the hit nodes.
    pub fn interpolating(
        z: &ComplexPoint,
        w: &ComplexPoint,
        hits: &[Cplx],
        free: &[Vec<Cplx>],
        radius: f64,
    ) -> Result<Self> {
        let dim = z.dim();
        if w.dim() != dim || free.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: w.dim() });
        }
        for (a, h) in hits.iter().enumerate() {
            if h.norm() >= radius || h.norm() < 1e-9 {
                return Err(Error::InvalidParameter("hit outside (0, r) annulus".into()));
            }
            for other in &hits[a + 1..] {
                if (h - other).norm() < 1e-8 {
                    return Err(Error::InvalidParameter("coincident hits".into()));
                }
            }
        }
        // f_i(ζ) = z_i + ζ·s_i(ζ) with s_i = p_i + (Lagrange correction on hits)
        let mut coeffs = Vec::with_capacity(dim);
        for i in 0..dim {
            let p = &free[i];
            let mut s = p.clone();
            match hits.len() {
                0 => {}
                1 => {
                    let t = (w.coord(i) - z.coord(i)) / hits[0];
                    let pv = horner(p, hits[0]);
                    if s.is_empty() {
                        s.push(Cplx::ZERO);
                    }
                    s[0] += t - pv;
                }
                2 => {
                    let (za, zb) = (hits[0], hits[1]);
                    let ta = (w.coord(i) - z.coord(i)) / za - horner(p, za);
                    let tb = (w.coord(i) - z.coord(i)) / zb - horner(p, zb);
                    // degree-1 correction c0 + c1 ζ through (za, ta), (zb, tb)
                    let c1 = (ta - tb) / (za - zb);
                    let c0 = ta - c1 * za;
                    while s.len() < 2 {
                        s.push(Cplx::ZERO);
                    }
                    s[0] += c0;
                    s[1] += c1;
                }
                _ => return Err(Error::InvalidParameter("at most 2 hits supported".into())),
            }
            let mut c = Vec::with_capacity(s.len() + 1);
            c.push(z.coord(i));
            c.extend_from_slice(&s);
            coeffs.push(c);
        }
        let disk = Self { dim, radius, coeffs, hits: hits.to_vec(), target: Some(*w) };
        disk.check_interpolation(z, w)?;
        Ok(disk)
    }

    /// Royden-mode disk: f(0) = w, f'(0) = λ·v, higher coefficients free.
    pub fn jet(w: &ComplexPoint, v: &ComplexPoint, lambda: f64, free: &[Vec<Cplx>]) -> Result<Self> {
        let dim = w.dim();
        if v.dim() != dim || free.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
        }
        let mut coeffs = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut c = Vec::with_capacity(free[i].len() + 2);
            c.push(w.coord(i));
            c.push(v.coord(i) * lambda);
            c.extend_from_slice(&free[i]);
            coeffs.push(c);
        }
        Ok(Self { dim, radius: 1.0, coeffs, hits: Vec::new(), target: None })
    }

    fn check_interpolation(&self, z: &ComplexPoint, w: &ComplexPoint) -> Result<()> {
        let scale = 1.0 + z.norm().max(w.norm());
        let f0 = self.eval_unchecked(Cplx::ZERO);
        if f0.dist(z) > 1e-12 * scale {
            return Err(Error::InvalidParameter("interpolation failed at 0".into()));
        }
        for &h in &self.hits {
            let fh = self.eval_unchecked(h);
            if fh.dist(w) > 1e-12 * scale {
                return Err(Error::InvalidParameter("interpolation failed at a hit".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn hits(&self) -> &[Cplx] {
        &self.hits
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &[Vec<Cplx>] {
        &self.coeffs
    }

    fn eval_unchecked(&self, zeta: Cplx) -> ComplexPoint {
        let mut c = [Cplx::ZERO; 2];
        for i in 0..self.dim {
            c[i] = horner(&self.coeffs[i], zeta);
        }
        match self.dim {
            1 => ComplexPoint::one(c[0]),
            _ => ComplexPoint::two(c[0], c[1]),
        }
    }

    /// Horner evaluation; |ζ| must not exceed the nominal radius.
    pub fn eval(&self, zeta: Cplx) -> Result<ComplexPoint> {
        if zeta.norm() > self.radius * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "|ζ| = {} exceeds disk radius {}",
                zeta.norm(),
                self.radius
            )));
        }
        Ok(self.eval_unchecked(zeta))
    }

    /// f'(0) as a vector.
    pub fn derivative0(&self) -> ComplexPoint {
        let mut c = [Cplx::ZERO; 2];
        for i in 0..self.dim {
            c[i] = self.coeffs[i].get(1).copied().unwrap_or(Cplx::ZERO);
        }
        match self.dim {
            1 => ComplexPoint::one(c[0]),
            _ => ComplexPoint::two(c[0], c[1]),
        }
    }

    /// Precomposition with ζ ↦ s·ζ (0 < s < 1): shrinks the image, rescales
    /// hits by 1/s and drops those leaving the disk.
    pub fn precompose_shrink(&self, s: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut() {
            let mut p = 1.0;
            for a in c.iter_mut() {
                *a *= p;
                p *= s;
            }
        }
        let hits = self
            .hits
            .iter()
            .map(|h| h / s)
            .filter(|h| h.norm() < self.radius * 0.999)
            .collect();
        Self { dim: self.dim, radius: self.radius, coeffs, hits, target: self.target }
    }
}

fn horner(coeffs: &[Cplx], z: Cplx) -> Cplx {
    let mut acc = Cplx::ZERO;
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMethod {
    /// Sound alone when every defining function of the domain is PSH
    /// (ρ∘f is subharmonic, its max sits on the boundary circle).
    BoundaryOnly,
    FullDiskGrid,
}

/// Numerical containment certificate: minimum defining-function slack over
/// the sample set, strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentCertificate {
    pub samples: usize,
    pub min_slack: f64,
    pub method: CertMethod,
}

/// Minimum membership margin of the disk image over a boundary circle and,
/// optionally, interior rings.
fn min_margin(
    domain: &DomainSpec,
    disk: &AnalyticDisk,
    angles: usize,
    interior_radii: usize,
) -> f64 {
    let mut m = f64::INFINITY;
    let r = disk.radius();
    for j in 0..angles {
        let th = 2.0 * core::f64::consts::PI * j as f64 / angles as f64;
        let z = disk.eval_unchecked(Cplx::new(r * th.cos(), r * th.sin()));
        m = m.min(domain.contains(&z).unwrap_or(f64::NEG_INFINITY));
        if m == f64::NEG_INFINITY {
            return m;
        }
    }
    for i in 1..=interior_radii {
        let ri = r * i as f64 / (interior_radii + 1) as f64;
        for j in 0..angles {
            let th = 2.0 * core::f64::consts::PI * (j as f64 + 0.5) / angles as f64;
            let z = disk.eval_unchecked(Cplx::new(ri * th.cos(), ri * th.sin()));
            m = m.min(domain.contains(&z).unwrap_or(f64::NEG_INFINITY));
        }
    }
    m
}

/// Certify that the disk image lies in the domain with positive slack.
pub fn certify_containment(
    domain: &DomainSpec,
    disk: &AnalyticDisk,
    cfg: &SearchBudget,
) -> Result<ContainmentCertificate> {
    let (method, slack, samples) = if domain.all_defining_psh() {
        let s = min_margin(domain, disk, cfg.boundary_samples, 0);
        (CertMethod::BoundaryOnly, s, cfg.boundary_samples)
    } else {
        let s = min_margin(domain, disk, cfg.grid_angles, cfg.grid_radii);
        (CertMethod::FullDiskGrid, s, cfg.grid_angles * (cfg.grid_radii + 1))
    };
    if slack > 0.0 {
        Ok(ContainmentCertificate { samples, min_slack: slack, method })
    } else {
        Err(Error::Infeasible(format!("containment slack {slack} ≤ 0")))
    }
}

/// Certified value of the Poletsky functional H_w(f) = Σ log(|ζ_j| / r).
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedFunctional {
    pub value: f64,
    /// False when root localization was inconclusive; the value is still a
    /// valid upper bound from the declared hits alone.
    pub certified: bool,
    pub hits_counted: usize,
}

/// Evaluates H_w(f) over the declared hits, then searches the closed disk for
/// undeclared preimages of w by per-coordinate root localization; genuine
/// extra preimages are added (the bound only improves).
pub fn poletsky_functional(
    disk: &AnalyticDisk,
    w: &ComplexPoint,
    tol: f64,
) -> Result<CertifiedFunctional> {
    if disk.hits().is_empty() {
        return Err(Error::InvalidParameter("disk declares no hits".into()));
    }
    let scale = 1.0 + w.norm();
    for &h in disk.hits() {
        let fh = disk.eval_unchecked(h);
        if fh.dist(w) > 1e-10 * scale {
            return Err(Error::InvalidParameter("declared hit is not a preimage".into()));
        }
    }
    let r = disk.radius();
    let mut value: f64 = disk.hits().iter().map(|h| (h.norm() / r).ln()).sum();
    let mut counted = disk.hits().len();

    // Candidate preimages: union of roots of each coordinate equation.
    let mut certified = true;
    let mut candidates: Vec<Cplx> = Vec::new();
    for i in 0..disk.dim() {
        let mut shifted = disk.coefficients()[i].clone();
        if let Some(c0) = shifted.first_mut() {
            *c0 -= w.coord(i);
        }
        let coeff_scale = shifted.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if coeff_scale <= 1e-13 * scale {
            // coordinate identically w_i: no constraint from it
            continue;
        }
        match roots::roots_in_disk(&shifted, r, 1e-9, tol) {
            Ok(rs) => candidates.extend(rs),
            Err(_) => {
                certified = false;
            }
        }
    }
    let mut extra: Vec<Cplx> = Vec::new();
    'cand: for c in candidates {
        let img = disk.eval_unchecked(c);
        if img.dist(w) > 1e-8 * scale {
            continue;
        }
        for &h in disk.hits() {
            if (c - h).norm() < 1e-5 * (1.0 + r) {
                continue 'cand;
            }
        }
        for e in &extra {
            if (c - e).norm() < 1e-7 {
                continue 'cand;
            }
        }
        extra.push(c);
    }
    for e in extra {
        value += (e.norm().max(1e-300) / r).ln();
        counted += 1;
    }
    Ok(CertifiedFunctional { value, certified, hits_counted: counted })
}

// ---------------------------------------------------------------------------
// Search engines
// ---------------------------------------------------------------------------

struct GreenProblem<'a> {
    domain: &'a DomainSpec,
    z: ComplexPoint,
    w: ComplexPoint,
    degree: usize,
    hits: usize,
    search_angles: usize,
    search_radii: usize,
}

impl GreenProblem<'_> {
    fn dims(&self) -> usize {
        2 * self.hits + 2 * self.z.dim() * self.degree
    }

    fn decode(&self, x: &[f64]) -> Option<AnalyticDisk> {
        let n = self.z.dim();
        let mut hits: Vec<Cplx> = Vec::with_capacity(self.hits);
        for j in 0..self.hits {
            let h = Cplx::new(x[2 * j], x[2 * j + 1]);
            if h.norm() >= 0.985 || h.norm() < 1e-6 {
                return None;
            }
            if hits.iter().any(|prev| (h - prev).norm() < 1e-5) {
                return None;
            }
            hits.push(h);
        }
        let mut free = Vec::with_capacity(n);
        let base = 2 * self.hits;
        for i in 0..n {
            let mut p = Vec::with_capacity(self.degree);
            for k in 0..self.degree {
                let o = base + 2 * (i * self.degree + k);
                p.push(Cplx::new(x[o], x[o + 1]));
            }
            free.push(p);
        }
        AnalyticDisk::interpolating(&self.z, &self.w, &hits, &free, 1.0).ok()
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let disk = match self.decode(x) {
            Some(d) => d,
            None => return 1e9,
        };
        let h: f64 = disk.hits().iter().map(|h| h.norm().ln()).sum();
        let interior = if self.domain.all_defining_psh() { 0 } else { self.search_radii };
        let margin = min_margin(self.domain, &disk, self.search_angles, interior);
        let slack = 1e-3;
        let viol = (slack - margin).max(0.0);
        h + 1e4 * viol * viol
    }
}

/// Best feasible disk radius (in the line parameter t around `t_center`) such
/// that {L(t): |t − t_center| < ρ} stays inside the domain, by bisection on
/// sampled circles; L(t) = z + t·(w − z).
fn line_disk_radius(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    t_center: f64,
    cap: f64,
) -> f64 {
    let dir = w.sub(z);
    let feasible = |rho: f64| -> bool {
        for j in 0..24 {
            let th = 2.0 * core::f64::consts::PI * j as f64 / 24.0;
            let t = Cplx::new(t_center + rho * th.cos(), rho * th.sin());
            let p = z.add(&dir.scale(t));
            if !matches!(domain.contains(&p), Ok(m) if m > 0.0) {
                return false;
            }
        }
        true
    };
    if !feasible(1e-6) {
        return 0.0;
    }
    let mut lo = 1e-6;
    let mut hi = cap;
    if feasible(hi) {
        return hi;
    }
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Chord initialization: parameterize the largest found line disk through z
/// and w by a truncated Möbius reparameterization sending 0 to z, and return
/// (hit, free coefficients) in optimizer layout.
fn chord_init(problem: &GreenProblem<'_>) -> Option<Vec<f64>> {
    let (z, w) = (&problem.z, &problem.w);
    let mut best: Option<(f64, f64, f64)> = None; // (|hit|, t_center, rho)
    for &tc in &[-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.5] {
        let rho = line_disk_radius(problem.domain, z, w, tc, 64.0) * 0.97;
        let need = tc.abs().max((1.0 - tc).abs());
        if rho <= need * 1.02 {
            continue;
        }
        let tau_z = -tc / rho;
        let tau_w = (1.0 - tc) / rho;
        let hit = ((tau_w - tau_z) / (1.0 - tau_z * tau_w)).abs();
        if hit < 0.98 && best.map(|(b, _, _)| hit < b).unwrap_or(true) {
            best = Some((hit, tc, rho));
        }
    }
    let (_, tc, rho) = best?;
    let a = -tc / rho; // b(0) = a, Möbius b(ζ) = (ζ + a)/(1 + aζ)
    let tau_w = (1.0 - tc) / rho;
    let hit = (tau_w - a) / (1.0 - a * tau_w);

    // f(ζ) = z + (w − z)(tc + ρ·b(ζ)); Taylor: b − a = (1 − a²) Σ (−a)^{k−1} ζ^k
    // so s_i(ζ) = (f_i − z_i)/ζ has coefficients (w_i − z_i)·ρ(1 − a²)(−a)^{k−1}.
    let n = z.dim();
    let mut x = vec![0.0; problem.dims()];
    x[0] = hit;
    x[1] = 0.0;
    for j in 1..problem.hits {
        // secondary hits start collapsed near the rim, effectively inactive
        x[2 * j] = -0.9 + 0.05 * j as f64;
        x[2 * j + 1] = 0.02 * j as f64;
    }
    let base = 2 * problem.hits;
    for i in 0..n {
        let di = w.coord(i) - z.coord(i);
        let mut factor = rho * (1.0 - a * a);
        for k in 0..problem.degree {
            let c = di * factor;
            let o = base + 2 * (i * problem.degree + k);
            x[o] = c.re;
            x[o + 1] = c.im;
            factor *= -a;
        }
    }
    Some(x)
}

/// Polydisk initialization from the coordinate-Möbius extremal curve
/// g_i(ζ) = m_{ẑ_i}^{-1}(ζ·u_i), which hits ŵ at ζ = ρ = max pseudo-hyperbolic
/// coordinate distance; Taylor coefficients are geometric.
fn polydisk_init(problem: &GreenProblem<'_>) -> Option<Vec<f64>> {
    let (center, radii) = match problem.domain {
        DomainSpec::Polydisk { center, radii } => (center, radii),
        _ => return None,
    };
    let (z, w) = (&problem.z, &problem.w);
    let n = z.dim();
    let mut m = [Cplx::ZERO; 2];
    let mut a = [Cplx::ZERO; 2];
    let mut rho = 0.0f64;
    for i in 0..n {
        a[i] = (z.coord(i) - center.coord(i)) / radii[i];
        let wh = (w.coord(i) - center.coord(i)) / radii[i];
        m[i] = crate::geometry::moebius(wh, a[i]);
        rho = rho.max(m[i].norm());
    }
    let shrink = 0.995;
    let hit = rho / shrink;
    if !(1e-6..0.98).contains(&hit) {
        return None;
    }
    let mut x = vec![0.0; problem.dims()];
    x[0] = hit;
    for j in 1..problem.hits {
        x[2 * j] = -0.9 + 0.05 * j as f64;
        x[2 * j + 1] = 0.02 * j as f64;
    }
    let base = 2 * problem.hits;
    for i in 0..n {
        // (f_i − z_i)/ζ = r_i·u_i(1 − |a_i|²)·Σ_k (−ā_i u_i)^k s^{k+1} ζ^k
        let u = if rho > 0.0 { m[i] / rho } else { Cplx::ZERO };
        let mut factor = u * (1.0 - a[i].norm_sqr()) * radii[i] * shrink;
        for k in 0..problem.degree {
            let o = base + 2 * (i * problem.degree + k);
            x[o] = factor.re;
            x[o + 1] = factor.im;
            factor *= -a[i].conj() * u * shrink;
        }
    }
    Some(x)
}

fn random_init(problem: &GreenProblem<'_>, rng: &mut dyn RngCore) -> Vec<f64> {
    let mut x = vec![0.0; problem.dims()];
    for j in 0..problem.hits {
        let r = uniform_in(rng, 0.15, 0.85);
        let th = uniform_in(rng, 0.0, 2.0 * core::f64::consts::PI);
        x[2 * j] = r * th.cos();
        x[2 * j + 1] = r * th.sin();
    }
    let span = problem.z.dist(&problem.w).max(0.1);
    for v in x.iter_mut().skip(2 * problem.hits) {
        *v = uniform_in(rng, -span, span);
    }
    x
}

/// Shared candidate polish: certify, shrinking the parameter if needed, then
/// evaluate the certified functional.
fn certify_and_value(
    domain: &DomainSpec,
    disk: &AnalyticDisk,
    w: &ComplexPoint,
    cfg: &SearchBudget,
    count_undeclared: bool,
) -> Option<(f64, AnalyticDisk, bool)> {
    for &s in &[1.0, 0.998, 0.99, 0.97, 0.93, 0.85] {
        let cand = if s == 1.0 { disk.clone() } else { disk.precompose_shrink(s) };
        if cand.hits().is_empty() {
            continue;
        }
        if certify_containment(domain, &cand, cfg).is_err() {
            continue;
        }
        if count_undeclared {
            match poletsky_functional(&cand, w, 1e-9) {
                Ok(cv) => return Some((cv.value, cand, cv.certified)),
                Err(_) => continue,
            }
        } else {
            // Kobayashi counts the declared hit only.
            let r = cand.radius();
            let val: f64 = cand.hits().iter().map(|h| (h.norm() / r).ln()).fold(f64::INFINITY, f64::min);
            return Some((val, cand, true));
        }
    }
    None
}

fn engine_entry_checks(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<Option<BoundInterval>> {
    let mz = domain.contains(z)?;
    let mw = domain.contains(w)?;
    if mz <= 0.0 {
        return Err(Error::OutsideDomain { margin: mz });
    }
    if mw <= 0.0 {
        return Err(Error::OutsideDomain { margin: mw });
    }
    if z.dist(w) == 0.0 {
        return Ok(Some(BoundInterval::pole()));
    }
    Ok(None)
}

/// Upper bound for the Green function via optimized multi-hit disks.
/// Always ≥ the true g; +∞ sentinel (as `Infeasible`) when no certified disk
/// was found within budget.
pub fn upper_bound_green(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    cfg: &SearchBudget,
) -> Result<BoundInterval> {
    if let Some(pole) = engine_entry_checks(domain, z, w)? {
        return Ok(pole);
    }
    search_hits_engine(domain, z, w, cfg, true, "green_disk")
}

/// Upper bound for the Kobayashi function via single-hit disks. Also a valid
/// upper bound for g (c ≤ g ≤ k). The Kobayashi function is symmetric, so the
/// search runs from both anchors and keeps the better certified disk — a
/// central anchor keeps the polynomial truncation of the extremal curve small.
pub fn kobayashi_bound(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    cfg: &SearchBudget,
) -> Result<BoundInterval> {
    if let Some(pole) = engine_entry_checks(domain, z, w)? {
        return Ok(pole);
    }
    let single = SearchBudget { max_hits: 1, ..cfg.clone() };
    let forward = search_hits_engine(domain, z, w, &single, false, "kobayashi_disk");
    let backward = search_hits_engine(domain, w, z, &single, false, "kobayashi_disk_rev");
    match (forward, backward) {
        (Ok(a), Ok(b)) => Ok(if a.hi <= b.hi { a } else { b }),
        (Ok(a), Err(_)) => Ok(a),
        (Err(_), Ok(b)) => Ok(b),
        (Err(e), Err(_)) => Err(e),
    }
}

fn search_hits_engine(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    cfg: &SearchBudget,
    count_undeclared: bool,
    tag: &str,
) -> Result<BoundInterval> {
    let mut best: Option<(f64, String, bool)> = None;
    let hit_plans: &[usize] = if cfg.max_hits >= 2 { &[1, 2] } else { &[1] };
    for &hits in hit_plans {
        let problem = GreenProblem {
            domain,
            z: *z,
            w: *w,
            degree: cfg.degree.max(1),
            hits,
            search_angles: 32,
            search_radii: 6,
        };
        let restarts = if hits == 1 {
            cfg.restarts.max(1)
        } else {
            (cfg.restarts / 3).max(1)
        };
        for i in 0..restarts {
            let mut rng = restart_rng(cfg.seed ^ fxhash(tag) ^ (hits as u64) << 32, i);
            let x0 = if i == 0 {
                polydisk_init(&problem)
                    .or_else(|| chord_init(&problem))
                    .unwrap_or_else(|| random_init(&problem, &mut rng))
            } else if i == 1 && hits == 1 {
                // perturbed structured start
                match polydisk_init(&problem).or_else(|| chord_init(&problem)) {
                    Some(mut x) => {
                        for v in x.iter_mut() {
                            *v += uniform_in(&mut rng, -0.05, 0.05);
                        }
                        x
                    }
                    None => random_init(&problem, &mut rng),
                }
            } else {
                random_init(&problem, &mut rng)
            };
            let scale = vec![0.05; problem.dims()];
            let mut f = |x: &[f64]| problem.objective(x);
            let (xbest, _) = nelder_mead(&mut f, &x0, &scale, cfg.simplex_iters, 1e-10);
            let disk = match problem.decode(&xbest) {
                Some(d) => d,
                None => continue,
            };
            if let Some((val, cand, certified)) =
                certify_and_value(domain, &disk, w, cfg, count_undeclared)
            {
                let wit = format!("{tag}:deg{}_hits{}", cand.degree(), cand.hits().len());
                if best.as_ref().map(|(b, _, _)| val < *b).unwrap_or(true) {
                    best = Some((val, wit, certified));
                }
            }
        }
    }
    match best {
        Some((val, wit, certified)) => Ok(BoundInterval::upper(val, wit, certified)),
        None => Err(Error::Infeasible("no certified disk found within budget".into())),
    }
}

/// Extremal-jet initialization for the Royden search on balls and polydisks:
/// the automorphism orbit ζ ↦ φ(ζ·u) has geometric Taylor coefficients and
/// realizes the metric value; truncation plus a small shrink seeds the
/// optimizer at near-optimal λ.
fn royden_jet_init(
    domain: &DomainSpec,
    w: &ComplexPoint,
    v: &ComplexPoint,
    degree: usize,
) -> Option<(f64, Vec<Vec<Cplx>>)> {
    let shrink = 0.995;
    match domain {
        DomainSpec::Polydisk { center, radii } => {
            let n = w.dim();
            let mut lambda = f64::INFINITY;
            let mut wh = [Cplx::ZERO; 2];
            for i in 0..n {
                wh[i] = (w.coord(i) - center.coord(i)) / radii[i];
                let vn = v.coord(i).norm();
                if vn > 0.0 {
                    lambda = lambda.min(radii[i] * (1.0 - wh[i].norm_sqr()) / vn);
                }
            }
            if !(lambda.is_finite() && lambda > 0.0) {
                return None;
            }
            let lambda = lambda * shrink;
            // f_i(ζ) = c_i + r_i·m_{−ŵ_i}(u_i ζ) with u_i = λv_i/(r_i(1−|ŵ_i|²));
            // free part holds the ζ^k coefficients for k ≥ 2
            let mut free = Vec::with_capacity(n);
            for i in 0..n {
                let u = v.coord(i) * (lambda / (radii[i] * (1.0 - wh[i].norm_sqr())));
                let mut p = Vec::with_capacity(degree.saturating_sub(1).max(1));
                let base = -wh[i].conj() * u;
                let mut factor = radii[i] * (1.0 - wh[i].norm_sqr()) * u * base;
                for _ in 2..=degree.max(2) {
                    p.push(factor);
                    factor *= base;
                }
                free.push(p);
            }
            Some((lambda, free))
        }
        DomainSpec::Ball { center, radius } => {
            let n = w.dim();
            let inv = Cplx::new(1.0 / radius, 0.0);
            let wh = w.sub(center).scale(inv);
            let a2 = wh.norm_sqr();
            if a2 >= 1.0 {
                return None;
            }
            let s = (1.0 - a2).sqrt();
            // u solves Dφ_ŵ(0)u = λ v̂ with Dφ(0) = −(1−‖ŵ‖²)P − sQ
            let split = |x: &ComplexPoint| -> (ComplexPoint, ComplexPoint) {
                if a2 == 0.0 {
                    (ComplexPoint::origin(n), *x)
                } else {
                    let proj = wh.scale(x.inner(&wh) / Cplx::new(a2, 0.0));
                    (proj, x.sub(&proj))
                }
            };
            let vh = v.scale(inv);
            let (pv, qv) = split(&vh);
            let scaled = pv
                .scale(Cplx::new(1.0 / (1.0 - a2), 0.0))
                .add(&qv.scale(Cplx::new(1.0 / s, 0.0)));
            let norm = scaled.norm();
            if norm == 0.0 {
                return None;
            }
            let lambda = shrink / norm;
            let u = scaled.scale(Cplx::new(-lambda, 0.0));
            // φ_ŵ(ζu) = (ŵ − ζAu)/(1 − ζβ), β = ⟨u, ŵ⟩, A = P + sQ:
            // coefficient of ζ^k is β^{k−1}(βŵ − Au) for k ≥ 1
            let beta = u.inner(&wh);
            let (pu, qu) = split(&u);
            let au = pu.add(&qu.scale(Cplx::new(s, 0.0)));
            let lead = wh.scale(beta).sub(&au);
            let mut coeffs: Vec<Vec<Cplx>> = vec![Vec::new(); n];
            let mut factor = beta;
            for _ in 2..=degree.max(2) {
                let c = lead.scale(factor * Cplx::new(*radius, 0.0));
                for (i, slot) in coeffs.iter_mut().enumerate() {
                    slot.push(c.coord(i));
                }
                factor *= beta;
            }
            Some((lambda, coeffs))
        }
        _ => None,
    }
}

/// Upper bound for the Royden function: maximize λ over certified unit disks
/// with f(0) = w, f'(0) = λ·v; returns −log λ_best ≥ R(w, v).
pub fn royden_bound(
    domain: &DomainSpec,
    dir: &Direction,
    cfg: &SearchBudget,
) -> Result<BoundInterval> {
    let w = dir.base;
    let mw = domain.contains(&w)?;
    if mw <= 0.0 {
        return Err(Error::OutsideDomain { margin: mw });
    }
    let v = dir.vector;
    let n = w.dim();
    let free_len = cfg.degree.saturating_sub(1).max(1);

    // Largest λ with the bare linear disk contained, by bisection.
    let linear_feasible = |lambda: f64| -> bool {
        let free = vec![Vec::new(); n];
        match AnalyticDisk::jet(&w, &v, lambda, &free) {
            Ok(d) => min_margin(domain, &d, 48, if domain.all_defining_psh() { 0 } else { 6 }) > 0.0,
            Err(_) => false,
        }
    };
    let mut lo = 0.0;
    let mut hi = 1e-3;
    while linear_feasible(hi) && hi < 1e6 {
        lo = hi;
        hi *= 2.0;
    }
    if lo == 0.0 {
        return Err(Error::Infeasible("no feasible jet scale".into()));
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if linear_feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda_line = lo;

    let decode = |x: &[f64]| -> Option<(f64, AnalyticDisk)> {
        let lambda = x[0].exp();
        if !(1e-9..1e9).contains(&lambda) {
            return None;
        }
        let mut free = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = Vec::with_capacity(free_len);
            for k in 0..free_len {
                let o = 1 + 2 * (i * free_len + k);
                p.push(Cplx::new(x[o], x[o + 1]));
            }
            free.push(p);
        }
        AnalyticDisk::jet(&w, &v, lambda, &free).ok().map(|d| (lambda, d))
    };
    let dims = 1 + 2 * n * free_len;
    let jet_init = royden_jet_init(domain, &w, &v, cfg.degree.max(2));
    let mut best: Option<(f64, f64)> = None; // (−log λ, λ)
    for i in 0..cfg.restarts.max(1) {
        let mut rng = restart_rng(cfg.seed ^ fxhash("royden"), i);
        let mut x0 = vec![0.0; dims];
        x0[0] = (lambda_line * if i == 0 { 0.97 } else { uniform_in(&mut rng, 0.5, 1.0) }).ln();
        if i == 0 {
            if let Some((l0, free)) = &jet_init {
                x0[0] = l0.ln();
                for (ci, p) in free.iter().enumerate() {
                    for (k, c) in p.iter().take(free_len).enumerate() {
                        let o = 1 + 2 * (ci * free_len + k);
                        x0[o] = c.re;
                        x0[o + 1] = c.im;
                    }
                }
            }
        } else {
            let span = 0.1 * v.norm().max(1e-6) * lambda_line;
            for slot in x0.iter_mut().skip(1) {
                *slot = uniform_in(&mut rng, -span, span);
            }
        }
        let mut f = |x: &[f64]| match decode(x) {
            Some((lambda, d)) => {
                let interior = if domain.all_defining_psh() { 0 } else { 6 };
                let margin = min_margin(domain, &d, 32, interior);
                let viol = (1e-3 - margin).max(0.0);
                -lambda.ln() + 1e4 * viol * viol
            }
            None => 1e9,
        };
        let scale = vec![0.05; dims];
        let (xbest, _) = nelder_mead(&mut f, &x0, &scale, cfg.simplex_iters, 1e-10);
        if let Some((lambda, _)) = decode(&xbest) {
            // retreat λ slightly until the certificate holds
            let mut l = lambda;
            let mut xs = xbest.clone();
            for _ in 0..25 {
                xs[0] = l.ln();
                if let Some((_, d)) = decode(&xs) {
                    if certify_containment(domain, &d, cfg).is_ok() {
                        let val = -l.ln();
                        if best.map(|(b, _)| val < b).unwrap_or(true) {
                            best = Some((val, l));
                        }
                        break;
                    }
                }
                l *= 0.995;
            }
        }
    }
    match best {
        Some((val, lambda)) => Ok(BoundInterval::upper(
            val,
            format!("royden_disk:lambda{lambda:.6}"),
            true,
        )),
        None => Err(Error::Infeasible("no certified jet disk".into())),
    }
}

/// Deterministic sample of certified disks through w, mixing near-extremal
/// linear disks with random polynomial ones; used by the derivative-bound
/// diagnostic.
pub fn sample_certified_disks(
    domain: &DomainSpec,
    w: &ComplexPoint,
    trials: usize,
    cfg: &SearchBudget,
) -> Vec<AnalyticDisk> {
    let n = w.dim();
    let mut out = Vec::new();
    let mut rng = restart_rng(cfg.seed ^ fxhash("disk_samples"), 0);
    let dirs = crate::geometry::deterministic_directions(n, trials.max(4) / 2);
    for d in dirs {
        if let Ok(dirn) = Direction::new(*w, d) {
            // near-extremal linear disk along each direction
            let feasible = |lambda: f64| {
                AnalyticDisk::jet(&w, &dirn.vector, lambda, &vec![Vec::new(); n])
                    .map(|dk| min_margin(domain, &dk, 48, 0) > 0.0)
                    .unwrap_or(false)
            };
            let mut lo = 0.0;
            let mut hi = 1e-3;
            while feasible(hi) && hi < 1e6 {
                lo = hi;
                hi *= 2.0;
            }
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if lo > 0.0 {
                if let Ok(dk) = AnalyticDisk::jet(&w, &dirn.vector, lo * 0.999, &vec![Vec::new(); n]) {
                    if certify_containment(domain, &dk, cfg).is_ok() {
                        out.push(dk);
                    }
                }
            }
        }
    }
    while out.len() < trials {
        let mut free = Vec::with_capacity(n);
        let deg = cfg.degree.max(2);
        for _ in 0..n {
            let p: Vec<Cplx> = (0..deg - 1)
                .map(|_| Cplx::new(uniform_in(&mut rng, -0.3, 0.3), uniform_in(&mut rng, -0.3, 0.3)))
                .collect();
            free.push(p);
        }
        let vdir = crate::geometry::random_unit(&mut rng, n);
        let lambda = uniform_in(&mut rng, 0.05, 0.5);
        if let Ok(base) = AnalyticDisk::jet(&w, &vdir, lambda, &free) {
            let mut placed = false;
            for &s in &[1.0, 0.5, 0.25, 0.1, 0.04] {
                let cand = base.precompose_shrink(s);
                if certify_containment(domain, &cand, cfg).is_ok() {
                    out.push(cand);
                    placed = true;
                    break;
                }
            }
            if !placed {
                out.push(AnalyticDisk::constant(w));
            }
        }
    }
    out.truncate(trials.max(out.len().min(trials * 2)));
    out
}

fn fxhash(s: &str) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
