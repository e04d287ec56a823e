//! Quadrature: Gauss–Legendre nodes, tensor grids on the disk, and a
//! pole-centered disk rule with the t = r² substitution that tames the
//! logarithmic singularity of Green functions.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::Cplx;

/// Gauss–Legendre nodes and weights on (-1, 1), by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes.push(-x); // ascending order
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre on (a, b).
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}

/// Tensor rule on the disk D(center, radius): Gauss–Legendre radially,
/// trapezoid in angle. Exact for smooth integrands; nodes never hit the
/// center. Weights sum to the disk area.
pub struct DiskRule {
    pub nodes: Vec<Cplx>,
    pub weights: Vec<f64>,
    pub radial: usize,
    pub angular: usize,
}

impl DiskRule {
    pub fn new(center: Cplx, radius: f64, radial: usize, angular: usize) -> Self {
        let (rs, rws) = gauss_legendre_on(radial, 0.0, radius);
        let dtheta = 2.0 * core::f64::consts::PI / angular as f64;
        let mut nodes = Vec::with_capacity(radial * angular);
        let mut weights = Vec::with_capacity(radial * angular);
        for (r, rw) in rs.iter().zip(&rws) {
            for j in 0..angular {
                let th = dtheta * j as f64;
                nodes.push(center + Cplx::new(r * th.cos(), r * th.sin()));
                weights.push(rw * r * dtheta);
            }
        }
        Self { nodes, weights, radial, angular }
    }

    pub fn integrate(&self, mut f: impl FnMut(Cplx) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(z, w)| w * f(*z)).sum()
    }
}

/// Pole-centered rule for ∫_D f dA where f has an integrable log singularity
/// at `pole` inside the unit disk. Integrates in polar coordinates around the
/// pole with the substitution s = t², which clusters radial nodes at the
/// singularity; the ray length to ∂D varies with the angle.
pub struct PoleCenteredDiskRule {
    pub nodes: Vec<Cplx>,
    pub weights: Vec<f64>,
}

impl PoleCenteredDiskRule {
    pub fn unit_disk(pole: Cplx, radial: usize, angular: usize) -> Self {
        let dtheta = 2.0 * core::f64::consts::PI / angular as f64;
        let (ts, tws) = gauss_legendre(radial);
        let mut nodes = Vec::with_capacity(radial * angular);
        let mut weights = Vec::with_capacity(radial * angular);
        for j in 0..angular {
            let th = dtheta * j as f64;
            let e = Cplx::new(th.cos(), th.sin());
            // distance from pole to the unit circle along direction e
            let b = (pole.conj() * e).re;
            let rho = -b + (b * b + 1.0 - pole.norm_sqr()).max(0.0).sqrt();
            let tmax = rho.sqrt();
            for (t, tw) in ts.iter().zip(&tws) {
                // map (-1,1) -> (0, tmax)
                let tt = 0.5 * (t + 1.0) * tmax;
                let w = 0.5 * tmax * tw;
                let s = tt * tt;
                nodes.push(pole + e * s);
                // ∫ F(s) s ds = ∫ 2 t³ F(t²) dt
                weights.push(w * 2.0 * tt * tt * tt * dtheta);
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, mut f: impl FnMut(Cplx) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(z, w)| w * f(*z)).sum()
    }
}

/// Trapezoid rule on the circle |z - center| = radius; exact for trig
/// polynomials of degree < n.
pub fn circle_mean(center: Cplx, radius: f64, n: usize, mut f: impl FnMut(Cplx) -> f64) -> f64 {
    let mut acc = 0.0;
    for j in 0..n {
        let th = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
        acc += f(center + Cplx::new(radius * th.cos(), radius * th.sin()));
    }
    acc / n as f64
}
