//! Pluripotential compactification pipeline on the disk and bidisk: norming
//! volume form, c_V(w) = ‖g(·, w)‖_{L¹(V)}, the normalized embedding Φ_V,
//! boundary-sequence clustering and invariance under automorphisms.
//!
//! All embeddings share one fixed quadrature grid so grid functions compare
//! as vectors in L¹(V).

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{ComplexPoint, DomainSpec, MapKind};
use crate::quad::DiskRule;
use crate::Cplx;

/// Positive volume form with its quadrature grid; `mass` is the total volume.
#[derive(Debug, Clone)]
pub struct VolumeForm {
    pub domain: DomainSpec,
    nodes: Vec<ComplexPoint>,
    weights: Vec<f64>,
    pub mass: f64,
    pub resolution: usize,
    /// (radial, angular) per factor, for rotation-equivariance bookkeeping.
    pub layout: (usize, usize),
}

/// Values of a scalar function at the nodes of a fixed VolumeForm grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub values: Vec<f64>,
}

/// Constant-weight norming form on the disk or bidisk. The bounded models
/// with closed-form Green families keep the three norming properties
/// checkable; `empirical_norming` records the constants.
pub fn norming_form(domain: &DomainSpec, resolution: usize) -> Result<VolumeForm> {
    match domain {
        DomainSpec::Ball { center, radius } if center.dim() == 1 => {
            let radial = resolution.max(8);
            // boundary-sequence profiles live at fine angular scales; radial
            // Gauss nodes already cluster at the rim
            let angular = 8 * radial;
            let rule = DiskRule::new(center.coord(0), *radius, radial, angular);
            let nodes: Vec<ComplexPoint> = rule.nodes.iter().map(|&z| ComplexPoint::one(z)).collect();
            let mass = rule.weights.iter().sum();
            Ok(VolumeForm {
                domain: domain.clone(),
                nodes,
                weights: rule.weights,
                mass,
                resolution,
                layout: (radial, angular),
            })
        }
        DomainSpec::Polydisk { center, radii } if center.dim() == 2 => {
            let radial = (resolution / 4).max(8);
            let angular = 2 * radial;
            let r1 = DiskRule::new(center.coord(0), radii[0], radial, angular);
            let r2 = DiskRule::new(center.coord(1), radii[1], radial, angular);
            let mut nodes = Vec::with_capacity(r1.nodes.len() * r2.nodes.len());
            let mut weights = Vec::with_capacity(nodes.capacity());
            for (z1, w1) in r1.nodes.iter().zip(&r1.weights) {
                for (z2, w2) in r2.nodes.iter().zip(&r2.weights) {
                    nodes.push(ComplexPoint::two(*z1, *z2));
                    weights.push(w1 * w2);
                }
            }
            let mass = weights.iter().sum();
            Ok(VolumeForm {
                domain: domain.clone(),
                nodes,
                weights,
                mass,
                resolution,
                layout: (radial, angular),
            })
        }
        _ => Err(Error::Unsupported("norming forms ship on the disk and bidisk".into())),
    }
}

impl VolumeForm {
    pub fn nodes(&self) -> &[ComplexPoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn green_field(&self, w: &ComplexPoint) -> Result<ScalarField> {
        match &self.domain {
            DomainSpec::Ball { center, radius } => Ok(ScalarField::BallGreen {
                center: *center,
                radius: *radius,
                pole: *w,
            }),
            DomainSpec::Polydisk { center, radii } => Ok(ScalarField::PolydiskGreen {
                center: *center,
                radii: radii.clone(),
                pole: *w,
            }),
            _ => Err(Error::Unsupported("no closed-form Green family".into())),
        }
    }

    pub fn l1_norm(&self, f: &GridFunction) -> f64 {
        f.values.iter().zip(&self.weights).map(|(v, w)| v.abs() * w).sum()
    }

    pub fn l1_distance(&self, a: &GridFunction, b: &GridFunction) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .zip(&self.weights)
            .map(|((x, y), w)| (x - y).abs() * w)
            .sum()
    }

    /// c_V(w) = ∫ |g(·, w)| dV on the fixed grid. On the bidisk the tensor
    /// sum is evaluated through its factor decomposition
    /// |max(a, b)| = min(|a|, |b|) for a, b ≤ 0 — same finite sum, no tensor
    /// materialization.
    pub fn c_v(&self, w: &ComplexPoint) -> Result<f64> {
        let m = self.domain.contains(w)?;
        if m <= 0.0 {
            return Err(Error::OutsideDomain { margin: m });
        }
        if let DomainSpec::Polydisk { center, radii } = &self.domain {
            let (radial, angular) = self.layout;
            return Ok(bidisk_c_v_with(center, radii, w, radial, angular));
        }
        let g = self.green_field(w)?;
        let mut acc = 0.0;
        for (node, weight) in self.nodes.iter().zip(&self.weights) {
            let v = g.eval(node);
            if v.is_finite() {
                acc += v.abs() * weight;
            }
        }
        if acc <= 0.0 || !acc.is_finite() {
            return Err(Error::Quadrature("c_V degenerate".into()));
        }
        Ok(acc)
    }

    /// Φ_V(w) = g(·, w)/c_V(w), L¹-normalized to 1 on this grid.
    pub fn phi_v(&self, w: &ComplexPoint) -> Result<GridFunction> {
        let c = self.c_v(w)?;
        let g = self.green_field(w)?;
        let values = self
            .nodes
            .iter()
            .map(|node| {
                let v = g.eval(node) / c;
                if v.is_finite() {
                    v
                } else {
                    // a node exactly at the pole carries no weight in L¹ terms
                    0.0
                }
            })
            .collect();
        Ok(GridFunction { values })
    }

    /// Martin-style comparison mode: g(·, w)/|g(z₀, w)| (disk/bidisk only,
    /// where both normalizations give the same compactification).
    pub fn phi_martin(&self, w: &ComplexPoint, z0: &ComplexPoint) -> Result<GridFunction> {
        let g = self.green_field(w)?;
        let denom = g.eval(z0).abs();
        if !(denom.is_finite() && denom > 0.0) {
            return Err(Error::Quadrature("Martin normalization degenerate".into()));
        }
        let values = self
            .nodes
            .iter()
            .map(|node| {
                let v = g.eval(node) / denom;
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            })
            .collect();
        Ok(GridFunction { values })
    }

    /// The normalized Poisson profile −P_ξ/‖P_ξ‖ at a boundary angle of the
    /// unit disk; the expected limit shape of Φ_V along sequences to e^{iθ}.
    pub fn poisson_profile(&self, angle: f64) -> Result<GridFunction> {
        if !matches!(&self.domain, DomainSpec::Ball { center, .. } if center.dim() == 1) {
            return Err(Error::Unsupported("Poisson profiles ship on the disk".into()));
        }
        let xi = Cplx::new(angle.cos(), angle.sin());
        let raw: Vec<f64> = self
            .nodes
            .iter()
            .map(|node| {
                let z = node.coord(0);
                (1.0 - z.norm_sqr()) / (z - xi).norm_sqr()
            })
            .collect();
        let norm: f64 = raw.iter().zip(&self.weights).map(|(v, w)| v * w).sum();
        Ok(GridFunction { values: raw.iter().map(|v| -v / norm).collect() })
    }
}

fn bidisk_c_v_with(
    center: &ComplexPoint,
    radii: &[f64],
    w: &ComplexPoint,
    radial: usize,
    angular: usize,
) -> f64 {
    let factor = |i: usize| -> (Vec<f64>, Vec<f64>) {
        let rule = DiskRule::new(center.coord(i), radii[i], radial, angular);
        let wh = (w.coord(i) - center.coord(i)) / radii[i];
        let vals = rule
            .nodes
            .iter()
            .map(|&z| {
                let zh = (z - center.coord(i)) / radii[i];
                let m = crate::geometry::moebius(zh, wh).norm();
                if m == 0.0 {
                    f64::INFINITY
                } else {
                    -m.ln()
                }
            })
            .collect();
        (vals, rule.weights)
    };
    let (a, wa) = factor(0);
    let (b, wb) = factor(1);
    let mut acc = 0.0;
    for (ai, wi) in a.iter().zip(&wa) {
        for (bj, wj) in b.iter().zip(&wb) {
            acc += wi * wj * ai.min(*bj);
        }
    }
    acc
}

/// Streaming bidisk c_V at an arbitrary per-factor resolution; used for
/// grid-refinement diagnostics without building the tensor grid.
pub fn bidisk_c_v(w: &ComplexPoint, radial: usize, angular: usize) -> f64 {
    bidisk_c_v_with(
        &ComplexPoint::origin(2),
        &[1.0, 1.0],
        w,
        radial,
        angular,
    )
}

/// Single-linkage clustering at threshold ε; returns cluster labels.
pub fn single_linkage(dist: &[Vec<f64>], eps: f64) -> Vec<usize> {
    let n = dist.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if dist[i][j] <= eps {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    let mut canon: Vec<Option<usize>> = alloc::vec![None; n];
    let mut next = 0;
    for i in 0..n {
        let root = find(&mut parent, i);
        let label = match canon[root] {
            Some(l) => l,
            None => {
                canon[root] = Some(next);
                next += 1;
                next - 1
            }
        };
        labels.push(label);
    }
    labels
}

/// Minimum number of elements to move to turn one partition into the other
/// (greedy maximum-overlap matching; exact when clusters are well separated).
pub fn partition_edit_distance(a: &[usize], b: &[usize]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    let ka = a.iter().max().map(|m| m + 1).unwrap_or(0);
    let kb = b.iter().max().map(|m| m + 1).unwrap_or(0);
    let mut contingency = alloc::vec![alloc::vec![0usize; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        contingency[x][y] += 1;
    }
    let mut used_a = alloc::vec![false; ka];
    let mut used_b = alloc::vec![false; kb];
    let mut matched = 0usize;
    loop {
        let mut best = 0usize;
        let mut arg = None;
        for i in 0..ka {
            if used_a[i] {
                continue;
            }
            for j in 0..kb {
                if used_b[j] {
                    continue;
                }
                if contingency[i][j] > best {
                    best = contingency[i][j];
                    arg = Some((i, j));
                }
            }
        }
        match arg {
            Some((i, j)) => {
                matched += best;
                used_a[i] = true;
                used_b[j] = true;
            }
            None => break,
        }
    }
    a.len() - matched
}

#[derive(Debug, Clone)]
pub struct TraceReport {
    /// d(Φ(w_j), Φ(w_{j+1})) along the sequence.
    pub successive: Vec<f64>,
    pub pairwise: Vec<Vec<f64>>,
    /// L¹ distance of the final embedding to the normalized Poisson profile
    /// at the declared limit angle (disk only).
    pub poisson_match: Option<f64>,
}

/// Embeds a sequence and reports Cauchy diagnostics plus the Poisson-profile
/// comparison when a limit angle is declared.
pub fn boundary_trace(
    form: &VolumeForm,
    seq: &[ComplexPoint],
    limit_angle: Option<f64>,
) -> Result<TraceReport> {
    if seq.is_empty() {
        return Err(Error::InvalidParameter("empty sequence".into()));
    }
    let embeds: Result<Vec<GridFunction>> = seq.iter().map(|w| form.phi_v(w)).collect();
    let embeds = embeds?;
    let mut successive = Vec::with_capacity(seq.len().saturating_sub(1));
    for k in 0..embeds.len().saturating_sub(1) {
        successive.push(form.l1_distance(&embeds[k], &embeds[k + 1]));
    }
    let n = embeds.len();
    let mut pairwise = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = form.l1_distance(&embeds[i], &embeds[j]);
            pairwise[i][j] = d;
            pairwise[j][i] = d;
        }
    }
    let poisson_match = match limit_angle {
        Some(angle) => {
            let profile = form.poisson_profile(angle)?;
            Some(form.l1_distance(embeds.last().unwrap(), &profile))
        }
        None => None,
    };
    Ok(TraceReport { successive, pairwise, poisson_match })
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    /// (ε, partition edit distance) per scheduled threshold.
    pub per_eps: Vec<(f64, usize)>,
    pub max_distance: usize,
}

/// Compares the cluster structure of {Φ_V(w_k)} with {Φ_{V'}(F(w_k))} under
/// the ε schedule; an automorphism must preserve the partition (distance 0).
pub fn invariance_test(
    form: &VolumeForm,
    form_image: &VolumeForm,
    map: &MapKind,
    samples: &[ComplexPoint],
    eps_schedule: &[f64],
) -> Result<InvarianceReport> {
    let n = samples.len();
    let mut emb1 = Vec::with_capacity(n);
    let mut emb2 = Vec::with_capacity(n);
    for w in samples {
        emb1.push(form.phi_v(w)?);
        emb2.push(form_image.phi_v(&map.apply(w)?)?);
    }
    let mut d1 = alloc::vec![alloc::vec![0.0; n]; n];
    let mut d2 = alloc::vec![alloc::vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = form.l1_distance(&emb1[i], &emb1[j]);
            let b = form_image.l1_distance(&emb2[i], &emb2[j]);
            d1[i][j] = a;
            d1[j][i] = a;
            d2[i][j] = b;
            d2[j][i] = b;
        }
    }
    let mut per_eps = Vec::with_capacity(eps_schedule.len());
    let mut max_distance = 0;
    for &eps in eps_schedule {
        let p1 = single_linkage(&d1, eps);
        let p2 = single_linkage(&d2, eps);
        let ed = partition_edit_distance(&p1, &p2);
        max_distance = max_distance.max(ed);
        per_eps.push((eps, ed));
    }
    Ok(InvarianceReport { per_eps, max_distance })
}

#[derive(Debug, Clone)]
pub struct NormingReport {
    /// C(F): min over the test family of −u/‖u‖ on the compact F.
    pub c_f: f64,
    /// ε_j = max over the family of ‖u‖_{L¹(M∖M_j)}/‖u‖ on the exhaustion.
    pub eps_j: Vec<f64>,
}

/// Empirical norming constants for the Green test family {g(·, w_k)}:
/// property (2) on F = {dist-to-center scale ≤ fraction} and property (3) on
/// the exhaustion M_j = {scale < 1 − 2^{−j}}.
pub fn empirical_norming(
    form: &VolumeForm,
    poles: &[ComplexPoint],
    fraction: f64,
    depths: usize,
) -> Result<NormingReport> {
    let scale = |p: &ComplexPoint| -> f64 {
        match &form.domain {
            DomainSpec::Ball { center, radius } => p.dist(center) / radius,
            DomainSpec::Polydisk { center, radii } => {
                let mut m = 0.0f64;
                for (i, &r) in radii.iter().enumerate() {
                    m = m.max((p.coord(i) - center.coord(i)).norm() / r);
                }
                m
            }
            _ => 1.0,
        }
    };
    let mut c_f = f64::INFINITY;
    let mut eps_j = alloc::vec![0.0f64; depths];
    for w in poles {
        let g = form.phi_v(w)?; // already normalized: ‖g‖ = 1
        for (node, value) in form.nodes().iter().zip(&g.values) {
            if scale(node) <= fraction {
                c_f = c_f.min(-value);
            }
        }
        for (j, eps) in eps_j.iter_mut().enumerate() {
            let cut = 1.0 - 0.5f64.powi(j as i32 + 1);
            let outer: f64 = form
                .nodes()
                .iter()
                .zip(&g.values)
                .zip(form.weights())
                .filter(|((node, _), _)| scale(node) >= cut)
                .map(|((_, v), w)| v.abs() * w)
                .sum();
            *eps = eps.max(outer);
        }
    }
    Ok(NormingReport { c_f, eps_j })
}
