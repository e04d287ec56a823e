//! Certified bound assembly: Carathéodory candidates and explicit PSH
//! competitors on the lower side, disk-engine / Kobayashi / pushforward /
//! closed-form values on the upper side, merged into a `BoundInterval`.
//!
//! Lower bounds only ever come from objects that are PSH or holomorphic by
//! construction; nothing is certified by sampling alone. A certified lo above
//! a certified hi aborts with `SoundnessViolation` — that is a bug signal,
//! not noise to clamp.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::config::SearchBudget;
use crate::disk;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{ComplexPoint, DomainSpec, HoloMap, MapKind};
use crate::Cplx;

/// Certified two-sided bound with witness provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_witness: String,
    pub hi_witness: String,
    pub certified: bool,
}

impl BoundInterval {
    pub fn pole() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::NEG_INFINITY,
            lo_witness: "pole".into(),
            hi_witness: "pole".into(),
            certified: true,
        }
    }

    pub fn lower(lo: f64, witness: impl Into<String>, certified: bool) -> Self {
        Self {
            lo,
            hi: f64::INFINITY,
            lo_witness: witness.into(),
            hi_witness: "none".into(),
            certified,
        }
    }

    pub fn upper(hi: f64, witness: impl Into<String>, certified: bool) -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi,
            lo_witness: "none".into(),
            hi_witness: witness.into(),
            certified,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Containment with a float-noise allowance; different `ln`
    /// implementations (libm vs the platform's) disagree by an ulp.
    pub fn contains_tol(&self, v: f64, tol: f64) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }

    pub fn is_pole(&self) -> bool {
        self.lo == f64::NEG_INFINITY && self.hi == f64::NEG_INFINITY
    }
}

/// A concrete holomorphic map M → closed unit disk vanishing at the pole.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateMap {
    /// z ↦ ⟨φ_ŵ(ẑ), e⟩ on a ball.
    BallFunctional { center: ComplexPoint, radius: f64, pole: ComplexPoint, dir: ComplexPoint },
    /// One coordinate Möbius factor of a polydisk.
    CoordMoebius { center: Cplx, radius: f64, pole: Cplx, index: usize },
    /// z ↦ ⟨z − w, e⟩ / R_w on any bounded model.
    LinearFunctional { pole: ComplexPoint, r_bound: f64, dir: ComplexPoint },
    /// Coordinate Möbius of the bidisk composed with F(z) = (z₁, z₁z₂).
    HartogsCoordMoebius { fw: [Cplx; 2], index: usize },
}

impl CandidateMap {
    pub fn eval(&self, z: &ComplexPoint) -> Cplx {
        match self {
            CandidateMap::BallFunctional { center, radius, pole, dir } => {
                let inv = Cplx::new(1.0 / radius, 0.0);
                let zh = z.sub(center).scale(inv);
                let wh = pole.sub(center).scale(inv);
                crate::geometry::ball_automorphism(&wh, &zh).inner(dir)
            }
            CandidateMap::CoordMoebius { center, radius, pole, index } => {
                let zh = (z.coord(*index) - center) / radius;
                let wh = (pole - center) / radius;
                crate::geometry::moebius(zh, wh)
            }
            CandidateMap::LinearFunctional { pole, r_bound, dir } => {
                z.sub(pole).inner(dir) / Cplx::new(*r_bound, 0.0)
            }
            CandidateMap::HartogsCoordMoebius { fw, index } => {
                let f = [z.coord(0), z.coord(0) * z.coord(1)];
                crate::geometry::moebius(f[*index], fw[*index])
            }
        }
    }
}

/// Per-domain parametric family of Carathéodory candidates. The directional
/// subfamilies are maximized analytically (the supremum over unit functionals
/// aligns with the evaluated point); `members_at` realizes concrete members
/// for validation.
#[derive(Debug, Clone)]
pub struct CandidateMapFamily {
    pub domain: DomainSpec,
    pub pole: ComplexPoint,
    members: Vec<CandidateMap>,
}

impl CandidateMapFamily {
    pub fn for_domain(domain: &DomainSpec, w: &ComplexPoint) -> Self {
        let mut members = Vec::new();
        match domain {
            DomainSpec::Ball { center, radius } => {
                for dir in crate::geometry::deterministic_directions(center.dim(), 8) {
                    members.push(CandidateMap::BallFunctional {
                        center: *center,
                        radius: *radius,
                        pole: *w,
                        dir,
                    });
                }
            }
            DomainSpec::Polydisk { center, radii } => {
                for (index, &radius) in radii.iter().enumerate() {
                    members.push(CandidateMap::CoordMoebius {
                        center: center.coord(index),
                        radius,
                        pole: w.coord(index),
                        index,
                    });
                }
            }
            DomainSpec::PlanarComplement { .. } | DomainSpec::Pushforward { .. } => {}
            DomainSpec::HartogsPgvlu(_) => {
                let fw = [w.coord(0), w.coord(0) * w.coord(1)];
                members.push(CandidateMap::HartogsCoordMoebius { fw, index: 0 });
                members.push(CandidateMap::HartogsCoordMoebius { fw, index: 1 });
                let r = domain.bounding_radius_at(w);
                for dir in crate::geometry::deterministic_directions(2, 4) {
                    members.push(CandidateMap::LinearFunctional { pole: *w, r_bound: r, dir });
                }
            }
            DomainSpec::SublevelDcg(_) => {
                let r = domain.bounding_radius_at(w);
                for dir in crate::geometry::deterministic_directions(2, 8) {
                    members.push(CandidateMap::LinearFunctional { pole: *w, r_bound: r, dir });
                }
            }
        }
        Self { domain: domain.clone(), pole: *w, members }
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[CandidateMap] {
        &self.members
    }

    /// max over sampled members of |f| and |f(w)|, for the validation
    /// invariant (|f| ≤ 1 − δ on a sample, f(w) = 0 to 1e−12).
    pub fn validate(&self, sample: &[ComplexPoint]) -> (f64, f64) {
        let mut max_abs = 0.0f64;
        let mut max_at_pole = 0.0f64;
        for m in &self.members {
            max_at_pole = max_at_pole.max(m.eval(&self.pole).norm());
            for p in sample {
                max_abs = max_abs.max(m.eval(p).norm());
            }
        }
        (max_abs, max_at_pole)
    }
}

/// Lower bound for c (hence for g) from the candidate family; the directional
/// families are maximized in closed form.
pub fn caratheodory_bound(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    _cfg: &SearchBudget,
) -> Result<BoundInterval> {
    check_pair(domain, z, w)?;
    if z.dist(w) == 0.0 {
        return Ok(BoundInterval::pole());
    }
    let (value, witness): (f64, String) = match domain {
        DomainSpec::Ball { center, radius } => (
            ScalarField::BallGreen { center: *center, radius: *radius, pole: *w }.eval(z),
            "caratheodory:ball_functional".into(),
        ),
        DomainSpec::Polydisk { center, radii } => (
            ScalarField::PolydiskGreen { center: *center, radii: radii.clone(), pole: *w }.eval(z),
            "caratheodory:coord_moebius".into(),
        ),
        DomainSpec::PlanarComplement { .. } | DomainSpec::Pushforward { .. } => {
            return Ok(BoundInterval::lower(f64::NEG_INFINITY, "no candidates", true));
        }
        DomainSpec::HartogsPgvlu(_) => {
            let fw = [w.coord(0), w.coord(0) * w.coord(1)];
            let pull = ScalarField::HartogsBidiskPullback { fw }.eval(z);
            let lin = (z.dist(w) / domain.bounding_radius_at(w)).ln();
            if pull >= lin {
                (pull, "caratheodory:hartogs_fold_moebius".into())
            } else {
                (lin, "caratheodory:linear_functional".into())
            }
        }
        DomainSpec::SublevelDcg(_) => (
            (z.dist(w) / domain.bounding_radius_at(w)).ln(),
            "caratheodory:linear_functional".into(),
        ),
    };
    Ok(BoundInterval::lower(value, witness, true))
}

/// Shipped PSH competitors with a logarithmic pole at `w`. Every entry is
/// negative PSH by construction; the pole location is checked exactly.
pub fn psh_competitors(domain: &DomainSpec, w: &ComplexPoint) -> Vec<(ScalarField, String)> {
    let mut out: Vec<(ScalarField, String)> = Vec::new();
    let r = domain.bounding_radius_at(w);
    if r.is_finite() {
        out.push((
            ScalarField::BallLog { center: *w, radius: r },
            "psh:circumscribed_ball".into(),
        ));
    }
    match domain {
        DomainSpec::Ball { center, radius } => out.push((
            ScalarField::BallGreen { center: *center, radius: *radius, pole: *w },
            "psh:ball_green".into(),
        )),
        DomainSpec::Polydisk { center, radii } => out.push((
            ScalarField::PolydiskGreen { center: *center, radii: radii.clone(), pole: *w },
            "psh:polydisk_green".into(),
        )),
        DomainSpec::SublevelDcg(params) => {
            if w.norm() <= 1e-12 {
                out.push((ScalarField::SublevelU(params.clone()), "psh:sublevel_u".into()));
            } else if let Ok(glued) = crate::hyperconvex::glue_competitor(
                domain,
                &sublevel_quadratic(),
                w,
            ) {
                out.push((
                    ScalarField::Glued(alloc::boxed::Box::new(glued)),
                    "psh:glued".into(),
                ));
            }
        }
        DomainSpec::HartogsPgvlu(params) => {
            if w.coord(0).norm() <= 1e-12 {
                out.push((
                    ScalarField::HartogsH { params: params.clone(), w2: w.coord(1) },
                    "psh:hartogs_h".into(),
                ));
            } else {
                let fw = [w.coord(0), w.coord(0) * w.coord(1)];
                out.push((
                    ScalarField::HartogsBidiskPullback { fw },
                    "psh:bidisk_pullback".into(),
                ));
            }
        }
        DomainSpec::PlanarComplement { .. } | DomainSpec::Pushforward { .. } => {}
    }
    // keep only competitors whose pole certificate sits at w
    out.retain(|(f, _)| matches!(f.log_pole(), Some(p) if p.dist(w) <= 1e-9));
    out
}

/// Bounded strictly PSH base field for the sublevel model, u = (‖z‖² − 65)/65.
fn sublevel_quadratic() -> ScalarField {
    ScalarField::QuadraticNeg {
        center: ComplexPoint::origin(2),
        scale: 1.0 / 65.0,
        level: 65.0,
    }
}

/// Lower bound for g from the shipped competitors at this pole.
pub fn psh_lower_bound(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<BoundInterval> {
    check_pair(domain, z, w)?;
    if z.dist(w) == 0.0 {
        return Ok(BoundInterval::pole());
    }
    let comps = psh_competitors(domain, w);
    if comps.is_empty() {
        return Ok(BoundInterval::lower(f64::NEG_INFINITY, "no competitor available", true));
    }
    let mut best = f64::NEG_INFINITY;
    let mut wit = String::from("no competitor available");
    for (f, name) in comps {
        let v = f.eval(z);
        if v > best {
            best = v;
            wit = name;
        }
    }
    Ok(BoundInterval::lower(best, wit, true))
}

/// Closed forms: ball with arbitrary pole (automorphism formula; the disk is
/// the 1-dimensional case) and polydisk with arbitrary pole.
pub fn closed_form_green(domain: &DomainSpec, z: &ComplexPoint, w: &ComplexPoint) -> Option<f64> {
    match domain {
        DomainSpec::Ball { center, radius } => {
            Some(ScalarField::BallGreen { center: *center, radius: *radius, pole: *w }.eval(z))
        }
        DomainSpec::Polydisk { center, radii } => {
            Some(ScalarField::PolydiskGreen { center: *center, radii: radii.clone(), pole: *w }.eval(z))
        }
        _ => None,
    }
}

/// Monotonicity upper bound through a declared slice: g_M(z, w) ≤ g_src at the
/// preimages, when the map's source has a closed-form Green function.
pub fn pushforward_upper_bound(
    map: &HoloMap,
    z: &ComplexPoint,
    w: &ComplexPoint,
) -> Result<BoundInterval> {
    let pz = map.invert(z)?;
    let pw = map.invert(w)?;
    let back_z = map.kind().apply(&pz)?;
    if back_z.dist(z) > 1e-9 * (1.0 + z.norm()) {
        return Err(Error::OutsideDomain { margin: -back_z.dist(z) });
    }
    let val = closed_form_green(map.source(), &pz, &pw).ok_or_else(|| {
        Error::Unsupported("pushforward source has no closed-form Green function".into())
    })?;
    Ok(BoundInterval::upper(val, format!("pushforward:{}", map_tag(map.kind())), true))
}

fn map_tag(kind: &MapKind) -> &'static str {
    match kind {
        MapKind::Identity => "identity",
        MapKind::CoordProjection { .. } => "projection",
        MapKind::MoebiusCoord { .. } => "moebius_coord",
        MapKind::MoebiusProduct { .. } => "moebius_product",
        MapKind::HartogsFold => "hartogs_fold",
        MapKind::BallAutomorphism { .. } => "ball_automorphism",
        MapKind::AffineSlice { .. } => "affine_slice",
        MapKind::CoordSwap => "coord_swap",
        MapKind::Compose(_) => "compose",
    }
}

/// Radial-slice upper bounds that hold by construction of the model.
fn slice_upper_bounds(domain: &DomainSpec, z: &ComplexPoint, w: &ComplexPoint) -> Vec<(f64, String)> {
    let mut out = Vec::new();
    if let DomainSpec::SublevelDcg(params) = domain {
        if w.norm() <= 1e-12 && z.norm() > 0.0 {
            let dir = z.scale(Cplx::new(1.0 / z.norm(), 0.0));
            let r = params.slice_radius(&dir);
            if z.norm() < r {
                out.push(((z.norm() / r).ln(), "pushforward:radial_slice".into()));
            }
        }
    }
    out
}

fn check_pair(domain: &DomainSpec, z: &ComplexPoint, w: &ComplexPoint) -> Result<()> {
    let mz = domain.contains(z)?;
    if mz <= 0.0 {
        return Err(Error::OutsideDomain { margin: mz });
    }
    let mw = domain.contains(w)?;
    if mw <= 0.0 {
        return Err(Error::OutsideDomain { margin: mw });
    }
    Ok(())
}

/// The combined certified interval for g_M(z, w).
///
/// lo = max(Carathéodory, PSH competitors); hi = min(disk engine, Kobayashi,
/// slice pushforwards, closed form). With `cfg.restarts = 0` the engines are
/// skipped and the closed forms / competitors carry the interval.
pub fn green_interval(
    domain: &DomainSpec,
    z: &ComplexPoint,
    w: &ComplexPoint,
    cfg: &SearchBudget,
) -> Result<BoundInterval> {
    check_pair(domain, z, w)?;
    if z.dist(w) == 0.0 {
        return Ok(BoundInterval::pole());
    }

    let mut lo = f64::NEG_INFINITY;
    let mut lo_wit = String::from("none");
    let cara = caratheodory_bound(domain, z, w, cfg)?;
    if cara.lo > lo || lo == f64::NEG_INFINITY {
        lo = cara.lo;
        lo_wit = cara.lo_witness;
    }
    let psh = psh_lower_bound(domain, z, w)?;
    if psh.lo > lo {
        lo = psh.lo;
        lo_wit = psh.lo_witness;
    }

    let mut hi = f64::INFINITY;
    let mut hi_wit = String::from("none");
    let mut hi_certified = true;
    if let Some(cf) = closed_form_green(domain, z, w) {
        hi = cf;
        hi_wit = "closed_form".into();
    }
    for (v, wit) in slice_upper_bounds(domain, z, w) {
        if v < hi {
            hi = v;
            hi_wit = wit;
        }
    }
    // the engines cannot sharpen an interval the closed forms and
    // competitors already pinched
    if cfg.restarts > 0 && hi - lo > 1e-12 {
        if let Ok(b) = disk::upper_bound_green(domain, z, w, cfg) {
            if b.hi < hi {
                hi = b.hi;
                hi_wit = b.hi_witness;
                hi_certified = b.certified;
            }
        }
        if let Ok(b) = disk::kobayashi_bound(domain, z, w, cfg) {
            if b.hi < hi {
                hi = b.hi;
                hi_wit = b.hi_witness;
                hi_certified = b.certified;
            }
        }
    }

    if lo > hi + 1e-9 {
        return Err(Error::SoundnessViolation { lo, hi });
    }
    if lo > hi {
        // Sub-noise disagreement between two certified routes: report the
        // weaker lower claim.
        lo = hi;
    }
    Ok(BoundInterval { lo, hi, lo_witness: lo_wit, hi_witness: hi_wit, certified: hi_certified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{SublevelParams, LN_2};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn pt1(x: f64) -> ComplexPoint {
        ComplexPoint::one(Cplx::new(x, 0.0))
    }

    fn pt2(x: f64, y: f64) -> ComplexPoint {
        ComplexPoint::two(Cplx::new(x, 0.0), Cplx::new(y, 0.0))
    }

    #[test]
    fn caratheodory_disk_polydisk_ball() {
        let cfg = SearchBudget::no_engine();
        let w1 = pt1(0.0);
        let disk = DomainSpec::unit_disk();
        let b = caratheodory_bound(&disk, &pt1(0.5), &w1, &cfg).unwrap();
        assert_relative_eq!(b.lo, 0.5f64.ln(), epsilon = 1e-14);

        let poly = DomainSpec::unit_bidisk();
        let b = caratheodory_bound(&poly, &pt2(0.5, 0.25), &ComplexPoint::origin(2), &cfg).unwrap();
        assert_relative_eq!(b.lo, 0.5f64.ln(), epsilon = 1e-14);

        let ball = DomainSpec::unit_ball(2);
        let b = caratheodory_bound(&ball, &pt2(0.5, 0.0), &ComplexPoint::origin(2), &cfg).unwrap();
        assert_relative_eq!(b.lo, 0.5f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn caratheodory_planar_complement_returns_no_candidates() {
        let dom = DomainSpec::PlanarComplement {
            outer_radius: 2.0,
            removed: vec![(Cplx::new(0.5, 0.0), 0.05)],
        };
        let cfg = SearchBudget::no_engine();
        let b = caratheodory_bound(&dom, &pt1(-1.0), &pt1(1.0), &cfg).unwrap();
        assert_eq!(b.lo, f64::NEG_INFINITY);
        assert_eq!(b.lo_witness, "no candidates");
    }

    #[test]
    fn candidate_families_validate() {
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (dom, w) in [
            (DomainSpec::unit_ball(2), pt2(0.2, 0.1)),
            (DomainSpec::unit_bidisk(), pt2(-0.3, 0.4)),
            (DomainSpec::SublevelDcg(SublevelParams::default_instance()), pt2(0.0, 0.0)),
        ] {
            let fam = CandidateMapFamily::for_domain(&dom, &w);
            let sample = dom.sample_interior(&mut rng, 300);
            let (max_abs, at_pole) = fam.validate(&sample);
            assert!(max_abs < 1.0, "family member reaches modulus {max_abs} on {dom:?}");
            assert!(at_pole <= 1e-12, "family member nonzero at pole: {at_pole}");
        }
    }

    #[test]
    fn psh_lower_bound_examples() {
        // Sublevel at (1/2, 0), pole 0: exactly −(3/2) log 2 from u.
        let dom = DomainSpec::SublevelDcg(SublevelParams::default_instance());
        let b = psh_lower_bound(&dom, &pt2(0.5, 0.0), &ComplexPoint::origin(2)).unwrap();
        assert!(b.lo >= -1.5 * LN_2 - 1e-12);
        assert_relative_eq!(b.lo, -1.5 * LN_2, epsilon = 1e-12);
        assert_eq!(b.lo_witness, "psh:sublevel_u");

        // Ball: the ball-green competitor gives log(‖z − w‖ / r) at center pole.
        let ball = DomainSpec::Ball { center: ComplexPoint::origin(2), radius: 2.0 };
        let b = psh_lower_bound(&ball, &pt2(0.5, 0.0), &ComplexPoint::origin(2)).unwrap();
        assert_relative_eq!(b.lo, 0.25f64.ln(), epsilon = 1e-13);
    }

    #[test]
    fn hartogs_h_competitor_selected_for_axis_pole() {
        let dom = DomainSpec::HartogsPgvlu(crate::geometry::HartogsParams::default_instance());
        let w = ComplexPoint::two(Cplx::ZERO, Cplx::new(0.4, 0.0));
        let z = ComplexPoint::two(Cplx::new(0.2, 0.0), Cplx::new(0.5, 0.0));
        let b = psh_lower_bound(&dom, &z, &w).unwrap();
        assert!(b.lo.is_finite());
        assert_eq!(b.lo_witness, "psh:hartogs_h");
    }

    #[test]
    fn green_interval_ball_is_tight() {
        let dom = DomainSpec::unit_ball(2);
        let b = green_interval(&dom, &pt2(0.5, 0.0), &ComplexPoint::origin(2), &SearchBudget::no_engine())
            .unwrap();
        assert!(b.contains(0.5f64.ln()));
        assert!(b.width() <= 0.05);
        assert!(b.width() >= 0.0);
    }

    #[test]
    fn green_interval_pole() {
        let dom = DomainSpec::unit_ball(2);
        let b = green_interval(&dom, &pt2(0.3, 0.1), &pt2(0.3, 0.1), &SearchBudget::no_engine()).unwrap();
        assert!(b.is_pole());
    }

    #[test]
    fn green_interval_outside_is_error() {
        let dom = DomainSpec::unit_ball(2);
        let r = green_interval(&dom, &pt2(1.5, 0.0), &ComplexPoint::origin(2), &SearchBudget::no_engine());
        assert!(matches!(r, Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn sublevel_interval_at_w0_is_exact_max_of_u_and_ball() {
        // lo from u / circumscribed ball, hi from the radial slice: equal.
        let dom = DomainSpec::SublevelDcg(SublevelParams::default_instance());
        let cfg = SearchBudget::no_engine();
        let w = ComplexPoint::origin(2);
        for z in [pt2(0.5, 0.0), pt2(0.3, 0.2), pt2(-0.7, 0.45), pt2(0.01, -0.02)] {
            let b = green_interval(&dom, &z, &w, &cfg).unwrap();
            assert!(b.width() <= 1e-10, "width {} at {:?}", b.width(), z);
        }
    }

    #[test]
    fn pushforward_slice_bound_on_sublevel_matches_paper_example() {
        // z_j = (1/2, c_j/2) lies on the line z₂ = c_j z₁, slice radius 8:
        // bound log(‖z_j‖/8) → −4 log 2 ≤ −2 log 2.
        let params = SublevelParams::default_instance();
        let dom = DomainSpec::SublevelDcg(params.clone());
        let cfg = SearchBudget::no_engine();
        let j = params.c().len() - 1;
        let cj = params.c()[j];
        let zj = pt2(0.5, cj / 2.0);
        let b = green_interval(&dom, &zj, &ComplexPoint::origin(2), &cfg).unwrap();
        assert!(b.hi <= -2.0 * LN_2 + 0.1, "hi = {}", b.hi);
        let expected = ((0.25 * (1.0 + cj * cj)).sqrt() / 8.0).ln();
        assert_relative_eq!(b.hi, expected, epsilon = 1e-12);
    }

    #[test]
    fn pushforward_op_unit_disk_identity_and_ball_slice() {
        // identity slice of the unit disk: exact Möbius value
        let disk = DomainSpec::unit_disk();
        let map = HoloMap::new(MapKind::Identity, disk.clone(), disk.clone()).unwrap();
        let b = pushforward_upper_bound(&map, &pt1(0.5), &pt1(0.2)).unwrap();
        let expected = crate::geometry::moebius(Cplx::new(0.5, 0.0), Cplx::new(0.2, 0.0)).norm().ln();
        assert_relative_eq!(b.hi, expected, epsilon = 1e-14);

        // affine slice through the C² ball equals the ball closed form
        let ball = DomainSpec::unit_ball(2);
        let z = pt2(0.5, 0.0);
        let w = pt2(0.1, 0.0);
        let dirv = ComplexPoint::one(Cplx::new(1.0, 0.0));
        let slice = HoloMap::new(
            MapKind::AffineSlice {
                base: ComplexPoint::origin(2),
                dir: pt2(1.0, 0.0),
            },
            DomainSpec::unit_disk(),
            ball.clone(),
        )
        .unwrap();
        let _ = dirv;
        let b = pushforward_upper_bound(&slice, &z, &w).unwrap();
        let cf = closed_form_green(&ball, &z, &w).unwrap();
        assert_relative_eq!(b.hi, cf, epsilon = 1e-12);

        // a point off the slice errors
        assert!(pushforward_upper_bound(&slice, &pt2(0.3, 0.2), &w).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let ball = DomainSpec::unit_ball(2);
        assert_relative_eq!(
            closed_form_green(&ball, &pt2(0.5, 0.0), &ComplexPoint::origin(2)).unwrap(),
            0.5f64.ln(),
            epsilon = 1e-14
        );
        let disk = DomainSpec::unit_disk();
        assert_eq!(
            closed_form_green(&disk, &pt1(0.5), &pt1(0.5)).unwrap(),
            f64::NEG_INFINITY
        );
        let poly = DomainSpec::unit_bidisk();
        assert_relative_eq!(
            closed_form_green(&poly, &pt2(0.5, 0.25), &ComplexPoint::origin(2)).unwrap(),
            0.5f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn ball_monotonicity_closed_forms() {
        use rand_chacha::rand_core::SeedableRng;
        let small = DomainSpec::Ball { center: ComplexPoint::origin(2), radius: 0.5 };
        let big = DomainSpec::unit_ball(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let pts = small.sample_interior(&mut rng, 100);
        for pair in pts.chunks(2) {
            if pair.len() < 2 || pair[0].dist(&pair[1]) < 1e-6 {
                continue;
            }
            let gs = closed_form_green(&small, &pair[0], &pair[1]).unwrap();
            let gb = closed_form_green(&big, &pair[0], &pair[1]).unwrap();
            assert!(gs >= gb - 1e-12, "monotonicity failed: {gs} < {gb}");
        }
    }

    #[test]
    fn biholomorphic_invariance_of_ball_closed_form() {
        let ball = DomainSpec::unit_ball(2);
        let a = pt2(0.3, -0.1);
        let phi = MapKind::BallAutomorphism { w: a };
        let z = pt2(0.4, 0.2);
        let w = pt2(-0.2, 0.3);
        let gz = closed_form_green(&ball, &z, &w).unwrap();
        let gi = closed_form_green(
            &ball,
            &phi.apply(&z).unwrap(),
            &phi.apply(&w).unwrap(),
        )
        .unwrap();
        assert_relative_eq!(gz, gi, epsilon = 1e-9);
    }

    #[test]
    fn maximality_comparison_on_ball() {
        // If a shipped competitor v ≤ g on sampled ∂G then v ≤ g on sampled G,
        // tested where g is exact (unit ball, pole at w outside Ḡ).
        let ball = DomainSpec::unit_ball(2);
        let w = pt2(0.6, 0.0);
        let g_center = pt2(-0.3, 0.0);
        let g_radius = 0.25;
        let v = ScalarField::BallLog { center: pt2(-0.3, 0.0), radius: 1.4 };
        // boundary check
        let mut boundary_ok = true;
        for dir in crate::geometry::deterministic_directions(2, 64) {
            let z = g_center.add(&dir.scale(Cplx::new(g_radius, 0.0)));
            let g = closed_form_green(&ball, &z, &w).unwrap();
            if v.eval(&z) > g {
                boundary_ok = false;
            }
        }
        assert!(boundary_ok, "competitor must sit below g on ∂G for this test");
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let dir = crate::geometry::random_unit(&mut rng, 2);
            let r = g_radius * crate::geometry::uniform(&mut rng);
            let z = g_center.add(&dir.scale(Cplx::new(r, 0.0)));
            let g = closed_form_green(&ball, &z, &w).unwrap();
            assert!(v.eval(&z) <= g + 1e-12);
        }
    }
}
