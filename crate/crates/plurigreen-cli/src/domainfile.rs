//! Domain-spec documents and command-line complex/point parsing.
//!
//! A domain file is JSON with a `type` tag and numeric parameter arrays;
//! complex numbers serialize as `[re, im]` pairs. Built-in instances are
//! addressable as `builtin:<name>` in place of a path.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64 as Cplx;
use serde::Deserialize;

use plurigreen::geometry::{ComplexPoint, DomainSpec, HartogsParams, SublevelParams};

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum DomainDoc {
    Ball {
        center: Vec<[f64; 2]>,
        radius: f64,
    },
    Polydisk {
        center: Vec<[f64; 2]>,
        radii: Vec<f64>,
    },
    PlanarComplement {
        outer_radius: f64,
        removed: Vec<RemovedDisk>,
    },
    SublevelDcg {
        #[serde(default)]
        c: Vec<f64>,
        #[serde(default)]
        k: Vec<f64>,
        #[serde(default)]
        terms: Option<usize>,
        #[serde(default)]
        mass: Option<f64>,
    },
    HartogsPgvlu {
        #[serde(default)]
        c: Vec<f64>,
        #[serde(default)]
        r: Vec<f64>,
        #[serde(default)]
        k: Vec<f64>,
        #[serde(default)]
        terms: Option<usize>,
    },
}

#[derive(Debug, Deserialize)]
struct RemovedDisk {
    center: [f64; 2],
    radius: f64,
}

fn point_from_pairs(pairs: &[[f64; 2]]) -> Result<ComplexPoint> {
    let coords: Vec<Cplx> = pairs.iter().map(|p| Cplx::new(p[0], p[1])).collect();
    ComplexPoint::from_coords(&coords).map_err(|e| anyhow!("{e}"))
}

/// Shipped instances addressable by name.
pub fn builtin(name: &str) -> Result<DomainSpec> {
    Ok(match name {
        "disk" => DomainSpec::unit_disk(),
        "ball2" => DomainSpec::unit_ball(2),
        "bidisk" => DomainSpec::unit_bidisk(),
        "sublevel" => DomainSpec::SublevelDcg(SublevelParams::default_instance()),
        "hartogs" => DomainSpec::HartogsPgvlu(HartogsParams::default_instance()),
        "planar" => DomainSpec::PlanarComplement {
            outer_radius: 2.0,
            removed: vec![
                (Cplx::new(0.3, 0.0), 0.02),
                (Cplx::new(-0.2, 0.25), 0.02),
                (Cplx::new(0.0, -0.4), 0.02),
            ],
        },
        other => bail!("unknown builtin domain '{other}'"),
    })
}

/// Loads a domain from `builtin:<name>` or a JSON file path.
pub fn load_domain(spec: &str) -> Result<DomainSpec> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name);
    }
    let text = fs::read_to_string(Path::new(spec))
        .with_context(|| format!("reading domain file {spec}"))?;
    parse_domain(&text)
}

pub fn parse_domain(text: &str) -> Result<DomainSpec> {
    let doc: DomainDoc = serde_json::from_str(text).context("parsing domain document")?;
    Ok(match doc {
        DomainDoc::Ball { center, radius } => DomainSpec::Ball {
            center: point_from_pairs(&center)?,
            radius,
        },
        DomainDoc::Polydisk { center, radii } => {
            let c = point_from_pairs(&center)?;
            if radii.len() != c.dim() {
                bail!("polydisk radii length {} does not match dimension {}", radii.len(), c.dim());
            }
            DomainSpec::Polydisk { center: c, radii }
        }
        DomainDoc::PlanarComplement { outer_radius, removed } => DomainSpec::PlanarComplement {
            outer_radius,
            removed: removed
                .iter()
                .map(|d| (Cplx::new(d.center[0], d.center[1]), d.radius))
                .collect(),
        },
        DomainDoc::SublevelDcg { c, k, terms, mass } => {
            let params = if !c.is_empty() || !k.is_empty() {
                SublevelParams::new(c, k).map_err(|e| anyhow!("{e}"))?
            } else {
                SublevelParams::shipped(terms.unwrap_or(8), mass.unwrap_or(0.125))
                    .map_err(|e| anyhow!("{e}"))?
            };
            DomainSpec::SublevelDcg(params)
        }
        DomainDoc::HartogsPgvlu { c, r, k, terms } => {
            let params = if !c.is_empty() || !r.is_empty() || !k.is_empty() {
                HartogsParams::new(c, r, k).map_err(|e| anyhow!("{e}"))?
            } else {
                HartogsParams::shipped(terms.unwrap_or(6)).map_err(|e| anyhow!("{e}"))?
            };
            DomainSpec::HartogsPgvlu(params)
        }
    })
}

/// Parses a single complex scalar in `a+bi` form (also `a`, `bi`, `a-bi`).
pub fn parse_complex(s: &str) -> Result<Cplx> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        bail!("empty complex literal");
    }
    if let Some(im_part) = t.strip_suffix('i') {
        // split at the last +/- that is not an exponent sign or leading sign
        let bytes = im_part.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = im_part[..idx].parse().context("real part")?;
                let im_str = &im_part[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().context("imaginary part")?
                };
                Ok(Cplx::new(re, im))
            }
            None => {
                let im: f64 = if im_part.is_empty() {
                    1.0
                } else if im_part == "-" {
                    -1.0
                } else {
                    im_part.parse().context("imaginary part")?
                };
                Ok(Cplx::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t.parse().context("real literal")?;
        Ok(Cplx::new(re, 0.0))
    }
}

/// Parses a point as comma-separated `re+imi` components.
pub fn parse_point(s: &str) -> Result<ComplexPoint> {
    let coords: Result<Vec<Cplx>> = s.split(',').map(parse_complex).collect();
    let p = ComplexPoint::from_coords(&coords?).map_err(|e| anyhow!("{e}"))?;
    if !p.is_finite() {
        bail!("point coordinates must be finite");
    }
    Ok(p)
}

/// Path file for continuity scans: JSON array of {"z": [[re,im],...], "w": ...}.
#[derive(Debug, Deserialize)]
struct PathEntry {
    z: Vec<[f64; 2]>,
    w: Vec<[f64; 2]>,
}

pub fn load_path(path: &str) -> Result<Vec<(ComplexPoint, ComplexPoint)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading path file {path}"))?;
    let entries: Vec<PathEntry> = serde_json::from_str(&text).context("parsing path file")?;
    entries
        .iter()
        .map(|e| Ok((point_from_pairs(&e.z)?, point_from_pairs(&e.w)?)))
        .collect()
}

/// Sequence file for compactify: points plus a declared limit tag.
#[derive(Debug, Deserialize)]
pub struct SequenceDoc {
    pub points: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub limit_angle: Option<f64>,
}

pub fn load_sequence(path: &str) -> Result<(Vec<ComplexPoint>, Option<f64>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading sequence file {path}"))?;
    let doc: SequenceDoc = serde_json::from_str(&text).context("parsing sequence file")?;
    let pts: Result<Vec<ComplexPoint>> = doc.points.iter().map(|p| point_from_pairs(p)).collect();
    Ok((pts?, doc.limit_angle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Cplx::new(0.5, 0.0));
        assert_eq!(parse_complex("0.5+0.25i").unwrap(), Cplx::new(0.5, 0.25));
        assert_eq!(parse_complex("-0.3i").unwrap(), Cplx::new(0.0, -0.3));
        assert_eq!(parse_complex("1e-3+2e-4i").unwrap(), Cplx::new(1e-3, 2e-4));
        assert_eq!(parse_complex("2-i").unwrap(), Cplx::new(2.0, -1.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn parse_point_dimensions() {
        assert_eq!(parse_point("0.5+0i").unwrap().dim(), 1);
        assert_eq!(parse_point("0.5,0.25i").unwrap().dim(), 2);
        assert!(parse_point("1,2,3").is_err());
    }

    #[test]
    fn ball_document_roundtrip() {
        let dom = parse_domain(r#"{"type":"ball","center":[[0,0],[0,0]],"radius":1.0}"#).unwrap();
        assert_eq!(dom, DomainSpec::unit_ball(2));
        assert!(parse_domain(r#"{"type":"torus"}"#).is_err());
        assert!(parse_domain("not json").is_err());
    }

    #[test]
    fn sublevel_document_defaults_and_validation() {
        let dom = parse_domain(r#"{"type":"sublevel_dcg"}"#).unwrap();
        assert!(matches!(dom, DomainSpec::SublevelDcg(_)));
        // inconsistent explicit parameters are rejected
        let bad = parse_domain(r#"{"type":"sublevel_dcg","c":[0.5,0.25],"k":[0.5,0.4]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn builtins_resolve() {
        for name in ["disk", "ball2", "bidisk", "sublevel", "hartogs", "planar"] {
            assert!(builtin(name).is_ok(), "builtin {name}");
        }
        assert!(builtin("nope").is_err());
    }
}
