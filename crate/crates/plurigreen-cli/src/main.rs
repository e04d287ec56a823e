use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as Cplx;
use serde_json::json;

use plurigreen::bounds;
use plurigreen::compactify::{boundary_trace, invariance_test, norming_form};
use plurigreen::disk;
use plurigreen::geometry::{ComplexPoint, Direction, MapKind};
use plurigreen::hyperconvex::{
    classify_pole, continuity_scan, exhaustion_check, pole_class_name, ratio_test, verdict_name,
    EngineSource,
};
use plurigreen::metrics::{azukawa, bergman_constants, sigma_estimates, HermitianMetric};
use plurigreen::SearchBudget;

use plurigreen_cli::domainfile::{load_domain, load_path, load_sequence, parse_point};
use plurigreen_cli::report::{csv_cell, extended, interval_json, tagged, write_output};
use plurigreen_cli::{exit_code_for, exit_codes, par, verify};

#[derive(Parser)]
#[command(
    name = "plurigreen",
    version,
    about = "Certified bounds for pluricomplex Green functions and invariant metrics on model domains"
)]
struct Cli {
    /// Base RNG seed for all searches
    #[arg(long, global = true, env = "PLURIGREEN_SEED")]
    seed: Option<u64>,
    /// Disk-engine restarts (0 disables the engine)
    #[arg(long, global = true)]
    restarts: Option<u32>,
    /// Polynomial degree of analytic disks
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Worker threads for grid scans
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output format for directional records (json | csv)
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write the primary output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DomainArg {
    /// Domain file path or builtin:<disk|ball2|bidisk|sublevel|hartogs|planar>
    #[arg(long)]
    domain: String,
}

#[derive(Subcommand)]
enum Command {
    /// Certified interval for the pluricomplex Green function g(z, w)
    Green {
        #[command(flatten)]
        domain: DomainArg,
        /// Point z as comma-separated re+imi components
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Certified upper bound for the Kobayashi function
    Kobayashi {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Certified lower bound from the Carathéodory candidate family
    Caratheodory {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Azukawa directional enclosure at (w, v)
    Azukawa {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Certified upper bound for the Royden function at (w, v)
    Royden {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Directional capacity estimates σ^i, σ^s
    Sigma {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// euclidean | bergman-ball | bergman-polydisk
        #[arg(long, default_value = "euclidean")]
        metric: String,
    },
    /// Classify the logarithmic pole of g(·, w)
    ClassifyPole {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = 0.5)]
        spread_bound: f64,
    },
    /// Ratio-continuity search around w0
    RatioTest {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w0: String,
        #[arg(long, default_value_t = 0.3)]
        excluded_radius: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Sublevel clearance of g(·, w) and the g ≥ b·u comparison
    Exhaustion {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Comma-separated negative levels, e.g. "-1,-2"
        #[arg(long, allow_hyphen_values = true)]
        levels: String,
    },
    /// Interval scan along a path of (z, w) pairs; last entry is the limit
    ContinuityScan {
        #[command(flatten)]
        domain: DomainArg,
        /// JSON path file: [{"z": [[re,im],..], "w": [[re,im],..]}, ...]
        #[arg(long)]
        path: String,
    },
    /// Pluripotential compactification diagnostics on the disk/bidisk
    Compactify {
        #[command(flatten)]
        domain: DomainArg,
        /// Comma-separated boundary angles for the default sequences
        #[arg(long, default_value = "0,1.5707963267948966,3.141592653589793")]
        angles: String,
        #[arg(long, default_value_t = 10)]
        depth: i32,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Optional sequence file overriding the default angle sequences
        #[arg(long)]
        sequence: Option<String>,
        /// Write the pairwise distance matrix as CSV
        #[arg(long)]
        matrix_out: Option<PathBuf>,
    },
    /// Interval scan over a coordinate grid; CSV output
    Scan {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Grid points per axis over the first coordinate plane
        #[arg(long, default_value_t = 33)]
        grid: usize,
        /// Half-width of the scanned square (defaults to the domain scale)
        #[arg(long)]
        extent: Option<f64>,
        /// Fixed value for the second coordinate (2-dimensional domains)
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        fix: String,
    },
    /// Run a verification suite
    Verify {
        /// chain|monotone|pole|ratio|azukawa|sigma|suita|jensen|discontinuity|compactify|all
        suite: String,
    },
    /// Print defaults, shipped domain instances and tolerances
    Describe,
}

fn budget_from(cli: &Cli) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(seed) = cli.seed {
        b.seed = seed;
    }
    if let Some(restarts) = cli.restarts {
        b.restarts = restarts;
    }
    if let Some(degree) = cli.degree {
        b.degree = degree;
    }
    b
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<plurigreen::Error>()
                .map(exit_code_for)
                .unwrap_or(exit_codes::INPUT);
            ExitCode::from(code)
        }
    }
}

fn directional_csv_header(dim: usize) -> String {
    let mut cols = Vec::new();
    for i in 1..=dim {
        cols.push(format!("re_w{i}"));
        cols.push(format!("im_w{i}"));
    }
    for i in 1..=dim {
        cols.push(format!("re_v{i}"));
        cols.push(format!("im_v{i}"));
    }
    cols.extend(["a_lo", "a_hi", "r_hi", "sigma_i_lo", "sigma_s_hi"].map(String::from));
    format!("{}\n", cols.join(","))
}

fn directional_csv_row(
    w: &ComplexPoint,
    v: &ComplexPoint,
    a_lo: f64,
    a_hi: f64,
    r_hi: f64,
    sigma_i: f64,
    sigma_s: f64,
) -> String {
    let mut cells = Vec::new();
    for p in [w, v] {
        for c in p.coords() {
            cells.push(csv_cell(c.re));
            cells.push(csv_cell(c.im));
        }
    }
    for x in [a_lo, a_hi, r_hi, sigma_i, sigma_s] {
        cells.push(csv_cell(x));
    }
    format!("{}\n", cells.join(","))
}

fn metric_from(name: &str, dim: usize) -> anyhow::Result<HermitianMetric> {
    Ok(match name {
        "euclidean" => HermitianMetric::Euclidean,
        "bergman-ball" => HermitianMetric::BergmanBall { m: dim },
        "bergman-polydisk" => HermitianMetric::BergmanPolydisk { m: dim },
        other => anyhow::bail!("unknown metric '{other}'"),
    })
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let budget = budget_from(cli);
    match &cli.command {
        Command::Green { domain, z, w } => {
            let dom = load_domain(&domain.domain)?;
            let z = parse_point(z)?;
            let w = parse_point(w)?;
            let b = bounds::green_interval(&dom, &z, &w, &budget)?;
            if b.hi == f64::INFINITY && !b.is_pole() {
                write_output(&cli.out, &format!("{}\n", interval_json(&b)))?;
                return Ok(exit_codes::INFEASIBLE);
            }
            write_output(&cli.out, &format!("{}\n", interval_json(&b)))?;
            Ok(exit_codes::OK)
        }
        Command::Kobayashi { domain, z, w } => {
            let dom = load_domain(&domain.domain)?;
            let z = parse_point(z)?;
            let w = parse_point(w)?;
            let b = disk::kobayashi_bound(&dom, &z, &w, &budget)?;
            write_output(&cli.out, &format!("{}\n", interval_json(&b)))?;
            Ok(exit_codes::OK)
        }
        Command::Caratheodory { domain, z, w } => {
            let dom = load_domain(&domain.domain)?;
            let z = parse_point(z)?;
            let w = parse_point(w)?;
            let b = bounds::caratheodory_bound(&dom, &z, &w, &budget)?;
            write_output(&cli.out, &format!("{}\n", interval_json(&b)))?;
            Ok(exit_codes::OK)
        }
        Command::Azukawa { domain, w, v } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let v = parse_point(v)?;
            let dir = Direction::new(w, v).map_err(anyhow::Error::from)?;
            let a = azukawa(&dom, &dir, &budget)?;
            if cli.format == "csv" {
                // full DirectionalSample row, Royden and σ references included
                let r = disk::royden_bound(&dom, &dir, &budget)
                    .map(|b| b.hi)
                    .unwrap_or(f64::INFINITY);
                let s = sigma_estimates(&dom, &w, HermitianMetric::Euclidean, &budget)?;
                let mut csv = directional_csv_header(dom.dim());
                csv.push_str(&directional_csv_row(&w, &dir.vector, a.lo, a.hi, r, s.i_lo, s.s_hi));
                write_output(&cli.out, &csv)?;
            } else {
                let out = json!({
                    "a_lo": tagged(a.lo, "certified_lo"),
                    "a_hi": tagged(a.hi, "certified_hi"),
                    "tail_fit_intercept": tagged(a.intercept, "estimate"),
                });
                write_output(&cli.out, &format!("{out}\n"))?;
            }
            Ok(exit_codes::OK)
        }
        Command::Royden { domain, w, v } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let v = parse_point(v)?;
            let dir = Direction::new(w, v).map_err(anyhow::Error::from)?;
            let b = disk::royden_bound(&dom, &dir, &budget)?;
            write_output(&cli.out, &format!("{}\n", interval_json(&b)))?;
            Ok(exit_codes::OK)
        }
        Command::Sigma { domain, w, metric } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let metric = metric_from(metric, dom.dim())?;
            let s = sigma_estimates(&dom, &w, metric, &budget)?;
            if cli.format == "csv" {
                // one DirectionalSample row per sampled direction
                let count = if dom.dim() == 1 { 1 } else { 16 };
                let royden_budget =
                    SearchBudget { restarts: budget.restarts.min(2), ..budget.clone() };
                let mut csv = directional_csv_header(dom.dim());
                for d in plurigreen::geometry::deterministic_directions(dom.dim(), count) {
                    let hn = metric.norm(&w, &d);
                    let v = d.scale(num_complex::Complex64::new(1.0 / hn, 0.0));
                    let dir = Direction::new(w, v).map_err(anyhow::Error::from)?;
                    let a = azukawa(&dom, &dir, &budget)?;
                    let r = disk::royden_bound(&dom, &dir, &royden_budget)
                        .map(|b| b.hi)
                        .unwrap_or(f64::INFINITY);
                    csv.push_str(&directional_csv_row(&w, &v, a.lo, a.hi, r, s.i_lo, s.s_hi));
                }
                write_output(&cli.out, &csv)?;
                return Ok(exit_codes::OK);
            }
            let mut out = json!({
                "sigma_s": { "lo": tagged(s.s_lo, "estimate"), "hi": tagged(s.s_hi, "estimate") },
                "sigma_i": { "lo": tagged(s.i_lo, "estimate"), "hi": tagged(s.i_hi, "estimate") },
                "directions": s.directions,
            });
            if let Ok(c) = bergman_constants(&dom) {
                out["closed_form"] = json!({
                    "sigma_s": tagged(c.sigma_s, "closed_form"),
                    "sigma_i": tagged(c.sigma_i, "closed_form"),
                    "b_coeff": tagged(c.b_coeff, "closed_form"),
                });
            }
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::ClassifyPole { domain, w, spread_bound } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let src = EngineSource { domain: &dom, cfg: budget.clone() };
            let fit = classify_pole(&src, &dom, &w, &budget, *spread_bound)?;
            let out = json!({
                "classification": pole_class_name(fit.class),
                "c1": tagged(fit.c1, "certified_lo"),
                "c2": tagged(fit.c2, "certified_hi"),
                "radii": fit.radii,
                "lower_envelope_min": fit.lower_min.iter().map(|v| extended(*v)).collect::<Vec<_>>(),
                "upper_envelope_max": fit.upper_max.iter().map(|v| extended(*v)).collect::<Vec<_>>(),
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::RatioTest { domain, w0, excluded_radius, eps } => {
            let dom = load_domain(&domain.domain)?;
            let w0 = parse_point(w0)?;
            let rep = ratio_test(&dom, &w0, *excluded_radius, *eps, &budget)?;
            let out = json!({
                "delta": rep.delta,
                "deviation": tagged(rep.deviation, "estimate"),
                "table": rep.table,
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::Exhaustion { domain, w, levels } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let levels: Vec<f64> = levels
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()?;
            let rep = exhaustion_check(&dom, &w, &levels, &budget)?;
            let out = json!({
                "b": tagged(rep.b, "estimate"),
                "bu_holds": rep.bu_holds,
                "bu_worst_slack": tagged(rep.bu_worst_slack, "estimate"),
                "levels": rep.levels.iter().map(|l| json!({
                    "level": l.level,
                    "samples_in_sublevel": l.samples_in_sublevel,
                    "min_margin": tagged(l.min_margin, "estimate"),
                })).collect::<Vec<_>>(),
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::ContinuityScan { domain, path } => {
            let dom = load_domain(&domain.domain)?;
            let pairs = load_path(path)?;
            let src = EngineSource { domain: &dom, cfg: budget.clone() };
            let rep = continuity_scan(&src, &pairs)?;
            let out = json!({
                "verdict": verdict_name(rep.verdict),
                "gap": tagged(rep.gap, "certified_lo"),
                "limit": interval_json(&rep.limit),
                "tail": rep.tail.iter().map(interval_json).collect::<Vec<_>>(),
                "tail_width": rep.tail_width,
                "limit_width": rep.limit_width,
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::Compactify { domain, angles, depth, resolution, sequence, matrix_out } => {
            let dom = load_domain(&domain.domain)?;
            let form = norming_form(&dom, *resolution)?;
            let mut reports = Vec::new();
            let sequences: Vec<(Vec<ComplexPoint>, Option<f64>)> = match sequence {
                Some(path) => vec![load_sequence(path)?],
                None => {
                    if dom.dim() != 1 {
                        anyhow::bail!("default angle sequences require a 1-dimensional domain");
                    }
                    angles
                        .split(',')
                        .map(|s| -> anyhow::Result<_> {
                            let a: f64 = s.trim().parse()?;
                            let seq: Vec<ComplexPoint> = (1..=*depth)
                                .map(|j| {
                                    let r = 1.0 - 0.5f64.powi(j);
                                    ComplexPoint::one(Cplx::new(r * a.cos(), r * a.sin()))
                                })
                                .collect();
                            Ok((seq, Some(a)))
                        })
                        .collect::<anyhow::Result<_>>()?
                }
            };
            let mut finals = Vec::new();
            for (seq, limit) in &sequences {
                let t = boundary_trace(&form, seq, *limit)?;
                finals.push(form.phi_v(seq.last().unwrap())?);
                reports.push(json!({
                    "limit_angle": limit,
                    "successive": t.successive,
                    "poisson_match": t.poisson_match,
                }));
            }
            let n = finals.len();
            let mut matrix = vec![vec![0.0f64; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let d = form.l1_distance(&finals[i], &finals[j]);
                    matrix[i][j] = d;
                    matrix[j][i] = d;
                }
            }
            if let Some(path) = matrix_out {
                let mut csv = String::new();
                for row in &matrix {
                    let cells: Vec<String> = row.iter().map(|d| csv_cell(*d)).collect();
                    csv.push_str(&cells.join(","));
                    csv.push('\n');
                }
                std::fs::write(path, csv)?;
            }
            // invariance under the default Möbius automorphism
            let mut samples = Vec::new();
            for (seq, _) in &sequences {
                samples.extend(seq.iter().rev().take(4).cloned());
            }
            let invariance = if dom.dim() == 1 {
                let map = MapKind::MoebiusCoord { index: 0, a: Cplx::new(-0.5, 0.0) };
                let rep = invariance_test(&form, &form, &map, &samples, &[0.5, 0.2, 0.1])?;
                json!({ "per_eps": rep.per_eps, "max_edit_distance": rep.max_distance })
            } else {
                let rep = invariance_test(&form, &form, &MapKind::CoordSwap, &samples, &[0.5, 0.2, 0.1])?;
                json!({ "per_eps": rep.per_eps, "max_edit_distance": rep.max_distance })
            };
            let out = json!({
                "mass": tagged(form.mass, "estimate"),
                "sequences": reports,
                "final_distance_matrix": matrix,
                "invariance": invariance,
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
        Command::Scan { domain, w, grid, extent, fix } => {
            let dom = load_domain(&domain.domain)?;
            let w = parse_point(w)?;
            let fix = plurigreen_cli::domainfile::parse_complex(fix)?;
            let half = extent.unwrap_or_else(|| dom.bounding_radius_at(&w));
            let n = *grid;
            let mut points = Vec::with_capacity(n * n);
            for iy in 0..n {
                for ix in 0..n {
                    let x = if n > 1 { -half + 2.0 * half * ix as f64 / (n - 1) as f64 } else { 0.0 };
                    let y = if n > 1 { -half + 2.0 * half * iy as f64 / (n - 1) as f64 } else { 0.0 };
                    let z1 = Cplx::new(x, y);
                    let p = if dom.dim() == 1 {
                        ComplexPoint::one(z1)
                    } else {
                        ComplexPoint::two(z1, fix)
                    };
                    points.push(p);
                }
            }
            let rows = par::parallel_map(&points, cli.workers, |p| {
                let inside = matches!(dom.contains(p), Ok(m) if m > 0.0);
                if !inside {
                    return format!(
                        "{},{},outside,,,,,",
                        p.coord(0).re,
                        p.coord(0).im
                    );
                }
                match bounds::green_interval(&dom, p, &w, &budget) {
                    Ok(b) => format!(
                        "{},{},inside,{},{},{},{},{}",
                        p.coord(0).re,
                        p.coord(0).im,
                        csv_cell(b.lo),
                        csv_cell(b.hi),
                        b.lo_witness,
                        b.hi_witness,
                        b.certified
                    ),
                    Err(e) => format!("{},{},error:{e},,,,,", p.coord(0).re, p.coord(0).im),
                }
            });
            let mut csv = String::from("re_z1,im_z1,status,lo,hi,lo_witness,hi_witness,certified\n");
            for row in rows {
                csv.push_str(&row);
                csv.push('\n');
            }
            write_output(&cli.out, &csv)?;
            Ok(exit_codes::OK)
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                verify::SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut all_pass = true;
            let mut text = String::new();
            for name in names {
                let result = verify::run_suite(name, &budget)?;
                all_pass &= result.passed();
                text.push_str(&result.render());
            }
            write_output(&cli.out, &text)?;
            Ok(if all_pass { exit_codes::OK } else { 1 })
        }
        Command::Describe => {
            let sublevel = plurigreen::geometry::SublevelParams::default_instance();
            let hartogs = plurigreen::geometry::HartogsParams::default_instance();
            let b = SearchBudget::default();
            let out = json!({
                "defaults": {
                    "seed": b.seed,
                    "restarts": b.restarts,
                    "degree": b.degree,
                    "max_hits": b.max_hits,
                    "boundary_samples": b.boundary_samples,
                    "grid": [b.grid_radii, b.grid_angles],
                    "simplex_iters": b.simplex_iters,
                    "annuli": b.annuli,
                    "annulus_angles": b.annulus_angles,
                },
                "env": { "seed_var": "PLURIGREEN_SEED" },
                "exit_codes": { "ok": 0, "input_error": 2, "soundness_violation": 3, "infeasible": 4 },
                "builtins": ["disk", "ball2", "bidisk", "sublevel", "hartogs", "planar"],
                "sublevel_instance": { "c": sublevel.c(), "k": sublevel.k() },
                "hartogs_instance": { "c": hartogs.c(), "r": hartogs.r(), "k": hartogs.k() },
                "verify_suites": verify::SUITES,
            });
            write_output(&cli.out, &format!("{out}\n"))?;
            Ok(exit_codes::OK)
        }
    }
}
