//! Command-line front end: parse polynomials, run analyses, and emit JSON
//! or CSV reports and plot data.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num::bigint::BigInt;
use num::rational::BigRational;
use serde_json::{json, Value};

use archtrop::bounds;
use archtrop::isolate;
use archtrop::oracle;
use archtrop::tropical::{self, Membership, QueryPoint, TropicalCurve};
use archtrop::{parse_laurent, Error, LaurentPoly};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "archtrop", about = "Archimedean tropical varieties of sparse polynomials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// working precision cap in bits for exact sign tests (53..=16384)
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// output format: json or csv (csv for amoeba/plot data only)
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute ArchTrop(f): slope multiset (n=1) or tropical curve (n=2)
    Analyze {
        /// polynomial text, or @file
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
        /// include window-clipped plot segments
        #[arg(long)]
        plot: bool,
        /// plot window "x0,x1,y0,y1" (default -7,7,-7,7)
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Exact membership of a query point in ArchTrop(f)
    Member {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
        /// strictly positive rational coordinates, e.g. "1,1/10"
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// rational log-coordinates instead of a rational point
        #[arg(long, allow_hyphen_values = true)]
        log_point: Option<String>,
    },
    /// Univariate root-norm bounds: Cauchy, bracket, gaps, Jensen, menu
    Bounds {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Numerical amoeba: root log-norms (n=1) or fiber-sampled cloud (n=2)
    Amoeba {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
        /// number of fiber moduli (n=2)
        #[arg(long)]
        moduli: Option<usize>,
        /// phases per modulus (n=2)
        #[arg(long)]
        phases: Option<usize>,
        /// modulus range "lo,hi" in log space (n=2)
        #[arg(long, allow_hyphen_values = true)]
        modulus_range: Option<String>,
    },
    /// Empirical directed Hausdorff distances plus the bound menu
    Hausdorff {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
    /// Intersect the tropical sets of a square system and isolate root norms
    // no allow_hyphen_values here: a greedy positional would swallow flags;
    // pass leading-minus polynomials via @file or with a leading space
    Isolate {
        polys: Vec<String>,
    },
}

struct Failure {
    code: u8,
    payload: Value,
}

fn failure(kind: &str, message: String, code: u8) -> Failure {
    Failure {
        code,
        payload: json!({"error": {"kind": kind, "message": message}}),
    }
}

fn lib_failure(e: Error) -> Failure {
    let code = if matches!(e, Error::PrecisionExhausted) {
        2
    } else {
        1
    };
    failure(&format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(), e.to_string(), code)
}

fn read_arg(text: &str) -> Result<String, Failure> {
    if let Some(path) = text.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| failure("Io", format!("cannot read {path}: {e}"), 1))
    } else {
        Ok(text.to_string())
    }
}

fn infer_nvars(text: &str) -> usize {
    let mut n = 1usize;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'x' {
            let mut j = i + 1;
            let mut v = 0usize;
            while j < chars.len() && chars[j].is_ascii_digit() {
                v = v * 10 + (chars[j] as usize - '0' as usize);
                j += 1;
            }
            if j > i + 1 {
                n = n.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

fn parse_input(text: &str, nvars: Option<usize>) -> Result<LaurentPoly, Failure> {
    let src = read_arg(text)?;
    let n = nvars.unwrap_or_else(|| infer_nvars(&src));
    parse_laurent(&src, n).map_err(lib_failure)
}

fn parse_rationals(text: &str) -> Result<Vec<BigRational>, Failure> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a, b),
                None => (s, "1"),
            };
            let n = BigInt::from_str(num.trim())
                .map_err(|_| failure("Syntax", format!("bad rational {s}"), 1))?;
            let d = BigInt::from_str(den.trim())
                .map_err(|_| failure("Syntax", format!("bad rational {s}"), 1))?;
            if d == BigInt::from(0) {
                return Err(failure("Syntax", format!("zero denominator in {s}"), 1));
            }
            Ok(BigRational::new(n, d))
        })
        .collect()
}

fn fl(v: f64, err: f64) -> Value {
    json!({"float": v, "err": err})
}

fn exact_fl(x: &archtrop::ExactLogValue) -> Value {
    let (v, e) = x.approx();
    json!({"float": v, "err": e, "exact": x.to_string()})
}

fn curve_json(c: &TropicalCurve) -> Value {
    json!({
        "vertices": c.vertices.iter().map(|v| json!({
            "x": exact_fl(&v.x),
            "y": exact_fl(&v.y),
            "terms": v.terms,
        })).collect::<Vec<_>>(),
        "segments": c.segments.iter().map(|s| json!({
            "ends": s.ends,
            "dominating": s.dominating,
        })).collect::<Vec<_>>(),
        "rays": c.rays.iter().map(|r| json!({
            "base": r.base,
            "dir": r.dir,
            "dominating": r.dominating,
        })).collect::<Vec<_>>(),
    })
}

/// Liang–Barsky clip of `a + t*d`, `t` in `[0, t_hi]`, to the window.
fn clip_piece(
    a: [f64; 2],
    d: [f64; 2],
    t_hi: f64,
    w: [f64; 4],
) -> Option<([f64; 2], [f64; 2])> {
    let mut t0 = 0.0f64;
    let mut t1 = t_hi;
    let checks = [
        (-d[0], a[0] - w[0]),
        (d[0], w[1] - a[0]),
        (-d[1], a[1] - w[2]),
        (d[1], w[3] - a[1]),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    Some((
        [a[0] + t0 * d[0], a[1] + t0 * d[1]],
        [a[0] + t1 * d[0], a[1] + t1 * d[1]],
    ))
}

fn plot_segments(c: &TropicalCurve, w: [f64; 4]) -> Vec<[f64; 4]> {
    let coords = |i: usize| -> [f64; 2] {
        let (x, _) = c.vertices[i].x.approx();
        let (y, _) = c.vertices[i].y.approx();
        [x, y]
    };
    let mut out = Vec::new();
    for s in &c.segments {
        let a = coords(s.ends[0]);
        let b = coords(s.ends[1]);
        if let Some((p, q)) = clip_piece(a, [b[0] - a[0], b[1] - a[1]], 1.0, w) {
            out.push([p[0], p[1], q[0], q[1]]);
        }
    }
    for r in &c.rays {
        let a = coords(r.base);
        let d = [r.dir[0] as f64, r.dir[1] as f64];
        if let Some((p, q)) = clip_piece(a, d, 1e6, w) {
            out.push([p[0], p[1], q[0], q[1]]);
        }
    }
    out
}

fn run(cli: &Cli) -> Result<(Value, Vec<String>, Option<String>), Failure> {
    let mut warnings: Vec<String> = Vec::new();
    let mut csv: Option<String> = None;
    let results = match &cli.cmd {
        Cmd::Analyze {
            poly,
            nvars,
            plot,
            window,
        } => {
            let f = parse_input(poly, *nvars)?;
            match f.n() {
                1 => {
                    let trop = tropical::archtrop_1d(&f).map_err(lib_failure)?;
                    json!({
                        "archtrop": {
                            "slopes": trop.points.iter().map(|(s, m)| {
                                let mut v = exact_fl(s);
                                v["multiplicity"] = json!(m);
                                v
                            }).collect::<Vec<_>>(),
                        }
                    })
                }
                2 => {
                    let curve = tropical::archtrop_2d(&f).map_err(lib_failure)?;
                    let mut out = json!({ "archtrop": curve_json(&curve) });
                    if *plot {
                        let w = match window {
                            Some(t) => {
                                let v: Vec<f64> = t
                                    .split(',')
                                    .map(|s| s.trim().parse::<f64>())
                                    .collect::<Result<_, _>>()
                                    .map_err(|_| {
                                        failure("Syntax", format!("bad window {t}"), 1)
                                    })?;
                                if v.len() != 4 {
                                    return Err(failure(
                                        "Syntax",
                                        "window needs 4 numbers".into(),
                                        1,
                                    ));
                                }
                                [v[0], v[1], v[2], v[3]]
                            }
                            None => [-7.0, 7.0, -7.0, 7.0],
                        };
                        let segs = plot_segments(&curve, w);
                        if cli.format == "csv" {
                            let mut s = String::from("x1,y1,x2,y2\n");
                            for p in &segs {
                                s.push_str(&format!("{},{},{},{}\n", p[0], p[1], p[2], p[3]));
                            }
                            csv = Some(s);
                        }
                        out["plot"] = json!({ "window": w, "segments": segs });
                    }
                    out
                }
                n => {
                    return Err(failure(
                        "NotPlanar",
                        format!("analyze supports 1 or 2 variables, got {n}"),
                        1,
                    ))
                }
            }
        }
        Cmd::Member {
            poly,
            nvars,
            point,
            log_point,
        } => {
            let f = parse_input(poly, *nvars)?;
            let q = match (point, log_point) {
                (Some(p), None) => QueryPoint::Rational(parse_rationals(p)?),
                (None, Some(p)) => QueryPoint::Log(parse_rationals(p)?),
                _ => {
                    return Err(failure(
                        "Usage",
                        "member needs exactly one of --point / --log-point".into(),
                        1,
                    ))
                }
            };
            let v = tropical::member(&f, &q).map_err(lib_failure)?;
            json!({
                "member": {
                    "status": if v.status == Membership::In { "In" } else { "Out" },
                    "dominating": v.dominating,
                }
            })
        }
        Cmd::Bounds { poly } => {
            let f = parse_input(poly, Some(1))?;
            let cauchy = bounds::cauchy_annulus(&f).map_err(lib_failure)?;
            let bracket = bounds::smallest_root_bracket(&f).map_err(lib_failure)?;
            let gaps = bounds::gap_counts(&f).map_err(lib_failure)?;
            let jensen = bounds::annulus_certificate(&f).map_err(lib_failure)?;
            let trop = tropical::archtrop_1d(&f).map_err(lib_failure)?;
            let (a1, at) = f.exponent_range(0);
            let menu = bounds::hausdorff_upper(
                f.term_count(),
                1,
                Some(bounds::slope_count(&trop)),
                Some(at - a1),
                f.term_count() == 2,
            )
            .map_err(lib_failure)?;
            json!({
                "bounds": {
                    "cauchy": {"inner": fl(cauchy.inner.0, cauchy.inner.1),
                               "outer": fl(cauchy.outer.0, cauchy.outer.1)},
                    "smallest_root_bracket": {"inner": fl(bracket.inner.0, bracket.inner.1),
                                              "outer": fl(bracket.outer.0, bracket.outer.1)},
                    "gaps": {
                        "cut_pairs": gaps.cut_pairs.iter()
                            .map(|(a, b)| json!([exact_fl(a), exact_fl(b)]))
                            .collect::<Vec<_>>(),
                        "counts": gaps.counts.iter().map(|(iv, c)| json!({
                            "lo": iv.lo.as_ref().map(exact_fl),
                            "hi": iv.hi.as_ref().map(exact_fl),
                            "count": c,
                        })).collect::<Vec<_>>(),
                    },
                    "jensen": jensen.map(|j| json!({
                        "epsilon": fl(j.epsilon.0, j.epsilon.1),
                        "inner": fl(j.annulus.inner.0, j.annulus.inner.1),
                        "outer": fl(j.annulus.outer.0, j.annulus.outer.1),
                    })),
                    "hausdorff_menu": menu.iter().map(|b| json!({
                        "value": b.value,
                        "provenance": b.provenance,
                        "directed": b.directed,
                    })).collect::<Vec<_>>(),
                }
            })
        }
        Cmd::Amoeba {
            poly,
            nvars,
            moduli,
            phases,
            modulus_range,
        } => {
            let f = parse_input(poly, *nvars)?;
            match f.n() {
                1 => {
                    let am = oracle::amoeba_1d(&f).map_err(lib_failure)?;
                    if cli.format == "csv" {
                        let mut s = String::from("log_norm,multiplicity,err\n");
                        for (l, m, e) in &am {
                            s.push_str(&format!("{l},{m},{e}\n"));
                        }
                        csv = Some(s);
                    }
                    json!({
                        "amoeba": {
                            "points": am.iter().map(|(l, m, e)| json!({
                                "log_norm": l, "multiplicity": m, "err": e,
                            })).collect::<Vec<_>>(),
                        }
                    })
                }
                2 => {
                    let curve = tropical::archtrop_2d(&f).map_err(lib_failure)?;
                    let mut grid = oracle::default_grid(&f, &curve);
                    if let Some(t) = modulus_range {
                        let v: Vec<f64> = t
                            .split(',')
                            .map(|s| s.trim().parse::<f64>())
                            .collect::<Result<_, _>>()
                            .map_err(|_| failure("Syntax", format!("bad range {t}"), 1))?;
                        if v.len() != 2 {
                            return Err(failure("Syntax", "range needs 2 numbers".into(), 1));
                        }
                        grid = oracle::FiberGrid::span(v[0], v[1]);
                    }
                    if let Some(m) = moduli {
                        if *m == 0 {
                            return Err(failure("Usage", "moduli must be positive".into(), 1));
                        }
                        let (lo, hi) = (
                            grid.moduli[0],
                            *grid.moduli.last().unwrap(),
                        );
                        grid.moduli = (0..*m)
                            .map(|i| lo + (hi - lo) * i as f64 / (*m as f64 - 1.0).max(1.0))
                            .collect();
                    }
                    if let Some(p) = phases {
                        if *p == 0 {
                            return Err(failure("Usage", "phases must be positive".into(), 1));
                        }
                        grid.phases = *p;
                    }
                    let cloud = oracle::sample_amoeba_2d(&f, &grid).map_err(lib_failure)?;
                    if cloud.degenerate_fibers > 0 {
                        warnings.push(format!(
                            "{} degenerate fibers skipped",
                            cloud.degenerate_fibers
                        ));
                    }
                    if cli.format == "csv" {
                        let mut s = String::from("log_x1,log_x2,err\n");
                        for (p, e) in &cloud.points {
                            s.push_str(&format!("{},{},{}\n", p[0], p[1], e));
                        }
                        csv = Some(s);
                    }
                    json!({
                        "amoeba": {
                            "points": cloud.points.iter()
                                .map(|(p, e)| json!([p[0], p[1], e]))
                                .collect::<Vec<_>>(),
                            "degenerate_fibers": cloud.degenerate_fibers,
                            "grid": {"moduli": grid.moduli, "phases": grid.phases},
                        }
                    })
                }
                n => {
                    return Err(failure(
                        "NotPlanar",
                        format!("amoeba supports 1 or 2 variables, got {n}"),
                        1,
                    ))
                }
            }
        }
        Cmd::Hausdorff { poly, nvars } => {
            let f = parse_input(poly, *nvars)?;
            match f.n() {
                1 => {
                    let trop = tropical::archtrop_1d(&f).map_err(lib_failure)?;
                    let am = oracle::amoeba_1d(&f).map_err(lib_failure)?;
                    let pts = oracle::SamplePoints::One(
                        am.iter().map(|p| (p.0, p.2)).collect(),
                    );
                    let (d_am, e_am) =
                        oracle::directed_hausdorff(&pts, &oracle::DistTarget::Slopes(&trop))
                            .map_err(lib_failure)?;
                    let cloud: Vec<f64> = am.iter().map(|p| p.0).collect();
                    let slope_pts = oracle::SamplePoints::One(
                        trop.points
                            .iter()
                            .map(|(s, _)| {
                                let (v, e) = s.approx();
                                (v, e)
                            })
                            .collect(),
                    );
                    let (d_tr, e_tr) = oracle::directed_hausdorff(
                        &slope_pts,
                        &oracle::DistTarget::Cloud1(&cloud),
                    )
                    .map_err(lib_failure)?;
                    let menu = bounds::hausdorff_upper(
                        f.term_count(),
                        1,
                        Some(bounds::slope_count(&trop)),
                        None,
                        f.term_count() == 2,
                    )
                    .map_err(lib_failure)?;
                    json!({
                        "hausdorff": {
                            "amoeba_to_archtrop": fl(d_am, e_am),
                            "archtrop_to_amoeba": fl(d_tr, e_tr),
                            "bounds": menu.iter().map(|b| json!({
                                "value": b.value,
                                "provenance": b.provenance,
                                "directed": b.directed,
                            })).collect::<Vec<_>>(),
                        }
                    })
                }
                2 => {
                    let curve = tropical::archtrop_2d(&f).map_err(lib_failure)?;
                    let grid = oracle::default_grid(&f, &curve);
                    let cloud = oracle::sample_amoeba_2d(&f, &grid).map_err(lib_failure)?;
                    warnings.push(
                        "cloud-based distances are sample estimates, lower bounds only".into(),
                    );
                    let pts = oracle::SamplePoints::Two(cloud.points.clone());
                    let (d_am, e_am) =
                        oracle::directed_hausdorff(&pts, &oracle::DistTarget::Curve(&curve))
                            .map_err(lib_failure)?;
                    json!({
                        "hausdorff": {
                            "amoeba_to_archtrop": fl(d_am, e_am),
                            "samples": cloud.points.len(),
                        }
                    })
                }
                n => {
                    return Err(failure(
                        "NotPlanar",
                        format!("hausdorff supports 1 or 2 variables, got {n}"),
                        1,
                    ))
                }
            }
        }
        Cmd::Isolate { polys } => {
            if polys.is_empty() {
                return Err(failure("Usage", "isolate needs k polynomials".into(), 1));
            }
            let n = polys.len();
            let fs: Vec<LaurentPoly> = polys
                .iter()
                .map(|p| parse_input(p, Some(n)))
                .collect::<Result<_, _>>()?;
            let r = isolate::intersect_tropical(&fs).map_err(lib_failure)?;
            if !r.nonisolated.is_empty() {
                warnings.push(format!(
                    "{} face tuples overlap in positive dimension; \
                     candidate list may be incomplete",
                    r.nonisolated.len()
                ));
            }
            let regions = isolate::isolation_regions(&r.points, &fs);
            json!({
                "isolate": {
                    "candidates": r.points.iter().map(|p| json!({
                        "coords": p.coords.iter().map(exact_fl).collect::<Vec<_>>(),
                        "witness": p.witness,
                    })).collect::<Vec<_>>(),
                    "regions": regions.iter().map(|reg| json!({
                        "radii": reg.radii.iter().map(exact_fl).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "nonisolated": r.nonisolated,
                }
            })
        }
    };
    Ok((results, warnings, csv))
}

fn main() -> ExitCode {
    // map clap usage errors to exit code 1; help/version still exit 0
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(bits) = cli.precision_bits {
        if !(53..=16384).contains(&bits) {
            eprintln!(
                "{}",
                json!({"error": {"kind": "Usage",
                    "message": format!("precision_bits {bits} outside 53..=16384")}})
            );
            return ExitCode::from(1);
        }
        std::env::set_var("ARCHTROP_PRECISION_BITS", bits.to_string());
    }
    if cli.format != "json" && cli.format != "csv" {
        eprintln!(
            "{}",
            json!({"error": {"kind": "Usage",
                "message": format!("unknown format {}", cli.format)}})
        );
        return ExitCode::from(1);
    }
    let start = std::time::Instant::now();
    match run(&cli) {
        Ok((results, warnings, csv)) => {
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "results": results,
                "warnings": warnings,
                "timing_ms": start.elapsed().as_millis() as u64,
            });
            let text = match (&cli.format[..], csv) {
                ("csv", Some(c)) => c,
                _ => format!("{:#}\n", report),
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!(
                            "{}",
                            json!({"error": {"kind": "Io", "message": e.to_string()}})
                        );
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.payload);
            ExitCode::from(f.code)
        }
    }
}
