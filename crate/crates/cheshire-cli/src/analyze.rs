//! File-facing analyses: ingest, z-score comparison, weak values, fits,
//! reflectivity estimation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cheshire::calibration::{
    estimate_r_empty, estimate_r_postselected, fit_fringe, fit_fringe_cos,
    quality_factor_prediction, FringePoint, FringeSeries,
};
use cheshire::model::{scenario_config, Override, Postselect, Scenario};
use cheshire::weak::{weak_values_h, weak_values_o, WeakValueReport};
use serde_json::json;

use crate::files::{num, read_table, series_rows, stamp, write_table, Metadata, SeriesRow};
use crate::sweep::analyzer_on_o;
use crate::{
    validation, BeamArg, CliError, CompareArgs, EstimateRArgs, FitArgs, FitModelArg, IngestArgs,
    RatioModeArg, WeakArgs,
};

/// Reads a fringe scan and applies the shared row checks, reporting the
/// offending source line for every failure.
fn load_checked_rows(path: &Path) -> Result<Vec<SeriesRow>, CliError> {
    let table = read_table(path)?;
    let rows = series_rows(&table, path, "counts")?;
    if rows.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    for row in &rows {
        let at = |msg: String| {
            CliError::Validation(format!("{}: line {}: {msg}", path.display(), row.line))
        };
        if !row.chi_deg.is_finite() {
            return Err(at(format!("chi_deg must be finite, got {}", row.chi_deg)));
        }
        if row.value < 0.0 || row.value.is_nan() {
            return Err(at(format!("counts must be non-negative, got {}", row.value)));
        }
        if let Some(sigma) = row.sigma {
            if sigma <= 0.0 || !sigma.is_finite() {
                return Err(at(format!("sigma must be positive and finite, got {sigma}")));
            }
        }
    }
    Ok(rows)
}

pub fn ingest(args: &IngestArgs) -> Result<(), CliError> {
    let scenario: Scenario<f64> = args.scenario.parse().map_err(validation)?;
    let beam = args.beam.to_model();
    let rows = load_checked_rows(&args.input)?;
    let weighted = rows.iter().all(|r| r.sigma.is_some());

    // Run the series through the calibration-layer constructor as well, so
    // the file the fit subcommand will accept is exactly what we emit.
    let points = rows
        .iter()
        .map(|r| FringePoint::from_degrees(r.chi_deg, r.value, r.sigma))
        .collect::<Vec<_>>();
    FringeSeries::new(scenario.clone(), beam, points).map_err(validation)?;

    let out_path = match &args.output {
        Some(path) => path.clone(),
        None => args.out.resolve_dir().join(format!(
            "ingested_{}_{}.csv",
            scenario.name(),
            beam.to_string().to_lowercase()
        )),
    };
    if let Some(parent) = out_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
        }
    }

    let mut meta = Metadata::default();
    meta.push("package", format!("cheshire-cli {}", env!("CARGO_PKG_VERSION")));
    meta.push("core", format!("cheshire {}", cheshire::VERSION));
    meta.push("mode", "ingest");
    meta.push("scenario", scenario.name());
    meta.push("beam", beam);
    meta.push("source", args.input.display());
    meta.push("weighted", if weighted { "yes" } else { "no" });
    stamp(&mut meta, !args.out.no_timestamp);

    let header: &[&str] = if weighted {
        &["chi_deg", "counts", "sigma"]
    } else {
        &["chi_deg", "counts"]
    };
    let body = rows
        .iter()
        .map(|r| {
            let mut cells = vec![num(r.chi_deg), num(r.value)];
            if weighted {
                cells.push(num(r.sigma.expect("weighted series carries sigmas")));
            }
            cells
        })
        .collect::<Vec<_>>();
    write_table(&out_path, &meta, header, &body)?;
    println!(
        "ingested {} points ({}) -> {}",
        rows.len(),
        if weighted { "weighted" } else { "unweighted" },
        out_path.display()
    );
    Ok(())
}

struct LoadedSeries {
    path: PathBuf,
    meta: Metadata,
    rows: Vec<SeriesRow>,
}

type Key = (String, String);

fn load_keyed(
    paths: &[PathBuf],
    value_column: &str,
) -> Result<BTreeMap<Key, LoadedSeries>, CliError> {
    let mut map = BTreeMap::new();
    for path in paths {
        let table = read_table(path)?;
        let rows = series_rows(&table, path, value_column)?;
        let scenario = table.metadata.require("scenario", path)?.to_string();
        let beam = table.metadata.require("beam", path)?.to_string();
        let key = (scenario, beam);
        if let Some(previous) = map.insert(
            key.clone(),
            LoadedSeries {
                path: path.clone(),
                meta: table.metadata.clone(),
                rows,
            },
        ) {
            return Err(CliError::Validation(format!(
                "duplicate series for scenario {} beam {}: {} and {}",
                key.0,
                key.1,
                previous.path.display(),
                path.display()
            )));
        }
    }
    Ok(map)
}

fn format_keys(keys: &[&Key]) -> String {
    if keys.is_empty() {
        "(none)".to_string()
    } else {
        keys.iter()
            .map(|(s, b)| format!("{s}/{b}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn preset_postselect(scenario_label: &str) -> Result<Postselect, CliError> {
    let scenario: Scenario<f64> = scenario_label.parse().map_err(validation)?;
    Ok(scenario_config(&scenario, 0.0)
        .map_err(validation)?
        .postselect)
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let des = load_keyed(&args.des, "counts")?;
    let oracle = load_keyed(&args.oracle, "probability")?;
    let experimental = load_keyed(&args.experimental, "counts")?;

    let missing_in_oracle: Vec<&Key> = des.keys().filter(|k| !oracle.contains_key(*k)).collect();
    let missing_in_des: Vec<&Key> = oracle.keys().filter(|k| !des.contains_key(*k)).collect();
    if !missing_in_oracle.is_empty() || !missing_in_des.is_empty() {
        return Err(CliError::Validation(format!(
            "scenario/beam keys differ\n  present only in des files: {}\n  present only in oracle files: {}",
            format_keys(&missing_in_oracle),
            format_keys(&missing_in_des)
        )));
    }
    for key in experimental.keys() {
        if !des.contains_key(key) {
            return Err(CliError::Validation(format!(
                "experimental series {}/{} has no des counterpart",
                key.0, key.1
            )));
        }
    }

    struct Means {
        n: f64,
        des: f64,
        oracle: f64,
        experimental: Option<f64>,
    }
    let mut means: BTreeMap<Key, Means> = BTreeMap::new();
    let mut total = 0usize;
    let mut over = 0usize;
    let mut max_abs_z = 0.0f64;

    println!(
        "{:<8} {:<4} {:>8} {:>12} {:>12} {:>9}",
        "scenario", "beam", "chi_deg", "expected", "des_freq", "z"
    );
    for (key, d) in &des {
        let o = &oracle[key];
        if d.rows.len() != o.rows.len() {
            return Err(CliError::Validation(format!(
                "{} has {} points but {} has {}",
                d.path.display(),
                d.rows.len(),
                o.path.display(),
                o.rows.len()
            )));
        }
        let n = d.meta.require_f64("n", &d.path)?;
        if n <= 0.0 || n.is_nan() {
            return Err(CliError::Validation(format!(
                "{}: cannot compare a sweep with n = {n}",
                d.path.display()
            )));
        }
        let zeta = d.meta.f64_or("zeta", 0.0, &d.path)?;
        let postselect = match d.meta.get("postselect") {
            Some(raw) => raw.parse::<Postselect>().map_err(validation)?,
            None => preset_postselect(&key.0)?,
        };
        let scale = if key.1 == "O" && analyzer_on_o(postselect) {
            1.0 - zeta
        } else {
            1.0
        };

        let mut des_sum = 0.0;
        let mut oracle_sum = 0.0;
        for (dr, or) in d.rows.iter().zip(&o.rows) {
            if dr.chi_deg != or.chi_deg {
                return Err(CliError::Validation(format!(
                    "chi grids differ for {}/{}: {} (line {}) vs {} (line {})",
                    key.0, key.1, dr.chi_deg, dr.line, or.chi_deg, or.line
                )));
            }
            let p = or.value * scale;
            let freq = dr.value / n;
            let sigma = (p * (1.0 - p) / n).sqrt();
            let z = if sigma == 0.0 {
                if freq == p {
                    0.0
                } else {
                    f64::INFINITY.copysign(freq - p)
                }
            } else {
                (freq - p) / sigma
            };
            total += 1;
            if z.abs() > args.sigma_threshold {
                over += 1;
            }
            max_abs_z = max_abs_z.max(z.abs());
            println!(
                "{:<8} {:<4} {:>8} {:>12.6} {:>12.6} {:>9}",
                key.0,
                key.1,
                num(dr.chi_deg),
                p,
                freq,
                if z.is_finite() {
                    format!("{z:+.2}")
                } else {
                    format!("{z:+}")
                }
            );
            des_sum += dr.value;
            oracle_sum += p * n;
        }
        let count = d.rows.len() as f64;
        means.insert(
            key.clone(),
            Means {
                n,
                des: des_sum / count,
                oracle: oracle_sum / count,
                experimental: experimental.get(key).map(|e| {
                    e.rows.iter().map(|r| r.value).sum::<f64>() / e.rows.len() as f64
                }),
            },
        );
    }

    println!();
    println!("chi-averaged mean counts:");
    println!(
        "{:<8} {:<4} {:>9} {:>12} {:>12} {:>12}",
        "scenario", "beam", "n", "des", "expected", "experimental"
    );
    for (key, m) in &means {
        println!(
            "{:<8} {:<4} {:>9} {:>12.1} {:>12.1} {:>12}",
            key.0,
            key.1,
            num(m.n),
            m.des,
            m.oracle,
            m.experimental
                .map(|v| format!("{v:.1}"))
                .unwrap_or_else(|| "-".to_string())
        );
    }

    // Mean ratios against the no-absorber scenario reproduce the published
    // structure of absorber runs without depending on monitor time.
    let beams_with_ref: Vec<String> = means
        .keys()
        .filter(|(s, _)| s == "ref")
        .map(|(_, b)| b.clone())
        .collect();
    if !beams_with_ref.is_empty() {
        println!();
        println!("mean ratios vs ref:");
        println!(
            "{:<8} {:<4} {:>8} {:>9} {:>12}",
            "scenario", "beam", "des", "expected", "experimental"
        );
        for (key, m) in &means {
            if !beams_with_ref.contains(&key.1) {
                continue;
            }
            let ref_means = &means[&("ref".to_string(), key.1.clone())];
            let experimental = match (m.experimental, ref_means.experimental) {
                (Some(a), Some(b)) if b != 0.0 => format!("{:.3}", a / b),
                _ => "-".to_string(),
            };
            println!(
                "{:<8} {:<4} {:>8.3} {:>9.3} {:>12}",
                key.0,
                key.1,
                m.des / ref_means.des,
                m.oracle / ref_means.oracle,
                experimental
            );
        }
    }

    println!();
    println!(
        "summary: {total} cells, max |z| = {max_abs_z:.2}, {over} beyond {} sigma",
        num(args.sigma_threshold)
    );
    if over > 0 {
        return Err(CliError::Comparison(format!(
            "{over} of {total} cells beyond {} sigma",
            num(args.sigma_threshold)
        )));
    }
    Ok(())
}

pub fn weak(args: &WeakArgs) -> Result<(), CliError> {
    let report_at = |chi_deg: f64| -> Result<WeakValueReport<f64>, CliError> {
        let cfg = scenario_config(
            &Scenario::Combined(vec![
                Override::Theta1(args.theta1.to_radians()),
                Override::Theta2(args.theta2.to_radians()),
                Override::T1(args.t1),
                Override::T2(args.t2),
                Override::R(args.r),
            ]),
            chi_deg.to_radians(),
        )
        .map_err(validation)?;
        match args.beam {
            BeamArg::O => weak_values_o(&cfg),
            BeamArg::H => weak_values_h(&cfg),
        }
        .map_err(validation)
    };

    if args.sweep_step <= 0.0 || !args.sweep_step.is_finite() {
        return Err(CliError::Validation(format!(
            "sweep-step must be positive, got {}",
            args.sweep_step
        )));
    }
    let report = report_at(args.chi)?;
    let mut sweep = Vec::new();
    let mut chi_deg = 0.0;
    while chi_deg < 360.0 {
        sweep.push((chi_deg, report_at(chi_deg)?));
        chi_deg += args.sweep_step;
    }

    let beam_label = args.beam.to_model().to_string();
    if args.json {
        let value = json!({
            "beam": beam_label,
            "chi_deg": args.chi,
            "theta1_deg": args.theta1,
            "theta2_deg": args.theta2,
            "t1": args.t1,
            "t2": args.t2,
            "r": args.r,
            "pi1": report.pi1,
            "pi2": report.pi2,
            "sz_pi1_sq": report.sz_pi1_sq,
            "sz_pi2_sq": report.sz_pi2_sq,
            "pathological": report.pathological,
            "sz_pi1_sq_sweep": sweep
                .iter()
                .map(|(chi, r)| json!({
                    "chi_deg": chi,
                    "sz_pi1_sq": r.sz_pi1_sq,
                    "pathological": r.pathological,
                }))
                .collect::<Vec<_>>(),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?
        );
        return Ok(());
    }

    println!(
        "beam {beam_label}, chi = {} deg, theta1 = {} deg, theta2 = {} deg, T1 = {}, T2 = {}, R = {}",
        num(args.chi),
        num(args.theta1),
        num(args.theta2),
        num(args.t1),
        num(args.t2),
        num(args.r)
    );
    println!("  pi1        = {}", num(report.pi1));
    println!("  pi2        = {}", num(report.pi2));
    println!("  sz_pi1_sq  = {}", num(report.sz_pi1_sq));
    println!("  sz_pi2_sq  = {}", num(report.sz_pi2_sq));
    println!(
        "  pathological: {}",
        if report.pathological { "yes" } else { "no" }
    );
    println!();
    println!("sz_pi1_sq over chi:");
    println!("{:>8} {:>22} {:>13}", "chi_deg", "sz_pi1_sq", "pathological");
    for (chi, r) in &sweep {
        println!(
            "{:>8} {:>22} {:>13}",
            num(*chi),
            num(r.sz_pi1_sq),
            if r.pathological { "yes" } else { "no" }
        );
    }
    Ok(())
}

pub fn fit(args: &FitArgs) -> Result<(), CliError> {
    let scenario: Scenario<f64> = args.scenario.parse().map_err(validation)?;
    let beam = args.beam.to_model();
    let rows = load_checked_rows(&args.input)?;
    let weighted = rows.iter().all(|r| r.sigma.is_some());
    let points = rows
        .iter()
        .map(|r| FringePoint::from_degrees(r.chi_deg, r.value, r.sigma))
        .collect::<Vec<_>>();
    let series = FringeSeries::new(scenario, beam, points).map_err(validation)?;
    let weighting = if weighted { "weighted" } else { "unweighted" };

    match args.model {
        FitModelArg::Sin => {
            let fit = fit_fringe(&series).map_err(validation)?;
            if args.json {
                let value = json!({
                    "model": "b(1 + v sin chi)",
                    "weighting": weighting,
                    "b": fit.b,
                    "stderr_b": fit.stderr_b(),
                    "v": fit.v,
                    "stderr_v": fit.stderr_v(),
                    "residual_rms": fit.residual_rms,
                    "v_flagged": fit.v_flagged,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?
                );
            } else {
                println!("model: b(1 + v sin chi), {weighting}");
                println!("  b = {} (stderr {})", num(fit.b), num(fit.stderr_b()));
                println!("  v = {} (stderr {})", num(fit.v), num(fit.stderr_v()));
                println!("  residual rms = {}", num(fit.residual_rms));
                println!(
                    "  visibility beyond physical range: {}",
                    if fit.v_flagged { "yes" } else { "no" }
                );
            }
        }
        FitModelArg::Cos => {
            let fit = fit_fringe_cos(&series).map_err(validation)?;
            if args.json {
                let value = json!({
                    "model": "b(1 + v cos(chi + phi2))",
                    "weighting": weighting,
                    "b": fit.b,
                    "v": fit.v,
                    "phi2_deg": fit.phi2.to_degrees(),
                    "residual_rms": fit.residual_rms,
                    "v_flagged": fit.v_flagged,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?
                );
            } else {
                println!("model: b(1 + v cos(chi + phi2)), {weighting}");
                println!("  b = {}", num(fit.b));
                println!("  v = {}", num(fit.v));
                println!("  phi2 = {} deg", num(fit.phi2.to_degrees()));
                println!("  residual rms = {}", num(fit.residual_rms));
                println!(
                    "  visibility beyond physical range: {}",
                    if fit.v_flagged { "yes" } else { "no" }
                );
            }
        }
    }
    Ok(())
}

pub fn estimate_r(args: &EstimateRArgs) -> Result<(), CliError> {
    let a = match (args.ratio, args.h_counts, args.o_counts) {
        (Some(a), None, None) => a,
        (None, Some(h), Some(o)) => {
            if o <= 0.0 || o.is_nan() {
                return Err(CliError::Validation(format!(
                    "o-counts must be positive, got {o}"
                )));
            }
            h / o
        }
        _ => {
            return Err(CliError::Validation(
                "give either --ratio alone or both --h-counts and --o-counts".into(),
            ))
        }
    };
    let (lo, hi) = match args.mode {
        RatioModeArg::Bare => estimate_r_empty(a),
        RatioModeArg::Postselected => estimate_r_postselected(a),
    }
    .map_err(validation)?;
    let quality = args
        .v_o
        .map(|v_o| quality_factor_prediction(lo, v_o).map_err(validation))
        .transpose()?;

    if args.json {
        let value = json!({
            "ratio": a,
            "candidates": [lo, hi],
            "predicted_v_h": quality,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?
        );
        return Ok(());
    }
    println!("count ratio a = {}", num(a));
    println!(
        "reflectivity candidates: R = {} or R = {} (the ratio cannot tell R from 1 - R)",
        num(lo),
        num(hi)
    );
    if let Some(q) = quality {
        println!(
            "predicted H-beam visibility: {} (identical for both candidates)",
            num(q)
        );
    }
    Ok(())
}
