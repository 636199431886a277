//! Scenario sweeps over chi for the exact model and the event-based engine.

use std::fs;
use std::path::PathBuf;

use cheshire::des::{run, EngineRunSpec, Tally, RNG_ID};
use cheshire::model::{
    scenario_config, Beam, InterferometerConfig, Path as ArmPath, Postselect, Scenario,
};
use cheshire::oracle::pipeline_probs;
use rayon::prelude::*;

use crate::files::{num, stamp, write_table, Metadata};
use crate::{validation, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    ByRef,
    ByIdeal,
}

impl Normalization {
    fn name(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::ByRef => "by-ref",
            Normalization::ByIdeal => "by-ideal",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EngineSettings {
    pub gamma: f64,
    pub n: u64,
    pub seed: u64,
    pub warmup: bool,
    pub zeta: f64,
    pub pscatt1: f64,
    pub pscatt2: f64,
}

/// Everything a sweep needs; `engine: None` selects the exact model.
pub struct SweepPlan {
    pub scenarios: Vec<Scenario<f64>>,
    /// chi grid in degrees, strictly increasing.
    pub grid: Vec<f64>,
    pub postselect: Option<Postselect>,
    pub normalize: Normalization,
    pub r: f64,
    pub engine: Option<EngineSettings>,
    pub prefix: String,
    pub out_dir: PathBuf,
    pub timestamp: bool,
}

pub fn parse_scenarios(names: &[String]) -> Result<Vec<Scenario<f64>>, CliError> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(Scenario::presets().to_vec());
    }
    names
        .iter()
        .map(|n| n.parse::<Scenario<f64>>().map_err(validation))
        .collect()
}

pub fn chi_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
        return Err(CliError::Validation("chi grid bounds must be finite".into()));
    }
    if step <= 0.0 {
        return Err(CliError::Validation(format!(
            "chi-step must be positive, got {step}"
        )));
    }
    if stop < start {
        return Err(CliError::Validation(format!(
            "chi-stop {stop} lies before chi-start {start}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Validation(format!(
            "chi grid has {count} points; choose a coarser step"
        )));
    }
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

impl SweepPlan {
    /// Analyzer placement actually used for a scenario: the global override
    /// if one was given, the scenario preset otherwise.
    fn effective_postselect(&self, scenario: &Scenario<f64>) -> Result<Postselect, CliError> {
        match self.postselect {
            Some(p) => Ok(p),
            None => Ok(scenario_config(scenario, 0.0)
                .map_err(validation)?
                .postselect),
        }
    }

    fn config(
        &self,
        scenario: &Scenario<f64>,
        chi_deg: f64,
    ) -> Result<InterferometerConfig<f64>, CliError> {
        let mut cfg = scenario_config(scenario, chi_deg.to_radians()).map_err(validation)?;
        cfg.r = self.r;
        cfg.postselect = self.effective_postselect(scenario)?;
        if let Some(engine) = &self.engine {
            cfg.zeta = engine.zeta;
            cfg.pscatt1 = engine.pscatt1;
            cfg.pscatt2 = engine.pscatt2;
        }
        cfg.validate().map_err(validation)?;
        Ok(cfg)
    }

    /// The no-absorber, no-field divisor configuration for normalization,
    /// carrying the same reflectivity and analyzer placement.
    fn ref_config(
        &self,
        postselect: Postselect,
        chi_deg: f64,
    ) -> Result<InterferometerConfig<f64>, CliError> {
        let mut cfg = scenario_config(&Scenario::Reference, chi_deg.to_radians())
            .map_err(validation)?;
        cfg.r = self.r;
        cfg.postselect = postselect;
        if let Some(engine) = &self.engine {
            cfg.zeta = engine.zeta;
            cfg.pscatt1 = engine.pscatt1;
            cfg.pscatt2 = engine.pscatt2;
        }
        cfg.validate().map_err(validation)?;
        Ok(cfg)
    }

    fn file_path(&self, scenario: &Scenario<f64>, suffix: &str) -> PathBuf {
        self.out_dir
            .join(format!("{}_{}_{suffix}.csv", self.prefix, scenario.name()))
    }

    fn shared_metadata(
        &self,
        scenario: &Scenario<f64>,
        postselect: Postselect,
    ) -> Result<Metadata, CliError> {
        let cfg = self.config(scenario, self.grid[0])?;
        let mut meta = Metadata::default();
        meta.push("package", format!("cheshire-cli {}", env!("CARGO_PKG_VERSION")));
        meta.push("core", format!("cheshire {}", cheshire::VERSION));
        meta.push("scenario", scenario.name());
        meta.push("postselect", postselect);
        meta.push("normalization", self.normalize.name());
        meta.push("r", num(cfg.r));
        meta.push("t1", num(cfg.t1));
        meta.push("t2", num(cfg.t2));
        meta.push("theta1_deg", num(cfg.theta1.to_degrees()));
        meta.push("theta2_deg", num(cfg.theta2.to_degrees()));
        Ok(meta)
    }
}

pub fn analyzer_on_o(postselect: Postselect) -> bool {
    matches!(postselect, Postselect::OOnly | Postselect::Both)
}

pub fn oracle_sweep(plan: &SweepPlan) -> Result<(), CliError> {
    fs::create_dir_all(&plan.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", plan.out_dir.display())))?;

    for scenario in &plan.scenarios {
        let postselect = plan.effective_postselect(scenario)?;
        let mut rows_h = Vec::with_capacity(plan.grid.len());
        let mut rows_o = Vec::with_capacity(plan.grid.len());
        for &chi_deg in &plan.grid {
            let cfg = plan.config(scenario, chi_deg)?;
            let (p_h, p_o) = pipeline_probs(&cfg).map_err(validation)?;
            let (div_h, div_o) = match plan.normalize {
                Normalization::Raw => (1.0, 1.0),
                Normalization::ByRef => {
                    pipeline_probs(&plan.ref_config(postselect, chi_deg)?).map_err(validation)?
                }
                Normalization::ByIdeal => {
                    pipeline_probs(&plan.ref_config(postselect, 0.0)?).map_err(validation)?
                }
            };
            rows_h.push(vec![num(chi_deg), num(p_h), num(p_h / div_h)]);
            rows_o.push(vec![num(chi_deg), num(p_o), num(p_o / div_o)]);
        }

        for (beam, rows) in [(Beam::H, rows_h), (Beam::O, rows_o)] {
            let mut meta = plan.shared_metadata(scenario, postselect)?;
            meta.push("mode", "oracle");
            meta.push("beam", beam);
            stamp(&mut meta, plan.timestamp);
            let path = plan.file_path(scenario, &beam.to_string().to_lowercase());
            write_table(&path, &meta, &["chi_deg", "probability", "normalized"], &rows)?;
            println!("wrote {} ({} points)", path.display(), plan.grid.len());
        }
    }
    Ok(())
}

pub fn des_sweep(plan: &SweepPlan) -> Result<(), CliError> {
    let engine = plan
        .engine
        .as_ref()
        .expect("des sweep plans carry engine settings");
    fs::create_dir_all(&plan.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", plan.out_dir.display())))?;

    // One run per (scenario, chi) cell, seeded by global row index so a
    // sweep is reproducible from the base seed alone. Normalization by the
    // no-absorber curve needs a second block of runs, offset far enough to
    // never collide with sweep seeds.
    let mut specs = Vec::new();
    for (s_idx, scenario) in plan.scenarios.iter().enumerate() {
        for (c_idx, &chi_deg) in plan.grid.iter().enumerate() {
            let job = (s_idx * plan.grid.len() + c_idx) as u64;
            let mut spec =
                EngineRunSpec::new(plan.config(scenario, chi_deg)?, engine.gamma, engine.n, engine.seed + job);
            spec.warmup = engine.warmup;
            specs.push(spec);
        }
    }
    let ref_offset = 100_000u64;
    if plan.normalize == Normalization::ByRef {
        for (s_idx, scenario) in plan.scenarios.iter().enumerate() {
            let postselect = plan.effective_postselect(scenario)?;
            for (c_idx, &chi_deg) in plan.grid.iter().enumerate() {
                let job = (s_idx * plan.grid.len() + c_idx) as u64;
                let mut spec = EngineRunSpec::new(
                    plan.ref_config(postselect, chi_deg)?,
                    engine.gamma,
                    engine.n,
                    engine.seed + ref_offset + job,
                );
                spec.warmup = engine.warmup;
                specs.push(spec);
            }
        }
    }

    let tallies: Vec<Tally> = specs
        .par_iter()
        .map(run)
        .collect::<Result<_, _>>()
        .map_err(validation)?;
    let cells = plan.scenarios.len() * plan.grid.len();
    let (sweep_tallies, ref_tallies) = tallies.split_at(cells);

    for (s_idx, scenario) in plan.scenarios.iter().enumerate() {
        let postselect = plan.effective_postselect(scenario)?;
        let block = &sweep_tallies[s_idx * plan.grid.len()..(s_idx + 1) * plan.grid.len()];
        let ref_block = (plan.normalize == Normalization::ByRef)
            .then(|| &ref_tallies[s_idx * plan.grid.len()..(s_idx + 1) * plan.grid.len()]);

        for beam in [Beam::H, Beam::O] {
            // Detected rates shrink by the analysis loss, so the exact-value
            // divisor is scaled the same way; the ref-run divisor carries the
            // loss already and needs no correction.
            let ideal_divisor = {
                let (p_h, p_o) = pipeline_probs(&plan.ref_config(postselect, 0.0)?)
                    .map_err(validation)?;
                match beam {
                    Beam::H => p_h,
                    Beam::O if analyzer_on_o(postselect) => p_o * (1.0 - engine.zeta),
                    Beam::O => p_o,
                }
            };
            let mut rows = Vec::with_capacity(plan.grid.len());
            for (c_idx, &chi_deg) in plan.grid.iter().enumerate() {
                let tally = &block[c_idx];
                let freq = tally.rate(beam);
                let normalized = match plan.normalize {
                    Normalization::Raw => freq,
                    Normalization::ByRef => freq / ref_block.unwrap()[c_idx].rate(beam),
                    Normalization::ByIdeal => freq / ideal_divisor,
                };
                rows.push(vec![
                    num(chi_deg),
                    num(tally.detected(beam)),
                    num(tally.counts[beam.index()][ArmPath::One.index()]),
                    num(tally.counts[beam.index()][ArmPath::Two.index()]),
                    num(freq),
                    num(normalized),
                ]);
            }
            let mut meta = plan.shared_metadata(scenario, postselect)?;
            push_engine_metadata(&mut meta, engine, (s_idx * plan.grid.len()) as u64);
            meta.push("beam", beam);
            stamp(&mut meta, plan.timestamp);
            let path = plan.file_path(scenario, &beam.to_string().to_lowercase());
            write_table(
                &path,
                &meta,
                &["chi_deg", "counts", "path1", "path2", "frequency", "normalized"],
                &rows,
            )?;
            println!("wrote {} ({} points)", path.display(), plan.grid.len());
        }

        let mut rows = Vec::with_capacity(plan.grid.len());
        for (c_idx, &chi_deg) in plan.grid.iter().enumerate() {
            let t = &block[c_idx];
            rows.push(vec![
                num(chi_deg),
                num(t.detected(Beam::H)),
                num(t.counts[Beam::H.index()][ArmPath::One.index()]),
                num(t.counts[Beam::H.index()][ArmPath::Two.index()]),
                num(t.detected(Beam::O)),
                num(t.counts[Beam::O.index()][ArmPath::One.index()]),
                num(t.counts[Beam::O.index()][ArmPath::Two.index()]),
                num(t.exits_bs1),
                num(t.exits_bs2),
                num(t.absorbed),
                num(t.analyzer_rejected),
                num(t.zeta_lost),
                num(t.scatter_discarded),
                num(t.emitted),
            ]);
        }
        let mut meta = plan.shared_metadata(scenario, postselect)?;
        push_engine_metadata(&mut meta, engine, (s_idx * plan.grid.len()) as u64);
        stamp(&mut meta, plan.timestamp);
        let path = plan.file_path(scenario, "tally");
        write_table(
            &path,
            &meta,
            &[
                "chi_deg",
                "h_counts",
                "h_path1",
                "h_path2",
                "o_counts",
                "o_path1",
                "o_path2",
                "exits_bs1",
                "exits_bs2",
                "absorbed",
                "analyzer_rejected",
                "zeta_lost",
                "scatter_discarded",
                "emitted",
            ],
            &rows,
        )?;
        println!("wrote {} ({} points)", path.display(), plan.grid.len());
    }
    Ok(())
}

fn push_engine_metadata(meta: &mut Metadata, engine: &EngineSettings, row0_offset: u64) {
    meta.push("mode", "des");
    meta.push("rng", RNG_ID);
    meta.push("seed", engine.seed);
    meta.push("seed_row0", engine.seed + row0_offset);
    meta.push("seed_scheme", "row k of this file used seed_row0 + k");
    meta.push("gamma", num(engine.gamma));
    meta.push("n", engine.n);
    meta.push("warmup", if engine.warmup { "on" } else { "off" });
    meta.push("zeta", num(engine.zeta));
    meta.push("pscatt1", num(engine.pscatt1));
    meta.push("pscatt2", num(engine.pscatt2));
}
