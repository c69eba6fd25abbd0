//! Sweeps behind each CLI subcommand.

use std::collections::BTreeMap;

use hst_ofdm_core::eliminator::{residual_report, BranchTruth, EliminatorBank};
use hst_ofdm_core::ofdm::InterferenceDecomposition;
use hst_ofdm_core::pilot_design::{design_pilots, equidistant_pattern, pattern_coherence, CoherenceParams};
use hst_ofdm_core::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Scheme};
use crate::csv_out::ResultRow;
use crate::error::{HarnessError, Result};
use crate::rng::{design_rng, trial_rng};
use crate::scenario::{
    draw_trial, evaluate, realize_trial, supported, Evaluation, Metric, Point, Setup, Tally,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    MseSnr,
    MsePosition,
    MseVelocity,
    BerSnr,
    DiagnoseElimination,
}

impl Experiment {
    pub fn label(self) -> &'static str {
        match self {
            Experiment::MseSnr => "mse-snr",
            Experiment::MsePosition => "mse-position",
            Experiment::MseVelocity => "mse-velocity",
            Experiment::BerSnr => "ber-snr",
            Experiment::DiagnoseElimination => "diagnose-elimination",
        }
    }

    fn evaluation(self) -> Evaluation {
        match self {
            Experiment::BerSnr => Evaluation::Ber,
            _ => Evaluation::Mse,
        }
    }

    pub fn default_schemes(self) -> Vec<Scheme> {
        match self {
            Experiment::BerSnr => vec![Scheme::ProposedOmp, Scheme::Scheme1Omp, Scheme::PerfectCsi],
            Experiment::DiagnoseElimination => vec![Scheme::ProposedOmp],
            _ => vec![
                Scheme::ProposedOmp,
                Scheme::ProposedBp,
                Scheme::ProposedLs,
                Scheme::GenieOmp,
                Scheme::BaselineOmp,
            ],
        }
    }
}

pub fn run(experiment: Experiment, cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    match experiment {
        Experiment::MseSnr => run_mse_vs_snr(cfg),
        Experiment::MsePosition => run_mse_vs_position(cfg),
        Experiment::MseVelocity => run_mse_vs_velocity(cfg),
        Experiment::BerSnr => run_ber_vs_snr(cfg),
        Experiment::DiagnoseElimination => run_diagnose_elimination(cfg),
    }
}

fn schemes_for(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Vec<Scheme>> {
    let mut schemes = cfg.schemes.clone().unwrap_or_else(|| experiment.default_schemes());
    schemes.sort();
    schemes.dedup();
    if let Some(&s) = schemes.iter().find(|&&s| !supported(s, experiment.evaluation())) {
        return Err(HarnessError::UnsupportedScheme {
            scheme: s.label(),
            experiment: experiment.label(),
        });
    }
    Ok(schemes)
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

struct Rows<'a> {
    cfg: &'a ExperimentConfig,
    experiment: Experiment,
    hash: String,
    mode: String,
    rows: Vec<ResultRow>,
}

impl<'a> Rows<'a> {
    fn new(cfg: &'a ExperimentConfig, experiment: Experiment) -> Self {
        Self {
            cfg,
            experiment,
            hash: cfg.hash(),
            mode: cfg.mode_label(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, scheme: &str, sweep_var: &str, sweep_value: f64, metric: String, value: f64) {
        self.rows.push(ResultRow {
            experiment: self.experiment.label().into(),
            scheme: scheme.into(),
            bem: self.cfg.bem.label().into(),
            mode: self.mode.clone(),
            sweep_var: sweep_var.into(),
            sweep_value,
            metric,
            value,
            trials: self.cfg.trials,
            seed: self.cfg.seed,
            config_hash: self.hash.clone(),
        });
    }

    /// MSE/BER rows of one sweep point; `suffix` tags the SNR when the sweep
    /// variable is something else.
    fn push_tally(
        &mut self,
        tally: &Tally,
        schemes: &[Scheme],
        sweep_var: &str,
        value_of: impl Fn(usize) -> f64,
        suffix: impl Fn(usize) -> String,
    ) {
        for j in 0..self.cfg.snr_grid_db.len() {
            for &s in schemes {
                for metric in [Metric::Mse, Metric::Ber, Metric::BerClosedForm, Metric::WarningRate] {
                    let Some(v) = tally.mean(j, s, metric) else { continue };
                    let name = metric.label();
                    self.push(s.label(), sweep_var, value_of(j), format!("{name}{}", suffix(j)), v);
                    if matches!(metric, Metric::Mse) {
                        self.push(s.label(), sweep_var, value_of(j), format!("mse_db{}", suffix(j)), db(v));
                    }
                }
                if let Some((_, bits)) = tally.entries.get(&(j, s, Metric::Ber)) {
                    self.push(s.label(), sweep_var, value_of(j), format!("bits{}", suffix(j)), *bits);
                }
            }
        }
    }

    fn push_geometry(&mut self, point: &Point, sweep_var: &str, value: f64) {
        self.push("geometry", sweep_var, value, "bem_order".into(), point.order as f64);
        self.push("geometry", sweep_var, value, "serving_cells".into(), point.serving.len() as f64);
        self.push("geometry", sweep_var, value, "degenerate".into(), point.degenerate() as u8 as f64);
        for (r, row) in point.links.iter().enumerate() {
            for (t, link) in row.iter().enumerate() {
                if !link.active {
                    continue;
                }
                let tag = format!("ant{}.cell{}", r + 1, t + 1);
                self.push("geometry", sweep_var, value, format!("doppler_hz.{tag}"), link.doppler_hz);
                self.push("geometry", sweep_var, value, format!("q_true.{tag}"), link.q_true as f64);
                self.push("geometry", sweep_var, value, format!("q_hat.{tag}"), link.q_hat as f64);
            }
        }
    }
}

/// Runs all trials at one point in parallel; every SNR shares the trial's
/// channels, frames and unit noise.
pub fn run_point(
    setup: &Setup,
    point: &Point,
    point_index: usize,
    schemes: &[Scheme],
    eval: Evaluation,
) -> Result<Tally> {
    let cfg = &setup.cfg;
    let with_scheme1 = schemes.contains(&Scheme::Scheme1Omp);
    let parts: Vec<Result<Tally>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, point_index, i);
            let draw = draw_trial(setup, point, &mut rng)?;
            let real = realize_trial(setup, point, &draw, with_scheme1)?;
            let mut tally = Tally::default();
            for (j, &snr) in cfg.snr_grid_db.iter().enumerate() {
                evaluate(setup, point, &draw, &real, cfg.noise_variance(snr), j, schemes, eval, &mut tally)?;
            }
            Ok(tally)
        })
        .collect();
    Ok(Tally::merge_ordered(parts.into_iter().collect::<Result<Vec<_>>>()?))
}

fn snr_suffix(cfg: &ExperimentConfig) -> impl Fn(usize) -> String + '_ {
    move |j| format!("@{}dB", cfg.snr_grid_db[j])
}

pub fn run_mse_vs_snr(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    sweep_snr(cfg, Experiment::MseSnr)
}

pub fn run_ber_vs_snr(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    sweep_snr(cfg, Experiment::BerSnr)
}

fn sweep_snr(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Vec<ResultRow>> {
    let schemes = schemes_for(cfg, experiment)?;
    let setup = Setup::new(cfg)?;
    let point = Point::new(&setup, cfg.track_position_m, cfg.speed_kmh)?;
    let tally = run_point(&setup, &point, 0, &schemes, experiment.evaluation())?;
    let mut rows = Rows::new(cfg, experiment);
    rows.push_tally(&tally, &schemes, "snr_db", |j| cfg.snr_grid_db[j], |_| String::new());
    Ok(rows.rows)
}

pub fn run_mse_vs_position(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let experiment = Experiment::MsePosition;
    let schemes = schemes_for(cfg, experiment)?;
    let setup = Setup::new(cfg)?;
    let mut rows = Rows::new(cfg, experiment);
    for (i, &pos) in cfg.position_grid_m.iter().enumerate() {
        let point = Point::new(&setup, pos, cfg.speed_kmh)?;
        rows.push_geometry(&point, "position_m", pos);
        let tally = run_point(&setup, &point, i, &schemes, Evaluation::Mse)?;
        rows.push_tally(&tally, &schemes, "position_m", |_| pos, snr_suffix(cfg));
    }
    Ok(rows.rows)
}

pub fn run_mse_vs_velocity(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let experiment = Experiment::MseVelocity;
    let schemes = schemes_for(cfg, experiment)?;
    let setup = Setup::new(cfg)?;
    let mut rows = Rows::new(cfg, experiment);
    for (i, &v) in cfg.velocity_grid_kmh.iter().enumerate() {
        let point = Point::new(&setup, cfg.track_position_m, v)?;
        rows.push_geometry(&point, "speed_kmh", v);
        let tally = run_point(&setup, &point, i, &schemes, Evaluation::Mse)?;
        rows.push_tally(&tally, &schemes, "speed_kmh", |_| v, snr_suffix(cfg));
    }
    Ok(rows.rows)
}

fn powers(p: &InterferenceDecomposition) -> [(&'static str, f64); 4] {
    [
        ("desired", p.desired_power),
        ("ici", p.self_ici_power),
        ("mci", p.mci_power),
        ("noise", p.noise_power),
    ]
}

/// Pilot-row interference budget before and after elimination, per cell,
/// averaged over antennas and trials at `diagnose_snr_db`.
pub fn run_diagnose_elimination(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let experiment = Experiment::DiagnoseElimination;
    schemes_for(cfg, experiment)?;
    let setup = Setup::new(cfg)?;
    let mode = cfg.elimination_mode();
    let sigma2 = cfg.noise_variance(cfg.diagnose_snr_db);
    let mut rows = Rows::new(cfg, experiment);
    for (i, &pos) in cfg.position_grid_m.iter().enumerate() {
        let point = Point::new(&setup, pos, cfg.speed_kmh)?;
        let bank = EliminatorBank::new(&point.basis);
        let fft = point.basis.fft();
        let parts: Vec<Result<BTreeMap<(usize, &'static str, &'static str), (f64, f64)>>> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(cfg.seed, i, trial);
                let draw = draw_trial(&setup, &point, &mut rng)?;
                let real = realize_trial(&setup, &point, &draw, false)?;
                let mut acc = BTreeMap::new();
                for (r, row) in point.links.iter().enumerate() {
                    let noise: Vec<Complex> = draw.unit_noise[r].iter().map(|n| n * sigma2.sqrt()).collect();
                    for (t, link) in row.iter().enumerate() {
                        if !link.active {
                            continue;
                        }
                        let h = &real.truth[r][t];
                        let spec = &setup.specs[t];
                        let frame = &draw.frames[t];
                        let own_pilots = h.apply(&frame.restricted(spec.pilots()), fft);
                        let own_data = h.apply(&frame.restricted(spec.data()), fft);
                        let mut others = vec![Complex::new(0.0, 0.0); cfg.subcarriers];
                        for (u, c) in real.components[r].iter().enumerate() {
                            if u != t {
                                for (o, v) in others.iter_mut().zip(c) {
                                    *o += v;
                                }
                            }
                        }
                        let ideal: Vec<Complex> = h
                            .response()
                            .iter()
                            .zip(frame.symbols())
                            .map(|(d, x)| d * x)
                            .collect();
                        let truth = BranchTruth {
                            own_pilots: &own_pilots,
                            own_data: &own_data,
                            others: &others,
                            noise: &noise,
                            ideal: &ideal,
                            pilots: spec.pilots(),
                        };
                        let report = residual_report(&truth, link.q_hat, mode, &bank)?;
                        for (stage, p) in [("before", &report.before), ("after", &report.after)] {
                            for (name, v) in powers(p) {
                                let e = acc.entry((t, stage, name)).or_insert((0.0, 0.0));
                                e.0 += v;
                                e.1 += 1.0;
                            }
                        }
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total: BTreeMap<(usize, &'static str, &'static str), (f64, f64)> = BTreeMap::new();
        for part in parts {
            for (key, (s, c)) in part? {
                let e = total.entry(key).or_insert((0.0, 0.0));
                e.0 += s;
                e.1 += c;
            }
        }
        for t in 0..cfg.num_cells {
            let mean = |stage: &'static str, name: &'static str| {
                total.get(&(t, stage, name)).map(|(s, c)| s / c)
            };
            for stage in ["before", "after"] {
                for name in ["desired", "ici", "mci", "noise"] {
                    if let Some(v) = mean(stage, name) {
                        rows.push("proposed", "position_m", pos, format!("cell{}.{stage}.{name}_db", t + 1), db(v));
                    }
                }
                if let Some(d) = mean(stage, "desired") {
                    for name in ["ici", "mci"] {
                        if let Some(v) = mean(stage, name) {
                            let rel = if d > 0.0 { v / d } else { f64::INFINITY };
                            rows.push("proposed", "position_m", pos, format!("cell{}.{stage}.{name}_rel", t + 1), rel);
                        }
                    }
                }
            }
        }
    }
    Ok(rows.rows)
}

/// JSON written by `design-pilots`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub pilots: Vec<usize>,
    pub coherence: f64,
    pub equidistant_coherence: f64,
    pub delta: f64,
    pub rounds: usize,
    pub seed: u64,
    pub subcarriers: usize,
    pub delay_span: usize,
}

pub fn run_design_pilots(cfg: &ExperimentConfig) -> Result<DesignReport> {
    cfg.validate()?;
    let params = CoherenceParams::new(cfg.coherence_delta)?;
    let out = design_pilots(
        cfg.subcarriers,
        cfg.delay_span,
        cfg.pilots,
        cfg.design_rounds,
        &params,
        &mut design_rng(cfg.seed, 0),
    )?;
    let equi = equidistant_pattern(cfg.subcarriers, cfg.pilots)?;
    Ok(DesignReport {
        coherence: out.coherence,
        equidistant_coherence: pattern_coherence(equi.indices(), cfg.subcarriers, cfg.delay_span, &params)?,
        pilots: out.pattern.into_indices(),
        delta: cfg.coherence_delta,
        rounds: cfg.design_rounds,
        seed: cfg.seed,
        subcarriers: cfg.subcarriers,
        delay_span: cfg.delay_span,
    })
}
