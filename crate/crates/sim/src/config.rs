//! Experiment configuration: JSON with every field optional, unknown keys
//! rejected, defaults taken from the reference system.

use std::path::{Path, PathBuf};

use hst_ofdm_core::bem::BemKind;
use hst_ofdm_core::channel::{ChannelMode, PowerDelayProfile};
use hst_ofdm_core::eliminator::EliminationMode;
use hst_ofdm_core::geometry::{CellLayout, DopplerParams, TrainState};
use hst_ofdm_core::ofdm::PilotSymbols;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BemChoice {
    Ce,
    Gce,
}

impl From<BemChoice> for BemKind {
    fn from(b: BemChoice) -> Self {
        match b {
            BemChoice::Ce => BemKind::Ce,
            BemChoice::Gce => BemKind::Gce,
        }
    }
}

impl BemChoice {
    pub fn label(self) -> &'static str {
        match self {
            BemChoice::Ce => "ce",
            BemChoice::Gce => "gce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModeChoice {
    Strict,
    Continuous,
}

impl From<ChannelModeChoice> for ChannelMode {
    fn from(c: ChannelModeChoice) -> Self {
        match c {
            ChannelModeChoice::Strict => ChannelMode::StrictBem,
            ChannelModeChoice::Continuous => ChannelMode::ContinuousDoppler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EliminationChoice {
    Oracle,
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PilotSymbolChoice {
    Constant,
    RandomQpsk,
}

impl From<PilotSymbolChoice> for PilotSymbols {
    fn from(p: PilotSymbolChoice) -> Self {
        match p {
            PilotSymbolChoice::Constant => PilotSymbols::Constant,
            PilotSymbolChoice::RandomQpsk => PilotSymbols::RandomQpsk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DelayProfileChoice {
    Uniform,
    Exponential { decay_taps: f64 },
}

impl From<DelayProfileChoice> for PowerDelayProfile {
    fn from(p: DelayProfileChoice) -> Self {
        match p {
            DelayProfileChoice::Uniform => PowerDelayProfile::Uniform,
            DelayProfileChoice::Exponential { decay_taps } => {
                PowerDelayProfile::Exponential { decay: decay_taps }
            }
        }
    }
}

/// Receiver variants compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Elimination, then OMP.
    ProposedOmp,
    /// Elimination, then basis pursuit denoising.
    ProposedBp,
    /// Elimination, then minimum-norm least squares.
    ProposedLs,
    /// OMP on ICI- and MCI-free pilot observations.
    GenieOmp,
    /// OMP on the raw composite pilot rows.
    BaselineOmp,
    /// Guard-pilot split with integer de-permutation, OMP.
    Scheme1Omp,
    /// True channel, oracle elimination (BER only).
    PerfectCsi,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::ProposedOmp => "proposed-omp",
            Scheme::ProposedBp => "proposed-bp",
            Scheme::ProposedLs => "proposed-ls",
            Scheme::GenieOmp => "genie-omp",
            Scheme::BaselineOmp => "baseline-omp",
            Scheme::Scheme1Omp => "scheme1-omp",
            Scheme::PerfectCsi => "perfect-csi",
        }
    }
}

/// Where the pilot pattern comes from: `"designed"`, `"equidistant"` or a
/// path to a pattern file written by `design-pilots` (or a bare JSON array).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum PilotSource {
    Designed,
    Equidistant,
    File(PathBuf),
}

impl From<String> for PilotSource {
    fn from(s: String) -> Self {
        match s.as_str() {
            "designed" => PilotSource::Designed,
            "equidistant" => PilotSource::Equidistant,
            _ => PilotSource::File(PathBuf::from(s)),
        }
    }
}

impl From<PilotSource> for String {
    fn from(p: PilotSource) -> Self {
        match p {
            PilotSource::Designed => "designed".into(),
            PilotSource::Equidistant => "equidistant".into(),
            PilotSource::File(p) => p.to_string_lossy().into_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d_max_m: f64,
    pub d_min_m: f64,
    pub d_s_m: f64,
    pub d_c_m: f64,
    pub num_cells: usize,
    pub train_length_m: f64,
    /// Receive antennas relative to the front antenna.
    pub antenna_offsets_m: Vec<f64>,

    pub subcarriers: usize,
    pub pilots: usize,
    pub delay_span: usize,
    pub sparsity: usize,
    pub packet_duration_s: f64,
    pub carrier_hz: f64,
    pub lightspeed_mps: f64,
    pub speed_kmh: f64,

    pub bem: BemChoice,
    pub oversample: usize,
    pub channel_mode: ChannelModeChoice,
    pub elimination: EliminationChoice,
    /// Physical-mode band radius; `null` picks 0 for CE and 2 for GCE.
    pub band_radius: Option<usize>,
    /// `null` uses the experiment's default scheme list.
    pub schemes: Option<Vec<Scheme>>,

    pub snr_grid_db: Vec<f64>,
    pub position_grid_m: Vec<f64>,
    pub velocity_grid_kmh: Vec<f64>,
    /// Front-antenna position for SNR and velocity sweeps.
    pub track_position_m: f64,
    /// SNR used by `diagnose-elimination`.
    pub diagnose_snr_db: f64,
    pub noiseless: bool,

    pub trials: usize,
    pub seed: u64,
    pub position_error_m: f64,

    pub pilot_pattern: PilotSource,
    pub distinct_cell_patterns: bool,
    pub design_rounds: usize,
    pub coherence_delta: f64,
    pub pilot_power: f64,
    pub pilot_symbols: PilotSymbolChoice,
    pub power_delay_profile: DelayProfileChoice,

    /// `null` runs OMP to the true sparsity; a value switches to residual
    /// stopping with this tolerance relative to `sqrt(P) sigma`.
    pub omp_residual_factor: Option<f64>,
    pub bpdn_max_iterations: usize,
    /// Pilots shared by the two halves of the guard-pilot split preset.
    pub scheme1_pilots: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d_max_m: 1200.0,
            d_min_m: 50.0,
            d_s_m: 2000.0,
            d_c_m: 400.0,
            num_cells: 2,
            train_length_m: 240.0,
            antenna_offsets_m: vec![-240.0, 0.0],
            subcarriers: 512,
            pilots: 30,
            delay_span: 64,
            sparsity: 8,
            packet_duration_s: 1.2e-3,
            carrier_hz: 2.35e9,
            lightspeed_mps: 3.0e8,
            speed_kmh: 500.0,
            bem: BemChoice::Ce,
            oversample: 2,
            channel_mode: ChannelModeChoice::Strict,
            elimination: EliminationChoice::Oracle,
            band_radius: None,
            schemes: None,
            snr_grid_db: (0..=8).map(|i| 5.0 * i as f64).collect(),
            position_grid_m: (0..=20).map(|i| 1200.0 + 100.0 * i as f64).collect(),
            velocity_grid_kmh: (1..=5).map(|i| 100.0 * i as f64).collect(),
            track_position_m: 2200.0,
            diagnose_snr_db: 25.0,
            noiseless: false,
            trials: 500,
            seed: 1,
            position_error_m: 0.0,
            pilot_pattern: PilotSource::Designed,
            distinct_cell_patterns: false,
            design_rounds: 100,
            coherence_delta: 0.1,
            pilot_power: 1.0,
            pilot_symbols: PilotSymbolChoice::Constant,
            power_delay_profile: DelayProfileChoice::Uniform,
            omp_residual_factor: None,
            bpdn_max_iterations: 5000,
            scheme1_pilots: 48,
        }
    }
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be >= 1"));
        }
        if self.trials > u32::MAX as usize {
            return Err(invalid("trials must fit the 32-bit trial stream field"));
        }
        for (name, grid) in [
            ("snr_grid_db", &self.snr_grid_db),
            ("position_grid_m", &self.position_grid_m),
            ("velocity_grid_kmh", &self.velocity_grid_kmh),
        ] {
            if grid.len() >= 1 << 31 {
                return Err(invalid(format!("{name} is too long")));
            }
            if grid.is_empty() {
                return Err(invalid(format!("{name} must not be empty")));
            }
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!("{name} must be finite")));
            }
        }
        if self.velocity_grid_kmh.iter().any(|&v| v < 0.0) || self.speed_kmh < 0.0 {
            return Err(invalid("speeds must be non-negative"));
        }
        if self.pilots == 0 || self.pilots >= self.subcarriers {
            return Err(invalid("pilots must satisfy 0 < P < K"));
        }
        if self.delay_span == 0 || self.delay_span > self.subcarriers {
            return Err(invalid("delay_span must satisfy 0 < L <= K"));
        }
        if self.sparsity > self.delay_span {
            return Err(invalid("sparsity must not exceed delay_span"));
        }
        if self.scheme1_pilots < 2 || self.scheme1_pilots >= self.subcarriers {
            return Err(invalid("scheme1_pilots must satisfy 2 <= P1 < K"));
        }
        if !(self.coherence_delta > 0.0 && self.coherence_delta < 1.0) {
            return Err(invalid("coherence_delta must lie in (0, 1)"));
        }
        if !(self.pilot_power > 0.0) {
            return Err(invalid("pilot_power must be positive"));
        }
        if self.design_rounds == 0 {
            return Err(invalid("design_rounds must be >= 1"));
        }
        if self.oversample == 0 {
            return Err(invalid("oversample must be >= 1"));
        }
        if let Some(f) = self.omp_residual_factor {
            if !(f > 0.0) {
                return Err(invalid("omp_residual_factor must be positive"));
            }
        }
        self.layout()?;
        self.doppler_params()?;
        self.train(self.track_position_m, self.speed_kmh)?;
        Ok(())
    }

    pub fn layout(&self) -> Result<CellLayout> {
        Ok(CellLayout::new(
            self.d_max_m,
            self.d_min_m,
            self.d_s_m,
            self.d_c_m,
            self.num_cells,
        )?)
    }

    pub fn doppler_params(&self) -> Result<DopplerParams> {
        Ok(DopplerParams::new(
            self.carrier_hz,
            self.lightspeed_mps,
            self.packet_duration_s,
        )?)
    }

    pub fn train(&self, track_position: f64, speed_kmh: f64) -> Result<TrainState> {
        Ok(TrainState::new(
            track_position,
            hst_ofdm_core::geometry::kmh_to_mps(speed_kmh),
            self.antenna_offsets_m.clone(),
            self.train_length_m,
        )?)
    }

    /// Oversampling actually used by the basis (1 for CE).
    pub fn effective_oversample(&self) -> usize {
        match self.bem {
            BemChoice::Ce => 1,
            BemChoice::Gce => self.oversample,
        }
    }

    pub fn elimination_mode(&self) -> EliminationMode {
        match self.elimination {
            EliminationChoice::Oracle => EliminationMode::Oracle,
            EliminationChoice::Physical => match self.band_radius {
                Some(band_radius) => EliminationMode::Physical { band_radius },
                None => EliminationMode::default_physical(self.bem.into()),
            },
        }
    }

    /// Label for the `mode` CSV column.
    pub fn mode_label(&self) -> String {
        let elim = match self.elimination_mode() {
            EliminationMode::Oracle => "oracle".to_string(),
            EliminationMode::Physical { band_radius } => format!("physical-r{band_radius}"),
        };
        let channel = match self.channel_mode {
            ChannelModeChoice::Strict => "strict",
            ChannelModeChoice::Continuous => "continuous",
        };
        format!("{elim}+{channel}")
    }

    /// Noise variance for an SNR in dB (unit received power per link).
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        if self.noiseless {
            0.0
        } else {
            10f64.powf(-snr_db / 10.0)
        }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
