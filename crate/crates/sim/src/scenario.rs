//! Per-point geometry and the per-trial Monte Carlo engine.

use std::collections::BTreeMap;
use std::path::Path;

use hst_ofdm_core::bem::{bem_order, partial_fourier, BemConfig, Circulant, FreqBasis, PartialFourier};
use hst_ofdm_core::channel::{
    doppler_ramp, realize, sample_channel_with_profile, ModulatedChannel, SparseBemChannel,
};
use hst_ofdm_core::eliminator::{select_component, BranchInputs, EliminationMode, EliminatorBank};
use hst_ofdm_core::estimator::{
    build_measurement, default_bpdn_epsilon, solve_bpdn, solve_ls, solve_omp, BpdnOptions,
    EstimateResult, OmpStop,
};
use hst_ofdm_core::geometry::{
    dominant_index_from_doppler, dominant_index_from_position, doppler_shift, kmh_to_mps,
    local_offset, serving_cells, CellLayout, DopplerParams,
};
use hst_ofdm_core::ofdm::{awgn, bit_errors, build_frame, zf_detect, FrameSpec, TxFrame};
use hst_ofdm_core::pilot_design::{design_pilots, equidistant_pattern, CoherenceParams};
use hst_ofdm_core::Complex;
use rand::Rng;

use crate::config::{ExperimentConfig, PilotSource, Scheme};
use crate::error::{HarnessError, Result};
use crate::rng::design_rng;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

fn gather(v: &[Complex], idx: &[usize]) -> Vec<Complex> {
    idx.iter().map(|&i| v[i]).collect()
}

fn add(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `Q(x)`, the standard normal tail.
pub fn gaussian_tail(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Reads a pattern written by `design-pilots` or a bare JSON index array.
pub fn load_pattern_file(path: &Path) -> Result<Vec<usize>> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum PatternFile {
        Bare(Vec<usize>),
        Report { pilots: Vec<usize> },
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    let parsed: PatternFile = serde_json::from_str(&text)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    Ok(match parsed {
        PatternFile::Bare(p) | PatternFile::Report { pilots: p } => p,
    })
}

/// One pilot pattern per cell.
pub fn resolve_pilots(cfg: &ExperimentConfig) -> Result<Vec<Vec<usize>>> {
    let k = cfg.subcarriers;
    let params = CoherenceParams::new(cfg.coherence_delta)?;
    let design = |cell: usize| -> Result<Vec<usize>> {
        let out = design_pilots(
            k,
            cfg.delay_span,
            cfg.pilots,
            cfg.design_rounds,
            &params,
            &mut design_rng(cfg.seed, cell),
        )?;
        Ok(out.pattern.into_indices())
    };
    let patterns = match &cfg.pilot_pattern {
        PilotSource::Designed if cfg.distinct_cell_patterns => {
            (0..cfg.num_cells).map(design).collect::<Result<Vec<_>>>()?
        }
        PilotSource::Designed => vec![design(0)?; cfg.num_cells],
        PilotSource::Equidistant => {
            vec![equidistant_pattern(k, cfg.pilots)?.into_indices(); cfg.num_cells]
        }
        PilotSource::File(path) => {
            let mut p = load_pattern_file(path)?;
            p.sort_unstable();
            if p.len() != cfg.pilots {
                return Err(HarnessError::Config(format!(
                    "pattern file has {} pilots, config expects {}",
                    p.len(),
                    cfg.pilots
                )));
            }
            if p.windows(2).any(|w| w[0] == w[1]) || p.iter().any(|&i| i >= k) {
                return Err(HarnessError::Config("pattern file indices must be unique and < K".into()));
            }
            vec![p; cfg.num_cells]
        }
    };
    Ok(patterns)
}

/// Guard-pilot split: the equidistant set is dealt alternately to odd and
/// even cells, and each cell leaves the other half empty.
pub fn scheme1_patterns(cfg: &ExperimentConfig) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let all = equidistant_pattern(cfg.subcarriers, cfg.scheme1_pilots)?.into_indices();
    let half = |parity: usize| -> Vec<usize> {
        all.iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == parity)
            .map(|(_, &w)| w)
            .collect()
    };
    let (even, odd) = (half(0), half(1));
    Ok((0..cfg.num_cells)
        .map(|t| {
            if t % 2 == 0 {
                (even.clone(), odd.clone())
            } else {
                (odd.clone(), even.clone())
            }
        })
        .collect())
}

/// Point-independent pieces of an experiment.
pub struct Setup {
    pub cfg: ExperimentConfig,
    pub layout: CellLayout,
    pub doppler: DopplerParams,
    pub partial: PartialFourier,
    pub patterns: Vec<Vec<usize>>,
    pub specs: Vec<FrameSpec>,
    pub scheme1_patterns: Vec<Vec<usize>>,
    pub scheme1_specs: Vec<FrameSpec>,
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let k = cfg.subcarriers;
        let patterns = resolve_pilots(cfg)?;
        let symbols = cfg.pilot_symbols.into();
        let specs = patterns
            .iter()
            .map(|w| Ok(FrameSpec::new(k, w.clone(), cfg.pilot_power)?.with_pilot_symbols(symbols)))
            .collect::<Result<Vec<_>>>()?;
        let split = scheme1_patterns(cfg)?;
        let scheme1_specs = split
            .iter()
            .map(|(own, guard)| {
                Ok(FrameSpec::with_guards(k, own.clone(), guard.clone(), cfg.pilot_power)?
                    .with_pilot_symbols(symbols))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            cfg: cfg.clone(),
            layout: cfg.layout()?,
            doppler: cfg.doppler_params()?,
            partial: partial_fourier(k, cfg.delay_span)?,
            patterns,
            specs,
            scheme1_patterns: split.into_iter().map(|(own, _)| own).collect(),
            scheme1_specs,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.cfg.num_cells
    }

    pub fn num_antennas(&self) -> usize {
        self.cfg.antenna_offsets_m.len()
    }
}

/// One antenna-to-cell link at a sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub active: bool,
    pub alpha: f64,
    pub doppler_hz: f64,
    pub q_true: usize,
    /// Index the receiver derives from its (possibly perturbed) position.
    pub q_hat: usize,
}

/// Geometry and basis at one track position and speed.
pub struct Point {
    pub track_position: f64,
    pub speed_kmh: f64,
    pub order: usize,
    pub basis: FreqBasis,
    /// `links[r][t]`.
    pub links: Vec<Vec<Link>>,
    /// Cells covering the reference (zero-offset) coordinate.
    pub serving: Vec<usize>,
}

impl Point {
    pub fn new(setup: &Setup, track_position: f64, speed_kmh: f64) -> Result<Self> {
        let cfg = &setup.cfg;
        let a = cfg.effective_oversample();
        let speed = kmh_to_mps(speed_kmh);
        let td = cfg.packet_duration_s;
        let order = bem_order(setup.doppler.max_doppler(speed), td, a);
        let basis = FreqBasis::new(&BemConfig::new(cfg.bem.into(), cfg.subcarriers, order, a)?)?;
        let train = cfg.train(track_position, speed_kmh)?;
        let layout = &setup.layout;
        let two_d0 = 2.0 * layout.d_0();
        let mut links = Vec::with_capacity(train.num_antennas());
        for pos in train.antenna_positions() {
            let mut row = Vec::with_capacity(cfg.num_cells);
            for t in 1..=cfg.num_cells {
                let alpha = local_offset(pos, t, layout);
                if !layout.covers(alpha) {
                    row.push(Link {
                        active: false,
                        alpha,
                        doppler_hz: 0.0,
                        q_true: order / 2,
                        q_hat: order / 2,
                    });
                    continue;
                }
                let f = doppler_shift(alpha, speed, &setup.doppler, layout)?;
                let q_true = dominant_index_from_doppler(f, &setup.doppler, order, a)?;
                let alpha_hat =
                    local_offset(pos + cfg.position_error_m, t, layout).clamp(0.0, two_d0);
                let q_hat = dominant_index_from_position(
                    alpha_hat,
                    layout,
                    setup.doppler.normalized_max_doppler(speed),
                    order,
                    a,
                )?;
                row.push(Link {
                    active: true,
                    alpha,
                    doppler_hz: f,
                    q_true,
                    q_hat,
                });
            }
            links.push(row);
        }
        Ok(Self {
            track_position,
            speed_kmh,
            order,
            basis,
            links,
            serving: serving_cells(track_position, layout),
        })
    }

    pub fn active_links(&self) -> usize {
        self.links.iter().flatten().filter(|l| l.active).count()
    }

    /// True when two cells seen by one antenna share a dominant index, so
    /// their Doppler images coincide.
    pub fn degenerate(&self) -> bool {
        self.links.iter().any(|row| {
            let q: Vec<usize> = row.iter().filter(|l| l.active).map(|l| l.q_hat).collect();
            q.iter().enumerate().any(|(i, a)| q[i + 1..].contains(a))
        })
    }
}

/// Everything random in one trial, drawn in a fixed order regardless of
/// which schemes are evaluated.
pub struct TrialDraw {
    /// `channels[r][t]`.
    pub channels: Vec<Vec<SparseBemChannel>>,
    pub frames: Vec<TxFrame>,
    pub scheme1_frames: Vec<TxFrame>,
    /// Unit-variance noise per antenna, scaled per SNR.
    pub unit_noise: Vec<Vec<Complex>>,
}

pub fn draw_trial<R: Rng + ?Sized>(setup: &Setup, point: &Point, rng: &mut R) -> Result<TrialDraw> {
    let cfg = &setup.cfg;
    let mut channels = Vec::with_capacity(point.links.len());
    for row in &point.links {
        let mut per_cell = Vec::with_capacity(row.len());
        for link in row {
            per_cell.push(sample_channel_with_profile(
                rng,
                cfg.delay_span,
                cfg.sparsity,
                link.q_true,
                link.doppler_hz,
                cfg.power_delay_profile.into(),
            )?);
        }
        channels.push(per_cell);
    }
    let frames = setup.specs.iter().map(|s| build_frame(rng, s)).collect();
    let scheme1_frames = setup.scheme1_specs.iter().map(|s| build_frame(rng, s)).collect();
    let unit_noise = (0..point.links.len())
        .map(|_| awgn(rng, cfg.subcarriers, 1.0))
        .collect();
    Ok(TrialDraw {
        channels,
        frames,
        scheme1_frames,
        unit_noise,
    })
}

/// Channels and noiseless per-cell receptions of one trial.
pub struct Realized {
    /// `truth[r][t]`; zero for inactive links.
    pub truth: Vec<Vec<ModulatedChannel>>,
    /// `components[r][t] = H_{t,r} x_t`.
    pub components: Vec<Vec<Vec<Complex>>>,
    pub scheme1_components: Option<Vec<Vec<Vec<Complex>>>>,
}

pub fn realize_trial(setup: &Setup, point: &Point, draw: &TrialDraw, with_scheme1: bool) -> Result<Realized> {
    let cfg = &setup.cfg;
    let fft = point.basis.fft();
    let mut truth = Vec::new();
    for (row, chans) in point.links.iter().zip(&draw.channels) {
        let mut per_cell = Vec::new();
        for (link, ch) in row.iter().zip(chans) {
            per_cell.push(if link.active {
                realize(ch, &point.basis, cfg.channel_mode.into(), cfg.packet_duration_s, &setup.partial)?
            } else {
                ModulatedChannel::zero(cfg.subcarriers, fft)
            });
        }
        truth.push(per_cell);
    }
    let through = |frames: &[TxFrame]| -> Vec<Vec<Vec<Complex>>> {
        truth
            .iter()
            .map(|row| row.iter().zip(frames).map(|(h, f)| h.apply(f.symbols(), fft)).collect())
            .collect()
    };
    let components = through(&draw.frames);
    let scheme1_components = with_scheme1.then(|| through(&draw.scheme1_frames));
    Ok(Realized {
        truth,
        components,
        scheme1_components,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    /// Squared Frobenius error over `K^2`, per active link.
    Mse,
    /// Solver warnings per active link.
    WarningRate,
    /// Bit errors per transmitted bit.
    Ber,
    /// Conditional ZF bit error probability `mean_k Q(|Delta_k| / sigma)`.
    BerClosedForm,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Mse => "mse",
            Metric::WarningRate => "warning_rate",
            Metric::Ber => "ber",
            Metric::BerClosedForm => "ber_closed_form",
        }
    }
}

/// Running `(sum, count)` pairs keyed by SNR index, scheme and metric.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tally {
    pub entries: BTreeMap<(usize, Scheme, Metric), (f64, f64)>,
}

impl Tally {
    pub fn add(&mut self, snr: usize, scheme: Scheme, metric: Metric, sum: f64, count: f64) {
        let e = self.entries.entry((snr, scheme, metric)).or_insert((0.0, 0.0));
        e.0 += sum;
        e.1 += count;
    }

    /// Folds trial tallies in trial order.
    pub fn merge_ordered(parts: impl IntoIterator<Item = Tally>) -> Tally {
        let mut out = Tally::default();
        for p in parts {
            for (k, (s, c)) in p.entries {
                out.add(k.0, k.1, k.2, s, c);
            }
        }
        out
    }

    pub fn mean(&self, snr: usize, scheme: Scheme, metric: Metric) -> Option<f64> {
        self.entries
            .get(&(snr, scheme, metric))
            .filter(|(_, c)| *c > 0.0)
            .map(|(s, c)| s / c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Solver {
    Omp,
    Bp,
    Ls,
}

fn solver_of(scheme: Scheme) -> Solver {
    match scheme {
        Scheme::ProposedBp => Solver::Bp,
        Scheme::ProposedLs => Solver::Ls,
        _ => Solver::Omp,
    }
}

/// What a trial should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evaluation {
    Mse,
    Ber,
}

pub fn supported(scheme: Scheme, eval: Evaluation) -> bool {
    match eval {
        Evaluation::Mse => scheme != Scheme::PerfectCsi,
        Evaluation::Ber => !matches!(scheme, Scheme::GenieOmp | Scheme::BaselineOmp),
    }
}

struct Ctx<'a> {
    setup: &'a Setup,
    point: &'a Point,
    draw: &'a TrialDraw,
    sigma2: f64,
}

impl Ctx<'_> {
    fn k(&self) -> usize {
        self.setup.cfg.subcarriers
    }

    fn noise(&self, r: usize) -> Vec<Complex> {
        let s = self.sigma2.sqrt();
        self.draw.unit_noise[r].iter().map(|n| n * s).collect()
    }

    fn solve(&self, obs: Vec<Vec<Complex>>, patterns: &[Vec<usize>], frames: &[TxFrame], active: &[bool], solver: Solver) -> Result<EstimateResult> {
        let cfg = &self.setup.cfg;
        let symbols: Vec<Vec<Complex>> = frames
            .iter()
            .zip(patterns)
            .map(|(f, w)| gather(f.symbols(), w))
            .collect();
        let sys = build_measurement(&symbols, patterns, &self.setup.partial, &obs, active)?;
        let p = patterns.first().map_or(0, Vec::len);
        Ok(match solver {
            Solver::Ls => solve_ls(&sys),
            Solver::Omp => {
                let stop = match cfg.omp_residual_factor {
                    None => OmpStop::Sparsity(cfg.sparsity),
                    Some(f) => OmpStop::Residual {
                        tolerance: f * (p as f64 * self.sigma2).sqrt(),
                        max_atoms: p,
                    },
                };
                solve_omp(&sys, stop)
            }
            Solver::Bp => solve_bpdn(
                &sys,
                default_bpdn_epsilon(p, self.sigma2),
                BpdnOptions {
                    max_iterations: cfg.bpdn_max_iterations,
                    ..BpdnOptions::default()
                },
            ),
        })
    }

    fn active(&self, r: usize) -> Vec<bool> {
        self.point.links[r].iter().map(|l| l.active).collect()
    }

    fn composite(&self, comps: &[Vec<Complex>], noise: &[Complex]) -> Vec<Complex> {
        let mut y = noise.to_vec();
        for c in comps {
            for (a, b) in y.iter_mut().zip(c) {
                *a += b;
            }
        }
        y
    }

    fn estimate_channel(&self, c: &[Complex], modulation: Circulant) -> Result<ModulatedChannel> {
        Ok(ModulatedChannel::new(modulation, self.setup.partial.response(c))?)
    }
}

/// Evaluates every scheme at one noise level and records the results under
/// SNR index `snr`.
pub fn evaluate(
    setup: &Setup,
    point: &Point,
    draw: &TrialDraw,
    real: &Realized,
    sigma2: f64,
    snr: usize,
    schemes: &[Scheme],
    eval: Evaluation,
    tally: &mut Tally,
) -> Result<()> {
    let ctx = Ctx {
        setup,
        point,
        draw,
        sigma2,
    };
    let cfg = &setup.cfg;
    let k = ctx.k();
    let kk = (k * k) as f64;
    let basis = &point.basis;
    let bank = EliminatorBank::new(basis);
    let mode = cfg.elimination_mode();
    let cells = setup.num_cells();

    for r in 0..point.links.len() {
        let links = &point.links[r];
        let active = ctx.active(r);
        let n_active = active.iter().filter(|a| **a).count() as f64;
        if n_active == 0.0 {
            continue;
        }
        let noise = ctx.noise(r);
        let comps = &real.components[r];
        let y = ctx.composite(comps, &noise);

        // G_{q^} applied to each branch's selected vector, shared by the
        // proposed schemes.
        let needs_proposed = schemes.iter().any(|s| {
            matches!(s, Scheme::ProposedOmp | Scheme::ProposedBp | Scheme::ProposedLs)
        });
        let mut branch: Vec<Vec<Complex>> = vec![Vec::new(); cells];
        if needs_proposed {
            for t in 0..cells {
                if !links[t].active {
                    continue;
                }
                let sel = select_component(
                    &BranchInputs {
                        composite: &y,
                        component: Some(&comps[t]),
                        noise: Some(&noise),
                        pilots: &setup.patterns[t],
                    },
                    links[t].q_hat,
                    mode,
                    &bank,
                )?;
                branch[t] = basis.apply_g(links[t].q_hat, &sel);
            }
        }

        for &scheme in schemes {
            match scheme {
                Scheme::ProposedOmp
                | Scheme::ProposedBp
                | Scheme::ProposedLs
                | Scheme::GenieOmp
                | Scheme::BaselineOmp => {
                    let obs: Vec<Vec<Complex>> = (0..cells)
                        .map(|t| {
                            let w = &setup.patterns[t];
                            if !links[t].active {
                                return vec![zero(); w.len()];
                            }
                            match scheme {
                                Scheme::GenieOmp => {
                                    let delta = real.truth[r][t].response();
                                    let x = draw.frames[t].symbols();
                                    w.iter().map(|&i| delta[i] * x[i] + noise[i]).collect()
                                }
                                Scheme::BaselineOmp => gather(&y, w),
                                _ => gather(&branch[t], w),
                            }
                        })
                        .collect();
                    let est = ctx.solve(obs, &setup.patterns, &draw.frames, &active, solver_of(scheme))?;
                    let warnings = est.warnings().count() as f64;
                    let mut sq = 0.0;
                    let mut errors = 0.0;
                    let mut bits = 0.0;
                    for t in 0..cells {
                        if !links[t].active {
                            continue;
                        }
                        let q = links[t].q_hat;
                        let h = ctx.estimate_channel(&est.coefficients[t], basis.d_operator(q).clone())?;
                        match eval {
                            Evaluation::Mse => sq += real.truth[r][t].squared_distance(&h) / kk,
                            Evaluation::Ber => {
                                let data_in = match mode {
                                    EliminationMode::Oracle => branch[t].clone(),
                                    EliminationMode::Physical { .. } => basis.apply_g(q, &y),
                                };
                                let det = zf_detect(&data_in, h.response(), setup.specs[t].data());
                                errors += bit_errors(draw.frames[t].payload_bits(), &det.bits) as f64;
                                bits += det.bits.len() as f64;
                            }
                        }
                    }
                    match eval {
                        Evaluation::Mse => tally.add(snr, scheme, Metric::Mse, sq, n_active),
                        Evaluation::Ber => tally.add(snr, scheme, Metric::Ber, errors, bits),
                    }
                    tally.add(snr, scheme, Metric::WarningRate, warnings, n_active);
                }
                Scheme::Scheme1Omp => {
                    let comps1 = real
                        .scheme1_components
                        .as_ref()
                        .expect("scheme 1 components realized")[r]
                        .as_slice();
                    let y1 = ctx.composite(comps1, &noise);
                    let shifts: Vec<i64> = links
                        .iter()
                        .map(|l| basis.config().offset(l.q_hat).round() as i64)
                        .collect();
                    let shifted = |t: usize| -> Vec<Complex> {
                        (0..k)
                            .map(|i| y1[(i as i64 + shifts[t]).rem_euclid(k as i64) as usize])
                            .collect()
                    };
                    let obs: Vec<Vec<Complex>> = (0..cells)
                        .map(|t| {
                            let w = &setup.scheme1_patterns[t];
                            if links[t].active {
                                gather(&shifted(t), w)
                            } else {
                                vec![zero(); w.len()]
                            }
                        })
                        .collect();
                    let est = ctx.solve(obs, &setup.scheme1_patterns, &draw.scheme1_frames, &active, Solver::Omp)?;
                    let warnings = est.warnings().count() as f64;
                    let mut sq = 0.0;
                    let mut errors = 0.0;
                    let mut bits = 0.0;
                    for t in 0..cells {
                        if !links[t].active {
                            continue;
                        }
                        let ramp = doppler_ramp(shifts[t] as f64, 1.0, k);
                        let h = ctx.estimate_channel(&est.coefficients[t], Circulant::from_modulation(ramp, basis.fft()))?;
                        match eval {
                            Evaluation::Mse => sq += real.truth[r][t].squared_distance(&h) / kk,
                            Evaluation::Ber => {
                                let det = zf_detect(&shifted(t), h.response(), setup.scheme1_specs[t].data());
                                errors += bit_errors(draw.scheme1_frames[t].payload_bits(), &det.bits) as f64;
                                bits += det.bits.len() as f64;
                            }
                        }
                    }
                    match eval {
                        Evaluation::Mse => tally.add(snr, scheme, Metric::Mse, sq, n_active),
                        Evaluation::Ber => tally.add(snr, scheme, Metric::Ber, errors, bits),
                    }
                    tally.add(snr, scheme, Metric::WarningRate, warnings, n_active);
                }
                Scheme::PerfectCsi => {
                    let mut errors = 0.0;
                    let mut bits = 0.0;
                    let mut expected = 0.0;
                    let sigma = sigma2.sqrt();
                    for t in 0..cells {
                        if !links[t].active {
                            continue;
                        }
                        let z = basis.apply_g(links[t].q_true, &add(&comps[t], &noise));
                        let delta = real.truth[r][t].response();
                        let data = setup.specs[t].data();
                        let det = zf_detect(&z, delta, data);
                        errors += bit_errors(draw.frames[t].payload_bits(), &det.bits) as f64;
                        bits += det.bits.len() as f64;
                        for &d in data {
                            let p = if sigma > 0.0 {
                                gaussian_tail(delta[d].norm() / sigma)
                            } else if delta[d].norm() > 0.0 {
                                0.0
                            } else {
                                0.5
                            };
                            expected += 2.0 * p;
                        }
                    }
                    tally.add(snr, scheme, Metric::Ber, errors, bits);
                    tally.add(snr, scheme, Metric::BerClosedForm, expected, bits);
                }
            }
        }
    }
    Ok(())
}
