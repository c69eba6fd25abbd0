//! Frames, QAM4 mapping, multi-cell reception and zero-forcing detection.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use crate::channel::{complex_normal, FreqChannel, ModulatedChannel};
use crate::fft::Fft;
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Modulation {
    /// Gray-mapped QPSK with unit average power.
    #[default]
    Qam4,
}

impl Modulation {
    pub fn bits_per_symbol(&self) -> usize {
        match self {
            Modulation::Qam4 => 2,
        }
    }
}

/// Phase of the pilot symbols; the amplitude is always `sqrt(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PilotSymbols {
    #[default]
    Constant,
    RandomQpsk,
}

/// Subcarrier allocation of one base station.
///
/// Subcarriers are split into pilots, guards (transmitting zero) and data.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSpec {
    subcarriers: usize,
    pilots: Vec<usize>,
    guards: Vec<usize>,
    data: Vec<usize>,
    modulation: Modulation,
    pilot_power: f64,
    pilot_symbols: PilotSymbols,
}

fn check_indices(indices: &[usize], subcarriers: usize, what: &'static str) -> Result<()> {
    if indices.iter().any(|&i| i >= subcarriers) {
        return Err(Error::InvalidParameter(what));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(what));
    }
    Ok(())
}

impl FrameSpec {
    /// `pilots` must be strictly increasing and inside `0..K`.
    pub fn new(subcarriers: usize, pilots: Vec<usize>, pilot_power: f64) -> Result<Self> {
        Self::with_guards(subcarriers, pilots, Vec::new(), pilot_power)
    }

    pub fn with_guards(
        subcarriers: usize,
        pilots: Vec<usize>,
        guards: Vec<usize>,
        pilot_power: f64,
    ) -> Result<Self> {
        check_indices(&pilots, subcarriers, "pilot indices must be sorted, unique and < K")?;
        check_indices(&guards, subcarriers, "guard indices must be sorted, unique and < K")?;
        if !(pilot_power > 0.0 && pilot_power.is_finite()) {
            return Err(Error::InvalidParameter("pilot power must be positive"));
        }
        let mut role = vec![0u8; subcarriers];
        for &p in &pilots {
            role[p] = 1;
        }
        for &g in &guards {
            if role[g] != 0 {
                return Err(Error::InvalidParameter("guard overlaps a pilot"));
            }
            role[g] = 2;
        }
        let data = (0..subcarriers).filter(|&k| role[k] == 0).collect();
        Ok(Self {
            subcarriers,
            pilots,
            guards,
            data,
            modulation: Modulation::Qam4,
            pilot_power,
            pilot_symbols: PilotSymbols::Constant,
        })
    }

    pub fn with_pilot_symbols(mut self, symbols: PilotSymbols) -> Self {
        self.pilot_symbols = symbols;
        self
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn pilots(&self) -> &[usize] {
        &self.pilots
    }

    pub fn guards(&self) -> &[usize] {
        &self.guards
    }

    pub fn data(&self) -> &[usize] {
        &self.data
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn pilot_power(&self) -> f64 {
        self.pilot_power
    }

    pub fn pilot_symbols(&self) -> PilotSymbols {
        self.pilot_symbols
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TxFrame {
    symbols: Vec<Complex>,
    payload_bits: Vec<bool>,
}

impl TxFrame {
    pub fn symbols(&self) -> &[Complex] {
        &self.symbols
    }

    /// Bits carried on the data subcarriers, two per subcarrier in order.
    pub fn payload_bits(&self) -> &[bool] {
        &self.payload_bits
    }

    /// Copy with every subcarrier outside `keep` set to zero.
    pub fn restricted(&self, keep: &[usize]) -> Vec<Complex> {
        let mut out = vec![Complex::new(0.0, 0.0); self.symbols.len()];
        for &k in keep {
            out[k] = self.symbols[k];
        }
        out
    }

    /// Frame with the data subcarriers zeroed.
    pub fn without_data(&self, spec: &FrameSpec) -> TxFrame {
        TxFrame {
            symbols: self.restricted(spec.pilots()),
            payload_bits: Vec::new(),
        }
    }
}

/// Gray QAM4: `(b0, b1) -> ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2)`.
pub fn qam4_map(b0: bool, b1: bool) -> Complex {
    let re = if b0 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    let im = if b1 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
    Complex::new(re, im)
}

/// Nearest-point QAM4 decision.
pub fn qam4_demap(symbol: Complex) -> (bool, bool) {
    (symbol.re < 0.0, symbol.im < 0.0)
}

pub fn build_frame<R: Rng + ?Sized>(rng: &mut R, spec: &FrameSpec) -> TxFrame {
    let mut symbols = vec![Complex::new(0.0, 0.0); spec.subcarriers];
    let amp = libm::sqrt(spec.pilot_power);
    for &p in &spec.pilots {
        symbols[p] = match spec.pilot_symbols {
            PilotSymbols::Constant => Complex::new(amp, 0.0),
            PilotSymbols::RandomQpsk => qam4_map(rng.random(), rng.random()) * amp,
        };
    }
    let mut payload_bits = Vec::with_capacity(2 * spec.data.len());
    for &d in &spec.data {
        let b0: bool = rng.random();
        let b1: bool = rng.random();
        payload_bits.push(b0);
        payload_bits.push(b1);
        symbols[d] = qam4_map(b0, b1);
    }
    TxFrame {
        symbols,
        payload_bits,
    }
}

/// i.i.d. circular complex normal noise with variance `sigma2` per entry.
pub fn awgn<R: Rng + ?Sized>(rng: &mut R, len: usize, sigma2: f64) -> Vec<Complex> {
    let s = libm::sqrt(sigma2);
    (0..len).map(|_| complex_normal(rng) * s).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RxSignal {
    pub samples: Vec<Complex>,
    pub noise_variance: f64,
}

fn check_cells(channels: usize, frames: usize) -> Result<()> {
    if channels != frames {
        return Err(Error::DimensionMismatch {
            what: "frames per cell",
            expected: channels,
            found: frames,
        });
    }
    Ok(())
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

/// `y = sum_t H_t x_t + n` with dense channels.
pub fn transmit<R: Rng + ?Sized>(
    channels: &[FreqChannel],
    frames: &[TxFrame],
    sigma2: f64,
    rng: &mut R,
) -> Result<RxSignal> {
    check_cells(channels.len(), frames.len())?;
    let k_len = frames.first().map_or(0, |f| f.symbols.len());
    let mut samples = vec![Complex::new(0.0, 0.0); k_len];
    for (h, f) in channels.iter().zip(frames) {
        check_len("channel size", k_len, h.subcarriers())?;
        check_len("frame length", k_len, f.symbols.len())?;
        let x = nalgebra::DVector::from_column_slice(&f.symbols);
        let y = h.matrix() * x;
        for (s, v) in samples.iter_mut().zip(y.iter()) {
            *s += v;
        }
    }
    for (s, n) in samples.iter_mut().zip(awgn(rng, k_len, sigma2)) {
        *s += n;
    }
    Ok(RxSignal {
        samples,
        noise_variance: sigma2,
    })
}

/// A received vector kept split into its per-cell components and noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Reception {
    components: Vec<Vec<Complex>>,
    noise: Vec<Complex>,
    noise_variance: f64,
}

impl Reception {
    /// `H_t x_t` for cell `t`.
    pub fn component(&self, cell: usize) -> &[Complex] {
        &self.components[cell]
    }

    pub fn components(&self) -> &[Vec<Complex>] {
        &self.components
    }

    pub fn noise(&self) -> &[Complex] {
        &self.noise
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// `y - n`.
    pub fn noiseless(&self) -> Vec<Complex> {
        let mut y = vec![Complex::new(0.0, 0.0); self.noise.len()];
        for c in &self.components {
            for (a, b) in y.iter_mut().zip(c) {
                *a += b;
            }
        }
        y
    }

    pub fn samples(&self) -> Vec<Complex> {
        let mut y = self.noiseless();
        for (a, b) in y.iter_mut().zip(&self.noise) {
            *a += b;
        }
        y
    }

    pub fn to_rx(&self) -> RxSignal {
        RxSignal {
            samples: self.samples(),
            noise_variance: self.noise_variance,
        }
    }
}

/// Multi-cell reception through structured channels with caller-supplied noise.
pub fn receive(
    channels: &[ModulatedChannel],
    frames: &[TxFrame],
    noise: Vec<Complex>,
    noise_variance: f64,
    fft: &Fft,
) -> Result<Reception> {
    check_cells(channels.len(), frames.len())?;
    let k_len = noise.len();
    let mut components = Vec::with_capacity(channels.len());
    for (h, f) in channels.iter().zip(frames) {
        check_len("channel size", k_len, h.subcarriers())?;
        check_len("frame length", k_len, f.symbols.len())?;
        components.push(h.apply(&f.symbols, fft));
    }
    Ok(Reception {
        components,
        noise,
        noise_variance,
    })
}

/// Powers of the terms seen on one cell's pilot rows.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InterferenceDecomposition {
    /// Desired pilot term.
    pub desired_power: f64,
    /// ICI from the cell's own data.
    pub self_ici_power: f64,
    /// Everything received from the other cells.
    pub mci_power: f64,
    pub noise_power: f64,
}

/// The terms themselves, restricted to the pilot rows.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceTerms {
    pub desired: Vec<Complex>,
    pub self_ici: Vec<Complex>,
    pub mci: Vec<Complex>,
}

fn power(v: &[Complex]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn gather(v: &[Complex], rows: &[usize]) -> Vec<Complex> {
    rows.iter().map(|&r| v[r]).collect()
}

impl InterferenceTerms {
    pub fn powers(&self, noise_power: f64) -> InterferenceDecomposition {
        InterferenceDecomposition {
            desired_power: power(&self.desired),
            self_ici_power: power(&self.self_ici),
            mci_power: power(&self.mci),
            noise_power,
        }
    }

    /// `desired + self_ici + mci`, which equals `y - n` on the pilot rows.
    pub fn total(&self) -> Vec<Complex> {
        self.desired
            .iter()
            .zip(&self.self_ici)
            .zip(&self.mci)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }
}

/// Splits `y(w_t)` for each cell `t` into desired pilots, own-data ICI and
/// other-cell interference.
pub fn interference_terms(
    channels: &[ModulatedChannel],
    frames: &[TxFrame],
    specs: &[FrameSpec],
    fft: &Fft,
) -> Result<Vec<InterferenceTerms>> {
    check_cells(channels.len(), frames.len())?;
    check_cells(channels.len(), specs.len())?;
    let full: Vec<Vec<Complex>> = channels
        .iter()
        .zip(frames)
        .map(|(h, f)| h.apply(&f.symbols, fft))
        .collect();
    let mut out = Vec::with_capacity(channels.len());
    for t in 0..channels.len() {
        let rows = specs[t].pilots();
        let pilot_only = channels[t].apply(&frames[t].restricted(rows), fft);
        let desired = gather(&pilot_only, rows);
        let self_ici: Vec<Complex> = gather(&full[t], rows)
            .iter()
            .zip(&desired)
            .map(|(a, b)| a - b)
            .collect();
        let mut mci = vec![Complex::new(0.0, 0.0); rows.len()];
        for (nu, comp) in full.iter().enumerate() {
            if nu != t {
                for (m, &r) in mci.iter_mut().zip(rows) {
                    *m += comp[r];
                }
            }
        }
        out.push(InterferenceTerms {
            desired,
            self_ici,
            mci,
        });
    }
    Ok(out)
}

/// Per-cell powers of [`interference_terms`], with the noise power measured
/// on the same rows when a noise vector is supplied.
pub fn decompose_interference(
    channels: &[ModulatedChannel],
    frames: &[TxFrame],
    specs: &[FrameSpec],
    noise: Option<&[Complex]>,
    fft: &Fft,
) -> Result<Vec<InterferenceDecomposition>> {
    let terms = interference_terms(channels, frames, specs, fft)?;
    Ok(terms
        .iter()
        .zip(specs)
        .map(|(t, s)| {
            let np = noise.map_or(0.0, |n| power(&gather(n, s.pilots())));
            t.powers(np)
        })
        .collect())
}

/// Hard decisions from ZF equalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub bits: Vec<bool>,
    /// Data subcarriers whose channel estimate was zero.
    pub erasures: usize,
}

/// Below this magnitude a channel estimate is treated as zero.
pub const ERASURE_THRESHOLD: f64 = 1e-12;

/// `X(d) = y(d) / Delta(d)`, QAM4 demapped. Erased subcarriers decode as
/// `(false, false)`.
pub fn zf_detect(received: &[Complex], diag_estimates: &[Complex], data: &[usize]) -> Detection {
    let mut bits = Vec::with_capacity(2 * data.len());
    let mut erasures = 0;
    for &d in data {
        let h = diag_estimates[d];
        if h.norm() < ERASURE_THRESHOLD {
            erasures += 1;
            bits.push(false);
            bits.push(false);
            continue;
        }
        let (b0, b1) = qam4_demap(received[d] / h);
        bits.push(b0);
        bits.push(b1);
    }
    Detection { bits, erasures }
}

pub fn bit_errors(sent: &[bool], detected: &[bool]) -> usize {
    assert_eq!(sent.len(), detected.len());
    sent.iter().zip(detected).filter(|(a, b)| a != b).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::{partial_fourier, BemConfig, BemKind, FreqBasis};
    use crate::channel::{realize, sample_channel, ChannelMode};
    use crate::CMatrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec(k: usize, p: usize) -> FrameSpec {
        FrameSpec::new(k, (0..p).map(|i| i * k / p).collect(), 1.0).unwrap()
    }

    #[test]
    fn spec_partitions_subcarriers() {
        let s = FrameSpec::with_guards(16, alloc::vec![0, 4, 8], alloc::vec![1, 5], 2.0).unwrap();
        assert_eq!(s.data().len(), 11);
        let mut all: Vec<usize> = s.pilots().iter().chain(s.guards()).chain(s.data()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..16).collect::<Vec<_>>());
        assert!(FrameSpec::new(16, alloc::vec![3, 2], 1.0).is_err());
        assert!(FrameSpec::new(16, alloc::vec![16], 1.0).is_err());
        assert!(FrameSpec::with_guards(16, alloc::vec![1], alloc::vec![1], 1.0).is_err());
    }

    #[test]
    fn frame_contents() {
        let s = FrameSpec::new(64, (0..64).collect(), 4.0).unwrap();
        let f = build_frame(&mut ChaCha8Rng::seed_from_u64(1), &s);
        assert!(f.payload_bits().is_empty());
        assert!(f.symbols().iter().all(|x| (x - Complex::new(2.0, 0.0)).norm() == 0.0));

        let s = spec(64, 8).with_pilot_symbols(PilotSymbols::RandomQpsk);
        let a = build_frame(&mut ChaCha8Rng::seed_from_u64(2), &s);
        let b = build_frame(&mut ChaCha8Rng::seed_from_u64(2), &s);
        assert_eq!(a, b);
        for &p in s.pilots() {
            assert!((a.symbols()[p].norm_sqr() - 1.0).abs() < 1e-12);
        }
        assert_eq!(a.payload_bits().len(), 2 * 56);
    }

    #[test]
    fn data_power_is_unit() {
        let s = spec(64, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut acc = 0.0;
        let n = 10_000;
        for _ in 0..n {
            let f = build_frame(&mut rng, &s);
            acc += s.data().iter().map(|&d| f.symbols()[d].norm_sqr()).sum::<f64>()
                / s.data().len() as f64;
        }
        assert!((acc / n as f64 - 1.0).abs() < 0.02);
    }

    #[test]
    fn gray_mapping_round_trip() {
        for b0 in [false, true] {
            for b1 in [false, true] {
                let s = qam4_map(b0, b1);
                assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
                assert_eq!(qam4_demap(s), (b0, b1));
            }
        }
        // neighbours differ in one bit
        assert_eq!(qam4_demap(Complex::new(-0.1, 0.5)), (true, false));
    }

    #[test]
    fn transmit_trivial_channels() {
        let s = spec(16, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = build_frame(&mut rng, &s);
        let zero = FreqChannel::from_matrix(CMatrix::zeros(16, 16));
        let y = transmit(&[zero], &[f.clone()], 0.0, &mut rng).unwrap();
        assert!(y.samples.iter().all(|v| v.norm() == 0.0));
        let id = FreqChannel::from_matrix(CMatrix::identity(16, 16));
        let y = transmit(&[id.clone()], &[f.clone()], 0.0, &mut rng).unwrap();
        assert_eq!(y.samples, f.symbols());
        assert!(transmit(&[id], &[], 0.0, &mut rng).is_err());
    }

    #[test]
    fn snr_definition() {
        // unit-power channel taps, unit-power symbols: E|Hx|^2 per subcarrier = 1
        let cfg = BemConfig::new(BemKind::Ce, 64, 4, 1).unwrap();
        let fb = FreqBasis::new(&cfg).unwrap();
        let pf = partial_fourier(64, 16).unwrap();
        let s = FrameSpec::new(64, alloc::vec![], 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let snr_db: f64 = 10.0;
        let sigma2 = libm::pow(10.0, -snr_db / 10.0);
        let mut acc = 0.0;
        let trials = 1000;
        for _ in 0..trials {
            let ch = sample_channel(&mut rng, 16, 4, 1, 0.0).unwrap();
            let h = realize(&ch, &fb, ChannelMode::StrictBem, 1.2e-3, &pf).unwrap();
            let f = build_frame(&mut rng, &s);
            let rx = receive(&[h], &[f], awgn(&mut rng, 64, sigma2), sigma2, fb.fft()).unwrap();
            acc += power(&rx.noiseless()) / (64.0 * sigma2);
        }
        let snr = acc / trials as f64;
        assert!((snr / 10.0 - 1.0).abs() < 0.05, "{snr}");
    }

    #[test]
    fn superposition_and_structured_path() {
        let cfg = BemConfig::new(BemKind::Gce, 32, 6, 2).unwrap();
        let fb = FreqBasis::new(&cfg).unwrap();
        let pf = partial_fourier(32, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = spec(32, 8);
        let hs: Vec<_> = [1usize, 5]
            .iter()
            .map(|&q| {
                let ch = sample_channel(&mut rng, 8, 3, q, 0.0).unwrap();
                realize(&ch, &fb, ChannelMode::StrictBem, 1.2e-3, &pf).unwrap()
            })
            .collect();
        let frames = [build_frame(&mut rng, &s), build_frame(&mut rng, &s)];
        let dense: Vec<_> = hs.iter().map(|h| h.to_freq_channel()).collect();
        let joint = transmit(&dense, &frames, 0.0, &mut rng).unwrap();
        let a = transmit(&dense[..1], &frames[..1], 0.0, &mut rng).unwrap();
        let b = transmit(&dense[1..], &frames[1..], 0.0, &mut rng).unwrap();
        let rx = receive(&hs, &frames, vec![Complex::new(0.0, 0.0); 32], 0.0, fb.fft()).unwrap();
        for k in 0..32 {
            assert!((joint.samples[k] - a.samples[k] - b.samples[k]).norm() < 1e-12);
            assert!((joint.samples[k] - rx.samples()[k]).norm() < 1e-12);
        }
    }

    fn two_cell_setup(
        ce: bool,
        q: [usize; 2],
        seed: u64,
    ) -> (FreqBasis, Vec<ModulatedChannel>, Vec<TxFrame>, Vec<FrameSpec>) {
        let cfg = if ce {
            BemConfig::new(BemKind::Ce, 64, 4, 1).unwrap()
        } else {
            BemConfig::new(BemKind::Gce, 64, 6, 2).unwrap()
        };
        let fb = FreqBasis::new(&cfg).unwrap();
        let pf = partial_fourier(64, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hs = q
            .iter()
            .map(|&q| {
                let ch = sample_channel(&mut rng, 16, 4, q, 0.0).unwrap();
                realize(&ch, &fb, ChannelMode::StrictBem, 1.2e-3, &pf).unwrap()
            })
            .collect();
        let specs = alloc::vec![spec(64, 16), spec(64, 16)];
        let frames = specs.iter().map(|s| build_frame(&mut rng, s)).collect();
        (fb, hs, frames, specs)
    }

    #[test]
    fn decomposition_cases() {
        // LTI: no self ICI
        let (fb, hs, frames, specs) = two_cell_setup(true, [2, 2], 7);
        let d = decompose_interference(&hs[..1], &frames[..1], &specs[..1], None, fb.fft()).unwrap();
        assert!(d[0].self_ici_power < 1e-18);
        assert_eq!(d[0].mci_power, 0.0);
        assert!(d[0].desired_power > 0.0);

        // overlap with distinct shifts
        let (fb, hs, frames, specs) = two_cell_setup(true, [0, 4], 8);
        let d = decompose_interference(&hs, &frames, &specs, None, fb.fft()).unwrap();
        assert!(d.iter().all(|x| x.mci_power > 0.0));
    }

    #[test]
    fn terms_sum_to_noiseless_pilot_rows() {
        let (fb, hs, frames, specs) = two_cell_setup(false, [1, 5], 9);
        let terms = interference_terms(&hs, &frames, &specs, fb.fft()).unwrap();
        let rx = receive(&hs, &frames, vec![Complex::new(0.0, 0.0); 64], 0.0, fb.fft()).unwrap();
        let y = rx.noiseless();
        for (t, s) in terms.iter().zip(&specs) {
            let want = gather(&y, s.pilots());
            let got = t.total();
            let err: f64 = got.iter().zip(&want).map(|(a, b)| (a - b).norm_sqr()).sum();
            assert!(err < 1e-18 * power(&want));
        }
    }

    #[test]
    fn zf_detection() {
        let s = spec(64, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let f = build_frame(&mut rng, &s);
        let h: Vec<Complex> = (0..64).map(|k| Complex::from_polar(0.5 + k as f64 / 64.0, k as f64)).collect();
        let y: Vec<Complex> = f.symbols().iter().zip(&h).map(|(x, h)| x * h).collect();
        let det = zf_detect(&y, &h, s.data());
        assert_eq!(det.erasures, 0);
        assert_eq!(bit_errors(f.payload_bits(), &det.bits), 0);

        let conj: Vec<Complex> = h.iter().map(|v| -*v).collect();
        let det = zf_detect(&y, &conj, s.data());
        assert_eq!(bit_errors(f.payload_bits(), &det.bits), det.bits.len());

        let mut holes = h.clone();
        holes[s.data()[0]] = Complex::new(0.0, 0.0);
        let det = zf_detect(&y, &holes, s.data());
        assert_eq!(det.erasures, 1);
        assert_eq!(&det.bits[..2], &[false, false]);
    }
}
