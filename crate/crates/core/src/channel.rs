//! Sparse single-Doppler channels and their frequency-domain realizations.
//!
//! A link carries `S` random taps out of a delay span `L`, all sharing one
//! Doppler shift (line-of-sight assumption). In [`ChannelMode::StrictBem`] the
//! time variation is the dominant basis vector `b_{q*}`, so the channel is
//! exactly `H = D_{q*} diag(F_L c*)`. In [`ChannelMode::ContinuousDoppler`]
//! the true phase ramp `exp(i 2 pi f T_d k / K)` is used instead and the
//! quantization to the BEM grid becomes a modeling error.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bem::{BasisSet, Circulant, FreqBasis, PartialFourier};
use crate::fft::Fft;
use crate::{CMatrix, Complex, Error, Result};

/// Dominant BEM coefficients `c*` of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseBemChannel {
    support: Vec<usize>,
    gains: Vec<Complex>,
    dominant_index: usize,
    delay_span: usize,
    doppler_hz: f64,
}

impl SparseBemChannel {
    pub fn new(
        support: Vec<usize>,
        gains: Vec<Complex>,
        dominant_index: usize,
        delay_span: usize,
        doppler_hz: f64,
    ) -> Result<Self> {
        if support.len() != gains.len() {
            return Err(Error::DimensionMismatch {
                what: "channel gains",
                expected: support.len(),
                found: gains.len(),
            });
        }
        if support.iter().any(|&l| l >= delay_span) {
            return Err(Error::InvalidParameter("tap delay outside the delay span"));
        }
        Ok(Self {
            support,
            gains,
            dominant_index,
            delay_span,
            doppler_hz,
        })
    }

    pub fn zero(delay_span: usize, dominant_index: usize, doppler_hz: f64) -> Self {
        Self {
            support: Vec::new(),
            gains: Vec::new(),
            dominant_index,
            delay_span,
            doppler_hz,
        }
    }

    /// Sorted tap delays.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn gains(&self) -> &[Complex] {
        &self.gains
    }

    pub fn dominant_index(&self) -> usize {
        self.dominant_index
    }

    pub fn delay_span(&self) -> usize {
        self.delay_span
    }

    pub fn doppler_hz(&self) -> f64 {
        self.doppler_hz
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Dense coefficient vector `c*` of length `L`.
    pub fn coefficients(&self) -> Vec<Complex> {
        let mut c = vec![Complex::new(0.0, 0.0); self.delay_span];
        for (&l, &g) in self.support.iter().zip(&self.gains) {
            c[l] = g;
        }
        c
    }

    pub fn total_power(&self) -> f64 {
        self.gains.iter().map(|g| g.norm_sqr()).sum()
    }
}

/// Average power per tap over the random support.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PowerDelayProfile {
    #[default]
    Uniform,
    /// Tap at delay `l` has relative power `exp(-l / decay)`.
    Exponential { decay: f64 },
}

impl PowerDelayProfile {
    fn weight(&self, delay: usize) -> f64 {
        match *self {
            PowerDelayProfile::Uniform => 1.0,
            PowerDelayProfile::Exponential { decay } => libm::exp(-(delay as f64) / decay),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ChannelMode {
    #[default]
    StrictBem,
    ContinuousDoppler,
}

/// One unit-variance circular complex normal sample.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Draws `S` distinct delays from `[0, L)` and i.i.d. complex normal gains,
/// normalized to unit total power, with a uniform delay profile.
pub fn sample_channel<R: Rng + ?Sized>(
    rng: &mut R,
    delay_span: usize,
    sparsity: usize,
    dominant_index: usize,
    doppler_hz: f64,
) -> Result<SparseBemChannel> {
    sample_channel_with_profile(
        rng,
        delay_span,
        sparsity,
        dominant_index,
        doppler_hz,
        PowerDelayProfile::Uniform,
    )
}

pub fn sample_channel_with_profile<R: Rng + ?Sized>(
    rng: &mut R,
    delay_span: usize,
    sparsity: usize,
    dominant_index: usize,
    doppler_hz: f64,
    profile: PowerDelayProfile,
) -> Result<SparseBemChannel> {
    if sparsity > delay_span {
        return Err(Error::InvalidParameter("sparsity S must not exceed L"));
    }
    if sparsity == 0 {
        return Ok(SparseBemChannel::zero(delay_span, dominant_index, doppler_hz));
    }
    let mut support = rand::seq::index::sample(rng, delay_span, sparsity).into_vec();
    support.sort_unstable();
    let mut gains: Vec<Complex> = support
        .iter()
        .map(|&l| complex_normal(rng) * libm::sqrt(profile.weight(l)))
        .collect();
    let power: f64 = gains.iter().map(|g| g.norm_sqr()).sum();
    if power > 0.0 {
        let scale = 1.0 / libm::sqrt(power);
        for g in gains.iter_mut() {
            *g *= scale;
        }
    }
    SparseBemChannel::new(support, gains, dominant_index, delay_span, doppler_hz)
}

/// Time-domain Doppler phase ramp `exp(i 2 pi f T_d k / K)`.
pub fn doppler_ramp(doppler_hz: f64, packet_duration: f64, subcarriers: usize) -> Vec<Complex> {
    let cycles = doppler_hz * packet_duration;
    (0..subcarriers)
        .map(|k| Complex::from_polar(1.0, 2.0 * PI * cycles * k as f64 / subcarriers as f64))
        .collect()
}

/// `K x L` tap array `h(k, l)`.
pub fn time_taps(
    ch: &SparseBemChannel,
    basis: &BasisSet,
    mode: ChannelMode,
    packet_duration: f64,
) -> Result<CMatrix> {
    basis.config().check_index(ch.dominant_index)?;
    let k_len = basis.config().subcarriers();
    let variation = match mode {
        ChannelMode::StrictBem => basis.vector(ch.dominant_index).to_vec(),
        ChannelMode::ContinuousDoppler => doppler_ramp(ch.doppler_hz, packet_duration, k_len),
    };
    let c = ch.coefficients();
    Ok(CMatrix::from_fn(k_len, ch.delay_span, |k, l| variation[k] * c[l]))
}

/// Dense frequency-domain channel with its ICI-free and ICI parts.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqChannel {
    matrix: CMatrix,
    diagonal: Vec<Complex>,
    ici: CMatrix,
}

impl FreqChannel {
    pub fn from_matrix(matrix: CMatrix) -> Self {
        assert!(matrix.is_square(), "channel matrix must be square");
        let diagonal: Vec<Complex> = matrix.diagonal().iter().copied().collect();
        let mut ici = matrix.clone();
        ici.fill_diagonal(Complex::new(0.0, 0.0));
        Self {
            matrix,
            diagonal,
            ici,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Main diagonal `H(k, k)`.
    pub fn diagonal(&self) -> &[Complex] {
        &self.diagonal
    }

    /// `H - diag(H)`.
    pub fn ici(&self) -> &CMatrix {
        &self.ici
    }

    pub fn diagonal_matrix(&self) -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal))
    }

    pub fn subcarriers(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `H = F H~ F^H` with `H~(k, d) = h(k, (k - d) mod K)`, evaluated as
/// `H(m, n) = (1/K) sum_l exp(-i 2 pi n l / K) DFT_k[h(., l)](m - n)`.
pub fn freq_channel(taps: &CMatrix) -> FreqChannel {
    let k_len = taps.nrows();
    let fft = Fft::new(k_len);
    let spectra: Vec<Vec<Complex>> = taps
        .column_iter()
        .map(|col| {
            let mut buf: Vec<Complex> = col.iter().copied().collect();
            fft.forward(&mut buf);
            buf
        })
        .collect();
    let n = k_len as f64;
    let mut matrix = CMatrix::zeros(k_len, k_len);
    for (l, spec) in spectra.iter().enumerate() {
        for col in 0..k_len {
            let ph = -2.0 * PI * ((col * l) % k_len) as f64 / n;
            let w = Complex::from_polar(1.0 / n, ph);
            for row in 0..k_len {
                matrix[(row, col)] += w * spec[(row + k_len - col) % k_len];
            }
        }
    }
    FreqChannel::from_matrix(matrix)
}

/// Split into `(diag(H), H - diag(H))`.
pub fn split_ici(h: &FreqChannel) -> (CMatrix, CMatrix) {
    (h.diagonal_matrix(), h.ici.clone())
}

/// A channel of the form `H = F diag(m) F^H diag(r)`: a time-domain
/// modulation `m` applied after the frequency response `r`.
///
/// Every channel in this crate has this shape, so links are simulated with
/// FFTs instead of dense `K x K` products.
#[derive(Debug, Clone)]
pub struct ModulatedChannel {
    modulation: Circulant,
    response: Vec<Complex>,
}

impl ModulatedChannel {
    pub fn new(modulation: Circulant, response: Vec<Complex>) -> Result<Self> {
        if modulation.len() != response.len() {
            return Err(Error::DimensionMismatch {
                what: "modulated channel response",
                expected: modulation.len(),
                found: response.len(),
            });
        }
        Ok(Self {
            modulation,
            response,
        })
    }

    /// `H = 0`, the out-of-coverage channel.
    pub fn zero(subcarriers: usize, fft: &Fft) -> Self {
        let modulation = Circulant::from_modulation(vec![Complex::new(1.0, 0.0); subcarriers], fft);
        Self {
            modulation,
            response: vec![Complex::new(0.0, 0.0); subcarriers],
        }
    }

    pub fn modulation(&self) -> &Circulant {
        &self.modulation
    }

    /// `F_L c*`, the diagonal of the ICI-free equivalent.
    pub fn response(&self) -> &[Complex] {
        &self.response
    }

    pub fn subcarriers(&self) -> usize {
        self.response.len()
    }

    pub fn apply(&self, x: &[Complex], fft: &Fft) -> Vec<Complex> {
        let weighted: Vec<Complex> = x.iter().zip(&self.response).map(|(a, b)| a * b).collect();
        self.modulation.apply(&weighted, fft)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = self.modulation.to_dense();
        for (mut col, r) in m.column_iter_mut().zip(&self.response) {
            col *= *r;
        }
        m
    }

    pub fn to_freq_channel(&self) -> FreqChannel {
        FreqChannel::from_matrix(self.to_dense())
    }

    /// `||H||_F^2`.
    pub fn frobenius_sq(&self) -> f64 {
        let gen: f64 = self.modulation.generator().iter().map(|g| g.norm_sqr()).sum();
        gen * self.response.iter().map(|r| r.norm_sqr()).sum::<f64>()
    }

    /// `||self - other||_F^2` in O(K).
    ///
    /// Column `n` of either matrix is the same cyclic shift of its generator
    /// scaled by the response, so the cross term reduces to one inner product
    /// of the two generators.
    pub fn squared_distance(&self, other: &ModulatedChannel) -> f64 {
        assert_eq!(self.subcarriers(), other.subcarriers());
        let g1 = self.modulation.generator();
        let g2 = other.modulation.generator();
        let n1: f64 = g1.iter().map(|g| g.norm_sqr()).sum();
        let n2: f64 = g2.iter().map(|g| g.norm_sqr()).sum();
        let cross: Complex = g1.iter().zip(g2).map(|(a, b)| a.conj() * b).sum();
        let mut p1 = 0.0;
        let mut p2 = 0.0;
        let mut mixed = Complex::new(0.0, 0.0);
        for (a, b) in self.response.iter().zip(&other.response) {
            p1 += a.norm_sqr();
            p2 += b.norm_sqr();
            mixed += a.conj() * b;
        }
        (n1 * p1 + n2 * p2 - 2.0 * (cross * mixed).re).max(0.0)
    }
}

/// Realizes a link in the requested mode without forming dense matrices.
pub fn realize(
    ch: &SparseBemChannel,
    basis: &FreqBasis,
    mode: ChannelMode,
    packet_duration: f64,
    partial: &PartialFourier,
) -> Result<ModulatedChannel> {
    basis.config().check_index(ch.dominant_index)?;
    if partial.subcarriers() != basis.config().subcarriers() {
        return Err(Error::DimensionMismatch {
            what: "partial Fourier rows",
            expected: basis.config().subcarriers(),
            found: partial.subcarriers(),
        });
    }
    if partial.delay_span() != ch.delay_span {
        return Err(Error::DimensionMismatch {
            what: "partial Fourier columns",
            expected: ch.delay_span,
            found: partial.delay_span(),
        });
    }
    let response = partial.response(&ch.coefficients());
    let modulation = match mode {
        ChannelMode::StrictBem => basis.d_operator(ch.dominant_index).clone(),
        ChannelMode::ContinuousDoppler => Circulant::from_modulation(
            doppler_ramp(ch.doppler_hz, packet_duration, basis.config().subcarriers()),
            basis.fft(),
        ),
    };
    ModulatedChannel::new(modulation, response)
}
