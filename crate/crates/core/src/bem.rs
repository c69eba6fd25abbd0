//! Complex-exponential basis expansion models.
//!
//! A BEM of order `Q` describes a time-varying tap over one `K`-sample
//! window with `Q + 1` basis vectors `b_q(k) = exp(i 2 pi (q - Q/2) k / (a K))`.
//! `a = 1` is the CE-BEM, `a > 1` the oversampled (generalized) GCE-BEM.
//!
//! In the frequency domain each basis vector becomes the circulant matrix
//! `D_q = F diag(b_q) F^H`, and its inverse `G_q = F diag(1 / b_q) F^H`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fft::Fft;
use crate::{CMatrix, Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BemKind {
    /// Complex exponentials on the DFT grid.
    Ce,
    /// Complex exponentials on an `a`-times oversampled grid.
    Gce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BemConfig {
    kind: BemKind,
    subcarriers: usize,
    order: usize,
    oversample: usize,
}

impl BemConfig {
    /// `oversample` is ignored (forced to 1) for [`BemKind::Ce`].
    pub fn new(kind: BemKind, subcarriers: usize, order: usize, oversample: usize) -> Result<Self> {
        if order % 2 != 0 {
            return Err(Error::InvalidParameter("BEM order must be even"));
        }
        if order + 1 > subcarriers {
            return Err(Error::InvalidParameter("BEM order must satisfy Q + 1 <= K"));
        }
        if oversample == 0 {
            return Err(Error::InvalidParameter("oversampling factor must be >= 1"));
        }
        let oversample = match kind {
            BemKind::Ce => 1,
            BemKind::Gce => oversample,
        };
        Ok(Self {
            kind,
            subcarriers,
            order,
            oversample,
        })
    }

    pub fn kind(&self) -> BemKind {
        self.kind
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    /// `Q`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `a`.
    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn num_basis(&self) -> usize {
        self.order + 1
    }

    /// Frequency offset of basis `q` in subcarrier spacings, `(q - Q/2) / a`.
    pub fn offset(&self, q: usize) -> f64 {
        (q as f64 - (self.order / 2) as f64) / self.oversample as f64
    }

    pub fn check_index(&self, q: usize) -> Result<()> {
        if q > self.order {
            return Err(Error::IndexOutOfRange {
                index: q,
                order: self.order,
            });
        }
        Ok(())
    }
}

/// BEM order `Q = 2 ceil(a f_max T_d)`, never below 2.
pub fn bem_order(max_doppler: f64, packet_duration: f64, oversample: usize) -> usize {
    let half = libm::ceil(oversample as f64 * max_doppler * packet_duration);
    let q = 2 * (half.max(0.0) as usize);
    q.max(2)
}

/// The `Q + 1` time-domain basis vectors.
#[derive(Debug, Clone)]
pub struct BasisSet {
    config: BemConfig,
    vectors: Vec<Vec<Complex>>,
}

impl BasisSet {
    pub fn config(&self) -> &BemConfig {
        &self.config
    }

    pub fn vector(&self, q: usize) -> &[Complex] {
        &self.vectors[q]
    }

    pub fn vectors(&self) -> &[Vec<Complex>] {
        &self.vectors
    }
}

pub fn build_basis(config: &BemConfig) -> BasisSet {
    let k_len = config.subcarriers as f64;
    let vectors = (0..config.num_basis())
        .map(|q| {
            let freq = config.offset(q);
            (0..config.subcarriers)
                .map(|k| {
                    let ph = 2.0 * PI * freq * k as f64 / k_len;
                    Complex::new(libm::cos(ph), libm::sin(ph))
                })
                .collect()
        })
        .collect();
    BasisSet {
        config: *config,
        vectors,
    }
}

/// The circulant operator `F diag(m) F^H` for a time-domain multiplier `m`.
///
/// Entry `(r, c)` equals `generator[(r - c) mod K]` with
/// `generator = DFT(m) / K`.
#[derive(Debug, Clone)]
pub struct Circulant {
    modulation: Vec<Complex>,
    generator: Vec<Complex>,
}

impl Circulant {
    pub fn from_modulation(modulation: Vec<Complex>, fft: &Fft) -> Self {
        let mut generator = modulation.clone();
        fft.forward(&mut generator);
        let scale = 1.0 / modulation.len() as f64;
        for g in generator.iter_mut() {
            *g *= scale;
        }
        Self {
            modulation,
            generator,
        }
    }

    pub fn len(&self) -> usize {
        self.modulation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modulation.is_empty()
    }

    /// Time-domain multiplier `m`.
    pub fn modulation(&self) -> &[Complex] {
        &self.modulation
    }

    /// First column of the matrix.
    pub fn generator(&self) -> &[Complex] {
        &self.generator
    }

    /// `F diag(m) F^H x` in O(K log K).
    pub fn apply(&self, x: &[Complex], fft: &Fft) -> Vec<Complex> {
        let mut buf = x.to_vec();
        fft.inverse(&mut buf);
        for (v, m) in buf.iter_mut().zip(&self.modulation) {
            *v *= m;
        }
        fft.forward(&mut buf);
        buf
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.len();
        CMatrix::from_fn(n, n, |r, c| self.generator[(r + n - c) % n])
    }
}

/// Frequency-domain basis matrices `D_q` and their inverses `G_q`.
#[derive(Debug, Clone)]
pub struct FreqBasis {
    config: BemConfig,
    fft: Fft,
    d_ops: Vec<Circulant>,
    g_ops: Vec<Circulant>,
    d_dense: Vec<CMatrix>,
    g_dense: Vec<CMatrix>,
}

/// Samples smaller than this make `diag(b_q)` non-invertible.
const MIN_BASIS_MAGNITUDE: f64 = 1e-12;

pub fn freq_basis(basis: &BasisSet) -> Result<FreqBasis> {
    let config = basis.config;
    let fft = Fft::new(config.subcarriers);
    let mut d_ops = Vec::with_capacity(config.num_basis());
    let mut g_ops = Vec::with_capacity(config.num_basis());
    for (q, b) in basis.vectors.iter().enumerate() {
        let mut inv = Vec::with_capacity(b.len());
        for (k, v) in b.iter().enumerate() {
            if v.norm() < MIN_BASIS_MAGNITUDE {
                return Err(Error::NonInvertibleBasis {
                    index: q,
                    sample: k,
                });
            }
            inv.push(v.inv());
        }
        d_ops.push(Circulant::from_modulation(b.clone(), &fft));
        g_ops.push(Circulant::from_modulation(inv, &fft));
    }
    let d_dense = d_ops.iter().map(Circulant::to_dense).collect();
    let g_dense = g_ops.iter().map(Circulant::to_dense).collect();
    Ok(FreqBasis {
        config,
        fft,
        d_ops,
        g_ops,
        d_dense,
        g_dense,
    })
}

impl FreqBasis {
    /// Convenience wrapper: basis vectors and frequency matrices in one go.
    pub fn new(config: &BemConfig) -> Result<Self> {
        freq_basis(&build_basis(config))
    }

    pub fn config(&self) -> &BemConfig {
        &self.config
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    /// Dense `D_q`.
    pub fn d(&self, q: usize) -> &CMatrix {
        &self.d_dense[q]
    }

    /// Dense `G_q`, with `G_q D_q = I`.
    pub fn g(&self, q: usize) -> &CMatrix {
        &self.g_dense[q]
    }

    pub fn d_operator(&self, q: usize) -> &Circulant {
        &self.d_ops[q]
    }

    pub fn g_operator(&self, q: usize) -> &Circulant {
        &self.g_ops[q]
    }

    pub fn apply_d(&self, q: usize, x: &[Complex]) -> Vec<Complex> {
        self.d_ops[q].apply(x, &self.fft)
    }

    pub fn apply_g(&self, q: usize, x: &[Complex]) -> Vec<Complex> {
        self.g_ops[q].apply(x, &self.fft)
    }
}

/// First `L` columns of `sqrt(K) F`: entry `(k, l) = exp(-i 2 pi k l / K)`.
#[derive(Debug, Clone)]
pub struct PartialFourier {
    matrix: CMatrix,
    fft: Fft,
}

pub fn partial_fourier(subcarriers: usize, delay_span: usize) -> Result<PartialFourier> {
    if delay_span > subcarriers {
        return Err(Error::InvalidParameter("delay span L must not exceed K"));
    }
    if delay_span == 0 {
        return Err(Error::InvalidParameter("delay span L must be positive"));
    }
    let k_len = subcarriers as f64;
    let matrix = CMatrix::from_fn(subcarriers, delay_span, |k, l| {
        let ph = -2.0 * PI * ((k * l) % subcarriers) as f64 / k_len;
        Complex::new(libm::cos(ph), libm::sin(ph))
    });
    Ok(PartialFourier {
        matrix,
        fft: Fft::new(subcarriers),
    })
}

impl PartialFourier {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn subcarriers(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn delay_span(&self) -> usize {
        self.matrix.ncols()
    }

    /// Frequency response `F_L c` of delay-domain coefficients `c` (length L).
    pub fn response(&self, coefficients: &[Complex]) -> Vec<Complex> {
        assert_eq!(coefficients.len(), self.delay_span());
        let mut buf = vec![Complex::new(0.0, 0.0); self.subcarriers()];
        buf[..coefficients.len()].copy_from_slice(coefficients);
        self.fft.forward(&mut buf);
        buf
    }

    /// Row subset `F_L(rows, :)`.
    pub fn rows(&self, rows: &[usize]) -> CMatrix {
        CMatrix::from_fn(rows.len(), self.delay_span(), |i, l| self.matrix[(rows[i], l)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `|sum_k exp(i 2 pi x k / K)| / K` for a non-integer offset `x`.
    fn dirichlet(x: f64, k_len: usize) -> f64 {
        let n = k_len as f64;
        (libm::sin(PI * x) / libm::sin(PI * x / n)).abs() / n
    }

    #[test]
    fn order_from_doppler() {
        assert_eq!(bem_order(1088.0, 1.2e-3, 1), 4);
        assert_eq!(bem_order(1088.0, 1.2e-3, 2), 6);
        assert_eq!(bem_order(0.0, 1.2e-3, 1), 2);
        assert_eq!(bem_order(1e-9, 1.2e-3, 1), 2);
    }

    #[test]
    fn config_validation() {
        assert!(BemConfig::new(BemKind::Ce, 8, 3, 1).is_err());
        assert!(BemConfig::new(BemKind::Ce, 4, 4, 1).is_err());
        assert!(BemConfig::new(BemKind::Gce, 8, 2, 0).is_err());
        assert_eq!(BemConfig::new(BemKind::Ce, 8, 2, 3).unwrap().oversample(), 1);
    }

    #[test]
    fn basis_samples() {
        let ce = build_basis(&BemConfig::new(BemKind::Ce, 8, 2, 1).unwrap());
        assert!(ce.vector(1).iter().all(|v| (v - Complex::new(1.0, 0.0)).norm() < 1e-15));
        let want = Complex::from_polar(1.0, 2.0 * PI / 8.0);
        assert!((ce.vector(2)[1] - want).norm() < 1e-15);

        let gce = build_basis(&BemConfig::new(BemKind::Gce, 8, 2, 2).unwrap());
        let want = Complex::from_polar(1.0, 2.0 * PI / 16.0);
        assert!((gce.vector(2)[1] - want).norm() < 1e-15);
        for v in gce.vectors().iter().flatten() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_matrices_match_definition() {
        // D_q = F diag(b_q) F^H built from explicit unitary DFT matrices.
        let k_len = 16;
        let cfg = BemConfig::new(BemKind::Gce, k_len, 4, 2).unwrap();
        let basis = build_basis(&cfg);
        let fb = freq_basis(&basis).unwrap();
        let n = k_len as f64;
        let f = CMatrix::from_fn(k_len, k_len, |r, c| {
            Complex::from_polar(1.0 / libm::sqrt(n), -2.0 * PI * (r * c) as f64 / n)
        });
        for q in 0..=4 {
            let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(basis.vector(q).to_vec()));
            let want = &f * diag * f.adjoint();
            assert!(max_abs_diff(fb.d(q), &want) < 1e-12, "q = {q}");
        }
    }

    #[test]
    fn inverse_and_unitarity() {
        for (kind, a) in [(BemKind::Ce, 1), (BemKind::Gce, 2)] {
            let cfg = BemConfig::new(kind, 64, 6, a).unwrap();
            let fb = FreqBasis::new(&cfg).unwrap();
            let eye = CMatrix::identity(64, 64);
            for q in 0..=6 {
                assert!(max_abs_diff(&(fb.g(q) * fb.d(q)), &eye) < 1e-9);
                assert!(max_abs_diff(&(fb.d(q).adjoint() * fb.d(q)), &eye) < 1e-9);
                assert!(max_abs_diff(fb.g(q), &fb.d(q).adjoint()) < 1e-12);
            }
        }
    }

    #[test]
    fn ce_matrices_are_cyclic_shifts() {
        let k_len = 32;
        let fb = FreqBasis::new(&BemConfig::new(BemKind::Ce, k_len, 4, 1).unwrap()).unwrap();
        for q in 0..=4 {
            let shift = q as isize - 2;
            let d = fb.d(q);
            for r in 0..k_len {
                let target = (r as isize - shift).rem_euclid(k_len as isize) as usize;
                for c in 0..k_len {
                    let v = d[(r, c)].norm();
                    if c == target {
                        assert!((v - 1.0).abs() < 1e-9);
                    } else {
                        assert!(v < 1e-9);
                    }
                }
            }
        }
        let eye = CMatrix::identity(k_len, k_len);
        assert!(max_abs_diff(fb.d(2), &eye) < 1e-12);
    }

    #[test]
    fn gce_energy_profile_follows_dirichlet_kernel() {
        let k_len = 512;
        let cfg = BemConfig::new(BemKind::Gce, k_len, 6, 2).unwrap();
        let fb = FreqBasis::new(&cfg).unwrap();
        // q = 4: offset 0.5 subcarrier, so D_q is a full matrix.
        let q = 4;
        let offset = cfg.offset(q);
        let gen = fb.d_operator(q).generator();
        let mut tail = 0.0;
        let mut band2 = 0.0;
        for (j, g) in gen.iter().enumerate() {
            let want = dirichlet(offset - j as f64, k_len);
            assert!((g.norm() - want).abs() < 1e-12);
            let jj = j as f64;
            let dist = (jj - offset).rem_euclid(k_len as f64);
            let dist = dist.min(k_len as f64 - dist);
            if dist > 8.0 {
                tail += g.norm_sqr();
            }
            if dist <= 2.5 {
                band2 += g.norm_sqr();
            }
        }
        // Half-subcarrier offsets leave ~2.5% of each row beyond radius 8 and
        // ~93% within the default band radius 2.
        assert!((tail - 0.025277).abs() < 1e-5, "{tail}");
        assert!((band2 - 0.933063).abs() < 1e-5, "{band2}");

        // Even shifts of the oversampled grid land on integer offsets.
        let gen = fb.d_operator(5).generator();
        assert!((gen[1].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn circulant_apply_matches_dense() {
        let cfg = BemConfig::new(BemKind::Gce, 32, 4, 2).unwrap();
        let fb = FreqBasis::new(&cfg).unwrap();
        let x: Vec<Complex> = (0..32)
            .map(|i| Complex::new(libm::cos(i as f64 * 0.7), i as f64 * 0.01))
            .collect();
        let xv = nalgebra::DVector::from_vec(x.clone());
        for q in 0..=4 {
            let fast = fb.apply_d(q, &x);
            let slow = fb.d(q) * &xv;
            for (a, b) in fast.iter().zip(slow.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
            let back = fb.apply_g(q, &fast);
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_fourier_properties() {
        assert!(partial_fourier(8, 9).is_err());
        let pf = partial_fourier(512, 64).unwrap();
        let m = pf.matrix();
        assert!(m.column(0).iter().all(|v| (v - Complex::new(1.0, 0.0)).norm() < 1e-15));
        let want = Complex::from_polar(1.0, -2.0 * PI / 512.0);
        assert!((m[(1, 1)] - want).norm() < 1e-15);
        let gram = m.adjoint() * m;
        let scaled = CMatrix::identity(64, 64) * Complex::new(512.0, 0.0);
        assert!(max_abs_diff(&gram, &scaled) < 1e-9);

        let c: Vec<Complex> = (0..64).map(|l| Complex::new(l as f64, -(l as f64) * 0.5)).collect();
        let fast = pf.response(&c);
        let slow = m * nalgebra::DVector::from_vec(c);
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}
