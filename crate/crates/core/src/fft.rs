//! Discrete Fourier transforms.
//!
//! Conventions used across the crate:
//!
//! * `forward`: `X(m) = sum_n x(n) exp(-i 2 pi m n / K)`, unnormalized.
//! * `inverse`: `x(n) = (1/K) sum_m X(m) exp(+i 2 pi m n / K)`.
//!
//! The unitary DFT matrix is therefore `F = forward / sqrt(K)` and
//! `F^H = sqrt(K) * inverse`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::Complex;

/// Precomputed transform of a fixed length.
///
/// Power-of-two lengths use an iterative radix-2 transform; other lengths
/// fall back to a direct O(K^2) evaluation over a cached twiddle table.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    // exp(-i 2 pi j / len) for j in 0..len
    twiddles: Vec<Complex>,
    radix2: bool,
}

impl Fft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let twiddles = (0..len)
            .map(|j| {
                let phase = -2.0 * PI * j as f64 / len as f64;
                Complex::new(libm::cos(phase), libm::sin(phase))
            })
            .collect();
        Self {
            len,
            twiddles,
            radix2: len.is_power_of_two(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place unnormalized forward transform.
    pub fn forward(&self, buf: &mut [Complex]) {
        assert_eq!(buf.len(), self.len);
        if self.radix2 {
            self.radix2_in_place(buf, false);
        } else {
            self.direct(buf, false);
        }
    }

    /// In-place inverse transform, scaled by `1/K`.
    pub fn inverse(&self, buf: &mut [Complex]) {
        assert_eq!(buf.len(), self.len);
        if self.radix2 {
            self.radix2_in_place(buf, true);
        } else {
            self.direct(buf, true);
        }
        let scale = 1.0 / self.len as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn twiddle(&self, index: usize, inverse: bool) -> Complex {
        let w = self.twiddles[index % self.len];
        if inverse {
            w.conj()
        } else {
            w
        }
    }

    fn direct(&self, buf: &mut [Complex], inverse: bool) {
        let n = self.len;
        let input: Vec<Complex> = buf.to_vec();
        for (m, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (k, &x) in input.iter().enumerate() {
                acc += x * self.twiddle((m * k) % n, inverse);
            }
            *out = acc;
        }
    }

    fn radix2_in_place(&self, buf: &mut [Complex], inverse: bool) {
        let n = self.len;
        if n == 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for start in (0..n).step_by(size) {
                for k in 0..half {
                    let w = self.twiddle(k * stride, inverse);
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            size *= 2;
        }
    }
}
