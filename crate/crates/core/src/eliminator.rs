//! Position-based MCI selection and ICI inversion.
//!
//! For a link with dominant index `q*`, the selector keeps the part of the
//! received vector that belongs to cell `t` and `G_{q*}` then undoes the
//! Doppler image, leaving `diag(F_L c*) x_t` plus filtered noise.
//!
//! Two selection modes exist. [`EliminationMode::Oracle`] takes the cell's
//! own received component from the simulator, which is the exact model-level
//! operation. [`EliminationMode::Physical`] only sees the composite vector and
//! keeps the rows around the pilot images `w_t + (q* - Q/2)/a`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bem::{BemKind, FreqBasis};
use crate::ofdm::InterferenceDecomposition;
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EliminationMode {
    Oracle,
    /// Keep rows within `band_radius` (plus half a subcarrier for fractional
    /// offsets) of each shifted pilot.
    Physical { band_radius: usize },
}

impl EliminationMode {
    /// `rho = 0` for CE, `rho = 2` for GCE.
    pub fn default_physical(kind: BemKind) -> Self {
        let band_radius = match kind {
            BemKind::Ce => 0,
            BemKind::Gce => 2,
        };
        EliminationMode::Physical { band_radius }
    }
}

/// The `G_q` set, selected per link by `q*`.
#[derive(Debug, Clone, Copy)]
pub struct EliminatorBank<'a> {
    basis: &'a FreqBasis,
}

impl<'a> EliminatorBank<'a> {
    pub fn new(basis: &'a FreqBasis) -> Self {
        Self { basis }
    }

    pub fn basis(&self) -> &'a FreqBasis {
        self.basis
    }

    pub fn order(&self) -> usize {
        self.basis.config().order()
    }

    pub fn subcarriers(&self) -> usize {
        self.basis.config().subcarriers()
    }

    /// Row mask of the physical selector for pilots `pilots` and index `q`.
    pub fn band_mask(&self, pilots: &[usize], q: usize, band_radius: usize) -> Result<Vec<bool>> {
        let cfg = self.basis.config();
        cfg.check_index(q)?;
        let k_len = cfg.subcarriers();
        let offset = cfg.offset(q);
        let reach = band_radius as f64 + if offset - libm::trunc(offset) == 0.0 { 0.0 } else { 0.5 };
        let mut mask = vec![false; k_len];
        for &p in pilots {
            let centre = p as f64 + offset;
            let lo = libm::ceil(centre - reach - 1e-9) as i64;
            let hi = libm::floor(centre + reach + 1e-9) as i64;
            for r in lo..=hi {
                mask[r.rem_euclid(k_len as i64) as usize] = true;
            }
        }
        Ok(mask)
    }
}

/// What the selector may look at for one `(cell, antenna)` branch.
#[derive(Debug, Clone, Copy)]
pub struct BranchInputs<'a> {
    /// Composite received vector `y_r`.
    pub composite: &'a [Complex],
    /// Ground-truth component `H_{t,r} x_t` (oracle mode only).
    pub component: Option<&'a [Complex]>,
    /// Receiver noise, duplicated into every branch (oracle mode only).
    pub noise: Option<&'a [Complex]>,
    /// Pilot subcarriers of cell `t` (physical mode only).
    pub pilots: &'a [usize],
}

/// The selector output `y_{t,r}`.
pub fn select_component(
    inputs: &BranchInputs<'_>,
    q_star: usize,
    mode: EliminationMode,
    bank: &EliminatorBank<'_>,
) -> Result<Vec<Complex>> {
    bank.basis.config().check_index(q_star)?;
    let k_len = bank.subcarriers();
    match mode {
        EliminationMode::Oracle => {
            let comp = inputs
                .component
                .ok_or(Error::InvalidParameter("oracle selection needs the cell component"))?;
            if comp.len() != k_len {
                return Err(Error::DimensionMismatch {
                    what: "cell component",
                    expected: k_len,
                    found: comp.len(),
                });
            }
            let mut out = comp.to_vec();
            if let Some(n) = inputs.noise {
                for (o, v) in out.iter_mut().zip(n) {
                    *o += v;
                }
            }
            Ok(out)
        }
        EliminationMode::Physical { band_radius } => {
            if inputs.composite.len() != k_len {
                return Err(Error::DimensionMismatch {
                    what: "received vector",
                    expected: k_len,
                    found: inputs.composite.len(),
                });
            }
            let mask = bank.band_mask(inputs.pilots, q_star, band_radius)?;
            Ok(apply_mask(inputs.composite, &mask))
        }
    }
}

fn apply_mask(v: &[Complex], mask: &[bool]) -> Vec<Complex> {
    v.iter()
        .zip(mask)
        .map(|(&x, &keep)| if keep { x } else { Complex::new(0.0, 0.0) })
        .collect()
}

/// `G_{q*} y`.
pub fn ici_eliminate(y: &[Complex], q_star: usize, bank: &EliminatorBank<'_>) -> Result<Vec<Complex>> {
    bank.basis.config().check_index(q_star)?;
    if y.len() != bank.subcarriers() {
        return Err(Error::DimensionMismatch {
            what: "received vector",
            expected: bank.subcarriers(),
            found: y.len(),
        });
    }
    Ok(bank.basis.apply_g(q_star, y))
}

/// Ground-truth pieces of one branch, each a full `K`-vector.
#[derive(Debug, Clone, Copy)]
pub struct BranchTruth<'a> {
    /// Own cell, pilots only.
    pub own_pilots: &'a [Complex],
    /// Own cell, data only.
    pub own_data: &'a [Complex],
    /// Sum over the other cells.
    pub others: &'a [Complex],
    pub noise: &'a [Complex],
    /// `diag(F_L c*) x_t`, the ICI-free target.
    pub ideal: &'a [Complex],
    pub pilots: &'a [usize],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// Powers on the pilot rows of the raw received vector.
    pub before: InterferenceDecomposition,
    /// Powers on the pilot rows after selection and `G`.
    ///
    /// `desired_power` is the part of the own-cell output coherent with the
    /// ICI-free target and `self_ici_power` the rest of the own-cell output.
    pub after: InterferenceDecomposition,
}

fn rows_power(v: &[Complex], rows: &[usize]) -> f64 {
    rows.iter().map(|&r| v[r].norm_sqr()).sum()
}

/// Interference budget before and after elimination with selection index
/// `q_star` (which may differ from the true index to model position error).
pub fn residual_report(
    truth: &BranchTruth<'_>,
    q_star: usize,
    mode: EliminationMode,
    bank: &EliminatorBank<'_>,
) -> Result<ResidualReport> {
    let rows = truth.pilots;
    let before = InterferenceDecomposition {
        desired_power: rows_power(truth.own_pilots, rows),
        self_ici_power: rows_power(truth.own_data, rows),
        mci_power: rows_power(truth.others, rows),
        noise_power: rows_power(truth.noise, rows),
    };

    let own: Vec<Complex> = truth
        .own_pilots
        .iter()
        .zip(truth.own_data)
        .map(|(a, b)| a + b)
        .collect();
    let pass = |v: &[Complex], is_own: bool| -> Result<Vec<Complex>> {
        let selected = match mode {
            EliminationMode::Oracle => {
                if is_own {
                    v.to_vec()
                } else {
                    vec![Complex::new(0.0, 0.0); v.len()]
                }
            }
            EliminationMode::Physical { band_radius } => {
                apply_mask(v, &bank.band_mask(rows, q_star, band_radius)?)
            }
        };
        ici_eliminate(&selected, q_star, bank)
    };
    let own_out = pass(&own, true)?;
    let others_out = pass(truth.others, false)?;
    let noise_out = pass(truth.noise, true)?;

    let mut cross = Complex::new(0.0, 0.0);
    let mut target = 0.0;
    for &r in rows {
        cross += truth.ideal[r].conj() * own_out[r];
        target += truth.ideal[r].norm_sqr();
    }
    // own_out = beta * ideal + residual on the pilot rows
    let beta = if target > 0.0 { cross / target } else { Complex::new(0.0, 0.0) };
    let residual: f64 = rows
        .iter()
        .map(|&r| (own_out[r] - truth.ideal[r] * beta).norm_sqr())
        .sum();
    let after = InterferenceDecomposition {
        desired_power: beta.norm_sqr() * target,
        self_ici_power: residual,
        mci_power: rows_power(&others_out, rows),
        noise_power: rows_power(&noise_out, rows),
    };
    Ok(ResidualReport { before, after })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::{partial_fourier, BemConfig, PartialFourier};
    use crate::channel::{realize, sample_channel, ChannelMode, ModulatedChannel};
    use crate::ofdm::{awgn, build_frame, decompose_interference, FrameSpec, TxFrame};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const K: usize = 128;

    fn basis(kind: BemKind) -> FreqBasis {
        let (q, a) = match kind {
            BemKind::Ce => (4, 1),
            BemKind::Gce => (6, 2),
        };
        FreqBasis::new(&BemConfig::new(kind, K, q, a).unwrap()).unwrap()
    }

    fn pilots() -> Vec<usize> {
        (0..16).map(|i| i * 8 + 3).collect()
    }

    struct Cell {
        h: ModulatedChannel,
        frame: TxFrame,
        spec: FrameSpec,
    }

    fn cell(fb: &FreqBasis, pf: &PartialFourier, q: usize, seed: u64, with_data: bool) -> Cell {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = sample_channel(&mut rng, 16, 4, q, 0.0).unwrap();
        let h = realize(&ch, fb, ChannelMode::StrictBem, 1.2e-3, pf).unwrap();
        let spec = FrameSpec::new(K, pilots(), 1.0).unwrap();
        let mut frame = build_frame(&mut rng, &spec);
        if !with_data {
            frame = frame.without_data(&spec);
        }
        Cell { h, frame, spec }
    }

    fn truth_vectors(fb: &FreqBasis, me: &Cell, other: Option<&Cell>) -> [Vec<Complex>; 4] {
        let own_p = me.h.apply(&me.frame.restricted(me.spec.pilots()), fb.fft());
        let own_d = me.h.apply(&me.frame.restricted(me.spec.data()), fb.fft());
        let others = match other {
            Some(o) => o.h.apply(o.frame.symbols(), fb.fft()),
            None => vec![Complex::new(0.0, 0.0); K],
        };
        let ideal: Vec<Complex> = me
            .frame
            .symbols()
            .iter()
            .zip(me.h.response())
            .map(|(x, d)| x * d)
            .collect();
        [own_p, own_d, others, ideal]
    }

    #[test]
    fn oracle_single_cell_returns_received_vector() {
        let fb = basis(BemKind::Gce);
        let pf = partial_fourier(K, 16).unwrap();
        let c = cell(&fb, &pf, 1, 1, true);
        let bank = EliminatorBank::new(&fb);
        let noise = awgn(&mut ChaCha8Rng::seed_from_u64(2), K, 0.1);
        let comp = c.h.apply(c.frame.symbols(), fb.fft());
        let y: Vec<Complex> = comp.iter().zip(&noise).map(|(a, b)| a + b).collect();
        let inputs = BranchInputs {
            composite: &y,
            component: Some(&comp),
            noise: Some(&noise),
            pilots: c.spec.pilots(),
        };
        let sel = select_component(&inputs, 1, EliminationMode::Oracle, &bank).unwrap();
        assert_eq!(sel, y);
        assert!(select_component(&inputs, 7, EliminationMode::Oracle, &bank).is_err());
        let missing = BranchInputs { component: None, ..inputs };
        assert!(select_component(&missing, 1, EliminationMode::Oracle, &bank).is_err());
    }

    #[test]
    fn oracle_strict_inversion_is_exact() {
        for kind in [BemKind::Ce, BemKind::Gce] {
            let fb = basis(kind);
            let pf = partial_fourier(K, 16).unwrap();
            let bank = EliminatorBank::new(&fb);
            let q = fb.config().order();
            let c = cell(&fb, &pf, q, 3, true);
            let comp = c.h.apply(c.frame.symbols(), fb.fft());
            let inputs = BranchInputs {
                composite: &comp,
                component: Some(&comp),
                noise: None,
                pilots: c.spec.pilots(),
            };
            let sel = select_component(&inputs, q, EliminationMode::Oracle, &bank).unwrap();
            let out = ici_eliminate(&sel, q, &bank).unwrap();
            for k in 0..K {
                let want = c.h.response()[k] * c.frame.symbols()[k];
                assert!((out[k] - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_frequency_index_is_identity() {
        let fb = basis(BemKind::Gce);
        let bank = EliminatorBank::new(&fb);
        let y: Vec<Complex> = (0..K).map(|k| Complex::new(k as f64, -1.0)).collect();
        let out = ici_eliminate(&y, 3, &bank).unwrap();
        for (a, b) in out.iter().zip(&y) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn ce_permutation_is_undone() {
        let fb = basis(BemKind::Ce);
        let pf = partial_fourier(K, 16).unwrap();
        let bank = EliminatorBank::new(&fb);
        let c = cell(&fb, &pf, 0, 4, false);
        let y = c.h.apply(c.frame.symbols(), fb.fft());
        let on_pilots = |v: &[Complex]| rows_power(v, c.spec.pilots()) / v.iter().map(|x| x.norm_sqr()).sum::<f64>();
        // shifted by -2 before, back on the pilots after
        assert!(on_pilots(&y) < 1e-18);
        let out = ici_eliminate(&y, 0, &bank).unwrap();
        assert!((on_pilots(&out) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn band_mask_geometry() {
        let fb = basis(BemKind::Ce);
        let bank = EliminatorBank::new(&fb);
        let m = bank.band_mask(&[0, 10], 0, 0).unwrap();
        let kept: Vec<usize> = (0..K).filter(|&k| m[k]).collect();
        assert_eq!(kept, alloc::vec![8, K - 2]);
        let fb = basis(BemKind::Gce);
        let bank = EliminatorBank::new(&fb);
        // offset -1.5, radius 1 reaches 2 subcarriers each side of the image
        let m = bank.band_mask(&[10], 0, 1).unwrap();
        let kept: Vec<usize> = (0..K).filter(|&k| m[k]).collect();
        assert_eq!(kept, alloc::vec![7, 8, 9, 10]);
    }

    #[test]
    fn physical_ce_separates_disjoint_pilot_images() {
        // pilot-only frames: other-cell data would land on every row
        let fb = basis(BemKind::Ce);
        let pf = partial_fourier(K, 16).unwrap();
        let bank = EliminatorBank::new(&fb);
        let me = cell(&fb, &pf, 0, 5, false);
        let other = cell(&fb, &pf, 4, 6, false);
        let noise = vec![Complex::new(0.0, 0.0); K];
        let [own_p, own_d, others, ideal] = truth_vectors(&fb, &me, Some(&other));
        let truth = BranchTruth {
            own_pilots: &own_p,
            own_data: &own_d,
            others: &others,
            noise: &noise,
            ideal: &ideal,
            pilots: me.spec.pilots(),
        };
        let mode = EliminationMode::Physical { band_radius: 0 };
        let r = residual_report(&truth, 0, mode, &bank).unwrap();
        assert!(r.after.mci_power < 1e-4 * r.after.desired_power);
        assert!(r.after.self_ici_power < 1e-18 * r.after.desired_power);
    }

    #[test]
    fn oracle_report_is_interference_free() {
        for kind in [BemKind::Ce, BemKind::Gce] {
            let fb = basis(kind);
            let pf = partial_fourier(K, 16).unwrap();
            let bank = EliminatorBank::new(&fb);
            let me = cell(&fb, &pf, 0, 7, true);
            let other = cell(&fb, &pf, fb.config().order(), 8, true);
            let noise = vec![Complex::new(0.0, 0.0); K];
            let [own_p, own_d, others, ideal] = truth_vectors(&fb, &me, Some(&other));
            let truth = BranchTruth {
                own_pilots: &own_p,
                own_data: &own_d,
                others: &others,
                noise: &noise,
                ideal: &ideal,
                pilots: me.spec.pilots(),
            };
            let r = residual_report(&truth, 0, EliminationMode::Oracle, &bank).unwrap();
            assert!(r.before.mci_power > 0.0);
            assert!(r.before.self_ici_power > 0.0);
            assert_eq!(r.after.mci_power, 0.0);
            assert!(r.after.self_ici_power < 1e-18 * r.after.desired_power);

            let d = decompose_interference(
                &[me.h.clone(), other.h.clone()],
                &[me.frame.clone(), other.frame.clone()],
                &[me.spec.clone(), other.spec.clone()],
                Some(&noise),
                fb.fft(),
            )
            .unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.max(b).max(1e-30);
            assert!(close(d[0].desired_power, r.before.desired_power));
            assert!(close(d[0].self_ici_power, r.before.self_ici_power));
            assert!(close(d[0].mci_power, r.before.mci_power));
        }
    }

    #[test]
    fn physical_gce_residual_is_largest_for_adjacent_indices() {
        let fb = basis(BemKind::Gce);
        let pf = partial_fourier(K, 16).unwrap();
        let bank = EliminatorBank::new(&fb);
        let me = cell(&fb, &pf, 0, 9, false);
        let noise = vec![Complex::new(0.0, 0.0); K];
        let mode = EliminationMode::default_physical(BemKind::Gce);
        let residual: Vec<f64> = (1..=6)
            .map(|q2| {
                let other = cell(&fb, &pf, q2, 9, false);
                let [own_p, own_d, others, ideal] = truth_vectors(&fb, &me, Some(&other));
                let truth = BranchTruth {
                    own_pilots: &own_p,
                    own_data: &own_d,
                    others: &others,
                    noise: &noise,
                    ideal: &ideal,
                    pilots: me.spec.pilots(),
                };
                residual_report(&truth, 0, mode, &bank).unwrap().after.mci_power
            })
            .collect();
        assert!(residual.iter().all(|r| r.is_finite()));
        assert!(residual[1..].iter().all(|&r| r < residual[0]), "{residual:?}");
        assert!(residual.iter().any(|&r| r > 1e-6));
    }

    #[test]
    fn wrong_index_loses_desired_power() {
        let fb = basis(BemKind::Gce);
        let pf = partial_fourier(K, 16).unwrap();
        let bank = EliminatorBank::new(&fb);
        let me = cell(&fb, &pf, 3, 10, true);
        let noise = vec![Complex::new(0.0, 0.0); K];
        let [own_p, own_d, others, ideal] = truth_vectors(&fb, &me, None);
        let truth = BranchTruth {
            own_pilots: &own_p,
            own_data: &own_d,
            others: &others,
            noise: &noise,
            ideal: &ideal,
            pilots: me.spec.pilots(),
        };
        let desired: Vec<f64> = (3..=5)
            .map(|q| residual_report(&truth, q, EliminationMode::Oracle, &bank).unwrap().after.desired_power)
            .collect();
        assert!(desired[0] > desired[1] && desired[1] > desired[2], "{desired:?}");
    }

    #[test]
    fn unitary_g_preserves_noise_variance() {
        let fb = basis(BemKind::Gce);
        let bank = EliminatorBank::new(&fb);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sigma2 = 0.3;
        let mut acc = 0.0;
        let trials = 1000;
        for _ in 0..trials {
            let n = awgn(&mut rng, K, sigma2);
            let g = ici_eliminate(&n, 0, &bank).unwrap();
            acc += g.iter().map(|v| v.norm_sqr()).sum::<f64>() / K as f64;
        }
        assert!((acc / trials as f64 / sigma2 - 1.0).abs() < 0.05);
    }
}
