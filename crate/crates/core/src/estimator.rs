//! Block compressed-sensing channel estimation.
//!
//! After elimination the pilot rows of cell `t` read
//! `y_t(w_t) = diag(x_t(w_t)) F_L(w_t, :) c_t + n`, so the joint system is
//! block diagonal and every solver runs block by block.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::bem::{FreqBasis, PartialFourier};
use crate::channel::{FreqChannel, ModulatedChannel};
use crate::{CMatrix, Complex, Error, Result};

/// Singular-value ratio above which a block is reported ill-conditioned.
pub const CONDITION_LIMIT: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSystem {
    blocks: Vec<CMatrix>,
    observations: Vec<Vec<Complex>>,
    active: Vec<bool>,
    delay_span: usize,
}

/// Builds `Lambda_t = diag(x_t(w_t)) F_L(w_t, :)` for each cell.
///
/// Inactive cells keep their block but are never solved; their coefficients
/// are forced to zero.
pub fn build_measurement(
    pilot_symbols: &[Vec<Complex>],
    patterns: &[Vec<usize>],
    partial: &PartialFourier,
    observations: &[Vec<Complex>],
    active: &[bool],
) -> Result<MeasurementSystem> {
    let cells = patterns.len();
    for (what, n) in [
        ("pilot symbol sets", pilot_symbols.len()),
        ("observation blocks", observations.len()),
        ("activity flags", active.len()),
    ] {
        if n != cells {
            return Err(Error::DimensionMismatch {
                what,
                expected: cells,
                found: n,
            });
        }
    }
    let mut blocks = Vec::with_capacity(cells);
    for t in 0..cells {
        let w = &patterns[t];
        if w.iter().any(|&k| k >= partial.subcarriers()) {
            return Err(Error::InvalidParameter("pilot index outside 0..K"));
        }
        if pilot_symbols[t].len() != w.len() {
            return Err(Error::DimensionMismatch {
                what: "pilot symbols",
                expected: w.len(),
                found: pilot_symbols[t].len(),
            });
        }
        if observations[t].len() != w.len() {
            return Err(Error::DimensionMismatch {
                what: "pilot observations",
                expected: w.len(),
                found: observations[t].len(),
            });
        }
        let mut block = partial.rows(w);
        for (mut row, x) in block.row_iter_mut().zip(&pilot_symbols[t]) {
            row *= *x;
        }
        blocks.push(block);
    }
    Ok(MeasurementSystem {
        blocks,
        observations: observations.to_vec(),
        active: active.to_vec(),
        delay_span: partial.delay_span(),
    })
}

impl MeasurementSystem {
    pub fn cells(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, t: usize) -> &CMatrix {
        &self.blocks[t]
    }

    pub fn observation(&self, t: usize) -> &[Complex] {
        &self.observations[t]
    }

    pub fn is_active(&self, t: usize) -> bool {
        self.active[t]
    }

    pub fn delay_span(&self) -> usize {
        self.delay_span
    }

    /// The full block-diagonal `Psi`.
    pub fn block_diagonal(&self) -> CMatrix {
        let rows: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let cols = self.blocks.len() * self.delay_span;
        let mut psi = CMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (t, b) in self.blocks.iter().enumerate() {
            psi.view_mut((r0, t * self.delay_span), (b.nrows(), b.ncols()))
                .copy_from(b);
            r0 += b.nrows();
        }
        psi
    }

    /// Stacked observation vector.
    pub fn stacked_observation(&self) -> Vec<Complex> {
        self.observations.iter().flatten().copied().collect()
    }

    /// Total pilot count `sum_t P_t` over active cells.
    pub fn active_pilots(&self) -> usize {
        self.blocks
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(b, _)| b.nrows())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverWarning {
    IllConditioned { condition: f64 },
    /// Residual target not reached within the atom budget.
    LowConfidence,
    /// Iteration cap hit before the convergence test passed.
    NotConverged,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverMeta {
    pub iterations: usize,
    pub residual_norm: f64,
    pub warning: Option<SolverWarning>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub coefficients: Vec<Vec<Complex>>,
    pub supports: Vec<Vec<usize>>,
    /// One entry per cell.
    pub meta: Vec<SolverMeta>,
}

impl EstimateResult {
    pub fn warnings(&self) -> impl Iterator<Item = SolverWarning> + '_ {
        self.meta.iter().filter_map(|m| m.warning)
    }
}

struct BlockEstimate {
    coefficients: Vec<Complex>,
    meta: SolverMeta,
}

fn solve_blocks<F>(system: &MeasurementSystem, mut solve: F) -> EstimateResult
where
    F: FnMut(&CMatrix, &[Complex]) -> BlockEstimate,
{
    let mut coefficients = Vec::with_capacity(system.cells());
    let mut supports = Vec::with_capacity(system.cells());
    let mut meta = Vec::with_capacity(system.cells());
    for t in 0..system.cells() {
        let est = if system.active[t] {
            solve(&system.blocks[t], &system.observations[t])
        } else {
            BlockEstimate {
                coefficients: vec![Complex::new(0.0, 0.0); system.delay_span],
                meta: SolverMeta::default(),
            }
        };
        supports.push(
            est.coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(i, _)| i)
                .collect(),
        );
        coefficients.push(est.coefficients);
        meta.push(est.meta);
    }
    EstimateResult {
        coefficients,
        supports,
        meta,
    }
}

fn residual_norm(a: &CMatrix, c: &[Complex], y: &[Complex]) -> f64 {
    let r = a * DVector::from_column_slice(c) - DVector::from_column_slice(y);
    r.norm()
}

/// Minimum-norm least squares per block.
pub fn solve_ls(system: &MeasurementSystem) -> EstimateResult {
    solve_blocks(system, |a, y| {
        let l = a.ncols();
        let svd = a.clone().svd(true, true);
        let (u, v_t) = match (svd.u.as_ref(), svd.v_t.as_ref()) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => unreachable!("svd computed with both factors"),
        };
        let s = &svd.singular_values;
        let s_max = s.iter().copied().fold(0.0, f64::max);
        let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let mut c = DVector::<Complex>::zeros(l);
        if s_max > 0.0 {
            let uy = u.adjoint() * DVector::from_column_slice(y);
            for (i, &sv) in s.iter().enumerate() {
                if sv > s_max / CONDITION_LIMIT {
                    let coef = uy[i] / sv;
                    c += v_t.row(i).adjoint() * coef;
                }
            }
        }
        let condition = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
        let warning = (s_max > 0.0 && condition > CONDITION_LIMIT)
            .then_some(SolverWarning::IllConditioned { condition });
        let coefficients: Vec<Complex> = c.iter().copied().collect();
        BlockEstimate {
            meta: SolverMeta {
                iterations: 1,
                residual_norm: residual_norm(a, &coefficients, y),
                warning,
            },
            coefficients,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmpStop {
    /// Exactly this many atoms (fewer if the residual vanishes first).
    Sparsity(usize),
    /// Stop once `||r|| <= tolerance`, using at most `max_atoms` atoms.
    Residual { tolerance: f64, max_atoms: usize },
}

/// Relative residual below which greedy selection stops early.
const OMP_EXACT: f64 = 1e-13;

fn least_squares_on(a: &CMatrix, support: &[usize], y: &DVector<Complex>) -> DVector<Complex> {
    let sub = a.select_columns(support);
    let qr = sub.qr();
    let rhs = qr.q().adjoint() * y;
    qr.r()
        .solve_upper_triangular(&rhs)
        .unwrap_or_else(|| DVector::zeros(support.len()))
}

/// Orthogonal matching pursuit per block.
pub fn solve_omp(system: &MeasurementSystem, stop: OmpStop) -> EstimateResult {
    solve_blocks(system, |a, y| omp_block(a, y, stop))
}

fn omp_block(a: &CMatrix, y: &[Complex], stop: OmpStop) -> BlockEstimate {
    let (p, l) = a.shape();
    let yv = DVector::from_column_slice(y);
    let y_norm = yv.norm();
    let (budget, tolerance) = match stop {
        OmpStop::Sparsity(s) => (s, 0.0),
        OmpStop::Residual {
            tolerance,
            max_atoms,
        } => (max_atoms, tolerance),
    };
    let budget = budget.min(p).min(l);
    let norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    let mut support: Vec<usize> = Vec::new();
    let mut x = DVector::<Complex>::zeros(0);
    let mut residual = yv.clone();
    let mut iterations = 0;
    while support.len() < budget {
        let r_norm = residual.norm();
        if r_norm <= tolerance || r_norm <= OMP_EXACT * y_norm || y_norm == 0.0 {
            break;
        }
        let corr = a.adjoint() * &residual;
        let mut best = None;
        let mut best_val = -1.0;
        for j in 0..l {
            if norms[j] == 0.0 || support.contains(&j) {
                continue;
            }
            let v = corr[j].norm() / norms[j];
            if v > best_val {
                best_val = v;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        support.push(j);
        x = least_squares_on(a, &support, &yv);
        residual = &yv - a.select_columns(&support) * &x;
        iterations += 1;
    }
    let mut coefficients = vec![Complex::new(0.0, 0.0); l];
    for (&j, v) in support.iter().zip(x.iter()) {
        coefficients[j] = *v;
    }
    let r_norm = residual.norm();
    let warning = match stop {
        OmpStop::Residual { tolerance, .. } if r_norm > tolerance => Some(SolverWarning::LowConfidence),
        _ => None,
    };
    BlockEstimate {
        coefficients,
        meta: SolverMeta {
            iterations,
            residual_norm: r_norm,
            warning,
        },
    }
}

/// Default noise bound `sqrt(P) sigma sqrt(1 + 2 sqrt(2) / sqrt(P))` for `P`
/// complex observations of noise variance `sigma2`.
pub fn default_bpdn_epsilon(pilots: usize, sigma2: f64) -> f64 {
    let p = pilots as f64;
    libm::sqrt(p * sigma2) * libm::sqrt(1.0 + 2.0 * core::f64::consts::SQRT_2 / libm::sqrt(p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpdnOptions {
    pub max_iterations: usize,
    /// Relative change of the objective between iterations.
    pub tolerance: f64,
}

impl Default for BpdnOptions {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: 1e-8,
        }
    }
}

/// Euclidean projection onto `{c : ||A c - y|| <= eps}` via a thin SVD.
struct BallProjector {
    v: CMatrix,
    s: Vec<f64>,
    b: Vec<Complex>,
    outside_sq: f64,
    eps_sq: f64,
}

impl BallProjector {
    fn new(a: &CMatrix, y: &[Complex], eps: f64) -> Self {
        let svd = a.clone().svd(true, true);
        let u = svd.u.expect("left factor");
        let v_t = svd.v_t.expect("right factor");
        let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > s_max / CONDITION_LIMIT)
            .collect();
        let yv = DVector::from_column_slice(y);
        let uy = u.adjoint() * &yv;
        let s: Vec<f64> = keep.iter().map(|&i| svd.singular_values[i]).collect();
        let b: Vec<Complex> = keep.iter().map(|&i| uy[i]).collect();
        let in_range: f64 = b.iter().map(|v| v.norm_sqr()).sum();
        let outside_sq = (yv.norm_squared() - in_range).max(0.0);
        let v = CMatrix::from_fn(a.ncols(), keep.len(), |r, c| v_t[(keep[c], r)].conj());
        // an empty feasible set collapses to the least-squares affine set
        let eps_sq = (eps * eps).max(outside_sq * (1.0 + 1e-12));
        Self {
            v,
            s,
            b,
            outside_sq,
            eps_sq,
        }
    }

    fn residual_sq(&self, a_coef: &[Complex], lambda: f64) -> f64 {
        let mut acc = self.outside_sq;
        for ((&s, b), a) in self.s.iter().zip(&self.b).zip(a_coef) {
            let d = 1.0 + lambda * s * s;
            acc += (a * s - b).norm_sqr() / (d * d);
        }
        acc
    }

    fn project(&self, x: &DVector<Complex>) -> DVector<Complex> {
        let a_coef: Vec<Complex> = (self.v.adjoint() * x).iter().copied().collect();
        if self.residual_sq(&a_coef, 0.0) <= self.eps_sq {
            return x.clone();
        }
        let mut hi = 1.0;
        while self.residual_sq(&a_coef, hi) > self.eps_sq {
            hi *= 4.0;
            if hi > 1e300 {
                break;
            }
        }
        let mut lo = 0.0;
        // bisection in log space once the bracket is wide
        for _ in 0..200 {
            let mid = if lo > 0.0 { libm::sqrt(lo * hi) } else { hi / 2.0 };
            if self.residual_sq(&a_coef, mid) > self.eps_sq {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        let lambda = hi;
        let mut out = x.clone();
        for (i, ((&s, b), a)) in self.s.iter().zip(&self.b).zip(&a_coef).enumerate() {
            let target = (a + b * (lambda * s)) / (1.0 + lambda * s * s);
            let delta = target - a;
            out += self.v.column(i) * delta;
        }
        out
    }
}

fn soft_threshold(v: &DVector<Complex>, tau: f64) -> DVector<Complex> {
    v.map(|x| {
        let m = x.norm();
        if m <= tau {
            Complex::new(0.0, 0.0)
        } else {
            x * ((m - tau) / m)
        }
    })
}

fn l1(v: &DVector<Complex>) -> f64 {
    v.iter().map(|x| x.norm()).sum()
}

/// `min ||c||_1` subject to `||A c - y|| <= epsilon`, per block, by ADMM.
pub fn solve_bpdn(system: &MeasurementSystem, epsilon: f64, options: BpdnOptions) -> EstimateResult {
    solve_blocks(system, |a, y| bpdn_block(a, y, epsilon, options))
}

fn bpdn_block(a: &CMatrix, y: &[Complex], epsilon: f64, options: BpdnOptions) -> BlockEstimate {
    let l = a.ncols();
    let y_norm = libm::sqrt(y.iter().map(|v| v.norm_sqr()).sum::<f64>());
    if epsilon >= y_norm {
        return BlockEstimate {
            coefficients: vec![Complex::new(0.0, 0.0); l],
            meta: SolverMeta {
                iterations: 0,
                residual_norm: y_norm,
                warning: None,
            },
        };
    }
    let proj = BallProjector::new(a, y, epsilon);
    let ls_point = proj.project(&DVector::zeros(l));
    let scale = ls_point.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    let mut rho = 20.0 / scale;
    let mut z = ls_point.clone();
    let mut u = DVector::<Complex>::zeros(l);
    let mut obj_prev = l1(&z);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iterations {
        iterations += 1;
        let c = proj.project(&(&z - &u));
        let z_old = z;
        z = soft_threshold(&(&c + &u), 1.0 / rho);
        u += &c - &z;
        let primal = (&c - &z).norm();
        let dual = rho * (&z - &z_old).norm();
        let obj = l1(&z);
        let size = c.norm().max(z.norm()).max(1e-300);
        let stalled = (obj - obj_prev).abs() <= options.tolerance * obj.max(1e-300);
        if stalled && primal <= options.tolerance * size && dual <= options.tolerance * size * rho {
            converged = true;
            break;
        }
        obj_prev = obj;
        if iterations % 10 == 0 {
            if primal > 10.0 * dual / rho {
                rho *= 2.0;
                u /= Complex::new(2.0, 0.0);
            } else if dual / rho > 10.0 * primal {
                rho /= 2.0;
                u *= Complex::new(2.0, 0.0);
            }
        }
    }
    let coefficients: Vec<Complex> = z.iter().copied().collect();
    BlockEstimate {
        meta: SolverMeta {
            iterations,
            residual_norm: residual_norm(a, &coefficients, y),
            warning: (!converged).then_some(SolverWarning::NotConverged),
        },
        coefficients,
    }
}

/// `H_t = D_{q*_t} diag(F_L c_t)` for every cell.
pub fn reconstruct(
    result: &EstimateResult,
    q_stars: &[usize],
    basis: &FreqBasis,
    partial: &PartialFourier,
) -> Result<Vec<ModulatedChannel>> {
    if q_stars.len() != result.coefficients.len() {
        return Err(Error::DimensionMismatch {
            what: "dominant indices",
            expected: result.coefficients.len(),
            found: q_stars.len(),
        });
    }
    result
        .coefficients
        .iter()
        .zip(q_stars)
        .map(|(c, &q)| {
            basis.config().check_index(q)?;
            ModulatedChannel::new(basis.d_operator(q).clone(), partial.response(c))
        })
        .collect()
}

/// `(1 / (I K^2)) sum_i ||H_i - H^_i||_F^2` over paired channels.
pub fn mse(truth: &[ModulatedChannel], estimates: &[ModulatedChannel]) -> f64 {
    assert_eq!(truth.len(), estimates.len());
    if truth.is_empty() {
        return 0.0;
    }
    let k = truth[0].subcarriers() as f64;
    let total: f64 = truth
        .iter()
        .zip(estimates)
        .map(|(h, e)| h.squared_distance(e))
        .sum();
    total / (truth.len() as f64 * k * k)
}

/// Dense counterpart of [`mse`].
pub fn mse_dense(truth: &[FreqChannel], estimates: &[FreqChannel]) -> f64 {
    assert_eq!(truth.len(), estimates.len());
    if truth.is_empty() {
        return 0.0;
    }
    let k = truth[0].subcarriers() as f64;
    let total: f64 = truth
        .iter()
        .zip(estimates)
        .map(|(h, e)| (h.matrix() - e.matrix()).norm_squared())
        .sum();
    total / (truth.len() as f64 * k * k)
}
