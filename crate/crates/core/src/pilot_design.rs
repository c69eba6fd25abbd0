//! Average coherence and the stochastic pilot pattern search.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::{CMatrix, Complex, Error, Result};

/// Strictly increasing subcarrier indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PilotPattern {
    indices: Vec<usize>,
    subcarriers: usize,
}

impl PilotPattern {
    pub fn new(mut indices: Vec<usize>, subcarriers: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate pilot index"));
        }
        if indices.last().is_some_and(|&i| i >= subcarriers) {
            return Err(Error::InvalidParameter("pilot index outside 0..K"));
        }
        Ok(Self {
            indices,
            subcarriers,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn subcarriers(&self) -> usize {
        self.subcarriers
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn into_indices(self) -> Vec<usize> {
        self.indices
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceParams {
    delta: f64,
}

impl CoherenceParams {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter("coherence threshold must lie in (0, 1)"));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl Default for CoherenceParams {
    fn default() -> Self {
        Self { delta: 0.1 }
    }
}

/// Mean of the normalized column inner products `|<z_i, z_j>|` (`i != j`)
/// that reach `delta`; zero when none do.
pub fn average_coherence(matrix: &CMatrix, params: &CoherenceParams) -> Result<f64> {
    let norms: Vec<f64> = matrix.column_iter().map(|c| c.norm()).collect();
    if let Some(j) = norms.iter().position(|&n| n == 0.0) {
        return Err(Error::DegenerateColumn(j));
    }
    let l = matrix.ncols();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..l {
        for j in (i + 1)..l {
            let g = matrix.column(i).dotc(&matrix.column(j)).norm() / (norms[i] * norms[j]);
            if g >= params.delta {
                sum += 2.0 * g;
                count += 2;
            }
        }
    }
    Ok(if count == 0 { 0.0 } else { sum / count as f64 })
}

/// Coherence of `F_L(w, :)` without forming the matrix.
///
/// Columns `i` and `j` have inner product `sum_w exp(-i 2 pi w (j - i) / K)`,
/// a function of `j - i` alone, shared by `2 (L - d)` ordered pairs.
pub fn pattern_coherence(
    pattern: &[usize],
    subcarriers: usize,
    delay_span: usize,
    params: &CoherenceParams,
) -> Result<f64> {
    if pattern.is_empty() {
        return Err(Error::DegenerateColumn(0));
    }
    let p = pattern.len() as f64;
    let k = subcarriers as f64;
    let mut sum = 0.0;
    let mut count = 0.0;
    for d in 1..delay_span {
        let mut acc = Complex::new(0.0, 0.0);
        for &w in pattern {
            let ph = -2.0 * PI * ((w * d) % subcarriers) as f64 / k;
            acc += Complex::new(libm::cos(ph), libm::sin(ph));
        }
        let g = acc.norm() / p;
        if g >= params.delta {
            let pairs = 2.0 * (delay_span - d) as f64;
            sum += pairs * g;
            count += pairs;
        }
    }
    Ok(if count == 0.0 { 0.0 } else { sum / count })
}

/// `w_i = round(i K / P)`, with collisions pushed forward to the next free index.
pub fn equidistant_pattern(subcarriers: usize, pilots: usize) -> Result<PilotPattern> {
    if pilots > subcarriers {
        return Err(Error::InvalidParameter("P must not exceed K"));
    }
    let mut used = vec![false; subcarriers];
    let mut out = Vec::with_capacity(pilots);
    for i in 0..pilots {
        let mut w = libm::round(i as f64 * subcarriers as f64 / pilots as f64) as usize % subcarriers;
        while used[w] {
            w = (w + 1) % subcarriers;
        }
        used[w] = true;
        out.push(w);
    }
    PilotPattern::new(out, subcarriers)
}

/// Replaces the element at `position` (in sorted order) by a uniformly drawn
/// subcarrier not already in the pattern.
pub fn mutate<R: Rng + ?Sized>(pattern: &PilotPattern, position: usize, rng: &mut R) -> PilotPattern {
    let k = pattern.subcarriers;
    assert!(pattern.len() < k, "mutation needs a free subcarrier");
    assert!(position < pattern.len());
    let mut member = vec![false; k];
    for &i in &pattern.indices {
        member[i] = true;
    }
    let free = k - pattern.len();
    let pick = rng.random_range(0..free);
    let replacement = (0..k).filter(|&i| !member[i]).nth(pick).expect("free index");
    let mut indices = pattern.indices.clone();
    indices[position] = replacement;
    indices.sort_unstable();
    PilotPattern {
        indices,
        subcarriers: k,
    }
}

/// State of the search after `m` steps.
#[derive(Debug, Clone)]
pub struct SearchState {
    /// Occupation frequencies over states `0..=M P`; state `s` is the
    /// pattern accepted at step `s` (state 0 is the initial pattern).
    pub gamma: Vec<f64>,
    pub current: PilotPattern,
    pub current_coherence: f64,
    pub tilde: Option<PilotPattern>,
    pub best: PilotPattern,
    pub best_coherence: f64,
    pub m: usize,
    pub kappa: usize,
    pub iota: usize,
}

impl SearchState {
    pub fn new(initial: PilotPattern, coherence: f64, steps: usize) -> Self {
        let mut gamma = vec![0.0; steps + 1];
        gamma[0] = 1.0;
        Self {
            gamma,
            current: initial.clone(),
            current_coherence: coherence,
            tilde: None,
            best: initial,
            best_coherence: coherence,
            m: 0,
            kappa: 0,
            iota: 0,
        }
    }
}

/// Result of [`design_pilots`].
#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub pattern: PilotPattern,
    pub coherence: f64,
    pub initial_coherence: f64,
    /// Coherence of every accepted pattern, starting with the initial one.
    pub accepted: Vec<f64>,
    pub final_state: SearchState,
}

/// Runs `M P` mutate-and-compare steps from the equidistant pattern.
///
/// A candidate replaces the current pattern only if its coherence is strictly
/// lower. The occupation vector is a running average of the indicator of the
/// current state with step `1 / (m + 1)`, and the returned pattern is the one
/// whose state last overtook the previous leader.
pub fn design_pilots<R: Rng + ?Sized>(
    subcarriers: usize,
    delay_span: usize,
    pilots: usize,
    rounds: usize,
    params: &CoherenceParams,
    rng: &mut R,
) -> Result<DesignOutcome> {
    if pilots == 0 || pilots >= subcarriers {
        return Err(Error::InvalidParameter("pilot design needs 0 < P < K"));
    }
    if rounds == 0 {
        return Err(Error::InvalidParameter("pilot design needs M >= 1"));
    }
    if delay_span == 0 || delay_span > subcarriers {
        return Err(Error::InvalidParameter("delay span L must lie in 1..=K"));
    }
    let objective = |w: &PilotPattern| pattern_coherence(&w.indices, subcarriers, delay_span, params);
    let initial = equidistant_pattern(subcarriers, pilots)?;
    let initial_coherence = objective(&initial)?;
    let steps = rounds * pilots;
    let mut state = SearchState::new(initial, initial_coherence, steps);
    let mut accepted = vec![initial_coherence];
    for _ in 0..rounds {
        for p_bar in 0..pilots {
            let m = state.m;
            let candidate = mutate(&state.current, p_bar, rng);
            let value = objective(&candidate)?;
            if value < state.current_coherence {
                state.current = candidate.clone();
                state.current_coherence = value;
                state.kappa = m + 1;
                accepted.push(value);
            }
            state.tilde = Some(candidate);
            let eta = 1.0 / (m + 1) as f64;
            for g in state.gamma.iter_mut() {
                *g *= 1.0 - eta;
            }
            state.gamma[state.kappa] += eta;
            if state.gamma[state.kappa] > state.gamma[state.iota] {
                state.best = state.current.clone();
                state.best_coherence = state.current_coherence;
                state.iota = state.kappa;
            }
            state.m = m + 1;
        }
    }
    Ok(DesignOutcome {
        pattern: state.best.clone(),
        coherence: state.best_coherence,
        initial_coherence,
        accepted,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bem::partial_fourier;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> CoherenceParams {
        CoherenceParams::new(0.1).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(CoherenceParams::new(0.0).is_err());
        assert!(CoherenceParams::new(1.0).is_err());
        assert!(CoherenceParams::new(0.5).is_ok());
    }

    #[test]
    fn coherence_cases() {
        let pf = partial_fourier(16, 4).unwrap();
        assert_eq!(average_coherence(pf.matrix(), &params()).unwrap(), 0.0);

        let mut dup = CMatrix::zeros(3, 2);
        dup[(0, 0)] = Complex::new(1.0, 0.0);
        dup[(1, 0)] = Complex::new(0.0, 2.0);
        dup[(0, 1)] = Complex::new(-3.0, 0.0);
        dup[(1, 1)] = Complex::new(0.0, -6.0);
        let c = average_coherence(&dup, &CoherenceParams::new(0.5).unwrap()).unwrap();
        assert!((c - 1.0).abs() < 1e-15);

        let mut zero = dup.clone();
        zero.column_mut(1).fill(Complex::new(0.0, 0.0));
        assert_eq!(average_coherence(&zero, &params()), Err(Error::DegenerateColumn(1)));
    }

    #[test]
    fn toy_dirichlet_values() {
        // K=16, L=4, w={0,1,2,3}: |<z_i, z_j>| / 4 = |sin(pi d / 4)| / (4 |sin(pi d / 16)|)
        let pf = partial_fourier(16, 4).unwrap();
        let m = pf.rows(&[0, 1, 2, 3]);
        let dirichlet = |d: f64| libm::fabs(libm::sin(PI * d / 4.0)) / (4.0 * libm::fabs(libm::sin(PI * d / 16.0)));
        // pairs: d=1 x3, d=2 x2, d=3 x1 (unordered)
        let want = (3.0 * dirichlet(1.0) + 2.0 * dirichlet(2.0) + dirichlet(3.0)) / 6.0;
        let got = average_coherence(&m, &params()).unwrap();
        assert!((got - want).abs() < 1e-12);
        let fast = pattern_coherence(&[0, 1, 2, 3], 16, 4, &params()).unwrap();
        assert!((fast - want).abs() < 1e-12);
    }

    #[test]
    fn fast_coherence_matches_gram() {
        let pf = partial_fourier(512, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for delta in [0.05, 0.1, 0.3] {
            let p = CoherenceParams::new(delta).unwrap();
            let mut w = rand::seq::index::sample(&mut rng, 512, 30).into_vec();
            w.sort_unstable();
            let slow = average_coherence(&pf.rows(&w), &p).unwrap();
            let fast = pattern_coherence(&w, 512, 64, &p).unwrap();
            assert!((slow - fast).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_free_coherence() {
        let pf = partial_fourier(64, 8).unwrap();
        let w = [1, 5, 9, 20, 33, 40, 51, 60];
        let base = average_coherence(&pf.rows(&w), &params()).unwrap();
        for a in [0.5, 1.0, 4.0] {
            let scaled = pf.rows(&w) * Complex::new(libm::sqrt(a), 0.0);
            assert!((average_coherence(&scaled, &params()).unwrap() - base).abs() < 1e-14);
        }
    }

    #[test]
    fn equidistant_examples() {
        let w = equidistant_pattern(512, 32).unwrap();
        assert_eq!(w.indices(), (0..32).map(|i| 16 * i).collect::<Vec<_>>());
        let w = equidistant_pattern(512, 30).unwrap();
        assert_eq!(w.len(), 30);
        assert_eq!(&w.indices()[..4], &[0, 17, 34, 51]);
        let w = equidistant_pattern(16, 16).unwrap();
        assert_eq!(w.indices(), (0..16).collect::<Vec<_>>());
        assert!(equidistant_pattern(4, 5).is_err());
    }

    #[test]
    fn mutation_contract() {
        let w = PilotPattern::new((0..15).collect(), 16).unwrap();
        let m = mutate(&w, 3, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(m.indices().contains(&15));
        assert!(!m.indices().contains(&3));

        let w = equidistant_pattern(64, 8).unwrap();
        let a = mutate(&w, 5, &mut ChaCha8Rng::seed_from_u64(3));
        let b = mutate(&w, 5, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        let common = a.indices().iter().filter(|i| w.indices().contains(i)).count();
        assert_eq!(common, 7);
    }

    #[test]
    fn mutation_is_uniform_over_complement() {
        let w = PilotPattern::new(alloc::vec![0, 2, 4, 6], 12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut hits = [0usize; 12];
        let n = 10_000;
        for _ in 0..n {
            let m = mutate(&w, 0, &mut rng);
            let new = m.indices().iter().find(|i| !w.indices().contains(i)).unwrap();
            hits[*new] += 1;
        }
        let free: Vec<usize> = (0..12).filter(|i| !w.indices().contains(i)).collect();
        let expected = n as f64 / free.len() as f64;
        let chi2: f64 = free
            .iter()
            .map(|&i| (hits[i] as f64 - expected).powi(2) / expected)
            .sum();
        // 7 degrees of freedom, 1% critical value
        assert!(chi2 < 18.475, "{chi2}");
    }

    #[test]
    fn search_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = design_pilots(64, 8, 10, 5, &params(), &mut rng).unwrap();
        assert!(out.coherence <= out.initial_coherence);
        assert!(out.accepted.windows(2).all(|w| w[1] < w[0]));
        assert!(out.accepted.contains(&out.coherence));
        let g = &out.final_state.gamma;
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(g.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert_eq!(out.final_state.m, 50);

        let again = design_pilots(64, 8, 10, 5, &params(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(again.pattern, out.pattern);
        assert!(design_pilots(8, 4, 8, 1, &params(), &mut rng).is_err());
        assert!(design_pilots(8, 4, 4, 0, &params(), &mut rng).is_err());
    }
}
