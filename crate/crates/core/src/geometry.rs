//! Railway geometry, train kinematics and the Doppler-to-BEM-index mapping.
//!
//! The track is a straight line. Cell `t` (1-based) starts at its entry point
//! `A_t = (t - 1) * d_s` and covers `[A_t, A_t + 2 * d_0]`, with its base
//! station abeam the midpoint `B_t = A_t + d_0` at perpendicular distance
//! `d_min`.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Multi-cell railway layout. All lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellLayout {
    d_max: f64,
    d_min: f64,
    d_s: f64,
    d_c: f64,
    num_cells: usize,
    d_0: f64,
}

impl CellLayout {
    /// `d_max`: coverage radius, `d_min`: base-station-to-track distance,
    /// `d_s`: inter-BS spacing, `d_c`: nominal overlap length (informational).
    pub fn new(d_max: f64, d_min: f64, d_s: f64, d_c: f64, num_cells: usize) -> Result<Self> {
        if !(d_min > 0.0) {
            return Err(Error::InvalidParameter("d_min must be positive"));
        }
        if !(d_max > d_min) {
            return Err(Error::InvalidParameter("d_max must exceed d_min"));
        }
        if !(d_s > 0.0) {
            return Err(Error::InvalidParameter("d_s must be positive"));
        }
        if num_cells == 0 {
            return Err(Error::InvalidParameter("at least one cell is required"));
        }
        let d_0 = libm::sqrt(d_max * d_max - d_min * d_min);
        Ok(Self {
            d_max,
            d_min,
            d_s,
            d_c,
            num_cells,
            d_0,
        })
    }

    /// Two-cell layout with the reference system parameters
    /// (`d_max` 1200 m, `d_min` 50 m, `d_s` 2000 m, `d_c` 400 m).
    pub fn reference() -> Self {
        Self::new(1200.0, 50.0, 2000.0, 400.0, 2).expect("reference layout is valid")
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn d_s(&self) -> f64 {
        self.d_s
    }

    pub fn d_c(&self) -> f64 {
        self.d_c
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    /// Half coverage along the track, `sqrt(d_max^2 - d_min^2)`.
    pub fn d_0(&self) -> f64 {
        self.d_0
    }

    /// Overlap length implied by the geometry, `2 d_0 - d_s` (negative when
    /// adjacent cells do not overlap).
    pub fn derived_overlap(&self) -> f64 {
        2.0 * self.d_0 - self.d_s
    }

    /// Track coordinate of the entry point `A_t` of cell `t` (1-based).
    pub fn cell_start(&self, cell_index: usize) -> f64 {
        (cell_index as f64 - 1.0) * self.d_s
    }

    /// Track coordinate of the point `B_t` closest to base station `t`.
    pub fn closest_point(&self, cell_index: usize) -> f64 {
        self.cell_start(cell_index) + self.d_0
    }

    pub fn covers(&self, alpha: f64) -> bool {
        (0.0..=2.0 * self.d_0).contains(&alpha)
    }
}

/// Instantaneous train kinematics.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainState {
    track_position: f64,
    speed: f64,
    antenna_offsets: Vec<f64>,
}

impl TrainState {
    /// `track_position` locates the reference antenna; each antenna sits at
    /// `track_position + offset`. Offsets must be sorted and span at most
    /// `train_length`.
    pub fn new(
        track_position: f64,
        speed: f64,
        antenna_offsets: Vec<f64>,
        train_length: f64,
    ) -> Result<Self> {
        if !(speed >= 0.0) {
            return Err(Error::InvalidParameter("speed must be non-negative"));
        }
        if antenna_offsets.is_empty() {
            return Err(Error::InvalidParameter("at least one antenna is required"));
        }
        if antenna_offsets.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidParameter("antenna offsets must be sorted"));
        }
        let span = antenna_offsets[antenna_offsets.len() - 1] - antenna_offsets[0];
        if span > train_length {
            return Err(Error::InvalidParameter(
                "antenna offsets span more than the train length",
            ));
        }
        Ok(Self {
            track_position,
            speed,
            antenna_offsets,
        })
    }

    pub fn track_position(&self) -> f64 {
        self.track_position
    }

    /// Speed in m/s.
    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn antenna_offsets(&self) -> &[f64] {
        &self.antenna_offsets
    }

    pub fn num_antennas(&self) -> usize {
        self.antenna_offsets.len()
    }

    /// Track coordinate of every receive antenna.
    pub fn antenna_positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.antenna_offsets
            .iter()
            .map(move |off| self.track_position + off)
    }

    pub fn with_track_position(&self, track_position: f64) -> Self {
        Self {
            track_position,
            ..self.clone()
        }
    }

    pub fn with_speed(&self, speed: f64) -> Result<Self> {
        if !(speed >= 0.0) {
            return Err(Error::InvalidParameter("speed must be non-negative"));
        }
        Ok(Self {
            speed,
            ..self.clone()
        })
    }
}

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

/// Carrier and timing parameters of the Doppler model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerParams {
    carrier_hz: f64,
    lightspeed: f64,
    packet_duration: f64,
}

impl DopplerParams {
    pub fn new(carrier_hz: f64, lightspeed: f64, packet_duration: f64) -> Result<Self> {
        if !(carrier_hz > 0.0 && lightspeed > 0.0 && packet_duration > 0.0) {
            return Err(Error::InvalidParameter(
                "carrier, lightspeed and packet duration must be positive",
            ));
        }
        Ok(Self {
            carrier_hz,
            lightspeed,
            packet_duration,
        })
    }

    /// 2.35 GHz carrier, c = 3e8 m/s, 1.2 ms packet.
    pub fn reference() -> Self {
        Self::new(2.35e9, 3.0e8, 1.2e-3).expect("reference parameters are valid")
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn lightspeed(&self) -> f64 {
        self.lightspeed
    }

    pub fn packet_duration(&self) -> f64 {
        self.packet_duration
    }

    /// `f_max = v / c * f_c`.
    pub fn max_doppler(&self, speed: f64) -> f64 {
        speed / self.lightspeed * self.carrier_hz
    }

    /// `F = T_d * f_max`, the normalized maximum Doppler.
    pub fn normalized_max_doppler(&self, speed: f64) -> f64 {
        self.packet_duration * self.max_doppler(speed)
    }
}

/// Distance of a track coordinate from the entry point of `cell_index`.
///
/// Values outside `[0, 2 d_0]` mean the antenna is outside that cell.
pub fn local_offset(track_position: f64, cell_index: usize, layout: &CellLayout) -> f64 {
    track_position - layout.cell_start(cell_index)
}

/// Cosine of the angle between the direction of travel and the line of sight
/// to the base station.
fn los_cosine(alpha: f64, layout: &CellLayout) -> f64 {
    let along = layout.d_0 - alpha;
    along / libm::sqrt(along * along + layout.d_min * layout.d_min)
}

/// Signed Doppler shift seen at local offset `alpha`: positive while
/// approaching the base station, zero abeam it, negative when receding.
pub fn doppler_shift(
    alpha: f64,
    speed: f64,
    params: &DopplerParams,
    layout: &CellLayout,
) -> Result<f64> {
    if !layout.covers(alpha) {
        return Err(Error::OutsideCoverage { alpha });
    }
    Ok(params.max_doppler(speed) * los_cosine(alpha, layout))
}

fn checked_index(shift: f64, order: usize, doppler_hz: f64) -> Result<usize> {
    let half = (order / 2) as f64;
    let idx = shift + half;
    if idx < 0.0 || idx > order as f64 {
        return Err(Error::DopplerExceedsOrder { doppler_hz, order });
    }
    Ok(idx as usize)
}

/// Dominant BEM index of a link with Doppler `f`:
/// `ceil(a T_d f) + Q/2` for `f >= 0`, `floor(a T_d f) + Q/2` otherwise.
pub fn dominant_index_from_doppler(
    f: f64,
    params: &DopplerParams,
    order: usize,
    oversample: usize,
) -> Result<usize> {
    if order % 2 != 0 {
        return Err(Error::InvalidParameter("BEM order must be even"));
    }
    let x = oversample as f64 * params.packet_duration * f;
    let shift = if f >= 0.0 {
        libm::ceil(x)
    } else {
        libm::floor(x)
    };
    checked_index(shift, order, f)
}

/// Dominant BEM index from the antenna position alone, with
/// `normalized_doppler = T_d f_max`. The ceil branch covers `[0, d_0]`
/// (approaching, including abeam), the floor branch `(d_0, 2 d_0]`.
pub fn dominant_index_from_position(
    alpha: f64,
    layout: &CellLayout,
    normalized_doppler: f64,
    order: usize,
    oversample: usize,
) -> Result<usize> {
    let (ceil_idx, floor_idx) =
        index_branches(alpha, layout, normalized_doppler, order, oversample)?;
    let chosen = if alpha <= layout.d_0 {
        ceil_idx
    } else {
        floor_idx
    };
    chosen.ok_or(Error::DopplerExceedsOrder {
        doppler_hz: normalized_doppler,
        order,
    })
}

/// Both rounding branches of the position mapping at `alpha`, as
/// `(ceil branch, floor branch)`. Near the closest point `B_t` the two differ
/// by one; an entry is `None` when that branch falls outside `0..=Q`.
pub fn index_branches(
    alpha: f64,
    layout: &CellLayout,
    normalized_doppler: f64,
    order: usize,
    oversample: usize,
) -> Result<(Option<usize>, Option<usize>)> {
    if order % 2 != 0 {
        return Err(Error::InvalidParameter("BEM order must be even"));
    }
    if !layout.covers(alpha) {
        return Err(Error::OutsideCoverage { alpha });
    }
    let x = oversample as f64 * normalized_doppler * los_cosine(alpha, layout);
    Ok((
        checked_index(libm::ceil(x), order, x).ok(),
        checked_index(libm::floor(x), order, x).ok(),
    ))
}

/// Cells (1-based) whose coverage contains the track coordinate.
pub fn serving_cells(track_position: f64, layout: &CellLayout) -> Vec<usize> {
    (1..=layout.num_cells)
        .filter(|&t| layout.covers(local_offset(track_position, t, layout)))
        .collect()
}

/// Position reported by an imperfect positioning system.
pub fn perturb_position(track_position: f64, error: f64) -> f64 {
    track_position + error
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> CellLayout {
        CellLayout::reference()
    }

    fn params() -> DopplerParams {
        DopplerParams::reference()
    }

    const V: f64 = 500.0 / 3.6;

    #[test]
    fn layout_rejects_bad_inputs() {
        assert!(CellLayout::new(1200.0, 0.0, 2000.0, 400.0, 2).is_err());
        assert!(CellLayout::new(40.0, 50.0, 2000.0, 400.0, 2).is_err());
        assert!(CellLayout::new(1200.0, 50.0, -1.0, 400.0, 2).is_err());
        assert!(CellLayout::new(1200.0, 50.0, 2000.0, 400.0, 0).is_err());
    }

    #[test]
    fn half_coverage_and_overlap() {
        let l = layout();
        let want = libm::sqrt(1200.0f64 * 1200.0 - 50.0 * 50.0);
        assert!((l.d_0() - want).abs() <= 1e-9 * want);
        assert!((l.d_0() - 1198.957881).abs() < 1e-6);
        // 2 * 1198.957881 - 2000; the nominal 400 m is a rounded figure.
        assert!((l.derived_overlap() - 397.915762).abs() < 1e-5);
        assert!((l.derived_overlap() - l.d_c()).abs() < 2.1);
    }

    #[test]
    fn local_offsets() {
        let l = layout();
        assert_eq!(local_offset(0.0, 1, &l), 0.0);
        assert_eq!(local_offset(2200.0, 2, &l), 200.0);
        let a = local_offset(2200.0, 1, &l);
        assert_eq!(a, 2200.0);
        assert!(l.covers(a));
    }

    #[test]
    fn max_doppler_reference_value() {
        let fmax = params().max_doppler(V);
        assert!((fmax - 1088.0).abs() < 0.05, "{fmax}");
    }

    #[test]
    fn doppler_at_entry_and_abeam() {
        let l = layout();
        let f0 = doppler_shift(0.0, V, &params(), &l).unwrap();
        // 1087.96 * 1198.96 / 1200
        assert!((f0 - 1087.02).abs() < 0.01, "{f0}");
        assert!((f0 - 1087.0).abs() < 1.0);
        assert_eq!(doppler_shift(l.d_0(), V, &params(), &l).unwrap(), 0.0);
        assert!(matches!(
            doppler_shift(-1.0, V, &params(), &l),
            Err(Error::OutsideCoverage { .. })
        ));
        assert!(doppler_shift(2.0 * l.d_0() + 1.0, V, &params(), &l).is_err());
    }

    #[test]
    fn index_from_doppler_examples() {
        let p = params();
        assert_eq!(dominant_index_from_doppler(0.0, &p, 4, 1).unwrap(), 2);
        assert_eq!(dominant_index_from_doppler(1087.1, &p, 4, 1).unwrap(), 4);
        assert_eq!(dominant_index_from_doppler(-1087.1, &p, 4, 1).unwrap(), 0);
        assert!(matches!(
            dominant_index_from_doppler(2000.0, &p, 4, 1),
            Err(Error::DopplerExceedsOrder { .. })
        ));
        assert!(dominant_index_from_doppler(10.0, &p, 3, 1).is_err());
    }

    #[test]
    fn index_from_position_examples() {
        let l = layout();
        let big_f = params().normalized_max_doppler(V);
        assert_eq!(
            dominant_index_from_position(l.d_0(), &l, big_f, 4, 1).unwrap(),
            2
        );
        assert_eq!(
            dominant_index_from_position(2200.0, &l, big_f, 4, 1).unwrap(),
            0
        );
        assert_eq!(
            dominant_index_from_position(200.0, &l, big_f, 4, 1).unwrap(),
            4
        );
        assert!(dominant_index_from_position(-5.0, &l, big_f, 4, 1).is_err());
    }

    #[test]
    fn branches_differ_just_past_closest_point() {
        let l = layout();
        let big_f = params().normalized_max_doppler(V);
        let (c, f) = index_branches(l.d_0() + 1.0, &l, big_f, 4, 1).unwrap();
        assert_eq!(c, Some(2));
        assert_eq!(f, Some(1));
        let (c, f) = index_branches(l.d_0(), &l, big_f, 4, 1).unwrap();
        assert_eq!((c, f), (Some(2), Some(2)));
    }

    #[test]
    fn serving_cell_sets() {
        let l = layout();
        assert_eq!(serving_cells(1200.0, &l), [1]);
        assert_eq!(serving_cells(2200.0, &l), [1, 2]);
        assert_eq!(serving_cells(2500.0, &l), [2]);
        assert!(serving_cells(-10.0, &l).is_empty());
    }

    #[test]
    fn perturbation_can_flip_index_at_closest_point() {
        let l = layout();
        let big_f = params().normalized_max_doppler(V);
        assert_eq!(perturb_position(2200.0, 0.0), 2200.0);
        assert_eq!(perturb_position(2200.0, 15.0), 2215.0);
        let exact = dominant_index_from_position(l.d_0(), &l, big_f, 4, 1).unwrap();
        let moved =
            dominant_index_from_position(perturb_position(l.d_0(), 15.0), &l, big_f, 4, 1)
                .unwrap();
        assert_eq!(exact, 2);
        // 15 m past B_t: F * cos = 1.3056 * (-15 / sqrt(15^2 + 50^2)) = -0.375
        assert_eq!(moved, 1);
    }

    #[test]
    fn train_state_validation() {
        assert!(TrainState::new(0.0, -1.0, alloc::vec![0.0], 240.0).is_err());
        assert!(TrainState::new(0.0, 1.0, alloc::vec![0.0, -240.0], 240.0).is_err());
        assert!(TrainState::new(0.0, 1.0, alloc::vec![-300.0, 0.0], 240.0).is_err());
        let s = TrainState::new(2200.0, V, alloc::vec![-240.0, 0.0], 240.0).unwrap();
        let pos: Vec<f64> = s.antenna_positions().collect();
        assert_eq!(pos, [1960.0, 2200.0]);
    }
}
