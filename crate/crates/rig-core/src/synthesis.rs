//! Synthetic measurement generation: diurnal amplitude series with seeded
//! jitter noise, and fringe-shift tables swept over media pairs.

use crate::error::{Error, Result};
use crate::optics::{
    delta_t_first_order, fringe_amplitude, fringe_shift, Arm, Interferometer, InstrumentSummary,
    Medium,
};
use crate::sky::{horizontal_projection, Epoch, ObserverSite, Schedule, WindVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Additive amplitude-noise distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// Zero-mean uniform on [−amplitude, +amplitude]: a hard band, matching
    /// a line-width reading of the jitter.
    Uniform,
    /// Zero-mean normal with standard deviation `amplitude`.
    Gaussian,
}

/// Seeded additive noise on the normalized amplitude. Identical seed and
/// parameters reproduce the sample stream bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    amplitude: f64,
    seed: u64,
    kind: NoiseKind,
}

impl NoiseModel {
    pub fn new(amplitude: f64, seed: u64) -> Result<Self> {
        Self::with_kind(amplitude, seed, NoiseKind::Uniform)
    }

    pub fn with_kind(amplitude: f64, seed: u64, kind: NoiseKind) -> Result<Self> {
        if !amplitude.is_finite() || amplitude < 0.0 {
            return Err(Error::Domain(format!(
                "noise amplitude must be finite and ≥ 0, got {amplitude}"
            )));
        }
        Ok(Self {
            amplitude,
            seed,
            kind,
        })
    }

    /// Noise-free model (amplitude 0).
    pub fn quiet() -> Self {
        Self {
            amplitude: 0.0,
            seed: 0,
            kind: NoiseKind::Uniform,
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn sampler(&self) -> NoiseSampler {
        NoiseSampler {
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            amplitude: self.amplitude,
            normal: match self.kind {
                NoiseKind::Gaussian if self.amplitude > 0.0 => {
                    Some(Normal::new(0.0, self.amplitude).expect("validated amplitude"))
                }
                _ => None,
            },
        }
    }
}

struct NoiseSampler {
    rng: ChaCha8Rng,
    amplitude: f64,
    normal: Option<Normal<f64>>,
}

impl NoiseSampler {
    fn next(&mut self) -> f64 {
        if self.amplitude == 0.0 {
            return 0.0;
        }
        match &self.normal {
            Some(n) => n.sample(&mut self.rng),
            None => self.rng.random_range(-self.amplitude..=self.amplitude),
        }
    }
}

/// One timestamped normalized amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSample {
    pub epoch: Epoch,
    pub amplitude: f64,
}

/// A measured (or synthesized) diurnal amplitude series plus everything an
/// inversion needs to interpret it.
#[derive(Debug, Clone)]
pub struct MeasurementSeries {
    pub site: ObserverSite,
    pub instrument: InstrumentSummary,
    pub samples: Vec<MeasurementSample>,
    pub noise: NoiseModel,
}

impl MeasurementSeries {
    /// Validates the series invariants: epochs strictly increasing, all
    /// amplitudes finite.
    pub fn new(
        site: ObserverSite,
        instrument: InstrumentSummary,
        samples: Vec<MeasurementSample>,
        noise: NoiseModel,
    ) -> Result<Self> {
        for pair in samples.windows(2) {
            if pair[1].epoch.seconds_since_j2000() <= pair[0].epoch.seconds_since_j2000() {
                return Err(Error::Domain(
                    "sample epochs must be strictly increasing".into(),
                ));
            }
        }
        if let Some(bad) = samples.iter().find(|s| !s.amplitude.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite amplitude at epoch {} s",
                bad.epoch.seconds_since_j2000()
            )));
        }
        Ok(Self {
            site,
            instrument,
            samples,
            noise,
        })
    }

    /// Time covered by the samples, seconds.
    pub fn span_s(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.epoch.seconds_since_j2000() - a.epoch.seconds_since_j2000(),
            _ => 0.0,
        }
    }
}

/// Samples the clean diurnal amplitude curve and adds seeded noise:
/// A(tᵢ) = fringe_amplitude(v_hor(tᵢ)) + ηᵢ.
pub fn synthesize_series(
    wind: &WindVector,
    site: &ObserverSite,
    instrument: &Interferometer,
    schedule: &Schedule,
    noise: &NoiseModel,
) -> MeasurementSeries {
    let mut sampler = noise.sampler();
    let samples = schedule
        .epochs()
        .map(|epoch| {
            let clean = fringe_amplitude(instrument, horizontal_projection(wind, site, epoch));
            MeasurementSample {
                epoch,
                amplitude: clean + sampler.next(),
            }
        })
        .collect();
    MeasurementSeries {
        site: *site,
        instrument: instrument.summary(),
        samples,
        noise: *noise,
    }
}

/// One sweep input: a media pair, optionally measured at its own wavelength
/// and arm length (the instrument's values apply otherwise).
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub forward: Medium,
    pub return_medium: Medium,
    pub wavelength_m: Option<f64>,
    pub length_m: Option<f64>,
}

impl SweepEntry {
    pub fn pair(forward: Medium, return_medium: Medium) -> Self {
        Self {
            forward,
            return_medium,
            wavelength_m: None,
            length_m: None,
        }
    }

    pub fn with_wavelength(mut self, wavelength_m: f64) -> Self {
        self.wavelength_m = Some(wavelength_m);
        self
    }

    pub fn with_length(mut self, length_m: f64) -> Self {
        self.length_m = Some(length_m);
        self
    }
}

impl From<(Medium, Medium)> for SweepEntry {
    fn from((forward, return_medium): (Medium, Medium)) -> Self {
        Self::pair(forward, return_medium)
    }
}

/// One row of the ε-sweep: the fringe shift is reported in fringe
/// fractions, reduced to the table's reference geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub epsilon_forward: f64,
    pub epsilon_return: f64,
    pub delta_epsilon: f64,
    /// X_m in fringe fractions after the (l_ref/l)·(λ/λ_ref) reduction.
    pub fringe_shift_reduced: f64,
    /// Wavelength the row was evaluated at, before reduction.
    pub wavelength_m: f64,
    /// Arm length the row was evaluated at, before reduction.
    pub length_m: f64,
}

/// Fringe shift versus permittivity difference at a fixed horizontal speed,
/// all rows rescaled onto one reference geometry so they lie on one line.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSweepTable {
    pub rows: Vec<SweepRow>,
    pub reference_wavelength_m: f64,
    pub reference_length_m: f64,
    pub v_hor_mps: f64,
}

/// Evaluates the first-order fringe shift for each media pair at speed
/// `v_hor`, reducing every row to the instrument's wavelength and length:
/// X_reduced = X_row · (l_ref/l_row) · (λ_row/λ_ref).
///
/// Rows must have forward ε ≥ return ε; a matched pair yields a zero row.
pub fn epsilon_sweep(
    entries: &[SweepEntry],
    v_hor: f64,
    instrument: &Interferometer,
) -> Result<EpsilonSweepTable> {
    if entries.is_empty() {
        return Err(Error::Domain("sweep needs at least one media pair".into()));
    }
    let reference_wavelength = instrument.wavelength();
    let reference_length = instrument.arm_parallel().length();
    let mut rows = Vec::with_capacity(entries.len());
    for entry in entries {
        let (e1, e2) = (entry.forward.epsilon(), entry.return_medium.epsilon());
        if e1 < e2 {
            return Err(Error::Domain(format!(
                "sweep row {}/{} has forward ε {} below return ε {}",
                entry.forward.name(),
                entry.return_medium.name(),
                e1,
                e2
            )));
        }
        let wavelength = entry.wavelength_m.unwrap_or(reference_wavelength);
        let length = entry.length_m.unwrap_or(reference_length);
        let arm = Arm::new(length, entry.forward.clone(), entry.return_medium.clone())?;
        let row_ifr = Interferometer::symmetric(arm, wavelength, instrument.bandwidth())?;
        let signal = fringe_shift(
            delta_t_first_order(&row_ifr, v_hor),
            wavelength,
            instrument.bandwidth(),
        );
        let reduced = signal.amplitude * (reference_length / length) * (wavelength / reference_wavelength);
        rows.push(SweepRow {
            label: format!("{}/{}", entry.forward.name(), entry.return_medium.name()),
            epsilon_forward: e1,
            epsilon_return: e2,
            delta_epsilon: e1 - e2,
            fringe_shift_reduced: reduced,
            wavelength_m: wavelength,
            length_m: length,
        });
    }
    Ok(EpsilonSweepTable {
        rows,
        reference_wavelength_m: reference_wavelength,
        reference_length_m: reference_length,
        v_hor_mps: v_hor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SIDEREAL_DAY_S;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn paper_instrument() -> Interferometer {
        let arm = Arm::new(
            0.2,
            Medium::new("CS2", 1.0036).unwrap(),
            Medium::new("air", 1.0006).unwrap(),
        )
        .unwrap();
        Interferometer::symmetric(arm, 6e-7, 0.09).unwrap()
    }

    fn paper_site() -> ObserverSite {
        ObserverSite::new(55.8f64.to_radians(), 36.6f64.to_radians()).unwrap()
    }

    fn paper_wind() -> WindVector {
        WindVector::new(481_500.0, 0.0, 38.84f64.to_radians()).unwrap()
    }

    fn sidereal_schedule() -> Schedule {
        Schedule::new(
            Epoch::from_julian_date(2_441_124.375),
            SIDEREAL_DAY_S,
            SIDEREAL_DAY_S / 48.0,
        )
        .unwrap()
    }

    #[test]
    fn zero_wind_zero_noise_yields_zero_series() {
        let wind = WindVector::new(0.0, 0.0, 0.0).unwrap();
        let series = synthesize_series(
            &wind,
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &NoiseModel::quiet(),
        );
        assert_eq!(series.samples.len(), 49);
        assert!(series.samples.iter().all(|s| s.amplitude == 0.0));
    }

    #[test]
    fn clean_series_hits_figure_endpoints() {
        // A sidereal-day schedule phased so that sampling starts at upper
        // culmination lands samples on both extremes, so the sampled range
        // matches the analytic endpoint amplitudes.
        let schedule = sidereal_schedule();
        let culminating = WindVector::new(
            paper_wind().speed(),
            crate::sky::local_sidereal_angle(schedule.start, &paper_site()),
            paper_wind().declination(),
        )
        .unwrap();
        let series = synthesize_series(
            &culminating,
            &paper_site(),
            &paper_instrument(),
            &schedule,
            &NoiseModel::quiet(),
        );
        let max = series
            .samples
            .iter()
            .map(|s| s.amplitude)
            .fold(0.0, f64::max);
        let min = series
            .samples
            .iter()
            .map(|s| s.amplitude)
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(max, 1.601, epsilon = 1e-3);
        assert_abs_diff_eq!(min, 0.467, epsilon = 1e-3);
    }

    #[test]
    fn noise_stays_inside_the_band() {
        let noise = NoiseModel::new(0.016, 7).unwrap();
        let clean = synthesize_series(
            &paper_wind(),
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &NoiseModel::quiet(),
        );
        let noisy = synthesize_series(
            &paper_wind(),
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &noise,
        );
        for (c, n) in clean.samples.iter().zip(&noisy.samples) {
            assert!((n.amplitude - c.amplitude).abs() <= 0.016);
        }
    }

    #[test]
    fn identical_seeds_reproduce_bit_identical_series() {
        let noise = NoiseModel::new(0.016, 42).unwrap();
        let a = synthesize_series(
            &paper_wind(),
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &noise,
        );
        let b = synthesize_series(
            &paper_wind(),
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &noise,
        );
        assert_eq!(a.samples, b.samples);
        let c = synthesize_series(
            &paper_wind(),
            &paper_site(),
            &paper_instrument(),
            &sidereal_schedule(),
            &noise.with_seed(43),
        );
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn gaussian_option_is_seeded_too() {
        let noise = NoiseModel::with_kind(0.016, 9, NoiseKind::Gaussian).unwrap();
        let mk = || {
            synthesize_series(
                &paper_wind(),
                &paper_site(),
                &paper_instrument(),
                &sidereal_schedule(),
                &noise,
            )
        };
        assert_eq!(mk().samples, mk().samples);
    }

    #[test]
    fn series_invariants_enforced() {
        let site = paper_site();
        let instr = paper_instrument().summary();
        let e = Epoch::from_seconds_since_j2000(0.0);
        let bad_order = vec![
            MeasurementSample { epoch: e.offset(10.0), amplitude: 1.0 },
            MeasurementSample { epoch: e, amplitude: 1.0 },
        ];
        assert!(MeasurementSeries::new(site, instr, bad_order, NoiseModel::quiet()).is_err());
        let bad_value = vec![MeasurementSample { epoch: e, amplitude: f64::NAN }];
        assert!(MeasurementSeries::new(site, instr, bad_value, NoiseModel::quiet()).is_err());
    }

    #[test]
    fn sweep_ratios_follow_delta_epsilon() {
        let pairs = [
            SweepEntry::pair(
                Medium::new("air", 1.0006).unwrap(),
                Medium::new("lab vacuum", 1.000_006).unwrap(),
            ),
            SweepEntry::pair(
                Medium::new("CS2", 1.0036).unwrap(),
                Medium::new("air", 1.0006).unwrap(),
            ),
            SweepEntry::pair(
                Medium::new("plexiglas", 2.0).unwrap(),
                Medium::new("air", 1.0006).unwrap(),
            ),
        ];
        let table = epsilon_sweep(&pairs, 480_000.0, &paper_instrument()).unwrap();
        let k: Vec<f64> = table
            .rows
            .iter()
            .map(|r| r.fringe_shift_reduced / r.delta_epsilon)
            .collect();
        assert_relative_eq!(k[0], k[1], max_relative = 1e-12);
        assert_relative_eq!(k[1], k[2], max_relative = 1e-12);
    }

    #[test]
    fn sweep_degenerate_pair_yields_zero_row() {
        let air = Medium::new("air", 1.0006).unwrap();
        let table = epsilon_sweep(
            &[SweepEntry::pair(air.clone(), air)],
            480_000.0,
            &paper_instrument(),
        )
        .unwrap();
        assert_eq!(table.rows[0].fringe_shift_reduced, 0.0);
    }

    #[test]
    fn sweep_rejects_reversed_and_empty_input() {
        let air = Medium::new("air", 1.0006).unwrap();
        let cs2 = Medium::new("CS2", 1.0036).unwrap();
        assert!(epsilon_sweep(&[SweepEntry::pair(air, cs2)], 4.8e5, &paper_instrument()).is_err());
        assert!(epsilon_sweep(&[], 4.8e5, &paper_instrument()).is_err());
    }

    #[test]
    fn microwave_row_reduces_onto_the_optical_line() {
        let air = Medium::new("air", 1.0006).unwrap();
        let entries = [
            SweepEntry::pair(Medium::new("CS2", 1.0036).unwrap(), air.clone()),
            SweepEntry::pair(Medium::new("CaTiO3", 255.0).unwrap(), air).with_wavelength(0.1),
        ];
        let table = epsilon_sweep(&entries, 480_000.0, &paper_instrument()).unwrap();
        let k_opt = table.rows[0].fringe_shift_reduced / table.rows[0].delta_epsilon;
        let k_mw = table.rows[1].fringe_shift_reduced / table.rows[1].delta_epsilon;
        assert_relative_eq!(k_opt, k_mw, max_relative = 1e-12);
    }
}
