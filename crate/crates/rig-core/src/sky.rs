//! Sidereal timekeeping and projection of the assumed velocity vector onto
//! the observer's horizon.
//!
//! The velocity vector is treated as fixed in equatorial coordinates over a
//! day; its horizontal magnitude at the site is |v|·sin z with
//! cos z = sin φ sin δ + cos φ cos δ cos H and hour angle
//! H = local sidereal angle − right ascension. Annual aberration of the
//! vector, refraction and vertical projections are out of scope.

use crate::constants::{J2000_JD, SECONDS_PER_DAY};
use crate::error::{Error, Result};
use std::f64::consts::TAU;

/// An instant, stored as seconds since the J2000.0 epoch (2000-01-01
/// 12:00 UT). Negative values reach back into the twentieth century.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epoch {
    seconds: f64,
}

impl Epoch {
    pub fn from_seconds_since_j2000(seconds: f64) -> Self {
        Self { seconds }
    }

    pub fn from_julian_date(jd: f64) -> Self {
        Self {
            seconds: (jd - J2000_JD) * SECONDS_PER_DAY,
        }
    }

    pub fn seconds_since_j2000(&self) -> f64 {
        self.seconds
    }

    pub fn julian_date(&self) -> f64 {
        J2000_JD + self.seconds / SECONDS_PER_DAY
    }

    /// This instant shifted by `seconds`.
    pub fn offset(&self, seconds: f64) -> Epoch {
        Epoch {
            seconds: self.seconds + seconds,
        }
    }

    /// Hours into the civil day for a fixed UTC offset, in [0, 24).
    pub fn local_hours(&self, utc_offset_h: f64) -> f64 {
        let local_jd = self.julian_date() + utc_offset_h / 24.0;
        // JD rolls at noon; shift half a day to count from midnight.
        (local_jd + 0.5).rem_euclid(1.0) * 24.0
    }
}

/// Velocity vector of the laboratory through the assumed rest frame, in
/// equatorial coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindVector {
    speed: f64,
    right_ascension: f64,
    declination: f64,
}

impl WindVector {
    /// `speed` in m/s (≥ 0), angles in radians. The right ascension is
    /// normalized into [0, 2π); declinations outside [−π/2, π/2] are
    /// rejected.
    pub fn new(speed: f64, right_ascension: f64, declination: f64) -> Result<Self> {
        if !speed.is_finite() || speed < 0.0 {
            return Err(Error::Domain(format!(
                "wind speed must be finite and ≥ 0, got {speed} m/s"
            )));
        }
        if !declination.is_finite() || declination.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "declination must lie in [−π/2, π/2], got {declination} rad"
            )));
        }
        if !right_ascension.is_finite() {
            return Err(Error::Domain("right ascension must be finite".into()));
        }
        Ok(Self {
            speed,
            right_ascension: right_ascension.rem_euclid(TAU),
            declination,
        })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn right_ascension(&self) -> f64 {
        self.right_ascension
    }

    pub fn declination(&self) -> f64 {
        self.declination
    }
}

/// Geodetic observer location; longitude is east-positive, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverSite {
    latitude: f64,
    longitude: f64,
}

impl ObserverSite {
    pub fn new(latitude: f64, longitude: f64) -> Result<Self> {
        if !latitude.is_finite() || latitude.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "latitude must lie in [−π/2, π/2], got {latitude} rad"
            )));
        }
        if !longitude.is_finite() {
            return Err(Error::Domain("longitude must be finite".into()));
        }
        Ok(Self {
            latitude,
            longitude,
        })
    }

    pub fn latitude(&self) -> f64 {
        self.latitude
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }
}

/// Uniform sampling plan: `count() = floor(duration/step) + 1` instants
/// starting at `start`, inclusive of both ends when step divides duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub start: Epoch,
    pub duration_s: f64,
    pub step_s: f64,
}

impl Schedule {
    pub fn new(start: Epoch, duration_s: f64, step_s: f64) -> Result<Self> {
        if !(step_s > 0.0) {
            return Err(Error::Domain(format!(
                "schedule step must be > 0, got {step_s} s"
            )));
        }
        if !(duration_s >= step_s) {
            return Err(Error::Domain(format!(
                "schedule duration ({duration_s} s) must be at least one step ({step_s} s)"
            )));
        }
        Ok(Self {
            start,
            duration_s,
            step_s,
        })
    }

    pub fn count(&self) -> usize {
        (self.duration_s / self.step_s).floor() as usize + 1
    }

    pub fn epochs(&self) -> impl Iterator<Item = Epoch> + '_ {
        (0..self.count()).map(move |i| self.start.offset(i as f64 * self.step_s))
    }
}

/// Greenwich mean sidereal angle in radians, [0, 2π).
///
/// Degree-form polynomial in days since J2000:
/// θ = 280.46061837 + 360.98564736629·D + 3.87933e-4·T² − T³/38 710 000
/// with T = D/36525. Good to well under a second of time per day against
/// the equivalent seconds-of-time expression.
pub fn greenwich_sidereal_angle(epoch: Epoch) -> f64 {
    gmst_degrees(epoch).to_radians()
}

fn gmst_degrees(epoch: Epoch) -> f64 {
    let d = epoch.seconds_since_j2000() / SECONDS_PER_DAY;
    let t = d / 36525.0;
    let theta =
        280.460_618_37 + 360.985_647_366_29 * d + 3.879_33e-4 * t * t - t * t * t / 38_710_000.0;
    theta.rem_euclid(360.0)
}

/// Local sidereal angle: GMST plus the site's east longitude, in [0, 2π).
pub fn local_sidereal_angle(epoch: Epoch, site: &ObserverSite) -> f64 {
    (greenwich_sidereal_angle(epoch) + site.longitude()).rem_euclid(TAU)
}

/// Horizontal speed |v|·sin z for a given hour angle, latitude and
/// declination; the kernel of [`horizontal_projection`].
pub fn horizontal_projection_at_hour_angle(
    speed: f64,
    latitude: f64,
    declination: f64,
    hour_angle: f64,
) -> f64 {
    let cos_zenith = latitude.sin() * declination.sin()
        + latitude.cos() * declination.cos() * hour_angle.cos();
    // guard the radicand: |cos z| can graze 1 + ulp
    let sin_zenith = (1.0 - cos_zenith * cos_zenith).max(0.0).sqrt();
    speed * sin_zenith
}

/// Magnitude of the wind's projection onto the site's horizon plane at the
/// given instant, m/s. Always in [0, |v|].
pub fn horizontal_projection(wind: &WindVector, site: &ObserverSite, epoch: Epoch) -> f64 {
    let hour_angle = local_sidereal_angle(epoch, site) - wind.right_ascension();
    horizontal_projection_at_hour_angle(
        wind.speed(),
        site.latitude(),
        wind.declination(),
        hour_angle,
    )
}

/// Uniformly sampled horizontal-speed curve: floor(duration/step) + 1
/// points starting at `start`.
///
/// Panics if `step_s ≤ 0` or `duration_s < step_s`; validated inputs come
/// from [`Schedule::new`].
pub fn diurnal_curve(
    wind: &WindVector,
    site: &ObserverSite,
    start: Epoch,
    duration_s: f64,
    step_s: f64,
) -> Vec<(Epoch, f64)> {
    assert!(
        step_s > 0.0 && duration_s >= step_s,
        "invalid sampling plan: duration {duration_s} s, step {step_s} s"
    );
    let schedule = Schedule {
        start,
        duration_s,
        step_s,
    };
    schedule
        .epochs()
        .map(|e| (e, horizontal_projection(wind, site, e)))
        .collect()
}

/// Daily extremes of the horizontal projection for a northern-configuration
/// wind (φ, δ ≥ 0): minimum |v|·|sin(φ−δ)| at lower culmination of the
/// zenith distance, maximum |v| when the vector crosses the horizon-normal
/// plane (φ+δ ≤ 90°), else |v|·sin(φ+δ).
pub fn analytic_daily_extremes(speed: f64, latitude: f64, declination: f64) -> (f64, f64) {
    let min = speed * (latitude - declination).sin().abs();
    let max = if latitude + declination <= std::f64::consts::FRAC_PI_2 {
        speed
    } else {
        speed * (latitude + declination).sin()
    };
    (min, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SIDEREAL_DAY_S;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    // 1987-04-10 19:21:00 UT, a standard sidereal-time test instant.
    const JD_1987: f64 = 2_446_896.306_25;

    #[test]
    fn epoch_round_trips_julian_date() {
        let e = Epoch::from_julian_date(JD_1987);
        assert_relative_eq!(e.julian_date(), JD_1987, max_relative = 1e-15);
        assert_relative_eq!(
            e.seconds_since_j2000(),
            (JD_1987 - 2_451_545.0) * 86_400.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn epoch_local_hours() {
        // 1971-06-21 21:00 UT is midnight local under a +3 h offset.
        let e = Epoch::from_julian_date(2_441_124.375);
        assert_abs_diff_eq!(e.local_hours(3.0), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(e.local_hours(0.0), 21.0, epsilon = 1e-9);
    }

    #[test]
    fn gmst_reference_fixtures() {
        // 50-digit evaluations of the degree polynomial. The 1987 instant is
        // built from its exact seconds offset (−401 647 140 s); the Julian
        // date 2446896.30625 itself is not representable in f64.
        assert_abs_diff_eq!(
            gmst_degrees(Epoch::from_seconds_since_j2000(-401_647_140.0)),
            128.737_873_277_798_1,
            epsilon = 1e-8
        );
        assert_abs_diff_eq!(
            gmst_degrees(Epoch::from_julian_date(2_441_124.375)),
            224.399_063_601_355_6,
            epsilon = 1e-8
        );
        // At J2000 every time term is a true zero.
        assert_eq!(
            gmst_degrees(Epoch::from_seconds_since_j2000(0.0)),
            280.460_618_37
        );
    }

    #[test]
    fn gmst_agrees_with_seconds_of_time_form_over_a_day() {
        // Independent published expression in seconds of time.
        fn gmst_seconds_oracle(epoch: Epoch) -> f64 {
            let t = epoch.seconds_since_j2000() / 86_400.0 / 36_525.0;
            let s = 67_310.548_41
                + (876_600.0 * 3_600.0 + 8_640_184.812_866) * t
                + 0.093_104 * t * t
                - 6.2e-6 * t * t * t;
            s.rem_euclid(86_400.0)
        }
        for hour in 0..=24 {
            let e = Epoch::from_julian_date(JD_1987).offset(hour as f64 * 3_600.0);
            let ours_s = gmst_degrees(e) / 360.0 * 86_164.090_5 * (86_400.0 / 86_164.090_5);
            let oracle_s = gmst_seconds_oracle(e);
            let diff = (ours_s - oracle_s).abs();
            let diff = diff.min(86_400.0 - diff);
            assert!(diff < 1.0, "sidereal forms drift {diff} s at hour {hour}");
        }
    }

    #[test]
    fn sidereal_angle_periodicity() {
        let site = ObserverSite::new(0.974, 0.64).unwrap();
        let e = Epoch::from_julian_date(JD_1987);
        let a = local_sidereal_angle(e, &site);
        let b = local_sidereal_angle(e.offset(SIDEREAL_DAY_S), &site);
        let diff = (a - b).abs();
        assert!(diff.min(TAU - diff) < 1e-6);
    }

    #[test]
    fn sidereal_angle_shifts_with_longitude() {
        let e = Epoch::from_julian_date(JD_1987);
        let west = ObserverSite::new(0.5, 0.2).unwrap();
        let east = ObserverSite::new(0.5, 0.2 + 15f64.to_radians()).unwrap();
        let diff = (local_sidereal_angle(e, &east) - local_sidereal_angle(e, &west))
            .rem_euclid(TAU);
        assert_abs_diff_eq!(diff, 15f64.to_radians(), epsilon = 1e-12);
    }

    #[test]
    fn polar_wind_projects_constantly() {
        let wind = WindVector::new(481_500.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        let site = ObserverSite::new(55.8f64.to_radians(), 0.64).unwrap();
        let expected = 481_500.0 * 55.8f64.to_radians().cos();
        for hour in 0..24 {
            let e = Epoch::from_julian_date(JD_1987).offset(hour as f64 * 3_600.0);
            assert_relative_eq!(
                horizontal_projection(&wind, &site, e),
                expected,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn equatorial_wind_at_pole_is_always_horizontal() {
        let wind = WindVector::new(3e5, 2.0, 0.0).unwrap();
        let site = ObserverSite::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        for hour in 0..24 {
            let e = Epoch::from_julian_date(JD_1987).offset(hour as f64 * 3_600.0);
            assert_relative_eq!(horizontal_projection(&wind, &site, e), 3e5, max_relative = 1e-12);
        }
    }

    #[test]
    fn paper_fit_wind_daily_extremes() {
        // 50-digit analytic endpoints: 140455.479 and 479921.954 m/s.
        let wind = WindVector::new(481_500.0, 0.0, 38.84f64.to_radians()).unwrap();
        let site = ObserverSite::new(55.8f64.to_radians(), 36.6f64.to_radians()).unwrap();
        let start = Epoch::from_julian_date(2_441_124.375);
        let curve = diurnal_curve(&wind, &site, start, SIDEREAL_DAY_S, 10.0);
        let min = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max = curve.iter().map(|p| p.1).fold(0.0, f64::max);
        assert_abs_diff_eq!(min, 140_455.479, epsilon = 50.0);
        assert_abs_diff_eq!(max, 479_921.954, epsilon = 50.0);
    }

    #[test]
    fn diurnal_curve_shape() {
        let wind = WindVector::new(481_500.0, 0.0, 38.84f64.to_radians()).unwrap();
        let site = ObserverSite::new(55.8f64.to_radians(), 36.6f64.to_radians()).unwrap();
        let start = Epoch::from_julian_date(2_441_124.375);

        // one sidereal day closes the curve
        let curve = diurnal_curve(&wind, &site, start, SIDEREAL_DAY_S, SIDEREAL_DAY_S / 48.0);
        assert_eq!(curve.len(), 49);
        let (first, last) = (curve[0].1, curve[48].1);
        assert_relative_eq!(first, last, max_relative = 1e-6);

        // exactly one interior minimum and one maximum per sidereal day
        let inner = &curve[..48]; // drop the duplicated endpoint
        let mut minima = 0;
        let mut maxima = 0;
        for i in 0..48 {
            let prev = inner[(i + 47) % 48].1;
            let here = inner[i].1;
            let next = inner[(i + 1) % 48].1;
            if here < prev && here < next {
                minima += 1;
            }
            if here > prev && here > next {
                maxima += 1;
            }
        }
        assert_eq!((minima, maxima), (1, 1));

        // polar wind degenerates to a constant sequence
        let polar = WindVector::new(481_500.0, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let flat = diurnal_curve(&polar, &site, start, 86_400.0, 1_800.0);
        let spread = flat.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
            - flat.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-6);
    }

    #[test]
    fn schedule_validation_and_count() {
        let start = Epoch::from_seconds_since_j2000(0.0);
        assert!(Schedule::new(start, 86_400.0, 0.0).is_err());
        assert!(Schedule::new(start, 100.0, 200.0).is_err());
        let s = Schedule::new(start, 86_400.0, 1_800.0).unwrap();
        assert_eq!(s.count(), 49);
        assert_eq!(s.epochs().count(), 49);
    }

    #[test]
    fn wind_vector_validation() {
        assert!(WindVector::new(-1.0, 0.0, 0.0).is_err());
        assert!(WindVector::new(1.0, 0.0, 2.0).is_err());
        let w = WindVector::new(1.0, -1.0, 0.3).unwrap();
        assert!(w.right_ascension() >= 0.0 && w.right_ascension() < TAU);
        assert!(ObserverSite::new(2.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn projection_bounded_by_speed(
            speed in 0.0..1e6f64,
            ra in 0.0..TAU,
            dec in -1.5..1.5f64,
            lat in -1.5..1.5f64,
            t in -1e9..1e9f64,
        ) {
            let wind = WindVector::new(speed, ra, dec).unwrap();
            let site = ObserverSite::new(lat, 0.3).unwrap();
            let v = horizontal_projection(&wind, &site, Epoch::from_seconds_since_j2000(t));
            prop_assert!(v >= 0.0 && v <= speed * (1.0 + 1e-15));
        }

        #[test]
        fn projection_symmetric_about_culmination(
            h in 0.0..std::f64::consts::PI,
            dec in -1.5..1.5f64,
            lat in -1.5..1.5f64,
        ) {
            let a = horizontal_projection_at_hour_angle(1e5, lat, dec, h);
            let b = horizontal_projection_at_hour_angle(1e5, lat, dec, -h);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn projection_periodic_in_sidereal_day(
            t in -1e9..1e9f64,
            dec in -1.4..1.4f64,
        ) {
            let wind = WindVector::new(4.8e5, 1.1, dec).unwrap();
            let site = ObserverSite::new(0.974, 0.64).unwrap();
            let e = Epoch::from_seconds_since_j2000(t);
            let a = horizontal_projection(&wind, &site, e);
            let b = horizontal_projection(&wind, &site, e.offset(SIDEREAL_DAY_S));
            prop_assert!((a - b).abs() < 4.8e5 * 1e-5);
        }

        #[test]
        fn daily_extremes_match_analytic_forms(
            lat_deg in 0.0..88.0f64,
            dec_deg in 0.0..88.0f64,
        ) {
            let speed = 481_500.0;
            let wind = WindVector::new(speed, 0.7, dec_deg.to_radians()).unwrap();
            let site = ObserverSite::new(lat_deg.to_radians(), 0.64).unwrap();
            let start = Epoch::from_seconds_since_j2000(0.0);
            let curve = diurnal_curve(&wind, &site, start, SIDEREAL_DAY_S, SIDEREAL_DAY_S / 2000.0);
            let min = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let max = curve.iter().map(|p| p.1).fold(0.0, f64::max);
            let (amin, amax) = analytic_daily_extremes(speed, site.latitude(), wind.declination());
            prop_assert!((min - amin).abs() <= 1e-4 * speed + 1e-9);
            prop_assert!((max - amax).abs() <= 1e-4 * speed + 1e-9);
        }
    }
}
