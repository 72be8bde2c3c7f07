//! Forward model and parameter estimation for a two-media first-order
//! Michelson interferometer.
//!
//! The instrument sends light out through one dielectric and back through
//! another; motion through the assumed rest frame then shifts the
//! interference fringes linearly in v/c and proportionally to the
//! permittivity difference of the two carriers — a thousand-fold sensitivity
//! gain over the classic single-medium device, whose signal is quadratic.
//!
//! The crate covers the full round trip from model to data and back:
//!
//! - [`optics`]: Fresnel-dragged phase speeds, exact and first-order arm
//!   round-trip times, the fringe conversion, orientation dependence, and
//!   the second-order comparison model;
//! - [`sky`]: sidereal angles and the projection of a fixed equatorial
//!   velocity vector onto an observer's horizon (the diurnal modulation);
//! - [`synthesis`]: seeded synthetic measurement series and fringe-shift
//!   sweeps over media pairs;
//! - [`inversion`]: per-sample velocity inversion, wind-vector fits of
//!   diurnal series, and the log-log sweep regression.

pub mod constants;
pub mod error;
pub mod inversion;
pub mod optics;
pub mod sky;
pub mod synthesis;

pub use error::{Error, Result};
pub use inversion::{fit_loglog_slope, fit_wind, invert_velocity_point, FitResult, RegressionResult};
pub use optics::{
    delta_t_first_order, fresnel_speed, fringe_amplitude, fringe_shift, rotation_signal,
    rotation_signal_degrees, roundtrip_parallel_discrepancy, roundtrip_parallel_exact,
    roundtrip_parallel_first_order, roundtrip_perpendicular, roundtrip_perpendicular_first_order,
    roundtrip_perpendicular_variant, second_order_delta_t, sensitivity_ratio, Arm, Interferometer,
    InstrumentSummary, Medium, Signal, TransverseModel,
};
pub use sky::{
    diurnal_curve, horizontal_projection, local_sidereal_angle, Epoch, ObserverSite, Schedule,
    WindVector,
};
pub use synthesis::{
    epsilon_sweep, synthesize_series, EpsilonSweepTable, MeasurementSample, MeasurementSeries,
    NoiseKind, NoiseModel, SweepEntry, SweepRow,
};
