//! Physical and astronomical constants shared across the crate.

/// Speed of light in vacuum, m/s. Exact by SI definition; the single source
/// of truth for every derived quantity in this workspace.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Mean sidereal day, seconds. Period of the clean diurnal signal.
pub const SIDEREAL_DAY_S: f64 = 86_164.090_5;

/// Seconds per mean solar day.
pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Julian date of the J2000.0 reference epoch (2000-01-01 12:00 UT).
pub const J2000_JD: f64 = 2_451_545.0;
