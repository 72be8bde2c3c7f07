//! Propagation and fringe-shift model of the two-media interferometer.
//!
//! The device is a cross-shaped interferometer in which each beam travels to
//! its mirror through one dielectric (permittivity ε₁) and returns through
//! another (ε₂). A medium carried along with the laboratory drags the phase
//! velocity by the Fresnel coefficient 1 − 1/n², so the arm parallel to the
//! lab velocity v picks up a round-trip time term linear in v/c and
//! proportional to ε₁ − ε₂, while the perpendicular arm does not. The arm
//! time difference Δt maps to a fringe displacement via X_m = c·(X_o/λ)·Δt.
//!
//! With a single medium in both directions the linear term cancels and the
//! leading signal is quadratic in v/c; [`second_order_delta_t`] models that
//! configuration for sensitivity comparisons.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

/// A dielectric light carrier, identified by its permittivity ε = n².
#[derive(Debug, Clone, PartialEq)]
pub struct Medium {
    name: String,
    epsilon: f64,
}

impl Medium {
    /// Creates a medium with permittivity `epsilon`. Values below 1 (and
    /// non-finite values) are rejected: the drag model has no meaning there.
    pub fn new(name: impl Into<String>, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() || epsilon < 1.0 {
            return Err(Error::Domain(format!(
                "permittivity must be finite and ≥ 1, got {epsilon}"
            )));
        }
        Ok(Self {
            name: name.into(),
            epsilon,
        })
    }

    /// Strict vacuum, ε = 1.
    pub fn vacuum() -> Self {
        Self {
            name: "vacuum".into(),
            epsilon: 1.0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Refractive index n = √ε.
    pub fn refractive_index(&self) -> f64 {
        self.epsilon.sqrt()
    }

    /// Particle contribution to the permittivity, Δε = ε − 1 = n² − 1.
    ///
    /// Exact in f64 for any representable ε ≥ 1 (the difference is a
    /// multiple of ulp(ε)), which is what makes the two printed forms of
    /// the time-difference law bit-identical.
    pub fn delta_epsilon(&self) -> f64 {
        self.epsilon - 1.0
    }
}

/// One interferometer arm: out through `forward`, back through `back`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    length: f64,
    forward: Medium,
    back: Medium,
}

impl Arm {
    pub fn new(length_m: f64, forward: Medium, back: Medium) -> Result<Self> {
        if !length_m.is_finite() || length_m <= 0.0 {
            return Err(Error::Domain(format!(
                "arm length must be finite and > 0, got {length_m} m"
            )));
        }
        Ok(Self {
            length: length_m,
            forward,
            back,
        })
    }

    /// Arm length l, meters.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Medium traversed on the way out (ε₁).
    pub fn forward_medium(&self) -> &Medium {
        &self.forward
    }

    /// Medium traversed on the way back (ε₂).
    pub fn return_medium(&self) -> &Medium {
        &self.back
    }

    /// The same arm with forward and return media exchanged.
    pub fn swapped(&self) -> Arm {
        Arm {
            length: self.length,
            forward: self.back.clone(),
            back: self.forward.clone(),
        }
    }
}

/// Two-arm instrument plus the optical readout constants.
///
/// The usual configuration has identical arms (same length, same media
/// pair); asymmetric arms are permitted and handled by the per-arm ops.
#[derive(Debug, Clone)]
pub struct Interferometer {
    arm_parallel: Arm,
    arm_perpendicular: Arm,
    wavelength: f64,
    bandwidth: f64,
}

impl Interferometer {
    pub fn new(
        arm_parallel: Arm,
        arm_perpendicular: Arm,
        wavelength_m: f64,
        bandwidth_m: f64,
    ) -> Result<Self> {
        if !wavelength_m.is_finite() || wavelength_m <= 0.0 {
            return Err(Error::Domain(format!(
                "wavelength must be finite and > 0, got {wavelength_m} m"
            )));
        }
        if !bandwidth_m.is_finite() || bandwidth_m <= 0.0 {
            return Err(Error::Domain(format!(
                "fringe bandwidth must be finite and > 0, got {bandwidth_m} m"
            )));
        }
        Ok(Self {
            arm_parallel,
            arm_perpendicular,
            wavelength: wavelength_m,
            bandwidth: bandwidth_m,
        })
    }

    /// Builds the symmetric device: both arms share one geometry and media pair.
    pub fn symmetric(arm: Arm, wavelength_m: f64, bandwidth_m: f64) -> Result<Self> {
        Self::new(arm.clone(), arm, wavelength_m, bandwidth_m)
    }

    pub fn arm_parallel(&self) -> &Arm {
        &self.arm_parallel
    }

    pub fn arm_perpendicular(&self) -> &Arm {
        &self.arm_perpendicular
    }

    /// Wavelength λ, meters.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Fringe spacing X_o on the detector screen, meters.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// True when both arms have equal length and the same media pair.
    pub fn is_symmetric(&self) -> bool {
        let (p, q) = (&self.arm_parallel, &self.arm_perpendicular);
        p.length == q.length
            && p.forward.epsilon == q.forward.epsilon
            && p.back.epsilon == q.back.epsilon
    }

    /// Flat numeric description of the device (taken from the parallel arm).
    pub fn summary(&self) -> InstrumentSummary {
        InstrumentSummary {
            length_m: self.arm_parallel.length,
            wavelength_m: self.wavelength,
            bandwidth_m: self.bandwidth,
            epsilon_forward: self.arm_parallel.forward.epsilon,
            epsilon_return: self.arm_parallel.back.epsilon,
        }
    }
}

/// Flat numeric description of a symmetric instrument: enough to map
/// amplitudes to velocities and back, and to tag emitted data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstrumentSummary {
    pub length_m: f64,
    pub wavelength_m: f64,
    pub bandwidth_m: f64,
    pub epsilon_forward: f64,
    pub epsilon_return: f64,
}

impl InstrumentSummary {
    /// ε₁ − ε₂, the quantity the first-order signal is proportional to.
    pub fn delta_epsilon(&self) -> f64 {
        self.epsilon_forward - self.epsilon_return
    }

    /// dA_m/dv: normalized amplitude per unit horizontal speed, s/m.
    pub fn amplitude_per_speed(&self) -> f64 {
        (self.length_m / self.wavelength_m) * self.delta_epsilon() / SPEED_OF_LIGHT
    }
}

/// Arm-time difference and its fringe readout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Signal {
    /// Δt = t⊥ − t∥, seconds.
    pub delta_t: f64,
    /// X_m = c·(X_o/λ)·Δt, same length unit as the bandwidth X_o.
    pub fringe_shift: f64,
    /// A_m = X_m/X_o = c·Δt/λ, dimensionless fringe fractions.
    pub amplitude: f64,
}

/// Phase speed in a medium moving along the beam with signed speed `v`
/// (positive co-propagating, negative counter-propagating):
/// c̃ = c/n + v·(1 − 1/n²).
///
/// Errors with [`Error::Domain`] when |v| ≥ c/n, where the drag formula
/// leaves its validity range.
pub fn fresnel_speed(medium: &Medium, v: f64) -> Result<f64> {
    let n = medium.refractive_index();
    let phase = SPEED_OF_LIGHT / n;
    if !(v.abs() < phase) {
        return Err(Error::Domain(format!(
            "speed {v} m/s outside the drag model's validity range |v| < c/n = {phase:.3} m/s"
        )));
    }
    Ok(phase + v * (1.0 - 1.0 / (n * n)))
}

/// Exact round-trip time along the arm parallel to the motion: the
/// unexpanded two-term sum l/c̃₊(ε₁) + l/c̃₋(ε₂), the oracle against which
/// the first-order form is tested.
pub fn roundtrip_parallel_exact(arm: &Arm, v: f64) -> Result<f64> {
    let out = fresnel_speed(arm.forward_medium(), v)?;
    let back = fresnel_speed(arm.return_medium(), -v)?;
    debug_assert!(out > 0.0 && back > 0.0);
    Ok(arm.length() / out + arm.length() / back)
}

/// First-order expansion of the parallel round trip:
/// (l/c)·[√ε₁ + √ε₂ − (v/c)(Δε₁ − Δε₂)].
///
/// The drift term carries a minus sign: the outbound medium is dragged with
/// the motion (shorter transit), the return medium against it. Subtracting
/// this from the static perpendicular time gives Δt = (v/c)(l/c)(ε₁ − ε₂).
///
/// Exact in v for ε₁ = ε₂ (the drift term is a true zero), and finite for
/// any v; the |v| < c precondition is the model's, not the arithmetic's.
pub fn roundtrip_parallel_first_order(arm: &Arm, v: f64) -> f64 {
    debug_assert!(v.abs() < SPEED_OF_LIGHT);
    let drift = (v / SPEED_OF_LIGHT)
        * (arm.forward_medium().delta_epsilon() - arm.return_medium().delta_epsilon());
    (arm.length() / SPEED_OF_LIGHT)
        * (arm.forward_medium().refractive_index() + arm.return_medium().refractive_index()
            - drift)
}

/// Residual of the first-order expansion, exact − first-order, evaluated in
/// factored form: per arm the residual is l·v²·Δε²/(c²·ε·c̃).
///
/// Subtracting [`roundtrip_parallel_exact`] and
/// [`roundtrip_parallel_first_order`] directly cancels catastrophically once
/// v/c drops below ~10⁻⁴ (the residual falls under the ulp of the ~1.3 ns
/// round-trip time); this form stays fully accurate at any v and is what the
/// convergence-order checks use.
pub fn roundtrip_parallel_discrepancy(arm: &Arm, v: f64) -> Result<f64> {
    let out = fresnel_speed(arm.forward_medium(), v)?;
    let back = fresnel_speed(arm.return_medium(), -v)?;
    let l = arm.length();
    let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    let term = |m: &Medium, c_tilde: f64| {
        let de = m.delta_epsilon();
        l * v * v * de * de / (c2 * m.epsilon() * c_tilde)
    };
    Ok(term(arm.forward_medium(), out) + term(arm.return_medium(), back))
}

/// Which sign the squared speed takes under the transverse radical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransverseModel {
    /// l/√((c/n)² + v²) — the form this model family uses.
    VelocityAdded,
    /// l/√((c/n)² − v²) — conventional transverse light-clock kinematics,
    /// kept selectable for sensitivity analysis. Both agree at first order.
    VelocityReduced,
}

/// Round-trip time in the arm perpendicular to the motion,
/// l/√((c/n₁)² + v²) + l/√((c/n₂)² + v²). Even in v.
pub fn roundtrip_perpendicular(arm: &Arm, v: f64) -> f64 {
    debug_assert!(v.abs() < SPEED_OF_LIGHT);
    let leg = |m: &Medium| arm.length() / (SPEED_OF_LIGHT / m.refractive_index()).hypot(v);
    leg(arm.forward_medium()) + leg(arm.return_medium())
}

/// Perpendicular round trip with a selectable radical sign; the
/// velocity-reduced variant errors when |v| ≥ c/n for either medium.
pub fn roundtrip_perpendicular_variant(arm: &Arm, v: f64, model: TransverseModel) -> Result<f64> {
    match model {
        TransverseModel::VelocityAdded => Ok(roundtrip_perpendicular(arm, v)),
        TransverseModel::VelocityReduced => {
            let leg = |m: &Medium| -> Result<f64> {
                let phase = SPEED_OF_LIGHT / m.refractive_index();
                let radicand = phase * phase - v * v;
                if !(radicand > 0.0) {
                    return Err(Error::Domain(format!(
                        "velocity-reduced transverse form requires |v| < c/n = {phase:.3} m/s, got {v} m/s"
                    )));
                }
                Ok(arm.length() / radicand.sqrt())
            };
            Ok(leg(arm.forward_medium())? + leg(arm.return_medium())?)
        }
    }
}

/// First-order (v-independent) perpendicular round trip, (l/c)(√ε₁ + √ε₂).
pub fn roundtrip_perpendicular_first_order(arm: &Arm) -> f64 {
    (arm.length() / SPEED_OF_LIGHT)
        * (arm.forward_medium().refractive_index() + arm.return_medium().refractive_index())
}

/// Arm-time difference to first order, Δt = t⊥ − t∥.
///
/// For the symmetric device this is the closed form
/// (v/c)·(l/c)·(ε₁ − ε₂): exactly zero for matched media, exactly
/// antisymmetric under a media swap, and exactly linear in v.
/// Asymmetric devices fall back to the difference of the per-arm
/// first-order times.
pub fn delta_t_first_order(interferometer: &Interferometer, v: f64) -> f64 {
    if interferometer.is_symmetric() {
        let arm = interferometer.arm_parallel();
        let de = arm.forward_medium().epsilon() - arm.return_medium().epsilon();
        (v / SPEED_OF_LIGHT) * (arm.length() / SPEED_OF_LIGHT) * de
    } else {
        roundtrip_perpendicular_first_order(interferometer.arm_perpendicular())
            - roundtrip_parallel_first_order(interferometer.arm_parallel(), v)
    }
}

/// Converts an arm-time difference to the fringe readout of Eq. X_m = c·(X_o/λ)·Δt.
pub fn fringe_shift(delta_t: f64, wavelength_m: f64, bandwidth_m: f64) -> Signal {
    debug_assert!(wavelength_m > 0.0);
    let amplitude = SPEED_OF_LIGHT * delta_t / wavelength_m;
    Signal {
        delta_t,
        fringe_shift: amplitude * bandwidth_m,
        amplitude,
    }
}

/// Signal as a function of the device orientation:
/// Δt(θ) = (v/c)(l/c)(ε₁−ε₂)·(cos θ + sin θ), where θ is the angle between
/// the nominally-parallel arm and the horizontal wind. Δt(0) reproduces
/// [`delta_t_first_order`]; at θ = 90° the arms have exchanged roles and the
/// magnitude repeats; on the 135°/315° diagonal the signal nulls.
///
/// The angular factor is evaluated through an exact octant fold on the
/// angle's degree image, so the diagonal nulls and the sign flip under a
/// half turn are bit-exact wherever the fold pivots are representable
/// (all multiples of 45° survive the radian round trip exactly).
pub fn rotation_signal(interferometer: &Interferometer, v: f64, theta: f64) -> f64 {
    delta_t_first_order(interferometer, v) * cos_plus_sin_degrees(theta.to_degrees())
}

/// [`rotation_signal`] with the orientation given in degrees; on integer or
/// dyadic degree grids the fold below is exact for every input.
pub fn rotation_signal_degrees(interferometer: &Interferometer, v: f64, theta_deg: f64) -> f64 {
    delta_t_first_order(interferometer, v) * cos_plus_sin_degrees(theta_deg)
}

/// cos θ + sin θ through an exact octant fold. `g = r − 45·octant` is exact
/// by Sterbenz's lemma for any r in [0, 360), so octant boundaries (where
/// the nulls and the ±1 extrema of each piece live) are hit exactly.
fn cos_plus_sin_degrees(deg: f64) -> f64 {
    const SQRT_2: f64 = std::f64::consts::SQRT_2;
    let mut r = deg.rem_euclid(360.0);
    if r >= 360.0 {
        // rem_euclid can round up to the modulus for tiny negative inputs
        r = 0.0;
    }
    let octant = ((r / 45.0).floor() as usize).min(7);
    let g = r - 45.0 * octant as f64;
    let (s, c) = g.to_radians().sin_cos();
    match octant {
        0 => c + s,
        1 => SQRT_2 * c,
        2 => c - s,
        3 => -SQRT_2 * s,
        4 => -(c + s),
        5 => -SQRT_2 * c,
        6 => s - c,
        _ => SQRT_2 * s,
    }
}

/// Normalized fringe amplitude of the symmetric device at horizontal speed
/// `v_hor`: A_m = (l/λ)·(v_hor/c)·(ε₁ − ε₂), the θ = 0 signal magnitude
/// pushed through the fringe conversion.
pub fn fringe_amplitude(interferometer: &Interferometer, v_hor: f64) -> f64 {
    debug_assert!(v_hor >= 0.0);
    let arm = interferometer.arm_parallel();
    (arm.length() / interferometer.wavelength())
        * (v_hor / SPEED_OF_LIGHT)
        * (arm.forward_medium().epsilon() - arm.return_medium().epsilon())
}

/// Single-medium comparison signal, quadratic in the speed:
/// Δt₂ = (l/c)·(v/c)²·Δε.
///
/// This is the unique monomial consistent with the quadratic scaling of the
/// one-medium device and with the (v/c)⁻¹ sensitivity ratio against the
/// two-media device; any constant prefactor ambiguity lives here alone.
pub fn second_order_delta_t(length_m: f64, medium: &Medium, v: f64) -> f64 {
    debug_assert!(v.abs() < SPEED_OF_LIGHT);
    let beta = v / SPEED_OF_LIGHT;
    (length_m / SPEED_OF_LIGHT) * beta * beta * medium.delta_epsilon()
}

/// Ratio of the first-order two-media signal to the second-order
/// single-medium signal at matched arm length (taken from `first`):
/// equals (c/v)·(ε₁−ε₂)/Δε.
///
/// Errors when v ≤ 0 or when the comparison medium is vacuum (zero
/// second-order signal).
pub fn sensitivity_ratio(first: &Interferometer, second: &Medium, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!(
            "sensitivity ratio requires v > 0, got {v} m/s"
        )));
    }
    let length = first.arm_parallel().length();
    let denominator = second_order_delta_t(length, second, v);
    if denominator == 0.0 {
        return Err(Error::Domain(
            "second-order comparison signal is zero (vacuum carrier)".into(),
        ));
    }
    Ok(delta_t_first_order(first, v) / denominator)
}
