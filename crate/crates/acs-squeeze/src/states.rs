//! Factories for atomic coherent states, the general two-branch superposition
//! family, parity cat states, and the maximally entangled state.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::spin::{Spin, SpinState};
use crate::{Error, Result, NULL_TOL};

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn check_theta(theta: f64) -> Result<f64> {
    if !theta.is_finite() || !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(theta)
}

fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        w - TAU
    } else {
        w
    }
}

/// Bloch-sphere parameters of a single atomic coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ACSParams {
    theta: f64,
    phi: f64,
}

impl ACSParams {
    /// Validates `theta` in `[0, pi]` and reduces `phi` mod `2*pi`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Ok(Self {
            theta: check_theta(theta)?,
            phi: wrap_angle(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Parameters `(theta1, theta2, phi, phi_r)` of the two-branch superposition
/// family: the first branch sits at azimuth 0, the second at azimuth `phi`,
/// with relative phase `phi_r` between branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionParams {
    theta1: f64,
    theta2: f64,
    phi: f64,
    phi_r: f64,
}

impl SuperpositionParams {
    /// Validates the polar angles in `[0, pi]`; azimuth and relative phase are
    /// accepted as any real and reduced mod `2*pi`.
    pub fn new(theta1: f64, theta2: f64, phi: f64, phi_r: f64) -> Result<Self> {
        Ok(Self {
            theta1: check_theta(theta1)?,
            theta2: check_theta(theta2)?,
            phi: wrap_angle(phi),
            phi_r: wrap_angle(phi_r),
        })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn phi_r(&self) -> f64 {
        self.phi_r
    }

    /// The parameters as the array `[theta1, theta2, phi, phi_r]`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.theta1, self.theta2, self.phi, self.phi_r]
    }
}

/// `sqrt(binom(n, k))`: exact integer arithmetic for small `n`, log-factorial
/// exponentiation above to avoid overflow.
fn sqrt_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    if n <= 30 {
        let mut b: u64 = 1;
        let k = k.min(n - k) as u64;
        for i in 0..k {
            b = b * (n as u64 - i) / (i + 1);
        }
        (b as f64).sqrt()
    } else {
        (0.5 * (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))).exp()
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n as u64).map(|v| (v as f64).ln()).sum()
}

/// Unnormalized half-angle amplitudes of an atomic coherent state: index `i`
/// (holding `M = i - J`) carries
/// `sqrt(binom(2J, i)) * cos(theta/2)^(2J-i) * sin(theta/2)^i * exp(i*i*phi)`.
/// Finite on the whole closed interval `theta in [0, pi]`.
fn acs_amplitudes(spin: Spin, p: ACSParams) -> DVector<C64> {
    let two_j = spin.two_j();
    let (half_sin, half_cos) = (0.5 * p.theta()).sin_cos();
    DVector::from_iterator(
        spin.dim(),
        (0..=two_j).map(|i| {
            let mag = sqrt_binomial(two_j, i)
                * half_cos.powi((two_j - i) as i32)
                * half_sin.powi(i as i32);
            C64::from_polar(mag, i as f64 * p.phi())
        }),
    )
}

/// Builds an atomic coherent state at Bloch angles `(theta, phi)`;
/// `theta = 0` is the Dicke state `|J,-J>`.
pub fn acs(spin: Spin, p: ACSParams) -> SpinState {
    SpinState::normalized(spin, acs_amplitudes(spin, p), NULL_TOL)
        .expect("coherent-state amplitudes have unit norm")
}

/// Builds the normalized two-branch superposition
/// `N * (|theta1, 0> + exp(i*phi_r) |theta2, phi>)`.
///
/// Fails with [`Error::NullSuperposition`] when the branches cancel exactly
/// (pre-normalization norm below 1e-14).
pub fn superposition(spin: Spin, p: SuperpositionParams) -> Result<SpinState> {
    let b1 = acs_amplitudes(spin, ACSParams::new(p.theta1(), 0.0)?);
    let b2 = acs_amplitudes(spin, ACSParams::new(p.theta2(), p.phi())?);
    let amps = b1 + b2 * C64::from_polar(1.0, p.phi_r());
    SpinState::normalized(spin, amps, NULL_TOL).map_err(|e| match e {
        Error::ZeroNorm(n) => Error::NullSuperposition(n),
        other => other,
    })
}

/// Relative sign of the two branches of a parity cat state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Builds the parity cat state `N (|zeta, J> +/- exp(-i*pi*J) |-zeta, J>)`.
///
/// For integer `J`, the `+` branch keeps only even-`M` Dicke amplitudes and
/// the `-` branch only odd-`M` ones.
pub fn gerry_grobe(spin: Spin, zeta: C64, sign: Sign) -> Result<SpinState> {
    let two_j = spin.two_j();
    let weight = |z: C64| -> DVector<C64> {
        // zeta-form amplitudes: (1+|z|^2)^(-J) * sqrt(binom) * z^(J+M)
        let pref = (1.0 + z.norm_sqr()).powf(-spin.j());
        let mut zp = C64::new(pref, 0.0);
        DVector::from_iterator(
            spin.dim(),
            (0..=two_j).map(|i| {
                let amp = zp * sqrt_binomial(two_j, i);
                zp *= z;
                amp
            }),
        )
    };
    let branch_phase = C64::from_polar(1.0, -std::f64::consts::PI * spin.j());
    let sign_factor = match sign {
        Sign::Plus => C64::new(1.0, 0.0),
        Sign::Minus => C64::new(-1.0, 0.0),
    };
    let amps = weight(zeta) + weight(-zeta) * branch_phase * sign_factor;
    SpinState::normalized(spin, amps, NULL_TOL).map_err(|e| match e {
        Error::ZeroNorm(n) => Error::NullSuperposition(n),
        other => other,
    })
}

/// The maximally entangled state `(|J,J> + |J,-J>)/sqrt(2)`.
pub fn mes(spin: Spin) -> SpinState {
    let mut amps = DVector::from_element(spin.dim(), C64::new(0.0, 0.0));
    let w = std::f64::consts::FRAC_1_SQRT_2;
    amps[0] = C64::new(w, 0.0);
    amps[spin.dim() - 1] = C64::new(w, 0.0);
    SpinState::new(spin, amps).expect("two-amplitude state is normalized")
}
