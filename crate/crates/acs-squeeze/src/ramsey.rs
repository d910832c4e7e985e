//! Ramsey interferometry: the SU(2) pulse sequence, Heisenberg-picture moment
//! propagation, error-propagation phase uncertainty, and phase scans with
//! Fisher-information bounds.

use serde::{Deserialize, Serialize};

use crate::metrics::{cfi, qfi_axis, Axis};
use crate::spin::{apply_exp_generator, make_operators, moments, rotate, MomentSet, SpinState};
use crate::{Result, DENOM_TOL, MSD_TOL};

/// Applies the collapsed Ramsey sequence `exp(-i phase Jx)`.
pub fn ramsey_evolve(state: &SpinState, phase: f64) -> Result<SpinState> {
    if !phase.is_finite() {
        return Err(crate::Error::NonFiniteAngle);
    }
    let ops = make_operators(state.spin());
    Ok(apply_exp_generator(state, &ops.jx, phase))
}

/// Applies the explicit three-step sequence
/// `exp(-i pi/2 Jy) exp(-i phase Jz) exp(+i pi/2 Jy)`, which equals the
/// collapsed form; exposed for verification.
pub fn ramsey_evolve_steps(state: &SpinState, phase: f64) -> Result<SpinState> {
    if !phase.is_finite() {
        return Err(crate::Error::NonFiniteAngle);
    }
    let ops = make_operators(state.spin());
    let half_pi = std::f64::consts::FRAC_PI_2;
    let s1 = apply_exp_generator(state, &ops.jy, -half_pi);
    let s2 = apply_exp_generator(&s1, &ops.jz, phase);
    Ok(apply_exp_generator(&s2, &ops.jy, half_pi))
}

/// Rotates `state` about the y-axis so its mean spin points along `-z`: the
/// Ramsey operating gauge, where the `Jy` signal slope at zero accumulated
/// phase is maximal (`|<Jz>| = |<J>|`).
///
/// Both Ramsey-referenced squeezing (`N Var(Jy) / |<J>|^2`) and directional
/// `y` squeezing are exactly invariant under rotations about `y`, so their
/// minimizers come in degenerate one-parameter orbits; this picks the orbit
/// representative whose squeezing value doubles as the achievable scaled
/// phase sensitivity. States whose mean spin lies along `+-y` or vanishes
/// (in-plane component below `MSD_TOL`) have no such gauge and are returned
/// unchanged.
pub fn align_for_ramsey(state: &SpinState) -> Result<SpinState> {
    let ops = make_operators(state.spin());
    let m = moments(state, &ops)?;
    let (jx, jz) = (m.means[0], m.means[2]);
    if jx.hypot(jz) < MSD_TOL {
        return Ok(state.clone());
    }
    // The active rotation R_y(angle) sends the in-plane direction at angle
    // psi = atan2(x, z) from +z to psi + angle; land it on pi (the -z axis).
    let angle = std::f64::consts::PI - jx.atan2(jz);
    rotate(state, [0.0, 1.0, 0.0], angle)
}

/// Output moments of `Jy` after the Ramsey sequence, computed from the input
/// moments alone (Heisenberg picture).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HeisenbergMoments {
    /// `<Jy_out> = <Jy> cos(phase) - <Jz> sin(phase)`.
    pub mean: f64,
    /// `<Jy_out^2>`.
    pub second_moment: f64,
    /// `Var(Jy_out) = Var(Jy) cos^2 + Var(Jz) sin^2 - sin(2 phase) Cov(Jy,Jz)`.
    pub variance: f64,
}

/// Propagates the `Jy` moments through the phase imprint using the input
/// state's moments only.
pub fn heisenberg_moments(state: &SpinState, phase: f64) -> Result<HeisenbergMoments> {
    if !phase.is_finite() {
        return Err(crate::Error::NonFiniteAngle);
    }
    let ops = make_operators(state.spin());
    let m = moments(state, &ops)?;
    Ok(heisenberg_from_moments(&m, phase))
}

/// Moment-propagation core shared with the optimizer.
pub fn heisenberg_from_moments(m: &MomentSet, phase: f64) -> HeisenbergMoments {
    let (sin, cos) = phase.sin_cos();
    let mean = m.means[1] * cos - m.means[2] * sin;
    let variance = m.variance(1) * cos * cos + m.variance(2) * sin * sin
        - (2.0 * sin * cos) * m.covariance(1, 2);
    HeisenbergMoments {
        mean,
        second_moment: variance + mean * mean,
        variance,
    }
}

/// Error-propagation phase uncertainty
/// `delta_phi = sqrt(Var(Jy_out)) / |d<Jy_out>/dphase|`, with the derivative
/// evaluated analytically; `None` at fringe extrema where the slope vanishes.
pub fn phase_uncertainty(state: &SpinState, phase: f64) -> Result<Option<f64>> {
    if !phase.is_finite() {
        return Err(crate::Error::NonFiniteAngle);
    }
    let ops = make_operators(state.spin());
    let m = moments(state, &ops)?;
    Ok(phase_uncertainty_from_moments(&m, phase))
}

/// Moment-based core of [`phase_uncertainty`], shared with the optimizer.
pub fn phase_uncertainty_from_moments(m: &MomentSet, phase: f64) -> Option<f64> {
    let (sin, cos) = phase.sin_cos();
    let slope = -m.means[1] * sin - m.means[2] * cos;
    if slope.abs() < DENOM_TOL {
        return None;
    }
    let out = heisenberg_from_moments(m, phase);
    Some(out.variance.max(0.0).sqrt() / slope.abs())
}

/// Phase-uncertainty curve over a phase grid (the material behind the scaled
/// sensitivity plots), with optional Fisher-information bounds attached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseScan {
    /// Phase grid (radians).
    pub phases: Vec<f64>,
    /// Error-propagation uncertainty per point; `None` at fringe extrema.
    pub delta_phi: Vec<Option<f64>>,
    /// `sqrt(2J) * delta_phi`: uncertainty scaled to the coherent-state
    /// baseline (the figure ordinate).
    pub scaled_delta_phi: Vec<Option<f64>>,
    /// Per-point classical Cramer-Rao bound `F(phase)^(-1/2)` for the `Jy`
    /// projective measurement, when requested.
    pub fisher_bound: Option<Vec<Option<f64>>>,
    /// Quantum Cramer-Rao bound `F_Q^(-1/2)` (phase-independent); `None` for
    /// a generator eigenstate where `F_Q` vanishes.
    pub qfi_bound: Option<f64>,
}

/// Evaluates [`phase_uncertainty`] over a grid. When `with_fisher` is set,
/// attaches the classical Cramer-Rao bound per point (for the `Jy` projective
/// measurement) and the quantum bound.
pub fn phase_scan(state: &SpinState, grid: &[f64], with_fisher: bool) -> Result<PhaseScan> {
    let ops = make_operators(state.spin());
    let m = moments(state, &ops)?;
    let scale = state.spin().n_atoms().sqrt();
    let mut delta_phi = Vec::with_capacity(grid.len());
    let mut scaled = Vec::with_capacity(grid.len());
    for &phase in grid {
        if !phase.is_finite() {
            return Err(crate::Error::NonFiniteAngle);
        }
        let dp = phase_uncertainty_from_moments(&m, phase);
        delta_phi.push(dp);
        scaled.push(dp.map(|v| scale * v));
    }
    let fisher_bound = if with_fisher {
        let mut bounds = Vec::with_capacity(grid.len());
        for &phase in grid {
            let f = cfi(state, &ops, phase, Axis::Y)?;
            bounds.push((f > DENOM_TOL).then(|| 1.0 / f.sqrt()));
        }
        Some(bounds)
    } else {
        None
    };
    let fq = qfi_axis(state, &ops, Axis::X)?;
    Ok(PhaseScan {
        phases: grid.to_vec(),
        delta_phi,
        scaled_delta_phi: scaled,
        fisher_bound,
        qfi_bound: (fq > DENOM_TOL).then(|| 1.0 / fq.sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{make_operators, moments, Spin, SpinState};
    use crate::states::{acs, superposition, ACSParams, SuperpositionParams};
    use approx::assert_abs_diff_eq;

    fn spin(two_j: i64) -> Spin {
        Spin::from_two_j(two_j).unwrap()
    }

    #[test]
    fn zero_phase_is_identity() {
        let s = spin(5);
        let state =
            superposition(s, SuperpositionParams::new(0.9, 2.0, 1.0, 0.3).unwrap()).unwrap();
        let out = ramsey_evolve(&state, 0.0).unwrap();
        assert!(state.fidelity(&out) > 1.0 - 1e-14);
    }

    #[test]
    fn pi_pulse_flips_poles() {
        let s = spin(2);
        let low = SpinState::dicke(s, -2).unwrap();
        let high = SpinState::dicke(s, 2).unwrap();
        let out = ramsey_evolve(&low, std::f64::consts::PI).unwrap();
        assert!(out.fidelity(&high) > 1.0 - 1e-12);
    }

    #[test]
    fn three_step_equals_collapsed() {
        let s = spin(7); // J = 7/2
        let state =
            superposition(s, SuperpositionParams::new(1.3, 2.4, 0.8, 2.1).unwrap()).unwrap();
        for phase in [0.0, 0.17, 1.0, 2.6, 5.5] {
            let a = ramsey_evolve(&state, phase).unwrap();
            let b = ramsey_evolve_steps(&state, phase).unwrap();
            assert!(
                a.fidelity(&b) > 1.0 - 1e-10,
                "fidelity {} at phase {phase}",
                a.fidelity(&b)
            );
        }
    }

    #[test]
    fn heisenberg_at_zero_and_quarter_turn() {
        let s = spin(6);
        let state =
            superposition(s, SuperpositionParams::new(0.7, 1.9, 2.5, 1.1).unwrap()).unwrap();
        let ops = make_operators(s);
        let m = moments(&state, &ops).unwrap();
        let at0 = heisenberg_moments(&state, 0.0).unwrap();
        assert_abs_diff_eq!(at0.mean, m.means[1], epsilon = 1e-14);
        assert_abs_diff_eq!(at0.variance, m.variance(1), epsilon = 1e-13);
        let at_quarter = heisenberg_moments(&state, std::f64::consts::FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(at_quarter.mean, -m.means[2], epsilon = 1e-13);
        assert_abs_diff_eq!(at_quarter.variance, m.variance(2), epsilon = 1e-13);
    }

    #[test]
    fn heisenberg_matches_direct_evolution() {
        let s = spin(10); // J = 5
        let state =
            superposition(s, SuperpositionParams::new(1.2, 2.8, 4.0, 0.6).unwrap()).unwrap();
        let ops = make_operators(s);
        for k in 0..50 {
            let phase = 0.13 * k as f64;
            let predicted = heisenberg_moments(&state, phase).unwrap();
            let evolved = ramsey_evolve(&state, phase).unwrap();
            let m = moments(&evolved, &ops).unwrap();
            assert_abs_diff_eq!(predicted.mean, m.means[1], epsilon = 1e-10);
            assert_abs_diff_eq!(predicted.variance, m.variance(1), epsilon = 1e-10);
            assert_abs_diff_eq!(predicted.second_moment, m.second[1][1], epsilon = 1e-10);
        }
    }

    #[test]
    fn pole_acs_reaches_projection_noise_limit() {
        let s = spin(20); // J = 10, N = 20
        let state = acs(s, ACSParams::new(0.0, 0.0).unwrap());
        let dp = phase_uncertainty(&state, 1e-4).unwrap().unwrap();
        let scaled = s.n_atoms().sqrt() * dp;
        assert_abs_diff_eq!(scaled, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn slope_zero_is_flagged() {
        // pole state: <Jy> = 0, <Jz> = -J; slope vanishes at phase = pi/2
        let s = spin(4);
        let state = acs(s, ACSParams::new(0.0, 0.0).unwrap());
        let dp = phase_uncertainty(&state, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(dp.is_none());
    }

    #[test]
    fn scan_matches_pointwise_calls() {
        let s = spin(8);
        let state =
            superposition(s, SuperpositionParams::new(0.4, 2.9, 1.2, 3.3).unwrap()).unwrap();
        let grid: Vec<f64> = (0..40).map(|k| -0.5 + 0.025 * k as f64).collect();
        let scan = phase_scan(&state, &grid, false).unwrap();
        assert_eq!(scan.phases.len(), grid.len());
        for (i, &phase) in grid.iter().enumerate() {
            let direct = phase_uncertainty(&state, phase).unwrap();
            assert_eq!(scan.delta_phi[i].is_some(), direct.is_some());
            if let (Some(a), Some(b)) = (scan.delta_phi[i], direct) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-14);
                assert_abs_diff_eq!(
                    scan.scaled_delta_phi[i].unwrap(),
                    s.n_atoms().sqrt() * b,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn empty_grid_gives_empty_scan() {
        let s = spin(4);
        let state = acs(s, ACSParams::new(0.3, 0.0).unwrap());
        let scan = phase_scan(&state, &[], true).unwrap();
        assert!(scan.phases.is_empty());
        assert!(scan.delta_phi.is_empty());
        assert_eq!(scan.fisher_bound.as_ref().map(Vec::len), Some(0));
    }

    #[test]
    fn propagation_respects_cramer_rao() {
        let s = spin(10);
        let state =
            superposition(s, SuperpositionParams::new(0.9, 1.7, 0.2, 2.8).unwrap()).unwrap();
        let grid: Vec<f64> = (1..30).map(|k| 0.05 * k as f64).collect();
        let scan = phase_scan(&state, &grid, true).unwrap();
        let bounds = scan.fisher_bound.as_ref().unwrap();
        for i in 0..grid.len() {
            if let (Some(dp), Some(crb)) = (scan.delta_phi[i], bounds[i]) {
                assert!(
                    dp >= crb - 1e-8,
                    "delta_phi {dp} beats the Cramer-Rao bound {crb} at {}",
                    grid[i]
                );
            }
        }
    }

    #[test]
    fn align_puts_mean_spin_on_minus_z() {
        let s = spin(20);
        // A phase cat rotated well away from the pole: mean spin in the x-z
        // plane, tilted by a radian and a half.
        let state = superposition(
            s,
            SuperpositionParams::new(1.3993529, 2.0989656, 0.0, 0.0).unwrap(),
        )
        .unwrap();
        let ops = make_operators(s);
        let before = moments(&state, &ops).unwrap();
        assert!(
            before.means[0].abs() > 1.0,
            "test premise: tilted mean spin"
        );

        let aligned = align_for_ramsey(&state).unwrap();
        let after = moments(&aligned, &ops).unwrap();
        assert_abs_diff_eq!(after.means[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(after.means[1], 0.0, epsilon = 1e-9);
        assert!(after.means[2] < 0.0, "mean spin must point along -z");
        assert_abs_diff_eq!(after.means[2], -before.mean_length(), epsilon = 1e-9);
    }

    #[test]
    fn align_preserves_y_referenced_squeezing() {
        use crate::metrics::{xi_sorensen_moments, xi_wineland_moments};
        let s = spin(20);
        let state = superposition(
            s,
            SuperpositionParams::new(1.3993529, 2.0989656, 0.0, 0.0).unwrap(),
        )
        .unwrap();
        let aligned = align_for_ramsey(&state).unwrap();
        let ops = make_operators(s);
        let m0 = moments(&state, &ops).unwrap();
        let m1 = moments(&aligned, &ops).unwrap();
        let w0 = xi_wineland_moments(&m0, s, [0.0, 1.0, 0.0]).unwrap();
        let w1 = xi_wineland_moments(&m1, s, [0.0, 1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(w0, w1, epsilon = 1e-9);
        let s0 = xi_sorensen_moments(&m0, s, Axis::Y).unwrap();
        let s1 = xi_sorensen_moments(&m1, s, Axis::Y).unwrap();
        assert_abs_diff_eq!(s0, s1, epsilon = 1e-9);
        // In the aligned gauge the scaled sensitivity at zero phase equals
        // the square root of the Ramsey-referenced squeezing parameter.
        let scaled = s.n_atoms().sqrt() * phase_uncertainty_from_moments(&m1, 0.0).unwrap();
        assert_abs_diff_eq!(scaled, w1.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn align_is_identity_on_aligned_and_degenerate_states() {
        let s = spin(8);
        let pole = acs(s, ACSParams::new(0.0, 0.0).unwrap());
        let aligned = align_for_ramsey(&pole).unwrap();
        assert_abs_diff_eq!(aligned.fidelity(&pole), 1.0, epsilon = 1e-12);

        // Mean spin along +y: no in-plane component to gauge-fix.
        let along_y = acs(s, ACSParams::new(std::f64::consts::FRAC_PI_2, 0.0).unwrap());
        let along_y =
            crate::spin::rotate(&along_y, [0.0, 0.0, 1.0], -std::f64::consts::FRAC_PI_2).unwrap();
        let ops = make_operators(s);
        let m = moments(&along_y, &ops).unwrap();
        assert!(m.means[0].hypot(m.means[2]) < 1e-9);
        let kept = align_for_ramsey(&along_y).unwrap();
        assert_abs_diff_eq!(kept.fidelity(&along_y), 1.0, epsilon = 1e-12);
    }
}
