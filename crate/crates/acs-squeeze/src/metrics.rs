//! Squeezing and information-theoretic figures of merit: directional
//! spin-squeezing, Ramsey-referenced squeezing, planar quantum squeezing,
//! depth-of-entanglement certification, and Fisher information.
//!
//! Metrics whose denominator falls below [`DENOM_TOL`](crate::DENOM_TOL)
//! return `None` (an explicit "undefined" flag) rather than infinities.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::spin::{apply_exp_generator, moments, AngularMomentumOps, MomentSet, Spin, SpinState};
use crate::{Error, Result, DENOM_TOL, MSD_TOL};

/// A Cartesian axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn unit(self) -> [f64; 3] {
        let mut v = [0.0; 3];
        v[self.index()] = 1.0;
        v
    }

    /// The two remaining coordinate axes, in cyclic order.
    pub fn perpendicular_pair(self) -> (usize, usize) {
        let k = self.index();
        ((k + 1) % 3, (k + 2) % 3)
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// A coordinate plane label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    XY,
    YZ,
    ZX,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::XY, Plane::YZ, Plane::ZX];

    /// Indices of the two in-plane axes.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Plane::XY => (0, 1),
            Plane::YZ => (1, 2),
            Plane::ZX => (2, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Plane::XY => "xy",
            Plane::YZ => "yz",
            Plane::ZX => "zx",
        }
    }
}

fn check_match(state: &SpinState, ops: &AngularMomentumOps) -> Result<()> {
    if state.spin() != ops.spin() {
        return Err(Error::SpinMismatch {
            state: state.spin().two_j(),
            ops: ops.spin().two_j(),
        });
    }
    Ok(())
}

/// Deterministic orthonormal pair spanning the plane perpendicular to `n`:
/// Gram-Schmidt of the coordinate axis with the smallest `|n|` component
/// (lowest index on ties), completed by the cross product.
pub(crate) fn perpendicular_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut k = 0;
    for i in 1..3 {
        if n[i].abs() < n[k].abs() {
            k = i;
        }
    }
    let mut u = [0.0; 3];
    u[k] = 1.0;
    let dot: f64 = (0..3).map(|i| u[i] * n[i]).sum();
    for i in 0..3 {
        u[i] -= dot * n[i];
    }
    let len = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    for c in &mut u {
        *c /= len;
    }
    let v = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, v)
}

/// Directional spin-squeezing parameter from precomputed moments:
/// `N * Var(J_k) / (<J_perp1>^2 + <J_perp2>^2)`.
pub fn xi_sorensen_moments(m: &MomentSet, spin: Spin, axis: Axis) -> Option<f64> {
    let (p, q) = axis.perpendicular_pair();
    let denom = m.means[p] * m.means[p] + m.means[q] * m.means[q];
    if denom < DENOM_TOL {
        return None;
    }
    Some(spin.n_atoms() * m.variance(axis.index()) / denom)
}

/// Directional spin-squeezing parameter `xi_k^2` along a coordinate axis.
pub fn xi_sorensen(state: &SpinState, ops: &AngularMomentumOps, axis: Axis) -> Result<Option<f64>> {
    check_match(state, ops)?;
    let m = moments(state, ops)?;
    Ok(xi_sorensen_moments(&m, state.spin(), axis))
}

/// Directional spin-squeezing parameter along an arbitrary unit vector, with
/// the perpendicular pair constructed deterministically.
pub fn xi_sorensen_axis(
    state: &SpinState,
    ops: &AngularMomentumOps,
    n: [f64; 3],
) -> Result<Option<f64>> {
    check_match(state, ops)?;
    let len = n.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (len - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis(len));
    }
    let m = moments(state, ops)?;
    let (u, v) = perpendicular_frame(n);
    let (mu, mv) = (m.mean_along(u), m.mean_along(v));
    let denom = mu * mu + mv * mv;
    if denom < DENOM_TOL {
        return Ok(None);
    }
    Ok(Some(state.spin().n_atoms() * m.variance_along(n) / denom))
}

/// Ramsey-referenced squeezing from moments:
/// `N * Var(J_n) / |<J>|^2` for a fixed squeeze direction `n`.
pub fn xi_wineland_moments(m: &MomentSet, spin: Spin, n: [f64; 3]) -> Option<f64> {
    let denom = m.means.iter().map(|c| c * c).sum::<f64>();
    if denom < DENOM_TOL {
        return None;
    }
    Some(spin.n_atoms() * m.variance_along(n) / denom)
}

/// Ramsey-referenced squeezing parameter `xi_W^2` for squeeze direction `n`.
pub fn xi_wineland(
    state: &SpinState,
    ops: &AngularMomentumOps,
    n: [f64; 3],
) -> Result<Option<f64>> {
    check_match(state, ops)?;
    let len = n.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (len - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis(len));
    }
    let m = moments(state, ops)?;
    Ok(xi_wineland_moments(&m, state.spin(), n))
}

/// Variant of the Ramsey-referenced parameter minimizing the variance over
/// the plane perpendicular to the mean spin direction (2x2 covariance
/// eigenproblem in that plane), from moments.
pub fn xi_wineland_min_moments(m: &MomentSet, spin: Spin) -> Option<f64> {
    let denom = m.means.iter().map(|c| c * c).sum::<f64>();
    if denom < DENOM_TOL {
        return None;
    }
    let len = denom.sqrt();
    let msd = [m.means[0] / len, m.means[1] / len, m.means[2] / len];
    let (u, v) = perpendicular_frame(msd);
    let cuu = cov_between(m, u, u);
    let cvv = cov_between(m, v, v);
    let cuv = cov_between(m, u, v);
    let half_tr = 0.5 * (cuu + cvv);
    let disc = (0.5 * (cuu - cvv)).hypot(cuv);
    let lambda_min = half_tr - disc;
    Some(spin.n_atoms() * lambda_min / denom)
}

fn cov_between(m: &MomentSet, a: [f64; 3], b: [f64; 3]) -> f64 {
    let mut c = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            c += ai * bj * m.covariance(i, j);
        }
    }
    c
}

/// Ramsey-referenced squeezing minimized over the plane perpendicular to the
/// mean spin direction.
pub fn xi_wineland_min(state: &SpinState, ops: &AngularMomentumOps) -> Result<Option<f64>> {
    check_match(state, ops)?;
    let m = moments(state, ops)?;
    Ok(xi_wineland_min_moments(&m, state.spin()))
}

/// Planar squeezing parameter from moments:
/// `(Var(J_i) + Var(J_j)) / sqrt(<J_i>^2 + <J_j>^2)`.
pub fn xi_planar_moments(m: &MomentSet, plane: Plane) -> Option<f64> {
    let (i, j) = plane.indices();
    let denom = (m.means[i] * m.means[i] + m.means[j] * m.means[j]).sqrt();
    if denom < DENOM_TOL {
        return None;
    }
    Some((m.variance(i) + m.variance(j)) / denom)
}

/// Planar squeezing parameter `xi_ij^2` for a coordinate plane.
pub fn xi_planar(state: &SpinState, ops: &AngularMomentumOps, plane: Plane) -> Result<Option<f64>> {
    check_match(state, ops)?;
    let m = moments(state, ops)?;
    Ok(xi_planar_moments(&m, plane))
}

/// User-supplied table of producibility bounds `k -> D_k`: `D_k` is the lower
/// bound on `xi_par^2` attainable by `k`-producible states of particles with
/// per-particle spin `j`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthTable {
    /// Per-particle spin `j` (doubled, like [`Spin`]).
    pub two_j_particle: u32,
    /// Bounds keyed by producibility class `k`.
    pub bounds: BTreeMap<u32, f64>,
}

impl DepthTable {
    /// Validates positivity (`0 < D_k <= 0.5`), key positivity, and
    /// monotone non-increase in `k`.
    pub fn new(two_j_particle: u32, bounds: BTreeMap<u32, f64>) -> Result<Self> {
        if two_j_particle == 0 {
            return Err(Error::InvalidSpin(0));
        }
        let mut prev: Option<f64> = None;
        for (&k, &d) in &bounds {
            if k == 0 || d <= 0.0 || d > 0.5 || prev.is_some_and(|p| d > p) {
                return Err(Error::BadDepthTable);
            }
            prev = Some(d);
        }
        Ok(Self {
            two_j_particle,
            bounds,
        })
    }

    /// Built-in spin-1/2 example table with the single bound `D_1 = 0.45`.
    pub fn default_spin_half() -> Self {
        Self::new(1, BTreeMap::from([(1, 0.45)])).expect("static table is valid")
    }
}

/// Outcome of a depth-of-entanglement check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "depth")]
pub enum DepthVerdict {
    /// `xi_par^2 < D_k` certified: at least this many particles entangled.
    AtLeastEntangled(u32),
    /// `xi_par^2` at or above every supplied bound.
    NoEntanglementInferred,
    /// The table cannot support the check (empty or non-contiguous keys).
    InsufficientTable,
}

/// Certifies a depth of entanglement from a measured `xi_par^2`: the largest
/// contiguous `k` with `xi_par^2 < D_k` implies at least `k+1` mutually
/// entangled particles (capped at the particle number `N = J/j`).
pub fn depth_check(xi_par: f64, total_spin: Spin, table: &DepthTable) -> DepthVerdict {
    if table.bounds.is_empty() {
        return DepthVerdict::InsufficientTable;
    }
    // keys must run 1..=K without gaps, otherwise intermediate classes are
    // unverifiable and the verdict would be a guess
    for (expected, &k) in (1u32..).zip(table.bounds.keys()) {
        if k != expected {
            return DepthVerdict::InsufficientTable;
        }
    }
    let n_particles = total_spin.two_j() / table.two_j_particle;
    let mut best: Option<u32> = None;
    for (&k, &d) in &table.bounds {
        if xi_par < d {
            best = Some(k);
        }
    }
    match best {
        Some(k) => DepthVerdict::AtLeastEntangled((k + 1).min(n_particles.max(1))),
        None => DepthVerdict::NoEntanglementInferred,
    }
}

/// Quantum Fisher information of a pure state under a Hermitian generator,
/// computed in tangent-vector form:
/// `F_Q = 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)` with `|dpsi> = -i G |psi>`.
pub fn qfi(state: &SpinState, generator: &DMatrix<C64>) -> Result<f64> {
    if generator.nrows() != state.spin().dim() || generator.ncols() != state.spin().dim() {
        return Err(Error::DimensionMismatch {
            expected: state.spin().dim(),
            got: generator.nrows(),
        });
    }
    let psi = state.amplitudes();
    let dpsi = generator * psi * C64::new(0.0, -1.0);
    let overlap = psi.dotc(&dpsi);
    Ok(4.0 * (dpsi.norm_squared() - overlap.norm_sqr()))
}

/// Quantum Fisher information for the angular-momentum component along a
/// coordinate axis.
pub fn qfi_axis(state: &SpinState, ops: &AngularMomentumOps, axis: Axis) -> Result<f64> {
    check_match(state, ops)?;
    qfi(state, ops.component(axis.index()))
}

/// Classical Fisher information of the projective measurement of the
/// angular-momentum component along `measurement` after the phase imprint
/// `exp(-i phase Jx)`:
/// `F(phase) = sum_m P(m)^-1 (dP(m)/dphase)^2`, with the derivative evaluated
/// analytically as `dP(m) = 2 Re[<psi|m><m|(-i Jx)|psi>]`; outcomes with
/// `P(m) < 1e-12` are skipped.
pub fn cfi(
    state: &SpinState,
    ops: &AngularMomentumOps,
    phase: f64,
    measurement: Axis,
) -> Result<f64> {
    check_match(state, ops)?;
    if !phase.is_finite() {
        return Err(Error::NonFiniteAngle);
    }
    let evolved = apply_exp_generator(state, &ops.jx, phase);
    let psi = evolved.amplitudes();
    let dpsi = &ops.jx * psi * C64::new(0.0, -1.0);
    // projector basis: eigenvectors of the measured component
    let basis = match measurement {
        Axis::Z => None, // Dicke basis; projections are the amplitudes themselves
        _ => Some(
            ops.component(measurement.index())
                .clone()
                .symmetric_eigen()
                .eigenvectors,
        ),
    };
    let (proj, dproj) = match &basis {
        None => (psi.clone(), dpsi.clone()),
        Some(v) => (v.adjoint() * psi, v.adjoint() * &dpsi),
    };
    let mut f = 0.0;
    for (a, da) in proj.iter().zip(dproj.iter()) {
        let p = a.norm_sqr();
        if p < 1e-12 {
            continue;
        }
        let dp = 2.0 * (a.conj() * da).re;
        f += dp * dp / p;
    }
    Ok(f)
}

/// All squeezing figures of merit for one state, with the moments and mean
/// spin direction they derive from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub two_j: u32,
    /// Directional squeezing per coordinate axis.
    pub xi_sorensen: AxisValues,
    /// Ramsey-referenced squeezing per coordinate squeeze axis.
    pub xi_wineland: AxisValues,
    /// Ramsey-referenced squeezing minimized perpendicular to the mean spin.
    #[serde(with = "undef")]
    pub xi_wineland_min: Option<f64>,
    /// Planar squeezing per coordinate plane.
    pub xi_planar: PlaneValues,
    pub moments: MomentSet,
    /// Unit mean-spin direction; undefined when `|<J>|` is negligible.
    #[serde(with = "undef")]
    pub msd: Option<[f64; 3]>,
}

/// Per-axis metric values with explicit undefined flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisValues {
    #[serde(with = "undef")]
    pub x: Option<f64>,
    #[serde(with = "undef")]
    pub y: Option<f64>,
    #[serde(with = "undef")]
    pub z: Option<f64>,
}

impl AxisValues {
    pub fn get(&self, axis: Axis) -> Option<f64> {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }
}

/// Per-plane metric values with explicit undefined flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneValues {
    #[serde(with = "undef")]
    pub xy: Option<f64>,
    #[serde(with = "undef")]
    pub yz: Option<f64>,
    #[serde(with = "undef")]
    pub zx: Option<f64>,
}

impl PlaneValues {
    pub fn get(&self, plane: Plane) -> Option<f64> {
        match plane {
            Plane::XY => self.xy,
            Plane::YZ => self.yz,
            Plane::ZX => self.zx,
        }
    }
}

/// Serialize `Option<T>` with the explicit string marker `"undefined"` in
/// place of missing values (output files must never contain NaN/Inf tokens).
mod undef {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr<T> {
        Value(T),
        Marker(String),
    }

    pub fn serialize<S: Serializer, T: Serialize>(
        v: &Option<T>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => x.serialize(ser),
            None => "undefined".serialize(ser),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Deserialize<'de>>(
        de: D,
    ) -> Result<Option<T>, D::Error> {
        match Repr::<T>::deserialize(de)? {
            Repr::Value(x) => Ok(Some(x)),
            Repr::Marker(s) if s == "undefined" => Ok(None),
            Repr::Marker(s) => Err(D::Error::custom(format!(
                "expected a value or \"undefined\", got \"{s}\""
            ))),
        }
    }
}

/// Evaluates every squeezing metric for one state.
pub fn squeezing_report(state: &SpinState, ops: &AngularMomentumOps) -> Result<SqueezingReport> {
    check_match(state, ops)?;
    let spin = state.spin();
    let m = moments(state, ops)?;
    let mean_len = m.mean_length();
    let msd = if mean_len < MSD_TOL {
        None
    } else {
        Some([
            m.means[0] / mean_len,
            m.means[1] / mean_len,
            m.means[2] / mean_len,
        ])
    };
    Ok(SqueezingReport {
        two_j: spin.two_j(),
        xi_sorensen: AxisValues {
            x: xi_sorensen_moments(&m, spin, Axis::X),
            y: xi_sorensen_moments(&m, spin, Axis::Y),
            z: xi_sorensen_moments(&m, spin, Axis::Z),
        },
        xi_wineland: AxisValues {
            x: xi_wineland_moments(&m, spin, Axis::X.unit()),
            y: xi_wineland_moments(&m, spin, Axis::Y.unit()),
            z: xi_wineland_moments(&m, spin, Axis::Z.unit()),
        },
        xi_wineland_min: xi_wineland_min_moments(&m, spin),
        xi_planar: PlaneValues {
            xy: xi_planar_moments(&m, Plane::XY),
            yz: xi_planar_moments(&m, Plane::YZ),
            zx: xi_planar_moments(&m, Plane::ZX),
        },
        moments: m,
        msd,
    })
}
