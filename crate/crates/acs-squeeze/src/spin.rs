//! Dicke-basis spin states, angular-momentum operator matrices, moments, and
//! exact SU(2) rotations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, ALG_TOL};

/// Total spin `J`, stored as the integer `2J` so half-integer values are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    /// Builds a spin from `2J`. Requires `2J >= 1` (i.e. `J >= 1/2`).
    pub fn from_two_j(two_j: i64) -> Result<Self> {
        if two_j < 1 || two_j > u32::MAX as i64 {
            return Err(Error::InvalidSpin(two_j));
        }
        Ok(Self {
            two_j: two_j as u32,
        })
    }

    /// The integer `2J`.
    pub fn two_j(self) -> u32 {
        self.two_j
    }

    /// The spin value `J` as a float.
    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Number of particles `N = 2J` for an ensemble of spin-1/2 atoms.
    pub fn n_atoms(self) -> f64 {
        self.two_j as f64
    }

    /// Hilbert-space dimension `2J + 1`.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum number `M` for amplitude index `i` (index 0 is `M = -J`).
    pub fn m_at(self, index: usize) -> f64 {
        index as f64 - self.j()
    }
}

/// Serialized form of a state: `{"two_j": int, "re": [..], "im": [..]}`.
#[derive(Serialize, Deserialize)]
struct SpinStateRepr {
    two_j: i64,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// A pure spin-`J` state as complex amplitudes over the Dicke basis
/// `|J,M>`, `M = -J..+J`, with index 0 holding `M = -J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinStateRepr", into = "SpinStateRepr")]
pub struct SpinState {
    spin: Spin,
    amps: DVector<C64>,
}

impl SpinState {
    /// Wraps an amplitude vector that is already normalized (within 1e-12).
    pub fn new(spin: Spin, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: amps.len(),
            });
        }
        let err = (amps.norm_squared() - 1.0).abs();
        if err > ALG_TOL {
            return Err(Error::NotNormalized(err));
        }
        Ok(Self { spin, amps })
    }

    /// Normalizes an amplitude vector and wraps it. The caller supplies the
    /// threshold below which the vector is considered a genuine cancellation.
    pub(crate) fn normalized(spin: Spin, amps: DVector<C64>, null_tol: f64) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: amps.len(),
            });
        }
        let norm = amps.norm();
        if norm < null_tol {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(Self {
            spin,
            amps: amps / C64::new(norm, 0.0),
        })
    }

    /// The Dicke basis state `|J,M>` for integer `2M` (must have the same
    /// parity as `2J` and satisfy `|M| <= J`).
    pub fn dicke(spin: Spin, two_m: i64) -> Result<Self> {
        let two_j = spin.two_j() as i64;
        if two_m.abs() > two_j || (two_m - two_j) % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                got: usize::MAX,
            });
        }
        let idx = ((two_m + two_j) / 2) as usize;
        let mut amps = DVector::from_element(spin.dim(), C64::new(0.0, 0.0));
        amps[idx] = C64::new(1.0, 0.0);
        Ok(Self { spin, amps })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// Fidelity `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }
}

impl TryFrom<SpinStateRepr> for SpinState {
    type Error = Error;

    fn try_from(r: SpinStateRepr) -> Result<Self> {
        let spin = Spin::from_two_j(r.two_j)?;
        if r.re.len() != r.im.len() {
            return Err(Error::DimensionMismatch {
                expected: r.re.len(),
                got: r.im.len(),
            });
        }
        let amps = DVector::from_iterator(
            r.re.len(),
            r.re.iter().zip(&r.im).map(|(&re, &im)| C64::new(re, im)),
        );
        SpinState::new(spin, amps)
    }
}

impl From<SpinState> for SpinStateRepr {
    fn from(s: SpinState) -> Self {
        SpinStateRepr {
            two_j: s.spin.two_j() as i64,
            re: s.amps.iter().map(|a| a.re).collect(),
            im: s.amps.iter().map(|a| a.im).collect(),
        }
    }
}

/// Dense Hermitian matrices for `Jx`, `Jy`, `Jz` at fixed `J` (`hbar = 1`).
#[derive(Debug, Clone)]
pub struct AngularMomentumOps {
    spin: Spin,
    pub jx: DMatrix<C64>,
    pub jy: DMatrix<C64>,
    pub jz: DMatrix<C64>,
}

impl AngularMomentumOps {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// The component along a Cartesian axis index (0 = x, 1 = y, 2 = z).
    pub fn component(&self, k: usize) -> &DMatrix<C64> {
        match k {
            0 => &self.jx,
            1 => &self.jy,
            2 => &self.jz,
            _ => panic!("axis index out of range: {k}"),
        }
    }

    /// The operator `n . J` for an arbitrary direction `n`.
    pub fn along(&self, n: [f64; 3]) -> DMatrix<C64> {
        let mut out = DMatrix::from_element(self.spin.dim(), self.spin.dim(), C64::new(0.0, 0.0));
        for (k, &c) in n.iter().enumerate() {
            if c != 0.0 {
                out += self.component(k) * C64::new(c, 0.0);
            }
        }
        out
    }
}

/// Builds the angular-momentum matrices via the ladder-operator construction:
/// `J+|J,M> = sqrt(J(J+1) - M(M+1)) |J,M+1>`, `Jx = (J+ + J-)/2`,
/// `Jy = (J+ - J-)/(2i)`, `Jz = diag(M)`.
pub fn make_operators(spin: Spin) -> AngularMomentumOps {
    let dim = spin.dim();
    let j = spin.j();
    let mut jx = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut jy = jx.clone();
    let mut jz = jx.clone();
    for i in 0..dim {
        let m = spin.m_at(i);
        jz[(i, i)] = C64::new(m, 0.0);
        if i + 1 < dim {
            // <J,M+1| J+ |J,M> with M = m
            let c = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            jx[(i + 1, i)] += C64::new(c / 2.0, 0.0);
            jx[(i, i + 1)] += C64::new(c / 2.0, 0.0);
            jy[(i + 1, i)] += C64::new(0.0, -c / 2.0);
            jy[(i, i + 1)] += C64::new(0.0, c / 2.0);
        }
    }
    AngularMomentumOps { spin, jx, jy, jz }
}

/// First and (symmetrized) second moments of the angular-momentum components
/// in a given state, with derived variances and covariances.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MomentSet {
    /// `<Jx>, <Jy>, <Jz>`.
    pub means: [f64; 3],
    /// Symmetrized second moments `<(Ji Jj + Jj Ji)/2>`, full 3x3 (symmetric).
    pub second: [[f64; 3]; 3],
}

impl MomentSet {
    /// Variance of the component along axis `k`.
    pub fn variance(&self, k: usize) -> f64 {
        self.second[k][k] - self.means[k] * self.means[k]
    }

    /// Symmetrized covariance `Cov(Ji, Jj) = <(Ji Jj + Jj Ji)/2> - <Ji><Jj>`.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        self.second[i][j] - self.means[i] * self.means[j]
    }

    /// Length of the mean-spin vector `|<J>|`.
    pub fn mean_length(&self) -> f64 {
        self.means.iter().map(|m| m * m).sum::<f64>().sqrt()
    }

    /// Variance of the component along an arbitrary unit direction `n`.
    pub fn variance_along(&self, n: [f64; 3]) -> f64 {
        let mut v = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                v += n[i] * n[j] * self.covariance(i, j);
            }
        }
        v
    }

    /// Mean of the component along an arbitrary direction `n`.
    pub fn mean_along(&self, n: [f64; 3]) -> f64 {
        (0..3).map(|i| n[i] * self.means[i]).sum()
    }
}

/// Computes means, symmetrized second moments, variances, and covariances.
pub fn moments(state: &SpinState, ops: &AngularMomentumOps) -> Result<MomentSet> {
    if state.spin() != ops.spin() {
        return Err(Error::SpinMismatch {
            state: state.spin().two_j(),
            ops: ops.spin().two_j(),
        });
    }
    let psi = state.amplitudes();
    let v = [&ops.jx * psi, &ops.jy * psi, &ops.jz * psi];
    let mut means = [0.0; 3];
    let mut second = [[0.0; 3]; 3];
    for i in 0..3 {
        means[i] = psi.dotc(&v[i]).re;
        for j in 0..3 {
            // <psi| Ji Jj |psi> = (Ji psi) . (Jj psi); the symmetrized moment
            // is its real part.
            second[i][j] = v[i].dotc(&v[j]).re;
        }
    }
    Ok(MomentSet { means, second })
}

/// Applies `exp(-i * angle * (axis . J))` by eigendecomposition of the
/// Hermitian generator, exact to roundoff for any angle.
pub fn rotate(state: &SpinState, axis: [f64; 3], angle: f64) -> Result<SpinState> {
    if !angle.is_finite() {
        return Err(Error::NonFiniteAngle);
    }
    let len = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (len - 1.0).abs() > 1e-10 {
        return Err(Error::NonUnitAxis(len));
    }
    let ops = make_operators(state.spin());
    let generator = ops.along(axis);
    Ok(apply_exp_generator(state, &generator, angle))
}

/// Applies `exp(-i * angle * G)` for a Hermitian generator `G`, reusing a
/// prebuilt matrix (used by the Ramsey module to avoid rebuilding operators).
pub(crate) fn apply_exp_generator(
    state: &SpinState,
    generator: &DMatrix<C64>,
    angle: f64,
) -> SpinState {
    let eig = generator.clone().symmetric_eigen();
    // coords of psi in the eigenbasis
    let coords = eig.eigenvectors.adjoint() * state.amplitudes();
    let phased = DVector::from_iterator(
        coords.len(),
        coords
            .iter()
            .zip(eig.eigenvalues.iter())
            .map(|(c, &lam)| c * C64::from_polar(1.0, -angle * lam)),
    );
    let amps = &eig.eigenvectors * phased;
    // unitary to roundoff; renormalize to keep the constructor invariant exact
    SpinState::normalized(state.spin(), amps, 1e-6).expect("unitary evolution preserves norm")
}
