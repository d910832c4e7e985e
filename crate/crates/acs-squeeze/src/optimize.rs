//! Global minimization of squeezing metrics over the four-parameter
//! superposition family: multi-start bounded Nelder-Mead descent from
//! low-discrepancy starting points, a brute-force grid oracle, and sweeps
//! over a list of spins.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::{
    xi_planar_moments, xi_sorensen_moments, xi_wineland_min_moments, xi_wineland_moments, Axis,
    Plane,
};
use crate::ramsey::phase_uncertainty_from_moments;
use crate::spin::{make_operators, moments, AngularMomentumOps, MomentSet, Spin};
use crate::states::{superposition, SuperpositionParams};
use crate::{Error, Result};

/// Named scalar objectives over the superposition family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Sorensen(Axis),
    Wineland(Axis),
    WinelandMin,
    Planar(Plane),
    /// Error-propagation phase uncertainty at a fixed operating phase.
    PhaseUncertainty(f64),
}

impl Metric {
    /// Canonical name used in CSV output and CLI arguments.
    pub fn name(&self) -> String {
        match self {
            Metric::Sorensen(a) => format!("sorensen-{}", a.name()),
            Metric::Wineland(a) => format!("wineland-{}", a.name()),
            Metric::WinelandMin => "wineland-min".into(),
            Metric::Planar(p) => format!("planar-{}", p.name()),
            Metric::PhaseUncertainty(phi) => format!("phase-uncertainty:{phi}"),
        }
    }

    /// Parses a metric name: `sorensen-x|y|z`, `wineland-x|y|z`,
    /// `wineland-min`, `planar-xy|yz|zx`, or `phase-uncertainty:<phase>`.
    pub fn parse(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownMetric(name.to_string());
        if let Some(rest) = name.strip_prefix("phase-uncertainty:") {
            let phi: f64 = rest.parse().map_err(|_| unknown())?;
            if !phi.is_finite() {
                return Err(unknown());
            }
            return Ok(Metric::PhaseUncertainty(phi));
        }
        match name {
            "sorensen-x" => Ok(Metric::Sorensen(Axis::X)),
            "sorensen-y" => Ok(Metric::Sorensen(Axis::Y)),
            "sorensen-z" => Ok(Metric::Sorensen(Axis::Z)),
            "wineland-x" => Ok(Metric::Wineland(Axis::X)),
            "wineland-y" => Ok(Metric::Wineland(Axis::Y)),
            "wineland-z" => Ok(Metric::Wineland(Axis::Z)),
            "wineland-min" => Ok(Metric::WinelandMin),
            "planar-xy" => Ok(Metric::Planar(Plane::XY)),
            "planar-yz" => Ok(Metric::Planar(Plane::YZ)),
            "planar-zx" => Ok(Metric::Planar(Plane::ZX)),
            _ => Err(unknown()),
        }
    }

    /// Evaluates the metric on precomputed moments; `None` when undefined.
    pub fn eval_moments(&self, m: &MomentSet, spin: Spin) -> Option<f64> {
        match *self {
            Metric::Sorensen(axis) => xi_sorensen_moments(m, spin, axis),
            Metric::Wineland(axis) => xi_wineland_moments(m, spin, axis.unit()),
            Metric::WinelandMin => xi_wineland_min_moments(m, spin),
            Metric::Planar(plane) => xi_planar_moments(m, plane),
            Metric::PhaseUncertainty(phi) => phase_uncertainty_from_moments(m, phi),
        }
    }

    /// Evaluates the metric at a parameter point. Undefined metric values and
    /// null superpositions score `None`.
    pub fn eval_params(
        &self,
        spin: Spin,
        ops: &AngularMomentumOps,
        params: SuperpositionParams,
    ) -> Option<f64> {
        let state = superposition(spin, params).ok()?;
        let m = moments(&state, ops).ok()?;
        self.eval_moments(&m, spin)
    }
}

/// Box bounds per parameter, `[low, high]` for each of
/// `theta1, theta2, phi, phi_r`.
pub type Bounds = [[f64; 2]; 4];

/// Default parameter box: polar angles on `[0, pi]`, phases on `[0, 2*pi]`.
pub fn default_bounds() -> Bounds {
    use std::f64::consts::PI;
    [[0.0, PI], [0.0, PI], [0.0, 2.0 * PI], [0.0, 2.0 * PI]]
}

/// Optimizer budget and reproducibility options.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Options {
    /// Number of local descents from distinct starting points.
    pub restarts: usize,
    /// Objective-evaluation budget per restart.
    pub max_evals: usize,
    /// Master seed for the quasi-random start shift.
    pub seed: u64,
    /// Parameter box.
    pub bounds: Bounds,
    /// Record the per-restart best values.
    pub keep_history: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_evals: 2000,
            seed: 0,
            bounds: default_bounds(),
            keep_history: false,
        }
    }
}

/// Result of a [`minimize_metric`] run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_params: SuperpositionParams,
    pub best_value: f64,
    /// Total objective evaluations across processed restarts.
    pub evaluations: u64,
    /// Restarts actually processed (early stop on stagnation).
    pub restarts: u32,
    pub seed: u64,
    /// True when the best value stagnated (no improvement above 1e-9 over 20
    /// consecutive restarts) before the restart budget ran out.
    pub converged: bool,
    /// Per-restart best values, oldest first, when requested.
    pub history: Option<Vec<f64>>,
}

/// Absolute improvement below which a restart counts as stagnant.
const STAGNATION_TOL: f64 = 1e-9;
/// Consecutive stagnant restarts that declare convergence.
const STAGNATION_RUN: usize = 20;
/// Restarts evaluated per parallel batch; reduction stays in restart order.
const CHUNK: usize = 20;

/// Reflects an unconstrained coordinate into `[lo, hi]` (triangle-wave fold),
/// so simplex moves can cross the boundary and come back.
fn fold(x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    let period = 2.0 * width;
    let mut t = (x - lo).rem_euclid(period);
    if t > width {
        t = period - t;
    }
    lo + t
}

fn fold_point(x: &[f64; 4], bounds: &Bounds) -> SuperpositionParams {
    let f = |i: usize| fold(x[i], bounds[i][0], bounds[i][1]);
    SuperpositionParams::new(f(0), f(1), f(2), f(3))
        .expect("folded coordinates lie inside the parameter box")
}

/// First four prime-base van der Corput sequences with a seeded
/// Cranley-Patterson rotation: a low-discrepancy start set that still varies
/// with the seed.
fn start_points(options: &Options) -> Vec<[f64; 4]> {
    const BASES: [u64; 4] = [2, 3, 5, 7];
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let shift: [f64; 4] = std::array::from_fn(|_| rng.gen::<f64>());
    (0..options.restarts)
        .map(|i| {
            std::array::from_fn(|d| {
                let u = (van_der_corput(i as u64 + 1, BASES[d]) + shift[d]).fract();
                let [lo, hi] = options.bounds[d];
                lo + u * (hi - lo)
            })
        })
        .collect()
}

fn van_der_corput(mut n: u64, base: u64) -> f64 {
    let mut value = 0.0;
    let mut denom = 1.0;
    while n > 0 {
        denom *= base as f64;
        value += (n % base) as f64 / denom;
        n /= base;
    }
    value
}

struct RestartOutcome {
    params: SuperpositionParams,
    value: f64,
    evaluations: u64,
}

/// One bounded Nelder-Mead descent (reflection/expansion/contraction/shrink
/// with standard coefficients) in folded coordinates.
fn nelder_mead<F: Fn(SuperpositionParams) -> f64>(
    objective: &F,
    start: [f64; 4],
    bounds: &Bounds,
    max_evals: usize,
) -> RestartOutcome {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let n = 4usize;

    let mut evals: u64 = 0;
    let mut budget = max_evals;
    let eval = |x: &[f64; 4], evals: &mut u64| -> (SuperpositionParams, f64) {
        let p = fold_point(x, bounds);
        *evals += 1;
        (p, objective(p))
    };

    // initial simplex: start plus steps of 10% of each box width
    let mut simplex: Vec<([f64; 4], SuperpositionParams, f64)> = Vec::with_capacity(n + 1);
    let (p0, f0) = eval(&start, &mut evals);
    simplex.push((start, p0, f0));
    for d in 0..n {
        let mut x = start;
        x[d] += 0.1 * (bounds[d][1] - bounds[d][0]);
        let (p, f) = eval(&x, &mut evals);
        simplex.push((x, p, f));
    }
    budget = budget.saturating_sub(n + 1);

    while budget > 0 {
        simplex.sort_by(|a, b| a.2.partial_cmp(&b.2).expect("objective values are not NaN"));
        // converged when the simplex has collapsed in value and position
        let spread_f = simplex[n].2 - simplex[0].2;
        let spread_x: f64 = (0..n)
            .map(|d| {
                let lo = simplex.iter().map(|s| s.0[d]).fold(f64::INFINITY, f64::min);
                let hi = simplex
                    .iter()
                    .map(|s| s.0[d])
                    .fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0, f64::max);
        if (spread_f.abs() < 1e-12 * (1.0 + simplex[0].2.abs()) || !spread_f.is_finite())
            && spread_x < 1e-10
        {
            break;
        }

        let centroid: [f64; 4] =
            std::array::from_fn(|d| simplex[..n].iter().map(|s| s.0[d]).sum::<f64>() / n as f64);
        let worst = simplex[n];
        let reflected: [f64; 4] =
            std::array::from_fn(|d| centroid[d] + ALPHA * (centroid[d] - worst.0[d]));
        let (pr, fr) = eval(&reflected, &mut evals);
        budget -= 1;

        if fr < simplex[0].2 {
            // try expanding further along the same direction
            if budget > 0 {
                let expanded: [f64; 4] =
                    std::array::from_fn(|d| centroid[d] + GAMMA * (reflected[d] - centroid[d]));
                let (pe, fe) = eval(&expanded, &mut evals);
                budget -= 1;
                simplex[n] = if fe < fr {
                    (expanded, pe, fe)
                } else {
                    (reflected, pr, fr)
                };
            } else {
                simplex[n] = (reflected, pr, fr);
            }
        } else if fr < simplex[n - 1].2 {
            simplex[n] = (reflected, pr, fr);
        } else {
            // contract toward the better of worst/reflected
            let (base_x, base_f) = if fr < worst.2 {
                (reflected, fr)
            } else {
                (worst.0, worst.2)
            };
            if budget == 0 {
                break;
            }
            let contracted: [f64; 4] =
                std::array::from_fn(|d| centroid[d] + RHO * (base_x[d] - centroid[d]));
            let (pc, fc) = eval(&contracted, &mut evals);
            budget -= 1;
            if fc < base_f {
                simplex[n] = (contracted, pc, fc);
            } else {
                // shrink everything toward the best vertex
                let best = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    if budget == 0 {
                        break;
                    }
                    let x: [f64; 4] =
                        std::array::from_fn(|d| best[d] + SIGMA * (vertex.0[d] - best[d]));
                    let (p, f) = eval(&x, &mut evals);
                    budget -= 1;
                    *vertex = (x, p, f);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.2.partial_cmp(&b.2).expect("objective values are not NaN"));
    RestartOutcome {
        params: simplex[0].1,
        value: simplex[0].2,
        evaluations: evals,
    }
}

fn lex_less(a: &SuperpositionParams, b: &SuperpositionParams) -> bool {
    a.to_array() < b.to_array()
}

/// Globally minimizes a metric over the superposition family at fixed spin.
///
/// Runs `options.restarts` bounded Nelder-Mead descents from quasi-random
/// starting points, reduces results in restart order (ties broken toward the
/// lexicographically smaller parameters), and stops early once the best value
/// has stagnated for [`STAGNATION_RUN`] consecutive restarts. The result is
/// deterministic for a given seed regardless of evaluation parallelism.
pub fn minimize_metric(
    spin: Spin,
    metric: Metric,
    options: &Options,
) -> Result<OptimizationResult> {
    if options.restarts == 0 || options.max_evals == 0 {
        return Err(Error::ZeroBudget);
    }
    for [lo, hi] in options.bounds {
        if lo >= hi || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::ThetaOutOfRange(lo));
        }
    }
    let ops = make_operators(spin);
    let objective = |p: SuperpositionParams| -> f64 {
        metric.eval_params(spin, &ops, p).unwrap_or(f64::INFINITY)
    };
    let starts = start_points(options);

    let mut best: Option<(f64, SuperpositionParams)> = None;
    let mut evaluations: u64 = 0;
    let mut processed: u32 = 0;
    let mut history = options.keep_history.then(Vec::new);
    let mut stagnant_in_row = 0usize;
    let mut converged = false;

    'outer: for chunk in starts.chunks(CHUNK) {
        let outcomes: Vec<RestartOutcome> = chunk
            .par_iter()
            .map(|&start| nelder_mead(&objective, start, &options.bounds, options.max_evals))
            .collect();
        for outcome in outcomes {
            processed += 1;
            evaluations += outcome.evaluations;
            if let Some(h) = history.as_mut() {
                h.push(outcome.value);
            }
            let improved = match &best {
                None => true,
                Some((bv, bp)) => {
                    outcome.value < *bv || (outcome.value == *bv && lex_less(&outcome.params, bp))
                }
            };
            let significant = match &best {
                None => true,
                Some((bv, _)) => outcome.value < bv - STAGNATION_TOL,
            };
            if improved {
                best = Some((outcome.value, outcome.params));
            }
            if significant {
                stagnant_in_row = 0;
            } else {
                stagnant_in_row += 1;
                if stagnant_in_row >= STAGNATION_RUN {
                    converged = true;
                    break 'outer;
                }
            }
        }
    }

    let (best_value, best_params) = best.expect("at least one restart ran");
    Ok(OptimizationResult {
        best_params,
        best_value,
        evaluations,
        restarts: processed,
        seed: options.seed,
        converged,
        history,
    })
}

/// Best point of an exhaustive lattice evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridResult {
    /// Best grid point and its value; `None` when the metric was undefined on
    /// the entire lattice.
    pub best: Option<(SuperpositionParams, f64)>,
    pub points_evaluated: u64,
}

/// Exhaustively evaluates the metric on a 4-D lattice with `resolution`
/// points per dimension, endpoints included. Guarded to at most 1e8 points.
pub fn grid_oracle(spin: Spin, metric: Metric, resolution: usize) -> Result<GridResult> {
    if resolution < 3 {
        return Err(Error::GridResolution(resolution));
    }
    let total = (resolution as u128).pow(4);
    const LIMIT: u128 = 100_000_000;
    if total > LIMIT {
        return Err(Error::GridGuard {
            requested: total,
            limit: LIMIT,
        });
    }
    let bounds = default_bounds();
    let axis_values = |d: usize| -> Vec<f64> {
        let [lo, hi] = bounds[d];
        (0..resolution)
            .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
            .collect()
    };
    let grids: [Vec<f64>; 4] = std::array::from_fn(axis_values);
    let ops = make_operators(spin);

    // parallel over theta1 slices; deterministic sequential reduction
    let slice_best: Vec<Option<(f64, SuperpositionParams)>> = grids[0]
        .par_iter()
        .map(|&t1| {
            let mut best: Option<(f64, SuperpositionParams)> = None;
            for &t2 in &grids[1] {
                for &phi in &grids[2] {
                    for &phi_r in &grids[3] {
                        let p = SuperpositionParams::new(t1, t2, phi, phi_r)
                            .expect("lattice points lie inside the parameter box");
                        if let Some(v) = metric.eval_params(spin, &ops, p) {
                            let better = match &best {
                                None => true,
                                Some((bv, bp)) => v < *bv || (v == *bv && lex_less(&p, bp)),
                            };
                            if better {
                                best = Some((v, p));
                            }
                        }
                    }
                }
            }
            best
        })
        .collect();

    let mut best: Option<(f64, SuperpositionParams)> = None;
    for candidate in slice_best.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some((bv, bp)) => {
                candidate.0 < *bv || (candidate.0 == *bv && lex_less(&candidate.1, bp))
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(GridResult {
        best: best.map(|(v, p)| (p, v)),
        points_evaluated: total as u64,
    })
}

/// SplitMix64 step, used to derive independent per-run seeds (per spin in a
/// sweep, per metric in a multi-metric reproduction) from a master seed.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one spin's optimization inside a sweep.
pub fn sweep_seed(master: u64, two_j: u32) -> u64 {
    splitmix64(master ^ ((two_j as u64) << 32))
}

/// Runs [`minimize_metric`] for each spin in the list (independent derived
/// seeds), returning results sorted by spin.
pub fn sweep_j(
    spins: &[Spin],
    metric: Metric,
    options: &Options,
) -> Result<Vec<(Spin, OptimizationResult)>> {
    let mut sorted: Vec<Spin> = spins.to_vec();
    sorted.sort();
    let mut out = Vec::with_capacity(sorted.len());
    for spin in sorted {
        let per_j = Options {
            seed: sweep_seed(options.seed, spin.two_j()),
            ..options.clone()
        };
        let result = minimize_metric(spin, metric, &per_j).map_err(|e| Error::SweepEntry {
            two_j: spin.two_j(),
            source: Box::new(e),
        })?;
        out.push((spin, result));
    }
    Ok(out)
}
