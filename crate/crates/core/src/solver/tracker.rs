//! Euler–Newton path tracking for homotopies `H(x, τ)`, `τ ∈ [0, 1]`, whose
//! coefficients are explicit functions of `τ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::powu;

/// A coordinate beyond this modulus, or below its reciprocal, counts as a
/// path leaving every compact subset of the torus.
pub const DIVERGENCE_BOUND: f64 = 1e40;

/// Relative corrector tolerance while tracking; the endpoint is polished to
/// the configured Newton tolerance.
const TRACKING_TOLERANCE: f64 = 1e-7;

const CORRECTOR_ITERATIONS: usize = 3;
const MAX_STEP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackerConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub newton_tolerance: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    pub torus_threshold: f64,
    pub dedup_distance: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            initial_step: 0.05,
            min_step: 1e-7,
            newton_tolerance: 1e-10,
            max_newton_iters: 10,
            max_steps: 20_000,
            torus_threshold: 1e-8,
            dedup_distance: 1e-6,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0 < self.min_step && self.min_step < self.initial_step && self.initial_step <= MAX_STEP) {
            return Err(format!(
                "need 0 < min_step < initial_step <= {MAX_STEP}, got {} and {}",
                self.min_step, self.initial_step
            ));
        }
        for (name, v) in [
            ("newton_tolerance", self.newton_tolerance),
            ("torus_threshold", self.torus_threshold),
            ("dedup_distance", self.dedup_distance),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.max_newton_iters == 0 || self.max_steps == 0 {
            return Err("iteration limits must be positive".into());
        }
        Ok(())
    }
}

/// The map `τ ↦ s` of a polyhedral homotopy, running from `s₀` at `τ = 0`
/// to `0` at `τ = 1` as `s₀·(e^{−kτ} − e^{−k}) / (1 − e^{−k})`.
///
/// A term of weight `e` switches on around `s = 1/e`. With `k = 0` the map
/// is linear and those events crowd into a sliver of width `1/(s₀·e)` next
/// to `τ = 1`; choosing `k ≈ log(s₀·e_max)` spreads them evenly.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Schedule {
    pub s0: f64,
    pub rate: f64,
}

impl Schedule {
    pub fn for_weights(s0: f64, max_weight: f64) -> Self {
        Schedule {
            s0,
            rate: (1.0 + s0 * max_weight).ln(),
        }
    }

    /// `s(τ)` and `ds/dτ`.
    fn at(&self, tau: f64) -> (f64, f64) {
        let k = self.rate;
        if k < 1e-12 {
            return (self.s0 * (1.0 - tau), -self.s0);
        }
        let scale = self.s0 / -(-k).exp_m1();
        let e = (-k * tau).exp();
        (scale * (e - (-k).exp()), -scale * k * e)
    }
}

/// How a term's coefficient depends on `τ`.
#[derive(Clone, Debug)]
pub(crate) enum Coef {
    /// `c · exp(−weight · s(τ))`, i.e. `c · t^weight` with `t = e^{−s}`.
    Lifted { c: Complex64, weight: f64, schedule: Schedule },
    /// `(1 − τ)·start + τ·target`.
    Linear { start: Complex64, target: Complex64 },
}

impl Coef {
    /// Value and `τ`-derivative.
    fn at(&self, tau: f64) -> (Complex64, Complex64) {
        match *self {
            Coef::Lifted { c, weight, schedule } => {
                if weight == 0.0 {
                    return (c, Complex64::new(0.0, 0.0));
                }
                let (s, ds) = schedule.at(tau);
                let arg = weight * s;
                if arg > 745.0 {
                    return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                }
                let v = c * (-arg).exp();
                (v, v * (-weight * ds))
            }
            Coef::Linear { start, target } => (start + (target - start) * tau, target - start),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub exponent: Vec<i64>,
    pub coef: Coef,
}

/// A square system of equations with `τ`-dependent coefficients.
#[derive(Clone, Debug)]
pub(crate) struct Homotopy {
    pub dim: usize,
    pub equations: Vec<Vec<Term>>,
}

struct Eval {
    value: DVector<Complex64>,
    jacobian: DMatrix<Complex64>,
    dtau: DVector<Complex64>,
}

impl Homotopy {
    fn eval(&self, x: &[Complex64], tau: f64) -> Eval {
        let d = self.dim;
        let mut value = DVector::from_element(d, Complex64::new(0.0, 0.0));
        let mut dtau = value.clone();
        let mut jacobian = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (i, eq) in self.equations.iter().enumerate() {
            for term in eq {
                let (c, dc) = term.coef.at(tau);
                if c == Complex64::new(0.0, 0.0) && dc == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let m: Complex64 = x
                    .iter()
                    .zip(&term.exponent)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&xi, &e)| acc * powu(xi, e as u64));
                value[i] += c * m;
                dtau[i] += dc * m;
                for (j, &e) in term.exponent.iter().enumerate() {
                    if e > 0 {
                        jacobian[(i, j)] += c * m * (e as f64) / x[j];
                    }
                }
            }
        }
        Eval { value, jacobian, dtau }
    }

    /// One Newton update in logarithmic coordinates `z = log x`; `None`
    /// when the Jacobian is singular. With `∂H/∂z = J·diag(x)` the columns
    /// are scaled by the coordinates, which keeps the LU well conditioned
    /// when coordinates differ by many orders of magnitude.
    fn newton_step(&self, x: &[Complex64], tau: f64) -> Option<Vec<Complex64>> {
        let e = self.eval(x, tau);
        log_solve(e.jacobian, x, -e.value)
    }

    /// `dz/dτ = −(J·diag(x))⁻¹ ∂H/∂τ`.
    fn tangent(&self, x: &[Complex64], tau: f64) -> Option<Vec<Complex64>> {
        let e = self.eval(x, tau);
        log_solve(e.jacobian, x, -e.dtau)
    }

    /// Newton's method from `x` until the logarithmic update is below `tol`.
    /// Fails when the updates stop contracting.
    fn correct(&self, x: &[Complex64], tau: f64, tol: f64, iterations: usize) -> Option<Vec<Complex64>> {
        let mut x = x.to_vec();
        let mut last = f64::INFINITY;
        for _ in 0..iterations {
            let delta = self.newton_step(&x, tau)?;
            let size = norm(&delta);
            if size > last || size > 0.5 {
                return None;
            }
            x = advance(&x, &delta, 1.0);
            if size <= tol {
                return Some(x);
            }
            last = size;
        }
        None
    }
}

fn log_solve(mut jacobian: DMatrix<Complex64>, x: &[Complex64], b: DVector<Complex64>) -> Option<Vec<Complex64>> {
    for (j, &xj) in x.iter().enumerate() {
        jacobian.column_mut(j).iter_mut().for_each(|v| *v *= xj);
    }
    let delta = jacobian.lu().solve(&b)?;
    finite(delta.as_slice()).then(|| delta.iter().copied().collect())
}

/// `x ∘ exp(h·δ)`.
fn advance(x: &[Complex64], delta: &[Complex64], h: f64) -> Vec<Complex64> {
    x.iter().zip(delta).map(|(xi, d)| xi * (d * h).exp()).collect()
}

fn finite(v: &[Complex64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum PathOutcome {
    Converged { point: Vec<Complex64>, steps: usize },
    Diverged { tau: f64 },
    StepLimit { tau: f64 },
}

/// Tracks one path from `τ = 0` to `τ = 1`.
pub(crate) fn track_path(h: &Homotopy, start: &[Complex64], config: &TrackerConfig) -> PathOutcome {
    let mut tau = 0.0;
    let Some(mut x) = h.correct(start, 0.0, TRACKING_TOLERANCE, config.max_newton_iters) else {
        return PathOutcome::StepLimit { tau };
    };
    let mut step = config.initial_step;
    let mut successes = 0;
    let mut steps = 0;
    while tau < 1.0 {
        steps += 1;
        if steps > config.max_steps {
            return PathOutcome::StepLimit { tau };
        }
        let dt = step.min(1.0 - tau);
        let next_tau = if dt >= 1.0 - tau { 1.0 } else { tau + dt };
        let predicted = h.tangent(&x, tau).map(|v| advance(&x, &v, dt));
        let corrected = predicted.and_then(|p| h.correct(&p, next_tau, TRACKING_TOLERANCE, CORRECTOR_ITERATIONS));
        match corrected {
            Some(next) => {
                x = next;
                tau = next_tau;
                if x.iter().any(|z| !(z.norm() < DIVERGENCE_BOUND && z.norm() > DIVERGENCE_BOUND.recip())) {
                    return PathOutcome::Diverged { tau };
                }
                successes += 1;
                if successes == 3 {
                    step = (step * 2.0).min(MAX_STEP);
                    successes = 0;
                }
            }
            None => {
                step /= 2.0;
                successes = 0;
                if step < config.min_step {
                    return PathOutcome::StepLimit { tau };
                }
            }
        }
    }
    let point = polish(h, x, config);
    PathOutcome::Converged { point, steps }
}

/// Newton at `τ = 1` until the updates reach rounding level or stop
/// shrinking.
fn polish(h: &Homotopy, mut x: Vec<Complex64>, config: &TrackerConfig) -> Vec<Complex64> {
    let mut last = f64::INFINITY;
    for _ in 0..config.max_newton_iters {
        let Some(delta) = h.newton_step(&x, 1.0) else {
            break;
        };
        let size = norm(&delta);
        if size >= last {
            break;
        }
        x = advance(&x, &delta, 1.0);
        last = size;
        if size <= 1e-15 {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn linear(start: &[(&[i64], f64)], target: &[(&[i64], f64)]) -> Homotopy {
        let mut terms: Vec<Term> = Vec::new();
        for (e, v) in start {
            let t = target.iter().find(|(f, _)| f == e).map_or(0.0, |(_, w)| *w);
            terms.push(Term { exponent: e.to_vec(), coef: Coef::Linear { start: c(*v), target: c(t) } });
        }
        Homotopy { dim: 1, equations: vec![terms] }
    }

    #[test]
    fn zero_length_path() {
        // start and target agree: x² − 1 throughout
        let h = linear(&[(&[2], 1.0), (&[0], -1.0)], &[(&[2], 1.0), (&[0], -1.0)]);
        match track_path(&h, &[c(1.0)], &TrackerConfig::default()) {
            PathOutcome::Converged { point, .. } => assert!((point[0] - c(1.0)).norm() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn square_root_path() {
        // x² − (1 + 3τ) from x = 1 ends at x = 2
        let h = linear(&[(&[2], 1.0), (&[0], -1.0)], &[(&[2], 1.0), (&[0], -4.0)]);
        match track_path(&h, &[c(1.0)], &TrackerConfig::default()) {
            PathOutcome::Converged { point, .. } => assert!((point[0] - c(2.0)).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lifted_path() {
        // x² − t: solutions ±t^{1/2}, start at s = 10
        let s0 = 10.0;
        let schedule = Schedule::for_weights(s0, 1.0);
        let h = Homotopy {
            dim: 1,
            equations: vec![vec![
                Term { exponent: vec![2], coef: Coef::Lifted { c: c(1.0), weight: 0.0, schedule } },
                Term { exponent: vec![0], coef: Coef::Lifted { c: c(-1.0), weight: 1.0, schedule } },
            ]],
        };
        let start = (-s0 / 2.0f64).exp();
        match track_path(&h, &[c(start)], &TrackerConfig::default()) {
            PathOutcome::Converged { point, .. } => assert!((point[0] - c(1.0)).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_to_infinity_diverges() {
        // (1 − τ)x − 1: x = 1/(1 − τ)
        let h = Homotopy {
            dim: 1,
            equations: vec![vec![
                Term { exponent: vec![1], coef: Coef::Linear { start: c(1.0), target: c(0.0) } },
                Term { exponent: vec![0], coef: Coef::Linear { start: c(-1.0), target: c(-1.0) } },
            ]],
        };
        let out = track_path(&h, &[c(1.0)], &TrackerConfig::default());
        assert!(!matches!(out, PathOutcome::Converged { .. }), "{out:?}");
    }

    #[test]
    fn schedule_endpoints_and_derivative() {
        for (s0, w) in [(30.0, 0.0), (30.0, 1.0), (30.0, 600.0), (5.0, 2.5)] {
            let sch = Schedule::for_weights(s0, w);
            assert!((sch.at(0.0).0 - s0).abs() < 1e-12 * s0);
            assert!(sch.at(1.0).0.abs() < 1e-12);
            for tau in [0.1, 0.5, 0.9, 0.999] {
                let h = 1e-6;
                let fd = (sch.at(tau + h).0 - sch.at(tau - h).0) / (2.0 * h);
                let (_, ds) = sch.at(tau);
                assert!((fd - ds).abs() < 1e-5 * ds.abs().max(1.0), "{s0} {w} {tau}: {fd} vs {ds}");
                assert!(ds < 0.0);
            }
        }
    }

    #[test]
    fn stiff_lifted_path() {
        // x² − t^{400}: a late term that a linear schedule squeezes into
        // the last 1e-4 of the parameter range
        let schedule = Schedule::for_weights(30.0, 400.0);
        let h = Homotopy {
            dim: 1,
            equations: vec![vec![
                Term { exponent: vec![2], coef: Coef::Lifted { c: c(1.0), weight: 0.0, schedule } },
                Term { exponent: vec![1], coef: Coef::Lifted { c: c(-3.0), weight: 1.0, schedule } },
                Term { exponent: vec![0], coef: Coef::Lifted { c: c(2.0), weight: 400.0, schedule } },
            ]],
        };
        // start: x² = 3t x at s = 30, the root on the cell x = 3e^{−30}
        let start = 3.0 * (-30.0f64).exp();
        match track_path(&h, &[c(start)], &TrackerConfig::default()) {
            // x² − 3x + 2 = 0, the path ends on one of its roots 1 or 2
            PathOutcome::Converged { point, .. } => {
                assert!((point[0] - c(1.0)).norm() < 1e-10 || (point[0] - c(2.0)).norm() < 1e-10, "{point:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        assert!(TrackerConfig::default().validate().is_ok());
        let bad = TrackerConfig { initial_step: 0.5, ..TrackerConfig::default() };
        assert!(bad.validate().is_err());
        let bad = TrackerConfig { newton_tolerance: 0.0, ..TrackerConfig::default() };
        assert!(bad.validate().is_err());
    }
}
