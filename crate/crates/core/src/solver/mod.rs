//! Polyhedral homotopy continuation.
//!
//! Every mixed cell of a random lifting contributes a binomial start system
//! whose solutions are tracked along the cell's polyhedral homotopy. For
//! systems with random coefficients this reaches the target directly. For
//! structured targets such as likelihood equations the polyhedral phase
//! solves a random system on the same supports, and a straight-line
//! coefficient homotopy carries its solutions to the target.

mod binomial;
mod homotopy;
mod tracker;

pub use binomial::{binomial_start_solutions, solve_binomial, StartSystem};
pub use tracker::{TrackerConfig, DIVERGENCE_BOUND};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixed::{mixed_volume_cross_check, support_polytopes, MixedSubdivision};
use crate::ml::{build_ml_system, ml_mixed_volume, TorusPoint};
use crate::model::{sample_generic_system, DataVector, PolynomialSystem, RandomSeed};
use homotopy::{linear_homotopy, polyhedral_homotopy};
use tracker::{norm, track_path, PathOutcome};

/// Salt for the seed of a retry after a count/mixed-volume disagreement.
pub const RETRY_SALT: u64 = 0x7e7;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub tracked: u64,
    pub converged: u64,
    pub diverged: u64,
    pub step_limit: u64,
    /// Converged but failing the residual or torus test.
    pub rejected: u64,
    /// Valid endpoints that duplicate an earlier one.
    pub merged: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub point: TorusPoint,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub count: u64,
    pub mixed_volume: u64,
    pub agreement: bool,
    pub paths: PathStats,
    pub solutions: Vec<Solution>,
    pub variables: Vec<String>,
    pub config: TrackerConfig,
    pub seed: RandomSeed,
    pub lifting_seed: Option<RandomSeed>,
    /// Whether a coefficient homotopy followed the polyhedral one.
    pub coefficient_phase: bool,
}

/// `true` iff every coordinate of every solution exceeds `threshold` in
/// modulus.
pub fn verify_torus_membership(report: &SolveReport, threshold: f64) -> bool {
    report.solutions.iter().all(|s| s.point.min_modulus() > threshold)
}

/// Solves a square system with generic coefficients by the polyhedral
/// homotopy on its own coefficients.
pub fn solve_system(system: &PolynomialSystem, seed: RandomSeed, config: &TrackerConfig) -> Result<SolveReport> {
    check_config(config)?;
    if !system.is_square() {
        return Err(Error::NotSquare {
            equations: system.k(),
            variables: system.n(),
        });
    }
    let supports = system.supports();
    let check = mixed_volume_cross_check(&support_polytopes(&supports)?, &supports, seed)?;
    let endpoints = polyhedral_phase(system, &check.subdivision, config)?;
    let variables = (1..=system.n()).map(|i| format!("x{i}")).collect();
    Ok(finish(system, system.n(), endpoints, check.mixed_volume, Some(check.subdivision.lifting_seed), variables, seed, config, false))
}

/// Solves `𝓛(F)` for data `u`: polyhedral homotopy on a random system with
/// the supports of `𝓛(F)`, then a coefficient homotopy to `𝓛(F)` itself.
pub fn solve_ml_system(f: &PolynomialSystem, u: &DataVector, seed: RandomSeed, config: &TrackerConfig) -> Result<SolveReport> {
    check_config(config)?;
    let ml = build_ml_system(f, u)?;
    let variables = ml.variable_names();
    let Some(check) = ml_mixed_volume(&ml, seed)? else {
        return Ok(finish(ml.equations(), ml.n(), Vec::new(), 0, None, variables, seed, config, false));
    };
    let target = ml.equations();
    let start = sample_generic_system(&target.supports(), seed.derive(RandomSeed::START))?;
    let midpoints = polyhedral_phase(&start, &check.subdivision, config)?;
    let gamma = crate::model::unit_circle(&mut seed.rng(RandomSeed::START));
    let h = linear_homotopy(&start, target, gamma);
    let endpoints = midpoints
        .into_par_iter()
        .map(|outcome| match outcome {
            PathOutcome::Converged { point, .. } => track_path(&h, &point, config),
            other => other,
        })
        .collect::<Vec<_>>();
    Ok(finish(target, ml.n(), endpoints, check.mixed_volume, Some(check.subdivision.lifting_seed), variables, seed, config, true))
}

/// A solve and, when its count disagreed with the mixed volume, one retry
/// with a derived seed.
#[derive(Clone, Debug, Serialize)]
pub struct RetriedSolve {
    pub first: SolveReport,
    pub retry: Option<SolveReport>,
}

impl RetriedSolve {
    pub fn final_report(&self) -> &SolveReport {
        self.retry.as_ref().unwrap_or(&self.first)
    }

    pub fn agreement(&self) -> bool {
        self.final_report().agreement
    }
}

pub fn with_retry(seed: RandomSeed, mut solve: impl FnMut(RandomSeed) -> Result<SolveReport>) -> Result<RetriedSolve> {
    let first = solve(seed)?;
    let retry = if first.agreement {
        None
    } else {
        log::warn!("count {} differs from mixed volume {}, retrying", first.count, first.mixed_volume);
        Some(solve(seed.derive(RETRY_SALT))?)
    };
    Ok(RetriedSolve { first, retry })
}

fn check_config(config: &TrackerConfig) -> Result<()> {
    config.validate().map_err(Error::InvalidArgument)
}

/// Tracks every start solution of every cell; outcomes in cell order.
fn polyhedral_phase(system: &PolynomialSystem, subdivision: &MixedSubdivision, config: &TrackerConfig) -> Result<Vec<PathOutcome>> {
    let starts = subdivision
        .cells
        .iter()
        .map(|cell| {
            let start = binomial_start_solutions(cell, system)?;
            let h = polyhedral_homotopy(system, &subdivision.lifting, cell);
            Ok(start.solutions.into_iter().map(move |s| (h.clone(), s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<_> = starts.into_iter().flatten().collect();
    Ok(jobs.par_iter().map(|(h, s)| track_path(h, s, config)).collect())
}

#[allow(clippy::too_many_arguments)]
fn finish(
    target: &PolynomialSystem,
    n: usize,
    outcomes: Vec<PathOutcome>,
    mixed_volume: u64,
    lifting_seed: Option<RandomSeed>,
    variables: Vec<String>,
    seed: RandomSeed,
    config: &TrackerConfig,
    coefficient_phase: bool,
) -> SolveReport {
    let mut paths = PathStats {
        tracked: outcomes.len() as u64,
        ..PathStats::default()
    };
    let mut solutions: Vec<Solution> = Vec::new();
    for outcome in outcomes {
        match outcome {
            PathOutcome::Converged { point, .. } => {
                paths.converged += 1;
                let residual = target.residual(&point);
                let in_torus = point.iter().all(|z| z.norm() > config.torus_threshold);
                if !(residual < 100.0 * config.newton_tolerance) || !in_torus {
                    paths.rejected += 1;
                    continue;
                }
                if solutions.iter().any(|s| same_point(&s.point.coordinates, &point, config.dedup_distance)) {
                    paths.merged += 1;
                    continue;
                }
                solutions.push(Solution {
                    point: TorusPoint::new(point, n),
                    residual,
                });
            }
            PathOutcome::Diverged { .. } => paths.diverged += 1,
            PathOutcome::StepLimit { .. } => paths.step_limit += 1,
        }
    }
    let count = solutions.len() as u64;
    SolveReport {
        count,
        mixed_volume,
        agreement: count == mixed_volume,
        paths,
        solutions,
        variables,
        config: config.clone(),
        seed,
        lifting_seed,
        coefficient_phase,
    }
}

/// Relative sup-norm distance below `tol`.
fn same_point(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) <= tol * norm(a).max(norm(b)).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ml::{hat_transform, integer_polynomial, lambda_rescale, Direction};
    use crate::model::{Coefficient, Exponent, SparsePolynomial};

    fn quartic_f() -> PolynomialSystem {
        PolynomialSystem::new(2, vec![integer_polynomial(2, &[(&[4, 0], 2), (&[0, 3], 3), (&[0, 0], -5)])]).unwrap()
    }

    #[test]
    fn linear_model_single_solution() {
        let f = PolynomialSystem::new(1, vec![integer_polynomial(1, &[(&[1], 1), (&[0], -1)])]).unwrap();
        let u = DataVector::new(vec![0.7]).unwrap();
        let r = solve_ml_system(&f, &u, RandomSeed(1), &TrackerConfig::default()).unwrap();
        assert!(r.agreement, "{r:?}");
        assert_eq!(r.count, 1);
        let p = &r.solutions[0].point.coordinates;
        assert!((p[0] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((p[1] - Complex64::new(0.7, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn quartic_has_twelve_critical_points() {
        let u = DataVector::sample(2, RandomSeed(42));
        let r = solve_ml_system(&quartic_f(), &u, RandomSeed(42), &TrackerConfig::default()).unwrap();
        assert_eq!(r.mixed_volume, 12);
        assert_eq!(r.count, 12, "{:?}", r.paths);
        assert!(verify_torus_membership(&r, 1e-8));
        let hat = build_ml_system(&hat_transform(&quartic_f()).unwrap(), &u).unwrap();
        for s in &r.solutions {
            let moved = lambda_rescale(&s.point, Direction::Forward).unwrap();
            assert!(hat.equations().residual(&moved.coordinates) < 1e-8);
        }
    }

    #[test]
    fn same_supports_other_coefficients() {
        let g = PolynomialSystem::new(2, vec![integer_polynomial(2, &[(&[4, 0], -7), (&[0, 3], 1), (&[0, 0], 2)])]).unwrap();
        let u = DataVector::sample(2, RandomSeed(8));
        let r = solve_ml_system(&g, &u, RandomSeed(8), &TrackerConfig::default()).unwrap();
        assert_eq!(r.count, 12);
    }

    #[test]
    fn dense_quadrics() {
        let sys = sample_generic_system(
            &[
                integer_polynomial(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])
                    .support("q")
                    .unwrap(),
                integer_polynomial(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1), (&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])
                    .support("q")
                    .unwrap(),
            ],
            RandomSeed(2),
        )
        .unwrap();
        let r = solve_system(&sys, RandomSeed(2), &TrackerConfig::default()).unwrap();
        assert_eq!((r.count, r.mixed_volume), (4, 4));
        for s in &r.solutions {
            assert!(sys.residual(&s.point.coordinates) < 1e-8);
        }
    }

    #[test]
    fn deterministic_reports() {
        let u = DataVector::sample(2, RandomSeed(5));
        let a = solve_ml_system(&quartic_f(), &u, RandomSeed(5), &TrackerConfig::default()).unwrap();
        let b = solve_ml_system(&quartic_f(), &u, RandomSeed(5), &TrackerConfig::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn torus_check() {
        let mut r = solve_ml_system(
            &PolynomialSystem::new(1, vec![integer_polynomial(1, &[(&[1], 1), (&[0], -1)])]).unwrap(),
            &DataVector::new(vec![0.7]).unwrap(),
            RandomSeed(1),
            &TrackerConfig::default(),
        )
        .unwrap();
        assert!(verify_torus_membership(&r, 1e-8));
        r.solutions[0].point.coordinates[1] = Complex64::new(0.0, 0.0);
        assert!(!verify_torus_membership(&r, 1e-8));
        r.solutions.clear();
        assert!(verify_torus_membership(&r, 1e-8));
    }

    #[test]
    fn non_square_rejected() {
        let f = SparsePolynomial::from_terms(2, [(Exponent::new(vec![1, 0]).unwrap(), Coefficient::from_integer(1))]);
        let sys = PolynomialSystem::new(2, vec![f]).unwrap();
        assert!(matches!(solve_system(&sys, RandomSeed(0), &TrackerConfig::default()), Err(Error::NotSquare { .. })));
    }
}
