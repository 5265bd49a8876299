//! The two homotopies the solver runs: the polyhedral homotopy attached to
//! one mixed cell, and a straight-line coefficient homotopy between two
//! systems with the same supports.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::tracker::{Coef, Homotopy, Schedule, Term};
use crate::mixed::{lifted_value, MixedCell};
use crate::model::{rational_to_f64, PolynomialSystem};

/// `−log t` at the start of every polyhedral path: terms off the cell carry
/// at most `e^{−START_S}` there.
pub(crate) const START_S: f64 = 30.0;

/// Substituting `x = y·t^γ` into `Σ c_a x^a t^{ω(a)}` and dividing equation
/// `i` by its smallest power `t^{βᵢ}` gives `Σ c_a y^a t^{e_a}` with `e_a ≥ 0`,
/// zero exactly on the cell's edge. Powers are rescaled so the smallest
/// positive one is 1.
pub(crate) fn polyhedral_homotopy(system: &PolynomialSystem, lifting: &[Vec<i64>], cell: &MixedCell) -> Homotopy {
    let gamma = &cell.normal;
    let mut raw: Vec<Vec<(Vec<i64>, Complex64, BigRational)>> = Vec::with_capacity(system.k());
    for (i, poly) in system.polynomials().iter().enumerate() {
        let (p, _) = &cell.points[i];
        let base = lifted_value(p, lifted_at(poly, &lifting[i], p), gamma);
        raw.push(
            poly.terms()
                .zip(&lifting[i])
                .map(|((e, c), &w)| {
                    let power = lifted_value(e, w, gamma) - &base;
                    debug_assert!(!power.is_negative());
                    (e.to_vec(), c.value(), power)
                })
                .collect(),
        );
    }
    let smallest = raw
        .iter()
        .flatten()
        .map(|(_, _, e)| e)
        .filter(|e| e.is_positive())
        .min()
        .cloned();
    let weights: Vec<Vec<(Vec<i64>, Complex64, f64)>> = raw
        .into_iter()
        .map(|eq| {
            eq.into_iter()
                .map(|(exponent, c, power)| {
                    let weight = match &smallest {
                        Some(m) if !power.is_zero() => rational_to_f64(&(power / m)),
                        _ => 0.0,
                    };
                    (exponent, c, weight)
                })
                .collect()
        })
        .collect();
    let largest = weights.iter().flatten().map(|t| t.2).fold(0.0, f64::max);
    let schedule = Schedule::for_weights(START_S, largest);
    let equations = weights
        .into_iter()
        .map(|eq| {
            eq.into_iter()
                .map(|(exponent, c, weight)| Term {
                    exponent,
                    coef: Coef::Lifted { c, weight, schedule },
                })
                .collect()
        })
        .collect();
    Homotopy {
        dim: system.n(),
        equations,
    }
}

fn lifted_at(poly: &crate::model::SparsePolynomial, lifting: &[i64], point: &[i64]) -> i64 {
    poly.exponents()
        .zip(lifting)
        .find(|(e, _)| e.entries() == point)
        .map(|(_, &w)| w)
        .expect("cell point belongs to the support")
}

/// `(1 − τ)·start + τ·target`, term by term. Both systems must have the same
/// supports.
pub(crate) fn linear_homotopy(start: &PolynomialSystem, target: &PolynomialSystem, gamma: Complex64) -> Homotopy {
    let equations = start
        .polynomials()
        .iter()
        .zip(target.polynomials())
        .map(|(g, f)| {
            debug_assert!(g.exponents().eq(f.exponents()));
            g.terms()
                .map(|(e, c)| Term {
                    exponent: e.to_vec(),
                    coef: Coef::Linear {
                        start: gamma * c.value(),
                        target: f.coefficient(e).map_or(Complex64::new(0.0, 0.0), |t| t.value()),
                    },
                })
                .collect()
        })
        .collect();
    Homotopy {
        dim: start.n(),
        equations,
    }
}
