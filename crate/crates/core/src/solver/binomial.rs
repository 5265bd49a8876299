//! Torus solutions of binomial systems `c_p·yᵖ + c_q·y^q = 0`.
//!
//! With `V` the matrix of rows `q − p` the system reads `y^V = r`. Unimodular
//! row operations bring `V` to upper-triangular `H = UV` without changing the
//! solution set, after which `y` is found coordinate by coordinate from the
//! bottom, working with logarithms so that large exponents do not overflow.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::mixed::MixedCell;
use crate::model::{Exponent, PolynomialSystem};

/// Start solutions for one mixed cell.
#[derive(Clone, Debug)]
pub struct StartSystem {
    pub cell: MixedCell,
    /// `(c_p, c_q)` for every equation.
    pub coefficients: Vec<(Complex64, Complex64)>,
    pub solutions: Vec<Vec<Complex64>>,
}

impl StartSystem {
    /// Largest `|c_p yᵖ + c_q y^q| / (|c_p yᵖ| + |c_q y^q|)` over equations
    /// and solutions.
    pub fn residual(&self) -> f64 {
        self.solutions
            .iter()
            .flat_map(|y| {
                self.cell.points.iter().zip(&self.coefficients).map(move |((p, q), (cp, cq))| {
                    let a = cp * crate::model::monomial(y, p);
                    let b = cq * crate::model::monomial(y, q);
                    (a + b).norm() / (a.norm() + b.norm())
                })
            })
            .fold(0.0, f64::max)
    }
}

/// Solves the binomial system the cell selects from `system`, whose `i`-th
/// polynomial must have the `i`-th support of the cell.
pub fn binomial_start_solutions(cell: &MixedCell, system: &PolynomialSystem) -> Result<StartSystem> {
    let d = cell.points.len();
    if system.k() != d || system.n() != d {
        return Err(Error::NotSquare {
            equations: system.k(),
            variables: system.n(),
        });
    }
    let coefficients = cell
        .points
        .iter()
        .zip(system.polynomials())
        .map(|((p, q), poly)| {
            let get = |e: &Vec<i64>| {
                Exponent::new(e.clone())
                    .and_then(|e| poly.coefficient(&e).map(|c| c.value()))
                    .ok_or_else(|| Error::Internal(format!("cell point {e:?} is not in the support")))
            };
            Ok((get(p)?, get(q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let v: Vec<Vec<i64>> = cell.points.iter().map(|(p, q)| q.iter().zip(p).map(|(a, b)| a - b).collect()).collect();
    // y^(q−p) = −c_p / c_q
    let rhs: Vec<Complex64> = coefficients.iter().map(|(cp, cq)| -cp / cq).collect();
    let solutions = solve_binomial(&v, &rhs)?;
    if solutions.len() as u64 != cell.det {
        return Err(Error::Internal(format!(
            "binomial system gave {} solutions, cell volume is {}",
            solutions.len(),
            cell.det
        )));
    }
    Ok(StartSystem {
        cell: cell.clone(),
        coefficients,
        solutions,
    })
}

/// All solutions of `∏ⱼ yⱼ^{V_ij} = rᵢ` in `(ℂ*)ᵈ`; there are `|det V|`.
pub fn solve_binomial(v: &[Vec<i64>], r: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let d = v.len();
    let (h, u) = triangularize(v);
    if (0..d).any(|k| h[k][k] == 0) {
        return Err(Error::Internal("binomial exponent matrix is singular".into()));
    }
    let log_r: Vec<Complex64> = r.iter().map(|z| z.ln()).collect();
    let log_rhs: Vec<Complex64> = (0..d)
        .map(|k| (0..d).map(|i| log_r[i] * u[k][i] as f64).sum())
        .collect();

    // Partial solutions in log form, filled from the last coordinate.
    let mut partial: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); d]];
    for k in (0..d).rev() {
        let hk = h[k][k];
        let mut next = Vec::with_capacity(partial.len() * hk.unsigned_abs() as usize);
        for logs in &partial {
            let known: Complex64 = (k + 1..d).map(|j| logs[j] * h[k][j] as f64).sum();
            let base = (log_rhs[k] - known) / hk as f64;
            for m in 0..hk.unsigned_abs() {
                let mut l = logs.clone();
                l[k] = base + Complex64::new(0.0, TAU * m as f64 / hk as f64);
                next.push(l);
            }
        }
        partial = next;
    }
    let solutions = partial.into_iter().map(|logs| logs.into_iter().map(|l| l.exp()).collect()).collect();
    Ok(solutions)
}

/// Returns `(H, U)` with `U` unimodular and `H = U·V` upper triangular.
fn triangularize(v: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let d = v.len();
    let mut h: Vec<Vec<i64>> = v.to_vec();
    let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for c in 0..d {
        loop {
            // smallest nonzero |entry| in column c at or below the diagonal
            let Some(p) = (c..d).filter(|&i| h[i][c] != 0).min_by_key(|&i| h[i][c].abs()) else {
                break;
            };
            h.swap(c, p);
            u.swap(c, p);
            let mut done = true;
            for i in c + 1..d {
                if h[i][c] == 0 {
                    continue;
                }
                let f = h[i][c] / h[c][c];
                for j in 0..d {
                    h[i][j] -= f * h[c][j];
                    u[i][j] -= f * u[c][j];
                }
                if h[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
    }
    (h, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::det_i64;
    use crate::model::RandomSeed;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Signed;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_roots() {
        let sols = solve_binomial(&[vec![2]], &[c(4.0, 0.0)]).unwrap();
        assert_eq!(sols.len(), 2);
        let mut re: Vec<f64> = sols.iter().map(|s| s[0].re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.0).abs() < 1e-14 && (re[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn negative_exponents_and_unimodular_systems() {
        let sols = solve_binomial(&[vec![-3]], &[c(0.0, 8.0)]).unwrap();
        assert_eq!(sols.len(), 3);
        for s in &sols {
            assert!((s[0].powi(-3) - c(0.0, 8.0)).norm() < 1e-12);
        }
        let sols = solve_binomial(&[vec![1, 1], vec![0, 1]], &[c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0][0] - c(2.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cell_start_system() {
        let cell = MixedCell {
            edges: vec![(0, 1)],
            points: vec![(vec![0], vec![2])],
            normal: vec![BigRational::from_integer(BigInt::from(0))],
            det: 2,
        };
        let f = crate::ml::integer_polynomial(1, &[(&[2], 1), (&[0], -9)]);
        let start = binomial_start_solutions(&cell, &PolynomialSystem::new(1, vec![f]).unwrap()).unwrap();
        assert_eq!(start.solutions.len(), 2);
        assert!(start.residual() < 1e-14);
    }

    #[test]
    fn random_matrices() {
        let mut rng = RandomSeed(3).rng(0);
        for trial in 0..60 {
            let d = 1 + trial % 4;
            let v: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.random_range(-3..4)).collect()).collect();
            let det = det_i64(&v).abs();
            if det == BigInt::from(0) {
                continue;
            }
            let r: Vec<Complex64> = (0..d).map(|_| crate::model::unit_circle(&mut rng) * rng.random_range(0.5..2.0)).collect();
            let sols = solve_binomial(&v, &r).unwrap();
            assert_eq!(BigInt::from(sols.len()), det);
            for s in &sols {
                for (row, ri) in v.iter().zip(&r) {
                    let lhs: Complex64 = row.iter().zip(s).map(|(&e, y)| y.powi(e as i32)).product();
                    assert!((lhs - ri).norm() < 1e-10 * ri.norm(), "{v:?}");
                }
            }
            // pairwise distinct
            for i in 0..sols.len() {
                for j in i + 1..sols.len() {
                    let dist = sols[i].iter().zip(&sols[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    assert!(dist > 1e-8);
                }
            }
        }
    }
}
