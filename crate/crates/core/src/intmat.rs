//! Exact integer linear algebra on small dense matrices.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn det_i64(rows: &[Vec<i64>]) -> BigInt {
    det(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
}

/// Rank of an integer matrix together with the pivot columns of its
/// row echelon form.
pub fn rank_pivots(rows: &[Vec<i64>]) -> (usize, Vec<usize>) {
    rank_pivots_big(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
}

pub fn rank_pivots_big(mut m: Vec<Vec<BigInt>>) -> (usize, Vec<usize>) {
    let Some(first) = m.first() else {
        return (0, Vec::new());
    };
    let cols = first.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                let v = &m[i][j] * &a - &m[r][j] * &b;
                m[i][j] = v;
            }
            let g = m[i].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in m[i].iter_mut() {
                    *v /= &g;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (r, pivots)
}

/// Solves the square system `a·x = b` over the rationals. `None` when `a` is
/// singular.
pub fn solve_rational(a: &[Vec<i64>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r: Vec<BigRational> = row.iter().map(|&v| BigRational::from_integer(v.into())).collect();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in c..=n {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &m[i][j] - &f * &m[c][j];
                    m[i][j] = v;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// An oriented affine hyperplane `{x : normal·x = offset}` with integer data.
///
/// When built through `d` points the normal is the cofactor vector of their
/// difference matrix, so `|normal·p − offset|` is `d!` times the volume of the
/// simplex spanned by those points and `p`.
#[derive(Clone, Debug)]
pub(crate) struct Hyperplane {
    normal: Vec<BigInt>,
    offset: BigInt,
    small: Option<(Vec<i128>, i128)>,
}

impl Hyperplane {
    /// Hyperplane through `d` points of `ℤᵈ` (`d ≥ 2`).
    pub fn through(points: &[&[i64]]) -> Self {
        let d = points[0].len();
        debug_assert_eq!(points.len(), d);
        let base = points[0];
        let diffs: Vec<Vec<BigInt>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| BigInt::from(*a) - BigInt::from(*b)).collect())
            .collect();
        let normal: Vec<BigInt> = (0..d)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = diffs
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let m = det(minor);
                if j % 2 == 0 {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let offset = dot_big(&normal, base);
        Self::from_parts(normal, offset)
    }

    pub fn from_primitive(normal: Vec<BigInt>, offset: BigInt) -> Self {
        Self::from_parts(normal, offset)
    }

    fn from_parts(normal: Vec<BigInt>, offset: BigInt) -> Self {
        let small = normal
            .iter()
            .map(|v| v.to_i128())
            .collect::<Option<Vec<_>>>()
            .zip(offset.to_i128());
        Hyperplane { normal, offset, small }
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn is_degenerate(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    pub fn flipped(&self) -> Self {
        Self::from_parts(self.normal.iter().map(|v| -v).collect(), -&self.offset)
    }

    /// `normal·p − offset`.
    pub fn eval(&self, p: &[i64]) -> BigInt {
        if let Some(v) = self.eval_small(p) {
            return BigInt::from(v);
        }
        dot_big(&self.normal, p) - &self.offset
    }

    fn eval_small(&self, p: &[i64]) -> Option<i128> {
        let (normal, offset) = self.small.as_ref()?;
        let mut acc: i128 = 0;
        for (n, &x) in normal.iter().zip(p) {
            acc = acc.checked_add(n.checked_mul(x as i128)?)?;
        }
        acc.checked_sub(*offset)
    }

    pub fn side(&self, p: &[i64]) -> Ordering {
        match self.eval_small(p) {
            Some(v) => v.cmp(&0),
            None => (dot_big(&self.normal, p) - &self.offset).sign_cmp(),
        }
    }

    /// Primitive normal and offset, orientation kept.
    pub fn primitive(&self) -> (Vec<BigInt>, BigInt) {
        let g = self.normal.iter().fold(self.offset.abs(), |g, v| g.gcd(v));
        if g.is_zero() || g.is_one() {
            return (self.normal.clone(), self.offset.clone());
        }
        (self.normal.iter().map(|v| v / &g).collect(), &self.offset / &g)
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub(crate) fn dot_big(a: &[BigInt], p: &[i64]) -> BigInt {
    a.iter().zip(p).map(|(x, &y)| x * BigInt::from(y)).sum()
}

/// `⟨w, p⟩` in 128-bit arithmetic. Panics on overflow, which needs
/// coordinates far outside any polynomial exponent range.
pub fn dot_i128(w: &[i64], p: &[i64]) -> i128 {
    w.iter()
        .zip(p)
        .try_fold(0i128, |acc, (&a, &b)| acc.checked_add((a as i128).checked_mul(b as i128)?))
        .expect("integer dot product overflowed i128")
}
