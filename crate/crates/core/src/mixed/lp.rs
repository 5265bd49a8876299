//! Exact feasibility of `{γ ∈ ℝᵈ : Eγ = e, Gγ ≤ g}` with integer data.
//!
//! Phase-one simplex on an integer tableau with fraction-free pivoting: the
//! true tableau is `T / D` where `D` is the previous pivot, and every update
//! divides exactly. Bland's rule prevents cycling. The tableau runs in `i128`
//! with checked arithmetic and is recomputed with big integers on overflow.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// One linear constraint `row·γ (= or ≤) rhs`.
#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub row: Vec<i64>,
    pub rhs: i64,
    pub equality: bool,
}

trait Ring: Clone + Sized {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sign(&self) -> Ordering;
}

impl Ring for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Whether some real `γ` satisfies every constraint.
pub(crate) fn feasible(dim: usize, constraints: &[Constraint]) -> bool {
    if constraints.is_empty() {
        return true;
    }
    match run::<i128>(dim, constraints) {
        Some(answer) => answer,
        None => run::<BigInt>(dim, constraints).expect("big-integer tableau cannot overflow"),
    }
}

/// Columns: `γ⁺ (dim)`, `γ⁻ (dim)`, one slack per inequality, one
/// artificial per row, then the right-hand side. The last row holds the
/// phase-one reduced costs and minus the artificial sum.
fn run<T: Ring>(dim: usize, constraints: &[Constraint]) -> Option<bool> {
    let m = constraints.len();
    let slacks = constraints.iter().filter(|c| !c.equality).count();
    let art0 = 2 * dim + slacks;
    let cols = art0 + m;
    let rhs = cols;

    let mut t: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut basis = Vec::with_capacity(m);
    let mut slack = 2 * dim;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![T::zero(); cols + 1];
        for (j, &v) in c.row.iter().enumerate() {
            row[j] = T::from_i64(v);
            row[dim + j] = T::from_i64(v).neg();
        }
        if !c.equality {
            row[slack] = T::one();
            slack += 1;
        }
        row[rhs] = T::from_i64(c.rhs);
        if c.rhs < 0 {
            for v in row.iter_mut() {
                *v = v.neg();
            }
        }
        row[art0 + i] = T::one();
        basis.push(art0 + i);
        t.push(row);
    }
    let mut cost = vec![T::zero(); cols + 1];
    for j in (0..art0).chain(std::iter::once(rhs)) {
        let mut acc = T::zero();
        for row in &t {
            acc = acc.sub(&row[j])?;
        }
        cost[j] = acc;
    }
    t.push(cost);

    let mut denom = T::one();
    loop {
        // Bland: lowest-index column with negative reduced cost.
        let Some(s) = (0..cols).find(|&j| t[m][j].sign() == Ordering::Less) else {
            break;
        };
        let mut pivot: Option<usize> = None;
        for i in 0..m {
            if t[i][s].sign() != Ordering::Greater {
                continue;
            }
            pivot = Some(match pivot {
                None => i,
                Some(r) => {
                    // compare t[i][rhs]/t[i][s] with t[r][rhs]/t[r][s]
                    let lhs = t[i][rhs].mul(&t[r][s])?;
                    let rhs_v = t[r][rhs].mul(&t[i][s])?;
                    match lhs.sub(&rhs_v)?.sign() {
                        Ordering::Less => i,
                        Ordering::Equal if basis[i] < basis[r] => i,
                        _ => r,
                    }
                }
            });
        }
        // The phase-one objective is bounded below by zero.
        let r = pivot.expect("phase-one problem is bounded");
        let prs = t[r][s].clone();
        for i in 0..=m {
            if i == r {
                continue;
            }
            let tis = t[i][s].clone();
            for j in 0..=cols {
                let v = prs.mul(&t[i][j])?.sub(&tis.mul(&t[r][j])?)?;
                t[i][j] = v.div_exact(&denom);
            }
        }
        denom = prs;
        basis[r] = s;
    }
    // feasible iff the remaining artificial sum is zero
    Some(t[m][rhs].sign() == Ordering::Equal)
}
