//! Sparse polynomials with complex coefficients, polynomial systems and
//! data vectors.
//!
//! Exponents are dense vectors of nonnegative 64-bit integers; a polynomial
//! is a map from exponent to coefficient that never stores an exact zero.
//! Coefficients read from documents keep their exact rational form next to
//! the floating value, generated coefficients are float-only.

mod json;

pub(crate) use json::format_rational;
pub use json::{parse_decimal, parse_rational, parse_system, serialize_system, ParsedSystem, SystemDocument};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An exponent vector `α ∈ ℕᵈ`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Vec<i64>);

impl Exponent {
    /// Returns `None` when an entry is negative.
    pub fn new(entries: Vec<i64>) -> Option<Self> {
        entries.iter().all(|&e| e >= 0).then_some(Exponent(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        Exponent(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Exponent(e)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn checked_add(&self, other: &Exponent) -> Result<Exponent> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()
            .map(Exponent)
    }

    /// Appends `extra` zero entries.
    pub fn embed(&self, extra: usize) -> Exponent {
        let mut e = self.0.clone();
        e.resize(self.0.len() + extra, 0);
        Exponent(e)
    }
}

impl Deref for Exponent {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A nonempty, duplicate-free set of exponents of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialSupport {
    exponents: Vec<Exponent>,
    label: String,
}

impl MonomialSupport {
    pub fn new(label: impl Into<String>, mut exponents: Vec<Exponent>) -> Result<Self> {
        let Some(first) = exponents.first() else {
            return Err(Error::EmptySupport { index: 0 });
        };
        let dim = first.len();
        if let Some(bad) = exponents.iter().find(|e| e.len() != dim) {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: dim,
                found: bad.len(),
            });
        }
        exponents.sort();
        if let Some(w) = exponents.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateExponent {
                index: 0,
                exponent: w[0].to_vec(),
            });
        }
        Ok(MonomialSupport {
            exponents,
            label: label.into(),
        })
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.exponents
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.exponents[0].len()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponents as plain lattice points.
    pub fn points(&self) -> Vec<Vec<i64>> {
        self.exponents.iter().map(|e| e.to_vec()).collect()
    }
}

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A complex coefficient with an optional exact rational form.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    value: Complex64,
    exact: Option<ExactComplex>,
}

impl Coefficient {
    pub fn from_complex(value: Complex64) -> Self {
        Coefficient { value, exact: None }
    }

    pub fn from_exact(re: BigRational, im: BigRational) -> Self {
        let exact = ExactComplex { re, im };
        Coefficient {
            value: exact.to_complex(),
            exact: Some(exact),
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_exact(BigRational::from_integer(v.into()), BigRational::zero())
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn exact(&self) -> Option<&ExactComplex> {
        self.exact.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.is_zero(),
            None => self.value.re == 0.0 && self.value.im == 0.0,
        }
    }

    /// Multiplies by an integer, keeping the exact form.
    pub fn scale(&self, k: i64) -> Self {
        match &self.exact {
            Some(e) => {
                let k = BigRational::from_integer(BigInt::from(k));
                Self::from_exact(&e.re * &k, &e.im * &k)
            }
            None => Self::from_complex(self.value * k as f64),
        }
    }

    /// Multiplies by a floating complex number; the exact form is dropped.
    pub fn mul_complex(&self, c: Complex64) -> Self {
        Self::from_complex(self.value * c)
    }

    /// Exact parts if present, otherwise the exact binary value of the floats.
    pub fn to_rationals(&self) -> (BigRational, BigRational) {
        match &self.exact {
            Some(e) => (e.re.clone(), e.im.clone()),
            None => (
                BigRational::from_float(self.value.re).unwrap_or_else(BigRational::zero),
                BigRational::from_float(self.value.im).unwrap_or_else(BigRational::zero),
            ),
        }
    }
}

/// A sparse polynomial in `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePolynomial {
    dim: usize,
    terms: BTreeMap<Exponent, Coefficient>,
}

impl SparsePolynomial {
    pub fn zero(dim: usize) -> Self {
        SparsePolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from terms. Repeated exponents are summed and
    /// zero coefficients dropped.
    ///
    /// Panics if an exponent does not have length `dim`.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Exponent, Coefficient)>) -> Self {
        let mut p = SparsePolynomial::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Coefficient) {
        assert_eq!(e.len(), self.dim, "exponent length does not match polynomial dimension");
        let merged = match self.terms.remove(&e) {
            None => c,
            Some(old) => match (old.exact, c.exact) {
                (Some(a), Some(b)) => Coefficient::from_exact(a.re + b.re, a.im + b.im),
                _ => Coefficient::from_complex(old.value + c.value),
            },
        };
        if !merged.is_zero() {
            self.terms.insert(e, merged);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Option<&Coefficient> {
        self.terms.get(e)
    }

    pub fn exponents(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    /// The support of a nonzero polynomial.
    pub fn support(&self, label: impl Into<String>) -> Result<MonomialSupport> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        MonomialSupport::new(label, self.terms.keys().cloned().collect())
    }

    /// `∂f/∂x_i` with `i` zero-based. Terms with `α_i = 0` vanish.
    pub fn partial_derivative(&self, i: usize) -> SparsePolynomial {
        assert!(i < self.dim, "variable index {i} out of range");
        SparsePolynomial::from_terms(
            self.dim,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut lowered = e.to_vec();
                lowered[i] -= 1;
                (Exponent(lowered), c.scale(e[i]))
            }),
        )
    }

    /// Evaluates `Σ c_α · pᵅ`.
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.dim);
        self.terms
            .iter()
            .map(|(e, c)| c.value * monomial(point, e))
            .sum()
    }

    /// `Σ |c_α · pᵅ|`, the scale against which residuals are measured.
    pub fn evaluate_magnitude(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| (c.value * monomial(point, e)).norm())
            .sum()
    }

    /// Multiplies every term by the monomial `x^shift`.
    pub fn shift(&self, shift: &Exponent) -> Result<SparsePolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.checked_add(shift)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparsePolynomial::from_terms(self.dim, terms))
    }

    /// Views the polynomial in `dim + extra` variables; the new variables
    /// get exponent zero.
    pub fn embed(&self, extra: usize) -> SparsePolynomial {
        SparsePolynomial {
            dim: self.dim + extra,
            terms: self.terms.iter().map(|(e, c)| (e.embed(extra), c.clone())).collect(),
        }
    }

    /// Keeps the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponent) -> bool) -> SparsePolynomial {
        SparsePolynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Replaces every coefficient.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Exponent, &Coefficient) -> Coefficient) -> SparsePolynomial {
        SparsePolynomial::from_terms(self.dim, self.terms.iter().map(|(e, c)| (e.clone(), f(e, c))))
    }
}

/// `pᵅ` by repeated squaring.
pub fn monomial(point: &[Complex64], exponent: &[i64]) -> Complex64 {
    point
        .iter()
        .zip(exponent)
        .fold(Complex64::new(1.0, 0.0), |acc, (&x, &e)| acc * powu(x, e as u64))
}

pub(crate) fn powu(mut base: Complex64, mut e: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// An ordered list of `k ≥ 1` nonzero polynomials in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialSystem {
    n: usize,
    polynomials: Vec<SparsePolynomial>,
}

impl PolynomialSystem {
    pub fn new(n: usize, polynomials: Vec<SparsePolynomial>) -> Result<Self> {
        if polynomials.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (index, p) in polynomials.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: n,
                    found: p.dim(),
                });
            }
            if p.is_zero() {
                return Err(Error::EmptySupport { index });
            }
        }
        Ok(PolynomialSystem { n, polynomials })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of polynomials.
    pub fn k(&self) -> usize {
        self.polynomials.len()
    }

    pub fn polynomials(&self) -> &[SparsePolynomial] {
        &self.polynomials
    }

    pub fn is_square(&self) -> bool {
        self.n == self.k()
    }

    pub fn supports(&self) -> Vec<MonomialSupport> {
        self.polynomials
            .iter()
            .enumerate()
            .map(|(j, p)| p.support(format!("f{}", j + 1)).expect("system polynomials are nonzero"))
            .collect()
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Vec<Complex64> {
        self.polynomials.iter().map(|p| p.evaluate(point)).collect()
    }

    /// Largest scaled residual `|g_i(p)| / max(1, Σ|c_α pᵅ|)` over the equations.
    pub fn residual(&self, point: &[Complex64]) -> f64 {
        self.polynomials
            .iter()
            .map(|p| p.evaluate(point).norm() / p.evaluate_magnitude(point).max(1.0))
            .fold(0.0, f64::max)
    }

    /// `f̂ⱼ = x₁⋯xₙ · fⱼ` for every polynomial.
    pub fn multiply_by_full_monomial(&self) -> Result<PolynomialSystem> {
        let ones = Exponent(vec![1; self.n]);
        let polynomials = self
            .polynomials
            .iter()
            .map(|p| p.shift(&ones))
            .collect::<Result<Vec<_>>>()?;
        PolynomialSystem::new(self.n, polynomials)
    }

    /// Index of the first polynomial not divisible by `x₁⋯xₙ`, if any.
    pub fn first_non_hat_index(&self) -> Option<usize> {
        self.polynomials
            .iter()
            .position(|p| p.exponents().any(|e| e.contains(&0)))
    }
}

/// Positive data vector `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct DataVector {
    values: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl DataVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidData(format!("entry {bad} is not a positive real")));
        }
        Ok(DataVector { values, exact: None })
    }

    pub fn from_exact(values: Vec<BigRational>) -> Result<Self> {
        let floats: Vec<f64> = values.iter().map(rational_to_f64).collect();
        let mut v = DataVector::new(floats)?;
        if values.iter().any(|r| r <= &BigRational::zero()) {
            return Err(Error::InvalidData("entries must be positive".into()));
        }
        v.exact = Some(values);
        Ok(v)
    }

    /// Uniform on `(0.5, 1.5)ⁿ`.
    pub fn sample(n: usize, seed: RandomSeed) -> Self {
        let mut rng = seed.rng(RandomSeed::DATA);
        let values = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
        DataVector { values, exact: None }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry `i` as a coefficient, exact when the vector was read exactly.
    pub fn coefficient(&self, i: usize) -> Coefficient {
        match &self.exact {
            Some(ex) => Coefficient::from_exact(ex[i].clone(), BigRational::zero()),
            None => Coefficient::from_complex(Complex64::new(self.values[i], 0.0)),
        }
    }
}

/// Seed for every random choice: coefficients, liftings, data, start systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub const COEFFICIENTS: u64 = 1;
    pub const LIFTING: u64 = 2;
    pub const DATA: u64 = 3;
    pub const START: u64 = 4;
    pub const SUPPORTS: u64 = 5;
    pub const RESCALE: u64 = 6;

    /// Independent generator for one purpose.
    pub fn rng(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }

    /// A different seed derived deterministically from this one.
    pub fn derive(self, salt: u64) -> RandomSeed {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0 ^ salt.rotate_left(17));
        rng.set_stream(0x5eed);
        RandomSeed(rng.random())
    }
}

/// A point drawn uniformly from the complex unit circle.
pub fn unit_circle(rng: &mut impl Rng) -> Complex64 {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(1.0, theta)
}

/// Draws every coefficient independently from the unit circle.
pub fn sample_generic_system(supports: &[MonomialSupport], seed: RandomSeed) -> Result<PolynomialSystem> {
    let first = supports.first().ok_or(Error::EmptySystem)?;
    let n = first.dim();
    let mut rng = seed.rng(RandomSeed::COEFFICIENTS);
    let polynomials = supports
        .iter()
        .enumerate()
        .map(|(index, s)| {
            if s.dim() != n {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: n,
                    found: s.dim(),
                });
            }
            Ok(SparsePolynomial::from_terms(
                n,
                s.exponents()
                    .iter()
                    .map(|e| (e.clone(), Coefficient::from_complex(unit_circle(&mut rng)))),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    PolynomialSystem::new(n, polynomials)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(v: &[i64]) -> Exponent {
        Exponent::new(v.to_vec()).unwrap()
    }

    fn int_poly(dim: usize, terms: &[(&[i64], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(dim, terms.iter().map(|(e, c)| (exp(e), Coefficient::from_integer(*c))))
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn derivative_of_quartic() {
        let f = int_poly(2, &[(&[4, 0], 2), (&[0, 3], 3), (&[0, 0], -5)]);
        assert_eq!(f.partial_derivative(0), int_poly(2, &[(&[3, 0], 8)]));
        assert_eq!(f.partial_derivative(1), int_poly(2, &[(&[0, 2], 9)]));
    }

    #[test]
    fn derivative_drops_terms_without_variable() {
        let f = int_poly(2, &[(&[0, 3], 3)]);
        assert!(f.partial_derivative(0).is_zero());
        let xy = int_poly(2, &[(&[1, 1], 1)]);
        assert_eq!(xy.partial_derivative(1), int_poly(2, &[(&[1, 0], 1)]));
    }

    #[test]
    fn evaluation() {
        let f = int_poly(2, &[(&[4, 0], 2), (&[0, 3], 3), (&[0, 0], -5)]);
        assert_eq!(f.evaluate(&[c(1.0), c(1.0)]), c(0.0));
        let g = int_poly(1, &[(&[1], 1), (&[0], -1)]);
        assert_eq!(g.evaluate(&[c(1.0)]), c(0.0));
        let xy = int_poly(2, &[(&[1, 1], 1)]);
        assert_eq!(xy.evaluate(&[c(2.0), c(3.0)]), c(6.0));
    }

    #[test]
    fn full_monomial_multiplication() {
        let f = int_poly(2, &[(&[4, 0], 2), (&[0, 3], 3), (&[0, 0], -5)]);
        let hat = PolynomialSystem::new(2, vec![f]).unwrap().multiply_by_full_monomial().unwrap();
        assert_eq!(hat.polynomials()[0], int_poly(2, &[(&[5, 1], 2), (&[1, 4], 3), (&[1, 1], -5)]));

        let one = PolynomialSystem::new(2, vec![int_poly(2, &[(&[0, 0], 1)])]).unwrap();
        assert_eq!(one.multiply_by_full_monomial().unwrap().polynomials()[0], int_poly(2, &[(&[1, 1], 1)]));

        let x = PolynomialSystem::new(1, vec![int_poly(1, &[(&[1], 1)])]).unwrap();
        let twice = x.multiply_by_full_monomial().unwrap().multiply_by_full_monomial().unwrap();
        assert_eq!(twice.polynomials()[0], int_poly(1, &[(&[3], 1)]));
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let f = int_poly(1, &[(&[i64::MAX], 1)]);
        let sys = PolynomialSystem::new(1, vec![f]).unwrap();
        assert!(matches!(sys.multiply_by_full_monomial(), Err(Error::ExponentOverflow)));
    }

    #[test]
    fn generic_sampling_is_deterministic_and_unimodular() {
        let s = MonomialSupport::new("f", vec![exp(&[4, 0]), exp(&[0, 3]), exp(&[0, 0])]).unwrap();
        let a = sample_generic_system(std::slice::from_ref(&s), RandomSeed(1)).unwrap();
        let b = sample_generic_system(std::slice::from_ref(&s), RandomSeed(1)).unwrap();
        assert_eq!(a.polynomials()[0].len(), 3);
        for ((ea, ca), (eb, cb)) in a.polynomials()[0].terms().zip(b.polynomials()[0].terms()) {
            assert_eq!(ea, eb);
            assert_eq!(ca.value().re.to_bits(), cb.value().re.to_bits());
            assert_eq!(ca.value().im.to_bits(), cb.value().im.to_bits());
            assert!((ca.value().norm() - 1.0).abs() < 1e-15);
        }

        let lin = MonomialSupport::new("a", vec![exp(&[1, 0]), exp(&[0, 1]), exp(&[0, 0])]).unwrap();
        let quad = MonomialSupport::new("b", vec![exp(&[2, 0]), exp(&[0, 2]), exp(&[0, 0])]).unwrap();
        let sys = sample_generic_system(&[lin, quad], RandomSeed(7)).unwrap();
        assert_eq!(sys.k(), 2);
        assert!(sys.polynomials().iter().all(|p| p.len() == 3));
        assert!(matches!(sample_generic_system(&[], RandomSeed(7)), Err(Error::EmptySystem)));
    }

    #[test]
    fn zero_polynomial_rejected_in_system() {
        let err = PolynomialSystem::new(2, vec![int_poly(2, &[(&[1, 0], 1)]), SparsePolynomial::zero(2)]).unwrap_err();
        assert!(matches!(err, Error::EmptySupport { index: 1 }));
    }

    #[test]
    fn support_rejects_duplicates() {
        assert!(MonomialSupport::new("s", vec![exp(&[1]), exp(&[1])]).is_err());
        assert!(MonomialSupport::new("s", vec![]).is_err());
    }

    #[test]
    fn data_vector_must_be_positive() {
        assert!(DataVector::new(vec![0.5, 1.0]).is_ok());
        assert!(DataVector::new(vec![0.5, 0.0]).is_err());
        let u = DataVector::sample(4, RandomSeed(3));
        assert!(u.values().iter().all(|v| (0.5..1.5).contains(v)));
    }

    use proptest::prelude::*;

    fn arb_poly(dim: usize) -> impl Strategy<Value = SparsePolynomial> {
        proptest::collection::vec((proptest::collection::vec(0i64..4, dim), -5i64..6), 1..6)
            .prop_map(move |terms| {
                SparsePolynomial::from_terms(
                    dim,
                    terms.into_iter().map(|(e, c)| (Exponent::new(e).unwrap(), Coefficient::from_integer(c))),
                )
            })
    }

    proptest! {
        #[test]
        fn derivative_support_rule(f in arb_poly(3), i in 0usize..3) {
            let d = f.partial_derivative(i);
            let mut expected: Vec<Vec<i64>> = f.exponents().filter(|e| e[i] > 0).map(|e| {
                let mut v = e.to_vec();
                v[i] -= 1;
                v
            }).collect();
            expected.sort();
            let got: Vec<Vec<i64>> = d.exponents().map(|e| e.to_vec()).collect();
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn hat_scales_values(f in arb_poly(2), re in proptest::collection::vec(-1.5f64..1.5, 4)) {
            prop_assume!(!f.is_zero());
            let sys = PolynomialSystem::new(2, vec![f.clone()]).unwrap();
            let hat = sys.multiply_by_full_monomial().unwrap();
            let p = [Complex64::new(re[0], re[1]), Complex64::new(re[2], re[3])];
            let lhs = hat.polynomials()[0].evaluate(&p);
            let rhs = p[0] * p[1] * f.evaluate(&p);
            let scale = 1.0 + hat.polynomials()[0].evaluate_magnitude(&p);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale);
        }
    }
}
