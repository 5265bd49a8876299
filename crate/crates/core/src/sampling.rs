//! Random support families and systems for property checks.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::Result;
use crate::model::{sample_generic_system, Exponent, MonomialSupport, PolynomialSystem, RandomSeed};

/// Shape of a random support family.
#[derive(Clone, Copy, Debug)]
pub struct FamilyShape {
    /// Number of variables.
    pub n: usize,
    /// Number of polynomials.
    pub k: usize,
    /// Each support has between 2 and `max_terms` monomials.
    pub max_terms: usize,
    /// Exponents are drawn from `[0, max_degree]ⁿ`.
    pub max_degree: i64,
}

/// `k` supports of `2..=max_terms` distinct exponents each.
pub fn random_supports(shape: FamilyShape, seed: RandomSeed) -> Vec<MonomialSupport> {
    assert!(shape.max_terms >= 2 && shape.max_degree >= 1);
    let mut rng = seed.rng(RandomSeed::SUPPORTS);
    let side = (shape.max_degree + 1) as usize;
    let cube = side.pow(shape.n as u32);
    (0..shape.k)
        .map(|j| {
            let terms = rng.random_range(2..=shape.max_terms.min(cube));
            let exponents = sample(&mut rng, cube, terms)
                .into_iter()
                .map(|mut code| {
                    let e = (0..shape.n)
                        .map(|_| {
                            let v = (code % side) as i64;
                            code /= side;
                            v
                        })
                        .collect();
                    Exponent::new(e).expect("nonnegative")
                })
                .collect();
            MonomialSupport::new(format!("f{}", j + 1), exponents).expect("distinct exponents")
        })
        .collect()
}

/// Random supports with unit-modulus coefficients drawn from `seed`.
pub fn random_system(shape: FamilyShape, seed: RandomSeed) -> Result<PolynomialSystem> {
    sample_generic_system(&random_supports(shape, seed), seed)
}
