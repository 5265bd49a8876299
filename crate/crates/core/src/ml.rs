//! Lagrange likelihood equations, the hat transform, the multiplier rescaling
//! between them and the unimodular shear relating their Newton polytopes.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mixed::{mixed_volume_cross_check, CrossCheck};
use crate::model::{unit_circle, Coefficient, DataVector, Exponent, PolynomialSystem, RandomSeed, SparsePolynomial};
use crate::polytope::{newton_polytope, LatticePolytope};

/// `𝓛(F) = ⟨ℓ₁,…,ℓₙ, f₁,…,f_k⟩` in the variables `(x₁,…,xₙ, λ₁,…,λ_k)`.
#[derive(Clone, Debug)]
pub struct MlSystem {
    n: usize,
    k: usize,
    equations: PolynomialSystem,
    u: DataVector,
    source: PolynomialSystem,
}

impl MlSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of unknowns and of equations, `n + k`.
    pub fn dim(&self) -> usize {
        self.n + self.k
    }

    pub fn equations(&self) -> &PolynomialSystem {
        &self.equations
    }

    pub fn data(&self) -> &DataVector {
        &self.u
    }

    pub fn source(&self) -> &PolynomialSystem {
        &self.source
    }

    /// `ℓ₁,…,ℓₙ`.
    pub fn likelihood_equations(&self) -> &[SparsePolynomial] {
        &self.equations.polynomials()[..self.n]
    }

    /// `f₁,…,f_k` embedded in `(x, λ)`-space.
    pub fn model_equations(&self) -> &[SparsePolynomial] {
        &self.equations.polynomials()[self.n..]
    }

    pub fn newton_polytopes(&self) -> Vec<LatticePolytope> {
        self.equations
            .polynomials()
            .iter()
            .map(|p| newton_polytope(p).expect("equations are nonzero"))
            .collect()
    }

    /// `x₁⋯xₙ` divides every model polynomial.
    pub fn is_hat_form(&self) -> bool {
        self.source.first_non_hat_index().is_none()
    }

    /// Coordinate labels `x1..xn, lambda1..lambdak`.
    pub fn variable_names(&self) -> Vec<String> {
        (1..=self.n)
            .map(|i| format!("x{i}"))
            .chain((1..=self.k).map(|j| format!("lambda{j}")))
            .collect()
    }
}

/// `ℓᵢ = uᵢ − Σⱼ λⱼ·xᵢ·∂fⱼ/∂xᵢ` for each `i`, followed by the `fⱼ`.
pub fn build_ml_system(f: &PolynomialSystem, u: &DataVector) -> Result<MlSystem> {
    let n = f.n();
    let k = f.k();
    if u.len() != n {
        return Err(Error::InvalidData(format!("data vector has length {}, expected {n}", u.len())));
    }
    let d = n + k;
    let mut equations = Vec::with_capacity(d);
    for i in 0..n {
        let mut terms = vec![(Exponent::zeros(d), u.coefficient(i))];
        for (j, fj) in f.polynomials().iter().enumerate() {
            for (alpha, c) in fj.terms() {
                if alpha[i] == 0 {
                    continue;
                }
                let mut e = alpha.embed(k).into_vec();
                e[n + j] = 1;
                terms.push((Exponent::new(e).expect("nonnegative"), c.scale(-alpha[i])));
            }
        }
        equations.push(SparsePolynomial::from_terms(d, terms));
    }
    equations.extend(f.polynomials().iter().map(|p| p.embed(k)));
    if k > n {
        log::warn!("{k} constraints in {n} unknowns: the model is generically empty");
    }
    Ok(MlSystem {
        n,
        k,
        equations: PolynomialSystem::new(d, equations)?,
        u: u.clone(),
        source: f.clone(),
    })
}

/// `F̂ = ⟨x₁⋯xₙ·f₁, …, x₁⋯xₙ·f_k⟩`.
pub fn hat_transform(f: &PolynomialSystem) -> Result<PolynomialSystem> {
    f.multiply_by_full_monomial()
}

/// ML degree as the mixed volume of `𝓛(F)`, both engines cross-checked.
/// Zero when there are more constraints than unknowns.
pub fn ml_degree_mixed_volume(f: &PolynomialSystem, u: &DataVector, seed: RandomSeed) -> Result<u64> {
    let ml = build_ml_system(f, u)?;
    Ok(ml_mixed_volume(&ml, seed)?.map_or(0, |c| c.mixed_volume))
}

/// Cross-checked mixed volume of `𝓛(F)`; `None` when `k > n`.
pub fn ml_mixed_volume(ml: &MlSystem, seed: RandomSeed) -> Result<Option<CrossCheck>> {
    if ml.k > ml.n {
        log::warn!("ML degree reported as 0 for k > n");
        return Ok(None);
    }
    let polytopes = ml.newton_polytopes();
    let supports = ml.equations.supports();
    mixed_volume_cross_check(&polytopes, &supports, seed).map(Some)
}

/// A point of `(ℂ*)ⁿ × (ℂ*)ᵏ` split as `(x, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    pub coordinates: Vec<Complex64>,
    pub n: usize,
}

impl TorusPoint {
    pub fn new(coordinates: Vec<Complex64>, n: usize) -> Self {
        assert!(n <= coordinates.len());
        TorusPoint { coordinates, n }
    }

    pub fn x(&self) -> &[Complex64] {
        &self.coordinates[..self.n]
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.coordinates[self.n..]
    }

    /// Smallest coordinate modulus.
    pub fn min_modulus(&self) -> f64 {
        self.coordinates.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min)
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coordinates.len()))?;
        for c in &self.coordinates {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `λⱼ ↦ λⱼ / (x₁⋯xₙ)`, taking solutions of `𝓛(F)` to `𝓛(F̂)`.
    Forward,
    /// `λⱼ ↦ λⱼ · (x₁⋯xₙ)`.
    Inverse,
}

pub fn lambda_rescale(p: &TorusPoint, direction: Direction) -> Result<TorusPoint> {
    if let Some(index) = p.coordinates.iter().position(|c| *c == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroCoordinate { index });
    }
    let prod: Complex64 = p.x().iter().product();
    let factor = match direction {
        Direction::Forward => prod.inv(),
        Direction::Inverse => prod,
    };
    let mut coordinates = p.coordinates.clone();
    for l in &mut coordinates[p.n..] {
        *l *= factor;
    }
    Ok(TorusPoint { coordinates, n: p.n })
}

/// The block matrix `[[Iₙ, 1_{n×k}], [0, I_k]]`.
pub fn shear_matrix(n: usize, k: usize) -> Vec<Vec<i64>> {
    let d = n + k;
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    if r == c || (r < n && c >= n) {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

/// Newton polytopes of `𝓛(F)` under the shear `(x, λ) ↦ (x + (Σλ)·1, λ)`.
pub fn shear_polytopes(ml: &MlSystem) -> Vec<LatticePolytope> {
    let m = shear_matrix(ml.n, ml.k);
    ml.newton_polytopes().iter().map(|p| p.linear_image(&m)).collect()
}

/// Substitutes `xᵢ ↦ tᵢxᵢ` with random unit-modulus `tᵢ`; supports are kept.
pub fn rescale_for_simplex_constraint(f: &PolynomialSystem, seed: RandomSeed) -> PolynomialSystem {
    let mut rng = seed.rng(RandomSeed::RESCALE);
    let t: Vec<Complex64> = (0..f.n()).map(|_| unit_circle(&mut rng)).collect();
    let polynomials = f
        .polynomials()
        .iter()
        .map(|p| {
            p.map_coefficients(|alpha, c| {
                let scale = crate::model::monomial(&t, alpha);
                c.mul_complex(scale)
            })
        })
        .collect();
    PolynomialSystem::new(f.n(), polynomials).expect("rescaling keeps every coefficient nonzero")
}

/// Builds `Coefficient`s from plain integers; handy for fixtures.
pub fn integer_polynomial(dim: usize, terms: &[(&[i64], i64)]) -> SparsePolynomial {
    SparsePolynomial::from_terms(
        dim,
        terms
            .iter()
            .map(|(e, c)| (Exponent::new(e.to_vec()).expect("nonnegative exponent"), Coefficient::from_integer(*c))),
    )
}
