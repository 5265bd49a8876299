//! Which face of the common likelihood polytope a weight vector exposes.
//!
//! For a hat-form model every `ℓ̂ᵢ` has the Newton polytope
//! `P = Conv({0} ∪ ⋃ⱼ vert(λⱼ f̂ⱼ))`. Writing `w = (a, b)`, the minimum of
//! `⟨w, ·⟩` on `P` is the least of `0` and the numbers `bⱼ + val_a(f̂ⱼ)`, which
//! gives three cases: the origin alone, a face built from some `f̂ⱼ` only, or
//! such a face together with the origin.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intmat::dot_i128;
use crate::ml::MlSystem;
use crate::polytope::{initial_polynomial, LatticePolytope, WeightVector};
use crate::model::SparsePolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceCase {
    /// Every `bⱼ + val_a(f̂ⱼ)` is positive; the face is `{0}`.
    Origin,
    /// The minimum `γ` is negative; the origin is not on the face.
    PureFaceMix,
    /// The minimum is zero; the face contains the origin.
    MixedWithOrigin,
}

impl FaceCase {
    pub fn number(self) -> u8 {
        match self {
            FaceCase::Origin => 1,
            FaceCase::PureFaceMix => 2,
            FaceCase::MixedWithOrigin => 3,
        }
    }
}

impl Serialize for FaceCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceClassification {
    pub w: Vec<i64>,
    pub case: FaceCase,
    /// Number of active model polynomials.
    pub t: usize,
    /// Common value `bⱼ + val_a(f̂ⱼ)` on the active indices; absent for the
    /// origin case.
    pub gamma: Option<i128>,
    /// Active indices, 0-based.
    pub active: Vec<usize>,
    /// `val_w(P)`.
    pub value: i128,
    pub face_vertices: Vec<Vec<i64>>,
}

fn check_hat(ml: &MlSystem) -> Result<()> {
    match ml.source().first_non_hat_index() {
        Some(index) => Err(Error::NotHatForm { index }),
        None => Ok(()),
    }
}

fn check_weight(ml: &MlSystem, w: &WeightVector) -> Result<()> {
    if w.len() != ml.dim() {
        return Err(Error::AmbientMismatch {
            expected: ml.dim(),
            found: w.len(),
        });
    }
    if w.is_zero() {
        return Err(Error::ZeroWeight);
    }
    Ok(())
}

fn valuation(f: &SparsePolynomial, a: &[i64]) -> i128 {
    f.exponents().map(|e| dot_i128(a, e)).min().expect("model polynomials are nonzero")
}

/// Classifies `w` and checks that the face assembled from the case equals
/// the exposed face of `Newt(ℓ̂₁)`.
pub fn classify_face(ml: &MlSystem, w: &WeightVector) -> Result<FaceClassification> {
    check_hat(ml)?;
    check_weight(ml, w)?;
    let p = ml.newton_polytopes().swap_remove(0);
    classify_against(ml, &p, w)
}

fn classify_against(ml: &MlSystem, p: &LatticePolytope, w: &WeightVector) -> Result<FaceClassification> {
    let (n, d) = (ml.n(), ml.dim());
    let (a, b) = w.split_at(n);
    let gammas: Vec<i128> = ml
        .source()
        .polynomials()
        .iter()
        .zip(b)
        .map(|(f, &bj)| bj as i128 + valuation(f, a))
        .collect();
    let min = *gammas.iter().min().expect("at least one model polynomial");
    let (case, active, gamma) = if min > 0 {
        (FaceCase::Origin, Vec::new(), None)
    } else {
        let active: Vec<usize> = (0..gammas.len()).filter(|&j| gammas[j] == min).collect();
        let case = if min < 0 { FaceCase::PureFaceMix } else { FaceCase::MixedWithOrigin };
        (case, active, Some(min))
    };

    let mut generators = Vec::new();
    if case != FaceCase::PureFaceMix {
        generators.push(vec![0; d]);
    }
    for &j in &active {
        let f = &ml.source().polynomials()[j];
        for e in initial_polynomial(f, a).exponents() {
            let mut g = e.embed(ml.k()).into_vec();
            g[n + j] = 1;
            generators.push(g);
        }
    }
    let assembled = LatticePolytope::new(d, generators)?;
    let exposed = p.exposed_face(w)?;
    if assembled.vertices() != exposed.face_vertices.as_slice() || exposed.value != min.min(0) {
        return Err(Error::Internal(format!(
            "face of weight {:?} assembled as {:?} but exposed as {:?}",
            w.0,
            assembled.vertices(),
            exposed.face_vertices
        )));
    }
    Ok(FaceClassification {
        w: w.0.clone(),
        case,
        t: active.len(),
        gamma,
        active,
        value: exposed.value,
        face_vertices: exposed.face_vertices,
    })
}

/// `init_w` of every equation of `𝓛(F)`.
pub fn initial_ml_system(ml: &MlSystem, w: &WeightVector) -> Result<Vec<SparsePolynomial>> {
    check_weight(ml, w)?;
    Ok(ml.equations().polynomials().iter().map(|p| initial_polynomial(p, w)).collect())
}

/// A left-kernel vector `(a, −val_a(f̂ⱼ) for active j)` of the matrix whose
/// columns are the terms of the active `λⱼ·init_w(f̂ⱼ)`: the x-exponent on top
/// and the indicator of `j` below.
#[derive(Clone, Debug, Serialize)]
pub struct KernelCertificate {
    pub vector: Vec<i128>,
    pub matrix: Vec<Vec<i64>>,
    pub matrix_shape: (usize, usize),
    pub active: Vec<usize>,
}

impl KernelCertificate {
    /// `vectorᵀ · matrix = 0`, exactly.
    pub fn verify(&self) -> bool {
        let (rows, cols) = self.matrix_shape;
        self.vector.len() == rows
            && self.matrix.len() == rows
            && self.vector.iter().any(|&v| v != 0)
            && (0..cols).all(|c| {
                self.vector
                    .iter()
                    .zip(&self.matrix)
                    .try_fold(0i128, |acc, (&v, row)| acc.checked_add(v.checked_mul(row[c] as i128)?))
                    == Some(0)
            })
    }

    /// The `a`-part of the vector.
    pub fn weight(&self) -> &[i128] {
        &self.vector[..self.vector.len() - self.active.len()]
    }
}

pub fn case3_kernel_certificate(ml: &MlSystem, w: &WeightVector) -> Result<KernelCertificate> {
    let c = classify_face(ml, w)?;
    certificate_for(ml, w, &c)
}

fn certificate_for(ml: &MlSystem, w: &WeightVector, c: &FaceClassification) -> Result<KernelCertificate> {
    if c.case != FaceCase::MixedWithOrigin {
        return Err(Error::WrongCase);
    }
    let n = ml.n();
    let a = &w[..n];
    if a.iter().all(|&v| v == 0) {
        return Err(Error::ZeroXWeight);
    }
    let t = c.active.len();
    let mut columns: Vec<Vec<i64>> = Vec::new();
    let mut vector: Vec<i128> = a.iter().map(|&v| v as i128).collect();
    for (block, &j) in c.active.iter().enumerate() {
        let f = &ml.source().polynomials()[j];
        vector.push(-valuation(f, a));
        for e in initial_polynomial(f, a).exponents() {
            let mut col = e.to_vec();
            col.extend((0..t).map(|r| i64::from(r == block)));
            columns.push(col);
        }
    }
    let matrix: Vec<Vec<i64>> = (0..n + t).map(|r| columns.iter().map(|col| col[r]).collect()).collect();
    let cert = KernelCertificate {
        vector,
        matrix_shape: (n + t, columns.len()),
        matrix,
        active: c.active.clone(),
    };
    if !cert.verify() {
        return Err(Error::Internal(format!("kernel certificate for {:?} does not verify", w.0)));
    }
    Ok(cert)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub w: Vec<i64>,
    pub case: FaceCase,
    pub t: usize,
    pub gamma: Option<i128>,
    /// Whether the kernel certificate verified; absent outside the
    /// mixed-with-origin case or when `a = 0`.
    pub certificate: Option<bool>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CaseCounts {
    pub origin: usize,
    pub pure_face_mix: usize,
    pub mixed_with_origin: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanTable {
    pub radius: i64,
    pub total: usize,
    pub counts: CaseCounts,
    pub certificates_verified: usize,
    pub rows: Vec<ScanRow>,
}

/// Classifies every nonzero `w` with `‖w‖_∞ ≤ radius`.
pub fn scan_weight_vectors(ml: &MlSystem, radius: i64) -> Result<ScanTable> {
    if radius < 1 {
        return Err(Error::InvalidArgument(format!("scan radius must be at least 1, got {radius}")));
    }
    check_hat(ml)?;
    let d = ml.dim();
    let side = (2 * radius + 1) as u64;
    let count = side.checked_pow(d as u32).ok_or_else(|| Error::InvalidArgument("scan is too large".into()))?;
    let p = ml.newton_polytopes().swap_remove(0);
    let rows = (0..count)
        .into_par_iter()
        .filter_map(|mut code| {
            let w: Vec<i64> = (0..d)
                .map(|_| {
                    let v = (code % side) as i64 - radius;
                    code /= side;
                    v
                })
                .rev()
                .collect();
            let w = WeightVector(w);
            (!w.is_zero()).then_some(w)
        })
        .map(|w| {
            let c = classify_against(ml, &p, &w)?;
            let certificate = match certificate_for(ml, &w, &c) {
                Ok(cert) => Some(cert.verify()),
                Err(Error::WrongCase | Error::ZeroXWeight) => None,
                Err(e) => return Err(e),
            };
            Ok(ScanRow {
                w: c.w,
                case: c.case,
                t: c.t,
                gamma: c.gamma,
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = CaseCounts::default();
    for r in &rows {
        match r.case {
            FaceCase::Origin => counts.origin += 1,
            FaceCase::PureFaceMix => counts.pure_face_mix += 1,
            FaceCase::MixedWithOrigin => counts.mixed_with_origin += 1,
        }
    }
    let total = rows.len();
    if counts.origin + counts.pure_face_mix + counts.mixed_with_origin != total || total as u64 != count - 1 {
        return Err(Error::Internal("weight scan lost a vector".into()));
    }
    Ok(ScanTable {
        radius,
        total,
        certificates_verified: rows.iter().filter(|r| r.certificate == Some(true)).count(),
        counts,
        rows,
    })
}
