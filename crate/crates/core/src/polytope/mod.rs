//! Exact lattice-polytope geometry: Newton polytopes, exposed faces,
//! initial polynomials, Minkowski sums and Euclidean volume.
//!
//! Everything is computed over the integers; no floating point enters a
//! face or volume decision.

mod hull;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intmat::dot_i128;
use crate::model::SparsePolynomial;

/// A lattice point.
pub type Point = Vec<i64>;

/// Convex hull of finitely many lattice points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    dim: usize,
    points: Vec<Point>,
    vertices: Vec<Point>,
    affine_dim: usize,
    normalized_volume: BigInt,
}

impl LatticePolytope {
    /// Hull of `points` in `ℤ^dim`. Duplicates are ignored.
    pub fn new(dim: usize, mut points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::AmbientMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        points.sort();
        points.dedup();
        let h = hull::hull(&points);
        let vertices = h.vertices.iter().map(|&i| points[i].clone()).collect();
        let normalized_volume = if h.affine_dim == dim { h.normalized_volume } else { BigInt::from(0) };
        Ok(LatticePolytope {
            dim,
            points,
            vertices,
            affine_dim: h.affine_dim,
            normalized_volume,
        })
    }

    pub fn point(p: Point) -> Self {
        let dim = p.len();
        LatticePolytope {
            dim,
            points: vec![p.clone()],
            vertices: vec![p],
            affine_dim: 0,
            normalized_volume: BigInt::from(0),
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generating points, sorted and distinct.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// `d!` times the Euclidean volume; zero unless full-dimensional.
    pub fn normalized_volume(&self) -> &BigInt {
        &self.normalized_volume
    }

    pub fn exact_volume(&self) -> BigRational {
        BigRational::new(self.normalized_volume.clone(), factorial(self.dim))
    }

    /// `val_w(P) = min ⟨w, v⟩` over the vertices.
    pub fn value(&self, w: &[i64]) -> i128 {
        assert_eq!(w.len(), self.dim);
        self.vertices.iter().map(|v| dot_i128(w, v)).min().expect("polytope is nonempty")
    }

    pub fn exposed_face(&self, w: &WeightVector) -> Result<ExposedFace<'_>> {
        if w.len() != self.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        if w.is_zero() {
            return Err(Error::ZeroWeight);
        }
        let value = self.value(w);
        let face_vertices = self.vertices.iter().filter(|v| dot_i128(w, v) == value).cloned().collect();
        Ok(ExposedFace {
            polytope: self,
            face_vertices,
            value,
        })
    }

    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.dim != other.dim {
            return Err(Error::AmbientMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let sums = self
            .vertices
            .iter()
            .flat_map(|a| other.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        LatticePolytope::new(self.dim, sums)
    }

    pub fn translate(&self, a: &[i64]) -> LatticePolytope {
        assert_eq!(a.len(), self.dim);
        let shift = |p: &Point| p.iter().zip(a).map(|(x, y)| x + y).collect::<Point>();
        LatticePolytope {
            dim: self.dim,
            points: self.points.iter().map(shift).collect(),
            vertices: self.vertices.iter().map(shift).collect(),
            affine_dim: self.affine_dim,
            normalized_volume: self.normalized_volume.clone(),
        }
    }

    /// Image of the generators under the integer matrix `m` (acting on
    /// column vectors), hull recomputed.
    pub fn linear_image(&self, m: &[Vec<i64>]) -> LatticePolytope {
        let rows = m.len();
        let image = self
            .points
            .iter()
            .map(|p| m.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect())
            .collect();
        LatticePolytope::new(rows, image).expect("image of a nonempty point set")
    }

    pub fn contains_point(&self, p: &[i64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        if self.vertices.iter().any(|v| v == p) {
            return true;
        }
        let mut pts = self.vertices.clone();
        pts.push(p.to_vec());
        let grown = LatticePolytope::new(self.dim, pts).expect("nonempty");
        !grown.vertices.iter().any(|v| v == p)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &LatticePolytope) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }

    /// Same polytope, i.e. same vertex set.
    pub fn same_hull(&self, other: &LatticePolytope) -> bool {
        self.vertices == other.vertices
    }
}

impl Serialize for LatticePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LatticePolytope", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.end()
    }
}

pub(crate) fn factorial(d: usize) -> BigInt {
    (1..=d).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// An integer weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WeightVector(pub Vec<i64>);

impl WeightVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl std::ops::Deref for WeightVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// The face `P_w` minimizing `⟨w, ·⟩`, with `val_w(P)`.
#[derive(Clone, Debug)]
pub struct ExposedFace<'a> {
    pub polytope: &'a LatticePolytope,
    pub face_vertices: Vec<Point>,
    pub value: i128,
}

pub fn newton_polytope(f: &SparsePolynomial) -> Result<LatticePolytope> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    LatticePolytope::new(f.dim(), f.exponents().map(|e| e.to_vec()).collect())
}

pub fn exposed_face<'a>(p: &'a LatticePolytope, w: &WeightVector) -> Result<ExposedFace<'a>> {
    p.exposed_face(w)
}

pub fn minkowski_sum(p: &LatticePolytope, q: &LatticePolytope) -> Result<LatticePolytope> {
    p.minkowski_sum(q)
}

pub fn exact_volume(p: &LatticePolytope) -> BigRational {
    p.exact_volume()
}

/// `init_w(f)`: the terms of `f` whose exponents attain `val_w`. Every support
/// point on the face is kept, not only vertices.
pub fn initial_polynomial(f: &SparsePolynomial, w: &[i64]) -> SparsePolynomial {
    assert_eq!(w.len(), f.dim());
    let Some(min) = f.exponents().map(|e| dot_i128(w, e)).min() else {
        return f.clone();
    };
    f.filter_terms(|e| dot_i128(w, e) == min)
}
