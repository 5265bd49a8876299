//! Exact convex hulls by placing triangulation.
//!
//! Points are inserted in lexicographic order. The boundary of the current
//! triangulation is kept as a list of oriented simplicial facets; a new point
//! cones over every facet it sees strictly, which yields both the volume
//! (sum of simplex determinants) and the facet hyperplanes of the hull.
//! Lower-dimensional inputs are projected onto pivot coordinates of their
//! affine hull first, which is injective there and preserves faces.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::intmat::{rank_pivots, rank_pivots_big, Hyperplane};

pub(crate) struct HullData {
    /// Indices of the vertices in the input slice, ascending.
    pub vertices: Vec<usize>,
    pub affine_dim: usize,
    /// `r!·vol_r` of the hull inside its affine hull of dimension `r`.
    pub normalized_volume: BigInt,
}

struct Facet {
    verts: Vec<usize>,
    plane: Hyperplane,
}

/// Hull of distinct points given in lexicographic order.
pub(crate) fn hull(points: &[Vec<i64>]) -> HullData {
    assert!(!points.is_empty());
    let base = &points[0];
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    let (r, pivots) = if diffs.is_empty() { (0, Vec::new()) } else { rank_pivots(&diffs) };
    match r {
        0 => HullData {
            vertices: vec![0],
            affine_dim: 0,
            normalized_volume: BigInt::zero(),
        },
        1 => {
            let c = pivots[0];
            let (lo, hi) = extremes_by(points, c);
            HullData {
                vertices: if lo < hi { vec![lo, hi] } else { vec![hi, lo] },
                affine_dim: 1,
                normalized_volume: BigInt::from(points[hi][c] - points[lo][c]),
            }
        }
        _ => {
            let projected: Vec<Vec<i64>> = points.iter().map(|p| pivots.iter().map(|&c| p[c]).collect()).collect();
            let (vertices, volume) = placing(&projected, r);
            HullData {
                vertices,
                affine_dim: r,
                normalized_volume: volume,
            }
        }
    }
}

fn extremes_by(points: &[Vec<i64>], c: usize) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (i, p) in points.iter().enumerate() {
        if p[c] < points[lo][c] {
            lo = i;
        }
        if p[c] > points[hi][c] {
            hi = i;
        }
    }
    (lo, hi)
}

/// Full-dimensional hull in `ℤʳ`, `r ≥ 2`.
fn placing(points: &[Vec<i64>], r: usize) -> (Vec<usize>, BigInt) {
    let simplex = initial_simplex(points, r);
    let mut used = vec![false; points.len()];
    for &i in &simplex {
        used[i] = true;
    }

    let mut facets: Vec<Facet> = (0..=r)
        .map(|skip| {
            let verts: Vec<usize> = simplex.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
            oriented_facet(points, verts, simplex[skip])
        })
        .collect();
    let mut volume = facets[0].plane.eval(&points[simplex[0]]).abs();

    for (i, p) in points.iter().enumerate() {
        if used[i] {
            continue;
        }
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| facets[f].plane.side(p) == Ordering::Less)
            .collect();
        if visible.is_empty() {
            continue;
        }
        used[i] = true;

        // ridge -> (occurrences, vertex of the visible facet opposite to it)
        let mut ridges: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for &f in &visible {
            let facet = &facets[f];
            volume += facet.plane.eval(p).abs();
            for (skip, &opposite) in facet.verts.iter().enumerate() {
                let ridge: Vec<usize> = facet.verts.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, &v)| v).collect();
                ridges.entry(ridge).and_modify(|e| e.0 += 1).or_insert((1, opposite));
            }
        }

        let mut horizon: Vec<(Vec<usize>, usize)> = ridges
            .into_iter()
            .filter(|(_, (count, _))| *count == 1)
            .map(|(ridge, (_, opposite))| (ridge, opposite))
            .collect();
        horizon.sort();

        let mut keep = vec![true; facets.len()];
        for &f in &visible {
            keep[f] = false;
        }
        let mut flags = keep.into_iter();
        facets.retain(|_| flags.next().unwrap());

        for (mut ridge, opposite) in horizon {
            ridge.push(i);
            ridge.sort_unstable();
            facets.push(oriented_facet(points, ridge, opposite));
        }
    }

    (hull_vertices(points, &facets, &used, r), volume)
}

fn oriented_facet(points: &[Vec<i64>], verts: Vec<usize>, inside: usize) -> Facet {
    let refs: Vec<&[i64]> = verts.iter().map(|&v| points[v].as_slice()).collect();
    let plane = Hyperplane::through(&refs);
    debug_assert!(!plane.is_degenerate());
    let plane = match plane.side(&points[inside]) {
        Ordering::Greater => plane,
        Ordering::Less => plane.flipped(),
        Ordering::Equal => unreachable!("facet of a full-dimensional simplex contains its opposite vertex"),
    };
    Facet { verts, plane }
}

/// First `r + 1` affinely independent points in input order.
fn initial_simplex(points: &[Vec<i64>], r: usize) -> Vec<usize> {
    let mut chosen = vec![0];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Vec<i64> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        rows.push(diff);
        if rank_pivots(&rows).0 == rows.len() {
            chosen.push(i);
            if chosen.len() == r + 1 {
                break;
            }
        } else {
            rows.pop();
        }
    }
    assert_eq!(chosen.len(), r + 1, "point set spans dimension {r}");
    chosen
}

/// A used point is a vertex iff the facet normals through it span `ℝʳ`.
fn hull_vertices(points: &[Vec<i64>], facets: &[Facet], used: &[bool], r: usize) -> Vec<usize> {
    let planes: BTreeSet<(Vec<BigInt>, BigInt)> = facets.iter().map(|f| f.plane.primitive()).collect();
    let planes: Vec<Hyperplane> = planes
        .into_iter()
        .map(|(n, o)| Hyperplane::from_primitive(n, o))
        .collect();
    (0..points.len())
        .filter(|&i| used[i])
        .filter(|&i| {
            let tight: Vec<Vec<BigInt>> = planes
                .iter()
                .filter(|h| h.side(&points[i]) == Ordering::Equal)
                .map(|h| h.normal().to_vec())
                .collect();
            tight.len() >= r && rank_pivots_big(tight).0 == r
        })
        .collect()
}
