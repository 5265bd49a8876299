//! Fine mixed cells of a randomly lifted tuple of supports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::lp::{feasible, Constraint};
use crate::error::{Error, Result};
use crate::intmat::{det_i64, solve_rational};
use crate::model::{MonomialSupport, RandomSeed};
use crate::model::format_rational;

/// Lifting values are drawn uniformly from `[0, LIFTING_RANGE)`.
pub const LIFTING_RANGE: i64 = 1 << 16;

/// Liftings tried before giving up on fineness.
pub const LIFTING_ATTEMPTS: usize = 8;

/// One mixed cell: an edge `(p, q)` of every support, the inner normal `γ`
/// with `⟨p, γ⟩ + ω(p) = ⟨q, γ⟩ + ω(q)` below all other lifted points, and
/// `|det(q − p)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedCell {
    /// Indices into each support's sorted exponent list.
    pub edges: Vec<(usize, usize)>,
    pub points: Vec<(Vec<i64>, Vec<i64>)>,
    #[serde(serialize_with = "serialize_rationals")]
    pub normal: Vec<BigRational>,
    pub det: u64,
}

fn serialize_rationals<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// The mixed cells of one fine lifting together with the lifting itself.
#[derive(Clone, Debug, Serialize)]
pub struct MixedSubdivision {
    pub cells: Vec<MixedCell>,
    pub total: u64,
    /// `lifting[i][j]` lifts the `j`-th exponent of support `i`.
    pub lifting: Vec<Vec<i64>>,
    pub lifting_seed: RandomSeed,
    pub attempts: usize,
}

/// Enumerates fine mixed cells under a random integer lifting, resampling
/// the lifting when a tie shows the subdivision is not fine.
pub fn mixed_cells(supports: &[MonomialSupport], seed: RandomSeed) -> Result<MixedSubdivision> {
    mixed_cells_in_range(supports, seed, LIFTING_RANGE)
}

pub(crate) fn mixed_cells_in_range(supports: &[MonomialSupport], seed: RandomSeed, range: i64) -> Result<MixedSubdivision> {
    let d = supports.len();
    if d == 0 {
        return Err(Error::EmptySystem);
    }
    for (index, s) in supports.iter().enumerate() {
        if s.dim() != d {
            return Err(Error::DimensionMismatch {
                index,
                expected: d,
                found: s.dim(),
            });
        }
    }
    let points: Vec<Vec<Vec<i64>>> = supports.iter().map(|s| s.points()).collect();
    let mut lifting_seed = seed;
    for attempt in 0..LIFTING_ATTEMPTS {
        if attempt > 0 {
            lifting_seed = seed.derive(attempt as u64);
        }
        let lifting = sample_lifting(&points, lifting_seed, range);
        match enumerate(&points, &lifting) {
            Some(cells) => {
                let total = cells.iter().map(|c| c.det).sum();
                return Ok(MixedSubdivision {
                    cells,
                    total,
                    lifting,
                    lifting_seed,
                    attempts: attempt + 1,
                });
            }
            None => log::debug!("lifting {} is not fine, resampling", lifting_seed.0),
        }
    }
    Err(Error::LiftingBudgetExhausted {
        attempts: LIFTING_ATTEMPTS,
        last_seed: lifting_seed.0,
    })
}

fn sample_lifting(points: &[Vec<Vec<i64>>], seed: RandomSeed, range: i64) -> Vec<Vec<i64>> {
    let mut rng = seed.rng(RandomSeed::LIFTING);
    points
        .iter()
        .map(|s| s.iter().map(|_| rng.random_range(0..range)).collect())
        .collect()
}

/// Constraints making `(p, q)` the lower edge of lifted support `s` with
/// inner normal `(γ, 1)`.
fn edge_constraints(pts: &[Vec<i64>], w: &[i64], p: usize, q: usize) -> Vec<Constraint> {
    let diff = |a: usize, b: usize| pts[a].iter().zip(&pts[b]).map(|(x, y)| x - y).collect::<Vec<i64>>();
    let mut out = vec![Constraint {
        row: diff(p, q),
        rhs: w[q] - w[p],
        equality: true,
    }];
    for b in 0..pts.len() {
        if b != p && b != q {
            out.push(Constraint {
                row: diff(p, b),
                rhs: w[b] - w[p],
                equality: false,
            });
        }
    }
    out
}

struct NotFine;

/// `None` when the lifting is not fine.
fn enumerate(points: &[Vec<Vec<i64>>], lifting: &[Vec<i64>]) -> Option<Vec<MixedCell>> {
    let d = points.len();
    let candidates: Vec<Vec<(usize, usize)>> = (0..d)
        .map(|s| {
            let m = points[s].len();
            (0..m)
                .flat_map(|p| (p + 1..m).map(move |q| (p, q)))
                .filter(|&(p, q)| feasible(d, &edge_constraints(&points[s], &lifting[s], p, q)))
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Some(Vec::new());
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&s| (candidates[s].len(), s));

    let search = Search {
        points,
        lifting,
        candidates: &candidates,
        order: &order,
    };
    let first = order[0];
    let branches: Vec<std::result::Result<Vec<MixedCell>, NotFine>> = candidates[first]
        .par_iter()
        .map(|&edge| {
            let mut chosen = vec![None; d];
            chosen[first] = Some(edge);
            let constraints = edge_constraints(&points[first], &lifting[first], edge.0, edge.1);
            let mut out = Vec::new();
            search.descend(1, &mut chosen, constraints, &mut out)?;
            Ok(out)
        })
        .collect();
    let mut cells = Vec::new();
    for b in branches {
        cells.extend(b.ok()?);
    }
    cells.sort_by(|a, b| a.edges.cmp(&b.edges));
    Some(cells)
}

struct Search<'a> {
    points: &'a [Vec<Vec<i64>>],
    lifting: &'a [Vec<i64>],
    candidates: &'a [Vec<(usize, usize)>],
    order: &'a [usize],
}

impl Search<'_> {
    fn descend(
        &self,
        depth: usize,
        chosen: &mut Vec<Option<(usize, usize)>>,
        constraints: Vec<Constraint>,
        out: &mut Vec<MixedCell>,
    ) -> std::result::Result<(), NotFine> {
        let d = self.points.len();
        if depth == d {
            let edges: Vec<(usize, usize)> = chosen.iter().map(|e| e.expect("every support has an edge")).collect();
            out.push(self.certify(&edges)?);
            return Ok(());
        }
        let s = self.order[depth];
        for &(p, q) in &self.candidates[s] {
            let mut next = constraints.clone();
            next.extend(edge_constraints(&self.points[s], &self.lifting[s], p, q));
            if !feasible(d, &next) {
                continue;
            }
            chosen[s] = Some((p, q));
            self.descend(depth + 1, chosen, next, out)?;
            chosen[s] = None;
        }
        Ok(())
    }

    /// Solves for the unique normal, checks that every other lifted point
    /// lies strictly above, and measures the cell.
    fn certify(&self, edges: &[(usize, usize)]) -> std::result::Result<MixedCell, NotFine> {
        let rows: Vec<Vec<i64>> = edges
            .iter()
            .enumerate()
            .map(|(s, &(p, q))| self.points[s][p].iter().zip(&self.points[s][q]).map(|(a, b)| a - b).collect())
            .collect();
        let rhs: Vec<BigRational> = edges
            .iter()
            .enumerate()
            .map(|(s, &(p, q))| BigRational::from_integer(BigInt::from(self.lifting[s][q] - self.lifting[s][p])))
            .collect();
        let gamma = solve_rational(&rows, &rhs).ok_or(NotFine)?;
        for (s, &(p, q)) in edges.iter().enumerate() {
            let base = lifted_value(&self.points[s][p], self.lifting[s][p], &gamma);
            for (b, pt) in self.points[s].iter().enumerate() {
                if b == p || b == q {
                    continue;
                }
                let gap = lifted_value(pt, self.lifting[s][b], &gamma) - &base;
                if !gap.is_positive() {
                    debug_assert!(gap.is_zero(), "feasible cell with a point below its normal");
                    return Err(NotFine);
                }
            }
        }
        let det = det_i64(&rows).abs();
        if det.is_zero() {
            return Err(NotFine);
        }
        Ok(MixedCell {
            edges: edges.to_vec(),
            points: edges
                .iter()
                .enumerate()
                .map(|(s, &(p, q))| (self.points[s][p].clone(), self.points[s][q].clone()))
                .collect(),
            normal: gamma,
            det: det.to_u64().expect("cell determinant fits in 64 bits"),
        })
    }
}

pub(crate) fn lifted_value(point: &[i64], lift: i64, gamma: &[BigRational]) -> BigRational {
    point
        .iter()
        .zip(gamma)
        .fold(BigRational::from_integer(BigInt::from(lift)), |acc, (&a, g)| acc + g * BigInt::from(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Exponent;

    fn support(points: &[&[i64]]) -> MonomialSupport {
        MonomialSupport::new("s", points.iter().map(|p| Exponent::new(p.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn two_triangles() {
        let t = support(&[&[0, 0], &[1, 0], &[0, 1]]);
        let sub = mixed_cells(&[t.clone(), t], RandomSeed(7)).unwrap();
        assert_eq!(sub.total, 1);
        assert!(sub.cells.iter().all(|c| c.det >= 1));
    }

    #[test]
    fn segment_in_one_dimension() {
        let sub = mixed_cells(&[support(&[&[0], &[5]])], RandomSeed(1)).unwrap();
        assert_eq!(sub.cells.len(), 1);
        assert_eq!(sub.cells[0].det, 5);
    }

    #[test]
    fn single_points_have_no_cells() {
        let p = support(&[&[1, 1]]);
        assert_eq!(mixed_cells(&[p.clone(), p], RandomSeed(3)).unwrap().total, 0);
    }

    #[test]
    fn dense_quadrics_meet_in_four_points() {
        let q = support(&[&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]]);
        for seed in 0..5 {
            assert_eq!(mixed_cells(&[q.clone(), q.clone()], RandomSeed(seed)).unwrap().total, 4);
        }
    }

    #[test]
    fn dimension_checks() {
        let t = support(&[&[0, 0], &[1, 0]]);
        assert!(matches!(mixed_cells(&[t], RandomSeed(0)), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(mixed_cells(&[], RandomSeed(0)), Err(Error::EmptySystem)));
    }

    #[test]
    fn tiny_lifting_range_exhausts_budget() {
        // With every lifting value zero each lifted support is flat, so
        // every cell has ties.
        let q = support(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let err = mixed_cells_in_range(&[q.clone(), q], RandomSeed(0), 1).unwrap_err();
        assert!(matches!(err, Error::LiftingBudgetExhausted { attempts: LIFTING_ATTEMPTS, .. }));
    }

    #[test]
    fn cells_certify_their_normals() {
        let a = support(&[&[0, 0], &[3, 1], &[1, 2], &[2, 2]]);
        let b = support(&[&[0, 1], &[2, 0], &[1, 3]]);
        let sub = mixed_cells(&[a.clone(), b.clone()], RandomSeed(11)).unwrap();
        for cell in &sub.cells {
            for (s, sup) in [&a, &b].iter().enumerate() {
                let (p, q) = cell.edges[s];
                let pts = sup.points();
                let vp = lifted_value(&pts[p], sub.lifting[s][p], &cell.normal);
                assert_eq!(vp, lifted_value(&pts[q], sub.lifting[s][q], &cell.normal));
                for (j, pt) in pts.iter().enumerate() {
                    if j != p && j != q {
                        assert!(lifted_value(pt, sub.lifting[s][j], &cell.normal) > vp);
                    }
                }
            }
        }
    }
}
