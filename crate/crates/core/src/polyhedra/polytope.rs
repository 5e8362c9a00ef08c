//! Bounded polytopes: vertex enumeration from inequalities, facet enumeration
//! from points, and exact volume by a pulling triangulation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use super::dd::{self, Ray};
use super::{HalfSpace, PolyError};
use crate::linalg;

/// A polytope stored as homogeneous integer points `(x, t)` with `t > 0`
/// (the point is `x / t`) plus the inequalities used for face incidence.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    points: Vec<Vec<i128>>,
    /// Homogeneous rows `r` with `r . (x, t) >= 0` on the polytope.
    rows: Vec<Vec<i128>>,
    /// `incidence[p]` lists the rows tight at point `p`.
    incidence: Vec<Vec<bool>>,
}

pub(crate) fn halfspace_row(h: &HalfSpace) -> Vec<i128> {
    let den = *h.offset().denom() as i128;
    let num = *h.offset().numer() as i128;
    let mut row: Vec<i128> = h.normal().iter().map(|&c| c as i128 * den).collect();
    row.push(-num);
    row
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Polytope {
    /// The set `{ x : h(x) for every h }`. Fails with `Unbounded` when the set
    /// is nonempty and unbounded; an empty set yields a polytope without
    /// points.
    pub fn from_halfspaces(dim: usize, halfspaces: &[HalfSpace]) -> Result<Self, PolyError> {
        let mut rows: Vec<Vec<i128>> = halfspaces.iter().map(halfspace_row).collect();
        let mut t_row = vec![0i128; dim + 1];
        t_row[dim] = 1;
        rows.push(t_row);
        let rays = match dd::extreme_rays(&rows, dim + 1) {
            Ok(r) => r,
            // a lineality space means unbounded unless empty; every caller
            // bounds the region, so report it as such
            Err(PolyError::NotPointed) => return Err(PolyError::Unbounded),
            Err(e) => return Err(e),
        };
        let mut points = Vec::new();
        let mut incidence: Vec<Vec<bool>> = Vec::new();
        for Ray { coords, tight } in rays {
            if coords[dim] == 0 {
                return Err(PolyError::Unbounded);
            }
            incidence.push((0..rows.len()).map(|r| tight.contains(r)).collect());
            points.push(coords);
        }
        rows.pop();
        for inc in incidence.iter_mut() {
            inc.pop();
        }
        Ok(Polytope {
            dim,
            points,
            rows,
            incidence,
        })
    }

    /// Convex hull of rational points. Lower-dimensional hulls are kept with
    /// no facet information and have volume zero.
    pub fn from_points(dim: usize, pts: &[Vec<Rational64>]) -> Result<Self, PolyError> {
        let mut points: Vec<Vec<i128>> = Vec::with_capacity(pts.len());
        for p in pts {
            if p.len() != dim {
                return Err(PolyError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            let l = p.iter().fold(1i128, |l, x| l.lcm(&(*x.denom() as i128)));
            let mut h: Vec<i128> = p
                .iter()
                .map(|x| *x.numer() as i128 * (l / *x.denom() as i128))
                .collect();
            h.push(l);
            dd::normalize(&mut h);
            points.push(h);
        }
        let uniq: BTreeSet<Vec<i128>> = points.into_iter().collect();
        let points: Vec<Vec<i128>> = uniq.into_iter().collect();
        if points.is_empty() || linalg::rank(&points) < dim + 1 {
            return Ok(Polytope {
                dim,
                points,
                rows: vec![],
                incidence: vec![],
            });
        }
        let facets = dd::extreme_rays(&points, dim + 1)?;
        let rows: Vec<Vec<i128>> = facets.into_iter().map(|r| r.coords).collect();
        let incidence = points
            .iter()
            .map(|p| rows.iter().map(|r| dot(r, p) == 0).collect())
            .collect();
        Ok(Polytope {
            dim,
            points,
            rows,
            incidence,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Vertices (or hull points) as rationals.
    pub fn points(&self) -> Vec<Vec<BigRational>> {
        self.points
            .iter()
            .map(|h| {
                let t = BigInt::from(h[self.dim]);
                h[..self.dim]
                    .iter()
                    .map(|&x| BigRational::new(BigInt::from(x), t.clone()))
                    .collect()
            })
            .collect()
    }

    /// Facet inequalities as half-spaces (only for full-dimensional hulls).
    pub fn facets(&self) -> Vec<HalfSpace> {
        self.rows
            .iter()
            .filter_map(|r| HalfSpace::from_homogeneous(r).ok())
            .collect()
    }

    /// Whether some point lies strictly inside `h`, and whether some point
    /// lies strictly outside it.
    pub(crate) fn sides(&self, h: &HalfSpace) -> (bool, bool) {
        let row = halfspace_row(h);
        let mut above = false;
        let mut below = false;
        for p in &self.points {
            let v = dot(&row, p);
            above |= v > 0;
            below |= v < 0;
        }
        (above, below)
    }

    pub fn is_full_dimensional(&self) -> bool {
        !self.points.is_empty() && linalg::rank(&self.points) == self.dim + 1
    }

    /// Exact `dim`-dimensional volume.
    pub fn volume(&self) -> BigRational {
        if !self.is_full_dimensional() {
            return BigRational::zero();
        }
        let all: Vec<usize> = (0..self.points.len()).collect();
        let mut total = BigRational::zero();
        for simplex in self.pulling_triangulation(&all, self.dim) {
            total += self.simplex_volume(&simplex);
        }
        total
    }

    fn simplex_volume(&self, idx: &[usize]) -> BigRational {
        let rows: Vec<Vec<i128>> = idx.iter().map(|&i| self.points[i].clone()).collect();
        let det = linalg::determinant(&rows).abs();
        let mut denom = factorial(self.dim);
        for &i in idx {
            denom *= BigInt::from(self.points[i][self.dim]);
        }
        BigRational::new(det, denom)
    }

    /// Triangulate the face spanned by `face` (point indices, affine
    /// dimension `k`) by coning from its first point over the facets that
    /// avoid it.
    fn pulling_triangulation(&self, face: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for r in 0..self.rows.len() {
            if self.incidence[apex][r] {
                continue;
            }
            let s: Vec<usize> = face
                .iter()
                .copied()
                .filter(|&p| self.incidence[p][r])
                .collect();
            if s.len() >= k {
                subfaces.insert(s);
            }
        }
        let mut out = Vec::new();
        for s in subfaces {
            let pts: Vec<Vec<i128>> = s.iter().map(|&i| self.points[i].clone()).collect();
            if linalg::rank(&pts) != k {
                continue;
            }
            for mut simplex in self.pulling_triangulation(&s, k - 1) {
                simplex.insert(0, apex);
                out.push(simplex);
            }
        }
        out
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact volume of the convex hull of a finite point set; zero when the hull
/// is lower-dimensional.
pub fn polytope_volume(dim: usize, points: &[Vec<Rational64>]) -> Result<BigRational, PolyError> {
    Ok(Polytope::from_points(dim, points)?.volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i64]) -> Vec<Rational64> {
        v.iter().map(|&x| Rational64::from_integer(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn unit_simplex(d: usize) -> Vec<Vec<Rational64>> {
        let mut pts = vec![r(&vec![0; d])];
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            pts.push(r(&e));
        }
        pts
    }

    #[test]
    fn simplex_volumes() {
        assert_eq!(polytope_volume(3, &unit_simplex(3)).unwrap(), q(1, 6));
        assert_eq!(
            polytope_volume(2, &[r(&[0, 0]), r(&[6, 0]), r(&[0, 6])]).unwrap(),
            q(18, 1)
        );
    }

    #[test]
    fn square_and_interior_points() {
        let sq = vec![r(&[0, 0]), r(&[1, 0]), r(&[0, 1]), r(&[1, 1])];
        assert_eq!(polytope_volume(2, &sq).unwrap(), q(1, 1));
        let mut more = sq.clone();
        more.insert(0, vec![Rational64::new(1, 2), Rational64::new(1, 3)]);
        more.push(vec![Rational64::new(1, 2), Rational64::from_integer(0)]);
        assert_eq!(polytope_volume(2, &more).unwrap(), q(1, 1));
    }

    #[test]
    fn lower_dimensional_hull_has_zero_volume() {
        let seg = vec![r(&[0, 0]), r(&[1, 1]), r(&[2, 2])];
        assert_eq!(polytope_volume(2, &seg).unwrap(), q(0, 1));
        assert_eq!(polytope_volume(2, &[]).unwrap(), q(0, 1));
    }

    #[test]
    fn cube_from_halfspaces() {
        let d = 4;
        let mut hs = Vec::new();
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            hs.push(HalfSpace::new(e.clone(), Rational64::from_integer(0)).unwrap());
            e[i] = -1;
            hs.push(HalfSpace::new(e, Rational64::from_integer(-2)).unwrap());
        }
        let p = Polytope::from_halfspaces(d, &hs).unwrap();
        assert_eq!(p.points().len(), 16);
        assert_eq!(p.volume(), q(16, 1));
    }

    #[test]
    fn cross_polytope_is_degenerate_for_dd() {
        // |x|+|y|+|z| <= 1: every vertex lies on four facets
        let mut hs = Vec::new();
        for s in 0..8 {
            let n: Vec<i64> = (0..3).map(|i| if s >> i & 1 == 1 { 1 } else { -1 }).collect();
            hs.push(HalfSpace::new(n, Rational64::from_integer(-1)).unwrap());
        }
        let p = Polytope::from_halfspaces(3, &hs).unwrap();
        assert_eq!(p.points().len(), 6);
        assert_eq!(p.volume(), q(4, 3));
    }

    #[test]
    fn unbounded_is_reported() {
        let hs = vec![HalfSpace::new(vec![1, 0], Rational64::from_integer(0)).unwrap(),
                      HalfSpace::new(vec![0, 1], Rational64::from_integer(0)).unwrap()];
        assert!(matches!(Polytope::from_halfspaces(2, &hs), Err(PolyError::Unbounded)));
    }

    #[test]
    fn empty_intersection() {
        let hs = vec![
            HalfSpace::new(vec![1], Rational64::from_integer(2)).unwrap(),
            HalfSpace::new(vec![-1], Rational64::from_integer(-1)).unwrap(),
        ];
        let p = Polytope::from_halfspaces(1, &hs).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.volume(), q(0, 1));
    }
}
