//! Co-convex regions `C = Γ \ (Γ_1 ∪ ... ∪ Γ_s)` inside the nonnegative
//! orthant, their volumes and their dilated lattice-point counts.

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::Zero;
use rayon::prelude::*;

use super::{HalfSpace, NewtonPolyhedron, PolyError, Polytope};
use crate::ideal::MonomialIdeal;

const MAX_DOUBLINGS: u32 = 12;

/// Certifies `C ⊆ [0, bound]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoxCertificate {
    pub bound: i64,
    pub method: CertificateMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMethod {
    /// The outer region is itself a polytope inside the box.
    BoundedOuter,
    /// All normals are nonnegative and no coordinate direction escapes.
    Monotone,
}

#[derive(Clone, Debug)]
pub struct CoConvexRegion {
    dim: usize,
    outer: Vec<HalfSpace>,
    inner: Vec<Vec<HalfSpace>>,
    certificate: BoxCertificate,
}

fn ceil_ratio(r: Rational64) -> i64 {
    r.ceil().to_integer()
}

fn all_monotone<'a>(mut hs: impl Iterator<Item = &'a HalfSpace>) -> bool {
    hs.all(HalfSpace::is_nonnegative)
}

/// Smallest box size for which coordinates beyond it never change membership
/// in a monotone half-space.
fn monotone_bound<'a>(hs: impl Iterator<Item = &'a HalfSpace>) -> i64 {
    let mut b = 1;
    for h in hs {
        for &c in h.normal() {
            if c > 0 {
                b = b.max(ceil_ratio(h.offset() / Rational64::from_integer(c)) + 1);
            }
        }
    }
    b
}

fn box_constraints(dim: usize, bound: i64) -> Vec<HalfSpace> {
    (0..dim)
        .map(|i| {
            let mut n = vec![0; dim];
            n[i] = -1;
            HalfSpace {
                normal: n,
                offset: Rational64::from_integer(-bound),
            }
        })
        .collect()
}

fn with_orthant(dim: usize, mut hs: Vec<HalfSpace>) -> Vec<HalfSpace> {
    for i in 0..dim {
        let c = HalfSpace::coordinate(dim, i);
        if !hs.contains(&c) {
            hs.push(c);
        }
    }
    hs
}

/// Volume of `(outer ∩ box) \ ∪ inner`, splitting the current cell into
/// disjoint convex pieces outside each inner region in turn.
fn clipped_volume(
    dim: usize,
    outer: &[HalfSpace],
    inner: &[Vec<HalfSpace>],
    bound: i64,
) -> Result<BigRational, PolyError> {
    let mut cell = outer.to_vec();
    cell.extend(box_constraints(dim, bound));
    difference_volume(dim, &mut cell, inner)
}

fn difference_volume(
    dim: usize,
    cell: &mut Vec<HalfSpace>,
    inner: &[Vec<HalfSpace>],
) -> Result<BigRational, PolyError> {
    let p = Polytope::from_halfspaces(dim, cell)?;
    if !p.is_full_dimensional() {
        return Ok(BigRational::zero());
    }
    let Some((first, rest)) = inner.split_first() else {
        return Ok(p.volume());
    };
    let mut cutting = Vec::new();
    for h in first {
        let (above, below) = p.sides(h);
        if !above {
            // the cell meets this inner region in measure zero
            return difference_volume(dim, cell, rest);
        }
        if below {
            cutting.push(h);
        }
    }
    let len = cell.len();
    let mut total = BigRational::zero();
    for h in cutting {
        cell.push(HalfSpace {
            normal: h.normal.iter().map(|c| -c).collect(),
            offset: -h.offset,
        });
        total += difference_volume(dim, cell, rest)?;
        cell.pop();
        cell.push(h.clone());
    }
    cell.truncate(len);
    Ok(total)
}

/// Exact test for whether a region with nonnegative normals is empty.
/// Such a region is empty iff its part inside a large enough box has
/// volume zero.
pub(crate) fn monotone_region_is_empty(
    dim: usize,
    outer: &[HalfSpace],
    inner: &[Vec<HalfSpace>],
) -> Result<bool, PolyError> {
    debug_assert!(all_monotone(outer.iter().chain(inner.iter().flatten())));
    let outer = with_orthant(dim, outer.to_vec());
    let bound = monotone_bound(outer.iter().chain(inner.iter().flatten()));
    Ok(clipped_volume(dim, &outer, inner, bound)?.is_zero())
}

impl CoConvexRegion {
    /// `C = outer \ ∪ inner`, intersected with the nonnegative orthant.
    pub fn new(
        dim: usize,
        outer: Vec<HalfSpace>,
        inner: Vec<Vec<HalfSpace>>,
    ) -> Result<Self, PolyError> {
        let start = 1 + outer
            .iter()
            .chain(inner.iter().flatten())
            .map(|h| ceil_ratio(h.offset()).max(0))
            .sum::<i64>();
        Self::with_initial_bound(dim, outer, inner, start)
    }

    /// `Γ = ∩ conv(outer_k)` minus `∪ conv(inner_j)`. The initial box size is
    /// one more than the sum of all generator degrees.
    pub fn from_ideals(
        dim: usize,
        outer: &[MonomialIdeal],
        inner: &[MonomialIdeal],
    ) -> Result<Self, PolyError> {
        let mut start = 1i64;
        let mut out_hs = Vec::new();
        for i in outer {
            check_dim(dim, i.dim())?;
            out_hs.extend(NewtonPolyhedron::of_ideal(i)?.halfspaces().iter().cloned());
            start += i.gens().iter().map(|g| g.total_degree()).sum::<i64>();
        }
        let mut in_hs = Vec::new();
        for j in inner {
            check_dim(dim, j.dim())?;
            in_hs.push(NewtonPolyhedron::of_ideal(j)?.halfspaces().to_vec());
            start += j.gens().iter().map(|g| g.total_degree()).sum::<i64>();
        }
        Self::with_initial_bound(dim, out_hs, in_hs, start)
    }

    pub fn from_polyhedra(
        outer: &[NewtonPolyhedron],
        inner: &[NewtonPolyhedron],
    ) -> Result<Self, PolyError> {
        let dim = outer
            .first()
            .or(inner.first())
            .map_or(0, NewtonPolyhedron::dim);
        let mut start = 1i64;
        for p in outer.iter().chain(inner) {
            check_dim(dim, p.dim())?;
            start += p.vertices().iter().map(|v| v.total_degree()).sum::<i64>();
        }
        let out_hs = outer.iter().flat_map(|p| p.halfspaces().iter().cloned()).collect();
        let in_hs = inner.iter().map(|p| p.halfspaces().to_vec()).collect();
        Self::with_initial_bound(dim, out_hs, in_hs, start)
    }

    fn with_initial_bound(
        dim: usize,
        outer: Vec<HalfSpace>,
        inner: Vec<Vec<HalfSpace>>,
        start: i64,
    ) -> Result<Self, PolyError> {
        for h in outer.iter().chain(inner.iter().flatten()) {
            check_dim(dim, h.dim())?;
        }
        let outer = with_orthant(dim, outer);
        let certificate = certify(dim, &outer, &inner, start.max(1))?;
        Ok(CoConvexRegion {
            dim,
            outer,
            inner,
            certificate,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outer(&self) -> &[HalfSpace] {
        &self.outer
    }

    pub fn inner(&self) -> &[Vec<HalfSpace>] {
        &self.inner
    }

    pub fn certificate(&self) -> BoxCertificate {
        self.certificate
    }

    /// Whether the integer point `a` lies in `n C`.
    pub fn contains_scaled(&self, n: u64, a: &[i64]) -> bool {
        let n = n as i64;
        self.outer.iter().all(|h| h.contains_scaled(n, a))
            && !self
                .inner
                .iter()
                .any(|p| p.iter().all(|h| h.contains_scaled(n, a)))
    }

    pub fn volume(&self) -> Result<BigRational, PolyError> {
        clipped_volume(self.dim, &self.outer, &self.inner, self.certificate.bound)
    }

    pub fn is_empty(&self) -> Result<bool, PolyError> {
        match self.certificate.method {
            CertificateMethod::Monotone => Ok(self.volume()?.is_zero()),
            CertificateMethod::BoundedOuter => Ok(lattice_free_scan(self)),
        }
    }
}

/// Emptiness for a region without a monotone structure: a nonempty
/// difference of closed polyhedra either has positive volume or contains a
/// rational point, which some dilation sees. Scanning a few dilations is a
/// heuristic, so this is only used when the volume is zero.
fn lattice_free_scan(c: &CoConvexRegion) -> bool {
    if let Ok(v) = c.volume() {
        if !v.is_zero() {
            return false;
        }
    }
    (1..=6).all(|n| lattice_count(c, n) == 0)
}

fn check_dim(expected: usize, found: usize) -> Result<(), PolyError> {
    if expected == found {
        Ok(())
    } else {
        Err(PolyError::DimensionMismatch { expected, found })
    }
}

fn certify(
    dim: usize,
    outer: &[HalfSpace],
    inner: &[Vec<HalfSpace>],
    start: i64,
) -> Result<BoxCertificate, PolyError> {
    if all_monotone(outer.iter().chain(inner.iter().flatten())) {
        let bound = start.max(monotone_bound(outer.iter().chain(inner.iter().flatten())));
        for i in 0..dim {
            // the pieces of each Γ_j that survive x_i -> ∞
            let mut escaping: Vec<Vec<HalfSpace>> = Vec::new();
            let mut covered = false;
            for p in inner {
                let q: Vec<HalfSpace> = p.iter().filter(|h| h.normal()[i] == 0).cloned().collect();
                if q.is_empty() {
                    covered = true;
                    break;
                }
                escaping.push(q);
            }
            if covered {
                continue;
            }
            if !clipped_volume(dim, outer, &escaping, bound)?.is_zero() {
                return Err(PolyError::Unbounded);
            }
        }
        return Ok(BoxCertificate {
            bound,
            method: CertificateMethod::Monotone,
        });
    }
    let hull = match Polytope::from_halfspaces(dim, outer) {
        Ok(p) => p,
        Err(PolyError::Unbounded) => {
            return Err(PolyError::Certificate(
                "outer region is unbounded and not all normals are nonnegative".into(),
            ))
        }
        Err(e) => return Err(e),
    };
    let mut bound = start;
    for _ in 0..=MAX_DOUBLINGS {
        let b = BigRational::from_integer(bound.into());
        if hull.points().iter().flatten().all(|x| *x <= b) {
            return Ok(BoxCertificate {
                bound,
                method: CertificateMethod::BoundedOuter,
            });
        }
        bound = bound.checked_mul(2).ok_or(PolyError::Overflow)?;
    }
    Err(PolyError::Certificate(format!(
        "outer polytope does not fit in [0, {bound}]^{dim}"
    )))
}

/// Exact volume of a co-convex region.
pub fn coconvex_volume(c: &CoConvexRegion) -> Result<BigRational, PolyError> {
    c.volume()
}

/// The integer values of the last coordinate satisfying every inequality of
/// `hs` (scaled by `n`) given the other coordinates, clipped to `[0, top]`.
fn last_interval(hs: &[HalfSpace], n: i128, prefix: &[i64], top: i128) -> Option<(i128, i128)> {
    let last = prefix.len();
    let (mut lo, mut hi) = (0i128, top);
    for h in hs {
        let c = h.normal();
        let s: i128 = c[..last]
            .iter()
            .zip(prefix)
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        let den = *h.offset().denom() as i128;
        let k = c[last] as i128 * den;
        let l = n * *h.offset().numer() as i128 - den * s;
        match k.cmp(&0) {
            std::cmp::Ordering::Greater => lo = lo.max(Integer::div_ceil(&l, &k)),
            std::cmp::Ordering::Less => hi = hi.min(Integer::div_floor(&l, &k)),
            std::cmp::Ordering::Equal => {
                if l > 0 {
                    return None;
                }
            }
        }
        if lo > hi {
            return None;
        }
    }
    Some((lo, hi))
}

fn count_last(c: &CoConvexRegion, n: i128, prefix: &[i64], top: i128) -> u64 {
    let Some((lo, hi)) = last_interval(&c.outer, n, prefix, top) else {
        return 0;
    };
    let mut holes: Vec<(i128, i128)> = c
        .inner
        .iter()
        .filter_map(|p| last_interval(p, n, prefix, top))
        .map(|(a, b)| (a.max(lo), b.min(hi)))
        .filter(|(a, b)| a <= b)
        .collect();
    holes.sort_unstable();
    let mut covered = 0i128;
    let mut reach = lo - 1;
    for (a, b) in holes {
        let a = a.max(reach + 1);
        if a <= b {
            covered += b - a + 1;
            reach = b;
        }
    }
    (hi - lo + 1 - covered) as u64
}

fn count_prefixes(c: &CoConvexRegion, n: i128, prefix: &mut Vec<i64>, top: i128) -> u64 {
    if prefix.len() + 1 == c.dim {
        return count_last(c, n, prefix, top);
    }
    let mut total = 0;
    for x in 0..=top as i64 {
        prefix.push(x);
        total += count_prefixes(c, n, prefix, top);
        prefix.pop();
    }
    total
}

/// `#(Z^d ∩ nC)`, by scanning the dilated box. The last coordinate is counted
/// in closed form from interval arithmetic.
pub fn lattice_count(c: &CoConvexRegion, n: u64) -> u64 {
    let top = c.certificate.bound as i128 * n as i128;
    let n = n as i128;
    match c.dim {
        0 => u64::from(c.contains_scaled(n as u64, &[])),
        1 => count_last(c, n, &[], top),
        _ => (0..=top as i64)
            .into_par_iter()
            .map(|x| count_prefixes(c, n, &mut vec![x], top))
            .sum(),
    }
}
