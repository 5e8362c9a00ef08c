//! Exact polyhedral geometry over the rationals: Newton polyhedra, integral
//! closure membership, polytope volumes and co-convex regions.

mod dd;
mod polytope;
mod region;

use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use thiserror::Error;

use crate::ideal::{minimalize, ExponentVector, LocalizationMask, MonomialIdeal};

pub use polytope::{polytope_volume, Polytope};
pub(crate) use region::monotone_region_is_empty;
pub use region::{coconvex_volume, lattice_count, BoxCertificate, CertificateMethod, CoConvexRegion};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the Newton polyhedron of the zero ideal is undefined")]
    Undefined,
    #[error("half-space normal must be nonzero")]
    ZeroNormal,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("arithmetic overflow in exact polyhedral computation")]
    Overflow,
    #[error("could not certify a bounding box: {0}")]
    Certificate(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

/// The closed half-space `<normal, x> >= offset`, with a primitive integer
/// normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    normal: Vec<i64>,
    offset: Rational64,
}

impl HalfSpace {
    pub fn new(normal: Vec<i64>, offset: Rational64) -> Result<Self, PolyError> {
        let g = normal.iter().fold(0i64, |g, x| g.gcd(x));
        if g == 0 {
            return Err(PolyError::ZeroNormal);
        }
        Ok(HalfSpace {
            normal: normal.iter().map(|x| x / g).collect(),
            offset: offset / Rational64::from_integer(g),
        })
    }

    /// From a homogeneous row `(c, r)` meaning `c . x + r >= 0`.
    pub(crate) fn from_homogeneous(row: &[i128]) -> Result<Self, PolyError> {
        let (c, r) = row.split_at(row.len() - 1);
        let normal = c
            .iter()
            .map(|&x| i64::try_from(x).map_err(|_| PolyError::Overflow))
            .collect::<Result<Vec<_>, _>>()?;
        let off = i64::try_from(-r[0]).map_err(|_| PolyError::Overflow)?;
        HalfSpace::new(normal, Rational64::from_integer(off))
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    /// `<normal, a> >= scale * offset` for an integer point.
    pub fn contains_scaled(&self, scale: i64, a: &[i64]) -> bool {
        let lhs: i128 = self
            .normal
            .iter()
            .zip(a)
            .map(|(&c, &x)| c as i128 * x as i128)
            .sum();
        lhs * *self.offset.denom() as i128 >= scale as i128 * *self.offset.numer() as i128
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        self.contains_scaled(1, a)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.normal.iter().all(|&c| c >= 0)
    }

    /// The coordinate half-space `x_i >= 0`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut normal = vec![0; dim];
        normal[i] = 1;
        HalfSpace {
            normal,
            offset: Rational64::from_integer(0),
        }
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.normal.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if !first {
                f.write_str(" ")?;
            }
            if mag == 1 {
                write!(f, "{sign}x{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}*x{}", i + 1)?;
            }
            first = false;
        }
        write!(f, " >= {}", self.offset)
    }
}

/// `conv(I)`: the convex hull of the exponents of monomials in `I`, i.e. the
/// hull of the generators plus the nonnegative orthant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<ExponentVector>,
    halfspaces: Vec<HalfSpace>,
}

impl NewtonPolyhedron {
    pub fn of_ideal(ideal: &MonomialIdeal) -> Result<Self, PolyError> {
        if ideal.is_zero() {
            return Err(PolyError::Undefined);
        }
        let d = ideal.dim();
        if d == 0 {
            return Ok(NewtonPolyhedron {
                dim: 0,
                vertices: vec![ExponentVector::zeros(0)],
                halfspaces: vec![],
            });
        }
        // polar of the cone over {(g, 1)} and the recession directions (e_i, 0)
        let mut rows: Vec<Vec<i128>> = ideal
            .gens()
            .iter()
            .map(|g| {
                let mut r: Vec<i128> = g.entries().iter().map(|&x| x as i128).collect();
                r.push(1);
                r
            })
            .collect();
        for i in 0..d {
            let mut r = vec![0i128; d + 1];
            r[i] = 1;
            rows.push(r);
        }
        let rays = dd::extreme_rays(&rows, d + 1)?;
        let mut halfspaces: Vec<HalfSpace> = rays
            .into_iter()
            .filter(|r| r.coords[..d].iter().any(|&x| x != 0))
            .map(|r| HalfSpace::from_homogeneous(&r.coords))
            .collect::<Result<_, _>>()?;
        halfspaces.sort();
        halfspaces.dedup();
        let vertices = ideal
            .gens()
            .iter()
            .filter(|g| {
                let tight: Vec<Vec<i128>> = halfspaces
                    .iter()
                    .filter(|h| h.contains(g.entries()) && !h.contains_strict(g.entries()))
                    .map(|h| h.normal.iter().map(|&c| c as i128).collect())
                    .collect();
                crate::linalg::rank(&tight) == d
            })
            .cloned()
            .collect();
        Ok(NewtonPolyhedron {
            dim: d,
            vertices,
            halfspaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices, which are always generator exponents.
    pub fn vertices(&self) -> &[ExponentVector] {
        &self.vertices
    }

    /// Irredundant facet inequalities. Coordinate inequalities `x_i >= 0`
    /// appear only when they define facets.
    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// Facet inequalities together with all coordinate inequalities.
    pub fn halfspaces_with_orthant(&self) -> Vec<HalfSpace> {
        let mut hs = self.halfspaces.clone();
        for i in 0..self.dim {
            let c = HalfSpace::coordinate(self.dim, i);
            if !hs.contains(&c) {
                hs.push(c);
            }
        }
        hs
    }

    /// Inequalities of `conv(I_F)`, where `I_F` sets `x_i = 1` for `i` in
    /// the mask: the facets whose normal vanishes on `F`.
    pub fn localized_halfspaces(&self, mask: LocalizationMask) -> Vec<HalfSpace> {
        self.halfspaces
            .iter()
            .filter(|h| mask.vars().all(|i| h.normal[i] == 0))
            .cloned()
            .collect()
    }

    /// Largest coordinate of any vertex, per variable.
    pub fn max_vertex_exponents(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v.entries()[i])
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    /// `a` in `n * conv(I)` for a nonnegative integer point.
    pub fn contains_scaled(&self, n: u64, a: &[i64]) -> bool {
        let n = n as i64;
        a.iter().all(|&x| x >= 0) && self.halfspaces.iter().all(|h| h.contains_scaled(n, a))
    }

    /// `a` in `n * conv(I_F)`.
    pub fn contains_scaled_localized(&self, n: u64, mask: LocalizationMask, a: &[i64]) -> bool {
        let n = n as i64;
        a.iter().all(|&x| x >= 0)
            && self
                .halfspaces
                .iter()
                .filter(|h| mask.vars().all(|i| h.normal[i] == 0))
                .all(|h| h.contains_scaled(n, a))
    }
}

impl HalfSpace {
    fn contains_strict(&self, a: &[i64]) -> bool {
        let lhs: i128 = self
            .normal
            .iter()
            .zip(a)
            .map(|(&c, &x)| c as i128 * x as i128)
            .sum();
        lhs * *self.offset.denom() as i128 > *self.offset.numer() as i128
    }
}

/// Integral-closure membership: `x^a` lies in the closure of `I^n` iff `a`
/// lies in `n * conv(I)`.
pub fn nc_membership(p: &NewtonPolyhedron, n: u64, a: &ExponentVector) -> bool {
    p.contains_scaled(n, a.entries())
}

/// The integral closure of `I^n`, represented by its Newton polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralClosurePower {
    polyhedron: NewtonPolyhedron,
    n: u64,
}

impl IntegralClosurePower {
    pub fn new(polyhedron: NewtonPolyhedron, n: u64) -> Self {
        IntegralClosurePower { polyhedron, n }
    }

    pub fn dim(&self) -> usize {
        self.polyhedron.dim()
    }

    pub fn power(&self) -> u64 {
        self.n
    }

    pub fn polyhedron(&self) -> &NewtonPolyhedron {
        &self.polyhedron
    }

    pub fn contains_exponents(&self, a: &[i64]) -> bool {
        self.polyhedron.contains_scaled(self.n, a)
    }

    pub fn contains_localized(&self, mask: LocalizationMask, a: &[i64]) -> bool {
        self.polyhedron.contains_scaled_localized(self.n, mask, a)
    }

    /// Membership is constant in `a_i` once `a_i` reaches this bound.
    pub fn saturation_point(&self) -> Vec<i64> {
        self.polyhedron
            .max_vertex_exponents()
            .iter()
            .map(|&m| m.saturating_mul(self.n as i64))
            .collect()
    }

    /// Explicit minimal generators: the minimal lattice points of
    /// `n * conv(I)`.
    pub fn generators(&self) -> Result<MonomialIdeal, crate::ideal::IdealError> {
        let top = self.saturation_point();
        let d = self.dim();
        let mut found = Vec::new();
        let mut a = vec![0i64; d];
        loop {
            if self.contains_exponents(&a) {
                found.push(ExponentVector::new(a.clone()));
            }
            let mut k = 0;
            while k < d {
                if a[k] < top[k] {
                    a[k] += 1;
                    break;
                }
                a[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        minimalize(d, found)
    }
}

/// Minimal generators of the integral closure of `I^n`.
pub fn integral_closure_generators(
    ideal: &MonomialIdeal,
    n: u64,
) -> Result<MonomialIdeal, crate::ideal::IdealError> {
    if n == 0 {
        return Ok(MonomialIdeal::unit(ideal.dim()));
    }
    IntegralClosurePower::new(NewtonPolyhedron::of_ideal(ideal)?, n).generators()
}
