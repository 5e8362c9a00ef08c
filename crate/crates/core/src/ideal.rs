//! Monomial ideals over `k[x_1, ..., x_d]`, stored as minimal generating sets of
//! exponent vectors.
//!
//! Variable indices are 0-based in the API and 1-based in the text DSL.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::polyhedra::{IntegralClosurePower, NewtonPolyhedron, PolyError};

/// Largest ambient dimension accepted anywhere in the crate. Face sets and
/// localization masks are bitsets over the `2^d` subsets of the variables.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative exponent {value} for variable x{}", .index + 1)]
    NegativeExponent { index: usize, value: i64 },
    #[error("ambient dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("variable index {index} outside the ring of dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("exponent overflow")]
    Overflow,
    #[error("family member {index} requested but only {len} explicit members are stored")]
    OutOfRange { index: u64, len: usize },
    #[error("explicit family is not graded: I_{n} * I_{m} is not contained in I_{sum}", sum = .n + .m)]
    NotGraded { n: usize, m: usize },
    #[error(transparent)]
    Polyhedron(#[from] PolyError),
}

/// A degree vector `a` in `Z^d`. Monomial generators have nonnegative
/// entries; graded degrees of local cohomology may have negative ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `G_a`: the set of coordinates with negative entries.
    pub fn negative_support(&self) -> LocalizationMask {
        let mut bits = 0u32;
        for (i, &e) in self.0.iter().enumerate() {
            if e < 0 {
                bits |= 1 << i;
            }
        }
        LocalizationMask(bits)
    }

    /// `a^+`: negative entries clamped to zero.
    pub fn positive_part(&self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|&e| e.max(0)).collect())
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        divides(&self.0, &other.0)
    }

    pub fn checked_add(&self, other: &ExponentVector) -> Result<ExponentVector, IdealError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(IdealError::Overflow))
            .collect::<Result<Vec<_>, _>>()
            .map(ExponentVector)
    }

    /// Componentwise maximum (exponent of the lcm).
    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn check_nonnegative(&self) -> Result<(), IdealError> {
        match self.0.iter().position(|&e| e < 0) {
            Some(index) => Err(IdealError::NegativeExponent {
                index,
                value: self.0[index],
            }),
            None => Ok(()),
        }
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[inline]
pub(crate) fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A subset `F` of the variables, used by the localization map that sends
/// `x_i` to 1 for `i` in `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LocalizationMask(pub u32);

impl LocalizationMask {
    pub const EMPTY: LocalizationMask = LocalizationMask(0);

    pub fn from_vars(vars: &[usize]) -> Self {
        LocalizationMask(vars.iter().fold(0, |acc, &v| acc | (1 << v)))
    }

    /// The mask of all `dim` variables.
    pub fn full(dim: usize) -> Self {
        LocalizationMask(((1u64 << dim) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, var: usize) -> bool {
        self.0 >> var & 1 == 1
    }

    pub fn union(self, other: LocalizationMask) -> Self {
        LocalizationMask(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn vars(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 >> i & 1 == 1)
    }

    pub fn validate(self, dim: usize) -> Result<(), IdealError> {
        match self.vars().find(|&v| v >= dim) {
            Some(index) => Err(IdealError::VariableOutOfRange { index, dim }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for LocalizationMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.vars().map(|v| format!("x{}", v + 1)).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// A monomial ideal given by its minimal generators, sorted lexicographically.
///
/// The unit ideal is the single generator `0`; the zero ideal has no
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<ExponentVector>,
}

/// Reduce `gens` to the unique antichain generating the same ideal.
pub fn minimalize<I>(dim: usize, gens: I) -> Result<MonomialIdeal, IdealError>
where
    I: IntoIterator<Item = ExponentVector>,
{
    if dim > MAX_DIM {
        return Err(IdealError::DimensionTooLarge(dim));
    }
    let mut all = Vec::new();
    for g in gens {
        if g.dim() != dim {
            return Err(IdealError::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        g.check_nonnegative()?;
        all.push(g);
    }
    Ok(MonomialIdeal {
        dim,
        gens: minimal_antichain(all),
    })
}

fn minimal_antichain(mut all: Vec<ExponentVector>) -> Vec<ExponentVector> {
    // A divisor has total degree <= its multiple, so scanning by degree lets
    // each candidate be tested only against already accepted generators.
    all.sort_by(|a, b| match a.total_degree().cmp(&b.total_degree()) {
        Ordering::Equal => a.cmp(b),
        o => o,
    });
    all.dedup();
    let mut kept: Vec<ExponentVector> = Vec::with_capacity(all.len());
    for g in all {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

impl MonomialIdeal {
    pub fn new<I>(dim: usize, gens: I) -> Result<Self, IdealError>
    where
        I: IntoIterator<Item = ExponentVector>,
    {
        minimalize(dim, gens)
    }

    /// Convenience constructor from raw exponent rows.
    pub fn from_exponents(dim: usize, rows: &[&[i64]]) -> Result<Self, IdealError> {
        minimalize(dim, rows.iter().map(|r| ExponentVector(r.to_vec())))
    }

    pub fn unit(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            gens: vec![ExponentVector::zeros(dim)],
        }
    }

    pub fn zero(dim: usize) -> Self {
        MonomialIdeal { dim, gens: vec![] }
    }

    /// The maximal homogeneous ideal `(x_1, ..., x_d)`.
    pub fn maximal(dim: usize) -> Self {
        let gens = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                ExponentVector(e)
            })
            .collect();
        MonomialIdeal { dim, gens }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[ExponentVector] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].0.iter().all(|&e| e == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn check_same_dim(&self, other: &MonomialIdeal) -> Result<(), IdealError> {
        if self.dim != other.dim {
            return Err(IdealError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_same_dim(other)?;
        let mut prods = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                prods.push(a.checked_add(b)?);
            }
        }
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: minimal_antichain(prods),
        })
    }

    /// `I^n` by repeated multiplication, minimalizing after every step.
    /// `I^0` is the unit ideal.
    pub fn power(&self, n: u32) -> Result<MonomialIdeal, IdealError> {
        let mut acc = MonomialIdeal::unit(self.dim);
        for _ in 0..n {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// `I_F`: set `x_i = 1` for every `i` in `mask`.
    pub fn localize(&self, mask: LocalizationMask) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                ExponentVector(
                    g.0.iter()
                        .enumerate()
                        .map(|(i, &e)| if mask.contains(i) { 0 } else { e })
                        .collect(),
                )
            })
            .collect();
        MonomialIdeal {
            dim: self.dim,
            gens: minimal_antichain(gens),
        }
    }

    pub fn contains(&self, a: &ExponentVector) -> Result<bool, IdealError> {
        if a.dim() != self.dim {
            return Err(IdealError::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        a.check_nonnegative()?;
        Ok(self.contains_exponents(&a.0))
    }

    /// Membership without validation; `a` must have length `dim`.
    #[inline]
    pub fn contains_exponents(&self, a: &[i64]) -> bool {
        self.gens.iter().any(|g| divides(&g.0, a))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
        self.check_same_dim(other)?;
        let mut lcms = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                lcms.push(a.lcm(b));
            }
        }
        Ok(MonomialIdeal {
            dim: self.dim,
            gens: minimal_antichain(lcms),
        })
    }

    /// `I : m^inf`, the intersection over `i` of the localizations at `{i}`.
    pub fn saturate(&self) -> MonomialIdeal {
        if self.is_zero() || self.dim == 0 {
            return self.clone();
        }
        let mut acc = self.localize(LocalizationMask::from_vars(&[0]));
        for i in 1..self.dim {
            let li = self.localize(LocalizationMask::from_vars(&[i]));
            acc = acc.intersect(&li).expect("same dimension");
        }
        acc
    }

    /// Largest exponent of each variable over the generators.
    pub fn max_exponents(&self) -> Vec<i64> {
        let mut m = vec![0; self.dim];
        for g in &self.gens {
            for (mi, &e) in m.iter_mut().zip(&g.0) {
                *mi = (*mi).max(e);
            }
        }
        m
    }

    /// True when `I` contains a power of every variable.
    pub fn is_m_primary(&self) -> bool {
        (0..self.dim).all(|i| {
            self.gens
                .iter()
                .any(|g| g.0.iter().enumerate().all(|(j, &e)| j == i || e == 0))
        })
    }

    /// `x^a` in `I` for every `a` in `J`, i.e. `J ⊆ I`.
    pub fn contains_ideal(&self, other: &MonomialIdeal) -> bool {
        other.gens.iter().all(|g| self.contains_exponents(&g.0))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::format_ideal(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Powers,
    SaturatedPowers,
    IntegralClosurePowers,
    ExplicitList,
}

/// A graded family `(I_n)`, with `I_0` the unit ideal.
#[derive(Clone, Debug)]
pub struct IdealFamily {
    base: MonomialIdeal,
    kind: FamilyKind,
    explicit: Vec<MonomialIdeal>,
}

/// The `n`-th member of a family. Integral closures are represented by a
/// polyhedral membership test rather than a generator list.
#[derive(Clone, Debug)]
pub enum FamilyMember {
    Ideal(MonomialIdeal),
    IntegralClosure(IntegralClosurePower),
}

impl FamilyMember {
    pub fn dim(&self) -> usize {
        match self {
            FamilyMember::Ideal(i) => i.dim(),
            FamilyMember::IntegralClosure(c) => c.dim(),
        }
    }

    /// Membership of a nonnegative exponent vector.
    pub fn contains_exponents(&self, a: &[i64]) -> bool {
        match self {
            FamilyMember::Ideal(i) => i.contains_exponents(a),
            FamilyMember::IntegralClosure(c) => c.contains_exponents(a),
        }
    }
}

impl IdealFamily {
    pub fn powers(base: MonomialIdeal) -> Self {
        IdealFamily {
            base,
            kind: FamilyKind::Powers,
            explicit: vec![],
        }
    }

    pub fn saturated_powers(base: MonomialIdeal) -> Self {
        IdealFamily {
            base,
            kind: FamilyKind::SaturatedPowers,
            explicit: vec![],
        }
    }

    pub fn integral_closure_powers(base: MonomialIdeal) -> Self {
        IdealFamily {
            base,
            kind: FamilyKind::IntegralClosurePowers,
            explicit: vec![],
        }
    }

    /// An explicit list `I_1, ..., I_N`. Gradedness is not checked here; see
    /// [`IdealFamily::check_graded`].
    pub fn explicit(members: Vec<MonomialIdeal>) -> Result<Self, IdealError> {
        let base = members.first().cloned().unwrap_or_else(|| MonomialIdeal::unit(0));
        for m in &members {
            base.check_same_dim(m)?;
        }
        Ok(IdealFamily {
            base,
            kind: FamilyKind::ExplicitList,
            explicit: members,
        })
    }

    pub fn base(&self) -> &MonomialIdeal {
        &self.base
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn member(&self, n: u64) -> Result<FamilyMember, IdealError> {
        if n == 0 {
            return Ok(FamilyMember::Ideal(MonomialIdeal::unit(self.dim())));
        }
        let exponent = u32::try_from(n).map_err(|_| IdealError::Overflow)?;
        match self.kind {
            FamilyKind::Powers => Ok(FamilyMember::Ideal(self.base.power(exponent)?)),
            FamilyKind::SaturatedPowers => {
                Ok(FamilyMember::Ideal(self.base.power(exponent)?.saturate()))
            }
            FamilyKind::IntegralClosurePowers => {
                let poly = NewtonPolyhedron::of_ideal(&self.base)?;
                Ok(FamilyMember::IntegralClosure(IntegralClosurePower::new(
                    poly, n,
                )))
            }
            FamilyKind::ExplicitList => self
                .explicit
                .get(n as usize - 1)
                .cloned()
                .map(FamilyMember::Ideal)
                .ok_or(IdealError::OutOfRange {
                    index: n,
                    len: self.explicit.len(),
                }),
        }
    }

    /// Verify `I_n I_m ⊆ I_{n+m}` for every pair inside the stored range.
    pub fn check_graded(&self) -> Result<(), IdealError> {
        if self.kind != FamilyKind::ExplicitList {
            return Ok(());
        }
        let len = self.explicit.len();
        for n in 1..=len {
            for m in n..=len - n {
                let prod = self.explicit[n - 1].multiply(&self.explicit[m - 1])?;
                if !self.explicit[n + m - 1].contains_ideal(&prod) {
                    return Err(IdealError::NotGraded { n, m });
                }
            }
        }
        Ok(())
    }
}

/// Convenience: `family_member(f, n)`.
pub fn family_member(f: &IdealFamily, n: u64) -> Result<FamilyMember, IdealError> {
    f.member(n)
}
