//! Graded pieces and total lengths of `H^i_m(R/I)` for monomial `I`.
//!
//! `dim H^i_m(R/I)_a = dim H̃_{i-|G_a|-1}(Δ_a(I))`, where `G_a` is the
//! negative support of `a` and `Δ_a(I)` is the complex of
//! `F ⊆ [d] \ G_a` with `x^{a+} ∉ I_{F ∪ G_a}`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::homology::{reduced_homology_dims, FaceSet, FieldSpec, SimplicialComplex};
use crate::ideal::{ExponentVector, FamilyMember, LocalizationMask, MonomialIdeal, MAX_DIM};
use crate::polyhedra::IntegralClosurePower;

/// Ambient dimensions up to this use a precomputed membership table with one
/// machine word per degree.
const TABLE_DIM: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TakayamaError {
    #[error("degree has dimension {found}, ring has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {0} is too large")]
    TooLarge(usize),
    #[error("degree box with {0} points is too large")]
    BoxTooLarge(u128),
}

/// Largest clamped box that `total_length` will scan.
pub const MAX_BOX_POINTS: u128 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceQuery {
    pub ideal: MonomialIdeal,
    pub i: usize,
    pub degree: ExponentVector,
}

/// Total length of a local cohomology module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthResult {
    Finite {
        value: u64,
        support: Vec<(ExponentVector, u64)>,
    },
    Infinite,
}

impl LengthResult {
    pub fn value(&self) -> Option<u64> {
        match self {
            LengthResult::Finite { value, .. } => Some(*value),
            LengthResult::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LengthResult::Finite { .. })
    }
}

#[derive(Clone, Debug)]
enum Localized {
    Ideal(Vec<Vec<Vec<i64>>>),
    Closure(IntegralClosurePower),
}

/// Membership in every localization `I_F`, prepared once per ideal.
#[derive(Clone, Debug)]
pub struct LocalizationCache {
    dim: usize,
    inner: Localized,
    saturation: Vec<i64>,
}

impl LocalizationCache {
    pub fn from_ideal(ideal: &MonomialIdeal) -> Self {
        let d = ideal.dim();
        let per_mask = (0..1u32 << d)
            .map(|m| {
                ideal
                    .localize(LocalizationMask(m))
                    .gens()
                    .iter()
                    .map(|g| g.entries().to_vec())
                    .collect()
            })
            .collect();
        LocalizationCache {
            dim: d,
            inner: Localized::Ideal(per_mask),
            saturation: ideal.max_exponents(),
        }
    }

    pub fn from_member(member: &FamilyMember) -> Self {
        match member {
            FamilyMember::Ideal(i) => Self::from_ideal(i),
            FamilyMember::IntegralClosure(c) => LocalizationCache {
                dim: c.dim(),
                saturation: c.saturation_point(),
                inner: Localized::Closure(c.clone()),
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `x^a ∈ I_F` for nonnegative `a`.
    pub fn contains(&self, mask: LocalizationMask, a: &[i64]) -> bool {
        match &self.inner {
            Localized::Ideal(gens) => gens[mask.0 as usize]
                .iter()
                .any(|g| g.iter().zip(a).all(|(x, y)| x <= y)),
            Localized::Closure(c) => c.contains_localized(mask, a),
        }
    }

    /// Per-variable exponent beyond which membership in every `I_F` no
    /// longer changes.
    pub fn saturation_point(&self) -> &[i64] {
        &self.saturation
    }

    /// Bitmask of the masks `F ⊆ [d] \ g` whose face `F` is missing from
    /// `Δ_a`, i.e. `x^{a+} ∈ I_{F ∪ g}`; returned as the face set of `Δ_a`.
    fn delta_faces(&self, g: u32, a_plus: &[i64]) -> FaceSet {
        let d = self.dim;
        let free = ((1u64 << d) - 1) as u32 & !g;
        let mut faces = FaceSet::empty(d);
        // enumerate subsets of `free` in increasing order
        let mut f: u32 = 0;
        loop {
            if !self.contains(LocalizationMask(f | g), a_plus) {
                faces.insert(f);
            }
            if f == free {
                break;
            }
            f = (f.wrapping_sub(free)) & free;
        }
        faces
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), TakayamaError> {
    if expected != found {
        return Err(TakayamaError::DimensionMismatch { expected, found });
    }
    if expected > MAX_DIM {
        return Err(TakayamaError::TooLarge(expected));
    }
    Ok(())
}

/// `Δ_a(I)`.
pub fn delta_complex(
    ideal: &MonomialIdeal,
    a: &ExponentVector,
) -> Result<SimplicialComplex, TakayamaError> {
    check_dim(ideal.dim(), a.dim())?;
    let cache = LocalizationCache::from_ideal(ideal);
    Ok(delta_complex_cached(&cache, a))
}

pub fn delta_complex_cached(cache: &LocalizationCache, a: &ExponentVector) -> SimplicialComplex {
    let g = a.negative_support();
    let faces = cache.delta_faces(g.0, a.positive_part().entries());
    SimplicialComplex::from_face_set_unchecked(cache.dim(), faces)
}

fn homology_at(dims: &[usize], index: i64) -> usize {
    if index < -1 {
        return 0;
    }
    dims.get((index + 1) as usize).copied().unwrap_or(0)
}

/// `dim_k H^i_m(R/I)_a`.
pub fn graded_dim(q: &GradedPieceQuery, field: FieldSpec) -> Result<usize, TakayamaError> {
    check_dim(q.ideal.dim(), q.degree.dim())?;
    let cache = LocalizationCache::from_ideal(&q.ideal);
    Ok(graded_dim_cached(&cache, q.i, &q.degree, field))
}

pub fn graded_dim_cached(
    cache: &LocalizationCache,
    i: usize,
    a: &ExponentVector,
    field: FieldSpec,
) -> usize {
    let g = a.negative_support();
    let index = i as i64 - g.len() as i64 - 1;
    if index < -1 || index >= cache.dim() as i64 {
        return 0;
    }
    let k = delta_complex_cached(cache, a);
    homology_at(&reduced_homology_dims(&k, field), index)
}

/// `M` with `M_i = 1 + max exponent of x_i`: `Δ_a` for `a ∈ N^d` only
/// depends on `min(a, M)`.
pub fn support_bound(ideal: &MonomialIdeal) -> ExponentVector {
    ExponentVector::new(ideal.max_exponents().iter().map(|m| m + 1).collect())
}

/// Grid `∏ [0, top_i]` with mixed-radix indexing, first coordinate slowest.
struct Grid {
    top: Vec<i64>,
    strides: Vec<usize>,
    len: usize,
}

impl Grid {
    fn new(top: &[i64]) -> Result<Self, TakayamaError> {
        let mut strides = vec![0; top.len()];
        let mut len: u128 = 1;
        for k in (0..top.len()).rev() {
            strides[k] = len as usize;
            len *= (top[k] + 1) as u128;
            if len > MAX_BOX_POINTS {
                return Err(TakayamaError::BoxTooLarge(len));
            }
        }
        Ok(Grid {
            top: top.to_vec(),
            strides,
            len: len as usize,
        })
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        self.strides
            .iter()
            .map(|&s| {
                let c = idx / s;
                idx %= s;
                c as i64
            })
            .collect()
    }

    fn index(&self, p: &[i64]) -> usize {
        p.iter().zip(&self.strides).map(|(&c, &s)| c as usize * s).sum()
    }
}

/// For every grid point, the set of masks `F` with `x^a ∈ I_F`, as one word.
struct MembershipTable {
    bits: Vec<u64>,
}

impl MembershipTable {
    fn build(cache: &LocalizationCache, grid: &Grid) -> Self {
        let d = cache.dim();
        let masks = 1u32 << d;
        let bits = match &cache.inner {
            Localized::Ideal(per_mask) => {
                let mut bits = vec![0u64; grid.len];
                for m in 0..masks {
                    for g in &per_mask[m as usize] {
                        let p: Vec<i64> = g.iter().zip(&grid.top).map(|(&x, &t)| x.min(t)).collect();
                        bits[grid.index(&p)] |= 1 << m;
                    }
                }
                // upward closure along each axis
                for k in 0..d {
                    let s = grid.strides[k];
                    let extent = (grid.top[k] + 1) as usize;
                    for idx in 0..grid.len {
                        if (idx / s) % extent != 0 {
                            bits[idx] |= bits[idx - s];
                        }
                    }
                }
                bits
            }
            Localized::Closure(_) => (0..grid.len)
                .into_par_iter()
                .map(|idx| {
                    let p = grid.point(idx);
                    (0..masks)
                        .filter(|&m| cache.contains(LocalizationMask(m), &p))
                        .fold(0u64, |acc, m| acc | 1 << m)
                })
                .collect(),
        };
        MembershipTable { bits }
    }

    /// Faces of `Δ_a` for `a = (negative on g, p elsewhere)`.
    fn faces(&self, d: usize, g: u32, idx: usize) -> FaceSet {
        let w = self.bits[idx];
        let free = ((1u64 << d) - 1) as u32 & !g;
        let mut face_word = 0u64;
        let mut f: u32 = 0;
        loop {
            if w >> (f | g) & 1 == 0 {
                face_word |= 1 << f;
            }
            if f == free {
                break;
            }
            f = (f.wrapping_sub(free)) & free;
        }
        FaceSet::from_words(vec![face_word])
    }
}

/// Evaluates graded dimensions over a box with a homology memo per face set.
struct Evaluator<'a> {
    cache: &'a LocalizationCache,
    table: Option<MembershipTable>,
    grid: Grid,
    field: FieldSpec,
    i: usize,
}

impl<'a> Evaluator<'a> {
    fn new(cache: &'a LocalizationCache, i: usize, field: FieldSpec) -> Result<Self, TakayamaError> {
        let d = cache.dim();
        if d > MAX_DIM {
            return Err(TakayamaError::TooLarge(d));
        }
        let top: Vec<i64> = cache.saturation_point().to_vec();
        let grid = Grid::new(&top)?;
        let table = if d <= TABLE_DIM {
            Some(MembershipTable::build(cache, &grid))
        } else {
            None
        };
        Ok(Evaluator {
            cache,
            table,
            grid,
            field,
            i,
        })
    }

    fn dim_at(&self, g: u32, idx: usize, memo: &mut HashMap<FaceSet, Vec<usize>>) -> u64 {
        let d = self.cache.dim();
        let index = self.i as i64 - g.count_ones() as i64 - 1;
        if index < -1 || index >= d as i64 {
            return 0;
        }
        let faces = match &self.table {
            Some(t) => t.faces(d, g, idx),
            None => self.cache.delta_faces(g, &self.grid.point(idx)),
        };
        let dims = memo.entry(faces).or_insert_with_key(|faces| {
            let k = SimplicialComplex::from_face_set_unchecked(d, faces.clone());
            reduced_homology_dims(&k, self.field)
        });
        homology_at(dims, index) as u64
    }

    /// Whether some degree with negative support exactly `g` (nonempty) has
    /// a nonzero piece.
    fn negative_pattern_nonzero(&self, g: u32) -> bool {
        let d = self.cache.dim();
        let index = self.i as i64 - g.count_ones() as i64 - 1;
        if index < -1 || index >= d as i64 {
            return false;
        }
        let free_axes: Vec<usize> = (0..d).filter(|k| g >> k & 1 == 0).collect();
        let sub_top: Vec<i64> = free_axes.iter().map(|&k| self.grid.top[k]).collect();
        let Ok(sub) = Grid::new(&sub_top) else {
            return true;
        };
        (0..sub.len)
            .into_par_iter()
            .map_init(HashMap::new, |memo, j| {
                let q = sub.point(j);
                let mut p = vec![0i64; d];
                for (&k, &x) in free_axes.iter().zip(&q) {
                    p[k] = x;
                }
                self.dim_at(g, self.grid.index(&p), memo) > 0
            })
            .any(|nonzero| nonzero)
    }

    fn negative_patterns_vanish(&self) -> bool {
        let d = self.cache.dim();
        (1..1u32 << d).all(|g| !self.negative_pattern_nonzero(g))
    }

    /// Nonzero pieces with `a ∈ N^d`, in grid order; `None` if one of them
    /// touches the saturation boundary.
    fn nonnegative_support(&self) -> Option<Vec<(usize, u64)>> {
        let top = &self.grid.top;
        let slab = self.grid.strides.first().copied().unwrap_or(1);
        let slabs = self.grid.len / slab;
        let parts: Vec<Option<Vec<(usize, u64)>>> = (0..slabs)
            .into_par_iter()
            .map(|s| {
                let mut memo = HashMap::new();
                let mut out = Vec::new();
                for idx in s * slab..(s + 1) * slab {
                    let v = self.dim_at(0, idx, &mut memo);
                    if v > 0 {
                        let p = self.grid.point(idx);
                        if p.iter().zip(top).any(|(x, t)| x == t) {
                            return None;
                        }
                        out.push((idx, v));
                    }
                }
                Some(out)
            })
            .collect();
        let mut all = Vec::new();
        for p in parts {
            all.extend(p?);
        }
        Some(all)
    }
}

/// Whether `λ(H^i_m(R/I))` is finite.
pub fn finiteness_oracle(ideal: &MonomialIdeal, i: usize, field: FieldSpec) -> Result<bool, TakayamaError> {
    Ok(total_length(ideal, i, field)?.is_finite())
}

/// `λ(H^i_m(R/I)) = Σ_{a ∈ N^d} dim H^i_m(R/I)_a`, or `Infinite`.
pub fn total_length(
    ideal: &MonomialIdeal,
    i: usize,
    field: FieldSpec,
) -> Result<LengthResult, TakayamaError> {
    total_length_cached(&LocalizationCache::from_ideal(ideal), i, field)
}

pub fn member_total_length(
    member: &FamilyMember,
    i: usize,
    field: FieldSpec,
) -> Result<LengthResult, TakayamaError> {
    total_length_cached(&LocalizationCache::from_member(member), i, field)
}

pub fn total_length_cached(
    cache: &LocalizationCache,
    i: usize,
    field: FieldSpec,
) -> Result<LengthResult, TakayamaError> {
    let d = cache.dim();
    if i > d {
        return Ok(LengthResult::Finite {
            value: 0,
            support: vec![],
        });
    }
    let ev = Evaluator::new(cache, i, field)?;
    if !ev.negative_patterns_vanish() {
        return Ok(LengthResult::Infinite);
    }
    let Some(support) = ev.nonnegative_support() else {
        return Ok(LengthResult::Infinite);
    };
    let value = support.iter().map(|(_, v)| v).sum();
    let support = support
        .into_iter()
        .map(|(idx, v)| (ExponentVector::new(ev.grid.point(idx)), v))
        .collect();
    Ok(LengthResult::Finite { value, support })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path5() -> MonomialIdeal {
        MonomialIdeal::from_exponents(
            5,
            &[
                &[1, 1, 0, 0, 0],
                &[0, 1, 1, 0, 0],
                &[0, 0, 1, 1, 0],
                &[0, 0, 0, 1, 1],
            ],
        )
        .unwrap()
    }

    fn mask(vs: &[usize]) -> u32 {
        vs.iter().fold(0, |m, v| m | 1 << (v - 1))
    }

    #[test]
    fn delta_at_zero_is_independence_complex() {
        let k = delta_complex(&path5(), &ExponentVector::zeros(5)).unwrap();
        let mut facets = k.facets();
        facets.sort();
        let mut want = vec![mask(&[1, 3, 5]), mask(&[1, 4]), mask(&[2, 4]), mask(&[2, 5])];
        want.sort();
        assert_eq!(facets, want);
    }

    #[test]
    fn delta_of_cube_splits() {
        let i3 = path5().power(3).unwrap();
        let a = ExponentVector::new(vec![0, 1, 2, 1, 0]);
        let k = delta_complex(&i3, &a).unwrap();
        let mut facets = k.facets();
        facets.sort();
        let mut want = vec![mask(&[1, 3, 5]), mask(&[2, 4])];
        want.sort();
        assert_eq!(facets, want);
        let q = GradedPieceQuery {
            ideal: i3,
            i: 1,
            degree: a,
        };
        assert_eq!(graded_dim(&q, FieldSpec::Rationals).unwrap(), 1);
    }

    #[test]
    fn unit_ideal_gives_void_complex() {
        let k = delta_complex(&MonomialIdeal::unit(3), &ExponentVector::new(vec![1, -2, 0])).unwrap();
        assert!(k.is_void());
    }

    #[test]
    fn graded_dims_vanish_where_expected() {
        let q = GradedPieceQuery {
            ideal: path5(),
            i: 1,
            degree: ExponentVector::zeros(5),
        };
        assert_eq!(graded_dim(&q, FieldSpec::Rationals).unwrap(), 0);
        let q = GradedPieceQuery {
            ideal: path5(),
            i: 0,
            degree: ExponentVector::new(vec![-1, 0, 0, 0, 0]),
        };
        assert_eq!(graded_dim(&q, FieldSpec::Rationals).unwrap(), 0);
    }

    #[test]
    fn support_bounds() {
        assert_eq!(support_bound(&path5()), ExponentVector::new(vec![2; 5]));
        let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[1, 1]]).unwrap();
        assert_eq!(support_bound(&i), ExponentVector::new(vec![3, 2]));
        let x = MonomialIdeal::from_exponents(1, &[&[1]]).unwrap();
        assert_eq!(support_bound(&x), ExponentVector::new(vec![2]));
    }

    #[test]
    fn path_lengths() {
        let q = FieldSpec::Rationals;
        let i = path5();
        assert_eq!(total_length(&i, 1, q).unwrap().value(), Some(0));
        let r3 = total_length(&i.power(3).unwrap(), 1, q).unwrap();
        assert_eq!(
            r3,
            LengthResult::Finite {
                value: 1,
                support: vec![(ExponentVector::new(vec![0, 1, 2, 1, 0]), 1)],
            }
        );
        assert_eq!(total_length(&i.power(4).unwrap(), 1, q).unwrap().value(), Some(5));
        assert!(finiteness_oracle(&i, 1, q).unwrap());
    }

    #[test]
    fn m_primary_socle_side() {
        let i = MonomialIdeal::from_exponents(2, &[&[2, 0], &[0, 2]]).unwrap();
        let r = total_length(&i, 0, FieldSpec::Rationals).unwrap();
        assert_eq!(r.value(), Some(4));
        assert_eq!(total_length(&i, 1, FieldSpec::Rationals).unwrap().value(), Some(0));
        assert_eq!(total_length(&i, 2, FieldSpec::Rationals).unwrap().value(), Some(0));
        assert_eq!(total_length(&i, 5, FieldSpec::Rationals).unwrap().value(), Some(0));
    }

    #[test]
    fn non_isolated_components_are_infinite() {
        // (x) in k[x, y]: R/I = k[y] has infinite H^1
        let i = MonomialIdeal::from_exponents(2, &[&[1, 0]]).unwrap();
        assert_eq!(total_length(&i, 1, FieldSpec::Rationals).unwrap(), LengthResult::Infinite);
        assert_eq!(total_length(&i, 0, FieldSpec::Rationals).unwrap().value(), Some(0));
        let z = MonomialIdeal::zero(2);
        assert_eq!(total_length(&z, 2, FieldSpec::Rationals).unwrap(), LengthResult::Infinite);
        assert_eq!(total_length(&z, 1, FieldSpec::Rationals).unwrap().value(), Some(0));
    }

    #[test]
    fn table_and_direct_paths_agree() {
        let i = path5().power(2).unwrap();
        let cache = LocalizationCache::from_ideal(&i);
        let ev = Evaluator::new(&cache, 1, FieldSpec::Rationals).unwrap();
        let mut memo = HashMap::new();
        for idx in 0..ev.grid.len {
            let p = ev.grid.point(idx);
            let direct = graded_dim_cached(&cache, 1, &ExponentVector::new(p), FieldSpec::Rationals);
            assert_eq!(ev.dim_at(0, idx, &mut memo), direct as u64);
        }
    }
}
