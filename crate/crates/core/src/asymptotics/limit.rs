//! `lim λ(H^i_m(R/Ī^n)) / n^d` as a weighted sum of co-convex volumes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::AsymptoticsError;
use crate::homology::{reduced_homology_dims, FaceSet, FieldSpec, SimplicialComplex};
use crate::ideal::{LocalizationMask, MonomialIdeal};
use crate::polyhedra::{CoConvexRegion, HalfSpace, NewtonPolyhedron, PolyError};

/// Largest ambient dimension for the subcomplex enumeration.
pub const MAX_LIMIT_DIM: usize = 5;

/// Every subcomplex of the complex with the given faces (including the void
/// complex), as face lists.
fn subcomplexes(faces: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = faces.to_vec();
    sorted.sort_by_key(|f| (f.count_ones(), *f));
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    fn rec(sorted: &[u32], k: usize, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == sorted.len() {
            out.push(chosen.clone());
            return;
        }
        let f = sorted[k];
        rec(sorted, k + 1, chosen, out);
        let boundary_ok = (0..32)
            .filter(|v| f >> v & 1 == 1)
            .all(|v| chosen.contains(&(f & !(1 << v))));
        if boundary_ok {
            chosen.push(f);
            rec(sorted, k + 1, chosen, out);
            chosen.pop();
        }
    }
    rec(&sorted, 0, &mut chosen, &mut out);
    out
}

/// Facets and minimal non-faces of a complex on the ground set `ground`.
fn facets_and_nonfaces(faces: &[u32], ground: u32) -> (Vec<u32>, Vec<u32>) {
    let has = |f: u32| faces.contains(&f);
    let facets = faces
        .iter()
        .copied()
        .filter(|&f| (0..32).all(|v| ground >> v & 1 == 0 || f >> v & 1 == 1 || !has(f | 1 << v)))
        .collect();
    let mut nonfaces = Vec::new();
    let mut g: u32 = 0;
    loop {
        if !has(g) && (0..32).filter(|v| g >> v & 1 == 1).all(|v| has(g & !(1 << v))) {
            nonfaces.push(g);
        }
        if g == ground {
            break;
        }
        g = g.wrapping_sub(ground) & ground;
    }
    (facets, nonfaces)
}

struct Candidate {
    weight: usize,
    outer: Vec<HalfSpace>,
    inner: Vec<Vec<HalfSpace>>,
}

/// Regions `{a : Δ_a = Δ'}` for every subcomplex `Δ'` on `[d] \ s` whose
/// reduced homology in the relevant degree is nonzero.
fn candidates(
    poly: &NewtonPolyhedron,
    base_faces: &[u32],
    d: usize,
    s: u32,
    index: i64,
) -> Vec<Candidate> {
    let ground = ((1u64 << d) - 1) as u32 & !s;
    let faces: Vec<u32> = base_faces
        .iter()
        .copied()
        .filter(|&f| f & s == 0 && base_faces.contains(&(f | s)))
        .collect();
    subcomplexes(&faces)
        .into_par_iter()
        .filter_map(|sub| {
            let mut fs = FaceSet::empty(d);
            for &f in &sub {
                fs.insert(f);
            }
            let k = SimplicialComplex::from_face_set(d, fs).ok()?;
            let dims = reduced_homology_dims(&k, FieldSpec::Rationals);
            let weight = dims.get((index + 1) as usize).copied().unwrap_or(0);
            if weight == 0 {
                return None;
            }
            let (facets, nonfaces) = facets_and_nonfaces(&sub, ground);
            let outer = nonfaces
                .iter()
                .flat_map(|&g| poly.localized_halfspaces(LocalizationMask(g | s)))
                .collect();
            let inner = facets
                .iter()
                .map(|&f| poly.localized_halfspaces(LocalizationMask(f | s)))
                .collect();
            Some(Candidate {
                weight,
                outer,
                inner,
            })
        })
        .collect()
}

/// `lim_{n→∞} λ(H^i_m(R/Ī^n)) / n^d`, exact.
///
/// Fails with `NotFinite` when the integral-closure family has infinite
/// length for large `n`.
pub fn limit_via_volume(ideal: &MonomialIdeal, i: usize) -> Result<BigRational, AsymptoticsError> {
    let d = ideal.dim();
    if d > MAX_LIMIT_DIM {
        return Err(AsymptoticsError::TooLarge(format!(
            "subcomplex enumeration needs dimension at most {MAX_LIMIT_DIM}, got {d}"
        )));
    }
    if i > d {
        return Ok(BigRational::zero());
    }
    let poly = NewtonPolyhedron::of_ideal(ideal)?;
    // Δ(I): the faces F with I_F proper
    let base_faces: Vec<u32> = (0..1u32 << d)
        .filter(|&f| !poly.contains_scaled_localized(1, LocalizationMask(f), &vec![0; d]))
        .collect();

    for s in 1..1u32 << d {
        let index = i as i64 - s.count_ones() as i64 - 1;
        if index < -1 || !base_faces.contains(&s) {
            continue;
        }
        for c in candidates(&poly, &base_faces, d, s, index) {
            if !crate::polyhedra::monotone_region_is_empty(d, &c.outer, &c.inner)? {
                return Err(AsymptoticsError::NotFinite(format!(
                    "degrees with negative support {} contribute infinitely often",
                    LocalizationMask(s)
                )));
            }
        }
    }

    let terms: Vec<Result<BigRational, AsymptoticsError>> = candidates(&poly, &base_faces, d, 0, i as i64 - 1)
        .into_par_iter()
        .map(|c| {
            let region = CoConvexRegion::new(d, c.outer, c.inner).map_err(|e| match e {
                PolyError::Unbounded => AsymptoticsError::NotFinite(
                    "a region of nonnegative degrees is unbounded".into(),
                ),
                e => e.into(),
            })?;
            Ok(region.volume()? * BigRational::from_integer(BigInt::from(c.weight)))
        })
        .collect();
    let mut total = BigRational::zero();
    for t in terms {
        total += t?;
    }
    Ok(total)
}
