//! Simplicial complexes on at most [`MAX_DIM`] vertices and their reduced
//! homology over `Q` or `F_p`.
//!
//! A face is a bitmask over the vertices; the complex is a bitset over all
//! `2^d` masks.

use std::fmt;

use thiserror::Error;

use crate::ideal::MAX_DIM;
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("face set is not closed under taking subsets")]
    NotDownwardClosed,
    #[error("complex has no vertices")]
    NoVertices,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge(usize),
    #[error("face {face:#b} uses a vertex outside the ambient dimension {dim}")]
    FaceOutOfRange { face: u32, dim: usize },
}

/// Coefficient field: `Q` (characteristic 0) or `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn from_characteristic(c: u64) -> Result<Self, HomologyError> {
        match c {
            0 => Ok(FieldSpec::Rationals),
            p if linalg::is_prime(p) => Ok(FieldSpec::Prime(p)),
            p => Err(HomologyError::NotPrime(p)),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    fn rank(self, rows: &[Vec<i128>]) -> usize {
        match self {
            FieldSpec::Rationals => linalg::rank(rows),
            FieldSpec::Prime(p) => linalg::rank_mod_p(rows, p),
        }
    }
}

/// Bitset over the `2^d` subsets of `{0, ..., d-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceSet {
    words: Vec<u64>,
}

impl FaceSet {
    pub fn empty(dim: usize) -> Self {
        FaceSet {
            words: vec![0; words_for(dim)],
        }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        FaceSet { words }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, face: u32) -> bool {
        let f = face as usize;
        self.words[f >> 6] >> (f & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, face: u32) {
        let f = face as usize;
        self.words[f >> 6] |= 1 << (f & 63);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((k as u32) << 6 | b)
            })
        })
    }
}

pub(crate) fn words_for(dim: usize) -> usize {
    ((1usize << dim) + 63) / 64
}

/// A downward-closed family of subsets of `{0, ..., d-1}`.
///
/// The void complex has no faces at all; the irrelevant complex has only the
/// empty face.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    dim: usize,
    faces: FaceSet,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<Vec<usize>> = self
            .facets()
            .into_iter()
            .map(|m| (0..self.dim).filter(|&i| m >> i & 1 == 1).map(|i| i + 1).collect())
            .collect();
        f.debug_struct("SimplicialComplex")
            .field("dim", &self.dim)
            .field("facets", &facets)
            .finish()
    }
}

impl SimplicialComplex {
    pub fn void(dim: usize) -> Self {
        SimplicialComplex {
            dim,
            faces: FaceSet::empty(dim),
        }
    }

    pub fn irrelevant(dim: usize) -> Self {
        let mut faces = FaceSet::empty(dim);
        faces.insert(0);
        SimplicialComplex { dim, faces }
    }

    /// Full simplex on the vertices in `mask`.
    pub fn simplex(dim: usize, mask: u32) -> Self {
        Self::from_facets(dim, &[mask]).expect("mask inside ambient dimension")
    }

    /// Downward closure of the given facets.
    pub fn from_facets(dim: usize, facets: &[u32]) -> Result<Self, HomologyError> {
        if dim > MAX_DIM {
            return Err(HomologyError::TooLarge(dim));
        }
        let mut faces = FaceSet::empty(dim);
        for &f in facets {
            check_face(f, dim)?;
            let mut sub = f;
            loop {
                faces.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        Ok(SimplicialComplex { dim, faces })
    }

    /// Complex with exactly the given faces, which must be downward closed.
    pub fn from_faces(dim: usize, faces: impl IntoIterator<Item = u32>) -> Result<Self, HomologyError> {
        if dim > MAX_DIM {
            return Err(HomologyError::TooLarge(dim));
        }
        let mut set = FaceSet::empty(dim);
        for f in faces {
            check_face(f, dim)?;
            set.insert(f);
        }
        Self::from_face_set(dim, set)
    }

    pub fn from_face_set(dim: usize, faces: FaceSet) -> Result<Self, HomologyError> {
        let k = SimplicialComplex { dim, faces };
        if !k.is_downward_closed() {
            return Err(HomologyError::NotDownwardClosed);
        }
        Ok(k)
    }

    /// Trusted constructor for face sets known to be closed.
    pub(crate) fn from_face_set_unchecked(dim: usize, faces: FaceSet) -> Self {
        debug_assert!(SimplicialComplex { dim, faces: faces.clone() }.is_downward_closed());
        SimplicialComplex { dim, faces }
    }

    fn is_downward_closed(&self) -> bool {
        self.faces.iter().all(|f| {
            (0..self.dim)
                .filter(|&i| f >> i & 1 == 1)
                .all(|i| self.faces.contains(f & !(1 << i)))
        })
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn face_set(&self) -> &FaceSet {
        &self.faces
    }

    pub fn contains(&self, face: u32) -> bool {
        (face as u64) < (1u64 << self.dim) && self.faces.contains(face)
    }

    pub fn faces(&self) -> impl Iterator<Item = u32> + '_ {
        self.faces.iter()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_irrelevant(&self) -> bool {
        self.faces.len() == 1 && self.faces.contains(0)
    }

    pub fn vertices(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| self.faces.contains(1 << i)).collect()
    }

    /// Inclusion-maximal faces, in increasing mask order.
    pub fn facets(&self) -> Vec<u32> {
        self.faces
            .iter()
            .filter(|&f| {
                (0..self.dim).all(|i| f >> i & 1 == 1 || !self.faces.contains(f | 1 << i))
            })
            .collect()
    }

    /// Minimal subsets of the ambient vertex set that are not faces.
    pub fn minimal_nonfaces(&self) -> Vec<u32> {
        (0..1u32 << self.dim)
            .filter(|&g| {
                !self.faces.contains(g)
                    && (0..self.dim)
                        .filter(|&i| g >> i & 1 == 1)
                        .all(|i| self.faces.contains(g & !(1 << i)))
            })
            .collect()
    }

    /// Cone over a new vertex with index `dim`.
    pub fn cone(&self) -> SimplicialComplex {
        let dim = self.dim + 1;
        let mut faces = FaceSet::empty(dim);
        for f in self.faces.iter() {
            faces.insert(f);
            faces.insert(f | 1 << self.dim);
        }
        SimplicialComplex { dim, faces }
    }

    /// Reduced Euler characteristic `Σ_{faces} (-1)^{dim face}`, counting the
    /// empty face with dimension -1.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .map(|f| if f.count_ones() % 2 == 1 { 1 } else { -1 })
            .sum()
    }
}

fn check_face(f: u32, dim: usize) -> Result<(), HomologyError> {
    if (f as u64) >> dim != 0 {
        return Err(HomologyError::FaceOutOfRange { face: f, dim });
    }
    Ok(())
}

/// `dim H̃_j(K; k)` for `j = -1, ..., d-1`, stored at index `j + 1`.
pub fn reduced_homology_dims(k: &SimplicialComplex, field: FieldSpec) -> Vec<usize> {
    let d = k.dim;
    // faces grouped by cardinality; position lookup through a dense table
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); d + 1];
    for f in k.faces.iter() {
        by_size[f.count_ones() as usize].push(f);
    }
    let mut index = vec![usize::MAX; 1usize << d];
    for group in &by_size {
        for (pos, &f) in group.iter().enumerate() {
            index[f as usize] = pos;
        }
    }
    // ranks[s] = rank of the boundary from faces of size s to size s-1
    let mut ranks = vec![0usize; d + 2];
    for s in 1..=d {
        let (rows_faces, cols_faces) = (&by_size[s], &by_size[s - 1]);
        if rows_faces.is_empty() || cols_faces.is_empty() {
            continue;
        }
        let rows: Vec<Vec<i128>> = rows_faces
            .iter()
            .map(|&f| {
                let mut row = vec![0i128; cols_faces.len()];
                let mut sign = 1;
                for v in 0..d {
                    if f >> v & 1 == 1 {
                        row[index[(f & !(1 << v)) as usize]] = sign;
                        sign = -sign;
                    }
                }
                row
            })
            .collect();
        ranks[s] = field.rank(&rows);
    }
    (0..=d)
        .map(|s| by_size[s].len() - ranks[s] - ranks[s + 1])
        .collect()
}

/// Connectivity of the 1-skeleton over the vertex set of `K`.
pub fn is_connected(k: &SimplicialComplex) -> Result<bool, HomologyError> {
    let verts = k.vertices();
    let Some(&first) = verts.first() else {
        return Err(HomologyError::NoVertices);
    };
    let mut seen = 1u32 << first;
    let mut stack = vec![first];
    while let Some(u) = stack.pop() {
        for &w in &verts {
            if seen >> w & 1 == 0 && k.faces.contains(1 << u | 1 << w) {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    Ok(seen.count_ones() as usize == verts.len())
}

/// Number of connected components of the 1-skeleton.
pub fn component_count(k: &SimplicialComplex) -> usize {
    let verts = k.vertices();
    let mut seen = 0u32;
    let mut count = 0;
    for &s in &verts {
        if seen >> s & 1 == 1 {
            continue;
        }
        count += 1;
        seen |= 1 << s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &verts {
                if seen >> w & 1 == 0 && k.faces.contains(1 << u | 1 << w) {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
    }
    count
}
