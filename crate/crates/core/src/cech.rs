//! Degree-`a` strand of the Čech complex on `x_1, ..., x_d` applied to `R/I`.
//!
//! Independent of the simplicial machinery: the terms and maps are written
//! down directly and ranks are taken with exact rational elimination.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ideal::{ExponentVector, MonomialIdeal};
use crate::takayama::TakayamaError;

/// Whether `(R/I)_{x_F}` is nonzero in degree `a`.
fn term_nonzero(ideal: &MonomialIdeal, f: u32, a: &[i64]) -> bool {
    let off_f = |j: usize| f >> j & 1 == 0;
    if (0..a.len()).any(|j| off_f(j) && a[j] < 0) {
        return false;
    }
    !ideal
        .gens()
        .iter()
        .any(|g| (0..a.len()).all(|j| !off_f(j) || g.entries()[j] <= a[j]))
}

fn rank_q(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..cols {
                let v = &f * &m[r][j];
                m[i][j] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Matrix of `C^p -> C^{p+1}` restricted to nonzero terms.
fn coboundary(dim: usize, from: &[u32], to: &[u32]) -> Vec<Vec<BigRational>> {
    from.iter()
        .map(|&f| {
            let mut row = vec![BigRational::zero(); to.len()];
            for j in 0..dim {
                if f >> j & 1 == 1 {
                    continue;
                }
                let t = f | 1 << j;
                if let Some(col) = to.iter().position(|&x| x == t) {
                    let before = (f & ((1 << j) - 1)).count_ones();
                    row[col] = if before % 2 == 0 {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                }
            }
            row
        })
        .collect()
}

/// `dim H^i` of the degree-`a` Čech strand of `R/I`, over `Q`.
pub fn cech_oracle(ideal: &MonomialIdeal, i: usize, a: &ExponentVector) -> Result<usize, TakayamaError> {
    let d = ideal.dim();
    if a.dim() != d {
        return Err(TakayamaError::DimensionMismatch {
            expected: d,
            found: a.dim(),
        });
    }
    if i > d {
        return Ok(0);
    }
    let terms = |p: i64| -> Vec<u32> {
        if p < 0 || p > d as i64 {
            return vec![];
        }
        (0..1u32 << d)
            .filter(|f| f.count_ones() as i64 == p && term_nonzero(ideal, *f, a.entries()))
            .collect()
    };
    let (prev, cur, next) = (terms(i as i64 - 1), terms(i as i64), terms(i as i64 + 1));
    if cur.is_empty() {
        return Ok(0);
    }
    let out_rank = if next.is_empty() {
        0
    } else {
        rank_q(coboundary(d, &cur, &next))
    };
    let in_rank = if prev.is_empty() {
        0
    } else {
        rank_q(coboundary(d, &prev, &cur))
    };
    Ok(cur.len() - out_rank - in_rank)
}
