//! Double description: extreme rays of a pointed polyhedral cone
//! `{ y : A y >= 0 }`, exact over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::PolyError;
use crate::linalg;

/// Small bitset over constraint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RowSet(Vec<u64>);

impl RowSet {
    fn new(n: usize) -> Self {
        RowSet(vec![0; (n + 63) / 64])
    }

    fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    fn and(&self, other: &RowSet) -> RowSet {
        RowSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(&self, other: &RowSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// An extreme ray together with the rows it is tight on.
#[derive(Clone, Debug)]
pub(crate) struct Ray {
    pub coords: Vec<i128>,
    pub tight: RowSet,
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128, PolyError> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or(PolyError::Overflow)
    })
}

pub(crate) fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Solve `B r_k = e_k` for every `k` and scale each solution to a primitive
/// integer vector pointing the same way.
fn inverse_columns(basis: &[Vec<i128>]) -> Result<Vec<Vec<i128>>, PolyError> {
    let n = basis.len();
    let mut m: Vec<Vec<BigRational>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !m[i][c].is_zero())
            .ok_or(PolyError::NotPointed)?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let v = &m[c][j] * &f;
                    m[i][j] = &m[i][j] - v;
                }
            }
        }
    }
    // columns of the inverse live in m[..][n..]
    (0..n)
        .map(|k| {
            let col: Vec<&BigRational> = (0..n).map(|i| &m[i][n + k]).collect();
            let l = col
                .iter()
                .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = col.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            ints.iter()
                .map(|x| (x / &g).to_i128().ok_or(PolyError::Overflow))
                .collect()
        })
        .collect()
}

/// Extreme rays of `{ y in R^dim : row . y >= 0 for all rows }`. The cone
/// must be pointed, i.e. the rows must span `R^dim`.
pub(crate) fn extreme_rays(rows: &[Vec<i128>], dim: usize) -> Result<Vec<Ray>, PolyError> {
    let m = rows.len();
    // greedy basis of independent rows
    let mut basis_idx: Vec<usize> = Vec::with_capacity(dim);
    let mut basis_rows: Vec<Vec<i128>> = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if basis_idx.len() == dim {
            break;
        }
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        basis_rows.push(r.clone());
        if linalg::rank(&basis_rows) == basis_rows.len() {
            basis_idx.push(i);
        } else {
            basis_rows.pop();
        }
    }
    if basis_idx.len() < dim {
        return Err(PolyError::NotPointed);
    }

    let mut rays: Vec<Ray> = inverse_columns(&basis_rows)?
        .into_iter()
        .enumerate()
        .map(|(k, coords)| {
            let mut tight = RowSet::new(m);
            for (j, &bi) in basis_idx.iter().enumerate() {
                if j != k {
                    tight.insert(bi);
                }
            }
            Ray { coords, tight }
        })
        .collect();

    for (h, row) in rows.iter().enumerate() {
        if basis_idx.contains(&h) {
            continue;
        }
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| dot(row, &r.coords))
            .collect::<Result<_, _>>()?;
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] < 0).collect();
        if neg.is_empty() {
            for (r, &v) in rays.iter_mut().zip(&vals) {
                if v == 0 {
                    r.tight.insert(h);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k] > 0).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == q || !common.is_subset_of(&rays[k].tight));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (vals[p], -vals[q]);
                let mut coords = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(&a, &b)| {
                        sp.checked_mul(a)
                            .and_then(|x| sq.checked_mul(b).and_then(|y| x.checked_add(y)))
                            .ok_or(PolyError::Overflow)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                normalize(&mut coords);
                let mut tight = common;
                tight.insert(h);
                next.push(Ray { coords, tight });
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k] >= 0 {
                if vals[k] == 0 {
                    r.tight.insert(h);
                }
                next.push(r);
            }
        }
        rays = next;
    }
    Ok(rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthant_rays() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let mut rays: Vec<Vec<i128>> = extreme_rays(&rows, 3)
            .unwrap()
            .into_iter()
            .map(|r| r.coords)
            .collect();
        rays.sort();
        assert_eq!(rays, vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
    }

    #[test]
    fn square_cone() {
        // homogenized unit square: 0 <= x <= t, 0 <= y <= t
        let rows = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![-1, 0, 1],
            vec![0, -1, 1],
            vec![0, 0, 1],
        ];
        let mut rays: Vec<Vec<i128>> = extreme_rays(&rows, 3)
            .unwrap()
            .into_iter()
            .map(|r| r.coords)
            .collect();
        rays.sort();
        assert_eq!(
            rays,
            vec![vec![0, 0, 1], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]
        );
    }

    #[test]
    fn degenerate_pyramid_apex() {
        // square pyramid over [0,2]^2 with apex (1,1,1): four facets meet at the apex
        let rows = vec![
            vec![0, 0, 1, 0],
            vec![1, 0, -1, 0],
            vec![0, 1, -1, 0],
            vec![-1, 0, -1, 2],
            vec![0, -1, -1, 2],
            vec![0, 0, 0, 1],
        ];
        let mut rays: Vec<Vec<i128>> = extreme_rays(&rows, 4)
            .unwrap()
            .into_iter()
            .map(|r| r.coords)
            .collect();
        rays.sort();
        assert_eq!(
            rays,
            vec![
                vec![0, 0, 0, 1],
                vec![0, 2, 0, 1],
                vec![1, 1, 1, 1],
                vec![2, 0, 0, 1],
                vec![2, 2, 0, 1],
            ]
        );
    }

    #[test]
    fn not_pointed() {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert!(matches!(extreme_rays(&rows, 3), Err(PolyError::NotPointed)));
    }

    #[test]
    fn empty_polytope_has_no_vertices() {
        // x >= 2, x <= 1 in homogeneous form, t >= 0
        let rows = vec![vec![1, -2], vec![-1, 1], vec![0, 1]];
        let rays = extreme_rays(&rows, 2).unwrap();
        assert!(rays.is_empty());
    }
}
