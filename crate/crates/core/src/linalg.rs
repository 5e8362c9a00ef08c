//! Exact rank and determinant of small integer matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over `Q` by fraction-free (Bareiss) elimination. Runs in `i128` and
/// restarts with big integers if an intermediate overflows.
pub fn rank(rows: &[Vec<i128>]) -> usize {
    match rank_i128(rows) {
        Some(r) => r,
        None => rank_big(rows),
    }
}

fn rank_i128(rows: &[Vec<i128>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = rows.to_vec();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c];
        for i in r + 1..n_rows {
            let f = a[i][c];
            for j in c..n_cols {
                let v = piv
                    .checked_mul(a[i][j])?
                    .checked_sub(f.checked_mul(a[r][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = piv;
        r += 1;
    }
    Some(r)
}

fn rank_big(rows: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..n_rows {
            let f = a[i][c].clone();
            for j in c..n_cols {
                let v = &piv * &a[i][j] - &f * &a[r][j];
                a[i][j] = v / &prev;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Determinant of a square integer matrix.
pub fn determinant(rows: &[Vec<i128>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over `F_p`.
pub fn rank_mod_p(rows: &[Vec<i128>], p: u64) -> usize {
    let p128 = p as i128;
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p128) as u64).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(piv) = (r..n_rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = mod_pow(a[r][c], p - 2, p);
        for j in c..n_cols {
            a[r][j] = mul(a[r][j], inv);
        }
        for i in r + 1..n_rows {
            let f = a[i][c];
            if f == 0 {
                continue;
            }
            for j in c..n_cols {
                a[i][j] = (a[i][j] + p - mul(f, a[r][j])) % p;
            }
        }
        r += 1;
    }
    r
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}
