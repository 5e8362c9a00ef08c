//! Rational generating functions `q(x) / ∏ (1 - x^{b_j})`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::quasi::{as_integer, QuasiPolynomial};
use super::AsymptoticsError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalGeneratingFunction {
    /// Numerator coefficients from `x^0` upwards, without trailing zeros.
    pub numerator: Vec<BigInt>,
    /// Exponents `b_j` of the denominator factors `1 - x^{b_j}`, ascending.
    pub denominator_factors: Vec<u64>,
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 - x^b`.
fn factor(b: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); b as usize + 1];
    p[0] = BigInt::one();
    p[b as usize] = -BigInt::one();
    p
}

/// `1 + x^s + x^{2s} + ... + x^{b-s}`.
fn geometric(b: u64, s: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); (b - s) as usize + 1];
    for k in (0..=b - s).step_by(s as usize) {
        p[k as usize] = BigInt::one();
    }
    p
}

/// Exact division by a polynomial with constant term 1, or `None`.
fn divide(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(den[0].is_one());
    if num.is_empty() {
        return Some(vec![]);
    }
    if num.len() < den.len() {
        return None;
    }
    let mut rem = num.to_vec();
    let qlen = num.len() - den.len() + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in 0..qlen {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quot[k] = c;
    }
    if rem.iter().all(Zero::is_zero) {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

impl RationalGeneratingFunction {
    /// Cancel common factors greedily: drop a denominator factor when the
    /// numerator is divisible by it, otherwise shrink `1 - x^b` to
    /// `1 - x^{b'}` for a divisor `b'` of `b`.
    fn reduce(mut self) -> Self {
        if self.numerator.is_empty() {
            self.denominator_factors.clear();
            return self;
        }
        loop {
            let mut changed = false;
            for k in 0..self.denominator_factors.len() {
                let b = self.denominator_factors[k];
                if let Some(q) = divide(&self.numerator, &factor(b)) {
                    self.numerator = q;
                    self.denominator_factors.remove(k);
                    changed = true;
                    break;
                }
            }
            if !changed {
                'outer: for k in 0..self.denominator_factors.len() {
                    let b = self.denominator_factors[k];
                    for s in (1..b).filter(|s| b % s == 0) {
                        if let Some(q) = divide(&self.numerator, &geometric(b, s)) {
                            self.numerator = q;
                            self.denominator_factors[k] = s;
                            changed = true;
                            break 'outer;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.denominator_factors.sort_unstable();
        self
    }

    /// First `terms` coefficients of the power series.
    pub fn expand(&self, terms: usize) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); terms];
        for (k, c) in self.numerator.iter().enumerate().take(terms) {
            s[k] = c.clone();
        }
        for &b in &self.denominator_factors {
            let b = b as usize;
            for k in b..terms {
                let prev = s[k - b].clone();
                s[k] += prev;
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }
}

/// Generating function of the sequence that equals `prefix` for
/// `n < qp.valid_from` and `qp` afterwards.
pub fn to_generating_function(
    qp: &QuasiPolynomial,
    prefix: &[BigInt],
) -> Result<RationalGeneratingFunction, AsymptoticsError> {
    let v = qp.valid_from as usize;
    if prefix.len() < v {
        return Err(AsymptoticsError::InsufficientData {
            required: v,
            available: prefix.len(),
        });
    }
    let pi = qp.period as u64;
    let reps = qp.nominal_degree() + 1;
    let bound = v + qp.period * reps;
    let terms = bound + qp.period * reps + 8;
    let mut series = Vec::with_capacity(terms);
    for n in 0..terms {
        if n < v {
            series.push(prefix[n].clone());
        } else {
            let val = qp.eval(n as u64);
            series.push(as_integer(&val).ok_or_else(|| {
                AsymptoticsError::Consistency(format!("quasi-polynomial value at {n} is not an integer"))
            })?);
        }
    }
    let mut den = vec![BigInt::one()];
    for _ in 0..reps {
        den = mul(&den, &factor(pi));
    }
    let mut num = mul(&series, &den);
    num.truncate(terms);
    if num[bound.min(terms)..].iter().any(|c| !c.is_zero()) {
        return Err(AsymptoticsError::Consistency(
            "numerator does not terminate".into(),
        ));
    }
    num.truncate(bound);
    trim(&mut num);
    let g = RationalGeneratingFunction {
        numerator: num,
        denominator_factors: vec![pi; reps],
    }
    .reduce();
    if g.expand(terms) != series {
        return Err(AsymptoticsError::Consistency(
            "generating function does not reproduce the sequence".into(),
        ));
    }
    Ok(g)
}
