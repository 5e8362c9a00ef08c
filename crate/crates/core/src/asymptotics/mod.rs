//! Length sequences over ideal families and their asymptotics.

mod genfun;
mod limit;
mod quasi;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::homology::FieldSpec;
use crate::ideal::{IdealError, IdealFamily};
use crate::polyhedra::PolyError;
use crate::takayama::{total_length_cached, LengthResult, LocalizationCache, TakayamaError};

pub use genfun::{to_generating_function, RationalGeneratingFunction};
pub use limit::{limit_via_volume, MAX_LIMIT_DIM};
pub use quasi::{fit_values, required_points, QuasiPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Takayama(#[from] TakayamaError),
    #[error(transparent)]
    Polyhedron(#[from] PolyError),
    #[error("not enough data: {required} consecutive values needed, {available} available")]
    InsufficientData { required: usize, available: usize },
    #[error("no quasi-polynomial of degree <= {max_degree} and period <= {max_period} fits")]
    NoFit { max_degree: usize, max_period: usize },
    #[error("length is infinite at n = {0}")]
    InfiniteEntry(u64),
    #[error("length is infinite for large n: {0}")]
    NotFinite(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("resource limit: {0}")]
    TooLarge(String),
}

/// `λ(H^i_m(R/I_n))` for consecutive `n`.
#[derive(Clone, Debug)]
pub struct LengthSequence {
    pub family: IdealFamily,
    pub i: usize,
    pub field: FieldSpec,
    pub values: Vec<(u64, LengthResult)>,
}

impl LengthSequence {
    pub fn dim(&self) -> usize {
        self.family.dim()
    }

    /// Exact values, failing at the first infinite entry.
    pub fn finite_values(&self) -> Result<Vec<(u64, BigInt)>, AsymptoticsError> {
        self.values
            .iter()
            .map(|(n, r)| {
                r.value()
                    .map(|v| (*n, BigInt::from(v)))
                    .ok_or(AsymptoticsError::InfiniteEntry(*n))
            })
            .collect()
    }

    /// Values from `n = 0` on, using `λ = 0` at `n = 0` since `I_0 = R`.
    fn values_from_zero(&self) -> Result<Vec<BigInt>, AsymptoticsError> {
        let vals = self.finite_values()?;
        let mut out = Vec::with_capacity(vals.len() + 1);
        let mut expected = 0u64;
        if vals.first().is_some_and(|(n, _)| *n > 0) {
            out.push(BigInt::zero());
            expected = 1;
        }
        for (n, v) in vals {
            if n != expected {
                return Err(AsymptoticsError::InsufficientData {
                    required: expected as usize + 1,
                    available: out.len(),
                });
            }
            out.push(v);
            expected += 1;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.values
                .iter()
                .map(|(n, r)| length_entry_json(*n, r))
                .collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (n, r) in &self.values {
            match r.value() {
                Some(v) => s.push_str(&format!("{n},{v}\n")),
                None => s.push_str(&format!("{n},infinite\n")),
            }
        }
        s
    }
}

/// `{"n": n, "length": value | "infinite", "support": [[degree, dim], ...]}`.
pub fn length_entry_json(n: u64, r: &LengthResult) -> Value {
    match r {
        LengthResult::Finite { value, support } => json!({
            "n": n,
            "length": value,
            "support": support
                .iter()
                .map(|(a, k)| json!([a.entries(), k]))
                .collect::<Vec<_>>(),
        }),
        LengthResult::Infinite => json!({"n": n, "length": "infinite", "support": []}),
    }
}

/// Lengths for `n` in `start..=end`, computed in parallel.
pub fn length_sequence_range(
    family: &IdealFamily,
    i: usize,
    start: u64,
    end: u64,
    field: FieldSpec,
) -> Result<LengthSequence, AsymptoticsError> {
    let values = (start..=end)
        .into_par_iter()
        .map(|n| {
            let member = family.member(n)?;
            let cache = LocalizationCache::from_member(&member);
            Ok((n, total_length_cached(&cache, i, field)?))
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()?;
    Ok(LengthSequence {
        family: family.clone(),
        i,
        field,
        values,
    })
}

/// Lengths for `n = 1, ..., big_n`.
pub fn length_sequence(
    family: &IdealFamily,
    i: usize,
    big_n: u64,
    field: FieldSpec,
) -> Result<LengthSequence, AsymptoticsError> {
    length_sequence_range(family, i, 1, big_n, field)
}

/// Fit the sequence, extended by `λ = 0` at `n = 0`.
pub fn fit_quasipolynomial(
    s: &LengthSequence,
    max_degree: usize,
    max_period: usize,
) -> Result<QuasiPolynomial, AsymptoticsError> {
    fit_values(0, &s.values_from_zero()?, max_degree, max_period)
}

/// Fit and convert to a generating function whose series is the full
/// sequence from `n = 0`.
pub fn sequence_generating_function(
    s: &LengthSequence,
    max_degree: usize,
    max_period: usize,
) -> Result<(QuasiPolynomial, RationalGeneratingFunction), AsymptoticsError> {
    let vals = s.values_from_zero()?;
    let qp = fit_values(0, &vals, max_degree, max_period)?;
    let g = to_generating_function(&qp, &vals)?;
    if g.expand(vals.len()) != vals {
        return Err(AsymptoticsError::Consistency(
            "generating function disagrees with computed values".into(),
        ));
    }
    Ok((qp, g))
}

pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl QuasiPolynomial {
    pub fn to_json(&self) -> Value {
        json!({
            "period": self.period,
            "polys": self
                .polys
                .iter()
                .map(|p| p.iter().map(fraction_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "valid_from": self.valid_from,
        })
    }
}

fn int_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => json!(b.to_string()),
    }
}

impl RationalGeneratingFunction {
    pub fn to_json(&self) -> Value {
        json!({
            "numerator": self.numerator.iter().map(int_json).collect::<Vec<_>>(),
            "denominator_factors": self.denominator_factors,
        })
    }
}

/// Non-certified tail statistics of `λ(n) / n^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub limsup_est: f64,
    pub liminf_est: f64,
    pub fitted_degree: Option<usize>,
    /// Extrapolated value of `λ(n) / n^d` at the end of the data.
    pub trend: f64,
}

fn ratio_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Tail statistics for a sequence in ambient dimension `d`.
///
/// With a quasi-polynomial fit the estimates are the extreme leading
/// coefficients; without one they come from a first-order Richardson
/// extrapolation `(n+1) r(n+1) - n r(n)` of `r(n) = λ(n) / n^d`.
pub fn growth_estimate(s: &LengthSequence) -> Result<GrowthEstimate, AsymptoticsError> {
    let d = s.dim() as i32;
    let vals: Vec<(u64, f64)> = s
        .values
        .iter()
        .filter_map(|(n, r)| r.value().filter(|_| *n > 0).map(|v| (*n, v as f64)))
        .collect();
    if vals.len() < 4 {
        return Err(AsymptoticsError::InsufficientData {
            required: 4,
            available: vals.len(),
        });
    }
    let r = |(n, v): (u64, f64)| v / (n as f64).powi(d);
    let rich: Vec<f64> = vals
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .map(|w| w[1].0 as f64 * r(w[1]) - w[0].0 as f64 * r(w[0]))
        .collect();
    let trend = rich.last().copied().unwrap_or_else(|| r(*vals.last().unwrap()));

    let fit = (1..=4usize)
        .rev()
        .find_map(|p| fit_quasipolynomial(s, s.dim(), p).ok());
    if let Some(qp) = fit {
        let lead: Vec<f64> = qp.coefficient(s.dim()).iter().map(ratio_f64).collect();
        let max = lead.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = lead.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(GrowthEstimate {
            limsup_est: max,
            liminf_est: min,
            fitted_degree: qp.degree(),
            trend,
        });
    }
    let tail = &rich[rich.len().saturating_sub(2)..];
    let (lo, hi) = if tail.is_empty() {
        (trend, trend)
    } else {
        (
            tail.iter().copied().fold(f64::INFINITY, f64::min),
            tail.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    Ok(GrowthEstimate {
        limsup_est: hi,
        liminf_est: lo,
        fitted_degree: None,
        trend,
    })
}

/// Decimal with 12 significant digits.
pub fn approx_string(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().unwrap_or(x);
    format!("{v}")
}

impl GrowthEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "limsup_est": approx_string(self.limsup_est),
            "liminf_est": approx_string(self.liminf_est),
            "trend": approx_string(self.trend),
            "fitted_degree": self.fitted_degree,
            "certified": false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;

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

    #[test]
    fn unit_family_is_zero() {
        let f = IdealFamily::powers(MonomialIdeal::unit(3));
        let s = length_sequence(&f, 1, 5, FieldSpec::Rationals).unwrap();
        assert!(s.values.iter().all(|(_, r)| r.value() == Some(0)));
    }

    #[test]
    fn short_path_sequence() {
        let f = IdealFamily::powers(path5());
        let s = length_sequence(&f, 1, 5, FieldSpec::Rationals).unwrap();
        let got: Vec<u64> = s.values.iter().map(|(_, r)| r.value().unwrap()).collect();
        assert_eq!(got, vec![0, 0, 1, 5, 16]);
        assert_eq!(s.to_csv(), "1,0\n2,0\n3,1\n4,5\n5,16\n");
    }

    #[test]
    fn approx_formatting() {
        assert_eq!(approx_string(1.0 / 240.0), "0.00416666666667");
        assert_eq!(approx_string(0.0), "0");
    }
}
