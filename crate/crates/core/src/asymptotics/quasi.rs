//! Exact quasi-polynomial fitting with held-out validation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::AsymptoticsError;

/// `f(n) = polys[n mod period](n)` for `n >= valid_from`. Coefficients are
/// stored from the constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub period: usize,
    pub polys: Vec<Vec<BigRational>>,
    pub valid_from: u64,
}

fn eval_poly(coeffs: &[BigRational], n: u64) -> BigRational {
    let x = BigRational::from_integer(BigInt::from(n));
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * &x + c)
}

impl QuasiPolynomial {
    pub fn eval(&self, n: u64) -> BigRational {
        eval_poly(&self.polys[(n % self.period as u64) as usize], n)
    }

    /// Highest degree with a nonzero coefficient over all residues; `None`
    /// for the zero quasi-polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.polys
            .iter()
            .filter_map(|p| p.iter().rposition(|c| !c.is_zero()))
            .max()
    }

    /// Number of stored coefficients per residue, minus one.
    pub fn nominal_degree(&self) -> usize {
        self.polys.first().map_or(0, |p| p.len().saturating_sub(1))
    }

    /// Coefficient of `n^k` in each residue class.
    pub fn coefficient(&self, k: usize) -> Vec<BigRational> {
        self.polys
            .iter()
            .map(|p| p.get(k).cloned().unwrap_or_else(BigRational::zero))
            .collect()
    }
}

/// Interpolating polynomial through the given points, by divided differences.
fn interpolate(xs: &[u64], ys: &[BigInt]) -> Vec<BigRational> {
    let k = xs.len();
    let xr: Vec<BigRational> = xs
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for level in 1..k {
        for j in (level..k).rev() {
            dd[j] = (&dd[j] - &dd[j - 1]) / (&xr[j] - &xr[j - level]);
        }
    }
    // Horner expansion of the Newton form into monomial coefficients
    let mut coeffs = vec![BigRational::zero(); k];
    for j in (0..k).rev() {
        // coeffs <- coeffs * (x - xr[j]) + dd[j]
        let mut next = vec![BigRational::zero(); k];
        for t in 0..k {
            if coeffs[t].is_zero() {
                continue;
            }
            if t + 1 < k {
                next[t + 1] += &coeffs[t];
            }
            next[t] -= &coeffs[t] * &xr[j];
        }
        next[0] += &dd[j];
        coeffs = next;
    }
    coeffs
}

/// Number of points a search with these caps needs.
pub fn required_points(max_degree: usize, max_period: usize) -> usize {
    (max_degree + 1) * max_period + held_out_margin(max_period)
}

fn held_out_margin(period: usize) -> usize {
    5.max(2 * period)
}

/// Fit a quasi-polynomial to `values[k] = f(first + k)`.
///
/// Candidates are tried in lexicographic order of `(valid_from, period,
/// degree)`, with `valid_from` at most halfway into the data. A candidate is interpolated on the first `(degree+1)*period`
/// values from `valid_from` on and accepted only if it reproduces every later
/// value, of which there must be at least `max(5, 2*period)`.
pub fn fit_values(
    first: u64,
    values: &[BigInt],
    max_degree: usize,
    max_period: usize,
) -> Result<QuasiPolynomial, AsymptoticsError> {
    let required = required_points(max_degree, max_period);
    if values.len() < required || max_period == 0 {
        return Err(AsymptoticsError::InsufficientData {
            required,
            available: values.len(),
        });
    }
    let last = first + values.len() as u64 - 1;
    let max_start = first + values.len() as u64 / 2;
    for start in first..=max_start {
        let offset = (start - first) as usize;
        for period in 1..=max_period {
            let margin = held_out_margin(period);
            for degree in 0..=max_degree {
                let train = (degree + 1) * period;
                if offset + train + margin > values.len() {
                    break;
                }
                let mut polys = vec![Vec::new(); period];
                for k in 0..period {
                    let ns: Vec<u64> = (0..train as u64)
                        .map(|t| start + t)
                        .filter(|n| (n % period as u64) as usize == k)
                        .collect();
                    let ys: Vec<BigInt> = ns
                        .iter()
                        .map(|&n| values[(n - first) as usize].clone())
                        .collect();
                    polys[k] = interpolate(&ns, &ys);
                }
                let qp = QuasiPolynomial {
                    period,
                    polys,
                    valid_from: start,
                };
                let ok = (start + train as u64..=last)
                    .all(|n| qp.eval(n) == BigRational::from_integer(values[(n - first) as usize].clone()));
                if ok {
                    return Ok(qp);
                }
            }
        }
    }
    Err(AsymptoticsError::NoFit {
        max_degree,
        max_period,
    })
}

/// Exact value of a quasi-polynomial as an integer, if it is one.
pub(crate) fn as_integer(r: &BigRational) -> Option<BigInt> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let xs = [2, 3, 5, 7];
        let ys: Vec<BigInt> = xs.iter().map(|&x: &u64| BigInt::from(x * x * x - 2 * x + 1)).collect();
        assert_eq!(interpolate(&xs, &ys), vec![q(1, 1), q(-2, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn constant_sequence() {
        let qp = fit_values(1, &ints(&[7; 12]), 2, 2).unwrap();
        assert_eq!(qp.period, 1);
        assert_eq!(qp.polys, vec![vec![q(7, 1)]]);
        assert_eq!(qp.valid_from, 1);
    }

    #[test]
    fn floor_function_has_period_two() {
        // lattice points of [0, n/2]
        let vals: Vec<BigInt> = (0..20u64).map(|n| BigInt::from(n / 2 + 1)).collect();
        let qp = fit_values(0, &vals, 1, 2).unwrap();
        assert_eq!(qp.period, 2);
        assert_eq!(qp.polys[0], vec![q(1, 1), q(1, 2)]);
        assert_eq!(qp.polys[1], vec![q(1, 2), q(1, 2)]);
    }

    #[test]
    fn eventually_polynomial() {
        let mut vals = ints(&[5, 0, 9]);
        vals.extend((3..20i64).map(|n| BigInt::from(n * n)));
        let qp = fit_values(0, &vals, 2, 1).unwrap();
        assert_eq!(qp.valid_from, 3);
        assert_eq!(qp.degree(), Some(2));
    }

    #[test]
    fn not_enough_data() {
        let err = fit_values(0, &ints(&[1, 2, 3]), 2, 2).unwrap_err();
        assert_eq!(
            err,
            AsymptoticsError::InsufficientData {
                required: 11,
                available: 3
            }
        );
    }

    #[test]
    fn exponential_has_no_fit() {
        let vals: Vec<BigInt> = (0..20u32).map(|n| BigInt::from(2u64.pow(n))).collect();
        assert!(matches!(
            fit_values(0, &vals, 3, 2),
            Err(AsymptoticsError::NoFit { .. })
        ));
    }
}
