//! Truncated univariate formal power series over the Gaussian rationals.
//!
//! A `TruncUniSeries` of order `N` stores exactly `N + 1` coefficients and
//! represents its value modulo `t^{N+1}`. Binary operations truncate at the
//! smaller of the two orders.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncUniSeries {
    coeffs: Vec<GaussianRational>,
}

impl TruncUniSeries {
    pub fn zero(order: usize) -> Self {
        TruncUniSeries {
            coeffs: vec![GaussianRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = GaussianRational::one();
        s
    }

    /// `c * t^power`, or zero if `power > order`.
    pub fn monomial(coeff: GaussianRational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = coeff;
        }
        s
    }

    /// Builds a series of the given order; missing coefficients are zero and
    /// coefficients beyond the order are dropped.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = GaussianRational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &GaussianRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), order)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        TruncUniSeries {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplies by `t`, dropping the top coefficient.
    pub fn shift_up(&self) -> Self {
        let n = self.order();
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(GaussianRational::zero());
        coeffs.extend(self.coeffs[..n].iter().cloned());
        TruncUniSeries { coeffs }
    }
}

/// Cauchy product truncated at `min(order(a), order(b))`.
pub fn series_mul(a: &TruncUniSeries, b: &TruncUniSeries) -> TruncUniSeries {
    let n = a.order().min(b.order());
    let mut out = TruncUniSeries::zero(n);
    for (i, ai) in a.coeffs.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out.coeffs[i + j] += &(ai * bj);
            }
        }
    }
    out
}

/// Inverse of a series with constant term 1 via
/// `c_0 = 1`, `c_k = -sum_{j=1..k} d_j c_{k-j}`.
pub fn series_invert(d: &TruncUniSeries) -> Result<TruncUniSeries> {
    if !d.coeffs[0].is_one() {
        return Err(Error::NonUnitConstant {
            found: d.coeffs[0].to_string(),
        });
    }
    let n = d.order();
    let mut c = Vec::with_capacity(n + 1);
    c.push(GaussianRational::one());
    for k in 1..=n {
        let mut acc = GaussianRational::zero();
        for j in 1..=k {
            acc += &(&d.coeffs[j] * &c[k - j]);
        }
        c.push(-acc);
    }
    Ok(TruncUniSeries { coeffs: c })
}

/// `(1/r!) (u C(u))^r prod_{s=1..r} (1 + s u C(u))^{-1}` as a series in `u`
/// to order `order`. The `s = 0` factor of the product is the identity.
///
/// Only `c_0..c_{order-1}` enter the result; coefficients of `c` beyond its
/// own order are read as zero.
pub fn product_of_inverses(r: usize, c: &TruncUniSeries, order: usize) -> TruncUniSeries {
    let uc = TruncUniSeries::from_coeffs(
        std::iter::once(GaussianRational::zero()).chain(c.coeffs.iter().cloned()),
        order,
    );
    let mut acc = TruncUniSeries::one(order);
    for _ in 0..r {
        acc = series_mul(&acc, &uc);
    }
    for s in 1..=r {
        let factor = &TruncUniSeries::one(order) + &uc.scale(&GaussianRational::from_integer(s as i64));
        let inv = series_invert(&factor).expect("constant term is 1");
        acc = series_mul(&acc, &inv);
    }
    acc.scale(&GaussianRational::factorial_inv(r as u32))
}

impl<'a> Add<&'a TruncUniSeries> for &'a TruncUniSeries {
    type Output = TruncUniSeries;
    fn add(self, rhs: &TruncUniSeries) -> TruncUniSeries {
        let n = self.order().min(rhs.order());
        TruncUniSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a TruncUniSeries> for &'a TruncUniSeries {
    type Output = TruncUniSeries;
    fn sub(self, rhs: &TruncUniSeries) -> TruncUniSeries {
        let n = self.order().min(rhs.order());
        TruncUniSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Mul<&'a TruncUniSeries> for &'a TruncUniSeries {
    type Output = TruncUniSeries;
    fn mul(self, rhs: &TruncUniSeries) -> TruncUniSeries {
        series_mul(self, rhs)
    }
}

impl Neg for &TruncUniSeries {
    type Output = TruncUniSeries;
    fn neg(self) -> TruncUniSeries {
        TruncUniSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn ints(v: &[i64], order: usize) -> TruncUniSeries {
        TruncUniSeries::from_coeffs(v.iter().map(|&k| q(k)), order)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(series_mul(&ints(&[1, 1], 2), &ints(&[1, -1], 2)), ints(&[1, 0, -1], 2));
        let s = ints(&[3, -2, 7], 2);
        assert_eq!(series_mul(&TruncUniSeries::one(2), &s), s);
        assert_eq!(series_mul(&ints(&[1, 1, 1], 2), &ints(&[1, 1, 1], 2)), ints(&[1, 2, 3], 2));
    }

    #[test]
    fn mul_truncates_at_min_order() {
        let p = series_mul(&ints(&[1, 1, 1, 1], 3), &ints(&[1, 1], 1));
        assert_eq!(p.order(), 1);
        assert_eq!(p, ints(&[1, 2], 1));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(series_invert(&TruncUniSeries::one(3)).unwrap(), TruncUniSeries::one(3));
        assert_eq!(series_invert(&ints(&[1, 1], 3)).unwrap(), ints(&[1, -1, 1, -1], 3));
        assert_eq!(series_invert(&ints(&[1, 1, 1], 3)).unwrap(), ints(&[1, -1, 0, 1], 3));
    }

    #[test]
    fn invert_rejects_non_unit_constant() {
        assert!(matches!(
            series_invert(&ints(&[2, 1], 2)),
            Err(Error::NonUnitConstant { .. })
        ));
        assert!(series_invert(&ints(&[0, 1], 2)).is_err());
    }

    #[test]
    fn product_of_inverses_examples() {
        let one = TruncUniSeries::one(3);
        assert_eq!(product_of_inverses(0, &one, 3), TruncUniSeries::one(3));
        assert_eq!(product_of_inverses(1, &one, 3), ints(&[0, 1, -1, 1], 3));
        let expected = TruncUniSeries::from_coeffs(
            [q(0), q(0), GaussianRational::ratio(1, 2), GaussianRational::ratio(-3, 2)],
            3,
        );
        assert_eq!(product_of_inverses(2, &one, 3), expected);
    }

    fn small() -> impl Strategy<Value = GaussianRational> {
        (-3i64..=3, 1i64..=3, -2i64..=2).prop_map(|(a, b, c)| GaussianRational::complex(a, b, c, 1))
    }

    fn unit_series() -> impl Strategy<Value = TruncUniSeries> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(small(), n).prop_map(move |tail| {
                TruncUniSeries::from_coeffs(std::iter::once(GaussianRational::one()).chain(tail), n)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn invert_round_trip(d in unit_series()) {
            let c = series_invert(&d).unwrap();
            prop_assert_eq!(series_mul(&d, &c), TruncUniSeries::one(d.order()));
        }

        #[test]
        fn invert_is_involution(d in unit_series()) {
            let c = series_invert(&d).unwrap();
            prop_assert_eq!(series_invert(&c).unwrap(), d);
        }

        #[test]
        fn product_of_inverses_leading_term(c in unit_series(), r in 0usize..=6) {
            let n = c.order();
            prop_assume!(r <= n);
            let p = product_of_inverses(r, &c, n);
            for k in 0..r {
                prop_assert!(p.coeff(k).is_zero());
            }
            prop_assert_eq!(p.coeff(r), &GaussianRational::factorial_inv(r as u32));
        }
    }
}
