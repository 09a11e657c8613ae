//! Truncated formal series in `lambda` with `FuncExpr` coefficients.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::ring::FuncExpr;
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFuncSeries {
    n: usize,
    coeffs: Vec<FuncExpr>,
}

impl LambdaFuncSeries {
    pub fn zero(n: usize, order: usize) -> Self {
        LambdaFuncSeries {
            n,
            coeffs: vec![FuncExpr::zero(n); order + 1],
        }
    }

    /// `f + O(lambda^{order+1})`.
    pub fn constant(f: FuncExpr, order: usize) -> Self {
        let mut s = Self::zero(f.n(), order);
        s.coeffs[0] = f;
        s
    }

    /// Builds from per-order coefficients, padding with zeros up to `order`
    /// and dropping anything beyond it.
    pub fn from_coeffs(n: usize, coeffs: Vec<FuncExpr>, order: usize) -> Result<Self> {
        let mut s = Self::zero(n, order);
        for (k, c) in coeffs.into_iter().enumerate() {
            if c.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: c.n() });
            }
            if k <= order {
                s.coeffs[k] = c;
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &FuncExpr {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[FuncExpr] {
        &self.coeffs
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut FuncExpr {
        &mut self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(self.n, order);
        for (k, c) in self.coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[k] = c.clone();
        }
        s
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        LambdaFuncSeries {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&FuncExpr) -> FuncExpr) -> Self {
        LambdaFuncSeries {
            n: self.n,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub(crate) fn check_dim(&self, other: &LambdaFuncSeries) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    /// Cauchy product in `lambda` of pointwise products of coefficients.
    pub fn pointwise_mul(&self, other: &LambdaFuncSeries) -> Result<Self> {
        self.check_dim(other)?;
        let order = self.order().min(other.order());
        let mut out = Self::zero(self.n, order);
        for (a, fa) in self.coeffs.iter().enumerate().take(order + 1) {
            if fa.is_empty() {
                continue;
            }
            for (b, gb) in other.coeffs.iter().enumerate().take(order + 1 - a) {
                if !gb.is_empty() {
                    out.coeffs[a + b] += &(fa * gb);
                }
            }
        }
        Ok(out)
    }

    /// Every coefficient is semantically zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FuncExpr::is_zero)
    }

    /// Semantic equality up to the smaller of the two orders.
    pub fn semantic_eq(&self, other: &LambdaFuncSeries) -> bool {
        self.n == other.n && (self - other).is_zero()
    }

    pub fn is_u1_invariant(&self) -> bool {
        self.coeffs.iter().all(FuncExpr::is_u1_invariant)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs.iter().all(FuncExpr::is_homogeneous)
    }

    pub fn is_radial(&self) -> bool {
        self.coeffs.iter().all(FuncExpr::is_radial)
    }

    pub fn normal_form(&self) -> Self {
        self.map(FuncExpr::normal_form)
    }
}

impl<'a> Add<&'a LambdaFuncSeries> for &'a LambdaFuncSeries {
    type Output = LambdaFuncSeries;
    fn add(self, rhs: &LambdaFuncSeries) -> LambdaFuncSeries {
        let order = self.order().min(rhs.order());
        LambdaFuncSeries {
            n: self.n,
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a LambdaFuncSeries> for &'a LambdaFuncSeries {
    type Output = LambdaFuncSeries;
    fn sub(self, rhs: &LambdaFuncSeries) -> LambdaFuncSeries {
        let order = self.order().min(rhs.order());
        LambdaFuncSeries {
            n: self.n,
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_cauchy_product() {
        let n = 1;
        let x = FuncExpr::x_pow(n, 1);
        let a = LambdaFuncSeries::from_coeffs(n, vec![x.clone(), FuncExpr::one(n)], 2).unwrap();
        let p = a.pointwise_mul(&a).unwrap();
        assert_eq!(p.coeff(0), &(&x * &x));
        assert_eq!(p.coeff(1), &x.scale(&GaussianRational::from_integer(2)));
        assert_eq!(p.coeff(2), &FuncExpr::one(n));
    }

    #[test]
    fn dimension_checked() {
        assert!(LambdaFuncSeries::from_coeffs(1, vec![FuncExpr::one(2)], 1).is_err());
        let a = LambdaFuncSeries::zero(1, 1);
        let b = LambdaFuncSeries::zero(2, 1);
        assert!(a.pointwise_mul(&b).is_err());
    }
}
