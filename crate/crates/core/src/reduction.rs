//! Reduction from `C^{n+1} \ {0}` to `CP^n` at a negative momentum value.
//!
//! Functions on `CP^n` are represented by their homogeneous pullbacks.
//! Restricting an invariant function to the sphere `x = -2 mu` and projecting
//! sends `sum_p h_p x^p` to `sum_p h_p (-2 mu)^p`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lambda::LambdaFuncSeries;
use crate::ring::FuncExpr;
use crate::scalar::GaussianRational;
use crate::star::{k_table, m_r_all, DSeries};

/// The fixed data `(n, mu)` of the reduction, with `mu < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionContext {
    n: usize,
    mu: BigRational,
}

impl ReductionContext {
    pub fn new(n: usize, mu: BigRational) -> Result<Self> {
        if !mu.is_negative() {
            return Err(Error::InvalidMomentum(mu.to_string()));
        }
        Ok(ReductionContext { n, mu })
    }

    /// Parses `mu` from a rational string such as `-1/2`.
    pub fn parse(n: usize, mu: &str) -> Result<Self> {
        Self::new(n, GaussianRational::parse_rational(mu)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> GaussianRational {
        GaussianRational::from_real(self.mu.clone())
    }

    /// `-2 mu`, the squared radius of the constraint sphere.
    pub fn radius_sq(&self) -> GaussianRational {
        GaussianRational::from_real(-(&self.mu + &self.mu))
    }

    /// The same reduction with a different momentum value.
    pub fn with_mu(&self, mu: BigRational) -> Result<Self> {
        Self::new(self.n, mu)
    }

    pub fn is_unit_sphere(&self) -> bool {
        self.radius_sq().is_one()
    }
}

/// An element of `C^inf(CP^n)[[lambda]]`, stored as a series whose
/// coefficients are homogeneous pullbacks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedElement {
    series: LambdaFuncSeries,
}

impl ReducedElement {
    pub fn new(series: LambdaFuncSeries) -> Result<Self> {
        for (k, c) in series.coeffs().iter().enumerate() {
            if !c.is_homogeneous() {
                return Err(Error::NotHomogeneous {
                    context: format!("reduced element, lambda order {k}"),
                });
            }
        }
        Ok(ReducedElement { series })
    }

    pub fn from_func(f: FuncExpr, order: usize) -> Result<Self> {
        Self::new(LambdaFuncSeries::constant(f, order))
    }

    pub fn series(&self) -> &LambdaFuncSeries {
        &self.series
    }

    pub fn into_series(self) -> LambdaFuncSeries {
        self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn semantic_eq(&self, other: &ReducedElement) -> bool {
        self.series.semantic_eq(&other.series)
    }
}

/// `J = -x/2`.
pub fn momentum_map(n: usize) -> FuncExpr {
    FuncExpr::x_pow(n, 1).scale(&GaussianRational::ratio(-1, 2))
}

/// `S_D J = D(lambda/x) J = -(x + sum_r d_r lambda^r x^{1-r}) / 2`.
pub fn quantum_momentum(n: usize, d: &DSeries, order: usize) -> LambdaFuncSeries {
    let half = GaussianRational::ratio(-1, 2);
    let mut out = LambdaFuncSeries::zero(n, order);
    *out.coeff_mut(0) = momentum_map(n);
    for r in 1..=order {
        let dr = d.d(r);
        if !dr.is_zero() {
            *out.coeff_mut(r) = FuncExpr::x_pow(n, 1 - r as i32).scale(&(&dr * &half));
        }
    }
    out
}

/// `S_D J - D(lambda / (-2 mu)) mu`, a radial series vanishing at `x = -2 mu`
/// order by order.
pub fn ideal_generator(d: &DSeries, ctx: &ReductionContext, order: usize) -> LambdaFuncSeries {
    let n = ctx.n();
    let mut out = quantum_momentum(n, d, order);
    let a = ctx.radius_sq();
    let mu = ctx.mu();
    for r in 0..=order {
        let value = &(&d.d(r) * &mu) * &a.powi(-(r as i64));
        let c = out.coeff(r) - &FuncExpr::constant(n, value);
        *out.coeff_mut(r) = c;
    }
    out
}

fn require_invariant(f: &FuncExpr, k: usize) -> Result<Vec<(FuncExpr, i32)>> {
    f.decompose_invariant().map_err(|_| Error::NotInvariant {
        context: format!("lambda order {k}"),
    })
}

/// `F_mu`: per lambda-order, `sum_p h_p x^p -> sum_p h_p (-2 mu)^p`.
pub fn reduce_at_mu(f: &LambdaFuncSeries, ctx: &ReductionContext) -> Result<ReducedElement> {
    if f.n() != ctx.n() {
        return Err(Error::DimensionMismatch { left: ctx.n(), right: f.n() });
    }
    let a = ctx.radius_sq();
    let mut coeffs = Vec::with_capacity(f.order() + 1);
    for (k, c) in f.coeffs().iter().enumerate() {
        let mut acc = FuncExpr::zero(f.n());
        for (h, p) in require_invariant(c, k)? {
            acc += &h.scale(&a.powi(p as i64));
        }
        coeffs.push(acc);
    }
    ReducedElement::new(LambdaFuncSeries::from_coeffs(f.n(), coeffs, f.order())?)
}

/// Exact quotient of `sum_p h_p x^p` by `x - a`, plus the remainder
/// `x^{lo} Q(a)` where `Q = x^{-lo} sum_p h_p x^p`.
fn divide_by_linear(parts: &[(FuncExpr, i32)], a: &GaussianRational, n: usize) -> (FuncExpr, FuncExpr) {
    if parts.is_empty() {
        return (FuncExpr::zero(n), FuncExpr::zero(n));
    }
    let lo = parts[0].1;
    let hi = parts[parts.len() - 1].1;
    let deg = (hi - lo) as usize;
    let mut coeffs = vec![FuncExpr::zero(n); deg + 1];
    for (h, p) in parts {
        coeffs[(p - lo) as usize] += h;
    }
    // Synthetic division from the top coefficient down.
    let mut quotient = vec![FuncExpr::zero(n); deg];
    let mut carry = FuncExpr::zero(n);
    for j in (0..=deg).rev() {
        carry = &coeffs[j] + &carry.scale(a);
        if j > 0 {
            quotient[j - 1] = carry.clone();
        }
    }
    let mut q = FuncExpr::zero(n);
    for (j, c) in quotient.iter().enumerate() {
        q += &c.mul_x_pow(lo + j as i32);
    }
    (q, carry.mul_x_pow(lo))
}

/// Divides an invariant series with `F_mu = 0` by the ideal generator:
/// returns `G` with `G *^D generator = F`. Stage `k` divides the current
/// remainder's `lambda^k` coefficient by `g_0 = -(x + 2 mu)/2`; the generator
/// is radial, so `*^D` against it is the pointwise product.
pub fn ideal_divide(
    f: &LambdaFuncSeries,
    d: &DSeries,
    ctx: &ReductionContext,
    order: usize,
) -> Result<LambdaFuncSeries> {
    if f.n() != ctx.n() {
        return Err(Error::DimensionMismatch { left: ctx.n(), right: f.n() });
    }
    if f.order() < order {
        return Err(Error::InsufficientOrder { needed: order, have: f.order() });
    }
    let n = f.n();
    let reduced = reduce_at_mu(&f.truncate(order), ctx)?;
    for (k, c) in reduced.series().coeffs().iter().enumerate() {
        if !c.is_zero() {
            return Err(Error::NotInIdeal {
                order: k,
                residue: c.normal_form().to_string(),
            });
        }
    }
    let gen = ideal_generator(d, ctx, order);
    let a = ctx.radius_sq();
    let minus_two = GaussianRational::from_integer(-2);
    let mut g = LambdaFuncSeries::zero(n, order);
    for k in 0..=order {
        let mut rem = f.coeff(k).clone();
        for j in 0..k {
            rem -= &(g.coeff(j) * gen.coeff(k - j));
        }
        let parts = require_invariant(&rem, k)?;
        let (quot, residue) = divide_by_linear(&parts, &a, n);
        if !residue.is_zero() {
            return Err(Error::NotInIdeal {
                order: k,
                residue: residue.normal_form().to_string(),
            });
        }
        // rem = (x - a) quot and g_0 = -(x - a)/2.
        *g.coeff_mut(k) = quot.scale(&minus_two);
    }
    Ok(g)
}

/// `phi *^D_mu psi = sum_r (lambda / (-2 mu))^r K~^D_r(phi, psi)`, evaluated on
/// homogeneous representatives.
pub fn reduced_star(
    phi: &ReducedElement,
    psi: &ReducedElement,
    d: &DSeries,
    ctx: &ReductionContext,
    order: usize,
) -> Result<ReducedElement> {
    let (f, g) = (phi.series(), psi.series());
    f.check_dim(g)?;
    if f.n() != ctx.n() {
        return Err(Error::DimensionMismatch { left: ctx.n(), right: f.n() });
    }
    if f.order() < order || g.order() < order {
        return Err(Error::InsufficientOrder {
            needed: order,
            have: f.order().min(g.order()),
        });
    }
    let table = k_table(d, order);
    let a_inv = ctx.radius_sq().inv().expect("mu < 0");
    let weights: Vec<GaussianRational> = (0..=order).map(|k| a_inv.powi(k as i64)).collect();
    let mut out = LambdaFuncSeries::zero(f.n(), order);
    for a in 0..=order {
        if f.coeff(a).is_empty() {
            continue;
        }
        for b in 0..=order - a {
            if g.coeff(b).is_empty() {
                continue;
            }
            let rest = order - a - b;
            let ms = m_r_all(f.coeff(a), g.coeff(b), rest);
            for (k, w) in weights.iter().enumerate().take(rest + 1) {
                *out.coeff_mut(a + b + k) += &table.combine(k, &ms).scale(w);
            }
        }
    }
    ReducedElement::new(out)
}

/// `K~^D_r(phi, psi)` for `r = 0..=order`, read off [`reduced_star`] by
/// undoing the `(-2 mu)^{-r}` weights.
pub fn reduced_operator_rows(
    phi: &FuncExpr,
    psi: &FuncExpr,
    d: &DSeries,
    ctx: &ReductionContext,
    order: usize,
) -> Result<Vec<FuncExpr>> {
    let p = ReducedElement::from_func(phi.clone(), order)?;
    let q = ReducedElement::from_func(psi.clone(), order)?;
    let prod = reduced_star(&p, &q, d, ctx, order)?;
    let a = ctx.radius_sq();
    Ok(prod
        .series()
        .coeffs()
        .iter()
        .enumerate()
        .map(|(r, c)| c.scale(&a.powi(r as i64)))
        .collect())
}
