//! The Wick star product on `C^{n+1} \ {0}`, the bidifferential operators
//! `M_r`, the coefficient tables `K^D_k = sum_r a_{k,r} M_r`, and the star
//! products `*^D` on the U(1)-invariant subalgebra.
//!
//! `*^D` is built from its closed form on homogeneous functions,
//!
//! ```text
//! f *^D g = sum_r (1/r!) (u C(u))^r prod_{s=1..r} (1 + s u C(u))^{-1} M_r(f, g),   u = lambda / x,
//! ```
//!
//! extended to invariant functions by making radial functions central:
//! `(h1 x^p) *^D (h2 x^q) = x^{p+q} (h1 *^D h2)`. The plain Wick product does
//! not obey that rule (`x * x = x^2 + lambda x`), so `*^D` with `D = 1` and
//! the Wick product are different products on invariant functions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lambda::LambdaFuncSeries;
use crate::ring::{derivative_table, inv_multi_factorial, multi_indices, DiffKind, FuncExpr};
use crate::scalar::GaussianRational;
use crate::series::{product_of_inverses, series_invert, TruncUniSeries};

/// `D(lambda) = 1 + sum_{r=1..N} d_r lambda^r` together with `C = D^{-1}`.
///
/// A `DSeries` is a polynomial: coefficients beyond the stored ones are zero,
/// so [`DSeries::with_order`] can extend it exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSeries {
    d: TruncUniSeries,
    c: TruncUniSeries,
}

impl DSeries {
    /// `d` holds `d_1, d_2, ...`; it is padded or cut to `order` entries.
    pub fn new(d: Vec<GaussianRational>, order: usize) -> Self {
        let d = TruncUniSeries::from_coeffs(std::iter::once(GaussianRational::one()).chain(d), order);
        let c = series_invert(&d).expect("constant term is 1 by construction");
        DSeries { d, c }
    }

    /// `D = 1`.
    pub fn trivial(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    /// Accepts a full series `d_0 + d_1 lambda + ...`, rejecting `d_0 != 1`.
    pub fn from_series(d: TruncUniSeries) -> Result<Self> {
        let c = series_invert(&d)?;
        Ok(DSeries { d, c })
    }

    pub fn order(&self) -> usize {
        self.d.order()
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self::new(self.d.coeffs()[1..].to_vec(), order)
    }

    pub fn d_series(&self) -> &TruncUniSeries {
        &self.d
    }

    pub fn c_series(&self) -> &TruncUniSeries {
        &self.c
    }

    /// `d_r`, zero beyond the stored order.
    pub fn d(&self, r: usize) -> GaussianRational {
        self.d.coeffs().get(r).cloned().unwrap_or_default()
    }

    /// `c_r`. Panics beyond the stored order, where `c_r` depends on the
    /// truncation; extend with [`DSeries::with_order`] first.
    pub fn c(&self, r: usize) -> GaussianRational {
        self.c.coeff(r).clone()
    }

    /// `c_1..c_N`.
    pub fn c_params(&self) -> Vec<GaussianRational> {
        self.c.coeffs()[1..].to_vec()
    }
}

/// `K^D_k = sum_{r<=k} a_{k,r} M_r` for `k = 0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTable {
    rows: Vec<Vec<GaussianRational>>,
}

impl KTable {
    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }

    /// `a_{k,r}`, zero for `r > k`.
    pub fn a(&self, k: usize, r: usize) -> GaussianRational {
        self.rows[k].get(r).cloned().unwrap_or_default()
    }

    /// Row `k` as `[a_{k,0}, ..., a_{k,k}]`.
    pub fn row(&self, k: usize) -> &[GaussianRational] {
        &self.rows[k]
    }

    pub fn rows(&self) -> &[Vec<GaussianRational>] {
        &self.rows
    }

    /// `sum_r a_{k,r} M_r` given `ms[r] = M_r(f, g)`.
    pub fn combine(&self, k: usize, ms: &[FuncExpr]) -> FuncExpr {
        let n = ms[0].n();
        let mut out = FuncExpr::zero(n);
        for (r, a) in self.rows[k].iter().enumerate() {
            if !a.is_zero() {
                out += &ms[r].scale(a);
            }
        }
        out
    }
}

/// Expands each `product_of_inverses(r, C, N)` in `u` and reads off
/// `a_{k,r} = [u^k]`.
pub fn k_table(d: &DSeries, order: usize) -> KTable {
    let d = if d.order() < order { d.with_order(order) } else { d.clone() };
    let c = d.c_series();
    let mut rows: Vec<Vec<GaussianRational>> = (0..=order).map(|k| vec![GaussianRational::zero(); k + 1]).collect();
    for r in 0..=order {
        let p = product_of_inverses(r, c, order);
        for (k, row) in rows.iter_mut().enumerate().skip(r) {
            row[r] = p.coeff(k).clone();
        }
    }
    KTable { rows }
}

fn check_dims(f: &FuncExpr, g: &FuncExpr) -> Result<()> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { left: f.n(), right: g.n() });
    }
    Ok(())
}

fn require_order(s: &LambdaFuncSeries, order: usize) -> Result<()> {
    if s.order() < order {
        return Err(Error::InsufficientOrder { needed: order, have: s.order() });
    }
    Ok(())
}

/// `F * G = sum_r (lambda^r / r!) d^r F / dz^{i_1..i_r} * d^r G / dzb^{i_1..i_r}`,
/// truncated at `lambda^order`.
///
/// The ordered index sum is evaluated as a sum over multi-indices `kappa`
/// with weight `1/kappa!`.
pub fn wick_product(f: &LambdaFuncSeries, g: &LambdaFuncSeries, order: usize) -> Result<LambdaFuncSeries> {
    f.check_dim(g)?;
    require_order(f, order)?;
    require_order(g, order)?;
    let n = f.n();
    let dim = n + 1;
    let f_tables: Vec<_> = (0..=order)
        .map(|a| derivative_table(f.coeff(a), DiffKind::Holomorphic, (order - a) as u32))
        .collect();
    let g_tables: Vec<_> = (0..=order)
        .map(|b| derivative_table(g.coeff(b), DiffKind::Antiholomorphic, (order - b) as u32))
        .collect();
    let mut out = LambdaFuncSeries::zero(n, order);
    for a in 0..=order {
        if f.coeff(a).is_empty() {
            continue;
        }
        for b in 0..=order - a {
            if g.coeff(b).is_empty() {
                continue;
            }
            for r in 0..=(order - a - b) as u32 {
                let slot = out.coeff_mut(a + b + r as usize);
                for kappa in multi_indices(dim, r) {
                    let df = &f_tables[a][&kappa];
                    let dg = &g_tables[b][&kappa];
                    if df.is_empty() || dg.is_empty() {
                        continue;
                    }
                    *slot += &(df * dg).scale(&inv_multi_factorial(&kappa));
                }
            }
        }
    }
    Ok(out)
}

/// `{F, G} = -2i sum_k (dF/dz^k dG/dzb^k - dF/dzb^k dG/dz^k)`.
///
/// The normalization makes the Wick commutator `F * G - G * F` equal
/// `(i lambda / 2) {F, G}` at first order.
pub fn poisson_bracket(f: &FuncExpr, g: &FuncExpr) -> Result<FuncExpr> {
    check_dims(f, g)?;
    let n = f.n();
    let mut acc = FuncExpr::zero(n);
    for k in 0..=n {
        let a = &f.diff_unchecked(DiffKind::Holomorphic, k) * &g.diff_unchecked(DiffKind::Antiholomorphic, k);
        let b = &f.diff_unchecked(DiffKind::Antiholomorphic, k) * &g.diff_unchecked(DiffKind::Holomorphic, k);
        acc += &a;
        acc -= &b;
    }
    Ok(acc.scale(&GaussianRational::complex(0, 1, -2, 1)))
}

/// `M_r(f, g) = x^r sum d^r f / dz^{i_1..i_r} * d^r g / dzb^{i_1..i_r}`.
pub fn m_r_apply(r: usize, f: &FuncExpr, g: &FuncExpr) -> Result<FuncExpr> {
    check_dims(f, g)?;
    Ok(m_r_all(f, g, r).pop().unwrap())
}

/// `[M_0(f, g), ..., M_max(f, g)]`, sharing the derivative tables.
pub fn m_r_all(f: &FuncExpr, g: &FuncExpr, max: usize) -> Vec<FuncExpr> {
    let n = f.n();
    let dim = n + 1;
    let ft = derivative_table(f, DiffKind::Holomorphic, max as u32);
    let gt = derivative_table(g, DiffKind::Antiholomorphic, max as u32);
    (0..=max)
        .map(|r| {
            let mut acc = FuncExpr::zero(n);
            // r! / kappa! counts the orderings of each multi-index.
            let r_fact = GaussianRational::factorial_inv(r as u32).inv().unwrap();
            for kappa in multi_indices(dim, r as u32) {
                let (df, dg) = (&ft[&kappa], &gt[&kappa]);
                if df.is_empty() || dg.is_empty() {
                    continue;
                }
                acc += &(df * dg).scale(&(&r_fact * &inv_multi_factorial(&kappa)));
            }
            acc.mul_x_pow(r as i32)
        })
        .collect()
}

fn require_homogeneous(f: &FuncExpr, which: &str) -> Result<()> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous { context: which.to_string() });
    }
    Ok(())
}

/// `f *^D g` for homogeneous `f, g`: the `lambda^k` coefficient is
/// `x^{-k} sum_r a_{k,r} M_r(f, g)`.
pub fn star_hom(f: &FuncExpr, g: &FuncExpr, d: &DSeries, order: usize) -> Result<LambdaFuncSeries> {
    check_dims(f, g)?;
    require_homogeneous(f, "left factor")?;
    require_homogeneous(g, "right factor")?;
    let table = k_table(d, order);
    Ok(star_hom_with(f, g, &table, order))
}

pub(crate) fn star_hom_with(f: &FuncExpr, g: &FuncExpr, table: &KTable, order: usize) -> LambdaFuncSeries {
    let n = f.n();
    let ms = m_r_all(f, g, order);
    let mut out = LambdaFuncSeries::zero(n, order);
    for k in 0..=order {
        *out.coeff_mut(k) = table.combine(k, &ms).mul_x_pow(-(k as i32));
    }
    out
}

fn decompose_series(s: &LambdaFuncSeries, which: &str) -> Result<Vec<Vec<(FuncExpr, i32)>>> {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            c.decompose_invariant().map_err(|_| Error::NotInvariant {
                context: format!("{which}, lambda order {k}"),
            })
        })
        .collect()
}

/// `F *^D G` for series with U(1)-invariant coefficients, extending
/// [`star_hom`] bilinearly with radial functions central.
pub fn star_invariant(
    f: &LambdaFuncSeries,
    g: &LambdaFuncSeries,
    d: &DSeries,
    order: usize,
) -> Result<LambdaFuncSeries> {
    f.check_dim(g)?;
    require_order(f, order)?;
    require_order(g, order)?;
    let fd = decompose_series(f, "left factor")?;
    let gd = decompose_series(g, "right factor")?;
    let table = k_table(d, order);
    let n = f.n();
    let mut out = LambdaFuncSeries::zero(n, order);
    for (a, f_parts) in fd.iter().enumerate().take(order + 1) {
        for (b, g_parts) in gd.iter().enumerate().take(order + 1 - a) {
            let rest = order - a - b;
            for (h1, p) in f_parts {
                for (h2, q) in g_parts {
                    let prod = star_hom_with(h1, h2, &table, rest);
                    for (k, c) in prod.coeffs().iter().enumerate() {
                        *out.coeff_mut(a + b + k) += &c.mul_x_pow(p + q);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::InstanceGen;
    use crate::ring::Monomial;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> GaussianRational {
        GaussianRational::ratio(a, b)
    }

    fn phi(n: usize) -> FuncExpr {
        let mut m = Monomial::one(n);
        m.alpha[0] = 1;
        m.beta[0] = 1;
        m.m = -1;
        FuncExpr::term(m, GaussianRational::one())
    }

    fn lf(f: FuncExpr, order: usize) -> LambdaFuncSeries {
        LambdaFuncSeries::constant(f, order)
    }

    #[test]
    fn wick_examples() {
        let n = 1;
        let z0 = lf(FuncExpr::z(n, 0), 2);
        let zb0 = lf(FuncExpr::zb(n, 0), 2);
        let p = wick_product(&z0, &zb0, 2).unwrap();
        assert_eq!(p.coeff(0), &(FuncExpr::z(n, 0) * FuncExpr::zb(n, 0)));
        assert_eq!(p.coeff(1), &FuncExpr::one(n));
        assert!(p.coeff(2).is_empty());
        let p = wick_product(&zb0, &z0, 2).unwrap();
        assert_eq!(p.coeff(0), &(FuncExpr::z(n, 0) * FuncExpr::zb(n, 0)));
        assert!(p.coeff(1).is_empty());

        let x = lf(FuncExpr::x_pow(n, 1), 3);
        let p = wick_product(&x, &x, 3).unwrap();
        assert_eq!(p.coeff(0), &FuncExpr::x_pow(n, 2));
        assert!(p.coeff(1).semantic_eq(&FuncExpr::x_pow(n, 1)));
        assert!(p.coeff(2).is_zero() && p.coeff(3).is_zero());

        let mut g = InstanceGen::new(3, n);
        let f = lf(g.expr(), 3);
        assert_eq!(wick_product(&lf(FuncExpr::one(n), 3), &f, 3).unwrap(), f);
    }

    #[test]
    fn wick_requires_order() {
        let a = lf(FuncExpr::one(1), 1);
        assert!(matches!(wick_product(&a, &a, 2), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn poisson_examples() {
        let n = 1;
        let b = poisson_bracket(&FuncExpr::z(n, 0), &FuncExpr::zb(n, 0)).unwrap();
        assert_eq!(b, FuncExpr::constant(n, GaussianRational::complex(0, 1, -2, 1)));
        let mut g = InstanceGen::new(11, n);
        let f = g.expr();
        assert!(poisson_bracket(&f, &f).unwrap().is_empty());
        let j = FuncExpr::x_pow(n, 1).scale(&q(-1, 2));
        let b = poisson_bracket(&FuncExpr::z(n, 0), &j).unwrap();
        assert!(b.semantic_eq(&FuncExpr::z(n, 0).scale(&GaussianRational::i())));
    }

    #[test]
    fn m_r_examples() {
        let n = 1;
        let mut g = InstanceGen::new(5, n);
        let (f, h) = (g.homogeneous(), g.homogeneous());
        assert_eq!(m_r_apply(0, &f, &h).unwrap(), &f * &h);
        for r in 1..=3 {
            assert!(m_r_apply(r, &FuncExpr::one(n), &h).unwrap().is_empty());
        }
        let p = phi(n);
        let m1 = m_r_apply(1, &p, &p).unwrap();
        assert!(m1.semantic_eq(&(&p - &(&p * &p))));
    }

    /// Brute-force oracle: the ordered sum over `(i_1, ..., i_r)` of Eq. (2).
    fn m_r_ordered(r: usize, f: &FuncExpr, g: &FuncExpr) -> FuncExpr {
        let n = f.n();
        let mut acc = FuncExpr::zero(n);
        let total = (n + 1).pow(r as u32);
        for idx in 0..total {
            let mut df = f.clone();
            let mut dg = g.clone();
            let mut i = idx;
            for _ in 0..r {
                let k = i % (n + 1);
                i /= n + 1;
                df = df.diff(DiffKind::Holomorphic, k).unwrap();
                dg = dg.diff(DiffKind::Antiholomorphic, k).unwrap();
            }
            acc += &(&df * &dg);
        }
        acc.mul_x_pow(r as i32)
    }

    #[test]
    fn m_r_matches_ordered_sum() {
        for seed in 0..6 {
            for n in 1..=2 {
                let mut g = InstanceGen::new(seed, n);
                let (f, h) = (g.expr(), g.expr());
                for r in 0..=3 {
                    assert_eq!(m_r_apply(r, &f, &h).unwrap(), m_r_ordered(r, &f, &h));
                }
            }
        }
    }

    #[test]
    fn k_table_examples() {
        let t = k_table(&DSeries::trivial(3), 3);
        assert_eq!(t.row(0), &[q(1, 1)]);
        assert_eq!(t.row(1), &[q(0, 1), q(1, 1)]);
        assert_eq!(t.row(2), &[q(0, 1), q(-1, 1), q(1, 2)]);
        assert_eq!(t.row(3), &[q(0, 1), q(1, 1), q(-3, 2), q(1, 6)]);
        let t = k_table(&DSeries::new(vec![q(1, 1)], 3), 3);
        assert_eq!(t.row(2), &[q(0, 1), q(-2, 1), q(1, 2)]);
    }

    #[test]
    fn k_table_extends_short_dseries() {
        let d = DSeries::new(vec![q(1, 1)], 1);
        assert_eq!(k_table(&d, 4), k_table(&d.with_order(4), 4));
    }

    #[test]
    fn star_hom_examples() {
        let n = 1;
        let p = phi(n);
        let d = DSeries::new(vec![q(2, 1), GaussianRational::i()], 2);
        let s = star_hom(&p, &FuncExpr::one(n), &d, 3).unwrap();
        assert_eq!(s, lf(p.clone(), 3));

        let s = star_hom(&p, &p, &DSeries::trivial(1), 1).unwrap();
        assert_eq!(s.coeff(0), &(&p * &p));
        let expected = (&p - &(&p * &p)).mul_x_pow(-1);
        assert!(s.coeff(1).semantic_eq(&expected));

        let mut g = InstanceGen::new(9, n);
        let psi = g.homogeneous();
        let s = star_hom(&p, &psi, &DSeries::trivial(2), 2).unwrap();
        let k2 = &m_r_apply(1, &p, &psi).unwrap().scale(&q(-1, 1)) + &m_r_apply(2, &p, &psi).unwrap().scale(&q(1, 2));
        assert_eq!(s.coeff(2), &k2.mul_x_pow(-2));

        assert!(matches!(
            star_hom(&FuncExpr::x_pow(n, 1), &p, &DSeries::trivial(1), 1),
            Err(Error::NotHomogeneous { .. })
        ));
    }

    #[test]
    fn star_invariant_examples() {
        let n = 1;
        let order = 3;
        let d = DSeries::new(vec![q(1, 1)], order);
        let mut g = InstanceGen::new(21, n);
        let f = lf(g.invariant(), order);
        let xp = lf(FuncExpr::x_pow(n, 2), order);
        let left = star_invariant(&xp, &f, &d, order).unwrap();
        let right = star_invariant(&f, &xp, &d, order).unwrap();
        let pointwise = xp.pointwise_mul(&f).unwrap();
        assert!(left.semantic_eq(&pointwise));
        assert!(right.semantic_eq(&pointwise));

        let p = phi(n);
        let psi = g.homogeneous();
        let px = lf(p.mul_x_pow(1), order);
        let qx = lf(psi.mul_x_pow(1), order);
        let lhs = star_invariant(&px, &qx, &d, order).unwrap();
        let rhs = star_hom(&p, &psi, &d, order).unwrap().map(|c| c.mul_x_pow(2));
        assert_eq!(lhs, rhs);

        let x = lf(FuncExpr::x_pow(n, 1), order);
        let (pl, sl) = (lf(p.clone(), order), lf(psi.clone(), order));
        let a = star_invariant(&star_invariant(&pl, &x, &d, order).unwrap(), &sl, &d, order).unwrap();
        let b = star_invariant(&pl, &star_invariant(&x, &sl, &d, order).unwrap(), &d, order).unwrap();
        assert!(a.semantic_eq(&b));

        assert!(matches!(
            star_invariant(&lf(FuncExpr::z(n, 0), 1), &x, &d, 1),
            Err(Error::NotInvariant { .. })
        ));
    }

    #[test]
    fn wick_is_not_radial_central() {
        let n = 1;
        let x = lf(FuncExpr::x_pow(n, 1), 1);
        let w = wick_product(&x, &x, 1).unwrap();
        let s = star_invariant(&x, &x, &DSeries::trivial(1), 1).unwrap();
        assert!(!w.semantic_eq(&s));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn wick_zeroth_and_first_order(seed in any::<u64>(), n in 1usize..=2) {
            let mut g = InstanceGen::new(seed, n);
            let (f, h) = (g.expr(), g.expr());
            let fg = wick_product(&lf(f.clone(), 1), &lf(h.clone(), 1), 1).unwrap();
            let gf = wick_product(&lf(h.clone(), 1), &lf(f.clone(), 1), 1).unwrap();
            prop_assert_eq!(fg.coeff(0), &(&f * &h));
            let comm = fg.coeff(1) - gf.coeff(1);
            let pb = poisson_bracket(&f, &h).unwrap().scale(&GaussianRational::complex(0, 1, 1, 2));
            prop_assert!(comm.semantic_eq(&pb));
        }

        #[test]
        fn bracket_is_biderivation(seed in any::<u64>()) {
            let mut g = InstanceGen::new(seed, 1);
            let (a, b, c) = (g.expr(), g.expr(), g.expr());
            prop_assert_eq!(poisson_bracket(&a, &b).unwrap(), -&poisson_bracket(&b, &a).unwrap());
            let lhs = poisson_bracket(&a, &(&b * &c)).unwrap();
            let rhs = &(&poisson_bracket(&a, &b).unwrap() * &c) + &(&b * &poisson_bracket(&a, &c).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn m_r_preserves_homogeneity(seed in any::<u64>(), n in 1usize..=2, r in 0usize..=3) {
            let mut g = InstanceGen::new(seed, n);
            let (f, h) = (g.homogeneous(), g.homogeneous());
            prop_assert!(m_r_apply(r, &f, &h).unwrap().is_homogeneous());
        }

        #[test]
        fn k1_is_m1_for_every_d(seed in any::<u64>()) {
            let mut g = InstanceGen::new(seed, 1);
            let d = g.dseries(4);
            let t = k_table(&d, 4);
            prop_assert!(t.a(0, 0).is_one());
            prop_assert!(t.a(1, 0).is_zero());
            prop_assert!(t.a(1, 1).is_one());
            for k in 1..=4 {
                prop_assert!(t.a(k, 0).is_zero());
                prop_assert_eq!(t.a(k, k), GaussianRational::factorial_inv(k as u32));
            }
        }

        #[test]
        fn star_hom_scaling_weights(seed in any::<u64>()) {
            let mut g = InstanceGen::new(seed, 1);
            let (f, h) = (g.homogeneous(), g.homogeneous());
            let d = g.dseries(3);
            let s = star_hom(&f, &h, &d, 3).unwrap();
            for (k, c) in s.coeffs().iter().enumerate() {
                prop_assert!(c.mul_x_pow(k as i32).is_homogeneous());
                for (mono, _) in c.terms() {
                    prop_assert_eq!(mono.scaling_weights(), (-(k as i64), -(k as i64)));
                }
            }
        }

        #[test]
        fn invariant_closure_under_wick(seed in any::<u64>()) {
            let mut g = InstanceGen::new(seed, 1);
            let (f, h) = (g.invariant(), g.invariant());
            let p = wick_product(&lf(f, 3), &lf(h, 3), 3).unwrap();
            prop_assert!(p.is_u1_invariant());
        }
    }
}
