//! The function ring on `C^{n+1} \ {0}` spanned by monomials `z^a zb^b x^m`.
//!
//! `x = sum_k z^k zb^k` is kept as a formal generator with integer exponent,
//! so a `FuncExpr` is a term map that is not a canonical form: two different
//! term maps can denote the same function. [`FuncExpr::is_zero`] decides
//! semantic vanishing exactly; [`FuncExpr::normal_form`] returns the unique
//! representative with no monomial divisible by `z^n zb^n`.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// `z^alpha zb^beta x^m`. Ordered lexicographically on `(alpha, beta, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub m: i32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            alpha: vec![0; n + 1],
            beta: vec![0; n + 1],
            m: 0,
        }
    }

    pub fn new(alpha: Vec<u32>, beta: Vec<u32>, m: i32) -> Self {
        assert_eq!(alpha.len(), beta.len(), "alpha and beta must share a dimension");
        assert!(!alpha.is_empty(), "dimension n + 1 must be positive");
        Monomial { alpha, beta, m }
    }

    /// The dimension parameter `n` (there are `n + 1` coordinates).
    pub fn n(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn holo_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }

    pub fn anti_degree(&self) -> u32 {
        self.beta.iter().sum()
    }

    /// `|alpha| - |beta|`.
    pub fn u1_weight(&self) -> i64 {
        self.holo_degree() as i64 - self.anti_degree() as i64
    }

    /// `(|alpha| + m, |beta| + m)`: the weights under `z -> t z`.
    pub fn scaling_weights(&self) -> (i64, i64) {
        (
            self.holo_degree() as i64 + self.m as i64,
            self.anti_degree() as i64 + self.m as i64,
        )
    }

    pub fn is_x_power(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
            m: self.m + other.m,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiffKind {
    /// `d/dz^k`
    Holomorphic,
    /// `d/dzb^k`
    Antiholomorphic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub u1_invariant: bool,
    pub homogeneous: bool,
    pub radial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncExpr {
    n: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl FuncExpr {
    pub fn zero(n: usize) -> Self {
        FuncExpr {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self::term(Monomial::one(n), c)
    }

    pub fn term(mono: Monomial, c: GaussianRational) -> Self {
        let n = mono.n();
        let mut e = Self::zero(n);
        e.add_term(mono, c);
        e
    }

    /// The coordinate `z^k`. Panics if `k > n`.
    pub fn z(n: usize, k: usize) -> Self {
        let mut mono = Monomial::one(n);
        mono.alpha[k] = 1;
        Self::term(mono, GaussianRational::one())
    }

    /// The conjugate coordinate `zb^k`. Panics if `k > n`.
    pub fn zb(n: usize, k: usize) -> Self {
        let mut mono = Monomial::one(n);
        mono.beta[k] = 1;
        Self::term(mono, GaussianRational::one())
    }

    pub fn x_pow(n: usize, m: i32) -> Self {
        let mut mono = Monomial::one(n);
        mono.m = m;
        Self::term(mono, GaussianRational::one())
    }

    /// `sum_k z^k zb^k`, the expansion of `x`.
    pub fn x_expanded(n: usize) -> Self {
        let mut e = Self::zero(n);
        for k in 0..=n {
            let mut mono = Monomial::one(n);
            mono.alpha[k] = 1;
            mono.beta[k] = 1;
            e.add_term(mono, GaussianRational::one());
        }
        e
    }

    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Monomial, GaussianRational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(n);
        for (mono, c) in terms {
            if mono.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: mono.n(),
                });
            }
            e.add_term(mono, c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Structurally empty term map. See [`FuncExpr::is_zero`] for semantic zero.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &Monomial) -> GaussianRational {
        self.terms.get(mono).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, mono: Monomial, c: GaussianRational) {
        debug_assert_eq!(mono.n(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        FuncExpr {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Multiplies by `x^p` by shifting every exponent.
    pub fn mul_x_pow(&self, p: i32) -> Self {
        FuncExpr {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.m += p;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    fn check_dim(&self, other: &FuncExpr) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &FuncExpr) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    /// Pointwise product.
    pub fn checked_mul(&self, other: &FuncExpr) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self * other)
    }

    /// Wirtinger derivative `d/dz^k` or `d/dzb^k`, using
    /// `d x^m / dz^k = m x^{m-1} zb^k` and `d x^m / dzb^k = m x^{m-1} z^k`.
    pub fn diff(&self, kind: DiffKind, k: usize) -> Result<Self> {
        if k > self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(self.diff_unchecked(kind, k))
    }

    pub(crate) fn diff_unchecked(&self, kind: DiffKind, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (mono, c) in &self.terms {
            let (own, other) = match kind {
                DiffKind::Holomorphic => (&mono.alpha, &mono.beta),
                DiffKind::Antiholomorphic => (&mono.beta, &mono.alpha),
            };
            let e = own[k];
            if e > 0 {
                let mut lowered = own.clone();
                lowered[k] -= 1;
                let mono2 = rebuild(kind, lowered, other.clone(), mono.m);
                out.add_term(mono2, c * &GaussianRational::from_integer(e as i64));
            }
            if mono.m != 0 {
                let mut raised = other.clone();
                raised[k] += 1;
                let mono2 = rebuild(kind, own.clone(), raised, mono.m - 1);
                out.add_term(mono2, c * &GaussianRational::from_integer(mono.m as i64));
            }
        }
        out
    }

    /// Semantic zero test: multiply by `x^M` to clear negative powers,
    /// substitute `x -> sum_k z^k zb^k`, expand, and check the resulting
    /// polynomial in `z, zb` vanishes identically.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let min_m = self.terms.keys().map(|m| m.m).min().unwrap_or(0);
        let shift = (-min_m).max(0);
        let poly = self.expand_polynomial(shift);
        poly.is_empty()
    }

    /// Expansion of `x^shift * self` as a polynomial in `z, zb`. All
    /// exponents must be non-negative after the shift.
    fn expand_polynomial(&self, shift: i32) -> BTreeMap<(Vec<u32>, Vec<u32>), GaussianRational> {
        let q = PolyZ::x_expanded(self.n);
        let mut powers: Vec<PolyZ> = vec![PolyZ::one(self.n)];
        let mut out = PolyZ::zero();
        for (mono, c) in &self.terms {
            let p = (mono.m + shift) as usize;
            while powers.len() <= p {
                let next = powers.last().unwrap().mul(&q);
                powers.push(next);
            }
            for ((a, b), qc) in &powers[p].0 {
                let a2: Vec<u32> = a.iter().zip(&mono.alpha).map(|(u, v)| u + v).collect();
                let b2: Vec<u32> = b.iter().zip(&mono.beta).map(|(u, v)| u + v).collect();
                out.add((a2, b2), qc * c);
            }
        }
        out.0
    }

    /// Exact evaluation at a point; `None` when `x(z) = 0`.
    pub fn eval(&self, z: &[GaussianRational]) -> Option<GaussianRational> {
        assert_eq!(z.len(), self.n + 1, "point has wrong dimension");
        let x: GaussianRational = z
            .iter()
            .map(|zk| GaussianRational::from_real(zk.norm_sqr()))
            .sum();
        if x.is_zero() {
            return None;
        }
        let zb: Vec<GaussianRational> = z.iter().map(|v| v.conj()).collect();
        let mut total = GaussianRational::zero();
        for (mono, c) in &self.terms {
            let mut v = c.clone();
            for k in 0..=self.n {
                v *= &z[k].powi(mono.alpha[k] as i64);
                v *= &zb[k].powi(mono.beta[k] as i64);
            }
            v *= &x.powi(mono.m as i64);
            total += &v;
        }
        Some(total)
    }

    /// Term-wise grading. The empty expression is vacuously everything.
    pub fn grading(&self) -> Grading {
        let mut g = Grading {
            u1_invariant: true,
            homogeneous: true,
            radial: true,
        };
        for mono in self.terms.keys() {
            let (a, b) = (mono.holo_degree() as i64, mono.anti_degree() as i64);
            g.u1_invariant &= a == b;
            g.homogeneous &= a == b && a == -(mono.m as i64);
            g.radial &= mono.is_x_power();
        }
        g
    }

    pub fn is_u1_invariant(&self) -> bool {
        self.grading().u1_invariant
    }

    pub fn is_homogeneous(&self) -> bool {
        self.grading().homogeneous
    }

    pub fn is_radial(&self) -> bool {
        self.grading().radial
    }

    /// Writes an invariant expression as `sum_p h_p x^p` with each `h_p`
    /// homogeneous, sorted by ascending `p`. A term `z^a zb^b x^m` with
    /// `|a| = |b| = d` contributes `z^a zb^b x^{-d}` to `p = m + d`.
    pub fn decompose_invariant(&self) -> Result<Vec<(FuncExpr, i32)>> {
        let mut parts: BTreeMap<i32, FuncExpr> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let d = mono.holo_degree();
            if d != mono.anti_degree() {
                return Err(Error::NotInvariant {
                    context: format!("term with |alpha| = {d}, |beta| = {}", mono.anti_degree()),
                });
            }
            let d = d as i32;
            let mut h = mono.clone();
            h.m = -d;
            parts
                .entry(mono.m + d)
                .or_insert_with(|| FuncExpr::zero(self.n))
                .add_term(h, c.clone());
        }
        Ok(parts
            .into_iter()
            .filter(|(_, h)| !h.is_empty())
            .map(|(p, h)| (h, p))
            .collect())
    }

    /// The unique representative with no monomial divisible by `z^n zb^n`,
    /// obtained by rewriting `z^n zb^n -> x - sum_{k<n} z^k zb^k`.
    pub fn normal_form(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        let mut work: Vec<(Monomial, GaussianRational)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((mono, c)) = work.pop() {
            if mono.alpha[n] == 0 || mono.beta[n] == 0 {
                out.add_term(mono, c);
                continue;
            }
            let mut base = mono.clone();
            base.alpha[n] -= 1;
            base.beta[n] -= 1;
            let mut with_x = base.clone();
            with_x.m += 1;
            work.push((with_x, c.clone()));
            for k in 0..n {
                let mut t = base.clone();
                t.alpha[k] += 1;
                t.beta[k] += 1;
                work.push((t, -&c));
            }
        }
        out
    }

    /// Semantic equality, `(self - other).is_zero()`.
    pub fn semantic_eq(&self, other: &FuncExpr) -> bool {
        self.n == other.n && (self - other).is_zero()
    }
}

fn rebuild(kind: DiffKind, own: Vec<u32>, other: Vec<u32>, m: i32) -> Monomial {
    match kind {
        DiffKind::Holomorphic => Monomial { alpha: own, beta: other, m },
        DiffKind::Antiholomorphic => Monomial { alpha: other, beta: own, m },
    }
}

/// Plain polynomial in `z, zb` used by the zero test.
struct PolyZ(BTreeMap<(Vec<u32>, Vec<u32>), GaussianRational>);

impl PolyZ {
    fn zero() -> Self {
        PolyZ(BTreeMap::new())
    }

    fn one(n: usize) -> Self {
        let mut p = Self::zero();
        p.add((vec![0; n + 1], vec![0; n + 1]), GaussianRational::one());
        p
    }

    fn x_expanded(n: usize) -> Self {
        let mut p = Self::zero();
        for k in 0..=n {
            let mut e = vec![0; n + 1];
            e[k] = 1;
            p.add((e.clone(), e), GaussianRational::one());
        }
        p
    }

    fn add(&mut self, key: (Vec<u32>, Vec<u32>), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn mul(&self, other: &PolyZ) -> PolyZ {
        let mut out = PolyZ::zero();
        for ((a1, b1), c1) in &self.0 {
            for ((a2, b2), c2) in &other.0 {
                let a: Vec<u32> = a1.iter().zip(a2).map(|(u, v)| u + v).collect();
                let b: Vec<u32> = b1.iter().zip(b2).map(|(u, v)| u + v).collect();
                out.add((a, b), c1 * c2);
            }
        }
        out
    }
}

impl<'a> Add<&'a FuncExpr> for &'a FuncExpr {
    type Output = FuncExpr;
    fn add(self, rhs: &FuncExpr) -> FuncExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a FuncExpr> for &'a FuncExpr {
    type Output = FuncExpr;
    fn sub(self, rhs: &FuncExpr) -> FuncExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&FuncExpr> for FuncExpr {
    fn add_assign(&mut self, rhs: &FuncExpr) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&FuncExpr> for FuncExpr {
    fn sub_assign(&mut self, rhs: &FuncExpr) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<'a> Mul<&'a FuncExpr> for &'a FuncExpr {
    type Output = FuncExpr;
    fn mul(self, rhs: &FuncExpr) -> FuncExpr {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = FuncExpr::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &FuncExpr {
    type Output = FuncExpr;
    fn neg(self) -> FuncExpr {
        self.scale(&-GaussianRational::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FuncExpr {
            type Output = FuncExpr;
            fn $m(self, rhs: FuncExpr) -> FuncExpr {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Pointwise product, erroring on a dimension mismatch.
pub fn fe_mul(a: &FuncExpr, b: &FuncExpr) -> Result<FuncExpr> {
    a.checked_mul(b)
}

pub fn fe_diff(a: &FuncExpr, kind: DiffKind, k: usize) -> Result<FuncExpr> {
    a.diff(kind, k)
}

pub fn fe_is_zero(a: &FuncExpr) -> bool {
    a.is_zero()
}

pub fn fe_grading(a: &FuncExpr) -> Grading {
    a.grading()
}

pub fn decompose_invariant(a: &FuncExpr) -> Result<Vec<(FuncExpr, i32)>> {
    a.decompose_invariant()
}

/// All multi-indices of length `dim` with entries summing to `total`,
/// in lexicographic order.
pub(crate) fn multi_indices(dim: usize, total: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == dim {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=total).rev() {
            prefix.push(first);
            rec(dim, total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, total, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Iterated derivatives `d^kappa f` for every multi-index with
/// `|kappa| <= max_order`, keyed by `kappa`.
pub(crate) fn derivative_table(
    f: &FuncExpr,
    kind: DiffKind,
    max_order: u32,
) -> BTreeMap<Vec<u32>, FuncExpr> {
    let dim = f.n() + 1;
    let mut table = BTreeMap::new();
    table.insert(vec![0; dim], f.clone());
    for total in 1..=max_order {
        for kappa in multi_indices(dim, total) {
            let j = kappa.iter().position(|&e| e > 0).unwrap();
            let mut parent = kappa.clone();
            parent[j] -= 1;
            let d = table[&parent].diff_unchecked(kind, j);
            table.insert(kappa, d);
        }
    }
    table
}

/// `1 / kappa!` for a multi-index.
pub(crate) fn inv_multi_factorial(kappa: &[u32]) -> GaussianRational {
    kappa
        .iter()
        .map(|&e| GaussianRational::factorial_inv(e))
        .product()
}
