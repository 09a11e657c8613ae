//! Non-equivalence certificates for the reduced star products.
//!
//! If `C` and `C'` first differ at `c_k`, the coefficient tables agree
//! through row `k` and row `k+1` differs by `(c_k - c'_k) M_1` alone. The
//! antisymmetric part of `M_1` descends to a multiple of the Poisson bracket
//! of the Fubini-Study form, which is not exact, so the two reduced products
//! are not equivalent. That last step is taken as a known fact; what is
//! computed and checked here is the operator identity.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lambda::LambdaFuncSeries;
use crate::ring::{FuncExpr, Monomial};
use crate::scalar::GaussianRational;
use crate::star::{k_table, m_r_apply, DSeries};
use crate::reduction::{reduced_operator_rows, reduced_star, ReducedElement, ReductionContext};

/// First index `k >= 1` with `c_k != c'_k`, comparing through `order`.
pub fn first_divergence(d: &DSeries, dp: &DSeries, order: usize) -> Option<usize> {
    let (d, dp) = (d.with_order(order), dp.with_order(order));
    (1..=order).find(|&k| d.c(k) != dp.c(k))
}

/// Outcome of comparing two coefficient tables at their first divergence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma41Witness {
    pub k: usize,
    pub delta: GaussianRational,
    /// Rows `0..=k` of both tables coincide.
    pub rows_agree: bool,
    /// `a_{k+1,r} - a'_{k+1,r}` for `r = 0..=k+1`.
    pub row_difference: Vec<GaussianRational>,
    pub holds: bool,
}

fn divergence(d: &DSeries, dp: &DSeries, order: usize) -> Result<(usize, GaussianRational)> {
    let k = first_divergence(d, dp, order).ok_or(Error::NoDivergence)?;
    if k + 1 > order {
        return Err(Error::InsufficientOrder { needed: k + 1, have: order });
    }
    let (d, dp) = (d.with_order(order), dp.with_order(order));
    Ok((k, &d.c(k) - &dp.c(k)))
}

/// Checks `K^D_r = K^{D'}_r` for `r <= k` and
/// `K^D_{k+1} - K^{D'}_{k+1} = (c_k - c'_k) M_1`.
pub fn lemma41_check(d: &DSeries, dp: &DSeries, order: usize) -> Result<Lemma41Witness> {
    let (k, delta) = divergence(d, dp, order)?;
    let t = k_table(d, k + 1);
    let tp = k_table(dp, k + 1);
    let rows_agree = (0..=k).all(|r| t.row(r) == tp.row(r));
    let row_difference: Vec<GaussianRational> =
        (0..=k + 1).map(|r| &t.a(k + 1, r) - &tp.a(k + 1, r)).collect();
    let only_m1 = row_difference
        .iter()
        .enumerate()
        .all(|(r, v)| if r == 1 { *v == delta } else { v.is_zero() });
    Ok(Lemma41Witness {
        k,
        delta,
        rows_agree,
        row_difference,
        holds: rows_agree && only_m1,
    })
}

/// `z^i zb^j x^{-1}` for `0 <= i, j <= n`.
pub fn default_basis(n: usize) -> Vec<ReducedElement> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let mut m = Monomial::one(n);
            m.alpha[i] = 1;
            m.beta[j] = 1;
            m.m = -1;
            let f = FuncExpr::term(m, GaussianRational::from_integer(1));
            out.push(ReducedElement::from_func(f, 0).expect("homogeneous"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor42Witness {
    pub k: usize,
    pub delta: GaussianRational,
    pub pairs_checked: usize,
    /// Ordered basis index pairs where the identity failed.
    pub failures: Vec<(usize, usize)>,
    pub holds: bool,
}

fn basis_function(e: &ReducedElement) -> Result<&FuncExpr> {
    let s = e.series();
    if s.coeffs()[1..].iter().any(|c| !c.is_empty()) {
        return Err(Error::InvalidArgument(
            "basis elements must be constant in lambda".into(),
        ));
    }
    Ok(s.coeff(0))
}

/// Checks `K~^D_r = K~^{D'}_r` for `r <= k` and
/// `K~^D_{k+1} - K~^{D'}_{k+1} = (c_k - c'_k) M~_1` on every ordered pair of
/// basis elements, with the operators read off the reduced products.
pub fn cor42_check(
    d: &DSeries,
    dp: &DSeries,
    ctx: &ReductionContext,
    order: usize,
    basis: &[ReducedElement],
) -> Result<Cor42Witness> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("basis must be nonempty".into()));
    }
    let (k, delta) = divergence(d, dp, order)?;
    let fs: Vec<&FuncExpr> = basis.iter().map(basis_function).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut pairs_checked = 0;
    for (i, phi) in fs.iter().enumerate() {
        for (j, psi) in fs.iter().enumerate() {
            pairs_checked += 1;
            let rows = reduced_operator_rows(phi, psi, d, ctx, k + 1)?;
            let rows_p = reduced_operator_rows(phi, psi, dp, ctx, k + 1)?;
            let low_agree = (0..=k).all(|r| rows[r].semantic_eq(&rows_p[r]));
            let diff = &rows[k + 1] - &rows_p[k + 1];
            let expected = m_r_apply(1, phi, psi)?.scale(&delta);
            if !(low_agree && diff.semantic_eq(&expected)) {
                failures.push((i, j));
            }
        }
    }
    Ok(Cor42Witness {
        k,
        delta,
        pairs_checked,
        holds: failures.is_empty(),
        failures,
    })
}

/// The `lambda^1` coefficient of `(phi *^D_mu psi - psi *^D_mu phi) / 2`.
pub fn first_order_extract(
    d: &DSeries,
    ctx: &ReductionContext,
    phi: &ReducedElement,
    psi: &ReducedElement,
) -> Result<FuncExpr> {
    let lift = |e: &ReducedElement| ReducedElement::new(e.series().truncate(1));
    let (p, q) = (lift(phi)?, lift(psi)?);
    let pq = reduced_star(&p, &q, d, ctx, 1)?;
    let qp = reduced_star(&q, &p, d, ctx, 1)?;
    let diff: LambdaFuncSeries = pq.series() - qp.series();
    Ok(diff.coeff(1).scale(&GaussianRational::ratio(1, 2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NonEquivalent,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NonEquivalent => "non-equivalent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub order: usize,
    pub first_divergence: Option<usize>,
    /// `c_k - c'_k` at the first divergence.
    pub delta: Option<GaussianRational>,
    /// `c_1..c_N` of `D`.
    pub c_params: Vec<GaussianRational>,
    /// `c'_1..c'_N` of `D'`.
    pub c_params_prime: Vec<GaussianRational>,
    pub verdict: Verdict,
    /// Coefficient-table certificate at rows `k` and `k+1`.
    pub certificate: Option<Lemma41Witness>,
}

/// Equivalent iff `c_1..c_N` coincide. A divergence at `c_k` comes with the
/// table certificate, computed at order `k + 1` (exact, since a `DSeries` is
/// a polynomial).
pub fn equivalence_verdict(d: &DSeries, dp: &DSeries, order: usize) -> ObstructionReport {
    let (dn, dpn) = (d.with_order(order), dp.with_order(order));
    let first = first_divergence(&dn, &dpn, order);
    let (delta, certificate) = match first {
        Some(k) => {
            let w = lemma41_check(d, dp, k + 1).expect("divergence at k is within order k + 1");
            (Some(w.delta.clone()), Some(w))
        }
        None => (None, None),
    };
    ObstructionReport {
        order,
        first_divergence: first,
        delta,
        c_params: dn.c_params(),
        c_params_prime: dpn.c_params(),
        verdict: if first.is_some() { Verdict::NonEquivalent } else { Verdict::Equivalent },
        certificate,
    }
}
