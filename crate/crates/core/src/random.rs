//! Seeded random instances for property suites.
//!
//! Monomials have holomorphic and antiholomorphic degree at most 3 and
//! x-exponents in `[-2, 2]`; coefficients come from a small fixed set of
//! Gaussian rationals. The same seed always yields the same sequence.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{FuncExpr, Monomial};
use crate::scalar::GaussianRational;
use crate::star::DSeries;

pub const MAX_DEGREE: u32 = 3;
pub const X_EXPONENT_RANGE: (i32, i32) = (-2, 2);

pub struct InstanceGen {
    rng: ChaCha8Rng,
    n: usize,
}

impl InstanceGen {
    pub fn new(seed: u64, n: usize) -> Self {
        InstanceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn small_int(&mut self, lo: i32, hi: i32) -> i32 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coeff(&mut self) -> GaussianRational {
        const SET: [(i64, i64, i64, i64); 10] = [
            (1, 1, 0, 1),
            (-1, 1, 0, 1),
            (2, 1, 0, 1),
            (1, 2, 0, 1),
            (-1, 3, 0, 1),
            (3, 1, 0, 1),
            (0, 1, 1, 1),
            (0, 1, -1, 1),
            (1, 1, 1, 1),
            (1, 2, -1, 1),
        ];
        let (a, b, c, d) = *SET.choose(&mut self.rng).unwrap();
        GaussianRational::complex(a, b, c, d)
    }

    fn multi_index(&mut self, degree: u32) -> Vec<u32> {
        let mut e = vec![0; self.n + 1];
        for _ in 0..degree {
            let k = self.rng.gen_range(0..=self.n);
            e[k] += 1;
        }
        e
    }

    fn x_exponent(&mut self) -> i32 {
        self.rng.gen_range(X_EXPONENT_RANGE.0..=X_EXPONENT_RANGE.1)
    }

    fn nonzero_sum(&mut self, terms: usize, mut mono: impl FnMut(&mut Self) -> Monomial) -> FuncExpr {
        loop {
            let mut e = FuncExpr::zero(self.n);
            for _ in 0..terms {
                let m = mono(self);
                let c = self.coeff();
                e.add_term(m, c);
            }
            if !e.is_empty() {
                return e;
            }
        }
    }

    /// A general expression with one to three terms.
    pub fn expr(&mut self) -> FuncExpr {
        let terms = self.rng.gen_range(1..=3);
        self.nonzero_sum(terms, |g| {
            let a = g.rng.gen_range(0..=MAX_DEGREE);
            let b = g.rng.gen_range(0..=MAX_DEGREE);
            let alpha = g.multi_index(a);
            let beta = g.multi_index(b);
            let m = g.x_exponent();
            Monomial::new(alpha, beta, m)
        })
    }

    /// A general expression with at least one term of nonzero U(1) weight.
    pub fn non_invariant(&mut self) -> FuncExpr {
        loop {
            let e = self.expr();
            if !e.is_u1_invariant() {
                return e;
            }
        }
    }

    /// A homogeneous expression: terms `z^a zb^b x^{-d}` with `|a| = |b| = d <= 2`.
    pub fn homogeneous(&mut self) -> FuncExpr {
        let terms = self.rng.gen_range(1..=2);
        self.nonzero_sum(terms, |g| {
            let d = g.rng.gen_range(0..=2u32);
            let alpha = g.multi_index(d);
            let beta = g.multi_index(d);
            Monomial::new(alpha, beta, -(d as i32))
        })
    }

    /// A U(1)-invariant expression, a short sum of homogeneous times radial terms.
    pub fn invariant(&mut self) -> FuncExpr {
        let terms = self.rng.gen_range(1..=2);
        self.nonzero_sum(terms, |g| {
            let d = g.rng.gen_range(0..=2u32);
            let alpha = g.multi_index(d);
            let beta = g.multi_index(d);
            let p = g.x_exponent();
            Monomial::new(alpha, beta, p - d as i32)
        })
    }

    pub fn radial(&mut self) -> FuncExpr {
        let terms = self.rng.gen_range(1..=2);
        self.nonzero_sum(terms, |g| {
            let mut m = Monomial::one(g.n);
            m.m = g.x_exponent();
            m
        })
    }

    /// A point of `C^{n+1} \ {0}` with small Gaussian-rational coordinates.
    pub fn point(&mut self) -> Vec<GaussianRational> {
        loop {
            let p: Vec<GaussianRational> = (0..=self.n)
                .map(|_| {
                    let a = self.rng.gen_range(-3i64..=3);
                    let b = self.rng.gen_range(1i64..=3);
                    let c = self.rng.gen_range(-3i64..=3);
                    GaussianRational::complex(a, b, c, 2)
                })
                .collect();
            if p.iter().any(|v| !v.is_zero()) {
                return p;
            }
        }
    }

    /// A D-series `1 + d_1 l + ... + d_order l^order`.
    pub fn dseries(&mut self, order: usize) -> DSeries {
        let d: Vec<GaussianRational> = (0..order).map(|_| self.maybe_zero_coeff()).collect();
        DSeries::new(d, order)
    }

    fn maybe_zero_coeff(&mut self) -> GaussianRational {
        if self.rng.gen_bool(0.25) {
            GaussianRational::zero()
        } else {
            self.coeff()
        }
    }

    /// A pair whose inverse series first differ at `c_k`: equal
    /// `d_1..d_{k-1}` and distinct `d_k` force exactly that.
    pub fn divergent_pair(&mut self, k: usize, order: usize) -> (DSeries, DSeries) {
        assert!(k >= 1 && k <= order);
        let d: Vec<GaussianRational> = (0..order).map(|_| self.maybe_zero_coeff()).collect();
        let mut dp = d.clone();
        loop {
            let c = self.maybe_zero_coeff();
            if c != d[k - 1] {
                dp[k - 1] = c;
                break;
            }
        }
        for slot in dp.iter_mut().skip(k) {
            *slot = self.maybe_zero_coeff();
        }
        (DSeries::new(d, order), DSeries::new(dp, order))
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn gen_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}
