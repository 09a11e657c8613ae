//! Seeded property suites.
//!
//! Instance `i` of a run draws from its own generator seeded by `(seed, i)`,
//! so a report depends only on the configuration and never on scheduling.
//! Each failure carries the instance written in the input grammar.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::classify::{cor42_check, default_basis, lemma41_check};
use crate::error::{Error, Result};
use crate::format::rational_text;
use crate::lambda::LambdaFuncSeries;
use crate::random::InstanceGen;
use crate::reduction::{momentum_map, quantum_momentum, reduced_star, ReducedElement, ReductionContext};
use crate::ring::FuncExpr;
use crate::scalar::GaussianRational;
use crate::star::{poisson_bracket, star_invariant, wick_product, DSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    AssocWick,
    AssocInvariant,
    AssocReduced,
    Qmm,
    Lemma41,
    Cor42,
    Closure,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::AssocWick,
        Suite::AssocInvariant,
        Suite::AssocReduced,
        Suite::Qmm,
        Suite::Lemma41,
        Suite::Cor42,
        Suite::Closure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::AssocWick => "assoc-wick",
            Suite::AssocInvariant => "assoc-invariant",
            Suite::AssocReduced => "assoc-reduced",
            Suite::Qmm => "qmm",
            Suite::Lemma41 => "lemma41",
            Suite::Cor42 => "cor42",
            Suite::Closure => "closure",
        }
    }

    pub fn default_instances(self) -> usize {
        match self {
            Suite::AssocWick => 50,
            Suite::AssocInvariant | Suite::AssocReduced | Suite::Qmm => 20,
            Suite::Lemma41 | Suite::Cor42 => 10,
            Suite::Closure => 30,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub instances: usize,
    /// Fixed D for the suites that take one; `None` cycles `1, 1 + l, 1 + l^2`.
    pub d: Option<DSeries>,
    pub mu: BigRational,
}

impl SuiteConfig {
    pub fn new(suite: Suite, n: usize, order: usize, seed: u64) -> Self {
        SuiteConfig {
            n,
            order,
            seed,
            instances: suite.default_instances(),
            d: None,
            mu: BigRational::new((-1).into(), 2.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteFailure {
    pub instance: usize,
    pub detail: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub order: usize,
    pub seed: u64,
    pub instances: usize,
    pub passed: usize,
    pub failures: Vec<SuiteFailure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {}: n={} order={} seed={}\ninstances: {} passed: {} failed: {}\n",
            self.suite,
            self.n,
            self.order,
            self.seed,
            self.instances,
            self.passed,
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!("FAIL #{}: {}\n  witness: {}\n", f.instance, f.detail, f.witness));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "n": self.n,
            "order": self.order,
            "seed": self.seed,
            "instances": self.instances,
            "passed": self.passed,
            "failed": self.failures.len(),
            "failures": self.failures.iter().map(|f| json!({
                "instance": f.instance,
                "detail": f.detail,
                "witness": f.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

/// SplitMix64 step over `seed + i`, giving well-spread instance seeds.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `1`, `1 + l`, `1 + l^2`, cycled by instance.
pub fn standard_d(i: usize, order: usize) -> DSeries {
    let one = GaussianRational::from_integer(1);
    let zero = GaussianRational::from_integer(0);
    match i % 3 {
        0 => DSeries::trivial(order),
        1 => DSeries::new(vec![one], order),
        _ => DSeries::new(vec![zero, one], order),
    }
}

/// Outcome of one instance: `Ok(None)` passes, `Ok(Some(detail))` fails.
type Check = Result<Option<String>>;

struct Instance {
    witness: Vec<(String, String)>,
    check: Check,
}

fn witness_text(w: &[(String, String)]) -> String {
    w.iter().map(|(k, v)| format!("{k} = \"{v}\"")).collect::<Vec<_>>().join("; ")
}

fn expect(ok: bool, detail: &str) -> Check {
    Ok(if ok { None } else { Some(detail.to_string()) })
}

fn lift(f: &FuncExpr, order: usize) -> LambdaFuncSeries {
    LambdaFuncSeries::constant(f.clone(), order)
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    if cfg.order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let ctx = ReductionContext::new(cfg.n, cfg.mu.clone())?;
    let mut failures = Vec::new();
    for i in 0..cfg.instances {
        let mut g = InstanceGen::new(instance_seed(cfg.seed, i), cfg.n);
        let d = cfg.d.clone().unwrap_or_else(|| standard_d(i, cfg.order));
        let inst = run_instance(suite, cfg, &ctx, &d, i, &mut g);
        let detail = match inst.check {
            Ok(None) => continue,
            Ok(Some(detail)) => detail,
            Err(e) => format!("error: {e}"),
        };
        failures.push(SuiteFailure {
            instance: i,
            detail,
            witness: witness_text(&inst.witness),
        });
    }
    Ok(SuiteReport {
        suite,
        n: cfg.n,
        order: cfg.order,
        seed: cfg.seed,
        instances: cfg.instances,
        passed: cfg.instances - failures.len(),
        failures,
    })
}

fn run_instance(
    suite: Suite,
    cfg: &SuiteConfig,
    ctx: &ReductionContext,
    d: &DSeries,
    i: usize,
    g: &mut InstanceGen,
) -> Instance {
    let order = cfg.order;
    let mut witness = Vec::new();
    let mut note = |k: &str, v: String| witness.push((k.to_string(), v));
    let check = match suite {
        Suite::AssocWick => {
            let (f, gg, h) = (g.expr(), g.expr(), g.expr());
            note("F", f.to_string());
            note("G", gg.to_string());
            note("H", h.to_string());
            assoc_wick(&f, &gg, &h, order)
        }
        Suite::AssocInvariant => {
            let (f, gg, h) = (g.invariant(), g.invariant(), g.invariant());
            note("D", d.to_string());
            note("F", f.to_string());
            note("G", gg.to_string());
            note("H", h.to_string());
            assoc_invariant(&f, &gg, &h, d, order)
        }
        Suite::AssocReduced => {
            let (f, gg, h) = (g.homogeneous(), g.homogeneous(), g.homogeneous());
            note("D", d.to_string());
            note("mu", rational_text(&cfg.mu));
            note("phi", f.to_string());
            note("psi", gg.to_string());
            note("chi", h.to_string());
            assoc_reduced(&f, &gg, &h, d, ctx, order)
        }
        Suite::Qmm => {
            let f = g.non_invariant();
            let h = g.invariant();
            note("D", d.to_string());
            note("F", f.to_string());
            note("G", h.to_string());
            qmm(&f, &h, d, order)
        }
        Suite::Lemma41 | Suite::Cor42 => {
            // These run at the order their divergence needs, not cfg.order.
            let k = i % 3 + 1;
            let (da, db) = g.divergent_pair(k, k + 2);
            note("D", da.to_string());
            note("Dprime", db.to_string());
            note("order", (k + 2).to_string());
            if suite == Suite::Lemma41 {
                lemma41_instance(&da, &db, k)
            } else {
                note("mu", rational_text(&cfg.mu));
                cor42_check(&da, &db, ctx, k + 2, &default_basis(cfg.n))
                    .map(|w| (!w.holds).then(|| format!("identity fails on basis pairs {:?}", w.failures)))
            }
        }
        Suite::Closure => {
            let (f, gg) = (g.invariant(), g.invariant());
            note("F", f.to_string());
            note("G", gg.to_string());
            wick_product(&lift(&f, order), &lift(&gg, order), order)
                .and_then(|p| expect(p.is_u1_invariant(), "Wick product has a non-invariant coefficient"))
        }
    };
    Instance { witness, check }
}

fn assoc_wick(f: &FuncExpr, g: &FuncExpr, h: &FuncExpr, order: usize) -> Check {
    let (f, g, h) = (lift(f, order), lift(g, order), lift(h, order));
    let lhs = wick_product(&wick_product(&f, &g, order)?, &h, order)?;
    let rhs = wick_product(&f, &wick_product(&g, &h, order)?, order)?;
    expect(lhs.semantic_eq(&rhs), "(F*G)*H != F*(G*H)")
}

fn assoc_invariant(f: &FuncExpr, g: &FuncExpr, h: &FuncExpr, d: &DSeries, order: usize) -> Check {
    let (f, g, h) = (lift(f, order), lift(g, order), lift(h, order));
    let lhs = star_invariant(&star_invariant(&f, &g, d, order)?, &h, d, order)?;
    let rhs = star_invariant(&f, &star_invariant(&g, &h, d, order)?, d, order)?;
    expect(lhs.semantic_eq(&rhs), "(F*G)*H != F*(G*H)")
}

fn assoc_reduced(
    f: &FuncExpr,
    g: &FuncExpr,
    h: &FuncExpr,
    d: &DSeries,
    ctx: &ReductionContext,
    order: usize,
) -> Check {
    let el = |e: &FuncExpr| ReducedElement::from_func(e.clone(), order);
    let (f, g, h) = (el(f)?, el(g)?, el(h)?);
    let star = |a: &ReducedElement, b: &ReducedElement| reduced_star(a, b, d, ctx, order);
    let lhs = star(&star(&f, &g)?, &h)?;
    let rhs = star(&f, &star(&g, &h)?)?;
    if !lhs.semantic_eq(&rhs) {
        return Ok(Some("(phi*psi)*chi != phi*(psi*chi)".into()));
    }
    let one = el(&FuncExpr::one(ctx.n()))?;
    expect(
        star(&one, &f)?.semantic_eq(&f) && star(&f, &one)?.semantic_eq(&f),
        "1 is not a two-sided unit",
    )
}

/// `F*J - J*F = (i lambda / 2){F, J}` for the Wick product at every order, and
/// `{G, J} = 0` and `G *^D S_D J = S_D J *^D G` for invariant `G`.
fn qmm(f: &FuncExpr, g: &FuncExpr, d: &DSeries, order: usize) -> Check {
    let n = f.n();
    let j = momentum_map(n);
    let (fs, js) = (lift(f, order), lift(&j, order));
    let comm = &wick_product(&fs, &js, order)? - &wick_product(&js, &fs, order)?;
    let mut expected = LambdaFuncSeries::zero(n, order);
    *expected.coeff_mut(1) = poisson_bracket(f, &j)?.scale(&GaussianRational::complex(0, 1, 1, 2));
    if !comm.semantic_eq(&expected) {
        return Ok(Some("F*J - J*F != (i lambda/2){F,J}".into()));
    }
    if !poisson_bracket(g, &j)?.is_zero() {
        return Ok(Some("{G,J} != 0 for invariant G".into()));
    }
    let sj = quantum_momentum(n, d, order);
    let gs = lift(g, order);
    let comm = &star_invariant(&gs, &sj, d, order)? - &star_invariant(&sj, &gs, d, order)?;
    expect(comm.is_zero(), "invariant G does not commute with S_D J")
}

fn lemma41_instance(d: &DSeries, dp: &DSeries, k: usize) -> Check {
    let w = lemma41_check(d, dp, k + 2)?;
    if w.k != k {
        return Ok(Some(format!("first divergence at {} but {k} was prescribed", w.k)));
    }
    let delta = &d.c(k) - &dp.c(k);
    expect(w.holds && w.delta == delta, "row k+1 difference is not (c_k - c'_k) M_1")
}
