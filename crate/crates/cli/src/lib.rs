//! Argument handling and report rendering for the `cpn-star` binary.
//!
//! [`run_command`] takes the full argv and returns the exit code with the
//! text to print, so the whole surface can be driven from tests.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cpn_star::classify::{equivalence_verdict, Verdict};
use cpn_star::format::{coeff_json, coeffs_json, rational_text, series_json, series_text};
use cpn_star::parse::{parse_dseries, parse_expr, parse_series};
use cpn_star::reduction::{ideal_divide, reduce_at_mu, reduced_star, ReducedElement, ReductionContext};
use cpn_star::star::{star_invariant, wick_product};
use cpn_star::suites::{run_suite, Suite, SuiteConfig};
use cpn_star::{Error, LambdaFuncSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cpn-star", version, about = "Exact star products on C^{n+1} \\ {0} and CP^n")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Star product of two expressions or series, one line per lambda-order.
    Star(StarArgs),
    /// Reduction F_mu of an invariant series.
    Reduce(ReduceArgs),
    /// Divide an invariant series by the ideal generator, or refute membership.
    Divide(DivideArgs),
    /// Compare two reduced star products.
    Classify(ClassifyArgs),
    /// Run a seeded property suite.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Index of the last coordinate: functions live on C^{n+1}.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Truncation order N in lambda.
    #[arg(long, default_value_t = 2)]
    order: usize,
}

#[derive(Args, Debug)]
struct StarArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "D", default_value = "1", allow_hyphen_values = true)]
    d: String,
    #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
    mu: String,
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// Wick product on arbitrary expressions (D is ignored).
    #[arg(long, conflicts_with = "reduced")]
    wick: bool,
    /// Reduced product on homogeneous representatives.
    #[arg(long)]
    reduced: bool,
    /// Print terms as computed instead of in normal form.
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
    mu: String,
    #[arg(long = "F", allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct DivideArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "D", default_value = "1", allow_hyphen_values = true)]
    d: String,
    #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
    mu: String,
    #[arg(long = "F", allow_hyphen_values = true)]
    f: String,
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long = "D", allow_hyphen_values = true)]
    d: String,
    #[arg(long = "Dprime", allow_hyphen_values = true)]
    dprime: String,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Truncation order; lemma41 and cor42 pick k + 2 per instance instead.
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances; defaults to the suite's own count.
    #[arg(long)]
    instances: Option<usize>,
    /// Fixed D; by default instances cycle through 1, 1 + l, 1 + l^2.
    #[arg(long = "D", allow_hyphen_values = true)]
    d: Option<String>,
    #[arg(long, default_value = "-1/2", allow_hyphen_values = true)]
    mu: String,
}

struct Outcome {
    code: i32,
    text: String,
    result: Value,
}

fn ok(text: String, result: Value) -> Outcome {
    Outcome { code: EXIT_OK, text, result }
}

/// Runs one command line (including the program name) and returns the exit
/// code and everything that should go to stdout.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.to_string());
        }
    };
    let (name, config) = describe(&cli.command);
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => return (EXIT_USAGE, format!("error: {e}\n")),
    };
    let text = match cli.format {
        Format::Text => outcome.text,
        Format::Json => {
            let v = json!({ "command": name, "config": config, "result": outcome.result });
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
    };
    (outcome.code, text)
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    match cmd {
        Command::Star(a) => (
            "star",
            json!({
                "n": a.common.n, "order": a.common.order, "D": a.d, "mu": a.mu,
                "f": a.f, "g": a.g, "wick": a.wick, "reduced": a.reduced,
            }),
        ),
        Command::Reduce(a) => (
            "reduce",
            json!({ "n": a.common.n, "order": a.common.order, "mu": a.mu, "F": a.f }),
        ),
        Command::Divide(a) => (
            "divide",
            json!({ "n": a.common.n, "order": a.common.order, "D": a.d, "mu": a.mu, "F": a.f }),
        ),
        Command::Classify(a) => ("classify", json!({ "order": a.order, "D": a.d, "Dprime": a.dprime })),
        Command::Check(a) => (
            "check",
            json!({
                "suite": a.suite, "n": a.n, "order": a.order, "seed": a.seed,
                "instances": a.instances, "D": a.d, "mu": a.mu,
            }),
        ),
    }
}

fn check_order(order: usize) -> Result<(), Error> {
    if order < 1 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    Ok(())
}

/// A bracketed `[f0; f1; ...]` series, or a single expression at order 0.
fn series_arg(src: &str, n: usize, order: usize) -> Result<LambdaFuncSeries, Error> {
    if src.trim_start().starts_with('[') {
        parse_series(src, n, order)
    } else {
        Ok(LambdaFuncSeries::constant(parse_expr(src, n)?, order))
    }
}

fn render(s: &LambdaFuncSeries, raw: bool) -> LambdaFuncSeries {
    if raw {
        s.clone()
    } else {
        s.normal_form()
    }
}

fn series_outcome(s: &LambdaFuncSeries, raw: bool) -> Outcome {
    let s = render(s, raw);
    ok(series_text(&s) + "\n", series_json(&s))
}

fn execute(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Star(a) => {
            let (n, order) = (a.common.n, a.common.order);
            check_order(order)?;
            let f = series_arg(&a.f, n, order)?;
            let g = series_arg(&a.g, n, order)?;
            let out = if a.wick {
                wick_product(&f, &g, order)?
            } else if a.reduced {
                let ctx = ReductionContext::parse(n, &a.mu)?;
                let d = parse_dseries(&a.d, order)?;
                let p = ReducedElement::new(f)?;
                let q = ReducedElement::new(g)?;
                reduced_star(&p, &q, &d, &ctx, order)?.into_series()
            } else {
                let d = parse_dseries(&a.d, order)?;
                star_invariant(&f, &g, &d, order)?
            };
            Ok(series_outcome(&out, a.raw))
        }
        Command::Reduce(a) => {
            let (n, order) = (a.common.n, a.common.order);
            check_order(order)?;
            let ctx = ReductionContext::parse(n, &a.mu)?;
            let f = series_arg(&a.f, n, order)?;
            Ok(series_outcome(reduce_at_mu(&f, &ctx)?.series(), a.raw))
        }
        Command::Divide(a) => {
            let (n, order) = (a.common.n, a.common.order);
            check_order(order)?;
            let ctx = ReductionContext::parse(n, &a.mu)?;
            let d = parse_dseries(&a.d, order)?;
            let f = series_arg(&a.f, n, order)?;
            match ideal_divide(&f, &d, &ctx, order) {
                Ok(g) => {
                    let g = render(&g, a.raw);
                    Ok(ok(
                        format!("member: true\n{}\n", series_text(&g)),
                        json!({ "member": true, "quotient": series_json(&g) }),
                    ))
                }
                Err(Error::NotInIdeal { order, residue }) => Ok(ok(
                    format!("member: false\nfirst nonzero reduction at order {order}: {residue}\n"),
                    json!({ "member": false, "order": order, "residue": residue }),
                )),
                Err(e) => Err(e),
            }
        }
        Command::Classify(a) => {
            check_order(a.order)?;
            let d = parse_dseries(&a.d, a.order)?;
            let dp = parse_dseries(&a.dprime, a.order)?;
            let r = equivalence_verdict(&d, &dp, a.order);
            let mut text = format!("verdict: {}\n", r.verdict.as_str());
            let fmt_list = |cs: &[cpn_star::GaussianRational]| {
                cs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            };
            text.push_str(&format!("c: [{}]\n", fmt_list(&r.c_params)));
            text.push_str(&format!("c': [{}]\n", fmt_list(&r.c_params_prime)));
            let mut cert = Value::Null;
            if let (Some(k), Some(delta), Some(w)) = (r.first_divergence, &r.delta, &r.certificate) {
                text.push_str(&format!("k = {k}\ndelta = {delta}\n"));
                text.push_str(&format!(
                    "certificate: rows 0..{k} agree: {}; row {} difference [{}]; holds: {}\n",
                    w.rows_agree,
                    k + 1,
                    fmt_list(&w.row_difference),
                    w.holds
                ));
                cert = json!({
                    "rows_agree": w.rows_agree,
                    "row_difference": coeffs_json(&w.row_difference),
                    "holds": w.holds,
                });
            }
            let result = json!({
                "verdict": r.verdict.as_str(),
                "k": r.first_divergence,
                "delta": r.delta.as_ref().map(coeff_json),
                "c": coeffs_json(&r.c_params),
                "c_prime": coeffs_json(&r.c_params_prime),
                "certificate": cert,
            });
            let code = match (&r.certificate, r.verdict) {
                (Some(w), Verdict::NonEquivalent) if !w.holds => EXIT_CHECK_FAILED,
                _ => EXIT_OK,
            };
            Ok(Outcome { code, text, result })
        }
        Command::Check(a) => {
            let suite: Suite = a.suite.parse()?;
            check_order(a.order)?;
            let mut cfg = SuiteConfig::new(suite, a.n, a.order, a.seed);
            if let Some(k) = a.instances {
                cfg.instances = k;
            }
            if let Some(src) = &a.d {
                cfg.d = Some(parse_dseries(src, a.order)?);
            }
            cfg.mu = cpn_star::GaussianRational::parse_rational(&a.mu)?;
            let report = run_suite(suite, &cfg)?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let mut result = report.to_json();
            result["mu"] = Value::String(rational_text(&cfg.mu));
            Ok(Outcome { code, text: report.to_text(), result })
        }
    }
}
