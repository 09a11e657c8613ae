//! Canonical text and JSON renderings.
//!
//! Text output is in the input grammar of [`crate::parse`], so every printed
//! expression reparses to an equal `FuncExpr`. Terms appear in the monomial
//! order `(alpha, beta, m)`; series are printed one lambda-order per line.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::lambda::LambdaFuncSeries;
use crate::ring::{FuncExpr, Monomial};
use crate::scalar::GaussianRational;
use crate::series::TruncUniSeries;
use crate::star::{DSeries, KTable};

fn push_power(out: &mut Vec<String>, name: &str, e: i64) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => out.push(format!("{name}^{e}")),
    }
}

impl fmt::Display for Monomial {
    /// `z0^2*zb1*x^-1`; the empty string for the unit monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, &e) in self.alpha.iter().enumerate() {
            push_power(&mut parts, &format!("z{k}"), e as i64);
        }
        for (k, &e) in self.beta.iter().enumerate() {
            push_power(&mut parts, &format!("zb{k}"), e as i64);
        }
        push_power(&mut parts, "x", self.m as i64);
        f.write_str(&parts.join("*"))
    }
}

fn render_term(mono: &Monomial, c: &GaussianRational) -> String {
    let m = mono.to_string();
    if m.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        m
    } else if (-c).is_one() {
        format!("-{m}")
    } else {
        format!("{c}*{m}")
    }
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms().enumerate() {
            let t = render_term(mono, c);
            match (i, t.strip_prefix('-')) {
                (0, _) => f.write_str(&t)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

/// `[f0; f1; ...]`, the bracketed series syntax accepted by the parser.
impl fmt::Display for LambdaFuncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.coeffs().iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Polynomial in `l`, with `l` standing for `lambda`: `1 + l - 1/2*l^3`.
pub fn uni_series_text(s: &TruncUniSeries) -> String {
    let mut out = String::new();
    for (k, c) in s.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "l".to_string(),
            _ => format!("l^{k}"),
        };
        let t = if mono.is_empty() {
            c.to_string()
        } else if c.is_one() {
            mono
        } else if (-c).is_one() {
            format!("-{mono}")
        } else {
            format!("{c}*{mono}")
        };
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(&format!(" - {rest}"));
        } else {
            out.push_str(&format!(" + {t}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for DSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&uni_series_text(self.d_series()))
    }
}

/// `K_k = a*M_1 + b*M_2 + ...` lines, one per row.
pub fn k_table_text(t: &KTable) -> String {
    let mut lines = Vec::new();
    for k in 0..=t.order() {
        let mut terms = Vec::new();
        for (r, a) in t.row(k).iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let op = format!("M_{r}");
            let term = if a.is_one() {
                op
            } else if (-a).is_one() {
                format!("-{op}")
            } else {
                format!("{a}*{op}")
            };
            terms.push(term);
        }
        let rhs = if terms.is_empty() {
            "0".to_string()
        } else {
            let mut s = terms[0].clone();
            for t in &terms[1..] {
                match t.strip_prefix('-') {
                    Some(rest) => s.push_str(&format!(" - {rest}")),
                    None => s.push_str(&format!(" + {t}")),
                }
            }
            s
        };
        lines.push(format!("K_{k} = {rhs}"));
    }
    lines.join("\n")
}

/// One `order k: <expr>` line per lambda-order.
pub fn series_text(s: &LambdaFuncSeries) -> String {
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| format!("order {k}: {c}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn coeff_json(c: &GaussianRational) -> Value {
    Value::String(c.to_record_string())
}

pub fn expr_json(e: &FuncExpr) -> Value {
    Value::Array(
        e.terms()
            .map(|(m, c)| {
                json!({
                    "alpha": m.alpha,
                    "beta": m.beta,
                    "m": m.m,
                    "coeff": coeff_json(c),
                })
            })
            .collect(),
    )
}

/// A list over lambda-orders of lists of monomial records.
pub fn series_json(s: &LambdaFuncSeries) -> Value {
    Value::Array(s.coeffs().iter().map(expr_json).collect())
}

pub fn k_table_json(t: &KTable) -> Value {
    Value::Array(
        t.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(coeff_json).collect()))
            .collect(),
    )
}

pub fn coeffs_json(cs: &[GaussianRational]) -> Value {
    Value::Array(cs.iter().map(coeff_json).collect())
}

/// Renders a rational the way the grammar writes it.
pub fn rational_text(q: &num_rational::BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", -q.numer(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> GaussianRational {
        GaussianRational::ratio(a, b)
    }

    #[test]
    fn expression_text() {
        let n = 1;
        let mut m = Monomial::one(n);
        m.alpha[0] = 1;
        m.beta[1] = 1;
        m.m = -1;
        let e = &FuncExpr::term(m, q(1, 2)) + &FuncExpr::x_pow(n, 2).scale(&GaussianRational::complex(0, 1, 2, 1));
        assert_eq!(e.to_string(), "2i*x^2 + 1/2*z0*zb1*x^-1");
        let e = &FuncExpr::one(n) - &FuncExpr::z(n, 1);
        assert_eq!(e.to_string(), "1 - z1");
        assert_eq!(FuncExpr::zero(n).to_string(), "0");
        let e = FuncExpr::zb(n, 0).scale(&GaussianRational::complex(1, 1, -1, 2));
        assert_eq!(e.to_string(), "(1-1/2i)*zb0");
    }

    #[test]
    fn dseries_and_table_text() {
        let d = DSeries::new(vec![q(1, 1), q(0, 1), q(-1, 2)], 3);
        assert_eq!(d.to_string(), "1 + l - 1/2*l^3");
        let t = crate::star::k_table(&DSeries::trivial(3), 3);
        assert_eq!(
            k_table_text(&t),
            "K_0 = M_0\nK_1 = M_1\nK_2 = -M_1 + 1/2*M_2\nK_3 = M_1 - 3/2*M_2 + 1/6*M_3"
        );
    }

    #[test]
    fn json_records() {
        let e = FuncExpr::z(1, 0).scale(&q(-3, 4));
        let v = expr_json(&e);
        assert_eq!(
            v.to_string(),
            r#"[{"alpha":[1,0],"beta":[0,0],"coeff":"-3/4+0/1i","m":0}]"#
        );
    }
}
