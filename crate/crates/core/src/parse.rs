//! Parser for the expression language.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '(' expr ')' | number | 'i' | variable
//! number  := digits ('/' digits)? 'i'?
//! variable:= 'z' digits ('^' digits)? | 'zb' digits ('^' digits)? | 'x' ('^' '-'? digits)?
//! ```
//!
//! `1/2i` reads as `(1/2) i`. Function series are written `[f0; f1; ...]`
//! with one expression per lambda-order; D-series use the single variable
//! `l` in place of the coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lambda::LambdaFuncSeries;
use crate::ring::{FuncExpr, Monomial};
use crate::scalar::GaussianRational;
use crate::series::TruncUniSeries;
use crate::star::DSeries;

#[derive(Clone, Copy)]
enum Vars {
    /// Coordinates `z<k>`, `zb<k>`, `x` on `C^{n+1}`.
    Coordinates { n: usize },
    /// The single formal variable `l`, carried as `z0` with `n = 0`.
    Lambda,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: Vars) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            vars,
        }
    }

    fn dim(&self) -> usize {
        match self.vars {
            Vars::Coordinates { n } => n,
            Vars::Lambda => 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos, msg))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("ascii digits"))
    }

    fn small_uint(&mut self) -> Result<u32> {
        let at = self.pos;
        let v = self.digits()?;
        u32::try_from(v).map_err(|_| Error::parse(at, "exponent too large"))
    }

    fn parse_all(&mut self) -> Result<FuncExpr> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return self.err(format!("unexpected character '{}'", self.src[self.pos] as char));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<FuncExpr> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FuncExpr> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn constant(&self, c: GaussianRational) -> FuncExpr {
        FuncExpr::constant(self.dim(), c)
    }

    fn factor(&mut self) -> Result<FuncExpr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let mut q = BigRational::from_integer(num);
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let at = self.pos;
                    let den = self.digits()?;
                    if den.is_zero() {
                        return Err(Error::parse(at, "zero denominator"));
                    }
                    q /= BigRational::from_integer(den);
                }
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    return Ok(self.constant(GaussianRational::new(BigRational::zero(), q)));
                }
                Ok(self.constant(GaussianRational::from_real(q)))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(self.constant(GaussianRational::i()))
            }
            Some(_) => self.variable(),
        }
    }

    fn variable(&mut self) -> Result<FuncExpr> {
        let start = self.pos;
        match self.vars {
            Vars::Lambda => {
                if self.src[self.pos] != b'l' {
                    return self.err("expected 'l' or a coefficient");
                }
                self.pos += 1;
                let e = self.exponent(false)?;
                let mono = Monomial::new(vec![e as u32], vec![0], 0);
                Ok(FuncExpr::term(mono, GaussianRational::one()))
            }
            Vars::Coordinates { n } => {
                let c = self.src[self.pos];
                let mut mono = Monomial::one(n);
                match c {
                    b'x' => {
                        self.pos += 1;
                        mono.m = self.exponent(true)?;
                    }
                    b'z' => {
                        self.pos += 1;
                        let bar = self.src.get(self.pos) == Some(&b'b');
                        if bar {
                            self.pos += 1;
                        }
                        if !self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                            return self.err("expected coordinate index");
                        }
                        let at = self.pos;
                        let k = self.digits()?;
                        let k = usize::try_from(k).map_err(|_| Error::parse(at, "index too large"))?;
                        if k > n {
                            return Err(Error::IndexOutOfRange { index: k, n });
                        }
                        let e = self.exponent(false)? as u32;
                        if bar {
                            mono.beta[k] = e;
                        } else {
                            mono.alpha[k] = e;
                        }
                    }
                    _ => {
                        self.pos = start;
                        return self.err(format!("unexpected character '{}'", c as char));
                    }
                }
                Ok(FuncExpr::term(mono, GaussianRational::one()))
            }
        }
    }

    /// Optional `^e`; a negative exponent only when `allow_negative`.
    fn exponent(&mut self, allow_negative: bool) -> Result<i32> {
        if self.src.get(self.pos) != Some(&b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = self.src.get(self.pos) == Some(&b'-');
        if neg {
            if !allow_negative {
                return self.err("negative exponents are only allowed on x");
            }
            self.pos += 1;
        }
        let at = self.pos;
        let e = self.small_uint()?;
        let e = i32::try_from(e).map_err(|_| Error::parse(at, "exponent too large"))?;
        Ok(if neg { -e } else { e })
    }
}

/// Parses an expression over `C^{n+1}`.
pub fn parse_expr(src: &str, n: usize) -> Result<FuncExpr> {
    Parser::new(src, Vars::Coordinates { n }).parse_all()
}

/// Parses `[f0; f1; ...]` (or a bare expression, taken as order 0) into a
/// series of the given order. More entries than `order + 1` are an error.
pub fn parse_series(src: &str, n: usize, order: usize) -> Result<LambdaFuncSeries> {
    let t = src.trim();
    let parts: Vec<(usize, &str)> = match t.strip_prefix('[') {
        Some(rest) => {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::parse(src.len(), "expected ']'"))?;
            let offset = src.find('[').unwrap() + 1;
            let mut out = Vec::new();
            let mut at = offset;
            for piece in inner.split(';') {
                out.push((at, piece));
                at += piece.len() + 1;
            }
            out
        }
        None => vec![(0, t)],
    };
    if parts.len() > order + 1 {
        return Err(Error::parse(0, format!(
            "series has {} lambda-orders but the truncation order is {order}",
            parts.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(parts.len());
    for (at, piece) in parts {
        let e = parse_expr(piece, n).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + at, msg },
            other => other,
        })?;
        coeffs.push(e);
    }
    LambdaFuncSeries::from_coeffs(n, coeffs, order)
}

/// Parses a polynomial in `l` into a truncated series of the given order.
pub fn parse_uni_series(src: &str, order: usize) -> Result<TruncUniSeries> {
    let e = Parser::new(src, Vars::Lambda).parse_all()?;
    let degree = e.terms().map(|(m, _)| m.alpha[0] as usize).max().unwrap_or(0);
    let mut coeffs = vec![GaussianRational::zero(); degree.max(order) + 1];
    for (m, c) in e.terms() {
        coeffs[m.alpha[0] as usize] = c.clone();
    }
    Ok(TruncUniSeries::from_coeffs(coeffs, degree.max(order)))
}

/// Parses `D(l)`, which must start with constant term 1. Orders above the
/// stated degree are zero; a higher-degree input keeps all its terms.
pub fn parse_dseries(src: &str, order: usize) -> Result<DSeries> {
    DSeries::from_series(parse_uni_series(src, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::InstanceGen;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> GaussianRational {
        GaussianRational::ratio(a, b)
    }

    #[test]
    fn parse_examples() {
        let e = parse_expr("z0*zb0*x^-1", 1).unwrap();
        let mut m = Monomial::one(1);
        m.alpha[0] = 1;
        m.beta[0] = 1;
        m.m = -1;
        assert_eq!(e, FuncExpr::term(m, q(1, 1)));

        let e = parse_expr("1/2*z0*zb1 + (0+1i)*x^2", 1).unwrap();
        assert_eq!(e.len(), 2);
        let coeffs: Vec<_> = e.terms().map(|(_, c)| c.clone()).collect();
        assert!(coeffs.contains(&q(1, 2)));
        assert!(coeffs.contains(&GaussianRational::i()));

        assert!(matches!(parse_expr("z3", 1), Err(Error::IndexOutOfRange { index: 3, n: 1 })));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse_expr("z0 * ", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("z0^-1", 1), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_expr("1/0", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("z0 ) ", 1), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_expr("y", 1), Err(Error::Parse { pos: 0, .. })));
        assert!(parse_expr("(z0", 1).is_err());
    }

    #[test]
    fn imaginary_literals() {
        assert_eq!(parse_expr("1/2i", 0).unwrap(), FuncExpr::constant(0, GaussianRational::complex(0, 1, 1, 2)));
        assert_eq!(parse_expr("i*i", 0).unwrap(), FuncExpr::constant(0, q(-1, 1)));
        assert_eq!(
            parse_expr("(1-1/2i)*zb0", 1).unwrap(),
            FuncExpr::zb(1, 0).scale(&GaussianRational::complex(1, 1, -1, 2))
        );
    }

    #[test]
    fn series_syntax() {
        let s = parse_series("[x; z0*zb0; 0]", 1, 3).unwrap();
        assert_eq!(s.order(), 3);
        assert_eq!(s.coeff(0), &FuncExpr::x_pow(1, 1));
        assert!(s.coeff(2).is_empty() && s.coeff(3).is_empty());
        assert_eq!(parse_series("x", 1, 2).unwrap().coeff(0), &FuncExpr::x_pow(1, 1));
        assert!(parse_series("[1; 2; 3]", 1, 1).is_err());
        assert!(matches!(parse_series("[1; z0^-1]", 1, 2), Err(Error::Parse { pos: 7, .. })));
    }

    #[test]
    fn dseries_examples() {
        let d = parse_dseries("1", 3).unwrap();
        assert_eq!(d, DSeries::trivial(3));
        let d = parse_dseries("1 + l", 3).unwrap();
        assert_eq!(d.c_params(), vec![q(-1, 1), q(1, 1), q(-1, 1)]);
        assert!(matches!(parse_dseries("2 + l", 3), Err(Error::NonUnitConstant { .. })));
        let d = parse_dseries("1 + l + 1/2*l^3", 2).unwrap();
        assert_eq!(d.d(3), q(1, 2));
        assert!(parse_dseries("1 + z0", 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn format_parse_round_trip(seed in any::<u64>(), n in 1usize..=2) {
            let mut g = InstanceGen::new(seed, n);
            let e = g.expr();
            let text = e.to_string();
            let back = parse_expr(&text, n).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), text);
            let nf = e.normal_form();
            prop_assert_eq!(parse_expr(&nf.to_string(), n).unwrap(), nf);
        }

        #[test]
        fn dseries_round_trip(seed in any::<u64>()) {
            let mut g = InstanceGen::new(seed, 1);
            let d = g.dseries(4);
            prop_assert_eq!(parse_dseries(&d.to_string(), 4).unwrap(), d);
        }
    }
}
