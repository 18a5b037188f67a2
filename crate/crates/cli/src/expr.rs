//! A small expression language over exact q-series.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' INT)?
//! atom     := RATIONAL | 'q' '^' '(' RATIONAL ')' | NAME ('(' (RATIONAL (',' RATIONAL)*)? ')')? | '(' expr ')'
//! RATIONAL := INT ('/' POSINT)?
//! INT      := '-'? DIGITS
//! ```
//!
//! A bare `NAME` is a call with no arguments. Whitespace is ignored.

use std::fmt;

use theta_forge::qseries::{
    pentagonal_fifth_power, pochhammer_q, polygonal_gf, theta_sum, triple_product_q, PolygonalSpec, Side,
};
use theta_forge::{BigRational, PuiseuxSeries, QMonomial, QSeriesError, QuadraticForm, Rational64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    /// `fsum(k1, k2[, k3])`: `Σ_m q^{k1 m² + k2 m + k3}`.
    Fsum,
    /// `poch(c, e0, step)`: `Π_{k≥0} (1 - c q^{e0 + k·step})`.
    Poch,
    /// `triple(ca, ea, cb, eb)`: the triple product at `a = ca q^ea`, `b = cb q^eb`.
    Triple,
    /// `polygonal(r)`: `2 Σ_m q^{((r-2)m² + (4-r)m)/2}`.
    Polygonal,
    /// `fifth_pentagonal`: `(Σ_m q^{m(3m-1)/2})^5`.
    FifthPentagonal,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Fsum, Func::Poch, Func::Triple, Func::Polygonal, Func::FifthPentagonal];

    pub fn name(self) -> &'static str {
        match self {
            Func::Fsum => "fsum",
            Func::Poch => "poch",
            Func::Triple => "triple",
            Func::Polygonal => "polygonal",
            Func::FifthPentagonal => "fifth_pentagonal",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            Func::Fsum => n == 2 || n == 3,
            Func::Poch => n == 3,
            Func::Triple => n == 4,
            Func::Polygonal => n == 1,
            Func::FifthPentagonal => n == 0,
        }
    }

    fn arity(self) -> &'static str {
        match self {
            Func::Fsum => "2 or 3 arguments",
            Func::Poch => "3 arguments",
            Func::Triple => "4 arguments",
            Func::Polygonal => "1 argument",
            Func::FifthPentagonal => "no arguments",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rational(Rational64),
    QPower(Rational64),
    Call(Func, Vec<Rational64>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    /// Tokens that would have been accepted here.
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Name(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Name(s) => format!("name '{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse::<u64>().map_err(|_| ParseError {
                offset: start,
                expected: Vec::new(),
                message: "integer literal too large".into(),
            })?;
            out.push((start, Tok::Int(n)));
        } else if ch.is_ascii_alphabetic() || ch == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(text[start..i].to_string())));
        } else if b"+-*^()/,".contains(&ch) {
            out.push((i, Tok::Sym(ch as char)));
            i += 1;
        } else {
            let c = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError {
                offset: i,
                expected: Vec::new(),
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, want: &[&str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            expected: expected(want),
            message: format!("unexpected {}", self.peek().describe()),
        })
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let n = self.int()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(_) | Tok::Sym('-') => Ok(Expr::Rational(self.rational()?)),
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.eat(')')?;
                Ok(inner)
            }
            Tok::Name(name) if name == "q" => {
                self.bump();
                self.eat('^')?;
                self.eat('(')?;
                let e = self.rational()?;
                self.eat(')')?;
                Ok(Expr::QPower(e))
            }
            Tok::Name(name) => {
                let at = self.offset();
                let Some(func) = Func::from_name(&name) else {
                    let mut want = vec!["q".to_string()];
                    want.extend(Func::ALL.iter().map(|f| f.name().to_string()));
                    return Err(ParseError {
                        offset: at,
                        expected: want,
                        message: format!("unknown name '{name}'"),
                    });
                };
                self.bump();
                let args = if *self.peek() == Tok::Sym('(') {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::Sym(')') {
                        args.push(self.rational()?);
                        while *self.peek() == Tok::Sym(',') {
                            self.bump();
                            args.push(self.rational()?);
                        }
                    }
                    if *self.peek() != Tok::Sym(')') {
                        return self.fail(&["','", "')'"]);
                    }
                    self.bump();
                    args
                } else {
                    Vec::new()
                };
                if !func.arity_ok(args.len()) {
                    return Err(ParseError {
                        offset: at,
                        expected: Vec::new(),
                        message: format!("{} takes {}, got {}", func.name(), func.arity(), args.len()),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            _ => self.fail(&["rational", "'q'", "function name", "'('"]),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let at = self.offset();
        let Tok::Int(n) = *self.peek() else {
            return self.fail(&["integer"]);
        };
        self.bump();
        let v = i64::try_from(n).map_err(|_| ParseError {
            offset: at,
            expected: Vec::new(),
            message: "integer literal too large".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational64, ParseError> {
        let num = self.int()?;
        if *self.peek() != Tok::Sym('/') {
            return Ok(Rational64::from_integer(num));
        }
        self.bump();
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(0) => Err(ParseError {
                offset: at,
                expected: expected(&["positive integer"]),
                message: "zero denominator".into(),
            }),
            Tok::Int(d) => {
                self.bump();
                let d = i64::try_from(d).map_err(|_| ParseError {
                    offset: at,
                    expected: Vec::new(),
                    message: "integer literal too large".into(),
                })?;
                Ok(Rational64::new(num, d))
            }
            _ => self.fail(&["positive integer"]),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return p.fail(&["expression"]);
    }
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["'+'", "'-'", "'*'", "'^'", "end of input"]);
    }
    Ok(e)
}

fn fmt_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: minimal parentheses, `", "` between arguments, spaces
/// around binary operators.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) => write!(f, "{}", fmt_rational(*r)),
            Expr::QPower(e) => write!(f, "q^({})", fmt_rational(*e)),
            Expr::Call(func, args) => {
                let args: Vec<String> = args.iter().map(|a| fmt_rational(*a)).collect();
                write!(f, "{}({})", func.name(), args.join(", "))
            }
            Expr::Binary(op, lhs, rhs) => {
                let wrap_lhs = matches!(**lhs, Expr::Binary(o, ..) if o.precedence() < op.precedence());
                let wrap_rhs = matches!(**rhs, Expr::Binary(o, ..) if o.precedence() <= op.precedence());
                write_wrapped(f, lhs, wrap_lhs)?;
                write!(f, " {} ", op.symbol())?;
                write_wrapped(f, rhs, wrap_rhs)
            }
            Expr::Pow(base, n) => {
                let wrap = matches!(**base, Expr::Binary(..) | Expr::Pow(..));
                write_wrapped(f, base, wrap)?;
                write!(f, "^{n}")
            }
        }
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn big(r: Rational64) -> BigRational {
    BigRational::new((*r.numer()).into(), (*r.denom()).into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    Series(QSeriesError),
    /// `polygonal` needs an integer argument.
    NonIntegerPolygon(Rational64),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Series(e) => write!(f, "{e}"),
            EvalError::NonIntegerPolygon(r) => write!(f, "polygonal needs an integer r, got {r}"),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<QSeriesError> for EvalError {
    fn from(e: QSeriesError) -> Self {
        EvalError::Series(e)
    }
}

/// Exact expansion through `cutoff`. Products involving negative exponents
/// may return a lower cutoff, which the series carries.
pub fn eval_expr(e: &Expr, cutoff: Rational64) -> Result<PuiseuxSeries, EvalError> {
    Ok(match e {
        Expr::Rational(r) => PuiseuxSeries::monomial(big(*r), Rational64::from_integer(0), cutoff),
        Expr::QPower(x) => PuiseuxSeries::monomial(BigRational::from_integer(1.into()), *x, cutoff),
        Expr::Call(func, a) => match func {
            Func::Fsum => {
                let k3 = a.get(2).copied().unwrap_or_default();
                theta_sum(&QuadraticForm::new(a[0], a[1], k3)?, cutoff)?
            }
            Func::Poch => pochhammer_q(&big(a[0]), a[1], a[2], cutoff)?,
            Func::Triple => triple_product_q(&QMonomial::new(big(a[0]), a[1]), &QMonomial::new(big(a[2]), a[3]), cutoff)?,
            Func::Polygonal => {
                if !a[0].is_integer() {
                    return Err(EvalError::NonIntegerPolygon(a[0]));
                }
                polygonal_gf(PolygonalSpec::new(a[0].to_integer())?, Side::Lhs, cutoff)?
            }
            Func::FifthPentagonal => pentagonal_fifth_power(cutoff)?,
        },
        Expr::Binary(op, l, r) => {
            let (l, r) = (eval_expr(l, cutoff)?, eval_expr(r, cutoff)?);
            match op {
                BinOp::Add => l.add(&r)?,
                BinOp::Sub => l.sub(&r)?,
                BinOp::Mul => l.mul(&r)?.truncate(cutoff),
            }
        }
        Expr::Pow(base, n) => eval_expr(base, cutoff)?.pow(*n)?.truncate(cutoff),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn parses_the_reference_shapes() {
        assert_eq!(
            parse_expr("fsum(3/2,-1/2)^5").unwrap(),
            Expr::Pow(Box::new(Expr::Call(Func::Fsum, vec![r(3, 2), r(-1, 2)])), 5)
        );
        let e = parse_expr("poch(1,1/8,1/4) * (1 - q^(1/8))").unwrap();
        assert!(matches!(e, Expr::Binary(BinOp::Mul, ..)));
        assert_eq!(e.to_string(), "poch(1, 1/8, 1/4) * (1 - q^(1/8))");
        assert_eq!(parse_expr("fifth_pentagonal").unwrap(), Expr::Call(Func::FifthPentagonal, vec![]));
    }

    #[test]
    fn zero_denominator_points_at_the_zero() {
        let err = parse_expr("q^(1/0)").unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.message, "zero denominator");
    }

    #[test]
    fn errors_carry_offsets_and_expectations() {
        let err = parse_expr("1 + ").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"'('".to_string()));
        let err = parse_expr("foo(1)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.expected.contains(&"fsum".to_string()));
        assert!(parse_expr("").is_err());
        assert!(parse_expr("poch(1, 2)").is_err());
        assert!(parse_expr("1 $ 2").unwrap_err().offset == 2);
        assert!(parse_expr("(1 + 2").unwrap_err().expected.contains(&"')'".to_string()));
        assert_eq!(parse_expr("q^(x)").unwrap_err().offset, 3);
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse_expr(" fsum ( 1 , 0 ) ^ 2 ").unwrap(), parse_expr("fsum(1,0)^2").unwrap());
    }

    #[test]
    fn evaluates() {
        let s = |t: &str, c: i64| eval_expr(&parse_expr(t).unwrap(), r(c, 1)).unwrap().to_string();
        assert_eq!(s("fsum(1,0)", 9), "1 + 2*q^(1) + 2*q^(4) + 2*q^(9)");
        assert_eq!(s("polygonal(6)", 6), "2 + 2*q^(1) + 2*q^(3) + 2*q^(6)");
        assert_eq!(s("(1 + q^(1/2)) * (1 - q^(1/2))", 5), "1 - 1*q^(1)");
        assert_eq!(s("(1 - q^(1))^-1", 4), "1 + 1*q^(1) + 1*q^(2) + 1*q^(3) + 1*q^(4)");
        assert_eq!(s("fsum(1, 0) - triple(1, 1, 1, 1)", 12), "0");
        let fifth = eval_expr(&parse_expr("fifth_pentagonal").unwrap(), r(9, 1)).unwrap();
        let coeffs: Vec<String> = fifth.terms().map(|(_, c)| c.to_string()).collect();
        assert_eq!(coeffs, ["1", "5", "15", "30", "45", "56", "65", "85", "115", "150"]);
    }

    #[test]
    fn evaluation_errors() {
        let e = |t: &str| eval_expr(&parse_expr(t).unwrap(), r(5, 1)).unwrap_err();
        assert!(matches!(e("fsum(0, 1)"), EvalError::Series(QSeriesError::FormDivergent(_))));
        assert!(matches!(e("polygonal(5/2)"), EvalError::NonIntegerPolygon(_)));
        assert!(matches!(e("polygonal(2)"), EvalError::Series(QSeriesError::BadPolygon(2))));
        assert!(matches!(e("0^-1"), EvalError::Series(QSeriesError::NotInvertible)));
    }
}
