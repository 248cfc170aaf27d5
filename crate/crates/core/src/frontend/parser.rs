//! Polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' factor) | ('/' nat))*
//! factor := base ('^' nat)?
//! base   := nat | 'i' | 'x' | 'y' | 'z' | '(' expr ')' | '-' factor
//! ```

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{GaussianRational, Rational, SparsePoly, Var};
use crate::error::{Error, Result};

/// Exponents above this are rejected before expansion.
pub const MAX_EXPONENT: u32 = 4096;

pub type Span = Range<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    ImagUnit,
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by a nonzero integer literal.
    Div(Box<Expr>, BigInt),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn expand(&self) -> SparsePoly {
        match &self.kind {
            ExprKind::Int(n) => SparsePoly::constant(GaussianRational::from_rational(Rational::from_integer(n.clone()))),
            ExprKind::ImagUnit => SparsePoly::constant(GaussianRational::i()),
            ExprKind::Var(v) => SparsePoly::var(*v),
            ExprKind::Neg(e) => -&e.expand(),
            ExprKind::Add(a, b) => &a.expand() + &b.expand(),
            ExprKind::Sub(a, b) => &a.expand() - &b.expand(),
            ExprKind::Mul(a, b) => &a.expand() * &b.expand(),
            ExprKind::Div(a, d) => a.expand().scale_rat(&Rational::new(1.into(), d.clone())),
            ExprKind::Pow(a, e) => a.expand().pow(*e),
        }
    }

    /// The top-level product `Π base_k^e_k`, or `None` when the expression
    /// is not a product of at least two factors or a power.
    pub fn product_factors(&self) -> Option<Vec<(Expr, u32)>> {
        fn walk(e: &Expr, out: &mut Vec<(Expr, u32)>) {
            match &e.kind {
                ExprKind::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                ExprKind::Pow(a, k) => out.push(((**a).clone(), *k)),
                _ => out.push((e.clone(), 1)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        let nonconstant = out.iter().filter(|(e, _)| !e.expand().is_constant()).count();
        let powered = out.iter().any(|(e, k)| *k > 1 && !e.expand().is_constant());
        (nonconstant >= 2 || powered).then_some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(char),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Span)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut k = 0;
    while k < bytes.len() {
        let (pos, c) = bytes[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = pos;
            let mut end = k;
            while end < bytes.len() && bytes[end].1.is_ascii_digit() {
                end += 1;
            }
            let stop = bytes.get(end).map_or(src.len(), |b| b.0);
            out.push((Tok::Nat(src[start..stop].parse().unwrap()), start..stop));
            k = end;
            continue;
        }
        match c {
            'x' | 'y' | 'z' | 'i' => {
                // Reject identifiers like `xy`; implicit multiplication is not allowed.
                if let Some(&(p, n)) = bytes.get(k + 1) {
                    if n.is_alphanumeric() || n == '_' {
                        return Err(Error::Parse { offset: p, message: format!("unexpected '{n}' after '{c}'; use '*'") });
                    }
                }
                out.push((Tok::Ident(c), pos..pos + 1));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => out.push((Tok::Op(c), pos..pos + 1)),
            _ => return Err(Error::Parse { offset: pos, message: format!("unexpected character '{c}'") }),
        }
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |t| t.1.start)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn describe(&self) -> String {
        match self.toks.get(self.pos) {
            None => "end of input".into(),
            Some((_, s)) => format!("'{}'", &self.src[s.clone()]),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<(BigInt, Span)> {
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Nat(n), s)) => {
                self.pos += 1;
                Ok((n, s))
            }
            _ => self.err(format!("expected a non-negative integer, found {}", self.describe())),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let add = if self.eat('+') {
                true
            } else if self.eat('-') {
                false
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            let span = lhs.span.start..rhs.span.end;
            let kind = if add { ExprKind::Add(Box::new(lhs), Box::new(rhs)) } else { ExprKind::Sub(Box::new(lhs), Box::new(rhs)) };
            lhs = Expr { kind, span };
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                let rhs = self.factor()?;
                let span = lhs.span.start..rhs.span.end;
                lhs = Expr { kind: ExprKind::Mul(Box::new(lhs), Box::new(rhs)), span };
            } else if self.eat('/') {
                let at = self.offset();
                let (d, s) = self.nat()?;
                if d.is_zero() {
                    return Err(Error::Parse { offset: at, message: "division by zero".into() });
                }
                let span = lhs.span.start..s.end;
                lhs = Expr { kind: ExprKind::Div(Box::new(lhs), d), span };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let (e, s) = self.nat()?;
        let e = match e.to_u32() {
            Some(e) if e <= MAX_EXPONENT => e,
            _ => return Err(Error::Parse { offset: at, message: format!("exponent {e} exceeds {MAX_EXPONENT}") }),
        };
        let span = base.span.start..s.end;
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), span })
    }

    fn base(&mut self) -> Result<Expr> {
        let Some((tok, span)) = self.toks.get(self.pos).cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        let kind = match tok {
            Tok::Nat(n) => ExprKind::Int(n),
            Tok::Ident('i') => ExprKind::ImagUnit,
            Tok::Ident('x') => ExprKind::Var(Var::X),
            Tok::Ident('y') => ExprKind::Var(Var::Y),
            Tok::Ident(_) => ExprKind::Var(Var::Z),
            Tok::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err(format!("expected ')', found {}", self.describe()));
                }
                let end = self.toks[self.pos - 1].1.end;
                return Ok(Expr { kind: inner.kind, span: span.start..end });
            }
            Tok::Op('-') => {
                let inner = self.factor()?;
                let end = inner.span.end;
                return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span: span.start..end });
            }
            Tok::Op(_) => {
                self.pos -= 1;
                return self.err(format!("unexpected {}", self.describe()));
            }
        };
        Ok(Expr { kind, span })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, src: text };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err(format!("unexpected {}", p.describe()));
    }
    Ok(e)
}

pub fn parse_poly(text: &str) -> Result<SparsePoly> {
    Ok(parse_expr(text)?.expand())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(text: &str) -> usize {
        match parse_expr(text) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn expands_main_example() {
        let p = parse_poly("(y+x+i*x^2)^2 - x^5").unwrap();
        let q = parse_poly("y^2 + 2*x*y + 2*i*x^2*y + x^2 + 2*i*x^3 - x^4 - x^5").unwrap();
        assert_eq!(p, q);
        let (x, y) = (SparsePoly::x(), SparsePoly::y());
        assert_eq!(p.coeff(&[1, 1, 0]), GaussianRational::from_int(2));
        assert_eq!(p.coeff(&[2, 1, 0]), GaussianRational::from_ints(0, 2));
        assert_eq!(&p - &(&(&y + &x).pow(2) - &x.pow(5)), parse_poly("2*i*x^2*y + 2*i*x^3 - x^4").unwrap());
    }

    #[test]
    fn sum_of_powers() {
        let e = parse_expr("x^2 + y^2").unwrap();
        match e.kind {
            ExprKind::Add(a, b) => {
                assert!(matches!(a.kind, ExprKind::Pow(_, 2)));
                assert!(matches!(b.kind, ExprKind::Pow(_, 2)));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(offset("(y+x"), 4);
        assert_eq!(offset("x +* y"), 3);
        assert_eq!(offset("2x"), 1);
        assert_eq!(offset("x^99999999999"), 2);
        assert_eq!(offset("x^5000"), 2);
        assert_eq!(offset("x/0"), 2);
        assert_eq!(offset("x/y"), 2);
        assert_eq!(offset("x $ y"), 2);
        assert_eq!(offset("x)"), 1);
    }

    #[test]
    fn rationals_and_unary_minus() {
        let p = parse_poly("-3/2*x^2 + (1/2-3/4*i)*y - -z").unwrap();
        assert_eq!(p.coeff(&[2, 0, 0]), GaussianRational::from_rational(crate::arith::rat(-3, 2)));
        assert_eq!(p.coeff(&[0, 1, 0]), GaussianRational::new(crate::arith::rat(1, 2), crate::arith::rat(-3, 4)));
        assert_eq!(p.coeff(&[0, 0, 1]), GaussianRational::from_int(1));
        assert_eq!(parse_poly("-x^2").unwrap(), -&SparsePoly::x().pow(2));
    }

    #[test]
    fn display_round_trip() {
        for s in ["(y+x+i*x^2)^2 - x^5", "-3/2*x^2*y + (1/2-3/4*i)*y - i*z", "0", "-i", "(2+i)*x^3"] {
            let p = parse_poly(s).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p, "{s} -> {p}");
        }
    }

    #[test]
    fn product_detection() {
        let f = parse_expr("(y+x)^2*(y-2*x)").unwrap().product_factors().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].1, 2);
        assert!(parse_expr("3*(y+x)").unwrap().product_factors().is_none());
        assert!(parse_expr("(y+x)^2 - x^5").unwrap().product_factors().is_none());
    }
}
