//! Plain-text polynomial format.
//!
//! Terms are written largest first, as `coef*var^e*var`, with unit
//! coefficients and `^1` omitted: `p[000]*p[101] - p[001]*p[100]`,
//! `2*s6 + 2*s7`, `z*s0^2`. The parser accepts anything the renderer emits
//! plus arbitrary whitespace and term order.

use num_traits::Signed;

use super::{is_identifier, MarkedBinomial, Monomial, PathIndex, PolyError, Polynomial, TermOrder, Var};
use crate::Scalar;

pub fn render<C: Scalar + Signed>(p: &Polynomial<C>, ord: &TermOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.sorted_terms(ord).into_iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{a}*{m}"));
        }
    }
    out
}

pub fn parse_polynomial<C: Scalar>(s: &str) -> Result<Polynomial<C>, PolyError> {
    Ok(Polynomial::from_terms(Parser::new(s).terms::<C>()?))
}

pub fn parse_monomial(s: &str) -> Result<Monomial, PolyError> {
    let mut p = Parser::new(s);
    p.skip_ws();
    let m = p.monomial()?;
    p.expect_end()?;
    Ok(m)
}

/// Parses `lead - trail`, keeping the written order as the marking.
pub fn parse_binomial(s: &str) -> Result<MarkedBinomial, PolyError> {
    let terms = Parser::new(s).terms::<i64>()?;
    match terms.as_slice() {
        [(a, 1), (b, -1)] => MarkedBinomial::new(a.clone(), b.clone()),
        _ => Err(PolyError::NotBinomial(s.to_string())),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        let len = self.rest().find(|c: char| !f(c)).unwrap_or(self.rest().len());
        self.pos += len;
        &self.src[start..start + len]
    }

    fn expect_end(&mut self) -> Result<(), PolyError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    fn terms<C: Scalar>(&mut self) -> Result<Vec<(Monomial, C)>, PolyError> {
        let mut out = Vec::new();
        self.skip_ws();
        let mut negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        loop {
            self.skip_ws();
            let (c, m) = self.term::<C>()?;
            out.push((m, if negative { -c } else { c }));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return self.err("expected `+` or `-`"),
            }
            self.pos += 1;
        }
        // A lone `0` is the zero polynomial, not a zero-coefficient term.
        out.retain(|(_, c)| !c.is_zero());
        Ok(out)
    }

    fn term<C: Scalar>(&mut self) -> Result<(C, Monomial), PolyError> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = self.pos;
            self.take_while(|c| c.is_ascii_digit());
            if self.eat('/') {
                self.take_while(|c| c.is_ascii_digit());
            }
            let lit = &self.src[start..self.pos];
            let c = match C::from_str_radix(lit, 10) {
                Ok(c) => c,
                Err(_) => return self.err(format!("bad coefficient {lit:?}")),
            };
            self.skip_ws();
            if self.eat('*') {
                self.skip_ws();
                Ok((c, self.monomial()?))
            } else {
                Ok((c, Monomial::one()))
            }
        } else {
            Ok((C::one(), self.monomial()?))
        }
    }

    fn monomial(&mut self) -> Result<Monomial, PolyError> {
        let mut pairs = Vec::new();
        loop {
            let v = self.var()?;
            self.skip_ws();
            let mut e = 1;
            if self.eat('^') {
                self.skip_ws();
                let digits = self.take_while(|c| c.is_ascii_digit());
                e = match digits.parse::<u32>() {
                    Ok(e) => e,
                    Err(_) => return self.err("expected exponent"),
                };
                self.skip_ws();
            }
            pairs.push((v, e));
            let save = self.pos;
            if self.eat('*') {
                self.skip_ws();
                continue;
            }
            self.pos = save;
            break;
        }
        Ok(Monomial::from_pairs(pairs))
    }

    fn var(&mut self) -> Result<Var, PolyError> {
        let start = self.pos;
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if !is_identifier(name) {
            self.pos = start;
            return self.err("expected a variable");
        }
        if name == "p" && self.eat('[') {
            let body = self.take_while(|c| c != ']');
            if !self.eat(']') {
                return self.err("unterminated path variable");
            }
            return Ok(Var::Path(PathIndex::parse(body)?));
        }
        if name == "z" {
            return Ok(Var::Homogenizer);
        }
        Var::label(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn renders_in_descending_order() {
        let p: Polynomial<BigInt> = parse_polynomial("- p[100]*p[001] + p[101]*p[000]").unwrap();
        assert_eq!(render(&p, &TermOrder::PathLex), "p[000]*p[101] - p[001]*p[100]");
    }

    #[test]
    fn coefficients_and_powers_round_trip() {
        for s in ["0", "-3", "2*s6 + 2*s7", "z*s0^2 - 5*s1*s10", "-p[0,10]^3 + 1"] {
            let p: Polynomial<BigInt> = parse_polynomial(s).unwrap();
            let back: Polynomial<BigInt> = parse_polynomial(&render(&p, &TermOrder::PathLex)).unwrap();
            assert_eq!(p, back, "{s}");
        }
    }

    #[test]
    fn binomial_marking_follows_written_order() {
        let b = parse_binomial("p[100]*p[001] - p[000]*p[101]").unwrap();
        assert!(!b.is_marked_by(&TermOrder::PathLex));
        assert!(parse_binomial("p[0] + p[1]").is_err());
    }

    #[test]
    fn malformed_input_reports_position() {
        assert!(matches!(parse_polynomial::<BigInt>("s0 * * s1"), Err(PolyError::Parse { .. })));
        assert!(parse_polynomial::<BigInt>("p[01").is_err());
        assert!(parse_monomial("s0 s1").is_err());
    }
}
