//! Text form of polynomials: a small recursive-descent parser and the
//! canonical renderer it inverts.
//!
//! Grammar (juxtaposition is not multiplication):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= '-'? INT | '(' '-'? INT ')'
//! primary := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Chart, Monomial, Poly, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc += &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.at += 1;
            let rhs = self.unary()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.at += 1;
        }
        let negative = self.peek() == Some(&Tok::Minus);
        if negative {
            self.at += 1;
        }
        let n = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => {
                self.at -= 1;
                return self.err("expected an integer exponent");
            }
        };
        if paren {
            self.expect(Tok::RParen, "`)`")?;
        }
        let n: i64 = n
            .try_into()
            .map_err(|_| Error::Syntax {
                pos: self.pos(),
                msg: "exponent too large".into(),
            })?;
        Ok(if negative { -n } else { n })
    }

    fn power(&mut self) -> Result<Poly> {
        let start = self.pos();
        let (base, laurent_var) = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let e = self.exponent()?;
        if e >= 0 {
            return Ok(base.pow(e as u32));
        }
        match laurent_var {
            Some(i) => {
                let mut exps = vec![0i32; self.chart.len()];
                exps[i] = e as i32;
                Ok(Poly::monomial(
                    self.chart,
                    Monomial::from_exps(exps),
                    Rational::one(),
                ))
            }
            None => Err(Error::NegativeExponent(format!("at position {start}"))),
        }
    }

    /// Returns the parsed primary and, if it is a bare Laurent generator, its index.
    fn primary(&mut self) -> Result<(Poly, Option<usize>)> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let mut value = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => value /= Rational::from_integer(d),
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            return self.err("division by zero");
                        }
                        _ => {
                            self.at -= 1;
                            return self.err("expected an integer denominator");
                        }
                    }
                }
                Ok((Poly::constant(self.chart, value), None))
            }
            Some(Tok::Ident(name)) => {
                let i = self.chart.index_of(&name)?;
                let laurent = self.chart.is_laurent(i).then_some(i);
                Ok((Poly::var_at(self.chart, i), laurent))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((inner, None))
            }
            Some(_) => {
                self.at -= 1;
                Err(Error::Syntax {
                    pos,
                    msg: "expected a number, variable or `(`".into(),
                })
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into a polynomial on `chart`. Factors are multiplied in the
/// written order, so odd reorderings pick up their Koszul signs.
pub fn parse_expr(text: &str, chart: &Chart) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        chart,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected token (multiplication requires `*`)");
    }
    Ok(out)
}

fn render_monomial(m: &Monomial, chart: &Chart) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        let name = &chart.var(i).name;
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Canonical text: terms in monomial order, coefficient first.
pub fn render(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let word = render_monomial(m, p.chart());
        if word.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&word);
        } else {
            out.push_str(&abs.to_string());
            out.push('*');
            out.push_str(&word);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{ratio, VarKind, Variable};

    fn chart() -> Chart {
        Chart::with_kinds(
            vec![
                Variable::even("x1", 0),
                Variable::odd("xi1", -1),
                Variable::odd("xi2", -1),
                Variable::odd("eta1", 1),
                Variable::even("t", 0),
                Variable::even("u", 0),
            ],
            vec![
                VarKind::Coordinate,
                VarKind::Coordinate,
                VarKind::Coordinate,
                VarKind::Coordinate,
                VarKind::Coordinate,
                VarKind::ExpNeg("t".into()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        assert!(parse_expr("eta1*eta1", &chart()).unwrap().is_zero());
    }

    #[test]
    fn sign_normalization() {
        let c = chart();
        let xi12 = parse_expr("xi1*xi2", &c).unwrap();
        // xi2*xi1 = -xi1*xi2, so subtracting (-1)*xi2*xi1 cancels
        assert!(parse_expr("xi1*xi2 - (-1)*xi2*xi1", &c).unwrap().is_zero());
        assert_eq!(parse_expr("xi1*xi2 - xi2*xi1", &c).unwrap(), xi12.scale_int(2));
    }

    #[test]
    fn rationals_and_powers() {
        let c = chart();
        let p = parse_expr("-2/5*x1^3 + 1", &c).unwrap();
        assert_eq!(p.constant_term(), ratio(1, 1));
        assert_eq!(render(&p), "1 - 2/5*x1^3");
    }

    #[test]
    fn juxtaposition_is_rejected() {
        let err = parse_expr("x1 xi1", &chart()).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                pos: 3,
                msg: "unexpected token (multiplication requires `*`)".into()
            }
        );
    }

    #[test]
    fn unknown_identifier() {
        assert_eq!(
            parse_expr("y + 1", &chart()).unwrap_err(),
            Error::UnknownVariable("y".into())
        );
    }

    #[test]
    fn negative_exponents_only_on_laurent() {
        let c = chart();
        let p = parse_expr("u^-2*u^3", &c).unwrap();
        assert_eq!(p, parse_expr("u", &c).unwrap());
        assert_eq!(render(&parse_expr("u^(-2)", &c).unwrap()), "u^-2");
        assert!(matches!(
            parse_expr("x1^-1", &c).unwrap_err(),
            Error::NegativeExponent(_)
        ));
        assert!(matches!(
            parse_expr("(u)^-1", &c).unwrap_err(),
            Error::NegativeExponent(_)
        ));
    }

    #[test]
    fn syntax_error_positions() {
        let c = chart();
        assert!(matches!(parse_expr("x1 +", &c).unwrap_err(), Error::Syntax { pos: 4, .. }));
        assert!(matches!(parse_expr("(x1", &c).unwrap_err(), Error::Syntax { pos: 3, .. }));
        assert!(matches!(parse_expr("1/0", &c).unwrap_err(), Error::Syntax { .. }));
        assert!(matches!(parse_expr("x1 $", &c).unwrap_err(), Error::Syntax { pos: 3, .. }));
    }

    #[test]
    fn render_round_trip_simple() {
        let c = chart();
        for s in ["0", "x1", "-xi1*eta1 + 3/2*x1^2*xi2", "u^-1*t - 7"] {
            let p = parse_expr(s, &c).unwrap();
            assert_eq!(parse_expr(&render(&p), &c).unwrap(), p, "{s}");
        }
    }
}
