//! State expressions over the alpha basis.
//!
//! ```text
//! sum     := ['-'] product (('+' | '-') product)*
//! product := factor ('*' factor)*
//! factor  := RATIONAL | one | omega | J | E | F | Em(INT) | Fm(INT)
//!          | a(INT) | e(RATIONAL) | star(sum, sum) | circ(sum, sum) | '(' sum ')'
//! ```
//!
//! In a product, rational factors are scalars, `a(n)` factors are the
//! operators `alpha(n)` applied right to left, and at most one factor is a
//! state; a product without a state acts on `one`.

use std::fmt;

use thiserror::Error;
use vlplus_core::error::Error as CoreError;
use vlplus_core::exact::{fmt_rat, int, parse_rat, Rational};
use vlplus_core::lattice::{build_generators, em, fm, vertex_mode, LatticeLabel, LatticeState};
use vlplus_core::zhu::ZhuContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    One,
    Omega,
    J,
    E,
    F,
}

impl Named {
    fn as_str(self) -> &'static str {
        match self {
            Named::One => "one",
            Named::Omega => "omega",
            Named::J => "J",
            Named::E => "E",
            Named::F => "F",
        }
    }
}

/// Canonical forms: `Rat` is nonnegative, a `Product` has at least two
/// factors, a `Sum` has at least two terms or a single negated one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateExpr {
    Rat(Rational),
    Named(Named),
    Em(i64),
    Fm(i64),
    /// `alpha(n)`.
    Alpha(i64),
    /// `e^{r alpha}`.
    Exp(Rational),
    Star(Box<StateExpr>, Box<StateExpr>),
    Circ(Box<StateExpr>, Box<StateExpr>),
    Product(Vec<StateExpr>),
    /// Terms with a negation flag.
    Sum(Vec<(bool, StateExpr)>),
}

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(
        "beta-basis input is not supported: beta = alpha / sqrt(2k) introduces irrational \
         scalars; rewrite in the alpha basis using beta(n) = a(n) / sqrt(2k) and \
         e^(s beta) = e(s / sqrt(2k))"
    )]
    BetaBasis,
    #[error("a product may contain at most one state; use star(u, v) for the Zhu product")]
    TwoStates,
    #[error("a(n) factors must stand to the left of the state they act on")]
    OperatorOrder,
    #[error("{0}")]
    Core(#[from] CoreError),
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateExpr::Rat(q) => f.write_str(&fmt_rat(q)),
            StateExpr::Named(n) => f.write_str(n.as_str()),
            StateExpr::Em(m) => write!(f, "Em({m})"),
            StateExpr::Fm(m) => write!(f, "Fm({m})"),
            StateExpr::Alpha(n) => write!(f, "a({n})"),
            StateExpr::Exp(r) => write!(f, "e({})", fmt_rat(r)),
            StateExpr::Star(u, v) => write!(f, "star({u}, {v})"),
            StateExpr::Circ(u, v) => write!(f, "circ({u}, {v})"),
            StateExpr::Product(fs) => {
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str("*")?;
                    }
                    match x {
                        StateExpr::Product(_) | StateExpr::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            StateExpr::Sum(ts) => {
                for (i, (neg, x)) in ts.iter().enumerate() {
                    match (i, neg) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    match x {
                        StateExpr::Sum(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find(|c| !f(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn signed_rational(&mut self) -> Result<Rational, ExprError> {
        let neg = self.eat('-');
        let text = self.take_while(|c| c.is_ascii_digit() || c == '/');
        match parse_rat(text) {
            Some(q) if neg => Ok(-q),
            Some(q) => Ok(q),
            None => self.err("expected a rational number"),
        }
    }

    fn signed_int(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        let text = self.take_while(|c| c.is_ascii_digit());
        match text.parse::<i64>() {
            Ok(n) if neg => Ok(-n),
            Ok(n) => Ok(n),
            Err(_) => self.err("expected an integer"),
        }
    }

    fn sum(&mut self) -> Result<StateExpr, ExprError> {
        let mut terms = vec![(self.eat('-'), self.product()?)];
        loop {
            if self.eat('+') {
                terms.push((false, self.product()?));
            } else if self.eat('-') {
                terms.push((true, self.product()?));
            } else {
                break;
            }
        }
        Ok(match terms.len() {
            1 if !terms[0].0 => terms.pop().expect("one term").1,
            _ => StateExpr::Sum(terms),
        })
    }

    fn product(&mut self) -> Result<StateExpr, ExprError> {
        let mut fs = vec![self.factor()?];
        while self.eat('*') {
            fs.push(self.factor()?);
        }
        Ok(if fs.len() == 1 {
            fs.pop().expect("one factor")
        } else {
            StateExpr::Product(fs)
        })
    }

    fn pair(&mut self) -> Result<(Box<StateExpr>, Box<StateExpr>), ExprError> {
        self.expect('(')?;
        let u = self.sum()?;
        self.expect(',')?;
        let v = self.sum()?;
        self.expect(')')?;
        Ok((Box::new(u), Box::new(v)))
    }

    fn factor(&mut self) -> Result<StateExpr, ExprError> {
        match self.peek() {
            None => return self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                return Ok(inner);
            }
            Some(c) if c.is_ascii_digit() => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == '/');
                return match parse_rat(text) {
                    Some(q) => Ok(StateExpr::Rat(q)),
                    None => self.err(format!("bad rational '{text}'")),
                };
            }
            _ => {}
        }
        let start = self.pos;
        let ident = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        let call = |p: &mut Self| -> Result<i64, ExprError> {
            p.expect('(')?;
            let n = p.signed_int()?;
            p.expect(')')?;
            Ok(n)
        };
        Ok(match ident {
            "one" => StateExpr::Named(Named::One),
            "omega" => StateExpr::Named(Named::Omega),
            "J" => StateExpr::Named(Named::J),
            "E" => StateExpr::Named(Named::E),
            "F" => StateExpr::Named(Named::F),
            "Em" => StateExpr::Em(call(self)?),
            "Fm" => StateExpr::Fm(call(self)?),
            "a" => StateExpr::Alpha(call(self)?),
            "e" => {
                self.expect('(')?;
                let r = self.signed_rational()?;
                self.expect(')')?;
                StateExpr::Exp(r)
            }
            "star" => {
                let (u, v) = self.pair()?;
                StateExpr::Star(u, v)
            }
            "circ" => {
                let (u, v) = self.pair()?;
                StateExpr::Circ(u, v)
            }
            "b" | "beta" => return Err(ExprError::BetaBasis),
            "" => return self.err("expected a factor"),
            other => {
                self.pos = start;
                return self.err(format!("unknown name '{other}'"));
            }
        })
    }
}

pub fn parse(src: &str) -> Result<StateExpr, ExprError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn alpha_on(n: i64, w: &LatticeState) -> Result<LatticeState, ExprError> {
    let a = LatticeState::term(&[1], 0, int(1), w.k());
    Ok(vertex_mode(&a, n, w)?)
}

fn eval_product(fs: &[StateExpr], k: u32, ctx: &mut ZhuContext) -> Result<LatticeState, ExprError> {
    let mut scalar = int(1);
    let mut state: Option<LatticeState> = None;
    let mut pending: Vec<i64> = Vec::new();
    for f in fs.iter().rev() {
        match f {
            StateExpr::Rat(q) => scalar *= q,
            StateExpr::Alpha(n) => pending.push(*n),
            other => {
                if state.is_some() {
                    return Err(ExprError::TwoStates);
                }
                if !pending.is_empty() {
                    return Err(ExprError::OperatorOrder);
                }
                state = Some(eval_in(other, k, ctx)?);
            }
        }
    }
    let mut v = state.unwrap_or_else(|| LatticeState::vacuum(k));
    for n in pending {
        v = alpha_on(n, &v)?;
    }
    Ok(v.scale(&scalar))
}

fn eval_in(e: &StateExpr, k: u32, ctx: &mut ZhuContext) -> Result<LatticeState, ExprError> {
    let g = || build_generators(k);
    Ok(match e {
        StateExpr::Rat(q) => LatticeState::vacuum(k).scale(q),
        StateExpr::Named(Named::One) => LatticeState::vacuum(k),
        StateExpr::Named(Named::Omega) => g().omega,
        StateExpr::Named(Named::J) => g().j,
        StateExpr::Named(Named::E) => g().e,
        StateExpr::Named(Named::F) => g().f,
        StateExpr::Em(m) => em(*m, k),
        StateExpr::Fm(m) => fm(*m, k),
        StateExpr::Alpha(n) => alpha_on(*n, &LatticeState::vacuum(k))?,
        StateExpr::Exp(r) => LatticeState::exp(LatticeLabel::from_r(r, k)?.num, k),
        StateExpr::Star(u, v) => {
            let (u, v) = (eval_in(u, k, ctx)?, eval_in(v, k, ctx)?);
            ctx.star(&u, &v)?
        }
        StateExpr::Circ(u, v) => {
            let (u, v) = (eval_in(u, k, ctx)?, eval_in(v, k, ctx)?);
            ctx.circ(&u, &v)?
        }
        StateExpr::Product(fs) => eval_product(fs, k, ctx)?,
        StateExpr::Sum(ts) => {
            let mut acc = LatticeState::zero(k);
            for (neg, t) in ts {
                let c = if *neg { int(-1) } else { int(1) };
                acc.add_scaled_assign(&eval_in(t, k, ctx)?, &c);
            }
            acc
        }
    })
}

/// Evaluates `e` to a vector of `V_{L°}` for the lattice with `<alpha, alpha> = 2k`.
pub fn eval(e: &StateExpr, k: u32) -> Result<LatticeState, ExprError> {
    eval_in(e, k, &mut ZhuContext::new(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use vlplus_core::exact::rat;

    #[test]
    fn parses_and_prints() {
        for src in [
            "star(E, E)",
            "3/4*a(-2)*a(-1)*e(1)",
            "e(1/2) - 3/4*a(-2)*a(-1)*e(1)",
            "-omega + (J - E)*2",
            "circ(omega, one)",
            "Em(2) + Fm(1)",
            "e(-1/2)",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(e.to_string(), src);
        }
        assert_eq!(parse("  star( E ,E )").unwrap().to_string(), "star(E, E)");
    }

    #[test]
    fn rejects_beta_and_garbage() {
        assert_eq!(parse("b(-1)*one"), Err(ExprError::BetaBasis));
        assert!(matches!(parse("omega +"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("x"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("(E"), Err(ExprError::Parse { .. })));
        assert!(matches!(eval(&parse("E*E").unwrap(), 2), Err(ExprError::TwoStates)));
        assert!(matches!(eval(&parse("E*a(-1)").unwrap(), 2), Err(ExprError::OperatorOrder)));
    }

    #[test]
    fn evaluates() {
        let k = 2;
        let g = build_generators(k);
        assert_eq!(eval(&parse("omega").unwrap(), k).unwrap(), g.omega);
        let half = eval(&parse("1/2*a(-1)*a(-1)").unwrap(), k).unwrap();
        assert_eq!(half, LatticeState::term(&[1, 1], 0, rat(1, 2), k));
        assert_eq!(
            eval(&parse("e(1) + e(-1)").unwrap(), k).unwrap(),
            g.e
        );
        let shown = eval(&parse("star(E, E)").unwrap(), k).unwrap();
        assert_eq!(eval(&parse(&shown.to_string()).unwrap(), k).unwrap(), shown);
    }
}
