use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::monomial::{Axis, Generator, Monomial, MultiIndex};
use crate::series::{Chart, GradedSeries, Truncation};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Deriv(MultiIndex, String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '/' => out.push((start, Tok::Slash)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                out.push((start, Tok::Num(BigRational::from_integer(n))));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                if word == "d" && i < bytes.len() && bytes[i] == b'[' {
                    let close = src[i..].find(']').map(|k| i + k).ok_or(Error::Parse {
                        pos: i,
                        msg: "unterminated derivative index".into(),
                    })?;
                    let mut axes = Vec::new();
                    for part in src[i + 1..close].split(',') {
                        match part.trim() {
                            "x" => axes.push(Axis::X),
                            "y" => axes.push(Axis::Y),
                            other => {
                                return Err(Error::Parse {
                                    pos: i + 1,
                                    msg: format!("bad derivative axis '{other}'"),
                                })
                            }
                        }
                    }
                    i = close + 1;
                    let fstart = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    let field = &src[fstart..i];
                    if field != "B" && field != "phi" {
                        return Err(Error::Parse {
                            pos: fstart,
                            msg: format!("derivative of unknown field '{field}'"),
                        });
                    }
                    out.push((
                        start,
                        Tok::Deriv(MultiIndex::from_axes(&axes), field.to_string()),
                    ));
                } else {
                    out.push((start, Tok::Ident(word.to_string())));
                }
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Atom {
    Num(BigRational),
    I,
    Hbar,
    Eps,
    B,
    Gen(Generator),
    EField(Axis),
    Pos(Axis),
    Vel(Axis),
    Group(Box<Expr>),
}

#[derive(Debug, Clone)]
enum Exponent {
    Int(i64),
    Half(i64),
}

#[derive(Debug, Clone)]
struct Factor {
    pos: usize,
    atom: Atom,
    exp: Option<Exponent>,
}

#[derive(Debug, Clone)]
struct Expr {
    terms: Vec<(bool, Vec<Factor>)>,
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    chart: Option<(Chart, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn see_chart(&mut self, chart: Chart, pos: usize) -> Result<()> {
        match self.chart {
            None => self.chart = Some((chart, pos)),
            Some((c, _)) if c != chart => return Err(Error::ChartMixing { pos }),
            _ => {}
        }
        Ok(())
    }

    fn series(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                neg = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        terms.push((neg, self.term()?));
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push((false, self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push((true, self.term()?));
                }
                _ => break,
            }
        }
        Ok(Expr { terms })
    }

    fn term(&mut self) -> Result<Vec<Factor>> {
        let mut fs = vec![self.factor()?];
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            fs.push(self.factor()?);
        }
        Ok(fs)
    }

    fn factor(&mut self) -> Result<Factor> {
        let pos = self.pos();
        let atom = match self.bump() {
            Some(Tok::Num(n)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) if !d.is_zero() => Atom::Num(n / d),
                        _ => {
                            return Err(Error::Parse {
                                pos,
                                msg: "bad rational literal".into(),
                            })
                        }
                    }
                } else {
                    Atom::Num(n)
                }
            }
            Some(Tok::Deriv(idx, field)) => {
                if field == "B" {
                    if idx.order() == 0 {
                        return Err(Error::Parse {
                            pos,
                            msg: "empty derivative of B".into(),
                        });
                    }
                    Atom::Gen(Generator::DB(idx))
                } else {
                    Atom::Gen(Generator::Dphi(idx))
                }
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "i" => Atom::I,
                "hbar" => Atom::Hbar,
                "eps" => Atom::Eps,
                "B" => Atom::B,
                "phi" => Atom::Gen(Generator::Dphi(MultiIndex::ZERO)),
                "E_x" => Atom::EField(Axis::X),
                "E_y" => Atom::EField(Axis::Y),
                "c1" => Atom::Gen(Generator::C1),
                "c2" => Atom::Gen(Generator::C2),
                "mu_z" => Atom::Gen(Generator::MuZ),
                "x" | "y" | "X" | "Y" => {
                    let chart = if name.chars().next().unwrap().is_lowercase() {
                        Chart::Particle
                    } else {
                        Chart::GuidingCenter
                    };
                    self.see_chart(chart, pos)?;
                    Atom::Pos(if name.eq_ignore_ascii_case("x") {
                        Axis::X
                    } else {
                        Axis::Y
                    })
                }
                "v_x" | "v_y" | "V_x" | "V_y" => {
                    let chart = if name.starts_with('v') {
                        Chart::Particle
                    } else {
                        Chart::GuidingCenter
                    };
                    self.see_chart(chart, pos)?;
                    Atom::Vel(if name.ends_with('x') {
                        Axis::X
                    } else {
                        Axis::Y
                    })
                }
                other => {
                    return Err(Error::Parse {
                        pos,
                        msg: format!("unknown symbol '{other}'"),
                    })
                }
            },
            Some(Tok::LParen) => {
                let e = self.series()?;
                match self.bump() {
                    Some(Tok::RParen) => Atom::Group(Box::new(e)),
                    _ => {
                        return Err(Error::Parse {
                            pos: self.pos(),
                            msg: "expected ')'".into(),
                        })
                    }
                }
            }
            Some(t) => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected token {t:?}"),
                })
            }
            None => {
                return Err(Error::Parse {
                    pos,
                    msg: "unexpected end of input".into(),
                })
            }
        };
        let exp = if let Some(Tok::Caret) = self.peek() {
            self.bump();
            Some(self.exponent()?)
        } else {
            None
        };
        Ok(Factor { pos, atom, exp })
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if let Some(Tok::Minus) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Num(n)) if n.is_integer() => {
                let v: i64 = n.numer().try_into().map_err(|_| Error::Parse {
                    pos: self.pos(),
                    msg: "exponent too large".into(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if let Some(Tok::LParen) = self.peek() {
            self.bump();
            let n = self.signed_int()?;
            let e = if let Some(Tok::Slash) = self.peek() {
                self.bump();
                match self.bump() {
                    Some(Tok::Num(d)) if d == BigRational::from_integer(2.into()) => {
                        Exponent::Half(n)
                    }
                    _ => return self.err("only half-integer fractional exponents are allowed"),
                }
            } else {
                Exponent::Int(n)
            };
            match self.bump() {
                Some(Tok::RParen) => Ok(e),
                _ => self.err("expected ')'"),
            }
        } else {
            Ok(Exponent::Int(self.signed_int()?))
        }
    }
}

struct Eval {
    chart: Chart,
    trunc: Truncation,
}

impl Eval {
    fn mono(&self, m: Monomial, c: Coefficient) -> Result<GradedSeries> {
        GradedSeries::monomial(self.chart, self.trunc, m, c)
    }

    fn expr(&self, e: &Expr) -> Result<GradedSeries> {
        let mut acc = GradedSeries::zero(self.chart, self.trunc);
        for (neg, fs) in &e.terms {
            let mut t = GradedSeries::one(self.chart, self.trunc);
            for f in fs {
                t = t.mul_pointwise(&self.factor(f)?)?;
            }
            acc = if *neg { acc.sub(&t)? } else { acc.add(&t)? };
        }
        Ok(acc)
    }

    fn factor(&self, f: &Factor) -> Result<GradedSeries> {
        let neg_power = |what: &str| Error::NegativePower {
            pos: f.pos,
            what: what.to_string(),
        };
        match (&f.atom, &f.exp) {
            (Atom::B, None) => Ok(GradedSeries::b_power(self.chart, self.trunc, 2)),
            (Atom::B, Some(Exponent::Int(n))) => {
                Ok(GradedSeries::b_power(self.chart, self.trunc, 2 * *n as i32))
            }
            (Atom::B, Some(Exponent::Half(n))) => {
                Ok(GradedSeries::b_power(self.chart, self.trunc, *n as i32))
            }
            (_, Some(Exponent::Half(_))) => Err(Error::Parse {
                pos: f.pos,
                msg: "half-integer exponents are only allowed on B".into(),
            }),
            (Atom::Eps, e) => {
                let n = match e {
                    Some(Exponent::Int(n)) => *n as i32,
                    _ => 1,
                };
                self.mono(
                    Monomial {
                        eps: n,
                        ..Monomial::one()
                    },
                    Coefficient::one(),
                )
            }
            (atom, e) => {
                let n = match e {
                    Some(Exponent::Int(n)) => *n,
                    _ => 1,
                };
                let base = match atom {
                    Atom::Num(r) => {
                        GradedSeries::constant(self.chart, self.trunc, Coefficient::real(r.clone()))
                    }
                    Atom::I => GradedSeries::constant(self.chart, self.trunc, Coefficient::i()),
                    Atom::Hbar => self.mono(
                        Monomial {
                            hbar: 1,
                            ..Monomial::one()
                        },
                        Coefficient::one(),
                    )?,
                    Atom::Gen(g) => GradedSeries::generator(self.chart, self.trunc, *g),
                    Atom::EField(a) => {
                        let g = Generator::Dphi(MultiIndex::ZERO.bump(*a));
                        GradedSeries::generator(self.chart, self.trunc, g).neg()
                    }
                    Atom::Pos(a) => GradedSeries::position(self.chart, self.trunc, *a),
                    Atom::Vel(a) => GradedSeries::velocity(self.chart, self.trunc, *a),
                    Atom::Group(e) => self.expr(e)?,
                    Atom::B | Atom::Eps => unreachable!(),
                };
                if n < 0 {
                    let what = match atom {
                        Atom::Num(r) => {
                            if r.is_zero() {
                                return Err(Error::Parse {
                                    pos: f.pos,
                                    msg: "zero to a negative power".into(),
                                });
                            }
                            let inv = BigRational::one() / r.clone();
                            let v = inv.pow(-n as i32);
                            return Ok(GradedSeries::constant(
                                self.chart,
                                self.trunc,
                                Coefficient::real(v),
                            ));
                        }
                        Atom::I => {
                            return Ok(GradedSeries::constant(
                                self.chart,
                                self.trunc,
                                Coefficient::i_pow(n),
                            ))
                        }
                        Atom::Hbar => "hbar",
                        Atom::Gen(_) | Atom::EField(_) => "a field generator",
                        Atom::Pos(_) | Atom::Vel(_) => "a phase-space variable",
                        _ => "a parenthesised series",
                    };
                    return Err(neg_power(what));
                }
                base.pow(n as u32)
            }
        }
    }
}

/// Parse text, inferring the chart from the variables (particle if none).
pub fn parse_series(text: &str, trunc: Truncation) -> Result<GradedSeries> {
    parse_impl(text, trunc, None)
}

/// Parse text in a fixed chart; variables of the other chart are an error.
pub fn parse_series_in(text: &str, trunc: Truncation, chart: Chart) -> Result<GradedSeries> {
    parse_impl(text, trunc, Some(chart))
}

fn parse_impl(text: &str, trunc: Truncation, chart: Option<Chart>) -> Result<GradedSeries> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        chart: None,
    };
    let e = p.series()?;
    if p.at < p.toks.len() {
        return p.err("trailing input");
    }
    let found = p.chart.map(|(c, _)| c);
    let chart = match (chart, found) {
        (Some(want), Some(got)) if want != got => {
            return Err(Error::ChartMismatch {
                left: want,
                right: got,
            })
        }
        (Some(want), _) => want,
        (None, Some(got)) => got,
        (None, None) => Chart::Particle,
    };
    Eval { chart, trunc }.expr(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::FieldFactor;

    fn p(s: &str) -> Result<GradedSeries> {
        parse_series(s, Truncation::default())
    }

    #[test]
    fn parses_scaled_gradient_term() {
        let s = p("(1/2)*B^-1*d[x]B*v_y").unwrap();
        assert_eq!(s.len(), 1);
        let (m, c) = s.terms().next().unwrap();
        assert_eq!(*c, Coefficient::from_ratio(1, 2));
        assert_eq!(
            m.field,
            FieldFactor::b_pow(-2).mul(&FieldFactor::gen(Generator::db(1, 0)))
        );
        assert_eq!(m.vel, [0, 1]);
    }

    #[test]
    fn e_field_is_minus_phi_gradient() {
        let a = p("E_x").unwrap();
        let b = p("-d[x]phi").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mixing_charts_is_rejected() {
        assert!(matches!(p("x*V_x"), Err(Error::ChartMixing { pos: 2 })));
    }

    #[test]
    fn negative_power_only_on_b_and_eps() {
        assert!(matches!(
            p("v_x^-1"),
            Err(Error::NegativePower { pos: 0, .. })
        ));
        assert!(p("B^-1*eps^-2").is_ok());
        assert!(matches!(p("hbar^-1"), Err(Error::NegativePower { .. })));
    }

    #[test]
    fn half_powers_of_b() {
        let s = p("B^(-3/2)").unwrap();
        let (m, _) = s.terms().next().unwrap();
        assert_eq!(m.field.b_half, -3);
        assert!(p("v_x^(1/2)").is_err());
    }

    #[test]
    fn group_powers_expand() {
        let a = p("(v_x + v_y)^2").unwrap();
        let b = p("v_x^2 + 2*v_x*v_y + v_y^2").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(p("v_x + * v_y"), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(p("v_x v_y"), Err(Error::Parse { pos: 4, .. })));
    }
}
