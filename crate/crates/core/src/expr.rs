//! A small expression language for elements of `Q`, used by custom operator families
//! and by the golden example corpus.
//!
//! Atoms: integers, `h`, `v`, `q`, `t1..tn`, and root-indexed symbols `x[R]`, `hat[R]`,
//! `onep[R]`, `e[R]` (= e^R), `k[R]` (= kappa_R), where `R` is a root label such as `1+2`,
//! `2*2+3`, `-(1+2)`, or `r` / `-r` for the root a family is being evaluated at.
//! Operators: `+ - * / ^` (integer exponents, negative allowed) and parentheses.

use crate::error::{Error, Result};
use crate::fga::{Factor, Fga, Int, Law, Mono, Poly, QElem};
use crate::root_system::RootId;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Bracket(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if c == '[' {
            let st = i + 1;
            while i < cs.len() && cs[i] != ']' {
                i += 1;
            }
            if i == cs.len() {
                return Err(Error::Expr(format!("unclosed `[` in `{s}`")));
            }
            out.push(Tok::Bracket(cs[st..i].iter().filter(|c| !c.is_whitespace()).collect()));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Expr(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    fga: &'a Fga,
    root: Option<RootId>,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Expr(format!("{msg} in `{}`", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.fga.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.fga.sub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = self.fga.mul(&acc, &t);
            } else if self.eat('/') {
                let t = self.unary()?;
                acc = self.fga.div(&acc, &t)?;
            } else if matches!(self.peek(), Some(Tok::Op('(')) | Some(Tok::Ident(_)) | Some(Tok::Num(_))) {
                // implicit multiplication: `2h`, `x[1](h+1)`
                let t = self.unary()?;
                acc = self.fga.mul(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QElem> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let paren = self.eat('(');
            let neg = neg | (paren && self.eat('-'));
            let e: u32 = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => n.parse().map_err(|_| self.err("bad exponent"))?,
                _ => return Err(self.err("expected integer exponent")),
            };
            self.pos += 1;
            if paren && !self.eat(')') {
                return Err(self.err("expected `)`"));
            }
            let p = self.fga.pow(&base, e);
            return if neg { self.fga.inv(&p) } else { Ok(p) };
        }
        Ok(base)
    }

    fn root_arg(&mut self) -> Result<RootId> {
        let label = match self.toks.get(self.pos) {
            Some(Tok::Bracket(b)) => b.clone(),
            _ => return Err(self.err("expected `[root]`")),
        };
        self.pos += 1;
        match label.as_str() {
            "r" | "-r" => {
                let r = self.root.ok_or_else(|| self.err("`r` used outside a family definition"))?;
                Ok(if label == "r" { r } else { self.fga.datum().negate(r) })
            }
            _ => self.fga.parse_root_label(&label),
        }
    }

    fn atom(&mut self) -> Result<QElem> {
        let f = self.fga;
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(QElem::from_poly(Poly::constant(n.parse::<Int>().map_err(|_| self.err("bad integer"))?))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "h" => Ok(QElem::from_poly(f.h()?)),
                "v" => Ok(QElem::from_poly(f.v_power(1)?)),
                "q" => Ok(QElem::from_poly(f.q()?)),
                "x" => {
                    // x of a non-root weight is allowed, e.g. `x[1+2*2+3]`
                    if let Some(Tok::Bracket(b)) = self.toks.get(self.pos) {
                        if b != "r" && b != "-r" && f.parse_root_label(b).is_err() {
                            let w = f.parse_weight_label(b)?;
                            self.pos += 1;
                            return Ok(QElem::from_poly(f.x_class(&w)));
                        }
                    }
                    let r = self.root_arg()?;
                    Ok(QElem::from_poly(f.x_root(r).clone()))
                }
                "hat" => {
                    let r = self.root_arg()?;
                    let fac = if f.law() == Law::Additive { Factor::HatAdd(r) } else { Factor::HatMul(r) };
                    if f.law() == Law::Additive { f.h()?; } else { f.q()?; }
                    Ok(QElem::from_poly(f.factor_poly(fac)))
                }
                "onep" => {
                    let r = self.root_arg()?;
                    Ok(QElem::from_poly(f.factor_poly(Factor::OnePlus(r))))
                }
                "e" => {
                    let r = self.root_arg()?;
                    if f.law() != Law::Multiplicative {
                        return Err(self.err("`e[..]` requires the multiplicative law"));
                    }
                    let m: Mono = f.e_neg(&f.datum().root(r).weight).inv();
                    Ok(QElem::from_poly(Poly::term(m, Int::ONE)))
                }
                "k" => {
                    let r = self.root_arg()?;
                    Ok(QElem::from_poly(crate::twisted::kappa(f, &f.datum().root(r).weight)?))
                }
                t if t.starts_with('t') => {
                    let i: usize = t[1..].parse().map_err(|_| self.err("unknown identifier"))?;
                    if i == 0 || i > f.rank() || f.law() != Law::Additive {
                        return Err(self.err("lattice variable out of range"));
                    }
                    Ok(QElem::from_poly(Poly::var(i - 1)))
                }
                _ => Err(self.err(&format!("unknown identifier `{id}`"))),
            },
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// Evaluate `src`; `root` binds the symbol `r`.
pub fn eval(fga: &Fga, src: &str, root: Option<RootId>) -> Result<QElem> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, fga, root, src };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fga::Backend;
    use crate::root_system::{Lattice, RootDatum, WeylGroup};

    fn fga(t: &str, b: Backend) -> Fga {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        Fga::new(d, g, b)
    }

    #[test]
    fn formal_sum_in_multiplicative() {
        let f = fga("A2", Backend::MULTIPLICATIVE);
        let lhs = eval(&f, "x[1+2]", None).unwrap();
        let rhs = eval(&f, "x[1] + x[2] - x[1]*x[2]", None).unwrap();
        assert!(f.eq(&lhs, &rhs));
        let neg = eval(&f, "x[-1]", None).unwrap();
        assert!(f.eq(&neg, &eval(&f, "x[1]/(x[1]-1)", None).unwrap()));
        assert!(f.eq(&eval(&f, "1 - e[-1]", None).unwrap(), &eval(&f, "x[1]", None).unwrap()));
    }

    #[test]
    fn precedence_and_powers() {
        let f = fga("A2", Backend::ADDITIVE_H);
        let a = eval(&f, "h^2(h + x[1])", None).unwrap();
        let b = eval(&f, "h*h*h + h*h*x[1]", None).unwrap();
        assert!(f.eq(&a, &b));
        let c = eval(&f, "x[1]^-2 * x[1]^2", None).unwrap();
        assert!(f.eq(&c, &QElem::one()));
        assert!(eval(&f, "1/0", None).is_err());
        assert!(eval(&f, "x[1", None).is_err());
        assert!(eval(&f, "x[r]", None).is_err());
        assert!(f.eq(&eval(&f, "x[-r]", Some(0)).unwrap(), &eval(&f, "-x[1]", None).unwrap()));
    }
}
