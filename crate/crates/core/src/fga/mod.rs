//! Formal group algebra `S` for the additive and multiplicative laws, its Weyl action,
//! and the localization `Q` at root classes.

pub mod int;
mod localization;
pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_system::{RootDatum, RootId, Weight, WeylElement, WeylGroup};

pub use int::Int;
pub use localization::QElem;
pub use poly::{Mono, Poly, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Additive,
    Multiplicative,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Additive => "additive",
            Law::Multiplicative => "multiplicative",
        })
    }
}

impl std::str::FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Law> {
        match s {
            "additive" | "a" | "Fa" => Ok(Law::Additive),
            "multiplicative" | "m" | "Fm" => Ok(Law::Multiplicative),
            _ => Err(Error::Config(format!("unknown formal group law `{s}`"))),
        }
    }
}

/// Formal group law plus optional central variables: `h` (additive) or `v` with
/// `q = v^2` (multiplicative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Backend {
    pub law: Law,
    pub h: bool,
    pub v: bool,
}

impl Backend {
    pub const ADDITIVE: Backend = Backend { law: Law::Additive, h: false, v: false };
    pub const MULTIPLICATIVE: Backend = Backend { law: Law::Multiplicative, h: false, v: false };
    pub const ADDITIVE_H: Backend = Backend { law: Law::Additive, h: true, v: false };
    pub const MULTIPLICATIVE_V: Backend = Backend { law: Law::Multiplicative, h: false, v: true };

    pub fn new(law: Law, h: bool, v: bool) -> Result<Backend> {
        match (law, h, v) {
            (Law::Additive, _, true) => Err(Error::Backend("v = q^(1/2) requires the multiplicative law".into())),
            (Law::Multiplicative, true, _) => Err(Error::Backend("h requires the additive law".into())),
            _ => Ok(Backend { law, h, v }),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)?;
        if self.h {
            write!(f, "+h")?;
        }
        if self.v {
            write!(f, "+v")?;
        }
        Ok(())
    }
}

/// Irreducible denominators allowed in `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `x_beta`, always stored for a positive root.
    X(RootId),
    /// `h - beta` (additive with h).
    HatAdd(RootId),
    /// `1 - q e^{-beta}` (multiplicative with v).
    HatMul(RootId),
    /// `1 + beta` (additive), used by the SSM preset.
    OnePlus(RootId),
}

/// Arithmetic context: root datum, Weyl group and backend, with cached root classes.
pub struct Fga {
    datum: Arc<RootDatum>,
    group: Arc<WeylGroup>,
    backend: Backend,
    x_polys: Vec<Poly>,
    factor_cache: std::sync::RwLock<HashMap<Factor, Poly>>,
    /// Additive: images of the lattice variables under each Weyl element.
    linear_images: Vec<Vec<Option<Poly>>>,
}

impl fmt::Debug for Fga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fga({} {})", self.datum.label(), self.backend)
    }
}

impl Fga {
    pub fn new(datum: Arc<RootDatum>, group: Arc<WeylGroup>, backend: Backend) -> Fga {
        let n = datum.rank();
        let mut fga = Fga {
            datum: datum.clone(),
            group: group.clone(),
            backend,
            x_polys: Vec::new(),
            factor_cache: Default::default(),
            linear_images: Vec::new(),
        };
        fga.x_polys = datum.roots().iter().map(|r| fga.x_class(&r.weight)).collect();
        if backend.law == Law::Additive {
            fga.linear_images = group
                .elements()
                .map(|w| {
                    let m = group.matrix(w);
                    (0..n)
                        .map(|i| {
                            let col: Vec<i64> = (0..n).map(|r| m[r * n + i]).collect();
                            let mut unit = vec![0; n];
                            unit[i] = 1;
                            if col == unit {
                                None
                            } else {
                                Some(fga.x_class(&Weight(col)))
                            }
                        })
                        .collect()
                })
                .collect();
        }
        fga
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn law(&self) -> Law {
        self.backend.law
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Index of the central variable (h or v).
    pub fn extra_var(&self) -> usize {
        self.datum.rank()
    }

    /// `e^{-lambda}` as a Laurent monomial (multiplicative only).
    pub fn e_neg(&self, lambda: &Weight) -> Mono {
        let mut m = Mono::ONE;
        for (i, &c) in lambda.0.iter().enumerate() {
            m.0[i] = c as i16;
        }
        m
    }

    /// The class `x_lambda`: the linear form `lambda` (additive) or `1 - e^{-lambda}`.
    pub fn x_class(&self, lambda: &Weight) -> Poly {
        match self.backend.law {
            Law::Additive => Poly::from_terms(
                lambda.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (Mono::var(i, 1), Int::from(c))).collect(),
            ),
            Law::Multiplicative => Poly::one().sub(&Poly::term(self.e_neg(lambda), Int::ONE)),
        }
    }

    pub fn x_root(&self, r: RootId) -> &Poly {
        &self.x_polys[r]
    }

    /// `F(x, y)` for the backend law.
    pub fn formal_sum(&self, x: &Poly, y: &Poly) -> Poly {
        match self.backend.law {
            Law::Additive => x.add(y),
            Law::Multiplicative => x.add(y).sub(&x.mul(y)),
        }
    }

    pub fn h(&self) -> Result<Poly> {
        if !self.backend.h {
            return Err(Error::Backend("h is not available in this backend".into()));
        }
        Ok(Poly::var(self.extra_var()))
    }

    pub fn v_power(&self, k: i16) -> Result<Poly> {
        if !self.backend.v {
            return Err(Error::Backend("q^(1/2) is not available in this backend".into()));
        }
        Ok(Poly::term(Mono::var(self.extra_var(), k), Int::ONE))
    }

    pub fn q(&self) -> Result<Poly> {
        self.v_power(2)
    }

    pub fn factor_poly(&self, f: Factor) -> Poly {
        if let Factor::X(r) = f {
            return self.x_polys[r].clone();
        }
        if let Some(p) = self.factor_cache.read().unwrap().get(&f) {
            return p.clone();
        }
        let p = match f {
            Factor::X(_) => unreachable!(),
            Factor::HatAdd(r) => Poly::var(self.extra_var()).sub(&self.x_polys[r]),
            Factor::HatMul(r) => {
                let e = self.e_neg(&self.datum.root(r).weight);
                Poly::one().sub(&Poly::term(e.mul(&Mono::var(self.extra_var(), 2)), Int::ONE))
            }
            Factor::OnePlus(r) => Poly::one().add(&self.x_polys[r]),
        };
        self.factor_cache.write().unwrap().insert(f, p.clone());
        p
    }

    /// Unit `u` with `x_{-beta} = u * x_beta`.
    fn negation_unit(&self, beta: RootId) -> Poly {
        match self.backend.law {
            Law::Additive => Poly::int(-1),
            // x_{-b} = 1 - e^{b} = -e^{b} (1 - e^{-b})
            Law::Multiplicative => {
                let m = self.e_neg(&self.datum.root(beta).weight).inv();
                Poly::term(m, Int::from(-1))
            }
        }
    }

    /// Canonical factor for `x_r` and the unit `u` with `x_r = u * factor`.
    pub fn x_factor(&self, r: RootId) -> (Poly, Factor) {
        if self.datum.is_positive(r) {
            (Poly::one(), Factor::X(r))
        } else {
            let p = self.datum.negate(r);
            (self.negation_unit(p), Factor::X(p))
        }
    }

    /// `w(f)` as `unit * factor`.
    pub fn act_factor(&self, w: WeylElement, f: Factor) -> (Poly, Factor) {
        let g = &self.group;
        match f {
            Factor::X(r) => self.x_factor(g.act_on_root(w, r)),
            Factor::HatAdd(r) => (Poly::one(), Factor::HatAdd(g.act_on_root(w, r))),
            Factor::HatMul(r) => (Poly::one(), Factor::HatMul(g.act_on_root(w, r))),
            Factor::OnePlus(r) => (Poly::one(), Factor::OnePlus(g.act_on_root(w, r))),
        }
    }

    pub fn act_factor_simple(&self, i: usize, f: Factor) -> (Poly, Factor) {
        let d = &self.datum;
        match f {
            Factor::X(r) => self.x_factor(d.reflect_root(i, r)),
            Factor::HatAdd(r) => (Poly::one(), Factor::HatAdd(d.reflect_root(i, r))),
            Factor::HatMul(r) => (Poly::one(), Factor::HatMul(d.reflect_root(i, r))),
            Factor::OnePlus(r) => (Poly::one(), Factor::OnePlus(d.reflect_root(i, r))),
        }
    }

    /// Weyl action on `S`: a ring automorphism fixing the integers, h and v.
    pub fn act_poly(&self, w: WeylElement, p: &Poly) -> Poly {
        if w == WeylElement::IDENTITY {
            return p.clone();
        }
        match self.backend.law {
            Law::Additive => p.substitute(&self.linear_images[w.0]),
            Law::Multiplicative => {
                let n = self.rank();
                let m = self.group.matrix(w);
                p.map_monos(|mono| {
                    let mut out = *mono;
                    for r in 0..n {
                        out.0[r] = (0..n).map(|c| m[r * n + c] as i16 * mono.0[c]).sum();
                    }
                    out
                })
            }
        }
    }

    pub fn act_poly_simple(&self, i: usize, p: &Poly) -> Poly {
        self.act_poly(self.group.simple(i), p)
    }

    /// Candidate irreducible factors for trial factorization.
    pub(crate) fn candidate_factors(&self) -> Vec<Factor> {
        let d = &self.datum;
        let mut out: Vec<Factor> = d.positive_roots().map(Factor::X).collect();
        let all = 0..d.roots().len();
        if self.backend.h {
            out.extend(all.clone().map(Factor::HatAdd));
        }
        if self.backend.v {
            out.extend(all.clone().map(Factor::HatMul));
        }
        if self.backend.law == Law::Additive {
            out.extend(all.map(Factor::OnePlus));
        }
        out
    }

    pub fn is_unit_poly(&self, p: &Poly) -> bool {
        match self.backend.law {
            Law::Additive => p.as_constant().is_some_and(|c| c.abs().is_one()),
            Law::Multiplicative => p.as_unit().is_some(),
        }
    }

    pub fn inverse_unit(&self, p: &Poly) -> Option<Poly> {
        let (neg, m) = p.as_unit()?;
        if self.backend.law == Law::Additive && !m.is_one() {
            return None;
        }
        Some(Poly::term(m.inv(), if neg { Int::from(-1) } else { Int::ONE }))
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.rank()).map(|i| format!("t{i}")).collect();
        names.push(if self.backend.law == Law::Additive { "h".into() } else { "v".into() });
        names
    }

    pub fn factor_label(&self, f: Factor) -> String {
        match f {
            Factor::X(r) => format!("x[{}]", self.datum.root_label(r)),
            Factor::HatAdd(r) | Factor::HatMul(r) => format!("hat[{}]", self.datum.root_label(r)),
            Factor::OnePlus(r) => format!("onep[{}]", self.datum.root_label(r)),
        }
    }

    /// Human-readable polynomial in `t_i` (additive) or `e_i = e^{t_i}` (multiplicative).
    pub fn pretty_poly(&self, p: &Poly) -> String {
        let mut names = self.var_names();
        if self.backend.law == Law::Multiplicative {
            for (i, n) in names.iter_mut().take(self.rank()).enumerate() {
                *n = format!("e{}", i + 1);
            }
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        p.pretty(&refs)
    }

    /// Serialization: additive terms `c * t1^a1t2^a2 h^k`, multiplicative `c * E(m1,...,mn) v^k`.
    pub fn serialize_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let n = self.rank();
        let x = self.extra_var();
        let terms: Vec<String> = p
            .terms()
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut s = format!("{c} * ");
                match self.backend.law {
                    Law::Additive => {
                        for i in 0..n {
                            s.push_str(&format!("t{}^{}", i + 1, m.0[i]));
                        }
                        if m.0[x] != 0 {
                            s.push_str(&format!(" h^{}", m.0[x]));
                        }
                    }
                    Law::Multiplicative => {
                        let e: Vec<String> = (0..n).map(|i| m.0[i].to_string()).collect();
                        s.push_str(&format!("E({})", e.join(",")));
                        if m.0[x] != 0 {
                            s.push_str(&format!(" v^{}", m.0[x]));
                        }
                    }
                }
                s
            })
            .collect();
        terms.join(" + ")
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s == "0" {
            return Ok(Poly::zero());
        }
        let bad = || Error::Expr(format!("malformed serialized polynomial `{s}`"));
        let n = self.rank();
        let x = self.extra_var();
        let mut terms = Vec::new();
        for t in s.split(" + ") {
            let (c, rest) = t.split_once(" * ").ok_or_else(bad)?;
            let c: Int = c.trim().parse().map_err(|_| bad())?;
            let mut m = Mono::ONE;
            let (body, extra) = match rest.split_once(' ') {
                Some((b, e)) => (b, Some(e)),
                None => (rest, None),
            };
            match self.backend.law {
                Law::Additive => {
                    for (i, piece) in body.split('t').filter(|p| !p.is_empty()).enumerate() {
                        let (idx, e) = piece.split_once('^').ok_or_else(bad)?;
                        if idx.parse::<usize>().map_err(|_| bad())? != i + 1 || i >= n {
                            return Err(bad());
                        }
                        m.0[i] = e.parse().map_err(|_| bad())?;
                    }
                    if let Some(e) = extra {
                        m.0[x] = e.strip_prefix("h^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    }
                }
                Law::Multiplicative => {
                    let inner = body.strip_prefix("E(").and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
                    for (i, e) in inner.split(',').enumerate() {
                        if i >= n {
                            return Err(bad());
                        }
                        m.0[i] = e.trim().parse().map_err(|_| bad())?;
                    }
                    if let Some(e) = extra {
                        m.0[x] = e.strip_prefix("v^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                    }
                }
            }
            terms.push((m, c));
        }
        Ok(Poly::from_terms(terms))
    }
}
