//! Elements of the localization `Q = S[1/x_alpha]` (and hatted denominators) as a
//! numerator over a multiset of irreducible factors.

use std::fmt;

use super::{Factor, Fga, Law, Poly};
use crate::error::{Error, Result};
use crate::root_system::{Weight, WeylElement};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QElem {
    pub num: Poly,
    /// Sorted by factor; multiplicities positive.
    pub den: Vec<(Factor, u32)>,
}

impl fmt::Debug for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.num)?;
        if !self.den.is_empty() {
            write!(f, " / {:?}", self.den)?;
        }
        Ok(())
    }
}

impl QElem {
    pub fn zero() -> QElem {
        QElem::default()
    }

    pub fn one() -> QElem {
        QElem::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> QElem {
        QElem { num, den: Vec::new() }
    }

    pub fn int(c: i64) -> QElem {
        QElem::from_poly(Poly::int(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element as a polynomial, when it lies in `S`.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn neg(&self) -> QElem {
        QElem { num: self.num.neg(), den: self.den.clone() }
    }
}

fn collect(mut v: Vec<(Factor, u32)>) -> Vec<(Factor, u32)> {
    v.sort();
    let mut out: Vec<(Factor, u32)> = Vec::with_capacity(v.len());
    for (f, e) in v {
        match out.last_mut() {
            Some(last) if last.0 == f => last.1 += e,
            _ => out.push((f, e)),
        }
    }
    out
}

fn merge(a: &[(Factor, u32)], b: &[(Factor, u32)]) -> Vec<(Factor, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Least common multiple of two denominators plus the cofactors `lcm/a`, `lcm/b`.
fn lcm(a: &[(Factor, u32)], b: &[(Factor, u32)]) -> (Vec<(Factor, u32)>, Vec<(Factor, u32)>, Vec<(Factor, u32)>) {
    let mut l = Vec::new();
    let mut ca = Vec::new();
    let mut cb = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            l.push(a[i]);
            cb.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            l.push(b[j]);
            ca.push(b[j]);
            j += 1;
        } else {
            let (f, ea, eb) = (a[i].0, a[i].1, b[j].1);
            l.push((f, ea.max(eb)));
            if eb > ea {
                ca.push((f, eb - ea));
            } else if ea > eb {
                cb.push((f, ea - eb));
            }
            i += 1;
            j += 1;
        }
    }
    (l, ca, cb)
}

impl Fga {
    /// Exact division in `S`: polynomial ring (additive) or Laurent ring (multiplicative).
    pub fn divide(&self, p: &Poly, d: &Poly) -> Option<Poly> {
        match self.law() {
            Law::Additive => p.div_exact_poly(d),
            Law::Multiplicative => p.div_exact(d),
        }
    }

    pub fn expand(&self, den: &[(Factor, u32)]) -> Poly {
        let mut p = Poly::one();
        for &(f, e) in den {
            p = p.mul(&self.factor_poly(f).pow(e));
        }
        p
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn normalize(&self, num: Poly, den: Vec<(Factor, u32)>) -> QElem {
        if num.is_zero() {
            return QElem::zero();
        }
        let mut num = num;
        let mut out = Vec::with_capacity(den.len());
        for (f, mut e) in den {
            let fp = self.factor_poly(f);
            while e > 0 {
                match self.divide(&num, &fp) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                out.push((f, e));
            }
        }
        QElem { num, den: out }
    }

    pub fn poly(&self, p: Poly) -> QElem {
        QElem::from_poly(p)
    }

    /// `1 / f` for an irreducible factor.
    pub fn inv_factor(&self, f: Factor) -> QElem {
        QElem { num: Poly::one(), den: vec![(f, 1)] }
    }

    /// `1 / x_r` for any root `r`.
    pub fn inv_x(&self, r: usize) -> QElem {
        let (unit, f) = self.x_factor(r);
        let u = self.inverse_unit(&unit).expect("root units are invertible");
        QElem { num: u, den: vec![(f, 1)] }
    }

    pub fn add(&self, a: &QElem, b: &QElem) -> QElem {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if a.den == b.den {
            return self.normalize(a.num.add(&b.num), a.den.clone());
        }
        let (l, ca, cb) = lcm(&a.den, &b.den);
        let num = a.num.mul(&self.expand(&ca)).add(&b.num.mul(&self.expand(&cb)));
        self.normalize(num, l)
    }

    pub fn sub(&self, a: &QElem, b: &QElem) -> QElem {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &QElem, b: &QElem) -> QElem {
        if a.is_zero() || b.is_zero() {
            return QElem::zero();
        }
        let num = a.num.mul(&b.num);
        if a.den.is_empty() && b.den.is_empty() {
            return QElem::from_poly(num);
        }
        self.normalize(num, merge(&a.den, &b.den))
    }

    /// Product without cancelling common factors; meant to feed `sum`.
    pub fn mul_unreduced(&self, a: &QElem, b: &QElem) -> QElem {
        if a.is_zero() || b.is_zero() {
            return QElem::zero();
        }
        QElem { num: a.num.mul(&b.num), den: merge(&a.den, &b.den) }
    }

    pub fn mul_poly(&self, a: &QElem, p: &Poly) -> QElem {
        if a.den.is_empty() {
            return QElem::from_poly(a.num.mul(p));
        }
        self.normalize(a.num.mul(p), a.den.clone())
    }

    /// Sums over one common denominator and normalizes once.
    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a QElem>) -> QElem {
        // numerators sharing a denominator are added first
        let mut groups: Vec<(Vec<(Factor, u32)>, Poly)> = Vec::new();
        for x in items {
            if x.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|(d, _)| *d == x.den) {
                Some((_, n)) => *n = n.add(&x.num),
                None => groups.push((x.den.clone(), x.num.clone())),
            }
        }
        groups.retain(|(_, n)| !n.is_zero());
        match groups.len() {
            0 => return QElem::zero(),
            1 => {
                let (d, n) = groups.pop().expect("one group");
                return self.normalize(n, d);
            }
            _ => {}
        }
        let mut l: Vec<(Factor, u32)> = Vec::new();
        for (d, _) in &groups {
            l = lcm(&l, d).0;
        }
        let mut num = Poly::zero();
        for (d, n) in &groups {
            let (_, co, _) = lcm(d, &l);
            let co = if co.is_empty() { n.clone() } else { n.mul(&self.expand(&co)) };
            num = num.add(&co);
        }
        self.normalize(num, l)
    }

    pub fn product<'a>(&self, items: impl IntoIterator<Item = &'a QElem>) -> QElem {
        let mut acc = QElem::one();
        for x in items {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn pow(&self, a: &QElem, e: u32) -> QElem {
        let mut acc = QElem::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Exact equality by cross-multiplication.
    pub fn eq(&self, a: &QElem, b: &QElem) -> bool {
        if a.den == b.den {
            return a.num == b.num;
        }
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        let (_, ca, cb) = lcm(&a.den, &b.den);
        a.num.mul(&self.expand(&ca)) == b.num.mul(&self.expand(&cb))
    }

    /// Factor `p` as `unit * prod(factors)`, or fail if a non-unit residue remains.
    pub fn factorize(&self, p: &Poly) -> Result<(Poly, Vec<(Factor, u32)>)> {
        if p.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        let mut rest = p.clone();
        let mut found: Vec<(Factor, u32)> = Vec::new();
        for f in self.candidate_factors() {
            if self.is_unit_poly(&rest) {
                break;
            }
            let fp = self.factor_poly(f);
            let mut e = 0;
            while let Some(q) = self.divide(&rest, &fp) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                found.push((f, e));
            }
        }
        if !self.is_unit_poly(&rest) {
            return Err(Error::NotInvertible(self.pretty_poly(p)));
        }
        found.sort();
        Ok((rest, found))
    }

    pub fn inv(&self, a: &QElem) -> Result<QElem> {
        let (unit, factors) = self.factorize(&a.num)?;
        let u = self.inverse_unit(&unit).ok_or_else(|| Error::NotInvertible(self.pretty_poly(&a.num)))?;
        Ok(self.normalize(self.expand(&a.den).mul(&u), factors))
    }

    pub fn div(&self, a: &QElem, b: &QElem) -> Result<QElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Weyl action on `Q`.
    pub fn act(&self, w: WeylElement, a: &QElem) -> QElem {
        if w == WeylElement::IDENTITY || a.is_zero() {
            return a.clone();
        }
        let mut num = self.act_poly(w, &a.num);
        let mut den = Vec::with_capacity(a.den.len());
        for &(f, e) in &a.den {
            let (unit, g) = self.act_factor(w, f);
            if !unit.is_one() {
                let u = self.inverse_unit(&unit).expect("unit");
                num = num.mul(&u.pow(e));
            }
            den.push((g, e));
        }
        QElem { num, den: collect(den) }
    }

    pub fn act_simple(&self, i: usize, a: &QElem) -> QElem {
        self.act(self.group().simple(i), a)
    }

    /// Numerator and denominator as polynomials (`den` expanded).
    pub fn fraction(&self, a: &QElem) -> (Poly, Poly) {
        (a.num.clone(), self.expand(&a.den))
    }

    pub fn pretty(&self, a: &QElem) -> String {
        let num = self.pretty_poly(&a.num);
        if a.den.is_empty() {
            return num;
        }
        let den: Vec<String> = a
            .den
            .iter()
            .map(|&(f, e)| if e == 1 { self.factor_label(f) } else { format!("{}^{e}", self.factor_label(f)) })
            .collect();
        format!("({num}) / ({})", den.join("*"))
    }

    /// `{"num": ..., "den": [descriptors]}`.
    pub fn to_json(&self, a: &QElem) -> serde_json::Value {
        let den: Vec<String> = a
            .den
            .iter()
            .flat_map(|&(f, e)| std::iter::repeat(self.factor_label(f)).take(e as usize))
            .collect();
        serde_json::json!({ "num": self.serialize_poly(&a.num), "den": den })
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<QElem> {
        let bad = || Error::Expr(format!("malformed localized element {v}"));
        let num = self.parse_poly(v.get("num").and_then(|n| n.as_str()).ok_or_else(bad)?)?;
        let mut den = Vec::new();
        for d in v.get("den").and_then(|d| d.as_array()).ok_or_else(bad)? {
            let f = self.parse_factor_label(d.as_str().ok_or_else(bad)?)?;
            den.push((f, 1));
        }
        Ok(QElem { num, den: collect(den) })
    }

    pub fn parse_factor_label(&self, s: &str) -> Result<Factor> {
        let bad = || Error::Expr(format!("unknown denominator descriptor `{s}`"));
        let (head, rest) = s.split_once('[').ok_or_else(bad)?;
        let label = rest.strip_suffix(']').ok_or_else(bad)?;
        let r = self.parse_root_label(label)?;
        match head {
            "x" if self.datum().is_positive(r) => Ok(Factor::X(r)),
            "hat" if self.law() == Law::Additive => Ok(Factor::HatAdd(r)),
            "hat" => Ok(Factor::HatMul(r)),
            "onep" => Ok(Factor::OnePlus(r)),
            _ => Err(bad()),
        }
    }

    /// Inverse of `root_label`: `1+2`, `1+2*2`, `-(1+2)`.
    pub fn parse_root_label(&self, s: &str) -> Result<usize> {
        let coords = self.parse_simple_coords(s)?;
        self.datum().root_from_simple_coords(&coords).ok_or_else(|| Error::Expr(format!("unknown root `{s}`")))
    }

    /// Any integer combination of simple roots, in the same notation as `root_label`.
    pub fn parse_weight_label(&self, s: &str) -> Result<Weight> {
        Ok(self.datum().weight_from_simple_coords(&self.parse_simple_coords(s)?))
    }

    fn parse_simple_coords(&self, s: &str) -> Result<Vec<i64>> {
        let bad = || Error::Expr(format!("unknown root `{s}`"));
        let d = self.datum();
        let (neg, body) = match s.strip_prefix("-(").and_then(|b| b.strip_suffix(')')) {
            Some(b) => (true, b),
            None => match s.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, s),
            },
        };
        let mut coords = vec![0i64; d.rank()];
        for part in body.split('+') {
            let part = part.trim();
            let (c, idx) = match part.split_once('*') {
                Some((c, i)) => (c.parse::<i64>().map_err(|_| bad())?, i),
                None => (1, part),
            };
            let i: usize = idx.parse().map_err(|_| bad())?;
            if i == 0 || i > d.rank() {
                return Err(bad());
            }
            coords[i - 1] += c;
        }
        if neg {
            coords.iter_mut().for_each(|c| *c = -*c);
        }
        Ok(coords)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fga::{Backend, Int, Mono};
    use crate::root_system::{Lattice, RootDatum, WeylGroup};

    fn fga(t: &str, b: Backend) -> Fga {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        Fga::new(d, g, b)
    }

    #[test]
    fn sum_of_fractions_cancels() {
        for b in [Backend::ADDITIVE, Backend::MULTIPLICATIVE] {
            let f = fga("A2", b);
            let a = f.inv_x(0);
            let s = f.add(&a, &a.neg());
            assert!(s.is_zero());
            // 1/x + 1/x_{-a}: additive gives 0, multiplicative gives 1
            let t = f.add(&f.inv_x(0), &f.inv_x(f.datum().negate(0)));
            let expect = if b.law == Law::Additive { QElem::zero() } else { QElem::one() };
            assert!(f.eq(&t, &expect), "{:?}", t);
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = fga("B2", Backend::MULTIPLICATIVE_V);
        let x = f.mul(&QElem::from_poly(f.x_root(1).clone()), &QElem::from_poly(f.factor_poly(Factor::HatMul(2))));
        let x = f.mul(&x, &QElem::from_poly(Poly::term(Mono::var(0, 3), Int::from(-1))));
        let y = f.inv(&x).unwrap();
        assert!(f.eq(&f.mul(&x, &y), &QElem::one()));
        assert!(f.inv(&QElem::from_poly(Poly::int(2))).is_err());
    }

    #[test]
    fn action_is_multiplicative() {
        let f = fga("A2", Backend::MULTIPLICATIVE);
        let a = f.mul(&f.inv_x(0), &QElem::from_poly(f.x_root(2).clone()));
        let b = f.inv_x(1);
        for w in f.group().elements() {
            let lhs = f.act(w, &f.mul(&a, &b));
            let rhs = f.mul(&f.act(w, &a), &f.act(w, &b));
            assert!(f.eq(&lhs, &rhs));
        }
    }

    #[test]
    fn json_round_trip() {
        let f = fga("A2", Backend::ADDITIVE_H);
        let a = f.mul(&f.inv_x(2), &f.inv_factor(Factor::HatAdd(1)));
        let a = f.mul(&a, &f.inv_x(2));
        let v = f.to_json(&a);
        assert_eq!(f.from_json(&v).unwrap(), a);
    }
}
