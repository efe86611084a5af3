//! Sparse multivariate Laurent polynomials over [`Int`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::int::Int;

pub const MAX_VARS: usize = 8;

/// Exponent vector. Lexicographic order is the monomial order used by division.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub [i16; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn var(i: usize, e: i16) -> Mono {
        let mut m = [0; MAX_VARS];
        m[i] = e;
        Mono(m)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Mono(m)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a -= *b;
        }
        Mono(m)
    }

    pub fn inv(&self) -> Mono {
        Mono::ONE.div(self)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }
}

/// Terms sorted by monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Poly {
        Poly::term(Mono::ONE, c)
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Int::from(c))
    }

    pub fn term(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(i: usize) -> Poly {
        Poly::term(Mono::var(i, 1), Int::ONE)
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(mut terms: Vec<(Mono, Int)>) -> Poly {
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, Int)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.as_slice() {
            [] => Some(Int::ZERO),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// `±monomial`, the units of a Laurent ring over the integers.
    pub fn as_unit(&self) -> Option<(bool, Mono)> {
        match self.terms.as_slice() {
            [(m, c)] if c.abs().is_one() => Some((c.is_negative(), *m)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Int)> {
        self.terms.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (*m, d * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Poly {
                terms: other.terms.iter().map(|(n, d)| (n.mul(m), c * d)).collect(),
            };
        }
        if other.terms.len() == 1 {
            return other.mul(self);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                terms.push((m.mul(n), c * d));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_mono(&self) -> Mono {
        let mut m = [i16::MAX; MAX_VARS];
        for (n, _) in &self.terms {
            for (a, b) in m.iter_mut().zip(n.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            Mono::ONE
        } else {
            Mono(m)
        }
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.0.iter().any(|&e| e < 0))
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let (m, c) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (n, e) in &self.terms {
                terms.push((n.div(m), e.div_exact(c)?));
            }
            return Some(Poly { terms });
        }
        let pm = self.min_mono();
        let dm = d.min_mono();
        let p0 = self.mul_mono(&pm.inv());
        let d0 = d.mul_mono(&dm.inv());
        let (lm, lc) = d0.leading().cloned()?;
        let mut rem: BTreeMap<Mono, Int> = p0.terms.into_iter().collect();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            if !lm.divides(&rm) {
                return None;
            }
            let qc = rc.div_exact(&lc)?;
            let qm = rm.div(&lm);
            for (m, c) in &d0.terms {
                let key = m.mul(&qm);
                let delta = c * &qc;
                let entry = rem.entry(key).or_insert(Int::ZERO);
                *entry = &*entry - &delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        let shift = pm.div(&dm);
        Some(Poly::from_terms(quot).mul_mono(&shift))
    }

    /// Exact quotient in the ordinary polynomial ring.
    pub fn div_exact_poly(&self, d: &Poly) -> Option<Poly> {
        let q = self.div_exact(d)?;
        if q.has_negative_exponent() && !self.has_negative_exponent() && !d.has_negative_exponent() {
            return None;
        }
        Some(q)
    }

    /// Apply a monomial map (a lattice automorphism on exponents).
    pub fn map_monos(&self, f: impl Fn(&Mono) -> Mono) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect())
    }

    /// Substitute `var i -> images[i]` for every `Some` entry. Exponents of substituted
    /// variables must be nonnegative.
    pub fn substitute(&self, images: &[Option<Poly>]) -> Poly {
        if images.iter().all(|x| x.is_none()) || self.is_zero() {
            return self.clone();
        }
        let mut max_deg = vec![0i16; images.len()];
        for (m, _) in &self.terms {
            for (i, img) in images.iter().enumerate() {
                if img.is_some() {
                    debug_assert!(m.0[i] >= 0, "substitution into a Laurent variable");
                    max_deg[i] = max_deg[i].max(m.0[i]);
                }
            }
        }
        let powers: Vec<Vec<Poly>> = images
            .iter()
            .enumerate()
            .map(|(i, img)| match img {
                Some(p) => {
                    let mut v = vec![Poly::one()];
                    for _ in 0..max_deg[i] {
                        let next = v.last().unwrap().mul(p);
                        v.push(next);
                    }
                    v
                }
                None => Vec::new(),
            })
            .collect();
        let mut acc: Vec<(Mono, Int)> = Vec::new();
        for (m, c) in &self.terms {
            let mut rest = *m;
            let mut factor = Poly::constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                if img.is_some() && m.0[i] != 0 {
                    rest.0[i] = 0;
                    factor = factor.mul(&powers[i][m.0[i] as usize]);
                }
            }
            for (n, d) in factor.terms {
                acc.push((n.mul(&rest), d));
            }
        }
        Poly::from_terms(acc)
    }

    /// Render with the given variable names, e.g. `2*t1^2*h - 3`.
    pub fn pretty(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(i).copied().unwrap_or("?");
                if e == 1 {
                    factors.push(name.to_string());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            if factors.is_empty() {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn arithmetic_basics() {
        let p = t(0).add(&t(1));
        let q = t(0).sub(&t(1));
        let prod = p.mul(&q);
        let expect = t(0).mul(&t(0)).sub(&t(1).mul(&t(1)));
        assert_eq!(prod, expect);
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn exact_division_linear() {
        let a = t(0).scale(&Int::from(2)).sub(&t(1));
        let b = t(1).add(&t(2));
        let prod = a.mul(&b).mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.mul(&b)));
        assert_eq!(prod.div_exact(&b), Some(a.mul(&b)));
        assert_eq!(t(0).add(&t(1)).div_exact_poly(&t(0)), None);
        assert!(t(0).add(&t(1)).div_exact(&t(0)).is_some());
        // non-primitive divisor with non-integral quotient
        assert_eq!(t(0).div_exact(&t(0).scale(&Int::from(2))), None);
    }

    #[test]
    fn exact_division_laurent() {
        // 1 - y^{-2} = (1 - y^{-1})(1 + y^{-1})
        let y_inv = Poly::term(Mono::var(0, -1), Int::ONE);
        let f = Poly::one().sub(&y_inv);
        let g = Poly::one().add(&y_inv);
        let p = f.mul(&g);
        assert_eq!(p.div_exact(&f), Some(g.clone()));
        assert_eq!(p.div_exact(&g), Some(f.clone()));
        let not = Poly::one().add(&y_inv.mul(&y_inv));
        assert_eq!(not.div_exact(&f), None);
    }

    #[test]
    fn substitution() {
        // t0 -> t0 - t1 applied to t0^2 t1
        let p = t(0).mul(&t(0)).mul(&t(1));
        let img = vec![Some(t(0).sub(&t(1))), None];
        let got = p.substitute(&img);
        let l = t(0).sub(&t(1));
        assert_eq!(got, l.mul(&l).mul(&t(1)));
    }

    #[test]
    fn pretty_print() {
        let p = t(0).scale(&Int::from(-2)).add(&Poly::int(3));
        assert_eq!(p.pretty(&["t1", "t2"]), "-2*t1 + 3");
    }
}
