use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expr;
use crate::fga::{Factor, Fga, Law, Poly, QElem};
use crate::root_system::RootId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Demazure elements `(1/x_a)(1 - delta_a)`.
    X,
    /// Push-pull elements `1/x_{-a} + (1/x_a) delta_a`.
    Y,
    /// Degenerate Hecke generators `-h/a + ((h-a)/a) delta_a`.
    T,
    /// Affine Hecke generators `(q-1)/(1-e^a) + ((1-q e^{-a})/(1-e^a)) delta_a`.
    TauMinus,
    Custom,
}

/// Root-indexed coefficients `a_beta`, `b_beta` for every root of the datum.
#[derive(Clone, Debug)]
pub struct Family {
    pub kind: FamilyKind,
    pub name: String,
    a: Vec<QElem>,
    b: Vec<QElem>,
    b_inv: Vec<QElem>,
}

#[derive(Deserialize)]
struct CustomFile {
    name: Option<String>,
    a: String,
    b: String,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Family {
    pub fn new(fga: &Fga, kind: FamilyKind) -> Result<Family> {
        let d = fga.datum();
        let n = d.roots().len();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let name = match kind {
            FamilyKind::X => "x",
            FamilyKind::Y => "y",
            FamilyKind::T => "t",
            FamilyKind::TauMinus => "tau",
            FamilyKind::Custom => return Err(Error::Config("custom families need coefficient expressions".into())),
        };
        match kind {
            FamilyKind::T if !(fga.law() == Law::Additive && fga.backend().h) => {
                return Err(Error::Backend("the T family requires the additive law with h".into()))
            }
            FamilyKind::TauMinus if !(fga.law() == Law::Multiplicative && fga.backend().v) => {
                return Err(Error::Backend("the tau family requires the multiplicative law with v".into()))
            }
            _ => {}
        }
        for r in 0..n {
            let neg = d.negate(r);
            let (ar, br) = match kind {
                FamilyKind::X => (fga.inv_x(r), fga.inv_x(r).neg()),
                FamilyKind::Y => (fga.inv_x(neg), fga.inv_x(r)),
                FamilyKind::T => {
                    let inv = fga.inv_x(r);
                    let a = fga.mul_poly(&inv, &fga.h()?.neg());
                    let b = fga.mul_poly(&inv, &fga.factor_poly(Factor::HatAdd(r)));
                    (a, b)
                }
                FamilyKind::TauMinus => {
                    let inv = fga.inv_x(neg);
                    let a = fga.mul_poly(&inv, &fga.q()?.sub(&Poly::one()));
                    let b = fga.mul_poly(&inv, &fga.factor_poly(Factor::HatMul(r)));
                    (a, b)
                }
                FamilyKind::Custom => unreachable!(),
            };
            a.push(ar);
            b.push(br);
        }
        Family::finish(fga, kind, name.into(), a, b, false)
    }

    /// A family given by expressions in the root symbol `r`; equivariance is checked exactly.
    pub fn custom(fga: &Fga, name: &str, a_src: &str, b_src: &str) -> Result<Family> {
        let n = fga.datum().roots().len();
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for r in 0..n {
            a.push(expr::eval(fga, a_src, Some(r))?);
            b.push(expr::eval(fga, b_src, Some(r))?);
        }
        Family::finish(fga, FamilyKind::Custom, name.into(), a, b, true)
    }

    /// JSON `{"name": .., "a": "<expr in r>", "b": "<expr in r>"}`.
    pub fn from_json(fga: &Fga, json: &str) -> Result<Family> {
        let file: CustomFile = serde_json::from_str(json)?;
        Family::custom(fga, file.name.as_deref().unwrap_or("custom"), &file.a, &file.b)
    }

    /// The operators `sigma_a = ((1+a)/a) delta_a - 1/a` (additive law).
    pub fn su(fga: &Fga) -> Result<Family> {
        if fga.law() != Law::Additive {
            return Err(Error::Backend("the sigma family requires the additive law".into()));
        }
        Family::custom(fga, "su", "-1/x[r]", "onep[r]/x[r]")
    }

    /// Parse a CLI token: `x | y | t | tau | su | custom:<file>`.
    pub fn from_token(fga: &Fga, token: &str) -> Result<Family> {
        match token {
            "x" | "X" => Family::new(fga, FamilyKind::X),
            "y" | "Y" => Family::new(fga, FamilyKind::Y),
            "t" | "T" => Family::new(fga, FamilyKind::T),
            "tau" => Family::new(fga, FamilyKind::TauMinus),
            "su" | "sigma" => Family::su(fga),
            _ => match token.strip_prefix("custom:") {
                Some(path) => Family::from_json(fga, &std::fs::read_to_string(path)?),
                None => Err(Error::Config(format!("unknown family `{token}`"))),
            },
        }
    }

    fn finish(fga: &Fga, kind: FamilyKind, name: String, a: Vec<QElem>, b: Vec<QElem>, check: bool) -> Result<Family> {
        let mut b_inv = Vec::with_capacity(b.len());
        for (r, br) in b.iter().enumerate() {
            let inv = fga.inv(br).map_err(|_| {
                Error::Config(format!("b coefficient at root {} is not invertible", fga.datum().root_label(r)))
            })?;
            b_inv.push(inv);
        }
        let fam = Family { kind, name, a, b, b_inv };
        if check {
            fam.check_equivariance(fga)?;
        }
        Ok(fam)
    }

    /// `s_i(a_beta) = a_{s_i beta}` and likewise for `b`, for every simple i and root beta.
    pub fn check_equivariance(&self, fga: &Fga) -> Result<()> {
        let d = fga.datum();
        for i in 0..d.rank() {
            for r in 0..d.roots().len() {
                let t = d.reflect_root(i, r);
                for (what, c) in [("a", &self.a), ("b", &self.b)] {
                    if !fga.eq(&fga.act_simple(i, &c[r]), &c[t]) {
                        return Err(Error::Config(format!(
                            "family `{}` is not W-equivariant: s{}({what}[{}]) != {what}[{}]",
                            self.name,
                            i + 1,
                            d.root_label(r),
                            d.root_label(t)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn a(&self, r: RootId) -> &QElem {
        &self.a[r]
    }

    pub fn b(&self, r: RootId) -> &QElem {
        &self.b[r]
    }

    pub fn b_inv(&self, r: RootId) -> &QElem {
        &self.b_inv[r]
    }

    /// `Z_alpha_i = a + b delta_i`.
    pub fn operator(&self, fga: &Fga, i: usize) -> super::QWElem {
        let r = fga.datum().simple_root(i);
        let mut z = super::QWElem::term(crate::root_system::WeylElement::IDENTITY, self.a[r].clone());
        z.0.insert(fga.group().simple(i), self.b[r].clone());
        z.0.retain(|_, c| !c.is_zero());
        z
    }

    /// Whether `b` coefficients and change-of-basis data are expected to lie in `S`.
    pub fn is_integral(&self) -> bool {
        matches!(self.kind, FamilyKind::X | FamilyKind::Y)
    }
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
    fn builtin_families_are_equivariant() {
        for (b, kinds) in [
            (Backend::ADDITIVE_H, vec![FamilyKind::X, FamilyKind::Y, FamilyKind::T]),
            (Backend::MULTIPLICATIVE_V, vec![FamilyKind::X, FamilyKind::Y, FamilyKind::TauMinus]),
        ] {
            let f = fga("B2", b);
            for k in kinds {
                Family::new(&f, k).unwrap().check_equivariance(&f).unwrap();
            }
        }
    }

    #[test]
    fn backend_mismatch_is_rejected() {
        let f = fga("A2", Backend::MULTIPLICATIVE);
        assert!(matches!(Family::new(&f, FamilyKind::T), Err(Error::Backend(_))));
        assert!(matches!(Family::new(&f, FamilyKind::TauMinus), Err(Error::Backend(_))));
    }

    #[test]
    fn custom_family_checks() {
        let f = fga("A2", Backend::ADDITIVE);
        assert!(Family::su(&f).is_ok());
        // not equivariant: a depends on a fixed root
        assert!(Family::custom(&f, "bad", "x[1]", "1").is_err());
        // b not invertible
        assert!(Family::custom(&f, "bad", "0", "2").is_err());
    }
}
