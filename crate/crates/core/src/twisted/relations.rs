use super::basis::compose_word;
use super::{Family, FamilyKind, QWElem};
use crate::error::{Error, Result};
use crate::fga::{Fga, Poly, QElem};
use crate::root_system::{Weight, WeylElement, Word};

/// `kappa_lambda = 1/x_lambda + 1/x_{-lambda}`, certified to lie in `S`.
pub fn kappa(fga: &Fga, lambda: &Weight) -> Result<Poly> {
    if lambda.is_zero() {
        return Err(Error::Config("kappa is undefined at the zero weight".into()));
    }
    let x = fga.x_class(lambda);
    let y = fga.x_class(&lambda.neg());
    fga.divide(&x.add(&y), &x.mul(&y))
        .ok_or_else(|| Error::Consistency(format!("kappa does not normalize to S for {lambda}")))
}

/// `kappa_{ab} = 1/(x_{a+b} x_b) - 1/(x_{a+b} x_{-a}) - 1/(x_a x_b)` for simple roots of braid order 3.
pub fn kappa_pair(fga: &Fga, i: usize, j: usize) -> Result<Poly> {
    let d = fga.datum();
    if d.braid_order(i, j) != 3 {
        return Err(Error::Config(format!("simple roots {} and {} do not have braid order 3", i + 1, j + 1)));
    }
    let (a, b) = (d.simple_root(i), d.simple_root(j));
    let ab = d
        .root_id(&d.root(a).weight.add(&d.root(b).weight))
        .ok_or_else(|| Error::Consistency("a + b is not a root".into()))?;
    let t1 = fga.mul(&fga.inv_x(ab), &fga.inv_x(b));
    let t2 = fga.mul(&fga.inv_x(ab), &fga.inv_x(d.negate(a)));
    let t3 = fga.mul(&fga.inv_x(a), &fga.inv_x(b));
    let k = fga.sub(&fga.sub(&t1, &t2), &t3);
    k.as_poly().cloned().ok_or_else(|| Error::Consistency("kappa_ab does not normalize to S".into()))
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
    /// Pretty-printed residual (lhs - rhs) when the check fails.
    pub residual: Option<String>,
}

fn record(fga: &Fga, name: String, lhs: &QWElem, rhs: &QWElem) -> RelationCheck {
    let diff = fga.qw_sub(lhs, rhs);
    let passed = diff.is_zero();
    RelationCheck { name, passed, residual: (!passed).then(|| fga.qw_pretty(&diff)) }
}

/// Quadratic relation per simple root and braid relation per pair of simple roots.
pub fn verify_relations(fga: &Fga, fam: &Family) -> Result<Vec<RelationCheck>> {
    let d = fga.datum();
    let n = d.rank();
    let mut out = Vec::new();
    for i in 0..n {
        let z = fam.operator(fga, i);
        let sq = fga.qw_mul(&z, &z);
        let r = d.simple_root(i);
        let (name, rhs) = match fam.kind {
            FamilyKind::X | FamilyKind::Y => {
                let k = QElem::from_poly(kappa(fga, &d.root(r).weight)?);
                (format!("Z{0}^2 = kappa_{0} Z{0}", i + 1), fga.qw_scale(&k, &z))
            }
            FamilyKind::T => (format!("T{}^2 = 1", i + 1), QWElem::one()),
            FamilyKind::TauMinus => {
                let q = QElem::from_poly(fga.q()?);
                let qm1 = fga.sub(&q, &QElem::one());
                (format!("tau{0}^2 = (q-1) tau{0} + q", i + 1), fga.qw_add(&fga.qw_scale(&qm1, &z), &QWElem::term(WeylElement::IDENTITY, q)))
            }
            FamilyKind::Custom => {
                // Z^2 = lambda + mu Z with mu = a + s(a), lambda = a^2 + b s(b) - mu a
                let a = fam.a(r);
                let b = fam.b(r);
                let mu = fga.add(a, &fga.act_simple(i, a));
                let lam = fga.sub(&fga.add(&fga.mul(a, a), &fga.mul(b, &fga.act_simple(i, b))), &fga.mul(&mu, a));
                (
                    format!("Z{}^2 = [{}] + [{}] Z", i + 1, fga.pretty(&lam), fga.pretty(&mu)),
                    fga.qw_add(&fga.qw_scale(&mu, &z), &QWElem::term(WeylElement::IDENTITY, lam)),
                )
            }
        };
        out.push(record(fga, name, &sq, &rhs));
    }
    for i in 0..n {
        for j in i + 1..n {
            let m = d.braid_order(i, j);
            let w1 = Word((0..m).map(|t| if t % 2 == 0 { i } else { j }).collect());
            let w2 = Word((0..m).map(|t| if t % 2 == 0 { j } else { i }).collect());
            let lhs = compose_word(fga, fam, &w1);
            let rhs = compose_word(fga, fam, &w2);
            out.push(record(fga, format!("braid {} = {}", w1, w2), &lhs, &rhs));
        }
    }
    Ok(out)
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
    fn kappa_values() {
        let a = fga("A2", Backend::ADDITIVE);
        let m = fga("A2", Backend::MULTIPLICATIVE);
        let lam = Weight(vec![1, 3]);
        assert!(kappa(&a, &lam).unwrap().is_zero());
        assert!(kappa(&m, &lam).unwrap().is_one());
        assert!(kappa_pair(&a, 0, 1).unwrap().is_zero());
        assert!(kappa_pair(&m, 0, 1).unwrap().is_zero());
        assert!(kappa_pair(&m, 1, 0).unwrap().is_zero());
    }

    #[test]
    fn relations_hold_for_builtins() {
        for (t, b, kinds) in [
            ("A2", Backend::ADDITIVE_H, vec![FamilyKind::X, FamilyKind::Y, FamilyKind::T]),
            ("B2", Backend::MULTIPLICATIVE_V, vec![FamilyKind::X, FamilyKind::Y, FamilyKind::TauMinus]),
            ("G2", Backend::ADDITIVE, vec![FamilyKind::X]),
        ] {
            let f = fga(t, b);
            for k in kinds {
                let fam = Family::new(&f, k).unwrap();
                for c in verify_relations(&f, &fam).unwrap() {
                    assert!(c.passed, "{t} {k:?} {}: {:?}", c.name, c.residual);
                }
            }
        }
    }
}
