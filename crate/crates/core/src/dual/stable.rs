use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fga::{Factor, Fga, QElem};
use crate::report::DiscrepancyReport;
use crate::root_system::{WeylElement, Word};
use crate::twisted::{compose_word, Family, FamilyKind, LeibnizTable, QWElem, WordPolicy, ZBasis};

use super::DualElem;

/// Coordinates of `g` in a basis `{s_w}` with `s_w(x) = 0` unless `x >= w`, solved in order of
/// increasing length. Anything left over is a consistency failure.
pub fn expand_triangular(fga: &Fga, basis: &[DualElem], g: &DualElem) -> Result<Vec<QElem>> {
    let grp = fga.group();
    let mut coeffs: Vec<QElem> = Vec::with_capacity(basis.len());
    for x in grp.elements() {
        let mut rest = g.coeff(x);
        for (w, t) in coeffs.iter().enumerate() {
            if !t.is_zero() {
                rest = fga.sub(&rest, &fga.mul(t, &basis[w].coeff(x)));
            }
        }
        let diag = basis[x.0].coeff(x);
        if rest.is_zero() {
            coeffs.push(QElem::zero());
        } else {
            coeffs.push(fga.div(&rest, &diag)?);
        }
    }
    let mut back = DualElem::zero();
    for (w, t) in coeffs.iter().enumerate() {
        back = fga.dual_add(&back, &fga.dual_scale(t, &basis[w]));
    }
    if !fga.dual_eq(&back, g) {
        return Err(Error::Consistency("element is not in the span of the triangular basis".into()));
    }
    Ok(coeffs)
}

fn require(fga: &Fga, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Backend(format!("{what} needs backend {}", fga.backend())))
    }
}

/// `(Z_{i_1} ... Z_{i_k})^{-1}` for the quadratic `tau` family, built from
/// `tau_i^{-1} = (tau_i - (q - 1)) / q`.
pub fn tau_inverse(fga: &Fga, fam: &Family, word: &Word) -> Result<QWElem> {
    if fam.kind != FamilyKind::TauMinus {
        return Err(Error::Config("inverse operators are only built for the tau family".into()));
    }
    let q = fga.poly(fga.q()?);
    let qm1 = fga.sub(&q, &QElem::one());
    let qinv = fga.inv(&q)?;
    let mut acc = QWElem::one();
    for &i in &word.0 {
        let t = fam.operator(fga, i);
        let inv = fga.qw_scale(&qinv, &fga.qw_sub(&t, &QWElem::term(WeylElement::IDENTITY, qm1.clone())));
        acc = fga.qw_mul(&inv, &acc);
    }
    Ok(acc)
}

fn positive_product(fga: &Fga, f: impl Fn(usize) -> Factor) -> QElem {
    let d = fga.datum();
    let ps: Vec<QElem> = d.positive_roots().map(|r| QElem::from_poly(fga.factor_poly(f(r)))).collect();
    fga.product(&ps)
}

fn sign(l: usize) -> QElem {
    QElem::int(if l % 2 == 0 { 1 } else { -1 })
}

/// Cohomological stable envelopes for the (equivariant, with `h`) additive law, via the
/// `T` operators.
pub struct CohStable {
    pub zb: ZBasis,
    /// `alpha_{w0} = prod_{alpha>0} alpha`.
    pub alpha_w0: QElem,
    /// `hat alpha_{w0} = prod_{alpha>0} (h - alpha)`.
    pub hat_alpha_w0: QElem,
    pub plus: Vec<DualElem>,
    pub minus: Vec<DualElem>,
}

impl CohStable {
    pub fn new(fga: Arc<Fga>) -> Result<CohStable> {
        require(&fga, fga.backend() == crate::fga::Backend::ADDITIVE_H, "the cohomological stable basis")?;
        let fam = Arc::new(Family::new(&fga, FamilyKind::T)?);
        let zb = ZBasis::with_policy(fga.clone(), fam.clone(), &WordPolicy::LexMin)?;
        let g = fga.group().clone();
        let w0 = g.longest();
        let alpha_w0 = positive_product(&fga, Factor::X);
        let hat_alpha_w0 = positive_product(&fga, Factor::HatAdd);
        let sgn = sign(g.length(w0));
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for w in g.elements() {
            let t = compose_word(&fga, &fam, g.reduced_word(g.inverse(w)));
            plus.push(fga.bullet(&t, &DualElem::term(g.identity(), alpha_w0.clone())));
            let t = compose_word(&fga, &fam, g.reduced_word(g.mul(g.inverse(w), w0)));
            let s = fga.bullet(&t, &DualElem::term(w0, alpha_w0.clone()));
            minus.push(fga.dual_scale(&sgn, &s));
        }
        Ok(CohStable { zb, alpha_w0, hat_alpha_w0, plus, minus })
    }

    pub fn fga(&self) -> &Arc<Fga> {
        self.zb.fga()
    }

    /// `hat Y . g` with `hat Y = sum_w w(1/(alpha_{w0} hat alpha_{w0})) delta_w`; returns the
    /// scalar when the result is a multiple of the unit class.
    pub fn hat_y_pairing(&self, g: &DualElem) -> Result<QElem> {
        let fga = self.fga();
        let grp = fga.group();
        let base = fga.inv(&fga.mul(&self.alpha_w0, &self.hat_alpha_w0))?;
        let mut y = QWElem::zero();
        for w in grp.elements() {
            y = fga.qw_add(&y, &QWElem::term(w, fga.act(w, &base)));
        }
        let r = fga.bullet(&y, g);
        let c = r.coeff(grp.identity());
        if !fga.dual_eq(&r, &fga.dual_scale(&c, &fga.dual_one())) {
            return Err(Error::Consistency("pairing is not a multiple of the unit class".into()));
        }
        Ok(c)
    }

    /// `stab^-_w = (-1)^{l(w0)} hat alpha_{w0} T*_w`.
    pub fn check_dual_identity(&self) -> bool {
        let fga = self.fga();
        let g = fga.group();
        let c = fga.mul(&sign(g.length(g.longest())), &self.hat_alpha_w0);
        g.elements().all(|w| fga.dual_eq(&self.minus[w.0], &fga.dual_scale(&c, &self.zb.dual_basis_element(w))))
    }

    /// `stab^-_u stab^-_v = sum_w t^w_{u,v} stab^-_w`, read off directly.
    pub fn constants_oracle(&self, u: WeylElement, v: WeylElement) -> Result<Vec<QElem>> {
        let fga = self.fga();
        expand_triangular(fga, &self.minus, &fga.dual_mul(&self.minus[u.0], &self.minus[v.0]))
    }

    /// `hat alpha_{w0}^2 sum t^{I_w}_{E,F}` over subwords whose ordinary products are `u` and `v`.
    pub fn constant_formula(&self, u: WeylElement, v: WeylElement, w: WeylElement) -> QElem {
        let fga = self.fga();
        let s = leibniz_by_products(&self.zb, u, v, w);
        fga.mul(&fga.pow(&self.hat_alpha_w0, 2), &s)
    }

    /// The same sum normalized through the dual identity: `(-1)^{l(w0)} hat alpha_{w0} sum t`.
    pub fn constant_normalized(&self, u: WeylElement, v: WeylElement, w: WeylElement) -> QElem {
        let fga = self.fga();
        let g = fga.group();
        let s = leibniz_by_products(&self.zb, u, v, w);
        fga.mul(&fga.mul(&sign(g.length(g.longest())), &self.hat_alpha_w0), &s)
    }

    /// Oracle values for one pair, with every disagreement of the literal formula recorded.
    pub fn constants(&self, u: WeylElement, v: WeylElement, report: &mut DiscrepancyReport) -> Result<Vec<QElem>> {
        let fga = self.fga();
        let g = fga.group();
        let oracle = self.constants_oracle(u, v)?;
        for w in g.elements() {
            let f = self.constant_formula(u, v, w);
            if !fga.eq(&f, &oracle[w.0]) {
                report.push(
                    "cohomological stable basis",
                    format!("u={} v={} w={}", g.format(u), g.format(v), g.format(w)),
                    fga.pretty(&f),
                    fga.pretty(&oracle[w.0]),
                );
            }
        }
        Ok(oracle)
    }
}

/// `sum z^{I_w}_{E,F}` over `E`, `F` with ordinary products `u`, `v`.
fn leibniz_by_products(zb: &ZBasis, u: WeylElement, v: WeylElement, w: WeylElement) -> QElem {
    let fga = zb.fga();
    let g = fga.group();
    let word = zb.word(w);
    let n = 1u32 << word.len();
    let es: Vec<u32> = (0..n).filter(|&e| g.product(&word.restrict(e)) == u).collect();
    let fs: Vec<u32> = (0..n).filter(|&f| g.product(&word.restrict(f)) == v).collect();
    let mut table = LeibnizTable::new(fga, zb.family(), word);
    let mut terms = Vec::new();
    for &e in &es {
        for &f in &fs {
            terms.push(table.coefficient(e, f));
        }
    }
    fga.sum(&terms)
}

/// K-theoretic stable basis for the multiplicative law with `q^(1/2) = v`, via the `tau` operators.
pub struct KStable {
    pub zb: ZBasis,
    /// `hat x_{w0} = prod_{alpha>0} (1 - q e^{-alpha})`.
    pub hat_x_w0: QElem,
    pub minus: Vec<DualElem>,
}

impl KStable {
    pub fn new(fga: Arc<Fga>) -> Result<KStable> {
        require(&fga, fga.backend() == crate::fga::Backend::MULTIPLICATIVE_V, "the K-theoretic stable basis")?;
        let fam = Arc::new(Family::new(&fga, FamilyKind::TauMinus)?);
        let zb = ZBasis::with_policy(fga.clone(), fam.clone(), &WordPolicy::LexMin)?;
        let g = fga.group().clone();
        let w0 = g.longest();
        let l0 = g.length(w0) as i16;
        let hat_x_w0 = positive_product(&fga, Factor::HatMul);
        let bottom = DualElem::term(w0, fga.negative_root_product());
        let mut minus = Vec::new();
        for w in g.elements() {
            let inv = tau_inverse(&fga, &fam, g.reduced_word(g.mul(w0, w)))?;
            let s = fga.bullet(&inv, &bottom);
            let scale = fga.poly(fga.v_power(2 * l0 - g.length(w) as i16)?);
            minus.push(fga.dual_scale(&scale, &s));
        }
        Ok(KStable { zb, hat_x_w0, minus })
    }

    pub fn fga(&self) -> &Arc<Fga> {
        self.zb.fga()
    }

    /// `stab^-_w = v^{l(w)} hat x_{w0} tau*_w`.
    pub fn check_dual_identity(&self) -> Result<bool> {
        let fga = self.fga();
        let g = fga.group();
        for w in g.elements() {
            let c = fga.mul(&fga.poly(fga.v_power(g.length(w) as i16)?), &self.hat_x_w0);
            if !fga.dual_eq(&self.minus[w.0], &fga.dual_scale(&c, &self.zb.dual_basis_element(w))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn constants_oracle(&self, u: WeylElement, v: WeylElement) -> Result<Vec<QElem>> {
        let fga = self.fga();
        expand_triangular(fga, &self.minus, &fga.dual_mul(&self.minus[u.0], &self.minus[v.0]))
    }

    /// `v^{l(u)+l(v)-l(w)} hat x_{w0} sum_{E,F} P_{E,F} c_{E,u} c_{F,v}`.
    pub fn constant_formula(&self, u: WeylElement, v: WeylElement, w: WeylElement) -> Result<QElem> {
        let fga = self.fga();
        let g = fga.group();
        let k = g.length(u) as i16 + g.length(v) as i16 - g.length(w) as i16;
        let s = super::constants::structure_constant(&self.zb, u, v, w);
        Ok(fga.mul(&fga.mul(&fga.poly(fga.v_power(k)?), &self.hat_x_w0), &s))
    }

    pub fn constants(&self, u: WeylElement, v: WeylElement, report: &mut DiscrepancyReport) -> Result<Vec<QElem>> {
        let fga = self.fga();
        let g = fga.group();
        let oracle = self.constants_oracle(u, v)?;
        for w in g.elements() {
            let f = self.constant_formula(u, v, w)?;
            if !fga.eq(&f, &oracle[w.0]) {
                report.push(
                    "K-theoretic stable basis",
                    format!("u={} v={} w={}", g.format(u), g.format(v), g.format(w)),
                    fga.pretty(&f),
                    fga.pretty(&oracle[w.0]),
                );
            }
        }
        Ok(oracle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval;
    use crate::fga::Backend;
    use crate::root_system::{Lattice, RootDatum, WeylGroup};

    fn fga(t: &str, b: Backend) -> Arc<Fga> {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        Arc::new(Fga::new(d, g, b))
    }

    #[test]
    fn coh_a2() {
        let st = CohStable::new(fga("A2", Backend::ADDITIVE_H)).unwrap();
        let f = st.fga().clone();
        let g = f.group().clone();
        assert!(st.check_dual_identity());
        let w0sign = QElem::int(-1);
        for u in g.elements() {
            for v in g.elements() {
                let p = st.hat_y_pairing(&f.dual_mul(&st.plus[v.0], &st.minus[u.0])).unwrap();
                let want = if u == v { w0sign.clone() } else { QElem::zero() };
                assert!(f.eq(&p, &want), "{u:?} {v:?} {}", f.pretty(&p));
            }
        }
        let s1 = g.parse("1").unwrap();
        let s12 = g.parse("12").unwrap();
        let w0 = g.longest();
        let o = st.constants_oracle(s1, s1).unwrap();
        eprintln!("t_w0(s1,s1) = {}", f.pretty(&o[w0.0]));
        eprintln!("formula {}", f.pretty(&st.constant_formula(s1, s1, w0)));
        eprintln!("normalized {}", f.pretty(&st.constant_normalized(s1, s1, w0)));
        let o = st.constants_oracle(s1, s12).unwrap();
        eprintln!("t_w0(s1,s12) = {}", f.pretty(&o[w0.0]));
        let _ = eval(&f, "h", None);
    }

    #[test]
    fn k_a2() {
        let st = KStable::new(fga("A2", Backend::MULTIPLICATIVE_V)).unwrap();
        assert!(st.check_dual_identity().unwrap());
        let g = st.fga().group().clone();
        let mut rep = DiscrepancyReport::new();
        for u in g.elements() {
            for v in g.elements() {
                st.constants(u, v, &mut rep).unwrap();
            }
        }
        assert!(rep.is_empty(), "{rep}");
    }
}
