//! The dual module `Q_W^*` with its `f_w` basis: bullet action, fixed-point classes,
//! dual bases, structure constants (closed formula and direct oracle), restriction matrices,
//! parabolic products and stable bases.

mod constants;
mod restriction;
mod stable;

use std::collections::BTreeMap;

use crate::fga::{Fga, QElem};
use crate::root_system::WeylElement;
use crate::twisted::{QWElem, ZBasis};

pub use constants::{oracle_row, structure_constant, structure_row, Provenance, StructureEntry, StructureTable};
pub use restriction::{parabolic_row, restriction_by_leibniz, restriction_coefficient, restriction_independence, restriction_matrix_check, MatrixCheck};
pub use stable::{expand_triangular, tau_inverse, CohStable, KStable};

/// `sum_w c_w f_w`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualElem(pub BTreeMap<WeylElement, QElem>);

impl DualElem {
    pub fn zero() -> DualElem {
        DualElem::default()
    }

    pub fn f(w: WeylElement) -> DualElem {
        DualElem::term(w, QElem::one())
    }

    pub fn term(w: WeylElement, c: QElem) -> DualElem {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(w, c);
        }
        DualElem(m)
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (WeylElement, QElem)>) -> DualElem {
        DualElem(coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn coeff(&self, w: WeylElement) -> QElem {
        self.0.get(&w).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = WeylElement> + '_ {
        self.0.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl Fga {
    /// The unit `1 = sum_w f_w`.
    pub fn dual_one(&self) -> DualElem {
        DualElem::from_coeffs(self.group().elements().map(|w| (w, QElem::one())))
    }

    pub fn dual_add(&self, x: &DualElem, y: &DualElem) -> DualElem {
        let mut out = x.0.clone();
        for (w, c) in &y.0 {
            let s = match out.get(w) {
                Some(d) => self.add(d, c),
                None => c.clone(),
            };
            if s.is_zero() {
                out.remove(w);
            } else {
                out.insert(*w, s);
            }
        }
        DualElem(out)
    }

    pub fn dual_scale(&self, p: &QElem, x: &DualElem) -> DualElem {
        DualElem::from_coeffs(x.0.iter().map(|(w, c)| (*w, self.mul(p, c))))
    }

    /// Coefficient-wise product: `f_u f_v = delta_{u,v} f_u`.
    pub fn dual_mul(&self, x: &DualElem, y: &DualElem) -> DualElem {
        DualElem::from_coeffs(x.0.iter().filter_map(|(w, c)| y.0.get(w).map(|d| (*w, self.mul(c, d)))))
    }

    pub fn dual_eq(&self, x: &DualElem, y: &DualElem) -> bool {
        let keys: std::collections::BTreeSet<_> = x.0.keys().chain(y.0.keys()).collect();
        keys.into_iter().all(|w| self.eq(&x.coeff(*w), &y.coeff(*w)))
    }

    /// `<f, z>` for `f = sum c_w f_w`, `z = sum q_w delta_w`: `sum_w q_w c_w`.
    pub fn pairing(&self, f: &DualElem, z: &QWElem) -> QElem {
        let terms: Vec<QElem> = z.0.iter().filter_map(|(w, q)| f.0.get(w).map(|c| self.mul(q, c))).collect();
        self.sum(&terms)
    }

    /// `p delta_w . (q f_v) = q (v w^{-1})(p) f_{v w^{-1}}`, extended bilinearly.
    ///
    /// This realizes `<z . f, z'> = <f, z' z>` and composes as a left action:
    /// `(z1 z2) . f = z1 . (z2 . f)`.
    pub fn bullet(&self, z: &QWElem, f: &DualElem) -> DualElem {
        let g = self.group();
        let mut acc: BTreeMap<WeylElement, QElem> = BTreeMap::new();
        for (w, p) in &z.0 {
            let winv = g.inverse(*w);
            for (v, q) in &f.0 {
                let x = g.mul(*v, winv);
                let t = self.mul(q, &self.act(x, p));
                let e = acc.entry(x).or_default();
                *e = self.add(e, &t);
            }
        }
        DualElem::from_coeffs(acc)
    }

    /// `prod_{alpha<0} x_alpha`.
    pub fn negative_root_product(&self) -> QElem {
        let d = self.datum();
        let polys: Vec<QElem> = d.negative_roots().map(|r| QElem::from_poly(self.x_root(r).clone())).collect();
        self.product(&polys)
    }

    /// `pt_w = (prod_{alpha<0} x_alpha) . f_w = w(prod_{alpha<0} x_alpha) f_w`.
    pub fn pt(&self, w: WeylElement) -> DualElem {
        DualElem::term(w, self.act(w, &self.negative_root_product()))
    }

    pub fn dual_pretty(&self, x: &DualElem) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.0.iter()
            .map(|(w, c)| format!("[{}] f_{}", self.pretty(c), crate::twisted::display_word(&self.group().format(*w))))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl ZBasis {
    /// `Z*_{I_w} = sum_u b_{u, I_w} f_u`.
    pub fn dual_basis_element(&self, w: WeylElement) -> DualElem {
        DualElem::from_coeffs(self.group().elements().map(|u| (u, self.b_coeff(u, w).clone())))
    }

    /// `zeta_I = Z_{I^rev} . pt_e`.
    pub fn bott_samelson_class(&self, word: &crate::root_system::Word) -> DualElem {
        let fga = self.fga();
        let z = crate::twisted::compose_word(fga, self.family(), &word.reversed());
        fga.bullet(&z, &fga.pt(WeylElement::IDENTITY))
    }

    /// Coordinates of `g` in the `{Z*_{I_w}}` basis: `<g, Z_{I_w}>`.
    pub fn dual_coords(&self, g: &DualElem) -> Vec<QElem> {
        self.group().elements().map(|w| self.fga().pairing(g, self.z(w))).collect()
    }
}
