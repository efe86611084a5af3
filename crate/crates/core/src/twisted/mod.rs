//! The twisted group algebra `Q_W`, operator families `Z_a = a_a + b_a delta_a`,
//! change of basis against a fixed family of reduced words, and Leibniz coefficients.

mod basis;
mod family;
mod leibniz;
mod relations;

use std::collections::BTreeMap;

use crate::fga::{Fga, QElem};
use crate::root_system::WeylElement;

pub use basis::{compose_word, WordPolicy, ZBasis};
pub use family::{Family, FamilyKind};
pub use leibniz::{billey_closed_form, check_leibniz_rule, subword_actions, LeibnizTable, StepCase};
pub use relations::{kappa, kappa_pair, verify_relations, RelationCheck};

/// `sum_w c_w delta_w`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QWElem(pub BTreeMap<WeylElement, QElem>);

impl QWElem {
    pub fn zero() -> QWElem {
        QWElem::default()
    }

    pub fn delta(w: WeylElement) -> QWElem {
        QWElem::term(w, QElem::one())
    }

    pub fn one() -> QWElem {
        QWElem::delta(WeylElement::IDENTITY)
    }

    pub fn term(w: WeylElement, c: QElem) -> QWElem {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(w, c);
        }
        QWElem(m)
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
    pub fn qw_add(&self, x: &QWElem, y: &QWElem) -> QWElem {
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
        QWElem(out)
    }

    pub fn qw_sub(&self, x: &QWElem, y: &QWElem) -> QWElem {
        self.qw_add(x, &self.qw_scale(&QElem::int(-1), y))
    }

    /// Left multiplication by a scalar: `p * z`.
    pub fn qw_scale(&self, p: &QElem, z: &QWElem) -> QWElem {
        QWElem(
            z.0.iter()
                .map(|(w, c)| (*w, self.mul(p, c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    /// `(p delta_x)(p' delta_y) = p x(p') delta_{xy}`.
    pub fn qw_mul(&self, x: &QWElem, y: &QWElem) -> QWElem {
        let g = self.group();
        let mut acc: BTreeMap<WeylElement, QElem> = BTreeMap::new();
        for (u, p) in &x.0 {
            for (v, q) in &y.0 {
                let t = self.mul(p, &self.act(*u, q));
                let key = g.mul(*u, *v);
                let s = match acc.get(&key) {
                    Some(d) => self.add(d, &t),
                    None => t,
                };
                acc.insert(key, s);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QWElem(acc)
    }

    /// `(sum c_w delta_w) . p = sum c_w w(p)`.
    pub fn qw_act(&self, z: &QWElem, p: &QElem) -> QElem {
        let terms: Vec<QElem> = z.0.iter().map(|(w, c)| self.mul(c, &self.act(*w, p))).collect();
        self.sum(&terms)
    }

    pub fn qw_eq(&self, x: &QWElem, y: &QWElem) -> bool {
        let keys: std::collections::BTreeSet<_> = x.0.keys().chain(y.0.keys()).collect();
        keys.into_iter().all(|w| self.eq(&x.coeff(*w), &y.coeff(*w)))
    }

    pub fn qw_pretty(&self, z: &QWElem) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.0.iter()
            .map(|(w, c)| format!("[{}] d_{}", self.pretty(c), display_word(&self.group().format(*w))))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `{"<word>": {"num", "den"}}`.
    pub fn qw_to_json(&self, z: &QWElem) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            z.0.iter().map(|(w, c)| (self.group().format(*w), self.to_json(c))).collect();
        serde_json::Value::Object(map)
    }
}

pub(crate) fn display_word(s: &str) -> &str {
    if s.is_empty() {
        "e"
    } else {
        s
    }
}
