use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fga::{Fga, QElem};
use crate::report::DiscrepancyReport;
use crate::root_system::WeylElement;
use crate::twisted::{LeibnizTable, ZBasis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Oracle,
}

#[derive(Clone, Debug)]
pub struct StructureEntry {
    pub u: WeylElement,
    pub v: WeylElement,
    pub w: WeylElement,
    pub value: QElem,
}

/// Nonzero structure constants `Z*_{I_u} Z*_{I_v} = sum_w z^{I_w}_{u,v} Z*_{I_w}`.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub provenance: Provenance,
    pub entries: Vec<StructureEntry>,
}

impl StructureTable {
    /// All pairs (or the given ones), computed in parallel and merged in sorted order.
    pub fn compute(zb: &ZBasis, provenance: Provenance, pairs: Option<Vec<(WeylElement, WeylElement)>>) -> Result<StructureTable> {
        let g = zb.group();
        let pairs = pairs.unwrap_or_else(|| g.elements().flat_map(|u| g.elements().map(move |v| (u, v))).collect());
        let rows: Vec<Result<Vec<StructureEntry>>> = match provenance {
            // one Leibniz table per w, shared across all pairs below it
            Provenance::Formula => g
                .elements()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&w| {
                    let mut terms = WordTerms::new(zb, w);
                    Ok(pairs
                        .iter()
                        .filter(|&&(u, v)| g.bruhat_leq(u, w) && g.bruhat_leq(v, w))
                        .map(|&(u, v)| StructureEntry { u, v, w, value: terms.constant(u, v) })
                        .filter(|e| !e.value.is_zero())
                        .collect())
                })
                .collect(),
            Provenance::Oracle => pairs
                .par_iter()
                .map(|&(u, v)| Ok(oracle_row(zb, u, v)?.into_iter().map(|(w, value)| StructureEntry { u, v, w, value }).collect()))
                .collect(),
        };
        let mut entries = Vec::new();
        for r in rows {
            entries.extend(r?);
        }
        entries.sort_by_key(|e| (e.u, e.v, e.w));
        Ok(StructureTable { provenance, entries })
    }

    pub fn get(&self, u: WeylElement, v: WeylElement, w: WeylElement) -> QElem {
        self.entries
            .iter()
            .find(|e| e.u == u && e.v == v && e.w == w)
            .map(|e| e.value.clone())
            .unwrap_or_default()
    }
}

impl StructureTable {
    /// JSON array of `{u, v, w, family, backend, value}` records, words as in the basis.
    pub fn to_json(&self, zb: &ZBasis) -> serde_json::Value {
        let fga = zb.fga();
        let rank = zb.group().rank();
        let family = zb.family().name.clone();
        let backend = fga.backend().to_string();
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "u": zb.word(e.u).format(rank),
                        "v": zb.word(e.v).format(rank),
                        "w": zb.word(e.w).format(rank),
                        "family": family,
                        "backend": backend,
                        "value": fga.to_json(&e.value),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(zb: &ZBasis, provenance: Provenance, v: &serde_json::Value) -> Result<StructureTable> {
        let fga = zb.fga();
        let g = zb.group();
        let bad = || Error::Config("malformed structure table".into());
        let elem = |r: &serde_json::Value, k: &str| -> Result<WeylElement> {
            let s = r.get(k).and_then(|x| x.as_str()).ok_or_else(bad)?;
            g.parse(s)
        };
        let mut entries = Vec::new();
        for r in v.as_array().ok_or_else(bad)? {
            entries.push(StructureEntry {
                u: elem(r, "u")?,
                v: elem(r, "v")?,
                w: elem(r, "w")?,
                value: fga.from_json(r.get("value").ok_or_else(bad)?)?,
            });
        }
        Ok(StructureTable { provenance, entries })
    }

    /// One product per line: `Z*_u Z*_v : [w] value`.
    pub fn to_text(&self, zb: &ZBasis) -> String {
        let fga = zb.fga();
        let rank = zb.group().rank();
        let show = |w: WeylElement| crate::twisted::display_word(&zb.word(w).format(rank)).to_string();
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} * {} -> {} : {}\n", show(e.u), show(e.v), show(e.w), fga.pretty(&e.value)));
        }
        out
    }

    /// Every `(u, v, w)` where the two tables disagree (missing entries count as zero).
    pub fn diff(&self, other: &StructureTable, zb: &ZBasis) -> DiscrepancyReport {
        let fga = zb.fga();
        let g = zb.group();
        let mut keys: Vec<(WeylElement, WeylElement, WeylElement)> =
            self.entries.iter().chain(&other.entries).map(|e| (e.u, e.v, e.w)).collect();
        keys.sort();
        keys.dedup();
        let mut rep = DiscrepancyReport::new();
        for (u, v, w) in keys {
            let (a, b) = (self.get(u, v, w), other.get(u, v, w));
            if !fga.eq(&a, &b) {
                rep.push(
                    &format!("structure constants, family {}", zb.family().name),
                    format!("u={} v={} w={}", g.format(u), g.format(v), g.format(w)),
                    fga.pretty(&a),
                    fga.pretty(&b),
                );
            }
        }
        rep
    }
}

/// Leibniz table of `I_w` together with the expansions `c_{I_w|E, *}` of all its subwords,
/// shared by every pair `(u, v)` below `w`.
pub(crate) struct WordTerms<'a> {
    zb: &'a ZBasis,
    table: LeibnizTable<'a>,
    rows: Vec<std::sync::Arc<Vec<QElem>>>,
}

impl<'a> WordTerms<'a> {
    pub(crate) fn new(zb: &'a ZBasis, w: WeylElement) -> WordTerms<'a> {
        let word = zb.word(w);
        let rows = (0..1u32 << word.len()).map(|e| zb.c_row(&word.restrict(e))).collect();
        WordTerms { zb, table: LeibnizTable::new(zb.fga(), zb.family(), word), rows }
    }

    /// `sum_{E,F} z^{I_w}_{E,F} c_{E,u} c_{F,v}`.
    pub(crate) fn constant(&mut self, u: WeylElement, v: WeylElement) -> QElem {
        let fga: &Fga = self.zb.fga();
        let pick = |x: WeylElement| -> Vec<(u32, QElem)> {
            self.rows.iter().enumerate().filter(|(_, r)| !r[x.0].is_zero()).map(|(e, r)| (e as u32, r[x.0].clone())).collect()
        };
        let (left, right) = (pick(u), pick(v));
        let mut terms = Vec::new();
        for (e, ce) in &left {
            for (f, cf) in &right {
                let z = self.table.coefficient(*e, *f);
                if !z.is_zero() {
                    terms.push(fga.mul(&z, &fga.mul(ce, cf)));
                }
            }
        }
        fga.sum(&terms)
    }
}

/// Closed formula: `sum_{E,F} z^{I_w}_{E,F} c_{I_w|E, I_u} c_{I_w|F, I_v}`.
pub fn structure_constant(zb: &ZBasis, u: WeylElement, v: WeylElement, w: WeylElement) -> QElem {
    WordTerms::new(zb, w).constant(u, v)
}

/// Formula route for every `w >= u, v`, nonzero values only.
pub fn structure_row(zb: &ZBasis, u: WeylElement, v: WeylElement) -> Vec<(WeylElement, QElem)> {
    let g = zb.group();
    g.elements()
        .filter(|&w| g.bruhat_leq(u, w) && g.bruhat_leq(v, w))
        .map(|w| (w, structure_constant(zb, u, v, w)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Oracle route: multiply `Z*_{I_u}`, `Z*_{I_v}` coefficient-wise in the `f` basis and read off
/// coordinates against `Z_{I_w}`. Support outside `{w >= u, v}` is a consistency failure.
pub fn oracle_row(zb: &ZBasis, u: WeylElement, v: WeylElement) -> Result<Vec<(WeylElement, QElem)>> {
    let fga = zb.fga();
    let g = zb.group();
    let prod = fga.dual_mul(&zb.dual_basis_element(u), &zb.dual_basis_element(v));
    let coords = zb.dual_coords(&prod);
    let mut out = Vec::new();
    for (w, c) in g.elements().zip(coords) {
        if c.is_zero() {
            continue;
        }
        if !(g.bruhat_leq(u, w) && g.bruhat_leq(v, w)) {
            return Err(Error::Consistency(format!(
                "product of {} and {} has support at {} outside the upper interval",
                g.format(u),
                g.format(v),
                g.format(w)
            )));
        }
        out.push((w, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::expr::eval;
    use crate::fga::Backend;
    use crate::root_system::{Lattice, RootDatum, WeylGroup};
    use crate::twisted::{Family, FamilyKind, WordPolicy};

    fn basis(t: &str, b: Backend, k: FamilyKind) -> ZBasis {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        let f = Arc::new(Fga::new(d, g, b));
        let fam = Arc::new(Family::new(&f, k).unwrap());
        ZBasis::with_policy(f, fam, &WordPolicy::LexMin).unwrap()
    }

    #[test]
    fn a1_table() {
        for b in [Backend::ADDITIVE, Backend::MULTIPLICATIVE] {
            let zb = basis("A1", b, FamilyKind::X);
            let f = zb.fga().clone();
            let s = WeylElement(1);
            let row = structure_row(&zb, s, s);
            assert_eq!(row.len(), 1);
            assert!(f.eq(&row[0].1, &eval(&f, "-x[1]", None).unwrap()));
            let unit = structure_row(&zb, WeylElement::IDENTITY, s);
            assert_eq!(unit, vec![(s, QElem::one())]);
        }
    }

    #[test]
    fn formula_equals_oracle_a2() {
        for b in [Backend::ADDITIVE, Backend::MULTIPLICATIVE] {
            for k in [FamilyKind::X, FamilyKind::Y] {
                let zb = basis("A2", b, k);
                let f = zb.fga().clone();
                let g = zb.group().clone();
                for u in g.elements() {
                    for v in g.elements() {
                        let a = structure_row(&zb, u, v);
                        let o = oracle_row(&zb, u, v).unwrap();
                        assert_eq!(a.len(), o.len(), "{b} {k:?} {u:?} {v:?}");
                        for ((w1, x), (w2, y)) in a.iter().zip(&o) {
                            assert_eq!(w1, w2);
                            assert!(f.eq(x, y));
                        }
                    }
                }
            }
        }
    }
}
