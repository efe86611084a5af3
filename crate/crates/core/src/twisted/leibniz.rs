use std::collections::HashMap;

use super::Family;
use crate::error::Result;
use crate::fga::{Fga, QElem};
use crate::root_system::{WeylElement, Word};

/// Position type in the B-operator product for a pair of subsets (E, F).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepCase {
    /// j in both E and F: `(1/b) delta`.
    Both = 0,
    /// j in exactly one: `-(a/b) delta`.
    One = 1,
    /// j in neither: `a + (a^2/b) delta`.
    Neither = 2,
}

impl StepCase {
    pub fn of(j: usize, e: u32, f: u32) -> StepCase {
        match (e >> j & 1, f >> j & 1) {
            (1, 1) => StepCase::Both,
            (0, 0) => StepCase::Neither,
            _ => StepCase::One,
        }
    }
}

/// Leibniz coefficients `z^I_{E,F} = (B_1 ... B_k) . 1` for a fixed sequence `I`, memoized on
/// suffixes: positions sharing the same tail of case codes share the partial product.
pub struct LeibnizTable<'a> {
    fga: &'a Fga,
    word: Word,
    /// Per simple root: (a, 1/b, -a/b, a^2/b).
    coeffs: Vec<[QElem; 4]>,
    memo: HashMap<(usize, u64), QElem>,
}

impl<'a> LeibnizTable<'a> {
    pub fn new(fga: &'a Fga, fam: &Family, word: &Word) -> LeibnizTable<'a> {
        let d = fga.datum();
        let coeffs = (0..d.rank())
            .map(|i| {
                let r = d.simple_root(i);
                let a = fam.a(r).clone();
                let binv = fam.b_inv(r).clone();
                let ab = fga.mul(&a, &binv);
                let aab = fga.mul(&a, &ab);
                [a, binv, ab.neg(), aab]
            })
            .collect();
        LeibnizTable { fga, word: word.clone(), coeffs, memo: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `z^I_{E,F}` with E, F as bitmasks over positions `0..k`.
    pub fn coefficient(&mut self, e: u32, f: u32) -> QElem {
        let k = self.word.len();
        let cases: Vec<StepCase> = (0..k).map(|j| StepCase::of(j, e, f)).collect();
        self.suffix(&cases, 0)
    }

    fn suffix(&mut self, cases: &[StepCase], j: usize) -> QElem {
        if j == cases.len() {
            return QElem::one();
        }
        let key: u64 = cases[j..].iter().fold(0u64, |acc, c| acc * 3 + *c as u64);
        if let Some(v) = self.memo.get(&(j, key)) {
            return v.clone();
        }
        let tail = self.suffix(cases, j + 1);
        let i = self.word.0[j];
        let fga = self.fga;
        let [a, binv, neg_ab, aab] = &self.coeffs[i];
        let moved = fga.act_simple(i, &tail);
        let v = match cases[j] {
            StepCase::Both => fga.mul(binv, &moved),
            StepCase::One => fga.mul(neg_ab, &moved),
            StepCase::Neither => fga.add(&fga.mul(a, &tail), &fga.mul(aab, &moved)),
        };
        self.memo.insert((j, key), v.clone());
        v
    }
}

/// `(-1)^{k-|E|} prod_{j not in E} m_j prod_j n_j^{-1}` with `m_j`, `n_j` obtained by acting
/// with the prefix `s_{i_1}...s_{i_{j-1}}` on `a_{i_j}`, `b_{i_j}`.
pub fn billey_closed_form(fga: &Fga, fam: &Family, word: &Word, e: u32) -> Result<QElem> {
    let g = fga.group();
    let d = fga.datum();
    let mut prefix = WeylElement::IDENTITY;
    let mut acc = QElem::one();
    for (j, &i) in word.0.iter().enumerate() {
        let r = d.simple_root(i);
        let n = fga.act(prefix, fam.b(r));
        acc = fga.div(&acc, &n)?;
        if e >> j & 1 == 0 {
            let m = fga.act(prefix, fam.a(r));
            acc = fga.mul(&acc, &m).neg();
        }
        prefix = g.right_mul(prefix, i);
    }
    Ok(acc)
}

/// `Z_{I|_E} . p` for every subset E of positions, indexed by mask.
pub fn subword_actions(fga: &Fga, fam: &Family, word: &Word, p: &QElem) -> Vec<QElem> {
    let k = word.len();
    let d = fga.datum();
    let mut out = vec![QElem::zero(); 1 << k];
    out[0] = p.clone();
    for mask in 1u32..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = &out[(mask & (mask - 1)) as usize];
        let i = word.0[low];
        let r = d.simple_root(i);
        let v = fga.add(&fga.mul(fam.a(r), rest), &fga.mul(fam.b(r), &fga.act_simple(i, rest)));
        out[mask as usize] = v;
    }
    out
}

/// Checks `Z_I . (pq) = sum_{E,F} z^I_{E,F} (Z_{I|_E} . p)(Z_{I|_F} . q)` exactly.
pub fn check_leibniz_rule(fga: &Fga, fam: &Family, word: &Word, pairs: &[(QElem, QElem)]) -> bool {
    let k = word.len();
    let mut table = LeibnizTable::new(fga, fam, word);
    let n = 1u32 << k;
    let coeffs: Vec<Vec<QElem>> = (0..n).map(|e| (0..n).map(|f| table.coefficient(e, f)).collect()).collect();
    let full = (n - 1) as usize;
    pairs.iter().all(|(p, q)| {
        let pe = subword_actions(fga, fam, word, p);
        let qf = subword_actions(fga, fam, word, q);
        let lhs = subword_actions(fga, fam, word, &fga.mul(p, q))[full].clone();
        // products stay unreduced; `sum` normalizes once over a common denominator
        let mut terms = Vec::new();
        for e in 0..n as usize {
            if pe[e].is_zero() {
                continue;
            }
            let mut inner = Vec::new();
            for f in 0..n as usize {
                if !qf[f].is_zero() && !coeffs[e][f].is_zero() {
                    inner.push(fga.mul_unreduced(&coeffs[e][f], &qf[f]));
                }
            }
            terms.push(fga.mul_unreduced(&pe[e], &fga.sum(&inner)));
        }
        fga.eq(&lhs, &fga.sum(&terms))
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::expr::eval;
    use crate::fga::Backend;
    use crate::root_system::{Lattice, RootDatum, WeylGroup};
    use crate::twisted::FamilyKind;

    fn fga(t: &str, b: Backend) -> Fga {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        Fga::new(d, g, b)
    }

    fn mask(positions: &[usize]) -> u32 {
        positions.iter().map(|p| 1u32 << (p - 1)).sum()
    }

    #[test]
    fn x_family_restriction_terms() {
        for b in [Backend::ADDITIVE, Backend::MULTIPLICATIVE] {
            let f = fga("A2", b);
            let fam = Family::new(&f, FamilyKind::X).unwrap();
            let w: Word = "121".parse().unwrap();
            let mut t = LeibnizTable::new(&f, &fam, &w);
            let full = mask(&[1, 2, 3]);
            let e = |s: &str| eval(&f, s, None).unwrap();
            assert!(f.eq(&t.coefficient(full, mask(&[1])), &e("-x[1]")));
            assert!(f.eq(&t.coefficient(full, mask(&[3])), &e("-x[2]")));
            assert!(f.eq(&t.coefficient(full, mask(&[1, 3])), &e("x[1]*x[2]")));
            let mut empty = LeibnizTable::new(&f, &fam, &Word::empty());
            assert_eq!(empty.coefficient(0, 0), QElem::one());
        }
    }

    #[test]
    fn y_family_small_sum() {
        let f = fga("A2", Backend::ADDITIVE);
        let fam = Family::new(&f, FamilyKind::Y).unwrap();
        let w: Word = "121".parse().unwrap();
        let mut t = LeibnizTable::new(&f, &fam, &w);
        let s = f.add(&t.coefficient(mask(&[1]), mask(&[1, 2])), &t.coefficient(mask(&[3]), mask(&[1, 2])));
        assert_eq!(s, QElem::one());
    }

    #[test]
    fn billey_matches_b_product() {
        let f = fga("B2", Backend::MULTIPLICATIVE);
        for k in [FamilyKind::X, FamilyKind::Y] {
            let fam = Family::new(&f, k).unwrap();
            let w: Word = "1212".parse().unwrap();
            let mut t = LeibnizTable::new(&f, &fam, &w);
            for e in 0..16 {
                let closed = billey_closed_form(&f, &fam, &w, e).unwrap();
                assert!(f.eq(&closed, &t.coefficient(15, e)));
                assert!(f.eq(&closed, &t.coefficient(e, 15)));
            }
        }
    }

    #[test]
    fn leibniz_rule_small() {
        let f = fga("A2", Backend::MULTIPLICATIVE);
        let fam = Family::new(&f, FamilyKind::X).unwrap();
        let p = eval(&f, "x[1]*x[2] + 3", None).unwrap();
        let q = eval(&f, "x[1+2] - 2*x[1]", None).unwrap();
        for w in ["1", "12", "121", "1121"] {
            assert!(check_leibniz_rule(&f, &fam, &w.parse().unwrap(), &[(p.clone(), q.clone())]));
        }
    }
}
