use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::{Family, QWElem};
use crate::error::{Error, Result};
use crate::fga::{Fga, QElem};
use crate::root_system::{WeylElement, WeylGroup, Word};

/// How the fixed reduced word `I_w` is chosen for each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordPolicy {
    LexMin,
    /// J given 0-based.
    JCompatible(Vec<usize>),
    /// One word per element, in element order.
    Explicit(Vec<Word>),
}

impl WordPolicy {
    /// `lexmin`, `jcompat:12` (or `jcompat:1,2`), `file:PATH` (JSON array of words).
    pub fn parse(token: &str, group: &WeylGroup) -> Result<WordPolicy> {
        if token == "lexmin" {
            return Ok(WordPolicy::LexMin);
        }
        if let Some(j) = token.strip_prefix("jcompat:") {
            let w = Word::parse(j, group.rank())?;
            let mut js = w.0;
            js.sort();
            js.dedup();
            return Ok(WordPolicy::JCompatible(js));
        }
        if let Some(path) = token.strip_prefix("file:") {
            let text = std::fs::read_to_string(path)?;
            return WordPolicy::from_json(&text, group);
        }
        Err(Error::Config(format!("unknown word policy `{token}`")))
    }

    pub fn from_json(text: &str, group: &WeylGroup) -> Result<WordPolicy> {
        let list: Vec<String> = serde_json::from_str(text)?;
        let mut words: Vec<Option<Word>> = vec![None; group.order()];
        for s in &list {
            let w = Word::parse(s, group.rank())?;
            if !group.is_reduced(&w) {
                return Err(Error::Config(format!("word `{s}` is not reduced")));
            }
            let e = group.product(&w);
            if words[e.0].replace(w).is_some() {
                return Err(Error::Config(format!("two words given for element `{}`", group.format(e))));
            }
        }
        let words: Option<Vec<Word>> = words.into_iter().collect();
        words.map(WordPolicy::Explicit).ok_or_else(|| Error::Config("word file must give one reduced word per element".into()))
    }

    pub fn words(&self, group: &WeylGroup) -> Vec<Word> {
        match self {
            WordPolicy::LexMin => group.elements().map(|w| group.reduced_word(w).clone()).collect(),
            WordPolicy::JCompatible(j) => group.j_compatible_words(j),
            WordPolicy::Explicit(w) => w.clone(),
        }
    }
}

/// Left multiplication `Z_i * z`, without forming a general product.
pub(crate) fn left_mul_z(fga: &Fga, fam: &Family, i: usize, z: &QWElem) -> QWElem {
    let g = fga.group();
    let r = fga.datum().simple_root(i);
    let (a, b) = (fam.a(r), fam.b(r));
    let mut acc: BTreeMap<WeylElement, QElem> = BTreeMap::new();
    for (w, c) in &z.0 {
        let t = fga.mul(a, c);
        let e = acc.entry(*w).or_default();
        *e = fga.add(e, &t);
        let t = fga.mul(b, &fga.act_simple(i, c));
        let e = acc.entry(g.left_mul(i, *w)).or_default();
        *e = fga.add(e, &t);
    }
    acc.retain(|_, c| !c.is_zero());
    QWElem(acc)
}

/// `Z_I = Z_{i_1} ... Z_{i_k}`; the empty word gives `delta_e`.
pub fn compose_word(fga: &Fga, fam: &Family, word: &Word) -> QWElem {
    let mut acc = QWElem::one();
    for &i in word.0.iter().rev() {
        acc = left_mul_z(fga, fam, i, &acc);
    }
    acc
}

/// Change of basis between `{delta_w}` and `{Z_{I_w}}` for a fixed word family.
pub struct ZBasis {
    fga: Arc<Fga>,
    family: Arc<Family>,
    words: Vec<Word>,
    /// `a[w]`: `Z_{I_w} = sum_v a[w][v] delta_v`.
    a: Vec<QWElem>,
    /// `b[w][u] = b_{w, I_u}`: `delta_w = sum_u b[w][u] Z_{I_u}`.
    b: Vec<Vec<QElem>>,
    c_cache: Mutex<HashMap<Word, Arc<Vec<QElem>>>>,
}

impl ZBasis {
    pub fn new(fga: Arc<Fga>, family: Arc<Family>, words: Vec<Word>) -> Result<ZBasis> {
        let g = fga.group().clone();
        if words.len() != g.order() {
            return Err(Error::Config("word family must have one word per element".into()));
        }
        for (k, w) in words.iter().enumerate() {
            if !g.is_reduced(w) || g.product(w) != WeylElement(k) {
                return Err(Error::Config(format!("`{}` is not a reduced word for `{}`", w, g.format(WeylElement(k)))));
            }
        }
        let a: Vec<QWElem> = words.iter().map(|w| compose_word(&fga, &family, w)).collect();
        let n = g.order();
        let mut b: Vec<Vec<QElem>> = Vec::with_capacity(n);
        // Elements are sorted by length, so every v < w is already solved.
        for w in 0..n {
            let diag = a[w].coeff(WeylElement(w));
            let inv = fga.inv(&diag).map_err(|_| Error::Consistency(format!("singular diagonal at {}", g.format(WeylElement(w)))))?;
            let mut row = vec![QElem::zero(); n];
            row[w] = inv.clone();
            for (v, c) in &a[w].0 {
                if v.0 == w {
                    continue;
                }
                if v.0 > w {
                    return Err(Error::Consistency("change of basis is not triangular".into()));
                }
                let f = fga.mul(c, &inv);
                for u in 0..=v.0 {
                    if !b[v.0][u].is_zero() {
                        row[u] = fga.sub(&row[u], &fga.mul(&f, &b[v.0][u]));
                    }
                }
            }
            b.push(row);
        }
        Ok(ZBasis { fga, family, words, a, b, c_cache: Mutex::new(HashMap::new()) })
    }

    pub fn with_policy(fga: Arc<Fga>, family: Arc<Family>, policy: &WordPolicy) -> Result<ZBasis> {
        let words = policy.words(fga.group());
        ZBasis::new(fga, family, words)
    }

    pub fn fga(&self) -> &Arc<Fga> {
        &self.fga
    }

    pub fn family(&self) -> &Arc<Family> {
        &self.family
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        self.fga.group()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, w: WeylElement) -> &Word {
        &self.words[w.0]
    }

    /// `Z_{I_w}` in the delta basis.
    pub fn z(&self, w: WeylElement) -> &QWElem {
        &self.a[w.0]
    }

    /// `a_{I_w, v}`.
    pub fn a_coeff(&self, w: WeylElement, v: WeylElement) -> QElem {
        self.a[w.0].coeff(v)
    }

    /// `b_{w, I_u}`.
    pub fn b_coeff(&self, w: WeylElement, u: WeylElement) -> &QElem {
        &self.b[w.0][u.0]
    }

    /// `delta_w` in the Z basis, as a row indexed by `u`.
    pub fn delta_in_z(&self, w: WeylElement) -> &[QElem] {
        &self.b[w.0]
    }

    /// `c_{J, I_u}` for all `u`: `Z_J = sum_u c_{J,I_u} Z_{I_u}`.
    pub fn c_row(&self, j: &Word) -> Arc<Vec<QElem>> {
        if let Some(r) = self.c_cache.lock().unwrap().get(j) {
            return r.clone();
        }
        let fga = &self.fga;
        let zj = compose_word(fga, &self.family, j);
        let n = self.group().order();
        let mut row = vec![QElem::zero(); n];
        for (v, c) in &zj.0 {
            for (u, slot) in row.iter_mut().enumerate().take(v.0 + 1) {
                let bv = &self.b[v.0][u];
                if !bv.is_zero() {
                    *slot = fga.add(slot, &fga.mul(c, bv));
                }
            }
        }
        let row = Arc::new(row);
        self.c_cache.lock().unwrap().insert(j.clone(), row.clone());
        row
    }

    /// Re-expand `sum_u coeffs[u] Z_{I_u}` in the delta basis.
    pub fn from_z_coords(&self, coeffs: &[QElem]) -> QWElem {
        let mut acc = QWElem::zero();
        for (u, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = self.fga.qw_add(&acc, &self.fga.qw_scale(c, &self.a[u]));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval;
    use crate::fga::Backend;
    use crate::root_system::{Lattice, RootDatum};
    use crate::twisted::FamilyKind;

    fn basis(t: &str, b: Backend, k: FamilyKind) -> ZBasis {
        let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
        let g = Arc::new(WeylGroup::new(&d).unwrap());
        let f = Arc::new(Fga::new(d, g, b));
        let fam = Arc::new(Family::new(&f, k).unwrap());
        ZBasis::with_policy(f, fam, &WordPolicy::LexMin).unwrap()
    }

    #[test]
    fn a2_delta_expansions() {
        for b in [Backend::ADDITIVE, Backend::MULTIPLICATIVE] {
            let zb = basis("A2", b, FamilyKind::X);
            let f = zb.fga().clone();
            let g = zb.group().clone();
            let e = |s: &str| eval(&f, s, None).unwrap();
            let s1 = g.parse("1").unwrap();
            assert!(f.eq(zb.b_coeff(s1, WeylElement::IDENTITY), &QElem::one()));
            assert!(f.eq(zb.b_coeff(s1, s1), &e("-x[1]")));
            let w0 = g.longest();
            let kappa = if b.law == crate::fga::Law::Additive { "0" } else { "1" };
            let expect = [
                ("", "1".to_string()),
                ("1", format!("-(x[1] + x[2] - {kappa}*x[1]*x[2])")),
                ("2", "-x[1+2]".into()),
                ("12", "x[1]*x[1+2]".into()),
                ("21", "x[2]*x[1+2]".into()),
                ("121", "-x[1]*x[2]*x[1+2]".into()),
            ];
            for (u, val) in expect {
                let u = g.parse(u).unwrap();
                assert!(f.eq(zb.b_coeff(w0, u), &e(&val)), "{}", f.pretty(zb.b_coeff(w0, u)));
            }
        }
    }

    #[test]
    fn round_trip_delta() {
        let zb = basis("B2", Backend::MULTIPLICATIVE, FamilyKind::Y);
        let f = zb.fga().clone();
        for w in zb.group().elements() {
            let back = zb.from_z_coords(zb.delta_in_z(w));
            assert!(f.qw_eq(&back, &QWElem::delta(w)));
        }
    }

    #[test]
    fn explicit_word_file() {
        let zb = basis("A2", Backend::ADDITIVE, FamilyKind::X);
        let g = zb.group();
        let p = WordPolicy::from_json(r#"["", "1", "2", "12", "21", "212"]"#, g).unwrap();
        assert_eq!(p.words(g)[5], Word(vec![1, 0, 1]));
        assert!(WordPolicy::from_json(r#"["", "1", "2", "12", "21"]"#, g).is_err());
        assert!(WordPolicy::from_json(r#"["", "1", "2", "12", "21", "11"]"#, g).is_err());
    }
}
