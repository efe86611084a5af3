use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dual::{oracle_row, restriction_by_leibniz, restriction_coefficient, structure_constant, CohStable};
use crate::error::{Error, Result};
use crate::expr::eval;
use crate::fga::{Backend, Fga, Law, QElem};
use crate::root_system::{Lattice, RootDatum, WeylGroup, Word};
use crate::twisted::{
    billey_closed_form, check_leibniz_rule, kappa_pair, verify_relations, Family, LeibnizTable, WordPolicy, ZBasis,
};

const CORPUS: &str = include_str!("../data/worked_examples.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Leibniz,
    Duality,
    WorkedExamples,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "relations" => Suite::Relations,
            "leibniz" => Suite::Leibniz,
            "duality" => Suite::Duality,
            "worked-examples" => Suite::WorkedExamples,
            "all" => Suite::All,
            _ => return Err(Error::Config(format!("unknown suite `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// One worked value: a structure constant, a restriction coefficient or a stable-basis constant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub label: String,
    pub datum: String,
    pub law: Law,
    pub family: String,
    pub kind: String,
    /// Reduced words overriding the lex-min choice for the elements they represent.
    #[serde(default)]
    pub words: Vec<String>,
    #[serde(default)]
    pub u: String,
    #[serde(default)]
    pub v: String,
    pub w: String,
    pub value: String,
    /// Value as printed in the source when it differs from the computed convention.
    #[serde(default)]
    pub stated: Option<String>,
}

pub fn corpus() -> Vec<CorpusEntry> {
    serde_json::from_str(CORPUS).expect("bundled corpus is valid")
}

fn corpus_basis(e: &CorpusEntry) -> Result<ZBasis> {
    let d = Arc::new(RootDatum::from_type(&e.datum, Lattice::SimplyConnected)?);
    let g = Arc::new(WeylGroup::new(&d)?);
    let backend = match (e.law, e.family.as_str()) {
        (Law::Additive, "t") => Backend::ADDITIVE_H,
        (Law::Multiplicative, "tau") => Backend::MULTIPLICATIVE_V,
        (l, _) => Backend::new(l, false, false)?,
    };
    let f = Arc::new(Fga::new(d, g.clone(), backend));
    let fam = Arc::new(Family::from_token(&f, &e.family)?);
    let mut words = WordPolicy::LexMin.words(&g);
    for s in &e.words {
        let w = Word::parse(s, g.rank())?;
        let at = g.product(&w).0;
        words[at] = w;
    }
    ZBasis::new(f, fam, words)
}

fn check_entry(e: &CorpusEntry) -> Result<CheckResult> {
    let zb = corpus_basis(e)?;
    let f = zb.fga();
    let g = zb.group();
    let want = eval(f, &e.value, None)?;
    let name = format!("{} ({})", e.label, f.backend());
    let mismatch = |got: &QElem, route: &str| format!("{route} gave {} expected {}", f.pretty(got), f.pretty(&want));
    let w = g.parse(&e.w)?;
    let mut problems = Vec::new();
    match e.kind.as_str() {
        "product" => {
            let (u, v) = (g.parse(&e.u)?, g.parse(&e.v)?);
            let a = structure_constant(&zb, u, v, w);
            let o = oracle_row(&zb, u, v)?.into_iter().find(|(x, _)| *x == w).map(|(_, c)| c).unwrap_or_default();
            for (route, got) in [("formula", a), ("oracle", o)] {
                if !f.eq(&got, &want) {
                    problems.push(mismatch(&got, route));
                }
            }
        }
        "restriction" => {
            let v = g.parse(&e.v)?;
            for (route, got) in [("basis change", restriction_coefficient(&zb, w, v)), ("leibniz", restriction_by_leibniz(&zb, w, v))] {
                if !f.eq(&got, &want) {
                    problems.push(mismatch(&got, route));
                }
            }
        }
        "coh_stable" => {
            let st = CohStable::new(f.clone())?;
            let got = st.constants_oracle(g.parse(&e.u)?, g.parse(&e.v)?)?[w.0].clone();
            if !f.eq(&got, &want) {
                problems.push(mismatch(&got, "oracle"));
            }
        }
        k => return Err(Error::Config(format!("unknown corpus kind `{k}`"))),
    }
    Ok(CheckResult::new(name, problems.is_empty(), problems.join("; ")))
}

/// The bundled worked examples, optionally restricted to one datum label.
pub fn worked_examples(datum: Option<&str>) -> Result<Vec<CheckResult>> {
    corpus().iter().filter(|e| datum.map_or(true, |d| d == e.datum)).map(check_entry).collect()
}

/// Deterministic small polynomials for the Leibniz check.
fn sample_polys(f: &Fga, count: usize) -> Vec<(QElem, QElem)> {
    let d = f.datum();
    let roots: Vec<usize> = d.positive_roots().collect();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = |m: usize| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % m as u64) as usize
    };
    let mut poly = || {
        let mut terms = Vec::new();
        for _ in 0..1 + next(3) {
            let mut t = QElem::int(next(7) as i64 - 3);
            for _ in 0..next(3) {
                t = f.mul(&t, &QElem::from_poly(f.x_root(roots[next(roots.len())]).clone()));
            }
            terms.push(t);
        }
        f.sum(&terms)
    };
    (0..count).map(|_| (poly(), poly())).collect()
}

pub fn run_suite(zb: &ZBasis, suite: Suite) -> Result<Vec<CheckResult>> {
    let f = zb.fga();
    let g = zb.group();
    let fam = zb.family();
    let mut out = Vec::new();
    if matches!(suite, Suite::Relations | Suite::All) {
        for r in verify_relations(f, fam)? {
            out.push(CheckResult::new(r.name, r.passed, r.residual.unwrap_or_default()));
        }
        if fam.is_integral() {
            for i in 0..g.rank() {
                for j in (0..g.rank()).filter(|&j| j != i && f.datum().braid_order(i, j) == 3) {
                    let k = kappa_pair(f, i, j)?;
                    out.push(CheckResult::new(format!("kappa_{{{}{}}} = 0", i + 1, j + 1), k.is_zero(), f.pretty_poly(&k)));
                }
            }
        }
    }
    if matches!(suite, Suite::Leibniz | Suite::All) {
        let pairs = sample_polys(f, 10);
        for w in g.elements() {
            let word = zb.word(w);
            let ok = check_leibniz_rule(f, fam, word, &pairs);
            let shown = word.format(g.rank());
            out.push(CheckResult::new(format!("Leibniz rule on {}", crate::twisted::display_word(&shown)), ok, ""));
            let mut table = LeibnizTable::new(f, fam, word);
            let full = (1u32 << word.len()) - 1;
            let mut bad = Vec::new();
            for e in 0..=full {
                let closed = billey_closed_form(f, fam, word, e)?;
                if !f.eq(&closed, &table.coefficient(full, e)) {
                    bad.push(format!("{e:b}"));
                }
            }
            out.push(CheckResult::new(
                format!("closed restriction form on {}", crate::twisted::display_word(&shown)),
                bad.is_empty(),
                bad.join(" "),
            ));
        }
    }
    if matches!(suite, Suite::Duality | Suite::All) {
        let mut bad = Vec::new();
        for u in g.elements() {
            for (v, x) in zb.dual_coords(&zb.dual_basis_element(u)).iter().enumerate() {
                let want = if v == u.0 { QElem::one() } else { QElem::zero() };
                if !f.eq(x, &want) {
                    bad.push(format!("({}, {})", g.format(u), g.format(crate::root_system::WeylElement(v))));
                }
            }
        }
        out.push(CheckResult::new("dual basis pairs to the identity", bad.is_empty(), bad.join(" ")));
    }
    if matches!(suite, Suite::WorkedExamples | Suite::All) {
        out.extend(worked_examples(Some(f.datum().label()))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses() {
        let c = corpus();
        assert!(c.len() > 20);
        assert!(c.iter().all(|e| !e.label.is_empty()));
    }

    #[test]
    fn a2_examples_pass() {
        for r in worked_examples(Some("A2")).unwrap() {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
