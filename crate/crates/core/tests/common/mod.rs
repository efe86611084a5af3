#![allow(dead_code)]

use std::sync::Arc;

use demazure::expr::eval;
use demazure::fga::{Backend, Fga, QElem};
use demazure::root_system::{Lattice, RootDatum, WeylElement, WeylGroup, Word};
use demazure::twisted::{Family, FamilyKind, WordPolicy, ZBasis};

pub fn fga(t: &str, b: Backend) -> Arc<Fga> {
    let d = Arc::new(RootDatum::from_type(t, Lattice::SimplyConnected).unwrap());
    let g = Arc::new(WeylGroup::new(&d).unwrap());
    Arc::new(Fga::new(d, g, b))
}

/// Lex-min words, except that the elements named in `overrides` get the given words.
pub fn basis_with(f: &Arc<Fga>, k: FamilyKind, overrides: &[&str]) -> ZBasis {
    let g = f.group();
    let mut words = WordPolicy::LexMin.words(g);
    for s in overrides {
        let w = Word::parse(s, g.rank()).unwrap();
        let at = g.product(&w).0;
        words[at] = w;
    }
    let fam = Arc::new(Family::new(f, k).unwrap());
    ZBasis::new(f.clone(), fam, words).unwrap()
}

pub fn basis(t: &str, b: Backend, k: FamilyKind) -> ZBasis {
    basis_with(&fga(t, b), k, &[])
}

pub fn el(f: &Fga, s: &str) -> WeylElement {
    f.group().parse(s).unwrap()
}

pub fn ex(f: &Fga, s: &str) -> QElem {
    eval(f, s, None).unwrap()
}
