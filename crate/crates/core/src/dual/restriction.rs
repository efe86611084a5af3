use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fga::QElem;
use crate::root_system::WeylElement;
use crate::twisted::{LeibnizTable, ZBasis};

use super::constants::structure_row;

/// `Z*_{I_w}(δ_v)`: the value of the dual class at the fixed point `v`, i.e. `b_{v, I_w}`.
pub fn restriction_coefficient(zb: &ZBasis, w: WeylElement, v: WeylElement) -> QElem {
    zb.b_coeff(v, w).clone()
}

/// Restriction via the structure constants: `z^{I_v}_{I_w, I_v}` computed from the Leibniz table
/// on `I_v` alone (only the full subword on the right contributes).
pub fn restriction_by_leibniz(zb: &ZBasis, w: WeylElement, v: WeylElement) -> QElem {
    let fga = zb.fga();
    let word = zb.word(v);
    let full = (1u32 << word.len()) - 1;
    let mut table = LeibnizTable::new(fga, zb.family(), word);
    let terms: Vec<QElem> = (0..=full)
        .filter_map(|e| {
            let c = zb.c_row(&word.restrict(e))[w.0].clone();
            if c.is_zero() {
                None
            } else {
                Some(fga.mul(&c, &table.coefficient(e, full)))
            }
        })
        .collect();
    fga.sum(&terms)
}

#[derive(Clone, Debug)]
pub struct MatrixCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// For one `w`: `p_w b = b b_w` where `p_w(u,v) = z^{I_v}_{I_w,I_u}`, `b(u,v) = b_{v,I_u}`,
/// `b_w = diag(b_{u,I_w})`; and `a b = 1` with `a(u,v) = a_{I_v,u}`.
pub fn restriction_matrix_check(zb: &ZBasis, w: WeylElement) -> Vec<MatrixCheck> {
    let fga = zb.fga();
    let g = zb.group();
    let n = g.order();
    let b = |u: usize, v: usize| zb.b_coeff(WeylElement(v), WeylElement(u)).clone();
    let mut p = vec![vec![QElem::zero(); n]; n];
    for u in g.elements() {
        for (v, c) in structure_row(zb, w, u) {
            p[u.0][v.0] = c;
        }
    }
    let mut bad = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let lhs: Vec<QElem> = (0..n).filter(|&k| !p[u][k].is_zero()).map(|k| fga.mul(&p[u][k], &b(k, v))).collect();
            let lhs = fga.sum(&lhs);
            let rhs = fga.mul(&b(u, v), zb.b_coeff(WeylElement(v), w));
            if !fga.eq(&lhs, &rhs) {
                bad.push(format!("({}, {})", g.format(WeylElement(u)), g.format(WeylElement(v))));
            }
        }
    }
    let first = MatrixCheck {
        name: format!("restriction matrix identity at {}", g.format(w)),
        passed: bad.is_empty(),
        detail: bad.join(" "),
    };
    let mut bad = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let terms: Vec<QElem> = (0..n).map(|k| fga.mul(&zb.a_coeff(WeylElement(k), WeylElement(u)), &b(k, v))).collect();
            let s = fga.sum(&terms);
            let want = if u == v { QElem::one() } else { QElem::zero() };
            if !fga.eq(&s, &want) {
                bad.push(format!("({}, {})", g.format(WeylElement(u)), g.format(WeylElement(v))));
            }
        }
    }
    vec![
        first,
        MatrixCheck { name: "restriction matrix inverse".into(), passed: bad.is_empty(), detail: bad.join(" ") },
    ]
}

/// The restriction `z^{I_v}_{I_w, I_v}` must not depend on which reduced word is chosen for `v`.
pub fn restriction_independence(zb: &ZBasis, v: WeylElement) -> Result<MatrixCheck> {
    let fga = zb.fga();
    let g = zb.group();
    let mut bad = Vec::new();
    for word in g.all_reduced_words(v) {
        let mut words = zb.words().to_vec();
        words[v.0] = word.clone();
        let other = ZBasis::new(Arc::clone(fga), Arc::clone(zb.family()), words)?;
        for w in g.elements() {
            let x = restriction_by_leibniz(&other, w, v);
            let y = restriction_by_leibniz(zb, w, v);
            if !fga.eq(&x, &y) {
                bad.push(format!("{} at {}", word.format(g.rank()), g.format(w)));
            }
        }
    }
    Ok(MatrixCheck {
        name: format!("restriction independence at {}", g.format(v)),
        passed: bad.is_empty(),
        detail: bad.join(" "),
    })
}

/// Product of two classes pulled back from `G/P_J`: both factors and every term of the product
/// must live on minimal coset representatives. Needs a J-compatible word choice.
pub fn parabolic_row(zb: &ZBasis, j: &[usize], u: WeylElement, v: WeylElement) -> Result<Vec<(WeylElement, QElem)>> {
    let g = zb.group();
    let reps = g.min_coset_reps(j);
    for x in [u, v] {
        if !reps.contains(&x) {
            return Err(Error::Config(format!("{} is not a minimal coset representative", g.format(x))));
        }
    }
    for w in g.elements() {
        let (a, b) = g.parabolic_factor(w, j);
        if *zb.word(w) != zb.word(a).concat(zb.word(b)) {
            return Err(Error::Config("word choice is not J-compatible".into()));
        }
    }
    let row = structure_row(zb, u, v);
    if let Some((w, _)) = row.iter().find(|(w, _)| !reps.contains(w)) {
        return Err(Error::Consistency(format!("parabolic product has support at {}", g.format(*w))));
    }
    Ok(row)
}
