use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::datum::{RootDatum, RootId, Weight};

/// Default cap on |W|; larger groups make the subset sums impractical.
pub const DEFAULT_MAX_ORDER: usize = 384;

/// Index of an element in [`WeylGroup::elements`], which are sorted by
/// (length, lexicographic canonical word).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement(pub usize);

impl WeylElement {
    pub const IDENTITY: WeylElement = WeylElement(0);
}

/// A sequence of simple-reflection indices, stored 0-based and displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// The subword at the positions set in `mask` (bit j = position j).
    pub fn restrict(&self, mask: u32) -> Word {
        Word(self.0.iter().enumerate().filter(|(j, _)| mask & (1 << j) != 0).map(|(_, &i)| i).collect())
    }

    /// Parse a digit string ("121") or comma-separated form ("1,2,1"); "" and "e" are the identity.
    pub fn parse(s: &str, rank: usize) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(Word::empty());
        }
        let pieces: Vec<&str> = if s.contains(',') { s.split(',').map(str::trim).collect() } else {
            s.char_indices().map(|(k, c)| &s[k..k + c.len_utf8()]).collect()
        };
        let mut out = Vec::with_capacity(pieces.len());
        for p in pieces {
            let i: usize = p.parse().map_err(|_| Error::Config(format!("invalid word `{s}`")))?;
            if i == 0 || i > rank {
                return Err(Error::Config(format!("index {i} in word `{s}` outside 1..{rank}")));
            }
            out.push(i - 1);
        }
        Ok(Word(out))
    }

    /// Digit string for ranks below 10, comma-separated otherwise.
    pub fn format(&self, rank: usize) -> String {
        if rank >= 10 {
            self.0.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
        } else {
            self.0.iter().map(|i| (i + 1).to_string()).collect()
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(9))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s, 9)
    }
}

#[derive(Clone, Debug)]
struct ElementData {
    word: Word,
    matrix: Vec<i64>,
}

/// The finite Weyl group of a root datum, fully enumerated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<ElementData>,
    index: HashMap<Vec<i64>, usize>,
    /// `left[i][w]` = s_i w, `right[i][w]` = w s_i.
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// `bruhat[w]` bitset of u with u <= w.
    bruhat: Vec<Vec<u64>>,
    /// `root_action[w][r]` = w(root r).
    root_action: Vec<Vec<RootId>>,
    longest: usize,
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x != 0 {
                for j in 0..n {
                    c[i * n + j] += x * b[k * n + j];
                }
            }
        }
    }
    c
}

impl WeylGroup {
    pub fn new(datum: &RootDatum) -> Result<WeylGroup> {
        Self::with_max_order(datum, DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(datum: &RootDatum, max_order: usize) -> Result<WeylGroup> {
        let n = datum.rank();
        let gens: Vec<Vec<i64>> = (0..n).map(|i| datum.reflection_matrix(i)).collect();
        let mut ident = vec![0; n * n];
        for i in 0..n {
            ident[i * n + i] = 1;
        }
        let mut elements = vec![ElementData { word: Word::empty(), matrix: ident.clone() }];
        let mut index = HashMap::new();
        index.insert(ident, 0usize);
        // level-by-level; processing each level in lexicographic word order and appending
        // letters in increasing order yields lexicographically least reduced words
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &w in &level {
                for (i, g) in gens.iter().enumerate() {
                    let m = mat_mul(&elements[w].matrix, g, n);
                    if !index.contains_key(&m) {
                        let mut word = elements[w].word.clone();
                        word.0.push(i);
                        index.insert(m.clone(), elements.len());
                        next.push(elements.len());
                        elements.push(ElementData { word, matrix: m });
                        if elements.len() > max_order {
                            return Err(Error::Config(format!(
                                "Weyl group of {} exceeds the configured maximum order {max_order}",
                                datum.label()
                            )));
                        }
                    }
                }
            }
            level = next;
        }
        let size = elements.len();
        let lookup = |m: &Vec<i64>| index[m];
        let left: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| elements.iter().map(|e| lookup(&mat_mul(g, &e.matrix, n))).collect())
            .collect();
        let right: Vec<Vec<usize>> = gens
            .iter()
            .map(|g| elements.iter().map(|e| lookup(&mat_mul(&e.matrix, g, n))).collect())
            .collect();
        let inverse: Vec<usize> = elements
            .iter()
            .map(|e| {
                let mut w = 0;
                for &i in e.word.0.iter().rev() {
                    w = right[i][w];
                }
                w
            })
            .collect();
        let longest = size - 1;
        let mut group = WeylGroup {
            rank: n,
            elements,
            index,
            left,
            right,
            inverse,
            bruhat: Vec::new(),
            root_action: Vec::new(),
            longest,
        };
        group.bruhat = group.compute_bruhat();
        group.root_action = (0..size)
            .map(|w| {
                (0..datum.roots().len())
                    .map(|r| {
                        let mut x = r;
                        for &i in group.elements[w].word.0.iter().rev() {
                            x = datum.reflect_root(i, x);
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        Ok(group)
    }

    fn compute_bruhat(&self) -> Vec<Vec<u64>> {
        let size = self.elements.len();
        let words = size.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = vec![vec![0; words]; size];
        rows[0][0] |= 1;
        for w in 1..size {
            // s = first letter is a left descent; sw has smaller index
            let s = self.elements[w].word.0[0];
            let sw = self.left[s][w];
            let mut row = vec![0u64; words];
            for u in 0..size {
                if self.length(WeylElement(u)) > self.length(WeylElement(w)) {
                    break;
                }
                let su = self.left[s][u];
                let target = if self.elements[su].word.len() < self.elements[u].word.len() { su } else { u };
                if rows[sw][target / 64] & (1 << (target % 64)) != 0 {
                    row[u / 64] |= 1 << (u % 64);
                }
            }
            rows[w] = row;
        }
        rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElement> + '_ {
        (0..self.elements.len()).map(WeylElement)
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement(0)
    }

    pub fn longest(&self) -> WeylElement {
        WeylElement(self.longest)
    }

    pub fn length(&self, w: WeylElement) -> usize {
        self.elements[w.0].word.len()
    }

    /// Lexicographically least reduced word.
    pub fn reduced_word(&self, w: WeylElement) -> &Word {
        &self.elements[w.0].word
    }

    /// Action matrix on the lattice basis, row-major.
    pub fn matrix(&self, w: WeylElement) -> &[i64] {
        &self.elements[w.0].matrix
    }

    pub fn simple(&self, i: usize) -> WeylElement {
        WeylElement(self.left[i][0])
    }

    pub fn left_mul(&self, i: usize, w: WeylElement) -> WeylElement {
        WeylElement(self.left[i][w.0])
    }

    pub fn right_mul(&self, w: WeylElement, i: usize) -> WeylElement {
        WeylElement(self.right[i][w.0])
    }

    pub fn mul(&self, a: WeylElement, b: WeylElement) -> WeylElement {
        let mut w = a.0;
        for &i in &self.elements[b.0].word.0 {
            w = self.right[i][w];
        }
        WeylElement(w)
    }

    pub fn inverse(&self, w: WeylElement) -> WeylElement {
        WeylElement(self.inverse[w.0])
    }

    /// Ordinary product of the reflections in `word`.
    pub fn product(&self, word: &Word) -> WeylElement {
        let mut w = 0;
        for &i in &word.0 {
            w = self.right[i][w];
        }
        WeylElement(w)
    }

    pub fn is_reduced(&self, word: &Word) -> bool {
        self.length(self.product(word)) == word.len()
    }

    /// Product in the 0-Hecke monoid (braid relations and s_i^2 = s_i).
    pub fn demazure_product(&self, word: &Word) -> WeylElement {
        let mut w = 0;
        for &i in &word.0 {
            let ws = self.right[i][w];
            if self.elements[ws].word.len() > self.elements[w].word.len() {
                w = ws;
            }
        }
        WeylElement(w)
    }

    pub fn from_word(&self, word: &Word) -> WeylElement {
        self.product(word)
    }

    pub fn find(&self, matrix: &[i64]) -> Option<WeylElement> {
        self.index.get(matrix).map(|&i| WeylElement(i))
    }

    pub fn bruhat_leq(&self, u: WeylElement, w: WeylElement) -> bool {
        self.bruhat[w.0][u.0 / 64] & (1 << (u.0 % 64)) != 0
    }

    pub fn all_reduced_words(&self, w: WeylElement) -> Vec<Word> {
        if w.0 == 0 {
            return vec![Word::empty()];
        }
        let mut out = Vec::new();
        for i in 0..self.rank {
            let ws = self.right_mul(w, i);
            if self.length(ws) < self.length(w) {
                for mut word in self.all_reduced_words(ws) {
                    word.0.push(i);
                    out.push(word);
                }
            }
        }
        out.sort();
        out
    }

    pub fn act_on_weight(&self, w: WeylElement, lambda: &Weight) -> Weight {
        let n = self.rank;
        let m = self.matrix(w);
        Weight((0..n).map(|r| (0..n).map(|c| m[r * n + c] * lambda.0[c]).sum()).collect())
    }

    pub fn act_on_root(&self, w: WeylElement, r: RootId) -> RootId {
        self.root_action[w.0][r]
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, datum: &RootDatum, w: WeylElement) -> usize {
        datum.positive_roots().filter(|&r| !datum.is_positive(self.act_on_root(w, r))).count()
    }

    /// Elements of the parabolic subgroup W_J (J 0-based).
    pub fn parabolic_subgroup(&self, j: &[usize]) -> Vec<WeylElement> {
        self.elements().filter(|&w| self.reduced_word(w).0.iter().all(|i| j.contains(i))).collect()
    }

    /// Minimal-length representatives of W / W_J.
    pub fn min_coset_reps(&self, j: &[usize]) -> Vec<WeylElement> {
        self.elements()
            .filter(|&w| j.iter().all(|&i| self.length(self.right_mul(w, i)) > self.length(w)))
            .collect()
    }

    /// The factorization w = u v with u in W^J, v in W_J.
    pub fn parabolic_factor(&self, w: WeylElement, j: &[usize]) -> (WeylElement, WeylElement) {
        let mut u = w;
        let mut v = Word::empty();
        'outer: loop {
            for &i in j {
                let us = self.right_mul(u, i);
                if self.length(us) < self.length(u) {
                    u = us;
                    v.0.insert(0, i);
                    continue 'outer;
                }
            }
            break;
        }
        (u, self.product(&v))
    }

    /// J-compatible words: I_w = I_u followed by I_v for w = uv.
    pub fn j_compatible_words(&self, j: &[usize]) -> Vec<Word> {
        self.elements()
            .map(|w| {
                let (u, v) = self.parabolic_factor(w, j);
                self.reduced_word(u).concat(self.reduced_word(v))
            })
            .collect()
    }

    pub fn format(&self, w: WeylElement) -> String {
        self.reduced_word(w).format(self.rank)
    }

    pub fn parse(&self, s: &str) -> Result<WeylElement> {
        Ok(self.product(&Word::parse(s, self.rank)?))
    }
}
