use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Roots beyond this count mean the closure did not terminate.
const ROOT_LIMIT: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Lattice {
    /// Fundamental-weight basis.
    #[default]
    SimplyConnected,
    /// Simple-root basis.
    Adjoint,
}

impl std::str::FromStr for Lattice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Lattice> {
        match s {
            "simply-connected" | "sc" => Ok(Lattice::SimplyConnected),
            "adjoint" | "ad" => Ok(Lattice::Adjoint),
            _ => Err(Error::Config(format!("unknown lattice `{s}`"))),
        }
    }
}

/// Integer coordinates in the lattice basis of the datum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Weight {
        Weight(vec![0; n])
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Index into [`RootDatum::roots`].
pub type RootId = usize;

#[derive(Clone, Debug)]
pub struct Root {
    pub weight: Weight,
    /// Coefficients on the simple roots.
    pub simple_coords: Vec<i64>,
    pub positive: bool,
}

/// Serialized Cartan-matrix file: `{"cartan": [[...]], "lattice": "simply-connected"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CartanFile {
    pub cartan: Vec<Vec<i64>>,
    #[serde(default)]
    pub lattice: Lattice,
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    label: String,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    lattice: Lattice,
    roots: Vec<Root>,
    index: HashMap<Weight, RootId>,
    negation: Vec<RootId>,
    /// `reflect[i][r]` is the id of `s_i(root r)`.
    reflect: Vec<Vec<RootId>>,
    simple: Vec<RootId>,
    /// Coroot of simple root i as a functional on lattice coordinates.
    coroot: Vec<Vec<i64>>,
}

pub const DEFAULT_MAX_RANK: usize = 5;

/// Cartan matrix for a type label such as `A2`, `B3`, `G2`, with
/// `a[i][j] = <alpha_i^vee, alpha_j>`.
pub fn cartan_for_type(label: &str) -> Result<Vec<Vec<i64>>> {
    let label = label.trim();
    let bad = || Error::Config(format!("unknown root system type `{label}`"));
    let mut chars = label.chars();
    let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match family {
        'A' => {
            for i in 0..n.saturating_sub(1) {
                link(&mut a, i, i + 1);
            }
        }
        'B' | 'C' if n >= 2 => {
            for i in 0..n - 1 {
                link(&mut a, i, i + 1);
            }
            // B: alpha_n short; C: alpha_n long.
            if family == 'B' {
                a[n - 1][n - 2] = -2;
            } else {
                a[n - 2][n - 1] = -2;
            }
        }
        'D' if n >= 4 => {
            for i in 0..n - 2 {
                link(&mut a, i, i + 1);
            }
            link(&mut a, n - 3, n - 1);
        }
        'E' if (6..=8).contains(&n) => {
            // Bourbaki: 1-3-4-5-6-..., 2 attached to 4.
            link(&mut a, 0, 2);
            link(&mut a, 1, 3);
            for i in 2..n - 1 {
                link(&mut a, i, i + 1);
            }
        }
        'F' if n == 4 => {
            link(&mut a, 0, 1);
            link(&mut a, 1, 2);
            link(&mut a, 2, 3);
            a[2][1] = -2;
        }
        'G' if n == 2 => {
            a[0][1] = -1;
            a[1][0] = -3;
        }
        _ => return Err(bad()),
    }
    Ok(a)
}

fn positive_roots(cartan: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut seen: HashMap<Vec<i64>, ()> = roots.iter().map(|r| (r.clone(), ())).collect();
    let mut queue: VecDeque<usize> = (0..n).collect();
    while let Some(k) = queue.pop_front() {
        for i in 0..n {
            let beta = roots[k].clone();
            let pairing: i64 = (0..n).map(|j| cartan[i][j] * beta[j]).sum();
            if pairing == 0 {
                continue;
            }
            let mut img = beta;
            img[i] -= pairing;
            if img.iter().all(|&c| c >= 0) && !seen.contains_key(&img) {
                seen.insert(img.clone(), ());
                roots.push(img);
                queue.push_back(roots.len() - 1);
                if roots.len() > ROOT_LIMIT {
                    return None;
                }
            }
        }
    }
    Some(roots)
}

fn validate_gcm(cartan: &[Vec<i64>]) -> Result<()> {
    let n = cartan.len();
    if n == 0 || cartan.iter().any(|r| r.len() != n) {
        return Err(Error::Config("Cartan matrix must be square and nonempty".into()));
    }
    for i in 0..n {
        if cartan[i][i] != 2 {
            return Err(Error::Config(format!("Cartan diagonal entry ({},{}) is not 2", i + 1, i + 1)));
        }
        for j in 0..n {
            if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                return Err(Error::Config(format!(
                    "entries ({},{}) and ({},{}) do not form a generalized Cartan matrix",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

fn submatrix(cartan: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter().map(|&i| idx.iter().map(|&j| cartan[i][j]).collect()).collect()
}

/// Smallest principal submatrix (by size, then index order) whose root closure is infinite.
fn offending_submatrix(cartan: &[Vec<i64>]) -> (Vec<usize>, Vec<Vec<i64>>) {
    let n = cartan.len();
    for size in 2..=n {
        let mut subsets: Vec<Vec<usize>> = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == size {
                subsets.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
            }
        }
        subsets.sort();
        for s in subsets {
            let sub = submatrix(cartan, &s);
            if positive_roots(&sub).is_none() {
                return (s, sub);
            }
        }
    }
    ((0..n).collect(), cartan.to_vec())
}

impl RootDatum {
    pub fn from_type(label: &str, lattice: Lattice) -> Result<RootDatum> {
        Self::from_type_with_max_rank(label, lattice, DEFAULT_MAX_RANK)
    }

    pub fn from_type_with_max_rank(label: &str, lattice: Lattice, max_rank: usize) -> Result<RootDatum> {
        let cartan = cartan_for_type(label)?;
        Self::build(label.trim().to_ascii_uppercase(), cartan, lattice, max_rank)
    }

    pub fn from_cartan(cartan: Vec<Vec<i64>>, lattice: Lattice) -> Result<RootDatum> {
        Self::build("custom".into(), cartan, lattice, DEFAULT_MAX_RANK)
    }

    pub fn from_cartan_file(json: &str) -> Result<RootDatum> {
        let file: CartanFile =
            serde_json::from_str(json).map_err(|e| Error::Config(format!("bad Cartan file: {e}")))?;
        Self::from_cartan(file.cartan, file.lattice)
    }

    pub fn build(label: String, cartan: Vec<Vec<i64>>, lattice: Lattice, max_rank: usize) -> Result<RootDatum> {
        validate_gcm(&cartan)?;
        let n = cartan.len();
        if n > max_rank || n > crate::fga::poly::MAX_VARS - 1 {
            return Err(Error::Config(format!("rank {n} exceeds the configured maximum {max_rank}")));
        }
        let pos = match positive_roots(&cartan) {
            Some(p) => p,
            None => {
                let (idx, sub) = offending_submatrix(&cartan);
                return Err(Error::NotFiniteType {
                    indices: idx.iter().map(|i| i + 1).collect(),
                    submatrix: sub,
                });
            }
        };
        let to_weight = |coords: &[i64]| -> Weight {
            match lattice {
                Lattice::Adjoint => Weight(coords.to_vec()),
                Lattice::SimplyConnected => {
                    Weight((0..n).map(|i| (0..n).map(|j| cartan[i][j] * coords[j]).sum()).collect())
                }
            }
        };
        let mut roots = Vec::with_capacity(2 * pos.len());
        // positive roots first, sorted by height then coordinates
        let mut pos = pos;
        pos.sort_by_key(|c| (c.iter().sum::<i64>(), c.iter().map(|x| -x).collect::<Vec<_>>()));
        for c in &pos {
            roots.push(Root { weight: to_weight(c), simple_coords: c.clone(), positive: true });
        }
        for c in &pos {
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            roots.push(Root { weight: to_weight(&neg), simple_coords: neg, positive: false });
        }
        let np = pos.len();
        let index: HashMap<Weight, RootId> = roots.iter().enumerate().map(|(k, r)| (r.weight.clone(), k)).collect();
        let negation = (0..roots.len()).map(|k| if k < np { k + np } else { k - np }).collect();
        let simple: Vec<RootId> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                index[&to_weight(&e)]
            })
            .collect();
        let coroot: Vec<Vec<i64>> = (0..n)
            .map(|i| match lattice {
                Lattice::SimplyConnected => {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e
                }
                Lattice::Adjoint => cartan[i].clone(),
            })
            .collect();
        let mut datum = RootDatum {
            label,
            rank: n,
            cartan,
            lattice,
            roots,
            index,
            negation,
            reflect: Vec::new(),
            simple,
            coroot,
        };
        let reflect = (0..n)
            .map(|i| {
                (0..datum.roots.len())
                    .map(|k| {
                        let img = datum.reflect_weight(i, &datum.roots[k].weight);
                        datum.index[&img]
                    })
                    .collect()
            })
            .collect();
        datum.reflect = reflect;
        Ok(datum)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, r: RootId) -> &Root {
        &self.roots[r]
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = RootId> + '_ {
        0..self.num_positive()
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = RootId> + '_ {
        self.num_positive()..self.roots.len()
    }

    pub fn simple_root(&self, i: usize) -> RootId {
        self.simple[i]
    }

    pub fn simple_weight(&self, i: usize) -> &Weight {
        &self.roots[self.simple[i]].weight
    }

    pub fn negate(&self, r: RootId) -> RootId {
        self.negation[r]
    }

    pub fn is_positive(&self, r: RootId) -> bool {
        self.roots[r].positive
    }

    pub fn reflect_root(&self, i: usize, r: RootId) -> RootId {
        self.reflect[i][r]
    }

    pub fn root_id(&self, w: &Weight) -> Option<RootId> {
        self.index.get(w).copied()
    }

    /// Root with the given simple-root coefficients.
    pub fn root_from_simple_coords(&self, coords: &[i64]) -> Option<RootId> {
        self.roots.iter().position(|r| r.simple_coords == coords)
    }

    /// Lattice coordinates of `sum c_i alpha_i`.
    pub fn weight_from_simple_coords(&self, coords: &[i64]) -> Weight {
        let n = self.rank;
        let mut w = Weight::zero(n);
        for (j, &c) in coords.iter().enumerate() {
            if c != 0 {
                w = w.add(&self.simple_weight(j).scale(c));
            }
        }
        w
    }

    /// `<alpha_i^vee, lambda>`.
    pub fn pairing(&self, i: usize, w: &Weight) -> i64 {
        self.coroot[i].iter().zip(&w.0).map(|(a, b)| a * b).sum()
    }

    pub fn reflect_weight(&self, i: usize, w: &Weight) -> Weight {
        let p = self.pairing(i, w);
        w.add(&self.simple_weight(i).scale(-p))
    }

    /// Matrix of `s_i` on the lattice basis, row-major; column j is `s_i(e_j)`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<i64> {
        let n = self.rank;
        let mut m = vec![0; n * n];
        for j in 0..n {
            let mut e = Weight::zero(n);
            e.0[j] = 1;
            let img = self.reflect_weight(i, &e);
            for r in 0..n {
                m[r * n + j] = img.0[r];
            }
        }
        m
    }

    /// Order of `s_i s_j` (2, 3, 4 or 6 in finite type).
    pub fn braid_order(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => unreachable!("finite type"),
        }
    }

    /// Root-coordinate descriptor such as `1+2` or `1+2*2+3`, negative roots prefixed `-`.
    pub fn root_label(&self, r: RootId) -> String {
        let c = &self.roots[r].simple_coords;
        let sign = if self.roots[r].positive { "" } else { "-" };
        let parts: Vec<String> = c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| if x.abs() == 1 { format!("{}", i + 1) } else { format!("{}*{}", x.abs(), i + 1) })
            .collect();
        if parts.len() > 1 && sign == "-" {
            format!("-({})", parts.join("+"))
        } else {
            format!("{sign}{}", parts.join("+"))
        }
    }
}
