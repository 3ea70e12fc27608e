use std::cmp::Reverse;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{CycScalar, Rational};

/// Finite irreducible reduced root system given by its Cartan matrix.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub letter: char,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// Positive roots in the simple-root basis, sorted by height; the first
    /// `rank` entries are the simple roots.
    pub positive: Vec<Vec<i64>>,
    /// Half squared lengths `(alpha_i|alpha_i)/2` of the simple roots; long roots have 1.
    pub half_len: Vec<Rational>,
}

pub fn cartan_matrix(letter: char, rank: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::UnsupportedType(format!("{letter}{rank}"));
    let ok = match letter {
        'A' => rank >= 1,
        'B' | 'C' => rank >= 2,
        'D' => rank >= 4,
        'E' => (6..=8).contains(&rank),
        'F' => rank == 4,
        'G' => rank == 2,
        _ => false,
    };
    if !ok {
        return Err(bad());
    }
    let l = rank;
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match letter {
        'A' | 'B' | 'C' | 'F' => {
            for i in 0..l - 1 {
                link(i, i + 1);
            }
        }
        'D' => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        'E' => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
        'G' => link(0, 1),
        _ => unreachable!(),
    }
    match letter {
        'B' => a[l - 1][l - 2] = -2,
        'C' => a[l - 2][l - 1] = -2,
        'F' => a[2][1] = -2,
        'G' => a[0][1] = -3,
        _ => {}
    }
    Ok(a)
}

/// Half squared lengths of simple roots from a symmetrizable Cartan matrix,
/// normalized so that the longest simple root has value 1.
pub fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<Rational> {
    let l = cartan.len();
    let mut d: Vec<Option<Rational>> = vec![None; l];
    for start in 0..l {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rational::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..l {
                if i != j && cartan[i][j] != 0 && d[j].is_none() {
                    // d_i a_ij = d_j a_ji
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * Rational::from_integer(BigInt::from(cartan[i][j]))
                        / Rational::from_integer(BigInt::from(cartan[j][i])));
                    stack.push(j);
                }
            }
        }
    }
    let d: Vec<Rational> = d.into_iter().map(Option::unwrap).collect();
    let max = d.iter().cloned().fold(Rational::zero(), |a, b| if b > a { b } else { a });
    d.into_iter().map(|x| x / &max).collect()
}

/// Positive roots generated from the simple roots by root strings.
pub fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    let mut idx = 0;
    while idx < roots.len() {
        let beta = roots[idx].clone();
        for i in 0..l {
            // p: how far beta - k alpha_i stays a root
            let mut p = 0;
            let mut cur = beta.clone();
            loop {
                cur[i] -= 1;
                if cur.iter().all(|&x| x >= 0) && roots.contains(&cur) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
            let q = p - pairing;
            if q > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if !roots.contains(&up) {
                    roots.push(up);
                }
            }
        }
        idx += 1;
    }
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), Reverse(r.clone())));
    roots
}

impl RootSystem {
    pub fn new(letter: char, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(letter, rank)?;
        Ok(Self::from_cartan(letter, cartan))
    }

    pub fn from_cartan(letter: char, cartan: Vec<Vec<i64>>) -> Self {
        let rank = cartan.len();
        let half_len = symmetrizer(&cartan);
        let positive = positive_roots(&cartan);
        RootSystem { letter, rank, cartan, positive, half_len }
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn height(root: &[i64]) -> i64 {
        root.iter().sum()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive.last().unwrap()
    }

    pub fn index_of(&self, root: &[i64]) -> Option<usize> {
        self.positive.iter().position(|r| r == root)
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.index_of(v).is_some() || self.index_of(&neg).is_some()
    }

    /// `(alpha_i|alpha_j)`.
    pub fn simple_ip(&self, i: usize, j: usize) -> Rational {
        &self.half_len[i] * Rational::from_integer(BigInt::from(self.cartan[i][j]))
    }

    /// Inner product of two elements of the root lattice (simple-root coordinates).
    pub fn ip(&self, a: &[i64], b: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] != 0 {
                    acc += self.simple_ip(i, j) * Rational::from_integer(BigInt::from(a[i] * b[j]));
                }
            }
        }
        acc
    }

    /// `<beta, alpha_i^vee>` for beta in simple-root coordinates.
    pub fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| beta[j] * self.cartan[i][j]).sum()
    }

    /// Coroot of a root as coefficients on the simple coroots.
    pub fn coroot(&self, root: &[i64]) -> Vec<Rational> {
        let len = self.ip(root, root);
        (0..self.rank)
            .map(|i| Rational::from_integer(BigInt::from(root[i])) * &self.half_len[i] * Rational::from_integer(2.into()) / &len)
            .collect()
    }

    pub fn is_long(&self, root: &[i64]) -> bool {
        self.ip(root, root) == Rational::from_integer(2.into())
    }

    /// Fundamental weights in the simple-root basis (rows).
    pub fn fundamental_weights(&self) -> Vec<Vec<Rational>> {
        let at = Matrix::from_rows(
            &(0..self.rank)
                .map(|i| (0..self.rank).map(|j| CycScalar::from_int(self.cartan[j][i])).collect())
                .collect::<Vec<_>>(),
        );
        let inv = at.inverse().expect("Cartan matrix is invertible");
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| inv.get(i, j).to_rational().unwrap()).collect())
            .collect()
    }

    pub fn weyl_dimension(&self, lambda: &[i64]) -> Result<u64> {
        check_dominant(lambda, self.rank)?;
        let mut num = Rational::one();
        let mut den = Rational::one();
        for a in &self.positive {
            let mut x = Rational::zero();
            let mut y = Rational::zero();
            for j in 0..self.rank {
                let w = Rational::from_integer(BigInt::from(a[j])) * &self.half_len[j];
                x += &w * Rational::from_integer(BigInt::from(lambda[j] + 1));
                y += w;
            }
            num *= x;
            den *= y;
        }
        let q = num / den;
        assert!(q.is_integer());
        Ok(num_traits::ToPrimitive::to_u64(&q.to_integer()).unwrap())
    }

    /// Whether the system counts as type B for the extended root set; rank one
    /// is always treated as B1.
    pub fn is_type_b(&self) -> bool {
        self.rank == 1 || self.letter == 'B' || (self.letter == 'C' && self.rank == 2)
    }

    /// All roots, with doubled short roots added for type B.
    pub fn extended_roots(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for r in &self.positive {
            out.push(r.clone());
            out.push(r.iter().map(|x| -x).collect());
        }
        if self.is_type_b() {
            for r in &self.positive {
                if self.rank == 1 || !self.is_long(r) {
                    out.push(r.iter().map(|x| 2 * x).collect());
                    out.push(r.iter().map(|x| -2 * x).collect());
                }
            }
        }
        out
    }

    /// Simple reflection s_i applied to a root-lattice vector.
    pub fn reflect(&self, v: &[i64], i: usize) -> Vec<i64> {
        let p = self.pairing(v, i);
        let mut out = v.to_vec();
        out[i] -= p;
        out
    }
}

pub fn check_dominant(lambda: &[i64], rank: usize) -> Result<()> {
    if lambda.len() != rank || lambda.iter().any(|&x| x < 0) {
        return Err(Error::NonDominantWeight(format!("{lambda:?}")));
    }
    Ok(())
}

/// Identifies the type of a connected Cartan matrix.
pub fn classify_cartan(cartan: &[Vec<i64>]) -> Option<(char, usize)> {
    let l = cartan.len();
    if l == 0 {
        return None;
    }
    if !is_connected(cartan) {
        return None;
    }
    if l == 1 {
        return Some(('A', 1));
    }
    let mut edges = 0;
    let mut max_bond = 1;
    let mut degree = vec![0usize; l];
    for i in 0..l {
        for j in i + 1..l {
            if cartan[i][j] != 0 {
                edges += 1;
                degree[i] += 1;
                degree[j] += 1;
                max_bond = max_bond.max(cartan[i][j] * cartan[j][i]);
            }
        }
    }
    if edges != l - 1 {
        return None;
    }
    let half = symmetrizer(cartan);
    let one = Rational::one();
    let short = half.iter().filter(|h| **h != one).count();
    match max_bond {
        3 => (l == 2).then_some(('G', 2)),
        2 => {
            if l == 2 {
                return Some(('B', 2));
            }
            if l == 4 && short == 2 {
                // F4 has its double bond in the middle of the chain
                let mid = (0..l).all(|i| {
                    (0..l).all(|j| i == j || cartan[i][j] * cartan[j][i] != 2 || (degree[i] == 2 && degree[j] == 2))
                });
                if mid {
                    return Some(('F', 4));
                }
            }
            if short == 1 {
                Some(('B', l))
            } else if short == l - 1 {
                Some(('C', l))
            } else {
                None
            }
        }
        _ => {
            let branch: Vec<usize> = (0..l).filter(|&i| degree[i] >= 3).collect();
            match branch.len() {
                0 => Some(('A', l)),
                1 => {
                    let b = branch[0];
                    if degree[b] != 3 {
                        return None;
                    }
                    let mut arms: Vec<usize> = (0..l)
                        .filter(|&j| j != b && cartan[b][j] != 0)
                        .map(|j| arm_length(cartan, b, j))
                        .collect();
                    arms.sort();
                    match (arms[0], arms[1], arms[2]) {
                        (1, 1, _) => Some(('D', l)),
                        (1, 2, 2) => Some(('E', 6)),
                        (1, 2, 3) => Some(('E', 7)),
                        (1, 2, 4) => Some(('E', 8)),
                        _ => None,
                    }
                }
                _ => None,
            }
        }
    }
}

fn arm_length(cartan: &[Vec<i64>], from: usize, start: usize) -> usize {
    let l = cartan.len();
    let mut prev = from;
    let mut cur = start;
    let mut len = 1;
    loop {
        let next: Vec<usize> = (0..l).filter(|&j| j != cur && j != prev && cartan[cur][j] != 0).collect();
        if next.is_empty() {
            return len;
        }
        prev = cur;
        cur = next[0];
        len += 1;
    }
}

pub fn is_connected(cartan: &[Vec<i64>]) -> bool {
    let l = cartan.len();
    if l == 0 {
        return false;
    }
    let mut seen = vec![false; l];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..l {
            if !seen[j] && cartan[i][j] != 0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|x| x)
}
