//! Irreducible highest weight modules built from a Cartan matrix alone.
//!
//! Weight spaces are produced level by level below the highest weight. A
//! candidate vector `f_i w` is represented by the tuple `(e_1 u, ..., e_l u)`,
//! computed with `e_j f_i = f_i e_j + delta_ij h_i`; in an irreducible module a
//! vector below the top is zero exactly when all of these vanish.

use std::collections::BTreeMap;

use crate::linalg::{zero_vec, SparseMatrix, Span, Vector};
use crate::scalar::CycScalar;

/// Action of the Chevalley generators on an irreducible module.
#[derive(Clone, Debug)]
pub struct GeneratorRep {
    pub dim: usize,
    /// Weights in fundamental-weight coordinates, one per basis vector.
    pub weights: Vec<Vec<i64>>,
    /// Depth below the highest weight in simple-root coordinates.
    pub depth: Vec<Vec<i64>>,
    /// Basis vector `b` equals `f_i` applied to `parent` when `tree[b] = Some((parent, i))`.
    pub tree: Vec<Option<(usize, usize)>>,
    pub e: Vec<SparseMatrix>,
    pub f: Vec<SparseMatrix>,
    pub h: Vec<SparseMatrix>,
}

pub fn build_generators(cartan: &[Vec<i64>], lambda: &[i64]) -> GeneratorRep {
    let l = cartan.len();
    let weight_of = |n: &[i64]| -> Vec<i64> {
        (0..l).map(|i| lambda[i] - (0..l).map(|j| n[j] * cartan[i][j]).sum::<i64>()).collect()
    };

    let mut depth: Vec<Vec<i64>> = vec![vec![0; l]];
    let mut tree: Vec<Option<(usize, usize)>> = vec![None];
    // sparse columns, grown as basis vectors appear
    let mut ecols: Vec<Vec<Vec<(usize, CycScalar)>>> = vec![vec![Vec::new()]; l];
    let mut fcols: Vec<Vec<Vec<(usize, CycScalar)>>> = vec![vec![Vec::new()]; l];
    let mut by_depth: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    by_depth.insert(vec![0; l], vec![0]);

    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let lo = level[0];
        let hi = *level.last().unwrap() + 1;
        let width = hi - lo;
        // candidates grouped by target depth
        let mut targets: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
        for i in 0..l {
            for &b in &level {
                let mut n = depth[b].clone();
                n[i] += 1;
                targets.entry(n).or_default().push((b, i));
            }
        }
        let mut next = Vec::new();
        for (n, cands) in targets {
            let mut sigs: Vec<Vector> = Vec::with_capacity(cands.len());
            let mut evecs: Vec<Vec<Vec<(usize, CycScalar)>>> = Vec::with_capacity(cands.len());
            for &(b, i) in &cands {
                let wb = weight_of(&depth[b]);
                let mut sig = zero_vec(l * width);
                let mut per_j = Vec::with_capacity(l);
                for j in 0..l {
                    // e_j f_i b = f_i (e_j b) + delta_ij h_i b
                    let mut acc: BTreeMap<usize, CycScalar> = BTreeMap::new();
                    for (k, c) in &ecols[j][b] {
                        for (t, d) in &fcols[i][*k] {
                            *acc.entry(*t).or_default() += &(c * d);
                        }
                    }
                    if i == j && wb[i] != 0 {
                        *acc.entry(b).or_default() += &CycScalar::from_int(wb[i]);
                    }
                    let col: Vec<(usize, CycScalar)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                    for (t, v) in &col {
                        debug_assert!(*t >= lo && *t < hi);
                        sig[j * width + (t - lo)] = v.clone();
                    }
                    per_j.push(col);
                }
                sigs.push(sig);
                evecs.push(per_j);
            }
            let mut span = Span::new(l * width);
            let mut chosen: Vec<usize> = Vec::new();
            for (c, sig) in sigs.iter().enumerate() {
                if span.insert(sig) {
                    chosen.push(c);
                }
            }
            if chosen.is_empty() {
                continue;
            }
            let base = depth.len();
            for (k, &c) in chosen.iter().enumerate() {
                let (b, i) = cands[c];
                depth.push(n.clone());
                tree.push(Some((b, i)));
                for j in 0..l {
                    ecols[j].push(evecs[c][j].clone());
                    fcols[j].push(Vec::new());
                }
                next.push(base + k);
            }
            for (c, &(b, i)) in cands.iter().enumerate() {
                let coords = span.coords(&sigs[c]).expect("candidate lies in the span");
                for (k, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        fcols[i][b].push((base + k, v));
                    }
                }
            }
            by_depth.insert(n, (base..base + chosen.len()).collect());
        }
        level = next;
    }

    let dim = depth.len();
    let weights: Vec<Vec<i64>> = depth.iter().map(|n| weight_of(n)).collect();
    let to_sparse = |cols: Vec<Vec<(usize, CycScalar)>>| SparseMatrix { rows: dim, cols };
    let e = ecols.into_iter().map(to_sparse).collect();
    let f = fcols.into_iter().map(to_sparse).collect();
    let h = (0..l)
        .map(|i| SparseMatrix {
            rows: dim,
            cols: (0..dim)
                .map(|b| if weights[b][i] == 0 { Vec::new() } else { vec![(b, CycScalar::from_int(weights[b][i]))] })
                .collect(),
        })
        .collect();
    GeneratorRep { dim, weights, depth, tree, e, f, h }
}

impl GeneratorRep {
    /// Highest weight vector coordinates.
    pub fn top(&self) -> Vector {
        let mut v = zero_vec(self.dim);
        v[0] = CycScalar::one();
        v
    }
}
