//! Commuting finite-order automorphisms, the induced group grading of a simple
//! Lie algebra, and Lie-torus validation.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liealg::{classify_cartan, is_connected, BasisKind, ChevalleyAlgebra};
use crate::linalg::{is_zero_vec, unit_vec, zero_vec, Matrix, Span, Vector};
use crate::scalar::{CycScalar, Rational};

/// Automorphism of `g` given by its matrix on the Chevalley basis
/// (column `j` is the image of basis element `j`).
#[derive(Clone, Debug)]
pub struct FiniteOrderAut {
    pub matrix: Matrix,
    pub order: u32,
    pub description: String,
}

const MAX_ORDER: u32 = 4096;

fn matrix_order(m: &Matrix) -> Result<u32> {
    let id = Matrix::identity(m.rows);
    let mut p = m.clone();
    for k in 1..=MAX_ORDER {
        if p == id {
            return Ok(k);
        }
        p = p.mul(m);
    }
    Err(Error::Invalid("automorphism has no finite order below the search bound".into()))
}

impl FiniteOrderAut {
    pub fn from_matrix(matrix: Matrix, description: impl Into<String>) -> Result<Self> {
        let order = matrix_order(&matrix)?;
        Ok(FiniteOrderAut { matrix, order, description: description.into() })
    }

    pub fn identity(g: &ChevalleyAlgebra) -> Self {
        FiniteOrderAut { matrix: Matrix::identity(g.dim()), order: 1, description: "id".into() }
    }

    pub fn apply(&self, x: &[CycScalar]) -> Vector {
        self.matrix.mul_vec(x)
    }

    /// `other` first, then `self`.
    pub fn after(&self, other: &FiniteOrderAut) -> Result<Self> {
        Self::from_matrix(self.matrix.mul(&other.matrix), format!("{} . {}", self.description, other.description))
    }

    pub fn inverse(&self) -> Self {
        FiniteOrderAut {
            matrix: self.matrix.pow(self.order - 1),
            order: self.order,
            description: format!("({})^-1", self.description),
        }
    }

    /// Composes a list of automorphisms applied left to right.
    pub fn compose_left_to_right(g: &ChevalleyAlgebra, list: &[FiniteOrderAut]) -> Result<Self> {
        let mut acc = Self::identity(g);
        for a in list {
            acc = a.after(&acc)?;
        }
        Ok(acc)
    }

    /// Checks `s[x,y] = [sx,sy]` and `(sx|sy) = (x|y)` on all basis pairs.
    pub fn is_automorphism(&self, g: &ChevalleyAlgebra) -> bool {
        let d = g.dim();
        let imgs: Vec<Vector> = (0..d).map(|a| self.matrix.col(a)).collect();
        for a in 0..d {
            for b in a..d {
                let lhs = self.apply(&g.bracket(&g.basis_vec(a), &g.basis_vec(b)));
                if lhs != g.bracket(&imgs[a], &imgs[b]) {
                    return false;
                }
                if g.form(&imgs[a], &imgs[b]) != g.form_basis(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the automorphism maps the Cartan subalgebra into itself.
    pub fn preserves_cartan(&self, g: &ChevalleyAlgebra) -> bool {
        (0..g.rank()).all(|i| {
            let img = self.matrix.col(g.h(i));
            img.iter().enumerate().all(|(a, v)| v.is_zero() || matches!(g.kind(a), BasisKind::H(_)))
        })
    }
}

/// Automorphism permuting the simple root vectors by `perm` (0-based).
pub fn make_diagram_aut(g: &ChevalleyAlgebra, perm: &[usize]) -> Result<FiniteOrderAut> {
    let l = g.rank();
    let mut seen = vec![false; l];
    if perm.len() != l || perm.iter().any(|&p| p >= l || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::NotADiagramSymmetry(format!("{perm:?} is not a permutation of {l} nodes")));
    }
    for i in 0..l {
        for j in 0..l {
            if g.roots.cartan[perm[i]][perm[j]] != g.roots.cartan[i][j] {
                return Err(Error::NotADiagramSymmetry(format!("{perm:?} does not preserve the Cartan matrix")));
            }
        }
    }
    let d = g.dim();
    let mut cols: Vec<Vector> = vec![Vec::new(); d];
    for (r, recipe) in g.recipes.iter().enumerate() {
        match recipe {
            None => {
                let i = g.roots.positive[r].iter().position(|&x| x == 1).unwrap();
                cols[g.e(r)] = g.basis_vec(g.e(perm[i]));
                cols[g.f(r)] = g.basis_vec(g.f(perm[i]));
            }
            Some(rc) => {
                let inv = CycScalar::frac(1, rc.p + 1);
                let e = g.bracket(&cols[g.e(rc.simple)], &cols[g.e(rc.rest)]);
                let f = g.bracket(&cols[g.f(rc.simple)], &cols[g.f(rc.rest)]);
                cols[g.e(r)] = e.iter().map(|x| x * &inv).collect();
                cols[g.f(r)] = f.iter().map(|x| -(x * &inv)).collect();
            }
        }
    }
    for i in 0..l {
        cols[g.h(i)] = g.basis_vec(g.h(perm[i]));
    }
    let one_based: Vec<usize> = perm.iter().map(|p| p + 1).collect();
    FiniteOrderAut::from_matrix(Matrix::from_cols(d, &cols), format!("diagram{one_based:?}"))
}

/// Automorphism scaling `g_alpha` by `chi(alpha)`, with `chi` given on simple roots.
pub fn make_torus_aut(g: &ChevalleyAlgebra, chi: &[CycScalar]) -> Result<FiniteOrderAut> {
    let l = g.rank();
    if chi.len() != l {
        return Err(Error::Invalid(format!("expected {l} character values")));
    }
    for (i, c) in chi.iter().enumerate() {
        if c.root_order().is_none() {
            return Err(Error::NotRootOfUnity(format!("value on alpha_{} is {c}", i + 1)));
        }
    }
    let d = g.dim();
    let mut m = Matrix::identity(d);
    for r in 0..g.num_positive() {
        let mut v = CycScalar::one();
        for (i, &c) in g.roots.positive[r].iter().enumerate() {
            v = &v * &chi[i].pow(c).unwrap();
        }
        m.set(g.f(r), g.f(r), v.inverse().unwrap());
        m.set(g.e(r), g.e(r), v);
    }
    let vals: Vec<String> = chi.iter().map(|c| c.to_string()).collect();
    FiniteOrderAut::from_matrix(m, format!("torus[{}]", vals.join(", ")))
}

/// The grading group G = Z^n / (m_1 Z + ... + m_n Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingGroup {
    pub m: Vec<u32>,
}

impl GradingGroup {
    pub fn new(m: Vec<u32>) -> Self {
        assert!(m.iter().all(|&x| x >= 1));
        GradingGroup { m }
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn order(&self) -> usize {
        self.m.iter().map(|&x| x as usize).product()
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for &mi in &self.m {
            out = out.into_iter().flat_map(|p| (0..mi).map(move |k| [p.clone(), vec![k]].concat())).collect();
        }
        out
    }

    pub fn quotient(&self, k: &[i64]) -> Vec<u32> {
        k.iter().zip(&self.m).map(|(&x, &m)| x.rem_euclid(m as i64) as u32).collect()
    }

    pub fn index(&self, kbar: &[u32]) -> usize {
        let mut idx = 0;
        for (&k, &m) in kbar.iter().zip(&self.m) {
            idx = idx * m as usize + k as usize;
        }
        idx
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.m).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn in_gamma(&self, k: &[i64]) -> bool {
        k.iter().zip(&self.m).all(|(&x, &m)| x.rem_euclid(m as i64) == 0)
    }
}

/// Verifies commutation, exact orders and the generated-group order.
pub fn validate_tuple(sigmas: &[FiniteOrderAut], m: &[u32]) -> Result<GradingGroup> {
    if sigmas.len() != m.len() {
        return Err(Error::Invalid(format!("{} automorphisms but {} orders", sigmas.len(), m.len())));
    }
    for i in 0..sigmas.len() {
        for j in i + 1..sigmas.len() {
            if sigmas[i].matrix.mul(&sigmas[j].matrix) != sigmas[j].matrix.mul(&sigmas[i].matrix) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    for (i, (s, &mi)) in sigmas.iter().zip(m).enumerate() {
        if s.order != mi {
            return Err(Error::OrderMismatch { index: i, actual: s.order, expected: mi });
        }
    }
    let group = GradingGroup::new(m.to_vec());
    let dim = sigmas.first().map_or(0, |s| s.matrix.rows);
    let mut distinct: Vec<Matrix> = Vec::new();
    for k in group.elements() {
        let mut p = Matrix::identity(dim);
        for (s, &e) in sigmas.iter().zip(&k) {
            p = p.mul(&s.matrix.pow(e));
        }
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    if !sigmas.is_empty() && distinct.len() != group.order() {
        return Err(Error::GroupOrderViolation { actual: distinct.len(), expected: group.order() });
    }
    Ok(group)
}

/// Restricted weight: values on the chosen basis of `h_0`.
pub type HWeight = Vec<CycScalar>;

/// Joint eigenspace piece `g_k(alpha)`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub class: Vec<u32>,
    pub weight: usize,
    pub basis: Vec<Vector>,
}

/// Root data of the fixed-point subalgebra relative to `h_0`.
#[derive(Clone, Debug)]
pub struct FixedRootData {
    /// Indices into the decomposition's weight list.
    pub roots: Vec<usize>,
    pub positive: Vec<usize>,
    pub simple: Vec<usize>,
    /// Coroot of each simple root, in `h_0` coordinates.
    pub simple_coroots: Vec<Vector>,
    /// Coroot of every root (same order as `roots`), in `h_0` coordinates.
    pub coroots: Vec<Vector>,
    pub cartan: Vec<Vec<i64>>,
    pub type_name: Option<(char, usize)>,
    /// Squared lengths of the roots, same order as `roots`.
    pub lengths: Vec<CycScalar>,
}

#[derive(Clone, Debug)]
pub struct EigenspaceDecomposition {
    pub g: Arc<ChevalleyAlgebra>,
    pub sigmas: Vec<FiniteOrderAut>,
    pub group: GradingGroup,
    /// Basis of `h_0 = h ∩ g_0` as vectors of `g`.
    pub h0: Vec<Vector>,
    h0_span: Span,
    /// Coordinates of the sum of fundamental coweights on `h0`, when it lies there.
    pub rho_check: Option<Vector>,
    pub weights: Vec<HWeight>,
    pub pieces: Vec<Piece>,
    /// Piece indices for each group element (by `group.index`).
    pub class_pieces: Vec<Vec<usize>>,
    class_spans: Vec<Span>,
    /// Inverse of the matrix whose columns are all piece basis vectors.
    basis_inverse: Matrix,
    basis_classes: Vec<Vec<u32>>,
    pub root_data: std::result::Result<FixedRootData, String>,
}

/// Eigenvalue `xi_i^k` for order `m`.
pub fn xi_pow(m: u32, k: i64) -> CycScalar {
    CycScalar::root_of_unity(m, k)
}

pub fn eigenspace_decompose(
    g: Arc<ChevalleyAlgebra>,
    sigmas: Vec<FiniteOrderAut>,
    group: GradingGroup,
) -> Result<EigenspaceDecomposition> {
    let d = g.dim();
    let l = g.rank();
    let hidx: Vec<usize> = (0..l).map(|i| g.h(i)).collect();

    // h_0: vectors supported on h fixed by every sigma
    let h0: Vec<Vector> = if sigmas.is_empty() {
        hidx.iter().map(|&a| g.basis_vec(a)).collect()
    } else {
        let parts: Vec<Matrix> = sigmas
            .iter()
            .map(|s| {
                let mut m = Matrix::zeros(d, l);
                for (c, &a) in hidx.iter().enumerate() {
                    let col = s.matrix.col(a);
                    for r in 0..d {
                        let v = if r == a { &col[r] - &CycScalar::one() } else { col[r].clone() };
                        m.set(r, c, v);
                    }
                }
                m
            })
            .collect();
        Matrix::vstack(&parts)
            .nullspace()
            .into_iter()
            .map(|c| {
                let mut v = zero_vec(d);
                for (k, &a) in hidx.iter().enumerate() {
                    v[a] = c[k].clone();
                }
                v
            })
            .collect()
    };
    let mut h0_span = Span::new(d);
    for v in &h0 {
        h0_span.insert(v);
    }

    // restricted weight of each basis element
    let basis_weight = |a: usize| -> HWeight {
        let w = g.basis_weight(a);
        h0.iter()
            .map(|b| {
                let mut acc = CycScalar::zero();
                for i in 0..l {
                    let p = g.roots.pairing(&w, i);
                    if p != 0 && !b[g.h(i)].is_zero() {
                        acc += &(&b[g.h(i)] * &CycScalar::from_int(p));
                    }
                }
                acc
            })
            .collect()
    };
    let mut weights: Vec<HWeight> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..d {
        let w = basis_weight(a);
        match weights.iter().position(|x| *x == w) {
            Some(p) => members[p].push(a),
            None => {
                weights.push(w);
                members.push(vec![a]);
            }
        }
    }

    let mut pieces: Vec<Piece> = Vec::new();
    let mut class_pieces = vec![Vec::new(); group.order()];
    for (wi, mem) in members.iter().enumerate() {
        let k = mem.len();
        for class in group.elements() {
            let mut parts = Vec::new();
            for (s, (&c, &m)) in sigmas.iter().zip(class.iter().zip(&group.m)) {
                let ev = xi_pow(m, c as i64);
                let mut block = Matrix::zeros(d, k);
                for (col, &a) in mem.iter().enumerate() {
                    let img = s.matrix.col(a);
                    for r in 0..d {
                        let v = if r == a { &img[r] - &ev } else { img[r].clone() };
                        block.set(r, col, v);
                    }
                }
                parts.push(block);
            }
            let ns = if parts.is_empty() {
                if class.iter().all(|&c| c == 0) {
                    (0..k).map(|i| unit_vec(k, i)).collect()
                } else {
                    vec![]
                }
            } else {
                Matrix::vstack(&parts).nullspace()
            };
            if ns.is_empty() {
                continue;
            }
            let basis: Vec<Vector> = ns
                .into_iter()
                .map(|c| {
                    let mut v = zero_vec(d);
                    for (i, &a) in mem.iter().enumerate() {
                        v[a] = c[i].clone();
                    }
                    v
                })
                .collect();
            class_pieces[group.index(&class)].push(pieces.len());
            pieces.push(Piece { class, weight: wi, basis });
        }
    }
    let mut class_spans = Vec::new();
    let mut all_cols = Vec::new();
    let mut basis_classes = Vec::new();
    for (ci, plist) in class_pieces.iter().enumerate() {
        let mut sp = Span::new(d);
        for &p in plist {
            for v in &pieces[p].basis {
                sp.insert(v);
                all_cols.push(v.clone());
                basis_classes.push(group.elements()[ci].clone());
            }
        }
        class_spans.push(sp);
    }
    if all_cols.len() != d {
        return Err(Error::Invalid(format!(
            "eigenspaces span {} of {} dimensions; the automorphisms are not simultaneously diagonalizable over the field",
            all_cols.len(),
            d
        )));
    }
    let basis_inverse = Matrix::from_cols(d, &all_cols).inverse().expect("eigenbasis is a basis");

    // sum of fundamental coweights
    let amat = Matrix::from_rows(
        &(0..l).map(|i| (0..l).map(|j| CycScalar::from_int(g.roots.cartan[i][j])).collect()).collect::<Vec<_>>(),
    );
    let ainv = amat.inverse().unwrap();
    let mut rho = zero_vec(d);
    for k in 0..l {
        let mut s = CycScalar::zero();
        for i in 0..l {
            s += ainv.get(i, k);
        }
        rho[g.h(k)] = s;
    }
    let rho_check = h0_span.coords(&rho);

    let mut dec = EigenspaceDecomposition {
        g,
        sigmas,
        group,
        h0,
        h0_span,
        rho_check,
        weights,
        pieces,
        class_pieces,
        class_spans,
        basis_inverse,
        basis_classes,
        root_data: Err(String::new()),
    };
    dec.root_data = dec.compute_root_data();
    Ok(dec)
}

impl EigenspaceDecomposition {
    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn m(&self) -> &[u32] {
        &self.group.m
    }

    pub fn zero_class(&self) -> Vec<u32> {
        vec![0; self.n()]
    }

    pub fn zero_weight(&self) -> usize {
        let z: HWeight = vec![CycScalar::zero(); self.h0.len()];
        self.weights.iter().position(|w| *w == z).expect("h lies in the zero weight space")
    }

    /// Basis of `g_kbar`.
    pub fn class_basis(&self, kbar: &[u32]) -> Vec<Vector> {
        self.class_pieces[self.group.index(kbar)]
            .iter()
            .flat_map(|&p| self.pieces[p].basis.iter().cloned())
            .collect()
    }

    pub fn class_dim(&self, kbar: &[u32]) -> usize {
        self.class_spans[self.group.index(kbar)].rank()
    }

    /// Pieces `g_kbar(alpha)` of one class.
    pub fn class_piece_list(&self, kbar: &[u32]) -> Vec<&Piece> {
        self.class_pieces[self.group.index(kbar)].iter().map(|&p| &self.pieces[p]).collect()
    }

    pub fn piece(&self, kbar: &[u32], weight: usize) -> Option<&Piece> {
        self.class_piece_list(kbar).into_iter().find(|p| p.weight == weight)
    }

    /// Coordinates of `x` in the basis of `g_kbar`, or `None` if `x` is not in it.
    pub fn class_coords(&self, kbar: &[u32], x: &[CycScalar]) -> Option<Vector> {
        self.class_spans[self.group.index(kbar)].coords(x)
    }

    pub fn in_class(&self, kbar: &[u32], x: &[CycScalar]) -> bool {
        self.class_spans[self.group.index(kbar)].contains(x)
    }

    /// Components of `x` in each class.
    pub fn split_by_class(&self, x: &[CycScalar]) -> Vec<(Vec<u32>, Vector)> {
        let c = self.basis_inverse.mul_vec(x);
        let d = self.g.dim();
        let mut out: Vec<(Vec<u32>, Vector)> = Vec::new();
        let mut start = 0;
        for plist in &self.class_pieces {
            let mut v = zero_vec(d);
            let mut cnt = 0;
            for &p in plist {
                for b in &self.pieces[p].basis {
                    crate::linalg::axpy(&mut v, &c[start + cnt], b);
                    cnt += 1;
                }
            }
            if cnt > 0 && !is_zero_vec(&v) {
                out.push((self.basis_classes[start].clone(), v));
            }
            start += cnt;
        }
        out
    }

    pub fn h0_coords(&self, h: &[CycScalar]) -> Option<Vector> {
        self.h0_span.coords(h)
    }

    /// Evaluates a restricted weight on an element of `h_0`.
    pub fn eval_weight(&self, w: &[CycScalar], h: &[CycScalar]) -> CycScalar {
        let c = self.h0_coords(h).expect("element of h_0");
        crate::linalg::dot(w, &c)
    }

    /// Restriction to `h_0` of a weight of `h` in fundamental-weight coordinates.
    pub fn restrict_weight(&self, mu: &[i64]) -> HWeight {
        self.h0
            .iter()
            .map(|b| {
                let mut acc = CycScalar::zero();
                for (i, &m) in mu.iter().enumerate() {
                    if m != 0 {
                        acc += &(&b[self.g.h(i)] * &CycScalar::from_int(m));
                    }
                }
                acc
            })
            .collect()
    }

    /// Value of a restricted weight on the sum of fundamental coweights.
    pub fn height(&self, w: &[CycScalar]) -> Option<CycScalar> {
        self.rho_check.as_ref().map(|r| crate::linalg::dot(w, r))
    }

    pub fn is_positive(&self, w: &[CycScalar]) -> bool {
        matches!(self.height(w).and_then(|h| h.rational_sign()), Some(std::cmp::Ordering::Greater))
    }

    pub fn weight_index(&self, w: &[CycScalar]) -> Option<usize> {
        self.weights.iter().position(|x| x.as_slice() == w)
    }

    fn compute_root_data(&self) -> std::result::Result<FixedRootData, String> {
        let g = &self.g;
        let zero_cls = self.zero_class();
        let zw = self.zero_weight();
        let Some(_) = self.rho_check else {
            return Err("the sum of fundamental coweights does not lie in h_0".into());
        };
        let g0 = self.class_piece_list(&zero_cls);
        let dim00 = g0.iter().find(|p| p.weight == zw).map_or(0, |p| p.basis.len());
        if dim00 != self.h0.len() {
            return Err(format!("centralizer of h_0 in g_0 has dimension {dim00} > dim h_0 = {}", self.h0.len()));
        }
        let mut roots: Vec<usize> = Vec::new();
        for p in &g0 {
            if p.weight == zw {
                continue;
            }
            if p.basis.len() != 1 {
                return Err("a root space of g_0 is not one-dimensional".into());
            }
            roots.push(p.weight);
        }
        let mut coroots = Vec::new();
        let mut lengths = Vec::new();
        for &r in &roots {
            let neg: HWeight = self.weights[r].iter().map(|x| -x).collect();
            let Some(nr) = self.weight_index(&neg) else { return Err("roots of g_0 are not symmetric".into()) };
            let Some(np) = self.piece(&zero_cls, nr) else { return Err("roots of g_0 are not symmetric".into()) };
            let x = &self.piece(&zero_cls, r).unwrap().basis[0];
            let y = &np.basis[0];
            let h = g.bracket(x, y);
            let Some(hc) = self.h0_coords(&h) else { return Err("[x_a, x_-a] is not in h_0".into()) };
            let ah = crate::linalg::dot(&self.weights[r], &hc);
            if ah.is_zero() {
                return Err("a root vanishes on its coroot".into());
            }
            let two = CycScalar::from_int(2);
            let scale = &two / &ah;
            let cor: Vector = hc.iter().map(|v| v * &scale).collect();
            let hv: Vector = h.iter().map(|v| v * &scale).collect();
            let len = &CycScalar::from_int(4) / &g.form(&hv, &hv);
            coroots.push(cor);
            lengths.push(len);
        }
        let positive: Vec<usize> = roots.iter().copied().filter(|&r| self.is_positive(&self.weights[r])).collect();
        let simple: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&r| {
                !positive.iter().any(|&a| {
                    let diff: HWeight = self.weights[r].iter().zip(&self.weights[a]).map(|(x, y)| x - y).collect();
                    self.weight_index(&diff).is_some_and(|i| positive.contains(&i))
                })
            })
            .collect();
        let simple_coroots: Vec<Vector> =
            simple.iter().map(|s| coroots[roots.iter().position(|r| r == s).unwrap()].clone()).collect();
        let mut cartan = vec![vec![0i64; simple.len()]; simple.len()];
        for i in 0..simple.len() {
            for j in 0..simple.len() {
                let v = crate::linalg::dot(&self.weights[simple[j]], &simple_coroots[i]);
                match v.to_i64() {
                    Some(x) => cartan[i][j] = x,
                    None => return Err("Cartan matrix of g_0 is not integral".into()),
                }
            }
        }
        let type_name = classify_cartan(&cartan);
        Ok(FixedRootData { roots, positive, simple, simple_coroots, coroots, cartan, type_name, lengths })
    }

    /// Values of a restricted weight on the simple coroots of `g_0`.
    pub fn dynkin_labels(&self, w: &[CycScalar]) -> Option<Vec<CycScalar>> {
        let rd = self.root_data.as_ref().ok()?;
        Some(rd.simple_coroots.iter().map(|c| crate::linalg::dot(w, c)).collect())
    }

    /// Extended root set of `g_0` as weight vectors (zero excluded).
    pub fn extended_fixed_roots(&self) -> Option<Vec<HWeight>> {
        let rd = self.root_data.as_ref().ok()?;
        let mut out: Vec<HWeight> = rd.roots.iter().map(|&r| self.weights[r].clone()).collect();
        let rank = rd.simple.len();
        let type_b = rank == 1 || matches!(rd.type_name, Some(('B', _)));
        if type_b {
            let max = rd.lengths.iter().filter_map(|x| x.to_rational()).fold(Rational::zero(), |a, b| if b > a { b } else { a });
            for (k, &r) in rd.roots.iter().enumerate() {
                let short = rd.lengths[k].to_rational().is_some_and(|x| x < max);
                if rank == 1 || short {
                    out.push(self.weights[r].iter().map(|x| x * &CycScalar::from_int(2)).collect());
                }
            }
        }
        Some(out)
    }

    /// Coordinates of `[x, y]` in `g_kbar` for x in g_0 and y in g_kbar.
    fn ad_matrix_on_class(&self, x: &[CycScalar], kbar: &[u32], basis: &[Vector]) -> Matrix {
        let cols: Vec<Vector> = basis
            .iter()
            .map(|b| self.class_coords(kbar, &self.g.bracket(x, b)).expect("grading is compatible with the bracket"))
            .collect();
        Matrix::from_cols(basis.len(), &cols)
    }

    /// The automorphism `alpha_chi` scaling `g_kbar` by `chi(kbar)`.
    pub fn character_aut(&self, chi: &Character) -> Result<FiniteOrderAut> {
        let vals: Vec<CycScalar> = match chi {
            Character::Exponents(d) => {
                if d.len() != self.n() {
                    return Err(Error::NotAHomomorphism(format!("expected {} exponents", self.n())));
                }
                d.iter().zip(self.m()).map(|(&e, &m)| xi_pow(m, e)).collect()
            }
            Character::Values(v) => {
                if v.len() != self.n() {
                    return Err(Error::NotAHomomorphism(format!("expected {} values", self.n())));
                }
                for (i, (x, &m)) in v.iter().zip(self.m()).enumerate() {
                    if !x.pow(m as i64)?.is_one() {
                        return Err(Error::NotAHomomorphism(format!(
                            "value {x} on generator {} is not a {m}-th root of unity",
                            i + 1
                        )));
                    }
                }
                v.clone()
            }
        };
        let d = self.g.dim();
        let mut diag = Matrix::zeros(d, d);
        let mut col = 0;
        for plist in &self.class_pieces {
            for &p in plist {
                let class = &self.pieces[p].class;
                let mut s = CycScalar::one();
                for (v, &k) in vals.iter().zip(class) {
                    s = &s * &v.pow(k as i64)?;
                }
                for _ in &self.pieces[p].basis {
                    diag.set(col, col, s.clone());
                    col += 1;
                }
            }
        }
        let all: Vec<Vector> =
            self.class_pieces.iter().flat_map(|pl| pl.iter().flat_map(|&p| self.pieces[p].basis.iter().cloned())).collect();
        let b = Matrix::from_cols(d, &all);
        let matrix = b.mul(&diag).mul(&self.basis_inverse);
        let desc: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
        FiniteOrderAut::from_matrix(matrix, format!("character[{}]", desc.join(", ")))
    }

    /// Orbit of a dominant weight under outer parts of character automorphisms,
    /// with `lambda` first.
    pub fn ghat_orbit(&self, lambda: &[i64]) -> Result<Vec<Vec<i64>>> {
        crate::liealg::check_dominant(lambda, self.g.rank())?;
        let mut orbit = vec![lambda.to_vec()];
        for d in self.group.elements() {
            let perm = self.character_outer_part(&d)?;
            let mu = permute_weight(lambda, &perm);
            if !orbit.contains(&mu) {
                orbit.push(mu);
            }
        }
        Ok(orbit)
    }

    /// Outer part of the character automorphism with exponents `d`.
    pub fn character_outer_part(&self, d: &[u32]) -> Result<Vec<usize>> {
        let e: Vec<i64> = d.iter().map(|&x| x as i64).collect();
        let phi = self.character_aut(&Character::Exponents(e))?;
        outer_part(&self.g, &phi)
    }

    /// First exponent vector (lexicographic) whose character sends `from` to `to`.
    pub fn character_between(&self, from: &[i64], to: &[i64]) -> Result<Option<Vec<u32>>> {
        for d in self.group.elements() {
            let perm = self.character_outer_part(&d)?;
            if permute_weight(from, &perm) == to {
                return Ok(Some(d));
            }
        }
        Ok(None)
    }
}

/// Character of G, by exponents (`chi(e_i) = xi_i^{d_i}`) or by values on generators.
#[derive(Clone, Debug)]
pub enum Character {
    Exponents(Vec<i64>),
    Values(Vec<CycScalar>),
}

/// `(lambda o gamma)_i = lambda_{gamma(i)}`.
pub fn permute_weight(lambda: &[i64], perm: &[usize]) -> Vec<i64> {
    perm.iter().map(|&p| lambda[p]).collect()
}

/// Residual simple-root permutation of an automorphism preserving `h`.
pub fn outer_part(g: &ChevalleyAlgebra, phi: &FiniteOrderAut) -> Result<Vec<usize>> {
    if !phi.preserves_cartan(g) {
        return Err(Error::CartanNotPreserved(phi.description.clone()));
    }
    let l = g.rank();
    let mut images: Vec<Vec<i64>> = Vec::with_capacity(l);
    for i in 0..l {
        let img = phi.matrix.col(g.e(i));
        let support: Vec<usize> = (0..g.dim()).filter(|&a| !img[a].is_zero()).collect();
        if support.len() != 1 || matches!(g.kind(support[0]), BasisKind::H(_)) {
            return Err(Error::CartanNotPreserved(format!("{} does not map root spaces to root spaces", phi.description)));
        }
        images.push(g.basis_weight(support[0]));
    }
    let rs = &g.roots;
    let mut two_rho = vec![0i64; l];
    for r in &rs.positive {
        for i in 0..l {
            two_rho[i] += r[i];
        }
    }
    let mut v = vec![0i64; l];
    for i in 0..l {
        for j in 0..l {
            v[j] += two_rho[i] * images[i][j];
        }
    }
    loop {
        let Some(j) = (0..l).find(|&j| rs.pairing(&v, j) < 0) else { break };
        v = rs.reflect(&v, j);
        for b in images.iter_mut() {
            *b = rs.reflect(b, j);
        }
    }
    images
        .iter()
        .map(|b| {
            b.iter()
                .position(|&x| x == 1)
                .filter(|_| b.iter().map(|x| x.abs()).sum::<i64>() == 1)
                .ok_or_else(|| Error::CartanNotPreserved("image of the base is not a base".into()))
        })
        .collect()
}

/// One entry of a Lie-torus report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct LieTorusReport {
    pub entries: Vec<CheckEntry>,
}

impl LieTorusReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn intersection_dim(a: &[Vector], b: &[Vector], dim: usize) -> usize {
    let mut s = Span::new(dim);
    for v in a.iter().chain(b) {
        s.insert(v);
    }
    let ra = Matrix::from_cols(dim, a).rank();
    let rb = Matrix::from_cols(dim, b).rank();
    ra + rb - s.rank()
}

/// Checks the Lie-torus conditions on the grading: simplicity of `g_0`,
/// condition (M) on every nonzero class, one-dimensional root spaces, and a
/// trivial centre of the multiloop algebra on the window `[-w, w]^n`.
pub fn check_lie_torus(dec: &EigenspaceDecomposition, window: i64) -> LieTorusReport {
    let mut entries = Vec::new();
    let g = &dec.g;
    let zero_cls = dec.zero_class();
    let g0 = dec.class_basis(&zero_cls);

    // (1) g_0 simple
    let simple = (|| -> std::result::Result<String, String> {
        if g0.is_empty() {
            return Err("g_0 is zero".into());
        }
        let d0 = g0.len();
        let ads: Vec<Matrix> = g0.iter().map(|x| dec.ad_matrix_on_class(x, &zero_cls, &g0)).collect();
        let mut kill = Matrix::zeros(d0, d0);
        for i in 0..d0 {
            for j in i..d0 {
                let v = ads[i].mul(&ads[j]).trace();
                kill.set(i, j, v.clone());
                kill.set(j, i, v);
            }
        }
        if kill.rank() != d0 {
            return Err(format!("Killing form of g_0 (dim {d0}) is degenerate"));
        }
        let rd = dec.root_data.as_ref().map_err(|e| e.clone())?;
        if !is_connected(&rd.cartan) {
            return Err("Dynkin diagram of g_0 is disconnected".into());
        }
        Ok(match rd.type_name {
            Some((t, r)) => format!("g_0 simple of type {t}{r}, dim {d0}"),
            None => format!("g_0 simple, dim {d0}"),
        })
    })();
    entries.push(CheckEntry {
        name: "g0_simple".into(),
        pass: simple.is_ok(),
        detail: simple.unwrap_or_else(|e| e),
    });

    // (2) condition (M)
    let cond_m = (|| -> std::result::Result<String, String> {
        let rd = dec.root_data.as_ref().map_err(|e| format!("root data of g_0 unavailable: {e}"))?;
        let ext = dec.extended_fixed_roots().unwrap();
        let positive_vecs: Vec<Vector> = rd
            .positive
            .iter()
            .map(|&r| dec.piece(&zero_cls, r).unwrap().basis[0].clone())
            .collect();
        let zw = dec.zero_weight();
        let mut notes = Vec::new();
        for kbar in dec.group.elements() {
            if kbar == zero_cls {
                continue;
            }
            let basis = dec.class_basis(&kbar);
            let dk = basis.len();
            if dk == 0 {
                continue;
            }
            let ads: Vec<Matrix> = g0.iter().map(|x| dec.ad_matrix_on_class(x, &kbar, &basis)).collect();
            let u = Matrix::vstack(&ads).nullspace();
            let mut wspan = Span::new(dk);
            let mut w_vecs = Vec::new();
            for a in &ads {
                for j in 0..dk {
                    let c = a.col(j);
                    if wspan.insert(&c) {
                        w_vecs.push(c);
                    }
                }
            }
            if intersection_dim(&u, &w_vecs, dk) != 0 || u.len() + w_vecs.len() != dk {
                return Err(format!("class {kbar:?}: g_k is not U ⊕ W"));
            }
            if w_vecs.is_empty() {
                notes.push(format!("{kbar:?}: W=0"));
                continue;
            }
            if w_vecs.len() == 1 {
                return Err(format!("class {kbar:?}: W is one-dimensional"));
            }
            let pos_ads: Vec<Matrix> = positive_vecs.iter().map(|x| dec.ad_matrix_on_class(x, &kbar, &basis)).collect();
            let top = if pos_ads.is_empty() {
                (0..dk).map(|i| unit_vec(dk, i)).collect()
            } else {
                Matrix::vstack(&pos_ads).nullspace()
            };
            let hw = intersection_dim(&top, &w_vecs, dk);
            if hw != 1 {
                return Err(format!("class {kbar:?}: W has {hw} highest weight vectors"));
            }
            // generate from a highest weight vector and compare dimensions
            let mut joined: Vec<Vector> = top.clone();
            joined.extend(w_vecs.iter().cloned());
            let v0 = {
                let mut sp = Span::new(dk);
                for w in &w_vecs {
                    sp.insert(w);
                }
                top.iter().find(|t| sp.contains(t)).cloned().unwrap_or_else(|| {
                    // a vector in top ∩ W
                    let m = Matrix::from_cols(dk, &joined);
                    let ns = m.nullspace();
                    let c = &ns[0];
                    let mut v = zero_vec(dk);
                    for (i, t) in top.iter().enumerate() {
                        crate::linalg::axpy(&mut v, &c[i], t);
                    }
                    v
                })
            };
            let mut gen = Span::new(dk);
            gen.insert(&v0);
            let mut queue = vec![v0];
            while let Some(v) = queue.pop() {
                for a in &ads {
                    let nv = a.mul_vec(&v);
                    if gen.insert(&nv) {
                        queue.push(nv);
                    }
                }
            }
            if gen.rank() != w_vecs.len() {
                return Err(format!("class {kbar:?}: W is reducible"));
            }
            // weights of W
            for p in dec.class_piece_list(&kbar) {
                let in_w = if p.weight == zw { p.basis.len() > u.len() } else { true };
                if !in_w || p.weight == zw {
                    continue;
                }
                if !ext.iter().any(|r| *r == dec.weights[p.weight]) {
                    return Err(format!("class {kbar:?}: weight outside the extended root set"));
                }
            }
            notes.push(format!("{kbar:?}: dim U={}, W irreducible of dim {}", u.len(), w_vecs.len()));
        }
        Ok(notes.join("; "))
    })();
    entries.push(CheckEntry { name: "condition_m".into(), pass: cond_m.is_ok(), detail: cond_m.unwrap_or_else(|e| e) });

    // LT3
    let zw = dec.zero_weight();
    let bad: Vec<String> = dec
        .pieces
        .iter()
        .filter(|p| p.weight != zw && p.basis.len() > 1)
        .map(|p| format!("{:?}: dim {}", p.class, p.basis.len()))
        .collect();
    entries.push(CheckEntry {
        name: "lt3_root_spaces".into(),
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "all root spaces have dim <= 1".into() } else { bad.join("; ") },
    });

    // LT4: centre of the multiloop algebra on the window
    let degrees = window_degrees(dec.n(), window);
    let mut centre = 0;
    for k in &degrees {
        let kbar = dec.group.quotient(k);
        let basis = dec.class_basis(&kbar);
        if basis.is_empty() {
            continue;
        }
        let mut rows: Vec<Matrix> = Vec::new();
        for l in &degrees {
            let s: Vec<i64> = k.iter().zip(l).map(|(a, b)| a + b).collect();
            if s.iter().any(|x| x.abs() > window) {
                continue;
            }
            let lbar = dec.group.quotient(l);
            for y in dec.class_basis(&lbar) {
                let cols: Vec<Vector> = basis.iter().map(|b| g.bracket(b, &y)).collect();
                rows.push(Matrix::from_cols(g.dim(), &cols));
            }
        }
        centre += if rows.is_empty() { basis.len() } else { Matrix::vstack(&rows).nullspace().len() };
    }
    entries.push(CheckEntry {
        name: "lt4_centre".into(),
        pass: centre == 0,
        detail: format!("centre dimension on window {window}: {centre}"),
    });
    LieTorusReport { entries }
}

/// All degrees in `[-w, w]^n`, lexicographic.
pub fn window_degrees(n: usize, w: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|p| (-w..=w).map(move |k| [p.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Joint eigenspace dimensions by the rank of `(sigma_i - xi^k I)` stacked.
pub fn rank_oracle_dims(sigmas: &[FiniteOrderAut], group: &GradingGroup) -> Vec<usize> {
    let d = sigmas.first().map_or(0, |s| s.matrix.rows);
    group
        .elements()
        .iter()
        .map(|k| {
            let parts: Vec<Matrix> = sigmas
                .iter()
                .zip(k.iter().zip(&group.m))
                .map(|(s, (&c, &m))| s.matrix.sub(&Matrix::identity(d).scale(&xi_pow(m, c as i64))))
                .collect();
            d - Matrix::vstack(&parts).rank()
        })
        .collect()
}

/// Parses a character value map `{"alpha_1": "z^k@N", ...}` into values on simple roots.
pub fn character_values(rank: usize, entries: &[(usize, CycScalar)]) -> Vec<CycScalar> {
    let mut v = vec![CycScalar::one(); rank];
    for (i, c) in entries {
        v[*i] = c.clone();
    }
    v
}
