use std::sync::Arc;

use serde_json::{json, Value};

use super::highest::{build_generators, GeneratorRep};
use super::rootsys::{check_dominant, RootSystem};
use crate::error::Result;
use crate::linalg::{axpy, zero_vec, Matrix, SparseMatrix, Vector};
use crate::scalar::{CycScalar, Rational};

/// How a non-simple positive root vector is obtained: `e_xi = [e_i, e_beta] / (p+1)`.
#[derive(Clone, Debug)]
pub struct RootRecipe {
    pub simple: usize,
    pub rest: usize,
    pub p: i64,
}

/// Kind of a Chevalley basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    E(usize),
    F(usize),
    H(usize),
}

/// Simple Lie algebra in a Chevalley basis: `e_alpha` for positive roots,
/// then `f_alpha`, then `h_i`.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    pub roots: RootSystem,
    pub recipes: Vec<Option<RootRecipe>>,
    dim: usize,
    /// `table[a * dim + b]` is the sparse expansion of `[x_a, x_b]`.
    table: Vec<Vec<(usize, CycScalar)>>,
    /// Nonzero entries of the invariant form.
    form: Vec<Vec<(usize, CycScalar)>>,
}

impl ChevalleyAlgebra {
    pub fn build(letter: char, rank: usize) -> Result<Self> {
        let roots = RootSystem::new(letter, rank)?;
        Ok(Self::from_root_system(roots))
    }

    pub fn from_root_system(roots: RootSystem) -> Self {
        let l = roots.rank;
        let np = roots.num_positive();
        let recipes: Vec<Option<RootRecipe>> = roots
            .positive
            .iter()
            .map(|xi| {
                if RootSystem::height(xi) == 1 {
                    return None;
                }
                let (simple, rest) = (0..l)
                    .find_map(|i| {
                        let mut b = xi.clone();
                        b[i] -= 1;
                        roots.index_of(&b).map(|r| (i, r))
                    })
                    .expect("non-simple root has a simple predecessor");
                let mut p = 0;
                let mut cur = roots.positive[rest].clone();
                loop {
                    cur[simple] -= 1;
                    if cur.iter().all(|&x| x >= 0) && roots.index_of(&cur).is_some() {
                        p += 1;
                    } else {
                        break;
                    }
                }
                Some(RootRecipe { simple, rest, p })
            })
            .collect();

        // a faithful module: the smallest fundamental one
        let fund = (0..l)
            .min_by_key(|&i| {
                let mut w = vec![0; l];
                w[i] = 1;
                roots.weyl_dimension(&w).unwrap()
            })
            .unwrap();
        let mut w = vec![0; l];
        w[fund] = 1;
        let gens = build_generators(&roots.cartan, &w);
        let mats = basis_matrices(&roots, &recipes, &gens);

        let dim = 2 * np + l;
        let mut alg = ChevalleyAlgebra { roots, recipes, dim, table: Vec::new(), form: Vec::new() };
        alg.table = alg.compute_table(&mats);
        alg.form = alg.compute_form();
        alg
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn num_positive(&self) -> usize {
        self.roots.num_positive()
    }

    pub fn kind(&self, a: usize) -> BasisKind {
        let np = self.num_positive();
        if a < np {
            BasisKind::E(a)
        } else if a < 2 * np {
            BasisKind::F(a - np)
        } else {
            BasisKind::H(a - 2 * np)
        }
    }

    pub fn e(&self, root: usize) -> usize {
        root
    }

    pub fn f(&self, root: usize) -> usize {
        self.num_positive() + root
    }

    pub fn h(&self, i: usize) -> usize {
        2 * self.num_positive() + i
    }

    pub fn label(&self, a: usize) -> String {
        match self.kind(a) {
            BasisKind::E(r) => format!("e{}", r + 1),
            BasisKind::F(r) => format!("f{}", r + 1),
            BasisKind::H(i) => format!("h{}", i + 1),
        }
    }

    pub fn index_of_label(&self, s: &str) -> Option<usize> {
        let (head, num) = s.split_at(1);
        let k: usize = num.parse().ok()?;
        if k == 0 {
            return None;
        }
        let k = k - 1;
        match head {
            "e" if k < self.num_positive() => Some(self.e(k)),
            "f" if k < self.num_positive() => Some(self.f(k)),
            "h" if k < self.rank() => Some(self.h(k)),
            _ => None,
        }
    }

    /// Weight of a basis element in simple-root coordinates.
    pub fn basis_weight(&self, a: usize) -> Vec<i64> {
        match self.kind(a) {
            BasisKind::E(r) => self.roots.positive[r].clone(),
            BasisKind::F(r) => self.roots.positive[r].iter().map(|x| -x).collect(),
            BasisKind::H(_) => vec![0; self.rank()],
        }
    }

    fn compute_table(&self, mats: &[SparseMatrix]) -> Vec<Vec<(usize, CycScalar)>> {
        let d = self.dim;
        let l = self.rank();
        let mut table = vec![Vec::new(); d * d];
        let hdiag: Vec<Vector> = (0..l).map(|i| mats[self.h(i)].diagonal()).collect();
        for a in 0..d {
            for b in (a + 1)..d {
                let wa = self.basis_weight(a);
                let wb = self.basis_weight(b);
                let w: Vec<i64> = wa.iter().zip(&wb).map(|(x, y)| x + y).collect();
                let res: Vec<(usize, CycScalar)> = if let BasisKind::H(i) = self.kind(a) {
                    let c = self.roots.pairing(&wb, i);
                    if c == 0 { vec![] } else { vec![(b, CycScalar::from_int(c))] }
                } else if let BasisKind::H(i) = self.kind(b) {
                    let c = -self.roots.pairing(&wa, i);
                    if c == 0 { vec![] } else { vec![(a, CycScalar::from_int(c))] }
                } else if w.iter().all(|&x| x == 0) {
                    let c = mats[a].commutator(&mats[b]);
                    let diag = c.diagonal();
                    let sys = Matrix::from_cols(diag.len(), &hdiag);
                    let coef = sys.solve(&diag).expect("commutator lies in the Cartan subalgebra");
                    let mut check = SparseMatrix::zeros(c.rows, c.ncols());
                    for (i, ci) in coef.iter().enumerate() {
                        check = check.add(&mats[self.h(i)].scale(ci));
                    }
                    assert!(check.same_as(&c));
                    coef.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (self.h(i), v)).collect()
                } else if let Some(target) = self.index_of_weight(&w) {
                    let c = mats[a].commutator(&mats[b]);
                    let t = &mats[target];
                    let (j, (i, tv)) = t
                        .cols
                        .iter()
                        .enumerate()
                        .find_map(|(j, col)| col.iter().find(|(_, v)| !v.is_zero()).map(|e| (j, e.clone())))
                        .unwrap();
                    let cv = c.cols[j].iter().find(|(r, _)| *r == i).map(|(_, v)| v.clone()).unwrap_or_default();
                    let coef = &cv / &tv;
                    assert!(c.same_as(&t.scale(&coef)));
                    if coef.is_zero() { vec![] } else { vec![(target, coef)] }
                } else {
                    vec![]
                };
                table[b * d + a] = res.iter().map(|(k, v)| (*k, -v)).collect();
                table[a * d + b] = res;
            }
        }
        table
    }

    /// Basis index of the root vector of weight `w`, if `w` is a root.
    pub fn index_of_weight(&self, w: &[i64]) -> Option<usize> {
        if let Some(r) = self.roots.index_of(w) {
            return Some(self.e(r));
        }
        let neg: Vec<i64> = w.iter().map(|x| -x).collect();
        self.roots.index_of(&neg).map(|r| self.f(r))
    }

    fn compute_form(&self) -> Vec<Vec<(usize, CycScalar)>> {
        let d = self.dim;
        let l = self.rank();
        let two = Rational::from_integer(2.into());
        let mut form = vec![Vec::new(); d];
        for r in 0..self.num_positive() {
            let root = &self.roots.positive[r];
            let v = CycScalar::from_rational(&two / self.roots.ip(root, root));
            form[self.e(r)].push((self.f(r), v.clone()));
            form[self.f(r)].push((self.e(r), v));
        }
        for i in 0..l {
            for j in 0..l {
                let a = self.roots.cartan[i][j];
                if a != 0 {
                    // (h_i|h_j) = a_ij * 2/(alpha_j|alpha_j)
                    let v = Rational::from_integer(a.into()) / &self.roots.half_len[j];
                    form[self.h(i)].push((self.h(j), CycScalar::from_rational(v)));
                }
            }
        }
        form
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, CycScalar)] {
        &self.table[a * self.dim + b]
    }

    /// Bracket of two vectors in Chevalley coordinates.
    pub fn bracket(&self, x: &[CycScalar], y: &[CycScalar]) -> Vector {
        let mut out = zero_vec(self.dim);
        let ys: Vec<usize> = (0..self.dim).filter(|&b| !y[b].is_zero()).collect();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for &b in &ys {
                let entry = &self.table[a * self.dim + b];
                if entry.is_empty() {
                    continue;
                }
                let c = xa * &y[b];
                for (k, v) in entry {
                    out[*k] += &(&c * v);
                }
            }
        }
        out
    }

    pub fn form(&self, x: &[CycScalar], y: &[CycScalar]) -> CycScalar {
        let mut acc = CycScalar::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, v) in &self.form[a] {
                if !y[*b].is_zero() {
                    acc += &(&(xa * v) * &y[*b]);
                }
            }
        }
        acc
    }

    pub fn form_basis(&self, a: usize, b: usize) -> CycScalar {
        self.form[a].iter().find(|(k, _)| *k == b).map(|(_, v)| v.clone()).unwrap_or_default()
    }

    /// Matrix of ad x in the Chevalley basis.
    pub fn ad(&self, x: &[CycScalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim)
            .map(|b| {
                let mut y = zero_vec(self.dim);
                y[b] = CycScalar::one();
                self.bracket(x, &y)
            })
            .collect();
        Matrix::from_cols(self.dim, &cols)
    }

    pub fn killing(&self, x: &[CycScalar], y: &[CycScalar]) -> CycScalar {
        self.ad(x).mul(&self.ad(y)).trace()
    }

    pub fn basis_vec(&self, a: usize) -> Vector {
        crate::linalg::unit_vec(self.dim, a)
    }

    /// Coroot `h_alpha` of a positive root as a vector.
    pub fn coroot_vec(&self, root: usize) -> Vector {
        let c = self.roots.coroot(&self.roots.positive[root]);
        let mut v = zero_vec(self.dim);
        for (i, ci) in c.into_iter().enumerate() {
            v[self.h(i)] = CycScalar::from_rational(ci);
        }
        v
    }

    /// Test hook: returns a copy with one structure constant perturbed.
    #[doc(hidden)]
    pub fn with_corrupted_constant(&self, a: usize, b: usize, target: usize, delta: CycScalar) -> Self {
        let mut g = self.clone();
        let d = g.dim;
        for (x, y, s) in [(a, b, delta.clone()), (b, a, -&delta)] {
            let entry = &mut g.table[x * d + y];
            if let Some(e) = entry.iter_mut().find(|(k, _)| *k == target) {
                e.1 += &s;
            } else {
                entry.push((target, s));
            }
        }
        g
    }

    pub fn build_irrep(self: &Arc<Self>, lambda: &[i64]) -> Result<IrrepModule> {
        IrrepModule::new(self.clone(), lambda)
    }

    pub fn to_json(&self) -> Value {
        let labels: Vec<String> = (0..self.dim).map(|a| self.label(a)).collect();
        let mut constants = Vec::new();
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                for (c, v) in &self.table[a * self.dim + b] {
                    constants.push(json!([labels[a], labels[b], labels[*c], v.to_string()]));
                }
            }
        }
        json!({
            "type": format!("{}{}", self.roots.letter, self.rank()),
            "cartan": self.roots.cartan,
            "positive_roots": self.roots.positive,
            "basis": labels,
            "structure_constants": constants,
        })
    }
}

/// Matrices of every Chevalley basis element from the generator action.
pub fn basis_matrices(roots: &RootSystem, recipes: &[Option<RootRecipe>], gens: &GeneratorRep) -> Vec<SparseMatrix> {
    let np = roots.num_positive();
    let mut es: Vec<SparseMatrix> = Vec::with_capacity(np);
    let mut fs: Vec<SparseMatrix> = Vec::with_capacity(np);
    for (r, recipe) in recipes.iter().enumerate() {
        match recipe {
            None => {
                let i = roots.positive[r].iter().position(|&x| x == 1).unwrap();
                es.push(gens.e[i].clone());
                fs.push(gens.f[i].clone());
            }
            Some(RootRecipe { simple, rest, p }) => {
                let inv = CycScalar::frac(1, p + 1);
                es.push(gens.e[*simple].commutator(&es[*rest]).scale(&inv));
                fs.push(gens.f[*simple].commutator(&fs[*rest]).scale(&-inv));
            }
        }
    }
    let mut out = es;
    out.extend(fs);
    out.extend(gens.h.iter().cloned());
    out
}

/// Finite-dimensional irreducible module V(lambda) with action matrices for
/// every Chevalley basis element.
#[derive(Clone, Debug)]
pub struct IrrepModule {
    pub algebra: Arc<ChevalleyAlgebra>,
    pub lambda: Vec<i64>,
    pub gens: GeneratorRep,
    pub mats: Vec<SparseMatrix>,
}

impl IrrepModule {
    pub fn new(algebra: Arc<ChevalleyAlgebra>, lambda: &[i64]) -> Result<Self> {
        check_dominant(lambda, algebra.rank())?;
        let gens = build_generators(&algebra.roots.cartan, lambda);
        let mats = basis_matrices(&algebra.roots, &algebra.recipes, &gens);
        Ok(IrrepModule { algebra, lambda: lambda.to_vec(), gens, mats })
    }

    pub fn dim(&self) -> usize {
        self.gens.dim
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.gens.weights
    }

    /// Action matrix of an arbitrary element.
    pub fn action(&self, x: &[CycScalar]) -> SparseMatrix {
        let terms: Vec<(CycScalar, &SparseMatrix)> =
            x.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(a, c)| (c.clone(), &self.mats[a])).collect();
        SparseMatrix::lincomb(&terms, self.dim(), self.dim())
    }

    pub fn apply(&self, x: &[CycScalar], v: &[CycScalar]) -> Vector {
        let mut out = zero_vec(self.dim());
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.mats[a].apply(v));
            }
        }
        out
    }

    /// Multiplicity of each weight, in fundamental-weight coordinates.
    pub fn weight_multiplicities(&self) -> std::collections::BTreeMap<Vec<i64>, usize> {
        let mut m = std::collections::BTreeMap::new();
        for w in self.weights() {
            *m.entry(w.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let labels: Vec<String> = (0..self.algebra.dim()).map(|a| self.algebra.label(a)).collect();
        let actions: Vec<Value> = self
            .mats
            .iter()
            .enumerate()
            .map(|(a, m)| {
                let entries: Vec<Value> = m
                    .cols
                    .iter()
                    .enumerate()
                    .flat_map(|(j, col)| col.iter().map(move |(i, v)| json!([i, j, v.to_string()])))
                    .collect();
                json!({"element": labels[a], "entries": entries})
            })
            .collect();
        json!({
            "highest_weight": self.lambda,
            "dim": self.dim(),
            "weights": self.gens.weights,
            "action": actions,
        })
    }
}

impl ChevalleyAlgebra {
    /// Squared length of a positive root.
    pub fn root_length(&self, root: usize) -> Rational {
        let r = &self.roots.positive[root];
        self.roots.ip(r, r)
    }
}
