//! Modules: gl_n modules, evaluation and twisted modules, graded sums, the
//! realized level-zero modules and the modules `L(beta, V1)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grading::{outer_part, permute_weight, xi_pow, Character, EigenspaceDecomposition, FiniteOrderAut, HWeight};
use crate::liealg::{ChevalleyAlgebra, IrrepModule};
use crate::linalg::{is_zero_vec, zero_vec, Matrix, Span, Vector};
use crate::toroidal::{deg_add, Degree, ToroidalAlgebra, ToroidalElement, ToroidalRoot, ToroidalWeight};
use crate::{CycScalar, Error, Result};

fn int(v: i64) -> CycScalar {
    CycScalar::from_int(v)
}

/// Finite-dimensional irreducible `gl_n`-module `V(c, psi)`: the `sl_n` irrep of
/// highest weight `psi` with the identity matrix acting by `c`.
#[derive(Clone, Debug)]
pub struct GlnModule {
    pub n: usize,
    pub psi: Vec<i64>,
    pub c: CycScalar,
    /// `units[a * n + b]` is the action of the matrix unit `E_ab`.
    pub units: Vec<Matrix>,
    /// `sl_n` weights of the basis vectors (empty entries when `n = 1`).
    pub weights: Vec<Vec<i64>>,
}

impl GlnModule {
    pub fn new(psi: &[i64], c: CycScalar) -> Result<Self> {
        let n = psi.len() + 1;
        if n == 1 {
            return Ok(GlnModule { n, psi: vec![], units: vec![Matrix::identity(1).scale(&c)], c, weights: vec![vec![]] });
        }
        let g = Arc::new(ChevalleyAlgebra::build('A', n - 1)?);
        let irrep = IrrepModule::new(g.clone(), psi)?;
        let d = irrep.dim();
        let mut units = vec![Matrix::zeros(d, d); n * n];
        for a in 0..n {
            for b in (a + 1)..n {
                let root: Vec<i64> = (0..n - 1).map(|i| i64::from(i >= a && i < b)).collect();
                let r = g.roots.index_of(&root).expect("A-type root");
                units[a * n + b] = irrep.mats[g.e(r)].to_dense();
                units[b * n + a] = irrep.mats[g.f(r)].to_dense();
            }
        }
        let cn = &c / &int(n as i64);
        for a in 0..n {
            let mut m = Matrix::identity(d).scale(&cn);
            for i in 0..n - 1 {
                let coef = &int(i64::from(i >= a)) - &CycScalar::frac(i as i64 + 1, n as i64);
                if !coef.is_zero() {
                    m = m.add(&irrep.mats[g.h(i)].to_dense().scale(&coef));
                }
            }
            units[a * n + a] = m;
        }
        Ok(GlnModule { n, psi: psi.to_vec(), c, units, weights: irrep.weights().to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.units[0].rows
    }

    pub fn unit(&self, a: usize, b: usize) -> &Matrix {
        &self.units[a * self.n + b]
    }

    /// Action of an arbitrary `n x n` matrix.
    pub fn action(&self, m: &Matrix) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for a in 0..self.n {
            for b in 0..self.n {
                let x = m.get(a, b);
                if !x.is_zero() {
                    out = out.add(&self.unit(a, b).scale(x));
                }
            }
        }
        out
    }

    /// `[E_ab, E_cd] = delta_bc E_ad - delta_da E_cb` on all pairs.
    pub fn is_module(&self) -> bool {
        let n = self.n;
        let d = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for e in 0..n {
                        let mut rhs = Matrix::zeros(d, d);
                        if b == c {
                            rhs = rhs.add(self.unit(a, e));
                        }
                        if e == a {
                            rhs = rhs.sub(self.unit(c, b));
                        }
                        if self.unit(a, b).commutator(self.unit(c, e)) != rhs {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

pub fn build_gln_module(psi: &[i64], c: CycScalar) -> Result<GlnModule> {
    GlnModule::new(psi, c)
}

/// A representation of `g` by dense matrices, one per Chevalley basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRep {
    pub dim: usize,
    pub mats: Vec<Matrix>,
}

impl GRep {
    pub fn from_irrep(v: &IrrepModule) -> Self {
        GRep { dim: v.dim(), mats: v.mats.iter().map(|m| m.to_dense()).collect() }
    }

    pub fn trivial(g: &ChevalleyAlgebra) -> Self {
        GRep { dim: 1, mats: vec![Matrix::zeros(1, 1); g.dim()] }
    }

    pub fn action(&self, x: &[CycScalar]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (c, m) in x.iter().zip(&self.mats) {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    /// The twisted module with `x` acting as `phi(x)`.
    pub fn twist(&self, phi: &FiniteOrderAut) -> Self {
        let mats = (0..self.mats.len()).map(|a| self.action(&phi.matrix.col(a))).collect();
        GRep { dim: self.dim, mats }
    }

    pub fn direct_sum(parts: &[GRep]) -> Self {
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let nb = parts.first().map_or(0, |p| p.mats.len());
        let mats = (0..nb)
            .map(|a| {
                let mut m = Matrix::zeros(dim, dim);
                let mut off = 0;
                for p in parts {
                    for i in 0..p.dim {
                        for j in 0..p.dim {
                            m.set(off + i, off + j, p.mats[a].get(i, j).clone());
                        }
                    }
                    off += p.dim;
                }
                m
            })
            .collect();
        GRep { dim, mats }
    }

    /// Module axiom on all pairs of basis elements.
    pub fn is_module(&self, g: &ChevalleyAlgebra) -> bool {
        let d = g.dim();
        (0..d).all(|a| {
            (a + 1..d).all(|b| self.action(&g.bracket(&g.basis_vec(a), &g.basis_vec(b))) == self.mats[a].commutator(&self.mats[b]))
        })
    }
}

pub fn twist_module(v: &GRep, phi: &FiniteOrderAut) -> GRep {
    v.twist(phi)
}

/// Evaluation module: `x ⊗ t^k` acts on `V(lambda)` as `a^k x` for `x` in `g_kbar`.
#[derive(Clone, Debug)]
pub struct EvaluationModule {
    pub dec: Arc<EigenspaceDecomposition>,
    pub lambda: Vec<i64>,
    pub points: Vec<CycScalar>,
    pub rep: GRep,
}

pub fn build_evaluation(dec: Arc<EigenspaceDecomposition>, lambda: &[i64], points: &[CycScalar]) -> Result<EvaluationModule> {
    if points.len() != dec.n() {
        return Err(Error::Invalid(format!("expected {} evaluation points", dec.n())));
    }
    if let Some(p) = points.iter().position(|p| p.is_zero()) {
        return Err(Error::NotInField(format!("evaluation point {} is zero", p + 1)));
    }
    let rep = GRep::from_irrep(&IrrepModule::new(dec.g.clone(), lambda)?);
    Ok(EvaluationModule { dec, lambda: lambda.to_vec(), points: points.to_vec(), rep })
}

impl EvaluationModule {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn point_power(&self, k: &[i64]) -> Result<CycScalar> {
        let mut s = CycScalar::one();
        for (a, &e) in self.points.iter().zip(k) {
            s = &s * &a.pow(e)?;
        }
        Ok(s)
    }

    /// Action of `x ⊗ t^k`.
    pub fn action(&self, x: &[CycScalar], k: &[i64]) -> Result<Matrix> {
        let kbar = self.dec.group.quotient(k);
        if !self.dec.in_class(&kbar, x) {
            return Err(Error::NotInEigenspace(format!("element is not in the class of {k:?}")));
        }
        Ok(self.rep.action(x).scale(&self.point_power(k)?))
    }

    /// Loop generators `x ⊗ t^k` for `k` in `[-w, w]^n`.
    pub fn generators(&self, w: i64) -> Vec<(Vector, Degree)> {
        let mut out = Vec::new();
        for k in crate::grading::window_degrees(self.dec.n(), w) {
            for x in self.dec.class_basis(&self.dec.group.quotient(&k)) {
                out.push((x, k.clone()));
            }
        }
        out
    }

    /// `[x⊗t^k, y⊗t^l] = [x,y]⊗t^{k+l}` on all generator pairs in the window.
    pub fn is_module(&self, w: i64) -> Result<bool> {
        let gens = self.generators(w);
        for (x, k) in &gens {
            for (y, l) in &gens {
                let lhs = self.action(&self.dec.g.bracket(x, y), &deg_add(k, l))?;
                if lhs != self.action(x, k)?.commutator(&self.action(y, l)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `v` generates the whole module.
    pub fn generates(&self, v: &[CycScalar]) -> Result<bool> {
        let ops: Vec<Matrix> =
            self.generators(1).iter().map(|(x, k)| self.action(x, k)).collect::<Result<_>>()?;
        Ok(closure_rank(&ops, &[v.to_vec()], self.dim()) == self.dim())
    }
}

/// Rank of the smallest subspace containing `start` and stable under `ops`.
fn closure_rank(ops: &[Matrix], start: &[Vector], dim: usize) -> usize {
    let mut span = Span::new(dim);
    let mut queue: Vec<Vector> = Vec::new();
    for v in start {
        if span.insert(v) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            let w = op.mul_vec(&v);
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    span.rank()
}

/// Isomorphism criterion for evaluation modules: `a(m) = b(m)` and
/// `mu = lambda ∘ gamma` with `gamma` the outer part of `x ↦ (a^k / b^k) x`.
pub fn evaluation_iso_predicate(
    dec: &EigenspaceDecomposition,
    lambda: &[i64],
    a: &[CycScalar],
    mu: &[i64],
    b: &[CycScalar],
) -> Result<bool> {
    for ((x, y), &m) in a.iter().zip(b).zip(dec.m()) {
        if x.pow(m as i64)? != y.pow(m as i64)? {
            return Ok(false);
        }
    }
    let ratio: Vec<CycScalar> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let omega = dec.character_aut(&Character::Values(ratio))?;
    let gamma = outer_part(&dec.g, &omega)?;
    Ok(permute_weight(lambda, &gamma) == mu)
}

/// Solves `T ρ(x⊗t^k) = ρ'(x⊗t^k) T` over loop generators with degrees in
/// `[-w, w]^n` (default `w = max m_i`) and returns an invertible solution.
pub fn find_intertwiner(m1: &EvaluationModule, m2: &EvaluationModule, window: Option<i64>) -> Result<Option<Matrix>> {
    let dec = &m1.dec;
    let w = window.unwrap_or_else(|| dec.m().iter().copied().max().unwrap_or(1) as i64);
    if dec.m().iter().any(|&m| 2 * w + 1 < m as i64) {
        return Err(Error::WindowOverflow(format!("window {w} does not reach every class")));
    }
    let (d1, d2) = (m1.dim(), m2.dim());
    if d1 != d2 {
        return Ok(None);
    }
    let mut rows = Vec::new();
    for (x, k) in m1.generators(w) {
        let a = m1.action(&x, &k)?;
        let b = m2.action(&x, &k)?;
        rows.push(a.transpose().kron(&Matrix::identity(d2)).sub(&Matrix::identity(d1).kron(&b)));
    }
    let null = Matrix::vstack(&rows).nullspace();
    let to_matrix = |v: &Vector| {
        let mut t = Matrix::zeros(d2, d1);
        for j in 0..d1 {
            for i in 0..d2 {
                t.set(i, j, v[j * d2 + i].clone());
            }
        }
        t
    };
    let mut candidates: Vec<Matrix> = null.iter().map(to_matrix).collect();
    if null.len() > 1 {
        let mut sum = zero_vec(d1 * d2);
        for v in &null {
            crate::linalg::axpy(&mut sum, &CycScalar::one(), v);
        }
        candidates.push(to_matrix(&sum));
    }
    Ok(candidates.into_iter().find(|t| t.inverse().is_some()))
}

/// Points realizing each orbit member from `lambda_1`: `p_j` copies of
/// `xi^d a` with `d` the first exponent vector sending `lambda_1` to `lambda_j`.
pub fn choose_points(
    dec: &EigenspaceDecomposition,
    orbit: &[Vec<i64>],
    multiplicities: &[usize],
    base: &[CycScalar],
) -> Result<Vec<Vec<CycScalar>>> {
    if orbit.is_empty() || orbit.len() != multiplicities.len() {
        return Err(Error::Invalid("orbit and multiplicities must be non-empty and of equal length".into()));
    }
    check_unit_point(dec, base)?;
    let mut out = Vec::new();
    for (target, &p) in orbit.iter().zip(multiplicities) {
        let d = dec
            .character_between(&orbit[0], target)?
            .ok_or_else(|| Error::WeightNotInOrbit(format!("{target:?} is not in the orbit of {:?}", orbit[0])))?;
        let point: Vec<CycScalar> =
            base.iter().zip(d.iter().zip(dec.m())).map(|(a, (&di, &m))| a * &xi_pow(m, di as i64)).collect();
        for _ in 0..p {
            out.push(point.clone());
        }
    }
    Ok(out)
}

fn check_unit_point(dec: &EigenspaceDecomposition, a: &[CycScalar]) -> Result<()> {
    if a.len() != dec.n() {
        return Err(Error::Invalid(format!("expected {} point coordinates", dec.n())));
    }
    for (x, &m) in a.iter().zip(dec.m()) {
        if !x.pow(m as i64)?.is_one() {
            return Err(Error::NotRootOfUnity(format!("{x} is not an {m}-th root of unity")));
        }
    }
    Ok(())
}

/// Splitting of a carrier space into class subspaces, each refined by
/// `h_0`-weight.
#[derive(Clone, Debug)]
pub struct ClassSplit {
    /// Per class (group index order): basis of the class subspace as columns.
    pub basis: Vec<Matrix>,
    /// Per class: coordinate map onto the class basis.
    pub coords: Vec<Matrix>,
    /// Per class: `h_0`-weight of each basis column.
    pub weights: Vec<Vec<HWeight>>,
}

impl ClassSplit {
    /// Every class is the whole space.
    fn constant(classes: usize, weights: Vec<HWeight>) -> Self {
        let d = weights.len();
        ClassSplit {
            basis: vec![Matrix::identity(d); classes],
            coords: vec![Matrix::identity(d); classes],
            weights: vec![weights; classes],
        }
    }

    pub fn class_dim(&self, idx: usize) -> usize {
        self.basis[idx].cols
    }
}

/// Groups basis indices by weight, in order of first appearance.
fn group_by_weight(weights: &[HWeight]) -> Vec<(HWeight, Vec<usize>)> {
    let mut out: Vec<(HWeight, Vec<usize>)> = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        match out.iter_mut().find(|(x, _)| x == w) {
            Some((_, v)) => v.push(i),
            None => out.push((w.clone(), vec![i])),
        }
    }
    out
}

/// G-graded `LT`-module `V_2 = ⊕_ν V(lambda_1)` with component `ν` twisted by
/// the character with values `points[ν]`.
#[derive(Clone, Debug)]
pub struct GradedLTModule {
    pub dec: Arc<EigenspaceDecomposition>,
    pub lambda: Vec<i64>,
    pub orbit: Vec<Vec<i64>>,
    pub multiplicities: Vec<usize>,
    pub points: Vec<Vec<CycScalar>>,
    pub component: IrrepModule,
    /// Ungraded action of `g`.
    pub rep: GRep,
    /// Operators `T_i` acting on `V_2,kbar` by `xi_i^{k_i - shift_i}`.
    pub grading_ops: Vec<Matrix>,
    pub shift: Vec<u32>,
    pub classes: ClassSplit,
}

/// Builds the graded sum over the orbit of `lambda`, with points chosen from `base`.
pub fn build_graded_sum(
    dec: Arc<EigenspaceDecomposition>,
    lambda: &[i64],
    multiplicities: Option<&[usize]>,
    base: &[CycScalar],
    shift: &[u32],
) -> Result<GradedLTModule> {
    if lambda.iter().all(|&x| x == 0) {
        return Err(Error::ZeroLambda);
    }
    let orbit = dec.ghat_orbit(lambda)?;
    let mult = multiplicities.map_or_else(|| vec![1; orbit.len()], |m| m.to_vec());
    let points = choose_points(&dec, &orbit, &mult, base)?;
    let mut m = build_graded_sum_with_points(dec, lambda, points, shift)?;
    m.orbit = orbit;
    m.multiplicities = mult;
    Ok(m)
}

/// Builds the graded sum for explicit points and verifies graded irreducibility.
pub fn build_graded_sum_with_points(
    dec: Arc<EigenspaceDecomposition>,
    lambda: &[i64],
    points: Vec<Vec<CycScalar>>,
    shift: &[u32],
) -> Result<GradedLTModule> {
    if lambda.iter().all(|&x| x == 0) {
        return Err(Error::ZeroLambda);
    }
    let n = dec.n();
    if points.is_empty() {
        return Err(Error::Invalid("at least one evaluation point is required".into()));
    }
    for p in &points {
        check_unit_point(&dec, p)?;
    }
    if shift.len() != n {
        return Err(Error::Invalid(format!("grading shift must have {n} entries")));
    }
    let g = dec.g.clone();
    let component = IrrepModule::new(g.clone(), lambda)?;
    let base_rep = GRep::from_irrep(&component);
    let d = base_rep.dim;
    let big_n = points.len();
    let twists: Vec<FiniteOrderAut> =
        points.iter().map(|p| dec.character_aut(&Character::Values(p.clone()))).collect::<Result<_>>()?;
    let parts: Vec<GRep> = twists.iter().map(|t| base_rep.twist(t)).collect();
    let rep = GRep::direct_sum(&parts);
    let fail = |s: String| Error::GradedIrreducibilityFailure(s);

    // Character sending component ν to component μ under σ_i.
    let fixes_lambda = |vals: Vec<CycScalar>| -> Result<Option<FiniteOrderAut>> {
        let psi = dec.character_aut(&Character::Values(vals))?;
        let perm = outer_part(&g, &psi)?;
        Ok((permute_weight(lambda, &perm) == lambda).then_some(psi))
    };

    let mut grading_ops = Vec::with_capacity(n);
    for i in 0..n {
        let xi = xi_pow(dec.m()[i], 1);
        let mut used = vec![false; big_n];
        let mut t = Matrix::zeros(big_n * d, big_n * d);
        for nu in 0..big_n {
            let mut found = None;
            for mu in 0..big_n {
                if used[mu] {
                    continue;
                }
                let vals: Vec<CycScalar> = (0..n)
                    .map(|j| {
                        let v = &points[mu][j] / &points[nu][j];
                        if j == i {
                            &v * &xi
                        } else {
                            v
                        }
                    })
                    .collect();
                if let Some(psi) = fixes_lambda(vals)? {
                    found = Some((mu, psi));
                    break;
                }
            }
            let Some((mu, psi)) = found else {
                return Err(fail(format!("no G-grading is compatible with the points (generator {})", i + 1)));
            };
            used[mu] = true;
            let block = twisted_intertwiner(&g, &component, &base_rep, &psi)?;
            for a in 0..d {
                for b in 0..d {
                    t.set(mu * d + a, nu * d + b, block.get(a, b).clone());
                }
            }
        }
        grading_ops.push(t);
    }

    let dim = big_n * d;
    for (i, t) in grading_ops.iter().enumerate() {
        if t.pow(dec.m()[i]) != Matrix::identity(dim) {
            return Err(fail(format!("grading operator {} does not have order dividing {}", i + 1, dec.m()[i])));
        }
        for a in 0..g.dim() {
            let x = g.basis_vec(a);
            if t.mul(&rep.action(&x)) != rep.action(&dec.sigmas[i].apply(&x)).mul(t) {
                return Err(fail(format!("grading operator {} is not compatible with {}", i + 1, g.label(a))));
            }
        }
        for u in &grading_ops[..i] {
            if t.mul(u) != u.mul(t) {
                return Err(fail("grading operators do not commute".into()));
            }
        }
    }

    // Graded submodules are determined by their highest weight vectors, one
    // per component; irreducibility means the operators generated there by
    // the T_i and the isotypic projections form the full matrix algebra.
    let mut classes_of: Vec<usize> = Vec::with_capacity(big_n);
    let mut reps_seen: Vec<usize> = Vec::new();
    for nu in 0..big_n {
        let mut cls = None;
        for (ci, &r) in reps_seen.iter().enumerate() {
            let vals: Vec<CycScalar> = (0..n).map(|j| &points[nu][j] / &points[r][j]).collect();
            if fixes_lambda(vals)?.is_some() {
                cls = Some(ci);
                break;
            }
        }
        match cls {
            Some(c) => classes_of.push(c),
            None => {
                classes_of.push(reps_seen.len());
                reps_seen.push(nu);
            }
        }
    }
    let mut gens: Vec<Matrix> =
        grading_ops.iter().map(|t| t.submatrix(&top_indices(big_n, d), &top_indices(big_n, d))).collect();
    for c in 0..reps_seen.len() {
        let mut p = Matrix::zeros(big_n, big_n);
        for nu in 0..big_n {
            if classes_of[nu] == c {
                p.set(nu, nu, CycScalar::one());
            }
        }
        gens.push(p);
    }
    let alg_dim = generated_algebra_dim(&gens, big_n);
    if alg_dim != big_n * big_n {
        return Err(fail(format!("V_2 has a proper graded submodule (generated algebra of dimension {alg_dim} < {})", big_n * big_n)));
    }

    let h0_weights: Vec<HWeight> = (0..big_n)
        .flat_map(|_| component.weights().iter().map(|w| dec.restrict_weight(w)))
        .collect();
    let classes = split_by_operators(&dec, &grading_ops, shift, &h0_weights)?;
    let orbit = vec![lambda.to_vec()];
    Ok(GradedLTModule {
        dec,
        lambda: lambda.to_vec(),
        orbit,
        multiplicities: vec![big_n],
        points,
        component,
        rep,
        grading_ops,
        shift: shift.to_vec(),
        classes,
    })
}

fn top_indices(big_n: usize, d: usize) -> Vec<usize> {
    (0..big_n).map(|nu| nu * d).collect()
}

/// Dimension of the unital associative algebra generated by `gens`.
fn generated_algebra_dim(gens: &[Matrix], n: usize) -> usize {
    let flat = |m: &Matrix| m.data.clone();
    let mut span = Span::new(n * n);
    let mut basis = vec![Matrix::identity(n)];
    span.insert(&flat(&basis[0]));
    let mut idx = 0;
    while idx < basis.len() {
        let b = basis[idx].clone();
        for g in gens {
            let p = g.mul(&b);
            if span.insert(&flat(&p)) {
                basis.push(p);
            }
        }
        idx += 1;
    }
    span.rank()
}

/// Intertwiner `T` with `T ρ(y) = ρ(psi y) T` and `T v_top = v_top`.
fn twisted_intertwiner(g: &ChevalleyAlgebra, component: &IrrepModule, rep: &GRep, psi: &FiniteOrderAut) -> Result<Matrix> {
    let d = rep.dim;
    let lower: Vec<(Matrix, Matrix)> = (0..g.rank())
        .map(|j| {
            let f = g.f(j);
            (rep.mats[f].clone(), rep.action(&psi.matrix.col(f)))
        })
        .collect();
    let top = component.gens.top();
    let mut span = Span::new(d);
    span.insert(&top);
    let mut pairs = vec![(top.clone(), top)];
    let mut idx = 0;
    while idx < pairs.len() {
        let (u, tu) = pairs[idx].clone();
        for (f, pf) in &lower {
            let v = f.mul_vec(&u);
            if span.insert(&v) {
                pairs.push((v, pf.mul_vec(&tu)));
            }
        }
        idx += 1;
    }
    if pairs.len() != d {
        return Err(Error::GradedIrreducibilityFailure("component is not generated by its top vector".into()));
    }
    let us: Vec<Vector> = pairs.iter().map(|p| p.0.clone()).collect();
    let ts: Vec<Vector> = pairs.iter().map(|p| p.1.clone()).collect();
    let inv = Matrix::from_cols(d, &us).inverse().expect("spanning set of size dim");
    let t = Matrix::from_cols(d, &ts).mul(&inv);
    for a in 0..g.dim() {
        if t.mul(&rep.mats[a]) != rep.action(&psi.matrix.col(a)).mul(&t) {
            return Err(Error::GradedIrreducibilityFailure(format!(
                "twisted component is not isomorphic to the original ({} fails)",
                g.label(a)
            )));
        }
    }
    Ok(t)
}

/// Joint eigenspaces `T_i = xi_i^{k_i - shift_i}`, refined by `h_0`-weight.
fn split_by_operators(
    dec: &EigenspaceDecomposition,
    ops: &[Matrix],
    shift: &[u32],
    h0_weights: &[HWeight],
) -> Result<ClassSplit> {
    let dim = h0_weights.len();
    let groups = group_by_weight(h0_weights);
    let elements = dec.group.elements();
    let mut basis_cols: Vec<Vec<Vector>> = vec![Vec::new(); elements.len()];
    let mut weights: Vec<Vec<HWeight>> = vec![Vec::new(); elements.len()];
    for (w, idx) in &groups {
        for kbar in &elements {
            let blocks: Vec<Matrix> = ops
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    let m = dec.m()[i];
                    let e = kbar[i] as i64 - shift[i] as i64;
                    t.submatrix(idx, idx).sub(&Matrix::identity(idx.len()).scale(&xi_pow(m, e)))
                })
                .collect();
            let null = if blocks.is_empty() {
                (0..idx.len()).map(|j| crate::linalg::unit_vec(idx.len(), j)).collect()
            } else {
                Matrix::vstack(&blocks).nullspace()
            };
            let ci = dec.group.index(kbar);
            for v in null {
                let mut full = zero_vec(dim);
                for (&i, x) in idx.iter().zip(v) {
                    full[i] = x;
                }
                basis_cols[ci].push(full);
                weights[ci].push(w.clone());
            }
        }
    }
    let all: Vec<Vector> = basis_cols.iter().flatten().cloned().collect();
    let p = Matrix::from_cols(dim, &all);
    let pinv = p
        .inverse()
        .ok_or_else(|| Error::GradedIrreducibilityFailure("grading operators are not diagonalizable".into()))?;
    let mut basis = Vec::new();
    let mut coords = Vec::new();
    let mut start = 0;
    for cols in &basis_cols {
        let rows: Vec<usize> = (start..start + cols.len()).collect();
        basis.push(Matrix::from_cols(dim, cols));
        coords.push(pinv.submatrix(&rows, &(0..dim).collect::<Vec<_>>()));
        start += cols.len();
    }
    Ok(ClassSplit { basis, coords, weights })
}

impl GradedLTModule {
    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn class_dims(&self) -> Vec<usize> {
        (0..self.classes.basis.len()).map(|i| self.classes.class_dim(i)).collect()
    }

    /// Action of `x ∈ g_lbar` from `V_2,kbar` to `V_2,kbar+lbar` in class coordinates.
    pub fn block(&self, x: &[CycScalar], kbar: &[u32], lbar: &[u32]) -> Matrix {
        class_block(&self.dec, &self.rep, &self.classes, x, kbar, lbar)
    }

    /// Highest weight space of the class `kbar`, as coordinate columns.
    pub fn top_space(&self, kbar: &[u32]) -> Matrix {
        top_space(&self.dec, &self.rep, &self.classes, kbar)
    }

    /// Ungraded module axiom for `x ∈ g_lbar` acting as `Σ_ν a_ν^l x`.
    pub fn is_module(&self) -> bool {
        self.rep.is_module(&self.dec.g)
    }
}

fn class_block(
    dec: &EigenspaceDecomposition,
    rep: &GRep,
    classes: &ClassSplit,
    x: &[CycScalar],
    kbar: &[u32],
    lbar: &[u32],
) -> Matrix {
    let src = dec.group.index(kbar);
    let dst = dec.group.index(&dec.group.add(kbar, lbar));
    classes.coords[dst].mul(&rep.action(x)).mul(&classes.basis[src])
}

/// Joint kernel in `V_2,kbar` of all positive-weight elements of `g`.
fn top_space(dec: &EigenspaceDecomposition, rep: &GRep, classes: &ClassSplit, kbar: &[u32]) -> Matrix {
    let src = dec.group.index(kbar);
    let dk = classes.class_dim(src);
    let mut rows = Vec::new();
    for p in &dec.pieces {
        if dec.is_positive(&dec.weights[p.weight]) {
            for x in &p.basis {
                rows.push(rep.action(x).mul(&classes.basis[src]));
            }
        }
    }
    let null = if rows.is_empty() {
        (0..dk).map(|j| crate::linalg::unit_vec(dk, j)).collect()
    } else {
        Matrix::vstack(&rows).nullspace()
    };
    Matrix::from_cols(dk, &null)
}

/// Parameters `(psi, c, lambda, beta)` of a realized module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub psi: Vec<i64>,
    pub c: CycScalar,
    pub lambda: Vec<i64>,
    pub beta: Vec<CycScalar>,
}

/// Inputs to [`build_realized`] beyond the quadruple.
#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub params: Quadruple,
    /// Multiplicities over the orbit of `lambda` (default all 1).
    pub multiplicities: Option<Vec<usize>>,
    /// Explicit points; chosen from `base` when absent.
    pub points: Option<Vec<Vec<CycScalar>>>,
    pub base: Option<Vec<CycScalar>>,
    /// Class of the highest weight vector of the first component.
    pub shift: Option<Vec<u32>>,
}

impl ModuleSpec {
    pub fn new(params: Quadruple) -> Self {
        ModuleSpec { params, multiplicities: None, points: None, base: None, shift: None }
    }

    pub fn with_shift(mut self, shift: Vec<u32>) -> Self {
        self.shift = Some(shift);
        self
    }

    pub fn with_points(mut self, points: Vec<Vec<CycScalar>>) -> Self {
        self.points = Some(points);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    /// `V(psi, c, lambda, beta)` over the full toroidal algebra.
    Realized,
    /// `L(beta, V_1)` over the zero part without the central terms.
    LBeta,
}

/// Vector of a module on the window: one coordinate vector per degree.
pub type ModVec = BTreeMap<Degree, Vector>;

/// Weight-graded module `⊕_k V_1 ⊗ X_kbar ⊗ t^k` on a degree window.
#[derive(Clone, Debug)]
pub struct RealizedModule {
    pub torus: ToroidalAlgebra,
    pub v1: GlnModule,
    /// `g`-representation on `X`.
    pub inner: GRep,
    pub classes: ClassSplit,
    pub beta: Vec<CycScalar>,
    pub kind: ModuleKind,
    pub params: Option<Quadruple>,
    pub graded: Option<GradedLTModule>,
    allowed: Option<Vec<Span>>,
    piece_shift: Vec<(Degree, CycScalar)>,
}

pub fn build_realized(torus: &ToroidalAlgebra, spec: &ModuleSpec) -> Result<RealizedModule> {
    let dec = torus.dec.clone();
    let n = dec.n();
    let q = &spec.params;
    if q.beta.len() != n {
        return Err(Error::Invalid(format!("beta must have {n} entries")));
    }
    if q.psi.len() + 1 != n {
        return Err(Error::Invalid(format!("psi must have {} entries", n - 1)));
    }
    if q.lambda.iter().all(|&x| x == 0) {
        return Err(Error::ZeroLambda);
    }
    let v1 = GlnModule::new(&q.psi, q.c.clone())?;
    let shift = spec.shift.clone().unwrap_or_else(|| vec![0; n]);
    let graded = match &spec.points {
        Some(p) => build_graded_sum_with_points(dec.clone(), &q.lambda, p.clone(), &shift)?,
        None => {
            let base = spec.base.clone().unwrap_or_else(|| vec![CycScalar::one(); n]);
            build_graded_sum(dec.clone(), &q.lambda, spec.multiplicities.as_deref(), &base, &shift)?
        }
    };
    Ok(RealizedModule {
        torus: torus.clone(),
        v1,
        inner: graded.rep.clone(),
        classes: graded.classes.clone(),
        beta: q.beta.clone(),
        kind: ModuleKind::Realized,
        params: Some(q.clone()),
        graded: Some(graded),
        allowed: None,
        piece_shift: Vec::new(),
    })
}

/// `L(beta, V_1)` for `V_1 = V(c, psi) ⊗ W`, where `W` is the evaluation module
/// `ev_a V(mu)` restricted to the centralizer of `h_0` (trivial when `inner` is `None`).
pub fn build_l_beta(
    torus: &ToroidalAlgebra,
    v1: GlnModule,
    inner: Option<(&[i64], &[CycScalar])>,
    beta: &[CycScalar],
) -> Result<RealizedModule> {
    let dec = torus.dec.clone();
    let n = dec.n();
    if beta.len() != n || v1.n != n {
        return Err(Error::Invalid(format!("beta and the gl_n module must have rank {n}")));
    }
    let (rep, weights) = match inner {
        None => (GRep::trivial(&dec.g), vec![vec![CycScalar::zero(); dec.h0.len()]]),
        Some((mu, a)) => {
            check_unit_point(&dec, a)?;
            let irrep = IrrepModule::new(dec.g.clone(), mu)?;
            let chi = dec.character_aut(&Character::Values(a.to_vec()))?;
            let w = irrep.weights().iter().map(|x| dec.restrict_weight(x)).collect();
            (GRep::from_irrep(&irrep).twist(&chi), w)
        }
    };
    let zw = dec.zero_weight();
    let allowed = dec
        .group
        .elements()
        .iter()
        .map(|kbar| {
            let mut s = Span::new(dec.g.dim());
            if let Some(p) = dec.piece(kbar, zw) {
                for b in &p.basis {
                    s.insert(b);
                }
            }
            s
        })
        .collect();
    Ok(RealizedModule {
        torus: torus.clone(),
        v1,
        inner: rep,
        classes: ClassSplit::constant(dec.group.order(), weights),
        beta: beta.to_vec(),
        kind: ModuleKind::LBeta,
        params: None,
        graded: None,
        allowed: Some(allowed),
        piece_shift: Vec::new(),
    })
}

/// One row of a weight table: `h_0`-weight `weight` plus `delta_{k+beta}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEntry {
    pub k: Degree,
    pub weight: HWeight,
    pub dim: usize,
}

/// Highest weight space data for one degree.
#[derive(Clone, Debug)]
pub struct HwsEntry {
    pub k: Degree,
    pub dim: usize,
    pub expected: usize,
    /// Every class of positive generators can be reached inside the window.
    pub interior: bool,
    pub basis: Matrix,
}

/// A failed Weyl comparison.
#[derive(Clone, Debug)]
pub struct WeylWitness {
    pub root: ToroidalRoot,
    pub from: WeightEntry,
    pub to_k: Degree,
    pub to_weight: HWeight,
    pub to_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilitySample {
    pub generator: String,
    pub degree: Degree,
    pub index: usize,
    /// Least `m` with `x^m v = 0`, if found within the bound.
    pub exponent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomOutcome {
    Pass,
    Fail,
    /// Some intermediate degree leaves the window.
    Skipped,
}

impl RealizedModule {
    pub fn n(&self) -> usize {
        self.torus.n()
    }

    pub fn dec(&self) -> &EigenspaceDecomposition {
        &self.torus.dec
    }

    pub fn dim_v1(&self) -> usize {
        self.v1.dim()
    }

    pub fn class_dim(&self, kbar: &[u32]) -> usize {
        self.classes.class_dim(self.dec().group.index(kbar))
    }

    pub fn piece_dim(&self, k: &[i64]) -> usize {
        self.dim_v1() * self.class_dim(&self.dec().group.quotient(k))
    }

    /// Test hook: shifts the derivation eigenvalues on one piece.
    #[doc(hidden)]
    pub fn with_shifted_piece(&self, k: Degree, delta: CycScalar) -> Self {
        let mut m = self.clone();
        m.piece_shift.push((k, delta));
        m
    }

    fn piece_correction(&self, k: &[i64]) -> CycScalar {
        let mut s = CycScalar::zero();
        for (d, c) in &self.piece_shift {
            if d.as_slice() == k {
                s += c;
            }
        }
        s
    }

    /// Window generators of the acting algebra.
    pub fn generators(&self) -> Vec<ToroidalElement> {
        match self.kind {
            ModuleKind::Realized => self.torus.window_basis(),
            ModuleKind::LBeta => {
                let dec = self.dec();
                let zw = dec.zero_weight();
                let mut out = Vec::new();
                for k in self.torus.window.degrees(self.n()) {
                    if let Some(p) = dec.piece(&dec.group.quotient(&k), zw) {
                        for b in &p.basis {
                            out.push(ToroidalElement::loop_term(b.clone(), k.clone()));
                        }
                    }
                    if self.torus.in_gamma(&k) {
                        for i in 0..self.n() {
                            out.push(ToroidalElement::deriv_term(CycScalar::one(), k.clone(), i));
                        }
                    }
                }
                out
            }
        }
    }

    /// Action of `x ∈ g_lbar` between classes, independent of the degree.
    pub fn loop_block(&self, x: &[CycScalar], kbar: &[u32], lbar: &[u32]) -> Matrix {
        Matrix::identity(self.dim_v1()).kron(&class_block(self.dec(), &self.inner, &self.classes, x, kbar, lbar))
    }

    /// Matrices of the action of `x` on the piece of degree `k`, per target degree.
    pub fn operator(&self, x: &ToroidalElement, k: &[i64]) -> Result<BTreeMap<Degree, Matrix>> {
        let w = &self.torus.window;
        w.check(k)?;
        let dec = self.dec();
        let kbar = dec.group.quotient(k);
        let src = self.piece_dim(k);
        let mut out: BTreeMap<Degree, Matrix> = BTreeMap::new();
        let mut add = |t: Degree, m: Matrix| {
            match out.get_mut(&t) {
                Some(acc) => *acc = acc.add(&m),
                None => {
                    out.insert(t, m);
                }
            }
        };
        for (l, v) in &x.loops {
            let t = deg_add(k, l);
            w.check(&t)?;
            let lbar = dec.group.quotient(l);
            if let Some(allowed) = &self.allowed {
                if !allowed[dec.group.index(&lbar)].contains(v) {
                    return Err(Error::NotInEigenspace("loop term outside the centralizer of h_0".into()));
                }
            }
            add(t, self.loop_block(v, &kbar, &lbar));
        }
        if self.kind == ModuleKind::LBeta && !x.central.is_empty() {
            return Err(Error::Invalid("central terms are not part of the acting algebra".into()));
        }
        for ((r, i), c) in &x.derivs {
            let t = deg_add(k, r);
            w.check(&t)?;
            let n = self.n();
            let mut gl = Matrix::zeros(n, n);
            for (j, &rj) in r.iter().enumerate() {
                gl.set(j, *i, int(rj));
            }
            let d2 = self.class_dim(&kbar);
            let scalar = &(&int(k[*i]) + &self.beta[*i]) + &self.piece_correction(k);
            let m = Matrix::identity(src).scale(&scalar).add(&self.v1.action(&gl).kron(&Matrix::identity(d2)));
            add(t, m.scale(c));
        }
        out.retain(|_, m| !m.is_zero());
        Ok(out)
    }

    pub fn apply(&self, x: &ToroidalElement, v: &ModVec) -> Result<ModVec> {
        let mut out: ModVec = BTreeMap::new();
        for (k, vk) in v {
            for (t, m) in self.operator(x, k)? {
                let img = m.mul_vec(vk);
                match out.get_mut(&t) {
                    Some(acc) => crate::linalg::axpy(acc, &CycScalar::one(), &img),
                    None => {
                        out.insert(t, img);
                    }
                }
            }
        }
        out.retain(|_, v| !is_zero_vec(v));
        Ok(out)
    }

    /// `ρ(x) ρ(y)` on the piece of degree `k`.
    pub fn compose(&self, x: &ToroidalElement, y: &ToroidalElement, k: &[i64]) -> Result<BTreeMap<Degree, Matrix>> {
        let mut out: BTreeMap<Degree, Matrix> = BTreeMap::new();
        for (t1, m1) in self.operator(y, k)? {
            for (t2, m2) in self.operator(x, &t1)? {
                let p = m2.mul(&m1);
                match out.get_mut(&t2) {
                    Some(acc) => *acc = acc.add(&p),
                    None => {
                        out.insert(t2, p);
                    }
                }
            }
        }
        out.retain(|_, m| !m.is_zero());
        Ok(out)
    }

    /// `ρ([x,y]) = ρ(x)ρ(y) - ρ(y)ρ(x)` on the whole piece of degree `k`.
    pub fn axiom_check(&self, x: &ToroidalElement, y: &ToroidalElement, k: &[i64]) -> Result<AxiomOutcome> {
        let skip = |e: &Error| matches!(e, Error::WindowOverflow(_));
        let mut br = match self.torus.bracket(x, y) {
            Ok(b) => b,
            Err(e) if skip(&e) => return Ok(AxiomOutcome::Skipped),
            Err(e) => return Err(e),
        };
        if self.kind == ModuleKind::LBeta {
            br.central.clear();
        }
        let parts = (self.operator(&br, k), self.compose(x, y, k), self.compose(y, x, k));
        let (lhs, xy, yx) = match parts {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                return if skip(&e) { Ok(AxiomOutcome::Skipped) } else { Err(e) };
            }
        };
        let mut rhs = xy;
        for (t, m) in yx {
            match rhs.get_mut(&t) {
                Some(acc) => *acc = acc.sub(&m),
                None => {
                    rhs.insert(t, m.scale(&int(-1)));
                }
            }
        }
        rhs.retain(|_, m| !m.is_zero());
        Ok(if lhs == rhs { AxiomOutcome::Pass } else { AxiomOutcome::Fail })
    }

    /// Whether every central window element acts by zero.
    pub fn level_zero(&self) -> Result<bool> {
        for g in self.torus.window_basis() {
            if g.central.is_empty() {
                continue;
            }
            for k in self.torus.window.degrees(self.n()) {
                let probe = ToroidalElement { loops: BTreeMap::new(), central: g.central.clone(), derivs: BTreeMap::new() };
                let ops = match self.kind {
                    ModuleKind::Realized => self.operator(&probe, &k)?,
                    ModuleKind::LBeta => BTreeMap::new(),
                };
                if !ops.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Dimensions of the weight spaces `weight + delta_{k+beta}` over the window.
    pub fn weight_table(&self) -> Vec<WeightEntry> {
        let dec = self.dec();
        let d1 = self.dim_v1();
        let mut out = Vec::new();
        for k in self.torus.window.degrees(self.n()) {
            let idx = dec.group.index(&dec.group.quotient(&k));
            for (w, cols) in group_by_weight(&self.classes.weights[idx]) {
                out.push(WeightEntry { k: k.clone(), weight: w, dim: d1 * cols.len() });
            }
        }
        out
    }

    pub fn weight_dim(&self, k: &[i64], weight: &[CycScalar]) -> usize {
        if !self.torus.window.contains(k) {
            return 0;
        }
        let idx = self.dec().group.index(&self.dec().group.quotient(k));
        self.dim_v1() * self.classes.weights[idx].iter().filter(|w| w.as_slice() == weight).count()
    }

    /// TSV with columns: degree, weight (labels on the simple coroots of `g_0`), dimension.
    pub fn weight_table_tsv(&self) -> String {
        let dec = self.dec();
        let mut s = String::from("k\tweight\tdim\n");
        for e in self.weight_table() {
            let labels = dec.dynkin_labels(&e.weight).unwrap_or_else(|| e.weight.clone());
            let ks: Vec<String> = e.k.iter().map(|x| x.to_string()).collect();
            let ws: Vec<String> = labels.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("[{}]\t({})\t{}\n", ks.join(","), ws.join(","), e.dim));
        }
        s
    }

    /// Real roots `alpha + delta_s` with `s` in the window.
    pub fn real_roots(&self) -> Vec<ToroidalRoot> {
        let dec = self.dec();
        let zw = dec.zero_weight();
        let mut out = Vec::new();
        for s in self.torus.window.degrees(self.n()) {
            for p in dec.class_piece_list(&dec.group.quotient(&s)) {
                if p.weight != zw {
                    out.push(ToroidalRoot::new(dec.weights[p.weight].clone(), s.clone()));
                }
            }
        }
        out
    }

    /// Compares each weight-space dimension with that of its reflection by every
    /// real root in the window; returns the number of comparisons and the failures.
    pub fn weyl_check(&self) -> Result<(usize, Vec<WeylWitness>)> {
        let table = self.weight_table();
        let roots = self.real_roots();
        let mut checked = 0;
        let mut bad = Vec::new();
        for e in &table {
            let s: Vector = e.k.iter().zip(&self.beta).map(|(&k, b)| &int(k) + b).collect();
            let lam = ToroidalWeight::level_zero(e.weight.clone(), s);
            for gamma in &roots {
                let r = self.torus.weyl_reflect(gamma, &lam)?;
                let kk: Option<Degree> = r.on_d.iter().zip(&self.beta).map(|(x, b)| (x - b).to_i64()).collect();
                let Some(kk) = kk else { continue };
                if !self.torus.window.contains(&kk) {
                    continue;
                }
                checked += 1;
                let d = self.weight_dim(&kk, &r.fin);
                if d != e.dim {
                    bad.push(WeylWitness { root: gamma.clone(), from: e.clone(), to_k: kk, to_weight: r.fin, to_dim: d });
                }
            }
        }
        Ok((checked, bad))
    }

    /// Loop generators of positive `h_0`-weight with degree in the window.
    pub fn positive_generators(&self) -> Vec<ToroidalElement> {
        let dec = self.dec();
        let mut out = Vec::new();
        for l in self.torus.window.degrees(self.n()) {
            for p in dec.class_piece_list(&dec.group.quotient(&l)) {
                if dec.is_positive(&dec.weights[p.weight]) {
                    for b in &p.basis {
                        out.push(ToroidalElement::loop_term(b.clone(), l.clone()));
                    }
                }
            }
        }
        out
    }

    /// Joint kernel of the positive generators keeping the degree in the window.
    pub fn highest_weight_space(&self) -> Result<Vec<HwsEntry>> {
        let dec = self.dec();
        let gens = self.positive_generators();
        let mut pos_classes: Vec<Vec<u32>> = Vec::new();
        for g in &gens {
            let c = dec.group.quotient(g.loops.keys().next().unwrap());
            if !pos_classes.contains(&c) {
                pos_classes.push(c);
            }
        }
        let mut out = Vec::new();
        for k in self.torus.window.degrees(self.n()) {
            let d = self.piece_dim(&k);
            let mut rows = Vec::new();
            let mut reached: Vec<Vec<u32>> = Vec::new();
            for g in &gens {
                let l = g.loops.keys().next().unwrap();
                if !self.torus.window.contains(&deg_add(&k, l)) {
                    continue;
                }
                let c = dec.group.quotient(l);
                if !reached.contains(&c) {
                    reached.push(c);
                }
                for (_, m) in self.operator(g, &k)? {
                    rows.push(m);
                }
            }
            let null = if rows.is_empty() {
                (0..d).map(|j| crate::linalg::unit_vec(d, j)).collect()
            } else {
                Matrix::vstack(&rows).nullspace()
            };
            let expected = match &self.graded {
                Some(gm) => self.dim_v1() * gm.top_space(&dec.group.quotient(&k)).cols,
                None => null.len(),
            };
            out.push(HwsEntry {
                interior: pos_classes.iter().all(|c| reached.contains(c)),
                dim: null.len(),
                expected,
                basis: Matrix::from_cols(d, &null),
                k,
            });
        }
        Ok(out)
    }

    /// Bound on nilpotency exponents: `dim V_1 · dim X + 1`.
    pub fn nilpotency_bound(&self) -> usize {
        self.dim_v1() * self.inner.dim + 1
    }

    /// Least `m` with `x^m v = 0` for `x ∈ g_lbar` starting in class `kbar`,
    /// following the action through classes without a degree cutoff.
    pub fn nilpotency_exponent(&self, x: &[CycScalar], lbar: &[u32], kbar: &[u32], v: &[CycScalar]) -> Option<usize> {
        let dec = self.dec();
        let mut cls = kbar.to_vec();
        let mut cur = v.to_vec();
        for m in 0..=self.nilpotency_bound() {
            if is_zero_vec(&cur) {
                return Some(m);
            }
            cur = self.loop_block(x, &cls, lbar).mul_vec(&cur);
            cls = dec.group.add(&cls, lbar);
        }
        None
    }

    /// Seeded samples of real-root generators and basis vectors.
    pub fn check_integrable(&self, samples: usize, seed: u64) -> Vec<IntegrabilitySample> {
        let dec = self.dec();
        let zw = dec.zero_weight();
        let mut gens: Vec<(Vector, Degree)> = Vec::new();
        for l in self.torus.window.degrees(self.n()) {
            for p in dec.class_piece_list(&dec.group.quotient(&l)) {
                if p.weight != zw {
                    for b in &p.basis {
                        gens.push((b.clone(), l.clone()));
                    }
                }
            }
        }
        let degrees: Vec<Degree> =
            self.torus.window.degrees(self.n()).into_iter().filter(|k| self.piece_dim(k) > 0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(samples);
        if gens.is_empty() || degrees.is_empty() {
            return out;
        }
        for _ in 0..samples {
            let (x, l) = &gens[rng.gen_range(0..gens.len())];
            let k = &degrees[rng.gen_range(0..degrees.len())];
            let idx = rng.gen_range(0..self.piece_dim(k));
            let v = crate::linalg::unit_vec(self.piece_dim(k), idx);
            let exponent = self.nilpotency_exponent(x, &dec.group.quotient(l), &dec.group.quotient(k), &v);
            let generator = self.torus.render(&ToroidalElement::loop_term(x.clone(), l.clone()));
            out.push(IntegrabilitySample { generator, degree: k.clone(), index: idx, exponent });
        }
        out
    }
}

/// Outcome of the isomorphism criterion with the clause that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    /// Clause results: `psi = psi', c = c'`; `lambda' ∈ Ĝ lambda`; `beta - beta' ∈ Z^n`.
    pub clauses: [bool; 3],
    pub certificate: String,
}

fn same_grading(a: &EigenspaceDecomposition, b: &EigenspaceDecomposition) -> bool {
    a.m() == b.m()
        && a.g.roots.letter == b.g.roots.letter
        && a.g.rank() == b.g.rank()
        && a.sigmas.iter().zip(&b.sigmas).all(|(x, y)| x.matrix == y.matrix)
}

/// Isomorphism criterion for realized modules.
pub fn iso_check(dec: &EigenspaceDecomposition, q: &Quadruple, dec2: &EigenspaceDecomposition, q2: &Quadruple) -> Result<IsoVerdict> {
    if !same_grading(dec, dec2) {
        return Err(Error::IncompatibleGradings("the two quadruples use different gradings".into()));
    }
    let n = dec.n();
    if q.beta.len() != n || q2.beta.len() != n || q.psi.len() != q2.psi.len() {
        return Err(Error::Invalid("quadruples have mismatched lengths".into()));
    }
    if q.lambda.iter().all(|&x| x == 0) || q2.lambda.iter().all(|&x| x == 0) {
        return Err(Error::ZeroLambda);
    }
    let c1 = q.psi == q2.psi && q.c == q2.c;
    let c2 = dec.ghat_orbit(&q.lambda)?.contains(&q2.lambda);
    let c3 = q.beta.iter().zip(&q2.beta).all(|(a, b)| (a - b).is_integer());
    let certificate = if !c1 {
        if q.psi != q2.psi {
            "not isomorphic (clause 1: ψ ≠ ψ′)".to_string()
        } else {
            "not isomorphic (clause 1: c ≠ c′)".to_string()
        }
    } else if !c2 {
        "not isomorphic (clause 2: λ′ ∉ Ĝλ)".to_string()
    } else if !c3 {
        "not isomorphic (clause 3: β − β′ ∉ ℤⁿ)".to_string()
    } else {
        let mut notes = Vec::new();
        if q.lambda != q2.lambda {
            notes.push("clause 2: λ′ ∈ Ĝλ");
        }
        if q.beta != q2.beta {
            notes.push("clause 3: integral shift");
        }
        if notes.is_empty() {
            "isomorphic (identical parameters)".to_string()
        } else {
            format!("isomorphic ({})", notes.join("; "))
        }
    };
    Ok(IsoVerdict { isomorphic: c1 && c2 && c3, clauses: [c1, c2, c3], certificate })
}
