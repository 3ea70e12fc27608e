//! Elements and brackets of the twisted full toroidal Lie algebra on a finite
//! degree window: loop terms `x ⊗ t^k`, central terms `t^r K_i` modulo exact
//! forms, and derivation terms `t^r d_i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grading::{window_degrees, EigenspaceDecomposition, HWeight};
use crate::linalg::{add_vec, axpy, dot, is_zero_vec, scale_vec, zero_vec, Matrix, Vector};
use crate::scalar::CycScalar;

pub type Degree = Vec<i64>;

/// The box `[-w, w]^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub w: i64,
}

impl DegreeWindow {
    pub fn new(w: i64) -> Self {
        DegreeWindow { w }
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.iter().all(|x| x.abs() <= self.w)
    }

    pub fn check(&self, k: &[i64]) -> Result<()> {
        if self.contains(k) {
            Ok(())
        } else {
            Err(Error::WindowOverflow(format!("{k:?}")))
        }
    }

    pub fn degrees(&self, n: usize) -> Vec<Degree> {
        window_degrees(n, self.w)
    }
}

pub fn deg_add(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn int(x: i64) -> CycScalar {
    CycScalar::from_int(x)
}

/// Index of the first nonzero entry.
pub fn pivot(r: &[i64]) -> Option<usize> {
    r.iter().position(|&x| x != 0)
}

/// Finite sum of loop, central and derivation terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ToroidalElement {
    /// Degree to a vector of `g` in Chevalley coordinates.
    pub loops: BTreeMap<Degree, Vector>,
    /// `(r, i)` to the coefficient of `t^r K_i`, in reduced form.
    pub central: BTreeMap<(Degree, usize), CycScalar>,
    /// `(r, i)` to the coefficient of `t^r d_i`.
    pub derivs: BTreeMap<(Degree, usize), CycScalar>,
}

/// Coordinate of a basis element of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Loop(Degree, usize),
    Central(Degree, usize),
    Deriv(Degree, usize),
}

impl ToroidalElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn loop_term(x: Vector, k: Degree) -> Self {
        let mut e = Self::zero();
        if !is_zero_vec(&x) {
            e.loops.insert(k, x);
        }
        e
    }

    /// `t^r K_i`, unreduced; call [`reduce_central`] before comparing.
    pub fn central_term(c: CycScalar, r: Degree, i: usize) -> Self {
        let mut e = Self::zero();
        if !c.is_zero() {
            e.central.insert((r, i), c);
        }
        e
    }

    pub fn deriv_term(c: CycScalar, r: Degree, i: usize) -> Self {
        let mut e = Self::zero();
        if !c.is_zero() {
            e.derivs.insert((r, i), c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.loops.is_empty() && self.central.is_empty() && self.derivs.is_empty()
    }

    fn prune(mut self) -> Self {
        self.loops.retain(|_, v| !is_zero_vec(v));
        self.central.retain(|_, v| !v.is_zero());
        self.derivs.retain(|_, v| !v.is_zero());
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.loops {
            match out.loops.get_mut(k) {
                Some(w) => axpy(w, &CycScalar::one(), v),
                None => {
                    out.loops.insert(k.clone(), v.clone());
                }
            }
        }
        for (key, c) in &other.central {
            *out.central.entry(key.clone()).or_default() += c;
        }
        for (key, c) in &other.derivs {
            *out.derivs.entry(key.clone()).or_default() += c;
        }
        out.prune()
    }

    pub fn scale(&self, a: &CycScalar) -> Self {
        ToroidalElement {
            loops: self.loops.iter().map(|(k, v)| (k.clone(), scale_vec(a, v))).collect(),
            central: self.central.iter().map(|(k, v)| (k.clone(), a * v)).collect(),
            derivs: self.derivs.iter().map(|(k, v)| (k.clone(), a * v)).collect(),
        }
        .prune()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    /// All degrees occurring in the element.
    pub fn degrees(&self) -> BTreeSet<Degree> {
        self.loops
            .keys()
            .cloned()
            .chain(self.central.keys().map(|(r, _)| r.clone()))
            .chain(self.derivs.keys().map(|(r, _)| r.clone()))
            .collect()
    }

    /// Sparse coordinates on the Chevalley-loop, central and derivation basis.
    pub fn coords(&self) -> BTreeMap<Coord, CycScalar> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.loops {
            for (a, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out.insert(Coord::Loop(k.clone(), a), c.clone());
                }
            }
        }
        for ((r, i), c) in &self.central {
            out.insert(Coord::Central(r.clone(), *i), c.clone());
        }
        for ((r, i), c) in &self.derivs {
            out.insert(Coord::Deriv(r.clone(), *i), c.clone());
        }
        out
    }
}

/// Canonical form of central terms modulo `span { sum_i r_i t^r K_i }`.
pub fn reduce_central(
    raw: &BTreeMap<(Degree, usize), CycScalar>,
    m: &[u32],
) -> Result<BTreeMap<(Degree, usize), CycScalar>> {
    let mut out: BTreeMap<(Degree, usize), CycScalar> = BTreeMap::new();
    for ((r, i), c) in raw {
        if r.iter().zip(m).any(|(&x, &mi)| x.rem_euclid(mi as i64) != 0) {
            return Err(Error::DegreeNotInGamma(format!("{r:?}")));
        }
        match pivot(r) {
            Some(j) if j == *i => {
                // t^r K_j = -(1/r_j) sum_{p != j} r_p t^r K_p
                let inv = CycScalar::frac(-1, r[j]);
                for (p, &rp) in r.iter().enumerate() {
                    if p != j && rp != 0 {
                        *out.entry((r.clone(), p)).or_default() += &(&(c * &inv) * &int(rp));
                    }
                }
            }
            _ => *out.entry((r.clone(), *i)).or_default() += c,
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// `sum_p r_p t^{deg} K_p`, unreduced.
fn weighted_central(coef: &CycScalar, r: &[i64], deg: &[i64]) -> BTreeMap<(Degree, usize), CycScalar> {
    let mut out = BTreeMap::new();
    if coef.is_zero() {
        return out;
    }
    for (p, &rp) in r.iter().enumerate() {
        if rp != 0 {
            out.insert((deg.to_vec(), p), coef * &int(rp));
        }
    }
    out
}

/// Restricted root `alpha + delta_k`, with an optional shift `delta_beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalRoot {
    /// Finite part as values on the basis of `h_0`.
    pub alpha: HWeight,
    pub k: Degree,
    pub beta: Option<Vec<CycScalar>>,
}

impl ToroidalRoot {
    pub fn new(alpha: HWeight, k: Degree) -> Self {
        ToroidalRoot { alpha, k, beta: None }
    }

    pub fn is_real(&self) -> bool {
        !is_zero_vec(&self.alpha)
    }

    pub fn is_positive(&self, dec: &EigenspaceDecomposition) -> bool {
        dec.is_positive(&self.alpha)
    }
}

/// Linear functional on `h_0 ⊕ span{K_i} ⊕ span{d_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToroidalWeight {
    pub fin: HWeight,
    pub on_k: Vec<CycScalar>,
    pub on_d: Vec<CycScalar>,
}

impl ToroidalWeight {
    /// `mu + delta_s` at level zero, with `s` possibly non-integral.
    pub fn level_zero(fin: HWeight, s: Vec<CycScalar>) -> Self {
        let n = s.len();
        ToroidalWeight { fin, on_k: vec![CycScalar::zero(); n], on_d: s }
    }

    pub fn of_root(gamma: &ToroidalRoot) -> Self {
        let mut s: Vec<CycScalar> = gamma.k.iter().map(|&x| int(x)).collect();
        if let Some(b) = &gamma.beta {
            s = add_vec(&s, b);
        }
        Self::level_zero(gamma.alpha.clone(), s)
    }

    fn axpy(&self, a: &CycScalar, other: &Self) -> Self {
        let f = |x: &[CycScalar], y: &[CycScalar]| -> Vector {
            let mut v = x.to_vec();
            axpy(&mut v, a, y);
            v
        };
        ToroidalWeight { fin: f(&self.fin, &other.fin), on_k: f(&self.on_k, &other.on_k), on_d: f(&self.on_d, &other.on_d) }
    }
}

/// The algebra context: grading, cocycle parameters and window.
#[derive(Clone, Debug)]
pub struct ToroidalAlgebra {
    pub dec: Arc<EigenspaceDecomposition>,
    /// Cocycle `a·phi_1 + b·phi_2`.
    pub phi: (CycScalar, CycScalar),
    pub window: DegreeWindow,
    /// Gram matrix of the invariant form on `h_0` and its inverse.
    h0_gram_inv: Matrix,
}

impl ToroidalAlgebra {
    pub fn new(dec: Arc<EigenspaceDecomposition>, phi: (CycScalar, CycScalar), window: i64) -> Self {
        let r = dec.h0.len();
        let mut gram = Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                gram.set(i, j, dec.g.form(&dec.h0[i], &dec.h0[j]));
            }
        }
        let h0_gram_inv = gram.inverse().expect("form is nondegenerate on h_0");
        ToroidalAlgebra { dec, phi, window: DegreeWindow::new(window), h0_gram_inv }
    }

    pub fn n(&self) -> usize {
        self.dec.n()
    }

    pub fn m(&self) -> &[u32] {
        self.dec.m()
    }

    pub fn in_gamma(&self, r: &[i64]) -> bool {
        self.dec.group.in_gamma(r)
    }

    fn require_gamma(&self, r: &[i64]) -> Result<()> {
        if r.len() != self.n() {
            return Err(Error::Invalid(format!("degree {r:?} has the wrong length")));
        }
        if self.in_gamma(r) {
            Ok(())
        } else {
            Err(Error::DegreeNotInGamma(format!("{r:?}")))
        }
    }

    /// Checks eigenspace membership, Γ-membership and window support, and reduces central terms.
    pub fn normalize(&self, x: &ToroidalElement) -> Result<ToroidalElement> {
        for (k, v) in &x.loops {
            if k.len() != self.n() {
                return Err(Error::Invalid(format!("degree {k:?} has the wrong length")));
            }
            let kbar = self.dec.group.quotient(k);
            if !self.dec.in_class(&kbar, v) {
                return Err(Error::NotInEigenspace(format!("loop term at degree {k:?}")));
            }
        }
        for (r, _) in x.derivs.keys() {
            self.require_gamma(r)?;
        }
        for (r, _) in x.central.keys() {
            self.require_gamma(r)?;
        }
        let central = reduce_central(&x.central, self.m())?;
        let out = ToroidalElement { loops: x.loops.clone(), central, derivs: x.derivs.clone() }.prune();
        for k in out.degrees() {
            self.window.check(&k)?;
        }
        Ok(out)
    }

    pub fn loop_elem(&self, x: Vector, k: Degree) -> Result<ToroidalElement> {
        self.normalize(&ToroidalElement::loop_term(x, k))
    }

    pub fn central_elem(&self, c: CycScalar, r: Degree, i: usize) -> Result<ToroidalElement> {
        self.normalize(&ToroidalElement::central_term(c, r, i))
    }

    pub fn deriv_elem(&self, c: CycScalar, r: Degree, i: usize) -> Result<ToroidalElement> {
        self.normalize(&ToroidalElement::deriv_term(c, r, i))
    }

    /// `a·phi_1 + b·phi_2` on `(t^r d_i, t^s d_j)`, reduced.
    pub fn cocycle(&self, r: &[i64], s: &[i64], i: usize, j: usize) -> Result<ToroidalElement> {
        self.require_gamma(r)?;
        self.require_gamma(s)?;
        let central = reduce_central(&self.cocycle_raw(r, s, i, j), self.m())?;
        Ok(ToroidalElement { central, ..Default::default() }.prune())
    }

    fn cocycle_raw(&self, r: &[i64], s: &[i64], i: usize, j: usize) -> BTreeMap<(Degree, usize), CycScalar> {
        let (a, b) = &self.phi;
        let coef = &(a * &int(-s[i] * r[j])) + &(b * &int(r[i] * s[j]));
        weighted_central(&coef, r, &deg_add(r, s))
    }

    /// The full bracket. Fails with `WindowOverflow` when an output degree leaves the window.
    pub fn bracket(&self, x: &ToroidalElement, y: &ToroidalElement) -> Result<ToroidalElement> {
        for k in x.degrees().iter().chain(y.degrees().iter()) {
            self.window.check(k)?;
        }
        let g = &self.dec.g;
        let mut loops: BTreeMap<Degree, Vector> = BTreeMap::new();
        let mut central: BTreeMap<(Degree, usize), CycScalar> = BTreeMap::new();
        let mut derivs: BTreeMap<(Degree, usize), CycScalar> = BTreeMap::new();
        let mut add_loop = |k: Degree, c: &CycScalar, v: &[CycScalar]| {
            let e = loops.entry(k).or_insert_with(|| zero_vec(g.dim()));
            axpy(e, c, v);
        };
        let add_central = |central: &mut BTreeMap<(Degree, usize), CycScalar>, m: BTreeMap<(Degree, usize), CycScalar>| {
            for (key, c) in m {
                *central.entry(key).or_default() += &c;
            }
        };
        let one = CycScalar::one();
        let neg = int(-1);

        // loop-loop
        for (k, xv) in &x.loops {
            for (l, yv) in &y.loops {
                let kl = deg_add(k, l);
                self.window.check(&kl)?;
                add_loop(kl.clone(), &one, &g.bracket(xv, yv));
                let f = g.form(xv, yv);
                add_central(&mut central, weighted_central(&f, k, &kl));
            }
        }
        // derivation-loop, both orders
        for ((r, i), c) in &x.derivs {
            for (k, yv) in &y.loops {
                let rk = deg_add(r, k);
                self.window.check(&rk)?;
                if k[*i] != 0 {
                    add_loop(rk, &(c * &int(k[*i])), yv);
                }
            }
        }
        for ((r, i), c) in &y.derivs {
            for (k, xv) in &x.loops {
                let rk = deg_add(r, k);
                self.window.check(&rk)?;
                if k[*i] != 0 {
                    add_loop(rk, &(&(c * &int(k[*i])) * &neg), xv);
                }
            }
        }
        // derivation-central, both orders
        let dk = |r: &[i64], i: usize, s: &[i64], j: usize, c: &CycScalar| -> Result<BTreeMap<(Degree, usize), CycScalar>> {
            let rs = deg_add(r, s);
            self.window.check(&rs)?;
            let mut m = BTreeMap::new();
            if s[i] != 0 {
                m.insert((rs.clone(), j), c * &int(s[i]));
            }
            if i == j {
                for (key, v) in weighted_central(c, r, &rs) {
                    *m.entry(key).or_default() += &v;
                }
            }
            Ok(m)
        };
        for ((r, i), c) in &x.derivs {
            for ((s, j), d) in &y.central {
                add_central(&mut central, dk(r, *i, s, *j, &(c * d))?);
            }
        }
        for ((r, i), c) in &y.derivs {
            for ((s, j), d) in &x.central {
                add_central(&mut central, dk(r, *i, s, *j, &(&(c * d) * &neg))?);
            }
        }
        // derivation-derivation
        for ((r, i), c) in &x.derivs {
            for ((s, j), d) in &y.derivs {
                let rs = deg_add(r, s);
                self.window.check(&rs)?;
                let cd = c * d;
                if s[*i] != 0 {
                    *derivs.entry((rs.clone(), *j)).or_default() += &(&cd * &int(s[*i]));
                }
                if r[*j] != 0 {
                    *derivs.entry((rs.clone(), *i)).or_default() -= &(&cd * &int(r[*j]));
                }
                for (key, v) in self.cocycle_raw(r, s, *i, *j) {
                    *central.entry(key).or_default() += &(&v * &cd);
                }
            }
        }
        let central = reduce_central(&central, self.m())?;
        Ok(ToroidalElement { loops, central, derivs }.prune())
    }

    /// Basis of the root space of `gamma`.
    pub fn root_space(&self, gamma: &ToroidalRoot) -> Result<Vec<ToroidalElement>> {
        self.window.check(&gamma.k)?;
        let dec = &self.dec;
        let kbar = dec.group.quotient(&gamma.k);
        let mut out = Vec::new();
        if let Some(wi) = dec.weight_index(&gamma.alpha) {
            if let Some(p) = dec.piece(&kbar, wi) {
                for v in &p.basis {
                    out.push(ToroidalElement::loop_term(v.clone(), gamma.k.clone()));
                }
            }
        }
        if !gamma.is_real() && self.in_gamma(&gamma.k) {
            let n = self.n();
            let piv = pivot(&gamma.k);
            for i in 0..n {
                if piv != Some(i) {
                    out.push(ToroidalElement::central_term(CycScalar::one(), gamma.k.clone(), i));
                }
            }
            for i in 0..n {
                out.push(ToroidalElement::deriv_term(CycScalar::one(), gamma.k.clone(), i));
            }
        }
        Ok(out)
    }

    /// `t_alpha` in `h_0` coordinates with `(t_alpha | h) = alpha(h)`, and `(alpha|alpha)`.
    pub fn dual_of(&self, alpha: &[CycScalar]) -> (Vector, CycScalar) {
        let t = self.h0_gram_inv.mul_vec(alpha);
        let len = dot(alpha, &t);
        (t, len)
    }

    /// Element of `h` for given `h_0` coordinates.
    pub fn h0_vector(&self, coords: &[CycScalar]) -> Vector {
        let mut v = zero_vec(self.dec.g.dim());
        for (c, b) in coords.iter().zip(&self.dec.h0) {
            axpy(&mut v, c, b);
        }
        v
    }

    /// `alpha^vee` in `h_0` coordinates.
    pub fn finite_coroot(&self, alpha: &[CycScalar]) -> Result<Vector> {
        if is_zero_vec(alpha) {
            return Err(Error::NullRoot);
        }
        let (t, len) = self.dual_of(alpha);
        let s = &int(2) / &len;
        Ok(scale_vec(&s, &t))
    }

    /// `gamma^vee = alpha^vee + (2/(alpha|alpha)) sum_i k_i K_i`.
    pub fn coroot(&self, gamma: &ToroidalRoot) -> Result<ToroidalElement> {
        let cor = self.finite_coroot(&gamma.alpha)?;
        let (_, len) = self.dual_of(&gamma.alpha);
        let s = &int(2) / &len;
        let mut e = ToroidalElement::loop_term(self.h0_vector(&cor), vec![0; self.n()]);
        for (i, &ki) in gamma.k.iter().enumerate() {
            if ki != 0 {
                e.central.insert((vec![0; self.n()], i), &s * &int(ki));
            }
        }
        Ok(e)
    }

    /// Value of a weight on an element of `h_0 ⊕ span{K_i} ⊕ span{d_i}`.
    pub fn pair(&self, lambda: &ToroidalWeight, h: &ToroidalElement) -> Result<CycScalar> {
        let zero = vec![0; self.n()];
        let mut acc = CycScalar::zero();
        for (k, v) in &h.loops {
            let c = self.dec.h0_coords(v).filter(|_| *k == zero).ok_or_else(|| Error::Invalid("not in h_0".into()))?;
            acc += &dot(&lambda.fin, &c);
        }
        for ((r, i), c) in &h.central {
            if *r != zero {
                return Err(Error::Invalid("not in the Cartan part".into()));
            }
            acc += &(c * &lambda.on_k[*i]);
        }
        for ((r, i), c) in &h.derivs {
            if *r != zero {
                return Err(Error::Invalid("not in the Cartan part".into()));
            }
            acc += &(c * &lambda.on_d[*i]);
        }
        Ok(acc)
    }

    /// `r_gamma(lambda) = lambda - lambda(gamma^vee) gamma`.
    pub fn weyl_reflect(&self, gamma: &ToroidalRoot, lambda: &ToroidalWeight) -> Result<ToroidalWeight> {
        let cor = self.coroot(gamma)?;
        let p = self.pair(lambda, &cor)?;
        Ok(lambda.axpy(&-p, &ToroidalWeight::of_root(gamma)))
    }

    /// `D(u, r) = sum_i u_i t^r d_i`.
    pub fn d_element(&self, u: &[CycScalar], r: &[i64]) -> Result<ToroidalElement> {
        self.require_gamma(r)?;
        let mut e = ToroidalElement::zero();
        for (i, c) in u.iter().enumerate() {
            e = e.add(&ToroidalElement::deriv_term(c.clone(), r.to_vec(), i));
        }
        Ok(e)
    }

    /// `I(u, r) = D(u, r) - D(u, 0)`.
    pub fn i_element(&self, u: &[CycScalar], r: &[i64]) -> Result<ToroidalElement> {
        Ok(self.d_element(u, r)?.sub(&self.d_element(u, &vec![0; self.n()])?))
    }

    /// Right-hand side of the closed bracket law for `[I(u,r), I(v,s)]`.
    pub fn i_bracket_closed(&self, u: &[CycScalar], r: &[i64], v: &[CycScalar], s: &[i64]) -> Result<ToroidalElement> {
        let ri: Vec<CycScalar> = r.iter().map(|&x| int(x)).collect();
        let si: Vec<CycScalar> = s.iter().map(|&x| int(x)).collect();
        let vr = dot(v, &ri);
        let us = dot(u, &si);
        let w: Vector = v.iter().zip(u).map(|(vi, ui)| &(&us * vi) - &(&vr * ui)).collect();
        Ok(self
            .i_element(u, r)?
            .scale(&vr)
            .sub(&self.i_element(v, s)?.scale(&us))
            .add(&self.i_element(&w, &deg_add(r, s))?))
    }

    /// Image in `gl_n` of an element of the I-subalgebra: `I(u, r) ↦ r u^T`.
    pub fn pi_map(&self, x: &ToroidalElement) -> Result<Matrix> {
        let n = self.n();
        if !x.loops.is_empty() || !x.central.is_empty() {
            return Err(Error::Invalid("element has loop or central terms".into()));
        }
        let mut total = vec![CycScalar::zero(); n];
        let mut out = Matrix::zeros(n, n);
        for ((r, i), c) in &x.derivs {
            total[*i] += c;
            for (j, &rj) in r.iter().enumerate() {
                if rj != 0 {
                    let v = out.get(j, *i) + &(c * &int(rj));
                    out.set(j, *i, v);
                }
            }
        }
        if !is_zero_vec(&total) {
            return Err(Error::Invalid("element is not in the I-subalgebra".into()));
        }
        Ok(out)
    }

    /// Basis of the algebra on the window: loop eigenbasis, reduced central
    /// basis and derivations, ordered by degree.
    pub fn window_basis(&self) -> Vec<ToroidalElement> {
        let mut out = Vec::new();
        let n = self.n();
        for k in self.window.degrees(n) {
            let kbar = self.dec.group.quotient(&k);
            for v in self.dec.class_basis(&kbar) {
                out.push(ToroidalElement::loop_term(v, k.clone()));
            }
            if self.in_gamma(&k) {
                let piv = pivot(&k);
                for i in 0..n {
                    if piv != Some(i) {
                        out.push(ToroidalElement::central_term(CycScalar::one(), k.clone(), i));
                    }
                }
                for i in 0..n {
                    out.push(ToroidalElement::deriv_term(CycScalar::one(), k.clone(), i));
                }
            }
        }
        out
    }

    /// Degree of a homogeneous element.
    pub fn degree_of(x: &ToroidalElement) -> Option<Degree> {
        let d = x.degrees();
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    /// Dimension of the space of window elements commuting with every window
    /// generator it can be bracketed with, per degree.
    pub fn window_centre(&self) -> Result<Vec<(Degree, Vec<ToroidalElement>)>> {
        let basis = self.window_basis();
        let degs: Vec<Degree> = basis.iter().map(|b| Self::degree_of(b).unwrap()).collect();
        let mut out = Vec::new();
        for k in self.window.degrees(self.n()) {
            let cand: Vec<usize> = (0..basis.len()).filter(|&i| degs[i] == k).collect();
            if cand.is_empty() {
                continue;
            }
            let mut rows: BTreeMap<(usize, Coord), Vec<(usize, CycScalar)>> = BTreeMap::new();
            for (yi, y) in basis.iter().enumerate() {
                if !self.window.contains(&deg_add(&k, &degs[yi])) {
                    continue;
                }
                for (col, &xi) in cand.iter().enumerate() {
                    let b = self.bracket(&basis[xi], y)?;
                    for (coord, c) in b.coords() {
                        rows.entry((yi, coord)).or_default().push((col, c));
                    }
                }
            }
            let mut m = Matrix::zeros(rows.len(), cand.len());
            for (ri, entries) in rows.values().enumerate() {
                for (c, v) in entries {
                    m.set(ri, *c, v.clone());
                }
            }
            let ns = if rows.is_empty() { (0..cand.len()).map(|i| crate::linalg::unit_vec(cand.len(), i)).collect() } else { m.nullspace() };
            if ns.is_empty() {
                continue;
            }
            let elems = ns
                .iter()
                .map(|c| {
                    let mut e = ToroidalElement::zero();
                    for (j, &xi) in cand.iter().enumerate() {
                        e = e.add(&basis[xi].scale(&c[j]));
                    }
                    e
                })
                .collect();
            out.push((k, elems));
        }
        Ok(out)
    }

    /// Parses a literal such as `2*e1@[1] - 1/2*z^1*h2@[0] + K_1@[2] + d_2@[0]`.
    /// Loop labels are Chevalley labels (`e3`, `f1`, `h2`) or `y<j>` for the
    /// `j`-th basis vector of the eigenspace of the term's degree.
    pub fn parse(&self, s: &str) -> Result<ToroidalElement> {
        let conductor = self.m().iter().fold(1u32, |a, &b| num_integer::lcm(a, b));
        let mut acc = ToroidalElement::zero();
        for (sign, term) in split_terms(s)? {
            let (body, deg) = term
                .rsplit_once('@')
                .ok_or_else(|| Error::Parse(format!("term `{term}` has no degree")))?;
            let deg = deg.trim();
            let inner = deg
                .strip_prefix('[')
                .and_then(|d| d.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("degree `{deg}` must be written [k1,...,kn]")))?;
            let k: Degree = if inner.trim().is_empty() {
                vec![]
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad degree entry `{x}`"))))
                    .collect::<Result<_>>()?
            };
            if k.len() != self.n() {
                return Err(Error::Parse(format!("degree {k:?} must have {} entries", self.n())));
            }
            let body = body.trim();
            let (coef, label) = match body.rsplit_once('*') {
                Some((c, l)) => {
                    let c = c.trim();
                    let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                    (CycScalar::parse_with(c, conductor)?, l.trim())
                }
                None => (CycScalar::one(), body),
            };
            let coef = if sign { -coef } else { coef };
            let term = if let Some(i) = label.strip_prefix("K_") {
                ToroidalElement::central_term(coef, k, self.index_1based(i)?)
            } else if let Some(i) = label.strip_prefix("d_") {
                ToroidalElement::deriv_term(coef, k, self.index_1based(i)?)
            } else if let Some(j) = label.strip_prefix('y') {
                let kbar = self.dec.group.quotient(&k);
                let basis = self.dec.class_basis(&kbar);
                let j = j.parse::<usize>().ok().filter(|&j| j >= 1 && j <= basis.len());
                let j = j.ok_or_else(|| Error::Parse(format!("`{label}` is not an eigenbasis label at degree {k:?}")))?;
                ToroidalElement::loop_term(scale_vec(&coef, &basis[j - 1]), k)
            } else {
                let a = self
                    .dec
                    .g
                    .index_of_label(label)
                    .ok_or_else(|| Error::Parse(format!("unknown basis label `{label}`")))?;
                ToroidalElement::loop_term(scale_vec(&coef, &self.dec.g.basis_vec(a)), k)
            };
            acc = acc.add(&term);
        }
        self.normalize(&acc)
    }

    fn index_1based(&self, s: &str) -> Result<usize> {
        match s.parse::<usize>() {
            Ok(i) if i >= 1 && i <= self.n() => Ok(i - 1),
            _ => Err(Error::Parse(format!("index `{s}` out of range 1..={}", self.n()))),
        }
    }

    pub fn render(&self, x: &ToroidalElement) -> String {
        Rendered { alg: self, x }.to_string()
    }
}

/// Splits on top-level `+`/`-`, returning `(negated, term)`.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        let boundary = (ch == '+' || ch == '-') && depth == 0 && !matches!(prev, Some('^') | Some('*') | Some('/'));
        if boundary {
            if cur.trim().is_empty() {
                if ch == '-' {
                    neg = !neg;
                }
            } else {
                out.push((neg, cur.trim().to_string()));
                cur.clear();
                neg = ch == '-';
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced brackets".into()));
    }
    Ok(out)
}

struct Rendered<'a> {
    alg: &'a ToroidalAlgebra,
    x: &'a ToroidalElement,
}

fn fmt_deg(k: &[i64]) -> String {
    let parts: Vec<String> = k.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.alg.dec.g;
        let conductor = self.alg.m().iter().fold(1u32, |a, &b| num_integer::lcm(a, b));
        let coef = |c: &CycScalar| {
            let s = c.render(conductor);
            if s.contains(' ') { format!("({s})") } else { s }
        };
        let mut terms = Vec::new();
        for (k, v) in &self.x.loops {
            for (a, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    terms.push(format!("{}*{}@{}", coef(c), g.label(a), fmt_deg(k)));
                }
            }
        }
        for ((r, i), c) in &self.x.central {
            terms.push(format!("{}*K_{}@{}", coef(c), i + 1, fmt_deg(r)));
        }
        for ((r, i), c) in &self.x.derivs {
            terms.push(format!("{}*d_{}@{}", coef(c), i + 1, fmt_deg(r)));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
