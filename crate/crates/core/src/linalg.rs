//! Dense and sparse exact linear algebra over `CycScalar`.

use crate::scalar::CycScalar;

pub type Vector = Vec<CycScalar>;

pub fn zero_vec(n: usize) -> Vector {
    vec![CycScalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = CycScalar::one();
    v
}

pub fn is_zero_vec(v: &[CycScalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// y += a * x
pub fn axpy(y: &mut [CycScalar], a: &CycScalar, x: &[CycScalar]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += &(a * xi);
        }
    }
}

pub fn scale_vec(a: &CycScalar, x: &[CycScalar]) -> Vector {
    x.iter().map(|v| a * v).collect()
}

pub fn add_vec(x: &[CycScalar], y: &[CycScalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub_vec(x: &[CycScalar], y: &[CycScalar]) -> Vector {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn dot(x: &[CycScalar], y: &[CycScalar]) -> CycScalar {
    let mut acc = CycScalar::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc += &(a * b);
        }
    }
    acc
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<CycScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = CycScalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_cols(nrows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: add_vec(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: sub_vec(&self.data, &other.data) }
    }

    pub fn scale(&self, a: &CycScalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: scale_vec(a, &self.data) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> CycScalar {
        let mut t = CycScalar::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(parts: &[Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |p| p.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            rows += p.rows;
            data.extend(p.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().unwrap();
            for j in c..m.cols {
                let v = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = v;
            }
            let pivot_row: Vector = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    if !pivot_row[j].is_zero() {
                        let t = &f * &pivot_row[j];
                        m.data[i * m.cols + j] -= &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : self x = 0}.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vec(self.cols);
                v[f] = CycScalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Some x with self x = b, if one exists.
    pub fn solve(&self, b: &[CycScalar]) -> Option<Vector> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, CycScalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Kronecker product with `self` as the outer factor.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        let b = other.get(p, q);
                        if !b.is_zero() {
                            out.set(i * other.rows + p, j * other.cols + q, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Incrementally maintained span with coordinates relative to the inserted
/// generators.
#[derive(Clone, Debug, Default)]
pub struct Span {
    dim: usize,
    rows: Vec<(usize, Vector, Vector)>,
    count: usize,
}

impl Span {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new(), count: 0 }
    }

    pub fn rank(&self) -> usize {
        self.count
    }

    fn reduce(&self, v: &[CycScalar]) -> (Vector, Vector) {
        let mut r = v.to_vec();
        let mut combo = zero_vec(self.count);
        for (p, row, c) in &self.rows {
            let f = r[*p].clone();
            if f.is_zero() {
                continue;
            }
            axpy(&mut r, &-&f, row);
            for (k, ck) in c.iter().enumerate() {
                if !ck.is_zero() {
                    combo[k] += &(&f * ck);
                }
            }
        }
        (r, combo)
    }

    /// Inserts `v` if it is independent of the current span.
    pub fn insert(&mut self, v: &[CycScalar]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (r, combo) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else { return false };
        let inv = r[p].inverse().unwrap();
        let row = scale_vec(&inv, &r);
        // row = inv * (v - sum combo_k g_k)
        let mut c: Vector = combo.iter().map(|x| -(x * &inv)).collect();
        c.push(inv);
        for (_, _, cc) in self.rows.iter_mut() {
            cc.push(CycScalar::zero());
        }
        // keep earlier rows reduced against the new pivot
        for (_, orow, oc) in self.rows.iter_mut() {
            let f = orow[p].clone();
            if !f.is_zero() {
                axpy(orow, &-&f, &row);
                axpy(oc, &-&f, &c);
            }
        }
        self.rows.push((p, row, c));
        self.count += 1;
        true
    }

    pub fn contains(&self, v: &[CycScalar]) -> bool {
        is_zero_vec(&self.reduce(v).0)
    }

    /// Coordinates of `v` with respect to the inserted generators.
    pub fn coords(&self, v: &[CycScalar]) -> Option<Vector> {
        let (r, combo) = self.reduce(v);
        if is_zero_vec(&r) {
            Some(combo)
        } else {
            None
        }
    }
}

/// Sparse matrix stored by columns: column `j` lists the nonzero entries of
/// the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, CycScalar)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut s = Self::zeros(m.rows, m.cols);
        for j in 0..m.cols {
            for i in 0..m.rows {
                let v = m.get(i, j);
                if !v.is_zero() {
                    s.cols[j].push((i, v.clone()));
                }
            }
        }
        s
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    pub fn apply(&self, v: &[CycScalar]) -> Vector {
        let mut out = zero_vec(self.rows);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += &(a * vj);
            }
        }
        out
    }

    fn from_dense_cols(rows: usize, cols: Vec<Vector>) -> Self {
        SparseMatrix {
            rows,
            cols: cols
                .into_iter()
                .map(|c| c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut out = zero_vec(self.rows);
                for (k, b) in col {
                    for (i, a) in &self.cols[*k] {
                        out[*i] += &(a * b);
                    }
                }
                out
            })
            .collect();
        Self::from_dense_cols(self.rows, cols)
    }

    pub fn lincomb(terms: &[(CycScalar, &SparseMatrix)], rows: usize, ncols: usize) -> SparseMatrix {
        let mut cols = vec![zero_vec(rows); ncols];
        for (c, m) in terms {
            if c.is_zero() {
                continue;
            }
            for (j, col) in m.cols.iter().enumerate() {
                for (i, v) in col {
                    cols[j][*i] += &(c * v);
                }
            }
        }
        Self::from_dense_cols(rows, cols)
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        Self::lincomb(&[(CycScalar::one(), self), (CycScalar::one(), other)], self.rows, self.ncols())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        Self::lincomb(&[(CycScalar::one(), self), (CycScalar::from_int(-1), other)], self.rows, self.ncols())
    }

    pub fn scale(&self, a: &CycScalar) -> SparseMatrix {
        Self::lincomb(&[(a.clone(), self)], self.rows, self.ncols())
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|(_, v)| v.is_zero()))
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.ncols())
            .map(|j| {
                self.cols[j].iter().find(|(i, _)| *i == j).map(|(_, v)| v.clone()).unwrap_or_default()
            })
            .collect()
    }

    /// Exact equality that tolerates explicitly stored zeros.
    pub fn same_as(&self, other: &SparseMatrix) -> bool {
        self.rows == other.rows && self.ncols() == other.ncols() && self.sub(other).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> CycScalar {
        CycScalar::from_int(v)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(&[vec![q(2), q(1)], vec![q(7), q(4)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let sing = Matrix::from_rows(&[vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn span_coordinates() {
        let mut s = Span::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        assert_eq!(s.coords(&[q(2), q(5), q(3)]).unwrap(), vec![q(2), q(3)]);
        assert!(s.coords(&[q(0), q(0), q(1)]).is_none());
    }
}
