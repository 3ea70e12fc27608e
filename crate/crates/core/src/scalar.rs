//! Exact arithmetic in cyclotomic fields Q(z_N).
//!
//! Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) reduced
//! modulo the N-th cyclotomic polynomial. An element whose irrational part
//! vanishes is normalized to conductor 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

struct Table {
    n: usize,
    phi: usize,
    /// `reduce[j]` holds z^j in the power basis, for j < n.
    reduce: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    q
}

fn cyclotomic_poly(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

impl Table {
    fn new(n: usize) -> Table {
        let cp = cyclotomic_poly(n);
        let phi = cp.len() - 1;
        let mut reduce = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            reduce.push(cur.clone());
            // multiply by z and reduce using the monic cyclotomic polynomial
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * cp[i];
                }
            }
        }
        Table { n, phi, reduce }
    }
}

fn table(n: u32) -> Arc<Table> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Table>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap().get(&n) {
        return t.clone();
    }
    let t = Arc::new(Table::new(n as usize));
    cache.write().unwrap().entry(n).or_insert(t).clone()
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut n = n as usize;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An element of Q(z_N).
#[derive(Clone)]
pub struct CycScalar {
    n: u32,
    c: Vec<Rational>,
}

impl CycScalar {
    pub fn zero() -> Self {
        CycScalar { n: 1, c: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        CycScalar { n: 1, c: vec![Rational::from_integer(BigInt::from(v))] }
    }

    pub fn from_rational(r: Rational) -> Self {
        CycScalar { n: 1, c: vec![r] }
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// z_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let t = table(n);
        let j = k.rem_euclid(n as i64) as usize;
        let c = t.reduce[j].iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
        CycScalar { n, c }.normalized()
    }

    /// Builds an element from its power-basis coordinates at conductor `n`.
    pub fn from_power_basis(n: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != totient(n) {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for conductor {}",
                totient(n),
                n
            )));
        }
        Ok(CycScalar { n, c: coeffs }.normalized())
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Power-basis coordinates at the stored conductor.
    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    fn normalized(mut self) -> Self {
        if self.n != 1 && self.c[1..].iter().all(|x| x.is_zero()) {
            self.c.truncate(1);
            self.n = 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.n == 1 {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.n == 1 && self.c[0].is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.c[0].to_integer().to_i64()
        } else {
            None
        }
    }

    /// Same element written at conductor `m`; the result is left unnormalized.
    pub fn promote(&self, m: u32) -> Result<Self> {
        if m == 0 || m % self.n != 0 {
            return Err(Error::ConductorMismatch { from: self.n, to: m });
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let t = table(m);
        let step = (m / self.n) as usize;
        let mut out = vec![Rational::zero(); t.phi];
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for (i, &r) in t.reduce[j * step].iter().enumerate() {
                if r != 0 {
                    out[i] += cj * Rational::from_integer(BigInt::from(r));
                }
            }
        }
        Ok(CycScalar { n: m, c: out })
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.n.lcm(&b.n);
        (a.promote(m).unwrap(), b.promote(m).unwrap())
    }

    fn add_impl(&self, other: &Self, sign: bool) -> Self {
        if self.n == other.n {
            let c = self
                .c
                .iter()
                .zip(&other.c)
                .map(|(x, y)| if sign { x - y } else { x + y })
                .collect();
            return CycScalar { n: self.n, c }.normalized();
        }
        let (a, b) = Self::common(self, other);
        a.add_impl(&b, sign)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.n == 1 {
            let s = &self.c[0];
            return CycScalar { n: other.n, c: other.c.iter().map(|x| x * s).collect() }.normalized();
        }
        if other.n == 1 {
            return other.mul_impl(self);
        }
        if self.n != other.n {
            let (a, b) = Self::common(self, other);
            return a.mul_impl(&b);
        }
        let t = table(self.n);
        let mut raw = vec![Rational::zero(); t.n];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                raw[(i + j) % t.n] += x * y;
            }
        }
        let mut out = vec![Rational::zero(); t.phi];
        for (j, r) in raw.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            for (i, &v) in t.reduce[j].iter().enumerate() {
                if v != 0 {
                    out[i] += r * Rational::from_integer(BigInt::from(v));
                }
            }
        }
        CycScalar { n: self.n, c: out }.normalized()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(CycScalar::from_rational(self.c[0].recip()));
        }
        // Solve (multiplication by self) x = 1 in the power basis.
        let phi = self.c.len();
        let mut cols = Vec::with_capacity(phi);
        for j in 0..phi {
            let zj = CycScalar { n: self.n, c: unit_vec(phi, j) };
            let prod = self.mul_impl(&zj).promote(self.n).unwrap();
            cols.push(prod.c);
        }
        // augmented matrix rows i: sum_j cols[j][i] x_j = delta_{i0}
        let mut m: Vec<Vec<Rational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<Rational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for col in 0..phi {
            let p = (col..phi).find(|&r| !m[r][col].is_zero()).expect("field element is invertible");
            m.swap(col, p);
            let inv = m[col][col].recip();
            for v in m[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..phi {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=phi {
                        let t = &m[col][k] * &f;
                        m[r][k] -= t;
                    }
                }
            }
        }
        let x = m.into_iter().map(|row| row[phi].clone()).collect();
        Ok(CycScalar { n: self.n, c: x }.normalized())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Complex conjugation z -> z^(-1).
    pub fn conjugate(&self) -> Self {
        if self.n == 1 {
            return self.clone();
        }
        let t = table(self.n);
        let mut out = vec![Rational::zero(); t.phi];
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let k = (t.n - j) % t.n;
            for (i, &v) in t.reduce[k].iter().enumerate() {
                if v != 0 {
                    out[i] += cj * Rational::from_integer(BigInt::from(v));
                }
            }
        }
        CycScalar { n: self.n, c: out }.normalized()
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycScalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    /// If `self` is a root of unity, returns its order.
    pub fn root_order(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let bound = 2 * self.n.max(1);
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_one() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    /// Sign of a rational element; `None` for irrational values.
    pub fn rational_sign(&self) -> Option<std::cmp::Ordering> {
        self.to_rational().map(|r| r.cmp(&Rational::zero()))
    }

    /// Renders the element using `z` for z_m, where `m` must be a multiple of
    /// the stored conductor.
    pub fn render(&self, m: u32) -> String {
        let p = if m % self.n == 0 { self.promote(m).unwrap() } else { self.clone() };
        let mut terms = Vec::new();
        for (k, ck) in p.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            if k == 0 {
                terms.push(fmt_rational(ck));
            } else {
                let z = if m == p.n { format!("z^{k}") } else { format!("z^{k}@{}", p.n) };
                if ck.is_one() {
                    terms.push(z);
                } else {
                    terms.push(format!("{}*{}", fmt_rational(ck), z));
                }
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Parses a scalar literal; bare `z` stands for z_default.
    pub fn parse_with(s: &str, default_conductor: u32) -> Result<Self> {
        parse_scalar(s, default_conductor)
    }
}

fn unit_vec(len: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[j] = Rational::one();
    v
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Default for CycScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        (self - other).is_zero()
    }
}

impl Eq for CycScalar {}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            if k == 0 {
                terms.push(fmt_rational(ck));
            } else if ck.is_one() {
                terms.push(format!("z^{k}@{}", self.n));
            } else {
                terms.push(format!("{}*z^{k}@{}", fmt_rational(ck), self.n));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CycScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s, 0)
    }
}

impl From<i64> for CycScalar {
    fn from(v: i64) -> Self {
        CycScalar::from_int(v)
    }
}

impl From<Rational> for CycScalar {
    fn from(v: Rational) -> Self {
        CycScalar::from_rational(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &'b CycScalar) -> CycScalar {
                let f: fn(&CycScalar, &CycScalar) -> CycScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &'b CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycScalar> for &'a CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.add_impl(b, false));
binop!(Sub, sub, |a, b| a.add_impl(b, true));
binop!(Mul, mul, |a, b| a.mul_impl(b));
binop!(Div, div, |a, b| a.checked_div(b).expect("division by zero"));

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(mut self) -> CycScalar {
        for x in self.c.iter_mut() {
            *x = -x.clone();
        }
        self
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -(self.clone())
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        if self.n == rhs.n {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                *x += y;
            }
            if self.n != 1 {
                *self = std::mem::take(self).normalized();
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl AddAssign<CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: CycScalar) {
        *self += &rhs;
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        if self.n == rhs.n {
            for (x, y) in self.c.iter_mut().zip(&rhs.c) {
                *x -= y;
            }
            if self.n != 1 {
                *self = std::mem::take(self).normalized();
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CycScalar> for CycScalar {
    fn mul_assign(&mut self, rhs: &CycScalar) {
        *self = &*self * rhs;
    }
}

fn parse_scalar(s: &str, default_conductor: u32) -> Result<CycScalar> {
    let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse(format!("empty scalar literal in {s:?}")));
    }
    let bytes = src.as_bytes();
    let mut acc = CycScalar::zero();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && !(bytes[i] == b'-' && i > start && bytes[i - 1] != b'^') {
            i += 1;
        }
        let term = &src[start..i];
        if term.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let v = parse_term(term, default_conductor)?;
        acc = if sign < 0 { acc - v } else { acc + v };
    }
    Ok(acc)
}

fn parse_term(term: &str, default_conductor: u32) -> Result<CycScalar> {
    let bad = || Error::Parse(format!("malformed scalar term {term:?}"));
    let (coef, zpart) = match term.find('z') {
        None => (term, None),
        Some(0) => ("1", Some(&term[0..])),
        Some(p) => {
            let c = term[..p].strip_suffix('*').ok_or_else(bad)?;
            (c, Some(&term[p..]))
        }
    };
    let r = parse_rational(coef).ok_or_else(bad)?;
    let mut v = CycScalar::from_rational(r);
    if let Some(z) = zpart {
        let rest = &z[1..];
        let (exp_part, cond) = match rest.find('@') {
            Some(p) => (&rest[..p], rest[p + 1..].parse::<u32>().map_err(|_| bad())?),
            None => (rest, default_conductor),
        };
        if cond == 0 {
            return Err(Error::Parse(format!("no conductor for {term:?}; write z^k@N")));
        }
        let k = if exp_part.is_empty() {
            1
        } else {
            exp_part.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
        };
        v = &v * &CycScalar::root_of_unity(cond, k);
    }
    Ok(v)
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p.parse().ok()?, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        assert_eq!(CycScalar::root_of_unity(4, 2), CycScalar::from_int(-1));
        assert_eq!(CycScalar::root_of_unity(1, 0), CycScalar::one());
        let s = CycScalar::root_of_unity(3, 1) + CycScalar::root_of_unity(3, 2);
        assert_eq!(s, CycScalar::from_int(-1));
        assert!((CycScalar::root_of_unity(8, 4) + CycScalar::one()).is_zero());
    }

    #[test]
    fn inverse_and_halves() {
        let z5 = CycScalar::root_of_unity(5, 1);
        assert_eq!(z5.inverse().unwrap(), CycScalar::root_of_unity(5, 4));
        let h = CycScalar::frac(1, 2);
        let z6 = CycScalar::root_of_unity(6, 1);
        assert_eq!(&(&h * &z6) + &(&h * &z6), z6);
        assert!(CycScalar::zero().inverse().is_err());
    }

    #[test]
    fn promotion() {
        let m1 = CycScalar::from_int(-1);
        assert_eq!(m1.promote(4).unwrap(), CycScalar::root_of_unity(4, 2));
        assert_eq!(CycScalar::one().promote(6).unwrap(), CycScalar::one());
        assert_eq!(CycScalar::root_of_unity(3, 1).promote(6).unwrap(), CycScalar::root_of_unity(6, 2));
        assert!(CycScalar::root_of_unity(3, 1).promote(4).is_err());
    }

    #[test]
    fn parse_and_render() {
        let v = CycScalar::parse_with("1/2*z^1 - 3", 6).unwrap();
        assert_eq!(v, &(&CycScalar::frac(1, 2) * &CycScalar::root_of_unity(6, 1)) - &CycScalar::from_int(3));
        assert_eq!(v.render(6), "-3 + 1/2*z^1");
        let w: CycScalar = "z^2@4".parse().unwrap();
        assert_eq!(w, CycScalar::from_int(-1));
        let back: CycScalar = v.to_string().parse().unwrap();
        assert_eq!(back, v);
        assert!("z^2".parse::<CycScalar>().is_err());
    }

    #[test]
    fn conjugation() {
        let z = CycScalar::root_of_unity(7, 2);
        assert_eq!(z.conjugate(), CycScalar::root_of_unity(7, 5));
        assert_eq!(&z * &z.conjugate(), CycScalar::one());
    }
}
