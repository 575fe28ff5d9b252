use num::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

/// Entries that the generic routines below can work with: exact rationals,
/// or floats compared against a fixed tolerance.
pub trait Field: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    /// Larger is a better pivot; zero means unusable.
    fn pivot_score(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
}

/// Tolerance used by the float instance of [`Field`].
pub const FLOAT_TOL: f64 = 1e-9;

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        *self > Zero::zero()
    }
    fn pivot_score(&self) -> f64 {
        if Zero::is_zero(self) { 0.0 } else { 1.0 }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn to_f64(&self) -> f64 {
        crate::scalars::rational_to_f64(self)
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() < FLOAT_TOL
    }
    fn is_positive(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn pivot_score(&self) -> f64 {
        if self.abs() < FLOAT_TOL { 0.0 } else { self.abs() }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

pub fn g_matmul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).fold(F::zero(), |acc, (x, brow)| acc.add(&x.mul(&brow[j]))))
                .collect()
        })
        .collect()
}

pub fn g_identity<F: Field>(n: usize) -> Vec<Vec<F>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

pub fn g_is_zero<F: Field>(a: &[Vec<F>]) -> bool {
    a.iter().all(|r| r.iter().all(F::is_zero))
}

pub fn g_sub<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.sub(q)).collect()).collect()
}

pub fn g_add<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add(q)).collect()).collect()
}

pub fn g_transpose<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn g_is_symmetric<F: Field>(a: &[Vec<F>]) -> bool {
    g_is_zero(&g_sub(a, &g_transpose(a)))
}

/// Gauss–Jordan inverse with the best available pivot in each column.
pub fn g_inverse<F: Field>(a: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.iter().zip(g_identity::<F>(n)).map(|(r, id)| r.iter().cloned().chain(id).collect()).collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].pivot_score().partial_cmp(&m[j][c].pivot_score()).unwrap().then(j.cmp(&i)))
            .filter(|&i| m[i][c].pivot_score() > 0.0)
            .ok_or(Error::Singular)?;
        m.swap(c, p);
        let piv = m[c][c].clone();
        m[c] = m[c].iter().map(|x| x.div(&piv)).collect();
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pr = m[c].clone();
                m[i] = m[i].iter().zip(&pr).map(|(x, y)| x.sub(&f.mul(y))).collect();
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Positive-definiteness of a symmetric matrix: elimination without row
/// exchanges must meet only positive pivots.
pub fn g_is_positive_definite<F: Field>(a: &[Vec<F>]) -> bool {
    let n = a.len();
    let mut m = a.to_vec();
    for c in 0..n {
        if !m[c][c].is_positive() {
            return false;
        }
        for i in c + 1..n {
            let f = m[i][c].div(&m[c][c]);
            let pr = m[c].clone();
            m[i] = m[i].iter().zip(&pr).map(|(x, y)| x.sub(&f.mul(y))).collect();
        }
    }
    true
}
