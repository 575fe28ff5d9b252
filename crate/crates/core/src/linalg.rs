//! Exact linear algebra over ℚ: incremental echelon bases, rank, kernels,
//! inverses and determinants. Pivots are always the first nonzero entry in
//! column order so every result is reproducible.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

pub mod generic;


/// Row-echelon basis built one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    /// (pivot column, row normalized to 1 at the pivot)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduce `v` against the basis; the remainder is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Insert `v`; returns true when the span grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Rational]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }
}

/// Rank of a list of row vectors and the indices of the rows kept by the
/// greedy first-come basis.
pub fn rank_with_basis(rows: &[Vec<Rational>], width: usize) -> (usize, Vec<usize>) {
    let mut ech = Echelon::new(width);
    let mut kept = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if ech.insert(r) {
            kept.push(i);
        }
    }
    (ech.rank(), kept)
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x = 0}`, one vector per free column in increasing order.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

pub fn identity(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Rational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn transpose(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn inverse(a: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let pivot_row = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Positive-definiteness of a symmetric rational matrix via leading
/// principal minors.
pub fn is_positive_definite(a: &[Vec<Rational>]) -> bool {
    (1..=a.len()).all(|k| {
        let minor: Vec<Vec<Rational>> = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor) > Rational::zero()
    })
}

/// Floating-point Cholesky test, used for parametric data sampled at a point.
pub fn is_positive_definite_f64(a: &[Vec<f64>], tol: f64) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = a[i][i] - s;
                if d <= tol {
                    return false;
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![int(-1), int(-1), int(1)]);
    }

    #[test]
    fn greedy_basis_indices() {
        let a = m(&[&[0, 0], &[1, 0], &[2, 0], &[0, 3]]);
        assert_eq!(rank_with_basis(&a, 2), (2, vec![1, 3]));
        assert_eq!(rank_with_basis(&[], 2), (0, vec![]));
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&a), int(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(matmul(&a, &inv), identity(2));
        assert!(matches!(inverse(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular)));
    }

    #[test]
    fn generic_routines_agree() {
        use super::generic::*;
        let a = m(&[&[4, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
        let inv = g_inverse(&a).unwrap();
        assert_eq!(g_matmul(&a, &inv), identity(3));
        assert_eq!(inv, inverse(&a).unwrap());
        let af: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(crate::scalars::rational_to_f64).collect()).collect();
        let invf = g_inverse(&af).unwrap();
        assert!(g_is_zero(&g_sub(&g_matmul(&af, &invf), &g_identity(3))));
        assert!(g_is_positive_definite(&a) && g_is_positive_definite(&af));
        assert!(!g_is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
        assert!(g_is_symmetric(&a));
    }

    #[test]
    fn definiteness() {
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
        assert!(is_positive_definite_f64(&[vec![2.0, 1.0], vec![1.0, 2.0]], 1e-12));
    }
}
