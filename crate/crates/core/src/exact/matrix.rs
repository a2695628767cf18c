//! Exact dense matrices and positive-semidefiniteness certificates.
//!
//! A real symmetric matrix is positive semidefinite iff every coefficient
//! `e_i` of its characteristic polynomial `det(λI - M) = Σ (-1)^i e_i λ^{n-i}`
//! is nonnegative; `e_i` is the sum of the principal `i × i` minors. The
//! coefficients are obtained exactly from a Hessenberg similarity transform,
//! which costs `O(n^3)` field operations.

use serde::Serialize;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Symmetric matrix of exact scalars, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymMatrix {
    order: usize,
    entries: Vec<Scalar>,
}

impl SymMatrix {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::InvalidInput("matrix order must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate().skip(i + 1) {
                if *x != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix from `f(i, j)` for `i <= j`, mirroring the rest.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        assert!(order > 0, "matrix order must be positive");
        let mut entries = vec![Scalar::zero(); order * order];
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                if i != j {
                    entries[j * order + i] = v.clone();
                }
                entries[i * order + j] = v;
            }
        }
        SymMatrix { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.order).map(<[Scalar]>::to_vec).collect()
    }

    /// `Dᵀ M D` for diagonal `D = diag(d)`.
    pub fn diagonal_congruence(&self, d: &[Scalar]) -> Self {
        assert_eq!(d.len(), self.order);
        Self::from_fn(self.order, |i, j| &(&d[i] * self.get(i, j)) * &d[j])
    }
}

/// Outcome of [`psd_test`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    /// `e_0 .. e_n`: sums of principal minors of each order (`e_0 = 1`).
    pub certificate: Vec<Scalar>,
    /// Index of the first negative `e_i`.
    pub first_failure: Option<usize>,
}

/// Decides positive semidefiniteness exactly.
pub fn psd_test(m: &SymMatrix) -> PsdVerdict {
    let certificate = principal_minor_sums(m);
    let first_failure = certificate.iter().position(Scalar::is_negative);
    PsdVerdict {
        is_psd: first_failure.is_none(),
        certificate,
        first_failure,
    }
}

/// `e_0 .. e_n` via Hessenberg reduction and the Hessenberg
/// characteristic-polynomial recurrence.
pub fn principal_minor_sums(m: &SymMatrix) -> Vec<Scalar> {
    let n = m.order();
    let charpoly = charpoly_coeffs(m.rows());
    // charpoly[k] is the coefficient of λ^k; e_i = (-1)^i · charpoly[n - i].
    (0..=n)
        .map(|i| {
            let c = charpoly[n - i].clone();
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// Coefficients (ascending) of `det(λI - A)` for a square matrix.
pub fn charpoly_coeffs(mut h: Vec<Vec<Scalar>>) -> Vec<Scalar> {
    let n = h.len();
    // Reduce to upper Hessenberg form by similarity transforms.
    for m in 1..n.saturating_sub(1) {
        let Some(pivot) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if pivot != m {
            h.swap(pivot, m);
            for row in h.iter_mut() {
                row.swap(pivot, m);
            }
        }
        let inv = h[m][m - 1].recip().expect("pivot is nonzero");
        for j in (m + 1)..n {
            if h[j][m - 1].is_zero() {
                continue;
            }
            let u = &h[j][m - 1] * &inv;
            let (head, tail) = h.split_at_mut(j);
            let row_m = &head[m];
            let row_j = &mut tail[0];
            for (dst, src) in row_j.iter_mut().zip(row_m.iter()) {
                if !src.is_zero() {
                    *dst -= &u * src;
                }
            }
            for row in h.iter_mut() {
                if !row[j].is_zero() {
                    let add = &u * &row[j];
                    row[m] += add;
                }
            }
        }
    }

    // p_0 = 1; p_k = (λ - h_kk) p_{k-1} - Σ_i (Π subdiag) h_{k-i,k} p_{k-i-1}
    // (1-indexed in the comments, 0-indexed in code).
    let mut polys: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut next = vec![Scalar::zero(); k + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * &h[k - 1][k - 1];
        }
        let mut t = Scalar::one();
        for i in 1..k {
            t *= &h[k - i][k - i - 1];
            if t.is_zero() {
                break;
            }
            let coef = &t * &h[k - i - 1][k - 1];
            if coef.is_zero() {
                continue;
            }
            for (d, c) in polys[k - i - 1].iter().enumerate() {
                next[d] -= &coef * c;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Determinant by fraction-free-style Gaussian elimination over the rationals.
pub fn determinant(mut a: Vec<Vec<Scalar>>) -> Scalar {
    let n = a.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            let (head, tail) = a.split_at_mut(r);
            for (dst, src) in tail[0][col..].iter_mut().zip(head[col][col..].iter()) {
                *dst -= &factor * src;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<Scalar>>, mut b: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        let inv = a[col][col].recip()?;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let pivot_row = a[col].clone();
            for (dst, src) in a[r][col..].iter_mut().zip(pivot_row[col..].iter()) {
                *dst -= &factor * src;
            }
            let bc = b[col].clone();
            b[r] -= &factor * &bc;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identity_certificate() {
        let v = psd_test(&SymMatrix::identity(2));
        assert!(v.is_psd);
        assert_eq!(v.certificate, vec![s(1), s(2), s(1)]);
        assert_eq!(v.first_failure, None);
    }

    #[test]
    fn negative_determinant_fails() {
        let m = SymMatrix::new(vec![vec![s(1), s(2)], vec![s(2), s(1)]]).unwrap();
        let v = psd_test(&m);
        assert!(!v.is_psd);
        assert_eq!(v.certificate[2], s(-3));
        assert_eq!(v.first_failure, Some(2));
    }

    #[test]
    fn hilbert_3x3() {
        let m = SymMatrix::from_fn(3, |i, j| q(1, (i + j + 1) as i64));
        let v = psd_test(&m);
        assert!(v.is_psd);
        // det by hand: 1/2160; trace 1 + 1/3 + 1/5 = 23/15.
        assert_eq!(v.certificate[3], q(1, 2160));
        assert_eq!(v.certificate[1], q(23, 15));
        assert_eq!(determinant(m.rows()), q(1, 2160));
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = SymMatrix::new(vec![vec![s(1), s(2)], vec![s(3), s(1)]]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { row: 0, col: 1 }));
    }

    #[test]
    fn zero_matrix_and_rank_one() {
        let z = SymMatrix::from_fn(3, |_, _| Scalar::zero());
        assert!(psd_test(&z).is_psd);
        let ones = SymMatrix::from_fn(4, |_, _| Scalar::one());
        let v = psd_test(&ones);
        assert!(v.is_psd);
        assert_eq!(v.certificate, vec![s(1), s(4), s(0), s(0), s(0)]);
    }

    #[test]
    fn needs_pivoting_in_reduction() {
        // Zero sub-diagonal entry forces a row/column swap.
        let m = SymMatrix::new(vec![
            vec![s(2), s(0), s(1)],
            vec![s(0), s(3), s(0)],
            vec![s(1), s(0), s(2)],
        ])
        .unwrap();
        let v = psd_test(&m);
        assert_eq!(v.certificate, vec![s(1), s(7), s(15), s(9)]);
        assert!(v.is_psd);
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![s(2), s(1)], vec![s(1), s(3)]];
        let x = solve(a, vec![s(3), s(5)]).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        assert!(solve(vec![vec![s(1), s(2)], vec![s(2), s(4)]], vec![s(1), s(1)]).is_none());
    }
}
