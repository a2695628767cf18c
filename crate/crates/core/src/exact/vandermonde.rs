use super::matrix::solve;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Solves `V x = rhs` where row `i` of `V` holds the `i`-th powers of the
/// nodes, so `Σ_j x_j · nodes[j]^i = rhs[i]`.
pub fn vandermonde_solve(nodes: &[Scalar], rhs: &[Scalar]) -> Result<Vec<Scalar>> {
    if nodes.len() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: nodes.len(),
            found: rhs.len(),
        });
    }
    for (i, a) in nodes.iter().enumerate() {
        if let Some(j) = nodes[i + 1..].iter().position(|b| b == a) {
            return Err(Error::DuplicateNode {
                first: i,
                second: i + 1 + j,
                value: a.clone(),
            });
        }
    }
    let v = vandermonde_matrix(nodes);
    Ok(solve(v, rhs.to_vec()).expect("Vandermonde matrix on distinct nodes is invertible"))
}

/// `V[i][j] = nodes[j]^i`.
pub fn vandermonde_matrix(nodes: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = nodes.len();
    let mut rows = vec![vec![Scalar::one(); n]; n];
    for i in 1..n {
        for j in 0..n {
            rows[i][j] = &rows[i - 1][j] * &nodes[j];
        }
    }
    rows
}
