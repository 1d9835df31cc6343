//! Exhaustive sparse recovery for tiny dimensions.

use crate::field::{FieldParams, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForce {
    Unique(SparseVec),
    Ambiguous(Vec<SparseVec>),
    NoSolution,
}

/// Solves `Σ_j c_j (j+1)^r = rows[r]` for `r < support.len()` by Gaussian
/// elimination mod p.
fn solve(f: &FieldParams, support: &[usize], rows: &[u64]) -> Option<Vec<u64>> {
    let s = support.len();
    let mut m: Vec<Vec<u64>> = (0..s)
        .map(|r| {
            let mut row: Vec<u64> = support.iter().map(|&j| f.pow((j + 1) as u64, r as u64)).collect();
            row.push(rows[r]);
            row
        })
        .collect();
    for col in 0..s {
        let piv = (col..s).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = f.inv(m[col][col]);
        for x in &mut m[col] {
            *x = f.mul(*x, inv);
        }
        for r in 0..s {
            if r != col && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..=s {
                    let sub = f.mul(factor, m[col][c]);
                    m[r][c] = f.sub(m[r][c], sub);
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[s]).collect())
}

fn consistent(f: &FieldParams, x: &[(usize, u64)], rows: &[u64]) -> bool {
    rows.iter().enumerate().all(|(r, &want)| {
        let got = x.iter().fold(0, |acc, &(j, c)| f.add(acc, f.mul(c, f.pow((j + 1) as u64, r as u64))));
        got == want
    })
}

/// Tries every support of size at most `k` in `0..n` and keeps the vectors
/// with non-zero coefficients that reproduce all `2k` rows.
pub fn brute_force_recover(rows: &[u64], k: usize, f: &FieldParams) -> BruteForce {
    assert_eq!(rows.len(), 2 * k);
    let n = f.n();
    let mut found: Vec<SparseVec> = Vec::new();
    let mut support: Vec<usize> = Vec::with_capacity(k);
    fn walk(
        f: &FieldParams,
        rows: &[u64],
        k: usize,
        n: usize,
        start: usize,
        support: &mut Vec<usize>,
        found: &mut Vec<SparseVec>,
    ) {
        if let Some(coeffs) = solve(f, support, rows) {
            if coeffs.iter().all(|&c| c != 0) {
                let x: SparseVec = support.iter().copied().zip(coeffs).collect();
                if consistent(f, &x, rows) {
                    found.push(x);
                }
            }
        }
        if support.len() == k {
            return;
        }
        for j in start..n {
            support.push(j);
            walk(f, rows, k, n, j + 1, support, found);
            support.pop();
        }
    }
    walk(f, rows, k, n, 0, &mut support, &mut found);
    match found.len() {
        0 => BruteForce::NoSolution,
        1 => BruteForce::Unique(found.pop().unwrap()),
        _ => BruteForce::Ambiguous(found),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::VandermondeSketch;

    fn field() -> FieldParams {
        FieldParams::new(27_011, 30).unwrap()
    }

    #[test]
    fn zero_rows_give_the_empty_vector() {
        assert_eq!(brute_force_recover(&[0; 4], 2, &field()), BruteForce::Unique(vec![]));
    }

    #[test]
    fn single_entry_is_found() {
        let f = field();
        let s = VandermondeSketch::encode(f, 1, &[(5, 1)]);
        assert_eq!(brute_force_recover(s.rows(), 1, &f), BruteForce::Unique(vec![(5, 1)]));
    }

    #[test]
    fn too_dense_vector_has_no_k_sparse_explanation() {
        let f = field();
        let x: Vec<(usize, u64)> = vec![(1, 1), (4, f.neg(1)), (9, 1), (20, 1)];
        let s = VandermondeSketch::encode(f, 1, &x);
        // Two rows cannot pin a 4-sparse vector, but a 1-sparse fit may or may
        // not exist; what matters is that ambiguity never occurs.
        assert!(!matches!(brute_force_recover(s.rows(), 1, &f), BruteForce::Ambiguous(_)));
    }
}
