//! Syndrome decoding of a Vandermonde sketch.
//!
//! Berlekamp–Massey yields the shortest linear recurrence of the power sums,
//! whose reversed connection polynomial is `Π (x − (j+1))` over the support.
//! Its roots are found by scanning `1..=n` with forward differences (one
//! field addition per coefficient per point), and each coefficient follows
//! from the power sums weighted by the quotient `R(x) / (x − α)`.

use thiserror::Error;

use super::sketch::{SparseVec, VandermondeSketch};
use super::FieldParams;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeFailure {
    #[error("shortest recurrence has length {degree} > k = {k}")]
    LocatorTooLong { degree: usize, k: usize },
    #[error("locator of degree {degree} has only {found} roots in 1..=n")]
    RootsMissing { found: usize, degree: usize },
    #[error("candidate does not re-encode to the sketch")]
    ReencodeMismatch,
}

pub fn decode_sparse(s: &VandermondeSketch) -> Result<SparseVec, DecodeFailure> {
    decode_rows(s.field(), s.k(), s.rows())
}

/// Connection polynomial `1 + c_1 z + … + c_L z^L` of the shortest linear
/// recurrence generating `seq`.
pub fn berlekamp_massey(f: &FieldParams, seq: &[u64]) -> Vec<u64> {
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bb = 1u64;
    for i in 0..seq.len() {
        let mut d = seq[i];
        for j in 1..=l.min(c.len() - 1) {
            d = f.add(d, f.mul(c[j], seq[i - j]));
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = f.mul(d, f.inv(bb));
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (j, &bj) in b.iter().enumerate() {
            c[j + m] = f.sub(c[j + m], f.mul(coef, bj));
        }
        if 2 * l <= i {
            l = i + 1 - l;
            b = prev;
            bb = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, 0);
    c
}

fn horner(f: &FieldParams, coeffs_high_first: &[u64], x: u64) -> u64 {
    coeffs_high_first.iter().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
}

/// Roots of a monic polynomial (coefficients highest degree first) among
/// `1..=n`, stopping once `degree` roots are found.
fn roots_in_range(f: &FieldParams, poly: &[u64], n: usize) -> Vec<u64> {
    let deg = poly.len() - 1;
    let mut roots = Vec::with_capacity(deg);
    if deg == 0 {
        return roots;
    }
    // Forward-difference table at x = 1: d[i] = Δ^i R(1).
    let mut d: Vec<u64> = (1..=deg as u64 + 1).map(|x| horner(f, poly, x)).collect();
    for level in 1..=deg {
        for i in (level..=deg).rev() {
            d[i] = f.sub(d[i], d[i - 1]);
        }
    }
    // d now holds [R(1), ΔR(1), Δ²R(1), …] in order.
    for x in 1..=n as u64 {
        if d[0] == 0 {
            roots.push(x);
            if roots.len() == deg {
                break;
            }
        }
        for i in 0..deg {
            d[i] = f.add(d[i], d[i + 1]);
        }
    }
    roots
}

pub fn decode_rows(f: &FieldParams, k: usize, rows: &[u64]) -> Result<SparseVec, DecodeFailure> {
    assert_eq!(rows.len(), 2 * k);
    let conn = berlekamp_massey(f, rows);
    let degree = conn.len() - 1;
    if degree > k {
        return Err(DecodeFailure::LocatorTooLong { degree, k });
    }
    // Reversing the connection polynomial gives Π (x − α) with x^L leading.
    let locator = conn;
    let roots = roots_in_range(f, &locator, f.n());
    if roots.len() != degree {
        return Err(DecodeFailure::RootsMissing { found: roots.len(), degree });
    }
    let mut out = Vec::with_capacity(degree);
    for &alpha in &roots {
        // Synthetic division: q = R / (x − α), coefficients highest first.
        let mut q = Vec::with_capacity(degree);
        let mut acc = 0u64;
        for &a in &locator[..degree] {
            acc = f.add(f.mul(acc, alpha), a);
            q.push(acc);
        }
        // Σ_r q_r S_r where q_r is the coefficient of x^r.
        let num = q.iter().rev().zip(rows).fold(0, |s, (&qr, &sr)| f.add(s, f.mul(qr, sr)));
        let den = horner(f, &q, alpha);
        if den == 0 {
            return Err(DecodeFailure::ReencodeMismatch);
        }
        let coeff = f.mul(num, f.inv(den));
        if coeff == 0 {
            return Err(DecodeFailure::ReencodeMismatch);
        }
        out.push((alpha as usize - 1, coeff));
    }
    // Re-encode over all 2k rows.
    let mut check = vec![0u64; rows.len()];
    for &(j, c) in &out {
        super::sketch::vandermonde_add(f, &mut check, j, c);
    }
    if check != rows {
        return Err(DecodeFailure::ReencodeMismatch);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::choose_prime;
    use proptest::prelude::*;

    #[test]
    fn recurrence_of_geometric_sequence() {
        let f = FieldParams::new(101, 50).unwrap();
        let seq: Vec<u64> = (0..6).map(|r| f.pow(3, r)).collect();
        assert_eq!(berlekamp_massey(&f, &seq), vec![1, f.neg(3)]);
        assert_eq!(berlekamp_massey(&f, &[0, 0, 0, 0]), vec![1]);
    }

    #[test]
    fn forward_differences_find_every_root() {
        let f = FieldParams::new(1_000_003, 300).unwrap();
        // (x − 2)(x − 17)(x − 300)
        let mut poly = vec![1u64];
        for r in [2u64, 17, 300] {
            let mut next = vec![0u64; poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i] = f.add(next[i], a);
                next[i + 1] = f.sub(next[i + 1], f.mul(a, r));
            }
            poly = next;
        }
        assert_eq!(roots_in_range(&f, &poly, 300), vec![2, 17, 300]);
        assert_eq!(roots_in_range(&f, &poly, 299), vec![2, 17]);
    }

    #[test]
    fn documented_examples() {
        let f = choose_prime(100, 3).unwrap();
        let zero = VandermondeSketch::new(f, 3);
        assert_eq!(decode_sparse(&zero).unwrap(), vec![]);

        let x = vec![(3, 1), (7, f.from_i64(-1))];
        let s = VandermondeSketch::encode(f, 2, &x);
        let got = decode_sparse(&s).unwrap();
        assert_eq!(got, x);
        assert_eq!(VandermondeSketch::encode(f, 2, &got), s);

        let f50 = choose_prime(50, 3).unwrap();
        let dense: Vec<(usize, u64)> = (0..50).map(|j| (j, 1)).collect();
        let s = VandermondeSketch::encode(f50, 4, &dense);
        match decode_sparse(&s) {
            Err(_) => {}
            Ok(cand) => {
                let mut fp = crate::field::FingerprintSketch::new(f50, 3, 5);
                for &(j, c) in &dense {
                    fp.add(j, c);
                }
                assert!(!fp.verify(&cand), "a dense vector must not pass as sparse");
            }
        }
    }

    proptest! {
        #[test]
        fn signed_sparse_round_trip(
            k in 1usize..=16,
            support in proptest::collection::btree_map(0usize..2000, any::<bool>(), 0..=16),
        ) {
            let f = choose_prime(2000, 3).unwrap();
            let x: Vec<(usize, u64)> = support.into_iter().take(k)
                .map(|(j, pos)| (j, if pos { 1 } else { f.p() - 1 })).collect();
            let s = VandermondeSketch::encode(f, k, &x);
            prop_assert_eq!(decode_sparse(&s).unwrap(), x);
        }
    }
}
