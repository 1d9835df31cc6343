use super::{FieldError, FieldParams};
use crate::codec::{Reader, Writer};
use crate::rng;

/// Sparse vector as `(coordinate, coefficient)` pairs, coordinates strictly
/// increasing, coefficients non-zero field elements.
pub type SparseVec = Vec<(usize, u64)>;

/// Adds `coeff · (j+1)^r` to `rows[r]` for every row.
#[inline]
pub fn vandermonde_add(field: &FieldParams, rows: &mut [u64], j: usize, coeff: u64) {
    debug_assert!(j < field.n());
    let x = (j + 1) as u64;
    let mut term = coeff % field.p();
    for r in rows.iter_mut() {
        *r = field.add(*r, term);
        term = field.mul(term, x);
    }
}

/// Entry `(row, col)` of the fingerprint matrix; regenerated, never stored.
#[inline]
pub fn fingerprint_entry(field: &FieldParams, seed: u64, row: usize, col: usize) -> u64 {
    rng::derive2(seed, "fingerprint", row as u64, col as u64) % field.p()
}

#[inline]
pub fn fingerprint_add(field: &FieldParams, seed: u64, rows: &mut [u64], j: usize, coeff: u64) {
    for (r, slot) in rows.iter_mut().enumerate() {
        *slot = field.add(*slot, field.mul(coeff, fingerprint_entry(field, seed, r, j)));
    }
}

/// Whether `Φ^R · candidate` equals `rows`.
pub fn fingerprint_matches(field: &FieldParams, seed: u64, rows: &[u64], candidate: &[(usize, u64)]) -> bool {
    let mut acc = vec![0u64; rows.len()];
    for &(j, c) in candidate {
        if j >= field.n() {
            return false;
        }
        fingerprint_add(field, seed, &mut acc, j, c);
    }
    acc == rows
}

/// `2k` power-sum rows of an implicitly accumulated vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VandermondeSketch {
    field: FieldParams,
    k: usize,
    rows: Vec<u64>,
}

impl VandermondeSketch {
    pub fn new(field: FieldParams, k: usize) -> Self {
        VandermondeSketch { field, k, rows: vec![0; 2 * k] }
    }

    pub fn from_rows(field: FieldParams, k: usize, rows: Vec<u64>) -> Self {
        assert_eq!(rows.len(), 2 * k, "a k-sparse sketch has 2k rows");
        VandermondeSketch { field, k, rows }
    }

    pub fn encode(field: FieldParams, k: usize, x: &[(usize, u64)]) -> Self {
        let mut s = Self::new(field, k);
        for &(j, c) in x {
            s.add(j, c);
        }
        s
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn add(&mut self, j: usize, coeff: u64) {
        vandermonde_add(&self.field, &mut self.rows, j, coeff);
    }

    pub fn add_signed(&mut self, j: usize, coeff: i64) {
        let c = self.field.from_i64(coeff);
        self.add(j, c);
    }

    /// Row-wise `self += other`.
    pub fn merge(&mut self, other: &VandermondeSketch) {
        assert_eq!((self.k, self.field), (other.k, other.field));
        for (a, &b) in self.rows.iter_mut().zip(&other.rows) {
            *a = self.field.add(*a, b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }
}

/// `t` rows of a seeded random matrix applied to the accumulated vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintSketch {
    field: FieldParams,
    seed: u64,
    rows: Vec<u64>,
}

impl FingerprintSketch {
    pub fn new(field: FieldParams, t: usize, seed: u64) -> Self {
        FingerprintSketch { field, seed, rows: vec![0; t] }
    }

    pub fn from_rows(field: FieldParams, seed: u64, rows: Vec<u64>) -> Self {
        FingerprintSketch { field, seed, rows }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn add(&mut self, j: usize, coeff: u64) {
        fingerprint_add(&self.field, self.seed, &mut self.rows, j, coeff);
    }

    pub fn verify(&self, candidate: &[(usize, u64)]) -> bool {
        fingerprint_matches(&self.field, self.seed, &self.rows, candidate)
    }
}

pub fn verify_fingerprint(f: &FingerprintSketch, candidate: &[(usize, u64)]) -> bool {
    f.verify(candidate)
}

/// Header `(p, k, t, seed)` then the `2k` and `t` rows, all little-endian u64.
pub fn encode_pair(v: &VandermondeSketch, f: &FingerprintSketch) -> Vec<u8> {
    assert_eq!(v.field, f.field);
    let mut w = Writer::new();
    for h in [v.field.p(), v.k as u64, f.rows.len() as u64, f.seed] {
        w.u64(h);
    }
    for &r in v.rows.iter().chain(&f.rows) {
        w.u64(r);
    }
    w.finish()
}

pub fn decode_pair(bytes: &[u8], n: usize) -> Result<(VandermondeSketch, FingerprintSketch), FieldError> {
    let bad = |e: crate::codec::DecodeError| FieldError::Encoding(e.0);
    let mut r = Reader::new(bytes);
    let p = r.u64().map_err(bad)?;
    let k = r.u64().map_err(bad)? as usize;
    let t = r.u64().map_err(bad)? as usize;
    let seed = r.u64().map_err(bad)?;
    let field = FieldParams::new(p, n)?;
    if bytes.len() != 32 + 8 * (2 * k + t) {
        return Err(FieldError::Encoding(format!("expected {} rows", 2 * k + t)));
    }
    let mut read = |m: usize| (0..m).map(|_| r.u64().map_err(bad)).collect::<Result<Vec<_>, _>>();
    let vrows = read(2 * k)?;
    let frows = read(t)?;
    if vrows.iter().chain(&frows).any(|&x| x >= p) {
        return Err(FieldError::Encoding("row value outside the field".into()));
    }
    Ok((VandermondeSketch::from_rows(field, k, vrows), FingerprintSketch::from_rows(field, seed, frows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field() -> FieldParams {
        super::super::choose_prime(1000, 3).unwrap()
    }

    #[test]
    fn documented_examples() {
        let f = field();
        let mut s = VandermondeSketch::new(f, 4);
        s.add_signed(5, 1);
        s.add_signed(5, -1);
        assert!(s.is_zero());
        let mut s = VandermondeSketch::new(f, 3);
        s.add(0, 1);
        assert_eq!(s.rows(), &[1; 6]);
        let mut ab = VandermondeSketch::new(f, 3);
        ab.add(4, 7);
        ab.add(9, 2);
        let mut ba = VandermondeSketch::new(f, 3);
        ba.add(9, 2);
        ba.add(4, 7);
        assert_eq!(ab, ba);
    }

    #[test]
    fn fingerprint_examples() {
        let f = field();
        let mut fp = FingerprintSketch::new(f, 3, 42);
        assert!(fp.verify(&[]));
        fp.add(3, 1);
        fp.add(7, f.from_i64(-1));
        assert!(fp.verify(&[(3, 1), (7, f.from_i64(-1))]));
        assert!(!fp.verify(&[(3, 1), (8, f.from_i64(-1))]));
        assert!(!fp.verify(&[(3, 1)]));
    }

    #[test]
    fn serialisation_round_trip() {
        let f = field();
        let v = VandermondeSketch::encode(f, 2, &[(1, 1), (4, f.from_i64(-1))]);
        let mut fp = FingerprintSketch::new(f, 3, 9);
        fp.add(1, 1);
        let bytes = encode_pair(&v, &fp);
        assert_eq!(bytes.len(), 8 * (4 + 4 + 3));
        assert_eq!(&bytes[..8], &f.p().to_le_bytes());
        let (v2, f2) = decode_pair(&bytes, 1000).unwrap();
        assert_eq!((v2, f2), (v, fp));
        assert!(decode_pair(&bytes[..40], 1000).is_err());
    }

    proptest! {
        #[test]
        fn encoding_is_linear(
            a in proptest::collection::vec((0usize..1000, -3i64..=3), 0..12),
            b in proptest::collection::vec((0usize..1000, -3i64..=3), 0..12),
        ) {
            let f = field();
            let enc = |x: &[(usize, i64)]| {
                let mut s = VandermondeSketch::new(f, 5);
                for &(j, c) in x { s.add_signed(j, c); }
                s
            };
            let mut sum = enc(&a);
            sum.merge(&enc(&b));
            let both: Vec<(usize, i64)> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(sum, enc(&both));
        }
    }
}
