use super::{FieldError, FieldParams, MAX_MODULUS};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are a proven
/// witness set for every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The smallest prime `p ≥ n^c`, which lies below `2n^c`.
pub fn choose_prime(n: u64, c: u32) -> Result<FieldParams, FieldError> {
    assert!(n >= 2 && c >= 1, "choose_prime needs n >= 2 and c >= 1");
    let lo = n.checked_pow(c).filter(|&x| x < MAX_MODULUS / 2).ok_or(FieldError::Overflow { n, c })?;
    let mut p = lo;
    while !is_prime(p) {
        p += 1;
    }
    FieldParams::new(p, n as usize)
}
