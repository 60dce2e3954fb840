//! Small integer helpers shared by the oracles.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `ℓ`-adic valuation of a nonzero integer.
pub fn valuation(mut m: u128, ell: u64) -> u32 {
    debug_assert!(m != 0 && ell >= 2);
    let ell = ell as u128;
    let mut v = 0;
    while m % ell == 0 {
        m /= ell;
        v += 1;
    }
    v
}

/// Reduce a possibly negative integer into `0..modulus`.
pub fn reduce(x: i64, modulus: u64) -> u64 {
    x.rem_euclid(modulus as i64) as u64
}
