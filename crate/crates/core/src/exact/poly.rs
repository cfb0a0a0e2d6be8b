use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Coefficients of `prod (t - r)` over the given roots, leading term first.
pub fn expand_root_product(roots: &[BigInt]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for r in roots {
        // multiply by (t - r)
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Horner evaluation of a descending coefficient list.
pub fn eval_descending(coeffs: &[BigInt], t: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// `base^exp` by square-and-multiply.
pub fn pow_u64(base: &BigInt, mut exp: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    result
}
