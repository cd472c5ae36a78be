//! Big-integer counting primitives.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `n!`
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Falling factorial `a_(b) = a (a-1) ... (a-b+1)`; zero when `b > a`.
pub fn falling(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of perfect matchings of the complete graph on `2n` vertices:
/// `(2n)! / (n! 2^n)`, computed as the double factorial `(2n-1)!!`.
pub fn pma_count(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 1..=n {
        acc *= 2 * i - 1;
    }
    acc
}

/// Number of balanced perfect matchings of the complete `r`-partite graph
/// with parts of size `(r-1)n`: `(((r-1)n)! / (n!)^(r-1))^r * (n!)^C(r,2)`.
pub fn bpm_count(r: u32, n: u64) -> BigInt {
    let r64 = u64::from(r);
    let part = factorial((r64 - 1) * n) / factorial(n).pow(r - 1);
    let pairs = r * (r - 1) / 2;
    part.pow(r) * factorial(n).pow(pairs)
}
