//! Binomials, factorials, Eulerian numbers, and bounded-digit composition
//! counts, all over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Binomial coefficient `C(n, k)` with the zero-extension convention:
/// the result is 0 whenever `k < 0`, `k > n`, or `n < 0`. The signed top
/// argument lets alternating-sum formulas pass possibly-negative tops
/// straight through.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as u64;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n as u64 - i);
        // exact: a product of i+1 consecutive integers is divisible by (i+1)!
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `n!`
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Eulerian number `A(n, j)`: the number of permutations of `{1..n}` with
/// exactly `j` descents. Zero outside `0 <= j <= n-1`.
pub fn eulerian(n: u64, j: i64) -> BigInt {
    assert!(n >= 1, "eulerian requires n >= 1");
    if j < 0 || j >= n as i64 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for l in 0..=j {
        let term = binomial(n as i64 + 1, l) * BigInt::from(j + 1 - l).pow(n as u32);
        if l % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Number of ways to write `total` as an ordered sum of `parts` digits, each
/// in `[0, b-1]`. Equivalently the coefficient of `x^total` in
/// `((1 - x^b)/(1 - x))^parts`. Zero when `total` is negative or exceeds
/// `parts * (b - 1)`.
///
/// Computed by dynamic programming over the parts; the alternating
/// inclusion-exclusion form is kept as a test oracle.
pub fn composition_count(b: u64, parts: u64, total: i64) -> BigInt {
    assert!(b >= 1, "composition_count requires base >= 1");
    assert!(parts >= 1, "composition_count requires at least one part");
    let max = (parts * (b - 1)) as i64;
    if total < 0 || total > max {
        return BigInt::zero();
    }
    let total = total as usize;
    let mut counts = vec![BigInt::zero(); total + 1];
    counts[0] = BigInt::one();
    for _ in 0..parts {
        let mut next = vec![BigInt::zero(); total + 1];
        for t in 0..=total {
            if counts[t].is_zero() {
                continue;
            }
            let top = (b - 1).min((total - t) as u64);
            for d in 0..=top {
                next[t + d as usize] += &counts[t];
            }
        }
        counts = next;
    }
    counts[total].clone()
}
