//! The carries Markov chain for adding `n` uniform base-`b` numbers.
//!
//! The carry after each digit column is a Markov chain on `{0, .., n-1}`.
//! [`transition_matrix`] builds its transition matrix two independent ways
//! and insists they agree entrywise: an alternating binomial sum over the
//! window `jb <= i + X_1 + .. + X_n <= (j+1)b - 1`, and extraction of the
//! digit-sum coefficient `composition_count(b, n+1, (j+1)b - i - 1) / b^n`.
//!
//! Also here: the Eulerian stationary vector (base independent), exact
//! moments of the carry in a given column, separation distance from the
//! starting state both as an exact matrix computation and in closed form,
//! and exact total-variation distance.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    binomial, composition_count, eulerian, factorial, frac, int_pow, rat, Matrix, Rat,
};

/// Parameters of the carries chain: `n` addends in base `b`.
///
/// Matrix powers are exact rational arithmetic; practical caps are about
/// `n <= 64` and `r <= 64`. The closed-form separation needs no matrix and
/// has no such limit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ChainSpec {
    pub n: usize,
    pub b: u64,
}

impl ChainSpec {
    pub fn new(n: usize, b: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Invalid("need at least one addend".into()));
        }
        if b < 2 {
            return Err(Error::Invalid("base must be at least 2".into()));
        }
        Ok(ChainSpec { n, b })
    }
}

/// Exact moments of the carry out of column `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CarryMoments {
    pub column: u64,
    pub mean: Rat,
    pub variance: Rat,
}

fn entry_by_alternating_sum(n: usize, b: u64, i: usize, j: usize) -> BigInt {
    // b^n * P(i, j), summed with the zero-extension binomial convention
    let (n, b, i, j) = (n as i64, b as i64, i as i64, j as i64);
    let upper = j - i.div_euclid(b);
    let mut acc = BigInt::zero();
    // an inclusive range with upper < 0 is empty, giving a zero entry
    for r in 0..=upper {
        let term = binomial(n + 1, r) * binomial(n - 1 - i + (j + 1 - r) * b, n);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn entry_by_coefficient(n: usize, b: u64, i: usize, j: usize) -> BigInt {
    composition_count(b, n as u64 + 1, (j as i64 + 1) * b as i64 - i as i64 - 1)
}

/// Transition matrix of the carries chain, `n x n`, exactly row stochastic.
///
/// Panics if the two construction routes disagree; that would be a bug, not
/// a property of the input.
pub fn transition_matrix(spec: &ChainSpec) -> Matrix {
    let ChainSpec { n, b } = *spec;
    let denom = int_pow(b, n as u32);
    let m = Matrix::from_fn(n, n, |i, j| {
        let sum_form = entry_by_alternating_sum(n, b, i, j);
        let coeff_form = entry_by_coefficient(n, b, i, j);
        assert_eq!(
            sum_form, coeff_form,
            "transition entry ({i},{j}) construction mismatch for n={n}, b={b}"
        );
        Rat::new(coeff_form, denom.clone())
    });
    assert!(m.is_row_stochastic(), "carries matrix must be stochastic");
    m
}

/// Stationary distribution of the chain: `pi(j) = A(n, j) / n!`.
/// Independent of the base.
pub fn stationary(n: usize) -> Vec<Rat> {
    assert!(n >= 1);
    let nf = factorial(n as u64);
    (0..n)
        .map(|j| Rat::new(eulerian(n as u64, j as i64), nf.clone()))
        .collect()
}

/// Distribution of the carry after `r` columns, started from carry 0:
/// row 0 of the `r`-th matrix power.
pub fn carry_distribution(spec: &ChainSpec, r: u64) -> Vec<Rat> {
    let p = transition_matrix(spec)
        .pow(r)
        .expect("square by construction");
    p.row(0).to_vec()
}

fn distribution_moments(dist: &[Rat]) -> (Rat, Rat) {
    let mean: Rat = dist
        .iter()
        .enumerate()
        .map(|(k, p)| rat(k as i64) * p)
        .sum();
    let second: Rat = dist
        .iter()
        .enumerate()
        .map(|(k, p)| rat((k * k) as i64) * p)
        .sum();
    let variance = second - &mean * &mean;
    (mean, variance)
}

fn closed_mean(spec: &ChainSpec, j: u64) -> Rat {
    let bj = int_pow(spec.b, j as u32);
    frac(spec.n as i64 - 1, 2) * (Rat::one() - Rat::new(BigInt::one(), bj))
}

fn closed_variance(spec: &ChainSpec, j: u64) -> Rat {
    // one addend never carries; the covariance expansion behind the
    // closed form needs at least one descent indicator, so n = 1 is
    // handled separately
    if spec.n == 1 {
        return Rat::zero();
    }
    let b2j = int_pow(spec.b, 2 * j as u32);
    frac(spec.n as i64 + 1, 12) * (Rat::one() - Rat::new(BigInt::one(), b2j))
}

/// Mean and variance of the carry out of column `j >= 1`, computed from the
/// closed forms `(n-1)/2 (1 - b^-j)` and, for `n >= 2`,
/// `(n+1)/12 (1 - b^-2j)`, and verified against the exact moments of
/// [`carry_distribution`].
pub fn carry_moments(spec: &ChainSpec, j: u64) -> Result<CarryMoments> {
    assert!(j >= 1, "column index starts at 1");
    let mean = closed_mean(spec, j);
    let variance = closed_variance(spec, j);
    let (chain_mean, chain_variance) = distribution_moments(&carry_distribution(spec, j));
    if mean != chain_mean || variance != chain_variance {
        return Err(Error::Inconsistency(format!(
            "closed-form moments disagree with the chain at n={}, b={}, j={j}: \
             mean {mean} vs {chain_mean}, variance {variance} vs {chain_variance}",
            spec.n, spec.b
        )));
    }
    Ok(CarryMoments {
        column: j,
        mean,
        variance,
    })
}

/// Expected total number of carries over the first `m` columns:
/// `(n-1)/2 (m - (1 - b^-m)/(b - 1))`. Checked against the sum of the
/// per-column means.
pub fn total_carries_mean(spec: &ChainSpec, m: u64) -> Rat {
    assert!(m >= 1);
    let bm = int_pow(spec.b, m as u32);
    let geometric = (Rat::one() - Rat::new(BigInt::one(), bm)) / rat(spec.b as i64 - 1);
    let total = frac(spec.n as i64 - 1, 2) * (rat(m as i64) - geometric);
    let summed: Rat = (1..=m)
        .map(|j| {
            carry_moments(spec, j)
                .expect("closed-form and chain moments agree")
                .mean
        })
        .sum();
    assert_eq!(total, summed, "total-carries mean identity failed");
    total
}

/// `P^r(0, i) / pi(i)` for each state `i`. Non-increasing in `i`; the
/// separation distance is `1 -` its last entry.
pub fn stationarity_ratios(spec: &ChainSpec, r: u64) -> Vec<Rat> {
    let dist = carry_distribution(spec, r);
    let pi = stationary(spec.n);
    dist.into_iter().zip(pi).map(|(p, s)| p / s).collect()
}

/// Separation distance after `r` steps, exactly from matrix powers:
/// `max_j (1 - P^r(0,j)/pi(j))`.
pub fn separation_exact(spec: &ChainSpec, r: u64) -> Rat {
    stationarity_ratios(spec, r)
        .into_iter()
        .map(|f| Rat::one() - f)
        .max()
        .expect("state space is nonempty")
}

/// Separation distance in closed form: `1 - prod_{i=1}^{n-1} (1 - i/b^r)`,
/// with each factor clamped at zero (the chain cannot reach the top state
/// while `b^r < n`, so separation is exactly 1 there). Needs no matrix.
pub fn separation_closed(spec: &ChainSpec, r: u64) -> Rat {
    let br = int_pow(spec.b, r as u32);
    let mut product = Rat::one();
    for i in 1..spec.n as i64 {
        let numer = &br - BigInt::from(i);
        if !numer.is_positive() {
            return Rat::one();
        }
        product *= Rat::new(numer, br.clone());
    }
    Rat::one() - product
}

/// Exact total-variation distance between the carry distribution after `r`
/// steps and the stationary law: `(1/2) sum_j |P^r(0,j) - pi(j)|`.
pub fn tv_from_start(spec: &ChainSpec, r: u64) -> Rat {
    let dist = carry_distribution(spec, r);
    let pi = stationary(spec.n);
    let total: Rat = dist.iter().zip(&pi).map(|(p, s)| (p - s).abs()).sum();
    total / rat(2)
}

/// Closed-form separation as a float, for asymptotic comparisons where the
/// limit `1 - e^{-1/(2c)}` is irrational.
pub fn separation_closed_f64(spec: &ChainSpec, r: u64) -> f64 {
    separation_closed(spec, r).to_f64().unwrap_or(f64::NAN)
}
