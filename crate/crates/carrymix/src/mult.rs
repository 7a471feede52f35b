//! Carries when multiplying a random base-`b` number by a fixed `k`.
//!
//! Processing digits least significant first with running carry
//! `kappa_i = floor((kappa_{i-1} + k * d_i) / b)` gives a Markov chain on
//! `{0, .., k-1}`. Its transition matrix is doubly stochastic and a
//! generalized circulant (each column is the previous one shifted down by
//! `b mod k`), so the stationary law is uniform; total variation distance
//! to uniform after `r` steps is at most `k / (2 b^r)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{frac, int_pow, rat, Matrix, Rat};

/// Documented soft cap on `k` for matrix builds.
pub const MULT_MATRIX_MAX_K: u64 = 10_000;

/// Multiplier `k >= 1` and base `b >= 2`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MultSpec {
    pub k: u64,
    pub b: u64,
}

impl MultSpec {
    pub fn new(k: u64, b: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Invalid("multiplier must be at least 1".into()));
        }
        if b < 2 {
            return Err(Error::Invalid("base must be at least 2".into()));
        }
        Ok(MultSpec { k, b })
    }
}

/// Carry sequence for multiplying the number with the given digits
/// (least significant first) by `k`. Values lie in `[0, k-1]`.
pub fn carry_trace(spec: &MultSpec, digits: &[u32]) -> Result<Vec<u64>> {
    let mut trace = Vec::with_capacity(digits.len());
    let mut carry = 0u64;
    for &d in digits {
        if d as u64 >= spec.b {
            return Err(Error::Invalid(format!(
                "digit {d} out of range for base {}",
                spec.b
            )));
        }
        carry = (carry + spec.k * d as u64) / spec.b;
        trace.push(carry);
    }
    Ok(trace)
}

/// Transition matrix of the multiplication-carries chain:
/// `K(i, j) = |{d in [0, b-1] : floor((i + k d)/b) = j}| / b`.
pub fn transition_matrix(spec: &MultSpec) -> Matrix {
    assert!(
        spec.k <= MULT_MATRIX_MAX_K,
        "multiplier cap: k exceeds {MULT_MATRIX_MAX_K}"
    );
    let k = spec.k as usize;
    let mut counts = vec![vec![0u64; k]; k];
    for i in 0..spec.k {
        for d in 0..spec.b {
            let j = (i + spec.k * d) / spec.b;
            counts[i as usize][j as usize] += 1;
        }
    }
    let m = Matrix::from_fn(k, k, |i, j| frac(counts[i][j] as i64, spec.b as i64));
    assert!(
        m.is_doubly_stochastic(),
        "mult-carries matrix must be doubly stochastic"
    );
    m
}

/// Exact total variation distance between the carry distribution after `r`
/// steps started at 0 and the uniform law, from matrix powers. The bound
/// `k / (2 b^r)` always holds and is asserted.
pub fn tv_exact(spec: &MultSpec, r: u64) -> Rat {
    assert!(r >= 1);
    let power = transition_matrix(spec)
        .pow(r)
        .expect("square by construction");
    let uniform = frac(1, spec.k as i64);
    let total: Rat = power
        .row(0)
        .iter()
        .map(|p| {
            let diff = p - &uniform;
            if diff < Rat::zero() {
                -diff
            } else {
                diff
            }
        })
        .sum();
    let tv = total / rat(2);
    let bound = Rat::new(BigInt::from(spec.k), 2 * int_pow(spec.b, r as u32));
    assert!(tv <= bound, "TV bound k/(2 b^r) violated");
    tv
}

/// Carry distribution after `r` steps by direct counting, independent of
/// the matrix: `K^r(0, j) = |{x in [0, b^r) : j b^r <= k x < (j+1) b^r}| / b^r`.
/// Enumerates all `b^r` values of `x`; capped at 10^7.
pub fn carry_row_by_counting(spec: &MultSpec, r: u64) -> Result<Vec<Rat>> {
    let br = spec
        .b
        .checked_pow(r as u32)
        .filter(|&v| v <= 10_000_000)
        .ok_or_else(|| Error::ResourceCap(format!("b^r = {}^{r} exceeds 10^7", spec.b)))?;
    let mut counts = vec![0u64; spec.k as usize];
    for x in 0..br {
        let j = (spec.k as u128 * x as u128 / br as u128) as usize;
        counts[j] += 1;
    }
    Ok(counts
        .into_iter()
        .map(|c| frac(c as i64, br as i64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn worked_trace_times_twenty_six() {
        let spec = MultSpec::new(26, 10).unwrap();
        // 1423 digit by digit from the right
        assert_eq!(
            carry_trace(&spec, &[3, 2, 4, 1]).unwrap(),
            vec![7, 5, 10, 3]
        );
    }

    #[test]
    fn trace_edge_cases() {
        let spec = MultSpec::new(1, 7).unwrap();
        assert_eq!(carry_trace(&spec, &[6, 6, 6]).unwrap(), vec![0, 0, 0]);
        let spec = MultSpec::new(10, 10).unwrap();
        assert_eq!(carry_trace(&spec, &[7]).unwrap(), vec![7]);
        assert!(carry_trace(&spec, &[10]).is_err());
    }

    #[test]
    fn golden_matrix_seven_base_ten() {
        let expected = Matrix::from_rows(
            [
                [2, 1, 2, 1, 2, 1, 1],
                [2, 1, 2, 1, 1, 2, 1],
                [2, 1, 1, 2, 1, 2, 1],
                [1, 2, 1, 2, 1, 2, 1],
                [1, 2, 1, 2, 1, 1, 2],
                [1, 2, 1, 1, 2, 1, 2],
                [1, 1, 2, 1, 2, 1, 2],
            ]
            .iter()
            .map(|row| row.iter().map(|&v| frac(v, 10)).collect())
            .collect(),
        )
        .unwrap();
        assert_eq!(transition_matrix(&MultSpec::new(7, 10).unwrap()), expected);
    }

    #[test]
    fn trivial_matrices() {
        assert_eq!(
            transition_matrix(&MultSpec::new(1, 9).unwrap()),
            Matrix::identity(1)
        );
        let half = frac(1, 2);
        let expected = Matrix::from_rows(vec![
            vec![half.clone(), half.clone()],
            vec![half.clone(), half],
        ])
        .unwrap();
        assert_eq!(transition_matrix(&MultSpec::new(2, 2).unwrap()), expected);
    }

    #[test]
    fn doubly_stochastic_and_circulant_shift() {
        for k in 1..=12u64 {
            for b in 2..=12u64 {
                let spec = MultSpec::new(k, b).unwrap();
                let m = transition_matrix(&spec);
                assert!(m.is_doubly_stochastic(), "k={k} b={b}");
                let shift = (b % k) as usize;
                for c in 0..k as usize - 1 {
                    for r in 0..k as usize {
                        assert_eq!(
                            m.get((r + shift) % k as usize, c + 1),
                            m.get(r, c),
                            "column shift failed at k={k} b={b} col={c} row={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn base_semigroup_for_fixed_multiplier() {
        for k in 2..=9u64 {
            for a in [2u64, 3, 4] {
                for b in [2u64, 3, 4] {
                    let ka = transition_matrix(&MultSpec::new(k, a).unwrap());
                    let kb = transition_matrix(&MultSpec::new(k, b).unwrap());
                    let kab = transition_matrix(&MultSpec::new(k, a * b).unwrap());
                    assert_eq!(ka.mul(&kb).unwrap(), kab, "k={k} {a}*{b}");
                }
            }
        }
    }

    #[test]
    fn tv_examples() {
        let spec = MultSpec::new(7, 10).unwrap();
        assert_eq!(tv_exact(&spec, 1), frac(6, 35));
        assert!(frac(6, 35) <= frac(7, 20));

        // k = b mixes in one step
        assert!(tv_exact(&MultSpec::new(10, 10).unwrap(), 1).is_zero());
        for r in 1..=3 {
            assert!(tv_exact(&MultSpec::new(1, 5).unwrap(), r).is_zero());
        }
    }

    #[test]
    fn counting_identity_matches_matrix_powers() {
        for (k, b, r_max) in [(7u64, 10u64, 6u64), (26, 10, 5), (3, 2, 19)] {
            let spec = MultSpec::new(k, b).unwrap();
            let m = transition_matrix(&spec);
            for r in 1..=r_max {
                let by_count = carry_row_by_counting(&spec, r).unwrap();
                let by_power = m.pow(r).unwrap().row(0).to_vec();
                assert_eq!(by_count, by_power, "k={k} b={b} r={r}");
            }
        }
        assert!(carry_row_by_counting(&MultSpec::new(3, 10).unwrap(), 8).is_err());
    }

    #[test]
    fn uniform_is_stationary() {
        for k in 1..=8u64 {
            let spec = MultSpec::new(k, 6).unwrap();
            let m = transition_matrix(&spec);
            let uniform = vec![frac(1, k as i64); k as usize];
            let product = crate::exact::row_times_matrix(&uniform, &m).unwrap();
            assert_eq!(product, uniform);
            assert!(product.iter().sum::<Rat>().is_one());
        }
    }
}
