//! Sectioning of rational generating functions.
//!
//! A sequence with generating function `h(x) / (1-x)^{n+1}` for a
//! polynomial `h` of degree at most `n+1` keeps that shape when restricted
//! to every `r`-th term; the numerator transforms linearly,
//! `h^{<r>}_i = sum_j C(i,j) h_j`, where `C(i,j)` counts solutions of
//! `a_1 + .. + a_{n+1} = i r - j` with digits `0 <= a_l <= r-1`.
//!
//! Trimming the first and last row and column of `C`, transposing, and
//! dividing by `b^n` recovers the carries transition matrix exactly;
//! [`trim_to_transition`] performs that reduction and verifies it.

use crate::carries::{self, ChainSpec};
use crate::error::{Error, Result};
use crate::exact::{binomial, composition_count, rat, Matrix, Rat};

/// Truncation order used when verifying sectioned numerators against the
/// series they must generate.
pub const SERIES_CHECK_ORDER: usize = 30;

/// Numerator polynomial of a rational generating function: coefficients
/// `h_0 .. h_{n+1}` (exactly `n + 2` of them).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HPolynomial {
    n: usize,
    coeffs: Vec<Rat>,
}

impl HPolynomial {
    pub fn new(n: usize, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != n + 2 {
            return Err(Error::Shape(format!(
                "need exactly n + 2 = {} coefficients, got {}",
                n + 2,
                coeffs.len()
            )));
        }
        Ok(HPolynomial { n, coeffs })
    }

    pub fn from_integers(n: usize, coeffs: &[i64]) -> Result<Self> {
        HPolynomial::new(n, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }
}

/// The `(n+2) x (n+2)` sectioning matrix for step `r`.
pub fn section_matrix(n: usize, r: u64) -> Matrix {
    assert!(r >= 1, "section step must be at least 1");
    Matrix::from_fn(n + 2, n + 2, |i, j| {
        rat(composition_count(
            r,
            n as u64 + 1,
            (i as i64) * (r as i64) - j as i64,
        ))
    })
}

/// Coefficients `a_0 .. a_{count-1}` of the series
/// `h(x) / (1-x)^{n+1} = h(x) * sum_i C(n+i, n) x^i`.
/// Deliberately independent of [`section_matrix`]; this is the oracle side.
pub fn series_coefficients(h: &HPolynomial, count: usize) -> Vec<Rat> {
    let n = h.n() as i64;
    (0..count)
        .map(|k| {
            h.coeffs()
                .iter()
                .enumerate()
                .map(|(j, hj)| hj * rat(binomial(n + k as i64 - j as i64, n)))
                .sum()
        })
        .collect()
}

/// Numerator of the generating function of every `r`-th term (starting at
/// index 0): `h^{<r>}_i = sum_j C(i,j) h_j`.
///
/// The result is verified against the series route up to
/// [`SERIES_CHECK_ORDER`]: the sectioned numerator must generate exactly
/// the subsequence `a_0, a_r, a_{2r}, ..`. A mismatch panics; it would be
/// a bug, not bad input.
pub fn apply_section(h: &HPolynomial, r: u64) -> HPolynomial {
    let c = section_matrix(h.n(), r);
    let coeffs: Vec<Rat> = (0..h.n() + 2)
        .map(|i| {
            h.coeffs()
                .iter()
                .enumerate()
                .map(|(j, hj)| c.get(i, j) * hj)
                .sum()
        })
        .collect();
    let sectioned = HPolynomial::new(h.n(), coeffs).expect("length preserved");

    let original = series_coefficients(h, SERIES_CHECK_ORDER * r as usize + 1);
    let subsequence = series_coefficients(&sectioned, SERIES_CHECK_ORDER + 1);
    for k in 0..=SERIES_CHECK_ORDER {
        assert_eq!(
            subsequence[k],
            original[k * r as usize],
            "sectioned numerator disagrees with the series at term {k}"
        );
    }
    sectioned
}

/// Deletes the outer rows and columns of the sectioning matrix for step
/// `b`, transposes, and scales by `b^{-n}`. The result must equal the
/// carries transition matrix; returns an internal-consistency error if it
/// does not.
pub fn trim_to_transition(n: usize, b: u64) -> Result<Matrix> {
    if n < 1 {
        return Err(Error::Invalid("need n >= 1".into()));
    }
    if b < 2 {
        return Err(Error::Invalid("base must be at least 2".into()));
    }
    let c = section_matrix(n, b);
    let trimmed = Matrix::from_fn(n, n, |i, j| c.get(j + 1, i + 1).clone());
    let scale = Rat::new(1.into(), crate::exact::int_pow(b, n as u32));
    let candidate = trimmed.scale(&scale);
    let reference = carries::transition_matrix(&ChainSpec::new(n, b)?);
    if candidate != reference {
        return Err(Error::Inconsistency(format!(
            "trimmed sectioning matrix differs from the carries matrix at n={n}, b={b}"
        )));
    }
    Ok(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{eulerian, frac};

    #[test]
    fn golden_small_section_matrices() {
        let m = section_matrix(1, 2);
        let expected = Matrix::from_rows(
            vec![vec![1, 0, 0], vec![1, 2, 1], vec![0, 0, 1]]
                .into_iter()
                .map(|row| row.into_iter().map(rat).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(m, expected);

        // single digit a1 in {0,1}, equation a1 = 2i - j: only (0,0) and
        // (1,1) are solvable
        let m = section_matrix(0, 2);
        let expected = Matrix::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(m, expected);

        for n in 0..=4 {
            assert_eq!(section_matrix(n, 1), Matrix::identity(n + 2));
        }
    }

    #[test]
    fn section_matrix_total_mass() {
        // every digit tuple is counted exactly once across the (i, j) grid
        // along its diagonal i*r - j = s, so summing composition counts
        // over all achievable s gives r^{n+1}
        for n in 0..=4usize {
            for r in 2..=5u64 {
                let total: Rat = (0..=(n as i64 + 1) * (r as i64 - 1))
                    .map(|s| rat(composition_count(r, n as u64 + 1, s)))
                    .sum();
                assert_eq!(total, rat(crate::exact::int_pow(r, n as u32 + 1)));
            }
        }
    }

    #[test]
    fn sectioning_the_linear_sequence() {
        // a_k = k has numerator h = x; every 2nd term doubles it
        let h = HPolynomial::from_integers(1, &[0, 1, 0]).unwrap();
        let sectioned = apply_section(&h, 2);
        assert_eq!(
            sectioned,
            HPolynomial::from_integers(1, &[0, 2, 0]).unwrap()
        );
        assert_eq!(apply_section(&h, 1), h);
    }

    #[test]
    fn sectioning_cubes() {
        // a_k = k^3 has the degree-3 Eulerian numerator; sectioning by 2
        // must generate (2k)^3 = 8 k^3
        let coeffs: Vec<Rat> = (0..5)
            .map(|i| {
                if i >= 1 {
                    rat(eulerian(3, i as i64 - 1))
                } else {
                    rat(0)
                }
            })
            .collect();
        let h = HPolynomial::new(3, coeffs).unwrap();
        let series = series_coefficients(&h, 10);
        for (k, a) in series.iter().enumerate() {
            assert_eq!(a, &rat((k * k * k) as i64));
        }
        let sectioned = apply_section(&h, 2);
        let series = series_coefficients(&sectioned, 10);
        for (k, a) in series.iter().enumerate() {
            assert_eq!(a, &rat(8 * (k * k * k) as i64));
        }
    }

    #[test]
    fn sectioning_matches_series_on_grid() {
        // random-ish integer numerators; apply_section panics on any
        // disagreement with the series route
        for n in 0..=4usize {
            for r in 1..=4u64 {
                let coeffs: Vec<i64> = (0..n as i64 + 2).map(|i| (3 * i + 1) % 7).collect();
                let h = HPolynomial::from_integers(n, &coeffs).unwrap();
                let _ = apply_section(&h, r);
            }
        }
    }

    #[test]
    fn negative_coefficients_still_section_linearly() {
        let h = HPolynomial::from_integers(2, &[1, -2, 3, -1]).unwrap();
        let _ = apply_section(&h, 3);
    }

    #[test]
    fn trimming_recovers_the_carries_matrix() {
        for n in 1..=6 {
            for b in 2..=5 {
                let trimmed = trim_to_transition(n, b).unwrap();
                assert_eq!(
                    trimmed,
                    carries::transition_matrix(&ChainSpec::new(n, b).unwrap())
                );
            }
        }
        // spot values pinned independently
        assert_eq!(trim_to_transition(1, 2).unwrap(), Matrix::identity(1));
        let p = trim_to_transition(2, 2).unwrap();
        assert_eq!(p.get(0, 0), &frac(3, 4));
        assert_eq!(p.get(0, 1), &frac(1, 4));
    }

    #[test]
    fn h_polynomial_length_is_enforced() {
        assert!(HPolynomial::from_integers(2, &[1, 2, 3]).is_err());
        assert!(HPolynomial::from_integers(2, &[1, 2, 3, 4]).is_ok());
    }
}
