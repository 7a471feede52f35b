//! Dense matrices of exact rationals.
//!
//! Everything here is exact: multiplication, powers, characteristic
//! polynomials, and minor enumeration never round. Sizes are desk scale by
//! design; the caps below are documented, not tuned.

use std::fmt;
use std::ops::Index;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{rat, Rat};

/// Hard cap on the side length accepted by [`char_poly`].
pub const CHAR_POLY_MAX_SIDE: usize = 16;

/// Hard caps for minor enumeration in [`totally_positive`].
pub const TP_MAX_SIDE: usize = 12;
pub const TP_MAX_ORDER: usize = 4;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Shape("matrix needs at least one entry".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rat) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, factor: &Rat) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c) * factor)
    }

    /// Exact matrix product.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let add = a * rhs.get(k, c);
                    out.set(r, c, out.get(r, c) + add);
                }
            }
        }
        Ok(out)
    }

    /// Exact power by repeated squaring. `exp == 0` gives the identity.
    pub fn pow(&self, exp: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square matrix".into()));
        }
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    pub fn row_sums(&self) -> Vec<Rat> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<Rat> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c).clone()).sum())
            .collect()
    }

    /// Entries nonnegative and every row sums to exactly 1.
    pub fn is_row_stochastic(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative()) && self.row_sums().iter().all(|s| s.is_one())
    }

    /// Row stochastic and every column also sums to exactly 1.
    pub fn is_doubly_stochastic(&self) -> bool {
        self.is_row_stochastic() && self.col_sums().iter().all(|s| s.is_one())
    }

    /// CSV: one row per line, entries as "p/q" strings.
    pub fn to_csv(&self) -> String {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// JSON: array of arrays of "p/q" strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|r| Value::Array(self.row(r).iter().map(|x| json!(x.to_string())).collect()))
                .collect(),
        )
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rat;

    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        self.get(r, c)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

/// Row vector times matrix, exactly.
pub fn row_times_matrix(v: &[Rat], m: &Matrix) -> Result<Vec<Rat>> {
    if v.len() != m.rows() {
        return Err(Error::Shape(format!(
            "vector of length {} times {}x{} matrix",
            v.len(),
            m.rows(),
            m.cols()
        )));
    }
    Ok((0..m.cols())
        .map(|c| (0..m.rows()).map(|r| &v[r] * m.get(r, c)).sum())
        .collect())
}

/// Exact characteristic polynomial of a square matrix, returned as ascending
/// coefficients `c_0..c_n` with `c_n = 1`, so `p(x) = sum c_k x^k`.
///
/// Uses the trace recursion `M_k = A M_{k-1} + c_{n-k} I`,
/// `c_{n-k} = -tr(A M_k)/k`, which is exact over the rationals.
/// Side is capped at [`CHAR_POLY_MAX_SIDE`].
pub fn char_poly(a: &Matrix) -> Result<Vec<Rat>> {
    if !a.is_square() {
        return Err(Error::Shape(
            "characteristic polynomial of a non-square matrix".into(),
        ));
    }
    let n = a.rows();
    assert!(
        n <= CHAR_POLY_MAX_SIDE,
        "char_poly cap: side {n} exceeds {CHAR_POLY_MAX_SIDE}"
    );
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        let am = a.mul(&m)?;
        let c = -(am.trace() / rat(k as i64));
        coeffs[n - k] = c.clone();
        m = am;
        for i in 0..n {
            m.set(i, i, m.get(i, i) + &c);
        }
    }
    Ok(coeffs)
}

/// Monic polynomial with the given roots, ascending coefficients.
pub fn poly_from_roots(roots: &[Rat]) -> Vec<Rat> {
    let mut coeffs = vec![Rat::one()];
    for root in roots {
        let mut next = vec![Rat::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - c * root;
        }
        coeffs = next;
    }
    coeffs
}

/// Evaluate an ascending-coefficient polynomial at `x`, exactly.
pub fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

/// A negative minor found by [`totally_positive`]: the row and column index
/// sets selecting it, plus its determinant.
#[derive(Clone, Debug)]
pub struct MinorViolation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: Rat,
}

/// Checks that every minor of every size up to `order` is nonnegative, by
/// brute-force enumeration of index subsets. Returns the first violating
/// minor, or `None` if the matrix is totally positive to that order.
///
/// Caps: side <= [`TP_MAX_SIDE`], 2 <= order <= [`TP_MAX_ORDER`].
pub fn totally_positive(m: &Matrix, order: usize) -> Option<MinorViolation> {
    assert!(
        (2..=TP_MAX_ORDER).contains(&order),
        "order must be in 2..={TP_MAX_ORDER}"
    );
    assert!(
        m.rows() <= TP_MAX_SIDE && m.cols() <= TP_MAX_SIDE,
        "totally_positive cap: side exceeds {TP_MAX_SIDE}"
    );
    for size in 1..=order.min(m.rows()).min(m.cols()) {
        for rows in combinations(m.rows(), size) {
            for cols in combinations(m.cols(), size) {
                let det = minor_det(m, &rows, &cols);
                if det.is_negative() {
                    return Some(MinorViolation {
                        rows,
                        cols,
                        determinant: det,
                    });
                }
            }
        }
    }
    None
}

/// Convenience wrapper over [`totally_positive`].
pub fn is_totally_positive(m: &Matrix, order: usize) -> bool {
    totally_positive(m, order).is_none()
}

fn minor_det(m: &Matrix, rows: &[usize], cols: &[usize]) -> Rat {
    debug_assert_eq!(rows.len(), cols.len());
    match rows.len() {
        1 => m.get(rows[0], cols[0]).clone(),
        2 => {
            m.get(rows[0], cols[0]) * m.get(rows[1], cols[1])
                - m.get(rows[0], cols[1]) * m.get(rows[1], cols[0])
        }
        _ => {
            // Laplace expansion along the first selected row
            let mut det = Rat::zero();
            for (idx, &c) in cols.iter().enumerate() {
                let entry = m.get(rows[0], c);
                if entry.is_zero() {
                    continue;
                }
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != idx)
                    .map(|(_, &cc)| cc)
                    .collect();
                let sub = minor_det(m, &rows[1..], &sub_cols);
                if idx % 2 == 0 {
                    det += entry * sub;
                } else {
                    det -= entry * sub;
                }
            }
            det
        }
    }
}

/// All sorted `size`-element subsets of `0..n`.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(
        start: usize,
        n: usize,
        size: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;

    fn m(rows: Vec<Vec<i64>>) -> Matrix {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_mul_and_scalar_product() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(Matrix::identity(2).mul(&a).unwrap(), a);
        let one_by_one = Matrix::from_rows(vec![vec![frac(1, 2)]]).unwrap();
        let other = Matrix::from_rows(vec![vec![frac(1, 3)]]).unwrap();
        assert_eq!(one_by_one.mul(&other).unwrap().get(0, 0), &frac(1, 6));
    }

    #[test]
    fn mul_shape_mismatch() {
        let a = m(vec![vec![1, 2]]);
        assert!(matches!(a.mul(&a), Err(Error::Shape(_))));
    }

    #[test]
    fn pow_by_squaring_matches_repeated_mul() {
        let a = m(vec![vec![1, 1], vec![0, 1]]);
        let mut acc = Matrix::identity(2);
        for e in 0..=6u64 {
            assert_eq!(a.pow(e).unwrap(), acc);
            acc = acc.mul(&a).unwrap();
        }
    }

    #[test]
    fn char_poly_identity_and_diagonal() {
        let id = Matrix::identity(2);
        // (x-1)^2 = 1 - 2x + x^2
        assert_eq!(char_poly(&id).unwrap(), vec![rat(1), rat(-2), rat(1)]);

        let mut d = Matrix::zeros(3, 3);
        d.set(0, 0, rat(1));
        d.set(1, 1, frac(1, 3));
        d.set(2, 2, frac(1, 9));
        let expected = poly_from_roots(&[rat(1), frac(1, 3), frac(1, 9)]);
        assert_eq!(char_poly(&d).unwrap(), expected);
    }

    #[test]
    fn char_poly_rejects_non_square() {
        let a = m(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert!(matches!(char_poly(&a), Err(Error::Shape(_))));
    }

    #[test]
    fn char_poly_of_stochastic_matrix_has_root_one() {
        let a = Matrix::from_rows(vec![
            vec![frac(3, 4), frac(1, 4)],
            vec![frac(1, 4), frac(3, 4)],
        ])
        .unwrap();
        let p = char_poly(&a).unwrap();
        assert!(eval_poly(&p, &rat(1)).is_zero());
        assert_eq!(p, poly_from_roots(&[rat(1), frac(1, 2)]));
    }

    #[test]
    fn total_positivity_basics() {
        assert!(is_totally_positive(&m(vec![vec![1, 0], vec![1, 1]]), 2));
        let v = totally_positive(&m(vec![vec![0, 1], vec![1, 0]]), 2).unwrap();
        assert_eq!(v.determinant, rat(-1));
        assert_eq!((v.rows, v.cols), (vec![0, 1], vec![0, 1]));
    }

    #[test]
    fn banded_unit_lower_triangle_is_tp2() {
        // 6x6, ones on the diagonal and the next two subdiagonals
        let a = Matrix::from_fn(
            6,
            6,
            |i, j| {
                if i >= j && i - j <= 2 {
                    rat(1)
                } else {
                    rat(0)
                }
            },
        );
        assert!(is_totally_positive(&a, 2));
    }

    #[test]
    fn serialization_shapes() {
        let a =
            Matrix::from_rows(vec![vec![frac(1, 2), frac(1, 2)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(a.to_csv(), "1/2,1/2\n0,1");
        assert_eq!(a.to_json(), serde_json::json!([["1/2", "1/2"], ["0", "1"]]));
    }

    #[test]
    fn row_vector_product() {
        let a = m(vec![vec![1, 2], vec![3, 4]]);
        let v = vec![rat(1), rat(1)];
        assert_eq!(row_times_matrix(&v, &a).unwrap(), vec![rat(4), rat(6)]);
        assert!(row_times_matrix(&[rat(1)], &a).is_err());
    }
}
