//! Column arrays of base-`b` digits, carry computation, and the bijections
//! that turn carries into permutation descents.
//!
//! Conventions, fixed throughout:
//! - Columns of an array are numbered `C_1 .. C_m` with `C_1` the RIGHTMOST
//!   (least significant) column; a printed row reads `C_m .. C_1` left to
//!   right.
//! - Rows are compared as base-`b` numbers, leftmost digit most
//!   significant.
//! - Positions in carry and descent sets are 1-based: a set contains `i`
//!   when the event happens between rows `i` and `i+1`.
//! - [`rank_label`] breaks ties upward: of two equal rows, the higher one
//!   receives the smaller label.
//!
//! The bar map replaces each row by the running prefix sum of the rows
//! reduced mod `b^m`; it turns carry positions into descent positions. The
//! star map rebuilds an array column by column, placing each new column in
//! the order given by the rank labeling of the columns already placed; it
//! turns products of single-column labelings into one labeling. Chaining
//! these gives, for every array, the pointwise identity
//! `descents(tau_j) = kappa_j` realized by [`shuffle_trace`].

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::shuffling::{Permutation, ShuffleTrace};

/// Carries out of columns `1..=m`, each value in `[0, n-1]`.
pub type CarryTrace = Vec<u32>;

/// An `n x m` array of base-`b` digits, column 1 rightmost.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColumnArray {
    n: usize,
    m: usize,
    b: u64,
    /// digits[row * m + k] is the digit of column `C_{k+1}` in `row`
    digits: Vec<u32>,
}

impl ColumnArray {
    /// Build from rows as printed: within each row the leftmost digit is
    /// the most significant (column `C_m`).
    pub fn from_rows(b: u64, rows: Vec<Vec<u32>>) -> Result<Self> {
        if b < 1 {
            return Err(Error::Invalid("base must be at least 1".into()));
        }
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Invalid("array needs at least one digit".into()));
        }
        let m = rows[0].len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        let mut digits = Vec::with_capacity(rows.len() * m);
        for row in &rows {
            for &d in row.iter().rev() {
                if d as u64 >= b {
                    return Err(Error::Invalid(format!(
                        "digit {d} out of range for base {b}"
                    )));
                }
                digits.push(d);
            }
        }
        Ok(ColumnArray {
            n: rows.len(),
            m,
            b,
            digits,
        })
    }

    /// Build from columns: `cols[0]` is `C_1` (rightmost), each given top
    /// to bottom.
    pub fn from_columns(b: u64, cols: Vec<Vec<u32>>) -> Result<Self> {
        if cols.is_empty() || cols[0].is_empty() {
            return Err(Error::Invalid("array needs at least one digit".into()));
        }
        let n = cols[0].len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::Invalid("ragged columns".into()));
        }
        let rows = (0..n)
            .map(|i| cols.iter().rev().map(|c| c[i]).collect())
            .collect();
        ColumnArray::from_rows(b, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Digit in `row` (0-based) of column `C_j` (1-based).
    pub fn digit(&self, row: usize, j: usize) -> u32 {
        self.digits[row * self.m + (j - 1)]
    }

    /// Column `C_j`, top to bottom.
    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.n).map(|i| self.digit(i, j)).collect()
    }

    /// The sub-array of the rightmost `j` columns `C_j .. C_1`.
    pub fn rightmost(&self, j: usize) -> ColumnArray {
        assert!(1 <= j && j <= self.m);
        let cols = (1..=j).map(|t| self.column(t)).collect();
        ColumnArray::from_columns(self.b, cols).expect("digits already validated")
    }

    /// Value of `row` read as a base-`b` number over all `m` columns.
    pub fn row_value(&self, row: usize) -> BigUint {
        self.row_value_rightmost(row, self.m)
    }

    /// Value of the rightmost `j` digits of `row`.
    pub fn row_value_rightmost(&self, row: usize, j: usize) -> BigUint {
        let mut v = BigUint::zero();
        for t in (1..=j).rev() {
            v = v * self.b + self.digit(row, t);
        }
        v
    }

    /// Rows as tuples, most significant digit first.
    pub fn tuples(&self) -> TupleList {
        let rows = (0..self.n)
            .map(|i| (1..=self.m).rev().map(|j| self.digit(i, j)).collect())
            .collect();
        TupleList::new(self.b, rows).expect("digits already validated")
    }

    /// Parse the plain-text format: a header line "n m b" followed by `n`
    /// lines of `m` digits, leftmost character most significant. Digits
    /// use 0-9 then a-z, so bases up to 36 are representable.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Invalid("empty column-array file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Invalid(format!(
                "header must be \"n m b\", got {header:?}"
            )));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|e| Error::Invalid(format!("bad n: {e}")))?;
        let m: usize = fields[1]
            .parse()
            .map_err(|e| Error::Invalid(format!("bad m: {e}")))?;
        let b: u64 = fields[2]
            .parse()
            .map_err(|e| Error::Invalid(format!("bad b: {e}")))?;
        if b > 36 {
            return Err(Error::Invalid("text format supports bases up to 36".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| Error::Invalid(format!("expected {n} digit rows")))?;
            let row = line
                .trim()
                .chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| Error::Invalid(format!("bad digit {c:?}")))
                })
                .collect::<Result<Vec<u32>>>()?;
            if row.len() != m {
                return Err(Error::Invalid(format!(
                    "row has {} digits, expected {m}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Invalid("trailing content after digit rows".into()));
        }
        ColumnArray::from_rows(b, rows)
    }

    /// Inverse of [`ColumnArray::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.m, self.b);
        for i in 0..self.n {
            for j in (1..=self.m).rev() {
                out.push(char::from_digit(self.digit(i, j), 36).expect("base capped at 36"));
            }
            out.push('\n');
        }
        out
    }
}

/// A list of `n` equal-width digit tuples, leftmost digit most
/// significant. Tuples compare by base-`b` value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TupleList {
    b: u64,
    width: usize,
    rows: Vec<Vec<u32>>,
}

impl TupleList {
    pub fn new(b: u64, rows: Vec<Vec<u32>>) -> Result<Self> {
        if b < 1 {
            return Err(Error::Invalid("base must be at least 1".into()));
        }
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Invalid("tuple list needs at least one entry".into()));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Invalid("ragged tuples".into()));
        }
        if rows.iter().flatten().any(|&d| d as u64 >= b) {
            return Err(Error::Invalid("digit out of range".into()));
        }
        Ok(TupleList { b, width, rows })
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    /// Base-`b` value of tuple `i`.
    pub fn value(&self, i: usize) -> BigUint {
        self.rows[i]
            .iter()
            .fold(BigUint::zero(), |acc, &d| acc * self.b + d)
    }

    /// Reinterpret the rows as a column array of the same width.
    pub fn to_column_array(&self) -> ColumnArray {
        ColumnArray::from_rows(self.b, self.rows.clone()).expect("digits already validated")
    }
}

fn digits_most_significant_first(value: &BigUint, b: u64, width: usize) -> Vec<u32> {
    let mut v = value.clone();
    let base = BigUint::from(b);
    let mut out = vec![0u32; width];
    for slot in out.iter_mut().rev() {
        let digit = &v % &base;
        *slot = digit.to_u32_digits().first().copied().unwrap_or(0);
        v /= &base;
    }
    debug_assert!(v.is_zero(), "value wider than {width} digits");
    out
}

/// Carries out of each column when the `n` rows are added by ordinary
/// columnar addition. Also recomputes each carry as the overflow of the
/// exact prefix sum of the rightmost `j` digits and insists the two
/// routes agree: how the preceding columns were added cannot matter.
pub fn column_carry_trace(array: &ColumnArray) -> CarryTrace {
    let mut trace = Vec::with_capacity(array.m());
    let mut carry: u64 = 0;
    for j in 1..=array.m() {
        let column_sum: u64 = array.column(j).iter().map(|&d| d as u64).sum();
        carry = (carry + column_sum) / array.b();
        trace.push(carry as u32);
    }
    for (idx, &kappa) in trace.iter().enumerate() {
        let j = idx + 1;
        let window = BigUint::from(array.b()).pow(j as u32);
        let total: BigUint = (0..array.n())
            .map(|i| array.row_value_rightmost(i, j))
            .sum();
        assert_eq!(
            BigUint::from(kappa),
            total / window,
            "columnar and prefix-sum carries disagree at column {j}"
        );
    }
    trace
}

/// Positions `i` where adding tuple `i+1` to the running sum of the first
/// `i` tuples increases the carry out of the `width`-digit window.
pub fn carry_positions(list: &TupleList) -> BTreeSet<usize> {
    let window = BigUint::from(list.b()).pow(list.width() as u32);
    let mut positions = BTreeSet::new();
    let mut prefix = BigUint::zero();
    let mut carry = BigUint::zero();
    for i in 0..list.len() {
        prefix += list.value(i);
        let next_carry = &prefix / &window;
        if i >= 1 && next_carry > carry {
            positions.insert(i);
        }
        carry = next_carry;
    }
    positions
}

/// Positions `i` where tuple `i+1` is smaller than tuple `i` by base-`b`
/// value.
pub fn descent_positions(list: &TupleList) -> BTreeSet<usize> {
    (1..list.len())
        .filter(|&i| list.value(i) < list.value(i - 1))
        .collect()
}

/// The bar map: row `i` of the result is the rightmost `m` digits of the
/// sum of rows `1..=i`, i.e. the running prefix sum reduced mod `b^m`.
/// A bijection; see [`bar_inverse`].
pub fn bar_map(array: &ColumnArray) -> TupleList {
    let modulus = BigUint::from(array.b()).pow(array.m() as u32);
    let mut rows = Vec::with_capacity(array.n());
    let mut prefix = BigUint::zero();
    for i in 0..array.n() {
        prefix = (prefix + array.row_value(i)) % &modulus;
        rows.push(digits_most_significant_first(&prefix, array.b(), array.m()));
    }
    TupleList::new(array.b(), rows).expect("digits below base")
}

/// Inverse of [`bar_map`]: successive differences of the prefix sums,
/// mod `b^m`.
pub fn bar_inverse(list: &TupleList) -> ColumnArray {
    let modulus = BigUint::from(list.b()).pow(list.width() as u32);
    let mut rows = Vec::with_capacity(list.len());
    let mut previous = BigUint::zero();
    for i in 0..list.len() {
        let current = list.value(i);
        let original = (&modulus + &current - &previous) % &modulus;
        rows.push(digits_most_significant_first(
            &original,
            list.b(),
            list.width(),
        ));
        previous = current;
    }
    ColumnArray::from_rows(list.b(), rows).expect("digits below base")
}

/// Rank labeling of a tuple list: tuples are labeled `1..=n` from smallest
/// to largest base-`b` value, ties broken so that the higher-up tuple gets
/// the smaller label. The result sends each row index to its label.
pub fn rank_label(list: &TupleList) -> Permutation {
    let values: Vec<BigUint> = (0..list.len()).map(|i| list.value(i)).collect();
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
    let mut images = vec![0usize; list.len()];
    for (rank, &row) in order.iter().enumerate() {
        images[row] = rank + 1;
    }
    Permutation::from_one_line(images).expect("ranks form a permutation")
}

fn single_column_list(b: u64, column: &[u32]) -> TupleList {
    TupleList::new(b, column.iter().map(|&d| vec![d]).collect()).expect("digits below base")
}

/// The star map. Column 1 of the result is `C_1`. Column `k+1` places the
/// entries of input column `k+1` in the order given by the rank labeling
/// of the `k` result columns already placed: the entry landing in row `r`
/// is entry number `label(r)` of the input column, counting from the top.
/// A bijection; see [`star_inverse`].
pub fn star_map(array: &ColumnArray) -> ColumnArray {
    let n = array.n();
    let mut placed: Vec<Vec<u32>> = vec![array.column(1)];
    for k in 1..array.m() {
        let prefix =
            ColumnArray::from_columns(array.b(), placed.clone()).expect("digits below base");
        let label = rank_label(&prefix.tuples());
        let source = array.column(k + 1);
        placed.push((0..n).map(|r| source[label.apply(r + 1) - 1]).collect());
    }
    ColumnArray::from_columns(array.b(), placed).expect("digits below base")
}

/// Inverse of [`star_map`], recovering each original column from the rank
/// labeling of the already-known result prefix.
pub fn star_inverse(array: &ColumnArray) -> ColumnArray {
    let n = array.n();
    let mut cols: Vec<Vec<u32>> = vec![array.column(1)];
    for k in 1..array.m() {
        let label = rank_label(&array.rightmost(k).tuples());
        let starred = array.column(k + 1);
        let mut original = vec![0u32; n];
        for r in 0..n {
            original[label.apply(r + 1) - 1] = starred[r];
        }
        cols.push(original);
    }
    ColumnArray::from_columns(array.b(), cols).expect("digits below base")
}

/// The permutation trace of an array: `tau_j` is the rank labeling of the
/// bar map of the rightmost `j` columns. For every array, `tau_j` has
/// exactly `kappa_j` descents; this is asserted, not sampled.
pub fn shuffle_trace(array: &ColumnArray) -> ShuffleTrace {
    let kappa = column_carry_trace(array);
    let perms: Vec<Permutation> = (1..=array.m())
        .map(|j| rank_label(&bar_map(&array.rightmost(j))))
        .collect();
    for (idx, perm) in perms.iter().enumerate() {
        assert_eq!(
            perm.descents() as u32,
            kappa[idx],
            "descents of tau_{} disagree with carry",
            idx + 1
        );
    }
    ShuffleTrace {
        n: array.n(),
        b: array.b(),
        perms,
    }
}

/// Checks, for every prefix `A_j .. A_1` of the array's columns, that the
/// product of single-column rank labels equals the rank label of the
/// starred prefix: `label(A_j) ... label(A_1) = label((A_j .. A_1)*)`.
pub fn star_product_check(array: &ColumnArray) -> bool {
    let mut product = Permutation::identity(array.n());
    for j in 1..=array.m() {
        let column_label = rank_label(&single_column_list(array.b(), &array.column(j)));
        product = column_label.compose(&product);
        let starred = star_map(&array.rightmost(j));
        if product != rank_label(&starred.tuples()) {
            return false;
        }
    }
    true
}
