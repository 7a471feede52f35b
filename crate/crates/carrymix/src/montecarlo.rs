//! Exhaustive enumeration oracles and statistical machinery for checking
//! the carries/descents correspondence end to end.
//!
//! The two exhaustive joint laws deliberately share no code: the carries
//! side adds digit columns, the descents side composes rank labelings of
//! independent digit words. Their exact equality, and their common
//! factorization through the carries transition matrix, are the main
//! verification targets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bijections::{column_carry_trace, rank_label, ColumnArray, TupleList};
use crate::carries::{transition_matrix, ChainSpec};
use crate::error::{Error, Result};
use crate::exact::{int_pow, to_f64, Rat};
use crate::shuffling::Permutation;

/// Cap on the number of digit arrays (`b^(n*m)`) enumerated exhaustively.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Name of the deterministic generator used for every simulation.
pub const GENERATOR_NAME: &str = "chacha8";

/// The seeded generator behind all sampling in this crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random `n x m` array of base-`b` digits.
pub fn sample_columns<R: Rng + ?Sized>(n: usize, m: usize, b: u64, rng: &mut R) -> ColumnArray {
    let rows = (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(0..b) as u32).collect())
        .collect();
    ColumnArray::from_rows(b, rows).expect("sampled digits are in range")
}

/// Exact joint law of an integer trace `(i_1, .., i_m)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointLaw {
    pub n: usize,
    pub m: usize,
    pub b: u64,
    probs: BTreeMap<Vec<u32>, Rat>,
}

impl JointLaw {
    fn from_counts(
        n: usize,
        m: usize,
        b: u64,
        counts: BTreeMap<Vec<u32>, u64>,
        total: &BigInt,
    ) -> Self {
        let probs = counts
            .into_iter()
            .map(|(trace, c)| (trace, Rat::new(BigInt::from(c), total.clone())))
            .collect();
        JointLaw { n, m, b, probs }
    }

    pub fn probability(&self, trace: &[u32]) -> Rat {
        self.probs.get(trace).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.probs.iter()
    }

    pub fn total_mass(&self) -> Rat {
        self.probs.values().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Object(
            self.probs
                .iter()
                .map(|(trace, p)| (trace_key(trace), json!(p.to_string())))
                .collect(),
        )
    }
}

/// Empirical counts of an integer trace over seeded samples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EmpiricalLaw {
    pub n: usize,
    pub m: usize,
    pub b: u64,
    pub samples: u64,
    pub seed: u64,
    pub generator: &'static str,
    counts: BTreeMap<Vec<u32>, u64>,
}

impl EmpiricalLaw {
    pub fn count(&self, trace: &[u32]) -> u64 {
        self.counts.get(trace).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.counts.iter()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Object(
            self.counts
                .iter()
                .map(|(trace, c)| (trace_key(trace), json!(c)))
                .collect(),
        )
    }
}

fn trace_key(trace: &[u32]) -> String {
    trace
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_cap(n: usize, m: usize, b: u64) -> Result<()> {
    let arrays = (b as f64).powi((n * m) as i32);
    if arrays > ENUMERATION_CAP as f64 {
        return Err(Error::ResourceCap(format!(
            "b^(n*m) = {b}^{} exceeds {ENUMERATION_CAP} arrays",
            n * m
        )));
    }
    Ok(())
}

/// Walks all `len`-digit base-`b` words in odometer order, index 0 fastest.
fn for_each_word(len: usize, b: u64, mut visit: impl FnMut(&[u32])) {
    let mut word = vec![0u32; len];
    loop {
        visit(&word);
        let mut pos = 0;
        loop {
            if pos == len {
                return;
            }
            word[pos] += 1;
            if (word[pos] as u64) < b {
                break;
            }
            word[pos] = 0;
            pos += 1;
        }
    }
}

/// Exact joint law of the carries `(kappa_1, .., kappa_m)` when `n`
/// uniform `m`-digit base-`b` numbers are added, by enumerating every
/// digit array. The rightmost column varies fastest.
pub fn exhaustive_joint_carries(n: usize, m: usize, b: u64) -> Result<JointLaw> {
    check_cap(n, m, b)?;
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    // flat layout: digits of column C_1 (all rows, top to bottom) first
    for_each_word(n * m, b, |flat| {
        let cols = (0..m).map(|j| flat[j * n..(j + 1) * n].to_vec()).collect();
        let array = ColumnArray::from_columns(b, cols).expect("digits below base");
        *counts.entry(column_carry_trace(&array)).or_insert(0) += 1;
    });
    Ok(JointLaw::from_counts(
        n,
        m,
        b,
        counts,
        &int_pow(b, (n * m) as u32),
    ))
}

/// Exact joint law of the descent counts `(d(tau_1), .., d(tau_m))` where
/// `tau_j` is the product of `j` independent rank-labeled uniform digit
/// words. Never touches column addition; this is the other side of the
/// correspondence.
pub fn exhaustive_joint_descents(n: usize, m: usize, b: u64) -> Result<JointLaw> {
    check_cap(n, m, b)?;
    let mut word_labels: Vec<Permutation> = Vec::new();
    for_each_word(n, b, |word| {
        let rows = word.iter().map(|&d| vec![d]).collect();
        word_labels.push(rank_label(
            &TupleList::new(b, rows).expect("digits below base"),
        ));
    });

    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut indices = vec![0usize; m];
    let words = word_labels.len();
    loop {
        let mut tau = Permutation::identity(n);
        let trace: Vec<u32> = indices
            .iter()
            .map(|&w| {
                tau = word_labels[w].compose(&tau);
                tau.descents() as u32
            })
            .collect();
        *counts.entry(trace).or_insert(0) += 1;

        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(JointLaw::from_counts(
                    n,
                    m,
                    b,
                    counts,
                    &int_pow(b, (n * m) as u32),
                ));
            }
            indices[pos] += 1;
            if indices[pos] < words {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

/// The Markov-product law `prod_j P(i_{j-1}, i_j)` with `i_0 = 0`, built
/// from the carries transition matrix. Zero-probability traces are
/// omitted.
pub fn markov_product_law(n: usize, m: usize, b: u64) -> JointLaw {
    let p = transition_matrix(&ChainSpec::new(n, b).expect("valid chain spec"));
    let mut probs = BTreeMap::new();
    let mut trace = Vec::with_capacity(m);
    fn rec(
        p: &crate::exact::Matrix,
        state: usize,
        depth: usize,
        m: usize,
        weight: Rat,
        trace: &mut Vec<u32>,
        probs: &mut BTreeMap<Vec<u32>, Rat>,
    ) {
        if depth == m {
            probs.insert(trace.clone(), weight);
            return;
        }
        for next in 0..p.rows() {
            let step = p.get(state, next);
            if step.is_zero() {
                continue;
            }
            trace.push(next as u32);
            rec(p, next, depth + 1, m, &weight * step, trace, probs);
            trace.pop();
        }
    }
    rec(&p, 0, 0, m, Rat::one(), &mut trace, &mut probs);
    JointLaw { n, m, b, probs }
}

/// Empirical joint carry law over `samples` seeded draws.
pub fn empirical_joint_carries(
    n: usize,
    m: usize,
    b: u64,
    samples: u64,
    seed: u64,
) -> EmpiricalLaw {
    let mut rng = seeded_rng(seed);
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for _ in 0..samples {
        let array = sample_columns(n, m, b, &mut rng);
        *counts.entry(column_carry_trace(&array)).or_insert(0) += 1;
    }
    EmpiricalLaw {
        n,
        m,
        b,
        samples,
        seed,
        generator: GENERATOR_NAME,
        counts,
    }
}

/// One pooled cell of a chi-square comparison: the traces merged into it,
/// their combined expected count, and the observed count.
#[derive(Clone, Debug)]
pub struct PooledCell {
    pub traces: Vec<Vec<u32>>,
    pub expected: f64,
    pub observed: u64,
}

/// Pearson goodness-of-fit comparison of an empirical law against an exact
/// one. Adjacent cells (in lexicographic trace order) are pooled until each
/// pool has expected count at least 5; the pooling is reported so results
/// are auditable.
#[derive(Clone, Debug)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub pools: Vec<PooledCell>,
}

impl ChiSquareReport {
    pub fn to_json(&self) -> Value {
        json!({
            "statistic": self.statistic,
            "dof": self.dof,
            "pools": self.pools.iter().map(|p| json!({
                "traces": p.traces.iter().map(|t| trace_key(t)).collect::<Vec<_>>(),
                "expected": p.expected,
                "observed": p.observed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Pearson statistic of `observed` against `expected`. The supports must
/// describe the same chain, and every observed trace must be possible
/// under the exact law.
pub fn chi_square(observed: &EmpiricalLaw, expected: &JointLaw) -> Result<ChiSquareReport> {
    if (observed.n, observed.m, observed.b) != (expected.n, expected.m, expected.b) {
        return Err(Error::Invalid(
            "observed and expected laws describe different chains".into(),
        ));
    }
    for trace in observed.counts.keys() {
        if !expected.probs.contains_key(trace) {
            return Err(Error::Invalid(format!(
                "observed trace {:?} impossible under the exact law",
                trace
            )));
        }
    }
    let total = observed.samples as f64;
    let mut pools: Vec<PooledCell> = Vec::new();
    let mut current = PooledCell {
        traces: Vec::new(),
        expected: 0.0,
        observed: 0,
    };
    for (trace, prob) in expected.probs.iter() {
        current.traces.push(trace.clone());
        current.expected += to_f64(prob) * total;
        current.observed += observed.count(trace);
        if current.expected >= 5.0 {
            pools.push(std::mem::replace(
                &mut current,
                PooledCell {
                    traces: Vec::new(),
                    expected: 0.0,
                    observed: 0,
                },
            ));
        }
    }
    if !current.traces.is_empty() {
        match pools.last_mut() {
            Some(last) => {
                last.traces.extend(current.traces);
                last.expected += current.expected;
                last.observed += current.observed;
            }
            None => pools.push(current),
        }
    }
    let statistic = pools
        .iter()
        .map(|p| {
            let diff = p.observed as f64 - p.expected;
            diff * diff / p.expected
        })
        .sum();
    Ok(ChiSquareReport {
        statistic,
        dof: pools.len().saturating_sub(1),
        pools,
    })
}

/// Upper quantile of the chi-square distribution, for threshold checks.
pub fn chi_square_quantile(dof: usize, p: f64) -> f64 {
    if dof == 0 {
        return 0.0;
    }
    ChiSquared::new(dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(p)
}
