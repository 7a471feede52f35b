//! Riffle shuffling under the Gilbert-Shannon-Reeds model, generalized to
//! cutting the deck into `b` piles.
//!
//! A `b`-shuffle of the identity deck produces a random permutation with
//! distribution `Q_b`. Two samplers are provided: the digit construction
//! (draw one uniform base-`b` digit per card and rank-label the column),
//! which works for every `b` and shares its code path with the bijections
//! module, and the physical cut-and-interleave procedure for `b = 2`, kept
//! as an independent cross-check. `Q_b(sigma)` also has the closed form
//! `C(n + b - r, n) / b^n` with `r = 1 + descents(sigma^{-1})`.
//!
//! The position of a tracked card under repeated `b`-shuffles is itself a
//! Markov chain; [`card_tracking_matrix`] builds its transition matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::bijections::{rank_label, TupleList};
use crate::error::{Error, Result};
use crate::exact::{binomial, int_pow, Matrix, Rat};

/// Cap on the number of digit words (`b^n`) enumerated by
/// [`exhaustive_shuffle_dist`].
pub const SHUFFLE_ENUM_CAP: u64 = 10_000_000;

/// A permutation of `{1..n}` in one-line notation: `images[i-1] = sigma(i)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_one_line(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::Invalid(format!(
                    "not a permutation of 1..={n}: {images:?}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `sigma(i)`, 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of positions `i` with `sigma(i+1) < sigma(i)`.
    pub fn descents(&self) -> usize {
        self.images.windows(2).filter(|w| w[1] < w[0]).count()
    }

    /// The 1-based descent positions.
    pub fn descent_positions(&self) -> std::collections::BTreeSet<usize> {
        self.images
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1] < w[0])
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    /// Composition `(self . rhs)(i) = self(rhs(i))`: `rhs` acts first.
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        assert_eq!(
            self.n(),
            rhs.n(),
            "composing permutations of different sizes"
        );
        Permutation {
            images: rhs.images.iter().map(|&v| self.images[v - 1]).collect(),
        }
    }

    /// One-line notation with spaces, e.g. "4 5 3 2 1 6".
    pub fn one_line(&self) -> String {
        self.images
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_one_line(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Invalid(format!("bad permutation entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_one_line(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.one_line())
    }
}

/// All `n!` permutations of `{1..n}`, in lexicographic order of one-line
/// notation. Intended for exhaustive desk-scale verification.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if current.len() == n {
            out.push(Permutation {
                images: current.clone(),
            });
            return;
        }
        for v in 1..=n {
            if !used[v - 1] {
                used[v - 1] = true;
                current.push(v);
                rec(n, current, used, out);
                current.pop();
                used[v - 1] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// The permutations `tau_1 .. tau_m` reached by `m` successive `b`-shuffles
/// started at the identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShuffleTrace {
    pub n: usize,
    pub b: u64,
    pub perms: Vec<Permutation>,
}

impl ShuffleTrace {
    /// The descent counts `d(tau_1) .. d(tau_m)`.
    pub fn descent_trace(&self) -> Vec<u32> {
        self.perms.iter().map(|p| p.descents() as u32).collect()
    }
}

/// One `b`-shuffle sampled via the digit construction: draw a uniform
/// base-`b` digit per card and rank-label the resulting column. Works for
/// every `b >= 1`; `b = 1` always yields the identity.
pub fn gsr_sample<R: Rng + ?Sized>(n: usize, b: u64, rng: &mut R) -> Permutation {
    assert!(n >= 1 && b >= 1);
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|_| vec![rng.random_range(0..b) as u32])
        .collect();
    let column = TupleList::new(b, rows).expect("digits below base");
    rank_label(&column)
}

/// One ordinary riffle shuffle (`b = 2`) sampled by the physical procedure:
/// binomial cut, then drop cards from the bottom of either packet with
/// probability proportional to packet size. Independent of the digit
/// construction; the two agree in distribution.
pub fn gsr_riffle_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    assert!(n >= 1);
    let cut = (0..n).filter(|_| rng.random::<bool>()).count();
    // packet one holds cards 1..=cut; with `a` cards left its bottom card
    // is `a`. Packet two holds cut+1..=n; with `b` left its bottom card is
    // cut + b.
    let mut a = cut;
    let mut b = n - cut;
    let mut dropped = Vec::with_capacity(n);
    while a + b > 0 {
        if rng.random_range(0..a + b) < a {
            dropped.push(a);
            a -= 1;
        } else {
            dropped.push(cut + b);
            b -= 1;
        }
    }
    dropped.reverse(); // last card dropped ends up on top
    Permutation { images: dropped }
}

/// Probability of `p` under a single `b`-shuffle:
/// `C(n + b - r, n) / b^n` with `r = 1 + descents(p^{-1})`.
pub fn qb_probability(p: &Permutation, b: u64) -> Rat {
    assert!(b >= 1);
    let n = p.n();
    let r = 1 + p.inverse().descents();
    Rat::new(
        binomial(n as i64 + b as i64 - r as i64, n as i64),
        int_pow(b, n as u32),
    )
}

/// Exact probability distribution on permutations of a fixed size.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistributionTable {
    n: usize,
    probs: BTreeMap<Permutation, Rat>,
}

impl DistributionTable {
    /// Builds a table, dropping zero entries and checking total mass 1.
    pub fn new(n: usize, probs: BTreeMap<Permutation, Rat>) -> Result<Self> {
        if probs.keys().any(|p| p.n() != n) {
            return Err(Error::Shape("permutation size mismatch".into()));
        }
        let table = DistributionTable {
            n,
            probs: probs.into_iter().filter(|(_, q)| !q.is_zero()).collect(),
        };
        if !table.total_mass().is_one() {
            return Err(Error::Invalid("probabilities must sum to 1".into()));
        }
        Ok(table)
    }

    pub fn point_mass(p: Permutation) -> Self {
        let n = p.n();
        let mut probs = BTreeMap::new();
        probs.insert(p, Rat::one());
        DistributionTable { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probability(&self, p: &Permutation) -> Rat {
        self.probs.get(p).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &Rat)> {
        self.probs.iter()
    }

    pub fn total_mass(&self) -> Rat {
        self.probs.values().sum()
    }

    /// JSON object mapping one-line permutation strings to "p/q".
    pub fn to_json(&self) -> Value {
        Value::Object(
            self.probs
                .iter()
                .map(|(p, q)| (p.one_line(), json!(q.to_string())))
                .collect(),
        )
    }
}

/// Exact law of one `b`-shuffle, by enumerating all `b^n` digit words
/// through the rank labeling. Errors if `b^n` exceeds
/// [`SHUFFLE_ENUM_CAP`].
pub fn exhaustive_shuffle_dist(n: usize, b: u64) -> Result<DistributionTable> {
    assert!(n >= 1 && b >= 1);
    let words = (b as f64).powi(n as i32);
    if words > SHUFFLE_ENUM_CAP as f64 {
        return Err(Error::ResourceCap(format!(
            "b^n = {b}^{n} exceeds {SHUFFLE_ENUM_CAP} digit words"
        )));
    }
    let denom = int_pow(b, n as u32);
    let mut counts: BTreeMap<Permutation, u64> = BTreeMap::new();
    let mut word = vec![0u32; n];
    loop {
        let rows = word.iter().map(|&d| vec![d]).collect();
        let p = rank_label(&TupleList::new(b, rows).expect("digits below base"));
        *counts.entry(p).or_insert(0) += 1;
        let mut pos = 0;
        loop {
            if pos == n {
                let probs = counts
                    .into_iter()
                    .map(|(p, c)| (p, Rat::new(BigInt::from(c), denom.clone())))
                    .collect();
                return DistributionTable::new(n, probs);
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

/// Convolution of two shuffle laws: the law of `eta2 . eta1` with
/// `eta1 ~ first` and `eta2 ~ second`. Models doing one shuffle after
/// another.
pub fn convolve(
    first: &DistributionTable,
    second: &DistributionTable,
) -> Result<DistributionTable> {
    if first.n() != second.n() {
        return Err(Error::Shape(
            "convolving distributions on different deck sizes".into(),
        ));
    }
    let mut probs: BTreeMap<Permutation, Rat> = BTreeMap::new();
    for (eta1, q1) in first.iter() {
        for (eta2, q2) in second.iter() {
            let sigma = eta2.compose(eta1);
            let mass = q1 * q2;
            probs
                .entry(sigma)
                .and_modify(|q| *q += &mass)
                .or_insert(mass);
        }
    }
    DistributionTable::new(first.n(), probs)
}

/// Transition matrix for the position of one tracked card under repeated
/// `b`-shuffles of an `n`-card deck. Positions are 1-based in the
/// underlying chain; entry `(i-1, j-1)` of the returned matrix is the
/// chance of moving from position `i` to position `j`.
///
/// Row and column sums are both exactly 1, so the stationary law is
/// uniform.
pub fn card_tracking_matrix(n: usize, b: u64) -> Matrix {
    assert!(n >= 1 && b >= 1);
    let denom = int_pow(b, n as u32);
    let m = Matrix::from_fn(n, n, |i0, j0| {
        let (i, j, n) = (i0 as i64 + 1, j0 as i64 + 1, n as i64);
        let lower = 0.max(i + j - (n + 1));
        let upper = (i - 1).min(j - 1);
        let mut total = BigInt::zero();
        for h in 1..=b as i64 {
            for r in lower..=upper {
                let term = binomial(j - 1, r)
                    * binomial(n - j, i - r - 1)
                    * BigInt::from(h).pow(r as u32)
                    * BigInt::from(b as i64 - h).pow((j - 1 - r) as u32)
                    * BigInt::from(h - 1).pow((i - 1 - r) as u32)
                    * BigInt::from(b as i64 - h + 1).pow(((n - j) - (i - r - 1)) as u32);
                total += term;
            }
        }
        Rat::new(total, denom.clone())
    });
    assert!(
        m.is_doubly_stochastic(),
        "card-tracking matrix must be doubly stochastic"
    );
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{char_poly, frac, poly_from_roots, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descents_examples() {
        let p = Permutation::from_one_line(vec![5, 1, 3, 2, 4]).unwrap();
        assert_eq!(p.descents(), 2);
        assert_eq!(Permutation::identity(6).descents(), 0);
        let reverse = Permutation::from_one_line((1..=6).rev().collect()).unwrap();
        assert_eq!(reverse.descents(), 5);
    }

    #[test]
    fn permutation_validation_and_round_trip() {
        assert!(Permutation::from_one_line(vec![1, 1, 3]).is_err());
        assert!(Permutation::from_one_line(vec![0, 1]).is_err());
        let p = Permutation::parse_one_line("4 5 3 2 1 6").unwrap();
        assert_eq!(p.one_line(), "4 5 3 2 1 6");
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(6));
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let sigma = Permutation::from_one_line(vec![2, 3, 1]).unwrap();
        let tau = Permutation::from_one_line(vec![1, 3, 2]).unwrap();
        // (sigma . tau)(2) = sigma(tau(2)) = sigma(3) = 1
        assert_eq!(sigma.compose(&tau).apply(2), 1);
    }

    #[test]
    fn one_pile_shuffle_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            assert_eq!(gsr_sample(6, 1, &mut rng), Permutation::identity(6));
        }
    }

    #[test]
    fn sampling_is_deterministic_given_seed() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| gsr_sample(8, 3, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    #[test]
    fn exhaustive_two_cards() {
        let dist = exhaustive_shuffle_dist(2, 2).unwrap();
        assert_eq!(dist.probability(&Permutation::identity(2)), frac(3, 4));
        assert_eq!(
            dist.probability(&Permutation::from_one_line(vec![2, 1]).unwrap()),
            frac(1, 4)
        );
        let single = exhaustive_shuffle_dist(1, 5).unwrap();
        assert_eq!(single.probability(&Permutation::identity(1)), rat(1));
    }

    #[test]
    fn exhaustive_matches_closed_formula() {
        for n in 1..=5 {
            for b in [2u64, 3] {
                let dist = exhaustive_shuffle_dist(n, b).unwrap();
                for p in all_permutations(n) {
                    assert_eq!(
                        dist.probability(&p),
                        qb_probability(&p, b),
                        "n={n} b={b} sigma={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn qb_probability_examples() {
        assert_eq!(qb_probability(&Permutation::identity(3), 2), frac(1, 2));
        let swap = Permutation::from_one_line(vec![2, 1]).unwrap();
        assert_eq!(qb_probability(&swap, 2), frac(1, 4));
        // two descents in the inverse cannot come from one riffle
        let rev = Permutation::from_one_line(vec![3, 2, 1]).unwrap();
        assert!(qb_probability(&rev, 2).is_zero());
    }

    #[test]
    fn enumeration_cap_enforced() {
        assert!(matches!(
            exhaustive_shuffle_dist(30, 10),
            Err(Error::ResourceCap(_))
        ));
    }

    #[test]
    fn convolution_examples() {
        for n in 1..=4 {
            let q2 = exhaustive_shuffle_dist(n, 2).unwrap();
            let q4 = exhaustive_shuffle_dist(n, 4).unwrap();
            let conv = convolve(&q2, &q2).unwrap();
            assert_eq!(conv, q4, "two riffles make a 4-shuffle, n={n}");
            assert!(conv.total_mass().is_one());
            let point = DistributionTable::point_mass(Permutation::identity(n));
            assert_eq!(convolve(&point, &q2).unwrap(), q2);
        }
    }

    #[test]
    fn convolution_semigroup_mixed_bases() {
        for n in 1..=4 {
            for (a, b) in [(2u64, 3u64), (3, 2), (2, 5), (3, 3)] {
                let qa = exhaustive_shuffle_dist(n, a).unwrap();
                let qb = exhaustive_shuffle_dist(n, b).unwrap();
                let qab = exhaustive_shuffle_dist(n, a * b).unwrap();
                assert_eq!(convolve(&qa, &qb).unwrap(), qab, "n={n} {a}*{b}");
            }
        }
    }

    #[test]
    fn repeated_riffles_match_power_shuffles() {
        for n in 1..=4 {
            let q2 = exhaustive_shuffle_dist(n, 2).unwrap();
            let mut law = q2.clone();
            for h in 2..=3u32 {
                law = convolve(&law, &q2).unwrap();
                let direct = exhaustive_shuffle_dist(n, 2u64.pow(h)).unwrap();
                assert_eq!(law, direct, "n={n} h={h}");
            }
        }
    }

    #[test]
    fn card_tracking_small_matrices() {
        for b in 2..=6i64 {
            let expected = Matrix::from_rows(vec![
                vec![frac(b + 1, 2 * b), frac(b - 1, 2 * b)],
                vec![frac(b - 1, 2 * b), frac(b + 1, 2 * b)],
            ])
            .unwrap();
            assert_eq!(card_tracking_matrix(2, b as u64), expected, "n=2 b={b}");
        }
        let expected = Matrix::from_rows(vec![
            vec![frac(15, 24), frac(6, 24), frac(3, 24)],
            vec![frac(6, 24), frac(12, 24), frac(6, 24)],
            vec![frac(3, 24), frac(6, 24), frac(15, 24)],
        ])
        .unwrap();
        assert_eq!(card_tracking_matrix(3, 2), expected);
        assert_eq!(card_tracking_matrix(2, 1), Matrix::identity(2));
    }

    #[test]
    fn card_tracking_spectrum_and_semigroup() {
        for n in 1..=6usize {
            for b in [2u64, 3] {
                let q = card_tracking_matrix(n, b);
                let roots: Vec<Rat> = (0..n as u32)
                    .map(|k| Rat::new(BigInt::one(), int_pow(b, k)))
                    .collect();
                assert_eq!(
                    char_poly(&q).unwrap(),
                    poly_from_roots(&roots),
                    "n={n} b={b}"
                );
            }
        }
        for n in 1..=6usize {
            for a in [2u64, 3, 4] {
                for b in [2u64, 3, 4] {
                    let qa = card_tracking_matrix(n, a);
                    let qb = card_tracking_matrix(n, b);
                    assert_eq!(
                        qa.mul(&qb).unwrap(),
                        card_tracking_matrix(n, a * b),
                        "n={n} {a}*{b}"
                    );
                }
            }
        }
    }

    #[test]
    fn riffle_sampler_matches_digit_sampler_on_two_cards() {
        // exact check by law: both must give P(identity) = 3/4
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let samples = 40_000;
        let mut id_riffle = 0u64;
        let mut id_digits = 0u64;
        for _ in 0..samples {
            if gsr_riffle_sample(2, &mut rng) == Permutation::identity(2) {
                id_riffle += 1;
            }
            if gsr_sample(2, 2, &mut rng) == Permutation::identity(2) {
                id_digits += 1;
            }
        }
        // 4 standard errors of Bernoulli(3/4) over 40k draws
        let tol = 4.0 * (0.75f64 * 0.25 / samples as f64).sqrt();
        for count in [id_riffle, id_digits] {
            let freq = count as f64 / samples as f64;
            assert!((freq - 0.75).abs() < tol, "freq {freq}");
        }
    }
}
