//! Exact-arithmetic library for the carries Markov chain that arises when
//! adding `n` random base-`b` numbers, the descent process of repeated
//! riffle shuffles, and the bijections identifying the two.
//!
//! Everything structural is computed over arbitrary-precision rationals
//! and compared exactly; wherever a quantity has two independent
//! derivations (a direct construction and a closed form, a matrix power
//! and a counting argument, a carry trace and a descent trace), both are
//! computed and their equality is enforced. Floating point appears only in
//! chi-square statistics and asymptotic limit comparisons.
//!
//! Module map:
//! - [`exact`]: big rationals, dense rational matrices, characteristic
//!   polynomials, total-positivity checks, binomial/Eulerian/composition
//!   counting.
//! - [`carries`]: the carries chain itself: transition matrix, Eulerian
//!   stationary vector, moments, separation and total-variation distances.
//! - [`shuffling`]: permutations, `b`-shuffle samplers and their exact
//!   law, convolution, and the card-tracking chain.
//! - [`bijections`]: digit column arrays, carry traces, the bar and star
//!   maps, rank labeling, and the carries-to-descents pipeline.
//! - [`mult`]: the carries chain of multiplication by a fixed constant.
//! - [`sections`]: sectioning of rational generating functions and its
//!   reduction to the carries matrix.
//! - [`montecarlo`]: exhaustive joint-law oracles, seeded simulation, and
//!   chi-square comparison.

pub mod bijections;
pub mod carries;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod mult;
pub mod sections;
pub mod shuffling;

pub use error::{Error, Result};
