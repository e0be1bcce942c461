//! Integer side of the problem: Eisenstein integers, factorization, solution
//! counts for `k² + kl + l² = n` and the classification of critical lengths.

mod classify;
mod count;
mod eisenstein;
mod factor;

pub use classify::{
    classify_index, index_of_length, index_of_length_default, length_of_index, CriticalIndex,
    LegacyClass, LengthClass,
};
pub use count::{count_solutions, enumerate_pairs, is_perfect_square, Pair, PairClass, SolutionCount};
pub use eisenstein::{norm, EisensteinInt};
pub use factor::{factorize, IntFactorization, MAX_N};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("n = {0} is outside the supported range 1..={MAX_N}")]
    OutOfRange(u64),
    #[error("found {found} pairs for n = {n} but the counting formula predicts {expected}")]
    Inconsistent { n: u64, found: usize, expected: u64 },
}
