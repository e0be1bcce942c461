use num_integer::Roots;
use serde::{Deserialize, Serialize};

use super::factor::factorize;
use super::ArithError;

/// `z`: all integer solutions of `a² − ab + b² = n` (Eisenstein elements of norm n).
/// `n`: ordered positive solutions of `k² + kl + l² = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub z: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairClass {
    /// k = l
    S1,
    /// k ≡ l (mod 3), k ≠ l
    S2,
    /// k ≢ l (mod 3)
    S3,
}

impl PairClass {
    pub fn of(k: u64, l: u64) -> Self {
        if k == l {
            PairClass::S1
        } else if k % 3 == l % 3 {
            PairClass::S2
        } else {
            PairClass::S3
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub k: u64,
    pub l: u64,
    #[serde(rename = "s_class")]
    pub class: PairClass,
}

impl Pair {
    pub fn new(k: u64, l: u64) -> Self {
        Self { k, l, class: PairClass::of(k, l) }
    }

    pub fn norm(&self) -> u64 {
        self.k * self.k + self.k * self.l + self.l * self.l
    }

    /// `2k + l ∈ 3ℕ`, the condition for the Neumann trace to close up at both ends.
    pub fn admits_type2(&self) -> bool {
        (2 * self.k + self.l).is_multiple_of(3)
    }
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

pub fn count_solutions(n: u64) -> Result<SolutionCount, ArithError> {
    let f = factorize(n)?;
    if !f.is_representable() {
        return Ok(SolutionCount { z: 0, n: 0 });
    }
    let z = 6 * f.p_factors.iter().map(|&(_, b)| b as u64 + 1).product::<u64>();
    let ordered = z / 6 - u64::from(is_perfect_square(n));
    Ok(SolutionCount { z, n: ordered })
}

/// All pairs `k ≥ l ≥ 1` with `k² + kl + l² = n`, sorted by increasing `k`.
pub fn enumerate_pairs(n: u64) -> Result<Vec<Pair>, ArithError> {
    let count = count_solutions(n)?;
    let mut pairs = Vec::new();
    let mut l = 1u64;
    while 3 * l * l <= n {
        let disc = 4 * n - 3 * l * l;
        let d = disc.sqrt();
        if d * d == disc && d > l && (d - l).is_multiple_of(2) {
            let k = (d - l) / 2;
            if k >= l {
                pairs.push(Pair::new(k, l));
            }
        }
        l += 1;
    }
    pairs.sort_by_key(|p| p.k);

    // n = 3m² has exactly one diagonal solution, counted once in N
    let diagonal = u64::from(n.is_multiple_of(3) && is_perfect_square(n / 3));
    let expected = (count.n + diagonal) / 2;
    if pairs.len() as u64 != expected {
        return Err(ArithError::Inconsistent { n, found: pairs.len(), expected });
    }
    Ok(pairs)
}
