use serde::{Deserialize, Serialize};

use super::ArithError;

/// Largest index accepted by the integer routines.
pub const MAX_N: u64 = 1_000_000_000_000;

/// `n = 3^α · Π p_i^{β_i} · Π q_j^{γ_j}` with `p_i ≡ 1` and `q_j ≡ 2 (mod 3)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntFactorization {
    pub n: u64,
    pub alpha: u32,
    pub p_factors: Vec<(u64, u32)>,
    pub q_factors: Vec<(u64, u32)>,
}

impl IntFactorization {
    pub fn recompose(&self) -> u64 {
        let mut m = 3u64.pow(self.alpha);
        for &(p, e) in self.p_factors.iter().chain(&self.q_factors) {
            m *= p.pow(e);
        }
        m
    }

    /// True when every `q ≡ 2 (mod 3)` appears to an even power.
    pub fn is_representable(&self) -> bool {
        self.q_factors.iter().all(|&(_, e)| e % 2 == 0)
    }
}

/// Trial division. For `n ≤ 10¹²` anything left after dividing out primes up
/// to `10⁶` is itself prime.
pub fn factorize(n: u64) -> Result<IntFactorization, ArithError> {
    if n == 0 || n > MAX_N {
        return Err(ArithError::OutOfRange(n));
    }
    let mut m = n;
    let mut raw: Vec<(u64, u32)> = Vec::new();
    let mut take = |m: &mut u64, p: u64| {
        let mut e = 0;
        while (*m).is_multiple_of(p) {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            raw.push((p, e));
        }
    };
    take(&mut m, 2);
    take(&mut m, 3);
    let mut d = 5u64;
    while d * d <= m {
        take(&mut m, d);
        take(&mut m, d + 2);
        d += 6;
    }
    if m > 1 {
        raw.push((m, 1));
    }

    let mut f = IntFactorization { n, alpha: 0, p_factors: vec![], q_factors: vec![] };
    for (p, e) in raw {
        match p % 3 {
            0 => f.alpha = e,
            1 => f.p_factors.push((p, e)),
            _ => f.q_factors.push((p, e)),
        }
    }
    Ok(f)
}
