use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::count::{count_solutions, enumerate_pairs, Pair, PairClass};
use super::ArithError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LengthClass {
    #[serde(rename = "not_critical")]
    NotCritical,
    /// single diagonal pair
    #[serde(rename = "N^1")]
    N1,
    /// only S3 pairs
    #[serde(rename = "N^2")]
    N2,
    /// at least one S2 pair
    #[serde(rename = "N^3")]
    N3,
}

/// Older five-way split by pair count and presence of a diagonal pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegacyClass {
    C,
    #[serde(rename = "N_1")]
    N1,
    #[serde(rename = "N_2")]
    N2,
    #[serde(rename = "N_3")]
    N3,
    #[serde(rename = "N_4")]
    N4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalIndex {
    pub n: u64,
    pub pairs: Vec<Pair>,
    pub z: u64,
    #[serde(rename = "N")]
    pub n_ordered: u64,
    pub dim_m: u64,
    pub new_class: LengthClass,
    pub old_class: LegacyClass,
    pub length: f64,
}

pub fn length_of_index(n: u64) -> f64 {
    2.0 * PI * (n as f64 / 3.0).sqrt()
}

/// Integer `n ≥ 1` with `|3(L/2π)² − n| ≤ tol`, if any.
pub fn index_of_length(length: f64, tol: f64) -> Option<u64> {
    if !length.is_finite() || length <= 0.0 {
        return None;
    }
    let x = 3.0 * (length / (2.0 * PI)).powi(2);
    let n = x.round();
    if n >= 1.0 && (x - n).abs() <= tol {
        Some(n as u64)
    } else {
        None
    }
}

/// [`index_of_length`] with the relative tolerance `1e-9 · max(1, n)`.
pub fn index_of_length_default(length: f64) -> Option<u64> {
    if !length.is_finite() || length <= 0.0 {
        return None;
    }
    let x = 3.0 * (length / (2.0 * PI)).powi(2);
    index_of_length(length, 1e-9 * x.round().max(1.0))
}

pub fn classify_index(n: u64) -> Result<CriticalIndex, ArithError> {
    let count = count_solutions(n)?;
    let pairs = enumerate_pairs(n)?;

    let has_s2 = pairs.iter().any(|p| p.class == PairClass::S2);
    let has_diag = pairs.iter().any(|p| p.class == PairClass::S1);
    let new_class = match pairs.len() {
        0 => LengthClass::NotCritical,
        _ if has_s2 => LengthClass::N3,
        1 if has_diag => LengthClass::N1,
        _ => LengthClass::N2,
    };
    let old_class = match (pairs.len(), has_diag) {
        (0, _) => LegacyClass::C,
        (1, true) => LegacyClass::N1,
        (1, false) => LegacyClass::N2,
        (_, false) => LegacyClass::N3,
        (_, true) => LegacyClass::N4,
    };
    Ok(CriticalIndex {
        n,
        z: count.z,
        n_ordered: count.n,
        dim_m: count.n,
        new_class,
        old_class,
        length: length_of_index(n),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = classify_index(3).unwrap();
        assert_eq!((c.new_class, c.old_class, c.dim_m), (LengthClass::N1, LegacyClass::N1, 1));
        let c = classify_index(21).unwrap();
        assert_eq!((c.new_class, c.old_class, c.dim_m), (LengthClass::N3, LegacyClass::N2, 2));
        let c = classify_index(7).unwrap();
        assert_eq!((c.new_class, c.old_class, c.dim_m), (LengthClass::N2, LegacyClass::N2, 2));
        let c = classify_index(147).unwrap();
        assert_eq!((c.new_class, c.old_class, c.dim_m), (LengthClass::N3, LegacyClass::N4, 3));
        let c = classify_index(10).unwrap();
        assert_eq!((c.new_class, c.old_class, c.dim_m), (LengthClass::NotCritical, LegacyClass::C, 0));
    }

    #[test]
    fn length_roundtrip() {
        assert_eq!(index_of_length_default(2.0 * PI), Some(3));
        assert_eq!(index_of_length_default(1.0), None);
        for n in [1u64, 7, 21, 147, 10_000, 999_999_999] {
            assert_eq!(index_of_length_default(length_of_index(n)), Some(n));
        }
        assert_eq!(index_of_length_default(length_of_index(21) * (1.0 + 1e-6)), None);
    }

    #[test]
    fn dimension_matches_old_class() {
        for n in 1..=20_000u64 {
            let c = classify_index(n).unwrap();
            let m = c.pairs.len() as u64;
            let expect = match c.old_class {
                LegacyClass::C => 0,
                LegacyClass::N1 => 1,
                LegacyClass::N2 => 2,
                LegacyClass::N3 => 2 * m,
                LegacyClass::N4 => 2 * m - 1,
            };
            assert_eq!(c.dim_m, expect, "n = {n}");
        }
    }

    #[test]
    fn serializes_with_class_names() {
        let c = classify_index(21).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"new_class\":\"N^3\""), "{s}");
        assert!(s.contains("\"old_class\":\"N_2\""), "{s}");
        assert!(s.contains("\"s_class\":\"S2\""), "{s}");
    }
}
