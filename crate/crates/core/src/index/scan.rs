//! Histogram of `(exponent, index)` over random classes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::index;
use crate::error::{Error, Result};
use crate::field::FieldTower;
use crate::random::{random_class, sample_rng};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanCell {
    pub exponent: u32,
    pub index: u32,
    pub count: usize,
    /// First sample (by index) landing in this cell.
    pub example: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub field: String,
    pub n: u32,
    pub samples: usize,
    pub seed: u64,
    pub cells: Vec<ScanCell>,
    /// `max log_exp(index)` over samples with exponent > 1.
    pub max_ratio: f64,
    /// Whether every cell satisfies `exp | ind` and `rad(ind) = rad(exp)`.
    pub brauer_ok: bool,
}

fn rad(mut m: u32) -> u32 {
    crate::field::gf::prime_divisors(m as u64).into_iter().fold(1, |acc, p| {
        while m.is_multiple_of(p as u32) {
            m /= p as u32;
        }
        acc * p as u32
    })
}

/// Run `index` on `samples` random classes with `terms` symbols and entries
/// of degree at most `max_deg`. Sample `i` uses the generator seeded by
/// `(seed, i)`; `workers` threads share the samples and results are merged
/// by sample index, so the report does not depend on `workers`.
pub fn period_index_scan(
    field: &FieldTower,
    n: u32,
    terms: usize,
    samples: usize,
    seed: u64,
    max_deg: u32,
    workers: usize,
) -> Result<ScanReport> {
    field.check_roots_of_unity(n)?;
    let run = |i: usize| -> Result<(u32, u32, String)> {
        let mut rng = sample_rng(seed, i as u64);
        let a = random_class(field, n, terms, max_deg, &mut rng)?;
        let r = index(&a)?;
        Ok((r.exponent, r.index, a.to_string()))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvariantViolation(e.to_string()))?;
    let results: Vec<Result<(u32, u32, String)>> = pool.install(|| (0..samples).into_par_iter().map(run).collect());
    let mut cells: BTreeMap<(u32, u32), ScanCell> = BTreeMap::new();
    let mut max_ratio: f64 = 0.0;
    for r in results {
        let (e, i, ex) = r?;
        cells.entry((e, i)).or_insert(ScanCell { exponent: e, index: i, count: 0, example: ex }).count += 1;
        if e > 1 {
            max_ratio = max_ratio.max((i as f64).ln() / (e as f64).ln());
        }
    }
    let brauer_ok = cells.values().all(|c| c.index % c.exponent == 0 && rad(c.index) == rad(c.exponent));
    Ok(ScanReport {
        field: field.to_string(),
        n,
        samples,
        seed,
        cells: cells.into_values().collect(),
        max_ratio,
        brauer_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_across_worker_counts() {
        let k = FieldTower::parse("Fq(5,1)(t)").unwrap();
        let a = period_index_scan(&k, 2, 2, 20, 3, 3, 1).unwrap();
        let b = period_index_scan(&k, 2, 2, 20, 3, 3, 4).unwrap();
        assert_eq!(a, b);
        assert!(a.brauer_ok);
        assert_eq!(a.cells.iter().map(|c| c.count).sum::<usize>(), 20);
    }

    #[test]
    fn radical() {
        assert_eq!(rad(12), 6);
        assert_eq!(rad(1), 1);
        assert_eq!(rad(8), 2);
    }
}
