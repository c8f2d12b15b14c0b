//! Frobenius cycle-type statistics and the exact class distribution of `S_n`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::finfield::{cycle_type, Fp64};
use crate::intpoly::{IntPolynomial, Trinomial};

/// A partition of `n`, parts ascending.
pub type Partition = Vec<usize>;

/// Counts of Frobenius cycle types over the unramified odd primes up to a
/// bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTypeHistogram {
    pub n: usize,
    #[serde(with = "partition_map")]
    pub counts: BTreeMap<Partition, u64>,
    pub sample_size: u64,
    pub prime_bound: u64,
}

mod partition_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        partition: Partition,
        count: u64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Partition, u64>, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = m
            .iter()
            .map(|(p, &count)| Entry {
                partition: p.clone(),
                count,
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Partition, u64>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| (e.partition, e.count))
            .collect())
    }
}

impl CycleTypeHistogram {
    pub fn count(&self, partition: &[usize]) -> u64 {
        self.counts.get(partition).copied().unwrap_or(0)
    }
}

/// Cycle types of `u mod q` for every odd prime `q <= prime_bound` not
/// dividing the discriminant or the leading coefficient. `u` must be
/// integral and squarefree.
pub fn frobenius_sample_poly(u: &IntPolynomial, prime_bound: u64) -> CycleTypeHistogram {
    let n = u.degree().unwrap_or(0);
    let disc = u.discriminant().expect("nonconstant").to_integer();
    assert!(!disc.is_zero(), "polynomial has a repeated factor");
    let lc = u.coeffs().last().unwrap().clone();
    let primes: Vec<u64> = arith::primes_up_to(prime_bound)
        .into_iter()
        .filter(|&q| q > 2)
        .collect();
    let counts = primes
        .par_iter()
        .filter_map(|&q| {
            let qb = BigInt::from(q);
            if (&disc % &qb).is_zero() || (&lc % &qb).is_zero() {
                return None;
            }
            let field = Fp64::new(q).unwrap();
            let t = cycle_type(&field, &u.reduce_mod(&field)).expect("squarefree mod unramified q");
            Some(t)
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<Partition, u64>, t| {
            *acc.entry(t).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    let sample_size = counts.values().sum();
    CycleTypeHistogram {
        n,
        counts,
        sample_size,
        prime_bound,
    }
}

pub fn frobenius_sample(u: &Trinomial, prime_bound: u64) -> CycleTypeHistogram {
    frobenius_sample_poly(&u.to_poly(), prime_bound)
}

/// Partitions of `n`, parts ascending, in lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, min: usize, cur: &mut Partition, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min..=rest {
            if rest - part != 0 && rest - part < part {
                continue;
            }
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// `z_lambda = prod_j m_j! j^(m_j)`, the centralizer order.
pub fn centralizer_order(partition: &[usize]) -> BigUint {
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for &p in partition {
        *counts.entry(p).or_default() += 1;
    }
    counts.iter().fold(BigUint::one(), |acc, (&j, &m)| {
        let fact: BigUint = (1..=m).map(BigUint::from).product();
        acc * fact * BigUint::from(j).pow(m)
    })
}

pub const MAX_CLASS_DEGREE: usize = 12;

/// Proportion `1/z_lambda` of `S_n` in each cycle type, `n <= 12`.
pub fn sn_class_distribution(n: usize) -> BTreeMap<Partition, BigRational> {
    assert!(n <= MAX_CLASS_DEGREE, "degree above {MAX_CLASS_DEGREE}");
    partitions(n)
        .into_iter()
        .map(|p| {
            let z = BigInt::from(centralizer_order(&p));
            (p, BigRational::new(BigInt::one(), z))
        })
        .collect()
}

/// Empirical versus expected frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionComparison {
    /// L-infinity distance, computed exactly and rounded.
    pub max_deviation: f64,
    pub worst_partition: Option<Partition>,
    /// Expected classes never observed although the sample is at least
    /// `50 / min_frequency`.
    pub missing: Vec<Partition>,
    /// Observed cycle types with expected frequency zero.
    pub unexpected: Vec<Partition>,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

pub const DEFAULT_TOLERANCE: f64 = 0.02;

pub fn compare_distribution(
    hist: &CycleTypeHistogram,
    expected: &BTreeMap<Partition, BigRational>,
    tolerance: f64,
) -> DistributionComparison {
    assert!(hist.sample_size > 0, "empty histogram");
    let total = BigInt::from(hist.sample_size);
    let mut worst = BigRational::zero();
    let mut worst_partition = None;
    let keys: std::collections::BTreeSet<&Partition> =
        expected.keys().chain(hist.counts.keys()).collect();
    for k in keys {
        let freq = BigRational::new(BigInt::from(hist.count(k)), total.clone());
        let exp = expected.get(k).cloned().unwrap_or_else(BigRational::zero);
        let dev = (freq - exp).abs();
        if dev > worst {
            worst = dev;
            worst_partition = Some(k.clone());
        }
    }
    let min_freq = expected
        .values()
        .filter(|f| f.is_positive())
        .min()
        .cloned()
        .unwrap_or_else(BigRational::one);
    let large_enough = BigRational::from(total) * &min_freq >= BigRational::from(BigInt::from(50));
    let missing = if large_enough {
        expected
            .iter()
            .filter(|(k, f)| f.is_positive() && hist.count(k) == 0)
            .map(|(k, _)| k.clone())
            .collect()
    } else {
        Vec::new()
    };
    let unexpected = hist
        .counts
        .keys()
        .filter(|k| !expected.get(*k).is_some_and(|f| f.is_positive()))
        .cloned()
        .collect();
    let max_deviation = worst.to_f64().unwrap_or(f64::INFINITY);
    DistributionComparison {
        max_deviation,
        worst_partition,
        missing,
        unexpected,
        tolerance,
        within_tolerance: max_deviation < tolerance,
    }
}
