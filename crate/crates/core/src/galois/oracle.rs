//! Exhaustive enumeration of the subgroups of `S_n` for `n <= 7`.
//!
//! Subgroups are built by adjoining elements of prime-power order one at a
//! time, which reaches every subgroup from the trivial one. Only one
//! representative per conjugacy class is extended; each new class is
//! expanded into all of its conjugates so that membership can be tested
//! against the full set.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DEGREE: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degree {0} outside the supported range 1..=7")]
    UnsupportedDegree(usize),
    #[error("the subgroup oracle runs on odd degrees 3, 5, 7; got {0}")]
    NotOddDegree(usize),
}

type Perm = Vec<u8>;

/// The elements of `S_n` in lexicographic order with the data the
/// enumeration needs.
struct SymmetricGroup {
    n: usize,
    elems: Vec<Perm>,
    index: HashMap<Perm, u16>,
}

impl SymmetricGroup {
    fn new(n: usize) -> Self {
        let mut elems = Vec::new();
        let mut p: Perm = (0..n as u8).collect();
        loop {
            elems.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u16))
            .collect();
        SymmetricGroup { n, elems, index }
    }

    fn order(&self) -> usize {
        self.elems.len()
    }

    /// Apply `a`, then `b`.
    fn compose(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.elems[a], &self.elems[b]);
        let prod: Perm = pa.iter().map(|&i| pb[i as usize]).collect();
        self.index[&prod] as usize
    }

    fn inverse(&self, a: usize) -> usize {
        let pa = &self.elems[a];
        let mut inv = vec![0u8; self.n];
        for (i, &j) in pa.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        self.index[&inv] as usize
    }

    fn cycle_type(&self, a: usize) -> Vec<usize> {
        let p = &self.elems[a];
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_prime_power(k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let p = (2..=k).find(|d| k % d == 0).unwrap();
    let mut m = k;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Box<[u64]>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)].into_boxed_slice())
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

struct Enumerator {
    group: SymmetricGroup,
    /// One generator per cyclic subgroup of prime-power order.
    candidates: Vec<usize>,
    /// `right_mul[k][e]` = `e` followed by `candidates[k]`.
    right_mul: Vec<Vec<u16>>,
    /// Conjugation by each adjacent transposition, as maps on indices.
    adjacent_conj: Vec<Vec<u16>>,
}

impl Enumerator {
    fn new(n: usize) -> Self {
        let group = SymmetricGroup::new(n);
        let order = group.order();
        let mut candidates = Vec::new();
        for x in 1..order {
            let ord = group.cycle_type(x).iter().fold(1, |l, &c| l / gcd(l, c) * c);
            if !is_prime_power(ord) {
                continue;
            }
            // keep x only if it is the least-index generator of <x>
            let mut power = x;
            let mut minimal = true;
            for k in 2..ord {
                power = group.compose(power, x);
                if gcd(k, ord) == 1 && power < x {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                candidates.push(x);
            }
        }
        let right_mul = candidates
            .iter()
            .map(|&c| (0..order).map(|e| group.compose(e, c) as u16).collect())
            .collect();
        let adjacent_conj = (0..n.saturating_sub(1))
            .map(|i| {
                let mut t: Perm = (0..n as u8).collect();
                t.swap(i, i + 1);
                let t = group.index[&t] as usize;
                let t_inv = group.inverse(t);
                (0..order)
                    .map(|e| group.compose(group.compose(t_inv, e), t) as u16)
                    .collect()
            })
            .collect();
        Enumerator {
            group,
            candidates,
            right_mul,
            adjacent_conj,
        }
    }

    /// Closure of `start` (a subgroup, as element list and bitset) under
    /// right multiplication by the given candidate generators.
    fn close(&self, start: &[usize], gens: &[usize]) -> (Vec<usize>, Bits) {
        let mut bits = Bits::new(self.group.order());
        let mut elems = Vec::with_capacity(start.len() * 2);
        for &e in start {
            bits.set(e);
            elems.push(e);
        }
        let mut i = 0;
        while i < elems.len() {
            let e = elems[i];
            for &g in gens {
                let f = self.right_mul[g][e] as usize;
                if !bits.get(f) {
                    bits.set(f);
                    elems.push(f);
                }
            }
            i += 1;
        }
        (elems, bits)
    }

    /// All conjugates of a subgroup.
    fn conjugates(&self, bits: &Bits) -> Vec<Bits> {
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(bits.clone());
        queue.push_back(bits.clone());
        while let Some(h) = queue.pop_front() {
            let elems: Vec<usize> = h.ones().collect();
            for conj in &self.adjacent_conj {
                let mut image = Bits::new(self.group.order());
                for &e in &elems {
                    image.set(conj[e] as usize);
                }
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Per-subgroup facts used by the oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSummary {
    pub order: usize,
    pub transitive: bool,
    pub has_transposition: bool,
    pub has_long_cycle: bool,
}

/// Result of a full enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupEnumeration {
    pub n: usize,
    pub subgroup_count: usize,
    pub conjugacy_classes: usize,
    pub transitive_subgroups: usize,
    /// Transitive subgroups containing an `(n-1)`-cycle and a transposition.
    pub hypothesis_subgroups: usize,
    /// Orders of the hypothesis subgroups (each must be `n!`).
    pub hypothesis_orders: Vec<usize>,
}

/// Enumerates every subgroup of `S_n`, `1 <= n <= 7`.
pub fn enumerate_subgroups(n: usize) -> Result<SubgroupEnumeration, OracleError> {
    if n == 0 || n > MAX_DEGREE {
        return Err(OracleError::UnsupportedDegree(n));
    }
    let en = Enumerator::new(n);
    let order = en.group.order();
    let mut all: HashSet<Bits> = HashSet::new();
    let mut reps: VecDeque<(Vec<usize>, Vec<usize>)> = VecDeque::new();

    let trivial = en.close(&[0], &[]);
    all.insert(trivial.1.clone());
    reps.push_back((trivial.0, Vec::new()));
    let mut classes = 1;
    while let Some((elems, gens)) = reps.pop_front() {
        let members: HashSet<usize> = elems.iter().copied().collect();
        for k in 0..en.candidates.len() {
            if members.contains(&en.candidates[k]) {
                continue;
            }
            let mut new_gens = gens.clone();
            new_gens.push(k);
            let (k_elems, k_bits) = en.close(&elems, &new_gens);
            if all.contains(&k_bits) {
                continue;
            }
            classes += 1;
            for c in en.conjugates(&k_bits) {
                all.insert(c);
            }
            reps.push_back((k_elems, new_gens));
        }
    }

    let types: Vec<Vec<usize>> = (0..order).map(|e| en.group.cycle_type(e)).collect();
    let transposition: Vec<usize> = std::iter::repeat(1).take(n.saturating_sub(2)).chain([2]).collect();
    let long_cycle: Vec<usize> = if n == 2 { vec![1, 1] } else { vec![1, n - 1] };
    let mut transitive = 0;
    let mut hypothesis_orders = Vec::new();
    for h in &all {
        let s = summarize(&en.group, h, &types, &transposition, &long_cycle);
        if s.transitive {
            transitive += 1;
            if s.has_transposition && s.has_long_cycle {
                hypothesis_orders.push(s.order);
            }
        }
    }
    hypothesis_orders.sort_unstable();
    Ok(SubgroupEnumeration {
        n,
        subgroup_count: all.len(),
        conjugacy_classes: classes,
        transitive_subgroups: transitive,
        hypothesis_subgroups: hypothesis_orders.len(),
        hypothesis_orders,
    })
}

fn summarize(
    group: &SymmetricGroup,
    h: &Bits,
    types: &[Vec<usize>],
    transposition: &[usize],
    long_cycle: &[usize],
) -> SubgroupSummary {
    let mut orbit = vec![false; group.n];
    let mut order = 0;
    let mut has_transposition = false;
    let mut has_long_cycle = false;
    for e in h.ones() {
        order += 1;
        orbit[group.elems[e][0] as usize] = true;
        has_transposition |= types[e] == transposition;
        has_long_cycle |= types[e] == long_cycle;
    }
    SubgroupSummary {
        order,
        transitive: orbit.iter().all(|&b| b),
        has_transposition,
        has_long_cycle,
    }
}

/// Outcome of the oracle for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: usize,
    pub group_order: usize,
    /// Every transitive subgroup with an `(n-1)`-cycle and a transposition
    /// is all of `S_n`.
    pub property_holds: bool,
    pub enumeration: SubgroupEnumeration,
}

/// Checks, by enumerating all subgroups of `S_n` for odd `n <= 7`, that a
/// transitive subgroup containing an `(n-1)`-cycle and a transposition is
/// the whole group.
pub fn subgroup_oracle(n: usize) -> Result<OracleReport, OracleError> {
    if n > MAX_DEGREE {
        return Err(OracleError::UnsupportedDegree(n));
    }
    if n < 3 || n % 2 == 0 {
        return Err(OracleError::NotOddDegree(n));
    }
    let enumeration = enumerate_subgroups(n)?;
    let group_order: usize = (1..=n).product();
    let property_holds = !enumeration.hypothesis_orders.is_empty()
        && enumeration.hypothesis_orders.iter().all(|&o| o == group_order);
    Ok(OracleReport {
        n,
        group_order,
        property_holds,
        enumeration,
    })
}
