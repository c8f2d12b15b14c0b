//! Integer number theory used throughout the crate: primality, factorization
//! under an effort budget, modular square roots and valuations.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Outcome of a primality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Composite,
    /// Proven prime (deterministic witness set).
    Prime,
    /// Passed 64 pseudo-random Miller-Rabin rounds; not proven.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Witnesses that make Miller-Rabin deterministic for every n < 3.3e24.
const DETERMINISTIC_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const RANDOM_ROUNDS: usize = 64;
const MR_SEED: u64 = 0x6d6f_7269_6761_6c31;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'outer: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod_u64(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    for &p in &DETERMINISTIC_BASES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let strong_probable = |a: &BigUint| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    for &a in &DETERMINISTIC_BASES {
        if !strong_probable(&BigUint::from(a)) {
            return Primality::Composite;
        }
    }
    if n.bits() <= 64 {
        return Primality::Prime;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(MR_SEED);
    let two = BigUint::from(2u32);
    for _ in 0..RANDOM_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if !strong_probable(&a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime_int(n: &BigInt) -> Primality {
    match n.to_biguint() {
        Some(u) => is_prime(&u),
        None => Primality::Composite,
    }
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primes up to `bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

fn default_trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(DEFAULT_TRIAL_BOUND))
}

/// Effort limits for integer factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial division by every prime up to this bound.
    pub trial_bound: u64,
    /// Cap on Pollard-Brent iterations spent on each composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_iterations: 2_000_000,
        }
    }
}

/// A possibly partial factorization of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors with exact valuations, ascending.
    pub factors: Vec<(BigUint, u32)>,
    /// Product of the composite parts the budget could not split (1 when complete).
    pub cofactor: BigUint,
    /// Some factor is only a probable prime.
    pub probable: bool,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }
}

/// Factors `n > 0` by trial division followed by Pollard-Brent.
pub fn factorize(n: &BigUint, budget: &FactorBudget) -> Factorization {
    assert!(!n.is_zero(), "factorize(0)");
    let mut rest = n.clone();
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let owned;
    let primes: &[u64] = if budget.trial_bound <= DEFAULT_TRIAL_BOUND {
        let all = default_trial_primes();
        let end = all.partition_point(|&p| p <= budget.trial_bound);
        &all[..end]
    } else {
        owned = primes_up_to(budget.trial_bound);
        &owned
    };
    for &p in primes {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            found.push((pb, e));
        }
    }
    let mut probable = false;
    let mut cofactor = BigUint::one();
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        match is_prime(&m) {
            Primality::Prime => found.push((m, 1)),
            Primality::ProbablePrime => {
                probable = true;
                found.push((m, 1));
            }
            Primality::Composite => {
                if let Some(root) = exact_square_root(&m) {
                    stack.push(root.clone());
                    stack.push(root);
                    continue;
                }
                match pollard_brent(&m, budget.rho_iterations) {
                    Some(d) => {
                        let other = &m / &d;
                        stack.push(d);
                        stack.push(other);
                    }
                    None => cofactor *= m,
                }
            }
        }
    }
    found.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::new();
    for (p, e) in found {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Factorization {
        factors: merged,
        cofactor,
        probable,
    }
}

fn exact_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Brent's variant of Pollard rho. Returns a nontrivial divisor of the
/// composite `n`, or `None` when the iteration budget runs out.
pub fn pollard_brent(n: &BigUint, max_iterations: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut spent: u64 = 0;
    const BLOCK: u64 = 128;
    for c in 1u32.. {
        if spent >= max_iterations {
            return None;
        }
        let c = BigUint::from(c);
        let step = |v: &BigUint| (v * v + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            spent += r;
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = BLOCK.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                spent += lim;
                g = q.gcd(n);
                k += BLOCK;
            }
            r *= 2;
            if spent >= max_iterations && g.is_one() {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = step(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

/// Splits `n = p^v * rest` with `p ∤ rest`. `n` must be nonzero.
pub fn remove_factor(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return (v, rest);
        }
        rest = q;
        v += 1;
    }
}

pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    remove_factor(n, p).0
}

/// 2-adic valuation of a nonzero integer.
pub fn v2(n: &BigInt) -> u32 {
    n.magnitude().trailing_zeros().expect("v2 of zero") as u32
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let m = n.magnitude();
    let r = m.sqrt();
    &r * &r == *m
}

/// Least nonnegative residue of `a` modulo `m`.
pub fn mod_floor(a: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    a.mod_floor(&m).to_biguint().expect("nonnegative residue")
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let mi = BigInt::from(m.clone());
    let e = a.extended_gcd(&mi);
    e.gcd.is_one().then(|| mod_floor(&e.x, m))
}

/// Legendre symbol (a / p) for an odd prime p, via Euler's criterion.
pub fn legendre(a: &BigInt, p: &BigUint) -> i8 {
    let a = mod_floor(a, p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (D / 2) for a discriminant D ≡ 0, 1 mod 4.
pub fn kronecker_at_two(disc: &BigInt) -> i8 {
    let r = disc.mod_floor(&BigInt::from(8)).to_u8().unwrap();
    match r {
        1 | 7 => 1,
        3 | 5 => -1,
        _ => 0,
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: &BigInt, p: &BigUint) -> Option<BigUint> {
    let a = mod_floor(a, p);
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    if legendre(&BigInt::from(a.clone()), p) != 1 {
        return None;
    }
    let one = BigUint::one();
    let p_minus_1 = p - &one;
    let s = p_minus_1.trailing_zeros().unwrap_or(0);
    let q = &p_minus_1 >> s;
    if s == 1 {
        let e = (p + &one) >> 2;
        return Some(a.modpow(&e, p));
    }
    let mut z = BigUint::from(2u32);
    while legendre(&BigInt::from(z.clone()), p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}

/// Smallest positive quadratic non-residue modulo the odd prime `p`.
pub fn least_non_residue(p: &BigUint) -> BigUint {
    let mut t = BigUint::from(2u32);
    while legendre(&BigInt::from(t.clone()), p) != -1 {
        t += 1u32;
    }
    t
}

/// Prime divisors of a nonzero integer that fits in u64, ascending.
pub fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
