//! Signed sums of fourth roots.
//!
//! Every `n ≥ 1` factors uniquely as `q⁴·m` with `m` free of fourth powers,
//! and the numbers `⁴√m` for distinct such `m` are linearly independent over
//! the rationals. A sum `Σ ±⁴√n_j` therefore vanishes exactly when, for every
//! kernel `m`, the signed multipliers `q` attached to it cancel.

mod audit;
pub mod precise;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use audit::{audit_zero_test, ZeroAudit};
pub use search::{
    count_near_solutions, count_rs, min_nonzero_alpha, near_count_shape, rs_count_shape, Budget,
    CountQuery, MinGap, DEFAULT_BUDGET,
};

/// `n = q⁴·m` with `m` free of fourth powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Radical {
    pub n: u64,
    pub q: u64,
    pub m: u64,
}

/// Splits off the largest fourth power dividing `n`. Only primes `p` with
/// `p⁴ ≤ n` can contribute, so trial division stops at `n^{1/4}`.
pub fn kernel_decompose(n: u64) -> Radical {
    assert!(n >= 1, "kernel_decompose needs n >= 1");
    let (mut q, mut m) = (1u64, n);
    let mut p = 2u64;
    while p.checked_pow(4).is_some_and(|p4| p4 <= m) {
        let p4 = p.pow(4);
        while m % p4 == 0 {
            m /= p4;
            q *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Radical { n, q, m }
}

/// Sign vector `i ∈ {0,1}^{k−1}`; entry `j` is the sign bit of `⁴√n_{j+2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signs(pub Vec<bool>);

impl Signs {
    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| b == 1).collect())
    }

    /// All `2^len` sign vectors, in binary counting order.
    pub fn all(len: usize) -> Vec<Self> {
        (0..1u32 << len)
            .map(|mask| Self((0..len).map(|j| mask >> j & 1 == 1).collect()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `β(i) = 1 + Σ (−1)^{i_j}`.
    pub fn beta(&self) -> i64 {
        1 + self
            .0
            .iter()
            .map(|&neg| if neg { -1 } else { 1 })
            .sum::<i64>()
    }

    /// Sign of coordinate `j` (0-based over all `k` terms).
    #[inline]
    pub fn sign_of(&self, j: usize) -> i64 {
        if j > 0 && self.0[j - 1] {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&b| if b { "1" } else { "0" }).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Signs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| match t.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::OutOfRange(format!(
                    "sign entry {other:?} is not 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Integer combination of fourth roots keyed by kernel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SignedRadicalSum {
    terms: BTreeMap<u64, i64>,
}

impl SignedRadicalSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// `α(n; i) = ⁴√n₁ + Σ_j (−1)^{i_j} ⁴√n_{j+1}`.
    pub fn alpha(ns: &[u64], signs: &Signs) -> Self {
        assert_eq!(ns.len(), signs.len() + 1, "need k terms and k-1 signs");
        let mut s = Self::new();
        for (j, &n) in ns.iter().enumerate() {
            s.add(signs.sign_of(j), kernel_decompose(n));
        }
        s
    }

    pub fn add(&mut self, sign: i64, r: Radical) {
        let delta = sign * r.q as i64;
        let slot = self.terms.entry(r.m).or_insert(0);
        *slot += delta;
        if *slot == 0 {
            self.terms.remove(&r.m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn negated(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&m, &c)| (m, -c)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(&m, &c)| c as f64 * (m as f64).powf(0.25))
            .sum()
    }
}

/// Exact test of `α(n; i) = 0`.
pub fn alpha_is_zero(ns: &[u64], signs: &Signs) -> bool {
    assert!(ns.len() >= 2, "alpha_is_zero needs k >= 2");
    // Small k: linear scan beats a map.
    let mut acc: Vec<(u64, i64)> = Vec::with_capacity(ns.len());
    for (j, &n) in ns.iter().enumerate() {
        let r = kernel_decompose(n);
        let c = signs.sign_of(j) * r.q as i64;
        match acc.iter_mut().find(|(m, _)| *m == r.m) {
            Some(slot) => slot.1 += c,
            None => acc.push((r.m, c)),
        }
    }
    acc.iter().all(|&(_, c)| c == 0)
}

/// `α(n; i)` in `f64`.
#[inline]
pub fn alpha_f64(ns: &[u64], signs: &Signs) -> f64 {
    ns.iter()
        .enumerate()
        .map(|(j, &n)| signs.sign_of(j) as f64 * (n as f64).powf(0.25))
        .sum()
}
