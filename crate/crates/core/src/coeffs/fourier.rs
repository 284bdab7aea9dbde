use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::ntt;
use crate::arith::{divisor_counts, factor_with, smallest_prime_factors};
use crate::error::{Error, Result};

/// Weight and coefficient bound for a level-one Hecke eigenform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightConfig {
    pub kappa: u32,
    pub n: usize,
}

impl WeightConfig {
    pub fn new(kappa: u32, n: usize) -> Result<Self> {
        let cfg = Self { kappa, n };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The discriminant form `Δ` (weight 12).
    pub fn delta(n: usize) -> Result<Self> {
        Self::new(12, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa < 12 || self.kappa % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "kappa must be even and at least 12, got {}",
                self.kappa
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("N must be at least 1".into()));
        }
        Ok(())
    }
}

/// Exact Fourier coefficients `a(1..=N)` of a normalised eigenform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierTable {
    kappa: u32,
    a: Vec<BigInt>,
}

/// Violation counts from [`FourierTable::check_invariants`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub checked: usize,
    pub normalization: bool,
    pub multiplicativity: usize,
    pub hecke: usize,
    pub deligne: usize,
}

impl InvariantReport {
    pub fn is_clean(&self) -> bool {
        self.normalization && self.multiplicativity == 0 && self.hecke == 0 && self.deligne == 0
    }
}

impl FourierTable {
    pub(crate) fn from_parts(kappa: u32, a: Vec<BigInt>) -> Self {
        Self { kappa, a }
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `a(n)` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.a[n - 1]
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.a
    }

    /// Keeps `a(1..=n)`.
    pub fn truncated(mut self, n: usize) -> Self {
        self.a.truncate(n);
        self
    }

    /// Exhaustive exact check of normalisation, multiplicativity, the Hecke
    /// recursion at prime powers, and the Deligne bound.
    ///
    /// Multiplicativity is checked as `a(n) = a(p^e)·a(n/p^e)` with `p^e` the
    /// full power of the smallest prime of `n`; by induction on the number of
    /// distinct primes this covers every coprime split.
    pub fn check_invariants(&self) -> InvariantReport {
        let n = self.len();
        let spf = smallest_prime_factors(n);
        let d = divisor_counts(&spf);
        let weight = self.kappa - 1;
        let normalization = n >= 1 && self.a[0].is_one();

        let (mult, hecke, deligne) = (2..n + 1)
            .into_par_iter()
            .with_min_len(4096)
            .map(|m| {
                let fac = factor_with(&spf, m);
                let (p, e) = fac[0];
                let pe = p.pow(e) as usize;
                let mut out = (0usize, 0usize, 0usize);
                if pe != m && *self.get(m) != self.get(pe) * self.get(m / pe) {
                    out.0 = 1;
                }
                if fac.len() == 1 {
                    // m = p^e, e ≥ 1
                    let ap = self.get(p as usize);
                    let prev = if e == 1 {
                        BigInt::one()
                    } else {
                        self.get(m / p as usize).clone()
                    };
                    let prev2 = match e {
                        1 => BigInt::zero(),
                        2 => BigInt::one(),
                        _ => self.get(m / (p * p) as usize).clone(),
                    };
                    let want = ap * prev - BigInt::from(p).pow(weight) * prev2;
                    if e >= 2 && *self.get(m) != want {
                        out.1 = 1;
                    }
                }
                // a(m)^2 ≤ m^{κ-1} d(m)^2
                let lhs = self.get(m) * self.get(m);
                let rhs = BigInt::from(m).pow(weight) * BigInt::from(d[m]).pow(2);
                if lhs > rhs {
                    out.2 = 1;
                }
                out
            })
            .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

        InvariantReport {
            checked: n,
            normalization,
            multiplicativity: mult,
            hecke,
            deligne,
        }
    }
}

/// Coefficients of `∏(1 − q^n)^3 = Σ (−1)^k (2k+1) q^{k(k+1)/2}`, truncated to
/// `len` terms.
pub(crate) fn jacobi_cube(len: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let v = (2 * k + 1) as i64;
        out.push((e, if k % 2 == 0 { v } else { -v }));
        k += 1;
    }
    out
}

fn try_alloc<T: Clone>(n: usize, fill: T, what: &str) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(n).map_err(|e| Error::Resource {
        n,
        reason: format!("{what}: {e}"),
    })?;
    v.resize(n, fill);
    Ok(v)
}

/// Ramanujan's `τ(n)` for `n ≤ N`, from `Δ = q·(∏(1 − q^n)^3)^8`.
///
/// The sparse Jacobi series is squared directly in `i64`; the two remaining
/// squarings run modulo three NTT primes and are recombined exactly.
pub fn compute_fourier(cfg: WeightConfig) -> Result<FourierTable> {
    cfg.validate()?;
    if cfg.kappa != 12 {
        return Err(Error::UnsupportedWeight(cfg.kappa));
    }
    let len = cfg.n;
    if ntt::transform_len(len).is_none() {
        return Err(Error::Resource {
            n: len,
            reason: "exceeds the largest supported transform length".into(),
        });
    }
    let sparse = jacobi_cube(len);
    let mut square = try_alloc(len, 0i64, "Jacobi square")?;
    for (i, &(ei, vi)) in sparse.iter().enumerate() {
        for &(ej, vj) in &sparse[i..] {
            let e = ei + ej;
            if e >= len {
                break;
            }
            let prod = vi * vj;
            square[e] += if ej == ei { prod } else { 2 * prod };
        }
    }

    let residues: Vec<Vec<u64>> = (0..ntt::PRIMES.len())
        .into_par_iter()
        .map(|w| ntt::fourth_power_mod(&square, w))
        .collect();
    drop(square);

    let crt = ntt::Crt::new();
    let mut a = Vec::new();
    a.try_reserve_exact(len).map_err(|e| Error::Resource {
        n: len,
        reason: format!("coefficient table: {e}"),
    })?;
    (0..len)
        .into_par_iter()
        .with_min_len(8192)
        .map(|i| crt.signed([residues[0][i], residues[1][i], residues[2][i]]))
        .collect_into_vec(&mut a);
    Ok(FourierTable::from_parts(cfg.kappa, a))
}

/// `|a|` as `f64`, rounded to nearest.
pub(crate) fn big_to_f64(a: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let m = a.abs().to_f64().unwrap_or(f64::INFINITY);
    if a.is_negative() {
        -m
    } else {
        m
    }
}
