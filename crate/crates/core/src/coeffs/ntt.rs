//! Truncated power-series squaring modulo three 62-bit NTT primes.
//!
//! Each prime is `c·2^27 + 1`, so transforms up to length `2^27` exist. The
//! product of the three moduli exceeds `2^185`, which bounds every integer
//! recovered by [`crt_signed`].

use std::hint::select_unpredictable;

use num_bigint::{BigInt, BigUint};

/// `(prime, primitive root)` pairs.
pub const PRIMES: [(u64, u64); 3] = [
    (4_611_686_009_971_671_041, 6),
    (4_611_686_007_555_751_937, 3),
    (4_611_686_004_066_091_009, 13),
];

pub const MAX_LOG_LEN: u32 = 27;

/// Montgomery arithmetic for an odd modulus below `2^62`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Self {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        let (d, borrow) = u.overflowing_sub(self.p);
        select_unpredictable(borrow, u, d)
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline(always)]
    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    #[inline(always)]
    fn from_mont(&self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        let (d, borrow) = s.overflowing_sub(self.p);
        select_unpredictable(borrow, s, d)
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        let (d, borrow) = a.overflowing_sub(b);
        select_unpredictable(borrow, d.wrapping_add(self.p), d)
    }

    fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut b = self.to_mont(base);
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

struct Plan {
    mont: Mont,
    len: usize,
    /// Stage-major roots: `twiddles[h + j] = ω_{2h}^j` for `j < h`, Montgomery
    /// form, so every butterfly stage reads its roots contiguously.
    twiddles: Vec<u64>,
}

impl Plan {
    fn new(p: u64, g: u64, len: usize) -> Self {
        let mont = Mont::new(p);
        let mut twiddles = vec![0u64; len.max(2)];
        let mut h = 1;
        while h < len {
            let w = mont.pow(g, (p - 1) / (2 * h) as u64);
            let mut acc = mont.to_mont(1);
            for j in 0..h {
                twiddles[h + j] = acc;
                acc = mont.mul(acc, w);
            }
            h *= 2;
        }
        Self {
            mont,
            len,
            twiddles,
        }
    }

    #[inline(always)]
    fn dif_stage(&self, a: &mut [u64], half: usize) {
        let m = &self.mont;
        let roots = &self.twiddles[half..2 * half];
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(roots) {
                let u = *x;
                let v = *y;
                *x = m.add(u, v);
                *y = m.mul(m.sub(u, v), w);
            }
        }
    }

    #[inline(always)]
    fn dit_stage(&self, a: &mut [u64], half: usize) {
        let m = &self.mont;
        let roots = &self.twiddles[half..2 * half];
        for block in a.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            let (u, v) = (lo[0], hi[0]);
            lo[0] = m.add(u, v);
            hi[0] = m.sub(u, v);
            for j in 1..half {
                let u = lo[j];
                // v·ω^{-j} = −v·ω^{h−j}
                let v = m.mul(hi[j], roots[half - j]);
                lo[j] = m.sub(u, v);
                hi[j] = m.add(u, v);
            }
        }
    }

    /// Decimation in frequency; output in bit-reversed order. Stages whose
    /// butterflies fit in [`CACHE_BLOCK`] run block by block.
    fn forward(&self, a: &mut [u64]) {
        let mut half = self.len / 2;
        while half >= 1 && 2 * half > CACHE_BLOCK {
            self.dif_stage(a, half);
            half /= 2;
        }
        if half >= 1 {
            let top = half;
            for chunk in a.chunks_mut(CACHE_BLOCK.min(self.len)) {
                let mut h = top;
                while h >= 1 {
                    self.dif_stage(chunk, h);
                    h /= 2;
                }
            }
        }
    }

    /// Decimation in time from bit-reversed input; natural-order output,
    /// unscaled. Uses `ω_{2h}^{-j} = −ω_{2h}^{h−j}`.
    fn inverse(&self, a: &mut [u64]) {
        let block = CACHE_BLOCK.min(self.len);
        for chunk in a.chunks_mut(block) {
            let mut h = 1;
            while 2 * h <= block {
                self.dit_stage(chunk, h);
                h *= 2;
            }
        }
        let mut half = block;
        while half < self.len {
            self.dit_stage(a, half);
            half *= 2;
        }
    }
}

/// Butterfly block (in elements) kept resident in cache.
const CACHE_BLOCK: usize = 1 << 14;

/// Residues (plain form, in `[0, p)`) of a series, squared and truncated to
/// its own length.
fn square_truncated(plan: &Plan, series: &[u64]) -> Vec<u64> {
    let m = &plan.mont;
    let mut buf = vec![0u64; plan.len];
    for (b, &s) in buf.iter_mut().zip(series) {
        *b = m.to_mont(s);
    }
    plan.forward(&mut buf);
    for v in buf.iter_mut() {
        *v = m.mul(*v, *v);
    }
    plan.inverse(&mut buf);
    let inv_len = m.pow(plan.len as u64, m.p - 2);
    buf.truncate(series.len());
    for v in buf.iter_mut() {
        *v = m.from_mont(m.mul(*v, inv_len));
    }
    buf
}

/// Transform length for squaring a series of `len` terms without wraparound.
pub fn transform_len(len: usize) -> Option<usize> {
    let need = (2 * len).saturating_sub(1).max(2).next_power_of_two();
    (need.trailing_zeros() <= MAX_LOG_LEN).then_some(need)
}

/// Residues of `s^4` modulo `PRIMES[which]`, truncated to `s.len()` terms,
/// where the input series is given exactly.
pub fn fourth_power_mod(series: &[i64], which: usize) -> Vec<u64> {
    let (p, g) = PRIMES[which];
    let len = transform_len(series.len()).expect("series too long for NTT primes");
    let plan = Plan::new(p, g, len);
    let residues: Vec<u64> = series
        .iter()
        .map(|&v| v.rem_euclid(p as i64) as u64)
        .collect();
    let sq = square_truncated(&plan, &residues);
    square_truncated(&plan, &sq)
}

/// Garner reconstruction of the symmetric representative in `(-P/2, P/2]`.
pub struct Crt {
    p: [u64; 3],
    inv_p0_mod_p1: u64,
    inv_p0p1_mod_p2: u64,
    modulus: BigUint,
    half: BigUint,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

impl Crt {
    pub fn new() -> Self {
        let p = [PRIMES[0].0, PRIMES[1].0, PRIMES[2].0];
        let inv_p0_mod_p1 = powmod(p[0] % p[1], p[1] - 2, p[1]);
        let p0p1_mod_p2 = mulmod(p[0] % p[2], p[1] % p[2], p[2]);
        let inv_p0p1_mod_p2 = powmod(p0p1_mod_p2, p[2] - 2, p[2]);
        let modulus = BigUint::from(p[0]) * p[1] * p[2];
        let half = &modulus >> 1;
        Self {
            p,
            inv_p0_mod_p1,
            inv_p0p1_mod_p2,
            modulus,
            half,
        }
    }

    pub fn signed(&self, r: [u64; 3]) -> BigInt {
        let [p0, p1, p2] = self.p;
        let t1 = mulmod((r[1] + p1 - r[0] % p1) % p1, self.inv_p0_mod_p1, p1);
        // x = r0 + p0·t1 + p0·p1·t2
        let partial = (r[0] as u128 + p0 as u128 * t1 as u128) % p2 as u128;
        let t2 = mulmod(
            (r[2] as u128 + p2 as u128 - partial) as u64 % p2,
            self.inv_p0p1_mod_p2,
            p2,
        );
        let low = r[0] as u128 + p0 as u128 * t1 as u128;
        let x = BigUint::from(low) + BigUint::from(p0 as u128 * p1 as u128) * t2;
        if x > self.half {
            -BigInt::from(&self.modulus - x)
        } else {
            BigInt::from(x)
        }
    }
}
