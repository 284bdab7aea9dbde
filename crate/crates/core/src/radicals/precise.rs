//! Fixed-point evaluation of signed fourth-root sums with 200 fractional
//! bits.
//!
//! `⁴√n` is stored as `⌊n^{1/4}·2^200⌋`, computed exactly with big-integer
//! root extraction, so a sum of `k` terms is within `k·2^{-200}` of the true
//! value. Sums are carried in a 256-bit two's-complement accumulator.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

pub const FRACTION_BITS: u32 = 200;

/// Signed 256-bit integer, little-endian limbs, two's complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fixed256([u64; 4]);

impl Fixed256 {
    pub const ZERO: Self = Self([0; 4]);

    fn from_biguint(v: &BigUint) -> Self {
        let digits = v.to_u64_digits();
        assert!(digits.len() <= 4 && (digits.len() < 4 || digits[3] >> 63 == 0));
        let mut limbs = [0u64; 4];
        limbs[..digits.len()].copy_from_slice(&digits);
        Self(limbs)
    }

    /// `⌊n^{1/4}·2^200⌋`.
    pub fn fourth_root(n: u64) -> Self {
        let scaled = BigUint::from(n) << (4 * FRACTION_BITS) as usize;
        Self::from_biguint(&scaled.nth_root(4))
    }

    #[inline]
    pub fn wrapping_add(self, o: Self) -> Self {
        let mut out = [0u64; 4];
        let mut carry = false;
        for i in 0..4 {
            let (s1, c1) = self.0[i].overflowing_add(o.0[i]);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            out[i] = s2;
            carry = c1 || c2;
        }
        Self(out)
    }

    #[inline]
    pub fn wrapping_neg(self) -> Self {
        let inv = Self([!self.0[0], !self.0[1], !self.0[2], !self.0[3]]);
        inv.wrapping_add(Self([1, 0, 0, 0]))
    }

    #[inline]
    pub fn wrapping_sub(self, o: Self) -> Self {
        self.wrapping_add(o.wrapping_neg())
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0[3] >> 63 == 1
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_negative() {
            self.wrapping_neg()
        } else {
            self
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(self, o: Self) -> Ordering {
        let (a, b) = (self.abs(), o.abs());
        for i in (0..4).rev() {
            match a.0[i].cmp(&b.0[i]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    pub fn to_bigint(self) -> BigInt {
        let neg = self.is_negative();
        let mag = self.abs();
        let mut bytes = Vec::with_capacity(32);
        for limb in mag.0 {
            bytes.extend_from_slice(&limb.to_le_bytes());
        }
        let v = BigUint::from_bytes_le(&bytes);
        if v.is_zero() {
            BigInt::zero()
        } else {
            BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, v)
        }
    }

    /// Value `self·2^{-200}` rounded to `f64`.
    pub fn to_f64(self) -> f64 {
        let v = self.to_bigint().to_f64().unwrap_or(f64::NAN);
        v * (-(FRACTION_BITS as f64)).exp2()
    }

    /// `⌊x·2^200⌋` for finite `x` with `|x| < 2^55`, exact.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite() && x.abs() < 2f64.powi(55));
        if x == 0.0 {
            return Self::ZERO;
        }
        let bits = x.abs().to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let (mant, e2) = if exp == 0 {
            (bits & ((1 << 52) - 1), -1074)
        } else {
            ((bits & ((1 << 52) - 1)) | (1 << 52), exp - 1075)
        };
        let shift = e2 + FRACTION_BITS as i64;
        let mag = if shift >= 0 {
            BigUint::from(mant) << shift as usize
        } else {
            BigUint::from(mant) >> (-shift) as usize
        };
        let v = Self::from_biguint(&mag);
        if x < 0.0 {
            v.wrapping_neg()
        } else {
            v
        }
    }
}

impl PartialOrd for Fixed256 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed256 {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_negative(), o.is_negative()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                for i in (0..4).rev() {
                    match self.0[i].cmp(&o.0[i]) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// `⌊t·2^200⌋` for a decimal threshold `10^{-exp10}`.
pub fn threshold_pow10(exp10: u32) -> Fixed256 {
    let v = (BigUint::from(1u8) << FRACTION_BITS as usize) / BigUint::from(10u8).pow(exp10);
    Fixed256::from_biguint(&v)
}

/// Numeric zero threshold, `|α| < 10^{-30}`.
pub fn zero_threshold() -> Fixed256 {
    threshold_pow10(30)
}

/// Precomputed fixed-point fourth roots of `1..=limit`.
#[derive(Debug, Clone)]
pub struct FixedRoots {
    roots: Vec<Fixed256>,
}

impl FixedRoots {
    pub fn new(limit: u64) -> Self {
        let roots = (0..=limit).map(Fixed256::fourth_root).collect();
        Self { roots }
    }

    pub fn limit(&self) -> u64 {
        self.roots.len() as u64 - 1
    }

    #[inline]
    pub fn get(&self, n: u64) -> Fixed256 {
        match self.roots.get(n as usize) {
            Some(r) => *r,
            None => Fixed256::fourth_root(n),
        }
    }

    /// `α(n; i)` in fixed point; `minus[j]` is the sign bit of `n_{j+2}`.
    pub fn alpha(&self, ns: &[u64], minus: &[bool]) -> Fixed256 {
        let mut acc = self.get(ns[0]);
        for (n, &neg) in ns[1..].iter().zip(minus) {
            let r = self.get(*n);
            acc = if neg {
                acc.wrapping_sub(r)
            } else {
                acc.wrapping_add(r)
            };
        }
        acc
    }
}

/// `α(n; i)` at 200 fractional bits, without a root table.
pub fn alpha_fixed(ns: &[u64], minus: &[bool]) -> Fixed256 {
    let mut acc = Fixed256::fourth_root(ns[0]);
    for (n, &neg) in ns[1..].iter().zip(minus) {
        let r = Fixed256::fourth_root(*n);
        acc = if neg {
            acc.wrapping_sub(r)
        } else {
            acc.wrapping_add(r)
        };
    }
    acc
}

/// Classifies `α(n; i) = 0` numerically: `|α| < 10^{-30}` at 200 bits.
pub fn numeric_is_zero(ns: &[u64], minus: &[bool]) -> bool {
    alpha_fixed(ns, minus).cmp_abs(zero_threshold()) == Ordering::Less
}
