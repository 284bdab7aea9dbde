//! Double-double arithmetic, used only for the Voronoi phase.
//!
//! For `n·x ≈ 1e13` the phase `8π(nx)^{1/4}` is about `1e5`, so forming it in
//! plain `f64` keeps only ~11 correct digits after reduction modulo `2π`.
//! Here `(nx)^{1/4}` is carried as an unevaluated sum `hi + lo` and only the
//! fractional part of `4(nx)^{1/4}` is rounded back to `f64`.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        Self::new(s, e)
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        Self::new(p, e)
    }

    pub fn scale(self, s: f64) -> Self {
        let (p, e) = two_prod(self.hi, s);
        Self::new(p, e + self.lo * s)
    }

    /// Fourth root by one Newton step from the `f64` estimate.
    pub fn fourth_root(self) -> Self {
        let r0 = self.hi.sqrt().sqrt();
        if r0 == 0.0 {
            return Self { hi: 0.0, lo: 0.0 };
        }
        let sq = Self::from_prod(r0, r0);
        let quad = sq.mul(sq);
        let resid = quad.sub(self);
        let corr = resid.hi / (4.0 * r0 * r0 * r0);
        Self::new(r0, -corr)
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(self) -> f64 {
        let fl = self.hi.floor();
        let f = (self.hi - fl) + self.lo;
        f - f.floor()
    }
}

/// `8π(n·x)^{1/4} − π/4`, reduced into `[−π, π)`.
pub fn voronoi_phase_f64(n: u64, x: f64) -> f64 {
    debug_assert!(n < (1u64 << 53));
    let root = DoubleDouble::from_prod(n as f64, x).fourth_root();
    // 8π r = 2π·(4r): only the fractional part of 4r matters.
    let turns = root.scale(4.0).fract() - 0.125;
    let turns = if turns >= 0.5 { turns - 1.0 } else { turns };
    2.0 * PI * turns
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_root_of_exact_powers() {
        for q in [1u64, 2, 3, 17, 1000, 9000] {
            let n = (q * q * q * q) as f64;
            let r = DoubleDouble::new(n, 0.0).fourth_root();
            assert_eq!(r.hi, q as f64);
            assert!(r.lo.abs() < 1e-20 * q as f64);
        }
    }

    #[test]
    fn phase_matches_plain_f64_at_small_arguments() {
        for &(n, x) in &[(1u64, 1.0), (3, 10.5), (17, 1234.25), (100, 99.0)] {
            let plain = 8.0 * PI * ((n as f64) * x).powf(0.25) - PI / 4.0;
            let got = voronoi_phase_f64(n, x);
            assert!((got.cos() - plain.cos()).abs() < 1e-12, "{n} {x}");
            assert!((got.sin() - plain.sin()).abs() < 1e-12, "{n} {x}");
            assert!((-PI..PI).contains(&got));
        }
    }

    #[test]
    fn phase_at_fourth_powers_is_minus_quarter_pi() {
        // (nx)^{1/4} integral => 8π·r ≡ 0 (mod 2π)
        let got = voronoi_phase_f64(16, 1.0e12 / 16.0 * 81.0);
        assert!((got + PI / 4.0).abs() < 1e-12, "{got}");
    }
}
