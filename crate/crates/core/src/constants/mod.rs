//! Relation series `s_{k;l}`, the constants `B_k`, the second-moment
//! constant and the main-term predictions.

mod series;
mod solutions;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::coeffs::CoeffTable;
use crate::error::{Error, Result};
use crate::radicals::Signs;
use crate::scalar::Real;
use crate::sum::Neumaier;

pub use solutions::{kernel_solutions, solution_weight};

/// A truncated series with its truncation point and a tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue<F> {
    pub value: F,
    pub truncation: usize,
    pub tail_estimate: F,
    pub term_count: u64,
}

/// Exponent `ε'` of the proxy bound `c_n² ≤ M·n^{ε'}`.
pub const TAIL_EPS: f64 = 0.1;

fn check_k_l(k: usize, l: usize) -> Result<()> {
    if !(3..=5).contains(&k) {
        return Err(Error::OutOfRange(format!("k must be 3, 4 or 5, got {k}")));
    }
    if l == 0 || l >= k {
        return Err(Error::OutOfRange(format!(
            "l must lie in 1..={}, got {l}",
            k - 1
        )));
    }
    Ok(())
}

fn check_n<F: Real>(n: usize, ct: &CoeffTable<F>) -> Result<()> {
    if n == 0 || n > ct.len() {
        return Err(Error::OutOfRange(format!(
            "truncation {n} outside the coefficient table 1..={}",
            ct.len()
        )));
    }
    Ok(())
}

/// `w(n) = c_n·n^{−7/8}`.
#[inline]
pub fn weight<F: Real>(ct: &CoeffTable<F>, n: usize) -> F {
    ct.c(n) * F::of((n as f64).powf(-0.875))
}

/// Bound on `Σ_{n>N} c_n² n^{−7/4}`: `M·N^{−(3/4−ε')}/(3/4−ε')` with
/// `M = max_{n≤N} c_n² n^{−ε'}`.
pub fn pair_tail<F: Real>(n: usize, ct: &CoeffTable<F>) -> F {
    let m = (1..=n)
        .map(|i| {
            let c = ct.c(i).wide();
            c * c * (i as f64).powf(-TAIL_EPS)
        })
        .fold(0.0f64, f64::max);
    let e = 0.75 - TAIL_EPS;
    F::of(m * (n as f64).powf(-e) / e)
}

/// `s_{k;l}` truncated at `n_j ≤ N`.
///
/// The tail bounds the part of the diagonal family (blocks `⁴√a = ⁴√b`)
/// with some `n_j > N`; structures without such a block report zero.
pub fn s_kl<F: Real>(k: usize, l: usize, n: usize, ct: &CoeffTable<F>) -> Result<SeriesValue<F>> {
    check_k_l(k, l)?;
    check_n(n, ct)?;
    let w = |i: usize| weight(ct, i);
    let sums = series::weighted_sums(k, l, n, &w);
    let (value, tail) = series::combine(k, l, &sums, pair_tail(n, ct));
    Ok(SeriesValue {
        value,
        truncation: n,
        tail_estimate: tail,
        term_count: series::solution_count(k, l, n) as u64,
    })
}

/// `cos(π·j/4)` from the table of its eight values.
pub fn cos_quarter_pi(j: i64) -> f64 {
    const TABLE: [f64; 8] = [
        1.0,
        FRAC_1_SQRT_2,
        0.0,
        -FRAC_1_SQRT_2,
        -1.0,
        -FRAC_1_SQRT_2,
        0.0,
        FRAC_1_SQRT_2,
    ];
    TABLE[j.rem_euclid(8) as usize]
}

/// Weight of `s_{k;l}` in `B_k`: `C(k−1, l)·cos(π(k−2l)/4)`.
pub fn b_weight(k: usize, l: usize) -> f64 {
    series::binom(k - 1, l) as f64 * cos_quarter_pi(k as i64 - 2 * l as i64)
}

/// `B_k = Σ_l C(k−1,l)·s_{k;l}·cos(π(k−2l)/4)`, from precomputed `s_{k;l}`
/// for `l = 1..k−1`.
pub fn b_k_from<F: Real>(k: usize, s: &[SeriesValue<F>]) -> Result<SeriesValue<F>> {
    if s.len() + 1 != k {
        return Err(Error::OutOfRange(format!(
            "B_{k} needs {} series values",
            k - 1
        )));
    }
    let mut v = Neumaier::<F>::new();
    let mut tail = F::zero();
    for (i, sv) in s.iter().enumerate() {
        let wgt = F::of(b_weight(k, i + 1));
        v.add(wgt * sv.value);
        tail += wgt.abs() * sv.tail_estimate;
    }
    Ok(SeriesValue {
        value: v.value(),
        truncation: s[0].truncation,
        tail_estimate: tail,
        term_count: s.iter().map(|x| x.term_count).sum(),
    })
}

/// `B_k` truncated at `N`, with the `s_{k;l}` it was built from.
pub fn b_k<F: Real>(
    k: usize,
    n: usize,
    ct: &CoeffTable<F>,
) -> Result<(SeriesValue<F>, Vec<SeriesValue<F>>)> {
    check_k_l(k, 1)?;
    let s: Vec<SeriesValue<F>> = (1..k).map(|l| s_kl(k, l, n, ct)).collect::<Result<_>>()?;
    Ok((b_k_from(k, &s)?, s))
}

/// `B_k` as a sum over sign vectors `i` of `cos(π·β(i)/4)` times the
/// relation series with `i`'s sign pattern.
pub fn b_k_by_signs<F: Real>(k: usize, s: &[SeriesValue<F>]) -> F {
    let mut v = Neumaier::<F>::new();
    for signs in Signs::all(k - 1) {
        let plus = k - signs.0.iter().filter(|&&b| b).count();
        if plus == k {
            continue;
        }
        v.add(F::of(cos_quarter_pi(signs.beta())) * s[plus - 1].value);
    }
    v.value()
}

/// `Σ_{n≤N} c_n² n^{−7/4}`.
pub fn second_moment_constant<F: Real>(n: usize, ct: &CoeffTable<F>) -> Result<SeriesValue<F>> {
    check_n(n, ct)?;
    let mut acc = Neumaier::<F>::new();
    for i in 1..=n {
        let w = weight(ct, i);
        acc.add(w * w);
    }
    Ok(SeriesValue {
        value: acc.value(),
        truncation: n,
        tail_estimate: pair_tail(n, ct),
        term_count: n as u64,
    })
}

/// Main-term data for `∫Δ₁^k`, `k = 3, 4, 5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremConstants<F> {
    pub k: usize,
    pub b_k: F,
    /// `B_k/((8+9k)·2^{3k−4}·π^{2k})`.
    pub coefficient: F,
    /// `1 + 9k/8`.
    pub exponent: F,
    /// Saving exponent `δ_k` as `(numerator, denominator)`.
    pub delta_k: (u32, u32),
}

impl<F: Real> TheoremConstants<F> {
    pub fn new(k: usize, b_k: F) -> Result<Self> {
        check_k_l(k, 1)?;
        let delta_k = match k {
            3 => (3, 62),
            4 => (3, 256),
            _ => (1, 680),
        };
        Ok(Self {
            k,
            b_k,
            coefficient: b_k / F::of(Self::rational_denominator(k) as f64 * PI.powi(2 * k as i32)),
            exponent: F::of(1.0 + 9.0 * k as f64 / 8.0),
            delta_k,
        })
    }

    /// `(8+9k)·2^{3k−4}`: 1120, 11264, 108544.
    pub fn rational_denominator(k: usize) -> u64 {
        (8 + 9 * k as u64) << (3 * k - 4)
    }

    /// `coefficient·T^{exponent}`, the stated form of the main term.
    pub fn stated(&self, t: F) -> F {
        self.coefficient * t.powf(self.exponent)
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta_k.0 as f64 / self.delta_k.1 as f64
    }
}

/// `B_k/((2π)^{2k}·2^{k−1}) · ∫_{T₁}^{T₂} x^{9k/8} dx`.
pub fn theorem_prediction<F: Real>(k: usize, b_k: F, t1: F, t2: F) -> Result<F> {
    if k == 0 || !(t1 > F::zero() && t2 > t1) || !t2.is_finite() {
        return Err(Error::OutOfRange(format!(
            "need 0 < T1 < T2, got [{t1}, {t2}]"
        )));
    }
    let e = 1.0 + 9.0 * k as f64 / 8.0;
    let norm = (2.0 * PI).powi(2 * k as i32) * 2f64.powi(k as i32 - 1) * e;
    let ef = F::of(e);
    Ok(b_k / F::of(norm) * (t2.powf(ef) - t1.powf(ef)))
}

/// `(2/13)(2π)^{−4}·C·(T₂^{13/4} − T₁^{13/4})`: the second-moment main term
/// over `[T₁, T₂]`.
pub fn second_moment_prediction<F: Real>(constant: F, t1: F, t2: F) -> F {
    let e = F::of(3.25);
    F::of(2.0 / 13.0 / (2.0 * PI).powi(4)) * constant * (t2.powf(e) - t1.powf(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{compute_coeffs, compute_fourier, WeightConfig};
    use std::sync::OnceLock;

    fn table() -> &'static CoeffTable<f64> {
        static T: OnceLock<CoeffTable<f64>> = OnceLock::new();
        T.get_or_init(|| {
            let ft = compute_fourier(WeightConfig::delta(2000).unwrap()).unwrap();
            compute_coeffs(&ft).unwrap()
        })
    }

    #[test]
    fn s32_at_16_is_single_solution() {
        let t = table();
        let s = s_kl(3, 2, 16, t).unwrap();
        assert_eq!(s.term_count, 1);
        let want = t.c(1) * t.c(1) * t.c(16) / 16f64.powf(0.875);
        assert!((s.value - want).abs() < 1e-15 * want);
        assert_eq!(s.tail_estimate, 0.0);
        let s31 = s_kl(3, 1, 16, t).unwrap();
        assert!((s31.value - want).abs() < 1e-15 * want);
    }

    #[test]
    fn b3_b4_phase_identities() {
        let t = table();
        let (b3, s3) = b_k(3, 16, t).unwrap();
        let want = 1.5 * 2f64.sqrt() * t.c(16) / 16f64.powf(0.875);
        assert!((b3.value - want).abs() < 1e-14 * want);
        assert!((b3.value - 1.5 * 2f64.sqrt() * s3[0].value).abs() < 1e-15);
        let (b4, s4) = b_k(4, 300, t).unwrap();
        assert!((b4.value - 3.0 * s4[1].value).abs() <= 1e-14 * b4.value);
        let (b5, s5) = b_k(5, 100, t).unwrap();
        let want5 = FRAC_1_SQRT_2 * (10.0 * s5[1].value - 5.0 * s5[0].value);
        assert!((b5.value - want5).abs() <= 1e-12 * want5.abs().max(1.0));
    }

    #[test]
    fn sign_route_matches() {
        let t = table();
        for k in 3..=5 {
            let (b, s) = b_k(k, 120, t).unwrap();
            let alt = b_k_by_signs(k, &s);
            assert!(
                (b.value - alt).abs() <= 1e-13 * b.value.abs().max(1.0),
                "k={k}"
            );
        }
    }

    #[test]
    fn symmetric_in_l() {
        let t = table();
        for (k, l) in [(3, 1), (4, 1), (5, 1), (5, 2)] {
            for n in [50, 81, 700] {
                let a = s_kl(k, l, n, t).unwrap();
                let b = s_kl(k, k - l, n, t).unwrap();
                assert_eq!(a.term_count, b.term_count);
                assert!((a.value - b.value).abs() <= 1e-14 * a.value.max(1e-300));
            }
        }
    }

    #[test]
    fn s42_at_81_contains_nondiagonal_solution() {
        let sols = kernel_solutions(4, 2, 81);
        assert!(sols.contains(&vec![1, 81, 16, 16]));
        let t = table();
        let s = s_kl(4, 2, 81, t).unwrap();
        assert_eq!(s.term_count as usize, sols.len());
        let direct: f64 = sols.iter().map(|v| solution_weight(t, v)).sum();
        assert!((s.value - direct).abs() < 1e-13 * direct);
    }

    #[test]
    fn b4_diagonal_lower_bound() {
        let t = table();
        for n in [10, 100, 2000] {
            let (b4, _) = b_k(4, n, t).unwrap();
            let m2 = second_moment_constant(n, t).unwrap().value;
            let w4: f64 = (1..=n).map(|i| weight(t, i).powi(4)).sum();
            assert!(b4.value / 3.0 >= (2.0 * m2 * m2 - w4) * (1.0 - 1e-14));
        }
    }

    #[test]
    fn second_moment_examples() {
        let t = table();
        assert_eq!(second_moment_constant(1, t).unwrap().value, 1.0);
        let v = second_moment_constant(2, t).unwrap().value;
        assert!((v - (1.0 + (9.0f64 / 32.0).powi(2) * 2f64.powf(-1.75))).abs() < 1e-15);
        assert!(second_moment_constant(2001, t).is_err());
        assert!(s_kl(3, 1, 2001, t).is_err());
        assert!(s_kl(6, 1, 10, t).is_err());
        assert!(s_kl(4, 4, 10, t).is_err());
    }

    #[test]
    fn theorem_constants() {
        for (k, den, exp) in [(3, 1120, 4.375), (4, 11264, 5.5), (5, 108544, 6.625)] {
            assert_eq!(TheoremConstants::<f64>::rational_denominator(k), den);
            let tc = TheoremConstants::new(k, 1.0f64).unwrap();
            assert_eq!(tc.exponent, exp);
            // stated coefficient equals the ∫_0^T form of the main term
            let via = theorem_prediction(k, 1.0, 1e-30, 10.0).unwrap();
            assert!((tc.stated(10.0) - via).abs() < 1e-13 * via);
            let dy = theorem_prediction(k, 1.0, 10.0, 20.0).unwrap();
            assert!((dy - tc.stated(10.0) * (2f64.powf(exp) - 1.0)).abs() < 1e-12 * dy);
        }
        assert_eq!(TheoremConstants::new(3, 1.0f64).unwrap().delta_k, (3, 62));
        assert!(theorem_prediction(3, 1.0f64, 2.0, 1.0).is_err());
        assert!(theorem_prediction(3, 1.0f64, 0.0, 1.0).is_err());
    }

    #[test]
    fn cosine_table() {
        for j in -9..9 {
            assert!((cos_quarter_pi(j) - (PI * j as f64 / 4.0).cos()).abs() < 1e-15);
        }
        assert_eq!(b_weight(4, 1), 0.0);
        assert_eq!(b_weight(4, 2), 3.0);
    }
}
