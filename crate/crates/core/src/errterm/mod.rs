//! Riesz means `D_ρ`, the error terms `Δ` and `Δ₁`, the truncated Voronoi
//! sum `R₁(x; y)` and the remainder `R₂ = Δ₁ − R₁`.

mod calibrate;

use std::f64::consts::PI;

use crate::coeffs::CoeffTable;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::Neumaier;

pub use calibrate::{
    calibrate, calibrate_default, default_samples, fit_riesz, CalibrationConstants,
    CalibrationMethod, Fit, MIN_SAMPLES,
};

fn check_x<F: Real>(ct: &CoeffTable<F>, x: F) -> Result<usize> {
    let xf = x.wide();
    if !(xf >= 0.0) || xf > ct.len() as f64 {
        return Err(Error::OutOfRange(format!(
            "x = {xf} outside the coefficient table [0, {}]",
            ct.len()
        )));
    }
    Ok(xf.floor() as usize)
}

const FACTORIAL: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];
const BINOM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// `D_ρ(x) = (1/ρ!) Σ_{n≤x} (x−n)^ρ c_n` from the prefix sums, `ρ ≤ 3`.
pub fn riesz_mean<F: Real>(ct: &CoeffTable<F>, x: F, rho: usize) -> Result<F> {
    if rho > 3 {
        return Err(Error::OutOfRange(format!("rho must be 0..=3, got {rho}")));
    }
    let j = check_x(ct, x)?;
    let mut acc = Neumaier::<F>::new();
    for i in 0..=rho {
        let sign = if i % 2 == 0 { F::one() } else { -F::one() };
        acc.add(sign * F::of(BINOM[rho][i]) * x.powi((rho - i) as i32) * ct.prefix(i, j));
    }
    Ok(acc.value() / F::of(FACTORIAL[rho]))
}

/// `Δ(x) = D₀(x) − A·x − Z0`.
pub fn delta0<F: Real>(ct: &CoeffTable<F>, cal: &CalibrationConstants<F>, x: F) -> Result<F> {
    Ok(riesz_mean(ct, x, 0)? - cal.a * x - cal.z0)
}

/// `Δ₁(x) = D₁(x) − A·x²/2 − Z0·x`.
pub fn delta1<F: Real>(ct: &CoeffTable<F>, cal: &CalibrationConstants<F>, x: F) -> Result<F> {
    let d1 = riesz_mean(ct, x, 1)?;
    Ok(d1 - cal.a * x * x * F::of(0.5) - cal.z0 * x)
}

/// `Δ₁(j + t) = c[0] + c[1]·t + c[2]·t²` for `0 ≤ t < 1`.
///
/// `c[0] = Δ₁(j)` and `c[1] = S₀(j) − A·j − Z0`; the quadratic is exact on
/// the whole unit interval because `D₀` is constant there.
#[inline]
pub fn delta1_local<F: Real>(
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    j: usize,
) -> [F; 3] {
    let jf = F::from_usize(j).unwrap();
    let s0 = ct.prefix(0, j);
    let s1 = ct.prefix(1, j);
    let half_a = cal.a * F::of(0.5);
    let c0 = jf * s0 - s1 - half_a * jf * jf - cal.z0 * jf;
    let c1 = s0 - cal.a * jf - cal.z0;
    [c0, c1, -half_a]
}

/// `y ≤ x²`: inside the regime where the truncated expansion is stated.
pub fn truncation_in_regime(x: f64, y: f64) -> bool {
    y <= x * x
}

/// Precomputed weights `c_n n^{−7/8}` for `n ≤ y`.
#[derive(Debug, Clone)]
pub struct VoronoiSum<F> {
    weights: Vec<F>,
}

impl<F: Real> VoronoiSum<F> {
    pub fn new(ct: &CoeffTable<F>, y: f64) -> Result<Self> {
        if !(y >= 0.0) {
            return Err(Error::OutOfRange(format!("y must be nonnegative, got {y}")));
        }
        let m = y.floor() as usize;
        if m > ct.len() {
            return Err(Error::OutOfRange(format!(
                "y = {y} exceeds the coefficient table N = {}",
                ct.len()
            )));
        }
        let weights = (1..=m)
            .map(|n| ct.c(n) * F::of((n as f64).powf(-0.875)))
            .collect();
        Ok(Self { weights })
    }

    /// Number of terms `⌊y⌋`.
    pub fn terms(&self) -> usize {
        self.weights.len()
    }

    /// `R₁(x; y) = x^{9/8}/(4π²) Σ_{n≤y} c_n n^{−7/8} cos(8π(nx)^{1/4} − π/4)`.
    pub fn eval(&self, x: F) -> F {
        if self.weights.is_empty() {
            return F::zero();
        }
        let mut acc = Neumaier::<F>::new();
        for (i, &w) in self.weights.iter().enumerate() {
            acc.add(w * F::voronoi_phase(i as u64 + 1, x).cos());
        }
        x.powf(F::of(1.125)) / F::of(4.0 * PI * PI) * acc.value()
    }

    /// Largest phase frequency `d/dx 8π(nx)^{1/4}` over `x ≥ x_min`.
    pub fn max_frequency(&self, x_min: f64) -> f64 {
        2.0 * PI * (self.terms() as f64).powf(0.25) * x_min.powf(-0.75)
    }
}

/// `R₁(x; y)`.
pub fn voronoi_r1<F: Real>(ct: &CoeffTable<F>, x: F, y: f64) -> Result<F> {
    Ok(VoronoiSum::new(ct, y)?.eval(x))
}

/// `R₂(x; y) = Δ₁(x) − R₁(x; y)`.
pub fn remainder_r2<F: Real>(
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    x: F,
    y: f64,
) -> Result<F> {
    Ok(delta1(ct, cal, x)? - voronoi_r1(ct, x, y)?)
}

/// Point evaluation of all error-term quantities at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSample<F> {
    pub x: F,
    pub d0: F,
    pub d1: F,
    pub delta0: F,
    pub delta1: F,
    pub y: Option<f64>,
    pub r1: Option<F>,
    pub r2: Option<F>,
    /// `y > x²`.
    pub outside_regime: bool,
}

impl<F: Real> ErrorSample<F> {
    pub fn at(
        ct: &CoeffTable<F>,
        cal: &CalibrationConstants<F>,
        x: F,
        voronoi: Option<(f64, &VoronoiSum<F>)>,
    ) -> Result<Self> {
        let d0 = riesz_mean(ct, x, 0)?;
        let d1 = riesz_mean(ct, x, 1)?;
        let delta1 = d1 - cal.a * x * x * F::of(0.5) - cal.z0 * x;
        let (y, r1) = match voronoi {
            Some((y, v)) => (Some(y), Some(v.eval(x))),
            None => (None, None),
        };
        Ok(Self {
            x,
            d0,
            d1,
            delta0: d0 - cal.a * x - cal.z0,
            delta1,
            y,
            r1,
            r2: r1.map(|r| delta1 - r),
            outside_regime: y.is_some_and(|y| !truncation_in_regime(x.wide(), y)),
        })
    }
}
