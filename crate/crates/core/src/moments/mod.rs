//! Moments of `Δ₁`, `R₁` and `R₂` over ranges of `x`.
//!
//! On `[j, j+1)` the error term is the quadratic of
//! [`delta1_local`](crate::errterm::delta1_local), so `Δ₁^k` is a
//! polynomial of degree `2k` there and a `(k+2)`-point Gauss rule integrates
//! it exactly. `|Δ₁|^k` is split at the real roots of the quadratic first.

mod cheb;
mod oscillatory;

use std::f64::consts::PI;
use std::time::Instant;

use crate::coeffs::CoeffTable;
use crate::constants::{
    second_moment_constant, second_moment_prediction, theorem_prediction, TheoremConstants,
};
use crate::error::{Error, Result};
use crate::errterm::{delta1_local, CalibrationConstants, VoronoiSum};
use crate::quadrature::{integrate_unit_pieces, GaussLegendre};
use crate::scalar::Real;

pub use cheb::{ChebBlock, R1Interpolant};
pub use oscillatory::{oscillatory_bound, OscillatoryEstimate, Trig};

/// Gauss nodes per unit interval for `R₁`/`R₂` integrands.
pub const OSC_NODES: usize = 8;

/// One computed integral with its main-term prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport<F> {
    pub k: usize,
    pub t1: f64,
    pub t2: f64,
    pub y: Option<f64>,
    /// `∫ f^k`.
    pub integral: F,
    /// `∫ |f|^k`.
    pub abs_integral: F,
    pub prediction: Option<F>,
    pub ratio: Option<F>,
    /// Gauss nodes per unit interval.
    pub nodes: usize,
    pub seconds: f64,
    /// Named diagnostics in a fixed order.
    pub extras: Vec<(&'static str, f64)>,
    pub warnings: Vec<String>,
}

impl<F: Real> MomentReport<F> {
    fn new(k: usize, t1: f64, t2: f64, nodes: usize) -> Self {
        Self {
            k,
            t1,
            t2,
            y: None,
            integral: F::zero(),
            abs_integral: F::zero(),
            prediction: None,
            ratio: None,
            nodes,
            seconds: 0.0,
            extras: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn set_prediction(&mut self, p: F) {
        self.prediction = Some(p);
        self.ratio = (p != F::zero()).then(|| self.integral / p);
    }

    pub fn extra(&self, key: &str) -> Option<f64> {
        self.extras.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }
}

fn check_range<F: Real>(ct: &CoeffTable<F>, t1: f64, t2: f64) -> Result<()> {
    if !(t1 >= 1.0 && t2 > t1 && t2 <= ct.len() as f64) {
        return Err(Error::OutOfRange(format!(
            "need 1 <= T1 < T2 <= N = {}, got [{t1}, {t2}]",
            ct.len()
        )));
    }
    Ok(())
}

fn check_power(k: usize) -> Result<()> {
    if !(1..=6).contains(&k) {
        return Err(Error::OutOfRange(format!(
            "power k must be in 1..=6, got {k}"
        )));
    }
    Ok(())
}

/// Real roots of `c0 + c1 t + c2 t²` strictly inside `(lo, hi)`, sorted.
fn roots_inside(c: [f64; 3], lo: f64, hi: f64) -> ([f64; 2], usize) {
    let [c0, c1, c2] = c;
    let mut out = [0.0; 2];
    let mut n = 0;
    let mut push = |r: f64| {
        if r > lo && r < hi {
            out[n] = r;
            n += 1;
        }
    };
    if c2 == 0.0 {
        if c1 != 0.0 {
            push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let sign = if c1 >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (c1 + sign * disc.sqrt());
            if q != 0.0 {
                push(q / c2);
                push(c0 / q);
            } else {
                push(0.0);
            }
        }
    }
    if n == 2 && out[0] > out[1] {
        out.swap(0, 1);
    }
    (out, n)
}

/// `[∫ p^k, ∫ |p|^k]` over `[lo, hi]` for the local quadratic `p`.
#[inline]
fn quad_power<F: Real>(rule: &GaussLegendre<F>, c: [F; 3], k: usize, lo: F, hi: F) -> [F; 2] {
    let p = |t: F| c[0] + t * (c[1] + t * c[2]);
    let signed = rule.integrate(lo, hi, |t| p(t).powi(k as i32));
    if k % 2 == 0 {
        return [signed, signed];
    }
    let cw = [c[0].wide(), c[1].wide(), c[2].wide()];
    let (r, n) = roots_inside(cw, lo.wide(), hi.wide());
    let mut abs = F::zero();
    let mut a = lo;
    for &root in r.iter().take(n).chain(std::iter::once(&hi.wide())) {
        let b = F::of(root);
        abs += rule.integrate(a, b, |t| p(t).powi(k as i32)).abs();
        a = b;
    }
    [signed, abs]
}

/// `∫_{T1}^{T2} Δ₁^k` and `∫ |Δ₁|^k`, exact up to rounding.
pub fn integrate_delta1_power<F: Real>(
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    k: usize,
    t1: f64,
    t2: f64,
) -> Result<MomentReport<F>> {
    check_power(k)?;
    check_range(ct, t1, t2)?;
    let start = Instant::now();
    let nodes = k + 2;
    let rule = GaussLegendre::<F>::new(nodes);
    let [signed, abs] = integrate_unit_pieces::<F, 2>(t1, t2, |j, lo, hi| {
        quad_power(&rule, delta1_local(ct, cal, j), k, lo, hi)
    });
    let mut r = MomentReport::new(k, t1, t2, nodes);
    r.integral = signed;
    r.abs_integral = abs;
    r.seconds = start.elapsed().as_secs_f64();
    Ok(r)
}

/// `∫Δ₁^k` against `B_k/((2π)^{2k}2^{k−1})·∫_{T1}^{T2} x^{9k/8}`.
///
/// Extras carry the interval coefficient, the stated `[1, T]` coefficient
/// `B_k/((8+9k)2^{3k−4}π^{2k})`, the literal value `coefficient·T1^{1+9k/8}`
/// and `δ_k`. A nonpositive `B_k` leaves the ratio unset.
pub fn verify_theorem<F: Real>(
    k: usize,
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    b_k: F,
    t1: f64,
    t2: f64,
) -> Result<MomentReport<F>> {
    let tc = TheoremConstants::new(k, b_k)?;
    let mut r = integrate_delta1_power(ct, cal, k, t1, t2)?;
    let pred = theorem_prediction(k, b_k, F::of(t1), F::of(t2))?;
    let kk = k as i32;
    let coef_interval = b_k.wide() / ((2.0 * PI).powi(2 * kk) * 2f64.powi(kk - 1));
    let literal = tc.stated(F::of(t1)).wide();
    r.extras = vec![
        ("B_k", b_k.wide()),
        ("coef_interval", coef_interval),
        ("coef_stated", tc.coefficient.wide()),
        ("exponent", tc.exponent.wide()),
        ("literal_stated", literal),
        ("delta_k", tc.delta_f64()),
    ];
    if b_k > F::zero() {
        r.set_prediction(pred);
        r.extras
            .push(("ratio_literal", r.integral.wide() / literal));
    } else {
        r.prediction = Some(pred);
        r.warnings
            .push(format!("B_{k} = {b_k} is not positive; ratio withheld"));
    }
    Ok(r)
}

/// `∫_1^T Δ₁²` against `(2/13)(2π)^{−4}(Σ_{n≤N} c_n² n^{−7/4})T^{13/4}`.
pub fn second_moment<F: Real>(
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    t: f64,
) -> Result<MomentReport<F>> {
    let mut r = integrate_delta1_power(ct, cal, 2, 1.0, t)?;
    let c = second_moment_constant(ct.len(), ct)?;
    r.set_prediction(second_moment_prediction(c.value, F::zero(), F::of(t)));
    r.extras = vec![
        ("series", c.value.wide()),
        ("series_tail", c.tail_estimate.wide()),
        ("series_N", c.truncation as f64),
    ];
    Ok(r)
}

/// `(T exponent, y exponent)` of the scaling baseline.
pub fn r1_baseline(power: usize) -> (f64, f64) {
    (1.0 + 9.0 * power as f64 / 8.0, 0.0)
}

pub fn r2_baseline(power: usize) -> Option<(f64, f64)> {
    match power {
        2 => Some((13.0 / 4.0, -0.75)),
        3 => Some((35.0 / 8.0, -9.0 / 8.0)),
        4 => Some((11.0 / 2.0, -1.5)),
        5 => Some((53.0 / 8.0, -3.0 / 8.0)),
        _ => None,
    }
}

fn oscillating_moment<F: Real>(
    ct: &CoeffTable<F>,
    cal: Option<&CalibrationConstants<F>>,
    power: usize,
    t1: f64,
    t2: f64,
    y: f64,
) -> Result<MomentReport<F>> {
    check_power(power)?;
    check_range(ct, t1, t2)?;
    let start = Instant::now();
    let v = VoronoiSum::new(ct, y)?;
    let interp = R1Interpolant::build(&v, t1, t2);
    let rule = GaussLegendre::<f64>::new(OSC_NODES);
    let sums = integrate_unit_pieces::<F, 2>(t1, t2, |j, lo, hi| {
        let local = cal.map(|c| delta1_local(ct, c, j).map(|x| x.wide()));
        let f = |t: f64| {
            let r1 = interp.eval(j, t);
            match local {
                Some([c0, c1, c2]) => c0 + t * (c1 + t * c2) - r1,
                None => r1,
            }
        };
        let (lo, hi) = (lo.wide(), hi.wide());
        let s = rule.integrate(lo, hi, |t| f(t).powi(power as i32));
        let a = rule.integrate(lo, hi, |t| f(t).abs().powi(power as i32));
        [F::of(s), F::of(a)]
    });
    let mut r = MomentReport::new(power, t1, t2, OSC_NODES);
    r.y = Some(y);
    r.integral = sums[0];
    r.abs_integral = sums[1];
    r.extras.push(("terms", v.terms() as f64));
    r.extras.push(("cheb_degree", interp.max_degree() as f64));
    r.seconds = start.elapsed().as_secs_f64();
    Ok(r)
}

fn attach_baseline<F: Real>(r: &mut MomentReport<F>, (te, ye): (f64, f64)) {
    let y = r.y.unwrap_or(1.0).max(1.0);
    let base = r.t1.powf(te) * y.powf(ye);
    r.extras.push(("baseline", base));
    r.extras.push(("scaled", r.abs_integral.wide() / base));
}

/// `∫|R₁(x; y)|^p` over `[T1, T2]`, with the baseline `T1^{1+9p/8}`.
pub fn moment_r1<F: Real>(
    ct: &CoeffTable<F>,
    power: usize,
    t1: f64,
    t2: f64,
    y: f64,
) -> Result<MomentReport<F>> {
    let mut r = oscillating_moment(ct, None, power, t1, t2, y)?;
    if y > t1.sqrt() {
        r.warnings
            .push(format!("y = {y} exceeds T^(1/2) = {}", t1.sqrt()));
    }
    attach_baseline(&mut r, r1_baseline(power));
    Ok(r)
}

/// `∫|R₂(x; y)|^p` over `[T1, T2]` with the baseline of the matching
/// remainder estimate when one exists.
pub fn moment_r2<F: Real>(
    ct: &CoeffTable<F>,
    cal: &CalibrationConstants<F>,
    power: usize,
    t1: f64,
    t2: f64,
    y: f64,
) -> Result<MomentReport<F>> {
    let mut r = oscillating_moment(ct, Some(cal), power, t1, t2, y)?;
    let limit = t1.powf(1.0 / 12.0);
    if y > limit {
        r.warnings
            .push(format!("y = {y} exceeds T^(1/12) = {limit}"));
    }
    if let Some(b) = r2_baseline(power) {
        attach_baseline(&mut r, b);
    }
    Ok(r)
}
