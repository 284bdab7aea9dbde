use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

impl fmt::Display for Trig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trig::Cos => "cos",
            Trig::Sin => "sin",
        })
    }
}

impl FromStr for Trig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cos" => Ok(Trig::Cos),
            "sin" => Ok(Trig::Sin),
            other => Err(Error::OutOfRange(format!(
                "g must be cos or sin, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryEstimate {
    pub integral: f64,
    /// `T^{α+3/4}/|β|`.
    pub bound: f64,
    pub ratio: f64,
    /// Closed form (integer `4α+3 ≥ 0`) or adaptive quadrature.
    pub closed_form: bool,
}

/// `∫ u^p e^{iωu} du = e^{iωu} Σ_j (−1)^j p!/(p−j)! u^{p−j}/(iω)^{j+1}`,
/// returned as `(Re, Im)`.
fn antiderivative(p: u32, omega: f64, u: f64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    let mut falling = 1.0; // p!/(p−j)!
    for j in 0..=p {
        // 1/(iω)^{j+1} = (−i)^{j+1}/ω^{j+1}
        let mag = falling * u.powi((p - j) as i32) / omega.powi(j as i32 + 1);
        let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
        let (cr, ci) = match (j + 1) % 4 {
            0 => (1.0, 0.0),
            1 => (0.0, -1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, 1.0),
        };
        re += sgn * mag * cr;
        im += sgn * mag * ci;
        falling *= (p - j) as f64;
    }
    let (c, s) = ((omega * u).cos(), (omega * u).sin());
    (re * c - im * s, re * s + im * c)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    thread_local! {
        static RULES: (GaussLegendre<f64>, GaussLegendre<f64>) =
            (GaussLegendre::new(10), GaussLegendre::new(20));
    }
    let (lo, hi) = RULES.with(|r| (r.0.integrate(a, b, f), r.1.integrate(a, b, f)));
    if (lo - hi).abs() <= tol || depth == 0 {
        return hi;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol / 2.0, depth - 1) + adaptive(f, m, b, tol / 2.0, depth - 1)
}

/// `∫_T^{2T} x^α g(2πβ x^{1/4}) dx`, computed as `∫ 4u^{4α+3} g(2πβu) du`
/// over `u ∈ [T^{1/4}, (2T)^{1/4}]`.
pub fn oscillatory_bound(alpha: f64, beta: f64, t: f64, g: Trig) -> Result<OscillatoryEstimate> {
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Domain("beta must be nonzero".into()));
    }
    if !(t > 0.0) || !alpha.is_finite() {
        return Err(Error::OutOfRange(format!("need T > 0, got {t}")));
    }
    let omega = 2.0 * PI * beta;
    let (u0, u1) = (t.powf(0.25), (2.0 * t).powf(0.25));
    let p = 4.0 * alpha + 3.0;
    let closed = p >= 0.0 && p.fract() == 0.0 && p <= 64.0;
    let integral = if closed {
        let (r1, i1) = antiderivative(p as u32, omega, u1);
        let (r0, i0) = antiderivative(p as u32, omega, u0);
        4.0 * match g {
            Trig::Cos => r1 - r0,
            Trig::Sin => i1 - i0,
        }
    } else {
        let f = |u: f64| {
            let ph = omega * u;
            4.0 * u.powf(p)
                * match g {
                    Trig::Cos => ph.cos(),
                    Trig::Sin => ph.sin(),
                }
        };
        let panels = ((u1 - u0) * omega.abs() / PI).ceil().max(1.0) as usize * 2;
        let h = (u1 - u0) / panels as f64;
        let scale = 4.0 * u1.powf(p).max(u0.powf(p)) * (u1 - u0);
        (0..panels)
            .map(|i| {
                let a = u0 + h * i as f64;
                adaptive(&f, a, a + h, 1e-14 * scale / panels as f64, 30)
            })
            .sum()
    };
    let bound = t.powf(alpha + 0.75) / beta.abs();
    Ok(OscillatoryEstimate {
        integral,
        bound,
        ratio: integral.abs() / bound,
        closed_form: closed,
    })
}
