//! Least-squares calibration of the mean constants from Riesz means.
//!
//! `D_ρ(x) ≈ A·x^{ρ+1}/(ρ+1)! + Z0·x^ρ/ρ!`. The fit uses modified
//! Gram–Schmidt on columns scaled by the largest sample, which keeps the
//! two nearly collinear columns well separated in `f64`.

use std::fmt::Write as _;
use std::path::Path;

use super::{riesz_mean, FACTORIAL};
use crate::coeffs::CoeffTable;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationMethod {
    Fitted {
        rho: usize,
        samples: usize,
        x_min: f64,
        x_max: f64,
    },
    UserSupplied,
}

/// `A` (the mean coefficient) and `Z0`, with how they were obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConstants<F> {
    pub a: F,
    pub z0: F,
    pub method: CalibrationMethod,
    /// RMS misfit over `x_max^{ρ+1}`; zero for supplied constants.
    pub residual: F,
    /// `A` from the companion fit (`ρ = 2` for a `ρ = 3` calibration and
    /// vice versa) with its residual.
    pub cross: Option<(F, F)>,
}

/// One least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit<F> {
    pub a: F,
    pub z0: F,
    pub residual: F,
}

impl<F: Real> CalibrationConstants<F> {
    pub fn user(a: F, z0: F) -> Result<Self> {
        if !(a > F::zero()) || !z0.is_finite() || !a.is_finite() {
            return Err(Error::Calibration(format!(
                "supplied constants must have finite A > 0, got A={a}, Z0={z0}"
            )));
        }
        Ok(Self {
            a,
            z0,
            method: CalibrationMethod::UserSupplied,
            residual: F::zero(),
            cross: None,
        })
    }

    /// `|A − A'| ≤ 5·max(residual, residual')`.
    pub fn cross_validated(&self) -> Option<bool> {
        self.cross.map(|(a2, r2)| {
            let tol = F::of(5.0) * self.residual.max(r2);
            (self.a - a2).abs() <= tol
        })
    }

    /// `key=value` sidecar text.
    pub fn to_sidecar(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "A={}", self.a.wide());
        let _ = writeln!(s, "Z0={}", self.z0.wide());
        match &self.method {
            CalibrationMethod::Fitted {
                rho,
                samples,
                x_min,
                x_max,
            } => {
                let _ = writeln!(s, "method=fitted");
                let _ = writeln!(s, "rho={rho}");
                let _ = writeln!(s, "samples={samples}");
                let _ = writeln!(s, "x_min={x_min}");
                let _ = writeln!(s, "x_max={x_max}");
            }
            CalibrationMethod::UserSupplied => {
                let _ = writeln!(s, "method=user");
            }
        }
        let _ = writeln!(s, "residual={}", self.residual.wide());
        if let Some((a2, r2)) = self.cross {
            let _ = writeln!(s, "cross_A={}", a2.wide());
            let _ = writeln!(s, "cross_residual={}", r2.wide());
        }
        s
    }

    pub fn from_sidecar(text: &str, path: &Path) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut kv = std::collections::BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| perr(i + 1, format!("expected key=value, got {line:?}")))?;
            kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
        }
        let num = |key: &str| -> Result<Option<f64>> {
            match kv.get(key) {
                None => Ok(None),
                Some((line, v)) => v
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|e| perr(*line, format!("{key}: {e}"))),
            }
        };
        let need = |key: &str| -> Result<f64> {
            num(key)?.ok_or_else(|| perr(0, format!("missing key {key}")))
        };
        let a = F::of(need("A")?);
        let z0 = F::of(need("Z0")?);
        let method = match kv.get("method").map(|(_, v)| v.as_str()) {
            Some("fitted") => CalibrationMethod::Fitted {
                rho: need("rho")? as usize,
                samples: need("samples")? as usize,
                x_min: need("x_min")?,
                x_max: need("x_max")?,
            },
            Some("user") | None => CalibrationMethod::UserSupplied,
            Some(other) => {
                let line = kv["method"].0;
                return Err(perr(line, format!("unknown method {other:?}")));
            }
        };
        let cross = match (num("cross_A")?, num("cross_residual")?) {
            (Some(a2), Some(r2)) => Some((F::of(a2), F::of(r2))),
            _ => None,
        };
        let mut out = Self::user(a, z0)?;
        out.method = method;
        out.residual = F::of(num("residual")?.unwrap_or(0.0));
        out.cross = cross;
        Ok(out)
    }
}

/// 64 evenly spaced points in `[N/2, N]`.
pub fn default_samples(n: usize) -> Vec<f64> {
    let lo = n as f64 / 2.0;
    (0..64).map(|i| lo + lo * i as f64 / 63.0).collect()
}

fn check_samples<F: Real>(ct: &CoeffTable<F>, samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Calibration(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let x_min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(x_min >= 1.0) || x_max > ct.len() as f64 {
        return Err(Error::OutOfRange(format!(
            "samples must lie in [1, {}], got [{x_min}, {x_max}]",
            ct.len()
        )));
    }
    if x_min == x_max {
        return Err(Error::Calibration(
            "ill-conditioned normal equations: fewer than 2 distinct sample scales".into(),
        ));
    }
    if x_max < 2.0 * x_min {
        return Err(Error::Calibration(format!(
            "samples must span a dyadic range, got [{x_min}, {x_max}]"
        )));
    }
    Ok((x_min, x_max))
}

/// Fits `A` and `Z0` to `D_ρ` at the given samples.
pub fn fit_riesz<F: Real>(ct: &CoeffTable<F>, rho: usize, samples: &[f64]) -> Result<Fit<F>> {
    if !(1..=3).contains(&rho) {
        return Err(Error::OutOfRange(format!(
            "calibration uses rho in 1..=3, got {rho}"
        )));
    }
    let (x_min, x_max) = check_samples(ct, samples)?;
    if riesz_mean(ct, F::of(x_max), 0)? <= riesz_mean(ct, F::of(x_min), 0)? {
        return Err(Error::Calibration(
            "insufficient signal: D_0 does not increase over the samples".into(),
        ));
    }
    let scale = x_max.powi(rho as i32 + 1);
    let mut u = Vec::with_capacity(samples.len());
    let mut v = Vec::with_capacity(samples.len());
    let mut d = Vec::with_capacity(samples.len());
    for &x in samples {
        let t = x / x_max;
        u.push(t.powi(rho as i32 + 1));
        v.push(t.powi(rho as i32));
        d.push(riesz_mean(ct, F::of(x), rho)?.wide() / scale);
    }
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
    let nu = dot(&u, &u).sqrt();
    let q1: Vec<f64> = u.iter().map(|a| a / nu).collect();
    let r12 = dot(&q1, &v);
    let vp: Vec<f64> = v.iter().zip(&q1).map(|(a, b)| a - r12 * b).collect();
    let nv = dot(&vp, &vp).sqrt();
    if !(nv > 1e-14 * nu) {
        return Err(Error::Calibration(
            "ill-conditioned normal equations".into(),
        ));
    }
    let q2: Vec<f64> = vp.iter().map(|a| a / nv).collect();
    let cv = dot(&q2, &d) / nv;
    let cu = (dot(&q1, &d) - r12 * cv) / nu;
    let a = cu * FACTORIAL[rho + 1];
    let z0 = cv * FACTORIAL[rho] * x_max;
    if !(a > 0.0) {
        return Err(Error::Calibration(format!(
            "insufficient signal: fitted A = {a}"
        )));
    }
    let rss: f64 = (0..d.len())
        .map(|i| (d[i] - cu * u[i] - cv * v[i]).powi(2))
        .sum();
    let residual = (rss / d.len() as f64).sqrt();
    Ok(Fit {
        a: F::of(a),
        z0: F::of(z0),
        residual: F::of(residual),
    })
}

/// Calibration at `ρ ∈ {2, 3}` with the other order as a cross-check.
pub fn calibrate<F: Real>(
    ct: &CoeffTable<F>,
    rho: usize,
    samples: &[f64],
) -> Result<CalibrationConstants<F>> {
    if rho != 2 && rho != 3 {
        return Err(Error::OutOfRange(format!(
            "calibration rho must be 2 or 3, got {rho}"
        )));
    }
    let main = fit_riesz(ct, rho, samples)?;
    let other = fit_riesz(ct, 5 - rho, samples)?;
    let (x_min, x_max) = check_samples(ct, samples)?;
    Ok(CalibrationConstants {
        a: main.a,
        z0: main.z0,
        method: CalibrationMethod::Fitted {
            rho,
            samples: samples.len(),
            x_min,
            x_max,
        },
        residual: main.residual,
        cross: Some((other.a, other.residual)),
    })
}

/// `ρ = 3` fit on [`default_samples`].
pub fn calibrate_default<F: Real>(ct: &CoeffTable<F>) -> Result<CalibrationConstants<F>> {
    calibrate(ct, 3, &default_samples(ct.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{compute_coeffs, compute_fourier, WeightConfig};

    #[test]
    fn constant_sequence_recovers_closed_form() {
        let ct = CoeffTable::from_convolution(vec![1.0f64; 1_100_000]).unwrap();
        let samples: Vec<f64> = (0..32)
            .map(|i| 500_000.0 + 18_750.0 * i as f64 + 0.37)
            .collect();
        for rho in [2, 3] {
            let cal = calibrate(&ct, rho, &samples).unwrap();
            assert!((cal.a - 1.0).abs() < 1e-3, "{cal:?}");
            assert!((cal.z0 + 0.5).abs() < 1e-3, "{cal:?}");
        }
    }

    #[test]
    fn degenerate_inputs_are_refused() {
        let mut c = vec![0.0f64; 5000];
        c[0] = 1.0;
        let ct = CoeffTable::from_convolution(c).unwrap();
        let err = calibrate_default(&ct).unwrap_err().to_string();
        assert!(err.contains("insufficient signal"), "{err}");
        let ones = CoeffTable::from_convolution(vec![1.0f64; 5000]).unwrap();
        assert!(calibrate(&ones, 3, &[4000.0; 10]).is_err());
        assert!(calibrate(&ones, 3, &default_samples(5000)[..5]).is_err());
        assert!(calibrate(
            &ones,
            3,
            &[3000.0, 3100.0, 3200.0, 3300.0, 3400.0, 3500.0, 3600.0, 3700.0]
        )
        .is_err());
        assert!(calibrate(&ones, 1, &default_samples(5000)).is_err());
    }

    #[test]
    fn real_coefficients_cross_validate() {
        let ft = compute_fourier(WeightConfig::delta(200_000).unwrap()).unwrap();
        let ct = compute_coeffs::<f64>(&ft).unwrap();
        let cal = calibrate_default(&ct).unwrap();
        assert!((cal.a - 0.6318).abs() < 1e-3, "{cal:?}");
        assert_eq!(cal.cross_validated(), Some(true), "{cal:?}");
    }

    #[test]
    fn sidecar_round_trip() {
        let cal = CalibrationConstants {
            a: 0.631_804_123_456_789f64,
            z0: -0.123,
            method: CalibrationMethod::Fitted {
                rho: 3,
                samples: 64,
                x_min: 5e6,
                x_max: 1e7,
            },
            residual: 1.5e-12,
            cross: Some((0.6318041, 2e-12)),
        };
        let text = cal.to_sidecar();
        let back = CalibrationConstants::<f64>::from_sidecar(&text, Path::new("c.txt")).unwrap();
        assert_eq!(back, cal);
        let user = CalibrationConstants::user(1.0f64, 0.5).unwrap();
        let back =
            CalibrationConstants::<f64>::from_sidecar(&user.to_sidecar(), Path::new("u")).unwrap();
        assert_eq!(back, user);
        assert!(CalibrationConstants::<f64>::from_sidecar("A=x\nZ0=1\n", Path::new("b")).is_err());
        assert!(CalibrationConstants::<f64>::user(-1.0, 0.0).is_err());
    }
}
