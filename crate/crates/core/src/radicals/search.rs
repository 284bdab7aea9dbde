use std::cmp::Ordering;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::precise::{alpha_fixed, Fixed256};
use super::{alpha_is_zero, Signs};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Maximum number of tuples an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Default for Budget {
    fn default() -> Self {
        Self(DEFAULT_BUDGET)
    }
}

impl Budget {
    fn admit(self, required: u128) -> Result<()> {
        if required > self.0 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

/// Relative width of the band in which `f64` results are re-checked exactly.
const F64_BAND: f64 = 1e-12;

struct Grid {
    lo: Vec<u64>,
    roots: Vec<Vec<f64>>,
    sign: Vec<f64>,
}

impl Grid {
    fn new(ranges: &[(u64, u64)], signs: &Signs) -> Self {
        let roots = ranges
            .iter()
            .map(|&(a, b)| (a..=b).map(|n| (n as f64).powf(0.25)).collect())
            .collect();
        Self {
            lo: ranges.iter().map(|r| r.0).collect(),
            roots,
            sign: (0..ranges.len()).map(|j| signs.sign_of(j) as f64).collect(),
        }
    }

    fn size(&self) -> u128 {
        self.roots.iter().map(|r| r.len() as u128).product()
    }

    /// Visits every tuple whose first coordinate has index `i0`, passing the
    /// tuple, its `f64` value and the sum of absolute terms.
    fn visit(&self, i0: usize, f: &mut impl FnMut(&[u64], f64, f64)) {
        let k = self.roots.len();
        let mut idx = vec![0usize; k];
        idx[0] = i0;
        let mut tuple: Vec<u64> = self.lo.clone();
        tuple[0] = self.lo[0] + i0 as u64;
        if self.roots.iter().any(|r| r.is_empty()) {
            return;
        }
        loop {
            let mut v = 0.0;
            let mut scale = 0.0;
            for j in 0..k {
                let r = self.roots[j][idx[j]];
                v += self.sign[j] * r;
                scale += r;
            }
            f(&tuple, v, scale);
            let mut j = k - 1;
            loop {
                if j == 0 {
                    return;
                }
                idx[j] += 1;
                if idx[j] < self.roots[j].len() {
                    tuple[j] = self.lo[j] + idx[j] as u64;
                    break;
                }
                idx[j] = 0;
                tuple[j] = self.lo[j];
                j -= 1;
            }
        }
    }
}

fn check_shape(k: usize, signs: &Signs) -> Result<()> {
    if k < 2 || signs.len() + 1 != k {
        return Err(Error::OutOfRange(format!(
            "{k} ranges need {} signs, got {}",
            k.saturating_sub(1),
            signs.len()
        )));
    }
    Ok(())
}

/// Smallest nonzero `|α(n; i)|` over a box, with the tuple achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinGap {
    pub value: f64,
    pub tuple: Vec<u64>,
    /// Tuples skipped because `α` vanishes exactly.
    pub exact_zeros: u64,
}

#[derive(Default)]
struct Candidates {
    best: f64,
    list: Vec<(f64, Vec<u64>)>,
    zeros: u64,
}

impl Candidates {
    fn new() -> Self {
        Self {
            best: f64::INFINITY,
            ..Default::default()
        }
    }

    fn offer(&mut self, v: f64, scale: f64, tuple: &[u64]) {
        let slack = F64_BAND * scale;
        if v > self.best + slack {
            return;
        }
        if v < self.best {
            self.best = v;
        }
        self.list.push((v, tuple.to_vec()));
        if self.list.len() > 256 {
            self.prune(slack);
        }
    }

    fn prune(&mut self, slack: f64) {
        let cut = self.best + slack;
        self.list.retain(|(v, _)| *v <= cut);
    }

    fn merge(mut self, other: Self) -> Self {
        self.best = self.best.min(other.best);
        self.zeros += other.zeros;
        self.list.extend(other.list);
        self
    }
}

/// Minimum of `|α(n; i)|` over `n ∈ ranges` with `α ≠ 0`.
///
/// `f64` values are used to locate candidates; everything within a narrow
/// band of the running minimum, and every tuple with `|α|` near zero, is
/// settled with the exact kernel test and the 200-bit evaluator. `None`
/// means every tuple is an exact zero (or the box is empty).
pub fn min_nonzero_alpha(
    ranges: &[RangeInclusive<u64>],
    signs: &Signs,
    budget: Budget,
) -> Result<Option<MinGap>> {
    check_shape(ranges.len(), signs)?;
    if ranges.iter().any(|r| *r.start() == 0) {
        return Err(Error::OutOfRange("ranges must start at 1 or above".into()));
    }
    let bounds: Vec<(u64, u64)> = ranges.iter().map(|r| (*r.start(), *r.end())).collect();
    let grid = Grid::new(&bounds, signs);
    budget.admit(grid.size())?;
    let first = grid.roots[0].len();

    let merged = (0..first)
        .into_par_iter()
        .map(|i0| {
            let mut c = Candidates::new();
            grid.visit(i0, &mut |t, v, scale| {
                let mut a = v.abs();
                if a <= F64_BAND * scale {
                    if alpha_is_zero(t, signs) {
                        c.zeros += 1;
                        return;
                    }
                    a = alpha_fixed(t, &signs.0).abs().to_f64();
                }
                c.offer(a, scale, t);
            });
            c
        })
        .reduce(Candidates::new, Candidates::merge);

    let scale_max: f64 = bounds.iter().map(|&(_, b)| (b as f64).powf(0.25)).sum();
    let cut = merged.best + F64_BAND * scale_max;
    let winner = merged
        .list
        .into_iter()
        .filter(|(v, _)| *v <= cut)
        .map(|(_, t)| (alpha_fixed(&t, &signs.0).abs(), t))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    Ok(winner.map(|(v, tuple)| MinGap {
        value: v.to_f64(),
        tuple,
        exact_zeros: merged.zeros,
    }))
}

/// Dyadic counting problem: `n_j ∈ (N_j, 2N_j]` and `|α(n; i)| < Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountQuery {
    pub ns: Vec<u64>,
    pub signs: Signs,
    pub delta: f64,
}

impl CountQuery {
    pub fn new(ns: Vec<u64>, signs: Signs, delta: f64) -> Result<Self> {
        if ns.len() < 3 {
            return Err(Error::OutOfRange(format!(
                "k must be at least 3, got {}",
                ns.len()
            )));
        }
        check_shape(ns.len(), &signs)?;
        if ns.iter().any(|&n| n == 0) {
            return Err(Error::OutOfRange("every N_j must be at least 1".into()));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "delta must be positive, got {delta}"
            )));
        }
        Ok(Self { ns, signs, delta })
    }

    pub fn k(&self) -> usize {
        self.ns.len()
    }

    /// `H = max N_j`.
    pub fn h(&self) -> u64 {
        *self.ns.iter().max().unwrap()
    }

    /// `Π N_j`, the number of tuples.
    pub fn volume(&self) -> u128 {
        self.ns.iter().map(|&n| n as u128).product()
    }

    pub fn ranges(&self) -> Vec<RangeInclusive<u64>> {
        self.ns.iter().map(|&n| n + 1..=2 * n).collect()
    }
}

/// Number of tuples in the query box with `|α(n; i)| < Δ`.
pub fn count_near_solutions(q: &CountQuery, budget: Budget) -> Result<u64> {
    let bounds: Vec<(u64, u64)> = q.ns.iter().map(|&n| (n + 1, 2 * n)).collect();
    let grid = Grid::new(&bounds, &q.signs);
    budget.admit(grid.size())?;
    let delta = q.delta;
    let delta_fixed = Fixed256::from_f64(delta);
    let count = (0..grid.roots[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut hits = 0u64;
            grid.visit(i0, &mut |t, v, scale| {
                let a = v.abs();
                let band = F64_BAND * scale;
                let inside = if a <= band && alpha_is_zero(t, &q.signs) {
                    true
                } else if (a - delta).abs() <= band || a <= band {
                    alpha_fixed(t, &q.signs.0).cmp_abs(delta_fixed) == Ordering::Less
                } else {
                    a < delta
                };
                hits += inside as u64;
            });
            hits
        })
        .sum();
    Ok(count)
}

/// Number of `(m₁,…,m₄) ∈ (M, 2M]⁴` with
/// `|m₁^c + m₂^c − m₃^c − m₄^c| ≤ δ·M^c`.
///
/// Tuples with `{m₁,m₂} = {m₃,m₄}` are exact zeros. For `c = 1/4` other
/// near-zero or near-threshold tuples are settled exactly; for other `c`
/// the comparison is done in `f64`.
pub fn count_rs(m: u64, delta: f64, c: f64, budget: Budget) -> Result<u64> {
    if !c.is_finite() || c.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "exponent c must be a non-integer real, got {c}"
        )));
    }
    if m == 0 {
        return Err(Error::OutOfRange("M must be at least 1".into()));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "delta must be positive, got {delta}"
        )));
    }
    budget.admit((m as u128).pow(4))?;
    let quarter = c == 0.25;
    let pw: Vec<f64> = (m + 1..=2 * m).map(|v| (v as f64).powf(c)).collect();
    let thr = delta * (m as f64).powf(c);
    let signs = Signs::from_bits(&[0, 1, 1]);
    let thr_fixed = quarter.then(|| Fixed256::from_f64(thr));
    let len = m as usize;
    let count = (0..len)
        .into_par_iter()
        .map(|a| {
            let mut hits = 0u64;
            for b in 0..len {
                let ab = pw[a] + pw[b];
                for c3 in 0..len {
                    for d in 0..len {
                        if (a == c3 && b == d) || (a == d && b == c3) {
                            hits += 1;
                            continue;
                        }
                        let v = (ab - pw[c3] - pw[d]).abs();
                        let band = F64_BAND * 4.0 * pw[len - 1];
                        let inside = match thr_fixed {
                            Some(tf) if v <= band || (v - thr).abs() <= band => {
                                let t = [a, b, c3, d].map(|i| m + 1 + i as u64);
                                alpha_is_zero(&t, &signs)
                                    || alpha_fixed(&t, &signs.0).cmp_abs(tf) != Ordering::Greater
                            }
                            _ => v <= thr,
                        };
                        hits += inside as u64;
                    }
                }
            }
            hits
        })
        .sum();
    Ok(count)
}

/// `(Δ·H^{−1/4} + H^{−1})·Π N_j`.
pub fn near_count_shape(q: &CountQuery) -> f64 {
    let h = q.h() as f64;
    (q.delta * h.powf(-0.25) + 1.0 / h) * q.volume() as f64
}

/// `(M² + δM⁴)·M^{0.01}`.
pub fn rs_count_shape(m: u64, delta: f64) -> f64 {
    let m = m as f64;
    (m * m + delta * m.powi(4)) * m.powf(0.01)
}
