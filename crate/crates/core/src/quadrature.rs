//! Gauss–Legendre rules and integration over unit intervals.

use rayon::prelude::*;

use crate::scalar::Real;
use crate::sum::{fold_blocks, Neumaier};

/// `n`-point Gauss–Legendre rule on `[−1, 1]`, exact for degree `2n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl<F: Real> GaussLegendre<F> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-17 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        // Make the weights sum to exactly 2 in summation order.
        for _ in 0..4 {
            let s: f64 = weights.iter().sum();
            if s == 2.0 {
                break;
            }
            weights[n / 2] += 2.0 - s;
        }
        Self {
            nodes: nodes.into_iter().map(F::of).collect(),
            weights: weights.into_iter().map(F::of).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// `∫_a^b f`.
    #[inline]
    pub fn integrate(&self, a: F, b: F, mut f: impl FnMut(F) -> F) -> F {
        let half = F::of(0.5) * (b - a);
        let mid = F::of(0.5) * (a + b);
        let mut s = F::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }
}

/// Unit intervals per reduction block.
pub const BLOCK: usize = 4096;

/// `Σ_j ∫_{[j,j+1) ∩ [t1,t2]} f`, where `piece(j, lo, hi)` integrates over
/// `[j+lo, j+hi]` with `0 ≤ lo < hi ≤ 1` and returns any number of
/// accumulated quantities. Blocks of [`BLOCK`] intervals are summed with
/// compensation and folded in order, so the result does not depend on the
/// thread count.
pub fn integrate_unit_pieces<F: Real, const M: usize>(
    t1: f64,
    t2: f64,
    piece: impl Fn(usize, F, F) -> [F; M] + Sync,
) -> [F; M] {
    assert!(t1 >= 0.0 && t2 >= t1);
    let j0 = t1.floor() as usize;
    let j1 = (t2.ceil() as usize).max(j0 + 1);
    let nblocks = (j1 - j0).div_ceil(BLOCK);
    let blocks: Vec<[Neumaier<F>; M]> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = [Neumaier::<F>::new(); M];
            let start = j0 + b * BLOCK;
            for j in start..(start + BLOCK).min(j1) {
                let lo = (t1 - j as f64).max(0.0);
                let hi = (t2 - j as f64).min(1.0);
                if hi <= lo {
                    continue;
                }
                let vals = piece(j, F::of(lo), F::of(hi));
                for (a, v) in acc.iter_mut().zip(vals) {
                    a.add(v);
                }
            }
            acc
        })
        .collect();
    std::array::from_fn(|i| {
        let col: Vec<Neumaier<F>> = blocks.iter().map(|b| b[i]).collect();
        fold_blocks(&col)
    })
}

/// Integrates `f(j, t)` (the integrand at `x = j + t`) over `[t1, t2]`
/// with `rule` on every unit piece. With `f ≡ 1` this returns `t2 − t1`.
pub fn integrate_piecewise<F: Real>(
    rule: &GaussLegendre<F>,
    t1: f64,
    t2: f64,
    f: impl Fn(usize, F) -> F + Sync,
) -> F {
    integrate_unit_pieces::<F, 1>(t1, t2, |j, lo, hi| [rule.integrate(lo, hi, |t| f(j, t))])[0]
}
