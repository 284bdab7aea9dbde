//! Chebyshev interpolation of `R₁(·; y)` on long blocks.
//!
//! `R₁` is a smooth sum of slowly varying cosines, so on a block of `B`
//! unit intervals it is reproduced to rounding by a Chebyshev series of
//! degree about `1.5·ω_max·B/2 + 24`. Each block costs `deg + 1` direct
//! evaluations instead of one per quadrature node.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::errterm::VoronoiSum;
use crate::scalar::Real;

/// Headroom added to the bandwidth estimate.
const DEGREE_PAD: usize = 24;
/// Largest phase change per half-block.
const MAX_HALF_PHASE: f64 = 40.0;
const MAX_BLOCK: usize = 8192;

#[derive(Debug, Clone)]
pub struct ChebBlock {
    a: f64,
    b: f64,
    coeffs: Vec<f64>,
}

impl ChebBlock {
    pub fn fit(a: f64, b: f64, degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let n = degree + 1;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let th = PI * (i as f64 + 0.5) / n as f64;
                f(mid + half * th.cos())
            })
            .collect();
        let coeffs = (0..n)
            .map(|k| {
                let s: f64 = vals
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * (PI * k as f64 * (i as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * s / n as f64;
                if k == 0 {
                    c / 2.0
                } else {
                    c
                }
            })
            .collect();
        Self { a, b, coeffs }
    }

    /// Clenshaw evaluation.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let t = (2.0 * x - self.a - self.b) / (self.b - self.a);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        t * b1 - b2 + self.coeffs[0]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Piecewise interpolant of `R₁` over integer-aligned blocks.
#[derive(Debug, Clone)]
pub struct R1Interpolant {
    j0: usize,
    block: usize,
    blocks: Vec<ChebBlock>,
}

impl R1Interpolant {
    pub fn build<F: Real>(v: &VoronoiSum<F>, t1: f64, t2: f64) -> Self {
        let j0 = t1.floor() as usize;
        let j1 = (t2.ceil() as usize).max(j0 + 1);
        let omega = v.max_frequency(t1.max(1.0));
        let mut block = MAX_BLOCK;
        while block > 1 && omega * block as f64 / 2.0 > MAX_HALF_PHASE {
            block /= 2;
        }
        let degree = (1.5 * omega * block as f64 / 2.0).ceil() as usize + DEGREE_PAD;
        let count = (j1 - j0).div_ceil(block);
        let blocks = (0..count)
            .into_par_iter()
            .map(|i| {
                let a = (j0 + i * block) as f64;
                let b = a + block as f64;
                if v.terms() == 0 {
                    return ChebBlock {
                        a,
                        b,
                        coeffs: vec![0.0],
                    };
                }
                ChebBlock::fit(a, b, degree, |x| v.eval(F::of(x)).wide())
            })
            .collect();
        Self { j0, block, blocks }
    }

    /// `R₁(j + t)`.
    #[inline]
    pub fn eval(&self, j: usize, t: f64) -> f64 {
        let bi = (j - self.j0) / self.block;
        self.blocks[bi].eval(j as f64 + t)
    }

    pub fn max_degree(&self) -> usize {
        self.blocks.iter().map(ChebBlock::degree).max().unwrap_or(0)
    }
}
