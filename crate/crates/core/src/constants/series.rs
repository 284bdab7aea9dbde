//! `s_{k;l}` by kernel classes.
//!
//! Write `n = q⁴·m`. A tuple solves `⁴√n₁+…+⁴√n_l = ⁴√n_{l+1}+…+⁴√n_k` iff
//! for every kernel `m` the multipliers on the two sides balance. Positions
//! sharing a kernel form a block, and each block needs at least one entry on
//! each side, so for `k ≤ 5` there are at most two blocks.
//!
//! Per kernel let `L_m(z) = Σ_q w(q⁴m) z^q` with `w(n) = c_n n^{−7/8}` and
//! `G_m(a, b) = Σ_s [z^s]L_m^a · [z^s]L_m^b`. A single block contributes
//! `Σ_m G_m(l, k−l)`; two blocks with distinct kernels contribute
//! `P₁P₂ − Σ_m G_m(a₁,b₁)G_m(a₂,b₂)` where `P = Σ_m G_m`.

use std::ops::{Add, Mul};

use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::fourth_power_free_flags;
use crate::scalar::Real;
use crate::sum::{fold_blocks, Neumaier};

pub(crate) fn binom(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Block shapes `(left, right)` and position multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Split {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub mult: u64,
}

pub(crate) fn splits(k: usize, l: usize) -> Vec<Split> {
    let r = k - l;
    let mut out = Vec::new();
    for a1 in 1..l {
        for b1 in 1..r {
            out.push(Split {
                a: [a1, l - a1],
                b: [b1, r - b1],
                mult: binom(l, a1) * binom(r, b1),
            });
        }
    }
    out
}

fn poly_mul<T: Copy + Zero + Add<Output = T> + Mul<Output = T>>(x: &[T], y: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); x.len() + y.len() - 1];
    for (i, &u) in x.iter().enumerate() {
        for (j, &v) in y.iter().enumerate() {
            out[i + j] = out[i + j] + u * v;
        }
    }
    out
}

/// `G(a, b)` for all `1 ≤ a, b ≤ k` from the coefficients `L[q]`.
fn kernel_grams<T: Copy + Zero + Add<Output = T> + Mul<Output = T>>(
    l: &[T],
    k: usize,
) -> Vec<Vec<T>> {
    let mut powers: Vec<Vec<T>> = vec![l.to_vec()];
    for _ in 1..k {
        let next = poly_mul(powers.last().unwrap(), l);
        powers.push(next);
    }
    let mut g = vec![vec![T::zero(); k + 1]; k + 1];
    for a in 1..=k {
        for b in 1..=k {
            if a + b > k {
                continue;
            }
            let (pa, pb) = (&powers[a - 1], &powers[b - 1]);
            let mut s = T::zero();
            for i in 0..pa.len().min(pb.len()) {
                s = s + pa[i] * pb[i];
            }
            g[a][b] = s;
        }
    }
    g
}

/// Kernel class: `L[q]` indexed from `q = 0` (always zero).
fn kernel_class<F: Real>(m: usize, n: usize, w: &dyn Fn(usize) -> F) -> Vec<F> {
    let mut l = vec![F::zero()];
    let mut q = 1usize;
    while q.pow(4) * m <= n {
        l.push(w(q.pow(4) * m));
        q += 1;
    }
    l
}

const KERNEL_CHUNK: usize = 1 << 15;

/// Sums over kernels for one `(k, l)`.
#[derive(Debug, Clone)]
pub(crate) struct KernelSums<T> {
    /// `Σ_m G_m(l, k−l)`.
    pub single: T,
    /// `P(a, b)`.
    pub p: Vec<Vec<T>>,
    /// `Σ_m G_m(a₁,b₁)G_m(a₂,b₂)` per split.
    pub cross: Vec<T>,
}

pub(crate) fn weighted_sums<F: Real>(
    k: usize,
    l: usize,
    n: usize,
    w: &(dyn Fn(usize) -> F + Sync),
) -> KernelSums<F> {
    let sp = splits(k, l);
    let width = 1 + (k + 1) * (k + 1) + sp.len();
    let free = fourth_power_free_flags(n);
    let chunks: Vec<Vec<Neumaier<F>>> = (0..n.div_ceil(KERNEL_CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Neumaier::<F>::new(); width];
            for m in c * KERNEL_CHUNK + 1..((c + 1) * KERNEL_CHUNK).min(n) + 1 {
                if !free[m] {
                    continue;
                }
                let lm = kernel_class(m, n, w);
                let g = kernel_grams(&lm, k);
                acc[0].add(g[l][k - l]);
                for a in 1..=k {
                    for b in 1..=k {
                        acc[1 + a * (k + 1) + b].add(g[a][b]);
                    }
                }
                for (i, s) in sp.iter().enumerate() {
                    acc[1 + (k + 1) * (k + 1) + i].add(g[s.a[0]][s.b[0]] * g[s.a[1]][s.b[1]]);
                }
            }
            acc
        })
        .collect();
    let col = |i: usize| -> F {
        let blocks: Vec<Neumaier<F>> = chunks.iter().map(|c| c[i]).collect();
        fold_blocks(&blocks)
    };
    KernelSums {
        single: col(0),
        p: (0..=k)
            .map(|a| (0..=k).map(|b| col(1 + a * (k + 1) + b)).collect())
            .collect(),
        cross: (0..sp.len())
            .map(|i| col(1 + (k + 1) * (k + 1) + i))
            .collect(),
    }
}

/// Number of ordered solutions with all `n_j ≤ n`.
pub(crate) fn solution_count(k: usize, l: usize, n: usize) -> u128 {
    let sp = splits(k, l);
    let free = fourth_power_free_flags(n);
    let (mut single, mut cross) = (0u128, vec![0u128; sp.len()]);
    let mut p = vec![vec![0u128; k + 1]; k + 1];
    for m in 1..=n {
        if !free[m] {
            continue;
        }
        let mut lm = vec![0u128];
        let mut q = 1usize;
        while q.pow(4) * m <= n {
            lm.push(1);
            q += 1;
        }
        let g = kernel_grams(&lm, k);
        single += g[l][k - l];
        for a in 1..=k {
            for b in 1..=k {
                p[a][b] += g[a][b];
            }
        }
        for (i, s) in sp.iter().enumerate() {
            cross[i] += g[s.a[0]][s.b[0]] * g[s.a[1]][s.b[1]];
        }
    }
    let mut twice = 0u128;
    for (i, s) in sp.iter().enumerate() {
        twice += s.mult as u128 * (p[s.a[0]][s.b[0]] * p[s.a[1]][s.b[1]] - cross[i]);
    }
    single + twice / 2
}

/// Combines kernel sums into `s_{k;l}` and the diagonal tail bound from the
/// per-pair tail `t2 ≥ Σ_{n>N} w(n)²`.
pub(crate) fn combine<F: Real>(k: usize, l: usize, s: &KernelSums<F>, t2: F) -> (F, F) {
    let sp = splits(k, l);
    let half = F::of(0.5);
    let mut value = Neumaier::<F>::new();
    value.add(s.single);
    let mut tail = F::zero();
    for (i, sp_i) in sp.iter().enumerate() {
        let mult = F::of(sp_i.mult as f64);
        let p1 = s.p[sp_i.a[0]][sp_i.b[0]];
        let p2 = s.p[sp_i.a[1]][sp_i.b[1]];
        value.add(half * mult * (p1 * p2 - s.cross[i]));
        let pair = |j: usize| sp_i.a[j] == 1 && sp_i.b[j] == 1;
        for j in 0..2 {
            if pair(j) {
                let other = 1 - j;
                let full = [p1, p2][other] + if pair(other) { t2 } else { F::zero() };
                tail += half * mult * t2 * full;
            }
        }
    }
    (value.value(), tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_shapes() {
        assert!(splits(3, 1).is_empty() && splits(3, 2).is_empty());
        assert_eq!(splits(4, 2).len(), 1);
        assert_eq!(splits(4, 2)[0].mult, 4);
        let s52 = splits(5, 2);
        assert_eq!(s52.len(), 2);
        assert_eq!(s52.iter().map(|s| s.mult).sum::<u64>(), 2 * 3 + 2 * 3);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(4, 0), 1);
        assert_eq!(binom(3, 4), 0);
    }

    #[test]
    fn counts_small() {
        // ⁴√a + ⁴√b = ⁴√c with c ≤ 16: only (1,1,16).
        assert_eq!(solution_count(3, 2, 16), 1);
        assert_eq!(solution_count(3, 1, 16), 1);
        // k = 4, l = 2, N = 15: only the diagonal {a,b} = {c,d}.
        assert_eq!(solution_count(4, 2, 15), 2 * 15 * 15 - 15);
    }
}
