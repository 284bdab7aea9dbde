use std::collections::HashMap;

use super::weight;
use crate::coeffs::CoeffTable;
use crate::radicals::{kernel_decompose, Radical, SignedRadicalSum};
use crate::scalar::Real;

fn side(width: usize, n: u64, kernels: &[Radical]) -> Vec<(Vec<u64>, SignedRadicalSum)> {
    let mut out = Vec::new();
    let mut t = vec![1u64; width];
    loop {
        let mut s = SignedRadicalSum::new();
        for &v in &t {
            s.add(1, kernels[v as usize]);
        }
        out.push((t.clone(), s));
        let mut j = width;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if t[j] < n {
                t[j] += 1;
                break;
            }
            t[j] = 1;
        }
    }
}

/// Every ordered tuple in `[1, n]^k` with `⁴√n₁+…+⁴√n_l = ⁴√n_{l+1}+…+⁴√n_k`,
/// found by matching kernel decompositions of the two sides. Sorted.
pub fn kernel_solutions(k: usize, l: usize, n: u64) -> Vec<Vec<u64>> {
    assert!(l >= 1 && l < k && n >= 1);
    let kernels: Vec<Radical> = (0..=n).map(|v| kernel_decompose(v.max(1))).collect();
    let left = side(l, n, &kernels);
    let right = side(k - l, n, &kernels);
    let mut by_sum: HashMap<&SignedRadicalSum, Vec<&Vec<u64>>> = HashMap::new();
    for (t, s) in &right {
        by_sum.entry(s).or_default().push(t);
    }
    let mut out = Vec::new();
    for (t, s) in &left {
        if let Some(rs) = by_sum.get(s) {
            for r in rs {
                let mut full = t.clone();
                full.extend_from_slice(r);
                out.push(full);
            }
        }
    }
    out.sort();
    out
}

/// `Π c_{n_j}·n_j^{−7/8}`.
pub fn solution_weight<F: Real>(ct: &CoeffTable<F>, tuple: &[u64]) -> F {
    tuple
        .iter()
        .fold(F::one(), |acc, &v| acc * weight(ct, v as usize))
}
