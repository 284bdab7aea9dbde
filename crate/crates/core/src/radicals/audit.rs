//! Exhaustive comparison of the exact zero test with 200-bit numerics.
//!
//! A tuple splits into a left and a right half, and `α = L + R`. Both
//! classifications reduce to matching halves: numerically `L ≈ −R` within
//! the zero threshold, exactly `kernels(L) = −kernels(R)`. Sorting and
//! hashing the halves finds every zero of either kind without visiting all
//! `limit^k` tuples. Each match is then re-classified tuple by tuple with
//! [`alpha_is_zero`] and [`numeric_is_zero`].

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use super::precise::{numeric_is_zero, zero_threshold, Fixed256, FixedRoots};
use super::{alpha_is_zero, kernel_decompose, SignedRadicalSum, Signs};

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroAudit {
    pub k: usize,
    pub limit: u64,
    /// `limit^k · 2^{k−1}` tuple/sign combinations covered.
    pub combinations: u128,
    pub exact_zeros: u64,
    pub numeric_zeros: u64,
    pub disagreements: u64,
    /// Up to 16 disagreeing `(tuple, signs)` pairs.
    pub examples: Vec<(Vec<u64>, Signs)>,
}

struct Half {
    tuples: Vec<Vec<u64>>,
    values: Vec<Fixed256>,
    kernels: Vec<SignedRadicalSum>,
}

fn half(limit: u64, width: usize, offset: usize, signs: &Signs, roots: &FixedRoots) -> Half {
    let mut h = Half {
        tuples: Vec::new(),
        values: Vec::new(),
        kernels: Vec::new(),
    };
    let mut t = vec![1u64; width];
    loop {
        let mut v = Fixed256::ZERO;
        let mut ker = SignedRadicalSum::new();
        for (j, &n) in t.iter().enumerate() {
            let s = signs.sign_of(offset + j);
            let r = roots.get(n);
            v = if s < 0 {
                v.wrapping_sub(r)
            } else {
                v.wrapping_add(r)
            };
            ker.add(s, kernel_decompose(n));
        }
        h.tuples.push(t.clone());
        h.values.push(v);
        h.kernels.push(ker);
        let mut j = width;
        loop {
            if j == 0 {
                return h;
            }
            j -= 1;
            if t[j] < limit {
                t[j] += 1;
                break;
            }
            t[j] = 1;
        }
    }
}

struct SignResult {
    exact: u64,
    numeric: u64,
    bad: Vec<Vec<u64>>,
}

fn audit_signs(k: usize, limit: u64, signs: &Signs, roots: &FixedRoots) -> SignResult {
    let a = k.div_ceil(2);
    let left = half(limit, a, 0, signs, roots);
    let right = half(limit, k - a, a, signs, roots);
    let thr = zero_threshold();

    // numeric: L + R ≈ 0, i.e. L ≈ key with key = −R
    let mut order: Vec<usize> = (0..right.values.len()).collect();
    let keys: Vec<Fixed256> = right.values.iter().map(|v| v.wrapping_neg()).collect();
    order.sort_by_key(|&i| keys[i]);
    let sorted: Vec<Fixed256> = order.iter().map(|&i| keys[i]).collect();
    let mut numeric = BTreeSet::new();
    for (li, &l) in left.values.iter().enumerate() {
        let lo = sorted.partition_point(|&x| x <= l.wrapping_sub(thr));
        let hi = sorted.partition_point(|&x| x < l.wrapping_add(thr));
        for &ri in &order[lo..hi] {
            numeric.insert((li, ri));
        }
    }

    // exact: kernels(L) = −kernels(R)
    let mut by_kernel: HashMap<SignedRadicalSum, Vec<usize>> = HashMap::new();
    for (ri, ker) in right.kernels.iter().enumerate() {
        by_kernel.entry(ker.negated()).or_default().push(ri);
    }
    let mut exact = BTreeSet::new();
    for (li, ker) in left.kernels.iter().enumerate() {
        if let Some(rs) = by_kernel.get(ker) {
            for &ri in rs {
                exact.insert((li, ri));
            }
        }
    }

    let mut bad = Vec::new();
    for &(li, ri) in exact.union(&numeric) {
        let mut t = left.tuples[li].clone();
        t.extend_from_slice(&right.tuples[ri]);
        let e = alpha_is_zero(&t, signs);
        let n = numeric_is_zero(&t, &signs.0);
        if e != n || e != exact.contains(&(li, ri)) || n != numeric.contains(&(li, ri)) {
            bad.push(t);
        }
    }
    SignResult {
        exact: exact.len() as u64,
        numeric: numeric.len() as u64,
        bad,
    }
}

/// Compares exact and numeric zero classification over `[1, limit]^k` for
/// every sign vector.
pub fn audit_zero_test(k: usize, limit: u64) -> ZeroAudit {
    assert!((2..=6).contains(&k) && limit >= 1);
    let roots = FixedRoots::new(limit);
    let all = Signs::all(k - 1);
    let results: Vec<(Signs, SignResult)> = all
        .into_par_iter()
        .map(|s| {
            let r = audit_signs(k, limit, &s, &roots);
            (s, r)
        })
        .collect();
    let mut out = ZeroAudit {
        k,
        limit,
        combinations: (limit as u128).pow(k as u32) << (k - 1),
        exact_zeros: 0,
        numeric_zeros: 0,
        disagreements: 0,
        examples: Vec::new(),
    };
    for (s, r) in results {
        out.exact_zeros += r.exact;
        out.numeric_zeros += r.numeric;
        out.disagreements += r.bad.len() as u64;
        for t in r.bad {
            if out.examples.len() < 16 {
                out.examples.push((t, s.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radicals::alpha_f64;

    #[test]
    fn small_audit_matches_direct_enumeration() {
        let audit = audit_zero_test(3, 20);
        assert_eq!(audit.disagreements, 0, "{:?}", audit.examples);
        let mut zeros = 0u64;
        for s in Signs::all(2) {
            for a in 1..=20u64 {
                for b in 1..=20 {
                    for c in 1..=20 {
                        let t = [a, b, c];
                        let z = alpha_is_zero(&t, &s);
                        assert_eq!(z, numeric_is_zero(&t, &s.0));
                        if z {
                            assert!(alpha_f64(&t, &s).abs() < 1e-12);
                        }
                        zeros += z as u64;
                    }
                }
            }
        }
        assert_eq!(audit.exact_zeros, zeros);
        assert_eq!(audit.numeric_zeros, zeros);
        assert_eq!(audit.combinations, 8000 * 4);
    }

    #[test]
    fn pair_audit() {
        let a = audit_zero_test(2, 50);
        assert_eq!(a.disagreements, 0);
        // ⁴√n − ⁴√n only
        assert_eq!(a.exact_zeros, 50);
    }
}
