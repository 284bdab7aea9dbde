//! Elementary multiplicative number theory on `1..=n`.

/// Smallest-prime-factor table; `spf[0] = spf[1] = 0`.
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Prime factorisation `[(p, e)]` in increasing `p`, from an spf table.
pub fn factor_with(spf: &[u32], mut n: usize) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let p = spf[n] as usize;
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p as u64, e));
    }
    out
}

/// Trial-division factorisation, for one-off queries outside any table.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of divisors `d(n)` for every `n ≤ limit`; index 0 is unused.
pub fn divisor_counts(spf: &[u32]) -> Vec<u32> {
    let n = spf.len() - 1;
    let mut d = vec![0u32; n + 1];
    if n >= 1 {
        d[1] = 1;
    }
    for m in 2..=n {
        d[m] = factor_with(spf, m).iter().map(|&(_, e)| e + 1).product();
    }
    d
}

/// Largest `q` with `q^4 ≤ n`.
pub fn ifourth_root(n: u64) -> u64 {
    let mut q = (n as f64).powf(0.25) as u64;
    while q > 0 && q.checked_pow(4).is_none_or(|v| v > n) {
        q -= 1;
    }
    while (q + 1).checked_pow(4).is_some_and(|v| v <= n) {
        q += 1;
    }
    q
}

/// Largest `m` with `m^2 ≤ n`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Flags `n ≤ limit` that are free of fourth powers; index 0 is `false`.
pub fn fourth_power_free_flags(limit: usize) -> Vec<bool> {
    let mut free = vec![true; limit + 1];
    free[0] = false;
    let mut p = 2usize;
    while p.saturating_pow(4) <= limit {
        let p4 = p.pow(4);
        let mut j = p4;
        while j <= limit {
            free[j] = false;
            j += p4;
        }
        p += 1;
    }
    free
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spf_and_divisors() {
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[97], 97);
        assert_eq!(spf[91], 7);
        let d = divisor_counts(&spf);
        assert_eq!(d[1], 1);
        assert_eq!(d[12], 6);
        assert_eq!(d[64], 7);
        assert_eq!(d[97], 2);
    }

    #[test]
    fn trial_factor_matches_table() {
        let spf = smallest_prime_factors(5000);
        for n in 1..=5000u64 {
            assert_eq!(factor(n), factor_with(&spf, n as usize));
        }
    }

    #[test]
    fn integer_roots() {
        for n in 0..5000u64 {
            let q = ifourth_root(n);
            assert!(q.pow(4) <= n && (q + 1).pow(4) > n);
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(ifourth_root(u64::MAX), 65535);
    }

    #[test]
    fn fourth_power_free() {
        let f = fourth_power_free_flags(200);
        assert!(f[1] && f[8] && f[15] && f[82]);
        assert!(!f[16] && !f[32] && !f[81] && !f[162]);
    }
}
