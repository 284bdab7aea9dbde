use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::fourier::{big_to_f64, FourierTable};
use crate::arith::{factor_with, smallest_prime_factors};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sum::Neumaier;

const BLOCK: usize = 1 << 14;
/// Required agreement between the exact and the normalised-eigenvalue routes
/// to `c_n`.
pub const CROSS_PATH_TOLERANCE: f64 = 1e-12;

/// Normalised eigenvalues `λ(n)`, convolution coefficients `c_n`, and the
/// prefix power sums `S_j(x) = Σ_{n≤x} n^j c_n` for `j = 0..=3`.
///
/// Index conventions: `lambda[n-1]`, `c[n-1]`, and `prefix[j][n]` with
/// `prefix[j][0] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable<F> {
    n: usize,
    lambda: Vec<F>,
    c: Vec<F>,
    prefix: [Vec<F>; 4],
    path_agreement: f64,
}

/// Divisors `m` of `n` with `m² | n`, from the factorisation of `n`.
fn square_divisor_roots(fac: &[(u64, u32)]) -> Vec<u64> {
    let mut out = vec![1u64];
    for &(p, e) in fac {
        let half = e / 2;
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..half {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out
}

impl<F: Real> CoeffTable<F> {
    /// Builds `λ(n)` and `c_n` from exact coefficients.
    ///
    /// `c_n` is evaluated twice: once from the defining formula
    /// `n^{1−κ} Σ_{m²|n} m^{2(κ−1)} a(n/m²)²` as an exact rational rounded to
    /// nearest, once as `Σ_{m²|n} λ(n/m²)²`. The exact value is stored; the
    /// largest relative difference is kept in [`Self::path_agreement`] and
    /// must not exceed [`CROSS_PATH_TOLERANCE`].
    pub fn from_fourier(ft: &FourierTable) -> Result<Self> {
        let n = ft.len();
        let w = ft.kappa() - 1;
        let half_pow = (w / 2) as i32; // κ−1 = 2·half_pow + 1
        let spf = smallest_prime_factors(n);

        let lambda64: Vec<f64> = (1..n + 1)
            .into_par_iter()
            .with_min_len(BLOCK)
            .map(|m| {
                let mf = m as f64;
                big_to_f64(ft.get(m)) / (mf.powi(half_pow) * mf.sqrt())
            })
            .collect();

        let rows: Vec<(f64, f64)> = (1..n + 1)
            .into_par_iter()
            .with_min_len(BLOCK)
            .map(|m| {
                let roots = square_divisor_roots(&factor_with(&spf, m));
                let mut num = BigInt::zero();
                let mut float = Neumaier::<f64>::new();
                for r in roots {
                    let cof = m / (r * r) as usize;
                    let a = ft.get(cof);
                    num += BigInt::from(r).pow(2 * w) * a * a;
                    let l = lambda64[cof - 1];
                    float.add(l * l);
                }
                let den = BigInt::from(m).pow(w);
                let exact = BigRational::new_raw(num, den).to_f64().unwrap_or(f64::NAN);
                (exact, float.value())
            })
            .collect();

        let mut agreement = 0.0f64;
        for &(e, f) in &rows {
            let scale = e.abs().max(f64::MIN_POSITIVE);
            agreement = agreement.max((e - f).abs() / scale);
        }
        if !(agreement <= CROSS_PATH_TOLERANCE) {
            return Err(Error::Domain(format!(
                "c_n routes disagree: max relative difference {agreement:e}"
            )));
        }
        let c: Vec<F> = rows.iter().map(|&(e, _)| F::of(e)).collect();
        let lambda = lambda64.into_iter().map(F::of).collect();
        let mut table = Self::assemble(c, lambda)?;
        table.path_agreement = agreement;
        Ok(table)
    }

    /// Table from arbitrary nonnegative coefficients `c_1..c_N`; `λ` is left
    /// empty. Used for synthetic sequences.
    pub fn from_convolution(c: Vec<F>) -> Result<Self> {
        if c.iter().any(|v| !(*v >= F::zero())) {
            return Err(Error::Domain(
                "coefficients must be finite and nonnegative".into(),
            ));
        }
        Self::assemble(c, Vec::new())
    }

    fn assemble(c: Vec<F>, lambda: Vec<F>) -> Result<Self> {
        let n = c.len();
        if n == 0 {
            return Err(Error::InvalidConfig("empty coefficient table".into()));
        }
        let mut prefix: [Vec<F>; 4] = Default::default();
        for (j, col) in prefix.iter_mut().enumerate() {
            let mut v = Vec::new();
            v.try_reserve_exact(n + 1).map_err(|e| Error::Resource {
                n,
                reason: format!("prefix sums: {e}"),
            })?;
            v.push(F::zero());
            let mut acc = Neumaier::<F>::new();
            for (i, &ci) in c.iter().enumerate() {
                let k = F::from_usize(i + 1).unwrap();
                acc.add(k.powi(j as i32) * ci);
                v.push(acc.value());
            }
            *col = v;
        }
        Ok(Self {
            n,
            lambda,
            c,
            prefix,
            path_agreement: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `c_n`, `1 ≤ n ≤ N`.
    #[inline]
    pub fn c(&self, n: usize) -> F {
        self.c[n - 1]
    }

    pub fn c_slice(&self) -> &[F] {
        &self.c
    }

    /// `λ(n)`; empty for synthetic tables.
    pub fn lambda(&self, n: usize) -> Option<F> {
        self.lambda.get(n - 1).copied()
    }

    /// `S_j(m) = Σ_{n≤m} n^j c_n` for integer `m ≤ N`.
    #[inline]
    pub fn prefix(&self, j: usize, m: usize) -> F {
        self.prefix[j][m]
    }

    /// Largest relative difference between the two `c_n` routes.
    pub fn path_agreement(&self) -> f64 {
        self.path_agreement
    }

    /// Keeps `n ≤ m`.
    pub fn truncated(&self, m: usize) -> Self {
        let m = m.min(self.n);
        Self {
            n: m,
            lambda: self.lambda.iter().take(m).copied().collect(),
            c: self.c[..m].to_vec(),
            prefix: std::array::from_fn(|j| self.prefix[j][..=m].to_vec()),
            path_agreement: self.path_agreement,
        }
    }
}
