//! Independent oracles shared by the integration tests: a small
//! double-double type and compensated summation written from scratch.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        Dd::from(q1).add(Dd::from(q2)).add(Dd::from(q3))
    }

    pub fn powi(self, e: u32) -> Dd {
        (0..e).fold(Dd::from(1.0), |acc, _| acc.mul(self))
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

/// `n^{p/q}` to about 32 digits by Newton iteration on `y^q = n^p`.
pub fn rational_power(n: u64, p: u32, q: u32) -> Dd {
    let target = Dd::from(n as f64).powi(p);
    let mut y = Dd::from((n as f64).powf(p as f64 / q as f64));
    for _ in 0..3 {
        let f = y.powi(q).sub(target);
        let df = Dd::from(q as f64).mul(y.powi(q - 1));
        y = y.sub(f.div(df));
    }
    y
}

pub fn fourth_root(n: u64) -> Dd {
    rational_power(n, 1, 4)
}

/// `Σ ± n_j^{1/4}` with `minus[j-1]` negating the `j`-th term (`j ≥ 1`).
pub fn alpha(ns: &[u64], minus: &[bool]) -> Dd {
    let mut acc = fourth_root(ns[0]);
    for (j, &n) in ns.iter().enumerate().skip(1) {
        let r = fourth_root(n);
        acc = if minus[j - 1] { acc.sub(r) } else { acc.add(r) };
    }
    acc
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    s: f64,
    c: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Prefix sums `S0(j) = Σ_{n≤j} c_n` and `S1(j) = Σ_{n≤j} n·c_n` for
/// `j = 0..=c.len()`, with `c[0]` holding `c_1`.
pub fn prefix_sums(c: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (mut a, mut b) = (Compensated::default(), Compensated::default());
    let mut s0 = vec![0.0];
    let mut s1 = vec![0.0];
    for (i, &v) in c.iter().enumerate() {
        a.add(v);
        b.add((i + 1) as f64 * v);
        s0.push(a.value());
        s1.push(b.value());
    }
    (s0, s1)
}

/// Coefficients of `p(t)^k` for `p(t) = p[0] + p[1]t + p[2]t²`.
pub fn poly_power(p: [f64; 3], k: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..k {
        let mut next = vec![0.0; out.len() + 2];
        for (i, &a) in out.iter().enumerate() {
            for (j, &b) in p.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        out = next;
    }
    out
}
