use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use rsmoments::coeffs::{compute_fourier, load_fourier_for, save_fourier, WeightConfig};
use rsmoments::constants::{b_k, second_moment_constant, second_moment_prediction};
use rsmoments::errterm::{calibrate, calibrate_default, ErrorSample, VoronoiSum};
use rsmoments::moments::{
    integrate_delta1_power, moment_r1, moment_r2, oscillatory_bound, second_moment, verify_theorem,
    Trig,
};
use rsmoments::radicals::{count_near_solutions, count_rs, Budget, CountQuery, Signs};
use rsmoments::{Calibration, CoeffTable, MomentReport};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{num, opt, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Series {
    Delta1,
    R1,
    R2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    SecondMoment,
    Theorem,
    R2Scaling,
    Oscillatory,
}

pub struct Ctx {
    pub cfg: RunConfig,
}

impl Ctx {
    fn require_n(&self, what: &str) -> Result<usize, CliError> {
        self.cfg
            .n
            .ok_or_else(|| CliError::Usage(format!("{what} needs --n")))
    }

    /// Cached table sizes for the configured weight, ascending.
    fn cached_sizes(&self) -> Vec<usize> {
        let prefix = format!("tau_k{}_n", self.cfg.kappa);
        let mut sizes: Vec<usize> = std::fs::read_dir(&self.cfg.cache)
            .into_iter()
            .flatten()
            .flatten()
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_prefix(&prefix)?
                    .strip_suffix(".csv")?
                    .parse()
                    .ok()
            })
            .collect();
        sizes.sort_unstable();
        sizes
    }

    /// Smallest cache covering `--n`, or the largest cache when `--n` is
    /// unset. Returns `(file, N in effect)`.
    fn locate(&self) -> Result<(PathBuf, usize), CliError> {
        let sizes = self.cached_sizes();
        let pick = match self.cfg.n {
            Some(n) => sizes.iter().copied().find(|&m| m >= n).map(|m| (m, n)),
            None => sizes.last().map(|&m| (m, m)),
        };
        match pick {
            Some((m, n)) => Ok((self.cfg.cache_file(m), n)),
            None => Err(CliError::MissingCache {
                dir: self.cfg.cache.clone(),
                kappa: self.cfg.kappa,
                wanted: self
                    .cfg
                    .n
                    .map(|n| format!(" and N>={n}"))
                    .unwrap_or_default(),
                hint: self
                    .cfg
                    .n
                    .map(|n| n.to_string())
                    .unwrap_or_else(|| "...".into()),
            }),
        }
    }

    fn table(&self) -> Result<(CoeffTable, usize), CliError> {
        let (path, n) = self.locate()?;
        let cfg = WeightConfig {
            kappa: self.cfg.kappa,
            n,
        };
        let ft = load_fourier_for(&path, cfg)?.truncated(n);
        Ok((CoeffTable::from_fourier(&ft)?, n))
    }

    /// Supplied constants, then the sidecar for `n`, then a fresh fit.
    fn calibration(
        &self,
        ct: &CoeffTable,
        n: usize,
        r: &mut Report,
    ) -> Result<Calibration, CliError> {
        let (cal, source) = if let (Some(a), Some(z0)) = (self.cfg.a, self.cfg.z0) {
            (Calibration::user(a, z0)?, "user")
        } else {
            let path = self.cfg.sidecar_file(n);
            match std::fs::read_to_string(&path) {
                Ok(text) => (Calibration::from_sidecar(&text, &path)?, "sidecar"),
                Err(_) => (calibrate_default(ct)?, "fitted"),
            }
        };
        r.note("calibration.source", source)
            .note("calibration.A", num(cal.a))
            .note("calibration.Z0", num(cal.z0));
        if let Some(ok) = cal.cross_validated() {
            r.note("calibration.cross_validated", ok);
        }
        Ok(cal)
    }
}

pub fn tau(ctx: &Ctx, all: bool) -> Result<String, CliError> {
    let n = ctx.require_n("tau")?;
    let ft = compute_fourier(WeightConfig::new(ctx.cfg.kappa, n)?)?;
    let range = if all { 1..=n } else { n..=n };
    Ok(range.map(|i| format!("{i},{}\n", ft.get(i))).collect())
}

pub fn coeffs(ctx: &Ctx) -> Result<Report, CliError> {
    let n = ctx.require_n("coeffs")?;
    let ft = compute_fourier(WeightConfig::new(ctx.cfg.kappa, n)?)?;
    let inv = ft.check_invariants();
    let ct = CoeffTable::from_fourier(&ft)?;
    std::fs::create_dir_all(&ctx.cfg.cache).map_err(|source| CliError::Write {
        path: ctx.cfg.cache.clone(),
        source,
    })?;
    let path = ctx.cfg.cache_file(n);
    save_fourier(&ft, &path)?;
    let mut r = Report::new("coeffs", &ctx.cfg, Some(n));
    r.columns(&[
        "N",
        "kappa",
        "checked",
        "normalization",
        "multiplicativity",
        "hecke",
        "deligne",
        "path_agreement",
        "cache_file",
    ]);
    r.row(vec![
        n.to_string(),
        ctx.cfg.kappa.to_string(),
        inv.checked.to_string(),
        inv.normalization.to_string(),
        inv.multiplicativity.to_string(),
        inv.hecke.to_string(),
        inv.deligne.to_string(),
        num(ct.path_agreement()),
        path.display().to_string(),
    ]);
    Ok(r)
}

pub struct CalibrateArgs {
    pub rho: usize,
    pub samples: usize,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub dry_run: bool,
}

pub fn calibrate_cmd(ctx: &Ctx, a: &CalibrateArgs) -> Result<Report, CliError> {
    let (ct, n) = ctx.table()?;
    let hi = a.x_max.unwrap_or(n as f64);
    let lo = a.x_min.unwrap_or(hi / 2.0);
    if a.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let xs: Vec<f64> = (0..a.samples)
        .map(|i| lo + (hi - lo) * i as f64 / (a.samples - 1) as f64)
        .collect();
    let cal = calibrate(&ct, a.rho, &xs)?;
    let mut r = Report::new("calibrate", &ctx.cfg, Some(n));
    r.param("rho", a.rho)
        .param("samples", a.samples)
        .param("x_min", num(lo))
        .param("x_max", num(hi));
    if !a.dry_run {
        let path = ctx.cfg.sidecar_file(n);
        std::fs::write(&path, cal.to_sidecar()).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        r.note("sidecar", path.display());
    }
    let (ca, cr) = cal.cross.unzip();
    r.columns(&[
        "A",
        "Z0",
        "rho",
        "samples",
        "x_min",
        "x_max",
        "residual",
        "cross_A",
        "cross_residual",
        "cross_validated",
    ]);
    r.row(vec![
        num(cal.a),
        num(cal.z0),
        a.rho.to_string(),
        a.samples.to_string(),
        num(lo),
        num(hi),
        num(cal.residual),
        opt(ca),
        opt(cr),
        cal.cross_validated()
            .map(|b| b.to_string())
            .unwrap_or_default(),
    ]);
    Ok(r)
}

pub fn constants(ctx: &Ctx, ks: &[usize], trunc: Option<usize>) -> Result<Report, CliError> {
    let (ct, n) = ctx.table()?;
    let trunc = trunc.unwrap_or(n);
    let ks = if ks.is_empty() {
        vec![3, 4, 5]
    } else {
        ks.to_vec()
    };
    let mut r = Report::new("constants", &ctx.cfg, Some(n));
    r.param("k", join(&ks)).param("trunc", trunc);
    r.columns(&["k", "l", "N", "s_kl", "tail", "B_k"]);
    for &k in &ks {
        let (b, s) = b_k(k, trunc, &ct)?;
        for (i, sv) in s.iter().enumerate() {
            r.row(vec![
                k.to_string(),
                (i + 1).to_string(),
                trunc.to_string(),
                num(sv.value),
                num(sv.tail_estimate),
                num(b.value),
            ]);
        }
    }
    Ok(r)
}

pub fn delta(ctx: &Ctx, from: f64, to: f64, count: usize, y: f64) -> Result<Report, CliError> {
    let (ct, n) = ctx.table()?;
    let mut r = Report::new("delta", &ctx.cfg, Some(n));
    r.param("from", num(from))
        .param("to", num(to))
        .param("count", count)
        .param("y", num(y));
    let cal = ctx.calibration(&ct, n, &mut r)?;
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let v = VoronoiSum::new(&ct, y)?;
    r.columns(&["x", "D0", "D1", "delta1", "R1", "R2"]);
    for i in 0..count {
        let x = if count == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (count - 1) as f64
        };
        let s = ErrorSample::at(&ct, &cal, x, Some((y, &v)))?;
        r.row(vec![
            num(s.x),
            num(s.d0),
            num(s.d1),
            num(s.delta1),
            opt(s.r1),
            opt(s.r2),
        ]);
    }
    Ok(r)
}

pub struct MomentArgs {
    pub k: usize,
    pub t1: f64,
    pub t2: f64,
    pub y: Option<f64>,
    pub of: Option<Series>,
    pub grid: usize,
    pub trunc: Option<usize>,
}

fn moment_row(m: &MomentReport) -> Vec<String> {
    vec![
        m.k.to_string(),
        num(m.t1),
        num(m.t2),
        opt(m.y),
        num(m.integral),
        opt(m.prediction),
        opt(m.ratio),
        m.nodes.to_string(),
        num(m.seconds),
    ]
}

pub fn moment(ctx: &Ctx, a: &MomentArgs) -> Result<Report, CliError> {
    let (ct, n) = ctx.table()?;
    let of = a.of.unwrap_or(if a.y.is_some() {
        Series::R2
    } else {
        Series::Delta1
    });
    if of != Series::Delta1 && a.y.is_none() {
        return Err(CliError::Usage("--of r1/r2 needs --y".into()));
    }
    if a.grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let mut r = Report::new("moment", &ctx.cfg, Some(n));
    r.param("k", a.k)
        .param("t1", num(a.t1))
        .param("t2", num(a.t2))
        .param("y", opt(a.y))
        .param("of", format!("{of:?}").to_lowercase())
        .param("grid", a.grid);
    let cal = ctx.calibration(&ct, n, &mut r)?;
    let trunc = a.trunc.unwrap_or(n);
    let b = if of == Series::Delta1 && (3..=5).contains(&a.k) {
        let b = b_k(a.k, trunc, &ct)?.0.value;
        r.note("B_k", num(b)).note("B_k.trunc", trunc);
        Some(b)
    } else {
        None
    };
    let c2 = if of == Series::Delta1 && a.k == 2 {
        let c = second_moment_constant(n, &ct)?.value;
        r.note("second_moment_series", num(c));
        Some(c)
    } else {
        None
    };
    let ratio = (a.t2 / a.t1).powf(1.0 / a.grid as f64);
    let edges: Vec<f64> = (0..=a.grid)
        .map(|i| match i {
            0 => a.t1,
            i if i == a.grid => a.t2,
            i => a.t1 * ratio.powi(i as i32),
        })
        .collect();
    r.columns(&[
        "k",
        "T1",
        "T2",
        "y",
        "integral",
        "prediction",
        "ratio",
        "nodes",
        "seconds",
    ]);
    for w in edges.windows(2) {
        let (t1, t2) = (w[0], w[1]);
        let start = Instant::now();
        let mut m = match (of, b) {
            (Series::Delta1, Some(b)) => verify_theorem(a.k, &ct, &cal, b, t1, t2)?,
            (Series::Delta1, None) => {
                let mut m = integrate_delta1_power(&ct, &cal, a.k, t1, t2)?;
                if let Some(c) = c2 {
                    let p = second_moment_prediction(c, t1, t2);
                    m.prediction = Some(p);
                    m.ratio = Some(m.integral / p);
                }
                m
            }
            (Series::R1, _) => moment_r1(&ct, a.k, t1, t2, a.y.unwrap())?,
            (Series::R2, _) => moment_r2(&ct, &cal, a.k, t1, t2, a.y.unwrap())?,
        };
        m.seconds = start.elapsed().as_secs_f64();
        for w in &m.warnings {
            r.note("warning", w);
        }
        r.row(moment_row(&m));
    }
    Ok(r)
}

pub enum OracleQuery {
    Near {
        ns: Vec<u64>,
        signs: Signs,
        delta: f64,
    },
    Rs {
        m: u64,
        c: f64,
        delta: f64,
    },
}

pub fn oracle_count(ctx: &Ctx, q: &OracleQuery) -> Result<Report, CliError> {
    let budget = Budget(ctx.cfg.budget);
    let mut r = Report::new("oracle-count", &ctx.cfg, None);
    r.columns(&["query", "count"]);
    let (query, count) = match q {
        OracleQuery::Near { ns, signs, delta } => {
            let cq = CountQuery::new(ns.clone(), signs.clone(), *delta)?;
            let label = format!(
                "near;ns={};signs={};delta={}",
                join(ns).replace(',', "/"),
                signs.to_string().replace(',', "/"),
                num(*delta)
            );
            (label, count_near_solutions(&cq, budget)?)
        }
        OracleQuery::Rs { m, c, delta } => (
            format!("rs;M={m};c={};delta={}", num(*c), num(*delta)),
            count_rs(*m, *delta, *c, budget)?,
        ),
    };
    r.row(vec![query, count.to_string()]);
    Ok(r)
}

pub struct ExperimentArgs {
    pub name: Experiment,
    pub t: Vec<f64>,
    pub k: Vec<usize>,
    pub y: Vec<f64>,
    pub trunc: Option<usize>,
}

pub fn experiment(ctx: &Ctx, a: &ExperimentArgs) -> Result<Report, CliError> {
    if a.name == Experiment::Oscillatory {
        let mut r = Report::new("experiment", &ctx.cfg, None);
        r.param("name", "oscillatory");
        r.columns(&[
            "alpha",
            "beta",
            "T",
            "g",
            "integral",
            "bound",
            "ratio",
            "closed_form",
        ]);
        let ts = if a.t.is_empty() {
            vec![1e2, 1e4]
        } else {
            a.t.clone()
        };
        for alpha in [0.0, 0.25, 1.0] {
            for beta in [1.0, 4.0, 16.0] {
                for &t in &ts {
                    for g in [Trig::Cos, Trig::Sin] {
                        let e = oscillatory_bound(alpha, beta, t, g)?;
                        r.row(vec![
                            num(alpha),
                            num(beta),
                            num(t),
                            g.to_string(),
                            num(e.integral),
                            num(e.bound),
                            num(e.ratio),
                            e.closed_form.to_string(),
                        ]);
                    }
                }
            }
        }
        return Ok(r);
    }
    let (ct, n) = ctx.table()?;
    let nf = n as f64;
    let mut r = Report::new("experiment", &ctx.cfg, Some(n));
    r.param("name", format!("{:?}", a.name).to_lowercase());
    let cal = ctx.calibration(&ct, n, &mut r)?;
    let pick = |default: &[f64], fits: &dyn Fn(f64) -> bool| -> Vec<f64> {
        let src = if a.t.is_empty() {
            default.to_vec()
        } else {
            a.t.clone()
        };
        src.into_iter().filter(|&t| fits(t)).collect()
    };
    match a.name {
        Experiment::SecondMoment => {
            r.columns(&["T", "integral", "prediction", "ratio", "abs_dev"]);
            for t in pick(&[1e4, 1e5, 1e6], &|t| t <= nf) {
                let m = second_moment(&ct, &cal, t)?;
                let ratio = m.ratio.unwrap_or(f64::NAN);
                r.row(vec![
                    num(t),
                    num(m.integral),
                    opt(m.prediction),
                    num(ratio),
                    num((ratio - 1.0).abs()),
                ]);
            }
        }
        Experiment::Theorem => {
            let trunc = a.trunc.unwrap_or(n);
            r.param("trunc", trunc);
            let ks = if a.k.is_empty() {
                vec![3, 4, 5]
            } else {
                a.k.clone()
            };
            r.columns(&[
                "k",
                "T1",
                "T2",
                "B_k",
                "integral",
                "abs_integral",
                "prediction",
                "ratio",
            ]);
            for k in ks {
                let b = b_k(k, trunc, &ct)?.0.value;
                for t in pick(&[1e3, 1e4, 1e5, 1e6], &|t| 2.0 * t <= nf) {
                    let m = verify_theorem(k, &ct, &cal, b, t, 2.0 * t)?;
                    r.row(vec![
                        k.to_string(),
                        num(t),
                        num(2.0 * t),
                        num(b),
                        num(m.integral),
                        num(m.abs_integral),
                        opt(m.prediction),
                        opt(m.ratio),
                    ]);
                }
            }
        }
        Experiment::R2Scaling => {
            r.columns(&["T", "y", "integral", "baseline", "scaled"]);
            for t in pick(&[1e6], &|t| 2.0 * t <= nf) {
                let ys = if a.y.is_empty() {
                    let y0 = t.powf(1.0 / 12.0);
                    vec![y0, 4096.0 * y0]
                } else {
                    a.y.clone()
                };
                for y in ys {
                    let m = moment_r2(&ct, &cal, 2, t, 2.0 * t, y)?;
                    for w in &m.warnings {
                        r.note("warning", w);
                    }
                    r.row(vec![
                        num(t),
                        num(y),
                        num(m.integral),
                        opt(m.extra("baseline")),
                        opt(m.extra("scaled")),
                    ]);
                }
            }
        }
        Experiment::Oscillatory => unreachable!(),
    }
    Ok(r)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}
