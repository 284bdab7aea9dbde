//! Text cache for exact coefficient tables.
//!
//! ```text
//! # rsmoments tau v1 kappa=12 N=4
//! 1,1
//! 2,-24
//! 3,252
//! 4,-1472
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;

use super::fourier::{FourierTable, WeightConfig};
use crate::error::{Error, Result};

const MAGIC: &str = "# rsmoments tau v1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn header_line(kappa: u32, n: usize) -> String {
    format!("{MAGIC} kappa={kappa} N={n}")
}

pub fn save_fourier(table: &FourierTable, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", header_line(table.kappa(), table.len())).map_err(io_err(path))?;
    for (i, a) in table.as_slice().iter().enumerate() {
        writeln!(w, "{},{}", i + 1, a).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Parses the header of a cache file, returning `(kappa, N)`.
pub fn read_header(path: &Path) -> Result<(u32, usize)> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut line = String::new();
    BufReader::new(file)
        .read_line(&mut line)
        .map_err(io_err(path))?;
    parse_header(path, line.trim_end())
}

fn parse_header(path: &Path, line: &str) -> Result<(u32, usize)> {
    let perr = |msg: String| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        msg,
    };
    let rest = line
        .strip_prefix(MAGIC)
        .ok_or_else(|| perr(format!("expected header `{MAGIC} kappa=<k> N=<N>`")))?;
    let mut kappa = None;
    let mut n = None;
    for tok in rest.split_whitespace() {
        match tok.split_once('=') {
            Some(("kappa", v)) => {
                kappa = Some(v.parse().map_err(|_| perr(format!("bad kappa `{v}`")))?)
            }
            Some(("N", v)) => n = Some(v.parse().map_err(|_| perr(format!("bad N `{v}`")))?),
            _ => return Err(perr(format!("unexpected header token `{tok}`"))),
        }
    }
    match (kappa, n) {
        (Some(k), Some(n)) => Ok((k, n)),
        _ => Err(perr("header must declare kappa and N".into())),
    }
}

pub fn load_fourier(path: &Path) -> Result<FourierTable> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "empty file".into(),
        })?
        .map_err(io_err(path))?;
    let (kappa, n) = parse_header(path, first.trim_end())?;
    WeightConfig::new(kappa, n).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        msg: e.to_string(),
    })?;

    let mut a = Vec::with_capacity(n);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line.map_err(io_err(path))?;
        let perr = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            msg,
        };
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if a.len() == n {
            return Err(perr(format!("more than the declared N={n} rows")));
        }
        let (k, v) = line
            .split_once(',')
            .ok_or_else(|| perr(format!("expected `<n>,<a(n)>`, got `{line}`")))?;
        let k: usize = k
            .parse()
            .map_err(|_| perr(format!("non-integer index `{k}`")))?;
        if k != a.len() + 1 {
            return Err(perr(format!("expected index {}, got {k}", a.len() + 1)));
        }
        let v: BigInt = v
            .parse()
            .map_err(|_| perr(format!("non-integer coefficient `{v}`")))?;
        a.push(v);
    }
    if a.len() != n {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: a.len() + 2,
            msg: format!("file ends after {} rows, header declares N={n}", a.len()),
        });
    }
    Ok(FourierTable::from_parts(kappa, a))
}

/// Loads a cache and checks it against the requested weight; the table may
/// be longer than `cfg.n` but not shorter.
pub fn load_fourier_for(path: &Path, cfg: WeightConfig) -> Result<FourierTable> {
    let (kappa, n) = read_header(path)?;
    if kappa != cfg.kappa {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: format!("cache has kappa={kappa}, requested kappa={}", cfg.kappa),
        });
    }
    if n < cfg.n {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: format!("cache has N={n}, requested N={}", cfg.n),
        });
    }
    let table = load_fourier(path)?;
    Ok(table.truncated(cfg.n))
}
