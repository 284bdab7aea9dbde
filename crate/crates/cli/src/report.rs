//! Report assembly. Numbers use the shortest decimal that round-trips.

use std::fmt::Display;

use crate::config::{Format, RunConfig};

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    header: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, cfg: &RunConfig, n: Option<usize>) -> Self {
        let mut header = vec![format!("# rsmoments {command}")];
        header.extend(cfg.embed(n));
        Self {
            header,
            ..Self::default()
        }
    }

    /// Subcommand argument, recorded as `# param.key=value`.
    pub fn param(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.header.push(format!("# param.{key}={value}"));
        self
    }

    /// Derived run information, recorded as `# key=value`.
    pub fn note(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.header.push(format!("# {key}={value}"));
        self
    }

    pub fn columns(&mut self, cols: &[&'static str]) -> &mut Self {
        self.columns = cols.to_vec();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        match format {
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.join(","));
                    out.push('\n');
                }
            }
            Format::Text => {
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|i| {
                        self.rows
                            .iter()
                            .map(|r| r[i].len())
                            .chain(std::iter::once(self.columns[i].len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}"))
                        .collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                out.push_str(&line(self.columns.clone()));
                for r in &self.rows {
                    out.push_str(&line(r.iter().map(String::as_str).collect()));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;

    #[test]
    fn shortest_round_trip_numbers() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02e23, -0.0, 1.5] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(0.1), "0.1");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn csv_and_text_layouts() {
        let cfg = RunConfig::resolve(Settings::default(), None).unwrap();
        let mut r = Report::new("demo", &cfg, Some(10));
        r.param("k", 3).columns(&["a", "bb"]);
        r.row(vec!["1".into(), "22".into()]);
        let csv = r.render(Format::Csv);
        assert!(csv.starts_with("# rsmoments demo\n# config.n=10\n"));
        assert!(csv.contains("# param.k=3\na,bb\n1,22\n"));
        let text = r.render(Format::Text);
        assert!(text.ends_with("a  bb\n1  22\n"));
    }
}
