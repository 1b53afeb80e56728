use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use crate::error::{Error, Result};
use crate::fock::Exponent;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CSV_HEADER: [&str; 5] = ["name", "defect", "tolerance", "pass", "tail_bound"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Passes when `defect ≤ tolerance`.
    AtMost,
    /// Passes when `defect > tolerance`; used for separation checks.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub tail_bound: f64,
    pub notes: String,
    #[serde(skip)]
    pub bound: Bound,
}

impl Case {
    pub fn at_most(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        let mut c = Case {
            name: name.into(),
            defect,
            tolerance,
            pass: false,
            tail_bound: 0.0,
            notes: String::new(),
            bound: Bound::AtMost,
        };
        c.evaluate();
        c
    }

    pub fn above(name: impl Into<String>, defect: f64, tolerance: f64) -> Self {
        let mut c = Case::at_most(name, defect, tolerance);
        c.bound = Bound::Above;
        c.notes = "lower bound: passes when defect > tolerance".into();
        c.evaluate();
        c
    }

    pub fn with_tail(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound;
        self
    }

    pub fn note(mut self, text: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(text.as_ref());
        self
    }

    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
        self.evaluate();
    }

    // NaN never passes either bound.
    fn evaluate(&mut self) {
        self.pass = match self.bound {
            Bound::AtMost => self.defect <= self.tolerance,
            Bound::Above => self.defect > self.tolerance,
        };
    }
}

/// Resolved settings; output locations are left out so a report does not
/// depend on where it was written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub suite: String,
    pub alpha: f64,
    pub p: serde_json::Value,
    pub degree_cap: usize,
    pub delta: Option<f64>,
    pub radius: Option<f64>,
    pub seed: u64,
    pub tol_overrides: BTreeMap<String, f64>,
}

impl ConfigEcho {
    pub fn new(config: &RunConfig) -> Self {
        ConfigEcho {
            suite: config.suite.name().into(),
            alpha: config.alpha,
            p: match config.p {
                Exponent::Finite(p) => serde_json::json!(p),
                Exponent::Infinity => serde_json::json!("inf"),
            },
            degree_cap: config.degree_cap,
            delta: config.delta,
            radius: config.radius,
            seed: config.seed,
            tol_overrides: config.tol_overrides.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub cases: Vec<Case>,
    pub summary: Summary,
    pub seed: u64,
    pub artifact_version: String,
}

impl VerificationReport {
    /// Sorts cases by name and tallies the summary.
    pub fn new(config: &RunConfig, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = cases.iter().filter(|c| c.pass).count();
        VerificationReport {
            suite: config.suite.name().into(),
            config: ConfigEcho::new(config),
            summary: Summary { total: cases.len(), passed, failed: cases.len() - passed },
            cases,
            seed: config.seed,
            artifact_version: ARTIFACT_VERSION.into(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn case(&self, name: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(report: &VerificationReport) -> String {
    let mut buf = Vec::new();
    write_csv(report, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("csv is utf-8")
}

fn write_csv(report: &VerificationReport, out: impl Write) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for c in &report.cases {
        w.write_record([
            c.name.clone(),
            format_real(c.defect),
            format_real(c.tolerance),
            c.pass.to_string(),
            format_real(c.tail_bound),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_csv(report: &VerificationReport, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_csv(report, file).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => io_err(source),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Suite;

    fn report(cases: Vec<Case>) -> VerificationReport {
        VerificationReport::new(&RunConfig::new(Suite::FockVerify), cases)
    }

    #[test]
    fn summary_and_order() {
        let r = report(vec![Case::at_most("b", 1.0, 0.5), Case::at_most("a", 0.1, 0.5), Case::above("c", f64::NAN, 0.0)]);
        assert_eq!(r.cases.iter().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(r.summary, Summary { total: 3, passed: 1, failed: 2 });
        assert!(!r.all_passed());
    }

    #[test]
    fn csv_shape() {
        assert_eq!(csv_string(&report(vec![])), "name,defect,tolerance,pass,tail_bound\n");
        let r = report(vec![Case::at_most("x", 0.1, 1.0), Case::at_most("y,z", 1e-300, 0.0), Case::at_most("w", 3.0, 1.0)]);
        let text = csv_string(&r);
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        for (row, case) in rd.records().zip(&r.cases) {
            let row = row.unwrap();
            assert_eq!(&row[0], case.name);
            assert_eq!(row[1].parse::<f64>().unwrap().to_bits(), case.defect.to_bits());
        }
    }

    #[test]
    fn io_errors_carry_path() {
        let err = export_csv(&report(vec![]), Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
