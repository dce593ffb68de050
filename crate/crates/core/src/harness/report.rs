//! Scenario reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Agreement within the floating-point tolerance.
    Approx,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Value,
    /// Certificate on success; the violating instance on failure.
    pub witness: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub exact: bool,
    pub inputs: Vec<String>,
    pub checks: Vec<Check>,
    pub runtime_ms: f64,
    /// Extra structured output, such as tables or subtrees.
    pub data: Value,
    #[serde(skip)]
    pub csv: Option<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Report {
    pub fn new(scenario: impl Into<String>, seed: u64, exact: bool) -> Self {
        Self {
            scenario: scenario.into(),
            seed,
            exact,
            inputs: Vec::new(),
            checks: Vec::new(),
            runtime_ms: 0.0,
            data: Value::Null,
            csv: None,
            started: Some(Instant::now()),
        }
    }

    /// `ok` becomes `Pass` when exact and `Approx` otherwise.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, measured: Value, witness: Value) {
        let status = match (ok, self.exact) {
            (false, _) => Status::Fail,
            (true, true) => Status::Pass,
            (true, false) => Status::Approx,
        };
        self.checks.push(Check { name: name.into(), status, measured, witness });
    }

    /// Check that holds or fails independently of the number type.
    pub fn check_strict(&mut self, name: impl Into<String>, ok: bool, measured: Value, witness: Value) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), status, measured, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn finish(mut self) -> Self {
        if let Some(t) = self.started.take() {
            self.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
        }
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Writes `<scenario>.json`, and `<scenario>.csv` when present, into
    /// `dir` through a temporary file and a rename.
    pub fn write_atomic(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(io_err)?;
        let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        let mut written = vec![write_file(dir, &format!("{}.json", self.scenario), text.as_bytes())?];
        if let Some(csv) = &self.csv {
            written.push(write_file(dir, &format!("{}.csv", self.scenario), csv.as_bytes())?);
        }
        Ok(written)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    fs::rename(&tmp, &path).map_err(io_err)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_and_atomic_write() {
        let mut r = Report::new("demo", 9, false);
        r.check("close", true, json!(1.0), Value::Null);
        assert_eq!(r.checks[0].status, Status::Approx);
        assert!(r.passed());
        r.check_strict("bad", false, json!(0), json!({"x": 1}));
        assert!(!r.passed());
        r.csv = Some("n\n1\n".into());
        let dir = std::env::temp_dir().join(format!("freelip-report-{}", std::process::id()));
        let paths = r.finish().write_atomic(&dir).unwrap();
        assert_eq!(paths.len(), 2);
        let v: Value = serde_json::from_str(&fs::read_to_string(&paths[0]).unwrap()).unwrap();
        assert_eq!(v["seed"], 9);
        assert_eq!(v["checks"][1]["status"], "fail");
        fs::remove_dir_all(dir).unwrap();
    }
}
