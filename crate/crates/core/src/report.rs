//! Structured JSON reports and atomic file output.
//!
//! A report records everything needed to reproduce a run: the inner-product
//! convention, all tolerances, the sampling configuration, and the per-case
//! results. Serialization order is fixed by the struct definitions, so the
//! same configuration and seed always produce byte-identical output.

use crate::error::{Error, Result};
use crate::liealg::INNER_PRODUCT_CONVENTION;
use crate::obstruct::CaseReport;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Threshold below which a curvature value or residual counts as zero.
    pub zero: f64,
    /// Allowed relative deviation between closed-form and finite-difference
    /// fundamental tensors.
    pub hessian: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub norms: usize,
    pub flags: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub convention: &'static str,
    pub tolerances: Tolerances,
    pub config: RunConfig,
    pub cases: Vec<CaseReport>,
}

impl Report {
    pub fn new(tolerances: Tolerances, config: RunConfig, cases: Vec<CaseReport>) -> Report {
        Report {
            convention: INNER_PRODUCT_CONVENTION,
            tolerances,
            config,
            cases,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
        s.push('\n');
        Ok(s)
    }
}

/// Write `contents` to `path` atomically: write a sibling temporary file,
/// then rename it over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("bad output path {path:?}")))?;
    let tmp = match dir {
        Some(d) => d.join(format!(".{}.tmp", file_name.to_string_lossy())),
        None => Path::new(&format!(".{}.tmp", file_name.to_string_lossy())).to_path_buf(),
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::CaseId;
    use crate::obstruct::verify_case;

    #[test]
    fn report_is_deterministic_and_atomic() {
        let tol = Tolerances {
            zero: 1e-9,
            hessian: 1e-5,
        };
        let config = RunConfig {
            norms: 2,
            flags: 20,
            seed: 7,
        };
        let cases = vec![verify_case(CaseId::SphereSu, 2, 20, 7, 1e-9).unwrap()];
        let r1 = Report::new(tol.clone(), config.clone(), cases);
        let cases2 = vec![verify_case(CaseId::SphereSu, 2, 20, 7, 1e-9).unwrap()];
        let r2 = Report::new(tol, config, cases2);
        let j1 = r1.to_json().unwrap();
        assert_eq!(j1, r2.to_json().unwrap());
        assert!(j1.contains("\"convention\""));
        assert!(j1.contains("\"zero\": 1e-9"));

        let dir = std::env::temp_dir().join(format!("report-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.json");
        write_atomic(&path, &j1).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), j1);
        // No leftover temporary file.
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
