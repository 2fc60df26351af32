//! Fixed-header CSV output and the fundamental-solution table reader.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fundsol::FundSolTable;

pub const FUNDSOL_HEADER: &str = "r,phi_re,phi_im,e1_rem,e2_rem,total_re,total_im,err_estimate";
pub const APPLY_HEADER: &str = "r,value_integral,value_spectral,abs_diff";
pub const REPORT_HEADER: &str = "name,value,threshold,pass";

/// 17 significant digits: enough for an exact round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn fundsol_csv(table: &FundSolTable) -> String {
    let mut out = String::with_capacity(160 * (table.len() + 1));
    out.push_str(FUNDSOL_HEADER);
    out.push('\n');
    for i in 0..table.len() {
        let cols = [
            table.radii[i],
            table.phi[i].re,
            table.phi[i].im,
            table.e1_rem[i],
            table.e2_rem[i],
            table.total[i].re,
            table.total[i].im,
            table.err_estimate[i],
        ];
        let line: Vec<String> = cols.iter().map(|&c| fmt_f64(c)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

/// Radii and |total| from a table written by [`fundsol_csv`].
#[derive(Debug, Clone, PartialEq)]
pub struct TableSamples {
    pub radii: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

pub fn parse_fundsol_csv(text: &str) -> Result<TableSamples> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == FUNDSOL_HEADER => {}
        Some((_, h)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unexpected header {:?}", h.trim()),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty input; expected a header row".into(),
            })
        }
    }
    let mut radii = Vec::new();
    let mut magnitudes = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let mut vals = [0.0f64; 8];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not a number: {f:?}"),
            })?;
        }
        if let Some(&prev) = radii.last() {
            if !(vals[0] > prev) {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "radii must be strictly increasing".into(),
                });
            }
        }
        radii.push(vals[0]);
        magnitudes.push(vals[5].hypot(vals[6]));
    }
    Ok(TableSamples { radii, magnitudes })
}

/// One row of a `name,value,threshold,pass` report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    /// False when some underlying integral stopped short of its tolerance.
    pub converged: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            converged: true,
        }
    }

    pub fn with_convergence(mut self, converged: bool) -> Self {
        self.converged = converged;
        self
    }

    pub fn pass(&self) -> bool {
        self.value.is_finite() && self.value <= self.threshold
    }
}

pub fn report_csv(checks: &[Check]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for c in checks {
        let _ = writeln!(out, "{},{},{},{}", c.name, fmt_f64(c.value), fmt_f64(c.threshold), c.pass());
    }
    out
}
