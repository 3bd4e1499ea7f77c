//! Family sweeps: one [`PuReport`] per body, flattened to table rows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::family::{BodySpec, FamilySpec};
use crate::geodesic::{pu_report, PuReport};
use crate::radii::{sandwich_check, SandwichCheck};
use crate::tolerances::JOHN_EPS;
use crate::{par, Result};

pub const CSV_HEADER: &str = "family,param,sys,area,R,r,a,b,c,deficit,t,L,D,diam,status";

/// One table row. The full report and sandwich outcome ride along but are
/// not part of the CSV/JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: String,
    pub param: String,
    pub sys: f64,
    pub area: f64,
    #[serde(rename = "R")]
    pub circumradius: f64,
    #[serde(rename = "r")]
    pub inradius: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub deficit: f64,
    pub t: f64,
    #[serde(rename = "L")]
    pub loop_length: f64,
    #[serde(rename = "D")]
    pub loop_distance: f64,
    pub diam: f64,
    /// `ok`, `fail:<check>|<check>` or `error:<message>`.
    pub status: String,
    #[serde(skip)]
    pub report: Option<PuReport>,
    #[serde(skip)]
    pub sandwich: Option<SandwichCheck>,
}

impl SweepRow {
    fn from_report(family: &str, param: String, r: PuReport, sandwich: SandwichCheck) -> Self {
        let mut failures = r.checks.failures();
        if !sandwich.holds {
            failures.push("sandwich");
        }
        let status = if failures.is_empty() { "ok".to_string() } else { format!("fail:{}", failures.join("|")) };
        SweepRow {
            family: family.into(),
            param,
            sys: r.sys,
            area: r.area,
            circumradius: r.circumradius,
            inradius: r.inradius,
            a: r.john.a(),
            b: r.john.b(),
            c: r.john.c(),
            deficit: r.deficit,
            t: r.t,
            loop_length: r.loop_length,
            loop_distance: r.loop_distance,
            diam: r.diam,
            status,
            report: Some(r),
            sandwich: Some(sandwich),
        }
    }

    fn failed(family: &str, param: String, message: &str) -> Self {
        let clean: String = message.chars().map(|c| if c == ',' || c == '\n' || c == '\r' { ';' } else { c }).collect();
        SweepRow {
            family: family.into(),
            param,
            sys: f64::NAN,
            area: f64::NAN,
            circumradius: f64::NAN,
            inradius: f64::NAN,
            a: f64::NAN,
            b: f64::NAN,
            c: f64::NAN,
            deficit: f64::NAN,
            t: f64::NAN,
            loop_length: f64::NAN,
            loop_distance: f64::NAN,
            diam: f64::NAN,
            status: format!("error:{clean}"),
            report: None,
            sandwich: None,
        }
    }

    /// The body was analysed (its checks may still have failed).
    pub fn is_measured(&self) -> bool {
        !self.status.starts_with("error:")
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Analyses one body: mesh, report and sandwich check.
pub fn analyze_body(family: &FamilySpec, param: String, body: &BodySpec) -> SweepRow {
    let run = || -> Result<SweepRow> {
        let m = body.mesh_for(family)?;
        let r = pu_report(&m, family.steiner)?;
        let s = sandwich_check(&m, &r.john, JOHN_EPS);
        Ok(SweepRow::from_report(&family.name, param.clone(), r, s))
    };
    run().unwrap_or_else(|e| SweepRow::failed(&family.name, param.clone(), &e.to_string()))
}

/// Rows in parameter order. Body failures become `error:` rows; only an
/// invalid spec fails the sweep.
pub fn sweep(spec: &FamilySpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let members = spec.members();
    Ok(par::map(&members, |(param, body)| analyze_body(spec, param.clone(), body)))
}

/// Sweeps several families into one table.
pub fn sweep_all(specs: &[FamilySpec]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for s in specs {
        rows.extend(sweep(s)?);
    }
    Ok(rows)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with [`CSV_HEADER`], floats in `{:.16e}` (17 significant digits).
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let nums = [
            r.sys,
            r.area,
            r.circumradius,
            r.inradius,
            r.a,
            r.b,
            r.c,
            r.deficit,
            r.t,
            r.loop_length,
            r.loop_distance,
            r.diam,
        ];
        let body: Vec<String> = nums.iter().map(|&x| num(x)).collect();
        writeln!(s, "{},{},{},{}", r.family, r.param, body.join(","), r.status).unwrap();
    }
    s
}

/// JSON array with the CSV fields; non-finite numbers become `null`.
pub fn to_json(rows: &[SweepRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::family::FamilyKind;

    #[test]
    fn csv_shape() {
        let spec = FamilySpec {
            max_edge: Some(0.5),
            ..FamilySpec::new("e", FamilyKind::Ellipsoid { axes: vec![[1.0, 1.0, 1.0], [1.0, 1.0, 2.0]] })
        };
        let rows = sweep(&spec).unwrap();
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.split(',').count() == 15));
        assert!(lines[1].starts_with("e,1:1:1,"));
    }

    #[test]
    fn failures_become_rows() {
        let row = SweepRow::failed("f", "p".into(), "bad, worse\nworst");
        assert_eq!(row.status, "error:bad; worse;worst");
        assert!(to_csv(&[row]).lines().nth(1).unwrap().split(',').count() == 15);
    }
}
