use std::fmt::Write;

use gauge_mps_core::symmetry::SymmetryReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub element: usize,
    pub site: Option<usize>,
    pub residual: Option<f64>,
}

/// Serialised symmetry report. Non-finite residuals become `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub setting: String,
    #[serde(rename = "N_values")]
    pub n_values: Vec<usize>,
    pub tolerance: f64,
    pub max_residual: Option<f64>,
    pub failures: Vec<FailureJson>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ReportJson {
    pub fn from_report(rep: &SymmetryReport) -> Self {
        ReportJson {
            setting: rep.setting.as_str().into(),
            n_values: rep.n_values.clone(),
            tolerance: rep.tolerance,
            max_residual: finite(rep.max_residual),
            failures: rep
                .failures()
                .map(|e| FailureJson { n: e.n, element: e.element, site: e.site, residual: finite(e.residual) })
                .collect(),
        }
    }
}

fn sci(x: Option<f64>) -> String {
    match x {
        Some(v) => format!("{v:.2e}"),
        None => "nan".into(),
    }
}

/// Human-readable report: a header, one row per failure ordered by `N` and
/// element, and a closing PASS or FAIL line.
pub fn render_text(rep: &ReportJson) -> String {
    let mut out = String::new();
    let ns: Vec<String> = rep.n_values.iter().map(usize::to_string).collect();
    writeln!(out, "setting: {}", rep.setting).unwrap();
    writeln!(out, "N: {}", ns.join(", ")).unwrap();
    writeln!(out, "tolerance: {}", sci(Some(rep.tolerance))).unwrap();
    writeln!(out, "max residual: {}", sci(rep.max_residual)).unwrap();
    if rep.failures.is_empty() {
        writeln!(out, "PASS").unwrap();
        return out;
    }
    let mut rows = rep.failures.clone();
    rows.sort_by_key(|f| (f.n, f.element, f.site));
    writeln!(out, "{:>4} {:>8} {:>5}  residual", "N", "element", "site").unwrap();
    for f in &rows {
        let site = f.site.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        writeln!(out, "{:>4} {:>8} {:>5}  {}", f.n, f.element, site, sci(f.residual)).unwrap();
    }
    writeln!(out, "FAIL: {} check(s) above tolerance", rows.len()).unwrap();
    out
}

pub fn render_json(rep: &ReportJson) -> String {
    let mut s = serde_json::to_string_pretty(rep).expect("reports serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(failures: Vec<FailureJson>) -> ReportJson {
        ReportJson { setting: "bab".into(), n_values: vec![1, 2], tolerance: 1e-9, max_residual: Some(0.25), failures }
    }

    fn failure(n: usize, element: usize, residual: f64) -> FailureJson {
        FailureJson { n, element, site: Some(0), residual: Some(residual) }
    }

    #[test]
    fn empty_failure_list_is_a_pass() {
        let text = render_text(&report(vec![]));
        assert_eq!(text.lines().last(), Some("PASS"));
        assert!(text.contains("tolerance: 1.00e-9"));
    }

    #[test]
    fn one_failure_gives_one_row() {
        let text = render_text(&report(vec![failure(2, 3, 0.123456)]));
        let rows: Vec<&str> = text.lines().filter(|l| l.trim_end().ends_with("1.23e-1")).collect();
        assert_eq!(rows.len(), 1);
        assert!(text.ends_with("FAIL: 1 check(s) above tolerance\n"));
    }

    #[test]
    fn rows_are_ordered_by_length_then_element() {
        let text = render_text(&report(vec![failure(2, 1, 0.5), failure(1, 7, 0.5), failure(1, 2, 0.5)]));
        let keys: Vec<(usize, usize)> = text
            .lines()
            .filter_map(|l| {
                let mut it = l.split_whitespace();
                Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?))
            })
            .collect();
        assert_eq!(keys, vec![(1, 2), (1, 7), (2, 1)]);
    }

    #[test]
    fn json_round_trips_and_uses_the_documented_keys() {
        let rep = report(vec![FailureJson { n: 1, element: 4, site: None, residual: None }]);
        let text = render_json(&rep);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in ["setting", "N_values", "tolerance", "max_residual", "failures"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["failures"][0]["N"], 1);
        assert!(v["failures"][0]["residual"].is_null());
        assert_eq!(serde_json::from_str::<ReportJson>(&text).unwrap(), rep);
    }

    #[test]
    fn non_finite_residuals_render_as_nan() {
        let mut rep = report(vec![]);
        rep.max_residual = None;
        assert!(render_text(&rep).contains("max residual: nan"));
    }
}
