//! The analysis pipeline and its report.
//!
//! JSON is the full record. `csv-summary` keeps one row per input with the columns
//! in [`CSV_COLUMNS`], optionally preceded by the swept parameter.

use std::time::Instant;

use photon_npt_core::moments::mandel_statistics;
use photon_npt_core::{
    classicality_check, default_max_order, npt_certificate, ClassicalityCertificate, HankelKind, NptCertificate,
};
use serde::Serialize;

use crate::error::Result;
use crate::input::InputSource;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputSpec {
    #[serde(flatten)]
    pub source: InputSource,
    pub max_order: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PndSummary {
    pub n_max: usize,
    pub tail_bound: f64,
    pub mean: f64,
    pub antibunching_value: f64,
    pub mandel_q: Option<f64>,
}

/// Numerical form of the two theorems: whenever the hypothesis holds beyond `tol`
/// (antibunching, or a failed Hankel test) the transposed spectrum must contain a
/// negative eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TheoremConsistency {
    pub thm1_chain_ok: bool,
    pub thm2_chain_ok: bool,
}

impl TheoremConsistency {
    pub fn ok(&self) -> bool {
        self.thm1_chain_ok && self.thm2_chain_ok
    }
}

/// Wall-clock milliseconds per stage. Not part of the reproducible body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub build_ms: f64,
    pub classicality_ms: f64,
    pub npt_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input_spec: InputSpec,
    pub pnd_summary: PndSummary,
    pub classicality: ClassicalityCertificate,
    pub npt: NptCertificate,
    pub theorem_consistency: TheoremConsistency,
    pub timings: Timings,
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Runs the full pipeline on one input. `max_order = None` uses the default policy.
pub fn analyze(source: &InputSource, max_order: Option<usize>, tol: f64) -> Result<AnalysisReport> {
    let start = Instant::now();
    let pnd = source.build()?;
    let build_ms = ms_since(start);
    let max_order = max_order.unwrap_or_else(|| default_max_order(&pnd));
    let stats = mandel_statistics(&pnd);

    let t = Instant::now();
    let classicality = classicality_check(&pnd, max_order, tol)?;
    let classicality_ms = ms_since(t);

    let t = Instant::now();
    let npt = npt_certificate(&pnd, max_order, tol)?;
    let npt_ms = ms_since(t);

    let negative_spectrum = npt.min_pt_eigenvalue < 0.0;
    let theorem_consistency = TheoremConsistency {
        thm1_chain_ok: stats.antibunching_value >= -tol || negative_spectrum,
        thm2_chain_ok: !classicality.is_nonclassical() || negative_spectrum,
    };
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input_spec: InputSpec { source: source.clone(), max_order, tol },
        pnd_summary: PndSummary {
            n_max: pnd.n_max(),
            tail_bound: pnd.tail_bound(),
            mean: stats.mean,
            antibunching_value: stats.antibunching_value,
            mandel_q: stats.mandel_q,
        },
        classicality,
        npt,
        theorem_consistency,
        timings: Timings { build_ms, classicality_ms, npt_ms, total_ms: ms_since(start) },
    })
}

pub const CSV_COLUMNS: [&str; 10] = [
    "mean",
    "antibunching_value",
    "classical",
    "classicality_kind",
    "classicality_order",
    "npt",
    "npt_method",
    "npt_order",
    "min_pt_eigenvalue",
    "log_negativity",
];

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl AnalysisReport {
    pub fn csv_fields(&self) -> Vec<String> {
        let kind = self.classicality.detecting_kind.map(|k| match k {
            HankelKind::L => "L",
            HankelKind::LTilde => "L_tilde",
        });
        vec![
            num(self.pnd_summary.mean),
            num(self.pnd_summary.antibunching_value),
            (!self.classicality.is_nonclassical()).to_string(),
            opt(kind),
            opt(self.classicality.detecting_order),
            self.npt.is_npt().to_string(),
            opt(self.npt.method.map(|m| m.as_str())),
            opt(self.npt.detecting_order),
            num(self.npt.min_pt_eigenvalue),
            num(self.npt.log_negativity),
        ]
    }

    /// JSON without the `timings` key, for reproducibility checks.
    pub fn body_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("timings");
        v
    }
}

/// Writes the summary table; `param` names the leading column when sweeping.
pub fn write_csv<W: std::io::Write>(
    out: W,
    param: Option<&str>,
    rows: &[(Option<f64>, &AnalysisReport)],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = param.into_iter().chain(CSV_COLUMNS).collect();
    w.write_record(&header)?;
    for (value, report) in rows {
        let mut fields: Vec<String> = value.map(num).into_iter().collect();
        fields.extend(report.csv_fields());
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}
