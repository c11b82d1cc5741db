//! Verification tables and their CSV/JSON encodings.

use serde::Serialize;

use crate::config::{format_complex, Format, RunConfig, Sweep};

/// One verification row: a quantity computed numerically, its analytic
/// value, and the absolute deviation between them. Rows without a tolerance
/// are report-only and never gate the exit code.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    pub inputs: String,
    pub analytic: f64,
    pub numeric: f64,
    pub deviation: f64,
    pub tol: Option<f64>,
}

impl Row {
    pub fn checked(
        label: impl Into<String>,
        inputs: impl Into<String>,
        analytic: f64,
        numeric: f64,
        tol: f64,
    ) -> Self {
        Self {
            label: label.into(),
            inputs: inputs.into(),
            analytic,
            numeric,
            deviation: (analytic - numeric).abs(),
            tol: Some(tol),
        }
    }

    pub fn report_only(
        label: impl Into<String>,
        inputs: impl Into<String>,
        analytic: f64,
        numeric: f64,
    ) -> Self {
        Self {
            label: label.into(),
            inputs: inputs.into(),
            analytic,
            numeric,
            deviation: (analytic - numeric).abs(),
            tol: None,
        }
    }

    fn passes(&self, tol_override: Option<f64>) -> bool {
        match (self.tol, tol_override) {
            (None, _) => true,
            (Some(_), Some(forced)) => self.deviation <= forced,
            (Some(own), None) => self.deviation <= own,
        }
    }
}

/// Echo of the effective configuration, embedded in the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub nmax: Option<usize>,
    pub gamma: Option<String>,
    pub gamma2: Option<String>,
    pub phi: Option<f64>,
    pub phi2: Option<f64>,
    pub sweep: Option<Sweep>,
    pub points: Option<usize>,
    pub n: Option<usize>,
    pub state: Option<crate::config::StateKind>,
    pub gammasq: Option<f64>,
    pub tol_override: Option<f64>,
    pub omega: Option<f64>,
    pub volume: Option<f64>,
}

impl ConfigEcho {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            nmax: cfg.nmax,
            gamma: cfg.gamma.map(format_complex),
            gamma2: cfg.gamma2.map(format_complex),
            phi: cfg.phi,
            phi2: cfg.phi2,
            sweep: cfg.sweep,
            points: cfg.points,
            n: cfg.n,
            state: cfg.state,
            gammasq: cfg.gammasq,
            tol_override: cfg.tol_override,
            omega: cfg.omega,
            volume: cfg.volume,
        }
    }
}

/// The full outcome of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: &'static str,
    pub config: ConfigEcho,
    pub rows: Vec<Row>,
    pub max_deviation: f64,
    pub pass: bool,
}

impl RunReport {
    pub fn new(cfg: &RunConfig, rows: Vec<Row>) -> Self {
        let max_deviation = rows.iter().fold(0.0f64, |acc, r| acc.max(r.deviation));
        let pass = rows.iter().all(|r| r.passes(cfg.tol_override));
        Self {
            scenario: cfg.scenario.name(),
            config: ConfigEcho::from_config(cfg),
            rows,
            max_deviation,
            pass,
        }
    }

    /// Serializes the report; CSV carries 17 significant digits per value.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text =
                    serde_json::to_string_pretty(self).expect("report is always serializable");
                text.push('\n');
                text
            }
            Format::Csv => {
                let mut out = String::from("label,inputs,analytic,numeric,deviation,tol\n");
                for row in &self.rows {
                    let tol = row
                        .tol
                        .map(|t| format!("{t:.16e}"))
                        .unwrap_or_default();
                    out.push_str(&format!(
                        "{},{},{:.16e},{:.16e},{:.16e},{}\n",
                        row.label, row.inputs, row.analytic, row.numeric, row.deviation, tol
                    ));
                }
                out
            }
        }
    }
}
