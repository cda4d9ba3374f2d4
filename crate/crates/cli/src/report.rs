use std::fmt::Write as _;
use std::path::Path;

use hermblock::certify::{CertificateReport, Hypothesis};
use serde::Serialize;

use crate::args::GlobalArgs;
use crate::files::{file_digest, write_json};
use crate::CliResult;

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DecompositionSummary {
    pub kind: String,
    pub beta: usize,
    pub n: usize,
    /// Number of direct-sum copies of the input that are decomposed.
    pub m: usize,
    pub weight: f64,
    pub isometries: usize,
    /// `‖target − Σ‖_F`, recomputed from the written file.
    pub residual: f64,
    /// `‖V_k*V_k − I‖_F` per isometry.
    pub isometry_defects: Vec<f64>,
    /// Set when the isometries are operators checked on random probes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSummary {
    pub evaluated: usize,
    pub best_margin: Option<f64>,
    pub candidate_margin: Option<f64>,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, tolerance: f64) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            tolerance,
            certificates: Vec::new(),
            decomposition: None,
            search: None,
            outputs: Vec::new(),
            exit_code: 0,
            wall_time_seconds: None,
        }
    }

    pub fn add_input(&mut self, path: &Path) -> CliResult<()> {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: file_digest(path)?,
        });
        Ok(())
    }

    pub fn emit(&self, global: &GlobalArgs) -> CliResult<()> {
        if let Some(path) = &global.report {
            write_json(path, self)?;
        }
        if global.json {
            println!("{}", serde_json::to_string_pretty(self)?);
        } else {
            print!("{}", self.render());
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in &self.inputs {
            let _ = writeln!(s, "input {} sha256={}", i.path, i.sha256);
        }
        for c in &self.certificates {
            render_certificate(&mut s, c);
        }
        if let Some(d) = &self.decomposition {
            let _ = writeln!(
                s,
                "decomposition {}: beta={} n={} m={} weight={} isometries={}",
                d.kind, d.beta, d.n, d.m, d.weight, d.isometries
            );
            let what = if d.probes.is_some() { "probe residual" } else { "residual" };
            let _ = writeln!(s, "  {what} {:.6e}", d.residual);
            let worst = d.isometry_defects.iter().copied().fold(0.0, f64::max);
            let _ = writeln!(s, "  max isometry defect {worst:.6e}");
            if let Some(o) = &d.output {
                let _ = writeln!(s, "  written to {o}");
            }
        }
        if let Some(r) = &self.search {
            let _ = writeln!(s, "search: {} (evaluated {})", r.message, r.evaluated);
            if let Some(b) = r.best_margin {
                let _ = writeln!(s, "  best margin {b:.6e}");
            }
            if let Some(o) = &r.output {
                let _ = writeln!(s, "  candidate written to {o}");
            }
        }
        for o in &self.outputs {
            let _ = writeln!(s, "wrote {o}");
        }
        let _ = writeln!(s, "tolerance {:e}", self.tolerance);
        if let Some(t) = self.wall_time_seconds {
            let _ = writeln!(s, "wall time {t:.3}s");
        }
        let _ = writeln!(s, "exit {}", self.exit_code);
        s
    }
}

fn render_certificate(s: &mut String, c: &CertificateReport) {
    let verdict = if c.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(
        s,
        "{} {verdict} (tolerance {:e}, hypothesis {})",
        c.name,
        c.tolerance,
        hypothesis_name(c.context.hypothesis)
    );
    for item in &c.items {
        let ok = if item.margin >= -c.tolerance { "ok" } else { "VIOLATED" };
        let _ = writeln!(
            s,
            "  {:<16} lhs {:>14.6e}  rhs {:>14.6e}  margin {:>14.6e}  {ok}",
            item.label, item.lhs, item.rhs, item.margin
        );
    }
}

fn hypothesis_name(h: Hypothesis) -> &'static str {
    match h {
        Hypothesis::Satisfied => "satisfied",
        Hypothesis::ViolatedForced => "violated (forced)",
        Hypothesis::ViolatedPartial => "violated (partial check)",
    }
}
