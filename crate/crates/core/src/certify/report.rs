use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::ComplexMatrix;

/// One compared quantity: `margin = rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateItem {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Whether the checker's precondition held for the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Satisfied,
    /// Precondition failed; the check was run anyway on request.
    ViolatedForced,
    /// Precondition failed; only items that do not depend on it were checked.
    ViolatedPartial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportContext {
    /// Truncated SHA-256 of the input matrices.
    pub digest: String,
    /// Normalisation scale `max(1, ‖input‖_∞)`.
    pub scale: f64,
    /// Tolerance before scaling.
    pub base_tolerance: f64,
    pub hypothesis: Hypothesis,
}

/// Result of an inequality check.
///
/// Margins are reported in the input's own units. The stored `tolerance` is
/// the absolute one actually applied, `base_tolerance · scale`, which is the
/// same as testing the normalised input against `base_tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub name: String,
    pub tolerance: f64,
    pub passed: bool,
    pub items: Vec<CertificateItem>,
    pub context: ReportContext,
}

impl CertificateReport {
    pub fn min_margin(&self) -> f64 {
        self.items.iter().map(|i| i.margin).fold(f64::INFINITY, f64::min)
    }

    pub fn item(&self, label: &str) -> Option<&CertificateItem> {
        self.items.iter().find(|i| i.label == label)
    }

    pub fn hypothesis_satisfied(&self) -> bool {
        self.context.hypothesis == Hypothesis::Satisfied
    }
}

pub(crate) struct ReportBuilder {
    name: String,
    base_tolerance: f64,
    scale: f64,
    digest: String,
    hypothesis: Hypothesis,
    items: Vec<CertificateItem>,
}

impl ReportBuilder {
    pub fn new(name: &str, base_tolerance: f64, scale: f64, digest: String) -> Self {
        Self {
            name: name.to_owned(),
            base_tolerance,
            scale: scale.max(1.0),
            digest,
            hypothesis: Hypothesis::Satisfied,
            items: Vec::new(),
        }
    }

    pub fn hypothesis(mut self, h: Hypothesis) -> Self {
        self.hypothesis = h;
        self
    }

    pub fn push(&mut self, label: impl Into<String>, lhs: f64, rhs: f64) {
        self.items.push(CertificateItem {
            label: label.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
        });
    }

    pub fn finish(self) -> CertificateReport {
        let tolerance = self.base_tolerance * self.scale;
        let passed = self.items.iter().all(|i| i.margin >= -tolerance);
        CertificateReport {
            name: self.name,
            tolerance,
            passed,
            items: self.items,
            context: ReportContext {
                digest: self.digest,
                scale: self.scale,
                base_tolerance: self.base_tolerance,
                hypothesis: self.hypothesis,
            },
        }
    }
}

/// Truncated SHA-256 over shapes and raw entry bits.
pub fn digest_matrices(ms: &[&ComplexMatrix]) -> String {
    let mut h = Sha256::new();
    for m in ms {
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        for z in m.data() {
            h.update(z.re.to_bits().to_le_bytes());
            h.update(z.im.to_bits().to_le_bytes());
        }
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}
