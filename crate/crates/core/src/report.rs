//! Human-readable, JSON and CSV views of an analysis run.
//!
//! Reports carry the input hash and the convention tags (pullback direction,
//! index sign) so results from different builds remain comparable; they
//! deliberately contain no timestamps.

use serde::{Deserialize, Serialize};

use crate::analyzer::FredholmVerdict;
use crate::oracle::{IndexReport, SweepRow};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Slot `r` of the lifted operator carries the symbol pulled back through
/// `r^{-1}`.
pub const CONVENTION_PULLBACK: &str = "pullback=inverse";
/// The numerical index of a scalar plus-branch winding `w` (minus branch
/// constant) is `-w`.
pub const CONVENTION_INDEX_SIGN: &str = "index_sign=-winding";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleAgreement {
    Agree,
    Disagree,
    NotRun,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentView {
    pub copies: Vec<usize>,
    pub gamma0: Vec<usize>,
    pub restricted_dim: usize,
    pub min_restricted_sv: f64,
    pub fredholm: bool,
    /// `(copy, theta / 2 pi, xi)` of the minimizing covector
    pub witness: Option<(usize, f64, i8)>,
    pub samples_used: usize,
    pub refined: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepView {
    pub n: usize,
    pub sigma_min: f64,
    pub count_below: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexView {
    pub n: usize,
    pub index: i64,
    pub genuine_kernel: usize,
    pub genuine_cokernel: usize,
    pub raw_below: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub conventions: Vec<String>,
    pub scenario_hash: String,
    pub fredholm: bool,
    pub elliptic: bool,
    pub classification: String,
    pub min_full_sv: f64,
    pub components: Vec<ComponentView>,
    #[serde(default)]
    pub sweep: Vec<SweepView>,
    #[serde(default)]
    pub residuals: Vec<(usize, f64)>,
    pub index: Option<IndexView>,
    pub oracle_agreement: OracleAgreement,
    pub agreement_note: Option<String>,
}

use std::f64::consts::TAU;

impl Report {
    pub fn from_verdict(verdict: &FredholmVerdict, scenario_hash: &str) -> Report {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            conventions: vec![CONVENTION_PULLBACK.into(), CONVENTION_INDEX_SIGN.into()],
            scenario_hash: scenario_hash.to_string(),
            fredholm: verdict.fredholm,
            elliptic: verdict.elliptic,
            classification: verdict.classification.as_str().to_string(),
            min_full_sv: verdict.min_full_sv,
            components: verdict
                .components
                .iter()
                .map(|r| ComponentView {
                    copies: r.copies.clone(),
                    gamma0: r.gamma0.clone(),
                    restricted_dim: r.restricted_dim,
                    min_restricted_sv: r.min_restricted_sv,
                    fredholm: r.fredholm,
                    witness: r.witness.map(|w| (w.point.copy, w.point.theta / TAU, w.point.xi)),
                    samples_used: r.samples_used,
                    refined: r.refined,
                    note: r.note.clone(),
                })
                .collect(),
            sweep: Vec::new(),
            residuals: Vec::new(),
            index: None,
            oracle_agreement: OracleAgreement::NotRun,
            agreement_note: None,
        }
    }

    pub fn attach_sweep(&mut self, rows: &[SweepRow]) {
        self.sweep = rows
            .iter()
            .map(|r| SweepView { n: r.n, sigma_min: r.sigma_min, count_below: r.count_below })
            .collect();
    }

    pub fn attach_index(&mut self, r: &IndexReport) {
        self.index = Some(IndexView {
            n: r.n,
            index: r.index,
            genuine_kernel: r.genuine_kernel,
            genuine_cokernel: r.genuine_cokernel,
            raw_below: r.raw_below,
        });
    }

    /// Compare the symbolic verdict with the finite-section evidence:
    /// a Fredholm verdict demands no near-null directions at any size, a
    /// non-Fredholm verdict demands a near-null count that at least doubles
    /// from the smallest to the largest grid.
    pub fn judge_agreement(&mut self) {
        if self.sweep.is_empty() {
            self.oracle_agreement = OracleAgreement::NotRun;
            return;
        }
        let first = &self.sweep[0];
        let last = &self.sweep[self.sweep.len() - 1];
        let (ok, note) = if self.fredholm {
            let clean = self.sweep.iter().all(|r| r.count_below == 0);
            let spread = self.sweep.iter().map(|r| r.sigma_min).fold(f64::INFINITY, f64::min);
            let top = self.sweep.iter().map(|r| r.sigma_min).fold(0.0f64, f64::max);
            let stable = spread > 0.0 && (top - spread) / top <= 0.10;
            (
                clean && stable,
                format!(
                    "fredholm verdict: counts {} zero, sigma_min spread {:.2}%",
                    if clean { "all" } else { "NOT all" },
                    if top > 0.0 { 100.0 * (top - spread) / top } else { 0.0 }
                ),
            )
        } else {
            let growing = first.count_below > 0 && last.count_below >= 2 * first.count_below;
            (
                growing,
                format!(
                    "non-fredholm verdict: near-null count {} -> {}",
                    first.count_below, last.count_below
                ),
            )
        };
        self.oracle_agreement = if ok { OracleAgreement::Agree } else { OracleAgreement::Disagree };
        self.agreement_note = Some(note);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn from_json(text: &str) -> crate::error::Result<Report> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write;
        writeln!(out, "tool version   : {}", self.tool_version).unwrap();
        writeln!(out, "conventions    : {}", self.conventions.join(", ")).unwrap();
        writeln!(out, "scenario sha256: {}", self.scenario_hash).unwrap();
        writeln!(out, "classification : {}", self.classification).unwrap();
        writeln!(out, "fredholm       : {}", self.fredholm).unwrap();
        writeln!(out, "elliptic       : {} (min full symbol sv {:.6e})", self.elliptic, self.min_full_sv)
            .unwrap();
        for (i, c) in self.components.iter().enumerate() {
            writeln!(
                out,
                "component {i}: copies {:?}, gamma0 {:?}, restricted dim {}, min sv {:.6e}{} -> {}",
                c.copies,
                c.gamma0,
                c.restricted_dim,
                c.min_restricted_sv,
                if c.refined { " (refined)" } else { "" },
                if c.fredholm { "invertible" } else { "degenerate" },
            )
            .unwrap();
            if let Some((copy, frac, xi)) = c.witness {
                writeln!(out, "  witness: copy {copy}, theta/2pi = {frac:.6}, xi = {xi:+}").unwrap();
            }
            if let Some(note) = &c.note {
                writeln!(out, "  note: {note}").unwrap();
            }
        }
        if !self.sweep.is_empty() {
            writeln!(out, "finite sections:").unwrap();
            writeln!(out, "  {:>6} {:>14} {:>12}", "N", "sigma_min", "count_below").unwrap();
            for r in &self.sweep {
                writeln!(out, "  {:>6} {:>14.6e} {:>12}", r.n, r.sigma_min, r.count_below).unwrap();
            }
        }
        for (n, res) in &self.residuals {
            writeln!(out, "lift residual at N = {n}: {res:.3e}").unwrap();
        }
        if let Some(ix) = &self.index {
            writeln!(
                out,
                "numerical index at N = {}: {} (kernel {}, cokernel {}, raw near-null {})",
                ix.n, ix.index, ix.genuine_kernel, ix.genuine_cokernel, ix.raw_below
            )
            .unwrap();
        }
        match self.oracle_agreement {
            OracleAgreement::NotRun => writeln!(out, "oracle        : not run").unwrap(),
            OracleAgreement::Agree => writeln!(out, "oracle        : agree").unwrap(),
            OracleAgreement::Disagree => writeln!(out, "oracle        : DISAGREE").unwrap(),
        }
        if let Some(note) = &self.agreement_note {
            writeln!(out, "  {note}").unwrap();
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,sigma_min,count_below\n");
        use std::fmt::Write;
        for r in &self.sweep {
            writeln!(out, "{},{:.12e},{}", r.n, r.sigma_min, r.count_below).unwrap();
        }
        out
    }
}
