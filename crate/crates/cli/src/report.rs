//! Machine-readable reports. Each echoes its inputs and tolerances so that
//! re-running the command on them reproduces the report exactly.

use loccgate::majorization::MajorizationReport;
use loccgate::proposition::PropositionVerdict;
use loccgate::search::SearchResult;
use loccgate::witness::{BoundaryEstimate, CutEvaluation, OneWayReport, PartyGroup, SweepRow, WitnessOptions};
use loccgate::{Tolerances, Verdict, WitnessReport};
use serde::Serialize;

use crate::format::{StateEntry, StateFile};

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub input: StateFile,
    pub cut: Vec<PartyGroup>,
    pub tolerances: Tolerances,
    pub options: WitnessOptions,
    pub joint_state_norm: f64,
    /// Index into `evaluations` of the coarse-graining that decided.
    pub decisive: usize,
    pub source_spectrum: Vec<f64>,
    pub target_average: Vec<f64>,
    pub prefix_margins: Vec<f64>,
    pub min_margin: f64,
    pub critical_margin: Option<f64>,
    pub failing_prefix: Option<usize>,
    pub evaluations: Vec<CutEvaluation>,
    pub verdict: Verdict,
}

impl CheckReport {
    pub fn new(input: StateFile, report: &WitnessReport) -> Self {
        let m: &MajorizationReport = report.majorization();
        CheckReport {
            command: "check",
            input,
            cut: report.cut.groups().to_vec(),
            tolerances: report.tolerances,
            options: report.options,
            joint_state_norm: report.joint_state_norm,
            decisive: report.decisive,
            source_spectrum: report.source_spectrum().to_vec(),
            target_average: report.target_average().to_vec(),
            prefix_margins: m.prefix_margins.clone(),
            min_margin: m.min_margin,
            critical_margin: m.critical_margin,
            failing_prefix: m.failing_prefix,
            evaluations: report.evaluations.clone(),
            verdict: report.verdict,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropositionReport {
    pub command: &'static str,
    pub input: StateFile,
    pub tolerances: Tolerances,
    pub result: PropositionVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRowReport {
    pub a: f64,
    pub verdict: Verdict,
    pub min_margin: f64,
    pub critical_margin: Option<f64>,
    pub failing_prefix: Option<usize>,
    pub source_spectrum: Vec<f64>,
    pub target_average: Vec<f64>,
    pub prefix_margins: Vec<f64>,
}

impl SweepRowReport {
    pub fn from_row(row: &SweepRow) -> Self {
        let m = row.report.majorization();
        SweepRowReport {
            a: row.parameter,
            verdict: row.report.verdict,
            min_margin: m.min_margin,
            critical_margin: m.critical_margin,
            failing_prefix: m.failing_prefix,
            source_spectrum: row.report.source_spectrum().to_vec(),
            target_average: row.report.target_average().to_vec(),
            prefix_margins: m.prefix_margins.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub command: &'static str,
    pub family: &'static str,
    pub grid: String,
    pub grid_points: usize,
    pub probs: Vec<f64>,
    pub detectors: Vec<StateEntry>,
    pub cut: Vec<PartyGroup>,
    pub tolerances: Tolerances,
    pub options: WitnessOptions,
    pub bisect_tol: f64,
    pub edge_probes: (f64, f64),
    pub rows: Vec<SweepRowReport>,
    pub boundaries: Vec<BoundaryEstimate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub command: &'static str,
    pub input: StateFile,
    pub result: SearchResult,
    /// Full check at the best weights found.
    pub best: CheckReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct OneWayCommandReport {
    pub command: &'static str,
    pub input: StateFile,
    pub basis: StateFile,
    pub tolerances: Tolerances,
    pub result: OneWayReport,
}
