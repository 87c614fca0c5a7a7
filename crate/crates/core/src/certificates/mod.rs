//! Per-iteration audits of convergence bounds against solver traces.
//!
//! Every check is pure: it reads a [`SolverTrace`] and a set of constants
//! and returns a [`CertificateReport`] with one row per inequality checked.
//! A row passes when `slack ≥ −tol·(1 + |reference|)`; rows that pass but
//! fall below `−WARN_TOL·(1 + |reference|)` are counted as warnings.

mod aam;
mod am;
mod rate;

pub use aam::{aam_main_bound, check_aam_adaptive, check_aam_ak, check_aam_main, check_aam_recurrence, check_gap_over_a};
pub use am::{
    am_linear_factor, am_sublinear_bound, check_am_linear, check_am_sublinear, check_nearly_pl, check_prox_pl_trace,
    check_sufficient_decrease, nearly_pl_factor,
};
pub use rate::estimate_empirical_rate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::vecops::dist2;
use crate::objective::BlockObjective;
use crate::solvers::SolverTrace;

/// Failure threshold, relative to `1 + |reference|`.
pub const CERT_TOL: f64 = 1e-8;
/// Warning threshold, relative to `1 + |reference|`.
pub const WARN_TOL: f64 = 1e-10;
/// Failure threshold for the estimating-sequence recurrence.
pub const RECURRENCE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "am_linear_pl")]
    AmLinearPl,
    #[serde(rename = "am_sublinear")]
    AmSublinear,
    #[serde(rename = "aam_main")]
    AamMain,
    #[serde(rename = "aam_Ak_growth")]
    AamAkGrowth,
    #[serde(rename = "aam_recurrence")]
    AamRecurrence,
    #[serde(rename = "aam_adaptive")]
    AamAdaptive,
    #[serde(rename = "nearly_pl_combined")]
    NearlyPlCombined,
    #[serde(rename = "sufficient_decrease")]
    SufficientDecrease,
    #[serde(rename = "nonacc_max_bound")]
    NonaccMaxBound,
    #[serde(rename = "prox_pl")]
    ProxPl,
}

impl BoundKind {
    pub const ALL: [BoundKind; 10] = [
        BoundKind::AmLinearPl,
        BoundKind::AmSublinear,
        BoundKind::AamMain,
        BoundKind::AamAkGrowth,
        BoundKind::AamRecurrence,
        BoundKind::AamAdaptive,
        BoundKind::NearlyPlCombined,
        BoundKind::SufficientDecrease,
        BoundKind::NonaccMaxBound,
        BoundKind::ProxPl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::AmLinearPl => "am_linear_pl",
            BoundKind::AmSublinear => "am_sublinear",
            BoundKind::AamMain => "aam_main",
            BoundKind::AamAkGrowth => "aam_Ak_growth",
            BoundKind::AamRecurrence => "aam_recurrence",
            BoundKind::AamAdaptive => "aam_adaptive",
            BoundKind::NearlyPlCombined => "nearly_pl_combined",
            BoundKind::SufficientDecrease => "sufficient_decrease",
            BoundKind::NonaccMaxBound => "nonacc_max_bound",
            BoundKind::ProxPl => "prox_pl",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// True for the bounds that apply to AM traces (the rest apply to AAM).
    pub fn for_am(self) -> bool {
        matches!(
            self,
            BoundKind::AmLinearPl
                | BoundKind::AmSublinear
                | BoundKind::NearlyPlCombined
                | BoundKind::SufficientDecrease
                | BoundKind::ProxPl
        )
    }
}

/// Constants consumed by the checks. `None` means unknown.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// `L`
    pub lipschitz: Option<f64>,
    /// True PL / strong convexity constant of `f`.
    pub mu: Option<f64>,
    /// `Lᵢ`
    pub block_lipschitz: Option<Vec<f64>>,
    /// `μᵢ`
    pub block_mu: Option<Vec<f64>>,
    /// `n`
    pub n_blocks: usize,
    /// `R = ‖x* − x⁰‖`
    pub radius: Option<f64>,
    /// Radius of the initial level set around the solution set.
    pub level_radius: Option<f64>,
    /// `F*`
    pub f_star: Option<f64>,
}

impl BoundConstants {
    /// Constants declared by `h`, with `R` measured from `x0`.
    pub fn from_objective(h: &dyn BlockObjective, x0: &[f64]) -> Self {
        let c = h.constants();
        let opt = h.optimum();
        Self {
            lipschitz: c.lipschitz,
            mu: c.pl_or_strong(),
            block_lipschitz: c.block_lipschitz.clone(),
            block_mu: c.block_strong_convexity.clone(),
            n_blocks: h.partition().n_blocks(),
            radius: opt.map(|o| dist2(&o.point, x0)),
            level_radius: None,
            f_star: opt.map(|o| o.value),
        }
    }
}

/// A bound kind together with the constants it is evaluated with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub kind: BoundKind,
    pub constants: BoundConstants,
}

impl BoundSpec {
    /// `MissingConstants` naming every absent constant the kind needs.
    pub fn validate(&self) -> Result<()> {
        let c = &self.constants;
        let mut missing = Vec::new();
        let need_blocks = matches!(
            self.kind,
            BoundKind::AmLinearPl | BoundKind::NearlyPlCombined | BoundKind::ProxPl
        );
        if need_blocks && c.block_mu.is_none() {
            missing.push("block_mu");
        }
        if matches!(
            self.kind,
            BoundKind::AmLinearPl
                | BoundKind::NearlyPlCombined
                | BoundKind::AmSublinear
                | BoundKind::SufficientDecrease
        ) && c.block_lipschitz.is_none()
        {
            missing.push("block_lipschitz");
        }
        if matches!(self.kind, BoundKind::AamMain | BoundKind::AamAkGrowth) && c.lipschitz.is_none() {
            missing.push("lipschitz");
        }
        if matches!(self.kind, BoundKind::AamAdaptive) && c.mu.is_none() {
            missing.push("mu");
        }
        if matches!(self.kind, BoundKind::AamMain | BoundKind::NonaccMaxBound)
            && c.radius.is_none()
        {
            missing.push("radius");
        }
        if matches!(self.kind, BoundKind::AmSublinear) && c.level_radius.is_none() {
            missing.push("level_radius");
        }
        if !matches!(
            self.kind,
            BoundKind::AamAkGrowth | BoundKind::AamRecurrence | BoundKind::SufficientDecrease
        ) && c.f_star.is_none()
        {
            missing.push("f_star");
        }
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingConstants(format!("{}: {}", self.kind.name(), missing.join(", "))))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub k: usize,
    /// Which inequality of the family this row checks.
    pub label: String,
    pub bound: f64,
    pub measured: f64,
    /// Positive when the inequality holds with room to spare.
    pub slack: f64,
    pub pass: bool,
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: BoundKind,
    pub rows: Vec<CertificateRow>,
    /// Smallest normalized slack `slack / (1 + |reference|)` over checked rows.
    pub worst_slack: f64,
    pub first_failure: Option<usize>,
    pub warnings: usize,
    /// Set when the whole certificate could not be evaluated.
    pub skipped: Option<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn skipped(kind: BoundKind, reason: impl Into<String>) -> Self {
        Self {
            kind,
            rows: Vec::new(),
            worst_slack: f64::INFINITY,
            first_failure: None,
            warnings: 0,
            skipped: Some(reason.into()),
        }
    }

    pub fn checked_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.skipped).count()
    }
}

/// Accumulates rows and the summary.
pub(crate) struct ReportBuilder {
    kind: BoundKind,
    tol: f64,
    report: CertificateReport,
}

impl ReportBuilder {
    pub(crate) fn new(kind: BoundKind) -> Self {
        Self::with_tolerance(kind, CERT_TOL)
    }

    pub(crate) fn with_tolerance(kind: BoundKind, tol: f64) -> Self {
        Self {
            kind,
            tol,
            report: CertificateReport {
                kind,
                rows: Vec::new(),
                worst_slack: f64::INFINITY,
                first_failure: None,
                warnings: 0,
                skipped: None,
            },
        }
    }

    /// Row for `measured ≤ bound`.
    pub(crate) fn upper(&mut self, k: usize, label: &str, bound: f64, measured: f64, reference: f64) {
        self.push(k, label, bound, measured, bound - measured, reference);
    }

    /// Row for `measured ≥ bound`.
    pub(crate) fn lower(&mut self, k: usize, label: &str, bound: f64, measured: f64, reference: f64) {
        self.push(k, label, bound, measured, measured - bound, reference);
    }

    pub(crate) fn skip(&mut self, k: usize, label: &str) {
        self.report.rows.push(CertificateRow {
            k,
            label: label.to_string(),
            bound: f64::NAN,
            measured: f64::NAN,
            slack: f64::NAN,
            pass: true,
            skipped: true,
        });
    }

    fn push(&mut self, k: usize, label: &str, bound: f64, measured: f64, slack: f64, reference: f64) {
        let scale = 1.0 + reference.abs();
        let normalized = slack / scale;
        // NaN slack never passes
        let pass = normalized >= -self.tol;
        let r = &mut self.report;
        if !pass && r.first_failure.is_none() {
            r.first_failure = Some(k);
        }
        if pass && normalized < -WARN_TOL {
            r.warnings += 1;
        }
        if normalized.is_nan() {
            r.worst_slack = f64::NAN;
        } else if !r.worst_slack.is_nan() {
            r.worst_slack = r.worst_slack.min(normalized);
        }
        r.rows.push(CertificateRow {
            k,
            label: label.to_string(),
            bound,
            measured,
            slack,
            pass,
            skipped: false,
        });
    }

    pub(crate) fn finish(self) -> CertificateReport {
        debug_assert_eq!(self.kind, self.report.kind);
        self.report
    }
}

/// Run the check for `spec.kind`. Checks that need the objective (prox-PL,
/// sufficient decrease, the first AM sweep precondition) use `h` when given.
pub fn certify(
    spec: &BoundSpec,
    trace: &SolverTrace,
    h: Option<&dyn BlockObjective>,
) -> Result<CertificateReport> {
    spec.validate()?;
    let c = &spec.constants;
    match spec.kind {
        BoundKind::AmLinearPl => check_am_linear(trace, c, h),
        BoundKind::NearlyPlCombined => check_nearly_pl(trace, c, h),
        BoundKind::AmSublinear => check_am_sublinear(trace, c),
        BoundKind::AamMain => check_aam_main(trace, c),
        BoundKind::AamAkGrowth => check_aam_ak(trace, c),
        BoundKind::AamAdaptive => check_aam_adaptive(trace, c),
        BoundKind::NonaccMaxBound => check_gap_over_a(trace, c),
        BoundKind::AamRecurrence => check_aam_recurrence(trace),
        BoundKind::SufficientDecrease => match h {
            Some(h) => check_sufficient_decrease(h, trace, c),
            None => Ok(CertificateReport::skipped(spec.kind, "needs the objective")),
        },
        BoundKind::ProxPl => match h {
            Some(h) => check_prox_pl_trace(h, trace, c),
            None => Ok(CertificateReport::skipped(spec.kind, "needs the objective")),
        },
    }
}

pub(crate) fn require<T: Clone>(v: &Option<T>, kind: BoundKind, name: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::MissingConstants(format!("{}: {name}", kind.name())))
}
