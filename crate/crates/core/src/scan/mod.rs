//! Whole-space scans: sufficiency (hypotheses imply PP) and necessity
//! (condition iff PP, given the hypotheses).
//!
//! The parameter space is split into contiguous index ranges. Each range
//! produces a private [`Partial`] and partials merge in index order, so a
//! report never depends on the worker count.

mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use report::{load_report, render_report, write_report, ReportFormat};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::families::{
    checklist, family_polynomial, kernel, ClauseRole, FamilyId, FamilyParams, FieldParams,
    ParamSpace,
};
use crate::field::{Elem, FieldCtx};
use crate::perm::{check_map, Verdict};

/// Stored discrepancies per report; the count is always exact.
pub const DISCREPANCY_CAP: usize = 100;

/// Spaces larger than this evaluate the violating side on a stride sample.
pub const EXHAUSTIVE_SPACE: u64 = 1 << 16;

const CHUNK: u64 = 256;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    Sufficiency,
    Necessity,
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanMode::Sufficiency => "sufficiency",
            ScanMode::Necessity => "necessity",
        })
    }
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sufficiency" => Ok(ScanMode::Sufficiency),
            "necessity" => Ok(ScanMode::Necessity),
            other => Err(Error::InvalidParams(format!(
                "unknown scan mode {other:?} (sufficiency or necessity)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub n: u32,
    /// Modulus as a base-p code in hex.
    pub modulus: String,
}

impl FieldInfo {
    pub fn of(ctx: &FieldCtx) -> Self {
        FieldInfo {
            p: ctx.characteristic(),
            n: ctx.degree(),
            modulus: format!("{:#x}", ctx.modulus_code()),
        }
    }
}

/// Tuple counts. `out_of_domain + satisfying + violating = tuples`.
///
/// In a sufficiency scan `satisfying` counts tuples where the whole
/// checklist holds. In a necessity scan the domain is the hypothesis
/// clauses and `satisfying`/`violating` split it by the condition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub tuples: u64,
    pub out_of_domain: u64,
    pub satisfying: u64,
    pub violating: u64,
    pub evaluated_violating: u64,
    pub pp_satisfying: u64,
    pub pp_violating: u64,
}

impl Totals {
    fn absorb(&mut self, o: &Totals) {
        self.tuples += o.tuples;
        self.out_of_domain += o.out_of_domain;
        self.satisfying += o.satisfying;
        self.violating += o.violating;
        self.evaluated_violating += o.evaluated_violating;
        self.pp_satisfying += o.pp_satisfying;
        self.pp_violating += o.pp_violating;
    }
}

/// Condition (first letter) against PP verdict (second letter).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tt: u64,
    pub tf: u64,
    pub ft: u64,
    pub ff: u64,
}

impl Confusion {
    pub fn off_diagonal(&self) -> u64 {
        self.tf + self.ft
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub params: FamilyParams,
    pub expected: Verdict,
    pub observed: Verdict,
    /// First collision when the observed verdict is negative.
    pub witness: Option<(Elem, Elem)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: FamilyId,
    pub field: FieldInfo,
    pub mode: ScanMode,
    pub family_params: FieldParams,
    pub totals: Totals,
    pub confusion: Option<Confusion>,
    pub discrepancies: Vec<Discrepancy>,
    pub discrepancy_count: u64,
    /// Failing count per advisory clause, over satisfying tuples
    /// (sufficiency) or in-domain tuples (necessity).
    pub advisories: BTreeMap<String, u64>,
    /// P3 only: tuples where the kernel route and the image route disagree.
    pub kernel_mismatches: Option<u64>,
    pub sampled: bool,
    pub sample_stride: u64,
    pub command: String,
    pub duration_ms: u64,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        match self.confusion {
            Some(c) => c.off_diagonal() == 0,
            None => self.discrepancy_count == 0,
        }
    }

    /// Copy with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        ScanReport { duration_ms: 0, ..self.clone() }
    }

    pub fn summary(&self) -> String {
        let t = &self.totals;
        let mut out = format!(
            "{} {} scan over GF({}^{}) modulus {}: {} tuples, {} satisfying ({} PP), {} violating ({} evaluated, {} PP)",
            self.family,
            self.mode,
            self.field.p,
            self.field.n,
            self.field.modulus,
            t.tuples,
            t.satisfying,
            t.pp_satisfying,
            t.violating,
            t.evaluated_violating,
            t.pp_violating
        );
        if t.out_of_domain > 0 {
            out += &format!(", {} outside the hypotheses", t.out_of_domain);
        }
        if let Some(c) = self.confusion {
            out += &format!("\nconfusion tt={} tf={} ft={} ff={}", c.tt, c.tf, c.ft, c.ff);
        }
        if let Some(k) = self.kernel_mismatches {
            out += &format!("\nkernel/image mismatches: {k}");
        }
        for (name, n) in &self.advisories {
            out += &format!("\nadvisory \"{name}\" fails on {n} tuples");
        }
        if self.sampled {
            out += &format!("\nviolating side sampled with stride {}", self.sample_stride);
        }
        out += &format!(
            "\n{} discrepancies: {}",
            self.discrepancy_count,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// The `permupoly` invocation that reproduces a scan.
pub fn scan_command(ctx: &FieldCtx, field: FieldParams, mode: ScanMode) -> String {
    let shape = match field {
        FieldParams::P1 { m, k } => format!("--m {m} --k {k}"),
        FieldParams::P2 { m, s } => format!("--m {m} --s {s}"),
        FieldParams::P3 { m } | FieldParams::P5 { m } => format!("--m {m}"),
        FieldParams::P4 { p, t, e } => format!("--p {p} --t {t} --e {e}"),
        FieldParams::P6 { k } => format!("--k {k}"),
    };
    format!(
        "permupoly scan --family {} {shape} --mode {mode} --modulus {:#x}",
        field.id(),
        ctx.modulus_code()
    )
}

#[derive(Clone, Debug, Default)]
struct Partial {
    totals: Totals,
    confusion: Confusion,
    discrepancies: Vec<(u64, Discrepancy)>,
    discrepancy_count: u64,
    advisories: BTreeMap<String, u64>,
    kernel_mismatches: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.totals.absorb(&other.totals);
        self.confusion.tt += other.confusion.tt;
        self.confusion.tf += other.confusion.tf;
        self.confusion.ft += other.confusion.ft;
        self.confusion.ff += other.confusion.ff;
        self.discrepancies.extend(other.discrepancies);
        self.discrepancies.sort_by_key(|(i, _)| *i);
        self.discrepancies.truncate(DISCREPANCY_CAP);
        self.discrepancy_count += other.discrepancy_count;
        for (k, v) in other.advisories {
            *self.advisories.entry(k).or_default() += v;
        }
        self.kernel_mismatches += other.kernel_mismatches;
        self
    }

    fn record(&mut self, i: u64, d: Discrepancy) {
        self.discrepancy_count += 1;
        if self.discrepancies.len() < DISCREPANCY_CAP {
            self.discrepancies.push((i, d));
        }
    }
}

struct Evaluation {
    verdict: Verdict,
    witness: Option<(Elem, Elem)>,
    kernel_agrees: bool,
}

fn evaluate(ctx: &FieldCtx, params: &FamilyParams) -> Evaluation {
    let g = family_polynomial(ctx, params);
    let report = check_map(ctx, Exec::Sequential, |x| g.evaluate(ctx, x))
        .expect("scan fields are within the exhaustive limit");
    let kernel_agrees = params.id() != FamilyId::P3
        || (kernel(ctx, &g) == [Elem::ZERO]) == report.is_permutation();
    Evaluation { verdict: report.verdict, witness: report.witness, kernel_agrees }
}

fn scan_range(ctx: &FieldCtx, space: &ParamSpace, mode: ScanMode, stride: u64, range: Range<u64>) -> Partial {
    let mut part = Partial::default();
    for i in range {
        let params = space.get(i);
        let list = checklist(ctx, &params).expect("space is field-consistent");
        part.totals.tuples += 1;
        let (in_domain, positive) = match mode {
            ScanMode::Sufficiency => (true, list.satisfied()),
            ScanMode::Necessity => (list.in_domain(), list.condition()),
        };
        if !in_domain {
            part.totals.out_of_domain += 1;
            continue;
        }
        if positive {
            part.totals.satisfying += 1;
        } else {
            part.totals.violating += 1;
        }
        if positive || mode == ScanMode::Necessity {
            for c in list.clauses.iter().filter(|c| c.role == ClauseRole::Advisory && !c.holds) {
                *part.advisories.entry(c.name.clone()).or_default() += 1;
            }
        }
        if !positive && i % stride != 0 {
            continue;
        }
        let eval = evaluate(ctx, &params);
        let pp = eval.verdict.is_permutation();
        if !eval.kernel_agrees {
            part.kernel_mismatches += 1;
        }
        if positive {
            part.totals.pp_satisfying += pp as u64;
        } else {
            part.totals.evaluated_violating += 1;
            part.totals.pp_violating += pp as u64;
        }
        let cell = match (positive, pp) {
            (true, true) => &mut part.confusion.tt,
            (true, false) => &mut part.confusion.tf,
            (false, true) => &mut part.confusion.ft,
            (false, false) => &mut part.confusion.ff,
        };
        *cell += 1;
        let expected_pp = match mode {
            ScanMode::Sufficiency if !positive => continue,
            _ => positive,
        };
        if pp != expected_pp {
            let expected = if expected_pp { Verdict::Permutation } else { Verdict::NotPermutation };
            part.record(
                i,
                Discrepancy { params, expected, observed: eval.verdict, witness: eval.witness },
            );
        }
    }
    part
}

fn run_scan(ctx: &FieldCtx, field: FieldParams, mode: ScanMode, exec: Exec) -> Result<ScanReport> {
    let start = Instant::now();
    let space = ParamSpace::new(ctx, field, true)?;
    let stride = if space.len() > EXHAUSTIVE_SPACE {
        space.len().div_ceil(EXHAUSTIVE_SPACE)
    } else {
        1
    };
    let part = exec::map_reduce(
        exec,
        space.len(),
        CHUNK,
        Partial::default(),
        |range| scan_range(ctx, &space, mode, stride, range),
        Partial::merge,
    );
    debug_assert_eq!(
        part.totals.out_of_domain + part.totals.satisfying + part.totals.violating,
        part.totals.tuples
    );
    Ok(ScanReport {
        family: field.id(),
        field: FieldInfo::of(ctx),
        mode,
        family_params: field,
        totals: part.totals,
        confusion: (mode == ScanMode::Necessity).then_some(part.confusion),
        discrepancies: part.discrepancies.into_iter().map(|(_, d)| d).collect(),
        discrepancy_count: part.discrepancy_count,
        advisories: part.advisories,
        kernel_mismatches: (field.id() == FamilyId::P3).then_some(part.kernel_mismatches),
        sampled: stride > 1,
        sample_stride: stride,
        command: scan_command(ctx, field, mode),
        duration_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs the exhaustive permutation check on every tuple whose checklist is
/// satisfied; any non-PP is a discrepancy. Violating tuples are evaluated
/// too (sampled on large spaces) and reported as counts. P1 uses the space
/// with `c` derived from `b`.
pub fn scan_sufficiency(ctx: &FieldCtx, field: FieldParams, exec: Exec) -> Result<ScanReport> {
    run_scan(ctx, field, ScanMode::Sufficiency, exec)
}

/// Tests the biconditional of P5 or P6 over every tuple meeting the
/// hypotheses, filling the confusion matrix.
pub fn scan_necessity(ctx: &FieldCtx, field: FieldParams, exec: Exec) -> Result<ScanReport> {
    if !field.id().has_necessity() {
        return Err(Error::InvalidParams(format!(
            "{} has no biconditional; necessity scans cover P5 and P6",
            field.id()
        )));
    }
    run_scan(ctx, field, ScanMode::Necessity, exec)
}

pub fn scan(ctx: &FieldCtx, field: FieldParams, mode: ScanMode, exec: Exec) -> Result<ScanReport> {
    match mode {
        ScanMode::Sufficiency => scan_sufficiency(ctx, field, exec),
        ScanMode::Necessity => scan_necessity(ctx, field, exec),
    }
}
