//! The `permupoly` command line.
//!
//! Exit codes: 0 when every check passed, 1 when a mathematical discrepancy
//! was found, 2 for usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::circle;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::families::{make_family, proof_identity_check, ClauseRole, FamilyId, FamilyParams, FieldParams};
use crate::field::{parse_descriptor, Elem, FieldCtx};
use crate::perm::{self, is_complete_permutation, is_permutation_with, lemma1_check, lemma1_polynomial};
use crate::poly::{parse_poly, parse_poly_file, parse_sparse, CompositePoly};
use crate::scan::{self, render_report, write_report, ReportFormat, ScanMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISCREPANCY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "permupoly", version, about = "Permutation polynomials over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Field descriptor such as 2^6 or 5^4:modulus=0x...
    #[arg(long)]
    field: Option<String>,
    /// Modulus as a base-p code (0x... or decimal); default is the canonical one
    #[arg(long)]
    modulus: Option<String>,
    /// Machine-readable report destination
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; defaults to the extension of --out
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Assertion {
    Pp,
    NotPp,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Sufficiency,
    Necessity,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// P1 .. P6
    #[arg(long)]
    family: String,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct ElementArgs {
    #[arg(long)]
    r: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// P1 only; derived from b when omitted
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long = "b-prime", allow_hyphen_values = true)]
    b_prime: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modulus, generator and representation of a field
    FieldInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive permutation check of one polynomial or a file of them
    CheckPp {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long)]
        poly_file: Option<PathBuf>,
        /// Also require f(x) + x to permute
        #[arg(long)]
        complete: bool,
        /// Expected verdict; a mismatch exits with 1
        #[arg(long, value_enum, default_value = "pp")]
        assert: Assertion,
    },
    /// Root-of-unity criterion for x^r h(x^((q-1)/d)), cross-checked by brute force
    Lemma1 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Build one family member, evaluate its checklist and test it
    Family {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        elements: ElementArgs,
        /// Replay the internal identity at this target value
        #[arg(long, allow_hyphen_values = true)]
        identity: Option<String>,
    },
    /// Scan a whole parameter space
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "sufficiency")]
        mode: Mode,
    },
    /// Write a nonzero x of GF(2^2m) as u * lambda
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Roots of x^2 + u x + v over GF(2^k)
    SolveQuad {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_modulus(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| Error::BadModulus(format!("cannot read modulus code {text:?}")))
}

impl Common {
    fn modulus_code(&self, from_descriptor: Option<u64>) -> Result<Option<u64>> {
        let flag = self.modulus.as_deref().map(parse_modulus).transpose()?;
        match (flag, from_descriptor) {
            (Some(a), Some(b)) if a != b => Err(Error::BadModulus(format!(
                "--modulus {a:#x} disagrees with the descriptor's {b:#x}"
            ))),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn field(&self) -> Result<FieldCtx> {
        let text = self
            .field
            .as_deref()
            .ok_or_else(|| Error::InvalidParams("--field is required".into()))?;
        let (p, n, modulus) = parse_descriptor(text)?;
        FieldCtx::from_parts(p, n, self.modulus_code(modulus)?)
    }

    /// The family's own field; `--field`, when present, must agree.
    fn family_field(&self, fp: FieldParams) -> Result<FieldCtx> {
        let (p, n) = fp.field_shape()?;
        let mut descriptor_modulus = None;
        if let Some(text) = &self.field {
            let (fp_p, fp_n, m) = parse_descriptor(text)?;
            if (fp_p, fp_n) != (p, n) {
                return Err(Error::InvalidParams(format!(
                    "{} prescribes GF({p}^{n}), --field says {text}",
                    fp.id()
                )));
            }
            descriptor_modulus = m;
        }
        fp.build_field(self.modulus_code(descriptor_modulus)?)
    }

    fn emit(&self, value: &Value) -> Result<()> {
        if let Some(path) = &self.out {
            fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
        }
        Ok(())
    }
}

fn need<T>(v: Option<T>, flag: &str, id: FamilyId) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParams(format!("{id} needs --{flag}")))
}

impl FamilyArgs {
    fn field_params(&self) -> Result<FieldParams> {
        let id: FamilyId = self.family.parse()?;
        Ok(match id {
            FamilyId::P1 => FieldParams::P1 { m: need(self.m, "m", id)?, k: need(self.k, "k", id)? },
            FamilyId::P2 => FieldParams::P2 { m: need(self.m, "m", id)?, s: need(self.s, "s", id)? },
            FamilyId::P3 => FieldParams::P3 { m: need(self.m, "m", id)? },
            FamilyId::P4 => FieldParams::P4 {
                p: need(self.p, "p", id)?,
                t: self.t.unwrap_or(1),
                e: need(self.e, "e", id)?,
            },
            FamilyId::P5 => FieldParams::P5 { m: need(self.m, "m", id)? },
            FamilyId::P6 => FieldParams::P6 { k: need(self.k, "k", id)? },
        })
    }
}

impl ElementArgs {
    fn params(&self, ctx: &FieldCtx, fp: FieldParams) -> Result<FamilyParams> {
        let id = fp.id();
        let el = |v: &Option<String>, flag: &str| -> Result<Elem> {
            ctx.parse_element(need(v.as_deref(), flag, id)?)
        };
        Ok(match fp {
            FieldParams::P1 { m, k } => {
                let b = el(&self.b, "b")?;
                let delta = el(&self.delta, "delta")?;
                match &self.c {
                    Some(c) => FamilyParams::P1 { m, k, b, c: ctx.parse_element(c)?, delta },
                    None => FamilyParams::p1_derived(ctx, m, k, b, delta),
                }
            }
            FieldParams::P2 { m, s } => FamilyParams::P2 { m, s, b: el(&self.b, "b")?, delta: el(&self.delta, "delta")? },
            FieldParams::P3 { m } => FamilyParams::P3 { m, b_prime: el(&self.b_prime, "b-prime")?, b: el(&self.b, "b")? },
            FieldParams::P4 { p, t, e } => FamilyParams::P4 { p, t, e, r: need(self.r, "r", id)?, a: el(&self.a, "a")? },
            FieldParams::P5 { m } => FamilyParams::P5 { m, b: el(&self.b, "b")?, delta: el(&self.delta, "delta")? },
            FieldParams::P6 { k } => FamilyParams::P6 { k, b: el(&self.b, "b")?, delta: el(&self.delta, "delta")? },
        })
    }
}

fn witness_text(ctx: &FieldCtx, f: &CompositePoly, w: Option<(Elem, Elem)>) -> String {
    match w {
        Some((a, b)) => format!(
            ", witness ({}, {}) with common image {}",
            ctx.format(a),
            ctx.format(b),
            ctx.format(f.evaluate(ctx, a))
        ),
        None => String::new(),
    }
}

fn witness_json(ctx: &FieldCtx, w: Option<(Elem, Elem)>) -> Value {
    match w {
        Some((a, b)) => json!([ctx.format(a), ctx.format(b)]),
        None => Value::Null,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::FieldInfo { common } => {
            let ctx = common.field()?;
            println!("field GF({}^{}) with {} elements", ctx.characteristic(), ctx.degree(), ctx.order());
            println!("modulus {} ({:#x})", ctx.modulus_text(), ctx.modulus_code());
            println!("generator g = {}", ctx.generator());
            println!("log tables: {}", if ctx.has_log_tables() { "yes" } else { "no" });
            println!("descriptor {}", ctx.descriptor());
            common.emit(&json!({
                "p": ctx.characteristic(),
                "n": ctx.degree(),
                "order": ctx.order(),
                "modulus": format!("{:#x}", ctx.modulus_code()),
                "modulus_text": ctx.modulus_text(),
                "generator": ctx.generator(),
                "descriptor": ctx.descriptor(),
            }))?;
            Ok(EXIT_OK)
        }
        Command::CheckPp { common, poly, poly_file, complete, assert } => {
            let ctx = common.field()?;
            let polys = match (poly, poly_file) {
                (Some(text), None) => vec![parse_poly(&ctx, &text)?],
                (None, Some(path)) => parse_poly_file(&ctx, &fs::read_to_string(path)?)?,
                _ => return Err(Error::InvalidParams("give exactly one of --poly and --poly-file".into())),
            };
            let exec = Exec::from_env();
            let mut ok = true;
            let mut entries = Vec::new();
            for f in &polys {
                let report = if complete {
                    is_complete_permutation(&ctx, f)?
                } else {
                    is_permutation_with(&ctx, f, exec)?
                };
                let positive = match report.complete {
                    Some(c) => c,
                    None => report.is_permutation(),
                };
                ok &= positive == (assert == Assertion::Pp);
                let label = match (complete, positive) {
                    (true, true) => "complete permutation",
                    (true, false) if report.is_permutation() => "permutation, not complete",
                    _ => report.verdict.as_str(),
                };
                println!("{}: {label}{}", f.to_text(&ctx), witness_text(&ctx, f, report.witness));
                entries.push(json!({
                    "poly": f.to_text(&ctx),
                    "verdict": report.verdict,
                    "complete": report.complete,
                    "image_size": report.image_size,
                    "witness": witness_json(&ctx, report.witness),
                }));
            }
            common.emit(&json!({ "field": ctx.descriptor(), "results": entries }))?;
            Ok(if ok { EXIT_OK } else { EXIT_DISCREPANCY })
        }
        Command::Lemma1 { common, r, d, h } => {
            let ctx = common.field()?;
            let h = parse_sparse(&ctx, &h)?;
            let report = lemma1_check(&ctx, r, d, &h)?;
            let sparse = lemma1_polynomial(&ctx, r, d, &h)?;
            let f = CompositePoly::from_sparse(sparse.clone());
            let brute = perm::is_permutation(&ctx, &f)?;
            let agree = brute.is_permutation() == report.verdict;
            println!("polynomial {}", sparse.to_text(&ctx));
            println!("gcd(r, (q-1)/d) = 1: {}", report.gcd_condition);
            println!("maps mu_d into mu_d: {}", report.maps_into_mu_d);
            println!("injective on mu_d: {}", report.injective_on_mu_d);
            println!("criterion: {}", if report.verdict { "permutation" } else { "not-permutation" });
            println!("brute force: {}{}", brute.verdict.as_str(), witness_text(&ctx, &f, brute.witness));
            println!("{}", if agree { "agree" } else { "DISAGREE" });
            common.emit(&json!({
                "field": ctx.descriptor(),
                "r": r,
                "d": d,
                "h": h.to_text(&ctx),
                "criterion": report,
                "brute_force": brute.verdict,
                "witness": witness_json(&ctx, brute.witness),
                "agree": agree,
            }))?;
            Ok(if agree { EXIT_OK } else { EXIT_DISCREPANCY })
        }
        Command::Family { common, family, elements, identity } => {
            let fp = family.field_params()?;
            let ctx = common.family_field(fp)?;
            let params = elements.params(&ctx, fp)?;
            let (g, list) = make_family(&ctx, &params)?;
            let report = is_permutation_with(&ctx, &g, Exec::from_env())?;
            println!("{} over GF({}^{}): {}", fp.id(), ctx.characteristic(), ctx.degree(), g.to_text(&ctx));
            println!("parameters {}", params.describe(&ctx));
            for c in &list.clauses {
                let role = match c.role {
                    ClauseRole::Hypothesis => "hypothesis",
                    ClauseRole::Condition => "condition",
                    ClauseRole::Advisory => "advisory",
                };
                println!("  [{}] {} ({role}): {}", if c.holds { "ok" } else { "no" }, c.name, c.detail);
            }
            println!("{}{}", report.verdict.as_str(), witness_text(&ctx, &g, report.witness));
            let pp = report.is_permutation();
            let mut ok = if fp.id().has_necessity() && list.in_domain() {
                pp == list.condition()
            } else {
                !list.satisfied() || pp
            };
            let mut identity_json = Value::Null;
            if let Some(d) = identity {
                let d = ctx.parse_element(&d)?;
                let r = proof_identity_check(&ctx, &params, d)?;
                println!("identity at d = {}: {} ({})", ctx.format(d), if r.holds { "holds" } else { "FAILS" }, r.detail);
                ok &= r.holds;
                identity_json = json!({ "d": ctx.format(d), "holds": r.holds, "detail": r.detail });
            }
            if !ok {
                println!("discrepancy: the verdict contradicts the checklist");
            }
            common.emit(&json!({
                "field": ctx.descriptor(),
                "params": params,
                "poly": g.to_text(&ctx),
                "checklist": list,
                "verdict": report.verdict,
                "witness": witness_json(&ctx, report.witness),
                "identity": identity_json,
                "consistent": ok,
            }))?;
            Ok(if ok { EXIT_OK } else { EXIT_DISCREPANCY })
        }
        Command::Scan { common, family, mode } => {
            let fp = family.field_params()?;
            let ctx = common.family_field(fp)?;
            let mode = match mode {
                Mode::Sufficiency => ScanMode::Sufficiency,
                Mode::Necessity => ScanMode::Necessity,
            };
            let report = scan::scan(&ctx, fp, mode, Exec::from_env())?;
            println!("{}", report.summary());
            for d in report.discrepancies.iter().take(10) {
                println!(
                    "  {}: expected {}, observed {}",
                    d.params.describe(&ctx),
                    d.expected.as_str(),
                    d.observed.as_str()
                );
            }
            if let Some(path) = &common.out {
                let format = match common.format {
                    Some(Format::Json) => ReportFormat::Json,
                    Some(Format::Csv) => ReportFormat::Csv,
                    None => ReportFormat::for_path(path),
                };
                write_report(&report, path, format)?;
            } else if let Some(Format::Json | Format::Csv) = common.format {
                let format = if matches!(common.format, Some(Format::Csv)) { ReportFormat::Csv } else { ReportFormat::Json };
                print!("{}", render_report(&report, format)?);
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_DISCREPANCY })
        }
        Command::Decompose { common, x } => {
            let ctx = common.field()?;
            let x = ctx.parse_element(&x)?;
            let d = circle::decompose(&ctx, x)?;
            println!("u = {}, lambda = {}", ctx.format(d.u), ctx.format(d.lambda));
            common.emit(&json!({ "x": ctx.format(x), "u": ctx.format(d.u), "lambda": ctx.format(d.lambda) }))?;
            Ok(EXIT_OK)
        }
        Command::SolveQuad { common, u, v } => {
            let ctx = common.field()?;
            let (u, v) = (ctx.parse_element(&u)?, ctx.parse_element(&v)?);
            let roots = circle::solve_quadratic(&ctx, u, v)?;
            match roots {
                Some((a, b)) => println!("roots {} and {}", ctx.format(a), ctx.format(b)),
                None => println!("no roots: Tr(v/u^2) = 1"),
            }
            common.emit(&json!({
                "u": ctx.format(u),
                "v": ctx.format(v),
                "roots": roots.map(|(a, b)| vec![ctx.format(a), ctx.format(b)]),
            }))?;
            Ok(EXIT_OK)
        }
    }
}
