//! `recfrac`: dominant roots by recurrent fractions, (n,m)-form arithmetic,
//! generalized Pell families and parapermanents from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a root does not
//! converge, 2 on usage and parse errors.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recfrac::bigmath::{decimal_render, parse_rational, rational_text};
use recfrac::paraperm::Parafunction;
use recfrac::pell::{self, Branch, PellRecord, Reading};
use recfrac::recfrac::{dominant_root, from_polynomial};
use recfrac::{Error, MonicRecurrencePoly, NmForm, Rational, TriMatrix};

#[derive(Parser)]
#[command(
    name = "recfrac",
    version,
    about = "Exact recurrent fractions, (n,m)-forms and Pell units"
)]
struct Cli {
    /// Print one JSON object per result line instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dominant real root of x^n = a1 x^(n-1) + ... + an.
    ApproxRoot(ApproxRootArgs),
    /// Arithmetic on (n, m, [s0, ...]) forms.
    #[command(subcommand)]
    Form(FormCommand),
    /// Generalized Pell unit families.
    #[command(subcommand)]
    Pell(PellCommand),
    /// Parapermanent or paradeterminant of a triangular matrix.
    Pper(PperArgs),
}

#[derive(Args)]
struct ApproxRootArgs {
    /// Coefficients a1 .. an as integers or p/q.
    #[arg(required = true, allow_negative_numbers = true)]
    coefficients: Vec<String>,
    #[arg(long, default_value_t = 24)]
    digits: u32,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Print every truncation up to the stopping point.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum FormCommand {
    Mul {
        a: String,
        b: String,
    },
    Norm {
        a: String,
    },
    Minpoly {
        a: String,
    },
    Conj {
        a: String,
    },
    Eval {
        a: String,
        #[arg(long, default_value_t = 20)]
        digits: u32,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long)]
    degree: u32,
    #[arg(long)]
    branch: String,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    r: u64,
    #[arg(long, value_enum, default_value_t = ReadingArg::Printed)]
    reading: ReadingArg,
}

#[derive(Subcommand)]
enum PellCommand {
    /// Instantiate one family point without verifying it.
    Family(FamilyArgs),
    /// Instantiate and verify one family point.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        policy: ErratumPolicy,
    },
    /// Verify every branch of a degree over a (k, r) grid.
    Grid {
        #[arg(long)]
        degree: u32,
        /// Restrict to these branches (repeatable).
        #[arg(long)]
        branch: Vec<String>,
        #[arg(long, default_value_t = 5)]
        kmax: u64,
        #[arg(long, default_value_t = 5)]
        rmax: u64,
        #[arg(long, value_enum, default_value_t = ReadingArg::Printed)]
        reading: ReadingArg,
        #[command(flatten)]
        policy: ErratumPolicy,
    },
    /// Search a cubic unit over radicand m.
    Search {
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 100)]
        kbound: u64,
    },
    /// Geometric-coordinate solutions over m^n - 1 and m^n + 1.
    Geometric {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum)]
        variant: GeometricArg,
    },
    /// Recompute the large cubic example from its fixture.
    Gig {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Coefficient moduli against the number triangle.
    Triangle {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Binomial relations between degree-11 free terms.
    Freeterms,
}

#[derive(Args, Clone, Copy)]
struct ErratumPolicy {
    /// Treat failures of known misprinted families as errors.
    #[arg(long)]
    strict: bool,
    /// Print the inverse of the partner branch as corrected polynomials.
    #[arg(long)]
    suggest_fix: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReadingArg {
    Printed,
    RSubstituted,
}

impl From<ReadingArg> for Reading {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::Printed => Reading::Printed,
            ReadingArg::RSubstituted => Reading::RSubstituted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometricArg {
    Minus,
    PlusOdd,
    PlusEven,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pper,
    Ddet,
}

#[derive(Args)]
struct PperArgs {
    /// Rows inline, e.g. "[[1],[2,3]]".
    rows: Option<String>,
    /// File with one row per line, entries separated by spaces or commas.
    #[arg(long, conflicts_with = "rows")]
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Pper)]
    mode: ModeArg,
    /// Cross-check against the definition and every table expansion.
    #[arg(long)]
    check: bool,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::PrecisionLimit(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
}

impl Out {
    /// Writes one record. A closed stdout (e.g. piped into `head`) is not an
    /// error.
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) {
        let line = if self.json {
            serde_json::to_string(value).expect("serializable")
        } else {
            text()
        };
        let _ = writeln!(io::stdout().lock(), "{line}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { json: cli.json };
    let result = match cli.command {
        Command::ApproxRoot(args) => approx_root(&out, args),
        Command::Form(cmd) => form(&out, cmd),
        Command::Pell(cmd) => pell_cmd(&out, cmd),
        Command::Pper(args) => pper(&out, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("recfrac: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("recfrac: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_coefficients(texts: &[String]) -> Result<Vec<Rational>, Failure> {
    texts
        .iter()
        .map(|t| parse_rational(t).map_err(Failure::from))
        .collect()
}

#[derive(Serialize)]
struct TraceRow {
    index: usize,
    p: String,
    q: String,
    value: Option<String>,
    decimal: Option<String>,
}

#[derive(Serialize)]
struct RootReport {
    command: &'static str,
    polynomial: String,
    converged: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trace: Vec<TraceRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certified_digits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    evidence: Vec<String>,
}

fn approx_root(out: &Out, args: ApproxRootArgs) -> Outcome {
    let poly = MonicRecurrencePoly::new(parse_coefficients(&args.coefficients)?)?;
    if args.max_iter == 0 {
        return Err(Failure::Usage("--max-iter must be positive".into()));
    }
    let result = dominant_root(&poly, args.digits, args.max_iter);
    let shown = match &result {
        Ok(r) => r.iterations_used,
        Err(_) => args.max_iter,
    };
    let trace: Vec<TraceRow> = if args.trace {
        from_polynomial(&poly)
            .truncations()
            .take(shown)
            .map(|t| {
                let v = t.value();
                TraceRow {
                    index: t.index,
                    p: rational_text(&t.p),
                    q: rational_text(&t.q),
                    decimal: v.as_ref().map(|v| decimal_render(v, args.digits)),
                    value: v.as_ref().map(rational_text),
                }
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut report = RootReport {
        command: "approx-root",
        polynomial: poly.to_string(),
        converged: result.is_ok(),
        trace,
        value: None,
        decimal: None,
        iterations: None,
        certified_digits: None,
        residual: None,
        reason: None,
        evidence: Vec::new(),
    };
    let failure = match result {
        Ok(r) => {
            report.decimal = Some(decimal_render(&r.value, args.digits));
            report.value = Some(rational_text(&r.value));
            report.iterations = Some(r.iterations_used);
            report.certified_digits = Some(r.certified_digits);
            report.residual = Some(decimal_render(&r.residual, args.digits + 6));
            None
        }
        Err(Error::NonConvergence {
            iterations,
            reason,
            evidence,
        }) => {
            report.reason = Some(reason.clone());
            report.evidence = evidence;
            Some(Failure::Check(format!(
                "no convergence after {iterations} truncations: {reason}"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    out.emit(&report, || {
        let mut lines = vec![format!("polynomial: {}", report.polynomial)];
        for row in &report.trace {
            lines.push(match (&row.value, &row.decimal) {
                (Some(v), Some(d)) => format!("m={}: {v} ~ {d}", row.index),
                _ => format!("m={}: {}/{} undefined", row.index, row.p, row.q),
            });
        }
        if let Some(d) = &report.decimal {
            lines.push(format!("value: {d}"));
            lines.push(format!(
                "iterations: {}",
                report.iterations.unwrap_or_default()
            ));
            lines.push(format!(
                "certified digits: {}",
                report.certified_digits.unwrap_or_default()
            ));
            lines.push(format!(
                "residual: {}",
                report.residual.clone().unwrap_or_default()
            ));
        } else {
            lines.push("no convergence".into());
            lines.extend(report.evidence.iter().map(|e| format!("  {e}")));
        }
        lines.join("\n")
    });
    failure.map_or(Ok(()), Err)
}

fn parse_form(text: &str) -> Result<NmForm, Failure> {
    text.parse::<NmForm>().map_err(Failure::from)
}

#[derive(Serialize)]
struct FormReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
}

fn form(out: &Out, cmd: FormCommand) -> Outcome {
    let blank = |command| FormReport {
        command,
        form: None,
        value: None,
        coefficients: None,
    };
    match cmd {
        FormCommand::Mul { a, b } => {
            let x = parse_form(&a)?.multiply(&parse_form(&b)?)?;
            let report = FormReport {
                form: Some(x.to_string()),
                ..blank("form mul")
            };
            out.emit(&report, || x.to_string());
        }
        FormCommand::Norm { a } => {
            let v = rational_text(&parse_form(&a)?.norm());
            let report = FormReport {
                value: Some(v.clone()),
                ..blank("form norm")
            };
            out.emit(&report, || v);
        }
        FormCommand::Minpoly { a } => {
            let x = parse_form(&a)?;
            let coeffs = x.min_poly_coeffs();
            let text = match MonicRecurrencePoly::new(coeffs.clone()) {
                Ok(p) => p.to_string(),
                // zero norm: the constant term vanishes
                Err(_) => format!(
                    "x^{} = {}",
                    coeffs.len(),
                    pell::polynomial_text(&coeffs, "x")
                ),
            };
            let report = FormReport {
                value: Some(text.clone()),
                coefficients: Some(coeffs.iter().map(rational_text).collect()),
                ..blank("form minpoly")
            };
            out.emit(&report, || text);
        }
        FormCommand::Conj { a } => {
            let x = parse_form(&a)?.conjugate()?;
            let report = FormReport {
                form: Some(x.to_string()),
                ..blank("form conj")
            };
            out.emit(&report, || x.to_string());
        }
        FormCommand::Eval { a, digits } => {
            let v = parse_form(&a)?.eval_decimal(digits)?;
            let report = FormReport {
                value: Some(v.clone()),
                ..blank("form eval")
            };
            out.emit(&report, || v);
        }
    }
    Ok(())
}

fn parse_branch(text: &str) -> Result<Branch, Failure> {
    text.parse::<Branch>().map_err(Failure::from)
}

fn record_line(r: &PellRecord) -> String {
    let head = format!(
        "degree {} branch {} k={} r={}",
        r.degree, r.branch, r.k, r.r
    );
    match (&r.m, &r.norm) {
        (Some(m), Some(norm)) => {
            let mut line = format!("{head}: m={m} norm={norm} {}", r.verdict);
            if r.degenerate {
                line.push_str(" (degenerate radicand)");
            }
            if let Some(note) = &r.note {
                line.push_str(&format!(" [{note}]"));
            }
            line
        }
        _ => format!("{head}: undefined ({})", r.note.clone().unwrap_or_default()),
    }
}

/// Failures that count against the exit code under `policy`.
fn counted_failures(records: &[PellRecord], policy: ErratumPolicy) -> (usize, usize) {
    let mut hard = 0;
    let mut known = 0;
    for r in records.iter().filter(|r| r.verdict == "failed") {
        if pell::is_known_erratum(r.degree, r.branch) && !policy.strict {
            known += 1;
        } else {
            hard += 1;
        }
    }
    (hard, known)
}

#[derive(Serialize)]
struct FixReport {
    command: &'static str,
    degree: u32,
    branch: Branch,
    variable: String,
    printed: Vec<String>,
    suggested: Vec<String>,
}

fn print_fix(out: &Out, degree: u32, branch: Branch) -> Outcome {
    let var = format!("t = r k^{}", degree - 1);
    let suggested: Vec<String> = pell::suggest_fix(degree, branch)?
        .iter()
        .map(|p| pell::polynomial_text(p, "t"))
        .collect();
    let printed: Vec<String> = (0..degree as usize)
        .map(|i| {
            pell::bracket_polynomial(degree, branch, i)
                .map(|p| {
                    let q: Vec<Rational> = p.into_iter().map(Rational::from_integer).collect();
                    pell::polynomial_text(&q, "t")
                })
                .unwrap_or_default()
        })
        .collect();
    let report = FixReport {
        command: "pell suggest-fix",
        degree,
        branch,
        variable: var.clone(),
        printed,
        suggested,
    };
    out.emit(&report, || {
        let mut lines = vec![format!(
            "degree {degree} branch {branch} as inverse of its partner, {var}:"
        )];
        for (i, (p, s)) in report.printed.iter().zip(&report.suggested).enumerate() {
            let mark = if p == s {
                ""
            } else {
                "   (differs from the printed bracket)"
            };
            lines.push(format!("  s{i}: {s}{mark}"));
        }
        if degree == 9 {
            lines.push("  the printed brackets use m k^8 where this reading uses r k^8".into());
        }
        lines.join("\n")
    });
    Ok(())
}

fn finish_records(out: &Out, records: &[PellRecord], policy: ErratumPolicy) -> Outcome {
    for r in records {
        out.emit(r, || record_line(r));
    }
    let (hard, known) = counted_failures(records, policy);
    if policy.suggest_fix {
        let mut seen: Vec<(u32, Branch)> = Vec::new();
        for r in records.iter().filter(|r| r.verdict == "failed") {
            if !seen.contains(&(r.degree, r.branch))
                && r.branch.partner(r.degree).is_some()
                && r.degree != 3
            {
                seen.push((r.degree, r.branch));
                print_fix(out, r.degree, r.branch)?;
            }
        }
    }
    if known > 0 {
        eprintln!(
            "warning: {known} failure(s) in families with known misprints (use --strict to fail)"
        );
    }
    if hard > 0 {
        return Err(Failure::Check(format!("{hard} verification(s) failed")));
    }
    Ok(())
}

#[derive(Serialize)]
struct SolutionReport<'a> {
    command: &'static str,
    #[serde(flatten)]
    solution: &'a pell::PellSolution,
}

fn pell_cmd(out: &Out, cmd: PellCommand) -> Outcome {
    match cmd {
        PellCommand::Family(f) => {
            let branch = parse_branch(&f.branch)?;
            let sol = pell::family_with_reading(f.degree, branch, f.k, f.r, f.reading.into())?;
            out.emit(
                &SolutionReport {
                    command: "pell family",
                    solution: &sol,
                },
                || {
                    let mut lines = vec![
                        format!("{} k={} r={}", sol.family, f.k, f.r),
                        format!("m = {}", rational_text(sol.m())),
                    ];
                    for (i, s) in sol.coords().iter().enumerate() {
                        lines.push(format!("s{i} = {}", rational_text(s)));
                    }
                    lines.join("\n")
                },
            );
            Ok(())
        }
        PellCommand::Verify { family: f, policy } => {
            let branch = parse_branch(&f.branch)?;
            let rec = pell::record(f.degree, branch, f.k, f.r, f.reading.into());
            if rec.is_undefined() {
                return Err(Failure::Usage(rec.note.unwrap_or_default()));
            }
            finish_records(out, &[rec], policy)
        }
        PellCommand::Grid {
            degree,
            branch,
            kmax,
            rmax,
            reading,
            policy,
        } => {
            if !pell::DEGREES.contains(&degree) {
                return Err(Failure::Usage(format!("no families in degree {degree}")));
            }
            let branches = if branch.is_empty() {
                pell::branches(degree)
            } else {
                branch
                    .iter()
                    .map(|b| parse_branch(b))
                    .collect::<Result<_, _>>()?
            };
            let records = pell::verify_grid(degree, &branches, kmax, rmax, reading.into());
            let result = finish_records(out, &records, policy);
            if degree == 9 && matches!(reading, ReadingArg::Printed) {
                for b in branches
                    .iter()
                    .filter(|b| matches!(b, Branch::B2 | Branch::B4))
                {
                    for k in 1..=kmax {
                        for r in 1..=rmax {
                            let v = pell::degree9_readings(*b, k, r)?;
                            out.emit(&v, || {
                                format!(
                                    "degree 9 branch {b} k={k} r={r}: printed {}, r-substituted {}, inverse of partner {}{}",
                                    verdict_word(&v.printed),
                                    verdict_word(&v.r_substituted),
                                    verdict_word(&v.inverse_of_partner),
                                    if v.r_substituted_equals_inverse { " (r-substituted = inverse)" } else { "" }
                                )
                            });
                        }
                    }
                }
            }
            result
        }
        PellCommand::Search { m, kbound } => {
            match pell::find_cubic_unit(m, kbound)? {
                Some(sol) => out.emit(
                    &SolutionReport {
                        command: "pell search",
                        solution: &sol,
                    },
                    || {
                        let c: Vec<String> = sol.coords().iter().map(rational_text).collect();
                        format!(
                            "m={m}: unit ({}) from {} with {}{}",
                            c.join(", "),
                            sol.family,
                            match &sol.params {
                                pell::Params::Kr { k, r } => format!("k={k} r={r}"),
                                pell::Params::Base { base } => format!("base {base}"),
                            },
                            if sol.degenerate {
                                " (degenerate radicand)"
                            } else {
                                ""
                            }
                        )
                    },
                ),
                None => out.emit(
                    &serde_json::json!({"command": "pell search", "m": m, "found": false}),
                    || format!("m={m}: no unit with k <= {kbound}"),
                ),
            }
            Ok(())
        }
        PellCommand::Geometric { n, m, variant } => {
            let branch = match variant {
                GeometricArg::Minus => Branch::GeometricMinus,
                GeometricArg::PlusOdd => Branch::GeometricPlusOdd,
                GeometricArg::PlusEven => Branch::GeometricPlusEven,
            };
            let sol = pell::f1_solution(n, m, branch)?.verified();
            let ok = sol.verdict.as_ref().is_some_and(pell::Verdict::is_verified);
            out.emit(
                &SolutionReport {
                    command: "pell geometric",
                    solution: &sol,
                },
                || {
                    format!(
                        "{} over {}: norm {} expected {} {}",
                        sol.form,
                        rational_text(sol.m()),
                        rational_text(&sol.form.norm()),
                        sol.expected_norm,
                        if ok { "verified" } else { "failed" }
                    )
                },
            );
            if ok {
                Ok(())
            } else {
                Err(Failure::Check("norm differs from the expected sign".into()))
            }
        }
        PellCommand::Gig { fixture } => {
            let text = fs::read_to_string(&fixture)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", fixture.display())))?;
            let report = pell::gig_verify(&pell::GigFixture::parse(&text)?)?;
            out.emit(&report, || {
                let mut lines = vec![format!("k: {} digits", report.k_digits)];
                for b in &report.blocks {
                    lines.push(match b.first_mismatch {
                        None => format!("{}: {} digits, matches", b.label, b.computed_digits),
                        Some(p) => format!(
                            "{}: computed {} digits, fixture {} digits, first mismatch at digit {p}",
                            b.label, b.computed_digits, b.fixture_digits
                        ),
                    });
                }
                lines.push(format!("norm: {}", rational_text(&report.norm)));
                lines.join("\n")
            });
            if report.verified() {
                Ok(())
            } else {
                Err(Failure::Check(
                    "fixture does not match the recomputed unit".into(),
                ))
            }
        }
        PellCommand::Triangle { degree } => {
            let degrees = degree.map_or_else(|| pell::DEGREES.to_vec(), |d| vec![d]);
            let mut failed = 0;
            for d in degrees {
                let rep = pell::triangle_check(d)?;
                if !rep.matches {
                    failed += 1;
                }
                out.emit(&rep, || {
                    format!(
                        "degree {d}: row {:?}, moduli [{}] {}",
                        rep.row,
                        rep.observed.join(", "),
                        if rep.matches { "match" } else { "MISMATCH" }
                    )
                });
            }
            if failed > 0 {
                return Err(Failure::Check(format!(
                    "{failed} degree(s) do not match the triangle"
                )));
            }
            Ok(())
        }
        PellCommand::Freeterms => {
            let rep = pell::free_term_relations_check()?;
            out.emit(&rep, || {
                let mut lines: Vec<String> = rep
                    .free_terms
                    .iter()
                    .map(|(i, v)| format!("s{i}: {v}"))
                    .collect();
                for r in &rep.relations {
                    lines.push(format!(
                        "difference of order {}: {} (expected {}) {}",
                        r.order,
                        r.value,
                        r.expected,
                        if r.holds { "holds" } else { "FAILS" }
                    ));
                }
                lines.join("\n")
            });
            if rep.all_hold() {
                Ok(())
            } else {
                Err(Failure::Check("free-term relations fail".into()))
            }
        }
    }
}

fn verdict_word(v: &pell::Verdict) -> String {
    match v {
        pell::Verdict::Verified => "verified".into(),
        pell::Verdict::Failed { norm } => {
            format!("failed (norm {})", shorten(&rational_text(norm)))
        }
    }
}

fn shorten(s: &str) -> String {
    if s.len() <= 40 {
        s.to_string()
    } else {
        format!("{}...{} ({} chars)", &s[..16], &s[s.len() - 16..], s.len())
    }
}

fn parse_inline_rows(text: &str) -> Result<Vec<Vec<Rational>>, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "rows must look like [[a11],[a21,a22],...], got {text:?}"
        ))
    };
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let inner = inner
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|v| parse_rational(v).map_err(Failure::from))
                .collect()
        })
        .collect()
}

fn parse_row_file(text: &str) -> Result<Vec<Vec<Rational>>, Failure> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|v| !v.is_empty())
                .map(|v| parse_rational(v).map_err(Failure::from))
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct PperReport {
    command: &'static str,
    mode: &'static str,
    order: usize,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<bool>,
}

/// Largest order the exponential definition is run on.
const CHECK_ORDER_LIMIT: usize = 12;

fn pper(out: &Out, args: PperArgs) -> Outcome {
    let rows = match (&args.rows, &args.file) {
        (Some(r), None) => parse_inline_rows(r)?,
        (None, Some(path)) => parse_row_file(
            &fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        )?,
        _ => return Err(Failure::Usage("give rows inline or with --file".into())),
    };
    let a = TriMatrix::new(rows)?;
    let (kind, mode) = match args.mode {
        ModeArg::Pper => (Parafunction::Pper, "pper"),
        ModeArg::Ddet => (Parafunction::Ddet, "ddet"),
    };
    let value = a.eval_fast(kind);
    let check = if args.check {
        if a.order() > CHECK_ORDER_LIMIT {
            return Err(Failure::Usage(format!(
                "--check runs the definition only up to order {CHECK_ORDER_LIMIT}"
            )));
        }
        let mut ok = a.eval_def(kind) == value;
        for i in 1..=a.order() {
            ok &= a.eval_expand_table(i, kind)? == value;
        }
        Some(ok)
    } else {
        None
    };
    let report = PperReport {
        command: "pper",
        mode,
        order: a.order(),
        value: rational_text(&value),
        check,
    };
    out.emit(&report, || match check {
        None => report.value.clone(),
        Some(true) => format!("{} (definition and table expansions agree)", report.value),
        Some(false) => format!("{} (MISMATCH against the definition)", report.value),
    });
    if check == Some(false) {
        return Err(Failure::Check("evaluators disagree".into()));
    }
    Ok(())
}
