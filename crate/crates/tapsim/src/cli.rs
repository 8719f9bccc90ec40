//! Command implementations behind the `tapsim` binary.
//!
//! Each command takes its output writer and returns a process exit code:
//! 0 on success (layout warnings allowed), 1 when the layout has errors,
//! and 2 when the input cannot be loaded at all (unreadable file, malformed
//! or schema-violating document, out-of-bounds trace tap).
//!
//! All output is deterministic for fixed arguments: identical invocations
//! produce byte-identical bytes.

use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use crate::analysis::{
    analytic_success, rate_attack, stealth_notes, validate_layout, FeasibilityReport, Violation,
};
use crate::dispatch::{dispatch, DispatchOutcome, TouchEvent};
use crate::document::{load_script, LoadError, ReportDocument, TrialsDoc};
use crate::geometry::PxPoint;
use crate::scenario::{run_trial_batch, wilson_ci95, AttackScript};

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAYOUT_ERRORS: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

/// Output rendering for `simulate` and `report`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

/// A single tap for `trace`: pixel coordinates and a timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TapSpec {
    pub x: i32,
    pub y: i32,
    pub t_ms: u64,
}

impl TapSpec {
    /// Argument-parser entry point for clap.
    pub fn from_str_arg(s: &str) -> Result<Self, String> {
        s.parse()
    }
}

impl FromStr for TapSpec {
    type Err = String;

    /// Parses `x,y,t` with pixel coordinates and milliseconds.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("expected x,y,t (got '{s}')"));
        }
        let x = parts[0].trim().parse().map_err(|e| format!("x: {e}"))?;
        let y = parts[1].trim().parse().map_err(|e| format!("y: {e}"))?;
        let t_ms = parts[2].trim().parse().map_err(|e| format!("t: {e}"))?;
        Ok(TapSpec { x, y, t_ms })
    }
}

fn load_or_report(path: &Path, out: &mut dyn Write) -> io::Result<Result<AttackScript, i32>> {
    match load_script(path) {
        Ok(script) => Ok(Ok(script)),
        Err(err) => {
            writeln!(out, "error: {err}")?;
            if let LoadError::Parse(source) = &err {
                writeln!(out, "  {source}")?;
            }
            Ok(Err(EXIT_BAD_INPUT))
        }
    }
}

fn print_violations(violations: &[Violation], out: &mut dyn Write) -> io::Result<()> {
    for v in violations {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

/// Check a scenario's layout. Prints every violation; exit 1 if any is an
/// error, 0 if the layout is clean or merely warned about.
pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> io::Result<i32> {
    let script = match load_or_report(path, out)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };
    let violations = validate_layout(&script);
    if violations.is_empty() {
        writeln!(out, "ok: no layout violations")?;
        return Ok(EXIT_OK);
    }
    print_violations(&violations, out)?;
    let errors = violations.iter().filter(|v| v.is_error()).count();
    let warnings = violations.len() - errors;
    writeln!(out, "{errors} error(s), {warnings} warning(s)")?;
    Ok(if errors > 0 { EXIT_LAYOUT_ERRORS } else { EXIT_OK })
}

/// Gate shared by `simulate` and `report`: layout errors block, warnings
/// are printed and ignored.
fn gate_layout(
    script: &AttackScript,
    out: &mut dyn Write,
) -> io::Result<Result<Vec<Violation>, i32>> {
    let violations = validate_layout(script);
    if violations.iter().any(|v| v.is_error()) {
        print_violations(&violations, out)?;
        return Ok(Err(EXIT_LAYOUT_ERRORS));
    }
    Ok(Ok(violations))
}

/// Estimate success probability over `trials` seeded Monte Carlo trials and
/// print the estimate plus the feasibility ratings.
pub fn cmd_simulate(
    path: &Path,
    trials: u64,
    seed: u64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let script = match load_or_report(path, out)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };
    let violations = match gate_layout(&script, out)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let batch = match run_trial_batch(&script, trials, seed) {
        Ok(batch) => batch,
        Err(err) => {
            writeln!(out, "error: {err}")?;
            return Ok(EXIT_BAD_INPUT);
        }
    };
    let ci95 = wilson_ci95(batch.successes(), batch.n);
    let ratings = rate_attack(&script);
    match format {
        OutputFormat::Text => {
            print_violations(&violations, out)?;
            writeln!(out, "trials: {} seed: {seed}", batch.n)?;
            writeln!(out, "successes: {}", batch.successes())?;
            writeln!(out, "p_hat: {}", batch.p_hat())?;
            writeln!(out, "ci95: [{}, {}]", ci95.0, ci95.1)?;
            writeln!(out, "ratings: {}", ratings.compact())?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "trials": TrialsDoc {
                    n: batch.n,
                    seed,
                    p_hat: batch.p_hat(),
                    ci95: [ci95.0, ci95.1],
                },
                "ratings": ratings,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(EXIT_OK)
}

/// Dispatch one tap against the first screen's window stack and print a
/// single trace line: time, point in px and dp, policy, the obscured flag
/// at that instant, and the dispatch outcome.
pub fn cmd_trace(path: &Path, tap: TapSpec, out: &mut dyn Write) -> io::Result<i32> {
    let script = match load_or_report(path, out)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };
    let stack = script.stack_for_step(0);
    let event = TouchEvent {
        point_px: PxPoint::new(tap.x, tap.y),
        t_ms: tap.t_ms,
    };
    let outcome = match dispatch(&stack, event) {
        Ok(outcome) => outcome,
        Err(err) => {
            writeln!(out, "error: {err}")?;
            return Ok(EXIT_BAD_INPUT);
        }
    };
    let dp = event.point_px.to_dp(&script.device);
    let obscured = stack.is_point_obscured(event.point_px, event.t_ms);
    let outcome_text = match &outcome {
        DispatchOutcome::Delivered {
            target_name: Some(name),
            ..
        } => format!("Delivered {name}"),
        DispatchOutcome::Delivered {
            target_name: None, ..
        } => "Delivered (no target)".to_string(),
        DispatchOutcome::FilteredObscured => "FilteredObscured".to_string(),
    };
    writeln!(
        out,
        "t={}ms px=({},{}) dp=({:.2},{:.2}) policy={} obscured={obscured} {outcome_text}",
        event.t_ms,
        event.point_px.x,
        event.point_px.y,
        dp.x,
        dp.y,
        script.policy.name(),
    )?;
    Ok(EXIT_OK)
}

/// Assemble the full feasibility report for a loaded script.
///
/// Success probabilities come from the closed form under the default
/// policy; filtering policies fall back to per-step Monte Carlo pass rates,
/// whose product telescopes to the batch success rate. Overall success is
/// always the exact product of the per-step values.
pub fn build_report(
    script: &AttackScript,
    violations: Vec<Violation>,
    trials: u64,
    seed: u64,
) -> (FeasibilityReport, TrialsDoc) {
    let batch = run_trial_batch(script, trials, seed).expect("script validated on load");
    let ci95 = wilson_ci95(batch.successes(), batch.n);
    let trials_doc = TrialsDoc {
        n: batch.n,
        seed,
        p_hat: batch.p_hat(),
        ci95: [ci95.0, ci95.1],
    };
    let per_step_success = match analytic_success(script) {
        Ok(analytic) => analytic.per_step,
        Err(_) => batch.per_step_success(),
    };
    let overall_success = per_step_success.iter().product();
    let report = FeasibilityReport {
        violations,
        per_step_success,
        overall_success,
        ratings: rate_attack(script),
        stealth_notes: stealth_notes(&script.concealment),
    };
    (report, trials_doc)
}

/// Full feasibility report: violations, per-step and overall success,
/// Monte Carlo estimate, ratings, and stealth notes.
pub fn cmd_report(
    path: &Path,
    trials: u64,
    seed: u64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let script = match load_or_report(path, out)? {
        Ok(script) => script,
        Err(code) => return Ok(code),
    };
    let violations = match gate_layout(&script, out)? {
        Ok(v) => v,
        Err(code) => return Ok(code),
    };
    let (report, trials_doc) = build_report(&script, violations, trials, seed);
    match format {
        OutputFormat::Text => {
            if report.violations.is_empty() {
                writeln!(out, "no layout violations")?;
            } else {
                print_violations(&report.violations, out)?;
            }
            let per_step: Vec<String> = report
                .per_step_success
                .iter()
                .map(|p| p.to_string())
                .collect();
            writeln!(out, "per-step success: [{}]", per_step.join(", "))?;
            writeln!(out, "overall success: {}", report.overall_success)?;
            writeln!(
                out,
                "trials: n={} seed={} p_hat={} ci95=[{}, {}]",
                trials_doc.n, trials_doc.seed, trials_doc.p_hat, trials_doc.ci95[0], trials_doc.ci95[1]
            )?;
            writeln!(out, "ratings: {}", report.ratings.compact())?;
            writeln!(out, "{}", report.ratings.feasibility_list())?;
            if !report.stealth_notes.is_empty() {
                writeln!(out, "stealth notes:")?;
                for note in &report.stealth_notes {
                    writeln!(out, "  - {note}")?;
                }
            }
        }
        OutputFormat::Json => {
            let doc = ReportDocument::new(&report, Some(trials_doc));
            write!(out, "{}", doc.to_json())?;
        }
    }
    Ok(EXIT_OK)
}
