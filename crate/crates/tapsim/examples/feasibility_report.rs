//! Assemble full feasibility reports: layout grade, success probabilities,
//! four-axis ratings, and concealment notes, in text and JSON form.
//!
//!     cargo run --example feasibility_report

use std::path::Path;

use tapsim::analysis::{rate_attack, stealth_notes, validate_layout};
use tapsim::cli::build_report;
use tapsim::document::{load_script, ReportDocument};
use tapsim::scenario::payload_risk;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");

    let script = load_script(&fixtures.join("canonical-install.json")).expect("fixture loads");

    // Payload risk drives the impact axis; the installer requests two
    // privacy permissions, so impact is High.
    let risk = payload_risk(&script.payload).expect("catalog permissions");
    println!("privacy permissions: {:?}", risk.privacy_permissions);
    println!("impact: {:?}", risk.impact);
    println!();

    let ratings = rate_attack(&script);
    println!("{}", ratings.feasibility_list());
    println!("compact: {}", ratings.compact());
    println!();

    for note in stealth_notes(&script.concealment) {
        println!("note: {note}");
    }
    println!();

    // The report combines everything; trials are seeded so the document is
    // reproducible byte for byte.
    let violations = validate_layout(&script);
    let (report, trials) = build_report(&script, violations, 1000, 42);
    println!(
        "overall success {} over {} trials (p_hat {})",
        report.overall_success, trials.n, trials.p_hat
    );
    println!();
    println!("{}", ReportDocument::new(&report, Some(trials)).to_json());

    // A one-screen dialer flow rates lower on both impact and complexity.
    let tel = load_script(&fixtures.join("tel-payload.json")).expect("fixture loads");
    println!("tel-payload: {}", rate_attack(&tel).compact());
}
