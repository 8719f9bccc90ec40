//! Play scripted attacks end to end, then estimate success rates over
//! seeded trial batches.
//!
//!     cargo run --example run_attack

use std::path::Path;

use tapsim::document::load_script;
use tapsim::scenario::run_trials;
use tapsim::simulate;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");

    // Noiseless playthrough: two taps, two screens, done.
    let script = load_script(&fixtures.join("canonical-install.json")).expect("fixture loads");
    let outcome = simulate(&script, 0).expect("script is valid");
    println!("canonical-install, sigma=0:");
    println!("  status: {:?}", outcome.status);
    for (event, dispatch) in &outcome.tap_log {
        println!(
            "  t={:>4}ms px=({},{}) -> {dispatch:?}",
            event.t_ms, event.point_px.x, event.point_px.y
        );
    }

    // The same flow with shaky taps: some trials miss their way out of the
    // budget or stray onto the Learn More link.
    let mut noisy = script.clone();
    noisy.user.sigma_dp = 25.0;
    let outcome = simulate(&noisy, 7).expect("script is valid");
    println!();
    println!("canonical-install, sigma=25, seed=7:");
    println!(
        "  status: {:?} after {} taps",
        outcome.status,
        outcome.tap_log.len()
    );

    // Trial batches are deterministic in (script, seed) and independent of
    // scheduling, so these numbers are stable run to run.
    println!();
    for (label, file) in [
        ("canonical-install", "canonical-install.json"),
        ("filtered-declarative", "filtered-declarative.json"),
        ("filtered-programmatic", "filtered-programmatic.json"),
    ] {
        let script = load_script(&fixtures.join(file)).expect("fixture loads");
        let estimate = run_trials(&script, 1000, 42).expect("script is valid");
        println!(
            "{label:<22} p_hat={:<6} ci95=[{:.4}, {:.4}]",
            estimate.p_hat, estimate.ci95.0, estimate.ci95.1
        );
    }

    println!();
    let estimate = run_trials(&noisy, 10_000, 42).expect("script is valid");
    println!(
        "canonical sigma=25      p_hat={:.4} ci95=[{:.4}, {:.4}]",
        estimate.p_hat, estimate.ci95.0, estimate.ci95.1
    );
}
