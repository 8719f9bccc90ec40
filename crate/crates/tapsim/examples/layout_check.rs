//! Grade attack layouts: bait panels must not cover other screens' tappable
//! targets, aims must land on their advance buttons, rects must stay on the
//! display, flows should be short, and buttons should be comfortably sized.
//!
//!     cargo run --example layout_check

use std::path::Path;

use tapsim::analysis::{validate_layout, validate_layout_with};
use tapsim::document::load_script;
use tapsim::geometry::DpRect;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");

    for file in [
        "canonical-install.json",
        "overlap-violation.json",
        "four-step-warning.json",
    ] {
        let script = load_script(&fixtures.join(file)).expect("fixture loads");
        let violations = validate_layout(&script);
        println!("{file}:");
        if violations.is_empty() {
            println!("  clean");
        }
        for v in &violations {
            println!("  {v}");
        }
        println!();
    }

    // The minimum comfortable button size is configurable; the default is
    // 48 dp and the comparison is strict.
    let mut script = load_script(&fixtures.join("tel-payload.json")).expect("fixture loads");
    script.screens[0].targets[0].rect = DpRect::new(120.0, 500.0, 20.0, 20.0);
    script.overlay.panels[0].visual_rect = DpRect::new(118.0, 498.0, 24.0, 24.0);
    script.overlay.panels[0].aim_point = tapsim::DpPoint::new(130.0, 510.0);

    println!("tel-payload with a 20x20 dp call button:");
    for v in validate_layout(&script) {
        println!("  {v}");
    }
    println!(
        "  with min_target_dp=20: {} violations",
        validate_layout_with(&script, 20.0).len()
    );
}
