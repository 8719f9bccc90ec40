//! Dispatch the same tap under each touch-filtering policy.
//!
//! The tap lands on the install bait while the overlay is up, so the
//! background button receives it with the obscured flag set. A declarative
//! filter drops it outright; the recent-focus filter forgives it as long as
//! the point was unobscured within its window.
//!
//!     cargo run --example dispatch_policies

use std::path::Path;

use tapsim::dispatch::dispatch;
use tapsim::document::load_script;
use tapsim::geometry::PxPoint;
use tapsim::{TouchEvent, TouchPolicy};

fn main() {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/canonical-install.json");
    let script = load_script(&fixture).expect("fixture loads");

    // 690,522 px = 230,174 dp on this 3.0-density device: the center of the
    // step-0 bait, inside the install button.
    let event = TouchEvent {
        point_px: PxPoint::new(690, 522),
        t_ms: 1000,
    };

    for policy in [
        TouchPolicy::Default,
        TouchPolicy::FilterWhenObscured,
        TouchPolicy::RecentFocusFilter { window_ms: 5000 },
    ] {
        let mut stack = script.stack_for_step(0);
        stack.policy = policy;
        let outcome = dispatch(&stack, event).expect("tap is in bounds");
        println!("{:<22} -> {outcome:?}", policy.name());
    }

    // The same tap in the schedule gap is unobscured, so every policy
    // delivers it.
    println!();
    let gap_event = TouchEvent {
        point_px: PxPoint::new(690, 522),
        t_ms: 3600,
    };
    for policy in [TouchPolicy::Default, TouchPolicy::FilterWhenObscured] {
        let mut stack = script.stack_for_step(0);
        stack.policy = policy;
        let outcome = dispatch(&stack, gap_event).expect("tap is in bounds");
        println!("gap tap, {:<22} -> {outcome:?}", policy.name());
    }
}
