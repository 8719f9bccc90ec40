//! Walk a toast overlay's visibility loop and show, for a covered point,
//! when it was last seen unobscured.
//!
//!     cargo run --example overlay_timeline

use tapsim::geometry::{DeviceProfile, PxPoint};
use tapsim::windowing::{OverlaySpec, Screen, ToastSchedule, WindowStack};
use tapsim::TouchPolicy;

fn main() {
    let schedule = ToastSchedule {
        start_ms: 0,
        duration_ms: 3500,
        gap_ms: 500,
    };

    // One period is duration + gap; the overlay shows during the first part.
    println!("schedule: start=0ms duration=3500ms gap=500ms (period 4000ms)");
    println!();
    print!("visible:  ");
    for t in (0..8000).step_by(250) {
        print!("{}", if schedule.overlay_visible(t) { '#' } else { '.' });
    }
    println!("  (0..8000ms, 250ms per column)");

    // An opaque overlay obscures every point whenever it is visible.
    let stack = WindowStack {
        device: DeviceProfile::new("reference", 1080, 1920, 3.0),
        current_screen: Screen {
            name: "app_detail".into(),
            targets: vec![],
        },
        overlay: OverlaySpec {
            panels: vec![],
            opaque_background: true,
            schedule,
        },
        policy: TouchPolicy::Default,
    };
    let p = PxPoint::new(690, 522);

    print!("obscured: ");
    for t in (0..8000).step_by(250) {
        print!("{}", if stack.is_point_obscured(p, t) { '#' } else { '.' });
    }
    println!();
    println!();

    for t in [1000, 3499, 3600, 4000, 5000, 7900] {
        let last = stack.last_unobscured_at(p, t);
        println!(
            "t={t:>4}ms obscured={:<5} last_unobscured_at={}",
            stack.is_point_obscured(p, t),
            match last {
                Some(ms) => format!("{ms}ms"),
                None => "never".into(),
            }
        );
    }

    // With gap 0 the overlay never blinks, so a point covered from t=0
    // has no unobscured instant at all.
    let mut continuous = stack.clone();
    continuous.overlay.schedule.gap_ms = 0;
    println!();
    println!(
        "gap=0: last_unobscured_at(t=5000) = {:?}",
        continuous.last_unobscured_at(p, 5000)
    );
}
