//! Property tests over the geometric, timing, dispatch, and statistical
//! invariants.

use std::path::{Path, PathBuf};

use proptest::prelude::*;

use tapsim::analysis::hit_probability;
use tapsim::dispatch::{dispatch, TouchEvent, TouchPolicy};
use tapsim::document::load_script;
use tapsim::geometry::{DeviceProfile, DpPoint, DpRect, PxPoint};
use tapsim::scenario::{wilson_ci95, TrialBatch};
use tapsim::windowing::ToastSchedule;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn rect_strategy() -> impl Strategy<Value = DpRect> {
    (
        -200.0..800.0f64,
        -200.0..800.0f64,
        0.0..300.0f64,
        0.0..300.0f64,
    )
        .prop_map(|(x, y, w, h)| DpRect::new(x, y, w, h))
}

fn schedule_strategy() -> impl Strategy<Value = ToastSchedule> {
    (0u64..3000, 1u64..4000, 0u64..2000).prop_map(|(start_ms, duration_ms, gap_ms)| ToastSchedule {
        start_ms,
        duration_ms,
        gap_ms,
    })
}

proptest! {
    #[test]
    fn dp_px_round_trip_error_is_bounded(
        x in -500.0..3000.0f64,
        y in -500.0..3000.0f64,
        density in 0.5..4.0f64,
    ) {
        let device = DeviceProfile::new("sweep", 100, 100, density);
        let p = DpPoint::new(x, y);
        let back = p.to_px(&device).to_dp(&device);
        let bound = 0.5 / density + 1e-9;
        prop_assert!((back.x - p.x).abs() <= bound);
        prop_assert!((back.y - p.y).abs() <= bound);
    }

    #[test]
    fn nonempty_rect_contains_its_center(rect in rect_strategy()) {
        prop_assume!(!rect.is_empty());
        prop_assert!(rect.contains(rect.center()));
    }

    #[test]
    fn intersection_is_symmetric(a in rect_strategy(), b in rect_strategy()) {
        prop_assert_eq!(a.intersects(&b), b.intersects(&a));
    }

    #[test]
    fn abutting_rects_do_not_intersect(
        a in rect_strategy(),
        dy in -300.0..300.0f64,
        w in 1.0..200.0f64,
        h in 1.0..200.0f64,
    ) {
        prop_assume!(!a.is_empty());
        let b = DpRect::new(a.x + a.w, a.y + dy, w, h);
        prop_assert!(!a.intersects(&b));
    }

    #[test]
    fn empty_rect_intersects_nothing(a in rect_strategy(), b in rect_strategy()) {
        let flat = DpRect::new(a.x, a.y, 0.0, a.h);
        prop_assert!(!flat.intersects(&b));
        prop_assert!(!b.intersects(&flat));
    }

    #[test]
    fn overlay_visibility_is_periodic(
        schedule in schedule_strategy(),
        t in 0u64..20_000,
        periods in 1u64..4,
    ) {
        prop_assume!(t >= schedule.start_ms);
        let period = schedule.duration_ms + schedule.gap_ms;
        prop_assert_eq!(
            schedule.overlay_visible(t),
            schedule.overlay_visible(t + periods * period)
        );
    }

    #[test]
    fn overlay_hidden_before_start(schedule in schedule_strategy(), t in 0u64..3000) {
        prop_assume!(t < schedule.start_ms);
        prop_assert!(!schedule.overlay_visible(t));
    }

    /// The closed form for the last unobscured instant must agree with a
    /// millisecond-resolution scan under an opaque looping overlay.
    #[test]
    fn last_unobscured_matches_linear_scan(
        schedule in schedule_strategy(),
        t_end in 0u64..12_000,
    ) {
        let script = load_script(&fixture("canonical-install.json")).unwrap();
        let mut stack = script.stack_for_step(0);
        stack.overlay.schedule = schedule;
        let p = PxPoint::new(690, 522);

        let mut latest_clear: Option<u64> = None;
        for t in 0..=t_end {
            if !stack.is_point_obscured(p, t) {
                latest_clear = Some(t);
            }
            prop_assert_eq!(stack.last_unobscured_at(p, t), latest_clear);
        }
    }

    /// A tap the declarative filter lets through is a tap the default
    /// policy delivers, at every point and time.
    #[test]
    fn declarative_delivery_implies_default_delivery(
        x in 0i32..1080,
        y in 0i32..1920,
        t_ms in 0u64..12_000,
    ) {
        let script = load_script(&fixture("canonical-install.json")).unwrap();
        let event = TouchEvent { point_px: PxPoint::new(x, y), t_ms };
        let mut stack = script.stack_for_step(0);

        stack.policy = TouchPolicy::FilterWhenObscured;
        let filtered = dispatch(&stack, event).unwrap();
        stack.policy = TouchPolicy::Default;
        let default = dispatch(&stack, event).unwrap();
        if filtered.is_delivered() {
            prop_assert!(default.is_delivered());
        }
    }

    /// Widening the recent-focus window never turns a delivered tap into a
    /// filtered one.
    #[test]
    fn recent_focus_acceptance_is_monotone_in_window(
        x in 0i32..1080,
        y in 0i32..1920,
        t_ms in 0u64..12_000,
        w1 in 1u64..10_000,
        extra in 1u64..10_000,
    ) {
        let script = load_script(&fixture("canonical-install.json")).unwrap();
        let event = TouchEvent { point_px: PxPoint::new(x, y), t_ms };
        let mut stack = script.stack_for_step(0);

        stack.policy = TouchPolicy::RecentFocusFilter { window_ms: w1 };
        let narrow = dispatch(&stack, event).unwrap();
        stack.policy = TouchPolicy::RecentFocusFilter { window_ms: w1 + extra };
        let wide = dispatch(&stack, event).unwrap();
        if narrow.is_delivered() {
            prop_assert!(wide.is_delivered());
        }
    }

    /// Whatever target a dispatch names, the tap really is inside it.
    #[test]
    fn delivered_target_contains_the_tap(
        x in 0i32..1080,
        y in 0i32..1920,
        t_ms in 0u64..12_000,
        step in 0usize..2,
    ) {
        let script = load_script(&fixture("canonical-install.json")).unwrap();
        let event = TouchEvent { point_px: PxPoint::new(x, y), t_ms };
        let stack = script.stack_for_step(step);
        if let tapsim::DispatchOutcome::Delivered { target_name: Some(name), .. } =
            dispatch(&stack, event).unwrap()
        {
            let target = stack
                .current_screen
                .targets
                .iter()
                .find(|t| t.name == name)
                .unwrap();
            prop_assert!(target.rect.to_px(&stack.device).contains(event.point_px));
        }
    }

    #[test]
    fn hit_probability_stays_in_the_unit_interval(
        target in rect_strategy(),
        ax in -400.0..1200.0f64,
        ay in -400.0..1200.0f64,
        sigma in 0.0..100.0f64,
    ) {
        let p = hit_probability(&target, DpPoint::new(ax, ay), sigma);
        prop_assert!((0.0..=1.0).contains(&p));
    }

    #[test]
    fn center_aim_hit_probability_shrinks_with_noise(
        target in rect_strategy(),
        sigma in 0.1..80.0f64,
        extra in 0.1..80.0f64,
    ) {
        prop_assume!(!target.is_empty());
        let center = target.center();
        let tighter = hit_probability(&target, center, sigma);
        let looser = hit_probability(&target, center, sigma + extra);
        prop_assert!(looser <= tighter + 1e-12);
    }

    #[test]
    fn wilson_interval_brackets_the_estimate(n in 1u64..10_000, k_frac in 0.0..=1.0f64) {
        let k = ((n as f64) * k_frac).round() as u64;
        let (lo, hi) = wilson_ci95(k, n);
        let p_hat = k as f64 / n as f64;
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p_hat && p_hat <= hi);
        prop_assert!(lo < hi);
    }

    /// Per-step pass rates always multiply back to the overall rate.
    #[test]
    fn per_step_rates_telescope_to_p_hat(
        hist in proptest::collection::vec(0u64..1000, 2..6),
    ) {
        let n: u64 = hist.iter().sum();
        prop_assume!(n > 0);
        let batch = TrialBatch { n, completed_histogram: hist };
        let product: f64 = batch.per_step_success().iter().product();
        prop_assert!((product - batch.p_hat()).abs() < 1e-12);
    }
}
