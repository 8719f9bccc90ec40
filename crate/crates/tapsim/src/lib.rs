//! Deterministic simulator and feasibility analyzer for tapjacking-style
//! UI overlay attacks.
//!
//! An attack script describes a device, the victim flow's screens and tap
//! targets, a looping non-interactive overlay with bait panels, a payload,
//! the victim app's touch-filtering policy, and a noisy-user model. The
//! library plays scripts deterministically, estimates success probability
//! by seeded Monte Carlo and in closed form, grades layouts against the
//! rules that make the deception viable, and renders feasibility ratings.
//!
//! The `tapsim` binary exposes the same functionality as `validate`,
//! `simulate`, `trace`, and `report` subcommands over JSON scenario files;
//! see the `fixtures/` directory for ready-made scenarios.
//!
//! Runnable examples (`cargo run --example <name>`):
//! - `overlay_timeline`: toast visibility loop and last-unobscured instants.
//! - `dispatch_policies`: one tap dispatched under all three policies.
//! - `run_attack`: full playthroughs with tap logs, then trial batches.
//! - `layout_check`: the validator on clean and broken layouts.
//! - `hit_chance`: noisy-tap hit probability, closed form vs sampling.
//! - `feasibility_report`: assembled reports in text and JSON form.

pub mod analysis;
pub mod cli;
pub mod dispatch;
pub mod document;
pub mod geometry;
pub mod scenario;
#[cfg(test)]
pub(crate) mod testkit;
pub mod windowing;

pub use analysis::{
    analytic_success, hit_probability, rate_attack, stealth_notes, validate_layout,
    FeasibilityReport, Ratings, Violation,
};
pub use dispatch::{dispatch, DispatchOutcome, TouchEvent, TouchPolicy};
pub use document::{load_script, save_script, ReportDocument, ScenarioDocument};
pub use geometry::{DeviceProfile, DpPoint, DpRect, PxPoint, PxRect};
pub use scenario::{
    payload_risk, run_trial_batch, run_trials, simulate, AttackScript, Payload, SimOutcome,
    SimStatus,
};
pub use windowing::{BaitPanel, OverlaySpec, Screen, TapTarget, ToastSchedule, WindowStack};
