//! Attack scripts: payload catalog, noisy-user model, the step state machine,
//! and the deterministic trial runner that plays a full attack end to end.
//!
//! Everything downstream of a `(script, seed)` pair is reproducible: the
//! simulated user taps at fixed times, tap noise comes from a counter-based
//! stream cipher RNG, and trial batches derive one independent stream per
//! trial index so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispatch::{dispatch_unchecked, DispatchOutcome, TouchEvent, TouchPolicy};
use crate::geometry::{DeviceProfile, DpPoint};
use crate::windowing::{OverlaySpec, Screen, TargetAction, WindowStack};

/// Android permission names the payload catalog knows about.
pub mod permissions {
    /// Permissions that enable the second app to operate unattended.
    pub const ENABLER: [&str; 3] = ["RECEIVE_BOOT_COMPLETED", "INTERNET", "ACCESS_NETWORK_STATE"];

    /// Permissions that expose the user's private data when granted.
    pub const PRIVACY: [&str; 8] = [
        "ACCESS_FINE_LOCATION",
        "CAMERA",
        "RECORD_AUDIO",
        "READ_CALENDAR",
        "READ_CALL_LOG",
        "READ_CONTACTS",
        "READ_SMS",
        "READ_EXTERNAL_STORAGE",
    ];

    pub fn is_enabler(name: &str) -> bool {
        ENABLER.contains(&name)
    }

    pub fn is_privacy(name: &str) -> bool {
        PRIVACY.contains(&name)
    }

    pub fn is_known(name: &str) -> bool {
        is_enabler(name) || is_privacy(name)
    }
}

/// URL scheme of a [`Payload::UrlOpen`] payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UrlScheme {
    Market,
    Http,
    Https,
    Tel,
}

impl UrlScheme {
    pub fn name(&self) -> &'static str {
        match self {
            UrlScheme::Market => "market",
            UrlScheme::Http => "http",
            UrlScheme::Https => "https",
            UrlScheme::Tel => "tel",
        }
    }
}

/// Activity launched by a [`Payload::LaunchIntent`] payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntentKind {
    SystemSettings,
    ThirdPartyPackage { package: String },
}

/// The background action the attack drives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    /// Stealthy installation of a second app requesting the given permissions.
    Installer {
        package: String,
        permissions: Vec<String>,
    },
    /// Open a URL (store page, web page, or dialer) behind the overlay.
    UrlOpen { scheme: UrlScheme, value: String },
    /// Launch another activity via an intent.
    LaunchIntent { kind: IntentKind },
}

impl Payload {
    /// Impact classification of the payload, ignoring permission names that
    /// are not in the catalog. [`payload_risk`] is the checked variant.
    pub fn impact_rating(&self) -> Impact {
        match self {
            Payload::Installer { permissions, .. } => {
                if permissions.iter().any(|p| permissions::is_privacy(p)) {
                    Impact::High
                } else {
                    Impact::Medium
                }
            }
            // A store URL is an installer delivery in disguise.
            Payload::UrlOpen {
                scheme: UrlScheme::Market,
                ..
            } => Impact::High,
            Payload::UrlOpen {
                scheme: UrlScheme::Http | UrlScheme::Https,
                ..
            } => Impact::Medium,
            // A silent dial costs money at worst.
            Payload::UrlOpen {
                scheme: UrlScheme::Tel,
                ..
            } => Impact::Low,
            Payload::LaunchIntent { .. } => Impact::Medium,
        }
    }
}

/// Impact level of a payload (also the impact axis of the feasibility rating).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Impact {
    Low,
    Medium,
    High,
}

impl std::fmt::Display for Impact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Impact::Low => "Low",
            Impact::Medium => "Medium",
            Impact::High => "High",
        })
    }
}

/// Risk classification of one payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiskSummary {
    /// Privacy permissions the payload requests, in payload order.
    pub privacy_permissions: Vec<String>,
    pub impact: Impact,
}

/// Classify a payload's impact, rejecting permission names outside the catalog.
pub fn payload_risk(payload: &Payload) -> Result<RiskSummary, ScenarioError> {
    if let Payload::Installer { permissions, .. } = payload {
        for name in permissions {
            if !permissions::is_known(name) {
                return Err(ScenarioError::UnknownPermission { name: name.clone() });
            }
        }
    }
    let privacy_permissions = match payload {
        Payload::Installer { permissions, .. } => permissions
            .iter()
            .filter(|p| permissions::is_privacy(p))
            .cloned()
            .collect(),
        _ => Vec::new(),
    };
    Ok(RiskSummary {
        privacy_permissions,
        impact: payload.impact_rating(),
    })
}

/// Tactics the attacker uses to keep the exploit app inconspicuous after
/// install. Descriptive metadata only; does not alter simulation dynamics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concealment {
    /// Launcher icon removed by declaring intent category DEFAULT instead of
    /// LAUNCHER in the manifest.
    pub hide_launcher_icon: bool,
    /// Innocuous system-sounding app name, if any.
    pub generic_name: Option<String>,
}

/// How the simulated victim taps: isotropic Gaussian aim noise in dp, a
/// bounded number of attempts per step, and a fixed tap cadence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserModel {
    pub sigma_dp: f64,
    pub taps_per_step: u32,
    pub inter_tap_ms: u64,
    pub start_delay_ms: u64,
}

/// The full description of one attack: device, victim screens, overlay,
/// payload, victim policy, user model, and concealment metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackScript {
    pub device: DeviceProfile,
    pub screens: Vec<Screen>,
    pub overlay: OverlaySpec,
    pub payload: Payload,
    pub policy: TouchPolicy,
    pub user: UserModel,
    pub concealment: Concealment,
}

impl AttackScript {
    /// Check every structural invariant, naming the first violated one.
    ///
    /// Layout-quality rules (bait/target overlap, aim accuracy, on-screen
    /// bounds, step count, button size) are the validator's job and are not
    /// re-checked here.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let d = &self.device;
        if d.width_px == 0 || d.height_px == 0 || !d.density.is_finite() || d.density <= 0.0 {
            return Err(ScenarioError::InvalidDevice {
                name: d.name.clone(),
            });
        }
        if self.screens.is_empty() {
            return Err(ScenarioError::NoScreens);
        }
        for screen in &self.screens {
            validate_screen(screen)?;
        }
        self.validate_overlay()?;
        if let Payload::Installer { permissions, .. } = &self.payload {
            for name in permissions {
                if !permissions::is_known(name) {
                    return Err(ScenarioError::UnknownPermission { name: name.clone() });
                }
            }
        }
        if let TouchPolicy::RecentFocusFilter { window_ms } = self.policy {
            if window_ms == 0 {
                return Err(ScenarioError::ZeroFilterWindow);
            }
        }
        let u = &self.user;
        if !u.sigma_dp.is_finite() || u.sigma_dp < 0.0 {
            return Err(ScenarioError::InvalidSigma { sigma: u.sigma_dp });
        }
        if u.taps_per_step == 0 {
            return Err(ScenarioError::ZeroTapsPerStep);
        }
        if u.inter_tap_ms == 0 {
            return Err(ScenarioError::ZeroInterTapInterval);
        }
        Ok(())
    }

    fn validate_overlay(&self) -> Result<(), ScenarioError> {
        let overlay = &self.overlay;
        if overlay.schedule.duration_ms == 0 {
            return Err(ScenarioError::ZeroToastDuration);
        }
        if overlay.panels.len() != self.screens.len() {
            return Err(ScenarioError::PanelCountMismatch {
                panels: overlay.panels.len(),
                screens: self.screens.len(),
            });
        }
        let mut seen = vec![false; self.screens.len()];
        for panel in &overlay.panels {
            if panel.visual_rect.w < 0.0 || panel.visual_rect.h < 0.0 {
                return Err(ScenarioError::NegativeRectSize {
                    context: format!("bait panel for step {}", panel.step_index),
                });
            }
            if panel.step_index >= seen.len() || seen[panel.step_index] {
                return Err(ScenarioError::PanelStepsNotContiguous);
            }
            seen[panel.step_index] = true;
            if !panel.visual_rect.contains(panel.aim_point) {
                return Err(ScenarioError::AimOutsideVisualRect {
                    step: panel.step_index,
                });
            }
        }
        Ok(())
    }

    /// The window stack the victim sees while attack step `step` is active.
    pub fn stack_for_step(&self, step: usize) -> WindowStack {
        WindowStack {
            device: self.device.clone(),
            current_screen: self.screens[step].clone(),
            overlay: self.overlay.clone(),
            policy: self.policy,
        }
    }
}

fn validate_screen(screen: &Screen) -> Result<(), ScenarioError> {
    let mut advance_count = 0usize;
    for target in &screen.targets {
        if target.rect.w < 0.0 || target.rect.h < 0.0 {
            return Err(ScenarioError::NegativeRectSize {
                context: format!("target '{}' on screen '{}'", target.name, screen.name),
            });
        }
        match target.action {
            TargetAction::Advance => advance_count += 1,
            TargetAction::Divert => {}
            TargetAction::Inert => continue,
        }
        if target.rect.is_empty() {
            return Err(ScenarioError::EmptyActionableTarget {
                screen: screen.name.clone(),
                target: target.name.clone(),
            });
        }
    }
    if advance_count != 1 {
        return Err(ScenarioError::AdvanceTargetCount {
            screen: screen.name.clone(),
            count: advance_count,
        });
    }
    for (i, a) in screen.targets.iter().enumerate() {
        for b in &screen.targets[i + 1..] {
            if a.name == b.name {
                return Err(ScenarioError::DuplicateTargetName {
                    screen: screen.name.clone(),
                    target: a.name.clone(),
                });
            }
            if a.rect.intersects(&b.rect) {
                return Err(ScenarioError::OverlappingTargets {
                    screen: screen.name.clone(),
                    first: a.name.clone(),
                    second: b.name.clone(),
                });
            }
        }
    }
    Ok(())
}

/// A structural invariant violation in an attack script.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("device '{name}' must have positive dimensions and density")]
    InvalidDevice { name: String },
    #[error("script has no screens")]
    NoScreens,
    #[error("negative rectangle size in {context}")]
    NegativeRectSize { context: String },
    #[error("screen '{screen}' has {count} advance targets, expected exactly 1")]
    AdvanceTargetCount { screen: String, count: usize },
    #[error("advance/divert target '{target}' on screen '{screen}' has an empty rect")]
    EmptyActionableTarget { screen: String, target: String },
    #[error("duplicate target name '{target}' on screen '{screen}'")]
    DuplicateTargetName { screen: String, target: String },
    #[error("targets '{first}' and '{second}' on screen '{screen}' intersect")]
    OverlappingTargets {
        screen: String,
        first: String,
        second: String,
    },
    #[error("toast duration_ms must be > 0")]
    ZeroToastDuration,
    #[error("overlay has {panels} bait panels for {screens} screens, expected one per screen")]
    PanelCountMismatch { panels: usize, screens: usize },
    #[error("bait panel step indexes must be contiguous from 0 with no repeats")]
    PanelStepsNotContiguous,
    #[error("aim point of the step {step} bait panel lies outside its visual rect")]
    AimOutsideVisualRect { step: usize },
    #[error("unknown permission name '{name}'")]
    UnknownPermission { name: String },
    #[error("recent-focus filter window_ms must be > 0")]
    ZeroFilterWindow,
    #[error("tap noise sigma_dp must be finite and >= 0, got {sigma}")]
    InvalidSigma { sigma: f64 },
    #[error("taps_per_step must be >= 1")]
    ZeroTapsPerStep,
    #[error("inter_tap_ms must be > 0")]
    ZeroInterTapInterval,
}

/// Why a simulated attack failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailReason {
    /// The victim tapped a diverting target and left the flow.
    Diverted { target: String },
    /// The per-step tap budget ran out with at least one delivered miss.
    ExhaustedTaps,
    /// The per-step tap budget ran out and every attempt was filtered.
    AllTapsFiltered,
}

/// Terminal state of a simulated attack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimStatus {
    Success,
    Failed(FailReason),
}

/// Result of one simulated attack: terminal status, progress, and the full
/// tap log.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub status: SimStatus,
    pub steps_completed: usize,
    pub tap_log: Vec<(TouchEvent, DispatchOutcome)>,
}

/// Step state machine for one attack playthrough. Feed it each tap's
/// [`DispatchOutcome`] and it tracks progress until a terminal status.
#[derive(Debug, Clone)]
pub struct AttackRun<'a> {
    script: &'a AttackScript,
    step: usize,
    taps_on_step: u32,
    filtered_on_step: u32,
    status: Option<SimStatus>,
}

impl<'a> AttackRun<'a> {
    pub fn new(script: &'a AttackScript) -> Self {
        AttackRun {
            script,
            step: 0,
            taps_on_step: 0,
            filtered_on_step: 0,
            status: None,
        }
    }

    /// Index of the attack step currently awaiting its tap.
    pub fn current_step(&self) -> usize {
        self.step
    }

    /// Screens the victim has been advanced past so far.
    pub fn steps_completed(&self) -> usize {
        self.step
    }

    /// Terminal status, or `None` while the attack is still in flight.
    pub fn status(&self) -> Option<&SimStatus> {
        self.status.as_ref()
    }

    /// Apply one tap outcome: an advance-target hit moves to the next screen
    /// (or succeeds on the last), a divert-target hit fails the attack, and
    /// anything else burns one of the step's tap attempts.
    pub fn advance(&mut self, outcome: &DispatchOutcome) {
        debug_assert!(self.status.is_none(), "advance called on a terminal run");
        if self.status.is_some() {
            return;
        }
        match outcome {
            DispatchOutcome::FilteredObscured => {
                self.filtered_on_step += 1;
                self.consume_attempt();
            }
            DispatchOutcome::Delivered { target_name, .. } => {
                let action = target_name.as_deref().and_then(|name| {
                    self.script.screens[self.step]
                        .targets
                        .iter()
                        .find(|t| t.name == name)
                        .map(|t| t.action)
                });
                match action {
                    Some(TargetAction::Advance) => {
                        self.step += 1;
                        self.taps_on_step = 0;
                        self.filtered_on_step = 0;
                        if self.step == self.script.screens.len() {
                            self.status = Some(SimStatus::Success);
                        }
                    }
                    Some(TargetAction::Divert) => {
                        self.status = Some(SimStatus::Failed(FailReason::Diverted {
                            target: target_name.clone().unwrap_or_default(),
                        }));
                    }
                    Some(TargetAction::Inert) | None => self.consume_attempt(),
                }
            }
        }
    }

    fn consume_attempt(&mut self) {
        self.taps_on_step += 1;
        if self.taps_on_step >= self.script.user.taps_per_step {
            let reason = if self.filtered_on_step == self.taps_on_step {
                FailReason::AllTapsFiltered
            } else {
                FailReason::ExhaustedTaps
            };
            self.status = Some(SimStatus::Failed(reason));
        }
    }
}

/// Play one full attack deterministically.
///
/// The simulated user taps the active step's aim point plus Gaussian noise,
/// at `start_delay_ms + k * inter_tap_ms` for the k-th tap overall, spending
/// at most `taps_per_step` attempts per step. Identical `(script, seed)`
/// pairs produce identical tap logs.
pub fn simulate(script: &AttackScript, seed: u64) -> Result<SimOutcome, ScenarioError> {
    script.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(simulate_with_rng(script, &mut rng))
}

/// Simulation core; assumes `script.validate()` passed.
fn simulate_with_rng(script: &AttackScript, rng: &mut ChaCha8Rng) -> SimOutcome {
    let noise = if script.user.sigma_dp > 0.0 {
        Some(Normal::new(0.0, script.user.sigma_dp).expect("sigma validated as finite and >= 0"))
    } else {
        None
    };
    let mut run = AttackRun::new(script);
    let mut tap_log = Vec::new();
    let mut stack = script.stack_for_step(0);
    let mut stack_step = 0usize;
    let mut tap_index = 0u64;

    while run.status().is_none() {
        let step = run.current_step();
        if step != stack_step {
            stack = script.stack_for_step(step);
            stack_step = step;
        }
        let panel = script
            .overlay
            .panel_for_step(step)
            .expect("validated: one panel per step");
        let mut aim = panel.aim_point;
        if let Some(normal) = &noise {
            aim = DpPoint::new(aim.x + normal.sample(rng), aim.y + normal.sample(rng));
        }
        let event = TouchEvent {
            point_px: aim.to_px(&script.device),
            t_ms: script.user.start_delay_ms + tap_index * script.user.inter_tap_ms,
        };
        // Off-screen noisy taps count as ordinary misses, so the unchecked
        // dispatch path is used here.
        let outcome = dispatch_unchecked(&stack, event);
        tap_log.push((event, outcome.clone()));
        run.advance(&outcome);
        tap_index += 1;
    }

    SimOutcome {
        status: run.status().cloned().expect("loop exits only when terminal"),
        steps_completed: run.steps_completed(),
        tap_log,
    }
}

/// Success-rate estimate over a trial batch with a Wilson 95% score interval.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessEstimate {
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

/// Outcome counts from a batch of independent simulation trials.
///
/// `completed_histogram[c]` counts trials that completed exactly `c` steps,
/// so the last bucket counts full successes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialBatch {
    pub n: u64,
    pub completed_histogram: Vec<u64>,
}

impl TrialBatch {
    pub fn successes(&self) -> u64 {
        *self.completed_histogram.last().expect("histogram non-empty")
    }

    pub fn p_hat(&self) -> f64 {
        self.successes() as f64 / self.n as f64
    }

    /// Per-step pass rates: of the trials that reached step i, the fraction
    /// that advanced past it. The product over steps telescopes to `p_hat`.
    pub fn per_step_success(&self) -> Vec<f64> {
        let steps = self.completed_histogram.len() - 1;
        let mut reached = self.n;
        (0..steps)
            .map(|i| {
                let passed = reached - self.completed_histogram[i];
                let rate = if reached == 0 {
                    0.0
                } else {
                    passed as f64 / reached as f64
                };
                reached = passed;
                rate
            })
            .collect()
    }
}

/// Run `n` independent trials. Trial `i` draws from a dedicated RNG stream
/// derived from `(seed, i)`, so the histogram is independent of execution
/// order and may be computed in parallel.
pub fn run_trial_batch(script: &AttackScript, n: u64, seed: u64) -> Result<TrialBatch, ScenarioError> {
    script.validate()?;
    let buckets = script.screens.len() + 1;
    let completed_histogram = (0..n)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            simulate_with_rng(script, &mut rng).steps_completed
        })
        .fold(
            || vec![0u64; buckets],
            |mut hist, completed| {
                hist[completed] += 1;
                hist
            },
        )
        .reduce(
            || vec![0u64; buckets],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(TrialBatch {
        n,
        completed_histogram,
    })
}

/// Monte Carlo success estimate over `n` trials: `p_hat = successes / n`
/// with a Wilson 95% score interval.
pub fn run_trials(script: &AttackScript, n: u64, seed: u64) -> Result<SuccessEstimate, ScenarioError> {
    let batch = run_trial_batch(script, n, seed)?;
    Ok(SuccessEstimate {
        p_hat: batch.p_hat(),
        ci95: wilson_ci95(batch.successes(), n),
    })
}

/// Two-sided 97.5% standard normal quantile, i.e. the z for a 95% interval.
const Z_95: f64 = 1.959963984540054;

/// Wilson score interval for a binomial proportion at 95% confidence.
/// At the boundary counts the exact endpoints 0 and 1 are used directly,
/// where the general formula would leave float residue.
pub fn wilson_ci95(successes: u64, n: u64) -> (f64, f64) {
    let k = successes;
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 {
        0.0
    } else {
        ((center - radius) / denom).max(0.0)
    };
    let hi = if p == 1.0 {
        1.0
    } else {
        ((center + radius) / denom).min(1.0)
    };
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DpRect;
    use crate::testkit::install_script;
    use crate::windowing::TapTarget;

    fn delivered(target: &str) -> DispatchOutcome {
        DispatchOutcome::Delivered {
            target_name: Some(target.into()),
            obscured: true,
        }
    }

    #[test]
    fn advance_moves_to_next_screen_on_advance_target() {
        let script = install_script();
        let mut run = AttackRun::new(&script);
        run.advance(&delivered("install_button"));
        assert_eq!(run.current_step(), 1);
        assert!(run.status().is_none());
    }

    #[test]
    fn advance_fails_on_divert_target() {
        let script = install_script();
        let mut run = AttackRun::new(&script);
        run.advance(&delivered("install_button"));
        run.advance(&delivered("learn_more"));
        assert_eq!(
            run.status(),
            Some(&SimStatus::Failed(FailReason::Diverted {
                target: "learn_more".into()
            }))
        );
    }

    #[test]
    fn advance_succeeds_after_last_screen() {
        let script = install_script();
        let mut run = AttackRun::new(&script);
        run.advance(&delivered("install_button"));
        run.advance(&delivered("accept_button"));
        assert_eq!(run.status(), Some(&SimStatus::Success));
        assert_eq!(run.steps_completed(), 2);
    }

    #[test]
    fn exhaustion_with_every_attempt_filtered_reports_all_taps_filtered() {
        let mut script = install_script();
        script.user.taps_per_step = 1;
        let mut run = AttackRun::new(&script);
        run.advance(&DispatchOutcome::FilteredObscured);
        assert_eq!(
            run.status(),
            Some(&SimStatus::Failed(FailReason::AllTapsFiltered))
        );
    }

    #[test]
    fn exhaustion_with_a_delivered_miss_reports_exhausted_taps() {
        let mut script = install_script();
        script.user.taps_per_step = 2;
        let mut run = AttackRun::new(&script);
        run.advance(&DispatchOutcome::Delivered {
            target_name: None,
            obscured: true,
        });
        run.advance(&DispatchOutcome::FilteredObscured);
        assert_eq!(
            run.status(),
            Some(&SimStatus::Failed(FailReason::ExhaustedTaps))
        );
    }

    #[test]
    fn noiseless_default_policy_succeeds() {
        let script = install_script();
        let outcome = simulate(&script, 7).unwrap();
        assert_eq!(outcome.status, SimStatus::Success);
        assert_eq!(outcome.steps_completed, 2);
        assert_eq!(outcome.tap_log.len(), 2);
    }

    #[test]
    fn declarative_filter_with_continuous_overlay_filters_everything() {
        let mut script = install_script();
        script.policy = TouchPolicy::FilterWhenObscured;
        script.overlay.schedule.gap_ms = 0;
        let outcome = simulate(&script, 7).unwrap();
        assert_eq!(outcome.status, SimStatus::Failed(FailReason::AllTapsFiltered));
        assert_eq!(outcome.steps_completed, 0);
        assert_eq!(outcome.tap_log.len(), 3);
        assert!(outcome
            .tap_log
            .iter()
            .all(|(_, o)| *o == DispatchOutcome::FilteredObscured));
    }

    #[test]
    fn tap_times_follow_the_schedule_exactly() {
        let mut script = install_script();
        script.policy = TouchPolicy::FilterWhenObscured;
        script.overlay.schedule.gap_ms = 0;
        let outcome = simulate(&script, 7).unwrap();
        let times: Vec<u64> = outcome.tap_log.iter().map(|(e, _)| e.t_ms).collect();
        assert_eq!(times, vec![1000, 1800, 2600]);
    }

    #[test]
    fn wild_noise_with_one_tap_per_step_mostly_fails() {
        let mut script = install_script();
        // noise 10x the button size, single attempt
        script.user.sigma_dp = 480.0;
        script.user.taps_per_step = 1;
        let batch = run_trial_batch(&script, 2000, 11).unwrap();
        assert!(batch.p_hat() < 0.01, "p_hat = {}", batch.p_hat());
    }

    #[test]
    fn simulate_is_deterministic_in_script_and_seed() {
        let mut script = install_script();
        script.user.sigma_dp = 25.0;
        let a = simulate(&script, 99).unwrap();
        let b = simulate(&script, 99).unwrap();
        assert_eq!(a, b);
        let c = simulate(&script, 100).unwrap();
        assert_ne!(a.tap_log, c.tap_log);
    }

    #[test]
    fn run_trials_noiseless_is_certain() {
        let script = install_script();
        let est = run_trials(&script, 1000, 42).unwrap();
        assert_eq!(est.p_hat, 1.0);
        // Wilson bounds frozen from an independent high-precision evaluation.
        assert!((est.ci95.0 - 0.9961732415144449).abs() < 1e-12);
        assert!((est.ci95.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn run_trials_all_filtered_is_zero() {
        let mut script = install_script();
        script.policy = TouchPolicy::FilterWhenObscured;
        script.overlay.schedule.gap_ms = 0;
        let est = run_trials(&script, 1000, 42).unwrap();
        assert_eq!(est.p_hat, 0.0);
        assert!((est.ci95.0 - 0.0).abs() < 1e-12);
        assert!((est.ci95.1 - 0.003826758485555123).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_mid_proportion() {
        let (lo, hi) = wilson_ci95(500, 1000);
        assert!((lo - 0.4690696003681042).abs() < 1e-12);
        assert!((hi - 0.5309303996318958).abs() < 1e-12);
    }

    #[test]
    fn per_step_success_telescopes_to_p_hat() {
        let mut script = install_script();
        script.user.sigma_dp = 30.0;
        let batch = run_trial_batch(&script, 5000, 3).unwrap();
        let per_step = batch.per_step_success();
        assert_eq!(per_step.len(), 2);
        let product: f64 = per_step.iter().product();
        assert!((product - batch.p_hat()).abs() < 1e-12);
    }

    #[test]
    fn payload_risk_flags_privacy_permissions() {
        let payload = Payload::Installer {
            package: "com.example.shadow".into(),
            permissions: vec!["INTERNET".into(), "READ_SMS".into()],
        };
        let risk = payload_risk(&payload).unwrap();
        assert_eq!(risk.impact, Impact::High);
        assert_eq!(risk.privacy_permissions, vec!["READ_SMS".to_string()]);
    }

    #[test]
    fn payload_risk_enabler_only_installer_is_medium() {
        let payload = Payload::Installer {
            package: "com.example.shadow".into(),
            permissions: vec!["INTERNET".into()],
        };
        let risk = payload_risk(&payload).unwrap();
        assert_eq!(risk.impact, Impact::Medium);
        assert!(risk.privacy_permissions.is_empty());
    }

    #[test]
    fn payload_risk_url_schemes() {
        let tel = Payload::UrlOpen {
            scheme: UrlScheme::Tel,
            value: "19005550199".into(),
        };
        assert_eq!(payload_risk(&tel).unwrap().impact, Impact::Low);
        let http = Payload::UrlOpen {
            scheme: UrlScheme::Https,
            value: "https://example.com/bait".into(),
        };
        assert_eq!(payload_risk(&http).unwrap().impact, Impact::Medium);
        let market = Payload::UrlOpen {
            scheme: UrlScheme::Market,
            value: "market://details?id=com.example.shadow".into(),
        };
        assert_eq!(payload_risk(&market).unwrap().impact, Impact::High);
    }

    #[test]
    fn payload_risk_rejects_unknown_permission() {
        let payload = Payload::Installer {
            package: "com.example.shadow".into(),
            permissions: vec!["TOTALLY_MADE_UP".into()],
        };
        assert_eq!(
            payload_risk(&payload),
            Err(ScenarioError::UnknownPermission {
                name: "TOTALLY_MADE_UP".into()
            })
        );
    }

    #[test]
    fn permission_catalog_sets_are_disjoint() {
        for name in permissions::ENABLER {
            assert!(!permissions::PRIVACY.contains(&name));
        }
    }

    #[test]
    fn validate_rejects_two_advance_targets() {
        let mut script = install_script();
        script.screens[0].targets.push(TapTarget {
            name: "second_advance".into(),
            rect: DpRect::new(0.0, 0.0, 48.0, 48.0),
            action: TargetAction::Advance,
        });
        assert!(matches!(
            script.validate(),
            Err(ScenarioError::AdvanceTargetCount { count: 2, .. })
        ));
    }

    #[test]
    fn validate_rejects_panel_step_gap() {
        let mut script = install_script();
        script.overlay.panels[1].step_index = 2;
        assert_eq!(
            script.validate(),
            Err(ScenarioError::PanelStepsNotContiguous)
        );
    }

    #[test]
    fn validate_rejects_aim_outside_visual_rect() {
        let mut script = install_script();
        script.overlay.panels[0].aim_point = DpPoint::new(0.0, 0.0);
        assert_eq!(
            script.validate(),
            Err(ScenarioError::AimOutsideVisualRect { step: 0 })
        );
    }

    #[test]
    fn simulate_rejects_invalid_script() {
        let mut script = install_script();
        script.user.taps_per_step = 0;
        assert_eq!(simulate(&script, 0), Err(ScenarioError::ZeroTapsPerStep));
    }
}
