//! Layout quality checks, closed-form success probability, and the
//! feasibility rating rubric.
//!
//! The validator grades a structurally sound script against the rules that
//! decide whether the deception can work in practice: bait panels must not
//! sit over tappable areas of other screens, aim points must land on the
//! button they are meant to trigger, everything must fit the display, flows
//! should stay short, and buttons should not be too small to hit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dispatch::TouchPolicy;
use crate::geometry::{DpPoint, DpRect};
use crate::scenario::{AttackScript, Concealment, Impact, IntentKind, Payload, ScenarioError};
use crate::windowing::TargetAction;

/// How serious a layout violation is. Errors make the attack unsound;
/// warnings merely lower its odds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

/// The layout rule a script breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    /// A bait panel covers a tappable target of a different step's screen, so
    /// a stray tap there can fire the wrong control.
    OverlapViolation,
    /// A panel's aim point misses its own step's advance target.
    AimMismatch,
    /// A rect sticks out past the device display.
    OutOfBounds,
    /// More screens than a user will plausibly tap through.
    ExcessiveSteps,
    /// An advance target smaller than the minimum comfortable tap size.
    TinyTarget,
}

impl ViolationKind {
    pub fn severity(self) -> Severity {
        match self {
            ViolationKind::OverlapViolation
            | ViolationKind::AimMismatch
            | ViolationKind::OutOfBounds => Severity::Error,
            ViolationKind::ExcessiveSteps | ViolationKind::TinyTarget => Severity::Warning,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::OverlapViolation => "OverlapViolation",
            ViolationKind::AimMismatch => "AimMismatch",
            ViolationKind::OutOfBounds => "OutOfBounds",
            ViolationKind::ExcessiveSteps => "ExcessiveSteps",
            ViolationKind::TinyTarget => "TinyTarget",
        }
    }
}

/// One graded layout finding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub severity: Severity,
    pub detail: String,
}

impl Violation {
    fn new(kind: ViolationKind, detail: String) -> Self {
        Violation {
            kind,
            severity: kind.severity(),
            detail,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.kind.name(), self.detail)
    }
}

/// Smallest comfortable tap-target edge, in dp.
pub const DEFAULT_MIN_TARGET_DP: f64 = 48.0;

/// Grade a script's layout with the default minimum target size.
pub fn validate_layout(script: &AttackScript) -> Vec<Violation> {
    validate_layout_with(script, DEFAULT_MIN_TARGET_DP)
}

/// Grade a script's layout. Findings are sorted (errors first, then by kind
/// and detail), so the result is independent of panel and target list order.
pub fn validate_layout_with(script: &AttackScript, min_target_dp: f64) -> Vec<Violation> {
    let mut violations = Vec::new();
    let width = script.device.width_dp();
    let height = script.device.height_dp();

    let mut check_bounds = |rect: &DpRect, what: String| {
        if rect.x < 0.0 || rect.y < 0.0 || rect.x + rect.w > width || rect.y + rect.h > height {
            violations.push(Violation::new(
                ViolationKind::OutOfBounds,
                format!(
                    "{what} [{}, {}, {}, {}] exceeds the {width}x{height} dp display",
                    rect.x, rect.y, rect.w, rect.h
                ),
            ));
        }
    };

    for screen in &script.screens {
        for target in &screen.targets {
            check_bounds(
                &target.rect,
                format!("target '{}' on screen '{}'", target.name, screen.name),
            );
        }
    }
    for panel in &script.overlay.panels {
        check_bounds(
            &panel.visual_rect,
            format!("bait panel for step {}", panel.step_index),
        );
    }

    for panel in &script.overlay.panels {
        // The panel's own screen is exempt: sitting over that screen's
        // advance button is the whole point of the bait.
        for (j, screen) in script.screens.iter().enumerate() {
            if j == panel.step_index {
                continue;
            }
            for target in &screen.targets {
                if target.action == TargetAction::Inert {
                    continue;
                }
                if panel.visual_rect.intersects(&target.rect) {
                    violations.push(Violation::new(
                        ViolationKind::OverlapViolation,
                        format!(
                            "bait panel for step {} covers target '{}' on screen '{}'",
                            panel.step_index, target.name, screen.name
                        ),
                    ));
                }
            }
        }

        if let Some(screen) = script.screens.get(panel.step_index) {
            if let Some(advance) = screen.advance_target() {
                if !advance.rect.contains(panel.aim_point) {
                    violations.push(Violation::new(
                        ViolationKind::AimMismatch,
                        format!(
                            "aim point ({}, {}) for step {} misses advance target '{}' on screen '{}'",
                            panel.aim_point.x,
                            panel.aim_point.y,
                            panel.step_index,
                            advance.name,
                            screen.name
                        ),
                    ));
                }
            }
        }
    }

    if script.screens.len() > 3 {
        violations.push(Violation::new(
            ViolationKind::ExcessiveSteps,
            format!(
                "script needs {} screens; a user rarely taps through more than 3",
                script.screens.len()
            ),
        ));
    }

    for screen in &script.screens {
        for target in &screen.targets {
            if target.action == TargetAction::Advance
                && (target.rect.w < min_target_dp || target.rect.h < min_target_dp)
            {
                violations.push(Violation::new(
                    ViolationKind::TinyTarget,
                    format!(
                        "advance target '{}' on screen '{}' is {}x{} dp, under the {min_target_dp} dp minimum",
                        target.name, screen.name, target.rect.w, target.rect.h
                    ),
                ));
            }
        }
    }

    violations.sort();
    violations
}

/// Standard normal CDF, accurate to well under 1e-10 across the real line.
pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// Probability that a tap aimed at `aim` with isotropic Gaussian noise of
/// `sigma_dp` lands inside `target`. Empty targets score 0; `sigma_dp = 0`
/// degenerates to containment.
pub fn hit_probability(target: &DpRect, aim: DpPoint, sigma_dp: f64) -> f64 {
    assert!(sigma_dp >= 0.0, "sigma_dp must be >= 0");
    if target.is_empty() {
        return 0.0;
    }
    if sigma_dp == 0.0 {
        return if target.contains(aim) { 1.0 } else { 0.0 };
    }
    let px = standard_normal_cdf((target.x + target.w - aim.x) / sigma_dp)
        - standard_normal_cdf((target.x - aim.x) / sigma_dp);
    let py = standard_normal_cdf((target.y + target.h - aim.y) / sigma_dp)
        - standard_normal_cdf((target.y - aim.y) / sigma_dp);
    (px * py).clamp(0.0, 1.0)
}

/// Probability that a step succeeds within `taps` attempts, where each tap
/// independently advances with `p_advance`, misses (and is retried) with
/// `p_miss`, and otherwise diverts. Geometric series over retried misses.
pub fn step_success_probability(p_advance: f64, p_miss: f64, taps: u32) -> f64 {
    if p_miss >= 1.0 {
        // All-miss taps mean p_advance = 0, so the step cannot succeed.
        return 0.0;
    }
    p_advance * (1.0 - p_miss.powi(taps as i32)) / (1.0 - p_miss)
}

/// Closed-form per-step and overall success probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSuccess {
    pub per_step: Vec<f64>,
    pub overall: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    /// Touch filtering depends on overlay timing, which the closed form does
    /// not model; estimate filtered policies with simulation trials instead.
    #[error("closed form covers only the default policy, script uses '{policy}'")]
    ClosedFormUnsupported { policy: &'static str },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Closed-form success probability under the default (non-filtering) policy.
///
/// Per tap on step i: `p_a` = probability of hitting the advance target,
/// `p_d` = total probability of hitting a divert target, `p_m` = everything
/// else (retried misses). Steps are independent, so overall success is the
/// exact product of the per-step values.
pub fn analytic_success(script: &AttackScript) -> Result<AnalyticSuccess, AnalysisError> {
    script.validate()?;
    if !matches!(script.policy, TouchPolicy::Default) {
        return Err(AnalysisError::ClosedFormUnsupported {
            policy: script.policy.name(),
        });
    }
    let sigma = script.user.sigma_dp;
    let taps = script.user.taps_per_step;
    let per_step: Vec<f64> = script
        .screens
        .iter()
        .enumerate()
        .map(|(i, screen)| {
            let aim = script
                .overlay
                .panel_for_step(i)
                .expect("validated: one panel per step")
                .aim_point;
            let advance = screen
                .advance_target()
                .expect("validated: exactly one advance target");
            let p_a = hit_probability(&advance.rect, aim, sigma);
            let p_d: f64 = screen
                .divert_targets()
                .map(|t| hit_probability(&t.rect, aim, sigma))
                .sum();
            let p_m = (1.0 - p_a - p_d).max(0.0);
            step_success_probability(p_a, p_m, taps)
        })
        .collect();
    let overall = per_step.iter().product();
    Ok(AnalyticSuccess { per_step, overall })
}

/// How weaponized the known exploit technique is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exploitability {
    ProofOfConcept,
    Weaponized,
}

impl Exploitability {
    pub fn label(self) -> &'static str {
        match self {
            Exploitability::ProofOfConcept => "Proof of Concept",
            Exploitability::Weaponized => "Weaponized",
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Exploitability::ProofOfConcept => "ProofOfConcept",
            Exploitability::Weaponized => "Weaponized",
        }
    }
}

/// How hard the attack is to pull off end to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Complexity {
    High,
    VeryHigh,
}

impl Complexity {
    pub fn label(self) -> &'static str {
        match self {
            Complexity::High => "High",
            Complexity::VeryHigh => "Very High",
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Complexity::High => "High",
            Complexity::VeryHigh => "VeryHigh",
        }
    }
}

/// Bottom-line feasibility of the attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OverallRating {
    Low,
    Medium,
    High,
}

impl OverallRating {
    pub fn label(self) -> &'static str {
        match self {
            OverallRating::Low => "Low",
            OverallRating::Medium => "Medium",
            OverallRating::High => "High",
        }
    }
}

/// Four-axis feasibility rating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratings {
    pub exploitability: Exploitability,
    pub impact: Impact,
    pub complexity: Complexity,
    pub overall: OverallRating,
}

impl Ratings {
    /// Advisory-style four-line rendering, one `Axis - Level` line per axis.
    pub fn feasibility_list(&self) -> String {
        format!(
            "Exploitability - {}\nImpact - {}\nComplexity - {}\nOverall - {}",
            self.exploitability.label(),
            self.impact,
            self.complexity.label(),
            self.overall.label()
        )
    }

    /// Single-line `a / b / c / d` rendering with unspaced level tokens.
    pub fn compact(&self) -> String {
        format!(
            "{} / {} / {} / {}",
            self.exploitability.token(),
            self.impact,
            self.complexity.token(),
            self.overall.label()
        )
    }
}

/// Rate a script's feasibility.
///
/// Exploitability stays at proof-of-concept: the technique is demonstrated
/// but not known to be packaged for reuse. Impact follows the payload.
/// Complexity is very high once the flow needs two or more screens, or the
/// payload must drive a third-party app's own UI; otherwise high. Overall
/// feasibility is low: the timing, layout, and user-behavior constraints
/// above have to hold simultaneously.
pub fn rate_attack(script: &AttackScript) -> Ratings {
    let third_party_intent = matches!(
        &script.payload,
        Payload::LaunchIntent {
            kind: IntentKind::ThirdPartyPackage { .. }
        }
    );
    let complexity = if script.screens.len() >= 2 || third_party_intent {
        Complexity::VeryHigh
    } else {
        Complexity::High
    };
    Ratings {
        exploitability: Exploitability::ProofOfConcept,
        impact: script.payload.impact_rating(),
        complexity,
        overall: OverallRating::Low,
    }
}

/// Human-readable notes on the script's concealment tactics.
pub fn stealth_notes(concealment: &Concealment) -> Vec<String> {
    let mut notes = Vec::new();
    if concealment.hide_launcher_icon {
        notes.push(
            "launcher icon suppressed: the manifest intent filter swaps category LAUNCHER \
             for DEFAULT, leaving the app reachable only through system settings"
                .to_string(),
        );
    }
    if let Some(name) = &concealment.generic_name {
        notes.push(format!(
            "app masquerades under the generic name '{name}' to blend into the installed-app list"
        ));
    }
    notes
}

/// Everything a feasibility assessment reports: graded layout findings,
/// success probabilities, ratings, and concealment notes.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
    pub per_step_success: Vec<f64>,
    pub overall_success: f64,
    pub ratings: Ratings,
    pub stealth_notes: Vec<String>,
}
