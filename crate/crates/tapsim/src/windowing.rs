//! The two-layer window stack: victim activity screens below, a looping
//! non-touchable toast overlay above.
//!
//! The overlay never consumes touches; it only determines whether the touched
//! point was visually covered at the moment of the tap. Time is integer
//! milliseconds on a simulation clock, so every query here is deterministic.

use serde::{Deserialize, Serialize};

use crate::dispatch::TouchPolicy;
use crate::geometry::{DeviceProfile, DpPoint, DpRect, PxPoint};

/// What tapping a background element does to the attack flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetAction {
    /// Progresses the victim flow to the next screen.
    Advance,
    /// Derails the flow (e.g. a help link next to the real button).
    Divert,
    /// Does nothing; the tap is wasted.
    Inert,
}

/// A tappable element on a victim screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapTarget {
    pub name: String,
    pub rect: DpRect,
    pub action: TargetAction,
}

/// One victim screen: an ordered list of tappable targets, exactly one of
/// which advances the flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Screen {
    pub name: String,
    pub targets: Vec<TapTarget>,
}

impl Screen {
    /// The screen's single advancing target. Valid screens have exactly one;
    /// returns the first if the invariant was not checked.
    pub fn advance_target(&self) -> Option<&TapTarget> {
        self.targets.iter().find(|t| t.action == TargetAction::Advance)
    }

    /// All diverting targets on this screen.
    pub fn divert_targets(&self) -> impl Iterator<Item = &TapTarget> {
        self.targets.iter().filter(|t| t.action == TargetAction::Divert)
    }
}

/// One bait image on the overlay, positioned over the button the victim is
/// supposed to press during the given attack step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaitPanel {
    pub step_index: usize,
    pub visual_rect: DpRect,
    pub aim_point: DpPoint,
}

/// Relaunch loop for the toast: shown for `duration_ms`, gone for `gap_ms`,
/// repeating forever from `start_ms`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToastSchedule {
    pub start_ms: u64,
    pub duration_ms: u64,
    pub gap_ms: u64,
}

impl ToastSchedule {
    /// Whether the toast is on screen at time `t_ms`.
    ///
    /// False before `start_ms`; with `gap_ms == 0` the loop is seamless and
    /// the toast is always visible after start.
    pub fn overlay_visible(&self, t_ms: u64) -> bool {
        if t_ms < self.start_ms {
            return false;
        }
        if self.gap_ms == 0 {
            return true;
        }
        let period = self.duration_ms + self.gap_ms;
        (t_ms - self.start_ms) % period < self.duration_ms
    }
}

/// The overlay toast: all bait panels at once, optionally on an opaque
/// background that hides the whole screen while visible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlaySpec {
    pub panels: Vec<BaitPanel>,
    pub opaque_background: bool,
    pub schedule: ToastSchedule,
}

impl OverlaySpec {
    /// The panel assigned to a given attack step, independent of list order.
    pub fn panel_for_step(&self, step: usize) -> Option<&BaitPanel> {
        self.panels.iter().find(|p| p.step_index == step)
    }

    /// Whether the overlay visually covers pixel `p` while it is displayed:
    /// an opaque background covers everything, otherwise only panel rects do.
    fn covers_px(&self, p: PxPoint, device: &DeviceProfile) -> bool {
        self.opaque_background
            || self
                .panels
                .iter()
                .any(|panel| panel.visual_rect.to_px(device).contains(p))
    }
}

/// Victim screen plus overlay plus the victim's touch-filtering policy:
/// everything a single touch is routed through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowStack {
    pub device: DeviceProfile,
    pub current_screen: Screen,
    pub overlay: OverlaySpec,
    pub policy: TouchPolicy,
}

impl WindowStack {
    /// True iff a non-touchable surface covers pixel `p` at time `t_ms`.
    pub fn is_point_obscured(&self, p: PxPoint, t_ms: u64) -> bool {
        self.overlay.schedule.overlay_visible(t_ms) && self.overlay.covers_px(p, &self.device)
    }

    /// The greatest `t' <= t_ms` at which `p` was not obscured, computed in
    /// closed form from the schedule arithmetic. `None` if the overlay has
    /// covered the point continuously since time zero.
    pub fn last_unobscured_at(&self, p: PxPoint, t_ms: u64) -> Option<u64> {
        if !self.overlay.covers_px(p, &self.device) {
            return Some(t_ms);
        }
        let sched = &self.overlay.schedule;
        if t_ms < sched.start_ms {
            return Some(t_ms);
        }
        if sched.gap_ms == 0 {
            // Continuously visible since start; only pre-start instants qualify.
            return sched.start_ms.checked_sub(1);
        }
        let period = sched.duration_ms + sched.gap_ms;
        let phase = (t_ms - sched.start_ms) % period;
        if phase >= sched.duration_ms {
            // Currently inside a gap.
            return Some(t_ms);
        }
        let period_start = t_ms - phase;
        if period_start > sched.start_ms {
            // Last instant of the gap that preceded this display window.
            Some(period_start - 1)
        } else {
            // First display window; fall back to the instant before start.
            sched.start_ms.checked_sub(1)
        }
    }
}
