//! Touch routing through the window stack.
//!
//! A tapjacked touch is never consumed by the overlay: it falls through to
//! the background screen, carrying an `obscured` flag that records whether a
//! non-touchable surface covered the touched point. The victim's mitigation
//! policy decides what to do with that flag.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::PxPoint;
use crate::windowing::WindowStack;

/// Victim-side touch filtering policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TouchPolicy {
    /// No filtering: every touch is delivered, obscured or not.
    Default,
    /// Declarative filter: drop any touch whose obscured flag is set.
    FilterWhenObscured,
    /// Programmatic filter: accept a touch only if the touched point was
    /// unobscured within the last `window_ms` milliseconds.
    RecentFocusFilter { window_ms: u64 },
}

impl TouchPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            TouchPolicy::Default => "default",
            TouchPolicy::FilterWhenObscured => "filter_when_obscured",
            TouchPolicy::RecentFocusFilter { .. } => "recent_focus_filter",
        }
    }
}

/// One complete tap at a pixel position and simulation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TouchEvent {
    pub point_px: PxPoint,
    pub t_ms: u64,
}

/// Result of routing one touch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DispatchOutcome {
    /// The touch reached the background screen. `target_name` is the first
    /// screen target whose rect contains the point, if any.
    Delivered {
        target_name: Option<String>,
        obscured: bool,
    },
    /// The victim's policy dropped the touch because of obscuration.
    FilteredObscured,
}

impl DispatchOutcome {
    pub fn is_delivered(&self) -> bool {
        matches!(self, DispatchOutcome::Delivered { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    /// The event's point is off-screen, which signals a malformed scenario.
    #[error("touch point ({x}, {y}) px is outside the {width}x{height} px device bounds")]
    OutOfBounds {
        x: i32,
        y: i32,
        width: u32,
        height: u32,
    },
}

/// Route one touch through the stack and apply the victim policy.
///
/// Rejects events whose point lies outside the device bounds.
pub fn dispatch(stack: &WindowStack, event: TouchEvent) -> Result<DispatchOutcome, DispatchError> {
    if !stack.device.contains_px(event.point_px) {
        return Err(DispatchError::OutOfBounds {
            x: event.point_px.x,
            y: event.point_px.y,
            width: stack.device.width_px,
            height: stack.device.height_px,
        });
    }
    Ok(dispatch_unchecked(stack, event))
}

/// Same routing without the bounds check. The simulator uses this so that a
/// noisy tap landing off-screen counts as an ordinary miss instead of an
/// input error.
pub(crate) fn dispatch_unchecked(stack: &WindowStack, event: TouchEvent) -> DispatchOutcome {
    let obscured = stack.is_point_obscured(event.point_px, event.t_ms);
    let filtered = match stack.policy {
        TouchPolicy::Default => false,
        TouchPolicy::FilterWhenObscured => obscured,
        TouchPolicy::RecentFocusFilter { window_ms } => {
            let cutoff = event.t_ms.saturating_sub(window_ms);
            match stack.last_unobscured_at(event.point_px, event.t_ms) {
                Some(t) => t < cutoff,
                None => true,
            }
        }
    };
    if filtered {
        return DispatchOutcome::FilteredObscured;
    }
    let target_name = hit_target(stack, event.point_px);
    DispatchOutcome::Delivered {
        target_name,
        obscured,
    }
}

/// First screen target (in screen order) whose pixel rect contains the point.
fn hit_target(stack: &WindowStack, p: PxPoint) -> Option<String> {
    stack
        .current_screen
        .targets
        .iter()
        .find(|t| t.rect.to_px(&stack.device).contains(p))
        .map(|t| t.name.clone())
}
