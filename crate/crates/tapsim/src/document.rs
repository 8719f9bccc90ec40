//! On-disk scenario and report documents.
//!
//! Scenario files are JSON with a fixed key set; unknown keys are rejected
//! and every structural invariant is re-checked on load, so a script that
//! loads is a script the simulator will accept. The report document mirrors
//! [`FeasibilityReport`] plus an optional Monte Carlo trials block.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{FeasibilityReport, Ratings, Violation};
use crate::dispatch::TouchPolicy;
use crate::geometry::{DeviceProfile, DpPoint, DpRect};
use crate::scenario::{
    AttackScript, Concealment, IntentKind, Payload, ScenarioError, UrlScheme, UserModel,
};
use crate::windowing::{BaitPanel, OverlaySpec, Screen, TapTarget, TargetAction, ToastSchedule};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid script: {0}")]
    Invalid(#[from] ScenarioError),
}

/// Serialized form of an [`AttackScript`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub device: DeviceDoc,
    pub screens: Vec<ScreenDoc>,
    pub overlay: OverlayDoc,
    pub payload: PayloadDoc,
    pub policy: PolicyDoc,
    pub user: UserDoc,
    pub concealment: ConcealmentDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceDoc {
    pub name: String,
    pub width_px: u32,
    pub height_px: u32,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenDoc {
    pub name: String,
    pub targets: Vec<TargetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDoc {
    pub name: String,
    pub rect: [f64; 4],
    pub action: TargetAction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlayDoc {
    pub opaque_background: bool,
    pub schedule: ScheduleDoc,
    pub panels: Vec<PanelDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub start_ms: u64,
    pub duration_ms: u64,
    pub gap_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelDoc {
    pub step: usize,
    pub visual_rect: [f64; 4],
    pub aim_point: [f64; 2],
}

/// Payload as a flat tagged record. Which optional fields must be present
/// (and which must be absent) depends on `type`; the conversion checks both
/// directions so a document cannot smuggle stray fields past the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub package: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permissions: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyDoc {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserDoc {
    pub sigma_dp: f64,
    pub taps_per_step: u32,
    pub inter_tap_ms: u64,
    pub start_delay_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcealmentDoc {
    pub hide_launcher_icon: bool,
    pub generic_name: Option<String>,
}

fn rect_to_array(r: &DpRect) -> [f64; 4] {
    [r.x, r.y, r.w, r.h]
}

fn rect_from_array(a: [f64; 4]) -> DpRect {
    DpRect::new(a[0], a[1], a[2], a[3])
}

fn require<T>(field: Option<T>, name: &str, kind: &str) -> Result<T, LoadError> {
    field.ok_or_else(|| LoadError::Schema(format!("payload type '{kind}' requires field '{name}'")))
}

fn forbid<T>(field: &Option<T>, name: &str, kind: &str) -> Result<(), LoadError> {
    if field.is_some() {
        return Err(LoadError::Schema(format!(
            "payload type '{kind}' does not take field '{name}'"
        )));
    }
    Ok(())
}

impl PayloadDoc {
    pub fn from_payload(payload: &Payload) -> Self {
        let empty = PayloadDoc {
            kind: String::new(),
            package: None,
            permissions: None,
            scheme: None,
            value: None,
            intent: None,
        };
        match payload {
            Payload::Installer {
                package,
                permissions,
            } => PayloadDoc {
                kind: "installer".into(),
                package: Some(package.clone()),
                permissions: Some(permissions.clone()),
                ..empty
            },
            Payload::UrlOpen { scheme, value } => PayloadDoc {
                kind: "url_open".into(),
                scheme: Some(scheme.name().into()),
                value: Some(value.clone()),
                ..empty
            },
            Payload::LaunchIntent { kind } => match kind {
                IntentKind::SystemSettings => PayloadDoc {
                    kind: "launch_intent".into(),
                    intent: Some("system_settings".into()),
                    ..empty
                },
                IntentKind::ThirdPartyPackage { package } => PayloadDoc {
                    kind: "launch_intent".into(),
                    intent: Some("third_party_package".into()),
                    package: Some(package.clone()),
                    ..empty
                },
            },
        }
    }

    pub fn into_payload(self) -> Result<Payload, LoadError> {
        let kind = self.kind.clone();
        match kind.as_str() {
            "installer" => {
                forbid(&self.scheme, "scheme", &kind)?;
                forbid(&self.value, "value", &kind)?;
                forbid(&self.intent, "intent", &kind)?;
                Ok(Payload::Installer {
                    package: require(self.package, "package", &kind)?,
                    permissions: require(self.permissions, "permissions", &kind)?,
                })
            }
            "url_open" => {
                forbid(&self.package, "package", &kind)?;
                forbid(&self.permissions, "permissions", &kind)?;
                forbid(&self.intent, "intent", &kind)?;
                let scheme = match require(self.scheme, "scheme", &kind)?.as_str() {
                    "market" => UrlScheme::Market,
                    "http" => UrlScheme::Http,
                    "https" => UrlScheme::Https,
                    "tel" => UrlScheme::Tel,
                    other => {
                        return Err(LoadError::Schema(format!("unknown url scheme '{other}'")))
                    }
                };
                Ok(Payload::UrlOpen {
                    scheme,
                    value: require(self.value, "value", &kind)?,
                })
            }
            "launch_intent" => {
                forbid(&self.permissions, "permissions", &kind)?;
                forbid(&self.scheme, "scheme", &kind)?;
                forbid(&self.value, "value", &kind)?;
                let intent = match require(self.intent, "intent", &kind)?.as_str() {
                    "system_settings" => {
                        forbid(&self.package, "package", &kind)?;
                        IntentKind::SystemSettings
                    }
                    "third_party_package" => IntentKind::ThirdPartyPackage {
                        package: require(self.package, "package", &kind)?,
                    },
                    other => {
                        return Err(LoadError::Schema(format!("unknown intent '{other}'")))
                    }
                };
                Ok(Payload::LaunchIntent { kind: intent })
            }
            other => Err(LoadError::Schema(format!("unknown payload type '{other}'"))),
        }
    }
}

impl PolicyDoc {
    pub fn from_policy(policy: &TouchPolicy) -> Self {
        PolicyDoc {
            kind: policy.name().into(),
            window_ms: match policy {
                TouchPolicy::RecentFocusFilter { window_ms } => Some(*window_ms),
                _ => None,
            },
        }
    }

    pub fn into_policy(self) -> Result<TouchPolicy, LoadError> {
        match self.kind.as_str() {
            "default" | "filter_when_obscured" => {
                if self.window_ms.is_some() {
                    return Err(LoadError::Schema(format!(
                        "policy type '{}' does not take field 'window_ms'",
                        self.kind
                    )));
                }
                Ok(if self.kind == "default" {
                    TouchPolicy::Default
                } else {
                    TouchPolicy::FilterWhenObscured
                })
            }
            "recent_focus_filter" => Ok(TouchPolicy::RecentFocusFilter {
                window_ms: self.window_ms.ok_or_else(|| {
                    LoadError::Schema(
                        "policy type 'recent_focus_filter' requires field 'window_ms'".into(),
                    )
                })?,
            }),
            other => Err(LoadError::Schema(format!("unknown policy type '{other}'"))),
        }
    }
}

impl ScenarioDocument {
    pub fn from_script(script: &AttackScript) -> Self {
        ScenarioDocument {
            device: DeviceDoc {
                name: script.device.name.clone(),
                width_px: script.device.width_px,
                height_px: script.device.height_px,
                density: script.device.density,
            },
            screens: script
                .screens
                .iter()
                .map(|s| ScreenDoc {
                    name: s.name.clone(),
                    targets: s
                        .targets
                        .iter()
                        .map(|t| TargetDoc {
                            name: t.name.clone(),
                            rect: rect_to_array(&t.rect),
                            action: t.action,
                        })
                        .collect(),
                })
                .collect(),
            overlay: OverlayDoc {
                opaque_background: script.overlay.opaque_background,
                schedule: ScheduleDoc {
                    start_ms: script.overlay.schedule.start_ms,
                    duration_ms: script.overlay.schedule.duration_ms,
                    gap_ms: script.overlay.schedule.gap_ms,
                },
                panels: script
                    .overlay
                    .panels
                    .iter()
                    .map(|p| PanelDoc {
                        step: p.step_index,
                        visual_rect: rect_to_array(&p.visual_rect),
                        aim_point: [p.aim_point.x, p.aim_point.y],
                    })
                    .collect(),
            },
            payload: PayloadDoc::from_payload(&script.payload),
            policy: PolicyDoc::from_policy(&script.policy),
            user: UserDoc {
                sigma_dp: script.user.sigma_dp,
                taps_per_step: script.user.taps_per_step,
                inter_tap_ms: script.user.inter_tap_ms,
                start_delay_ms: script.user.start_delay_ms,
            },
            concealment: ConcealmentDoc {
                hide_launcher_icon: script.concealment.hide_launcher_icon,
                generic_name: script.concealment.generic_name.clone(),
            },
        }
    }

    /// Convert to a domain script, re-checking every structural invariant.
    pub fn into_script(self) -> Result<AttackScript, LoadError> {
        let script = AttackScript {
            device: DeviceProfile::new(
                &self.device.name,
                self.device.width_px,
                self.device.height_px,
                self.device.density,
            ),
            screens: self
                .screens
                .into_iter()
                .map(|s| Screen {
                    name: s.name,
                    targets: s
                        .targets
                        .into_iter()
                        .map(|t| TapTarget {
                            name: t.name,
                            rect: rect_from_array(t.rect),
                            action: t.action,
                        })
                        .collect(),
                })
                .collect(),
            overlay: OverlaySpec {
                opaque_background: self.overlay.opaque_background,
                schedule: ToastSchedule {
                    start_ms: self.overlay.schedule.start_ms,
                    duration_ms: self.overlay.schedule.duration_ms,
                    gap_ms: self.overlay.schedule.gap_ms,
                },
                panels: self
                    .overlay
                    .panels
                    .into_iter()
                    .map(|p| BaitPanel {
                        step_index: p.step,
                        visual_rect: rect_from_array(p.visual_rect),
                        aim_point: DpPoint::new(p.aim_point[0], p.aim_point[1]),
                    })
                    .collect(),
            },
            payload: self.payload.into_payload()?,
            policy: self.policy.into_policy()?,
            user: UserModel {
                sigma_dp: self.user.sigma_dp,
                taps_per_step: self.user.taps_per_step,
                inter_tap_ms: self.user.inter_tap_ms,
                start_delay_ms: self.user.start_delay_ms,
            },
            concealment: Concealment {
                hide_launcher_icon: self.concealment.hide_launcher_icon,
                generic_name: self.concealment.generic_name,
            },
        };
        script.validate()?;
        Ok(script)
    }
}

/// Serialize a script as pretty JSON with a trailing newline.
pub fn script_to_json(script: &AttackScript) -> String {
    let mut s = serde_json::to_string_pretty(&ScenarioDocument::from_script(script))
        .expect("scenario documents always serialize");
    s.push('\n');
    s
}

/// Parse and fully validate a script from JSON text.
pub fn script_from_json(text: &str) -> Result<AttackScript, LoadError> {
    let doc: ScenarioDocument = serde_json::from_str(text)?;
    doc.into_script()
}

/// Load and fully validate a script from a JSON file.
pub fn load_script(path: &Path) -> Result<AttackScript, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    script_from_json(&text)
}

/// Write a script as pretty JSON.
pub fn save_script(script: &AttackScript, path: &Path) -> Result<(), LoadError> {
    fs::write(path, script_to_json(script)).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Monte Carlo block of a report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialsDoc {
    pub n: u64,
    pub seed: u64,
    pub p_hat: f64,
    pub ci95: [f64; 2],
}

/// Serialized feasibility report: mirrors [`FeasibilityReport`] field for
/// field, plus the optional trials block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub violations: Vec<Violation>,
    pub per_step_success: Vec<f64>,
    pub overall_success: f64,
    pub ratings: Ratings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<TrialsDoc>,
    pub stealth_notes: Vec<String>,
}

impl ReportDocument {
    pub fn new(report: &FeasibilityReport, trials: Option<TrialsDoc>) -> Self {
        ReportDocument {
            violations: report.violations.clone(),
            per_step_success: report.per_step_success.clone(),
            overall_success: report.overall_success,
            ratings: report.ratings,
            trials,
            stealth_notes: report.stealth_notes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }
}
