//! Shared script builders for unit tests.

use crate::dispatch::TouchPolicy;
use crate::geometry::{DeviceProfile, DpPoint, DpRect};
use crate::scenario::{AttackScript, Concealment, Payload, UserModel};
use crate::windowing::{BaitPanel, OverlaySpec, Screen, TapTarget, TargetAction, ToastSchedule};

/// Two-step install flow on a 1080x1920 @ 3.0 device: opaque looping toast
/// over an app-detail screen (install button) and a permissions screen
/// (accept button plus a divert link), noiseless taps, default policy.
pub fn install_script() -> AttackScript {
    AttackScript {
        device: DeviceProfile::new("reference", 1080, 1920, 3.0),
        screens: vec![
            Screen {
                name: "app_detail".into(),
                targets: vec![TapTarget {
                    name: "install_button".into(),
                    rect: DpRect::new(200.0, 150.0, 120.0, 48.0),
                    action: TargetAction::Advance,
                }],
            },
            Screen {
                name: "permissions".into(),
                targets: vec![
                    TapTarget {
                        name: "accept_button".into(),
                        rect: DpRect::new(200.0, 560.0, 120.0, 48.0),
                        action: TargetAction::Advance,
                    },
                    TapTarget {
                        name: "learn_more".into(),
                        rect: DpRect::new(260.0, 130.0, 80.0, 24.0),
                        action: TargetAction::Divert,
                    },
                ],
            },
        ],
        overlay: OverlaySpec {
            panels: vec![
                BaitPanel {
                    step_index: 0,
                    visual_rect: DpRect::new(180.0, 150.0, 80.0, 48.0),
                    aim_point: DpPoint::new(230.0, 174.0),
                },
                BaitPanel {
                    step_index: 1,
                    visual_rect: DpRect::new(200.0, 560.0, 120.0, 48.0),
                    aim_point: DpPoint::new(260.0, 584.0),
                },
            ],
            opaque_background: true,
            schedule: ToastSchedule {
                start_ms: 0,
                duration_ms: 3500,
                gap_ms: 500,
            },
        },
        payload: Payload::Installer {
            package: "com.example.shadow".into(),
            permissions: vec!["INTERNET".into(), "READ_SMS".into()],
        },
        policy: TouchPolicy::Default,
        user: UserModel {
            sigma_dp: 0.0,
            taps_per_step: 3,
            inter_tap_ms: 800,
            start_delay_ms: 1000,
        },
        concealment: Concealment {
            hide_launcher_icon: true,
            generic_name: Some("Android Update Service".into()),
        },
    }
}

/// One-screen dialer flow with a premium-number payload.
pub fn dialer_script() -> AttackScript {
    AttackScript {
        device: DeviceProfile::new("reference", 1080, 1920, 3.0),
        screens: vec![Screen {
            name: "dialer".into(),
            targets: vec![TapTarget {
                name: "call_button".into(),
                rect: DpRect::new(120.0, 500.0, 120.0, 60.0),
                action: TargetAction::Advance,
            }],
        }],
        overlay: OverlaySpec {
            panels: vec![BaitPanel {
                step_index: 0,
                visual_rect: DpRect::new(130.0, 505.0, 100.0, 50.0),
                aim_point: DpPoint::new(180.0, 530.0),
            }],
            opaque_background: true,
            schedule: ToastSchedule {
                start_ms: 0,
                duration_ms: 3500,
                gap_ms: 500,
            },
        },
        payload: Payload::UrlOpen {
            scheme: crate::scenario::UrlScheme::Tel,
            value: "19005550199".into(),
        },
        policy: TouchPolicy::Default,
        user: UserModel {
            sigma_dp: 0.0,
            taps_per_step: 3,
            inter_tap_ms: 800,
            start_delay_ms: 1000,
        },
        concealment: Concealment {
            hide_launcher_icon: false,
            generic_name: None,
        },
    }
}
