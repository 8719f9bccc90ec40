//! Device profiles, density-independent coordinates, and rectangle math.
//!
//! All layout in this crate is specified in density-independent pixels (dp)
//! so the same scenario works on devices with different resolutions but the
//! same aspect ratio. Physical-pixel values are derived per device via
//! `px = round(dp * density)`, rounding half away from zero.

use serde::{Deserialize, Serialize};

/// Physical screen description: resolution in pixels plus density (px per dp).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub name: String,
    pub width_px: u32,
    pub height_px: u32,
    pub density: f64,
}

impl DeviceProfile {
    pub fn new(name: impl Into<String>, width_px: u32, height_px: u32, density: f64) -> Self {
        DeviceProfile {
            name: name.into(),
            width_px,
            height_px,
            density,
        }
    }

    /// Screen width in dp.
    pub fn width_dp(&self) -> f64 {
        f64::from(self.width_px) / self.density
    }

    /// Screen height in dp.
    pub fn height_dp(&self) -> f64 {
        f64::from(self.height_px) / self.density
    }

    /// True if the pixel point lies on the screen.
    pub fn contains_px(&self, p: PxPoint) -> bool {
        p.x >= 0 && (p.x as i64) < i64::from(self.width_px) && p.y >= 0 && (p.y as i64) < i64::from(self.height_px)
    }
}

/// A point in dp space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpPoint {
    pub x: f64,
    pub y: f64,
}

impl DpPoint {
    pub fn new(x: f64, y: f64) -> Self {
        DpPoint { x, y }
    }

    /// Convert to physical pixels, rounding each coordinate half away from zero.
    pub fn to_px(self, device: &DeviceProfile) -> PxPoint {
        PxPoint {
            x: dp_to_px_coord(self.x, device.density),
            y: dp_to_px_coord(self.y, device.density),
        }
    }
}

/// An axis-aligned rectangle in dp space. Zero-size rectangles are legal but
/// contain no points and intersect nothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpRect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl DpRect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        DpRect { x, y, w, h }
    }

    pub fn is_empty(&self) -> bool {
        self.w <= 0.0 || self.h <= 0.0
    }

    /// Center point of the rectangle.
    pub fn center(&self) -> DpPoint {
        DpPoint::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    /// Hit test, half-open on the far edges: `x <= p.x < x+w && y <= p.y < y+h`.
    /// Adjacent rectangles therefore never double-claim a point.
    pub fn contains(&self, p: DpPoint) -> bool {
        p.x >= self.x && p.x < self.x + self.w && p.y >= self.y && p.y < self.y + self.h
    }

    /// True iff the open interiors overlap. Rectangles that merely share an
    /// edge do not intersect, so abutting layouts are legal.
    pub fn intersects(&self, other: &DpRect) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        self.x < other.x + other.w
            && other.x < self.x + self.w
            && self.y < other.y + other.h
            && other.y < self.y + self.h
    }

    /// Convert to a pixel rectangle by rounding both corners, so that
    /// adjacent dp rectangles stay adjacent in px space.
    pub fn to_px(&self, device: &DeviceProfile) -> PxRect {
        let x0 = dp_to_px_coord(self.x, device.density);
        let y0 = dp_to_px_coord(self.y, device.density);
        let x1 = dp_to_px_coord(self.x + self.w, device.density);
        let y1 = dp_to_px_coord(self.y + self.h, device.density);
        PxRect {
            x: x0,
            y: y0,
            w: x1 - x0,
            h: y1 - y0,
        }
    }
}

/// A point in physical pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PxPoint {
    pub x: i32,
    pub y: i32,
}

impl PxPoint {
    pub fn new(x: i32, y: i32) -> Self {
        PxPoint { x, y }
    }

    /// Convert back to dp. Exact division, no rounding, so the round trip
    /// through `DpPoint::to_px` deviates by at most `0.5 / density` per axis.
    pub fn to_dp(self, device: &DeviceProfile) -> DpPoint {
        DpPoint {
            x: f64::from(self.x) / device.density,
            y: f64::from(self.y) / device.density,
        }
    }
}

/// An axis-aligned rectangle in physical pixels, half-open like [`DpRect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PxRect {
    pub x: i32,
    pub y: i32,
    pub w: i32,
    pub h: i32,
}

impl PxRect {
    pub fn contains(&self, p: PxPoint) -> bool {
        p.x >= self.x && p.x < self.x + self.w && p.y >= self.y && p.y < self.y + self.h
    }
}

/// `round(v * density)` with ties away from zero, which is what
/// `f64::round` implements.
fn dp_to_px_coord(v: f64, density: f64) -> i32 {
    (v * density).round() as i32
}
