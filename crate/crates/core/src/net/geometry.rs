//! Planar geometry on a flat km grid: distances, bearings and the covering sector.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// A point on the plane, in kilometres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

/// Bearing from `from` to `to`, counter-clockwise from +x, in `[0, 2π)`.
pub fn bearing(from: Point, to: Point) -> Result<f64, GeometryError> {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    if dx == 0.0 && dy == 0.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    let mut a = dy.atan2(dx);
    if a < 0.0 {
        a += TAU;
    }
    // atan2 of a tiny negative angle plus 2π can round up to exactly 2π
    if a >= TAU {
        a = 0.0;
    }
    Ok(a)
}

// Absorbs rounding in `angle_hi - angle_lo` at zero margin.
const ANGLE_EPS: f64 = 1e-12;

/// Circular sector anchored at `origin`.
///
/// The angular interval runs counter-clockwise from `angle_lo` to `angle_hi`;
/// `angle_hi` may exceed `2π` when the interval wraps past the +x axis.
/// A width of `2π` is a full disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub origin: Point,
    pub angle_lo: f64,
    pub angle_hi: f64,
    pub radius: f64,
}

impl Sector {
    pub fn width(&self) -> f64 {
        self.angle_hi - self.angle_lo
    }

    pub fn is_full_disc(&self) -> bool {
        self.width() >= TAU
    }

    /// True when `angle` lies inside the angular interval (radius ignored).
    pub fn contains_bearing(&self, angle: f64) -> bool {
        self.is_full_disc() || (angle - self.angle_lo).rem_euclid(TAU) <= self.width() + ANGLE_EPS
    }

    /// True when `p` lies inside the sector. The origin itself is always inside.
    pub fn contains(&self, p: Point) -> bool {
        if p.distance(&self.origin) > self.radius {
            return false;
        }
        match bearing(self.origin, p) {
            Ok(b) => self.contains_bearing(b),
            Err(_) => true,
        }
    }
}

/// Smallest sector at `src` covering every point in `dsts`, widened by
/// `angle_margin` on both sides and `radius_margin` (a fraction) outward.
pub fn sector_cover(
    src: Point,
    dsts: &[Point],
    angle_margin: f64,
    radius_margin: f64,
) -> Result<Sector, GeometryError> {
    if dsts.is_empty() {
        return Err(GeometryError::NoDestinations);
    }
    if !(angle_margin >= 0.0) || !(radius_margin >= 0.0) {
        return Err(GeometryError::NegativeMargin);
    }
    let mut bearings = Vec::with_capacity(dsts.len());
    let mut reach: f64 = 0.0;
    for d in dsts {
        bearings.push(bearing(src, *d)?);
        reach = reach.max(src.distance(d));
    }
    bearings.sort_by(f64::total_cmp);

    // The minimal enclosing arc starts just after the widest gap between
    // consecutive bearings (the wrap-around gap included).
    let n = bearings.len();
    let mut start = 0;
    let mut widest = bearings[0] + TAU - bearings[n - 1];
    for i in 1..n {
        let gap = bearings[i] - bearings[i - 1];
        if gap > widest {
            widest = gap;
            start = i;
        }
    }
    let first = bearings[start];
    let last = bearings[(start + n - 1) % n];
    let arc = (last - first).rem_euclid(TAU);

    let radius = reach * (1.0 + radius_margin);
    if arc >= TAU - 2.0 * angle_margin {
        return Ok(Sector {
            origin: src,
            angle_lo: 0.0,
            angle_hi: TAU,
            radius,
        });
    }
    let mut lo = first - angle_margin;
    if lo < 0.0 {
        lo += TAU;
    }
    Ok(Sector {
        origin: src,
        angle_lo: lo,
        angle_hi: lo + arc + 2.0 * angle_margin,
        radius,
    })
}

/// Default half-width widening of the covering sector (15 degrees).
pub const DEFAULT_ANGLE_MARGIN: f64 = PI / 12.0;
/// Default outward widening of the covering sector radius.
pub const DEFAULT_RADIUS_MARGIN: f64 = 0.1;
