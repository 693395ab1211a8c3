//! Float bounding boxes used to skip exact intersection tests.
//!
//! The boxes are widened by a slop, so a reported "disjoint" is safe even
//! though the coordinates were rounded. Anything not provably disjoint goes
//! on to the exact rational predicate. No decision is ever made from floats
//! alone.
//!
//! The conversion is correctly rounded, so its error is at most half an ulp
//! of the value; the slop is a generous multiple of that, relative so it
//! keeps discriminating between features much smaller than the unit frame.
//! The absolute term only covers the subnormal range, where relative error
//! bounds stop holding.

use crate::geom::{rational_to_f64, Rect, Segment};

const SLOP_REL: f64 = 64.0 * f64::EPSILON;
const SLOP_ABS: f64 = 1e-300;

fn widen_lo(v: f64) -> f64 {
    v - (SLOP_ABS + SLOP_REL * v.abs())
}

fn widen_hi(v: f64) -> f64 {
    v + (SLOP_ABS + SLOP_REL * v.abs())
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct BBox {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl BBox {
    pub(crate) fn of_segment(s: &Segment) -> BBox {
        let ax = rational_to_f64(&s.a.x);
        let bx = rational_to_f64(&s.b.x);
        let ay = rational_to_f64(&s.a.y);
        let by = rational_to_f64(&s.b.y);
        BBox {
            x_lo: widen_lo(ax.min(bx)),
            x_hi: widen_hi(ax.max(bx)),
            y_lo: widen_lo(ay.min(by)),
            y_hi: widen_hi(ay.max(by)),
        }
    }

    pub(crate) fn of_rect(r: &Rect) -> BBox {
        BBox {
            x_lo: widen_lo(rational_to_f64(&r.x_lo)),
            x_hi: widen_hi(rational_to_f64(&r.x_hi)),
            y_lo: widen_lo(rational_to_f64(&r.y_lo)),
            y_hi: widen_hi(rational_to_f64(&r.y_hi)),
        }
    }

    /// True when the widened boxes are separated, which certifies that the
    /// underlying exact objects cannot meet.
    pub(crate) fn disjoint(&self, other: &BBox) -> bool {
        self.x_hi < other.x_lo
            || other.x_hi < self.x_lo
            || self.y_hi < other.y_lo
            || other.y_hi < self.y_lo
    }
}
