//! Deterministic SVG pictures of configurations: probes green, pillars
//! shaded, roots pale blue, and the shallowest finite slope class drawn in
//! red on top. Coordinates become floats here and nowhere else; the picture
//! never feeds back into any predicate.

use dirseg::geom::{rational_to_f64, Slope};
use dirseg::graph::slope_partition;
use dirseg::{Configuration, Rect};
use std::fmt::Write as _;

pub struct SvgOptions {
    pub labels: bool,
    pub precision: usize,
}

const WIDTH: f64 = 1000.0;
const PAD: f64 = 20.0;

struct Frame {
    x_lo: f64,
    y_hi: f64,
    k: f64,
    precision: usize,
}

impl Frame {
    fn x(&self, x: f64) -> String {
        fmt_num((x - self.x_lo) * self.k + PAD, self.precision)
    }

    // SVG y grows downward; the plane's y grows upward.
    fn y(&self, y: f64) -> String {
        fmt_num((self.y_hi - y) * self.k + PAD, self.precision)
    }

    // A zero-size rect is not rendered at all, so rectangles far thinner
    // than a pixel keep a hairline footprint.
    fn len(&self, v: f64) -> String {
        fmt_num((v * self.k).max(0.5), self.precision)
    }
}

fn fmt_num(v: f64, precision: usize) -> String {
    format!("{v:.precision$}")
}

/// Index set of the finite slope class with the smallest |slope|, the one
/// carrying the most recently inserted diagonal pairs.
fn highlight_class(config: &Configuration) -> Vec<usize> {
    let mut best: Option<(dirseg::Rational, Vec<usize>)> = None;
    for (slope, members) in slope_partition(&config.segments) {
        if let Slope::Finite(m) = slope {
            let key = &m * &m;
            if best.as_ref().map_or(true, |(k, _)| key < *k) {
                best = Some((key, members));
            }
        }
    }
    best.map(|(_, members)| members).unwrap_or_default()
}

pub fn render(config: &Configuration, opts: &SvgOptions) -> String {
    let mut xs = vec![0.0, 1.0];
    let mut ys = vec![0.0, 1.0];
    let mut rect_bounds = |r: &Rect| {
        xs.push(rational_to_f64(&r.x_lo));
        xs.push(rational_to_f64(&r.x_hi));
        ys.push(rational_to_f64(&r.y_lo));
        ys.push(rational_to_f64(&r.y_hi));
    };
    for p in &config.probes {
        rect_bounds(&p.rect);
        rect_bounds(&p.root);
        for pillar in &p.pillars {
            rect_bounds(pillar);
        }
    }
    for s in &config.segments {
        xs.push(rational_to_f64(s.x_min()));
        xs.push(rational_to_f64(s.x_max()));
        ys.push(rational_to_f64(s.y_min()));
        ys.push(rational_to_f64(s.y_max()));
    }
    let (x_lo, x_hi) = bounds(&xs);
    let (y_lo, y_hi) = bounds(&ys);
    let k = (WIDTH - 2.0 * PAD) / (x_hi - x_lo);
    let height = (y_hi - y_lo) * k + 2.0 * PAD;
    let f = Frame {
        x_lo,
        y_hi,
        k,
        precision: opts.precision,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">",
        fmt_num(WIDTH, opts.precision),
        fmt_num(height, opts.precision)
    );
    rect_el(&mut out, &f, &unit_rect(), "none", "#cccccc", "1");

    for p in &config.probes {
        rect_el(&mut out, &f, &frect(&p.rect), "#c8e6c9", "#2e7d32", "1");
    }
    for p in &config.probes {
        rect_el(&mut out, &f, &frect(&p.root), "#e3f2fd", "#1565c0", "0.5");
        for pillar in &p.pillars {
            rect_el(&mut out, &f, &frect(pillar), "#9e9e9e", "#616161", "0.5");
        }
    }

    let highlight = highlight_class(config);
    let mut hot = vec![false; config.segments.len()];
    for i in &highlight {
        hot[*i] = true;
    }
    for (i, s) in config.segments.iter().enumerate() {
        let (stroke, width) = if hot[i] {
            ("#d32f2f", "2.5")
        } else {
            ("#111111", "1.5")
        };
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>",
            f.x(rational_to_f64(&s.a.x)),
            f.y(rational_to_f64(&s.a.y)),
            f.x(rational_to_f64(&s.b.x)),
            f.y(rational_to_f64(&s.b.y)),
            stroke,
            width
        );
    }

    if opts.labels {
        for (i, p) in config.probes.iter().enumerate() {
            let cx = (rational_to_f64(&p.rect.x_lo) + rational_to_f64(&p.rect.x_hi)) / 2.0;
            let cy = (rational_to_f64(&p.rect.y_lo) + rational_to_f64(&p.rect.y_hi)) / 2.0;
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"monospace\" fill=\"#1b5e20\">{}</text>",
                f.x(cx),
                f.y(cy),
                i
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(vals: &[f64]) -> (f64, f64) {
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

struct FRect {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

fn unit_rect() -> FRect {
    FRect {
        x_lo: 0.0,
        x_hi: 1.0,
        y_lo: 0.0,
        y_hi: 1.0,
    }
}

fn frect(r: &Rect) -> FRect {
    FRect {
        x_lo: rational_to_f64(&r.x_lo),
        x_hi: rational_to_f64(&r.x_hi),
        y_lo: rational_to_f64(&r.y_lo),
        y_hi: rational_to_f64(&r.y_hi),
    }
}

fn rect_el(out: &mut String, f: &Frame, r: &FRect, fill: &str, stroke: &str, stroke_width: &str) {
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" fill-opacity=\"0.6\" stroke=\"{}\" stroke-width=\"{}\"/>",
        f.x(r.x_lo),
        f.y(r.y_hi),
        f.len(r.x_hi - r.x_lo),
        f.len(r.y_hi - r.y_lo),
        fill,
        stroke,
        stroke_width
    );
}
