//! Recursive lower-bound families and the blowup operators applied to them.
//!
//! A stage turns a configuration into a bigger one using a single new slope:
//! copy-power the current stage, insert scaled images of that power into every
//! probe, then carve each image probe into horizontal layers holding touching
//! pairs of shallow diagonal segments and thin observation strips. Repeating
//! the insertion `iterations` times inside one stage multiplies the probe
//! count; running `d` stages uses `d` distinct slopes in total.

use std::cmp::max;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::config::{
    copy_power, root_against, scaled_copy, unit_configuration, ConfigError, Configuration,
    PlacementPolicy, Probe,
};
use crate::geom::{format_rational, rat, rat_int, slope_set, Point, Rational, Rect, Segment, Slope};
use crate::graph::{bipartition, intersection_graph, is_triangle_free, slope_partition, GraphError};
use crate::prefilter::BBox;

/// Ceiling on the projected segment count before [`construct`] refuses to run.
pub const DEFAULT_SEGMENT_BUDGET: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstructionParams {
    /// Fold count the family is built to defeat.
    pub t: u32,
    /// Number of stages, one new slope per stage.
    pub d: u32,
    /// Copy-power order per stage. Default 4t+1.
    pub copies: u32,
    /// Insertion rounds per stage. Default floor(log2(2t)) + 1.
    pub iterations: u32,
    pub placement: PlacementPolicy,
    /// Maximum projected segment count; construction refuses beyond it.
    pub budget: u64,
}

impl ConstructionParams {
    pub fn new(t: u32, d: u32) -> Self {
        assert!(t >= 1, "fold count must be positive");
        let iterations = (2 * t).ilog2() + 1;
        // Smallest i with 2^i > 2t, so the per-iteration forcing gain
        // 2t(1 - 1/2^i) exceeds 2t - 1.
        debug_assert!(2u64.pow(iterations) > 2 * t as u64);
        ConstructionParams {
            t,
            d,
            copies: 4 * t + 1,
            iterations,
            placement: PlacementPolicy::default(),
            budget: DEFAULT_SEGMENT_BUDGET,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ConstructError {
    #[error("projected {estimated_segments} segments exceed the budget of {budget}")]
    InfeasibleScale { estimated_segments: u128, budget: u64 },
    #[error("slope {gamma} rises {rise} over a layer of height {layer_height}")]
    SlopeTooSteep {
        gamma: String,
        rise: String,
        layer_height: String,
    },
    #[error("pillars unusable for layering: {0}")]
    MalformedPillars(String),
    #[error("{found} slope classes present, at most {allowed} allowed")]
    TooManySlopes { found: usize, allowed: usize },
    #[error("base configuration contains a triangle")]
    NotTriangleFree,
    #[error("slope class is not bipartite, odd cycle through segments {0:?}")]
    NotBipartite(Vec<usize>),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Projected final segment count for `params` by the size recurrences, or the
/// first intermediate projection that exceeds the budget. Runs in O(d *
/// (copies + iterations)) integer steps, so it is safe to call before
/// allocating anything.
pub fn estimate_scale(params: &ConstructionParams) -> Result<u128, ConstructError> {
    let budget = params.budget as u128;
    let check = |n: u128| {
        if n > budget {
            Err(ConstructError::InfeasibleScale {
                estimated_segments: n,
                budget: params.budget,
            })
        } else {
            Ok(())
        }
    };
    let layers = max(params.copies, 2) as u128 - 1;
    let gadget_segs = 2 * (layers - 1);
    let gadget_probes = gadget_segs + 1;
    let (mut s, mut p): (u128, u128) = (0, 1);
    for _ in 0..params.d {
        let (mut sh, mut ph) = (s, p);
        for _ in 1..params.copies {
            sh = sh.saturating_add(ph.saturating_mul(s));
            ph = ph.saturating_mul(p);
        }
        check(sh)?;
        let per_probe = sh.saturating_add(ph.saturating_mul(gadget_segs));
        for _ in 0..params.iterations {
            s = s.saturating_add(p.saturating_mul(per_probe));
            p = p.saturating_mul(ph).saturating_mul(gadget_probes);
            check(s)?;
        }
    }
    Ok(s)
}

/// Slope assigned to a stage's diagonal segments: the smallest probe aspect
/// ratio divided by 4t.
pub fn compute_gamma(probes: &[Probe], t: u32) -> Slope {
    assert!(!probes.is_empty(), "need at least one probe");
    assert!(t >= 1);
    let min_aspect = probes
        .iter()
        .map(|p| p.rect.aspect())
        .min()
        .expect("nonempty");
    Slope::Finite(min_aspect / rat_int(4 * t as i64))
}

// Stage slope over the unshrunk frames of the template probes (left edge to
// the right edge of the first pillar). That aspect is invariant under the
// homotheties that embed the copies, so one value works for every layer the
// stage will ever cut, including under truncated copy counts (hence the
// max(4t, layers) denominator). Halved until it undercuts every positive
// slope already present, which keeps the slope budget honest.
fn stage_slope(h: &Configuration, t: u32, layers: usize, existing: &[Slope]) -> Rational {
    let mut frame_aspect: Option<Rational> = None;
    for p in &h.probes {
        let first = p
            .pillars
            .first()
            .expect("copy-powered probes carry pillars");
        let a = p.rect.height() / (&first.x_hi - &p.rect.x_lo);
        frame_aspect = Some(match frame_aspect {
            None => a,
            Some(c) if a < c => a,
            Some(c) => c,
        });
    }
    let denom = max(4 * t as usize, layers);
    let mut gamma = frame_aspect.expect("copy powers keep at least one probe") / rat_int(denom as i64);
    let half = rat(1, 2);
    while existing.iter().any(|s| match s {
        Slope::Finite(m) => m.is_positive() && *m <= gamma,
        Slope::Vertical => false,
    }) {
        gamma = &gamma * &half;
    }
    gamma
}

/// Cut the unshrunk span of `q` (its left edge to the right edge of its first
/// pillar) into equal-height layers, top layer first. Every layer below the
/// top gets a touching pair of slope-`gamma` segments, the left one spanning
/// all pillars past index j, the right one spanning pillar j alone, plus one
/// thin strip per segment placed so the strip is crossed by that segment and
/// by pillars 0..=j (left strip) respectively 0..j (right strip) and nothing
/// else of the gadget. Returns the segments and the new probes (top layer,
/// then strip pairs per layer), roots computed against `existing` plus the
/// returned segments. Pillars must be listed right to left with gaps, clear
/// of the probe's left edge.
pub fn build_layer_gadget(
    existing: &[Segment],
    q: &Probe,
    gamma: &Rational,
    policy: &PlacementPolicy,
) -> Result<(Vec<Segment>, Vec<Probe>), ConstructError> {
    let boxes: Vec<BBox> = existing.iter().map(BBox::of_segment).collect();
    layer_gadget_boxed(existing, &boxes, q, gamma, policy)
}

// [`build_layer_gadget`] against a segment list whose bounding boxes the
// caller already holds; `existing` and `boxes` index together.
fn layer_gadget_boxed(
    existing: &[Segment],
    boxes: &[BBox],
    q: &Probe,
    gamma: &Rational,
    policy: &PlacementPolicy,
) -> Result<(Vec<Segment>, Vec<Probe>), ConstructError> {
    assert!(gamma > &Rational::zero(), "gadget slope must be positive");
    let pillars = &q.pillars;
    if pillars.is_empty() {
        return Err(ConstructError::MalformedPillars("probe has no pillars".into()));
    }
    for w in pillars.windows(2) {
        if w[1].x_hi >= w[0].x_lo {
            return Err(ConstructError::MalformedPillars(format!(
                "expected right-to-left order with a gap, got spans [{}, {}] then [{}, {}]",
                format_rational(&w[0].x_lo),
                format_rational(&w[0].x_hi),
                format_rational(&w[1].x_lo),
                format_rational(&w[1].x_hi),
            )));
        }
    }
    let leftmost = pillars.last().expect("nonempty");
    if leftmost.x_lo <= q.rect.x_lo {
        return Err(ConstructError::MalformedPillars(format!(
            "no gap between the probe's left edge and the leftmost pillar at {}",
            format_rational(&leftmost.x_lo),
        )));
    }
    if pillars[0].x_hi > q.rect.x_hi {
        return Err(ConstructError::MalformedPillars(
            "first pillar exceeds the probe".into(),
        ));
    }

    let layers = max(pillars.len() - 1, 1);
    let h = q.rect.height() / rat_int(layers as i64);
    let half = rat(1, 2);
    let third = rat(1, 3);

    let mut segs: Vec<Segment> = Vec::with_capacity(2 * (layers - 1));
    let mut rects: Vec<Rect> = Vec::with_capacity(2 * layers - 1);
    rects.push(Rect {
        x_lo: q.rect.x_lo.clone(),
        x_hi: q.rect.x_hi.clone(),
        y_lo: &q.rect.y_hi - &h,
        y_hi: q.rect.y_hi.clone(),
    });

    let x_s = (&q.rect.x_lo + &leftmost.x_lo) * &half;
    for j in 1..layers {
        let top = &q.rect.y_hi - rat_int(j as i64) * &h;
        let cy = &top - &h * &half;
        let x_m = (&pillars[j + 1].x_hi + &pillars[j].x_lo) * &half;
        let x_e = (&pillars[j].x_hi + &pillars[j - 1].x_lo) * &half;
        let rise = gamma * (&x_e - &x_s);
        if rise >= h {
            return Err(ConstructError::SlopeTooSteep {
                gamma: format_rational(gamma),
                rise: format_rational(&rise),
                layer_height: format_rational(&h),
            });
        }
        let mid = (&x_s + &x_e) * &half;
        let at = |x: &Rational| Point {
            x: x.clone(),
            y: &cy + (x - &mid) * gamma,
        };
        segs.push(Segment {
            a: at(&x_s),
            b: at(&x_m),
        });
        segs.push(Segment {
            a: at(&x_m),
            b: at(&x_e),
        });
        // Strip bands sit where the segment traverses the middle third of the
        // gap right of the last pillar it covers, so the pillars left of that
        // gap stay clear while everything to the right still spans the band.
        let sigma1 = (&pillars[j + 1].x_hi + &x_m) * &half;
        let u1 = &sigma1 + (&x_m - &sigma1) * &third;
        let u2 = &sigma1 + (&x_m - &sigma1) * &third * rat_int(2);
        rects.push(Rect {
            x_lo: sigma1,
            x_hi: q.rect.x_hi.clone(),
            y_lo: at(&u1).y,
            y_hi: at(&u2).y,
        });
        let sigma2 = (&pillars[j].x_hi + &x_e) * &half;
        let v1 = &sigma2 + (&x_e - &sigma2) * &third;
        let v2 = &sigma2 + (&x_e - &sigma2) * &third * rat_int(2);
        rects.push(Rect {
            x_lo: sigma2,
            x_hi: q.rect.x_hi.clone(),
            y_lo: at(&v1).y,
            y_hi: at(&v2).y,
        });
    }

    let dboxes: Vec<BBox> = segs.iter().map(BBox::of_segment).collect();
    let probes = rects
        .into_iter()
        .map(|rect| -> Result<Probe, ConstructError> {
            let candidates = existing
                .iter()
                .zip(boxes.iter().copied())
                .chain(segs.iter().zip(dboxes.iter().copied()));
            let root = root_against(candidates, &rect, policy)?;
            Ok(Probe {
                rect,
                root,
                pillars: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((segs, probes))
}

/// Build the family for `params`: `d` stages starting from the bare unit
/// square, each stage adding one slope as described in [`build_layer_gadget`].
/// Refuses with the offending projection when the size recurrences exceed the
/// budget, before any geometry is allocated.
pub fn construct(params: &ConstructionParams) -> Result<Configuration, ConstructError> {
    assert!(params.t >= 1, "fold count must be positive");
    assert!(params.copies >= 1, "need at least one copy");
    estimate_scale(params)?;
    let mut cfg = unit_configuration();
    let mut slopes: Vec<Slope> = Vec::new();
    for _ in 0..params.d {
        cfg = add_stage(&cfg, params, &slopes)?;
        slopes = slope_set(&cfg.segments);
    }
    Ok(cfg)
}

fn add_stage(
    base: &Configuration,
    params: &ConstructionParams,
    existing_slopes: &[Slope],
) -> Result<Configuration, ConstructError> {
    let h = copy_power(base, params.copies, &params.placement)?;
    let layers = max(params.copies, 2) as usize - 1;
    let gamma = stage_slope(&h, params.t, layers, existing_slopes);
    let mut segments = base.segments.clone();
    let mut boxes: Vec<BBox> = segments.iter().map(BBox::of_segment).collect();
    let mut probes = base.probes.clone();
    for _ in 0..params.iterations {
        let old = std::mem::take(&mut probes);
        for p in &old {
            let square = params.placement.choose_square(&p.root, &p.pillars)?;
            let copy = scaled_copy(&h, &square)?;
            boxes.extend(copy.segments.iter().map(BBox::of_segment));
            segments.extend(copy.segments);
            for q in &copy.probes {
                // Probes of this gadget are never met by segments added later
                // in the same round (all later material lives in other bands),
                // so their roots are already final here.
                let (dsegs, nprobes) =
                    layer_gadget_boxed(&segments, &boxes, q, &gamma, &params.placement)?;
                boxes.extend(dsegs.iter().map(BBox::of_segment));
                segments.extend(dsegs);
                probes.extend(nprobes);
            }
        }
    }
    Ok(Configuration { segments, probes })
}

/// `t` identical copies of every segment, kept consecutive. Identical copies
/// share all their points, so the intersection graph is the t-blowup of the
/// original graph: each vertex becomes a K_t, each edge a K_{t,t}.
pub fn blowup(segments: &[Segment], t: u32) -> Vec<Segment> {
    assert!(t >= 1, "blowup factor must be positive");
    let mut out = Vec::with_capacity(segments.len() * t as usize);
    for s in segments {
        for _ in 0..t {
            out.push(s.clone());
        }
    }
    out
}

/// Blow up `base` with multiplicity `t` everywhere except one side of the
/// last slope class (classes in ascending slope order, vertical last), which
/// gets `t + 1`. That class is split by two-coloring each of its components
/// from the lowest segment index, so both sides are pairwise disjoint and the
/// result has clique number at most 2t+1. `t = 0` keeps only the boosted
/// side, one copy each.
pub fn mixed_blowup(
    t: u32,
    d: u32,
    base: &Configuration,
) -> Result<Vec<Segment>, ConstructError> {
    assert!(d >= 1, "need at least one slope class");
    let classes = slope_partition(&base.segments);
    if classes.len() > d as usize {
        return Err(ConstructError::TooManySlopes {
            found: classes.len(),
            allowed: d as usize,
        });
    }
    let g = intersection_graph(&base.segments);
    if !is_triangle_free(&g) {
        return Err(ConstructError::NotTriangleFree);
    }
    let mut boosted = vec![false; base.segments.len()];
    if let Some((_, members)) = classes.last() {
        let sub = g.induced(members);
        let (_, part2) = bipartition(&sub).map_err(|GraphError::OddCycle(w)| {
            ConstructError::NotBipartite(w.into_iter().map(|i| members[i]).collect())
        })?;
        for i in part2 {
            boosted[members[i]] = true;
        }
    }
    let mut out = Vec::new();
    for (i, s) in base.segments.iter().enumerate() {
        for _ in 0..t + u32::from(boosted[i]) {
            out.push(s.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::unit_square;
    use crate::geom::segment_intersection_point;
    use crate::graph::clique_number;

    fn rect(x_lo: (i64, i64), x_hi: (i64, i64), y_lo: (i64, i64), y_hi: (i64, i64)) -> Rect {
        Rect {
            x_lo: rat(x_lo.0, x_lo.1),
            x_hi: rat(x_hi.0, x_hi.1),
            y_lo: rat(y_lo.0, y_lo.1),
            y_hi: rat(y_hi.0, y_hi.1),
        }
    }

    fn bare_probe(r: Rect) -> Probe {
        Probe {
            rect: r.clone(),
            root: r,
            pillars: Vec::new(),
        }
    }

    #[test]
    fn defaults_follow_fold_count() {
        let p = ConstructionParams::new(1, 1);
        assert_eq!((p.copies, p.iterations), (5, 2));
        assert_eq!(
            (ConstructionParams::new(2, 1).copies, ConstructionParams::new(2, 1).iterations),
            (9, 3)
        );
        assert_eq!(ConstructionParams::new(3, 1).iterations, 3);
        assert_eq!(ConstructionParams::new(4, 1).iterations, 4);
        assert_eq!(ConstructionParams::new(4, 1).copies, 17);
    }

    #[test]
    fn gamma_is_min_aspect_over_four_t() {
        let square = bare_probe(rect((0, 1), (1, 1), (0, 1), (1, 1)));
        assert_eq!(compute_gamma(&[square.clone()], 1), Slope::Finite(rat(1, 4)));
        let wide = bare_probe(rect((0, 1), (1, 1), (0, 1), (1, 2)));
        let wider = bare_probe(rect((0, 1), (1, 1), (0, 1), (1, 3)));
        assert_eq!(compute_gamma(&[wide, wider, square], 1), Slope::Finite(rat(1, 12)));
    }

    // Five pillars right to left inside the unit-square probe, all full
    // height, used to audit the gadget geometry against hand-derived values.
    fn layered_probe() -> Probe {
        let band = ((0, 1), (1, 1));
        Probe {
            rect: rect((0, 1), (1, 1), band.0, band.1),
            root: rect((0, 1), (1, 20), band.0, band.1),
            pillars: vec![
                rect((4, 5), (9, 10), band.0, band.1),
                rect((3, 5), (7, 10), band.0, band.1),
                rect((2, 5), (1, 2), band.0, band.1),
                rect((1, 4), (3, 10), band.0, band.1),
                rect((1, 10), (3, 20), band.0, band.1),
            ],
        }
    }

    // Rectangle-on-rectangle analogue of a vertical crossing: the tall one
    // spans the short one's full vertical extent and their spans overlap.
    fn spans_vertically(tall: &Rect, short: &Rect) -> bool {
        tall.y_lo <= short.y_lo
            && tall.y_hi >= short.y_hi
            && tall.x_lo <= short.x_hi
            && tall.x_hi >= short.x_lo
    }

    #[test]
    fn gadget_counts_slopes_and_hand_checked_corners() {
        let q = layered_probe();
        let gamma = rat(1, 100);
        let (segs, probes) = build_layer_gadget(&[], &q, &gamma, &PlacementPolicy::default()).unwrap();
        assert_eq!(segs.len(), 6);
        assert_eq!(probes.len(), 7);
        for s in &segs {
            assert_eq!(s.slope(), Slope::Finite(rat(1, 100)));
        }
        // Layer 1 line: center y = 5/8, reference x = 2/5.
        assert_eq!(segs[0].a, Point { x: rat(1, 20), y: rat(1243, 2000) });
        assert_eq!(segs[0].b, Point { x: rat(11, 20), y: rat(1253, 2000) });
        assert_eq!(segs[1].a, segs[0].b);
        assert_eq!(segs[1].b.x, rat(3, 4));
        // Left strip of layer 1 starts between pillar 2 and the touch point.
        assert_eq!(probes[1].rect.x_lo, rat(21, 40));
        assert_eq!(probes[1].rect.x_hi, rat(1, 1));
        assert_eq!(probes[2].rect.x_lo, rat(29, 40));
        // Top layer comes first and spans the probe at a quarter height.
        assert_eq!(probes[0].rect, rect((0, 1), (1, 1), (3, 4), (1, 1)));
    }

    #[test]
    fn gadget_crossing_patterns_match_layer_index() {
        let q = layered_probe();
        let gamma = rat(1, 100);
        let (segs, probes) = build_layer_gadget(&[], &q, &gamma, &PlacementPolicy::default()).unwrap();
        let layers = 4usize;
        for j in 1..layers {
            let d1 = &segs[2 * (j - 1)];
            let d2 = &segs[2 * (j - 1) + 1];
            let horiz: Vec<usize> = (0..q.pillars.len())
                .filter(|&i| q.pillars[i].crossed_horizontally_by(d1))
                .collect();
            assert_eq!(horiz, ((j + 1)..=layers).collect::<Vec<_>>(), "left segment, layer {j}");
            let horiz2: Vec<usize> = (0..q.pillars.len())
                .filter(|&i| q.pillars[i].crossed_horizontally_by(d2))
                .collect();
            assert_eq!(horiz2, vec![j], "right segment, layer {j}");
            for p in &q.pillars {
                assert!(!p.crossed_vertically_by(d1));
                assert!(!p.crossed_vertically_by(d2));
            }
            // Touching pair: exactly one shared point, the common endpoint.
            let meet = segment_intersection_point(d1, d2).expect("pair must touch");
            assert_eq!(meet, d1.b);

            let strip1 = &probes[1 + 2 * (j - 1)].rect;
            let strip2 = &probes[2 + 2 * (j - 1)].rect;
            assert!(strip1.crossed_vertically_by(d1));
            assert!(!strip1.meets_segment(d2));
            assert!(strip2.crossed_vertically_by(d2));
            assert!(!strip2.meets_segment(d1));
            let tall1: Vec<usize> = (0..q.pillars.len())
                .filter(|&i| spans_vertically(&q.pillars[i], strip1))
                .collect();
            assert_eq!(tall1, (0..=j).collect::<Vec<_>>(), "left strip, layer {j}");
            let tall2: Vec<usize> = (0..q.pillars.len())
                .filter(|&i| spans_vertically(&q.pillars[i], strip2))
                .collect();
            assert_eq!(tall2, (0..j).collect::<Vec<_>>(), "right strip, layer {j}");
        }
        // The gadget on its own is a valid configuration, and the segments
        // stay inside their layers (strictly inside the probe).
        let mini = Configuration {
            segments: segs.clone(),
            probes,
        };
        assert_eq!(mini.validate(), vec![]);
        for s in &segs {
            assert!(*s.y_min() > rat(0, 1) && *s.y_max() < rat(1, 1));
        }
    }

    #[test]
    fn gadget_rejects_bad_pillars_and_steep_slopes() {
        let q = layered_probe();
        let steep = build_layer_gadget(&[], &q, &rat_int(10), &PlacementPolicy::default());
        assert!(matches!(steep, Err(ConstructError::SlopeTooSteep { .. })));

        let mut no_pillars = q.clone();
        no_pillars.pillars.clear();
        assert!(matches!(
            build_layer_gadget(&[], &no_pillars, &rat(1, 100), &PlacementPolicy::default()),
            Err(ConstructError::MalformedPillars(_))
        ));

        let mut reversed = q.clone();
        reversed.pillars.reverse();
        assert!(matches!(
            build_layer_gadget(&[], &reversed, &rat(1, 100), &PlacementPolicy::default()),
            Err(ConstructError::MalformedPillars(_))
        ));

        let mut flush_left = q.clone();
        flush_left.pillars.last_mut().unwrap().x_lo = rat(0, 1);
        assert!(matches!(
            build_layer_gadget(&[], &flush_left, &rat(1, 100), &PlacementPolicy::default()),
            Err(ConstructError::MalformedPillars(_))
        ));
    }

    #[test]
    fn single_pillar_probe_degenerates_to_top_layer_only() {
        let band = ((2, 5), (3, 5));
        let q = Probe {
            rect: rect((1, 4), (1, 1), band.0, band.1),
            root: rect((1, 4), (3, 10), band.0, band.1),
            pillars: vec![rect((1, 2), (1, 1), band.0, band.1)],
        };
        let (segs, probes) = build_layer_gadget(&[], &q, &rat(1, 100), &PlacementPolicy::default()).unwrap();
        assert!(segs.is_empty());
        assert_eq!(probes.len(), 1);
        assert_eq!(probes[0].rect, q.rect);
    }

    #[test]
    fn stage_zero_is_the_unit_frame() {
        for t in [1, 3] {
            let cfg = construct(&ConstructionParams::new(t, 0)).unwrap();
            assert_eq!(cfg, unit_configuration());
        }
        assert_eq!(estimate_scale(&ConstructionParams::new(1, 0)), Ok(0));
    }

    #[test]
    fn one_stage_single_fold_family() {
        let params = ConstructionParams::new(1, 1);
        assert_eq!(estimate_scale(&params), Ok(48));
        let cfg = construct(&params).unwrap();
        assert_eq!(cfg.segments.len(), 48);
        assert_eq!(cfg.probes.len(), 49);
        assert_eq!(cfg.validate(), vec![]);
        assert_eq!(slope_set(&cfg.segments).len(), 1);

        let g = intersection_graph(&cfg.segments);
        assert!(is_triangle_free(&g));
        // Segments come out as touching pairs; each pair is an edge and,
        // the graph being triangle-free, shares no neighbor.
        for i in 0..24 {
            assert!(g.has_edge(2 * i, 2 * i + 1));
            assert_eq!(cfg.segments[2 * i].b, cfg.segments[2 * i + 1].a);
            let n1 = g.neighbors(2 * i);
            let n2 = g.neighbors(2 * i + 1);
            assert!(n1.iter().all(|v| !n2.contains(v)));
        }
    }

    #[test]
    fn one_stage_double_fold_family() {
        let params = ConstructionParams::new(2, 1);
        assert_eq!(estimate_scale(&params), Ok(3374));
        let cfg = construct(&params).unwrap();
        assert_eq!(cfg.segments.len(), 3374);
        assert_eq!(cfg.probes.len(), 3375);
        assert_eq!(slope_set(&cfg.segments).len(), 1);
        assert_eq!(cfg.validate(), vec![]);
        assert!(is_triangle_free(&intersection_graph(&cfg.segments)));
    }

    #[test]
    fn truncated_two_stage_families() {
        // Two copies give a single layer per probe: no segments at all.
        let mut tiny = ConstructionParams::new(1, 2);
        tiny.copies = 2;
        tiny.iterations = 1;
        assert_eq!(estimate_scale(&tiny), Ok(0));
        let cfg = construct(&tiny).unwrap();
        assert_eq!(cfg.segments.len(), 0);
        assert_eq!(cfg.probes.len(), 1);
        assert_eq!(cfg.validate(), vec![]);

        // Three copies exercise both stages with real segments.
        let mut small = ConstructionParams::new(1, 2);
        small.copies = 3;
        small.iterations = 1;
        assert_eq!(estimate_scale(&small), Ok(242));
        let cfg = construct(&small).unwrap();
        assert_eq!(cfg.segments.len(), 242);
        assert_eq!(cfg.probes.len(), 243);
        assert_eq!(cfg.validate(), vec![]);
        assert!(is_triangle_free(&intersection_graph(&cfg.segments)));
        let slopes = slope_set(&cfg.segments);
        assert_eq!(slopes.len(), 2);
        // Ascending and positive: the second stage slope undercuts the first.
        match (&slopes[0], &slopes[1]) {
            (Slope::Finite(a), Slope::Finite(b)) => {
                assert!(a.is_positive() && b.is_positive() && a < b);
            }
            other => panic!("expected two finite slopes, got {other:?}"),
        }
    }

    #[test]
    fn default_two_stage_family_is_refused_with_its_projection() {
        let params = ConstructionParams::new(1, 2);
        let expected = ConstructError::InfeasibleScale {
            estimated_segments: 282_475_248,
            budget: DEFAULT_SEGMENT_BUDGET,
        };
        assert_eq!(estimate_scale(&params), Err(expected.clone()));
        assert_eq!(construct(&params), Err(expected.clone()));
        assert!(expected.to_string().contains("282475248"));
    }

    #[test]
    fn blowup_multiplies_and_matches_graph_blowup() {
        let base = construct(&ConstructionParams::new(1, 1)).unwrap();
        assert_eq!(blowup(&base.segments, 1), base.segments);

        let doubled = blowup(&base.segments, 2);
        assert_eq!(doubled.len(), 96);
        let g = intersection_graph(&base.segments);
        let gb = intersection_graph(&doubled);
        for u in 0..base.segments.len() {
            for a in 0..2 {
                for v in 0..base.segments.len() {
                    for b in 0..2 {
                        let (cu, cv) = (2 * u + a, 2 * v + b);
                        if cu == cv {
                            continue;
                        }
                        let expect = u == v || g.has_edge(u, v);
                        assert_eq!(gb.has_edge(cu, cv), expect, "copies of {u},{v}");
                    }
                }
            }
        }
        assert_eq!(clique_number(&gb), 4);

        let triple = blowup(&[base.segments[0].clone()], 3);
        assert_eq!(clique_number(&intersection_graph(&triple)), 3);
    }

    #[test]
    fn mixed_blowup_splits_the_touching_pairs() {
        let base = construct(&ConstructionParams::new(1, 1)).unwrap();
        // Components are exactly the touching pairs, so the boosted side is
        // the odd-indexed half.
        let bare = mixed_blowup(0, 1, &base).unwrap();
        let odds: Vec<Segment> = base.segments.iter().skip(1).step_by(2).cloned().collect();
        assert_eq!(bare, odds);
        assert_eq!(clique_number(&intersection_graph(&bare)), 1);

        for t in [1u32, 2] {
            let mixed = mixed_blowup(t, 1, &base).unwrap();
            assert_eq!(mixed.len(), base.segments.len() * t as usize + 24);
            let w = clique_number(&intersection_graph(&mixed));
            assert_eq!(w, 2 * t as usize + 1);
        }
    }

    #[test]
    fn mixed_blowup_rejects_bad_bases() {
        let mut small = ConstructionParams::new(1, 2);
        small.copies = 3;
        small.iterations = 1;
        let two_slopes = construct(&small).unwrap();
        assert!(matches!(
            mixed_blowup(1, 1, &two_slopes),
            Err(ConstructError::TooManySlopes { found: 2, allowed: 1 })
        ));

        // Three concurrent segments through one point form a triangle.
        let spoke = |dx: i64, dy: i64| Segment {
            a: Point { x: rat(1, 2), y: rat(1, 2) },
            b: Point {
                x: rat(1, 2) + rat(dx, 10),
                y: rat(1, 2) + rat(dy, 10),
            },
        };
        let triangle = Configuration {
            segments: vec![spoke(1, 0), spoke(1, 1), spoke(0, 1)],
            probes: vec![bare_probe(unit_square())],
        };
        assert!(matches!(
            mixed_blowup(1, 3, &triangle),
            Err(ConstructError::NotTriangleFree)
        ));
    }
}
