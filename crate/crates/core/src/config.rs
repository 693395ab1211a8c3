//! Probe-carrying segment families and the copying operation.
//!
//! A configuration is a family of segments in the unit square together with
//! pairwise disjoint probe rectangles. Every probe reaches the right edge of
//! the frame, every segment that meets a probe crosses it top to bottom, and
//! those crossing segments are pairwise disjoint. Each probe carries a root
//! (a left-anchored strip known to be free of segments) and an ordered list
//! of pillars (full-height strips that partition the crossing segments).
//!
//! `copy_power` recursively plants scaled copies of the whole family inside
//! probe roots. After k rounds every surviving probe has exactly k pillars,
//! and each segment meeting a probe crosses exactly one of its pillars. That
//! partition is what the colouring arguments downstream consume.

use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::geom::{min_x_in_band, rat, Point, Rational, Rect, Segment};
use crate::prefilter::BBox;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Probe {
    pub rect: Rect,
    pub root: Rect,
    pub pillars: Vec<Rect>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Configuration {
    pub segments: Vec<Segment>,
    pub probes: Vec<Probe>,
}

/// The frame every configuration lives in.
pub fn unit_square() -> Rect {
    Rect {
        x_lo: rat(0, 1),
        x_hi: rat(1, 1),
        y_lo: rat(0, 1),
        y_hi: rat(1, 1),
    }
}

/// No segments, one probe filling the frame, its root the whole frame.
pub fn unit_configuration() -> Configuration {
    Configuration {
        segments: Vec::new(),
        probes: vec![Probe {
            rect: unit_square(),
            root: unit_square(),
            pillars: Vec::new(),
        }],
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RootFault {
    NotInsideProbe,
    NotLeftAnchored,
    MeetsSegment(usize),
    MeetsPillar(usize),
}

impl fmt::Display for RootFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootFault::NotInsideProbe => write!(f, "not inside the probe"),
            RootFault::NotLeftAnchored => {
                write!(f, "does not sit on the probe's left side with full height")
            }
            RootFault::MeetsSegment(i) => write!(f, "meets segment {i}"),
            RootFault::MeetsPillar(i) => write!(f, "meets pillar {i}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PillarFault {
    NotInsideProbe,
    WrongHeight,
    TouchesLeftSide,
    OverlapsPillar(usize),
}

impl fmt::Display for PillarFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PillarFault::NotInsideProbe => write!(f, "not inside the probe"),
            PillarFault::WrongHeight => write!(f, "does not span the probe's full height"),
            PillarFault::TouchesLeftSide => write!(f, "touches the probe's left side"),
            PillarFault::OverlapsPillar(j) => write!(f, "overlaps pillar {j}"),
        }
    }
}

/// One broken wellformedness clause. Indices refer to the configuration's
/// segment and probe lists; pillar indices are per probe.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    SegmentOutsideFrame { segment: usize },
    ProbeNotExtended { probe: usize },
    ProbeDisjointness { probe_a: usize, probe_b: usize },
    VerticalCrossing { probe: usize, segment: usize },
    CrossersNotDisjoint { probe: usize, segment_a: usize, segment_b: usize },
    RootViolation { probe: usize, fault: RootFault },
    PillarViolation { probe: usize, pillar: usize, fault: PillarFault },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SegmentOutsideFrame { segment } => {
                write!(f, "segment {segment} leaves the unit square")
            }
            Violation::ProbeNotExtended { probe } => {
                write!(f, "probe {probe} does not reach the right edge x = 1")
            }
            Violation::ProbeDisjointness { probe_a, probe_b } => {
                write!(f, "probes {probe_a} and {probe_b} overlap")
            }
            Violation::VerticalCrossing { probe, segment } => write!(
                f,
                "segment {segment} meets probe {probe} without crossing it vertically"
            ),
            Violation::CrossersNotDisjoint {
                probe,
                segment_a,
                segment_b,
            } => write!(
                f,
                "segments {segment_a} and {segment_b} both meet probe {probe} and intersect"
            ),
            Violation::RootViolation { probe, fault } => {
                write!(f, "root of probe {probe}: {fault}")
            }
            Violation::PillarViolation {
                probe,
                pillar,
                fault,
            } => write!(f, "pillar {pillar} of probe {probe}: {fault}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ConfigError {
    #[error("a segment reaches the probe's left edge (x = {0}), leaving no room for a root")]
    EmptyRoot(String),
    #[error("no positive-width gap is left in the root outside the pillar spans")]
    RootTooSmall,
    #[error("scaling target is not a square: {0}")]
    NotASquare(String),
    #[error("scaling target is not inside the unit square: {0}")]
    OutsideFrame(String),
}

/// How copies are placed inside roots. `margin` is the fraction of the
/// available room actually used, strictly between 0 and 1 so that placed
/// objects stay clear of closed-set boundaries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlacementPolicy {
    pub margin: Rational,
}

impl Default for PlacementPolicy {
    fn default() -> Self {
        PlacementPolicy { margin: rat(1, 2) }
    }
}

impl PlacementPolicy {
    pub fn new(margin: Rational) -> Self {
        assert!(
            margin > rat(0, 1) && margin < rat(1, 1),
            "placement margin must be strictly between 0 and 1"
        );
        PlacementPolicy { margin }
    }

    /// Square centred in the widest x-gap of `root` once pillar spans are
    /// removed, with side margin * min(gap width, root height). The square
    /// ends up strictly inside the gap, so it is disjoint from every pillar
    /// and from the root's boundary.
    pub fn choose_square(&self, root: &Rect, pillars: &[Rect]) -> Result<Rect, ConfigError> {
        let mut spans: Vec<(Rational, Rational)> = Vec::new();
        for p in pillars {
            if p.x_hi < root.x_lo || p.x_lo > root.x_hi {
                continue;
            }
            let lo = if p.x_lo > root.x_lo { p.x_lo.clone() } else { root.x_lo.clone() };
            let hi = if p.x_hi < root.x_hi { p.x_hi.clone() } else { root.x_hi.clone() };
            spans.push((lo, hi));
        }
        spans.sort();

        // Walk the free gaps left of, between, and right of the spans.
        let mut best: Option<(Rational, Rational)> = None;
        let mut consider = |lo: &Rational, hi: &Rational| {
            if hi <= lo {
                return;
            }
            let wider = match &best {
                None => true,
                // Strict improvement only: ties keep the leftmost gap.
                Some((blo, bhi)) => hi - lo > bhi - blo,
            };
            if wider {
                best = Some((lo.clone(), hi.clone()));
            }
        };
        let mut cursor = root.x_lo.clone();
        for (lo, hi) in &spans {
            consider(&cursor, lo);
            if *hi > cursor {
                cursor = hi.clone();
            }
        }
        consider(&cursor, &root.x_hi);

        let (gap_lo, gap_hi) = best.ok_or(ConfigError::RootTooSmall)?;
        let gap_w = &gap_hi - &gap_lo;
        let h = root.height();
        let side = if gap_w < h { &gap_w * &self.margin } else { &h * &self.margin };
        let half = side / rat(2, 1);
        let cx = (&gap_lo + &gap_hi) / rat(2, 1);
        let cy = (&root.y_lo + &root.y_hi) / rat(2, 1);
        Ok(Rect {
            x_lo: &cx - &half,
            x_hi: &cx + &half,
            y_lo: &cy - &half,
            y_hi: &cy + &half,
        })
    }
}

impl Configuration {
    /// Indices of segments whose closed set meets `rect`.
    pub fn segments_meeting(&self, rect: &Rect) -> Vec<usize> {
        let rb = BBox::of_rect(rect);
        self.segments
            .iter()
            .enumerate()
            .filter(|(_, s)| !BBox::of_segment(s).disjoint(&rb) && rect.meets_segment(s))
            .map(|(i, _)| i)
            .collect()
    }

    /// Every broken wellformedness clause, or empty when the configuration
    /// is valid. Purely observational; never mutates or fixes anything.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let frame = unit_square();
        let one = Rational::one();

        for (i, s) in self.segments.iter().enumerate() {
            if !(frame.contains_point(&s.a) && frame.contains_point(&s.b)) {
                out.push(Violation::SegmentOutsideFrame { segment: i });
            }
        }

        for (i, p) in self.probes.iter().enumerate() {
            if p.rect.x_hi != one {
                out.push(Violation::ProbeNotExtended { probe: i });
            }
        }
        let probe_boxes: Vec<BBox> = self.probes.iter().map(|p| BBox::of_rect(&p.rect)).collect();
        for i in 0..self.probes.len() {
            for j in (i + 1)..self.probes.len() {
                if probe_boxes[i].disjoint(&probe_boxes[j]) {
                    continue;
                }
                if self.probes[i].rect.meets_rect(&self.probes[j].rect) {
                    out.push(Violation::ProbeDisjointness {
                        probe_a: i,
                        probe_b: j,
                    });
                }
            }
        }

        let seg_boxes: Vec<BBox> = self.segments.iter().map(BBox::of_segment).collect();
        for (pi, p) in self.probes.iter().enumerate() {
            let rb = probe_boxes[pi];
            let meeting: Vec<usize> = (0..self.segments.len())
                .filter(|&si| {
                    !seg_boxes[si].disjoint(&rb) && p.rect.meets_segment(&self.segments[si])
                })
                .collect();

            for &si in &meeting {
                if !p.rect.crossed_vertically_by(&self.segments[si]) {
                    out.push(Violation::VerticalCrossing {
                        probe: pi,
                        segment: si,
                    });
                }
            }
            for a in 0..meeting.len() {
                for b in (a + 1)..meeting.len() {
                    let (sa, sb) = (meeting[a], meeting[b]);
                    if seg_boxes[sa].disjoint(&seg_boxes[sb]) {
                        continue;
                    }
                    if crate::geom::segments_intersect(&self.segments[sa], &self.segments[sb]) {
                        out.push(Violation::CrossersNotDisjoint {
                            probe: pi,
                            segment_a: sa,
                            segment_b: sb,
                        });
                    }
                }
            }

            // Root clauses.
            if !p.rect.contains_rect(&p.root) {
                out.push(Violation::RootViolation {
                    probe: pi,
                    fault: RootFault::NotInsideProbe,
                });
            }
            if p.root.x_lo != p.rect.x_lo
                || p.root.y_lo != p.rect.y_lo
                || p.root.y_hi != p.rect.y_hi
            {
                out.push(Violation::RootViolation {
                    probe: pi,
                    fault: RootFault::NotLeftAnchored,
                });
            }
            let root_box = BBox::of_rect(&p.root);
            for (si, s) in self.segments.iter().enumerate() {
                if seg_boxes[si].disjoint(&root_box) {
                    continue;
                }
                if p.root.meets_segment(s) {
                    out.push(Violation::RootViolation {
                        probe: pi,
                        fault: RootFault::MeetsSegment(si),
                    });
                }
            }
            for (qi, q) in p.pillars.iter().enumerate() {
                if p.root.meets_rect(q) {
                    out.push(Violation::RootViolation {
                        probe: pi,
                        fault: RootFault::MeetsPillar(qi),
                    });
                }
            }

            // Pillar clauses.
            for (qi, q) in p.pillars.iter().enumerate() {
                if !p.rect.contains_rect(q) {
                    out.push(Violation::PillarViolation {
                        probe: pi,
                        pillar: qi,
                        fault: PillarFault::NotInsideProbe,
                    });
                }
                if q.y_lo != p.rect.y_lo || q.y_hi != p.rect.y_hi {
                    out.push(Violation::PillarViolation {
                        probe: pi,
                        pillar: qi,
                        fault: PillarFault::WrongHeight,
                    });
                }
                if q.x_lo <= p.rect.x_lo {
                    out.push(Violation::PillarViolation {
                        probe: pi,
                        pillar: qi,
                        fault: PillarFault::TouchesLeftSide,
                    });
                }
                for qj in (qi + 1)..p.pillars.len() {
                    if q.meets_rect(&p.pillars[qj]) {
                        out.push(Violation::PillarViolation {
                            probe: pi,
                            pillar: qi,
                            fault: PillarFault::OverlapsPillar(qj),
                        });
                    }
                }
            }
        }
        out
    }
}

/// Largest left-anchored segment-free strip of `rect`, shrunk by the policy
/// margin so the result stays strictly clear of the nearest segment.
///
/// With no segment in the way the whole rectangle is returned unshrunk.
pub fn compute_root(
    segments: &[Segment],
    rect: &Rect,
    policy: &PlacementPolicy,
) -> Result<Rect, ConfigError> {
    compute_root_from(segments, rect, policy)
}

/// [`compute_root`] over any borrowing iterator, so callers can chain slices
/// without concatenating them.
pub fn compute_root_from<'a, I>(
    segments: I,
    rect: &Rect,
    policy: &PlacementPolicy,
) -> Result<Rect, ConfigError>
where
    I: IntoIterator<Item = &'a Segment>,
{
    root_against(
        segments.into_iter().map(|s| (s, BBox::of_segment(s))),
        rect,
        policy,
    )
}

/// [`compute_root`] with caller-supplied bounding boxes, so bulk callers pay
/// for each box once instead of once per scan.
pub(crate) fn root_against<'a, I>(
    segments: I,
    rect: &Rect,
    policy: &PlacementPolicy,
) -> Result<Rect, ConfigError>
where
    I: IntoIterator<Item = (&'a Segment, BBox)>,
{
    let rb = BBox::of_rect(rect);
    let mut xi_min: Option<Rational> = None;
    for (s, sb) in segments {
        if sb.disjoint(&rb) || !rect.meets_segment(s) {
            continue;
        }
        // A segment meeting the rectangle has points in its horizontal band.
        let m = min_x_in_band(s, &rect.y_lo, &rect.y_hi)
            .expect("segment meets the rectangle, so it has points in the band");
        xi_min = match xi_min {
            None => Some(m),
            Some(c) => Some(if m < c { m } else { c }),
        };
    }
    match xi_min {
        None => Ok(rect.clone()),
        Some(xi) => {
            if xi <= rect.x_lo {
                return Err(ConfigError::EmptyRoot(crate::geom::format_rational(&xi)));
            }
            let x_hi = &rect.x_lo + (&xi - &rect.x_lo) * &policy.margin;
            Ok(Rect {
                x_lo: rect.x_lo.clone(),
                x_hi,
                y_lo: rect.y_lo.clone(),
                y_hi: rect.y_hi.clone(),
            })
        }
    }
}

/// Image of the whole configuration under the homothety mapping the unit
/// square onto `square`. Probe rectangles are re-extended to the right frame
/// edge afterwards; roots and pillars are mapped as-is.
pub fn scaled_copy(config: &Configuration, square: &Rect) -> Result<Configuration, ConfigError> {
    if square.width() != square.height() {
        return Err(ConfigError::NotASquare(format!("{square:?}")));
    }
    if !unit_square().contains_rect(square) {
        return Err(ConfigError::OutsideFrame(format!("{square:?}")));
    }
    let origin = Point {
        x: square.x_lo.clone(),
        y: square.y_lo.clone(),
    };
    let s = square.width();
    let segments = config.segments.iter().map(|g| g.scaled(&origin, &s)).collect();
    let probes = config
        .probes
        .iter()
        .map(|p| {
            let img = p.rect.scaled(&origin, &s);
            Probe {
                rect: Rect {
                    x_lo: img.x_lo,
                    x_hi: Rational::one(),
                    y_lo: img.y_lo,
                    y_hi: img.y_hi,
                },
                root: p.root.scaled(&origin, &s),
                pillars: p.pillars.iter().map(|q| q.scaled(&origin, &s)).collect(),
            }
        })
        .collect();
    Ok(Configuration { segments, probes })
}

/// k-fold self-copying. Round one only annotates: each probe gets a single
/// pillar covering everything right of its root, and the root shrinks so the
/// two stay strictly apart. Every later round plants a scaled copy of the
/// original family inside each current probe's root; the fresh probes keep
/// the host's pillars (clipped to the new band) plus one new pillar from the
/// copy itself, and the host probes retire.
pub fn copy_power(
    config: &Configuration,
    k: u32,
    policy: &PlacementPolicy,
) -> Result<Configuration, ConfigError> {
    assert!(k >= 1, "copy exponent must be at least 1");
    let mut current = annotate_single_pillar(config, policy);
    for _ in 2..=k {
        current = insert_copies(&current, config, policy)?;
    }
    Ok(current)
}

fn annotate_single_pillar(config: &Configuration, policy: &PlacementPolicy) -> Configuration {
    let probes = config
        .probes
        .iter()
        .map(|p| {
            let pillar_lo = if p.root.x_hi < p.rect.x_hi {
                p.root.x_hi.clone()
            } else {
                // Root fills the probe (segment-free), so split down the middle.
                (&p.rect.x_lo + &p.rect.x_hi) / rat(2, 1)
            };
            let band = |x_lo: Rational, x_hi: Rational| Rect {
                x_lo,
                x_hi,
                y_lo: p.rect.y_lo.clone(),
                y_hi: p.rect.y_hi.clone(),
            };
            let pillar = band(pillar_lo.clone(), p.rect.x_hi.clone());
            // Re-anchor the root strictly left of the pillar.
            let root_hi = &p.rect.x_lo + (&pillar_lo - &p.rect.x_lo) * &policy.margin;
            Probe {
                rect: p.rect.clone(),
                root: band(p.rect.x_lo.clone(), root_hi),
                pillars: vec![pillar],
            }
        })
        .collect();
    Configuration {
        segments: config.segments.clone(),
        probes,
    }
}

fn insert_copies(
    host: &Configuration,
    template: &Configuration,
    policy: &PlacementPolicy,
) -> Result<Configuration, ConfigError> {
    let mut segments = host.segments.clone();
    let mut probes = Vec::new();
    for hp in &host.probes {
        let square = policy.choose_square(&hp.root, &hp.pillars)?;
        let copy = scaled_copy(template, &square)?;
        segments.extend(copy.segments.iter().cloned());
        for q in &copy.probes {
            let clip = |x_lo: &Rational, x_hi: &Rational| Rect {
                x_lo: x_lo.clone(),
                x_hi: x_hi.clone(),
                y_lo: q.rect.y_lo.clone(),
                y_hi: q.rect.y_hi.clone(),
            };
            // Host pillars keep their x-spans, restricted to the new band.
            let mut pillars: Vec<Rect> = hp
                .pillars
                .iter()
                .map(|pl| clip(&pl.x_lo, &pl.x_hi))
                .collect();
            // The copy's own pillar runs from its root's right edge to the
            // copy's right edge. A root filling the copy means the copied
            // probe was segment-free; split its span down the middle then.
            let copy_right = square.x_hi.clone();
            let new_lo = if q.root.x_hi < copy_right {
                q.root.x_hi.clone()
            } else {
                (&q.rect.x_lo + &copy_right) / rat(2, 1)
            };
            pillars.push(clip(&new_lo, &copy_right));
            let root_hi = &q.rect.x_lo + (&new_lo - &q.rect.x_lo) * &policy.margin;
            probes.push(Probe {
                rect: q.rect.clone(),
                root: clip(&q.rect.x_lo, &root_hi),
                pillars,
            });
        }
    }
    Ok(Configuration { segments, probes })
}

/// Pairs (probe, segment) where the segment meets the probe but does not
/// cross exactly one of its pillars vertically. Empty on every copy_power
/// output; the colouring argument leans on that.
pub fn pillar_partition_faults(config: &Configuration) -> Vec<(usize, usize)> {
    let mut faults = Vec::new();
    let seg_boxes: Vec<BBox> = config.segments.iter().map(BBox::of_segment).collect();
    for (pi, p) in config.probes.iter().enumerate() {
        let rb = BBox::of_rect(&p.rect);
        let pillar_boxes: Vec<BBox> = p.pillars.iter().map(BBox::of_rect).collect();
        for (si, s) in config.segments.iter().enumerate() {
            if seg_boxes[si].disjoint(&rb) || !p.rect.meets_segment(s) {
                continue;
            }
            let mut met = 0usize;
            let mut crossed = 0usize;
            for (qi, q) in p.pillars.iter().enumerate() {
                if seg_boxes[si].disjoint(&pillar_boxes[qi]) || !q.meets_segment(s) {
                    continue;
                }
                met += 1;
                if q.crossed_vertically_by(s) {
                    crossed += 1;
                }
            }
            if met != 1 || crossed != 1 {
                faults.push((pi, si));
            }
        }
    }
    faults
}
