//! Set colourings of segment intersection graphs.
//!
//! A [`Coloring`] hands every vertex the same number of colours; along an
//! edge the two sets must be disjoint. [`verify_coloring`] audits a claimed
//! colouring against nothing but the graph, so certificates from the exact
//! searches in [`solver`] and the sweep colourings in [`interval`] are all
//! checked by one routine none of them share code with.

mod interval;
mod solver;

pub use interval::{
    interval_color_uncovered, omega_uncovered, IntervalColoringError, UncoveredReport,
    UncoveredWitness,
};
pub use solver::{
    adversary_palette_cap, chromatic_number, pillar_adversary, probe_adversary, tfold_chromatic,
    AdversaryOutcome, AdversarySat, ChromaticOutcome, Decision, SearchBudget,
};

use crate::geom::{cmp_rat, rat_le, Segment};
use crate::graph::{clique_number, interval_projection, slope_partition, Graph, IntervalRep};
use thiserror::Error;

/// A `t`-fold colouring: every vertex owns exactly `t` distinct colours,
/// adjacent vertices own disjoint sets.
///
/// Colours are integers no larger than `palette`. Search certificates draw
/// from `{1, .., palette}`; the layered interval colourings also use colour
/// `0` in a reserved role, so `palette` is an inclusive ceiling rather than
/// a count of colours in play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub t: u32,
    pub palette: u32,
    /// Colour set per vertex, each sorted ascending.
    pub assignment: Vec<Vec<u32>>,
}

impl Coloring {
    /// 1-fold colouring from one colour per vertex.
    pub fn single(palette: u32, colors: Vec<u32>) -> Self {
        Coloring {
            t: 1,
            palette,
            assignment: colors.into_iter().map(|c| vec![c]).collect(),
        }
    }

    /// Number of distinct colours that actually appear.
    pub fn colors_used(&self) -> usize {
        let mut all: Vec<u32> = self.assignment.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringViolation {
    #[error("colouring covers {got} vertices, the graph has {want}")]
    WrongVertexCount { got: usize, want: usize },
    #[error("vertex {vertex} holds {got} colours instead of {t}")]
    WrongCardinality { vertex: usize, got: usize, t: u32 },
    #[error("vertex {vertex} repeats colour {color}")]
    RepeatedColor { vertex: usize, color: u32 },
    #[error("vertex {vertex} uses colour {color}, above the palette ceiling {palette}")]
    ColorAbovePalette {
        vertex: usize,
        color: u32,
        palette: u32,
    },
    #[error("edge ({u}, {v}) shares colour {color}")]
    SharedEdgeColor { u: usize, v: usize, color: u32 },
}

/// Checks a colouring from scratch and reports the first violation.
///
/// Deliberately independent of every producer: it looks only at the graph
/// and the claimed assignment.
pub fn verify_coloring(g: &Graph, c: &Coloring) -> Result<(), ColoringViolation> {
    if c.assignment.len() != g.n() {
        return Err(ColoringViolation::WrongVertexCount {
            got: c.assignment.len(),
            want: g.n(),
        });
    }
    for (vertex, set) in c.assignment.iter().enumerate() {
        if set.len() != c.t as usize {
            return Err(ColoringViolation::WrongCardinality {
                vertex,
                got: set.len(),
                t: c.t,
            });
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(ColoringViolation::RepeatedColor {
                    vertex,
                    color: pair[0],
                });
            }
        }
        for &color in set {
            if color > c.palette {
                return Err(ColoringViolation::ColorAbovePalette {
                    vertex,
                    color,
                    palette: c.palette,
                });
            }
        }
    }
    for (u, v) in g.edges() {
        for &color in &c.assignment[u] {
            if c.assignment[v].contains(&color) {
                return Err(ColoringViolation::SharedEdgeColor { u, v, color });
            }
        }
    }
    Ok(())
}

/// Proper 1-fold colouring that gives every slope class its own block of
/// colours.
///
/// Within a class the segments behave like closed intervals, and the
/// left-endpoint greedy uses exactly as many colours as the deepest point
/// stack of the class. Blocks are disjoint across classes, so the total is
/// the sum of the class clique sizes: with d slopes that is at most d times
/// the clique number.
pub fn color_slope_disjoint(segments: &[Segment]) -> Coloring {
    let mut colors = vec![0u32; segments.len()];
    let mut base = 0u32;
    for (_, members) in slope_partition(segments) {
        let rep = interval_projection(segments, &members);
        base += greedy_interval(&rep, &mut colors, base);
    }
    Coloring::single(base, colors)
}

/// Left-endpoint greedy on one projected class, writing colours
/// `base + 1 ..` into `colors`. Returns the width of the block used, which
/// equals the largest number of pairwise overlapping intervals: when a
/// colour c is first issued, the interval at hand overlaps c - 1 earlier
/// ones at its own left endpoint.
fn greedy_interval(rep: &IntervalRep, colors: &mut [u32], base: u32) -> u32 {
    let mut order: Vec<usize> = (0..rep.vertices.len()).collect();
    order.sort_by(|&i, &j| {
        cmp_rat(&rep.intervals[i].0, &rep.intervals[j].0)
            .then_with(|| cmp_rat(&rep.intervals[i].1, &rep.intervals[j].1))
            .then(rep.vertices[i].cmp(&rep.vertices[j]))
    });
    let mut active: Vec<(usize, u32)> = Vec::new();
    let mut width = 0u32;
    for &i in &order {
        let lo = &rep.intervals[i].0;
        active.retain(|&(j, _)| rat_le(lo, &rep.intervals[j].1));
        let mut c = 1u32;
        while active.iter().any(|&(_, used)| used == c) {
            c += 1;
        }
        width = width.max(c);
        active.push((i, c));
        colors[rep.vertices[i]] = base + c;
    }
    width
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OddColoringError {
    #[error("clique number {0} is even; the layered bound applies to odd clique numbers")]
    EvenOmega(usize),
    #[error("{found} slope classes exceed the declared direction count {bound}")]
    TooManySlopes { found: usize, bound: usize },
}

/// Proper 1-fold colouring using at most d(w - 1) + 1 colours for a family
/// with odd clique number w on at most d slopes.
///
/// Each class is coloured on {0, .., w - 1} so that only vertices stacked
/// at least (w + 1) / 2 deep along their whole interval receive colour 0;
/// nonzero colours are then shifted into a block per class while colour 0
/// stays shared. Sharing is safe: two adjacent colour-0 vertices from
/// different lines would each bring (w + 1) / 2 mutual intersectors through
/// their common point, a clique of size w + 1.
pub fn color_odd(g: &Graph, segments: &[Segment], d: usize) -> Result<Coloring, OddColoringError> {
    assert_eq!(g.n(), segments.len(), "graph and family must agree");
    if segments.is_empty() {
        return Ok(Coloring::single(0, Vec::new()));
    }
    let omega = clique_number(g);
    if omega % 2 == 0 {
        return Err(OddColoringError::EvenOmega(omega));
    }
    let classes = slope_partition(segments);
    if classes.len() > d {
        return Err(OddColoringError::TooManySlopes {
            found: classes.len(),
            bound: d,
        });
    }
    let block = (omega - 1) as u32;
    let mut colors = vec![0u32; segments.len()];
    for (ci, (_, members)) in classes.iter().enumerate() {
        let rep = interval_projection(segments, members);
        let class = interval_color_uncovered(&rep, omega)
            .expect("the clique number bounds every class stack");
        for (k, &v) in rep.vertices.iter().enumerate() {
            let c = class.assignment[k][0];
            colors[v] = if c == 0 { 0 } else { ci as u32 * block + c };
        }
    }
    Ok(Coloring::single(classes.len() as u32 * block, colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rat_int, Point, Segment};
    use crate::graph::intersection_graph;

    fn pt(x: i64, y: i64) -> Point {
        Point {
            x: rat_int(x),
            y: rat_int(y),
        }
    }

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::new(pt(ax, ay), pt(bx, by)).unwrap()
    }

    fn path3() -> Graph {
        let mut g = Graph::new(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g
    }

    #[test]
    fn verifier_accepts_a_proper_colouring() {
        let c = Coloring::single(2, vec![1, 2, 1]);
        assert_eq!(verify_coloring(&path3(), &c), Ok(()));
    }

    #[test]
    fn verifier_names_the_offending_edge() {
        let c = Coloring::single(2, vec![1, 2, 2]);
        assert_eq!(
            verify_coloring(&path3(), &c),
            Err(ColoringViolation::SharedEdgeColor { u: 1, v: 2, color: 2 })
        );
    }

    #[test]
    fn verifier_rejects_wrong_cardinality_and_repeats() {
        let g = path3();
        let short = Coloring {
            t: 2,
            palette: 4,
            assignment: vec![vec![1, 2], vec![3], vec![1, 2]],
        };
        assert_eq!(
            verify_coloring(&g, &short),
            Err(ColoringViolation::WrongCardinality {
                vertex: 1,
                got: 1,
                t: 2
            })
        );
        let repeated = Coloring {
            t: 2,
            palette: 4,
            assignment: vec![vec![1, 1], vec![3, 4], vec![1, 2]],
        };
        assert_eq!(
            verify_coloring(&g, &repeated),
            Err(ColoringViolation::RepeatedColor { vertex: 0, color: 1 })
        );
    }

    #[test]
    fn verifier_rejects_palette_overflow_and_size_mismatch() {
        let g = path3();
        let high = Coloring::single(1, vec![1, 2, 1]);
        assert_eq!(
            verify_coloring(&g, &high),
            Err(ColoringViolation::ColorAbovePalette {
                vertex: 1,
                color: 2,
                palette: 1
            })
        );
        let short = Coloring::single(2, vec![1, 2]);
        assert_eq!(
            verify_coloring(&g, &short),
            Err(ColoringViolation::WrongVertexCount { got: 2, want: 3 })
        );
    }

    // Three collinear overlapping horizontals stack three deep, and a far
    // vertical is its own class: the class blocks use 3 + 1 colours.
    #[test]
    fn slope_disjoint_spends_one_block_per_class() {
        let family = vec![
            seg(0, 0, 10, 0),
            seg(1, 0, 11, 0),
            seg(2, 0, 12, 0),
            seg(20, 0, 20, 10),
        ];
        let g = intersection_graph(&family);
        let c = color_slope_disjoint(&family);
        assert_eq!(verify_coloring(&g, &c), Ok(()));
        assert_eq!(c.colors_used(), 4);
        assert_eq!(c.palette, 4);
    }

    // Per class, the greedy must match the exact clique size of the class
    // subgraph.
    #[test]
    fn slope_disjoint_width_equals_class_clique() {
        let family = vec![
            seg(0, 0, 10, 0),
            seg(1, 0, 11, 0),
            seg(2, 0, 12, 0),
            seg(30, 0, 40, 0),
            seg(5, -5, 5, 5),
            seg(6, -5, 6, 5),
        ];
        let g = intersection_graph(&family);
        let c = color_slope_disjoint(&family);
        assert_eq!(verify_coloring(&g, &c), Ok(()));
        let mut total = 0usize;
        for (_, members) in slope_partition(&family) {
            let sub = g.induced(&members);
            let w = clique_number(&sub);
            let mut class_colors: Vec<u32> =
                members.iter().map(|&v| c.assignment[v][0]).collect();
            class_colors.sort_unstable();
            class_colors.dedup();
            assert_eq!(class_colors.len(), w);
            total += w;
        }
        assert_eq!(c.colors_used(), total);
    }

    #[test]
    fn color_odd_layers_a_nested_triple() {
        let family = vec![seg(0, 0, 10, 0), seg(1, 0, 11, 0), seg(2, 0, 12, 0)];
        let g = intersection_graph(&family);
        let c = color_odd(&g, &family, 1).unwrap();
        assert_eq!(verify_coloring(&g, &c), Ok(()));
        let got: Vec<u32> = c.assignment.iter().map(|s| s[0]).collect();
        assert_eq!(got, vec![1, 0, 2]);
        assert_eq!(c.colors_used(), 3);
    }

    #[test]
    fn color_odd_crossing_classes() {
        // Horizontal pair plus one vertical through both: a triangle, so the
        // clique number is 3 and the bound is 2 * 2 + 1 = 5.
        let family = vec![seg(0, 0, 10, 0), seg(1, 0, 11, 0), seg(5, -5, 5, 5)];
        let g = intersection_graph(&family);
        assert_eq!(clique_number(&g), 3);
        let c = color_odd(&g, &family, 2).unwrap();
        assert_eq!(verify_coloring(&g, &c), Ok(()));
        let got: Vec<u32> = c.assignment.iter().map(|s| s[0]).collect();
        assert_eq!(got, vec![1, 2, 3]);
        assert!(c.colors_used() <= 5);
    }

    #[test]
    fn color_odd_rejects_even_clique_number() {
        let family = vec![seg(0, 0, 10, 10), seg(0, 10, 10, 0)];
        let g = intersection_graph(&family);
        assert_eq!(
            color_odd(&g, &family, 2),
            Err(OddColoringError::EvenOmega(2))
        );
    }

    #[test]
    fn color_odd_rejects_undeclared_slopes() {
        let family = vec![seg(0, 0, 10, 0), seg(20, 0, 20, 10)];
        let g = intersection_graph(&family);
        assert_eq!(
            color_odd(&g, &family, 1),
            Err(OddColoringError::TooManySlopes { found: 2, bound: 1 })
        );
    }

    // Colour 0 is shared between classes; the zero set must stay independent
    // even when both classes hand it out.
    #[test]
    fn color_odd_zero_class_is_independent() {
        let family = vec![
            seg(0, 0, 10, 0),
            seg(1, 0, 11, 0),
            seg(2, 0, 12, 0),
            seg(20, 0, 20, 10),
            seg(20, 1, 20, 11),
            seg(20, 2, 20, 12),
        ];
        let g = intersection_graph(&family);
        let c = color_odd(&g, &family, 2).unwrap();
        assert_eq!(verify_coloring(&g, &c), Ok(()));
        let zeros: Vec<usize> = (0..family.len())
            .filter(|&v| c.assignment[v][0] == 0)
            .collect();
        assert_eq!(zeros, vec![1, 4]);
        for (i, &u) in zeros.iter().enumerate() {
            for &v in &zeros[i + 1..] {
                assert!(!g.has_edge(u, v));
            }
        }
        assert!(c.colors_used() <= 2 * 2 + 1);
    }

    #[test]
    fn color_odd_of_nothing() {
        let c = color_odd(&Graph::new(0), &[], 2).unwrap();
        assert_eq!(c.assignment.len(), 0);
    }
}
