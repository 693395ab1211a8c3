//! Interval-class colourings that keep thinly stacked vertices away from a
//! reserved colour.
//!
//! On `{0, .., omega - 1}` every interval class with stacks at most `omega`
//! deep admits a proper colouring in which colour 0 only goes to vertices
//! covered at least `(omega + 1) / 2` deep along their entire interval.
//! [`omega_uncovered`] certifies which vertices are exempt, and
//! [`interval_color_uncovered`] produces such a colouring.

use super::Coloring;
use crate::geom::{cmp_rat, rat, rat_eq, rat_le, Rational};
use crate::graph::IntervalRep;
use thiserror::Error;

/// Evidence that one interval dips below half depth somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncoveredWitness {
    /// A point of the vertex's own interval.
    pub x: Rational,
    /// Number of intervals containing `x`, the vertex's own included.
    pub depth: usize,
}

/// Per-vertex witnesses for `2 * depth <= omega - 1`, in the order of the
/// underlying [`IntervalRep`]. `None` means the vertex is covered: every
/// point of its interval lies in more than `(omega - 1) / 2` intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncoveredReport {
    pub witnesses: Vec<Option<UncoveredWitness>>,
}

impl UncoveredReport {
    pub fn is_uncovered(&self, i: usize) -> bool {
        self.witnesses[i].is_some()
    }
}

/// Finds, for each interval, the leftmost candidate point of low depth.
///
/// Depth only changes at interval endpoints, so endpoints together with
/// midpoints of consecutive distinct endpoints meet every level the depth
/// function ever takes; searching those points is exhaustive.
pub fn omega_uncovered(rep: &IntervalRep, omega: usize) -> UncoveredReport {
    let mut points: Vec<Rational> = Vec::with_capacity(rep.intervals.len() * 2);
    for (lo, hi) in &rep.intervals {
        points.push(lo.clone());
        points.push(hi.clone());
    }
    points.sort_by(cmp_rat);
    points.dedup_by(|a, b| rat_eq(a, b));
    let mut candidates = Vec::with_capacity(points.len() * 2);
    for k in 0..points.len() {
        if k > 0 {
            candidates.push((&points[k - 1] + &points[k]) * rat(1, 2));
        }
        candidates.push(points[k].clone());
    }
    let depth: Vec<usize> = candidates
        .iter()
        .map(|x| {
            rep.intervals
                .iter()
                .filter(|(lo, hi)| rat_le(lo, x) && rat_le(x, hi))
                .count()
        })
        .collect();
    let witnesses = rep
        .intervals
        .iter()
        .map(|(lo, hi)| {
            candidates
                .iter()
                .zip(&depth)
                .find(|(x, &d)| rat_le(lo, x) && rat_le(x, hi) && 2 * d + 1 <= omega)
                .map(|(x, &d)| UncoveredWitness {
                    x: x.clone(),
                    depth: d,
                })
        })
        .collect();
    UncoveredReport { witnesses }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalColoringError {
    #[error("no proper colouring on {omega} colours keeps uncovered vertices off colour 0")]
    SearchFailed { omega: usize },
}

/// Proper colouring of one projected class on colours `{0, .., omega - 1}`
/// in which no vertex with an uncovered point receives colour 0.
///
/// A left-to-right sweep hands uncovered vertices the smallest free nonzero
/// colour and covered vertices colour 0 when free; if the sweep ever runs
/// out, an exhaustive backtracking pass over the same palette takes over.
/// With class stacks at most `omega` deep the result always exists.
pub fn interval_color_uncovered(
    rep: &IntervalRep,
    omega: usize,
) -> Result<Coloring, IntervalColoringError> {
    let n = rep.intervals.len();
    if n == 0 {
        return Ok(Coloring::single(0, Vec::new()));
    }
    assert!(omega >= 1, "a nonempty class needs at least one colour");
    let report = omega_uncovered(rep, omega);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        cmp_rat(&rep.intervals[i].0, &rep.intervals[j].0)
            .then_with(|| cmp_rat(&rep.intervals[i].1, &rep.intervals[j].1))
            .then(i.cmp(&j))
    });

    let mut colors = vec![0u32; n];
    let mut active: Vec<usize> = Vec::new();
    let mut swept = true;
    'sweep: for &i in &order {
        let lo = &rep.intervals[i].0;
        active.retain(|&j| rat_le(lo, &rep.intervals[j].1));
        let mut free = vec![true; omega];
        for &j in &active {
            free[colors[j] as usize] = false;
        }
        let chosen = if report.is_uncovered(i) {
            (1..omega).find(|&c| free[c])
        } else if free[0] {
            Some(0)
        } else {
            (1..omega).find(|&c| free[c])
        };
        match chosen {
            Some(c) => {
                colors[i] = c as u32;
                active.push(i);
            }
            None => {
                swept = false;
                break 'sweep;
            }
        }
    }
    if !swept {
        let nonzero: Vec<bool> = (0..n).map(|i| report.is_uncovered(i)).collect();
        colors = recolor_exact(rep, &order, &nonzero, omega)
            .ok_or(IntervalColoringError::SearchFailed { omega })?;
    }
    Ok(Coloring::single((omega - 1) as u32, colors))
}

/// Exhaustive search over `{0, .., omega - 1}`; vertices flagged `nonzero`
/// may not take colour 0. Returns the first solution in ascending colour
/// order along `order`, or `None` if none exists.
fn recolor_exact(
    rep: &IntervalRep,
    order: &[usize],
    nonzero: &[bool],
    omega: usize,
) -> Option<Vec<u32>> {
    let n = rep.intervals.len();
    let overlaps: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    j != i
                        && rat_le(&rep.intervals[i].0, &rep.intervals[j].1)
                        && rat_le(&rep.intervals[j].0, &rep.intervals[i].1)
                })
                .collect()
        })
        .collect();
    let mut colors = vec![u32::MAX; n];
    fn go(
        k: usize,
        order: &[usize],
        overlaps: &[Vec<usize>],
        nonzero: &[bool],
        omega: usize,
        colors: &mut Vec<u32>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        let start = usize::from(nonzero[v]);
        for c in start..omega {
            let c = c as u32;
            if overlaps[v].iter().any(|&u| colors[u] == c) {
                continue;
            }
            colors[v] = c;
            if go(k + 1, order, overlaps, nonzero, omega, colors) {
                return true;
            }
            colors[v] = u32::MAX;
        }
        false
    }
    if go(0, order, &overlaps, nonzero, omega, &mut colors) {
        Some(colors)
    } else {
        None
    }
}
