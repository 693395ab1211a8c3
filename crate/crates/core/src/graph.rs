//! Intersection graphs of segment families and the structural queries the
//! colouring routines need: triangles, exact clique number, slope classes,
//! bipartitions, and interval representations of single-slope classes.
//!
//! Vertices are indices into the source segment list, so certificates can
//! name segments unambiguously. Adjacency is stored as bitset rows; all the
//! query algorithms below are exact.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geom::{rat, segments_intersect, Rational, Segment, Slope};
use crate::prefilter::BBox;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "no loops");
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.row(u).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Subgraph on `verts`, renumbered by position in the slice.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut g = Graph::new(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("the graph contains an odd cycle through vertices {0:?}")]
    OddCycle(Vec<usize>),
}

/// Exact adjacency: u ~ v iff the closed segments share a point.
pub fn intersection_graph(segments: &[Segment]) -> Graph {
    let boxes: Vec<BBox> = segments.iter().map(BBox::of_segment).collect();
    let mut g = Graph::new(segments.len());
    for i in 0..segments.len() {
        for j in (i + 1)..segments.len() {
            if boxes[i].disjoint(&boxes[j]) {
                continue;
            }
            if segments_intersect(&segments[i], &segments[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// True iff no edge has a common neighbour. Deliberately not implemented via
/// the clique search, so the two can cross-check each other in tests.
pub fn is_triangle_free(g: &Graph) -> bool {
    for u in 0..g.n() {
        for v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            // Rows are irreflexive, so u and v drop out of the AND.
            let ru = g.row(u);
            let rv = g.row(v);
            if ru.iter().zip(rv).any(|(a, b)| a & b != 0) {
                return false;
            }
        }
    }
    true
}

/// Exact maximum clique size.
pub fn clique_number(g: &Graph) -> usize {
    max_clique(g).len()
}

/// One maximum clique, as an ascending vertex list.
///
/// Vertices with identical closed neighbourhoods (as produced by blowups)
/// are collapsed into weighted groups first; a branch-and-bound with a
/// greedy colouring bound then runs on the much smaller quotient. A chosen
/// group is a clique in itself, so it rejoins the answer whole.
pub fn max_clique(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    // Closed neighbourhood bitsets.
    let closed: Vec<Vec<u64>> = (0..n)
        .map(|u| {
            let mut row = g.row(u).to_vec();
            row[u / 64] |= 1 << (u % 64);
            row
        })
        .collect();
    // True-twin groups in first-occurrence order.
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    'vertex: for v in 0..n {
        for (gi, &r) in reps.iter().enumerate() {
            if closed[r] == closed[v] {
                members[gi].push(v);
                continue 'vertex;
            }
        }
        reps.push(v);
        members.push(vec![v]);
    }
    let weight: Vec<usize> = members.iter().map(Vec::len).collect();
    let m = reps.len();
    let mut q = Graph::new(m);
    for a in 0..m {
        for b in (a + 1)..m {
            if g.has_edge(reps[a], reps[b]) {
                q.add_edge(a, b);
            }
        }
    }

    let qwords = m.div_ceil(64);
    let full: Vec<u64> = (0..qwords)
        .map(|w| {
            let lo = w * 64;
            let hi = (lo + 64).min(m);
            if hi - lo == 64 { u64::MAX } else { (1u64 << (hi - lo)) - 1 }
        })
        .collect();
    let mut best = (0usize, Vec::new());
    let mut stack = Vec::new();
    expand_clique(&q, &weight, full, 0, &mut stack, &mut best);
    let mut out: Vec<usize> = best.1.iter().flat_map(|&gi| members[gi].iter().copied()).collect();
    out.sort_unstable();
    out
}

fn bitset_members(set: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (wi, &w) in set.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(wi * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

fn expand_clique(
    q: &Graph,
    weight: &[usize],
    cand: Vec<u64>,
    current: usize,
    stack: &mut Vec<usize>,
    best: &mut (usize, Vec<usize>),
) {
    let members = bitset_members(&cand);
    if members.is_empty() {
        if current > best.0 {
            *best = (current, stack.clone());
        }
        return;
    }
    // Greedy colouring of the candidates; a clique takes at most one vertex
    // per colour class, so cumulative class maxima bound what is reachable.
    let mut classes: Vec<(Vec<usize>, usize)> = Vec::new();
    for &v in &members {
        match classes
            .iter_mut()
            .find(|(vs, _)| vs.iter().all(|&u| !q.has_edge(u, v)))
        {
            Some((vs, mx)) => {
                vs.push(v);
                *mx = (*mx).max(weight[v]);
            }
            None => classes.push((vec![v], weight[v])),
        }
    }
    let mut order: Vec<(usize, usize)> = Vec::new(); // (vertex, bound)
    let mut cum = 0usize;
    for (vs, mx) in &classes {
        cum += mx;
        for &v in vs {
            order.push((v, cum));
        }
    }

    let mut cand = cand;
    for &(v, bound) in order.iter().rev() {
        // Bounds only decrease towards the front of the order.
        if current + bound <= best.0 {
            return;
        }
        let mut next = cand.clone();
        for (wi, w) in next.iter_mut().enumerate() {
            *w &= q.row(v)[wi];
        }
        stack.push(v);
        expand_clique(q, weight, next, current + weight[v], stack, best);
        stack.pop();
        cand[v / 64] &= !(1 << (v % 64));
    }
}

/// Vertex sets of the connected components, each sorted ascending, ordered
/// by their smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for root in 0..g.n() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut queue = vec![root];
        while let Some(u) = queue.pop() {
            for v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Splits the vertex set into the two sides of a bipartition, BFS-layered
/// from the lowest-index vertex of each component (which lands in the first
/// part). Fails with an explicit odd cycle when none exists.
pub fn bipartition(g: &Graph) -> Result<(Vec<usize>, Vec<usize>), GraphError> {
    let n = g.n();
    let mut side: Vec<i8> = vec![-1; n];
    let mut parent: Vec<usize> = vec![usize::MAX; n];
    for root in 0..n {
        if side[root] != -1 {
            continue;
        }
        side[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if side[v] == -1 {
                    side[v] = 1 - side[u];
                    parent[v] = u;
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return Err(GraphError::OddCycle(odd_cycle_witness(&parent, u, v)));
                }
            }
        }
    }
    let part1 = (0..n).filter(|&v| side[v] == 0).collect();
    let part2 = (0..n).filter(|&v| side[v] == 1).collect();
    Ok((part1, part2))
}

// u and v are same-side BFS endpoints of an edge; splice their tree paths at
// the lowest common ancestor. The result has odd length by the parity clash.
fn odd_cycle_witness(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    let chain = |mut x: usize| {
        let mut path = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let cu = chain(u);
    let cv = chain(v);
    let pos: std::collections::HashMap<usize, usize> =
        cu.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let (vi, lca) = cv
        .iter()
        .enumerate()
        .find(|(_, x)| pos.contains_key(x))
        .map(|(i, &x)| (i, x))
        .expect("BFS trees of one component share the root");
    let mut cycle: Vec<usize> = cu[..=pos[&lca]].to_vec();
    // Walk back from the ancestor towards v, skipping the ancestor itself.
    cycle.extend(cv[..vi].iter().rev());
    cycle
}

/// Vertex indices grouped by exact slope, ascending with Vertical last.
pub fn slope_partition(segments: &[Segment]) -> Vec<(Slope, Vec<usize>)> {
    let mut map: BTreeMap<Slope, Vec<usize>> = BTreeMap::new();
    for (i, s) in segments.iter().enumerate() {
        map.entry(s.slope()).or_default().push(i);
    }
    map.into_iter().collect()
}

/// Closed intervals standing in for the segments of one slope class:
/// two class members are adjacent iff their intervals intersect.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntervalRep {
    /// Original vertex index behind each interval.
    pub vertices: Vec<usize>,
    /// Closed [lo, hi] per entry, parallel to `vertices`.
    pub intervals: Vec<(Rational, Rational)>,
}

/// Projects the class members line by line. Parallel segments on distinct
/// lines never meet, so each line's intervals are shifted into a private
/// window (gap 1 between windows); collinear segments keep their relative
/// order, where overlap is exactly intersection.
pub fn interval_projection(segments: &[Segment], members: &[usize]) -> IntervalRep {
    if members.is_empty() {
        return IntervalRep {
            vertices: Vec::new(),
            intervals: Vec::new(),
        };
    }
    let slope = segments[members[0]].slope();
    // Line key: intercept at x = 0, or the shared x for vertical segments.
    let mut lines: BTreeMap<Rational, Vec<(usize, Rational, Rational)>> = BTreeMap::new();
    for &v in members {
        let s = &segments[v];
        assert!(s.slope() == slope, "class members must share one slope");
        let (key, lo, hi) = match &slope {
            Slope::Vertical => (s.a.x.clone(), s.y_min().clone(), s.y_max().clone()),
            Slope::Finite(m) => (
                &s.a.y - m * &s.a.x,
                s.x_min().clone(),
                s.x_max().clone(),
            ),
        };
        lines.entry(key).or_default().push((v, lo, hi));
    }
    let mut vertices = Vec::new();
    let mut intervals = Vec::new();
    let mut base = rat(0, 1);
    for (_, entries) in lines {
        let lo_min = entries.iter().map(|(_, lo, _)| lo).min().unwrap().clone();
        let hi_max = entries.iter().map(|(_, _, hi)| hi).max().unwrap().clone();
        let shift = &base - &lo_min;
        for (v, lo, hi) in &entries {
            vertices.push(*v);
            intervals.push((lo + &shift, hi + &shift));
        }
        base = &base + (&hi_max - &lo_min) + rat(1, 1);
    }
    IntervalRep {
        vertices,
        intervals,
    }
}
