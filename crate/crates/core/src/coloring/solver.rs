//! Exact decision searches over t-fold colourings.
//!
//! One backtracking engine answers every question here: does the graph
//! admit a t-fold colouring on a given palette, optionally subject to
//! "this vertex group stays within so many distinct colours" constraints.
//! Completed searches are exact; a search that runs out of its node budget
//! reports `Unknown` rather than guessing.

use super::Coloring;
use crate::config::Configuration;
use crate::geom::Rect;
use crate::graph::{intersection_graph, max_clique, Graph};
use std::cmp::Reverse;

/// Node allowance for one search. Every attempted colour-set placement
/// costs one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 20_000_000 }
    }
}

/// Outcome of a decision search. `Unknown` only ever means the budget ran
/// out; it is never returned from a completed search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Sat(Coloring),
    Unsat,
    Unknown,
}

/// A group of vertices whose combined colour set must stay within `cap`
/// distinct colours.
struct CapGroup {
    members: Vec<usize>,
    cap: usize,
}

/// Satisfied when at least one option's final colour count is within its
/// cap. No options means unsatisfiable.
struct Clause {
    options: Vec<CapGroup>,
}

struct OptionState {
    cap: usize,
    counts: Vec<u32>,
    mask: u128,
}

enum Step {
    Sat,
    Unsat,
    Out,
}

struct Search<'a> {
    g: &'a Graph,
    nbrs: Vec<Vec<usize>>,
    t: usize,
    a: u32,
    rank: Vec<usize>,
    /// vertex -> (clause, option) incidences.
    touch: Vec<Vec<(usize, usize)>>,
    options: Vec<Vec<OptionState>>,
    assignment: Vec<Vec<u32>>,
    assigned: Vec<bool>,
    remaining: usize,
    max_used: u32,
    nodes_left: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, t: u32, a: u32, clauses: &[Clause], budget: &SearchBudget) -> Self {
        let n = g.n();
        let mut touch = vec![Vec::new(); n];
        let mut options = Vec::with_capacity(clauses.len());
        for (ci, clause) in clauses.iter().enumerate() {
            let mut states = Vec::with_capacity(clause.options.len());
            for (oi, group) in clause.options.iter().enumerate() {
                for &v in &group.members {
                    touch[v].push((ci, oi));
                }
                states.push(OptionState {
                    cap: group.cap,
                    counts: vec![0; a as usize + 1],
                    mask: 0,
                });
            }
            options.push(states);
        }
        // Static tie-break: a maximum clique first, the rest by degree.
        // Together with the colour-introduction rule this pins the clique to
        // the first colours of the palette.
        let clique = max_clique(g);
        let mut in_clique = vec![false; n];
        for &v in &clique {
            in_clique[v] = true;
        }
        let mut rest: Vec<usize> = (0..n).filter(|&v| !in_clique[v]).collect();
        rest.sort_by_key(|&v| (Reverse(g.degree(v)), v));
        let mut rank = vec![0usize; n];
        for (pos, &v) in clique.iter().chain(rest.iter()).enumerate() {
            rank[v] = pos;
        }
        Search {
            g,
            nbrs: (0..n).map(|v| g.neighbors(v)).collect(),
            t: t as usize,
            a,
            rank,
            touch,
            options,
            assignment: vec![Vec::new(); n],
            assigned: vec![false; n],
            remaining: n,
            max_used: 0,
            nodes_left: budget.nodes,
        }
    }

    fn clause_violated(&self, ci: usize) -> bool {
        self.options[ci]
            .iter()
            .all(|o| o.mask.count_ones() as usize > o.cap)
    }

    fn apply(&mut self, v: usize, set: &[u32]) {
        for &(ci, oi) in &self.touch[v] {
            let state = &mut self.options[ci][oi];
            for &c in set {
                state.counts[c as usize] += 1;
                state.mask |= 1u128 << c;
            }
        }
    }

    fn retract(&mut self, v: usize, set: &[u32]) {
        for &(ci, oi) in &self.touch[v] {
            let state = &mut self.options[ci][oi];
            for &c in set {
                state.counts[c as usize] -= 1;
                if state.counts[c as usize] == 0 {
                    state.mask &= !(1u128 << c);
                }
            }
        }
    }

    /// Colours open to v: within the palette, no further than t past the
    /// highest colour in play, and absent from every coloured neighbour.
    fn allowed(&self, v: usize) -> Vec<u32> {
        let hi = self.a.min(self.max_used + self.t as u32);
        let mut blocked = vec![false; hi as usize + 1];
        for &u in &self.nbrs[v] {
            if self.assigned[u] {
                for &c in &self.assignment[u] {
                    if c <= hi {
                        blocked[c as usize] = true;
                    }
                }
            }
        }
        (1..=hi).filter(|&c| !blocked[c as usize]).collect()
    }

    /// Most constrained next vertex: fewest open colours, then most
    /// incidences to groups that already carry colour, then static rank.
    fn pick(&self) -> (usize, Vec<u32>) {
        let mut best: Option<(usize, (usize, Reverse<usize>, usize))> = None;
        for v in 0..self.g.n() {
            if self.assigned[v] {
                continue;
            }
            let open = self.allowed(v);
            if open.len() < self.t {
                return (v, open);
            }
            let pressure = self.touch[v]
                .iter()
                .filter(|&&(ci, oi)| self.options[ci][oi].mask != 0)
                .count();
            let key = (open.len(), Reverse(pressure), self.rank[v]);
            if best.as_ref().map_or(true, |(_, bk)| key < *bk) {
                best = Some((v, key));
            }
        }
        let (v, _) = best.expect("pick is only called with vertices remaining");
        (v, self.allowed(v))
    }

    /// All t-subsets of `open` in ascending order whose colours above
    /// max_used form the consecutive run right after it. Any colouring can
    /// be relabelled to introduce colours in first-use order, and every
    /// constraint here is invariant under relabelling, so the rule loses
    /// nothing.
    fn subsets(&self, open: &[u32]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(self.t);
        fn go(open: &[u32], from: usize, need: usize, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if need == 0 {
                out.push(buf.clone());
                return;
            }
            if open.len() - from < need {
                return;
            }
            for k in from..=open.len() - need {
                buf.push(open[k]);
                go(open, k + 1, need - 1, buf, out);
                buf.pop();
            }
        }
        go(open, 0, self.t, &mut buf, &mut out);
        out.retain(|set| {
            let mut expect = self.max_used + 1;
            for &c in set {
                if c > self.max_used {
                    if c != expect {
                        return false;
                    }
                    expect += 1;
                }
            }
            true
        });
        out
    }

    fn run(&mut self) -> Step {
        if self.remaining == 0 {
            return Step::Sat;
        }
        let (v, open) = self.pick();
        if open.len() < self.t {
            return Step::Unsat;
        }
        for set in self.subsets(&open) {
            if self.nodes_left == 0 {
                return Step::Out;
            }
            self.nodes_left -= 1;
            self.apply(v, &set);
            let dead = self
                .touch[v]
                .iter()
                .any(|&(ci, _)| self.clause_violated(ci));
            if dead {
                self.retract(v, &set);
                continue;
            }
            let saved_max = self.max_used;
            self.max_used = self.max_used.max(*set.last().unwrap());
            self.assignment[v] = set.clone();
            self.assigned[v] = true;
            self.remaining -= 1;
            match self.run() {
                Step::Sat => return Step::Sat,
                Step::Out => return Step::Out,
                Step::Unsat => {}
            }
            self.remaining += 1;
            self.assigned[v] = false;
            self.assignment[v] = Vec::new();
            self.max_used = saved_max;
            self.retract(v, &set);
        }
        Step::Unsat
    }
}

/// Core decision: a t-fold colouring on palette `{1, .., a}` under the
/// given clauses.
fn decide(g: &Graph, t: u32, a: u32, clauses: &[Clause], budget: &SearchBudget) -> Decision {
    assert!(t >= 1, "zero-fold colourings are vacuous");
    assert!(a < 128, "palette must fit the colour mask");
    let mut search = Search::new(g, t, a, clauses, budget);
    if (0..clauses.len()).any(|ci| search.clause_violated(ci)) {
        return Decision::Unsat;
    }
    if g.n() > 0 && a < t {
        return Decision::Unsat;
    }
    match search.run() {
        Step::Sat => Decision::Sat(Coloring {
            t,
            palette: a,
            assignment: search.assignment,
        }),
        Step::Unsat => Decision::Unsat,
        Step::Out => Decision::Unknown,
    }
}

/// Greedy upper bound: highest-saturation-first colouring. Always proper,
/// never claimed optimal.
fn dsatur(g: &Graph) -> Coloring {
    let n = g.n();
    let nbrs: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut color = vec![0u32; n];
    let mut palette = 0u32;
    for _ in 0..n {
        let mut pick = None;
        for v in 0..n {
            if color[v] != 0 {
                continue;
            }
            let mut seen: Vec<u32> = nbrs[v]
                .iter()
                .map(|&u| color[u])
                .filter(|&c| c != 0)
                .collect();
            seen.sort_unstable();
            seen.dedup();
            let key = (seen.len(), nbrs[v].len(), Reverse(v));
            if pick.as_ref().map_or(true, |&(best, _)| best < key) {
                pick = Some((key, v));
            }
        }
        let (_, v) = pick.expect("an uncoloured vertex remains");
        let mut c = 1u32;
        while nbrs[v].iter().any(|&u| color[u] == c) {
            c += 1;
        }
        color[v] = c;
        palette = palette.max(c);
    }
    Coloring::single(palette, color)
}

/// Exact chromatic number when the search completes; otherwise the best
/// enclosing bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChromaticOutcome {
    Exact { chi: usize, coloring: Coloring },
    Unknown {
        lower: usize,
        upper: usize,
        best: Option<Coloring>,
    },
}

/// Exact chromatic number by branch and bound between the clique lower
/// bound and the greedy upper bound.
pub fn chromatic_number(g: &Graph, budget: &SearchBudget) -> ChromaticOutcome {
    if g.n() == 0 {
        return ChromaticOutcome::Exact {
            chi: 0,
            coloring: Coloring::single(0, Vec::new()),
        };
    }
    let mut lower = max_clique(g).len();
    let greedy = dsatur(g);
    let upper = greedy.palette as usize;
    if lower == upper {
        return ChromaticOutcome::Exact {
            chi: upper,
            coloring: greedy,
        };
    }
    for a in lower..upper {
        match decide(g, 1, a as u32, &[], budget) {
            Decision::Sat(c) => return ChromaticOutcome::Exact { chi: a, coloring: c },
            Decision::Unsat => lower = a + 1,
            Decision::Unknown => {
                return ChromaticOutcome::Unknown {
                    lower,
                    upper,
                    best: Some(greedy),
                }
            }
        }
    }
    ChromaticOutcome::Exact {
        chi: upper,
        coloring: greedy,
    }
}

/// Is there a t-fold colouring of g on palette `{1, .., a}`?
pub fn tfold_chromatic(g: &Graph, t: u32, a: u32, budget: &SearchBudget) -> Decision {
    decide(g, t, a, &[], budget)
}

/// A colouring defeating the adversary, with the colour traffic through
/// every probe and pillar spelled out for audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversarySat {
    pub coloring: Coloring,
    /// Distinct colours on the segments meeting each probe, sorted.
    pub probe_colors: Vec<Vec<u32>>,
    /// Distinct colours on the segments meeting each pillar, per probe.
    pub pillar_colors: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdversaryOutcome {
    Sat(AdversarySat),
    Unsat,
    Unknown,
}

/// Searches for a proper t-fold colouring on `{1, .., a}` in which every
/// probe meets at most s - 1 distinct colours. `Unsat` certifies the
/// forcing property for this palette: every such colouring shows some probe
/// at least s colours.
pub fn probe_adversary(
    config: &Configuration,
    t: u32,
    s: usize,
    a: u32,
    budget: &SearchBudget,
) -> AdversaryOutcome {
    assert!(s >= 1, "a probe always sees at least zero colours");
    assert!(a >= t, "palette cannot colour even one vertex");
    let clauses: Vec<Clause> = config
        .probes
        .iter()
        .map(|p| Clause {
            options: vec![CapGroup {
                members: config.segments_meeting(&p.rect),
                cap: s - 1,
            }],
        })
        .collect();
    finish_adversary(config, t, a, &clauses, budget)
}

/// Pillar-quantified variant: every probe must have at least one pillar
/// whose segments stay within s - 1 colours. `Unsat` certifies that every
/// t-fold colouring exhibits a probe all of whose pillars carry at least s
/// colours. A probe without pillars makes the question vacuously `Unsat`.
pub fn pillar_adversary(
    config: &Configuration,
    t: u32,
    s: usize,
    a: u32,
    budget: &SearchBudget,
) -> AdversaryOutcome {
    assert!(s >= 1, "a pillar always sees at least zero colours");
    assert!(a >= t, "palette cannot colour even one vertex");
    let clauses: Vec<Clause> = config
        .probes
        .iter()
        .map(|p| Clause {
            options: p
                .pillars
                .iter()
                .map(|pl| CapGroup {
                    members: config.segments_meeting(pl),
                    cap: s - 1,
                })
                .collect(),
        })
        .collect();
    finish_adversary(config, t, a, &clauses, budget)
}

fn finish_adversary(
    config: &Configuration,
    t: u32,
    a: u32,
    clauses: &[Clause],
    budget: &SearchBudget,
) -> AdversaryOutcome {
    let g = intersection_graph(&config.segments);
    match decide(&g, t, a, clauses, budget) {
        Decision::Sat(coloring) => {
            let probe_colors = config
                .probes
                .iter()
                .map(|p| seen_colors(config, &coloring, &p.rect))
                .collect();
            let pillar_colors = config
                .probes
                .iter()
                .map(|p| {
                    p.pillars
                        .iter()
                        .map(|pl| seen_colors(config, &coloring, pl))
                        .collect()
                })
                .collect();
            AdversaryOutcome::Sat(AdversarySat {
                coloring,
                probe_colors,
                pillar_colors,
            })
        }
        Decision::Unsat => AdversaryOutcome::Unsat,
        Decision::Unknown => AdversaryOutcome::Unknown,
    }
}

fn seen_colors(config: &Configuration, coloring: &Coloring, rect: &Rect) -> Vec<u32> {
    let mut cs: Vec<u32> = config
        .segments_meeting(rect)
        .into_iter()
        .flat_map(|v| coloring.assignment[v].iter().copied())
        .collect();
    cs.sort_unstable();
    cs.dedup();
    cs
}

/// Palette size at which the adversary question stops depending on the
/// palette. Colours a probe can see number at most (s - 1) per probe, and
/// segments no probe sees can always be recoloured greedily with t more
/// colours than t times the maximum degree, without changing what any probe
/// sees. So a colouring on any palette that keeps every probe below s
/// colours can be remapped below this bound.
pub fn adversary_palette_cap(config: &Configuration, t: u32, s: usize) -> u64 {
    let g = intersection_graph(&config.segments);
    (s as u64 - 1) * config.probes.len() as u64 + t as u64 * (g.max_degree() as u64 + 1)
}
