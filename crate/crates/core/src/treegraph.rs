//! The forward graph of the accelerated map over odd values.
//!
//! Every seed of degree at most `max_degree` is followed until it meets a
//! node already in the graph, so the result is closed under the map unless
//! a walk hit the step limit. The sink 1 carries its self-loop `C_2[1] = 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::bitpoly::BitPoly;
use crate::collatz::collatz_step;
use crate::error::{Error, Result};

/// Above this the seed set no longer fits in memory.
pub const MAX_SEED_DEGREE: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub to: BitPoly,
    pub q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeLimits {
    /// Steps allowed per seed walk before the walk is cut.
    pub max_steps: u64,
}

impl Default for TreeLimits {
    fn default() -> Self {
        TreeLimits {
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGraph {
    max_degree: u64,
    /// `None` marks a frontier node left without an edge by truncation.
    nodes: BTreeMap<BitPoly, Option<Edge>>,
    truncated: bool,
}

pub fn build_tree(max_degree: u64, limits: TreeLimits) -> Result<TreeGraph> {
    if max_degree > MAX_SEED_DEGREE {
        return Err(Error::OutOfRange(format!(
            "max_degree {max_degree} exceeds {MAX_SEED_DEGREE}"
        )));
    }
    let mut g = TreeGraph {
        max_degree,
        nodes: BTreeMap::new(),
        truncated: false,
    };
    let seeds = std::iter::once(1u64).chain((3..1u64 << (max_degree + 1)).step_by(2));
    for seed in seeds {
        let mut cur = BitPoly::from_u64(seed);
        let mut steps = 0;
        while !matches!(g.nodes.get(&cur), Some(Some(_))) {
            if steps >= limits.max_steps {
                g.nodes.entry(cur).or_insert(None);
                g.truncated = true;
                break;
            }
            let (next, q) = collatz_step(&cur)?;
            g.nodes.insert(
                cur,
                Some(Edge {
                    to: next.clone(),
                    q,
                }),
            );
            steps += 1;
            cur = next;
        }
    }
    Ok(g)
}

impl TreeGraph {
    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn contains(&self, n: &BitPoly) -> bool {
        self.nodes.contains_key(n)
    }

    /// Nodes in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = &BitPoly> {
        self.nodes.keys()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge(&self, n: &BitPoly) -> Option<&Edge> {
        self.nodes.get(n).and_then(Option::as_ref)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&BitPoly, &Edge)> {
        self.nodes
            .iter()
            .filter_map(|(n, e)| e.as_ref().map(|e| (n, e)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// The generating set: every node of degree at most `max_degree`.
    pub fn seeds(&self) -> impl Iterator<Item = &BitPoly> {
        let d = self.max_degree;
        self.nodes()
            .filter(move |n| n.degree().is_ok_and(|x| x <= d))
    }

    pub fn in_degrees(&self) -> BTreeMap<&BitPoly, usize> {
        let mut deg: BTreeMap<&BitPoly, usize> = self.nodes.keys().map(|n| (n, 0)).collect();
        for (_, e) in self.edges() {
            *deg.entry(&e.to).or_default() += 1;
        }
        deg
    }

    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct JsonEdge<'a> {
            from: &'a BitPoly,
            to: &'a BitPoly,
            q: u64,
        }
        #[derive(Serialize)]
        struct JsonGraph<'a> {
            nodes: Vec<&'a BitPoly>,
            edges: Vec<JsonEdge<'a>>,
        }
        let doc = JsonGraph {
            nodes: self.nodes().collect(),
            edges: self
                .edges()
                .map(|(from, e)| JsonEdge {
                    from,
                    to: &e.to,
                    q: e.q,
                })
                .collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, e) in &self.nodes {
            match e {
                Some(e) => writeln!(out, "{n} -> {} q={}", e.to, e.q),
                None => writeln!(out, "{n} -> ? (truncated)"),
            }
            .expect("write to string");
        }
        out
    }
}

/// The unique node sequence from `n` to 1, both inclusive.
pub fn path_to_sink(g: &TreeGraph, n: &BitPoly) -> Result<Vec<BitPoly>> {
    if !g.contains(n) {
        return Err(Error::UnknownNode(n.to_decimal_string()));
    }
    let mut path = vec![n.clone()];
    let mut seen = BTreeSet::new();
    let mut cur = n;
    while !cur.is_one() {
        if !seen.insert(cur) {
            return Err(Error::Identity(format!("cycle through {cur} avoids 1")));
        }
        let e = g
            .edge(cur)
            .ok_or_else(|| Error::TruncatedPath(n.to_decimal_string()))?;
        path.push(e.to.clone());
        cur = &e.to;
    }
    Ok(path)
}

/// Node counts along the path from `from` to its first visit of `to`,
/// under the usual counting conventions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentCounts {
    /// Both endpoints included.
    pub inclusive: usize,
    pub strictly_between: usize,
    /// Interior nodes above the graph's seed degree.
    pub between_above_seed_degree: usize,
    /// The whole path from `from` to 1.
    pub full_path: usize,
}

pub fn segment_counts(g: &TreeGraph, from: &BitPoly, to: &BitPoly) -> Result<SegmentCounts> {
    let path = path_to_sink(g, from)?;
    let end = path
        .iter()
        .position(|v| v == to)
        .ok_or_else(|| Error::UnknownNode(to.to_decimal_string()))?;
    let interior = if end == 0 { &path[0..0] } else { &path[1..end] };
    Ok(SegmentCounts {
        inclusive: end + 1,
        strictly_between: interior.len(),
        between_above_seed_degree: interior
            .iter()
            .filter(|v| v.degree().is_ok_and(|d| d > g.max_degree))
            .count(),
        full_path: path.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphInvariants {
    /// 1 is present and is the only node mapped to itself.
    pub single_sink: bool,
    /// Every node has an outgoing edge.
    pub out_degree_one: bool,
    /// The only cycle is the self-loop at 1.
    pub acyclic_except_sink: bool,
    /// Every node's forward path ends at 1.
    pub all_reach_sink: bool,
    /// Nodes with no incoming edge, ascending.
    pub starting_nodes: Vec<BitPoly>,
    /// Every multiple of 3 is a starting node.
    pub multiples_of_three_are_starts: bool,
}

impl GraphInvariants {
    pub fn all_hold(&self) -> bool {
        self.single_sink
            && self.out_degree_one
            && self.acyclic_except_sink
            && self.all_reach_sink
            && self.multiples_of_three_are_starts
    }
}

pub fn graph_invariants(g: &TreeGraph) -> GraphInvariants {
    let one = BitPoly::one();
    let fixed: Vec<&BitPoly> = g
        .edges()
        .filter(|(n, e)| **n == e.to)
        .map(|(n, _)| n)
        .collect();
    let single_sink = fixed == [&one];
    let out_degree_one = g.nodes.values().all(Option::is_some);

    // Walk the functional graph once per node, colouring nodes by the
    // outcome of the walk that first reached them.
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Active,
        ReachesSink,
        Stuck,
    }
    let mut state: BTreeMap<&BitPoly, State> = BTreeMap::new();
    let mut acyclic = true;
    for start in g.nodes() {
        if state.contains_key(start) {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = start;
        let outcome = loop {
            if cur.is_one() {
                break State::ReachesSink;
            }
            match state.get(cur) {
                Some(State::Active) => {
                    acyclic = false;
                    break State::Stuck;
                }
                Some(&s) => break s,
                None => {}
            }
            state.insert(cur, State::Active);
            walk.push(cur);
            match g.edge(cur) {
                Some(e) => cur = &e.to,
                None => break State::Stuck,
            }
        };
        for v in walk {
            state.insert(v, outcome);
        }
    }
    if g.contains(&one) {
        state.insert(g.nodes.get_key_value(&one).unwrap().0, State::ReachesSink);
    }
    let all_reach_sink = g.contains(&one) && state.values().all(|&s| s == State::ReachesSink);

    let indeg = g.in_degrees();
    let starting_nodes: Vec<BitPoly> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(n, _)| (*n).clone())
        .collect();
    let multiples_of_three_are_starts = indeg
        .iter()
        .filter(|(n, _)| n.div_rem_small(3).1 == 0)
        .all(|(_, &d)| d == 0);

    GraphInvariants {
        single_sink,
        out_degree_one,
        acyclic_except_sink: acyclic,
        all_reach_sink,
        starting_nodes,
        multiples_of_three_are_starts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelStyle {
    #[default]
    Decimal,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DotOptions {
    pub label: LabelStyle,
    /// Nodes above this degree are labelled by decimal value only, or
    /// dropped entirely when `elide` is set.
    pub max_label_degree: Option<u64>,
    /// Collapse runs of nodes above `max_label_degree` into one dotted
    /// edge annotated with the number of hidden nodes.
    pub elide: bool,
}

/// Graphviz digraph with nodes and edges in ascending node order.
pub fn to_dot(g: &TreeGraph, opts: DotOptions) -> String {
    let cap = opts.max_label_degree.unwrap_or(u64::MAX);
    let shown = |n: &BitPoly| n.degree().is_ok_and(|d| d <= cap);
    let elide = opts.elide && opts.max_label_degree.is_some();

    let mut out = String::from("digraph collatz {\n");
    for n in g.nodes() {
        if elide && !shown(n) {
            continue;
        }
        let label = match opts.label {
            LabelStyle::Poly if shown(n) => n.format_poly(),
            _ => n.to_decimal_string(),
        };
        let _ = writeln!(out, "  \"{n}\" [label=\"{label}\"];");
    }
    for (n, e) in g.edges() {
        if !elide {
            let _ = writeln!(out, "  \"{n}\" -> \"{}\" [label=\"q={}\"];", e.to, e.q);
            continue;
        }
        if !shown(n) {
            continue;
        }
        if shown(&e.to) {
            let _ = writeln!(out, "  \"{n}\" -> \"{}\" [label=\"q={}\"];", e.to, e.q);
            continue;
        }
        let mut hidden = 0;
        let mut cur = &e.to;
        let mut target = None;
        while let Some(next) = g.edge(cur) {
            hidden += 1;
            if shown(&next.to) {
                target = Some(&next.to);
                break;
            }
            if hidden > g.node_count() {
                break;
            }
            cur = &next.to;
        }
        if let Some(t) = target {
            let _ = writeln!(
                out,
                "  \"{n}\" -> \"{t}\" [style=dotted, label=\"{hidden} nodes\"];"
            );
        }
    }
    out.push_str("}\n");
    out
}
