//! Directed weighted graphs, stochastic graphs and the bridge from lattices.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::WeightedLattice;

/// Extra CA steps one lattice hop costs on top of its weight in the
/// excitation-wave automaton: one step to adopt the countdown, one to fire.
pub const HOP_DELAY: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Edge cost equals the lattice weight.
    Raw,
    /// Edge cost equals weight + 2, the wave automaton's per-hop latency.
    HopDelay,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Raw => "raw",
            Metric::HopDelay => "hop_delay",
        }
    }

    pub fn edge_cost(self, w: u32) -> f64 {
        match self {
            Metric::Raw => w as f64,
            Metric::HopDelay => (w + HOP_DELAY) as f64,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Metric::Raw),
            "hop_delay" | "hop-delay" => Ok(Metric::HopDelay),
            _ => Err(Error::InvalidArgument(format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cost: f64,
}

/// A directed graph with non-negative finite edge costs. Absent edges are
/// implicitly infinite. Parallel edges are allowed; only the cheapest matters.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cost: f64) -> Result<()> {
        if from >= self.n || to >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge {from} -> {to} out of range for {} nodes",
                self.n
            )));
        }
        if !(cost >= 0.0) || !cost.is_finite() {
            return Err(Error::NegativeWeight { from, to, cost });
        }
        self.out[from].push(self.edges.len());
        self.inc[to].push(self.edges.len());
        self.edges.push(Edge { from, to, cost });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = &Edge> {
        self.out[u].iter().map(move |&e| &self.edges[e])
    }

    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.inc[v].iter().map(move |&e| &self.edges[e])
    }

    /// Cheapest direct edge `from -> to`.
    pub fn edge_cost(&self, from: usize, to: usize) -> Option<f64> {
        self.out_edges(from)
            .filter(|e| e.to == to)
            .map(|e| e.cost)
            .min_by(f64::total_cmp)
    }

    /// Sum of edge costs along `nodes`, taking the cheapest parallel edge.
    pub fn path_cost(&self, nodes: &[usize]) -> Result<f64> {
        nodes.windows(2).try_fold(0.0, |acc, w| {
            self.edge_cost(w[0], w[1])
                .map(|c| acc + c)
                .ok_or_else(|| Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])))
        })
    }

    /// One node per cell (row-major index); an edge `y -> x` for every finite
    /// incoming weight at `x`.
    pub fn from_lattice(lat: &WeightedLattice, metric: Metric) -> Graph {
        let mut g = Graph::new(lat.cell_count());
        for x in 0..lat.cell_count() {
            let cx = lat.coord(x);
            for (_, y, w) in lat.incoming(cx) {
                g.add_edge(lat.index(y), x, metric.edge_cost(w))
                    .expect("lattice edges are in range and non-negative");
            }
        }
        g
    }

    /// Text format: a line `N`, then one `from to cost` line per edge.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing node count"))?;
        let n = parse_num::<usize>(header, ln, 1)?;
        let mut g = Graph::new(n);
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::parse(ln, 1, "expected `from to cost`"));
            }
            let from = parse_num::<usize>(toks[0], ln, 1)?;
            let to = parse_num::<usize>(toks[1], ln, 2)?;
            let cost = parse_num::<f64>(toks[2], ln, 3)?;
            g.add_edge(from, to, cost)
                .map_err(|e| Error::parse(ln, 1, e.to_string()))?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.from, e.to, e.cost));
        }
        s
    }
}

/// A finite discrete distribution of edge lengths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthDistribution {
    outcomes: Vec<(f64, f64)>,
}

pub const PROB_TOLERANCE: f64 = 1e-9;

impl LengthDistribution {
    pub fn new(outcomes: Vec<(f64, f64)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::InvalidArgument("empty length distribution".into()));
        }
        for &(l, p) in &outcomes {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(Error::InvalidArgument(format!("edge length {l} must be >= 0")));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("probability {p} outside [0,1]")));
            }
        }
        let total: f64 = outcomes.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(LengthDistribution { outcomes })
    }

    pub fn constant(len: f64) -> Self {
        LengthDistribution {
            outcomes: vec![(len, 1.0)],
        }
    }

    pub fn outcomes(&self) -> &[(f64, f64)] {
        &self.outcomes
    }

    pub fn mean(&self) -> f64 {
        self.outcomes.iter().map(|&(l, p)| l * p).sum()
    }

    /// Inverse-CDF draw; the last outcome absorbs any rounding slack.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for &(l, p) in &self.outcomes {
            acc += p;
            if u < acc {
                return l;
            }
        }
        self.outcomes[self.outcomes.len() - 1].0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticEdge {
    pub from: usize,
    pub to: usize,
    pub lengths: LengthDistribution,
}

/// A directed graph whose edge lengths are random variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StochasticGraph {
    n: usize,
    edges: Vec<StochasticEdge>,
    out: Vec<Vec<usize>>,
}

impl StochasticGraph {
    pub fn new(n: usize) -> Self {
        StochasticGraph {
            n,
            edges: Vec::new(),
            out: vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, lengths: LengthDistribution) -> Result<()> {
        if from >= self.n || to >= self.n {
            return Err(Error::InvalidArgument(format!(
                "edge {from} -> {to} out of range for {} nodes",
                self.n
            )));
        }
        if self.edge(from, to).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate edge {from} -> {to}")));
        }
        self.out[from].push(self.edges.len());
        self.edges.push(StochasticEdge { from, to, lengths });
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[StochasticEdge] {
        &self.edges
    }

    /// Outgoing edges of `u` in insertion order.
    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = &StochasticEdge> {
        self.out[u].iter().map(move |&e| &self.edges[e])
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&StochasticEdge> {
        self.out.get(from)?.iter().map(|&e| &self.edges[e]).find(|e| e.to == to)
    }

    /// Draws a length for `from -> to`.
    pub fn sample_edge<R: Rng + ?Sized>(&self, from: usize, to: usize, rng: &mut R) -> Result<f64> {
        self.edge(from, to)
            .map(|e| e.lengths.sample(rng))
            .ok_or(Error::MissingEdge { from, to })
    }

    /// Exact expected length of `path`: the sum of per-edge means.
    pub fn expected_path_length(&self, path: &[usize]) -> Result<f64> {
        path.windows(2).try_fold(0.0, |acc, w| {
            self.edge(w[0], w[1])
                .map(|e| acc + e.lengths.mean())
                .ok_or_else(|| Error::InvalidPath(format!("no edge {} -> {}", w[0], w[1])))
        })
    }

    /// Text format: a line `N`, then `from to k l1 p1 ... lk pk` per edge.
    pub fn parse(text: &str) -> Result<StochasticGraph> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "missing node count"))?;
        let n = parse_num::<usize>(header, ln, 1)?;
        let mut g = StochasticGraph::new(n);
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 3 {
                return Err(Error::parse(ln, 1, "expected `from to k l1 p1 ...`"));
            }
            let from = parse_num::<usize>(toks[0], ln, 1)?;
            let to = parse_num::<usize>(toks[1], ln, 2)?;
            let k = parse_num::<usize>(toks[2], ln, 3)?;
            if toks.len() != 3 + 2 * k {
                return Err(Error::parse(
                    ln,
                    toks.len() + 1,
                    format!("expected {k} (length, probability) pairs"),
                ));
            }
            let mut outcomes = Vec::with_capacity(k);
            for j in 0..k {
                let l = parse_num::<f64>(toks[3 + 2 * j], ln, 4 + 2 * j)?;
                let p = parse_num::<f64>(toks[4 + 2 * j], ln, 5 + 2 * j)?;
                outcomes.push((l, p));
            }
            let dist = LengthDistribution::new(outcomes).map_err(|e| Error::parse(ln, 4, e.to_string()))?;
            g.add_edge(from, to, dist)
                .map_err(|e| Error::parse(ln, 1, e.to_string()))?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {} {}", e.from, e.to, e.lengths.outcomes.len()));
            for &(l, p) in &e.lengths.outcomes {
                s.push_str(&format!(" {l} {p}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Successor enumeration shared by deterministic and stochastic graphs.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn successors(&self, u: usize) -> Vec<usize>;
}

impl Adjacency for Graph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn successors(&self, u: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.out_edges(u).map(|e| e.to).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl Adjacency for StochasticGraph {
    fn node_count(&self) -> usize {
        self.n
    }

    fn successors(&self, u: usize) -> Vec<usize> {
        self.out_edges(u).map(|e| e.to).collect()
    }
}

/// A route and its total cost under whatever metric produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathResult {
    pub nodes: Vec<usize>,
    pub cost: f64,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, col: usize) -> Result<T> {
    tok.parse::<T>()
        .map_err(|_| Error::parse(line, col, format!("cannot parse `{tok}`")))
}
