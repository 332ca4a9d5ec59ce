//! Exact reference algorithms. Every automaton in the crate is checked
//! against one of these.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, Graph, PathResult};
use crate::grid::{CellCoord, MazeGrid, Neighborhood};

/// Largest `max_hops` accepted by [`enumerate_simple_paths`].
pub const MAX_ENUMERATION_HOPS: usize = 12;

/// Single-source distances with predecessor links.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTable {
    pub source: usize,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<usize>>,
}

impl DistanceTable {
    pub fn is_reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Source-to-`v` node list along the predecessor links.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.is_reachable(v) {
            return None;
        }
        let mut nodes = vec![v];
        let mut cur = v;
        while cur != self.source {
            cur = self.pred[cur]?;
            nodes.push(cur);
            if nodes.len() > self.dist.len() {
                return None;
            }
        }
        nodes.reverse();
        Some(nodes)
    }

    pub fn path_result(&self, v: usize) -> Result<PathResult> {
        let nodes = self.path_to(v).ok_or(Error::NoPath)?;
        Ok(PathResult {
            nodes,
            cost: self.dist[v],
        })
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    cost: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (cost, node)
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_costs(g: &Graph) -> Result<()> {
    match g.edges().iter().find(|e| !(e.cost >= 0.0)) {
        Some(e) => Err(Error::NegativeWeight {
            from: e.from,
            to: e.to,
            cost: e.cost,
        }),
        None => Ok(()),
    }
}

pub fn dijkstra(g: &Graph, source: usize) -> Result<DistanceTable> {
    check_costs(g)?;
    let n = g.node_count();
    if source >= n {
        return Err(Error::InvalidArgument(format!("source {source} out of range")));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry { cost: 0.0, node: source });
    while let Some(HeapEntry { cost, node: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for e in g.out_edges(u) {
            let nd = cost + e.cost;
            if nd < dist[e.to] {
                dist[e.to] = nd;
                pred[e.to] = Some(u);
                heap.push(HeapEntry { cost: nd, node: e.to });
            }
        }
    }
    Ok(DistanceTable { source, dist, pred })
}

/// All-pairs distances; `f64::INFINITY` marks unreachable pairs.
pub fn floyd_warshall(g: &Graph) -> Result<Vec<Vec<f64>>> {
    check_costs(g)?;
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        if e.cost < d[e.from][e.to] {
            d[e.from][e.to] = e.cost;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    Ok(d)
}

/// Result of the accumulated-weight relaxation on a maze.
#[derive(Debug, Clone, PartialEq)]
pub struct LeeReference {
    /// Accumulated weight per cell, `f64::INFINITY` where unreached.
    pub acw: Vec<f64>,
    /// Synchronous sweep at which the end cell first received a finite weight.
    pub arrival_step: Option<usize>,
    /// Sweeps until no accumulated weight changed.
    pub sweeps: usize,
}

/// Phase one of the classical Lee router: synchronous relaxation of
/// `acw(i) = min over neighbours acw(j) + weight(i)` with `acw(start) = 0`,
/// iterated until steady. Walls and `None` weights are impassable.
pub fn lee_accumulate(
    maze: &MazeGrid,
    weights: &[Option<u32>],
    start: CellCoord,
    end: CellCoord,
) -> Result<LeeReference> {
    let n = maze.cell_count();
    if weights.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} cell weights, got {}",
            weights.len()
        )));
    }
    if weights.contains(&Some(0)) {
        return Err(Error::InvalidArgument("cell weights must be >= 1".into()));
    }
    let (si, ei) = (maze.index(start), maze.index(end));
    let passable = |i: usize| maze.is_open(maze.coord(i)) && weights[i].is_some();
    if si == ei || !passable(si) || !passable(ei) {
        return Err(Error::InvalidArgument(
            "start and end must be distinct open cells".into(),
        ));
    }

    let mut acw = vec![f64::INFINITY; n];
    acw[si] = 0.0;
    let mut arrival_step = None;
    let mut sweeps = 0;
    loop {
        let next: Vec<f64> = (0..n)
            .map(|i| {
                if i == si || !passable(i) {
                    return acw[i];
                }
                let min_nb = maze
                    .neighbors(maze.coord(i), Neighborhood::VonNeumann4)
                    .map(|(_, c)| acw[maze.index(c)])
                    .fold(f64::INFINITY, f64::min);
                min_nb + weights[i].unwrap() as f64
            })
            .collect();
        let steady = next == acw;
        acw = next;
        if steady {
            break;
        }
        sweeps += 1;
        if arrival_step.is_none() && acw[ei].is_finite() {
            arrival_step = Some(sweeps);
        }
    }
    Ok(LeeReference {
        acw,
        arrival_step,
        sweeps,
    })
}

/// Two-phase Lee routing with per-cell entry weights: relax to a fixed
/// point, then walk back from `end` to the neighbour of smallest accumulated
/// weight (ties in N, W, S, E order). Nodes are row-major cell indices.
pub fn lee_reference(
    maze: &MazeGrid,
    weights: &[Option<u32>],
    start: CellCoord,
    end: CellCoord,
) -> Result<PathResult> {
    let reference = lee_accumulate(maze, weights, start, end)?;
    let acw = &reference.acw;
    let (si, ei) = (maze.index(start), maze.index(end));
    if !acw[ei].is_finite() {
        return Err(Error::NoPath);
    }
    let mut nodes = vec![ei];
    let mut cur = end;
    while maze.index(cur) != si {
        let mut best: Option<(f64, CellCoord)> = None;
        for (_, c) in maze.neighbors(cur, Neighborhood::VonNeumann4) {
            let a = acw[maze.index(c)];
            if best.is_none_or(|(b, _)| a < b) {
                best = Some((a, c));
            }
        }
        cur = best.expect("reached cells have a finite neighbour").1;
        nodes.push(maze.index(cur));
    }
    nodes.reverse();
    Ok(PathResult {
        nodes,
        cost: acw[ei],
    })
}

/// Breadth-first hop distances from `start` over non-wall cells.
pub fn bfs_distances(maze: &MazeGrid, start: CellCoord, scheme: Neighborhood) -> Vec<Option<usize>> {
    let mut dist = vec![None; maze.cell_count()];
    if !maze.is_open(start) {
        return dist;
    }
    let mut queue = VecDeque::from([start]);
    dist[maze.index(start)] = Some(0);
    while let Some(c) = queue.pop_front() {
        let d = dist[maze.index(c)].unwrap();
        for (_, nb) in maze.neighbors(c, scheme) {
            let i = maze.index(nb);
            if maze.is_open(nb) && dist[i].is_none() {
                dist[i] = Some(d + 1);
                queue.push_back(nb);
            }
        }
    }
    dist
}

/// All simple `s -> t` paths with at most `max_hops` edges, depth-first in
/// successor order. `s == t` yields no paths.
pub fn enumerate_simple_paths<G: Adjacency>(
    g: &G,
    s: usize,
    t: usize,
    max_hops: usize,
) -> Result<Vec<Vec<usize>>> {
    if max_hops > MAX_ENUMERATION_HOPS {
        return Err(Error::LimitExceeded {
            max_hops,
            limit: MAX_ENUMERATION_HOPS,
        });
    }
    let n = g.node_count();
    if s >= n || t >= n {
        return Err(Error::InvalidArgument("endpoint out of range".into()));
    }
    let mut out = Vec::new();
    if s == t {
        return Ok(out);
    }
    let mut on_path = vec![false; n];
    let mut path = vec![s];
    on_path[s] = true;
    fn dfs<G: Adjacency>(
        g: &G,
        t: usize,
        max_hops: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        if path.len() > max_hops {
            return;
        }
        for v in g.successors(u) {
            if on_path[v] {
                continue;
            }
            on_path[v] = true;
            path.push(v);
            dfs(g, t, max_hops, path, on_path, out);
            path.pop();
            on_path[v] = false;
        }
    }
    dfs(g, t, max_hops, &mut path, &mut on_path, &mut out);
    Ok(out)
}
