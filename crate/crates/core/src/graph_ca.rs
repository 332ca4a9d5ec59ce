//! Graph cellular automaton: every node is a cell holding a predecessor
//! pointer and the cost of its best known partial path, and all cells relax
//! against their in-neighbours at once.
//!
//! The update is the synchronous (Jacobi) Bellman-Ford relaxation
//! `cost_i' = min(cost_i, min_k cost_k + c(k, i))`, with ties between equal
//! candidates going to the lowest predecessor id.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, PathResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NodeState {
    pub pred: Option<usize>,
    pub cost: f64,
}

impl NodeState {
    pub const UNREACHED: NodeState = NodeState {
        pred: None,
        cost: f64::INFINITY,
    };
}

/// Source at cost 0, everything else unreached.
pub fn initial_states(n: usize, source: usize) -> Vec<NodeState> {
    let mut v = vec![NodeState::UNREACHED; n];
    v[source].cost = 0.0;
    v
}

fn relax(states: &[NodeState], g: &Graph, i: usize) -> NodeState {
    let mut best: Option<(f64, usize)> = None;
    for e in g.in_edges(i) {
        let c = states[e.from].cost + e.cost;
        if !c.is_finite() {
            continue;
        }
        best = match best {
            Some((bc, bk)) if bc < c || (bc == c && bk <= e.from) => Some((bc, bk)),
            _ => Some((c, e.from)),
        };
    }
    match best {
        Some((c, k)) if c < states[i].cost => NodeState { pred: Some(k), cost: c },
        _ => states[i],
    }
}

/// One synchronous relaxation of every node from the pre-step snapshot.
pub fn graph_ca_step(states: &[NodeState], g: &Graph, parallel: bool) -> Vec<NodeState> {
    if parallel {
        (0..states.len()).into_par_iter().map(|i| relax(states, g, i)).collect()
    } else {
        (0..states.len()).map(|i| relax(states, g, i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphCaRun {
    /// Node states after every step, starting with the initial states.
    pub trace: Vec<Vec<NodeState>>,
    /// Steps that changed at least one node.
    pub steps: usize,
}

impl GraphCaRun {
    pub fn final_states(&self) -> &[NodeState] {
        self.trace.last().expect("trace holds the initial states")
    }

    /// Backtracks the predecessor chain from `t`.
    pub fn path_to(&self, t: usize) -> Result<PathResult> {
        let states = self.final_states();
        if !states[t].cost.is_finite() {
            return Err(Error::NoPath);
        }
        let mut nodes = vec![t];
        let mut cur = t;
        while let Some(p) = states[cur].pred {
            nodes.push(p);
            cur = p;
            if nodes.len() > states.len() {
                return Err(Error::InvalidPath("predecessor chain loops".into()));
            }
        }
        nodes.reverse();
        Ok(PathResult {
            nodes,
            cost: states[t].cost,
        })
    }

    /// Per-step dump with columns `step,node,pred,cost`; an absent pointer is
    /// left empty and an infinite cost is written `inf`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,node,pred,cost\n");
        for (step, states) in self.trace.iter().enumerate() {
            for (node, st) in states.iter().enumerate() {
                let pred = st.pred.map(|p| p.to_string()).unwrap_or_default();
                let cost = if st.cost.is_finite() {
                    st.cost.to_string()
                } else {
                    "inf".to_string()
                };
                writeln!(s, "{step},{node},{pred},{cost}").unwrap();
            }
        }
        s
    }
}

/// Relaxes from `source` until nothing changes. With non-negative costs this
/// takes at most n - 1 changing steps; n of them is reported as an error.
pub fn graph_ca_fixed_point(g: &Graph, source: usize, parallel: bool) -> Result<GraphCaRun> {
    let n = g.node_count();
    if source >= n {
        return Err(Error::InvalidArgument(format!("source {source} out of range")));
    }
    let mut trace = vec![initial_states(n, source)];
    let mut steps = 0;
    loop {
        let cur = trace.last().unwrap();
        let next = graph_ca_step(cur, g, parallel);
        if &next == cur {
            break;
        }
        steps += 1;
        trace.push(next);
        if steps >= n.max(1) {
            return Err(Error::NoFixedPoint(steps));
        }
    }
    Ok(GraphCaRun { trace, steps })
}

pub fn graph_ca_run(g: &Graph, s: usize, t: usize, parallel: bool) -> Result<(PathResult, GraphCaRun)> {
    if s == t {
        return Err(Error::InvalidArgument("source and destination coincide".into()));
    }
    if t >= g.node_count() {
        return Err(Error::InvalidArgument(format!("destination {t} out of range")));
    }
    let run = graph_ca_fixed_point(g, s, parallel)?;
    let path = run.path_to(t)?;
    Ok((path, run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dijkstra, enumerate_simple_paths};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(density) {
                    g.add_edge(u, v, rng.random_range(0..10) as f64 * 0.5).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn chain_settles_one_hop_per_step() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        let s1 = graph_ca_step(&initial_states(3, 0), &g, false);
        assert_eq!(s1[1], NodeState { pred: Some(0), cost: 1.0 });
        assert_eq!(s1[2], NodeState::UNREACHED);
        let s2 = graph_ca_step(&s1, &g, false);
        assert_eq!(s2[2], NodeState { pred: Some(1), cost: 2.0 });
    }

    #[test]
    fn cheaper_in_edge_wins_and_ties_go_low() {
        let mut g = Graph::new(4);
        g.add_edge(0, 1, 0.0).unwrap();
        g.add_edge(0, 2, 0.0).unwrap();
        g.add_edge(1, 3, 4.0).unwrap();
        g.add_edge(2, 3, 3.0).unwrap();
        let (p, _) = graph_ca_run(&g, 0, 3, false).unwrap();
        assert_eq!(p.nodes, vec![0, 2, 3]);
        assert_eq!(p.cost, 3.0);

        let mut tie = Graph::new(4);
        tie.add_edge(0, 2, 1.0).unwrap();
        tie.add_edge(0, 1, 1.0).unwrap();
        tie.add_edge(2, 3, 1.0).unwrap();
        tie.add_edge(1, 3, 1.0).unwrap();
        assert_eq!(graph_ca_run(&tie, 0, 3, false).unwrap().0.nodes, vec![0, 1, 3]);
    }

    #[test]
    fn isolated_node_stays_unreached() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1, 2.0).unwrap();
        let run = graph_ca_fixed_point(&g, 0, false).unwrap();
        assert_eq!(run.final_states()[2], NodeState::UNREACHED);
        assert_eq!(graph_ca_run(&g, 0, 2, false).unwrap_err(), Error::NoPath);
    }

    #[test]
    fn complete_unit_graph_is_one_hop() {
        let n = 6;
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.add_edge(u, v, 1.0).unwrap();
                }
            }
        }
        let (p, run) = graph_ca_run(&g, 2, 5, false).unwrap();
        assert_eq!(p.nodes, vec![2, 5]);
        assert_eq!(p.cost, 1.0);
        assert_eq!(run.steps, 1);
    }

    #[test]
    fn matches_dijkstra_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.random_range(2..=30);
            let g = random_graph(&mut rng, n, 0.15);
            let s = rng.random_range(0..n);
            let oracle = dijkstra(&g, s).unwrap();
            let run = graph_ca_fixed_point(&g, s, false).unwrap();
            assert!(run.steps < n);
            for t in 0..n {
                assert_eq!(run.final_states()[t].cost, oracle.dist[t]);
                if t != s && oracle.is_reachable(t) {
                    let p = run.path_to(t).unwrap();
                    assert_eq!(g.path_cost(&p.nodes).unwrap(), p.cost);
                }
            }
        }
    }

    #[test]
    fn step_t_holds_best_cost_within_t_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let n = rng.random_range(2..=8);
            let g = random_graph(&mut rng, n, 0.35);
            let run = graph_ca_fixed_point(&g, 0, false).unwrap();
            for (t, states) in run.trace.iter().enumerate() {
                for v in 1..n {
                    let best = enumerate_simple_paths(&g, 0, v, n)
                        .unwrap()
                        .into_iter()
                        .filter(|p| p.len() - 1 <= t)
                        .map(|p| g.path_cost(&p).unwrap())
                        .fold(f64::INFINITY, f64::min);
                    assert_eq!(states[v].cost, best, "node {v} after {t} steps");
                }
            }
        }
    }

    #[test]
    fn csv_trace_layout() {
        let mut g = Graph::new(2);
        g.add_edge(0, 1, 1.5).unwrap();
        let run = graph_ca_fixed_point(&g, 0, false).unwrap();
        assert_eq!(
            run.to_csv(),
            "step,node,pred,cost\n0,0,,0\n0,1,,inf\n1,0,,0\n1,1,0,1.5\n"
        );
    }

    proptest! {
        #[test]
        fn costs_never_increase(seed in 0u64..5000, parallel in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(2..=15);
            let g = random_graph(&mut rng, n, 0.25);
            let run = graph_ca_fixed_point(&g, 0, parallel).unwrap();
            prop_assert!(run.steps < n);
            for w in run.trace.windows(2) {
                for i in 0..n {
                    prop_assert!(w[1][i].cost <= w[0][i].cost);
                    prop_assert_eq!(w[1][i].cost.is_finite(), w[1][i].pred.is_some() || i == 0);
                }
            }
            let serial = graph_ca_fixed_point(&g, 0, false).unwrap();
            prop_assert_eq!(serial, run);
        }
    }
}
