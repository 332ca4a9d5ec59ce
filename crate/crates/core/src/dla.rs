//! Distributed learning automata for the stochastic shortest path problem.
//!
//! One automaton sits on every node; its actions are the node's out-edges.
//! Each episode walks from the source by sampling actions, sums the sampled
//! edge lengths, and compares the total with a dynamic threshold. Automata
//! on the walk are rewarded (length at or below the threshold) or penalised
//! with the linear reward-penalty scheme.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{PathResult, StochasticGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Signal {
    Reward,
    Penalty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearningAutomaton {
    pub node: usize,
    /// Target node of each action, in the graph's out-edge order.
    pub actions: Vec<usize>,
    pub probs: Vec<f64>,
}

impl LearningAutomaton {
    pub fn new(node: usize, actions: Vec<usize>) -> Self {
        let r = actions.len();
        let probs = vec![1.0 / r.max(1) as f64; r];
        LearningAutomaton { node, actions, probs }
    }

    pub fn action_index(&self, target: usize) -> Option<usize> {
        self.actions.iter().position(|&a| a == target)
    }

    /// Inverse-CDF draw of an action index, `None` without actions.
    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.actions.is_empty() {
            return None;
        }
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Some(i);
            }
        }
        Some(self.probs.len() - 1)
    }

    /// Most probable action; ties go to the earliest action.
    pub fn best(&self) -> Option<usize> {
        (0..self.probs.len()).reduce(|b, i| if self.probs[i] > self.probs[b] { i } else { b })
    }

    /// Linear reward-penalty update of the chosen action. The chosen entry is
    /// recomputed as one minus the others so the vector stays on the simplex.
    pub fn update(&mut self, chosen: usize, signal: Signal, reward_rate: f64, penalty_rate: f64) -> Result<()> {
        let r = self.probs.len();
        if chosen >= r {
            return Err(Error::InvalidUpdate(format!(
                "automaton {} has no action {chosen}",
                self.node
            )));
        }
        if r == 1 {
            return Ok(());
        }
        match signal {
            Signal::Reward => {
                for (j, p) in self.probs.iter_mut().enumerate() {
                    if j != chosen {
                        *p -= reward_rate * *p;
                    }
                }
            }
            Signal::Penalty => {
                if penalty_rate == 0.0 {
                    return Ok(());
                }
                let share = 1.0 / (r - 1) as f64;
                for (j, p) in self.probs.iter_mut().enumerate() {
                    if j != chosen {
                        *p += penalty_rate * (share - *p);
                    }
                }
            }
        }
        let others: f64 = (0..r).filter(|&j| j != chosen).map(|j| self.probs[j]).sum();
        self.probs[chosen] = (1.0 - others).clamp(0.0, 1.0);
        Ok(())
    }
}

/// One automaton per node, actions in out-edge order.
pub fn build_automata(g: &StochasticGraph) -> Vec<LearningAutomaton> {
    (0..g.node_count())
        .map(|u| LearningAutomaton::new(u, g.out_edges(u).map(|e| e.to).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThresholdMode {
    /// Mean over episodes that reached the destination.
    ReachedMean,
    /// Mean over every episode's sampled length.
    AllMean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlaConfig {
    pub reward_rate: f64,
    pub penalty_rate: f64,
    pub max_episodes: usize,
    pub visit_cap_multiplier: usize,
    pub stop_prob_threshold: f64,
    pub threshold_mode: ThresholdMode,
}

impl Default for DlaConfig {
    fn default() -> Self {
        DlaConfig {
            reward_rate: 0.05,
            penalty_rate: 0.0,
            max_episodes: 20_000,
            visit_cap_multiplier: 1,
            stop_prob_threshold: 0.95,
            threshold_mode: ThresholdMode::ReachedMean,
        }
    }
}

impl DlaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(self.reward_rate > 0.0 && self.reward_rate < 1.0) {
            return bad("reward rate must lie in (0,1)");
        }
        if !(0.0..1.0).contains(&self.penalty_rate) {
            return bad("penalty rate must lie in [0,1)");
        }
        if !(self.stop_prob_threshold > 0.0 && self.stop_prob_threshold < 1.0) {
            return bad("stop probability must lie in (0,1)");
        }
        if self.visit_cap_multiplier == 0 {
            return bad("visit cap multiplier must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Reached,
    DeadEnd,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeRecord {
    pub path: Vec<usize>,
    pub sampled_length: f64,
    pub outcome: Outcome,
}

/// Samples one walk from `s`. It stops at `t`, at a node without actions, or
/// once more than `n * visit_cap_multiplier` nodes have been visited.
pub fn dla_episode<R: Rng + ?Sized>(
    g: &StochasticGraph,
    automata: &[LearningAutomaton],
    s: usize,
    t: usize,
    cfg: &DlaConfig,
    rng: &mut R,
) -> EpisodeRecord {
    let cap = g.node_count() * cfg.visit_cap_multiplier;
    let mut path = vec![s];
    let mut length = 0.0;
    let mut cur = s;
    let outcome = loop {
        if cur == t {
            break Outcome::Reached;
        }
        let Some(a) = automata[cur].choose(rng) else {
            break Outcome::DeadEnd;
        };
        let next = automata[cur].actions[a];
        length += g.sample_edge(cur, next, rng).expect("automata mirror the graph");
        path.push(next);
        cur = next;
        if path.len() > cap {
            break Outcome::CapExceeded;
        }
    };
    EpisodeRecord {
        path,
        sampled_length: length,
        outcome,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicThreshold {
    mode: ThresholdMode,
    sum: f64,
    count: usize,
}

impl DynamicThreshold {
    pub fn new(mode: ThresholdMode) -> Self {
        DynamicThreshold { mode, sum: 0.0, count: 0 }
    }

    /// Running mean, or +inf before anything was recorded.
    pub fn value(&self) -> f64 {
        if self.count == 0 {
            f64::INFINITY
        } else {
            self.sum / self.count as f64
        }
    }

    pub fn record(&mut self, ep: &EpisodeRecord) {
        if ep.outcome == Outcome::Reached || self.mode == ThresholdMode::AllMean {
            self.sum += ep.sampled_length;
            self.count += 1;
        }
    }
}

/// Mean of a length history; +inf when empty.
pub fn dynamic_threshold(history: &[f64]) -> f64 {
    if history.is_empty() {
        f64::INFINITY
    } else {
        history.iter().sum::<f64>() / history.len() as f64
    }
}

/// Reward or penalise every automaton activated along `path`, source first.
pub fn dla_update(automata: &mut [LearningAutomaton], path: &[usize], signal: Signal, cfg: &DlaConfig) -> Result<()> {
    for w in path.windows(2) {
        let la = automata
            .get_mut(w[0])
            .ok_or_else(|| Error::InvalidUpdate(format!("no automaton for node {}", w[0])))?;
        let a = la
            .action_index(w[1])
            .ok_or_else(|| Error::InvalidUpdate(format!("node {} has no action to {}", w[0], w[1])))?;
        la.update(a, signal, cfg.reward_rate, cfg.penalty_rate)?;
    }
    Ok(())
}

/// Path obtained by always taking the most probable action, with the product
/// of the chosen probabilities. `None` if the walk dead-ends or revisits.
pub fn greedy_path(automata: &[LearningAutomaton], s: usize, t: usize) -> Option<(Vec<usize>, f64)> {
    let mut path = vec![s];
    let mut prob = 1.0;
    let mut seen = vec![false; automata.len()];
    seen[s] = true;
    let mut cur = s;
    while cur != t {
        let la = &automata[cur];
        let a = la.best()?;
        prob *= la.probs[a];
        cur = la.actions[a];
        if seen[cur] {
            return None;
        }
        seen[cur] = true;
        path.push(cur);
    }
    Some((path, prob))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub episode: usize,
    pub sampled_length: f64,
    pub threshold: f64,
    pub prob_best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlaSolution {
    /// Greedy path; cost is its exact expected length.
    pub path: PathResult,
    pub prob: f64,
    pub episodes: usize,
    pub converged: bool,
    pub automata: Vec<LearningAutomaton>,
    pub history: Vec<ConvergenceRow>,
}

impl DlaSolution {
    pub fn convergence_csv(&self) -> String {
        let mut s = String::from("episode,sampled_length,threshold,prob_best\n");
        for r in &self.history {
            writeln!(s, "{},{},{},{}", r.episode, r.sampled_length, r.threshold, r.prob_best).unwrap();
        }
        s
    }
}

/// Runs episodes until the greedy path's probability reaches the stop
/// threshold or the episode budget runs out.
pub fn dla_solve<R: Rng + ?Sized>(
    g: &StochasticGraph,
    s: usize,
    t: usize,
    cfg: &DlaConfig,
    rng: &mut R,
) -> Result<DlaSolution> {
    cfg.validate()?;
    let n = g.node_count();
    if s >= n || t >= n {
        return Err(Error::InvalidArgument("endpoint out of range".into()));
    }
    if s == t {
        return Err(Error::InvalidArgument("source and destination coincide".into()));
    }
    let mut automata = build_automata(g);
    let mut threshold = DynamicThreshold::new(cfg.threshold_mode);
    let mut history = Vec::new();
    let mut converged = false;
    let mut episodes = 0;
    while episodes < cfg.max_episodes {
        episodes += 1;
        let ep = dla_episode(g, &automata, s, t, cfg, rng);
        let before = threshold.value();
        let signal = if ep.outcome == Outcome::Reached && ep.sampled_length <= before {
            Signal::Reward
        } else {
            Signal::Penalty
        };
        threshold.record(&ep);
        dla_update(&mut automata, &ep.path, signal, cfg)?;
        let prob = greedy_path(&automata, s, t).map_or(0.0, |(_, p)| p);
        history.push(ConvergenceRow {
            episode: episodes,
            sampled_length: ep.sampled_length,
            threshold: before,
            prob_best: prob,
        });
        if prob >= cfg.stop_prob_threshold {
            converged = true;
            break;
        }
    }
    let (nodes, prob) = greedy_path(&automata, s, t).ok_or(Error::NoPath)?;
    let cost = g.expected_path_length(&nodes)?;
    Ok(DlaSolution {
        path: PathResult { nodes, cost },
        prob,
        episodes,
        converged,
        automata,
        history,
    })
}
