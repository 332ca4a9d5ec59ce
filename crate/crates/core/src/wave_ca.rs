//! Excitation-wave automaton for shortest paths on weighted oriented lattices.
//!
//! A source cell is excited at step 0. A quiescent cell that sees an excited
//! neighbour along a finite incoming edge of weight `w` starts counting down
//! from `w`, fires (becomes excited) one step after reaching 0, and is done
//! the step after that. Each cell remembers the direction the winning
//! excitation came from, so the pointers form a shortest-path tree.
//!
//! Each hop therefore costs `w + 2` steps: one to adopt the countdown and one
//! to fire. The arrival step of a cell is exactly its distance from the source
//! under [`Metric::HopDelay`](crate::graph::Metric::HopDelay), which is what
//! the tests check against Dijkstra.
//!
//! Updates are double-buffered: the next state of every cell is a pure
//! function of the previous configuration, so evaluating cells in parallel
//! gives bit-identical results.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Metric, PathResult, HOP_DELAY};
use crate::grid::{CellCoord, Direction, WeightedLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WavePhase {
    Quiescent,
    Countdown(u32),
    Excited,
    Done,
}

impl WavePhase {
    pub fn glyph(self) -> char {
        match self {
            WavePhase::Quiescent => '•',
            WavePhase::Countdown(v) => char::from_digit(v, 36).unwrap_or('*'),
            WavePhase::Excited => '+',
            WavePhase::Done => '−',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveCell {
    pub phase: WavePhase,
    /// Direction of the neighbour the excitation arrived from; `None` is λ.
    pub pointer: Option<Direction>,
}

impl WaveCell {
    pub const QUIESCENT: WaveCell = WaveCell {
        phase: WavePhase::Quiescent,
        pointer: None,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WaveOptions {
    /// Step budget; `None` uses [`default_max_steps`].
    pub max_steps: Option<usize>,
    pub parallel: bool,
}

/// `(nu + 2) * n + 2`: every arrival is bounded by `(nu + 2) * (n - 1)`.
pub fn default_max_steps(lat: &WeightedLattice) -> usize {
    (lat.nu() as usize + HOP_DELAY as usize) * lat.cell_count() + 2
}

/// A lattice together with the state of every cell at some step.
#[derive(Debug, Clone)]
pub struct WaveConfiguration<'a> {
    lattice: &'a WeightedLattice,
    cells: Vec<WaveCell>,
    scratch: Vec<WaveCell>,
    step: usize,
    parallel: bool,
}

impl<'a> WaveConfiguration<'a> {
    /// Step-0 configuration: `sources` excited, everything else quiescent.
    pub fn new(lattice: &'a WeightedLattice, sources: &[CellCoord]) -> Result<Self> {
        let mut cells = vec![WaveCell::QUIESCENT; lattice.cell_count()];
        for &s in sources {
            if !lattice.contains(s) {
                return Err(Error::InvalidArgument(format!("source {s} out of bounds")));
            }
            cells[lattice.index(s)].phase = WavePhase::Excited;
        }
        Self::from_cells(lattice, cells)
    }

    /// Starts from an arbitrary cell assignment.
    pub fn from_cells(lattice: &'a WeightedLattice, cells: Vec<WaveCell>) -> Result<Self> {
        if cells.len() != lattice.cell_count() {
            return Err(Error::InvalidArgument("cell count does not match lattice".into()));
        }
        if let Some(c) = cells.iter().find(|c| match c.phase {
            WavePhase::Countdown(v) => v > lattice.nu(),
            _ => false,
        }) {
            return Err(Error::InvalidArgument(format!("countdown {:?} exceeds nu", c.phase)));
        }
        Ok(WaveConfiguration {
            lattice,
            scratch: cells.clone(),
            cells,
            step: 0,
            parallel: false,
        })
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn lattice(&self) -> &WeightedLattice {
        self.lattice
    }

    pub fn cells(&self) -> &[WaveCell] {
        &self.cells
    }

    pub fn cell(&self, c: CellCoord) -> WaveCell {
        self.cells[self.lattice.index(c)]
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    /// No cell is excited or counting down, so nothing can change any more.
    pub fn is_frozen(&self) -> bool {
        self.cells
            .iter()
            .all(|c| matches!(c.phase, WavePhase::Quiescent | WavePhase::Done))
    }

    /// One synchronous update of every cell.
    pub fn advance(&mut self) {
        let lat = self.lattice;
        let cur = &self.cells;
        if self.parallel {
            self.scratch
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, out)| *out = next_cell(lat, cur, i));
        } else {
            for (i, out) in self.scratch.iter_mut().enumerate() {
                *out = next_cell(lat, cur, i);
            }
        }
        std::mem::swap(&mut self.cells, &mut self.scratch);
        self.step += 1;
    }

    pub fn pointer_field(&self) -> PointerField {
        PointerField {
            height: self.lattice.height(),
            width: self.lattice.width(),
            pointers: self.cells.iter().map(|c| c.pointer).collect(),
        }
    }
}

/// Functional form of [`WaveConfiguration::advance`].
pub fn wave_step<'a>(cfg: &WaveConfiguration<'a>) -> WaveConfiguration<'a> {
    let mut next = cfg.clone();
    next.advance();
    next
}

/// The excited in-neighbour with the smallest finite incoming weight, ties in
/// canonical direction order.
fn best_excited(lat: &WeightedLattice, cells: &[WaveCell], c: CellCoord) -> Option<(Direction, u32)> {
    let mut best: Option<(Direction, u32)> = None;
    for (d, y, w) in lat.incoming(c) {
        if cells[lat.index(y)].phase == WavePhase::Excited && best.is_none_or(|(_, bw)| w < bw) {
            best = Some((d, w));
        }
    }
    best
}

fn next_cell(lat: &WeightedLattice, cells: &[WaveCell], i: usize) -> WaveCell {
    let cell = cells[i];
    match cell.phase {
        WavePhase::Done | WavePhase::Excited => WaveCell {
            phase: WavePhase::Done,
            ..cell
        },
        WavePhase::Countdown(0) => WaveCell {
            phase: WavePhase::Excited,
            ..cell
        },
        WavePhase::Quiescent => match best_excited(lat, cells, lat.coord(i)) {
            Some((d, w)) => WaveCell {
                phase: WavePhase::Countdown(w),
                pointer: Some(d),
            },
            None => cell,
        },
        WavePhase::Countdown(v) => match best_excited(lat, cells, lat.coord(i)) {
            Some((d, w)) if w < v => WaveCell {
                phase: WavePhase::Countdown(w),
                pointer: Some(d),
            },
            _ => WaveCell {
                phase: WavePhase::Countdown(v - 1),
                ..cell
            },
        },
    }
}

/// Per-cell pointers of a finished run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointerField {
    pub height: usize,
    pub width: usize,
    pub pointers: Vec<Option<Direction>>,
}

impl PointerField {
    /// Follows pointers from `dest` back to `source`; the result runs from
    /// `source` to `dest`.
    pub fn backtrack(&self, source: CellCoord, dest: CellCoord) -> Result<Vec<CellCoord>> {
        let (h, w) = (self.height, self.width);
        if source.row >= h || source.col >= w || dest.row >= h || dest.col >= w {
            return Err(Error::InvalidArgument("endpoint out of bounds".into()));
        }
        let mut path = vec![dest];
        let mut cur = dest;
        while cur != source {
            let d = self.pointers[cur.row * w + cur.col].ok_or_else(|| {
                Error::CorruptPointerField(format!("unset pointer at {cur} before reaching {source}"))
            })?;
            cur = cur.step(d, h, w).ok_or_else(|| {
                Error::CorruptPointerField(format!("pointer at {cur} leaves the lattice"))
            })?;
            path.push(cur);
            if path.len() > h * w {
                return Err(Error::CorruptPointerField(format!("pointer cycle through {cur}")));
            }
        }
        path.reverse();
        Ok(path)
    }
}

/// Outcome of a single-source single-destination run.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveRoute {
    /// Row-major cell indices from source to destination; `cost` is the sum
    /// of raw lattice weights along them.
    pub path: PathResult,
    /// Step at which the destination fired.
    pub arrival: usize,
    /// Steps executed (the destination is done at this step).
    pub steps: usize,
}

impl WaveRoute {
    /// Path cost under `metric` (hop-delay adds two per hop).
    pub fn cost(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Raw => self.path.cost,
            Metric::HopDelay => {
                self.path.cost + HOP_DELAY as f64 * (self.path.nodes.len() - 1) as f64
            }
        }
    }
}

/// Raw-metric cost of a cell path through the lattice.
pub fn lattice_path_cost(lat: &WeightedLattice, path: &[CellCoord]) -> Result<f64> {
    path.windows(2).try_fold(0.0, |acc, p| {
        let (y, x) = (p[0], p[1]);
        lat.neighbors(x)
            .find(|&(_, n)| n == y)
            .and_then(|(d, _)| lat.weight(x, d).get())
            .map(|w| acc + w as f64)
            .ok_or_else(|| Error::InvalidPath(format!("no lattice edge {y} -> {x}")))
    })
}

/// Single-source single-destination shortest path. `observe` sees every
/// configuration from step 0 up to and including the halting step.
pub fn run_s3dsp_observed(
    lat: &WeightedLattice,
    source: CellCoord,
    dest: CellCoord,
    opts: WaveOptions,
    mut observe: impl FnMut(&WaveConfiguration<'_>),
) -> Result<WaveRoute> {
    if source == dest {
        return Err(Error::InvalidArgument("source and destination coincide".into()));
    }
    if !lat.contains(dest) {
        return Err(Error::InvalidArgument(format!("destination {dest} out of bounds")));
    }
    let max_steps = opts.max_steps.unwrap_or_else(|| default_max_steps(lat));
    let mut cfg = WaveConfiguration::new(lat, &[source])?.with_parallel(opts.parallel);
    observe(&cfg);
    loop {
        if cfg.cell(dest).phase == WavePhase::Excited {
            let arrival = cfg.step_count();
            cfg.advance();
            observe(&cfg);
            let cells = cfg.pointer_field().backtrack(source, dest)?;
            let cost = lattice_path_cost(lat, &cells)?;
            return Ok(WaveRoute {
                path: PathResult {
                    nodes: cells.iter().map(|&c| lat.index(c)).collect(),
                    cost,
                },
                arrival,
                steps: cfg.step_count(),
            });
        }
        if cfg.is_frozen() {
            return Err(Error::NoPath);
        }
        if cfg.step_count() >= max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        cfg.advance();
        observe(&cfg);
    }
}

pub fn run_s3dsp(
    lat: &WeightedLattice,
    source: CellCoord,
    dest: CellCoord,
    opts: WaveOptions,
) -> Result<WaveRoute> {
    run_s3dsp_observed(lat, source, dest, opts, |_| {})
}

/// Shortest-path tree from one source, read off a frozen lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub source: CellCoord,
    pub pointers: PointerField,
    /// Step at which each cell fired; `None` for unreached cells.
    pub arrival: Vec<Option<usize>>,
    /// Steps until the lattice froze.
    pub steps: usize,
}

impl ShortestPathTree {
    pub fn path_to(&self, dest: CellCoord) -> Result<Vec<CellCoord>> {
        if self.arrival[dest.row * self.pointers.width + dest.col].is_none() {
            return Err(Error::NoPath);
        }
        self.pointers.backtrack(self.source, dest)
    }
}

/// Runs from `source` until no cell is excited or counting down.
pub fn run_s3p(lat: &WeightedLattice, source: CellCoord, opts: WaveOptions) -> Result<ShortestPathTree> {
    let max_steps = opts.max_steps.unwrap_or_else(|| default_max_steps(lat));
    let mut cfg = WaveConfiguration::new(lat, &[source])?.with_parallel(opts.parallel);
    let mut arrival = vec![None; lat.cell_count()];
    loop {
        for (i, c) in cfg.cells().iter().enumerate() {
            if c.phase == WavePhase::Excited {
                arrival[i] = Some(cfg.step_count());
            }
        }
        if cfg.is_frozen() {
            break;
        }
        if cfg.step_count() >= max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        cfg.advance();
    }
    Ok(ShortestPathTree {
        source,
        pointers: cfg.pointer_field(),
        arrival,
        steps: cfg.step_count(),
    })
}

/// One single-source run per cell, in row-major source order. Sources are
/// independent, so they run concurrently when `opts.parallel` is set.
pub fn run_apsp(lat: &WeightedLattice, opts: WaveOptions) -> Result<Vec<ShortestPathTree>> {
    let run = |i: usize| run_s3p(lat, lat.coord(i), WaveOptions { parallel: false, ..opts });
    if opts.parallel {
        (0..lat.cell_count()).into_par_iter().map(run).collect()
    } else {
        (0..lat.cell_count()).map(run).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::grid::{Neighborhood, Weight};
    use crate::oracle::{dijkstra, floyd_warshall};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cc(r: usize, c: usize) -> CellCoord {
        CellCoord::new(r, c)
    }

    fn random_lattice(rng: &mut impl Rng, h: usize, w: usize, nu: u32, p_inf: f64) -> WeightedLattice {
        let mut lat = WeightedLattice::new(h, w, Neighborhood::VonNeumann4, nu).unwrap();
        for i in 0..h * w {
            let c = lat.coord(i);
            for (d, _) in crate::grid::neighbors(c, Neighborhood::VonNeumann4, h, w) {
                let wt = if rng.random_bool(p_inf) {
                    Weight::INF
                } else {
                    Weight::finite(rng.random_range(0..=nu))
                };
                lat.set_weight(c, d, wt).unwrap();
            }
        }
        lat
    }

    #[test]
    fn zero_weight_hand_trace() {
        let lat = WeightedLattice::uniform(3, 3, Neighborhood::VonNeumann4, 0, 0).unwrap();
        let src = cc(1, 1);
        let mut cfg = WaveConfiguration::new(&lat, &[src]).unwrap();
        cfg.advance();
        assert_eq!(cfg.cell(src).phase, WavePhase::Done);
        for (d, n) in lat.neighbors(src) {
            let cell = cfg.cell(n);
            assert_eq!(cell.phase, WavePhase::Countdown(0));
            assert_eq!(cell.pointer, Some(d.opposite()));
        }
        assert_eq!(cfg.cell(cc(0, 0)).phase, WavePhase::Quiescent);
        cfg.advance();
        for (_, n) in lat.neighbors(src) {
            assert_eq!(cfg.cell(n).phase, WavePhase::Excited);
        }
    }

    #[test]
    fn unit_weight_line_fires_at_step_three() {
        let mut lat = WeightedLattice::new(1, 3, Neighborhood::VonNeumann4, 1).unwrap();
        lat.set_weight(cc(0, 1), Direction::W, Weight::finite(1)).unwrap();
        lat.set_weight(cc(0, 2), Direction::W, Weight::finite(1)).unwrap();
        let mut cfg = WaveConfiguration::new(&lat, &[cc(0, 0)]).unwrap();
        let mut phases = vec![];
        for _ in 0..3 {
            cfg.advance();
            phases.push(cfg.cell(cc(0, 1)).phase);
        }
        assert_eq!(
            phases,
            [WavePhase::Countdown(1), WavePhase::Countdown(0), WavePhase::Excited]
        );
    }

    #[test]
    fn cheaper_excitation_restarts_countdown() {
        let mut lat = WeightedLattice::new(1, 3, Neighborhood::VonNeumann4, 3).unwrap();
        lat.set_weight(cc(0, 1), Direction::W, Weight::finite(3)).unwrap();
        lat.set_weight(cc(0, 1), Direction::E, Weight::finite(1)).unwrap();
        let cells = vec![
            WaveCell { phase: WavePhase::Done, pointer: None },
            WaveCell { phase: WavePhase::Countdown(2), pointer: Some(Direction::W) },
            WaveCell { phase: WavePhase::Excited, pointer: None },
        ];
        let cfg = WaveConfiguration::from_cells(&lat, cells).unwrap();
        let next = wave_step(&cfg);
        assert_eq!(
            next.cell(cc(0, 1)),
            WaveCell { phase: WavePhase::Countdown(1), pointer: Some(Direction::E) }
        );
        // an equal-or-heavier excitation does not interfere
        let cells = cfg.cells().to_vec();
        let mut heavier = lat.clone();
        heavier.set_weight(cc(0, 1), Direction::E, Weight::finite(2)).unwrap();
        let next = wave_step(&WaveConfiguration::from_cells(&heavier, cells).unwrap());
        assert_eq!(
            next.cell(cc(0, 1)),
            WaveCell { phase: WavePhase::Countdown(1), pointer: Some(Direction::W) }
        );
    }

    #[test]
    fn s3p_trivial_and_manhattan() {
        let lat = WeightedLattice::new(3, 3, Neighborhood::VonNeumann4, 0).unwrap();
        let tree = run_s3p(&lat, cc(0, 0), WaveOptions::default()).unwrap();
        assert_eq!(tree.arrival[0], Some(0));
        assert!(tree.arrival[1..].iter().all(Option::is_none));
        assert!(tree.pointers.pointers.iter().all(Option::is_none));

        let lat = WeightedLattice::uniform(5, 6, Neighborhood::VonNeumann4, 0, 0).unwrap();
        let src = cc(2, 1);
        let tree = run_s3p(&lat, src, WaveOptions::default()).unwrap();
        for i in 0..lat.cell_count() {
            let c = lat.coord(i);
            let m = c.row.abs_diff(src.row) + c.col.abs_diff(src.col);
            assert_eq!(tree.arrival[i], Some(2 * m));
        }
    }

    #[test]
    fn backtrack_cases() {
        let field = PointerField {
            height: 1,
            width: 4,
            pointers: vec![None, Some(Direction::W), Some(Direction::W), Some(Direction::W)],
        };
        assert_eq!(field.backtrack(cc(0, 0), cc(0, 0)).unwrap(), vec![cc(0, 0)]);
        assert_eq!(field.backtrack(cc(0, 0), cc(0, 3)).unwrap().len(), 4);

        let cyc = PointerField {
            height: 1,
            width: 3,
            pointers: vec![None, Some(Direction::E), Some(Direction::W)],
        };
        assert!(matches!(cyc.backtrack(cc(0, 0), cc(0, 2)), Err(Error::CorruptPointerField(_))));
        let lam = PointerField {
            height: 1,
            width: 3,
            pointers: vec![None, None, Some(Direction::W)],
        };
        assert!(matches!(lam.backtrack(cc(0, 0), cc(0, 2)), Err(Error::CorruptPointerField(_))));
    }

    #[test]
    fn s3dsp_zero_weight_lattice_is_linear() {
        let lat = WeightedLattice::uniform(4, 4, Neighborhood::VonNeumann4, 0, 0).unwrap();
        let r = run_s3dsp(&lat, cc(0, 0), cc(3, 3), WaveOptions::default()).unwrap();
        assert_eq!(r.arrival, 12);
        assert_eq!(r.steps, 13);
        assert!(r.steps <= 2 * lat.cell_count());
        assert_eq!(r.path.nodes.len(), 7);
        assert_eq!(r.path.cost, 0.0);
    }

    #[test]
    fn s3dsp_no_path_and_step_limit() {
        let lat = WeightedLattice::new(2, 2, Neighborhood::VonNeumann4, 0).unwrap();
        assert_eq!(
            run_s3dsp(&lat, cc(0, 0), cc(1, 1), WaveOptions::default()),
            Err(Error::NoPath)
        );
        let lat = WeightedLattice::uniform(1, 8, Neighborhood::VonNeumann4, 0, 0).unwrap();
        let opts = WaveOptions { max_steps: Some(5), parallel: false };
        assert_eq!(run_s3dsp(&lat, cc(0, 0), cc(0, 7), opts), Err(Error::StepLimit(5)));
    }

    #[test]
    fn arrival_matches_hop_delay_dijkstra() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..150 {
            let (h, w) = (rng.random_range(1..=8), rng.random_range(1..=8));
            let lat = random_lattice(&mut rng, h, w, 3, 0.25);
            let src = lat.coord(rng.random_range(0..lat.cell_count()));
            let tree = run_s3p(&lat, src, WaveOptions::default()).unwrap();
            let g = Graph::from_lattice(&lat, Metric::HopDelay);
            let table = dijkstra(&g, lat.index(src)).unwrap();
            for i in 0..lat.cell_count() {
                let expect = table.dist[i];
                match tree.arrival[i] {
                    Some(a) => {
                        assert_eq!(a as f64, expect);
                        let p = tree.path_to(lat.coord(i)).unwrap();
                        assert_eq!(p[0], src);
                        let nodes: Vec<usize> = p.iter().map(|&c| lat.index(c)).collect();
                        assert_eq!(g.path_cost(&nodes).unwrap(), expect);
                    }
                    None => assert_eq!(expect, f64::INFINITY),
                }
            }
            assert!(tree.steps <= default_max_steps(&lat));
        }
    }

    #[test]
    fn phase_monotonicity_and_pointer_freeze() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let lat = random_lattice(&mut rng, 6, 6, 3, 0.2);
            let mut cfg = WaveConfiguration::new(&lat, &[cc(0, 0)]).unwrap();
            let n = lat.cell_count();
            let mut history: Vec<Vec<WaveCell>> = vec![cfg.cells().to_vec()];
            while !cfg.is_frozen() {
                cfg.advance();
                history.push(cfg.cells().to_vec());
            }
            for i in 0..n {
                let seq: Vec<WaveCell> = history.iter().map(|s| s[i]).collect();
                let rank = |p: WavePhase| match p {
                    WavePhase::Quiescent => 0,
                    WavePhase::Countdown(_) => 1,
                    WavePhase::Excited => 2,
                    WavePhase::Done => 3,
                };
                for pair in seq.windows(2) {
                    assert!(rank(pair[0].phase) <= rank(pair[1].phase));
                    if matches!(pair[0].phase, WavePhase::Excited | WavePhase::Done) {
                        assert_eq!(pair[1].phase, WavePhase::Done);
                        assert_eq!(pair[0].pointer, pair[1].pointer);
                    }
                    if let WavePhase::Countdown(v) = pair[0].phase {
                        match pair[1].phase {
                            WavePhase::Countdown(u) => assert!(u < v),
                            WavePhase::Excited => assert_eq!(v, 0),
                            p => panic!("countdown went to {p:?}"),
                        }
                    }
                    if pair[0].phase == WavePhase::Countdown(0) {
                        assert_eq!(pair[0].pointer, pair[1].pointer);
                    }
                }
                let excited = seq.iter().filter(|c| c.phase == WavePhase::Excited).count();
                assert!(excited <= 1);
            }
        }
    }

    #[test]
    fn parallel_step_is_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let lat = random_lattice(&mut rng, 12, 12, 3, 0.2);
        let mut a = WaveConfiguration::new(&lat, &[cc(0, 0), cc(7, 5)]).unwrap();
        let mut b = a.clone().with_parallel(true);
        for _ in 0..60 {
            a.advance();
            b.advance();
            assert_eq!(a.cells(), b.cells());
        }
    }

    #[test]
    fn apsp_matches_floyd_warshall() {
        let lat = WeightedLattice::uniform(2, 2, Neighborhood::VonNeumann4, 0, 0).unwrap();
        let trees = run_apsp(&lat, WaveOptions::default()).unwrap();
        assert_eq!(trees.len(), 4);
        for t in &trees {
            for i in 0..4 {
                assert_eq!(t.path_to(lat.coord(i)).unwrap()[0], t.source);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(66);
        for _ in 0..10 {
            let lat = random_lattice(&mut rng, 6, 6, 3, 0.3);
            let fw = floyd_warshall(&Graph::from_lattice(&lat, Metric::HopDelay)).unwrap();
            let trees = run_apsp(&lat, WaveOptions { max_steps: None, parallel: true }).unwrap();
            for (s, t) in trees.iter().enumerate() {
                for j in 0..lat.cell_count() {
                    assert_eq!(t.arrival[j].map_or(f64::INFINITY, |a| a as f64), fw[s][j]);
                }
            }
        }

        // the right column has no incoming edges at all
        let mut lat = WeightedLattice::uniform(3, 3, Neighborhood::VonNeumann4, 0, 0).unwrap();
        for r in 0..3 {
            for &d in &Direction::CARDINAL {
                lat.set_weight(cc(r, 2), d, Weight::INF).unwrap();
            }
        }
        for t in run_apsp(&lat, WaveOptions::default()).unwrap() {
            for r in 0..3 {
                if t.source != cc(r, 2) {
                    assert_eq!(t.pointers.pointers[r * 3 + 2], None);
                }
            }
        }
    }
}
