//! Scenario runner: reads one input file, runs one solver and writes
//! `result.json`, optional frames and an optional CSV trace to a directory.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use cellpath::dla::{dla_solve, DlaConfig};
use cellpath::frame::{emit_frame, FrameFormat, Snapshot};
use cellpath::graph_ca::graph_ca_fixed_point;
use cellpath::lee_ca::{lee_route_observed, LeeGrid};
use cellpath::oracle::{bfs_distances, dijkstra, enumerate_simple_paths, MAX_ENUMERATION_HOPS};
use cellpath::physarum::{solve_maze_observed, PhysarumParams};
use cellpath::wave_ca::{run_s3dsp_observed, WaveOptions};
use cellpath::{
    CellCoord, Error, Graph, MazeCell, MazeGrid, Metric, Neighborhood, StochasticGraph, WeightedLattice,
};
use clap::{Parser, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_PATH: i32 = 2;

pub type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Wave,
    Lee,
    GraphCa,
    Dla,
    Physarum,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Wave => "wave",
            Algorithm::Lee => "lee",
            Algorithm::GraphCa => "graph-ca",
            Algorithm::Dla => "dla",
            Algorithm::Physarum => "physarum",
            Algorithm::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Raw,
    #[value(name = "hop_delay", alias = "hop-delay")]
    HopDelay,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Raw => Metric::Raw,
            MetricArg::HopDelay => Metric::HopDelay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    None,
    Ascii,
    Pgm,
}

impl EmitArg {
    fn format(self) -> Option<FrameFormat> {
        match self {
            EmitArg::None => None,
            EmitArg::Ascii => Some(FrameFormat::Ascii),
            EmitArg::Pgm => Some(FrameFormat::Pgm),
        }
    }
}

/// A cell `R,C` or a graph node id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Cell(CellCoord),
    Node(usize),
}

impl FromStr for Endpoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad endpoint `{s}`"));
        match s.split_once(',') {
            Some((r, c)) => Ok(Endpoint::Cell(CellCoord::new(num(r)?, num(c)?))),
            None => Ok(Endpoint::Node(num(s)?)),
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Cell(c) => write!(f, "{},{}", c.row, c.col),
            Endpoint::Node(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "cellpath", version, about = "Cellular-automaton shortest-path solvers")]
pub struct ScenarioConfig {
    #[arg(long = "algo", value_enum)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub input: PathBuf,
    /// `R,C` for lattices and mazes, a node id for graphs.
    #[arg(long)]
    pub source: Option<Endpoint>,
    #[arg(long)]
    pub dest: Option<Endpoint>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Step budget; episodes for dla.
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long, value_enum, default_value = "hop_delay")]
    pub metric: MetricArg,
    #[arg(long = "emit-frames", value_enum, default_value = "none")]
    pub emit: EmitArg,
    /// Write every N-th frame.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub every: u64,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Run the matching oracle and report agreement.
    #[arg(long)]
    pub verify: bool,
    /// Evaluate cells in parallel; results are identical to serial runs.
    #[arg(long)]
    pub parallel: bool,
}

impl ScenarioConfig {
    pub fn new(algorithm: Algorithm, input: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        ScenarioConfig {
            algorithm,
            input: input.into(),
            source: None,
            dest: None,
            seed: None,
            max_steps: None,
            metric: MetricArg::HopDelay,
            emit: EmitArg::None,
            every: 1,
            out: out.into(),
            verify: false,
            parallel: false,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.algorithm == Algorithm::Dla && self.seed.is_none() {
            return Err(invalid("dla requires --seed"));
        }
        if self.emit != EmitArg::None
            && matches!(self.algorithm, Algorithm::GraphCa | Algorithm::Dla | Algorithm::Oracle)
        {
            return Err(Error::UnsupportedFormat(format!("{} has no cell frames", self.algorithm.name())).into());
        }
        Ok(())
    }
}

fn invalid(msg: impl Into<String>) -> Box<dyn std::error::Error + Send + Sync> {
    Error::InvalidArgument(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Lattice(WeightedLattice),
    Graph(Graph),
    Stochastic(StochasticGraph),
    Maze(MazeGrid),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Lattice(_) => "lattice",
            Input::Graph(_) => "graph",
            Input::Stochastic(_) => "stochastic_graph",
            Input::Maze(_) => "maze",
        }
    }
}

/// Picks the format from the text itself. A first line made only of maze
/// glyphs is a maze; otherwise comment lines are skipped and a four-token
/// header means a lattice, a lone node count a graph, and edge lines longer
/// than three tokens a stochastic graph.
pub fn sniff_input(text: &str) -> CliResult<Input> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if !first.is_empty() && first.chars().all(|c| MazeCell::from_glyph(c).is_some()) {
        return Ok(Input::Maze(cellpath::parse_maze(text)?));
    }
    let mut content = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = content.next().unwrap_or("").split_whitespace().collect();
    match header.len() {
        4 => Ok(Input::Lattice(WeightedLattice::parse(text)?)),
        1 => match content.next().map(|l| l.split_whitespace().count()) {
            Some(k) if k > 3 => Ok(Input::Stochastic(StochasticGraph::parse(text)?)),
            _ => Ok(Input::Graph(Graph::parse(text)?)),
        },
        _ => Ok(Input::Maze(cellpath::parse_maze(text)?)),
    }
}

/// What a run produced; turned into `result.json`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub algorithm: Algorithm,
    pub input_kind: &'static str,
    pub metric: Option<Metric>,
    pub seed: Option<u64>,
    pub found: bool,
    pub path: Vec<usize>,
    pub cells: Option<Vec<CellCoord>>,
    pub cost: Option<f64>,
    pub steps: Option<usize>,
    pub oracle_cost: Option<f64>,
    pub oracle_match: Option<bool>,
    pub error: Option<String>,
    pub details: Map<String, Value>,
}

impl Report {
    fn new(cfg: &ScenarioConfig, input: &Input) -> Self {
        Report {
            algorithm: cfg.algorithm,
            input_kind: input.kind(),
            metric: None,
            seed: cfg.seed,
            found: false,
            path: Vec::new(),
            cells: None,
            cost: None,
            steps: None,
            oracle_cost: None,
            oracle_match: None,
            error: None,
            details: Map::new(),
        }
    }

    fn no_path(&mut self) {
        self.found = false;
        self.error = Some(Error::NoPath.to_string());
    }

    pub fn exit_code(&self) -> i32 {
        if self.found {
            EXIT_FOUND
        } else {
            EXIT_NO_PATH
        }
    }

    pub fn to_json(&self) -> Value {
        let num = |x: Option<f64>| match x {
            Some(v) if v.is_finite() => json!(v),
            _ => Value::Null,
        };
        let mut m = Map::new();
        m.insert("algorithm".into(), json!(self.algorithm.name()));
        m.insert("input_kind".into(), json!(self.input_kind));
        m.insert("metric".into(), self.metric.map_or(Value::Null, |x| json!(x.name())));
        m.insert("seed".into(), self.seed.map_or(Value::Null, |s| json!(s)));
        m.insert("found".into(), json!(self.found));
        m.insert("path".into(), json!(self.path));
        m.insert(
            "cells".into(),
            self.cells
                .as_ref()
                .map_or(Value::Null, |cs| cs.iter().map(|c| json!([c.row, c.col])).collect()),
        );
        m.insert("cost".into(), num(self.cost));
        m.insert("steps".into(), self.steps.map_or(Value::Null, |s| json!(s)));
        m.insert("oracle_cost".into(), num(self.oracle_cost));
        m.insert("oracle_match".into(), self.oracle_match.map_or(Value::Null, |b| json!(b)));
        m.insert("error".into(), self.error.as_ref().map_or(Value::Null, |e| json!(e)));
        m.insert("details".into(), Value::Object(self.details.clone()));
        Value::Object(m)
    }
}

/// Writes frames as `frames/frame_NNNNN.ext`; the first write error is kept
/// and reported once the solver returns.
struct FrameSink {
    dir: PathBuf,
    format: Option<FrameFormat>,
    every: usize,
    error: Option<Box<dyn std::error::Error + Send + Sync>>,
}

impl FrameSink {
    fn new(cfg: &ScenarioConfig) -> CliResult<Self> {
        let dir = cfg.out.join("frames");
        if cfg.emit != EmitArg::None {
            fs::create_dir_all(&dir)?;
        }
        Ok(FrameSink { dir, format: cfg.emit.format(), every: cfg.every as usize, error: None })
    }

    fn put(&mut self, step: usize, snapshot: Snapshot<'_>) {
        let Some(format) = self.format else { return };
        if self.error.is_some() || !step.is_multiple_of(self.every) {
            return;
        }
        let path = self.dir.join(format!("frame_{step:05}.{}", format.extension()));
        let res = emit_frame(snapshot, format)
            .map_err(Into::into)
            .and_then(|bytes| fs::write(&path, bytes).map_err(Into::into));
        if let Err(e) = res {
            self.error = Some(e);
        }
    }

    fn finish(self) -> CliResult<()> {
        self.error.map_or(Ok(()), Err)
    }
}

fn cell_endpoint(e: Option<Endpoint>, what: &str) -> CliResult<Option<CellCoord>> {
    match e {
        None => Ok(None),
        Some(Endpoint::Cell(c)) => Ok(Some(c)),
        Some(Endpoint::Node(_)) => Err(invalid(format!("{what} must be given as R,C"))),
    }
}

fn node_endpoint(e: Option<Endpoint>, what: &str) -> CliResult<usize> {
    match e {
        Some(Endpoint::Node(n)) => Ok(n),
        Some(Endpoint::Cell(_)) => Err(invalid(format!("{what} must be a node id"))),
        None => Err(invalid(format!("--{what} is required for graph inputs"))),
    }
}

/// Replaces the endpoint markers of kind `kind` with a single one at `at`.
fn place_marker(maze: &mut MazeGrid, kind: MazeCell, at: CellCoord) -> CliResult<()> {
    if at.row >= maze.height() || at.col >= maze.width() {
        return Err(invalid(format!("{at} out of bounds")));
    }
    for c in maze.find(kind) {
        maze.set(c, MazeCell::Free);
    }
    maze.set(at, kind);
    Ok(())
}

fn expect_lattice(input: &Input, algo: Algorithm) -> CliResult<&WeightedLattice> {
    match input {
        Input::Lattice(l) => Ok(l),
        other => Err(invalid(format!("{} needs a lattice, got a {}", algo.name(), other.kind()))),
    }
}

fn expect_maze(input: &Input, algo: Algorithm) -> CliResult<MazeGrid> {
    match input {
        Input::Maze(m) => Ok(m.clone()),
        other => Err(invalid(format!("{} needs a maze, got a {}", algo.name(), other.kind()))),
    }
}

/// Runs one scenario and writes its output tree. `Ok` carries the report
/// for both found and NoPath outcomes; anything else is an error.
pub fn run_scenario(cfg: &ScenarioConfig) -> CliResult<Report> {
    cfg.validate()?;
    let text = fs::read_to_string(&cfg.input)
        .map_err(|e| format!("cannot read {}: {e}", cfg.input.display()))?;
    let input = sniff_input(&text)?;
    fs::create_dir_all(&cfg.out)?;
    let mut report = Report::new(cfg, &input);
    match cfg.algorithm {
        Algorithm::Wave => run_wave(cfg, &input, &mut report)?,
        Algorithm::Lee => run_lee(cfg, &input, &mut report)?,
        Algorithm::GraphCa => run_graph_ca(cfg, &input, &mut report)?,
        Algorithm::Dla => run_dla(cfg, &input, &mut report)?,
        Algorithm::Physarum => run_physarum(cfg, &input, &mut report)?,
        Algorithm::Oracle => run_oracle(cfg, &input, &mut report)?,
    }
    let mut body = serde_json::to_string_pretty(&report.to_json())?;
    body.push('\n');
    fs::write(cfg.out.join("result.json"), body)?;
    Ok(report)
}

fn agree(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x == y,
        (None, None) => true,
        _ => false,
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn run_wave(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    let lat = expect_lattice(input, cfg.algorithm)?;
    let src = cell_endpoint(cfg.source, "source")?.ok_or_else(|| invalid("--source is required"))?;
    let dst = cell_endpoint(cfg.dest, "dest")?.ok_or_else(|| invalid("--dest is required"))?;
    let metric = Metric::from(cfg.metric);
    r.metric = Some(metric);
    let mut sink = FrameSink::new(cfg)?;
    let opts = WaveOptions { max_steps: cfg.max_steps, parallel: cfg.parallel };
    let res = run_s3dsp_observed(lat, src, dst, opts, |c| sink.put(c.step_count(), Snapshot::Wave(c)));
    sink.finish()?;
    match res {
        Ok(route) => {
            r.found = true;
            r.cells = Some(route.path.nodes.iter().map(|&i| lat.coord(i)).collect());
            r.path = route.path.nodes.clone();
            r.cost = Some(route.cost(metric));
            r.steps = Some(route.steps);
            r.details.insert("arrival".into(), json!(route.arrival));
            r.details.insert("raw_cost".into(), json!(route.cost(Metric::Raw)));
            r.details.insert("hop_delay_cost".into(), json!(route.cost(Metric::HopDelay)));
        }
        Err(Error::NoPath) => r.no_path(),
        Err(e) => return Err(e.into()),
    }
    if cfg.verify {
        let table = dijkstra(&Graph::from_lattice(lat, metric), lat.index(src))?;
        r.oracle_cost = finite(table.dist[lat.index(dst)]);
        r.oracle_match = Some(agree(r.cost, r.oracle_cost));
    }
    Ok(())
}

fn run_lee(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    let mut maze = expect_maze(input, cfg.algorithm)?;
    if let Some(c) = cell_endpoint(cfg.source, "source")? {
        place_marker(&mut maze, MazeCell::Source, c)?;
    }
    if let Some(c) = cell_endpoint(cfg.dest, "dest")? {
        place_marker(&mut maze, MazeCell::Dest, c)?;
    }
    let grid = LeeGrid::from_maze(&maze)?;
    let mut sink = FrameSink::new(cfg)?;
    let res = lee_route_observed(&grid, cfg.max_steps, cfg.parallel, |g| sink.put(g.step_count(), Snapshot::Lee(g)));
    sink.finish()?;
    match res {
        Ok(route) => {
            r.found = true;
            r.cells = Some(route.path.nodes.iter().map(|&i| maze.coord(i)).collect());
            r.path = route.path.nodes.clone();
            r.cost = Some(route.path.cost);
            r.steps = Some(route.clean_step);
            r.details.insert("ready_step".into(), json!(route.ready_step));
            r.details.insert("clean_step".into(), json!(route.clean_step));
        }
        Err(Error::NoPath) => r.no_path(),
        Err(e) => return Err(e.into()),
    }
    if cfg.verify {
        let (s, t) = (maze.unique(MazeCell::Source)?, maze.unique(MazeCell::Dest)?);
        r.oracle_cost = bfs_distances(&maze, s, Neighborhood::VonNeumann4)[maze.index(t)].map(|d| d as f64);
        r.oracle_match = Some(agree(r.cost, r.oracle_cost));
    }
    Ok(())
}

fn run_graph_ca(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    let Input::Graph(g) = input else {
        return Err(invalid(format!("graph-ca needs a graph, got a {}", input.kind())));
    };
    let (s, t) = (node_endpoint(cfg.source, "source")?, node_endpoint(cfg.dest, "dest")?);
    if t >= g.node_count() {
        return Err(invalid(format!("destination {t} out of range")));
    }
    if s == t {
        return Err(invalid("source and destination coincide"));
    }
    let run = graph_ca_fixed_point(g, s, cfg.parallel)?;
    fs::write(cfg.out.join("trace.csv"), run.to_csv())?;
    r.steps = Some(run.steps);
    match run.path_to(t) {
        Ok(p) => {
            r.found = true;
            r.cost = Some(p.cost);
            r.path = p.nodes;
        }
        Err(Error::NoPath) => r.no_path(),
        Err(e) => return Err(e.into()),
    }
    if cfg.verify {
        r.oracle_cost = finite(dijkstra(g, s)?.dist[t]);
        r.oracle_match = Some(agree(r.cost, r.oracle_cost));
    }
    Ok(())
}

/// Best simple path by exact expected length, by exhaustive enumeration.
pub fn min_expected_path(g: &StochasticGraph, s: usize, t: usize) -> CliResult<Option<(Vec<usize>, f64)>> {
    let hops = g.node_count().saturating_sub(1).min(MAX_ENUMERATION_HOPS);
    let mut best: Option<(Vec<usize>, f64)> = None;
    for p in enumerate_simple_paths(g, s, t, hops)? {
        let len = g.expected_path_length(&p)?;
        if best.as_ref().is_none_or(|(_, b)| len < *b) {
            best = Some((p, len));
        }
    }
    Ok(best)
}

fn run_dla(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    let Input::Stochastic(g) = input else {
        return Err(invalid(format!("dla needs a stochastic graph, got a {}", input.kind())));
    };
    let (s, t) = (node_endpoint(cfg.source, "source")?, node_endpoint(cfg.dest, "dest")?);
    let mut dcfg = DlaConfig::default();
    if let Some(m) = cfg.max_steps {
        dcfg.max_episodes = m;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.expect("validated"));
    match dla_solve(g, s, t, &dcfg, &mut rng) {
        Ok(sol) => {
            fs::write(cfg.out.join("convergence.csv"), sol.convergence_csv())?;
            r.found = true;
            r.cost = Some(sol.path.cost);
            r.path = sol.path.nodes.clone();
            r.steps = Some(sol.episodes);
            r.details.insert("prob".into(), json!(sol.prob));
            r.details.insert("converged".into(), json!(sol.converged));
        }
        Err(Error::NoPath) => r.no_path(),
        Err(e) => return Err(e.into()),
    }
    if cfg.verify {
        let best = min_expected_path(g, s, t)?;
        r.oracle_cost = best.as_ref().map(|b| b.1);
        r.oracle_match = Some(match (&best, r.found) {
            (Some((p, _)), true) => *p == r.path,
            (None, false) => true,
            _ => false,
        });
    }
    Ok(())
}

fn run_physarum(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    let mut maze = expect_maze(input, cfg.algorithm)?;
    if let Some(c) = cell_endpoint(cfg.source, "source")? {
        place_marker(&mut maze, MazeCell::Source, c)?;
    }
    if let Some(c) = cell_endpoint(cfg.dest, "dest")? {
        for d in maze.find(MazeCell::Dest) {
            maze.set(d, MazeCell::Free);
        }
        place_marker(&mut maze, MazeCell::Food, c)?;
    }
    let mut params = PhysarumParams::default();
    if let Some(m) = cfg.max_steps {
        params.max_steps = m;
    }
    let mut sink = FrameSink::new(cfg)?;
    let res = solve_maze_observed(&maze, &params, cfg.parallel, |step, f| sink.put(step, Snapshot::Physarum(f)));
    sink.finish()?;
    match res {
        Ok(sol) => {
            r.found = true;
            r.cells = Some(sol.path.nodes.iter().map(|&i| maze.coord(i)).collect());
            r.path = sol.path.nodes.clone();
            r.cost = Some(sol.path.cost);
            r.steps = Some(sol.steps);
            r.details.insert("total_mass".into(), json!(sol.field.total_mass()));
        }
        Err(Error::NoTube(_)) => r.no_path(),
        Err(e) => return Err(e.into()),
    }
    if cfg.verify {
        let oracle = maze_oracle(&maze, Neighborhood::Moore8)?;
        r.oracle_cost = oracle.map(|(_, d)| d as f64);
        r.oracle_match = Some(agree(r.cost, r.oracle_cost));
        if let (Some(c), Some(o)) = (r.cost, r.oracle_cost) {
            r.details.insert("within_tolerance".into(), json!(c <= 1.1 * o));
        }
    }
    Ok(())
}

/// BFS route from the source to the nearest target cell (`F` or `E`).
fn maze_oracle(maze: &MazeGrid, scheme: Neighborhood) -> CliResult<Option<(Vec<CellCoord>, usize)>> {
    let s = maze.unique(MazeCell::Source)?;
    let targets: Vec<CellCoord> = [MazeCell::Food, MazeCell::Dest].iter().flat_map(|&k| maze.find(k)).collect();
    if targets.is_empty() {
        return Err(invalid("maze has no food or end cell"));
    }
    let from_s = bfs_distances(maze, s, scheme);
    let Some((t, d)) = targets
        .iter()
        .filter_map(|&t| from_s[maze.index(t)].map(|d| (t, d)))
        .min_by_key(|&(t, d)| (d, maze.index(t)))
    else {
        return Ok(None);
    };
    let from_t = bfs_distances(maze, t, scheme);
    let mut route = vec![s];
    let mut cur = s;
    for k in (0..d).rev() {
        cur = maze
            .neighbors(cur, scheme)
            .map(|(_, c)| c)
            .find(|&c| from_t[maze.index(c)] == Some(k))
            .expect("BFS layers are consistent");
        route.push(cur);
    }
    Ok(Some((route, d)))
}

fn run_oracle(cfg: &ScenarioConfig, input: &Input, r: &mut Report) -> CliResult<()> {
    match input {
        Input::Lattice(lat) => {
            let src = cell_endpoint(cfg.source, "source")?.ok_or_else(|| invalid("--source is required"))?;
            let dst = cell_endpoint(cfg.dest, "dest")?.ok_or_else(|| invalid("--dest is required"))?;
            if !lat.contains(src) || !lat.contains(dst) {
                return Err(invalid("endpoint out of bounds"));
            }
            let metric = Metric::from(cfg.metric);
            r.metric = Some(metric);
            let table = dijkstra(&Graph::from_lattice(lat, metric), lat.index(src))?;
            if let Some(p) = table.path_to(lat.index(dst)) {
                r.found = true;
                r.cells = Some(p.iter().map(|&i| lat.coord(i)).collect());
                r.cost = Some(table.dist[lat.index(dst)]);
                r.path = p;
            }
        }
        Input::Graph(g) => {
            let (s, t) = (node_endpoint(cfg.source, "source")?, node_endpoint(cfg.dest, "dest")?);
            if t >= g.node_count() {
                return Err(invalid(format!("destination {t} out of range")));
            }
            let table = dijkstra(g, s)?;
            if let Some(p) = table.path_to(t) {
                r.found = true;
                r.cost = Some(table.dist[t]);
                r.path = p;
            }
        }
        Input::Stochastic(g) => {
            let (s, t) = (node_endpoint(cfg.source, "source")?, node_endpoint(cfg.dest, "dest")?);
            if let Some((p, len)) = min_expected_path(g, s, t)? {
                r.found = true;
                r.cost = Some(len);
                r.path = p;
            }
        }
        Input::Maze(m) => {
            let mut maze = m.clone();
            if let Some(c) = cell_endpoint(cfg.source, "source")? {
                place_marker(&mut maze, MazeCell::Source, c)?;
            }
            if let Some(c) = cell_endpoint(cfg.dest, "dest")? {
                for k in [MazeCell::Food, MazeCell::Dest] {
                    for d in maze.find(k) {
                        maze.set(d, MazeCell::Free);
                    }
                }
                place_marker(&mut maze, MazeCell::Dest, c)?;
            }
            // food mazes are walked with diagonals, Lee mazes without
            let scheme = if maze.find(MazeCell::Food).is_empty() {
                Neighborhood::VonNeumann4
            } else {
                Neighborhood::Moore8
            };
            r.details.insert("neighborhood".into(), json!(scheme.name()));
            if let Some((cells, d)) = maze_oracle(&maze, scheme)? {
                r.found = true;
                r.path = cells.iter().map(|&c| maze.index(c)).collect();
                r.cells = Some(cells);
                r.cost = Some(d as f64);
            }
        }
    }
    if !r.found {
        r.no_path();
    }
    Ok(())
}

/// Exit status for a finished run, printing errors to standard error.
pub fn exit_status(res: &CliResult<Report>) -> i32 {
    match res {
        Ok(r) => r.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
