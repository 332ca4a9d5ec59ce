//! Python module `cellpath`: input formats, the five solvers and their
//! oracles. Solvers return `None` when no path exists and raise
//! `ValueError` for anything else that goes wrong.

use cellpath::dla::{dla_solve, DlaConfig};
use cellpath::graph_ca::graph_ca_run;
use cellpath::lee_ca::{lee_route, LeeGrid};
use cellpath::oracle::{bfs_distances, dijkstra};
use cellpath::physarum::{solve_maze, PhysarumParams, MAZE_50X50};
use cellpath::wave_ca::{run_s3dsp, WaveOptions};
use cellpath::{CellCoord, Error, Metric, Neighborhood};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `Ok(None)` for NoPath-like outcomes.
fn optional<T>(r: cellpath::Result<T>) -> PyResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoPath | Error::NoTube(_)) => Ok(None),
        Err(e) => Err(py_err(e)),
    }
}

fn cell((row, col): (usize, usize)) -> CellCoord {
    CellCoord::new(row, col)
}

#[pyclass(frozen, module = "cellpath")]
pub struct Lattice(cellpath::WeightedLattice);

#[pymethods]
impl Lattice {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cellpath::WeightedLattice::parse(text).map(Lattice).map_err(py_err)
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(frozen, module = "cellpath")]
pub struct Graph(cellpath::Graph);

#[pymethods]
impl Graph {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cellpath::Graph::parse(text).map(Graph).map_err(py_err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(frozen, module = "cellpath")]
pub struct StochasticGraph(cellpath::StochasticGraph);

#[pymethods]
impl StochasticGraph {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cellpath::StochasticGraph::parse(text).map(StochasticGraph).map_err(py_err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    fn expected_path_length(&self, path: Vec<usize>) -> PyResult<f64> {
        self.0.expected_path_length(&path).map_err(py_err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(frozen, module = "cellpath")]
pub struct Maze(cellpath::MazeGrid);

#[pymethods]
impl Maze {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cellpath::parse_maze(text).map(Maze).map_err(py_err)
    }

    /// The bundled 50x50 slime-mould maze.
    #[staticmethod]
    fn reference() -> Self {
        Maze(cellpath::parse_maze(MAZE_50X50).expect("bundled maze parses"))
    }

    #[getter]
    fn height(&self) -> usize {
        self.0.height()
    }

    #[getter]
    fn width(&self) -> usize {
        self.0.width()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Maze({}x{})", self.0.height(), self.0.width())
    }
}

/// A solver's answer. `nodes` are node ids, or row-major cell indices on
/// grids; `cells` holds `(row, col)` pairs for grid solvers.
#[pyclass(frozen, get_all, module = "cellpath")]
pub struct Route {
    nodes: Vec<usize>,
    cells: Option<Vec<(usize, usize)>>,
    cost: f64,
    steps: usize,
}

#[pymethods]
impl Route {
    fn __len__(&self) -> usize {
        self.nodes.len()
    }

    fn __repr__(&self) -> String {
        format!("Route(hops={}, cost={}, steps={})", self.nodes.len().saturating_sub(1), self.cost, self.steps)
    }
}

fn grid_route(nodes: Vec<usize>, width: usize, cost: f64, steps: usize) -> Route {
    let cells = nodes.iter().map(|&i| (i / width, i % width)).collect();
    Route { nodes, cells: Some(cells), cost, steps }
}

fn parse_metric(metric: &str) -> PyResult<Metric> {
    metric.parse().map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (lattice, source, dest, metric = "hop_delay", max_steps = None, parallel = false))]
fn wave_route(
    py: Python<'_>,
    lattice: &Lattice,
    source: (usize, usize),
    dest: (usize, usize),
    metric: &str,
    max_steps: Option<usize>,
    parallel: bool,
) -> PyResult<Option<Route>> {
    let metric = parse_metric(metric)?;
    let lat = &lattice.0;
    let opts = WaveOptions { max_steps, parallel };
    let r = py.detach(|| run_s3dsp(lat, cell(source), cell(dest), opts));
    Ok(optional(r)?.map(|w| grid_route(w.path.nodes.clone(), lat.width(), w.cost(metric), w.steps)))
}

#[pyfunction]
#[pyo3(signature = (maze, max_steps = None, parallel = false))]
fn lee(py: Python<'_>, maze: &Maze, max_steps: Option<usize>, parallel: bool) -> PyResult<Option<Route>> {
    let grid = LeeGrid::from_maze(&maze.0).map_err(py_err)?;
    let r = py.detach(|| lee_route(&grid, max_steps, parallel));
    Ok(optional(r)?.map(|l| grid_route(l.path.nodes, maze.0.width(), l.path.cost, l.clean_step)))
}

#[pyfunction]
#[pyo3(signature = (graph, source, dest, parallel = false))]
fn graph_ca(py: Python<'_>, graph: &Graph, source: usize, dest: usize, parallel: bool) -> PyResult<Option<Route>> {
    let r = py.detach(|| graph_ca_run(&graph.0, source, dest, parallel));
    Ok(optional(r)?.map(|(p, run)| Route { nodes: p.nodes, cells: None, cost: p.cost, steps: run.steps }))
}

#[pyfunction]
#[pyo3(signature = (graph, source, dest, seed, reward_rate = 0.05, penalty_rate = 0.0, max_episodes = 20_000))]
#[allow(clippy::too_many_arguments)]
fn dla(
    py: Python<'_>,
    graph: &StochasticGraph,
    source: usize,
    dest: usize,
    seed: u64,
    reward_rate: f64,
    penalty_rate: f64,
    max_episodes: usize,
) -> PyResult<Option<Route>> {
    let cfg = DlaConfig { reward_rate, penalty_rate, max_episodes, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = py.detach(|| dla_solve(&graph.0, source, dest, &cfg, &mut rng));
    Ok(optional(r)?.map(|s| Route { nodes: s.path.nodes, cells: None, cost: s.path.cost, steps: s.episodes }))
}

#[pyfunction]
#[pyo3(signature = (maze, max_steps = 2000, parallel = false))]
fn physarum(py: Python<'_>, maze: &Maze, max_steps: usize, parallel: bool) -> PyResult<Option<Route>> {
    let params = PhysarumParams { max_steps, ..Default::default() };
    let r = py.detach(|| solve_maze(&maze.0, &params, parallel));
    Ok(optional(r)?.map(|s| grid_route(s.path.nodes, maze.0.width(), s.path.cost, s.steps)))
}

/// Distances from `source`; unreachable nodes get `inf`.
#[pyfunction]
fn shortest_distances(graph: &Graph, source: usize) -> PyResult<Vec<f64>> {
    dijkstra(&graph.0, source).map(|t| t.dist).map_err(py_err)
}

/// Hop distances from `start` through open cells; `None` where unreachable.
#[pyfunction]
#[pyo3(signature = (maze, start, diagonal = false))]
fn bfs(maze: &Maze, start: (usize, usize), diagonal: bool) -> Vec<Option<usize>> {
    let scheme = if diagonal { Neighborhood::Moore8 } else { Neighborhood::VonNeumann4 };
    bfs_distances(&maze.0, cell(start), scheme)
}

#[pymodule(name = "cellpath")]
fn cellpath_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lattice>()?;
    m.add_class::<Graph>()?;
    m.add_class::<StochasticGraph>()?;
    m.add_class::<Maze>()?;
    m.add_class::<Route>()?;
    m.add_function(wrap_pyfunction!(wave_route, m)?)?;
    m.add_function(wrap_pyfunction!(lee, m)?)?;
    m.add_function(wrap_pyfunction!(graph_ca, m)?)?;
    m.add_function(wrap_pyfunction!(dla, m)?)?;
    m.add_function(wrap_pyfunction!(physarum, m)?)?;
    m.add_function(wrap_pyfunction!(shortest_distances, m)?)?;
    m.add_function(wrap_pyfunction!(bfs, m)?)?;
    Ok(())
}
