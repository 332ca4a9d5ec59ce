//! Constant-state Lee router: a 14-state cellular automaton that routes a
//! shortest path on a unit-weight grid using wave marks instead of
//! accumulated weights.
//!
//! Each step applies, synchronously and in this priority order:
//!
//! 1. `free` next to `start` or a wave mark becomes a wave mark pointing at
//!    the first such neighbour in N, W, S, E order.
//! 2. `end` next to `start` or a wave mark becomes a path mark pointing at
//!    the first such neighbour; this seeds the backtrace.
//! 3. A wave mark next to a path mark pointing at it becomes the path mark of
//!    its own direction.
//! 4. A wave mark next to a path mark that does not point at it, next to
//!    `ready`, or next to `clear`, becomes `clear`.
//! 5. `start` next to a path mark pointing at it becomes `ready`.
//! 6. `clear` becomes `free`.
//!
//! No counters or distances are stored anywhere; the state is one of the 14
//! variants of [`LeeState`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::PathResult;
use crate::grid::{neighbors_iter, CellCoord, Direction, MazeCell, MazeGrid, Neighborhood};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LeeState {
    Free = 0,
    Obstacle = 1,
    Start = 2,
    End = 3,
    WaveUp = 4,
    WaveDown = 5,
    WaveLeft = 6,
    WaveRight = 7,
    PathUp = 8,
    PathDown = 9,
    PathLeft = 10,
    PathRight = 11,
    Clear = 12,
    Ready = 13,
}

impl LeeState {
    pub const ALL: [LeeState; 14] = [
        LeeState::Free,
        LeeState::Obstacle,
        LeeState::Start,
        LeeState::End,
        LeeState::WaveUp,
        LeeState::WaveDown,
        LeeState::WaveLeft,
        LeeState::WaveRight,
        LeeState::PathUp,
        LeeState::PathDown,
        LeeState::PathLeft,
        LeeState::PathRight,
        LeeState::Clear,
        LeeState::Ready,
    ];

    fn from_u8(v: u8) -> LeeState {
        Self::ALL[v as usize]
    }

    pub fn wave(d: Direction) -> LeeState {
        match d {
            Direction::N => LeeState::WaveUp,
            Direction::S => LeeState::WaveDown,
            Direction::W => LeeState::WaveLeft,
            Direction::E => LeeState::WaveRight,
            _ => unreachable!("the Lee automaton is von Neumann"),
        }
    }

    pub fn is_wave(self) -> bool {
        matches!(
            self,
            LeeState::WaveUp | LeeState::WaveDown | LeeState::WaveLeft | LeeState::WaveRight
        )
    }

    pub fn is_path(self) -> bool {
        matches!(
            self,
            LeeState::PathUp | LeeState::PathDown | LeeState::PathLeft | LeeState::PathRight
        )
    }

    /// Direction a wave or path mark points in.
    pub fn direction(self) -> Option<Direction> {
        match self {
            LeeState::WaveUp | LeeState::PathUp => Some(Direction::N),
            LeeState::WaveDown | LeeState::PathDown => Some(Direction::S),
            LeeState::WaveLeft | LeeState::PathLeft => Some(Direction::W),
            LeeState::WaveRight | LeeState::PathRight => Some(Direction::E),
            _ => None,
        }
    }

    /// Wave mark to the path mark of the same direction (enumeration + 4).
    fn to_path(self) -> LeeState {
        debug_assert!(self.is_wave());
        LeeState::from_u8(self as u8 + 4)
    }

    pub fn glyph(self) -> char {
        match self {
            LeeState::Free => '.',
            LeeState::Obstacle => '#',
            LeeState::Start => 'S',
            LeeState::End => 'E',
            LeeState::WaveUp => '↑',
            LeeState::WaveDown => '↓',
            LeeState::WaveLeft => '←',
            LeeState::WaveRight => '→',
            LeeState::PathUp => 'U',
            LeeState::PathDown => 'D',
            LeeState::PathLeft => 'L',
            LeeState::PathRight => 'R',
            LeeState::Clear => '•',
            LeeState::Ready => '*',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeeGrid {
    height: usize,
    width: usize,
    cells: Vec<LeeState>,
    step: usize,
}

impl LeeGrid {
    /// Initial routing grid; the maze must hold exactly one `S` and one `E`.
    pub fn from_maze(maze: &MazeGrid) -> Result<Self> {
        maze.unique(MazeCell::Source)?;
        maze.unique(MazeCell::Dest)?;
        let cells = maze
            .cells()
            .iter()
            .map(|c| match c {
                MazeCell::Free => Ok(LeeState::Free),
                MazeCell::Wall => Ok(LeeState::Obstacle),
                MazeCell::Source => Ok(LeeState::Start),
                MazeCell::Dest => Ok(LeeState::End),
                MazeCell::Food => Err(Error::InvalidArgument(
                    "food cells have no meaning for the Lee router".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LeeGrid {
            height: maze.height(),
            width: maze.width(),
            cells,
            step: 0,
        })
    }

    pub fn from_states(height: usize, width: usize, cells: Vec<LeeState>) -> Result<Self> {
        if cells.len() != height * width || height == 0 || width == 0 {
            return Err(Error::InvalidArgument("cell count does not match dimensions".into()));
        }
        Ok(LeeGrid {
            height,
            width,
            cells,
            step: 0,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cells(&self) -> &[LeeState] {
        &self.cells
    }

    pub fn step_count(&self) -> usize {
        self.step
    }

    pub fn index(&self, c: CellCoord) -> usize {
        c.row * self.width + c.col
    }

    pub fn coord(&self, i: usize) -> CellCoord {
        CellCoord::new(i / self.width, i % self.width)
    }

    pub fn get(&self, c: CellCoord) -> LeeState {
        self.cells[self.index(c)]
    }

    pub fn count(&self, pred: impl Fn(LeeState) -> bool) -> usize {
        self.cells.iter().filter(|&&s| pred(s)).count()
    }

    /// No wave marks and no clear cells remain.
    pub fn is_clean(&self) -> bool {
        self.count(|s| s.is_wave() || s == LeeState::Clear) == 0
    }

    fn next_state(&self, i: usize) -> LeeState {
        let here = self.coord(i);
        let nbs = || {
            neighbors_iter(here, Neighborhood::VonNeumann4, self.height, self.width)
                .map(|(d, c)| (d, self.cells[self.index(c)]))
        };
        // a path mark at direction d points at this cell iff it points opposite(d)
        let path_to_me =
            || nbs().any(|(d, s)| s.is_path() && s.direction() == Some(d.opposite()));
        let seeded_from = || {
            nbs()
                .find(|&(_, s)| s == LeeState::Start || s.is_wave())
                .map(|(d, _)| d)
        };
        let s = self.cells[i];
        match s {
            LeeState::Free => seeded_from().map_or(s, LeeState::wave),
            LeeState::End => seeded_from().map_or(s, |d| LeeState::wave(d).to_path()),
            LeeState::Start if path_to_me() => LeeState::Ready,
            LeeState::Clear => LeeState::Free,
            _ if s.is_wave() => {
                if path_to_me() {
                    s.to_path()
                } else if nbs().any(|(_, n)| n.is_path() || n == LeeState::Ready || n == LeeState::Clear) {
                    LeeState::Clear
                } else {
                    s
                }
            }
            _ => s,
        }
    }

    /// One synchronous step; returns whether any cell changed.
    pub fn advance(&mut self, parallel: bool) -> bool {
        let next: Vec<LeeState> = if parallel {
            (0..self.cells.len()).into_par_iter().map(|i| self.next_state(i)).collect()
        } else {
            (0..self.cells.len()).map(|i| self.next_state(i)).collect()
        };
        let changed = next != self.cells;
        self.cells = next;
        self.step += 1;
        changed
    }
}

/// Functional single step.
pub fn lee_step(g: &LeeGrid) -> LeeGrid {
    let mut next = g.clone();
    next.advance(false);
    next
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeeRoute {
    /// Row-major indices from start to end; cost is the hop count.
    pub path: PathResult,
    /// Step at which the start cell became `ready`.
    pub ready_step: usize,
    /// Step at which the last wave/clear cell disappeared.
    pub clean_step: usize,
    pub grid: LeeGrid,
}

/// Budget used when none is given: every phase is bounded by the cell count.
pub fn default_max_steps(g: &LeeGrid) -> usize {
    4 * g.height * g.width + 8
}

pub fn lee_route(g: &LeeGrid, max_steps: Option<usize>, parallel: bool) -> Result<LeeRoute> {
    lee_route_observed(g, max_steps, parallel, |_| {})
}

/// Steps the automaton until the start is `ready` and no wave or clear cells
/// remain, then reads the path off the path marks. `observe` sees every
/// grid from the initial one onwards.
pub fn lee_route_observed(
    g: &LeeGrid,
    max_steps: Option<usize>,
    parallel: bool,
    mut observe: impl FnMut(&LeeGrid),
) -> Result<LeeRoute> {
    let start = single(g, LeeState::Start)?;
    let end = single(g, LeeState::End)?;
    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(g));
    let mut grid = g.clone();
    let mut ready_step = None;
    observe(&grid);
    loop {
        if ready_step.is_some() && grid.is_clean() {
            break;
        }
        if grid.step_count() >= max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        let changed = grid.advance(parallel);
        observe(&grid);
        if ready_step.is_none() && grid.get(start) == LeeState::Ready {
            ready_step = Some(grid.step_count());
        }
        if !changed {
            return Err(Error::NoPath);
        }
    }
    let path = extract_path(&grid, start, end)?;
    Ok(LeeRoute {
        path,
        ready_step: ready_step.expect("loop exits only once ready"),
        clean_step: grid.step_count(),
        grid,
    })
}

fn single(g: &LeeGrid, state: LeeState) -> Result<CellCoord> {
    let found: Vec<usize> = (0..g.cells.len()).filter(|&i| g.cells[i] == state).collect();
    match found.as_slice() {
        [i] => Ok(g.coord(*i)),
        _ => Err(Error::InvalidArgument(format!(
            "expected exactly one {state:?} cell, found {}",
            found.len()
        ))),
    }
}

/// Follows path marks from the end cell to the ready start cell.
fn extract_path(g: &LeeGrid, start: CellCoord, end: CellCoord) -> Result<PathResult> {
    let mut nodes = vec![g.index(end)];
    let mut cur = end;
    while cur != start {
        let s = g.get(cur);
        let d = s
            .direction()
            .filter(|_| s.is_path())
            .ok_or_else(|| Error::InvalidPath(format!("path chain broken at {cur}")))?;
        cur = cur
            .step(d, g.height, g.width)
            .ok_or_else(|| Error::InvalidPath(format!("path mark at {cur} leaves the grid")))?;
        nodes.push(g.index(cur));
        if nodes.len() > g.cells.len() {
            return Err(Error::InvalidPath("path chain loops".into()));
        }
    }
    nodes.reverse();
    let cost = (nodes.len() - 1) as f64;
    Ok(PathResult { nodes, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parse_maze;
    use crate::oracle::bfs_distances;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn route(text: &str) -> Result<LeeRoute> {
        lee_route(&LeeGrid::from_maze(&parse_maze(text).unwrap()).unwrap(), None, false)
    }

    fn bfs_hops(maze: &MazeGrid) -> Option<usize> {
        let s = maze.unique(MazeCell::Source).unwrap();
        let e = maze.unique(MazeCell::Dest).unwrap();
        bfs_distances(maze, s, Neighborhood::VonNeumann4)[maze.index(e)]
    }

    #[test]
    fn wave_to_path_is_plus_four() {
        for d in Direction::CARDINAL {
            let w = LeeState::wave(d);
            assert!(w.to_path().is_path());
            assert_eq!(w.to_path().direction(), Some(d));
        }
        assert_eq!(LeeState::ALL.len(), 14);
    }

    #[test]
    fn adjacent_start_and_end() {
        let r = route("S\nE\n").unwrap();
        assert!(r.ready_step <= 3);
        assert!(r.grid.is_clean());
        assert_eq!(r.path.nodes, vec![0, 1]);
        assert_eq!(r.path.cost, 1.0);
    }

    #[test]
    fn first_step_points_waves_at_start() {
        let maze = parse_maze("...\n.S.\n..E\n").unwrap();
        let g = lee_step(&LeeGrid::from_maze(&maze).unwrap());
        assert_eq!(g.get(CellCoord::new(0, 1)), LeeState::WaveDown);
        assert_eq!(g.get(CellCoord::new(1, 0)), LeeState::WaveRight);
        assert_eq!(g.get(CellCoord::new(1, 2)), LeeState::WaveLeft);
        assert_eq!(g.get(CellCoord::new(2, 1)), LeeState::WaveUp);
        assert_eq!(g.get(CellCoord::new(0, 0)), LeeState::Free);
        // end sees the start's neighbour waves only after they exist
        assert_eq!(g.get(CellCoord::new(2, 2)), LeeState::End);
        let g = lee_step(&g);
        // N is scanned before W
        assert_eq!(g.get(CellCoord::new(2, 2)), LeeState::PathUp);
    }

    #[test]
    fn walled_off_end_never_builds_a_path() {
        let r = route("S..#...\n...#.E.\n...#...\n");
        assert_eq!(r.unwrap_err(), Error::NoPath);
        let mut g = LeeGrid::from_maze(&parse_maze("S..#...\n...#.E.\n...#...\n").unwrap()).unwrap();
        for _ in 0..20 {
            g.advance(false);
            assert_eq!(g.count(LeeState::is_path), 0);
        }
        assert_eq!(g.count(LeeState::is_wave), 8);
    }

    #[test]
    fn open_grid_routes_manhattan_length() {
        for (h, w) in [(1, 2), (3, 3), (4, 7), (6, 5)] {
            let mut maze = MazeGrid::new(h, w);
            maze.set(CellCoord::new(0, 0), MazeCell::Source);
            maze.set(CellCoord::new(h - 1, w - 1), MazeCell::Dest);
            let r = lee_route(&LeeGrid::from_maze(&maze).unwrap(), None, false).unwrap();
            assert_eq!(r.path.cost, (h + w - 2) as f64);
            assert_eq!(r.ready_step, 2 * (h + w - 2));
        }
    }

    #[test]
    fn random_grids_match_bfs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut solvable = 0;
        for _ in 0..100 {
            let mut maze = MazeGrid::new(12, 12);
            for i in 0..144 {
                if rng.random_bool(0.25) {
                    maze.set(maze.coord(i), MazeCell::Wall);
                }
            }
            let s = rng.random_range(0..144);
            let mut e = rng.random_range(0..144);
            while e == s {
                e = rng.random_range(0..144);
            }
            maze.set(maze.coord(s), MazeCell::Source);
            maze.set(maze.coord(e), MazeCell::Dest);
            let grid = LeeGrid::from_maze(&maze).unwrap();
            match (lee_route(&grid, None, false), bfs_hops(&maze)) {
                (Ok(r), Some(hops)) => {
                    solvable += 1;
                    assert_eq!(r.path.cost, hops as f64);
                    assert_eq!(r.ready_step, 2 * hops);
                    assert!(r.grid.is_clean());
                    // consecutive path cells are grid neighbours through open cells
                    for w in r.path.nodes.windows(2) {
                        let (a, b) = (maze.coord(w[0]), maze.coord(w[1]));
                        assert_eq!(a.row.abs_diff(b.row) + a.col.abs_diff(b.col), 1);
                        assert!(maze.is_open(b));
                    }
                }
                (Err(Error::NoPath), None) => {}
                (r, b) => panic!("router {r:?} vs bfs {b:?}"),
            }
        }
        assert!(solvable > 40);
    }

    #[test]
    fn cleanup_leaves_a_reusable_grid() {
        let text = "S.....\n.##.#.\n...#..\n.#...E\n";
        let r = route(text).unwrap();
        let allowed = |s: LeeState| {
            matches!(s, LeeState::Free | LeeState::Obstacle | LeeState::Ready | LeeState::End)
                || s.is_path()
        };
        assert!(r.grid.cells().iter().all(|&s| allowed(s)));

        // reset the route and plan a second net on the same grid
        let cells: Vec<LeeState> = r
            .grid
            .cells()
            .iter()
            .map(|&s| if s == LeeState::Obstacle { s } else { LeeState::Free })
            .collect();
        let mut cells = cells;
        cells[r.grid.index(CellCoord::new(3, 0))] = LeeState::Start;
        cells[r.grid.index(CellCoord::new(0, 5))] = LeeState::End;
        let again = lee_route(&LeeGrid::from_states(4, 6, cells).unwrap(), None, false).unwrap();
        assert_eq!(again.path.cost, 8.0);
    }

    #[test]
    fn spiral_terminates_within_quadratic_budget() {
        let spiral = "\
S.........
########..
.......#..
.#####.#..
.#...#.#..
.#.#E#.#..
.#.###.#..
.#.....#..
.#######..
..........
";
        let maze = parse_maze(spiral).unwrap();
        let n = maze.cell_count();
        let r = route(spiral).unwrap();
        assert_eq!(Some(r.path.cost as usize), bfs_hops(&maze));
        assert!(r.clean_step <= n * n);
        assert!(r.path.cost > 30.0);
    }

    #[test]
    fn worked_example_milestones() {
        let text = "......\n...#.#\nS.....\n..#...\n......\n...#E.\n";
        let grid = LeeGrid::from_maze(&parse_maze(text).unwrap()).unwrap();
        let end = CellCoord::new(5, 4);
        let mut end_marked = None;
        let mut first_clear = None;
        let mut states = std::collections::BTreeSet::new();
        let r = lee_route_observed(&grid, None, false, |g| {
            states.extend(g.cells().iter().copied());
            if end_marked.is_none() && g.get(end).is_path() {
                end_marked = Some(g.step_count());
            }
            if first_clear.is_none() && g.count(|s| s == LeeState::Clear) > 0 {
                first_clear = Some(g.step_count());
            }
        })
        .unwrap();
        assert_eq!(r.path.cost, 7.0);
        assert_eq!(end_marked, Some(7));
        assert_eq!(first_clear, Some(9));
        assert_eq!(r.ready_step, 14);
        assert_eq!(r.clean_step, 17);
        assert!(states.len() <= 14);
        assert!(states.contains(&LeeState::Clear) && states.contains(&LeeState::Ready));
    }

    #[test]
    fn parallel_matches_sequential() {
        let maze = parse_maze("S.....\n.##.#.\n...#..\n.#...E\n").unwrap();
        let mut a = LeeGrid::from_maze(&maze).unwrap();
        let mut b = a.clone();
        for _ in 0..30 {
            a.advance(false);
            b.advance(true);
            assert_eq!(a, b);
        }
    }
}
