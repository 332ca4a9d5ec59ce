//! Slime-mould maze solver. Food cells emit a chemoattractant that diffuses
//! through free space; cytoplasm spreads from the plasmodium origin, biased
//! up the chemical gradient; once mass reaches the food, the tube is traced
//! back from the food by steepest ascent of the mass field.
//!
//! One CA step applies three synchronous sub-steps in order: chemical
//! diffusion, direction update, mass exchange.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PathResult;
use crate::grid::{neighbors_iter, CellCoord, Direction, MazeCell, MazeGrid, Neighborhood};

/// 50x50 corridor maze with four source-to-food routes and dead ends.
pub const MAZE_50X50: &str = include_str!("../data/maze_50x50.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[repr(u8)]
pub enum Topology {
    Free = 0,
    Food = 1,
    Origin = 2,
    Wall = 3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhysarumParams {
    pub chem_diffusion_rate: f64,
    pub phys_diffusion_rate: f64,
    pub chem_source_level: f64,
    pub dir_gain: f64,
    pub pseudo_mass_floor: f64,
    pub max_steps: usize,
    /// Cytoplasm placed on every origin cell at the start.
    pub origin_mass: f64,
    /// Fraction of mass lost per step; 0 keeps mass conserved.
    pub phys_decay: f64,
}

impl Default for PhysarumParams {
    fn default() -> Self {
        PhysarumParams {
            chem_diffusion_rate: 0.05,
            phys_diffusion_rate: 0.05,
            chem_source_level: 100.0,
            dir_gain: 1.0,
            pseudo_mass_floor: 1e-20,
            max_steps: 2000,
            origin_mass: 1.0,
            phys_decay: 0.0,
        }
    }
}

impl PhysarumParams {
    pub fn validate(&self) -> Result<()> {
        let rate_ok = |r: f64| r > 0.0 && r <= 0.125;
        if !rate_ok(self.chem_diffusion_rate) || !rate_ok(self.phys_diffusion_rate) {
            return Err(Error::InvalidArgument("diffusion rates must lie in (0, 1/8]".into()));
        }
        if !(self.chem_source_level > 0.0) || !(self.dir_gain >= 0.0) || !(self.pseudo_mass_floor >= 0.0) {
            return Err(Error::InvalidArgument(
                "source level must be positive, gain and mass floor non-negative".into(),
            ));
        }
        if !(self.origin_mass > 0.0) || !(0.0..1.0).contains(&self.phys_decay) {
            return Err(Error::InvalidArgument("origin mass must be positive, decay in [0,1)".into()));
        }
        Ok(())
    }
}

/// Field state; per-cell quantities are stored as parallel row-major arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysarumField {
    height: usize,
    width: usize,
    pub topology: Vec<Topology>,
    pub chem: Vec<f64>,
    /// Bias toward each Moore neighbour, indexed by `Direction::index`.
    pub dir: Vec<[f64; 8]>,
    pub phys: Vec<f64>,
    pub pseudo: Vec<bool>,
}

impl PhysarumField {
    /// `S` cells become origins, `F` and `E` cells food.
    pub fn from_maze(maze: &MazeGrid, params: &PhysarumParams) -> Result<Self> {
        let topology: Vec<Topology> = maze
            .cells()
            .iter()
            .map(|c| match c {
                MazeCell::Free => Topology::Free,
                MazeCell::Wall => Topology::Wall,
                MazeCell::Source => Topology::Origin,
                MazeCell::Food | MazeCell::Dest => Topology::Food,
            })
            .collect();
        if !topology.contains(&Topology::Origin) || !topology.contains(&Topology::Food) {
            return Err(Error::InvalidArgument(
                "maze needs at least one origin and one food cell".into(),
            ));
        }
        let n = topology.len();
        let chem = topology
            .iter()
            .map(|&t| if t == Topology::Food { params.chem_source_level } else { 0.0 })
            .collect();
        let phys = topology
            .iter()
            .map(|&t| if t == Topology::Origin { params.origin_mass } else { 0.0 })
            .collect();
        Ok(PhysarumField {
            height: maze.height(),
            width: maze.width(),
            topology,
            chem,
            dir: vec![[0.0; 8]; n],
            phys,
            pseudo: vec![false; n],
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn index(&self, c: CellCoord) -> usize {
        c.row * self.width + c.col
    }

    pub fn coord(&self, i: usize) -> CellCoord {
        CellCoord::new(i / self.width, i % self.width)
    }

    pub fn is_wall(&self, i: usize) -> bool {
        self.topology[i] == Topology::Wall
    }

    pub fn total_mass(&self) -> f64 {
        self.phys.iter().sum()
    }

    /// Non-wall Moore neighbours of cell `i` as (direction, index).
    fn open_neighbors(&self, i: usize) -> impl Iterator<Item = (Direction, usize)> + '_ {
        neighbors_iter(self.coord(i), Neighborhood::Moore8, self.height, self.width)
            .map(|(d, c)| (d, self.index(c)))
            .filter(|&(_, j)| !self.is_wall(j))
    }

    fn cells_where(&self, t: Topology) -> Vec<usize> {
        (0..self.topology.len()).filter(|&i| self.topology[i] == t).collect()
    }
}

fn map_cells<T: Send>(n: usize, parallel: bool, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Explicit diffusion over free Moore neighbours with food clamped at the
/// source level and walls held at zero.
pub fn chem_step(field: &mut PhysarumField, params: &PhysarumParams, parallel: bool) {
    let clamp = |f: &mut PhysarumField| {
        for i in 0..f.topology.len() {
            match f.topology[i] {
                Topology::Food => f.chem[i] = params.chem_source_level,
                Topology::Wall => f.chem[i] = 0.0,
                _ => {}
            }
        }
    };
    clamp(field);
    let rate = params.chem_diffusion_rate;
    let f = &*field;
    let next = map_cells(f.topology.len(), parallel, |i| {
        if f.is_wall(i) {
            return 0.0;
        }
        let c = f.chem[i];
        c + rate * f.open_neighbors(i).map(|(_, j)| f.chem[j] - c).sum::<f64>()
    });
    field.chem = next;
    clamp(field);
}

/// Gradient toward each open neighbour, scaled by the gain; zero toward walls
/// and on wall cells.
pub fn dir_step(field: &mut PhysarumField, params: &PhysarumParams, parallel: bool) {
    let f = &*field;
    let next = map_cells(f.topology.len(), parallel, |i| {
        let mut d = [0.0; 8];
        if !f.is_wall(i) {
            for (dir, j) in f.open_neighbors(i) {
                d[dir.index()] = params.dir_gain * (f.chem[j] - f.chem[i]);
            }
        }
        d
    });
    field.dir = next;
}

/// Outflow rates from cell `i` to its open neighbours: f_p (1 + g) with g the
/// positive part of the bias capped at 1, scaled down if they exceed 1.
fn outflow_rates(f: &PhysarumField, i: usize, params: &PhysarumParams) -> [(usize, f64); 8] {
    let mut rates = [(usize::MAX, 0.0); 8];
    let mut total = 0.0;
    for (k, (dir, j)) in f.open_neighbors(i).enumerate() {
        let g = f.dir[i][dir.index()].clamp(0.0, 1.0);
        let r = params.phys_diffusion_rate * (1.0 + g);
        rates[k] = (j, r);
        total += r;
    }
    if total > 1.0 {
        for r in rates.iter_mut() {
            r.1 /= total;
        }
    }
    rates
}

/// Direction-weighted mass exchange. Each flux is evaluated once per pair
/// and subtracted from the sender, so mass is conserved up to rounding.
pub fn phys_step(field: &mut PhysarumField, params: &PhysarumParams, parallel: bool) {
    let f = &*field;
    let n = f.topology.len();
    let rates = map_cells(n, parallel, |i| {
        if f.is_wall(i) || f.phys[i] == 0.0 {
            [(usize::MAX, 0.0); 8]
        } else {
            outflow_rates(f, i, params)
        }
    });
    let keep = 1.0 - params.phys_decay;
    let next = map_cells(n, parallel, |i| {
        if f.is_wall(i) {
            return 0.0;
        }
        let out: f64 = rates[i].iter().map(|&(_, r)| r).sum();
        let mut m = f.phys[i] - f.phys[i] * out;
        for (_, j) in f.open_neighbors(i) {
            if let Some(&(_, r)) = rates[j].iter().find(|&&(k, _)| k == i) {
                m += f.phys[j] * r;
            }
        }
        m.max(0.0) * keep
    });
    field.phys = next;
}

/// One CA step: chem, then dir, then phys.
pub fn physarum_step(field: &mut PhysarumField, params: &PhysarumParams, parallel: bool) {
    chem_step(field, params, parallel);
    dir_step(field, params, parallel);
    phys_step(field, params, parallel);
}

/// Largest neighbour mass around any food cell, with that food cell.
fn best_food(field: &PhysarumField) -> Option<(usize, f64)> {
    field
        .cells_where(Topology::Food)
        .into_iter()
        .map(|i| {
            let m = field.open_neighbors(i).map(|(_, j)| field.phys[j]).fold(0.0, f64::max);
            (i, m)
        })
        .fold(None, |best, cur| match best {
            Some((_, bm)) if bm >= cur.1 => best,
            _ => Some(cur),
        })
}

/// Greedy walk from `food` to the unvisited open neighbour of largest mass
/// (ties in neighbour order) until an origin cell is reached. Marks the tube
/// in `pseudo` and returns it food first.
pub fn extract_tube(field: &mut PhysarumField, food: CellCoord) -> Result<Vec<CellCoord>> {
    let n = field.topology.len();
    let mut visited = vec![false; n];
    let mut cur = field.index(food);
    let mut tube = vec![cur];
    visited[cur] = true;
    while field.topology[cur] != Topology::Origin {
        let next = field
            .open_neighbors(cur)
            .filter(|&(_, j)| !visited[j])
            .fold(None, |best: Option<usize>, (_, j)| match best {
                Some(b) if field.phys[b] >= field.phys[j] => Some(b),
                _ => Some(j),
            })
            .ok_or_else(|| {
                Error::TubeExtractionFailed(format!("walk stuck at {}", field.coord(cur)))
            })?;
        if field.phys[next] <= 0.0 {
            return Err(Error::TubeExtractionFailed(format!(
                "no cytoplasm beyond {}",
                field.coord(cur)
            )));
        }
        visited[next] = true;
        tube.push(next);
        cur = next;
        if tube.len() > n {
            return Err(Error::TubeExtractionFailed("walk exceeds the cell count".into()));
        }
    }
    for &i in &tube {
        field.pseudo[i] = true;
    }
    Ok(tube.into_iter().map(|i| field.coord(i)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysarumSolution {
    /// Tube cells from food to origin.
    pub tube: Vec<CellCoord>,
    /// Row-major indices origin first; cost is the hop count.
    pub path: PathResult,
    pub steps: usize,
    pub field: PhysarumField,
}

pub fn solve_maze(maze: &MazeGrid, params: &PhysarumParams, parallel: bool) -> Result<PhysarumSolution> {
    solve_maze_observed(maze, params, parallel, |_, _| {})
}

/// Runs CA steps until a tube can be traced from the food or `max_steps`
/// have elapsed. `observe` receives the field after every step, starting
/// with step 0.
pub fn solve_maze_observed(
    maze: &MazeGrid,
    params: &PhysarumParams,
    parallel: bool,
    mut observe: impl FnMut(usize, &PhysarumField),
) -> Result<PhysarumSolution> {
    params.validate()?;
    let mut field = PhysarumField::from_maze(maze, params)?;
    observe(0, &field);
    for step in 1..=params.max_steps {
        physarum_step(&mut field, params, parallel);
        let arrived = best_food(&field).filter(|&(_, m)| m >= params.pseudo_mass_floor);
        if let Some((food, _)) = arrived {
            let mut traced = field.clone();
            if let Ok(tube) = extract_tube(&mut traced, field.coord(food)) {
                observe(step, &traced);
                let nodes: Vec<usize> = tube.iter().rev().map(|&c| traced.index(c)).collect();
                let cost = (nodes.len() - 1) as f64;
                return Ok(PhysarumSolution {
                    tube,
                    path: PathResult { nodes, cost },
                    steps: step,
                    field: traced,
                });
            }
        }
        observe(step, &field);
    }
    Err(Error::NoTube(params.max_steps))
}
