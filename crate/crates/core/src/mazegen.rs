//! Corridor maze generation for the slime-mould solver.
//!
//! A maze is carved on a coarse grid of rooms (randomised depth-first
//! search, then a few extra openings to create loops) and rendered with
//! corridors `corridor` cells wide and walls `wall` cells thick.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{CellCoord, MazeCell, MazeGrid, Neighborhood};
use crate::oracle::bfs_distances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MazeShape {
    pub rooms_h: usize,
    pub rooms_w: usize,
    pub corridor: usize,
    pub wall: usize,
}

impl MazeShape {
    pub fn height(&self) -> usize {
        self.rooms_h * self.corridor + (self.rooms_h + 1) * self.wall
    }

    pub fn width(&self) -> usize {
        self.rooms_w * self.corridor + (self.rooms_w + 1) * self.wall
    }

    /// Centre cell of a room.
    pub fn room_centre(&self, room: (usize, usize)) -> CellCoord {
        let pitch = self.corridor + self.wall;
        CellCoord::new(
            self.wall + room.0 * pitch + self.corridor / 2,
            self.wall + room.1 * pitch + self.corridor / 2,
        )
    }
}

/// Rooms plus the set of open passages between orthogonally adjacent rooms.
/// Passage `(a, b)` always has `a < b` in row-major room order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoomMaze {
    pub shape: MazeShape,
    pub passages: Vec<(usize, usize)>,
}

impl RoomMaze {
    /// Spanning-tree maze from a randomised depth-first search, then
    /// `extra_openings` additional passages chosen at random.
    pub fn carve<R: Rng + ?Sized>(shape: MazeShape, extra_openings: usize, rng: &mut R) -> Self {
        let (h, w) = (shape.rooms_h, shape.rooms_w);
        let n = h * w;
        let adjacent = |r: usize| {
            let (y, x) = (r / w, r % w);
            let mut v = Vec::with_capacity(4);
            if y > 0 {
                v.push(r - w);
            }
            if x > 0 {
                v.push(r - 1);
            }
            if y + 1 < h {
                v.push(r + w);
            }
            if x + 1 < w {
                v.push(r + 1);
            }
            v
        };
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let mut seen = vec![false; n];
        let mut passages = Vec::new();
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(&r) = stack.last() {
            let mut next: Vec<usize> = adjacent(r).into_iter().filter(|&m| !seen[m]).collect();
            if next.is_empty() {
                stack.pop();
                continue;
            }
            next.shuffle(rng);
            let m = next[0];
            seen[m] = true;
            passages.push(key(r, m));
            stack.push(m);
        }
        let mut closed: Vec<(usize, usize)> = (0..n)
            .flat_map(|r| adjacent(r).into_iter().map(move |m| key(r, m)))
            .filter(|&(a, b)| a < b)
            .filter(|p| !passages.contains(p))
            .collect();
        closed.sort_unstable();
        closed.dedup();
        closed.shuffle(rng);
        passages.extend(closed.into_iter().take(extra_openings));
        passages.sort_unstable();
        RoomMaze { shape, passages }
    }

    /// Draws the maze with one source and one food cell at room centres,
    /// leaving out `skip` if given.
    pub fn render(&self, source: usize, food: usize, skip: Option<(usize, usize)>) -> MazeGrid {
        let s = self.shape;
        let mut maze = MazeGrid::new(s.height(), s.width());
        for i in 0..maze.cell_count() {
            maze.set(maze.coord(i), MazeCell::Wall);
        }
        let pitch = s.corridor + s.wall;
        let open_rect = |maze: &mut MazeGrid, r0: usize, c0: usize, hh: usize, ww: usize| {
            for r in r0..r0 + hh {
                for c in c0..c0 + ww {
                    maze.set(CellCoord::new(r, c), MazeCell::Free);
                }
            }
        };
        for room in 0..s.rooms_h * s.rooms_w {
            let (y, x) = (room / s.rooms_w, room % s.rooms_w);
            open_rect(&mut maze, s.wall + y * pitch, s.wall + x * pitch, s.corridor, s.corridor);
        }
        for &(a, b) in &self.passages {
            if Some((a, b)) == skip {
                continue;
            }
            let (y, x) = (a / s.rooms_w, a % s.rooms_w);
            if b == a + 1 {
                open_rect(&mut maze, s.wall + y * pitch, s.wall + x * pitch + s.corridor, s.corridor, s.wall);
            } else {
                open_rect(&mut maze, s.wall + y * pitch + s.corridor, s.wall + x * pitch, s.wall, s.corridor);
            }
        }
        let room = |r: usize| s.room_centre((r / s.rooms_w, r % s.rooms_w));
        maze.set(room(source), MazeCell::Source);
        maze.set(room(food), MazeCell::Food);
        maze
    }

    /// Cells of passage `(a, b)`.
    fn passage_cells(&self, (a, b): (usize, usize)) -> Vec<CellCoord> {
        let s = self.shape;
        let pitch = s.corridor + s.wall;
        let (y, x) = (a / s.rooms_w, a % s.rooms_w);
        let (r0, c0, hh, ww) = if b == a + 1 {
            (s.wall + y * pitch, s.wall + x * pitch + s.corridor, s.corridor, s.wall)
        } else {
            (s.wall + y * pitch + s.corridor, s.wall + x * pitch, s.wall, s.corridor)
        };
        (r0..r0 + hh)
            .flat_map(|r| (c0..c0 + ww).map(move |c| CellCoord::new(r, c)))
            .collect()
    }

    /// Moore-neighbourhood hop counts of the shortest route and of the best
    /// route that avoids one of the passages it uses. The second value is
    /// `None` when the shortest route has no alternative.
    pub fn route_lengths(&self, source: usize, food: usize) -> Result<(usize, Option<usize>)> {
        let full = self.render(source, food, None);
        let route = shortest_route(&full).ok_or(Error::NoPath)?;
        let best = route.len() - 1;
        let second = self
            .passages
            .iter()
            .filter(|&&p| self.passage_cells(p).iter().any(|c| route.contains(c)))
            .filter_map(|&p| shortest_route(&self.render(source, food, Some(p))))
            .map(|r| r.len() - 1)
            .min();
        Ok((best, second))
    }
}

/// One shortest Moore route from the source to the food cell, or `None`.
pub fn shortest_route(maze: &MazeGrid) -> Option<Vec<CellCoord>> {
    let s = maze.unique(MazeCell::Source).ok()?;
    let f = maze.unique(MazeCell::Food).ok()?;
    let from_food = bfs_distances(maze, f, Neighborhood::Moore8);
    let mut d = from_food[maze.index(s)]?;
    let mut route = vec![s];
    let mut cur = s;
    while d > 0 {
        cur = maze
            .neighbors(cur, Neighborhood::Moore8)
            .map(|(_, c)| c)
            .find(|&c| from_food[maze.index(c)] == Some(d - 1))?;
        route.push(cur);
        d -= 1;
    }
    Some(route)
}

/// A maze whose shortest route beats every alternative by a margin.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMaze {
    pub maze: MazeGrid,
    pub best: usize,
    pub second: usize,
}

/// `count` random room mazes (4 to 7 rooms a side, corridors 1 or 2 wide,
/// 1 to 4 loops) whose second-best route is at least `min_ratio` times
/// longer than the best one, with source and food in random rooms.
pub fn discriminative_corpus<R: Rng + ?Sized>(count: usize, min_ratio: f64, rng: &mut R) -> Vec<CorpusMaze> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.random_range(4..=7);
        let shape = MazeShape { rooms_h: k, rooms_w: k, corridor: rng.random_range(1..=2), wall: 1 };
        let m = RoomMaze::carve(shape, rng.random_range(1..=4), rng);
        let (s, f) = (rng.random_range(0..k * k), rng.random_range(0..k * k));
        if s == f {
            continue;
        }
        let Ok((best, Some(second))) = m.route_lengths(s, f) else {
            continue;
        };
        if best >= 4 && second as f64 >= min_ratio * best as f64 {
            out.push(CorpusMaze { maze: m.render(s, f, None), best, second });
        }
    }
    out
}
