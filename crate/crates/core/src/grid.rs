//! Lattices, mazes and neighbourhoods shared by every cellular automaton in
//! the crate.
//!
//! All lattices are two-dimensional with a null boundary: a neighbour that
//! would fall outside the lattice simply does not exist. Neighbours are always
//! enumerated in the fixed order N, W, S, E (then NE, NW, SE, SW for the Moore
//! scheme), and every tie-break downstream relies on that order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellCoord {
    pub row: usize,
    pub col: usize,
}

impl CellCoord {
    pub const fn new(row: usize, col: usize) -> Self {
        CellCoord { row, col }
    }

    /// Moves one cell in `dir`, or `None` when that leaves a `height x width` lattice.
    pub fn step(self, dir: Direction, height: usize, width: usize) -> Option<CellCoord> {
        let (dr, dc) = dir.offset();
        let row = self.row.checked_add_signed(dr)?;
        let col = self.col.checked_add_signed(dc)?;
        (row < height && col < width).then_some(CellCoord { row, col })
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.row, self.col)
    }
}

/// Neighbour direction, labelled from the frame of the cell doing the looking:
/// the neighbour above a cell is its `N` neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    N,
    W,
    S,
    E,
    NE,
    NW,
    SE,
    SW,
}

impl Direction {
    pub const CARDINAL: [Direction; 4] = [Direction::N, Direction::W, Direction::S, Direction::E];
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::W,
        Direction::S,
        Direction::E,
        Direction::NE,
        Direction::NW,
        Direction::SE,
        Direction::SW,
    ];

    /// (row, col) offset.
    pub const fn offset(self) -> (isize, isize) {
        match self {
            Direction::N => (-1, 0),
            Direction::W => (0, -1),
            Direction::S => (1, 0),
            Direction::E => (0, 1),
            Direction::NE => (-1, 1),
            Direction::NW => (-1, -1),
            Direction::SE => (1, 1),
            Direction::SW => (1, -1),
        }
    }

    pub const fn opposite(self) -> Direction {
        match self {
            Direction::N => Direction::S,
            Direction::W => Direction::E,
            Direction::S => Direction::N,
            Direction::E => Direction::W,
            Direction::NE => Direction::SW,
            Direction::NW => Direction::SE,
            Direction::SE => Direction::NW,
            Direction::SW => Direction::NE,
        }
    }

    /// Position of this direction in the canonical enumeration order.
    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn label(self) -> &'static str {
        match self {
            Direction::N => "N",
            Direction::W => "W",
            Direction::S => "S",
            Direction::E => "E",
            Direction::NE => "NE",
            Direction::NW => "NW",
            Direction::SE => "SE",
            Direction::SW => "SW",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Neighborhood {
    VonNeumann4,
    Moore8,
}

impl Neighborhood {
    pub const fn directions(self) -> &'static [Direction] {
        match self {
            Neighborhood::VonNeumann4 => &Direction::CARDINAL,
            Neighborhood::Moore8 => &Direction::ALL,
        }
    }

    pub const fn size(self) -> usize {
        self.directions().len()
    }

    pub const fn name(self) -> &'static str {
        match self {
            Neighborhood::VonNeumann4 => "vonNeumann4",
            Neighborhood::Moore8 => "moore8",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vonneumann4" | "vn4" => Some(Neighborhood::VonNeumann4),
            "moore8" => Some(Neighborhood::Moore8),
            _ => None,
        }
    }
}

/// In-bounds neighbours of `c` in canonical order.
pub fn neighbors(
    c: CellCoord,
    scheme: Neighborhood,
    height: usize,
    width: usize,
) -> Vec<(Direction, CellCoord)> {
    neighbors_iter(c, scheme, height, width).collect()
}

pub fn neighbors_iter(
    c: CellCoord,
    scheme: Neighborhood,
    height: usize,
    width: usize,
) -> impl Iterator<Item = (Direction, CellCoord)> {
    scheme
        .directions()
        .iter()
        .filter_map(move |&d| c.step(d, height, width).map(|n| (d, n)))
}

/// An incoming edge weight: a finite value in `0..=nu`, or infinity for "no edge".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Weight(Option<u32>);

impl Weight {
    pub const INF: Weight = Weight(None);

    pub const fn finite(w: u32) -> Self {
        Weight(Some(w))
    }

    pub const fn get(self) -> Option<u32> {
        self.0
    }

    pub const fn is_finite(self) -> bool {
        self.0.is_some()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(w) => write!(f, "{w}"),
            None => f.write_str("inf"),
        }
    }
}

/// A directed graph laid out on a lattice. Each cell stores, for every
/// neighbour direction `d`, the weight of the edge *from* the neighbour at `d`
/// *into* the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLattice {
    height: usize,
    width: usize,
    scheme: Neighborhood,
    nu: u32,
    weights: Vec<Weight>,
}

impl WeightedLattice {
    /// A lattice with no edges at all.
    pub fn new(height: usize, width: usize, scheme: Neighborhood, nu: u32) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidArgument("lattice dimensions must be >= 1".into()));
        }
        Ok(WeightedLattice {
            height,
            width,
            scheme,
            nu,
            weights: vec![Weight::INF; height * width * scheme.size()],
        })
    }

    /// Every in-bounds incoming edge gets weight `w`.
    pub fn uniform(
        height: usize,
        width: usize,
        scheme: Neighborhood,
        nu: u32,
        w: u32,
    ) -> Result<Self> {
        let mut lat = Self::new(height, width, scheme, nu)?;
        for i in 0..lat.cell_count() {
            let c = lat.coord(i);
            for (d, _) in neighbors_iter(c, scheme, height, width) {
                lat.set_weight(c, d, Weight::finite(w))?;
            }
        }
        Ok(lat)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn scheme(&self) -> Neighborhood {
        self.scheme
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn cell_count(&self) -> usize {
        self.height * self.width
    }

    pub fn index(&self, c: CellCoord) -> usize {
        c.row * self.width + c.col
    }

    pub fn coord(&self, i: usize) -> CellCoord {
        CellCoord::new(i / self.width, i % self.width)
    }

    pub fn contains(&self, c: CellCoord) -> bool {
        c.row < self.height && c.col < self.width
    }

    fn slot(&self, c: CellCoord, d: Direction) -> Option<usize> {
        let k = self.scheme.directions().iter().position(|&x| x == d)?;
        Some(self.index(c) * self.scheme.size() + k)
    }

    /// Weight of the edge from the neighbour of `c` at `d` into `c`.
    pub fn weight(&self, c: CellCoord, d: Direction) -> Weight {
        match self.slot(c, d) {
            Some(s) if c.step(d, self.height, self.width).is_some() => self.weights[s],
            _ => Weight::INF,
        }
    }

    pub fn set_weight(&mut self, c: CellCoord, d: Direction, w: Weight) -> Result<()> {
        if !self.contains(c) {
            return Err(Error::InvalidArgument(format!("cell {c} out of bounds")));
        }
        if let Some(v) = w.get() {
            if v > self.nu {
                return Err(Error::InvalidArgument(format!("weight {v} exceeds nu {}", self.nu)));
            }
        }
        let slot = self
            .slot(c, d)
            .ok_or_else(|| Error::InvalidArgument(format!("direction {d:?} not in scheme")))?;
        self.weights[slot] = w;
        Ok(())
    }

    pub fn neighbors(&self, c: CellCoord) -> impl Iterator<Item = (Direction, CellCoord)> {
        neighbors_iter(c, self.scheme, self.height, self.width)
    }

    /// Finite-weight edges entering `c`, as `(direction of source, source, weight)`.
    pub fn incoming(&self, c: CellCoord) -> impl Iterator<Item = (Direction, CellCoord, u32)> + '_ {
        self.neighbors(c)
            .filter_map(move |(d, y)| self.weight(c, d).get().map(|w| (d, y, w)))
    }

    /// Parses the plain-text lattice format:
    ///
    /// ```text
    /// H W SCHEME NU
    /// row col wN wW wS wE [wNE wNW wSE wSW]
    /// ```
    ///
    /// with one line per cell and `inf` for a missing edge. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing header line"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(Error::parse(hline, 1, "header must be `H W SCHEME NU`"));
        }
        let height = parse_usize(toks[0], hline, 1)?;
        let width = parse_usize(toks[1], hline, 2)?;
        let scheme = Neighborhood::from_name(toks[2])
            .ok_or_else(|| Error::parse(hline, 3, format!("unknown scheme `{}`", toks[2])))?;
        let nu = parse_usize(toks[3], hline, 4)? as u32;
        let mut lat = WeightedLattice::new(height, width, scheme, nu)
            .map_err(|e| Error::parse(hline, 1, e.to_string()))?;

        let mut seen = vec![false; lat.cell_count()];
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let k = scheme.size();
            if toks.len() < 2 + k {
                return Err(Error::parse(
                    ln,
                    toks.len() + 1,
                    format!("expected {} weights, found {}", k, toks.len().saturating_sub(2)),
                ));
            }
            if toks.len() > 2 + k {
                return Err(Error::parse(ln, 3 + k, "trailing tokens"));
            }
            let c = CellCoord::new(parse_usize(toks[0], ln, 1)?, parse_usize(toks[1], ln, 2)?);
            if !lat.contains(c) {
                return Err(Error::parse(ln, 1, format!("cell {c} out of bounds")));
            }
            let idx = lat.index(c);
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::parse(ln, 1, format!("duplicate cell {c}")));
            }
            for (j, &d) in scheme.directions().iter().enumerate() {
                let tok = toks[2 + j];
                let w = if tok.eq_ignore_ascii_case("inf") {
                    Weight::INF
                } else {
                    let v = parse_usize(tok, ln, 3 + j)? as u32;
                    if v > nu {
                        return Err(Error::parse(ln, 3 + j, format!("weight {v} exceeds nu {nu}")));
                    }
                    Weight::finite(v)
                };
                if w.is_finite() && c.step(d, height, width).is_none() {
                    return Err(Error::parse(
                        ln,
                        3 + j,
                        format!("finite weight from outside the lattice at {c} {}", d.label()),
                    ));
                }
                lat.set_weight(c, d, w)?;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::parse(
                text.lines().count() + 1,
                1,
                format!("missing entry for cell {}", lat.coord(missing)),
            ));
        }
        Ok(lat)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.height,
            self.width,
            self.scheme.name(),
            self.nu
        );
        for i in 0..self.cell_count() {
            let c = self.coord(i);
            out.push_str(&format!("{} {}", c.row, c.col));
            for &d in self.scheme.directions() {
                out.push_str(&format!(" {}", self.weight(c, d)));
            }
            out.push('\n');
        }
        out
    }
}

fn parse_usize(tok: &str, line: usize, col: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, col, format!("expected a non-negative integer, got `{tok}`")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MazeCell {
    Free,
    Wall,
    Source,
    Food,
    Dest,
}

impl MazeCell {
    pub const fn glyph(self) -> char {
        match self {
            MazeCell::Free => '.',
            MazeCell::Wall => '#',
            MazeCell::Source => 'S',
            MazeCell::Food => 'F',
            MazeCell::Dest => 'E',
        }
    }

    pub const fn from_glyph(c: char) -> Option<Self> {
        match c {
            '.' => Some(MazeCell::Free),
            '#' => Some(MazeCell::Wall),
            'S' => Some(MazeCell::Source),
            'F' => Some(MazeCell::Food),
            'E' => Some(MazeCell::Dest),
            _ => None,
        }
    }
}

/// A labelled maze: free space, walls and the special endpoint cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MazeGrid {
    height: usize,
    width: usize,
    cells: Vec<MazeCell>,
}

impl MazeGrid {
    pub fn new(height: usize, width: usize) -> Self {
        MazeGrid {
            height,
            width,
            cells: vec![MazeCell::Free; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn index(&self, c: CellCoord) -> usize {
        c.row * self.width + c.col
    }

    pub fn coord(&self, i: usize) -> CellCoord {
        CellCoord::new(i / self.width, i % self.width)
    }

    pub fn get(&self, c: CellCoord) -> MazeCell {
        self.cells[self.index(c)]
    }

    pub fn set(&mut self, c: CellCoord, v: MazeCell) {
        let i = self.index(c);
        self.cells[i] = v;
    }

    pub fn cells(&self) -> &[MazeCell] {
        &self.cells
    }

    pub fn is_open(&self, c: CellCoord) -> bool {
        self.get(c) != MazeCell::Wall
    }

    /// All cells with label `kind`, in row-major order.
    pub fn find(&self, kind: MazeCell) -> Vec<CellCoord> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == kind)
            .map(|(i, _)| self.coord(i))
            .collect()
    }

    /// The unique cell labelled `kind`.
    pub fn unique(&self, kind: MazeCell) -> Result<CellCoord> {
        match self.find(kind).as_slice() {
            [c] => Ok(*c),
            found => Err(Error::InvalidArgument(format!(
                "expected exactly one `{}` cell, found {}",
                kind.glyph(),
                found.len()
            ))),
        }
    }

    pub fn neighbors(
        &self,
        c: CellCoord,
        scheme: Neighborhood,
    ) -> impl Iterator<Item = (Direction, CellCoord)> {
        neighbors_iter(c, scheme, self.height, self.width)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.cells.len() + self.height);
        for row in self.cells.chunks(self.width) {
            out.extend(row.iter().map(|c| c.glyph()));
            out.push('\n');
        }
        out
    }
}

/// Parses a maze drawn with `.` free, `#` wall, `S` source, `F` food and `E`
/// destination. Trailing whitespace on each row and trailing blank lines are
/// ignored.
pub fn parse_maze(text: &str) -> Result<MazeGrid> {
    let rows: Vec<&str> = text.lines().map(str::trim_end).collect();
    let rows = match rows.iter().rposition(|r| !r.is_empty()) {
        Some(last) => &rows[..=last],
        None => return Err(Error::parse(1, 1, "empty maze")),
    };
    let width = rows[0].chars().count();
    let mut cells = Vec::with_capacity(width * rows.len());
    for (r, row) in rows.iter().enumerate() {
        let mut n = 0;
        for (c, ch) in row.chars().enumerate() {
            let cell = MazeCell::from_glyph(ch).ok_or_else(|| {
                Error::parse(r + 1, c + 1, format!("unknown maze character `{ch}` at ({r},{c})"))
            })?;
            cells.push(cell);
            n += 1;
        }
        if n != width {
            return Err(Error::parse(
                r + 1,
                n.min(width) + 1,
                format!("ragged row: expected {width} cells, found {n}"),
            ));
        }
    }
    if width == 0 {
        return Err(Error::parse(1, 1, "empty maze"));
    }
    Ok(MazeGrid {
        height: rows.len(),
        width,
        cells,
    })
}
