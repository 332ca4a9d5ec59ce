//! Frame rendering for traces: UTF-8 text grids and binary 8-bit PGM.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lee_ca::LeeGrid;
use crate::physarum::{PhysarumField, Topology};
use crate::wave_ca::WaveConfiguration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameFormat {
    Ascii,
    Pgm,
}

impl FrameFormat {
    pub fn extension(self) -> &'static str {
        match self {
            FrameFormat::Ascii => "txt",
            FrameFormat::Pgm => "pgm",
        }
    }
}

impl FromStr for FrameFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(FrameFormat::Ascii),
            "pgm" => Ok(FrameFormat::Pgm),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

impl fmt::Display for FrameFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameFormat::Ascii => "ascii",
            FrameFormat::Pgm => "pgm",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Snapshot<'a> {
    Wave(&'a WaveConfiguration<'a>),
    Lee(&'a LeeGrid),
    Physarum(&'a PhysarumField),
}

/// Renders one frame. Text frames hold one glyph per cell and a newline per
/// row; PGM frames are P5 with one byte per cell.
pub fn emit_frame(snapshot: Snapshot<'_>, format: FrameFormat) -> Result<Vec<u8>> {
    match (snapshot, format) {
        (Snapshot::Wave(cfg), FrameFormat::Ascii) => {
            let w = cfg.lattice().width();
            Ok(text(cfg.cells().iter().map(|c| c.phase.glyph()), w))
        }
        (Snapshot::Lee(g), FrameFormat::Ascii) => Ok(text(g.cells().iter().map(|s| s.glyph()), g.width())),
        (Snapshot::Physarum(f), FrameFormat::Ascii) => {
            let glyphs = (0..f.topology.len()).map(|i| match f.topology[i] {
                Topology::Wall => '#',
                Topology::Origin => 'S',
                Topology::Food => 'F',
                Topology::Free if f.pseudo[i] => 'o',
                Topology::Free if f.phys[i] > 0.0 => '+',
                Topology::Free => '.',
            });
            Ok(text(glyphs, f.width()))
        }
        (Snapshot::Physarum(f), FrameFormat::Pgm) => Ok(pgm(&f.phys, f.width(), f.height())),
        (Snapshot::Wave(_), FrameFormat::Pgm) => Err(Error::UnsupportedFormat("pgm frames of the wave automaton".into())),
        (Snapshot::Lee(_), FrameFormat::Pgm) => Err(Error::UnsupportedFormat("pgm frames of the Lee router".into())),
    }
}

fn text(glyphs: impl Iterator<Item = char>, width: usize) -> Vec<u8> {
    let mut s = String::new();
    for (i, g) in glyphs.enumerate() {
        s.push(g);
        if (i + 1) % width == 0 {
            s.push('\n');
        }
    }
    s.into_bytes()
}

/// Grey levels scaled so the largest value maps to 255.
fn pgm(values: &[f64], width: usize, height: usize) -> Vec<u8> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend(values.iter().map(|&v| {
        if max > 0.0 {
            (v / max * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    out
}
