//! Deterministic rasters of basins, the Markov partition and the basins of
//! the boundary map, written as binary P6 pixmaps.

mod palette;

pub use palette::Palette;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::chebfam::{attractors, classify_region, indeterminacy_points, FamilyEval, FamilyParameter, RegionLabel};
use crate::dyn1d::{BasinClassifier, Dyn1dError, ExtC, RatMap1D};
use crate::planemap::MapEval;
use crate::projgeom::{fs_distance, AdaptedChart, ProjPoint, C64};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("palette has no color for code {0}")]
    MissingCode(u8),
    #[error("palette line {line}: {msg}")]
    PaletteParse { line: usize, msg: String },
    #[error("invalid viewport: {0}")]
    Viewport(String),
    #[error("invalid size: {0}")]
    Size(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Dyn1d(#[from] Dyn1dError),
}

/// Basin codes: `1 + j` for even entry time, `4 + j` for odd.
pub const CODE_INTERIOR: u8 = 0;
pub const CODE_SENTINEL: u8 = 7;
/// Partition codes besides the region symbols `0..=3`.
pub const CODE_OUTSIDE: u8 = 4;
pub const CODE_AMBIGUOUS: u8 = 5;

/// Capture radius (FS) around the attracting fixed points.
pub const CAPTURE_RADIUS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self, RenderError> {
        let ok = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) && xmin < xmax && ymin < ymax;
        if !ok {
            return Err(RenderError::Viewport(format!("{xmin},{xmax},{ymin},{ymax}")));
        }
        Ok(Self { xmin, xmax, ymin, ymax })
    }

    /// `−3.5 ≤ re z ≤ 4.5`, `−1.5 ≤ im z ≤ 1.5`.
    pub fn boundary_map_default() -> Self {
        Self { xmin: -3.5, xmax: 4.5, ymin: -1.5, ymax: 1.5 }
    }

    /// Square around the triangle of attracting points in the adapted chart.
    pub fn adapted_default() -> Self {
        Self { xmin: -1.25, xmax: 1.25, ymin: -1.25, ymax: 1.25 }
    }

    pub fn is_symmetric(&self) -> bool {
        self.ymin == -self.ymax
    }
}

impl FromStr for Viewport {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| RenderError::Viewport(format!("{s}: {e}")))?;
        match v.as_slice() {
            [a, b, c, d] => Self::new(*a, *b, *c, *d),
            _ => Err(RenderError::Viewport(format!("{s}: expected four numbers"))),
        }
    }
}

impl fmt::Display for Viewport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.xmin, self.xmax, self.ymin, self.ymax)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, viewport: Viewport) -> Result<Self, RenderError> {
        if width == 0 || height == 0 {
            return Err(RenderError::Size(format!("{width}x{height}")));
        }
        Ok(Self { width, height, viewport })
    }

    /// Parses `WxH`.
    pub fn parse_size(s: &str) -> Result<(usize, usize), RenderError> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| RenderError::Size(s.to_string()))?;
        let p = |v: &str| v.trim().parse::<usize>().map_err(|_| RenderError::Size(s.to_string()));
        let (w, h) = (p(w)?, p(h)?);
        if w == 0 || h == 0 {
            return Err(RenderError::Size(s.to_string()));
        }
        Ok((w, h))
    }

    /// Center of pixel `(i, j)`, row `j = 0` at the top.
    pub fn pixel_center(&self, i: usize, j: usize) -> (f64, f64) {
        let v = &self.viewport;
        let dx = (v.xmax - v.xmin) / self.width as f64;
        let dy = (v.ymax - v.ymin) / self.height as f64;
        let cx = 0.5 * (v.xmin + v.xmax);
        let cy = 0.5 * (v.ymin + v.ymax);
        (
            cx + (2.0 * i as f64 + 1.0 - self.width as f64) * 0.5 * dx,
            cy + (self.height as f64 - 1.0 - 2.0 * j as f64) * 0.5 * dy,
        )
    }

    /// Pixel containing `(x, y)`, if inside the viewport.
    pub fn pixel_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let v = &self.viewport;
        let i = ((x - v.xmin) / (v.xmax - v.xmin) * self.width as f64).floor();
        let j = ((v.ymax - y) / (v.ymax - v.ymin) * self.height as f64).floor();
        (i >= 0.0 && j >= 0.0 && (i as usize) < self.width && (j as usize) < self.height)
            .then_some((i as usize, j as usize))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pixel {
    pub code: u8,
    pub time: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageGrid {
    pub spec: GridSpec,
    pub pixels: Vec<Pixel>,
}

impl ImageGrid {
    fn render(spec: &GridSpec, f: impl Fn(f64, f64) -> Pixel + Sync) -> Self {
        let mut pixels = vec![Pixel::default(); spec.width * spec.height];
        pixels
            .par_chunks_mut(spec.width)
            .enumerate()
            .for_each(|(j, row)| {
                for (i, px) in row.iter_mut().enumerate() {
                    let (x, y) = spec.pixel_center(i, j);
                    *px = f(x, y);
                }
            });
        Self { spec: *spec, pixels }
    }

    pub fn width(&self) -> usize {
        self.spec.width
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    pub fn get(&self, i: usize, j: usize) -> Pixel {
        self.pixels[j * self.spec.width + i]
    }

    /// Pixel count per code.
    pub fn census(&self) -> BTreeMap<u8, usize> {
        let mut m = BTreeMap::new();
        for p in &self.pixels {
            *m.entry(p.code).or_insert(0) += 1;
        }
        m
    }

    pub fn census_csv(&self) -> String {
        let mut out = String::from("code,count\n");
        for (c, n) in self.census() {
            out.push_str(&format!("{c},{n}\n"));
        }
        out
    }

    /// Rows in reverse order.
    pub fn flipped_vertically(&self) -> Self {
        let w = self.spec.width;
        let pixels = self.pixels.chunks(w).rev().flatten().copied().collect();
        Self { spec: self.spec, pixels }
    }

    /// Binary P6 image.
    pub fn pixmap_bytes(&self, palette: &Palette) -> Result<Vec<u8>, RenderError> {
        let colors = palette.lookup_table(self.census().keys().copied())?;
        let header = format!("P6\n# chebdyn\n{} {}\n255\n", self.spec.width, self.spec.height);
        let mut out = Vec::with_capacity(header.len() + 3 * self.pixels.len());
        out.extend_from_slice(header.as_bytes());
        for p in &self.pixels {
            out.extend_from_slice(&colors[p.code as usize].expect("checked above"));
        }
        Ok(out)
    }
}

/// Writes the image; the palette is checked before the file is created.
pub fn write_pixmap(grid: &ImageGrid, palette: &Palette, path: &Path) -> Result<(), RenderError> {
    let bytes = grid.pixmap_bytes(palette)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

fn banded(target: usize, time: usize) -> u8 {
    if target > 2 {
        return CODE_SENTINEL;
    }
    target as u8 + if time.is_multiple_of(2) { 1 } else { 4 }
}

/// Classifies one real point of the adapted chart for [`render_basins`].
pub fn basin_pixel(ev: &FamilyEval, sinks: &[ProjPoint; 3], p: ProjPoint, max_iter: usize) -> Pixel {
    let ind = indeterminacy_points();
    let mut q = p;
    for n in 0..=max_iter {
        if let Some(j) = sinks.iter().position(|s| fs_distance(s, &q) < CAPTURE_RADIUS) {
            return Pixel { code: banded(j, n), time: n as u32 };
        }
        if ind.iter().any(|a| fs_distance(a, &q) < 1e-9) {
            return Pixel { code: CODE_SENTINEL, time: n as u32 };
        }
        if n == max_iter {
            break;
        }
        q = match ProjPoint::new(ev.eval(&q.coords())) {
            Ok(v) => v,
            Err(_) => return Pixel { code: CODE_SENTINEL, time: n as u32 },
        };
    }
    Pixel { code: CODE_INTERIOR, time: max_iter as u32 }
}

/// Basins of the attracting fixed points of `f_t` over a real viewport of
/// the adapted chart, banded by entry-time parity.
pub fn render_basins(t: &FamilyParameter, spec: &GridSpec, max_iter: usize) -> ImageGrid {
    let ev = FamilyEval { t: t.value() };
    let sinks = attractors(t.value());
    let chart = AdaptedChart::new();
    ImageGrid::render(spec, |x, y| basin_pixel(&ev, &sinks, chart.from_real(x, y), max_iter))
}

/// Partition code of `f_t^k(p)`, or [`CODE_OUTSIDE`] when `p ∉ U`.
pub fn partition_pixel(ev: &FamilyEval, p: ProjPoint, k: usize) -> Pixel {
    let code = |q: &ProjPoint| match classify_region(q) {
        Ok(l) => match l.symbol() {
            Some(s) => s,
            None if l == RegionLabel::OutsideU => CODE_OUTSIDE,
            None => CODE_AMBIGUOUS,
        },
        Err(_) => CODE_AMBIGUOUS,
    };
    let c0 = code(&p);
    if c0 == CODE_OUTSIDE || k == 0 {
        return Pixel { code: c0, time: 0 };
    }
    let mut q = p;
    for _ in 0..k {
        q = match ProjPoint::new(ev.eval(&q.coords())) {
            Ok(v) => v,
            Err(_) => return Pixel { code: CODE_AMBIGUOUS, time: k as u32 },
        };
    }
    Pixel { code: code(&q), time: k as u32 }
}

/// Points of `U` colored by the region containing their `k`-th image.
pub fn render_partition(t: &FamilyParameter, spec: &GridSpec, k: usize) -> ImageGrid {
    let ev = FamilyEval { t: t.value() };
    let chart = AdaptedChart::new();
    ImageGrid::render(spec, |x, y| partition_pixel(&ev, chart.from_real(x, y), k))
}

/// Basins of a rational map of the sphere over a rectangle of `C`; code 0
/// marks points unresolved within the budget (near the Julia set).
pub fn render_julia_1d(map: &RatMap1D, spec: &GridSpec, max_iter: usize) -> Result<ImageGrid, RenderError> {
    let bc = BasinClassifier::new(map)?;
    Ok(ImageGrid::render(spec, |x, y| {
        let r = bc.classify(ExtC::Finite(C64::new(x, y)), max_iter);
        match r.target {
            Some(j) => Pixel { code: banded(j, r.escape_time), time: r.escape_time as u32 },
            None => Pixel { code: CODE_INTERIOR, time: max_iter as u32 },
        }
    }))
}

#[cfg(test)]
mod tests;
