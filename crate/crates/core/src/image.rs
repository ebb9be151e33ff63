//! Cubical filtrations of grayscale images.
//!
//! Pixels are closed unit squares. A pixel square carries its (snapped)
//! gray value; each edge and vertex of the grid takes the minimum over the
//! active pixels containing it. Two active pixels touching only at a corner
//! therefore share a vertex and are connected (8-connectivity).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::complex::{CellFiltration, Filtration, BoundaryMatrix, RawCell};
use crate::error::{Error, Result};
use crate::pointcloud::linspace;

/// Row-major grid of finite gray values.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("image", "rows and cols must be positive"));
        }
        if values.len() != rows * cols {
            return Err(Error::param(
                "image",
                format!("{} values for a {rows}x{cols} image", values.len()),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("image", "pixel values must be finite"));
        }
        Ok(GrayImage { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::param("image", "ragged rows"));
        }
        GrayImage::new(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GrayImage {
        GrayImage {
            rows: self.rows,
            cols: self.cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pixels with value ≤ t (the binary image at threshold t).
    pub fn active_pixels(&self, t: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v <= t).collect()
    }
}

/// Geometry of the cubical grid of a rows×cols image: every vertex, edge and
/// square with its boundary and the pixels whose closed box contains it.
#[derive(Clone, Debug)]
pub(crate) struct CubicalGrid {
    pub cells: Vec<GridCell>,
}

#[derive(Clone, Debug)]
pub(crate) struct GridCell {
    pub dim: usize,
    pub boundary: Vec<usize>,
    pub pixels: Vec<usize>,
}

impl CubicalGrid {
    pub fn new(rows: usize, cols: usize) -> Self {
        let pix = |r: isize, c: isize| -> Option<usize> {
            (r >= 0 && c >= 0 && (r as usize) < rows && (c as usize) < cols)
                .then(|| r as usize * cols + c as usize)
        };
        let nv = (rows + 1) * (cols + 1);
        let vid = |i: usize, j: usize| i * (cols + 1) + j;
        let nh = (rows + 1) * cols;
        let hid = |i: usize, j: usize| nv + i * cols + j;
        let vert_edges_start = nv + nh;
        let veid = |i: usize, j: usize| vert_edges_start + i * (cols + 1) + j;
        let mut cells = Vec::with_capacity(nv + nh + rows * (cols + 1) + rows * cols);
        for i in 0..=rows {
            for j in 0..=cols {
                let (r, c) = (i as isize, j as isize);
                let pixels = [(r - 1, c - 1), (r - 1, c), (r, c - 1), (r, c)]
                    .into_iter()
                    .filter_map(|(a, b)| pix(a, b))
                    .collect();
                cells.push(GridCell { dim: 0, boundary: vec![], pixels });
            }
        }
        for i in 0..=rows {
            for j in 0..cols {
                let (r, c) = (i as isize, j as isize);
                let pixels = [(r - 1, c), (r, c)].into_iter().filter_map(|(a, b)| pix(a, b)).collect();
                cells.push(GridCell { dim: 1, boundary: vec![vid(i, j), vid(i, j + 1)], pixels });
            }
        }
        for i in 0..rows {
            for j in 0..=cols {
                let (r, c) = (i as isize, j as isize);
                let pixels = [(r, c - 1), (r, c)].into_iter().filter_map(|(a, b)| pix(a, b)).collect();
                cells.push(GridCell { dim: 1, boundary: vec![vid(i, j), vid(i + 1, j)], pixels });
            }
        }
        for i in 0..rows {
            for j in 0..cols {
                cells.push(GridCell {
                    dim: 2,
                    boundary: vec![hid(i, j), hid(i + 1, j), veid(i, j), veid(i, j + 1)],
                    pixels: vec![i * cols + j],
                });
            }
        }
        CubicalGrid { cells }
    }

    /// Filtration from per-pixel entry values (`None` = never active).
    pub fn filtration(&self, pixel_values: &[Option<f64>]) -> Result<CellFiltration> {
        let mut new_index = vec![usize::MAX; self.cells.len()];
        let mut raw = Vec::new();
        for (k, cell) in self.cells.iter().enumerate() {
            let value = cell
                .pixels
                .iter()
                .filter_map(|&p| pixel_values[p])
                .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
            if let Some(value) = value {
                new_index[k] = raw.len();
                raw.push(RawCell {
                    dim: cell.dim,
                    value,
                    boundary: cell.boundary.iter().map(|&b| new_index[b]).collect(),
                });
            }
        }
        Ok(CellFiltration::from_cells(raw, None)?.0)
    }
}

/// A cubical filtration of an image together with the threshold sequence
/// that produced it. Superlevel filtrations are stored on negated values.
#[derive(Clone, Debug)]
pub struct CubicalFiltration {
    cells: CellFiltration,
    thresholds: Vec<f64>,
    superlevel: bool,
}

impl CubicalFiltration {
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// True when values (and the diagrams computed from them) are negated
    /// gray levels: a pair (b, d) means the feature appears when the
    /// threshold descends to −b and disappears at −d.
    pub fn is_superlevel(&self) -> bool {
        self.superlevel
    }

    pub fn cells(&self) -> &CellFiltration {
        &self.cells
    }
}

impl Filtration for CubicalFiltration {
    fn len(&self) -> usize {
        self.cells.len()
    }
    fn dim(&self, cell: usize) -> usize {
        self.cells.dim(cell)
    }
    fn value(&self, cell: usize) -> f64 {
        self.cells.value(cell)
    }
    fn boundary_matrix(&self) -> Result<BoundaryMatrix> {
        self.cells.boundary_matrix()
    }
}

/// Index of the smallest threshold ≥ `v`, or `None` above the last one.
pub(crate) fn snap_index(thresholds: &[f64], v: f64) -> Option<usize> {
    let i = thresholds.partition_point(|&t| t < v);
    (i < thresholds.len()).then_some(i)
}

pub(crate) fn check_increasing(thresholds: &[f64], field: &str) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::param(field, "threshold list is empty"));
    }
    if thresholds.iter().any(|t| t.is_nan()) || thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param(field, "thresholds must be strictly increasing"));
    }
    Ok(())
}

/// Sublevel filtration: each pixel enters at the smallest threshold ≥ its
/// value; pixels above the last threshold never enter.
pub fn sublevel_filtration(img: &GrayImage, thresholds: &[f64]) -> Result<CubicalFiltration> {
    check_increasing(thresholds, "thresholds")?;
    let snapped: Vec<Option<f64>> = img
        .values
        .iter()
        .map(|&v| snap_index(thresholds, v).map(|i| thresholds[i]))
        .collect();
    let cells = CubicalGrid::new(img.rows, img.cols).filtration(&snapped)?;
    Ok(CubicalFiltration {
        cells,
        thresholds: thresholds.to_vec(),
        superlevel: false,
    })
}

/// Superlevel filtration for strictly decreasing thresholds, realized as the
/// sublevel filtration of the negated image.
pub fn superlevel_filtration(img: &GrayImage, thresholds: &[f64]) -> Result<CubicalFiltration> {
    if thresholds.is_empty() {
        return Err(Error::param("thresholds", "threshold list is empty"));
    }
    if thresholds.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("thresholds", "superlevel thresholds must be strictly decreasing"));
    }
    let negated: Vec<f64> = thresholds.iter().map(|t| -t).collect();
    let mut f = sublevel_filtration(&img.map(|v| -v), &negated)?;
    f.superlevel = true;
    Ok(f)
}

/// 64 thresholds evenly spanning [0, 255].
pub fn default_thresholds() -> Vec<f64> {
    linspace(0.0, 255.0, 64)
}

/// Every distinct pixel value, increasing (unsnapped filtration).
pub fn raw_thresholds(img: &GrayImage) -> Vec<f64> {
    let mut v = img.values.clone();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridMetric {
    /// 8-neighbour steps, distance max(|Δr|, |Δc|).
    Chessboard,
    /// 4-neighbour steps, distance |Δr| + |Δc|.
    Taxicab,
}

/// Distance from every pixel to the nearest black (0-valued) pixel.
/// Feeding the result to [`sublevel_filtration`] gives the erosion filtration.
pub fn erosion_values(binary: &GrayImage, metric: GridMetric) -> Result<GrayImage> {
    if binary.values.iter().any(|&v| v != 0.0 && v != 1.0) {
        return Err(Error::param("image", "erosion expects a binary image with values in {0, 1}"));
    }
    let sources: Vec<usize> = (0..binary.values.len()).filter(|&i| binary.values[i] == 0.0).collect();
    if sources.is_empty() {
        return Err(Error::Undefined("distance to black is undefined: image has no black pixel".into()));
    }
    let (rows, cols) = (binary.rows, binary.cols);
    let mut dist = vec![usize::MAX; rows * cols];
    let mut queue = VecDeque::new();
    for s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    let steps: &[(isize, isize)] = match metric {
        GridMetric::Taxicab => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
        GridMetric::Chessboard => &[(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)],
    };
    while let Some(p) = queue.pop_front() {
        let (r, c) = ((p / cols) as isize, (p % cols) as isize);
        for (dr, dc) in steps {
            let (nr, nc) = (r + dr, c + dc);
            if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                continue;
            }
            let q = nr as usize * cols + nc as usize;
            if dist[q] == usize::MAX {
                dist[q] = dist[p] + 1;
                queue.push_back(q);
            }
        }
    }
    GrayImage::new(rows, cols, dist.into_iter().map(|d| d as f64).collect())
}

/// Distance from every pixel to the nearest white pixel (erosion of the
/// complement), the dilation counterpart of [`erosion_values`].
pub fn dilation_values(binary: &GrayImage, metric: GridMetric) -> Result<GrayImage> {
    erosion_values(&binary.map(|v| 1.0 - v), metric)
}

/// Erosion minus dilation: positive outside the black region, negative inside.
pub fn signed_distance_values(binary: &GrayImage, metric: GridMetric) -> Result<GrayImage> {
    let out = erosion_values(binary, metric)?;
    let inside = dilation_values(binary, metric)?;
    GrayImage::new(
        binary.rows,
        binary.cols,
        out.values.iter().zip(&inside.values).map(|(a, b)| a - b).collect(),
    )
}

/// 8-connected component labels of a pixel mask; `None` for inactive pixels.
pub fn label_components(rows: usize, cols: usize, mask: &[bool]) -> (usize, Vec<Option<usize>>) {
    let mut labels = vec![None; rows * cols];
    let mut count = 0;
    for start in 0..rows * cols {
        if !mask[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(count);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            let (r, c) = ((p / cols) as isize, (p % cols) as isize);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                        continue;
                    }
                    let q = nr as usize * cols + nc as usize;
                    if mask[q] && labels[q].is_none() {
                        labels[q] = Some(count);
                        stack.push(q);
                    }
                }
            }
        }
        count += 1;
    }
    (count, labels)
}
