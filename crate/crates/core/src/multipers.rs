//! Two-parameter filtrations over a threshold grid, their bigraded Betti
//! numbers, and row-by-row (slice) vectorization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{cell_betti, CellFiltration, FilteredComplex, RawCell, Simplex};
use crate::error::{Error, Result};
use crate::flag::flag_filtration;
use crate::graph::Graph;
use crate::image::{check_increasing, snap_index, CubicalGrid, GrayImage};
use crate::persistence::compute_persistence;
use crate::pointcloud::{pairwise_distances, Metric, PointCloud};
use crate::vectorize::{landscape, silhouette};

pub type Grade = (usize, usize);

/// A cell of a bifiltration. It is present at grid index (i, j) when some
/// grade (a, b) in `grades` has a ≤ i and b ≤ j.
#[derive(Clone, Debug, PartialEq)]
pub struct BiCell {
    pub dim: usize,
    pub boundary: Vec<usize>,
    pub grades: Vec<Grade>,
}

impl BiCell {
    pub fn present_at(&self, i: usize, j: usize) -> bool {
        self.grades.iter().any(|&(a, b)| a <= i && b <= j)
    }

    /// Earliest column at which the cell is present in row `i`.
    fn entry_column(&self, i: usize) -> Option<usize> {
        self.grades.iter().filter(|g| g.0 <= i).map(|g| g.1).min()
    }

    fn entry_row(&self, j: usize) -> Option<usize> {
        self.grades.iter().filter(|g| g.1 <= j).map(|g| g.0).min()
    }
}

/// A grid of nested complexes indexed by `rows × cols` thresholds.
#[derive(Clone, Debug)]
pub struct Bifiltration {
    rows: Vec<f64>,
    cols: Vec<f64>,
    cells: Vec<BiCell>,
    truncation: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Fix a row, filter along the columns.
    #[default]
    Horizontal,
    /// Fix a column, filter along the rows.
    Vertical,
}

impl Bifiltration {
    /// Cells must list faces before cofaces. Every face must be present
    /// wherever its coface is.
    pub fn new(rows: Vec<f64>, cols: Vec<f64>, cells: Vec<BiCell>, truncation: Option<usize>) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::param("thresholds", "both axes need at least one threshold"));
        }
        for (k, c) in cells.iter().enumerate() {
            if c.grades.iter().any(|&(a, b)| a >= rows.len() || b >= cols.len()) {
                return Err(Error::Structural(format!("cell {k} has a grade outside the grid")));
            }
            for &f in &c.boundary {
                let face = cells
                    .get(f)
                    .filter(|_| f < k)
                    .ok_or_else(|| Error::Structural(format!("cell {k} has face {f} listed after it")))?;
                if face.dim + 1 != c.dim || c.grades.iter().any(|&(a, b)| !face.present_at(a, b)) {
                    return Err(Error::Structural(format!("cell {k} is present before its face {f}")));
                }
            }
        }
        Ok(Bifiltration { rows, cols, cells, truncation })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn row_thresholds(&self) -> &[f64] {
        &self.rows
    }

    pub fn col_thresholds(&self) -> &[f64] {
        &self.cols
    }

    pub fn cells(&self) -> &[BiCell] {
        &self.cells
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Indices of the cells present at (i, j).
    pub fn cells_at(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&k| self.cells[k].present_at(i, j)).collect()
    }

    /// True if every grid complex is closed under faces and the complexes
    /// nest along both axes.
    pub fn is_monotone(&self) -> bool {
        let (m, n) = self.shape();
        (0..m).all(|i| {
            (0..n).all(|j| {
                self.cells.iter().all(|c| {
                    let here = c.present_at(i, j);
                    let closed = !here || c.boundary.iter().all(|&f| self.cells[f].present_at(i, j));
                    let nested = !here
                        || ((i + 1 == m || c.present_at(i + 1, j)) && (j + 1 == n || c.present_at(i, j + 1)));
                    closed && nested
                })
            })
        })
    }

    fn sub_filtration(&self, entry: impl Fn(&BiCell) -> Option<usize>, values: &[f64]) -> Result<CellFiltration> {
        let mut new_index = vec![usize::MAX; self.cells.len()];
        let mut raw = Vec::new();
        for (k, c) in self.cells.iter().enumerate() {
            if let Some(e) = entry(c) {
                new_index[k] = raw.len();
                raw.push(RawCell {
                    dim: c.dim,
                    value: values[e],
                    boundary: c.boundary.iter().map(|&f| new_index[f]).collect(),
                });
            }
        }
        Ok(CellFiltration::from_cells(raw, self.truncation)?.0)
    }

    /// Row `i` as a one-parameter filtration valued by the column thresholds.
    pub fn row_filtration(&self, i: usize) -> Result<CellFiltration> {
        self.sub_filtration(|c| c.entry_column(i), &self.cols)
    }

    /// Column `j` as a one-parameter filtration valued by the row thresholds.
    pub fn column_filtration(&self, j: usize) -> Result<CellFiltration> {
        self.sub_filtration(|c| c.entry_row(j), &self.rows)
    }

    fn betti_at(&self, i: usize, j: usize, dim: usize) -> usize {
        let present = self.cells_at(i, j);
        let mut new_index = vec![usize::MAX; self.cells.len()];
        for (pos, &k) in present.iter().enumerate() {
            new_index[k] = pos;
        }
        let dims: Vec<usize> = present.iter().map(|&k| self.cells[k].dim).collect();
        let columns: Vec<Vec<usize>> = present
            .iter()
            .map(|&k| {
                let mut col: Vec<usize> = self.cells[k].boundary.iter().map(|&f| new_index[f]).collect();
                col.sort_unstable();
                col
            })
            .collect();
        cell_betti(&dims, &columns, dim)[dim]
    }
}

/// β_dim at every grid point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedBettiTensor {
    pub dim: usize,
    pub values: Vec<Vec<usize>>,
}

fn check_dim(bf: &Bifiltration, dim: usize) -> Result<()> {
    match bf.truncation {
        Some(cap) if dim + 1 > cap => Err(Error::param(
            "dim",
            format!("β_{dim} needs cells of dimension {} but the bifiltration stops at {cap}", dim + 1),
        )),
        _ => Ok(()),
    }
}

/// Static Betti numbers of every grid complex, computed cell by cell.
pub fn bigraded_betti(bf: &Bifiltration, dim: usize) -> Result<BigradedBettiTensor> {
    check_dim(bf, dim)?;
    let (m, n) = bf.shape();
    let values = (0..m)
        .into_par_iter()
        .map(|i| (0..n).map(|j| bf.betti_at(i, j, dim)).collect())
        .collect();
    Ok(BigradedBettiTensor { dim, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SliceVectorizer {
    Betti,
    Silhouette { p: f64 },
    Landscape { level: usize },
}

/// One vector per slice, all on the same grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceMatrix {
    pub dim: usize,
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

/// Computes the diagram of each slice and vectorizes it on the thresholds
/// of the other axis, giving an m × n (or n × m) matrix.
pub fn slice_vectorize(bf: &Bifiltration, dim: usize, vectorizer: SliceVectorizer, axis: Axis) -> Result<SliceMatrix> {
    check_dim(bf, dim)?;
    let (count, grid) = match axis {
        Axis::Horizontal => (bf.rows.len(), bf.cols.clone()),
        Axis::Vertical => (bf.cols.len(), bf.rows.clone()),
    };
    if grid.len() < 2 && !matches!(vectorizer, SliceVectorizer::Betti) {
        return Err(Error::param("thresholds", "slice grid needs at least 2 thresholds"));
    }
    let values = (0..count)
        .into_par_iter()
        .map(|s| {
            let f = match axis {
                Axis::Horizontal => bf.row_filtration(s)?,
                Axis::Vertical => bf.column_filtration(s)?,
            };
            let pd = compute_persistence(&f, dim)?.swap_remove(dim);
            Ok(match vectorizer {
                SliceVectorizer::Betti => grid.iter().map(|&t| pd.betti_at(t) as f64).collect(),
                SliceVectorizer::Silhouette { p } => silhouette(&pd, p, &grid)?.values,
                SliceVectorizer::Landscape { level } => landscape(&pd, level, &grid)?.values,
            })
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SliceMatrix { dim, axis, grid, values })
}

/// Builds a bifiltration from a simplicial complex whose simplices each
/// get a single grade (or none, if absent). Faces precede cofaces because
/// the complex is ordered by dimension when all values tie.
fn from_simplices(
    complex: &FilteredComplex,
    rows: &[f64],
    cols: &[f64],
    truncation: Option<usize>,
    grade: impl Fn(&Simplex, f64) -> Option<Grade>,
) -> Result<Bifiltration> {
    let mut ordered: Vec<(usize, &Simplex, f64)> =
        complex.cells().iter().enumerate().map(|(k, (s, v))| (k, s, *v)).collect();
    ordered.sort_by_key(|&(k, s, _)| (s.dim(), k));
    let mut index = std::collections::HashMap::new();
    let mut cells = Vec::new();
    for (_, s, v) in ordered {
        let Some(g) = grade(s, v) else { continue };
        let boundary = s.facets().map(|f| index[&f]).collect();
        index.insert(s.clone(), cells.len());
        cells.push(BiCell { dim: s.dim(), boundary, grades: vec![g] });
    }
    Bifiltration::new(rows.to_vec(), cols.to_vec(), cells, truncation)
}

fn snap_all(values: &[f64], thresholds: &[f64], field: &str) -> Result<Vec<usize>> {
    let snapped: Vec<Option<usize>> = values.iter().map(|&v| snap_index(thresholds, v)).collect();
    let uncovered: Vec<usize> = (0..values.len()).filter(|&i| snapped[i].is_none()).collect();
    if !uncovered.is_empty() {
        return Err(Error::param(field, format!("thresholds do not cover vertices {uncovered:?}")));
    }
    Ok(snapped.into_iter().flatten().collect())
}

fn clique_complex(g: &Graph, max_dim: usize) -> Result<FilteredComplex> {
    let edges: Vec<(usize, usize, f64)> = g.edges().map(|(u, v)| (u, v, 0.0)).collect();
    flag_filtration(&vec![Some(0.0); g.n_vertices()], &edges, max_dim, Some(max_dim))
}

/// Bifiltration of the clique complex (dimension ≤ `max_clique_dim`) by
/// two node functions: V_ij = {v : f(v) ≤ α_i, h(v) ≤ β_j}.
pub fn graph_bifiltration(
    g: &Graph,
    f: &[f64],
    h: &[f64],
    alphas: &[f64],
    betas: &[f64],
    max_clique_dim: usize,
) -> Result<Bifiltration> {
    check_increasing(alphas, "alphas")?;
    check_increasing(betas, "betas")?;
    if f.len() != g.n_vertices() || h.len() != g.n_vertices() {
        return Err(Error::param("node_values", "one value per vertex for both functions"));
    }
    let fa = snap_all(f, alphas, "alphas")?;
    let hb = snap_all(h, betas, "betas")?;
    let complex = clique_complex(g, max_clique_dim)?;
    from_simplices(&complex, alphas, betas, Some(max_clique_dim), |s, _| {
        let a = s.vertices().iter().map(|&v| fa[v]).max()?;
        let b = s.vertices().iter().map(|&v| hb[v]).max()?;
        Some((a, b))
    })
}

/// Node function along rows, edge weights along columns. A vertex enters
/// its column with its lightest incident edge (isolated vertices at the
/// last column); higher cliques at their latest edge.
pub fn graph_edge_bifiltration(
    g: &Graph,
    f: &[f64],
    alphas: &[f64],
    betas: &[f64],
    max_clique_dim: usize,
) -> Result<Bifiltration> {
    check_increasing(alphas, "alphas")?;
    check_increasing(betas, "betas")?;
    if f.len() != g.n_vertices() {
        return Err(Error::param("node_values", "one value per vertex"));
    }
    let weights = g
        .edge_weights()
        .ok_or_else(|| Error::param("edge_weights", "edge bifiltration needs edge weights"))?;
    let fa = snap_all(f, alphas, "alphas")?;
    let mut edge_col = std::collections::HashMap::new();
    let mut vertex_col = vec![betas.len() - 1; g.n_vertices()];
    for (&(u, v), &w) in weights {
        let j = snap_index(betas, w)
            .ok_or_else(|| Error::param("betas", format!("edge ({u}, {v}) weight {w} above the last threshold")))?;
        edge_col.insert((u, v), j);
        vertex_col[u] = vertex_col[u].min(j);
        vertex_col[v] = vertex_col[v].min(j);
    }
    let complex = clique_complex(g, max_clique_dim)?;
    from_simplices(&complex, alphas, betas, Some(max_clique_dim), |s, _| {
        let vs = s.vertices();
        let a = vs.iter().map(|&v| fa[v]).max()?;
        let b = if vs.len() == 1 {
            vertex_col[vs[0]]
        } else {
            let mut b = 0;
            for (x, &u) in vs.iter().enumerate() {
                for &w in &vs[x + 1..] {
                    b = b.max(edge_col[&(u, w)]);
                }
            }
            b
        };
        Some((a, b))
    })
}

fn minimal_grades(mut grades: Vec<Grade>) -> Vec<Grade> {
    grades.sort_unstable();
    grades.dedup();
    let all = grades.clone();
    grades.retain(|&g| !all.iter().any(|&h| h != g && h.0 <= g.0 && h.1 <= g.1));
    grades
}

fn cubical_bifiltration(
    rows: usize,
    cols: usize,
    pixel_grades: &[Option<Grade>],
    alphas: &[f64],
    betas: &[f64],
) -> Result<Bifiltration> {
    let grid = CubicalGrid::new(rows, cols);
    let mut new_index = vec![usize::MAX; grid.cells.len()];
    let mut cells = Vec::new();
    for (k, c) in grid.cells.iter().enumerate() {
        let grades = minimal_grades(c.pixels.iter().filter_map(|&p| pixel_grades[p]).collect());
        if grades.is_empty() {
            continue;
        }
        new_index[k] = cells.len();
        cells.push(BiCell {
            dim: c.dim,
            boundary: c.boundary.iter().map(|&f| new_index[f]).collect(),
            grades,
        });
    }
    Bifiltration::new(alphas.to_vec(), betas.to_vec(), cells, None)
}

fn check_shapes(channels: &[&GrayImage]) -> Result<()> {
    let (r, c) = (channels[0].rows(), channels[0].cols());
    if channels.iter().any(|ch| ch.rows() != r || ch.cols() != c) {
        return Err(Error::param("channels", "channel images differ in shape"));
    }
    Ok(())
}

/// Pixel active at (m, n) iff A ≤ α_m and B ≤ β_n; cells follow the
/// closed-box rule of the single-channel cubical filtration.
pub fn image_bifiltration(a: &GrayImage, b: &GrayImage, alphas: &[f64], betas: &[f64]) -> Result<Bifiltration> {
    check_shapes(&[a, b])?;
    check_increasing(alphas, "alphas")?;
    check_increasing(betas, "betas")?;
    let grades: Vec<Option<Grade>> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| Some((snap_index(alphas, x)?, snap_index(betas, y)?)))
        .collect();
    cubical_bifiltration(a.rows(), a.cols(), &grades, alphas, betas)
}

/// Three-channel image with one threshold list per channel. The 3-axis
/// grid is never materialized; [`TriChannelImage::slice`] yields the
/// bifiltration at a fixed third index.
#[derive(Clone, Debug)]
pub struct TriChannelImage {
    channels: [GrayImage; 3],
    thresholds: [Vec<f64>; 3],
}

impl TriChannelImage {
    pub fn new(channels: [GrayImage; 3], thresholds: [Vec<f64>; 3]) -> Result<Self> {
        check_shapes(&[&channels[0], &channels[1], &channels[2]])?;
        for (t, name) in thresholds.iter().zip(["alphas", "betas", "gammas"]) {
            check_increasing(t, name)?;
        }
        Ok(TriChannelImage { channels, thresholds })
    }

    pub fn depth(&self) -> usize {
        self.thresholds[2].len()
    }

    /// The (α, β) bifiltration restricted to pixels with C ≤ γ_r.
    pub fn slice(&self, r: usize) -> Result<Bifiltration> {
        let gamma = *self.thresholds[2]
            .get(r)
            .ok_or_else(|| Error::param("r", format!("slice {r} outside 0..{}", self.depth())))?;
        let [a, b, c] = &self.channels;
        let [alphas, betas, _] = &self.thresholds;
        let grades: Vec<Option<Grade>> = (0..a.values().len())
            .map(|p| {
                if c.values()[p] > gamma {
                    return None;
                }
                Some((snap_index(alphas, a.values()[p])?, snap_index(betas, b.values()[p])?))
            })
            .collect();
        cubical_bifiltration(a.rows(), a.cols(), &grades, alphas, betas)
    }
}

/// Number of points within `radius` of each point, itself included.
pub fn point_density(pc: &PointCloud, radius: f64, metric: Metric) -> Result<Vec<usize>> {
    if !(radius > 0.0) {
        return Err(Error::param("density_radius", "must be positive"));
    }
    let dm = pairwise_distances(pc, metric);
    Ok((0..pc.len()).map(|i| dm.row(i).iter().filter(|&&d| d <= radius).count()).collect())
}

/// Row i is the Rips filtration (dimension ≤ `max_cell_dim`) of the points
/// whose density is at least `density_thresholds[i]` (a decreasing list);
/// columns are the Rips scales.
pub fn density_rips_bifiltration(
    pc: &PointCloud,
    density_radius: f64,
    density_thresholds: &[f64],
    scales: &[f64],
    max_cell_dim: usize,
) -> Result<Bifiltration> {
    if density_thresholds.is_empty() || density_thresholds.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("density_thresholds", "must be nonempty and strictly decreasing"));
    }
    check_increasing(scales, "scales")?;
    if max_cell_dim < 1 {
        return Err(Error::param("max_cell_dim", "must be at least 1"));
    }
    let density = point_density(pc, density_radius, Metric::Euclidean)?;
    let row_of: Vec<Option<usize>> = density
        .iter()
        .map(|&d| density_thresholds.iter().position(|&t| d as f64 >= t))
        .collect();
    let dm = pairwise_distances(pc, Metric::Euclidean);
    let mut edges = Vec::new();
    for i in 0..pc.len() {
        for j in i + 1..pc.len() {
            if let Some(col) = snap_index(scales, dm.get(i, j)) {
                edges.push((i, j, col as f64));
            }
        }
    }
    let n = pc.len();
    let truncation = (max_cell_dim + 1 < n).then_some(max_cell_dim);
    let complex = flag_filtration(&vec![Some(0.0); n], &edges, max_cell_dim, truncation)?;
    from_simplices(&complex, density_thresholds, scales, truncation, |s, v| {
        let mut row = 0;
        for &p in s.vertices() {
            row = row.max(row_of[p]?);
        }
        Some((row, v as usize))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{betti_numbers, SimplicialComplex};

    fn cycle3() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    /// Explicit clique complex of the induced subgraph, then static Betti.
    fn oracle(g: &Graph, keep: &[bool], dim: usize) -> usize {
        let mut gens = Vec::new();
        for v in 0..g.n_vertices() {
            if keep[v] {
                gens.push(Simplex::vertex(v));
            }
        }
        let adj = |u: usize, v: usize| g.has_edge(u, v);
        for u in 0..g.n_vertices() {
            for v in u + 1..g.n_vertices() {
                if keep[u] && keep[v] && adj(u, v) {
                    gens.push(Simplex::new(vec![u, v]).unwrap());
                    for w in v + 1..g.n_vertices() {
                        if keep[w] && adj(u, w) && adj(v, w) {
                            gens.push(Simplex::new(vec![u, v, w]).unwrap());
                        }
                    }
                }
            }
        }
        let k = SimplicialComplex::closure(gens);
        if k.is_empty() {
            return 0;
        }
        betti_numbers(&k, dim.min(k.max_dim().unwrap_or(0))).unwrap().get(dim).copied().unwrap_or(0)
    }

    #[test]
    fn cycle_grid_matches_oracle() {
        let g = cycle3();
        let f = [0.0, 1.0, 2.0];
        let t = [0.0, 1.0, 2.0];
        let bf = graph_bifiltration(&g, &f, &f, &t, &t, 2).unwrap();
        assert!(bf.is_monotone());
        for dim in 0..2 {
            let tensor = bigraded_betti(&bf, dim).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let keep: Vec<bool> = (0..3).map(|v| f[v] <= t[i] && f[v] <= t[j]).collect();
                    assert_eq!(tensor.values[i][j], oracle(&g, &keep, dim), "({i},{j}) dim {dim}");
                }
            }
        }
    }

    #[test]
    fn constant_axis_repeats_rows() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let h = [0.0, 1.0, 2.0, 3.0];
        let bf = graph_bifiltration(&g, &[0.0; 4], &h, &[0.0, 1.0], &h, 2).unwrap();
        let t = bigraded_betti(&bf, 0).unwrap();
        assert_eq!(t.values[0], t.values[1]);
        assert_eq!(t.values[0], vec![1, 1, 1, 1]);
        assert_eq!(bigraded_betti(&bf, 1).unwrap().values[1], vec![0, 0, 0, 1]);
        assert!(bigraded_betti(&bf, 2).is_err());
    }

    #[test]
    fn degree_by_edge_weight() {
        let g = Graph::weighted(3, [((0, 1), 1.0), ((1, 2), 2.0), ((0, 2), 3.0)]).unwrap();
        let bf = graph_edge_bifiltration(&g, &[2.0; 3], &[2.0], &[1.0, 2.0, 3.0], 2).unwrap();
        assert!(bf.is_monotone());
        assert_eq!(bigraded_betti(&bf, 0).unwrap().values, vec![vec![1, 1, 1]]);
        assert_eq!(bigraded_betti(&bf, 1).unwrap().values, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn two_channel_corners() {
        let a = GrayImage::new(2, 1, vec![0.0, 255.0]).unwrap();
        let b = GrayImage::new(2, 1, vec![255.0, 0.0]).unwrap();
        let t = [0.0, 255.0];
        let bf = image_bifiltration(&a, &b, &t, &t).unwrap();
        assert!(bf.is_monotone());
        let squares = |i, j| -> Vec<usize> {
            bf.cells_at(i, j)
                .into_iter()
                .filter(|&k| bf.cells()[k].dim == 2)
                .collect()
        };
        assert!(squares(0, 0).is_empty());
        assert_eq!(squares(0, 1).len(), 1);
        assert_eq!(squares(1, 0).len(), 1);
        assert_eq!(squares(1, 1).len(), 2);
        assert_ne!(squares(0, 1), squares(1, 0));
        assert!(image_bifiltration(&a, &GrayImage::new(1, 2, vec![0.0; 2]).unwrap(), &t, &t).is_err());
    }

    #[test]
    fn identical_channels_diagonal_matches_single_channel() {
        let img = GrayImage::new(2, 2, vec![0.0, 3.0, 3.0, 0.0]).unwrap();
        let t = [0.0, 3.0];
        let bf = image_bifiltration(&img, &img, &t, &t).unwrap();
        let single = crate::image::sublevel_filtration(&img, &t).unwrap();
        for (k, &tk) in t.iter().enumerate() {
            assert_eq!(
                bigraded_betti(&bf, 0).unwrap().values[k][k],
                single.cells().prefix_betti(tk, 0)[0]
            );
        }
    }

    #[test]
    fn tri_channel_slices() {
        let ch = |v: Vec<f64>| GrayImage::new(1, 2, v).unwrap();
        let tri = TriChannelImage::new(
            [ch(vec![0.0, 0.0]), ch(vec![0.0, 0.0]), ch(vec![0.0, 9.0])],
            [vec![0.0], vec![0.0], vec![0.0, 9.0]],
        )
        .unwrap();
        let count = |r| tri.slice(r).unwrap().cells_at(0, 0).iter().filter(|&&k| tri.slice(r).unwrap().cells()[k].dim == 2).count();
        assert_eq!(count(0), 1);
        assert_eq!(count(1), 2);
        assert!(tri.slice(2).is_err());
    }

    #[test]
    fn density_rows_drop_outlier() {
        let pc = PointCloud::new(vec![vec![0.0, 0.0], vec![0.1, 0.0], vec![0.0, 0.1], vec![5.0, 5.0]]).unwrap();
        let bf = density_rips_bifiltration(&pc, 0.5, &[2.0, 1.0], &[0.2, 10.0], 2).unwrap();
        assert!(bf.is_monotone());
        let b0 = bigraded_betti(&bf, 0).unwrap();
        assert_eq!(b0.values, vec![vec![1, 1], vec![2, 1]]);
        let rows = slice_vectorize(&bf, 0, SliceVectorizer::Betti, Axis::Horizontal).unwrap();
        assert_eq!(rows.values, vec![vec![1.0, 1.0], vec![2.0, 1.0]]);
    }

    #[test]
    fn slices_match_tensor_and_constant_rows() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let f = [0.0, 1.0, 1.0, 2.0];
        let h = [2.0, 0.0, 1.0, 1.0];
        let t = [0.0, 1.0, 2.0];
        let bf = graph_bifiltration(&g, &f, &h, &t, &t, 2).unwrap();
        for dim in 0..2 {
            let tensor = bigraded_betti(&bf, dim).unwrap();
            let m = slice_vectorize(&bf, dim, SliceVectorizer::Betti, Axis::Horizontal).unwrap();
            let as_f: Vec<Vec<f64>> = tensor.values.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
            assert_eq!(m.values, as_f);
            let v = slice_vectorize(&bf, dim, SliceVectorizer::Betti, Axis::Vertical).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(v.values[j][i], as_f[i][j]);
                }
            }
        }
        let flat = graph_bifiltration(&g, &[0.0; 4], &[0.0; 4], &t, &t, 2).unwrap();
        let s = slice_vectorize(&flat, 0, SliceVectorizer::Silhouette { p: 1.0 }, Axis::Horizontal).unwrap();
        assert!(s.values.windows(2).all(|w| w[0] == w[1]));
    }
}
