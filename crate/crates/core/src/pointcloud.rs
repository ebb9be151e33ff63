//! Rips and Čech filtrations of point clouds and distance matrices.
//!
//! Both filtrations share one scale axis: a simplex enters at the smallest
//! ε for which it is present, with Rips using the diameter (`d ≤ ε`) and
//! Čech twice the radius of the minimum enclosing ball. With this axis every
//! Čech value is at least the corresponding Rips value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::FilteredComplex;
use crate::error::{Error, Result};
use crate::flag::flag_filtration;

/// A nonempty set of points of uniform dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::param("points", "point cloud is empty"));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::param("points", "points have no coordinates"));
        }
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::param(
                "points",
                format!("point {i} has {} coordinates, expected {dim}", points[i].len()),
            ));
        }
        if let Some(i) = points.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(Error::param("points", format!("point {i} has a non-finite coordinate")));
        }
        Ok(PointCloud { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// The sub-cloud with the given point indices, in that order.
    pub fn subset(&self, ids: &[usize]) -> Result<Self> {
        PointCloud::new(ids.iter().map(|&i| self.points[i].clone()).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Manhattan => diffs.sum(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            "chebyshev" => Ok(Metric::Chebyshev),
            other => Err(Error::param("metric", format!("unknown metric `{other}`"))),
        }
    }
}

/// Dense symmetric matrix of finite nonnegative distances with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::param("distances", format!("row {i} has {} entries, expected {n}", row.len())));
            }
            data.extend_from_slice(row);
        }
        let dm = DistanceMatrix { n, data };
        for i in 0..n {
            if dm.get(i, i) != 0.0 {
                return Err(Error::param("distances", format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                let d = dm.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::param("distances", format!("d({i},{j}) = {d} is not a finite nonnegative value")));
                }
                if d != dm.get(j, i) {
                    return Err(Error::param("distances", format!("d({i},{j}) != d({j},{i})")));
                }
            }
        }
        Ok(dm)
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry, i.e. the diameter of the underlying space.
    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Entries strictly above the diagonal.
    pub fn off_diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect()
    }
}

pub fn pairwise_distances(pc: &PointCloud, metric: Metric) -> DistanceMatrix {
    let n = pc.len();
    let data: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| metric.distance(pc.point(i), pc.point(j))))
        .collect();
    DistanceMatrix::from_raw(n, data)
}

/// Vietoris–Rips filtration: vertices at 0, every simplex of dimension
/// ≤ `max_cell_dim` at its diameter when that is ≤ `max_scale`.
///
/// A `max_cell_dim` above `n − 1` is clamped with a warning.
pub fn rips_filtration(dm: &DistanceMatrix, max_scale: f64, max_cell_dim: usize) -> Result<FilteredComplex> {
    if max_cell_dim < 1 {
        return Err(Error::param("max_cell_dim", "must be at least 1"));
    }
    if !(max_scale > 0.0) {
        return Err(Error::param("max_scale", "must be positive"));
    }
    rips_unchecked(dm.n, |i, j| dm.get(i, j), max_scale, max_cell_dim)
}

/// Rips expansion over an arbitrary (possibly infinite-valued) metric.
pub(crate) fn rips_unchecked(
    n: usize,
    dist: impl Fn(usize, usize) -> f64,
    max_scale: f64,
    max_cell_dim: usize,
) -> Result<FilteredComplex> {
    let mut dim = max_cell_dim;
    if n > 0 && dim > n - 1 {
        log::warn!("max_cell_dim {dim} exceeds the {n}-point simplex; clamping to {}", n - 1);
        dim = n - 1;
    }
    let truncation = if n == 0 || dim >= n - 1 { None } else { Some(dim) };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            if d <= max_scale {
                edges.push((i, j, d));
            }
        }
    }
    flag_filtration(&vec![Some(0.0); n], &edges, dim, truncation)
}

/// Radius of the minimum enclosing ball of at most three points.
pub fn min_enclosing_radius(points: &[&[f64]]) -> f64 {
    let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    match points {
        [] | [_] => 0.0,
        [a, b] => d2(a, b).sqrt() / 2.0,
        [a, b, c] => {
            let mut sides = [d2(b, c), d2(a, c), d2(a, b)];
            sides.sort_by(f64::total_cmp);
            let [s0, s1, s2] = sides;
            // Right or obtuse (including collinear): the longest edge spans the ball.
            if s2 >= s0 + s1 {
                return s2.sqrt() / 2.0;
            }
            let u: Vec<f64> = b.iter().zip(*a).map(|(x, y)| x - y).collect();
            let v: Vec<f64> = c.iter().zip(*a).map(|(x, y)| x - y).collect();
            let uu: f64 = u.iter().map(|x| x * x).sum();
            let vv: f64 = v.iter().map(|x| x * x).sum();
            let uv: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
            let area = 0.5 * (uu * vv - uv * uv).max(0.0).sqrt();
            (s0 * s1 * s2).sqrt() / (4.0 * area)
        }
        _ => panic!("minimum enclosing ball is only implemented for up to three points"),
    }
}

/// Čech filtration (Euclidean), cells of dimension ≤ 2, each entering at
/// twice the radius of its minimum enclosing ball.
pub fn cech_filtration(pc: &PointCloud, max_scale: f64, max_cell_dim: usize) -> Result<FilteredComplex> {
    if max_cell_dim > 2 {
        return Err(Error::Unsupported(format!(
            "Čech cells of dimension {max_cell_dim}; at most 2 is supported"
        )));
    }
    if max_cell_dim < 1 {
        return Err(Error::param("max_cell_dim", "must be at least 1"));
    }
    if !(max_scale > 0.0) {
        return Err(Error::param("max_scale", "must be positive"));
    }
    let n = pc.len();
    let mut cells = Vec::new();
    for i in 0..n {
        cells.push((crate::complex::Simplex::vertex(i), 0.0));
    }
    for i in 0..n {
        for j in i + 1..n {
            let v = 2.0 * min_enclosing_radius(&[pc.point(i), pc.point(j)]);
            if v > max_scale {
                continue;
            }
            cells.push((crate::complex::Simplex::from_sorted(vec![i, j]), v));
            if max_cell_dim < 2 {
                continue;
            }
            for k in j + 1..n {
                let v = 2.0 * min_enclosing_radius(&[pc.point(i), pc.point(j), pc.point(k)]);
                if v <= max_scale {
                    cells.push((crate::complex::Simplex::from_sorted(vec![i, j, k]), v));
                }
            }
        }
    }
    let truncation = if n == 0 || max_cell_dim >= n - 1 { None } else { Some(max_cell_dim) };
    FilteredComplex::with_truncation(cells, truncation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdStrategy {
    Uniform,
    Quantile,
}

/// Threshold sequences spanning the distance range: evenly spaced over
/// [0, diameter], or quantiles of the positive pairwise distances.
pub fn select_thresholds(dm: &DistanceMatrix, count: usize, strategy: ThresholdStrategy) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::param("count", "at least two thresholds are required"));
    }
    let diameter = dm.max();
    if diameter <= 0.0 {
        return Err(Error::param("distances", "zero diameter: all points coincide"));
    }
    match strategy {
        ThresholdStrategy::Uniform => Ok(linspace(0.0, diameter, count)),
        ThresholdStrategy::Quantile => quantile_thresholds(&dm.off_diagonal(), count),
    }
}

/// Linear-interpolation quantiles at q = i/(count−1) of the positive values.
pub fn quantile_thresholds(distances: &[f64], count: usize) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::param("count", "at least two thresholds are required"));
    }
    let mut d: Vec<f64> = distances.iter().copied().filter(|&x| x > 0.0).collect();
    if d.is_empty() {
        return Err(Error::param("distances", "zero diameter: all points coincide"));
    }
    d.sort_by(f64::total_cmp);
    let last = (d.len() - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let pos = last * i as f64 / (count - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            d[lo] + (d[hi] - d[lo]) * (pos - lo as f64)
        })
        .collect())
}

pub(crate) fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count)
        .map(|i| {
            if i == count - 1 {
                b
            } else {
                a + (b - a) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{Filtration, Simplex};

    fn cloud(p: &[(f64, f64)]) -> PointCloud {
        PointCloud::new(p.iter().map(|&(x, y)| vec![x, y]).collect()).unwrap()
    }

    #[test]
    fn metrics() {
        let pc = cloud(&[(0.0, 0.0), (3.0, 4.0)]);
        assert_eq!(pairwise_distances(&pc, Metric::Euclidean).get(0, 1), 5.0);
        let single = cloud(&[(1.0, 1.0)]);
        assert_eq!(pairwise_distances(&single, Metric::Euclidean).off_diagonal().len(), 0);
        let tri = cloud(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let dm = pairwise_distances(&tri, Metric::Chebyshev);
        assert!(dm.off_diagonal().iter().all(|&d| d == 1.0));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        assert!(PointCloud::new(vec![vec![0.0, 1.0], vec![1.0]]).is_err());
        assert!(PointCloud::new(vec![]).is_err());
    }

    #[test]
    fn rips_equilateral_and_far_pair() {
        let h = 3f64.sqrt() / 2.0;
        let pc = cloud(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
        let fc = rips_filtration(&pairwise_distances(&pc, Metric::Euclidean), 2.0, 2).unwrap();
        for (s, v) in fc.cells() {
            if s.dim() > 0 {
                assert!((v - 1.0).abs() < 1e-12, "{s} at {v}");
            }
        }
        assert_eq!(fc.len(), 7);

        let pair = cloud(&[(0.0, 0.0), (3.0, 0.0)]);
        let fc = rips_filtration(&pairwise_distances(&pair, Metric::Euclidean), 2.0, 1).unwrap();
        assert_eq!(fc.top_dim(), Some(0));
    }

    #[test]
    fn rips_square_diagonals() {
        let pc = cloud(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let fc = rips_filtration(&pairwise_distances(&pc, Metric::Euclidean), 2.0, 2).unwrap();
        let r2 = 2f64.sqrt();
        assert_eq!(fc.value_of(&Simplex::new(vec![0, 2]).unwrap()), Some(r2));
        assert_eq!(fc.value_of(&Simplex::new(vec![1, 3]).unwrap()), Some(r2));
        let triangles: Vec<_> = fc.cells().iter().filter(|(s, _)| s.dim() == 2).collect();
        assert_eq!(triangles.len(), 4);
        assert!(triangles.iter().all(|(_, v)| *v == r2));
    }

    #[test]
    fn rips_parameter_checks() {
        let pc = cloud(&[(0.0, 0.0), (1.0, 0.0)]);
        let dm = pairwise_distances(&pc, Metric::Euclidean);
        assert!(rips_filtration(&dm, 1.0, 0).is_err());
        assert!(rips_filtration(&dm, 0.0, 1).is_err());
        // clamped: two points cannot span a triangle
        let fc = rips_filtration(&dm, 2.0, 3).unwrap();
        assert_eq!(fc.truncation(), None);
    }

    #[test]
    fn cech_values() {
        let pair = cloud(&[(0.0, 0.0), (0.0, 2.5)]);
        let fc = cech_filtration(&pair, 5.0, 1).unwrap();
        assert_eq!(fc.value_of(&Simplex::new(vec![0, 1]).unwrap()), Some(2.5));

        let obtuse = cloud(&[(0.0, 0.0), (4.0, 0.0), (2.0, 0.5)]);
        let fc = cech_filtration(&obtuse, 10.0, 2).unwrap();
        let v = fc.value_of(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert!((v - 4.0).abs() < 1e-12);

        let h = 3f64.sqrt() / 2.0;
        let eq = cloud(&[(0.0, 0.0), (1.0, 0.0), (0.5, h)]);
        let fc = cech_filtration(&eq, 10.0, 2).unwrap();
        let v = fc.value_of(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert!((v - 2.0 / 3f64.sqrt()).abs() < 1e-12);

        assert!(matches!(cech_filtration(&eq, 1.0, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn thresholds() {
        // points on a line at 0, 1, 3: distances {1, 2, 3}
        let pc = PointCloud::new(vec![vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        let dm = pairwise_distances(&pc, Metric::Euclidean);
        assert_eq!(select_thresholds(&dm, 3, ThresholdStrategy::Uniform).unwrap(), vec![0.0, 1.5, 3.0]);
        assert_eq!(quantile_thresholds(&[1.0, 1.0, 1.0, 10.0], 3).unwrap(), vec![1.0, 1.0, 10.0]);
        let same = PointCloud::new(vec![vec![1.0], vec![1.0]]).unwrap();
        let dm = pairwise_distances(&same, Metric::Euclidean);
        assert!(select_thresholds(&dm, 3, ThresholdStrategy::Uniform).is_err());
        assert!(select_thresholds(&dm, 3, ThresholdStrategy::Quantile).is_err());
        assert!(select_thresholds(&dm, 1, ThresholdStrategy::Uniform).is_err());
    }
}
