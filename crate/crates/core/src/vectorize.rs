//! Fixed-length summaries of persistence diagrams: Betti curves, landscapes,
//! silhouettes, persistence curves and persistence images.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use statrs::function::erf::erf;

use crate::error::{Error, Result};
use crate::persistence::{PersistenceDiagram, PersistencePair};
use crate::pointcloud::linspace;

/// A function sampled on an increasing grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&grid)?;
        if values.len() != grid.len() {
            return Err(Error::param("values", "one value per grid point"));
        }
        Ok(SampledFunction { grid, values })
    }

    /// Samples `f` at `n` equally spaced points of `[t_min, t_max]`.
    pub fn sample(t_min: f64, t_max: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = uniform_grid(t_min, t_max, n)?;
        let values = grid.iter().map(|&t| f(t)).collect();
        Ok(SampledFunction { grid, values })
    }

    /// Piecewise-linear interpolation, constant beyond the ends.
    pub fn evaluate(&self, t: f64) -> f64 {
        let g = &self.grid;
        if t <= g[0] {
            return self.values[0];
        }
        if t >= g[g.len() - 1] {
            return self.values[g.len() - 1];
        }
        let k = g.partition_point(|&x| x <= t);
        let (x0, x1) = (g[k - 1], g[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::param("grid", "need at least 2 sample points"));
    }
    if grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("grid", "must be finite and strictly increasing"));
    }
    Ok(())
}

pub fn uniform_grid(t_min: f64, t_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::param("samples", "need at least 2 sample points"));
    }
    if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(Error::param("domain", format!("empty domain [{t_min}, {t_max}]")));
    }
    Ok(linspace(t_min, t_max, n))
}

/// `n` samples over [min birth, max finite death] of a collection. Falls
/// back to [0, 1] when there is nothing finite to span.
pub fn default_grid(diagrams: &[PersistenceDiagram], n: usize) -> Result<Vec<f64>> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in diagrams.iter().flat_map(|d| d.pairs()) {
        lo = lo.min(p.birth);
        hi = hi.max(p.birth);
        if !p.is_infinite() {
            hi = hi.max(p.death);
        }
    }
    if !lo.is_finite() {
        return uniform_grid(0.0, 1.0, n);
    }
    if lo == hi {
        return uniform_grid(lo - 0.5, hi + 0.5, n);
    }
    uniform_grid(lo, hi, n)
}

fn truncated(pd: &PersistenceDiagram, t_max: f64) -> Vec<(f64, f64)> {
    if pd.infinite().next().is_some() {
        log::warn!("H{}: infinite bars truncated at {t_max}", pd.dim);
    }
    pd.pairs()
        .iter()
        .map(|p| (p.birth, if p.is_infinite() { t_max.max(p.birth) } else { p.death }))
        .collect()
}

fn tent(b: f64, d: f64, t: f64) -> f64 {
    (t - b).min(d - t).max(0.0)
}

/// Number of pairs alive (b ≤ t < d) at each grid point.
pub fn betti_curve(pd: &PersistenceDiagram, grid: &[f64]) -> Result<SampledFunction> {
    check_grid(grid)?;
    let values = grid.iter().map(|&t| pd.betti_at(t) as f64).collect();
    Ok(SampledFunction { grid: grid.to_vec(), values })
}

/// The `level`-th landscape: m-th largest tent value at each grid point.
pub fn landscape(pd: &PersistenceDiagram, level: usize, grid: &[f64]) -> Result<SampledFunction> {
    if level < 1 {
        return Err(Error::param("level", "must be at least 1"));
    }
    check_grid(grid)?;
    let bars = truncated(pd, grid[grid.len() - 1]);
    let mut tents = Vec::with_capacity(bars.len());
    let values = grid
        .iter()
        .map(|&t| {
            tents.clear();
            tents.extend(bars.iter().map(|&(b, d)| tent(b, d, t)).filter(|&v| v > 0.0));
            if tents.len() < level {
                return 0.0;
            }
            tents.sort_by(|a, b| b.total_cmp(a));
            tents[level - 1]
        })
        .collect();
    Ok(SampledFunction { grid: grid.to_vec(), values })
}

/// Average of tents weighted by lifespan^p. An empty diagram gives zero.
pub fn silhouette(pd: &PersistenceDiagram, p: f64, grid: &[f64]) -> Result<SampledFunction> {
    if !(p > 0.0) {
        return Err(Error::param("p", "must be positive"));
    }
    check_grid(grid)?;
    let bars = truncated(pd, grid[grid.len() - 1]);
    let weights: Vec<f64> = bars.iter().map(|&(b, d)| (d - b).powf(p)).collect();
    let total: f64 = weights.iter().sum();
    let values = grid
        .iter()
        .map(|&t| {
            if total == 0.0 {
                return 0.0;
            }
            bars.iter().zip(&weights).map(|(&(b, d), w)| w * tent(b, d, t)).sum::<f64>() / total
        })
        .collect();
    Ok(SampledFunction { grid: grid.to_vec(), values })
}

/// Generating function of a persistence curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Psi {
    Constant,
    Lifespan,
    /// −(ℓ/L) log(ℓ/L) with L the total lifespan of the diagram.
    Entropy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Sum,
    Mean,
    Max,
}

impl std::str::FromStr for Psi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "one" => Ok(Psi::Constant),
            "lifespan" => Ok(Psi::Lifespan),
            "entropy" => Ok(Psi::Entropy),
            _ => Err(Error::param("psi", format!("unknown generating function `{s}`"))),
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Statistic::Sum),
            "mean" => Ok(Statistic::Mean),
            "max" => Ok(Statistic::Max),
            _ => Err(Error::param("statistic", format!("unknown statistic `{s}`"))),
        }
    }
}

/// T applied to the ψ values of the pairs alive at each grid point.
/// Lifespans of infinite bars are measured up to the last grid point.
pub fn persistence_curve(pd: &PersistenceDiagram, psi: Psi, stat: Statistic, grid: &[f64]) -> Result<SampledFunction> {
    check_grid(grid)?;
    let t_max = grid[grid.len() - 1];
    let life = |p: &PersistencePair| if p.is_infinite() { (t_max - p.birth).max(0.0) } else { p.lifespan() };
    let total: f64 = pd.pairs().iter().map(life).sum();
    let psi_of = |p: &PersistencePair| match psi {
        Psi::Constant => 1.0,
        Psi::Lifespan => life(p),
        Psi::Entropy => {
            let r = if total > 0.0 { life(p) / total } else { 0.0 };
            if r > 0.0 {
                -r * r.ln()
            } else {
                0.0
            }
        }
    };
    let values = grid
        .iter()
        .map(|&t| {
            let alive: Vec<f64> = pd.pairs().iter().filter(|p| p.is_alive_at(t)).map(psi_of).collect();
            if alive.is_empty() {
                return 0.0;
            }
            match stat {
                Statistic::Sum => alive.iter().sum(),
                Statistic::Mean => alive.iter().sum::<f64>() / alive.len() as f64,
                Statistic::Max => alive.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    Ok(SampledFunction { grid: grid.to_vec(), values })
}

/// Rectangle of the (birth, persistence) plane covered by an image.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageBounds {
    pub birth: (f64, f64),
    pub persistence: (f64, f64),
}

impl ImageBounds {
    /// Smallest box around every finite point, padded by `pad` on each side
    /// (persistence starts at 0).
    pub fn covering(diagrams: &[PersistenceDiagram], pad: f64) -> Self {
        let mut b = (f64::INFINITY, f64::NEG_INFINITY);
        let mut p = (0.0f64, f64::NEG_INFINITY);
        for q in diagrams.iter().flat_map(|d| d.finite()) {
            b = (b.0.min(q.birth), b.1.max(q.birth));
            p.1 = p.1.max(q.lifespan());
        }
        if !b.0.is_finite() {
            b = (0.0, 1.0);
            p.1 = 1.0;
        }
        ImageBounds {
            birth: (b.0 - pad, b.1 + pad),
            persistence: ((p.0 - pad).min(0.0), p.1 + pad),
        }
    }
}

/// k × l grid of integrated Gaussian mass; `cells[r][s]` covers birth bin r
/// and persistence bin s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceImage {
    pub resolution: (usize, usize),
    pub bounds: ImageBounds,
    pub cells: Vec<Vec<f64>>,
}

impl PersistenceImage {
    pub fn total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    pub fn max(&self) -> f64 {
        self.cells.iter().flatten().copied().fold(0.0, f64::max)
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.cells.iter().flatten().copied().collect()
    }
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Persistence image: each point (b, d−b) contributes a Gaussian of width
/// `sigma` weighted by (d−b)^weight_power, integrated exactly over each
/// cell. Infinite bars take the top of the persistence range.
pub fn persistence_image(
    pd: &PersistenceDiagram,
    resolution: (usize, usize),
    bounds: ImageBounds,
    sigma: f64,
    weight_power: f64,
) -> Result<PersistenceImage> {
    let (k, l) = resolution;
    if k == 0 || l == 0 {
        return Err(Error::param("resolution", "must be at least 1×1"));
    }
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive"));
    }
    let ImageBounds { birth: (b0, b1), persistence: (p0, p1) } = bounds;
    if !(b1 > b0) || !(p1 > p0) {
        return Err(Error::param("bounds", "zero-area image bounds"));
    }
    let bx = linspace(b0, b1, k + 1);
    let py = linspace(p0, p1, l + 1);
    let mut cells = vec![vec![0.0; l]; k];
    for q in pd.pairs() {
        let pers = if q.is_infinite() { p1 } else { q.lifespan() };
        let w = pers.powf(weight_power);
        let cx: Vec<f64> = bx.iter().map(|&x| normal_cdf((x - q.birth) / sigma)).collect();
        let cy: Vec<f64> = py.iter().map(|&y| normal_cdf((y - pers) / sigma)).collect();
        for r in 0..k {
            let mx = cx[r + 1] - cx[r];
            for s in 0..l {
                cells[r][s] += w * mx * (cy[s + 1] - cy[s]);
            }
        }
    }
    Ok(PersistenceImage { resolution, bounds, cells })
}

/// Where a segment of a topological vector came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    pub dim: usize,
    pub len: usize,
    pub params: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologicalVector {
    pub values: Vec<f64>,
    pub provenance: Vec<Provenance>,
}

impl TopologicalVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Concatenates per-dimension vectors in order.
pub fn concat_dimensions(parts: &[TopologicalVector]) -> Result<TopologicalVector> {
    if parts.is_empty() {
        return Err(Error::param("vectors", "nothing to concatenate"));
    }
    Ok(TopologicalVector {
        values: parts.iter().flat_map(|v| v.values.iter().copied()).collect(),
        provenance: parts.iter().flat_map(|v| v.provenance.iter().cloned()).collect(),
    })
}

/// A vectorization method with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Vectorization {
    BettiCurve,
    Landscape { level: usize },
    Silhouette { p: f64 },
    PersistenceCurve { psi: Psi, statistic: Statistic },
    PersistenceImage { resolution: (usize, usize), bounds: ImageBounds, sigma: f64, weight_power: f64 },
}

impl Vectorization {
    pub fn name(&self) -> &'static str {
        match self {
            Vectorization::BettiCurve => "betti_curve",
            Vectorization::Landscape { .. } => "landscape",
            Vectorization::Silhouette { .. } => "silhouette",
            Vectorization::PersistenceCurve { .. } => "persistence_curve",
            Vectorization::PersistenceImage { .. } => "persistence_image",
        }
    }

    /// Applies the method to one diagram. `grid` is ignored by images.
    pub fn apply(&self, pd: &PersistenceDiagram, grid: &[f64]) -> Result<TopologicalVector> {
        let values = match *self {
            Vectorization::BettiCurve => betti_curve(pd, grid)?.values,
            Vectorization::Landscape { level } => landscape(pd, level, grid)?.values,
            Vectorization::Silhouette { p } => silhouette(pd, p, grid)?.values,
            Vectorization::PersistenceCurve { psi, statistic } => persistence_curve(pd, psi, statistic, grid)?.values,
            Vectorization::PersistenceImage { resolution, bounds, sigma, weight_power } => {
                persistence_image(pd, resolution, bounds, sigma, weight_power)?.flatten()
            }
        };
        let mut params = serde_json::to_value(self)?;
        if let Some(obj) = params.as_object_mut() {
            obj.remove("method");
            if !matches!(self, Vectorization::PersistenceImage { .. }) {
                obj.insert("grid".into(), json!(grid));
            }
        }
        Ok(TopologicalVector {
            provenance: vec![Provenance { method: self.name().into(), dim: pd.dim, len: values.len(), params }],
            values,
        })
    }

    /// Vectorizes each diagram's dimensions in order and concatenates them;
    /// diagrams are processed in parallel.
    pub fn apply_batch(&self, batch: &[Vec<PersistenceDiagram>], grid: &[f64]) -> Result<Vec<TopologicalVector>> {
        batch
            .par_iter()
            .map(|pds| {
                let parts = pds.iter().map(|pd| self.apply(pd, grid)).collect::<Result<Vec<_>>>()?;
                concat_dimensions(&parts)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(dim: usize, points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_points(dim, points.iter().copied()).unwrap()
    }

    #[test]
    fn betti_curve_example() {
        let pd1 = pd(1, &[(0.3, 0.9), (0.6, 1.7)]);
        let c = betti_curve(&pd1, &[0.0, 0.25, 0.75, 1.5, 1.75]).unwrap();
        assert_eq!(c.values, vec![0.0, 0.0, 2.0, 1.0, 0.0]);
        let grid = [0.0, 1.0];
        assert_eq!(betti_curve(&pd(0, &[]), &grid).unwrap().values, vec![0.0, 0.0]);
        let many = pd(0, &vec![(0.0, 1.0); 35]);
        assert_eq!(betti_curve(&many, &grid).unwrap().values[0], 35.0);
    }

    #[test]
    fn landscape_examples() {
        let one = pd(1, &[(0.0, 2.0)]);
        assert_eq!(landscape(&one, 1, &[0.0, 1.0, 2.0]).unwrap().values, vec![0.0, 1.0, 0.0]);
        let two = pd(1, &[(0.0, 2.0), (1.0, 3.0)]);
        let g = [1.0, 1.5, 2.0];
        assert_eq!(landscape(&two, 1, &g).unwrap().values[1], 0.5);
        assert_eq!(landscape(&two, 2, &g).unwrap().values[1], 0.5);
        assert_eq!(landscape(&two, 2, &g).unwrap().values[0], 0.0);
        assert!(landscape(&two, 0, &g).is_err());
    }

    #[test]
    fn silhouette_examples() {
        let g = [0.0, 1.0, 2.0];
        let one = pd(1, &[(0.0, 2.0)]);
        assert_eq!(silhouette(&one, 3.0, &g).unwrap(), landscape(&one, 1, &g).unwrap());
        let two = pd(1, &[(0.0, 2.0), (1.0, 3.0)]);
        assert_eq!(silhouette(&two, 1.0, &g).unwrap().values[1], 0.5);
        let wide = pd(1, &[(0.0, 2.0), (0.0, 4.0)]);
        assert!((silhouette(&wide, 2.0, &g).unwrap().values[2] - 1.6).abs() < 1e-12);
        assert_eq!(silhouette(&pd(1, &[]), 1.0, &g).unwrap().values, vec![0.0; 3]);
        assert!(silhouette(&one, 0.0, &g).is_err());
    }

    #[test]
    fn persistence_curve_examples() {
        let pd1 = pd(1, &[(0.3, 0.9), (0.6, 1.7)]);
        let g = [0.0, 0.25, 0.75, 1.5, 1.75];
        assert_eq!(
            persistence_curve(&pd1, Psi::Constant, Statistic::Sum, &g).unwrap().values,
            betti_curve(&pd1, &g).unwrap().values
        );
        let two = pd(1, &[(0.0, 2.0), (1.0, 3.0)]);
        let c = persistence_curve(&two, Psi::Lifespan, Statistic::Mean, &[0.0, 1.5]).unwrap();
        assert_eq!(c.values[1], 2.0);
        let e = persistence_curve(&pd(1, &[]), Psi::Entropy, Statistic::Max, &g).unwrap();
        assert_eq!(e.values, vec![0.0; 5]);
        assert!("median".parse::<Statistic>().is_err());
    }

    #[test]
    fn image_mass_and_flattening() {
        let one = pd(1, &[(1.0, 3.0)]);
        let bounds = ImageBounds { birth: (-10.0, 12.0), persistence: (-10.0, 12.0) };
        let img = persistence_image(&one, (20, 20), bounds, 0.5, 1.0).unwrap();
        assert!((img.total() - 2.0).abs() < 1e-6);
        let mut last = f64::INFINITY;
        for sigma in [0.1, 0.3, 0.6, 1.0, 2.0] {
            let m = persistence_image(&one, (20, 20), bounds, sigma, 1.0).unwrap().max();
            assert!(m <= last + 1e-12);
            last = m;
        }
        let empty = persistence_image(&pd(1, &[]), (3, 2), bounds, 1.0, 1.0).unwrap();
        assert_eq!(empty.total(), 0.0);
        let flat = ImageBounds { birth: (0.0, 0.0), persistence: (0.0, 1.0) };
        assert!(persistence_image(&one, (3, 3), flat, 1.0, 1.0).is_err());
    }

    #[test]
    fn concat_lengths() {
        let v = |n: usize| TopologicalVector {
            values: vec![n as f64; n],
            provenance: vec![Provenance { method: "x".into(), dim: n, len: n, params: json!({}) }],
        };
        assert_eq!(concat_dimensions(&[v(50), v(50)]).unwrap().len(), 100);
        assert_eq!(concat_dimensions(&[v(2)]).unwrap(), v(2));
        let c = concat_dimensions(&[v(2), v(3), v(4)]).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.values[2], 3.0);
        assert!(concat_dimensions(&[]).is_err());
    }

    #[test]
    fn sampled_function_round_trip() {
        let f = SampledFunction::sample(0.0, 1.0, 101, |t| t * t).unwrap();
        assert!((f.evaluate(0.505) - 0.505f64.powi(2)).abs() < 1e-4);
        assert_eq!(f.evaluate(0.5), 0.25);
    }

    #[test]
    fn batch_concatenates_dimensions() {
        let batch = vec![vec![pd(0, &[(0.0, 1.0)]), pd(1, &[(0.2, 0.5)])]];
        let out = Vectorization::BettiCurve.apply_batch(&batch, &[0.0, 0.3, 0.6]).unwrap();
        assert_eq!(out[0].values, vec![1.0, 1.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(out[0].provenance.len(), 2);
    }
}
