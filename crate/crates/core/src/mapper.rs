//! The Mapper construction: a lens, an interval cover of its range, a
//! clustering of each preimage, and the nerve of the resulting clusters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::image::{label_components, GrayImage};
use crate::pointcloud::{pairwise_distances, Metric, PointCloud};

/// Closed intervals covering a range, in increasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub intervals: Vec<(f64, f64)>,
    pub overlap: f64,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// For each interval, the indices of `values` falling inside it.
    pub fn preimages(&self, values: &[f64]) -> Vec<Vec<usize>> {
        self.intervals
            .iter()
            .map(|&(lo, hi)| (0..values.len()).filter(|&i| lo <= values[i] && values[i] <= hi).collect())
            .collect()
    }
}

/// `n` intervals of length L = (b−a)/(n−(n−1)g) starting every (1−g)L, so
/// neighbours share a fraction `g` of their length; the first starts at `a`
/// and the last ends at `b`.
pub fn build_cover(a: f64, b: f64, n: usize, g: f64) -> Result<Cover> {
    if n < 1 {
        return Err(Error::param("resolution", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&g) {
        return Err(Error::param("overlap", format!("must lie in [0, 1), got {g}")));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::param("range", format!("empty range [{a}, {b}]")));
    }
    let len = (b - a) / (n as f64 - (n as f64 - 1.0) * g);
    let step = (1.0 - g) * len;
    let mut intervals: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let lo = a + k as f64 * step;
            (lo, lo + len)
        })
        .collect();
    intervals[n - 1].1 = b;
    Ok(Cover { intervals, overlap: g })
}

/// Cover of the range of `values`, widened by ±0.5 when the range is a
/// single point.
pub fn cover_for(values: &[f64], n: usize, g: f64) -> Result<Cover> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::param("lens", "lens values must be finite and nonempty"));
    }
    if lo == hi {
        build_cover(lo - 0.5, hi + 0.5, n, g)
    } else {
        build_cover(lo, hi, n, g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Lens {
    Coordinate { axis: usize },
    Eccentricity,
    Density { radius: f64 },
    /// Projection on the `component`-th principal axis (0 = largest).
    Pca { component: usize },
}

impl Lens {
    pub fn kinds() -> &'static [&'static str] {
        &["coordinate", "eccentricity", "density", "pca"]
    }
}

/// One lens value per point.
pub fn lens_values(pc: &PointCloud, lens: &Lens) -> Result<Vec<f64>> {
    match *lens {
        Lens::Coordinate { axis } => {
            if axis >= pc.dim() {
                return Err(Error::param("axis", format!("axis {axis} out of range for {}-D points", pc.dim())));
            }
            Ok(pc.points().iter().map(|p| p[axis]).collect())
        }
        Lens::Eccentricity => {
            let dm = pairwise_distances(pc, Metric::Euclidean);
            Ok((0..pc.len()).map(|i| dm.row(i).iter().copied().fold(0.0, f64::max)).collect())
        }
        Lens::Density { radius } => {
            if !(radius > 0.0) {
                return Err(Error::param("radius", "must be positive"));
            }
            let dm = pairwise_distances(pc, Metric::Euclidean);
            Ok((0..pc.len())
                .map(|i| dm.row(i).iter().filter(|&&d| d <= radius).count() as f64)
                .collect())
        }
        Lens::Pca { component } => pca_projection(pc, component),
    }
}

fn pca_projection(pc: &PointCloud, component: usize) -> Result<Vec<f64>> {
    let d = pc.dim();
    if component >= d {
        return Err(Error::param("component", format!("component {component} out of range for {d}-D points")));
    }
    let n = pc.len() as f64;
    let mean: Vec<f64> = (0..d).map(|k| pc.points().iter().map(|p| p[k]).sum::<f64>() / n).collect();
    let centered: Vec<Vec<f64>> = pc
        .points()
        .iter()
        .map(|p| p.iter().zip(&mean).map(|(x, m)| x - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for p in &centered {
        for r in 0..d {
            for c in 0..d {
                cov[r][c] += p[r] * p[c] / n;
            }
        }
    }
    let mut axis = Vec::new();
    for _ in 0..=component {
        axis = power_iteration(&cov);
        let lambda: f64 = (0..d).map(|r| axis[r] * (0..d).map(|c| cov[r][c] * axis[c]).sum::<f64>()).sum();
        for r in 0..d {
            for c in 0..d {
                cov[r][c] -= lambda * axis[r] * axis[c];
            }
        }
    }
    let lead = axis.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if lead < 0.0 {
        axis.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(centered.iter().map(|p| p.iter().zip(&axis).map(|(x, a)| x * a).sum()).collect())
}

fn power_iteration(m: &[Vec<f64>]) -> Vec<f64> {
    let d = m.len();
    let mut v: Vec<f64> = (0..d).map(|i| 1.0 + i as f64 / d as f64).collect();
    for _ in 0..1000 {
        let mut w: Vec<f64> = (0..d).map(|r| (0..d).map(|c| m[r][c] * v[c]).sum()).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-300 {
            // the remaining spectrum is zero; any unit vector is an eigenvector
            return (0..d).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        }
        w.iter_mut().for_each(|x| *x /= norm);
        let diff: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = w;
        if diff < 1e-13 {
            break;
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Clustering {
    /// Connected components of the graph joining points at distance ≤ eps.
    SingleLinkage { eps: f64 },
    #[serde(rename = "kmeans")]
    KMeans { k: usize },
    /// Neighbourhoods count the point itself; noise is discarded.
    Dbscan { eps: f64, min_pts: usize },
    /// Connected components of the underlying graph or pixel grid.
    Components,
}

/// Clusters of `members` (original point ids), each sorted, ordered by
/// smallest member.
pub fn cluster(pc: &PointCloud, members: &[usize], method: &Clustering) -> Result<Vec<Vec<usize>>> {
    if members.is_empty() {
        return Ok(Vec::new());
    }
    let dist = |a: usize, b: usize| Metric::Euclidean.distance(pc.point(members[a]), pc.point(members[b]));
    let m = members.len();
    let labels: Vec<Option<usize>> = match *method {
        Clustering::SingleLinkage { eps } => {
            if !(eps >= 0.0) {
                return Err(Error::param("eps", "must be non-negative"));
            }
            let mut uf = UnionFind::new(m);
            for a in 0..m {
                for b in a + 1..m {
                    if dist(a, b) <= eps {
                        uf.union(a, b);
                    }
                }
            }
            (0..m).map(|a| Some(uf.find(a))).collect()
        }
        Clustering::KMeans { k } => kmeans(pc, members, k)?.into_iter().map(Some).collect(),
        Clustering::Dbscan { eps, min_pts } => {
            if !(eps >= 0.0) {
                return Err(Error::param("eps", "must be non-negative"));
            }
            if min_pts < 1 {
                return Err(Error::param("min_pts", "must be at least 1"));
            }
            dbscan(m, &dist, eps, min_pts)
        }
        Clustering::Components => {
            return Err(Error::param("clustering", "components clustering applies to graphs and images"))
        }
    };
    Ok(group(members, &labels))
}

fn group(members: &[usize], labels: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut by_label: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            by_label.entry(*l).or_default().push(members[i]);
        }
    }
    let mut clusters: Vec<Vec<usize>> = by_label.into_values().collect();
    for c in &mut clusters {
        c.sort_unstable();
    }
    clusters.sort();
    clusters
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Lloyd's algorithm with farthest-first seeding from the lowest-id member;
/// ties go to the lowest index.
fn kmeans(pc: &PointCloud, members: &[usize], k: usize) -> Result<Vec<usize>> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let m = members.len();
    let k = if k > m {
        log::warn!("k = {k} exceeds {m} members; using {m}");
        m
    } else {
        k
    };
    let point = |i: usize| pc.point(members[i]);
    let d2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();

    let first = (0..m).min_by_key(|&i| members[i]).unwrap_or(0);
    let mut centers: Vec<Vec<f64>> = vec![point(first).to_vec()];
    let mut nearest: Vec<f64> = (0..m).map(|i| d2(point(i), &centers[0])).collect();
    while centers.len() < k {
        let mut best = 0;
        for i in 1..m {
            let better = nearest[i] > nearest[best] || (nearest[i] == nearest[best] && members[i] < members[best]);
            if better {
                best = i;
            }
        }
        centers.push(point(best).to_vec());
        for i in 0..m {
            nearest[i] = nearest[i].min(d2(point(i), &centers[centers.len() - 1]));
        }
    }

    let mut labels = vec![usize::MAX; m];
    for _ in 0..300 {
        let mut changed = false;
        for i in 0..m {
            let mut best = 0;
            for c in 1..k {
                if d2(point(i), &centers[c]) < d2(point(i), &centers[best]) {
                    best = c;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (c, center) in centers.iter_mut().enumerate() {
            let assigned: Vec<usize> = (0..m).filter(|&i| labels[i] == c).collect();
            if assigned.is_empty() {
                continue;
            }
            for (x, slot) in center.iter_mut().enumerate() {
                *slot = assigned.iter().map(|&i| point(i)[x]).sum::<f64>() / assigned.len() as f64;
            }
        }
    }
    Ok(labels)
}

fn dbscan(m: usize, dist: &dyn Fn(usize, usize) -> f64, eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let neighbours: Vec<Vec<usize>> = (0..m).map(|a| (0..m).filter(|&b| dist(a, b) <= eps).collect()).collect();
    let core: Vec<bool> = neighbours.iter().map(|n| n.len() >= min_pts).collect();
    let mut labels: Vec<Option<usize>> = vec![None; m];
    let mut next = 0;
    for start in 0..m {
        if !core[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &q in &neighbours[p] {
                if labels[q].is_none() {
                    labels[q] = Some(next);
                    if core[q] {
                        stack.push(q);
                    }
                }
            }
        }
        next += 1;
    }
    labels
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapperNode {
    pub id: usize,
    pub interval: usize,
    pub size: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapperEdge {
    pub source: usize,
    pub target: usize,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapperParams {
    pub lens: serde_json::Value,
    pub resolution: usize,
    pub overlap: f64,
    pub clustering: Clustering,
    /// Set by the HTTP service so responses echo the full request.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapperGraph {
    pub nodes: Vec<MapperNode>,
    pub edges: Vec<MapperEdge>,
    pub params: MapperParams,
}

impl MapperGraph {
    /// Number of independent cycles: E − V + components.
    pub fn cycle_rank(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.source, e.target);
        }
        let components = (0..self.nodes.len()).filter(|&v| uf.find(v) == v).count();
        self.edges.len() + components - self.nodes.len()
    }
}

fn shared(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Nodes from per-interval clusters, edges between every two distinct nodes
/// whose member sets meet.
fn assemble(per_interval: Vec<Vec<Vec<usize>>>, params: MapperParams) -> MapperGraph {
    let nodes: Vec<MapperNode> = per_interval
        .into_iter()
        .enumerate()
        .flat_map(|(k, clusters)| clusters.into_iter().map(move |c| (k, c)))
        .enumerate()
        .map(|(id, (interval, members))| MapperNode { id, interval, size: members.len(), members })
        .collect();
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let weight = shared(&nodes[a].members, &nodes[b].members);
            if weight > 0 {
                edges.push(MapperEdge { source: a, target: b, weight });
            }
        }
    }
    MapperGraph { nodes, edges, params }
}

fn check_lens(values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(Error::param("lens", format!("{} lens values for {n} items", values.len())));
    }
    Ok(())
}

/// Mapper graph of a point cloud for given lens values and cover.
pub fn mapper_pointcloud(pc: &PointCloud, lens: &[f64], cover: &Cover, clustering: &Clustering) -> Result<MapperGraph> {
    check_lens(lens, pc.len())?;
    let per_interval = cover
        .preimages(lens)
        .par_iter()
        .map(|pre| cluster(pc, pre, clustering))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(per_interval, params(cover, clustering.clone())))
}

/// Mapper with a two-dimensional lens, covered by the product of two
/// interval covers; cover element (i, j) has interval index i·n₂ + j.
pub fn mapper_pointcloud_2d(
    pc: &PointCloud,
    lens: (&[f64], &[f64]),
    cover: (&Cover, &Cover),
    clustering: &Clustering,
) -> Result<MapperGraph> {
    check_lens(lens.0, pc.len())?;
    check_lens(lens.1, pc.len())?;
    let (pa, pb) = (cover.0.preimages(lens.0), cover.1.preimages(lens.1));
    let boxes: Vec<Vec<usize>> = pa
        .iter()
        .flat_map(|a| pb.iter().map(move |b| a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()))
        .collect();
    let per_interval = boxes
        .par_iter()
        .map(|pre| cluster(pc, pre, clustering))
        .collect::<Result<Vec<_>>>()?;
    let mut p = params(cover.0, clustering.clone());
    p.resolution = cover.0.len() * cover.1.len();
    Ok(assemble(per_interval, p))
}

fn params(cover: &Cover, clustering: Clustering) -> MapperParams {
    MapperParams { lens: serde_json::Value::Null, resolution: cover.len(), overlap: cover.overlap, clustering, dataset: None }
}

/// Mapper of a graph: nodes are the connected components of each induced
/// preimage subgraph.
pub fn mapper_graph(g: &Graph, lens: &[f64], cover: &Cover) -> Result<MapperGraph> {
    check_lens(lens, g.n_vertices())?;
    let per_interval = cover
        .preimages(lens)
        .par_iter()
        .map(|pre| {
            let sub = g.induced(pre);
            let mut uf = UnionFind::new(sub.kept.len());
            for (u, v) in sub.graph.edges() {
                uf.union(u, v);
            }
            let labels: Vec<Option<usize>> = (0..sub.kept.len()).map(|v| Some(uf.find(v))).collect();
            group(&sub.kept, &labels)
        })
        .collect();
    Ok(assemble(per_interval, params(cover, Clustering::Components)))
}

/// Mapper of an image by intensity: nodes are 8-connected components of the
/// pixels in each interval; members are row-major pixel indices.
pub fn mapper_image(img: &GrayImage, cover: &Cover) -> Result<MapperGraph> {
    let per_interval = cover
        .intervals
        .par_iter()
        .map(|&(lo, hi)| {
            let mask: Vec<bool> = img.values().iter().map(|&v| lo <= v && v <= hi).collect();
            let (_, labels) = label_components(img.rows(), img.cols(), &mask);
            let ids: Vec<usize> = (0..labels.len()).collect();
            group(&ids, &labels)
        })
        .collect();
    let mut p = params(cover, Clustering::Components);
    p.lens = serde_json::json!("intensity");
    Ok(assemble(per_interval, p))
}

/// Everything needed to run Mapper on a point cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapperConfig {
    pub lens: Lens,
    pub resolution: usize,
    pub overlap: f64,
    pub clustering: Clustering,
}

impl MapperConfig {
    pub fn run(&self, pc: &PointCloud) -> Result<MapperGraph> {
        let values = lens_values(pc, &self.lens)?;
        let cover = cover_for(&values, self.resolution, self.overlap)?;
        let mut g = mapper_pointcloud(pc, &values, &cover, &self.clustering)?;
        g.params.lens = serde_json::to_value(&self.lens)?;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob(cx: f64, n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|i| vec![cx + 0.01 * i as f64, 0.02 * (i % 3) as f64]).collect()
    }

    #[test]
    fn cover_examples() {
        assert_eq!(build_cover(0.0, 10.0, 2, 0.0).unwrap().intervals, vec![(0.0, 5.0), (5.0, 10.0)]);
        let c = build_cover(0.0, 10.0, 2, 1.0 / 3.0).unwrap();
        assert!((c.intervals[0].1 - 6.0).abs() < 1e-12 && (c.intervals[1].0 - 4.0).abs() < 1e-12);
        assert_eq!(build_cover(2.0, 3.0, 1, 0.7).unwrap().intervals, vec![(2.0, 3.0)]);
        assert_eq!(build_cover(0.0, 1.0, 2, 1.0).unwrap_err().field(), Some("overlap"));
        assert!(build_cover(0.0, 1.0, 0, 0.1).is_err());
        assert!(build_cover(1.0, 1.0, 2, 0.1).is_err());
    }

    #[test]
    fn lenses() {
        let pc = PointCloud::new(vec![vec![3.0, 7.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(lens_values(&pc, &Lens::Coordinate { axis: 0 }).unwrap()[0], 3.0);
        assert_eq!(lens_values(&pc, &Lens::Eccentricity).unwrap(), vec![5.0, 5.0]);
        assert!(lens_values(&pc, &Lens::Coordinate { axis: 2 }).is_err());
        assert!(lens_values(&pc, &Lens::Density { radius: 0.0 }).is_err());

        let line = PointCloud::new((0..5).map(|i| vec![i as f64, 0.0]).collect()).unwrap();
        let pca = lens_values(&line, &Lens::Pca { component: 0 }).unwrap();
        for (i, v) in pca.iter().enumerate() {
            assert!((v - (i as f64 - 2.0)).abs() < 1e-9, "{pca:?}");
        }
    }

    #[test]
    fn clustering_examples() {
        let mut pts = blob(0.0, 5);
        pts.extend(blob(10.0, 5));
        let pc = PointCloud::new(pts).unwrap();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(cluster(&pc, &all, &Clustering::SingleLinkage { eps: 1.0 }).unwrap().len(), 2);
        assert_eq!(cluster(&pc, &all, &Clustering::KMeans { k: 1 }).unwrap(), vec![all.clone()]);
        let two = cluster(&pc, &all, &Clustering::KMeans { k: 2 }).unwrap();
        assert_eq!(two, vec![(0..5).collect::<Vec<_>>(), (5..10).collect()]);
        assert_eq!(cluster(&pc, &all[..2], &Clustering::KMeans { k: 9 }).unwrap().len(), 2);

        let mut pts = vec![vec![0.0, 0.0]; 5];
        pts.push(vec![50.0, 50.0]);
        let pc = PointCloud::new(pts).unwrap();
        let ids: Vec<usize> = (0..6).collect();
        let c = cluster(&pc, &ids, &Clustering::Dbscan { eps: 0.5, min_pts: 3 }).unwrap();
        assert_eq!(c, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn pointcloud_mapper_examples() {
        let pc = PointCloud::new(blob(0.0, 10)).unwrap();
        let cfg = MapperConfig {
            lens: Lens::Coordinate { axis: 0 },
            resolution: 1,
            overlap: 0.2,
            clustering: Clustering::SingleLinkage { eps: 0.5 },
        };
        let g = cfg.run(&pc).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (1, 0));

        let mut pts = blob(0.0, 5);
        pts.extend(blob(10.0, 5));
        let pc = PointCloud::new(pts).unwrap();
        let g = cfg.run(&pc).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 0));
    }

    #[test]
    fn circle_is_one_cycle() {
        let pts: Vec<Vec<f64>> = (0..100)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 100.0;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let pc = PointCloud::new(pts).unwrap();
        let g = MapperConfig {
            lens: Lens::Coordinate { axis: 0 },
            resolution: 4,
            overlap: 0.25,
            clustering: Clustering::SingleLinkage { eps: 0.2 },
        }
        .run(&pc)
        .unwrap();
        assert!((6..=8).contains(&g.nodes.len()), "{}", g.nodes.len());
        assert_eq!(g.cycle_rank(), 1);
    }

    #[test]
    fn graph_mapper_examples() {
        let path = Graph::new(6, (0..5).map(|i| (i, i + 1))).unwrap();
        let lens: Vec<f64> = (0..6).map(|i| i as f64).collect();
        let g = mapper_graph(&path, &lens, &cover_for(&lens, 2, 0.5).unwrap()).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 1));

        let split = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let g = mapper_graph(&split, &[0.0; 4], &build_cover(-1.0, 1.0, 1, 0.0).unwrap()).unwrap();
        assert_eq!(g.nodes.len(), 2);
    }

    #[test]
    fn image_mapper_examples() {
        let flat = GrayImage::new(2, 2, vec![7.0; 4]).unwrap();
        assert_eq!(mapper_image(&flat, &build_cover(0.0, 255.0, 1, 0.0).unwrap()).unwrap().nodes.len(), 1);

        let plateaus = GrayImage::new(2, 4, vec![50.0, 50.0, 200.0, 200.0, 50.0, 50.0, 200.0, 200.0]).unwrap();
        let g = mapper_image(&plateaus, &build_cover(0.0, 255.0, 2, 0.0).unwrap()).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 0));
        let g = mapper_image(&plateaus, &build_cover(0.0, 255.0, 2, 0.9).unwrap()).unwrap();
        assert_eq!(g.nodes[0].size, 8);
        assert_eq!(g.edges.len(), 1);
    }

    #[test]
    fn product_cover_mode() {
        let pts: Vec<Vec<f64>> = (0..4).flat_map(|i| (0..4).map(move |j| vec![i as f64, j as f64])).collect();
        let pc = PointCloud::new(pts).unwrap();
        let x = lens_values(&pc, &Lens::Coordinate { axis: 0 }).unwrap();
        let y = lens_values(&pc, &Lens::Coordinate { axis: 1 }).unwrap();
        let cx = cover_for(&x, 2, 0.5).unwrap();
        let g = mapper_pointcloud_2d(&pc, (&x, &y), (&cx, &cx), &Clustering::SingleLinkage { eps: 1.0 }).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.params.resolution, 4);
        // all four boxes share the centre points
        assert_eq!(g.edges.len(), 6);
    }

    #[test]
    fn json_round_trip() {
        let pc = PointCloud::new(blob(0.0, 6)).unwrap();
        let g = MapperConfig {
            lens: Lens::Pca { component: 0 },
            resolution: 3,
            overlap: 0.3,
            clustering: Clustering::Dbscan { eps: 0.1, min_pts: 2 },
        }
        .run(&pc)
        .unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("\"lens\":{\"component\":0,\"kind\":\"pca\"}"), "{text}");
        assert_eq!(serde_json::from_str::<MapperGraph>(&text).unwrap(), g);
    }
}
