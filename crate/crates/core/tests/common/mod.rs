#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdakit::complex::{FilteredComplex, Simplex, SimplicialComplex};
use tdakit::graph::Graph;
use tdakit::mapper::MapperGraph;
use tdakit::persistence::PersistenceDiagram;
use tdakit::pointcloud::PointCloud;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

pub fn square() -> SimplicialComplex {
    SimplicialComplex::closure([s(&[0, 1]), s(&[1, 2]), s(&[2, 3]), s(&[0, 3])])
}

pub fn hollow_tetrahedron() -> SimplicialComplex {
    SimplicialComplex::closure([s(&[0, 1, 2]), s(&[1, 2, 3]), s(&[0, 1, 3]), s(&[0, 2, 3])])
}

/// A random face-closed complex on at most `max_vertices` vertices with
/// monotone integer values, no larger than `max_cells`.
pub fn random_filtered_complex(r: &mut ChaCha8Rng, max_vertices: usize, max_cells: usize) -> FilteredComplex {
    loop {
        let n = r.gen_range(1..=max_vertices);
        let generators: Vec<Simplex> = (0..r.gen_range(1..=6))
            .map(|_| {
                let size = r.gen_range(1..=4.min(n));
                let mut vs: Vec<usize> = (0..n).collect();
                for i in 0..size {
                    let j = r.gen_range(i..n);
                    vs.swap(i, j);
                }
                s(&vs[..size])
            })
            .collect();
        let complex = SimplicialComplex::closure(generators);
        if complex.len() > max_cells {
            continue;
        }
        let mut simplices: Vec<Simplex> = complex.simplices().cloned().collect();
        simplices.sort_by_key(|x| x.dim());
        let mut value: BTreeMap<Simplex, f64> = BTreeMap::new();
        for x in simplices {
            let own = r.gen_range(0..6) as f64;
            let v = x.facets().map(|f| value[&f]).fold(own, f64::max);
            value.insert(x, v);
        }
        return FilteredComplex::new(value.into_iter().collect()).unwrap();
    }
}

fn by_dim(complex: &SimplicialComplex) -> Vec<Vec<Simplex>> {
    let top = complex.max_dim().unwrap_or(0);
    let mut out = vec![Vec::new(); top + 2];
    for x in complex.simplices() {
        out[x.dim()].push(x.clone());
    }
    out
}

fn boundary_masks(cells: &[Simplex], faces: &[Simplex]) -> Vec<u128> {
    let pos: BTreeMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    cells
        .iter()
        .map(|c| c.facets().fold(0u128, |m, f| m | 1u128 << pos[&f]))
        .collect()
}

/// Betti numbers by listing every chain: β_k = log2 |Z_k| − log2 |B_k|.
/// Only for complexes with at most ~16 simplices per dimension.
pub fn brute_force_betti(complex: &SimplicialComplex, max_k: usize) -> Vec<usize> {
    let cells = by_dim(complex);
    let get = |k: usize| cells.get(k).cloned().unwrap_or_default();
    (0..=max_k)
        .map(|k| {
            let ck = get(k);
            assert!(ck.len() <= 20, "too many {k}-simplices for enumeration");
            let cycles = if k == 0 {
                1usize << ck.len()
            } else {
                let masks = boundary_masks(&ck, &get(k - 1));
                (0..1u64 << ck.len())
                    .filter(|&sel| {
                        (0..ck.len()).filter(|i| sel >> i & 1 == 1).fold(0u128, |acc, i| acc ^ masks[i]) == 0
                    })
                    .count()
            };
            let up = get(k + 1);
            assert!(up.len() <= 20, "too many {}-simplices for enumeration", k + 1);
            let masks = boundary_masks(&up, &ck);
            let images: HashSet<u128> = (0..1u64 << up.len())
                .map(|sel| (0..up.len()).filter(|i| sel >> i & 1 == 1).fold(0u128, |acc, i| acc ^ masks[i]))
                .collect();
            (cycles.trailing_zeros() - images.len().trailing_zeros()) as usize
        })
        .collect()
}

fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for bit in 0..width {
        let (w, b) = (bit / 64, bit % 64);
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] >> b & 1 == 1) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] >> b & 1 == 1 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

fn boundary_rank(cells: &[Simplex], faces: &[Simplex]) -> usize {
    if cells.is_empty() || faces.is_empty() {
        return 0;
    }
    let pos: BTreeMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let words = faces.len().div_ceil(64);
    let rows = cells
        .iter()
        .map(|c| {
            let mut row = vec![0u64; words];
            for f in c.facets() {
                let i = pos[&f];
                row[i / 64] |= 1 << (i % 64);
            }
            row
        })
        .collect();
    gf2_rank(rows)
}

/// Betti numbers by dense bit-row elimination, for complexes too large to
/// enumerate.
pub fn rank_betti(complex: &SimplicialComplex, max_k: usize) -> Vec<usize> {
    let cells = by_dim(complex);
    let get = |k: usize| cells.get(k).cloned().unwrap_or_default();
    (0..=max_k)
        .map(|k| {
            let n = get(k).len();
            let rk = if k == 0 { 0 } else { boundary_rank(&get(k), &get(k - 1)) };
            let rk1 = boundary_rank(&get(k + 1), &get(k));
            n - rk - rk1
        })
        .collect()
}

/// Every clique of `g` (up to `max_dim`) whose vertices all satisfy `keep`.
pub fn clique_complex(g: &Graph, keep: impl Fn(usize) -> bool, max_dim: usize) -> SimplicialComplex {
    let n = g.n_vertices();
    let verts: Vec<usize> = (0..n).filter(|&v| keep(v)).collect();
    let mut out: Vec<Simplex> = verts.iter().map(|&v| Simplex::vertex(v)).collect();
    let mut frontier: Vec<Vec<usize>> = verts.iter().map(|&v| vec![v]).collect();
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for c in &frontier {
            let last = *c.last().unwrap();
            for &w in verts.iter().filter(|&&w| w > last) {
                if c.iter().all(|&u| g.has_edge(u, w)) {
                    let mut d = c.clone();
                    d.push(w);
                    next.push(d);
                }
            }
        }
        out.extend(next.iter().map(|c| s(c)));
        frontier = next;
    }
    SimplicialComplex::from_simplices(out)
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| r.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

/// Random finite diagram with up to `max_points` points in [0, 10].
pub fn random_diagram(r: &mut ChaCha8Rng, max_points: usize) -> PersistenceDiagram {
    let k = r.gen_range(0..=max_points);
    let pts: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            let b: f64 = r.gen_range(0.0..8.0);
            (b, b + r.gen_range(0.01..4.0))
        })
        .collect();
    PersistenceDiagram::from_points(0, pts).unwrap()
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn to_diag(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// Wasserstein (or bottleneck for p = ∞) distance by trying every partial
/// matching of finite diagrams.
pub fn exhaustive_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, p: f64) -> f64 {
    let pa: Vec<(f64, f64)> = a.points().collect();
    let pb: Vec<(f64, f64)> = b.points().collect();
    let mut best = f64::INFINITY;
    let mut costs = Vec::new();
    search(&pa, &pb, 0, 0, &mut costs, p, &mut best);
    best
}

fn search(pa: &[(f64, f64)], pb: &[(f64, f64)], i: usize, used: u32, costs: &mut Vec<f64>, p: f64, best: &mut f64) {
    if i == pa.len() {
        let mut all = costs.clone();
        all.extend((0..pb.len()).filter(|j| used >> j & 1 == 0).map(|j| to_diag(pb[j])));
        let total = if p.is_infinite() {
            all.iter().copied().fold(0.0, f64::max)
        } else {
            all.iter().map(|c| c.powf(p)).sum::<f64>().powf(1.0 / p)
        };
        *best = best.min(total);
        return;
    }
    costs.push(to_diag(pa[i]));
    search(pa, pb, i + 1, used, costs, p, best);
    costs.pop();
    for j in 0..pb.len() {
        if used >> j & 1 == 0 {
            costs.push(linf(pa[i], pb[j]));
            search(pa, pb, i + 1, used | 1 << j, costs, p, best);
            costs.pop();
        }
    }
}

/// Number of 8-connected components of the true pixels, by flood fill.
pub fn components_8(rows: usize, cols: usize, mask: &[bool]) -> usize {
    let mut seen = vec![false; mask.len()];
    let mut count = 0;
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (r, c) = ((i / cols) as i64, (i % cols) as i64);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= rows as i64 || nc >= cols as i64 {
                        continue;
                    }
                    let j = nr as usize * cols + nc as usize;
                    if mask[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}

/// The Mapper graph must be the nerve of its own nodes: an edge exactly
/// when two nodes share a point, weighted by the overlap, and node sizes
/// matching their member lists.
pub fn check_nerve(g: &MapperGraph) -> Result<(), String> {
    let sets: Vec<BTreeSet<usize>> = g.nodes.iter().map(|n| n.members.iter().copied().collect()).collect();
    for (i, n) in g.nodes.iter().enumerate() {
        if n.id != i {
            return Err(format!("node {i} has id {}", n.id));
        }
        if n.size != n.members.len() || n.members.is_empty() {
            return Err(format!("node {i} size {} vs {} members", n.size, n.members.len()));
        }
    }
    let edges: BTreeMap<(usize, usize), usize> = g
        .edges
        .iter()
        .map(|e| ((e.source.min(e.target), e.source.max(e.target)), e.weight))
        .collect();
    if edges.len() != g.edges.len() {
        return Err("duplicate edges".into());
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let shared = sets[i].intersection(&sets[j]).count();
            match (shared, edges.get(&(i, j))) {
                (0, None) => {}
                (0, Some(_)) => return Err(format!("edge {i}-{j} between disjoint nodes")),
                (k, Some(&w)) if w == k => {}
                (k, w) => return Err(format!("nodes {i},{j} share {k} points but edge is {w:?}")),
            }
        }
    }
    if edges.keys().any(|&(a, b)| a == b) {
        return Err("self-loop".into());
    }
    Ok(())
}

pub fn circle(n: usize, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64 + r.gen_range(-0.01..0.01);
            let rad = 1.0 + r.gen_range(-0.02..0.02);
            vec![rad * t.cos(), rad * t.sin()]
        })
        .collect();
    PointCloud::new(pts).unwrap()
}

/// Two unit circles tangent at the origin, `per_circle` random angles each.
pub fn figure_eight(per_circle: usize, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let mut pts = Vec::new();
    for cx in [-1.0, 1.0] {
        for _ in 0..per_circle {
            let t: f64 = r.gen_range(0.0..2.0 * std::f64::consts::PI);
            pts.push(vec![cx + t.cos(), t.sin()]);
        }
    }
    PointCloud::new(pts).unwrap()
}

/// Gaussian-ish blobs (sum of uniforms) around the given centres.
pub fn blobs(centres: &[(f64, f64)], per_blob: usize, spread: f64, seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let mut noise = move || (0..4).map(|_| r.gen_range(-1.0..1.0)).sum::<f64>() * spread / 2.0;
    let pts = centres
        .iter()
        .flat_map(|&(x, y)| (0..per_blob).map(|_| (x, y)).collect::<Vec<_>>())
        .map(|(x, y)| vec![x + noise(), y + noise()])
        .collect();
    PointCloud::new(pts).unwrap()
}
