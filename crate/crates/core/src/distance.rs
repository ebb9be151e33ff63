//! Distances and kernels between persistence diagrams.
//!
//! Matchings use the l∞ ground metric; a point matched to the diagonal pays
//! half its lifespan. Infinite bars are matched among themselves in birth
//! order at cost |Δbirth|, and both diagrams must have the same number.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::persistence::{PersistenceDiagram, PersistencePair};

/// One side of a matched pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    /// Index into the diagram's `pairs()`.
    Point(usize),
    Diagonal,
}

/// An optimal bijection between two diagrams (augmented by the diagonal).
/// Diagonal–diagonal pairs are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(Partner, Partner)>,
    pub cost: f64,
}

fn linf(a: &PersistencePair, b: &PersistencePair) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn half_life(a: &PersistencePair) -> f64 {
    (a.death - a.birth) / 2.0
}

struct Split {
    finite: Vec<usize>,
    infinite: Vec<usize>,
}

fn split(pd: &PersistenceDiagram) -> Split {
    let mut finite = Vec::new();
    let mut infinite = Vec::new();
    for (i, p) in pd.pairs().iter().enumerate() {
        if p.is_infinite() {
            infinite.push(i);
        } else {
            finite.push(i);
        }
    }
    // pairs() is sorted by birth, so infinite bars are already birth-ordered
    Split { finite, infinite }
}

fn prepare(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<(Split, Split)> {
    if a.dim != b.dim {
        return Err(Error::Diagram {
            dim: a.dim,
            message: format!("cannot compare with a diagram of dimension {}", b.dim),
        });
    }
    let (sa, sb) = (split(a), split(b));
    if sa.infinite.len() != sb.infinite.len() {
        return Err(Error::Diagram {
            dim: a.dim,
            message: format!(
                "mismatched infinite bars: {} vs {}",
                sa.infinite.len(),
                sb.infinite.len()
            ),
        });
    }
    Ok((sa, sb))
}

/// Augmented cost matrix of size (n+m)²: rows are the points of `a` then
/// `m` diagonal slots, columns the points of `b` then `n` diagonal slots.
fn augmented_costs(a: &[&PersistencePair], b: &[&PersistencePair], cost: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    let mut c = vec![vec![0.0; size]; size];
    for i in 0..n {
        for j in 0..m {
            c[i][j] = cost(linf(a[i], b[j]));
        }
        let d = cost(half_life(a[i]));
        for j in m..size {
            c[i][j] = d;
        }
    }
    for j in 0..m {
        let d = cost(half_life(b[j]));
        for row in c.iter_mut().skip(n) {
            row[j] = d;
        }
    }
    c
}

fn assemble(
    row_to_col: &[usize],
    a_idx: &[usize],
    b_idx: &[usize],
    sa: &Split,
    sb: &Split,
    cost: f64,
) -> Matching {
    let (n, m) = (a_idx.len(), b_idx.len());
    let mut pairs: Vec<(Partner, Partner)> = sa
        .infinite
        .iter()
        .zip(&sb.infinite)
        .map(|(&i, &j)| (Partner::Point(i), Partner::Point(j)))
        .collect();
    for (r, &c) in row_to_col.iter().enumerate() {
        let left = if r < n { Partner::Point(a_idx[r]) } else { Partner::Diagonal };
        let right = if c < m { Partner::Point(b_idx[c]) } else { Partner::Diagonal };
        if left != Partner::Diagonal || right != Partner::Diagonal {
            pairs.push((left, right));
        }
    }
    Matching { pairs, cost }
}

/// Optimal matching for the p-Wasserstein distance (`p = ∞` for bottleneck).
pub fn optimal_matching(a: &PersistenceDiagram, b: &PersistenceDiagram, p: f64) -> Result<Matching> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param("p", format!("must be at least 1 (got {p})")));
    }
    let (sa, sb) = prepare(a, b)?;
    let ap: Vec<&PersistencePair> = sa.finite.iter().map(|&i| &a.pairs()[i]).collect();
    let bp: Vec<&PersistencePair> = sb.finite.iter().map(|&j| &b.pairs()[j]).collect();
    let inf_costs = sa
        .infinite
        .iter()
        .zip(&sb.infinite)
        .map(|(&i, &j)| (a.pairs()[i].birth - b.pairs()[j].birth).abs());

    if p.is_infinite() {
        let costs = augmented_costs(&ap, &bp, |x| x);
        let (value, assignment) = bottleneck_assignment(&costs);
        let cost = inf_costs.fold(value, f64::max);
        Ok(assemble(&assignment, &sa.finite, &sb.finite, &sa, &sb, cost))
    } else {
        let costs = augmented_costs(&ap, &bp, |x| x.powf(p));
        let assignment = hungarian(&costs);
        let total: f64 = assignment.iter().enumerate().map(|(r, &c)| costs[r][c]).sum::<f64>()
            + inf_costs.map(|x| x.powf(p)).sum::<f64>();
        Ok(assemble(&assignment, &sa.finite, &sb.finite, &sa, &sb, total.powf(1.0 / p)))
    }
}

/// Wasserstein-p distance; `p = f64::INFINITY` gives the bottleneck distance.
pub fn wasserstein_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, p: f64) -> Result<f64> {
    optimal_matching(a, b, p).map(|m| m.cost)
}

pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Result<f64> {
    wasserstein_distance(a, b, f64::INFINITY)
}

/// Symmetric matrix of pairwise distances, computed in parallel.
pub fn distance_matrix(diagrams: &[PersistenceDiagram], p: f64) -> Result<Vec<Vec<f64>>> {
    let n = diagrams.len();
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values: Vec<f64> = upper
        .par_iter()
        .map(|&(i, j)| wasserstein_distance(&diagrams[i], &diagrams[j], p))
        .collect::<Result<_>>()?;
    let mut m = vec![vec![0.0; n]; n];
    for (&(i, j), v) in upper.iter().zip(values) {
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

/// Minimum-cost perfect assignment on a square matrix (Hungarian method
/// with potentials, O(n³)). Returns the column assigned to each row.
pub(crate) fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; column 0 is a virtual start.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}

/// Smallest threshold admitting a perfect matching, found by binary search
/// over the distinct entries of `cost`.
fn bottleneck_assignment(cost: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut candidates: Vec<f64> = cost.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = perfect_matching(cost, candidates[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(cost, candidates[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    (candidates[lo], best)
}

/// Kuhn's augmenting-path matching restricted to entries ≤ `limit`.
fn perfect_matching(cost: &[Vec<f64>], limit: f64) -> Option<Vec<usize>> {
    let n = cost.len();
    let adj: Vec<Vec<usize>> = cost
        .iter()
        .map(|row| (0..n).filter(|&j| row[j] <= limit).collect())
        .collect();
    let mut row_of: Vec<Option<usize>> = vec![None; n];

    fn augment(r: usize, adj: &[Vec<usize>], seen: &mut [bool], row_of: &mut [Option<usize>]) -> bool {
        for &c in &adj[r] {
            if !seen[c] {
                seen[c] = true;
                if row_of[c].is_none_or(|r2| augment(r2, adj, seen, row_of)) {
                    row_of[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }

    for r in 0..n {
        let mut seen = vec![false; n];
        if !augment(r, &adj, &mut seen, &mut row_of) {
            return None;
        }
    }
    let mut assignment = vec![0; n];
    for (c, r) in row_of.into_iter().enumerate() {
        assignment[r?] = c;
    }
    Some(assignment)
}

/// Persistence-weighted Gaussian kernel
/// Σₚ Σ_q w(p) w(q) exp(−‖p − q‖² / 2σ²) with w = (d − b)^weight_power.
pub fn pwgk(a: &PersistenceDiagram, b: &PersistenceDiagram, sigma: f64, weight_power: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::param("sigma", "must be positive"));
    }
    for pd in [a, b] {
        if pd.infinite().next().is_some() {
            return Err(Error::Diagram {
                dim: pd.dim,
                message: "infinite bars have no kernel weight".into(),
            });
        }
    }
    let w = |p: &PersistencePair| p.lifespan().powf(weight_power);
    let two_s2 = 2.0 * sigma * sigma;
    Ok(a.pairs()
        .iter()
        .map(|p| {
            b.pairs()
                .iter()
                .map(|q| {
                    let sq = (p.birth - q.birth).powi(2) + (p.death - q.death).powi(2);
                    w(p) * w(q) * (-sq / two_s2).exp()
                })
                .sum::<f64>()
        })
        .sum())
}

/// Gram matrix of [`pwgk`] over a collection.
pub fn pwgk_gram(diagrams: &[PersistenceDiagram], sigma: f64, weight_power: f64) -> Result<Vec<Vec<f64>>> {
    diagrams
        .par_iter()
        .map(|a| diagrams.iter().map(|b| pwgk(a, b, sigma, weight_power)).collect())
        .collect()
}
