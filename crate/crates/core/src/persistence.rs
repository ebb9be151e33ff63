//! Column reduction of a filtration's boundary matrix into persistence
//! diagrams and barcodes.

use crate::complex::{add_columns, Filtration};
use crate::error::{Error, Result};

/// A (birth, death) pair of a `dim`-dimensional feature. `death` is
/// `f64::INFINITY` for features that never die.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistencePair {
    pub fn lifespan(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }

    /// Alive on the half-open interval [birth, death).
    pub fn is_alive_at(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }
}

/// The multiset of pairs of one homology dimension.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PersistenceDiagram {
    pub dim: usize,
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    pub fn empty(dim: usize) -> Self {
        PersistenceDiagram { dim, pairs: Vec::new() }
    }

    /// Builds a diagram from (birth, death) points, dropping points on the
    /// diagonal. Deaths before births and NaNs are rejected.
    pub fn from_points(dim: usize, points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pairs = Vec::new();
        for (birth, death) in points {
            if birth.is_nan() || death.is_nan() || death < birth || birth.is_infinite() {
                return Err(Error::Diagram {
                    dim,
                    message: format!("invalid pair ({birth}, {death})"),
                });
            }
            if birth < death {
                pairs.push(PersistencePair { dim, birth, death });
            }
        }
        let mut pd = PersistenceDiagram { dim, pairs };
        pd.sort();
        Ok(pd)
    }

    fn sort(&mut self) {
        self.pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        });
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs.iter().map(|p| (p.birth, p.death))
    }

    pub fn finite(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| !p.is_infinite())
    }

    pub fn infinite(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| p.is_infinite())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn betti_at(&self, t: f64) -> usize {
        self.pairs.iter().filter(|p| p.is_alive_at(t)).count()
    }

    /// Lifespans sorted in decreasing order.
    pub fn lifespans_desc(&self) -> Vec<f64> {
        let mut l: Vec<f64> = self.pairs.iter().map(PersistencePair::lifespan).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        l
    }
}

/// Number of `dim`-dimensional bars alive at `t` (half-open convention).
pub fn betti_at(diagrams: &[PersistenceDiagram], dim: usize, t: f64) -> usize {
    diagrams
        .iter()
        .filter(|d| d.dim == dim)
        .map(|d| d.betti_at(t))
        .sum()
}

/// A half-open interval [start, end).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bar {
    pub start: f64,
    pub end: f64,
}

/// Interval view of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Barcode {
    pub dim: usize,
    pub bars: Vec<Bar>,
}

impl From<&PersistenceDiagram> for Barcode {
    fn from(pd: &PersistenceDiagram) -> Self {
        Barcode {
            dim: pd.dim,
            bars: pd
                .pairs
                .iter()
                .map(|p| Bar { start: p.birth, end: p.death })
                .collect(),
        }
    }
}

impl TryFrom<&Barcode> for PersistenceDiagram {
    type Error = Error;

    fn try_from(bc: &Barcode) -> Result<Self> {
        PersistenceDiagram::from_points(bc.dim, bc.bars.iter().map(|b| (b.start, b.end)))
    }
}

/// Raw output of the reduction: index pairs into the filtration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pairing {
    /// (birth cell, death cell)
    pub pairs: Vec<(usize, usize)>,
    /// Cells creating a class that never dies.
    pub essential: Vec<usize>,
}

/// Standard left-to-right column reduction with clearing, restricted to
/// cells of dimension ≤ `max_dim`; essential classes are reported below
/// `max_dim` only. Columns are processed from the highest
/// dimension down so that every pivot found clears a column one dimension
/// lower.
pub fn reduce<F: Filtration + ?Sized>(fc: &F, max_dim: usize) -> Result<Pairing> {
    let n = fc.len();
    let mut columns = fc.boundary_matrix()?.into_columns();
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); max_dim + 1];
    for j in 0..n {
        let d = fc.dim(j);
        if d <= max_dim {
            by_dim[d].push(j);
        }
    }

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
    let mut cleared = vec![false; n];
    let mut negative = vec![false; n];
    let mut scratch = Vec::new();
    let mut pairs = Vec::new();

    for d in (1..=max_dim).rev() {
        for &j in &by_dim[d] {
            if cleared[j] {
                columns[j].clear();
                continue;
            }
            while let Some(&low) = columns[j].last() {
                match pivot_of_row[low] {
                    Some(k) => {
                        add_columns(&columns[j], &columns[k], &mut scratch);
                        std::mem::swap(&mut columns[j], &mut scratch);
                    }
                    None => {
                        pivot_of_row[low] = Some(j);
                        cleared[low] = true;
                        negative[j] = true;
                        pairs.push((low, j));
                        break;
                    }
                }
            }
        }
    }

    // Positivity of top-dimensional cells is unknown, so they are never
    // reported as essential.
    let essential = (0..n)
        .filter(|&i| fc.dim(i) < max_dim && !negative[i] && pivot_of_row[i].is_none())
        .collect();
    pairs.sort_unstable();
    Ok(Pairing { pairs, essential })
}

/// Persistence diagrams for dimensions 0..=max_hom_dim.
///
/// Requires the filtration to contain every cell up to dimension
/// `max_hom_dim + 1`; a filtration truncated below that is an error rather
/// than a silently wrong top diagram.
pub fn compute_persistence<F: Filtration + ?Sized>(
    fc: &F,
    max_hom_dim: usize,
) -> Result<Vec<PersistenceDiagram>> {
    if let Some(cap) = fc.truncation() {
        if max_hom_dim + 1 > cap {
            return Err(Error::param(
                "max_hom_dim",
                format!(
                    "H_{max_hom_dim} needs cells up to dimension {} but the filtration stops at {cap}",
                    max_hom_dim + 1
                ),
            ));
        }
    }
    let pairing = reduce(fc, max_hom_dim + 1)?;
    let mut diagrams: Vec<PersistenceDiagram> =
        (0..=max_hom_dim).map(PersistenceDiagram::empty).collect();
    for &(b, d) in &pairing.pairs {
        let dim = fc.dim(b);
        if dim > max_hom_dim {
            continue;
        }
        let (birth, death) = (fc.value(b), fc.value(d));
        if birth < death {
            diagrams[dim].pairs.push(PersistencePair { dim, birth, death });
        }
    }
    for &e in &pairing.essential {
        let dim = fc.dim(e);
        if dim <= max_hom_dim {
            diagrams[dim].pairs.push(PersistencePair {
                dim,
                birth: fc.value(e),
                death: f64::INFINITY,
            });
        }
    }
    for pd in &mut diagrams {
        pd.sort();
    }
    Ok(diagrams)
}
