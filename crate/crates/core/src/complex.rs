//! Simplicial and generic cell complexes over Z₂: simplices, face-closed
//! complexes, filtered complexes, boundary matrices, Betti numbers and the
//! Euler characteristic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// An abstract simplex given by its strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from any vertex list; the list is sorted and must
    /// not contain repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Structural("a simplex needs at least one vertex".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural(format!(
                "repeated vertex in simplex {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees the vertices are strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-1 faces in lexicographic order. Vertices have none.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).rev().map(move |skip| {
            Simplex(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
    }

    /// Every nonempty face, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| {
                Simplex(
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite set of simplices. Use [`SimplicialComplex::closure`] to build a
/// face-closed complex from generators; [`SimplicialComplex::from_simplices`]
/// keeps exactly what it is given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        SimplicialComplex {
            simplices: simplices.into_iter().collect(),
        }
    }

    /// The smallest face-closed complex containing every generator.
    pub fn closure(generators: impl IntoIterator<Item = Simplex>) -> Self {
        let mut simplices = BTreeSet::new();
        for s in generators {
            simplices.extend(s.all_faces());
        }
        SimplicialComplex { simplices }
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        counts
    }

    /// First simplex with a missing facet, if any.
    pub fn missing_face(&self) -> Option<(Simplex, Simplex)> {
        self.simplices.iter().find_map(|s| {
            s.facets()
                .find(|f| !self.simplices.contains(f))
                .map(|f| (s.clone(), f))
        })
    }

    pub fn is_face_closed(&self) -> bool {
        self.missing_face().is_none()
    }
}

/// Σ_k (−1)^k n_k over the simplex counts.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex
        .count_by_dim()
        .iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// Betti numbers β_0..=β_max_k over Z₂.
pub fn betti_numbers(complex: &SimplicialComplex, max_k: usize) -> Result<Vec<usize>> {
    if let Some((s, f)) = complex.missing_face() {
        return Err(Error::Structural(format!(
            "complex is not face-closed: {s} is present but its face {f} is not"
        )));
    }
    if let Some(top) = complex.max_dim() {
        if max_k > top {
            return Err(Error::param(
                "max_k",
                format!("requested β_{max_k} but the complex has dimension {top}"),
            ));
        }
    }

    if complex.is_empty() {
        return Ok(vec![0; max_k + 1]);
    }
    // Index simplices per dimension, then rank each boundary operator.
    let top = complex.max_dim().map_or(0, |d| d);
    let mut by_dim: Vec<HashMap<&Simplex, usize>> = vec![HashMap::new(); top + 2];
    for s in complex.simplices() {
        let map = &mut by_dim[s.dim()];
        let next = map.len();
        map.insert(s, next);
    }
    let rank_of = |k: usize| -> usize {
        if k == 0 || k > top {
            return 0;
        }
        let columns = by_dim[k]
            .keys()
            .map(|s| {
                let mut col: Vec<usize> = s.facets().map(|f| by_dim[k - 1][&f]).collect();
                col.sort_unstable();
                col
            })
            .collect();
        z2_rank(columns)
    };
    let ranks: Vec<usize> = (0..=max_k + 1).map(rank_of).collect();
    Ok((0..=max_k)
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect())
}

/// Symmetric difference of two sorted index lists, written into `out`.
pub(crate) fn add_columns(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Rank over Z₂ of a matrix given as sorted sparse columns.
pub(crate) fn z2_rank(mut columns: Vec<Vec<usize>>) -> usize {
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    let mut scratch = Vec::new();
    let mut rank = 0;
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match pivot_owner.get(&low) {
                Some(&other) => {
                    add_columns(&columns[j], &columns[other], &mut scratch);
                    std::mem::swap(&mut columns[j], &mut scratch);
                }
                None => {
                    pivot_owner.insert(low, j);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Sparse Z₂ boundary matrix; column `j` holds the sorted row indices of
/// the codimension-1 faces of cell `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    pub fn from_columns(columns: Vec<Vec<usize>>) -> Self {
        BoundaryMatrix { columns }
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn into_columns(self) -> Vec<Vec<usize>> {
        self.columns
    }

    /// Faces strictly precede cofaces.
    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|&i| i < j))
    }

    /// Dense 0/1 submatrix with the given row and column indices.
    pub fn dense_block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<u8>> {
        rows.iter()
            .map(|&r| {
                cols.iter()
                    .map(|&c| u8::from(self.columns[c].binary_search(&r).is_ok()))
                    .collect()
            })
            .collect()
    }
}

/// Anything the persistence engine can reduce: an ordered list of cells with
/// dimensions, filtration values and a boundary matrix in the same order.
pub trait Filtration {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn dim(&self, cell: usize) -> usize;
    fn value(&self, cell: usize) -> f64;
    fn boundary_matrix(&self) -> Result<BoundaryMatrix>;
    /// Skeleton cap used at construction time. `None` means no simplex of the
    /// underlying complex was left out.
    fn truncation(&self) -> Option<usize> {
        None
    }
    fn top_dim(&self) -> Option<usize> {
        (0..self.len()).map(|i| self.dim(i)).max()
    }
}

fn cmp_value(a: f64, b: f64) -> std::cmp::Ordering {
    a.partial_cmp(&b).expect("filtration values are never NaN")
}

/// A simplicial filtration: simplices with entry values, sorted by
/// (value, dimension, vertices).
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    cells: Vec<(Simplex, f64)>,
    index: HashMap<Simplex, usize>,
    truncation: Option<usize>,
}

impl FilteredComplex {
    /// Validates and orders the cells. Duplicates, NaN values, missing faces
    /// and faces entering after their cofaces are structural errors.
    pub fn new(cells: Vec<(Simplex, f64)>) -> Result<Self> {
        Self::with_truncation(cells, None)
    }

    pub fn with_truncation(mut cells: Vec<(Simplex, f64)>, truncation: Option<usize>) -> Result<Self> {
        if let Some((s, _)) = cells.iter().find(|(_, v)| v.is_nan()) {
            return Err(Error::Structural(format!("simplex {s} has a NaN value")));
        }
        cells.sort_by(|(a, va), (b, vb)| {
            cmp_value(*va, *vb)
                .then(a.dim().cmp(&b.dim()))
                .then_with(|| a.cmp(b))
        });
        let mut index = HashMap::with_capacity(cells.len());
        for (i, (s, _)) in cells.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::Structural(format!("duplicate simplex {s}")));
            }
        }
        for (s, v) in &cells {
            for f in s.facets() {
                match index.get(&f) {
                    None => {
                        return Err(Error::Structural(format!(
                            "simplex {s} is missing its face {f}"
                        )))
                    }
                    Some(&fi) if cells[fi].1 > *v => {
                        return Err(Error::Structural(format!(
                            "face {f} enters at {} after its coface {s} at {v}",
                            cells[fi].1
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(FilteredComplex {
            cells,
            index,
            truncation,
        })
    }

    pub fn cells(&self) -> &[(Simplex, f64)] {
        &self.cells
    }

    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn value_of(&self, s: &Simplex) -> Option<f64> {
        self.position(s).map(|i| self.cells[i].1)
    }

    /// Distinct filtration values in increasing order.
    pub fn values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.cells.iter().map(|c| c.1).collect();
        vals.dedup();
        vals
    }

    /// The subcomplex of cells with value ≤ t.
    pub fn prefix(&self, t: f64) -> SimplicialComplex {
        SimplicialComplex::from_simplices(
            self.cells
                .iter()
                .take_while(|(_, v)| *v <= t)
                .map(|(s, _)| s.clone()),
        )
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.cells.iter().map(|(s, _)| s.clone()))
    }
}

impl Filtration for FilteredComplex {
    fn len(&self) -> usize {
        self.cells.len()
    }

    fn dim(&self, cell: usize) -> usize {
        self.cells[cell].0.dim()
    }

    fn value(&self, cell: usize) -> f64 {
        self.cells[cell].1
    }

    fn boundary_matrix(&self) -> Result<BoundaryMatrix> {
        boundary_matrix(self)
    }

    fn truncation(&self) -> Option<usize> {
        self.truncation
    }
}

/// Boundary matrix of a filtered simplicial complex in filtration order.
pub fn boundary_matrix(fc: &FilteredComplex) -> Result<BoundaryMatrix> {
    let columns = fc
        .cells
        .iter()
        .map(|(s, _)| {
            let mut col = s
                .facets()
                .map(|f| {
                    fc.index.get(&f).copied().ok_or_else(|| {
                        Error::Structural(format!("simplex {s} is missing its face {f}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            col.sort_unstable();
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryMatrix { columns })
}

/// A filtration over arbitrary cells (cubes, bifiltration slices) given
/// directly by dimensions, values and boundaries.
#[derive(Clone, Debug, Default)]
pub struct CellFiltration {
    dims: Vec<usize>,
    values: Vec<f64>,
    columns: Vec<Vec<usize>>,
    truncation: Option<usize>,
}

/// One cell before ordering; `boundary` refers to positions in the input list.
#[derive(Clone, Debug)]
pub struct RawCell {
    pub dim: usize,
    pub value: f64,
    pub boundary: Vec<usize>,
}

impl CellFiltration {
    /// Orders cells by (value, dimension, input position) and reindexes the
    /// boundaries. Returns the filtration and, for each input cell, its new
    /// position.
    pub fn from_cells(cells: Vec<RawCell>, truncation: Option<usize>) -> Result<(Self, Vec<usize>)> {
        let mut order: Vec<usize> = (0..cells.len()).collect();
        if let Some(c) = cells.iter().position(|c| c.value.is_nan()) {
            return Err(Error::Structural(format!("cell {c} has a NaN value")));
        }
        order.sort_by(|&a, &b| {
            cmp_value(cells[a].value, cells[b].value)
                .then(cells[a].dim.cmp(&cells[b].dim))
                .then(a.cmp(&b))
        });
        let mut new_pos = vec![0; cells.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_pos[old] = pos;
        }
        let mut dims = Vec::with_capacity(cells.len());
        let mut values = Vec::with_capacity(cells.len());
        let mut columns = Vec::with_capacity(cells.len());
        for &old in &order {
            let c = &cells[old];
            let mut col = Vec::with_capacity(c.boundary.len());
            for &f in &c.boundary {
                let face = cells.get(f).ok_or_else(|| {
                    Error::Structural(format!("cell {old} references unknown face {f}"))
                })?;
                if face.dim + 1 != c.dim || face.value > c.value {
                    return Err(Error::Structural(format!(
                        "cell {old} (dim {}, value {}) has incompatible face {f} (dim {}, value {})",
                        c.dim, c.value, face.dim, face.value
                    )));
                }
                col.push(new_pos[f]);
            }
            col.sort_unstable();
            dims.push(c.dim);
            values.push(c.value);
            columns.push(col);
        }
        Ok((
            CellFiltration {
                dims,
                values,
                columns,
                truncation,
            },
            new_pos,
        ))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Betti numbers β_0..=max_k of the prefix with values ≤ t.
    pub fn prefix_betti(&self, t: f64, max_k: usize) -> Vec<usize> {
        let n = self.values.partition_point(|&v| v <= t);
        cell_betti(&self.dims[..n], &self.columns[..n], max_k)
    }
}

impl Filtration for CellFiltration {
    fn len(&self) -> usize {
        self.dims.len()
    }

    fn dim(&self, cell: usize) -> usize {
        self.dims[cell]
    }

    fn value(&self, cell: usize) -> f64 {
        self.values[cell]
    }

    fn boundary_matrix(&self) -> Result<BoundaryMatrix> {
        Ok(BoundaryMatrix::from_columns(self.columns.clone()))
    }

    fn truncation(&self) -> Option<usize> {
        self.truncation
    }
}

/// Static Betti numbers of a closed cell complex given by dimensions and
/// boundary columns (rows index the same cell list).
pub(crate) fn cell_betti(dims: &[usize], columns: &[Vec<usize>], max_k: usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_k + 2];
    let mut per_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_k + 2];
    for (d, col) in dims.iter().zip(columns) {
        if *d <= max_k + 1 {
            counts[*d] += 1;
            per_dim[*d].push(col.clone());
        }
    }
    let ranks: Vec<usize> = per_dim
        .into_iter()
        .enumerate()
        .map(|(k, cols)| if k == 0 { 0 } else { z2_rank(cols) })
        .collect();
    (0..=max_k)
        .map(|k| counts[k] - ranks[k] - ranks[k + 1])
        .collect()
}
