//! Flag (clique) complex expansion shared by Rips, power and graph
//! filtrations. A clique enters at the maximum value over its vertices and
//! edges, which makes every produced filtration monotone.

use std::collections::HashMap;

use crate::complex::{FilteredComplex, Simplex};
use crate::error::Result;

/// Expands a weighted graph into its clique filtration up to `max_dim`.
///
/// `vertex_values[v] = None` leaves vertex `v` (and every edge touching it)
/// out of the complex. Edges are `(u, v, value)` with `u != v`.
pub fn flag_filtration(
    vertex_values: &[Option<f64>],
    edges: &[(usize, usize, f64)],
    max_dim: usize,
    truncation: Option<usize>,
) -> Result<FilteredComplex> {
    let n = vertex_values.len();
    let mut higher: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge_value: HashMap<(usize, usize), f64> = HashMap::with_capacity(edges.len());
    for &(u, v, w) in edges {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        if vertex_values[a].is_none() || vertex_values[b].is_none() {
            continue;
        }
        if edge_value.insert((a, b), w).is_none() {
            higher[a].push(b);
        }
    }
    for nb in &mut higher {
        nb.sort_unstable();
    }

    let mut cells = Vec::new();
    for (v, val) in vertex_values.iter().enumerate() {
        if let Some(val) = *val {
            cells.push((Simplex::vertex(v), val));
        }
    }
    if max_dim >= 1 {
        let mut clique = Vec::with_capacity(max_dim + 1);
        for v in 0..n {
            let Some(val) = vertex_values[v] else { continue };
            clique.push(v);
            expand(
                &mut clique,
                val,
                &higher[v],
                &higher,
                &edge_value,
                vertex_values,
                max_dim,
                &mut cells,
            );
            clique.pop();
        }
    }
    FilteredComplex::with_truncation(cells, truncation)
}

#[allow(clippy::too_many_arguments)]
fn expand(
    clique: &mut Vec<usize>,
    value: f64,
    candidates: &[usize],
    higher: &[Vec<usize>],
    edge_value: &HashMap<(usize, usize), f64>,
    vertex_values: &[Option<f64>],
    max_dim: usize,
    cells: &mut Vec<(Simplex, f64)>,
) {
    for (ci, &w) in candidates.iter().enumerate() {
        let mut val = value.max(vertex_values[w].unwrap_or(f64::NEG_INFINITY));
        for &u in clique.iter() {
            val = val.max(edge_value[&(u, w)]);
        }
        clique.push(w);
        cells.push((Simplex::from_sorted(clique.clone()), val));
        if clique.len() <= max_dim {
            let next: Vec<usize> = candidates[ci + 1..]
                .iter()
                .copied()
                .filter(|x| higher[w].binary_search(x).is_ok())
                .collect();
            if !next.is_empty() {
                expand(clique, val, &next, higher, edge_value, vertex_values, max_dim, cells);
            }
        }
        clique.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Filtration;

    #[test]
    fn triangle_enters_at_longest_edge() {
        let fc = flag_filtration(
            &[Some(0.0); 3],
            &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)],
            2,
            None,
        )
        .unwrap();
        assert_eq!(fc.len(), 7);
        let tri = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(fc.value_of(&tri), Some(3.0));
    }

    #[test]
    fn absent_vertices_drop_their_edges() {
        let fc = flag_filtration(&[Some(0.0), None, Some(1.0)], &[(0, 1, 1.0), (0, 2, 0.5)], 2, None).unwrap();
        assert_eq!(fc.len(), 3);
        // the edge takes the later vertex value
        assert_eq!(fc.value_of(&Simplex::new(vec![0, 2]).unwrap()), Some(1.0));
    }

    #[test]
    fn respects_dimension_cap() {
        let edges: Vec<_> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0)))
            .collect();
        let fc = flag_filtration(&[Some(0.0); 4], &edges, 2, Some(2)).unwrap();
        assert_eq!(fc.top_dim(), Some(2));
        assert_eq!(fc.len(), 4 + 6 + 4);
    }
}
