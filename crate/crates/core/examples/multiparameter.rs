// A graph filtered by two node functions at once: the bigraded Betti
// table and its horizontal slices turned into silhouettes.

use tdakit::graph::{node_filtration_values, Graph, NodeFunction};
use tdakit::multipers::{bigraded_betti, graph_bifiltration, slice_vectorize, Axis, SliceVectorizer};

pub fn run() -> tdakit::Result<()> {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 3), (1, 7)];
    let g = Graph::new(8, edges)?;
    let f = node_filtration_values(&g, NodeFunction::Degree)?;
    let h = node_filtration_values(&g, NodeFunction::Eccentricity)?;
    let bf = graph_bifiltration(&g, &f, &h, &[1.0, 2.0, 3.0, 4.0], &[2.0, 3.0, 4.0, 5.0], 2)?;
    for dim in 0..=1 {
        let t = bigraded_betti(&bf, dim)?;
        println!("β{dim} (rows: degree ≤ α, columns: eccentricity ≤ β)");
        for row in &t.values {
            println!("  {row:?}");
        }
    }
    let s = slice_vectorize(&bf, 1, SliceVectorizer::Silhouette { p: 1.0 }, Axis::Horizontal)?;
    println!("H1 silhouettes per row: {:?}", s.values);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
