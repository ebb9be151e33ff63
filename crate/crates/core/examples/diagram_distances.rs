// Wasserstein and bottleneck distances with their optimal matchings, and a
// persistence-weighted Gaussian kernel Gram matrix.

use tdakit::distance::{bottleneck_distance, distance_matrix, optimal_matching, pwgk_gram, wasserstein_distance};
use tdakit::persistence::PersistenceDiagram;

pub fn run() -> tdakit::Result<()> {
    let a = PersistenceDiagram::from_points(1, [(0.0, 2.0), (1.0, 1.4)])?;
    let b = PersistenceDiagram::from_points(1, [(0.0, 4.0)])?;
    let c = PersistenceDiagram::empty(1);
    println!("W1(a, b) = {}", wasserstein_distance(&a, &b, 1.0)?);
    println!("W2(a, b) = {}", wasserstein_distance(&a, &b, 2.0)?);
    println!("W∞(a, ∅) = {}", bottleneck_distance(&a, &c)?);
    let m = optimal_matching(&a, &b, 1.0)?;
    println!("matching {:?}, cost {}", m.pairs, m.cost);
    let all = [a, b, c];
    println!("W1 matrix {:?}", distance_matrix(&all, 1.0)?);
    println!("PWGK Gram {:?}", pwgk_gram(&all, 1.0, 1.0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
