// Čech and Rips disagree on an equilateral triangle: Rips fills it at the
// side length, Čech only at twice the circumradius.

use tdakit::persistence::compute_persistence;
use tdakit::pointcloud::{cech_filtration, pairwise_distances, rips_filtration, Metric, PointCloud};

pub fn run() -> tdakit::Result<()> {
    let h = 3f64.sqrt() / 2.0;
    let pc = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]])?;
    let rips = rips_filtration(&pairwise_distances(&pc, Metric::Euclidean), 2.0, 2)?;
    let cech = cech_filtration(&pc, 2.0, 2)?;
    println!("Rips H1: {:?}", compute_persistence(&rips, 1)?[1].points().collect::<Vec<_>>());
    println!("Čech H1: {:?}", compute_persistence(&cech, 1)?[1].points().collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
