// Vietoris–Rips persistence of a figure-eight: two long H1 bars.

use tdakit::persistence::compute_persistence;
use tdakit::pointcloud::{pairwise_distances, rips_filtration, select_thresholds, Metric, PointCloud, ThresholdStrategy};

pub fn run() -> tdakit::Result<()> {
    let mut points = Vec::new();
    for cx in [-1.0, 1.0] {
        for k in 0..40 {
            let t = std::f64::consts::TAU * k as f64 / 40.0 + 0.05 * (k as f64 * 1.7).sin();
            points.push(vec![cx + t.cos(), t.sin()]);
        }
    }
    let pc = PointCloud::new(points)?;
    let dm = pairwise_distances(&pc, Metric::Euclidean);
    let fc = rips_filtration(&dm, 2.0, 2)?;
    let diagrams = compute_persistence(&fc, 1)?;
    println!("{} simplices up to scale 2", fc.cells().len());
    for pd in &diagrams {
        let life = pd.lifespans_desc();
        println!("H{}: {} bars, longest {:?}", pd.dim, pd.len(), &life[..life.len().min(3)]);
    }
    let t = select_thresholds(&dm, 5, ThresholdStrategy::Quantile)?;
    println!("quantile thresholds: {t:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
