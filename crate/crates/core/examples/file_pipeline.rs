// Files in, files out: a point cloud CSV becomes a diagram file, a
// vector row and a distance, as the command line does it.

use tdakit::distance::bottleneck_distance;
use tdakit::io::{csv_row, fmt_sig, load_pointcloud, DiagramFile};
use tdakit::persistence::PersistenceDiagram;
use tdakit::pipeline::{diagram_file, Dataset, FiltrationSpec};
use tdakit::pointcloud::Metric;
use tdakit::vectorize::{default_grid, Vectorization};

pub fn run() -> tdakit::Result<()> {
    let dir = std::env::temp_dir().join(format!("tdakit-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let csv: String = (0..30)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 30.0;
            format!("{},{}\n", t.cos(), t.sin())
        })
        .collect();
    std::fs::write(dir.join("circle.csv"), format!("x,y\n{csv}"))?;

    let ds = Dataset::PointCloud(load_pointcloud(dir.join("circle.csv"))?);
    let spec = FiltrationSpec::Rips { max_scale: 2.0, max_dim: 1, metric: Metric::Euclidean };
    let file = diagram_file(&ds, &spec, "circle.csv")?;
    file.save(dir.join("circle.json"))?;

    let back = DiagramFile::load(dir.join("circle.json"))?;
    let diagrams = back.diagrams()?;
    let grid = default_grid(&diagrams, 10)?;
    let v = Vectorization::Silhouette { p: 2.0 }.apply_batch(std::slice::from_ref(&diagrams), &grid)?;
    println!("silhouette row: {}", csv_row(&v[0].values));
    println!("H1 bottleneck to empty: {}", fmt_sig(bottleneck_distance(&diagrams[1], &PersistenceDiagram::empty(1))?));
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
