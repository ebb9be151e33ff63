// Fixed-length vectors from a diagram: Betti curve, landscapes,
// silhouette, persistence curves and a persistence image.

use tdakit::persistence::PersistenceDiagram;
use tdakit::vectorize::{
    betti_curve, landscape, persistence_curve, persistence_image, silhouette, uniform_grid, ImageBounds, Psi,
    Statistic, Vectorization,
};

pub fn run() -> tdakit::Result<()> {
    let pd = PersistenceDiagram::from_points(1, [(0.0, 4.0), (1.0, 3.0), (2.0, 2.5), (3.0, f64::INFINITY)])?;
    let grid = uniform_grid(0.0, 5.0, 11)?;
    println!("betti curve   {:?}", betti_curve(&pd, &grid)?.values);
    println!("landscape 1   {:?}", landscape(&pd, 1, &grid)?.values);
    println!("landscape 2   {:?}", landscape(&pd, 2, &grid)?.values);
    println!("silhouette    {:?}", silhouette(&pd, 1.0, &grid)?.values);
    println!("entropy curve {:?}", persistence_curve(&pd, Psi::Entropy, Statistic::Sum, &grid)?.values);

    let bounds = ImageBounds::covering(std::slice::from_ref(&pd), 0.5);
    let img = persistence_image(&pd, (5, 5), bounds, 0.3, 1.0)?;
    println!("image total {:.4}, max {:.4}", img.total(), img.max());

    let method = Vectorization::Landscape { level: 1 };
    let v = method.apply(&pd, &grid)?;
    println!("{}", serde_json::to_string(&v.provenance).unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
