// Cubical sublevel and superlevel persistence of a synthetic image, plus a
// signed-distance filtration of its binarisation.

use tdakit::image::{
    raw_thresholds, signed_distance_values, sublevel_filtration, superlevel_filtration, GrayImage, GridMetric,
};
use tdakit::persistence::compute_persistence;

pub fn run() -> tdakit::Result<()> {
    let (rows, cols) = (24, 24);
    let values: Vec<f64> = (0..rows * cols)
        .map(|i| {
            let (r, c) = ((i / cols) as f64, (i % cols) as f64);
            let ring = ((r - 11.5).hypot(c - 11.5) - 7.0).abs();
            (ring * 30.0).min(255.0).round()
        })
        .collect();
    let img = GrayImage::new(rows, cols, values)?;

    let sub = sublevel_filtration(&img, &raw_thresholds(&img))?;
    let pds = compute_persistence(sub.cells(), 1)?;
    println!("sublevel: H0 {} bars, H1 {} bars", pds[0].len(), pds[1].len());

    let mut down = raw_thresholds(&img);
    down.reverse();
    let sup = compute_persistence(superlevel_filtration(&img, &down)?.cells(), 1)?;
    println!("superlevel: H0 {} bars, H1 {} bars", sup[0].len(), sup[1].len());

    let binary = img.map(|v| if v <= 30.0 { 1.0 } else { 0.0 });
    let sd = signed_distance_values(&binary, GridMetric::Chessboard)?;
    let sdf = compute_persistence(sublevel_filtration(&sd, &raw_thresholds(&sd))?.cells(), 1)?;
    println!("signed distance: H1 {:?}", sdf[1].points().collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
