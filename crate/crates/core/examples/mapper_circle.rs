// Mapper graphs: a noisy circle becomes a ring, and a graph is summarised
// through its closeness centrality.

use tdakit::graph::{node_filtration_values, Graph, NodeFunction};
use tdakit::mapper::{cover_for, mapper_graph, Clustering, Lens, MapperConfig};
use tdakit::pointcloud::PointCloud;

pub fn run() -> tdakit::Result<()> {
    let points: Vec<Vec<f64>> = (0..100)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 100.0;
            let r = 1.0 + 0.02 * (7.0 * t).sin();
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    let pc = PointCloud::new(points)?;
    let config = MapperConfig {
        lens: Lens::Coordinate { axis: 0 },
        resolution: 4,
        overlap: 0.25,
        clustering: Clustering::SingleLinkage { eps: 0.2 },
    };
    let m = config.run(&pc)?;
    println!("circle: {} nodes, {} edges, cycle rank {}", m.nodes.len(), m.edges.len(), m.cycle_rank());

    let pca = MapperConfig { lens: Lens::Pca { component: 0 }, ..config };
    println!("pca lens: {} nodes", pca.run(&pc)?.nodes.len());

    let g = Graph::new(12, (0..12).map(|i| (i, (i + 1) % 12)).chain([(0, 6)]))?;
    let lens = node_filtration_values(&g, NodeFunction::Closeness)?;
    let mg = mapper_graph(&g, &lens, &cover_for(&lens, 3, 0.5)?)?;
    println!("graph mapper: {} nodes, {} edges", mg.nodes.len(), mg.edges.len());
    println!("{}", serde_json::to_string(&mg.params).unwrap());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
