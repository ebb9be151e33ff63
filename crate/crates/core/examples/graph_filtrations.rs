// Degree sublevel filtration of a graph, the power filtration, and the two
// size reductions that leave the diagrams unchanged.

use tdakit::graph::{
    coral_reduce, node_filtration_values, power_filtration, prune_dominated, sublevel_node_filtration, Graph,
    NodeFunction,
};
use tdakit::persistence::compute_persistence;

pub fn run() -> tdakit::Result<()> {
    // a hexagon with a chord, a pendant path and a triangle
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (5, 6), (6, 7), (7, 8), (2, 9), (9, 10), (10, 2)];
    let g = Graph::new(11, edges)?;
    let degree = node_filtration_values(&g, NodeFunction::Degree)?;
    let g = g.with_node_values(degree.clone())?;
    let mut thresholds = degree.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let pd = compute_persistence(&sublevel_node_filtration(&g, &thresholds, 2)?, 1)?;
    println!("degree sublevel: H0 {:?}", pd[0].points().collect::<Vec<_>>());
    println!("                 H1 {:?}", pd[1].points().collect::<Vec<_>>());

    let core = coral_reduce(&g, 1)?;
    let pd_core = compute_persistence(&sublevel_node_filtration(&core.graph, &thresholds, 2)?, 1)?;
    println!("2-core keeps {:?}; H1 unchanged: {}", core.kept, pd_core[1] == pd[1]);

    let mut order: Vec<usize> = (0..g.n_vertices()).collect();
    order.sort_by(|&u, &v| degree[u].total_cmp(&degree[v]).then(u.cmp(&v)));
    let pruned = prune_dominated(&g, &order)?;
    let pd_pruned = compute_persistence(&sublevel_node_filtration(&pruned.graph, &thresholds, 2)?, 1)?;
    println!("pruning keeps {} of {} vertices; diagrams unchanged: {}", pruned.kept.len(), g.n_vertices(), pd_pruned == pd);

    let power = compute_persistence(&power_filtration(&g, 4, 2)?, 1)?;
    println!("power filtration H1: {:?}", power[1].points().collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() -> tdakit::Result<()> {
    run()
}
