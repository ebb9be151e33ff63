//! End-to-end runs shared by the command line and the HTTP service:
//! datasets loaded from disk, filtration specs, and Mapper requests.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{
    coral_reduce, node_filtration_values, power_filtration, prune_dominated, sublevel_edge_filtration,
    sublevel_node_filtration, superlevel_node_filtration, weighted_power_filtration, inverse_weight, Graph,
    NodeFunction,
};
use crate::image::{default_thresholds, sublevel_filtration, superlevel_filtration, GrayImage};
use crate::io::{load_graph, load_node_values, load_pgm, load_pointcloud, DiagramFile, DiagramMeta};
use crate::mapper::{cover_for, mapper_graph, mapper_image, Clustering, Lens, MapperConfig, MapperGraph};
use crate::persistence::{compute_persistence, PersistenceDiagram};
use crate::pointcloud::{cech_filtration, pairwise_distances, rips_filtration, Metric, PointCloud};

/// An input loaded from disk.
#[derive(Clone, Debug)]
pub enum Dataset {
    PointCloud(PointCloud),
    Graph(Graph),
    Image(GrayImage),
}

impl Dataset {
    pub fn kind(&self) -> &'static str {
        match self {
            Dataset::PointCloud(_) => "pointcloud",
            Dataset::Graph(_) => "graph",
            Dataset::Image(_) => "image",
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Dataset::PointCloud(pc) => pc.len(),
            Dataset::Graph(g) => g.n_vertices(),
            Dataset::Image(img) => img.rows() * img.cols(),
        }
    }

    /// By extension: `.csv` point clouds, `.pgm` images, `.edges` edge
    /// lists (with node values from a `<stem>.values.csv` sidecar if one
    /// exists).
    pub fn load(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(Dataset::PointCloud(load_pointcloud(path)?)),
            Some("pgm") => Ok(Dataset::Image(load_pgm(path)?)),
            Some("edges") => {
                let loaded = load_graph(path)?;
                let sidecar = path.with_extension("values.csv");
                let graph = if sidecar.exists() {
                    let values = load_node_values(&sidecar, &loaded)?;
                    loaded.graph.with_node_values(values)?
                } else {
                    loaded.graph
                };
                Ok(Dataset::Graph(graph))
            }
            _ => Err(Error::Format(format!("unrecognized dataset file {}", path.display()))),
        }
    }
}

/// Loads every recognized file of a directory, keyed by file stem.
pub fn load_dataset_dir(dir: &Path) -> Result<BTreeMap<String, Dataset>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.ends_with(".values.csv") {
            continue;
        }
        let known = matches!(path.extension().and_then(|e| e.to_str()), Some("csv" | "pgm" | "edges"));
        if !known {
            continue;
        }
        let stem = name.rsplit_once('.').map_or(name, |(s, _)| s).to_string();
        out.insert(stem, Dataset::load(&path)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Reduction {
    #[default]
    None,
    /// Keep the (k+1)-core; diagrams of dimension ≥ k are unchanged.
    Coral { k: usize },
    /// Remove dominated vertices; all diagrams are unchanged.
    Prune,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

/// How to turn a dataset into persistence diagrams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FiltrationSpec {
    Rips {
        max_scale: f64,
        #[serde(default = "one")]
        max_dim: usize,
        #[serde(default)]
        metric: Metric,
    },
    Cech {
        max_scale: f64,
        #[serde(default = "one")]
        max_dim: usize,
    },
    Cubical {
        #[serde(default)]
        thresholds: Option<Vec<f64>>,
        #[serde(default)]
        superlevel: bool,
        #[serde(default = "one")]
        max_dim: usize,
    },
    GraphNode {
        function: NodeFunction,
        #[serde(default)]
        thresholds: Option<Vec<f64>>,
        #[serde(default)]
        superlevel: bool,
        #[serde(default = "two")]
        clique_dim: usize,
        #[serde(default = "one")]
        max_dim: usize,
        #[serde(default)]
        reduce: Reduction,
    },
    GraphEdge {
        #[serde(default)]
        thresholds: Option<Vec<f64>>,
        #[serde(default = "two")]
        clique_dim: usize,
        #[serde(default = "one")]
        max_dim: usize,
    },
    Power {
        max_hops: usize,
        #[serde(default = "one")]
        max_dim: usize,
    },
    WeightedPower {
        max_scale: f64,
        #[serde(default = "one")]
        max_dim: usize,
    },
}

impl FiltrationSpec {
    pub fn max_dim(&self) -> usize {
        match *self {
            FiltrationSpec::Rips { max_dim, .. }
            | FiltrationSpec::Cech { max_dim, .. }
            | FiltrationSpec::Cubical { max_dim, .. }
            | FiltrationSpec::GraphNode { max_dim, .. }
            | FiltrationSpec::GraphEdge { max_dim, .. }
            | FiltrationSpec::Power { max_dim, .. }
            | FiltrationSpec::WeightedPower { max_dim, .. } => max_dim,
        }
    }
}

fn distinct(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn wrong_kind(spec: &FiltrationSpec, ds: &Dataset) -> Error {
    let name = serde_json::to_value(spec).ok().and_then(|v| v["type"].as_str().map(String::from));
    Error::param(
        "filtration",
        format!("`{}` does not apply to a {} dataset", name.unwrap_or_default(), ds.kind()),
    )
}

/// Diagrams for dimensions 0..=max_dim plus the thresholds actually used.
pub fn compute_diagrams(ds: &Dataset, spec: &FiltrationSpec) -> Result<(Vec<PersistenceDiagram>, Value)> {
    let max_dim = spec.max_dim();
    match (spec, ds) {
        (&FiltrationSpec::Rips { max_scale, metric, .. }, Dataset::PointCloud(pc)) => {
            let dm = pairwise_distances(pc, metric);
            let fc = rips_filtration(&dm, max_scale, max_dim + 1)?;
            Ok((compute_persistence(&fc, max_dim)?, json!({ "max_scale": max_scale })))
        }
        (&FiltrationSpec::Cech { max_scale, .. }, Dataset::PointCloud(pc)) => {
            let fc = cech_filtration(pc, max_scale, max_dim + 1)?;
            Ok((compute_persistence(&fc, max_dim)?, json!({ "max_scale": max_scale })))
        }
        (FiltrationSpec::Cubical { thresholds, superlevel, .. }, Dataset::Image(img)) => {
            let t = match thresholds {
                Some(t) => t.clone(),
                None if *superlevel => default_thresholds().into_iter().rev().collect(),
                None => default_thresholds(),
            };
            let fc = if *superlevel { superlevel_filtration(img, &t)? } else { sublevel_filtration(img, &t)? };
            Ok((compute_persistence(&fc, max_dim)?, json!(t)))
        }
        (FiltrationSpec::GraphNode { function, thresholds, superlevel, clique_dim, reduce, .. }, Dataset::Graph(g)) => {
            let values = node_filtration_values(g, *function)?;
            let g = g.clone().with_node_values(values.clone())?;
            let g = match *reduce {
                Reduction::None => g,
                Reduction::Coral { k } => {
                    if max_dim < k {
                        log::warn!("core reduction with k = {k} only preserves dimensions ≥ {k}");
                    }
                    coral_reduce(&g, k)?.graph
                }
                Reduction::Prune => {
                    let mut order: Vec<usize> = (0..g.n_vertices()).collect();
                    let vals = g.node_values().unwrap_or_default().to_vec();
                    if *superlevel {
                        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
                    } else {
                        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
                    }
                    prune_dominated(&g, &order)?.graph
                }
            };
            let t = match thresholds {
                Some(t) => t.clone(),
                None => {
                    let d = distinct(values);
                    if *superlevel {
                        d.into_iter().rev().collect()
                    } else {
                        d
                    }
                }
            };
            let fc = if *superlevel {
                superlevel_node_filtration(&g, &t, *clique_dim)?
            } else {
                sublevel_node_filtration(&g, &t, *clique_dim)?
            };
            Ok((compute_persistence(&fc, max_dim)?, json!(t)))
        }
        (FiltrationSpec::GraphEdge { thresholds, clique_dim, .. }, Dataset::Graph(g)) => {
            let t = match thresholds {
                Some(t) => t.clone(),
                None => distinct(
                    g.edge_weights()
                        .ok_or_else(|| Error::param("edge_weights", "edge filtration needs a weighted graph"))?
                        .values()
                        .copied(),
                ),
            };
            let fc = sublevel_edge_filtration(g, &t, *clique_dim)?;
            Ok((compute_persistence(&fc, max_dim)?, json!(t)))
        }
        (&FiltrationSpec::Power { max_hops, .. }, Dataset::Graph(g)) => {
            let fc = power_filtration(g, max_hops, max_dim + 1)?;
            Ok((compute_persistence(&fc, max_dim)?, json!({ "max_hops": max_hops })))
        }
        (&FiltrationSpec::WeightedPower { max_scale, .. }, Dataset::Graph(g)) => {
            let fc = weighted_power_filtration(g, max_scale, max_dim + 1, inverse_weight)?;
            Ok((compute_persistence(&fc, max_dim)?, json!({ "max_scale": max_scale })))
        }
        _ => Err(wrong_kind(spec, ds)),
    }
}

/// [`compute_diagrams`] packaged as a diagram file.
pub fn diagram_file(ds: &Dataset, spec: &FiltrationSpec, source: &str) -> Result<DiagramFile> {
    let (pds, thresholds) = compute_diagrams(ds, spec)?;
    Ok(DiagramFile::from_diagrams(&pds, DiagramMeta::new(source, serde_json::to_value(spec)?, thresholds)))
}

/// Lens kinds accepted for each dataset kind.
pub fn lens_catalog() -> Value {
    json!({
        "pointcloud": Lens::kinds(),
        "graph": ["degree", "eccentricity", "closeness", "external"],
        "image": ["intensity"],
    })
}

/// Runs Mapper on any dataset kind. Point clouds take a [`Lens`] and a
/// clustering; graphs take `{"kind": <node function>}` and images
/// `{"kind": "intensity"}`, both clustered by connected components.
pub fn run_mapper(
    ds: &Dataset,
    lens: &Value,
    resolution: usize,
    overlap: f64,
    clustering: Option<&Clustering>,
) -> Result<MapperGraph> {
    let kind = lens.get("kind").and_then(Value::as_str).unwrap_or("");
    match ds {
        Dataset::PointCloud(pc) => {
            let lens: Lens =
                serde_json::from_value(lens.clone()).map_err(|e| Error::param("lens", e.to_string()))?;
            let clustering = clustering
                .cloned()
                .ok_or_else(|| Error::param("clustering", "point clouds need a clustering method"))?;
            MapperConfig { lens, resolution, overlap, clustering }.run(pc)
        }
        Dataset::Graph(g) => {
            let function: NodeFunction = serde_json::from_value(json!(kind))
                .map_err(|_| Error::param("lens", format!("unknown graph lens `{kind}`")))?;
            let values = node_filtration_values(g, function)?;
            let mut mg = mapper_graph(g, &values, &cover_for(&values, resolution, overlap)?)?;
            mg.params.lens = lens.clone();
            Ok(mg)
        }
        Dataset::Image(img) => {
            if kind != "intensity" {
                return Err(Error::param("lens", format!("unknown image lens `{kind}`")));
            }
            mapper_image(img, &cover_for(img.values(), resolution, overlap)?)
        }
    }
}
