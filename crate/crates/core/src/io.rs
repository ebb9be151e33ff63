//! File formats: CSV point clouds, edge lists with node-value sidecars,
//! PGM images, diagram JSON files, and 9-significant-digit number output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::image::GrayImage;
use crate::persistence::PersistenceDiagram;
use crate::pointcloud::PointCloud;

/// Rounds to 9 significant digits and prints the shortest form of the
/// result; infinities print as `inf` / `-inf`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// One CSV line of 9-significant-digit numbers.
pub fn csv_row(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_sig(v)).collect::<Vec<_>>().join(",")
}

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Numeric CSV, one point per row. A first row with a non-numeric field is
/// taken as a header; blank lines are skipped.
pub fn parse_pointcloud(text: &str) -> Result<PointCloud> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    let mut seen_first = false;
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields = split_fields(line);
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let first = !seen_first;
        seen_first = true;
        let row = match parsed {
            Ok(row) => row,
            Err(_) if first => continue,
            Err(e) => return Err(Error::Parse { line: lineno, message: format!("non-numeric field: {e}") }),
        };
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse { line: lineno, message: "non-finite coordinate".into() });
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse { line: lineno, message: format!("expected {w} fields, found {}", row.len()) })
            }
            _ => {}
        }
        points.push(row);
    }
    if points.is_empty() {
        return Err(Error::Format("point cloud file has no data rows".into()));
    }
    PointCloud::new(points)
}

pub fn load_pointcloud(path: impl AsRef<Path>) -> Result<PointCloud> {
    parse_pointcloud(&std::fs::read_to_string(path)?)
}

/// A graph read from an edge list, with the original vertex labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[v]` is the file's name for dense vertex `v`.
    pub labels: Vec<String>,
}

impl LoadedGraph {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn sort_labels(labels: &mut [String]) {
    let all_numeric = labels.iter().all(|l| l.parse::<i64>().is_ok());
    if all_numeric {
        labels.sort_by_key(|l| l.parse::<i64>().unwrap_or(0));
    } else {
        labels.sort();
    }
}

/// Lines `u v [weight]`; `#` starts a comment. Vertex labels are densified
/// in numeric (else lexicographic) order. A repeated edge keeps its last
/// weight.
pub fn parse_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut edges: BTreeMap<(String, String), Option<f64>> = BTreeMap::new();
    let mut weighted = None;
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = split_fields(line);
        if f.len() < 2 || f.len() > 3 {
            return Err(Error::Parse { line: lineno, message: "expected `u v [weight]`".into() });
        }
        if f[0] == f[1] {
            return Err(Error::Parse { line: lineno, message: format!("self-loop at vertex {}", f[0]) });
        }
        let w = match f.get(2) {
            Some(s) => Some(s.parse::<f64>().map_err(|e| Error::Parse { line: lineno, message: format!("bad weight: {e}") })?),
            None => None,
        };
        if *weighted.get_or_insert(w.is_some()) != w.is_some() {
            return Err(Error::Parse { line: lineno, message: "mix of weighted and unweighted edges".into() });
        }
        let (a, b) = (f[0].to_string(), f[1].to_string());
        let key = if a <= b { (a, b) } else { (b, a) };
        if edges.insert(key.clone(), w).is_some() {
            log::warn!("line {lineno}: duplicate edge {} {}; keeping the last weight", key.0, key.1);
        }
    }
    let mut labels: Vec<String> = edges.keys().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    sort_labels(&mut labels);
    labels.dedup();
    let id: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let pairs: Vec<((usize, usize), Option<f64>)> =
        edges.iter().map(|((a, b), w)| ((id[a.as_str()], id[b.as_str()]), *w)).collect();
    let graph = if weighted == Some(true) {
        Graph::weighted(labels.len(), pairs.into_iter().map(|(e, w)| (e, w.unwrap_or(0.0))))?
    } else {
        Graph::new(labels.len(), pairs.into_iter().map(|(e, _)| e))?
    };
    Ok(LoadedGraph { graph, labels })
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Sidecar `id,value` lines (optional header) giving a value for every
/// vertex of `g`.
pub fn parse_node_values(text: &str, g: &LoadedGraph) -> Result<Vec<f64>> {
    let mut values: Vec<Option<f64>> = vec![None; g.labels.len()];
    let mut first = true;
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_fields(line);
        let header = std::mem::take(&mut first);
        if f.len() != 2 {
            return Err(Error::Parse { line: lineno, message: "expected `id,value`".into() });
        }
        let v = match f[1].parse::<f64>() {
            Ok(v) => v,
            Err(_) if header => continue,
            Err(e) => return Err(Error::Parse { line: lineno, message: format!("bad value: {e}") }),
        };
        // vertices without edges never appear in the graph; ignore them
        if let Some(i) = g.index_of(f[0]) {
            values[i] = Some(v);
        }
    }
    let missing: Vec<&str> = (0..values.len()).filter(|&i| values[i].is_none()).map(|i| g.labels[i].as_str()).collect();
    if !missing.is_empty() {
        return Err(Error::Format(format!("node values missing for vertices {missing:?}")));
    }
    Ok(values.into_iter().flatten().collect())
}

pub fn load_node_values(path: impl AsRef<Path>, g: &LoadedGraph) -> Result<Vec<f64>> {
    parse_node_values(&std::fs::read_to_string(path)?, g)
}

/// Plain (P2) or binary (P5) PGM; gray levels are kept as stored.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let mut token = |bytes: &[u8]| -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("PGM header truncated".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    let magic = token(bytes)?;
    let num = |s: String, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Format(format!("PGM {what} `{s}` is not a number")))
    };
    let cols = num(token(bytes)?, "width")?;
    let rows = num(token(bytes)?, "height")?;
    let maxval = num(token(bytes)?, "maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("PGM maxval {maxval} out of range")));
    }
    let n = rows * cols;
    let values: Vec<f64> = match magic.as_str() {
        "P2" => {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(num(token(bytes)?, "pixel")? as f64);
            }
            v
        }
        "P5" => {
            let data = &bytes[(pos + 1).min(bytes.len())..];
            let width = if maxval > 255 { 2 } else { 1 };
            if data.len() < n * width {
                return Err(Error::Format(format!("PGM raster has {} bytes, expected {}", data.len(), n * width)));
            }
            (0..n)
                .map(|i| {
                    if width == 1 {
                        data[i] as f64
                    } else {
                        u16::from_be_bytes([data[2 * i], data[2 * i + 1]]) as f64
                    }
                })
                .collect()
        }
        other => return Err(Error::Format(format!("unsupported image format `{other}` (expected P2 or P5)"))),
    };
    GrayImage::new(rows, cols, values)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    parse_pgm(&std::fs::read(path)?)
}

/// Plain PGM text for an image with values in 0..=maxval.
pub fn to_pgm_p2(img: &GrayImage, maxval: u16) -> String {
    let mut out = format!("P2\n{} {}\n{maxval}\n", img.cols(), img.rows());
    for r in 0..img.rows() {
        let row: Vec<String> = (0..img.cols()).map(|c| format!("{}", img.get(r, c).round() as i64)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Diagrams of every dimension plus where they came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub dims: Vec<DimEntry>,
    pub meta: DiagramMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimEntry {
    pub dim: usize,
    #[serde(serialize_with = "ser_pairs", deserialize_with = "de_pairs")]
    pub pairs: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramMeta {
    pub source: String,
    pub filtration: serde_json::Value,
    pub thresholds: serde_json::Value,
    #[serde(default)]
    pub version: String,
}

impl DiagramMeta {
    pub fn new(source: impl Into<String>, filtration: serde_json::Value, thresholds: serde_json::Value) -> Self {
        DiagramMeta {
            source: source.into(),
            filtration,
            thresholds,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Death {
    Finite(f64),
    Token(String),
}

fn ser_pairs<S: Serializer>(pairs: &[(f64, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pairs.len()))?;
    for &(b, d) in pairs {
        let death = if d == f64::INFINITY { Death::Token("inf".into()) } else { Death::Finite(d) };
        seq.serialize_element(&(b, death))?;
    }
    seq.end()
}

fn de_pairs<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(f64, f64)>, D::Error> {
    let raw: Vec<(f64, Death)> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|(b, death)| match death {
            Death::Finite(x) => Ok((b, x)),
            Death::Token(t) if t == "inf" => Ok((b, f64::INFINITY)),
            Death::Token(t) => Err(serde::de::Error::custom(format!("unknown death token `{t}`"))),
        })
        .collect()
}

impl DiagramFile {
    pub fn from_diagrams(diagrams: &[PersistenceDiagram], meta: DiagramMeta) -> Self {
        DiagramFile {
            dims: diagrams
                .iter()
                .map(|pd| DimEntry { dim: pd.dim, pairs: pd.points().collect() })
                .collect(),
            meta,
        }
    }

    pub fn diagrams(&self) -> Result<Vec<PersistenceDiagram>> {
        self.dims
            .iter()
            .map(|e| PersistenceDiagram::from_points(e.dim, e.pairs.iter().copied()))
            .collect()
    }

    /// The diagram of dimension `dim`, empty if absent.
    pub fn diagram(&self, dim: usize) -> Result<PersistenceDiagram> {
        match self.dims.iter().find(|e| e.dim == dim) {
            Some(e) => PersistenceDiagram::from_points(dim, e.pairs.iter().copied()),
            None => Ok(PersistenceDiagram::empty(dim)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}
