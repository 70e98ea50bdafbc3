use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::DisjointSet;
use crate::graph::{EddInstance, Graph, InstanceError, NodeId};

#[derive(Debug, Error)]
pub enum EuaError {
    #[error("cannot open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("header has no {0} column")]
    MissingColumn(&'static str),
    #[error("line {line}: {message}")]
    BadRow { line: u64, message: String },
    #[error("file contains no data rows")]
    Empty,
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("destination count {r_count} must lie in 1..={n}")]
    DestinationCount { r_count: usize, n: usize },
}

/// Base-station location in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoPoint {
    /// Great-circle distance in kilometres.
    pub fn distance_km(&self, other: &GeoPoint) -> f64 {
        const EARTH_RADIUS_KM: f64 = 6371.0;
        let (la1, la2) = (self.latitude.to_radians(), other.latitude.to_radians());
        let dla = la2 - la1;
        let dlo = (other.longitude - self.longitude).to_radians();
        let a = (dla / 2.0).sin().powi(2) + la1.cos() * la2.cos() * (dlo / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_KM * a.sqrt().asin()
    }
}

fn column(headers: &csv::StringRecord, names: &[&str], label: &'static str) -> Result<usize, EuaError> {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
        .ok_or(EuaError::MissingColumn(label))
}

/// Reads an edge-server site list with latitude/longitude columns.
pub fn load_eua(path: impl AsRef<Path>) -> Result<Vec<GeoPoint>, EuaError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|source| EuaError::Io {
            path: path.display().to_string(),
            source,
        })?;
    let headers = reader.headers().map_err(|e| EuaError::BadRow {
        line: 1,
        message: e.to_string(),
    })?;
    let lat_col = column(headers, &["latitude", "lat"], "latitude")?;
    let lon_col = column(headers, &["longitude", "lon", "lng", "long"], "longitude")?;

    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| EuaError::BadRow {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parse = |col: usize, name: &str, range: f64| -> Result<f64, EuaError> {
            let raw = record.get(col).unwrap_or("").trim();
            let value: f64 = raw.parse().map_err(|_| EuaError::BadRow {
                line,
                message: format!("{name} `{raw}` is not a number"),
            })?;
            if !value.is_finite() || value.abs() > range {
                return Err(EuaError::BadRow {
                    line,
                    message: format!("{name} {value} is out of range"),
                });
            }
            Ok(value)
        };
        points.push(GeoPoint {
            latitude: parse(lat_col, "latitude", 90.0)?,
            longitude: parse(lon_col, "longitude", 180.0)?,
        });
    }
    if points.is_empty() {
        return Err(EuaError::Empty);
    }
    log::info!("loaded {} edge-server sites from {}", points.len(), path.display());
    Ok(points)
}

/// Links every site to its `k` nearest neighbours, then joins leftover
/// components through their closest pair of sites. Node `i + 1` is `points[i]`.
pub fn proximity_graph(points: &[GeoPoint], k: usize) -> Result<Graph, InstanceError> {
    let n = points.len();
    let mut edges = std::collections::BTreeSet::new();
    for i in 0..n {
        let mut by_distance: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (points[i].distance_km(&points[j]), j))
            .collect();
        by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(_, j) in by_distance.iter().take(k) {
            edges.insert((i.min(j) + 1, i.max(j) + 1));
        }
    }
    let mut dsu = DisjointSet::new(n + 1);
    for &(u, v) in &edges {
        dsu.union(u, v);
    }
    loop {
        let root = dsu.find(1);
        let mut closest: Option<(f64, NodeId, NodeId)> = None;
        for u in 1..=n {
            if dsu.find(u) != root {
                continue;
            }
            for v in 1..=n {
                if dsu.find(v) == root {
                    continue;
                }
                let d = points[u - 1].distance_km(&points[v - 1]);
                if closest.is_none_or(|(best, _, _)| d < best) {
                    closest = Some((d, u, v));
                }
            }
        }
        let Some((_, u, v)) = closest else { break };
        edges.insert((u.min(v), u.max(v)));
        dsu.union(u, v);
    }
    let edges: Vec<(NodeId, NodeId)> = edges.into_iter().collect();
    Ok(Graph::new(n, &edges)?)
}

/// Instance over a proximity graph of `points` with random destinations.
pub fn instance_from_points(
    points: &[GeoPoint],
    k: usize,
    r_count: usize,
    gamma: f64,
    d_limit: u32,
    seed: u64,
) -> Result<EddInstance, EuaError> {
    if r_count == 0 || r_count > points.len() {
        return Err(EuaError::DestinationCount {
            r_count,
            n: points.len(),
        });
    }
    let graph = proximity_graph(points, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes: Vec<NodeId> = graph.nodes().collect();
    let destinations: Vec<NodeId> = nodes.choose_multiple(&mut rng, r_count).copied().collect();
    Ok(EddInstance::new(graph, destinations, gamma, d_limit)?)
}
