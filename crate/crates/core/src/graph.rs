//! Signed graph data model and cut/objective arithmetic.
//!
//! A [`SignedGraph`] is a dense symmetric weight matrix over asset vertices,
//! with weights in `[-1, 1]` (correlations or planted synthetic weights).
//! A [`Partition`] is a coalition structure: disjoint clusters covering all
//! vertices, with the cluster count implied. Both are validated at
//! construction and immutable afterwards, so every downstream consumer can
//! rely on symmetry, zero diagonal, and canonical cluster labels.

use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Round-off allowance on the correlation range check.
const WEIGHT_RANGE_TOL: f64 = 1e-12;

/// Dense signed, weighted, undirected graph.
///
/// Invariants enforced at construction:
/// - the weight matrix is exactly symmetric,
/// - the diagonal is exactly zero,
/// - every entry lies in `[-1, 1]` up to round-off,
/// - labels, when present, are unique and one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    n: usize,
    /// Row-major `n * n` weight matrix.
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl SignedGraph {
    /// Build a graph from a row-major flat weight matrix.
    pub fn new(n: usize, weights: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph must have n >= 1".into()));
        }
        if weights.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "weight matrix has {} entries, expected {} for n={}",
                weights.len(),
                n * n,
                n
            )));
        }
        for i in 0..n {
            if weights[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "diagonal entry ({i},{i}) is {}, must be 0",
                    weights[i * n + i]
                )));
            }
            for j in 0..i {
                // Exact equality: the matrix is constructed, not measured.
                if weights[i * n + j] != weights[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "weights not symmetric at ({i},{j}): {} vs {}",
                        weights[i * n + j],
                        weights[j * n + i]
                    )));
                }
            }
            for j in 0..n {
                let w = weights[i * n + j];
                if !w.is_finite() || w.abs() > 1.0 + WEIGHT_RANGE_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "weight ({i},{j}) = {w} outside [-1, 1]"
                    )));
                }
            }
        }
        if let Some(ref labels) = labels {
            if labels.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "{} labels for {} vertices",
                    labels.len(),
                    n
                )));
            }
            for (i, a) in labels.iter().enumerate() {
                if labels[..i].contains(a) {
                    return Err(Error::InvalidArgument(format!("duplicate label {a:?}")));
                }
            }
        }
        Ok(SignedGraph { n, weights, labels })
    }

    /// Build a graph from nested rows.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        Self::new(n, rows.into_iter().flatten().collect(), labels)
    }

    /// Convenience constructor for tests and fixtures: upper-triangle pairs.
    ///
    /// `edges` lists `(i, j, w)` with `i != j`; unlisted pairs get weight 0.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = vec![0.0; n * n];
        for &(i, j, w) in edges {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i},{j}) invalid for n={n}"
                )));
            }
            weights[i * n + j] = w;
            weights[j * n + i] = w;
        }
        Self::new(n, weights, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight between vertices `i` and `j`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Sum of all edge weights, over pairs `i < j`.
    pub fn total_edge_weight(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                total += self.weight(i, j);
            }
        }
        total
    }

    /// Sum of `|w_ij|` over pairs `i < j`; the attainable objective range.
    pub fn total_abs_edge_weight(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                total += self.weight(i, j).abs();
            }
        }
        total
    }

    /// Subgraph induced by `vertices`, plus the map from local indices back
    /// to the parent's.
    ///
    /// Local vertex `a` corresponds to parent vertex `map[a]`, and the local
    /// weight between `a` and `b` equals the parent weight between `map[a]`
    /// and `map[b]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(SignedGraph, Vec<usize>)> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument(
                "induced subgraph needs a non-empty vertex set".into(),
            ));
        }
        let m = vertices.len();
        for (a, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} out of range for n={}",
                    self.n
                )));
            }
            if vertices[..a].contains(&v) {
                return Err(Error::InvalidArgument(format!("duplicate vertex {v}")));
            }
        }
        let mut weights = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                weights[a * m + b] = self.weight(vertices[a], vertices[b]);
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| vertices.iter().map(|&v| ls[v].clone()).collect());
        let sub = SignedGraph::new(m, weights, labels)?;
        Ok((sub, vertices.to_vec()))
    }

    /// Total weight of edges crossing the bipartition described by `side`.
    pub fn cut_value(&self, side: &[bool]) -> Result<f64> {
        if side.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "side has {} bits for {} vertices",
                side.len(),
                self.n
            )));
        }
        let mut value = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if side[i] != side[j] {
                    value += self.weight(i, j);
                }
            }
        }
        Ok(value)
    }

    /// Coalition-structure objective: sum of intra-cluster edge weights.
    pub fn intra_weight(&self, p: &Partition) -> Result<f64> {
        if p.assignment().len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "partition over {} vertices, graph has {}",
                p.assignment().len(),
                self.n
            )));
        }
        let assignment = p.assignment();
        let mut total = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if assignment[i] == assignment[j] {
                    total += self.weight(i, j);
                }
            }
        }
        Ok(total)
    }
}

/// A bipartition of a (sub)graph together with its crossing weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub side: Vec<bool>,
    pub value: f64,
}

impl Cut {
    /// Evaluate `side` against `g`.
    pub fn evaluate(g: &SignedGraph, side: Vec<bool>) -> Result<Self> {
        let value = g.cut_value(&side)?;
        Ok(Cut { side, value })
    }

    /// True when all bits are equal, i.e. the cut does not split anything.
    pub fn is_trivial(&self) -> bool {
        self.side.iter().all(|&b| b) || self.side.iter().all(|&b| !b)
    }
}

/// Raw partition file shape; validated into [`Partition`] on load.
#[derive(Debug, Deserialize)]
struct RawPartition {
    assignment: Vec<usize>,
    k: usize,
}

/// A coalition structure over `n` vertices.
///
/// Cluster ids are canonical: relabeled by first appearance, so ids used are
/// exactly `{0, .., k-1}` and two structurally identical partitions compare
/// equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Build from arbitrary per-vertex cluster ids; ids are canonicalized by
    /// first appearance.
    pub fn from_assignment(raw: &[usize]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidArgument(
                "partition must cover at least one vertex".into(),
            ));
        }
        let mut relabel: Vec<(usize, usize)> = Vec::new();
        let mut assignment = Vec::with_capacity(raw.len());
        for &id in raw {
            let canon = match relabel.iter().find(|&&(orig, _)| orig == id) {
                Some(&(_, c)) => c,
                None => {
                    let c = relabel.len();
                    relabel.push((id, c));
                    c
                }
            };
            assignment.push(canon);
        }
        let k = relabel.len();
        Ok(Partition { assignment, k })
    }

    /// Build from explicit cluster member lists covering `0..n`.
    pub fn from_clusters(n: usize, clusters: &[Vec<usize>]) -> Result<Self> {
        let mut raw = vec![usize::MAX; n];
        for (id, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidArgument(format!("cluster {id} is empty")));
            }
            for &v in members {
                if v >= n {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} out of range for n={n}"
                    )));
                }
                if raw[v] != usize::MAX {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} assigned to two clusters"
                    )));
                }
                raw[v] = id;
            }
        }
        if let Some(v) = raw.iter().position(|&id| id == usize::MAX) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} not covered by any cluster"
            )));
        }
        Self::from_assignment(&raw)
    }

    /// All vertices in one cluster.
    pub fn single_cluster(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: 1,
        }
    }

    /// Every vertex its own cluster.
    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            k: n.max(1),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Member lists per cluster, in canonical id order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &id) in self.assignment.iter().enumerate() {
            out[id].push(v);
        }
        out
    }
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        let p = Partition::from_assignment(&raw.assignment)?;
        if p.k != raw.k {
            return Err(Error::Parse(format!(
                "partition file declares k={}, assignment implies k={}",
                raw.k, p.k
            )));
        }
        if raw.assignment != p.assignment {
            return Err(Error::Parse(
                "partition file assignment is not in canonical first-appearance order".into(),
            ));
        }
        Ok(p)
    }
}

// --- File formats -----------------------------------------------------------

/// Write a graph as CSV: optional label header, then `n` rows of `n` reals.
pub fn write_graph_csv(path: &Path, g: &SignedGraph) -> Result<()> {
    let mut out = Vec::new();
    if let Some(labels) = g.labels() {
        writeln!(out, "{}", labels.join(",")).expect("write to vec");
    }
    for i in 0..g.n() {
        let row: Vec<String> = (0..g.n()).map(|j| format!("{}", g.weight(i, j))).collect();
        writeln!(out, "{}", row.join(",")).expect("write to vec");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Read a graph written by [`write_graph_csv`].
///
/// The first row is treated as a label header iff any of its fields fails to
/// parse as a real number.
pub fn read_graph_csv(path: &Path) -> Result<SignedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() {
        return Err(Error::Parse(format!("{}: empty graph file", path.display())));
    }
    let first: Vec<&str> = lines[0].split(',').map(str::trim).collect();
    let is_header = first.iter().any(|f| f.parse::<f64>().is_err());
    let (labels, data_lines) = if is_header {
        (
            Some(first.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            &lines[1..],
        )
    } else {
        (None, &lines[..])
    };
    let n = if let Some(ref ls) = labels {
        ls.len()
    } else {
        first.len()
    };
    if data_lines.len() != n {
        return Err(Error::Parse(format!(
            "{}: expected {n} data rows, found {}",
            path.display(),
            data_lines.len()
        )));
    }
    let mut weights = Vec::with_capacity(n * n);
    for (i, line) in data_lines.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != n {
            return Err(Error::Parse(format!(
                "{}: row {i} has {} fields, expected {n}",
                path.display(),
                fields.len()
            )));
        }
        for (j, f) in fields.iter().enumerate() {
            let w: f64 = f.parse().map_err(|_| {
                Error::Parse(format!(
                    "{}: row {i}, column {j}: {f:?} is not a number",
                    path.display()
                ))
            })?;
            weights.push(w);
        }
    }
    SignedGraph::new(n, weights, labels)
}

/// Write a partition as JSON: `{"assignment": [...], "k": ...}`.
pub fn write_partition_json(path: &Path, p: &Partition) -> Result<()> {
    let mut text = serde_json::to_string_pretty(p).expect("partition serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Read and validate a partition file.
pub fn read_partition_json(path: &Path) -> Result<Partition> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!("{}: {e}", path.display()))
    })
}
