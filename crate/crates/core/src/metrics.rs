//! Clustering quality metrics: Adjusted Rand Index against a reference
//! partition, and the structural-balance penalty for label-free evaluation.

use crate::error::{Error, Result};
use crate::graph::{Partition, SignedGraph};

/// Pair-count cross-tabulation of two partitions over the same vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// `counts[i][j]` = vertices in cluster `i` of the first partition and
    /// cluster `j` of the second.
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn new(a: &Partition, b: &Partition) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::InvalidArgument(format!(
                "partitions cover {} and {} vertices",
                a.n(),
                b.n()
            )));
        }
        let mut counts = vec![vec![0u64; b.k()]; a.k()];
        for (&i, &j) in a.assignment().iter().zip(b.assignment()) {
            counts[i][j] += 1;
        }
        let row_sums: Vec<u64> = counts.iter().map(|row| row.iter().sum()).collect();
        let mut col_sums = vec![0u64; b.k()];
        for row in &counts {
            for (j, &c) in row.iter().enumerate() {
                col_sums[j] += c;
            }
        }
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            n: a.n() as u64,
        })
    }
}

/// `m` choose 2, exact.
fn choose2(m: u64) -> u64 {
    m * (m.wrapping_sub(1)) / 2
}

/// Adjusted Rand Index between two partitions of the same `n >= 2` vertices.
///
/// Pair-count sums are accumulated in exact integer arithmetic and converted
/// to floating point only for the final expected-index correction. When the
/// correction denominator vanishes (both partitions all-singletons, or both
/// a single cluster), the result is 1.0 for equal partitions and 0.0
/// otherwise, following common statistics tooling.
pub fn ari(truth: &Partition, pred: &Partition) -> Result<f64> {
    if truth.n() < 2 {
        return Err(Error::InvalidArgument(format!(
            "ARI needs n >= 2, got {}",
            truth.n()
        )));
    }
    let table = ContingencyTable::new(truth, pred)?;
    let index: u64 = table
        .counts
        .iter()
        .flatten()
        .map(|&c| choose2(c))
        .sum();
    let sum_a: u64 = table.row_sums.iter().map(|&c| choose2(c)).sum();
    let sum_b: u64 = table.col_sums.iter().map(|&c| choose2(c)).sum();
    let pairs = choose2(table.n);
    let expected = sum_a as f64 * sum_b as f64 / pairs as f64;
    let max_index = 0.5 * (sum_a + sum_b) as f64;
    let denom = max_index - expected;
    if denom == 0.0 {
        return Ok(if truth == pred { 1.0 } else { 0.0 });
    }
    Ok((index as f64 - expected) / denom)
}

/// Structural-balance penalty: negative weight kept inside clusters plus
/// positive weight crossing them.
///
/// Zero means every intra-cluster edge is non-negative and every
/// inter-cluster edge non-positive. Zero-weight pairs contribute to neither
/// term.
pub fn penalty(g: &SignedGraph, p: &Partition) -> Result<f64> {
    if p.n() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "partition over {} vertices, graph has {}",
            p.n(),
            g.n()
        )));
    }
    let assignment = p.assignment();
    let mut total = 0.0;
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            let w = g.weight(i, j);
            if assignment[i] == assignment[j] {
                if w < 0.0 {
                    total += -w;
                }
            } else if w > 0.0 {
                total += w;
            }
        }
    }
    Ok(total)
}
