//! Classical comparison pipeline: correlation-to-distance transform,
//! PAM k-medoids, and eigengap k estimation on the signed Laplacian.
//!
//! Unlike the recursive min-cut algorithm, this pipeline needs k as an
//! input; when the caller does not supply it, the eigengap heuristic picks
//! it from the spectrum of `L = D - W` with absolute-value degrees.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Partition, SignedGraph};

/// Classical mapping `d = sqrt(2(1 - rho))`.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Default eigengap search ceiling for [`baseline_cluster`].
pub const DEFAULT_K_MAX: usize = 15;

/// PAM terminates long before this many swaps on sane inputs; exceeding it
/// indicates a numerical cycle and aborts the run.
const MAX_SWAPS: usize = 10_000;

/// Strict improvement threshold for a swap.
const SWAP_TOL: f64 = 1e-12;

/// Symmetric non-negative distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    /// Transform parameter; entries are bounded by `sqrt(2 * alpha)`.
    alpha: f64,
}

impl DistanceMatrix {
    pub fn new(n: usize, values: Vec<f64>, alpha: f64) -> Result<Self> {
        if n == 0 || values.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "distance matrix has {} entries, expected {}",
                values.len(),
                n * n
            )));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        let bound = (2.0 * alpha).sqrt() + 1e-9;
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "distance diagonal ({i},{i}) is {}",
                    values[i * n + i]
                )));
            }
            for j in 0..i {
                let d = values[i * n + j];
                if d != values[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "distances not symmetric at ({i},{j})"
                    )));
                }
                if !(d >= 0.0 && d <= bound) {
                    return Err(Error::InvalidArgument(format!(
                        "distance ({i},{j}) = {d} outside [0, sqrt(2*alpha)]"
                    )));
                }
            }
        }
        Ok(DistanceMatrix { n, values, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `d_ij = sqrt(alpha * (1 - w_ij))`: correlation 1 maps to distance 0,
/// anti-correlation to the maximum distance.
pub fn correlation_to_distance(g: &SignedGraph, alpha: f64) -> Result<DistanceMatrix> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let n = g.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                // Weights may exceed 1 by round-off tolerance; clamp the
                // radicand at zero.
                values[i * n + j] = (alpha * (1.0 - g.weight(i, j))).max(0.0).sqrt();
            }
        }
    }
    DistanceMatrix::new(n, values, alpha)
}

/// Diagnostics from one PAM run.
#[derive(Debug, Clone, PartialEq)]
pub struct PamStats {
    /// Total assignment cost after BUILD.
    pub build_cost: f64,
    /// Total assignment cost at termination.
    pub final_cost: f64,
    /// Accepted swaps.
    pub swaps: usize,
}

/// k-medoids via PAM; see [`pam_cluster_detailed`] for run diagnostics.
///
/// Deterministic: BUILD seeds greedily (ties to the lowest index) and SWAP
/// applies best-improvement exchanges until none helps. The seed parameter
/// is accepted for interface stability but the algorithm draws nothing.
pub fn pam_cluster(d: &DistanceMatrix, k: usize, seed: u64) -> Result<Partition> {
    Ok(pam_cluster_detailed(d, k, seed)?.0)
}

pub fn pam_cluster_detailed(
    d: &DistanceMatrix,
    k: usize,
    seed: u64,
) -> Result<(Partition, PamStats)> {
    let _ = seed;
    let n = d.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n, got k={k} n={n}"
        )));
    }
    // BUILD: start from the point minimizing total distance, then greedily
    // add the point that lowers the total assignment cost the most.
    let mut medoids: Vec<usize> = Vec::with_capacity(k);
    let first = (0..n)
        .min_by(|&a, &b| {
            let ca: f64 = (0..n).map(|j| d.distance(a, j)).sum();
            let cb: f64 = (0..n).map(|j| d.distance(b, j)).sum();
            ca.partial_cmp(&cb).unwrap().then(a.cmp(&b))
        })
        .expect("n >= 1");
    medoids.push(first);
    let mut nearest: Vec<f64> = (0..n).map(|j| d.distance(first, j)).collect();
    while medoids.len() < k {
        let mut best: Option<(f64, usize)> = None;
        for c in 0..n {
            if medoids.contains(&c) {
                continue;
            }
            let gain: f64 = (0..n)
                .map(|j| (nearest[j] - d.distance(c, j)).max(0.0))
                .sum();
            let better = match best {
                None => true,
                Some((bg, _)) => gain > bg,
            };
            if better {
                best = Some((gain, c));
            }
        }
        let (_, chosen) = best.expect("k <= n leaves a candidate");
        medoids.push(chosen);
        for j in 0..n {
            nearest[j] = nearest[j].min(d.distance(chosen, j));
        }
    }
    let build_cost: f64 = nearest.iter().sum();

    // SWAP: per-point nearest and second-nearest medoid caches make each
    // candidate exchange O(n) to score.
    let mut nearest_id = vec![0usize; n];
    let mut second = vec![0.0f64; n];
    let recompute =
        |medoids: &[usize], nearest: &mut [f64], nearest_id: &mut [usize], second: &mut [f64]| {
            for j in 0..nearest.len() {
                let mut d1 = f64::INFINITY;
                let mut id1 = usize::MAX;
                let mut d2 = f64::INFINITY;
                for &m in medoids.iter() {
                    let dj = d.distance(m, j);
                    if dj < d1 {
                        d2 = d1;
                        d1 = dj;
                        id1 = m;
                    } else if dj < d2 {
                        d2 = dj;
                    }
                }
                nearest[j] = d1;
                nearest_id[j] = id1;
                second[j] = d2;
            }
        };
    recompute(&medoids, &mut nearest, &mut nearest_id, &mut second);
    let mut cost: f64 = nearest.iter().sum();
    let mut swaps = 0usize;
    if k < n {
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for (mi, &m) in medoids.iter().enumerate() {
                for h in 0..n {
                    if medoids.contains(&h) {
                        continue;
                    }
                    let mut delta = 0.0;
                    for j in 0..n {
                        let dh = d.distance(h, j);
                        if nearest_id[j] == m {
                            delta += dh.min(second[j]) - nearest[j];
                        } else if dh < nearest[j] {
                            delta += dh - nearest[j];
                        }
                    }
                    let better = match best {
                        None => true,
                        Some((bd, _, _)) => delta < bd,
                    };
                    if better {
                        best = Some((delta, mi, h));
                    }
                }
            }
            let (delta, mi, h) = best.expect("k < n leaves a candidate");
            if delta >= -SWAP_TOL {
                break;
            }
            medoids[mi] = h;
            recompute(&medoids, &mut nearest, &mut nearest_id, &mut second);
            let new_cost: f64 = nearest.iter().sum();
            debug_assert!(new_cost <= cost + 1e-9, "swap raised cost");
            cost = new_cost;
            swaps += 1;
            if swaps >= MAX_SWAPS {
                return Err(Error::Numerical(format!(
                    "PAM exceeded {MAX_SWAPS} swaps without converging"
                )));
            }
        }
    }
    let assignment: Vec<usize> = (0..n)
        .map(|j| {
            // Ties go to the medoid with the lowest vertex index.
            let mut ids: Vec<usize> = medoids.clone();
            ids.sort_unstable();
            ids.into_iter()
                .min_by(|&a, &b| {
                    d.distance(a, j)
                        .partial_cmp(&d.distance(b, j))
                        .unwrap()
                        .then(a.cmp(&b))
                })
                .expect("medoids non-empty")
        })
        .collect();
    let partition = Partition::from_assignment(&assignment)?;
    Ok((
        partition,
        PamStats {
            build_cost,
            final_cost: cost,
            swaps,
        },
    ))
}

/// Ascending eigenvalues of the signed Laplacian `L = D - W`,
/// `D_ii = sum_j |w_ij|`.
pub fn signed_laplacian_spectrum(g: &SignedGraph) -> Result<Vec<f64>> {
    let n = g.n();
    let l = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            (0..n).map(|m| g.weight(i, m).abs()).sum()
        } else {
            -g.weight(i, j)
        }
    });
    let eigen = nalgebra::SymmetricEigen::try_new(l, 1e-12, 10_000).ok_or_else(|| {
        Error::Numerical(format!(
            "eigensolver did not converge on the {n}x{n} signed Laplacian \
             (eps 1e-12, 10000 iterations)"
        ))
    })?;
    let mut eigs: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eigs)
}

/// Cluster-count estimate: the k in `{2..k_max}` whose eigenvalue opens the
/// widest gap over its predecessor.
///
/// A graph that splits cleanly into k groups shows k-1 small signed-
/// Laplacian eigenvalues with the bulk far above, so the widest gap
/// `lambda_k - lambda_{k-1}` (1-based ascending) sits exactly at the planted
/// count. Ties resolve to the smallest k.
pub fn eigengap_k(g: &SignedGraph, k_max: usize) -> Result<usize> {
    let n = g.n();
    if k_max < 2 || k_max + 1 > n {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k_max <= n-1, got k_max={k_max} n={n}"
        )));
    }
    let eigs = signed_laplacian_spectrum(g)?;
    let mut best_k = 2;
    let mut best_gap = f64::NEG_INFINITY;
    for k in 2..=k_max {
        let gap = eigs[k - 1] - eigs[k - 2];
        if gap > best_gap {
            best_gap = gap;
            best_k = k;
        }
    }
    Ok(best_k)
}

/// Where the cluster count for a baseline run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSource {
    Given,
    Eigengap,
}

/// One classical-pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRun {
    pub partition: Partition,
    pub k: usize,
    pub k_source: KSource,
}

/// Full classical pipeline: distance transform, k from the caller or the
/// eigengap heuristic, then PAM.
pub fn baseline_cluster(
    g: &SignedGraph,
    alpha: f64,
    k: Option<usize>,
    seed: u64,
) -> Result<BaselineRun> {
    let (k, k_source) = match k {
        Some(k) => (k, KSource::Given),
        None => {
            let k_max = DEFAULT_K_MAX.min(g.n().saturating_sub(1));
            (eigengap_k(g, k_max)?, KSource::Eigengap)
        }
    };
    let d = correlation_to_distance(g, alpha)?;
    let partition = pam_cluster(&d, k, seed)?;
    Ok(BaselineRun {
        partition,
        k,
        k_source,
    })
}
