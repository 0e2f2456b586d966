//! `cluster`: run one algorithm on one stored graph.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use gcsq_core::baseline::{baseline_cluster, DEFAULT_ALPHA};
use gcsq_core::gcsq::gcsq_cluster;
use gcsq_core::graph::{read_graph_csv, write_partition_json};
use gcsq_core::metrics::penalty;
use gcsq_core::{Error, Partition, SignedGraph, SolverConfig};

use crate::config::Resolver;
use crate::manifest::RunManifest;
use crate::{out_dir, require_file, solver_config, usage, GlobalArgs};

#[derive(Args)]
pub struct ClusterArgs {
    /// Graph CSV to cluster
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Algorithm: gcsq or pam
    #[arg(long)]
    algorithm: Option<String>,
    /// Cluster count for pam (omit to select k by the eigengap heuristic)
    #[arg(long)]
    k: Option<usize>,
    /// Print every split decision of the gcsq recursion
    #[arg(long)]
    explain: bool,
}

/// Wrap solver capacity errors with actionable advice.
fn capacity_hint(err: Error) -> anyhow::Error {
    let capacity = match &err {
        Error::Capacity(_) => true,
        Error::Subgraph { source, .. } => matches!(**source, Error::Capacity(_)),
        _ => false,
    };
    let base = anyhow::Error::new(err);
    if capacity {
        base.context("exact enumeration is capped at 30 vertices; rerun with --solver anneal (or lower --threshold so large subgraphs anneal)")
    } else {
        base
    }
}

/// Run one algorithm; shared with the finance command.
pub fn run_algorithm(
    algorithm: &str,
    g: &SignedGraph,
    cfg: &SolverConfig,
    pam_k: Option<usize>,
) -> Result<(Partition, Option<Vec<gcsq_core::SplitRecord>>)> {
    match algorithm {
        "gcsq" => {
            if pam_k.is_some() {
                return Err(usage("gcsq determines k from the data; --k applies to pam only"));
            }
            let run = gcsq_cluster(g, cfg).map_err(capacity_hint)?;
            Ok((run.partition, Some(run.trace)))
        }
        "pam" => {
            let run = baseline_cluster(g, DEFAULT_ALPHA, pam_k, cfg.seed)
                .map_err(|e| match e {
                    Error::InvalidArgument(_) => usage(e.to_string()),
                    other => anyhow::Error::new(other),
                })?;
            Ok((run.partition, None))
        }
        other => Err(usage(format!("unknown algorithm {other:?} (use gcsq or pam)"))),
    }
}

pub fn run(args: ClusterArgs, global: &GlobalArgs, mut r: Resolver) -> Result<()> {
    let start = Instant::now();
    let graph_path = PathBuf::from(r.required("graph", args.graph.map(|p| p.display().to_string()))?);
    let algorithm = r.value("algorithm", args.algorithm, "gcsq".to_string())?;
    let pam_k = r.optional("k", args.k)?;
    let cfg = solver_config(&mut r, global)?;
    let dir = out_dir(&mut r, global)?;

    require_file(&graph_path)?;
    let mut manifest = RunManifest::new("cluster");
    manifest.seeds.push(cfg.seed);
    manifest.record_input(&graph_path)?;
    if let Some(c) = &global.config {
        manifest.record_input(c)?;
    }

    let load_start = Instant::now();
    let g = read_graph_csv(&graph_path)?;
    manifest.record_timing("load", load_start);

    let cluster_start = Instant::now();
    let (partition, trace) = run_algorithm(&algorithm, &g, &cfg, pam_k)?;
    manifest.record_timing("cluster", cluster_start);

    write_partition_json(&dir.join("partition.json"), &partition)?;
    manifest.record_output("partition.json");
    if let Some(trace) = &trace {
        let mut text = serde_json::to_string_pretty(trace)?;
        text.push('\n');
        std::fs::write(dir.join("trace.json"), text).context("writing trace.json")?;
        manifest.record_output("trace.json");
        if args.explain {
            for rec in trace {
                println!(
                    "split {:?} cut={:+.6} accepted={} solver={} seed={}",
                    rec.vertices, rec.cut_value, rec.accepted, rec.solver_name, rec.seed
                );
            }
        }
    }

    let objective = g.intra_weight(&partition)?;
    let pen = penalty(&g, &partition)?;
    println!("k={} objective={} penalty={}", partition.k(), objective, pen);

    manifest.config = r.into_resolved();
    manifest.record_timing("total", start);
    manifest.write(&dir)?;
    Ok(())
}
