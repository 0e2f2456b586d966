//! `score`: evaluate a stored partition against its graph.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use gcsq_core::graph::{read_graph_csv, read_partition_json};
use gcsq_core::metrics::{ari, penalty};

use crate::config::Resolver;
use crate::{require_file, usage};

#[derive(Args)]
pub struct ScoreArgs {
    /// Graph CSV the partition refers to
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Partition JSON to score
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Ground-truth partition JSON (enables the ari field)
    #[arg(long)]
    truth: Option<PathBuf>,
}

pub fn run(args: ScoreArgs, mut r: Resolver) -> Result<()> {
    let graph_path = PathBuf::from(r.required("graph", args.graph.map(|p| p.display().to_string()))?);
    let partition_path =
        PathBuf::from(r.required("partition", args.partition.map(|p| p.display().to_string()))?);
    let truth_path = r
        .optional("truth", args.truth.map(|p| p.display().to_string()))?
        .map(PathBuf::from);

    require_file(&graph_path)?;
    require_file(&partition_path)?;
    let g = read_graph_csv(&graph_path)?;
    let p = read_partition_json(&partition_path)?;
    if p.n() != g.n() {
        return Err(usage(format!(
            "partition covers {} vertices but the graph has {}",
            p.n(),
            g.n()
        )));
    }

    let ari_value = match truth_path {
        Some(path) => {
            require_file(&path)?;
            let truth = read_partition_json(&path)?;
            if truth.n() != g.n() {
                return Err(usage(format!(
                    "truth covers {} vertices but the graph has {}",
                    truth.n(),
                    g.n()
                )));
            }
            Some(ari(&truth, &p)?)
        }
        None => None,
    };

    let report = serde_json::json!({
        "ari": ari_value,
        "penalty": penalty(&g, &p)?,
        "k": p.k(),
    });
    println!("{report}");
    Ok(())
}
