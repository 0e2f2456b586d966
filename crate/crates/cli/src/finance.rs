//! `finance`: cluster rolling correlation windows of a price panel.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use gcsq_core::finance::{load_prices, rolling_graphs, AlignmentPolicy};
use gcsq_core::graph::write_graph_csv;
use gcsq_core::metrics::penalty;
use gcsq_core::Error;

use crate::cluster::run_algorithm;
use crate::config::Resolver;
use crate::manifest::RunManifest;
use crate::{out_dir, require_file, usage, GlobalArgs};

#[derive(Args)]
pub struct FinanceArgs {
    /// Price panel CSV (timestamp column, one column per asset)
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Price rows per window (default: the whole panel, one window)
    #[arg(long)]
    window: Option<usize>,
    /// Rows between window starts (default: the window size)
    #[arg(long)]
    step: Option<usize>,
    /// Missing-price policy: drop or ffill
    #[arg(long)]
    policy: Option<String>,
    /// Algorithms to run per window, comma separated (gcsq, pam)
    #[arg(long)]
    algorithms: Option<String>,
    /// Cluster count for pam (omit to select k by the eigengap heuristic)
    #[arg(long)]
    k: Option<usize>,
}

/// Window ids are timestamps; `:` is unsafe in file names.
fn file_stem(window_id: &str) -> String {
    window_id.replace(':', "-")
}

pub fn run(args: FinanceArgs, global: &GlobalArgs, mut r: Resolver) -> Result<()> {
    let start = Instant::now();
    let prices_path = PathBuf::from(r.required("prices", args.prices.map(|p| p.display().to_string()))?);
    let policy_name = r.value("policy", args.policy, "drop".to_string())?;
    let policy = match policy_name.as_str() {
        "drop" => AlignmentPolicy::DropRow,
        "ffill" => AlignmentPolicy::ForwardFill,
        other => return Err(usage(format!("unknown policy {other:?} (use drop or ffill)"))),
    };
    let algorithms = r.name_list("algorithms", args.algorithms, "gcsq,pam")?;
    let pam_k = r.optional("k", args.k)?;
    let cfg = crate::solver_config(&mut r, global)?;
    let dir = out_dir(&mut r, global)?;

    require_file(&prices_path)?;
    let mut manifest = RunManifest::new("finance");
    manifest.seeds.push(cfg.seed);
    manifest.record_input(&prices_path)?;
    if let Some(c) = &global.config {
        manifest.record_input(c)?;
    }

    let ingest_start = Instant::now();
    let panel = load_prices(&prices_path, policy)?;
    let window = r.value("window", args.window, panel.rows())?;
    let step = r.value("step", args.step, window)?;
    let windows = rolling_graphs(&panel, window, step).map_err(|e| match e {
        Error::InvalidArgument(_) => usage(e.to_string()),
        other => anyhow::Error::new(other),
    })?;
    manifest.record_timing("ingest", ingest_start);

    let cluster_start = Instant::now();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for wg in &windows {
        if !wg.dropped.is_empty() {
            eprintln!("window {} dropped zero-variance asset(s): {}", wg.id, wg.dropped.join(", "));
        }
        let graph_name = format!("graph_{}.csv", file_stem(&wg.id));
        write_graph_csv(&dir.join(&graph_name), &wg.graph)?;
        manifest.record_output(&graph_name);
        for algorithm in &algorithms {
            let k = (algorithm == "pam").then_some(pam_k).flatten();
            match run_algorithm(algorithm, &wg.graph, &cfg, k)
                .and_then(|(p, _)| Ok((penalty(&wg.graph, &p)?, p.k())))
            {
                Ok((pen, k_found)) => rows.push((wg.id.clone(), algorithm.clone(), pen, k_found)),
                Err(e) => failures.push(format!("window={} algorithm={algorithm}: {e:#}", wg.id)),
            }
        }
    }
    manifest.record_timing("cluster", cluster_start);

    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut table = String::from("window,algorithm,penalty,k_found\n");
    for (window_id, algorithm, pen, k_found) in &rows {
        table.push_str(&format!("{window_id},{algorithm},{pen},{k_found}\n"));
    }
    fs::write(dir.join("results.csv"), table).context("writing results.csv")?;
    manifest.record_output("results.csv");

    for failure in &failures {
        eprintln!("failed: {failure}");
    }
    manifest.failures = failures;
    manifest.config = r.into_resolved();
    manifest.record_timing("total", start);
    manifest.write(&dir)?;
    println!(
        "wrote {} row(s) over {} window(s) to {}",
        rows.len(),
        windows.len(),
        dir.join("results.csv").display()
    );
    Ok(())
}
