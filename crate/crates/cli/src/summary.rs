//! `summary`: aggregate a benchmark table into per-cell statistics.
//!
//! Reads the long-format CSV written by `bench` and prints one row per
//! (n, k, algorithm) cell with the mean and population variance of ARI and
//! penalty across seeds.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;

use crate::config::Resolver;
use crate::{require_file, usage};

#[derive(Args)]
pub struct SummaryArgs {
    /// Benchmark results.csv to aggregate
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Default)]
struct Cell {
    ari: Vec<f64>,
    penalty: Vec<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

pub fn run(args: SummaryArgs, mut r: Resolver) -> Result<()> {
    let input = PathBuf::from(r.required("input", args.input.map(|p| p.display().to_string()))?);
    require_file(&input)?;

    let mut reader = csv::Reader::from_path(&input)
        .with_context(|| format!("reading {}", input.display()))?;
    let headers = reader.headers()?.clone();
    let index = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| usage(format!("{} has no {name:?} column", input.display())))
    };
    let (ci_n, ci_k, ci_algo) = (index("n")?, index("k")?, index("algorithm")?);
    let (ci_ari, ci_pen) = (index("ari")?, index("penalty")?);

    let mut cells: BTreeMap<(usize, usize, String), Cell> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let key = (
            field(ci_n).parse::<usize>().context("parsing n")?,
            field(ci_k).parse::<usize>().context("parsing k")?,
            field(ci_algo),
        );
        let cell = cells.entry(key).or_default();
        cell.ari.push(field(ci_ari).parse().context("parsing ari")?);
        cell.penalty.push(field(ci_pen).parse().context("parsing penalty")?);
    }

    println!("n,k,algorithm,runs,ari_mean,ari_var,penalty_mean,penalty_var");
    for ((n, k, algorithm), cell) in &cells {
        println!(
            "{n},{k},{algorithm},{},{},{},{},{}",
            cell.ari.len(),
            mean(&cell.ari),
            variance(&cell.ari),
            mean(&cell.penalty),
            variance(&cell.penalty)
        );
    }
    Ok(())
}
