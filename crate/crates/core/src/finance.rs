//! Market-data ingestion: price panels, log returns, Pearson correlation
//! graphs, and rolling per-window graph extraction.
//!
//! The CSV layout is `timestamp,<ticker>,...` with ISO-8601 timestamps and
//! strictly positive prices. Missing cells are handled by an alignment
//! policy at load time; everything downstream requires a complete panel.

use chrono::{NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// Timestamp wire format, also used to name per-window outputs.
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// Variance at or below this fraction of the raw second moment counts as
/// zero: covers both exactly constant series and constant series whose mean
/// subtraction leaves only rounding residue.
const VARIANCE_TOL: f64 = 1e-24;

/// How rows with missing cells are aligned at load time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlignmentPolicy {
    /// Discard any row with a missing cell.
    #[default]
    DropRow,
    /// Fill a missing cell with the asset's last seen price; rows before an
    /// asset's first observation are discarded.
    ForwardFill,
}

/// Aligned price history: rows are assets, columns are timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel {
    timestamps: Vec<NaiveDateTime>,
    tickers: Vec<String>,
    prices: Vec<Vec<f64>>,
}

impl PricePanel {
    pub fn new(
        timestamps: Vec<NaiveDateTime>,
        tickers: Vec<String>,
        prices: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if timestamps.len() < 2 {
            return Err(Error::Ingestion(format!(
                "price panel needs at least 2 rows, got {}",
                timestamps.len()
            )));
        }
        for w in timestamps.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Ingestion(format!(
                    "timestamps not strictly increasing at {}",
                    w[1].format(TIMESTAMP_FORMAT)
                )));
            }
        }
        if tickers.is_empty() {
            return Err(Error::Ingestion("price panel has no tickers".into()));
        }
        for (i, t) in tickers.iter().enumerate() {
            if tickers[..i].contains(t) {
                return Err(Error::Ingestion(format!("duplicate ticker {t:?}")));
            }
        }
        if prices.len() != tickers.len() {
            return Err(Error::Ingestion(format!(
                "{} price rows for {} tickers",
                prices.len(),
                tickers.len()
            )));
        }
        for (row, ticker) in prices.iter().zip(&tickers) {
            if row.len() != timestamps.len() {
                return Err(Error::Ingestion(format!(
                    "{ticker}: {} prices for {} timestamps",
                    row.len(),
                    timestamps.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
                return Err(Error::Ingestion(format!(
                    "{ticker}: non-positive price {p}"
                )));
            }
        }
        Ok(PricePanel {
            timestamps,
            tickers,
            prices,
        })
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    /// Price series for asset `i`.
    pub fn prices(&self, i: usize) -> &[f64] {
        &self.prices[i]
    }

    pub fn rows(&self) -> usize {
        self.timestamps.len()
    }
}

/// Log-return history: rows are assets, one column per price step.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsPanel {
    tickers: Vec<String>,
    returns: Vec<Vec<f64>>,
    /// End timestamp of each return interval, when derived from prices.
    timestamps: Option<Vec<NaiveDateTime>>,
    nonzero_variance: Vec<bool>,
}

impl ReturnsPanel {
    /// Directly wrap precomputed return rows (synthetic data, tests).
    pub fn new(tickers: Vec<String>, returns: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_timestamps(tickers, returns, None)
    }

    fn with_timestamps(
        tickers: Vec<String>,
        returns: Vec<Vec<f64>>,
        timestamps: Option<Vec<NaiveDateTime>>,
    ) -> Result<Self> {
        if tickers.is_empty() || returns.len() != tickers.len() {
            return Err(Error::InvalidArgument(format!(
                "{} return rows for {} tickers",
                returns.len(),
                tickers.len()
            )));
        }
        let cols = returns[0].len();
        if returns.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged return rows".into()));
        }
        if let Some(ts) = &timestamps {
            if ts.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "{} timestamps for {cols} return columns",
                    ts.len()
                )));
            }
        }
        let nonzero_variance = returns.iter().map(|r| !is_zero_variance(r)).collect();
        Ok(ReturnsPanel {
            tickers,
            returns,
            timestamps,
            nonzero_variance,
        })
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn returns(&self, i: usize) -> &[f64] {
        &self.returns[i]
    }

    pub fn observations(&self) -> usize {
        self.returns[0].len()
    }

    pub fn timestamps(&self) -> Option<&[NaiveDateTime]> {
        self.timestamps.as_deref()
    }

    /// Per-asset flag: false when the return series is (numerically)
    /// constant, making its correlations undefined.
    pub fn nonzero_variance(&self) -> &[bool] {
        &self.nonzero_variance
    }

    /// Copy of the panel restricted to the given asset indices.
    fn select(&self, assets: &[usize]) -> Result<ReturnsPanel> {
        let tickers = assets.iter().map(|&i| self.tickers[i].clone()).collect();
        let returns = assets.iter().map(|&i| self.returns[i].clone()).collect();
        ReturnsPanel::with_timestamps(tickers, returns, self.timestamps.clone())
    }
}

fn is_zero_variance(xs: &[f64]) -> bool {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    let raw: f64 = xs.iter().map(|x| x * x).sum();
    ss <= VARIANCE_TOL * raw
}

fn parse_timestamp(s: &str) -> Result<NaiveDateTime> {
    for fmt in [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(ts) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(ts);
        }
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight exists"));
    }
    Err(Error::Ingestion(format!("unparseable timestamp {s:?}")))
}

/// Load a price CSV and align missing cells per `policy`.
pub fn load_prices(path: &std::path::Path, policy: AlignmentPolicy) -> Result<PricePanel> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            ),
            _ => Error::Ingestion(format!("{}: {e}", path.display())),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() < 2 || !headers[0].eq_ignore_ascii_case("timestamp") {
        return Err(Error::Ingestion(format!(
            "{}: header must be timestamp,<ticker>,... got {:?}",
            path.display(),
            headers.iter().collect::<Vec<_>>()
        )));
    }
    let tickers: Vec<String> = headers.iter().skip(1).map(|h| h.to_string()).collect();
    // Parsed rows: timestamp plus per-asset optional price.
    let mut rows: Vec<(NaiveDateTime, Vec<Option<f64>>)> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Ingestion(format!("{}: {e}", path.display())))?;
        if record.len() != tickers.len() + 1 {
            return Err(Error::Ingestion(format!(
                "{}: row {} has {} fields, expected {}",
                path.display(),
                idx + 1,
                record.len(),
                tickers.len() + 1
            )));
        }
        let ts = parse_timestamp(&record[0])?;
        let mut cells = Vec::with_capacity(tickers.len());
        for (t, field) in tickers.iter().zip(record.iter().skip(1)) {
            if field.is_empty() {
                cells.push(None);
                continue;
            }
            let p: f64 = field.parse().map_err(|_| {
                Error::Ingestion(format!(
                    "{}: row {} ({}), ticker {t}: {field:?} is not a number",
                    path.display(),
                    idx + 1,
                    ts.format(TIMESTAMP_FORMAT)
                ))
            })?;
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Ingestion(format!(
                    "{}: row {} ({}), ticker {t}: price {p} must be positive",
                    path.display(),
                    idx + 1,
                    ts.format(TIMESTAMP_FORMAT)
                )));
            }
            cells.push(Some(p));
        }
        rows.push((ts, cells));
    }
    let mut timestamps = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    match policy {
        AlignmentPolicy::DropRow => {
            for (ts, cells) in rows {
                if cells.iter().all(Option::is_some) {
                    timestamps.push(ts);
                    columns.push(cells.into_iter().map(|c| c.unwrap()).collect());
                }
            }
        }
        AlignmentPolicy::ForwardFill => {
            let mut last: Vec<Option<f64>> = vec![None; tickers.len()];
            for (ts, cells) in rows {
                for (slot, cell) in last.iter_mut().zip(&cells) {
                    if cell.is_some() {
                        *slot = *cell;
                    }
                }
                if last.iter().all(Option::is_some) {
                    timestamps.push(ts);
                    columns.push(last.iter().map(|c| c.unwrap()).collect());
                }
            }
        }
    }
    if timestamps.len() < 2 {
        return Err(Error::Ingestion(format!(
            "{}: fewer than 2 usable rows after alignment",
            path.display()
        )));
    }
    // Transpose to asset-major rows.
    let prices: Vec<Vec<f64>> = (0..tickers.len())
        .map(|a| columns.iter().map(|row| row[a]).collect())
        .collect();
    PricePanel::new(timestamps, tickers, prices)
}

/// Per-step log returns: `r_i(t) = ln(p_i(t+1) / p_i(t))`.
pub fn log_returns(p: &PricePanel) -> Result<ReturnsPanel> {
    let tickers = p.tickers().to_vec();
    let returns: Vec<Vec<f64>> = (0..tickers.len())
        .map(|a| {
            p.prices(a)
                .windows(2)
                .map(|w| (w[1] / w[0]).ln())
                .collect()
        })
        .collect();
    let timestamps = Some(p.timestamps()[1..].to_vec());
    ReturnsPanel::with_timestamps(tickers, returns, timestamps)
}

/// Pairwise Pearson correlations as a signed graph over the assets.
///
/// Sample statistics use (n-1) normalization; the factor cancels in the
/// correlation but fixes a convention for the intermediates. Off-diagonals
/// are clamped to [-1, 1] against round-off, and the diagonal is 0 because
/// self-correlation is not an edge.
pub fn pearson_matrix(r: &ReturnsPanel) -> Result<SignedGraph> {
    if r.observations() < 2 {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least 2 observations, got {}",
            r.observations()
        )));
    }
    if let Some(i) = r.nonzero_variance().iter().position(|&ok| !ok) {
        return Err(Error::Numerical(format!(
            "asset {} has zero return variance; its correlations are undefined",
            r.tickers()[i]
        )));
    }
    let n = r.tickers().len();
    let cols = r.observations() as f64;
    let means: Vec<f64> = (0..n)
        .map(|i| r.returns(i).iter().sum::<f64>() / cols)
        .collect();
    let centered: Vec<Vec<f64>> = (0..n)
        .map(|i| r.returns(i).iter().map(|x| x - means[i]).collect())
        .collect();
    let norms: Vec<f64> = centered
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let mut weights = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dot: f64 = centered[i]
                .iter()
                .zip(&centered[j])
                .map(|(a, b)| a * b)
                .sum();
            let rho = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            weights[i * n + j] = rho;
            weights[j * n + i] = rho;
        }
    }
    SignedGraph::new(n, weights, Some(r.tickers().to_vec()))
}

/// One rolling window's correlation graph.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowGraph {
    /// Window start timestamp in the wire format; names emitted files.
    pub id: String,
    pub graph: SignedGraph,
    /// Tickers excluded from this window for zero return variance.
    pub dropped: Vec<String>,
}

/// Correlation graphs over rolling price windows.
///
/// Each window covers `window` consecutive price rows (so `window - 1`
/// returns) and consecutive windows start `step` rows apart; incomplete
/// trailing windows are not emitted. Zero-variance assets are dropped per
/// window and reported in the result.
pub fn rolling_graphs(p: &PricePanel, window: usize, step: usize) -> Result<Vec<WindowGraph>> {
    if window < 2 {
        return Err(Error::InvalidArgument(format!(
            "window must cover at least 2 rows, got {window}"
        )));
    }
    if step == 0 {
        return Err(Error::InvalidArgument("step must be >= 1".into()));
    }
    if window > p.rows() {
        return Err(Error::InvalidArgument(format!(
            "window {window} exceeds panel length {}",
            p.rows()
        )));
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start + window <= p.rows() {
        let id = p.timestamps()[start].format(TIMESTAMP_FORMAT).to_string();
        let slice = PricePanel::new(
            p.timestamps()[start..start + window].to_vec(),
            p.tickers().to_vec(),
            (0..p.tickers().len())
                .map(|a| p.prices(a)[start..start + window].to_vec())
                .collect(),
        )?;
        let returns = log_returns(&slice)?;
        let keep: Vec<usize> = (0..returns.tickers().len())
            .filter(|&i| returns.nonzero_variance()[i])
            .collect();
        let dropped: Vec<String> = (0..returns.tickers().len())
            .filter(|&i| !returns.nonzero_variance()[i])
            .map(|i| returns.tickers()[i].clone())
            .collect();
        if keep.len() < 2 {
            return Err(Error::Numerical(format!(
                "window {id}: fewer than 2 assets with nonzero return variance"
            )));
        }
        let graph = pearson_matrix(&returns.select(&keep)?)?;
        out.push(WindowGraph { id, graph, dropped });
        start += step;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn write_csv(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        std::fs::write(&path, content).unwrap();
        path
    }

    fn ts(s: &str) -> NaiveDateTime {
        parse_timestamp(s).unwrap()
    }

    #[test]
    fn load_complete_file_roundtrips() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA,BBB\n2025-01-06T09:30:00,100,50\n2025-01-06T10:30:00,101,49\n",
        );
        let panel = load_prices(&path, AlignmentPolicy::DropRow).unwrap();
        assert_eq!(panel.tickers(), ["AAA", "BBB"]);
        assert_eq!(panel.rows(), 2);
        assert_eq!(panel.prices(0), [100.0, 101.0]);
        assert_eq!(panel.prices(1), [50.0, 49.0]);
    }

    #[test]
    fn drop_row_policy_removes_incomplete_timestamps() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA,BBB\n\
             2025-01-06T09:30:00,100,50\n\
             2025-01-06T10:30:00,,49\n\
             2025-01-06T11:30:00,102,48\n",
        );
        let panel = load_prices(&path, AlignmentPolicy::DropRow).unwrap();
        assert_eq!(panel.rows(), 2);
        assert_eq!(panel.prices(1), [50.0, 48.0]);
    }

    #[test]
    fn forward_fill_policy_carries_last_price() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA,BBB\n\
             2025-01-06T09:30:00,100,50\n\
             2025-01-06T10:30:00,,49\n\
             2025-01-06T11:30:00,102,48\n",
        );
        let panel = load_prices(&path, AlignmentPolicy::ForwardFill).unwrap();
        assert_eq!(panel.rows(), 3);
        assert_eq!(panel.prices(0), [100.0, 100.0, 102.0]);
    }

    #[test]
    fn forward_fill_drops_leading_incomplete_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA,BBB\n\
             2025-01-06T09:30:00,,50\n\
             2025-01-06T10:30:00,101,49\n\
             2025-01-06T11:30:00,102,48\n",
        );
        let panel = load_prices(&path, AlignmentPolicy::ForwardFill).unwrap();
        assert_eq!(panel.rows(), 2);
        assert_eq!(panel.prices(0), [101.0, 102.0]);
    }

    #[test]
    fn zero_price_error_names_row_and_ticker() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA,BBB\n\
             2025-01-06T09:30:00,100,50\n\
             2025-01-06T10:30:00,0,49\n",
        );
        let err = load_prices(&path, AlignmentPolicy::DropRow).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("AAA"), "message: {msg}");
        assert!(msg.contains("2025-01-06T10:30:00"), "message: {msg}");
    }

    #[test]
    fn too_few_rows_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA\n2025-01-06T09:30:00,100\n",
        );
        assert!(matches!(
            load_prices(&path, AlignmentPolicy::DropRow).unwrap_err(),
            Error::Ingestion(_)
        ));
    }

    #[test]
    fn unsorted_timestamps_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "p.csv",
            "timestamp,AAA\n\
             2025-01-06T10:30:00,100\n\
             2025-01-06T09:30:00,101\n",
        );
        assert!(load_prices(&path, AlignmentPolicy::DropRow).is_err());
    }

    #[test]
    fn log_returns_match_hand_values() {
        let panel = PricePanel::new(
            vec![ts("2025-01-06T09:30:00"), ts("2025-01-06T10:30:00")],
            vec!["AAA".into()],
            vec![vec![100.0, 110.0]],
        )
        .unwrap();
        let r = log_returns(&panel).unwrap();
        assert_eq!(r.observations(), 1);
        assert!((r.returns(0)[0] - 1.1f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_returns_constant_series_is_zero() {
        let panel = PricePanel::new(
            vec![
                ts("2025-01-06T09:30:00"),
                ts("2025-01-06T10:30:00"),
                ts("2025-01-06T11:30:00"),
            ],
            vec!["AAA".into()],
            vec![vec![42.0, 42.0, 42.0]],
        )
        .unwrap();
        let r = log_returns(&panel).unwrap();
        assert_eq!(r.returns(0), [0.0, 0.0]);
        assert_eq!(r.nonzero_variance(), [false]);
    }

    #[test]
    fn log_returns_halving_negates_doubling() {
        let up = PricePanel::new(
            vec![ts("2025-01-06T09:30:00"), ts("2025-01-06T10:30:00")],
            vec!["AAA".into()],
            vec![vec![100.0, 200.0]],
        )
        .unwrap();
        let down = PricePanel::new(
            vec![ts("2025-01-06T09:30:00"), ts("2025-01-06T10:30:00")],
            vec!["AAA".into()],
            vec![vec![200.0, 100.0]],
        )
        .unwrap();
        let ru = log_returns(&up).unwrap();
        let rd = log_returns(&down).unwrap();
        assert!((ru.returns(0)[0] + rd.returns(0)[0]).abs() < 1e-15);
        assert!((ru.returns(0)[0] - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn segment_returns_concatenate() {
        let all = PricePanel::new(
            vec![
                ts("2025-01-06T09:00:00"),
                ts("2025-01-06T10:00:00"),
                ts("2025-01-06T11:00:00"),
                ts("2025-01-06T12:00:00"),
            ],
            vec!["AAA".into()],
            vec![vec![100.0, 104.0, 101.0, 107.0]],
        )
        .unwrap();
        let first = PricePanel::new(
            vec![
                ts("2025-01-06T09:00:00"),
                ts("2025-01-06T10:00:00"),
                ts("2025-01-06T11:00:00"),
            ],
            vec!["AAA".into()],
            vec![vec![100.0, 104.0, 101.0]],
        )
        .unwrap();
        let second = PricePanel::new(
            vec![ts("2025-01-06T11:00:00"), ts("2025-01-06T12:00:00")],
            vec!["AAA".into()],
            vec![vec![101.0, 107.0]],
        )
        .unwrap();
        let mut merged = log_returns(&first).unwrap().returns(0).to_vec();
        merged.extend_from_slice(log_returns(&second).unwrap().returns(0));
        assert_eq!(merged, log_returns(&all).unwrap().returns(0));
    }

    #[test]
    fn duplicate_series_correlate_to_one() {
        let r = ReturnsPanel::new(
            vec!["AAA".into(), "CCC".into()],
            vec![vec![0.01, -0.02, 0.03, 0.005], vec![0.01, -0.02, 0.03, 0.005]],
        )
        .unwrap();
        let g = pearson_matrix(&r).unwrap();
        assert!((g.weight(0, 1) - 1.0).abs() <= 1e-12);
        assert_eq!(g.weight(0, 0), 0.0);
    }

    #[test]
    fn negated_series_correlate_to_minus_one() {
        let r = ReturnsPanel::new(
            vec!["AAA".into(), "BBB".into()],
            vec![vec![0.01, -0.02, 0.03, 0.005], vec![-0.01, 0.02, -0.03, -0.005]],
        )
        .unwrap();
        let g = pearson_matrix(&r).unwrap();
        assert!((g.weight(0, 1) + 1.0).abs() <= 1e-12);
    }

    #[test]
    fn independent_series_correlate_near_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a: Vec<f64> = (0..10_000).map(|_| rng.random_range(-0.05..0.05)).collect();
        let b: Vec<f64> = (0..10_000).map(|_| rng.random_range(-0.05..0.05)).collect();
        let r = ReturnsPanel::new(vec!["A".into(), "B".into()], vec![a, b]).unwrap();
        let g = pearson_matrix(&r).unwrap();
        assert!(g.weight(0, 1).abs() < 0.05, "rho = {}", g.weight(0, 1));
    }

    #[test]
    fn correlation_invariant_under_positive_affine_maps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let a: Vec<f64> = (0..200).map(|_| rng.random_range(-0.05..0.05)).collect();
        let b: Vec<f64> = (0..200).map(|_| rng.random_range(-0.05..0.05)).collect();
        let scaled: Vec<f64> = a.iter().map(|x| 3.5 * x + 0.2).collect();
        let base = pearson_matrix(
            &ReturnsPanel::new(vec!["A".into(), "B".into()], vec![a, b.clone()]).unwrap(),
        )
        .unwrap();
        let mapped = pearson_matrix(
            &ReturnsPanel::new(vec!["A".into(), "B".into()], vec![scaled, b]).unwrap(),
        )
        .unwrap();
        assert!((base.weight(0, 1) - mapped.weight(0, 1)).abs() <= 1e-9);
    }

    #[test]
    fn zero_variance_error_names_ticker() {
        let r = ReturnsPanel::new(
            vec!["AAA".into(), "FLAT".into()],
            vec![vec![0.01, -0.02, 0.03], vec![0.0, 0.0, 0.0]],
        )
        .unwrap();
        let err = pearson_matrix(&r).unwrap_err();
        assert!(err.to_string().contains("FLAT"), "message: {err}");
    }

    fn hourly_panel(days: usize, bars_per_day: usize) -> PricePanel {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut timestamps = Vec::new();
        for d in 0..days {
            for b in 0..bars_per_day {
                let date = NaiveDate::from_ymd_opt(2025, 1, 6 + d as u32).unwrap();
                timestamps.push(date.and_hms_opt(9 + b as u32, 30, 0).unwrap());
            }
        }
        let rows = days * bars_per_day;
        let prices = (0..3)
            .map(|_| {
                let mut p = 100.0;
                (0..rows)
                    .map(|_| {
                        p *= 1.0 + rng.random_range(-0.01..0.01);
                        p
                    })
                    .collect()
            })
            .collect();
        PricePanel::new(
            timestamps,
            vec!["AAA".into(), "BBB".into(), "CCC".into()],
            prices,
        )
        .unwrap()
    }

    #[test]
    fn single_window_equals_full_panel_matrix() {
        let panel = hourly_panel(1, 7);
        let windows = rolling_graphs(&panel, 7, 7).unwrap();
        assert_eq!(windows.len(), 1);
        let full = pearson_matrix(&log_returns(&panel).unwrap()).unwrap();
        assert_eq!(windows[0].graph, full);
        assert_eq!(windows[0].id, "2025-01-06T09:30:00");
        assert!(windows[0].dropped.is_empty());
    }

    #[test]
    fn disjoint_daily_windows_cover_each_business_day() {
        let panel = hourly_panel(5, 7);
        let windows = rolling_graphs(&panel, 7, 7).unwrap();
        assert_eq!(windows.len(), 5);
        let ids: Vec<&str> = windows.iter().map(|w| w.id.as_str()).collect();
        assert_eq!(ids[0], "2025-01-06T09:30:00");
        assert_eq!(ids[4], "2025-01-10T09:30:00");
    }

    #[test]
    fn overlapping_windows_advance_by_step() {
        let panel = hourly_panel(1, 7);
        let windows = rolling_graphs(&panel, 4, 1).unwrap();
        assert_eq!(windows.len(), 4);
    }

    #[test]
    fn window_longer_than_panel_is_rejected() {
        let panel = hourly_panel(1, 7);
        assert!(matches!(
            rolling_graphs(&panel, 8, 1).unwrap_err(),
            Error::InvalidArgument(_)
        ));
    }

    #[test]
    fn flat_asset_dropped_per_window() {
        let timestamps: Vec<NaiveDateTime> = (0..4)
            .map(|h| {
                NaiveDate::from_ymd_opt(2025, 1, 6)
                    .unwrap()
                    .and_hms_opt(9 + h, 0, 0)
                    .unwrap()
            })
            .collect();
        let panel = PricePanel::new(
            timestamps,
            vec!["AAA".into(), "BBB".into(), "FLAT".into()],
            vec![
                vec![100.0, 101.0, 99.5, 100.7],
                vec![50.0, 49.2, 50.1, 49.8],
                vec![10.0, 10.0, 10.0, 10.0],
            ],
        )
        .unwrap();
        let windows = rolling_graphs(&panel, 4, 4).unwrap();
        assert_eq!(windows.len(), 1);
        assert_eq!(windows[0].dropped, ["FLAT"]);
        assert_eq!(windows[0].graph.n(), 2);
        assert_eq!(windows[0].graph.labels().unwrap(), ["AAA", "BBB"]);
    }
}
