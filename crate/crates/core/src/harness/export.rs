use super::config::ScenarioConfig;
use super::run::{Campaign, MetricSeries, Summary, SweepPoint};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One CSV row of a metric series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub iteration: usize,
    pub mse: f64,
    pub sinr_db: f64,
    pub ber: f64,
    pub algorithm: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N_I")]
    pub ni: usize,
    pub seed: u64,
}

pub const SERIES_COLUMNS: [&str; 8] = [
    "iteration",
    "mse",
    "sinr_db",
    "ber",
    "algorithm",
    "L",
    "N_I",
    "seed",
];

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub ber: f64,
    pub sinr_db: f64,
    pub mse: f64,
    pub algorithm: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N_I")]
    pub ni: usize,
    pub seed: u64,
}

pub const SWEEP_COLUMNS: [&str; 8] = [
    "value",
    "ber",
    "sinr_db",
    "mse",
    "algorithm",
    "L",
    "N_I",
    "seed",
];

/// JSON document written for a campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEnvelope {
    pub config: ScenarioConfig,
    pub summary: Summary,
    pub rows: Vec<SeriesRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEnvelope {
    pub config: ScenarioConfig,
    pub points: Vec<SweepPoint>,
}

pub fn series_rows(series: &MetricSeries) -> Vec<SeriesRow> {
    (0..series.len())
        .map(|i| SeriesRow {
            iteration: i,
            mse: series.mse[i],
            sinr_db: series.sinr_db[i],
            ber: series.ber[i],
            algorithm: series.algorithm.clone(),
            l: series.l,
            ni: series.ni,
            seed: series.seed,
        })
        .collect()
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, doc)?;
    f.write_all(b"\n").map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn export_series(
    series: &MetricSeries,
    cfg: &ScenarioConfig,
    path: &Path,
    format: Format,
) -> Result<()> {
    let rows = series_rows(series);
    match format {
        Format::Csv => write_csv(path, &SERIES_COLUMNS, &rows),
        Format::Json => write_json(
            path,
            &SeriesEnvelope {
                config: cfg.clone(),
                summary: series.summary,
                rows,
            },
        ),
    }
}

pub fn export_campaign(
    campaign: &Campaign,
    cfg: &ScenarioConfig,
    path: &Path,
    format: Format,
) -> Result<()> {
    export_series(&campaign.mean, cfg, path, format)
}

pub fn export_sweep(
    points: &[SweepPoint],
    cfg: &ScenarioConfig,
    path: &Path,
    format: Format,
) -> Result<()> {
    match format {
        Format::Csv => {
            let (l, ni) = cfg.effective_structure();
            let rows: Vec<SweepRow> = points
                .iter()
                .map(|p| SweepRow {
                    value: p.value,
                    ber: p.summary.ber,
                    sinr_db: p.summary.final_sinr_db,
                    mse: p.summary.final_mse,
                    algorithm: super::run::label(cfg),
                    l,
                    ni,
                    seed: cfg.seed,
                })
                .collect();
            write_csv(path, &SWEEP_COLUMNS, &rows)
        }
        Format::Json => write_json(
            path,
            &SweepEnvelope {
                config: cfg.clone(),
                points: points.to_vec(),
            },
        ),
    }
}

/// Reads a series CSV written by [`export_series`].
pub fn read_series_csv(path: &Path) -> Result<Vec<SeriesRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != SERIES_COLUMNS {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
