use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::DenominatorSpec;
use super::dataset::{scan_dataset, DatasetEntry};
use super::tables::render_tables;
use crate::detector::{DetectorKind, DetectorSettings};
use crate::error::{Error, Result};
use crate::metrics::{csv_field, format_metric, Denominator, MetricReport, CSV_HEADER};
use crate::raster::{read_pgm_file, write_pgm_file, Image};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub detectors: Vec<DetectorKind>,
    pub settings: DetectorSettings,
    pub image_filter: Option<String>,
    pub parallelism: usize,
    pub denominator: DenominatorSpec,
    /// Also write `tables.md`.
    pub tables: bool,
}

impl RunConfig {
    pub fn new(input_dir: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            input_dir: input_dir.into(),
            output_dir: output_dir.into(),
            detectors: DetectorKind::ALL.to_vec(),
            settings: DetectorSettings::default(),
            image_filter: None,
            parallelism: 1,
            denominator: DenominatorSpec::Full,
            tables: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.detectors.is_empty() {
            return Err(Error::Config("no detectors selected".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::Config("parallelism must be ≥ 1".into()));
        }
        self.settings
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }
}

/// A failed (image, detector) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub image_id: String,
    pub detector: DetectorKind,
    pub message: String,
}

/// Mean of each metric over one detector's rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub detector: DetectorKind,
    pub images: usize,
    /// Rows with at least one `inf`/`nan` metric. Each metric's mean skips
    /// only that metric's non-finite values.
    pub excluded: usize,
    pub mse: f64,
    pub e_rms: f64,
    pub snr_rms: f64,
    pub snr_avg: f64,
    pub snr_peak: f64,
    pub cii: f64,
    pub white_count: f64,
    pub white_percent: f64,
}

pub const AGGREGATE_HEADER: &str =
    "detector,images,excluded,mse,e_rms,snr_rms,snr_avg,snr_peak,cii,white_count,white_percent";

impl AggregateRow {
    fn from_rows(detector: DetectorKind, rows: &[&MetricReport]) -> Self {
        let finite_mean = |get: &dyn Fn(&MetricReport) -> f64| {
            let vals: Vec<f64> = rows
                .iter()
                .map(|r| get(r))
                .filter(|v| v.is_finite())
                .collect();
            if vals.is_empty() {
                f64::NAN
            } else {
                vals.iter().sum::<f64>() / vals.len() as f64
            }
        };
        Self {
            detector,
            images: rows.len(),
            excluded: rows
                .iter()
                .filter(|r| r.metric_values().iter().any(|v| !v.is_finite()))
                .count(),
            mse: finite_mean(&|r| r.mse),
            e_rms: finite_mean(&|r| r.e_rms),
            snr_rms: finite_mean(&|r| r.snr_rms),
            snr_avg: finite_mean(&|r| r.snr_avg),
            snr_peak: finite_mean(&|r| r.snr_peak),
            cii: finite_mean(&|r| r.cii),
            white_count: finite_mean(&|r| r.white_count as f64),
            white_percent: finite_mean(&|r| r.white_percent),
        }
    }

    pub fn csv_row(&self) -> String {
        let vals = [
            self.mse,
            self.e_rms,
            self.snr_rms,
            self.snr_avg,
            self.snr_peak,
            self.cii,
            self.white_count,
            self.white_percent,
        ];
        let mut s = format!("{},{},{}", self.detector, self.images, self.excluded);
        for v in vals {
            s.push(',');
            s.push_str(&format_metric(v));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub image_ids: Vec<String>,
    pub detectors: Vec<DetectorKind>,
    /// Image-major, detector order as configured.
    pub rows: Vec<MetricReport>,
    pub aggregates: Vec<AggregateRow>,
    pub errors: Vec<RowError>,
}

impl BatchSummary {
    pub fn row(&self, image_id: &str, detector: DetectorKind) -> Option<&MetricReport> {
        self.rows
            .iter()
            .find(|r| r.image_id == image_id && r.detector == detector.name())
    }

    pub fn aggregate(&self, detector: DetectorKind) -> Option<&AggregateRow> {
        self.aggregates.iter().find(|a| a.detector == detector)
    }

    pub fn per_image_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn aggregate_csv(&self) -> String {
        let mut s = String::from(AGGREGATE_HEADER);
        s.push('\n');
        for a in &self.aggregates {
            s.push_str(&a.csv_row());
            s.push('\n');
        }
        s
    }

    pub fn errors_csv(&self) -> String {
        let mut s = String::from("image_id,detector,message\n");
        for e in &self.errors {
            s.push_str(&format!(
                "{},{},{}\n",
                csv_field(&e.image_id),
                e.detector,
                csv_field(&e.message)
            ));
        }
        s
    }
}

fn resolve_denominator(spec: DenominatorSpec, image: &Image) -> Denominator {
    match spec {
        DenominatorSpec::Full => Denominator::FullImage,
        DenominatorSpec::Fixed(n) => Denominator::Pixels(n),
        DenominatorSpec::Foreground { level } => Denominator::Pixels(
            image
                .pixels()
                .iter()
                .filter(|&&v| v > f64::from(level))
                .count(),
        ),
    }
}

enum Cell {
    Row(MetricReport),
    Failed(RowError),
}

fn process_image(config: &RunConfig, entry: &DatasetEntry) -> Result<Vec<Cell>> {
    let fail_all = |message: String| {
        config
            .detectors
            .iter()
            .map(|&detector| {
                Cell::Failed(RowError {
                    image_id: entry.id.clone(),
                    detector,
                    message: message.clone(),
                })
            })
            .collect()
    };
    let image = match read_pgm_file(&entry.path) {
        Ok(img) => img,
        Err(e) => return Ok(fail_all(e.to_string())),
    };
    let denominator = resolve_denominator(config.denominator, &image);

    let mut cells = Vec::with_capacity(config.detectors.len());
    for &kind in &config.detectors {
        let outcome = config.settings.run(kind, &image).and_then(|edges| {
            let report =
                MetricReport::compute(kind.name(), &entry.id, &image, &edges, denominator)?;
            Ok((edges, report))
        });
        match outcome {
            Ok((edges, report)) => {
                let path = edge_map_path(&config.output_dir, kind, &entry.id);
                // Output failures abort the whole batch.
                write_pgm_file(&path, &edges)?;
                cells.push(Cell::Row(report));
            }
            Err(e) => cells.push(Cell::Failed(RowError {
                image_id: entry.id.clone(),
                detector: kind,
                message: e.to_string(),
            })),
        }
    }
    Ok(cells)
}

pub fn edge_map_path(output_dir: &Path, kind: DetectorKind, image_id: &str) -> PathBuf {
    output_dir.join(kind.name()).join(format!("{image_id}.pgm"))
}

fn write(path: PathBuf, contents: &str) -> Result<()> {
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

/// Runs every configured detector over every matching image, writing edge
/// maps to `<output>/<detector>/<id>.pgm` plus `per_image.csv`,
/// `aggregate.csv`, `errors.csv` and optionally `tables.md`.
///
/// Outputs do not depend on `parallelism`.
pub fn run_batch(config: &RunConfig) -> Result<BatchSummary> {
    config.validate()?;
    let entries = scan_dataset(&config.input_dir, config.image_filter.as_deref())?;
    for kind in &config.detectors {
        let dir = config.output_dir.join(kind.name());
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let per_image: Vec<Vec<Cell>> = pool.install(|| {
        entries
            .par_iter()
            .map(|entry| process_image(config, entry))
            .collect::<Result<_>>()
    })?;

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for cell in per_image.into_iter().flatten() {
        match cell {
            Cell::Row(r) => rows.push(r),
            Cell::Failed(e) => errors.push(e),
        }
    }
    let aggregates = config
        .detectors
        .iter()
        .map(|&kind| {
            let mine: Vec<&MetricReport> =
                rows.iter().filter(|r| r.detector == kind.name()).collect();
            AggregateRow::from_rows(kind, &mine)
        })
        .collect();
    let summary = BatchSummary {
        image_ids: entries.into_iter().map(|e| e.id).collect(),
        detectors: config.detectors.clone(),
        rows,
        aggregates,
        errors,
    };

    let out = &config.output_dir;
    write(out.join("per_image.csv"), &summary.per_image_csv())?;
    write(out.join("aggregate.csv"), &summary.aggregate_csv())?;
    write(out.join("errors.csv"), &summary.errors_csv())?;
    if config.tables {
        write(out.join("tables.md"), &render_tables(&summary))?;
    }
    Ok(summary)
}
