//! Markdown rendering of a batch: an aggregate metrics table and a
//! per-image white-pixel table.

use std::fmt::Write as _;

use super::batch::BatchSummary;
use crate::metrics::format_with;

pub fn render_tables(summary: &BatchSummary) -> String {
    let mut out = String::new();
    let n_images = summary.image_ids.len();

    writeln!(
        out,
        "## Performance rates over {n_images} image{}\n",
        if n_images == 1 { "" } else { "s" }
    )
    .unwrap();
    out.push_str("| Detector | e_RMS | SNR_RMS | SNR_AVERAGE | SNR_PEAK | CII |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|\n");
    for agg in &summary.aggregates {
        writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            agg.detector.label(),
            format_with(agg.e_rms, 2),
            format_with(agg.snr_rms, 2),
            format_with(agg.snr_avg, 2),
            format_with(agg.snr_peak, 2),
            format_with(agg.cii, 2),
        )
        .unwrap();
    }

    out.push_str("\n## White pixels per image\n\n| Detector |");
    for id in &summary.image_ids {
        write!(out, " {id} count | {id} % |").unwrap();
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(2 * n_images));
    out.push('\n');
    for &kind in &summary.detectors {
        write!(out, "| {} |", kind.label()).unwrap();
        for id in &summary.image_ids {
            match summary.row(id, kind) {
                Some(r) => write!(
                    out,
                    " {} | {} |",
                    r.white_count,
                    format_with(r.white_percent, 2)
                )
                .unwrap(),
                None => out.push_str(" - | - |"),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::batch::{AggregateRow, BatchSummary};
    use crate::detector::DetectorKind;
    use crate::metrics::MetricReport;

    fn row(det: DetectorKind, id: &str, snr: f64) -> MetricReport {
        MetricReport {
            detector: det.name().into(),
            image_id: id.into(),
            mse: 1.0,
            e_rms: 1.0,
            snr_rms: snr,
            snr_avg: 0.5,
            snr_peak: 48.13,
            cii: 1.0,
            white_count: 7,
            white_percent: 0.7,
        }
    }

    fn summary(dets: &[DetectorKind], ids: &[&str], snr: f64) -> BatchSummary {
        let rows: Vec<MetricReport> = ids
            .iter()
            .flat_map(|id| dets.iter().map(move |&d| row(d, id, snr)))
            .collect();
        let aggregates = dets
            .iter()
            .map(|&d| AggregateRow {
                detector: d,
                images: ids.len(),
                excluded: 0,
                mse: 1.0,
                e_rms: 1.0,
                snr_rms: snr,
                snr_avg: 0.5,
                snr_peak: 48.13,
                cii: 1.0,
                white_count: 7.0,
                white_percent: 0.7,
            })
            .collect();
        BatchSummary {
            image_ids: ids.iter().map(|s| s.to_string()).collect(),
            detectors: dets.to_vec(),
            rows,
            aggregates,
            errors: vec![],
        }
    }

    fn table_lines<'a>(md: &'a str, heading: &str) -> Vec<&'a str> {
        md.split("## ")
            .find(|s| s.starts_with(heading))
            .unwrap()
            .lines()
            .filter(|l| l.starts_with('|'))
            .collect()
    }

    #[test]
    fn two_detector_metric_table() {
        let md = render_tables(&summary(
            &[DetectorKind::Sobel, DetectorKind::Sdgd],
            &["a"],
            3.0,
        ));
        let lines = table_lines(&md, "Performance");
        // Header, rule, two data rows.
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].matches('|').count() - 2, 5);
        assert!(lines[2].starts_with("| Sobel | 1.00 | 3.00 |"));
        assert!(lines[3].starts_with("| SDGD |"));
    }

    #[test]
    fn white_table_has_two_columns_per_image() {
        let ids = ["mdb002", "mdb067", "mdb171", "mdb240", "mdb320"];
        let md = render_tables(&summary(&[DetectorKind::Canny], &ids, 1.0));
        let lines = table_lines(&md, "White");
        let data_cols = lines[0].matches('|').count() - 2;
        assert_eq!(data_cols, 10);
        assert_eq!(lines[2].matches('|').count() - 2, 10);
        assert!(lines[0].contains("mdb240 count"));
    }

    #[test]
    fn sentinels_render_literally() {
        let md = render_tables(&summary(&[DetectorKind::Log], &["x"], f64::INFINITY));
        assert!(md.contains("| LoG | 1.00 | inf |"));
    }
}
