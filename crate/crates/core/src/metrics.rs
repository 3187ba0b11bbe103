//! Objective quality measures between an original image `f` and a detector
//! output `F` (an edge map read as a 0/255 image).
//!
//! Undefined ratios are reported as sentinels rather than errors: a zero
//! error power gives `+∞`, a zero signal power gives NaN. They serialize as
//! `inf` and `nan`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::raster::{EdgeMap, Image};

fn check_dims(f: &Image, g: &Image) -> Result<()> {
    if f.width() != g.width() || f.height() != g.height() {
        return Err(Error::Dimensions(format!(
            "metric inputs differ: {}x{} vs {}x{}",
            f.width(),
            f.height(),
            g.width(),
            g.height()
        )));
    }
    Ok(())
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

fn population_variance(values: &[f64]) -> f64 {
    let m = mean(values.iter().copied(), values.len());
    mean(values.iter().map(|v| (v - m) * (v - m)), values.len())
}

/// `10·log10(num / den)` with the sentinel conventions above.
fn db_power_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        f64::NAN
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (num / den).log10()
    }
}

/// Mean squared error, `Σ(f − F)² / MN`.
pub fn mse(f: &Image, g: &Image) -> Result<f64> {
    check_dims(f, g)?;
    let n = f.pixels().len();
    Ok(mean(
        f.pixels()
            .iter()
            .zip(g.pixels())
            .map(|(a, b)| (a - b) * (a - b)),
        n,
    ))
}

pub fn e_rms(f: &Image, g: &Image) -> Result<f64> {
    Ok(mse(f, g)?.sqrt())
}

/// `10·log10(σ² / σₑ²)` with σ² the variance of `f` and σₑ² the variance of
/// the error image `f − F`.
pub fn snr_rms(f: &Image, g: &Image) -> Result<f64> {
    check_dims(f, g)?;
    let err: Vec<f64> = f
        .pixels()
        .iter()
        .zip(g.pixels())
        .map(|(a, b)| a - b)
        .collect();
    Ok(db_power_ratio(
        population_variance(f.pixels()),
        population_variance(&err),
    ))
}

/// `10·log10(mean(f²) / mean((f − F)²))`.
pub fn snr_avg(f: &Image, g: &Image) -> Result<f64> {
    check_dims(f, g)?;
    let n = f.pixels().len();
    let signal = mean(f.pixels().iter().map(|a| a * a), n);
    Ok(db_power_ratio(signal, mse(f, g)?))
}

/// `20·log10(255 / e_rms)`.
pub fn snr_peak(f: &Image, g: &Image) -> Result<f64> {
    Ok(peak_from_rms(e_rms(f, g)?))
}

pub fn peak_from_rms(rms: f64) -> f64 {
    if rms == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (255.0 / rms).log10()
    }
}

/// Michelson contrast `(I_max − I_min) / (I_max + I_min)`.
pub fn cii(g: &Image) -> f64 {
    let px = g.pixels();
    let hi = px.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = px.iter().copied().fold(f64::INFINITY, f64::min);
    if hi + lo == 0.0 {
        f64::NAN
    } else {
        (hi - lo) / (hi + lo)
    }
}

/// Pixel count the white percentage is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    #[default]
    FullImage,
    /// Explicit mask size, e.g. a segmented breast region.
    Pixels(usize),
}

pub fn white_pixel_stats(map: &EdgeMap, denominator: Denominator) -> Result<(usize, f64)> {
    let count = map.count();
    let total = match denominator {
        Denominator::FullImage => map.width() * map.height(),
        Denominator::Pixels(n) => n,
    };
    if total == 0 {
        return Err(Error::param("white-pixel denominator is zero"));
    }
    Ok((count, 100.0 * count as f64 / total as f64))
}

/// One detector applied to one image.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub detector: String,
    pub image_id: String,
    pub mse: f64,
    pub e_rms: f64,
    pub snr_rms: f64,
    pub snr_avg: f64,
    pub snr_peak: f64,
    pub cii: f64,
    pub white_count: usize,
    pub white_percent: f64,
}

pub const CSV_HEADER: &str =
    "detector,image_id,mse,e_rms,snr_rms,snr_avg,snr_peak,cii,white_count,white_percent";

impl MetricReport {
    pub fn compute(
        detector: &str,
        image_id: &str,
        original: &Image,
        edges: &EdgeMap,
        denominator: Denominator,
    ) -> Result<Self> {
        let out = edges.to_image();
        let mse = mse(original, &out)?;
        let e_rms = mse.sqrt();
        let (white_count, white_percent) = white_pixel_stats(edges, denominator)?;
        Ok(Self {
            detector: detector.to_string(),
            image_id: image_id.to_string(),
            mse,
            e_rms,
            snr_rms: snr_rms(original, &out)?,
            snr_avg: snr_avg(original, &out)?,
            snr_peak: peak_from_rms(e_rms),
            cii: cii(&out),
            white_count,
            white_percent,
        })
    }

    /// The six real-valued metrics in CSV column order.
    pub fn metric_values(&self) -> [f64; 6] {
        [
            self.mse,
            self.e_rms,
            self.snr_rms,
            self.snr_avg,
            self.snr_peak,
            self.cii,
        ]
    }

    pub fn csv_row(&self) -> String {
        let mut s = format!(
            "{},{}",
            csv_field(&self.detector),
            csv_field(&self.image_id)
        );
        for v in self.metric_values() {
            write!(s, ",{}", format_metric(v)).unwrap();
        }
        write!(
            s,
            ",{},{}",
            self.white_count,
            format_metric(self.white_percent)
        )
        .unwrap();
        s
    }
}

/// Quotes a CSV field when it holds a delimiter, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Fixed six-decimal rendering; sentinels as `inf`, `-inf`, `nan`.
pub fn format_metric(v: f64) -> String {
    format_with(v, 6)
}

pub fn format_with(v: f64, decimals: usize) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        let s = format!("{v:.decimals$}");
        // Avoid "-0.000000".
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

/// Inverse of [`format_metric`].
pub fn parse_metric(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        other => other.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(w: usize, h: usize, v: &[f64]) -> Image {
        Image::new(w, h, v.to_vec(), 255).unwrap()
    }

    #[test]
    fn mse_examples() {
        let a = im(2, 1, &[0.0, 10.0]);
        let b = im(2, 1, &[6.0, 2.0]);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert_eq!(mse(&a, &b).unwrap(), 50.0);
        assert!((e_rms(&a, &b).unwrap() - 50f64.sqrt()).abs() < 1e-12);
        assert!((e_rms(&a, &b).unwrap() - 7.0711).abs() < 1e-4);
        let zero = Image::filled(4, 4, 0.0).unwrap();
        let full = Image::filled(4, 4, 255.0).unwrap();
        assert_eq!(mse(&zero, &full).unwrap(), 65025.0);
        assert!(mse(&a, &zero).is_err());
    }

    #[test]
    fn snr_rms_sentinels() {
        let f = im(4, 1, &[10.0, 20.0, 30.0, 40.0]);
        let shifted = im(4, 1, &[15.0, 25.0, 35.0, 45.0]);
        assert_eq!(snr_rms(&f, &shifted).unwrap(), f64::INFINITY);
        let flat = im(4, 1, &[5.0; 4]);
        assert!(snr_rms(&flat, &f).unwrap().is_nan());
    }

    #[test]
    fn snr_rms_ratio() {
        // f has variance 100; the error f − F has variance 1.
        let f = im(2, 1, &[90.0, 110.0]);
        let g = im(2, 1, &[89.0, 111.0]);
        assert!((snr_rms(&f, &g).unwrap() - 20.0).abs() < 1e-9);
        // Swap the roles: variance 1 signal, variance 100 error.
        let f = im(2, 1, &[100.0, 102.0]);
        let g = im(2, 1, &[90.0, 112.0]);
        assert!((snr_rms(&f, &g).unwrap() + 20.0).abs() < 1e-9);
    }

    #[test]
    fn snr_peak_examples() {
        assert!((peak_from_rms(25.5) - 20.0).abs() < 1e-9);
        assert_eq!(peak_from_rms(255.0), 0.0);
        assert!((peak_from_rms(87.33) - 9.307534).abs() < 1e-6);
        assert_eq!(peak_from_rms(0.0), f64::INFINITY);
        let f = im(1, 1, &[100.0]);
        assert_eq!(snr_peak(&f, &f).unwrap(), f64::INFINITY);
    }

    #[test]
    fn snr_avg_examples() {
        let f = Image::filled(3, 3, 100.0).unwrap();
        let g = Image::filled(3, 3, 50.0).unwrap();
        assert!((snr_avg(&f, &g).unwrap() - 10.0 * 4f64.log10()).abs() < 1e-12);
        assert!((snr_avg(&f, &g).unwrap() - 6.0206).abs() < 1e-4);
        assert_eq!(snr_avg(&f, &f).unwrap(), f64::INFINITY);
        let z = Image::filled(3, 3, 0.0).unwrap();
        assert!(snr_avg(&z, &g).unwrap().is_nan());
    }

    #[test]
    fn cii_examples() {
        let map = EdgeMap::from_fn(4, 4, |i, j| i == j);
        assert_eq!(cii(&map.to_image()), 1.0);
        assert_eq!(cii(&Image::filled(3, 3, 80.0).unwrap()), 0.0);
        assert_eq!(cii(&im(3, 1, &[50.0, 90.0, 150.0])), 0.5);
        assert!(cii(&Image::filled(3, 3, 0.0).unwrap()).is_nan());
    }

    #[test]
    fn white_pixels() {
        let dark = EdgeMap::empty(4, 4);
        assert_eq!(
            white_pixel_stats(&dark, Denominator::FullImage).unwrap(),
            (0, 0.0)
        );
        let m = EdgeMap::from_fn(4, 4, |i, _| i == 0);
        assert_eq!(
            white_pixel_stats(&m, Denominator::FullImage).unwrap(),
            (4, 25.0)
        );
        assert_eq!(
            white_pixel_stats(&m, Denominator::Pixels(8)).unwrap(),
            (4, 50.0)
        );
        assert!(white_pixel_stats(&m, Denominator::Pixels(0)).is_err());
    }

    #[test]
    fn sentinel_formatting() {
        assert_eq!(format_metric(f64::INFINITY), "inf");
        assert_eq!(format_metric(f64::NAN), "nan");
        assert_eq!(format_metric(-0.0), "0.000000");
        assert_eq!(format_metric(1.5), "1.500000");
        assert!(parse_metric("nan").unwrap().is_nan());
        assert_eq!(parse_metric("inf"), Some(f64::INFINITY));
        assert_eq!(parse_metric("2.25"), Some(2.25));
    }

    #[test]
    fn report_row() {
        let f = im(2, 2, &[10.0, 20.0, 30.0, 40.0]);
        let map = EdgeMap::new(2, 2, vec![true, false, false, false]).unwrap();
        let r = MetricReport::compute("sobel", "x", &f, &map, Denominator::FullImage).unwrap();
        assert_eq!(r.white_count, 1);
        assert_eq!(r.white_percent, 25.0);
        assert!((r.e_rms * r.e_rms - r.mse).abs() < 1e-9);
        assert_eq!(
            r.csv_row().split(',').count(),
            CSV_HEADER.split(',').count()
        );
        assert!(r.csv_row().starts_with("sobel,x,"));
    }
}
