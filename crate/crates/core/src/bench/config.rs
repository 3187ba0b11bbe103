//! Plain-text experiment configuration.
//!
//! One `key = value` pair per line, dotted keys per detector, `#` starts a
//! comment. Unknown keys and repeated keys are rejected.
//!
//! ```text
//! detectors = sobel, canny, sdgd
//! jobs = 4
//! filter = mdb0*
//! canny.sigma = 1.4
//! canny.threshold = 0.2
//! sdgd.std_threshold = 20
//! metrics.denominator = foreground
//! ```

use std::collections::BTreeMap;

use crate::classical::{ThresholdMode, ThresholdSpec};
use crate::detector::{DetectorKind, DetectorSettings};
use crate::error::{Error, Result};
use crate::fuzzy::{Fuzzifier, Template};

/// How the white-pixel percentage denominator is chosen per image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DenominatorSpec {
    /// Width × height.
    #[default]
    Full,
    /// Pixels of the original image strictly brighter than `level`.
    Foreground { level: u8 },
    /// A fixed pixel count for every image.
    Fixed(usize),
}

/// Everything a config file can set. CLI flags take precedence over the
/// run-level fields.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub settings: DetectorSettings,
    pub detectors: Option<Vec<DetectorKind>>,
    pub filter: Option<String>,
    pub jobs: Option<usize>,
    pub denominator: DenominatorSpec,
}

fn bad(key: &str, value: &str, why: &str) -> Error {
    Error::Config(format!("`{key} = {value}`: {why}"))
}

fn num(key: &str, value: &str) -> Result<f64> {
    let v: f64 = value
        .parse()
        .map_err(|_| bad(key, value, "expected a number"))?;
    if !v.is_finite() {
        return Err(bad(key, value, "must be finite"));
    }
    Ok(v)
}

fn uint(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| bad(key, value, "expected a non-negative integer"))
}

fn boolean(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

/// Splits lines into a key map.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!(
                "line {}: duplicate key `{k}`",
                n + 1
            )));
        }
    }
    Ok(out)
}

/// Threshold keys for one detector prefix: `<p>.threshold`, `<p>.threshold_mode`.
fn threshold(
    pairs: &mut BTreeMap<String, String>,
    prefix: &str,
    current: ThresholdSpec,
) -> Result<ThresholdSpec> {
    let mut spec = current;
    if let Some(mode) = pairs.remove(&format!("{prefix}.threshold_mode")) {
        spec.mode = match mode.as_str() {
            "fraction" => ThresholdMode::FractionOfMax,
            "absolute" => ThresholdMode::Absolute,
            _ => {
                return Err(bad(
                    &format!("{prefix}.threshold_mode"),
                    &mode,
                    "expected fraction or absolute",
                ))
            }
        };
    }
    if let Some(v) = pairs.remove(&format!("{prefix}.threshold")) {
        spec.value = num(&format!("{prefix}.threshold"), &v)?;
    }
    spec.validate()
        .map_err(|e| Error::Config(format!("{prefix}: {e}")))?;
    Ok(spec)
}

fn take_num(pairs: &mut BTreeMap<String, String>, key: &str, slot: &mut f64) -> Result<()> {
    if let Some(v) = pairs.remove(key) {
        *slot = num(key, &v)?;
    }
    Ok(())
}

fn canny_keys(
    pairs: &mut BTreeMap<String, String>,
    prefix: &str,
    cfg: &mut crate::canny::CannyConfig,
) -> Result<()> {
    take_num(pairs, &format!("{prefix}.sigma"), &mut cfg.gaussian.sigma)?;
    if let Some(v) = pairs.remove(&format!("{prefix}.size")) {
        cfg.gaussian.size = uint(&format!("{prefix}.size"), &v)?;
    }
    cfg.threshold = threshold(pairs, prefix, cfg.threshold)?;
    let enabled = match pairs.remove(&format!("{prefix}.hysteresis")) {
        Some(v) => boolean(&format!("{prefix}.hysteresis"), &v)?,
        None => cfg.hysteresis_low.is_some(),
    };
    let low_key = format!("{prefix}.hysteresis_low");
    let low = pairs.remove(&low_key);
    cfg.hysteresis_low = if enabled {
        let value = match low {
            Some(v) => num(&low_key, &v)?,
            None => cfg.threshold.value / 2.0,
        };
        Some(ThresholdSpec {
            mode: cfg.threshold.mode,
            value,
        })
    } else if let Some(v) = low {
        return Err(bad(&low_key, &v, "set hysteresis = true to use it"));
    } else {
        None
    };
    Ok(())
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = parse_pairs(text)?;
        let mut cfg = ConfigFile::default();
        let s = &mut cfg.settings;

        if let Some(v) = pairs.remove("detectors") {
            cfg.detectors = Some(DetectorKind::parse_list(&v)?);
        }
        cfg.filter = pairs.remove("filter");
        if let Some(v) = pairs.remove("jobs") {
            let jobs = uint("jobs", &v)?;
            if jobs == 0 {
                return Err(bad("jobs", &v, "must be ≥ 1"));
            }
            cfg.jobs = Some(jobs);
        }

        s.roberts_threshold = threshold(&mut pairs, "roberts", s.roberts_threshold)?;
        take_num(&mut pairs, "prewitt.c", &mut s.prewitt_c)?;
        s.prewitt_threshold = threshold(&mut pairs, "prewitt", s.prewitt_threshold)?;
        s.sobel_threshold = threshold(&mut pairs, "sobel", s.sobel_threshold)?;
        take_num(&mut pairs, "log.sigma", &mut s.log_sigma)?;
        s.log_threshold = threshold(&mut pairs, "log", s.log_threshold)?;

        canny_keys(&mut pairs, "canny", &mut s.canny)?;
        canny_keys(&mut pairs, "fuzzy_canny", &mut s.fuzzy_canny.canny)?;
        if let Some(v) = pairs.remove("fuzzy_canny.fuzzifier") {
            s.fuzzy_canny.fuzzifier = v.parse()?;
        }

        take_num(
            &mut pairs,
            "fuzzy.contrast_scale",
            &mut s.fuzzy_contrast_scale,
        )?;
        take_num(&mut pairs, "fuzzy.cut", &mut s.fuzzy_cut)?;

        let rp = &mut s.relative_pixel;
        take_num(
            &mut pairs,
            "fuzzy_relative_pixel.contrast_scale",
            &mut rp.contrast_scale,
        )?;
        take_num(
            &mut pairs,
            "fuzzy_relative_pixel.edge_threshold",
            &mut rp.edge_threshold,
        )?;
        for (idx, letter) in ('a'..='i').enumerate() {
            if let Some(v) = pairs.remove(&format!("fuzzy_relative_pixel.template.{letter}")) {
                rp.templates[idx] = Template::parse(&v)?;
            }
        }

        take_num(
            &mut pairs,
            "sdgd.grad_threshold",
            &mut s.sdgd.grad_threshold,
        )?;
        take_num(&mut pairs, "sdgd.std_threshold", &mut s.sdgd.std_threshold)?;
        take_num(&mut pairs, "sdgd.decision_cut", &mut s.sdgd.decision_cut)?;
        if let Some(v) = pairs.remove("sdgd.fuzzifier") {
            s.sdgd.fuzzifier = v.parse::<Fuzzifier>()?;
        }

        if let Some(v) = pairs.remove("metrics.denominator") {
            cfg.denominator = match v.as_str() {
                "full" => DenominatorSpec::Full,
                "foreground" => DenominatorSpec::Foreground { level: 0 },
                n => {
                    let n = uint("metrics.denominator", n)?;
                    if n == 0 {
                        return Err(bad("metrics.denominator", &v, "must be positive"));
                    }
                    DenominatorSpec::Fixed(n)
                }
            };
        }
        if let Some(v) = pairs.remove("metrics.foreground_level") {
            let level: u8 = v
                .parse()
                .map_err(|_| bad("metrics.foreground_level", &v, "expected 0..=255"))?;
            match &mut cfg.denominator {
                DenominatorSpec::Foreground { level: l } => *l = level,
                _ => {
                    return Err(bad(
                        "metrics.foreground_level",
                        &v,
                        "requires metrics.denominator = foreground",
                    ))
                }
            }
        }

        if let Some(key) = pairs.keys().next() {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        cfg.settings
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_is_default() {
        assert_eq!(ConfigFile::parse("").unwrap(), ConfigFile::default());
        assert_eq!(
            ConfigFile::parse("# nothing\n\n   \n").unwrap(),
            ConfigFile::default()
        );
    }

    #[test]
    fn overrides() {
        let cfg = ConfigFile::parse(
            "detectors = sobel,sdgd\njobs = 3\nfilter = mdb0*\n\
             canny.sigma = 2.0 # wider\ncanny.size = 7\n\
             sobel.threshold_mode = absolute\nsobel.threshold = 40\n\
             sdgd.std_threshold = 12.5\nsdgd.fuzzifier = s_curve:10:240\n\
             fuzzy_relative_pixel.template.c = BBBBBBB.\n\
             metrics.denominator = foreground\nmetrics.foreground_level = 12\n",
        )
        .unwrap();
        assert_eq!(
            cfg.detectors,
            Some(vec![DetectorKind::Sobel, DetectorKind::Sdgd])
        );
        assert_eq!(cfg.jobs, Some(3));
        assert_eq!(cfg.filter.as_deref(), Some("mdb0*"));
        assert_eq!(cfg.settings.canny.gaussian.sigma, 2.0);
        assert_eq!(cfg.settings.canny.gaussian.size, 7);
        assert_eq!(
            cfg.settings.sobel_threshold,
            ThresholdSpec::absolute(40.0).unwrap()
        );
        assert_eq!(cfg.settings.sdgd.std_threshold, 12.5);
        assert_eq!(
            cfg.settings.relative_pixel.templates[2].to_string(),
            "BBBBBBB."
        );
        assert_eq!(cfg.denominator, DenominatorSpec::Foreground { level: 12 });
    }

    #[test]
    fn hysteresis_keys() {
        let cfg = ConfigFile::parse("canny.hysteresis = true\n").unwrap();
        assert_eq!(
            cfg.settings.canny.hysteresis_low,
            Some(ThresholdSpec::fraction(0.1).unwrap())
        );
        let cfg = ConfigFile::parse("canny.hysteresis = on\ncanny.hysteresis_low = 0.05").unwrap();
        assert_eq!(cfg.settings.canny.hysteresis_low.unwrap().value, 0.05);
        assert!(ConfigFile::parse("canny.hysteresis_low = 0.05").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "nonsense",
            "= 3",
            "canny.sigma = abc",
            "canny.sigma = -1",
            "canny.size = 4",
            "sobel.threshold = 1.5",
            "sobel.threshold_mode = relative",
            "jobs = 0",
            "unknown.key = 1",
            "canny.sigma = 1\ncanny.sigma = 2",
            "detectors = sobel,kirsch",
            "metrics.denominator = 0",
            "metrics.foreground_level = 3",
            "fuzzy_relative_pixel.template.a = BB",
            "sdgd.decision_cut = 1.1",
            "log.sigma = inf",
        ] {
            assert!(ConfigFile::parse(text).is_err(), "{text:?} accepted");
        }
    }
}
