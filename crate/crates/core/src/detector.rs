//! Name-addressable registry of the nine detectors and their settings.

use std::fmt;
use std::str::FromStr;

use crate::canny::{canny_with, CannyConfig};
use crate::classical::{gradient_to_edges, log_detect, prewitt, roberts, sobel, ThresholdSpec};
use crate::error::{Error, Result};
use crate::fuzzy::{
    fuzzy_canny_with, fuzzy_detect, fuzzy_relative_pixel, sdgd, FuzzyCannyConfig, FuzzyRuleSet,
    SdgdParams,
};
use crate::raster::{EdgeMap, Image};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    Roberts,
    Prewitt,
    Sobel,
    Log,
    Canny,
    Fuzzy,
    FuzzyCanny,
    FuzzyRelativePixel,
    Sdgd,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 9] = [
        DetectorKind::Roberts,
        DetectorKind::Prewitt,
        DetectorKind::Sobel,
        DetectorKind::Log,
        DetectorKind::Canny,
        DetectorKind::Fuzzy,
        DetectorKind::FuzzyCanny,
        DetectorKind::FuzzyRelativePixel,
        DetectorKind::Sdgd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Roberts => "roberts",
            DetectorKind::Prewitt => "prewitt",
            DetectorKind::Sobel => "sobel",
            DetectorKind::Log => "log",
            DetectorKind::Canny => "canny",
            DetectorKind::Fuzzy => "fuzzy",
            DetectorKind::FuzzyCanny => "fuzzy_canny",
            DetectorKind::FuzzyRelativePixel => "fuzzy_relative_pixel",
            DetectorKind::Sdgd => "sdgd",
        }
    }

    /// Row label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            DetectorKind::Roberts => "Roberts",
            DetectorKind::Prewitt => "Prewitt",
            DetectorKind::Sobel => "Sobel",
            DetectorKind::Log => "LoG",
            DetectorKind::Canny => "Canny",
            DetectorKind::Fuzzy => "Fuzzy",
            DetectorKind::FuzzyCanny => "Fuzzy Canny",
            DetectorKind::FuzzyRelativePixel => "Fuzzy Relative Pixel",
            DetectorKind::Sdgd => "SDGD",
        }
    }

    /// Parses a comma-separated list; `all` selects every detector.
    /// Duplicates are dropped, order is preserved.
    pub fn parse_list(s: &str) -> Result<Vec<DetectorKind>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                for k in DetectorKind::ALL {
                    if !out.contains(&k) {
                        out.push(k);
                    }
                }
                continue;
            }
            let k: DetectorKind = part.parse()?;
            if !out.contains(&k) {
                out.push(k);
            }
        }
        if out.is_empty() {
            return Err(Error::Config("detector list is empty".into()));
        }
        Ok(out)
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DetectorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown detector `{s}`")))
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters for every detector. Defaults are the documented ones.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSettings {
    pub roberts_threshold: ThresholdSpec,
    pub prewitt_c: f64,
    pub prewitt_threshold: ThresholdSpec,
    pub sobel_threshold: ThresholdSpec,
    pub log_sigma: f64,
    pub log_threshold: ThresholdSpec,
    pub canny: CannyConfig,
    pub fuzzy_contrast_scale: f64,
    pub fuzzy_cut: f64,
    pub fuzzy_canny: FuzzyCannyConfig,
    pub relative_pixel: FuzzyRuleSet,
    pub sdgd: SdgdParams,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            roberts_threshold: ThresholdSpec::default(),
            prewitt_c: 1.0,
            prewitt_threshold: ThresholdSpec::default(),
            sobel_threshold: ThresholdSpec::default(),
            log_sigma: 1.0,
            log_threshold: ThresholdSpec::default(),
            canny: CannyConfig::default(),
            fuzzy_contrast_scale: 50.0,
            fuzzy_cut: 0.5,
            fuzzy_canny: FuzzyCannyConfig::default(),
            relative_pixel: FuzzyRuleSet::default(),
            sdgd: SdgdParams::default(),
        }
    }
}

impl DetectorSettings {
    /// Checks every parameter without running anything.
    pub fn validate(&self) -> Result<()> {
        self.roberts_threshold.validate()?;
        self.prewitt_threshold.validate()?;
        if !(self.prewitt_c > 0.0) || !self.prewitt_c.is_finite() {
            return Err(Error::param(format!(
                "prewitt.c = {} must be > 0",
                self.prewitt_c
            )));
        }
        self.sobel_threshold.validate()?;
        if !(self.log_sigma > 0.0) || !self.log_sigma.is_finite() {
            return Err(Error::param(format!(
                "log.sigma = {} must be > 0",
                self.log_sigma
            )));
        }
        self.log_threshold.validate()?;
        self.canny.validate()?;
        if !(self.fuzzy_contrast_scale > 0.0) || !self.fuzzy_contrast_scale.is_finite() {
            return Err(Error::param("fuzzy.contrast_scale must be > 0"));
        }
        if !(0.0..=1.0).contains(&self.fuzzy_cut) {
            return Err(Error::param("fuzzy.cut outside [0, 1]"));
        }
        self.fuzzy_canny.canny.validate()?;
        self.fuzzy_canny.fuzzifier.validate()?;
        self.relative_pixel.validate()?;
        self.sdgd.validate()
    }

    pub fn run(&self, kind: DetectorKind, image: &Image) -> Result<EdgeMap> {
        match kind {
            DetectorKind::Roberts => {
                Ok(gradient_to_edges(&roberts(image), &self.roberts_threshold))
            }
            DetectorKind::Prewitt => Ok(gradient_to_edges(
                &prewitt(image, self.prewitt_c)?,
                &self.prewitt_threshold,
            )),
            DetectorKind::Sobel => Ok(gradient_to_edges(&sobel(image), &self.sobel_threshold)),
            DetectorKind::Log => log_detect(image, self.log_sigma, &self.log_threshold),
            DetectorKind::Canny => canny_with(image, &self.canny),
            DetectorKind::Fuzzy => fuzzy_detect(image, self.fuzzy_contrast_scale, self.fuzzy_cut),
            DetectorKind::FuzzyCanny => fuzzy_canny_with(image, &self.fuzzy_canny),
            DetectorKind::FuzzyRelativePixel => fuzzy_relative_pixel(image, &self.relative_pixel),
            DetectorKind::Sdgd => sdgd(image, &self.sdgd),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in DetectorKind::ALL {
            assert_eq!(k.name().parse::<DetectorKind>().unwrap(), k);
        }
        assert!("kirsch".parse::<DetectorKind>().is_err());
    }

    #[test]
    fn list_parsing() {
        assert_eq!(
            DetectorKind::parse_list("sobel, canny,sobel").unwrap(),
            vec![DetectorKind::Sobel, DetectorKind::Canny]
        );
        assert_eq!(DetectorKind::parse_list("all").unwrap().len(), 9);
        assert!(DetectorKind::parse_list(" , ").is_err());
        assert!(DetectorKind::parse_list("sobel,nope").is_err());
    }

    #[test]
    fn defaults_validate() {
        DetectorSettings::default().validate().unwrap();
        let bad = DetectorSettings {
            log_sigma: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
