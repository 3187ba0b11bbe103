//! Fuzzy edge detectors.
//!
//! * [`fuzzy_detect`]: maximum neighbor contrast mapped through a ramp.
//! * [`fuzzy_canny`]: fuzzification followed by the Canny stages.
//! * [`fuzzy_relative_pixel`]: nine 3×3 sign templates aggregated with
//!   min/max, then [`remove_unwanted`] clears solid 2×2 blocks.
//! * [`sdgd`]: fuzzy OR of a Sobel-gradient membership and a local standard
//!   deviation membership.
//!
//! All detectors clear the one-pixel frame of their output and require a
//! strictly positive membership for an edge, so flat input never fires.

use std::fmt;
use std::str::FromStr;

use crate::canny::{smooth, suppress_and_threshold, CannyConfig, GaussianSpec};
use crate::classical::{sobel_field, ThresholdSpec};
use crate::error::{Error, Result};
use crate::raster::{EdgeMap, Field, Image, Window3};

/// Per-pixel membership degrees in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipField {
    mu: Field,
}

impl MembershipField {
    pub fn new(mu: Field) -> Result<Self> {
        if let Some(bad) = mu.data().iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(Error::Range(format!("membership {bad} outside [0, 1]")));
        }
        Ok(Self { mu })
    }

    pub fn width(&self) -> usize {
        self.mu.width()
    }

    pub fn height(&self) -> usize {
        self.mu.height()
    }

    pub fn values(&self) -> &[f64] {
        self.mu.data()
    }

    pub fn field(&self) -> &Field {
        &self.mu
    }
}

/// Intensity-to-membership mapping.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Fuzzifier {
    /// `v / 255`.
    #[default]
    Linear,
    /// Piecewise-quadratic S-curve rising from 0 at `low` to 1 at `high`,
    /// crossing 0.5 halfway.
    SCurve { low: f64, high: f64 },
}

impl Fuzzifier {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Fuzzifier::Linear => Ok(()),
            Fuzzifier::SCurve { low, high }
                if low.is_finite() && high.is_finite() && low < high =>
            {
                Ok(())
            }
            Fuzzifier::SCurve { low, high } => Err(Error::param(format!(
                "s-curve bounds must satisfy low < high, got {low}..{high}"
            ))),
        }
    }

    #[inline]
    pub fn membership(&self, v: f64) -> f64 {
        match *self {
            Fuzzifier::Linear => v / 255.0,
            Fuzzifier::SCurve { low, high } => {
                if v <= low {
                    0.0
                } else if v >= high {
                    1.0
                } else {
                    let span = high - low;
                    let mid = low + span / 2.0;
                    if v <= mid {
                        2.0 * ((v - low) / span).powi(2)
                    } else {
                        1.0 - 2.0 * ((v - high) / span).powi(2)
                    }
                }
            }
        }
    }
}

impl FromStr for Fuzzifier {
    type Err = Error;

    /// `linear`, `s_curve` (0..255) or `s_curve:<low>:<high>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "linear" {
            return Ok(Fuzzifier::Linear);
        }
        let mut parts = s.split(':');
        if parts.next() != Some("s_curve") {
            return Err(Error::Config(format!("unknown fuzzifier `{s}`")));
        }
        let bounds: Vec<&str> = parts.collect();
        let f = match bounds.as_slice() {
            [] => Fuzzifier::SCurve {
                low: 0.0,
                high: 255.0,
            },
            [lo, hi] => Fuzzifier::SCurve {
                low: lo
                    .parse()
                    .map_err(|_| Error::Config(format!("bad s_curve low `{lo}`")))?,
                high: hi
                    .parse()
                    .map_err(|_| Error::Config(format!("bad s_curve high `{hi}`")))?,
            },
            _ => return Err(Error::Config(format!("malformed fuzzifier `{s}`"))),
        };
        f.validate()?;
        Ok(f)
    }
}

impl fmt::Display for Fuzzifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fuzzifier::Linear => write!(f, "linear"),
            Fuzzifier::SCurve { low, high } => write!(f, "s_curve:{low}:{high}"),
        }
    }
}

pub fn fuzzify(image: &Image) -> MembershipField {
    fuzzify_with(image, &Fuzzifier::Linear)
}

pub fn fuzzify_with(image: &Image, fuzzifier: &Fuzzifier) -> MembershipField {
    let mu = image
        .field()
        .map(|v| fuzzifier.membership(v).clamp(0.0, 1.0));
    MembershipField { mu }
}

/// Memberships scaled back to an 8-bit-range image.
pub fn defuzzify(mf: &MembershipField) -> Image {
    Image::clamped(mf.mu.map(|m| m * 255.0), 255)
}

#[inline]
fn ramp(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn check_cut(name: &str, cut: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&cut) {
        return Err(Error::param(format!("{name} {cut} outside [0, 1]")));
    }
    Ok(())
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::param(format!("{name} {v} must be > 0")));
    }
    Ok(())
}

fn cut_memberships(m: &Field, cut: f64) -> EdgeMap {
    let mut map = EdgeMap::from_fn(m.width(), m.height(), |i, j| {
        let v = m.get(i, j);
        v > 0.0 && v >= cut
    });
    map.clear_border();
    map
}

/// Edge membership from the largest absolute membership difference between
/// a pixel and its eight neighbors, saturating at `contrast_scale` gray
/// levels.
pub fn fuzzy_detect(image: &Image, contrast_scale: f64, cut: f64) -> Result<EdgeMap> {
    check_scale("contrast_scale", contrast_scale)?;
    check_cut("fuzzy cut", cut)?;
    Ok(cut_memberships(
        &contrast_membership(image, contrast_scale),
        cut,
    ))
}

pub fn contrast_membership(image: &Image, contrast_scale: f64) -> Field {
    let mu = fuzzify(image).mu;
    Field::from_fn(mu.width(), mu.height(), |i, j| {
        let w = Window3::at(&mu, i, j);
        let c = w.a.iter().map(|n| (n - w.center).abs()).fold(0.0, f64::max);
        (c * 255.0 / contrast_scale).min(1.0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FuzzyCannyConfig {
    pub canny: CannyConfig,
    pub fuzzifier: Fuzzifier,
}

/// Fuzzy Canny with the linear fuzzifier.
pub fn fuzzy_canny(image: &Image, spec: &GaussianSpec, thresh: &ThresholdSpec) -> Result<EdgeMap> {
    fuzzy_canny_with(
        image,
        &FuzzyCannyConfig {
            canny: CannyConfig {
                gaussian: *spec,
                threshold: *thresh,
                hysteresis_low: None,
            },
            fuzzifier: Fuzzifier::Linear,
        },
    )
}

/// Fuzzify, rescale to gray levels, smooth, Sobel gradient, suppress,
/// threshold.
pub fn fuzzy_canny_with(image: &Image, config: &FuzzyCannyConfig) -> Result<EdgeMap> {
    config.canny.validate()?;
    config.fuzzifier.validate()?;
    let raster = defuzzify(&fuzzify_with(image, &config.fuzzifier));
    let smoothed = smooth(&raster, &config.canny.gaussian)?;
    Ok(suppress_and_threshold(
        &sobel_field(smoothed.field()),
        &config.canny,
    ))
}

/// One 3×3 neighbor condition relative to the centre pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Brighter,
    Darker,
    DontCare,
}

impl Cell {
    fn flipped(self) -> Self {
        match self {
            Cell::Brighter => Cell::Darker,
            Cell::Darker => Cell::Brighter,
            Cell::DontCare => Cell::DontCare,
        }
    }
}

/// Sign pattern over the eight neighbors `a0..a7` (see [`Window3`]).
///
/// A template matches in either polarity: the pattern as written and with
/// every `Brighter`/`Darker` swapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Template {
    pub cells: [Cell; 8],
}

impl Template {
    /// Parses eight characters in `a0..a7` order: `B` brighter, `D` darker,
    /// `.` don't care.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        if chars.len() != 8 {
            return Err(Error::Config(format!(
                "template `{s}` needs 8 cells, found {}",
                chars.len()
            )));
        }
        let mut cells = [Cell::DontCare; 8];
        for (cell, ch) in cells.iter_mut().zip(chars) {
            *cell = match ch {
                'B' | 'b' => Cell::Brighter,
                'D' | 'd' => Cell::Darker,
                '.' => Cell::DontCare,
                other => return Err(Error::Config(format!("bad template cell `{other}`"))),
            };
        }
        if cells.iter().all(|&c| c == Cell::DontCare) {
            return Err(Error::Config(format!("template `{s}` has no active cell")));
        }
        Ok(Self { cells })
    }

    fn one_polarity(cells: &[Cell; 8], w: &Window3, scale: f64) -> f64 {
        let mut m = 1.0_f64;
        for (cell, &n) in cells.iter().zip(&w.a) {
            let d = match cell {
                Cell::Brighter => (n - w.center) / scale,
                Cell::Darker => (w.center - n) / scale,
                Cell::DontCare => continue,
            };
            m = m.min(ramp(d));
        }
        m
    }

    /// Fuzzy AND over the active cells, best of both polarities.
    pub fn membership(&self, w: &Window3, contrast_scale: f64) -> f64 {
        let flipped = self.cells.map(Cell::flipped);
        Self::one_polarity(&self.cells, w, contrast_scale).max(Self::one_polarity(
            &flipped,
            w,
            contrast_scale,
        ))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cells {
            let ch = match c {
                Cell::Brighter => 'B',
                Cell::Darker => 'D',
                Cell::DontCare => '.',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// The default nine conditions, `a0..a7` clockwise from the top-left:
/// four steps (north, east, and the two diagonals), four corners (two
/// adjacent sides), and the isolated point.
pub const DEFAULT_TEMPLATES: [&str; 9] = [
    "BBB.....", // (a) step, north side differs
    "..BBB...", // (b) step, east side differs
    ".BBB....", // (c) diagonal step, north-east
    "BB.....B", // (d) diagonal step, north-west
    "BBBBB...", // (e) corner, north + east
    "..BBBBB.", // (f) corner, east + south
    "B...BBBB", // (g) corner, south + west
    "BBB...BB", // (h) corner, west + north
    "BBBBBBBB", // (i) isolated point
];

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyRuleSet {
    pub templates: [Template; 9],
    pub edge_threshold: f64,
    /// Gray-level difference at which a cell's membership reaches 1.
    pub contrast_scale: f64,
}

impl FuzzyRuleSet {
    pub fn validate(&self) -> Result<()> {
        check_cut("edge_threshold", self.edge_threshold)?;
        check_scale("contrast_scale", self.contrast_scale)
    }

    /// Membership of each template at one window.
    pub fn memberships(&self, w: &Window3) -> [f64; 9] {
        self.templates.map(|t| t.membership(w, self.contrast_scale))
    }
}

impl Default for FuzzyRuleSet {
    fn default() -> Self {
        Self {
            templates: DEFAULT_TEMPLATES.map(|s| Template::parse(s).expect("valid default")),
            edge_threshold: 0.5,
            contrast_scale: 50.0,
        }
    }
}

/// Template scan before unwanted-edge removal. Frame pixels are evaluated
/// with replicate borders and left set so removal sees complete blocks.
pub fn relative_pixel_intermediate(image: &Image, rules: &FuzzyRuleSet) -> Result<EdgeMap> {
    rules.validate()?;
    let f = image.field();
    Ok(EdgeMap::from_fn(f.width(), f.height(), |i, j| {
        let w = Window3::at(f, i, j);
        let m = rules.memberships(&w).into_iter().fold(0.0, f64::max);
        m > 0.0 && m >= rules.edge_threshold
    }))
}

/// Template scan, one removal pass, frame cleared.
pub fn fuzzy_relative_pixel(image: &Image, rules: &FuzzyRuleSet) -> Result<EdgeMap> {
    let mut out = remove_unwanted(&relative_pixel_intermediate(image, rules)?);
    out.clear_border();
    Ok(out)
}

/// Clears every edge pixel whose right, lower and lower-right neighbors are
/// all edges. Reads a snapshot of the input, so clearings do not cascade.
pub fn remove_unwanted(map: &EdgeMap) -> EdgeMap {
    let (w, h) = (map.width(), map.height());
    EdgeMap::from_fn(w, h, |i, j| {
        let on = map.get(i, j);
        let solid = i + 1 < h
            && j + 1 < w
            && map.get(i, j + 1)
            && map.get(i + 1, j)
            && map.get(i + 1, j + 1);
        on && !solid
    })
}

/// Population standard deviation over the `(2r+1)²` replicate-bordered
/// neighborhood of each pixel.
pub fn local_stddev(image: &Image, radius: usize) -> Result<Field> {
    if radius == 0 {
        return Err(Error::param("local_stddev radius must be ≥ 1"));
    }
    Ok(stddev_field(image.field(), radius))
}

fn stddev_field(f: &Field, radius: usize) -> Field {
    let r = radius as isize;
    let n = ((2 * radius + 1) * (2 * radius + 1)) as f64;
    let mut buf = Vec::with_capacity(n as usize);
    Field::from_fn(f.width(), f.height(), |i, j| {
        buf.clear();
        for di in -r..=r {
            for dj in -r..=r {
                buf.push(f.get_clamped(i as isize + di, j as isize + dj));
            }
        }
        let mean = buf.iter().sum::<f64>() / n;
        let var = buf.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        var.sqrt()
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdgdParams {
    /// Gradient magnitude at which the gradient membership saturates.
    pub grad_threshold: f64,
    /// Standard deviation at which the deviation membership saturates.
    pub std_threshold: f64,
    pub decision_cut: f64,
    pub fuzzifier: Fuzzifier,
}

impl SdgdParams {
    pub fn validate(&self) -> Result<()> {
        check_scale("grad_threshold", self.grad_threshold)?;
        check_scale("std_threshold", self.std_threshold)?;
        check_cut("decision_cut", self.decision_cut)?;
        self.fuzzifier.validate()
    }
}

impl Default for SdgdParams {
    fn default() -> Self {
        Self {
            grad_threshold: 100.0,
            std_threshold: 20.0,
            decision_cut: 0.5,
            fuzzifier: Fuzzifier::Linear,
        }
    }
}

/// Gradient and deviation memberships `(μ_g, μ_s)`.
pub fn sdgd_memberships(image: &Image, params: &SdgdParams) -> Result<(Field, Field)> {
    params.validate()?;
    let raster = defuzzify(&fuzzify_with(image, &params.fuzzifier));
    let grad = sobel_field(raster.field())
        .magnitude
        .map(|g| ramp(g / params.grad_threshold));
    let dev = stddev_field(raster.field(), 1).map(|s| ramp(s / params.std_threshold));
    Ok((grad, dev))
}

/// Edge where `max(μ_g, μ_s) ≥ decision_cut`.
pub fn sdgd(image: &Image, params: &SdgdParams) -> Result<EdgeMap> {
    let (grad, dev) = sdgd_memberships(image, params)?;
    let combined = Field::new(
        grad.width(),
        grad.height(),
        grad.data()
            .iter()
            .zip(dev.data())
            .map(|(g, s)| g.max(*s))
            .collect(),
    )?;
    Ok(cut_memberships(&combined, params.decision_cut))
}
