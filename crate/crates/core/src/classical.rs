//! First- and second-derivative edge operators: Roberts cross, Prewitt,
//! Sobel and Laplacian of Gaussian, plus gradient binarization.
//!
//! Index convention: `i` is the row, `j` the column. `gx` differentiates
//! along rows (bottom minus top), `gy` along columns (right minus left).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::raster::{convolve, EdgeMap, Field, Image, Kernel, Window3};

/// Per-pixel gradient components with derived magnitude and direction.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub gx: Field,
    pub gy: Field,
    pub magnitude: Field,
    /// `atan2(gy, gx)` in `(−π, π]`.
    pub direction: Field,
}

impl GradientField {
    pub fn from_components(gx: Field, gy: Field) -> Result<Self> {
        if !gx.same_shape(&gy) {
            return Err(Error::Dimensions("gx and gy differ in shape".into()));
        }
        let (w, h) = (gx.width(), gx.height());
        let mut mag = Vec::with_capacity(gx.len());
        let mut dir = Vec::with_capacity(gx.len());
        for (&x, &y) in gx.data().iter().zip(gy.data()) {
            mag.push((x * x + y * y).sqrt());
            let a = y.atan2(x);
            dir.push(if a <= -PI { PI } else { a });
        }
        Ok(Self {
            magnitude: Field::new(w, h, mag)?,
            direction: Field::new(w, h, dir)?,
            gx,
            gy,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.gx.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.gx.height()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Absolute,
    FractionOfMax,
}

/// How a scalar response is cut into edge / non-edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub mode: ThresholdMode,
    pub value: f64,
}

impl ThresholdSpec {
    pub fn absolute(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::param(format!(
                "absolute threshold {value} must be ≥ 0"
            )));
        }
        Ok(Self {
            mode: ThresholdMode::Absolute,
            value,
        })
    }

    pub fn fraction(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::param(format!(
                "fraction threshold {value} outside [0, 1]"
            )));
        }
        Ok(Self {
            mode: ThresholdMode::FractionOfMax,
            value,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self.mode {
            ThresholdMode::Absolute => Self::absolute(self.value).map(|_| ()),
            ThresholdMode::FractionOfMax => Self::fraction(self.value).map(|_| ()),
        }
    }

    /// Concrete cut given the maximum of the response being thresholded.
    pub fn resolve(&self, max: f64) -> f64 {
        match self.mode {
            ThresholdMode::Absolute => self.value,
            ThresholdMode::FractionOfMax => self.value * max.max(0.0),
        }
    }
}

impl Default for ThresholdSpec {
    fn default() -> Self {
        Self {
            mode: ThresholdMode::FractionOfMax,
            value: 0.20,
        }
    }
}

/// Roberts cross: `gx = f(i,j) − f(i+1,j+1)`, `gy = f(i+1,j) − f(i,j+1)`,
/// assigned to the top-left pixel of the 2×2 cross.
pub fn roberts(image: &Image) -> GradientField {
    let f = image.field();
    let (w, h) = (f.width(), f.height());
    let gx = Field::from_fn(w, h, |i, j| {
        let (i, j) = (i as isize, j as isize);
        f.get_clamped(i, j) - f.get_clamped(i + 1, j + 1)
    });
    let gy = Field::from_fn(w, h, |i, j| {
        let (i, j) = (i as isize, j as isize);
        f.get_clamped(i + 1, j) - f.get_clamped(i, j + 1)
    });
    GradientField::from_components(gx, gy).expect("same shape")
}

/// Prewitt family with centre emphasis `c`; `c = 1` is Prewitt, `c = 2` Sobel.
pub fn prewitt(image: &Image, c: f64) -> Result<GradientField> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::param(format!(
            "prewitt emphasis c = {c} must be > 0"
        )));
    }
    Ok(weighted_difference(image.field(), c))
}

pub fn sobel(image: &Image) -> GradientField {
    weighted_difference(image.field(), 2.0)
}

pub(crate) fn sobel_field(field: &Field) -> GradientField {
    weighted_difference(field, 2.0)
}

fn weighted_difference(f: &Field, c: f64) -> GradientField {
    let (w, h) = (f.width(), f.height());
    let mut gx = Vec::with_capacity(f.len());
    let mut gy = Vec::with_capacity(f.len());
    for i in 0..h {
        for j in 0..w {
            let Window3 { a, .. } = Window3::at(f, i, j);
            gx.push((a[6] + c * a[5] + a[4]) - (a[0] + c * a[1] + a[2]));
            gy.push((a[2] + c * a[3] + a[4]) - (a[0] + c * a[7] + a[6]));
        }
    }
    GradientField::from_components(
        Field::new(w, h, gx).expect("sized"),
        Field::new(w, h, gy).expect("sized"),
    )
    .expect("same shape")
}

/// Magnitude cut. A pixel needs non-zero strength to count as an edge, so a
/// flat field never produces edges whatever the threshold.
pub fn gradient_to_edges(field: &GradientField, thresh: &ThresholdSpec) -> EdgeMap {
    threshold_field(&field.magnitude, thresh)
}

pub(crate) fn threshold_field(values: &Field, thresh: &ThresholdSpec) -> EdgeMap {
    let cut = thresh.resolve(values.max());
    let (w, h) = (values.width(), values.height());
    let mut map = EdgeMap::from_fn(w, h, |i, j| {
        let v = values.get(i, j);
        v > 0.0 && v >= cut
    });
    map.clear_border();
    map
}

/// Sampled Laplacian of Gaussian, `2·⌈3σ⌉ + 1` wide, shifted to zero sum.
pub fn log_kernel(sigma: f64) -> Result<Kernel> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!("LoG sigma {sigma} must be > 0")));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let size = 2 * radius + 1;
    let s2 = sigma * sigma;
    let norm = -1.0 / (PI * s2 * s2);
    let mut weights = Vec::with_capacity(size * size);
    for u in 0..size {
        for v in 0..size {
            let dy = u as f64 - radius as f64;
            let dx = v as f64 - radius as f64;
            let q = (dx * dx + dy * dy) / (2.0 * s2);
            weights.push(norm * (1.0 - q) * (-q).exp());
        }
    }
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    weights.iter_mut().for_each(|w| *w -= mean);
    Kernel::new(size, weights)
}

// Responses closer than this are treated as equal.
const CROSSING_FLOOR: f64 = 1e-6;

/// LoG zero-crossing detector.
///
/// A 4-adjacent pair `(p, q)` crosses when the responses have strictly
/// opposite signs; its strength is `|r_p − r_q|`. Fraction thresholds resolve
/// against the strongest crossing. The pixel of the pair nearer zero is
/// marked (`p` on ties, `p` being the upper/left one).
pub fn log_detect(image: &Image, sigma: f64, thresh: &ThresholdSpec) -> Result<EdgeMap> {
    thresh.validate()?;
    let response = convolve(image, &log_kernel(sigma)?);
    let (w, h) = (response.width(), response.height());

    let mut crossings = Vec::new();
    for i in 0..h {
        for j in 0..w {
            let rp = response.get(i, j);
            for (qi, qj) in [(i, j + 1), (i + 1, j)] {
                if qi >= h || qj >= w {
                    continue;
                }
                let rq = response.get(qi, qj);
                if rp * rq < 0.0 {
                    let strength = (rp - rq).abs();
                    let at = if rp.abs() <= rq.abs() {
                        (i, j)
                    } else {
                        (qi, qj)
                    };
                    crossings.push((strength, at));
                }
            }
        }
    }

    let max = crossings.iter().map(|c| c.0).fold(0.0, f64::max);
    let cut = thresh.resolve(max).max(CROSSING_FLOOR);
    let mut map = EdgeMap::empty(w, h);
    for (strength, (i, j)) in crossings {
        if strength >= cut {
            map.set(i, j, true);
        }
    }
    map.clear_border();
    Ok(map)
}
