//! Canny edge detection: Gaussian smoothing, Sobel gradient, non-maximum
//! suppression, then a single global threshold. Double-threshold hysteresis
//! is available through [`CannyConfig::hysteresis_low`].

use crate::classical::{sobel, threshold_field, GradientField, ThresholdSpec};
use crate::error::{Error, Result};
use crate::raster::{convolve, EdgeMap, Field, Image, Kernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    pub sigma: f64,
    pub size: usize,
}

impl GaussianSpec {
    pub fn new(sigma: f64, size: usize) -> Result<Self> {
        let spec = Self { sigma, size };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::param(format!(
                "gaussian sigma {} must be > 0",
                self.sigma
            )));
        }
        if self.size < 3 || self.size.is_multiple_of(2) {
            return Err(Error::param(format!(
                "gaussian size {} must be odd and ≥ 3",
                self.size
            )));
        }
        Ok(())
    }
}

impl Default for GaussianSpec {
    fn default() -> Self {
        Self {
            sigma: 1.4,
            size: 5,
        }
    }
}

pub fn gaussian_kernel(spec: &GaussianSpec) -> Result<Kernel> {
    spec.validate()?;
    let k = (spec.size / 2) as f64;
    let denom = 2.0 * spec.sigma * spec.sigma;
    let mut weights = Vec::with_capacity(spec.size * spec.size);
    for u in 0..spec.size {
        for v in 0..spec.size {
            let (du, dv) = (u as f64 - k, v as f64 - k);
            weights.push((-(du * du + dv * dv) / denom).exp());
        }
    }
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    Kernel::new(spec.size, weights)
}

/// Gaussian blur, clamped back into the image's range.
pub fn smooth(image: &Image, spec: &GaussianSpec) -> Result<Image> {
    let out = convolve(image, &gaussian_kernel(spec)?);
    Ok(Image::clamped(out, image.max_value()))
}

/// Gradient direction quantized to the four neighbor axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Gradient along rows; compares the pixels above and below.
    Deg0,
    /// Compares the upper-left and lower-right neighbors.
    Deg45,
    /// Gradient along columns; compares left and right.
    Deg90,
    /// Compares the upper-right and lower-left neighbors.
    Deg135,
}

impl Sector {
    pub fn from_angle(radians: f64) -> Self {
        let mut deg = radians.to_degrees() % 180.0;
        if deg < 0.0 {
            deg += 180.0;
        }
        if !(22.5..157.5).contains(&deg) {
            Sector::Deg0
        } else if deg < 67.5 {
            Sector::Deg45
        } else if deg < 112.5 {
            Sector::Deg90
        } else {
            Sector::Deg135
        }
    }

    /// Row/column offset of one neighbor; the other is its negation.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Sector::Deg0 => (1, 0),
            Sector::Deg45 => (1, 1),
            Sector::Deg90 => (0, 1),
            Sector::Deg135 => (-1, 1),
        }
    }
}

/// Non-maximum suppression. A pixel keeps its magnitude when it is at least
/// as large as both neighbors along its quantized direction; ties survive.
pub fn nms(field: &GradientField) -> Field {
    let mag = &field.magnitude;
    let (w, h) = (mag.width(), mag.height());
    Field::from_fn(w, h, |i, j| {
        let m = mag.get(i, j);
        if m == 0.0 {
            return 0.0;
        }
        let (di, dj) = Sector::from_angle(field.direction.get(i, j)).offset();
        let (i, j) = (i as isize, j as isize);
        let fwd = mag.get_clamped(i + di, j + dj);
        let back = mag.get_clamped(i - di, j - dj);
        if m >= fwd && m >= back {
            m
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CannyConfig {
    pub gaussian: GaussianSpec,
    pub threshold: ThresholdSpec,
    /// Weak-edge threshold. When set, `threshold` selects strong edges and
    /// weak ones survive only if 8-connected to a strong edge.
    pub hysteresis_low: Option<ThresholdSpec>,
}

impl CannyConfig {
    pub fn validate(&self) -> Result<()> {
        self.gaussian.validate()?;
        self.threshold.validate()?;
        if let Some(low) = &self.hysteresis_low {
            low.validate()?;
        }
        Ok(())
    }
}

/// Single-threshold Canny.
pub fn canny(image: &Image, spec: &GaussianSpec, thresh: &ThresholdSpec) -> Result<EdgeMap> {
    canny_with(
        image,
        &CannyConfig {
            gaussian: *spec,
            threshold: *thresh,
            hysteresis_low: None,
        },
    )
}

pub fn canny_with(image: &Image, config: &CannyConfig) -> Result<EdgeMap> {
    config.validate()?;
    let smoothed = smooth(image, &config.gaussian)?;
    Ok(suppress_and_threshold(&sobel(&smoothed), config))
}

/// Steps after smoothing, shared with the fuzzy variant.
pub(crate) fn suppress_and_threshold(gradient: &GradientField, config: &CannyConfig) -> EdgeMap {
    let thinned = nms(gradient);
    let strong = threshold_field(&thinned, &config.threshold);
    match &config.hysteresis_low {
        None => strong,
        Some(low) => {
            let weak = threshold_field(&thinned, low);
            hysteresis(&strong, &weak)
        }
    }
}

/// Grows `strong` through 8-connected pixels of `weak`.
fn hysteresis(strong: &EdgeMap, weak: &EdgeMap) -> EdgeMap {
    let (w, h) = (strong.width(), strong.height());
    let mut out = strong.clone();
    let mut stack: Vec<(usize, usize)> = (0..h)
        .flat_map(|i| (0..w).map(move |j| (i, j)))
        .filter(|&(i, j)| strong.get(i, j))
        .collect();
    while let Some((i, j)) = stack.pop() {
        for di in -1isize..=1 {
            for dj in -1isize..=1 {
                let (ni, nj) = (i as isize + di, j as isize + dj);
                if ni < 0 || nj < 0 || ni >= h as isize || nj >= w as isize {
                    continue;
                }
                let (ni, nj) = (ni as usize, nj as usize);
                if weak.get(ni, nj) && !out.get(ni, nj) {
                    out.set(ni, nj, true);
                    stack.push((ni, nj));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::gradient_to_edges;

    #[test]
    fn kernel_normalized() {
        for (s, n) in [(0.5, 3), (1.0, 3), (1.4, 5), (3.0, 7), (2.2, 9)] {
            let k = gaussian_kernel(&GaussianSpec::new(s, n).unwrap()).unwrap();
            assert!((k.sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_sigma_approaches_box() {
        let k = gaussian_kernel(&GaussianSpec::new(1e6, 3).unwrap()).unwrap();
        for &w in k.weights() {
            assert!((w - 1.0 / 9.0).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_symmetry() {
        let k = gaussian_kernel(&GaussianSpec::new(1.4, 5).unwrap()).unwrap();
        let max = k.weights().iter().copied().fold(0.0, f64::max);
        assert_eq!(k.get(2, 2), max);
        for u in 0..5 {
            for v in 0..5 {
                // 90° rotation maps (u, v) to (v, 4 − u).
                assert_eq!(k.get(u, v), k.get(v, 4 - u));
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(GaussianSpec::new(1.0, 4).is_err());
        assert!(GaussianSpec::new(1.0, 1).is_err());
        assert!(GaussianSpec::new(0.0, 3).is_err());
        assert!(gaussian_kernel(&GaussianSpec {
            sigma: -1.0,
            size: 5
        })
        .is_err());
    }

    #[test]
    fn smooth_constant_and_impulse() {
        let c = Image::filled(9, 9, 90.0).unwrap();
        let out = smooth(&c, &GaussianSpec::default()).unwrap();
        for &v in out.pixels() {
            assert!((v - 90.0).abs() < 1e-9);
        }

        let mut px = vec![0.0; 81];
        px[4 * 9 + 4] = 255.0;
        let imp = Image::new(9, 9, px, 255).unwrap();
        let spec = GaussianSpec::default();
        let k = gaussian_kernel(&spec).unwrap();
        let out = smooth(&imp, &spec).unwrap();
        for u in 0..5 {
            for v in 0..5 {
                assert!((out.get(2 + u, 2 + v) - 255.0 * k.get(u, v)).abs() < 1e-9);
            }
        }
        assert_eq!(out.get(0, 0), 0.0);
    }

    #[test]
    fn sector_bins() {
        let d = |deg: f64| Sector::from_angle(deg.to_radians());
        assert_eq!(d(0.0), Sector::Deg0);
        assert_eq!(d(180.0), Sector::Deg0);
        assert_eq!(d(-170.0), Sector::Deg0);
        assert_eq!(d(45.0), Sector::Deg45);
        assert_eq!(d(-135.0), Sector::Deg45);
        assert_eq!(d(90.0), Sector::Deg90);
        assert_eq!(d(-90.0), Sector::Deg90);
        assert_eq!(d(135.0), Sector::Deg135);
        assert_eq!(d(-45.0), Sector::Deg135);
    }

    fn field_from(mag: &[f64], w: usize, gx: f64, gy: f64) -> GradientField {
        // Scale a fixed direction vector to each magnitude.
        let norm = (gx * gx + gy * gy).sqrt();
        let h = mag.len() / w;
        let fx = Field::new(w, h, mag.iter().map(|m| m * gx / norm).collect()).unwrap();
        let fy = Field::new(w, h, mag.iter().map(|m| m * gy / norm).collect()).unwrap();
        GradientField::from_components(fx, fy).unwrap()
    }

    #[test]
    fn nms_local_max_along_direction() {
        // Gradient along columns: compares left/right.
        let g = field_from(&[1.0, 5.0, 1.0], 3, 0.0, 1.0);
        let out = nms(&g);
        assert_eq!(out.data()[0], 0.0);
        assert_eq!(out.data()[2], 0.0);
        assert!((out.data()[1] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn nms_keeps_plateau() {
        let g = field_from(&[3.0; 16], 4, 1.0, 1.0);
        let out = nms(&g);
        for (&a, &b) in out.data().iter().zip(g.magnitude.data()) {
            assert_eq!(a, b);
        }
    }

    fn vstep(w: usize, h: usize, col: usize) -> Image {
        Image::new(
            w,
            h,
            (0..w * h)
                .map(|k| if k % w >= col { 200.0 } else { 0.0 })
                .collect(),
            255,
        )
        .unwrap()
    }

    #[test]
    fn canny_constant_empty() {
        let im = Image::filled(16, 16, 123.0).unwrap();
        let m = canny(&im, &GaussianSpec::default(), &ThresholdSpec::default()).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn canny_step_is_thin_line() {
        let im = vstep(32, 32, 16);
        let m = canny(&im, &GaussianSpec::default(), &ThresholdSpec::default()).unwrap();
        for i in 1..31 {
            let cols: Vec<usize> = (0..32).filter(|&j| m.get(i, j)).collect();
            assert!(!cols.is_empty() && cols.len() <= 2, "row {i}: {cols:?}");
            assert!(
                cols.iter().all(|&j| (15..=17).contains(&j)),
                "row {i}: {cols:?}"
            );
        }
    }

    #[test]
    fn canny_subset_of_unsuppressed() {
        let im = Image::new(
            24,
            24,
            (0..576)
                .map(|k| f64::from((k * 7919 % 256) as u32))
                .collect(),
            255,
        )
        .unwrap();
        let spec = GaussianSpec::default();
        let t = ThresholdSpec::default();
        let c = canny(&im, &spec, &t).unwrap();
        let full = gradient_to_edges(&sobel(&smooth(&im, &spec).unwrap()), &t);
        assert!(c.is_subset_of(&full));
        assert_eq!(c, canny(&im, &spec, &t).unwrap());
    }

    #[test]
    fn hysteresis_extends_strong_edges() {
        let im = vstep(32, 32, 16);
        let base = CannyConfig::default();
        let single = canny_with(&im, &base).unwrap();
        let with_h = canny_with(
            &im,
            &CannyConfig {
                hysteresis_low: Some(ThresholdSpec::fraction(0.05).unwrap()),
                ..base
            },
        )
        .unwrap();
        assert!(single.is_subset_of(&with_h));
    }
}
