//! Grayscale rasters, 3×3 neighborhoods and 2-D correlation.
//!
//! All neighborhood reads use a replicate border: coordinates outside the
//! frame are clamped to the nearest valid pixel.

mod pgm;

pub use pgm::{load_pgm, read_pgm_file, save_pgm, write_pgm_file, PgmError};

use crate::error::{Error, Result};

/// A dense row-major grid of `f64` values with no range constraint.
///
/// Intermediate responses (convolution outputs, gradients, deviations) live
/// here; only [`Image`] enforces the gray-level range.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimensions(format!("empty raster {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::Dimensions(format!(
                "{} values for a {width}x{height} raster",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        assert!(width > 0 && height > 0, "empty raster");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "empty raster");
        let mut data = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                data.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Value at row `i`, column `j`. Panics when out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.height && j < self.width);
        self.data[i * self.width + j]
    }

    /// Value at a signed coordinate, clamped into the frame.
    #[inline]
    pub fn get_clamped(&self, i: isize, j: isize) -> f64 {
        let i = i.clamp(0, self.height as isize - 1) as usize;
        let j = j.clamp(0, self.width as isize - 1) as usize;
        self.data[i * self.width + j]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn same_shape<T: Shape>(&self, other: &T) -> bool {
        self.width == other.width() && self.height == other.height()
    }
}

/// Anything with raster dimensions.
pub trait Shape {
    fn width(&self) -> usize;
    fn height(&self) -> usize;
}

impl Shape for Field {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
}

/// A grayscale image with intensities in `[0, max_value]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    field: Field,
    max_value: u8,
}

impl Image {
    /// Builds an image, rejecting values outside `[0, max_value]` or NaN.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>, max_value: u8) -> Result<Self> {
        let field = Field::new(width, height, pixels)?;
        Self::from_field(field, max_value)
    }

    pub fn from_field(field: Field, max_value: u8) -> Result<Self> {
        let limit = f64::from(max_value);
        if let Some(bad) = field.data.iter().find(|v| !(0.0..=limit).contains(*v)) {
            return Err(Error::Range(format!(
                "pixel value {bad} outside [0, {limit}]"
            )));
        }
        Ok(Self { field, max_value })
    }

    /// 8-bit image from raw bytes.
    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(
            width,
            height,
            bytes.iter().map(|&b| f64::from(b)).collect(),
            255,
        )
    }

    /// Clamps every value into `[0, max_value]`. NaN maps to 0.
    pub fn clamped(field: Field, max_value: u8) -> Self {
        let limit = f64::from(max_value);
        let field = field.map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, limit) });
        Self { field, max_value }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::from_field(Field::filled(width, height, value), 255)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.field.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.field.height
    }

    #[inline]
    pub fn max_value(&self) -> u8 {
        self.max_value
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.field.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.field.get(i, j)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn into_field(self) -> Field {
        self.field
    }

    /// Transposed copy; used by orientation tests.
    pub fn transpose(&self) -> Image {
        let f = &self.field;
        Image {
            field: Field::from_fn(f.height, f.width, |i, j| f.get(j, i)),
            max_value: self.max_value,
        }
    }

    /// Pixels rounded half-up to bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.field.data.iter().map(|&v| quantize(v)).collect()
    }
}

impl Shape for Image {
    fn width(&self) -> usize {
        self.field.width
    }
    fn height(&self) -> usize {
        self.field.height
    }
}

#[inline]
pub(crate) fn quantize(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Binary edge raster; serializes as 0 (background) / 255 (edge).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl EdgeMap {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(Error::Dimensions(format!(
                "{} bits for a {width}x{height} edge map",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "empty raster");
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut map = Self::empty(width, height);
        for i in 0..height {
            for j in 0..width {
                map.bits[i * width + j] = f(i, j);
            }
        }
        map
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.height && j < self.width);
        self.bits[i * self.width + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.height && j < self.width);
        self.bits[i * self.width + j] = value;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// True when every edge pixel of `self` is also an edge in `other`.
    pub fn is_subset_of(&self, other: &EdgeMap) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// Clears the outermost one-pixel frame.
    pub fn clear_border(&mut self) {
        let (w, h) = (self.width, self.height);
        for j in 0..w {
            self.bits[j] = false;
            self.bits[(h - 1) * w + j] = false;
        }
        for i in 0..h {
            self.bits[i * w] = false;
            self.bits[i * w + w - 1] = false;
        }
    }

    /// The map as an image with values 0 and 255.
    pub fn to_image(&self) -> Image {
        let data = self
            .bits
            .iter()
            .map(|&b| if b { 255.0 } else { 0.0 })
            .collect();
        Image {
            field: Field {
                width: self.width,
                height: self.height,
                data,
            },
            max_value: 255,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect()
    }
}

impl Shape for EdgeMap {
    fn width(&self) -> usize {
        self.width
    }
    fn height(&self) -> usize {
        self.height
    }
}

/// Square correlation mask with odd side length.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    size: usize,
    weights: Vec<f64>,
}

impl Kernel {
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(Error::Parameter(format!("kernel size {size} must be odd")));
        }
        if weights.len() != size * size {
            return Err(Error::Dimensions(format!(
                "{} weights for a {size}x{size} kernel",
                weights.len()
            )));
        }
        Ok(Self { size, weights })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut weights = vec![0.0; size * size];
        if size % 2 == 1 {
            weights[size * size / 2] = 1.0;
        }
        Self::new(size, weights)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn radius(&self) -> usize {
        self.size / 2
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.weights[u * self.size + v]
    }

    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// The eight neighbors of a pixel, labeled clockwise from the top-left.
///
/// ```text
/// a0 a1 a2
/// a7  c a3
/// a6 a5 a4
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window3 {
    pub a: [f64; 8],
    pub center: f64,
}

/// Row/column offsets of `a0..a7`.
pub const NEIGHBOR_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
];

impl Window3 {
    #[inline]
    pub(crate) fn at(field: &Field, i: usize, j: usize) -> Self {
        let (i, j) = (i as isize, j as isize);
        let mut a = [0.0; 8];
        for (slot, (di, dj)) in a.iter_mut().zip(NEIGHBOR_OFFSETS) {
            *slot = field.get_clamped(i + di, j + dj);
        }
        Self {
            a,
            center: field.get_clamped(i, j),
        }
    }

    /// Weighted sum with a 3×3 row-major mask, in correlation orientation.
    pub fn apply(&self, mask: &[f64; 9]) -> f64 {
        let a = &self.a;
        mask[0] * a[0]
            + mask[1] * a[1]
            + mask[2] * a[2]
            + mask[3] * a[7]
            + mask[4] * self.center
            + mask[5] * a[3]
            + mask[6] * a[6]
            + mask[7] * a[5]
            + mask[8] * a[4]
    }
}

/// Reads the 3×3 neighborhood of `(i, j)` with replicate borders.
pub fn window3(image: &Image, i: usize, j: usize) -> Result<Window3> {
    if i >= image.height() || j >= image.width() {
        return Err(Error::Index {
            row: i,
            col: j,
            width: image.width(),
            height: image.height(),
        });
    }
    Ok(Window3::at(image.field(), i, j))
}

/// Correlates `image` with `kernel`; see [`convolve_field`].
pub fn convolve(image: &Image, kernel: &Kernel) -> Field {
    convolve_field(image.field(), kernel)
}

/// `out[i,j] = Σ k[u,v] · f[i+u−r, j+v−r]` with `r = size/2` and replicate
/// borders. The mask is not flipped.
pub fn convolve_field(field: &Field, kernel: &Kernel) -> Field {
    let (w, h) = (field.width, field.height);
    let r = kernel.radius() as isize;
    let size = kernel.size();
    let mut out = Vec::with_capacity(w * h);
    // Interior rows/cols read without clamping.
    let interior = |i: usize, j: usize| {
        i as isize >= r
            && j as isize >= r
            && (i as isize + r) < h as isize
            && (j as isize + r) < w as isize
    };
    for i in 0..h {
        for j in 0..w {
            let mut acc = 0.0;
            if interior(i, j) {
                let top = i - r as usize;
                let left = j - r as usize;
                for u in 0..size {
                    let row = &field.data[(top + u) * w + left..(top + u) * w + left + size];
                    let krow = &kernel.weights[u * size..(u + 1) * size];
                    for (k, v) in krow.iter().zip(row) {
                        acc += k * v;
                    }
                }
            } else {
                for u in 0..size {
                    for v in 0..size {
                        acc += kernel.weights[u * size + v]
                            * field.get_clamped(
                                i as isize + u as isize - r,
                                j as isize + v as isize - r,
                            );
                    }
                }
            }
            out.push(acc);
        }
    }
    Field {
        width: w,
        height: h,
        data: out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn img3() -> Image {
        Image::new(3, 3, (1..=9).map(f64::from).collect(), 255).unwrap()
    }

    #[test]
    fn window_labels_clockwise() {
        let w = window3(&img3(), 1, 1).unwrap();
        assert_eq!(w.a, [1.0, 2.0, 3.0, 6.0, 9.0, 8.0, 7.0, 4.0]);
        assert_eq!(w.center, 5.0);
    }

    #[test]
    fn window_replicates_at_corner() {
        let w = window3(&img3(), 0, 0).unwrap();
        // a0, a1, a7 clamp onto (0,0); a2 onto (0,1); a6 onto (1,0).
        assert_eq!(w.a[0], 1.0);
        assert_eq!(w.a[1], 1.0);
        assert_eq!(w.a[7], 1.0);
        assert_eq!(w.a[2], 2.0);
        assert_eq!(w.a[3], 2.0);
        assert_eq!(w.a[4], 5.0);
        assert_eq!(w.a[5], 4.0);
        assert_eq!(w.a[6], 4.0);
    }

    #[test]
    fn window_on_single_pixel() {
        let img = Image::new(1, 1, vec![42.0], 255).unwrap();
        let w = window3(&img, 0, 0).unwrap();
        assert!(w.a.iter().all(|&v| v == 42.0));
        assert_eq!(w.center, 42.0);
    }

    #[test]
    fn window_out_of_range() {
        assert!(matches!(window3(&img3(), 3, 0), Err(Error::Index { .. })));
        assert!(matches!(window3(&img3(), 0, 7), Err(Error::Index { .. })));
    }

    #[test]
    fn image_rejects_out_of_range() {
        assert!(Image::new(1, 1, vec![256.0], 255).is_err());
        assert!(Image::new(1, 1, vec![-0.5], 255).is_err());
        assert!(Image::new(1, 1, vec![f64::NAN], 255).is_err());
        assert!(Image::new(2, 1, vec![1.0], 255).is_err());
        assert!(Image::new(0, 0, vec![], 255).is_err());
    }

    #[test]
    fn kernel_requires_odd_size() {
        assert!(Kernel::new(2, vec![0.0; 4]).is_err());
        assert!(Kernel::new(3, vec![0.0; 8]).is_err());
    }

    #[test]
    fn identity_kernel_reproduces_image() {
        let img = img3();
        for size in [1, 3, 5] {
            let out = convolve(&img, &Kernel::identity(size).unwrap());
            assert_eq!(out.data(), img.pixels());
        }
    }

    #[test]
    fn constant_image_scales_by_kernel_sum() {
        let img = Image::filled(7, 5, 12.0).unwrap();
        let k = Kernel::new(3, vec![1.0, 2.0, -1.0, 0.5, 3.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let out = convolve(&img, &k);
        for &v in out.data() {
            assert!((v - 12.0 * k.sum()).abs() < 1e-12);
        }
    }

    #[test]
    fn convolve_matches_quadruple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let img = Image::new(
                8,
                8,
                (0..64).map(|_| f64::from(rng.gen::<u8>())).collect(),
                255,
            )
            .unwrap();
            let k = Kernel::new(3, (0..9).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
            let out = convolve(&img, &k);
            for i in 0..8isize {
                for j in 0..8isize {
                    let mut s = 0.0;
                    for u in 0..3isize {
                        for v in 0..3isize {
                            let ii = (i + u - 1).clamp(0, 7) as usize;
                            let jj = (j + v - 1).clamp(0, 7) as usize;
                            s += k.get(u as usize, v as usize) * img.get(ii, jj);
                        }
                    }
                    assert!((out.get(i as usize, j as usize) - s).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn window_apply_agrees_with_convolve() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let img = Image::new(
            9,
            6,
            (0..54).map(|_| f64::from(rng.gen::<u8>())).collect(),
            255,
        )
        .unwrap();
        let mask: [f64; 9] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let out = convolve(&img, &Kernel::new(3, mask.to_vec()).unwrap());
        for i in 0..6 {
            for j in 0..9 {
                let w = window3(&img, i, j).unwrap();
                assert!((w.apply(&mask) - out.get(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn quantize_rounds_half_up() {
        assert_eq!(quantize(127.6), 128);
        assert_eq!(quantize(127.5), 128);
        assert_eq!(quantize(127.4), 127);
        assert_eq!(quantize(0.0), 0);
        assert_eq!(quantize(255.0), 255);
    }

    #[test]
    fn clear_border_keeps_interior() {
        let mut m = EdgeMap::from_fn(4, 4, |_, _| true);
        m.clear_border();
        assert_eq!(m.count(), 4);
        assert!(m.get(1, 1) && m.get(2, 2));
    }
}
