//! Edge detection for 8-bit grayscale mammograms.
//!
//! Classical operators (Roberts, Prewitt, Sobel, LoG, Canny), fuzzy hybrids
//! (plain fuzzy contrast, Fuzzy Canny, Fuzzy Relative Pixel, SDGD), objective
//! quality metrics, and a batch harness that writes edge maps and CSV /
//! markdown reports.
//!
//! ```
//! use mammo_edge::{detector::{DetectorKind, DetectorSettings}, raster::load_pgm};
//!
//! let img = load_pgm(b"P2 3 3 255  0 0 200  0 0 200  0 0 200").unwrap();
//! let edges = DetectorSettings::default().run(DetectorKind::Sobel, &img).unwrap();
//! assert_eq!(edges.width(), 3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN.

pub mod bench;
pub mod canny;
pub mod classical;
pub mod detector;
mod error;
pub mod fuzzy;
pub mod metrics;
pub mod raster;
pub mod synth;

pub use error::{Error, Result};
