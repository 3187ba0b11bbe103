//! Deterministic synthetic mammogram-like phantoms.
//!
//! Each phantom has a dark film background, a half-elliptical breast region
//! against one side with a soft skin-line falloff, blob-shaped
//! fibroglandular texture, a bright pectoral triangle in the upper corner on
//! the chest-wall side, a round mass, a small film label, and film grain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::raster::{Field, Image};

struct Blob {
    ci: f64,
    cj: f64,
    radius: f64,
    amp: f64,
}

/// Square `size`×`size` phantom; the same `(size, seed)` always yields the
/// same bytes.
pub fn phantom(size: usize, seed: u64) -> Image {
    assert!(size >= 8, "phantom needs at least 8 pixels per side");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = size as f64;
    let mirror = rng.gen_bool(0.5);

    // Breast: semi-ellipse centred on the chest wall (column 0 before mirroring).
    let semi_i = n * rng.gen_range(0.38..0.46);
    let semi_j = n * rng.gen_range(0.55..0.75);
    let centre_i = n * rng.gen_range(0.48..0.56);
    let tissue = rng.gen_range(95.0..135.0);

    let pect_i = n * rng.gen_range(0.25..0.4);
    let pect_j = n * rng.gen_range(0.15..0.28);
    let pect_level = rng.gen_range(185.0..215.0);

    let blobs: Vec<Blob> = (0..12)
        .map(|_| Blob {
            ci: centre_i + semi_i * rng.gen_range(-0.7..0.7),
            cj: semi_j * rng.gen_range(0.1..0.7),
            radius: n * rng.gen_range(0.02..0.07),
            amp: rng.gen_range(-20.0..35.0),
        })
        .collect();
    let mass = Blob {
        ci: centre_i + semi_i * rng.gen_range(-0.35..0.35),
        cj: semi_j * rng.gen_range(0.3..0.6),
        radius: n * rng.gen_range(0.03..0.05),
        amp: rng.gen_range(45.0..70.0),
    };
    let label_i = (n * 0.85) as usize;
    let label_j = (n * 0.8) as usize;
    let label_h = (size / 16).max(1);
    let label_w = (size / 8).max(1);

    let mut noise: Vec<f64> = (0..size * size).map(|_| rng.gen_range(-4.0..4.0)).collect();
    noise.iter_mut().for_each(|v| *v = v.round());

    let field = Field::from_fn(size, size, |i, jj| {
        let j = if mirror { size - 1 - jj } else { jj };
        let (fi, fj) = (i as f64, j as f64);
        let mut v = 6.0;

        let r = ((fi - centre_i) / semi_i).powi(2) + (fj / semi_j).powi(2);
        if r < 1.0 {
            // Thinner tissue near the skin line.
            let falloff = (1.0 - r).sqrt().min(0.35) / 0.35;
            let mut t = tissue * (0.55 + 0.45 * falloff);
            for b in &blobs {
                let d2 = (fi - b.ci).powi(2) + (fj - b.cj).powi(2);
                t += b.amp * (-d2 / (2.0 * b.radius * b.radius)).exp();
            }
            let d2 = (fi - mass.ci).powi(2) + (fj - mass.cj).powi(2);
            if d2 < mass.radius * mass.radius {
                t += mass.amp;
            } else {
                t += mass.amp * (-(d2.sqrt() - mass.radius).powi(2) / 8.0).exp();
            }
            v = t;
        }
        if fi / pect_i + fj / pect_j < 1.0 {
            v = pect_level;
        }
        if (label_i..label_i + label_h).contains(&i) && (label_j..label_j + label_w).contains(&jj) {
            v = 240.0;
        }
        (v + noise[i * size + jj]).round().clamp(0.0, 255.0)
    });
    Image::from_field(field, 255).expect("clamped")
}
