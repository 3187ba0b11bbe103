#![no_main]

use libfuzzer_sys::fuzz_target;
use mammo_edge::raster::{load_pgm, save_pgm};

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = load_pgm(data) {
        assert!(img.pixels().iter().all(|&v| v <= img.max_value() as f64));
        assert_eq!(load_pgm(&save_pgm(&img)).unwrap(), img);
    }
});
