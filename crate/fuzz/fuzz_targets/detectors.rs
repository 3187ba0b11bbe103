#![no_main]

use libfuzzer_sys::fuzz_target;
use mammo_edge::detector::{DetectorKind, DetectorSettings};
use mammo_edge::raster::load_pgm;

fuzz_target!(|data: &[u8]| {
    let Ok(img) = load_pgm(data) else { return };
    if img.width() * img.height() > 4096 {
        return;
    }
    let settings = DetectorSettings::default();
    for kind in DetectorKind::ALL {
        let e = settings.run(kind, &img).unwrap();
        assert_eq!((e.width(), e.height()), (img.width(), img.height()));
    }
});
