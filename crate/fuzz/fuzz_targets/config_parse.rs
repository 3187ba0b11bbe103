#![no_main]

use libfuzzer_sys::fuzz_target;
use mammo_edge::bench::ConfigFile;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = ConfigFile::parse(text) {
            cfg.settings.validate().unwrap();
        }
    }
});
