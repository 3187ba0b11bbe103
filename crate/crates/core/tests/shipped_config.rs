use std::fs;
use std::path::Path;

use mammo_edge::bench::{ConfigFile, DenominatorSpec};
use mammo_edge::detector::{DetectorKind, DetectorSettings};

#[test]
fn shipped_config_matches_defaults() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.cfg");
    let cfg = ConfigFile::parse(&fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(cfg.settings, DetectorSettings::default());
    assert_eq!(cfg.detectors.as_deref(), Some(&DetectorKind::ALL[..]));
    assert_eq!(cfg.jobs, Some(1));
    assert_eq!(cfg.filter, None);
    assert_eq!(cfg.denominator, DenominatorSpec::Full);
}
