use std::fs;
use std::path::Path;

use excon_cli::report::Report;

#[test]
fn report_seeds_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/report_json");
    let mut decoded = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let bytes = fs::read(entry.unwrap().path()).unwrap();
        if let Ok(report) = serde_json::from_slice::<Report>(&bytes) {
            let again: Report = serde_json::from_str(&report.to_json()).unwrap();
            assert_eq!(report, again);
            decoded += 1;
        }
    }
    assert!(decoded >= 4);
}
