#![no_main]

use libfuzzer_sys::fuzz_target;

use excon_cli::report::Report;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = serde_json::from_slice::<Report>(data) {
        let again: Report = serde_json::from_str(&report.to_json()).expect("own output decodes");
        assert_eq!(report, again);
    }
});
