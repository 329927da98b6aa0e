#![no_main]

use libfuzzer_sys::fuzz_target;

use excon::dsl::{parse, print};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse(src) {
        // whatever parses must survive the printer
        let printed = print(&file);
        let again = parse(&printed).expect("printer output parses");
        assert_eq!(file, again);
        assert_eq!(printed, print(&again));
    }
});
