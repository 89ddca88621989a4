#![no_main]
use libfuzzer_sys::fuzz_target;

use fhankel::io::{read_records, records_to_string};

fuzz_target!(|data: &[u8]| {
    // Whatever parses must render, and rendering must be a fixed point.
    if let Ok(recs) = read_records(data) {
        let text = records_to_string(&recs).expect("parsed records render");
        let back = read_records(text.as_bytes()).expect("rendered records parse");
        assert_eq!(text, records_to_string(&back).unwrap());
    }
});
