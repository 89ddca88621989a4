#![no_main]
use libfuzzer_sys::fuzz_target;

use fhankel::io::{parse_list, parse_n_list};

fuzz_target!(|data: &str| {
    if let Ok(v) = parse_list(data) {
        let again = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let w = parse_list(&again).expect("rendered list parses");
        assert_eq!(v.len(), w.len());
        for (a, b) in v.iter().zip(&w) {
            assert!(a == b || (a.is_nan() && b.is_nan()));
        }
    }
    if let Ok(v) = parse_n_list(data) {
        assert!(v.iter().all(|&n| n > 0));
    }
});
