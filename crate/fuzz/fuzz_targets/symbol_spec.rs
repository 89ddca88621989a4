#![no_main]
use libfuzzer_sys::fuzz_target;

use fhankel::ensembles::SymbolSpec;

fuzz_target!(|data: &str| {
    if let Ok(s) = data.parse::<SymbolSpec>() {
        let back: SymbolSpec = s.to_string().parse().expect("displayed spec parses");
        assert_eq!(s, back);
    }
});
