//! Replays the fuzz corpus, and every prefix of each seed, through the
//! invariants the fuzz targets assert.

use std::fs;
use std::path::Path;

use fhankel::ensembles::SymbolSpec;
use fhankel::io::{parse_list, parse_n_list, read_records, records_to_string};

fn seeds(dir: &str) -> Vec<Vec<u8>> {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(dir);
    let mut out: Vec<Vec<u8>> = fs::read_dir(&p)
        .unwrap_or_else(|e| panic!("{}: {e}", p.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    assert!(!out.is_empty());
    let prefixes: Vec<Vec<u8>> = out.iter().flat_map(|s| (0..s.len()).map(|k| s[..k].to_vec())).collect();
    out.extend(prefixes);
    out
}

#[test]
fn lists() {
    for s in seeds("lists") {
        let Ok(s) = std::str::from_utf8(&s) else { continue };
        if let Ok(v) = parse_list(s) {
            let again = v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            let w = parse_list(&again).unwrap();
            assert!(v.iter().zip(&w).all(|(a, b)| a == b || (a.is_nan() && b.is_nan())));
            assert_eq!(v.len(), w.len());
        }
        if let Ok(v) = parse_n_list(s) {
            assert!(v.iter().all(|&n| n > 0));
        }
    }
}

#[test]
fn records() {
    let mut parsed = 0;
    for s in seeds("records") {
        if let Ok(recs) = read_records(&s[..]) {
            parsed += 1;
            let text = records_to_string(&recs).unwrap();
            let back = read_records(text.as_bytes()).unwrap();
            assert_eq!(text, records_to_string(&back).unwrap());
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn symbol_specs() {
    for s in seeds("symbol_spec") {
        let Ok(s) = std::str::from_utf8(&s) else { continue };
        if let Ok(spec) = s.parse::<SymbolSpec>() {
            assert_eq!(spec, spec.to_string().parse::<SymbolSpec>().unwrap());
        }
    }
}
