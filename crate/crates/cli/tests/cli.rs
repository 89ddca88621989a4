use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhankel"))
        .args(args)
        .env_remove("FHANKEL_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn field(out: &Output, key: &str) -> String {
    let text = String::from_utf8_lossy(&out.stdout);
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

#[test]
fn hermite_centre_is_near_its_limit() {
    let o = run(&["duality", "--N", "400", "--q", "1", "--mu", "0"]);
    assert!(o.status.success());
    let v: f64 = field(&o, "calH").parse().unwrap();
    assert!((v - 2.0 / std::f64::consts::PI).abs() < 1e-3, "{v}");
}

#[test]
fn exact_and_duality_routes_agree() {
    let args = ["--weight", "laguerre", "--alpha", "1", "--N", "20", "--q", "1,1", "--mu", "0.3,0.6"];
    let a = run(&[&["exact"][..], &args].concat());
    let b = run(&[&["duality"][..], &args].concat());
    let ea: f64 = field(&a, "ln_abs_calH").parse().unwrap();
    let eb: f64 = field(&b, "ln_abs_calH").parse().unwrap();
    assert!((ea - eb).abs() < 1e-12 * ea.abs());
    assert_eq!(field(&a, "sign"), field(&b, "sign"));
}

#[test]
fn converge_writes_readable_records() {
    let dir = std::env::temp_dir().join(format!("fhankel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("conv.csv");
    let o = run(&[
        "converge", "--q", "1", "--mu", "0", "--N-list", "400,50,100,200", "--format", "csv",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let recs = fhankel::io::read_records(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![50, 100, 200, 400]);
    for r in fhankel::study::error_ratios(&recs) {
        assert!((r - 0.5).abs() < 0.01);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn contour_check_closes() {
    let o = run(&["contour-check", "--N", "20", "--q", "1", "--mu", "0.2"]);
    assert!(o.status.success());
    let d: f64 = field(&o, "rel_difference").parse().unwrap();
    assert!(d < 1e-8);
}

#[test]
fn log10_rescales() {
    let a = run(&["duality", "--N", "30", "--q", "2", "--mu", "0.1"]);
    let b = run(&["duality", "--N", "30", "--q", "2", "--mu", "0.1", "--log10"]);
    let ln: f64 = field(&a, "ln_abs_calH").parse().unwrap();
    let lg: f64 = field(&b, "log10_abs_calH").parse().unwrap();
    assert!((ln / std::f64::consts::LN_10 - lg).abs() < 1e-12);
}

#[test]
fn bad_input_exits_with_usage_code() {
    for args in [
        &["duality", "--N", "5", "--q", "1,2", "--mu", "0"][..],
        &["duality", "--N", "0", "--q", "1", "--mu", "0"],
        &["duality", "--q", "1", "--mu", "0"],
        &["duality", "--N", "5", "--q", "x", "--mu", "0"],
        &["duality", "--weight", "jacobi", "--N", "5", "--q", "1", "--mu", "0"],
        &["mc", "--weight", "laguerre", "--N", "5", "--q", "1", "--mu", "0.5"],
        &["nonsense"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}
