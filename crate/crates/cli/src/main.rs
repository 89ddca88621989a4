//! `fhankel`: evaluate ℋ_{N,m,q}(μ) by the exact, dual, contour and
//! asymptotic routes, run convergence studies, and self-check.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fhankel::asymptotics::{boson_rho1_leading, ff_log};
use fhankel::contour::{i_quadrature, assemble_from_dual_integral, ContourSpec};
use fhankel::duality::{calh_duality, lim_f_log};
use fhankel::ensembles::{SymbolSpec, WeightKind, WeightSpec};
use fhankel::hankel_oracle::calh_oracle;
use fhankel::io::{parse_list, parse_n_list, write_records};
use fhankel::mc::mc_expectation;
use fhankel::numerics::{LogSigned, PrecisionContext};
use fhankel::selfcheck::full_suite;
use fhankel::study::{converge, error_ratios};
use fhankel::Error;

#[derive(Parser)]
#[command(name = "fhankel", version, about = "Hankel determinants of Fisher-Hartwig symbols")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// ℋ from the Hankel determinant of exact moments
    Exact(Common),
    /// ℋ from the 2|q|×2|q| confluent duality determinant
    Duality(Common),
    /// Forrester–Frankel leading form, with its factors
    Ff(Common),
    /// Exact against FF over --N-list
    Converge(Common),
    /// Dual contour integral by quadrature, assembled into ℋ
    ContourCheck(Common),
    /// Monte Carlo estimate over GUE spectra (Hermite only)
    Mc(Common),
    /// Leading one-body density matrix of N+1 hard-core bosons at --mu x,y
    DensityMatrix(Common),
    /// Run the full consistency suite
    Selfcheck(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "hermite")]
    weight: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long = "N")]
    n: Option<u64>,
    #[arg(long = "N-list")]
    n_list: Option<String>,
    /// comma-separated exponents
    #[arg(long, default_value = "")]
    q: String,
    /// comma-separated singularity positions
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    mu: String,
    #[arg(long = "precision-bits", env = "FHANKEL_PRECISION_BITS", default_value_t = 256)]
    precision_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// CSV output file
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// report logarithms base 10
    #[arg(long)]
    log10: bool,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("I/O: {e}"))
    }
}

type Out = Result<(), Failure>;

impl Common {
    fn ctx(&self) -> Result<PrecisionContext, Failure> {
        Ok(PrecisionContext::with_bits(self.precision_bits)?)
    }

    fn weight_at(&self, n: u64) -> Result<WeightSpec, Failure> {
        let kind: WeightKind = self.weight.parse()?;
        Ok(WeightSpec::new(kind, self.alpha, n)?)
    }

    fn single_n(&self) -> Result<u64, Failure> {
        match (self.n, &self.n_list) {
            (Some(n), None) => Ok(n),
            (None, _) => Err(Failure::Usage("--N is required".into())),
            (Some(_), Some(_)) => Err(Failure::Usage("give --N or --N-list, not both".into())),
        }
    }

    fn n_values(&self) -> Result<Vec<u64>, Failure> {
        match (self.n, &self.n_list) {
            (None, Some(l)) => {
                let v = parse_n_list(l)?;
                if v.is_empty() {
                    return Err(Failure::Usage("--N-list is empty".into()));
                }
                Ok(v)
            }
            (Some(n), None) => Ok(vec![n]),
            _ => Err(Failure::Usage("give exactly one of --N and --N-list".into())),
        }
    }

    fn spec_at(&self, n: u64) -> Result<SymbolSpec, Failure> {
        Ok(SymbolSpec::new(self.weight_at(n)?, parse_list(&self.q)?, parse_list(&self.mu)?)?)
    }

    fn spec(&self) -> Result<SymbolSpec, Failure> {
        self.spec_at(self.single_n()?)
    }

    fn log_text(&self, v: &LogSigned) -> String {
        let d = ((self.precision_bits as f64 / 3.3) as usize).max(17);
        let mut l = v.log_mag().clone();
        if self.log10 {
            l /= rug::Float::with_val(l.prec(), 10).ln();
        }
        format!("{l:.d$e}")
    }

    fn emit(&self, rows: &[(String, String)]) -> Out {
        let mut buf = String::new();
        match self.format {
            Format::Text => {
                for (k, v) in rows {
                    buf.push_str(&format!("{k}: {v}\n"));
                }
            }
            Format::Csv => {
                buf.push_str("quantity,value\n");
                for (k, v) in rows {
                    buf.push_str(&format!("{k},{v}\n"));
                }
            }
        }
        match &self.out {
            Some(p) => File::create(p)?.write_all(buf.as_bytes())?,
            None => io::stdout().write_all(buf.as_bytes())?,
        }
        Ok(())
    }

    fn log_name(&self, what: &str) -> String {
        format!("{}_{what}", if self.log10 { "log10" } else { "ln" })
    }
}

fn row(k: impl Into<String>, v: impl Into<String>) -> (String, String) {
    (k.into(), v.into())
}

fn print_value(c: &Common, spec: &SymbolSpec, what: &str, v: &LogSigned) -> Out {
    c.emit(&[
        row("spec", spec.to_string()),
        row("route", what),
        row("sign", v.sign().to_string()),
        row(c.log_name("abs_calH"), c.log_text(v)),
        row("calH", format!("{:.17e}", v.to_f64())),
    ])
}

fn cmd_converge(c: &Common) -> Out {
    let ns = c.n_values()?;
    let template = c.spec_at(ns[0])?;
    let recs = converge(&template, &ns, &c.ctx()?)?;
    if let Some(p) = &c.out {
        write_records(File::create(p)?, &recs)?;
    }
    match c.format {
        Format::Csv if c.out.is_none() => write_records(io::stdout(), &recs)?,
        Format::Csv => {}
        Format::Text => {
            let ratios = error_ratios(&recs);
            println!("{template}");
            println!("{:>8}  {:>24}  {:>24}  {:>12}  {:>8}", "N", c.log_name("calH"), c.log_name("FF"), "rel_error", "ratio");
            for (i, r) in recs.iter().enumerate() {
                let ratio = if i == 0 { String::new() } else { format!("{:.4}", ratios[i - 1]) };
                let conv = |x: &rug::Float| {
                    let v = x.to_f64();
                    if c.log10 { v / std::f64::consts::LN_10 } else { v }
                };
                println!(
                    "{:>8}  {:>24.16e}  {:>24.16e}  {:>12.4e}  {:>8}",
                    r.n,
                    conv(&r.log_calh_exact),
                    conv(&r.log_calh_ff),
                    r.rel_error,
                    ratio
                );
            }
        }
    }
    Ok(())
}

fn cmd_contour(c: &Common) -> Out {
    let spec = c.spec()?;
    let ctx = c.ctx()?;
    let contour = ContourSpec::default_for(spec.weight(), ctx.bits());
    let i = i_quadrature(&spec, &contour, &ctx)?;
    let assembled = assemble_from_dual_integral(&spec, &i, &ctx)?;
    let exact = calh_duality(&spec, &ctx)?;
    let rel = if assembled.sign() == exact.sign() {
        (assembled.log_mag_f64() - exact.log_mag_f64()).exp_m1().abs()
    } else {
        f64::INFINITY
    };
    c.emit(&[
        row("spec", spec.to_string()),
        row("contour", format!("{:?}", contour.kind())),
        row("ln_abs_I", format!("{:.17e}", i.ln_abs())),
        row("I_imag_residue", format!("{:.3e}", i.imag_residue())),
        row(c.log_name("calH_contour"), c.log_text(&assembled)),
        row(c.log_name("calH_duality"), c.log_text(&exact)),
        row("rel_difference", format!("{rel:.3e}")),
    ])?;
    if rel < 1e-8 {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("contour closure off by {rel:.3e}")))
    }
}

fn cmd_mc(c: &Common) -> Out {
    let spec = c.spec()?;
    let (m, se) = mc_expectation(&spec, c.samples, c.seed)?;
    let exact = lim_f_log(&spec, &c.ctx()?).ok();
    let mut rows = vec![
        row("spec", spec.to_string()),
        row("samples", c.samples.to_string()),
        row("seed", c.seed.to_string()),
        row("mean", format!("{m:.10e}")),
        row("stderr", format!("{se:.3e}")),
    ];
    if let Some(e) = exact {
        let v = e.to_f64();
        rows.push(row("exact", format!("{v:.10e}")));
        rows.push(row("z_score", format!("{:.3}", (m - v) / se)));
    }
    c.emit(&rows)
}

fn cmd_density(c: &Common) -> Out {
    let n = c.single_n()?;
    let xy = parse_list(&c.mu)?;
    let [x, y] = xy[..] else {
        return Err(Failure::Usage("--mu must give exactly two points x,y".into()));
    };
    let v = boson_rho1_leading(n, x, y, &c.ctx()?)?;
    c.emit(&[
        row("N", n.to_string()),
        row("x", x.to_string()),
        row("y", y.to_string()),
        row(c.log_name("rho1"), c.log_text(&v)),
        row("rho1", format!("{:.17e}", v.to_f64())),
        row("note", "leading order; half-integer exponents are conjectural"),
    ])
}

fn cmd_ff(c: &Common) -> Out {
    let spec = c.spec()?;
    let r = ff_log(&spec, &c.ctx()?)?;
    let mut rows = vec![
        row("spec", spec.to_string()),
        row(c.log_name("FF"), c.log_text(&r.log_value)),
        row("FF", format!("{:.17e}", r.log_value.to_f64())),
        row("N_exponent", r.n_exponent.to_string()),
    ];
    for (l, v) in &r.factors {
        rows.push(row(format!("ln_{l}"), format!("{:.17e}", v.to_f64())));
    }
    c.emit(&rows)
}

fn cmd_selfcheck() -> Out {
    let mut failed = 0;
    for o in full_suite() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failed += 1;
        }
        println!("{tag} {} ({:.1?}) {}", o.name, o.elapsed, o.detail);
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("{failed} checks failed")))
    }
}

fn dispatch(cmd: &Cmd) -> Out {
    match cmd {
        Cmd::Exact(c) => {
            let s = c.spec()?;
            print_value(c, &s, "moment oracle", &calh_oracle(&s, &c.ctx()?)?)
        }
        Cmd::Duality(c) => {
            let s = c.spec()?;
            print_value(c, &s, "duality", &calh_duality(&s, &c.ctx()?)?)
        }
        Cmd::Ff(c) => cmd_ff(c),
        Cmd::Converge(c) => cmd_converge(c),
        Cmd::ContourCheck(c) => cmd_contour(c),
        Cmd::Mc(c) => cmd_mc(c),
        Cmd::DensityMatrix(c) => cmd_density(c),
        Cmd::Selfcheck(c) => {
            c.ctx()?;
            cmd_selfcheck()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("fhankel: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("fhankel: {m}");
            ExitCode::from(1)
        }
    }
}
