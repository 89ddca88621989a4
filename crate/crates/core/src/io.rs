//! Text formats: comma-separated number lists, a one-line symbol
//! description, and the CSV form of convergence records.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rug::Float;

use crate::ensembles::{SymbolSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};

/// CSV header, in column order.
pub const RECORD_HEADER: [&str; 10] = [
    "weight_kind",
    "alpha",
    "m",
    "q",
    "mu",
    "N",
    "precision_bits",
    "log_calH_exact",
    "log_calH_ff",
    "rel_error",
];

fn parse_f64(tok: &str) -> Result<f64> {
    let t = tok.trim();
    let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("not a finite number: {t:?}")));
    }
    Ok(v)
}

fn parse_sep_list(s: &str, sep: char) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(sep).map(parse_f64).collect()
}

/// `"1, 2.5,3"` to `[1.0, 2.5, 3.0]`. The empty string is the empty list;
/// empty items are errors.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    parse_sep_list(s, ',')
}

/// Comma-separated positive integers.
pub fn parse_n_list(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(0) | Err(_) => Err(Error::Parse(format!("not a positive integer: {t:?}"))),
                Ok(n) => Ok(n),
            }
        })
        .collect()
}

fn join(v: &[f64], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// `hermite N=10 q=1,2 mu=0.1,-0.3` or `laguerre alpha=1.5 N=4 q=1 mu=0.5`.
/// Keys may come in any order; `alpha` defaults to 0.
impl FromStr for SymbolSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut toks = s.split_whitespace();
        let kind: WeightKind = toks
            .next()
            .ok_or_else(|| Error::Parse("empty symbol description".into()))?
            .parse()?;
        let (mut alpha, mut n, mut q, mut mu) = (None, None, None, None);
        for tok in toks {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            let dup = match key {
                "alpha" => alpha.replace(parse_f64(val)?).is_some(),
                "N" => {
                    let v = val
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad N: {val:?}")))?;
                    n.replace(v).is_some()
                }
                "q" => q.replace(parse_list(val)?).is_some(),
                "mu" => mu.replace(parse_list(val)?).is_some(),
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            };
            if dup {
                return Err(Error::Parse(format!("repeated key {key:?}")));
            }
        }
        let missing = |k: &str| Error::Parse(format!("missing {k}"));
        let weight = WeightSpec::new(kind, alpha.unwrap_or(0.0), n.ok_or_else(|| missing("N"))?)?;
        SymbolSpec::new(weight, q.ok_or_else(|| missing("q"))?, mu.ok_or_else(|| missing("mu"))?)
    }
}

impl fmt::Display for SymbolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.weight();
        write!(f, "{}", w.kind())?;
        if w.kind() == WeightKind::Laguerre {
            write!(f, " alpha={}", w.alpha())?;
        }
        write!(f, " N={} q={} mu={}", w.n(), join(self.q(), ","), join(self.mu(), ","))
    }
}

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub weight_kind: WeightKind,
    pub alpha: f64,
    pub q: Vec<f64>,
    pub mu: Vec<f64>,
    pub n: u64,
    pub precision_bits: u32,
    pub log_calh_exact: Float,
    pub log_calh_ff: Float,
    pub rel_error: f64,
}

impl ConvergenceRecord {
    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn spec(&self) -> Result<SymbolSpec> {
        SymbolSpec::new(
            WeightSpec::new(self.weight_kind, self.alpha, self.n)?,
            self.q.clone(),
            self.mu.clone(),
        )
    }

    /// Significant digits used for numbers: `max(bits / 3.3, 17)`.
    pub fn digits(&self) -> usize {
        ((self.precision_bits as f64 / 3.3) as usize).max(17)
    }

    fn fields(&self) -> [String; 10] {
        let d = self.digits();
        let num = |x: f64| format!("{:.*e}", d - 1, x);
        let vec = |v: &[f64]| v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";");
        [
            self.weight_kind.to_string(),
            num(self.alpha),
            self.m().to_string(),
            vec(&self.q),
            vec(&self.mu),
            self.n.to_string(),
            self.precision_bits.to_string(),
            // rug counts all significant digits, f64 only those after the point
            format!("{:.*e}", d, self.log_calh_exact),
            format!("{:.*e}", d, self.log_calh_ff),
            num(self.rel_error),
        ]
    }

    fn from_fields(f: &csv::StringRecord) -> Result<Self> {
        if f.len() != RECORD_HEADER.len() {
            return Err(Error::Parse(format!("expected 10 fields, got {}", f.len())));
        }
        let int = |i: usize| -> Result<u64> {
            f[i].trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: not an integer: {:?}", RECORD_HEADER[i], &f[i])))
        };
        let precision_bits = u32::try_from(int(6)?)
            .ok()
            .filter(|b| (2..=1 << 20).contains(b))
            .ok_or_else(|| Error::Parse(format!("precision_bits out of range: {:?}", &f[6])))?;
        let big = |i: usize| -> Result<Float> {
            let v = Float::parse(f[i].trim())
                .map(|p| Float::with_val(precision_bits, p))
                .map_err(|e| Error::Parse(format!("{}: {e}", RECORD_HEADER[i])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse(format!("{}: not finite", RECORD_HEADER[i])))
            }
        };
        let rec = ConvergenceRecord {
            weight_kind: f[0].trim().parse()?,
            alpha: parse_f64(&f[1])?,
            q: parse_sep_list(&f[3], ';')?,
            mu: parse_sep_list(&f[4], ';')?,
            n: int(5)?,
            precision_bits,
            log_calh_exact: big(7)?,
            log_calh_ff: big(8)?,
            rel_error: parse_f64(&f[9])?,
        };
        if int(2)? != rec.q.len() as u64 {
            return Err(Error::Parse(format!("m = {} but {} q values", &f[2], rec.q.len())));
        }
        if rec.rel_error < 0.0 {
            return Err(Error::Parse("rel_error must be non-negative".into()));
        }
        rec.spec()?;
        Ok(rec)
    }
}

/// Writes the header and one line per record.
pub fn write_records<W: Write>(out: W, records: &[ConvergenceRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("CSV write: {e}"));
    w.write_record(RECORD_HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.fields()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("CSV write: {e}")))
}

pub fn records_to_string(records: &[ConvergenceRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads records, requiring the exact header.
pub fn read_records<R: Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(|e| Error::Parse(format!("CSV header: {e}")))?;
    if header.iter().ne(RECORD_HEADER.iter().copied()) {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    r.records()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(format!("CSV row: {e}")))?;
            ConvergenceRecord::from_fields(&row)
        })
        .collect()
}
