//! Drivers behind the `dholes` binary: symmetric scans, the bisection for the
//! critical parameter, and JSON/CSV rendering.

use doubling_holes::holes::{test_supercritical, CatalogEntry, Endpoint, Parameter};
use doubling_holes::survivor::{build_automaton_with_budget, classify_automaton};
use doubling_holes::{Classification, Error, Hole, Kind, Rational, Result, TrapReport};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub const DEFAULT_MAX_STATES: usize = 1 << 18;
pub const MAX_BISECT_PRECISION: u32 = 24;

/// `x` with 12 significant digits, in the style of `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Classify `h`, giving up once the automaton exceeds `max_states`.
pub fn classify_with_budget(h: &Hole, max_states: usize) -> Result<Classification> {
    classify_automaton(&build_automaton_with_budget(h, max_states)?)
}

/// The symmetric hole `(a, 1 - a)`.
pub fn symmetric_hole(a: &Rational) -> Result<Hole> {
    Hole::new(a.clone(), a.complement())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub a: Rational,
    pub kind: Kind,
    pub entropy_lo: f64,
    pub entropy_hi: f64,
    pub dimension: f64,
}

impl ScanRow {
    pub fn csv_header() -> &'static str {
        "a,kind,entropy_lo,entropy_hi,dimension"
    }

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.a,
            self.kind,
            fmt_sig(self.entropy_lo),
            fmt_sig(self.entropy_hi),
            fmt_sig(self.dimension)
        )
    }

    pub fn json(&self) -> Value {
        json!({
            "a": self.a.to_string(),
            "kind": self.kind.as_str(),
            "entropy_lo": self.entropy_lo,
            "entropy_hi": self.entropy_hi,
            "dimension": self.dimension,
        })
    }
}

/// Symmetric holes `(a, 1 - a)` over the grid `a = k / 2^m` within
/// `[a_min, a_max]` and below 1/2.
pub fn scan(a_min: &Rational, a_max: &Rational, m: u64, max_states: usize) -> Result<Vec<ScanRow>> {
    if m > 62 {
        return Err(Error::Argument("grid exponent must be at most 62".into()));
    }
    let half = Rational::half();
    let full = 1u64 << m;
    let grid: Vec<Rational> = (0..full)
        .map(|k| Rational::dyadic(k, m).expect("k < 2^m"))
        .filter(|a| a >= a_min && a <= a_max && *a < half)
        .collect();
    if grid.is_empty() {
        return Err(Error::Argument(format!("no grid points k/2^{m} in [{a_min}, {a_max}] below 1/2")));
    }
    grid.par_iter()
        .map(|a| {
            let c = classify_with_budget(&symmetric_hole(a)?, max_states)?;
            Ok(ScanRow {
                a: a.clone(),
                kind: c.kind,
                entropy_lo: c.entropy.lo,
                entropy_hi: c.entropy.hi,
                dimension: c.dimension(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: Rational,
    pub hi: Rational,
}

impl Bracket {
    pub fn json(&self, complete: bool) -> Value {
        json!({
            "lo": self.lo.to_string(),
            "hi": self.hi.to_string(),
            "lo_value": self.lo.to_f64(),
            "hi_value": self.hi.to_f64(),
            "complete": complete,
        })
    }
}

#[derive(Debug)]
pub enum BisectError {
    Argument(String),
    Budget { partial: Box<Bracket>, message: String },
}

/// Dyadic bracket of width `2^-precision` around the symmetric critical
/// parameter: holes `(a, 1 - a)` have positive entropy at `hi` but not at `lo`.
pub fn bisect_astar(precision: u32, max_states: usize) -> std::result::Result<Bracket, BisectError> {
    if precision == 0 || precision > MAX_BISECT_PRECISION {
        return Err(BisectError::Argument(format!("precision must lie in 1..={MAX_BISECT_PRECISION}")));
    }
    // (1/4, 3/4) leaves only the fixed point; 1/2 stands for the empty hole.
    let (mut lo, mut hi) = (1u64, 2u64);
    let mut m = 2u64;
    while m < precision as u64 {
        lo *= 2;
        hi *= 2;
        m += 1;
        let mid = lo + 1;
        let a = Rational::dyadic(mid, m).expect("below 1");
        let verdict = symmetric_hole(&a).and_then(|h| classify_with_budget(&h, max_states));
        match verdict {
            Ok(c) if c.kind == Kind::PositiveEntropy => hi = mid,
            Ok(_) => lo = mid,
            Err(e) => {
                let partial = Box::new(Bracket { lo: Rational::dyadic(lo, m).unwrap(), hi: Rational::dyadic(hi, m).unwrap() });
                return Err(match e {
                    Error::Budget(message) => BisectError::Budget { partial, message },
                    other => BisectError::Argument(other.to_string()),
                });
            }
        }
    }
    Ok(Bracket { lo: Rational::dyadic(lo, m).unwrap(), hi: Rational::dyadic(hi, m).unwrap() })
}

pub fn classification_json(h: &Hole, c: &Classification) -> Value {
    json!({
        "a": h.a().to_string(),
        "b": h.b().to_string(),
        "kind": c.kind.as_str(),
        "cycles": c.cycles.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "zero_loop": c.zero_loop,
        "entropy_lo": c.entropy.lo,
        "entropy_hi": c.entropy.hi,
        "dimension": c.dimension(),
        "states": c.states,
    })
}

pub fn endpoint_json(e: &Endpoint) -> Value {
    match e {
        Endpoint::Exact(x) => json!(x.to_string()),
        Endpoint::Bracket { lo, hi } => json!({ "lo": lo.to_string(), "hi": hi.to_string() }),
    }
}

fn parameter_json(p: &Parameter) -> Value {
    match p {
        Parameter::Cf(cf) => json!(cf.to_string()),
        Parameter::Alpha(a) => json!(a.to_string()),
        Parameter::None => Value::Null,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub family: String,
    pub left: Value,
    pub right: Value,
    pub parameter: Value,
    pub certified: Option<bool>,
    pub epsilon: Option<String>,
}

/// Render catalogue entries, certifying each one at `eps` when asked.
pub fn catalog_rows(entries: &[CatalogEntry], certify: Option<&Rational>) -> Result<Vec<CatalogRow>> {
    entries
        .par_iter()
        .map(|e| {
            let certified = match certify {
                Some(eps) => Some(test_supercritical(&e.left, &e.right, eps)?.pass),
                None => None,
            };
            Ok(CatalogRow {
                family: e.family.as_str().to_string(),
                left: endpoint_json(&e.left),
                right: endpoint_json(&e.right),
                parameter: parameter_json(&e.parameter),
                certified,
                epsilon: certify.map(|x| x.to_string()),
            })
        })
        .collect()
}

fn endpoint_csv(e: &Endpoint) -> String {
    match e {
        Endpoint::Exact(x) => x.to_string(),
        Endpoint::Bracket { lo, hi } => format!("[{lo} {hi}]"),
    }
}

pub fn catalog_csv(entries: &[CatalogEntry], rows: &[CatalogRow]) -> String {
    let mut out = String::from("family,left,right,parameter,certified,epsilon\n");
    for (e, r) in entries.iter().zip(rows) {
        let param = match &e.parameter {
            Parameter::None => String::new(),
            p => p.to_string().replace(',', " "),
        };
        let cert = r.certified.map(|c| c.to_string()).unwrap_or_default();
        let eps = r.epsilon.clone().unwrap_or_default();
        out.push_str(&format!("{},{},{},{param},{cert},{eps}\n", r.family, endpoint_csv(&e.left), endpoint_csv(&e.right)));
    }
    out
}

pub fn trap_json(c: &Rational, d: &Rational, depth: usize, rep: &TrapReport) -> Value {
    json!({
        "c": c.to_string(),
        "d": d.to_string(),
        "depth": depth,
        "trapped": rep.trapped(),
        "verdict": rep.verdict.to_string(),
        "residual_measure": rep.residual_measure.to_string(),
        "escape_witness": rep.escape_witness.as_ref().map(|w| w.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.48121182505960325), "0.48121182506");
        assert_eq!(fmt_sig(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(fmt_sig(1234.5), "1234.5");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig(2.0e13), "2e+13");
        assert_eq!(fmt_sig(-0.25), "-0.25");
    }

    #[test]
    fn coarse_bisection() {
        let b = bisect_astar(4, DEFAULT_MAX_STATES).unwrap();
        assert_eq!((b.lo.to_string(), b.hi.to_string()), ("3/8".into(), "7/16".into()));
        assert!(matches!(bisect_astar(25, DEFAULT_MAX_STATES), Err(BisectError::Argument(_))));
    }

    #[test]
    fn tiny_budget_reports_a_partial_bracket() {
        match bisect_astar(12, 3) {
            Err(BisectError::Budget { partial, .. }) => assert!(partial.lo < partial.hi),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scan_rows_are_consistent() {
        let rows = scan(&"1/4".parse().unwrap(), &"7/16".parse().unwrap(), 5, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(rows.len(), 7);
        for r in &rows {
            assert!(r.entropy_lo <= r.entropy_hi);
            assert_eq!(r.kind == Kind::PositiveEntropy, r.entropy_lo > 0.0);
        }
        assert!(scan(&"1/2".parse().unwrap(), &"3/4".parse().unwrap(), 4, DEFAULT_MAX_STATES).is_err());
    }
}
