use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use doubling_holes::holes::{catalog, gap_interval, sturmian_hole, test_supercritical, Endpoint};
use doubling_holes::survivor::{build_automaton_with_budget, enumerate_surviving_cycles, sigma_n_dimension, sigma_n_entropy};
use doubling_holes::words::{
    characteristic_prefix, cyclic_extremes, determined_length, farey_parents, is_balanced, standard_words, thue_morse,
};
use doubling_holes::{binary_expansion, is_trap, orbit, CfTuple, Error, ExpansionForm, Extension, Hole, Rational, Word};
use doubling_holes_cli::{
    bisect_astar, catalog_csv, catalog_rows, classification_json, classify_with_budget, endpoint_json, scan, trap_json,
    BisectError, ScanRow, DEFAULT_MAX_STATES,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "dholes", version, about = "Holes, survivor sets and critical parameters for the doubling map")]
struct Cli {
    /// Emit JSON where a command also has a text or CSV form.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV where a command supports it.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Abort once a survivor automaton grows past this many states.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the survivor set of the hole (A, B).
    Classify {
        a: Rational,
        b: Rational,
        /// Print the survivor automaton instead of the classification.
        #[arg(long)]
        dump: bool,
    },
    /// Classify symmetric holes (a, 1 - a) on the grid k/2^M.
    Scan {
        a_min: Rational,
        a_max: Rational,
        m: u64,
        #[arg(long, default_value = "symmetric", value_parser = ["symmetric"])]
        mode: String,
    },
    /// Bracket the symmetric critical parameter by bisection.
    BisectAstar {
        #[arg(long, default_value_t = 12)]
        precision: u32,
    },
    /// List the critical holes.
    Catalog {
        #[arg(long, default_value_t = 7)]
        max_q: u64,
        /// Enlarge-and-shrink margin used by --certify.
        #[arg(long, default_value = "1/1024")]
        epsilon: Rational,
        #[arg(long)]
        certify: bool,
        /// Continued-fraction tuple for a Sturmian sample, e.g. 1,1,1,1; repeatable.
        #[arg(long)]
        sturmian: Vec<CfTuple>,
        #[arg(long, default_value_t = 9)]
        degenerate_samples: usize,
    },
    /// Decide whether the closed interval [C, D] is a trap.
    Trap {
        c: Rational,
        d: Rational,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Combinatorics on words.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Bracket the Sturmian hole of a continued-fraction tuple.
    Sturmian {
        #[arg(required = true, num_args = 1..)]
        cf: Vec<String>,
        #[arg(long, default_value_t = 48)]
        precision: usize,
        #[arg(long)]
        no_extend: bool,
    },
    /// Check that the hole is both first- and second-order critical.
    SupercriticalTest {
        /// Left endpoint, or omit both endpoints and pass --sturmian.
        #[arg(requires = "b")]
        a: Option<Rational>,
        b: Option<Rational>,
        #[arg(long, conflicts_with = "a")]
        sturmian: Option<CfTuple>,
        #[arg(long, default_value = "1/1024")]
        epsilon: Rational,
        #[arg(long, default_value_t = 48)]
        precision: usize,
    },
    /// Gap interval [alpha, beta] and gamma for a tuple ending in an entry of at least 2.
    Gap {
        #[arg(required = true, num_args = 1..)]
        cf: Vec<String>,
    },
    /// Surviving cycles of (A, B) up to the given period.
    Cycles {
        a: Rational,
        b: Rational,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Binary expansion and orbit of a rational.
    Orbit {
        x: Rational,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
    },
    /// Entropy and dimension of the words where every 0 is followed by N ones.
    SigmaN { n: usize },
}

#[derive(Subcommand)]
enum WordOp {
    /// Standard words s_0 .. s_n of a tuple; prints the last.
    Standard {
        #[arg(required = true, num_args = 1..)]
        cf: Vec<String>,
        /// Print every standard word s_-1 .. s_n.
        #[arg(long)]
        all: bool,
    },
    /// Prefix of the characteristic word.
    Characteristic {
        #[arg(required = true, num_args = 1..)]
        cf: Vec<String>,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        no_extend: bool,
    },
    Balanced { word: Word },
    /// Least and greatest rotations.
    Extremes { word: Word },
    ThueMorse { len: usize },
    /// Farey parents of P/Q.
    Farey { p: u64, q: u64 },
}

enum Failure {
    Argument(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::OrbitBudget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Argument(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, (Failure, Option<String>)>;

fn fail(e: impl Into<Failure>) -> (Failure, Option<String>) {
    (e.into(), None)
}

fn tuple(parts: &[String]) -> Result<CfTuple, Failure> {
    Ok(parts.join(" ").parse::<CfTuple>()?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: &Cli) -> Outcome {
    let budget = cli.max_states;
    match &cli.command {
        Command::Classify { a, b, dump } => {
            let h = Hole::new(a.clone(), b.clone()).map_err(fail)?;
            if *dump {
                return Ok(build_automaton_with_budget(&h, budget).map_err(fail)?.dump());
            }
            let c = classify_with_budget(&h, budget).map_err(fail)?;
            Ok(pretty(&classification_json(&h, &c)))
        }
        Command::Scan { a_min, a_max, m, .. } => {
            let rows = scan(a_min, a_max, *m, budget).map_err(fail)?;
            if cli.json {
                return Ok(pretty(&Value::Array(rows.iter().map(ScanRow::json).collect())));
            }
            let mut out = String::from(ScanRow::csv_header());
            out.push('\n');
            for r in &rows {
                out.push_str(&r.csv());
                out.push('\n');
            }
            Ok(out)
        }
        Command::BisectAstar { precision } => match bisect_astar(*precision, budget) {
            Ok(b) => Ok(pretty(&b.json(true))),
            Err(BisectError::Argument(m)) => Err(fail(Failure::Argument(m))),
            Err(BisectError::Budget { partial, message }) => {
                Err((Failure::Budget(message), Some(pretty(&partial.json(false)))))
            }
        },
        Command::Catalog { max_q, epsilon, certify, sturmian, degenerate_samples } => {
            let entries = catalog(*max_q, sturmian, *degenerate_samples).map_err(fail)?;
            let rows = catalog_rows(&entries, certify.then_some(epsilon)).map_err(fail)?;
            if cli.csv {
                return Ok(catalog_csv(&entries, &rows));
            }
            Ok(pretty(&serde_json::to_value(&rows).expect("serializable")))
        }
        Command::Trap { c, d, depth, tol } => {
            let rep = is_trap(c, d, *depth, *tol).map_err(fail)?;
            Ok(pretty(&trap_json(c, d, *depth, &rep)))
        }
        Command::Word { op } => word(op, cli.json).map_err(fail),
        Command::Sturmian { cf, precision, no_extend } => {
            let cf = tuple(cf).map_err(fail)?;
            let ext = if *no_extend { Extension::Disabled } else { Extension::OnesTail };
            let s = sturmian_hole(&cf, *precision, ext).map_err(fail)?;
            let pair = |(lo, hi): &(Rational, Rational)| json!({ "lo": lo.to_string(), "hi": hi.to_string() });
            Ok(pretty(&json!({
                "cf": s.cf_prefix.to_string(),
                "precision_bits": s.precision_bits,
                "left": pair(&s.left),
                "right": pair(&s.right),
                "left_value": s.left.0.to_f64(),
                "right_value": s.right.0.to_f64(),
            })))
        }
        Command::SupercriticalTest { a, b, sturmian, epsilon, precision } => {
            let (left, right) = match (a, b, sturmian) {
                (Some(a), Some(b), None) => (Endpoint::Exact(a.clone()), Endpoint::Exact(b.clone())),
                (None, None, Some(cf)) => {
                    let s = sturmian_hole(cf, *precision, Extension::OnesTail).map_err(fail)?;
                    (
                        Endpoint::Bracket { lo: s.left.0, hi: s.left.1 },
                        Endpoint::Bracket { lo: s.right.0, hi: s.right.1 },
                    )
                }
                _ => return Err(fail(Failure::Argument("give either A B or --sturmian".into()))),
            };
            let rep = test_supercritical(&left, &right, epsilon).map_err(fail)?;
            Ok(pretty(&json!({
                "left": endpoint_json(&left),
                "right": endpoint_json(&right),
                "epsilon": epsilon.to_string(),
                "outer_hole": [rep.outer_hole.a().to_string(), rep.outer_hole.b().to_string()],
                "inner_hole": [rep.inner_hole.a().to_string(), rep.inner_hole.b().to_string()],
                "outer_kind": rep.outer.kind.as_str(),
                "inner_kind": rep.inner.kind.as_str(),
                "inner_entropy_lo": rep.inner.entropy.lo,
                "pass": rep.pass,
            })))
        }
        Command::Gap { cf } => {
            let cf = tuple(cf).map_err(fail)?;
            let g = gap_interval(&cf).map_err(fail)?;
            Ok(pretty(&json!({
                "cf": g.cf.to_string(),
                "p_over_q": g.p_over_q.to_string(),
                "alpha": g.alpha.to_string(),
                "beta": g.beta.to_string(),
                "gamma": g.gamma.to_string(),
            })))
        }
        Command::Cycles { a, b, max_len } => {
            let h = Hole::new(a.clone(), b.clone()).map_err(fail)?;
            if *max_len > 24 {
                return Err(fail(Failure::Argument("--max-len must be at most 24".into())));
            }
            let cycles: Vec<String> = enumerate_surviving_cycles(&h, *max_len).iter().map(|w| w.to_string()).collect();
            Ok(pretty(&json!({ "a": a.to_string(), "b": b.to_string(), "max_len": max_len, "cycles": cycles })))
        }
        Command::Orbit { x, max_steps } => {
            let lower = binary_expansion(x, ExpansionForm::Lower).map_err(fail)?;
            let upper = binary_expansion(x, ExpansionForm::Upper).map_err(fail)?;
            let o = orbit(x, *max_steps).map_err(fail)?;
            let strs = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
            Ok(pretty(&json!({
                "x": x.to_string(),
                "expansion": lower.to_string(),
                "upper_expansion": upper.to_string(),
                "transient": strs(&o.transient),
                "cycle": strs(&o.cycle),
            })))
        }
        Command::SigmaN { n } => {
            let e = sigma_n_entropy(*n).map_err(fail)?;
            let d = sigma_n_dimension(*n).map_err(fail)?;
            Ok(pretty(&json!({ "n": n, "entropy_lo": e.lo, "entropy_hi": e.hi, "dimension": d })))
        }
    }
}

fn word(op: &WordOp, as_json: bool) -> Result<String, Failure> {
    let (text, value) = match op {
        WordOp::Standard { cf, all } => {
            let cf = tuple(cf)?;
            let s = standard_words(&cf);
            if *all {
                let words: Vec<String> = s.iter().map(Word::to_string).collect();
                (words.join("\n"), json!(words))
            } else {
                let last = s.last().expect("nonempty").to_string();
                (last.clone(), json!(last))
            }
        }
        WordOp::Characteristic { cf, len, no_extend } => {
            let cf = tuple(cf)?;
            let ext = if *no_extend { Extension::Disabled } else { Extension::OnesTail };
            let len = len.unwrap_or_else(|| determined_length(&cf));
            let w = characteristic_prefix(&cf, len, ext)?.to_string();
            (w.clone(), json!(w))
        }
        WordOp::Balanced { word } => {
            let b = is_balanced(word);
            (b.to_string(), json!(b))
        }
        WordOp::Extremes { word } => {
            let (min, max) = cyclic_extremes(word)?;
            (format!("{min} {max}"), json!({ "min": min.to_string(), "max": max.to_string() }))
        }
        WordOp::ThueMorse { len } => {
            if *len > 1 << 24 {
                return Err(Failure::Argument("length must be at most 2^24".into()));
            }
            let w = thue_morse(*len).to_string();
            (w.clone(), json!(w))
        }
        WordOp::Farey { p, q } => {
            let (l, r) = farey_parents(*p, *q)?;
            (format!("{l} {r}"), json!({ "left": l.to_string(), "right": r.to_string() }))
        }
    };
    Ok(if as_json { pretty(&value) } else { text + "\n" })
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, code) = match run(&cli) {
        Ok(text) => (Some(text), 0),
        Err((failure, partial)) => {
            let (msg, code) = match failure {
                Failure::Argument(m) => (m, 2),
                Failure::Budget(m) => (m, 3),
            };
            eprintln!("error: {msg}");
            (partial, code)
        }
    };
    if let Some(text) = text {
        if let Err(e) = emit(&cli.out, &text) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
