//! Command-line front end. The binary only forwards to [`run`].
//!
//! Exit codes: 0 when the property holds or no always-holds check is
//! violated, 1 when it fails or violations were found, 2 on usage, parse
//! or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::class::{finite_length, uniform_dimension, ClassSpec};
use crate::corpus::{enumerate_lattices_capped, enumerate_up_to, load_corpus, Corpus, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::extending::Analysis;
use crate::harness::{emit_report, find_counterexample, run_suite, select, Bindings, Format, MineOutcome, RunOptions};
use crate::io::{read_lattice, ParseMode};
use crate::lattice::Lattice;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Overrides the enumeration size cap.
pub const MAX_N_ENV: &str = "LATTIKA_MAX_N";

const GRAMMAR: &str = "\
Expressions (for --prop, --filter, --hyp, --neg):
  expr   := term ('or' term)*        term := factor ('and' factor)*
  factor := 'not' factor | '(' expr ')' | atom
  atom   := property | class | 'in(' class ')' | 'dsubc' | 'true' | 'false'
Properties:
  extending qc indecomposable uniform udim modular idiom distributive
  type1(X) wtype1(X) type2(X) wtype2(X) Q(X) C1(X) C3(X) xqc(X)
Classes (X):
  all simple uniform udim compactcls flen zero file(PATH)
  e(X) dsum(X) sum(X,Y,..) prod(X,Y,..) pow(X,n)
A bare class means the lattice itself belongs to it.";

#[derive(Parser, Debug)]
#[command(name = "lattika", version, about = "Finite lattice toolkit", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a property expression on one lattice file.
    Check {
        file: PathBuf,
        #[arg(long = "prop", value_name = "EXPR")]
        prop: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the essential, closed and summand elements and pseudocomplements.
    Classes {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate lattices of exactly n elements up to isomorphism.
    Enumerate {
        n: usize,
        /// Keep only lattices satisfying this expression.
        #[arg(long, value_name = "EXPR")]
        filter: Option<String>,
        /// Write one JSON file per lattice into this directory.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run the check suite over a corpus.
    Verify(VerifyArgs),
    /// Search for the smallest lattice satisfying a hypothesis and a negated conclusion.
    Mine {
        #[arg(long, value_name = "EXPR")]
        hyp: String,
        #[arg(long, value_name = "EXPR")]
        neg: String,
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    json: bool,
    /// Accept duplicate or transitively implied cover pairs.
    #[arg(long)]
    lenient: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Directory of lattice JSON files.
    #[arg(long, value_name = "DIR", conflicts_with = "enumerate", required_unless_present = "enumerate")]
    corpus: Option<PathBuf>,
    /// All lattices with at most this many elements.
    #[arg(long, value_name = "N")]
    enumerate: Option<usize>,
    /// Comma-separated check ids, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    /// Extra class binding for parameterized checks (repeatable).
    #[arg(long = "bind", value_name = "CLASS")]
    bind: Vec<String>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Record per-check wall time.
    #[arg(long)]
    timing: bool,
    /// Skip unreadable corpus files and accept redundant cover pairs.
    #[arg(long)]
    lenient: bool,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn size_cap() -> Result<usize> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::parse(format!("{MAX_N_ENV} must be a number, got {v:?}"))),
        Err(_) => Ok(ENUMERATION_CAP),
    }
}

fn mode(lenient: bool) -> ParseMode {
    if lenient {
        ParseMode::Reduce
    } else {
        ParseMode::Strict
    }
}

fn load(file: &Path, lenient: bool, err: &mut dyn Write) -> Result<Lattice> {
    let parsed = read_lattice(file, mode(lenient))?;
    for w in &parsed.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(parsed.lattice)
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn names(l: &Lattice, s: crate::ElementSet) -> String {
    let v: Vec<String> = s.iter().map(|e| l.name(e)).collect();
    format!("{{{}}}", v.join(","))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check { file, prop, common } => {
            let l = load(&file, common.lenient, err)?;
            let expr = Expr::parse(&prop)?;
            let an = Analysis::new(&l);
            let (holds, witness) = match &expr {
                Expr::Prop(p) => {
                    let v = an.evaluate(p);
                    (v.holds, v.witness.map(|w| w.to_json(&l)))
                }
                e => (e.eval(&an), None),
            };
            if common.json {
                let v = json!({ "expression": expr.to_string(), "holds": holds, "witness": witness });
                writeln!(out, "{v}").map_err(io_err)?;
            } else {
                match witness {
                    Some(w) => {
                        let roles: Vec<String> = w
                            .as_object()
                            .into_iter()
                            .flatten()
                            .filter(|(k, _)| *k != "reason")
                            .filter_map(|(_, v)| v.as_str().map(str::to_string))
                            .collect();
                        writeln!(out, "{holds}, witness ({})", roles.join(",")).map_err(io_err)?;
                        writeln!(out, "{w}").map_err(io_err)?;
                    }
                    None => writeln!(out, "{holds}").map_err(io_err)?,
                }
            }
            Ok(if holds { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Classes { file, common } => {
            let l = load(&file, common.lenient, err)?;
            let an = Analysis::new(&l);
            let t = &an.table;
            if common.json {
                let mut v = t.to_json();
                v["udim"] = json!(uniform_dimension(&l));
                v["flen"] = json!(finite_length(&l));
                writeln!(out, "{v}").map_err(io_err)?;
            } else {
                writeln!(out, "E = {}", names(&l, t.essentials)).map_err(io_err)?;
                writeln!(out, "C = {}", names(&l, t.closed)).map_err(io_err)?;
                writeln!(out, "D = {}", names(&l, t.summands)).map_err(io_err)?;
                for a in l.elements() {
                    writeln!(out, "P({}) = {}", l.name(a), names(&l, t.p(a))).map_err(io_err)?;
                }
                writeln!(out, "udim = {}", uniform_dimension(&l)).map_err(io_err)?;
                writeln!(out, "flen = {}", finite_length(&l)).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { n, filter, out: dir } => {
            let filter = filter.as_deref().map(Expr::parse).transpose()?;
            let keep = filter.as_ref().map(|e| move |l: &Lattice| e.eval(&Analysis::new(l)));
            let corpus = enumerate_lattices_capped(
                n,
                size_cap()?,
                keep.as_ref().map(|f| f as &(dyn Fn(&Lattice) -> bool + Sync)),
            )?;
            if let Some(dir) = dir {
                corpus.export(&dir)?;
            }
            writeln!(out, "{}", corpus.len()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => verify(args, out, err),
        Command::Mine { hyp, neg, max_n, json } => {
            let hyp = Expr::parse(&hyp)?;
            let neg = Expr::parse(&neg)?;
            let outcome = find_counterexample(&hyp, &neg, max_n, size_cap()?)?;
            if json {
                writeln!(out, "{}", outcome.to_json(&hyp, &neg)).map_err(io_err)?;
            } else {
                match &outcome {
                    MineOutcome::Witness { lattice, form, examined } => {
                        writeln!(out, "witness n={} canonical={form} (examined {examined})", lattice.size())
                            .map_err(io_err)?;
                        writeln!(out, "{}", crate::io::serialize_lattice(lattice)).map_err(io_err)?;
                    }
                    MineOutcome::Exhausted { max_n, examined } => {
                        writeln!(out, "exhausted: no lattice with n <= {max_n} ({examined} examined)")
                            .map_err(io_err)?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let checks = select(&args.checks)?;
    let extra = args.bind.iter().map(|s| ClassSpec::parse(s)).collect::<Result<Vec<_>>>()?;
    let bindings = Bindings::default().with_extra(extra);
    let corpus: Corpus = match (&args.corpus, args.enumerate) {
        (Some(dir), _) => {
            let (corpus, errors) = load_corpus(dir, mode(args.lenient))?;
            if let Some(first) = errors.first() {
                if !args.lenient {
                    return Err(first.clone());
                }
                for e in &errors {
                    let _ = writeln!(err, "skipped: {e}");
                }
            }
            corpus
        }
        (None, Some(n)) => enumerate_up_to(n, size_cap()?, None)?,
        (None, None) => return Err(Error::parse("either --corpus or --enumerate is required")),
    };
    let options = RunOptions { jobs: args.jobs, timing: args.timing };
    let report = run_suite(&corpus, &checks, &bindings, &options)?;
    let format = if args.json { Format::Json } else { Format::Text };
    out.write_all(emit_report(&report, format).as_bytes()).map_err(io_err)?;
    Ok(if report.faults() == 0 { EXIT_OK } else { EXIT_FALSE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
    }

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["lattika"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn check_verdicts() {
        let (code, out, _) = call(&["check", &fixture("N5"), "--prop", "modular"]);
        assert_eq!(code, 1);
        assert!(out.starts_with("false, witness (r,p,q)"), "{out}");
        assert_eq!(call(&["check", &fixture("M3"), "--prop", "type1(all)"]).1, "true\n");
        assert_eq!(call(&["check", &fixture("M3"), "--prop", "pow(simple,2)"]).0, 0);
        assert_eq!(call(&["check", &fixture("M3"), "--prop", "type1("]).0, 2);
        assert_eq!(call(&["check", "/nonexistent.json", "--prop", "modular"]).0, 2);
    }

    #[test]
    fn classes_table() {
        let (code, out, _) = call(&["classes", &fixture("C3")]);
        assert_eq!(code, 0);
        assert!(out.contains("E = {m,1}\nC = {0,1}\nD = {0,1}\n"), "{out}");
        let (_, out, _) = call(&["classes", &fixture("B2"), "--json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["D"], json!(["0", "x", "y", "1"]));
    }

    #[test]
    fn enumerate_counts() {
        for (n, count) in [(1, "1\n"), (4, "2\n"), (5, "5\n")] {
            assert_eq!(call(&["enumerate", &n.to_string()]).1, count);
        }
        assert_eq!(call(&["enumerate", "5", "--filter", "modular"]).1, "4\n");
        assert_eq!(call(&["enumerate", "10"]).0, 2);
    }

    #[test]
    fn verify_exit_codes() {
        let dir = format!("{}/fixtures", env!("CARGO_MANIFEST_DIR"));
        assert_eq!(call(&["verify", "--corpus", &dir, "--checks", "R35"]).0, 0);
        assert_eq!(call(&["verify", "--enumerate", "2", "--checks", "all"]).0, 0);
        let (code, _, err) = call(&["verify", "--enumerate", "3", "--checks", "R1,R200"]);
        assert_eq!(code, 2);
        assert!(err.contains("R200"));
        assert_eq!(call(&["verify"]).0, 2);
    }

    #[test]
    fn mine_exhaustion() {
        let (code, out, _) = call(&["mine", "--hyp", "simple", "--neg", "not extending", "--max-n", "3"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("exhausted"), "{out}");
    }
}
