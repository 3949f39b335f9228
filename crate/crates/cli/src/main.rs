use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boolspec::bounds::bound_report;
use boolspec::constructions::FamilySpec;
use boolspec::harness::{self, PlotKind, Suite, SuiteOptions, SuiteResult};
use boolspec::measures::{profile, profile_sparse};
use boolspec::napdt::{self, Mode};
use boolspec::{max_arity, BooleanFunction, SparseSpectrum};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "boolspec", version, about = "Exact Fourier measures and weight bounds for Boolean functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile and bound report for a truth table or a family instance.
    Analyze {
        #[arg(long, conflicts_with_all = ["family", "spec"])]
        input: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        /// Also write the nonzero coefficients as CSV.
        #[arg(long)]
        spectrum_out: Option<PathBuf>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where the failure JSON goes: `stderr`, `stdout` or a file path.
        #[arg(long, default_value = "stderr")]
        failures: String,
    },
    /// Frontier CSV over every function of arity n (n ≤ 4).
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "stderr")]
        failures: String,
    },
    /// Run the parity-fixing restriction algorithm and audit the run.
    Napdt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write the truth table of a family instance.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lower-bound curves on a log-spaced grid as CSV.
    Plotdata {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = harness::PLOT_POINTS)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// and, parity, bent_ip, addressing, ad_tt, ad_tta, ab, aab, mand, mad, composed
    #[arg(long)]
    family: Option<String>,
    /// A full family spec as JSON, e.g. '{"family":"ad_tt","t":4,"tprime":8}'.
    #[arg(long, conflicts_with = "family")]
    spec: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    tprime: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    /// Inner spec JSON for `composed`.
    #[arg(long)]
    inner: Option<String>,
}

enum Failure {
    Usage(String),
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, Failure> {
        if let Some(text) = &self.spec {
            return Ok(Some(serde_json::from_str(text)?));
        }
        let Some(name) = &self.family else {
            return Ok(None);
        };
        let mut obj = Map::new();
        obj.insert("family".into(), json!(name));
        for (key, v) in [("n", self.n), ("t", self.t), ("tprime", self.tprime), ("a", self.a), ("ell", self.ell), ("p", self.p)] {
            if let Some(v) = v {
                obj.insert(key.into(), json!(v));
            }
        }
        if let Some(inner) = &self.inner {
            obj.insert("inner".into(), serde_json::from_str(inner)?);
        }
        let spec: FamilySpec = serde_json::from_value(Value::Object(obj))?;
        spec.validate()?;
        Ok(Some(spec))
    }
}

fn read_table(path: &Path) -> Result<BooleanFunction, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(BooleanFunction::parse_text(&text)?)
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(stream: &str, text: &str) -> Outcome {
    match stream {
        "stderr" => eprintln!("{text}"),
        "stdout" => println!("{text}"),
        path => {
            let mut f = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            writeln!(f, "{text}")?;
        }
    }
    Ok(())
}

fn report(results: &[SuiteResult], stream: &str) -> Outcome {
    for r in results {
        println!("{}", r.summary());
        for note in &r.notes {
            println!("  note: {note}");
        }
        emit(stream, &r.failures_json())?;
    }
    if results.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn analyze(input: Option<PathBuf>, family: FamilyArgs, spectrum_out: Option<PathBuf>) -> Outcome {
    let (spec, p, s) = match (input, family.spec()?) {
        (Some(path), _) => {
            let f = read_table(&path)?;
            (None, profile(&f), f.wht().to_sparse())
        }
        (None, Some(spec)) => {
            if spec.arity()? <= max_arity() {
                let f = spec.make()?;
                (Some(spec), profile(&f), f.wht().to_sparse())
            } else {
                let s: SparseSpectrum = spec.closed_form_sparse()?;
                (Some(spec), profile_sparse(&s), s)
            }
        }
        (None, None) => return Err(Failure::Usage("analyze needs --input, --family or --spec".into())),
    };
    if let Some(path) = spectrum_out {
        write_file(&path, &s.to_csv())?;
    }
    let out = json!({ "spec": spec, "profile": p, "bounds": bound_report(&p, &s) });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze { input, family, spectrum_out } => analyze(input, family, spectrum_out),
        Command::Verify { suite, max_n, samples, seed, failures } => {
            let suite: Suite = suite.parse()?;
            let results = harness::run_suite(suite, &SuiteOptions { max_n, samples, seed });
            report(&results, &failures)
        }
        Command::Scan { n, out, failures } => {
            let scan = harness::scan(n)?;
            write_file(&out, &scan.to_csv())?;
            report(std::slice::from_ref(&scan.result), &failures)
        }
        Command::Napdt { input, mode, trace } => {
            let f = read_table(&input)?;
            let mode: Mode = mode.parse()?;
            let (gamma, tr) = napdt::napdt(&f, mode)?;
            if let Some(path) = trace {
                write_file(&path, &serde_json::to_string_pretty(&tr.to_json())?)?;
            }
            let verdicts = napdt::audit(&f, &gamma, &tr)?;
            let gamma_hex: Vec<String> = gamma.iter().map(|m| format!("{m:#x}")).collect();
            let failed: Vec<_> = verdicts.iter().filter(|v| v.failed()).collect();
            println!("{}", json!({ "parities": gamma_hex, "count": gamma.len(), "audit_failures": failed }));
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Construct { family, out } => {
            let spec = family.spec()?.ok_or_else(|| Failure::Usage("construct needs --family or --spec".into()))?;
            let f = spec.make()?;
            write_file(&out, &f.to_text())?;
            println!("{}", serde_json::to_string(&spec)?);
            Ok(())
        }
        Command::Plotdata { kind, rho, kappa, points, out } => {
            let kind: PlotKind = kind.parse()?;
            write_file(&out, &harness::plotdata(kind, rho, kappa, points)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
