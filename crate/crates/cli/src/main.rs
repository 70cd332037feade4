use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmsets::RowOrder;
use qmsets_cli::{exit, parse_syntax, run_scenario, Bounds, Format, RunError, RunOptions};

/// Run QM-over-sets scenario files.
#[derive(Debug, Parser)]
#[command(name = "qmsets", version)]
struct Args {
    /// Scenario files. Several files are run independently and reported in
    /// the order given.
    #[arg(required = true, value_name = "SCENARIO")]
    inputs: Vec<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Lists ket-table rows by descending size instead of binary counting.
    #[arg(long)]
    paper_order: bool,

    /// Prints a 6-place decimal next to every probability.
    #[arg(long)]
    decimals: bool,

    /// Enumeration limit, e.g. `--bound partitions=7`. Keys: partitions,
    /// group, table.
    #[arg(long = "bound", value_name = "KEY=VALUE")]
    bounds: Vec<String>,

    /// Also writes the JSON records of every run to this file.
    #[arg(long, value_name = "PATH")]
    records: Option<PathBuf>,

    /// Only parse and check; print the canonical form of each scenario.
    #[arg(long)]
    check: bool,
}

struct Outcome {
    status: u8,
    stdout: String,
    stderr: String,
    records: Option<String>,
}

fn process(path: &PathBuf, args: &Args, options: &RunOptions) -> Outcome {
    let fail = |status: u8, message: String| Outcome {
        status,
        stdout: String::new(),
        stderr: format!("qmsets: {}: {message}\n", path.display()),
        records: None,
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(exit::USAGE, e.to_string()),
    };
    let mut scenario = match parse_syntax(&text) {
        Ok(s) => s,
        Err(e) => return fail(exit::SCENARIO, e.to_string()),
    };
    if args.seed.is_some() {
        scenario.seed = args.seed;
    }
    if args.check {
        return match scenario.check(&options.bounds) {
            Ok(_) => Outcome {
                status: exit::OK,
                stdout: scenario.to_string(),
                stderr: String::new(),
                records: None,
            },
            Err(e) => fail(exit::SCENARIO, e.to_string()),
        };
    }
    let run = match run_scenario(&scenario, options) {
        Ok(r) => r,
        Err(e @ RunError::Scenario(_)) => return fail(exit::SCENARIO, e.to_string()),
        Err(e) => return fail(exit::RUNTIME, e.to_string()),
    };
    let mut stderr = String::new();
    for (dest, contents) in run.files(args.format) {
        if let Err(e) = fs::write(&dest, contents) {
            return fail(exit::RUNTIME, format!("writing {}: {e}", dest.display()));
        }
        stderr.push_str(&format!("qmsets: wrote {}\n", dest.display()));
    }
    Outcome {
        status: exit::OK,
        stdout: run.stdout(args.format),
        stderr,
        records: Some(run.records()),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            });
        }
    };
    let mut bounds = Bounds::default();
    for b in &args.bounds {
        if let Err(message) = bounds.set(b) {
            eprintln!("qmsets: --bound: {message}");
            return ExitCode::from(exit::USAGE);
        }
    }
    let options = RunOptions {
        row_order: if args.paper_order {
            RowOrder::Paper
        } else {
            RowOrder::Binary
        },
        decimals: args.decimals,
        bounds,
    };

    // Scenarios share nothing, so a batch runs in parallel; output keeps the
    // input order.
    let outcomes: Vec<Outcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = args
            .inputs
            .iter()
            .map(|path| scope.spawn(|| process(path, &args, &options)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario worker panicked"))
            .collect()
    });

    let mut status = exit::OK;
    let mut stdout = std::io::stdout().lock();
    let mut records = Vec::new();
    for (k, outcome) in outcomes.iter().enumerate() {
        if k > 0 && !outcome.stdout.is_empty() && args.format == Format::Text {
            let _ = writeln!(stdout);
        }
        let _ = stdout.write_all(outcome.stdout.as_bytes());
        eprint!("{}", outcome.stderr);
        status = status.max(outcome.status);
        if let Some(r) = &outcome.records {
            records.push(r.as_str());
        }
    }
    if let Some(path) = &args.records {
        let body = if args.inputs.len() == 1 {
            records.concat()
        } else {
            format!("[\n{}]\n", records.join(",\n"))
        };
        if let Err(e) = fs::write(path, body) {
            eprintln!("qmsets: writing {}: {e}", path.display());
            status = status.max(exit::RUNTIME);
        }
    }
    ExitCode::from(status)
}
