//! Argument parsing and the run loop.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{value_parser, Arg, ArgAction, ArgMatches};

use crate::commands::execute;
use crate::config::{read_config_file, Command, RunConfig};
use crate::report::{Failure, Report, Status};
use crate::table::FieldTable;
use crate::UsageError;

pub const JOBS_ENV: &str = "WAVECTL_JOBS";

pub fn app() -> clap::Command {
    let mut app = clap::Command::new("wavectl")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Exact controls for two-point boundary value problems of the wave equation")
        .after_help(
            "Exit codes: 0 verified, 1 usage error, 2 verification failed, 3 inadmissible or incompatible input.\n\
             T and L are integer fractions such as 1/4; decimals are rejected.",
        )
        .arg(Arg::new("config").long("config").value_name("PATH").global(true).help("read parameters from a key = value file"))
        .arg(Arg::new("json").long("json").action(ArgAction::SetTrue).global(true).help("print the JSON report to stdout"))
        .arg(
            Arg::new("jobs")
                .long("jobs")
                .value_name("N")
                .value_parser(value_parser!(usize))
                .global(true)
                .help(format!("worker threads, 0 for all cores; {JOBS_ENV} overrides")),
        )
        .arg(Arg::new("verbose").short('v').long("verbose").action(ArgAction::Count).global(true).help("more log output"));
    for c in Command::ALL {
        let mut sub = clap::Command::new(c.name()).about(c.about());
        for p in c.params() {
            sub = sub.arg(Arg::new(p.key).long(p.flag).value_name("VALUE").allow_hyphen_values(true).help(p.help));
        }
        app = app.subcommand(sub);
    }
    app
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match app().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let sub = matches.subcommand();
    let global = sub.map_or(&matches, |(_, m)| m);
    init_logging(global.get_count("verbose"));
    let jobs = match jobs(global.get_one::<usize>("jobs").copied()) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    pool.install(|| run_matches(&matches))
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
}

/// The environment variable wins over the flag.
fn jobs(flag: Option<usize>) -> Result<usize, UsageError> {
    match std::env::var(JOBS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| UsageError(format!("{JOBS_ENV} must be a count, got `{v}`"))),
        Err(_) => Ok(flag.unwrap_or(0)),
    }
}

fn flag_values(command: Command, m: &ArgMatches) -> BTreeMap<String, String> {
    command.params().filter_map(|p| m.get_one::<String>(p.key).map(|v| (p.key.to_string(), v.clone()))).collect()
}

fn resolve(matches: &ArgMatches) -> Result<RunConfig, UsageError> {
    let (command, flags) = match matches.subcommand() {
        Some((name, m)) => {
            let c: Command = name.parse()?;
            (Some(c), flag_values(c, m))
        }
        None => (None, BTreeMap::new()),
    };
    let global = matches.subcommand().map_or(matches, |(_, m)| m);
    let file = match global.get_one::<String>("config") {
        Some(path) => read_config_file(Path::new(path))?,
        None => BTreeMap::new(),
    };
    RunConfig::resolve(command, file, flags)
}

fn run_matches(matches: &ArgMatches) -> i32 {
    let start = Instant::now();
    let global = matches.subcommand().map_or(matches, |(_, m)| m);
    let json = global.get_flag("json");
    let cfg = match resolve(matches) {
        Ok(c) => c,
        Err(e) => {
            // Still honour an explicit report path.
            let name = matches.subcommand_name().unwrap_or("");
            let path = matches.subcommand().and_then(|(_, m)| m.get_one::<String>("report")).map(PathBuf::from);
            let mut r = Report::new(name);
            r.finish(Status::UsageError, Some(Failure { kind: "usage".into(), reason: e.0.clone() }));
            r.wall_clock_seconds = start.elapsed().as_secs_f64();
            eprintln!("error: {e}");
            return emit(&r, None, path.as_deref(), None, json);
        }
    };
    log::info!("running {} with {} parameters", cfg.command, cfg.values.len());
    let mut r = Report::new(cfg.command.name());
    r.problem = cfg.problem_echo();
    let outcome = execute(&cfg, &mut r);
    let table = match outcome {
        Ok(table) => {
            if r.all_passed() {
                r.finish(Status::Verified, None);
            } else {
                let failed: Vec<&str> = r
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .chain(r.compatibility.iter().filter(|c| !c.passed).map(|c| c.name.as_str()))
                    .collect();
                let reason = format!("outside tolerance: {}", failed.join(", "));
                r.finish(Status::VerificationFailed, Some(Failure { kind: "tolerance".into(), reason }));
            }
            table
        }
        Err(e) => {
            let (status, kind) = e.classify();
            eprintln!("error: {e}");
            r.finish(status, Some(Failure { kind: kind.into(), reason: e.to_string() }));
            None
        }
    };
    if table.is_none() && cfg.get("csv").is_some() && r.status == Status::Verified {
        r.warnings.push("no field is produced by this command; --csv ignored".into());
    }
    r.wall_clock_seconds = start.elapsed().as_secs_f64();
    let csv = cfg.get("csv").map(PathBuf::from);
    let report = cfg.get("report").map(PathBuf::from);
    emit(&r, table.as_ref(), report.as_deref(), csv.as_deref(), json)
}

/// Writes the outputs and returns the exit code.
fn emit(r: &Report, table: Option<&FieldTable>, report: Option<&Path>, csv: Option<&Path>, json: bool) -> i32 {
    let mut code = r.exit_code;
    if let Err(e) = crate::report::validate_text(&r.to_json()) {
        eprintln!("error: internal report is malformed: {e}");
        return 2;
    }
    if let (Some(t), Some(path)) = (table, csv) {
        if let Err(e) = t.write_file(path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            code = code.max(1);
        }
    }
    if let Some(path) = report {
        if let Err(e) = r.write_file(path) {
            eprintln!("error: {e}");
            code = code.max(1);
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = if json { out.write_all(r.to_json().as_bytes()) } else { out.write_all(summary(r).as_bytes()) };
    code
}

fn summary(r: &Report) -> String {
    let mut s = format!("{}: {}\n", if r.command.is_empty() { "wavectl" } else { &r.command }, status_word(r.status));
    if let Some(a) = &r.admissibility {
        s += &format!(
            "  2T/L = {}/{} ({}), C_s = {}\n",
            a.p,
            a.q,
            if a.admissible { "admissible" } else { "resonant" },
            a.c_s
        );
    }
    for c in &r.compatibility {
        let v = c.residual.map_or("nan".to_string(), |v| format!("{v:.3e}"));
        s += &format!("  {:<28} {v:>11}  <= {:.0e}  {}\n", c.name, c.tolerance, verdict(c.passed));
    }
    for c in &r.checks {
        let v = c.value.map_or("nan".to_string(), |v| format!("{v:.3e}"));
        let op = c.bound.symbol();
        s += &format!("  {:<28} {v:>11}  {op} {:.0e}  {}\n", c.name, c.tolerance, verdict(c.passed));
    }
    for w in &r.warnings {
        s += &format!("  warning: {w}\n");
    }
    if let Some(f) = &r.failure {
        s += &format!("  {}: {}\n", f.kind, f.reason);
    }
    s
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::UsageError => "usage error",
        Status::VerificationFailed => "verification failed",
        Status::Rejected => "rejected",
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}
