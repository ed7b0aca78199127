pub mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hiveflow::enumeration::{enumerate_from, EnumOptions};
use hiveflow::flow::check_triple;
use hiveflow::oracles::{hive_count_bruteforce, lr_rule_count, sweep_triples, write_oracle_csv, OracleRow, SearchCap};
use hiveflow::{enumerate, stretch_check, Error, FlowClass, Lattice, Partition, Problem};
use rayon::prelude::*;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FALSE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hiveflow", version, about = "Littlewood-Richardson coefficients through hive flows")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct TripleArgs {
    /// First partition, comma-separated and weakly decreasing.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<Partition>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<Partition>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<Partition>,
    /// Lattice size; defaults to the largest number of parts.
    #[arg(long)]
    n: Option<usize>,
}

impl TripleArgs {
    fn parts(&self) -> Result<(Partition, Partition, Partition), Error> {
        let get = |p: &Option<Partition>, name: &str| {
            p.clone().ok_or_else(|| Error::Precondition(format!("--{name} is required")))
        };
        Ok((get(&self.lambda, "lambda")?, get(&self.mu, "mu")?, get(&self.nu, "nu")?))
    }

    fn problem(&self) -> Result<Problem, Error> {
        let (l, m, v) = self.parts()?;
        Problem::new(&l, &m, &v, self.n)
    }
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Print the coefficient, and optionally the first flows found.
    Compute {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also print up to this many flows.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Decide whether the coefficient is at least the threshold.
    Decide {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        threshold: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Stream the integral hive flows as JSON lines in discovery order.
    Enumerate {
        #[command(flatten)]
        triple: TripleArgs,
        /// Start from the flow in this JSON file instead of searching for one.
        #[arg(long)]
        seed_flow: Option<PathBuf>,
        /// Stop after this many flows.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Compare the tableau count, the hive search and the flow enumeration.
    Oracle {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check that stretching a coefficient-2 triple by M gives M + 1.
    Stretch {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long = "M", default_value_t = 4)]
        m: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run all three counts on every triple up to a size and write CSV.
    Sweep {
        /// Largest lattice size.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Largest |nu|.
        #[arg(long, default_value_t = 6)]
        max_size: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a flow as SVG.
    Render {
        #[command(flatten)]
        triple: TripleArgs,
        /// Flow to draw; without it the first flow of the triple is drawn.
        #[arg(long)]
        seed_flow: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the three counts agree on all triples with n <= 3 and |nu| <= 6.
    Selftest,
}

/// Parses `argv` (including the program name), runs the verb and returns the
/// exit code: 0 on success, 2 for a false or infeasible answer, 1 on errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.verb, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(verb: Verb, out: &mut dyn Write) -> Result<i32, Error> {
    match verb {
        Verb::Compute { triple, format, limit } => compute(&triple, format, limit, out),
        Verb::Decide { triple, threshold, format } => decide(&triple, threshold, format, out),
        Verb::Enumerate { triple, seed_flow, limit } => enumerate_verb(&triple, seed_flow, limit, out),
        Verb::Oracle { triple, format } => oracle(&triple, format, out),
        Verb::Stretch { triple, m, format } => stretch(&triple, m, format, out),
        Verb::Sweep { n, max_size, out: path } => sweep(n, max_size, path, out),
        Verb::Render { triple, seed_flow, out: path } => render(&triple, seed_flow, path, out),
        Verb::Selftest => selftest(out),
    }
}

fn compute(triple: &TripleArgs, format: Format, limit: Option<usize>, out: &mut dyn Write) -> Result<i32, Error> {
    let problem = triple.problem()?;
    let e = enumerate(&problem, EnumOptions::from_env(), &mut |_| {})?;
    let shown = &e.flows[..limit.unwrap_or(0).min(e.flows.len())];
    match format {
        Format::Text => {
            writeln!(out, "{}", e.count())?;
            for f in shown {
                writeln!(out, "{}", f.to_json())?;
            }
        }
        Format::Json => {
            let mut v = json!({ "n": problem.n(), "count": e.count() });
            if limit.is_some() {
                v["flows"] = serde_json::to_value(shown)?;
            }
            writeln!(out, "{v}")?;
        }
    }
    Ok(if e.count() == 0 { EXIT_FALSE } else { EXIT_OK })
}

fn decide(triple: &TripleArgs, t: u64, format: Format, out: &mut dyn Write) -> Result<i32, Error> {
    if t == 0 {
        return Err(Error::Precondition("the threshold must be positive".into()));
    }
    let problem = triple.problem()?;
    let opts = EnumOptions { threshold: Some(t), ..EnumOptions::from_env() };
    let answer = enumerate(&problem, opts, &mut |_| {})?.reached_threshold;
    match format {
        Format::Text => writeln!(out, "{answer}")?,
        Format::Json => writeln!(out, "{}", json!({ "threshold": t, "answer": answer }))?,
    }
    Ok(if answer { EXIT_OK } else { EXIT_FALSE })
}

fn read_flow(path: &PathBuf) -> Result<FlowClass, Error> {
    FlowClass::from_json(&fs::read_to_string(path)?)
}

fn enumerate_verb(
    triple: &TripleArgs,
    seed_flow: Option<PathBuf>,
    limit: Option<u64>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let problem = triple.problem()?;
    let start = match seed_flow {
        Some(path) => {
            let f = read_flow(&path)?;
            if f.n != problem.n() {
                return Err(Error::Precondition(format!("seed flow has n = {}, expected {}", f.n, problem.n())));
            }
            f
        }
        None => match problem.initial_flow()? {
            Some(f) => f,
            None => return Ok(EXIT_FALSE),
        },
    };
    if limit == Some(0) {
        return Ok(EXIT_OK);
    }
    if !problem.contains(&start) {
        return Err(Error::NotInPolytope);
    }
    writeln!(out, "{}", start.to_json())?;
    let mut failed = None;
    let opts = EnumOptions { threshold: limit, ..EnumOptions::from_env() };
    enumerate_from(&problem, &start, opts, &mut |p| {
        if let (Some(f), None) = (p.found, &failed) {
            if let Err(e) = writeln!(out, "{}", f.to_json()) {
                failed = Some(e);
            }
        }
    })?;
    match failed {
        Some(e) => Err(e.into()),
        None => Ok(EXIT_OK),
    }
}

fn oracle_row(l: &Partition, m: &Partition, v: &Partition, n: Option<usize>) -> Result<OracleRow, Error> {
    let lr_rule = lr_rule_count(l, m, v);
    let (hive_bf, flow_enum) = match check_triple(l, m, v) {
        Err(Error::SizeMismatch { .. }) => (Some(0), Some(0)),
        _ => {
            let problem = Problem::new(l, m, v, n)?;
            let hives = hive_count_bruteforce(l, m, v, problem.n(), SearchCap::default())?;
            let flows = enumerate(&problem, EnumOptions::from_env(), &mut |_| {})?.count();
            (Some(hives), Some(flows))
        }
    };
    Ok(OracleRow { lambda: l.clone(), mu: m.clone(), nu: v.clone(), lr_rule, hive_bf, flow_enum })
}

fn oracle(triple: &TripleArgs, format: Format, out: &mut dyn Write) -> Result<i32, Error> {
    let (l, m, v) = triple.parts()?;
    let row = oracle_row(&l, &m, &v, triple.n)?;
    let agree = row.agrees();
    match format {
        Format::Text => {
            writeln!(out, "lr_rule {}", row.lr_rule)?;
            writeln!(out, "hive_bf {}", row.hive_bf.unwrap_or(0))?;
            writeln!(out, "flow_enum {}", row.flow_enum.unwrap_or(0))?;
            writeln!(out, "agree {agree}")?;
        }
        Format::Json => writeln!(
            out,
            "{}",
            json!({ "lr_rule": row.lr_rule, "hive_bf": row.hive_bf, "flow_enum": row.flow_enum, "agree": agree })
        )?,
    }
    Ok(if agree { EXIT_OK } else { EXIT_FALSE })
}

fn stretch(triple: &TripleArgs, m_max: u64, format: Format, out: &mut dyn Write) -> Result<i32, Error> {
    let (l, m, v) = triple.parts()?;
    let report = stretch_check(&l, &m, &v, m_max)?;
    match format {
        Format::Text => {
            writeln!(out, "M\tcount\texpected\tstatus")?;
            for r in &report.rows {
                writeln!(out, "{}\t{}\t{}\t{}", r.m, r.count, r.m + 1, if r.pass { "PASS" } else { "FAIL" })?;
            }
        }
        Format::Json => {
            let rows: Vec<_> =
                report.rows.iter().map(|r| json!({ "M": r.m, "count": r.count, "pass": r.pass })).collect();
            writeln!(out, "{}", json!({ "rows": rows, "pass": report.all_pass() }))?;
        }
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_FALSE })
}

fn sweep_rows(n: usize, max_size: u64) -> Result<Vec<OracleRow>, Error> {
    sweep_triples(n, max_size).par_iter().map(|(l, m, v)| oracle_row(l, m, v, None)).collect()
}

fn sweep(n: usize, max_size: u64, path: Option<PathBuf>, out: &mut dyn Write) -> Result<i32, Error> {
    let rows = sweep_rows(n, max_size)?;
    match path {
        Some(p) => write_oracle_csv(fs::File::create(p)?, &rows)?,
        None => write_oracle_csv(&mut *out, &rows)?,
    }
    Ok(if rows.iter().all(OracleRow::agrees) { EXIT_OK } else { EXIT_FALSE })
}

fn render(
    triple: &TripleArgs,
    seed_flow: Option<PathBuf>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let f = match seed_flow {
        Some(p) => read_flow(&p)?,
        None => match triple.problem()?.initial_flow()? {
            Some(f) => f,
            None => return Ok(EXIT_FALSE),
        },
    };
    let lat = Lattice::build(f.n)?;
    let svg = render::render_svg(&lat, &f);
    match path {
        Some(p) => fs::write(p, svg)?,
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn selftest(out: &mut dyn Write) -> Result<i32, Error> {
    let rows = sweep_rows(3, 6)?;
    let bad: Vec<&OracleRow> = rows.iter().filter(|r| !r.agrees()).collect();
    for r in &bad {
        writeln!(out, "mismatch {}|{}|{}", r.lambda, r.mu, r.nu)?;
    }
    writeln!(out, "{} triples, {} mismatches", rows.len(), bad.len())?;
    Ok(if bad.is_empty() { EXIT_OK } else { EXIT_FALSE })
}
