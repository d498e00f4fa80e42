//! Command-line driver behind the `npstrata` binary.
//!
//! [`run`] takes the argument vector and two sinks and returns the process
//! exit code: 0 on success, 1 for mathematical or validation errors (and
//! failing report claims), 2 for usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::axioms::{self, builtin_axioms, Axiom};
use crate::condition::PrimeQuery;
use crate::engine::{closure_with, Context, FactTable, RuleKind, Schedule};
use crate::polygon::{enumerate, parse, NewtonPolygon};
use crate::report::{report, selfcheck, ReportTarget};
use crate::strata::{codim_ag, dim_ag, dim_mg, e_dim};

/// Environment variable naming a default axiom file.
pub const AXIOMS_ENV: &str = "NPSTRATA_AXIOMS";

#[derive(Debug, Parser)]
#[command(
    name = "npstrata",
    version,
    about = "Newton polygon strata of curves: enumeration, dimensions and occurrence"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every symmetric Newton polygon of genus G.
    Enum {
        #[arg(long)]
        g: u32,
    },
    /// Codimension of the polygon's stratum in A_g.
    Codim(PolyArgs),
    /// Expected dimension of the polygon's stratum in M_g.
    Edim(PolyArgs),
    /// Whether the polygon is known to occur for a smooth curve.
    Occurs {
        #[command(flatten)]
        poly: PolyArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Print the proof trace or blockers.
        #[arg(long)]
        trace: bool,
    },
    /// Run the engine up to genus GMAX and export the fact table.
    Closure {
        #[arg(long)]
        gmax: u32,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a family of claims against the engine's conclusions.
    Report {
        #[arg(long, value_enum)]
        target: ReportTarget,
        #[arg(long, default_value_t = 10)]
        gmax: u32,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Compare against brute-force oracles and check identities.
    Selfcheck,
    /// Validate an axiom file (or the builtin set) and print it.
    Axioms {
        /// Axiom file to check (defaults to $NPSTRATA_AXIOMS, then the builtin set)
        #[arg(long)]
        axioms: Option<PathBuf>,
        /// Also write the validated set here in the file format
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Polygon expression, e.g. "ord^2+nu3" or "ss^4".
    #[arg(long)]
    poly: String,
    /// Optional genus; must match the polygon.
    #[arg(long)]
    g: Option<u32>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PrimeMode {
    /// Work in characteristic P.
    #[arg(long)]
    prime: Option<u64>,
    /// Only use facts valid in every characteristic.
    #[arg(long)]
    all_primes: bool,
}

#[derive(Debug, Args)]
struct EngineArgs {
    #[command(flatten)]
    mode: PrimeMode,
    /// Axiom file (defaults to $NPSTRATA_AXIOMS, then the builtin set).
    #[arg(long)]
    axioms: Option<PathBuf>,
    /// Drop an axiom by id; may be repeated.
    #[arg(long = "disable-axiom", value_name = "ID")]
    disable: Vec<String>,
    /// Worker threads for the parallel rounds.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// An error reported with exit code 1.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let format = cli.format;
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = match format {
                Format::Text => writeln!(err, "error ({}): {}", f.kind, f.message),
                Format::Json => writeln!(
                    err,
                    "{}",
                    json!({ "error": { "kind": f.kind, "message": f.message } })
                ),
            };
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Enum { g } => cmd_enum(g, format, out),
        Command::Codim(p) => cmd_codim(&p, format, out),
        Command::Edim(p) => cmd_edim(&p, format, out),
        Command::Occurs {
            poly,
            engine,
            trace,
        } => cmd_occurs(&poly, &engine, trace, format, out),
        Command::Closure {
            gmax,
            engine,
            out: path,
        } => cmd_closure(gmax, &engine, path.as_deref(), format, out),
        Command::Report {
            target,
            gmax,
            engine,
        } => cmd_report(target, gmax, &engine, format, out),
        Command::Selfcheck => cmd_selfcheck(format, out),
        Command::Axioms { axioms, out: path } => {
            cmd_axioms(axioms.as_deref(), path.as_deref(), format, out)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::new("io", e))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new("io", e))?;
    emit(out, &text)?;
    emit(out, "\n")
}

fn polygon(args: &PolyArgs) -> Result<NewtonPolygon, Failure> {
    let xi = parse(&args.poly).map_err(|e| Failure::new("polygon", e))?;
    if let Some(g) = args.g {
        if g != xi.genus() {
            return Err(Failure::new(
                "genus-mismatch",
                format!("--g {g} does not match {} (genus {})", xi, xi.genus()),
            ));
        }
    }
    Ok(xi)
}

fn cmd_enum(g: u32, format: Format, out: &mut dyn Write) -> Outcome {
    if g == 0 {
        return Err(Failure::new("range", "genus must be at least 1"));
    }
    let all = enumerate(g);
    match format {
        Format::Text => {
            let mut s = String::new();
            for xi in &all {
                s.push_str(&format!("{xi}\n"));
            }
            s.push_str(&format!("{} polygons of genus {g}\n", all.len()));
            emit(out, &s)?;
        }
        Format::Json => {
            let polygons: Vec<_> = all
                .iter()
                .map(|xi| json!({ "label": xi.format(), "factors": xi }))
                .collect();
            emit_json(
                out,
                &json!({ "g": g, "count": all.len(), "polygons": polygons }),
            )?;
        }
    }
    Ok(0)
}

fn cmd_codim(args: &PolyArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let xi = polygon(args)?;
    let g = xi.genus();
    let heights: Vec<String> = (1..=g).map(|x| xi.height_at(x).to_string()).collect();
    let c = codim_ag(&xi);
    match format {
        Format::Text => emit(
            out,
            &format!(
                "{xi} (g={g}): codim in A_g = {c}\n  heights at x=1..{g}: {}\n  dim A_g = {}, dim A_g[xi] = {}\n",
                heights.join(", "),
                dim_ag(g),
                dim_ag(g) - c
            ),
        )?,
        Format::Json => emit_json(
            out,
            &json!({ "polygon": xi.format(), "g": g, "codim_ag": c, "dim_ag": dim_ag(g), "heights": heights }),
        )?,
    }
    Ok(0)
}

fn cmd_edim(args: &PolyArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let xi = polygon(args)?;
    let g = xi.genus();
    let (c, e) = (codim_ag(&xi), e_dim(&xi));
    match format {
        Format::Text => emit(
            out,
            &format!(
                "{xi} (g={g}): e = max(0, dim M_g - codim) = max(0, {} - {c}) = {e}\n",
                dim_mg(g)
            ),
        )?,
        Format::Json => emit_json(
            out,
            &json!({ "polygon": xi.format(), "g": g, "codim_ag": c, "dim_mg": dim_mg(g), "e_dim": e }),
        )?,
    }
    Ok(0)
}

fn load_axioms(args: &EngineArgs) -> Result<Vec<Axiom>, Failure> {
    let path = args
        .axioms
        .clone()
        .or_else(|| std::env::var_os(AXIOMS_ENV).map(PathBuf::from));
    let mut list = match path {
        Some(p) => {
            axioms::load(&p).map_err(|e| Failure::new("axioms", format!("{}: {e}", p.display())))?
        }
        None => builtin_axioms(),
    };
    for id in &args.disable {
        let before = list.len();
        list.retain(|a| &a.id != id);
        if list.len() == before {
            return Err(Failure::new(
                "axioms",
                format!("--disable-axiom {id}: no such axiom"),
            ));
        }
    }
    Ok(list)
}

fn query(args: &EngineArgs) -> Result<PrimeQuery, Failure> {
    match args.mode.prime {
        Some(p) => PrimeQuery::prime(p).map_err(|e| Failure::new("prime", e)),
        None => Ok(PrimeQuery::AllPrimes),
    }
}

fn run_engine(gmax: u32, args: &EngineArgs) -> Result<FactTable, Failure> {
    if gmax == 0 {
        return Err(Failure::new("range", "gmax must be at least 1"));
    }
    let axioms = load_axioms(args)?;
    let ctx = Context {
        query: query(args)?,
        axioms: &axioms,
    };
    let schedule = Schedule::Rounds {
        order: RuleKind::ALL.to_vec(),
        jobs: args.jobs.max(1),
    };
    Ok(closure_with(gmax, &ctx, &schedule))
}

fn cmd_occurs(
    args: &PolyArgs,
    engine: &EngineArgs,
    trace: bool,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let xi = polygon(args)?;
    let table = run_engine(xi.genus(), engine)?;
    let record = table.record(&xi).map_err(|e| Failure::new("engine", e))?;
    match format {
        Format::Json => emit_json(out, &record)?,
        Format::Text => {
            let fact = table.get(&xi).map_err(|e| Failure::new("engine", e))?;
            let mut s = String::new();
            if trace {
                s.push_str(
                    &table
                        .trace_render(&xi)
                        .map_err(|e| Failure::new("engine", e))?,
                );
            } else {
                s.push_str(&format!("{}\n", table.headline(fact)));
            }
            if !trace && !fact.occurs() {
                for b in &fact.provenance.blockers {
                    s.push_str(&format!("  blocked: {b}\n"));
                }
            }
            emit(out, &s)?;
        }
    }
    Ok(0)
}

fn cmd_closure(
    gmax: u32,
    engine: &EngineArgs,
    path: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let table = run_engine(gmax, engine)?;
    let json = table.to_json();
    match path {
        Some(p) => {
            std::fs::write(p, format!("{json}\n"))
                .map_err(|e| Failure::new("io", format!("{}: {e}", p.display())))?;
            let mut s = String::new();
            for g in 1..=gmax {
                let total = table.facts_of_genus(g).count();
                let yes = table.facts_of_genus(g).filter(|f| f.occurs()).count();
                s.push_str(&format!("g={g}: {yes}/{total} known to occur\n"));
            }
            s.push_str(&format!("wrote {}\n", p.display()));
            if format == Format::Text {
                emit(out, &s)?;
            } else {
                emit_json(
                    out,
                    &json!({ "out": p.display().to_string(), "facts": table.len() }),
                )?;
            }
        }
        None => emit(out, &format!("{json}\n"))?,
    }
    Ok(0)
}

fn cmd_report(
    target: ReportTarget,
    gmax: u32,
    engine: &EngineArgs,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    if gmax < target.min_gmax() {
        return Err(Failure::new(
            "range",
            format!(
                "target {} needs --gmax >= {}",
                target.name(),
                target.min_gmax()
            ),
        ));
    }
    let table = run_engine(gmax, engine)?;
    let rep = report(target, &table).map_err(|e| Failure::new("report", e))?;
    match format {
        Format::Text => emit(out, &rep.to_string())?,
        Format::Json => emit_json(out, &rep)?,
    }
    Ok(if rep.ok() { 0 } else { 1 })
}

fn cmd_selfcheck(format: Format, out: &mut dyn Write) -> Outcome {
    let results = selfcheck();
    let ok = results.iter().all(|r| r.pass);
    match format {
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                s.push_str(&format!(
                    "{} {}: {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                ));
            }
            emit(out, &s)?;
        }
        Format::Json => emit_json(out, &results)?,
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_axioms(
    path: Option<&Path>,
    dest: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let list = match path
        .map(PathBuf::from)
        .or_else(|| std::env::var_os(AXIOMS_ENV).map(PathBuf::from))
    {
        Some(p) => {
            axioms::load(&p).map_err(|e| Failure::new("axioms", format!("{}: {e}", p.display())))?
        }
        None => builtin_axioms(),
    };
    let text = axioms::save(&list);
    if let Some(d) = dest {
        std::fs::write(d, &text)
            .map_err(|e| Failure::new("io", format!("{}: {e}", d.display())))?;
    }
    match format {
        Format::Json if dest.is_none() => emit(out, &text)?,
        _ => {
            let mut s = String::new();
            for a in &list {
                let names: Vec<String> = a.polygons.iter().map(|p| p.format()).collect();
                s.push_str(&format!(
                    "{:<7} {:<32} g={:<4} {} [{}]{}\n",
                    a.id,
                    a.kind.to_string(),
                    a.genus.to_string(),
                    names.join(", "),
                    a.condition,
                    if a.redundant { " (redundant)" } else { "" }
                ));
            }
            emit(out, &s)?;
        }
    }
    Ok(0)
}
