//! Command-line frontend: satisfiability checks, program analysis, the
//! bounded ground oracle, the terminology translator, and hybrid
//! knowledge-base queries.
//!
//! Exit codes: 0 satisfiable, 1 unsatisfiable, 2 unknown, 3 usage or
//! input error. The first stdout line is always SAT, UNSAT or UNKNOWN
//! for the query subcommands.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use folp::analysis::{degree_pred, eliminate_constraints, is_simple, marked_dep_graph, rank};
use folp::ast::Program;
use folp::engine::{
    solve_with_trace, KVariant, Mode, SearchConfig, Verdict,
};
use folp::oracle::{bounded_sat_with, is_answer_set, GroundAtom, OracleConfig};
use folp::shoq::{fhybrid_sat, translate, translate_simple, FHybridKB};
use folp::textio::{parse_dl, parse_program, print_program, to_dot};
use folp::validate::validate_folp;

#[derive(Parser)]
#[command(name = "folp", version, about = "Forest logic program reasoner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Full,
    Simple,
}

#[derive(Clone, Copy, ValueEnum)]
enum KVariantArg {
    Rule9,
    Appendix,
}

#[derive(Args)]
struct EngineFlags {
    /// Blocking strategy; auto picks anywhere blocking for simple programs.
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Depth cap for the iterative search.
    #[arg(long, default_value_t = 50)]
    depth_cap: usize,
    /// Redundancy threshold variant.
    #[arg(long, value_enum, default_value = "rule9")]
    k_variant: KVariantArg,
    /// Search seed (reproducibility bookkeeping; FOLP_SEED overrides).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print one line per applied expansion step to stderr.
    #[arg(long)]
    trace: bool,
}

impl EngineFlags {
    fn config(&self) -> SearchConfig {
        let seed = std::env::var("FOLP_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(self.seed);
        SearchConfig {
            mode: match self.mode {
                ModeArg::Auto => Mode::Auto,
                ModeArg::Full => Mode::Full,
                ModeArg::Simple => Mode::Simple,
            },
            k_variant: match self.k_variant {
                KVariantArg::Rule9 => KVariant::Rule9,
                KVariantArg::Appendix => KVariant::Appendix,
            },
            redundancy_k: None,
            depth_cap: self.depth_cap,
            seed,
            emit_trace: self.trace,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a unary predicate.
    Check {
        /// Program file (.folp).
        file: PathBuf,
        #[arg(long)]
        pred: String,
        #[command(flatten)]
        engine: EngineFlags,
        /// Print the model (universe, then atoms, sorted).
        #[arg(long)]
        emit_model: bool,
        /// Write the final structure as Graphviz DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Translate a terminology into a rule program.
    Translate {
        /// Knowledge-base file (.dl).
        file: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Append the rules of this program to the translation.
        #[arg(long)]
        with_rules: Option<PathBuf>,
        /// Use the transitivity-free translation.
        #[arg(long)]
        simple: bool,
    },
    /// Report diagnostics, degrees, rank and fragment membership.
    Analyze {
        file: PathBuf,
    },
    /// Bounded brute-force search for an open answer set.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        pred: String,
        #[arg(long, default_value_t = 2)]
        max_extra: usize,
        /// Ground-atom limit for the search.
        #[arg(long, default_value_t = 24)]
        atom_limit: usize,
        /// Verify a model file (as produced by `check --emit-model`)
        /// instead of searching.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Hybrid satisfiability: terminology plus rules.
    Fhybrid {
        #[arg(long)]
        dl: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        pred: String,
        #[command(flatten)]
        engine: EngineFlags,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_program(path: &Path) -> Result<Program, String> {
    let text = read(path)?;
    let program = parse_program(&text)
        .map_err(|e| format!("{}:{e}", path.display()))?;
    let diags = validate_folp(&program);
    if !diags.is_empty() {
        let msgs: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(format!("{}: invalid program:\n{}", path.display(), msgs.join("\n")));
    }
    Ok(program)
}

fn print_model(universe: &[String], atoms: &BTreeSet<GroundAtom>) {
    let mut names = universe.to_vec();
    names.sort();
    for u in names {
        println!("universe {u}");
    }
    for a in atoms {
        println!("atom {a}");
    }
}

fn verdict_exit(v: &Verdict) -> ExitCode {
    match v {
        Verdict::Sat { .. } => {
            println!("SAT");
            ExitCode::from(0)
        }
        Verdict::Unsat => {
            println!("UNSAT");
            ExitCode::from(1)
        }
        Verdict::Unknown { reason } => {
            println!("UNKNOWN");
            eprintln!("unknown: {reason}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, pred, engine, emit_model, dot } => {
            let program = load_program(&file)?;
            let config = engine.config();
            let (verdict, trace) =
                solve_with_trace(&program, &pred, &config).map_err(|e| e.to_string())?;
            for line in &trace {
                eprintln!("{line}");
            }
            let code = verdict_exit(&verdict);
            if let Verdict::Sat { model, structure } = &verdict {
                if emit_model {
                    print_model(&model.universe, &model.atoms);
                }
                if let Some(path) = dot {
                    fs::write(&path, to_dot(structure))
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                }
            }
            Ok(code)
        }
        Command::Translate { file, output, with_rules, simple } => {
            let kb = parse_dl(&read(&file)?).map_err(|e| format!("{}:{e}", file.display()))?;
            let translated = if simple {
                translate_simple(&kb).map_err(|e| e.to_string())?
            } else {
                translate(&kb).map_err(|e| e.to_string())?
            };
            let mut rules = translated.rules;
            if let Some(extra) = with_rules {
                rules.extend(load_program(&extra)?.rules);
            }
            let text = print_program(&Program::new(rules));
            match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::from(0))
        }
        Command::Analyze { file } => {
            let text = read(&file)?;
            let program =
                parse_program(&text).map_err(|e| format!("{}:{e}", file.display()))?;
            let diags = validate_folp(&program);
            if !diags.is_empty() {
                for d in &diags {
                    println!("diagnostic: {d}");
                }
                return Ok(ExitCode::from(3));
            }
            println!("rules: {}", program.rules.len());
            println!("constants: {}", program.constants().join(" "));
            let frees: Vec<&str> = program
                .upreds()
                .iter()
                .chain(program.bpreds())
                .filter(|p| program.is_free(p))
                .map(String::as_str)
                .collect();
            println!("free: {}", frees.join(" "));
            let eliminated = eliminate_constraints(&program).map_err(|e| e.to_string())?;
            for p in eliminated.upreds() {
                println!("degree {p}: {}", degree_pred(p, &eliminated).unwrap_or(0));
            }
            println!("rank: {}", rank(&eliminated));
            let g = marked_dep_graph(&eliminated);
            let marked = g.arcs.values().filter(|m| **m).count();
            println!(
                "marked-graph: {} vertices, {} arcs ({} marked)",
                g.vertices.len(),
                g.arcs.len(),
                marked
            );
            println!("simple: {}", is_simple(&eliminated));
            Ok(ExitCode::from(0))
        }
        Command::Oracle { file, pred, max_extra, atom_limit, verify } => {
            let program = load_program(&file)?;
            if let Some(model_path) = verify {
                let text = read(&model_path)?;
                let mut universe = Vec::new();
                let mut atoms = BTreeSet::new();
                for line in text.lines() {
                    let line = line.trim();
                    if let Some(u) = line.strip_prefix("universe ") {
                        universe.push(u.trim().to_string());
                    } else if let Some(a) = line.strip_prefix("atom ") {
                        atoms.insert(parse_atom(a.trim())?);
                    }
                }
                let ok = is_answer_set(&program, &universe, &atoms)
                    .map_err(|e| e.to_string())?;
                let has_pred = atoms.iter().any(|a| a.pred == pred);
                if ok && has_pred {
                    println!("SAT");
                    return Ok(ExitCode::from(0));
                }
                println!("UNSAT");
                eprintln!(
                    "model verification failed (answer set: {ok}, predicate present: {has_pred})"
                );
                return Ok(ExitCode::from(1));
            }
            let found = bounded_sat_with(
                &program,
                &pred,
                max_extra,
                OracleConfig { atom_limit },
            )
            .map_err(|e| e.to_string())?;
            match found {
                Some(hit) => {
                    println!("SAT");
                    print_model(&hit.universe, &hit.atoms);
                    Ok(ExitCode::from(0))
                }
                None => {
                    println!("UNSAT");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Fhybrid { dl, rules, pred, engine } => {
            let sigma = parse_dl(&read(&dl)?).map_err(|e| format!("{}:{e}", dl.display()))?;
            let program = load_program(&rules)?;
            let kb = FHybridKB { sigma, program };
            let verdict =
                fhybrid_sat(&kb, &pred, &engine.config()).map_err(|e| e.to_string())?;
            Ok(verdict_exit(&verdict))
        }
    }
}

fn parse_atom(text: &str) -> Result<GroundAtom, String> {
    let open = text.find('(').ok_or_else(|| format!("bad atom `{text}`"))?;
    let close = text.rfind(')').ok_or_else(|| format!("bad atom `{text}`"))?;
    let pred = text[..open].to_string();
    let args: Vec<String> =
        text[open + 1..close].split(',').map(|s| s.trim().to_string()).collect();
    if args.is_empty() || args.len() > 2 {
        return Err(format!("bad atom `{text}`"));
    }
    Ok(GroundAtom { pred, args })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
