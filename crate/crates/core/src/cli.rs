//! The `laddertw` command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 malformed input or usage
//! error, 3 oracle budget exceeded or search without result.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::decomposition::{
    exact_treewidth_with, validate as validate_td, Budget, ExactOptions, Violation,
};
use crate::graph::Graph;
use crate::io::{read_gr, read_td, write_gr, write_td};
use crate::ladder::{classify, find_ladders};
use crate::phylo::{self, PhyloTree};
use crate::reducer::{reduce_with, ReductionPolicy};
use crate::search::{tight_search, SearchOutcome, SearchParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "laddertw", version, about = "Treewidth-preserving ladder reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact treewidth of a graph.
    Tw {
        graph: PathBuf,
        /// Write an optimal tree decomposition here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check a tree decomposition against a graph.
    Validate { graph: PathBuf, decomposition: PathBuf },
    /// List the maximal ladders of a graph.
    Ladders {
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_length: usize,
    },
    /// Shorten ladders without changing the treewidth.
    Reduce(ReduceArgs),
    /// Display graphs and reductions of phylogenetic tree pairs.
    Phylo {
        #[command(subcommand)]
        command: PhyloCommand,
    },
    /// Search for a graph where lengthening a short ladder raises the
    /// treewidth.
    TightSearch {
        /// Treewidth before lengthening (3 uses a length-3 ladder, higher
        /// values a length-2 ladder).
        #[arg(long, default_value_t = 3)]
        tw: usize,
        /// Largest number of vertices before lengthening.
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        trials: usize,
        /// Write before/after graphs and decompositions into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ReduceArgs {
    graph: PathBuf,
    /// Enable the treewidth-4 rule (shorten to length 3 when certified).
    #[arg(long)]
    aggressive: bool,
    /// `default`, `length5`, `aggressive`, or comma-separated settings
    /// `general=N,aggressive-target=N,allow-aggressive=BOOL,suppress-degree2=BOOL,fixpoint=BOOL`.
    #[arg(long)]
    policy: Option<String>,
    /// Write the JSON reduction report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Write the reduced graph here instead of standard output.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum PhyloCommand {
    /// Write the display graph of two trees.
    Display {
        t1: PathBuf,
        t2: PathBuf,
        /// Suppress identified leaves of degree 2.
        #[arg(long)]
        suppress: bool,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Apply subtree and common chain reduction to exhaustion.
    Reduce {
        t1: PathBuf,
        t2: PathBuf,
        #[arg(long, default_value_t = phylo::MIN_CHAIN_KEEP)]
        keep: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn malformed(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_MALFORMED,
        message: message.to_string(),
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line on `argv` (program name first), writing to the
/// given streams. Returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{text}");
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Tw { graph, witness } => tw(&graph, witness.as_deref(), out),
        Command::Validate {
            graph,
            decomposition,
        } => validate(&graph, &decomposition, out),
        Command::Ladders { graph, min_length } => ladders(&graph, min_length, out),
        Command::Reduce(args) => reduce(&args, out),
        Command::Phylo { command } => match command {
            PhyloCommand::Display {
                t1,
                t2,
                suppress,
                output,
            } => phylo_display(&t1, &t2, suppress, output.as_deref(), out),
            PhyloCommand::Reduce { t1, t2, keep } => phylo_reduce(&t1, &t2, keep, out, err),
        },
        Command::TightSearch {
            tw,
            max_n,
            seed,
            trials,
            out_dir,
        } => search(tw, max_n, seed, trials, out_dir.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    read_gr(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<PhyloTree, Failure> {
    phylo::parse_newick(&read(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| malformed(format!("writing output: {e}")))
}

fn tw(path: &Path, witness: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let options = ExactOptions {
        budget: Budget::from_env(),
        suppress_degree2: true,
    };
    match exact_treewidth_with(&g, &options) {
        Ok(sol) => {
            if let Some(p) = witness {
                write_file(p, &write_td(&sol.decomposition, &g))?;
            }
            emit(out, &format!("{}\n", sol.width))?;
            Ok(EXIT_OK)
        }
        Err(u) => Err(Failure {
            code: EXIT_UNKNOWN,
            message: format!("budget exceeded: treewidth between {} and {}", u.lower, u.upper),
        }),
    }
}

fn validate(graph: &Path, decomposition: &Path, out: &mut dyn Write) -> Outcome {
    let g = load_graph(graph)?;
    let (td, n) = read_td(&read(decomposition)?)
        .map_err(|e| malformed(format!("{}: {e}", decomposition.display())))?;
    if n != g.num_vertices() {
        return Err(malformed(format!(
            "decomposition is for {n} vertices, graph has {}",
            g.num_vertices()
        )));
    }
    match validate_td(&g, &td) {
        Err(e) => {
            emit(out, &format!("invalid: {e}\n"))?;
            Ok(EXIT_INVALID)
        }
        Ok(report) if report.ok => {
            emit(out, &format!("valid width {}\n", td.width()))?;
            Ok(EXIT_OK)
        }
        Ok(report) => {
            let mut text = format!("invalid: {} violation(s)\n", report.violations.len());
            for v in &report.violations {
                text.push_str(&format!("{}\n", one_based(v)));
            }
            emit(out, &text)?;
            Ok(EXIT_INVALID)
        }
    }
}

/// Violations with vertices numbered as in the input files.
fn one_based(v: &Violation) -> String {
    match *v {
        Violation::UncoveredVertex(x) => format!("tw1: vertex {} is in no bag", x + 1),
        Violation::ForeignVertex(x) => format!("tw1: bag member {} is not a graph vertex", x + 1),
        Violation::UncoveredEdge(a, b) => format!("tw2: edge {} {} is in no bag", a + 1, b + 1),
        Violation::DisconnectedVertex(x) => {
            format!("tw3: bags containing vertex {} are not connected", x + 1)
        }
    }
}

fn ladders(path: &Path, min_length: usize, out: &mut dyn Write) -> Outcome {
    let g = load_graph(path)?;
    let ids: Vec<_> = g.vertices().collect();
    let pos = |v| ids.binary_search(&v).unwrap() + 1;
    let list = |vs: &[usize]| vs.iter().map(|&v| pos(v).to_string()).collect::<Vec<_>>().join(" ");
    let mut text = String::new();
    for l in find_ladders(&g, min_length) {
        let class = classify(&g, &l).expect("detected ladders verify");
        text.push_str(&format!(
            "length {} top {} bottom {} disconnecting {} degree2-cornerpoints [{}]\n",
            l.length(),
            list(&l.top),
            list(&l.bottom),
            if class.disconnecting { "yes" } else { "no" },
            list(&class.degree2_cornerpoints),
        ));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

/// Parses `--policy`; `--aggressive` switches the aggressive rule on.
fn parse_policy(text: Option<&str>, aggressive: bool) -> Result<ReductionPolicy, Failure> {
    let mut policy = ReductionPolicy::default();
    if let Some(text) = text {
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parse_bool = |v: &str| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(malformed(format!("policy: expected a boolean, found {v:?}"))),
            };
            let parse_num = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| malformed(format!("policy: expected a number, found {v:?}")))
            };
            match item.split_once('=') {
                None => {
                    policy = match item {
                        "default" => ReductionPolicy::default(),
                        "length5" => ReductionPolicy::length5(),
                        "aggressive" => ReductionPolicy::aggressive(),
                        _ => return Err(malformed(format!("policy: unknown preset {item:?}"))),
                    }
                }
                Some(("general", v)) => policy.general_target = parse_num(v)?,
                Some(("aggressive-target", v)) => policy.aggressive_target = parse_num(v)?,
                Some(("allow-aggressive", v)) => policy.allow_aggressive = parse_bool(v)?,
                Some(("suppress-degree2", v)) => policy.suppress_degree2 = parse_bool(v)?,
                Some(("fixpoint", v)) => policy.iterate_to_fixpoint = parse_bool(v)?,
                Some((k, _)) => return Err(malformed(format!("policy: unknown setting {k:?}"))),
            }
        }
    }
    if aggressive {
        policy.allow_aggressive = true;
    }
    policy.check().map_err(|e| malformed(format!("policy: {e}")))?;
    Ok(policy)
}

fn reduce(args: &ReduceArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&args.graph)?;
    let policy = parse_policy(args.policy.as_deref(), args.aggressive)?;
    let (h, report) = reduce_with(&g, &policy, &Budget::from_env())
        .map_err(|e| malformed(format!("policy: {e}")))?;
    if let Some(p) = &args.report {
        let json = serde_json::to_string_pretty(&report).expect("report serialises");
        write_file(p, &(json + "\n"))?;
    }
    let text = write_gr(&h);
    match &args.output {
        Some(p) => write_file(p, &text)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn phylo_display(t1: &Path, t2: &Path, suppress: bool, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let (a, b) = (load_tree(t1)?, load_tree(t2)?);
    let d = phylo::display_graph(&a, &b, suppress).map_err(malformed)?;
    let text = write_gr(&d.graph);
    match output {
        Some(p) => write_file(p, &text)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn phylo_reduce(t1: &Path, t2: &Path, keep: usize, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (a, b) = (load_tree(t1)?, load_tree(t2)?);
    let (x, y, log) = phylo::kernelize(&a, &b, keep).map_err(malformed)?;
    for entry in &log {
        let _ = writeln!(err, "{}", serde_json::to_string(entry).expect("log serialises"));
    }
    emit(out, &format!("{}\n{}\n", phylo::serialize(&x), phylo::serialize(&y)))?;
    Ok(EXIT_OK)
}

fn search(
    tw: usize,
    max_n: Option<usize>,
    seed: u64,
    trials: usize,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    if tw < 1 {
        return Err(malformed("--tw must be at least 1"));
    }
    let mut params = SearchParams::for_tw(tw);
    if let Some(n) = max_n {
        params.max_n = n;
    }
    params.seed = seed;
    params.max_trials = trials;
    match tight_search(&params) {
        SearchOutcome::Found(w) => {
            if let Err(e) = w.check() {
                return Err(Failure {
                    code: EXIT_INVALID,
                    message: format!("witness failed its own check: {e}"),
                });
            }
            let files = [
                ("before.gr", write_gr(&w.graph)),
                ("before.td", write_td(&w.decomposition, &w.graph)),
                ("after.gr", write_gr(&w.lengthened)),
                ("after.td", write_td(&w.lengthened_decomposition, &w.lengthened)),
            ];
            let ids: Vec<_> = w.graph.vertices().collect();
            let pos = |v| ids.binary_search(&v).unwrap() + 1;
            let mut text = format!(
                "c found at trial {}\nc treewidth {} -> {} after adding one square\nc ladder top {} bottom {}\n",
                w.trial,
                w.width,
                w.lengthened_width,
                w.ladder.top.iter().map(|&v| pos(v).to_string()).collect::<Vec<_>>().join(" "),
                w.ladder.bottom.iter().map(|&v| pos(v).to_string()).collect::<Vec<_>>().join(" "),
            );
            for (name, body) in &files {
                text.push_str(&format!("c --- {name}\n{body}"));
            }
            if let Some(dir) = out_dir {
                fs::create_dir_all(dir).map_err(|e| malformed(format!("{}: {e}", dir.display())))?;
                for (name, body) in &files {
                    write_file(&dir.join(name), body)?;
                }
            }
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        SearchOutcome::Exhausted { trials } => Err(Failure {
            code: EXIT_UNKNOWN,
            message: format!("no witness in {trials} trials"),
        }),
        SearchOutcome::Unknown { trials } => Err(Failure {
            code: EXIT_UNKNOWN,
            message: format!("no witness in {trials} trials; some oracle calls ran out of budget"),
        }),
    }
}
