use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use antimagic_core::pipeline::Trace;
use antimagic_core::{
    classify_regime, decompose, degenerate_index, gen_corpus, gen_instance, label_with,
    parse_graph, parse_labelling, verify_antimagic, verify_bijection, verify_stage_properties,
    write_graph, write_labelling, Error, Graph, LabelOptions, LabelStatus, Regime, RegimeTarget,
};

/// Antimagic labellings for dense graphs with maximum degree n-4.
#[derive(Parser)]
#[command(name = "antimagic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Label a graph file.
    Label(LabelArgs),
    /// Check a labelling against its graph.
    Verify { graph: PathBuf, labelling: PathBuf },
    /// Write generated instances.
    Generate(GenerateArgs),
    /// Generate, label and verify many instances.
    Stress(StressArgs),
    /// Show how a graph decomposes and how the construction fares on it.
    Explain {
        graph: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Seed for the fallback search and shuffled leftovers.
    #[arg(long, env = "ANTIMAGIC_SEED", default_value_t = 0)]
    seed: u64,
    /// Iteration budget of the randomized fallback search.
    #[arg(long, default_value_t = 1_000_000)]
    fallback_iters: u64,
    /// Use this regime's construction regardless of classification.
    #[arg(long, value_parser = parse_regime)]
    force_regime: Option<Regime>,
    /// Label leftover edges in a seeded shuffled order.
    #[arg(long)]
    shuffle: bool,
}

impl RunArgs {
    fn options(&self) -> LabelOptions {
        LabelOptions {
            seed: self.seed,
            fallback_iters: self.fallback_iters,
            force_regime: self.force_regime,
            shuffle: self.shuffle,
        }
    }
}

#[derive(Args)]
struct LabelArgs {
    graph: PathBuf,
    /// Labelling output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Vertex count of a single instance.
    #[arg(long, conflicts_with_all = ["count", "n_min", "n_max"])]
    n: Option<usize>,
    /// Regime of a single instance.
    #[arg(long, default_value = "main", value_parser = parse_target)]
    regime: RegimeTarget,
    /// Number of instances, written into the `--out` directory.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 16)]
    n_min: usize,
    #[arg(long, default_value_t = 48)]
    n_max: usize,
    /// Comma-separated regimes cycled through by a corpus.
    #[arg(long, value_delimiter = ',', value_parser = parse_target)]
    regimes: Vec<RegimeTarget>,
    #[arg(long, env = "ANTIMAGIC_SEED", default_value_t = 1)]
    seed: u64,
    /// Output file (single instance) or directory (corpus).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StressArgs {
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 16)]
    n_min: usize,
    #[arg(long, default_value_t = 48)]
    n_max: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_target)]
    regimes: Vec<RegimeTarget>,
    #[arg(long, env = "ANTIMAGIC_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    fallback_iters: u64,
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    s.parse()
}

fn parse_target(s: &str) -> Result<RegimeTarget, String> {
    s.parse()
}

/// Exit codes: 1 verification failed, 2 bad input, 3 outside what can be
/// labelled or generated, 4 internal proof violation.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::ProofViolation { .. }) => 4,
        Some(
            Error::Parse { .. }
            | Error::DuplicateEdge(..)
            | Error::SelfLoop(_)
            | Error::VertexOutOfRange { .. },
        ) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    Ok(parse_graph(&read(path)?)?)
}

fn cmd_label(args: &LabelArgs) -> anyhow::Result<u8> {
    let g = load_graph(&args.graph)?;
    let out = label_with(&g, &args.run.options())?;
    let text = write_labelling(&g, &out.labelling);
    let status = format!("{:?} {}", out.status, out.regime);
    match &args.out {
        Some(path) => {
            write(path, &text)?;
            println!("{status}");
        }
        None => {
            print!("{text}");
            eprintln!("{status}");
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &args.trace {
        write(path, &Trace::new(&g, &out).to_json())?;
    }
    Ok(0)
}

fn cmd_verify(graph: &Path, labelling: &Path) -> anyhow::Result<u8> {
    let g = load_graph(graph)?;
    let l = parse_labelling(&g, &read(labelling)?)?;
    let b = verify_bijection(&g, &l);
    if !b.is_ok() {
        println!("not a bijection onto 1..={}", g.edge_count());
        if !b.duplicates.is_empty() {
            println!("  duplicate labels: {:?}", b.duplicates);
        }
        if !b.missing.is_empty() {
            println!("  missing labels: {:?}", b.missing);
        }
        if !b.out_of_range.is_empty() {
            println!("  out of range: {:?}", b.out_of_range);
        }
        return Ok(1);
    }
    let report = verify_antimagic(&g, &l);
    if report.is_antimagic() {
        println!(
            "ok: {} vertices, {} edges, all sums distinct",
            g.vertex_count(),
            g.edge_count()
        );
        return Ok(0);
    }
    println!("{} pairs of vertices share a sum", report.conflicts.len());
    for c in &report.conflicts {
        println!(
            "  vertices {} and {}: sum {} (labels {:?} / {:?})",
            c.a, c.b, c.sum, c.labels_a, c.labels_b
        );
    }
    Ok(1)
}

fn cmd_generate(args: &GenerateArgs) -> anyhow::Result<u8> {
    if let Some(n) = args.n {
        let g = gen_instance(n, args.regime, args.seed)?;
        match &args.out {
            Some(path) => write(path, &write_graph(&g))?,
            None => print!("{}", write_graph(&g)),
        }
        return Ok(0);
    }
    let Some(count) = args.count else {
        bail!("give either --n for one instance or --count for a corpus");
    };
    let Some(dir) = &args.out else {
        bail!("a corpus needs an --out directory");
    };
    let regimes = if args.regimes.is_empty() {
        RegimeTarget::CONSTRUCTIVE.to_vec()
    } else {
        args.regimes.clone()
    };
    let corpus = gen_corpus(count, (args.n_min, args.n_max), &regimes, args.seed)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (i, entry) in corpus.iter().enumerate() {
        let name = format!("{i:04}-{}-n{}-s{}.graph", entry.target, entry.n, entry.seed);
        write(&dir.join(name), &write_graph(&entry.graph))?;
    }
    println!("wrote {} graphs to {}", corpus.len(), dir.display());
    Ok(0)
}

enum Outcome {
    Verified {
        status: LabelStatus,
        exchanges: usize,
    },
    Unverified,
    Failed(Error),
}

fn cmd_stress(args: &StressArgs) -> anyhow::Result<u8> {
    let regimes = if args.regimes.is_empty() {
        RegimeTarget::CONSTRUCTIVE.to_vec()
    } else {
        args.regimes.clone()
    };
    let opts = LabelOptions {
        seed: args.seed,
        fallback_iters: args.fallback_iters,
        ..Default::default()
    };
    // Instance i: regime i mod |regimes|, seed + i; results keep index order.
    let results: Vec<(RegimeTarget, usize, Outcome)> = (0..args.count)
        .into_par_iter()
        .map(|i| {
            let target = regimes[i % regimes.len()];
            let seed = args.seed.wrapping_add(i as u64);
            let (n, g) = match antimagic_core::gen_sampled(target, (args.n_min, args.n_max), seed) {
                Ok(x) => x,
                Err(e) => return (target, 0, Outcome::Failed(e)),
            };
            let outcome = match label_with(&g, &opts) {
                Ok(out) => {
                    let ok = verify_bijection(&g, &out.labelling).is_ok()
                        && verify_antimagic(&g, &out.labelling).is_antimagic();
                    if ok {
                        Outcome::Verified {
                            status: out.status,
                            exchanges: out.resolution.map_or(0, |r| r.applied.len()),
                        }
                    } else {
                        Outcome::Unverified
                    }
                }
                Err(e) => Outcome::Failed(e),
            };
            (target, n, outcome)
        })
        .collect();

    #[derive(Default)]
    struct Row {
        total: usize,
        verified: usize,
        fallback: usize,
        violations: usize,
        other: usize,
    }
    let mut rows: BTreeMap<RegimeTarget, Row> = BTreeMap::new();
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut unverified = 0;
    let mut violations = 0;
    let mut other = 0;
    for (i, (target, n, outcome)) in results.iter().enumerate() {
        let row = rows.entry(*target).or_default();
        row.total += 1;
        match outcome {
            Outcome::Verified { status, exchanges } => {
                row.verified += 1;
                if *status == LabelStatus::SearchedFallback {
                    row.fallback += 1;
                } else {
                    *histogram.entry(*exchanges).or_default() += 1;
                }
            }
            Outcome::Unverified => {
                unverified += 1;
                eprintln!("instance {i} ({target}, n = {n}): labelling failed verification");
            }
            Outcome::Failed(e) => {
                if matches!(e, Error::ProofViolation { .. }) {
                    row.violations += 1;
                    violations += 1;
                } else {
                    row.other += 1;
                    other += 1;
                }
                eprintln!("instance {i} ({target}, n = {n}): {e}");
            }
        }
    }

    println!(
        "{:<24} {:>7} {:>9} {:>9} {:>15} {:>7}",
        "regime", "total", "verified", "fallback", "ProofViolation", "errors"
    );
    for (target, row) in &rows {
        println!(
            "{:<24} {:>7} {:>9} {:>9} {:>15} {:>7}",
            target.as_str(),
            row.total,
            row.verified,
            row.fallback,
            row.violations,
            row.other
        );
    }
    let verified: usize = rows.values().map(|r| r.verified).sum();
    println!(
        "{verified}/{} verified, {violations} ProofViolation",
        results.len()
    );
    println!("exchanges per constructed instance:");
    for (k, count) in &histogram {
        println!("  {k}: {count}");
    }
    Ok(if violations > 0 {
        4
    } else if unverified > 0 {
        1
    } else if other > 0 {
        3
    } else {
        0
    })
}

fn cmd_explain(graph: &Path, run: &RunArgs) -> anyhow::Result<u8> {
    let g = load_graph(graph)?;
    let n = g.vertex_count();
    println!(
        "n = {n}, m = {}, max degree = {} (7n = {})",
        g.edge_count(),
        g.max_degree(),
        7 * n
    );
    match decompose(&g) {
        Ok(d) => {
            println!("root r = {}", d.r + 1);
            println!(
                "u1, u2, u3 = {}, {}, {}",
                d.u[0] + 1,
                d.u[1] + 1,
                d.u[2] + 1
            );
            println!("d' = {:?}", d.d_prime);
            let triple: Vec<String> = d
                .triple_edges
                .iter()
                .map(|&(a, b)| format!("u{}u{}", a + 1, b + 1))
                .collect();
            println!("edges within the triple: [{}]", triple.join(", "));
            println!("H: {} vertices, {} edges", d.n_h, d.m_h);
            println!("regime: {}", classify_regime(&g, &d));
            if let Some(i) = degenerate_index(&d) {
                println!("i = {i}");
            }
        }
        Err(e) => println!("no decomposition: {e}"),
    }
    let out = label_with(&g, &run.options())?;
    println!("status: {:?} ({})", out.status, out.regime);
    if let (Some(s), Some(d)) = (&out.stage, &out.decomposition) {
        println!("stage properties (margin >= 0 holds):");
        for c in verify_stage_properties(&g, s, d).checks {
            let mark = if c.passed { "ok" } else { "FAILED" };
            println!("  {:<32} margin {:>6}  {mark}", c.name, c.margin);
        }
    }
    if let Some(r) = &out.resolution {
        let applied: Vec<String> = r.applied.iter().map(ToString::to_string).collect();
        println!(
            "resolution: case {}, {} plans tried, applied [{}]",
            r.case,
            r.plans_tried,
            applied.join(", ")
        );
    }
    for w in &out.warnings {
        println!("warning: {w}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Label(args) => cmd_label(args),
        Command::Verify { graph, labelling } => cmd_verify(graph, labelling),
        Command::Generate(args) => cmd_generate(args),
        Command::Stress(args) => cmd_stress(args),
        Command::Explain { graph, run } => cmd_explain(graph, run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(Error::ProofViolation { reproducer, .. }) = e.downcast_ref::<Error>() {
                eprintln!("reproducer:\n{reproducer}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
