//! Single binary exposing the build / check / rank / search pipeline.
//!
//! Every run emits a JSON manifest on standard error (command line,
//! configuration hash, version, wall time, outputs produced), so results
//! can be traced back to the exact invocation. Exit codes: 0 success,
//! 1 validation error, 2 internal assertion failure.

use clap::{Args, Parser, Subcommand};
use neumaier_core::coherent::{
    distinct_eigenvalue_bound, intersection_numbers, rank_bound_check, structural_flags, support,
    wl_closure, DEFAULT_WL_CAP,
};
use neumaier_core::constructions::{
    gamma, gk_graph, icosahedron, omega_fixture, smallest_common_primitive_root, validate_drg,
    whiteman_graph, GammaSpec,
};
use neumaier_core::cyclotomy::cyclotomic_numbers;
use neumaier_core::field::{build_field, prime_power_decompose, FieldSpec};
use neumaier_core::graph::{read_graph_file, write_graph_file, Graph};
use neumaier_core::regularity::classify;
use neumaier_core::search::{
    nexus_table, solve_m3, solve_m4, NexusOptions, SearchHit, SolveOptions, VerifyLevel,
};
use neumaier_core::Error as CoreError;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "neumaier",
    version,
    about = "Cyclotomic Neumaier graphs: build, classify, refine, search"
)]
struct Cli {
    /// Worker threads for search and refinement (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cyclotomic number tables
    Cyclo {
        #[command(subcommand)]
        sub: CycloCmd,
    },
    /// Build the two-field cyclotomic Cayley graph
    Gamma {
        #[command(subcommand)]
        sub: GammaCmd,
    },
    /// Build the antipodal blow-up of a distance-regular graph
    Gk {
        #[command(subcommand)]
        sub: GkCmd,
    },
    /// Build the Z/pqZ clique-spread graph
    Whiteman {
        #[command(subcommand)]
        sub: WhitemanCmd,
    },
    /// Write a built-in fixture graph
    Fixture(FixtureArgs),
    /// Classify a graph (edge-regularity, regular clique, verdict)
    Check(CheckArgs),
    /// Coherent closure via pair refinement
    Wl {
        #[command(subcommand)]
        sub: WlCmd,
    },
    /// Prime-power pair searches
    Search {
        #[command(subcommand)]
        sub: SearchCmd,
    },
}

#[derive(Subcommand)]
enum CycloCmd {
    /// Print the m x m cyclotomic number table of GF(p^r)
    Table(CycloArgs),
}

#[derive(Args)]
struct CycloArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    m: u64,
    /// element index of the primitive element (default: smallest)
    #[arg(long)]
    alpha_index: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum GammaCmd {
    Build(GammaArgs),
}

#[derive(Args)]
struct GammaArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    q1: u64,
    #[arg(long)]
    q2: u64,
    /// element index of the first primitive element (default: smallest)
    #[arg(long)]
    alpha1: Option<u64>,
    #[arg(long)]
    alpha2: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum GkCmd {
    Build(GkArgs),
}

#[derive(Args)]
struct GkArgs {
    /// graph file (.json or .g6) holding the distance-regular input
    #[arg(long)]
    drg: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum WhitemanCmd {
    Build(WhitemanArgs),
}

#[derive(Args)]
struct WhitemanArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// common primitive root (default: smallest)
    #[arg(long)]
    alpha: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FixtureArgs {
    /// omega | icosahedron
    name: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    graph: PathBuf,
    /// candidate clique, comma-separated vertex ids
    #[arg(long, value_delimiter = ',')]
    clique: Option<Vec<usize>>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum WlCmd {
    /// Compute the coherent rank (and optionally flags and support)
    Rank(WlArgs),
}

#[derive(Args)]
struct WlArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WL_CAP)]
    cap: usize,
    #[arg(long)]
    flags: bool,
    #[arg(long)]
    support: bool,
    /// also report the number of distinct adjacency eigenvalues
    #[arg(long)]
    eigenvalues: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// The order-3 / order-4 quadratic-form searches (Tables 1 and 2)
    Pairs(PairsArgs),
    /// Strictly Neumaier hits grouped by nexus (Table 3)
    Nexus(NexusArgs),
}

#[derive(Args)]
struct PairsArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    q1_max: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// none | construct | wl
    #[arg(long, default_value = "none")]
    verify: String,
    /// also emit pairs with gcd(q1,q2) > 1 (outside the rank corollaries)
    #[arg(long)]
    include_same_prime: bool,
}

#[derive(Args)]
struct NexusArgs {
    #[arg(long)]
    m_max: u64,
    #[arg(long)]
    q2_max: u64,
    #[arg(long)]
    e_max: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    config_hash: String,
    outputs: Vec<String>,
    version: String,
    wall_ms: u128,
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is built once");
    }
    let start = Instant::now();
    let mut outputs = Vec::new();
    let result = run(&cli.command, &mut outputs);
    let manifest = RunManifest {
        command: argv.join(" "),
        config_hash: {
            let mut h = Sha256::new();
            h.update(argv.join("\u{1f}").as_bytes());
            hex(&h.finalize())
        },
        outputs,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_ms: start.elapsed().as_millis(),
    };
    eprintln!(
        "{}",
        serde_json::to_string(&manifest).expect("manifest serializes")
    );
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.downcast_ref::<CoreError>() {
                Some(CoreError::Internal(_)) => 2,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

type AnyResult<T> = Result<T, Box<dyn std::error::Error>>;

fn run(cmd: &Command, outputs: &mut Vec<String>) -> AnyResult<()> {
    match cmd {
        Command::Cyclo {
            sub: CycloCmd::Table(args),
        } => cyclo_table(args),
        Command::Gamma {
            sub: GammaCmd::Build(args),
        } => gamma_build(args, outputs),
        Command::Gk {
            sub: GkCmd::Build(args),
        } => gk_build(args, outputs),
        Command::Whiteman {
            sub: WhitemanCmd::Build(args),
        } => whiteman_build(args, outputs),
        Command::Fixture(args) => fixture(args, outputs),
        Command::Check(args) => check(args),
        Command::Wl {
            sub: WlCmd::Rank(args),
        } => wl_rank(args),
        Command::Search {
            sub: SearchCmd::Pairs(args),
        } => search_pairs(args, outputs),
        Command::Search {
            sub: SearchCmd::Nexus(args),
        } => search_nexus(args, outputs),
    }
}

fn field_with_alpha(
    p: u64,
    r: u32,
    alpha_index: Option<u64>,
) -> AnyResult<(FieldSpec, neumaier_core::field::DlogTable)> {
    let f = build_field(p, r)?;
    let alpha = match alpha_index {
        Some(idx) => f.from_index(idx),
        None => f.smallest_primitive(),
    };
    let table = f.dlog_table(&alpha)?;
    Ok((f, table))
}

fn cyclo_table(args: &CycloArgs) -> AnyResult<()> {
    let (f, table) = field_with_alpha(args.p, args.r, args.alpha_index)?;
    let cyc = cyclotomic_numbers(&f, &table, args.m)?;
    if args.json {
        #[derive(Serialize)]
        struct Wire<'a> {
            alpha_index: u64,
            counts: Vec<&'a [u64]>,
            m: u64,
            n: u64,
            q: u64,
        }
        let m = args.m as usize;
        let rows: Vec<&[u64]> = (0..m).map(|a| &cyc.counts()[a * m..(a + 1) * m]).collect();
        let wire = Wire {
            alpha_index: cyc.alpha_index(),
            counts: rows,
            m: args.m,
            n: cyc.n(),
            q: f.q(),
        };
        println!("{}", serde_json::to_string(&wire)?);
    } else {
        println!(
            "c_{}(alpha; a, b) for GF({}) with alpha index {}, n = {}",
            args.m,
            f.q(),
            cyc.alpha_index(),
            cyc.n()
        );
        let width = cyc
            .counts()
            .iter()
            .max()
            .copied()
            .unwrap_or(0)
            .to_string()
            .len()
            .max(2);
        for a in 0..args.m as i64 {
            let row: Vec<String> = (0..args.m as i64)
                .map(|b| format!("{:>width$}", cyc.get(a, b)))
                .collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(())
}

fn spec_from_args(args: &GammaArgs) -> AnyResult<GammaSpec> {
    let (p1, r1) = prime_power_decompose(args.q1)
        .ok_or_else(|| CoreError::Internal(format!("{} is not a prime power", args.q1)))
        .map_err(validation)?;
    let (p2, r2) = prime_power_decompose(args.q2)
        .ok_or_else(|| CoreError::Internal(format!("{} is not a prime power", args.q2)))
        .map_err(validation)?;
    let (f1, a1) = field_with_alpha(p1, r1, args.alpha1)?;
    let (f2, a2) = field_with_alpha(p2, r2, args.alpha2)?;
    Ok(GammaSpec::new(args.m, f1, a1, f2, a2)?)
}

// not-a-prime-power is user input trouble, not an internal bug
fn validation(e: CoreError) -> Box<dyn std::error::Error> {
    match e {
        CoreError::Internal(msg) => msg.into(),
        other => Box::new(other),
    }
}

fn gamma_build(args: &GammaArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let spec = spec_from_args(args)?;
    let graph = gamma(&spec)?;
    write_graph_file(&args.out, &graph)?;
    outputs.push(args.out.display().to_string());
    println!(
        "gamma m={} q1={} q2={} alpha1={} alpha2={}: {} vertices, degree {}",
        args.m,
        args.q1,
        args.q2,
        spec.alpha1.alpha_index(),
        spec.alpha2.alpha_index(),
        graph.n(),
        graph.degree(0)
    );
    Ok(())
}

fn gk_build(args: &GkArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let input = read_graph_file(&args.drg)?;
    let drg = validate_drg(input)?;
    let graph = gk_graph(&drg)?;
    write_graph_file(&args.out, &graph)?;
    outputs.push(args.out.display().to_string());
    println!(
        "blow-up of {}-vertex {}-antipodal input: {} vertices, degree {}",
        drg.graph.n(),
        drg.a,
        graph.n(),
        graph.degree(0)
    );
    Ok(())
}

fn whiteman_build(args: &WhitemanArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let alpha = match args.alpha {
        Some(a) => a,
        None => smallest_common_primitive_root(args.p, args.q)
            .ok_or("no common primitive root exists")?,
    };
    let graph = whiteman_graph(args.p, args.q, alpha, &[])?;
    write_graph_file(&args.out, &graph)?;
    outputs.push(args.out.display().to_string());
    println!(
        "whiteman p={} q={} alpha={}: {} vertices, degree {}",
        args.p,
        args.q,
        alpha,
        graph.n(),
        graph.degree(0)
    );
    Ok(())
}

fn fixture(args: &FixtureArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let graph = match args.name.as_str() {
        "omega" => omega_fixture(),
        "icosahedron" => icosahedron(),
        other => return Err(format!("unknown fixture {other:?} (omega | icosahedron)").into()),
    };
    write_graph_file(&args.out, &graph)?;
    outputs.push(args.out.display().to_string());
    println!("fixture {}: {} vertices", args.name, graph.n());
    Ok(())
}

fn check(args: &CheckArgs) -> AnyResult<()> {
    let graph: Graph = read_graph_file(&args.graph)?;
    let report = classify(&graph, args.clique.as_deref())?;
    if args.json {
        #[derive(Serialize)]
        struct Wire {
            clique: Option<Vec<usize>>,
            clique_order: Option<usize>,
            k: Option<usize>,
            lambda: Option<usize>,
            mu_set: Vec<usize>,
            nexus: Option<usize>,
            srg: bool,
            v: usize,
            verdict: String,
        }
        let wire = Wire {
            clique: report.clique.clone(),
            clique_order: report.clique_order,
            k: report.k,
            lambda: report.lambda,
            mu_set: report.mu_set.clone(),
            nexus: report.nexus,
            srg: report.srg,
            v: report.v,
            verdict: report.verdict.to_string(),
        };
        println!("{}", serde_json::to_string(&wire)?);
    } else {
        println!("vertices: {}", report.v);
        match (report.k, report.lambda) {
            (Some(k), Some(l)) => println!("edge-regular: ({}, {}, {})", report.v, k, l),
            _ => println!("edge-regular: no ({:?})", report.witness),
        }
        println!("mu-set: {:?}", report.mu_set);
        match (report.nexus, report.clique_order) {
            (Some(e), Some(s)) => println!("regular clique: order {s}, nexus {e}"),
            _ => println!("regular clique: none found"),
        }
        println!("verdict: {}", report.verdict);
    }
    Ok(())
}

fn wl_rank(args: &WlArgs) -> AnyResult<()> {
    let graph = read_graph_file(&args.graph)?;
    if graph.n() > args.cap {
        return Err(Box::new(CoreError::WlCapExceeded {
            n: graph.n(),
            cap: args.cap,
        }));
    }
    let c = wl_closure(&graph, args.cap)?;
    let gamma_m = graph.meta().and_then(|m| m.m);
    let bounds = rank_bound_check(&graph, &c, gamma_m);
    if args.json {
        #[derive(Serialize)]
        struct Wire {
            commutative: Option<bool>,
            diag_classes: usize,
            distinct_eigenvalues: Option<usize>,
            homogeneous: Option<bool>,
            n: usize,
            rank: u32,
            rank_upper_bound: Option<u32>,
            rounds: usize,
            support: Option<Vec<u32>>,
            symmetric: Option<bool>,
        }
        let flags = args.flags.then(|| structural_flags(&c));
        let wire = Wire {
            commutative: flags.map(|f| f.commutative),
            diag_classes: c.diag_classes().len(),
            distinct_eigenvalues: if args.eigenvalues {
                distinct_eigenvalue_bound(&graph, &c)
            } else {
                None
            },
            homogeneous: flags.map(|f| f.homogeneous),
            n: c.n(),
            rank: c.rank(),
            rank_upper_bound: bounds.upper.map(|(b, _)| b),
            rounds: c.rounds(),
            support: if args.support {
                Some(support(&graph, &c)?.classes)
            } else {
                None
            },
            symmetric: flags.map(|f| f.symmetric),
        };
        println!("{}", serde_json::to_string(&wire)?);
    } else {
        println!(
            "refinement path: exact pair refinement ({} rounds)",
            c.rounds()
        );
        println!("coherent rank: {}", c.rank());
        if let Some((bound, ok)) = bounds.upper {
            println!(
                "rank <= m + 3 = {bound}: {}",
                if ok { "yes" } else { "VIOLATED" }
            );
        }
        if args.flags {
            let f = structural_flags(&c);
            println!(
                "flags: homogeneous={} symmetric={} commutative={}{}",
                f.homogeneous,
                f.symmetric,
                f.commutative,
                if f.commutative_exhaustive {
                    ""
                } else {
                    " (sampled)"
                }
            );
        }
        if args.support {
            let s = support(&graph, &c)?;
            println!(
                "support: cardinality {} (classes {:?})",
                s.cardinality, s.classes
            );
        }
        if args.eigenvalues {
            match distinct_eigenvalue_bound(&graph, &c) {
                Some(d) => println!("distinct adjacency eigenvalues: {d}"),
                None => println!(
                    "distinct adjacency eigenvalues: unavailable (needs rank <= 16 and n <= 256)"
                ),
            }
        }
        let _ = intersection_numbers(&c); // keeps the tensor path exercised
    }
    Ok(())
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn pairs_csv(hits: &[SearchHit]) -> String {
    let mut out = String::from("m,q1,q2,u1,v1,u2,v2,nexus,verified,rank\n");
    for h in hits {
        let uv = |x: Option<(i64, i64)>| match x {
            Some((u, v)) => (u.to_string(), v.to_string()),
            None => (String::new(), String::new()),
        };
        let (u1, v1) = uv(h.uv1);
        let (u2, v2) = uv(h.uv2);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            h.m,
            h.q1,
            h.q2,
            u1,
            v1,
            u2,
            v2,
            h.nexus,
            csv_escape(&h.verified.to_string()),
            h.rank.map(|r| r.to_string()).unwrap_or_default()
        ));
    }
    out
}

fn search_pairs(args: &PairsArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let verify = match args.verify.as_str() {
        "none" => VerifyLevel::None,
        "construct" => VerifyLevel::Construct,
        "wl" => VerifyLevel::Wl,
        other => {
            return Err(format!("unknown verify level {other:?} (none | construct | wl)").into())
        }
    };
    let opts = SolveOptions {
        verify,
        ..Default::default()
    };
    let hits = match args.m {
        3 => solve_m3(args.q1_max, opts)?,
        4 => solve_m4(args.q1_max, opts)?,
        other => return Err(format!("pairs search supports m = 3 or 4, got {other}").into()),
    };
    let rows: Vec<SearchHit> = hits
        .into_iter()
        .filter(|h| args.include_same_prime || !h.same_prime)
        .collect();
    let csv = pairs_csv(&rows);
    print!("{csv}");
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv)?;
        outputs.push(path.display().to_string());
    }
    eprintln!("{} pairs", rows.len());
    Ok(())
}

fn search_nexus(args: &NexusArgs, outputs: &mut Vec<String>) -> AnyResult<()> {
    let hits = nexus_table(args.m_max, args.q2_max, args.e_max, NexusOptions::default())?;
    let mut csv = String::from("e,m,q1,q2\n");
    for h in &hits {
        csv.push_str(&format!("{},{},{},{}\n", h.nexus, h.m, h.q1, h.q2));
    }
    print!("{csv}");
    if let Some(path) = &args.csv {
        std::fs::write(path, &csv)?;
        outputs.push(path.display().to_string());
    }
    eprintln!("{} strictly Neumaier hits", hits.len());
    Ok(())
}
