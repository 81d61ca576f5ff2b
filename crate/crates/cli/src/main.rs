//! Command-line front end: constructions, certification, expander sampling
//! and verification, the integer-code pipeline, finite-group evaluation, and
//! the bridge from word sets to linear codes.
//!
//! Exit codes: 0 success, 1 verification failure (a certificate or distance
//! below its target), 2 usage errors including malformed JSON.

mod manifest;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use groupcode::abelian::{
    build_abelian_code, distance_exact, generator_matrix, mod_p_independence, mod_p_rank,
    AbelianCodeOpts, IntMatrix,
};
use groupcode::certify::{certified_delta, report, CertifyOpts};
use groupcode::constructions::{
    amplify, hadamard_code_capped, iterative_compose, random_syndrome_code, sample_verified,
    spielman_chain, AmplifyParams, ComposeParams, SpielmanParams, SyndromeParams,
};
use groupcode::expanders::{verify_unique_neighbors, BipartiteGraph};
use groupcode::groups::{
    exact_delta_vector_space, pmsg_sample_size, solvable_random_code, FiniteGroup, GroupSpec,
    PmsgParams,
};
use groupcode::words::WordSet;
use manifest::Runner;
use num_rational::Ratio;
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "groupcode", version, about = "test subsets over groups: construct, certify, verify")]
struct Cli {
    /// worker threads for syndrome scans (1 keeps runs bit-exact baseline)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a test subset
    Construct {
        #[command(subcommand)]
        kind: ConstructCmd,
    },
    /// Compute detection-probability certificates for a word set
    Certify(CertifyArgs),
    /// Sample or verify bipartite expander graphs
    Expander {
        #[command(subcommand)]
        kind: ExpanderCmd,
    },
    /// Integer parity-map codes from verified graphs
    Abelian {
        #[command(subcommand)]
        kind: AbelianCmd,
    },
    /// Finite-group backends: exact deltas, lattices, sampled codes
    Groups {
        #[command(subcommand)]
        kind: GroupsCmd,
    },
    /// Abelianize a word set mod p into a generator matrix and its distance
    Bridge(BridgeArgs),
    /// Full detection report for a word set
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Subset-product code: 2^k words, detection probability 1/2 everywhere
    Hadamard {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random syndrome construction with an exhaustive certificate
    Syndrome {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 432)]
        c: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// certificate target as a fraction, default 1/(12*ceil(log2 k))
        #[arg(long, value_parser = parse_ratio)]
        target: Option<Ratio<u64>>,
        #[arg(long, default_value_t = 5)]
        max_resamples: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Amplify a certified set by sub-sampling and subset closure
    Amplify {
        #[arg(long = "in")]
        input: PathBuf,
        /// certified detection probability of the input
        #[arg(long, value_parser = parse_ratio)]
        delta: Ratio<u64>,
        #[arg(long, default_value_t = 61)]
        c_amp: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        max_resamples: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Iterated composition of syndrome sampling and closure
    Compose {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 432)]
        c: u64,
        #[arg(long, default_value_t = 61)]
        c_amp: u64,
        #[arg(long, default_value_t = 12)]
        subset_factor: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_resamples: u32,
        #[arg(long, default_value_t = 1 << 24)]
        size_budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Expander doubling chain from four copies of a basis
    Spielman {
        #[arg(long)]
        k0: usize,
        #[arg(long)]
        steps: u32,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, value_parser = parse_ratio, default_value = "1/2")]
        epsilon: Ratio<u64>,
        #[arg(long, default_value_t = 2)]
        subset_target: usize,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        max_graph_resamples: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 24)]
    exhaustive_max_k: usize,
    #[arg(long, default_value_t = 200)]
    sampled_per_size: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// exit 1 when the certified delta falls below this fraction
    #[arg(long, value_parser = parse_ratio)]
    min_delta: Option<Ratio<u64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ExpanderCmd {
    /// Sample left-regular graphs until one passes verification
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_ratio)]
        alpha: Ratio<u64>,
        #[arg(long, value_parser = parse_ratio, default_value = "1/2")]
        epsilon: Ratio<u64>,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        /// also require a multiplicity-one neighbor for every checked subset
        #[arg(long)]
        require_unique: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        max_resamples: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the unique-neighbor expansion of an existing graph
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_ratio)]
        alpha: Ratio<u64>,
        #[arg(long, value_parser = parse_ratio, default_value = "1/2")]
        epsilon: Ratio<u64>,
        #[arg(long, default_value_t = 4)]
        s_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AbelianCmd {
    /// Verify a graph and build the integer kernel-basis code
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_ratio)]
        alpha: Ratio<u64>,
        #[arg(long, value_parser = parse_ratio, default_value = "1/2")]
        epsilon: Ratio<u64>,
        #[arg(long, default_value_t = 6)]
        s_max: usize,
        #[arg(long, default_value = "2,3,5,7,11", value_delimiter = ',')]
        primes: Vec<u64>,
        /// enumeration budget; default from GROUPCODE_BUDGET or 2^24
        #[arg(long)]
        distance_budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check mod-p rank and column independence of a matrix
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value = "2,3,5,7,11", value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Minimum distance of the column span mod p
    Distance {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: u64,
        /// enumeration budget; default from GROUPCODE_BUDGET or 2^24
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GroupsCmd {
    /// Exact detection probability of a word set on a finite backend
    Delta {
        #[arg(long)]
        group: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_ratio)]
        min_delta: Option<Ratio<u64>>,
    },
    /// Subgroup lattice summary
    Lattice {
        #[arg(long)]
        group: PathBuf,
    },
    /// Sample-size bound under polynomial maximal subgroup growth
    Pmsg {
        #[arg(long, value_parser = parse_ratio, default_value = "17/4")]
        e_prime: Ratio<u64>,
        #[arg(long, value_parser = parse_ratio, default_value = "1/10")]
        delta: Ratio<u64>,
        #[arg(long)]
        k: u64,
    },
    /// Uniformly sampled test subset of a solvable group
    SolvableCode {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, value_parser = parse_ratio, default_value = "17/4")]
        e_prime: Ratio<u64>,
        #[arg(long, value_parser = parse_ratio, default_value = "1/10")]
        delta: Ratio<u64>,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        max_resamples: u32,
    },
}

#[derive(Args)]
struct BridgeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    p: u64,
    /// enumeration budget; default from GROUPCODE_BUDGET or 2^24
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// finite backends to evaluate exactly (repeatable)
    #[arg(long)]
    group: Vec<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Enumeration budget: the GROUPCODE_BUDGET environment variable caps all
/// exhaustive scans when a flag does not say otherwise.
fn budget_default() -> u64 {
    std::env::var("GROUPCODE_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1 << 24)
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let parts: Vec<&str> = s.split('/').collect();
    match parts.as_slice() {
        [a] => a
            .parse::<u64>()
            .map(|n| Ratio::new(n, 1))
            .map_err(|e| e.to_string()),
        [a, b] => {
            let n = a.parse::<u64>().map_err(|e| e.to_string())?;
            let d = b.parse::<u64>().map_err(|e| e.to_string())?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            Ok(Ratio::new(n, d))
        }
        _ => Err(format!("cannot parse '{s}' as a fraction")),
    }
}

/// Failures of a certificate or distance target exit with code 1; everything
/// else (IO, parsing, validation) is a usage error and exits with 2.
fn exit_code_for(e: &groupcode::Error) -> i32 {
    match e {
        groupcode::Error::CertificationFailed { .. }
        | groupcode::Error::DistanceBelowTarget { .. }
        | groupcode::Error::GraphNotVerified => 1,
        _ => 2,
    }
}

struct Verification(i32);

fn main() {
    let cli = Cli::parse();
    let mut runner = Runner::new();
    match run(cli, &mut runner).and_then(|_| runner.finish()) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if let Some(v) = e.downcast_ref::<Verification>() {
                v.0
            } else if let Some(ce) = e.downcast_ref::<groupcode::Error>() {
                exit_code_for(ce)
            } else {
                2
            };
            std::process::exit(code);
        }
    }
}

impl std::fmt::Debug for Verification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed")
    }
}

impl std::fmt::Display for Verification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed")
    }
}

impl std::error::Error for Verification {}

fn print_or_write(runner: &mut Runner, out: Option<&PathBuf>, value: Value) -> Result<()> {
    match out {
        Some(path) => runner.write_output(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(&runner.stamp(value))?);
            Ok(())
        }
    }
}

fn run(cli: Cli, runner: &mut Runner) -> Result<()> {
    let threads = cli.threads;
    match cli.command {
        Command::Construct { kind } => run_construct(kind, runner),
        Command::Certify(args) => {
            let set: WordSet = runner.read_json(&args.input)?;
            let opts = CertifyOpts {
                exhaustive_max_k: args.exhaustive_max_k,
                sampled_per_size: args.sampled_per_size,
                seed: args.seed,
                threads,
            };
            runner.set_seed(args.seed);
            runner.set_params(&json!({
                "exhaustive_max_k": args.exhaustive_max_k,
                "sampled_per_size": args.sampled_per_size,
            }))?;
            let cert = certified_delta(&set, &opts)?;
            let matching = groupcode::certify::hadamard_matching_certificate(&set, args.seed).ok();
            let below = args.min_delta.is_some_and(|m| cert.delta_lower < m);
            let doc = json!({
                "input": args.input.display().to_string(),
                "syndrome_certificate": cert,
                "matching_certificate": matching,
            });
            print_or_write(runner, args.out.as_ref(), doc)?;
            if below {
                anyhow::bail!(Verification(1));
            }
            Ok(())
        }
        Command::Expander { kind } => run_expander(kind, runner),
        Command::Abelian { kind } => run_abelian(kind, runner),
        Command::Groups { kind } => run_groups(kind, runner),
        Command::Bridge(args) => {
            let set: WordSet = runner.read_json(&args.input)?;
            let budget = args.budget.unwrap_or_else(budget_default);
            runner.set_params(&json!({"p": args.p, "budget": budget}))?;
            let gen = generator_matrix(&set);
            let dist = distance_exact(&gen, args.p, budget)?;
            let delta = exact_delta_vector_space(&set, args.p, budget)?;
            let n = set.words.len() as u64;
            let doc = json!({
                "p": args.p,
                "n": n,
                "k": set.rank,
                "matrix": gen,
                "distance": dist,
                "normalized_distance": Ratio::new(dist.distance, n),
                "delta_vector_space": delta,
                "bridge_identity_holds": delta == Ratio::new(dist.distance, n),
            });
            print_or_write(runner, args.out.as_ref(), doc)
        }
        Command::Report(args) => {
            let set: WordSet = runner.read_json(&args.input)?;
            let mut groups = Vec::new();
            for path in &args.group {
                let spec: GroupSpec = runner.read_json(path)?;
                groups.push(FiniteGroup::from_spec(&spec, Default::default())?);
            }
            runner.set_seed(args.seed);
            let opts = CertifyOpts { seed: args.seed, threads, ..Default::default() };
            let refs: Vec<&FiniteGroup> = groups.iter().collect();
            let rep = report(&set, &refs, &opts)?;
            print_or_write(runner, args.out.as_ref(), serde_json::to_value(&rep)?)
        }
    }
}

fn run_construct(kind: ConstructCmd, runner: &mut Runner) -> Result<()> {
    match kind {
        ConstructCmd::Hadamard { k, cap, out } => {
            runner.set_params(&json!({"kind": "hadamard", "k": k, "cap": cap}))?;
            let set = hadamard_code_capped(k, cap)?;
            let matching = groupcode::certify::hadamard_matching_certificate(&set, 0)?;
            let mut doc = serde_json::to_value(&set)?;
            doc["params"] = json!({"k": k});
            doc["certificate"] = serde_json::to_value(&matching)?;
            runner.write_output(&out, doc)
        }
        ConstructCmd::Syndrome { k, c, seed, target, max_resamples, out } => {
            let params = SyndromeParams { k, c, seed, target, max_resamples, stream: None };
            runner.set_seed(seed);
            runner.set_params(&params)?;
            let built = random_syndrome_code(&params)?;
            let mut doc = serde_json::to_value(&built.words)?;
            doc["params"] = serde_json::to_value(&params)?;
            doc["certificate"] = serde_json::to_value(&built.certificate)?;
            doc["attempts"] = json!(built.attempts);
            runner.write_output(&out, doc)
        }
        ConstructCmd::Amplify { input, delta, c_amp, seed, max_resamples, out } => {
            let set: WordSet = runner.read_json(&input)?;
            let params = AmplifyParams { delta_in: delta, c_amp, seed, max_resamples };
            runner.set_seed(seed);
            runner.set_params(&params)?;
            let built = amplify(&set, &params)?;
            let mut doc = serde_json::to_value(&built.words)?;
            doc["params"] = serde_json::to_value(&params)?;
            doc["certificate"] = serde_json::to_value(&built.certificate)?;
            doc["attempts"] = json!(built.attempts);
            runner.write_output(&out, doc)
        }
        ConstructCmd::Compose { k, t, c, c_amp, subset_factor, seed, max_resamples, size_budget, out } => {
            let params = ComposeParams { k, t, c, c_amp, subset_factor, seed, max_resamples, size_budget };
            runner.set_seed(seed);
            runner.set_params(&params)?;
            let built = iterative_compose(&params)?;
            let mut doc = serde_json::to_value(&built.words)?;
            doc["params"] = serde_json::to_value(&params)?;
            doc["certificate"] = serde_json::to_value(&built.certificate)?;
            doc["formula_size"] = json!(built.formula_size.to_string());
            runner.write_output(&out, doc)
        }
        ConstructCmd::Spielman {
            k0, steps, d, epsilon, subset_target, s_max, seed, max_graph_resamples, out,
        } => {
            let params = SpielmanParams {
                k0, steps, d, epsilon, subset_target, s_max, seed, max_graph_resamples,
            };
            runner.set_seed(seed);
            runner.set_params(&params)?;
            let built = spielman_chain(&params)?;
            let mut doc = serde_json::to_value(&built.set)?;
            doc["params"] = serde_json::to_value(&params)?;
            doc["steps"] = serde_json::to_value(&built.reports)?;
            runner.write_output(&out, doc)
        }
    }
}

fn run_expander(kind: ExpanderCmd, runner: &mut Runner) -> Result<()> {
    match kind {
        ExpanderCmd::Sample {
            n, m, d, alpha, epsilon, s_max, require_unique, seed, max_resamples, out,
        } => {
            runner.set_seed(seed);
            runner.set_params(&json!({
                "n": n, "m": m, "d": d, "alpha": alpha, "epsilon": epsilon,
                "s_max": s_max, "require_unique": require_unique,
            }))?;
            let (graph, cert, attempts) = sample_verified(
                n, m, d, alpha, epsilon, s_max, require_unique, seed, max_resamples,
                "cli/expander-sample",
            )?;
            let mut doc = serde_json::to_value(&graph)?;
            doc["certificate"] = serde_json::to_value(&cert)?;
            doc["attempts"] = json!(attempts);
            runner.write_output(&out, doc)
        }
        ExpanderCmd::Verify { input, alpha, epsilon, s_max, seed } => {
            let graph: BipartiteGraph = runner.read_json(&input)?;
            runner.set_params(&json!({"alpha": alpha, "epsilon": epsilon, "s_max": s_max}))?;
            let cert = verify_unique_neighbors(&graph, alpha, epsilon, s_max, seed);
            let pass = cert.pass;
            println!("{}", serde_json::to_string_pretty(&runner.stamp(serde_json::to_value(&cert)?))?);
            if !pass {
                anyhow::bail!(Verification(1));
            }
            Ok(())
        }
    }
}

fn run_abelian(kind: AbelianCmd, runner: &mut Runner) -> Result<()> {
    match kind {
        AbelianCmd::Build { graph, alpha, epsilon, s_max, primes, distance_budget, seed, out } => {
            let g: BipartiteGraph = runner.read_json(&graph)?;
            runner.set_params(&json!({
                "alpha": alpha, "epsilon": epsilon, "s_max": s_max, "primes": primes,
            }))?;
            let cert = verify_unique_neighbors(&g, alpha, epsilon, s_max, seed);
            let opts = AbelianCodeOpts {
                primes,
                distance_budget: distance_budget.unwrap_or_else(budget_default),
                sampled_trials: 20_000,
            };
            let (kernel, code_report) = build_abelian_code(&g, &cert, &opts)?;
            let mut doc = serde_json::to_value(&kernel)?;
            doc["report"] = serde_json::to_value(&code_report)?;
            doc["graph_certificate"] = serde_json::to_value(&cert)?;
            runner.write_output(&out, doc)
        }
        AbelianCmd::Verify { matrix, primes } => {
            let m: IntMatrix = runner.read_json(&matrix)?;
            runner.set_params(&json!({"primes": primes}))?;
            let per_prime: Vec<Value> = primes
                .iter()
                .map(|&p| {
                    let independent = mod_p_independence(&m, p)?;
                    Ok(json!({"p": p, "rank": mod_p_rank(&m, p), "independent": independent}))
                })
                .collect::<Result<_>>()?;
            let doc = json!({
                "rows": m.rows,
                "cols": m.cols,
                "entry_bits": m.entry_bits(),
                "per_prime": per_prime,
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            Ok(())
        }
        AbelianCmd::Distance { matrix, p, budget } => {
            let m: IntMatrix = runner.read_json(&matrix)?;
            let budget = budget.unwrap_or_else(budget_default);
            runner.set_params(&json!({"p": p, "budget": budget}))?;
            let dist = distance_exact(&m, p, budget)?;
            let doc = json!({
                "p": p,
                "n": m.rows,
                "k": m.cols,
                "distance": dist,
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            Ok(())
        }
    }
}

fn run_groups(kind: GroupsCmd, runner: &mut Runner) -> Result<()> {
    match kind {
        GroupsCmd::Delta { group, input, min_delta } => {
            let spec: GroupSpec = runner.read_json(&group)?;
            let set: WordSet = runner.read_json(&input)?;
            let g = FiniteGroup::from_spec(&spec, Default::default())?;
            let delta = g.exact_delta_words(&set)?;
            let doc = json!({
                "backend": g.describe(),
                "delta": delta,
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            if min_delta.is_some_and(|m| delta < m) {
                anyhow::bail!(Verification(1));
            }
            Ok(())
        }
        GroupsCmd::Lattice { group } => {
            let spec: GroupSpec = runner.read_json(&group)?;
            let g = FiniteGroup::from_spec(&spec, Default::default())?;
            let lattice = g.subgroup_lattice()?;
            let orders: Vec<usize> = lattice.subgroups.iter().map(|s| s.order).collect();
            let doc = json!({
                "backend": g.describe(),
                "subgroups": lattice.subgroups.len(),
                "orders": orders,
                "maximal": lattice.maximal.iter()
                    .map(|&i| json!({
                        "order": lattice.subgroups[i].order,
                        "index": g.order() / lattice.subgroups[i].order,
                    }))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            Ok(())
        }
        GroupsCmd::Pmsg { e_prime, delta, k } => {
            let params = PmsgParams { e_prime, delta, k };
            runner.set_params(&params)?;
            let bound = pmsg_sample_size(&params)?;
            let doc = json!({
                "n": bound.n,
                "c_formula": bound.c_formula,
                "ratio": bound.n as f64 / k as f64,
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            Ok(())
        }
        GroupsCmd::SolvableCode { group, e_prime, delta, k, seed, max_resamples } => {
            let spec: GroupSpec = runner.read_json(&group)?;
            let g = FiniteGroup::from_spec(&spec, Default::default())?;
            let params = PmsgParams { e_prime, delta, k };
            runner.set_seed(seed);
            runner.set_params(&params)?;
            let code = solvable_random_code(&g, &params, seed, max_resamples)?;
            let doc = json!({
                "backend": g.describe(),
                "n": code.n,
                "delta": code.delta,
                "attempts": code.attempts,
                "elements": code.elements.iter().map(|e| g.element_repr(e)).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&runner.stamp(doc))?);
            Ok(())
        }
    }
}
