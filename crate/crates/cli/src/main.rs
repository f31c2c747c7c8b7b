use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use netperm::harness::{self, OutputFormat, RunConfig, TestOptions};
use netperm::{
    epsilon_net_clusters, read_edge_list, read_observations, AnySampler, Estimator, NullSampler, SeedInfo,
    SwapChainConfig, TestStatistic,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "netperm", version, about = "Randomization tests for network spillover effects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test one dataset: an edge list plus an `id,z,y` CSV.
    Test(TestArgs),
    /// Run a Monte Carlo rejection-rate sweep.
    Simulate(Box<SimulateArgs>),
    /// Emit the ε-net clustering of a graph as JSON.
    Cluster(ClusterArgs),
    /// Emit draws from a null class as JSON.
    SampleNull(SampleNullArgs),
}

#[derive(Args)]
struct NullArgs {
    /// degseq, iso, blockiso or er
    #[arg(long, default_value = "degseq")]
    null_class: String,
    /// Edge probability of the er null; estimated from the graph when unset.
    #[arg(long)]
    er_p: Option<f64>,
    #[arg(long, default_value_t = SwapChainConfig::DEFAULT_BURN_IN_MULT)]
    burn_in_mult: u64,
    #[arg(long, default_value_t = SwapChainConfig::DEFAULT_THIN_MULT)]
    thin_mult: u64,
    #[arg(long, default_value_t = harness::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct TestArgs {
    edges: PathBuf,
    data: PathBuf,
    /// tbond, tquant, ti, with an optional -control or -treated suffix
    #[arg(long, default_value = "tquant")]
    stat: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// raw or plus-one
    #[arg(long, default_value = "raw")]
    estimator: String,
    /// Enumerate the whole null class instead of sampling (tiny graphs only).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    null: NullArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML run-config; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    networks: Option<Vec<String>>,
    #[arg(long)]
    sw_n: Option<usize>,
    #[arg(long)]
    sw_k: Option<usize>,
    #[arg(long)]
    sw_p_rw: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    sbm_block_sizes: Option<Vec<usize>>,
    #[arg(long)]
    er_n: Option<usize>,
    #[arg(long)]
    er_p: Option<f64>,
    #[arg(long)]
    er_m: Option<usize>,
    /// cre or cluster
    #[arg(long)]
    design: Option<String>,
    #[arg(long)]
    n_treated: Option<usize>,
    #[arg(long)]
    epsilon: Option<u32>,
    #[arg(long)]
    cluster_p: Option<f64>,
    /// Clusters capture vertices strictly closer than epsilon hops.
    #[arg(long)]
    epsilon_strict: bool,
    /// proportion-degree (eq6), indicator (s1) or proportion (s2)
    #[arg(long)]
    outcome: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tau_direct: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tau_spill: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    beta_deg: Option<f64>,
    #[arg(long)]
    noise_sd: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    stats: Option<Vec<String>>,
    #[arg(long)]
    null_class: Option<String>,
    /// Edge probability of the er null; estimated when unset.
    #[arg(long)]
    null_er_p: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    burn_in_mult: Option<u64>,
    #[arg(long)]
    thin_mult: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimulateArgs {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            networks: self.networks.clone(),
            sw_n: self.sw_n,
            sw_k: self.sw_k,
            sw_p_rw: self.sw_p_rw,
            sbm_block_sizes: self.sbm_block_sizes.clone(),
            sbm_pref_matrix: None,
            er_n: self.er_n,
            er_p: self.er_p,
            er_m: self.er_m,
            design: self.design.clone(),
            n_treated: self.n_treated,
            epsilon: self.epsilon,
            cluster_p: self.cluster_p,
            epsilon_strict: self.epsilon_strict.then_some(true),
            outcome: self.outcome.clone(),
            tau_direct: self.tau_direct.clone(),
            tau_spill: self.tau_spill.clone(),
            beta_deg: self.beta_deg,
            noise_sd: self.noise_sd,
            stats: self.stats.clone(),
            null_class: self.null_class.clone(),
            null_er_p: self.null_er_p,
            samples: self.samples,
            reps: self.reps,
            alpha: self.alpha,
            estimator: self.estimator.clone(),
            seed: self.seed,
            burn_in_mult: self.burn_in_mult,
            thin_mult: self.thin_mult,
        }
    }
}

#[derive(Args)]
struct ClusterArgs {
    edges: PathBuf,
    #[arg(long, default_value_t = 3)]
    epsilon: u32,
    /// Capture vertices strictly closer than epsilon hops.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleNullArgs {
    edges: PathBuf,
    /// `id,z,y` CSV; needed for the blockiso null.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[command(flatten)]
    null: NullArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = io::BufWriter::new(
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            );
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn write_json(out: Option<&Path>, value: &impl serde::Serialize) -> Result<()> {
    write_output(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

fn run_test(args: &TestArgs) -> Result<()> {
    let opts = TestOptions {
        stat: args.stat.parse::<TestStatistic>()?,
        null_model: harness::parse_null_model(&args.null.null_class, args.null.er_p)?,
        samples: args.samples,
        estimator: args.estimator.parse::<Estimator>()?,
        seed: args.null.seed,
        burn_in_mult: args.null.burn_in_mult,
        thin_mult: args.null.thin_mult,
        exact: args.exact,
    };
    let report = harness::run_single_test(&args.edges, &args.data, &opts)
        .with_context(|| format!("testing {} with {}", args.edges.display(), args.data.display()))?;
    write_json(args.out.as_deref(), &report)
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let base = match &args.config {
        Some(path) => RunConfig::from_file(path).with_context(|| format!("reading {}", path.display()))?,
        None => RunConfig::default(),
    };
    let config = base.overlay(args.overrides()).to_simulation_config()?;
    let format: OutputFormat = args.format.parse()?;
    let table = harness::run_simulation(&config, args.threads)?;
    write_output(args.out.as_deref(), |w| Ok(harness::write_table(&table, format, w)?))
}

fn run_cluster(args: &ClusterArgs) -> Result<()> {
    let g = read_edge_list(&args.edges).with_context(|| format!("reading {}", args.edges.display()))?;
    let radius = match (args.strict, args.epsilon) {
        (true, 0) => bail!("a strict cluster radius needs --epsilon >= 1"),
        (true, e) => e - 1,
        (false, e) => e,
    };
    write_json(args.out.as_deref(), &epsilon_net_clusters(&g, radius))
}

fn run_sample_null(args: &SampleNullArgs) -> Result<()> {
    let g = read_edge_list(&args.edges).with_context(|| format!("reading {}", args.edges.display()))?;
    let z = match &args.data {
        Some(path) => Some(read_observations(path, g.n())?.z),
        None => None,
    };
    let model = harness::parse_null_model(&args.null.null_class, args.null.er_p)?;
    if model.class().is_some_and(|c| c.needs_assignment()) && z.is_none() {
        bail!("--data is required for the {} null", model.label());
    }
    let swap = SwapChainConfig::from_multipliers(g.edge_count(), args.null.burn_in_mult, args.null.thin_mult);
    let mut sampler = AnySampler::for_model(model, &g, z.as_deref(), swap)?;
    let seed = SeedInfo::new(args.null.seed, 0, "null");
    let mut rng = seed.rng();
    let draws: Vec<Vec<(u32, u32)>> = (0..args.samples).map(|_| sampler.draw(&mut rng).to_vec()).collect();
    write_json(
        args.out.as_deref(),
        &json!({ "n": g.n(), "null_model": sampler.model(), "seed": seed, "draws": draws }),
    )
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Test(args) => run_test(&args),
        Command::Simulate(args) => run_simulate(&args),
        Command::Cluster(args) => run_cluster(&args),
        Command::SampleNull(args) => run_sample_null(&args),
    }
}
