//! Monte Carlo rejection-rate sweeps and single-dataset tests.
//!
//! A sweep is the product of network generators, `(tau_direct, tau_spill)`
//! effect pairs and test statistics for one design and one null model. Each
//! replicate draws a fresh graph, assignment and noise vector per network;
//! all effect pairs of a replicate share that noise, and one pass of the null
//! sampler is evaluated for every (effect, statistic) cell.
//!
//! Every random stream is seeded from `(master_seed, replicate, tag)` via
//! [`derive_replicate_seed`](crate::seed::derive_replicate_seed), and
//! replicate results are collected in index order, so a sweep is
//! bit-reproducible regardless of the worker count.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{assign_cluster_bernoulli, assign_completely_randomized, epsilon_net_clusters, TreatmentAssignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{read_edge_list, read_observations, Observations};
use crate::models::{gen_erdos_renyi_gnm, gen_erdos_renyi_gnp, gen_sbm, gen_small_world, SbmSpec, SmallWorldSpec};
use crate::null::{AnySampler, NullModel, SwapChainConfig};
use crate::outcome::{OutcomeModel, OutcomeParams};
use crate::seed::{stream, SeedInfo};
use crate::stats::{null_statistics, pvalue_exact, pvalue_mc, Estimator, PValueReport, TestStatistic};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Share of failed replicates above which a cell is marked aborted.
pub const MAX_FAILURE_SHARE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NetworkSpec {
    SmallWorld(SmallWorldSpec),
    Sbm(SbmSpec),
    ErdosRenyi { n: usize, p: f64 },
    ErdosRenyiEdges { n: usize, m: usize },
}

impl NetworkSpec {
    pub fn n(&self) -> usize {
        match self {
            NetworkSpec::SmallWorld(s) => s.n,
            NetworkSpec::Sbm(s) => s.n(),
            NetworkSpec::ErdosRenyi { n, .. } | NetworkSpec::ErdosRenyiEdges { n, .. } => *n,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            NetworkSpec::SmallWorld(_) => "small-world",
            NetworkSpec::Sbm(_) => "sbm",
            NetworkSpec::ErdosRenyi { .. } | NetworkSpec::ErdosRenyiEdges { .. } => "er",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NetworkSpec::SmallWorld(s) => s.validate(),
            NetworkSpec::Sbm(s) => s.validate(),
            NetworkSpec::ErdosRenyi { p, .. } if !(0.0..=1.0).contains(p) => Err(Error::InvalidProbability(*p)),
            NetworkSpec::ErdosRenyiEdges { n, m } if *m > n * n.saturating_sub(1) / 2 => {
                Err(Error::TooManyEdges { n: *n, m: *m })
            }
            _ => Ok(()),
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        match self {
            NetworkSpec::SmallWorld(s) => gen_small_world(s, rng),
            NetworkSpec::Sbm(s) => gen_sbm(s, rng),
            NetworkSpec::ErdosRenyi { n, p } => gen_erdos_renyi_gnp(*n, *p, rng),
            NetworkSpec::ErdosRenyiEdges { n, m } => gen_erdos_renyi_gnm(*n, *m, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DesignSpec {
    /// Exactly `n_treated` units treated; `None` treats half, rounded down.
    CompletelyRandomized { n_treated: Option<usize> },
    /// Bernoulli(`p`) per cluster of an ε-net clustering of the graph.
    /// Clusters capture vertices within `epsilon` hops of their center, or
    /// strictly fewer than `epsilon` hops when `strict` is set.
    Cluster {
        epsilon: u32,
        p: f64,
        #[serde(default)]
        strict: bool,
    },
}

impl DesignSpec {
    pub fn label(&self) -> &'static str {
        match self {
            DesignSpec::CompletelyRandomized { .. } => "cre",
            DesignSpec::Cluster { .. } => "cluster",
        }
    }

    pub fn assign<R: Rng + ?Sized>(&self, g: &Graph, rng: &mut R) -> Result<TreatmentAssignment> {
        match *self {
            DesignSpec::CompletelyRandomized { n_treated } => {
                assign_completely_randomized(g.n(), n_treated.unwrap_or(g.n() / 2), rng)
            }
            DesignSpec::Cluster { p, .. } => {
                assign_cluster_bernoulli(&epsilon_net_clusters(g, self.capture_radius()?), p, rng)
            }
        }
    }

    /// Hop radius handed to [`epsilon_net_clusters`].
    pub fn capture_radius(&self) -> Result<u32> {
        match *self {
            DesignSpec::Cluster { epsilon, strict: true, .. } => epsilon
                .checked_sub(1)
                .ok_or_else(|| Error::Config("a strict cluster radius needs epsilon >= 1".into())),
            DesignSpec::Cluster { epsilon, .. } => Ok(epsilon),
            DesignSpec::CompletelyRandomized { .. } => Err(Error::Config("not a cluster design".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub networks: Vec<NetworkSpec>,
    pub design: DesignSpec,
    pub outcome: OutcomeModel,
    pub tau_direct: Vec<f64>,
    pub tau_spill: Vec<f64>,
    pub beta_deg: f64,
    pub noise_sd: f64,
    pub stats: Vec<TestStatistic>,
    pub null_model: NullModel,
    /// Null draws per replicate.
    pub samples: usize,
    /// Replicates per cell.
    pub reps: usize,
    pub alpha: f64,
    pub estimator: Estimator,
    pub master_seed: u64,
    pub burn_in_mult: u64,
    pub thin_mult: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.networks.is_empty() || self.tau_direct.is_empty() || self.tau_spill.is_empty() || self.stats.is_empty() {
            return fail("networks, tau_direct, tau_spill and stats must be non-empty");
        }
        if self.reps == 0 || self.samples == 0 {
            return fail("reps and samples must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return fail("alpha must lie in [0, 1]");
        }
        if let DesignSpec::Cluster { p, .. } = self.design {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            self.design.capture_radius()?;
        }
        if let NullModel::ErdosRenyi { p: Some(p) } = self.null_model {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        for net in &self.networks {
            net.validate()?;
            if let DesignSpec::CompletelyRandomized { n_treated: Some(k) } = self.design {
                if k > net.n() {
                    return Err(Error::InvalidCount(format!("{k} treated units out of {}", net.n())));
                }
            }
        }
        OutcomeParams::new(0.0, 0.0, self.beta_deg, self.noise_sd)?;
        Ok(())
    }

    fn effects(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.tau_direct.len() * self.tau_spill.len());
        for &td in &self.tau_direct {
            for &ts in &self.tau_spill {
                out.push((td, ts));
            }
        }
        out
    }

    fn cells_per_network(&self) -> usize {
        self.tau_direct.len() * self.tau_spill.len() * self.stats.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRateRow {
    pub network: String,
    pub design: String,
    pub outcome: String,
    pub tau_direct: f64,
    pub tau_spill: f64,
    pub beta_deg: f64,
    pub stat: String,
    pub null_model: String,
    pub alpha: f64,
    pub samples: usize,
    pub reps: usize,
    pub rejections: usize,
    pub failures: usize,
    /// `rejections / reps`; failed replicates count as non-rejections.
    pub rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / reps)`.
    pub mc_se: f64,
    /// More than 5% of replicates failed; the rate should not be trusted.
    pub aborted: bool,
    /// Per-replicate p-value, `None` where the replicate failed.
    pub p_values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RejectionRateTable {
    pub tool_version: String,
    pub config: SimulationConfig,
    pub rows: Vec<RejectionRateRow>,
}

/// Per-replicate p-values for every cell; `None` marks a failure.
fn run_replicate(cfg: &SimulationConfig, rep: u64) -> Vec<Option<f64>> {
    let per_net = cfg.cells_per_network();
    let mut out = Vec::with_capacity(per_net * cfg.networks.len());
    for (ni, net) in cfg.networks.iter().enumerate() {
        match replicate_network(cfg, rep, ni, net) {
            Ok(ps) => out.extend(ps),
            Err(_) => out.extend(std::iter::repeat_n(None, per_net)),
        }
    }
    out
}

fn replicate_network(cfg: &SimulationConfig, rep: u64, ni: usize, net: &NetworkSpec) -> Result<Vec<Option<f64>>> {
    let seed = cfg.master_seed;
    let g = net.generate(&mut stream(seed, rep, &format!("graph:{ni}")))?;
    let z = cfg.design.assign(&g, &mut stream(seed, rep, &format!("assign:{ni}")))?.z;

    let effects = cfg.effects();
    let mut ys = Vec::with_capacity(effects.len());
    for &(td, ts) in &effects {
        let params = OutcomeParams::new(td, ts, cfg.beta_deg, cfg.noise_sd)?;
        // same noise stream for every effect pair
        let mut noise = stream(seed, rep, &format!("noise:{ni}"));
        ys.push(cfg.outcome.generate(&g, &z, &params, &mut noise)?.y);
    }

    let swap = SwapChainConfig::from_multipliers(g.edge_count(), cfg.burn_in_mult, cfg.thin_mult);
    let mut sampler = AnySampler::for_model(cfg.null_model, &g, Some(&z), swap)?;
    let y_refs: Vec<&[f64]> = ys.iter().map(Vec::as_slice).collect();
    let mut null_rng = stream(seed, rep, &format!("null:{ni}"));
    let draws = null_statistics(&z, &y_refs, &cfg.stats, &mut sampler, cfg.samples, &mut null_rng);

    let model = cfg.null_model;
    let mut ps = Vec::with_capacity(draws.len());
    for (k, column) in draws.into_iter().enumerate() {
        let (oi, si) = (k / cfg.stats.len(), k % cfg.stats.len());
        let stat = cfg.stats[si];
        let p = stat.evaluate(&g, &z, &ys[oi]).and_then(|t_obs| {
            PValueReport::from_draws(stat, model, cfg.estimator, t_obs, column, None).ok().map(|r| r.p_value)
        });
        ps.push(p);
    }
    Ok(ps)
}

/// Runs the full sweep on `threads` workers (`None`: rayon's default).
pub fn run_simulation(cfg: &SimulationConfig, threads: Option<usize>) -> Result<RejectionRateTable> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let per_rep: Vec<Vec<Option<f64>>> =
        pool.install(|| (0..cfg.reps as u64).into_par_iter().map(|r| run_replicate(cfg, r)).collect());

    let effects = cfg.effects();
    let mut rows = Vec::with_capacity(cfg.networks.len() * cfg.cells_per_network());
    let mut cell = 0;
    for net in &cfg.networks {
        for &(td, ts) in &effects {
            for stat in &cfg.stats {
                let p_values: Vec<Option<f64>> = per_rep.iter().map(|ps| ps[cell]).collect();
                rows.push(summarize(cfg, net, td, ts, stat, p_values));
                cell += 1;
            }
        }
    }
    Ok(RejectionRateTable { tool_version: TOOL_VERSION.to_owned(), config: cfg.clone(), rows })
}

fn summarize(
    cfg: &SimulationConfig,
    net: &NetworkSpec,
    tau_direct: f64,
    tau_spill: f64,
    stat: &TestStatistic,
    p_values: Vec<Option<f64>>,
) -> RejectionRateRow {
    let reps = p_values.len();
    let failures = p_values.iter().filter(|p| p.is_none()).count();
    let rejections = p_values.iter().filter(|p| matches!(p, Some(p) if *p <= cfg.alpha)).count();
    let rate = rejections as f64 / reps as f64;
    RejectionRateRow {
        network: net.label().to_owned(),
        design: cfg.design.label().to_owned(),
        outcome: cfg.outcome.label().to_owned(),
        tau_direct,
        tau_spill,
        beta_deg: cfg.beta_deg,
        stat: stat.label(),
        null_model: cfg.null_model.label(),
        alpha: cfg.alpha,
        samples: cfg.samples,
        reps,
        rejections,
        failures,
        rate,
        mc_se: (rate * (1.0 - rate) / reps as f64).sqrt(),
        aborted: failures as f64 > MAX_FAILURE_SHARE * reps as f64,
        p_values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// Flat CSV form of a row. Vectors and the config echo are JSON strings so
/// the file parses back into the same table.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    network: String,
    design: String,
    outcome: String,
    tau_direct: f64,
    tau_spill: f64,
    beta_deg: f64,
    stat: String,
    null_model: String,
    alpha: f64,
    samples: usize,
    reps: usize,
    rejections: usize,
    failures: usize,
    rate: f64,
    mc_se: f64,
    aborted: bool,
    p_values: String,
    tool_version: String,
    config: String,
}

const CSV_HEADER: [&str; 19] = [
    "network",
    "design",
    "outcome",
    "tau_direct",
    "tau_spill",
    "beta_deg",
    "stat",
    "null_model",
    "alpha",
    "samples",
    "reps",
    "rejections",
    "failures",
    "rate",
    "mc_se",
    "aborted",
    "p_values",
    "tool_version",
    "config",
];

pub fn write_table<W: Write>(table: &RejectionRateTable, format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, table)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER)?;
            let config = serde_json::to_string(&table.config)?;
            for r in &table.rows {
                w.serialize(CsvRow {
                    network: r.network.clone(),
                    design: r.design.clone(),
                    outcome: r.outcome.clone(),
                    tau_direct: r.tau_direct,
                    tau_spill: r.tau_spill,
                    beta_deg: r.beta_deg,
                    stat: r.stat.clone(),
                    null_model: r.null_model.clone(),
                    alpha: r.alpha,
                    samples: r.samples,
                    reps: r.reps,
                    rejections: r.rejections,
                    failures: r.failures,
                    rate: r.rate,
                    mc_se: r.mc_se,
                    aborted: r.aborted,
                    p_values: serde_json::to_string(&r.p_values)?,
                    tool_version: table.tool_version.clone(),
                    config: config.clone(),
                })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes the table to `path`.
pub fn emit_results(table: &RejectionRateTable, format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    write_table(table, format, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Parses a table written by [`write_table`]. A header-only CSV carries no
/// config and is rejected.
pub fn read_table<R: Read>(format: OutputFormat, input: R) -> Result<RejectionRateTable> {
    match format {
        OutputFormat::Json => Ok(serde_json::from_reader(input)?),
        OutputFormat::Csv => {
            let mut rd = csv::Reader::from_reader(input);
            let mut rows = Vec::new();
            let mut echo: Option<(String, String)> = None;
            for rec in rd.deserialize::<CsvRow>() {
                let r = rec?;
                echo.get_or_insert_with(|| (r.tool_version.clone(), r.config.clone()));
                rows.push(RejectionRateRow {
                    network: r.network,
                    design: r.design,
                    outcome: r.outcome,
                    tau_direct: r.tau_direct,
                    tau_spill: r.tau_spill,
                    beta_deg: r.beta_deg,
                    stat: r.stat,
                    null_model: r.null_model,
                    alpha: r.alpha,
                    samples: r.samples,
                    reps: r.reps,
                    rejections: r.rejections,
                    failures: r.failures,
                    rate: r.rate,
                    mc_se: r.mc_se,
                    aborted: r.aborted,
                    p_values: serde_json::from_str(&r.p_values)?,
                });
            }
            let (tool_version, config) = echo.ok_or(Error::EmptyInput)?;
            Ok(RejectionRateTable { tool_version, config: serde_json::from_str(&config)?, rows })
        }
    }
}

/// Run-config file: flat keys, each optional and each overridable by a
/// command-line flag of the same name. Unset keys fall back to the
/// small-world completely randomized sweep at desk scale.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub networks: Option<Vec<String>>,
    pub sw_n: Option<usize>,
    pub sw_k: Option<usize>,
    pub sw_p_rw: Option<f64>,
    pub sbm_block_sizes: Option<Vec<usize>>,
    pub sbm_pref_matrix: Option<Vec<Vec<f64>>>,
    pub er_n: Option<usize>,
    pub er_p: Option<f64>,
    pub er_m: Option<usize>,
    pub design: Option<String>,
    pub n_treated: Option<usize>,
    pub epsilon: Option<u32>,
    pub cluster_p: Option<f64>,
    /// Capture only vertices strictly closer than `epsilon` hops.
    pub epsilon_strict: Option<bool>,
    pub outcome: Option<String>,
    pub tau_direct: Option<Vec<f64>>,
    pub tau_spill: Option<Vec<f64>>,
    pub beta_deg: Option<f64>,
    pub noise_sd: Option<f64>,
    pub stats: Option<Vec<String>>,
    pub null_class: Option<String>,
    /// Edge probability of the Erdős–Rényi null; unset means estimate it.
    pub null_er_p: Option<f64>,
    pub samples: Option<usize>,
    pub reps: Option<usize>,
    pub alpha: Option<f64>,
    pub estimator: Option<String>,
    pub seed: Option<u64>,
    pub burn_in_mult: Option<u64>,
    pub thin_mult: Option<u64>,
}

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_REPS: usize = 500;
pub const DEFAULT_SEED: u64 = 20240601;
pub const DEFAULT_SBM_BLOCKS: [usize; 5] = [50, 100, 40, 110, 299];
pub const DEFAULT_SBM_DIAGONAL: [f64; 5] = [0.08, 0.05, 0.05, 0.05, 0.09];
pub const DEFAULT_SBM_OFF_DIAGONAL: f64 = 0.01;

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    /// Keys set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        overlay_fields!(self, top;
            networks, sw_n, sw_k, sw_p_rw, sbm_block_sizes, sbm_pref_matrix, er_n, er_p, er_m,
            design, n_treated, epsilon, cluster_p, epsilon_strict, outcome, tau_direct, tau_spill, beta_deg, noise_sd,
            stats, null_class, null_er_p, samples, reps, alpha, estimator, seed, burn_in_mult, thin_mult);
        self
    }

    pub fn to_simulation_config(&self) -> Result<SimulationConfig> {
        let networks = self
            .networks
            .clone()
            .unwrap_or_else(|| vec!["small-world".into()])
            .iter()
            .map(|name| self.network(name))
            .collect::<Result<Vec<_>>>()?;
        let design = match self.design.as_deref().unwrap_or("cre") {
            "cre" => DesignSpec::CompletelyRandomized { n_treated: self.n_treated },
            "cluster" => DesignSpec::Cluster {
                epsilon: self.epsilon.unwrap_or(3),
                p: self.cluster_p.unwrap_or(0.5),
                strict: self.epsilon_strict.unwrap_or(false),
            },
            other => return Err(Error::Config(format!("unknown design {other:?}"))),
        };
        let stats = self
            .stats
            .clone()
            .unwrap_or_else(|| vec!["tbond".into(), "tquant".into()])
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>>>()?;
        let cfg = SimulationConfig {
            networks,
            design,
            outcome: parse_outcome_model(self.outcome.as_deref().unwrap_or("proportion-degree"))?,
            tau_direct: self.tau_direct.clone().unwrap_or_else(|| vec![0.0, 4.0]),
            tau_spill: self.tau_spill.clone().unwrap_or_else(|| vec![0.0, 0.4]),
            beta_deg: self.beta_deg.unwrap_or(0.0),
            noise_sd: self.noise_sd.unwrap_or(1.0),
            stats,
            null_model: parse_null_model(self.null_class.as_deref().unwrap_or("degseq"), self.null_er_p)?,
            samples: self.samples.unwrap_or(DEFAULT_SAMPLES),
            reps: self.reps.unwrap_or(DEFAULT_REPS),
            alpha: self.alpha.unwrap_or(0.05),
            estimator: self.estimator.as_deref().unwrap_or("raw").parse()?,
            master_seed: self.seed.unwrap_or(DEFAULT_SEED),
            burn_in_mult: self.burn_in_mult.unwrap_or(SwapChainConfig::DEFAULT_BURN_IN_MULT),
            thin_mult: self.thin_mult.unwrap_or(SwapChainConfig::DEFAULT_THIN_MULT),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn network(&self, name: &str) -> Result<NetworkSpec> {
        match name {
            "small-world" | "sw" => Ok(NetworkSpec::SmallWorld(SmallWorldSpec::new(
                self.sw_n.unwrap_or(599),
                self.sw_k.unwrap_or(10),
                self.sw_p_rw.unwrap_or(0.1),
            )?)),
            "sbm" => {
                let blocks = self.sbm_block_sizes.clone().unwrap_or_else(|| DEFAULT_SBM_BLOCKS.to_vec());
                let spec = match &self.sbm_pref_matrix {
                    Some(m) => SbmSpec::new(blocks, m.clone())?,
                    None if blocks.len() == DEFAULT_SBM_DIAGONAL.len() => {
                        SbmSpec::with_uniform_off_diagonal(blocks, &DEFAULT_SBM_DIAGONAL, DEFAULT_SBM_OFF_DIAGONAL)?
                    }
                    None => return Err(Error::Config("sbm_pref_matrix is required for custom block sizes".into())),
                };
                Ok(NetworkSpec::Sbm(spec))
            }
            "er" => {
                let n = self.er_n.unwrap_or(100);
                Ok(match self.er_m {
                    Some(m) => NetworkSpec::ErdosRenyiEdges { n, m },
                    None => NetworkSpec::ErdosRenyi { n, p: self.er_p.unwrap_or(0.2) },
                })
            }
            other => Err(Error::Config(format!("unknown network {other:?}"))),
        }
    }
}

/// Accepts the model labels and the short names `eq6`, `s1`, `s2`.
pub fn parse_outcome_model(s: &str) -> Result<OutcomeModel> {
    match s {
        "proportion-degree" | "eq6" => Ok(OutcomeModel::ProportionDegree),
        "indicator" | "s1" => Ok(OutcomeModel::Indicator),
        "proportion" | "s2" => Ok(OutcomeModel::Proportion),
        other => Err(Error::Config(format!("unknown outcome model {other:?}"))),
    }
}

/// `degseq`, `iso`, `blockiso` or `er`; `er_p` fixes the Erdős–Rényi edge
/// probability, otherwise it is estimated from the observed graph.
pub fn parse_null_model(s: &str, er_p: Option<f64>) -> Result<NullModel> {
    match s {
        "degseq" => Ok(NullModel::LabelledDegreeSequence),
        "iso" => Ok(NullModel::DegreeIsomorphism),
        "blockiso" => Ok(NullModel::BlockDegreeIsomorphism),
        "er" => Ok(NullModel::ErdosRenyi { p: er_p }),
        other => Err(Error::Config(format!("unknown null class {other:?}"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOptions {
    pub stat: TestStatistic,
    pub null_model: NullModel,
    pub samples: usize,
    pub estimator: Estimator,
    pub seed: u64,
    pub burn_in_mult: u64,
    pub thin_mult: u64,
    /// Enumerate the null class instead of sampling it (small graphs only).
    pub exact: bool,
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions {
            stat: TestStatistic::Quant(crate::stats::Arm::Weighted),
            null_model: NullModel::LabelledDegreeSequence,
            samples: 1000,
            estimator: Estimator::Raw,
            seed: DEFAULT_SEED,
            burn_in_mult: SwapChainConfig::DEFAULT_BURN_IN_MULT,
            thin_mult: SwapChainConfig::DEFAULT_THIN_MULT,
            exact: false,
        }
    }
}

/// Tests the observed data for spillover.
pub fn test_dataset(g: &Graph, obs: &Observations, opts: &TestOptions) -> Result<PValueReport<f64>> {
    if opts.exact {
        let mode = opts
            .null_model
            .class()
            .ok_or_else(|| Error::Config("exact tests need a permutation or degree-sequence null".into()))?;
        return pvalue_exact(g, &obs.z, &obs.y, opts.stat, mode);
    }
    let seed = SeedInfo::new(opts.seed, 0, "null");
    let swap = SwapChainConfig::from_multipliers(g.edge_count(), opts.burn_in_mult, opts.thin_mult);
    let mut sampler = AnySampler::for_model(opts.null_model, g, Some(&obs.z), swap)?;
    let mut rng = seed.rng();
    let report = pvalue_mc(g, &obs.z, &obs.y, opts.stat, &mut sampler, opts.samples, opts.estimator, &mut rng)?;
    Ok(report.with_seed(seed))
}

/// Reads an edge list and an `id,z,y` file and runs [`test_dataset`].
pub fn run_single_test(
    edge_list_path: impl AsRef<Path>,
    observations_path: impl AsRef<Path>,
    opts: &TestOptions,
) -> Result<PValueReport<f64>> {
    let g = read_edge_list(edge_list_path)?;
    let obs = read_observations(observations_path, g.n())?;
    test_dataset(&g, &obs, opts)
}
