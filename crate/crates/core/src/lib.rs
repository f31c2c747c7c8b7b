//! Conditional randomization tests for spillover (interference) effects on
//! networks.
//!
//! The treatment assignment and the outcomes are held fixed at their
//! observed values while the graph is redrawn from a null class that keeps
//! some structure of the observed graph: its labelled degree sequence
//! ([`NullModel::LabelledDegreeSequence`]), its degree-preserving relabelings
//! ([`NullModel::DegreeIsomorphism`]), or those that also preserve treatment
//! ([`NullModel::BlockDegreeIsomorphism`]). If outcomes do not depend on
//! who is connected to whom, a statistic measuring association between
//! outcomes and neighbours' treatments has the same law on the observed
//! graph as on the null draws.
//!
//! ```
//! use netperm::{pvalue_mc, Arm, Estimator, Graph, PermutationSampler, TestStatistic};
//! use rand::SeedableRng;
//!
//! let g = Graph::cycle(8);
//! let z = [true, false, false, true, false, false, true, false];
//! let y = [1.0, 0.4, 0.1, 1.2, 0.3, -0.2, 0.9, 0.5];
//! let mut sampler = PermutationSampler::block_isomorphism(&g, &z).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let report = pvalue_mc(&g, &z, &y, TestStatistic::Quant(Arm::Control), &mut sampler, 200, Estimator::PlusOne, &mut rng)
//!     .unwrap();
//! assert!(report.p_value > 0.0 && report.p_value <= 1.0);
//! ```

pub mod design;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod models;
pub mod null;
pub mod outcome;
pub mod seed;
pub mod stats;

pub use design::{
    assign_cluster_bernoulli, assign_completely_randomized, epsilon_net_clusters, Clustering, Design,
    TreatmentAssignment,
};
pub use error::{Error, Result};
pub use graph::{Distance, Graph, VertexPermutation};
pub use harness::{
    run_simulation, DesignSpec, NetworkSpec, RejectionRateRow, RejectionRateTable, RunConfig, SimulationConfig,
};
pub use io::{parse_edge_list, parse_observations, read_edge_list, read_observations, write_edge_list, Observations};
pub use models::{
    estimate_er_p, gen_erdos_renyi_gnm, gen_erdos_renyi_gnp, gen_sbm, gen_small_world, SbmSpec, SmallWorldSpec,
};
pub use null::{
    enumerate_null_class, sample_block_isomorphism, sample_degree_isomorphism, sample_same_degree_sequence,
    AnySampler, ErdosRenyiSampler, NullClass, NullClassMode, NullModel, NullSampler, PermutationSampler,
    SwapChain, SwapChainConfig,
};
pub use outcome::{
    outcome_indicator, outcome_proportion, outcome_proportion_degree, OutcomeModel, OutcomeParams, Outcomes,
};
pub use seed::{derive_replicate_seed, SeedInfo, StreamRng};
pub use stats::{
    null_statistics, pvalue_exact, pvalue_mc, quantile_nearest_rank, t_bond, t_has_treated_neighbor, t_quant, Arm,
    Estimator, Exposure, PValueReport, TestStatistic,
};

/// Outcome vector in double precision.
pub type OutcomeVector = Outcomes<f64>;
/// Outcome vector in single precision.
pub type OutcomeVectorF32 = Outcomes<f32>;
pub type OutcomeParamsF64 = OutcomeParams<f64>;
pub type OutcomeParamsF32 = OutcomeParams<f32>;
/// P-value report in double precision, the form the harness and CLI emit.
pub type Report = PValueReport<f64>;
pub type ReportF32 = PValueReport<f32>;
