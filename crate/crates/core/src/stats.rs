//! Spillover test statistics and the p-value engines.
//!
//! Every statistic is a function of the assignment `z`, the outcomes `y` and
//! a graph, and only touches the graph through two per-vertex counts: the
//! degree and the number of treated neighbours ([`Exposure`]). The engines
//! hold `z` and `y` at their observed values and swap in null graphs, so a
//! statistic on a null draw never sees outcomes regenerated under that draw.
//!
//! P-values use the strict upper tail: a null draw counts against the null
//! only when its statistic is *greater* than the observed one. Ties and
//! undefined draws are counted separately in the report.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Float;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::null::{enumerate_null_class, NullClassMode, NullModel, NullSampler};
use crate::seed::SeedInfo;

/// Degree and treated-neighbour count of every vertex under one graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Exposure {
    degree: Vec<u32>,
    treated: Vec<u32>,
}

impl Exposure {
    pub fn from_graph(g: &Graph, z: &[bool]) -> Self {
        let mut ex = Exposure::default();
        ex.fill(g.n(), g.edges(), z);
        ex
    }

    /// Recomputes the counts for the graph with edge set `edges`, reusing
    /// the buffers.
    pub fn fill(&mut self, n: usize, edges: &[(u32, u32)], z: &[bool]) {
        debug_assert_eq!(z.len(), n);
        self.degree.clear();
        self.degree.resize(n, 0);
        self.treated.clear();
        self.treated.resize(n, 0);
        for &(i, j) in edges {
            let (i, j) = (i as usize, j as usize);
            self.degree[i] += 1;
            self.degree[j] += 1;
            self.treated[i] += u32::from(z[j]);
            self.treated[j] += u32::from(z[i]);
        }
    }

    pub fn n(&self) -> usize {
        self.degree.len()
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degree[v]
    }

    pub fn treated_neighbors(&self, v: usize) -> u32 {
        self.treated[v]
    }
}

/// Which units a statistic contrasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arm {
    Control,
    Treated,
    /// Control and treated versions averaged with weights `N_c/N`, `N_t/N`.
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TestStatistic {
    /// Mean outcome of units with at least one treated neighbour minus that
    /// of units with none.
    HasTreatedNeighbor(Arm),
    /// Mean outcome of units at or above the upper quartile of treated
    /// neighbour share minus that of units at or below the lower quartile.
    Quant(Arm),
    /// Mean outcome over edge incidences with a treated neighbour minus the
    /// mean over incidences with a control neighbour.
    Bond,
}

impl TestStatistic {
    pub fn evaluate<F: Float>(&self, g: &Graph, z: &[bool], y: &[F]) -> Option<F> {
        self.evaluate_exposure(&Exposure::from_graph(g, z), z, y)
    }

    pub fn evaluate_exposure<F: Float>(&self, ex: &Exposure, z: &[bool], y: &[F]) -> Option<F> {
        assert!(z.len() == ex.n() && y.len() == ex.n(), "z, y and graph sizes differ");
        match *self {
            TestStatistic::HasTreatedNeighbor(arm) => by_arm(arm, z, |a| has_treated_neighbor_arm(ex, z, y, a)),
            TestStatistic::Quant(arm) => by_arm(arm, z, |a| quant_arm(ex, z, y, a)),
            TestStatistic::Bond => bond(ex, y),
        }
    }

    pub fn label(&self) -> String {
        let arm = |a: Arm| match a {
            Arm::Control => "-control",
            Arm::Treated => "-treated",
            Arm::Weighted => "",
        };
        match *self {
            TestStatistic::HasTreatedNeighbor(a) => format!("ti{}", arm(a)),
            TestStatistic::Quant(a) => format!("tquant{}", arm(a)),
            TestStatistic::Bond => "tbond".into(),
        }
    }
}

impl fmt::Display for TestStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for TestStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, arm) = match s.split_once('-') {
            None => (s, Arm::Weighted),
            Some((base, "control")) => (base, Arm::Control),
            Some((base, "treated")) => (base, Arm::Treated),
            Some((base, "weighted")) => (base, Arm::Weighted),
            Some(_) => return Err(Error::Config(format!("unknown statistic {s:?}"))),
        };
        match base {
            "ti" => Ok(TestStatistic::HasTreatedNeighbor(arm)),
            "tquant" => Ok(TestStatistic::Quant(arm)),
            "tbond" if arm == Arm::Weighted => Ok(TestStatistic::Bond),
            _ => Err(Error::Config(format!("unknown statistic {s:?}"))),
        }
    }
}

impl From<TestStatistic> for String {
    fn from(t: TestStatistic) -> String {
        t.label()
    }
}

impl TryFrom<String> for TestStatistic {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

fn count<F: Float>(k: usize) -> F {
    F::from(k).expect("count representable as float")
}

fn by_arm<F: Float>(arm: Arm, z: &[bool], eval: impl Fn(bool) -> Option<F>) -> Option<F> {
    match arm {
        Arm::Control => eval(false),
        Arm::Treated => eval(true),
        Arm::Weighted => {
            let n = z.len();
            if n == 0 {
                return None;
            }
            let n_t = z.iter().filter(|&&t| t).count();
            let mut total = F::zero();
            for (treated, size) in [(false, n - n_t), (true, n_t)] {
                // an empty arm carries zero weight
                if size > 0 {
                    total = total + count::<F>(size) / count::<F>(n) * eval(treated)?;
                }
            }
            Some(total)
        }
    }
}

/// Running mean accumulator.
struct Mean<F> {
    sum: F,
    k: usize,
}

impl<F: Float> Mean<F> {
    fn new() -> Self {
        Mean { sum: F::zero(), k: 0 }
    }

    fn push(&mut self, v: F) {
        self.sum = self.sum + v;
        self.k += 1;
    }

    fn get(&self) -> Option<F> {
        (self.k > 0).then(|| self.sum / count(self.k))
    }
}

fn has_treated_neighbor_arm<F: Float>(ex: &Exposure, z: &[bool], y: &[F], arm: bool) -> Option<F> {
    let (mut exposed, mut unexposed) = (Mean::new(), Mean::new());
    for v in 0..ex.n() {
        if z[v] != arm {
            continue;
        }
        if ex.treated[v] > 0 {
            exposed.push(y[v]);
        } else {
            unexposed.push(y[v]);
        }
    }
    Some(exposed.get()? - unexposed.get()?)
}

/// Orders treated-neighbour shares `t/d` exactly, without rounding.
fn cmp_share(a: (u32, u32), b: (u32, u32)) -> Ordering {
    (u64::from(a.0) * u64::from(b.1)).cmp(&(u64::from(b.0) * u64::from(a.1)))
}

/// Zero-based index of the nearest-rank `q`-quantile among `m` sorted values.
fn nearest_rank_index(m: usize, q: f64) -> usize {
    ((q * m as f64).ceil() as usize).clamp(1, m) - 1
}

/// Nearest-rank quantile: the `ceil(q m)`-th smallest of the `m` values.
pub fn quantile_nearest_rank<F: Float>(values: &[F], q: f64) -> Result<F> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidProbability(q));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(sorted[nearest_rank_index(sorted.len(), q)])
}

fn quant_arm<F: Float>(ex: &Exposure, z: &[bool], y: &[F], arm: bool) -> Option<F> {
    // isolated vertices have no treated share and are left out
    let mut shares: Vec<(u32, u32)> = (0..ex.n())
        .filter(|&v| z[v] == arm && ex.degree[v] > 0)
        .map(|v| (ex.treated[v], ex.degree[v]))
        .collect();
    if shares.is_empty() {
        return None;
    }
    shares.sort_by(|&a, &b| cmp_share(a, b));
    let lower = shares[nearest_rank_index(shares.len(), 0.25)];
    let upper = shares[nearest_rank_index(shares.len(), 0.75)];
    let (mut high, mut low) = (Mean::new(), Mean::new());
    for v in 0..ex.n() {
        if z[v] != arm || ex.degree[v] == 0 {
            continue;
        }
        let share = (ex.treated[v], ex.degree[v]);
        if cmp_share(share, upper) != Ordering::Less {
            high.push(y[v]);
        }
        if cmp_share(share, lower) != Ordering::Greater {
            low.push(y[v]);
        }
    }
    Some(high.get()? - low.get()?)
}

fn bond<F: Float>(ex: &Exposure, y: &[F]) -> Option<F> {
    let (mut num_t, mut num_c) = (F::zero(), F::zero());
    let (mut den_t, mut den_c) = (0u64, 0u64);
    for ((&d, &t), &yv) in ex.degree.iter().zip(&ex.treated).zip(y) {
        let c = d - t;
        if t > 0 {
            num_t = num_t + yv * count(t as usize);
            den_t += u64::from(t);
        }
        if c > 0 {
            num_c = num_c + yv * count(c as usize);
            den_c += u64::from(c);
        }
    }
    if den_t == 0 || den_c == 0 {
        return None;
    }
    Some(num_t / count(den_t as usize) - num_c / count(den_c as usize))
}

pub fn t_has_treated_neighbor<F: Float>(g: &Graph, z: &[bool], y: &[F], arm: Arm) -> Option<F> {
    TestStatistic::HasTreatedNeighbor(arm).evaluate(g, z, y)
}

pub fn t_quant<F: Float>(g: &Graph, z: &[bool], y: &[F], arm: Arm) -> Option<F> {
    TestStatistic::Quant(arm).evaluate(g, z, y)
}

pub fn t_bond<F: Float>(g: &Graph, z: &[bool], y: &[F]) -> Option<F> {
    TestStatistic::Bond.evaluate(g, z, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// `#{T > t_obs} / M`
    #[default]
    Raw,
    /// `(1 + #{T > t_obs}) / (M + 1)`
    PlusOne,
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Estimator::Raw),
            "plus-one" | "plus_one" => Ok(Estimator::PlusOne),
            other => Err(Error::Config(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValueReport<F> {
    pub statistic: TestStatistic,
    pub null_model: NullModel,
    pub estimator: Estimator,
    /// True when the draws are the complete enumerated class.
    pub exact: bool,
    pub t_obs: F,
    pub null_draws: Vec<Option<F>>,
    /// Multiplicity of each draw; absent for Monte Carlo draws (all 1).
    pub draw_weights: Option<Vec<u64>>,
    pub p_value: f64,
    pub n_exceed: u64,
    pub n_ties: u64,
    pub n_undefined: u64,
    pub n_draws: u64,
    pub seed: Option<SeedInfo>,
}

impl<F: Float> PValueReport<F> {
    /// Tallies `null_draws` against `t_obs`. More than 10% undefined weight
    /// is an error; the rest of the undefined draws leave the denominator.
    pub fn from_draws(
        statistic: TestStatistic,
        null_model: NullModel,
        estimator: Estimator,
        t_obs: F,
        null_draws: Vec<Option<F>>,
        draw_weights: Option<Vec<u64>>,
    ) -> Result<Self> {
        if let Some(w) = &draw_weights {
            assert_eq!(w.len(), null_draws.len());
        }
        let weight = |k: usize| draw_weights.as_ref().map_or(1, |w| w[k]);
        let (mut exceed, mut ties, mut undefined, mut total) = (0u64, 0u64, 0u64, 0u64);
        for (k, draw) in null_draws.iter().enumerate() {
            let w = weight(k);
            total += w;
            match draw {
                None => undefined += w,
                Some(t) if *t > t_obs => exceed += w,
                Some(t) if *t == t_obs => ties += w,
                Some(_) => {}
            }
        }
        if total == 0 {
            return Err(Error::InvalidCount("at least one null draw is required".into()));
        }
        if undefined * 10 > total {
            return Err(Error::ExcessiveDegeneracy { undefined: undefined as usize, total: total as usize });
        }
        let defined = (total - undefined) as f64;
        let p_value = match estimator {
            Estimator::Raw => exceed as f64 / defined,
            Estimator::PlusOne => (1 + exceed) as f64 / (defined + 1.0),
        };
        Ok(PValueReport {
            statistic,
            null_model,
            estimator,
            exact: draw_weights.is_some(),
            t_obs,
            null_draws,
            draw_weights,
            p_value,
            n_exceed: exceed,
            n_ties: ties,
            n_undefined: undefined,
            n_draws: total,
            seed: None,
        })
    }

    pub fn with_seed(mut self, seed: SeedInfo) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn check_lengths<F>(n: usize, z: &[bool], y: &[F]) -> Result<()> {
    for len in [z.len(), y.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, actual: len });
        }
    }
    Ok(())
}

/// Evaluates every (outcome vector, statistic) pair on `m` draws of
/// `sampler`, sharing each draw across all pairs. Result is indexed
/// `[outcome * stats.len() + stat][draw]`.
pub fn null_statistics<F, S, R>(
    z_obs: &[bool],
    outcomes: &[&[F]],
    stats: &[TestStatistic],
    sampler: &mut S,
    m: usize,
    rng: &mut R,
) -> Vec<Vec<Option<F>>>
where
    F: Float,
    S: NullSampler,
    R: Rng + ?Sized,
{
    let n = sampler.n();
    let mut draws = vec![Vec::with_capacity(m); outcomes.len() * stats.len()];
    let mut ex = Exposure::default();
    for _ in 0..m {
        let edges = sampler.draw(rng);
        ex.fill(n, edges, z_obs);
        for (oi, y) in outcomes.iter().enumerate() {
            for (si, stat) in stats.iter().enumerate() {
                draws[oi * stats.len() + si].push(stat.evaluate_exposure(&ex, z_obs, y));
            }
        }
    }
    draws
}

/// Monte Carlo p-value from `m` draws of `sampler`.
#[allow(clippy::too_many_arguments)]
pub fn pvalue_mc<F, S, R>(
    g_obs: &Graph,
    z_obs: &[bool],
    y_obs: &[F],
    stat: TestStatistic,
    sampler: &mut S,
    m: usize,
    estimator: Estimator,
    rng: &mut R,
) -> Result<PValueReport<F>>
where
    F: Float,
    S: NullSampler,
    R: Rng + ?Sized,
{
    check_lengths(g_obs.n(), z_obs, y_obs)?;
    if sampler.n() != g_obs.n() {
        return Err(Error::LengthMismatch { expected: g_obs.n(), actual: sampler.n() });
    }
    if m == 0 {
        return Err(Error::InvalidCount("at least one null draw is required".into()));
    }
    let t_obs = stat.evaluate(g_obs, z_obs, y_obs).ok_or(Error::ObservedStatisticUndefined)?;
    let draws = null_statistics(z_obs, &[y_obs], &[stat], sampler, m, rng).pop().expect("one pair");
    PValueReport::from_draws(stat, sampler.model(), estimator, t_obs, draws, None)
}

/// Exact p-value: the multiplicity-weighted share of the enumerated class
/// whose statistic strictly exceeds the observed one.
pub fn pvalue_exact<F: Float>(
    g_obs: &Graph,
    z_obs: &[bool],
    y_obs: &[F],
    stat: TestStatistic,
    mode: NullClassMode,
) -> Result<PValueReport<F>> {
    check_lengths(g_obs.n(), z_obs, y_obs)?;
    let class = enumerate_null_class(g_obs, mode, Some(z_obs))?;
    let t_obs = stat.evaluate(g_obs, z_obs, y_obs).ok_or(Error::ObservedStatisticUndefined)?;
    let (draws, weights) = class
        .members
        .iter()
        .map(|(g, w)| (stat.evaluate(g, z_obs, y_obs), *w))
        .unzip();
    PValueReport::from_draws(stat, mode.into(), Estimator::Raw, t_obs, draws, Some(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexPermutation;
    use crate::null::{PermutationSampler, SwapChain, SwapChainConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = 1e-12;

    #[test]
    fn has_treated_neighbor_hand_value() {
        let g = Graph::path(3);
        let z = [true, false, false];
        let y = [5.0, 2.0, 1.0];
        let t = t_has_treated_neighbor(&g, &z, &y, Arm::Control).unwrap();
        assert!((t - 1.0).abs() < EPS);
        // both controls of a star with treated hub are exposed
        let s = Graph::star(3);
        assert_eq!(t_has_treated_neighbor(&s, &[true, false, false], &[1.0, 2.0, 3.0], Arm::Control), None);
        let shifted: Vec<f64> = y.iter().map(|v| v + 10.0).collect();
        assert!((t_has_treated_neighbor(&g, &z, &shifted, Arm::Control).unwrap() - t).abs() < 1e-9);
    }

    #[test]
    fn quantile_nearest_rank_examples() {
        assert_eq!(quantile_nearest_rank(&[1.0, 2.0, 3.0, 4.0], 0.25).unwrap(), 1.0);
        assert_eq!(quantile_nearest_rank(&[4.0, 3.0, 2.0, 1.0], 0.75).unwrap(), 3.0);
        assert_eq!(quantile_nearest_rank(&[7.0], 0.1).unwrap(), 7.0);
        assert_eq!(quantile_nearest_rank(&[7.0], 0.9).unwrap(), 7.0);
        assert!(matches!(quantile_nearest_rank::<f64>(&[], 0.5), Err(Error::EmptyInput)));
        assert!(quantile_nearest_rank(&[1.0], 1.0).is_err());
    }

    #[test]
    fn quant_degenerate_cases() {
        // star S4 plus isolated vertex 4, hub treated: control shares all 1
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let z = [true, false, false, false, false];
        let y = [0.3, 1.0, 2.0, 6.0, 100.0];
        assert_eq!(t_quant(&g, &z, &y, Arm::Control), Some(0.0));
        // no non-isolated treated unit besides the hub: hub share 0 -> 0
        assert_eq!(t_quant(&g, &z, &y, Arm::Treated), Some(0.0));
        // an arm made only of isolated vertices is undefined
        let lone = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(t_quant(&lone, &[false, false, true], &[1.0, 2.0, 3.0], Arm::Treated), None);
    }

    #[test]
    fn quant_quartile_sets() {
        // controls 1..=4 with shares 0, 1/2, 1/2, 1 -> lower quartile 0, upper 1/2
        // edges: 0-2, 0-3, 5-2, 5-3, 0-4, 6-1
        let g = Graph::new(7, [(0, 2), (0, 3), (5, 2), (5, 3), (0, 4), (6, 1)]).unwrap();
        let z = [true, false, false, false, false, false, false];
        // shares among non-isolated controls: v1 0/1, v2 1/2, v3 1/2, v4 1/1, v5 0/2, v6 0/1
        // sorted: 0,0,0,1/2,1/2,1 -> m=6, q25 rank 2 -> 0, q75 rank 5 -> 1/2
        let y = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let high = (2.0 + 3.0 + 4.0) / 3.0;
        let low = (1.0 + 5.0 + 6.0) / 3.0;
        assert!((t_quant(&g, &z, &y, Arm::Control).unwrap() - (high - low)).abs() < EPS);
    }

    #[test]
    fn bond_hand_value() {
        let t = t_bond(&Graph::path(3), &[true, false, false], &[5.0, 2.0, 1.0]).unwrap();
        assert!((t + 2.0 / 3.0).abs() < EPS);
        assert_eq!(t_bond(&Graph::path(3), &[true; 3], &[5.0, 2.0, 1.0]), None);
        assert_eq!(t_bond(&Graph::path(3), &[false; 3], &[5.0, 2.0, 1.0]), None);
    }

    #[test]
    fn weighted_arm_combination() {
        let g = Graph::path(4);
        let z = [true, false, false, true];
        let y = [1.0, 4.0, 2.0, 8.0];
        let c = t_has_treated_neighbor(&g, &z, &y, Arm::Control);
        let t = t_has_treated_neighbor(&g, &z, &y, Arm::Treated);
        // every control has a treated neighbour; control arm undefined
        assert_eq!(c, None);
        assert_eq!(t, None);
        assert_eq!(t_has_treated_neighbor(&g, &z, &y, Arm::Weighted), None);

        let g = Graph::path(6);
        let z = [true, true, false, false, false, true];
        let y = [1.0, 4.0, 2.0, 8.0, 3.0, -1.0];
        let c = t_has_treated_neighbor(&g, &z, &y, Arm::Control).unwrap();
        let t = t_has_treated_neighbor(&g, &z, &y, Arm::Treated).unwrap();
        assert!((c - (2.5 - 8.0)).abs() < EPS);
        assert!((t - (2.5 + 1.0)).abs() < EPS);
        let w = t_has_treated_neighbor(&g, &z, &y, Arm::Weighted).unwrap();
        assert!((w - (0.5 * c + 0.5 * t)).abs() < EPS);
        // all treated: control arm carries no weight
        let all = [true; 6];
        assert_eq!(
            t_quant(&g, &all, &y, Arm::Weighted),
            t_quant(&g, &all, &y, Arm::Treated)
        );
    }

    #[test]
    fn statistic_labels_round_trip() {
        for s in [
            TestStatistic::Bond,
            TestStatistic::Quant(Arm::Weighted),
            TestStatistic::Quant(Arm::Control),
            TestStatistic::HasTreatedNeighbor(Arm::Treated),
            TestStatistic::HasTreatedNeighbor(Arm::Control),
        ] {
            assert_eq!(s.label().parse::<TestStatistic>().unwrap(), s);
        }
        assert!("tbond-control".parse::<TestStatistic>().is_err());
        assert!("tx".parse::<TestStatistic>().is_err());
    }

    #[test]
    fn constant_statistic_gives_zero_or_one_over_m_plus_one() {
        // star: degree isomorphism only permutes leaves, so every draw equals g
        let g = Graph::star(5);
        let z = [false, true, false, true, false];
        let y = [1.0, 2.0, 3.0, 4.0, 5.0];
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for (est, expected) in [(Estimator::Raw, 0.0), (Estimator::PlusOne, 1.0 / 51.0)] {
            let mut s = PermutationSampler::degree_isomorphism(&g);
            let rep = pvalue_mc(&g, &z, &y, TestStatistic::Bond, &mut s, 50, est, &mut r).unwrap();
            assert_eq!(rep.p_value, expected);
            assert_eq!(rep.n_ties, 50);
        }
    }

    #[test]
    fn zero_step_chain_ties_every_draw() {
        let g = Graph::cycle(6);
        let z = [true, false, false, true, false, false];
        let y = [0.5, 1.5, -0.2, 2.0, 0.1, 0.7];
        let mut chain = SwapChain::new(&g, SwapChainConfig { burn_in_swaps: 0, swaps_between_samples: 0 });
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let rep = pvalue_mc(&g, &z, &y, TestStatistic::Bond, &mut chain, 25, Estimator::Raw, &mut r).unwrap();
        assert_eq!((rep.p_value, rep.n_ties, rep.n_draws), (0.0, 25, 25));
        assert_eq!(rep.null_model, NullModel::LabelledDegreeSequence);
    }

    #[test]
    fn observed_undefined_and_degeneracy_errors() {
        let g = Graph::path(3);
        let mut s = PermutationSampler::degree_isomorphism(&g);
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let res = pvalue_mc(&g, &[true; 3], &[1.0, 2.0, 3.0], TestStatistic::Bond, &mut s, 10, Estimator::Raw, &mut r);
        assert!(matches!(res, Err(Error::ObservedStatisticUndefined)));

        let draws = vec![Some(1.0), None, None, Some(0.0)];
        let err = PValueReport::from_draws(TestStatistic::Bond, NullModel::DegreeIsomorphism, Estimator::Raw, 0.5, draws, None);
        assert!(matches!(err, Err(Error::ExcessiveDegeneracy { undefined: 2, total: 4 })));

        let mut draws = vec![Some(1.0); 19];
        draws.push(None);
        let ok = PValueReport::from_draws(TestStatistic::Bond, NullModel::DegreeIsomorphism, Estimator::Raw, 0.5, draws, None)
            .unwrap();
        assert_eq!((ok.p_value, ok.n_undefined), (1.0, 1));

        assert!(matches!(
            pvalue_mc(&g, &[true; 2], &[1.0; 3], TestStatistic::Bond, &mut s, 10, Estimator::Raw, &mut r),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn exact_class_of_size_one_gives_zero() {
        let g = Graph::star(4);
        let z = [true, false, false, false];
        let y = [3.0, 1.0, 2.0, 0.5];
        let rep = pvalue_exact(&g, &z, &y, TestStatistic::Bond, NullClassMode::LabelledDegreeSequence).unwrap();
        assert_eq!(rep.p_value, 0.0);
        assert_eq!(rep.null_draws.len(), 1);
    }

    #[test]
    fn relabeling_invariance_example() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 3), (1, 4)]).unwrap();
        let z = [true, false, true, false, false, true];
        let y = [0.1, 2.3, -1.0, 0.7, 1.9, 0.4];
        let pi = VertexPermutation::new(vec![4, 2, 5, 0, 1, 3]).unwrap();
        let h = g.relabel(&pi).unwrap();
        let mut z2 = [false; 6];
        let mut y2 = [0.0; 6];
        for v in 0..6 {
            z2[pi.apply(v)] = z[v];
            y2[pi.apply(v)] = y[v];
        }
        for stat in ["tbond", "tquant", "ti", "ti-control", "tquant-treated"] {
            let s: TestStatistic = stat.parse().unwrap();
            let a = s.evaluate(&g, &z, &y);
            let b = s.evaluate(&h, &z2, &y2);
            match (a, b) {
                (Some(a), Some(b)) => assert!((a - b).abs() < 1e-12, "{stat}"),
                (a, b) => assert_eq!(a, b, "{stat}"),
            }
        }
    }

    #[test]
    fn single_precision_statistics() {
        let t: f32 = t_bond(&Graph::path(3), &[true, false, false], &[5.0f32, 2.0, 1.0]).unwrap();
        assert!((t + 2.0 / 3.0).abs() < 1e-6);
    }
}
