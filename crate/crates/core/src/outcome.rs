//! Potential-outcome models with additive Gaussian noise.
//!
//! All three models share a direct effect `tau_direct * z_i` and differ in
//! how neighbours' treatments spill over:
//!
//! * [`outcome_proportion_degree`]: `tau_spill` times the treated fraction of
//!   neighbours, plus `beta_deg` times the degree relative to the maximum
//!   degree. Isolated vertices get the direct effect only.
//! * [`outcome_proportion`]: the same without the degree term.
//! * [`outcome_indicator`]: `tau_spill` if any neighbour is treated.
//!
//! Noise is drawn for every vertex in label order before anything else, so
//! two calls with identically seeded generators share the same baseline
//! regardless of the graph.

use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeParams<F> {
    pub tau_direct: F,
    pub tau_spill: F,
    pub beta_deg: F,
    pub noise_sd: F,
}

impl<F: Float> OutcomeParams<F> {
    pub fn new(tau_direct: F, tau_spill: F, beta_deg: F, noise_sd: F) -> Result<Self> {
        if noise_sd.is_nan() || noise_sd <= F::zero() {
            return Err(Error::InvalidSpec("noise_sd must be positive".into()));
        }
        Ok(OutcomeParams { tau_direct, tau_spill, beta_deg, noise_sd })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcomes<F> {
    pub y: Vec<F>,
}

impl<F: Float> Outcomes<F> {
    pub fn as_slice(&self) -> &[F] {
        &self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeModel {
    /// Treated-neighbour proportion plus the relative-degree term.
    ProportionDegree,
    /// Any-treated-neighbour indicator.
    Indicator,
    /// Treated-neighbour proportion.
    Proportion,
}

impl OutcomeModel {
    pub fn generate<F, R>(self, g: &Graph, z: &[bool], params: &OutcomeParams<F>, rng: &mut R) -> Result<Outcomes<F>>
    where
        F: Float,
        StandardNormal: Distribution<F>,
        R: Rng + ?Sized,
    {
        match self {
            OutcomeModel::ProportionDegree => outcome_proportion_degree(g, z, params, rng),
            OutcomeModel::Indicator => outcome_indicator(g, z, params, rng),
            OutcomeModel::Proportion => outcome_proportion(g, z, params, rng),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OutcomeModel::ProportionDegree => "proportion-degree",
            OutcomeModel::Indicator => "indicator",
            OutcomeModel::Proportion => "proportion",
        }
    }
}

fn baseline<F, R>(n: usize, sd: F, rng: &mut R) -> Vec<F>
where
    F: Float,
    StandardNormal: Distribution<F>,
    R: Rng + ?Sized,
{
    (0..n).map(|_| sd * StandardNormal.sample(rng)).collect()
}

fn check_len(g: &Graph, z: &[bool]) -> Result<()> {
    if z.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), actual: z.len() });
    }
    Ok(())
}

fn from_count<F: Float>(k: usize) -> F {
    F::from(k).expect("count representable as float")
}

fn treated_neighbors(g: &Graph, z: &[bool], v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&w| z[w as usize]).count()
}

fn direct<F: Float>(params: &OutcomeParams<F>, treated: bool) -> F {
    if treated {
        params.tau_direct
    } else {
        F::zero()
    }
}

pub fn outcome_proportion_degree<F, R>(
    g: &Graph,
    z: &[bool],
    params: &OutcomeParams<F>,
    rng: &mut R,
) -> Result<Outcomes<F>>
where
    F: Float,
    StandardNormal: Distribution<F>,
    R: Rng + ?Sized,
{
    check_len(g, z)?;
    let max_degree = g.max_degree();
    if max_degree == 0 && params.beta_deg != F::zero() {
        return Err(Error::DegenerateGraph);
    }
    let mut y = baseline(g.n(), params.noise_sd, rng);
    for (v, yv) in y.iter_mut().enumerate() {
        *yv = *yv + direct(params, z[v]);
        let d = g.degree(v);
        if d > 0 {
            let share = from_count::<F>(treated_neighbors(g, z, v)) / from_count(d);
            *yv = *yv + params.tau_spill * share;
            if params.beta_deg != F::zero() {
                *yv = *yv + params.beta_deg * from_count::<F>(d) / from_count(max_degree);
            }
        }
    }
    Ok(Outcomes { y })
}

pub fn outcome_proportion<F, R>(g: &Graph, z: &[bool], params: &OutcomeParams<F>, rng: &mut R) -> Result<Outcomes<F>>
where
    F: Float,
    StandardNormal: Distribution<F>,
    R: Rng + ?Sized,
{
    let params = OutcomeParams { beta_deg: F::zero(), ..*params };
    outcome_proportion_degree(g, z, &params, rng)
}

pub fn outcome_indicator<F, R>(g: &Graph, z: &[bool], params: &OutcomeParams<F>, rng: &mut R) -> Result<Outcomes<F>>
where
    F: Float,
    StandardNormal: Distribution<F>,
    R: Rng + ?Sized,
{
    check_len(g, z)?;
    let mut y = baseline(g.n(), params.noise_sd, rng);
    for (v, yv) in y.iter_mut().enumerate() {
        *yv = *yv + direct(params, z[v]);
        if treated_neighbors(g, z, v) > 0 {
            *yv = *yv + params.tau_spill;
        }
    }
    Ok(Outcomes { y })
}
