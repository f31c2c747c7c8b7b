//! Samplers over the null classes a test conditions on.
//!
//! * [`SwapChain`]: double-edge-swap Markov chain over all simple graphs that
//!   share the observed *labelled* degree vector.
//! * [`PermutationSampler`]: uniform vertex permutations within cells of
//!   equal degree (optionally also equal treatment), applied to the observed
//!   graph. Every image keeps each vertex's degree, and in the blocked form
//!   also maps treated vertices onto treated vertices.
//! * [`ErdosRenyiSampler`]: independent G(n, p) draws, for tests whose null
//!   distribution is a fully specified random graph model.
//!
//! [`enumerate_null_class`] lists the classes exactly on small graphs so
//! that Monte Carlo p-values can be checked against exact ones.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexPermutation};
use crate::models::gnp_edges_into;

/// Conditioning classes with an exact combinatorial description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullClassMode {
    /// Every simple graph with the same degree at every labelled vertex.
    LabelledDegreeSequence,
    /// Images of the observed graph under permutations that preserve degree.
    DegreeIsomorphism,
    /// As `DegreeIsomorphism`, but permutations also preserve treatment.
    BlockDegreeIsomorphism,
}

impl NullClassMode {
    pub fn needs_assignment(self) -> bool {
        self == NullClassMode::BlockDegreeIsomorphism
    }
}

/// What the null draws of a Monte Carlo test come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum NullModel {
    LabelledDegreeSequence,
    DegreeIsomorphism,
    BlockDegreeIsomorphism,
    /// Fresh G(n, p) graphs. `p = None` plugs in the estimate from the
    /// observed graph.
    ErdosRenyi { p: Option<f64> },
}

impl NullModel {
    pub fn class(self) -> Option<NullClassMode> {
        match self {
            NullModel::LabelledDegreeSequence => Some(NullClassMode::LabelledDegreeSequence),
            NullModel::DegreeIsomorphism => Some(NullClassMode::DegreeIsomorphism),
            NullModel::BlockDegreeIsomorphism => Some(NullClassMode::BlockDegreeIsomorphism),
            NullModel::ErdosRenyi { .. } => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            NullModel::LabelledDegreeSequence => "degseq".into(),
            NullModel::DegreeIsomorphism => "iso".into(),
            NullModel::BlockDegreeIsomorphism => "blockiso".into(),
            NullModel::ErdosRenyi { p: Some(p) } => format!("er(p={p})"),
            NullModel::ErdosRenyi { p: None } => "er(p=mle)".into(),
        }
    }
}

impl From<NullClassMode> for NullModel {
    fn from(mode: NullClassMode) -> Self {
        match mode {
            NullClassMode::LabelledDegreeSequence => NullModel::LabelledDegreeSequence,
            NullClassMode::DegreeIsomorphism => NullModel::DegreeIsomorphism,
            NullClassMode::BlockDegreeIsomorphism => NullModel::BlockDegreeIsomorphism,
        }
    }
}

/// A source of null graphs. Each call to [`draw`](NullSampler::draw) returns
/// the edge set of the next draw as unordered pairs; the slice is only valid
/// until the next call.
pub trait NullSampler {
    fn n(&self) -> usize;
    fn model(&self) -> NullModel;
    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[(u32, u32)];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapChainConfig {
    pub burn_in_swaps: u64,
    pub swaps_between_samples: u64,
}

impl SwapChainConfig {
    pub const DEFAULT_BURN_IN_MULT: u64 = 100;
    pub const DEFAULT_THIN_MULT: u64 = 10;

    /// Burn-in and thinning expressed as multiples of the edge count.
    pub fn from_multipliers(edge_count: usize, burn_in_mult: u64, thin_mult: u64) -> Self {
        SwapChainConfig {
            burn_in_swaps: burn_in_mult * edge_count as u64,
            swaps_between_samples: thin_mult * edge_count as u64,
        }
    }

    pub fn default_for(g: &Graph) -> Self {
        Self::from_multipliers(g.edge_count(), Self::DEFAULT_BURN_IN_MULT, Self::DEFAULT_THIN_MULT)
    }
}

/// Constant-time edge membership: a bit matrix for moderate `n`, a hash set
/// of packed pairs beyond that.
#[derive(Debug, Clone)]
enum EdgeLookup {
    Dense { n: usize, bits: Vec<u64> },
    Sparse(HashSet<u64>),
}

const DENSE_LIMIT: usize = 1 << 13;

impl EdgeLookup {
    fn new(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut lookup = if n <= DENSE_LIMIT {
            EdgeLookup::Dense { n, bits: vec![0; (n * n).div_ceil(64)] }
        } else {
            EdgeLookup::Sparse(HashSet::with_capacity(edges.len()))
        };
        for &(a, b) in edges {
            lookup.insert(a, b);
        }
        lookup
    }

    #[inline]
    fn slot(n: usize, a: u32, b: u32) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        a as usize * n + b as usize
    }

    #[inline]
    fn packed(a: u32, b: u32) -> u64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        (u64::from(a) << 32) | u64::from(b)
    }

    #[inline]
    fn contains(&self, a: u32, b: u32) -> bool {
        match self {
            EdgeLookup::Dense { n, bits } => {
                let s = Self::slot(*n, a, b);
                bits[s >> 6] & (1 << (s & 63)) != 0
            }
            EdgeLookup::Sparse(set) => set.contains(&Self::packed(a, b)),
        }
    }

    #[inline]
    fn insert(&mut self, a: u32, b: u32) {
        match self {
            EdgeLookup::Dense { n, bits } => {
                let s = Self::slot(*n, a, b);
                bits[s >> 6] |= 1 << (s & 63);
            }
            EdgeLookup::Sparse(set) => {
                set.insert(Self::packed(a, b));
            }
        }
    }

    #[inline]
    fn remove(&mut self, a: u32, b: u32) {
        match self {
            EdgeLookup::Dense { n, bits } => {
                let s = Self::slot(*n, a, b);
                bits[s >> 6] &= !(1 << (s & 63));
            }
            EdgeLookup::Sparse(set) => {
                set.remove(&Self::packed(a, b));
            }
        }
    }
}

/// Double-edge-swap chain on a private copy of a graph.
///
/// One step picks two distinct edges `(a, b)`, `(c, d)` uniformly and one of
/// the two re-pairings `{(a, d), (c, b)}` or `{(a, c), (b, d)}` with equal
/// probability. The move is applied unless it would create a self-loop or an
/// edge that is already present; rejected moves leave the state unchanged.
/// The proposal is symmetric, so the uniform distribution on the labelled
/// degree class is stationary.
#[derive(Debug, Clone)]
pub struct SwapChain {
    n: usize,
    edges: Vec<(u32, u32)>,
    lookup: EdgeLookup,
    config: SwapChainConfig,
    started: bool,
    accepted: u64,
    rejected: u64,
}

impl SwapChain {
    pub fn new(g: &Graph, config: SwapChainConfig) -> Self {
        let edges = g.edges().to_vec();
        SwapChain {
            n: g.n(),
            lookup: EdgeLookup::new(g.n(), &edges),
            edges,
            config,
            started: false,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Attempts one swap; returns whether it was applied. Graphs with fewer
    /// than two edges never change.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.edges.len();
        if m < 2 {
            self.rejected += 1;
            return false;
        }
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = self.edges[i];
        let (c, d) = self.edges[j];
        let ((p, q), (r, s)) = if rng.random::<bool>() { ((a, d), (c, b)) } else { ((a, c), (b, d)) };
        if p == q || r == s || self.lookup.contains(p, q) || self.lookup.contains(r, s) {
            self.rejected += 1;
            return false;
        }
        self.lookup.remove(a, b);
        self.lookup.remove(c, d);
        self.lookup.insert(p, q);
        self.lookup.insert(r, s);
        self.edges[i] = if p < q { (p, q) } else { (q, p) };
        self.edges[j] = if r < s { (r, s) } else { (s, r) };
        self.accepted += 1;
        true
    }

    pub fn advance<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn rejected(&self) -> u64 {
        self.rejected
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges_unchecked(self.n, self.edges.clone())
    }
}

impl NullSampler for SwapChain {
    fn n(&self) -> usize {
        self.n
    }

    fn model(&self) -> NullModel {
        NullModel::LabelledDegreeSequence
    }

    /// First call runs the burn-in, later calls the thinning interval.
    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[(u32, u32)] {
        let steps = if self.started {
            self.config.swaps_between_samples
        } else {
            self.started = true;
            self.config.burn_in_swaps
        };
        self.advance(steps, rng);
        &self.edges
    }
}

/// `count` draws from a swap chain started at `g_obs`.
pub fn sample_same_degree_sequence<R: Rng + ?Sized>(
    g_obs: &Graph,
    config: SwapChainConfig,
    count: usize,
    rng: &mut R,
) -> Vec<Graph> {
    let mut chain = SwapChain::new(g_obs, config);
    (0..count)
        .map(|_| {
            chain.draw(rng);
            chain.to_graph()
        })
        .collect()
}

/// Uniform permutations within fixed vertex cells, applied to a base graph.
#[derive(Debug, Clone)]
pub struct PermutationSampler {
    n: usize,
    base: Vec<(u32, u32)>,
    cells: Vec<Vec<u32>>,
    blocked: bool,
    mapping: Vec<u32>,
    scratch: Vec<u32>,
    image: Vec<(u32, u32)>,
}

/// Vertices grouped by degree; cells ordered by degree, members ascending.
pub fn degree_cells(g: &Graph) -> Vec<Vec<u32>> {
    group_cells((0..g.n()).map(|v| (g.degree(v), false)))
}

/// Vertices grouped by (degree, treatment).
pub fn block_cells(g: &Graph, z: &[bool]) -> Result<Vec<Vec<u32>>> {
    if z.len() != g.n() {
        return Err(Error::LengthMismatch { expected: g.n(), actual: z.len() });
    }
    Ok(group_cells((0..g.n()).map(|v| (g.degree(v), z[v]))))
}

fn group_cells(keys: impl Iterator<Item = (usize, bool)>) -> Vec<Vec<u32>> {
    let mut cells: BTreeMap<(usize, bool), Vec<u32>> = BTreeMap::new();
    for (v, key) in keys.enumerate() {
        cells.entry(key).or_default().push(v as u32);
    }
    cells.into_values().collect()
}

impl PermutationSampler {
    pub fn degree_isomorphism(g: &Graph) -> Self {
        Self::with_cells(g, degree_cells(g), false)
    }

    pub fn block_isomorphism(g: &Graph, z: &[bool]) -> Result<Self> {
        Ok(Self::with_cells(g, block_cells(g, z)?, true))
    }

    fn with_cells(g: &Graph, cells: Vec<Vec<u32>>, blocked: bool) -> Self {
        PermutationSampler {
            n: g.n(),
            base: g.edges().to_vec(),
            cells,
            blocked,
            mapping: (0..g.n() as u32).collect(),
            scratch: Vec::new(),
            image: Vec::with_capacity(g.edge_count()),
        }
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    /// Draws a fresh permutation, uniform over the product of the symmetric
    /// groups on the cells.
    pub fn draw_permutation<R: Rng + ?Sized>(&mut self, rng: &mut R) -> VertexPermutation {
        self.shuffle(rng);
        VertexPermutation::from_raw_unchecked(self.mapping.clone())
    }

    fn shuffle<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for cell in &self.cells {
            if cell.len() < 2 {
                continue;
            }
            self.scratch.clear();
            self.scratch.extend_from_slice(cell);
            self.scratch.shuffle(rng);
            for (&v, &target) in cell.iter().zip(&self.scratch) {
                self.mapping[v as usize] = target;
            }
        }
    }
}

impl NullSampler for PermutationSampler {
    fn n(&self) -> usize {
        self.n
    }

    fn model(&self) -> NullModel {
        if self.blocked {
            NullModel::BlockDegreeIsomorphism
        } else {
            NullModel::DegreeIsomorphism
        }
    }

    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[(u32, u32)] {
        self.shuffle(rng);
        self.image.clear();
        let map = &self.mapping;
        self.image.extend(self.base.iter().map(|&(i, j)| (map[i as usize], map[j as usize])));
        &self.image
    }
}

pub fn sample_degree_isomorphism<R: Rng + ?Sized>(g_obs: &Graph, rng: &mut R) -> Graph {
    let pi = PermutationSampler::degree_isomorphism(g_obs).draw_permutation(rng);
    g_obs.relabel(&pi).expect("permutation built for this graph")
}

pub fn sample_block_isomorphism<R: Rng + ?Sized>(g_obs: &Graph, z_obs: &[bool], rng: &mut R) -> Result<Graph> {
    let pi = PermutationSampler::block_isomorphism(g_obs, z_obs)?.draw_permutation(rng);
    g_obs.relabel(&pi)
}

#[derive(Debug, Clone)]
pub struct ErdosRenyiSampler {
    n: usize,
    p: f64,
    edges: Vec<(u32, u32)>,
}

impl ErdosRenyiSampler {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(ErdosRenyiSampler { n, p, edges: Vec::new() })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl NullSampler for ErdosRenyiSampler {
    fn n(&self) -> usize {
        self.n
    }

    fn model(&self) -> NullModel {
        NullModel::ErdosRenyi { p: Some(self.p) }
    }

    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[(u32, u32)] {
        gnp_edges_into(self.n, self.p, rng, &mut self.edges);
        &self.edges
    }
}

/// Any of the samplers, chosen at run time.
#[derive(Debug, Clone)]
pub enum AnySampler {
    Swap(SwapChain),
    Permutation(PermutationSampler),
    ErdosRenyi(ErdosRenyiSampler),
}

impl AnySampler {
    /// Builds the sampler for `model` around the observed data. `z_obs` is
    /// required for the block model.
    pub fn for_model(
        model: NullModel,
        g_obs: &Graph,
        z_obs: Option<&[bool]>,
        swap: SwapChainConfig,
    ) -> Result<Self> {
        Ok(match model {
            NullModel::LabelledDegreeSequence => AnySampler::Swap(SwapChain::new(g_obs, swap)),
            NullModel::DegreeIsomorphism => {
                AnySampler::Permutation(PermutationSampler::degree_isomorphism(g_obs))
            }
            NullModel::BlockDegreeIsomorphism => {
                let z = z_obs.ok_or(Error::MissingAssignment("the block isomorphism null"))?;
                AnySampler::Permutation(PermutationSampler::block_isomorphism(g_obs, z)?)
            }
            NullModel::ErdosRenyi { p } => {
                let p = match p {
                    Some(p) => p,
                    None => crate::models::estimate_er_p(g_obs)?,
                };
                AnySampler::ErdosRenyi(ErdosRenyiSampler::new(g_obs.n(), p)?)
            }
        })
    }
}

impl NullSampler for AnySampler {
    fn n(&self) -> usize {
        match self {
            AnySampler::Swap(s) => s.n(),
            AnySampler::Permutation(s) => s.n(),
            AnySampler::ErdosRenyi(s) => s.n(),
        }
    }

    fn model(&self) -> NullModel {
        match self {
            AnySampler::Swap(s) => s.model(),
            AnySampler::Permutation(s) => s.model(),
            AnySampler::ErdosRenyi(s) => s.model(),
        }
    }

    fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[(u32, u32)] {
        match self {
            AnySampler::Swap(s) => s.draw(rng),
            AnySampler::Permutation(s) => s.draw(rng),
            AnySampler::ErdosRenyi(s) => s.draw(rng),
        }
    }
}

pub const ENUMERATION_LIMIT: usize = 10;

/// An exactly enumerated null class: distinct graphs with the number of
/// times each is produced (1 for the degree-sequence class, the number of
/// generating permutations for the isomorphism classes).
#[derive(Debug, Clone)]
pub struct NullClass {
    pub members: Vec<(Graph, u64)>,
}

impl NullClass {
    pub fn total_weight(&self) -> u64 {
        self.members.iter().map(|(_, w)| w).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn enumerate_null_class(g_obs: &Graph, mode: NullClassMode, z_obs: Option<&[bool]>) -> Result<NullClass> {
    let n = g_obs.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLargeForEnumeration { n, limit: ENUMERATION_LIMIT });
    }
    let members = match mode {
        NullClassMode::LabelledDegreeSequence => graphs_with_degrees(&g_obs.labelled_degrees())
            .into_iter()
            .map(|edges| (Graph::from_edges_unchecked(n, edges), 1))
            .collect(),
        NullClassMode::DegreeIsomorphism => permutation_images(g_obs, &degree_cells(g_obs)),
        NullClassMode::BlockDegreeIsomorphism => {
            let z = z_obs.ok_or(Error::MissingAssignment("the block isomorphism class"))?;
            permutation_images(g_obs, &block_cells(g_obs, z)?)
        }
    };
    Ok(NullClass { members })
}

/// All simple graphs realizing a labelled degree vector, by backtracking over
/// each vertex's neighbours among higher-labelled vertices.
fn graphs_with_degrees(degrees: &[usize]) -> Vec<Vec<(u32, u32)>> {
    fn fill(
        v: usize,
        next: usize,
        residual: &mut Vec<usize>,
        edges: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<(u32, u32)>>,
    ) {
        let n = residual.len();
        if v == n {
            out.push(edges.clone());
            return;
        }
        if residual[v] == 0 {
            fill(v + 1, v + 2, residual, edges, out);
            return;
        }
        // not enough higher-labelled vertices left to satisfy v
        if n.saturating_sub(next) < residual[v] {
            return;
        }
        for w in next..n {
            if residual[w] == 0 {
                continue;
            }
            residual[v] -= 1;
            residual[w] -= 1;
            edges.push((v as u32, w as u32));
            fill(v, w + 1, residual, edges, out);
            edges.pop();
            residual[v] += 1;
            residual[w] += 1;
        }
    }
    let mut residual = degrees.to_vec();
    let mut out = Vec::new();
    fill(0, 1, &mut residual, &mut Vec::new(), &mut out);
    out
}

fn permutation_images(g: &Graph, cells: &[Vec<u32>]) -> Vec<(Graph, u64)> {
    fn walk(
        cell_idx: usize,
        cells: &[Vec<u32>],
        mapping: &mut Vec<u32>,
        g: &Graph,
        counts: &mut BTreeMap<Vec<(u32, u32)>, u64>,
    ) {
        if cell_idx == cells.len() {
            let image = g.relabel(&VertexPermutation::from_raw_unchecked(mapping.clone())).unwrap();
            *counts.entry(image.edges().to_vec()).or_default() += 1;
            return;
        }
        let cell = &cells[cell_idx];
        let mut targets = cell.clone();
        permute_all(&mut targets, 0, &mut |perm| {
            for (&v, &t) in cell.iter().zip(perm) {
                mapping[v as usize] = t;
            }
            walk(cell_idx + 1, cells, mapping, g, counts);
        });
    }
    let mut counts = BTreeMap::new();
    let mut mapping: Vec<u32> = (0..g.n() as u32).collect();
    walk(0, cells, &mut mapping, g, &mut counts);
    counts
        .into_iter()
        .map(|(edges, c)| (Graph::from_edges_unchecked(g.n(), edges), c))
        .collect()
}

/// Heap-free recursive enumeration of all orderings of `items[k..]`.
fn permute_all(items: &mut Vec<u32>, k: usize, visit: &mut dyn FnMut(&[u32])) {
    if k + 1 >= items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, visit);
        items.swap(k, i);
    }
}
