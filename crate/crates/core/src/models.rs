//! Random graph generators used as data-generating processes: Erdős–Rényi
//! (both the edge-probability and fixed-edge-count forms), Watts–Strogatz
//! small-world rewiring, and the stochastic block model.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// Number of unordered vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Fills `out` with a G(n, p) edge set. Uses geometric skips over the pair
/// index so the cost is proportional to the number of edges drawn.
pub fn gnp_edges_into<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R, out: &mut Vec<(u32, u32)>) {
    out.clear();
    if p <= 0.0 || n < 2 {
        return;
    }
    if p >= 1.0 {
        for j in 1..n as u32 {
            for i in 0..j {
                out.push((i, j));
            }
        }
        return;
    }
    let log_q = (1.0 - p).ln();
    // Pairs are visited as (w, v) with w < v, ordered by v then w.
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let u: f64 = rng.random();
        w += 1 + ((1.0 - u).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            out.push((w as u32, v as u32));
        }
    }
}

pub fn gen_erdos_renyi_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_probability(p)?;
    let mut edges = Vec::new();
    gnp_edges_into(n, p, rng, &mut edges);
    Ok(Graph::from_edges_unchecked(n, edges))
}

fn decode_pair(k: usize) -> (u32, u32) {
    // k = v(v-1)/2 + w with 0 <= w < v
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as usize;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    ((k - v * (v - 1) / 2) as u32, v as u32)
}

/// Uniform graph among those with exactly `m` edges.
pub fn gen_erdos_renyi_gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    let total = pair_count(n);
    if m > total {
        return Err(Error::TooManyEdges { n, m });
    }
    let edges = index::sample(rng, total, m).into_iter().map(decode_pair).collect();
    Ok(Graph::from_edges_unchecked(n, edges))
}

/// Maximum-likelihood edge probability `|E| / C(n, 2)`.
pub fn estimate_er_p(g: &Graph) -> Result<f64> {
    if g.n() < 2 {
        return Err(Error::TooFewVertices);
    }
    Ok(g.edge_count() as f64 / pair_count(g.n()) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldSpec {
    pub n: usize,
    /// Lattice neighbours per vertex; even and below `n`.
    pub k: usize,
    pub p_rw: f64,
}

impl SmallWorldSpec {
    pub fn new(n: usize, k: usize, p_rw: f64) -> Result<Self> {
        let spec = SmallWorldSpec { n, k, p_rw };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.k.is_multiple_of(2) || self.k >= self.n {
            return Err(Error::InvalidSpec(format!(
                "small-world needs even k < n (n = {}, k = {})",
                self.n, self.k
            )));
        }
        check_probability(self.p_rw).map_err(|_| Error::InvalidSpec(format!("p_rw = {}", self.p_rw)))
    }
}

/// Watts–Strogatz graph. Starts from the ring lattice joining each vertex to
/// its `k/2` nearest neighbours on each side, then visits lattice edges
/// `(u, u + j)` for `j = 1..=k/2`, `u = 0..n` and with probability `p_rw`
/// moves the far endpoint to a uniform vertex that creates neither a
/// self-loop nor a duplicate edge. Edges of a saturated vertex stay put, so
/// the edge count is always `n k / 2`.
pub fn gen_small_world<R: Rng + ?Sized>(spec: &SmallWorldSpec, rng: &mut R) -> Result<Graph> {
    spec.validate()?;
    let n = spec.n;
    let half = spec.k / 2;
    let key = |a: usize, b: usize| if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };

    let mut present: HashSet<(u32, u32)> = HashSet::with_capacity(n * half);
    let mut degree = vec![0usize; n];
    for j in 1..=half {
        for u in 0..n {
            present.insert(key(u, (u + j) % n));
        }
    }
    for d in degree.iter_mut() {
        *d = spec.k;
    }

    for j in 1..=half {
        for u in 0..n {
            if rng.random::<f64>() >= spec.p_rw {
                continue;
            }
            let v = (u + j) % n;
            if degree[u] >= n - 1 || !present.contains(&key(u, v)) {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !present.contains(&key(u, w)) {
                    break w;
                }
            };
            present.remove(&key(u, v));
            present.insert(key(u, w));
            degree[v] -= 1;
            degree[w] += 1;
        }
    }
    Ok(Graph::from_edges_unchecked(n, present.into_iter().collect()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    /// Symmetric K x K matrix of edge probabilities.
    pub pref_matrix: Vec<Vec<f64>>,
}

impl SbmSpec {
    pub fn new(block_sizes: Vec<usize>, pref_matrix: Vec<Vec<f64>>) -> Result<Self> {
        let spec = SbmSpec { block_sizes, pref_matrix };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec whose matrix has `diag[a]` on the diagonal and `off`
    /// everywhere else.
    pub fn with_uniform_off_diagonal(block_sizes: Vec<usize>, diag: &[f64], off: f64) -> Result<Self> {
        let k = diag.len();
        let pref = (0..k)
            .map(|a| (0..k).map(|b| if a == b { diag[a] } else { off }).collect())
            .collect();
        Self::new(block_sizes, pref)
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.block_sizes.len();
        if self.pref_matrix.len() != k || self.pref_matrix.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidSpec(format!("preference matrix must be {k}x{k}")));
        }
        for a in 0..k {
            for b in 0..k {
                let p = self.pref_matrix[a][b];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidSpec(format!("preference entry ({a},{b}) = {p}")));
                }
                if p != self.pref_matrix[b][a] {
                    return Err(Error::InvalidSpec("preference matrix must be symmetric".into()));
                }
            }
        }
        Ok(())
    }

    /// Block index of every vertex; blocks occupy contiguous label ranges.
    pub fn block_of(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect()
    }
}

pub fn gen_sbm<R: Rng + ?Sized>(spec: &SbmSpec, rng: &mut R) -> Result<Graph> {
    spec.validate()?;
    let block = spec.block_of();
    let n = block.len();
    let mut edges = Vec::new();
    for i in 0..n {
        let row = &spec.pref_matrix[block[i]];
        for j in i + 1..n {
            if rng.random::<f64>() < row[block[j]] {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Ok(Graph::from_edges_unchecked(n, edges))
}
