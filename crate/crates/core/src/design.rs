//! Treatment assignment mechanisms: completely randomized experiments and
//! graph-cluster randomization over an ε-net clustering.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Design {
    CompletelyRandomized { n_treated: usize },
    ClusterBernoulli { p: f64, clusters: usize },
    /// Assignment read from data; the mechanism is not known to the tool.
    Observed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreatmentAssignment {
    pub z: Vec<bool>,
    pub design: Design,
}

impl TreatmentAssignment {
    pub fn observed(z: Vec<bool>) -> Self {
        TreatmentAssignment { z, design: Design::Observed }
    }

    pub fn n_treated(&self) -> usize {
        self.z.iter().filter(|&&t| t).count()
    }
}

/// Uniform draw among the `C(n, n_treated)` vectors with exactly
/// `n_treated` ones.
pub fn assign_completely_randomized<R: Rng + ?Sized>(
    n: usize,
    n_treated: usize,
    rng: &mut R,
) -> Result<TreatmentAssignment> {
    if n_treated > n {
        return Err(Error::InvalidCount(format!("{n_treated} treated units out of {n}")));
    }
    let mut z = vec![false; n];
    for v in index::sample(rng, n, n_treated) {
        z[v] = true;
    }
    Ok(TreatmentAssignment { z, design: Design::CompletelyRandomized { n_treated } })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    pub epsilon: u32,
    pub centers: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    /// Cluster index of every vertex.
    pub fn membership(&self) -> Vec<usize> {
        let mut of = vec![usize::MAX; self.vertex_count()];
        for (c, members) in self.clusters.iter().enumerate() {
            for &v in members {
                of[v] = c;
            }
        }
        of
    }

    /// Checks the partition, radius and center-separation properties against
    /// `g`, returning a description of the first violation.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), String> {
        let n = g.n();
        let mut seen = vec![false; n];
        if self.centers.len() != self.clusters.len() {
            return Err("one center per cluster required".into());
        }
        for (c, members) in self.clusters.iter().enumerate() {
            let dist = g.bfs_distances(self.centers[c]).map_err(|e| e.to_string())?;
            if !members.contains(&self.centers[c]) {
                return Err(format!("center {} outside its cluster", self.centers[c]));
            }
            for &v in members {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(format!("vertex {v} repeated or out of range"));
                }
                if !dist[v].is_within(self.epsilon) {
                    return Err(format!("vertex {v} is {} hops from center {}", dist[v], self.centers[c]));
                }
            }
            for &other in &self.centers[c + 1..] {
                if dist[other].is_within(self.epsilon) {
                    return Err(format!("centers {} and {other} within epsilon", self.centers[c]));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(format!("vertex {v} not covered"));
        }
        Ok(())
    }
}

/// ε-net clustering by peeling. Vertices are ordered once by ascending
/// degree (ties by ascending label); the last remaining vertex in that order
/// becomes a center and captures every remaining vertex within `epsilon`
/// hops of it in `g`. Repeats until every vertex is assigned.
pub fn epsilon_net_clusters(g: &Graph, epsilon: u32) -> Clustering {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));

    let mut assigned = vec![false; n];
    let mut centers = Vec::new();
    let mut clusters = Vec::new();
    for &v in order.iter().rev() {
        if assigned[v] {
            continue;
        }
        let mut members: Vec<usize> = g
            .ball(v, epsilon)
            .expect("vertex in range")
            .into_iter()
            .filter(|&w| !assigned[w])
            .collect();
        members.sort_unstable();
        for &w in &members {
            assigned[w] = true;
        }
        centers.push(v);
        clusters.push(members);
    }
    Clustering { epsilon, centers, clusters }
}

/// Treats each cluster independently with probability `p`; every vertex
/// inherits its cluster's draw.
pub fn assign_cluster_bernoulli<R: Rng + ?Sized>(
    clustering: &Clustering,
    p: f64,
    rng: &mut R,
) -> Result<TreatmentAssignment> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut z = vec![false; clustering.vertex_count()];
    for members in &clustering.clusters {
        let treated = rng.random_bool(p);
        for &v in members {
            z[v] = treated;
        }
    }
    Ok(TreatmentAssignment { z, design: Design::ClusterBernoulli { p, clusters: clustering.len() } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn completely_randomized_extremes() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(assign_completely_randomized(5, 0, &mut r).unwrap().z, vec![false; 5]);
        assert_eq!(assign_completely_randomized(5, 5, &mut r).unwrap().z, vec![true; 5]);
        assert!(assign_completely_randomized(5, 6, &mut r).is_err());
    }

    #[test]
    fn completely_randomized_is_uniform() {
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let draws = 60_000;
        let mut counts: HashMap<Vec<bool>, u32> = HashMap::new();
        for _ in 0..draws {
            let a = assign_completely_randomized(4, 2, &mut r).unwrap();
            assert_eq!(a.n_treated(), 2);
            *counts.entry(a.z).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sd, "count {c}");
        }
    }

    #[test]
    fn star_is_one_cluster() {
        let g = Graph::star(4);
        let c = epsilon_net_clusters(&g, 1);
        assert_eq!(c.centers, vec![0]);
        assert_eq!(c.clusters, vec![vec![0, 1, 2, 3]]);
        c.validate(&g).unwrap();
    }

    #[test]
    fn path_peeling_follows_tie_rule() {
        // degrees (1,2,2,2,1): order by (degree, label) is 0,4,1,2,3 so 3 is
        // picked first and captures {2,3,4}; then 1 captures {0,1}.
        let g = Graph::path(5);
        let c = epsilon_net_clusters(&g, 1);
        assert_eq!(c.centers, vec![3, 1]);
        assert_eq!(c.clusters, vec![vec![2, 3, 4], vec![0, 1]]);
        c.validate(&g).unwrap();
    }

    #[test]
    fn epsilon_zero_gives_singletons() {
        let g = Graph::cycle(7);
        let c = epsilon_net_clusters(&g, 0);
        assert_eq!(c.len(), 7);
        assert!(c.clusters.iter().all(|m| m.len() == 1));
        c.validate(&g).unwrap();
    }

    #[test]
    fn disconnected_components_peel_separately() {
        let g = Graph::new(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let c = epsilon_net_clusters(&g, 5);
        assert_eq!(c.len(), 2);
        c.validate(&g).unwrap();
        assert_eq!(c, epsilon_net_clusters(&g, 5));
    }

    #[test]
    fn validate_catches_violations() {
        let g = Graph::path(4);
        let bad = Clustering { epsilon: 1, centers: vec![0], clusters: vec![vec![0, 1, 2, 3]] };
        assert!(bad.validate(&g).is_err());
        let close = Clustering { epsilon: 1, centers: vec![1, 2], clusters: vec![vec![0, 1], vec![2, 3]] };
        assert!(close.validate(&g).is_err());
    }

    #[test]
    fn cluster_bernoulli_law() {
        let g = Graph::new(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let c = epsilon_net_clusters(&g, 1);
        assert_eq!(c.len(), 3);
        let mut r = ChaCha8Rng::seed_from_u64(3);
        assert!(assign_cluster_bernoulli(&c, 0.0, &mut r).unwrap().z.iter().all(|&t| !t));
        assert!(assign_cluster_bernoulli(&c, 1.0, &mut r).unwrap().z.iter().all(|&t| t));
        assert!(assign_cluster_bernoulli(&c, -0.1, &mut r).is_err());

        let draws = 80_000;
        let mut counts: HashMap<Vec<bool>, u32> = HashMap::new();
        let of = c.membership();
        for _ in 0..draws {
            let a = assign_cluster_bernoulli(&c, 0.5, &mut r).unwrap();
            for (v, &k) in of.iter().enumerate() {
                assert_eq!(a.z[v], a.z[c.clusters[k][0]]);
            }
            *counts.entry(a.z).or_default() += 1;
        }
        assert_eq!(counts.len(), 8);
        let sd = (draws as f64 * 0.125 * 0.875).sqrt();
        for &k in counts.values() {
            assert!((k as f64 - draws as f64 / 8.0).abs() < 3.0 * sd);
        }
    }
}
