//! Undirected simple graphs on labelled vertices `0..n`.
//!
//! A [`Graph`] is immutable once built. It keeps both a canonical edge array
//! (pairs `(i, j)` with `i < j`, sorted) for uniform edge selection and
//! sorted adjacency lists for traversal. Everything that mutates structure
//! (edge swaps, relabelings) works on its own copy and produces a new graph.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hop distance between two vertices. Unreachable pairs are never encoded as
/// a large integer, so comparisons such as `d <= radius` cannot pick them up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_within(self, radius: u32) -> bool {
        matches!(self, Distance::Finite(d) if d <= radius)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adjacency: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from arbitrary vertex pairs. Orientation and duplicates
    /// are ignored; self-loops and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::InvalidCount(format!("{n} vertices exceeds u32 labels")));
        }
        let mut edges = Vec::new();
        for (i, j) in pairs {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::OutOfRangeVertex { vertex: v, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            edges.push((i as u32, j as u32));
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges_unchecked(n, Vec::new())
    }

    /// Canonicalizes, sorts and deduplicates `edges`. Endpoints must already be
    /// distinct and below `n`.
    pub(crate) fn from_edges_unchecked(n: usize, mut edges: Vec<(u32, u32)>) -> Self {
        for e in edges.iter_mut() {
            debug_assert!(e.0 != e.1 && (e.0 as usize) < n && (e.1 as usize) < n);
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i as usize].push(j);
            adjacency[j as usize].push(i);
        }
        for list in adjacency.iter_mut() {
            list.sort_unstable();
        }
        Graph { n, edges, adjacency }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n as u32)
            .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
            .collect();
        Self::from_edges_unchecked(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n as u32).map(|i| (i - 1, i)).collect();
        Self::from_edges_unchecked(n, edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n as u32).map(|i| (i - 1, i)).collect();
        edges.push((0, n as u32 - 1));
        Self::from_edges_unchecked(n, edges)
    }

    /// Star with hub 0 and leaves `1..n`.
    pub fn star(n: usize) -> Self {
        let edges = (1..n as u32).map(|i| (0, i)).collect();
        Self::from_edges_unchecked(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical sorted edge array, each pair with `i < j`.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Degree of every vertex, indexed by label.
    pub fn labelled_degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Degrees sorted ascending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.labelled_degrees();
        d.sort_unstable();
        d
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::OutOfRangeVertex { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Distance>> {
        self.check_vertex(source)?;
        let mut dist = vec![Distance::Unreachable; self.n];
        dist[source] = Distance::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = match dist[u] {
                Distance::Finite(d) => Distance::Finite(d + 1),
                Distance::Unreachable => unreachable!(),
            };
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if dist[w] == Distance::Unreachable {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Vertices at hop distance `<= radius` from `source`, in BFS order.
    pub fn ball(&self, source: usize, radius: u32) -> Result<Vec<usize>> {
        self.check_vertex(source)?;
        let mut depth = vec![u32::MAX; self.n];
        depth[source] = 0;
        let mut order = vec![source];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            if depth[u] == radius {
                continue;
            }
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if depth[w] == u32::MAX {
                    depth[w] = depth[u] + 1;
                    order.push(w);
                }
            }
        }
        Ok(order)
    }

    /// Subgraph induced by `vertices`. The returned map sends each new label
    /// to the original one; new labels follow ascending original order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_label = vec![u32::MAX; self.n];
        for (k, &v) in keep.iter().enumerate() {
            self.check_vertex(v)?;
            new_label[v] = k as u32;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(i, j)| {
                let (a, b) = (new_label[i as usize], new_label[j as usize]);
                (a != u32::MAX && b != u32::MAX).then_some((a, b))
            })
            .collect();
        Ok((Graph::from_edges_unchecked(keep.len(), edges), keep))
    }

    /// Image of the graph under `pi`: `(i, j)` is an edge here iff
    /// `(pi(i), pi(j))` is an edge of the result.
    pub fn relabel(&self, pi: &VertexPermutation) -> Result<Graph> {
        if pi.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: pi.len() });
        }
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| (pi.mapping[i as usize], pi.mapping[j as usize]))
            .collect();
        Ok(Graph::from_edges_unchecked(self.n, edges))
    }
}

/// A bijection on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexPermutation {
    mapping: Vec<u32>,
}

impl VertexPermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotABijection);
            }
        }
        Ok(VertexPermutation { mapping: mapping.into_iter().map(|v| v as u32).collect() })
    }

    pub(crate) fn from_raw_unchecked(mapping: Vec<u32>) -> Self {
        VertexPermutation { mapping }
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation { mapping: (0..n as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.mapping[v] as usize
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.mapping
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.mapping.len()];
        for (i, &p) in self.mapping.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        VertexPermutation { mapping: inv }
    }
}
