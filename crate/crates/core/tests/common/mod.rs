//! Brute-force reference implementations used as test oracles. Nothing here
//! calls into the library's enumeration or statistic code.

#![allow(dead_code)]

use std::collections::VecDeque;

use netperm::{Arm, Graph, TestStatistic};

/// Adjacency matrix of `g`.
pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in g.edges() {
        a[i as usize][j as usize] = true;
        a[j as usize][i as usize] = true;
    }
    a
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Statistics straight from the matrix form of their definitions.
pub fn naive_statistic(stat: TestStatistic, a: &[Vec<bool>], z: &[bool], y: &[f64]) -> Option<f64> {
    let n = a.len();
    let deg = |i: usize| (0..n).filter(|&j| a[i][j]).count();
    let tn = |i: usize| (0..n).filter(|&j| a[i][j] && z[j]).count();
    let ti_arm = |arm: bool| -> Option<f64> {
        let yes: Vec<f64> = (0..n).filter(|&i| z[i] == arm && tn(i) > 0).map(|i| y[i]).collect();
        let no: Vec<f64> = (0..n).filter(|&i| z[i] == arm && tn(i) == 0).map(|i| y[i]).collect();
        Some(mean(&yes)? - mean(&no)?)
    };
    let quant_arm = |arm: bool| -> Option<f64> {
        let units: Vec<usize> = (0..n).filter(|&i| z[i] == arm && deg(i) > 0).collect();
        let share = |i: usize| tn(i) as f64 / deg(i) as f64;
        let mut p: Vec<f64> = units.iter().map(|&i| share(i)).collect();
        if p.is_empty() {
            return None;
        }
        p.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rank = |q: f64| ((q * p.len() as f64).ceil() as usize).max(1) - 1;
        let (lo, hi) = (p[rank(0.25)], p[rank(0.75)]);
        let high: Vec<f64> = units.iter().filter(|&&i| share(i) >= hi).map(|&i| y[i]).collect();
        let low: Vec<f64> = units.iter().filter(|&&i| share(i) <= lo).map(|&i| y[i]).collect();
        Some(mean(&high)? - mean(&low)?)
    };
    let weighted = |f: &dyn Fn(bool) -> Option<f64>| -> Option<f64> {
        let nt = z.iter().filter(|&&t| t).count();
        let nc = n - nt;
        let mut s = 0.0;
        if nc > 0 {
            s += nc as f64 / n as f64 * f(false)?;
        }
        if nt > 0 {
            s += nt as f64 / n as f64 * f(true)?;
        }
        Some(s)
    };
    match stat {
        TestStatistic::Bond => {
            let (mut nt, mut dt, mut nc, mut dc) = (0.0, 0.0, 0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    if a[i][j] {
                        if z[j] {
                            nt += y[i];
                            dt += 1.0;
                        } else {
                            nc += y[i];
                            dc += 1.0;
                        }
                    }
                }
            }
            (dt > 0.0 && dc > 0.0).then(|| nt / dt - nc / dc)
        }
        TestStatistic::HasTreatedNeighbor(Arm::Control) => ti_arm(false),
        TestStatistic::HasTreatedNeighbor(Arm::Treated) => ti_arm(true),
        TestStatistic::HasTreatedNeighbor(Arm::Weighted) => weighted(&ti_arm),
        TestStatistic::Quant(Arm::Control) => quant_arm(false),
        TestStatistic::Quant(Arm::Treated) => quant_arm(true),
        TestStatistic::Quant(Arm::Weighted) => weighted(&quant_arm),
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            v.push((i, j));
        }
    }
    v
}

/// Every simple graph on `n` vertices with labelled degrees `deg`, found by
/// scanning all `2^C(n,2)` edge subsets. Only practical for `n <= 7`.
pub fn all_graphs_with_degrees(n: usize, deg: &[usize]) -> Vec<Vec<Vec<bool>>> {
    let ps = pairs(n);
    let total: usize = deg.iter().sum();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << ps.len()) {
        if 2 * mask.count_ones() as usize != total {
            continue;
        }
        let mut d = vec![0usize; n];
        for (k, &(i, j)) in ps.iter().enumerate() {
            if mask >> k & 1 == 1 {
                d[i] += 1;
                d[j] += 1;
            }
        }
        if d == deg {
            let mut a = vec![vec![false; n]; n];
            for (k, &(i, j)) in ps.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    a[i][j] = true;
                    a[j][i] = true;
                }
            }
            out.push(a);
        }
    }
    out
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![p.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Images `pi(G)` of `a` under every permutation that keeps each vertex's
/// degree (and treatment, when `z` is given), one entry per permutation.
pub fn permutation_images(a: &[Vec<bool>], z: Option<&[bool]>) -> Vec<Vec<Vec<bool>>> {
    let n = a.len();
    let deg: Vec<usize> = (0..n).map(|i| a[i].iter().filter(|&&e| e).count()).collect();
    all_permutations(n)
        .into_iter()
        .filter(|pi| (0..n).all(|v| deg[pi[v]] == deg[v] && z.is_none_or(|z| z[pi[v]] == z[v])))
        .map(|pi| {
            let mut b = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    b[pi[i]][pi[j]] = a[i][j];
                }
            }
            b
        })
        .collect()
}

/// `#{T(G) > t_obs} / #{T(G) defined}` over a list of equally weighted graphs.
pub fn exceedance_share(
    class: &[Vec<Vec<bool>>],
    stat: TestStatistic,
    z: &[bool],
    y: &[f64],
    t_obs: f64,
) -> Option<f64> {
    let values: Vec<f64> = class.iter().filter_map(|a| naive_statistic(stat, a, z, y)).collect();
    if values.is_empty() {
        return None;
    }
    Some(values.iter().filter(|&&t| t > t_obs).count() as f64 / values.len() as f64)
}

/// Hop distances from `s` by a plain queue search on the matrix; `None` for
/// unreachable vertices.
pub fn hop_distances(a: &[Vec<bool>], s: usize) -> Vec<Option<usize>> {
    let n = a.len();
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..n {
            if a[u][v] && d[v].is_none() {
                d[v] = Some(d[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    d
}
