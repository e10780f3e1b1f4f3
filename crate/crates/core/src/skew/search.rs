//! Exact minimization of a pairwise cost over the pruned candidate space.
//!
//! Nodes with a single candidate are folded into constants and unary terms,
//! leaving a binary choice per free node. Sparse pair sets are solved by a
//! frontier dynamic program over a narrow node ordering; dense ones fall
//! back to depth-first branch and bound.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::delay::DelayProfile;
use crate::library::Taps;
use crate::units::MeanFs;

use super::{candidate_arrivals, local_optimize, PairSet, PrunedCandidates, TapAssignment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search guard hit: branch and bound exceeded {limit} nodes")]
    NodeLimit { limit: u64 },
    #[error("inputs disagree on node count: profile {profile}, candidates {candidates}, pairs {pairs}")]
    Shape { profile: usize, candidates: usize, pairs: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    FrontierDp,
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Widest frontier the dynamic program accepts under `Auto`.
    pub max_frontier_width: usize,
    /// Branch-and-bound node budget.
    pub node_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::Auto,
            max_frontier_width: 16,
            node_limit: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SearchMethod {
    /// No node had a choice.
    Trivial,
    FrontierDp { ordering: &'static str, width: usize },
    BranchAndBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub method: SearchMethod,
    /// Nodes with two candidates; the pruned space holds `2^free_nodes`
    /// assignments.
    pub free_nodes: usize,
    /// Dynamic-program states or branch-and-bound nodes visited.
    pub states_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub assignment: TapAssignment,
    pub cost: MeanFs,
    pub stats: SearchStats,
}

/// Binary quadratic problem over the free nodes.
struct Problem {
    constant: i64,
    unary: Vec<[i64; 2]>,
    /// `(a, b, cost[choice a][choice b])` with `a < b`.
    edges: Vec<(usize, usize, [[i64; 2]; 2])>,
    adj: Vec<Vec<usize>>,
}

impl Problem {
    fn build(arrivals: &[Vec<i64>], pairs: &PairSet) -> (Problem, Vec<usize>) {
        let n = arrivals.len();
        let free: Vec<usize> = (0..n).filter(|&x| arrivals[x].len() == 2).collect();
        let mut slot = vec![usize::MAX; n];
        for (f, &x) in free.iter().enumerate() {
            slot[x] = f;
        }
        let mut p = Problem {
            constant: 0,
            unary: vec![[0; 2]; free.len()],
            edges: Vec::new(),
            adj: vec![Vec::new(); free.len()],
        };
        for &(x, y) in pairs.pairs() {
            let (x, y) = (x as usize, y as usize);
            let cost = |cx: usize, cy: usize| (arrivals[x][cx] - arrivals[y][cy]).abs();
            match (slot[x], slot[y]) {
                (usize::MAX, usize::MAX) => p.constant += cost(0, 0),
                (fx, usize::MAX) => {
                    p.unary[fx][0] += cost(0, 0);
                    p.unary[fx][1] += cost(1, 0);
                }
                (usize::MAX, fy) => {
                    p.unary[fy][0] += cost(0, 0);
                    p.unary[fy][1] += cost(0, 1);
                }
                (fx, fy) => {
                    p.edges.push((fx, fy, [[cost(0, 0), cost(0, 1)], [cost(1, 0), cost(1, 1)]]));
                    p.adj[fx].push(fy);
                    p.adj[fy].push(fx);
                }
            }
        }
        (p, free)
    }

    fn len(&self) -> usize {
        self.unary.len()
    }

    fn evaluate(&self, choice: &[u8]) -> i64 {
        let u: i64 = self.unary.iter().zip(choice).map(|(u, &c)| u[c as usize]).sum();
        let e: i64 = self
            .edges
            .iter()
            .map(|&(a, b, m)| m[choice[a] as usize][choice[b] as usize])
            .sum();
        self.constant + u + e
    }
}

/// Largest number of simultaneously open nodes when eliminating in `order`,
/// counting the node being added.
fn frontier_width(p: &Problem, order: &[usize]) -> usize {
    let last = last_use(p, order);
    let mut open = 0usize;
    let mut width = 0;
    let mut closing = vec![0usize; order.len()];
    for (k, &v) in order.iter().enumerate() {
        width = width.max(open + 1);
        if last[v] > k {
            open += 1;
            closing[last[v]] += 1;
        }
        open -= closing[k];
    }
    width
}

/// Position of the last neighbour (or the node itself) in `order`.
fn last_use(p: &Problem, order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    (0..order.len())
        .map(|v| p.adj[v].iter().map(|&u| pos[u]).max().unwrap_or(0).max(pos[v]))
        .collect()
}

fn reverse_cuthill_mckee(p: &Problem) -> Vec<usize> {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (p.adj[v].len(), v));
    for &start in &by_degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            out.push(v);
            let mut next: Vec<usize> = p.adj[v].iter().copied().filter(|&u| !seen[u]).collect();
            next.sort_by_key(|&u| (p.adj[u].len(), u));
            next.dedup();
            for u in next {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    out.reverse();
    out
}

const INF: i64 = i64::MAX;

/// Minimum of the problem restricted to `allowed[v]` choice masks.
fn dp_min(p: &Problem, order: &[usize], allowed: &[u8], states: &mut u64) -> i64 {
    let last = last_use(p, order);
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut frontier: Vec<usize> = Vec::new();
    let mut table: Vec<i64> = vec![0];
    for (k, &v) in order.iter().enumerate() {
        let neighbours: Vec<(usize, [[i64; 2]; 2])> = p
            .edges
            .iter()
            .filter_map(|&(a, b, m)| {
                if a == v && pos[b] < k {
                    Some((b, m))
                } else if b == v && pos[a] < k {
                    Some((a, [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]))
                } else {
                    None
                }
            })
            .map(|(u, m)| (frontier.iter().position(|&f| f == u).expect("open neighbour"), m))
            .collect();
        let kept: Vec<usize> = (0..frontier.len()).filter(|&s| last[frontier[s]] > k).collect();
        let keep_v = last[v] > k;
        let new_len = kept.len() + usize::from(keep_v);
        let mut next = vec![INF; 1 << new_len];
        for (s, &base) in table.iter().enumerate() {
            if base == INF {
                continue;
            }
            let mut projected = 0usize;
            for (i, &old) in kept.iter().enumerate() {
                projected |= ((s >> old) & 1) << i;
            }
            for c in 0..2usize {
                if allowed[v] & (1 << c) == 0 {
                    continue;
                }
                *states += 1;
                let mut cost = base + p.unary[v][c];
                for &(slot, m) in &neighbours {
                    cost += m[c][(s >> slot) & 1];
                }
                let key = if keep_v { projected | (c << kept.len()) } else { projected };
                if cost < next[key] {
                    next[key] = cost;
                }
            }
        }
        let mut nf: Vec<usize> = kept.iter().map(|&s| frontier[s]).collect();
        if keep_v {
            nf.push(v);
        }
        frontier = nf;
        table = next;
    }
    table.into_iter().min().unwrap_or(INF)
}

/// Lexicographically smallest optimal choice vector by fixing nodes in order.
fn dp_solve(p: &Problem, order: &[usize], states: &mut u64) -> (i64, Vec<u8>) {
    let mut allowed = vec![0b11u8; p.len()];
    let best = dp_min(p, order, &allowed, states);
    for v in 0..p.len() {
        allowed[v] = 0b01;
        if dp_min(p, order, &allowed, states) != best {
            allowed[v] = 0b10;
        }
    }
    let choice = allowed.iter().map(|&a| if a == 0b01 { 0 } else { 1 }).collect();
    (best - p.constant, choice)
}

struct Bnb<'a> {
    p: &'a Problem,
    /// `upper[v]`: edges to later nodes, oriented `[choice v][choice u]`.
    upper: Vec<Vec<(usize, [[i64; 2]; 2])>>,
    tail_min: Vec<i64>,
    partial: Vec<[i64; 2]>,
    choice: Vec<u8>,
    best: (i64, Vec<u8>),
    visited: u64,
    limit: u64,
}

impl Bnb<'_> {
    fn bound(&self, k: usize, so_far: i64) -> i64 {
        let open: i64 = self.partial[k..].iter().map(|c| c[0].min(c[1])).sum();
        so_far + open + self.tail_min[k]
    }

    fn descend(&mut self, k: usize, so_far: i64) -> Result<(), SearchError> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(SearchError::NodeLimit { limit: self.limit });
        }
        if k == self.p.len() {
            if (so_far, &self.choice) < (self.best.0, &self.best.1) {
                self.best = (so_far, self.choice.clone());
            }
            return Ok(());
        }
        for c in 0..2u8 {
            self.choice[k] = c;
            let cost = so_far + self.partial[k][c as usize];
            for i in 0..self.upper[k].len() {
                let (u, m) = self.upper[k][i];
                self.partial[u][0] += m[c as usize][0];
                self.partial[u][1] += m[c as usize][1];
            }
            let lb = self.bound(k + 1, cost);
            let promising = lb < self.best.0 || (lb == self.best.0 && self.choice[..=k] <= self.best.1[..=k]);
            let result = if promising { self.descend(k + 1, cost) } else { Ok(()) };
            for i in 0..self.upper[k].len() {
                let (u, m) = self.upper[k][i];
                self.partial[u][0] -= m[c as usize][0];
                self.partial[u][1] -= m[c as usize][1];
            }
            result?;
        }
        Ok(())
    }
}

fn bnb_solve(p: &Problem, incumbent: Vec<u8>, limit: u64, states: &mut u64) -> Result<(i64, Vec<u8>), SearchError> {
    let n = p.len();
    let mut upper = vec![Vec::new(); n];
    let mut tail_min = vec![0i64; n + 1];
    for &(a, b, m) in &p.edges {
        upper[a].push((b, m));
        tail_min[a] += m.iter().flatten().copied().min().unwrap_or(0);
    }
    for k in (0..n).rev() {
        tail_min[k] += tail_min[k + 1];
    }
    // tail_min[k] must only count edges whose endpoints are both >= k, which
    // holds because every edge is stored at its smaller endpoint.
    let best_cost = p.evaluate(&incumbent) - p.constant;
    let mut search = Bnb {
        p,
        upper,
        tail_min,
        partial: p.unary.clone(),
        choice: vec![0; n],
        best: (best_cost, incumbent),
        visited: 0,
        limit,
    };
    let result = search.descend(0, 0);
    *states += search.visited;
    result.map(|_| search.best)
}

/// Exact minimizer of the mean absolute difference over `pairs`, restricted
/// to the pruned candidates. Ties go to the lexicographically smallest
/// assignment.
pub fn global_optimize(
    profile: &DelayProfile,
    taps: &Taps,
    candidates: &PrunedCandidates,
    pairs: &PairSet,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let n = profile.len();
    if candidates.len() != n || pairs.nodes() != n {
        return Err(SearchError::Shape {
            profile: n,
            candidates: candidates.len(),
            pairs: pairs.nodes(),
        });
    }
    let lists = candidates.tap_lists();
    let arrivals = candidate_arrivals(profile, taps, &lists);
    let (problem, free) = Problem::build(&arrivals, pairs);
    let mut states = 0u64;

    let (method, choice) = if problem.len() == 0 {
        (SearchMethod::Trivial, Vec::new())
    } else {
        let mut orderings: Vec<(&'static str, Vec<usize>)> = Vec::new();
        if let Some(sweep) = pairs.sweep_order() {
            let mut slot = vec![usize::MAX; n];
            for (f, &x) in free.iter().enumerate() {
                slot[x] = f;
            }
            orderings.push(("sweep", sweep.iter().map(|&x| slot[x]).filter(|&f| f != usize::MAX).collect()));
        }
        orderings.push(("id", (0..problem.len()).collect()));
        orderings.push(("rcm", reverse_cuthill_mckee(&problem)));
        let (name, order, width) = orderings
            .into_iter()
            .map(|(name, o)| {
                let w = frontier_width(&problem, &o);
                (name, o, w)
            })
            .min_by_key(|(_, _, w)| *w)
            .expect("at least one ordering");

        let use_dp = match options.strategy {
            Strategy::Auto => width <= options.max_frontier_width,
            Strategy::FrontierDp => true,
            Strategy::BranchAndBound => false,
        };
        if use_dp {
            let (_, choice) = dp_solve(&problem, &order, &mut states);
            (SearchMethod::FrontierDp { ordering: name, width }, choice)
        } else {
            let local = local_optimize(profile, taps);
            let incumbent = free
                .iter()
                .map(|&x| u8::from(lists[x][0] != local.indices()[x]))
                .collect();
            let (_, choice) = bnb_solve(&problem, incumbent, options.node_limit, &mut states)?;
            (SearchMethod::BranchAndBound, choice)
        }
    };

    let mut indices: Vec<u32> = lists.iter().map(|c| c[0]).collect();
    for (f, &x) in free.iter().enumerate() {
        indices[x] = lists[x][choice[f] as usize];
    }
    let sum = problem.evaluate(&choice);
    Ok(SearchOutcome {
        assignment: TapAssignment::new_unpinned(indices),
        cost: MeanFs::new(2 * sum, 2 * pairs.len() as u64),
        stats: SearchStats {
            method,
            free_nodes: free.len(),
            states_examined: states,
        },
    })
}
