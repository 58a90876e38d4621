//! Best-first branch and bound.
//!
//! The search tree assigns one tour position (TSP) or one facility (QAP) per
//! level. City 0 is pinned to the first tour position since closed tours are
//! rotation invariant. A node with a single remaining choice is completed on
//! creation, so every expanded node has at least two children.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{SolveResult, SolverMeta};
use crate::error::{Error, Result};
use crate::problem::{Permutation, ProblemInstance, QapInstance, TspInstance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbOptions {
    /// Largest accepted instance size.
    pub max_n: usize,
    /// Record the bound and incumbent at every node expansion.
    pub audit: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        BnbOptions {
            max_n: 12,
            audit: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub depth: usize,
    pub bound: f64,
    pub incumbent: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BnbStats {
    /// Nodes branched on (including those on the initial greedy dive).
    pub nodes_explored: usize,
    /// Complete assignments whose cost was evaluated.
    pub leaves_evaluated: usize,
    /// Generated or queued nodes discarded by the bound.
    pub nodes_pruned: usize,
    pub incumbent_updates: usize,
    /// Expansions of a node whose bound exceeded the incumbent. Always zero.
    pub bound_violations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<AuditEntry>>,
}

pub fn bnb_solve(inst: &ProblemInstance) -> Result<SolveResult> {
    bnb_solve_with(inst, BnbOptions::default())
}

pub fn bnb_solve_with(inst: &ProblemInstance, opts: BnbOptions) -> Result<SolveResult> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::invalid(format!(
            "branch and bound needs n >= 2, got {n}"
        )));
    }
    if n > opts.max_n {
        return Err(Error::SizeLimit {
            what: "branch-and-bound instance",
            size: n,
            limit: opts.max_n,
        });
    }
    let start = Instant::now();
    let mut search = Search {
        inst,
        n,
        incumbent: f64::INFINITY,
        best: None,
        heap: BinaryHeap::new(),
        seq: 0,
        stats: BnbStats {
            audit: opts.audit.then(Vec::new),
            ..BnbStats::default()
        },
    };

    let root = match inst {
        ProblemInstance::Tsp(_) => vec![0],
        ProblemInstance::Qap(_) => Vec::new(),
    };
    match search.make_node(root)? {
        Child::Leaf(prefix) => search.evaluate_leaf(prefix)?,
        Child::Inner(root) => search.run(root)?,
    }

    let pi = search.best.expect("search visits at least one leaf");
    Ok(SolveResult {
        pi,
        cost: search.incumbent,
        elapsed_s: start.elapsed().as_secs_f64(),
        meta: SolverMeta::Bnb(search.stats),
    })
}

#[derive(Debug)]
struct Node {
    bound: f64,
    prefix: Vec<usize>,
    seq: u64,
}

// Min-heap on bound; deeper nodes first on ties, then creation order.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| self.prefix.len().cmp(&other.prefix.len()))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

enum Child {
    Leaf(Vec<usize>),
    Inner(Node),
}

struct Search<'a> {
    inst: &'a ProblemInstance,
    n: usize,
    incumbent: f64,
    best: Option<Permutation>,
    heap: BinaryHeap<Node>,
    seq: u64,
    stats: BnbStats,
}

impl Search<'_> {
    fn prunable(&self, bound: f64) -> bool {
        bound >= self.incumbent - 1e-9 * self.incumbent.abs().max(1.0)
    }

    fn make_node(&mut self, mut prefix: Vec<usize>) -> Result<Child> {
        if prefix.len() + 1 == self.n {
            let last = (0..self.n).find(|v| !prefix.contains(v)).unwrap();
            prefix.push(last);
        }
        if prefix.len() == self.n {
            return Ok(Child::Leaf(prefix));
        }
        let bound = lower_bound(self.inst, &prefix)?;
        self.seq += 1;
        Ok(Child::Inner(Node {
            bound,
            prefix,
            seq: self.seq,
        }))
    }

    fn evaluate_leaf(&mut self, prefix: Vec<usize>) -> Result<()> {
        self.stats.leaves_evaluated += 1;
        let pi = Permutation::new(prefix)?;
        let cost = self.inst.cost(&pi)?;
        if cost < self.incumbent {
            self.incumbent = cost;
            self.best = Some(pi);
            self.stats.incumbent_updates += 1;
        }
        Ok(())
    }

    /// Branches on `node`, evaluating leaf children immediately. Returns the
    /// surviving inner children sorted by ascending bound.
    fn expand(&mut self, node: Node) -> Result<Vec<Node>> {
        self.stats.nodes_explored += 1;
        if node.bound > self.incumbent {
            self.stats.bound_violations += 1;
        }
        if let Some(log) = self.stats.audit.as_mut() {
            log.push(AuditEntry {
                depth: node.prefix.len(),
                bound: node.bound,
                incumbent: self.incumbent,
            });
        }
        let mut inner = Vec::new();
        for v in 0..self.n {
            if node.prefix.contains(&v) {
                continue;
            }
            let mut prefix = node.prefix.clone();
            prefix.push(v);
            match self.make_node(prefix)? {
                Child::Leaf(p) => self.evaluate_leaf(p)?,
                Child::Inner(c) => inner.push(c),
            }
        }
        inner.sort_by(|a, b| a.bound.total_cmp(&b.bound).then(a.seq.cmp(&b.seq)));
        let before = inner.len();
        inner.retain(|c| !self.prunable(c.bound));
        self.stats.nodes_pruned += before - inner.len();
        Ok(inner)
    }

    fn run(&mut self, root: Node) -> Result<()> {
        // Greedy dive along the cheapest-bound child for a first incumbent.
        let mut current = Some(root);
        while let Some(node) = current.take() {
            let mut children = self.expand(node)?.into_iter();
            current = children.next();
            self.heap.extend(children);
        }

        while let Some(node) = self.heap.pop() {
            if self.prunable(node.bound) {
                self.stats.nodes_pruned += 1 + self.heap.len();
                self.heap.clear();
                break;
            }
            let children = self.expand(node)?;
            self.heap.extend(children);
        }
        Ok(())
    }
}

fn check_prefix(n: usize, partial: &[usize]) -> Result<()> {
    if partial.len() > n {
        return Err(Error::invalid(format!(
            "prefix of length {} exceeds instance size {n}",
            partial.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in partial {
        if v >= n || seen[v] {
            return Err(Error::invalid(format!(
                "{partial:?} is not a prefix of a permutation of 0..{n}"
            )));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Admissible lower bound on the cost of every completion of `partial`.
///
/// For TSP, `partial` lists the first cities of the tour; for QAP it lists
/// the locations of facilities `0..partial.len()`.
pub fn lower_bound(inst: &ProblemInstance, partial: &[usize]) -> Result<f64> {
    check_prefix(inst.n(), partial)?;
    Ok(match inst {
        ProblemInstance::Tsp(t) => tsp_bound(t, partial),
        ProblemInstance::Qap(q) => qap_bound(q, partial),
    })
}

/// Committed edges, plus the cheapest way out of the last city, plus the
/// cheapest outgoing edge of every unvisited city (to another unvisited city
/// or back to the start).
fn tsp_bound(inst: &TspInstance, partial: &[usize]) -> f64 {
    let n = inst.n();
    let d = inst.distances();
    let mut visited = vec![false; n];
    for &v in partial {
        visited[v] = true;
    }
    let unvisited: Vec<usize> = (0..n).filter(|&v| !visited[v]).collect();

    let Some((&first, &last)) = partial.first().zip(partial.last()) else {
        return (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| d.get(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|v| v.is_finite())
            .sum();
    };

    let committed: f64 = partial.windows(2).map(|w| d.get(w[0], w[1])).sum();
    let leave_last = if unvisited.is_empty() {
        d.get(last, first)
    } else {
        unvisited
            .iter()
            .map(|&j| d.get(last, j))
            .fold(f64::INFINITY, f64::min)
    };
    let rest: f64 = unvisited
        .iter()
        .map(|&i| {
            unvisited
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| d.get(i, j))
                .fold(d.get(i, first), f64::min)
        })
        .sum();
    committed + leave_last + rest
}

/// Committed interactions plus the rearrangement-inequality minimum pairing
/// of the remaining flows (ascending) with the remaining distances
/// (descending).
fn qap_bound(inst: &QapInstance, partial: &[usize]) -> f64 {
    let n = inst.n();
    let (b, c) = (inst.flow(), inst.distance());
    let a = partial.len();

    let mut committed = 0.0;
    for k in 0..a {
        for l in 0..a {
            committed += b.get(k, l) * c.get(partial[k], partial[l]);
        }
    }
    if a == n {
        return committed;
    }

    let mut used = vec![false; n];
    for &loc in partial {
        used[loc] = true;
    }
    let mut flows = Vec::with_capacity(n * n);
    let mut dists = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if i >= a || j >= a {
                flows.push(b.get(i, j));
            }
            if !used[i] || !used[j] {
                dists.push(c.get(i, j));
            }
        }
    }
    debug_assert_eq!(flows.len(), dists.len());
    flows.sort_by(f64::total_cmp);
    dists.sort_by(|x, y| y.total_cmp(x));
    committed + flows.iter().zip(&dists).map(|(f, d)| f * d).sum::<f64>()
}
