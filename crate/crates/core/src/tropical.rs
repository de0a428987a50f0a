//! Tropical covers of `Tℙ¹` with simple inner vertices at fixed positions.
//!
//! Inner vertices sit over `x_1 < … < x_r`, so an isomorphism class is fully
//! described by its multiset of edges `(from, to, weight)`. Positions are
//! encoded as `0` for `−∞`, `1..=r` for the inner vertices and `r + 1` for
//! `+∞`; every edge runs from a smaller to a larger position.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HurwitzError, Result};
use crate::partitions::{branch_count, Partition};
use crate::symgroup::Budget;
use crate::value::HurwitzValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: u32,
}

impl Edge {
    pub fn new(from: usize, to: usize, weight: u32) -> Self {
        Edge { from, to, weight }
    }

    pub fn is_odd(&self) -> bool {
        self.weight % 2 == 1
    }

    /// The endpoint other than `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalCover {
    r: usize,
    genus: u32,
    edges: Vec<Edge>,
    /// Edge indices at each vertex `1..=r` (slot 0 unused).
    incidence: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SymKind {
    Cycle,
    Fork,
}

/// A pair of parallel equal-weight edges: a symmetric cycle (both inner) or a
/// symmetric fork (two ends at one vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymPair {
    pub edges: (usize, usize),
    pub kind: SymKind,
    pub weight: u32,
}

impl SymPair {
    pub fn is_odd(&self) -> bool {
        self.weight % 2 == 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SymRegistry {
    pub sym_cycles: Vec<SymPair>,
    /// Forks of either parity.
    pub sym_forks: Vec<SymPair>,
}

impl SymRegistry {
    /// `Sym(φ)`: symmetric cycles of any parity and odd forks.
    pub fn sym(&self) -> Vec<SymPair> {
        let mut v: Vec<SymPair> = self
            .sym_cycles
            .iter()
            .chain(self.sym_forks.iter().filter(|f| f.is_odd()))
            .copied()
            .collect();
        v.sort();
        v
    }
}

impl TropicalCover {
    /// Validates and canonicalises an edge list over `r` inner vertices.
    pub fn new(r: usize, mut edges: Vec<Edge>) -> Result<Self> {
        let bad = |m: String| Err(HurwitzError::InvalidCover(m));
        if r == 0 {
            return Err(HurwitzError::NoBranchPoints);
        }
        edges.sort();
        let mut incidence = vec![[usize::MAX; 3]; r + 1];
        let mut fill = vec![0usize; r + 1];
        for (i, e) in edges.iter().enumerate() {
            if e.weight == 0 || e.from >= e.to || e.to > r + 1 {
                return bad(format!("malformed edge {e:?}"));
            }
            if e.from == 0 && e.to == r + 1 {
                return bad("edge without inner vertex".into());
            }
            for v in [e.from, e.to] {
                if (1..=r).contains(&v) {
                    if fill[v] == 3 {
                        return bad(format!("vertex {v} has more than three edges"));
                    }
                    incidence[v][fill[v]] = i;
                    fill[v] += 1;
                }
            }
        }
        for v in 1..=r {
            if fill[v] != 3 {
                return bad(format!("vertex {v} is not trivalent"));
            }
            let (mut left, mut right) = (0, 0);
            for &i in &incidence[v] {
                if edges[i].to == v {
                    left += edges[i].weight;
                } else {
                    right += edges[i].weight;
                }
            }
            if left != right {
                return bad(format!("vertex {v} is not balanced"));
            }
        }
        // Connectivity through inner vertices.
        let mut seen = vec![false; r + 1];
        seen[1] = true;
        let mut stack = vec![1];
        while let Some(v) = stack.pop() {
            for &i in &incidence[v] {
                let w = edges[i].other(v);
                if (1..=r).contains(&w) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if !seen[1..].iter().all(|&b| b) {
            return bad("graph is disconnected".into());
        }
        let ends = edges.iter().filter(|e| e.from == 0 || e.to == r + 1).count();
        // Betti number of a connected graph with r + ends vertices.
        let b1 = edges.len() as i64 - (r + ends) as i64 + 1;
        Ok(TropicalCover {
            r,
            genus: b1 as u32,
            edges,
            incidence,
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        self.edges[i]
    }

    pub fn is_end(&self, i: usize) -> bool {
        let e = self.edges[i];
        e.from == 0 || e.to == self.r + 1
    }

    pub fn is_inner(&self, i: usize) -> bool {
        !self.is_end(i)
    }

    /// Edge indices at inner vertex `v` (1-based).
    pub fn edges_at(&self, v: usize) -> [usize; 3] {
        self.incidence[v]
    }

    /// Edge indices at `v` entering from the left and leaving to the right.
    pub fn sides_at(&self, v: usize) -> (Vec<usize>, Vec<usize>) {
        self.incidence[v]
            .iter()
            .partition(|&&i| self.edges[i].to == v)
    }

    /// Weights of the ends at `−∞`.
    pub fn lambda(&self) -> Partition {
        self.edges.iter().filter(|e| e.from == 0).map(|e| e.weight).collect()
    }

    /// Weights of the ends at `+∞`.
    pub fn mu(&self) -> Partition {
        self.edges
            .iter()
            .filter(|e| e.to == self.r + 1)
            .map(|e| e.weight)
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.lambda().size()
    }

    /// Total weight crossing a vertical line just right of position `x`.
    pub fn cut_weight(&self, x: usize) -> u32 {
        self.edges
            .iter()
            .filter(|e| e.from <= x && e.to > x)
            .map(|e| e.weight)
            .sum()
    }

    pub fn sym_registry(&self) -> SymRegistry {
        let mut reg = SymRegistry::default();
        for i in 1..self.edges.len() {
            if self.edges[i] == self.edges[i - 1] {
                let pair = SymPair {
                    edges: (i - 1, i),
                    kind: if self.is_end(i) { SymKind::Fork } else { SymKind::Cycle },
                    weight: self.edges[i].weight,
                };
                match pair.kind {
                    SymKind::Cycle => reg.sym_cycles.push(pair),
                    SymKind::Fork => reg.sym_forks.push(pair),
                }
            }
        }
        reg
    }

    /// Order of the automorphism group: each run of identical edges can be
    /// permuted freely.
    pub fn automorphism_count(&self) -> u64 {
        let mut total = 1u64;
        let mut run = 1u64;
        for i in 1..=self.edges.len() {
            if i < self.edges.len() && self.edges[i] == self.edges[i - 1] {
                run += 1;
                total *= run;
            } else {
                run = 1;
            }
        }
        total
    }

    /// Product of inner edge weights over `|Aut|`.
    pub fn mult_complex(&self) -> BigRational {
        let prod: BigInt = (0..self.edges.len())
            .filter(|&i| self.is_inner(i))
            .map(|i| BigInt::from(self.edges[i].weight))
            .product();
        BigRational::new(prod, BigInt::from(self.automorphism_count()))
    }

    /// The same graph with inner vertices relabelled by `order`, where
    /// `order[k]` is the old index of the vertex placed at position `k + 1`.
    pub fn reorder(&self, order: &[usize]) -> Result<TropicalCover> {
        if order.len() != self.r {
            return Err(HurwitzError::InvalidCover("bad vertex order".into()));
        }
        let mut pos = vec![0usize; self.r + 2];
        pos[self.r + 1] = self.r + 1;
        for (k, &old) in order.iter().enumerate() {
            pos[old] = k + 1;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(pos[e.from], pos[e.to], e.weight))
            .collect();
        TropicalCover::new(self.r, edges)
    }
}

/// Order in which the sweep tries its branching choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepOrder {
    Forward,
    Reverse,
}

#[derive(Clone)]
struct Strand {
    from: usize,
    weight: u32,
    node: usize,
}

#[derive(Clone)]
struct State {
    strands: Vec<Strand>,
    closed: Vec<Edge>,
    /// Union-find parents over λ-ends followed by inner vertices.
    parent: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

struct Sweep<'a> {
    r: usize,
    mu: &'a Partition,
    lambda_len: usize,
    order: SweepOrder,
    budget: &'a Budget,
}

impl Sweep<'_> {
    fn vertex_node(&self, v: usize) -> usize {
        self.lambda_len + v - 1
    }

    fn feasible(&self, st: &mut State, left: usize) -> bool {
        let n = st.strands.len();
        let target = self.mu.len();
        let gap = n.abs_diff(target);
        if gap > left || (left - gap) % 2 == 1 {
            return false;
        }
        let joins = (left + n - target) / 2;
        let mut roots: Vec<usize> = st
            .strands
            .iter()
            .map(|s| s.node)
            .collect::<Vec<_>>()
            .into_iter()
            .map(|x| find(&mut st.parent, x))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len() <= joins + 1
    }

    /// All states reachable by placing vertex `v`.
    fn children(&self, st: &State, v: usize) -> Vec<State> {
        let mut out = Vec::new();
        let key = |s: &Strand| (s.from, s.weight);
        let vn = self.vertex_node(v);
        let n = st.strands.len();
        let mut seen_pairs = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&st.strands[i], &st.strands[j]);
                if !seen_pairs.insert((key(a), key(b))) {
                    continue;
                }
                let mut next = st.clone();
                next.closed.push(Edge::new(a.from, v, a.weight));
                next.closed.push(Edge::new(b.from, v, b.weight));
                let ra = find(&mut next.parent, a.node);
                let rb = find(&mut next.parent, b.node);
                next.parent[ra] = vn;
                next.parent[rb] = vn;
                next.strands.remove(j);
                next.strands.remove(i);
                next.strands.push(Strand {
                    from: v,
                    weight: a.weight + b.weight,
                    node: vn,
                });
                out.push(next);
            }
        }
        let mut seen = BTreeSet::new();
        for i in 0..n {
            let a = &st.strands[i];
            if a.weight < 2 || !seen.insert(key(a)) {
                continue;
            }
            for b in 1..=a.weight / 2 {
                let mut next = st.clone();
                next.closed.push(Edge::new(a.from, v, a.weight));
                let ra = find(&mut next.parent, a.node);
                next.parent[ra] = vn;
                next.strands.remove(i);
                next.strands.push(Strand { from: v, weight: b, node: vn });
                next.strands.push(Strand {
                    from: v,
                    weight: a.weight - b,
                    node: vn,
                });
                out.push(next);
            }
        }
        for s in &mut out {
            s.strands.sort_by_key(|x| (x.from, x.weight));
        }
        if self.order == SweepOrder::Reverse {
            out.reverse();
        }
        out
    }

    fn finish(&self, st: &mut State) -> Option<Vec<Edge>> {
        let mut w: Vec<u32> = st.strands.iter().map(|s| s.weight).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        if w != self.mu.parts() || st.strands.iter().any(|s| s.from == 0) {
            return None;
        }
        let root = find(&mut st.parent, self.vertex_node(1));
        for v in 1..=self.r {
            if find(&mut st.parent, self.vertex_node(v)) != root {
                return None;
            }
        }
        let mut edges = st.closed.clone();
        edges.extend(st.strands.iter().map(|s| Edge::new(s.from, self.r + 1, s.weight)));
        edges.sort();
        Some(edges)
    }

    fn run(&self, mut st: State, v: usize, out: &mut Vec<Vec<Edge>>) -> Result<()> {
        self.budget_tick()?;
        if v > self.r {
            if let Some(e) = self.finish(&mut st) {
                out.push(e);
            }
            return Ok(());
        }
        for mut child in self.children(&st, v) {
            if self.feasible(&mut child, self.r - v) {
                self.run(child, v + 1, out)?;
            }
        }
        Ok(())
    }

    fn budget_tick(&self) -> Result<()> {
        self.budget.spend_nodes(1)
    }
}

/// All raw sweep outputs, one edge list per event sequence, before
/// deduplication.
pub fn sweep_edge_lists(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    order: SweepOrder,
    budget: &Budget,
) -> Result<(usize, Vec<Vec<Edge>>)> {
    let r = branch_count(g, lambda, mu)?;
    if lambda.size() == 0 {
        return Err(HurwitzError::EmptyDegree);
    }
    if r <= 0 {
        return Err(if r == 0 {
            HurwitzError::NoBranchPoints
        } else {
            HurwitzError::NegativeBranchCount(r)
        });
    }
    let r = r as usize;
    let sweep = Sweep {
        r,
        mu,
        lambda_len: lambda.len(),
        order,
        budget,
    };
    let mut strands: Vec<Strand> = lambda
        .iter()
        .enumerate()
        .map(|(i, w)| Strand { from: 0, weight: w, node: i })
        .collect();
    strands.sort_by_key(|s| s.weight);
    let mut root = State {
        strands,
        closed: Vec::new(),
        parent: (0..lambda.len() + r).collect(),
    };
    if !sweep.feasible(&mut root, r) {
        return Ok((r, Vec::new()));
    }
    let firsts: Vec<State> = sweep
        .children(&root, 1)
        .into_iter()
        .filter_map(|mut c| sweep.feasible(&mut c, r - 1).then_some(c))
        .collect();
    let parts: Vec<Vec<Vec<Edge>>> = firsts
        .into_par_iter()
        .map(|c| {
            let mut out = Vec::new();
            sweep.run(c, 2, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok((r, parts.into_iter().flatten().collect()))
}

/// Isomorphism classes of tropical covers of type `(g, λ, μ)`, sorted by
/// canonical form.
pub fn enumerate_covers_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    order: SweepOrder,
    budget: &Budget,
) -> Result<Vec<TropicalCover>> {
    let (r, lists) = sweep_edge_lists(g, lambda, mu, order, budget)?;
    let unique: BTreeSet<Vec<Edge>> = lists.into_iter().collect();
    unique
        .into_iter()
        .map(|e| TropicalCover::new(r, e))
        .collect()
}

pub fn enumerate_covers(g: u32, lambda: &Partition, mu: &Partition) -> Result<Vec<TropicalCover>> {
    enumerate_covers_with(g, lambda, mu, SweepOrder::Forward, &Budget::default())
}

/// `Σ mult^ℂ` over all isomorphism classes.
pub fn tropical_complex_hurwitz(g: u32, lambda: &Partition, mu: &Partition) -> Result<HurwitzValue> {
    let covers = enumerate_covers(g, lambda, mu)?;
    Ok(HurwitzValue(covers.iter().map(|c| c.mult_complex()).sum()))
}

pub fn tropical_complex_hurwitz_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    budget: &Budget,
) -> Result<HurwitzValue> {
    let covers = enumerate_covers_with(g, lambda, mu, SweepOrder::Forward, budget)?;
    Ok(HurwitzValue(covers.iter().map(|c| c.mult_complex()).sum()))
}
