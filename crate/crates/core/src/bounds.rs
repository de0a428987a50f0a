//! Sign-change bounds, explicit effective non-zigzag witnesses, the
//! factorial lower bounds on `Z′`, and the stabilisation sweep.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HurwitzError, Result};
use crate::partitions::{branch_count, extend_with_ones, tail_decompose, Partition, TailDecomposition};
use crate::realtrop::{real_profile_from_covers, Splitting};
use crate::symgroup::Budget;
use crate::tropical::{enumerate_covers_with, Edge, SweepOrder, TropicalCover};
use crate::value::HurwitzValue;
use crate::zigzag::{classify_cover, in_excluded_family, zigzag_counts, CoverKind, Witness};

// ---------------------------------------------------------------------------
// Sign changes

fn sign_changes(seq: impl Iterator<Item = i64>, k: i64) -> u32 {
    let mut prev = k;
    let mut n = 0;
    for x in seq {
        if prev.signum() * x.signum() < 0 {
            n += 1;
        }
        prev = x;
    }
    n
}

/// Maximum number of sign changes by brute force over distinct orderings.
pub fn sign_change_bound_exhaustive(k: i64, lambda: &Partition, mu: &Partition) -> u32 {
    let mut steps: Vec<i64> = lambda
        .iter()
        .map(|p| p as i64)
        .chain(mu.iter().map(|p| -(p as i64)))
        .collect();
    steps.sort_unstable();
    let mut best = 0;
    loop {
        let mut cur = k;
        let seq = steps.iter().map(|&s| {
            cur += s;
            cur
        });
        best = best.max(sign_changes(seq, k));
        // next distinct permutation
        let n = steps.len();
        let Some(i) = (1..n).rev().find(|&i| steps[i - 1] < steps[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| steps[j] > steps[i - 1]).unwrap();
        steps.swap(i - 1, j);
        steps[i..].reverse();
    }
    best
}

/// Maximum number of sign changes by memoised search over the multiset of
/// unused steps; the current value is a function of that multiset.
pub fn sign_change_bound_dp(k: i64, lambda: &Partition, mu: &Partition) -> u32 {
    let mut kinds: Vec<i64> = lambda
        .iter()
        .map(|p| p as i64)
        .chain(mu.iter().map(|p| -(p as i64)))
        .collect();
    kinds.sort_unstable();
    kinds.dedup();
    let all: Vec<usize> = kinds
        .iter()
        .map(|&s| {
            if s > 0 {
                lambda.count(s as u32)
            } else {
                mu.count((-s) as u32)
            }
        })
        .collect();
    fn go(left: &mut Vec<usize>, kinds: &[i64], cur: i64, memo: &mut HashMap<Vec<usize>, u32>) -> u32 {
        if let Some(&v) = memo.get(left) {
            return v;
        }
        let mut best = 0;
        for i in 0..kinds.len() {
            if left[i] == 0 {
                continue;
            }
            left[i] -= 1;
            let next = cur + kinds[i];
            let here = u32::from(cur.signum() * next.signum() < 0);
            best = best.max(here + go(left, kinds, next, memo));
            left[i] += 1;
        }
        memo.insert(left.clone(), best);
        best
    }
    go(&mut all.clone(), &kinds, k, &mut HashMap::new())
}

/// `B(k, λ, μ)`: the most sign changes of `k₀ = k, k_{i+1} = k_i ± part`
/// over all orders of the steps (`+` for parts of λ, `−` for parts of μ).
pub fn sign_change_bound(k: i64, lambda: &Partition, mu: &Partition) -> u32 {
    if lambda.len() + mu.len() <= 10 {
        sign_change_bound_exhaustive(k, lambda, mu)
    } else {
        sign_change_bound_dp(k, lambda, mu)
    }
}

// ---------------------------------------------------------------------------
// Existence cases

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    /// `l(λ₀) = l(μ₀)`.
    Eq,
    /// `l(λ₀) > l(μ₀)`.
    Gt,
    /// `l(λ₀) < l(μ₀)`.
    Lt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// Some labelling makes the first connector incoming.
    Direct,
    /// The labelling with the largest negative flow is used.
    MaxNegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ExistenceCase {
    pub condition: Condition,
    pub variant: Variant,
}

/// End of a string: a part of λ at `−∞` or of μ at `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Lambda(u32),
    Mu(u32),
}

impl End {
    fn flow(self) -> i64 {
        match self {
            End::Lambda(w) => w as i64,
            End::Mu(w) => -(w as i64),
        }
    }
}

/// Labelling of the first string together with the data the bounds need.
#[derive(Debug, Clone)]
struct Head {
    case: ExistenceCase,
    /// Start and finish ends of the first string.
    start: End,
    finish: End,
    /// Signed weight of the first connector; positive when incoming.
    t: i64,
    /// Half the difference `l(λ₀) − l(μ₀)`.
    half_gap: i64,
    /// λ₀ and μ₀ parts not on the first string.
    rest_l: Vec<u32>,
    rest_m: Vec<u32>,
}

struct Parts {
    dl: TailDecomposition,
    dm: TailDecomposition,
    l0: Vec<u32>,
    m0: Vec<u32>,
    sl: i64,
    sm: i64,
}

impl Parts {
    fn new(lambda: &Partition, mu: &Partition) -> Self {
        let dl = tail_decompose(lambda);
        let dm = tail_decompose(mu);
        let l0 = dl.zero.parts().to_vec();
        let m0 = dm.zero.parts().to_vec();
        let sl = l0.iter().map(|&x| x as i64).sum();
        let sm = m0.iter().map(|&x| x as i64).sum();
        Parts { dl, dm, l0, m0, sl, sm }
    }
}

fn without(v: &[u32], idx: &[usize]) -> Vec<u32> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| !idx.contains(i))
        .map(|(_, &x)| x)
        .collect()
}

/// Picks the first positive candidate, else the largest negative one.
fn choose<T: Copy>(cands: impl Iterator<Item = (T, i64)>) -> Option<(T, i64, Variant)> {
    let cands: Vec<(T, i64)> = cands.collect();
    if let Some(&(x, t)) = cands.iter().find(|(_, t)| *t > 0) {
        return Some((x, t, Variant::Direct));
    }
    let best = cands.iter().filter(|(_, t)| *t < 0).map(|(_, t)| *t).max()?;
    let &(x, t) = cands.iter().find(|(_, t)| *t == best)?;
    Some((x, t, Variant::MaxNegative))
}

fn head(p: &Parts, condition: Condition) -> Option<Head> {
    let (nl, nm) = (p.l0.len(), p.m0.len());
    match condition {
        Condition::Eq => {
            let cands = (0..nl).flat_map(|i| {
                (0..nm).map(move |j| ((i, j), p.sl - p.l0[i] as i64 - (p.sm - p.m0[j] as i64)))
            });
            let ((i, j), t, variant) = choose(cands)?;
            Some(Head {
                case: ExistenceCase { condition, variant },
                start: End::Lambda(p.l0[i]),
                finish: End::Mu(p.m0[j]),
                t,
                half_gap: 0,
                rest_l: without(&p.l0, &[i]),
                rest_m: without(&p.m0, &[j]),
            })
        }
        Condition::Gt => {
            let kk = (nl as i64 - nm as i64) / 2;
            let cands = (0..nl).flat_map(|i| {
                (i + 1..nl).map(move |j| {
                    ((i, j), p.sl - p.l0[i] as i64 - p.l0[j] as i64 - p.sm - 2 * kk + 2)
                })
            });
            let ((i, j), t, variant) = choose(cands)?;
            Some(Head {
                case: ExistenceCase { condition, variant },
                start: End::Lambda(p.l0[i]),
                finish: End::Lambda(p.l0[j]),
                t,
                half_gap: kk,
                rest_l: without(&p.l0, &[i, j]),
                rest_m: p.m0.clone(),
            })
        }
        Condition::Lt => {
            let kk = (nm as i64 - nl as i64) / 2;
            let cands = (0..nm).map(|j| (j, p.sl - (p.sm - p.m0[j] as i64) + 2 * kk - 1));
            let (j, t, variant) = choose(cands)?;
            Some(Head {
                case: ExistenceCase { condition, variant },
                start: End::Lambda(1),
                finish: End::Mu(p.m0[j]),
                t,
                half_gap: -kk,
                rest_l: p.l0.clone(),
                rest_m: without(&p.m0, &[j]),
            })
        }
    }
}

fn condition_holds(g: u32, mu: &Partition, p: &Parts, condition: Condition) -> Option<Head> {
    let (nl, nm) = (p.l0.len() as i64, p.m0.len() as i64);
    let structural = match condition {
        Condition::Eq => nl == nm && nl >= 1 && !p.dm.oo.is_empty(),
        Condition::Gt => nl > nm && 2 * p.dm.ones_in_oo as i64 > nl - nm,
        Condition::Lt => nm > nl && !p.dm.oo.is_empty() && 2 * p.dl.ones_in_oo as i64 > nm - nl,
    };
    if !structural {
        return None;
    }
    let h = head(p, condition)?;
    let longest = if condition == Condition::Lt { nm } else { nl };
    let lhs = mu.len() as i64 + 2 * g as i64 - 3 * longest;
    let rhs = match h.case.variant {
        Variant::Direct => 0,
        Variant::MaxNegative => h.t.abs(),
    };
    (lhs > rhs).then_some(h)
}

/// Which existence condition holds for `(g, λ, μ)`, if any.
pub fn existence_case(g: u32, lambda: &Partition, mu: &Partition) -> Option<ExistenceCase> {
    if lambda.size() != mu.size() {
        return None;
    }
    let p = Parts::new(lambda, mu);
    [Condition::Eq, Condition::Gt, Condition::Lt]
        .into_iter()
        .find_map(|c| condition_holds(g, mu, &p, c))
        .map(|h| h.case)
}

// ---------------------------------------------------------------------------
// Witness construction

/// A tail hanging off the first string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tail {
    lambda_side: bool,
    /// Entry of the tail decomposition (the edge at the string has twice it).
    entry: u32,
    fork: bool,
    cycles: u32,
}

#[derive(Debug, Clone, Copy)]
enum Pt {
    Left,
    Right,
    V(usize),
}

#[derive(Default)]
struct Graph {
    nv: usize,
    edges: Vec<(Pt, Pt, u32)>,
    /// Vertices met by connectors.
    marked: Vec<usize>,
}

impl Graph {
    fn vertex(&mut self) -> usize {
        self.nv += 1;
        self.nv - 1
    }

    /// Builds a tail and returns the point its final edge leaves from (for
    /// λ tails) or enters (for μ tails).
    fn tail(&mut self, t: Tail, attach: usize) {
        let w = t.entry;
        let mut cur = if t.fork {
            let f = self.vertex();
            if t.lambda_side {
                self.edges.push((Pt::Left, Pt::V(f), w));
                self.edges.push((Pt::Left, Pt::V(f), w));
            } else {
                self.edges.push((Pt::V(f), Pt::Right, w));
                self.edges.push((Pt::V(f), Pt::Right, w));
            }
            Pt::V(f)
        } else if t.lambda_side {
            Pt::Left
        } else {
            Pt::Right
        };
        for _ in 0..t.cycles {
            let (a, b) = (self.vertex(), self.vertex());
            if t.lambda_side {
                self.edges.push((cur, Pt::V(a), 2 * w));
                self.edges.push((Pt::V(a), Pt::V(b), w));
                self.edges.push((Pt::V(a), Pt::V(b), w));
                cur = Pt::V(b);
            } else {
                self.edges.push((Pt::V(b), cur, 2 * w));
                self.edges.push((Pt::V(a), Pt::V(b), w));
                self.edges.push((Pt::V(a), Pt::V(b), w));
                cur = Pt::V(a);
            }
        }
        if t.lambda_side {
            self.edges.push((cur, Pt::V(attach), 2 * w));
        } else {
            self.edges.push((Pt::V(attach), cur, 2 * w));
        }
    }

    /// Lays out a string with third edges of the given signed flows, returning
    /// its vertices in traversal order.
    fn string(&mut self, a: End, flows: &[i64], b: End) -> Option<Vec<usize>> {
        let mut k = a.flow();
        let mut prev = match a {
            End::Lambda(_) => Pt::Left,
            End::Mu(_) => Pt::Right,
        };
        let mut vs = Vec::new();
        for &f in flows {
            let v = self.vertex();
            self.link(prev, Pt::V(v), k);
            k += f;
            if k == 0 {
                return None;
            }
            vs.push(v);
            prev = Pt::V(v);
        }
        match b {
            End::Mu(w) if k == w as i64 => self.edges.push((prev, Pt::Right, w)),
            End::Lambda(w) if k == -(w as i64) => self.edges.push((Pt::Left, prev, w)),
            _ => return None,
        }
        Some(vs)
    }

    /// String edge from `p` to `q` in traversal order with signed flow `k`.
    fn link(&mut self, p: Pt, q: Pt, k: i64) {
        let w = k.unsigned_abs() as u32;
        if k > 0 {
            self.edges.push((p, q, w));
        } else {
            self.edges.push((q, p, w));
        }
    }

    /// Orders vertices with the ancestors of connector vertices first and
    /// returns the cover, or `None` if those ancestors do not fit in the
    /// first half.
    fn finish(&self) -> Option<TropicalCover> {
        let n = self.nv;
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            if let (Pt::V(x), Pt::V(y)) = (a, b) {
                preds[y].push(x);
            }
        }
        let mut early = BTreeSet::new();
        let mut stack = self.marked.clone();
        while let Some(v) = stack.pop() {
            if early.insert(v) {
                stack.extend(preds[v].iter().copied());
            }
        }
        if early.len() > n.div_ceil(2) {
            return None;
        }
        let mut pos = vec![0usize; n];
        let mut placed = vec![false; n];
        let mut next = 1;
        for phase in [true, false] {
            loop {
                let v = (0..n).find(|&v| {
                    !placed[v] && early.contains(&v) == phase && preds[v].iter().all(|&u| placed[u])
                });
                let Some(v) = v else { break };
                placed[v] = true;
                pos[v] = next;
                next += 1;
            }
        }
        if next != n + 1 {
            return None;
        }
        let at = |p: Pt| match p {
            Pt::Left => 0,
            Pt::Right => n + 1,
            Pt::V(v) => pos[v],
        };
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, w)| Edge::new(at(a), at(b), w))
            .collect();
        TropicalCover::new(n, edges).ok()
    }
}

/// Every admissible labelling of the strings after the first one, in
/// first-feasible order; consecutive connectors must carry nonzero flow.
fn later_strings(h: &Head) -> Vec<Vec<(End, End)>> {
    // Remaining ends as (λ₀ parts, μ₀ parts, λ ones, μ ones).
    #[derive(Clone)]
    struct Pool {
        l: Vec<u32>,
        m: Vec<u32>,
        lone: i64,
        mone: i64,
    }
    impl Pool {
        fn flow(&self) -> i64 {
            self.l.iter().map(|&x| x as i64).sum::<i64>() + self.lone
                - self.m.iter().map(|&x| x as i64).sum::<i64>()
                - self.mone
        }
    }
    #[derive(Clone, Copy)]
    enum Slot {
        LM,
        OneM,
        LL,
        MM,
        LoneLone,
        MoneMone,
    }
    let kk = h.half_gap;
    let mut slots = Vec::new();
    let mut pool = Pool {
        l: h.rest_l.clone(),
        m: h.rest_m.clone(),
        lone: 0,
        mone: 0,
    };
    match h.case.condition {
        Condition::Eq => slots.extend(std::iter::repeat_n(Slot::LM, pool.l.len())),
        Condition::Gt => {
            pool.mone = 2 * (kk - 1);
            slots.extend(std::iter::repeat_n(Slot::LM, pool.m.len()));
            for _ in 1..kk {
                slots.push(Slot::MoneMone);
                slots.push(Slot::LL);
            }
        }
        Condition::Lt => {
            let kk = -kk;
            pool.lone = 1 + 2 * (kk - 1);
            slots.push(Slot::OneM);
            slots.extend(std::iter::repeat_n(Slot::LM, pool.l.len()));
            for _ in 1..kk {
                slots.push(Slot::LoneLone);
                slots.push(Slot::MM);
            }
        }
    }
    fn rec(slots: &[Slot], pool: Pool, acc: &mut Vec<(End, End)>, out: &mut Vec<Vec<(End, End)>>) {
        let Some((&slot, rest)) = slots.split_first() else {
            out.push(acc.clone());
            return;
        };
        let mut options: Vec<((End, End), Pool)> = Vec::new();
        let pairs = |n: usize| (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
        match slot {
            Slot::LM => {
                for i in 0..pool.l.len() {
                    for j in 0..pool.m.len() {
                        let mut q = pool.clone();
                        let (a, b) = (q.l.remove(i), q.m.remove(j));
                        options.push(((End::Lambda(a), End::Mu(b)), q));
                    }
                }
            }
            Slot::OneM => {
                for j in 0..pool.m.len() {
                    let mut q = pool.clone();
                    q.lone -= 1;
                    let b = q.m.remove(j);
                    options.push(((End::Lambda(1), End::Mu(b)), q));
                }
            }
            Slot::LL => {
                for (i, j) in pairs(pool.l.len()) {
                    let mut q = pool.clone();
                    let (b, a) = (q.l.remove(j), q.l.remove(i));
                    options.push(((End::Lambda(a), End::Lambda(b)), q));
                }
            }
            Slot::MM => {
                for (i, j) in pairs(pool.m.len()) {
                    let mut q = pool.clone();
                    let (b, a) = (q.m.remove(j), q.m.remove(i));
                    options.push(((End::Mu(a), End::Mu(b)), q));
                }
            }
            Slot::LoneLone => {
                let mut q = pool.clone();
                q.lone -= 2;
                options.push(((End::Lambda(1), End::Lambda(1)), q));
            }
            Slot::MoneMone => {
                let mut q = pool.clone();
                q.mone -= 2;
                options.push(((End::Mu(1), End::Mu(1)), q));
            }
        }
        for (ends, q) in options {
            // The connector behind this string carries the remaining flow.
            if !rest.is_empty() && q.flow() == 0 {
                continue;
            }
            acc.push(ends);
            rec(rest, q, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&slots, pool, &mut Vec::new(), &mut out);
    out
}

/// Tails left for the first string after the strings used up their ends.
fn first_string_tails(g: u32, p: &Parts, h: &Head) -> Result<Vec<Tail>> {
    let mut l_oo = p.dl.oo.parts().to_vec();
    let mut m_oo = p.dm.oo.parts().to_vec();
    match h.case.condition {
        Condition::Gt => drop_ones(&mut m_oo, (h.half_gap - 1) as usize)?,
        Condition::Lt => drop_ones(&mut l_oo, (-h.half_gap) as usize)?,
        Condition::Eq => {}
    }
    let mut tails = Vec::new();
    let mut side = |lambda_side: bool, d: &TailDecomposition, oo: &[u32]| {
        for &e in d.two_o.parts().iter().chain(d.two_e.parts()) {
            tails.push(Tail { lambda_side, entry: e, fork: false, cycles: 0 });
        }
        for &o in oo {
            tails.push(Tail { lambda_side, entry: o, fork: true, cycles: 0 });
        }
    };
    side(true, &p.dl, &l_oo);
    side(false, &p.dm, &m_oo);
    if g > 0 {
        // Cycles go on a μ fork tail, else a λ fork tail, else any odd tail.
        let host = tails
            .iter()
            .position(|t| !t.lambda_side && t.fork)
            .or_else(|| tails.iter().position(|t| t.lambda_side && t.fork))
            .or_else(|| tails.iter().position(|t| t.entry % 2 == 1))
            .ok_or_else(|| HurwitzError::Construction("no tail can carry cycles".into()))?;
        tails[host].cycles = g;
    }
    Ok(tails)
}

fn drop_ones(oo: &mut Vec<u32>, n: usize) -> Result<()> {
    for _ in 0..n {
        let pos = oo
            .iter()
            .rposition(|&x| x == 1)
            .ok_or_else(|| HurwitzError::Construction("not enough pairs of ones".into()))?;
        oo.remove(pos);
    }
    Ok(())
}

/// Attempts one arrangement; `flips[i]` reverses the connector order on the
/// `i`-th middle string.
fn assemble(
    h: &Head,
    strings: &[(End, End)],
    tails: &[Tail],
    before: &[usize],
    flips: u64,
) -> Option<TropicalCover> {
    let mut all: Vec<(End, End)> = vec![(h.start, h.finish)];
    all.extend_from_slice(strings);
    let n = all.len();
    // flow[i] = net flow arriving at string i from strings i+1.., positive
    // when the connector enters string i.
    let flow: Vec<i64> = (0..n)
        .map(|i| all[i + 1..].iter().map(|(a, b)| a.flow() + b.flow()).sum())
        .collect();
    let mut g = Graph::default();

    // First string: chosen tails, connector, remaining tails.
    let after: Vec<usize> = (0..tails.len()).filter(|i| !before.contains(i)).collect();
    let tail_flow = |t: &Tail| if t.lambda_side { 2 * t.entry as i64 } else { -2 * t.entry as i64 };
    let mut flows: Vec<i64> = before.iter().map(|&i| tail_flow(&tails[i])).collect();
    flows.push(flow[0]);
    flows.extend(after.iter().map(|&i| tail_flow(&tails[i])));
    let vs = g.string(all[0].0, &flows, all[0].1)?;
    for (slot, &i) in before.iter().chain(after.iter()).enumerate() {
        let at = if slot < before.len() { vs[slot] } else { vs[slot + 1] };
        g.tail(tails[i], at);
    }
    let mut prev_vertex = vs[before.len()];
    g.marked.push(prev_vertex);

    for i in 1..n {
        // Connector from string i−1 to string i: flow[i−1] enters i−1.
        let w = flow[i - 1];
        let last = i == n - 1;
        let mut f = vec![-w];
        if !last {
            f.push(flow[i]);
            if flips >> (i - 1) & 1 == 1 {
                f.reverse();
            }
        }
        let vs = g.string(all[i].0, &f, all[i].1)?;
        let (entry, exit) = if last || flips >> (i - 1) & 1 == 0 {
            (vs[0], vs.get(1).copied())
        } else {
            (vs[1], Some(vs[0]))
        };
        let wt = w.unsigned_abs() as u32;
        if w > 0 {
            g.edges.push((Pt::V(entry), Pt::V(prev_vertex), wt));
        } else {
            g.edges.push((Pt::V(prev_vertex), Pt::V(entry), wt));
        }
        g.marked.push(entry);
        if let Some(x) = exit {
            g.marked.push(x);
            prev_vertex = x;
        }
    }
    g.finish()
}

fn head_for(g: u32, lambda: &Partition, mu: &Partition, case: ExistenceCase) -> Result<(Parts, Head)> {
    let p = Parts::new(lambda, mu);
    let h = condition_holds(g, mu, &p, case.condition).ok_or_else(|| {
        HurwitzError::Precondition(format!("condition {:?} fails for {lambda}, {mu}", case.condition))
    })?;
    if h.case != case {
        return Err(HurwitzError::Precondition(format!(
            "instance falls in case {:?}, not {case:?}",
            h.case
        )));
    }
    Ok((p, h))
}

/// An effective non-zigzag cover built from the string recipe of `case`.
pub fn construct_witness(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    case: ExistenceCase,
) -> Result<TropicalCover> {
    let (p, h) = head_for(g, lambda, mu, case)?;
    let tails = first_string_tails(g, &p, &h)?;
    let later = later_strings(&h);
    // Prefix subsets of tails by increasing size; λ tails come first in the
    // list so small prefixes favour them.
    let mut subsets: Vec<Vec<usize>> = (0u64..1 << tails.len())
        .map(|m| (0..tails.len()).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by_key(|s: &Vec<usize>| s.len());
    for strings in &later {
        let middles = strings.len().saturating_sub(1);
        for before in &subsets {
            for flips in 0u64..1 << middles {
                let Some(c) = assemble(&h, strings, &tails, before, flips) else {
                    continue;
                };
                if c.lambda() == *lambda
                    && c.mu() == *mu
                    && c.genus() == g
                    && classify_cover(&c).kind == CoverKind::EffectiveNonZigzag
                {
                    return Ok(c);
                }
            }
        }
    }
    Err(HurwitzError::Construction(format!(
        "no arrangement for g = {g}, {lambda}, {mu}"
    )))
}

/// Number of strings in a classified effective non-zigzag cover.
pub fn string_count(c: &TropicalCover) -> usize {
    match classify_cover(c).witness {
        Witness::Strings { strings, .. } => strings.len(),
        _ => 0,
    }
}

// ---------------------------------------------------------------------------
// Arrangement constants and the lower bound

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppendixConstants {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub m1: usize,
    pub m2: usize,
    /// Weight of the first connector, positive when it enters the first string.
    pub k: i64,
    /// Starting value of the sign-change sequence.
    pub b_start: i64,
    /// Inner vertices of the strings after the first.
    pub k_inner: usize,
    pub lambda_star: Partition,
    pub case: ExistenceCase,
}

fn top(v: &[u32], n: usize) -> Vec<u32> {
    let mut s = v.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s.truncate(n);
    s
}

fn sum2(v: &[u32]) -> i64 {
    v.iter().map(|&x| 2 * x as i64).sum()
}

fn min_count(avail: &[u32], base: i64, w: i64) -> Option<usize> {
    (0..=avail.len()).find(|&n| base + sum2(&top(avail, n)) > w)
}

pub fn appendix_constants(lambda: &Partition, mu: &Partition, case: ExistenceCase) -> Result<AppendixConstants> {
    let p = Parts::new(lambda, mu);
    let h = head(&p, case.condition)
        .filter(|h| h.case == case)
        .ok_or_else(|| HurwitzError::Precondition(format!("{lambda}, {mu} is not in case {case:?}")))?;
    let strings = match case.condition {
        Condition::Eq => p.l0.len(),
        Condition::Gt => p.l0.len() - 1,
        Condition::Lt => p.m0.len(),
    };
    let k_inner = 2 * strings - 3;
    let l = match h.start {
        End::Lambda(w) => w as i64,
        End::Mu(_) => unreachable!("first string starts at a part of lambda"),
    };
    let mut l_oo = p.dl.oo.parts().to_vec();
    if case.condition == Condition::Lt {
        drop_ones(&mut l_oo, (-h.half_gap) as usize)?;
    }
    let two_o = p.dl.two_o.parts().to_vec();
    let two_e = p.dl.two_e.parts().to_vec();
    let (n1, m1, m2, star) = if h.t > 0 {
        (0, 0, 0, Vec::new())
    } else {
        let w = -h.t;
        let n1 = min_count(&l_oo, l + sum2(&two_o) + sum2(&two_e), w).ok_or_else(|| {
            HurwitzError::Construction("tails of lambda cannot exceed the first connector".into())
        })?;
        let oo_star = top(&l_oo, n1);
        let m1 = min_count(&two_o, l + sum2(&two_e) + sum2(&oo_star), w).unwrap_or(two_o.len());
        let o_star = top(&two_o, m1);
        let m2 = min_count(&two_e, l + sum2(&o_star) + sum2(&oo_star), w).unwrap_or(two_e.len());
        let e_star = top(&two_e, m2);
        let star: Vec<u32> = o_star.into_iter().chain(e_star).chain(oo_star).collect();
        (n1, m1, m2, star)
    };
    let (n2, n3) = if h.t > 0 {
        (1, 1 + k_inner)
    } else {
        let n2 = n1 + m1 + m2 + 1;
        (n2, n1 + n2 + k_inner)
    };
    let b_start = l + sum2(&star) + h.t;
    Ok(AppendixConstants {
        n1,
        n2,
        n3,
        m1,
        m2,
        k: h.t,
        b_start,
        k_inner,
        lambda_star: star.into_iter().collect(),
        case,
    })
}

/// `n₁! (a − n₁)! b! ⌊B/2⌋! ⌈B/2⌉!`.
pub fn factorial_bound(n1: usize, lambda_oo: usize, mu_oo: usize, b: u32) -> BigUint {
    let f = |n: usize| -> BigUint { (1..=n as u64).map(BigUint::from).product() };
    let b = b as usize;
    f(n1) * f(lambda_oo.saturating_sub(n1)) * f(mu_oo) * f(b / 2) * f(b.div_ceil(2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub case: ExistenceCase,
    pub constants: AppendixConstants,
    pub b: u32,
    #[serde(serialize_with = "as_string")]
    pub bound: BigUint,
}

fn as_string<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// The factorial lower bound on `Z′` for instances meeting an existence
/// condition.
pub fn lower_bound_estimate(g: u32, lambda: &Partition, mu: &Partition) -> Result<LowerBound> {
    let case = existence_case(g, lambda, mu).ok_or_else(|| {
        HurwitzError::HypothesisViolation(format!("no existence condition holds for g = {g}, {lambda}, {mu}"))
    })?;
    let p = Parts::new(lambda, mu);
    let consts = appendix_constants(lambda, mu, case)?;
    let mut l_tail = p.dl.tail();
    let mut m_tail = p.dm.tail();
    // Pairs of ones spent on the extra strings leave the tails.
    match case.condition {
        Condition::Gt => {
            let ones = Partition::ones(((p.l0.len() - p.m0.len()) / 2).saturating_sub(1));
            m_tail = m_tail.difference(&ones).unwrap_or(m_tail);
        }
        Condition::Lt => {
            let ones = Partition::ones((p.m0.len() - p.l0.len()) / 2);
            l_tail = l_tail.difference(&ones).unwrap_or(l_tail);
        }
        Condition::Eq => {}
    }
    l_tail = l_tail.difference(&consts.lambda_star).ok_or_else(|| {
        HurwitzError::Construction("chosen tails are not part of the lambda tails".into())
    })?;
    let steps_l: Partition = l_tail.iter().map(|x| 2 * x).collect();
    let steps_m: Partition = m_tail.iter().map(|x| 2 * x).collect();
    let b = sign_change_bound(consts.b_start, &steps_l, &steps_m);
    let bound = factorial_bound(consts.n1, p.dl.oo.len(), p.dm.oo.len(), b);
    Ok(LowerBound {
        case,
        constants: consts,
        b,
        bound,
    })
}

// ---------------------------------------------------------------------------
// Sweep

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: usize,
    /// `None` when the row ran out of budget.
    pub values: Option<SweepValues>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepValues {
    pub z: u64,
    pub zprime: u64,
    pub e: u64,
    pub h_complex: HurwitzValue,
    pub h_real: Vec<HurwitzValue>,
    pub log_ratio_e: Option<f64>,
    pub log_ratio_hc: Option<f64>,
    /// `None` when the instance is outside the range of the bound chain.
    pub chain_ok: Option<bool>,
}

/// `log(x) / (2 m log m)`, for `m ≥ 2` and `x > 0`.
pub fn log_ratio(x: f64, m: usize) -> Option<f64> {
    if m < 2 || x <= 0.0 || !x.is_finite() {
        return None;
    }
    let m = m as f64;
    Some(x.ln() / (2.0 * m * m.ln()))
}

/// One sweep row for `((λ, 1^m), (μ, 1^m))`.
pub fn sweep_row(g: u32, lambda: &Partition, mu: &Partition, m: usize, budget: &Budget) -> Result<SweepValues> {
    let l = extend_with_ones(lambda, m);
    let u = extend_with_ones(mu, m);
    let r = branch_count(g, &l, &u)?;
    if r <= 0 {
        return Err(HurwitzError::NoBranchPoints);
    }
    let r = r as usize;
    let covers = enumerate_covers_with(g, &l, &u, SweepOrder::Forward, budget)?;
    let (z, zprime) = zigzag_counts(&covers);
    let e = z + zprime;
    let h_complex = HurwitzValue(covers.iter().map(|c| c.mult_complex()).sum::<BigRational>());
    let prof = real_profile_from_covers(r, &covers)?;
    let h_real = (0..=r)
        .map(|s| Ok(prof.value(&Splitting::first(r, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let chain_ok = (!in_excluded_family(&l, &u)).then(|| {
        let ev = HurwitzValue::from_integer(e);
        z <= e && h_real.iter().all(|v| ev <= *v && *v <= h_complex)
    });
    Ok(SweepValues {
        z,
        zprime,
        e,
        log_ratio_e: log_ratio(e as f64, m),
        log_ratio_hc: log_ratio(h_complex.to_f64(), m),
        h_complex,
        h_real,
        chain_ok,
    })
}

/// Rows `m = 0..=m_max`; a row that exhausts its budget is kept with no values.
pub fn sweep(g: u32, lambda: &Partition, mu: &Partition, m_max: usize, budget_per_row: u64) -> Result<Vec<SweepRow>> {
    branch_count(g, lambda, mu)?;
    (0..=m_max)
        .into_par_iter()
        .map(|m| match sweep_row(g, lambda, mu, m, &Budget::new(budget_per_row)) {
            Ok(v) => Ok(SweepRow { m, values: Some(v) }),
            Err(HurwitzError::BudgetExceeded(_)) => Ok(SweepRow { m, values: None }),
            Err(e) => Err(e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn ones(n: usize) -> Partition {
        Partition::ones(n)
    }

    #[test]
    fn sign_change_examples() {
        assert_eq!(sign_change_bound(1, &Partition::empty(), &Partition::empty()), 0);
        assert_eq!(sign_change_bound(-1, &p(&[2]), &p(&[2])), 2);
        assert_eq!(sign_change_bound(1, &p(&[2, 2]), &p(&[2, 2])), 4);
        // Zeros never count as a change.
        assert_eq!(sign_change_bound(2, &Partition::empty(), &p(&[2, 2])), 0);
    }

    #[test]
    fn sign_change_routes_agree() {
        let cases = [
            (3, p(&[4, 2, 2]), p(&[6, 2, 2, 2])),
            (-5, p(&[2, 2, 6]), p(&[4, 4])),
            (1, p(&[2, 2, 2, 2, 2]), p(&[2, 2, 2, 2, 2])),
            (7, p(&[10]), p(&[2, 2, 2, 2])),
        ];
        for (k, l, m) in cases {
            assert_eq!(sign_change_bound_exhaustive(k, &l, &m), sign_change_bound_dp(k, &l, &m));
        }
    }

    #[test]
    fn existence_examples() {
        assert_eq!(existence_case(3, &p(&[2, 2]), &p(&[4])), None);
        // λ = (3, 1^9), μ = (5, 1^7).
        let l = p(&[3]).union(&ones(9));
        let m = p(&[5]).union(&ones(7));
        assert_eq!(
            existence_case(0, &l, &m),
            Some(ExistenceCase { condition: Condition::Eq, variant: Variant::Direct })
        );
        let c = existence_case(1, &p(&[5, 3, 1]), &ones(9)).unwrap();
        assert_eq!(c.condition, Condition::Gt);
        // Both ends single odd parts: the only flow is zero.
        assert_eq!(existence_case(5, &p(&[3, 1, 1]), &p(&[3, 1, 1])), None);
    }

    #[test]
    fn witnesses_for_each_condition() {
        // Two strings with equal ends.
        let l = p(&[3]).union(&ones(9));
        let m = p(&[5]).union(&ones(7));
        let c = existence_case(0, &l, &m).unwrap();
        let w = construct_witness(0, &l, &m, c).unwrap();
        assert_eq!(classify_cover(&w).kind, CoverKind::EffectiveNonZigzag);
        assert_eq!(string_count(&w), 2);

        // l(λ₀) − l(μ₀) = 2.
        let (l, m) = (p(&[5, 3, 1]), ones(9));
        let c = existence_case(1, &l, &m).unwrap();
        let w = construct_witness(1, &l, &m, c).unwrap();
        assert_eq!(string_count(&w), 2);
        assert_eq!(w.genus(), 1);

        // l(μ₀) − l(λ₀) = 2.
        let (l, m) = (ones(6), p(&[3, 1, 1, 1]));
        let c = existence_case(3, &l, &m).unwrap();
        assert_eq!(c.condition, Condition::Lt);
        let w = construct_witness(3, &l, &m, c).unwrap();
        assert_eq!(string_count(&w), 2);
    }

    #[test]
    fn three_strings() {
        // l(λ₀) = l(μ₀) = 3.
        let l = p(&[7, 3, 1, 1, 1]);
        let m = p(&[5, 3, 1, 1, 1, 1, 1]);
        for g in 0..4 {
            if let Some(c) = existence_case(g, &l, &m) {
                let w = construct_witness(g, &l, &m, c).unwrap();
                assert_eq!(string_count(&w), 3);
                return;
            }
        }
        panic!("no case found");
    }

    #[test]
    fn constants_incoming() {
        let l = p(&[3]).union(&ones(9));
        let m = p(&[5]).union(&ones(7));
        let c = existence_case(0, &l, &m).unwrap();
        let k = appendix_constants(&l, &m, c).unwrap();
        assert!(k.k > 0);
        assert_eq!((k.n1, k.n2), (0, 1));
        assert_eq!(k.n3, 1 + k.k_inner);
    }

    #[test]
    fn constants_outgoing() {
        // λ₀ = (1, 3), μ₀ = (5, 7): every flow is negative.
        let l = p(&[3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2]);
        let m = p(&[7, 5, 1, 1, 1]);
        let pp = Parts::new(&l, &m);
        let h = head(&pp, Condition::Eq).unwrap();
        assert_eq!(h.case.variant, Variant::MaxNegative);
        let k = appendix_constants(&l, &m, h.case).unwrap();
        assert!(k.k < 0);
        assert_eq!(k.n2, k.n1 + k.m1 + k.m2 + 1);
        assert_eq!(k.n3, k.n1 + k.n2 + k.k_inner);
        // l + 2Σλ* clears the connector weight, and no smaller choice does.
        let l_start = 3i64;
        assert!(l_start + sum2(k.lambda_star.parts()) > -k.k);
        assert!(k.n1 <= 1 || l_start + 2 * (2 + 2) > -k.k);
    }

    #[test]
    fn constants_without_tails_needed() {
        // Start weight 7 already exceeds the connector weight 1.
        let l = p(&[7, 1]).union(&ones(2));
        let m = p(&[5, 3]).union(&ones(2));
        let pp = Parts::new(&l, &m);
        let h = head(&pp, Condition::Eq).unwrap();
        if h.case.variant == Variant::MaxNegative {
            let k = appendix_constants(&l, &m, h.case).unwrap();
            assert_eq!((k.n1, k.m1, k.m2), (0, 0, 0));
        } else {
            assert!(h.t > 0);
        }
    }

    #[test]
    fn factorial_bound_formula() {
        assert_eq!(factorial_bound(0, 0, 0, 5), BigUint::from(2u32 * 6));
        assert_eq!(factorial_bound(1, 3, 2, 0), BigUint::from(2u32 * 2));
    }

    #[test]
    fn log_ratio_domain() {
        assert_eq!(log_ratio(10.0, 1), None);
        assert_eq!(log_ratio(0.0, 3), None);
        assert!(log_ratio(2.0, 2).unwrap() > 0.0);
    }

    #[test]
    fn sweep_rows() {
        let rows = sweep(0, &p(&[2, 1]), &p(&[1, 1, 1]), 1, 1_000_000).unwrap();
        assert_eq!(rows.len(), 2);
        let v0 = rows[0].values.as_ref().unwrap();
        assert_eq!(v0.h_complex.to_string(), "4");
        assert_eq!(v0.chain_ok, Some(true));
        let tiny = sweep(0, &p(&[2, 1]), &p(&[1, 1, 1]), 1, 3).unwrap();
        assert!(tiny.iter().all(|r| r.values.is_none()));
    }
}
