//! Counting (real) transitive factorizations in the symmetric group.
//!
//! A factorization of type `(g, λ, μ)` is a tuple `(σ₁, τ₁, …, τ_r, σ₂)` with
//! `σ₂ τ_r ⋯ τ₁ σ₁ = id`, `σ₁` of type λ, `σ₂` of type μ, every `τ_i` a
//! transposition, and the generated group transitive. Products compose right
//! to left, so `τ_i` is applied after `τ_{i-1}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{HurwitzError, Result};
use crate::partitions::{branch_count, z_lambda, Partition};
use crate::value::HurwitzValue;

pub const MAX_DEGREE: u32 = 12;
const MAXD: usize = MAX_DEGREE as usize;

/// Default cap on search node expansions.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// A permutation of `{0, …, d−1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    len: u8,
    img: [u8; MAXD],
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        assert!(d <= MAXD, "degree {d} too large");
        let mut img = [0u8; MAXD];
        for (i, x) in img.iter_mut().enumerate() {
            *x = i as u8;
        }
        Permutation { len: d as u8, img }
    }

    /// Builds from zero-based images. Returns `None` unless a bijection.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let d = images.len();
        if d > MAXD {
            return None;
        }
        let mut seen = [false; MAXD];
        let mut p = Permutation::identity(d);
        for (i, &x) in images.iter().enumerate() {
            if x >= d || seen[x] {
                return None;
            }
            seen[x] = true;
            p.img[i] = x as u8;
        }
        Some(p)
    }

    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(d);
        p.img.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img[..self.degree()].iter().map(|&x| x as usize).collect()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.img[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[i] = self.img[other.img[i] as usize];
        }
        out
    }

    /// Left multiplication by the transposition `(a b)`.
    #[inline]
    fn swap_values(&self, a: usize, b: usize) -> Permutation {
        let mut out = *self;
        for x in out.img[..self.degree()].iter_mut() {
            if *x as usize == a {
                *x = b as u8;
            } else if *x as usize == b {
                *x = a as u8;
            }
        }
        out
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = *self;
        for i in 0..self.degree() {
            out.img[self.img[i] as usize] = i as u8;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.img[i] as usize == i)
    }

    pub fn is_involution(&self) -> bool {
        (0..self.degree()).all(|i| self.img[self.img[i] as usize] as usize == i)
    }

    pub fn cycle_lengths(&self) -> Vec<u32> {
        let d = self.degree();
        let mut seen = [false; MAXD];
        let mut out = Vec::new();
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut n = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.img[x] as usize;
                n += 1;
            }
            out.push(n);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_lengths().len()
    }

    pub fn cycle_type(&self) -> Partition {
        self.cycle_lengths().into_iter().collect()
    }

    /// `γ p γ = p⁻¹` for an involution `γ`.
    fn reversed_by(&self, gamma: &Permutation) -> bool {
        // γ p γ (i) = p⁻¹(i)  ⇔  p(γ(p(γ i))) = i
        (0..self.degree()).all(|i| {
            let a = self.img[gamma.img[i] as usize];
            let b = self.img[gamma.img[a as usize] as usize];
            b as usize == i
        })
    }

    /// Every permutation of `{0..d−1}` in lexicographic order.
    pub fn all(d: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..d).collect();
        loop {
            out.push(Permutation::from_images(&cur).unwrap());
            // next lexicographic permutation
            let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// All permutations with the given cycle type.
    pub fn of_type(lambda: &Partition) -> Vec<Permutation> {
        Permutation::all(lambda.size() as usize)
            .into_iter()
            .filter(|p| &p.cycle_type() == lambda)
            .collect()
    }

    /// The permutation with consecutive cycles `(0 … λ₁−1)(λ₁ …)…`.
    pub fn representative(lambda: &Partition) -> Permutation {
        let mut p = Permutation::identity(lambda.size() as usize);
        let mut start = 0usize;
        for part in lambda.iter() {
            let part = part as usize;
            for i in 0..part {
                p.img[start + i] = (start + (i + 1) % part) as u8;
            }
            start += part;
        }
        p
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

/// Orbit partition of `{0..d−1}`, each point labelled by the least element of
/// its block.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Blocks {
    label: [u8; MAXD],
}

impl Blocks {
    fn of(p: &Permutation) -> Self {
        let mut b = Blocks { label: [0; MAXD] };
        for i in 0..p.degree() {
            b.label[i] = i as u8;
        }
        for i in 0..p.degree() {
            b = b.merge(p.degree(), i, p.apply(i));
        }
        b
    }

    fn merge(&self, d: usize, a: usize, c: usize) -> Self {
        let (la, lc) = (self.label[a], self.label[c]);
        if la == lc {
            return *self;
        }
        let (keep, drop) = if la < lc { (la, lc) } else { (lc, la) };
        let mut out = *self;
        for x in out.label[..d].iter_mut() {
            if *x == drop {
                *x = keep;
            }
        }
        out
    }

    fn count(&self, d: usize) -> usize {
        (0..d).filter(|&i| self.label[i] as usize == i).count()
    }
}

/// Shared node-expansion counter.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    /// Records `n` expansions; fails once the limit is passed.
    pub fn spend_nodes(&self, n: u64) -> Result<()> {
        self.spend(n)
    }

    fn spend(&self, n: u64) -> Result<()> {
        let before = self.used.fetch_add(n, Ordering::Relaxed);
        if before + n > self.limit {
            Err(HurwitzError::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// How transposition sequences are searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Dynamic programming over (partial product, orbit partition).
    Memoized,
    /// Depth-first backtracking, trying transpositions in the given order.
    Backtrack(TranspositionOrder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranspositionOrder {
    Ascending,
    Descending,
}

fn transpositions(d: usize, order: TranspositionOrder) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..d)
        .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
        .collect();
    if order == TranspositionOrder::Descending {
        v.reverse();
    }
    v
}

struct Instance {
    d: usize,
    r: usize,
    mu: Partition,
    mu_len: usize,
}

impl Instance {
    fn new(g: u32, lambda: &Partition, mu: &Partition) -> Result<Self> {
        let r = branch_count(g, lambda, mu)?;
        let d = lambda.size();
        if d == 0 {
            return Err(HurwitzError::EmptyDegree);
        }
        if d > MAX_DEGREE {
            return Err(HurwitzError::DegreeTooLarge(d));
        }
        if r < 0 {
            return Err(HurwitzError::NegativeBranchCount(r));
        }
        Ok(Instance {
            d: d as usize,
            r: r as usize,
            mu: mu.clone(),
            mu_len: mu.len(),
        })
    }

    /// Whether a product with `cycles` cycles and `blocks` orbits can still
    /// reach type μ and transitivity in `left` transpositions.
    #[inline]
    fn reachable(&self, cycles: usize, blocks: usize, left: usize) -> bool {
        let gap = cycles.abs_diff(self.mu_len);
        gap <= left && (left - gap).is_multiple_of(2) && blocks <= left + 1
    }

    fn accepts(&self, p: &Permutation, b: &Blocks) -> bool {
        b.count(self.d) == 1 && p.cycle_type() == self.mu
    }
}

fn add(a: u128, b: u128, budget: &Budget) -> Result<u128> {
    a.checked_add(b)
        .ok_or(HurwitzError::BudgetExceeded(budget.limit))
}

/// Number of transposition sequences completing the fixed `σ₁`.
fn complex_from(
    inst: &Instance,
    sigma1: Permutation,
    strategy: Strategy,
    budget: &Budget,
) -> Result<u128> {
    let start = Blocks::of(&sigma1);
    if !inst.reachable(sigma1.cycle_count(), start.count(inst.d), inst.r) {
        return Ok(0);
    }
    match strategy {
        Strategy::Memoized => {
            let ts = transpositions(inst.d, TranspositionOrder::Ascending);
            let mut layer: HashMap<(Permutation, Blocks), u128> = HashMap::new();
            layer.insert((sigma1, start), 1);
            for step in 0..inst.r {
                let left = inst.r - step - 1;
                let mut next: HashMap<(Permutation, Blocks), u128> = HashMap::new();
                budget.spend((layer.len() * ts.len()) as u64)?;
                for ((p, b), n) in layer {
                    for &(a, c) in &ts {
                        let q = p.swap_values(a, c);
                        let bq = b.merge(inst.d, a, c);
                        if !inst.reachable(q.cycle_count(), bq.count(inst.d), left) {
                            continue;
                        }
                        let e = next.entry((q, bq)).or_insert(0);
                        *e = add(*e, n, budget)?;
                    }
                }
                layer = next;
            }
            let mut total = 0u128;
            for ((p, b), n) in layer {
                if inst.accepts(&p, &b) {
                    total = add(total, n, budget)?;
                }
            }
            Ok(total)
        }
        Strategy::Backtrack(order) => {
            let ts = transpositions(inst.d, order);
            fn dfs(
                inst: &Instance,
                ts: &[(usize, usize)],
                p: Permutation,
                b: Blocks,
                left: usize,
                budget: &Budget,
            ) -> Result<u128> {
                budget.spend(1)?;
                if left == 0 {
                    return Ok(inst.accepts(&p, &b) as u128);
                }
                let mut total = 0u128;
                for &(a, c) in ts {
                    let q = p.swap_values(a, c);
                    let bq = b.merge(inst.d, a, c);
                    if inst.reachable(q.cycle_count(), bq.count(inst.d), left - 1) {
                        total = add(total, dfs(inst, ts, q, bq, left - 1, budget)?, budget)?;
                    }
                }
                Ok(total)
            }
            dfs(inst, &ts, sigma1, start, inst.r, budget)
        }
    }
}

/// `|F(g, λ, μ)|` with an explicit strategy and budget.
pub fn count_factorizations_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    strategy: Strategy,
    budget: &Budget,
) -> Result<BigUint> {
    let inst = Instance::new(g, lambda, mu)?;
    // The remaining conditions are invariant under simultaneous conjugation,
    // so one representative per class suffices.
    let rep = Permutation::representative(lambda);
    let per_rep = complex_from(&inst, rep, strategy, budget)?;
    let fact: BigUint = (1..=inst.d as u32).map(BigUint::from).product();
    let class_size = fact / BigUint::from(z_lambda(lambda));
    Ok(class_size * BigUint::from(per_rep))
}

pub fn count_factorizations(g: u32, lambda: &Partition, mu: &Partition) -> Result<BigUint> {
    count_factorizations_with(g, lambda, mu, Strategy::Memoized, &Budget::default())
}

pub fn complex_hurwitz(g: u32, lambda: &Partition, mu: &Partition) -> Result<HurwitzValue> {
    let n = count_factorizations(g, lambda, mu)?;
    Ok(HurwitzValue::from_count(&n, lambda.size()))
}

pub fn complex_hurwitz_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    strategy: Strategy,
    budget: &Budget,
) -> Result<HurwitzValue> {
    let n = count_factorizations_with(g, lambda, mu, strategy, budget)?;
    Ok(HurwitzValue::from_count(&n, lambda.size()))
}

/// Real factorization count for fixed `σ₁` and `γ`.
fn real_from(
    inst: &Instance,
    s: usize,
    sigma1: Permutation,
    gamma: Permutation,
    strategy: Strategy,
    budget: &Budget,
) -> Result<u128> {
    let start = Blocks::of(&sigma1);
    if !inst.reachable(sigma1.cycle_count(), start.count(inst.d), inst.r) {
        return Ok(0);
    }
    let id = Permutation::identity(inst.d);
    match strategy {
        Strategy::Memoized => {
            let ts = transpositions(inst.d, TranspositionOrder::Ascending);
            // Phase 1 tracks π_i = τ_i⋯τ₁σ₁.
            let mut layer1: HashMap<(Permutation, Blocks), u128> = HashMap::new();
            layer1.insert((sigma1, start), 1);
            for step in 0..s {
                let left = inst.r - step - 1;
                budget.spend((layer1.len() * ts.len()) as u64)?;
                let mut next = HashMap::new();
                for ((p, b), n) in layer1 {
                    for &(a, c) in &ts {
                        let q = p.swap_values(a, c);
                        if !q.reversed_by(&gamma) {
                            continue;
                        }
                        let bq = b.merge(inst.d, a, c);
                        if !inst.reachable(q.cycle_count(), bq.count(inst.d), left) {
                            continue;
                        }
                        let e = next.entry((q, bq)).or_insert(0u128);
                        *e = add(*e, n, budget)?;
                    }
                }
                layer1 = next;
            }
            // Phase 2 tracks the full product and ρ_j = τ_j⋯τ_{s+1}.
            let mut layer2: HashMap<(Permutation, Permutation, Blocks), u128> = layer1
                .into_iter()
                .map(|((p, b), n)| ((p, id, b), n))
                .collect();
            for step in s..inst.r {
                let left = inst.r - step - 1;
                budget.spend((layer2.len() * ts.len()) as u64)?;
                let mut next = HashMap::new();
                for ((p, rho, b), n) in layer2 {
                    for &(a, c) in &ts {
                        let rq = rho.swap_values(a, c);
                        if !rq.reversed_by(&gamma) {
                            continue;
                        }
                        let q = p.swap_values(a, c);
                        let bq = b.merge(inst.d, a, c);
                        if !inst.reachable(q.cycle_count(), bq.count(inst.d), left) {
                            continue;
                        }
                        let e = next.entry((q, rq, bq)).or_insert(0u128);
                        *e = add(*e, n, budget)?;
                    }
                }
                layer2 = next;
            }
            let mut total = 0u128;
            for ((p, _, b), n) in layer2 {
                if inst.accepts(&p, &b) {
                    total = add(total, n, budget)?;
                }
            }
            Ok(total)
        }
        Strategy::Backtrack(order) => {
            let ts = transpositions(inst.d, order);
            struct Ctx<'a> {
                inst: &'a Instance,
                ts: Vec<(usize, usize)>,
                gamma: Permutation,
                s: usize,
                budget: &'a Budget,
            }
            fn dfs(
                cx: &Ctx,
                step: usize,
                p: Permutation,
                rho: Permutation,
                b: Blocks,
            ) -> Result<u128> {
                cx.budget.spend(1)?;
                if step == cx.inst.r {
                    return Ok(cx.inst.accepts(&p, &b) as u128);
                }
                let left = cx.inst.r - step - 1;
                let mut total = 0u128;
                for &(a, c) in &cx.ts {
                    let q = p.swap_values(a, c);
                    let rq = if step < cx.s {
                        if !q.reversed_by(&cx.gamma) {
                            continue;
                        }
                        rho
                    } else {
                        let rq = rho.swap_values(a, c);
                        if !rq.reversed_by(&cx.gamma) {
                            continue;
                        }
                        rq
                    };
                    let bq = b.merge(cx.inst.d, a, c);
                    if cx.inst.reachable(q.cycle_count(), bq.count(cx.inst.d), left) {
                        total = add(total, dfs(cx, step + 1, q, rq, bq)?, cx.budget)?;
                    }
                }
                Ok(total)
            }
            let cx = Ctx {
                inst,
                ts,
                gamma,
                s,
                budget,
            };
            dfs(&cx, 0, sigma1, id, start)
        }
    }
}

/// `|F^ℝ(g, λ, μ; s)|` with an explicit strategy and budget.
pub fn count_real_factorizations_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    s: i64,
    strategy: Strategy,
    budget: &Budget,
) -> Result<BigUint> {
    let inst = Instance::new(g, lambda, mu)?;
    if s < 0 || s as usize > inst.r {
        return Err(HurwitzError::SplitOutOfRange { s, r: inst.r });
    }
    let s = s as usize;
    let involutions: Vec<Permutation> = Permutation::all(inst.d)
        .into_iter()
        .filter(|p| p.is_involution())
        .collect();
    let pairs: Vec<(Permutation, Permutation)> = Permutation::of_type(lambda)
        .into_iter()
        .flat_map(|s1| {
            involutions
                .iter()
                .filter(move |gm| s1.reversed_by(gm))
                .map(move |gm| (s1, *gm))
        })
        .collect();
    let parts: Vec<u128> = pairs
        .par_iter()
        .map(|&(s1, gm)| real_from(&inst, s, s1, gm, strategy, budget))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().map(BigUint::from).sum())
}

pub fn count_real_factorizations(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    s: i64,
) -> Result<BigUint> {
    count_real_factorizations_with(g, lambda, mu, s, Strategy::Memoized, &Budget::default())
}

pub fn real_hurwitz(g: u32, lambda: &Partition, mu: &Partition, s: i64) -> Result<HurwitzValue> {
    let n = count_real_factorizations(g, lambda, mu, s)?;
    Ok(HurwitzValue::from_count(&n, lambda.size()))
}

pub fn real_hurwitz_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    s: i64,
    strategy: Strategy,
    budget: &Budget,
) -> Result<HurwitzValue> {
    let n = count_real_factorizations_with(g, lambda, mu, s, strategy, budget)?;
    Ok(HurwitzValue::from_count(&n, lambda.size()))
}
