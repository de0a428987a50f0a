//! Zigzag and effective non-zigzag covers, and the bound chain they give.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HurwitzError, Result};
use crate::partitions::{branch_count, Partition};
use crate::realtrop::{enumerate_colourings, induced_splitting, real_profile_from_covers, Colouring, Splitting};
use crate::symgroup::{self, Budget};
use crate::tropical::{enumerate_covers_with, SweepOrder, TropicalCover};
use crate::value::HurwitzValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoverKind {
    Zigzag,
    EffectiveNonZigzag,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    None,
    /// A single inner vertex whose complement is made of tails.
    Vertex(usize),
    /// Edge indices of an odd string whose complement is made of tails.
    String(Vec<usize>),
    /// Strings in path order and the connectors between consecutive ones.
    Strings {
        strings: Vec<Vec<usize>>,
        connectors: Vec<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverClass {
    pub kind: CoverKind,
    pub witness: Witness,
}

/// Connected pieces of `C` after removing `cut_edges` and `cut_vertices`,
/// each with the cut vertices it touches and the edge it touches them by.
struct Piece {
    edges: BTreeSet<usize>,
    attachments: Vec<(usize, usize)>,
}

fn pieces(c: &TropicalCover, cut_edges: &BTreeSet<usize>, cut_vertices: &BTreeSet<usize>) -> Vec<Piece> {
    let n = c.edges().len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || cut_edges.contains(&start) {
            continue;
        }
        let mut piece = Piece {
            edges: BTreeSet::new(),
            attachments: Vec::new(),
        };
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(e) = stack.pop() {
            piece.edges.insert(e);
            let edge = c.edge(e);
            for v in [edge.from, edge.to] {
                if v == 0 || v > c.r() {
                    continue;
                }
                if cut_vertices.contains(&v) {
                    piece.attachments.push((v, e));
                    continue;
                }
                for f in c.edges_at(v) {
                    if !seen[f] && !cut_edges.contains(&f) {
                        seen[f] = true;
                        stack.push(f);
                    }
                }
            }
        }
        piece.attachments.sort_unstable();
        out.push(piece);
    }
    out
}

/// The two edges at `u` other than `e`, if both lie on the side opposite `e`.
fn continuation(c: &TropicalCover, u: usize, e: usize) -> Option<(usize, usize)> {
    let rest: Vec<usize> = c.edges_at(u).into_iter().filter(|&f| f != e).collect();
    if rest.len() != 2 {
        return None;
    }
    let e_left = c.edge(e).to == u;
    let opposite = |f: usize| (c.edge(f).from == u) == e_left;
    (opposite(rest[0]) && opposite(rest[1])).then_some((rest[0], rest[1]))
}

fn is_leaf(c: &TropicalCover, v: usize) -> bool {
    v == 0 || v == c.r() + 1
}

/// A tail: an even edge `2w`, then any number of symmetric cycles `(w, w)`
/// each followed by `2w`, ending in an end or a symmetric fork `(w, w)`.
/// Cycles and forks require `w` odd.
fn is_tail(c: &TropicalCover, piece: &Piece, root: usize, e0: usize) -> bool {
    let mut visited = BTreeSet::from([e0]);
    let (mut e, mut from) = (e0, root);
    loop {
        let w = c.edge(e).weight;
        if w % 2 == 1 {
            return false;
        }
        let u = c.edge(e).other(from);
        if is_leaf(c, u) {
            break;
        }
        let Some((p, q)) = continuation(c, u, e) else {
            return false;
        };
        let (ep, eq) = (c.edge(p), c.edge(q));
        if ep != eq || ep.weight * 2 != w || ep.weight % 2 == 0 {
            return false;
        }
        visited.insert(p);
        visited.insert(q);
        if c.is_end(p) {
            break;
        }
        let u2 = ep.other(u);
        let Some(next) = c.edges_at(u2).into_iter().find(|&f| f != p && f != q) else {
            return false;
        };
        visited.insert(next);
        e = next;
        from = u2;
    }
    visited == piece.edges
}

/// Connector shape between string vertices `a` and `b`: the number of even
/// symmetric cycles along it, or `None` if the piece is not a connector.
fn connector_cycles(c: &TropicalCover, piece: &Piece, a: usize, e0: usize, b: usize) -> Option<usize> {
    let mut visited = BTreeSet::from([e0]);
    let (mut e, mut from) = (e0, a);
    let mut cycles = 0;
    loop {
        let w = c.edge(e).weight;
        if w % 2 == 1 {
            return None;
        }
        let u = c.edge(e).other(from);
        if u == b {
            break;
        }
        if is_leaf(c, u) {
            return None;
        }
        let (p, q) = continuation(c, u, e)?;
        let ep = c.edge(p);
        if ep != c.edge(q) || c.is_end(p) || ep.weight * 2 != w || ep.weight % 2 == 1 {
            return None;
        }
        cycles += 1;
        visited.insert(p);
        visited.insert(q);
        let u2 = ep.other(u);
        let next = c.edges_at(u2).into_iter().find(|&f| f != p && f != q)?;
        visited.insert(next);
        e = next;
        from = u2;
    }
    (visited == piece.edges).then_some(cycles)
}

/// Inner vertices met by the edges of `edges`.
fn vertices_of(c: &TropicalCover, edges: &BTreeSet<usize>) -> BTreeSet<usize> {
    edges
        .iter()
        .flat_map(|&e| [c.edge(e).from, c.edge(e).to])
        .filter(|&v| !is_leaf(c, v))
        .collect()
}

/// Components of the odd-edge subgraph.
pub fn odd_components(c: &TropicalCover) -> Vec<BTreeSet<usize>> {
    let odd: BTreeSet<usize> = (0..c.edges().len()).filter(|&e| c.edge(e).is_odd()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in &odd {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![s];
        while let Some(e) = stack.pop() {
            comp.insert(e);
            for v in [c.edge(e).from, c.edge(e).to] {
                if is_leaf(c, v) {
                    continue;
                }
                for f in c.edges_at(v) {
                    if odd.contains(&f) && seen.insert(f) {
                        stack.push(f);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Odd components that are not a symmetric cycle or fork, i.e. the strings.
pub fn odd_strings(c: &TropicalCover) -> Vec<BTreeSet<usize>> {
    odd_components(c)
        .into_iter()
        .filter(|comp| {
            let v: Vec<usize> = comp.iter().copied().collect();
            !(v.len() == 2 && c.edge(v[0]) == c.edge(v[1]))
        })
        .collect()
}

/// An odd end whose twin sits at the same vertex: one half of a symmetric
/// fork hanging directly off a single-vertex `S`.
fn is_fork_half(c: &TropicalCover, piece: &Piece) -> bool {
    let Some(&e) = piece.edges.first() else {
        return false;
    };
    piece.edges.len() == 1
        && c.is_end(e)
        && c.edge(e).is_odd()
        && c.edges().iter().enumerate().any(|(f, x)| f != e && *x == c.edge(e))
}

fn all_tails(c: &TropicalCover, cut_edges: &BTreeSet<usize>, cut_vertices: &BTreeSet<usize>) -> bool {
    pieces(c, cut_edges, cut_vertices).iter().all(|p| {
        p.attachments.len() == 1
            && (is_tail(c, p, p.attachments[0].0, p.attachments[0].1) || is_fork_half(c, p))
    })
}

fn zigzag_witness(c: &TropicalCover, strings: &[BTreeSet<usize>]) -> Option<Witness> {
    match strings {
        [] => (1..=c.r())
            .find(|&v| all_tails(c, &BTreeSet::new(), &BTreeSet::from([v])))
            .map(Witness::Vertex),
        [s] => all_tails(c, s, &vertices_of(c, s))
            .then(|| Witness::String(s.iter().copied().collect())),
        _ => None,
    }
}

/// Whether the two string edges at `v` lie on the same side.
fn is_bent(c: &TropicalCover, string: &BTreeSet<usize>, v: usize) -> bool {
    let sides: Vec<bool> = c
        .edges_at(v)
        .into_iter()
        .filter(|e| string.contains(e))
        .map(|e| c.edge(e).to == v)
        .collect();
    sides.len() == 2 && sides[0] == sides[1]
}

fn effective_witness(c: &TropicalCover, strings: &[BTreeSet<usize>]) -> Option<Witness> {
    let n = strings.len();
    if n < 2 {
        return None;
    }
    let string_of: BTreeMap<usize, usize> = strings
        .iter()
        .enumerate()
        .flat_map(|(i, s)| vertices_of(c, s).into_iter().map(move |v| (v, i)))
        .collect();
    let cut_edges: BTreeSet<usize> = strings.iter().flatten().copied().collect();
    let cut_vertices: BTreeSet<usize> = string_of.keys().copied().collect();
    let half = c.r().div_ceil(2);
    let mut links: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for p in pieces(c, &cut_edges, &cut_vertices) {
        match p.attachments.as_slice() {
            [(a, e)] => {
                if !is_tail(c, &p, *a, *e) {
                    return None;
                }
            }
            [(a, e), (b, _)] => {
                let (sa, sb) = (string_of[a], string_of[b]);
                if sa == sb {
                    return None;
                }
                let cycles = connector_cycles(c, &p, *a, *e, *b)?;
                let (ba, bb) = (is_bent(c, &strings[sa], *a), is_bent(c, &strings[sb], *b));
                let shape_ok = match (ba, bb) {
                    (false, false) => true,
                    (true, true) => cycles == 0,
                    _ => false,
                };
                if !shape_ok || vertices_of(c, &p.edges).iter().any(|&v| v > half) {
                    return None;
                }
                links.push((sa.min(sb), sa.max(sb), p.edges.into_iter().collect()));
            }
            _ => return None,
        }
    }
    // The connectors must join the strings into a simple path.
    if links.len() != n - 1 {
        return None;
    }
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, (a, b, _)) in links.iter().enumerate() {
        deg[*a] += 1;
        deg[*b] += 1;
        adj[*a].push((*b, k));
        adj[*b].push((*a, k));
    }
    if deg.iter().any(|&d| d > 2) {
        return None;
    }
    let start = (0..n).find(|&i| deg[i] == 1)?;
    let mut order = vec![start];
    let mut conns = Vec::new();
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&(next, k)) = adj[cur].iter().find(|(x, _)| *x != prev) {
        order.push(next);
        conns.push(links[k].2.clone());
        prev = cur;
        cur = next;
        if order.len() > n {
            return None;
        }
    }
    if order.len() != n {
        return None;
    }
    Some(Witness::Strings {
        strings: order.iter().map(|&i| strings[i].iter().copied().collect()).collect(),
        connectors: conns,
    })
}

pub fn classify_cover(c: &TropicalCover) -> CoverClass {
    let strings = odd_strings(c);
    if let Some(w) = zigzag_witness(c, &strings) {
        return CoverClass {
            kind: CoverKind::Zigzag,
            witness: w,
        };
    }
    if let Some(w) = effective_witness(c, &strings) {
        return CoverClass {
            kind: CoverKind::EffectiveNonZigzag,
            witness: w,
        };
    }
    CoverClass {
        kind: CoverKind::Other,
        witness: Witness::None,
    }
}

fn covers(g: u32, lambda: &Partition, mu: &Partition, budget: &Budget) -> Result<Vec<TropicalCover>> {
    enumerate_covers_with(g, lambda, mu, SweepOrder::Forward, budget)
}

fn count_kind(cs: &[TropicalCover], kind: CoverKind) -> u64 {
    cs.par_iter().filter(|c| classify_cover(c).kind == kind).count() as u64
}

pub fn zigzag_number(g: u32, lambda: &Partition, mu: &Partition) -> Result<u64> {
    Ok(count_kind(&covers(g, lambda, mu, &Budget::default())?, CoverKind::Zigzag))
}

/// Twice the number of effective non-zigzag covers.
pub fn effective_nonzigzag_number(g: u32, lambda: &Partition, mu: &Partition) -> Result<u64> {
    Ok(2 * count_kind(&covers(g, lambda, mu, &Budget::default())?, CoverKind::EffectiveNonZigzag))
}

pub fn effective_number(g: u32, lambda: &Partition, mu: &Partition) -> Result<u64> {
    let cs = covers(g, lambda, mu, &Budget::default())?;
    Ok(count_kind(&cs, CoverKind::Zigzag) + 2 * count_kind(&cs, CoverKind::EffectiveNonZigzag))
}

/// `(Z, Z′)` from an already enumerated cover list.
pub fn zigzag_counts(cs: &[TropicalCover]) -> (u64, u64) {
    let kinds: Vec<CoverKind> = cs.par_iter().map(|c| classify_cover(c).kind).collect();
    let z = kinds.iter().filter(|&&k| k == CoverKind::Zigzag).count() as u64;
    let e = kinds.iter().filter(|&&k| k == CoverKind::EffectiveNonZigzag).count() as u64;
    (z, 2 * e)
}

/// The only colouring of an effective non-zigzag cover inducing `split`.
pub fn unique_matching_colouring(c: &TropicalCover, split: &Splitting) -> Result<Colouring> {
    if classify_cover(c).kind != CoverKind::EffectiveNonZigzag {
        return Err(HurwitzError::Precondition(
            "cover is not effective non-zigzag".into(),
        ));
    }
    let half = c.r().div_ceil(2);
    if split.r != c.r() || !(1..=half).all(|i| split.positive.contains(&i)) {
        return Err(HurwitzError::Precondition(format!(
            "splitting must contain 1..={half}"
        )));
    }
    let mut found = Vec::new();
    for rho in enumerate_colourings(c) {
        if &induced_splitting(c, &rho)? == split {
            found.push(rho);
        }
    }
    match found.len() {
        0 => Err(HurwitzError::ColouringNotFound),
        1 => Ok(found.pop().unwrap()),
        n => Err(HurwitzError::ColouringNotUnique(n)),
    }
}

/// Whether `{λ, μ} ⊆ {(2k), (k, k)}` for some `k`.
pub fn in_excluded_family(lambda: &Partition, mu: &Partition) -> bool {
    let special = |p: &Partition| match p.parts() {
        [a] => a % 2 == 0,
        [a, b] => a == b,
        _ => false,
    };
    lambda.size() == mu.size() && special(lambda) && special(mu)
}

/// Which oracle supplies the Hurwitz numbers in a bound report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Group,
    Tropical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub g: u32,
    pub lambda: Partition,
    pub mu: Partition,
    #[serde(rename = "Z")]
    pub z: u64,
    #[serde(rename = "Zprime")]
    pub zprime: u64,
    #[serde(rename = "E")]
    pub e: u64,
    #[serde(rename = "H_real")]
    pub h_real: BTreeMap<usize, HurwitzValue>,
    #[serde(rename = "H_complex")]
    pub h_complex: HurwitzValue,
    pub chain_ok: bool,
    pub parity_ok: bool,
    pub comparisons: Vec<Comparison>,
}

pub fn verify_bounds(g: u32, lambda: &Partition, mu: &Partition) -> Result<BoundReport> {
    verify_bounds_with(g, lambda, mu, Route::Tropical, &Budget::default())
}

pub fn verify_bounds_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    route: Route,
    budget: &Budget,
) -> Result<BoundReport> {
    if in_excluded_family(lambda, mu) {
        return Err(HurwitzError::HypothesisViolation(format!(
            "{lambda} and {mu} both lie in {{(2k), (k,k)}}"
        )));
    }
    let r = branch_count(g, lambda, mu)?;
    if r <= 0 {
        return Err(HurwitzError::HypothesisViolation(format!("r = {r} is not positive")));
    }
    let r = r as usize;
    let cs = covers(g, lambda, mu, budget)?;
    let (z, zprime) = zigzag_counts(&cs);
    let (h_complex, h_real) = match route {
        Route::Group => {
            let hc = symgroup::complex_hurwitz_with(g, lambda, mu, symgroup::Strategy::Memoized, budget)?;
            let hr = (0..=r)
                .map(|s| {
                    symgroup::real_hurwitz_with(g, lambda, mu, s as i64, symgroup::Strategy::Memoized, budget)
                        .map(|v| (s, v))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            (hc, hr)
        }
        Route::Tropical => {
            let hc = HurwitzValue(cs.iter().map(|c| c.mult_complex()).sum());
            let prof = real_profile_from_covers(r, &cs)?;
            let hr = (0..=r)
                .map(|s| Ok((s, prof.value(&Splitting::first(r, s)?))))
                .collect::<Result<BTreeMap<_, _>>>()?;
            (hc, hr)
        }
    };
    Ok(build_report(g, lambda, mu, z, zprime, h_real, h_complex))
}

fn build_report(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    z: u64,
    zprime: u64,
    h_real: BTreeMap<usize, HurwitzValue>,
    h_complex: HurwitzValue,
) -> BoundReport {
    let e = z + zprime;
    let int = |n: u64| HurwitzValue::from_integer(BigInt::from(n));
    let mut comparisons = vec![Comparison {
        relation: format!("Z = {z} <= E = {e}"),
        holds: z <= e,
    }];
    let mut chain_ok = z <= e;
    for (s, v) in &h_real {
        let lo = int(e) <= *v;
        let hi = *v <= h_complex;
        comparisons.push(Comparison {
            relation: format!("E = {e} <= H_real({s}) = {v}"),
            holds: lo,
        });
        comparisons.push(Comparison {
            relation: format!("H_real({s}) = {v} <= H_complex = {h_complex}"),
            holds: hi,
        });
        chain_ok &= lo && hi;
    }
    let zp = z % 2;
    let mut parity_ok = e % 2 == zp;
    comparisons.push(Comparison {
        relation: format!("E = {e} == Z = {z} (mod 2)"),
        holds: e % 2 == zp,
    });
    for (label, v) in h_real
        .iter()
        .map(|(s, v)| (format!("H_real({s})"), v))
        .chain(std::iter::once(("H_complex".to_string(), &h_complex)))
    {
        let holds = v.parity() == Some(zp as u8);
        comparisons.push(Comparison {
            relation: format!("{label} = {v} == Z = {z} (mod 2)"),
            holds,
        });
        parity_ok &= holds;
    }
    BoundReport {
        g,
        lambda: lambda.clone(),
        mu: mu.clone(),
        z,
        zprime,
        e,
        h_real,
        h_complex,
        chain_ok,
        parity_ok,
        comparisons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realtrop::mult_real_exact;
    use crate::tropical::{enumerate_covers, Edge};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_fork_cover_is_zigzag() {
        let cs = enumerate_covers(0, &p(&[2]), &p(&[1, 1])).unwrap();
        assert_eq!(classify_cover(&cs[0]).kind, CoverKind::Zigzag);
        assert_eq!(classify_cover(&cs[0]).witness, Witness::Vertex(1));
        assert_eq!(zigzag_number(0, &p(&[2]), &p(&[1, 1])).unwrap(), 1);
        assert_eq!(effective_nonzigzag_number(0, &p(&[2]), &p(&[1, 1])).unwrap(), 0);
        assert_eq!(effective_number(0, &p(&[2]), &p(&[1, 1])).unwrap(), 1);
    }

    #[test]
    fn vertex_with_fork_and_odd_cycle_tail() {
        // Vertex 1 splits 6 into 4 and 2; the 4 ends in a symmetric fork, the
        // 2 runs through a symmetric cycle of weight 1.
        let c = TropicalCover::new(
            4,
            vec![
                Edge::new(0, 1, 6),
                Edge::new(1, 2, 2),
                Edge::new(1, 3, 4),
                Edge::new(2, 4, 1),
                Edge::new(2, 4, 1),
                Edge::new(3, 5, 2),
                Edge::new(3, 5, 2),
                Edge::new(4, 5, 2),
            ],
        );
        // The weight-4 fork is even, so its branch is not a tail; build the
        // odd version instead.
        assert!(c.is_ok());
        let c = TropicalCover::new(
            4,
            vec![
                Edge::new(0, 1, 3),
                Edge::new(1, 2, 2),
                Edge::new(1, 5, 1),
                Edge::new(2, 3, 1),
                Edge::new(2, 3, 1),
                Edge::new(3, 4, 2),
                Edge::new(4, 5, 1),
                Edge::new(4, 5, 1),
            ],
        )
        .unwrap();
        let cls = classify_cover(&c);
        assert_eq!(cls.kind, CoverKind::Zigzag);
        assert!(matches!(cls.witness, Witness::String(_)));
    }

    #[test]
    fn excluded_family() {
        assert!(in_excluded_family(&p(&[2]), &p(&[1, 1])));
        assert!(in_excluded_family(&p(&[2, 2]), &p(&[4])));
        assert!(in_excluded_family(&p(&[1, 1]), &p(&[1, 1])));
        assert!(!in_excluded_family(&p(&[2, 1]), &p(&[1, 1, 1])));
        assert!(!in_excluded_family(&p(&[3]), &p(&[1, 1, 1])));
        assert!(matches!(
            verify_bounds(0, &p(&[2]), &p(&[1, 1])),
            Err(HurwitzError::HypothesisViolation(_))
        ));
    }

    #[test]
    fn chains_hold_on_small_instances() {
        for (g, l, m) in [(0, p(&[2, 1]), p(&[1, 1, 1])), (1, p(&[3]), p(&[1, 1, 1]))] {
            let rep = verify_bounds(g, &l, &m).unwrap();
            assert!(rep.chain_ok && rep.parity_ok, "{rep:?}");
            let grp = verify_bounds_with(g, &l, &m, Route::Group, &Budget::default()).unwrap();
            assert_eq!(rep, grp);
        }
        let z = zigzag_number(0, &p(&[2, 1]), &p(&[1, 1, 1])).unwrap();
        assert_eq!(z % 2, 0);
    }

    #[test]
    fn joined_odd_ends_give_a_connector() {
        // Even connectors can come from joining two odd ends, so an instance
        // with only odd parts may still have effective non-zigzag covers.
        let l = p(&[3, 1]);
        let m = p(&[1, 1, 1, 1]);
        assert_eq!(effective_nonzigzag_number(0, &l, &m).unwrap(), 4);
        let c = TropicalCover::new(
            4,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(0, 1, 3),
                Edge::new(1, 2, 4),
                Edge::new(2, 3, 3),
                Edge::new(2, 5, 1),
                Edge::new(3, 4, 2),
                Edge::new(3, 5, 1),
                Edge::new(4, 5, 1),
                Edge::new(4, 5, 1),
            ],
        )
        .unwrap();
        let cls = classify_cover(&c);
        assert_eq!(cls.kind, CoverKind::EffectiveNonZigzag);
        let Witness::Strings { strings, connectors } = cls.witness else {
            panic!("no witness");
        };
        assert_eq!(strings.len(), 2);
        assert_eq!(connectors, vec![vec![2]]);
        assert_eq!(effective_nonzigzag_number(1, &p(&[3]), &p(&[1, 1, 1])).unwrap(), 0);
    }

    #[test]
    fn zigzag_iff_odd_multiplicity() {
        for d in 1..=4u32 {
            for l in crate::partitions::partitions_of(d) {
                for m in crate::partitions::partitions_of(d) {
                    for g in 0..=1 {
                        let r = branch_count(g, &l, &m).unwrap();
                        if !(1..=5).contains(&r) || in_excluded_family(&l, &m) {
                            continue;
                        }
                        for c in enumerate_covers(g, &l, &m).unwrap() {
                            let kind = classify_cover(&c).kind;
                            for rho in enumerate_colourings(&c) {
                                let mr = mult_real_exact(&c, &rho);
                                assert!(mr.is_integer());
                                let odd = mr.to_integer() % 2 != BigInt::from(0);
                                assert_eq!(odd, kind == CoverKind::Zigzag, "{g} {l} {m} {:?}", c.edges());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn matching_colouring_rejects_zigzag() {
        let cs = enumerate_covers(0, &p(&[2]), &p(&[1, 1])).unwrap();
        let split = Splitting::new(1, [1]).unwrap();
        assert!(matches!(
            unique_matching_colouring(&cs[0], &split),
            Err(HurwitzError::Precondition(_))
        ));
    }
}
