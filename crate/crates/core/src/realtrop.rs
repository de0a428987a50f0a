//! Colourings of tropical covers, vertex signs and real multiplicities.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HurwitzError, Result};
use crate::partitions::Partition;
use crate::symgroup::Budget;
use crate::tropical::{enumerate_covers_with, SweepOrder, SymKind, SymPair, TropicalCover};
use crate::value::HurwitzValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Colour {
    Red,
    Blue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// Edges, `T` pairs and edge colours of a real cover.
pub type RealKey = (Vec<crate::tropical::Edge>, Vec<(usize, usize)>, Vec<Option<Colour>>);

/// A subset `T ⊆ Sym(φ)` together with a colour on every connected component
/// of the even edges of `C ∖ T°`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Colouring {
    /// The chosen symmetric pairs, sorted.
    pub t_rho: Vec<SymPair>,
    /// Component index of each edge, for even edges outside `T`.
    pub component_of: Vec<Option<usize>>,
    /// Colour of each component.
    pub colours: Vec<Colour>,
}

impl Colouring {
    pub fn edge_colour(&self, e: usize) -> Option<Colour> {
        self.component_of[e].map(|k| self.colours[k])
    }

    pub fn in_t(&self, e: usize) -> bool {
        self.t_rho.iter().any(|p| p.edges.0 == e || p.edges.1 == e)
    }

    /// Key identifying the real cover up to isomorphism.
    pub fn canonical_key(&self, c: &TropicalCover) -> RealKey {
        let colours = (0..c.edges().len()).map(|e| self.edge_colour(e)).collect();
        let t = self.t_rho.iter().map(|p| p.edges).collect();
        (c.edges().to_vec(), t, colours)
    }
}

/// Even-edge components of `C ∖ T°`, as `component_of` per edge.
fn even_components(c: &TropicalCover, in_t: &[bool]) -> (Vec<Option<usize>>, usize) {
    let n = c.edges().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let live = |e: usize| !c.edge(e).is_odd() && !in_t[e];
    for v in 1..=c.r() {
        let es: Vec<usize> = c.edges_at(v).into_iter().filter(|&e| live(e)).collect();
        for w in es.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut label = HashMap::new();
    let mut out = vec![None; n];
    for (e, slot) in out.iter_mut().enumerate() {
        if live(e) {
            let root = find(&mut parent, e);
            let next = label.len();
            *slot = Some(*label.entry(root).or_insert(next));
        }
    }
    (out, label.len())
}

pub fn enumerate_colourings(c: &TropicalCover) -> Vec<Colouring> {
    let sym = c.sym_registry().sym();
    let mut out = Vec::new();
    for mask in 0u32..(1 << sym.len()) {
        let t_rho: Vec<SymPair> = (0..sym.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sym[i])
            .collect();
        let mut in_t = vec![false; c.edges().len()];
        for p in &t_rho {
            in_t[p.edges.0] = true;
            in_t[p.edges.1] = true;
        }
        let (component_of, k) = even_components(c, &in_t);
        for cmask in 0u64..(1 << k) {
            let colours = (0..k)
                .map(|i| if cmask >> i & 1 == 1 { Colour::Blue } else { Colour::Red })
                .collect();
            out.push(Colouring {
                t_rho: t_rho.clone(),
                component_of: component_of.clone(),
                colours,
            });
        }
    }
    out
}

/// Local shape of an inner vertex, read from the side carrying one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalShape {
    /// Odd single edge; the opposite pair is one odd and one even edge.
    OddSingle,
    /// Even single edge opposite two even edges not forming a pair of `T`.
    AllEven,
    /// Even single edge opposite two odd edges not forming a pair of `T`.
    OddPair,
    /// Even single edge opposite a pair of `T`.
    DottedPair,
}

/// One row of the sign table: the shape, the colour of the deciding edge,
/// and the resulting sign. Mirror images share a row.
#[derive(Debug, Clone, Copy)]
pub struct SignRule {
    pub shape: LocalShape,
    pub colour: Colour,
    pub sign: Sign,
}

pub const SIGN_TABLE: [SignRule; 8] = [
    SignRule { shape: LocalShape::OddSingle, colour: Colour::Blue, sign: Sign::Positive },
    SignRule { shape: LocalShape::AllEven, colour: Colour::Blue, sign: Sign::Positive },
    SignRule { shape: LocalShape::OddPair, colour: Colour::Red, sign: Sign::Positive },
    SignRule { shape: LocalShape::DottedPair, colour: Colour::Blue, sign: Sign::Positive },
    SignRule { shape: LocalShape::OddSingle, colour: Colour::Red, sign: Sign::Negative },
    SignRule { shape: LocalShape::AllEven, colour: Colour::Red, sign: Sign::Negative },
    SignRule { shape: LocalShape::OddPair, colour: Colour::Blue, sign: Sign::Negative },
    SignRule { shape: LocalShape::DottedPair, colour: Colour::Red, sign: Sign::Negative },
];

/// Shape and deciding colour at `v`, or `None` if the local picture fits no row.
fn local_picture(c: &TropicalCover, rho: &Colouring, v: usize) -> Option<(LocalShape, Colour)> {
    let (left, right) = c.sides_at(v);
    let (single, pair) = match (left.len(), right.len()) {
        (1, 2) => (left[0], [right[0], right[1]]),
        (2, 1) => (right[0], [left[0], left[1]]),
        _ => return None,
    };
    let (a, b) = (c.edge(pair[0]), c.edge(pair[1]));
    if c.edge(single).is_odd() {
        let even = match (a.is_odd(), b.is_odd()) {
            (true, false) => pair[1],
            (false, true) => pair[0],
            _ => return None,
        };
        return Some((LocalShape::OddSingle, rho.edge_colour(even)?));
    }
    let s = rho.edge_colour(single)?;
    let dotted = rho
        .t_rho
        .iter()
        .any(|p| p.edges == (pair[0].min(pair[1]), pair[0].max(pair[1])));
    if dotted {
        return Some((LocalShape::DottedPair, s));
    }
    match (a.is_odd(), b.is_odd()) {
        (true, true) => Some((LocalShape::OddPair, s)),
        (false, false) => {
            let same = rho.edge_colour(pair[0])? == s && rho.edge_colour(pair[1])? == s;
            same.then_some((LocalShape::AllEven, s))
        }
        _ => None,
    }
}

pub fn vertex_sign(c: &TropicalCover, rho: &Colouring, v: usize) -> Result<Sign> {
    let (shape, colour) =
        local_picture(c, rho, v).ok_or(HurwitzError::UnclassifiableVertex(v))?;
    SIGN_TABLE
        .iter()
        .find(|row| row.shape == shape && row.colour == colour)
        .map(|row| row.sign)
        .ok_or(HurwitzError::UnclassifiableVertex(v))
}

/// A set of branch point indices in `1..=r` lying on the positive half-line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Splitting {
    pub r: usize,
    pub positive: BTreeSet<usize>,
}

impl Splitting {
    pub fn new(r: usize, positive: impl IntoIterator<Item = usize>) -> Result<Self> {
        let positive: BTreeSet<usize> = positive.into_iter().collect();
        if let Some(&bad) = positive.iter().find(|&&i| i == 0 || i > r) {
            return Err(HurwitzError::InvalidSplitting(format!(
                "index {bad} outside 1..={r}"
            )));
        }
        Ok(Splitting { r, positive })
    }

    /// `{1, …, s}`.
    pub fn first(r: usize, s: usize) -> Result<Self> {
        if s > r {
            return Err(HurwitzError::SplitOutOfRange { s: s as i64, r });
        }
        Splitting::new(r, 1..=s)
    }

    pub fn s(&self) -> usize {
        self.positive.len()
    }

    pub fn mask(&self) -> u64 {
        self.positive.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn from_mask(r: usize, mask: u64) -> Self {
        Splitting {
            r,
            positive: (1..=r).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
        }
    }

    /// Parses `"1,3,4"` (empty string for the empty set).
    pub fn parse(r: usize, s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Splitting::new(r, []);
        }
        let idx = t
            .split(',')
            .map(|x| {
                usize::from_str(x.trim())
                    .map_err(|e| HurwitzError::InvalidSplitting(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Splitting::new(r, idx)
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.positive.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

pub fn induced_splitting(c: &TropicalCover, rho: &Colouring) -> Result<Splitting> {
    let mut pos = BTreeSet::new();
    for v in 1..=c.r() {
        if vertex_sign(c, rho, v)? == Sign::Positive {
            pos.insert(v);
        }
    }
    Ok(Splitting { r: c.r(), positive: pos })
}

/// `2^{|E(T)| − |Sym|} ∏_{cycles in T} ω` as an exact rational.
pub fn mult_real_exact(c: &TropicalCover, rho: &Colouring) -> BigRational {
    let sym = c.sym_registry().sym().len() as i64;
    let free_even = (0..c.edges().len())
        .filter(|&e| c.is_inner(e) && !c.edge(e).is_odd() && !rho.in_t(e))
        .count() as i64;
    let prod: BigInt = rho
        .t_rho
        .iter()
        .filter(|p| p.kind == SymKind::Cycle)
        .map(|p| BigInt::from(p.weight))
        .product();
    let exp = free_even - sym;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut m = BigRational::from_integer(prod);
    for _ in 0..exp.abs() {
        if exp > 0 {
            m *= &two;
        } else {
            m /= &two;
        }
    }
    m
}

/// Integral real multiplicity; errors when the formula is not an integer.
pub fn mult_real(c: &TropicalCover, rho: &Colouring) -> Result<BigInt> {
    let m = mult_real_exact(c, rho);
    if m.is_integer() {
        Ok(m.to_integer())
    } else {
        Err(HurwitzError::NonIntegral(HurwitzValue(m).to_string()))
    }
}

/// All real data of one instance: for each splitting (as bitmask) the sum of
/// real multiplicities of colourings inducing it.
#[derive(Debug, Clone)]
pub struct RealProfile {
    pub r: usize,
    pub totals: HashMap<u64, BigRational>,
}

impl RealProfile {
    pub fn value(&self, split: &Splitting) -> HurwitzValue {
        HurwitzValue(self.totals.get(&split.mask()).cloned().unwrap_or_else(BigRational::zero))
    }
}

pub fn real_profile_from_covers(r: usize, covers: &[TropicalCover]) -> Result<RealProfile> {
    let parts: Vec<HashMap<u64, BigRational>> = covers
        .par_iter()
        .map(|c| {
            let mut m: HashMap<u64, BigRational> = HashMap::new();
            for rho in enumerate_colourings(c) {
                let split = induced_splitting(c, &rho)?;
                *m.entry(split.mask()).or_insert_with(BigRational::zero) += mult_real_exact(c, &rho);
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    let mut totals: HashMap<u64, BigRational> = HashMap::new();
    for m in parts {
        for (k, v) in m {
            *totals.entry(k).or_insert_with(BigRational::zero) += v;
        }
    }
    Ok(RealProfile { r, totals })
}

pub fn real_profile(g: u32, lambda: &Partition, mu: &Partition, budget: &Budget) -> Result<RealProfile> {
    let covers = enumerate_covers_with(g, lambda, mu, SweepOrder::Forward, budget)?;
    let r = crate::partitions::branch_count(g, lambda, mu)? as usize;
    real_profile_from_covers(r, &covers)
}

/// Sum of real multiplicities over covers and colourings inducing `split`.
pub fn real_tropical_hurwitz(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    split: &Splitting,
) -> Result<HurwitzValue> {
    real_tropical_hurwitz_with(g, lambda, mu, split, &Budget::default())
}

pub fn real_tropical_hurwitz_with(
    g: u32,
    lambda: &Partition,
    mu: &Partition,
    split: &Splitting,
    budget: &Budget,
) -> Result<HurwitzValue> {
    let r = crate::partitions::branch_count(g, lambda, mu)?;
    if split.r as i64 != r {
        return Err(HurwitzError::InvalidSplitting(format!(
            "splitting is over {} points but r = {r}",
            split.r
        )));
    }
    Ok(real_profile(g, lambda, mu, budget)?.value(split))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{enumerate_covers, Edge};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn fork_cover() -> TropicalCover {
        TropicalCover::new(1, vec![Edge::new(0, 1, 2), Edge::new(1, 2, 1), Edge::new(1, 2, 1)]).unwrap()
    }

    fn rho_with(c: &TropicalCover, t: &[SymPair], colour: impl Fn(usize) -> Colour) -> Colouring {
        enumerate_colourings(c)
            .into_iter()
            .find(|r| {
                r.t_rho == t
                    && (0..c.edges().len()).all(|e| r.edge_colour(e).is_none_or(|x| x == colour(e)))
            })
            .unwrap()
    }

    #[test]
    fn colouring_counts() {
        let c = TropicalCover::new(
            2,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(0, 1, 1),
                Edge::new(1, 2, 2),
                Edge::new(2, 3, 1),
                Edge::new(2, 3, 1),
            ],
        )
        .unwrap();
        // Two odd forks, one even component.
        assert_eq!(c.sym_registry().sym().len(), 2);
        assert_eq!(enumerate_colourings(&c).len(), 4 * 2);
        let c = fork_cover();
        // {fork in T, not in T} × {red, blue} end.
        assert_eq!(enumerate_colourings(&c).len(), 4);
    }

    #[test]
    fn colouring_count_matches_formula() {
        for c in enumerate_covers(0, &p(&[2, 2]), &p(&[2, 1, 1])).unwrap() {
            let sym = c.sym_registry().sym();
            let mut expect = 0;
            for mask in 0u32..(1 << sym.len()) {
                let mut in_t = vec![false; c.edges().len()];
                for (i, s) in sym.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        in_t[s.edges.0] = true;
                        in_t[s.edges.1] = true;
                    }
                }
                expect += 1usize << even_components(&c, &in_t).1;
            }
            assert_eq!(enumerate_colourings(&c).len(), expect);
        }
    }

    #[test]
    fn sign_rows() {
        // Odd in; odd and even out.
        let c = TropicalCover::new(
            2,
            vec![
                Edge::new(0, 1, 3),
                Edge::new(1, 2, 1),
                Edge::new(1, 3, 2),
                Edge::new(0, 2, 1),
                Edge::new(2, 3, 2),
            ],
        )
        .unwrap();
        let blue = rho_with(&c, &[], |_| Colour::Blue);
        let red = rho_with(&c, &[], |_| Colour::Red);
        assert_eq!(vertex_sign(&c, &blue, 1).unwrap(), Sign::Positive);
        assert_eq!(vertex_sign(&c, &red, 1).unwrap(), Sign::Negative);
        // Vertex 2 is the mirror image: odd pair in, even out.
        assert_eq!(vertex_sign(&c, &blue, 2).unwrap(), Sign::Negative);
        assert_eq!(vertex_sign(&c, &red, 2).unwrap(), Sign::Positive);

        // Even single edge into a symmetric odd fork.
        let c = fork_cover();
        let fork = c.sym_registry().sym();
        let cases = [
            (&fork[..], Colour::Blue, Sign::Positive),
            (&fork[..], Colour::Red, Sign::Negative),
            (&[][..], Colour::Red, Sign::Positive),
            (&[][..], Colour::Blue, Sign::Negative),
        ];
        for (t, col, sign) in cases {
            let rho = rho_with(&c, t, |_| col);
            assert_eq!(vertex_sign(&c, &rho, 1).unwrap(), sign);
        }

        // All even.
        let c = TropicalCover::new(
            2,
            vec![
                Edge::new(0, 1, 4),
                Edge::new(1, 2, 2),
                Edge::new(1, 3, 2),
                Edge::new(0, 2, 2),
                Edge::new(2, 3, 4),
            ],
        )
        .unwrap();
        for (col, sign) in [(Colour::Blue, Sign::Positive), (Colour::Red, Sign::Negative)] {
            let rho = rho_with(&c, &[], |_| col);
            assert_eq!(vertex_sign(&c, &rho, 1).unwrap(), sign);
            assert_eq!(vertex_sign(&c, &rho, 2).unwrap(), sign);
        }

        // Even symmetric cycle inside T, dotted on both sides.
        let c = TropicalCover::new(
            2,
            vec![Edge::new(0, 1, 4), Edge::new(1, 2, 2), Edge::new(1, 2, 2), Edge::new(2, 3, 4)],
        )
        .unwrap();
        let cyc = c.sym_registry().sym();
        assert_eq!(cyc.len(), 1);
        for (col, sign) in [(Colour::Blue, Sign::Positive), (Colour::Red, Sign::Negative)] {
            let rho = rho_with(&c, &cyc, |_| col);
            assert_eq!(vertex_sign(&c, &rho, 1).unwrap(), sign);
            assert_eq!(vertex_sign(&c, &rho, 2).unwrap(), sign);
        }
    }

    #[test]
    fn table_is_complete_and_consistent() {
        for shape in [LocalShape::OddSingle, LocalShape::AllEven, LocalShape::OddPair, LocalShape::DottedPair] {
            let signs: Vec<Sign> = [Colour::Red, Colour::Blue]
                .iter()
                .map(|&col| {
                    let rows: Vec<_> = SIGN_TABLE.iter().filter(|r| r.shape == shape && r.colour == col).collect();
                    assert_eq!(rows.len(), 1);
                    rows[0].sign
                })
                .collect();
            assert_ne!(signs[0], signs[1]);
        }
    }

    #[test]
    fn blue_end_into_dotted_fork_is_positive() {
        let c = fork_cover();
        let fork = c.sym_registry().sym();
        let rho = rho_with(&c, &fork, |_| Colour::Blue);
        let split = induced_splitting(&c, &rho).unwrap();
        assert_eq!(split.positive, BTreeSet::from([1]));
    }

    #[test]
    fn multiplicities() {
        // One symmetric odd cycle of weight 3 and one even inner edge.
        let c = TropicalCover::new(
            3,
            vec![
                Edge::new(0, 1, 6),
                Edge::new(1, 2, 3),
                Edge::new(1, 2, 3),
                Edge::new(2, 3, 6),
                Edge::new(3, 4, 4),
                Edge::new(3, 4, 2),
            ],
        )
        .unwrap();
        let cyc = c.sym_registry().sym();
        assert_eq!(cyc.len(), 1);
        let rho = rho_with(&c, &cyc, |_| Colour::Blue);
        assert_eq!(mult_real(&c, &rho).unwrap(), BigInt::from(3));
        let rho = rho_with(&c, &[], |_| Colour::Blue);
        assert_eq!(mult_real(&c, &rho).unwrap(), BigInt::from(1));

        // Without the even edge the formula leaves the integers.
        let c = TropicalCover::new(
            2,
            vec![Edge::new(0, 1, 6), Edge::new(1, 2, 3), Edge::new(1, 2, 3), Edge::new(2, 3, 6)],
        )
        .unwrap();
        let cyc = c.sym_registry().sym();
        let rho = rho_with(&c, &cyc, |_| Colour::Blue);
        assert!(matches!(mult_real(&c, &rho), Err(HurwitzError::NonIntegral(_))));

        // Sym = ∅ and no even inner edges.
        for c in enumerate_covers(0, &p(&[3]), &p(&[2, 1])).unwrap() {
            for rho in enumerate_colourings(&c) {
                assert_eq!(mult_real(&c, &rho).unwrap(), BigInt::from(1));
            }
        }
    }

    #[test]
    fn one_symmetric_cycle_with_one_even_edge() {
        // A weight-2 inner edge followed by a symmetric cycle of weight 3.
        let c = TropicalCover::new(
            4,
            vec![
                Edge::new(0, 1, 1),
                Edge::new(0, 1, 1),
                Edge::new(1, 2, 2),
                Edge::new(0, 2, 4),
                Edge::new(2, 3, 6),
                Edge::new(3, 4, 3),
                Edge::new(3, 4, 3),
                Edge::new(4, 5, 6),
            ],
        )
        .unwrap();
        let sym = c.sym_registry().sym();
        // Odd fork at vertex 1 and the cycle.
        assert_eq!(sym.len(), 2);
        let cyc: Vec<SymPair> = sym.iter().copied().filter(|p| p.kind == SymKind::Cycle).collect();
        for rho in enumerate_colourings(&c).into_iter().filter(|r| r.t_rho == cyc) {
            // |E(T)| = 2 (weights 2 and 6), |Sym| = 2, ω = 3.
            assert_eq!(mult_real(&c, &rho).unwrap(), BigInt::from(3));
        }
    }

    #[test]
    fn excluded_family_sums() {
        let one = HurwitzValue::from_integer(1);
        let r = 1;
        let v = real_tropical_hurwitz(0, &p(&[2]), &p(&[1, 1]), &Splitting::new(r, [1]).unwrap()).unwrap();
        assert_eq!(v, one);
        let v = real_tropical_hurwitz(0, &p(&[2]), &p(&[1, 1]), &Splitting::new(r, []).unwrap()).unwrap();
        assert_eq!(v, one);
    }

    #[test]
    fn splitting_parse() {
        let s = Splitting::parse(5, "1,3,4").unwrap();
        assert_eq!(s.s(), 3);
        assert_eq!(s.to_string(), "{1,3,4}");
        assert_eq!(Splitting::from_mask(5, s.mask()), s);
        assert!(Splitting::parse(3, "4").is_err());
        assert!(Splitting::parse(3, "0").is_err());
        assert_eq!(Splitting::parse(3, "").unwrap().s(), 0);
    }
}
