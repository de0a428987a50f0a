//! Integer partitions, stored as non-increasing part lists.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HurwitzError, Result};

/// A partition with positive parts, sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(HurwitzError::InvalidPartition(
                "parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(1^n)`.
    pub fn ones(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts, l(λ).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of parts, |λ|.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Multiplicity of `part`.
    pub fn count(&self, part: u32) -> usize {
        self.0.iter().filter(|&&p| p == part).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// Multiset union.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    /// Multiset difference; `None` if `other` is not contained in `self`.
    pub fn difference(&self, other: &Partition) -> Option<Partition> {
        let mut v = self.0.clone();
        for &p in &other.0 {
            let pos = v.iter().position(|&q| q == p)?;
            v.remove(pos);
        }
        Some(Partition(v))
    }
}

impl FromIterator<u32> for Partition {
    /// Collects parts, dropping zeros.
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        let mut v: Vec<u32> = iter.into_iter().filter(|&p| p > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Partition {
    type Err = HurwitzError;

    /// Parses `"[3,1,1]"`; brackets are optional and whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(']').unwrap_or(t).trim();
        if t.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|e| HurwitzError::InvalidPartition(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Splitting of a partition into its tail pieces and leftover odd parts.
///
/// Every even part `2e` contributes `e` to `two_e` (e even) or `two_o` (e odd).
/// Pairs of equal odd parts contribute one entry to `oo`, and the odd parts
/// left unpaired form `zero`, which therefore has distinct parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailDecomposition {
    pub two_e: Partition,
    pub two_o: Partition,
    pub oo: Partition,
    pub zero: Partition,
    /// Number of entries equal to 1 in `oo`.
    pub ones_in_oo: usize,
}

impl TailDecomposition {
    /// Rebuilds the original partition.
    pub fn reassemble(&self) -> Partition {
        self.two_e
            .iter()
            .chain(self.two_o.iter())
            .map(|p| 2 * p)
            .chain(self.oo.iter().flat_map(|p| [p, p]))
            .chain(self.zero.iter())
            .collect()
    }

    /// The tail multiset `(two_e, two_o, oo)` as a single partition.
    pub fn tail(&self) -> Partition {
        self.two_e.union(&self.two_o).union(&self.oo)
    }
}

pub fn tail_decompose(lambda: &Partition) -> TailDecomposition {
    let mut two_e = Vec::new();
    let mut two_o = Vec::new();
    let mut oo = Vec::new();
    let mut zero = Vec::new();
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let p = parts[i];
        if p.is_multiple_of(2) {
            if (p / 2).is_multiple_of(2) {
                two_e.push(p / 2);
            } else {
                two_o.push(p / 2);
            }
            i += 1;
        } else if i + 1 < parts.len() && parts[i + 1] == p {
            oo.push(p);
            i += 2;
        } else {
            zero.push(p);
            i += 1;
        }
    }
    let ones_in_oo = oo.iter().filter(|&&p| p == 1).count();
    TailDecomposition {
        two_e: Partition(two_e),
        two_o: Partition(two_o),
        oo: Partition(oo),
        zero: Partition(zero),
        ones_in_oo,
    }
}

/// Appends `m` parts equal to 1.
pub fn extend_with_ones(lambda: &Partition, m: usize) -> Partition {
    let mut v = lambda.0.clone();
    v.extend(std::iter::repeat_n(1, m));
    Partition(v)
}

/// Number of simple branch points `r = l(λ) + l(μ) + 2g − 2`.
pub fn branch_count(g: u32, lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(HurwitzError::DegreeMismatch {
            lambda: lambda.size(),
            mu: mu.size(),
        });
    }
    Ok(lambda.len() as i64 + mu.len() as i64 + 2 * g as i64 - 2)
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Cycle-type bookkeeping: `z_λ = ∏ i^{m_i} m_i!`.
pub fn z_lambda(lambda: &Partition) -> u128 {
    let mut z: u128 = 1;
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let p = parts[i];
        let mut m = 0u128;
        while i < parts.len() && parts[i] == p {
            m += 1;
            i += 1;
            z *= p as u128 * m;
        }
    }
    z
}
