//! Thickness sequences and their arithmetic/symmetry predicates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Thickness vector `q = (q_1, ..., q_p)`, indexed from 1 and cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeSequence(Vec<u64>);

impl TypeSequence {
    /// Entries must be at least 2 (thickness-2 entries are allowed).
    pub fn new(entries: Vec<u64>) -> Result<Self, LatticeError> {
        if entries.is_empty() {
            return Err(LatticeError::SequenceLength {
                found: 0,
                expected: 1,
            });
        }
        if let Some(&bad) = entries.iter().find(|&&q| q < 2) {
            return Err(LatticeError::ThicknessTooSmall(bad));
        }
        Ok(TypeSequence(entries))
    }

    pub fn constant(p: usize, value: u64) -> Result<Self, LatticeError> {
        Self::new(vec![value; p])
    }

    pub fn p(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `q_i` with `i` taken mod p in 1..=p.
    pub fn get(&self, i: i64) -> u64 {
        cyclic(&self.0, i)
    }
}

impl fmt::Display for TypeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for TypeSequence {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let entries = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| {
                LatticeError::InternalError(format!("cannot parse sequence {s:?}: {e}"))
            })?;
        Self::new(entries)
    }
}

pub(crate) fn cyclic(q: &[u64], i: i64) -> u64 {
    q[(i - 1).rem_euclid(q.len() as i64) as usize]
}

/// Gcds of the two alternating classes of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingDecomposition {
    /// Common divisor of the first class (odd indices for even p).
    pub d: u64,
    /// Common divisor of the second class (even indices for even p).
    pub e: u64,
    /// Index shift `i`; 0 for even p.
    pub offset: usize,
    /// `q_i` divided by the divisor of its class.
    pub reduced: Vec<u64>,
}

impl AlternatingDecomposition {
    /// Divisor of the class containing index `i` (1-based). For odd p the
    /// index `offset` itself belongs to neither class and gets 1.
    pub fn divisor(&self, i: usize) -> u64 {
        let p = self.reduced.len();
        match class_position(i, self.offset, p) {
            k if k == p && p % 2 == 1 => 1,
            k if k % 2 == 1 => self.d,
            _ => self.e,
        }
    }
}

/// Position `k` in `1..=p` with `i = offset + k (mod p)`.
fn class_position(i: usize, offset: usize, p: usize) -> usize {
    (i + p - offset % p - 1) % p + 1
}

fn gcd_of(values: impl Iterator<Item = u64>) -> u64 {
    values.fold(0, |g, v| g.gcd(&v))
}

/// Decomposition into two alternating classes whose gcds are both at least 2.
///
/// For even p the classes are the odd and the even indices. For odd p they
/// are `q_{i+1}, q_{i+3}, ..., q_{i+p-2}` and `q_{i+2}, ..., q_{i+p-1}` for
/// some offset `i` in `1..=p`; the smallest working offset is returned.
pub fn alternating_noncoprime(q: &[u64]) -> Option<AlternatingDecomposition> {
    let p = q.len();
    if p < 2 {
        return None;
    }
    let offsets = if p.is_multiple_of(2) { 0..1 } else { 1..p + 1 };
    for offset in offsets {
        let last = if p.is_multiple_of(2) { p } else { p - 1 };
        let class = |parity: usize| {
            (1..=last)
                .filter(move |k| k % 2 == parity)
                .map(move |k| cyclic(q, (k + offset) as i64))
        };
        let (d, e) = (gcd_of(class(1)), gcd_of(class(0)));
        if d >= 2 && e >= 2 {
            let mut dec = AlternatingDecomposition {
                d,
                e,
                offset,
                reduced: vec![0; p],
            };
            for i in 1..=p {
                dec.reduced[i - 1] = q[i - 1] / dec.divisor(i);
            }
            return Some(dec);
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Two,
    Four,
}

impl SymmetryKind {
    pub fn order(self) -> usize {
        match self {
            SymmetryKind::Two => 2,
            SymmetryKind::Four => 4,
        }
    }
}

pub fn is_two_symmetric_about(q: &[u64], m: usize) -> bool {
    let m = m as i64;
    (0..q.len() as i64).all(|i| cyclic(q, m + i) == cyclic(q, m - i))
}

pub fn is_four_symmetric_about(q: &[u64], m: usize) -> bool {
    let p = q.len();
    if !p.is_multiple_of(4) {
        return false;
    }
    let (m, h) = (m as i64, p as i64 / 2);
    (0..p as i64).all(|i| {
        let a = cyclic(q, m + i);
        a == cyclic(q, m + h - i) && a == cyclic(q, m + h + i) && a == cyclic(q, m - i)
    })
}

/// All axes `m` in `1..=p` about which `q` has the requested symmetry.
pub fn symmetric_axes(q: &[u64], kind: SymmetryKind) -> Result<BTreeSet<usize>, LatticeError> {
    let p = q.len();
    if kind == SymmetryKind::Four && !p.is_multiple_of(4) {
        return Err(LatticeError::BadDivisibility(format!(
            "4-symmetry needs 4 | p, got p = {p}"
        )));
    }
    let test = match kind {
        SymmetryKind::Two => is_two_symmetric_about,
        SymmetryKind::Four => is_four_symmetric_about,
    };
    Ok((1..=p).filter(|&m| test(q, m)).collect())
}
