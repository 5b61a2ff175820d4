//! The permutation value type and the operations every other module builds
//! on: parsing, containment, one-point insertion, bonds, inflation and sums.

mod pattern;
mod symmetry;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use pattern::Matcher;
pub use symmetry::Symmetry;

/// Largest supported permutation length.
pub const MAX_LEN: usize = 4096;

/// A permutation of `1..=n` in one-line notation, `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u16>);

impl Permutation {
    /// Validates that `values` is a rearrangement of `1..=n`.
    pub fn new(values: Vec<u16>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::Parse {
                token: String::new(),
                reason: "empty input".into(),
            });
        }
        if n > MAX_LEN {
            return Err(Error::TooLong(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::Parse {
                    token: v.to_string(),
                    reason: format!("value out of range 1..={n}"),
                });
            }
            if seen[v] {
                return Err(Error::Parse {
                    token: v.to_string(),
                    reason: "repeated value".into(),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u16>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_LEN).contains(&n));
        Permutation((1..=n as u16).collect())
    }

    /// The permutation order-isomorphic to `seq` (entries must be distinct).
    pub fn standardize<T: Ord>(seq: &[T]) -> Self {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
        let mut out = vec![0u16; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank as u16 + 1;
        }
        Permutation::from_vec_unchecked(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u16] {
        &self.0
    }

    /// Value at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> usize {
        self.0[pos - 1] as usize
    }

    /// 1-based position of `value`.
    pub fn position_of(&self, value: usize) -> usize {
        self.0
            .iter()
            .position(|&v| v as usize == value)
            .expect("value in range")
            + 1
    }

    pub fn inverse(&self) -> Permutation {
        Symmetry::Inverse.apply(self)
    }

    /// Whitespace-free rendering, available when every value is a single digit.
    pub fn to_compact(&self) -> Option<String> {
        (self.len() <= 9).then(|| self.0.iter().map(|v| v.to_string()).collect())
    }

    /// Removes the entry at 1-based `pos` and standardizes; `None` for length 1.
    pub fn delete(&self, pos: usize) -> Option<Permutation> {
        if self.len() <= 1 {
            return None;
        }
        let removed = self.0[pos - 1];
        let out = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos - 1)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Some(Permutation::from_vec_unchecked(out))
    }

    /// Inserts a new entry at `slot`; see [`Slot`].
    pub fn insert(&self, slot: Slot) -> Result<Permutation> {
        let n = self.len();
        if !(1..=n + 1).contains(&slot.pos_slot) || !(1..=n + 1).contains(&slot.val_slot) {
            return Err(Error::SlotOutOfRange {
                pos_slot: slot.pos_slot,
                val_slot: slot.val_slot,
                len: n,
            });
        }
        if n + 1 > MAX_LEN {
            return Err(Error::TooLong(n + 1));
        }
        Ok(self.insert_unchecked(slot))
    }

    pub(crate) fn insert_unchecked(&self, slot: Slot) -> Permutation {
        let vs = slot.val_slot as u16;
        let mut out = Vec::with_capacity(self.len() + 1);
        for (i, &v) in self.0.iter().enumerate() {
            if i + 1 == slot.pos_slot {
                out.push(vs);
            }
            out.push(if v >= vs { v + 1 } else { v });
        }
        if slot.pos_slot == self.len() + 1 {
            out.push(vs);
        }
        Permutation(out)
    }

    /// Every slot of the `(n+1) × (n+1)` grid, position-major.
    pub fn slots(&self) -> impl Iterator<Item = Slot> {
        let m = self.len() + 1;
        (1..=m).flat_map(move |ps| (1..=m).map(move |vs| Slot::new(ps, vs)))
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Parses whitespace-separated decimal values, or a single compact digit
/// string such as `2413` when the length is at most 9.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let parse_err = |token: &str, reason: &str| Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let values: Vec<u16> = match tokens.as_slice() {
        [] => return Err(parse_err("", "empty input")),
        [single] if single.len() > 1 && single.bytes().all(|b| b.is_ascii_digit()) => {
            if single.len() > 9 {
                return Err(parse_err(
                    single,
                    "compact digit strings are limited to length 9",
                ));
            }
            single.bytes().map(|b| (b - b'0') as u16).collect()
        }
        _ => tokens
            .iter()
            .map(|t| {
                t.parse::<u16>()
                    .map_err(|_| parse_err(t, "not a positive decimal value"))
            })
            .collect::<Result<_>>()?,
    };
    Permutation::new(values)
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_permutation(s)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Host positions (1-based, strictly increasing) of a pattern occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub positions: Vec<usize>,
}

impl Occurrence {
    /// Host entries at the occurrence positions.
    pub fn entries(&self, host: &Permutation) -> Vec<usize> {
        self.positions.iter().map(|&p| host.at(p)).collect()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The position-lexicographically least occurrence of `pattern` in `host`.
pub fn contains(pattern: &Permutation, host: &Permutation) -> Option<Occurrence> {
    Matcher::new(pattern)
        .find(host.values())
        .map(|pos| Occurrence {
            positions: pos.into_iter().map(|p| p + 1).collect(),
        })
}

/// Insertion coordinates for a one-point extension of a length-`n`
/// permutation: the new entry goes immediately before position `pos_slot`
/// (at the end when `pos_slot = n + 1`) and takes value `val_slot`, every
/// existing value `>= val_slot` moving up by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Slot {
    pub pos_slot: usize,
    pub val_slot: usize,
}

impl Slot {
    pub fn new(pos_slot: usize, val_slot: usize) -> Self {
        Slot { pos_slot, val_slot }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pos_slot, self.val_slot)
    }
}

pub fn insert(p: &Permutation, slot: Slot) -> Result<Permutation> {
    p.insert(slot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BondKind {
    Increasing,
    Decreasing,
}

/// Two adjacent entries with consecutive values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bond {
    /// 1-based position of the left entry.
    pub left_pos: usize,
    pub kind: BondKind,
    /// The smaller of the two values.
    pub low_value: usize,
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BondKind::Increasing => "increasing",
            BondKind::Decreasing => "decreasing",
        };
        write!(
            f,
            "{kind} bond at positions ({}, {}) with values {{{}, {}}}",
            self.left_pos,
            self.left_pos + 1,
            self.low_value,
            self.low_value + 1
        )
    }
}

pub fn bonds(p: &Permutation) -> Vec<Bond> {
    p.values()
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| {
            let (a, b) = (w[0] as usize, w[1] as usize);
            if b == a + 1 {
                Some(Bond {
                    left_pos: i + 1,
                    kind: BondKind::Increasing,
                    low_value: a,
                })
            } else if a == b + 1 {
                Some(Bond {
                    left_pos: i + 1,
                    kind: BondKind::Decreasing,
                    low_value: b,
                })
            } else {
                None
            }
        })
        .collect()
}

/// `skeleton[parts[0], …, parts[k-1]]`: every skeleton point is replaced by
/// a block patterned like the corresponding part.
pub fn inflate(skeleton: &Permutation, parts: &[Permutation]) -> Result<Permutation> {
    let k = skeleton.len();
    if parts.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: parts.len(),
        });
    }
    let total: usize = parts.iter().map(Permutation::len).sum();
    if total > MAX_LEN {
        return Err(Error::TooLong(total));
    }
    // offset[v] = number of values below the block of skeleton value v
    let inv = skeleton.inverse();
    let mut offset = vec![0usize; k + 1];
    for v in 2..=k {
        offset[v] = offset[v - 1] + parts[inv.at(v - 1) - 1].len();
    }
    let mut out = Vec::with_capacity(total);
    for (i, part) in parts.iter().enumerate() {
        let base = offset[skeleton.values()[i] as usize];
        out.extend(part.values().iter().map(|&v| v + base as u16));
    }
    Ok(Permutation::from_vec_unchecked(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    Direct,
    Skew,
}

/// `a ⊕ b` (direct) or `a ⊖ b` (skew).
pub fn sum(a: &Permutation, b: &Permutation, kind: SumKind) -> Permutation {
    let (na, nb) = (a.len() as u16, b.len() as u16);
    let out = match kind {
        SumKind::Direct => a
            .values()
            .iter()
            .copied()
            .chain(b.values().iter().map(|&v| v + na))
            .collect(),
        SumKind::Skew => a
            .values()
            .iter()
            .map(|&v| v + nb)
            .chain(b.values().iter().copied())
            .collect(),
    };
    Permutation::from_vec_unchecked(out)
}

/// All permutations of length `n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u16> = (1..=n as u16).collect();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    loop {
        out.push(Permutation(cur.clone()));
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
