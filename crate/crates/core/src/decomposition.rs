//! Intervals, simplicity, sum/skew components and the substitution
//! decomposition.
//!
//! An interval is a set of entries occupying contiguous positions *and*
//! contiguous values. The whole permutation never counts as an interval, so
//! `1`, `12` and `21` are simple and no permutation of length 3 is.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{sum, Permutation, SumKind};

/// A contiguous block of positions whose values are also contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntervalSpan {
    pub pos_lo: usize,
    pub pos_hi: usize,
    pub val_lo: usize,
    pub val_hi: usize,
}

impl IntervalSpan {
    /// The span covering positions `pos_lo..=pos_hi` of `p`, if those
    /// entries form an interval (singletons included, the whole of `p` not).
    pub fn at(p: &Permutation, pos_lo: usize, pos_hi: usize) -> Result<IntervalSpan> {
        let bad = || Error::NotAnInterval {
            perm: p.clone(),
            pos_lo,
            pos_hi,
        };
        if pos_lo < 1 || pos_hi < pos_lo || pos_hi > p.len() || pos_hi - pos_lo + 1 == p.len() {
            return Err(bad());
        }
        let block = &p.values()[pos_lo - 1..pos_hi];
        let lo = *block.iter().min().unwrap() as usize;
        let hi = *block.iter().max().unwrap() as usize;
        if hi - lo != pos_hi - pos_lo {
            return Err(bad());
        }
        Ok(IntervalSpan {
            pos_lo,
            pos_hi,
            val_lo: lo,
            val_hi: hi,
        })
    }

    pub fn len(&self) -> usize {
        self.pos_hi - self.pos_lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_pos(&self, pos: usize) -> bool {
        (self.pos_lo..=self.pos_hi).contains(&pos)
    }

    pub fn contains_val(&self, val: usize) -> bool {
        (self.val_lo..=self.val_hi).contains(&val)
    }

    /// The pattern formed by the entries of this block.
    pub fn pattern(&self, p: &Permutation) -> Permutation {
        Permutation::standardize(&p.values()[self.pos_lo - 1..self.pos_hi])
    }
}

impl fmt::Display for IntervalSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "positions [{}, {}] values {{{}..{}}}",
            self.pos_lo, self.pos_hi, self.val_lo, self.val_hi
        )
    }
}

/// Calls `f(lo, hi, val_lo, val_hi)` for every contiguous block (0-based,
/// inclusive) whose values are contiguous, the whole permutation included.
fn for_each_block(p: &Permutation, mut f: impl FnMut(usize, usize, usize, usize) -> bool) {
    let v = p.values();
    let n = v.len();
    for a in 0..n {
        let (mut mn, mut mx) = (v[a], v[a]);
        for (b, &x) in v.iter().enumerate().skip(a) {
            mn = mn.min(x);
            mx = mx.max(x);
            if (mx - mn) as usize == b - a && !f(a, b, mn as usize, mx as usize) {
                return;
            }
        }
    }
}

/// All intervals of size at least 2 (and smaller than `p`), ordered by
/// `(pos_lo, pos_hi)`.
pub fn proper_intervals(p: &Permutation) -> Vec<IntervalSpan> {
    let n = p.len();
    let mut out = Vec::new();
    for_each_block(p, |a, b, lo, hi| {
        let size = b - a + 1;
        if size >= 2 && size < n {
            out.push(IntervalSpan {
                pos_lo: a + 1,
                pos_hi: b + 1,
                val_lo: lo,
                val_hi: hi,
            });
        }
        true
    });
    out
}

pub fn is_simple(p: &Permutation) -> bool {
    let n = p.len();
    let mut simple = true;
    for_each_block(p, |a, b, _, _| {
        let size = b - a + 1;
        if size >= 2 && size < n {
            simple = false;
        }
        simple
    });
    simple
}

/// Maximal decomposition into direct (or skew) summands, each of them
/// indecomposable of that kind.
pub fn sum_components(p: &Permutation, kind: SumKind) -> Vec<Permutation> {
    let v = p.values();
    let n = v.len();
    let mut out = Vec::new();
    let mut start = 0;
    let mut mx = 0usize;
    let mut mn = usize::MAX;
    for (i, &x) in v.iter().enumerate() {
        mx = mx.max(x as usize);
        mn = mn.min(x as usize);
        let cut = match kind {
            SumKind::Direct => mx == i + 1,
            SumKind::Skew => mn == n - i,
        };
        if cut {
            out.push(Permutation::standardize(&v[start..=i]));
            start = i + 1;
        }
    }
    out
}

pub fn is_sum_decomposable(p: &Permutation) -> bool {
    let mut mx = 0;
    p.values()[..p.len() - 1].iter().enumerate().any(|(i, &x)| {
        mx = mx.max(x as usize);
        mx == i + 1
    })
}

pub fn is_skew_decomposable(p: &Permutation) -> bool {
    let n = p.len();
    let mut mn = usize::MAX;
    p.values()[..n - 1].iter().enumerate().any(|(i, &x)| {
        mn = mn.min(x as usize);
        mn == n - i
    })
}

/// Neither sum- nor skew-decomposable. `1` counts as indecomposable.
pub fn is_indecomposable(p: &Permutation) -> bool {
    !is_sum_decomposable(p) && !is_skew_decomposable(p)
}

/// The substitution decomposition of a permutation.
///
/// Sums and skew sums are kept binary: a `12` (resp. `21`) node always has a
/// sum-indecomposable (resp. skew-indecomposable) first child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionTree {
    Leaf,
    Node {
        skeleton: Permutation,
        children: Vec<DecompositionTree>,
    },
}

impl DecompositionTree {
    /// Re-inflates the tree bottom-up.
    pub fn to_permutation(&self) -> Permutation {
        match self {
            DecompositionTree::Leaf => Permutation::identity(1),
            DecompositionTree::Node { skeleton, children } => {
                let parts: Vec<Permutation> = children.iter().map(|c| c.to_permutation()).collect();
                crate::perm::inflate(skeleton, &parts).expect("tree arity matches skeleton")
            }
        }
    }

    pub fn skeleton(&self) -> Permutation {
        match self {
            DecompositionTree::Leaf => Permutation::identity(1),
            DecompositionTree::Node { skeleton, .. } => skeleton.clone(),
        }
    }

    pub fn children(&self) -> &[DecompositionTree] {
        match self {
            DecompositionTree::Leaf => &[],
            DecompositionTree::Node { children, .. } => children,
        }
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionTree::Leaf => f.write_str("1"),
            DecompositionTree::Node { skeleton, children } => {
                write!(f, "{}[", compact_or_spaced(skeleton))?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

fn compact_or_spaced(p: &Permutation) -> String {
    p.to_compact().unwrap_or_else(|| format!("({p})"))
}

impl Serialize for DecompositionTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DecompositionTree::Leaf => serializer.serialize_str("1"),
            DecompositionTree::Node { skeleton, children } => {
                let mut s = serializer.serialize_struct("DecompositionTree", 3)?;
                s.serialize_field("permutation", &self.to_permutation())?;
                s.serialize_field("skeleton", skeleton)?;
                s.serialize_field("children", children)?;
                s.end()
            }
        }
    }
}

pub fn substitution_decompose(p: &Permutation) -> DecompositionTree {
    if p.len() == 1 {
        return DecompositionTree::Leaf;
    }
    for (kind, skeleton) in [(SumKind::Direct, "12"), (SumKind::Skew, "21")] {
        let comps = sum_components(p, kind);
        if comps.len() >= 2 {
            let rest = comps[2..]
                .iter()
                .fold(comps[1].clone(), |acc, c| sum(&acc, c, kind));
            return DecompositionTree::Node {
                skeleton: skeleton.parse().unwrap(),
                children: vec![
                    substitution_decompose(&comps[0]),
                    substitution_decompose(&rest),
                ],
            };
        }
    }
    let blocks = maximal_blocks(p);
    let reps: Vec<u16> = blocks.iter().map(|b| b.val_lo as u16).collect();
    DecompositionTree::Node {
        skeleton: Permutation::standardize(&reps),
        children: blocks
            .iter()
            .map(|b| substitution_decompose(&b.pattern(p)))
            .collect(),
    }
}

/// Maximal intervals of an indecomposable permutation of length > 1.
fn maximal_blocks(p: &Permutation) -> Vec<IntervalSpan> {
    let v = p.values();
    let n = v.len();
    let mut out = Vec::new();
    let mut s = 0;
    while s < n {
        let (mut mn, mut mx) = (v[s], v[s]);
        let mut end = s;
        for (b, &x) in v.iter().enumerate().skip(s) {
            mn = mn.min(x);
            mx = mx.max(x);
            if (mx - mn) as usize == b - s && b - s + 1 < n {
                end = b;
            }
        }
        let block = &v[s..=end];
        out.push(IntervalSpan {
            pos_lo: s + 1,
            pos_hi: end + 1,
            val_lo: *block.iter().min().unwrap() as usize,
            val_hi: *block.iter().max().unwrap() as usize,
        });
        s = end + 1;
    }
    out
}

/// The disjoint maximal intervals (singletons included) of an
/// indecomposable permutation, in position order.
pub fn maximal_intervals(p: &Permutation) -> Result<Vec<IntervalSpan>> {
    if !is_indecomposable(p) {
        return Err(Error::Decomposable(p.clone()));
    }
    if p.len() == 1 {
        // The lone entry is the whole permutation; it has no proper intervals.
        return Ok(Vec::new());
    }
    Ok(maximal_blocks(p))
}

/// A longest maximal interval, the leftmost one on ties.
pub fn longest_maximal_interval(p: &Permutation) -> Result<Option<IntervalSpan>> {
    let blocks = maximal_intervals(p)?;
    let mut best: Option<IntervalSpan> = None;
    for b in blocks {
        if best.is_none_or(|x| b.len() > x.len()) {
            best = Some(b);
        }
    }
    Ok(best)
}

/// Σ (|γ| − 1) over the maximal intervals γ; zero exactly for simples.
pub fn sd_measure(p: &Permutation) -> Result<usize> {
    Ok(maximal_intervals(p)?.iter().map(|g| g.len() - 1).sum())
}

/// The entries of a permutation sorted into the four corner regions around
/// an interval `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrantView {
    pub alpha: IntervalSpan,
    /// Left of and below alpha, as (position, value).
    pub beta: Vec<(usize, usize)>,
    /// Left of and above alpha.
    pub gamma: Vec<(usize, usize)>,
    /// Right of and above alpha.
    pub delta: Vec<(usize, usize)>,
    /// Right of and below alpha.
    pub epsilon: Vec<(usize, usize)>,
}

pub fn quadrants(p: &Permutation, alpha: IntervalSpan) -> Result<QuadrantView> {
    let checked = IntervalSpan::at(p, alpha.pos_lo, alpha.pos_hi)?;
    if checked != alpha {
        return Err(Error::NotAnInterval {
            perm: p.clone(),
            pos_lo: alpha.pos_lo,
            pos_hi: alpha.pos_hi,
        });
    }
    let mut view = QuadrantView {
        alpha,
        beta: Vec::new(),
        gamma: Vec::new(),
        delta: Vec::new(),
        epsilon: Vec::new(),
    };
    for (i, &v) in p.values().iter().enumerate() {
        let (pos, val) = (i + 1, v as usize);
        if alpha.contains_pos(pos) {
            continue;
        }
        let left = pos < alpha.pos_lo;
        let below = val < alpha.val_lo;
        let region = match (left, below) {
            (true, true) => &mut view.beta,
            (true, false) => &mut view.gamma,
            (false, false) => &mut view.delta,
            (false, true) => &mut view.epsilon,
        };
        region.push((pos, val));
    }
    Ok(view)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn span(lo: usize, hi: usize, vlo: usize, vhi: usize) -> IntervalSpan {
        IntervalSpan {
            pos_lo: lo,
            pos_hi: hi,
            val_lo: vlo,
            val_hi: vhi,
        }
    }

    #[test]
    fn proper_interval_examples() {
        assert_eq!(
            proper_intervals(&p("4371265")),
            vec![span(1, 2, 3, 4), span(4, 5, 1, 2), span(6, 7, 5, 6)]
        );
        assert!(proper_intervals(&p("2413")).is_empty());
        assert_eq!(
            proper_intervals(&p("123")),
            vec![span(1, 2, 1, 2), span(2, 3, 2, 3)]
        );
    }

    #[test]
    fn simplicity_examples() {
        assert!(is_simple(&p("2413")));
        assert!(is_simple(&p("12")));
        assert!(is_simple(&p("1")));
        assert!(!is_simple(&p("4371265")));
        assert!(!is_simple(&p("132")));
    }

    #[test]
    fn sum_component_examples() {
        assert_eq!(
            sum_components(&p("123456"), SumKind::Direct),
            vec![p("1"); 6]
        );
        assert_eq!(
            sum_components(&p("6753241"), SumKind::Skew),
            vec![p("12"), p("1"), p("213"), p("1")]
        );
        assert_eq!(sum_components(&p("2413"), SumKind::Direct), vec![p("2413")]);
        assert!(is_indecomposable(&p("1")));
        assert!(is_sum_decomposable(&p("12")) && !is_skew_decomposable(&p("12")));
    }

    #[test]
    fn decomposition_examples() {
        let t = substitution_decompose(&p("4371265"));
        assert_eq!(t.skeleton(), p("2413"));
        let kids: Vec<_> = t.children().iter().map(|c| c.to_permutation()).collect();
        assert_eq!(kids, vec![p("21"), p("1"), p("12"), p("21")]);

        let t = substitution_decompose(&p("2413"));
        assert_eq!(t.skeleton(), p("2413"));
        assert!(t.children().iter().all(|c| *c == DecompositionTree::Leaf));

        let t = substitution_decompose(&p("123"));
        assert_eq!(t.skeleton(), p("12"));
        let kids: Vec<_> = t.children().iter().map(|c| c.to_permutation()).collect();
        assert_eq!(kids, vec![p("1"), p("12")]);
        assert_eq!(t.to_string(), "12[1, 12[1, 1]]");
    }

    #[test]
    fn maximal_interval_examples() {
        assert_eq!(
            maximal_intervals(&p("4371265")).unwrap(),
            vec![
                span(1, 2, 3, 4),
                span(3, 3, 7, 7),
                span(4, 5, 1, 2),
                span(6, 7, 5, 6)
            ]
        );
        assert_eq!(maximal_intervals(&p("2413")).unwrap().len(), 4);
        let m = maximal_intervals(&p("25173486")).unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(
            m.iter().filter(|s| s.len() > 1).collect::<Vec<_>>(),
            vec![&span(5, 6, 3, 4)]
        );
        assert!(matches!(
            maximal_intervals(&p("123")),
            Err(Error::Decomposable(_))
        ));
    }

    #[test]
    fn sd_examples() {
        assert_eq!(sd_measure(&p("2413")).unwrap(), 0);
        assert_eq!(sd_measure(&p("4371265")).unwrap(), 3);
        assert_eq!(sd_measure(&p("25173486")).unwrap(), 1);
        assert!(sd_measure(&p("21")).is_err());
    }

    #[test]
    fn longest_interval_tie_break_is_leftmost() {
        let a = longest_maximal_interval(&p("4371265")).unwrap().unwrap();
        assert_eq!(a, span(1, 2, 3, 4));
    }

    #[test]
    fn quadrant_examples() {
        let w = p("25173486");
        let q = quadrants(&w, span(5, 6, 3, 4)).unwrap();
        let vals = |r: &[(usize, usize)]| r.iter().map(|e| e.1).collect::<Vec<_>>();
        assert_eq!(vals(&q.beta), vec![2, 1]);
        assert_eq!(vals(&q.gamma), vec![5, 7]);
        assert_eq!(vals(&q.delta), vec![8, 6]);
        assert!(q.epsilon.is_empty());

        let s = p("2413");
        let q = quadrants(&s, IntervalSpan::at(&s, 2, 2).unwrap()).unwrap();
        assert_eq!(
            q.beta.len() + q.gamma.len() + q.delta.len() + q.epsilon.len(),
            3
        );

        let w = p("4371265");
        let q = quadrants(&w, span(4, 5, 1, 2)).unwrap();
        assert!(q.epsilon.is_empty() && q.beta.is_empty());

        assert!(quadrants(&w, span(3, 4, 1, 7)).is_err());
        assert!(IntervalSpan::at(&w, 3, 4).is_err());
    }
}
