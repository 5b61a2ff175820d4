//! Avoidance classes `Av(B)`: membership, generating-tree enumeration,
//! simple-permutation enumeration and shading grids.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::decomposition::is_simple;
use crate::error::{Error, Result};
use crate::perm::{Matcher, Permutation, Slot, Symmetry};

/// A permutation class given by a finite basis of pairwise incomparable
/// permutations.
#[derive(Clone)]
pub struct PermClass {
    basis: Vec<Permutation>,
    matchers: Vec<Matcher>,
}

impl PermClass {
    /// Builds `Av(basis)`, dropping duplicates and any element that contains
    /// another basis element.
    pub fn new(basis: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut all: Vec<Permutation> = basis.into_iter().collect();
        if all.is_empty() {
            return Err(Error::EmptyBasis);
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Permutation> = Vec::new();
        let mut matchers: Vec<Matcher> = Vec::new();
        for b in all {
            if matchers.iter().any(|m| m.occurs_in(b.values())) {
                continue;
            }
            matchers.push(Matcher::new(&b));
            kept.push(b);
        }
        Ok(PermClass {
            basis: kept,
            matchers,
        })
    }

    pub fn principal(pi: Permutation) -> Self {
        PermClass {
            matchers: vec![Matcher::new(&pi)],
            basis: vec![pi],
        }
    }

    pub fn basis(&self) -> &[Permutation] {
        &self.basis
    }

    /// The single basis element of a principal class.
    pub fn principal_pattern(&self) -> Option<&Permutation> {
        match self.basis.as_slice() {
            [pi] => Some(pi),
            _ => None,
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        !self.matchers.iter().any(|m| m.occurs_in(p.values()))
    }

    /// For a member `p`: whether `p` extended at `slot` is still a member.
    /// Only occurrences through the new entry need checking.
    pub fn admits(&self, p: &Permutation, slot: Slot) -> bool {
        let ext = p.insert_unchecked(slot);
        self.admits_extension(&ext, slot.pos_slot - 1)
    }

    /// For `ext` whose entry at 0-based `new_pos` was just added to a member.
    pub(crate) fn admits_extension(&self, ext: &Permutation, new_pos: usize) -> bool {
        !self
            .matchers
            .iter()
            .any(|m| m.occurs_through(ext.values(), new_pos))
    }

    /// The image class `Av(f(B))`.
    pub fn map(&self, f: Symmetry) -> PermClass {
        PermClass::new(self.basis.iter().map(|b| f.apply(b))).expect("non-empty basis")
    }
}

impl fmt::Display for PermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .basis
            .iter()
            .map(|b| b.to_compact().unwrap_or_else(|| b.to_string()))
            .collect();
        write!(f, "Av({})", parts.join(", "))
    }
}

impl fmt::Debug for PermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for PermClass {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for PermClass {}

impl Serialize for PermClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(serializer)
    }
}

pub fn avoids(p: &Permutation, c: &PermClass) -> bool {
    c.contains(p)
}

pub(crate) fn require_member(p: &Permutation, c: &PermClass) -> Result<()> {
    if c.contains(p) {
        Ok(())
    } else {
        Err(Error::NotAMember {
            perm: p.clone(),
            class: c.to_string(),
        })
    }
}

/// All one-point extensions of the member `p` that stay in `c`, sorted and
/// without duplicates.
pub fn one_point_extensions(p: &Permutation, c: &PermClass) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = p
        .slots()
        .filter_map(|slot| {
            let ext = p.insert_unchecked(slot);
            c.admits_extension(&ext, slot.pos_slot - 1).then_some(ext)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Length-by-length members of a class, grown by inserting a new maximum
/// into every member of the previous length. Every child has a unique
/// parent (delete its maximum), so no deduplication is needed.
pub struct ClassLevels<'a> {
    class: &'a PermClass,
    current: Option<Vec<Permutation>>,
    max_len: usize,
}

impl<'a> ClassLevels<'a> {
    pub fn new(class: &'a PermClass, max_len: usize) -> Self {
        ClassLevels {
            class,
            current: None,
            max_len,
        }
    }
}

impl Iterator for ClassLevels<'_> {
    type Item = Vec<Permutation>;

    fn next(&mut self) -> Option<Vec<Permutation>> {
        let next = match &self.current {
            None => {
                if self.max_len == 0 {
                    return None;
                }
                let one = Permutation::identity(1);
                if self.class.contains(&one) {
                    vec![one]
                } else {
                    Vec::new()
                }
            }
            Some(level) => {
                let n = level.first().map(Permutation::len)?;
                if n >= self.max_len {
                    return None;
                }
                let class = self.class;
                level
                    .par_iter()
                    .flat_map_iter(|parent| {
                        (1..=n + 1).filter_map(move |ps| {
                            let child = parent.insert_unchecked(Slot::new(ps, n + 1));
                            class.admits_extension(&child, ps - 1).then_some(child)
                        })
                    })
                    .collect()
            }
        };
        if next.is_empty() {
            self.current = Some(Vec::new());
            return None;
        }
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Members of `c` of lengths `1..=max_len`, grouped by length.
pub fn enumerate_class(c: &PermClass, max_len: usize) -> impl Iterator<Item = Permutation> + '_ {
    ClassLevels::new(c, max_len).flatten()
}

/// Simple members of `c` of length at most `max_len`.
pub fn enumerate_simples(c: &PermClass, max_len: usize) -> Vec<Permutation> {
    ClassLevels::new(c, max_len)
        .flat_map(|level| level.into_par_iter().filter(is_simple).collect::<Vec<_>>())
        .collect()
}

/// Insertion slots of a member whose use would create a basis element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadingGrid {
    pub host: Permutation,
    pub blocked: BTreeSet<Slot>,
}

impl ShadingGrid {
    pub fn is_blocked(&self, slot: Slot) -> bool {
        self.blocked.contains(&slot)
    }

    /// ASCII picture with values increasing upward: `o` marks an entry,
    /// `#` a blocked slot and `.` an open one.
    pub fn render(&self) -> String {
        let n = self.host.len();
        let mut out = String::new();
        for row in (0..=2 * n).rev() {
            let mut line = String::with_capacity(2 * n + 1);
            for col in 0..=2 * n {
                let ch = match (row % 2, col % 2) {
                    (0, 0) => {
                        let slot = Slot::new(col / 2 + 1, row / 2 + 1);
                        if self.is_blocked(slot) {
                            '#'
                        } else {
                            '.'
                        }
                    }
                    (1, 1) if self.host.at(col / 2 + 1) == row / 2 + 1 => 'o',
                    _ => ' ',
                };
                line.push(ch);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

pub fn shading_grid(p: &Permutation, c: &PermClass) -> Result<ShadingGrid> {
    require_member(p, c)?;
    let slots: Vec<Slot> = p.slots().collect();
    let blocked = slots
        .into_par_iter()
        .filter(|&s| !c.admits(p, s))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(ShadingGrid {
        host: p.clone(),
        blocked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub length: usize,
    pub members: usize,
    pub simples: usize,
}

pub fn count_profile(c: &PermClass, max_len: usize) -> Vec<CountRow> {
    let mut rows: Vec<CountRow> = ClassLevels::new(c, max_len)
        .map(|level| CountRow {
            length: level[0].len(),
            members: level.len(),
            simples: level.par_iter().filter(|p| is_simple(p)).count(),
        })
        .collect();
    // Lengths past the end of a finite class still get a row.
    for length in rows.len() + 1..=max_len {
        rows.push(CountRow {
            length,
            members: 0,
            simples: 0,
        });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn av(s: &str) -> PermClass {
        PermClass::new(s.split(',').map(p)).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(avoids(&p("25173486"), &av("251364")));
        assert!(!avoids(&p("2531647"), &av("312")));
        assert!(!avoids(&p("1"), &av("1")));
        assert!(!avoids(&p("2413"), &av("1")));
    }

    #[test]
    fn basis_normalization() {
        let c = av("321,321654");
        assert_eq!(c.basis(), &[p("321")]);
        let c = av("2413,321,321");
        assert_eq!(c.basis(), &[p("321"), p("2413")]);
        assert!(matches!(PermClass::new(Vec::new()), Err(Error::EmptyBasis)));
        assert_eq!(c.to_string(), "Av(321, 2413)");
    }

    #[test]
    fn enumeration_examples() {
        let inc: Vec<_> = enumerate_class(&av("21"), 5).collect();
        assert_eq!(inc.len(), 5);
        assert!(inc.iter().all(Permutation::is_increasing));

        let counts: Vec<usize> = ClassLevels::new(&av("231"), 5).map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42]);

        let four = ClassLevels::new(&av("2413"), 4).last().unwrap();
        assert_eq!(four.len(), 23);

        assert_eq!(enumerate_class(&av("1"), 4).count(), 0);
    }

    #[test]
    fn simple_examples() {
        let mut small = enumerate_simples(&av("231"), 10);
        small.sort();
        assert_eq!(small, vec![p("1"), p("12"), p("21")]);
        assert!(enumerate_simples(&av("1"), 6).is_empty());
        let mut all = enumerate_simples(&av("123456"), 4);
        all.sort();
        assert_eq!(all, vec![p("1"), p("12"), p("21"), p("2413"), p("3142")]);
    }

    #[test]
    fn shading_examples() {
        let g = shading_grid(&p("1"), &av("12")).unwrap();
        assert_eq!(
            g.blocked,
            BTreeSet::from([Slot::new(1, 1), Slot::new(2, 2)])
        );
        assert_eq!(g.render(), ". #\n o\n# .\n");

        let g = shading_grid(&p("2413"), &av("1234567")).unwrap();
        assert!(g.blocked.is_empty());

        assert!(matches!(
            shading_grid(&p("312"), &av("312")),
            Err(Error::NotAMember { .. })
        ));
    }

    #[test]
    fn count_profile_examples() {
        let simples: Vec<_> = count_profile(&av("231"), 4)
            .iter()
            .map(|r| r.simples)
            .collect();
        assert_eq!(simples, vec![1, 2, 0, 0]);
        let members: Vec<_> = count_profile(&av("21"), 3)
            .iter()
            .map(|r| r.members)
            .collect();
        assert_eq!(members, vec![1, 1, 1]);
        let members: Vec<_> = count_profile(&av("2413"), 5)
            .iter()
            .map(|r| r.members)
            .collect();
        assert_eq!(members, vec![1, 2, 6, 23, 103]);
        let rows = count_profile(&av("1"), 2);
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.members == 0));
    }

    #[test]
    fn one_point_extensions_stay_in_class() {
        let c = av("321");
        let exts = one_point_extensions(&p("21"), &c);
        assert!(exts.iter().all(|e| c.contains(e) && e.len() == 3));
        // 132, 213, 231, 312 contain 21 and avoid 321; 321 does not.
        assert_eq!(exts, vec![p("132"), p("213"), p("231"), p("312")]);
    }
}
