//! Bond certificates, witness search, parallel alternations, the inflation
//! family around `Av(251364)` and the bundled witness corpus.
//!
//! A bond certificate shows that a member extends to no simple member of
//! its class: if every slot in the two strips crossing a bond is blocked
//! (apart from the four squares next to the bond), any extension keeps an
//! interval around the bond.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::class::{require_member, shading_grid, ClassLevels, PermClass, ShadingGrid};
use crate::decomposition::IntervalSpan;
use crate::deflate::{cut_slots, extend_to_simple};
use crate::error::{Error, Result};
use crate::perm::{bonds, contains, inflate, parse_permutation, Bond, Permutation, Slot};

/// Witness rows with a witness no longer than this also get an exhaustive
/// check for simple extensions two entries longer.
pub const CROSS_CHECK_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BondCertificate {
    pub bond: Bond,
    pub checked_slots: BTreeSet<Slot>,
    pub grid: ShadingGrid,
}

/// Slots that must be blocked for `bond` to certify a length-`n` host: the
/// column between the bond entries and the row between their values, less
/// the crossing cell and the four cells next to it. Always `2(n+1) − 6`
/// slots.
pub fn strip_slots(bond: &Bond, n: usize) -> BTreeSet<Slot> {
    let i = bond.left_pos;
    let w = bond.low_value;
    let column = (1..=n + 1)
        .filter(|v| !(w..=w + 2).contains(v))
        .map(|v| Slot::new(i + 1, v));
    let row = (1..=n + 1)
        .filter(|p| !(i..=i + 2).contains(p))
        .map(|p| Slot::new(p, w + 1));
    column.chain(row).collect()
}

/// The first bond, left to right, whose strips are fully blocked. A bond
/// needs a third entry outside it to certify anything.
pub fn bond_certificate(p: &Permutation, c: &PermClass) -> Result<Option<BondCertificate>> {
    require_member(p, c)?;
    let n = p.len();
    if n < 3 {
        return Ok(None);
    }
    for bond in bonds(p) {
        let strips = strip_slots(&bond, n);
        let all_blocked = strips.par_iter().all(|&s| !c.admits(p, s));
        if all_blocked {
            let grid = shading_grid(p, c)?;
            return Ok(Some(BondCertificate {
                bond,
                checked_slots: strips,
                grid,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub class_basis: Vec<Permutation>,
    pub witness: Permutation,
    pub certificate: BondCertificate,
    /// Length up to which an exhaustive search found no simple extension.
    pub cross_check_bound: usize,
}

/// Certified members of `c` of length at most `max_len`, at most `limit` of
/// them, in enumeration order.
pub fn find_witnesses(c: &PermClass, max_len: usize, limit: usize) -> Result<Vec<WitnessReport>> {
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for level in ClassLevels::new(c, max_len) {
        let certs: Vec<Result<Option<BondCertificate>>> =
            level.par_iter().map(|p| bond_certificate(p, c)).collect();
        for (p, cert) in level.iter().zip(certs) {
            let Some(certificate) = cert? else { continue };
            let bound = max_len + 2;
            if let Some(ext) = extend_to_simple(p, c, bound)? {
                return Err(Error::InvariantViolated(format!(
                    "certified {p} extends to simple {} in {c}",
                    ext.simple
                )));
            }
            out.push(WitnessReport {
                class_basis: c.basis().to_vec(),
                witness: p.clone(),
                certificate,
                cross_check_bound: bound,
            });
            if out.len() == limit {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// `2 4 6 … n 1 3 5 … n−1`.
pub fn parallel_alternation(n: usize) -> Result<Permutation> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::BadAlternationLength(n));
    }
    let evens = (1..=n / 2).map(|k| 2 * k as u16);
    let odds = (1..=n / 2).map(|k| 2 * k as u16 - 1);
    Permutation::new(evens.chain(odds).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub theta: Permutation,
    pub pi_star: Permutation,
    pub omega_star: Permutation,
    pub verified: bool,
}

/// `π* = 251364[1,θ,1,1,1,1]` and `ω* = 25173486[1,θ,1,θ,1,1,1,1]`.
///
/// `verified` holds when `ω*` avoids `π*` and every extension of `ω*`
/// that breaks the two-entry interval formed by its values 3 and 4 (taken
/// relative to the skeleton) contains `π*`.
pub fn inflation_family(theta: &Permutation) -> FamilyReport {
    let one = Permutation::identity(1);
    let pi_skel: Permutation = "251364".parse().unwrap();
    let omega_skel: Permutation = "25173486".parse().unwrap();
    let mut pi_parts = vec![one.clone(); 6];
    pi_parts[1] = theta.clone();
    let mut omega_parts = vec![one; 8];
    omega_parts[1] = theta.clone();
    omega_parts[3] = theta.clone();
    let pi_star = inflate(&pi_skel, &pi_parts).expect("arity 6");
    let omega_star = inflate(&omega_skel, &omega_parts).expect("arity 8");

    // Skeleton positions 5 and 6 hold the bond; with two θ blocks before
    // them they land at 2|θ| + 3 and 2|θ| + 4.
    let t = theta.len();
    let lo = 2 * t + 3;
    let verified = contains(&pi_star, &omega_star).is_none()
        && IntervalSpan::at(&omega_star, lo, lo + 1).is_ok_and(|bond| {
            let class = PermClass::principal(pi_star.clone());
            cut_slots(&omega_star, bond)
                .par_iter()
                .all(|&s| !class.admits(&omega_star, s))
        });
    FamilyReport {
        theta: theta.clone(),
        pi_star,
        omega_star,
        verified,
    }
}

/// A class together with a claimed witness of deflatability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub basis: Vec<Permutation>,
    pub witness: Permutation,
}

/// Parses `basis | witness` lines. Basis elements are comma-separated;
/// blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<WitnessRow>> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (basis, witness) = line.split_once('|').ok_or_else(|| Error::Parse {
            token: line.to_string(),
            reason: "expected `basis | witness`".into(),
        })?;
        let basis = basis
            .split(',')
            .map(parse_permutation)
            .collect::<Result<Vec<_>>>()?;
        rows.push(WitnessRow {
            basis,
            witness: parse_permutation(witness)?,
        });
    }
    Ok(rows)
}

static BUNDLED_CORPUS: OnceLock<Vec<WitnessRow>> = OnceLock::new();

/// The bundled table of ten sporadic deflatable classes plus four parallel
/// alternations of lengths 8 to 14, each with its witness.
pub fn bundled_corpus() -> &'static [WitnessRow] {
    BUNDLED_CORPUS.get_or_init(|| {
        parse_corpus(include_str!("../data/witnesses.txt")).expect("bundled corpus parses")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheck {
    /// No simple extension up to `bound`.
    Passed { bound: usize },
    /// A simple extension exists, contradicting the certificate.
    Failed { bound: usize },
    /// Witness longer than [`CROSS_CHECK_CAP`].
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub row: WitnessRow,
    pub member: bool,
    pub certificate: Option<Bond>,
    pub cross_check: CrossCheck,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.member
            && self.certificate.is_some()
            && !matches!(self.cross_check, CrossCheck::Failed { .. })
    }
}

/// Checks membership, a bond certificate and, for short witnesses, the
/// absence of simple extensions two entries longer.
pub fn verify_table(rows: &[WitnessRow]) -> Result<Vec<RowCheck>> {
    rows.iter().map(verify_row).collect()
}

fn verify_row(row: &WitnessRow) -> Result<RowCheck> {
    let class = PermClass::new(row.basis.iter().cloned())?;
    let w = &row.witness;
    if !class.contains(w) {
        return Ok(RowCheck {
            row: row.clone(),
            member: false,
            certificate: None,
            cross_check: CrossCheck::Skipped,
        });
    }
    let certificate = bond_certificate(w, &class)?.map(|c| c.bond);
    let cross_check = if w.len() <= CROSS_CHECK_CAP {
        let bound = w.len() + 2;
        match extend_to_simple(w, &class, bound)? {
            None => CrossCheck::Passed { bound },
            Some(_) => CrossCheck::Failed { bound },
        }
    } else {
        CrossCheck::Skipped
    };
    Ok(RowCheck {
        row: row.clone(),
        member: true,
        certificate,
        cross_check,
    })
}

pub fn verify_bundled_table() -> Result<Vec<RowCheck>> {
    verify_table(bundled_corpus())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::BondKind;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn strip_geometry() {
        let bond = Bond {
            left_pos: 5,
            kind: BondKind::Increasing,
            low_value: 3,
        };
        let strips = strip_slots(&bond, 8);
        assert_eq!(strips.len(), 2 * 9 - 6);
        assert!(!strips.contains(&Slot::new(6, 4)));
        assert!(strips.contains(&Slot::new(6, 1)));
        assert!(!strips.contains(&Slot::new(6, 5)));
        assert!(strips.contains(&Slot::new(1, 4)));
        assert!(!strips.contains(&Slot::new(7, 4)));
    }

    #[test]
    fn certificate_examples() {
        let c = PermClass::principal(p("251364"));
        let cert = bond_certificate(&p("25173486"), &c).unwrap().unwrap();
        assert_eq!(cert.bond.left_pos, 5);
        assert_eq!(cert.bond.low_value, 3);
        assert!(cert.checked_slots.iter().all(|s| cert.grid.is_blocked(*s)));

        assert!(bond_certificate(&p("2413"), &c).unwrap().is_none());
        assert!(bond_certificate(&p("251364"), &c).is_err());

        let c = PermClass::principal(p("134652"));
        let w = p("6 8 9 3 4 1 10 14 7 13 5 12 11 2");
        assert!(bond_certificate(&w, &c).unwrap().is_some());
    }

    #[test]
    fn witness_search_examples() {
        let found = find_witnesses(&PermClass::principal(p("251364")), 8, 1).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].witness.len(), 8);
        assert!(find_witnesses(&PermClass::principal(p("321")), 8, 1)
            .unwrap()
            .is_empty());
        assert!(find_witnesses(&PermClass::principal(p("1")), 5, 3)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn alternation_examples() {
        assert_eq!(parallel_alternation(4).unwrap(), p("2413"));
        assert_eq!(parallel_alternation(6).unwrap(), p("246135"));
        assert_eq!(parallel_alternation(8).unwrap(), p("24681357"));
        assert!(parallel_alternation(5).is_err());
        assert!(parallel_alternation(2).is_err());
    }

    #[test]
    fn family_examples() {
        let r = inflation_family(&p("1"));
        assert_eq!(
            (r.pi_star, r.omega_star, r.verified),
            (p("251364"), p("25173486"), true)
        );
        let r = inflation_family(&p("12"));
        assert_eq!(r.pi_star, p("2561374"));
        assert_eq!(r.omega_star.len(), 10);
        assert!(r.verified);
        let r = inflation_family(&p("21"));
        assert_eq!(r.pi_star, p("2651374"));
        assert!(r.verified);
    }

    #[test]
    fn corpus_parsing() {
        let rows = bundled_corpus();
        assert_eq!(rows.len(), 14);
        assert_eq!(rows[3].basis, vec![p("251364")]);
        assert_eq!(rows[3].witness, p("25173486"));
        assert_eq!(rows[13].witness.len(), 35);
        assert!(parse_corpus("# nothing\n\n").unwrap().is_empty());
        assert!(parse_corpus("123 456").is_err());
        let rows = parse_corpus("321, 2413 | 1").unwrap();
        assert_eq!(rows[0].basis.len(), 2);
        assert!(verify_table(&[]).unwrap().is_empty());
    }
}
