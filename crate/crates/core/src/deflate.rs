//! Embedding members into indecomposables, interval-breaking extensions,
//! extension to simple permutations and the principal-class classifier.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::class::{enumerate_class, one_point_extensions, require_member, PermClass};
use crate::decomposition::{
    is_indecomposable, is_simple, longest_maximal_interval, sd_measure, sum_components,
    IntervalSpan,
};
use crate::error::{Error, Result};
use crate::perm::{bonds, BondKind, Permutation, Slot, SumKind, Symmetry};
use crate::witness::{bond_certificate, bundled_corpus, BondCertificate};

const EXCLUDED: [&str; 7] = ["1", "12", "21", "132", "213", "231", "312"];

/// Patterns for which `Av(π)` members cannot in general be embedded into an
/// indecomposable member.
pub fn is_excluded(pi: &Permutation) -> bool {
    pi.len() <= 3
        && EXCLUDED
            .iter()
            .any(|e| e.parse::<Permutation>().unwrap() == *pi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingCase {
    AlreadyIndecomposable,
    CornerPoint,
    Outer2413,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingTrace {
    /// `ω, ω̂, ω̄, ζ` for the corner case, `ω, ζ` for the outer frame and
    /// `ω` alone when nothing had to be done. Each stage contains the last.
    pub stages: Vec<Permutation>,
    pub case_used: EmbeddingCase,
    /// Symmetry moving a corner point of `π` to the lower left; the
    /// construction ran on the images and was mapped back.
    pub symmetry: Symmetry,
}

impl EmbeddingTrace {
    pub fn result(&self) -> &Permutation {
        self.stages.last().expect("trace is never empty")
    }
}

/// Embeds a member `w` of `Av(pi)` into an indecomposable member.
pub fn embed_indecomposable(w: &Permutation, pi: &Permutation) -> Result<EmbeddingTrace> {
    if is_excluded(pi) {
        return Err(Error::ExcludedPattern(pi.clone()));
    }
    let class = PermClass::principal(pi.clone());
    require_member(w, &class)?;
    if is_indecomposable(w) {
        return Ok(EmbeddingTrace {
            stages: vec![w.clone()],
            case_used: EmbeddingCase::AlreadyIndecomposable,
            symmetry: Symmetry::Identity,
        });
    }

    let n = pi.len();
    let corner = [
        (pi.at(1) == 1, Symmetry::Identity),
        (pi.at(n) == n, Symmetry::Rotate180),
        (pi.at(1) == n, Symmetry::Complement),
        (pi.at(n) == 1, Symmetry::Reverse),
    ]
    .into_iter()
    .find_map(|(hit, f)| hit.then_some(f));

    let trace = match corner {
        Some(f) => {
            let back = f.inverse();
            let stages = corner_stages(&f.apply(w));
            EmbeddingTrace {
                stages: stages.iter().map(|s| back.apply(s)).collect(),
                case_used: EmbeddingCase::CornerPoint,
                symmetry: f,
            }
        }
        None => EmbeddingTrace {
            stages: vec![w.clone(), outer_frame(w, pi)],
            case_used: EmbeddingCase::Outer2413,
            symmetry: Symmetry::Identity,
        },
    };

    let zeta = trace.result();
    if !is_indecomposable(zeta) || !class.contains(zeta) {
        return Err(Error::InvariantViolated(format!(
            "embedding of {w} produced {zeta}, which is not an indecomposable member of {class}"
        )));
    }
    for pair in trace.stages.windows(2) {
        if crate::perm::contains(&pair[0], &pair[1]).is_none() {
            return Err(Error::InvariantViolated(format!(
                "embedding stage {} does not contain {}",
                pair[1], pair[0]
            )));
        }
    }
    Ok(trace)
}

/// `ω, ω ⊖ 1, ω̄, ζ` for a pattern starting with its minimum.
fn corner_stages(w: &Permutation) -> Vec<Permutation> {
    let one = Permutation::identity(1);
    let hat = crate::perm::sum(w, &one, SumKind::Skew);
    let comps: Vec<Permutation> = sum_components(&hat, SumKind::Skew)
        .into_iter()
        .map(|c| {
            if c.len() == 1 {
                Permutation::identity(2)
            } else {
                c
            }
        })
        .collect();
    let k = comps.len();
    let skeleton = Permutation::new((1..=k as u16).rev().collect()).expect("decreasing skeleton");
    let bar = crate::perm::inflate(&skeleton, &comps).expect("arity matches");

    // Doubled coordinates: existing entries sit on even points, links on odd
    // ones just before / just below their neighbours.
    let mut points: Vec<(usize, usize)> = bar
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (2 * (i + 1), 2 * v as usize))
        .collect();
    let mut end = 0;
    let mut spans = Vec::with_capacity(k);
    for c in &comps {
        spans.push((end + 1, end + c.len()));
        end += c.len();
    }
    for pair in spans.windows(2) {
        let final_pos = pair[0].1;
        let top = bar.values()[pair[1].0 - 1..pair[1].1]
            .iter()
            .max()
            .copied()
            .unwrap() as usize;
        points.push((2 * final_pos - 1, 2 * top - 1));
    }
    points.sort_unstable();
    let ys: Vec<usize> = points.iter().map(|&(_, y)| y).collect();
    let zeta = Permutation::standardize(&ys);
    vec![w.clone(), hat, bar, zeta]
}

/// Surrounds `w` with four outer points forming a 2413, or a 3142 when the
/// outer points of `pi` already form a 2413.
fn outer_frame(w: &Permutation, pi: &Permutation) -> Permutation {
    let m = w.len() as u16;
    let inner = w.values().iter().map(|&v| v + 2);
    let (first, second, third, fourth) = if outer_pattern(pi) == "2413".parse().unwrap() {
        (m + 3, 1, m + 4, 2)
    } else {
        (2, m + 4, 1, m + 3)
    };
    let mut out = vec![first, second];
    out.extend(inner);
    out.extend([third, fourth]);
    Permutation::new(out).expect("frame is a permutation")
}

/// The pattern of the leftmost, rightmost, lowest and highest entries.
fn outer_pattern(pi: &Permutation) -> Permutation {
    let n = pi.len();
    let mut positions = vec![1, n, pi.position_of(1), pi.position_of(n)];
    positions.sort_unstable();
    positions.dedup();
    let vals: Vec<usize> = positions.iter().map(|&p| pi.at(p)).collect();
    Permutation::standardize(&vals)
}

/// A one-point extension that cuts a maximal interval without absorbing the
/// new entry into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BreakReport {
    pub interval: IntervalSpan,
    pub slot: Slot,
    pub extension: Permutation,
}

/// Slots whose entry cuts `alpha` while `alpha` plus the entry is still not
/// an interval of the extension.
pub fn cut_slots(p: &Permutation, alpha: IntervalSpan) -> Vec<Slot> {
    let strictly_inside_pos = |s: usize| alpha.pos_lo < s && s <= alpha.pos_hi;
    let strictly_inside_val = |s: usize| alpha.val_lo < s && s <= alpha.val_hi;
    let touches_pos = |s: usize| alpha.pos_lo <= s && s <= alpha.pos_hi + 1;
    let touches_val = |s: usize| alpha.val_lo <= s && s <= alpha.val_hi + 1;
    p.slots()
        .filter(|s| {
            let cuts = strictly_inside_pos(s.pos_slot) || strictly_inside_val(s.val_slot);
            let joins = touches_pos(s.pos_slot) && touches_val(s.val_slot);
            cuts && !joins
        })
        .collect()
}

/// Every qualifying cut of the longest maximal interval that stays in `c`.
/// Indecomposability and the drop in SD measure of each extension are
/// checked, not assumed.
pub fn breaking_extensions(w: &Permutation, c: &PermClass) -> Result<Vec<BreakReport>> {
    require_member(w, c)?;
    let alpha = longest_maximal_interval(w)?.ok_or_else(|| Error::AlreadySimple(w.clone()))?;
    if alpha.len() == 1 {
        return Err(Error::AlreadySimple(w.clone()));
    }
    let sd = sd_measure(w)?;
    let mut out = Vec::new();
    for slot in cut_slots(w, alpha) {
        let ext = w.insert_unchecked(slot);
        if !c.admits_extension(&ext, slot.pos_slot - 1) {
            continue;
        }
        if !is_indecomposable(&ext) {
            return Err(Error::InvariantViolated(format!(
                "cutting {alpha} of {w} at {slot} gave decomposable {ext}"
            )));
        }
        let sd_ext = sd_measure(&ext)?;
        if sd_ext >= sd {
            return Err(Error::InvariantViolated(format!(
                "cutting {alpha} of {w} at {slot} did not lower the SD measure ({sd} -> {sd_ext})"
            )));
        }
        out.push(BreakReport {
            interval: alpha,
            slot,
            extension: ext,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMethod {
    /// Repeated interval breaking from an indecomposable start.
    Greedy,
    /// Breadth-first search over all one-point extensions in the class.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimpleExtension {
    pub simple: Permutation,
    pub embedding: Option<EmbeddingTrace>,
    /// Breaking steps of a greedy run; empty for exhaustive results.
    pub chain: Vec<BreakReport>,
    pub method: ExtensionMethod,
}

/// Finds a simple member of `c` of length at most `max_len` containing `w`.
///
/// Greedy interval breaking runs first. If it gets stuck, a breadth-first
/// search over every one-point extension decides the question, so `None`
/// means no simple member of `c` within the bound contains `w`.
pub fn extend_to_simple(
    w: &Permutation,
    c: &PermClass,
    max_len: usize,
) -> Result<Option<SimpleExtension>> {
    require_member(w, c)?;
    if max_len < w.len() {
        return Err(Error::BoundTooSmall {
            bound: max_len,
            len: w.len(),
        });
    }
    if is_simple(w) {
        return Ok(Some(SimpleExtension {
            simple: w.clone(),
            embedding: None,
            chain: Vec::new(),
            method: ExtensionMethod::Greedy,
        }));
    }
    if let Some(found) = greedy_extension(w, c, max_len)? {
        return Ok(Some(found));
    }
    Ok(
        exhaustive_extension(w, c, max_len).map(|simple| SimpleExtension {
            simple,
            embedding: None,
            chain: Vec::new(),
            method: ExtensionMethod::Exhaustive,
        }),
    )
}

fn greedy_extension(
    w: &Permutation,
    c: &PermClass,
    max_len: usize,
) -> Result<Option<SimpleExtension>> {
    let mut cur = w.clone();
    let mut embedding = None;
    if !is_indecomposable(&cur) {
        let Some(pi) = c.principal_pattern().filter(|pi| !is_excluded(pi)) else {
            return Ok(None);
        };
        let trace = embed_indecomposable(&cur, pi)?;
        if trace.result().len() > max_len {
            return Ok(None);
        }
        cur = trace.result().clone();
        embedding = Some(trace);
    }
    let mut chain = Vec::new();
    while !is_simple(&cur) {
        if cur.len() >= max_len {
            return Ok(None);
        }
        let Some(step) = breaking_extensions(&cur, c)?.into_iter().next() else {
            return Ok(None);
        };
        cur = step.extension.clone();
        chain.push(step);
    }
    Ok(Some(SimpleExtension {
        simple: cur,
        embedding,
        chain,
        method: ExtensionMethod::Greedy,
    }))
}

/// Least simple member among the shortest simple extensions of `w`.
fn exhaustive_extension(w: &Permutation, c: &PermClass, max_len: usize) -> Option<Permutation> {
    let mut level = vec![w.clone()];
    for _ in w.len()..max_len {
        let mut next: Vec<Permutation> = level
            .par_iter()
            .flat_map_iter(|p| one_point_extensions(p, c))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        if let Some(s) = next.par_iter().filter(|p| is_simple(p)).min() {
            return Some(s.clone());
        }
        if next.is_empty() {
            return None;
        }
        level = next;
    }
    None
}

fn one_plus_rho(pi: &Permutation) -> Option<Permutation> {
    if pi.len() < 2 || pi.at(1) != 1 {
        return None;
    }
    let rho = Permutation::standardize(&pi.values()[1..]);
    (sum_components(&rho, SumKind::Direct).len() == 1).then_some(rho)
}

/// For `π = 1 ⊕ ρ` with `ρ` sum-indecomposable and `|π| ≥ 4`: whether some
/// entry right of the value 2 is smaller than the first entry of `ρ`.
pub fn condition_ddagger(pi: &Permutation) -> Result<bool> {
    if pi.len() < 4 || one_plus_rho(pi).is_none() {
        return Err(Error::NotOnePlusRho(pi.clone()));
    }
    let first = pi.at(2);
    let after_two = pi.position_of(2);
    Ok(pi.values()[after_two..]
        .iter()
        .any(|&v| (v as usize) < first))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    NonDeflatable,
    Deflatable,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::NonDeflatable => "non_deflatable",
            Status::Deflatable => "deflatable",
            Status::Unknown => "unknown",
        })
    }
}

/// The hypothesis that decided a verdict, in classifier priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// `|π| = 1`: the class is empty.
    Degenerate,
    /// `π ∈ {12, 21}`: the simples are `1` and one of `12`, `21`.
    Base12,
    /// `π` is 231 up to symmetry: the simples are `1, 12, 21`.
    Base231,
    /// At least three sum components.
    ThreeSum,
    /// `λ ⊕ ρ` with both parts of length at least 2.
    TwoSum,
    /// `1 ⊕ ρ`, `ρ` starts with an ascent and lacks a bond of some kind.
    AscentMissingBond,
    /// `1 ⊕ ρ` with condition ‡, `ρ` starts with a descent, no increasing bond.
    DaggerNoIncreasingBond,
    /// `1n⋯2` with no increasing bond in `ρ`.
    OneNTwoNoIncreasingBond,
    /// `1 ⊕ ρ` with condition ‡, `ρ` starts with a descent, no decreasing bond.
    DaggerNoDecreasingBond,
    /// `1n⋯2` with no decreasing bond.
    OneNTwoNoDecreasingBond,
    /// `1z⋯2` with `z ∉ {3, |π|}`.
    OneZTwo,
    /// `π = 2413`.
    Alternation2413,
    /// `π` is the basis of a known witness row.
    WitnessTable,
    Unknown,
}

impl Rule {
    pub const PRIORITY: [Rule; 13] = [
        Rule::Degenerate,
        Rule::Base12,
        Rule::Base231,
        Rule::ThreeSum,
        Rule::TwoSum,
        Rule::AscentMissingBond,
        Rule::DaggerNoIncreasingBond,
        Rule::OneNTwoNoIncreasingBond,
        Rule::DaggerNoDecreasingBond,
        Rule::OneNTwoNoDecreasingBond,
        Rule::OneZTwo,
        Rule::Alternation2413,
        Rule::WitnessTable,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::Degenerate => "degenerate",
            Rule::Base12 => "base-12",
            Rule::Base231 => "base-231",
            Rule::ThreeSum => "three-sum",
            Rule::TwoSum => "two-sum",
            Rule::AscentMissingBond => "ascent-missing-bond",
            Rule::DaggerNoIncreasingBond => "dagger-no-increasing-bond",
            Rule::OneNTwoNoIncreasingBond => "1n..2-no-increasing-bond",
            Rule::DaggerNoDecreasingBond => "dagger-no-decreasing-bond",
            Rule::OneNTwoNoDecreasingBond => "1n..2-no-decreasing-bond",
            Rule::OneZTwo => "1z..2",
            Rule::Alternation2413 => "2413",
            Rule::WitnessTable => "witness-table",
            Rule::Unknown => "unknown",
        }
    }

    pub fn status(self) -> Status {
        match self {
            Rule::Degenerate | Rule::Base12 | Rule::Base231 | Rule::WitnessTable => {
                Status::Deflatable
            }
            Rule::Unknown => Status::Unknown,
            _ => Status::NonDeflatable,
        }
    }

    /// Whether the rule's hypotheses hold for `pi` exactly as given.
    fn matches(self, pi: &Permutation) -> bool {
        let n = pi.len();
        let has = |p: &Permutation, kind: BondKind| bonds(p).iter().any(|b| b.kind == kind);
        match self {
            Rule::Degenerate => n == 1,
            Rule::Base12 => n == 2,
            Rule::Base231 => *pi == "231".parse().unwrap(),
            Rule::ThreeSum => sum_components(pi, SumKind::Direct).len() >= 3,
            Rule::TwoSum => {
                let comps = sum_components(pi, SumKind::Direct);
                comps.len() == 2 && comps.iter().all(|c| c.len() >= 2)
            }
            Rule::AscentMissingBond => one_plus_rho(pi).is_some_and(|rho| {
                rho.len() >= 2
                    && rho.at(1) < rho.at(2)
                    && (!has(&rho, BondKind::Increasing) || !has(&rho, BondKind::Decreasing))
            }),
            Rule::DaggerNoIncreasingBond | Rule::DaggerNoDecreasingBond => {
                let kind = if self == Rule::DaggerNoIncreasingBond {
                    BondKind::Increasing
                } else {
                    BondKind::Decreasing
                };
                n >= 4
                    && one_plus_rho(pi).is_some_and(|rho| {
                        rho.at(1) > rho.at(2)
                            && !has(&rho, kind)
                            && condition_ddagger(pi).unwrap_or(false)
                    })
            }
            Rule::OneNTwoNoIncreasingBond => {
                is_one_n_two(pi)
                    && one_plus_rho(pi).is_some_and(|rho| !has(&rho, BondKind::Increasing))
            }
            Rule::OneNTwoNoDecreasingBond => is_one_n_two(pi) && !has(pi, BondKind::Decreasing),
            Rule::OneZTwo => {
                n >= 4 && pi.at(1) == 1 && pi.at(n) == 2 && pi.at(2) != 3 && pi.at(2) != n
            }
            Rule::Alternation2413 => *pi == "2413".parse().unwrap(),
            Rule::WitnessTable => bundled_corpus()
                .iter()
                .any(|row| row.basis.len() == 1 && row.basis[0] == *pi),
            Rule::Unknown => true,
        }
    }
}

fn is_one_n_two(pi: &Permutation) -> bool {
    let n = pi.len();
    n >= 4 && pi.at(1) == 1 && pi.at(2) == n && pi.at(n) == 2
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    /// The symmetry `f` such that `f(π)` satisfies the rule.
    pub symmetry_used: Symmetry,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.status, self.rule)
    }
}

/// Decides deflatability of `Av(pi)` from known results, up to symmetry.
pub fn classify_principal(pi: &Permutation) -> Verdict {
    let images: Vec<(Symmetry, Permutation)> =
        Symmetry::ALL.iter().map(|&f| (f, f.apply(pi))).collect();
    for rule in Rule::PRIORITY {
        if let Some((f, _)) = images.iter().find(|(_, img)| rule.matches(img)) {
            return Verdict {
                status: rule.status(),
                rule,
                symmetry_used: *f,
            };
        }
    }
    Verdict {
        status: Status::Unknown,
        rule: Rule::Unknown,
        symmetry_used: Symmetry::Identity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UncoveredMember {
    pub perm: Permutation,
    pub certificate: Option<BondCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalReport {
    pub cover_len: usize,
    pub search_len: usize,
    pub members_checked: usize,
    /// Members with no simple extension of length at most `search_len`.
    pub uncovered: Vec<UncoveredMember>,
}

impl EmpiricalReport {
    pub fn covered(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Bounded check of whether every member of length at most `cover_len`
/// lies in a simple member of length at most `search_len`.
pub fn empirical_deflatability(
    c: &PermClass,
    cover_len: usize,
    search_len: usize,
) -> Result<EmpiricalReport> {
    if search_len < cover_len {
        return Err(Error::BoundTooSmall {
            bound: search_len,
            len: cover_len,
        });
    }
    let members: Vec<Permutation> = enumerate_class(c, cover_len).collect();
    let outcomes: Vec<Result<Option<UncoveredMember>>> = members
        .par_iter()
        .map(|w| {
            if extend_to_simple(w, c, search_len)?.is_some() {
                return Ok(None);
            }
            Ok(Some(UncoveredMember {
                perm: w.clone(),
                certificate: bond_certificate(w, c)?,
            }))
        })
        .collect();
    let mut uncovered = Vec::new();
    for outcome in outcomes {
        if let Some(u) = outcome? {
            uncovered.push(u);
        }
    }
    Ok(EmpiricalReport {
        cover_len,
        search_len,
        members_checked: members.len(),
        uncovered,
    })
}
