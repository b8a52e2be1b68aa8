//! Generalised truncations: a verifier for candidate base families, a direct
//! check of the defining augmentation property, and two enumerators that
//! are tested against each other.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::finitary::FinitaryMatroid;
use crate::finite::{check_base_axioms_masks, FiniteMatroid};
use crate::set::{bits, submasks, ElementSet, Mask, SetFamily};
use crate::template::TemplateSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum Violation {
    /// The family is empty (`member = None`) or has a dependent member.
    #[serde(rename = "1")]
    Cond1 { member: Option<ElementSet> },
    /// `missing` is independent, exchanges evenly with `base`, and is absent.
    #[serde(rename = "2")]
    Cond2 { base: ElementSet, missing: ElementSet },
    /// `subset ⊊ base` spans `other`.
    #[serde(rename = "3")]
    Cond3 {
        base: ElementSet,
        other: ElementSet,
        subset: ElementSet,
    },
    /// `lower ⊆ upper` are independent, `lower` lies below a member, and no
    /// member sits between them or above `upper`.
    #[serde(rename = "4")]
    Cond4 { lower: ElementSet, upper: ElementSet },
    /// Ground sets differ.
    #[serde(rename = "I")]
    GtI,
    /// `set` is independent in the candidate but not in the matroid.
    #[serde(rename = "II")]
    GtII { set: ElementSet },
    /// `set` is a non-base independent set of the candidate, `set + element`
    /// is independent in the matroid but not in the candidate.
    #[serde(rename = "III")]
    GtIII { set: ElementSet, element: u64 },
}

impl Violation {
    pub fn label(&self) -> &'static str {
        match self {
            Violation::Cond1 { .. } => "1",
            Violation::Cond2 { .. } => "2",
            Violation::Cond3 { .. } => "3",
            Violation::Cond4 { .. } => "4",
            Violation::GtI => "I",
            Violation::GtII { .. } => "II",
            Violation::GtIII { .. } => "III",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cond1 { member: None } => write!(f, "(1) empty family"),
            Violation::Cond1 { member: Some(m) } => write!(f, "(1) member {m} is dependent"),
            Violation::Cond2 { base, missing } => write!(f, "(2) base={base} missing={missing}"),
            Violation::Cond3 { base, other, subset } => {
                write!(f, "(3) base={base} other={other} subset={subset}")
            }
            Violation::Cond4 { lower, upper } => write!(f, "(4) I={lower} J={upper}"),
            Violation::GtI => write!(f, "(I) ground sets differ"),
            Violation::GtII { set } => write!(f, "(II) set={set}"),
            Violation::GtIII { set, element } => write!(f, "(III) I={set} e={element}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "violation", rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MaskViolation {
    Cond1(Option<Mask>),
    Cond2 { base: Mask, missing: Mask },
    Cond3 { base: Mask, other: Mask, subset: Mask },
    Cond4 { lower: Mask, upper: Mask },
}

/// Rank, span and independence tables of one matroid, shared by all checks
/// of candidate families against it.
pub struct FamilyChecker<'a> {
    matroid: &'a FiniteMatroid,
    independent: Vec<bool>,
    span: Vec<Mask>,
    /// Independent sets grouped by size, ascending within each group.
    levels: Vec<Vec<Mask>>,
}

impl<'a> FamilyChecker<'a> {
    pub fn new(matroid: &'a FiniteMatroid) -> Result<Self> {
        bounds::ensure("ground set for family verification", matroid.len(), bounds::FAMILY_GROUND)?;
        let size = 1usize << matroid.len();
        let independent: Vec<bool> = (0..size as Mask).map(|s| matroid.is_independent_mask(s)).collect();
        let span = (0..size as Mask).map(|s| matroid.span_mask(s)).collect();
        let mut levels = vec![vec![]; matroid.full_rank() + 1];
        for s in (0..size as Mask).filter(|&s| independent[s as usize]) {
            levels[s.count_ones() as usize].push(s);
        }
        Ok(FamilyChecker {
            matroid,
            independent,
            span,
            levels,
        })
    }

    pub fn matroid(&self) -> &FiniteMatroid {
        self.matroid
    }

    /// Independent sets as masks, ascending.
    pub fn independent_masks(&self) -> Vec<Mask> {
        let mut all: Vec<Mask> = self.levels.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn level(&self, k: usize) -> &[Mask] {
        self.levels.get(k).map_or(&[], Vec::as_slice)
    }

    fn check(&self, family: &[Mask]) -> Option<MaskViolation> {
        if family.is_empty() {
            return Some(MaskViolation::Cond1(None));
        }
        if let Some(&b) = family.iter().find(|&&b| !self.independent[b as usize]) {
            return Some(MaskViolation::Cond1(Some(b)));
        }
        let mut member = vec![false; self.independent.len()];
        for &b in family {
            member[b as usize] = true;
        }
        // (2): in a finite matroid an even exchange keeps the size, so every
        // size present must come with its whole level
        let mut seen_sizes = BTreeSet::new();
        for &b in family {
            if seen_sizes.insert(b.count_ones()) {
                if let Some(&missing) = self.level(b.count_ones() as usize).iter().find(|&&s| !member[s as usize]) {
                    return Some(MaskViolation::Cond2 { base: b, missing });
                }
            }
        }
        // (3): a proper subset spanning B′ can be enlarged to some B − x
        for &b in family {
            for &other in family {
                for x in bits(b) {
                    let subset = b & !(1 << x);
                    if other & !self.span[subset as usize] == 0 {
                        return Some(MaskViolation::Cond3 { base: b, other, subset });
                    }
                }
            }
        }
        // (4): below[s] iff s lies inside some member
        let mut below = member.clone();
        for s in (0..below.len()).rev() {
            if below[s] {
                for x in bits(s as Mask) {
                    below[s & !(1 << x)] = true;
                }
            }
        }
        let mut between = vec![false; below.len()];
        for &upper in &self.independent_masks() {
            if below[upper as usize] {
                continue;
            }
            // between[i]: some member B′ with i ⊆ B′ ⊆ upper
            for i in submasks(upper) {
                between[i as usize] = member[i as usize]
                    || bits(upper & !i).any(|x| between[(i | 1 << x) as usize]);
            }
            if let Some(lower) = submasks(upper)
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .find(|&i| below[i as usize] && !between[i as usize])
            {
                return Some(MaskViolation::Cond4 { lower, upper });
            }
        }
        None
    }

    fn lift(&self, v: MaskViolation) -> Violation {
        let s = |m: Mask| self.matroid.set_of(m);
        match v {
            MaskViolation::Cond1(m) => Violation::Cond1 { member: m.map(s) },
            MaskViolation::Cond2 { base, missing } => Violation::Cond2 {
                base: s(base),
                missing: s(missing),
            },
            MaskViolation::Cond3 { base, other, subset } => Violation::Cond3 {
                base: s(base),
                other: s(other),
                subset: s(subset),
            },
            MaskViolation::Cond4 { lower, upper } => Violation::Cond4 {
                lower: s(lower),
                upper: s(upper),
            },
        }
    }

    pub fn verify_masks(&self, family: &[Mask]) -> Verdict {
        match self.check(family) {
            None => Verdict::Ok,
            Some(v) => Verdict::Violation(self.lift(v)),
        }
    }

    pub fn passes(&self, family: &[Mask]) -> bool {
        self.check(family).is_none()
    }

    pub fn family_masks(&self, family: &SetFamily) -> Result<Vec<Mask>> {
        if let Some(stray) = family.stray_member(&self.matroid.ground_set()) {
            return Err(Error::Precondition(format!("member {stray} is not within the ground set")));
        }
        family.iter().map(|b| self.matroid.mask_of(b)).collect()
    }
}

/// Checks the four conditions characterising base families of generalised
/// truncations, exhaustively.
pub fn verify_family(m: &FiniteMatroid, family: &SetFamily) -> Result<Verdict> {
    let checker = FamilyChecker::new(m)?;
    let masks = checker.family_masks(family)?;
    Ok(checker.verify_masks(&masks))
}

/// Checks the definition directly: same ground, `𝓘(N) ⊆ 𝓘(M)`, and the
/// augmentation property for every non-base `N`-independent set.
pub fn verify_is_gen_truncation(m: &FiniteMatroid, n: &FiniteMatroid) -> Result<Verdict> {
    if m.ground() != n.ground() {
        return Ok(Verdict::Violation(Violation::GtI));
    }
    bounds::ensure("ground set for family verification", m.len(), bounds::FAMILY_GROUND)?;
    let size = 1u64 << m.len();
    if let Some(s) = (0..size).find(|&s| n.is_independent_mask(s) && !m.is_independent_mask(s)) {
        return Ok(Verdict::Violation(Violation::GtII { set: m.set_of(s) }));
    }
    let rank_n = n.full_rank();
    for s in (0..size).filter(|&s| n.is_independent_mask(s) && (s.count_ones() as usize) < rank_n) {
        for e in bits(m.ground_mask() & !s) {
            let t = s | 1 << e;
            if m.is_independent_mask(t) && !n.is_independent_mask(t) {
                return Ok(Verdict::Violation(Violation::GtIII {
                    set: m.set_of(s),
                    element: m.ground()[e],
                }));
            }
        }
    }
    Ok(Verdict::Ok)
}

/// Re-checks a family violation against `m` and `family`.
pub fn replay_family_violation(m: &FiniteMatroid, family: &SetFamily, v: &Violation) -> Result<bool> {
    let indep = |s: &ElementSet| m.is_independent(s);
    Ok(match v {
        Violation::Cond1 { member: None } => family.is_empty(),
        Violation::Cond1 { member: Some(b) } => family.contains(b) && !indep(b)?,
        Violation::Cond2 { base, missing } => {
            family.contains(base)
                && indep(missing)?
                && base.difference(missing).len() == missing.difference(base).len()
                && !family.contains(missing)
        }
        Violation::Cond3 { base, other, subset } => {
            family.contains(base)
                && family.contains(other)
                && subset.is_subset(base)
                && subset != base
                && m.relative_rank(other, subset)? == 0
        }
        Violation::Cond4 { lower, upper } => {
            lower.is_subset(upper)
                && indep(upper)?
                && family.iter().any(|b| lower.is_subset(b))
                && !family
                    .iter()
                    .any(|b| (lower.is_subset(b) && b.is_subset(upper)) || upper.is_subset(b))
        }
        _ => false,
    })
}

/// Re-checks a definition violation against `m` and `n`.
pub fn replay_gen_truncation_violation(m: &FiniteMatroid, n: &FiniteMatroid, v: &Violation) -> Result<bool> {
    Ok(match v {
        Violation::GtI => m.ground() != n.ground(),
        Violation::GtII { set } => n.is_independent(set)? && !m.is_independent(set)?,
        Violation::GtIII { set, element } => {
            let mut bigger = set.clone();
            bigger.insert(*element);
            n.is_independent(set)?
                && set.len() < n.full_rank()
                && !set.contains(*element)
                && m.is_independent(&bigger)?
                && !n.is_independent(&bigger)?
        }
        _ => false,
    })
}

fn to_family(checker: &FamilyChecker<'_>, masks: &[Mask]) -> SetFamily {
    masks.iter().map(|&b| checker.matroid().set_of(b)).collect()
}

/// All generalised truncations, via the size levels of `𝓘(M)`. Every
/// non-empty union of levels is tried: single levels are kept when they pass
/// the verifier and the base axioms, and mixed unions are confirmed to fail.
pub fn enumerate_gen_truncations(m: &FiniteMatroid) -> Result<Vec<SetFamily>> {
    bounds::ensure("ground set for enumeration", m.len(), bounds::ENUMERATE_GROUND)?;
    let checker = FamilyChecker::new(m)?;
    let r = m.full_rank();
    let mut out = BTreeSet::new();
    for choice in 1u64..1 << (r + 1) {
        let family: Vec<Mask> = bits(choice).flat_map(|k| checker.level(k).iter().copied()).collect();
        if !checker.passes(&family) {
            continue;
        }
        if choice.count_ones() != 1 {
            return Err(Error::Internal(format!("mixed union of levels {choice:b} passed the verifier")));
        }
        if let Some(v) = check_base_axioms_masks(m.len(), &family) {
            return Err(Error::Internal(format!("verified family fails the base axioms: {v:?}")));
        }
        out.insert(to_family(&checker, &family));
    }
    Ok(out.into_iter().collect())
}

/// All subsets of `𝓘(M)` passing the verifier, by brute force over the power
/// set, sharded across threads.
pub fn enumerate_raw(m: &FiniteMatroid) -> Result<Vec<SetFamily>> {
    let checker = FamilyChecker::new(m)?;
    let independents = checker.independent_masks();
    bounds::ensure("independent sets for raw enumeration", independents.len(), bounds::RAW_INDEPENDENTS)?;
    let found: BTreeSet<SetFamily> = (0u64..1 << independents.len())
        .into_par_iter()
        .filter_map(|pick| {
            let family: Vec<Mask> = bits(pick).map(|i| independents[i]).collect();
            checker.passes(&family).then(|| to_family(&checker, &family))
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// Finitely many strong-equivalence classes, each named by a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationFamily {
    reps: Vec<TemplateSet>,
}

impl TruncationFamily {
    /// Certifies every representative and rejects equivalent pairs.
    pub fn new(mf: &FinitaryMatroid, reps: Vec<TemplateSet>) -> Result<Self> {
        for r in &reps {
            mf.certify(r)?;
        }
        for (a, x) in reps.iter().enumerate() {
            for (b, y) in reps.iter().enumerate().skip(a + 1) {
                if strongly_equivalent_templates(mf, x, y) {
                    return Err(Error::Precondition(format!(
                        "representatives {a} and {b} name the same equivalence class"
                    )));
                }
            }
        }
        Ok(TruncationFamily { reps })
    }

    pub fn reps(&self) -> &[TemplateSet] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

pub(crate) fn strongly_equivalent_templates(mf: &FinitaryMatroid, x: &TemplateSet, y: &TemplateSet) -> bool {
    let (a, b) = (mf.relative_rank_any(x, y), mf.relative_rank_any(y, x));
    a.is_finite() && a == b
}

pub(crate) fn almost_spans_templates(mf: &FinitaryMatroid, x: &TemplateSet, y: &TemplateSet) -> bool {
    mf.relative_rank_any(x, y).is_finite()
}

/// How a task `(I, J)` stands against a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum TaskStatus {
    /// No member of the family contains `I`.
    Vacuous,
    /// `witness` belongs to the class of representative `class` and satisfies
    /// `I ⊆ witness ⊆ J` (`between = true`) or `witness ⊇ J`.
    Met {
        class: usize,
        between: bool,
        witness: TemplateSet,
    },
    /// Some member contains `I`, but no member fits.
    Unmet,
}

impl TaskStatus {
    pub fn is_unmet(&self) -> bool {
        matches!(self, TaskStatus::Unmet)
    }
}

/// Evaluates one task exactly through the class search of the schema.
pub fn evaluate_task(mf: &FinitaryMatroid, family: &TruncationFamily, i: &TemplateSet, j: &TemplateSet) -> TaskStatus {
    if !family.reps.iter().any(|r| mf.class_meets_box(r, i, None).is_some()) {
        return TaskStatus::Vacuous;
    }
    for (class, r) in family.reps.iter().enumerate() {
        if let Some(witness) = mf.class_meets_box(r, i, Some(j)) {
            return TaskStatus::Met {
                class,
                between: true,
                witness,
            };
        }
        if let Some(witness) = mf.class_meets_box(r, j, None) {
            return TaskStatus::Met {
                class,
                between: false,
                witness,
            };
        }
    }
    TaskStatus::Unmet
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum FinitaryViolation {
    #[serde(rename = "1")]
    Empty,
    /// Representative `lower` is almost spanned by representative `upper`.
    #[serde(rename = "3")]
    Comparable { lower: usize, upper: usize },
}

impl fmt::Display for FinitaryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinitaryViolation::Empty => write!(f, "(1) empty family"),
            FinitaryViolation::Comparable { lower, upper } => {
                write!(f, "(3) representative {lower} is almost spanned by representative {upper}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitaryReport {
    pub violation: Option<FinitaryViolation>,
    pub tasks: Vec<TaskStatus>,
}

impl FinitaryReport {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none() && !self.tasks.iter().any(TaskStatus::is_unmet)
    }

    pub fn unmet(&self) -> Vec<usize> {
        (0..self.tasks.len()).filter(|&k| self.tasks[k].is_unmet()).collect()
    }
}

/// Conditions (1)–(3) on the representatives and condition (4) restricted to
/// the given tasks. Not a full verdict for an infinite matroid.
pub fn verify_family_finitary(
    mf: &FinitaryMatroid,
    family: &TruncationFamily,
    tasks: &[(TemplateSet, TemplateSet)],
    _fuel: usize,
) -> Result<FinitaryReport> {
    for (k, (i, j)) in tasks.iter().enumerate() {
        if !i.is_subset(j) {
            return Err(Error::Precondition(format!("task {k}: I is not contained in J")));
        }
        if !mf.is_independent(j) {
            return Err(Error::NotIndependent(format!("task {k}: J = {j}")));
        }
    }
    let violation = if family.is_empty() {
        Some(FinitaryViolation::Empty)
    } else {
        comparable_pair(mf, family.reps()).map(|(lower, upper)| FinitaryViolation::Comparable { lower, upper })
    };
    let tasks = tasks.iter().map(|(i, j)| evaluate_task(mf, family, i, j)).collect();
    Ok(FinitaryReport { violation, tasks })
}

/// The first ordered pair of distinct representatives with `reps[a] ⊴ reps[b]`.
pub fn comparable_pair(mf: &FinitaryMatroid, reps: &[TemplateSet]) -> Option<(usize, usize)> {
    (0..reps.len())
        .flat_map(|a| (0..reps.len()).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && almost_spans_templates(mf, &reps[a], &reps[b]))
}
