//! Finite-depth simulation of one successor step of the forcing construction
//! that grows a generalised truncation. Conditions are finite partial maps
//! `J ∖ I → {0, 1}`; one condition meeting the first `N` levels of every
//! dense set stands in for a generic filter.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finitary::{FinitaryMatroid, Rank};
use crate::gentrunc::{almost_spans_templates, comparable_pair, evaluate_task, TaskStatus, TruncationFamily};
use crate::set::{Element, ElementSet};
use crate::template::TemplateSet;

/// Longest seed prefix accepted; template periods grow as `2^(k+1)`.
pub const MAX_PREFIX: usize = 10;

/// An element of the poset `Fn(J ∖ I, 2)`; `q ≤ p` iff `q` extends `p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Condition(BTreeMap<Element, bool>);

impl Condition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, e: Element) -> Option<bool> {
        self.0.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> ElementSet {
        self.0.keys().copied().collect()
    }

    /// `p⁻¹(1)`.
    pub fn ones(&self) -> ElementSet {
        self.0.iter().filter(|(_, &v)| v).map(|(&e, _)| e).collect()
    }

    /// `p⁻¹(0)`.
    pub fn zeros(&self) -> ElementSet {
        self.0.iter().filter(|(_, &v)| !v).map(|(&e, _)| e).collect()
    }

    /// Whether `self ≤ other`, i.e. `self` agrees with `other` on its domain.
    pub fn extends(&self, other: &Condition) -> bool {
        other.0.iter().all(|(e, v)| self.0.get(e) == Some(v))
    }

    /// The assignments of `self` outside the domain of `base`.
    pub fn fragment_over(&self, base: &Condition) -> Condition {
        Condition(
            self.0
                .iter()
                .filter(|(e, _)| !base.0.contains_key(e))
                .map(|(&e, &v)| (e, v))
                .collect(),
        )
    }

    fn with(&self, elements: &ElementSet, value: bool) -> Condition {
        let mut q = self.clone();
        for e in elements.iter() {
            q.0.insert(e, value);
        }
        q
    }
}

impl FromIterator<(Element, bool)> for Condition {
    fn from_iter<T: IntoIterator<Item = (Element, bool)>>(iter: T) -> Self {
        Condition(iter.into_iter().collect())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (e, v)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}↦{}", u8::from(*v))?;
        }
        write!(f, "}}")
    }
}

/// A pair `(I, J)` of independent sets with `I ⊆ J` and `J ∖ I` infinite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Task {
    i: TemplateSet,
    j: TemplateSet,
}

impl Task {
    pub fn i(&self) -> &TemplateSet {
        &self.i
    }

    pub fn j(&self) -> &TemplateSet {
        &self.j
    }

    /// `J ∖ I`, the domain of the forcing poset.
    pub fn gap(&self) -> TemplateSet {
        self.j.difference(&self.i)
    }
}

pub fn make_task(mf: &FinitaryMatroid, i: TemplateSet, j: TemplateSet) -> Result<Task> {
    if !i.is_subset(&j) {
        return Err(Error::Precondition("I is not contained in J".into()));
    }
    if j.difference(&i).is_finite() {
        return Err(Error::Precondition("J ∖ I is finite".into()));
    }
    if !mf.is_independent(&j) {
        return Err(Error::NotIndependent(format!("J = {j}")));
    }
    Ok(Task { i, j })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClaimStatus {
    Ok,
    /// Representative `b` is almost spanned by `I`. `direct` is a member of
    /// its class satisfying the task outright, when one exists.
    Claim1Violated { b: usize, direct: Option<TemplateSet> },
    /// `J` is almost spanned by representative `b`.
    Claim2Violated { b: usize, direct: Option<TemplateSet> },
    /// The task is already met by the family.
    TaskSatisfiableDirectly { b: usize, witness: TemplateSet },
}

impl ClaimStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, ClaimStatus::Ok)
    }
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let direct = |d: &Option<TemplateSet>| d.as_ref().map_or(String::new(), |t| format!(" direct=[{t}]"));
        match self {
            ClaimStatus::Ok => write!(f, "ok"),
            ClaimStatus::Claim1Violated { b, direct: d } => write!(f, "claim1-violated B={b}{}", direct(d)),
            ClaimStatus::Claim2Violated { b, direct: d } => write!(f, "claim2-violated B={b}{}", direct(d)),
            ClaimStatus::TaskSatisfiableDirectly { b, witness } => {
                write!(f, "task-satisfiable-directly B={b} witness=[{witness}]")
            }
        }
    }
}

fn direct_member(mf: &FinitaryMatroid, r: &TemplateSet, task: &Task) -> Option<TemplateSet> {
    mf.class_meets_box(r, &task.i, Some(&task.j))
        .or_else(|| mf.class_meets_box(r, &task.j, None))
}

/// Checks that no representative is almost spanned by `I` and that none
/// almost spans `J`. Both claims are class invariants, so checking the
/// representatives is enough.
pub fn check_claim_preconditions(mf: &FinitaryMatroid, family: &TruncationFamily, task: &Task) -> Result<ClaimStatus> {
    let reps = family.reps();
    if let Some((a, b)) = comparable_pair(mf, reps) {
        return Err(Error::Precondition(format!(
            "representatives {a} and {b} are comparable under almost-spanning"
        )));
    }
    for (b, r) in reps.iter().enumerate() {
        if almost_spans_templates(mf, r, &task.i) {
            return Ok(ClaimStatus::Claim1Violated {
                b,
                direct: direct_member(mf, r, task),
            });
        }
    }
    for (b, r) in reps.iter().enumerate() {
        if almost_spans_templates(mf, &task.j, r) {
            return Ok(ClaimStatus::Claim2Violated {
                b,
                direct: direct_member(mf, r, task),
            });
        }
    }
    if let TaskStatus::Met { class, witness, .. } = evaluate_task(mf, family, &task.i, &task.j) {
        return Ok(ClaimStatus::TaskSatisfiableDirectly { b: class, witness });
    }
    Ok(ClaimStatus::Ok)
}

fn check_domain(p: &Condition, task: &Task) -> Result<()> {
    match p.domain().iter().find(|&e| !task.j.contains(e) || task.i.contains(e)) {
        Some(e) => Err(Error::Precondition(format!("condition assigns {e}, which is outside J ∖ I"))),
        None => Ok(()),
    }
}

fn rank_at_least(r: Rank, n: usize) -> bool {
    r.at_least(n as u64)
}

/// Whether `p ∈ C_{B,n}`: `r(p⁻¹(1) | B) ≥ n`.
pub fn in_c(mf: &FinitaryMatroid, p: &Condition, b: &TemplateSet, n: usize) -> Result<bool> {
    Ok(rank_at_least(mf.relative_rank_template(&TemplateSet::from(&p.ones()), b)?, n))
}

/// Whether `p ∈ D_{B,n}`: `r(B | J ∖ p⁻¹(0)) ≥ n`.
pub fn in_d(mf: &FinitaryMatroid, p: &Condition, b: &TemplateSet, n: usize, task: &Task) -> Result<bool> {
    let rest = task.j.difference(&TemplateSet::from(&p.zeros()));
    Ok(rank_at_least(mf.relative_rank_template(b, &rest)?, n))
}

/// Extends `p` into `C_{B,n}` by assigning 1 to the `n` smallest unassigned
/// elements of a maximal subset of `J ∖ I` independent over `B`. That subset
/// is infinite because `J ∖ I` is not almost spanned by `B`.
pub fn dense_extend_c(mf: &FinitaryMatroid, p: &Condition, b: &TemplateSet, n: usize, task: &Task) -> Result<Condition> {
    check_domain(p, task)?;
    mf.certify(b)?;
    if !almost_spans_templates(mf, &task.i, b) {
        return Err(Error::Precondition(format!("I is not almost spanned by B = {b}")));
    }
    if in_c(mf, p, b, n)? {
        return Ok(p.clone());
    }
    let pool = mf.max_independent_subset_over(&task.gap(), b);
    if pool.is_finite() {
        return Err(Error::Precondition(format!("J ∖ I is almost spanned by B = {b}")));
    }
    let fresh: ElementSet = pool.smallest(n, &p.domain()).into_iter().collect();
    let q = p.with(&fresh, true);
    if !q.extends(p) || !in_c(mf, &q, b, n)? {
        return Err(Error::Internal(format!("C-extension for B = {b}, n = {n} failed to re-verify")));
    }
    Ok(q)
}

/// Extends `p` into `D_{B,n}` by assigning 0 to an exchange witness: with
/// `B′ ⊆ B` maximal independent over `I`, a finite `F ⊆ (J ∖ I) ∖ dom(p)`
/// such that `r(B′ | (J ∖ I ∖ F) ∪ I) ≥ n`.
pub fn dense_extend_d(mf: &FinitaryMatroid, p: &Condition, b: &TemplateSet, n: usize, task: &Task) -> Result<Condition> {
    check_domain(p, task)?;
    mf.certify(b)?;
    if !almost_spans_templates(mf, b, &task.j) {
        return Err(Error::Precondition(format!("B = {b} is not almost spanned by J")));
    }
    if in_d(mf, p, b, n, task)? {
        return Ok(p.clone());
    }
    let b_prime = mf.max_independent_subset_over(b, &task.i);
    let witness = mf.lemma8_witness_in_contraction(&b_prime, &task.gap(), &p.domain(), n, &task.i)?;
    let q = p.with(&witness, false);
    if !q.extends(p) || !in_d(mf, &q, b, n, task)? {
        return Err(Error::Internal(format!("D-extension for B = {b}, n = {n} failed to re-verify")));
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum DenseKind {
    C,
    D,
}

/// One dense set, `C_{B,n}` or `D_{B,n}` with `B` the representative at
/// index `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DenseId {
    pub kind: DenseKind,
    pub b: usize,
    pub n: usize,
}

impl fmt::Display for DenseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[B{},{}]", self.kind, self.b, self.n)
    }
}

/// `r(x | y) ≥ bound`, with the computed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inequality {
    pub x: TemplateSet,
    pub y: TemplateSet,
    pub value: Rank,
    pub bound: u64,
}

impl Inequality {
    fn verified(mf: &FinitaryMatroid, x: TemplateSet, y: TemplateSet, bound: usize) -> Result<Self> {
        let value = mf.relative_rank_template(&x, &y)?;
        if !value.at_least(bound as u64) {
            return Err(Error::Internal(format!("r([{x}] | [{y}]) = {value} < {bound}")));
        }
        Ok(Inequality {
            x,
            y,
            value,
            bound: bound as u64,
        })
    }

    /// Recomputes the relative rank.
    pub fn recheck(&self, mf: &FinitaryMatroid) -> Result<bool> {
        let value = mf.relative_rank_template(&self.x, &self.y)?;
        Ok(value == self.value && value.at_least(self.bound))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r([{}] | [{}]) = {} >= {}", self.x, self.y, self.value, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetSet {
    pub id: DenseId,
    /// Assignments added to meet this set; empty when already met.
    pub fragment: Condition,
    pub evidence: Inequality,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCertificate {
    pub depth: usize,
    /// Indices of representatives `B` with `I ⊴ B`.
    pub r_lower: Vec<usize>,
    /// Indices of representatives `B` with `B ⊴ J`.
    pub r_upper: Vec<usize>,
    pub met: Vec<MetSet>,
    pub condition: Condition,
    /// `I ∪ q⁻¹(1)`, the part of the new base fixed so far.
    pub b_low: TemplateSet,
    /// `q⁻¹(0)`, elements of `J ∖ I` kept out of the new base.
    pub b_excluded: ElementSet,
    /// `r(B_low | B) ≥ N` for the lower and `r(B | J ∖ B_excluded) ≥ N` for
    /// the upper representatives.
    pub incomparability: Vec<Inequality>,
}

impl StepCertificate {
    /// Recomputes every inequality in the certificate.
    pub fn recheck(&self, mf: &FinitaryMatroid) -> Result<bool> {
        for ineq in self.met.iter().map(|m| &m.evidence).chain(&self.incomparability) {
            if !ineq.recheck(mf)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Folds the dense-set extensions over every `(B, n)` with `n ≤ depth`:
/// for each `n` in turn, all `C_{B,n}` by representative index, then all
/// `D_{B,n}`. The condition at depth `N` therefore extends the one at depth
/// `N − 1`.
pub fn forcing_step(mf: &FinitaryMatroid, family: &TruncationFamily, task: &Task, depth: usize) -> Result<StepCertificate> {
    let status = check_claim_preconditions(mf, family, task)?;
    if let ClaimStatus::Claim1Violated { .. } | ClaimStatus::Claim2Violated { .. } = status {
        return Err(Error::Precondition(format!("claim precondition failed: {status}")));
    }
    let reps = family.reps();
    let r_lower: Vec<usize> = (0..reps.len())
        .filter(|&b| almost_spans_templates(mf, &task.i, &reps[b]))
        .collect();
    let r_upper: Vec<usize> = (0..reps.len())
        .filter(|&b| almost_spans_templates(mf, &reps[b], &task.j))
        .collect();

    let mut q = Condition::new();
    let mut met = vec![];
    for n in 1..=depth {
        for (kind, members) in [(DenseKind::C, &r_lower), (DenseKind::D, &r_upper)] {
            for &b in members.iter() {
                let next = match kind {
                    DenseKind::C => dense_extend_c(mf, &q, &reps[b], n, task)?,
                    DenseKind::D => dense_extend_d(mf, &q, &reps[b], n, task)?,
                };
                let evidence = match kind {
                    DenseKind::C => Inequality::verified(mf, TemplateSet::from(&next.ones()), reps[b].clone(), n)?,
                    DenseKind::D => Inequality::verified(
                        mf,
                        reps[b].clone(),
                        task.j.difference(&TemplateSet::from(&next.zeros())),
                        n,
                    )?,
                };
                met.push(MetSet {
                    id: DenseId { kind, b, n },
                    fragment: next.fragment_over(&q),
                    evidence,
                });
                q = next;
            }
        }
    }

    let b_low = task.i.union(&TemplateSet::from(&q.ones()));
    let b_excluded = q.zeros();
    let rest = task.j.difference(&TemplateSet::from(&b_excluded));
    let mut incomparability = vec![];
    if depth > 0 {
        for &b in &r_lower {
            incomparability.push(Inequality::verified(mf, b_low.clone(), reps[b].clone(), depth)?);
        }
        for &b in &r_upper {
            incomparability.push(Inequality::verified(mf, reps[b].clone(), rest.clone(), depth)?);
        }
    }
    Ok(StepCertificate {
        depth,
        r_lower,
        r_upper,
        met,
        condition: q,
        b_low,
        b_excluded,
        incomparability,
    })
}

/// The index template of `B_{n,bit}`: `2ⁿ mod 2^{n+1}` for bit 1 and the
/// thinner `2ⁿ mod 2^{n+2}` for bit 0.
pub fn seed_index(n: usize, bit: bool) -> TemplateSet {
    let d = if bit { 2u64 << n } else { 4u64 << n };
    TemplateSet::progression(d, 1 << n, 0).expect("residue below period")
}

pub fn parse_prefix(prefix: &str) -> Result<Vec<bool>> {
    prefix
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::MalformedSpec(format!("prefix character {c:?} is not 0 or 1"))),
        })
        .collect()
}

/// Representatives `B_{n,s(n)}` for `n < |s|`, carried into the matroid
/// through the enumeration of its canonical base.
pub fn seed_family(mf: &FinitaryMatroid, prefix: &[bool]) -> Result<TruncationFamily> {
    if prefix.is_empty() {
        return Err(Error::Precondition("the prefix must be non-empty".into()));
    }
    if prefix.len() > MAX_PREFIX {
        return Err(Error::TooLarge {
            what: "seed prefix",
            size: prefix.len(),
            bound: MAX_PREFIX,
        });
    }
    let base = mf.canonical_base();
    let reps = prefix
        .iter()
        .enumerate()
        .map(|(n, &bit)| TemplateSet::compose(&base, &seed_index(n, bit)))
        .collect::<Result<Vec<_>>>()?;
    if let Some((a, b)) = comparable_pair(mf, &reps) {
        return Err(Error::Internal(format!("seed representatives {a} and {b} are comparable")));
    }
    TruncationFamily::new(mf, reps)
}

/// Representatives of both families, without repeats.
pub fn merge(a: &TruncationFamily, b: &TruncationFamily) -> Vec<TemplateSet> {
    let mut out: Vec<TemplateSet> = a.reps().to_vec();
    for r in b.reps() {
        if !out.contains(r) {
            out.push(r.clone());
        }
    }
    out
}

/// Every ordered pair `(a, b)` of distinct representatives with `a ⊴ b`.
pub fn comparable_pairs(mf: &FinitaryMatroid, reps: &[TemplateSet]) -> Vec<(usize, usize)> {
    (0..reps.len())
        .flat_map(|a| (0..reps.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && almost_spans_templates(mf, &reps[a], &reps[b]))
        .collect()
}
