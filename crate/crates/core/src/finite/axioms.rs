//! Literal, exhaustive checker for the base axioms (B1), (B2), (BM).

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::set::{bits, submasks, Element, ElementSet, Mask, SetFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    /// The family is empty.
    B1,
    /// No `y ∈ b1 \ b0` makes `(b0 − x) + y` a member.
    B2 { b0: ElementSet, b1: ElementSet, x: Element },
    /// `stranded = subset ∩ B` for some member `B` and lies below no maximal trace on `subset`.
    BM { subset: ElementSet, stranded: ElementSet },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::B1 => "B1",
            AxiomViolation::B2 { .. } => "B2",
            AxiomViolation::BM { .. } => "BM",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::B1 => write!(f, "B1: empty family"),
            AxiomViolation::B2 { b0, b1, x } => write!(f, "B2: B0={b0} B1={b1} x={x}"),
            AxiomViolation::BM { subset, stranded } => write!(f, "BM: X={subset} trace={stranded}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "violation", rename_all = "lowercase")]
pub enum AxiomVerdict {
    Ok,
    Violation(AxiomViolation),
}

impl AxiomVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, AxiomVerdict::Ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskAxiomViolation {
    B1,
    B2 { b0: Mask, b1: Mask, x: usize },
    BM { subset: Mask, stranded: Mask },
}

/// Checks `(B1)`, `(B2)`, `(BM)` for `family` over `ground`, exhaustively.
/// Refuses grounds above the exhaustive bound instead of sampling.
pub fn check_base_axioms(ground: &ElementSet, family: &SetFamily) -> Result<AxiomVerdict> {
    bounds::ensure("ground set for base axioms", ground.len(), bounds::BASE_AXIOMS_GROUND)?;
    if let Some(stray) = family.stray_member(ground) {
        return Err(Error::Precondition(format!("member {stray} is not within the ground set")));
    }
    let ids = ground.to_vec();
    let pos = |e: Element| ids.binary_search(&e).expect("member within ground");
    let masks: Vec<Mask> = family
        .iter()
        .map(|b| b.iter().fold(0, |acc, e| acc | 1 << pos(e)))
        .collect();
    let to_set = |m: Mask| -> ElementSet { bits(m).map(|p| ids[p]).collect() };
    Ok(match check_base_axioms_masks(ids.len(), &masks) {
        None => AxiomVerdict::Ok,
        Some(MaskAxiomViolation::B1) => AxiomVerdict::Violation(AxiomViolation::B1),
        Some(MaskAxiomViolation::B2 { b0, b1, x }) => AxiomVerdict::Violation(AxiomViolation::B2 {
            b0: to_set(b0),
            b1: to_set(b1),
            x: ids[x],
        }),
        Some(MaskAxiomViolation::BM { subset, stranded }) => AxiomVerdict::Violation(AxiomViolation::BM {
            subset: to_set(subset),
            stranded: to_set(stranded),
        }),
    })
}

/// Mask-level checker over ground positions `0..n`. Members are examined in
/// the given order; the first violation found is returned.
pub fn check_base_axioms_masks(n: usize, family: &[Mask]) -> Option<MaskAxiomViolation> {
    if family.is_empty() {
        return Some(MaskAxiomViolation::B1);
    }
    let members: HashSet<Mask> = family.iter().copied().collect();
    for &b1 in family {
        for &b0 in family {
            for x in bits(b0 & !b1) {
                let without = b0 & !(1 << x);
                if !bits(b1 & !b0).any(|y| members.contains(&(without | 1 << y))) {
                    return Some(MaskAxiomViolation::B2 { b0, b1, x });
                }
            }
        }
    }
    check_bm(n, family)
}

fn check_bm(n: usize, family: &[Mask]) -> Option<MaskAxiomViolation> {
    let size = 1usize << n;
    // present[s]: s is a trace X ∩ B; any_above[s]: some trace ⊇ s; reaches_max[s]: some maximal trace ⊇ s
    let mut present = vec![false; size];
    let mut any_above = vec![false; size];
    let mut reaches_max = vec![false; size];
    for subset in 0..size as Mask {
        let traces: Vec<Mask> = family.iter().map(|b| b & subset).collect();
        for s in submasks(subset) {
            present[s as usize] = false;
        }
        for &t in &traces {
            present[t as usize] = true;
        }
        // submasks come in descending numeric order, so strict supersets come first
        for s in submasks(subset) {
            let mut strictly_above = false;
            let mut max_above = false;
            for x in bits(subset & !s) {
                let up = (s | 1 << x) as usize;
                strictly_above |= any_above[up];
                max_above |= reaches_max[up];
            }
            let here = present[s as usize];
            any_above[s as usize] = here || strictly_above;
            reaches_max[s as usize] = (here && !strictly_above) || max_above;
        }
        if let Some(&stranded) = traces.iter().find(|&&t| !reaches_max[t as usize]) {
            return Some(MaskAxiomViolation::BM { subset, stranded });
        }
    }
    None
}
