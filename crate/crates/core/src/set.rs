//! Element ids, finite element sets, and positional bitmasks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

/// Element id. Finite ground sets and the countable index space share it.
pub type Element = u64;

/// Positional bitmask over a ground set of at most 64 elements.
pub type Mask = u64;

/// A finite set of element ids, ordered ascending.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(BTreeSet<Element>);

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.0.contains(&e)
    }

    pub fn insert(&mut self, e: Element) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: Element) -> bool {
        self.0.remove(&e)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Element> + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<Element> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<Element> {
        self.0.last().copied()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn as_btree(&self) -> &BTreeSet<Element> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElementSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Element; N]> for ElementSet {
    fn from(arr: [Element; N]) -> Self {
        arr.into_iter().collect()
    }
}

impl From<Vec<Element>> for ElementSet {
    fn from(v: Vec<Element>) -> Self {
        v.into_iter().collect()
    }
}

impl From<BTreeSet<Element>> for ElementSet {
    fn from(s: BTreeSet<Element>) -> Self {
        ElementSet(s)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

/// A finite family of finite element sets, ordered canonically.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct SetFamily {
    members: BTreeSet<ElementSet>,
}

impl SetFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &ElementSet) -> bool {
        self.members.contains(set)
    }

    pub fn insert(&mut self, set: ElementSet) -> bool {
        self.members.insert(set)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ElementSet> {
        self.members.iter()
    }

    /// The first member not contained in `ground`, if any.
    pub fn stray_member(&self, ground: &ElementSet) -> Option<&ElementSet> {
        self.members.iter().find(|m| !m.is_subset(ground))
    }
}

impl FromIterator<ElementSet> for SetFamily {
    fn from_iter<I: IntoIterator<Item = ElementSet>>(iter: I) -> Self {
        SetFamily {
            members: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Positions of the set bits of `mask`, ascending.
pub fn bits(mut mask: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// All submasks of `mask`, including 0 and `mask` itself, in descending order.
pub fn submasks(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// Mask with the low `n` bits set.
pub fn full_mask(n: usize) -> Mask {
    if n >= 64 {
        Mask::MAX
    } else {
        (1u64 << n) - 1
    }
}
