//! Classical truncations of finite matroids: the `k`-truncation keeps the
//! `k`-element independent sets as bases, the `(−n)`-truncation deletes `n`
//! elements from every base.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::finite::FiniteMatroid;
use crate::set::{bits, submasks, Mask};

/// `Level(k)` is the `k`-truncation, `Co(n)` the `(−n)`-truncation, and
/// `Trivial` the matroid itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationLevel {
    Trivial,
    Level(usize),
    Co(usize),
}

impl fmt::Display for TruncationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruncationLevel::Trivial => f.write_str("trivial"),
            TruncationLevel::Level(k) => write!(f, "{k}"),
            TruncationLevel::Co(n) => write!(f, "-{n}"),
        }
    }
}

impl FromStr for TruncationLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(TruncationLevel::Trivial);
        }
        let bad = || Error::MalformedSpec(format!("bad truncation level '{s}'"));
        if let Some(rest) = s.strip_prefix('-') {
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(Error::MalformedSpec("level -0 is the trivial truncation; write 'trivial'".into()));
            }
            return Ok(TruncationLevel::Co(n));
        }
        s.parse().map(TruncationLevel::Level).map_err(|_| bad())
    }
}

/// The `k`-truncation: bases are the `k`-element independent sets of `m`.
pub fn truncate_to(m: &FiniteMatroid, k: usize) -> Result<FiniteMatroid> {
    let rank = m.full_rank();
    if k > rank {
        return Err(Error::LevelOutOfRange { level: k as i64, rank });
    }
    Ok(FiniteMatroid::truncation_of(m, k))
}

/// The `(−n)`-truncation built literally: every base of `m` with `n` of its
/// elements deleted. Returned as an explicit matroid.
pub fn cotruncate(m: &FiniteMatroid, n: usize) -> Result<FiniteMatroid> {
    let rank = m.full_rank();
    if n == 0 || n > rank {
        return Err(Error::LevelOutOfRange { level: -(n as i64), rank });
    }
    let mut bases: BTreeSet<Mask> = BTreeSet::new();
    for b in m.base_masks()? {
        for removed in submasks(b).filter(|r| r.count_ones() as usize == n) {
            bases.insert(b & !removed);
        }
    }
    let lists: Vec<Vec<_>> = bases.into_iter().map(|b| m.set_of(b).to_vec()).collect();
    FiniteMatroid::explicit(m.ground(), &lists)
}

pub fn apply_level(m: &FiniteMatroid, level: TruncationLevel) -> Result<FiniteMatroid> {
    match level {
        TruncationLevel::Trivial => Ok(m.clone()),
        TruncationLevel::Level(k) => truncate_to(m, k),
        TruncationLevel::Co(n) => cotruncate(m, n),
    }
}

/// The level `k` with `n = truncate_to(m, k)`, reported as `Trivial` when
/// `k = r(m)`; `None` when `n` is no truncation of `m`.
pub fn classify_truncation(m: &FiniteMatroid, n: &FiniteMatroid) -> Result<Option<TruncationLevel>> {
    if m.ground() != n.ground() {
        return Err(Error::GroundMismatch);
    }
    let rank = m.full_rank();
    let independents = m.independent_masks()?;
    let target = n.base_masks()?;
    for k in 0..=rank {
        let level: Vec<Mask> = independents
            .iter()
            .copied()
            .filter(|s| bits(*s).count() == k)
            .collect();
        if level == target {
            return Ok(Some(if k == rank {
                TruncationLevel::Trivial
            } else {
                TruncationLevel::Level(k)
            }));
        }
    }
    Ok(None)
}
