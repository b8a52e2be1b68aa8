//! Exact finite matroid kernel.
//!
//! A [`FiniteMatroid`] is a sorted ground set of element ids plus a backend
//! that answers rank queries on positional bitmasks. Position `i` is the
//! `i`-th smallest id, so "ascending position" and "ascending id" coincide
//! and every greedy choice in the crate is the smallest-id choice.

mod axioms;
mod graphic;
mod linear;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use axioms::{check_base_axioms, check_base_axioms_masks, AxiomVerdict, AxiomViolation, MaskAxiomViolation};

use crate::bounds;
use crate::error::{Error, Result};
use crate::set::{bits, full_mask, Element, ElementSet, Mask, SetFamily};

/// Backend description accepted by [`construct_matroid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidSpec {
    /// `U_{k,n}` on ground `{1..n}`.
    Uniform { k: usize, n: usize },
    /// Cycle matroid; edge `i` (0-based) is element `i + 1`.
    Graphic { edges: Vec<(u64, u64)> },
    /// Column matroid over GF(prime); column `i` is element `i + 1`.
    Linear { prime: u64, rows: Vec<Vec<u64>> },
    /// Explicit base list over a declared ground set.
    Explicit {
        ground: Vec<Element>,
        bases: Vec<Vec<Element>>,
    },
}

#[derive(Clone, Debug, Hash)]
enum Backend {
    Uniform {
        k: usize,
    },
    Graphic {
        edges: Vec<(usize, usize)>,
        vertices: usize,
        labels: Vec<(u64, u64)>,
    },
    Linear {
        prime: u64,
        rows: Vec<Vec<u64>>,
    },
    Explicit {
        bases: Vec<Mask>,
    },
    Truncation {
        inner: Arc<FiniteMatroid>,
        k: usize,
    },
    Minor {
        inner: Arc<FiniteMatroid>,
        positions: Vec<usize>,
        contracted: Mask,
    },
    DirectSum {
        parts: Vec<FiniteMatroid>,
    },
}

/// A matroid on a finite ground set (at most 64 elements).
#[derive(Clone, Debug, Hash)]
pub struct FiniteMatroid {
    ground: Vec<Element>,
    backend: Backend,
}

pub fn construct_matroid(spec: &MatroidSpec) -> Result<FiniteMatroid> {
    match spec {
        MatroidSpec::Uniform { k, n } => FiniteMatroid::uniform(*k, *n),
        MatroidSpec::Graphic { edges } => FiniteMatroid::graphic(edges),
        MatroidSpec::Linear { prime, rows } => FiniteMatroid::linear(*prime, rows.clone()),
        MatroidSpec::Explicit { ground, bases } => FiniteMatroid::explicit(ground, bases),
    }
}

fn one_based(n: usize) -> Vec<Element> {
    (1..=n as Element).collect()
}

fn check_ground_size(n: usize) -> Result<()> {
    if n > 64 {
        return Err(Error::TooLarge {
            what: "ground set",
            size: n,
            bound: 64,
        });
    }
    Ok(())
}

impl FiniteMatroid {
    pub fn uniform(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::MalformedSpec(format!("uniform needs k <= n, got k={k} n={n}")));
        }
        check_ground_size(n)?;
        Ok(FiniteMatroid {
            ground: one_based(n),
            backend: Backend::Uniform { k },
        })
    }

    /// Free matroid on `{1..n}`.
    pub fn free(n: usize) -> Result<Self> {
        Self::uniform(n, n)
    }

    pub fn graphic(edges: &[(u64, u64)]) -> Result<Self> {
        check_ground_size(edges.len())?;
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        for &(u, v) in edges {
            let next = index.len();
            index.entry(u).or_insert(next);
            let next = index.len();
            index.entry(v).or_insert(next);
        }
        let compact = edges.iter().map(|(u, v)| (index[u], index[v])).collect();
        Ok(FiniteMatroid {
            ground: one_based(edges.len()),
            backend: Backend::Graphic {
                edges: compact,
                vertices: index.len(),
                labels: edges.to_vec(),
            },
        })
    }

    pub fn linear(prime: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        if !linear::is_prime(prime) {
            return Err(Error::MalformedSpec(format!("{prime} is not prime")));
        }
        if prime > u32::MAX as u64 {
            return Err(Error::MalformedSpec(format!("prime {prime} exceeds 2^32")));
        }
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedSpec("matrix rows have different lengths".into()));
        }
        check_ground_size(cols)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v % prime).collect())
            .collect();
        Ok(FiniteMatroid {
            ground: one_based(cols),
            backend: Backend::Linear { prime, rows },
        })
    }

    /// Explicit base list. The family must pass the base-axiom checker
    /// before the matroid is released.
    pub fn explicit(ground: &[Element], bases: &[Vec<Element>]) -> Result<Self> {
        let mut sorted = ground.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ground.len() {
            return Err(Error::MalformedSpec("ground set lists an element twice".into()));
        }
        check_ground_size(sorted.len())?;
        if bases.is_empty() {
            return Err(Error::EmptyBaseList);
        }
        let family: SetFamily = bases.iter().map(|b| ElementSet::from(b.clone())).collect();
        let ground_set: ElementSet = sorted.iter().copied().collect();
        if let Some(stray) = family.stray_member(&ground_set) {
            return Err(Error::MalformedSpec(format!("base {stray} is not within the ground set")));
        }
        match check_base_axioms(&ground_set, &family)? {
            AxiomVerdict::Ok => {}
            AxiomVerdict::Violation(v) => return Err(Error::NotAMatroid(v.to_string())),
        }
        let shell = FiniteMatroid {
            ground: sorted,
            backend: Backend::Explicit { bases: vec![] },
        };
        let masks = family.iter().map(|b| shell.mask_of(b)).collect::<Result<Vec<_>>>()?;
        Ok(FiniteMatroid {
            ground: shell.ground,
            backend: Backend::Explicit { bases: masks },
        })
    }

    /// Direct sum; the parts occupy consecutive position blocks and the
    /// result has ground `{0..total}`.
    pub fn direct_sum(parts: Vec<FiniteMatroid>) -> Result<Self> {
        let total: usize = parts.iter().map(FiniteMatroid::len).sum();
        check_ground_size(total)?;
        Ok(FiniteMatroid {
            ground: (0..total as Element).collect(),
            backend: Backend::DirectSum { parts },
        })
    }

    /// Same matroid with new element ids (strictly increasing, same count).
    pub fn relabeled(&self, ids: Vec<Element>) -> Result<Self> {
        if ids.len() != self.len() {
            return Err(Error::MalformedSpec("relabel needs one id per element".into()));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSpec("relabel ids must be strictly increasing".into()));
        }
        Ok(FiniteMatroid {
            ground: ids,
            backend: self.backend.clone(),
        })
    }

    /// Independent sets are the `M`-independent sets of size at most `k`.
    pub(crate) fn truncation_of(inner: &FiniteMatroid, k: usize) -> Self {
        FiniteMatroid {
            ground: inner.ground.clone(),
            backend: Backend::Truncation {
                inner: Arc::new(inner.clone()),
                k,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn ground(&self) -> &[Element] {
        &self.ground
    }

    pub fn ground_set(&self) -> ElementSet {
        self.ground.iter().copied().collect()
    }

    pub fn ground_mask(&self) -> Mask {
        full_mask(self.len())
    }

    pub fn kind(&self) -> &'static str {
        match self.backend {
            Backend::Uniform { .. } => "uniform",
            Backend::Graphic { .. } => "graphic",
            Backend::Linear { .. } => "linear",
            Backend::Explicit { .. } => "explicit",
            Backend::Truncation { .. } => "truncation",
            Backend::Minor { .. } => "minor",
            Backend::DirectSum { .. } => "direct-sum",
        }
    }

    /// Stable content hash; used to tell carriers of different matroids apart.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    pub fn position(&self, e: Element) -> Option<usize> {
        self.ground.binary_search(&e).ok()
    }

    pub fn mask_of(&self, set: &ElementSet) -> Result<Mask> {
        set.iter().try_fold(0, |acc, e| {
            self.position(e)
                .map(|p| acc | (1 << p))
                .ok_or(Error::NotInGround(e))
        })
    }

    pub fn set_of(&self, mask: Mask) -> ElementSet {
        bits(mask).map(|p| self.ground[p]).collect()
    }

    /// Rank of the positional set `mask`.
    pub fn rank_mask(&self, mask: Mask) -> usize {
        let mask = mask & self.ground_mask();
        match &self.backend {
            Backend::Uniform { k } => (*k).min(mask.count_ones() as usize),
            Backend::Graphic { edges, vertices, .. } => graphic::forest_rank(edges, *vertices, mask),
            Backend::Linear { prime, rows } => linear::column_rank(rows, *prime, mask),
            Backend::Explicit { bases } => bases
                .iter()
                .map(|b| (b & mask).count_ones() as usize)
                .max()
                .unwrap_or(0),
            Backend::Truncation { inner, k } => (*k).min(inner.rank_mask(mask)),
            Backend::Minor {
                inner,
                positions,
                contracted,
            } => {
                let lifted = bits(mask).fold(0, |acc, p| acc | (1 << positions[p]));
                inner.rank_mask(lifted | contracted) - inner.rank_mask(*contracted)
            }
            Backend::DirectSum { parts } => {
                let mut offset = 0;
                let mut total = 0;
                for part in parts {
                    let slice = (mask >> offset) & part.ground_mask();
                    total += part.rank_mask(slice);
                    offset += part.len();
                }
                total
            }
        }
    }

    pub fn is_independent_mask(&self, mask: Mask) -> bool {
        match &self.backend {
            Backend::Explicit { bases } => bases.iter().any(|b| mask & !b == 0),
            _ => self.rank_mask(mask) == mask.count_ones() as usize,
        }
    }

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> usize {
        self.rank_mask(self.ground_mask())
    }

    pub fn is_independent(&self, set: &ElementSet) -> Result<bool> {
        Ok(self.is_independent_mask(self.mask_of(set)?))
    }

    pub fn rank(&self, set: &ElementSet) -> Result<usize> {
        Ok(self.rank_mask(self.mask_of(set)?))
    }

    /// `r(X | Y)`: the rank of `X \ Y` after contracting `Y`.
    pub fn relative_rank(&self, x: &ElementSet, y: &ElementSet) -> Result<usize> {
        let (x, y) = (self.mask_of(x)?, self.mask_of(y)?);
        Ok(self.relative_rank_mask(x, y))
    }

    pub fn relative_rank_mask(&self, x: Mask, y: Mask) -> usize {
        self.rank_mask(x | y) - self.rank_mask(y)
    }

    pub fn spans(&self, set: &ElementSet, e: Element) -> Result<bool> {
        let x = self.mask_of(set)?;
        let p = self.position(e).ok_or(Error::NotInGround(e))?;
        Ok(self.relative_rank_mask(1 << p, x) == 0)
    }

    /// Positional closure of `mask`.
    pub fn span_mask(&self, mask: Mask) -> Mask {
        let r = self.rank_mask(mask);
        (0..self.len())
            .filter(|&p| mask >> p & 1 == 1 || self.rank_mask(mask | 1 << p) == r)
            .fold(0, |acc, p| acc | 1 << p)
    }

    /// Greedy extension of `base` inside `within`, adding the smallest
    /// augmenting id first.
    pub fn max_independent_extension(&self, base: &ElementSet, within: &ElementSet) -> Result<ElementSet> {
        let (i, x) = (self.mask_of(base)?, self.mask_of(within)?);
        if !self.is_independent_mask(i) {
            return Err(Error::NotIndependent(base.to_string()));
        }
        if i & !x != 0 {
            return Err(Error::Precondition(format!("{base} is not contained in {within}")));
        }
        Ok(self.set_of(self.greedy_extend_mask(i, x)))
    }

    pub(crate) fn greedy_extend_mask(&self, start: Mask, within: Mask) -> Mask {
        bits(within & !start).fold(start, |acc, p| {
            if self.is_independent_mask(acc | 1 << p) {
                acc | 1 << p
            } else {
                acc
            }
        })
    }

    /// `M \ deleted / contracted`, a matroid on the remaining elements whose
    /// rank function is `r(X ∪ contracted) − r(contracted)`.
    pub fn minor(&self, deleted: &ElementSet, contracted: &ElementSet) -> Result<FiniteMatroid> {
        let (d, c) = (self.mask_of(deleted)?, self.mask_of(contracted)?);
        if d & c != 0 {
            let p = (d & c).trailing_zeros() as usize;
            return Err(Error::Overlap(self.ground[p]));
        }
        if d == 0 && c == 0 {
            return Ok(self.clone());
        }
        let keep = self.ground_mask() & !(d | c);
        let positions: Vec<usize> = bits(keep).collect();
        Ok(FiniteMatroid {
            ground: positions.iter().map(|&p| self.ground[p]).collect(),
            backend: Backend::Minor {
                inner: Arc::new(self.clone()),
                positions,
                contracted: c,
            },
        })
    }

    /// All independent sets as positional masks, ascending.
    pub fn independent_masks(&self) -> Result<Vec<Mask>> {
        bounds::ensure("ground set for listing", self.len(), bounds::LISTING_GROUND)?;
        let mut out = vec![];
        let mut stack = vec![(0 as Mask, 0usize)];
        while let Some((set, from)) = stack.pop() {
            out.push(set);
            for p in from..self.len() {
                let next = set | 1 << p;
                if self.is_independent_mask(next) {
                    stack.push((next, p + 1));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn base_masks(&self) -> Result<Vec<Mask>> {
        let r = self.full_rank();
        Ok(self
            .independent_masks()?
            .into_iter()
            .filter(|m| m.count_ones() as usize == r)
            .collect())
    }

    pub fn bases(&self) -> Result<SetFamily> {
        Ok(self.base_masks()?.into_iter().map(|m| self.set_of(m)).collect())
    }

    pub fn independent_sets(&self) -> Result<SetFamily> {
        Ok(self
            .independent_masks()?
            .into_iter()
            .map(|m| self.set_of(m))
            .collect())
    }

    /// Same ground set and the same independent sets.
    pub fn same_matroid(&self, other: &FiniteMatroid) -> Result<bool> {
        if self.ground != other.ground {
            return Ok(false);
        }
        Ok(self.base_masks()? == other.base_masks()?)
    }

    /// A text-format description. Derived backends are written out as explicit base lists.
    pub fn to_spec(&self) -> Result<MatroidSpec> {
        let default_ground = one_based(self.len());
        Ok(match &self.backend {
            Backend::Uniform { k } if self.ground == default_ground => MatroidSpec::Uniform { k: *k, n: self.len() },
            Backend::Graphic { labels, .. } if self.ground == default_ground => MatroidSpec::Graphic { edges: labels.clone() },
            Backend::Linear { prime, rows } if self.ground == default_ground => MatroidSpec::Linear {
                prime: *prime,
                rows: rows.clone(),
            },
            _ => MatroidSpec::Explicit {
                ground: self.ground.clone(),
                bases: self.bases()?.iter().map(ElementSet::to_vec).collect(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s<const N: usize>(a: [Element; N]) -> ElementSet {
        ElementSet::from(a)
    }

    fn two_base() -> FiniteMatroid {
        FiniteMatroid::explicit(&[1, 2, 3], &[vec![1, 2], vec![2, 3]]).unwrap()
    }

    #[test]
    fn uniform_examples() {
        let u = FiniteMatroid::uniform(2, 4).unwrap();
        assert!(u.is_independent(&s([1, 3])).unwrap());
        assert!(!u.is_independent(&s([1, 2, 3])).unwrap());
        assert_eq!(u.rank(&s([1, 2, 3])).unwrap(), 2);
        assert_eq!(u.rank(&s([])).unwrap(), 0);
        assert!(u.independent_sets().unwrap().iter().all(|x| x.len() <= 2));
        assert_eq!(u.independent_sets().unwrap().len(), 1 + 4 + 6);
    }

    #[test]
    fn malformed_specs() {
        assert!(matches!(FiniteMatroid::uniform(3, 2), Err(Error::MalformedSpec(_))));
        assert!(matches!(FiniteMatroid::linear(4, vec![vec![1]]), Err(Error::MalformedSpec(_))));
        assert_eq!(FiniteMatroid::explicit(&[1, 2], &[]).unwrap_err(), Error::EmptyBaseList);
        assert!(matches!(
            FiniteMatroid::explicit(&[1, 2, 3], &[vec![1], vec![2, 3]]),
            Err(Error::NotAMatroid(_))
        ));
    }

    #[test]
    fn explicit_two_base_structure() {
        let m = two_base();
        // 1 and 3 are parallel, 2 is a coloop
        assert!(!m.is_independent(&s([1, 3])).unwrap());
        assert!(m.is_independent(&s([3, 2])).unwrap());
        assert!(m.spans(&s([1]), 3).unwrap());
        assert!(!m.spans(&s([1, 3]), 2).unwrap());
        // brute force over the two bases
        for mask in 0..8u64 {
            let set = m.set_of(mask);
            let brute = [s([1, 2]), s([2, 3])].iter().any(|b| set.is_subset(b));
            assert_eq!(m.is_independent(&set).unwrap(), brute);
        }
    }

    #[test]
    fn graphic_triangle_rank() {
        let g = FiniteMatroid::graphic(&[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.rank(&s([1, 2, 3])).unwrap(), 2);
        assert_eq!(g.full_rank(), 2);
    }

    #[test]
    fn relative_rank_and_spans() {
        let u = FiniteMatroid::uniform(2, 4).unwrap();
        assert_eq!(u.relative_rank(&s([1, 2]), &s([3])).unwrap(), 1);
        assert_eq!(u.relative_rank(&s([1, 2]), &s([1, 2])).unwrap(), 0);
        assert_eq!(u.relative_rank(&s([1, 2]), &s([])).unwrap(), 2);
        assert!(u.spans(&s([1, 2]), 3).unwrap());
        assert!(!u.spans(&s([1]), 3).unwrap());
        assert!(u.spans(&s([1]), 1).unwrap());
        assert_eq!(u.rank(&s([9])).unwrap_err(), Error::NotInGround(9));
        assert_eq!(u.spans(&s([1]), 7).unwrap_err(), Error::NotInGround(7));
    }

    #[test]
    fn minor_examples() {
        let u = FiniteMatroid::uniform(2, 4).unwrap();
        let c = u.minor(&s([]), &s([1])).unwrap();
        assert_eq!(c.ground(), &[2, 3, 4]);
        assert_eq!(c.full_rank(), 1);
        for e in [2, 3, 4] {
            assert!(c.is_independent(&s([e])).unwrap());
        }
        assert!(!c.is_independent(&s([2, 3])).unwrap());

        let d = u.minor(&s([1]), &s([])).unwrap();
        let u23 = FiniteMatroid::uniform(2, 3).unwrap().relabeled(vec![2, 3, 4]).unwrap();
        assert!(d.same_matroid(&u23).unwrap());

        let same = u.minor(&s([]), &s([])).unwrap();
        assert!(same.same_matroid(&u).unwrap());
        assert_eq!(u.minor(&s([1]), &s([1, 2])).unwrap_err(), Error::Overlap(1));
    }

    #[test]
    fn greedy_extension() {
        let u = FiniteMatroid::uniform(2, 4).unwrap();
        assert_eq!(u.max_independent_extension(&s([1]), &s([1, 2, 3])).unwrap(), s([1, 2]));
        assert_eq!(u.max_independent_extension(&s([1, 2]), &s([1, 2])).unwrap(), s([1, 2]));
        assert_eq!(u.max_independent_extension(&s([]), &s([])).unwrap(), s([]));
        assert!(matches!(
            u.max_independent_extension(&s([1, 2, 3]), &s([1, 2, 3])),
            Err(Error::NotIndependent(_))
        ));
    }

    #[test]
    fn direct_sum_and_relabel() {
        let u12 = FiniteMatroid::uniform(1, 2).unwrap();
        let ds = FiniteMatroid::direct_sum(vec![u12.clone(), u12]).unwrap();
        assert_eq!(ds.ground(), &[0, 1, 2, 3]);
        assert!(ds.is_independent(&s([0, 2])).unwrap());
        assert!(!ds.is_independent(&s([0, 1])).unwrap());
        assert_eq!(ds.full_rank(), 2);
        assert!(ds.relabeled(vec![3, 2, 1, 0]).is_err());
    }

    #[test]
    fn linear_gf2() {
        let m = FiniteMatroid::linear(2, vec![vec![1, 0, 1, 1], vec![0, 1, 1, 1]]).unwrap();
        assert!(!m.is_independent(&s([3, 4])).unwrap());
        assert!(m.is_independent(&s([1, 2])).unwrap());
        assert_eq!(m.full_rank(), 2);
    }

    #[test]
    fn spec_round_trip() {
        let u = FiniteMatroid::uniform(2, 4).unwrap();
        assert_eq!(u.to_spec().unwrap(), MatroidSpec::Uniform { k: 2, n: 4 });
        let c = u.minor(&s([]), &s([1])).unwrap();
        let back = construct_matroid(&c.to_spec().unwrap()).unwrap();
        assert!(back.same_matroid(&c).unwrap());
    }
}
