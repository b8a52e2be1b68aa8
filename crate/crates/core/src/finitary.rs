//! Countable finitary matroids with decidable reasoning over templates.
//!
//! Both schemas are read as a direct sum of copies of one finite matroid
//! `M0` with `m` elements: element `n` sits in component `n / m` at position
//! `n % m`. The free matroid on ℕ is the case `M0 = U_{1,1}`. A template
//! restricted to one component gives a bitmask, and those masks repeat with
//! a fixed component period beyond a threshold, so every infinite question
//! reduces to finitely many components.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{construct_matroid, FiniteMatroid, MatroidSpec};
use crate::set::{bits, submasks, Element, ElementSet, Mask};
use crate::template::TemplateSet;

/// Largest component ground set accepted by the direct-sum schema.
pub const MAX_COMPONENT: usize = 16;

/// Relative ranks in infinite matroids: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl Rank {
    pub fn is_finite(self) -> bool {
        matches!(self, Rank::Finite(_))
    }

    pub fn at_least(self, n: u64) -> bool {
        match self {
            Rank::Finite(v) => v >= n,
            Rank::Infinite => true,
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(v) => s.serialize_u64(*v),
            Rank::Infinite => s.serialize_str("inf"),
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(v) => write!(f, "{v}"),
            Rank::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinitarySpec {
    Free,
    PeriodicDirectSum(MatroidSpec),
}

#[derive(Clone, Debug)]
pub enum Schema {
    Free,
    PeriodicDirectSum(FiniteMatroid),
}

#[derive(Clone, Debug)]
pub struct FinitaryMatroid {
    schema: Schema,
    m: u64,
    /// Rank of every positional subset of one component.
    rank_table: Vec<u8>,
    fingerprint: u64,
}

pub fn construct_finitary(spec: &FinitarySpec) -> Result<FinitaryMatroid> {
    match spec {
        FinitarySpec::Free => Ok(FinitaryMatroid::free()),
        FinitarySpec::PeriodicDirectSum(inner) => FinitaryMatroid::periodic_direct_sum(construct_matroid(inner)?),
    }
}

/// Component window shared by a group of templates: components below `c0`
/// are irregular, and from `c0` on component `c` behaves like `c0 + (c − c0) % p`.
#[derive(Clone, Copy, Debug)]
struct Layout {
    c0: u64,
    p: u64,
}

impl Layout {
    fn span(&self) -> u64 {
        self.c0 + self.p
    }
}

impl FinitaryMatroid {
    pub fn free() -> Self {
        let mut h = DefaultHasher::new();
        "free".hash(&mut h);
        FinitaryMatroid {
            schema: Schema::Free,
            m: 1,
            rank_table: vec![0, 1],
            fingerprint: h.finish(),
        }
    }

    /// Copies of `m0` side by side. `m0` needs positive rank so the sum has
    /// infinite rank.
    pub fn periodic_direct_sum(m0: FiniteMatroid) -> Result<Self> {
        if m0.full_rank() == 0 {
            return Err(Error::UnsupportedSchema(
                "component matroid has rank 0, so the direct sum would have rank 0".into(),
            ));
        }
        if m0.len() > MAX_COMPONENT {
            return Err(Error::TooLarge {
                what: "component ground set",
                size: m0.len(),
                bound: MAX_COMPONENT,
            });
        }
        let rank_table = (0..1u64 << m0.len()).map(|s| m0.rank_mask(s) as u8).collect();
        let mut h = DefaultHasher::new();
        "periodic-direct-sum".hash(&mut h);
        m0.fingerprint().hash(&mut h);
        Ok(FinitaryMatroid {
            m: m0.len() as u64,
            schema: Schema::PeriodicDirectSum(m0),
            rank_table,
            fingerprint: h.finish(),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn kind(&self) -> &'static str {
        match self.schema {
            Schema::Free => "free",
            Schema::PeriodicDirectSum(_) => "periodic-direct-sum",
        }
    }

    pub fn component_size(&self) -> u64 {
        self.m
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn component_of(&self, e: Element) -> u64 {
        e / self.m
    }

    fn rank0(&self, mask: Mask) -> u64 {
        self.rank_table[mask as usize] as u64
    }

    fn comp_mask(&self, x: &TemplateSet, c: u64) -> Mask {
        (0..self.m)
            .filter(|&p| x.contains(c * self.m + p))
            .fold(0, |acc, p| acc | 1 << p)
    }

    fn finite_comp_masks(&self, s: &ElementSet) -> BTreeMap<u64, Mask> {
        let mut out: BTreeMap<u64, Mask> = BTreeMap::new();
        for e in s.iter() {
            *out.entry(e / self.m).or_default() |= 1 << (e % self.m);
        }
        out
    }

    fn layout(&self, sets: &[&TemplateSet]) -> Layout {
        let l = sets.iter().fold(self.m, |acc, s| acc.lcm(&s.period()));
        let t = sets.iter().map(|s| s.threshold()).max().unwrap_or(0);
        Layout {
            c0: t.div_ceil(self.m),
            p: l / self.m,
        }
    }

    /// Independence of a finite set.
    pub fn is_independent_finite(&self, s: &ElementSet) -> bool {
        self.finite_comp_masks(s)
            .values()
            .all(|&mask| self.rank0(mask) == mask.count_ones() as u64)
    }

    /// Whether every finite subset of `x` is independent, decided from the
    /// component occupancy over one period.
    pub fn is_independent(&self, x: &TemplateSet) -> bool {
        let lay = self.layout(&[x]);
        (0..lay.span()).all(|c| {
            let mask = self.comp_mask(x, c);
            self.rank0(mask) == mask.count_ones() as u64
        })
    }

    pub fn certify(&self, x: &TemplateSet) -> Result<()> {
        if self.is_independent(x) {
            Ok(())
        } else {
            Err(Error::NotIndependent(x.to_string()))
        }
    }

    /// `x ∩ c = ∅` and `x` is independent in the contraction by `c`.
    pub fn is_independent_over(&self, x: &TemplateSet, c: &TemplateSet) -> bool {
        let lay = self.layout(&[x, c]);
        (0..lay.span()).all(|k| {
            let (xm, cm) = (self.comp_mask(x, k), self.comp_mask(c, k));
            xm & cm == 0 && self.rank0(xm | cm) - self.rank0(cm) == xm.count_ones() as u64
        })
    }

    /// `r(X|Y)` for arbitrary templates; no independence requirement.
    pub fn relative_rank_any(&self, x: &TemplateSet, y: &TemplateSet) -> Rank {
        let lay = self.layout(&[x, y]);
        let contrib = |c: u64| {
            let (xm, ym) = (self.comp_mask(x, c), self.comp_mask(y, c));
            self.rank0(xm | ym) - self.rank0(ym)
        };
        if (lay.c0..lay.span()).any(|c| contrib(c) > 0) {
            return Rank::Infinite;
        }
        Rank::Finite((0..lay.c0).map(contrib).sum())
    }

    /// `r(X|Y)` for certified independent templates.
    pub fn relative_rank_template(&self, x: &TemplateSet, y: &TemplateSet) -> Result<Rank> {
        self.certify(x)?;
        self.certify(y)?;
        Ok(self.relative_rank_any(x, y))
    }

    /// `r(M/I) = r(E | I)`.
    pub fn corank(&self, i: &TemplateSet) -> Rank {
        self.relative_rank_any(&TemplateSet::all(), i)
    }

    pub fn spans(&self, x: &TemplateSet, e: Element) -> bool {
        let c = e / self.m;
        let xm = self.comp_mask(x, c);
        self.rank0(xm | 1 << (e % self.m)) == self.rank0(xm)
    }

    /// Everything spanned by `x`, componentwise closure.
    pub fn closure(&self, x: &TemplateSet) -> TemplateSet {
        let lay = self.layout(&[x]);
        let close = |c: u64| {
            let xm = self.comp_mask(x, c);
            let r = self.rank0(xm);
            (0..self.m)
                .filter(|&p| self.rank0(xm | 1 << p) == r)
                .fold(0, |acc, p| acc | 1 << p)
        };
        let irregular: Vec<Mask> = (0..lay.c0).map(close).collect();
        let types: Vec<Mask> = (lay.c0..lay.span()).map(close).collect();
        self.assemble(lay, &irregular, &types)
    }

    /// Template whose component `c < irregular.len()` is `irregular[c]` and
    /// whose later components follow `types` (aligned with `lay`).
    fn assemble(&self, lay: Layout, irregular: &[Mask], types: &[Mask]) -> TemplateSet {
        let c_end = irregular.len() as u64;
        debug_assert!(c_end >= lay.c0 && (c_end - lay.c0) % lay.p == 0);
        let period = lay.p * self.m;
        let low: Vec<u64> = irregular
            .iter()
            .enumerate()
            .flat_map(|(c, &mask)| bits(mask).map(move |p| c as u64 * self.m + p as u64))
            .collect();
        let residues: Vec<u64> = types
            .iter()
            .enumerate()
            .flat_map(|(j, &mask)| bits(mask).map(move |p| ((c_end + j as u64) * self.m + p as u64) % period))
            .collect();
        TemplateSet::new(period, residues, c_end * self.m, low, []).expect("assembled template is well formed")
    }

    /// The finite matroid `Mf↾[0, n)`, on element ids `0..n`.
    pub fn restrict(&self, n: usize) -> Result<FiniteMatroid> {
        let m = self.m as usize;
        let component = match &self.schema {
            Schema::Free => FiniteMatroid::uniform(1, 1)?,
            Schema::PeriodicDirectSum(m0) => m0.clone(),
        };
        let mut parts = vec![component.clone(); n / m];
        if n % m != 0 {
            let dropped: ElementSet = component.ground()[n % m..].iter().copied().collect();
            parts.push(component.minor(&dropped, &ElementSet::new())?);
        }
        FiniteMatroid::direct_sum(parts)
    }

    /// Greedy maximal subset of `x` that is independent in the contraction by
    /// `c`, smallest ids first within each component.
    pub fn max_independent_subset_over(&self, x: &TemplateSet, c: &TemplateSet) -> TemplateSet {
        let lay = self.layout(&[x, c]);
        let pick = |k: u64| {
            let (xm, cm) = (self.comp_mask(x, k), self.comp_mask(c, k));
            bits(xm & !cm).fold(0, |acc: Mask, p| {
                if self.rank0(cm | acc | 1 << p) > self.rank0(cm | acc) {
                    acc | 1 << p
                } else {
                    acc
                }
            })
        };
        let irregular: Vec<Mask> = (0..lay.c0).map(pick).collect();
        let types: Vec<Mask> = (lay.c0..lay.span()).map(pick).collect();
        self.assemble(lay, &irregular, &types)
    }

    /// The smallest-id base of the whole matroid.
    pub fn canonical_base(&self) -> TemplateSet {
        self.max_independent_subset_over(&TemplateSet::all(), &TemplateSet::empty())
    }

    /// A member `B` of the strong-equivalence class of the independent
    /// template `r` with `lower ⊆ B ⊆ upper` (`upper = None` means no upper
    /// bound), or `None` if the class has no such member.
    ///
    /// Per component, `B_c` contributes `a = r(B_c ∪ R_c) − r(R_c)` to
    /// `r(B|R)` and `b = r(B_c ∪ R_c) − r(B_c)` to `r(R|B)`. A member needs
    /// `(a, b) = (0, 0)` in all but finitely many components and
    /// `Σ (a − b) = 0`; the search balances the irregular components with
    /// finitely many deviations in the periodic ones.
    pub fn class_meets_box(
        &self,
        r: &TemplateSet,
        lower: &TemplateSet,
        upper: Option<&TemplateSet>,
    ) -> Option<TemplateSet> {
        let all = TemplateSet::all();
        let upper = upper.unwrap_or(&all);
        let lay = self.layout(&[r, lower, upper]);
        // candidates[c] = (mask, delta, is_zero)
        let candidates = |c: u64| -> Vec<(Mask, i64, bool)> {
            let (rm, lo, up) = (self.comp_mask(r, c), self.comp_mask(lower, c), self.comp_mask(upper, c));
            if lo & !up != 0 {
                return vec![];
            }
            let mut out: Vec<(Mask, i64, bool)> = submasks(up & !lo)
                .map(|extra| extra | lo)
                .filter(|&s| self.rank0(s) == s.count_ones() as u64)
                .map(|s| {
                    let joint = self.rank0(s | rm);
                    let a = (joint - self.rank0(rm)) as i64;
                    let b = (joint - self.rank0(s)) as i64;
                    (s, a - b, a == 0 && b == 0)
                })
                .collect();
            out.sort_unstable_by_key(|&(s, _, _)| s);
            out
        };

        // irregular components: reachable sums with one choice vector each
        let mut sums: BTreeMap<i64, Vec<Mask>> = BTreeMap::from([(0, vec![])]);
        for c in 0..lay.c0 {
            let cands = candidates(c);
            if cands.is_empty() {
                return None;
            }
            let mut next: BTreeMap<i64, Vec<Mask>> = BTreeMap::new();
            for (s, choice) in &sums {
                for &(mask, delta, _) in &cands {
                    next.entry(s + delta).or_insert_with(|| {
                        let mut v = choice.clone();
                        v.push(mask);
                        v
                    });
                }
            }
            sums = next;
        }

        // periodic types: a zero candidate each, plus the available steps
        let mut zero = Vec::with_capacity(lay.p as usize);
        let mut steps: BTreeMap<i64, (usize, Mask)> = BTreeMap::new();
        for j in 0..lay.p {
            let cands = candidates(lay.c0 + j);
            let z = cands.iter().find(|c| c.2)?;
            zero.push(z.0);
            for &(mask, delta, _) in &cands {
                if delta != 0 {
                    steps.entry(delta).or_insert((j as usize, mask));
                }
            }
        }
        let reach = |s: i64| -> Option<Vec<i64>> { balance(s, &steps.keys().copied().collect::<Vec<_>>()) };
        let mut order: Vec<(&i64, &Vec<Mask>)> = sums.iter().collect();
        order.sort_by_key(|(s, _)| (s.abs(), **s));
        for (s, choice) in order {
            let Some(used) = reach(*s) else { continue };
            let mut per_type: Vec<Vec<Mask>> = vec![vec![]; lay.p as usize];
            for g in used {
                let (j, mask) = steps[&g];
                per_type[j].push(mask);
            }
            let rounds = per_type.iter().map(Vec::len).max().unwrap_or(0) as u64;
            let c_end = lay.c0 + lay.p * rounds;
            let mut irregular = choice.clone();
            for c in lay.c0..c_end {
                let (j, k) = (((c - lay.c0) % lay.p) as usize, ((c - lay.c0) / lay.p) as usize);
                irregular.push(per_type[j].get(k).copied().unwrap_or(zero[j]));
            }
            let mut wide = lay;
            wide.c0 = c_end;
            return Some(self.assemble(wide, &irregular, &zero));
        }
        None
    }

    /// A finite `J″ ⊆ J ∖ Jp` with `r(I | J ∖ J″) ≥ n`, for infinite
    /// independent `I`, `J` and finite `Jp ⊆ J`.
    pub fn lemma8_witness(&self, i: &TemplateSet, j: &TemplateSet, jp: &ElementSet, n: usize) -> Result<ElementSet> {
        self.lemma8_witness_in_contraction(i, j, jp, n, &TemplateSet::empty())
    }

    /// The same construction inside the contraction by `contracted`: the
    /// returned set satisfies `r(I | (J ∖ J″) ∪ contracted) ≥ n`.
    pub fn lemma8_witness_in_contraction(
        &self,
        i: &TemplateSet,
        j: &TemplateSet,
        jp: &ElementSet,
        n: usize,
        contracted: &TemplateSet,
    ) -> Result<ElementSet> {
        if !i.is_infinite() || !j.is_infinite() {
            return Err(Error::Precondition("both sets must be infinite".into()));
        }
        if let Some(e) = jp.iter().find(|&e| !j.contains(e)) {
            return Err(Error::Precondition(format!("{e} lies in the excluded set but not in J")));
        }
        for (name, x) in [("I", i), ("J", j)] {
            if !self.is_independent_over(x, contracted) {
                return Err(Error::NotIndependent(format!("{name} = {x}")));
            }
        }
        if n == 0 {
            return Ok(ElementSet::new());
        }
        let common = i.intersection(j);
        if common.is_infinite() {
            return Ok(common.smallest(n, jp).into_iter().collect());
        }

        // move Jp into the contraction and work with I′ ⊆ I ∖ Jp maximal independent there
        let jp_t = TemplateSet::from(jp);
        let c2 = contracted.union(&jp_t);
        let j2 = j.difference(&jp_t);
        let i2 = self.max_independent_subset_over(&i.difference(&jp_t), &c2);
        let pool = i2.difference(&j2);
        let es = pool.smallest(n, &ElementSet::new());
        if es.len() < n {
            return Err(Error::Internal("I ∖ J ran out of elements".into()));
        }
        let free_f = j2.difference(&i2);
        let mut added = ElementSet::new();
        let mut removed = ElementSet::new();
        let cur_mask = |c: u64, added: &ElementSet, removed: &ElementSet| -> Mask {
            (0..self.m)
                .filter(|&p| {
                    let e = c * self.m + p;
                    (j2.contains(e) && !removed.contains(e)) || added.contains(e)
                })
                .fold(0, |acc, p| acc | 1 << p)
        };
        let indep_at = |c: u64, mask: Mask| {
            let cm = self.comp_mask(&c2, c);
            self.rank0(mask | cm) - self.rank0(cm) == mask.count_ones() as u64
        };
        for e in es {
            let c = e / self.m;
            let with_e = cur_mask(c, &added, &removed) | 1 << (e % self.m);
            let f = if indep_at(c, with_e) {
                free_f
                    .iter()
                    .find(|&f| !removed.contains(f))
                    .expect("infinite template")
            } else {
                (c * self.m..(c + 1) * self.m)
                    .filter(|&f| free_f.contains(f) && !removed.contains(f))
                    .find(|&f| indep_at(c, with_e & !(1 << (f % self.m))))
                    .ok_or_else(|| Error::Internal(format!("no exchange partner for {e}")))?
            };
            added.insert(e);
            removed.insert(f);
        }
        Ok(removed)
    }

    /// Independent re-check of a witness: `J″ ⊆ J ∖ Jp` and
    /// `r(I | (J ∖ J″) ∪ contracted) ≥ n`.
    pub fn lemma8_check(
        &self,
        i: &TemplateSet,
        j: &TemplateSet,
        jp: &ElementSet,
        witness: &ElementSet,
        n: usize,
        contracted: &TemplateSet,
    ) -> bool {
        witness.iter().all(|e| j.contains(e) && !jp.contains(e))
            && self
                .relative_rank_any(i, &j.difference(&TemplateSet::from(witness)).union(contracted))
                .at_least(n as u64)
    }
}

/// A multiset of steps (each drawn from `steps`, repetition allowed) that
/// brings `start` to zero, if one exists. Any such walk can be reordered to
/// stay inside `[min(start, 0) − D, max(start, 0) + D]` with `D` the largest
/// step size, so a breadth-first search over that window is exact.
fn balance(start: i64, steps: &[i64]) -> Option<Vec<i64>> {
    if start == 0 {
        return Some(vec![]);
    }
    let d = steps.iter().map(|g| g.abs()).max()?;
    let (lo, hi) = (start.min(0) - d, start.max(0) + d);
    let mut prev: HashMap<i64, i64> = HashMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &g in steps {
            let w = v + g;
            if w < lo || w > hi || prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, g);
            if w == 0 {
                let mut used = vec![];
                let mut at = 0;
                while at != start {
                    let g = prev[&at];
                    used.push(g);
                    at -= g;
                }
                return Some(used);
            }
            queue.push_back(w);
        }
    }
    None
}

impl fmt::Display for FinitaryMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.schema {
            Schema::Free => f.write_str("free"),
            Schema::PeriodicDirectSum(m0) => write!(f, "periodic-direct-sum({}, {} elements)", m0.kind(), m0.len()),
        }
    }
}
