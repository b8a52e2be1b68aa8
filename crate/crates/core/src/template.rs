//! Eventually periodic subsets of ℕ.
//!
//! A template denotes `{ n ≥ t : n mod d ∈ residues } ∪ low ∖ minus`. Values are
//! kept in a canonical form (minimal period, minimal threshold, no exception
//! set), so structural equality is set equality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::set::{Element, ElementSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TemplateSet {
    period: u64,
    residues: BTreeSet<u64>,
    threshold: u64,
    low: BTreeSet<u64>,
}

impl TemplateSet {
    /// Builds and normalises a template. `low` must lie below `t` and every
    /// residue below `d`; `minus` is an arbitrary finite exception set.
    pub fn new(
        d: u64,
        residues: impl IntoIterator<Item = u64>,
        t: u64,
        low: impl IntoIterator<Item = u64>,
        minus: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidTemplate("period must be positive".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if let Some(&r) = residues.iter().find(|&&r| r >= d) {
            return Err(Error::InvalidTemplate(format!("residue {r} not below period {d}")));
        }
        let low: BTreeSet<u64> = low.into_iter().collect();
        if let Some(&x) = low.iter().find(|&&x| x >= t) {
            return Err(Error::InvalidTemplate(format!("low element {x} not below threshold {t}")));
        }
        let minus: BTreeSet<u64> = minus.into_iter().collect();
        let raw = TemplateSet { period: d, residues, threshold: t, low };
        // raise the threshold past every exception, then drop them from the explicit part
        let t2 = minus.last().map_or(t, |&m| t.max(m + 1));
        let low2: BTreeSet<u64> = (0..t2).filter(|&n| raw.contains(n) && !minus.contains(&n)).collect();
        Ok(Self::canonical(d, raw.residues, t2, low2))
    }

    fn canonical(d: u64, residues: BTreeSet<u64>, mut t: u64, mut low: BTreeSet<u64>) -> Self {
        let mut period = d;
        for cand in (1..=d).filter(|c| d % c == 0) {
            if residues.iter().all(|r| residues.contains(&((r + cand) % d))) {
                period = cand;
                break;
            }
        }
        let residues: BTreeSet<u64> = residues.into_iter().filter(|&r| r < period).collect();
        while t > 0 {
            let x = t - 1;
            if low.contains(&x) != residues.contains(&(x % period)) {
                break;
            }
            low.remove(&x);
            t = x;
        }
        TemplateSet { period, residues, threshold: t, low }
    }

    pub fn empty() -> Self {
        Self::canonical(1, BTreeSet::new(), 0, BTreeSet::new())
    }

    pub fn all() -> Self {
        Self::canonical(1, [0].into(), 0, BTreeSet::new())
    }

    pub fn evens() -> Self {
        Self::multiples(2, 0)
    }

    pub fn odds() -> Self {
        Self::multiples(2, 1)
    }

    /// `{ offset + k·i : i ≥ 0 }`.
    pub fn multiples(k: u64, offset: u64) -> Self {
        assert!(k > 0, "step must be positive");
        Self::canonical(k, [offset % k].into(), offset, BTreeSet::new())
    }

    /// `{ n ≥ t : n mod d = r }` for a single residue.
    pub fn progression(d: u64, r: u64, t: u64) -> Result<Self> {
        Self::new(d, [r % d.max(1)], t, [], [])
    }

    pub fn finite(elements: impl IntoIterator<Item = Element>) -> Self {
        let low: BTreeSet<u64> = elements.into_iter().collect();
        let t = low.last().map_or(0, |m| m + 1);
        Self::canonical(1, BTreeSet::new(), t, low)
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn residues(&self) -> &BTreeSet<u64> {
        &self.residues
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn low(&self) -> &BTreeSet<u64> {
        &self.low
    }

    pub fn contains(&self, n: Element) -> bool {
        if n < self.threshold {
            self.low.contains(&n)
        } else {
            self.residues.contains(&(n % self.period))
        }
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.low.is_empty()
    }

    /// The elements, if there are finitely many.
    pub fn finite_elements(&self) -> Option<ElementSet> {
        self.is_finite().then(|| self.low.iter().copied().collect())
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let l = self.period.lcm(&other.period);
        let t = self.threshold.max(other.threshold);
        let at = |n: u64| op(self.contains(n), other.contains(n));
        let low = (0..t).filter(|&n| at(n)).collect();
        let residues = (t..t + l).filter(|&n| at(n)).map(|n| n % l).collect();
        Self::canonical(l, residues, t, low)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    /// `self ∖ other`; with `self` as the ambient set this is the complement
    /// of `other` within it.
    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn patch(&self, add: &ElementSet, remove: &ElementSet) -> Self {
        self.union(&Self::finite(add.iter()))
            .difference(&Self::finite(remove.iter()))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).is_empty()
    }

    /// Ascending enumeration; infinite when the template is.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let block: Vec<u64> = if self.residues.is_empty() {
            Vec::new()
        } else {
            (self.threshold..self.threshold + self.period)
                .filter(|&n| self.contains(n))
                .collect()
        };
        let period = self.period;
        let tail = (0u64..).flat_map(move |k| {
            let block = block.clone();
            block.into_iter().map(move |b| b + k * period)
        });
        let tail: Box<dyn Iterator<Item = Element>> = if self.residues.is_empty() {
            Box::new(std::iter::empty())
        } else {
            Box::new(tail)
        };
        self.low.iter().copied().chain(tail)
    }

    /// The `i`-th element in ascending order (0-based).
    pub fn nth(&self, i: u64) -> Option<Element> {
        let c = self.low.len() as u64;
        if i < c {
            return self.low.iter().nth(i as usize).copied();
        }
        if self.residues.is_empty() {
            return None;
        }
        let k = self.residues.len() as u64;
        let j = i - c;
        let block: Vec<u64> = (self.threshold..self.threshold + self.period)
            .filter(|&n| self.contains(n))
            .collect();
        Some(block[(j % k) as usize] + (j / k) * self.period)
    }

    /// The smallest `k` elements not in `avoid`, or fewer if the set runs out.
    pub fn smallest(&self, k: usize, avoid: &ElementSet) -> Vec<Element> {
        let max_scan = avoid.len() + k;
        self.iter()
            .take(max_scan)
            .filter(|e| !avoid.contains(*e))
            .take(k)
            .collect()
    }

    pub fn elements_below(&self, bound: Element) -> ElementSet {
        if bound <= self.threshold {
            return self.low.range(..bound).copied().collect();
        }
        self.iter().take_while(|&e| e < bound).collect()
    }

    /// Everything lies below this value or is determined by the periodic part.
    pub fn horizon(&self) -> u64 {
        self.threshold
    }

    /// `{ base.nth(i) : i ∈ index }`: `index` read as positions inside the
    /// ascending enumeration of the infinite set `base`.
    pub fn compose(base: &TemplateSet, index: &TemplateSet) -> Result<TemplateSet> {
        if base.is_finite() {
            return Err(Error::InvalidTemplate("composition needs an infinite base".into()));
        }
        let k = base.residues.len() as u64;
        let shift = base.period;
        let i0 = base.low.len() as u64;
        let p = index.period.lcm(&k);
        let i1 = i0.max(index.threshold);
        let nth = |i: u64| base.nth(i).expect("infinite base");
        let low: Vec<u64> = index.iter().take_while(|&i| i < i1).map(nth).collect();
        if index.is_finite() {
            return Ok(Self::finite(low));
        }
        let period = shift * (p / k);
        let t = nth(i1);
        let residues: Vec<u64> = (i1..i1 + p)
            .filter(|&i| index.contains(i))
            .map(|i| nth(i) % period)
            .collect();
        Self::new(period, residues, t, low, [])
    }
}

impl From<&ElementSet> for TemplateSet {
    fn from(s: &ElementSet) -> Self {
        TemplateSet::finite(s.iter())
    }
}

fn join(set: &BTreeSet<u64>) -> String {
    set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for TemplateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "template d={} res={} t={} low={}",
            self.period,
            join(&self.residues),
            self.threshold,
            join(&self.low)
        )
    }
}

impl fmt::Debug for TemplateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_list(key: &str, value: &str) -> Result<Vec<u64>> {
    value
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidTemplate(format!("bad number '{s}' in {key}=")))
        })
        .collect()
}

impl FromStr for TemplateSet {
    type Err = Error;

    /// Accepts `template d=.. res=.. t=.. low=.. minus=..` and the shorthands
    /// `evens`, `odds`, `all`, `empty`, `mult <k> [offset]`.
    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let num = |w: &str| -> Result<u64> {
            w.parse().map_err(|_| Error::InvalidTemplate(format!("bad number '{w}'")))
        };
        match words.as_slice() {
            ["evens"] => Ok(Self::evens()),
            ["odds"] => Ok(Self::odds()),
            ["all"] => Ok(Self::all()),
            ["empty"] => Ok(Self::empty()),
            ["mult", k] | ["mult", k, _] => {
                let k = num(k)?;
                if k == 0 {
                    return Err(Error::InvalidTemplate("mult needs a positive step".into()));
                }
                let offset = match words.get(2) {
                    Some(o) => num(o)?,
                    None => 0,
                };
                Ok(Self::multiples(k, offset))
            }
            ["template", rest @ ..] => {
                let (mut d, mut res, mut t, mut low, mut minus) = (None, vec![], 0, vec![], vec![]);
                let mut seen = BTreeSet::new();
                for field in rest {
                    let (key, value) = field
                        .split_once('=')
                        .ok_or_else(|| Error::InvalidTemplate(format!("expected key=value, got '{field}'")))?;
                    if !seen.insert(key) {
                        return Err(Error::InvalidTemplate(format!("duplicate field {key}")));
                    }
                    match key {
                        "d" => d = Some(num(value)?),
                        "res" => res = parse_list(key, value)?,
                        "t" => t = num(value)?,
                        "low" => low = parse_list(key, value)?,
                        "minus" => minus = parse_list(key, value)?,
                        _ => return Err(Error::InvalidTemplate(format!("unknown field '{key}'"))),
                    }
                }
                let d = d.ok_or_else(|| Error::InvalidTemplate("missing d=".into()))?;
                Self::new(d, res, t, low, minus)
            }
            _ => Err(Error::InvalidTemplate(format!("unrecognised template '{s}'"))),
        }
    }
}
