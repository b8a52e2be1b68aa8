//! Almost spanning (`I ⊴ J` iff `r(I|J) < ∞`), strong equivalence
//! (`r(I|J) = r(J|I) < ∞`), and classification of equivalence classes.
//!
//! Answers are three-valued. Finite matroids and schema-backed finitary
//! matroids always decide; a black-box [`FinitaryOracle`] decides only what
//! template algebra settles and otherwise answers `Unknown`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finitary::{FinitaryMatroid, Rank};
use crate::finite::FiniteMatroid;
use crate::set::ElementSet;
use crate::template::TemplateSet;

/// A finitary matroid known only through finite independence queries.
pub trait FinitaryOracle: Sync {
    fn is_independent(&self, set: &ElementSet) -> bool;
    fn fingerprint(&self) -> u64;
}

#[derive(Clone, Copy)]
pub enum Ambient<'a> {
    Finite(&'a FiniteMatroid),
    Finitary(&'a FinitaryMatroid),
    Oracle(&'a dyn FinitaryOracle),
}

impl Ambient<'_> {
    pub fn fingerprint(&self) -> u64 {
        match self {
            Ambient::Finite(m) => m.fingerprint(),
            Ambient::Finitary(m) => m.fingerprint(),
            Ambient::Oracle(o) => o.fingerprint(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Carrier {
    Finite(ElementSet),
    Template(TemplateSet),
}

impl Carrier {
    pub fn to_template(&self) -> TemplateSet {
        match self {
            Carrier::Finite(s) => TemplateSet::from(s),
            Carrier::Template(t) => t.clone(),
        }
    }

    /// The elements when there are finitely many.
    pub fn finite_elements(&self) -> Option<ElementSet> {
        match self {
            Carrier::Finite(s) => Some(s.clone()),
            Carrier::Template(t) => t.finite_elements(),
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Finite(s) => write!(f, "{s}"),
            Carrier::Template(t) => write!(f, "{t}"),
        }
    }
}

/// A set certified independent in one particular ambient matroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndepSet {
    carrier: Carrier,
    ambient: u64,
}

impl IndepSet {
    /// Certifies `carrier` in `ambient`. For a black-box oracle an infinite
    /// template is only checked on its first `fuel` elements.
    pub fn new(ambient: Ambient<'_>, carrier: Carrier, fuel: usize) -> Result<Self> {
        let independent = match (&ambient, &carrier) {
            (Ambient::Finite(_), Carrier::Template(_)) => return Err(Error::TemplateOnFinite),
            (Ambient::Finite(m), Carrier::Finite(s)) => m.is_independent(s)?,
            (Ambient::Finitary(m), Carrier::Finite(s)) => m.is_independent_finite(s),
            (Ambient::Finitary(m), Carrier::Template(t)) => m.is_independent(t),
            (Ambient::Oracle(o), c) => match c.finite_elements() {
                Some(s) => o.is_independent(&s),
                None => {
                    let Carrier::Template(t) = c else { unreachable!() };
                    o.is_independent(&t.iter().take(fuel).collect())
                }
            },
        };
        if !independent {
            return Err(Error::NotIndependent(carrier.to_string()));
        }
        Ok(IndepSet {
            carrier,
            ambient: ambient.fingerprint(),
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn to_template(&self) -> TemplateSet {
        self.carrier.to_template()
    }

    pub fn is_finite(&self) -> bool {
        self.carrier.finite_elements().is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "label", content = "value", rename_all = "kebab-case")]
pub enum ClassLabel {
    Finite(u64),
    Cofinite(u64),
    WildCandidate,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Finite(k) => write!(f, "finite({k})"),
            ClassLabel::Cofinite(n) => write!(f, "cofinite({n})"),
            ClassLabel::WildCandidate => f.write_str("wild-candidate"),
        }
    }
}

fn same_ambient(ambient: &Ambient<'_>, sets: &[&IndepSet]) -> Result<()> {
    let fp = ambient.fingerprint();
    if sets.iter().any(|s| s.ambient != fp) {
        return Err(Error::ForeignCarrier);
    }
    Ok(())
}

fn finite_carrier<'s>(s: &'s IndepSet) -> Result<&'s ElementSet> {
    match &s.carrier {
        Carrier::Finite(x) => Ok(x),
        Carrier::Template(_) => Err(Error::TemplateOnFinite),
    }
}

/// `I ⊴ J`.
pub fn almost_spans(ambient: Ambient<'_>, i: &IndepSet, j: &IndepSet, _fuel: usize) -> Result<Truth> {
    same_ambient(&ambient, &[i, j])?;
    Ok(match ambient {
        Ambient::Finite(_) => Truth::True,
        Ambient::Finitary(m) => m.relative_rank_any(&i.to_template(), &j.to_template()).is_finite().into(),
        Ambient::Oracle(_) => {
            if i.to_template().difference(&j.to_template()).is_finite() {
                Truth::True
            } else {
                Truth::Unknown
            }
        }
    })
}

/// `I ~ J`. When one of the differences is finite the answer is
/// `|I ∖ J| = |J ∖ I|`; otherwise both relative ranks of `X = I ∪ J` are
/// compared.
pub fn strongly_equivalent(ambient: Ambient<'_>, i: &IndepSet, j: &IndepSet, _fuel: usize) -> Result<Truth> {
    same_ambient(&ambient, &[i, j])?;
    let (it, jt) = (i.to_template(), j.to_template());
    let (i_minus_j, j_minus_i) = (it.difference(&jt), jt.difference(&it));
    if i_minus_j.is_finite() || j_minus_i.is_finite() {
        let (a, b) = (i_minus_j.finite_elements(), j_minus_i.finite_elements());
        return Ok(match (a, b) {
            (Some(a), Some(b)) => (a.len() == b.len()).into(),
            _ => Truth::False,
        });
    }
    Ok(match ambient {
        Ambient::Finite(_) => unreachable!("finite carriers have finite differences"),
        Ambient::Finitary(m) => {
            let x = it.union(&jt);
            let (over_i, over_j) = (m.relative_rank_any(&x, &it), m.relative_rank_any(&x, &jt));
            (over_i.is_finite() && over_i == over_j).into()
        }
        Ambient::Oracle(_) => Truth::Unknown,
    })
}

/// The class label of `[I]`: `finite(|I|)` for finite `I`, `cofinite(r(M/I))`
/// when that is finite, `wild-candidate` otherwise.
pub fn classify_class(ambient: Ambient<'_>, i: &IndepSet) -> Result<ClassLabel> {
    same_ambient(&ambient, &[i])?;
    if let Some(s) = i.carrier.finite_elements() {
        return Ok(ClassLabel::Finite(s.len() as u64));
    }
    match ambient {
        Ambient::Finite(_) => unreachable!("finite matroids only carry finite sets"),
        Ambient::Finitary(m) => Ok(match m.corank(&i.to_template()) {
            Rank::Finite(n) => ClassLabel::Cofinite(n),
            Rank::Infinite => ClassLabel::WildCandidate,
        }),
        Ambient::Oracle(_) => Err(Error::Undecidable(
            "the corank of an infinite set is not decidable through an independence oracle".into(),
        )),
    }
}

/// Whether `r(X|I) = r(X|J)`, for `I ∪ J ⊆ X` with both ranks finite.
pub fn relative_rank_difference_check(ambient: Ambient<'_>, i: &IndepSet, j: &IndepSet, x: &Carrier) -> Result<bool> {
    same_ambient(&ambient, &[i, j])?;
    let xt = x.to_template();
    if !i.to_template().union(&j.to_template()).is_subset(&xt) {
        return Err(Error::Precondition("I ∪ J is not contained in X".into()));
    }
    match ambient {
        Ambient::Finite(m) => {
            let Carrier::Finite(xs) = x else {
                return Err(Error::TemplateOnFinite);
            };
            if !xs.is_subset(&m.ground_set()) {
                return Err(Error::Precondition("X is not contained in the ground set".into()));
            }
            Ok(m.relative_rank(xs, finite_carrier(i)?)? == m.relative_rank(xs, finite_carrier(j)?)?)
        }
        Ambient::Finitary(m) => {
            let (a, b) = (m.relative_rank_any(&xt, &i.to_template()), m.relative_rank_any(&xt, &j.to_template()));
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Precondition("relative ranks over I and J must be finite".into()));
            }
            Ok(a == b)
        }
        Ambient::Oracle(_) => Err(Error::Undecidable("relative ranks need a schema-backed matroid".into())),
    }
}
