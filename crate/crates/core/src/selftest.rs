//! Seeded invariant suites behind `selftest lemmas` and `selftest oracle`.
//! Each suite recomputes its checks through a second route and counts
//! disagreements.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus;
use crate::equivalence::{self, Ambient, Carrier, IndepSet, Truth};
use crate::error::Result;
use crate::finitary::{FinitaryMatroid, Rank};
use crate::finite::FiniteMatroid;
use crate::gentrunc;
use crate::set::{bits, submasks, ElementSet, Mask};
use crate::template::TemplateSet;
use crate::truncation::{classify_truncation, truncate_to, TruncationLevel};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            checked: 0,
            failures: vec![],
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_submask(rng: &mut ChaCha8Rng, within: Mask) -> Mask {
    bits(within).filter(|_| rng.gen_bool(0.5)).fold(0, |acc, p| acc | 1 << p)
}

/// Additivity of relative rank along random chains `C ⊆ B ⊆ A`.
fn chain_additivity(seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("relative-rank-chains");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for entry in corpus::random_entries(seed, 12) {
        let m = &entry.matroid;
        for _ in 0..500 {
            let a = random_submask(&mut rng, m.ground_mask());
            let b = random_submask(&mut rng, a);
            let c = random_submask(&mut rng, b);
            let lhs = m.relative_rank_mask(a, c);
            let rhs = m.relative_rank_mask(a, b) + m.relative_rank_mask(b, c);
            out.check(lhs == rhs, || format!("{}: chain {a:b} ⊇ {b:b} ⊇ {c:b}", entry.name));
        }
    }
    out
}

/// Strong equivalence of finite independent sets against the definition
/// `r(I|J) = r(J|I)`, and the rank-difference criterion against it.
fn finite_equivalence() -> SuiteResult {
    let mut out = SuiteResult::new("finite-equivalence");
    for entry in corpus::explicit_entries() {
        let m = &entry.matroid;
        let amb = Ambient::Finite(m);
        let indep = m.independent_masks().expect("small corpus");
        let wrap = |s: Mask| IndepSet::new(amb, Carrier::Finite(m.set_of(s)), 0).expect("independent");
        for &i in &indep {
            for &j in &indep {
                let by_definition = m.relative_rank_mask(i, j) == m.relative_rank_mask(j, i);
                let answer = equivalence::strongly_equivalent(amb, &wrap(i), &wrap(j), 0).expect("same ambient");
                out.check(answer == Truth::from(by_definition), || format!("{}: {i:b} ~ {j:b}", entry.name));
                let x = Carrier::Finite(m.set_of(i | j));
                let diff = equivalence::relative_rank_difference_check(amb, &wrap(i), &wrap(j), &x).expect("I ∪ J ⊆ X");
                out.check(diff == by_definition, || format!("{}: rank difference at {i:b}, {j:b}", entry.name));
            }
        }
    }
    out
}

/// Truncations classify back to their level, and the enumerated generalised
/// truncations are exactly the truncations.
fn truncation_levels() -> SuiteResult {
    let mut out = SuiteResult::new("truncation-levels");
    for entry in corpus::uniform_entries().into_iter().chain(corpus::explicit_entries()) {
        let m = &entry.matroid;
        let families = gentrunc::enumerate_gen_truncations(m).expect("small corpus");
        out.check(families.len() == m.full_rank() + 1, || format!("{}: family count", entry.name));
        for k in 0..=m.full_rank() {
            let t = truncate_to(m, k).expect("level in range");
            let expected = if k == m.full_rank() {
                TruncationLevel::Trivial
            } else {
                TruncationLevel::Level(k)
            };
            let level = classify_truncation(m, &t).expect("same ground");
            out.check(level == Some(expected), || format!("{}: level {k}", entry.name));
            let bases = t.bases().expect("small corpus");
            out.check(families.contains(&bases), || format!("{}: level {k} not enumerated", entry.name));
        }
    }
    out
}

fn random_template(rng: &mut ChaCha8Rng, within: &TemplateSet, p: f64) -> TemplateSet {
    let d = [1u64, 2, 3, 4, 6, 8][rng.gen_range(0..6)];
    let residues: Vec<u64> = (0..d).filter(|_| rng.gen_bool(p)).collect();
    let t = rng.gen_range(0..12u64);
    let low: Vec<u64> = (0..t).filter(|_| rng.gen_bool(p)).collect();
    TemplateSet::new(d, residues, t, low, vec![])
        .expect("valid template")
        .intersection(within)
}

/// Exchange witnesses on random infinite independent pairs.
fn exchange_witnesses(seed: u64) -> SuiteResult {
    let mut out = SuiteResult::new("exchange-witnesses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x8);
    let schemas = [
        FinitaryMatroid::free(),
        FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(1, 2).expect("valid")).expect("valid"),
        FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(2, 3).expect("valid")).expect("valid"),
    ];
    let mut attempts = 0;
    while out.checked < 300 && attempts < 20_000 {
        attempts += 1;
        let mf = schemas.choose(&mut rng).expect("non-empty");
        let all = TemplateSet::all();
        let i = mf.max_independent_subset_over(&random_template(&mut rng, &all, 0.5), &TemplateSet::empty());
        let j = mf.max_independent_subset_over(&random_template(&mut rng, &all, 0.5), &TemplateSet::empty());
        if !i.is_infinite() || !j.is_infinite() || !mf.relative_rank_any(&i, &j).is_finite() {
            continue;
        }
        let jp: ElementSet = j.iter().take(12).filter(|_| rng.gen_bool(0.3)).collect();
        let n = rng.gen_range(0..=6usize);
        let witness = match mf.lemma8_witness(&i, &j, &jp, n) {
            Ok(w) => w,
            Err(e) => {
                out.check(false, || format!("I={i} J={j} Jp={jp} n={n}: {e}"));
                continue;
            }
        };
        let rest = j.difference(&TemplateSet::from(&witness));
        let ok = witness.iter().all(|e| j.contains(e) && !jp.contains(e))
            && mf.relative_rank_any(&i, &rest).at_least(n as u64);
        out.check(ok, || format!("I={i} J={j} Jp={jp} n={n} witness={witness}"));
    }
    out
}

pub fn run_lemmas(seed: u64) -> Vec<SuiteResult> {
    vec![
        chain_additivity(seed),
        finite_equivalence(),
        truncation_levels(),
        exchange_witnesses(seed),
    ]
}

/// Schema relative ranks against the finite kernel on restrictions `[0, N)`.
pub fn run_oracle(seed: u64) -> Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schemas = [
        ("free", FinitaryMatroid::free()),
        (
            "pairs",
            FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(1, 2)?)?,
        ),
        ("triangles", FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(2, 3)?)?),
    ];
    let mut out = vec![];
    for (name, mf) in &schemas {
        let mut suite = SuiteResult::new(name);
        for n in [8usize, 16, 32] {
            let finite = mf.restrict(n)?;
            let window = TemplateSet::finite(0..n as u64);
            for _ in 0..200 {
                let x = random_template(&mut rng, &window, 0.5);
                let y = random_template(&mut rng, &window, 0.5);
                let (xs, ys) = (x.finite_elements().expect("finite"), y.finite_elements().expect("finite"));
                let expected = Rank::Finite(finite.relative_rank(&xs, &ys)? as u64);
                suite.check(mf.relative_rank_any(&x, &y) == expected, || format!("N={n} X={xs} Y={ys}"));
            }
            for s in submasks(finite.ground_mask() & 0xff) {
                let set = finite.set_of(s);
                suite.check(
                    finite.is_independent(&set)? == mf.is_independent_finite(&set),
                    || format!("independence of {set}"),
                );
            }
        }
        out.push(suite);
    }
    Ok(out)
}
