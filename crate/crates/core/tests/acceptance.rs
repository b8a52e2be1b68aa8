//! Acceptance suite: ten criteria, each printed as one PASS/FAIL line.
//! Every check is exact; the only pinned tolerances are the sample sizes and
//! time budgets below.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matroid_forge::corpus;
use matroid_forge::equivalence::{self, Ambient, Carrier, IndepSet, Truth};
use matroid_forge::finitary::{FinitaryMatroid, Schema};
use matroid_forge::finite::check_base_axioms_masks;
use matroid_forge::forcing::{self, DenseId, DenseKind};
use matroid_forge::format::{
    emit_family_file, emit_matroid_file, emit_task_file, parse_family_file, parse_matroid_file, parse_task_file,
};
use matroid_forge::gentrunc::{self, FamilyChecker, TruncationFamily};
use matroid_forge::set::{bits, submasks, ElementSet, Mask};
use matroid_forge::template::TemplateSet;
use matroid_forge::truncation::truncate_to;
use matroid_forge::FiniteMatroid;

const SEED: u64 = 0x5eed_2024;
/// Exhaustive family enumeration up to this many independent sets.
const EXHAUSTIVE_INDEPENDENTS: usize = 16;
/// Random candidate families per matroid above that bound.
const SAMPLED_FAMILIES: usize = 4000;
const QUADRUPLES_PER_MATROID: usize = 10_000;
const RANDOM_TRIPLES: usize = 100_000;
const PAIRS_PER_WINDOW: usize = 1000;
const WITNESS_INSTANCES: usize = 1000;
const MAX_DEPTH: usize = 8;
const SEED_LENGTH: usize = 6;
/// Elements inspected by the windowed rank oracle.
const WINDOW: u64 = 4096;

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Ranks computed from the base list alone: `r(S) = max |S ∩ B|`.
struct BaseOracle {
    bases: Vec<Mask>,
    n: usize,
}

impl BaseOracle {
    fn new(m: &FiniteMatroid) -> Self {
        let bases = m
            .bases()
            .unwrap()
            .iter()
            .map(|b| m.mask_of(b).unwrap())
            .collect();
        BaseOracle { bases, n: m.len() }
    }

    fn rank(&self, s: Mask) -> u32 {
        self.bases.iter().map(|b| (b & s).count_ones()).max().unwrap_or(0)
    }

    fn rel(&self, x: Mask, y: Mask) -> u32 {
        self.rank(x | y) - self.rank(y)
    }

    fn independent(&self, s: Mask) -> bool {
        self.bases.iter().any(|b| s & !b == 0)
    }

    fn independents(&self) -> Vec<Mask> {
        (0..1u64 << self.n).filter(|&s| self.independent(s)).collect()
    }
}

/// Definition check of a generalised truncation with base family `f`:
/// base exchange for `f`, independent sets inside `𝓘(M)`, and the
/// augmentation property.
fn is_gen_truncation_by_definition(oracle: &BaseOracle, f: &[Mask]) -> bool {
    if f.is_empty() {
        return false;
    }
    let members: BTreeSet<Mask> = f.iter().copied().collect();
    for &b0 in f {
        for &b1 in f {
            for x in bits(b0 & !b1) {
                let b = b0 & !(1 << x);
                if !bits(b1 & !b0).any(|y| members.contains(&(b | 1 << y))) {
                    return false;
                }
            }
        }
    }
    let below = |s: Mask| f.iter().any(|b| s & !b == 0);
    let full = (1u64 << oracle.n) - 1;
    for s in 0..=full {
        if !below(s) {
            continue;
        }
        if !oracle.independent(s) {
            return false;
        }
        if members.contains(&s) {
            continue;
        }
        for e in bits(full & !s) {
            let t = s | 1 << e;
            if oracle.independent(t) && !below(t) {
                return false;
            }
        }
    }
    true
}

fn explicit_from(m: &FiniteMatroid, f: &[Mask]) -> FiniteMatroid {
    let bases: Vec<Vec<u64>> = f.iter().map(|&b| m.set_of(b).to_vec()).collect();
    FiniteMatroid::explicit(m.ground(), &bases).expect("base axioms already checked")
}

fn candidate_families(oracle: &BaseOracle, indep: &[Mask], rng: &mut ChaCha8Rng) -> (Vec<Vec<Mask>>, bool) {
    if indep.len() <= EXHAUSTIVE_INDEPENDENTS {
        let all = (0u64..1 << indep.len())
            .map(|pick| bits(pick).map(|i| indep[i]).collect())
            .collect();
        return (all, true);
    }
    let r = oracle.rank((1 << oracle.n) - 1) as usize;
    let level = |k: usize| -> Vec<Mask> { indep.iter().copied().filter(|s| s.count_ones() as usize == k).collect() };
    let mut out: Vec<Vec<Mask>> = vec![];
    for choice in 1u64..1 << (r + 1) {
        out.push(bits(choice).flat_map(level).collect());
    }
    for k in 0..=r {
        let lv = level(k);
        for drop in 0..lv.len() {
            let mut f = lv.clone();
            f.remove(drop);
            out.push(f);
        }
        for &extra in indep.iter().filter(|s| s.count_ones() as usize != k).take(40) {
            let mut f = lv.clone();
            f.push(extra);
            f.sort_unstable();
            out.push(f);
        }
    }
    while out.len() < SAMPLED_FAMILIES {
        let p = rng.gen_range(0.02..0.6);
        out.push(indep.iter().copied().filter(|_| rng.gen_bool(p)).collect());
    }
    (out, false)
}

fn c1_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut checked, mut passing, mut exhaustive, mut sampled) = (0usize, 0usize, 0usize, 0usize);
    for entry in corpus::corpus() {
        let m = &entry.matroid;
        let oracle = BaseOracle::new(m);
        let indep = oracle.independents();
        let checker = FamilyChecker::new(m).map_err(err)?;
        let (families, full) = candidate_families(&oracle, &indep, &mut rng);
        if full {
            exhaustive += 1;
        } else {
            sampled += 1;
        }
        for f in &families {
            let verified = checker.passes(f);
            let axioms = check_base_axioms_masks(m.len(), f).is_none();
            let structural = axioms
                && gentrunc::verify_is_gen_truncation(m, &explicit_from(m, f))
                    .map_err(err)?
                    .is_ok();
            let definition = is_gen_truncation_by_definition(&oracle, f);
            ensure(verified == structural && verified == definition, || {
                format!(
                    "{}: family {:?} verifier={verified} axioms+definition={structural} oracle={definition}",
                    entry.name,
                    f.iter().map(|&b| m.set_of(b).to_string()).collect::<Vec<_>>()
                )
            })?;
            checked += 1;
            passing += usize::from(verified);
        }
    }
    Ok(format!(
        "{checked} families ({passing} passing); {exhaustive} matroids exhaustive, {sampled} sampled"
    ))
}

fn c2_enumeration() -> Outcome {
    let mut compared = 0;
    for entry in corpus::corpus() {
        let m = &entry.matroid;
        if BaseOracle::new(m).independents().len() > EXHAUSTIVE_INDEPENDENTS {
            continue;
        }
        let by_levels = gentrunc::enumerate_gen_truncations(m).map_err(err)?;
        let raw = gentrunc::enumerate_raw(m).map_err(err)?;
        ensure(by_levels == raw, || format!("{}: level enumeration differs from brute force", entry.name))?;
        compared += 1;
    }
    Ok(format!("{compared} matroids compared"))
}

fn c3_classification() -> Outcome {
    let mut total = 0;
    for entry in corpus::corpus() {
        let m = &entry.matroid;
        let oracle = BaseOracle::new(m);
        let r = m.full_rank();
        let found = gentrunc::enumerate_gen_truncations(m).map_err(err)?;
        ensure(found.len() == r + 1, || format!("{}: {} families, rank {r}", entry.name, found.len()))?;
        let indep = oracle.independents();
        let expected: BTreeSet<_> = (0..=r)
            .map(|k| {
                let own: BTreeSet<ElementSet> = indep
                    .iter()
                    .filter(|s| s.count_ones() as usize == k)
                    .map(|&s| m.set_of(s))
                    .collect();
                let lib: BTreeSet<ElementSet> = truncate_to(m, k).unwrap().bases().unwrap().iter().cloned().collect();
                assert_eq!(own, lib, "{}: level {k}", entry.name);
                own
            })
            .collect();
        let got: BTreeSet<BTreeSet<ElementSet>> = found.iter().map(|f| f.iter().cloned().collect()).collect();
        ensure(got == expected, || format!("{}: families are not the truncations", entry.name))?;
        total += found.len();
    }
    Ok(format!("{total} families identified as k-truncations"))
}

fn c4_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let (mut matroids, mut rank_triples, mut quads) = (0usize, 0usize, 0usize);
    for entry in corpus::corpus().into_iter().filter(|e| e.matroid.len() <= 5) {
        let m = &entry.matroid;
        let oracle = BaseOracle::new(m);
        let indep = oracle.independents();
        let amb = Ambient::Finite(m);
        let wrap: Vec<IndepSet> = indep
            .iter()
            .map(|&s| IndepSet::new(amb, Carrier::Finite(m.set_of(s)), 0).unwrap())
            .collect();
        let k = indep.len();
        let mut eq = vec![vec![false; k]; k];
        for a in 0..k {
            for b in 0..k {
                let t = equivalence::strongly_equivalent(amb, &wrap[a], &wrap[b], 0).map_err(err)?;
                eq[a][b] = t == Truth::True;
                let (i, j) = (indep[a], indep[b]);
                let definition = oracle.rel(i, j) == oracle.rel(j, i);
                ensure(eq[a][b] == definition, || format!("{}: ~ disagrees with definition", entry.name))?;
                let sizes = (i & !j).count_ones() == (j & !i).count_ones();
                ensure(eq[a][b] == sizes, || format!("{}: difference-size criterion fails", entry.name))?;
            }
        }
        for a in 0..k {
            ensure(eq[a][a], || format!("{}: not reflexive", entry.name))?;
            for b in 0..k {
                ensure(eq[a][b] == eq[b][a], || format!("{}: not symmetric", entry.name))?;
                if !eq[a][b] {
                    continue;
                }
                for c in 0..k {
                    ensure(!eq[b][c] || eq[a][c], || format!("{}: not transitive", entry.name))?;
                }
            }
        }
        let full = m.ground_mask();
        for a in 0..k {
            for b in 0..k {
                let (i, j) = (indep[a], indep[b]);
                for extra in submasks(full & !(i | j)) {
                    let x = i | j | extra;
                    let equal = oracle.rel(x, i) == oracle.rel(x, j);
                    // forward: I ~ J forces equality; backward: equality forces I ~ J
                    ensure(equal == eq[a][b], || format!("{}: rank-difference criterion at X={x:b}", entry.name))?;
                    let lib = equivalence::relative_rank_difference_check(amb, &wrap[a], &wrap[b], &Carrier::Finite(m.set_of(x)))
                        .map_err(err)?;
                    ensure(lib == equal, || format!("{}: library rank-difference check", entry.name))?;
                    rank_triples += 1;
                }
            }
        }
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (a, s) in indep.iter().enumerate() {
            classes.entry(s.count_ones()).or_default().push(a);
        }
        for _ in 0..QUADRUPLES_PER_MATROID {
            let a = rng.gen_range(0..k);
            let b = rng.gen_range(0..k);
            let a2 = *classes[&indep[a].count_ones()].choose(&mut rng).unwrap();
            let b2 = *classes[&indep[b].count_ones()].choose(&mut rng).unwrap();
            ensure(eq[a][a2] && eq[b][b2], || format!("{}: class sampling", entry.name))?;
            let x = equivalence::almost_spans(amb, &wrap[a], &wrap[b], 0).map_err(err)?;
            let y = equivalence::almost_spans(amb, &wrap[a2], &wrap[b2], 0).map_err(err)?;
            ensure(x == y, || format!("{}: almost spanning not class-compatible", entry.name))?;
            quads += 1;
        }
        matroids += 1;
    }
    Ok(format!("{matroids} matroids; {rank_triples} (I, J, X) triples; {quads} quadruples"))
}

fn c5_additivity() -> Outcome {
    let mut chains = 0usize;
    for entry in corpus::corpus().into_iter().filter(|e| e.matroid.len() <= 6) {
        let m = &entry.matroid;
        let oracle = BaseOracle::new(m);
        for a in submasks(m.ground_mask()) {
            for b in submasks(a) {
                for c in submasks(b) {
                    let lhs = m.relative_rank_mask(a, c);
                    let rhs = m.relative_rank_mask(a, b) + m.relative_rank_mask(b, c);
                    ensure(lhs == rhs && lhs as u32 == oracle.rel(a, c), || {
                        format!("{}: chain {a:b} ⊇ {b:b} ⊇ {c:b}", entry.name)
                    })?;
                    chains += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let randoms = corpus::random_entries(SEED, 50);
    let oracles: Vec<BaseOracle> = randoms.iter().map(|e| BaseOracle::new(&e.matroid)).collect();
    for t in 0..RANDOM_TRIPLES {
        let k = t % randoms.len();
        let m = &randoms[k].matroid;
        let sub = |rng: &mut ChaCha8Rng, within: Mask| bits(within).filter(|_| rng.gen_bool(0.6)).fold(0, |s, p| s | 1 << p);
        let a = sub(&mut rng, m.ground_mask());
        let b = sub(&mut rng, a);
        let c = sub(&mut rng, b);
        let lhs = m.relative_rank_mask(a, c);
        let rhs = m.relative_rank_mask(a, b) + m.relative_rank_mask(b, c);
        ensure(lhs == rhs && lhs as u32 == oracles[k].rel(a, c), || {
            format!("{}: chain {a:b} ⊇ {b:b} ⊇ {c:b}", randoms[k].name)
        })?;
    }
    Ok(format!("{chains} exhaustive chains; {RANDOM_TRIPLES} random triples on ground 7-10"))
}

fn schemas() -> Vec<(&'static str, FinitaryMatroid)> {
    vec![
        ("free", FinitaryMatroid::free()),
        ("pairs", FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(1, 2).unwrap()).unwrap()),
        ("triangles", FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(2, 3).unwrap()).unwrap()),
        (
            "k4",
            FinitaryMatroid::periodic_direct_sum(
                FiniteMatroid::graphic(&[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap(),
            )
            .unwrap(),
        ),
    ]
}

fn component(mf: &FinitaryMatroid) -> FiniteMatroid {
    match mf.schema() {
        Schema::Free => FiniteMatroid::uniform(1, 1).unwrap(),
        Schema::PeriodicDirectSum(c) => c.clone(),
    }
}

/// `Σ_c r(X_c | Y_c)` over the components inside `[0, limit)`, from the
/// component matroid alone. A lower bound for `r(X | Y)`, exact when both
/// sets live below `limit`.
fn windowed_relative_rank(mf: &FinitaryMatroid, x: &TemplateSet, y: &TemplateSet, limit: u64) -> u64 {
    let comp = component(mf);
    let m = mf.component_size();
    let mask = |t: &TemplateSet, c: u64| (0..m).filter(|&p| t.contains(c * m + p)).fold(0, |s, p| s | 1 << p);
    (0..limit / m)
        .map(|c| {
            let (xm, ym) = (mask(x, c), mask(y, c));
            (comp.rank_mask(xm | ym) - comp.rank_mask(ym)) as u64
        })
        .sum()
}

fn random_template(rng: &mut ChaCha8Rng) -> TemplateSet {
    let d = [1u64, 2, 3, 4, 5, 6, 8, 12][rng.gen_range(0..8)];
    let p = rng.gen_range(0.2..0.8);
    let residues: Vec<u64> = (0..d).filter(|_| rng.gen_bool(p)).collect();
    let t = rng.gen_range(0..10u64);
    let low: Vec<u64> = (0..t).filter(|_| rng.gen_bool(p)).collect();
    let minus: Vec<u64> = (t..t + 10).filter(|_| rng.gen_bool(0.1)).collect();
    TemplateSet::new(d, residues, t, low, minus).unwrap()
}

fn c6_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut pairs = 0;
    for (name, mf) in schemas().into_iter().take(2) {
        for n in [8usize, 16, 32, 64] {
            let finite = mf.restrict(n).map_err(err)?;
            let window = TemplateSet::finite(0..n as u64);
            let independent = |t: TemplateSet| mf.max_independent_subset_over(&t.intersection(&window), &TemplateSet::empty());
            for _ in 0..PAIRS_PER_WINDOW {
                let x = independent(random_template(&mut rng));
                let y = independent(random_template(&mut rng));
                let value = mf.relative_rank_template(&x, &y).map_err(err)?;
                let (xs, ys) = (x.finite_elements().unwrap(), y.finite_elements().unwrap());
                let expected = finite.relative_rank(&xs, &ys).map_err(err)? as u64;
                ensure(value == matroid_forge::finitary::Rank::Finite(expected), || {
                    format!("{name} N={n}: r({xs} | {ys}) = {value}, finite kernel says {expected}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs over N in {{8, 16, 32, 64}} on free and pairs schemas"))
}

fn c7_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let schemas = schemas();
    let (mut instances, mut attempts, mut intersecting) = (0usize, 0usize, 0usize);
    while instances < WITNESS_INSTANCES {
        attempts += 1;
        if attempts > 100 * WITNESS_INSTANCES {
            return Err(format!("only {instances} usable instances generated"));
        }
        let (name, mf) = &schemas[rng.gen_range(0..schemas.len())];
        let i = mf.max_independent_subset_over(&random_template(&mut rng), &TemplateSet::empty());
        let mut j = mf.max_independent_subset_over(&random_template(&mut rng), &TemplateSet::empty());
        if rng.gen_bool(0.5) {
            j = j.difference(&i);
        }
        if !i.is_infinite() || !j.is_infinite() {
            continue;
        }
        let jp: ElementSet = j.iter().take(16).filter(|_| rng.gen_bool(0.4)).collect();
        let n = rng.gen_range(0..=8usize);
        let witness = mf.lemma8_witness(&i, &j, &jp, n).map_err(|e| format!("{name}: I={i} J={j}: {e}"))?;
        let rest = j.difference(&TemplateSet::from(&witness));
        let lower = windowed_relative_rank(mf, &i, &rest, WINDOW);
        ensure(
            witness.iter().all(|e| j.contains(e) && !jp.contains(e)) && lower >= n as u64,
            || format!("{name}: I={i} J={j} J'={jp} n={n} witness={witness} windowed rank {lower}"),
        )?;
        intersecting += usize::from(i.intersection(&j).is_infinite());
        instances += 1;
    }
    Ok(format!("{instances} instances ({intersecting} with infinite I ∩ J) on 4 schemas"))
}

struct Scenario {
    name: &'static str,
    mf: FinitaryMatroid,
    family: TruncationFamily,
    task: forcing::Task,
    lower: Vec<usize>,
    upper: Vec<usize>,
}

fn scenarios() -> Vec<Scenario> {
    let free = FinitaryMatroid::free();
    let free_family = TruncationFamily::new(&free, vec![TemplateSet::multiples(4, 0)]).unwrap();
    let free_task = forcing::make_task(&free, TemplateSet::empty(), TemplateSet::odds()).unwrap();
    let pairs = FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(1, 2).unwrap()).unwrap();
    let reps = vec![
        "template d=8 res=1,2,6".parse().unwrap(),
        "template d=8 res=5".parse().unwrap(),
    ];
    let pairs_family = TruncationFamily::new(&pairs, reps).unwrap();
    let pairs_task = forcing::make_task(&pairs, TemplateSet::multiples(8, 0), TemplateSet::multiples(4, 0)).unwrap();
    vec![
        Scenario {
            name: "free",
            mf: free,
            family: free_family,
            task: free_task,
            lower: vec![0],
            upper: vec![],
        },
        Scenario {
            name: "direct-sum",
            mf: pairs,
            family: pairs_family,
            task: pairs_task,
            lower: vec![0],
            upper: vec![1],
        },
    ]
}

fn c8_certificates() -> Outcome {
    let mut inequalities = 0;
    for s in scenarios() {
        let mut previous = forcing::Condition::new();
        for depth in 1..=MAX_DEPTH {
            let cert = forcing::forcing_step(&s.mf, &s.family, &s.task, depth).map_err(err)?;
            let here = || format!("{} depth {depth}", s.name);
            ensure(cert.r_lower == s.lower && cert.r_upper == s.upper, || format!("{}: R-sets", here()))?;
            ensure(cert.recheck(&s.mf).map_err(err)?, || format!("{}: recheck failed", here()))?;
            for ineq in cert.met.iter().map(|m| &m.evidence).chain(&cert.incomparability) {
                let lower = windowed_relative_rank(&s.mf, &ineq.x, &ineq.y, WINDOW);
                ensure(lower >= ineq.bound, || format!("{}: windowed oracle rejects {ineq}", here()))?;
                inequalities += 1;
            }
            ensure(cert.condition.extends(&previous), || format!("{}: not an extension of depth {}", here(), depth - 1))?;
            let expected: BTreeSet<DenseId> = (1..=depth)
                .flat_map(|n| {
                    let c = s.lower.iter().map(move |&b| DenseId { kind: DenseKind::C, b, n });
                    let d = s.upper.iter().map(move |&b| DenseId { kind: DenseKind::D, b, n });
                    c.chain(d)
                })
                .collect();
            let met: BTreeSet<DenseId> = cert.met.iter().map(|m| m.id).collect();
            ensure(met == expected && cert.met.len() == expected.len(), || format!("{}: dense-set coverage", here()))?;
            ensure(
                cert.incomparability.len() == s.lower.len() + s.upper.len(),
                || format!("{}: incomparability evidence", here()),
            )?;
            ensure(
                cert.b_low == s.task.i().union(&TemplateSet::from(&cert.condition.ones()))
                    && cert.b_excluded == cert.condition.zeros(),
                || format!("{}: B_low / B_excluded", here()),
            )?;
            previous = cert.condition;
        }
    }
    Ok(format!("2 scenarios x depths 1..={MAX_DEPTH}; {inequalities} inequalities re-verified"))
}

fn c9_seeds() -> Outcome {
    let mf = FinitaryMatroid::free();
    let strings: Vec<Vec<bool>> = (1..=SEED_LENGTH)
        .flat_map(|len| (0u32..1 << len).map(move |v| (0..len).map(|k| v >> k & 1 == 1).collect()))
        .collect();
    // every representative is some B_{n,bit}; compare them once, twice over
    let mut reps: BTreeMap<(usize, bool), TemplateSet> = BTreeMap::new();
    for n in 0..SEED_LENGTH {
        for bit in [false, true] {
            reps.insert((n, bit), TemplateSet::compose(&mf.canonical_base(), &forcing::seed_index(n, bit)).map_err(err)?);
        }
    }
    let mut comparable: BTreeMap<((usize, bool), (usize, bool)), bool> = BTreeMap::new();
    for (a, x) in &reps {
        for (b, y) in &reps {
            // in the free matroid r(X | Y) = |X ∖ Y|
            let oracle = x.difference(y).is_finite();
            let lib = mf.relative_rank_any(x, y).is_finite();
            ensure(oracle == lib, || format!("almost spanning of B{a:?} by B{b:?}"))?;
            comparable.insert((*a, *b), a != b && oracle);
        }
    }
    for s in &strings {
        let fam = forcing::seed_family(&mf, s).map_err(err)?;
        ensure(forcing::comparable_pairs(&mf, fam.reps()).is_empty(), || format!("{s:?} has comparable members"))?;
        for (n, &bit) in s.iter().enumerate() {
            ensure(fam.reps()[n] == reps[&(n, bit)], || format!("{s:?}: representative {n}"))?;
        }
    }
    let (mut differing, mut prefixes) = (0usize, 0usize);
    for (x, s) in strings.iter().enumerate() {
        for t in &strings[x + 1..] {
            let keys = |u: &Vec<bool>| u.iter().enumerate().map(|(n, &b)| (n, b)).collect::<BTreeSet<_>>();
            let merged: Vec<(usize, bool)> = keys(s).union(&keys(t)).copied().collect();
            let flagged = merged.iter().any(|a| merged.iter().any(|b| comparable[&(*a, *b)]));
            let differ = s.iter().zip(t).any(|(a, b)| a != b);
            ensure(flagged == differ, || format!("{s:?} vs {t:?}: flagged={flagged}, differ={differ}"))?;
            if differ {
                differing += 1;
            } else {
                prefixes += 1;
            }
        }
    }
    // the library merge on a sample of pairs, end to end
    for (s, t) in [("0", "1"), ("10", "11"), ("0110", "0111"), ("101", "100110"), ("1", "10")] {
        let a = forcing::seed_family(&mf, &forcing::parse_prefix(s).unwrap()).map_err(err)?;
        let b = forcing::seed_family(&mf, &forcing::parse_prefix(t).unwrap()).map_err(err)?;
        let pairs = forcing::comparable_pairs(&mf, &forcing::merge(&a, &b));
        let differ = s.chars().zip(t.chars()).any(|(x, y)| x != y);
        ensure(pairs.is_empty() != differ, || format!("merge of {s} and {t}"))?;
    }
    Ok(format!(
        "{} strings incomparable; {differing} differing pairs flagged, {prefixes} prefix pairs unflagged",
        strings.len()
    ))
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_matroid-forge"))
        .args(args)
        .current_dir(crate_dir())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn without_timing(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("elapsed-us:")).collect::<Vec<_>>().join("\n")
}

fn c10_cli() -> Outcome {
    let root = crate_dir().join("corpus");
    let mut runs = 0;
    for path in files(&root.join("matroids")).into_iter().chain(files(&root.join("finitary"))) {
        let text = std::fs::read_to_string(&path).map_err(err)?;
        let parsed = parse_matroid_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let emitted = emit_matroid_file(&parsed.name, &parsed.description);
        ensure(parse_matroid_file(&emitted).map_err(err)? == parsed, || format!("{}: round trip", path.display()))?;
        let without_comments: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
        ensure(emitted == without_comments, || format!("{}: emitted text differs", path.display()))?;
    }
    for path in files(&root.join("families")).into_iter().chain(files(&root.join("sets"))) {
        let parsed = parse_family_file(&std::fs::read_to_string(&path).map_err(err)?).map_err(err)?;
        ensure(parse_family_file(&emit_family_file(&parsed)).map_err(err)? == parsed, || format!("{}: round trip", path.display()))?;
    }
    for path in files(&root.join("tasks")) {
        let parsed = parse_task_file(&std::fs::read_to_string(&path).map_err(err)?).map_err(err)?;
        ensure(parse_task_file(&emit_task_file(&parsed)).map_err(err)? == parsed, || format!("{}: round trip", path.display()))?;
    }
    for path in files(&root.join("matroids")) {
        let rel = format!("corpus/matroids/{}", path.file_name().unwrap().to_string_lossy());
        for args in [vec!["axioms", "check", "--matroid", &rel], vec!["gentrunc", "enumerate", "--matroid", &rel]] {
            let (code, _) = binary(&args);
            ensure(code == 0, || format!("{args:?} exited {code}"))?;
            runs += 1;
        }
    }
    let manifest = std::fs::read_to_string(root.join("commands.txt")).map_err(err)?;
    for line in manifest.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let mut words = line.split_whitespace();
        let expected: i32 = words.next().unwrap().parse().map_err(err)?;
        let args: Vec<&str> = words.collect();
        let (code, stdout) = binary(&args);
        ensure(code == expected, || format!("{args:?}: exit {code}, expected {expected}"))?;
        let mut json_args = vec!["--json"];
        json_args.extend(&args);
        let (json_code, json_out) = binary(&json_args);
        ensure(json_code == code, || format!("{args:?}: --json changes the exit code"))?;
        if args[0] != "truncate" && expected != 2 || args[0] == "axioms" {
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(&json_out) {
                ensure(v["exit_code"] == code, || format!("{args:?}: report exit code"))?;
            } else if expected != 2 {
                return Err(format!("{args:?}: --json output is not JSON"));
            }
        }
        if args[0] != "truncate" && code != 2 {
            let (_, again) = binary(&args);
            ensure(without_timing(&again) == without_timing(&stdout), || format!("{args:?}: report not deterministic"))?;
        }
        runs += 3;
    }
    Ok(format!("{runs} CLI runs; all corpus files round-trip"))
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: "C1", title: "verifier matches base axioms plus definition", budget: Duration::from_secs(60), run: c1_bridge },
        Criterion { id: "C2", title: "level enumeration equals brute force", budget: Duration::from_secs(30), run: c2_enumeration },
        Criterion { id: "C3", title: "finite generalised truncations are the k-truncations", budget: Duration::from_secs(30), run: c3_classification },
        Criterion { id: "C4", title: "strong equivalence laws", budget: Duration::from_secs(120), run: c4_equivalence },
        Criterion { id: "C5", title: "relative rank additivity along chains", budget: Duration::from_secs(60), run: c5_additivity },
        Criterion { id: "C6", title: "finitary ranks agree with finite restrictions", budget: Duration::from_secs(60), run: c6_agreement },
        Criterion { id: "C7", title: "exchange witnesses are valid", budget: Duration::from_secs(60), run: c7_witnesses },
        Criterion { id: "C8", title: "forcing-step certificates", budget: Duration::from_secs(30), run: c8_certificates },
        Criterion { id: "C9", title: "seed-family contract", budget: Duration::from_secs(10), run: c9_seeds },
        Criterion { id: "C10", title: "CLI round trip and exit codes", budget: Duration::from_secs(10), run: c10_cli },
    ];
    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let result = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let took = started.elapsed();
        let (verdict, detail) = match result {
            Ok(detail) if took <= c.budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over the {:?} budget", c.budget)),
            Err(detail) => ("FAIL", detail),
        };
        failed += usize::from(verdict == "FAIL");
        println!("{verdict} {} {} ({:.2}s): {detail}", c.id, c.title, took.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

