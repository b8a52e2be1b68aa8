//! The fixed test corpus of small finite matroids, plus a seeded generator of
//! larger random ones.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::finite::{FiniteMatroid, MatroidSpec};
use crate::set::Mask;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: MatroidSpec,
    pub matroid: FiniteMatroid,
}

impl CorpusEntry {
    fn new(name: String, spec: MatroidSpec) -> Result<Self> {
        let matroid = crate::finite::construct_matroid(&spec)?;
        Ok(CorpusEntry { name, spec, matroid })
    }
}

/// `U_{k,n}` for `0 ≤ k ≤ n ≤ 4`.
pub fn uniform_entries() -> Vec<CorpusEntry> {
    (0..=4)
        .flat_map(|n| (0..=n).map(move |k| (k, n)))
        .map(|(k, n)| CorpusEntry::new(format!("uniform-{k}-{n}"), MatroidSpec::Uniform { k, n }).expect("k <= n"))
        .collect()
}

const K4: [(u64, u64); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = vec![];
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// One graph per isomorphism class on at most 4 vertices; smaller graphs are
/// subgraphs of `K4` with isolated vertices, which do not affect the matroid.
pub fn graphic_entries() -> Vec<CorpusEntry> {
    let perms = permutations(&[1, 2, 3, 4]);
    let canonical = |pick: u64| -> Vec<(u64, u64)> {
        perms
            .iter()
            .map(|p| {
                let mut es: Vec<(u64, u64)> = (0..6)
                    .filter(|&i| pick >> i & 1 == 1)
                    .map(|i| {
                        let (u, v) = (p[K4[i].0 as usize - 1], p[K4[i].1 as usize - 1]);
                        (u.min(v), u.max(v))
                    })
                    .collect();
                es.sort_unstable();
                es
            })
            .min()
            .expect("non-empty permutation list")
    };
    let classes: BTreeSet<(usize, Vec<(u64, u64)>)> = (0..64u64)
        .map(|pick| {
            let es = canonical(pick);
            (es.len(), es)
        })
        .collect();
    classes
        .into_iter()
        .map(|(_, edges)| {
            let code: String = edges.iter().map(|(u, v)| format!("{u}{v}")).collect::<Vec<_>>().join("-");
            let name = if code.is_empty() { "graph-empty".to_string() } else { format!("graph-{code}") };
            CorpusEntry::new(name, MatroidSpec::Graphic { edges }).expect("small graph")
        })
        .collect()
}

/// Column matroids of all 3×4 binary matrices, one per distinct matroid.
pub fn linear_entries() -> Vec<CorpusEntry> {
    let mut seen: BTreeSet<Vec<Mask>> = BTreeSet::new();
    let mut out = vec![];
    for code in 0u64..1 << 12 {
        let rows: Vec<Vec<u64>> = (0..3).map(|r| (0..4).map(|c| code >> (4 * r + c) & 1).collect()).collect();
        let entry = CorpusEntry::new(format!("binary-{code:03x}"), MatroidSpec::Linear { prime: 2, rows }).expect("binary matrix");
        if seen.insert(entry.matroid.base_masks().expect("four elements")) {
            out.push(entry);
        }
    }
    out
}

fn explicit(name: &str, ground: &[u64], bases: &[&[u64]]) -> CorpusEntry {
    let spec = MatroidSpec::Explicit {
        ground: ground.to_vec(),
        bases: bases.iter().map(|b| b.to_vec()).collect(),
    };
    CorpusEntry::new(name.to_string(), spec).expect("fixed explicit matroid")
}

fn k_subsets(n: u64, k: usize) -> Vec<Vec<u64>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect())
        .collect()
}

fn explicit_owned(name: &str, ground: &[u64], bases: Vec<Vec<u64>>) -> CorpusEntry {
    let refs: Vec<&[u64]> = bases.iter().map(Vec::as_slice).collect();
    explicit(name, ground, &refs)
}

/// Ten fixed explicit matroids.
pub fn explicit_entries() -> Vec<CorpusEntry> {
    let five = [1, 2, 3, 4, 5];
    let k4_bases: Vec<Vec<u64>> = k_subsets(6, 3)
        .into_iter()
        .filter(|b| {
            // triangles of K4 under the edge numbering of `K4`
            ![[1, 2, 4], [1, 3, 5], [2, 3, 6], [4, 5, 6]].iter().any(|t| t.as_slice() == b.as_slice())
        })
        .collect();
    vec![
        explicit("two-bases", &[1, 2, 3], &[&[1, 2], &[2, 3]]),
        explicit("single-point", &[1, 2, 3], &[&[1]]),
        explicit("rank-zero", &[1, 2], &[&[]]),
        explicit("free-4", &[1, 2, 3, 4], &[&[1, 2, 3, 4]]),
        explicit("two-pairs", &[1, 2, 3, 4], &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]]),
        explicit("parallel-triple-coloop", &[1, 2, 3, 4], &[&[1, 4], &[2, 4], &[3, 4]]),
        explicit("three-coloops", &five, &[&[1, 2, 3]]),
        explicit_owned(
            "rank-2-parallel",
            &five,
            k_subsets(5, 2).into_iter().filter(|b| b != &[1, 2]).collect(),
        ),
        explicit_owned(
            "rank-3-circuit-hyperplane",
            &five,
            k_subsets(5, 3).into_iter().filter(|b| b != &[1, 2, 3]).collect(),
        ),
        explicit_owned("k4-bases", &[1, 2, 3, 4, 5, 6], k4_bases),
    ]
}

/// The whole fixed corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut all = uniform_entries();
    all.extend(graphic_entries());
    all.extend(linear_entries());
    all.extend(explicit_entries());
    all
}

/// Random graphic and linear matroids on 7–10 elements.
pub fn random_entries(seed: u64, count: usize) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = rng.gen_range(7..=10usize);
            let spec = if rng.gen_bool(0.5) {
                let vertices = rng.gen_range(3..=6u64);
                let edges = (0..n)
                    .map(|_| (rng.gen_range(1..=vertices), rng.gen_range(1..=vertices)))
                    .collect();
                MatroidSpec::Graphic { edges }
            } else {
                let prime = [2, 3, 5][rng.gen_range(0..3)];
                let rows = (0..rng.gen_range(2..=5))
                    .map(|_| (0..n).map(|_| rng.gen_range(0..prime)).collect())
                    .collect();
                MatroidSpec::Linear { prime, rows }
            };
            CorpusEntry::new(format!("random-{seed}-{k}"), spec).expect("random matroid")
        })
        .collect()
}
