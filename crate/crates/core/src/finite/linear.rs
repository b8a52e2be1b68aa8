//! Column-matroid rank over GF(p) by exact row reduction.

use crate::set::{bits, Mask};

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0.
    pow_mod(a, p - 2, p)
}

/// Rank of the columns selected by `cols` in the row-major matrix `rows`.
pub(crate) fn column_rank(rows: &[Vec<u64>], prime: u64, cols: Mask) -> usize {
    let selected: Vec<usize> = bits(cols).collect();
    if selected.is_empty() || rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| selected.iter().map(|&c| r[c] % prime).collect())
        .collect();
    let ncols = selected.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = inv_mod(m[rank][col], prime);
        for v in m[rank].iter_mut() {
            *v = mul_mod(*v, inv, prime);
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in col..ncols {
                    let sub = mul_mod(factor, m[rank][c], prime);
                    m[r][c] = (m[r][c] + prime - sub) % prime;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}
