//! Exact rank of integer matrices.
//!
//! A rank modulo a 61-bit prime never exceeds the rank over `Q`, so when it
//! already equals `min(rows, cols)` it is the answer. Otherwise the matrix
//! goes through fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

const PRIME: u64 = (1 << 61) - 1;

/// Rank over `Q` of a rectangular integer matrix given by rows.
pub fn rank(rows: &[Vec<BigInt>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    assert!(rows.iter().all(|r| r.len() == width), "ragged matrix");
    let full = rows.len().min(width);
    if full == 0 {
        return 0;
    }
    if rank_mod_prime(rows) == full {
        return full;
    }
    bareiss_rank(rows.to_vec())
}

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(PRIME))
        .to_u64()
        .expect("residue below the prime")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Rank over `Z / (2^61 - 1)`.
pub fn rank_mod_prime(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(reduce).collect()).collect();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], PRIME - 2);
        for v in &mut m[rank][col..width] {
            *v = mul_mod(*v, inv);
        }
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for j in col..width {
                let sub = mul_mod(factor, pivot_row[j]);
                row[j] = (row[j] + PRIME - sub) % PRIME;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..width {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = &pivot_row[col];
        for row in rest.iter_mut() {
            for j in col + 1..width {
                let v = &row[j] * p - &row[col] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = p.clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
