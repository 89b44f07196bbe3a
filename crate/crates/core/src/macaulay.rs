//! Binomial arithmetic and Macaulay growth bounds.
//!
//! Every value here is a [`BigUint`]; degrees and binomial indices are
//! `usize` since they index positions in sequences.
//!
//! The growth operator `c^<t>` always takes its base from the value being
//! bounded: for a Hilbert function `H`, `H(t+1) <= H(t)^<t>`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

/// `C(n, k)`, zero when `k > n`.
pub fn binom<N: Into<BigUint>>(n: N, k: usize) -> BigUint {
    let n: BigUint = n.into();
    let k_big = BigUint::from(k);
    if k_big > n {
        return BigUint::zero();
    }
    // C(n, k) = C(n, n - k); use the smaller index when it fits.
    let k = match (&n - &k_big).try_into() {
        Ok(rest) if rest < k => rest,
        _ => k,
    };
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= &n - BigUint::from(i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// One term `C(top, index)` of a binomial expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialTerm {
    #[serde(with = "crate::format::big_uint")]
    pub top: BigUint,
    pub index: usize,
}

/// The greedy `t`-binomial expansion
/// `c = C(m_t, t) + C(m_{t-1}, t-1) + ... + C(m_j, j)` with
/// `m_t > m_{t-1} > ... > m_j >= j >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialExpansion {
    terms: Vec<BinomialTerm>,
    #[serde(with = "crate::format::big_uint")]
    value: BigUint,
}

impl BinomialExpansion {
    pub fn terms(&self) -> &[BinomialTerm] {
        &self.terms
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// The leading index `t`.
    pub fn degree(&self) -> usize {
        self.terms[0].index
    }

    /// Sum of the terms, recomputed from scratch.
    pub fn evaluate(&self) -> BigUint {
        self.terms
            .iter()
            .map(|term| binom(term.top.clone(), term.index))
            .sum()
    }

    /// `sum C(m_i + shift, i + shift)`.
    pub fn shifted(&self, shift: usize) -> BigUint {
        self.terms
            .iter()
            .map(|term| binom(&term.top + BigUint::from(shift), term.index + shift))
            .sum()
    }
}

impl fmt::Display for BinomialExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "C({},{})", term.top, term.index)?;
        }
        Ok(())
    }
}

/// Largest `m` with `C(m, k) <= c`. Requires `c >= 1`, `k >= 1`.
fn largest_top(c: &BigUint, k: usize) -> BigUint {
    if k == 1 {
        return c.clone();
    }
    // C(k, k) = 1 <= c, so the answer is at least k.
    let mut lo = BigUint::from(k);
    let mut hi = BigUint::from(2 * k);
    while binom(hi.clone(), k) <= *c {
        lo = hi.clone();
        hi <<= 1;
    }
    // invariant: C(lo, k) <= c < C(hi, k)
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1;
        if binom(mid.clone(), k) <= *c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Greedy `t`-binomial expansion of `c`.
pub fn t_binomial_expansion(c: &BigUint, t: usize) -> Result<BinomialExpansion> {
    if c.is_zero() {
        return Err(Error::invalid("binomial expansion of 0 is undefined"));
    }
    if t == 0 {
        return Err(Error::invalid("binomial expansion needs t >= 1"));
    }
    let mut terms = Vec::new();
    let mut top = largest_top(c, t);
    let mut value = binom(top.clone(), t);
    let mut rest = c - &value;
    terms.push(BinomialTerm {
        top: top.clone(),
        index: t,
    });
    // Each remainder is below C(m_i, i - 1), so the next top is below m_i.
    // Walk it down from m_i - 1, updating the binomial by exact ratios.
    for index in (1..t).rev() {
        if rest.is_zero() {
            break;
        }
        value = value * (index + 1) / &top;
        top -= 1u32;
        let mut steps = 0;
        while value > rest {
            if steps == 32 {
                // far below: search from scratch
                top = largest_top(&rest, index);
                value = binom(top.clone(), index);
                break;
            }
            value = value * (&top - index) / &top;
            top -= 1u32;
            steps += 1;
        }
        rest -= &value;
        terms.push(BinomialTerm {
            top: top.clone(),
            index,
        });
    }
    assert!(rest.is_zero(), "greedy expansion of {c} at {t} did not terminate");
    Ok(BinomialExpansion {
        terms,
        value: c.clone(),
    })
}

/// `c^<t>`, the largest value a Hilbert function can take in degree `t + 1`
/// when it takes value `c` in degree `t`.
pub fn macaulay_growth(c: &BigUint, t: usize) -> Result<BigUint> {
    macaulay_multi_step_bound(c, t, 1)
}

/// Largest possible value in degree `t + steps` given value `c` in degree
/// `t`: every top and index of the expansion shifted by `steps`.
pub fn macaulay_multi_step_bound(c: &BigUint, t: usize, steps: usize) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::invalid("Macaulay bound needs t >= 1"));
    }
    if c.is_zero() {
        return Ok(BigUint::zero());
    }
    Ok(t_binomial_expansion(c, t)?.shifted(steps))
}

/// Machine-word growth bound for the exhaustive searches, where values are
/// already known to be small. Saturates instead of overflowing.
pub(crate) fn growth_u64(c: u64, t: usize) -> u64 {
    if c == 0 {
        return 0;
    }
    let bound = macaulay_growth(&BigUint::from(c), t).expect("t >= 1");
    u64::try_from(bound).unwrap_or(u64::MAX)
}
