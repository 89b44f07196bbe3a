//! Closed-form Hilbert functions on Veronese varieties.
//!
//! If `X` lies on `V(n, d)` and `Y` is its preimage in `P^n`, then
//! `H_X(t) = H_Y(d t)`. Everything in this module is a consequence of that
//! sampling identity applied to `P^n` itself, to hypersurfaces of `P^n`, and
//! to points on a line.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::macaulay::binom;
use crate::sequences::{HilbertSequence, HilbertTail};

/// Source dimension `n` and degree `d` of the embedding `P^n -> P^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct VeroneseParams {
    n: usize,
    d: usize,
}

impl VeroneseParams {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::invalid("Veronese parameters need n >= 1 and d >= 1"));
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient dimension `N = C(n + d, d) - 1`.
    pub fn ambient_dim(&self) -> BigUint {
        binom(BigUint::from(self.n + self.d), self.d) - 1u32
    }
}

fn big(x: usize) -> BigUint {
    BigUint::from(x)
}

/// `H_{V(n,d)}(t) = C(n + t d, n)`.
pub fn veronese_hf(p: VeroneseParams, t: usize) -> BigUint {
    binom(big(p.n) + big(t) * big(p.d), p.n)
}

/// Hilbert function of a divisor of `V(n, d)` of degree `d e`, the image of
/// a degree-`e` hypersurface of `P^n`.
pub fn divisor_hf(p: VeroneseParams, e: usize, t: usize) -> Result<BigUint> {
    if e == 0 {
        return Err(Error::invalid("divisor degree e must be positive"));
    }
    let full = veronese_hf(p, t);
    if t <= (e - 1) / p.d {
        return Ok(full);
    }
    // t > (e-1)/d means d t >= e
    let top = big(p.n) + big(t) * big(p.d) - big(e);
    Ok(full - binom(top, p.n))
}

/// Hilbert function of `s` reduced points on the rational normal curve of
/// degree `d`.
pub fn rnc_points_hf(d: usize, s: usize, t: usize) -> Result<BigUint> {
    if d == 0 || s == 0 {
        return Err(Error::invalid("need d >= 1 and s >= 1"));
    }
    let last_full = (BigInt::from(s) - 2i32).div_floor(&BigInt::from(d));
    if BigInt::from(t) <= last_full {
        Ok(big(d) * big(t) + BigUint::one())
    } else {
        Ok(big(s))
    }
}

/// The full point-set Hilbert function of `s` points on the rational normal
/// curve, as a constant-tailed sequence.
pub fn rnc_points_sequence(d: usize, s: usize) -> Result<HilbertSequence> {
    // saturated once d t + 1 >= s
    let last = s.div_ceil(d);
    let values = (0..=last)
        .map(|t| rnc_points_hf(d, s, t))
        .collect::<Result<Vec<_>>>()?;
    HilbertSequence::constant(values)
}

/// `h(t) = k(step t)`.
pub fn sample(k: &HilbertSequence, step: usize) -> Result<HilbertSequence> {
    if step == 0 {
        return Err(Error::invalid("sampling step must be positive"));
    }
    let len = match k.tail() {
        // enough samples to reach the constant part
        HilbertTail::Constant => (k.len() - 1).div_ceil(step) + 1,
        HilbertTail::Unspecified => (k.len() - 1) / step + 1,
    };
    let values = (0..len)
        .map(|t| {
            k.value(step * t).cloned().ok_or_else(|| {
                Error::invalid(format!("k({}) is outside the stored range", step * t))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    HilbertSequence::new(values, k.tail())
}

/// `C(n + t, n)` for `t = 0..len`, with unspecified tail.
pub fn projective_space_prefix(n: usize, len: usize) -> HilbertSequence {
    let values = (0..len).map(|t| binom(big(n + t), n)).collect();
    HilbertSequence::new(values, HilbertTail::Unspecified).expect("len > 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, d: usize) -> VeroneseParams {
        VeroneseParams::new(n, d).unwrap()
    }

    fn nums(h: &HilbertSequence) -> Vec<u64> {
        h.values().iter().map(|x| u64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn ambient_dimensions() {
        assert_eq!(v(2, 7).ambient_dim(), big(35));
        assert_eq!(v(2, 2).ambient_dim(), big(5));
        assert_eq!(v(3, 2).ambient_dim(), big(9));
        assert_eq!(v(1, 4).ambient_dim(), big(4));
        assert!(VeroneseParams::new(0, 2).is_err());
    }

    #[test]
    fn veronese_surface_table() {
        let table: Vec<u64> = (0..=12)
            .map(|t| u64::try_from(veronese_hf(v(2, 7), t)).unwrap())
            .collect();
        assert_eq!(
            table,
            [1, 36, 120, 253, 435, 666, 946, 1275, 1653, 2080, 2556, 3081, 3655]
        );
        assert_eq!(veronese_hf(v(5, 3), 0), big(1));
        assert_eq!(veronese_hf(v(2, 2), 2), big(15));
    }

    #[test]
    fn divisors() {
        assert_eq!(divisor_hf(v(2, 2), 2, 2).unwrap(), big(9));
        // a line under the cubic embedding: H(t) = 3t + 1
        assert_eq!(divisor_hf(v(2, 3), 1, 1).unwrap(), big(4));
        assert_eq!(divisor_hf(v(2, 3), 1, 4).unwrap(), big(13));
        assert_eq!(divisor_hf(v(3, 2), 5, 0).unwrap(), big(1));
        assert!(divisor_hf(v(2, 2), 0, 1).is_err());
    }

    #[test]
    fn divisor_agrees_with_veronese_until_cut() {
        for n in 1..=3 {
            for d in 1..=4 {
                for e in 1..=8 {
                    for t in 0..=10 {
                        let full = veronese_hf(v(n, d), t);
                        let div = divisor_hf(v(n, d), e, t).unwrap();
                        if t <= (e - 1) / d {
                            assert_eq!(div, full);
                        } else {
                            assert!(div < full, "n={n} d={d} e={e} t={t}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rnc_points() {
        assert_eq!(nums(&rnc_points_sequence(3, 8).unwrap()), [1, 4, 7, 8]);
        assert_eq!(nums(&rnc_points_sequence(2, 5).unwrap()), [1, 3, 5]);
        for d in 1..=5 {
            assert_eq!(nums(&rnc_points_sequence(d, 1).unwrap()), [1]);
        }
        for d in 1..=5 {
            for s in 1..=20 {
                let mut prev = big(0);
                for t in 0..=s {
                    let cur = rnc_points_hf(d, s, t).unwrap();
                    assert!(cur >= prev);
                    prev = cur;
                }
                assert_eq!(prev, big(s));
            }
        }
    }

    #[test]
    fn sampling() {
        let line = HilbertSequence::points(&[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(nums(&sample(&line, 3).unwrap()), [1, 4, 7, 8]);
        assert_eq!(sample(&line, 1).unwrap(), line);
        let short = HilbertSequence::from_u64s(&[1, 3, 6], HilbertTail::Unspecified).unwrap();
        assert_eq!(nums(&sample(&short, 2).unwrap()), [1, 6]);
        assert!(sample(&line, 0).is_err());
    }

    #[test]
    fn sampling_projective_space_gives_veronese() {
        for n in 1..=3 {
            for d in 1..=4 {
                let k = projective_space_prefix(n, 12 * d + 1);
                let h = sample(&k, d).unwrap();
                for t in 0..=12 {
                    assert_eq!(h.value(t).unwrap(), &veronese_hf(v(n, d), t));
                }
            }
        }
    }
}
