//! The boundary window `h(1..d)` at degree `d t`: a ramp `d t + i + 1` up to
//! a break index, then non-increasing, each value capped by the ramp.
//! [`extremal_window`] builds a window with the largest possible last value for
//! a given sum; [`bruteforce_window_tail`] finds that largest value by enumeration.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{full_ramp_sum, tail_bound};
use crate::error::{Error, Result};
use crate::format;
use crate::macaulay::binom;

/// How the extremal window was built, keyed by the deficiency
/// `p = full_ramp_sum(d, t) - S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowShape {
    /// `p = 0`.
    FullRamp,
    /// `p = C(n, 2)` with `2 <= n <= d + 1`.
    Triangular { n: usize },
    /// `C(n, 2) < p < C(n + 1, 2)`, `p = C(n, 2) + b`.
    TriangularPlus { n: usize, b: usize },
    /// `p = C(d + 1, 2) + d (n + 1)`: constant `d t - n`.
    Flat {
        #[serde(with = "format::big_uint")]
        n: BigUint,
    },
    /// `p = C(d + 1, 2) + d n + b` with `0 < b < d`.
    Stepped {
        #[serde(with = "format::big_uint")]
        n: BigUint,
        b: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryWindow {
    pub d: usize,
    pub t: usize,
    #[serde(with = "format::big_uint")]
    pub target: BigUint,
    #[serde(with = "format::big_uint")]
    pub deficiency: BigUint,
    #[serde(with = "format::big_uint_seq")]
    pub values: Vec<BigUint>,
    /// 1-based index of the first position off the ramp, capped at `d`.
    pub ramp_break: usize,
    pub shape: WindowShape,
}

fn ramp(d: usize, t: usize, i: usize) -> BigUint {
    BigUint::from(d) * t + i + 1u32
}

impl BoundaryWindow {
    pub fn last(&self) -> &BigUint {
        self.values.last().expect("d >= 1")
    }

    /// Ramp below the break, non-increasing from it, capped by the ramp,
    /// and summing to the target.
    pub fn satisfies_invariants(&self) -> bool {
        let (d, t) = (self.d, self.t);
        if self.values.len() != d || !(1..=d).contains(&self.ramp_break) {
            return false;
        }
        let capped = self
            .values
            .iter()
            .enumerate()
            .all(|(k, v)| *v <= ramp(d, t, k + 1));
        let ramp_ok = (1..self.ramp_break).all(|i| self.values[i - 1] == ramp(d, t, i));
        let tail_ok = self.values[self.ramp_break - 1..]
            .windows(2)
            .all(|w| w[0] >= w[1]);
        let sum: BigUint = self.values.iter().sum();
        capped && ramp_ok && tail_ok && sum == self.target
    }
}

/// Extremal window of sum `target` at `(d, t)`, whose last entry is
/// [`super::max_window_tail`] (or `d (t + 1) + 1` for the full ramp).
pub fn extremal_window(d: usize, t: usize, target: &BigUint) -> Result<BoundaryWindow> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let full = full_ramp_sum(d, t);
    if *target > full {
        return Err(Error::invalid(format!(
            "window sum {target} exceeds the full ramp {full} at d={d}, t={t}"
        )));
    }
    let p = &full - target;
    let corner = binom(BigUint::from(d + 1), 2);
    let dt = BigUint::from(d) * t;

    let (values, shape): (Vec<BigUint>, WindowShape) = if p.is_zero() {
        ((1..=d).map(|i| ramp(d, t, i)).collect(), WindowShape::FullRamp)
    } else if p <= corner {
        let small = p.to_usize().expect("p <= C(d+1, 2)");
        // largest n with C(n, 2) <= p
        let n = (1 + 8 * small).isqrt().div_ceil(2);
        let b = small - n * (n - 1) / 2;
        let top = BigUint::from(d) * (t + 1) + 2u32 - n;
        if b == 0 {
            let values = (1..=d)
                .map(|i| if i + n <= d { ramp(d, t, i) } else { top.clone() })
                .collect();
            (values, WindowShape::Triangular { n })
        } else {
            let values = (1..=d)
                .map(|i| {
                    if i + n <= d + 1 {
                        ramp(d, t, i)
                    } else if i + b <= d {
                        top.clone()
                    } else {
                        &top - 1u32
                    }
                })
                .collect();
            (values, WindowShape::TriangularPlus { n, b })
        }
    } else {
        let over = &p - &corner;
        let dd = BigUint::from(d);
        let n = (&over - 1u32) / &dd;
        let b = (&over - &n * &dd).to_usize().expect("0 < b <= d");
        if b == d {
            let level = &dt - &n;
            (vec![level; d], WindowShape::Flat { n })
        } else {
            let low = &dt - &n;
            let values = (1..=d)
                .map(|i| if i + b <= d { &low + 1u32 } else { low.clone() })
                .collect();
            (values, WindowShape::Stepped { n, b })
        }
    };

    let ramp_break = (1..=d)
        .find(|&i| values[i - 1] != ramp(d, t, i))
        .unwrap_or(d);
    let window = BoundaryWindow {
        d,
        t,
        target: target.clone(),
        deficiency: p.clone(),
        values,
        ramp_break,
        shape,
    };
    assert!(
        window.satisfies_invariants(),
        "extremal window construction is inconsistent: {window:?}"
    );
    assert_eq!(*window.last(), tail_bound(d, t, &p), "extremal tail mismatch");
    Ok(window)
}

/// Limits for [`bruteforce_window_tail`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSearchBounds {
    pub max_d: usize,
    pub max_t: usize,
}

impl Default for WindowSearchBounds {
    fn default() -> Self {
        Self { max_d: 6, max_t: 4 }
    }
}

/// Largest `h(d)` over all admissible windows of sum `target`, or `None`
/// when no admissible window has that sum.
pub fn bruteforce_window_tail(
    d: usize,
    t: usize,
    target: &BigUint,
    bounds: WindowSearchBounds,
) -> Result<Option<u64>> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    if d > bounds.max_d || t > bounds.max_t {
        return Err(Error::budget(format!(
            "brute force limited to d <= {} and t <= {} (got d={d}, t={t})",
            bounds.max_d, bounds.max_t
        )));
    }
    let cap = |i: usize| (d * t + i + 1) as u64;
    let full: u64 = (1..=d).map(cap).sum();
    let target = match target.to_u64() {
        Some(s) if s <= full => s,
        _ => return Ok(None),
    };

    let mut best: Option<u64> = None;
    let mut prefix = 0u64;
    for brk in 1..=d {
        // positions 1..brk-1 on the ramp
        if brk > 1 {
            prefix += cap(brk - 1);
        }
        if prefix > target {
            break;
        }
        let slots = d - brk + 1;
        let mut last = None;
        best_tail(target - prefix, slots, cap(brk), &mut last);
        best = best.max(last);
    }
    Ok(best)
}

/// Every non-increasing sequence of `slots` values, the first at most
/// `bound`, summing to `remaining`; records the largest final value.
fn best_tail(remaining: u64, slots: usize, bound: u64, best: &mut Option<u64>) {
    if slots == 1 {
        if remaining <= bound {
            *best = (*best).max(Some(remaining));
        }
        return;
    }
    let k = slots as u64;
    if remaining > k * bound {
        return;
    }
    let low = remaining.div_ceil(k);
    for x in low..=bound.min(remaining) {
        best_tail(remaining - x, slots - 1, x, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::max_window_tail;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn nums(w: &BoundaryWindow) -> Vec<u64> {
        w.values.iter().map(|v| v.to_u64().unwrap()).collect()
    }

    #[test]
    fn triangular_window() {
        let w = extremal_window(2, 0, &big(4)).unwrap();
        assert_eq!(nums(&w), [2, 2]);
        assert_eq!(w.deficiency, big(1));
        assert_eq!(w.shape, WindowShape::Triangular { n: 2 });
        assert_eq!(w.ramp_break, 2);
    }

    #[test]
    fn full_ramp_window() {
        let w = extremal_window(2, 0, &big(5)).unwrap();
        assert_eq!(nums(&w), [2, 3]);
        assert_eq!(w.shape, WindowShape::FullRamp);
        let w = extremal_window(4, 2, &full_ramp_sum(4, 2)).unwrap();
        assert_eq!(nums(&w), [10, 11, 12, 13]);
    }

    #[test]
    fn flat_window() {
        // F(3,1) = 18, p = 9 = C(4,2) + 3
        let w = extremal_window(3, 1, &big(9)).unwrap();
        assert_eq!(nums(&w), [3, 3, 3]);
        assert_eq!(w.shape, WindowShape::Flat { n: big(0) });
    }

    #[test]
    fn stepped_window_with_zero_offset() {
        // F(3,0) = 9, S = 1: p = 8 = C(4,2) + 0*3 + 2
        let w = extremal_window(3, 0, &big(1)).unwrap();
        assert_eq!(nums(&w), [1, 0, 0]);
        assert_eq!(w.shape, WindowShape::Stepped { n: big(0), b: 2 });
    }

    #[test]
    fn surface_example_window() {
        let w = extremal_window(7, 6, &big(310)).unwrap();
        assert_eq!(w.deficiency, big(19));
        assert_eq!(*w.last(), big(44));
        assert_eq!(w.values.iter().sum::<BigUint>(), big(310));
    }

    #[test]
    fn out_of_range_sum() {
        assert!(extremal_window(2, 0, &big(6)).is_err());
        assert!(extremal_window(0, 0, &big(0)).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let b = WindowSearchBounds::default();
        assert_eq!(bruteforce_window_tail(2, 0, &big(4), b).unwrap(), Some(2));
        assert_eq!(bruteforce_window_tail(2, 0, &big(5), b).unwrap(), Some(3));
        assert_eq!(bruteforce_window_tail(2, 0, &big(6), b).unwrap(), None);
        assert_eq!(bruteforce_window_tail(3, 0, &big(3), b).unwrap(), Some(1));
        assert_eq!(bruteforce_window_tail(2, 1, &big(5), b).unwrap(), Some(2));
        let wide = WindowSearchBounds { max_d: 7, max_t: 6 };
        assert_eq!(bruteforce_window_tail(7, 6, &big(310), wide).unwrap(), Some(44));
    }

    #[test]
    fn bruteforce_refuses_large_parameters() {
        assert!(matches!(
            bruteforce_window_tail(7, 6, &big(310), WindowSearchBounds::default()),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn full_ramp_is_the_only_window_at_the_top() {
        let b = WindowSearchBounds::default();
        for d in 1..=5 {
            for t in 0..=3 {
                let top = full_ramp_sum(d, t).to_u64().unwrap();
                assert_eq!(
                    bruteforce_window_tail(d, t, &big(top), b).unwrap(),
                    Some((d * (t + 1) + 1) as u64)
                );
            }
        }
    }

    #[test]
    fn extremal_matches_bruteforce_small() {
        let b = WindowSearchBounds::default();
        for d in 1..=4 {
            for t in 0..=2 {
                let top = full_ramp_sum(d, t).to_u64().unwrap();
                for s in 0..top {
                    let w = extremal_window(d, t, &big(s)).unwrap();
                    let brute = bruteforce_window_tail(d, t, &big(s), b).unwrap().unwrap();
                    assert_eq!(w.last().to_u64().unwrap(), brute, "d={d} t={t} s={s}");
                    assert_eq!(max_window_tail(d, t, &big(s)).unwrap(), big(brute));
                }
            }
        }
    }
}
