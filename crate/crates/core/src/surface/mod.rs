//! Deciding whether a point-set Hilbert function `h` is realized by reduced
//! points on the Veronese surface `V(2, d)`.
//!
//! Let `t1` be the last degree where `h` agrees with the surface itself and
//! `t2` the first degree where `h` reaches the number of points `m`. Then
//! `h` is realizable iff
//!
//! 1. `max_window_tail(d, t1, Δh(t1+1)) >= ceil(Δh(t1+2) / d)`, and
//! 2. `floor(Δh(t) / d) >= ceil(Δh(t+1) / d)` for `t1 + 2 <= t <= t2 - 1`.
//!
//! On acceptance a preimage difference `Δk` in the plane is built
//! explicitly and checked.

pub mod completions;
pub mod window;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format;
use crate::macaulay::binom;
use crate::sequences::{DeltaSequence, DeltaTail, HilbertSequence, HilbertTail};

pub use completions::{enumerate_completions, first_completion, CompletionBudget};
pub use window::{bruteforce_window_tail, extremal_window, WindowSearchBounds, BoundaryWindow, WindowShape};

/// `d^2 t + d (d + 3) / 2`, the sum of the full ramp `d t + i + 1`,
/// `i = 1..d`. Equals `C(2 + d(t+1), 2) - C(2 + d t, 2)`.
pub fn full_ramp_sum(d: usize, t: usize) -> BigUint {
    let d = BigUint::from(d);
    &d * &d * t + &d * (&d + 3u32) / 2u32
}

/// Deficiency of a window sum against the full ramp.
pub fn window_deficiency(d: usize, t: usize, s: &BigUint) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    let full = full_ramp_sum(d, t);
    if *s > full {
        return Err(Error::invalid(format!(
            "s = {s} exceeds d^2 t + d(d+3)/2 = {full}"
        )));
    }
    Ok(full - s)
}

/// Largest last value of an admissible window with sum `s`.
pub fn max_window_tail(d: usize, t: usize, s: &BigUint) -> Result<BigUint> {
    let p = window_deficiency(d, t, s)?;
    if p.is_zero() {
        return Err(Error::invalid(
            "mu1 = 0: the window is the full ramp, so t is not the last full degree",
        ));
    }
    Ok(tail_bound(d, t, &p))
}

/// `mu2` as a function of the deficiency `p <= full_ramp_sum(d, t)`,
/// extended to `p = 0`.
pub(crate) fn tail_bound(d: usize, t: usize, p: &BigUint) -> BigUint {
    let corner = binom(BigUint::from(d + 1), 2);
    let dd = BigUint::from(d);
    if *p <= corner {
        // floor((2d(t+1) + 3 - sqrt(1 + 8p)) / 2)
        let a = &dd * (t + 1) * 2u32 + 3u32;
        let x = p * 8u32 + 1u32;
        let r = x.sqrt();
        if &r * &r == x {
            (a - r) / 2u32
        } else {
            (a - r - 1u32) / 2u32
        }
    } else {
        // C(d+1,2) + d n < p <= C(d+1,2) + d (n+1)
        let n = (p - &corner).div_ceil(&dd) - 1u32;
        dd * t - n
    }
}

fn ceil_div(a: &BigUint, d: usize) -> BigUint {
    a.div_ceil(&BigUint::from(d))
}

fn floor_div(a: &BigUint, d: usize) -> BigUint {
    a / BigUint::from(d)
}

/// Landmark degrees and `Δh` of a candidate point-set Hilbert function on
/// `V(2, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionContext {
    pub d: usize,
    pub h: HilbertSequence,
    #[serde(with = "format::big_uint")]
    pub m: BigUint,
    /// Last degree where `h` agrees with the surface.
    #[serde(rename = "t1")]
    pub last_full: usize,
    /// First degree from which `Δh` vanishes.
    #[serde(rename = "t2")]
    pub settled: usize,
    pub delta: DeltaSequence,
}

impl DecisionContext {
    /// `Δh(t)` as a non-negative integer (zero past the stored range).
    pub fn delta_at(&self, t: usize) -> BigUint {
        self.delta
            .value(t)
            .and_then(|v| v.to_biguint())
            .unwrap_or_default()
    }
}

/// Value of the Veronese surface `V(2, d)` in degree `t`.
pub fn surface_hf(d: usize, t: usize) -> BigUint {
    binom(BigUint::from(2 + d * t), 2)
}

pub fn landmarks(h: &HilbertSequence, d: usize) -> Result<DecisionContext> {
    if d == 0 {
        return Err(Error::invalid("d must be positive"));
    }
    if h.tail() != HilbertTail::Constant {
        return Err(Error::invalid("point-set Hilbert functions need a constant tail"));
    }
    if !h.values()[0].is_one() {
        return Err(Error::invalid("h(0) must be 1"));
    }
    let mut t1 = 0;
    let mut deficit = BigUint::zero();
    for (t, v) in h.values().iter().enumerate() {
        let bound = surface_hf(d, t);
        if *v > bound {
            return Err(Error::invalid(format!(
                "h({t}) = {v} exceeds the Veronese surface value {bound}"
            )));
        }
        // forms vanishing on the points, modulo the surface, only gain
        // dimension with the degree
        let gap = bound - v;
        if gap < deficit {
            return Err(Error::invalid(format!(
                "surface value minus h drops from {deficit} to {gap} at t = {t}"
            )));
        }
        deficit = gap;
        if deficit.is_zero() {
            t1 = t;
        }
    }
    let m = h.eventual_value().expect("constant tail").clone();
    let t2 = h
        .values()
        .iter()
        .position(|v| *v == m)
        .expect("m is stored");
    if t2 < t1 {
        return Err(Error::invalid("h reaches its final value before leaving the surface"));
    }
    Ok(DecisionContext {
        d,
        h: h.clone(),
        m,
        last_full: t1,
        settled: t2,
        delta: h.first_difference(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum FailedCondition {
    /// The window at `t1` cannot end high enough for the next block.
    #[serde(rename = "cond_i")]
    CondI {
        #[serde(with = "format::big_uint")]
        #[serde(rename = "mu2")]
        max_tail: BigUint,
        #[serde(with = "format::big_uint")]
        required: BigUint,
    },
    /// `floor(Δh(t)/d) < ceil(Δh(t+1)/d)`.
    #[serde(rename = "cond_ii")]
    CondII {
        t: usize,
        #[serde(with = "format::big_uint")]
        floor: BigUint,
        #[serde(with = "format::big_uint")]
        ceil: BigUint,
    },
    /// The input is not a Hilbert function of reduced points in `P^N`.
    #[serde(rename = "not_point_hf")]
    NotPointHF { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub failed_condition: Option<FailedCondition>,
    #[serde(with = "format::big_uint_opt")]
    #[serde(rename = "mu1")]
    pub deficiency: Option<BigUint>,
    #[serde(with = "format::big_uint_opt")]
    #[serde(rename = "mu2")]
    pub max_tail: Option<BigUint>,
    #[serde(rename = "t1")]
    pub last_full: Option<usize>,
    #[serde(rename = "t2")]
    pub settled: Option<usize>,
    pub witness: Option<DeltaSequence>,
}

impl Verdict {
    fn not_point(reason: impl Into<String>) -> Self {
        Self {
            accepted: false,
            failed_condition: Some(FailedCondition::NotPointHF {
                reason: reason.into(),
            }),
            deficiency: None,
            max_tail: None,
            last_full: None,
            settled: None,
            witness: None,
        }
    }

    pub fn is_not_point(&self) -> bool {
        matches!(self.failed_condition, Some(FailedCondition::NotPointHF { .. }))
    }
}

/// Hypotheses on `h` before the criterion applies: a differentiable
/// O-sequence with constant tail, `h(1) <= N + 1`, below the surface.
fn precheck(h: &HilbertSequence, d: usize) -> std::result::Result<DecisionContext, String> {
    if d == 0 {
        return Err("d must be positive".into());
    }
    if h.tail() != HilbertTail::Constant {
        return Err("tail is not constant".into());
    }
    if let Some(h1) = h.value(1) {
        let ambient = BigUint::from(d) * (d + 3) / 2u32;
        if *h1 > ambient + 1u32 {
            return Err(format!("h(1) = {h1} exceeds N + 1 for V(2,{d})"));
        }
    }
    let ctx = landmarks(h, d).map_err(|e| match e {
        Error::InvalidInput(msg) => msg,
        other => other.to_string(),
    })?;
    if !h.is_differentiable_o_sequence() {
        return Err("not a differentiable O-sequence".into());
    }
    Ok(ctx)
}

pub fn decide_surface(h: &HilbertSequence, d: usize) -> Verdict {
    let ctx = match precheck(h, d) {
        Ok(ctx) => ctx,
        Err(reason) => return Verdict::not_point(reason),
    };
    let (t1, t2) = (ctx.last_full, ctx.settled);
    let window_sum = ctx.delta_at(t1 + 1);
    let mu1_value = window_deficiency(d, t1, &window_sum).expect("below the surface");
    let mu2_value = max_window_tail(d, t1, &window_sum).expect("t1 is the last full degree");
    let mut verdict = Verdict {
        accepted: false,
        failed_condition: None,
        deficiency: Some(mu1_value),
        max_tail: Some(mu2_value.clone()),
        last_full: Some(t1),
        settled: Some(t2),
        witness: None,
    };

    let required = ceil_div(&ctx.delta_at(t1 + 2), d);
    if mu2_value < required {
        verdict.failed_condition = Some(FailedCondition::CondI {
            max_tail: mu2_value,
            required,
        });
        return verdict;
    }
    for t in (t1 + 2)..t2 {
        let floor = floor_div(&ctx.delta_at(t), d);
        let ceil = ceil_div(&ctx.delta_at(t + 1), d);
        if floor < ceil {
            verdict.failed_condition = Some(FailedCondition::CondII { t, floor, ceil });
            return verdict;
        }
    }
    verdict.accepted = true;
    verdict.witness = Some(construct_witness(&ctx));
    verdict
}

/// Builds `Δk` for an accepted context: the ramp through degree `d t1`,
/// the extremal window, then each later block spread as evenly as possible
/// (ceilings first). Panics if the result fails its own checks, which
/// would mean the criterion was applied to an input it does not cover.
pub fn construct_witness(ctx: &DecisionContext) -> DeltaSequence {
    let d = ctx.d;
    let (t1, t2) = (ctx.last_full, ctx.settled);
    let mut values: Vec<BigUint> = (0..=d * t1).map(|j| BigUint::from(j + 1)).collect();

    let window = extremal_window(d, t1, &ctx.delta_at(t1 + 1)).expect("window sum in range");
    let junction = ceil_div(&ctx.delta_at(t1 + 2), d);
    assert!(
        *window.last() >= junction,
        "window tail {} does not reach the next block's {}",
        window.last(),
        junction
    );
    values.extend(window.values.iter().cloned());

    for t in (t1 + 1)..t2 {
        let target = ctx.delta_at(t + 1);
        let (q, e) = target.div_rem(&BigUint::from(d));
        let e = e.to_usize().expect("remainder below d");
        for i in 1..=d {
            values.push(if i <= e { &q + 1u32 } else { q.clone() });
        }
    }

    let witness = DeltaSequence::new(
        values.into_iter().map(BigInt::from).collect(),
        DeltaTail::Zero,
    );
    assert!(
        crate::sequences::is_valid_p2_points_difference(&witness),
        "witness is not a plane points difference"
    );
    assert!(
        diagonal_sums_match(&witness, &ctx.delta, d),
        "witness block sums differ from Δh"
    );
    assert!(
        samples_to(&witness, &ctx.h, d),
        "witness prefix sums do not sample to h"
    );
    witness
}

/// `Σ_{i=1..d} Δk(d t + i) = Δh(t + 1)` for every `t`, and `Δk(0) = Δh(0)`.
pub fn diagonal_sums_match(delta_k: &DeltaSequence, delta_h: &DeltaSequence, d: usize) -> bool {
    if d == 0 || delta_k.value(0) != delta_h.value(0) {
        return false;
    }
    let blocks = delta_h.len().max(delta_k.len().div_ceil(d)) + 1;
    (0..blocks).all(|t| {
        let sum: BigInt = (1..=d)
            .map(|i| delta_k.value(d * t + i).cloned().unwrap_or_default())
            .sum();
        Some(&sum) == delta_h.value(t + 1).or(Some(&BigInt::ZERO))
    })
}

/// Prefix sums of `delta_k` at multiples of `step` reproduce `h`.
pub fn samples_to(delta_k: &DeltaSequence, h: &HilbertSequence, step: usize) -> bool {
    let Ok(k) = delta_k.prefix_sums() else {
        return false;
    };
    let horizon = h.len().max(k.len().div_ceil(step.max(1))) + 1;
    (0..horizon).all(|t| k.value(step * t) == h.value(t))
}
