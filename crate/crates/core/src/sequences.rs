//! Candidate Hilbert functions and their first differences.
//!
//! A [`HilbertSequence`] stores a finite prefix `h(0), h(1), ...` and a tail
//! mode. With [`HilbertTail::Constant`] the last stored value repeats
//! forever, which is the shape of the Hilbert function of a finite point
//! set. Trailing repeats are dropped on construction, so two sequences are
//! equal exactly when they agree at every `t`.
//!
//! Sampling convention: a sequence `h` is *step-sampled* from `k` when
//! `h(t) = k(step * t)`. For a subvariety of the Veronese variety `V(n, d)`
//! the step is `d` itself; the older "(d-1)-sequence" and `c_{(d+1)t}`
//! labels for the same notion are deliberately not used in this API.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
#[cfg(test)]
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{self, SequenceFile, TailTag};
use crate::macaulay::macaulay_growth;
use crate::surface::completions::{self, CompletionBudget};

static BIG_ZERO: BigInt = BigInt::ZERO;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HilbertTail {
    Constant,
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaTail {
    Zero,
    Unspecified,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HilbertSequence {
    #[serde(serialize_with = "format::big_uint_seq::serialize")]
    values: Vec<BigUint>,
    tail: HilbertTail,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeltaSequence {
    #[serde(serialize_with = "format::big_int_vec::serialize")]
    values: Vec<BigInt>,
    tail: DeltaTail,
}

impl HilbertSequence {
    pub fn new(mut values: Vec<BigUint>, tail: HilbertTail) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("a Hilbert sequence needs at least one value"));
        }
        if tail == HilbertTail::Constant {
            while values.len() > 1 && values[values.len() - 1] == values[values.len() - 2] {
                values.pop();
            }
        }
        Ok(Self { values, tail })
    }

    pub fn constant(values: Vec<BigUint>) -> Result<Self> {
        Self::new(values, HilbertTail::Constant)
    }

    pub fn from_u64s(values: &[u64], tail: HilbertTail) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigUint::from(v)).collect(), tail)
    }

    /// Point-set Hilbert function from a literal table; panics on an empty
    /// slice. Intended for fixtures and tests.
    pub fn points(values: &[u64]) -> Self {
        Self::from_u64s(values, HilbertTail::Constant).expect("non-empty table")
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn tail(&self) -> HilbertTail {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `h(t)`, or `None` past the stored prefix of an unspecified tail.
    pub fn value(&self, t: usize) -> Option<&BigUint> {
        match (self.values.get(t), self.tail) {
            (Some(v), _) => Some(v),
            (None, HilbertTail::Constant) => self.values.last(),
            (None, HilbertTail::Unspecified) => None,
        }
    }

    /// The repeated tail value, i.e. the number of points.
    pub fn eventual_value(&self) -> Option<&BigUint> {
        match self.tail {
            HilbertTail::Constant => self.values.last(),
            HilbertTail::Unspecified => None,
        }
    }

    /// `Δh(t) = h(t) - h(t-1)` with `h(-1) = 0`.
    pub fn first_difference(&self) -> DeltaSequence {
        let mut prev = BigInt::zero();
        let values = self
            .values
            .iter()
            .map(|v| {
                let cur = BigInt::from(v.clone());
                let d = &cur - &prev;
                prev = cur;
                d
            })
            .collect();
        let tail = match self.tail {
            HilbertTail::Constant => DeltaTail::Zero,
            HilbertTail::Unspecified => DeltaTail::Unspecified,
        };
        DeltaSequence::new(values, tail)
    }

    pub fn is_o_sequence(&self) -> bool {
        is_o_sequence(&self.values)
    }

    /// The sequence and its first difference are both O-sequences.
    pub fn is_differentiable_o_sequence(&self) -> bool {
        self.is_o_sequence() && self.first_difference().is_o_sequence()
    }

    pub fn to_file(&self) -> SequenceFile {
        SequenceFile {
            values: self.values.iter().map(|v| BigInt::from(v.clone())).collect(),
            tail: match self.tail {
                HilbertTail::Constant => TailTag::Constant,
                HilbertTail::Unspecified => TailTag::Unspecified,
            },
        }
    }

    pub fn from_file(file: &SequenceFile) -> Result<Self> {
        let tail = match file.tail {
            TailTag::Constant => HilbertTail::Constant,
            TailTag::Unspecified => HilbertTail::Unspecified,
            TailTag::Zero => {
                return Err(Error::invalid("a Hilbert sequence cannot have a zero tail"))
            }
        };
        let values = file
            .values
            .iter()
            .map(|v| {
                v.to_biguint()
                    .ok_or_else(|| Error::invalid(format!("negative Hilbert value {v}")))
            })
            .collect::<Result<_>>()?;
        Self::new(values, tail)
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&SequenceFile::parse(text)?)
    }
}

impl DeltaSequence {
    pub fn new(mut values: Vec<BigInt>, tail: DeltaTail) -> Self {
        if tail == DeltaTail::Zero {
            while values.last().is_some_and(Zero::is_zero) {
                values.pop();
            }
        }
        Self { values, tail }
    }

    pub fn from_i64s(values: &[i64], tail: DeltaTail) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect(), tail)
    }

    /// Zero-tailed difference from a literal table.
    pub fn finite(values: &[i64]) -> Self {
        Self::from_i64s(values, DeltaTail::Zero)
    }

    pub(crate) fn from_counts(values: &[u64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect(), DeltaTail::Zero)
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn tail(&self) -> DeltaTail {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, t: usize) -> Option<&BigInt> {
        match (self.values.get(t), self.tail) {
            (Some(v), _) => Some(v),
            (None, DeltaTail::Zero) => Some(&BIG_ZERO),
            (None, DeltaTail::Unspecified) => None,
        }
    }

    /// Sum of all values of a zero-tailed difference.
    pub fn total(&self) -> BigInt {
        self.values.iter().sum()
    }

    /// Inverse of [`HilbertSequence::first_difference`]. Fails when a partial
    /// sum goes negative.
    pub fn prefix_sums(&self) -> Result<HilbertSequence> {
        let mut acc = BigInt::zero();
        let mut out = Vec::with_capacity(self.values.len().max(1));
        for v in &self.values {
            acc += v;
            out.push(
                acc.to_biguint()
                    .ok_or_else(|| Error::invalid("negative partial sum"))?,
            );
        }
        if out.is_empty() {
            out.push(BigUint::zero());
        }
        let tail = match self.tail {
            DeltaTail::Zero => HilbertTail::Constant,
            DeltaTail::Unspecified => HilbertTail::Unspecified,
        };
        HilbertSequence::new(out, tail)
    }

    pub fn is_o_sequence(&self) -> bool {
        if self.values.iter().any(|v| v.sign() == Sign::Minus) {
            return false;
        }
        let unsigned: Vec<BigUint> = self.values.iter().map(|v| v.magnitude().clone()).collect();
        is_o_sequence(&unsigned)
    }

    #[cfg(test)]
    pub(crate) fn to_counts(&self) -> Option<Vec<u64>> {
        self.values.iter().map(|v| v.to_u64()).collect()
    }

    pub fn to_file(&self) -> SequenceFile {
        SequenceFile {
            values: self.values.clone(),
            tail: match self.tail {
                DeltaTail::Zero => TailTag::Zero,
                DeltaTail::Unspecified => TailTag::Unspecified,
            },
        }
    }

    pub fn from_file(file: &SequenceFile) -> Result<Self> {
        let tail = match file.tail {
            TailTag::Zero => DeltaTail::Zero,
            TailTag::Unspecified => DeltaTail::Unspecified,
            TailTag::Constant => {
                return Err(Error::invalid("a difference sequence cannot have a constant tail"))
            }
        };
        Ok(Self::new(file.values.clone(), tail))
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&SequenceFile::parse(text)?)
    }
}

/// `s(0) = 1` and `s(t+1) <= s(t)^<t>` for every stored `t >= 1`.
///
/// There is no constraint on `s(1)` (it is the number of variables), and a
/// constant or zero tail never violates the growth bound, so checking the
/// stored prefix suffices.
pub fn is_o_sequence(values: &[BigUint]) -> bool {
    if values.first().is_none_or(|v| !v.is_one()) {
        return false;
    }
    values
        .windows(2)
        .enumerate()
        .skip(1)
        .all(|(t, w)| {
            // c^<t> >= c, with equality once c <= t
            w[1] <= w[0]
                || (w[0] > BigUint::from(t) && w[1] <= macaulay_growth(&w[0], t).expect("t >= 1"))
        })
}

pub fn is_differentiable_o_sequence(h: &HilbertSequence) -> bool {
    h.is_differentiable_o_sequence()
}

/// Shape of the first difference of a finite reduced point set in the
/// plane: `Δ(t) = t + 1` up to some `t'`, non-increasing afterwards, and
/// eventually zero.
pub fn is_valid_p2_points_difference(delta: &DeltaSequence) -> bool {
    if delta.tail() != DeltaTail::Zero {
        return false;
    }
    let values = delta.values();
    if values.iter().any(|v| v.is_negative()) {
        return false;
    }
    // The longest ramp prefix works whenever any t' does.
    let ramp = values
        .iter()
        .enumerate()
        .take_while(|(t, v)| **v == BigInt::from(*t + 1))
        .count();
    if ramp == 0 {
        return false;
    }
    values[ramp - 1..].windows(2).all(|w| w[0] >= w[1])
}

/// Decide whether `h(t) = k(step * t)` for some differentiable O-sequence `k`
/// with `k(1) <= n + 1`, returning one such `k`.
pub fn is_step_sampled_sequence(
    h: &HilbertSequence,
    step: usize,
    n: usize,
    budget: &CompletionBudget,
) -> Result<Option<HilbertSequence>> {
    if h.tail() != HilbertTail::Constant {
        return Err(Error::invalid(
            "step-sampling search needs a constant tail (the search is unbounded otherwise)",
        ));
    }
    if step == 0 || n == 0 {
        return Err(Error::invalid("step and n must be positive"));
    }
    Ok(completions::first_completion(h, step, n, budget)?
        .map(|delta| delta.prefix_sums().expect("completions are non-negative")))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const REJECTED_H: [u64; 12] =
        [1, 36, 120, 253, 435, 666, 946, 1256, 1531, 1744, 1956, 2022];

    fn big_vec(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn first_difference_of_example_table() {
        let h = HilbertSequence::points(&REJECTED_H);
        assert_eq!(
            h.first_difference(),
            DeltaSequence::finite(&[1, 35, 84, 133, 182, 231, 280, 310, 275, 213, 212, 66])
        );
    }

    #[test]
    fn first_difference_small() {
        assert_eq!(HilbertSequence::points(&[1]).first_difference(), DeltaSequence::finite(&[1]));
        assert_eq!(
            HilbertSequence::points(&[1, 2, 2]).first_difference(),
            DeltaSequence::finite(&[1, 1, 0])
        );
        let open = HilbertSequence::from_u64s(&[1, 3, 6], HilbertTail::Unspecified).unwrap();
        assert_eq!(open.first_difference().tail(), DeltaTail::Unspecified);
    }

    #[test]
    fn normalization_drops_trailing_repeats() {
        let h = HilbertSequence::points(&[1, 2, 2, 2]);
        assert_eq!(h.values(), big_vec(&[1, 2]).as_slice());
        assert_eq!(h.value(17), Some(&BigUint::from(2u32)));
        let open = HilbertSequence::from_u64s(&[1, 2, 2], HilbertTail::Unspecified).unwrap();
        assert_eq!(open.len(), 3);
        assert_eq!(open.value(3), None);
        assert!(HilbertSequence::constant(vec![]).is_err());
    }

    #[test]
    fn o_sequences() {
        assert!(is_o_sequence(&big_vec(&[1, 3, 5, 7])));
        assert!(!is_o_sequence(&big_vec(&[1, 2, 4])));
        assert!(is_o_sequence(&big_vec(&[1])));
        assert!(!is_o_sequence(&big_vec(&[2, 3])));
        assert!(!is_o_sequence(&[]));
    }

    #[test]
    fn differentiable_o_sequences() {
        assert!(HilbertSequence::points(&REJECTED_H).is_differentiable_o_sequence());
        assert!(!HilbertSequence::points(&[1, 3, 5, 8]).is_differentiable_o_sequence());
        assert!(HilbertSequence::points(&[1, 2, 3, 4]).is_differentiable_o_sequence());
        // decreasing, so the difference goes negative
        assert!(!HilbertSequence::points(&[1, 3, 6, 5]).is_differentiable_o_sequence());
    }

    #[test]
    fn plane_point_differences() {
        assert!(is_valid_p2_points_difference(&DeltaSequence::finite(&[1, 2, 2, 2, 1])));
        assert!(!is_valid_p2_points_difference(&DeltaSequence::finite(&[1, 2, 1, 2])));
        let ramp: Vec<i64> = (1..=15).collect();
        assert!(is_valid_p2_points_difference(&DeltaSequence::finite(&ramp)));
        assert!(is_valid_p2_points_difference(&DeltaSequence::finite(&[1, 1, 1])));
        assert!(!is_valid_p2_points_difference(&DeltaSequence::finite(&[1, 3])));
        assert!(!is_valid_p2_points_difference(&DeltaSequence::finite(&[])));
        assert!(!is_valid_p2_points_difference(&DeltaSequence::finite(&[1, -1])));
        assert!(!is_valid_p2_points_difference(&DeltaSequence::from_i64s(
            &[1, 1],
            DeltaTail::Unspecified
        )));
    }

    #[test]
    fn prefix_sums_invert_first_difference() {
        let h = HilbertSequence::points(&REJECTED_H);
        assert_eq!(h.first_difference().prefix_sums().unwrap(), h);
        assert!(DeltaSequence::finite(&[1, -2]).prefix_sums().is_err());
    }

    #[test]
    fn json_round_trip_and_tail_checks() {
        let h = HilbertSequence::points(&[1, 3, 4]);
        assert_eq!(h.to_json(), r#"{"values":[1,3,4],"tail":"constant"}"#);
        assert_eq!(HilbertSequence::from_json(&h.to_json()).unwrap(), h);
        assert!(HilbertSequence::from_json(r#"{"values":[1,-3],"tail":"constant"}"#).is_err());
        assert!(HilbertSequence::from_json(r#"{"values":[1],"tail":"zero"}"#).is_err());
        let d = DeltaSequence::finite(&[1, 2, -3]);
        assert_eq!(DeltaSequence::from_json(&d.to_json()).unwrap(), d);
        assert!(DeltaSequence::from_json(r#"{"values":[1],"tail":"constant"}"#).is_err());
    }

    #[test]
    fn step_one_sampling_is_differentiability() {
        let budget = CompletionBudget::default();
        for h in [
            HilbertSequence::points(&[1, 3, 5, 7]),
            HilbertSequence::points(&[1, 3, 5, 8]),
            HilbertSequence::points(&[1, 2, 3, 4]),
            HilbertSequence::points(&[1, 3, 6, 10, 12]),
            HilbertSequence::points(&[1, 3, 4, 8]),
        ] {
            let found = is_step_sampled_sequence(&h, 1, 10, &budget).unwrap();
            assert_eq!(found.is_some(), h.is_differentiable_o_sequence(), "{h:?}");
            if let Some(k) = found {
                assert_eq!(k, h);
            }
        }
    }

    #[test]
    fn step_sampling_refuses_open_tails() {
        let open = HilbertSequence::from_u64s(&[1, 3], HilbertTail::Unspecified).unwrap();
        assert!(is_step_sampled_sequence(&open, 2, 2, &CompletionBudget::default()).is_err());
    }
}
