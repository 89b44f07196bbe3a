//! Exhaustive search for the preimage Hilbert functions `k` that sample to a
//! given `h`, i.e. `h(t) = k(step t)`, with `k` a differentiable O-sequence
//! and `k(1) <= n + 1`.
//!
//! The search works on `δ = Δk`. The constraints are local:
//!
//! * `δ(0) = 1`, `δ(1) <= n`, `δ(j+1) <= δ(j)^<j>` (Δk is an O-sequence),
//! * `k(j+1) <= k(j)^<j>` (k is an O-sequence),
//! * block sums `δ(step t + 1) + ... + δ(step t + step) = Δh(t + 1)`.
//!
//! For `n = 2` the O-sequence condition on `δ` is exactly the plane-points
//! shape (a ramp `δ(j) = j + 1`, then non-increasing), which gives a cheap
//! closed-form bound and stronger look-ahead. Nothing here uses the
//! surface criterion; this module is the independent oracle it is checked
//! against.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::macaulay::growth_u64;
use crate::sequences::{DeltaSequence, HilbertSequence, HilbertTail};

/// Caps for the exhaustive search. Exceeding either is reported as
/// [`Error::BudgetExceeded`], never as an empty answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionBudget {
    /// Search-tree nodes visited.
    pub max_nodes: u64,
    /// Completions collected by [`enumerate_completions`].
    pub max_completions: usize,
}

impl Default for CompletionBudget {
    fn default() -> Self {
        Self {
            max_nodes: 50_000_000,
            max_completions: 100_000,
        }
    }
}

impl CompletionBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

/// All first differences `Δk` of differentiable O-sequences `k` with
/// `k(1) <= n + 1` and `k(step t) = h(t)` for every `t`.
pub fn enumerate_completions(
    h: &HilbertSequence,
    step: usize,
    n: usize,
    budget: &CompletionBudget,
) -> Result<Vec<DeltaSequence>> {
    let mut search = Search::new(h, step, n, budget, None)?;
    if let Some(search) = search.as_mut() {
        search.run()?;
        Ok(search.found.drain(..).map(|d| DeltaSequence::from_counts(&d)).collect())
    } else {
        Ok(Vec::new())
    }
}

/// The first completion found, if any.
pub fn first_completion(
    h: &HilbertSequence,
    step: usize,
    n: usize,
    budget: &CompletionBudget,
) -> Result<Option<DeltaSequence>> {
    let mut search = Search::new(h, step, n, budget, Some(1))?;
    if let Some(search) = search.as_mut() {
        search.run()?;
        Ok(search.found.first().map(|d| DeltaSequence::from_counts(d)))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    step: usize,
    n: u64,
    /// Required block sums, `block_sums[b] = Δh(b + 1)`.
    block_sums: Vec<u64>,
    budget: &'a CompletionBudget,
    stop_after: Option<usize>,
    nodes: u64,
    delta: Vec<u64>,
    /// prefix sums of `delta`
    k: Vec<u64>,
    found: Vec<Vec<u64>>,
    growth_cache: HashMap<(u64, usize), u64>,
}

enum Flow {
    Continue,
    Stop,
}

impl<'a> Search<'a> {
    /// `None` when the input trivially admits no completion.
    fn new(
        h: &HilbertSequence,
        step: usize,
        n: usize,
        budget: &'a CompletionBudget,
        stop_after: Option<usize>,
    ) -> Result<Option<Self>> {
        if h.tail() != HilbertTail::Constant {
            return Err(Error::invalid("completion search needs a constant tail"));
        }
        if step == 0 || n == 0 {
            return Err(Error::invalid("step and n must be positive"));
        }
        let values: Vec<u64> = h
            .values()
            .iter()
            .map(|v| v.to_u64())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::budget("Hilbert values too large for exhaustive search"))?;
        if values[0] != 1 || values.windows(2).any(|w| w[1] < w[0]) {
            return Ok(None);
        }
        let block_sums = values.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
        let positions = step
            .checked_mul(block_sums.len())
            .ok_or_else(|| Error::budget("search depth overflows"))?;
        let mut delta = Vec::with_capacity(positions + 1);
        delta.push(1);
        let mut k = Vec::with_capacity(positions + 1);
        k.push(1);
        Ok(Some(Self {
            step,
            n: n as u64,
            block_sums,
            budget,
            stop_after,
            nodes: 0,
            delta,
            k,
            found: Vec::new(),
            growth_cache: HashMap::new(),
        }))
    }

    fn plane(&self) -> bool {
        self.n == 2
    }

    fn growth(&mut self, c: u64, t: usize) -> u64 {
        if self.plane() {
            // O-sequences with δ(1) <= 2: values never exceed t + 1 and only
            // the full value t + 1 may grow.
            return if c == t as u64 + 1 { c + 1 } else { c };
        }
        *self
            .growth_cache
            .entry((c, t))
            .or_insert_with(|| growth_u64(c, t))
    }

    /// Upper bound on `δ(j)` given `δ(0..j)`.
    fn cap(&mut self, j: usize) -> u64 {
        if j == 1 {
            return self.n;
        }
        let prev = self.delta[j - 1];
        let mut cap = self.growth(prev, j - 1);
        if !self.plane() {
            // k(j) = k(j-1) + δ(j) <= k(j-1)^<j-1>
            let kp = self.k[j - 1];
            let kcap = self.growth(kp, j - 1);
            cap = cap.min(kcap.saturating_sub(kp));
        }
        cap
    }

    /// Largest total over `count` positions starting at `j`, if `δ(j-1) = prev`.
    fn chain_bound(&mut self, prev: u64, j: usize, count: usize) -> u64 {
        let mut total = 0u64;
        let mut v = prev;
        for pos in j..j + count {
            v = if pos == 1 { self.n } else { self.growth(v, pos - 1) };
            total = total.saturating_add(v);
            if v == 0 {
                break;
            }
        }
        total
    }

    fn run(&mut self) -> Result<()> {
        if self.block_sums.is_empty() {
            self.found.push(self.delta.clone());
            return Ok(());
        }
        self.block(0).map(|_| ())
    }

    fn on_ramp(&self) -> bool {
        let j = self.delta.len() - 1;
        self.delta[j] == j as u64 + 1
    }

    fn block(&mut self, b: usize) -> Result<Flow> {
        if b == self.block_sums.len() {
            self.found.push(self.delta.clone());
            if let Some(limit) = self.stop_after {
                if self.found.len() >= limit {
                    return Ok(Flow::Stop);
                }
            }
            if self.found.len() > self.budget.max_completions {
                return Err(Error::budget(format!(
                    "more than {} completions",
                    self.budget.max_completions
                )));
            }
            return Ok(Flow::Continue);
        }
        let target = self.block_sums[b];
        self.fill(b, target, self.step)
    }

    /// Choose `δ` at the next position, with `remaining` still owed to block
    /// `b` over `slots` positions.
    fn fill(&mut self, b: usize, remaining: u64, slots: usize) -> Result<Flow> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::budget(format!(
                "search visited more than {} nodes",
                self.budget.max_nodes
            )));
        }
        if slots == 0 {
            if remaining != 0 {
                return Ok(Flow::Continue);
            }
            if !self.next_block_reachable(b) {
                return Ok(Flow::Continue);
            }
            return self.block(b + 1);
        }
        let j = self.delta.len();
        let prev = self.delta[j - 1];
        if self.chain_bound(prev, j, slots) < remaining {
            return Ok(Flow::Continue);
        }
        if self.plane() && !self.on_ramp() {
            // Non-increasing from here on: the block's last value is at most
            // the average of what is left, and the next block can use at
            // most `step` copies of it.
            if let Some(&next) = self.block_sums.get(b + 1) {
                let last_max = remaining / slots as u64;
                if (self.step as u64).saturating_mul(last_max) < next {
                    return Ok(Flow::Continue);
                }
            }
        }
        let cap = self.cap(j).min(remaining);
        let low = if slots == 1 { remaining } else { 0 };
        if low > cap {
            return Ok(Flow::Continue);
        }
        for x in (low..=cap).rev() {
            let kp = self.k[j - 1];
            self.delta.push(x);
            self.k.push(kp + x);
            let flow = self.fill(b, remaining - x, slots - 1);
            self.delta.pop();
            self.k.pop();
            if let Flow::Stop = flow? {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn next_block_reachable(&mut self, b: usize) -> bool {
        match self.block_sums.get(b + 1) {
            None => true,
            Some(&next) => {
                let j = self.delta.len();
                let prev = self.delta[j - 1];
                self.chain_bound(prev, j, self.step) >= next
            }
        }
    }
}
