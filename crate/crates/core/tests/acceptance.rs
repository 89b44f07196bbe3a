//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use veronese_core::ci::{
    window_inequality_solutions, classify_threefold, format_gap_table, scan_surface_ci, threefold_gap_table, Evidence,
    ScanStatus,
};
use veronese_core::macaulay::macaulay_growth;
use veronese_core::realization::{
    embed_set, hilbert_function_of_points, staircase, PointSet, ProjectivePoint,
};
use veronese_core::sequences::{is_valid_p2_points_difference, DeltaSequence, DeltaTail};
use veronese_core::surface::{
    decide_surface, diagonal_sums_match, first_completion, full_ramp_sum, max_window_tail, samples_to,
    bruteforce_window_tail, extremal_window, CompletionBudget, FailedCondition, WindowSearchBounds,
};
use veronese_core::veronese::{divisor_hf, rnc_points_hf};
use veronese_core::{HilbertSequence, VeroneseParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

const REJECTED_H: [u64; 12] = [1, 36, 120, 253, 435, 666, 946, 1256, 1531, 1744, 1956, 2022];
const ACCEPTED_H: [u64; 12] = [1, 36, 120, 253, 435, 666, 946, 1256, 1531, 1744, 1915, 2022];

fn rejected_sequence() -> Outcome {
    let v = decide_surface(&HilbertSequence::points(&REJECTED_H), 7);
    let got = (
        v.last_full,
        v.settled,
        v.deficiency.clone(),
        v.max_tail.clone(),
        v.failed_condition.clone(),
    );
    let want = (
        Some(6),
        Some(11),
        Some(big(19)),
        Some(big(44)),
        Some(FailedCondition::CondII {
            t: 9,
            floor: big(30),
            ceil: big(31),
        }),
    );
    ensure(!v.accepted && got == want, || format!("{got:?}"))?;
    // condition (i): 44 >= ceil(Δh(8) / 7) = ceil(275 / 7) = 40
    let required = (REJECTED_H[8] - REJECTED_H[7]).div_ceil(7);
    ensure(required == 40, || format!("condition (i) bound {required}"))?;
    Ok("t1=6 t2=11 mu1=19 mu2=44 >= 40, fails at t=9: 30 < 31".into())
}

fn accepted_sequence() -> Outcome {
    let h = HilbertSequence::points(&ACCEPTED_H);
    let v = decide_surface(&h, 7);
    ensure(v.accepted, || format!("rejected: {:?}", v.failed_condition))?;
    let w = v.witness.ok_or("no witness")?;
    ensure(is_valid_p2_points_difference(&w), || "witness shape".into())?;
    ensure(diagonal_sums_match(&w, &h.first_difference(), 7), || {
        "diagonal sums".into()
    })?;
    ensure(samples_to(&w, &h, 7), || "step-7 prefix sums".into())?;
    Ok(format!("accepted, witness of length {}", w.len()))
}

fn gap_table() -> Outcome {
    let want = "p | H_Y(2) | M(p) | m(p) | M(p)-m(p)\n\
                1 | 9 | 25 | 37 | -12\n\
                2 | 8 | 19 | 29 | -10\n\
                3 | 7 | 16 | 22 | -6\n\
                4 | 6 | 15 | 16 | -1\n\
                5 | 5 | 9 | 11 | -2\n\
                6 | 4 | 6 | 7 | -1\n\
                7 | 3 | 5 | 4 | 1\n\
                8 | 2 | 2 | 2 | 0\n";
    let got = format_gap_table(&threefold_gap_table());
    ensure(got == want, || got.clone())?;
    let admitted: BTreeSet<String> = classify_threefold(6)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|r| r.status.is_admitted())
        .map(|r| r.ci_type.to_string())
        .collect();
    let mut expected: BTreeSet<String> =
        ["(1^9)", "(1^8,2)", "(1^7,2)", "(1^7,2^2)"].map(String::from).into();
    expected.extend((3..=6).map(|b| format!("(1^7,2,{b})")));
    ensure(admitted == expected, || format!("classification {admitted:?}"))?;
    Ok("8 rows byte-identical; classification matches".into())
}

fn inequality_scan() -> Outcome {
    for d in 2..=10 {
        let n = d * (d + 3) / 2;
        let mut want = vec![(n - 1, 1)];
        if d == 2 {
            want.extend([(3, 1), (3, 2)]);
        }
        if d == 3 {
            want.push((6, 3));
        }
        want.sort();
        let got = window_inequality_solutions(d);
        ensure(got == want, || format!("d={d}: {got:?}"))?;
    }
    Ok("d = 2..10".into())
}

fn classification() -> Outcome {
    let budget = CompletionBudget::default();
    let a_max = 6;
    let mut expected: BTreeSet<String> =
        ["(1^5)", "(1^4,2)", "(1^3,2)", "(1^3,2^2)"].map(String::from).into();
    expected.extend((3..=a_max).map(|a| format!("(1^3,2,{a})")));
    let records = scan_surface_ci(2, a_max, &budget).map_err(|e| e.to_string())?;
    let admitted: BTreeSet<String> = records
        .iter()
        .filter(|r| r.status.is_admitted())
        .map(|r| r.ci_type.to_string())
        .collect();
    ensure(admitted == expected, || format!("d=2: {admitted:?}"))?;
    let cases: BTreeSet<String> = records
        .iter()
        .filter_map(|r| match &r.status {
            ScanStatus::Admitted { case } if case.starts_with("conic and") => {
                Some("conic and hypersurface".to_string())
            }
            ScanStatus::Admitted { case } => Some(case.clone()),
            _ => None,
        })
        .collect();
    ensure(cases.len() == 4, || format!("families {cases:?}"))?;

    for d in 3..=5 {
        let n = d * (d + 3) / 2;
        let records = scan_surface_ci(d, a_max, &budget).map_err(|e| e.to_string())?;
        let admitted: BTreeSet<String> = records
            .iter()
            .filter(|r| r.status.is_admitted())
            .map(|r| r.ci_type.to_string())
            .collect();
        let want: BTreeSet<String> =
            [format!("(1^{n})"), format!("(1^{},2)", n - 1)].into();
        ensure(admitted == want, || format!("d={d}: {admitted:?}"))?;
        if d == 3 {
            let r = records
                .iter()
                .find(|r| r.ci_type.to_string() == "(1^6,2^3)")
                .ok_or("(1^6,2^3) missing")?;
            let ok = r.status == ScanStatus::RejectedByUniqueCompletion
                && matches!(&r.evidence, Evidence::Completions { count: 1, on_a_line: true, points }
                    if *points == big(8));
            ensure(ok, || format!("(1^6,2^3): {:?} {:?}", r.status, r.evidence))?;
        }
    }
    Ok(format!("a_max={a_max}; d=2 four families, d=3..5 point and two points"))
}

/// Differentiable O-sequences with `Δh(1) <= max_first`, at most `max_len`
/// nonzero differences and total at most `max_total`.
fn point_hilbert_functions(max_first: u64, max_len: usize, max_total: u64) -> Vec<Vec<u64>> {
    fn rec(delta: &mut Vec<u64>, total: u64, max_len: usize, max_total: u64, out: &mut Vec<Vec<u64>>) {
        out.push(delta.clone());
        if delta.len() == max_len {
            return;
        }
        let t = delta.len() - 1;
        let last = *delta.last().unwrap();
        let cap = macaulay_growth(&big(last), t).unwrap().to_u64().unwrap();
        for next in 1..=cap.min(max_total - total) {
            delta.push(next);
            rec(delta, total + next, max_len, max_total, out);
            delta.pop();
        }
    }
    let mut out = vec![vec![1]];
    for first in 1..=max_first.min(max_total - 1) {
        rec(&mut vec![1, first], 1 + first, max_len, max_total, &mut out);
    }
    out.into_iter()
        .map(|delta| {
            delta
                .iter()
                .scan(0, |acc, x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let budget = CompletionBudget::default();
    let mut checked = 0;
    for d in [2usize, 3] {
        let n = (d * (d + 3) / 2) as u64;
        let cases = point_hilbert_functions(n, 5, 25);
        let bad: Vec<String> = cases
            .par_iter()
            .filter_map(|values| {
                let h = HilbertSequence::points(values);
                let accepted = decide_surface(&h, d).accepted;
                let found = match first_completion(&h, d, 2, &budget) {
                    Ok(c) => c.is_some(),
                    Err(e) => return Some(format!("{values:?}: {e}")),
                };
                (accepted != found)
                    .then(|| format!("d={d} {values:?}: criterion {accepted}, search {found}"))
            })
            .collect();
        ensure(bad.is_empty(), || bad[..bad.len().min(3)].join("; "))?;
        checked += cases.len();
    }
    Ok(format!("{checked} sequences, no disagreement"))
}

fn sharpness() -> Outcome {
    let mut checked = 0;
    for d in 1..=5 {
        for t in 0..=3 {
            let top = full_ramp_sum(d, t).to_u64().unwrap();
            for s in 0..=top {
                let w = extremal_window(d, t, &big(s)).map_err(|e| e.to_string())?;
                let brute = bruteforce_window_tail(d, t, &big(s), WindowSearchBounds::default())
                    .map_err(|e| e.to_string())?
                    .ok_or(format!("no window for d={d} t={t} s={s}"))?;
                let bound = if s == top {
                    big((d * (t + 1) + 1) as u64)
                } else {
                    max_window_tail(d, t, &big(s)).map_err(|e| e.to_string())?
                };
                ensure(
                    w.satisfies_invariants() && *w.last() == big(brute) && bound == big(brute),
                    || format!("d={d} t={t} s={s}: brute {brute}, bound {bound}, window {:?}", w.values),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} window sums"))
}

fn rational_points(rows: Vec<Vec<i64>>) -> PointSet {
    PointSet::new(
        rows.iter()
            .map(|r| ProjectivePoint::from_integers(r).unwrap())
            .collect(),
    )
    .unwrap()
}

fn rank_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut log = Vec::new();

    for _ in 0..10 {
        let d = rng.gen_range(1..=4);
        let s = rng.gen_range(1..=12);
        let mut params: Vec<i64> = (-30..=30).collect();
        params.shuffle(&mut rng);
        let set = rational_points(params[..s].iter().map(|&a| vec![1, a]).collect());
        let curve = embed_set(&set, d);
        for t in 0..=(s + 1) {
            let rank = hilbert_function_of_points(&curve, t);
            let closed = rnc_points_hf(d, s, t).unwrap();
            ensure(rank == closed, || format!("rnc d={d} s={s} t={t}: {rank} vs {closed}"))?;
        }
        log.push(format!("rnc({d},{s})"));
    }

    for _ in 0..10 {
        let d = rng.gen_range(1..=3);
        let e = rng.gen_range(1..=4);
        let t = rng.gen_range(0..=4);
        let degree = d * t;
        // degree + 1 points on each of e lines pin down forms of that degree
        let mut rows = Vec::new();
        for line in 0..e as i64 {
            for x in 0..=degree as i64 {
                rows.push(vec![1, x + 100 * line, (line + 1) * x + 7 * line * line + 3]);
            }
        }
        let curve = rational_points(rows);
        let rank = hilbert_function_of_points(&embed_set(&curve, d), t);
        let closed = divisor_hf(VeroneseParams::new(2, d).unwrap(), e, t).unwrap();
        ensure(rank == closed, || format!("divisor d={d} e={e} t={t}: {rank} vs {closed}"))?;
        log.push(format!("divisor({d},{e},{t})"));
    }

    for _ in 0..10 {
        let delta = random_plane_difference(&mut rng, 20);
        let set = staircase(&delta).map_err(|e| e.to_string())?;
        let h = delta.prefix_sums().unwrap();
        for t in 0..=delta.len() {
            let rank = hilbert_function_of_points(&set, t);
            let closed = h.value(t).cloned().unwrap_or_else(|| h.eventual_value().unwrap().clone());
            ensure(rank == closed, || format!("staircase {:?} t={t}", delta.values()))?;
        }
        log.push(format!("staircase({})", set.len()));
    }
    Ok(format!("{} instances", log.len()))
}

fn random_plane_difference(rng: &mut ChaCha8Rng, max_points: i64) -> DeltaSequence {
    loop {
        let ramp = rng.gen_range(1..=5);
        let mut values: Vec<i64> = (1..=ramp).collect();
        let mut total: i64 = values.iter().sum();
        let mut last = ramp;
        while rng.gen_bool(0.6) && last > 0 {
            let next = rng.gen_range(1..=last);
            if total + next > max_points {
                break;
            }
            values.push(next);
            total += next;
            last = next;
        }
        if total <= max_points {
            return DeltaSequence::new(values.into_iter().map(BigInt::from).collect(), DeltaTail::Zero);
        }
    }
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 rejected sequence fails at t = 9", Duration::from_secs(1), rejected_sequence),
        ("2 accepted sequence has a witness", Duration::from_secs(1), accepted_sequence),
        ("3 threefold gap table", Duration::from_secs(1), gap_table),
        ("4 inequality solutions", Duration::from_secs(10), inequality_scan),
        ("5 surface classification", Duration::from_secs(30), classification),
        ("6 criterion vs search", Duration::from_secs(300), oracle_equivalence),
        ("7 window sharpness", Duration::from_secs(120), sharpness),
        ("8 closed forms vs ranks", Duration::from_secs(60), rank_oracle),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > limit => ("FAIL", format!("took {elapsed:?}, limit {limit:?}")),
            Ok(msg) => ("PASS", msg),
            Err(msg) => ("FAIL", msg),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {name}: {status} ({:.2}s) {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
