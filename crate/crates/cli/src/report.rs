//! Plain-text layouts.

use std::fmt::Write;

use num_bigint::BigUint;
use veronese_core::ci::{Evidence, ScanRecord, ScanStatus};
use veronese_core::surface::{surface_hf, DecisionContext, FailedCondition, Verdict};
use veronese_core::{DeltaSequence, HilbertSequence};

/// Rows of right-aligned columns under a left-aligned label column.
pub fn grid(rows: &[(String, Vec<String>)]) -> String {
    let label_width = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let columns = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|j| {
            rows.iter()
                .filter_map(|(_, c)| c.get(j).map(String::len))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (label, cells) in rows {
        let pad = label_width - label.chars().count();
        let mut line = format!("{label}{} |", " ".repeat(pad));
        for (j, cell) in cells.iter().enumerate() {
            let _ = write!(line, " {cell:>w$}", w = widths[j]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn strings<T: ToString>(values: impl IntoIterator<Item = T>) -> Vec<String> {
    values.into_iter().map(|v| v.to_string()).collect()
}

/// `t | 0 1 2 ...` over `H | ...`.
pub fn sequence_table(label: &str, values: &[BigUint]) -> String {
    grid(&[
        ("t".into(), strings(0..values.len())),
        (label.into(), strings(values)),
    ])
}

fn ceil_div(a: &BigUint, d: usize) -> BigUint {
    (a + d - 1u32) / BigUint::from(d)
}

fn floor_div(a: &BigUint, d: usize) -> BigUint {
    a / BigUint::from(d)
}

/// The landmark block and the `Δh`, ceiling and floor rows through `t2 + 1`.
pub fn surface_report(h: &HilbertSequence, ctx: &DecisionContext, verdict: &Verdict) -> String {
    let d = ctx.d;
    let last = ctx.settled + 1;
    let ts: Vec<usize> = (0..=last).collect();
    let value = |t: usize| {
        h.value(t)
            .cloned()
            .unwrap_or_else(|| h.eventual_value().expect("constant tail").clone())
    };
    let delta: Vec<BigUint> = ts.iter().map(|&t| ctx.delta_at(t)).collect();
    let mut out = String::new();
    let _ = writeln!(out, "d = {d}, m = {}", ctx.m);
    out.push_str(&grid(&[
        ("t".into(), strings(&ts)),
        ("h".into(), strings(ts.iter().map(|&t| value(t)))),
        (format!("H_V(2,{d})"), strings(ts.iter().map(|&t| surface_hf(d, t)))),
        ("Δh".into(), strings(&delta)),
        (format!("ceil(Δh/{d})"), strings(delta.iter().map(|v| ceil_div(v, d)))),
        (format!("floor(Δh/{d})"), strings(delta.iter().map(|v| floor_div(v, d)))),
    ]));
    let _ = writeln!(out, "t1 = {}, t2 = {}", ctx.last_full, ctx.settled);
    if let (Some(mu1), Some(mu2)) = (&verdict.deficiency, &verdict.max_tail) {
        let s = ctx.delta_at(ctx.last_full + 1);
        let _ = writeln!(out, "mu1({d},{},{s}) = {mu1}", ctx.last_full);
        let _ = writeln!(out, "mu2({d},{},{s}) = {mu2}", ctx.last_full);
    }
    out
}

pub fn verdict_line(verdict: &Verdict, ctx: Option<&DecisionContext>) -> String {
    match (&verdict.failed_condition, ctx) {
        (None, _) => "verdict: realizable on the Veronese surface".into(),
        (Some(FailedCondition::CondI { max_tail, required }), _) => {
            format!("verdict: not realizable, condition (i) fails: mu2 = {max_tail} < {required}")
        }
        (Some(FailedCondition::CondII { t, floor, ceil }), Some(ctx)) => format!(
            "verdict: not realizable, condition (ii) fails at t = {t}: floor({}/{d}) = {floor} < {ceil} = ceil({}/{d})",
            ctx.delta_at(*t),
            ctx.delta_at(t + 1),
            d = ctx.d
        ),
        (Some(FailedCondition::CondII { t, floor, ceil }), None) => {
            format!("verdict: not realizable, condition (ii) fails at t = {t}: {floor} < {ceil}")
        }
        (Some(FailedCondition::NotPointHF { reason }), _) => {
            format!("verdict: not a Hilbert function of points on the surface ({reason})")
        }
    }
}

pub fn delta_line(label: &str, delta: &DeltaSequence) -> String {
    let values: Vec<String> = strings(delta.values());
    format!("{label}: {}\n", values.join(" "))
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::None => String::new(),
        Evidence::Inequality { lhs, rhs } => format!("{lhs} < {rhs}"),
        Evidence::Condition { failed } => match failed {
            FailedCondition::CondI { max_tail, required } => format!("(i) mu2 = {max_tail} < {required}"),
            FailedCondition::CondII { t, floor, ceil } => format!("(ii) t = {t}: {floor} < {ceil}"),
            FailedCondition::NotPointHF { reason } => reason.clone(),
        },
        Evidence::Completions { count, points, .. } => {
            format!("{count} completion(s), all with k(1) = 2, {points} points")
        }
        Evidence::Extension { cut, status } => format!("cut {cut}: {status}"),
        Evidence::Gap { p, gap } => format!("p = {p}, M - m = {gap}"),
    }
}

fn status_text(s: &ScanStatus) -> String {
    match s {
        ScanStatus::Admitted { case } => format!("admitted ({case})"),
        other => other.name().to_string(),
    }
}

pub fn scan_table(records: &[ScanRecord]) -> String {
    let mut out = String::new();
    let type_width = records
        .iter()
        .map(|r| r.ci_type.to_string().len())
        .max()
        .unwrap_or(4)
        .max(4);
    let status_width = records
        .iter()
        .map(|r| status_text(&r.status).len())
        .max()
        .unwrap_or(6)
        .max(6);
    let _ = writeln!(out, "d | {:type_width$} | {:status_width$} | evidence", "type", "status");
    for r in records {
        let line = format!(
            "{} | {:type_width$} | {:status_width$} | {}",
            r.d,
            r.ci_type.to_string(),
            status_text(&r.status),
            evidence_text(&r.evidence)
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn scan_summary(records: &[ScanRecord]) -> String {
    let mut counts: Vec<(&'static str, usize)> = Vec::new();
    for r in records {
        let name = r.status.name();
        match counts.iter_mut().find(|(n, _)| *n == name) {
            Some((_, c)) => *c += 1,
            None => counts.push((name, 1)),
        }
    }
    let mut out = format!("{} types\n", records.len());
    for (name, c) in counts {
        let _ = writeln!(out, "  {name}: {c}");
    }
    let admitted: Vec<String> = records
        .iter()
        .filter(|r| r.status.is_admitted())
        .map(|r| r.ci_type.to_string())
        .collect();
    let _ = writeln!(out, "admitted: {}", admitted.join(" "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_aligns_right() {
        let g = grid(&[
            ("t".into(), vec!["0".into(), "1".into()]),
            ("long".into(), vec!["10".into(), "2".into()]),
        ]);
        assert_eq!(g, "t    |  0 1\nlong | 10 2\n");
    }
}
