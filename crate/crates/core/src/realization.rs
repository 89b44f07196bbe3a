//! Explicit point sets and their Hilbert functions as exact ranks.
//!
//! A plane difference `Δ` is realized by the staircase of integer grid
//! points `(t - j, j)`, `0 <= j < Δ(t)`. Every realization is re-verified by
//! computing ranks of evaluation matrices, so nothing about the staircase is
//! taken on faith.

use std::collections::HashSet;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format;
use crate::linalg;
use crate::macaulay::binom;
use crate::sequences::{is_valid_p2_points_difference, DeltaSequence, HilbertSequence};
use crate::surface::decide_surface;

/// Default ceiling on the size (rows times distinct columns) of an
/// evaluation matrix during verification.
pub const DEFAULT_MAX_ENTRIES: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    coords: Vec<BigRational>,
}

impl ProjectivePoint {
    /// Scales so that the last nonzero coordinate is 1.
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        let Some(last) = coords.iter().rev().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::invalid("a projective point needs a nonzero coordinate"));
        };
        Ok(Self {
            coords: coords.into_iter().map(|c| c / &last).collect(),
        })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// The same point with integer coordinates (denominators cleared).
    fn integer_coords(&self) -> Vec<BigInt> {
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect()
    }
}

/// Finitely many distinct points of `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ambient_dim: usize,
    points: Vec<ProjectivePoint>,
}

impl PointSet {
    pub fn new(points: Vec<ProjectivePoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("a point set needs at least one point"));
        };
        let ambient_dim = first.dim();
        if points.iter().any(|p| p.dim() != ambient_dim) {
            return Err(Error::invalid("points live in different projective spaces"));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::invalid("repeated point in a reduced point set"));
            }
        }
        Ok(Self {
            ambient_dim,
            points,
        })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(ProjectivePoint::new)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_rows(format::parse_point_rows(text)?)
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<BigRational>> = self.points.iter().map(|p| p.coords.clone()).collect();
        format::point_rows_to_json(&rows)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All degree-`deg` monomials in `coords`, descending lexicographic order
/// of exponents (`x0^deg` first).
fn monomials<T>(coords: &[T], one: T, deg: usize) -> Vec<T>
where
    T: Clone,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let vars = coords.len();
    // table[k] holds the degree-k monomials in the variables from the
    // current one onwards
    let mut table: Vec<Vec<T>> = (0..=deg)
        .map(|k| {
            if k == 0 {
                vec![one.clone()]
            } else {
                Vec::new()
            }
        })
        .collect();
    for s in (0..vars).rev() {
        let mut next: Vec<Vec<T>> = vec![vec![one.clone()]];
        for k in 1..=deg {
            let mut row: Vec<T> = next[k - 1].iter().map(|m| &coords[s] * m).collect();
            row.extend(table[k].iter().cloned());
            next.push(row);
        }
        table = next;
    }
    std::mem::take(&mut table[deg])
}

pub fn veronese_embed(point: &ProjectivePoint, d: usize) -> ProjectivePoint {
    let coords = monomials(&point.coords, BigRational::one(), d);
    ProjectivePoint::new(coords).expect("a power of the last nonzero coordinate survives")
}

pub fn embed_set(set: &PointSet, d: usize) -> PointSet {
    PointSet::new(set.points.iter().map(|p| veronese_embed(p, d)).collect())
        .expect("the Veronese map is injective")
}

/// Rows of the degree-`t` evaluation matrix, identical columns merged.
fn evaluation_rows(set: &PointSet, t: usize) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = set
        .points
        .iter()
        .map(|p| monomials(&p.integer_coords(), BigInt::one(), t))
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut seen: HashSet<Vec<&BigInt>> = HashSet::new();
    let keep: Vec<usize> = (0..width)
        .filter(|&j| seen.insert(rows.iter().map(|r| &r[j]).collect()))
        .collect();
    rows.iter()
        .map(|r| keep.iter().map(|&j| r[j].clone()).collect())
        .collect()
}

/// `H_X(t)`: the rank of the degree-`t` evaluation matrix of `X`.
pub fn hilbert_function_of_points(set: &PointSet, t: usize) -> BigUint {
    BigUint::from(linalg::rank(&evaluation_rows(set, t)))
}

/// Upper bound on rows times distinct columns of the degree-`t`
/// evaluation matrix, for points of `P^n` that are images of points of
/// `P^source` under the degree-`d` embedding.
fn matrix_size(points: usize, n: usize, t: usize, source: Option<(usize, usize)>) -> usize {
    let mut cols = binom(BigUint::from(n + t), t);
    if let Some((m, d)) = source {
        cols = cols.min(binom(BigUint::from(m + d * t), m));
    }
    (cols * points).to_usize().unwrap_or(usize::MAX)
}

/// The staircase points `(a : b : 1)` with `(a, b)` under the diagram of `Δ`.
pub fn staircase(delta: &DeltaSequence) -> Result<PointSet> {
    if !is_valid_p2_points_difference(delta) {
        return Err(Error::invalid(
            "not the first difference of a point set in the plane",
        ));
    }
    let counts = delta
        .values()
        .iter()
        .map(|v| v.to_usize())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::invalid("difference values too large to realize"))?;
    let mut cells = HashSet::new();
    let mut points = Vec::new();
    for (t, &count) in counts.iter().enumerate() {
        for j in 0..count {
            let (a, b) = (t - j, j);
            cells.insert((a, b));
            points.push(
                ProjectivePoint::new(vec![
                    BigRational::from_integer(a.into()),
                    BigRational::from_integer(b.into()),
                    BigRational::one(),
                ])
                .expect("last coordinate is 1"),
            );
        }
    }
    let closed = cells
        .iter()
        .all(|&(a, b)| (a == 0 || cells.contains(&(a - 1, b))) && (b == 0 || cells.contains(&(a, b - 1))));
    assert!(closed, "staircase diagram is not downward closed");
    PointSet::new(points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realization {
    #[serde(skip)]
    pub points: PointSet,
    /// Degrees `0..=verified_through` whose Hilbert function was recomputed.
    pub verified_through: usize,
    /// Whether that covers every degree where the difference is nonzero.
    pub complete: bool,
}

/// Staircase realization of `Δ`, with `ΔH` recomputed by rank in every
/// degree whose evaluation matrix has at most `max_entries` entries.
pub fn realize_delta_in_p2_with(delta: &DeltaSequence, max_entries: usize) -> Result<Realization> {
    let points = staircase(delta)?;
    let needed = delta.len();
    let mut verified_through = 0;
    let mut prev = BigUint::zero();
    for t in 0..=needed {
        if t > 0 && matrix_size(points.len(), 2, t, None) > max_entries {
            break;
        }
        let value = hilbert_function_of_points(&points, t);
        let expected = delta.value(t).cloned().unwrap_or_default();
        if BigInt::from(value.clone()) - BigInt::from(prev) != expected {
            return Err(Error::invalid(format!(
                "staircase realization has the wrong Hilbert function in degree {t}"
            )));
        }
        prev = value;
        verified_through = t;
    }
    Ok(Realization {
        points,
        verified_through,
        complete: verified_through >= needed,
    })
}

pub fn realize_delta_in_p2(delta: &DeltaSequence) -> Result<PointSet> {
    Ok(realize_delta_in_p2_with(delta, DEFAULT_MAX_ENTRIES)?.points)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub d: usize,
    /// `(t, rank, h(t))` for each verified degree.
    pub degrees: Vec<(usize, String, String)>,
    pub verified_through: usize,
    /// Last degree the full check would need (`t2 + 1`).
    pub requested_through: usize,
    pub matches: bool,
    pub preimage_verified_through: usize,
    #[serde(skip)]
    pub embedded: PointSet,
}

impl RoundTrip {
    pub fn complete(&self) -> bool {
        self.verified_through >= self.requested_through
    }
}

/// Accept, build the witness, realize it in the plane, embed by the
/// degree-`d` Veronese map, and compare ranks with `h`.
pub fn roundtrip_check_with(h: &HilbertSequence, d: usize, max_entries: usize) -> Result<RoundTrip> {
    let verdict = decide_surface(h, d);
    let Some(witness) = verdict.witness else {
        return Err(Error::invalid("the surface criterion rejects this sequence"));
    };
    let preimage = realize_delta_in_p2_with(&witness, max_entries)?;
    let embedded = embed_set(&preimage.points, d);
    let t2 = verdict.settled.expect("accepted verdicts carry landmarks");
    let requested_through = t2 + 1;
    let n = embedded.ambient_dim();
    let mut degrees = Vec::new();
    let mut matches = true;
    let mut verified_through = 0;
    for t in 0..=requested_through {
        if t > 0 && matrix_size(embedded.len(), n, t, Some((2, d))) > max_entries {
            break;
        }
        let rank = hilbert_function_of_points(&embedded, t);
        let expected = h.value(t).expect("constant tail").clone();
        matches &= rank == expected;
        degrees.push((t, rank.to_string(), expected.to_string()));
        verified_through = t;
    }
    Ok(RoundTrip {
        d,
        degrees,
        verified_through,
        requested_through,
        matches,
        preimage_verified_through: preimage.verified_through,
        embedded,
    })
}

pub fn roundtrip_check(h: &HilbertSequence, d: usize) -> Result<RoundTrip> {
    roundtrip_check_with(h, d, DEFAULT_MAX_ENTRIES)
}
