//! Perpendicular bisectors, reflections, and extraction of a
//! reflection-symmetric subset from the heaviest bisector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{FrameCoords, IntegerFrame, PlanarPointSet, Point};
use crate::scalar::ExactScalar;

/// The line `a·x + b·y + c = 0` in its unique integer form: `gcd(a, b, c) = 1`
/// and the first nonzero of `(a, b)` is positive. Ordering is lexicographic
/// on `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLine {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl CanonicalLine {
    /// Normalizes integer coefficients. `None` if `a = b = 0`.
    pub fn from_integers(a: BigInt, b: BigInt, c: BigInt) -> Option<Self> {
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        if a.is_negative() || (a.is_zero() && b.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        Some(CanonicalLine { a, b, c })
    }

    /// Normalizes rational coefficients of any nonzero multiple of the line
    /// equation.
    pub fn from_coefficients(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar) -> Option<Self> {
        let l = a.denom().lcm(b.denom()).lcm(c.denom());
        let clear = |v: &ExactScalar| v.numer() * (&l / v.denom());
        Self::from_integers(clear(a), clear(b), clear(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// `a·x + b·y + c` at `p`.
    pub fn evaluate(&self, p: &Point) -> ExactScalar {
        let a = ExactScalar::from(self.a.clone());
        let b = ExactScalar::from(self.b.clone());
        let c = ExactScalar::from(self.c.clone());
        &(&(&a * &p.x) + &(&b * &p.y)) + &c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.evaluate(p).is_zero()
    }

    fn from_small(a: i64, b: i64, c: i64) -> Self {
        CanonicalLine {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }
}

impl fmt::Display for CanonicalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

impl Serialize for CanonicalLine {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        let parts: Vec<BigInt> = s
            .split_whitespace()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        match <[BigInt; 3]>::try_from(parts) {
            Ok([a, b, c]) => CanonicalLine::from_integers(a, b, c)
                .ok_or_else(|| D::Error::custom("a and b are both zero")),
            Err(_) => Err(D::Error::custom("expected three integers `a b c`")),
        }
    }
}

/// `B(p, q)`: the locus `|x − p| = |x − q|`, i.e. `2(q − p)·x = |q|² − |p|²`.
pub fn perpendicular_bisector(p: &Point, q: &Point) -> Result<CanonicalLine> {
    if p == q {
        return Err(Error::DegeneratePair);
    }
    let two = ExactScalar::from(2);
    let a = &two * &(&q.x - &p.x);
    let b = &two * &(&q.y - &p.y);
    let c = &p.squared_norm() - &q.squared_norm();
    Ok(CanonicalLine::from_coefficients(&a, &b, &c).expect("p != q"))
}

/// Reflection in a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionMap {
    pub axis: CanonicalLine,
}

impl ReflectionMap {
    pub fn new(axis: CanonicalLine) -> Self {
        ReflectionMap { axis }
    }

    pub fn apply(&self, p: &Point) -> Point {
        reflect_point(&self.axis, p)
    }
}

/// `p − 2(a·pₓ + b·p_y + c)/(a² + b²) · (a, b)`.
pub fn reflect_point(axis: &CanonicalLine, p: &Point) -> Point {
    let value = axis.evaluate(p);
    if value.is_zero() {
        return p.clone();
    }
    let norm = ExactScalar::from(&axis.a * &axis.a + &axis.b * &axis.b);
    let k = ExactScalar::new(
        (value.numer() * 2u32).clone(),
        value.denom() * norm.numer(),
    )
    .expect("nonzero normal");
    Point::new(
        &p.x - &(&k * &ExactScalar::from(axis.a.clone())),
        &p.y - &(&k * &ExactScalar::from(axis.b.clone())),
    )
}

/// The multiset of perpendicular bisectors of ordered pairs of distinct
/// points, as line → weight. Entries are sorted by line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedBisectorMap {
    entries: Vec<(CanonicalLine, u64)>,
    total_weight: u64,
    max_weight: u64,
    n_points: usize,
}

impl WeightedBisectorMap {
    fn from_sorted(entries: Vec<(CanonicalLine, u64)>, n_points: usize) -> Self {
        let total_weight = entries.iter().map(|e| e.1).sum();
        let max_weight = entries.iter().map(|e| e.1).max().unwrap_or(0);
        WeightedBisectorMap {
            entries,
            total_weight,
            max_weight,
            n_points,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `W_L`: the sum of all weights.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    /// `w_L`: the largest weight.
    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn entries(&self) -> &[(CanonicalLine, u64)] {
        &self.entries
    }

    pub fn weight(&self, line: &CanonicalLine) -> u64 {
        self.entries
            .binary_search_by(|(l, _)| l.cmp(line))
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }
}

fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn small_bisector(p: (i64, i64), q: (i64, i64)) -> (i64, i64, i64) {
    // |coords| ≤ 2^29 keeps every term below 2^62.
    let mut a = 2 * (q.0 - p.0);
    let mut b = 2 * (q.1 - p.1);
    let mut c = p.0 * p.0 + p.1 * p.1 - q.0 * q.0 - q.1 * q.1;
    let g = gcd_i64(gcd_i64(a, b), c);
    a /= g;
    b /= g;
    c /= g;
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b, -c)
    } else {
        (a, b, c)
    }
}

fn group_sorted<T: PartialEq>(sorted: Vec<T>) -> Vec<(T, u64)> {
    let mut out: Vec<(T, u64)> = Vec::new();
    for l in sorted {
        match out.last_mut() {
            Some((last, w)) if *last == l => *w += 2,
            _ => out.push((l, 2)),
        }
    }
    out
}

/// Builds `l ↦ w(l)` over all ordered pairs of distinct points.
pub fn bisector_weight_map(p: &PlanarPointSet) -> Result<WeightedBisectorMap> {
    let n = p.len();
    if n < 2 {
        return Err(Error::TooFewPoints { op: "bisector_weight_map", need: 2, got: n });
    }
    let frame = IntegerFrame::new(p);
    // Lines are grouped in frame coordinates (where every point is scaled by
    // `frame.scale`), then mapped back: a·X + b·Y + c = 0 with X = s·x is the
    // original line (a·s, b·s, c).
    let frame_entries: Vec<(CanonicalLine, u64)> = match &frame.coords {
        FrameCoords::Small(v) => {
            let mut lines: Vec<(i64, i64, i64)> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| v[i + 1..].iter().map(move |&q| small_bisector(v[i], q)))
                .collect();
            lines.par_sort_unstable();
            group_sorted(lines)
                .into_par_iter()
                .map(|((a, b, c), w)| (CanonicalLine::from_small(a, b, c), w))
                .collect()
        }
        FrameCoords::Big(v) => {
            let mut lines: Vec<CanonicalLine> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let (px, py) = &v[i];
                    v[i + 1..].iter().map(move |(qx, qy)| {
                        let a = (qx - px) * 2;
                        let b = (qy - py) * 2;
                        let c = px * px + py * py - qx * qx - qy * qy;
                        CanonicalLine::from_integers(a, b, c).expect("distinct points")
                    })
                })
                .collect();
            lines.par_sort_unstable();
            group_sorted(lines)
        }
    };
    let entries = if frame.scale == BigInt::from(1) {
        frame_entries
    } else {
        let s = &frame.scale;
        let mut e: Vec<(CanonicalLine, u64)> = frame_entries
            .into_par_iter()
            .map(|(l, w)| {
                let line = CanonicalLine::from_integers(&l.a * s, &l.b * s, l.c)
                    .expect("scaling keeps (a, b) nonzero");
                (line, w)
            })
            .collect();
        e.par_sort_unstable();
        e
    };
    Ok(WeightedBisectorMap::from_sorted(entries, n))
}

/// A line attaining `w_L`; ties go to the lexicographically smallest
/// `(a, b, c)`.
pub fn heaviest_bisector(map: &WeightedBisectorMap) -> Result<(CanonicalLine, u64)> {
    map.entries
        .iter()
        .find(|(_, w)| *w == map.max_weight)
        .cloned()
        .ok_or(Error::EmptyMap)
}

/// Points `p_i` whose mirror images `q_i = ℛ(p_i)` all lie in the ambient set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricSubset {
    pub axis: CanonicalLine,
    pub subset: PlanarPointSet,
    pub mirror: PlanarPointSet,
    pub weight: u64,
}

impl SymmetricSubset {
    /// `(p_i, ℛ(p_i))` in the order of `subset`.
    pub fn pairs(&self) -> Vec<(Point, Point)> {
        self.subset
            .iter()
            .map(|p| (p.clone(), reflect_point(&self.axis, p)))
            .collect()
    }
}

/// Points of `p` moved by the reflection in `axis` onto other points of `p`.
pub fn mirrored_points(p: &PlanarPointSet, axis: &CanonicalLine) -> Vec<Point> {
    p.points()
        .par_iter()
        .filter(|q| {
            let r = reflect_point(axis, q);
            r != **q && p.contains(&r)
        })
        .cloned()
        .collect()
}

pub fn extract_symmetric_subset(
    p: &PlanarPointSet,
    include_fixed_points: bool,
) -> Result<SymmetricSubset> {
    let map = bisector_weight_map(p)?;
    extract_symmetric_subset_from_map(p, &map, include_fixed_points)
}

/// As [`extract_symmetric_subset`], reusing an already built bisector map.
pub fn extract_symmetric_subset_from_map(
    p: &PlanarPointSet,
    map: &WeightedBisectorMap,
    include_fixed_points: bool,
) -> Result<SymmetricSubset> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints { op: "extract_symmetric_subset", need: 2, got: p.len() });
    }
    let expected = (p.len() * (p.len() - 1)) as u64;
    if map.n_points != p.len() || map.total_weight != expected {
        return Err(Error::MismatchedInputs { got: map.total_weight, expected });
    }
    let (axis, weight) = heaviest_bisector(map)?;
    let mut subset = mirrored_points(p, &axis);
    if subset.len() as u64 != weight {
        return Err(Error::Invariant(format!(
            "axis {axis} has weight {weight} but moves {} points onto the set",
            subset.len()
        )));
    }
    if include_fixed_points {
        subset.extend(p.iter().filter(|q| axis.contains(q)).cloned());
    }
    let mirror: Vec<Point> = subset.iter().map(|q| reflect_point(&axis, q)).collect();
    if let Some(bad) = mirror.iter().find(|q| !p.contains(q)) {
        return Err(Error::Invariant(format!("reflected point {bad} is not in the set")));
    }
    Ok(SymmetricSubset {
        axis,
        subset: PlanarPointSet::from_points(subset),
        mirror: PlanarPointSet::from_points(mirror),
        weight,
    })
}
