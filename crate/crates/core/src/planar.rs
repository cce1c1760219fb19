//! Exact planar point sets and the distance functionals on them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::sets::{self, FiniteScalarSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: ExactScalar,
    pub y: ExactScalar,
}

impl Point {
    pub fn new(x: ExactScalar, y: ExactScalar) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(x.into(), y.into())
    }

    pub fn squared_distance(&self, other: &Point) -> ExactScalar {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        dx.square() + dy.square()
    }

    pub fn squared_norm(&self) -> ExactScalar {
        self.x.square() + self.y.square()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// Lexicographically sorted, deduplicated planar point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlanarPointSet {
    points: Vec<Point>,
}

impl PlanarPointSet {
    pub fn from_points<I: IntoIterator<Item = Point>>(items: I) -> Self {
        let mut points: Vec<Point> = items.into_iter().collect();
        points.par_sort_unstable();
        points.dedup();
        PlanarPointSet { points }
    }

    pub fn from_int_pairs<I: IntoIterator<Item = (i64, i64)>>(items: I) -> Self {
        Self::from_points(items.into_iter().map(|(x, y)| Point::from_ints(x, y)))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    pub(crate) fn require_nonempty(&self, op: &'static str) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptyInput(op))
        } else {
            Ok(())
        }
    }
}

impl<'a> IntoIterator for &'a PlanarPointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl FromIterator<Point> for PlanarPointSet {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        PlanarPointSet::from_points(iter)
    }
}

/// Coordinates cleared of denominators: every point is multiplied by the
/// common `scale`, so all coordinates become integers. Squared distances are
/// scaled by `scale²` and bisector lines map bijectively, so every
/// coincidence predicate is unchanged.
pub(crate) struct IntegerFrame {
    pub scale: BigInt,
    pub coords: FrameCoords,
}

pub(crate) enum FrameCoords {
    /// All scaled coordinates satisfy `|c| ≤ SMALL_COORD`, so squared
    /// distances and bisector coefficients fit in `i64`.
    Small(Vec<(i64, i64)>),
    Big(Vec<(BigInt, BigInt)>),
}

pub(crate) const SMALL_COORD: i64 = 1 << 29;

impl IntegerFrame {
    pub fn new(p: &PlanarPointSet) -> Self {
        let scale = p.iter().fold(BigInt::one(), |acc, q| {
            acc.lcm(q.x.denom()).lcm(q.y.denom())
        });
        let scaled = |v: &ExactScalar| v.numer() * (&scale / v.denom());
        let big: Vec<(BigInt, BigInt)> = p.iter().map(|q| (scaled(&q.x), scaled(&q.y))).collect();
        let small: Option<Vec<(i64, i64)>> = big
            .iter()
            .map(|(x, y)| {
                let x = x.to_i64().filter(|v| v.abs() <= SMALL_COORD)?;
                let y = y.to_i64().filter(|v| v.abs() <= SMALL_COORD)?;
                Some((x, y))
            })
            .collect();
        let coords = match small {
            Some(s) => FrameCoords::Small(s),
            None => FrameCoords::Big(big),
        };
        IntegerFrame { scale, coords }
    }

    /// Converts a squared distance in frame units back to the original units.
    pub fn unscale_squared(&self, d: BigInt) -> ExactScalar {
        ExactScalar::new(d, &self.scale * &self.scale).expect("scale is nonzero")
    }

    /// Multiplicities `m(s, r)` for the center with index `i`, ordered by
    /// increasing squared radius, paired with the radii in frame units.
    pub fn center_counts(&self, i: usize) -> Vec<(BigInt, u64)> {
        match &self.coords {
            FrameCoords::Small(v) => run_lengths(small_center_distances(v, i))
                .into_iter()
                .map(|(d, m)| (BigInt::from(d), m))
                .collect(),
            FrameCoords::Big(v) => {
                let (sx, sy) = &v[i];
                let mut d: Vec<BigInt> = v
                    .iter()
                    .map(|(x, y)| {
                        let dx = x - sx;
                        let dy = y - sy;
                        &dx * &dx + &dy * &dy
                    })
                    .collect();
                d.sort_unstable();
                run_lengths(d)
            }
        }
    }

    /// Only the multiplicities for center `i`.
    pub fn center_multiplicities(&self, i: usize) -> Vec<u64> {
        match &self.coords {
            FrameCoords::Small(v) => run_lengths(small_center_distances(v, i))
                .into_iter()
                .map(|(_, m)| m)
                .collect(),
            FrameCoords::Big(_) => self.center_counts(i).into_iter().map(|(_, m)| m).collect(),
        }
    }
}

fn small_center_distances(v: &[(i64, i64)], i: usize) -> Vec<i64> {
    let (sx, sy) = v[i];
    let mut d: Vec<i64> = v
        .iter()
        .map(|&(x, y)| {
            let dx = x - sx;
            let dy = y - sy;
            dx * dx + dy * dy
        })
        .collect();
    d.sort_unstable();
    d
}

fn run_lengths<T: PartialEq>(sorted: Vec<T>) -> Vec<(T, u64)> {
    let mut out: Vec<(T, u64)> = Vec::new();
    for d in sorted {
        match out.last_mut() {
            Some((last, m)) if *last == d => *m += 1,
            _ => out.push((d, 1)),
        }
    }
    out
}

/// `A × A`.
pub fn cartesian_square(a: &FiniteScalarSet) -> Result<PlanarPointSet> {
    if a.is_empty() {
        return Err(Error::EmptyInput("cartesian_square"));
    }
    // Lexicographic order of the product is already the row-major order.
    let points = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| Point::new(x.clone(), y.clone())))
        .collect();
    Ok(PlanarPointSet { points })
}

/// Squared distances determined by a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceSet {
    pub squared_distances: FiniteScalarSet,
    pub includes_zero: bool,
}

impl DistanceSet {
    pub fn len(&self) -> usize {
        self.squared_distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squared_distances.is_empty()
    }
}

/// `{|p − q|² : p, q ∈ P}`; the `p = q` distance is kept iff `include_zero`.
pub fn squared_distance_set(p: &PlanarPointSet, include_zero: bool) -> Result<DistanceSet> {
    p.require_nonempty("squared_distance_set")?;
    let frame = IntegerFrame::new(p);
    let n = p.len();
    let squared_distances = match &frame.coords {
        FrameCoords::Small(v) => {
            let mut d: Vec<i64> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let (px, py) = v[i];
                    v[i + 1..].iter().map(move |&(x, y)| {
                        let dx = x - px;
                        let dy = y - py;
                        dx * dx + dy * dy
                    })
                })
                .collect();
            if include_zero {
                d.push(0);
            }
            d.par_sort_unstable();
            d.dedup();
            if frame.scale.is_one() {
                FiniteScalarSet::from_integers(d)
            } else {
                FiniteScalarSet::from_elements(
                    d.into_iter().map(|x| frame.unscale_squared(BigInt::from(x))),
                )
            }
        }
        FrameCoords::Big(_) => {
            let pts = p.points();
            let mut d: Vec<ExactScalar> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| pts[i + 1..].iter().map(move |q| pts[i].squared_distance(q)))
                .collect();
            if include_zero {
                d.push(ExactScalar::zero());
            }
            FiniteScalarSet::from_elements(d)
        }
    };
    Ok(DistanceSet {
        squared_distances,
        includes_zero: include_zero,
    })
}

/// Result of comparing `d(A × A)` with `D² + D²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductIdentity {
    pub holds: bool,
    pub distance_side: FiniteScalarSet,
    pub sumset_side: FiniteScalarSet,
}

/// Computes both sides of `d(A × A) = D² + D²` (with `D = A − A`, distances
/// squared, zero included) by independent pipelines.
pub fn verify_product_identity(a: &FiniteScalarSet) -> Result<ProductIdentity> {
    let grid = cartesian_square(a)?;
    let distance_side = squared_distance_set(&grid, true)?.squared_distances;
    let d2 = sets::elementwise_square(&sets::difference_set(a)?)?;
    let sumset_side = sets::iterated_combination(2, 0, &d2)?;
    Ok(ProductIdentity {
        holds: distance_side == sumset_side,
        distance_side,
        sumset_side,
    })
}

/// Circle occupancy counts around one center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterMultiplicities {
    pub center: Point,
    /// `(r², m(s, r))` in increasing order of `r²`; includes `r = 0`.
    pub counts: Vec<(ExactScalar, u64)>,
}

/// `m(s, r) = |C(s, r) ∩ P|` for every center `s ∈ P`, in center order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusMultiplicityMap {
    pub centers: Vec<CenterMultiplicities>,
}

impl RadiusMultiplicityMap {
    pub fn get(&self, center: &Point) -> Option<&CenterMultiplicities> {
        self.centers
            .binary_search_by(|c| c.center.cmp(center))
            .ok()
            .map(|i| &self.centers[i])
    }

    pub fn total(&self) -> u64 {
        self.centers.iter().flat_map(|c| c.counts.iter().map(|(_, m)| m)).sum()
    }
}

pub fn radius_multiplicity_map(p: &PlanarPointSet) -> Result<RadiusMultiplicityMap> {
    p.require_nonempty("radius_multiplicity_map")?;
    let frame = IntegerFrame::new(p);
    let centers = (0..p.len())
        .into_par_iter()
        .map(|i| CenterMultiplicities {
            center: p.points()[i].clone(),
            counts: frame
                .center_counts(i)
                .into_iter()
                .map(|(d, m)| (frame.unscale_squared(d), m))
                .collect(),
        })
        .collect();
    Ok(RadiusMultiplicityMap { centers })
}
