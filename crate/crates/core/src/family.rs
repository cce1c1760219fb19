//! Seeded input families: progressions, low-doubling sets, random sets and
//! point sets, grids.

use std::collections::BTreeSet;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{cartesian_square, PlanarPointSet, Point};
use crate::scalar::ExactScalar;
use crate::sets::FiniteScalarSet;

/// Description of one family member. Random kinds are pure functions of
/// their seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `{start + i·step : 0 ≤ i < n}`.
    Ap { n: usize, start: i64, step: i64 },
    /// `{i·d1 + j·d2 : 0 ≤ i < n1, 0 ≤ j < n2}`.
    Gap2 { n1: usize, n2: usize, d1: i64, d2: i64 },
    /// `{start·ratio^i : 0 ≤ i < n}`.
    Geometric { n: usize, start: i64, ratio: i64 },
    /// `n` distinct integers drawn uniformly from `[−range, range]`.
    RandomInt { n: usize, range: i64, seed: u64 },
    /// `{0, …, n − 1}²`.
    Grid { n: usize },
    /// `A × A` for a scalar family `A`.
    CartesianOf { inner: Box<FamilySpec> },
    /// `n` distinct points with coordinates `k/q`, `|k| ≤ range`,
    /// `1 ≤ q ≤ max_denominator`.
    RandomPoints { n: usize, range: i64, max_denominator: u64, seed: u64 },
}

/// A generated family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Scalars(FiniteScalarSet),
    Points(PlanarPointSet),
}

impl Family {
    pub fn len(&self) -> usize {
        match self {
            Family::Scalars(s) => s.len(),
            Family::Points(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn into_scalars(self) -> Option<FiniteScalarSet> {
        match self {
            Family::Scalars(s) => Some(s),
            Family::Points(_) => None,
        }
    }

    /// Point families as-is; scalar families as `A × A`.
    pub fn into_points(self) -> Result<PlanarPointSet> {
        match self {
            Family::Scalars(s) => cartesian_square(&s),
            Family::Points(p) => Ok(p),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

impl FamilySpec {
    pub fn ap(n: usize) -> Self {
        FamilySpec::Ap { n, start: 0, step: 1 }
    }

    pub fn grid(n: usize) -> Self {
        FamilySpec::Grid { n }
    }

    /// The same family with its size parameter replaced by `n` (both sides
    /// for two-dimensional progressions).
    pub fn with_size(&self, n: usize) -> Self {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::Ap { n: m, .. }
            | FamilySpec::Geometric { n: m, .. }
            | FamilySpec::RandomInt { n: m, .. }
            | FamilySpec::Grid { n: m }
            | FamilySpec::RandomPoints { n: m, .. } => *m = n,
            FamilySpec::Gap2 { n1, n2, .. } => {
                *n1 = n;
                *n2 = n;
            }
            FamilySpec::CartesianOf { inner } => **inner = inner.with_size(n),
        }
        s
    }

    /// The same family with its seed replaced, for random kinds.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut s = self.clone();
        match &mut s {
            FamilySpec::RandomInt { seed: t, .. } | FamilySpec::RandomPoints { seed: t, .. } => *t = seed,
            FamilySpec::CartesianOf { inner } => **inner = inner.with_seed(seed),
            _ => {}
        }
        s
    }

    pub fn is_planar(&self) -> bool {
        matches!(
            self,
            FamilySpec::Grid { .. } | FamilySpec::CartesianOf { .. } | FamilySpec::RandomPoints { .. }
        )
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Ap { n, start, step } => write!(f, "ap(n={n},start={start},step={step})"),
            FamilySpec::Gap2 { n1, n2, d1, d2 } => write!(f, "gap2(n1={n1},n2={n2},d1={d1},d2={d2})"),
            FamilySpec::Geometric { n, start, ratio } => {
                write!(f, "geometric(n={n},start={start},ratio={ratio})")
            }
            FamilySpec::RandomInt { n, range, seed } => write!(f, "random_int(n={n},range={range},seed={seed})"),
            FamilySpec::Grid { n } => write!(f, "grid(n={n})"),
            FamilySpec::CartesianOf { inner } => write!(f, "cartesian_of({inner})"),
            FamilySpec::RandomPoints { n, range, max_denominator, seed } => write!(
                f,
                "random_points(n={n},range={range},max_denominator={max_denominator},seed={seed})"
            ),
        }
    }
}

/// Parses the descriptor syntax printed by `Display`, e.g. `ap(n=5)`,
/// `random_int(n=10,range=50,seed=3)`, `cartesian_of(ap(n=4,step=2))`.
/// Omitted keys take defaults: `n=1`, `start=0`, `step=1`, `d1=1`, `d2=n1`,
/// `ratio=2`, `start=1` for geometric, `range=100` (10 for points),
/// `max_denominator=1`, `seed=0`.
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, body) = match s.find('(') {
            Some(i) if s.ends_with(')') => (s[..i].trim(), &s[i + 1..s.len() - 1]),
            None => (s, ""),
            _ => return Err(invalid(format!("malformed family `{s}`"))),
        };
        if name == "cartesian_of" {
            return Ok(FamilySpec::CartesianOf { inner: Box::new(body.parse()?) });
        }
        let mut kv = BTreeMap::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("expected key=value in `{part}`")))?;
            let v: i64 = v.trim().parse().map_err(|_| invalid(format!("`{part}`: value must be an integer")))?;
            kv.insert(k.trim().to_string(), v);
        }
        let allowed: &[&str] = match name {
            "ap" => &["n", "start", "step"],
            "gap2" => &["n1", "n2", "d1", "d2"],
            "geometric" => &["n", "start", "ratio"],
            "random_int" => &["n", "range", "seed"],
            "grid" => &["n"],
            "random_points" => &["n", "range", "max_denominator", "seed"],
            _ => return Err(invalid(format!("unknown family `{name}`"))),
        };
        if let Some(k) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(invalid(format!("{name}: unknown key `{k}`")));
        }
        let get = |k: &str, d: i64| kv.get(k).copied().unwrap_or(d);
        let size = |k: &str| usize::try_from(get(k, 1)).map_err(|_| invalid(format!("{name}: {k} must be ≥ 0")));
        let unsigned = |k: &str, d: i64| u64::try_from(get(k, d)).map_err(|_| invalid(format!("{name}: {k} must be ≥ 0")));
        Ok(match name {
            "ap" => FamilySpec::Ap { n: size("n")?, start: get("start", 0), step: get("step", 1) },
            "gap2" => {
                let n1 = size("n1")?;
                FamilySpec::Gap2 { n1, n2: size("n2")?, d1: get("d1", 1), d2: get("d2", n1 as i64) }
            }
            "geometric" => FamilySpec::Geometric { n: size("n")?, start: get("start", 1), ratio: get("ratio", 2) },
            "random_int" => FamilySpec::RandomInt { n: size("n")?, range: get("range", 100), seed: unsigned("seed", 0)? },
            "grid" => FamilySpec::Grid { n: size("n")? },
            _ => FamilySpec::RandomPoints {
                n: size("n")?,
                range: get("range", 10),
                max_denominator: unsigned("max_denominator", 1)?,
                seed: unsigned("seed", 0)?,
            },
        })
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministically materializes a family member.
pub fn generate_family(spec: &FamilySpec) -> Result<Family> {
    match spec {
        FamilySpec::Ap { n, start, step } => {
            if *n == 0 {
                return Err(invalid("ap: size must be at least 1"));
            }
            if *step == 0 {
                return Err(invalid("ap: step must be nonzero"));
            }
            let (start, step) = (BigInt::from(*start), BigInt::from(*step));
            Ok(Family::Scalars(
                (0..*n).map(|i| ExactScalar::from(&start + &step * i)).collect(),
            ))
        }
        FamilySpec::Gap2 { n1, n2, d1, d2 } => {
            if *n1 == 0 || *n2 == 0 {
                return Err(invalid("gap2: sizes must be at least 1"));
            }
            if *d1 == 0 || *d2 == 0 {
                return Err(invalid("gap2: steps must be nonzero"));
            }
            let (d1, d2) = (BigInt::from(*d1), BigInt::from(*d2));
            Ok(Family::Scalars(
                (0..*n1)
                    .flat_map(|i| {
                        let (d1, d2) = (&d1, &d2);
                        (0..*n2).map(move |j| ExactScalar::from(d1 * i + d2 * j))
                    })
                    .collect(),
            ))
        }
        FamilySpec::Geometric { n, start, ratio } => {
            if *n == 0 {
                return Err(invalid("geometric: size must be at least 1"));
            }
            if *start == 0 || ratio.abs() <= 1 {
                return Err(invalid("geometric: need start ≠ 0 and |ratio| ≥ 2"));
            }
            let (start, ratio) = (BigInt::from(*start), BigInt::from(*ratio));
            Ok(Family::Scalars(
                (0..*n as u32)
                    .map(|i| ExactScalar::from(&start * Pow::pow(&ratio, i)))
                    .collect(),
            ))
        }
        FamilySpec::RandomInt { n, range, seed } => {
            if *n == 0 {
                return Err(invalid("random_int: size must be at least 1"));
            }
            if *range < 0 || (*n as u128) > 2 * (*range as u128) + 1 {
                return Err(invalid(format!("random_int: cannot draw {n} distinct values from ±{range}")));
            }
            let mut r = rng(*seed);
            let mut seen = BTreeSet::new();
            while seen.len() < *n {
                seen.insert(r.random_range(-*range..=*range));
            }
            Ok(Family::Scalars(FiniteScalarSet::from_integers(seen)))
        }
        FamilySpec::Grid { n } => {
            if *n == 0 {
                return Err(invalid("grid: size must be at least 1"));
            }
            let side = generate_family(&FamilySpec::ap(*n))?.into_scalars().expect("scalar family");
            Ok(Family::Points(cartesian_square(&side)?))
        }
        FamilySpec::CartesianOf { inner } => match generate_family(inner)? {
            Family::Scalars(a) => Ok(Family::Points(cartesian_square(&a)?)),
            Family::Points(_) => Err(invalid("cartesian_of: inner family must be a scalar family")),
        },
        FamilySpec::RandomPoints { n, range, max_denominator, seed } => {
            if *n == 0 {
                return Err(invalid("random_points: size must be at least 1"));
            }
            if *range < 0 || *max_denominator == 0 {
                return Err(invalid("random_points: need range ≥ 0 and max_denominator ≥ 1"));
            }
            let side = 2 * (*range as u128) + 1;
            if (*n as u128) > side * side {
                return Err(invalid(format!("random_points: cannot draw {n} distinct points from ±{range}")));
            }
            let mut r = rng(*seed);
            let mut seen = BTreeSet::new();
            let coord = |r: &mut ChaCha8Rng| {
                let k = r.random_range(-*range..=*range);
                let q = r.random_range(1..=*max_denominator);
                ExactScalar::new(k.into(), q.into()).expect("q ≥ 1")
            };
            while seen.len() < *n {
                let x = coord(&mut r);
                let y = coord(&mut r);
                seen.insert(Point::new(x, y));
            }
            Ok(Family::Points(PlanarPointSet::from_points(seen)))
        }
    }
}
