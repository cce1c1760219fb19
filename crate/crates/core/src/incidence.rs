//! Ordered isosceles triples and weighted point–bisector incidences.
//!
//! `T = {(p, q, s) : |p − s| = |q − s|, p ≠ q}` is counted three ways: from
//! circle occupancy around each center, by a direct triple loop, and as the
//! weighted incidence count of the points against their own bisector multiset.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bisector::WeightedBisectorMap;
use crate::bracket::{integer_root_bounds, Bracket};
use crate::error::{Error, Result};
use crate::planar::{FrameCoords, IntegerFrame, PlanarPointSet};

/// Default size cap for the cubic oracle.
pub const BRUTE_FORCE_CAP: usize = 60;

/// `Σ_s Σ_r m(s, r)·(m(s, r) − 1)`, in `O(N² log N)`.
pub fn isosceles_count(p: &PlanarPointSet) -> Result<u64> {
    p.require_nonempty("isosceles_count")?;
    let frame = IntegerFrame::new(p);
    Ok((0..p.len())
        .into_par_iter()
        .map(|i| frame.center_multiplicities(i).iter().map(|m| m * (m - 1)).sum::<u64>())
        .sum())
}

/// Literal triple loop over `(p, q, s)`; refuses inputs larger than `cap`.
pub fn isosceles_count_brute(p: &PlanarPointSet, cap: usize) -> Result<u64> {
    p.require_nonempty("isosceles_count_brute")?;
    if p.len() > cap {
        return Err(Error::CapExceeded { what: "brute-force point set", size: p.len(), cap });
    }
    let pts = p.points();
    let mut count = 0u64;
    for s in pts {
        for (i, a) in pts.iter().enumerate() {
            let da = a.squared_distance(s);
            for (j, b) in pts.iter().enumerate() {
                if i != j && b.squared_distance(s) == da {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn check_map(p: &PlanarPointSet, map: &WeightedBisectorMap) -> Result<()> {
    let n = p.len() as u64;
    let expected = n * n.saturating_sub(1);
    if map.total_weight() != expected || map.n_points() != p.len() {
        return Err(Error::MismatchedInputs { got: map.total_weight(), expected });
    }
    Ok(())
}

/// `I_w(P, L) = Σ_{l ∈ L} Σ_{s ∈ P ∩ l} w(l)`, with point-on-line decided
/// exactly.
pub fn weighted_incidences(p: &PlanarPointSet, map: &WeightedBisectorMap) -> Result<u64> {
    p.require_nonempty("weighted_incidences")?;
    check_map(p, map)?;
    let frame = IntegerFrame::new(p);
    // In frame coordinates X = s·x the test a·x + b·y + c = 0 becomes
    // a·X + b·Y + c·s = 0.
    let scale = &frame.scale;
    let small_frame = match &frame.coords {
        FrameCoords::Small(v) => Some(v),
        FrameCoords::Big(_) => None,
    };
    let count_line = |(line, w): &(crate::bisector::CanonicalLine, u64)| -> u64 {
        let on = small_frame.and_then(|v| {
            let a = line.a().to_i128()?;
            let b = line.b().to_i128()?;
            let cs = (line.c() * scale).to_i128()?;
            let mut hits = 0u64;
            for &(x, y) in v {
                let val = a.checked_mul(x as i128)?
                    .checked_add(b.checked_mul(y as i128)?)?
                    .checked_add(cs)?;
                if val == 0 {
                    hits += 1;
                }
            }
            Some(hits)
        });
        let on = on.unwrap_or_else(|| p.iter().filter(|s| line.contains(s)).count() as u64);
        on * w
    };
    Ok(map.entries().par_iter().map(count_line).sum())
}

/// Everything entering the weighted incidence bound
/// `I_w ≪ w_L^{1/3} (N·W_L)^{2/3} + W_L + w_L·N` for one point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceReport {
    pub n: usize,
    /// `|T|`, from circle occupancy.
    pub t: u64,
    /// `I_w(P, L)`.
    pub i_w: u64,
    pub w_total: u64,
    pub w_max: u64,
    /// `⌊w_L^{1/3}(N·W_L)^{2/3}⌋` and `⌈…⌉`.
    #[serde(serialize_with = "ser_display")]
    pub main_term_floor: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub main_term_ceil: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub rhs_floor: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub rhs_ceil: BigInt,
    /// Enclosure of `I_w / RHS`; `None` when the right side is zero.
    pub ratio: Option<Bracket>,
    /// Number of `(s, r)` with `s ∈ P`, `r ∈ d(P)` (zero included) and
    /// `|C(s, r) ∩ P| ≤ 1`.
    pub low_multiplicity_classes: u64,
    /// `|d(P)|`, zero distance included.
    pub distinct_distances: usize,
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl IncidenceReport {
    pub fn rhs_bracket(&self) -> Bracket {
        Bracket::new(
            BigRational::from_integer(self.rhs_floor.clone()),
            BigRational::from_integer(self.rhs_ceil.clone()),
        )
    }
}

pub fn st_bound_report(p: &PlanarPointSet, map: &WeightedBisectorMap) -> Result<IncidenceReport> {
    p.require_nonempty("st_bound_report")?;
    check_map(p, map)?;
    let n = p.len();
    let distinct_distances = crate::planar::squared_distance_set(p, true)?.len();
    let frame = IntegerFrame::new(p);
    let (t, heavy_classes) = (0..n)
        .into_par_iter()
        .map(|i| {
            let ms = frame.center_multiplicities(i);
            let t: u64 = ms.iter().map(|m| m * (m - 1)).sum();
            let heavy = ms.iter().filter(|&&m| m >= 2).count() as u64;
            (t, heavy)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let low_multiplicity_classes = n as u64 * distinct_distances as u64 - heavy_classes;
    let i_w = weighted_incidences(p, map)?;
    if t != i_w {
        return Err(Error::Invariant(format!("isosceles count {t} differs from I_w {i_w}")));
    }
    let w_total = map.total_weight();
    let w_max = map.max_weight();
    let nw = BigInt::from(n) * w_total;
    let cube = BigInt::from(w_max) * &nw * &nw;
    let (main_term_floor, main_term_ceil) = integer_root_bounds(&cube, 3);
    let linear = BigInt::from(w_total) + BigInt::from(w_max) * n;
    let rhs_floor = &main_term_floor + &linear;
    let rhs_ceil = &main_term_ceil + &linear;
    let ratio = if rhs_ceil == BigInt::from(0) {
        None
    } else {
        let iw = BigRational::from_integer(i_w.into());
        let lo = &iw / BigRational::from_integer(rhs_ceil.clone());
        let hi = if rhs_floor == BigInt::from(0) {
            lo.clone()
        } else {
            &iw / BigRational::from_integer(rhs_floor.clone())
        };
        Some(Bracket::new(lo, hi))
    };
    Ok(IncidenceReport {
        n,
        t,
        i_w,
        w_total,
        w_max,
        main_term_floor,
        main_term_ceil,
        rhs_floor,
        rhs_ceil,
        ratio,
        low_multiplicity_classes,
        distinct_distances,
    })
}
