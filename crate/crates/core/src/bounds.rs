//! Checkers and ratio reports for sumset inclusions, growth inequalities and
//! distinct-distance bounds.
//!
//! Claims without hidden constants (set inclusions, exact identities,
//! Plünnecke–Ruzsa with constant one) get a `Holds`/`Violated` verdict.
//! Asymptotic claims get `HoldsWithConstant` together with an exact
//! enclosure of the ratio `lhs / rhs`; they are never asserted with an
//! invented constant.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::bisector::{bisector_weight_map, extract_symmetric_subset_from_map, SymmetricSubset};
use crate::bracket::{ln_bracket, rational_power, Bracket, DEFAULT_DIGITS};
use crate::error::{Error, Result};
use crate::incidence::{st_bound_report, IncidenceReport};
use crate::planar::{squared_distance_set, verify_product_identity, PlanarPointSet};
use crate::scalar::ExactScalar;
use crate::sets::{
    ab_plus_c_set, difference_set, dilate, elementwise_square, iterated_combination,
    pairwise_combine, CombineOp, FiniteScalarSet,
};

/// Largest `|A|` accepted by [`thm1_report`] unless overridden.
pub const THM1_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    HoldsWithConstant,
    Violated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithConstant => "holds-with-constant",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One comparison `lhs` vs `rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    #[serde(serialize_with = "ser_fraction")]
    pub lhs: BigRational,
    pub rhs: Bracket,
    /// Enclosure of `lhs / rhs`; absent when `rhs` can be zero.
    pub ratio: Option<Bracket>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

fn ser_fraction<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&crate::bracket::fraction_string(r))
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Structured payloads attached to reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Hanson(HansonDetail),
    Plunnecke { m: usize, n: usize, sumset_size: usize, set_size: usize },
    Thm1(Thm1Chain),
    Thm2(Thm2Detail),
    ProductIdentity { distance_side: FiniteScalarSet, sumset_side: FiniteScalarSet },
    Incidence(IncidenceReport),
}

/// `(w, x, y, z)` with `2(a − b)(c − d) = w² + x² − y² − z²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HansonWitness {
    pub w: ExactScalar,
    pub x: ExactScalar,
    pub y: ExactScalar,
    pub z: ExactScalar,
}

impl HansonWitness {
    pub fn value(&self) -> ExactScalar {
        &(&(self.w.square() + self.x.square()) - &self.y.square()) - &self.z.square()
    }
}

/// Returns `(a − d, b − c, a − c, b − d)`, whose signed squares sum to
/// `2(a − b)(c − d)`. Panics if the expansion fails, which would be an
/// arithmetic bug.
pub fn hanson_witness(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar, d: &ExactScalar) -> HansonWitness {
    let wit = HansonWitness {
        w: a - d,
        x: b - c,
        y: a - c,
        z: b - d,
    };
    let target = &ExactScalar::from(2) * &(&(a - b) * &(c - d));
    assert_eq!(wit.value(), target, "witness expansion failed for ({a}, {b}, {c}, {d})");
    wit
}

/// One element of `{2}DD` with the quadruple that generates it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HansonCertificate {
    pub element: ExactScalar,
    pub quadruple: [ExactScalar; 4],
    pub witness: HansonWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HansonDetail {
    pub dilated_products: usize,
    pub signed_square_sums: usize,
    /// Elements of `{2}DD` missing from `2D² − 2D²` (empty when the inclusion holds).
    pub missing: Vec<ExactScalar>,
    pub certificates: Vec<HansonCertificate>,
}

/// Checks `{2}DD ⊆ 2D² − 2D²` for `D = A − A`, both by set inclusion and by
/// certifying every element of `{2}DD` with an explicit witness.
pub fn hanson_inclusion_check(a: &FiniteScalarSet) -> Result<BoundReport> {
    let d = difference_set(a)?;
    let two_dd = dilate(&ExactScalar::from(2), &pairwise_combine(&d, &d, CombineOp::Multiply)?)?;
    let d2 = elementwise_square(&d)?;
    let rhs_set = iterated_combination(2, 2, &d2)?;
    let missing: Vec<ExactScalar> = two_dd
        .iter()
        .filter(|x| !rhs_set.contains(x))
        .cloned()
        .collect();

    // One representation a − b for each difference.
    let mut rep: HashMap<&ExactScalar, (&ExactScalar, &ExactScalar)> = HashMap::new();
    for x in a {
        for y in a {
            rep.entry(&d.elements()[d.elements().binary_search(&(x - y)).expect("x − y ∈ D")])
                .or_insert((x, y));
        }
    }
    let two = ExactScalar::from(2);
    let mut first_generator: HashMap<ExactScalar, (&ExactScalar, &ExactScalar)> = HashMap::new();
    for d1 in &d {
        for d2v in &d {
            first_generator.entry(&two * &(d1 * d2v)).or_insert((d1, d2v));
        }
    }
    let mut certificates = Vec::with_capacity(two_dd.len());
    let mut uncertified = 0usize;
    for e in &two_dd {
        let Some(&(d1, d2v)) = first_generator.get(e) else {
            uncertified += 1;
            continue;
        };
        let (pa, pb) = rep[d1];
        let (pc, pd) = rep[d2v];
        let witness = hanson_witness(pa, pb, pc, pd);
        let in_d = [&witness.w, &witness.x, &witness.y, &witness.z]
            .iter()
            .all(|v| d.contains(v));
        if !in_d || witness.value() != *e {
            uncertified += 1;
            continue;
        }
        certificates.push(HansonCertificate {
            element: e.clone(),
            quadruple: [pa.clone(), pb.clone(), pc.clone(), pd.clone()],
            witness,
        });
    }
    let verdict = if missing.is_empty() && uncertified == 0 {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(BoundReport {
        name: "hanson".into(),
        lhs: int(two_dd.len()),
        rhs: Bracket::exact(int(rhs_set.len())),
        ratio: Some(Bracket::exact(BigRational::new(two_dd.len().into(), rhs_set.len().into()))),
        verdict,
        witness: Some(Witness::Hanson(HansonDetail {
            dilated_products: two_dd.len(),
            signed_square_sums: rhs_set.len(),
            missing,
            certificates,
        })),
    })
}

/// `|mA − nA| ≤ (|A + A| / |A|)^{m+n} |A|`, both sides exact.
pub fn plunnecke_check(a: &FiniteScalarSet, m: usize, n: usize) -> Result<BoundReport> {
    let lhs_set = iterated_combination(m, n, a)?;
    let doubling = pairwise_combine(a, a, CombineOp::Add)?;
    let k = BigRational::new(doubling.len().into(), a.len().into());
    let rhs = Pow::pow(&k, (m + n) as u32) * int(a.len());
    let lhs = int(lhs_set.len());
    let verdict = if lhs <= rhs { Verdict::Holds } else { Verdict::Violated };
    Ok(BoundReport {
        name: format!("plunnecke[{m},{n}]"),
        ratio: Some(Bracket::exact(&lhs / &rhs)),
        lhs,
        rhs: Bracket::exact(rhs),
        verdict,
        witness: Some(Witness::Plunnecke {
            m,
            n,
            sumset_size: doubling.len(),
            set_size: a.len(),
        }),
    })
}

/// Ratio `|AB + C| / (|A||B||C|)^{1/2}`.
pub fn abc_lower_report(a: &FiniteScalarSet, b: &FiniteScalarSet, c: &FiniteScalarSet) -> Result<BoundReport> {
    let s = ab_plus_c_set(a, b, c)?;
    let product = BigInt::from(a.len()) * b.len() * c.len();
    let rhs = rational_power(&product, 1, 2, DEFAULT_DIGITS);
    let lhs = int(s.len());
    Ok(BoundReport {
        name: "abc".into(),
        ratio: Some(rhs.recip_scaled(&lhs)),
        lhs,
        rhs,
        verdict: Verdict::HoldsWithConstant,
        witness: None,
    })
}

/// Intermediate quantities of the chain
/// `|{2}DD + D²| ≤ |3D² − 2D²| ≤ (|D² + D²| / |D²|)^5 |D²|` and
/// `|{2}DD + D²| ≫ |D|^{3/2}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm1Chain {
    pub a_size: usize,
    pub d_size: usize,
    pub d_squared_size: usize,
    /// `|D² + D²| = |d(A × A)|`.
    pub distance_count: usize,
    /// `|{2}DD + D²|`.
    pub dilated_plus_squares: usize,
    /// `|3D² − 2D²|`.
    pub iterated_squares: usize,
    /// `{2}DD + D² ⊆ 3D² − 2D²`.
    pub inclusion_holds: bool,
    #[serde(serialize_with = "ser_fraction")]
    pub plunnecke_rhs: BigRational,
    pub plunnecke_holds: bool,
    pub d_three_halves: Bracket,
    /// Enclosure of `|{2}DD + D²| / |D|^{3/2}`.
    pub abc_ratio: Bracket,
    /// `|D² + D²|^{10} ≥ |D|^{11}`, decided exactly.
    pub ratio_at_least_one: bool,
}

/// `|d(A × A)| = |D² + D²|` against `|D|^{11/10}`, with the full chain.
pub fn thm1_report(a: &FiniteScalarSet, cap: usize) -> Result<BoundReport> {
    if a.len() > cap {
        return Err(Error::CapExceeded { what: "thm1 input set", size: a.len(), cap });
    }
    let d = difference_set(a)?;
    let d2 = elementwise_square(&d)?;
    let sum2 = iterated_combination(2, 0, &d2)?;
    let two_dd = dilate(&ExactScalar::from(2), &pairwise_combine(&d, &d, CombineOp::Multiply)?)?;
    let x = pairwise_combine(&two_dd, &d2, CombineOp::Add)?;
    let y = iterated_combination(3, 2, &d2)?;
    let inclusion_holds = x.is_subset_of(&y);
    let plunnecke_rhs = Pow::pow(BigRational::new(sum2.len().into(), d2.len().into()), 5u32) * int(d2.len());
    let plunnecke_holds = int(y.len()) <= plunnecke_rhs;
    let d_big = BigInt::from(d.len());
    let d_three_halves = rational_power(&d_big, 3, 2, DEFAULT_DIGITS);
    let abc_ratio = d_three_halves.recip_scaled(&int(x.len()));
    let rhs = rational_power(&d_big, 11, 10, DEFAULT_DIGITS);
    let lhs = int(sum2.len());
    let ratio_at_least_one = Pow::pow(BigInt::from(sum2.len()), 10u32) >= Pow::pow(&d_big, 11u32);
    let verdict = if inclusion_holds && plunnecke_holds {
        Verdict::HoldsWithConstant
    } else {
        Verdict::Violated
    };
    Ok(BoundReport {
        name: "thm1".into(),
        ratio: Some(rhs.recip_scaled(&lhs)),
        lhs,
        rhs,
        verdict,
        witness: Some(Witness::Thm1(Thm1Chain {
            a_size: a.len(),
            d_size: d.len(),
            d_squared_size: d2.len(),
            distance_count: sum2.len(),
            dilated_plus_squares: x.len(),
            iterated_squares: y.len(),
            inclusion_holds,
            plunnecke_rhs,
            plunnecke_holds,
            d_three_halves,
            abc_ratio,
            ratio_at_least_one,
        })),
    })
}

/// Ratio `|D² + D²| · log|A| / |A|²`.
pub fn guth_katz_ratio(a: &FiniteScalarSet) -> Result<BoundReport> {
    if a.len() < 2 {
        return Err(Error::TooFewPoints { op: "guth_katz_ratio", need: 2, got: a.len() });
    }
    let d2 = elementwise_square(&difference_set(a)?)?;
    let sum2 = iterated_combination(2, 0, &d2)?;
    let log = ln_bracket(&BigInt::from(a.len()));
    let a2 = int(a.len() * a.len());
    let rhs = log.recip_scaled(&a2);
    let lhs = int(sum2.len());
    let ratio = Bracket::new(&log.lo * &lhs / &a2, &log.hi * &lhs / &a2);
    Ok(BoundReport {
        name: "guth-katz".into(),
        lhs,
        rhs,
        ratio: Some(ratio),
        verdict: Verdict::HoldsWithConstant,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thm2Detail {
    pub n: usize,
    pub distinct_distances: usize,
    pub includes_zero: bool,
    /// `K = N / |d(P)|`.
    #[serde(serialize_with = "ser_fraction")]
    pub k: BigRational,
    #[serde(serialize_with = "ser_fraction")]
    pub k_cubed: BigRational,
    pub w_max: u64,
    /// `K ≤ 1`: the hypothesis carries no information.
    pub vacuous: bool,
    pub subset: SymmetricSubset,
}

/// `w_L` against `K³` with `K = N / |d(P)|`, and the extracted symmetric
/// subset (fixed points excluded).
pub fn thm2_report(p: &PlanarPointSet, include_zero: bool) -> Result<(BoundReport, SymmetricSubset)> {
    if p.len() < 2 {
        return Err(Error::TooFewPoints { op: "thm2_report", need: 2, got: p.len() });
    }
    let dist = squared_distance_set(p, include_zero)?;
    let map = bisector_weight_map(p)?;
    let subset = extract_symmetric_subset_from_map(p, &map, false)?;
    let k = BigRational::new(p.len().into(), dist.len().into());
    let k_cubed = Pow::pow(&k, 3u32);
    let w_max = map.max_weight();
    let lhs = BigRational::from_integer(w_max.into());
    let postcondition = subset.mirror.iter().all(|q| p.contains(q))
        && subset.subset.len() as u64 == w_max;
    let verdict = if postcondition {
        Verdict::HoldsWithConstant
    } else {
        Verdict::Violated
    };
    let report = BoundReport {
        name: "thm2".into(),
        ratio: Some(Bracket::exact(&lhs / &k_cubed)),
        lhs,
        rhs: Bracket::exact(k_cubed.clone()),
        verdict,
        witness: Some(Witness::Thm2(Thm2Detail {
            n: p.len(),
            distinct_distances: dist.len(),
            includes_zero: include_zero,
            vacuous: k <= BigRational::one(),
            k,
            k_cubed,
            w_max,
            subset: subset.clone(),
        })),
    };
    Ok((report, subset))
}

/// `d(A × A) = D² + D²` as a constant-free report.
pub fn product_identity_report(a: &FiniteScalarSet) -> Result<BoundReport> {
    let r = verify_product_identity(a)?;
    let lhs = int(r.distance_side.len());
    Ok(BoundReport {
        name: "product-identity".into(),
        rhs: Bracket::exact(int(r.sumset_side.len())),
        ratio: Some(Bracket::exact(&lhs / int(r.sumset_side.len()))),
        lhs,
        verdict: if r.holds { Verdict::Holds } else { Verdict::Violated },
        witness: Some(Witness::ProductIdentity {
            distance_side: r.distance_side,
            sumset_side: r.sumset_side,
        }),
    })
}

/// `I_w` against the weighted incidence bound, as a report.
pub fn st_report(p: &PlanarPointSet) -> Result<BoundReport> {
    let map = bisector_weight_map(p)?;
    let inc = st_bound_report(p, &map)?;
    let rhs = inc.rhs_bracket();
    let ratio = if rhs.lo.is_zero() { None } else { Some(rhs.recip_scaled(&BigRational::from_integer(inc.i_w.into()))) };
    Ok(BoundReport {
        name: "st".into(),
        lhs: BigRational::from_integer(inc.i_w.into()),
        rhs,
        ratio,
        verdict: Verdict::HoldsWithConstant,
        witness: Some(Witness::Incidence(inc)),
    })
}
