//! Experiment driver behind the command-line front end: single checks,
//! family sweeps, and the seeded verification corpus.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bisector::{
    bisector_weight_map, extract_symmetric_subset, extract_symmetric_subset_from_map, reflect_point,
    SymmetricSubset,
};
use crate::bounds::{
    abc_lower_report, guth_katz_ratio, hanson_inclusion_check, plunnecke_check, product_identity_report,
    st_report, thm1_report, thm2_report, BoundReport, Verdict, Witness, THM1_CAP,
};
use crate::bracket::{decimal_ceil, decimal_floor, fraction_string};
use crate::error::{Error, Result};
use crate::family::{generate_family, Family, FamilySpec};
use crate::incidence::{isosceles_count, isosceles_count_brute, weighted_incidences, BRUTE_FORCE_CAP};
use crate::planar::{verify_product_identity, PlanarPointSet};
use crate::report::{self, bound_reports_csv, write_csv, CSV_DIGITS};
use crate::sets::FiniteScalarSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Hanson,
    Plunnecke,
    Abc,
    Thm1,
    Thm2,
    St,
    GuthKatz,
    ProductIdentity,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::Hanson,
        CheckName::Plunnecke,
        CheckName::Abc,
        CheckName::Thm1,
        CheckName::Thm2,
        CheckName::St,
        CheckName::GuthKatz,
        CheckName::ProductIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Hanson => "hanson",
            CheckName::Plunnecke => "plunnecke",
            CheckName::Abc => "abc",
            CheckName::Thm1 => "thm1",
            CheckName::Thm2 => "thm2",
            CheckName::St => "st",
            CheckName::GuthKatz => "guth-katz",
            CheckName::ProductIdentity => "product-identity",
        }
    }

    /// Checks that operate on a planar point set.
    pub fn is_planar(self) -> bool {
        matches!(self, CheckName::Thm2 | CheckName::St)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Size limits keeping every command within minutes on a laptop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// `|A|` for the thm1 chain (`3D² − 2D²` is the largest intermediate).
    pub thm1_set: usize,
    /// `N` for bisector maps.
    pub bisector_points: usize,
    /// `N` for cubic oracles.
    pub brute_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            thm1_set: THM1_CAP,
            bisector_points: 5000,
            brute_points: BRUTE_FORCE_CAP,
        }
    }
}

/// Input to a check: a scalar set `A` or a point set `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Scalars(FiniteScalarSet),
    Points(PlanarPointSet),
}

impl From<Family> for Input {
    fn from(f: Family) -> Self {
        match f {
            Family::Scalars(s) => Input::Scalars(s),
            Family::Points(p) => Input::Points(p),
        }
    }
}

impl Input {
    pub fn len(&self) -> usize {
        match self {
            Input::Scalars(s) => s.len(),
            Input::Points(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn scalars(&self, check: CheckName) -> Result<&FiniteScalarSet> {
        match self {
            Input::Scalars(s) => Ok(s),
            Input::Points(_) => Err(Error::InvalidParameter(format!("check `{check}` needs a scalar set"))),
        }
    }

    /// Point sets as-is; a scalar set `A` becomes `A × A`.
    fn points(&self) -> Result<std::borrow::Cow<'_, PlanarPointSet>> {
        match self {
            Input::Points(p) => Ok(std::borrow::Cow::Borrowed(p)),
            Input::Scalars(s) => Ok(std::borrow::Cow::Owned(crate::planar::cartesian_square(s)?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub include_zero: bool,
    pub include_fixed_points: bool,
    pub caps: Caps,
    /// `(m, n)` for the Plünnecke check; `None` runs every pair with
    /// `1 ≤ m + n ≤ 5`.
    pub plunnecke: Option<(usize, usize)>,
    /// `B` and `C` for the `AB + C` check; both default to `A`.
    pub abc_sets: Option<(FiniteScalarSet, FiniteScalarSet)>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            include_zero: true,
            include_fixed_points: false,
            caps: Caps::default(),
            plunnecke: None,
            abc_sets: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub check: CheckName,
    pub reports: Vec<BoundReport>,
    pub symmetric_subset: Option<SymmetricSubset>,
}

impl CheckOutcome {
    pub fn violated(&self) -> bool {
        self.reports.iter().any(|r| r.verdict == Verdict::Violated)
    }

    /// `0` iff no constant-free claim was violated.
    pub fn exit_code(&self) -> i32 {
        if self.violated() {
            1
        } else {
            0
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        bound_reports_csv(&self.reports)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::json!({
            "check": self.check.as_str(),
            "reports": self.reports,
        });
        if let Some(s) = &self.symmetric_subset {
            v["symmetric_subset"] = report::symmetry_json_value(s);
        }
        report::to_json(&v)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

fn cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

pub fn run_check(check: CheckName, input: &Input, opts: &CheckOptions) -> Result<CheckOutcome> {
    let mut symmetric_subset = None;
    let reports = match check {
        CheckName::Hanson => vec![hanson_inclusion_check(input.scalars(check)?)?],
        CheckName::Plunnecke => {
            let a = input.scalars(check)?;
            match opts.plunnecke {
                Some((m, n)) => vec![plunnecke_check(a, m, n)?],
                None => {
                    let mut out = Vec::new();
                    for total in 1..=5 {
                        for m in (0..=total).rev() {
                            out.push(plunnecke_check(a, m, total - m)?);
                        }
                    }
                    out
                }
            }
        }
        CheckName::Abc => {
            let a = input.scalars(check)?;
            match &opts.abc_sets {
                Some((b, c)) => vec![abc_lower_report(a, b, c)?],
                None => vec![abc_lower_report(a, a, a)?],
            }
        }
        CheckName::Thm1 => vec![thm1_report(input.scalars(check)?, opts.caps.thm1_set)?],
        CheckName::GuthKatz => vec![guth_katz_ratio(input.scalars(check)?)?],
        CheckName::ProductIdentity => vec![product_identity_report(input.scalars(check)?)?],
        CheckName::Thm2 => {
            let p = input.points()?;
            cap("bisector point set", p.len(), opts.caps.bisector_points)?;
            let (rep, subset) = thm2_report(&p, opts.include_zero)?;
            symmetric_subset = Some(if opts.include_fixed_points {
                extract_symmetric_subset(&p, true)?
            } else {
                subset
            });
            vec![rep]
        }
        CheckName::St => {
            let p = input.points()?;
            cap("bisector point set", p.len(), opts.caps.bisector_points)?;
            vec![st_report(&p)?]
        }
    };
    Ok(CheckOutcome {
        check,
        reports,
        symmetric_subset,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: FamilySpec,
    pub check: CheckName,
    pub sizes: RangeInclusive<usize>,
    /// Replaces the seed of random families when set.
    pub seed: Option<u64>,
    pub options: CheckOptions,
    /// Adds a wall-time column; output is then no longer reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub size: usize,
    pub input_size: usize,
    pub check: String,
    /// `ok`, `violated` or `skipped: <reason>`.
    pub status: String,
    pub report: Option<BoundReport>,
    /// Check-specific quantities as `key=value` pairs.
    pub notes: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub check: String,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "family", "size", "input_size", "check", "status", "lhs", "rhs_lo", "rhs_hi", "ratio_lo", "ratio_hi",
    "verdict", "notes",
];

fn notes(r: &BoundReport) -> String {
    let fmt = |q: &num_rational::BigRational| decimal_floor(q, CSV_DIGITS);
    match &r.witness {
        Some(Witness::Thm1(c)) => format!(
            "D={};D2={};dd_plus_d2={};iterated={};inclusion={};plunnecke={};abc_ratio_lo={};ratio_ge_1={}",
            c.d_size,
            c.d_squared_size,
            c.dilated_plus_squares,
            c.iterated_squares,
            c.inclusion_holds,
            c.plunnecke_holds,
            fmt(&c.abc_ratio.lo),
            c.ratio_at_least_one
        ),
        Some(Witness::Thm2(d)) => format!(
            "N={};d={};K={};K3={};w_max={};vacuous={}",
            d.n,
            d.distinct_distances,
            fraction_string(&d.k),
            fraction_string(&d.k_cubed),
            d.w_max,
            d.vacuous
        ),
        Some(Witness::Incidence(i)) => format!(
            "N={};T={};W_total={};w_max={};low_mult={}",
            i.n, i.t, i.w_total, i.w_max, i.low_multiplicity_classes
        ),
        Some(Witness::Hanson(h)) => format!("certified={}", h.certificates.len()),
        Some(Witness::Plunnecke { m, n, sumset_size, .. }) => format!("m={m};n={n};sumset={sumset_size}"),
        Some(Witness::ProductIdentity { .. }) | None => String::new(),
    }
}

fn sweep_row(cfg: &SweepConfig, size: usize) -> SweepRow {
    let mut spec = cfg.family.with_size(size);
    if let Some(seed) = cfg.seed {
        spec = spec.with_seed(seed);
    }
    let start = Instant::now();
    let mut options = cfg.options.clone();
    if cfg.check == CheckName::Plunnecke && options.plunnecke.is_none() {
        options.plunnecke = Some((3, 2));
    }
    let result = generate_family(&spec).map(Input::from).and_then(|input| {
        let n = input.len();
        run_check(cfg.check, &input, &options).map(|o| (n, o))
    });
    let wall_ms = cfg.timing.then(|| start.elapsed().as_millis());
    match result {
        Ok((input_size, outcome)) => {
            let report = outcome.reports.into_iter().next();
            let status = match &report {
                Some(r) if r.verdict == Verdict::Violated => "violated".to_string(),
                _ => "ok".to_string(),
            };
            SweepRow {
                family: spec.to_string(),
                size,
                input_size,
                check: cfg.check.to_string(),
                status,
                notes: report.as_ref().map(notes).unwrap_or_default(),
                report,
                wall_ms,
            }
        }
        Err(e) => SweepRow {
            family: spec.to_string(),
            size,
            input_size: 0,
            check: cfg.check.to_string(),
            status: format!("skipped: {e}"),
            report: None,
            notes: String::new(),
            wall_ms,
        },
    }
}

/// One row per size, in increasing size order. Rows run in parallel; the
/// output does not depend on scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> SweepReport {
    let sizes: Vec<usize> = cfg.sizes.clone().collect();
    let rows = sizes.into_par_iter().map(|n| sweep_row(cfg, n)).collect();
    SweepReport {
        check: cfg.check.to_string(),
        rows,
    }
}

impl SweepReport {
    pub fn violated(&self) -> bool {
        self.rows.iter().any(|r| r.status == "violated")
    }

    pub fn to_csv(&self) -> Result<String> {
        let timing = self.rows.iter().any(|r| r.wall_ms.is_some());
        let mut header: Vec<&str> = SWEEP_COLUMNS.to_vec();
        if timing {
            header.push("wall_ms");
        }
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let bound = r.report.as_ref().map(report::bound_row);
                let col = |i: usize| bound.as_ref().map(|b| b[i].clone()).unwrap_or_default();
                let mut row = vec![
                    r.family.clone(),
                    r.size.to_string(),
                    r.input_size.to_string(),
                    r.check.clone(),
                    r.status.clone(),
                    col(1),
                    col(2),
                    col(3),
                    col(4),
                    col(5),
                    col(6),
                    r.notes.clone(),
                ];
                if timing {
                    row.push(r.wall_ms.map(|t| t.to_string()).unwrap_or_default());
                }
                row
            })
            .collect();
        write_csv(&header, &rows)
    }

    pub fn to_json(&self) -> Result<String> {
        report::to_json(self)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Trial counts and size limits of the verification corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random point sets for the triple equivalence of `T` (plus grids up to 6).
    pub isosceles_trials: usize,
    pub max_points: usize,
    /// Random sets for `d(A × A) = D² + D²` (plus progressions up to 32).
    pub identity_trials: usize,
    pub max_identity_set: usize,
    pub hanson_trials: usize,
    pub max_hanson_set: usize,
    pub hanson_range: i64,
    pub plunnecke_trials: usize,
    pub max_plunnecke_set: usize,
    pub reflection_trials: usize,
    /// Random point sets for the symmetric-subset postcondition (plus grids up
    /// to 12).
    pub extraction_trials: usize,
    pub max_extraction_points: usize,
    /// Corrupts one brute-force count; negative control for tests.
    #[doc(hidden)]
    #[serde(skip)]
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            isosceles_trials: 200,
            max_points: 40,
            identity_trials: 100,
            max_identity_set: 24,
            hanson_trials: 100,
            max_hanson_set: 32,
            hanson_range: 100,
            plunnecke_trials: 50,
            max_plunnecke_set: 16,
            reflection_trials: 100,
            extraction_trials: 100,
            max_extraction_points: 200,
            inject_fault: false,
        }
    }
}

impl VerifyConfig {
    /// Small sizes and trial counts for a quick run.
    pub fn smoke(seed: u64) -> Self {
        VerifyConfig {
            seed,
            isosceles_trials: 20,
            max_points: 10,
            identity_trials: 10,
            max_identity_set: 10,
            hanson_trials: 10,
            max_hanson_set: 10,
            plunnecke_trials: 5,
            max_plunnecke_set: 8,
            reflection_trials: 10,
            extraction_trials: 10,
            max_extraction_points: 10,
            ..VerifyConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub properties: Vec<PropertyResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<Vec<String>> = self
            .properties
            .iter()
            .map(|p| {
                vec![
                    p.name.to_string(),
                    p.trials.to_string(),
                    p.failures.to_string(),
                    if p.passed() { "pass" } else { "fail" }.to_string(),
                    p.first_failure.clone().unwrap_or_default(),
                ]
            })
            .collect();
        write_csv(&["property", "trials", "failures", "result", "first_failure"], &rows)
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => report::to_json(self),
        }
    }
}

fn collect(name: &'static str, outcomes: Vec<std::result::Result<(), String>>) -> PropertyResult {
    let trials = outcomes.len();
    let failures = outcomes.iter().filter(|o| o.is_err()).count();
    let first_failure = outcomes.into_iter().find_map(|o| o.err());
    PropertyResult {
        name,
        trials,
        failures,
        first_failure,
    }
}

/// Per-trial `(size, seed)` pairs drawn from one property-specific stream.
fn trial_params(seed: u64, tag: u64, trials: usize, min: usize, max: usize) -> Vec<(usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..trials)
        .map(|_| (rng.random_range(min..=max.max(min)), rng.random()))
        .collect()
}

fn random_points(n: usize, range: i64, max_denominator: u64, seed: u64) -> PlanarPointSet {
    generate_family(&FamilySpec::RandomPoints { n, range, max_denominator, seed })
        .and_then(Family::into_points)
        .expect("valid random point family")
}

fn random_ints(n: usize, range: i64, seed: u64) -> FiniteScalarSet {
    generate_family(&FamilySpec::RandomInt { n, range, seed })
        .map(|f| f.into_scalars().expect("scalar family"))
        .expect("valid random family")
}

fn grid(n: usize) -> PlanarPointSet {
    generate_family(&FamilySpec::grid(n)).and_then(Family::into_points).expect("grid")
}

fn ap(n: usize) -> FiniteScalarSet {
    generate_family(&FamilySpec::ap(n)).map(|f| f.into_scalars().expect("scalars")).expect("ap")
}

/// Random rational point sets need a coordinate range large enough to hold
/// `n` distinct points.
fn point_range(n: usize) -> i64 {
    ((n as f64).sqrt().ceil() as i64).max(6)
}

/// `isosceles_count = isosceles_count_brute = weighted_incidences`.
pub fn check_triple_equivalence(cfg: &VerifyConfig) -> PropertyResult {
    let mut inputs: Vec<(String, PlanarPointSet)> = trial_params(cfg.seed, 1, cfg.isosceles_trials, 1, cfg.max_points)
        .into_iter()
        .map(|(n, s)| (format!("random_points(n={n},seed={s})"), random_points(n, point_range(n), 3, s)))
        .collect();
    inputs.extend((1..=6).map(|n| (format!("grid({n})"), grid(n))));
    let outcomes = inputs
        .par_iter()
        .enumerate()
        .map(|(i, (label, p))| {
            let fast = isosceles_count(p).map_err(|e| format!("{label}: {e}"))?;
            let mut brute = isosceles_count_brute(p, cfg.max_points.max(36)).map_err(|e| format!("{label}: {e}"))?;
            if cfg.inject_fault && i == 0 {
                brute += 1;
            }
            let incidences = if p.len() >= 2 {
                let map = bisector_weight_map(p).map_err(|e| format!("{label}: {e}"))?;
                weighted_incidences(p, &map).map_err(|e| format!("{label}: {e}"))?
            } else {
                0
            };
            if fast == brute && brute == incidences && fast % 2 == 0 {
                Ok(())
            } else {
                Err(format!("{label}: circle count {fast}, triple loop {brute}, incidences {incidences}"))
            }
        })
        .collect();
    collect("isosceles-triple-equivalence", outcomes)
}

/// `d(A × A) = D² + D²`.
pub fn check_product_identity(cfg: &VerifyConfig) -> PropertyResult {
    let mut inputs: Vec<(String, FiniteScalarSet)> =
        trial_params(cfg.seed, 2, cfg.identity_trials, 1, cfg.max_identity_set)
            .into_iter()
            .map(|(n, s)| (format!("random_int(n={n},seed={s})"), random_ints(n, 100, s)))
            .collect();
    inputs.extend((1..=32).map(|n| (format!("ap({n})"), ap(n))));
    let outcomes = inputs
        .par_iter()
        .map(|(label, a)| match verify_product_identity(a) {
            Ok(r) if r.holds => Ok(()),
            Ok(_) => Err(format!("{label}: d(A×A) ≠ D² + D²")),
            Err(e) => Err(format!("{label}: {e}")),
        })
        .collect();
    collect("product-identity", outcomes)
}

/// `{2}DD ⊆ 2D² − 2D²`, with every witness re-expanded.
pub fn check_hanson_inclusion(cfg: &VerifyConfig) -> PropertyResult {
    let outcomes = trial_params(cfg.seed, 3, cfg.hanson_trials, 1, cfg.max_hanson_set)
        .into_par_iter()
        .map(|(n, s)| {
            let label = format!("random_int(n={n},range={},seed={s})", cfg.hanson_range);
            let a = random_ints(n, cfg.hanson_range, s);
            let rep = hanson_inclusion_check(&a).map_err(|e| format!("{label}: {e}"))?;
            let Some(Witness::Hanson(h)) = &rep.witness else {
                return Err(format!("{label}: no witness payload"));
            };
            if rep.verdict != Verdict::Holds || h.certificates.len() != h.dilated_products {
                return Err(format!("{label}: inclusion failed ({} missing)", h.missing.len()));
            }
            for c in &h.certificates {
                let [a0, b0, c0, d0] = &c.quadruple;
                let expect = &crate::scalar::ExactScalar::from(2) * &(&(a0 - b0) * &(c0 - d0));
                if c.witness.value() != c.element || expect != c.element {
                    return Err(format!("{label}: witness for {} does not expand", c.element));
                }
            }
            Ok(())
        })
        .collect();
    collect("hanson-inclusion", outcomes)
}

/// `|mA − nA| ≤ (|2A|/|A|)^{m+n}|A|` for `1 ≤ m + n ≤ 5`.
pub fn check_plunnecke(cfg: &VerifyConfig) -> PropertyResult {
    let outcomes = trial_params(cfg.seed, 4, cfg.plunnecke_trials, 1, cfg.max_plunnecke_set)
        .into_par_iter()
        .map(|(n, s)| {
            let label = format!("random_int(n={n},seed={s})");
            let a = random_ints(n, 1000, s);
            for total in 1..=5 {
                for m in 0..=total {
                    let rep = plunnecke_check(&a, m, total - m).map_err(|e| format!("{label}: {e}"))?;
                    if rep.verdict != Verdict::Holds {
                        return Err(format!("{label}: |{m}A − {}A| = {} exceeds bound", total - m, rep.lhs));
                    }
                }
            }
            Ok(())
        })
        .collect();
    collect("plunnecke", outcomes)
}

/// Reflections in bisectors are involutive isometries.
pub fn check_reflections(cfg: &VerifyConfig) -> PropertyResult {
    let outcomes = trial_params(cfg.seed, 5, cfg.reflection_trials, 2, cfg.max_points.max(2))
        .into_par_iter()
        .map(|(n, s)| {
            let label = format!("random_points(n={n},seed={s})");
            let p = random_points(n, point_range(n), 4, s);
            let pts = p.points();
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for _ in 0..4 {
                let i = rng.random_range(0..pts.len());
                let j = (i + rng.random_range(1..pts.len())) % pts.len();
                let axis = crate::bisector::perpendicular_bisector(&pts[i], &pts[j]).map_err(|e| e.to_string())?;
                for (k, a) in pts.iter().enumerate() {
                    let ra = reflect_point(&axis, a);
                    if reflect_point(&axis, &ra) != *a {
                        return Err(format!("{label}: reflection of {a} in {axis} is not involutive"));
                    }
                    let b = &pts[(k + 1) % pts.len()];
                    if ra.squared_distance(&reflect_point(&axis, b)) != a.squared_distance(b) {
                        return Err(format!("{label}: reflection in {axis} is not an isometry"));
                    }
                }
            }
            Ok(())
        })
        .collect();
    collect("reflection-involution-isometry", outcomes)
}

/// `ℛ(P′) ⊆ P` and `|P′| = w_L` for the extracted subset.
pub fn check_extraction(cfg: &VerifyConfig) -> PropertyResult {
    let mut inputs: Vec<(String, PlanarPointSet)> =
        trial_params(cfg.seed, 6, cfg.extraction_trials, 2, cfg.max_extraction_points)
            .into_iter()
            .map(|(n, s)| (format!("random_points(n={n},seed={s})"), random_points(n, point_range(n), 2, s)))
            .collect();
    inputs.extend((2..=12).map(|n| (format!("grid({n})"), grid(n))));
    let outcomes = inputs
        .par_iter()
        .map(|(label, p)| {
            let map = bisector_weight_map(p).map_err(|e| format!("{label}: {e}"))?;
            let s = extract_symmetric_subset_from_map(p, &map, false).map_err(|e| format!("{label}: {e}"))?;
            let images_inside = s.subset.iter().all(|q| p.contains(&reflect_point(&s.axis, q)));
            if images_inside && s.subset.len() as u64 == map.max_weight() {
                Ok(())
            } else {
                Err(format!("{label}: |P′| = {}, w_max = {}", s.subset.len(), map.max_weight()))
            }
        })
        .collect();
    collect("symmetric-subset-postcondition", outcomes)
}

/// Runs every property of the corpus.
pub fn verify_corpus(cfg: &VerifyConfig) -> VerifySummary {
    VerifySummary {
        properties: vec![
            check_triple_equivalence(cfg),
            check_product_identity(cfg),
            check_hanson_inclusion(cfg),
            check_plunnecke(cfg),
            check_reflections(cfg),
            check_extraction(cfg),
        ],
    }
}

/// Renders a bracket as `[lo, hi]` decimals.
pub fn bracket_text(b: &crate::bracket::Bracket) -> String {
    format!("[{}, {}]", decimal_floor(&b.lo, CSV_DIGITS), decimal_ceil(&b.hi, CSV_DIGITS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Input {
        Input::Scalars(FiniteScalarSet::from_integers(v.iter().copied()))
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
        }
        assert!(matches!("nope".parse::<CheckName>(), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn run_check_examples() {
        let o = run_check(CheckName::ProductIdentity, &ints(&[0, 1, 2]), &CheckOptions::default()).unwrap();
        assert_eq!(o.reports[0].verdict, Verdict::Holds);
        assert_eq!(o.exit_code(), 0);
        let o = run_check(CheckName::Hanson, &ints(&[0, 1, 3]), &CheckOptions::default()).unwrap();
        assert_eq!(o.exit_code(), 0);
        let grid = Input::Points(grid(3));
        let o = run_check(CheckName::Thm2, &grid, &CheckOptions::default()).unwrap();
        assert_eq!(o.reports[0].ratio.as_ref().unwrap().lo, num_rational::BigRational::new(16.into(), 9.into()));
        assert_eq!(o.symmetric_subset.as_ref().unwrap().subset.len(), 6);
        assert_eq!(o.exit_code(), 0);
        // A scalar input to a planar check means A × A.
        let o = run_check(CheckName::Thm2, &ints(&[0, 1, 2]), &CheckOptions::default()).unwrap();
        assert_eq!(o.symmetric_subset.unwrap().weight, 6);
        let o = run_check(CheckName::Plunnecke, &ints(&[0, 1, 5]), &CheckOptions::default()).unwrap();
        assert_eq!(o.reports.len(), 20);
        assert!(run_check(CheckName::Hanson, &grid, &CheckOptions::default()).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let opts = CheckOptions {
            caps: Caps { thm1_set: 4, bisector_points: 8, brute_points: 60 },
            ..CheckOptions::default()
        };
        assert!(matches!(run_check(CheckName::Thm1, &ints(&[0, 1, 2, 3, 4]), &opts), Err(Error::CapExceeded { .. })));
        assert!(matches!(run_check(CheckName::St, &Input::Points(grid(3)), &opts), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn violated_exit_code() {
        let mut o = run_check(CheckName::Hanson, &ints(&[0, 1]), &CheckOptions::default()).unwrap();
        o.reports[0].verdict = Verdict::Violated;
        assert_eq!(o.exit_code(), 1);
    }

    #[test]
    fn sweep_examples() {
        let cfg = SweepConfig {
            family: FamilySpec::ap(3),
            check: CheckName::Thm1,
            sizes: 3..=16,
            seed: None,
            options: CheckOptions::default(),
            timing: false,
        };
        let r = run_sweep(&cfg);
        assert_eq!(r.rows.len(), 14);
        assert!(r.rows.iter().all(|row| row.status == "ok"));
        assert_eq!(r.rows[0].size, 3);

        let cfg = SweepConfig {
            family: FamilySpec::grid(2),
            check: CheckName::Thm2,
            sizes: 2..=8,
            ..cfg
        };
        let r = run_sweep(&cfg);
        assert_eq!(r.rows.len(), 7);
        assert!(r.rows[1].notes.contains("K3=27/8;w_max=6"), "{}", r.rows[1].notes);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("family,size,input_size,check,status,lhs,"));
    }

    #[test]
    fn sweep_is_deterministic_and_skips_capped_rows() {
        let cfg = SweepConfig {
            family: FamilySpec::RandomInt { n: 4, range: 50, seed: 1 },
            check: CheckName::Thm1,
            sizes: 2..=6,
            seed: Some(7),
            options: CheckOptions {
                caps: Caps { thm1_set: 5, ..Caps::default() },
                ..CheckOptions::default()
            },
            timing: false,
        };
        let a = run_sweep(&cfg).to_csv().unwrap();
        let b = run_sweep(&cfg).to_csv().unwrap();
        assert_eq!(a, b);
        let r = run_sweep(&cfg);
        assert!(r.rows[4].status.starts_with("skipped"));
        assert_eq!(r.rows[3].status, "ok");
    }

    #[test]
    fn smoke_corpus_passes_and_fault_is_caught() {
        let s = verify_corpus(&VerifyConfig::smoke(3));
        assert!(s.passed(), "{s:?}");
        assert_eq!(s.properties.len(), 6);
        assert_eq!(s.properties[0].trials, 26);
        let bad = VerifyConfig { inject_fault: true, ..VerifyConfig::smoke(3) };
        let s = check_triple_equivalence(&bad);
        assert_eq!(s.failures, 1);
        assert!(s.first_failure.is_some());
    }
}
