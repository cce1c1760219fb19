//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. `cargo test --test acceptance -- --freeze` prints the corpus
//! constants used by the regression criterion instead.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Pow;

use isodist::bisector::bisector_weight_map;
use isodist::bounds::{abc_lower_report, st_report, thm1_report, thm2_report, Witness};
use isodist::bounds::hanson_inclusion_check;
use isodist::harness::{
    check_extraction, check_plunnecke, check_product_identity, check_triple_equivalence, run_sweep, CheckName,
    CheckOptions, OutputFormat, PropertyResult, SweepConfig, VerifyConfig,
};
use isodist::incidence::{isosceles_count, weighted_incidences};
use isodist::planar::{squared_distance_set, verify_product_identity};
use isodist::{generate_family, FamilySpec, FiniteScalarSet, PlanarPointSet};

/// Largest `I_w / RHS` upper bracket over the incidence corpus.
const C_ST: (i64, i64) = (5184, 13127);
/// Smallest `|AB + C| / (|A||B||C|)^{1/2}` lower bracket over the abc corpus.
const ABC_MIN: (i64, i64) = (106_066, 100_000);

const SEED: u64 = 0;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn pass_if(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn show(q: &BigRational) -> String {
    isodist::bracket::decimal_floor(q, 6)
}

fn scalars(spec: FamilySpec) -> FiniteScalarSet {
    generate_family(&spec).unwrap().into_scalars().unwrap()
}

fn points(spec: FamilySpec) -> PlanarPointSet {
    generate_family(&spec).unwrap().into_points().unwrap()
}

fn small(a: &FiniteScalarSet) -> Vec<i64> {
    a.to_small().expect("integer corpus")
}

fn small_points(p: &PlanarPointSet) -> Vec<(i64, i64)> {
    p.iter().map(|q| (q.x.to_i64().unwrap(), q.y.to_i64().unwrap())).collect()
}

fn property(r: &PropertyResult) -> Outcome {
    pass_if(
        r.passed(),
        format!(
            "{} trials, {} failures{}",
            r.trials,
            r.failures,
            r.first_failure.as_ref().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn criterion_1() -> Outcome {
    property(&check_triple_equivalence(&VerifyConfig { seed: SEED, ..VerifyConfig::default() }))
}

fn criterion_2() -> Outcome {
    property(&check_product_identity(&VerifyConfig { seed: SEED, ..VerifyConfig::default() }))
}

/// Inclusion via the library, then every certificate re-expanded here in
/// integer arithmetic; together they must cover a directly enumerated `{2}DD`.
fn criterion_3() -> Outcome {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut certified = 0usize;
    for trial in 0..100 {
        let n = rng.random_range(1..=32usize);
        let a = scalars(FamilySpec::RandomInt { n, range: 100, seed: rng.random() });
        let av = small(&a);
        let rep = hanson_inclusion_check(&a).unwrap();
        let Some(Witness::Hanson(h)) = rep.witness else {
            return pass_if(false, format!("trial {trial}: no witness payload"));
        };
        let d: HashSet<i64> = av.iter().flat_map(|x| av.iter().map(move |y| x - y)).collect();
        let dd: HashSet<i64> = d.iter().flat_map(|x| d.iter().map(move |y| 2 * x * y)).collect();
        // A certificate with w, x, y, z ∈ D places its element in 2D² − 2D².
        if rep.verdict != isodist::Verdict::Holds || !h.missing.is_empty() {
            return pass_if(false, format!("trial {trial}: inclusion fails for A = {a}"));
        }
        let mut covered = HashSet::new();
        for c in &h.certificates {
            let q: Vec<i64> = c.quadruple.iter().map(|x| x.to_i64().unwrap()).collect();
            let [w, x, y, z] = [&c.witness.w, &c.witness.x, &c.witness.y, &c.witness.z].map(|v| v.to_i64().unwrap());
            let element = c.element.to_i64().unwrap();
            let in_a = q.iter().all(|v| av.contains(v));
            let in_d = [w, x, y, z].iter().all(|v| d.contains(v));
            let lhs = 2 * (q[0] - q[1]) as i128 * (q[2] - q[3]) as i128;
            let rhs = (w as i128).pow(2) + (x as i128).pow(2) - (y as i128).pow(2) - (z as i128).pow(2);
            if !(in_a && in_d && lhs == rhs && lhs == element as i128) {
                return pass_if(false, format!("trial {trial}: certificate for {element} does not expand"));
            }
            covered.insert(element);
        }
        if covered != dd {
            return pass_if(false, format!("trial {trial}: certificates cover {} of {} elements", covered.len(), dd.len()));
        }
        certified += covered.len();
    }
    pass_if(true, format!("100 trials, {certified} elements certified"))
}

fn criterion_4() -> Outcome {
    property(&check_plunnecke(&VerifyConfig { seed: SEED, ..VerifyConfig::default() }))
}

fn criterion_5() -> Outcome {
    property(&check_extraction(&VerifyConfig { seed: SEED, ..VerifyConfig::default() }))
}

/// Bisector of `p, q` as a primitive integer triple with a positive leading
/// coefficient.
fn naive_line(p: (i64, i64), q: (i64, i64)) -> (i64, i64, i64) {
    let (a, b, c) = (2 * (q.0 - p.0), 2 * (q.1 - p.1), p.0 * p.0 + p.1 * p.1 - q.0 * q.0 - q.1 * q.1);
    let g = a.gcd(&b).gcd(&c);
    let s = if a < 0 || (a == 0 && b < 0) { -g } else { g };
    (a / s, b / s, c / s)
}

fn naive_lines(p: &[(i64, i64)]) -> HashMap<(i64, i64, i64), u64> {
    let mut m = HashMap::new();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            *m.entry(naive_line(p[i], p[j])).or_insert(0) += 2;
        }
    }
    m
}

fn naive_distances(p: &[(i64, i64)]) -> HashSet<i64> {
    p.iter()
        .flat_map(|a| p.iter().map(move |b| (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)))
        .collect()
}

fn naive_t(p: &[(i64, i64)]) -> u64 {
    let d = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2);
    let mut t = 0;
    for &a in p {
        for &b in p {
            for &c in p {
                if b != c && a != b && a != c && d(a, b) == d(a, c) {
                    t += 1;
                }
            }
        }
    }
    t
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: String, oracle: String, frozen: &str| {
        if got != oracle || got != frozen {
            failures.push(format!("{what}: library {got}, oracle {oracle}, frozen {frozen}"));
        }
    };

    let grid = points(FamilySpec::grid(3));
    let gv = small_points(&grid);
    let dist = squared_distance_set(&grid, true).unwrap();
    let nd = naive_distances(&gv);
    expect("grid |d(P)|", dist.len().to_string(), nd.len().to_string(), "6");
    let map = bisector_weight_map(&grid).unwrap();
    let lines = naive_lines(&gv);
    let naive_total: u64 = lines.values().sum();
    let naive_max = *lines.values().max().unwrap();
    expect("grid W_total", map.total_weight().to_string(), naive_total.to_string(), "72");
    expect("grid w_max", map.max_weight().to_string(), naive_max.to_string(), "6");
    let (rep, _) = thm2_report(&grid, true).unwrap();
    let k = rat(gv.len() as i64, nd.len() as i64);
    let oracle_ratio = rat(naive_max as i64, 1) / Pow::pow(&k, 3u32);
    let ratio = rep.ratio.unwrap();
    expect(
        "grid thm2 ratio",
        if ratio.is_exact() { ratio.lo.to_string() } else { "inexact".into() },
        oracle_ratio.to_string(),
        "16/9",
    );

    let tri = PlanarPointSet::from_int_pairs([(0, 0), (1, 0), (0, 1)]);
    let tv = small_points(&tri);
    let tmap = bisector_weight_map(&tri).unwrap();
    let naive_tri_t = naive_t(&tv);
    expect("triangle T", isosceles_count(&tri).unwrap().to_string(), naive_tri_t.to_string(), "2");
    // Each isosceles triple (p; q, r) is one incidence of p with the bisector of q, r.
    let naive_iw: u64 = naive_lines(&tv)
        .iter()
        .map(|(&(a, b, c), w)| w * tv.iter().filter(|&&(x, y)| a * x + b * y + c == 0).count() as u64)
        .sum();
    expect("triangle I_w", weighted_incidences(&tri, &tmap).unwrap().to_string(), naive_iw.to_string(), "2");
    expect("triangle W_total", tmap.total_weight().to_string(), naive_lines(&tv).values().sum::<u64>().to_string(), "6");

    let a = FiniteScalarSet::from_integers([0, 1, 2]);
    let id = verify_product_identity(&a).unwrap();
    let av = small(&a);
    let d: Vec<i64> = av.iter().flat_map(|x| av.iter().map(move |y| x - y)).collect();
    let s: HashSet<i64> = d.iter().flat_map(|x| d.iter().map(move |y| x * x + y * y)).collect();
    expect("{0,1,2} |D²+D²|", id.sumset_side.len().to_string(), s.len().to_string(), "6");
    if !id.holds {
        failures.push("{0,1,2}: product identity fails".into());
    }

    pass_if(failures.is_empty(), if failures.is_empty() { "all 10 fixtures match".into() } else { failures.join("; ") })
}

/// Point sets for the incidence-ratio regression.
fn st_corpus() -> Vec<(String, PlanarPointSet)> {
    let mut out: Vec<(String, PlanarPointSet)> = (2..=12).map(|n| (format!("grid({n})"), points(FamilySpec::grid(n)))).collect();
    for (i, n) in (20..=200).step_by(20).enumerate() {
        let spec = FamilySpec::RandomPoints { n, range: 15, max_denominator: 2, seed: 100 + i as u64 };
        out.push((spec.to_string(), points(spec)));
    }
    for spec in [
        FamilySpec::Geometric { n: 8, start: 1, ratio: 2 },
        FamilySpec::Gap2 { n1: 3, n2: 4, d1: 1, d2: 10 },
        FamilySpec::RandomInt { n: 12, range: 40, seed: 5 },
    ] {
        let c = FamilySpec::CartesianOf { inner: Box::new(spec) };
        out.push((c.to_string(), points(c)));
    }
    out
}

/// Scalar triples for the `AB + C` regression.
fn abc_corpus() -> Vec<(String, [FiniteScalarSet; 3])> {
    let mut out = Vec::new();
    for n in 2..=32 {
        let a = scalars(FamilySpec::ap(n));
        out.push((format!("ap({n})³"), [a.clone(), a.clone(), a]));
    }
    for n in 2..=12 {
        let g = scalars(FamilySpec::Geometric { n, start: 1, ratio: 2 });
        out.push((format!("geometric({n})³"), [g.clone(), g.clone(), g]));
    }
    for t in 0..50u64 {
        let r = |k: u64| scalars(FamilySpec::RandomInt { n: 16, range: 1000, seed: 3 * t + k });
        out.push((format!("random triple {t}"), [r(0), r(1), r(2)]));
    }
    out
}

fn st_ratios() -> Vec<(String, BigRational)> {
    st_corpus()
        .into_iter()
        .filter_map(|(name, p)| st_report(&p).unwrap().ratio.map(|r| (name, r.hi)))
        .collect()
}

fn abc_ratios() -> Vec<(String, BigRational)> {
    abc_corpus()
        .into_iter()
        .map(|(name, [a, b, c])| (name, abc_lower_report(&a, &b, &c).unwrap().ratio.unwrap().lo))
        .collect()
}

/// `|D² + D²|` and `|D|` for an integer set, by enumeration.
fn brute_thm1(a: &[i64]) -> (usize, usize) {
    let d: HashSet<i64> = a.iter().flat_map(|x| a.iter().map(move |y| x - y)).collect();
    let sq: Vec<i64> = d.iter().map(|x| x * x).collect();
    let s: HashSet<i64> = sq.iter().flat_map(|x| sq.iter().map(move |y| x + y)).collect();
    (s.len(), d.len())
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut thm1_min: Option<(usize, BigRational)> = None;
    for n in 3..=64 {
        let a = scalars(FamilySpec::ap(n));
        let rep = thm1_report(&a, 256).unwrap();
        let (s, d) = brute_thm1(&small(&a));
        let exact = Pow::pow(BigInt::from(s), 10u32) >= Pow::pow(BigInt::from(d), 11u32);
        let Some(Witness::Thm1(chain)) = &rep.witness else { unreachable!() };
        let ratio = rep.ratio.clone().unwrap();
        if rep.lhs != rat(s as i64, 1) || chain.d_size != d || !exact || !chain.ratio_at_least_one || ratio.lo < rat(1, 1) {
            failures.push(format!("thm1 ap({n}): |D²+D²| = {s}, |D| = {d}, ratio ≥ 1 is {exact}"));
        }
        if thm1_min.as_ref().is_none_or(|(_, r)| ratio.lo < *r) {
            thm1_min = Some((n, ratio.lo));
        }
    }
    let c_st = rat(C_ST.0, C_ST.1);
    let (st_name, st_max) = st_ratios().into_iter().max_by(|x, y| x.1.cmp(&y.1)).unwrap();
    if st_max > c_st {
        failures.push(format!("incidence ratio {} at {st_name} exceeds C_ST = {}", show(&st_max), show(&c_st)));
    }
    let abc_floor = rat(ABC_MIN.0, ABC_MIN.1);
    let (abc_name, abc_min) = abc_ratios().into_iter().min_by(|x, y| x.1.cmp(&y.1)).unwrap();
    if abc_min < abc_floor {
        failures.push(format!("abc ratio {} at {abc_name} below floor {}", show(&abc_min), show(&abc_floor)));
    }
    let (tn, tr) = thm1_min.unwrap();
    pass_if(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "thm1 min {} at ap({tn}); I_w/RHS max {} ≤ C_ST {}; abc min {} ≥ {}",
                show(&tr),
                show(&st_max),
                show(&c_st),
                show(&abc_min),
                show(&abc_floor)
            )
        } else {
            failures.join("; ")
        },
    )
}

fn criterion_8() -> Outcome {
    let p = points(FamilySpec::RandomPoints { n: 2000, range: 1000, max_denominator: 1, seed: 8 });
    let start = Instant::now();
    let map = bisector_weight_map(&p).unwrap();
    let (rep, subset) = thm2_report(&p, true).unwrap();
    let bisector_time = start.elapsed();
    let q = points(FamilySpec::RandomPoints { n: 5000, range: 1000, max_denominator: 1, seed: 9 });
    let start = Instant::now();
    let t = isosceles_count(&q).unwrap();
    let iso_time = start.elapsed();
    let ok = bisector_time < Duration::from_secs(30)
        && iso_time < Duration::from_secs(20)
        && subset.weight == map.max_weight()
        && rep.lhs == rat(map.max_weight() as i64, 1);
    pass_if(
        ok,
        format!(
            "N=2000 bisector map + thm2 {:.2} s (< 30 s); N=5000 isosceles count {:.2} s (< 20 s, T = {t})",
            bisector_time.as_secs_f64(),
            iso_time.as_secs_f64()
        ),
    )
}

fn criterion_9() -> Outcome {
    let configs = [
        (FamilySpec::RandomPoints { n: 5, range: 12, max_denominator: 2, seed: 0 }, CheckName::Thm2, 5..=60),
        (FamilySpec::RandomPoints { n: 5, range: 12, max_denominator: 3, seed: 0 }, CheckName::St, 5..=60),
        (FamilySpec::RandomInt { n: 3, range: 200, seed: 0 }, CheckName::Thm1, 3..=24),
        (FamilySpec::RandomInt { n: 3, range: 200, seed: 0 }, CheckName::Hanson, 3..=16),
        (FamilySpec::RandomInt { n: 3, range: 200, seed: 0 }, CheckName::Plunnecke, 3..=16),
        (FamilySpec::RandomInt { n: 3, range: 200, seed: 0 }, CheckName::GuthKatz, 3..=24),
        (FamilySpec::ap(3), CheckName::Abc, 3..=24),
        (FamilySpec::ap(3), CheckName::ProductIdentity, 3..=24),
    ];
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut rows = 0;
    for (family, check, sizes) in configs {
        let cfg = SweepConfig { family, check, sizes, seed: Some(7), options: CheckOptions::default(), timing: false };
        let render = |f| run_sweep(&cfg).render(f).unwrap();
        for fmt in [OutputFormat::Csv, OutputFormat::Json] {
            let a = render(fmt);
            let b = render(fmt);
            let c = single.install(|| render(fmt));
            if a != b || a != c {
                return pass_if(false, format!("sweep {check} over {} differs between runs", cfg.family));
            }
        }
        rows += run_sweep(&cfg).rows.len();
    }
    pass_if(true, format!("8 sweeps, {rows} rows, CSV and JSON byte-identical across reruns and thread counts"))
}

fn freeze() {
    let (st_name, st_max) = st_ratios().into_iter().max_by(|x, y| x.1.cmp(&y.1)).unwrap();
    let (abc_name, abc_min) = abc_ratios().into_iter().min_by(|x, y| x.1.cmp(&y.1)).unwrap();
    println!("C_ST upper bracket {st_max} ≈ {} at {st_name}", show(&st_max));
    println!("abc lower bracket {abc_min} ≈ {} at {abc_name}", show(&abc_min));
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--freeze") {
        freeze();
        return ExitCode::SUCCESS;
    }
    // `cargo test -- --list` and filters from other targets land here too.
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let criteria: [Criterion; 9] = [
        ("triple equivalence of T", criterion_1),
        ("product identity d(A×A) = D² + D²", criterion_2),
        ("inclusion {2}DD ⊆ 2D² − 2D² with certificates", criterion_3),
        ("Plünnecke bounds for m + n ≤ 5", criterion_4),
        ("symmetric subset postcondition", criterion_5),
        ("micro-fixtures", criterion_6),
        ("recorded-ratio regressions", criterion_7),
        ("performance", criterion_8),
        ("sweep determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {} ({:.1} s)", i + 1, o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {}/9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
