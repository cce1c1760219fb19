//! `isodist` command-line front end.
//!
//! Exit status: 0 when every constant-free verdict holds, 1 when one is
//! violated (or a verification property fails), 2 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use isodist::harness::{
    run_check, run_sweep, verify_corpus, Caps, CheckName, CheckOptions, Input, OutputFormat, SweepConfig,
    VerifyConfig,
};
use isodist::incidence::{isosceles_count, isosceles_count_brute};
use isodist::parse::{format_point_set, format_scalar_set, parse_point_set, parse_scalar_set};
use isodist::planar::squared_distance_set;
use isodist::report::{symmetry_csv, symmetry_json_value, to_json, write_csv_rows};
use isodist::{bisector, generate_family, Family, FamilySpec};

const OUT_DIR_ENV: &str = "ISODIST_OUT_DIR";

#[derive(Parser)]
#[command(name = "isodist", version, about = "Exact experiments on distinct distances and bisector symmetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Set or point file; one element (or `x y` pair) per line.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file. Defaults to `$ISODIST_OUT_DIR/<command>.<ext>` when that
    /// variable is set, standard output otherwise.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for random families (replaces the seed in `--family`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Count the zero distance `p = q` as a distance.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    include_zero_distance: bool,
    /// Keep points of `P` lying on the symmetry axis in the symmetric subset.
    #[arg(long, global = true, default_value_t = false, action = clap::ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    include_fixed_points: bool,
    /// Overrides the size cap of the command (prints a warning).
    #[arg(long, global = true)]
    max_size: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Kind::Auto)]
    kind: Kind,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    fn core(self) -> OutputFormat {
        match self {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

/// How to read `--input`: `auto` picks points when the first data line has
/// two tokens.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Auto,
    Scalars,
    Points,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize a family member as a set or point file.
    Gen {
        /// Family descriptor such as `ap(n=8)`, `grid(n=4)`,
        /// `random_int(n=10,range=50)`, `cartesian_of(ap(n=3))`.
        #[arg(long)]
        family: String,
    },
    /// Squared-distance set of a point set (a scalar set `A` means `A × A`).
    Distset {
        #[arg(long)]
        family: Option<String>,
    },
    /// Isosceles triple count `T`.
    Isosceles {
        #[arg(long)]
        family: Option<String>,
        /// Also run the cubic oracle and report both counts.
        #[arg(long)]
        brute: bool,
    },
    /// Largest reflection-symmetric subset.
    Symmetry {
        #[arg(long)]
        family: Option<String>,
    },
    /// Run one bound check.
    Check {
        name: String,
        #[arg(long)]
        family: Option<String>,
        /// `m` for plunnecke (requires `--n`); omit both for all `m + n ≤ 5`.
        #[arg(long, requires = "n")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        n: Option<usize>,
        /// `B` for abc (defaults to the input set).
        #[arg(long)]
        b: Option<PathBuf>,
        /// `C` for abc (defaults to the input set).
        #[arg(long)]
        c: Option<PathBuf>,
    },
    /// Run one check over a family at a range of sizes.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        check: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Add a wall-time column (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Seeded oracle corpus over every invariant.
    Verify {
        /// Small trial counts.
        #[arg(long)]
        smoke: bool,
        #[doc(hidden)]
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn looks_planar(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().count() == 2)
}

fn load_input(common: &Common, family: Option<&str>) -> Result<Input> {
    match (family, &common.input) {
        (Some(_), Some(_)) => bail!("give either --family or --input, not both"),
        (Some(desc), None) => {
            let mut spec: FamilySpec = desc.parse()?;
            if let Some(seed) = common.seed {
                spec = spec.with_seed(seed);
            }
            Ok(generate_family(&spec)?.into())
        }
        (None, Some(path)) => {
            let text = read(path)?;
            let planar = match common.kind {
                Kind::Auto => looks_planar(&text),
                Kind::Points => true,
                Kind::Scalars => false,
            };
            let input = if planar {
                Input::Points(parse_point_set(&text)?)
            } else {
                Input::Scalars(parse_scalar_set(&text)?)
            };
            Ok(input)
        }
        (None, None) => bail!("no input: pass --input <path> or --family <descriptor>"),
    }
}

fn points(input: Input) -> Result<isodist::PlanarPointSet> {
    Ok(match input {
        Input::Points(p) => p,
        Input::Scalars(a) => isodist::planar::cartesian_square(&a)?,
    })
}

fn emit(common: &Common, command: &str, body: &str) -> Result<()> {
    let path = match (&common.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            let dir = PathBuf::from(dir);
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            Some(dir.join(format!("{command}.{}", common.format.ext())))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => fs::write(&p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn caps(common: &Common, which: impl Fn(&mut Caps) -> &mut usize) -> Caps {
    let mut caps = Caps::default();
    if let Some(n) = common.max_size {
        let slot = which(&mut caps);
        eprintln!("warning: size cap overridden: {} -> {n}", *slot);
        *slot = n;
    }
    caps
}

fn options(common: &Common, caps: Caps) -> CheckOptions {
    CheckOptions {
        include_zero: common.include_zero_distance,
        include_fixed_points: common.include_fixed_points,
        caps,
        ..CheckOptions::default()
    }
}

fn run(cli: Cli) -> Result<i32> {
    let common = &cli.common;
    let fmt = common.format;
    match cli.command {
        Command::Gen { family } => {
            let mut spec: FamilySpec = family.parse()?;
            if let Some(seed) = common.seed {
                spec = spec.with_seed(seed);
            }
            let body = match (generate_family(&spec)?, fmt) {
                (Family::Scalars(a), Format::Csv) => format_scalar_set(&a),
                (Family::Points(p), Format::Csv) => format_point_set(&p),
                (Family::Scalars(a), Format::Json) => to_json(&serde_json::json!({ "family": spec, "set": a }))?,
                (Family::Points(p), Format::Json) => {
                    let pts: Vec<String> = p.iter().map(ToString::to_string).collect();
                    to_json(&serde_json::json!({ "family": spec, "points": pts }))?
                }
            };
            emit(common, "gen", &body)?;
            Ok(0)
        }
        Command::Distset { family } => {
            let p = points(load_input(common, family.as_deref())?)?;
            let d = squared_distance_set(&p, common.include_zero_distance)?;
            let body = match fmt {
                Format::Csv => write_csv_rows(
                    &["squared_distance"],
                    d.squared_distances.iter().map(|x| vec![x.to_string()]),
                )?,
                Format::Json => to_json(&d)?,
            };
            emit(common, "distset", &body)?;
            Ok(0)
        }
        Command::Isosceles { family, brute } => {
            let p = points(load_input(common, family.as_deref())?)?;
            let t = isosceles_count(&p)?;
            let brute = if brute {
                let cap = caps(common, |c| &mut c.brute_points).brute_points;
                Some(isosceles_count_brute(&p, cap)?)
            } else {
                None
            };
            let body = match fmt {
                Format::Csv => {
                    let mut header = vec!["N", "T"];
                    let mut row = vec![p.len().to_string(), t.to_string()];
                    if let Some(b) = brute {
                        header.push("T_brute");
                        row.push(b.to_string());
                    }
                    write_csv_rows(&header, [row])?
                }
                Format::Json => to_json(&serde_json::json!({ "N": p.len(), "T": t, "T_brute": brute }))?,
            };
            emit(common, "isosceles", &body)?;
            Ok(match brute {
                Some(b) if b != t => 1,
                _ => 0,
            })
        }
        Command::Symmetry { family } => {
            let p = points(load_input(common, family.as_deref())?)?;
            let cap = caps(common, |c| &mut c.bisector_points).bisector_points;
            if p.len() > cap {
                return Err(isodist::Error::CapExceeded { what: "bisector point set", size: p.len(), cap }.into());
            }
            let s = bisector::extract_symmetric_subset(&p, common.include_fixed_points)?;
            let body = match fmt {
                Format::Csv => symmetry_csv(&s)?,
                Format::Json => to_json(&symmetry_json_value(&s))?,
            };
            emit(common, "symmetry", &body)?;
            Ok(0)
        }
        Command::Check { name, family, m, n, b, c } => {
            let check: CheckName = name.parse()?;
            let caps = match check {
                CheckName::Thm1 => caps(common, |c| &mut c.thm1_set),
                CheckName::Thm2 | CheckName::St => caps(common, |c| &mut c.bisector_points),
                _ => Caps::default(),
            };
            let input = load_input(common, family.as_deref())?;
            let mut opts = options(common, caps);
            opts.plunnecke = m.zip(n);
            if b.is_some() || c.is_some() {
                let base = match &input {
                    Input::Scalars(a) => a.clone(),
                    Input::Points(_) => bail!("abc needs a scalar input set"),
                };
                let load = |p: &Option<PathBuf>| -> Result<_> {
                    match p {
                        Some(p) => Ok(parse_scalar_set(&read(p)?)?),
                        None => Ok(base.clone()),
                    }
                };
                opts.abc_sets = Some((load(&b)?, load(&c)?));
            }
            let outcome = run_check(check, &input, &opts)?;
            emit(common, &format!("check-{check}"), &outcome.render(fmt.core())?)?;
            Ok(outcome.exit_code())
        }
        Command::Sweep { family, check, from, to, timing } => {
            if from > to {
                bail!("empty size range {from}..={to}");
            }
            let check: CheckName = check.parse()?;
            let caps = match check {
                CheckName::Thm1 => caps(common, |c| &mut c.thm1_set),
                CheckName::Thm2 | CheckName::St => caps(common, |c| &mut c.bisector_points),
                _ => Caps::default(),
            };
            let cfg = SweepConfig {
                family: family.parse()?,
                check,
                sizes: from..=to,
                seed: common.seed,
                options: options(common, caps),
                timing,
            };
            let report = run_sweep(&cfg);
            emit(common, &format!("sweep-{check}"), &report.render(fmt.core())?)?;
            Ok(i32::from(report.violated()))
        }
        Command::Verify { smoke, inject_fault } => {
            let seed = common.seed.unwrap_or(0);
            let mut cfg = if smoke { VerifyConfig::smoke(seed) } else { VerifyConfig { seed, ..VerifyConfig::default() } };
            if let Some(n) = common.max_size {
                cfg.max_points = cfg.max_points.min(n);
                cfg.max_extraction_points = cfg.max_extraction_points.min(n);
                cfg.max_identity_set = cfg.max_identity_set.min(n);
                cfg.max_hanson_set = cfg.max_hanson_set.min(n);
                cfg.max_plunnecke_set = cfg.max_plunnecke_set.min(n);
            }
            cfg.inject_fault = inject_fault;
            let summary = verify_corpus(&cfg);
            emit(common, "verify", &summary.render(fmt.core())?)?;
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
