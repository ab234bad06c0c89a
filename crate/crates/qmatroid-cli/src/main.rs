//! Command-line workbench for q-matroids.
//!
//! Loads matroid spec files (JSON), runs the requested computation, and
//! prints the result to stdout in the requested format. Run metadata such as
//! wall time goes to stderr, so stdout is byte-identical across runs for the
//! same inputs, seed and format, regardless of shard count.
//!
//! Exit codes: 0 success; 1 input error; 2 a checked property failed to hold
//! (axiom violation, representation mismatch, no equivalence found); 3 the
//! wall-clock budget was exhausted.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use qmatroid::census::{census, verify_representation};
use qmatroid::decompose::{decompose, equivalence_search, EquivalenceOutcome};
use qmatroid::dsum::{direct_sum, SumStrategy};
use qmatroid::field::create_field;
use qmatroid::matroid::CheckMode;
use qmatroid::spec::{
    census_json, verification_json, DecompositionDto, EquivalenceDto, FamilyDto, MatroidSpec,
    RankedRows, SubspaceSpec,
};
use qmatroid::subspace::total_subspaces;
use qmatroid::zflats::{compute_zflats, CyclicFlatFamily};
use qmatroid::{Budget, Error, QMatroid, Result};

#[derive(Parser)]
#[command(name = "qmatroid", version, about = "Workbench for q-matroids over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Parallel shards for whole-lattice scans (default: machine parallelism)
    #[arg(long, global = true)]
    shards: Option<u32>,

    /// Wall-clock budget in milliseconds
    #[arg(long, global = true)]
    budget_ms: Option<u64>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for sampled axiom checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Direct-sum evaluation strategy
    #[arg(long, global = true, value_enum, default_value_t = Strategy::Zbased)]
    strategy: Strategy,

    /// Disable the per-oracle rank memo cache
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of one subspace (given as a subspace JSON file)
    Rank { spec: PathBuf, subspace: PathBuf },
    /// Cyclic flats with ranks and Hasse cover edges
    Zflats { spec: PathBuf },
    /// Count flats, cyclic spaces, cyclic flats, independent and dependent
    /// spaces, circuits and bases over the whole lattice
    Census { spec: PathBuf },
    /// Audit the rank axioms (bounds, monotonicity, submodularity)
    Axioms { spec: PathBuf },
    /// Dual matroid, exported as a cyclic-flat spec
    Dual { spec: PathBuf },
    /// Direct sum of two or more specs, exported as a cyclic-flat spec
    Dsum {
        #[arg(required = true, num_args = 2..)]
        specs: Vec<PathBuf>,
    },
    /// Split off trivial and free parts and decompose the rest into
    /// irreducible components
    Decompose { spec: PathBuf },
    /// Search for a linear isomorphism carrying one matroid onto the other
    Equiv { spec1: PathBuf, spec2: PathBuf },
    /// Verify a spec against a representation (a representable spec)
    VerifyRep { spec: PathBuf, g_spec: PathBuf },
    /// Cover graph of the cyclic-flat lattice (DOT with --format dot)
    Hasse { spec: PathBuf },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "text",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Naive,
    Zbased,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            emit(&e.to_string());
            std::process::exit(0);
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", serde_json::json!({ "code": "usage", "message": msg }));
            std::process::exit(1);
        }
    };
    match run(&cli) {
        Ok((payload, code)) => {
            emit(&payload);
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "code": e.code(), "message": e.to_string() }));
            let code = match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 1,
            };
            std::process::exit(code);
        }
    }
}

/// Writes the whole payload at once; a consumer that closed the pipe early
/// (e.g. `head`) is not an error.
fn emit(payload: &str) {
    let mut stdout = std::io::stdout().lock();
    let outcome = stdout.write_all(payload.as_bytes()).and_then(|()| stdout.flush());
    if let Err(e) = outcome {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("{}", serde_json::json!({ "code": "io", "message": e.to_string() }));
            std::process::exit(1);
        }
    }
}

/// Runs one command, returning the stdout payload and the exit code.
fn run(cli: &Cli) -> Result<(String, i32)> {
    let budget = Budget::from_opt_ms(cli.budget_ms);
    let strategy = match cli.strategy {
        Strategy::Naive => SumStrategy::Naive,
        Strategy::Zbased => SumStrategy::ZBased,
    };
    let build = |path: &Path| -> Result<QMatroid> {
        let m = MatroidSpec::load(path)?.build(strategy, &budget)?;
        if cli.no_cache {
            m.set_cache_enabled(false);
        }
        Ok(m)
    };

    match &cli.command {
        Command::Rank { spec, subspace } => {
            let m = build(spec)?;
            let text = std::fs::read_to_string(subspace)
                .map_err(|e| Error::Io(format!("{}: {e}", subspace.display())))?;
            let v = SubspaceSpec::from_json(&text)?.build()?;
            let r = m.rank(&v)?;
            let payload = match cli.format {
                Format::Json => json_block(&serde_json::json!({ "dim": v.dim(), "rank": r })),
                Format::Text => format!("{r}\n"),
                other => return Err(unsupported(other)),
            };
            Ok((payload, 0))
        }
        Command::Zflats { spec } => {
            let m = build(spec)?;
            let fam = compute_zflats(&m, &budget)?;
            let payload = match cli.format {
                Format::Json => json_block(&FamilyDto::of(&fam)),
                Format::Dot => fam.export_hasse(),
                Format::Text => family_text(&fam),
                other => return Err(unsupported(other)),
            };
            Ok((payload, 0))
        }
        Command::Census { spec } => {
            let m = build(spec)?;
            let report = census(&m, shards_or_parallelism(cli.shards), &budget)?;
            eprintln!(
                "{}",
                serde_json::json!({ "elapsed_ms": report.elapsed_ms, "shards": report.shards })
            );
            let payload = match cli.format {
                Format::Json => format!("{}\n", census_json(&report)),
                Format::Csv => format!("{}\n", report.csv_row()),
                Format::Text => format!(
                    "flats {}\ncyclic {}\ncyclic_flats {}\nindependent {}\ndependent {}\ncircuits {}\nbases {}\n",
                    report.flats,
                    report.cyclic,
                    report.cyclic_flats,
                    report.independent,
                    report.dependent,
                    report.circuits,
                    report.bases
                ),
                other => return Err(unsupported(other)),
            };
            Ok((payload, 0))
        }
        Command::Axioms { spec } => {
            let m = build(spec)?;
            // Small lattices are checked exhaustively; larger ones get a
            // seed-determined sample of subspace pairs.
            let exhaustive = total_subspaces(m.q() as u64, m.n()) <= 4096;
            let mode = if exhaustive {
                CheckMode::Exhaustive
            } else {
                CheckMode::Sampled { pairs: 20_000, seed: cli.seed }
            };
            let report = m.axiom_check(mode, &budget)?;
            let violation = report.violation.as_ref().map(|v| v.to_string());
            let payload = match cli.format {
                Format::Json => json_block(&serde_json::json!({
                    "checked": report.checked,
                    "mode": if exhaustive { "exhaustive" } else { "sampled" },
                    "passed": report.passed(),
                    "violation": violation,
                })),
                Format::Text => match &violation {
                    None => format!("passed (checked {})\n", report.checked),
                    Some(v) => format!("FAILED: {v} (checked {})\n", report.checked),
                },
                other => return Err(unsupported(other)),
            };
            Ok((payload, if report.passed() { 0 } else { 2 }))
        }
        Command::Dual { spec } => {
            let m = build(spec)?.dual();
            if cli.no_cache {
                m.set_cache_enabled(false);
            }
            Ok((matroid_as_zdefined(&m, cli.format, &budget)?, 0))
        }
        Command::Dsum { specs } => {
            let mut parts = specs.iter().map(|p| build(p));
            let first = parts.next().expect("clap enforces at least two specs")?;
            let sum =
                parts.try_fold(first, |acc, next| direct_sum(&acc, &next?, strategy, &budget))?;
            Ok((matroid_as_zdefined(&sum, cli.format, &budget)?, 0))
        }
        Command::Decompose { spec } => {
            let m = build(spec)?;
            let report = decompose(&m, &budget)?;
            let payload = match cli.format {
                Format::Json => json_block(&DecompositionDto::of(&report, &budget)?),
                Format::Text => format!("{}\n", report.summary()),
                other => return Err(unsupported(other)),
            };
            Ok((payload, 0))
        }
        Command::Equiv { spec1, spec2 } => {
            let m1 = build(spec1)?;
            let m2 = build(spec2)?;
            let outcome = equivalence_search(&m1, &m2, &budget)?;
            let found = matches!(outcome, EquivalenceOutcome::Found(_));
            let payload = match cli.format {
                Format::Json => json_block(&EquivalenceDto::of(&outcome)),
                Format::Text => match &outcome {
                    EquivalenceOutcome::Found(alpha) => format!(
                        "equivalent {}\n",
                        serde_json::to_string(&alpha.rows()).expect("rows serialize")
                    ),
                    EquivalenceOutcome::ExhaustedNone { candidates } => {
                        format!("inequivalent after {candidates} candidates\n")
                    }
                },
                other => return Err(unsupported(other)),
            };
            Ok((payload, if found { 0 } else { 2 }))
        }
        Command::VerifyRep { spec, g_spec } => {
            let m = build(spec)?;
            let gspec = MatroidSpec::load(g_spec)?;
            let MatroidSpec::Representable { q, ext, g } = &gspec else {
                return Err(Error::BadSpec(format!(
                    "{} must be a representable spec",
                    g_spec.display()
                )));
            };
            if *q != m.q() {
                return Err(Error::GroundMismatch(format!(
                    "representation is over GF({q}), matroid over GF({})",
                    m.q()
                )));
            }
            let field = create_field(ext.p, ext.m, ext.modulus.as_deref())?;
            let rows = g
                .iter()
                .map(|row| row.iter().map(|s| field.parse_element(s)).collect())
                .collect::<Result<Vec<Vec<_>>>>()?;
            let report = verify_representation(&m, &field, &rows, &budget)?;
            let payload = match cli.format {
                Format::Json => format!("{}\n", verification_json(&report)),
                Format::Text => match &report.mismatch {
                    None => format!("ok checked={}\n", report.checked),
                    Some((rows, want, got)) => format!(
                        "mismatch rows={} expected={want} got={got} checked={}\n",
                        serde_json::to_string(rows).expect("rows serialize"),
                        report.checked
                    ),
                },
                other => return Err(unsupported(other)),
            };
            Ok((payload, if report.passed() { 0 } else { 2 }))
        }
        Command::Hasse { spec } => {
            let m = build(spec)?;
            let fam = compute_zflats(&m, &budget)?;
            let payload = match cli.format {
                Format::Dot => fam.export_hasse(),
                Format::Json => json_block(&FamilyDto::of(&fam)),
                Format::Text => {
                    let mut out = String::new();
                    for (lo, hi) in fam.covers() {
                        let _ = writeln!(out, "z{lo} -> z{hi}");
                    }
                    out
                }
                other => return Err(unsupported(other)),
            };
            Ok((payload, 0))
        }
    }
}

/// Exports a computed oracle as a loadable cyclic-flat spec. Oracles that
/// already carry their cyclic flats (z-based sums) skip the lattice scan.
fn matroid_as_zdefined(m: &QMatroid, format: Format, budget: &Budget) -> Result<String> {
    let spec = match m.defining_flats() {
        Some(flats) => MatroidSpec::Zdefined {
            q: m.q(),
            n: m.n(),
            flats: flats
                .iter()
                .map(|(z, r)| RankedRows { rows: z.basis_rows(), rank: *r })
                .collect(),
        },
        None => MatroidSpec::from_matroid(m, budget)?,
    };
    match format {
        Format::Json => Ok(format!("{}\n", spec.to_json())),
        Format::Text => {
            let MatroidSpec::Zdefined { q, n, flats } = &spec else { unreachable!() };
            Ok(format!("zdefined q={q} n={n} flats={}\n", flats.len()))
        }
        other => Err(unsupported(other)),
    }
}

fn family_text(fam: &CyclicFlatFamily) -> String {
    let mut out = format!("members: {}\n", fam.len());
    for (i, (z, r)) in fam.members().iter().enumerate() {
        let _ = writeln!(out, "z{i}: dim {}, rank {r}, {z:?}", z.dim());
    }
    let covers: Vec<String> = fam.covers().iter().map(|(lo, hi)| format!("z{lo}<z{hi}")).collect();
    let _ = writeln!(out, "covers: {}", covers.join(" "));
    out
}

fn json_block<T: serde::Serialize>(value: &T) -> String {
    format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize"))
}

fn shards_or_parallelism(shards: Option<u32>) -> u32 {
    shards.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|p| p.get() as u32).unwrap_or(1)
    })
}

fn unsupported(format: Format) -> Error {
    Error::BadSpec(format!("format '{}' is not supported for this command", format.name()))
}
