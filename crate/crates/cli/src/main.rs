//! `hom2part`: command-line access to constructors, homogeneity and genericity
//! checks, classification, isomorphism, back-and-forth and the census.
//!
//! Exit codes: 0 success / property holds, 1 negative verdict, 2 usage or
//! input error. Verdicts go to stdout as JSON, diagnostics to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use hom2part::{
    are_isomorphic, automorphisms, back_and_forth, canonical_form, check_generic, classify_exact, classify_profile,
    complement_matching_digraph, complete_bipartite_digraph, directed_four_cycle, empty_digraph,
    enumerate::{enumerate_classes, write_jsonl},
    generic_2partite_approx, generic_bipartite_approx, generic_orientation_approx, is_homogeneous_with, m_kappa,
    matching_digraph, uniqueness_demo, verify_theorem_finite, witness_closure, ApproximantSpec, BafTrace, ClassCase,
    Direction, GenericMode, HomogeneityOptions, TwoPartiteDigraph,
};

#[derive(Parser)]
#[command(name = "hom2part", version, about = "Homogeneous 2-partite digraphs")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a catalog structure.
    Gen(GenArgs),
    /// Decide homogeneity.
    CheckHom(HomArgs),
    /// Check a level-t extension property.
    CheckGeneric(GenericArgs),
    /// `check hom` / `check generic`.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Classify a structure.
    Classify(ClassifyArgs),
    /// Side-preserving isomorphism test.
    Iso(IsoArgs),
    /// List automorphisms.
    Aut(AutArgs),
    /// Back-and-forth between two approximants (built or read from files).
    Baf(BafArgs),
    /// Census of homogeneous structures as JSON lines.
    Enum(EnumArgs),
    /// Verify the finite classification against the census.
    Verify(VerifyArgs),
    /// Re-emit a structure as JSON or DOT.
    Convert(ConvertArgs),
}

#[derive(Subcommand)]
enum CheckCommand {
    Hom(HomArgs),
    Generic(GenericArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    #[value(alias = "ltr", alias = "LeftToRight", alias = "left-to-right")]
    Ltr,
    #[value(alias = "rtl", alias = "RightToLeft", alias = "right-to-left")]
    Rtl,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Direction {
        match d {
            DirArg::Ltr => Direction::LeftToRight,
            DirArg::Rtl => Direction::RightToLeft,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Bipartite,
    #[value(name = "2partite", alias = "two-partite")]
    TwoPartite,
    Orientation,
}

impl From<ModeArg> for GenericMode {
    fn from(m: ModeArg) -> GenericMode {
        match m {
            ModeArg::Bipartite => GenericMode::Bipartite,
            ModeArg::TwoPartite => GenericMode::TwoPartite,
            ModeArg::Orientation => GenericMode::Orientation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    what: GenKind,
    /// Output format.
    #[arg(long, visible_alias = "to", value_enum, default_value = "json", global = true)]
    format: Format,
}

#[derive(Subcommand)]
enum GenKind {
    /// Every left vertex joined to every right vertex in one direction.
    Complete {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "ltr")]
        dir: DirArg,
    },
    /// No arcs.
    Empty {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Perfect matching `x_i -- y_i`.
    Matching {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "ltr")]
        dir: DirArg,
    },
    /// Complete bipartite minus a perfect matching.
    ComplementMatching {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "ltr")]
        dir: DirArg,
    },
    /// M_kappa: matching one way, its complement the other way.
    MKappa {
        #[arg(long)]
        kappa: usize,
        #[arg(long, value_enum, default_value = "ltr")]
        dir: DirArg,
    },
    /// The directed 4-cycle x1 -> y1 -> x2 -> y2 -> x1.
    FourCycle,
    /// Level-t generic bipartite approximant, one-way oriented.
    GenericBipartite {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "ltr")]
        dir: DirArg,
    },
    /// Level-t generic 2-partite approximant.
    #[command(name = "generic-2partite")]
    Generic2partite {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Level-t generic orientation approximant.
    GenericOrientation {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Adds witnesses to an input structure until level t holds on its vertices.
    Closure {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    size: usize,
    #[arg(long)]
    level: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Clone)]
struct Input {
    /// Input file (`-` or omitted: standard input).
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct HomArgs {
    #[command(flatten)]
    input: Input,
    /// Check every substructure size (the default).
    #[arg(long, conflicts_with = "max_size")]
    exact: bool,
    /// Only check substructures with at most this many vertices.
    #[arg(long)]
    max_size: Option<usize>,
    /// Disable orbit reduction of domains.
    #[arg(long)]
    no_orbits: bool,
}

#[derive(Args)]
struct GenericArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    level: usize,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: Input,
    /// Exact classification (decides homogeneity); the default without --level.
    #[arg(long, conflicts_with = "level")]
    exact: bool,
    /// Profile classification at this genericity level.
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args)]
struct IsoArgs {
    #[arg(long)]
    in1: PathBuf,
    #[arg(long)]
    in2: PathBuf,
}

#[derive(Args)]
struct AutArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = hom2part::iso::DEFAULT_AUT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BafArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Side size of the built approximants.
    #[arg(long, required_unless_present = "in1")]
    size: Option<usize>,
    /// Genericity level of the built approximants (and default target size).
    #[arg(long)]
    level: Option<usize>,
    #[arg(long, required_unless_present = "in1")]
    seed1: Option<u64>,
    #[arg(long, required_unless_present = "in1")]
    seed2: Option<u64>,
    /// Read the first structure instead of building it.
    #[arg(long, requires = "in2", conflicts_with_all = ["size", "seed1", "seed2"])]
    in1: Option<PathBuf>,
    #[arg(long, requires = "in1")]
    in2: Option<PathBuf>,
    /// Size of the partial isomorphism to build between input files (default: the level).
    #[arg(long, requires = "in1")]
    target: Option<usize>,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    max_x: usize,
    #[arg(long)]
    max_y: usize,
    /// Allow more than 12 cross pairs per size.
    #[arg(long)]
    force: bool,
    /// Emit every isomorphism class (canonical form and representative), not only homogeneous ones.
    #[arg(long)]
    all: bool,
    /// Write JSON lines here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    max_x: usize,
    #[arg(long)]
    max_y: usize,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, visible_alias = "format", value_enum, default_value = "json")]
    to: Format,
}

/// Outcome of a command: the exit code it maps to.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Holds,
    Fails,
}

impl Outcome {
    fn from_bool(holds: bool) -> Outcome {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

fn read_input(input: &Input) -> anyhow::Result<TwoPartiteDigraph> {
    let (text, name) = match &input.input {
        Some(path) if path != Path::new("-") => (
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?,
            path.display().to_string(),
        ),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).context("cannot read standard input")?;
            (text, "<stdin>".to_string())
        }
    };
    TwoPartiteDigraph::from_json(&text).map_err(|e| anyhow!("{name}: {e}"))
}

fn read_path(path: &Path) -> anyhow::Result<TwoPartiteDigraph> {
    read_input(&Input { input: Some(path.to_path_buf()) })
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn emit_digraph(d: &TwoPartiteDigraph, format: Format) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", d.to_json())?,
        Format::Dot => write!(out, "{}", d.to_dot())?,
    }
    Ok(())
}

fn gen(args: GenArgs) -> anyhow::Result<Outcome> {
    let spec = |s: &SpecArgs| ApproximantSpec::new(s.size, s.level, s.seed);
    let d = match args.what {
        GenKind::Complete { m, n, dir } => complete_bipartite_digraph(m, n, dir.into()),
        GenKind::Empty { m, n } => empty_digraph(m, n),
        GenKind::Matching { n, dir } => matching_digraph(n, dir.into()),
        GenKind::ComplementMatching { n, dir } => complement_matching_digraph(n, dir.into()),
        GenKind::MKappa { kappa, dir } => m_kappa(kappa, dir.into())?,
        GenKind::FourCycle => directed_four_cycle(),
        GenKind::GenericBipartite { spec: s, dir } => generic_bipartite_approx(&spec(&s), dir.into())?,
        GenKind::Generic2partite { spec: s } => generic_2partite_approx(&spec(&s))?,
        GenKind::GenericOrientation { spec: s } => generic_orientation_approx(&spec(&s))?,
        GenKind::Closure { input, mode, level, cap } => witness_closure(&read_input(&input)?, mode.into(), level, cap)?,
    };
    emit_digraph(&d, args.format)?;
    Ok(Outcome::Holds)
}

fn check_hom(args: HomArgs) -> anyhow::Result<Outcome> {
    let d = read_input(&args.input)?;
    let options = HomogeneityOptions {
        max_size: if args.exact { None } else { args.max_size },
        orbit_reduction: !args.no_orbits,
        ..HomogeneityOptions::default()
    };
    let verdict = is_homogeneous_with(&d, &options)?;
    emit(&verdict)?;
    Ok(Outcome::from_bool(verdict.holds))
}

fn check_generic_cmd(args: GenericArgs) -> anyhow::Result<Outcome> {
    let d = read_input(&args.input)?;
    let report = check_generic(&d, args.mode.into(), args.level);
    emit(&report)?;
    Ok(Outcome::from_bool(report.holds))
}

fn classify(args: ClassifyArgs) -> anyhow::Result<Outcome> {
    let d = read_input(&args.input)?;
    let label = match args.level {
        Some(t) if !args.exact => classify_profile(&d, t),
        _ => classify_exact(&d)?,
    };
    emit(&label)?;
    let negative = matches!(label.case, ClassCase::NotHomogeneous { .. } | ClassCase::Inconclusive { .. });
    Ok(Outcome::from_bool(!negative))
}

fn iso(args: IsoArgs) -> anyhow::Result<Outcome> {
    let (a, b) = (read_path(&args.in1)?, read_path(&args.in2)?);
    let map = are_isomorphic(&a, &b);
    emit(&json!({
        "isomorphic": map.is_some(),
        "map": map,
        "canonical1": canonical_form(&a),
        "canonical2": canonical_form(&b),
    }))?;
    Ok(Outcome::from_bool(map.is_some()))
}

fn aut(args: AutArgs) -> anyhow::Result<Outcome> {
    let d = read_input(&args.input)?;
    let group = automorphisms(&d, args.cap)?;
    emit(&json!({ "count": group.len(), "automorphisms": group }))?;
    Ok(Outcome::Holds)
}

fn emit_trace(trace: &BafTrace) -> anyhow::Result<()> {
    for (k, step) in trace.steps.iter().enumerate() {
        emit(
            &json!({ "step": k, "direction": step.direction, "vertex": step.vertex, "requirement": step.requirement, "witness": step.witness }),
        )?;
    }
    Ok(())
}

fn baf(args: BafArgs) -> anyhow::Result<Outcome> {
    let mode: GenericMode = args.mode.into();
    if let (Some(p1), Some(p2)) = (&args.in1, &args.in2) {
        let (a, b) = (read_path(p1)?, read_path(p2)?);
        let target =
            args.target.or(args.level).ok_or_else(|| anyhow!("--target or --level is required with --in1/--in2"))?;
        return match back_and_forth(&a, &b, mode, target, None) {
            Ok(trace) => {
                emit_trace(&trace)?;
                emit(&json!({ "success": true, "result": trace.result }))?;
                Ok(Outcome::Holds)
            }
            Err(e @ hom2part::Error::InsufficientGenericity { .. }) => {
                eprintln!("back-and-forth stopped: {e}");
                emit(&json!({ "success": false, "failure": e.to_string() }))?;
                Ok(Outcome::Fails)
            }
            Err(e) => Err(e.into()),
        };
    }
    let size = args.size.expect("clap requires --size");
    let level = args.level.ok_or_else(|| anyhow!("--level is required when building approximants"))?;
    let (s1, s2) = (args.seed1.expect("clap requires --seed1"), args.seed2.expect("clap requires --seed2"));
    let report = uniqueness_demo(size, level, s1, s2, mode)?;
    if let Some(trace) = &report.trace {
        emit_trace(trace)?;
    }
    if let Some(failure) = &report.failure {
        eprintln!("back-and-forth failed: {failure}");
    }
    emit(&json!({
        "success": report.success,
        "result": report.trace.as_ref().map(|t| &t.result),
        "mode": report.mode,
        "side_size": report.side_size,
        "target_size": report.target_size,
        "seeds": report.seeds,
        "verified_level": report.verified_level,
        "failure": report.failure,
    }))?;
    Ok(Outcome::from_bool(report.success))
}

fn enumerate(args: EnumArgs) -> anyhow::Result<Outcome> {
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    if args.all {
        for m in 0..=args.max_x {
            for n in 0..=args.max_y {
                for form in enumerate_classes(m, n, args.force)? {
                    let rep = form.to_digraph()?;
                    serde_json::to_writer(&mut sink, &json!({ "canonical": form, "representative": rep }))?;
                    writeln!(sink)?;
                }
            }
        }
    } else {
        let census = hom2part::census_homogeneous(args.max_x, args.max_y, args.force)?;
        eprintln!("{} homogeneous structures", census.len());
        write_jsonl(&census, &mut sink)?;
    }
    sink.flush()?;
    Ok(Outcome::Holds)
}

fn verify(args: VerifyArgs) -> anyhow::Result<Outcome> {
    let report = verify_theorem_finite(args.max_x, args.max_y, args.force)?;
    for d in &report.discrepancies {
        eprintln!("discrepancy ({}): {}", d.kind, d.detail);
    }
    emit(&report)?;
    Ok(Outcome::from_bool(report.passed))
}

fn convert(args: ConvertArgs) -> anyhow::Result<Outcome> {
    let d = read_input(&args.input)?;
    emit_digraph(&d, args.to)?;
    Ok(Outcome::Holds)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::CheckHom(a) | Command::Check { what: CheckCommand::Hom(a) } => check_hom(a),
        Command::CheckGeneric(a) | Command::Check { what: CheckCommand::Generic(a) } => check_generic_cmd(a),
        Command::Classify(a) => classify(a),
        Command::Iso(a) => iso(a),
        Command::Aut(a) => aut(a),
        Command::Baf(a) => baf(a),
        Command::Enum(a) => enumerate(a),
        Command::Verify(a) => verify(a),
        Command::Convert(a) => convert(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
