use std::path::PathBuf;
use std::process::ExitCode;

use bolops::algebra::Algebra;
use bolops::arith::{fmt_rational, int, parse_rational};
use bolops::crosscheck::crosscheck;
use bolops::oracle::brute_force_singular;
use bolops::report::Report;
use bolops::singular::{classify, degree_patterns, ClassifyError, Config};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod golden;

const EXIT_INVALID: u8 = 1;
const EXIT_NONLINEAR: u8 = 2;
const EXIT_DEPTH: u8 = 3;
const EXIT_GOLDEN: u8 = 4;

#[derive(Parser)]
#[command(name = "bolops", version, about = "Singular vectors in induced modules over vect(a|b) and pgl(a+1|b)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify singular vectors of one degree with symbolic highest weight.
    Classify(ClassifyArgs),
    /// Brute-force singular dimension at a numeric highest weight.
    Oracle(OracleArgs),
    /// Structure checks, module axioms and golden case tables.
    Selftest {
        /// Structure checks only.
        #[arg(long)]
        quick: bool,
        /// Directory with golden tables (also BOLOPS_GOLDEN_DIR).
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Superdimension a b of the coordinate superspace.
    #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
    sdim: Vec<usize>,
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value = "pgl")]
    algebra: Algebra,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    /// Longest lowering word allowed in the ansatz.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value = "markdown")]
    format: Format,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Oracle samples per case for the crosscheck, each on and off the case variety; 0 skips it.
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Impose g_2 invariance for vect.
    #[arg(long)]
    include_g2: bool,
    /// Also classify degrees 1..degree and fit the weights as affine functions of the degree.
    #[arg(long)]
    patterns: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Highest weight as comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Use the Verma module instead of its irreducible quotient.
    #[arg(long)]
    verma: bool,
}

fn config(c: &Common) -> Config {
    Config::new(c.sdim[0], c.sdim[1], c.degree, c.algebra)
}

fn classify_error(e: &ClassifyError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        ClassifyError::InvalidConfig(_) => EXIT_INVALID,
        ClassifyError::Solve { .. } => EXIT_NONLINEAR,
        ClassifyError::DepthOverflow { .. } => EXIT_DEPTH,
    })
}

fn run_classify(args: &ClassifyArgs) -> ExitCode {
    let mut cfg = config(&args.common);
    cfg.depth = args.depth;
    cfg.include_g2 = args.include_g2;
    let c = match classify(&cfg) {
        Ok(c) => c,
        Err(e) => return classify_error(&e),
    };
    let mut report = Report::new(&c, args.seed);
    if args.samples > 0 {
        report = report.with_crosscheck(&crosscheck(&c, args.samples, args.seed));
    }
    if args.patterns {
        match degree_patterns(&cfg, cfg.degree) {
            Ok(p) => report = report.with_patterns(&p),
            Err(e) => return classify_error(&e),
        }
    }
    match args.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Markdown => print!("{}", report.to_markdown()),
    }
    ExitCode::SUCCESS
}

fn run_oracle(args: &OracleArgs) -> ExitCode {
    let cfg = config(&args.common);
    if let Err(e) = cfg.validate() {
        return classify_error(&e);
    }
    let weight: Option<Vec<_>> = args.weight.split(',').map(parse_rational).collect();
    let weight = match weight {
        Some(w) if w.len() == cfg.n() => w,
        _ => {
            eprintln!("error: --weight needs {} comma-separated rationals p or p/q", cfg.n());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let r = brute_force_singular(cfg.a, cfg.b, cfg.degree, &weight, cfg.algebra, !args.verma);
    println!("weight: ({})", weight.iter().map(fmt_rational).collect::<Vec<_>>().join(", "));
    println!("module: {}", if args.verma { "Verma" } else { "irreducible quotient" });
    println!("dimension: {}", r.dimension());
    for (offset, d) in &r.by_weight {
        let wf: Vec<String> = weight.iter().zip(offset).map(|(w, o)| fmt_rational(&(w + int((*o).into())))).collect();
        println!("  wht(f) = ({}): {d}", wf.join(", "));
    }
    ExitCode::SUCCESS
}

fn run_selftest(quick: bool, dir: Option<PathBuf>) -> ExitCode {
    for (a, b) in [(0, 2), (0, 3), (2, 0), (1, 1)] {
        if let Err(e) = bolops::algebra::standard_basis(a, b).verify_structure() {
            eprintln!("structure ({a}|{b}): {e}");
            return ExitCode::FAILURE;
        }
        if let Err(e) = bolops::checks::super_jacobi(a, b) {
            eprintln!("({a}|{b}): {e}");
            return ExitCode::FAILURE;
        }
    }
    println!("structure: ok");
    if quick {
        return ExitCode::SUCCESS;
    }
    for (a, b) in [(0, 2), (0, 3), (2, 0), (1, 1)] {
        let checks = bolops::checks::module_axiom(a, b, 50, 1).and_then(|_| bolops::checks::weight_additivity(a, b));
        if let Err(e) = checks {
            eprintln!("({a}|{b}): {e}");
            return ExitCode::FAILURE;
        }
    }
    println!("module axioms: ok");
    let dir = dir.or_else(|| std::env::var_os("BOLOPS_GOLDEN_DIR").map(PathBuf::from)).unwrap_or_else(golden::default_dir);
    match golden::compare_all(&dir) {
        Ok(n) => {
            println!("golden tables: {n} ok");
            ExitCode::SUCCESS
        }
        Err(golden::GoldenError::Mismatch(diffs)) => {
            for d in diffs {
                eprintln!("{d}");
            }
            ExitCode::from(EXIT_GOLDEN)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_GOLDEN)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.cmd {
        Cmd::Classify(a) => run_classify(a),
        Cmd::Oracle(a) => run_oracle(a),
        Cmd::Selftest { quick, golden_dir } => run_selftest(*quick, golden_dir.clone()),
    }
}
