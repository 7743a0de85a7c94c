mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use resultant_forge::linalg::DetStrategy;

/// Exact resultant elimination and the verification runs built on it.
#[derive(Parser, Debug)]
#[command(name = "resultant-forge", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Determinant algorithm for Sylvester matrices.
    #[arg(long, global = true, value_enum, default_value_t = DetArg::Auto)]
    pub det: DetArg,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Polynomials above this many terms are reported as a digest.
    #[arg(long, global = true, default_value_t = 50_000)]
    pub max_terms: usize,
    /// Report every stage time as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetArg {
    Auto,
    Minor,
    Bareiss,
}

impl From<DetArg> for DetStrategy {
    fn from(d: DetArg) -> Self {
        match d {
            DetArg::Auto => DetStrategy::Auto,
            DetArg::Minor => DetStrategy::Minor,
            DetArg::Bareiss => DetStrategy::Bareiss,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sylvester resultant of two polynomial files with respect to a variable.
    Resultant {
        f: std::path::PathBuf,
        g: std::path::PathBuf,
        #[arg(long)]
        var: String,
    },
    /// Five-curvature elimination chain ending in a polynomial in H.
    Theorem1 {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu: String,
        /// Keep mu as a variable instead of substituting its value.
        #[arg(long)]
        symbolic_mu: bool,
    },
    /// Six-curvature elimination chain ending in a polynomial in H.
    Theorem2 {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        s: i64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value = "5", allow_hyphen_values = true)]
        k1: String,
    },
    /// Exact nullspace analysis of the Codazzi rows for one frame.
    Codazzi(commands::CodazziArgs),
    /// Seeded property suite over the algebra kernel.
    Selfcheck,
    /// Small polynomial utilities.
    Poly {
        #[command(subcommand)]
        op: PolyOp,
    },
}

#[derive(Subcommand, Debug)]
enum PolyOp {
    /// Evaluate or partially specialize: `--at x=1/2,y=3`.
    Eval {
        file: std::path::PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    Add {
        f: std::path::PathBuf,
        g: std::path::PathBuf,
    },
    Mul {
        f: std::path::PathBuf,
        g: std::path::PathBuf,
    },
    Diff {
        file: std::path::PathBuf,
        #[arg(long)]
        var: String,
    },
}

fn configure_threads() -> Result<(), commands::CliError> {
    let Ok(raw) = std::env::var("RESULTANT_FORGE_THREADS") else {
        return Ok(());
    };
    let count: usize = raw
        .trim()
        .parse()
        .map_err(|_| commands::CliError::Input(format!("RESULTANT_FORGE_THREADS must be a count, got `{raw}`")))?;
    if count > 0 {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(count).build_global();
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let g = &cli.global;
        match &cli.command {
            Command::Resultant { f, g: gf, var } => commands::resultant(g, f, gf, var),
            Command::Theorem1 { n, r, mu, symbolic_mu } => commands::theorem1(g, *n, *r, mu, *symbolic_mu),
            Command::Theorem2 { n, r, s, mu, k1 } => commands::theorem2(g, *n, *r, *s, mu, k1),
            Command::Codazzi(args) => commands::codazzi(g, args),
            Command::Selfcheck => commands::selfcheck(g),
            Command::Poly { op } => match op {
                PolyOp::Eval { file, at } => commands::poly_eval(g, file, at),
                PolyOp::Add { f, g: gf } => commands::poly_binary(g, f, gf, commands::Binary::Add),
                PolyOp::Mul { f, g: gf } => commands::poly_binary(g, f, gf, commands::Binary::Mul),
                PolyOp::Diff { file, var } => commands::poly_diff(g, file, var),
            },
        }
    });
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
