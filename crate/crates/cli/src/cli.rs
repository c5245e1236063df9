//! Command-line definition and dispatch.
//!
//! Exit codes: 0 success, 1 usage, 2 expression parse error, 3 mathematical
//! domain error, 4 internal fault.  `--help` and `--version` exit 0.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands;
use crate::config::{self, Overrides};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qriccati",
    version,
    about = "Exact and numeric tools for the q-difference Riccati equation \
             f(qz) = (A(z)+f(z))/(1-(q-1)z·f(z))",
    long_about = "Exact and numeric tools for the first-order q-difference Riccati \
                  equation f(qz) = (A(z)+f(z))/(1-(q-1)z·f(z)).\n\n\
                  Expression arguments use a small arithmetic language over z and \
                  the imaginary unit i, e.g. --A \"(z^3+6*z^2+7*z)/(1-2*z)\" or \
                  --q \"-1/2\"; decimals are read exactly (0.25 means 1/4).\n\n\
                  Results are printed as one compact JSON object per run (or as \
                  tab-separated rows with --output table). Exit codes: 0 success, \
                  1 usage error, 2 expression parse error, 3 mathematical domain \
                  error, 4 internal fault."
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Configuration file with key=value lines (also: QRICCATI_CONFIG
    /// environment variable, or ./qriccati.conf if present)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Target relative accuracy for numeric evaluation [default: 1e-12]
    #[arg(long, global = true, value_name = "EPS")]
    pub eps: Option<f64>,

    /// Relative guard distance around poles of the special functions
    /// [default: 1e-9]
    #[arg(long, global = true, value_name = "GUARD")]
    pub pole_guard: Option<f64>,

    /// Degree margin for rational-solution enumeration [default: 6]
    #[arg(long, global = true, value_name = "N")]
    pub degree_bound: Option<usize>,

    /// Orbit depth for orbit-based commands [default: 30]
    #[arg(long, global = true, value_name = "N")]
    pub depth: Option<usize>,

    /// Output format: json or table [default: json]
    #[arg(long, global = true, value_name = "FORMAT")]
    pub output: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a candidate rational solution exactly (prints the cleared
    /// residual)
    VerifyRiccati {
        /// Deformation base q (exact constant, e.g. 1/2 or -1/2)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z) of the equation
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// Candidate solution f(z)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f: String,
    },

    /// Reduce the equation at a known solution f0 to the linear equation
    /// for u = 1/(f-f0)
    Reduce {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// Known rational solution f0(z)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f0: String,
    },

    /// Rational solutions of a1(z)·u(qz) + a0(z)·u(z) + c(z) = 0
    FindRationalLinear {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Shift coefficient a1(z) (polynomial)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        a1: String,
        /// Identity coefficient a0(z) (polynomial)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        a0: String,
        /// Inhomogeneity c(z) (polynomial; 0 for the homogeneous equation)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        c: String,
        /// Degree margin for the enumeration (overrides --degree-bound)
        #[arg(long, value_name = "N")]
        bound: Option<usize>,
    },

    /// Search for rational solutions of the Riccati equation (numeric seed,
    /// exact certification, reduction-based completion)
    SearchRiccati {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// Largest numerator/denominator degree tried (overrides
        /// --degree-bound)
        #[arg(long, value_name = "N")]
        bound: Option<usize>,
    },

    /// One member of the solution family through three known solutions
    Family {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// First known solution
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f0: String,
        /// Second known solution (recovered at phi = 0)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f1: String,
        /// Third known solution (recovered at phi = -1)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f2: String,
        /// Family parameter (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        phi: String,
    },

    /// From two known solutions, the multiplicative linearization
    /// h(qz) = a(z)·h(z) and the product form of its solution
    Linearize {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// First known solution (h = infinity end)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f1: String,
        /// Second known solution (h = 0 end)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f2: String,
    },

    /// Evaluate gamma_q at a point (|q| < 1)
    EvalGammaQ {
        /// Deformation base q (exact constant with |q| < 1)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Evaluation point (constant expression)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        z: String,
    },

    /// Evaluate the product closed form of h(qz) = a(z)·h(z) at a point
    EvalClosedForm {
        /// Deformation base q (exact constant with |q| < 1)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Multiplier a(z) with a(0) finite and nonzero
        #[arg(long = "a", value_name = "EXPR", allow_hyphen_values = true)]
        multiplier: String,
        /// Evaluation point (constant expression)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        z: String,
    },

    /// The equivalent second-order linear q-difference equation
    SecondOrder {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
    },

    /// Relative cleared residual of a candidate along the orbit z0·q^k
    OrbitVerify {
        /// Deformation base q (exact constant)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Coefficient A(z)
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        /// Candidate solution f(z)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        f: String,
        /// Orbit base point (constant expression, nonzero)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        z0: String,
    },

    /// Pole/zero counts of the closed form of h(qz) = a(z)·h(z) in growing
    /// disks, with growth fits against log r and (log r)^2
    Census {
        /// Deformation base q (exact constant with |q| < 1)
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        q: String,
        /// Multiplier a(z) with a(0) finite and nonzero
        #[arg(long = "a", value_name = "EXPR", allow_hyphen_values = true)]
        multiplier: String,
        /// Sample radii as R1..R2xN, geometrically spaced (e.g. 1..1e6x61)
        #[arg(long, value_name = "SPEC")]
        radii: String,
    },
}

/// Resolves settings and runs the selected command against stdout.
pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        config: cli.globals.config.clone(),
        eps: cli.globals.eps,
        pole_guard: cli.globals.pole_guard,
        degree_bound: cli.globals.degree_bound,
        depth: cli.globals.depth,
        output: cli.globals.output.clone(),
    };
    let settings = config::resolve(&overrides)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::VerifyRiccati { q, a, f } => {
            commands::verify_riccati(&mut out, &settings, q, a, f)
        }
        Command::Reduce { q, a, f0 } => commands::reduce(&mut out, &settings, q, a, f0),
        Command::FindRationalLinear { q, a1, a0, c, bound } => {
            commands::find_rational_linear(&mut out, &settings, q, a1, a0, c, *bound)
        }
        Command::SearchRiccati { q, a, bound } => {
            commands::search_riccati(&mut out, &settings, q, a, *bound)
        }
        Command::Family { q, a, f0, f1, f2, phi } => {
            commands::family(&mut out, &settings, q, a, f0, f1, f2, phi)
        }
        Command::Linearize { q, a, f1, f2 } => {
            commands::linearize(&mut out, &settings, q, a, f1, f2)
        }
        Command::EvalGammaQ { q, z } => commands::eval_gamma_q(&mut out, &settings, q, z),
        Command::EvalClosedForm { q, multiplier, z } => {
            commands::eval_closed_form_cmd(&mut out, &settings, q, multiplier, z)
        }
        Command::SecondOrder { q, a } => commands::second_order(&mut out, &settings, q, a),
        Command::OrbitVerify { q, a, f, z0 } => {
            commands::orbit_verify(&mut out, &settings, q, a, f, z0)
        }
        Command::Census { q, multiplier, radii } => {
            commands::census(&mut out, &settings, q, multiplier, radii)
        }
    }
}

/// Parses the command line and runs it, returning the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap routes help/version to stdout and errors to stderr.
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
