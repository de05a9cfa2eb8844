mod commands;
mod output;
mod parse;

use std::ops::RangeInclusive;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use fqdist::asymptotics::Convention;
use fqdist::irreducible::DEFAULT_BUDGET;
use fqdist::verify::{Suite, VerifyConfig};

use commands::Theorem;
use output::{Format, Output};

/// Exit status for failed Möbius/sieve agreement and for usage errors.
const EXIT_MISMATCH: u8 = 2;
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(fqdist::Error),
}

impl From<fqdist::Error> for CliError {
    fn from(e: fqdist::Error) -> Self {
        use fqdist::Error::*;
        match e {
            Domain(_) | Precondition(_) | Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Lib(other),
        }
    }
}

#[derive(Parser)]
#[command(name = "fqdist", version, about = "Prime-factor statistics of monic polynomials over finite fields")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// field size, a prime power
    #[arg(long)]
    q: u64,
    /// defining polynomial of F_q over F_p, ascending coefficients
    #[arg(long = "ext-modulus")]
    ext_modulus: Option<String>,
}

#[derive(Args)]
struct DegreeArgs {
    #[arg(long)]
    n: Option<usize>,
    /// inclusive range a..b
    #[arg(long = "n-range", value_parser = parse::parse_range)]
    n_range: Option<RangeInclusive<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Exact,
    Characters,
    Variance,
    Asymptotics,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Displayed,
    Derived,
    Both,
}

impl ConventionArg {
    fn list(self) -> Vec<Convention> {
        match self {
            ConventionArg::Displayed => vec![Convention::Displayed],
            ConventionArg::Derived => vec![Convention::Derived],
            ConventionArg::Both => vec![Convention::Displayed, Convention::Derived],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible counts π(d) from the sieve, checked against Möbius inversion.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "max-deg")]
        max_deg: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// drop one irreducible of this degree before checking
        #[arg(long = "inject-fault", hide = true)]
        inject_fault: Option<usize>,
    },
    /// Exact N_t(n), optionally with the finite-sum prediction.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        predict: bool,
    },
    /// Degree-n polynomials with Ω = t in the residue class h mod Q.
    ResidueCount {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Q")]
        modulus: String,
        #[arg(long)]
        h: String,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        predict: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run the self-check suites; exits nonzero if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// restrict multi-field checks to this q
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact values against asymptotic main terms.
    Asymptotics {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Q")]
        modulus: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long, value_parser = parse::parse_y, allow_hyphen_values = true)]
        y: Option<Complex64>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
        /// degree to which residue-class prime counts are tabulated
        #[arg(long, default_value_t = 12)]
        trunc: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Constants entering the main terms at one y.
    Constants {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Q")]
        modulus: Option<String>,
        #[arg(long, value_parser = parse::parse_y, allow_hyphen_values = true)]
        y: Complex64,
        /// reference degree for κ; omitted means the large-n limit
        #[arg(long)]
        n: Option<u64>,
        /// number of coefficients A_r, Â_r
        #[arg(long, default_value_t = 6)]
        t: usize,
        #[arg(long, default_value_t = 12)]
        trunc: usize,
    },
    /// L-polynomials of the non-principal characters mod Q and their inverse roots.
    Lpoly {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Q")]
        modulus: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Exact Σ_{f ∈ A_n, Ω(f) = t} 𝕍[τ(f;∘,Q)].
    Variance {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Q")]
        modulus: String,
        #[command(flatten)]
        degrees: DegreeArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

fn run(cmd: Command) -> Result<(Output, u8), CliError> {
    const TRUNC_MAX: usize = 24;
    let trunc_ok = |trunc: usize| {
        if (1..=TRUNC_MAX).contains(&trunc) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("--trunc must lie in 1..={TRUNC_MAX}")))
        }
    };
    match cmd {
        Command::Census { field, max_deg, budget, inject_fault } => {
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let c = commands::census(&k, max_deg, budget, inject_fault)?;
            Ok((c.output, if c.agree { 0 } else { EXIT_MISMATCH }))
        }
        Command::Count { field, degrees, t, predict } => {
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ns = parse::degrees(degrees.n, degrees.n_range.as_ref())?;
            Ok((commands::count(&k, &ns, t, predict)?, 0))
        }
        Command::ResidueCount { field, modulus, h, degrees, t, predict, budget } => {
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ctx = parse::modulus(&k, &modulus)?;
            let ns = parse::degrees(degrees.n, degrees.n_range.as_ref())?;
            let args = commands::ResidueArgs { ctx: &ctx, h: &h, ns: &ns, t, predict, budget };
            Ok((commands::residue_count(&k, args)?, 0))
        }
        Command::Verify { suite, seed, q, budget } => {
            let suite = match suite {
                SuiteArg::Exact => Some(Suite::Exact),
                SuiteArg::Characters => Some(Suite::Characters),
                SuiteArg::Variance => Some(Suite::Variance),
                SuiteArg::Asymptotics => Some(Suite::Asymptotics),
                SuiteArg::All => None,
            };
            let mut cfg = VerifyConfig { seed, budget, ..VerifyConfig::default() };
            if let Some(q) = q {
                if !cfg.fields.contains(&q) {
                    return Err(CliError::Usage(format!("--q must be one of {:?}", cfg.fields)));
                }
                cfg.fields = vec![q];
            }
            let v = commands::verify(suite, &cfg);
            Ok((v.output, if v.all_passed { 0 } else { EXIT_FAILURE }))
        }
        Command::Asymptotics { theorem, field, modulus, h, degrees, y, t, convention, trunc, budget } => {
            trunc_ok(trunc)?;
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ctx = modulus.map(|m| parse::modulus(&k, &m)).transpose()?;
            let ns = parse::degrees(degrees.n, degrees.n_range.as_ref())?;
            let conventions = convention.list();
            let args = commands::AsymptoticArgs {
                theorem,
                ctx: ctx.as_ref(),
                h: h.as_deref(),
                ns: &ns,
                y,
                t,
                conventions: &conventions,
                trunc,
                budget,
            };
            Ok((commands::asymptotics(&k, args)?, 0))
        }
        Command::Constants { field, modulus, y, n, t, trunc } => {
            trunc_ok(trunc)?;
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ctx = modulus.map(|m| parse::modulus(&k, &m)).transpose()?;
            Ok((commands::constants(&k, ctx.as_ref(), y, n, t, trunc)?, 0))
        }
        Command::Lpoly { field, modulus, tol } => {
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ctx = parse::modulus(&k, &modulus)?;
            Ok((commands::lpoly(&k, &ctx, tol)?, 0))
        }
        Command::Variance { field, modulus, degrees, budget } => {
            let k = parse::field(field.q, field.ext_modulus.as_deref())?;
            let ctx = parse::modulus(&k, &modulus)?;
            let ns = parse::degrees(degrees.n, degrees.n_range.as_ref())?;
            Ok((commands::variance(&k, &ctx, &ns, budget)?, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{}", out.render(cli.format));
            ExitCode::from(code)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
