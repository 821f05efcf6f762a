//! `nashfan`: Gröbner bases, Gröbner fans and Nash blowup certificates for
//! toric surfaces from the command line.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nashfan_core::a3::a3_run;
use nashfan_core::fan::groebner_fan_2d;
use nashfan_core::groebner::buchberger;
use nashfan_core::nash::{build_jn, construct_witness, nobile_decide, verify_witness};
use nashfan_core::{dual_generators, AffineSemigroup, Cone, Error, Exponent, FieldSpec, TermOrder};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "nashfan", version, about = "Gröbner fans of higher Nash blowups of toric surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal generators of σ̌ ∩ ℤ^d.
    Dual {
        /// Rays of σ, e.g. "0,1;4,-3".
        #[arg(long, allow_hyphen_values = true)]
        rays: String,
    },
    /// Reduced marked Gröbner basis of J_n.
    Gb {
        #[command(flatten)]
        input: SemigroupInput,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 0)]
        p: u64,
        /// Base matrix rows, e.g. "2,-1;1,1".
        #[arg(long, allow_hyphen_values = true)]
        order: Option<String>,
        /// Weight vector placed on top of the base order.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
    },
    /// Gröbner fan of J_n restricted to σ.
    Fan {
        #[arg(long, allow_hyphen_values = true)]
        rays: String,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 0)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        order: Option<String>,
        /// Write an SVG drawing of the fan.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether the normalized n-th Nash blowup subdivides σ.
    Nobile {
        #[arg(long, allow_hyphen_values = true)]
        rays: String,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 0)]
        p: u64,
    },
    /// Build and verify a non-triviality witness in characteristic p.
    Witness {
        #[command(flatten)]
        input: SemigroupInput,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long)]
        n: usize,
    },
    /// Run the A_3 verification pipeline.
    A3 {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Comma-separated characteristics, 0 for ℚ.
        #[arg(long, default_value = "0,2,3,5")]
        primes: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
struct SemigroupInput {
    /// Rays of σ.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["gens", "normals"])]
    rays: Option<String>,
    /// Semigroup generators, edge generators first.
    #[arg(long, allow_hyphen_values = true, requires = "normals")]
    gens: Option<String>,
    /// Facet normals of σ̌ (the rays of σ).
    #[arg(long, allow_hyphen_values = true, requires = "gens")]
    normals: Option<String>,
}

/// Errors split by exit status.
enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::NonTermination(_) => Failure::Math(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<bool, Failure>;

fn parse_row(s: &str) -> std::result::Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Failure::Input(format!("not an integer: {:?}", x.trim())))
        })
        .collect()
}

fn parse_matrix(s: &str) -> std::result::Result<Vec<Vec<i64>>, Failure> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(parse_row)
        .collect::<std::result::Result<_, _>>()?;
    if rows.is_empty() {
        return Err(Failure::Input("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Failure::Input("rows of different lengths".into()));
    }
    Ok(rows)
}

fn field(p: u64) -> std::result::Result<FieldSpec, Failure> {
    if p == 0 {
        Ok(FieldSpec::RATIONALS)
    } else {
        Ok(FieldSpec::new(p)?)
    }
}

fn cone(rays: &str) -> std::result::Result<Cone, Failure> {
    Ok(Cone::new(parse_matrix(rays)?)?)
}

fn semigroup(input: &SemigroupInput) -> std::result::Result<AffineSemigroup, Failure> {
    match (&input.rays, &input.gens, &input.normals) {
        (Some(rays), _, _) => Ok(dual_generators(&cone(rays)?)?),
        (None, Some(gens), Some(normals)) => {
            let gens = parse_matrix(gens)?.into_iter().map(Exponent::from).collect();
            Ok(AffineSemigroup::from_generators(gens, parse_matrix(normals)?)?)
        }
        _ => Err(Failure::Input("give --rays or both --gens and --normals".into())),
    }
}

fn order(matrix: Option<&str>, s: &AffineSemigroup) -> std::result::Result<TermOrder, Failure> {
    match matrix {
        Some(m) => Ok(TermOrder::matrix(parse_matrix(m)?, s)?),
        None => Ok(TermOrder::default_for(s)?),
    }
}

fn emit(value: &Value, out: Option<&PathBuf>) -> std::result::Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Dual { rays } => {
            let s = dual_generators(&cone(&rays)?)?;
            emit(&to_value(&s), None)?;
            Ok(true)
        }
        Command::Gb {
            input,
            n,
            p,
            order: matrix,
            weight,
        } => {
            let s = semigroup(&input)?;
            let field = field(p)?;
            let mut ord = order(matrix.as_deref(), &s)?;
            if let Some(w) = weight {
                ord = ord.refined_int(&parse_row(&w)?)?;
                ord.check_positive(&s)?;
            }
            let basis = buchberger(&build_jn(&s, n, field), &ord)?;
            emit(&basis.to_json(), None)?;
            Ok(true)
        }
        Command::Fan {
            rays,
            n,
            p,
            order: matrix,
            svg,
            out,
        } => {
            let s = dual_generators(&cone(&rays)?)?;
            let field = field(p)?;
            let base = order(matrix.as_deref(), &s)?;
            let fan = groebner_fan_2d(&build_jn(&s, n, field), &s.sigma(), &base)?;
            if let Some(path) = svg {
                fs::write(&path, fan.to_svg())
                    .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(&to_value(&fan.to_json()), out.as_ref())?;
            Ok(true)
        }
        Command::Nobile { rays, n, p } => {
            let verdict = nobile_decide(&cone(&rays)?, n, field(p)?)?;
            emit(&to_value(&verdict.to_json()), None)?;
            Ok(true)
        }
        Command::Witness { input, p, n } => {
            let s = semigroup(&input)?;
            if p == 0 {
                return Err(Failure::Input("witnesses need a prime p".into()));
            }
            field(p)?;
            let wit = construct_witness(&s, p, n)?;
            let report = verify_witness(&wit, &s);
            emit(
                &json!({"witness": to_value(&wit), "report": to_value(&report), "passed": report.passed()}),
                None,
            )?;
            Ok(report.passed())
        }
        Command::A3 {
            nmax,
            primes,
            jobs,
            out,
        } => {
            if nmax == 0 {
                return Err(Failure::Input("--nmax must be at least 1".into()));
            }
            let primes: Vec<u64> = primes
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u64>()
                        .map_err(|_| Failure::Input(format!("not a characteristic: {:?}", x.trim())))
                })
                .collect::<std::result::Result<_, _>>()?;
            for &p in &primes {
                field(p)?;
            }
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let reports = a3_run(nmax, &primes, jobs)?;
            let passed = reports.iter().all(|r| r.passed());
            for r in reports.iter().filter(|r| !r.passed()) {
                let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                eprintln!("n = {}, p = {}: failed {}", r.n, r.p, failed.join(", "));
            }
            emit(&json!({"passed": passed, "reports": to_value(&reports)}), out.as_ref())?;
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_matrices() {
        assert_eq!(parse_matrix("2,-1;1,1").ok(), Some(vec![vec![2, -1], vec![1, 1]]));
        assert_eq!(parse_matrix(" 0, 1 ; 4,-3 ;").ok(), Some(vec![vec![0, 1], vec![4, -3]]));
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("1,a").is_err());
    }

    #[test]
    fn classifies_failures() {
        assert!(matches!(Failure::from(Error::NotPrime(4)), Failure::Input(_)));
        assert!(matches!(Failure::from(Error::InvariantViolation("x".into())), Failure::Math(_)));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
