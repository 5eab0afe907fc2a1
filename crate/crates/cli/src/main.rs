//! `twostep`: batch front end over twostep-core.
//!
//! Exit codes: 0 success (and `iso` Equivalent), 1 `iso` NotEquivalent or a
//! failing selftest, 2 `iso` Unknown, 3 computation failure, 64 usage error,
//! 65 bad input data, 66 unreadable file.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use twostep::acceptance::run_all;
use twostep::cohomology::{invariant_fingerprint, triples_equivalent, EquivalenceVerdict};
use twostep::document::{emit_triple, parse_element, parse_int_vector, parse_triple, IntList};
use twostep::group::{
    canonical_triple, center_basis, commutator, inverse, multiply, nilpotency_class, upper_central_series,
    GroupElement, SkewTriple,
};
use twostep::nc_torus::{clock_shift_rep, fiber_form, max_trace_residual, parse_rational, trace_pairing, Character};
use twostep::reconstruction::{oracle_from_triple, recover_form, Noise, RecoveryConfig};
use twostep::Error;

const EXIT_NOT_EQUIVALENT: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_COMPUTATION: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_IO: u8 = 66;

#[derive(Parser)]
#[command(name = "twostep", version, about = "Torsion-free 2-step nilpotent groups from skew triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a triple document and print its canonical form
    Validate { file: PathBuf },
    /// Product of two elements, written "a1,..,am;b1,..,bn"
    Mul { file: PathBuf, x: String, y: String },
    /// Inverse of an element
    Inv { file: PathBuf, x: String },
    /// Commutator x·y·x⁻¹·y⁻¹
    Comm { file: PathBuf, x: String, y: String },
    /// Rank and basis of the center
    Center { file: PathBuf },
    /// Ranks of the upper central subquotients
    Ucs { file: PathBuf },
    /// Nilpotency class
    Class { file: PathBuf },
    /// Canonical triple (radical moved into the center)
    Canon { file: PathBuf },
    /// Decide equivalence; exit 0 Equivalent, 1 NotEquivalent, 2 Unknown
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 3)]
        budget: usize,
    },
    /// Fiber form χ∘ω mod 1
    Fiber {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// Trace pairing τ_χ(b1 ∪ b2) in [0, 1)
    Pairing {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
    },
    /// Recover the forms from winding numbers of the fiberwise pairings
    Reconstruct {
        file: PathBuf,
        #[arg(long)]
        scramble: Option<u64>,
        /// Noise amplitude P/Q, below 1/8
        #[arg(long)]
        noise: Option<String>,
        #[arg(long, default_value_t = 0)]
        noise_seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Clock-shift representation for θ = P/Q and its residuals
    Clockshift {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Run the acceptance suite
    Selftest,
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<u8, Failure>;

fn load(path: &Path) -> Result<SkewTriple, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    Ok(parse_triple(&text)?)
}

fn character(t: &SkewTriple, s: &str) -> Result<Character, Error> {
    let chi: Character = s.parse()?;
    if chi.dim() != t.m() {
        return Err(Error::DimensionMismatch(format!(
            "character has {} coordinates but m = {}",
            chi.dim(),
            t.m()
        )));
    }
    Ok(chi)
}

fn vector(t: &SkewTriple, s: &str) -> Result<Vec<BigInt>, Error> {
    let v = parse_int_vector(s)?;
    if v.len() != t.n() {
        return Err(Error::DimensionMismatch(format!("vector {s:?} has length {} but n = {}", v.len(), t.n())));
    }
    Ok(v)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => {
            println!("{}", emit_triple(&load(&file)?));
        }
        Command::Mul { file, x, y } => {
            let t = load(&file)?;
            let (x, y) = (parse_element(&t, &x)?, parse_element(&t, &y)?);
            println!("{}", multiply(&t, &x, &y)?);
        }
        Command::Inv { file, x } => {
            let t = load(&file)?;
            println!("{}", inverse(&t, &parse_element(&t, &x)?)?);
        }
        Command::Comm { file, x, y } => {
            let t = load(&file)?;
            let (x, y) = (parse_element(&t, &x)?, parse_element(&t, &y)?);
            println!("{}", commutator(&t, &x, &y)?);
        }
        Command::Center { file } => {
            let t = load(&file)?;
            let z = center_basis(&t);
            println!("rank {}", z.rank());
            for col in z.basis().columns() {
                let (a, b) = col.split_at(t.m());
                println!("{}", GroupElement::new(a.to_vec(), b.to_vec()));
            }
        }
        Command::Ucs { file } => {
            let ranks: Vec<BigInt> = upper_central_series(&load(&file)?).into_iter().map(BigInt::from).collect();
            println!("{}", IntList(&ranks));
        }
        Command::Class { file } => {
            println!("{}", nilpotency_class(&load(&file)?));
        }
        Command::Canon { file } => {
            println!("{}", emit_triple(&canonical_triple(&load(&file)?)));
        }
        Command::Iso { first, second, budget } => {
            let (t1, t2) = (load(&first)?, load(&second)?);
            let verdict = triples_equivalent(&t1, &t2, budget);
            println!("{}", verdict.tag());
            return Ok(match verdict {
                EquivalenceVerdict::Equivalent { phi_a, phi_b } => {
                    println!("phi_a {phi_a}");
                    println!("phi_b {phi_b}");
                    0
                }
                EquivalenceVerdict::NotEquivalent { obstruction } => {
                    println!("obstruction {obstruction}");
                    EXIT_NOT_EQUIVALENT
                }
                EquivalenceVerdict::Unknown => {
                    println!("fingerprints {} {}", invariant_fingerprint(&t1), invariant_fingerprint(&t2));
                    EXIT_UNKNOWN
                }
            });
        }
        Command::Fiber { file, chi } => {
            let t = load(&file)?;
            print!("{}", fiber_form(&t, &character(&t, &chi)?)?);
        }
        Command::Pairing { file, chi, b1, b2 } => {
            let t = load(&file)?;
            let chi = character(&t, &chi)?;
            println!("{}", trace_pairing(&t, &chi, &vector(&t, &b1)?, &vector(&t, &b2)?)?);
        }
        Command::Reconstruct {
            file,
            scramble,
            noise,
            noise_seed,
            tol,
        } => {
            let t = load(&file)?;
            let noise = noise
                .map(|s| -> Result<Noise, Error> {
                    Ok(Noise {
                        amplitude: parse_rational(&s)?,
                        seed: noise_seed,
                    })
                })
                .transpose()?;
            let oracle = oracle_from_triple(&t, scramble, noise)?;
            let cfg = RecoveryConfig {
                tol,
                ..RecoveryConfig::default()
            };
            let rec = recover_form(&oracle, &cfg)?;
            println!("{}", emit_triple(&rec.form));
            for d in &rec.diagnostics {
                println!(
                    "# k={} i={} j={} winding={} samples={} residual={:.3e}",
                    d.k, d.i, d.j, d.value, d.samples, d.residual
                );
            }
        }
        Command::Clockshift { theta } => {
            let theta: BigRational = parse_rational(&theta)?;
            let rep = clock_shift_rep(&theta)?;
            let radius = 2 * rep.q() as i64;
            println!("theta {}", rep.theta());
            println!("q {}", rep.q());
            println!("commutation_residual {:.3e}", rep.commutation_residual());
            println!("unitarity_residual {:.3e}", rep.unitarity_residual());
            println!("max_trace_residual {:.3e} (|b| <= {radius})", max_trace_residual(&rep, radius));
        }
        Command::Selftest => {
            let reports = run_all();
            for r in &reports {
                println!("{}", r.summary());
            }
            return Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MalformedDocument { .. } | Error::NotSkew(_) | Error::DimensionMismatch(_) => EXIT_DATA,
        Error::InvalidArgument(_) | Error::NoiseTooLarge(_) => EXIT_USAGE,
        Error::WindingUnstable { .. } | Error::Degenerate(_) => EXIT_COMPUTATION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(path, e)) => {
            eprintln!("twostep: cannot read {}: {e}", path.display());
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("twostep: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
