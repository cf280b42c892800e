use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use polyseq::gen::{self, InstanceShape};
use polyseq::{
    abstract_internal, bisimilar, check_theorem1_all, extract, extract_polyadic, minimize,
    pgld_to_pga, split_pgld, synthesize, theorem1_sides, FragmentVector, InstructionStream,
    Internal, PgaTerm, PgldProgram, RegisterFileState, ThreadGraph,
};

const FILE_PREFIX: &str = "@file:";

#[derive(Parser)]
#[command(
    name = "polyseq",
    version,
    about = "Instruction sequences, threads and polyadic programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Notation {
    Pga,
    Pgld,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimized thread of a program.
    Extract {
        #[arg(long, value_enum, default_value = "pga")]
        notation: Notation,
        /// Program text, or `@file:<path>`.
        program: String,
    },
    /// Print the PGA term of a PGLD program.
    Project { program: String },
    /// Print the joint behaviour of a main stream and a fragment vector.
    PolyExtract {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        main: String,
        /// Initial register file, e.g. `1=#2,2=!`.
        #[arg(long, default_value = "")]
        sigma: String,
        /// Internal actions to abstract from.
        #[arg(long = "abstract", value_enum, value_delimiter = ',')]
        abstract_from: Vec<InternalArg>,
    },
    /// Compile a main stream and fragment vector into one PGLD program.
    Synthesize {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        main: String,
    },
    /// Split a PGLD program after position `h` into two fragments.
    Split {
        #[arg(long)]
        at: usize,
        program: String,
    },
    /// Compare the synthesized program with the joint behaviour.
    CheckTheorem1 {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        main: String,
        #[arg(long, conflicts_with = "all_sigma")]
        sigma: Option<String>,
        #[arg(long)]
        all_sigma: bool,
        #[arg(long, default_value_t = 4096)]
        max_states: usize,
    },
    /// Exit 0 if two programs have bisimilar behaviours, 1 otherwise.
    Equiv {
        #[arg(long, value_enum, default_value = "pgld")]
        notation: Notation,
        a: String,
        b: String,
    },
    /// Check random synthesis instances for every register file.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4096)]
        max_states: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InternalArg {
    Tau,
    Gnl,
}

#[derive(Debug)]
enum Failure {
    Core(polyseq::Error),
    Io(String, std::io::Error),
}

impl From<polyseq::Error> for Failure {
    fn from(e: polyseq::Error) -> Self {
        Failure::Core(e)
    }
}

/// Program text given inline or through `@file:<path>`.
fn text(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix(FILE_PREFIX) {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim_end().to_owned())
            .map_err(|e| Failure::Io(path.to_owned(), e)),
        None => Ok(arg.to_owned()),
    }
}

fn vector(arg: &str) -> Result<FragmentVector, Failure> {
    let path = arg.strip_prefix(FILE_PREFIX).unwrap_or(arg);
    let src = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    Ok(src.parse()?)
}

fn sigma(arg: &str) -> Result<RegisterFileState, Failure> {
    let arg = arg.trim();
    let inner = arg
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(arg);
    Ok(inner.parse()?)
}

fn behaviour(notation: Notation, arg: &str) -> Result<ThreadGraph, Failure> {
    let src = text(arg)?;
    let stream = match notation {
        Notation::Pga => src.parse::<PgaTerm>()?.normalize(),
        Notation::Pgld => pgld_to_pga(&src.parse::<PgldProgram>()?).normalize(),
    };
    Ok(minimize(&extract(&stream)?))
}

fn run(cmd: Command, out: &mut String) -> Result<bool, Failure> {
    match cmd {
        Command::Extract { notation, program } => {
            write!(out, "{}", behaviour(notation, &program)?).unwrap();
        }
        Command::Project { program } => {
            let p: PgldProgram = text(&program)?.parse()?;
            writeln!(out, "{}", pgld_to_pga(&p)).unwrap();
        }
        Command::PolyExtract {
            vector: v,
            main,
            sigma: s,
            abstract_from,
        } => {
            let main: InstructionStream = text(&main)?.parse()?;
            let mut g = extract_polyadic(&main, &sigma(&s)?, &vector(&v)?);
            for iota in abstract_from {
                let iota = match iota {
                    InternalArg::Tau => Internal::Tau,
                    InternalArg::Gnl => Internal::Gnl,
                };
                g = abstract_internal(iota, &g);
            }
            write!(out, "{}", minimize(&g)).unwrap();
        }
        Command::Synthesize { vector: v, main } => {
            let main: InstructionStream = text(&main)?.parse()?;
            write!(out, "{}", synthesize(&main, &vector(&v)?)?).unwrap();
        }
        Command::Split { at, program } => {
            let p: PgldProgram = text(&program)?.parse()?;
            let (main, alpha) = split_pgld(&p, at)?;
            write!(out, "# main: {main}\n{alpha}").unwrap();
        }
        Command::CheckTheorem1 {
            vector: v,
            main,
            sigma: s,
            all_sigma,
            max_states,
        } => {
            let main: InstructionStream = text(&main)?.parse()?;
            let alpha = vector(&v)?;
            if all_sigma {
                let verdicts = check_theorem1_all(&main, &alpha, max_states)?;
                for (sigma, ok) in &verdicts {
                    writeln!(out, "{} {{{sigma}}}", verdict(*ok)).unwrap();
                }
                return Ok(verdicts.iter().all(|(_, ok)| *ok));
            }
            let sigma = sigma(s.as_deref().unwrap_or(""))?;
            let (left, right) = theorem1_sides(&main, &alpha, &sigma)?;
            let ok = bisimilar(&left, &right);
            writeln!(out, "{} {{{sigma}}}", verdict(ok)).unwrap();
            if !ok {
                write!(out, "# synthesized\n{left}# joint\n{right}").unwrap();
            }
            return Ok(ok);
        }
        Command::Equiv { notation, a, b } => {
            let same = bisimilar(&behaviour(notation, &a)?, &behaviour(notation, &b)?);
            writeln!(out, "{}", if same { "equivalent" } else { "inequivalent" }).unwrap();
            return Ok(same);
        }
        Command::Corpus {
            seed,
            count,
            max_states,
        } => return corpus(seed, count, max_states, out),
    }
    Ok(true)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn corpus(seed: u64, count: usize, max_states: usize, out: &mut String) -> Result<bool, Failure> {
    let shape = InstanceShape::default();
    let results: Vec<_> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let (main, alpha) = gen::theorem1_instance(&mut rng, &shape);
            let verdicts = check_theorem1_all(&main, &alpha, max_states);
            (k, main, alpha, verdicts)
        })
        .collect();
    let mut passed = 0;
    for (k, main, alpha, verdicts) in results {
        let verdicts = verdicts?;
        let failed: Vec<_> = verdicts.iter().filter(|(_, ok)| !ok).collect();
        if failed.is_empty() {
            passed += 1;
            writeln!(out, "PASS {k} ({} register files)", verdicts.len()).unwrap();
        } else {
            writeln!(out, "FAIL {k}\n# main: {main}").unwrap();
            write!(out, "{alpha}").unwrap();
            for (sigma, _) in failed {
                writeln!(out, "# sigma {{{sigma}}}").unwrap();
            }
        }
    }
    writeln!(out, "{passed}/{count} instances passed").unwrap();
    Ok(passed == count)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    print!("{out}");
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {path}: {e}");
            ExitCode::from(2)
        }
    }
}
