//! Command-line front end: model files, inference, sampling, generators,
//! timing and KL tables.

pub mod model_file;
mod selftest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use tractable_ising::engine::PreparedModel;
use tractable_ising::model::{IsingModel, SpinConfiguration};
use tractable_ising::testkit::{
    gen_k5_necklace_model, gen_random_k33free, gen_random_planar_model, kl_divergence_empirical, GeneratorConfig,
};

pub use model_file::{parse_model_file, write_model_file, ModelFileError};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  computation failed (numerical error or a failed self-test)
  2  usage error
  3  unreadable or malformed input file
  4  unsupported topology (a nonplanar triconnected component above the size bound)";

#[derive(Parser)]
#[command(name = "tractable-ising", version, about = "Exact partition functions and samples of zero-field Ising models")]
#[command(after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print ln Z of a model with a component report.
    Infer {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Draw exact samples, one line of spins per sample.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        num_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a random model file. For necklaces the size counts vertices
    /// and must be a multiple of 5.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        coupling_std: f64,
        /// Output path; standard output when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time inference and one sample on random K33-free models.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1024, 4096, 16384, 65536])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        coupling_std: f64,
    },
    /// KL divergence of the empirical sample distribution from the exact one.
    Kltest {
        #[arg(long, default_value_t = 10)]
        size: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 10000, 100000, 1000000])]
        sample_counts: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        coupling_std: f64,
    },
    /// Compare the engine against enumeration on small random instances.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Planar,
    K33free,
    Necklace,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    ModelFile { path: PathBuf, source: ModelFileError },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Engine(#[from] tractable_ising::Error),
    #[error("self-test failed")]
    SelftestFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use tractable_ising::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Read { .. } | CliError::ModelFile { .. } | CliError::Write(_) => 3,
            CliError::Engine(E::UnsupportedTopology(_) | E::NonPlanar) => 4,
            CliError::Engine(_) | CliError::SelftestFailed => 1,
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Tables go to `out`, diagnostics to `err`.
pub fn run_cli<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{shown}");
                0
            } else {
                let _ = write!(err, "{shown}");
                2
            };
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Infer { model, format } => infer(&read_model(&model)?, format, out),
        Command::Sample { model, num_samples, seed, format } => {
            sample(&read_model(&model)?, num_samples, seed, format, out)
        }
        Command::Gen { kind, size, seed, coupling_std, output } => {
            let text = write_model_file(&generate(kind, &config(size, seed, coupling_std)?)?);
            match output {
                Some(path) => std::fs::write(&path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Bench { sizes, seed, coupling_std } => bench(&sizes, seed, coupling_std, out),
        Command::Kltest { size, sample_counts, seed, coupling_std } => {
            kltest(size, &sample_counts, seed, coupling_std, out)
        }
        Command::Selftest => {
            if selftest::run(out)? {
                Ok(())
            } else {
                Err(CliError::SelftestFailed)
            }
        }
    }
}

fn read_model(path: &Path) -> Result<IsingModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    parse_model_file(&text).map_err(|source| CliError::ModelFile { path: path.into(), source })
}

fn config(size: usize, seed: u64, coupling_std: f64) -> Result<GeneratorConfig, CliError> {
    if !(coupling_std.is_finite() && coupling_std >= 0.0) {
        return Err(CliError::Usage(format!("coupling spread {coupling_std} must be finite and nonnegative")));
    }
    Ok(GeneratorConfig { target_size: size, coupling_stddev: coupling_std, seed })
}

fn generate(kind: Kind, cfg: &GeneratorConfig) -> Result<IsingModel, CliError> {
    let m = match kind {
        Kind::Planar => gen_random_planar_model(cfg),
        Kind::K33free => gen_random_k33free(cfg),
        Kind::Necklace => gen_k5_necklace_model(cfg),
    };
    m.map_err(|e| match e {
        tractable_ising::Error::InvalidArgument(msg) => CliError::Usage(msg),
        other => other.into(),
    })
}

/// `x` rounded to `digits` significant digits, in the style of `%g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{exp}", trim(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn infer(m: &IsingModel, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let prepared = PreparedModel::new(m)?;
    let wall = millis(start);
    let r = prepared.report();
    let log_z = format_significant(prepared.log_z(), 12);
    let wall = format_significant(wall, 6);
    match format {
        Format::Text => {
            writeln!(out, "log_z\twall_time_ms\tplanar_nodes\tk5_nodes\tbond_nodes\tdense_fallbacks")?;
            writeln!(
                out,
                "{log_z}\t{wall}\t{}\t{}\t{}\t{}",
                r.planar_nodes, r.small_nonplanar_nodes, r.bond_nodes, r.dense_fallbacks
            )?;
        }
        Format::Json => {
            let flags: Vec<String> =
                (r.dense_fallbacks > 0).then(|| format!("dense_fallback x{}", r.dense_fallbacks)).into_iter().collect();
            let doc = json!({
                "log_z": log_z.parse::<f64>().expect("formatted float"),
                "wall_time_ms": wall.parse::<f64>().expect("formatted float"),
                "component_stats": {
                    "planar": r.planar_nodes,
                    "k5": r.small_nonplanar_nodes,
                    "bond": r.bond_nodes,
                },
                "flags": flags,
            });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}

fn spins_line(x: &SpinConfiguration) -> String {
    x.as_slice().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

fn sample(m: &IsingModel, count: usize, seed: u64, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let prepared = PreparedModel::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(count);
    for _ in 0..count {
        draws.push(prepared.sample(&mut rng)?);
    }
    match format {
        Format::Text => {
            for x in &draws {
                writeln!(out, "{}", spins_line(x))?;
            }
        }
        Format::Json => {
            let rows: Vec<&[i8]> = draws.iter().map(|x| x.as_slice()).collect();
            writeln!(out, "{}", json!({ "num_vertices": m.num_vertices(), "samples": rows }))?;
        }
    }
    Ok(())
}

fn bench(sizes: &[usize], seed: u64, coupling_std: f64, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "n\tinfer_ms\tsample_ms")?;
    for (i, &n) in sizes.iter().enumerate() {
        let m = generate(Kind::K33free, &config(n, seed.wrapping_add(i as u64), coupling_std)?)?;
        let start = Instant::now();
        let prepared = PreparedModel::new(&m)?;
        let infer_ms = millis(start);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = Instant::now();
        prepared.sample(&mut rng)?;
        let sample_ms = millis(start);
        writeln!(out, "{n}\t{}\t{}", format_significant(infer_ms, 6), format_significant(sample_ms, 6))?;
        out.flush()?;
    }
    Ok(())
}

fn kltest(size: usize, counts: &[usize], seed: u64, coupling_std: f64, out: &mut dyn Write) -> Result<(), CliError> {
    if size > 20 {
        return Err(CliError::Usage(format!("kltest needs exact probabilities; size {size} is above 20")));
    }
    if counts.contains(&0) {
        return Err(CliError::Usage("sample counts must be positive".into()));
    }
    let m = generate(Kind::K33free, &config(size, seed, coupling_std)?)?;
    let prepared = PreparedModel::new(&m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let most = counts.iter().copied().max().unwrap_or(0);
    let mut draws = Vec::with_capacity(most);
    for _ in 0..most {
        draws.push(prepared.sample(&mut rng)?);
    }
    writeln!(out, "m\tkl\texpected_bias")?;
    let cells = (1u64 << size) as f64 - 1.0;
    for &c in counts {
        let kl = kl_divergence_empirical(&m, &draws[..c])?;
        let bias = cells / (2.0 * c as f64);
        writeln!(out, "{c}\t{}\t{}", format_significant(kl, 6), format_significant(bias, 6))?;
    }
    Ok(())
}
