mod output;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algebroid::combinatorics::{find_stable_s, monomial_count, DEFAULT_SEED};
use algebroid::continuation::{loop_permutation, monodromy};
use algebroid::mapping::{map_derivative, map_invert, map_negate, pushforward, Inverted};
use algebroid::nevanlinna::characteristic_curve;
use algebroid::verify::{self, MarginReport};
use algebroid::{Map, C64};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use spec::Loaded;

#[derive(Parser)]
#[command(name = "algebroid", version, about = "Value distribution numerics for algebroid functions")]
struct Cli {
    /// Override the seed given in the spec file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate r, m, N, T, Nx over the spec grid as CSV.
    Characteristic {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a mapping operation and print the resulting equation as JSON.
    Op {
        op: OpName,
        spec: PathBuf,
        /// Label of the map for `pushforward`.
        #[arg(long)]
        map: Option<String>,
    },
    /// Branch permutation after one positive turn around a circle.
    Monodromy {
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        /// Accept centers that are not critical points.
        #[arg(long)]
        any_center: bool,
    },
    /// Number of monomials of degree s + 1 in q functions.
    Count {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        s: usize,
    },
    /// Smallest s whose monomial count ratio is below 1 + epsilon.
    StableS {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Run a verification suite; writes PREFIX.json and PREFIX.csv.
    Verify {
        suite: Suite,
        spec: PathBuf,
        /// Output prefix (default: `<spec stem>.<suite>` in the current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict `thm2.5` to one map.
        #[arg(long)]
        map: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    Negate,
    Invert,
    Derivative,
    Pushforward,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    #[value(name = "thm2.5")]
    Thm25,
    #[value(name = "lemma3.1")]
    Lemma31,
    #[value(name = "lemma3.2")]
    Lemma32,
    #[value(name = "lemma3.3")]
    Lemma33,
    #[value(name = "pw")]
    Pw,
    #[value(name = "smt")]
    Smt,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Thm25 => "thm2.5",
            Suite::Lemma31 => "lemma3.1",
            Suite::Lemma32 => "lemma3.2",
            Suite::Lemma33 => "lemma3.3",
            Suite::Pw => "pw",
            Suite::Smt => "smt",
        }
    }
}

fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || anyhow!("cannot parse complex number `{s}` (expected a+bi)");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(C64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

fn configure_threads() {
    if let Some(n) = std::env::var("ALGEBROID_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("ignoring ALGEBROID_THREADS: {e}");
        }
    }
}

/// Pretty JSON with one coefficient row per line.
fn equation_json(eq: &algebroid::Equation) -> Result<String> {
    let file = spec::equation_file(eq);
    let rows = file
        .function
        .coefficients
        .iter()
        .map(|row| serde_json::to_string(row).map(|r| format!("      {r}")))
        .collect::<serde_json::Result<Vec<_>>>()?;
    Ok(format!(
        "{{\n  \"version\": {},\n  \"function\": {{\n    \"coefficients\": [\n{}\n    ]\n  }}\n}}",
        file.version,
        rows.join(",\n")
    ))
}

fn run_op(loaded: &Loaded, op: OpName, map: Option<&str>) -> Result<String> {
    let eq = loaded.equation()?;
    let result = match op {
        OpName::Negate => map_negate(&eq),
        OpName::Invert => match map_invert(&eq)? {
            Inverted::Equation(e) => e,
            Inverted::Infinity => return Ok("{\n  \"infinity\": true\n}".into()),
        },
        OpName::Derivative => map_derivative(&eq)?,
        OpName::Pushforward => {
            let label = map.ok_or_else(|| anyhow!("pushforward needs --map LABEL"))?;
            pushforward(&loaded.map(label)?, &eq)?
        }
    };
    equation_json(&result)
}

fn run_monodromy(loaded: &Loaded, center: &str, radius: f64, any_center: bool) -> Result<String> {
    let eq = loaded.equation()?;
    let z0 = parse_complex(center)?;
    let m = if any_center { loop_permutation(&eq, z0, radius)? } else { monodromy(&eq, z0, radius)? };
    let perm: Vec<String> = m.perm.iter().map(|j| (j + 1).to_string()).collect();
    let cycles: Vec<String> = m
        .cycles
        .iter()
        .map(|c| format!("({})", c.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(" ")))
        .collect();
    let lengths: Vec<String> = m.cycle_lengths().iter().map(|l| l.to_string()).collect();
    Ok(format!(
        "base point: {}{:+}i\npermutation: {}\ncycles: {}\nlengths: {}",
        output::short(m.base_point.re),
        m.base_point.im,
        perm.join(" "),
        cycles.join(" "),
        lengths.join(" ")
    ))
}

fn labelled(loaded: &Loaded, labels: &[String]) -> Result<Vec<Map>> {
    labels.iter().map(|l| loaded.map(l)).collect()
}

fn run_suite(loaded: &Loaded, suite: Suite, seed: u64, map: Option<&str>) -> Result<MarginReport> {
    let eq = loaded.equation()?;
    let opts = loaded.verify();
    let samples = opts.samples.unwrap_or(20);
    let report = match suite {
        Suite::Thm25 => {
            let labels = match (map, &opts.h) {
                (Some(l), _) => vec![l.to_string()],
                (None, Some(h)) => h.clone(),
                (None, None) => loaded.map_labels(),
            };
            if labels.is_empty() {
                bail!("key `maps`: thm2.5 needs at least one map");
            }
            let grid = loaded.grid()?;
            let mut combined: Option<MarginReport> = None;
            for label in &labels {
                let mut r = verify::check_thm_2_5(&eq, &loaded.map(label)?, &grid)?;
                for row in &mut r.rows {
                    row.label = format!("{label}:{}", row.label);
                }
                combined = Some(match combined {
                    None => r,
                    Some(mut acc) => {
                        acc.rows.extend(r.rows);
                        if !r.verdict.passed() {
                            acc.verdict = r.verdict;
                        }
                        acc
                    }
                });
            }
            combined.expect("at least one map")
        }
        Suite::Lemma31 => verify::check_lemma_3_1(&eq, &loaded.targets()?, &loaded.grid()?)?,
        Suite::Lemma32 => verify::check_lemma_3_2(&eq, opts.order.unwrap_or(4), samples, seed)?,
        Suite::Lemma33 => {
            let fs = opts.wronskian.as_ref().ok_or_else(|| anyhow!("key `verify.wronskian`: missing"))?;
            let g = opts.g.as_ref().ok_or_else(|| anyhow!("key `verify.g`: missing"))?;
            verify::check_lemma_3_3(&labelled(loaded, fs)?, &loaded.map(g)?, &eq, samples, seed)?
        }
        Suite::Pw => verify::check_pw_invariance(&eq, &loaded.targets()?, opts.s.unwrap_or(1), samples, seed)?,
        Suite::Smt => verify::check_smt(&eq, &loaded.targets()?, loaded.epsilon()?, &loaded.grid()?)?,
    };
    Ok(report)
}

fn default_prefix(spec: &Path, suite: Suite) -> PathBuf {
    let stem = spec.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    PathBuf::from(format!("{stem}.{}", suite.name()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Characteristic { spec, out } => {
            let loaded = Loaded::read(&spec)?;
            let samples = characteristic_curve(&loaded.equation()?, &loaded.grid()?)?;
            match out {
                Some(path) => {
                    let f = std::fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
                    output::characteristic_csv(f, &samples)?;
                }
                None => output::characteristic_csv(std::io::stdout().lock(), &samples)?,
            }
        }
        Command::Op { op, spec, map } => println!("{}", run_op(&Loaded::read(&spec)?, op, map.as_deref())?),
        Command::Monodromy { spec, center, radius, any_center } => {
            println!("{}", run_monodromy(&Loaded::read(&spec)?, &center, radius, any_center)?)
        }
        Command::Count { q, s } => println!("{}", monomial_count(q, s + 1)?),
        Command::StableS { q, epsilon } => println!("{}", find_stable_s(q, epsilon)?),
        Command::Verify { suite, spec, out, map } => {
            let loaded = Loaded::read(&spec)?;
            let seed = cli.seed.or(loaded.spec.seed).unwrap_or(DEFAULT_SEED);
            let report = run_suite(&loaded, suite, seed, map.as_deref())?;
            let prefix = out.unwrap_or_else(|| default_prefix(&spec, suite));
            output::write_report(&prefix, suite.name(), seed, &report)?;
            let fails = report.rows.iter().filter(|r| !r.ok).count();
            print!("{}: {:?} ({} rows, {} failing)", suite.name(), report.verdict, report.rows.len(), fails);
            if let Some(m) = report.slack_model {
                print!(", C0 = {}, C1 = {}", output::short(m.c0), output::short(m.c1));
            }
            println!();
            for note in &report.notes {
                println!("note: {note}");
            }
            if !report.verdict.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
