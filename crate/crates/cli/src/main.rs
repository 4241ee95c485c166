use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nflrc::analysis::{self, DistanceReport, Options};
use nflrc::code_params::{self, CodeSpec};
use nflrc::codec::{self, Codeword};
use nflrc::prime_tools::{self, FieldConstructionCertificate, SplitPrime};
use nflrc::sim::{self, Scenario};
use nflrc::{wire, Error, NumberField};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "nflrc", version, about = "Locally recoverable codes from number fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for analysis and simulation (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed for every random choice
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// More logging (-v, -vv)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code specification and check that it is a good split code
    Design {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long = "M")]
        radix: BigUint,
        /// `auto:L` for the first L split primes, or a comma-separated list
        #[arg(long)]
        primes: PrimeChoice,
        /// Lower end of the search for `auto:L`
        #[arg(long, default_value_t = 2)]
        start: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a degree-D field in which all given primes split completely
    ConstructField {
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List totally split primes with their roots
    FindPrimes {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        start: u64,
    },
    /// Encode a file into codeword records
    Encode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode codeword records (with erasures) back into the file
    Decode {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover one symbol of every record from its group
    Repair {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        group: usize,
        #[arg(long)]
        slot: usize,
    },
    /// Mark symbols of every record as erased
    Erase {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Nodes as `group:slot`, comma-separated
        #[arg(long, value_delimiter = ',', required = true)]
        nodes: Vec<NodeArg>,
    },
    /// Exhaustive minimum distance of a small code
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        /// Enumerate even above 2^24 messages
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a failure scenario
    Simulate {
        /// Scenario JSON; omit together with --random-steps to generate one
        #[arg(long, required_unless_present = "random_steps")]
        scenario: Option<PathBuf>,
        /// Generate a random scenario of this many events on --spec
        #[arg(long, requires = "spec")]
        random_steps: Option<usize>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        stripes: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone)]
enum PrimeChoice {
    Auto(usize),
    List(Vec<u64>),
}

impl std::str::FromStr for PrimeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(n) = s.strip_prefix("auto:") {
            return n.parse().map(PrimeChoice::Auto).map_err(|e| format!("auto:{n}: {e}"));
        }
        s.split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(PrimeChoice::List)
    }
}

#[derive(Clone, Copy)]
struct NodeArg(usize, usize);

impl std::str::FromStr for NodeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (g, j) = s.split_once(':').ok_or_else(|| format!("{s:?}: expected group:slot"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
        Ok(NodeArg(parse(g)?, parse(j)?))
    }
}

/// `construct-field` output; `--field` also accepts a bare field.
#[derive(Serialize, Deserialize)]
struct ConstructedField {
    field: NumberField,
    certificate: FieldConstructionCertificate,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Serde(e.to_string()))
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_field(path: &Path) -> anyhow::Result<Arc<NumberField>> {
    let mut v: serde_json::Value = read_json(path)?;
    if let Some(inner) = v.get_mut("field") {
        v = inner.take();
    }
    let field = serde_json::from_value(v)
        .map_err(|e| Error::Serde(e.to_string()))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(Arc::new(field))
}

fn load_spec(path: &Path) -> anyhow::Result<CodeSpec> {
    read_json(path)
}

fn load_records(path: &Path) -> anyhow::Result<Vec<Codeword>> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    wire::from_bytes(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            writeln!(std::io::stdout(), "{text}")?;
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Domain failure that should exit with status 1 after printing `message`.
#[derive(Debug)]
struct Refused(String);

impl std::fmt::Display for Refused {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refused {}

fn design(
    g: &Global,
    field: &Path,
    r: u32,
    s: u32,
    radix: BigUint,
    primes: PrimeChoice,
    start: u64,
) -> anyhow::Result<(CodeSpec, String)> {
    let field = load_field(field)?;
    let split = match primes {
        PrimeChoice::Auto(count) => prime_tools::next_split_primes(&field, count, start)?,
        PrimeChoice::List(ps) => ps
            .into_iter()
            .map(|p| {
                let sp = SplitPrime {
                    p,
                    roots: prime_tools::roots_mod_p(&field, p),
                };
                sp.validate(&field).map(|_| sp)
            })
            .collect::<nflrc::Result<_>>()?,
    };
    let spec = CodeSpec::new(field, r, s, radix, split)?;
    let margin = code_params::margin(&spec)?;
    let approx = code_params::ratio_approx(&margin);
    if !spec.is_good() {
        let msg = if g.json {
            pretty(&serde_json::json!({"good": false, "margin": margin.to_string(), "margin_approx": approx}))
        } else {
            format!("not a good split code: margin {approx:.6} ({margin}) is not above 1")
        };
        return Err(Refused(msg).into());
    }
    let summary = format!(
        "good split code: n = {}, m = {}, distance >= {}, rate {:.4}, margin {approx:.6}",
        spec.n(),
        spec.m().unwrap(),
        spec.dist_lb().unwrap(),
        code_params::rate(&spec)
    );
    Ok((spec, summary))
}

fn encode_file(spec: &CodeSpec, data: &[u8]) -> anyhow::Result<Vec<u8>> {
    if !spec.is_good() {
        return Err(Error::NotGood {
            margin: code_params::margin(spec)?,
        }
        .into());
    }
    let chunk = codec::capacity_bytes(spec);
    if chunk == 0 {
        bail!(Error::CapacityExceeded {
            bits: 9,
            capacity: codec::capacity_bits(spec)
        });
    }
    let msgs = if data.is_empty() {
        vec![codec::msg_from_bytes(spec, &[])?]
    } else {
        data.chunks(chunk)
            .map(|c| codec::msg_from_bytes(spec, c))
            .collect::<nflrc::Result<_>>()?
    };
    Ok(wire::to_bytes(&codec::encode_many(spec, &msgs))?)
}

fn decode_file(spec: &CodeSpec, records: &[Codeword]) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    for (k, cw) in records.iter().enumerate() {
        let msg = codec::global_decode(spec, cw).with_context(|| format!("record {k}"))?;
        out.extend(codec::msg_to_bytes(spec, &msg).with_context(|| format!("record {k}"))?);
    }
    Ok(out)
}

fn distance_table(rep: &DistanceReport) -> String {
    let lb = rep.lower_bound.map_or("-".into(), |b| b.to_string());
    format!(
        "codewords enumerated  {}\nminimum distance      {}\nlower bound n-m+1     {}\nwitness messages      {} {}",
        rep.enumerated, rep.min_distance, lb, rep.witness_pair.0, rep.witness_pair.1
    )
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = &cli.global;
    match cli.cmd {
        Cmd::Design {
            field,
            r,
            s,
            radix,
            primes,
            start,
            out,
        } => {
            let (spec, summary) = design(g, &field, r, s, radix, primes, start)?;
            let text = pretty(&spec);
            match out {
                Some(path) => {
                    emit(Some(&path), &text)?;
                    if !g.json {
                        eprintln!("{summary}");
                    }
                }
                None => emit(None, &text)?,
            }
        }
        Cmd::ConstructField { degree, primes, out } => {
            let (field, certificate) = prime_tools::construct_field_with(degree, &primes)?;
            certificate.check(&primes)?;
            let file = ConstructedField {
                field: (*field).clone(),
                certificate,
            };
            emit(out.as_deref(), &pretty(&file))?;
        }
        Cmd::FindPrimes { field, count, start } => {
            let field = load_field(&field)?;
            let found = prime_tools::next_split_primes(&field, count, start)?;
            if g.json {
                emit(None, &pretty(&found))?;
            } else {
                for sp in &found {
                    let roots: Vec<String> = sp.roots.iter().map(u64::to_string).collect();
                    emit(None, &format!("{}: {}", sp.p, roots.join(" ")))?;
                }
            }
        }
        Cmd::Encode { spec, input, out } => {
            let spec = load_spec(&spec)?;
            let data = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let bytes = encode_file(&spec, &data)?;
            fs::write(&out, bytes).with_context(|| format!("writing {}", out.display()))?;
        }
        Cmd::Decode { spec, input, out } => {
            let spec = load_spec(&spec)?;
            let data = decode_file(&spec, &load_records(&input)?)?;
            fs::write(&out, data).with_context(|| format!("writing {}", out.display()))?;
        }
        Cmd::Repair {
            spec,
            input,
            group,
            slot,
        } => {
            let spec = load_spec(&spec)?;
            let values = load_records(&input)?
                .iter()
                .map(|cw| codec::local_recover(&spec, cw, group, slot))
                .collect::<nflrc::Result<Vec<_>>>()?;
            if g.json {
                emit(None, &serde_json::to_string(&values)?)?;
            } else {
                for v in values {
                    emit(None, &v.to_string())?;
                }
            }
        }
        Cmd::Erase { input, out, nodes } => {
            let mut records = load_records(&input)?;
            for cw in &mut records {
                for &NodeArg(h, j) in &nodes {
                    if h >= cw.groups() || j >= cw.group_len() {
                        bail!(Error::InvalidParams(format!("no slot ({h}, {j})")));
                    }
                    cw.erase(h, j);
                }
            }
            fs::write(&out, wire::to_bytes(&records)?).with_context(|| format!("writing {}", out.display()))?;
        }
        Cmd::Analyze { spec, force, out } => {
            let spec = load_spec(&spec)?;
            let rep = analysis::brute_min_distance(
                &spec,
                Options {
                    threads: g.threads,
                    force,
                },
            )?;
            let text = if g.json || out.is_some() {
                rep.to_json()
            } else {
                distance_table(&rep)
            };
            emit(out.as_deref(), &text)?;
        }
        Cmd::Simulate {
            scenario,
            random_steps,
            spec,
            stripes,
            out,
        } => {
            let mut sc = match (scenario, random_steps) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    Scenario::from_json(&text).with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(steps)) => {
                    let spec = load_spec(spec.as_deref().expect("clap enforces --spec"))?;
                    sim::random_scenario(spec, stripes, steps, g.seed.unwrap_or(0))
                }
                (None, None) => unreachable!("clap enforces one source"),
            };
            if let Some(seed) = g.seed {
                sc.seed = seed;
            }
            let rep = sim::run_scenario(&sc, g.threads)?;
            let text = if g.json || out.is_some() {
                rep.to_json()
            } else {
                format!(
                    "local repairs   {}\nglobal repairs  {}\nsymbols read    {}\nunrecoverable   {}",
                    rep.repairs_local, rep.repairs_global, rep.symbols_read, rep.unrecoverable
                )
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Refused>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) => 3,
        _ => 1,
    }
}

// `nflrc ... | head` closing stdout early is not an error
fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            match err.downcast_ref::<Refused>() {
                Some(Refused(msg)) => println!("{msg}"),
                None => eprintln!("error: {err:#}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
