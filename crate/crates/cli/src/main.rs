use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kernels::{build, catalog_pairs, readings};
use numeric::{build_wavefunction, degeneration_check, residual_of, Axis, Grid, Limit, WavefunctionFile, WavefunctionSpec, DEFAULT_EPSILONS};
use toda_cli::explain::parse_pair;
use toda_cli::{explain, run_suite, CliError, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "todactl", version, about = "Intertwiners, eigenfunctions and Q-operators of Toda chains")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the quadrature seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lists catalog pairs.
    Catalog {
        #[arg(long, default_value_t = 4)]
        max_n: u32,
    },
    /// Shows a catalog kernel.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Certifies one pair symbolically.
    Verify {
        pair: String,
        /// Run the doubled-coupling negative controls instead.
        #[arg(long)]
        negative: bool,
    },
    /// Tabulates an eigenfunction on a grid and writes it as JSON.
    Wavefunction {
        #[arg(long)]
        system: String,
        #[arg(long)]
        n: u32,
        /// Spectral parameters, one per variable.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
        /// Coupling override, `name=value`.
        #[arg(long = "coupling")]
        couplings: Vec<String>,
        /// `lo:hi:step`, once for all axes or once per axis.
        #[arg(long, allow_hyphen_values = true, required = true)]
        grid: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eigen-residual of a tabulated eigenfunction.
    EigenResidual {
        #[arg(long = "in")]
        input: PathBuf,
        /// Exit nonzero when the residual exceeds this.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Checks a coupling limit.
    Degenerate {
        /// `g1to0`, `g2to0` or `affine`.
        #[arg(long)]
        check: String,
        #[arg(long)]
        n: u32,
        /// Pair kind the limit is taken on (checked for consistency).
        #[arg(long)]
        pair: Option<String>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Runs a check suite and writes a JSON report.
    Run {
        /// paper-verify, paper-eigen, paper-degenerate or all.
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarizes a pair.
    Explain { pair: String },
    /// Prints the effective configuration as TOML.
    Config,
}

#[derive(Subcommand)]
enum KernelCmd {
    Show {
        pair: String,
        /// Print the kernel as LaTeX only.
        #[arg(long)]
        latex: bool,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.quadrature.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let cfg = config(cli)?;
    match &cli.cmd {
        Cmd::Catalog { max_n } => {
            for p in catalog_pairs(1..=*max_n) {
                let k = readings(&p)?.len();
                let extra = if k > 1 { format!("  ({k} readings)") } else { String::new() };
                println!("{:<24} {} -> {}{extra}", p.to_string(), p.source(), p.target());
            }
            Ok(0)
        }
        Cmd::Kernel { cmd: KernelCmd::Show { pair, latex } } => {
            let e = build(&parse_pair(pair)?)?;
            if *latex {
                println!("{}", e.kernel.latex());
            } else {
                let names = |v: &[symexpr::Variable]| v.iter().map(|x| x.name()).collect::<Vec<_>>().join(", ");
                println!("{}: {} -> {}", e.pair, e.src.id, e.dst.id);
                println!("reading: {}", e.reading);
                println!("source variables: {}", names(&e.src.vars));
                println!("target variables: {}", names(&e.dst.vars));
                println!("kernel: {}", e.kernel.latex());
            }
            Ok(0)
        }
        Cmd::Verify { pair, negative } => {
            let id = parse_pair(pair)?;
            if *negative {
                let cs = verify::negative_controls(&id)?;
                let ok = cs.iter().all(|(_, c)| !c.is_zero() && c.witness.is_some());
                let list: Vec<_> = cs.iter().map(|(_, c)| c).collect();
                println!("{}", json(&list)?);
                Ok(if ok { 0 } else { 1 })
            } else {
                let c = verify::certify(&id)?;
                println!("{}", json(&c)?);
                Ok(if c.is_zero() { 0 } else { 1 })
            }
        }
        Cmd::Wavefunction { system, n, lambda, couplings, grid, out } => {
            let mut cs = cfg.couplings_for(*n + 1);
            for c in couplings {
                let (k, v) = c.split_once('=').ok_or_else(|| CliError::Config(format!("coupling must be name=value, got {c}")))?;
                let v: f64 = v.parse().map_err(|_| CliError::Config(format!("bad value in {c}")))?;
                cs.insert(k.trim().to_string(), v);
            }
            let axes = grid.iter().map(|g| Axis::parse(g)).collect::<Result<Vec<_>, _>>()?;
            let axes = match axes.len() {
                1 => vec![axes[0]; *n as usize],
                k if k == *n as usize => axes,
                k => return Err(CliError::Config(format!("{k} grid axes for {n} variables"))),
            };
            let spec = WavefunctionSpec { system: system.clone(), n: *n, couplings: cs, spectral: lambda.clone(), contour: cfg.contour(), budget: cfg.budget(), grid: Grid::new(axes) };
            let f = build_wavefunction(&spec)?;
            write(out, &(json(&f)? + "\n"))?;
            eprintln!("wrote {} values of {} to {}", f.values.re.len(), f.plan, out.display());
            Ok(0)
        }
        Cmd::EigenResidual { input, tolerance } => {
            let text = std::fs::read_to_string(input).map_err(|e| CliError::Io { path: input.display().to_string(), source: e })?;
            let f: WavefunctionFile = serde_json::from_str(&text)?;
            let r = residual_of(&f)?;
            println!("{}", json(&r)?);
            Ok(match tolerance {
                Some(t) if !(r.residual <= *t) => 1,
                _ => 0,
            })
        }
        Cmd::Degenerate { check, n, pair, samples } => {
            let limit = Limit::parse(check).ok_or_else(|| CliError::Config(format!("unknown limit {check} (expected g1to0, g2to0 or affine)")))?;
            if let Some(p) = pair {
                let want = match limit {
                    Limit::G1To0 | Limit::G2To0 => ["istar-shifted-to-bc", "BCn-Istarn"],
                    Limit::AffineToOpen => ["gl-aff", "glaff"],
                };
                if !want.iter().any(|w| w.eq_ignore_ascii_case(p)) {
                    return Err(CliError::Config(format!("the {} limit is taken on {}, not {p}", limit.name(), want[0])));
                }
            }
            let r = degeneration_check(limit, *n, *samples, &DEFAULT_EPSILONS, cfg.quadrature.seed)?;
            println!("{}", json(&r)?);
            Ok(if r.passed { 0 } else { 1 })
        }
        Cmd::Run { suite, out } => {
            let suite = Suite::parse(suite)?;
            let report = run_suite(suite, &cfg)?;
            let path = out.clone().unwrap_or_else(|| cfg.output.path.clone());
            report.write(&path)?;
            for r in &report.records {
                println!("{:<4} {:<64} {:.3e} / {:.1e}", if r.passed() { "ok" } else { "FAIL" }, r.tag, r.metric, r.tolerance);
            }
            println!("{} checks, {} failed; report in {}", report.records.len(), report.failures().count(), path.display());
            Ok(report.exit_code())
        }
        Cmd::Explain { pair } => {
            print!("{}", explain(pair)?);
            Ok(0)
        }
        Cmd::Config => {
            print!("{}", cfg.to_toml()?);
            Ok(0)
        }
    }
}
