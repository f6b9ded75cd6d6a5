//! `isd`: sphere sizes, instance generation, decoding and exponent tables.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isd_core::acceptance::{extended_checks, primary_checks};
use isd_core::entropy::sphere_exponent;
use isd_core::estimator::{
    hardest_instance, optimize_point, sweep, write_csv, Algorithm, CodeParams, EstimateRow, Model,
    DEFAULT_A_MAX,
};
use isd_core::isd::{generate_instance, isd_solve, IsdParams, SdInstance, Variant, WeightSplit};
use isd_core::merge::DEFAULT_LIST_CAP;
use isd_core::sphere::{log_q, sphere_count_units};
use isd_core::weight::WeightFunction;
use rand::SeedableRng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "isd", version, about = "Information set decoding under general weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct WeightArgs {
    /// Field size, a prime below 2^16
    #[arg(long)]
    q: u32,
    /// lee, hamming, or a path to a JSON table {"q": .., "table": [..]}
    #[arg(long, default_value = "lee")]
    weight: String,
}

impl WeightArgs {
    fn build(&self) -> isd_core::Result<WeightFunction> {
        WeightFunction::from_spec(&self.weight, self.q)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Classical,
    Quantum,
    Both,
}

impl ModelArg {
    fn models(self) -> Vec<Model> {
        match self {
            ModelArg::Classical => vec![Model::Classical],
            ModelArg::Quantum => vec![Model::Quantum],
            ModelArg::Both => vec![Model::Classical, Model::Quantum],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sphere exponent s_ω with its typical symbol distribution, or an exact
    /// sphere size
    Sphere {
        #[command(flatten)]
        weight: WeightArgs,
        /// Relative weight ω = w / n
        #[arg(long, conflicts_with_all = ["n", "w"])]
        omega: Option<f64>,
        #[arg(long, requires = "w")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        w: Option<f64>,
        /// Print the exact count of length-n vectors of weight w
        #[arg(long, requires = "n")]
        exact: bool,
    },
    /// Random instance with a planted solution
    Gen {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        w: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode an instance file; exit code 3 if the loop budget runs out
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "prange")]
        alg: String,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        #[arg(long, value_enum, default_value = "all")]
        split: SplitArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1 << 20)]
        max_loops: u64,
        #[arg(long, default_value_t = DEFAULT_LIST_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimized exponent at one (R, ω)
    Estimate {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long = "R")]
        rate: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, value_enum, default_value = "classical")]
        model: ModelArg,
        #[arg(long, default_value = "wagner")]
        alg: String,
        #[arg(long, default_value_t = DEFAULT_A_MAX)]
        a_max: u32,
    },
    /// Hardest (R, ω) per field size and model, as CSV
    Hardest {
        /// Field sizes (repeatable)
        #[arg(long = "q", required = true)]
        qs: Vec<u32>,
        #[arg(long, default_value = "lee")]
        weight: String,
        #[arg(long, value_enum, default_value = "both")]
        model: ModelArg,
        #[arg(long, default_value = "wagner")]
        alg: String,
        #[arg(long, default_value_t = DEFAULT_A_MAX)]
        a_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponents along a weight grid at fixed R, as CSV
    Sweep {
        #[command(flatten)]
        weight: WeightArgs,
        #[arg(long = "R")]
        rate: f64,
        #[arg(long, value_enum, default_value = "both")]
        model: ModelArg,
        /// Comma-separated algorithms
        #[arg(long, default_value = "prange,dumer,wagner", value_delimiter = ',')]
        alg: Vec<String>,
        /// Number of grid intervals over [0, max weight]
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_A_MAX)]
        a_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite; exit 0 iff every check passes
    Selftest {
        /// Also run the large-field table rows
        #[arg(long)]
        extended: bool,
        /// Validate this weight table before running
        #[arg(long, requires = "q")]
        weight: Option<String>,
        #[arg(long)]
        q: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    All,
    Balanced,
}

struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn emit(out: &Option<PathBuf>, text: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::from(format!("cannot write {}: {e}", path.display()))),
        None => Ok(io::stdout().write_all(text)?),
    }
}

fn json_line(value: &impl serde::Serialize) -> Result<Vec<u8>, Failure> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    Ok(text)
}

fn csv_bytes(rows: &[EstimateRow]) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(buf)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Sphere {
            weight,
            omega,
            n,
            w,
            exact,
        } => {
            let wf = weight.build()?;
            let mut doc = json!({ "q": wf.q(), "weight": wf.kind().to_string() });
            let omega = match (omega, n, w) {
                (Some(o), _, _) => o,
                (None, Some(n), Some(w)) => {
                    if exact {
                        let units = wf.units_from_value(w)?;
                        let count = sphere_count_units(&wf, n, units);
                        doc["n"] = json!(n);
                        doc["w"] = json!(w);
                        doc["count"] = json!(count.to_string());
                        doc["log_q_per_n"] = json!(log_q(&count, wf.q()) / n as f64);
                    }
                    w / n as f64
                }
                _ => return Err("give --omega, or --n with --w".into()),
            };
            let prof = sphere_exponent(&wf, omega)?;
            doc["omega"] = json!(omega);
            doc["s"] = json!(prof.s);
            doc["beta"] = if prof.beta.is_finite() { json!(prof.beta) } else { json!(prof.beta.to_string()) };
            doc["lambda"] = json!(prof.lambda);
            emit(&None, &json_line(&doc)?)?;
            Ok(0)
        }
        Command::Gen {
            weight,
            n,
            k,
            w,
            seed,
            out,
        } => {
            let wf = weight.build()?;
            let w = wf.weight_from_units(wf.units_from_value(w)?);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let inst = generate_instance(&wf, n, k, w, &mut rng)?;
            emit(&out, format!("{}\n", inst.to_json()).as_bytes())?;
            Ok(0)
        }
        Command::Solve {
            instance,
            alg,
            ell,
            p,
            a,
            split,
            seed,
            max_loops,
            cap,
            out,
        } => {
            let text = fs::read_to_string(&instance)
                .map_err(|e| Failure::from(format!("cannot read {}: {e}", instance.display())))?;
            let inst = SdInstance::from_json(&text)?;
            let wf = inst.weight_function();
            let params = IsdParams {
                variant: alg.parse::<Variant>()?,
                ell,
                p: wf.weight_from_units(wf.units_from_value(p)?),
                a,
                split: match split {
                    SplitArg::All => WeightSplit::All,
                    SplitArg::Balanced => WeightSplit::Balanced,
                },
                list_size_cap: cap,
                max_outer_loops: max_loops,
                seed,
            };
            let report = isd_solve(&inst, &params)?;
            eprintln!("elapsed {:.3}s", report.elapsed.as_secs_f64());
            emit(&out, &json_line(&report)?)?;
            Ok(if report.found() { 0 } else { 3 })
        }
        Command::Estimate {
            weight,
            rate,
            omega,
            model,
            alg,
            a_max,
        } => {
            let wf = weight.build()?;
            let algorithm = alg.parse::<Algorithm>()?;
            let cp = CodeParams::new(&wf, rate, omega)?;
            let results: Vec<_> = model
                .models()
                .into_iter()
                .map(|m| {
                    let w = optimize_point(&cp, m, algorithm, a_max);
                    json!({ "row": EstimateRow::new(&cp, algorithm, &w), "factors": w })
                })
                .collect();
            emit(&None, &json_line(&results)?)?;
            Ok(0)
        }
        Command::Hardest {
            qs,
            weight,
            model,
            alg,
            a_max,
            out,
        } => {
            let algorithm = alg.parse::<Algorithm>()?;
            let mut rows = Vec::new();
            for q in qs {
                let wf = WeightFunction::from_spec(&weight, q)?;
                for m in model.models() {
                    rows.push(hardest_instance(&wf, m, algorithm, a_max).row(&wf, algorithm));
                }
            }
            emit(&out, &csv_bytes(&rows)?)?;
            Ok(0)
        }
        Command::Sweep {
            weight,
            rate,
            model,
            alg,
            steps,
            a_max,
            out,
        } => {
            let wf = weight.build()?;
            if steps == 0 {
                return Err("--steps must be positive".into());
            }
            let algorithms = alg
                .iter()
                .map(|a| a.parse::<Algorithm>())
                .collect::<Result<Vec<_>, _>>()?;
            let mx = wf.max_weight();
            let omegas: Vec<f64> = (0..=steps).map(|i| mx * i as f64 / steps as f64).collect();
            let rows = sweep(&wf, rate, &model.models(), &algorithms, &omegas, a_max)?;
            emit(&out, &csv_bytes(&rows)?)?;
            Ok(0)
        }
        Command::Selftest {
            extended,
            weight,
            q,
        } => {
            if let (Some(spec), Some(q)) = (weight, q) {
                WeightFunction::from_spec(&spec, q)?;
            }
            let mut checks = primary_checks();
            if extended {
                checks.extend(extended_checks());
            }
            let mut failed = 0;
            for check in &checks {
                let outcome = check.run();
                println!("{outcome}");
                failed += usize::from(!outcome.passed);
            }
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("ISD_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("thread pool is configured once");
            }
            _ => {
                eprintln!("error: ISD_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
