use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use e2fact::multiplier::{build_multiplier, factored_value, staged_multiply};
use e2fact::pipeline::{classify_pair, default_schedule, demo_example, run_algorithm_a, FactorOutcome};
use e2fact::smoothlab::{conjecture_table, write_csv};
use e2fact::{
    CurveE2, CurveW, Error, HasseWindow, PipelineConfig, Point, Rational, SemiprimeContext, SeparationReport,
};
use num_bigint::BigUint;

const EXIT_BUDGET: u8 = 2;
const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "e2fact", version, about = "Factor two-prime moduli with even-order elliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    /// `y² = (x−b1)(x−b2)(x+b1+b2)`
    Roots,
    /// `y² = x³ + b1·x + b2`
    Weierstrass,
}

#[derive(clap::Args)]
struct PairArgs {
    #[arg(long)]
    b1: BigUint,
    #[arg(long)]
    b2: BigUint,
    #[arg(long)]
    x: BigUint,
    #[arg(long)]
    y: BigUint,
    /// Smoothness bound B.
    #[arg(long)]
    b: u64,
    /// How to read --b1/--b2.
    #[arg(long, value_enum, default_value = "roots")]
    form: Form,
    /// Hasse window scale c, as a fraction such as 3/4.
    #[arg(long, default_value = "1")]
    c: Rational,
}

#[derive(Subcommand)]
enum Command {
    /// Run the attack on N and print p and q.
    Factor {
        n: BigUint,
        /// Largest smoothness bound in the schedule.
        #[arg(long, default_value_t = 1_000_000)]
        b_max: u64,
        /// Trials per smoothness bound.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hasse window scale c, as a fraction such as 3/4.
        #[arg(long, default_value = "1")]
        c: Rational,
        #[arg(long)]
        workers: Option<usize>,
        /// Write the trial log as JSON lines.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record 0 ms for every trial so logs are reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Multiply a point by the staged multipliers and report t_min and d.
    Order {
        n: BigUint,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Replay the worked example N = 3839985129719.
    Demo,
    /// Classify a curve and point using the known factors.
    Classify {
        n: BigUint,
        #[arg(long)]
        p: BigUint,
        #[arg(long)]
        q: BigUint,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Tabulate smooth-part frequencies against L(α, x).
    SmoothLab {
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u64>,
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_value = "1,3/4")]
        beta: Vec<Rational>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,4")]
        theta_grid: Vec<f64>,
        /// Write the table here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn build_pair(n: &BigUint, pair: &PairArgs) -> Result<(CurveW, Point), Error> {
    let curve = match pair.form {
        Form::Roots => CurveE2::new(pair.b1.clone(), pair.b2.clone(), n)?.to_weierstrass(),
        Form::Weierstrass => CurveW::new(pair.b1.clone(), pair.b2.clone(), n)?,
    };
    let point = Point::affine(pair.x.clone(), pair.y.clone());
    if !curve.contains(&point) {
        return Err(Error::InvalidInput("point is not on the curve".into()));
    }
    Ok((curve, point))
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Factor { n, b_max, trials, seed, c, workers, json, no_timing } => {
            let mut cfg = PipelineConfig {
                b_schedule: default_schedule(b_max),
                trial_budget: trials,
                seed,
                hasse_scale_c: c,
                timing: !no_timing,
                ..PipelineConfig::default()
            };
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let report = run_algorithm_a(&n, &cfg)?;
            if let Some(path) = json {
                let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
                for rec in &report.log {
                    writeln!(out, "{}", rec.to_json()).map_err(io_err)?;
                }
                out.flush().map_err(io_err)?;
            }
            match report.outcome {
                FactorOutcome::Factored { p, q, trial } => {
                    println!("p = {p}");
                    println!("q = {q}");
                    let route = report.log.last().map_or("square root".to_string(), |r| format!("{:?}", r.outcome));
                    println!("found by trial {trial} ({route})");
                    Ok(ExitCode::SUCCESS)
                }
                FactorOutcome::Exhausted { trials } => {
                    println!("no factor after {trials} trials");
                    for (outcome, count) in report.tally() {
                        println!("  {outcome:?}: {count}");
                    }
                    Ok(ExitCode::from(EXIT_BUDGET))
                }
            }
        }
        Command::Order { n, pair } => {
            let ctx = SemiprimeContext::new(n.clone())?.with_hasse_scale(pair.c)?;
            let (curve, point) = build_pair(&n, &pair)?;
            let w = HasseWindow::from_context(&ctx)?;
            println!("M_B = {}", build_multiplier(pair.b, &w).value());
            match staged_multiply(&curve, &point, pair.b, &w)? {
                SeparationReport::Separated { factor, at_prime, t_min } => {
                    println!("t_min = {t_min}");
                    println!("factor = {factor} (while multiplying by {at_prime})");
                }
                SeparationReport::NonSeparating { t_min, order } => {
                    println!("t_min = {t_min}");
                    let shape: Vec<String> = order.iter().map(|(l, e)| format!("{l}^{e}")).collect();
                    println!("d = {} = {}", factored_value(&order), shape.join(" * "));
                }
                SeparationReport::StillFinite => println!("M_B * Q is finite at both primes"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo => {
            let transcript = demo_example()?;
            for line in &transcript.lines {
                let mark = if line.ok() { "ok" } else { "MISMATCH" };
                println!("{:<22} {:<20} expected {:<20} {mark}", line.label, line.got, line.expected);
            }
            Ok(if transcript.all_match() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_MISMATCH) })
        }
        Command::Classify { n, p, q, pair } => {
            let ctx = SemiprimeContext::new(n.clone())?.with_oracle(p, q)?.with_hasse_scale(pair.c)?;
            let (curve, point) = build_pair(&n, &pair)?;
            let c = classify_pair(&curve, &point, pair.b, &ctx)?;
            let show = |v: Option<u64>| v.map_or("none".to_string(), |v| v.to_string());
            println!("orders      = {} {}", c.orders.0, c.orders.1);
            println!("group order = {} {}", c.group_orders.0, c.group_orders.1);
            println!("traces      = {} {}", c.traces.0, c.traces.1);
            println!("t_min       = {}", show(c.t_min));
            println!("l_min       = {}", show(c.l_min));
            println!("clause      = {}", c.clause.map_or("none".to_string(), |c| format!("{c:?}")));
            Ok(ExitCode::SUCCESS)
        }
        Command::SmoothLab { x, alpha, beta, theta_grid, csv } => {
            let table = conjecture_table(&x, alpha, &beta, &theta_grid)?;
            match csv {
                Some(path) => write_csv(&table, BufWriter::new(File::create(path).map_err(io_err)?)).map_err(io_err)?,
                None => write_csv(&table, std::io::stdout().lock()).map_err(io_err)?,
            }
            for (b, theta) in &table.least_theta {
                let theta = theta.map_or("none in grid".to_string(), |t| t.to_string());
                eprintln!("beta = {b}: least theta {theta}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
