use clap::{Args, Parser, Subcommand};
use m05_kim::geom::{certify, kernel_check, CERTIFY_SEED, CERTIFY_TRIALS};
use m05_kim::kim::{
    control_points, parse_rational, report, x_points, x_points_oracle, y_points, y_points_oracle, IntegralPoint,
    KimContext, RunConfig, CONTROLS,
};
use m05_kim::padic::{PadicContext, PolylogEngine};
use m05_kim::periods::build_period_dictionary;
use m05_kim::verify::{self, Status};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "m05kim", about = "Kim function on M_{0,5} over Z[1/6]")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral points of X = M_{0,4} and Y = M_{0,5}.
    #[command(subcommand)]
    Points(PointsCmd),
    /// p-adic evaluation of the Kim function.
    #[command(subcommand)]
    Kim(KimCmd),
    /// Exact geometric step: kernel check and degree certification.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Motivic period dictionary.
    #[command(subcommand)]
    Arith(ArithCmd),
    /// p-adic polylogarithms, zeta values and rational reconstruction.
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Acceptance checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum PointsCmd {
    Enumerate {
        /// Also recompute both lists by brute force and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 7)]
        bound: u32,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    prec: Option<u32>,
    #[arg(long)]
    slack: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn resolve(&self) -> Res<RunConfig> {
        let mut c = match &self.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(p) = self.p {
            c.p = p;
        }
        if let Some(n) = self.prec {
            c.precision = n;
        }
        if let Some(s) = self.slack {
            c.slack = s;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        Ok(c)
    }
}

#[derive(Subcommand)]
enum KimCmd {
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, conflicts_with = "point")]
        all_integral: bool,
        #[arg(long, num_args = 2, value_names = ["Z1", "Z2"], allow_hyphen_values = true)]
        point: Option<Vec<String>>,
    },
    Report {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = CONTROLS)]
        controls: usize,
    },
}

#[derive(Subcommand)]
enum GeomCmd {
    KernelCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    Certify {
        #[arg(long, default_value_t = CERTIFY_SEED)]
        seed: u64,
        #[arg(long, default_value_t = CERTIFY_TRIALS)]
        trials: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ArithCmd {
    Dictionary {
        #[arg(long, default_value_t = 13)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PadicCmd {
    Li {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 13)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
    Zeta {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 13)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
    /// Rational a/b with a/b ≡ residue mod p^prec.
    Reconstruct {
        #[arg(long, allow_hyphen_values = true)]
        residue: String,
        #[arg(long, default_value_t = 13)]
        p: u64,
        #[arg(long, default_value_t = 20)]
        prec: u32,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    All {
        #[arg(long)]
        json: bool,
    },
}

fn rational(s: &str) -> Res<BigRational> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s}").into())
}

fn print_json<T: serde::Serialize>(v: &T) -> Res<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn points(oracle: bool, bound: u32) -> Res<bool> {
    let x = x_points();
    let y = y_points();
    println!("X(Z[1/6]): {} points", x.len());
    println!("  {}", x.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", "));
    println!("Y(Z[1/6]): {} points", y.len());
    for pt in &y {
        println!("  ({}, {})", pt.z1, pt.z2);
    }
    if !oracle {
        return Ok(true);
    }
    let xs: std::collections::BTreeSet<_> = x.into_iter().collect();
    let ys: std::collections::BTreeSet<_> = y.into_iter().collect();
    let (xo, yo) = (x_points_oracle(bound), y_points_oracle(bound));
    println!("oracle (exponents ≤ {bound}): X agrees {}, Y agrees {}", xo == xs, yo == ys);
    Ok(xo == xs && yo == ys)
}

fn kim_evaluate(run: &RunArgs, all: bool, point: Option<Vec<String>>) -> Res<bool> {
    let config = run.resolve()?;
    let kc = KimContext::new(config.clone())?;
    let pts: Vec<IntegralPoint> = match point {
        Some(v) => vec![IntegralPoint { z1: rational(&v[0])?, z2: rational(&v[1])? }],
        None if all => y_points(),
        None => return Err("give --all-integral or --point Z1 Z2".into()),
    };
    let mut ok = true;
    for pt in &pts {
        match kc.evaluate_point(pt) {
            Ok(e) => {
                let pass = e.valuation >= config.threshold();
                ok &= pass || !e.is_integral;
                println!(
                    "({}, {}) valuation {} loss {} {} {}",
                    e.z1,
                    e.z2,
                    e.valuation,
                    e.loss,
                    if pass { "vanishes" } else { "nonzero" },
                    e.digits
                );
            }
            Err(err) => println!("{err}"),
        }
    }
    Ok(ok)
}

fn kim_report(run: &RunArgs, out: Option<PathBuf>, controls: usize) -> Res<bool> {
    let config = run.resolve()?;
    let kc = KimContext::new(config.clone())?;
    let r = report(&kc, &y_points(), &control_points(&config, controls))?;
    let text = serde_json::to_string_pretty(&r)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(r["overall_pass"] == true)
}

fn run(cli: Cli) -> Res<bool> {
    match cli.cmd {
        Cmd::Points(PointsCmd::Enumerate { oracle, bound }) => points(oracle, bound),
        Cmd::Kim(KimCmd::Evaluate { run, all_integral, point }) => kim_evaluate(&run, all_integral, point),
        Cmd::Kim(KimCmd::Report { run, out, controls }) => kim_report(&run, out, controls),
        Cmd::Geom(GeomCmd::KernelCheck { trials, seed, json }) => {
            let r = kernel_check(trials, seed);
            if json {
                print_json(&r)?;
            } else {
                println!("{} trials, all exactly zero: {}, degenerate redraws: {}", r.trials, r.all_zero, r.degenerate_retries);
            }
            Ok(r.all_zero)
        }
        Cmd::Geom(GeomCmd::Certify { seed, trials, json }) => {
            let p = certify(seed, trials)?;
            if json {
                print_json(&p)?;
            } else {
                println!("d = {:?}, k = {:?}, weights = {:?}, F weight = {}", p.d, p.k, p.weights, p.f_weight());
            }
            Ok(true)
        }
        Cmd::Arith(ArithCmd::Dictionary { p, prec, out }) => {
            let d = build_period_dictionary(&PadicContext::new(p, prec)?)?;
            let text = d.canonical_json();
            match out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(true)
        }
        Cmd::Padic(PadicCmd::Li { n, z, p, prec }) => {
            let ctx = PadicContext::new(p, prec)?;
            let v = PolylogEngine::new(&ctx).li_q(n, &rational(&z)?)?;
            println!("{}", ctx.digits(&v));
            Ok(true)
        }
        Cmd::Padic(PadicCmd::Zeta { n, p, prec }) => {
            let ctx = PadicContext::new(p, prec)?;
            println!("{}", ctx.digits(&PolylogEngine::new(&ctx).zeta(n)?));
            Ok(true)
        }
        Cmd::Padic(PadicCmd::Reconstruct { residue, p, prec }) => {
            let ctx = PadicContext::new(p, prec)?;
            let r: BigInt = residue.parse()?;
            println!("{}", ctx.rational_reconstruct(&ctx.from_residue(&r, prec))?);
            Ok(true)
        }
        Cmd::Verify(VerifyCmd::All { json }) => {
            let all = verify::all();
            if json {
                print_json(&all)?;
            } else {
                for c in &all {
                    println!("{}", c.line());
                }
            }
            Ok(all.iter().all(|c| c.status != Status::Fail))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
