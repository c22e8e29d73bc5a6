mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use motive_core::cubical::phi_prime;
use motive_core::error::Error;
use motive_core::motive::{cartier_dual_abelian, cartier_dual_kummer, hom_m_mstar_kummer, is_morphism_abelian, is_morphism_kummer};
use motive_core::picard::{phi, phi_abelian, AbelianPic, KummerPic};
use motive_core::suites::{
    compare_suite, cube_suite, demo_not_exact, demo_phi_not_surjective, exact_kernel_suite, tga_suite, SuiteConfig, SuiteReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use input::MotiveSpec;
use report::Report;

#[derive(Parser)]
#[command(name = "motive", version, about = "Line bundles on 1-motives over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Half-width of lattice boxes.
    #[arg(long = "box", global = true, default_value_t = 2)]
    bound: i64,
    /// Random samples per check.
    #[arg(long, global = true, default_value_t = 50)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Cartier dual.
    Dual { input: PathBuf },
    /// Picard group of rigidified line bundles, and the class of the bundle if given.
    Pic { input: PathBuf },
    /// Hom(M, M*) for a Kummer motive.
    Hom { input: PathBuf },
    /// Phi of the bundle, direct construction.
    Phi { input: PathBuf },
    /// Phi of the bundle through its cubical structure.
    PhiPrime { input: PathBuf },
    /// Seeded verification suites.
    Check {
        suite: Suite,
        /// Number of instances; defaults to the suite's acceptance size.
        #[arg(long)]
        instances: Option<usize>,
    },
    /// Worked examples that verify themselves.
    Demo {
        demo: Demo,
        /// Prime for `not-exact`; `phi-not-surjective` runs 11 and 101 unless given.
        #[arg(long)]
        prime: Option<u64>,
        /// Exponent k of the character g -> g^k in `not-exact`.
        #[arg(long, default_value_t = 1)]
        k: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    ExactKernel,
    Tga,
    Cube,
    Compare,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    NotExact,
    PhiNotSurjective,
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch(_)
            | Error::UnsupportedPrime(_)
            | Error::ZeroNotUnit
            | Error::SingularCurve
            | Error::NotOnCurve
            | Error::InvalidInput(_)
            | Error::InvalidDatum(_)
            | Error::NotSymmetric(..) => Failure::Input(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<(bool, Value), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (name, input) = match invocation(&cli) {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("error: {}", msg);
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Check { suite, instances } => Ok(run_suite(&cli, *suite, *instances)),
        Command::Demo { demo, prime, k } => run_demo(*demo, *prime, *k),
        cmd => input::parse(std::str::from_utf8(&input).unwrap_or(""), &mut rng)
            .map_err(Failure::Input)
            .and_then(|spec| run_motive(&cli, cmd, &spec, &mut rng)),
    };
    match outcome {
        Ok((verified, results)) => {
            let report = Report::new(name, &input, cli.seed, verified, results);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print_text(&report);
            }
            if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("verification failed: {}", msg);
            ExitCode::from(1)
        }
    }
}

/// Command name and the bytes hashed into the report: the input file, or the parameters.
fn invocation(cli: &Cli) -> Result<(String, Vec<u8>), String> {
    let read = |p: &PathBuf| std::fs::read(p).map_err(|e| format!("{}: {}", p.display(), e));
    Ok(match &cli.command {
        Command::Dual { input } => ("dual".into(), read(input)?),
        Command::Pic { input } => ("pic".into(), read(input)?),
        Command::Hom { input } => ("hom".into(), read(input)?),
        Command::Phi { input } => ("phi".into(), read(input)?),
        Command::PhiPrime { input } => ("phi-prime".into(), read(input)?),
        Command::Check { suite, instances } => {
            let name = format!("check {}", suite.to_possible_value().expect("named").get_name());
            let params = format!("{} instances={:?} box={} samples={}", name, instances, cli.bound, cli.samples);
            (name, params.into_bytes())
        }
        Command::Demo { demo, prime, k } => {
            let name = format!("demo {}", demo.to_possible_value().expect("named").get_name());
            let params = format!("{} prime={:?} k={}", name, prime, k);
            (name, params.into_bytes())
        }
    })
}

fn kummer_only(cmd: &str) -> Failure {
    Failure::Input(format!("`{}` is only available for Kummer motives", cmd))
}

fn no_bundle(cmd: &str) -> Failure {
    Failure::Input(format!("`{}` needs a [bundle] table in the input", cmd))
}

fn run_motive(cli: &Cli, cmd: &Command, spec: &MotiveSpec, rng: &mut ChaCha8Rng) -> Outcome {
    match (cmd, spec) {
        (Command::Dual { .. }, MotiveSpec::Kummer { motive, .. }) => {
            let d = cartier_dual_kummer(motive);
            let u: Vec<Value> = (0..d.s()).map(|i| Value::from((0..d.r()).map(|j| d.u().get(i, j).value()).collect::<Vec<_>>())).collect();
            Ok((true, json!({ "kind": "kummer", "r": d.r(), "s": d.s(), "u": u })))
        }
        (Command::Dual { .. }, MotiveSpec::Abelian { motive, .. }) => {
            let g = cartier_dual_abelian(motive);
            let classes: Vec<Value> = g.classes().iter().map(|c| report::point(&c.point)).collect();
            Ok((true, json!({ "kind": "extension", "classes": classes, "group": report::group(&g.group_structure(rng)?) })))
        }
        (Command::Pic { .. }, MotiveSpec::Kummer { motive, bundle }) => {
            let pic = KummerPic::new(motive)?;
            let mut out = json!({ "group": report::group(pic.group()), "lambda": report::group(&pic.lambda().group) });
            if let Some(d) = bundle {
                out["class"] = report::ints(&pic.coordinates(d)?);
            }
            Ok((true, out))
        }
        (Command::Pic { .. }, MotiveSpec::Abelian { motive, bundle }) => {
            let pic = AbelianPic::new(motive, rng)?;
            let mut out = json!({
                "group": report::group(pic.group()),
                "pic_curve": report::group(&pic.pic_curve()?),
                "degree_generator": pic.degree_generator(),
            });
            if let Some(d) = bundle {
                out["class"] = report::ints(&pic.coordinates(d, rng)?);
            }
            Ok((true, out))
        }
        (Command::Hom { .. }, MotiveSpec::Kummer { motive, .. }) => {
            let hom = hom_m_mstar_kummer(motive)?;
            let basis: Vec<Value> = hom.basis.iter().map(report::morphism).collect();
            Ok((true, json!({ "group": report::group(&hom.group), "basis": basis })))
        }
        (Command::Phi { .. }, MotiveSpec::Kummer { motive, bundle }) => {
            let d = bundle.as_ref().ok_or_else(|| no_bundle("phi"))?;
            let image = phi(motive, d)?;
            let check = is_morphism_kummer(motive, &cartier_dual_kummer(motive), &image)?;
            Ok((check.ok, json!({ "phi": report::morphism(&image), "is_morphism": check.ok, "witness": format!("{:?}", check.witness) })))
        }
        (Command::Phi { .. }, MotiveSpec::Abelian { motive, bundle }) => {
            let d = bundle.as_ref().ok_or_else(|| no_bundle("phi"))?;
            let image = phi_abelian(motive, d, rng)?;
            let mut values = Vec::new();
            for g in motive.curve().point_group().generators.iter().chain(motive.points()) {
                values.push(json!({ "point": report::point(g), "value": report::gprime_point(&image.apply(g, rng)?) }));
            }
            let check = is_morphism_abelian(motive, &image, cli.samples, rng)?;
            Ok((check.ok, json!({ "values": values, "is_morphism": check.ok, "witness": format!("{:?}", check.witness) })))
        }
        (Command::PhiPrime { .. }, MotiveSpec::Kummer { motive, bundle }) => {
            let d = bundle.as_ref().ok_or_else(|| no_bundle("phi-prime"))?;
            let cubical = phi_prime(motive, d, cli.samples, rng)?;
            let direct = phi(motive, d)?;
            let n = motive.field().unit_order_big();
            let agree = [(&cubical.lattice, &direct.lattice), (&cubical.torus, &direct.torus)].iter().all(|(a, b)| {
                (0..a.rows()).all(|i| (0..a.cols()).all(|j| (&a[(i, j)] - &b[(i, j)]) % &n == 0.into()))
            });
            Ok((agree, json!({ "phi_prime": report::morphism(&cubical), "phi": report::morphism(&direct), "agree": agree })))
        }
        (Command::Hom { .. }, _) => Err(kummer_only("hom")),
        (Command::PhiPrime { .. }, _) => Err(kummer_only("phi-prime")),
        _ => unreachable!("suites and demos take no input file"),
    }
}

fn run_suite(cli: &Cli, suite: Suite, instances: Option<usize>) -> (bool, Value) {
    let cfg = |default: usize| SuiteConfig { seed: cli.seed, instances: instances.unwrap_or(default), bound: cli.bound, samples: cli.samples };
    let rep: SuiteReport = match suite {
        Suite::ExactKernel => exact_kernel_suite(&cfg(50)),
        Suite::Tga => tga_suite(&SuiteConfig { samples: cli.samples.min(5), ..cfg(20) }),
        Suite::Cube => cube_suite(&cfg(100)),
        Suite::Compare => compare_suite(&SuiteConfig { samples: cli.samples.min(10), ..cfg(200) }),
    };
    let mut rows: Vec<(String, Value)> = rep
        .instances
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let digest = report::sha256_hex(format!("{}:{}", i, r.label).as_bytes());
            (digest.clone(), json!({ "digest": digest, "label": r.label, "ok": r.ok, "detail": r.detail }))
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let results = json!({
        "suite": rep.name,
        "passed": rep.passed(),
        "failed": rep.failed(),
        "instances": rows.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    });
    (rep.ok(), results)
}

fn run_demo(demo: Demo, prime: Option<u64>, k: i64) -> Outcome {
    match demo {
        Demo::NotExact => {
            let d = demo_not_exact(prime.unwrap_or(11), k)?;
            Ok((
                d.verified,
                json!({
                    "p": d.p,
                    "k": d.k,
                    "bundle": { "l": report::matrix(&d.datum.l), "c": report::units(&d.datum.c) },
                    "pic": report::group(&d.pic),
                    "class": report::ints(&d.class),
                    "theta": report::matrix(&d.theta),
                    "restriction_trivial": d.restriction_trivial,
                    "in_image_of_beta": d.in_image_of_beta,
                    "expected": { "theta_nonzero": true, "restriction_trivial": true, "in_image_of_beta": false },
                }),
            ))
        }
        Demo::PhiNotSurjective => {
            let primes = prime.map_or(vec![11, 101], |p| vec![p]);
            let mut verified = true;
            let mut cases = Vec::new();
            for p in primes {
                let d = demo_phi_not_surjective(p)?;
                verified &= d.verified;
                let table: Vec<Value> = d
                    .table
                    .iter()
                    .map(|(g, n, a, b)| json!({ "gamma": g, "n": n, "phi": [report::int(a), report::int(b)] }))
                    .collect();
                cases.push(json!({
                    "p": p,
                    "hom": report::group(&d.hom),
                    "pic": report::group(&d.pic),
                    "table": table,
                    "missed": report::morphism(&d.missed),
                    "expected": { "hom": "Z^2", "pic": format!("Z/{} x Z", p - 1), "phi": "(gamma, n) -> (n, n)" },
                }));
            }
            Ok((verified, json!({ "cases": cases })))
        }
    }
}

fn print_text(report: &Report) {
    println!("{} (seed {})", report.command, report.seed);
    if let Some(rows) = report.results.get("instances").and_then(Value::as_array) {
        for row in rows {
            let status = if row["ok"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            println!("  {} {}  {}", status, row["label"].as_str().unwrap_or(""), row["detail"].as_str().unwrap_or(""));
        }
        println!("passed {} failed {}", report.results["passed"], report.results["failed"]);
    } else if let Some(map) = report.results.as_object() {
        for (key, value) in map {
            let shown = value.get("display").cloned().unwrap_or_else(|| value.clone());
            println!("  {}: {}", key, shown);
        }
    }
    println!("{}", if report.verified { "verified" } else { "NOT verified" });
}
