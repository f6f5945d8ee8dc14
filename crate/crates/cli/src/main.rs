mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use levy_noise::par::{self, replicate, RandomSource};
use levy_noise::poisson_eq::{self, Domain};
use levy_noise::prm::{char_functional_theory, moment_with, pair_raw, Intensity, PrmSampler, SampleBox};
use levy_noise::stats::{self, ReportRow};
use levy_noise::verify::{self, VerifyOptions};
use levy_noise::{Error, OrthonormalJumpBasis};
use serde::Serialize;

use config::{parse_list, positive, RunConfig};

const THREADS_ENV: &str = "LEVY_NOISE_THREADS";

#[derive(Parser)]
#[command(name = "levy-noise", version, about = "White-noise calculus for pure-jump Levy noise")]
struct Cli {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Levy measure: inline JSON or a path to a JSON file
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Orthonormal jump polynomials p_1..p_M as a coefficient table
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long = "M")]
        m: Option<usize>,
    },
    /// Monte Carlo report for the Poisson random measure on a box
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        /// box bounds `lo,hi` applied to every coordinate
        #[arg(long = "box")]
        bounds: Option<String>,
    },
    /// Chaos coefficients and Monte Carlo check of the stochastic Poisson equation
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        /// evaluation point, comma separated
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        /// where to write the summary JSON; stdout when omitted
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run the acceptance checks
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moments and characteristic functional of <omega, f> against theory
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "mc-samples")]
        mc_samples: Option<usize>,
        /// highest moment, at most 4
        #[arg(long)]
        order: Option<usize>,
        /// `count` (f = 1) or `jump` (f = z)
        #[arg(long)]
        functional: Option<String>,
        #[arg(long = "box")]
        bounds: Option<String>,
    },
    /// I(delta) = int over D minus B_delta(x) of G(x, y)^2 dy
    Divergence {
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// radii, comma separated
        #[arg(long)]
        deltas: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) => par::init_threads(n),
            Err(_) => return fail(&anyhow::Error::from(Error::Parse(format!("{THREADS_ENV}={v:?}")))),
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(e: &anyhow::Error) -> ExitCode {
    let kind = e.downcast_ref::<Error>().map_or("io", |e| e.kind());
    let rec = ErrorRecord {
        error: kind,
        message: format!("{e:#}"),
    };
    eprintln!("{}", serde_json::to_string(&rec).expect("record serializes"));
    ExitCode::FAILURE
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Basis { common, m } => basis(&cfg, common, m),
        Command::Sample {
            common,
            dim,
            eps,
            mc_samples,
            bounds,
        } => sample(&cfg, common, dim, eps, mc_samples, bounds),
        Command::Solve {
            common,
            domain,
            dim,
            x,
            k,
            mc_samples,
            eps,
            summary,
        } => solve(&cfg, common, domain, dim, x, k, mc_samples, eps, summary),
        Command::Verify {
            suite,
            seed,
            mc_samples,
            out,
        } => verify_cmd(&cfg, suite, seed, mc_samples, out),
        Command::Moments {
            common,
            dim,
            eps,
            mc_samples,
            order,
            functional,
            bounds,
        } => moments(&cfg, common, dim, eps, mc_samples, order, functional, bounds),
        Command::Divergence { dim, x, deltas, out } => divergence(&cfg, dim, x, deltas, out),
    }
}

fn writer(path: Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_rows(path: Option<PathBuf>, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn basis(cfg: &RunConfig, common: Common, m: Option<usize>) -> Result<ExitCode> {
    let model = cfg.measure(common.measure.as_deref())?;
    let requested = positive("M", m.or(cfg.m).unwrap_or(4))?;
    let basis = OrthonormalJumpBasis::build(&model, requested)?;
    let residuals = basis.gram_residuals(&model);
    let width = basis.len() + 1;
    let mut w = csv::Writer::from_writer(writer(cfg.out(common.out))?);
    let mut header = vec!["m".to_string(), "degree".to_string()];
    header.extend((0..width).map(|i| format!("c{i}")));
    header.push("gram_residual".into());
    w.write_record(&header)?;
    for j in 1..=basis.len() {
        let c = basis.coefficients(j)?;
        let mut rec = vec![j.to_string(), (c.len() - 1).to_string()];
        rec.extend((0..width).map(|i| (c.get(i).copied().unwrap_or(0.0) + 0.0).to_string()));
        rec.push(residuals[j - 1].to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    if basis.is_capped() {
        eprintln!(
            "note: measure supports only {} orthonormal polynomials, {} requested",
            basis.len(),
            requested
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn sample_box(cfg: &RunConfig, d: usize, bounds: Option<&str>) -> Result<SampleBox> {
    let (lo, hi) = match bounds {
        Some(s) => match parse_list(s)?.as_slice() {
            [lo, hi] => (*lo, *hi),
            _ => return Err(Error::Parse(format!("--box expects lo,hi, got {s:?}")).into()),
        },
        None => (cfg.lower.unwrap_or(0.0), cfg.upper.unwrap_or(1.0)),
    };
    Ok(SampleBox::new(vec![lo; d], vec![hi; d])?)
}

fn sample(
    cfg: &RunConfig,
    common: Common,
    dim: Option<usize>,
    eps: Option<f64>,
    mc_samples: Option<usize>,
    bounds: Option<String>,
) -> Result<ExitCode> {
    let model = cfg.measure(common.measure.as_deref())?;
    let d = cfg.dim(dim)?;
    let eps = cfg.eps(eps)?;
    let n = positive("mc-samples", mc_samples.or(cfg.mc_samples).unwrap_or(10_000))?;
    let seed = cfg.seed(common.seed, 0);
    let bbox = sample_box(cfg, d, bounds.as_deref())?;
    let intensity = Intensity::new(&model, &bbox, eps);
    let sampler = PrmSampler::new(&model, &bbox, eps)?;
    let source = RandomSource::new(seed);
    let draws = replicate(&source, n, |rng, _| {
        let c = sampler.sample(rng);
        [c.len() as f64, pair_raw(&c, |_, z| z), pair_raw(&c, |_, z| z * z)]
    });
    let col = |i: usize| draws.iter().map(|v| v[i]).collect::<Vec<f64>>();
    let (count, linear, square) = (col(0), col(1), col(2));
    let comp = intensity.integrate(|_, z| z);
    let centered: Vec<f64> = linear.iter().map(|v| v - comp).collect();
    let tv = model.truncation_variance(eps) * bbox.volume();
    let rows = vec![
        ReportRow::mc("E[omega(box)]", stats::mean(&count), sampler.mass(), 3.0, seed),
        ReportRow::mc("Var[omega(box)]", stats::variance(&count), sampler.mass(), 3.0, seed),
        ReportRow::mc("E[<omega - pi, z>]", stats::mean(&centered), 0.0, 3.0, seed),
        ReportRow::mc("Var[<omega - pi, z>]", stats::variance(&centered), intensity.norm_sq(|_, z| z), 3.0, seed),
        ReportRow::mc("E[<omega, z^2>]", stats::mean(&square), intensity.integrate(|_, z| z * z), 3.0, seed),
    ]
    .into_iter()
    .map(|r| r.with_truncation(eps, tv))
    .collect::<Vec<_>>();
    write_rows(cfg.out(common.out), &rows)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SolveSummary {
    domain: &'static str,
    x: Vec<f64>,
    #[serde(rename = "K")]
    k: usize,
    variance_partial: f64,
    variance_exact: Option<f64>,
    mc_mean: Option<f64>,
    mc_var: Option<f64>,
    mc_se: Option<f64>,
    mc_samples: usize,
    seed: u64,
}

#[allow(clippy::too_many_arguments)]
fn solve(
    cfg: &RunConfig,
    common: Common,
    domain: Option<String>,
    dim: Option<usize>,
    x: Option<String>,
    k: Option<usize>,
    mc_samples: Option<usize>,
    eps: Option<f64>,
    summary: Option<PathBuf>,
) -> Result<ExitCode> {
    let model = cfg.measure(common.measure.as_deref())?;
    let d = cfg.dim(dim.or_else(|| domain.as_deref().and_then(natural_dim)))?;
    let domain = match domain.or_else(|| cfg.domain.clone()) {
        Some(name) => Domain::parse(&name, d)?,
        None => Domain::for_dim(d)?,
    };
    let center = match domain {
        Domain::Disk | Domain::Ball => vec![0.0; d],
        _ => vec![0.5; d],
    };
    let x = cfg.point(x.as_deref(), center)?;
    let count = positive("K", k.or(cfg.k).unwrap_or(50))?;
    let n = mc_samples.or(cfg.mc_samples).unwrap_or(0);
    let seed = cfg.seed(common.seed, 0);
    let eps = cfg.eps(eps)?;

    let field = poisson_eq::solve_chaos(&domain, &model, &x, count)?;
    let variance_exact = match poisson_eq::variance_exact(&domain, &model, &x) {
        Ok(v) => Some(v),
        Err(Error::Divergent(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let mc = if n > 0 {
        Some(poisson_eq::mc_moments(&domain, &model, &x, eps, n, &RandomSource::new(seed))?)
    } else {
        None
    };

    let mut w = csv::Writer::from_writer(writer(cfg.out(common.out))?);
    w.write_record(["k", "cantor_index", "coefficient", "partial_variance"])?;
    for (k, idx, c, pv) in field.rows() {
        w.serialize((k, idx, c, pv))?;
    }
    w.flush()?;
    drop(w);

    let record = SolveSummary {
        domain: domain.name(),
        x,
        k: count,
        variance_partial: field.partial_variance(),
        variance_exact,
        mc_mean: mc.map(|(m, _)| m.estimate),
        mc_var: mc.map(|(_, v)| v.estimate),
        mc_se: mc.map(|(_, v)| v.std_error),
        mc_samples: n,
        seed,
    };
    let mut out = writer(summary)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
    Ok(ExitCode::SUCCESS)
}

fn natural_dim(name: &str) -> Option<usize> {
    match name {
        "interval" => Some(1),
        "disk" => Some(2),
        "ball" => Some(3),
        _ => None,
    }
}

fn verify_cmd(
    cfg: &RunConfig,
    suite: Option<String>,
    seed: Option<u64>,
    mc_samples: Option<usize>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let suite = suite.or_else(|| cfg.suite.clone()).unwrap_or_else(|| "all".into());
    let opts = VerifyOptions {
        seed: cfg.seed(seed, verify::DEFAULT_SEED),
        samples: positive("mc-samples", mc_samples.or(cfg.mc_samples).unwrap_or(verify::DEFAULT_SAMPLES))?,
    };
    let ids = verify::suite_ids(&suite)?;
    let out = cfg.out(out);
    let mut w = out
        .as_ref()
        .map(|p| std::fs::File::create(p).with_context(|| format!("creating {}", p.display())))
        .transpose()?
        .map(|f| csv::WriterBuilder::new().has_headers(false).from_writer(f));
    if let Some(w) = w.as_mut() {
        w.write_record([
            "criterion",
            "check",
            "quantity",
            "estimate",
            "theory",
            "std_error",
            "n_samples",
            "seed",
            "eps",
            "truncation_var",
            "tolerance",
            "pass",
        ])?;
    }
    let mut failed = Vec::new();
    for id in ids {
        let outcome = verify::run_criterion(id, &opts)?;
        println!("{}", outcome.summary());
        for r in outcome.failed_rows() {
            println!(
                "    failed: {} estimate {} theory {} se {} tolerance {}",
                r.quantity, r.estimate, r.theory, r.std_error, r.tolerance
            );
        }
        if let Some(w) = w.as_mut() {
            for row in &outcome.rows {
                w.serialize((
                    id,
                    outcome.name,
                    &row.quantity,
                    row.estimate,
                    row.theory,
                    row.std_error,
                    row.n_samples,
                    row.seed,
                    row.eps,
                    row.truncation_var,
                    &row.tolerance,
                    row.pass,
                ))?;
            }
        }
        if !outcome.pass {
            failed.push(id);
        }
    }
    if let Some(mut w) = w {
        w.flush()?;
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        let rec = ErrorRecord {
            error: "verification_failed",
            message: format!("criteria {failed:?} failed"),
        };
        eprintln!("{}", serde_json::to_string(&rec)?);
        Ok(ExitCode::from(3))
    }
}

#[allow(clippy::too_many_arguments)]
fn moments(
    cfg: &RunConfig,
    common: Common,
    dim: Option<usize>,
    eps: Option<f64>,
    mc_samples: Option<usize>,
    order: Option<usize>,
    functional: Option<String>,
    bounds: Option<String>,
) -> Result<ExitCode> {
    let model = cfg.measure(common.measure.as_deref())?;
    let d = cfg.dim(dim)?;
    let eps = cfg.eps(eps)?;
    let n = positive("mc-samples", mc_samples.or(cfg.mc_samples).unwrap_or(10_000))?;
    let order = positive("order", order.or(cfg.order).unwrap_or(4))?;
    if order > 4 {
        return Err(Error::Unsupported(format!("moment order {order} (at most 4)")).into());
    }
    let seed = cfg.seed(common.seed, 0);
    let bbox = sample_box(cfg, d, bounds.as_deref())?;
    let functional = functional.or_else(|| cfg.functional.clone()).unwrap_or_else(|| "count".into());
    let f: fn(&[f64], f64) -> f64 = match functional.as_str() {
        "count" => |_, _| 1.0,
        "jump" => |_, z| z,
        other => return Err(Error::Parse(format!("unknown functional {other:?}")).into()),
    };
    let intensity = Intensity::new(&model, &bbox, eps);
    let sampler = PrmSampler::new(&model, &bbox, eps)?;
    let values = replicate(&RandomSource::new(seed), n, |rng, _| pair_raw(&sampler.sample(rng), f));
    let tv = model.truncation_variance(eps) * bbox.volume();
    let mut rows = Vec::new();
    for k in 1..=order {
        let pow: Vec<f64> = values.iter().map(|v| v.powi(k as i32)).collect();
        let theory = moment_with(&intensity, f, k)?;
        rows.push(ReportRow::mc(format!("E[<omega, f>^{k}]"), stats::mean(&pow), theory, 3.0, seed));
    }
    let chi = char_functional_theory(&intensity, f);
    let re: Vec<f64> = values.iter().map(|v| v.cos()).collect();
    let im: Vec<f64> = values.iter().map(|v| v.sin()).collect();
    rows.push(ReportRow::mc("Re E[exp(i <omega, f>)]", stats::mean(&re), chi.re, 3.0, seed));
    rows.push(ReportRow::mc("Im E[exp(i <omega, f>)]", stats::mean(&im), chi.im, 3.0, seed));
    let rows: Vec<ReportRow> = rows.into_iter().map(|r| r.with_truncation(eps, tv)).collect();
    write_rows(cfg.out(common.out), &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn divergence(
    cfg: &RunConfig,
    dim: Option<usize>,
    x: Option<String>,
    deltas: Option<String>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let d = cfg.dim(dim)?;
    let center = if d == 2 || d == 3 { vec![0.0; d] } else { vec![0.5; d] };
    let x = cfg.point(x.as_deref(), center)?;
    let deltas = match deltas {
        Some(s) => parse_list(&s)?,
        None => cfg.deltas.clone().unwrap_or_else(|| poisson_eq::default_deltas(d)),
    };
    let profile = poisson_eq::divergence_profile(d, &x, &deltas)?;
    let mut w = csv::Writer::from_writer(writer(cfg.out(out))?);
    w.write_record(["delta", "I_delta"])?;
    for (delta, v) in deltas.iter().zip(profile) {
        w.serialize((delta, v))?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
