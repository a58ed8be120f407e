//! Command-line front end: threshold reports, curve and kernel tables,
//! density-evolution runs, peeling and list-decoding simulations, and the
//! oracle identity suite. All outputs are reproducible: every table carries
//! the tool version, a hash of the resolved configuration and the seed, and
//! identical configurations produce identical bytes.

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;

use ldpc_exit::channel::ChannelModel;
use ldpc_exit::degree::{design_rate, DegreePolynomial, EnsembleSpec};
use ldpc_exit::density::{bsc_bp_threshold, de_bms, DeParams, DensityGrid};
use ldpc_exit::exit::{
    bec_exit_curve, gexit_exit_sweep, maxwell_area_predictions, ml_threshold_bec, pml_de_bound,
    Branch, GexitKernel, KernelDomain, SweepFamily,
};
use ldpc_exit::maxwell::{maxwell_decode, MaxwellOptions};
use ldpc_exit::oracle::run_identity_suite;
use ldpc_exit::peeling::peel;
use ldpc_exit::tanner::TannerGraph;

use ldpc_exit_cli::config::Resolver;
use ldpc_exit_cli::output::{self, write_table, OutputTarget};

/// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 oracle-suite failure.
const EXIT_USAGE: i32 = 1;
const EXIT_NUMERICAL: i32 = 2;
const EXIT_ORACLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ldpc-exit", version, about = "LDPC ensemble analysis around and above the iterative decoding threshold")]
struct Cli {
    /// Base seed for all randomized subcommands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for trial and grid parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (tables) or directory (trace sets); stdout by default.
    #[arg(long, global = true)]
    out: Option<String>,
    /// key=value configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterative and ML thresholds of an ensemble.
    Thresholds(ThresholdsArgs),
    /// Parametric erasure-channel EXIT curve (both branches).
    ExitCurve(CurveArgs),
    /// EXIT and GEXIT functionals of the DE fixed point across a channel family.
    GexitCurve(SweepArgs),
    /// GEXIT/EXIT kernel tables in the four domains.
    Kernels(KernelArgs),
    /// Density-evolution upper bound on the BSC ML threshold.
    PmlBound(PmlArgs),
    /// One quantized density-evolution run.
    DeRun(DeRunArgs),
    /// Monte-Carlo peeling simulation.
    PeelSim(PeelSimArgs),
    /// Monte-Carlo list-decoding simulation with entropy traces.
    MaxwellSim(MaxwellSimArgs),
    /// Exact-oracle identity suite.
    OracleCheck,
}

#[derive(Args, Debug, Clone)]
struct ThresholdsArgs {
    /// Ensemble pair, e.g. "(x^2,x^5)".
    #[arg(long)]
    ensemble: Option<String>,
    /// Channel family: bec or bsc.
    #[arg(long)]
    channel: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[arg(long)]
    ensemble: Option<String>,
    /// Number of x-grid points.
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long)]
    ensemble: Option<String>,
    /// Channel family: bec or bsc.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    /// Smallest native noise parameter of the sweep.
    #[arg(long)]
    grid_min: Option<f64>,
    /// Largest native noise parameter of the sweep.
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    l_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct KernelArgs {
    /// Channel spec, e.g. bec:0.47, bsc:0.1, biawgn:snr=1.2.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    l_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct PmlArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    l_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct DeRunArgs {
    #[arg(long)]
    ensemble: Option<String>,
    /// Channel spec, e.g. bsc:0.1 or bec:0.45.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    l_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the fixed-point edge density to this binary grid file.
    #[arg(long)]
    dump: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct PeelSimArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated erasure probabilities.
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct MaxwellSimArgs {
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Also write one `(ell, h)` trace file per trial (requires --out DIR).
    #[arg(long)]
    traces: bool,
    /// Cap on the enumerated list size.
    #[arg(long)]
    list_cap: Option<u128>,
}

fn main() {
    // Die quietly when a downstream pipe closes.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are success, anything else is usage error
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                ldpc_exit::Error::Parse { .. } | ldpc_exit::Error::Domain(_) => EXIT_USAGE,
                _ => EXIT_NUMERICAL,
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> ldpc_exit::Result<i32> {
    let resolver = Resolver::load(cli.config.as_deref())?;
    let seed = resolver.value("seed", cli.seed, 1u64)?;
    let threads = resolver.value("threads", cli.threads, 0usize)?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let out = resolver.opt_string("out", cli.out.clone());

    match cli.command {
        Command::Thresholds(args) => cmd_thresholds(args, &resolver, out),
        Command::ExitCurve(args) => cmd_exit_curve(args, &resolver, seed, out),
        Command::GexitCurve(args) => cmd_gexit_curve(args, &resolver, seed, out),
        Command::Kernels(args) => cmd_kernels(args, &resolver, seed, out),
        Command::PmlBound(args) => cmd_pml_bound(args, &resolver, seed, out),
        Command::DeRun(args) => cmd_de_run(args, &resolver, seed, out),
        Command::PeelSim(args) => cmd_peel_sim(args, &resolver, seed, out),
        Command::MaxwellSim(args) => cmd_maxwell_sim(args, &resolver, seed, out),
        Command::OracleCheck => cmd_oracle_check(),
    }
}

fn parse_ensemble(s: &str) -> ldpc_exit::Result<(DegreePolynomial, DegreePolynomial)> {
    EnsembleSpec::parse_pair(s)
}

fn cmd_thresholds(
    args: ThresholdsArgs,
    resolver: &Resolver,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let family = resolver.value("channel", args.channel, "bec".to_string())?;
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let rate = design_rate(&lambda, &rho)?;
    let mut report = String::new();
    report.push_str(&format!("ensemble: {ensemble}\n"));
    report.push_str(&format!("design_rate: {rate:.12}\n"));
    match family.as_str() {
        "bec" => {
            let t = ml_threshold_bec(&lambda, &rho, 1e-9)?;
            report.push_str(&format!("eps_it: {:.10}\n", t.eps_it));
            report.push_str(&format!("x_it: {:.10}\n", t.x_it));
            report.push_str(&format!("eps_ml: {:.10}\n", t.eps_ml));
            report.push_str(&format!("eps_ml_balance: {:.10}\n", t.eps_ml_balance));
            report.push_str(&format!("guess_area: {:.10}\n", t.guess_area));
            report.push_str(&format!("resolution_area: {:.10}\n", t.unstable_area));
        }
        "bsc" => {
            let de = DeParams {
                grid: DensityGrid::new(25.0, 1001)?,
                tol: 1e-7,
                max_iter: 600,
            };
            let p_it = bsc_bp_threshold(&lambda, &rho, &de, 11)?;
            report.push_str(&format!("p_it: {p_it:.6}\n"));
            let grid: Vec<f64> = (0..=180)
                .map(|i| 0.5 - (0.5 - 0.02) * i as f64 / 180.0)
                .collect();
            let bound = pml_de_bound(&lambda, &rho, &grid, &de)?;
            report.push_str(&format!("p_ml_de: {:.6}\n", bound.p_ml_de));
        }
        other => {
            return Err(ldpc_exit::Error::Parse {
                line: 1,
                msg: format!("channel family must be bec or bsc, got `{other}`"),
            })
        }
    }
    OutputTarget::new(out)?.write_text(&report)?;
    Ok(0)
}

fn curve_rows(table: &ldpc_exit::exit::CurveTable) -> Vec<String> {
    table
        .points
        .iter()
        .map(|p| {
            format!(
                "{:.12e},{:.12e},{},{:.12e},{:.12e}",
                p.x,
                p.w,
                match p.branch {
                    Branch::Stable => "stable",
                    Branch::Unstable => "unstable",
                },
                p.exit,
                p.gexit
            )
        })
        .collect()
}

fn cmd_exit_curve(
    args: CurveArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let points = resolver.value("points", args.points, 400usize)?;
    if points < 2 {
        return Err(ldpc_exit::Error::domain("points must be >= 2"));
    }
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let grid: Vec<f64> = (1..=points).map(|i| i as f64 / points as f64).collect();
    let table = bec_exit_curve(&lambda, &rho, &grid)?;
    let header = output::header(
        "exit-curve",
        seed,
        &[("ensemble", ensemble.as_str()), ("points", &points.to_string())],
    );
    write_table(out, &header, "x,w,branch,exit,gexit", &curve_rows(&table))?;
    Ok(0)
}

fn cmd_gexit_curve(
    args: SweepArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let family_s = resolver.value("channel", args.channel, "bsc".to_string())?;
    let points = resolver.value("points", args.points, 40usize)?;
    if points == 0 {
        return Err(ldpc_exit::Error::domain("empty grid"));
    }
    let family = match family_s.as_str() {
        "bec" => SweepFamily::Bec,
        "bsc" => SweepFamily::Bsc,
        other => {
            return Err(ldpc_exit::Error::Parse {
                line: 1,
                msg: format!("channel family must be bec or bsc, got `{other}`"),
            })
        }
    };
    let default_max = if family == SweepFamily::Bec { 1.0 } else { 0.5 };
    let grid_min = resolver.value("grid_min", args.grid_min, 0.02f64)?;
    let grid_max = resolver.value("grid_max", args.grid_max, default_max)?;
    if !(grid_min < grid_max) {
        return Err(ldpc_exit::Error::domain("grid_min must be below grid_max"));
    }
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let de = DeParams {
        grid: DensityGrid::new(
            resolver.value("l_max", args.l_max, 25.0f64)?,
            resolver.value("bins", args.bins, 1201usize)?,
        )?,
        tol: resolver.value("tol", args.tol, 1e-7f64)?,
        max_iter: resolver.value("max_iter", args.max_iter, 500usize)?,
    };
    let grid: Vec<f64> = (0..points)
        .map(|i| grid_min + (grid_max - grid_min) * i as f64 / (points.max(2) - 1) as f64)
        .collect();
    let table = gexit_exit_sweep(&lambda, &rho, family, &grid, &de)?;
    let header = output::header(
        "gexit-curve",
        seed,
        &[
            ("ensemble", ensemble.as_str()),
            ("channel", family_s.as_str()),
            ("points", &points.to_string()),
        ],
    );
    write_table(out, &header, "x,w,branch,exit,gexit", &curve_rows(&table))?;
    Ok(0)
}

fn cmd_kernels(
    args: KernelArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let spec = resolver.value("channel", args.channel, "bsc:0.1".to_string())?;
    let l_max = resolver.value("l_max", args.l_max, 10.0f64)?;
    let points = resolver.value("points", args.points, 201usize)?;
    if points < 2 {
        return Err(ldpc_exit::Error::domain("points must be >= 2"));
    }
    let ch = ChannelModel::parse(&spec)?;
    let kl = GexitKernel::new(ch);
    let kd = kl.transform(KernelDomain::D)?;
    let kabs_l = kl.transform(KernelDomain::AbsL)?;
    let kabs_d = kl.transform(KernelDomain::AbsD)?;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let l = -l_max + 2.0 * l_max * i as f64 / (points - 1) as f64;
        let z = (l / 2.0).tanh();
        rows.push(format!(
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            l,
            kl.eval(l),
            kd.eval(z),
            kabs_l.eval(l.abs()),
            kabs_d.eval(z.abs())
        ));
    }
    let header = output::header("kernels", seed, &[("channel", spec.as_str())]);
    write_table(out, &header, "l,k_L,k_D,k_absL,k_absD", &rows)?;
    Ok(0)
}

fn cmd_pml_bound(
    args: PmlArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let p_min = resolver.value("p_min", args.p_min, 0.02f64)?;
    let p_max = resolver.value("p_max", args.p_max, 0.5f64)?;
    let points = resolver.value("points", args.points, 200usize)?;
    if points < 2 || !(p_min < p_max) {
        return Err(ldpc_exit::Error::domain("need points >= 2 and p_min < p_max"));
    }
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let de = DeParams {
        grid: DensityGrid::new(
            resolver.value("l_max", args.l_max, 25.0f64)?,
            resolver.value("bins", args.bins, 2001usize)?,
        )?,
        tol: resolver.value("tol", args.tol, 1e-7f64)?,
        max_iter: resolver.value("max_iter", args.max_iter, 800usize)?,
    };
    let grid: Vec<f64> = (0..points)
        .map(|i| p_min + (p_max - p_min) * i as f64 / (points - 1) as f64)
        .collect();
    let bound = pml_de_bound(&lambda, &rho, &grid, &de)?;
    println!("p_ml_de: {:.6}", bound.p_ml_de);
    println!("w_cross: {:.6}", bound.w_cross);
    let rows: Vec<String> = bound
        .rows
        .iter()
        .map(|r| {
            format!(
                "{:.12e},{:.12e},{:.12e},{:.12e},{}",
                r.p, r.w, r.exit, r.gexit, r.iterations
            )
        })
        .collect();
    if out.is_some() {
        let header = output::header(
            "pml-bound",
            seed,
            &[
                ("ensemble", ensemble.as_str()),
                ("p_ml_de", &format!("{:.6}", bound.p_ml_de)),
            ],
        );
        write_table(out, &header, "p,w,exit,gexit,iterations", &rows)?;
    }
    Ok(0)
}

fn cmd_de_run(
    args: DeRunArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let spec = resolver.required_string("channel", args.channel)?;
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let ch = ChannelModel::parse(&spec)?;
    let de = DeParams {
        grid: DensityGrid::new(
            resolver.value("l_max", args.l_max, 30.0f64)?,
            resolver.value("bins", args.bins, 4001usize)?,
        )?,
        tol: resolver.value("tol", args.tol, 1e-8f64)?,
        max_iter: resolver.value("max_iter", args.max_iter, 2000usize)?,
    };
    let fp = de_bms(&lambda, &rho, ch, &de)?;
    let p = match ch {
        ChannelModel::Bec { eps } => eps,
        ChannelModel::Bsc { p } => p,
        ChannelModel::BiAwgn { snr } => snr,
    };
    let rows = vec![format!(
        "{:.12e},{},{:.12e},{:.12e}",
        p,
        fp.iterations,
        fp.residual,
        fp.edge_density.error_probability()
    )];
    if let Some(path) = resolver.opt_string("dump", args.dump) {
        let f = std::fs::File::create(path)?;
        fp.edge_density.write_binary(std::io::BufWriter::new(f))?;
    }
    let header = output::header(
        "de-run",
        seed,
        &[("ensemble", ensemble.as_str()), ("channel", spec.as_str())],
    );
    write_table(out, &header, "p,iterations,residual,error_prob", &rows)?;
    Ok(0)
}

fn cmd_peel_sim(
    args: PeelSimArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let n = resolver.value("n", args.n, 1000usize)?;
    let eps_list = resolver.value("epsilon", args.epsilon, "0.4".to_string())?;
    let trials = resolver.value("trials", args.trials, 10usize)?;
    if trials == 0 {
        return Err(ldpc_exit::Error::domain("trials must be >= 1"));
    }
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let spec = EnsembleSpec::new(lambda, rho, n)?;
    let mut epsilons = Vec::new();
    for tok in eps_list.split(',') {
        let e: f64 = tok
            .trim()
            .parse()
            .map_err(|_| ldpc_exit::Error::parse(1, format!("bad epsilon `{tok}`")))?;
        ChannelModel::Bec { eps: e }.validate()?;
        epsilons.push(e);
    }
    let zeros = vec![0u8; n];
    let mut rows = Vec::new();
    for &eps in &epsilons {
        let ch = ChannelModel::Bec { eps };
        let per_trial: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ldpc_exit::trial_rng(seed, t as u64);
                let graph = TannerGraph::sample(&spec, rng.gen()).expect("valid spec");
                let outw = ch.transmit(&zeros, &mut rng);
                let res = peel(&graph, &outw).expect("consistent BEC output");
                res.stopping_set.len() as f64 / n as f64
            })
            .collect();
        for (t, frac) in per_trial.iter().enumerate() {
            rows.push(format!("{eps:.6},{t},{frac:.12e}"));
        }
    }
    let header = output::header(
        "peel-sim",
        seed,
        &[
            ("ensemble", ensemble.as_str()),
            ("n", &n.to_string()),
            ("trials", &trials.to_string()),
        ],
    );
    write_table(out, &header, "epsilon,trial,residual_fraction", &rows)?;
    Ok(0)
}

fn cmd_maxwell_sim(
    args: MaxwellSimArgs,
    resolver: &Resolver,
    seed: u64,
    out: Option<String>,
) -> ldpc_exit::Result<i32> {
    let ensemble = resolver.required_string("ensemble", args.ensemble)?;
    let n = resolver.value("n", args.n, 1000usize)?;
    let eps = resolver.value("epsilon", args.epsilon, 0.47f64)?;
    let trials = resolver.value("trials", args.trials, 10usize)?;
    let list_cap = resolver.value("list_cap", args.list_cap, 1u128)?;
    let traces = args.traces || resolver.flag("traces");
    if trials == 0 {
        return Err(ldpc_exit::Error::domain("trials must be >= 1"));
    }
    ChannelModel::Bec { eps }.validate()?;
    let (lambda, rho) = parse_ensemble(&ensemble)?;
    let spec = EnsembleSpec::new(lambda.clone(), rho.clone(), n)?;
    let zeros = vec![0u8; n];
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ldpc_exit::trial_rng(seed, t as u64);
            let graph = TannerGraph::sample(&spec, rng.gen()).expect("valid spec");
            let outw = ChannelModel::Bec { eps }.transmit(&zeros, &mut rng);
            maxwell_decode(
                &graph,
                &outw,
                rng.gen(),
                MaxwellOptions {
                    list_cap,
                    record_trace: traces,
                },
            )
            .expect("consistent BEC output")
        })
        .collect();

    let target = OutputTarget::new(out)?;
    if traces {
        for (t, res) in results.iter().enumerate() {
            let rows: Vec<String> = res
                .trace
                .points
                .iter()
                .map(|p| format!("{t},{},{},{},{}", p.ell, p.h, p.guesses, p.resolutions))
                .collect();
            let header = output::header(
                "maxwell-sim",
                seed,
                &[
                    ("ensemble", ensemble.as_str()),
                    ("n", &n.to_string()),
                    ("epsilon", &format!("{eps}")),
                    ("trial", &t.to_string()),
                ],
            );
            target.write_named_table(
                &format!("trace_{t:04}.csv"),
                &header,
                "trial,ell,h,guesses,resolutions",
                &rows,
            )?;
        }
    }
    let rows: Vec<String> = results
        .iter()
        .enumerate()
        .map(|(t, r)| {
            format!(
                "{t},{},{},{}",
                r.total_guesses,
                r.total_resolutions,
                r.h_final()
            )
        })
        .collect();
    let header = output::header(
        "maxwell-sim",
        seed,
        &[
            ("ensemble", ensemble.as_str()),
            ("n", &n.to_string()),
            ("epsilon", &format!("{eps}")),
            ("trials", &trials.to_string()),
        ],
    );
    target.write_named_table(
        "summary.csv",
        &header,
        "trial,guesses,resolutions,h_final",
        &rows,
    )?;

    let nf = n as f64;
    let mean = |f: &dyn Fn(&ldpc_exit::MaxwellResult) -> f64| {
        results.iter().map(|r| f(r)).sum::<f64>() / trials as f64
    };
    let mg = mean(&|r| r.total_guesses as f64 / nf);
    let mr = mean(&|r| r.total_resolutions as f64 / nf);
    let mh = mean(&|r| r.h_final() as f64 / nf);
    println!("mean_guesses_per_bit: {mg:.6}");
    println!("mean_resolutions_per_bit: {mr:.6}");
    println!("mean_h_final_per_bit: {mh:.6}");
    match maxwell_area_predictions(&lambda, &rho, eps) {
        Ok(pred) => {
            println!("predicted_guess_area: {:.6}", pred.guess_area);
            println!("predicted_resolution_area: {:.6}", pred.resolution_area);
            println!("predicted_h_final: {:.6}", pred.h_final);
        }
        Err(_) => println!("predicted_guess_area: 0 (below iterative threshold)"),
    }
    Ok(0)
}

fn cmd_oracle_check() -> ldpc_exit::Result<i32> {
    let rows = run_identity_suite()?;
    let mut all_pass = true;
    println!("{:<44} {:>12} {:>10} {:>6}", "check", "worst", "tolerance", "pass");
    for row in &rows {
        all_pass &= row.pass;
        println!(
            "{:<44} {:>12.3e} {:>10.1e} {:>6}",
            row.name,
            row.worst,
            row.tolerance,
            if row.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(if all_pass { 0 } else { EXIT_ORACLE })
}
