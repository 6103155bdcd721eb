//! `zskel`: batch CLI over the solver, analytic solutions, heuristic bounds,
//! condition diagnostics, and the three figure-reproduction sweeps.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use zolotarev::analytic::{zolotarev_bounds, zolotarev_nodes};
use zolotarev::domain::{validate_pair, Domain, PairSpec, SeparatedPair};
use zolotarev::heuristic::{best_partition, heuristic_nodes, sample_experiment, ExperimentRow};
use zolotarev::skeleton::{kappa_asymptote, SkeletonDecomposition, SkeletonForm};
use zolotarev::solver::{solve, SolveOptions, SolveOutcome};
use zolotarev::svd_compare::transferability;

const LN10: f64 = std::f64::consts::LN_10;

#[derive(Parser)]
#[command(name = "zskel", version, about = "Zolotarev numbers and Cauchy skeleton decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Suppress the leading metadata comment line (it carries a timestamp).
    #[arg(long)]
    no_meta: bool,
}

#[derive(Args)]
struct PairArgs {
    /// Gap parameter for the symmetric pair X = [lambda, 1], Y = [-1, -lambda].
    #[arg(long)]
    lambda: Option<f64>,
    /// JSON domain file {"X": {...}, "Y": {...}} (intervals or points).
    #[arg(long)]
    domain: Option<PathBuf>,
}

#[derive(Args)]
struct SolveTuning {
    #[arg(long, default_value_t = 1e-8)]
    certify_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form solution on [lambda,1] x [-1,-lambda]: nodes, log Z, bounds.
    Analytic {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Equioscillation solve of Z_n(X, Y); exit 0 certified, 2 uncertified.
    Solve {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        tuning: SolveTuning,
        /// Also write the skeleton decomposition (nodes + weights) as JSON.
        #[arg(long)]
        skeleton_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best heuristic partition bound and nodes for point-set domains.
    Heuristic {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Condition numbers kappa_r(X,Y), kappa_r(Y,X) and their asymptote.
    Kappa {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        n: usize,
        /// Reuse a previously saved skeleton instead of solving.
        #[arg(long)]
        skeleton_in: Option<PathBuf>,
        #[command(flatten)]
        tuning: SolveTuning,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Figure-reproduction sweeps emitting tidy CSV.
    Fig {
        #[command(subcommand)]
        which: FigCommand,
    },
}

#[derive(Subcommand)]
enum FigCommand {
    /// Heuristic-vs-solver statistics over random point sets.
    Heuristic {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        set_size: usize,
        /// Rank range A:B (inclusive).
        #[arg(long, default_value = "3:14")]
        n_range: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// kappa_r(lambda) minus its Chebyshev asymptote over a (r, lambda) grid.
    Condition {
        /// Rank range A:B (inclusive).
        #[arg(long, default_value = "2:100")]
        n_range: String,
        /// Log-spaced grid A:B:COUNT.
        #[arg(long, default_value = "1e-7:0.9:8")]
        lambda_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Skeleton vs truncated SVD transferability on extrema point sets.
    Equivalence {
        /// Degree of the analytic solution whose extrema form the sets.
        #[arg(long, default_value_t = 99)]
        n: usize,
        #[arg(long, default_value = "1e-7:1e-2:6")]
        lambda_grid: String,
        /// Largest rank to compare (default: saturate to the noise floor).
        #[arg(long)]
        r_max: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    install_thread_cap()?;
    match cli.command {
        Command::Analytic { lambda, n, output } => cmd_analytic(lambda, n, &output),
        Command::Solve { pair, n, tuning, skeleton_out, output } => {
            cmd_solve(&pair, n, &tuning, skeleton_out, &output)
        }
        Command::Heuristic { domain, n, output } => cmd_heuristic(&domain, n, &output),
        Command::Kappa { pair, n, skeleton_in, tuning, output } => {
            cmd_kappa(&pair, n, skeleton_in, &tuning, &output)
        }
        Command::Fig { which } => match which {
            FigCommand::Heuristic { seed, samples, set_size, n_range, output } => {
                fig_heuristic(seed, samples, set_size, &n_range, &output)
            }
            FigCommand::Condition { n_range, lambda_grid, output } => {
                fig_condition(&n_range, &lambda_grid, &output)
            }
            FigCommand::Equivalence { n, lambda_grid, r_max, output } => {
                fig_equivalence(n, &lambda_grid, r_max, &output)
            }
        },
    }
}

/// ZS_THREADS caps the rayon pool used by the figure sweeps.
fn install_thread_cap() -> Result<(), Box<dyn std::error::Error>> {
    if let Ok(t) = std::env::var("ZS_THREADS") {
        let threads: usize = t.parse().map_err(|_| format!("bad ZS_THREADS value {t:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text.split_once(':').ok_or_else(|| format!("range {text:?} is not A:B"))?;
    let lo = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
    let hi = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn parse_lambda_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {text:?} is not A:B:COUNT"));
    }
    let a: f64 = parts[0].parse().map_err(|_| format!("bad grid start {:?}", parts[0]))?;
    let b: f64 = parts[1].parse().map_err(|_| format!("bad grid end {:?}", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|_| format!("bad grid count {:?}", parts[2]))?;
    if !(a > 0.0 && b > 0.0 && a < 1.0 && b < 1.0 && count >= 1) {
        return Err("lambda grid endpoints must lie in (0,1)".into());
    }
    if count == 1 {
        return Ok(vec![a]);
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

fn load_pair(args: &PairArgs) -> Result<SeparatedPair<f64>, Box<dyn std::error::Error>> {
    match (&args.lambda, &args.domain) {
        (Some(lam), None) => {
            let x = Domain::interval(*lam, 1.0)?;
            let y = Domain::interval(-1.0, -*lam)?;
            Ok(validate_pair(x, y)?)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let (x, y) = PairSpec::parse(&text)?;
            Ok(validate_pair(x, y)?)
        }
        _ => Err("provide exactly one of --lambda or --domain".into()),
    }
}

fn meta_line(desc: &str) -> String {
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# zskel {desc} unix_time={ts}\n")
}

fn emit(output: &OutputArgs, desc: &str, body: String) -> Result<(), Box<dyn std::error::Error>> {
    let mut text = String::new();
    if !output.no_meta && output.format == Format::Csv {
        text.push_str(&meta_line(desc));
    }
    text.push_str(&body);
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// JSON-safe float: non-finite values become strings ("-inf", "inf", "nan").
fn jnum(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v.is_nan() {
        serde_json::json!("nan")
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else {
        serde_json::json!("-inf")
    }
}

fn jvec(v: &[f64]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(|x| jnum(*x)).collect())
}

fn cmd_analytic(
    lambda: f64,
    n: usize,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let sol = zolotarev_nodes(n, lambda)?;
    let b = zolotarev_bounds(n, lambda)?;
    let dec = SkeletonDecomposition::new(sol.roots.clone(), sol.poles.clone(), SkeletonForm::TwoSided)?;
    let x_dom = Domain::interval(lambda, 1.0)?;
    let y_dom = Domain::interval(-1.0, -lambda)?;
    let (kxy, kyx) = dec.kappa(&x_dom, &y_dom)?;
    let body = match output.format {
        Format::Json => {
            let v = serde_json::json!({
                "n": n,
                "lambda": lambda,
                "log_z": jnum(sol.log_z),
                "log10_z": jnum(sol.log_z / LN10),
                "bounds": {
                    "log_lower": jnum(b.log_lower),
                    "log_upper": jnum(b.log_upper),
                    "log_upper2": jnum(b.log_upper2),
                    "log_upper3": jnum(b.log_upper3),
                },
                "roots": jvec(&sol.roots),
                "poles": jvec(&sol.poles),
                "extrema_x": jvec(&sol.extrema_x),
                "extrema_y": jvec(&sol.extrema_y),
                "kappa_xy": jnum(kxy),
                "kappa_yx": jnum(kyx),
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "field,value")?;
            writeln!(s, "n,{n}")?;
            writeln!(s, "lambda,{lambda}")?;
            writeln!(s, "log_Zn,{}", sol.log_z)?;
            writeln!(s, "log10_Zn,{}", sol.log_z / LN10)?;
            writeln!(s, "log_lower,{}", b.log_lower)?;
            writeln!(s, "log_upper,{}", b.log_upper)?;
            writeln!(s, "log_upper2,{}", b.log_upper2)?;
            writeln!(s, "log_upper3,{}", b.log_upper3)?;
            writeln!(s, "kappa_xy,{kxy}")?;
            writeln!(s, "kappa_yx,{kyx}")?;
            writeln!(s, "i,root,pole,extremum_x,extremum_y")?;
            for i in 0..=n {
                let (r, p) = if i < n {
                    (sol.roots[i].to_string(), sol.poles[i].to_string())
                } else {
                    (String::new(), String::new())
                };
                writeln!(s, "{},{},{},{},{}", i + 1, r, p, sol.extrema_x[i], sol.extrema_y[i])?;
            }
            s
        }
    };
    emit(output, &format!("analytic lambda={lambda} n={n}"), body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    pair_args: &PairArgs,
    n: usize,
    tuning: &SolveTuning,
    skeleton_out: Option<PathBuf>,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = load_pair(pair_args)?;
    let opts = SolveOptions {
        max_iter: tuning.max_iter,
        certify_tol: tuning.certify_tol,
        ..SolveOptions::default()
    };
    let outcome = solve(&pair, n, &opts)?;
    let report = outcome.report().clone();
    let (roots, poles, kappa) = match &outcome {
        SolveOutcome::Solved(eq, _) => {
            let (r, p) = eq.nodes_original()?;
            let dec = SkeletonDecomposition::new(r.clone(), p.clone(), SkeletonForm::TwoSided)?;
            let k = dec.kappa(pair.x(), pair.y())?;
            if let Some(path) = &skeleton_out {
                std::fs::write(path, dec.to_json())?;
            }
            (r, p, Some(k))
        }
        SolveOutcome::Covering(w, _) => {
            if let Some(path) = &skeleton_out {
                return Err(format!(
                    "cannot write a skeleton for the covering case to {}",
                    path.display()
                )
                .into());
            }
            (w.roots.clone(), w.poles.clone(), None)
        }
    };
    let b = zolotarev_bounds(n.max(1), pair.lambda())?;
    let body = match output.format {
        Format::Json => {
            let v = serde_json::json!({
                "n": n,
                "lambda": pair.lambda(),
                "log_z": jnum(report.log_z),
                "log10_z": jnum(report.log_z / LN10),
                "iterations": report.iterations,
                "final_deviation": jnum(report.final_deviation),
                "certified": report.certified,
                "covering": report.covering,
                "bounds_bounding_interval": {
                    "log_lower": jnum(b.log_lower),
                    "log_upper": jnum(b.log_upper),
                    "log_upper2": jnum(b.log_upper2),
                    "log_upper3": jnum(b.log_upper3),
                },
                "roots": jvec(&roots),
                "poles": jvec(&poles),
                "kappa_xy": kappa.map_or(serde_json::Value::Null, |k| jnum(k.0)),
                "kappa_yx": kappa.map_or(serde_json::Value::Null, |k| jnum(k.1)),
                "alpha_history": jvec(&report.alpha_history),
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "field,value")?;
            writeln!(s, "n,{n}")?;
            writeln!(s, "lambda,{}", pair.lambda())?;
            writeln!(s, "log_Zn,{}", report.log_z)?;
            writeln!(s, "log10_Zn,{}", report.log_z / LN10)?;
            writeln!(s, "iterations,{}", report.iterations)?;
            writeln!(s, "final_deviation,{}", report.final_deviation)?;
            writeln!(s, "certified,{}", report.certified)?;
            writeln!(s, "covering,{}", report.covering)?;
            writeln!(s, "log_lower,{}", b.log_lower)?;
            writeln!(s, "log_upper,{}", b.log_upper)?;
            if let Some((kxy, kyx)) = kappa {
                writeln!(s, "kappa_xy,{kxy}")?;
                writeln!(s, "kappa_yx,{kyx}")?;
            }
            writeln!(s, "i,root,pole")?;
            for i in 0..roots.len() {
                writeln!(s, "{},{},{}", i + 1, roots[i], poles[i])?;
            }
            s
        }
    };
    emit(output, &format!("solve n={n}"), body)?;
    Ok(if report.certified { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_heuristic(
    domain: &PathBuf,
    n: usize,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let text = std::fs::read_to_string(domain)?;
    let (x, y) = PairSpec::parse(&text)?;
    let (xs, ys) = match (&x, &y) {
        (Domain::PointSet(a), Domain::PointSet(b)) => (a.clone(), b.clone()),
        _ => return Err("heuristic partitions require point-set domains".into()),
    };
    let part = best_partition(&xs, &ys, n)?;
    let (roots, poles) = heuristic_nodes(&part, &xs, &ys, n)?;
    let dec = SkeletonDecomposition::new(roots.clone(), poles.clone(), SkeletonForm::TwoSided);
    let measured = match &dec {
        Ok(d) => d.max_relative_error(&x, &y, 0)?,
        Err(_) => f64::NAN, // covering node lists can repeat points
    };
    let body = match output.format {
        Format::Json => {
            let v = serde_json::json!({
                "n": n,
                "n_minus": part.n_minus,
                "n_plus": part.n_plus,
                "lambda_core": part.lambda_core.map_or(serde_json::Value::Null, jnum),
                "log_bound": jnum(part.log_bound),
                "log10_bound": jnum(part.log_bound / LN10),
                "log_bound_loose": jnum(part.log_bound_loose),
                "max_relative_error": jnum(measured),
                "roots": jvec(&roots),
                "poles": jvec(&poles),
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "field,value")?;
            writeln!(s, "n,{n}")?;
            writeln!(s, "n_minus,{}", part.n_minus)?;
            writeln!(s, "n_plus,{}", part.n_plus)?;
            writeln!(s, "log_bound,{}", part.log_bound)?;
            writeln!(s, "log10_bound,{}", part.log_bound / LN10)?;
            writeln!(s, "log_bound_loose,{}", part.log_bound_loose)?;
            writeln!(s, "max_relative_error,{measured}")?;
            writeln!(s, "i,root,pole")?;
            for i in 0..roots.len() {
                writeln!(s, "{},{},{}", i + 1, roots[i], poles[i])?;
            }
            s
        }
    };
    emit(output, &format!("heuristic n={n}"), body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_kappa(
    pair_args: &PairArgs,
    n: usize,
    skeleton_in: Option<PathBuf>,
    tuning: &SolveTuning,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pair = load_pair(pair_args)?;
    let dec = match skeleton_in {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            SkeletonDecomposition::from_json(&text)?
        }
        None => {
            // analytic nodes when the pair is the symmetric one, else solve
            if pair_args.lambda.is_some() {
                let sol = zolotarev_nodes(n, pair.lambda())?;
                SkeletonDecomposition::new(sol.roots, sol.poles, SkeletonForm::TwoSided)?
            } else {
                let opts = SolveOptions {
                    max_iter: tuning.max_iter,
                    certify_tol: tuning.certify_tol,
                    ..SolveOptions::default()
                };
                match solve(&pair, n, &opts)? {
                    SolveOutcome::Solved(eq, _) => {
                        let (r, p) = eq.nodes_original()?;
                        SkeletonDecomposition::new(r, p, SkeletonForm::TwoSided)?
                    }
                    SolveOutcome::Covering(..) => {
                        return Err("kappa undefined for the covering case".into())
                    }
                }
            }
        }
    };
    let r = dec.rank();
    let (kxy, kyx) = dec.kappa(pair.x(), pair.y())?;
    let asym: f64 = kappa_asymptote(r.max(1));
    let body = match output.format {
        Format::Json => {
            let v = serde_json::json!({
                "r": r,
                "lambda": pair.lambda(),
                "kappa_xy": jnum(kxy),
                "kappa_yx": jnum(kyx),
                "kappa_asymptote": jnum(asym),
                "offset_xy": jnum(kxy - asym),
                "offset_yx": jnum(kyx - asym),
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut s = String::new();
            writeln!(s, "field,value")?;
            writeln!(s, "r,{r}")?;
            writeln!(s, "lambda,{}", pair.lambda())?;
            writeln!(s, "kappa_xy,{kxy}")?;
            writeln!(s, "kappa_yx,{kyx}")?;
            writeln!(s, "kappa_asymptote,{asym}")?;
            writeln!(s, "offset_xy,{}", kxy - asym)?;
            writeln!(s, "offset_yx,{}", kyx - asym)?;
            s
        }
    };
    emit(output, &format!("kappa n={n}"), body)?;
    Ok(ExitCode::SUCCESS)
}

fn fig_heuristic(
    seed: u64,
    samples: usize,
    set_size: usize,
    n_range: &str,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (lo, hi) = parse_range(n_range)?;
    let rows = sample_experiment(seed, samples, set_size, lo..=hi);
    let mut s = String::new();
    writeln!(s, "{},log10_Zn,log10_bound", ExperimentRow::CSV_HEADER)?;
    for row in &rows {
        writeln!(s, "{},{},{}", row.to_csv_row(), row.log_z / LN10, row.log_bound / LN10)?;
    }
    emit(output, &format!("fig heuristic seed={seed} samples={samples}"), s)?;
    Ok(ExitCode::SUCCESS)
}

fn fig_condition(
    n_range: &str,
    lambda_grid: &str,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (lo, hi) = parse_range(n_range)?;
    let lambdas = parse_lambda_grid(lambda_grid)?;
    let mut tasks = Vec::new();
    for &lam in &lambdas {
        for r in lo..=hi.max(lo) {
            tasks.push((lam, r));
        }
    }
    let rows: Vec<String> = tasks
        .par_iter()
        .map(|&(lam, r)| {
            let sol = zolotarev_nodes(r, lam).expect("valid grid parameters");
            let dec = SkeletonDecomposition::new(sol.roots, sol.poles, SkeletonForm::TwoSided)
                .expect("analytic nodes are interleaved");
            let x_dom = Domain::interval(lam, 1.0).unwrap();
            let y_dom = Domain::interval(-1.0, -lam).unwrap();
            let (kxy, kyx) = dec.kappa(&x_dom, &y_dom).expect("kappa on intervals");
            let asym: f64 = kappa_asymptote(r);
            format!(
                "{lam},{},{r},{kxy},{kyx},{asym},{},{}",
                lam.log10(),
                kxy - asym,
                kyx - asym
            )
        })
        .collect();
    let mut s = String::new();
    writeln!(s, "lambda,log10_lambda,r,kappa_xy,kappa_yx,kappa_asymptote,offset_xy,offset_yx")?;
    for row in rows {
        writeln!(s, "{row}")?;
    }
    emit(output, "fig condition", s)?;
    Ok(ExitCode::SUCCESS)
}

fn fig_equivalence(
    n: usize,
    lambda_grid: &str,
    r_max: Option<usize>,
    output: &OutputArgs,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let lambdas = parse_lambda_grid(lambda_grid)?;
    let cap = r_max.unwrap_or(n.saturating_sub(1)).max(1);
    let reports: Vec<(f64, String)> = lambdas
        .par_iter()
        .map(|&lam| {
            let sol = zolotarev_nodes(n, lam).expect("valid grid parameters");
            let xs = sol.extrema_x.clone();
            let ys: Vec<f64> = sol.extrema_y.iter().rev().copied().collect();
            let report = transferability(&xs, &ys, cap, &SolveOptions::default())
                .expect("transferability on extrema sets");
            let mut block = String::new();
            for row in &report.rows {
                let _ = writeln!(
                    block,
                    "{lam},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    lam.log10(),
                    row.r,
                    row.err2_svd,
                    row.err2_skel,
                    row.errxy_svd,
                    row.errxy_skel,
                    row.mu_skel,
                    row.mu_svd,
                    report.eta_minus,
                    report.eta_plus,
                    report.eta_minus_weighted,
                    report.eta_plus_weighted,
                    row.certified
                );
            }
            (lam, block)
        })
        .collect();
    let mut s = String::new();
    writeln!(
        s,
        "lambda,log10_lambda,r,err2_svd,err2_skel,errxy_svd,errxy_skel,mu_skel,mu_svd,eta_minus,eta_plus,eta_minus_weighted,eta_plus_weighted,certified"
    )?;
    for (_, block) in reports {
        s.push_str(&block);
    }
    emit(output, &format!("fig equivalence n={n}"), s)?;
    Ok(ExitCode::SUCCESS)
}
