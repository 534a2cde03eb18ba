//! `fourth-moment`: command-line front end of the workbench.
//!
//! Every subcommand writes CSV with a leading `#` comment block. Exit codes:
//! 0 success, 1 usage error, 2 computation failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fourth_moment::amplifier::amplified_moment;
use fourth_moment::arith::gcd;
use fourth_moment::cache::load_or_compute;
use fourth_moment::exponents::{decimal, exponent_report, parse_rational, subconvexity_delta, theta_from_lambda, ThetaValue, Q};
use fourth_moment::lfun::central_values;
use fourth_moment::modsym::EigenSystem;
use fourth_moment::moments::{default_nmax, moment_sweep, prepare_level, MainTermPolynomial};
use fourth_moment::sieve::{ratio_experiment_with, SequenceKind, EXPERIMENT_THETA};
use fourth_moment::special::BumpShape;
use fourth_moment::tracesums::{lemma1_ratio_with, petersson_batch, Lemma1Config, THETA_KS};
use fourth_moment::{Error, Strategy};
use num_traits::ToPrimitive;

#[derive(Parser, Debug)]
#[command(name = "fourth-moment", version, about = "Fourth-moment workbench at prime level")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory of cached eigensystems.
    #[arg(long, global = true, env = "FOURTH_MOMENT_CACHE")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute (or load) the eigensystem of a level and cache it.
    Eigen {
        #[arg(short = 'q', long = "level")]
        level: u64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Root numbers and central values of every form.
    Lvalue {
        #[arg(short = 'q', long = "level")]
        level: u64,
        #[arg(long)]
        nmax: Option<usize>,
    },
    /// Twisted fourth moment over one or more levels.
    Moment {
        #[arg(short = 'q', long = "level", value_delimiter = ',', required = true)]
        levels: Vec<u64>,
        #[arg(short = 'l', long = "twist", default_value_t = 1)]
        twist: u64,
        /// "leading" or comma-separated coefficients of a polynomial in log q.
        #[arg(long = "main-term")]
        main_term: Option<String>,
    },
    /// Amplifier values and the amplified moment per form.
    Amplify {
        #[arg(short = 'q', long = "level")]
        level: u64,
        #[arg(short = 'L', long = "length")]
        length: f64,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value = "kim-sarnak")]
        theta: String,
    },
    /// Exact exponent table and discrepancy report.
    Exponents {
        /// kim-sarnak, selberg-conj, an exact λ₁ such as 975/4096, or theta:<rational>.
        #[arg(long, default_value = "kim-sarnak")]
        theta: String,
    },
    /// Random trials of the trilinear Kloosterman inequality.
    SieveBench {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 256.0)]
        size: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kind::Rademacher)]
        kind: Kind,
    },
    /// The divisor-weighted Kloosterman c-sum against its bound.
    Lemma1 {
        #[arg(short = 'q', long = "level")]
        level: u64,
        #[arg(short = 'l', long = "twist", default_value_t = 1)]
        twist: u64,
        #[arg(short = 'M', long = "m-scale")]
        m: f64,
        #[arg(short = 'N', long = "n-scale")]
        n: f64,
        #[arg(short = 'C', long = "c-start")]
        c: f64,
        /// The c-sum runs up to this multiple of C.
        #[arg(long, default_value_t = 40.0)]
        cap_factor: f64,
    },
    /// Truncated Petersson sums against the spectral side.
    PeterssonCheck {
        #[arg(short = 'q', long = "level")]
        level: u64,
        /// Largest m and n.
        #[arg(long, default_value_t = 6)]
        bound: u64,
        #[arg(long)]
        c_max: Option<u64>,
        #[arg(long)]
        nmax: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Rademacher,
    UnitCircle,
    Singleton,
}

impl From<Kind> for SequenceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Rademacher => SequenceKind::Rademacher,
            Kind::UnitCircle => SequenceKind::UnitCircle,
            Kind::Singleton => SequenceKind::Singleton,
        }
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::NotPrime(_) | Error::ZeroArgument => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|report| emit(cli.out.as_deref(), &report)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, report: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, report).map_err(|e| Failure::Compute(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn header(theta: Option<&str>) -> String {
    let mut h = format!("# fourth-moment {}\n", env!("CARGO_PKG_VERSION"));
    let args: Vec<String> = std::env::args().skip(1).collect();
    let _ = writeln!(h, "# invocation: {}", args.join(" "));
    if let Some(t) = theta {
        let _ = writeln!(h, "# theta: {t}");
    }
    h
}

fn run(cli: &Cli) -> Outcome {
    let cache = cli.cache_dir.as_deref();
    match &cli.command {
        Command::Eigen { level, nmax } => cmd_eigen(*level, *nmax, cache),
        Command::Lvalue { level, nmax } => cmd_lvalue(*level, *nmax, cache),
        Command::Moment { levels, twist, main_term } => cmd_moment(levels, *twist, main_term.as_deref()),
        Command::Amplify { level, length, nmax, theta } => cmd_amplify(*level, *length, *nmax, theta, cache),
        Command::Exponents { theta } => cmd_exponents(theta),
        Command::SieveBench { trials, size, seed, kind } => cmd_sieve_bench(*trials, *size, *seed, *kind),
        Command::Lemma1 { level, twist, m, n, c, cap_factor } => cmd_lemma1(*level, *twist, *m, *n, *c, *cap_factor),
        Command::PeterssonCheck { level, bound, c_max, nmax } => cmd_petersson(*level, *bound, *c_max, *nmax, cache),
    }
}

/// Eigensystem with root numbers and weights, through the cache when one is configured.
fn level_system(q: u64, nmax: Option<usize>, cache: Option<&Path>) -> Result<(EigenSystem, Option<PathBuf>), Failure> {
    let n = nmax.unwrap_or_else(|| default_nmax(q));
    let compute = || prepare_level(q, n, Strategy::auto());
    match cache {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Compute(format!("creating {}: {e}", dir.display())))?;
            let es = load_or_compute(dir, q, n, compute)?;
            Ok((es, Some(fourth_moment::cache::cache_path(dir, q, n))))
        }
        None => Ok((compute()?, None)),
    }
}

fn cmd_eigen(q: u64, nmax: Option<usize>, cache: Option<&Path>) -> Outcome {
    let dir = cache.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".fourth-moment-cache"));
    let (es, path) = level_system(q, nmax, Some(&dir))?;
    let mut s = header(None);
    if let Some(p) = path {
        let _ = writeln!(s, "# cache: {}", p.display());
    }
    let _ = writeln!(s, "q,g,n_max,form,epsilon,weight,lambda_2,lambda_3");
    for (i, f) in es.forms.iter().enumerate() {
        let w = f.weight.map_or(String::new(), |w| format!("{w:.15e}"));
        let _ = writeln!(s, "{q},{},{},{i},{},{w},{:.12},{:.12}", es.len(), es.n_max, f.epsilon, f.lambda[2], f.lambda[3]);
    }
    Ok(s)
}

fn cmd_lvalue(q: u64, nmax: Option<usize>, cache: Option<&Path>) -> Outcome {
    let (es, _) = level_system(q, nmax, cache)?;
    let vals = central_values(&es, Strategy::auto())?;
    let mut s = header(None);
    let _ = writeln!(s, "q,form,epsilon,central_value,terms,est_error");
    for v in vals {
        let _ = writeln!(s, "{q},{},{},{:.12},{},{:.1e}", v.form_index, v.epsilon, v.value, v.truncation_length, v.est_error);
    }
    Ok(s)
}

fn parse_main_term(spec: &str) -> Result<MainTermPolynomial, Failure> {
    if spec == "leading" {
        return Ok(MainTermPolynomial::leading());
    }
    let coeffs: Result<Vec<f64>, _> = spec.split(',').map(|c| c.trim().parse::<f64>()).collect();
    coeffs
        .map(MainTermPolynomial::new)
        .map_err(|_| Failure::Usage(format!("main term must be \"leading\" or comma-separated numbers, got {spec:?}")))
}

fn cmd_moment(levels: &[u64], twist: u64, main_term: Option<&str>) -> Outcome {
    let poly = main_term.map(parse_main_term).transpose()?;
    let rows = moment_sweep(levels, twist, poly.as_ref(), Strategy::auto());
    let mut s = header(None);
    let _ = writeln!(s, "q,l,g,harmonic,natural{}", if poly.is_some() { ",main_term,residual" } else { "" });
    let mut ok = 0;
    for (q, row) in rows {
        match row {
            Ok(r) => {
                ok += 1;
                let _ = write!(s, "{q},{},{},{:.12e},{:.12e}", r.twist, r.g, r.harmonic_value, r.natural_value);
                if let (Some(p), Some(res)) = (r.main_term, r.residual()) {
                    let _ = write!(s, ",{p:.12e},{res:.12e}");
                }
                s.push('\n');
            }
            Err(e) => {
                let _ = writeln!(s, "# q={q}: {e}");
            }
        }
    }
    if ok == 0 {
        eprint!("{s}");
        return Err(Failure::Compute("every level failed".into()));
    }
    Ok(s)
}

fn parse_theta(spec: &str) -> Result<ThetaValue, Failure> {
    let t = match spec {
        "kim-sarnak" => ThetaValue::kim_sarnak(),
        "selberg-conj" => ThetaValue::conjectural(),
        other => match other.strip_prefix("theta:") {
            Some(t) => ThetaValue::new(parse_rational(t)?, "user")?,
            None => theta_from_lambda(&parse_rational(other.strip_prefix("lambda:").unwrap_or(other))?)?,
        },
    };
    Ok(t)
}

fn cmd_amplify(q: u64, length: f64, nmax: Option<usize>, theta: &str, cache: Option<&Path>) -> Outcome {
    let theta = parse_theta(theta)?;
    let delta = subconvexity_delta(&theta)?.delta.to_f64().unwrap_or(f64::NAN);
    let (es, _) = level_system(q, nmax, cache)?;
    let m = amplified_moment(&es, length, delta)?;
    let mut s = header(Some(&theta.to_string()));
    let _ = writeln!(s, "# total amplified moment: {:.12e}", m.total);
    let _ = writeln!(s, "q,L,form,Lambda,weight,central_value,implied_bound,bound_ratio,weight_ratio");
    for r in &m.rows {
        let _ = writeln!(
            s,
            "{q},{length},{},{},{:.12e},{:.12},{:.12},{:.6},{:.6}",
            r.form_index, r.amplified, r.weight, r.central_value, r.implied_bound, r.bound_ratio, r.weight_ratio
        );
    }
    Ok(s)
}

fn row(s: &mut String, name: &str, x: &Q) {
    let _ = writeln!(s, "{name},{x},{}", decimal(x, 10));
}

fn cmd_exponents(spec: &str) -> Outcome {
    let theta = parse_theta(spec)?;
    let r = exponent_report(&theta)?;
    let mut s = header(Some(&theta.to_string()));
    let _ = writeln!(s, "quantity,exact,decimal");
    row(&mut s, "theta", &theta.value);
    for sym in fourth_moment::exponents::Symbol::ALL.iter() {
        row(&mut s, &format!("cutoff.{}", sym.name()), r.cutoff.branch1.exponent(*sym));
    }
    row(&mut s, "cutoff.q (M = N = q)", r.cutoff.branch2.exponent(fourth_moment::exponents::Symbol::Q));
    for (i, e) in r.errors.q_exponents().iter().enumerate() {
        row(&mut s, &format!("error_term_{}.q", i + 1), e);
    }
    row(&mut s, "error_exponent", &-r.errors.max_q_exponent());
    row(&mut s, "delta", &r.delta.delta);
    row(&mut s, "amplifier_length", &r.delta.length_exponent);
    row(&mut s, "delta1_formula", &r.mollifier.delta1_formula);
    for (i, c) in r.mollifier.delta1_constraints.iter().enumerate() {
        row(&mut s, &format!("delta1_constraint_{}", i + 1), c);
    }
    row(&mut s, "delta1_min", &r.mollifier.delta1_min);
    row(&mut s, "delta2", &r.mollifier.delta2);
    row(&mut s, "lemma_range", &r.thresholds.lemma_range);
    row(&mut s, "amplifier_range", &r.thresholds.amplifier_range);
    for (i, c) in r.thresholds.per_term.iter().enumerate() {
        row(&mut s, &format!("per_term_threshold_{}", i + 1), c);
    }
    row(&mut s, "per_term_min", &r.thresholds.per_term_min);
    let _ = writeln!(s, "# discrepancies");
    let _ = writeln!(s, "quantity,derived,stated,status,note");
    for d in &r.discrepancies {
        let status = if d.agrees() { "agrees" } else { "FLAGGED" };
        let _ = writeln!(s, "{},{},{},{status},{}", d.quantity, d.derived, d.stated, d.note);
    }
    let _ = writeln!(s, "# identities: {}", if r.identities_hold() { "hold" } else { "FAIL" });
    if !r.identities_hold() {
        eprint!("{s}");
        return Err(Failure::Compute("an internally checkable identity failed".into()));
    }
    Ok(s)
}

fn cmd_sieve_bench(trials: usize, size: f64, seed: u64, kind: Kind) -> Outcome {
    let stats = ratio_experiment_with(trials, size, seed, kind.into(), Strategy::auto())?;
    let mut s = header(Some(&format!("{EXPERIMENT_THETA}")));
    let _ = writeln!(s, "# seed: {seed}, max ratio {:.6e}, mean ratio {:.6e}", stats.max, stats.mean);
    let _ = writeln!(s, "trial,r,s,d,M,N,C,sign,abs_value,rhs,ratio");
    for t in &stats.trials {
        let _ = writeln!(
            s,
            "{},{},{},{},{:.6},{:.6},{:.6},{},{:.12e},{:.12e},{:.12e}",
            t.trial,
            t.r,
            t.s,
            t.d,
            t.scale_m,
            t.scale_n,
            t.scale_c,
            t.sign,
            t.value.norm(),
            t.rhs,
            t.ratio
        );
    }
    Ok(s)
}

fn cmd_lemma1(q: u64, l: u64, m: f64, n: f64, c: f64, cap_factor: f64) -> Outcome {
    if !fourth_moment::arith::is_prime(q) {
        return Err(Failure::Usage(Error::NotPrime(q).to_string()));
    }
    if !(c > (l as f64 * m * n).sqrt()) {
        return Err(Failure::Usage(format!(
            "hypothesis C > sqrt(l M N) violated: C = {c}, sqrt(l M N) = {:.6}",
            (l as f64 * m * n).sqrt()
        )));
    }
    let cfg = Lemma1Config { c_cap_factor: cap_factor, ..Lemma1Config::default() };
    let r = lemma1_ratio_with(q, l, m, n, c, BumpShape::Smoothstep, &cfg)?;
    let mut s = header(Some(&format!("{THETA_KS}")));
    let _ = writeln!(s, "q,l,M,N,C,lhs,rhs,ratio,c_max,tail_bound");
    let _ = writeln!(
        s,
        "{q},{l},{m},{n},{c},{:.12e},{:.12e},{:.6e},{},{:.3e}",
        r.lhs, r.rhs, r.ratio, r.c_max, r.tail_bound
    );
    Ok(s)
}

fn cmd_petersson(q: u64, bound: u64, c_max: Option<u64>, nmax: Option<usize>, cache: Option<&Path>) -> Outcome {
    if bound == 0 {
        return Err(Failure::Usage("bound must be positive".into()));
    }
    let (es, _) = level_system(q, nmax, cache)?;
    let c_max = c_max.unwrap_or(1000 * q);
    let ns: Vec<u64> = (1..=bound).filter(|&n| gcd(n, q) == 1).collect();
    let mut pairs = Vec::new();
    for &m in &ns {
        for &n in ns.iter().filter(|&&n| n >= m) {
            pairs.push((m, n));
        }
    }
    let deltas = petersson_batch(q, &pairs, c_max, Strategy::auto())?;
    let mut s = header(None);
    let _ = writeln!(s, "# weights from the symmetric-square route, Kloosterman side truncated at c <= {c_max}");
    let _ = writeln!(s, "q,m,n,kloosterman_side,spectral_side,difference,tail_majorant");
    for d in deltas {
        let spectral: f64 = es
            .forms
            .iter()
            .map(|f| f.weight.unwrap_or(f64::NAN) * f.lambda[d.m as usize] * f.lambda[d.n as usize])
            .sum();
        let _ = writeln!(
            s,
            "{q},{},{},{:.12e},{:.12e},{:.3e},{:.3e}",
            d.m,
            d.n,
            d.value,
            spectral,
            spectral - d.value,
            d.tail_estimate
        );
    }
    Ok(s)
}
