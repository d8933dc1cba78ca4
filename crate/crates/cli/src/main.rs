//! `floquet`: rigorous Floquet normal forms of periodic linear systems.
//!
//! Subcommands:
//! * `solve`   : build and refine a numerical candidate from an orbit file,
//! * `verify`  : prove an error radius around a candidate (radii polynomials),
//! * `bundles` : verified Lyapunov exponents, multipliers and bundle frames,
//! * `pipeline`: all three in sequence.
//!
//! Exit codes: 0 success, 2 verification failed, 3 solver did not converge,
//! 4 malformed input, 5 spectrum degenerate / not certified.

use clap::{Args, Parser, Subcommand};
use floquet_core::bundle::{eigen_report, sample_bundles, write_bundle_csv};
use floquet_core::eigen::{classify, default_trivial_tol, verified_eigenpairs};
use floquet_core::solver::{
    init_guess, newton_refine, problem_from_orbit, residual_norm, FloquetCandidate,
    GalerkinProblem,
};
use floquet_core::system::{parse_orbit, OrbitEnclosure};
use floquet_core::verifier::{
    verify_problem, LPolicy, SharpMode, VerificationReport, VerifiedFloquetForm, VerifierParams,
};
use floquet_core::Error as CoreError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "floquet", version, about = "Rigorous Floquet normal forms and tangent bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine a Floquet candidate for the orbit's linearized system.
    Solve(RunArgs),
    /// Verify a candidate: find the radius of the solution ball.
    Verify(RunArgs),
    /// Derive exponents, multipliers and bundle frames from a verified form.
    Bundles(RunArgs),
    /// Solve, verify and emit bundles in one run.
    Pipeline(RunArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON config file supplying defaults for any of the flags below;
    /// flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Orbit enclosure file (JSON).
    #[arg(long)]
    orbit: PathBuf,
    /// Candidate file (JSON); produced by solve, consumed by verify/bundles.
    #[arg(long)]
    candidate: Option<PathBuf>,
    /// Galerkin size.
    #[arg(long, default_value_t = 60)]
    m: usize,
    /// Number of explicit radii polynomials (strictly above m).
    #[arg(long = "M", default_value_t = 66)]
    big_m: usize,
    /// Decay rate of the solution space.
    #[arg(long, default_value_t = 2.0)]
    s: f64,
    /// Series cutoff policy: "paper" or "fixed:N".
    #[arg(long = "l-policy", default_value = "paper")]
    l_policy: String,
    /// Sharpened coefficient-aware tail estimates: auto, on or off.
    #[arg(long = "sharp-tails", default_value = "auto")]
    sharp_tails: String,
    /// θ-grid size for bundle sampling.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker cap; computations are single threaded, the flag is recorded
    /// for reproducibility.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Newton tolerance for the solve step.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Seed for randomized diagnostics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn log_enabled() -> bool {
    std::env::var("FLOQUET_LOG").map(|v| !v.is_empty() && v != "0").unwrap_or(false)
}

macro_rules! logln {
    ($($arg:tt)*) => {
        if log_enabled() {
            eprintln!($($arg)*);
        }
    };
}

/// Optional config file: same knobs as the flags, flags win.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    m: Option<usize>,
    #[serde(rename = "M")]
    big_m: Option<usize>,
    s: Option<f64>,
    l_policy: Option<String>,
    sharp_tails: Option<String>,
    grid: Option<usize>,
    threads: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
}

/// Merge config-file values under explicitly passed flags. A flag is
/// considered explicit when it differs from the clap default; config values
/// only fill the slots the user left at their defaults.
fn apply_config(args: &mut RunArgs) -> Result<(), CoreError> {
    let Some(path) = &args.config else { return Ok(()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::MalformedInput(format!("{}: {e}", path.display())))?;
    let cfg: ConfigFile =
        serde_json::from_str(&text).map_err(|e| CoreError::MalformedInput(e.to_string()))?;
    let defaults = RunArgs {
        config: None,
        orbit: PathBuf::new(),
        candidate: None,
        m: 60,
        big_m: 66,
        s: 2.0,
        l_policy: "paper".into(),
        sharp_tails: "auto".into(),
        grid: 256,
        out: PathBuf::from("out"),
        threads: 1,
        tol: 1e-12,
        seed: 0,
    };
    macro_rules! fill {
        ($field:ident) => {
            if args.$field == defaults.$field {
                if let Some(v) = cfg.$field {
                    args.$field = v;
                }
            }
        };
    }
    fill!(m);
    fill!(big_m);
    fill!(s);
    fill!(grid);
    fill!(threads);
    fill!(tol);
    fill!(seed);
    if args.l_policy == defaults.l_policy {
        if let Some(v) = cfg.l_policy {
            args.l_policy = v;
        }
    }
    if args.sharp_tails == defaults.sharp_tails {
        if let Some(v) = cfg.sharp_tails {
            args.sharp_tails = v;
        }
    }
    Ok(())
}

fn parse_l_policy(text: &str) -> Result<LPolicy, String> {
    if text == "paper" {
        return Ok(LPolicy::Paper);
    }
    if let Some(n) = text.strip_prefix("fixed:") {
        let n: usize = n.parse().map_err(|e| format!("bad fixed cutoff: {e}"))?;
        return Ok(LPolicy::Fixed(n));
    }
    Err(format!("unknown l-policy {text:?}; use \"paper\" or \"fixed:N\""))
}

fn parse_sharp(text: &str) -> Result<SharpMode, String> {
    match text {
        "auto" => Ok(SharpMode::Auto),
        "on" => Ok(SharpMode::On),
        "off" => Ok(SharpMode::Off),
        other => Err(format!("unknown sharp-tails mode {other:?}")),
    }
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::VerificationFailed(_) | CoreError::NotCertifiablyInvertible(_) => 2,
        CoreError::NoConvergence(_) | CoreError::SingularJacobian | CoreError::LogBranchFailure(_) => 3,
        CoreError::MalformedOrbitFile(_)
        | CoreError::MalformedInput(_)
        | CoreError::Io(_)
        | CoreError::DimensionMismatch(_)
        | CoreError::DomainError(_)
        | CoreError::DecayTooWeak { .. } => 4,
        CoreError::DegenerateSpectrum(_)
        | CoreError::NotCertified(_)
        | CoreError::AmbiguousTrivial(_)
        | CoreError::InconsistentRatios(_) => 5,
        _ => 1,
    }
}

struct Ctx {
    args: RunArgs,
    orbit: OrbitEnclosure,
    prob: GalerkinProblem,
    params: VerifierParams,
}

impl Ctx {
    fn new(args: &RunArgs) -> Result<Ctx, CoreError> {
        let mut args = args.clone();
        apply_config(&mut args)?;
        let args = &args;
        let orbit = parse_orbit(&args.orbit)?;
        let prob = problem_from_orbit(&orbit, args.m, args.s)?;
        let mut params = VerifierParams::new(args.s, args.m, args.big_m);
        params.l_policy =
            parse_l_policy(&args.l_policy).map_err(CoreError::MalformedInput)?;
        params.sharp = parse_sharp(&args.sharp_tails).map_err(CoreError::MalformedInput)?;
        std::fs::create_dir_all(&args.out)?;
        Ok(Ctx { args: args.clone(), orbit, prob, params })
    }

    fn candidate_path(&self) -> PathBuf {
        self.args
            .candidate
            .clone()
            .unwrap_or_else(|| self.args.out.join("candidate.json"))
    }

    fn form_path(&self) -> PathBuf {
        self.args.out.join("verified_form.json")
    }

    fn solve(&self) -> Result<FloquetCandidate, CoreError> {
        logln!("building initial candidate (m = {})", self.args.m);
        let x0 = init_guess(&self.orbit, self.args.m)?;
        logln!("initial residual {:.3e}", residual_norm(&x0, &self.prob));
        let x = newton_refine(&x0, &self.prob, self.args.tol, 60)?;
        let res = residual_norm(&x, &self.prob);
        println!("candidate residual: {res:.6e}");
        std::fs::write(self.candidate_path(), x.to_json())?;
        println!("candidate written to {}", self.candidate_path().display());
        Ok(x)
    }

    fn load_candidate(&self) -> Result<FloquetCandidate, CoreError> {
        let path = self.candidate_path();
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CoreError::MalformedInput(format!("{}: {e}", path.display()))
        })?;
        FloquetCandidate::from_json(&text)
    }

    fn verify(
        &self,
        x: &FloquetCandidate,
    ) -> Result<(VerifiedFloquetForm, VerificationReport), CoreError> {
        let conditional = !self.orbit.rigorous;
        let result = verify_problem(x, &self.prob, &self.params, conditional);
        match result {
            Ok((form, mut report)) => {
                report.notes.push(format!(
                    "run: orbit {}, m = {}, M = {}, s = {}, threads = {}, seed = {}",
                    self.args.orbit.display(),
                    self.args.m,
                    self.args.big_m,
                    self.args.s,
                    self.args.threads,
                    self.args.seed
                ));
                std::fs::write(self.args.out.join("report.json"), report.to_json())?;
                let form_file = VerifiedFormFile::from_form(&form);
                std::fs::write(
                    self.form_path(),
                    serde_json::to_string_pretty(&form_file).expect("serializable"),
                )?;
                print_report_summary(&report);
                Ok((form, report))
            }
            Err(CoreError::VerificationFailed(report_json)) => {
                std::fs::write(self.args.out.join("report.json"), &report_json)?;
                println!("verification FAILED; report written to {}", self.args.out.join("report.json").display());
                Err(CoreError::VerificationFailed("see report.json".into()))
            }
            Err(e) => Err(e),
        }
    }

    fn load_form(&self) -> Result<VerifiedFloquetForm, CoreError> {
        let path = self.form_path();
        let text = std::fs::read_to_string(&path).map_err(|e| {
            CoreError::MalformedInput(format!(
                "{}: {e}; run `floquet verify` with the same --out first",
                path.display()
            ))
        })?;
        let file: VerifiedFormFile = serde_json::from_str(&text)
            .map_err(|e| CoreError::MalformedInput(e.to_string()))?;
        file.into_form(&self.orbit)
    }

    fn bundles(&self, form: &VerifiedFloquetForm) -> Result<(), CoreError> {
        let pairs = verified_eigenpairs(&form.r_enclosure())?;
        let tol = default_trivial_tol(&form.r_enclosure());
        let cls = classify(pairs, tol)?;
        let bundle = sample_bundles(form, &self.orbit, &cls, self.args.grid)?;
        let rows = eigen_report(form, &self.orbit, &cls, &bundle);
        let eigen_json = serde_json::json!({
            "conditional": form.conditional,
            "tau": { "lo": format!("{}", form.tau.lo()), "hi": format!("{}", form.tau.hi()) },
            "radius": form.radius,
            "directions": rows,
        });
        std::fs::write(
            self.args.out.join("eigen.json"),
            serde_json::to_string_pretty(&eigen_json).expect("serializable"),
        )?;
        let mut csv = Vec::new();
        write_bundle_csv(&bundle, &mut csv)?;
        std::fs::write(self.args.out.join("bundles.csv"), csv)?;
        println!(
            "bundle frames written to {} ({} samples)",
            self.args.out.join("bundles.csv").display(),
            bundle.samples.len()
        );
        for row in &rows {
            println!(
                "  {:?}: lyapunov [{:.9e}, {:.9e}], |sigma| [{:.9e}, {:.9e}]{}",
                row.label,
                row.lyapunov.lo(),
                row.lyapunov.hi(),
                row.multiplier_modulus.lo(),
                row.multiplier_modulus.hi(),
                match row.multiplier_sign {
                    Some(s) => format!(", sign {s:+} (non-rigorous)"),
                    None => String::new(),
                }
            );
        }
        Ok(())
    }
}

fn print_report_summary(report: &VerificationReport) {
    let (lo, hi) = report.r_interval.expect("successful report has an interval");
    println!(
        "verified: r = {:.9e} (admissible interval [{:.9e}, {:.9e}])",
        report.r_selected.expect("radius"),
        lo,
        hi
    );
    println!(
        "  m = {}, M = {}, s = {}, K = {}, C_Lambda = {:.6}, sharp tails: {}",
        report.m, report.big_m, report.s, report.k_lemma, report.c_lambda, report.sharp_used
    );
    if report.conditional {
        println!("  conditional on the orbit enclosure hypothesis (non-rigorous orbit input)");
    }
}

/// Serialized verified form: the candidate plus the proven radius.
#[derive(serde::Serialize, serde::Deserialize)]
struct VerifiedFormFile {
    radius: f64,
    s: f64,
    conditional: bool,
    candidate: serde_json::Value,
}

impl VerifiedFormFile {
    fn from_form(form: &VerifiedFloquetForm) -> VerifiedFormFile {
        VerifiedFormFile {
            radius: form.radius,
            s: form.s,
            conditional: form.conditional,
            candidate: serde_json::from_str(&form.candidate.to_json()).expect("valid json"),
        }
    }

    fn into_form(self, orbit: &OrbitEnclosure) -> Result<VerifiedFloquetForm, CoreError> {
        let candidate = FloquetCandidate::from_json(
            &serde_json::to_string(&self.candidate).expect("valid json"),
        )?;
        Ok(VerifiedFloquetForm {
            candidate,
            radius: self.radius,
            s: self.s,
            tau: orbit.tau_enclosure(),
            conditional: self.conditional,
        })
    }
}

fn run(cmd: &Command) -> Result<(), CoreError> {
    match cmd {
        Command::Solve(args) => {
            let ctx = Ctx::new(args)?;
            ctx.solve()?;
            Ok(())
        }
        Command::Verify(args) => {
            let ctx = Ctx::new(args)?;
            let x = match &ctx.args.candidate {
                Some(_) => ctx.load_candidate()?,
                None => match ctx.load_candidate() {
                    Ok(x) => x,
                    Err(_) => ctx.solve()?,
                },
            };
            ctx.verify(&x)?;
            Ok(())
        }
        Command::Bundles(args) => {
            let ctx = Ctx::new(args)?;
            let form = match ctx.load_form() {
                Ok(f) => f,
                Err(_) => {
                    logln!("no verified form on disk; verifying first");
                    let x = match &ctx.args.candidate {
                        Some(_) => ctx.load_candidate()?,
                        None => ctx.solve()?,
                    };
                    ctx.verify(&x)?.0
                }
            };
            ctx.bundles(&form)
        }
        Command::Pipeline(args) => {
            let ctx = Ctx::new(args)?;
            let x = ctx.solve()?;
            let (form, _) = ctx.verify(&x)?;
            ctx.bundles(&form)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
