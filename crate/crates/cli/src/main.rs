//! `siegel-pw`: verification suites and evaluators.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use siegel_pw::drury_arveson::{da_method, da_method_names, BallPolynomial};
use siegel_pw::error::Error;
use siegel_pw::kernels::{ball_kernel_eval, kernel_eval, KernelId};
use siegel_pw::siegel::{psi_inv, BallPoint, HorocyclicCoordinates, SiegelPoint};
use siegel_pw::spectral::{
    l2nu_norm_sq, l2nu_norm_sq_closed, space_norm_sq, synthesize, synthesize_dirichlet,
    synthesizer, synthesizer_names, ConfigRule, ProfileSpec, SpaceTag, SynthesizedFunction,
};
use siegel_pw::verify::{run_suite, SuiteReport, VerifyConfig};

/// Exit status for configuration and input errors; 1 is reserved for failed checks.
const CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "siegel-pw",
    version,
    about = "Paley–Wiener identities on the Siegel half-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Reproducing kernels.
    Kernel {
        #[command(subcommand)]
        action: KernelAction,
    },
    /// Evaluate the synthesized function of a spectral profile.
    Synth(SynthArgs),
    /// Spectral (and optionally configuration-space) norm of a profile.
    Norm(NormArgs),
    /// Drury–Arveson norm of a polynomial on the ball.
    DaNorm(DaNormArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// group, fock, bargmann, paley-wiener, kernels, dirichlet, drury-arveson or all.
    #[arg(long)]
    suite: Option<String>,
    /// JSON file with any of the settings below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Bergman weight for the Bergman checks.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Dirichlet order.
    #[arg(long)]
    m: Option<u32>,
    /// Truncation tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random pairs for the pointwise kernel identities.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Reduced node counts.
    #[arg(long)]
    fast: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a CSV table.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Also write a plain data file of errors against tolerances.
    #[arg(long)]
    emit_gnuplot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum KernelAction {
    /// `K(ω, ζ)` with the symbolic constant used.
    Eval(KernelEvalArgs),
}

#[derive(Args)]
struct KernelEvalArgs {
    /// szego, bergman, weighted-dirichlet, dirichlet-log, dirichlet-dot, ball-dirichlet.
    #[arg(long)]
    id: String,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// `[[re,im],…]` with ζ_{n+1} last, or `{"z":[[re,im],…],"t":…,"h":…}`; ball coordinates for ball-dirichlet.
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
    #[arg(long, allow_hyphen_values = true)]
    zeta: String,
}

#[derive(Args)]
struct SynthArgs {
    /// Profile JSON, or `@path` to read it from a file.
    #[arg(long)]
    profile: String,
    /// Point of the half-space, as for `kernel eval`.
    #[arg(long, allow_hyphen_values = true)]
    at: String,
    /// laguerre, closed-form or all.
    #[arg(long, default_value = "all")]
    synth: String,
    /// Prescribed `F(𝐢)` for Dirichlet profiles, as `[re,im]`.
    #[arg(long, allow_hyphen_values = true)]
    dirichlet_value: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceName {
    Hardy,
    Bergman,
    WeightedDirichlet,
    DruryArveson,
    Dirichlet,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, value_enum)]
    space: SpaceName,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long)]
    m: Option<u32>,
    /// Also integrate over the half-space.
    #[arg(long)]
    quadrature: bool,
    #[arg(long)]
    fast: bool,
    #[arg(long, allow_hyphen_values = true)]
    dirichlet_value: Option<String>,
}

#[derive(Args)]
struct DaNormArgs {
    /// Number of variables `n+1`.
    #[arg(long)]
    dim: usize,
    /// For example `z1*z2 + 0.5*z1^3 - 2i*z2`.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// coefficient, integral or both.
    #[arg(long, default_value = "both")]
    method: String,
}

/// Failure that maps to an exit status.
enum Failure {
    Config(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn read_json(arg: &str) -> CliResult<Value> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| config_err(format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| config_err(format!("invalid JSON `{arg}`: {e}")))
}

fn complex_list(v: &Value) -> CliResult<Vec<Complex64>> {
    serde_json::from_value(v.clone()).map_err(|e| config_err(format!("expected [[re,im],…]: {e}")))
}

fn siegel_point(arg: &str) -> CliResult<SiegelPoint> {
    let v = read_json(arg)?;
    if v.is_object() {
        let c: HorocyclicCoordinates =
            serde_json::from_value(v).map_err(|e| config_err(format!("horocyclic point: {e}")))?;
        return Ok(psi_inv(&c)?);
    }
    let mut coords = complex_list(&v)?;
    let last = coords
        .pop()
        .ok_or_else(|| config_err("a point needs at least one coordinate"))?;
    if coords.is_empty() {
        return Err(config_err(
            "a point of the half-space needs n ≥ 1, i.e. at least two coordinates",
        ));
    }
    Ok(SiegelPoint::new(coords, last))
}

fn ball_point(arg: &str) -> CliResult<BallPoint> {
    Ok(BallPoint::new(complex_list(&read_json(arg)?)?)?)
}

fn pair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| config_err(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> CliResult<()> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
            VerifyConfig::from_json(&text)?
        }
        None => VerifyConfig::default(),
    };
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if args.nu.is_some() {
        cfg.nu = args.nu;
    }
    if args.m.is_some() {
        cfg.m = args.m;
    }
    if let Some(t) = args.tol {
        cfg.tol = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(p) = args.pairs {
        cfg.pairs = p;
    }
    if let Some(s) = args.mc_samples {
        cfg.mc_samples = s;
    }
    cfg.fast |= args.fast;
    let report = run_suite(&cfg.suite.clone(), &cfg)?;
    let text = serde_json::to_string_pretty(&report).expect("reports serialise");
    write_or_print(args.out.as_deref(), &text)?;
    if let Some(p) = &args.csv {
        write_or_print(Some(p), &report.to_csv())?;
    }
    if let Some(p) = &args.emit_gnuplot {
        write_or_print(Some(p), &report.to_gnuplot())?;
    }
    for c in report.failures() {
        eprintln!(
            "FAIL {}: rel_error {} > {:e}{}",
            c.id,
            c.rel_error
                .map(|e| format!("{e:e}"))
                .unwrap_or_else(|| "n/a".into()),
            c.tolerance,
            c.error
                .as_deref()
                .map(|e| format!(" ({e})"))
                .unwrap_or_default()
        );
    }
    verdict(&report)
}

fn verdict(report: &SuiteReport) -> CliResult<()> {
    if report.passed && report.failures().next().is_none() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn exit_code(result: CliResult<()>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}

fn kernel_cmd(args: KernelEvalArgs) -> CliResult<()> {
    let id = KernelId::from_name(&args.id, args.nu, args.m)?;
    let (value, n) = if let KernelId::BallDirichlet = id {
        let (w, z) = (ball_point(&args.omega)?, ball_point(&args.zeta)?);
        (ball_kernel_eval(&w, &z)?, w.n())
    } else {
        let (w, z) = (siegel_point(&args.omega)?, siegel_point(&args.zeta)?);
        id.validate(w.n())?;
        (kernel_eval(id, &w, &z)?, w.n())
    };
    let constant = id.constant(n)?;
    let out = json!({
        "id": id.name(),
        "n": n,
        "value": pair(value),
        "constant": constant.to_string(),
        "constant_value": constant.value(),
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("plain JSON")
    );
    Ok(())
}

fn profile(arg: &str) -> CliResult<ProfileSpec> {
    serde_json::from_value(read_json(arg)?).map_err(|e| config_err(format!("profile: {e}")))
}

fn dirichlet_value(arg: &Option<String>) -> CliResult<Option<Complex64>> {
    arg.as_deref()
        .map(|s| {
            serde_json::from_value(read_json(s)?)
                .map_err(|e| config_err(format!("expected [re,im]: {e}")))
        })
        .transpose()
}

fn synth_cmd(args: SynthArgs) -> CliResult<()> {
    let tau = profile(&args.profile)?.build()?;
    let p = siegel_point(&args.at)?;
    let names: Vec<&str> = match args.synth.as_str() {
        "all" => synthesizer_names().to_vec(),
        other => vec![other],
    };
    let c = dirichlet_value(&args.dirichlet_value)?;
    let mut values = serde_json::Map::new();
    for name in names {
        let s = synthesizer(name)?;
        let v = match c {
            Some(c) => synthesize_dirichlet(&tau, &p, c, s.as_ref())?,
            None => synthesize(&tau, &p, s.as_ref())?,
        };
        values.insert(name.to_string(), pair(v));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({ "at": p, "values": values })).expect("plain JSON")
    );
    Ok(())
}

fn space_tag(space: SpaceName, nu: Option<f64>, m: Option<u32>) -> CliResult<SpaceTag> {
    let need_nu = || nu.ok_or_else(|| config_err("this space needs --nu"));
    let need_m = || m.ok_or_else(|| config_err("this space needs --m"));
    Ok(match space {
        SpaceName::Hardy => SpaceTag::Hardy,
        SpaceName::Bergman => SpaceTag::Bergman { nu: need_nu()? },
        SpaceName::WeightedDirichlet => SpaceTag::WeightedDirichlet {
            nu: need_nu()?,
            m: need_m()?,
        },
        SpaceName::DruryArveson => SpaceTag::DruryArveson { m: need_m()? },
        SpaceName::Dirichlet => SpaceTag::Dirichlet { m: need_m()? },
    })
}

fn norm_cmd(args: NormArgs) -> CliResult<()> {
    let tau = profile(&args.profile)?.build()?;
    let n = tau.n();
    let tag = space_tag(args.space, args.nu, args.m)?;
    tag.validate(n)?;
    let c = dirichlet_value(&args.dirichlet_value)?;
    let nu = tag.nu(n);
    let l2 = l2nu_norm_sq(&tau, nu)?;
    let closed = if tau.is_sampled() {
        None
    } else {
        Some(l2nu_norm_sq_closed(&tau, nu)?)
    };
    let constant = tag.plancherel_constant(n);
    let base_term = match tag {
        SpaceTag::Dirichlet { .. } => c.unwrap_or_default().norm_sqr(),
        _ => 0.0,
    };
    let spectral = base_term + constant * l2;
    let mut out = json!({
        "space": tag,
        "l2nu_norm_sq": l2,
        "l2nu_norm_sq_closed": closed,
        "plancherel_constant": constant,
        "spectral_norm_sq": spectral,
    });
    if args.quadrature {
        let synth = synthesizer("closed-form")?;
        let f = match tag {
            SpaceTag::Dirichlet { .. } => {
                SynthesizedFunction::dirichlet(tau.clone(), synth, c.unwrap_or_default())
            }
            _ => SynthesizedFunction::new(tau.clone(), synth),
        };
        let rule = ConfigRule::around(&SiegelPoint::base(n))?;
        let rule = if args.fast { rule.fast() } else { rule };
        let q = space_norm_sq(&f, tag, &rule)?;
        out["quadrature_norm_sq"] = json!(q);
        out["rel_error"] = json!((q - spectral).abs() / spectral.abs().max(f64::MIN_POSITIVE));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("plain JSON")
    );
    Ok(())
}

fn da_norm_cmd(args: DaNormArgs) -> CliResult<()> {
    let f = BallPolynomial::parse(args.dim, &args.poly)?;
    let methods: Vec<&str> = match args.method.as_str() {
        "both" => da_method_names().to_vec(),
        other => vec![other],
    };
    let mut out = serde_json::Map::new();
    out.insert("dim".into(), json!(args.dim));
    out.insert("poly".into(), json!(f.to_string()));
    let mut values = Vec::new();
    for name in methods {
        let v = da_method(name)?.norm_sq(&f)?;
        out.insert(name.to_string(), json!(v));
        values.push(v);
    }
    if let [a, b] = values[..] {
        out.insert("difference".into(), json!(a - b));
        out.insert(
            "rel_error".into(),
            json!((a - b).abs() / a.abs().max(f64::MIN_POSITIVE)),
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(out)).expect("plain JSON")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Kernel {
            action: KernelAction::Eval(a),
        } => kernel_cmd(a),
        Command::Synth(a) => synth_cmd(a),
        Command::Norm(a) => norm_cmd(a),
        Command::DaNorm(a) => da_norm_cmd(a),
    };
    exit_code(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use siegel_pw::verify::Check;

    fn check(id: &str, pass: bool) -> Check {
        Check {
            id: id.into(),
            anchor: "test".into(),
            criterion: None,
            lhs: [1.0, 0.0],
            rhs: [1.5, 0.0],
            rel_error: Some(if pass { 0.0 } else { 0.5 }),
            tolerance: 1e-3,
            asserted: true,
            pass,
            quadrature: "none".into(),
            wall_time: 0.0,
            error: None,
        }
    }

    fn report(checks: Vec<Check>) -> SuiteReport {
        SuiteReport {
            suite: "group".into(),
            n: 1,
            fast: false,
            seed: 7,
            passed: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    #[test]
    fn failed_check_maps_to_status_one() {
        let r = report(vec![check("a", true), check("b", false)]);
        assert!(matches!(verdict(&r), Err(Failure::Checks)));
        assert_eq!(exit_code(verdict(&r)), ExitCode::from(1));
        assert_eq!(
            exit_code(verdict(&report(vec![check("a", true)]))),
            ExitCode::SUCCESS
        );
        assert_eq!(
            exit_code(Err(config_err("bad"))),
            ExitCode::from(CONFIG_ERROR)
        );
    }
}
