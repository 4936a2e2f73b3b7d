//! Command-line front end.
//!
//! Every subcommand writes its data file atomically to `--out`, or to a
//! default file name inside `$COMPACTON_OUT_DIR` when that is set, or to
//! standard output otherwise. A short human-readable summary goes to the
//! `log` stream (standard error in the binary).
//!
//! `--config FILE` (before the subcommand) reads `key = value` lines whose
//! keys are long flag names; flags given on the command line win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::existence::{classify_family, region_grid, table1, table1_intervals, unit_coefficients, write_region_csv, write_table1_csv};
use crate::numeric::{shoot, ForceFactor, ShootOptions};
use crate::profile::{construct, EquationKind, EquationParams, FamilyId, WaveSpec};
use crate::weak::{boundary_quantities, default_battery, endpoint_power_fit, verify, ProfileFn, ResidualReport};

pub const OUT_DIR_ENV: &str = "COMPACTON_OUT_DIR";

/// Exit code for a completed verification that did not pass.
pub const EXIT_VERIFICATION_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "compacton", version, about = "Compacton solutions of the K(m,n) and KP(m,n) equations")]
struct Cli {
    /// key=value file merged under the command-line flags
    #[arg(long, global = false)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a closed-form compacton and sample it
    Profile(ProfileArgs),
    /// Weak/strong existence verdicts for a family member
    Classify(ClassifyArgs),
    /// Compute a symmetric compacton numerically
    Solve(SolveArgs),
    /// Check the weak formulation against a battery of bump functions
    Verify(VerifyArgs),
    /// Existence intervals for every family
    Table1(Table1Args),
    /// Existence flags over a range of the free power
    Region(RegionArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Equation {
    K,
    Kp,
    Both,
}

#[derive(Debug, Clone, Args)]
struct Output {
    /// Output file (default: $COMPACTON_OUT_DIR/<name>, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Args)]
struct Wave {
    /// Wave speed of a K(m,n) travelling wave (g = c)
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["mu", "nu", "g"])]
    c: Option<f64>,
    /// Slope of a KP(m,n) line wave
    #[arg(long, allow_hyphen_values = true, requires = "nu", conflicts_with = "g")]
    mu: Option<f64>,
    /// Frequency of a KP(m,n) line wave
    #[arg(long, allow_hyphen_values = true, requires = "mu", conflicts_with = "g")]
    nu: Option<f64>,
    /// Transverse coefficient of KP(m,n); enters only through g = nu - sigma mu^2
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    sigma: f64,
    /// Reduced wave parameter given directly
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
}

impl Wave {
    fn spec(&self) -> Option<WaveSpec> {
        match (self.c, self.mu, self.nu, self.g) {
            (Some(c), ..) => Some(WaveSpec::speed(c)),
            (_, Some(mu), Some(nu), _) => Some(WaveSpec::line(mu, nu, self.sigma)),
            (.., Some(g)) => Some(WaveSpec::direct(g)),
            _ => None,
        }
    }

    fn is_line(&self) -> bool {
        self.mu.is_some()
    }
}

#[derive(Debug, Clone, Args)]
struct Powers {
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<f64>,
}

impl Powers {
    /// The free power of `family` (n, or m for COS2).
    fn free(&self, family: FamilyId) -> Result<f64> {
        let (name, value) = match family.free_var() {
            "m" => ("m", self.m),
            _ => ("n", self.n),
        };
        value.ok_or_else(|| Error::InvalidParams(format!("{family} needs --{name}")))
    }
}

#[derive(Debug, Clone, Args)]
struct ProfileArgs {
    #[arg(long)]
    family: FamilyId,
    #[command(flatten)]
    powers: Powers,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    b: f64,
    #[command(flatten)]
    wave: Wave,
    /// Grid points across [-L, L]; 10% padding is added on each side
    #[arg(long, default_value_t = 401)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct ClassifyArgs {
    #[arg(long)]
    family: FamilyId,
    #[command(flatten)]
    powers: Powers,
    /// Coefficients default to ±1 with the family's sign pattern
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[command(flatten)]
    wave: Wave,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct SolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    m: f64,
    #[arg(long, allow_hyphen_values = true)]
    n: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    a: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    b: f64,
    #[command(flatten)]
    wave: Wave,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    /// Absolute tolerance as a multiple of V0
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    /// Fraction of V0 below which the exact tail takes over
    #[arg(long, default_value_t = 1e-2)]
    tail_fraction: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct VerifyArgs {
    /// Closed-form family; without it the profile is computed numerically
    #[arg(long)]
    family: Option<FamilyId>,
    #[command(flatten)]
    powers: Powers,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[command(flatten)]
    wave: Wave,
    #[arg(long, value_enum, default_value = "k")]
    equation: Equation,
    /// Largest accepted scaled residual
    #[arg(long, default_value_t = 1e-7)]
    threshold: f64,
    /// Jitter the bump battery reproducibly
    #[arg(long)]
    seed: Option<u64>,
    /// Report file (always JSON)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct Table1Args {
    #[arg(long)]
    family: Option<FamilyId>,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct RegionArgs {
    #[arg(long)]
    family: FamilyId,
    /// Lower end of the free power range
    #[arg(long, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 201)]
    steps: usize,
    #[command(flatten)]
    output: Output,
}

/// Parse and run. Returns the process exit code.
pub fn run<I, T>(args: I, log: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(log, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Profile(a) => cmd_profile(&a, log),
        Command::Classify(a) => cmd_classify(&a, log),
        Command::Solve(a) => cmd_solve(&a, log),
        Command::Verify(a) => cmd_verify(&a, log),
        Command::Table1(a) => cmd_table1(&a, log),
        Command::Region(a) => cmd_region(&a, log),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    }
}

/// Flags in the same group as one given on the command line are not taken
/// from the config file, so `--g` on the command line drops `c = …` there.
const WAVE_KEYS: [&str; 5] = ["c", "mu", "nu", "sigma", "g"];

fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let text: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    // `--config` is only recognised before the subcommand.
    let mut path = None;
    let mut i = 1;
    let mut head = vec![args[0].clone()];
    while i < text.len() && text[i].starts_with('-') {
        if text[i] == "--config" {
            path = text.get(i + 1).cloned();
            i += 2;
        } else if let Some(p) = text[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            i += 1;
        } else {
            head.push(args[i].clone());
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    if i >= args.len() {
        return Ok(args);
    }
    let entries = read_config(Path::new(&path))?;
    let given: Vec<&str> = text[i + 1..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let wave_given = given.iter().any(|k| WAVE_KEYS.contains(k));

    let mut merged = head;
    merged.push(args[i].clone());
    for (k, v) in entries {
        if given.contains(&k.as_str()) || (wave_given && WAVE_KEYS.contains(&k.as_str())) {
            continue;
        }
        merged.push(format!("--{k}").into());
        if v != "true" {
            merged.push(v.into());
        }
    }
    merged.extend(args[i + 1..].iter().cloned());
    Ok(merged)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParams(format!("{}:{}: expected key = value", path.display(), no + 1))
        })?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

/// Where a data file goes: `--out`, `$COMPACTON_OUT_DIR/<name>`, or stdout.
fn destination(out: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    out.clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(|d| PathBuf::from(d).join(default_name)))
}

/// Write to a temporary file next to `path` and rename it into place.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    body(tmp.as_file_mut())?;
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, default_name: &str, log: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match destination(out, default_name) {
        Some(path) => {
            write_atomic(&path, body)?;
            writeln!(log, "wrote {}", path.display())?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
        }
    }
    Ok(())
}

fn write_json(w: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// `2.5` → `"5/2"` when a small rational matches exactly.
fn as_fraction(x: f64) -> String {
    match Ratio::<i64>::approximate_float(x) {
        Some(r) if *r.denom() <= 1000 && (*r.numer() as f64 / *r.denom() as f64) == x => {
            if *r.denom() == 1 {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        _ => format!("{x}"),
    }
}

fn require_wave(wave: &Wave) -> Result<WaveSpec> {
    wave.spec()
        .ok_or_else(|| Error::InvalidParams("give the wave as --c, as --mu/--nu/--sigma, or as --g".into()))
}

fn cmd_profile(args: &ProfileArgs, log: &mut dyn Write) -> Result<i32> {
    let x = args.powers.free(args.family)?;
    let wave = require_wave(&args.wave)?;
    let profile = construct(args.family, x, args.a, args.b, wave.g)?;
    let sampled = profile.sample(args.points)?;
    writeln!(
        log,
        "{} m={} n={} alpha={:.17} beta={:.17} L={:.17} p={} g={}",
        profile.family,
        as_fraction(profile.params.m),
        as_fraction(profile.params.n),
        profile.alpha,
        profile.beta,
        profile.l,
        as_fraction(profile.p),
        wave.g
    )?;
    let name = format!("profile_{}.{}", profile.family, ext(args.output.format));
    emit(&args.output.out, &name, log, |w| match args.output.format {
        Format::Csv => sampled.write_csv(w),
        Format::Json => {
            let mut v = sampled.to_json();
            v["wave"] = serde_json::to_value(wave)?;
            write_json(w, &v)
        }
    })?;
    Ok(0)
}

fn ext(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn cmd_classify(args: &ClassifyArgs, log: &mut dyn Write) -> Result<i32> {
    let family = args.family;
    let x = args.powers.free(family)?;
    let (ua, ub, ug) = unit_coefficients(family);
    let a = args.a.unwrap_or(ua);
    let b = args.b.unwrap_or(ub);
    let g = args.wave.spec().map_or(ug, |w| w.g);
    let report = classify_family(family, x, a, b, g);
    let (m, n) = family.powers(x);
    let mark = |ok: bool| if ok { "yes" } else { "no" };
    writeln!(log, "{family} {}={} (m={}, n={}), p={}", family.free_var(), as_fraction(x), as_fraction(m), as_fraction(n), as_fraction(report.p))?;
    writeln!(log, "  weak K    {}", mark(report.weak_k))?;
    writeln!(log, "  strong K  {}", mark(report.strong_k))?;
    match report.weak_kp {
        Some(c) => writeln!(log, "  weak KP   yes (case {c})")?,
        None => writeln!(log, "  weak KP   no")?,
    }
    writeln!(log, "  strong KP {}", mark(report.strong_kp))?;
    for r in &report.reasons {
        writeln!(log, "  - {r}")?;
    }
    let name = format!("classify_{family}.{}", ext(args.output.format));
    emit(&args.output.out, &name, log, |w| match args.output.format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(["family", "x", "m", "n", "p", "weak_K", "strong_K", "weak_KP_case", "strong_KP"])?;
            wr.write_record([
                family.to_string(),
                x.to_string(),
                m.to_string(),
                n.to_string(),
                report.p.to_string(),
                report.weak_k.to_string(),
                report.strong_k.to_string(),
                report.weak_kp.map_or(String::new(), |c| c.to_string()),
                report.strong_kp.to_string(),
            ])?;
            wr.flush()?;
            Ok(())
        }
        Format::Json => write_json(
            w,
            &serde_json::json!({
                "family": family,
                "x": x, "m": m, "n": n, "a": a, "b": b, "g": g,
                "report": report,
                "table1": table1_intervals(family),
            }),
        ),
    })?;
    Ok(0)
}

fn solve_params(m: f64, n: f64, a: f64, b: f64, wave: &Wave) -> Result<(EquationParams, WaveSpec)> {
    let spec = require_wave(wave)?;
    let params = if wave.is_line() {
        EquationParams::kp(m, n, a, b, wave.sigma)?
    } else {
        EquationParams::k(m, n, a, b)?
    };
    Ok((params, spec))
}

fn cmd_solve(args: &SolveArgs, log: &mut dyn Write) -> Result<i32> {
    let (params, wave) = solve_params(args.m, args.n, args.a, args.b, &args.wave)?;
    let opts = ShootOptions {
        rtol: args.rtol,
        atol_scale: args.atol,
        tail_fraction: args.tail_fraction,
        grid_points: args.points,
        force: ForceFactor::Half,
    };
    let nc = shoot(&params, wave.g, &opts)?;
    let [c0, c1, c2] = nc.scaled_cutoff_residuals();
    writeln!(
        log,
        "V0={:.17} L_quadrature={:.17} L_shoot={:.17} rel_gap={:.3e} energy={:.3e} cutoff=({c0:.1e}, {c1:.1e}, {c2:.1e})",
        nc.v0,
        nc.l_quadrature,
        nc.l_shoot,
        nc.half_width_gap(),
        nc.scaled_energy_residual()
    )?;
    emit(&args.output.out, &format!("solve.{}", ext(args.output.format)), log, |w| match args.output.format {
        Format::Csv => nc.write_csv(w),
        Format::Json => {
            let mut v = nc.to_json();
            v["wave"] = serde_json::to_value(wave)?;
            write_json(w, &v)
        }
    })?;
    Ok(0)
}

fn summarise(report: &ResidualReport, log: &mut dyn Write) -> Result<()> {
    writeln!(log, "{} weak form, threshold {:.1e}", report.equation, report.threshold)?;
    writeln!(log, "  {:>12} {:>12} {:>3} {:>12} {:>6}", "center", "width", "d", "scaled", "")?;
    for e in &report.entries {
        let tf = e.test_function;
        let ok = if e.scaled < report.threshold { "pass" } else { "FAIL" };
        writeln!(log, "  {:>12.5} {:>12.5} {:>3} {:>12.3e} {:>6}", tf.center, tf.width, tf.degree, e.scaled, ok)?;
    }
    writeln!(
        log,
        "  max {:.3e}: {}",
        report.max_abs_scaled,
        if report.passed { "pass" } else { "FAIL" }
    )?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, log: &mut dyn Write) -> Result<i32> {
    let closed;
    let numeric;
    let (profile, params, g, label): (&dyn ProfileFn, EquationParams, f64, serde_json::Value) = match args.family {
        Some(family) => {
            let x = args.powers.free(family)?;
            let (ua, ub, ug) = unit_coefficients(family);
            let g = args.wave.spec().map_or(ug, |w| w.g);
            closed = construct(family, x, args.a.unwrap_or(ua), args.b.unwrap_or(ub), g)?;
            (&closed, closed.params, g, serde_json::json!({ "family": family, "x": x }))
        }
        None => {
            let (m, n) = match (args.powers.m, args.powers.n) {
                (Some(m), Some(n)) => (m, n),
                _ => return Err(Error::InvalidParams("numeric verification needs --m and --n (or give --family)".into())),
            };
            let (params, wave) = solve_params(m, n, args.a.unwrap_or(1.0), args.b.unwrap_or(1.0), &args.wave)?;
            numeric = shoot(&params, wave.g, &ShootOptions::default())?;
            (&numeric, params, wave.g, serde_json::json!({ "numeric": true }))
        }
    };
    let l = profile.half_width();
    let battery = default_battery(l, args.seed);
    let kinds: &[EquationKind] = match args.equation {
        Equation::K => &[EquationKind::K],
        Equation::Kp => &[EquationKind::KP],
        Equation::Both => &[EquationKind::K, EquationKind::KP],
    };
    let mut reports = Vec::new();
    for &kind in kinds {
        let r = verify(profile, &params, g, &battery, kind, args.threshold)?;
        summarise(&r, log)?;
        reports.push(r);
    }
    let bq = boundary_quantities(profile, &params, g, l);
    writeln!(log, "boundary A1..A4 (scaled): {:.2e} {:.2e} {:.2e} {:.2e}", bq.scaled[0], bq.scaled[1], bq.scaled[2], bq.scaled[3])?;
    let fit = endpoint_power_fit(profile, l).ok();
    if let Some(p) = fit {
        writeln!(log, "endpoint power fit p = {p:.5}")?;
    }
    let passed = reports.iter().all(|r| r.passed);
    let json = serde_json::json!({
        "profile": label,
        "params": params,
        "g": g,
        "L": l,
        "reports": reports,
        "boundary": bq,
        "endpoint_power_fit": fit,
        "passed": passed,
    });
    emit(&args.out, "verify.json", log, |w| write_json(w, &json))?;
    Ok(if passed { 0 } else { EXIT_VERIFICATION_FAILED })
}

fn cmd_table1(args: &Table1Args, log: &mut dyn Write) -> Result<i32> {
    let rows = match args.family {
        Some(f) => vec![table1_intervals(f)],
        None => table1(),
    };
    emit(&args.output.out, &format!("table1.{}", ext(args.output.format)), log, |w| match args.output.format {
        Format::Csv => write_table1_csv(&rows, w),
        Format::Json => write_json(w, &serde_json::to_value(&rows)?),
    })?;
    Ok(0)
}

fn cmd_region(args: &RegionArgs, log: &mut dyn Write) -> Result<i32> {
    let points = region_grid(args.family, args.lo, args.hi, args.steps)?;
    let name = format!("region_{}.{}", args.family, ext(args.output.format));
    emit(&args.output.out, &name, log, |w| match args.output.format {
        Format::Csv => write_region_csv(&points, w),
        Format::Json => write_json(w, &serde_json::to_value(&points)?),
    })?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut log = Vec::new();
        let code = run(std::iter::once("compacton").chain(args.iter().copied()), &mut log);
        (code, String::from_utf8(log).unwrap())
    }

    #[test]
    fn fractions() {
        assert_eq!(as_fraction(2.5), "5/2");
        assert_eq!(as_fraction(3.0), "3");
        assert_eq!(as_fraction(std::f64::consts::PI), std::f64::consts::PI.to_string());
    }

    #[test]
    fn profile_reports_m() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r6.csv");
        let (code, log) = run_args(&["profile", "--family", "ratcn6", "--n", "2", "--c", "1", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{log}");
        assert!(log.contains("m=5/2"), "{log}");
        assert!(fs::read_to_string(out).unwrap().starts_with("xi,U\n"));
    }

    #[test]
    fn sign_violation_exits_2() {
        let (code, log) = run_args(&["profile", "--family", "cos1", "--n", "2", "--b", "-1", "--c", "1"]);
        assert_eq!(code, 2);
        assert!(log.contains("sign condition"), "{log}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["profile", "--family", "nope", "--n", "2"]).0, 2);
        assert_eq!(run_args(&["profile", "--family", "cos1", "--n", "2", "--c", "1", "--g", "1"]).0, 2);
        assert_eq!(run_args(&["profile", "--family", "cos1", "--c", "1"]).0, 2);
    }

    #[test]
    fn rejected_solve_exits_3() {
        let (code, log) = run_args(&["solve", "--n", "2", "--m", "0.5", "--c", "1"]);
        assert_eq!(code, 3, "{log}");
        assert!(log.contains("concavity"), "{log}");
    }

    #[test]
    fn config_is_merged_under_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.conf");
        fs::write(&cfg, "# fig 5\nn = 2\nm = 9/4\nc = 1\npoints = 101\n").unwrap();
        let out = dir.path().join("s.csv");
        // m from the file is not a number; the flag must override it.
        let (code, log) = run_args(&["--config", cfg.to_str().unwrap(), "solve", "--m", "2.25", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{log}");
        assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 102);
        // A wave flag on the command line replaces the file's wave.
        let (code, log) = run_args(&["--config", cfg.to_str().unwrap(), "solve", "--m", "2.25", "--g", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{log}");
    }

    #[test]
    fn verification_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("v.json");
        let out = out.to_str().unwrap();
        let (code, log) = run_args(&["verify", "--family", "cos1", "--n", "2", "--out", out]);
        assert_eq!(code, 0, "{log}");
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
        assert_eq!(v["passed"], true);
        let (code, _) = run_args(&["verify", "--family", "cos1", "--n", "2", "--threshold", "1e-300", "--out", out]);
        assert_eq!(code, EXIT_VERIFICATION_FAILED);
    }
}
