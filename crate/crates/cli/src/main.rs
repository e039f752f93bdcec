//! `mrakit`: filter analysis, scaling functions, wavelets and projections
//! from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the
//! failing check and its residual are printed), 2 on usage or IO errors.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mrakit::io::{
    filter_to_json, read_filter_file, read_function_file, write_fourier_csv, write_function_file, write_sequence_csv,
    write_spectrum_csv,
};
use mrakit::mra::{
    check_admissibility, check_pou_filter, check_pou_function, project,
    scaling_fn_freq, CheckParams, MraSystem, Thresholds,
};
use mrakit::scalar::{max_of, sig17};
use mrakit::sequence::{check_orthonormal_quadrature, cqf, FilterSequence};
use mrakit::spectra::{power_spectrum_freq, power_spectrum_time, uniform_omegas};
use mrakit::wavelet::{build_cqf_wavelet, build_wavelet, check_wavelet_quadrature_freq, cqf_sufficiency};
use mrakit::{Dyadic, Error, SampledFunction};
use num_complex::Complex;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mrakit", version, about = "Multiresolution analysis and wavelet toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter-level checks: admissibility, quadrature, partition of unity,
    /// and the CQF partner's value at pi.
    AnalyzeFilter(AnalyzeArgs),
    /// Solve the dilation equation in time (cascade) or frequency (product).
    BuildScaling(ScalingArgs),
    /// Build phi and psi from a scaling filter and a wavelet filter.
    BuildWavelet(WaveletArgs),
    /// Project a signal onto the scaling subspaces V_j.
    Project(ProjectArgs),
    /// Partition-of-unity check of a sampled function.
    CheckPou(PouArgs),
    /// Auto- or cross-power spectrum of sampled functions.
    Spectrum(SpectrumArgs),
    /// Haar approximations of sin(pi x) on [0, 1].
    Fig4(Fig4Args),
}

#[derive(Args, Clone, Copy)]
struct Tolerances {
    #[arg(long, default_value_t = 1e-8)]
    tol_admissibility: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_pou_filter: f64,
    /// Filter-level orthonormal quadrature and CQF checks.
    #[arg(long, default_value_t = 1e-8)]
    tol_filter_quadrature: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_cqf: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_dilation: f64,
    /// Function-level two-scale identities.
    #[arg(long, default_value_t = 1e-4)]
    tol_quadrature: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_pou_function: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_riesz_lower: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_phi_tilde_zero: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_continuity: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_orthonormal: f64,
    /// Cascade stopping distance between consecutive iterates.
    #[arg(long, default_value_t = 1e-9)]
    tol_cascade: f64,
}

impl Tolerances {
    fn thresholds(&self) -> Thresholds {
        Thresholds {
            admissibility: self.tol_admissibility,
            pou_filter: self.tol_pou_filter,
            dilation: self.tol_dilation,
            quadrature: self.tol_quadrature,
            pou_function: self.tol_pou_function,
            riesz_lower: self.tol_riesz_lower,
            phi_tilde_zero: self.tol_phi_tilde_zero,
            continuity: self.tol_continuity,
            orthonormal: self.tol_orthonormal,
        }
    }
}

/// Options shared by commands that run the cascade and checker.
#[derive(Args, Clone, Copy)]
struct SystemArgs {
    /// Maximum cascade iterations.
    #[arg(long, default_value_t = 24)]
    iterations: usize,
    /// Keep refining the cascade until this resolution.
    #[arg(long = "grid-J", visible_alias = "J", default_value_t = 10)]
    grid_j: i32,
    /// Frequency grid size for spectral checks (even).
    #[arg(long, default_value_t = 1024)]
    freq_points: usize,
    /// Correlation range |n| <= trunc.
    #[arg(long, default_value_t = 16)]
    trunc: usize,
}

impl SystemArgs {
    fn params(&self, tol: &Tolerances) -> CheckParams {
        let mut p = CheckParams::default();
        p.cascade.iterations = self.iterations.max(1);
        p.cascade.tol = tol.tol_cascade;
        p.cascade.min_resolution = self.grid_j;
        p.points = self.freq_points;
        p.n_max = self.trunc;
        p
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    filter: PathBuf,
    #[arg(long, default_value_t = 1024)]
    freq_points: usize,
    /// Also write the report JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingMethod {
    Cascade,
    Product,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long)]
    filter: PathBuf,
    #[arg(long, value_enum, default_value_t = ScalingMethod::Cascade)]
    method: ScalingMethod,
    /// phi CSV (cascade) or phi~ CSV (product); the report goes next to it
    /// as `<stem>.report.json`.
    #[arg(long)]
    out: PathBuf,
    /// Product depth N for the product method.
    #[arg(long, default_value_t = 24)]
    levels: usize,
    /// Frequencies span [-s pi, s pi) for the product method.
    #[arg(long, default_value_t = 64.0)]
    freq_span: f64,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct WaveletArgs {
    #[arg(long)]
    filter: PathBuf,
    /// Wavelet filter; the CQF partner of the scaling filter when omitted.
    #[arg(long)]
    wavelet_filter: Option<PathBuf>,
    /// CQF shift N (default 2 offset + length - 1).
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<i64>,
    /// CQF sign, +1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    sign: i32,
    /// Writes `<prefix>_phi.csv`, `<prefix>_psi.csv`, `<prefix>_system.json`.
    #[arg(long)]
    out_prefix: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct ProjectArgs {
    /// Scaling filter of the system.
    #[arg(long)]
    filter: PathBuf,
    #[arg(long)]
    signal: PathBuf,
    /// Comma-separated levels j.
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    levels: Vec<i32>,
    /// Writes `<prefix>_coeffs_<j>.csv` and `<prefix>_approx_<j>.csv`.
    #[arg(long)]
    out_prefix: PathBuf,
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Args)]
struct PouArgs {
    #[arg(long)]
    signal: PathBuf,
    /// Largest |n| in the frequency form.
    #[arg(long, default_value_t = 16)]
    trunc: usize,
    #[command(flatten)]
    tol: Tolerances,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumMethod {
    /// DTFT of the correlation sequence.
    Time,
    /// Periodization of |f~|^2.
    Freq,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    signal: PathBuf,
    /// Second signal for a cross spectrum.
    #[arg(long)]
    signal2: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SpectrumMethod::Time)]
    method: SpectrumMethod,
    #[arg(long, default_value_t = 1024)]
    freq_points: usize,
    /// Correlation range (time) or alias range (freq; full period when omitted).
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Fig4Args {
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    levels: Vec<i32>,
    #[arg(long = "grid-J", visible_alias = "J", default_value_t = 12)]
    grid_j: i32,
    #[arg(long, default_value = "fig4")]
    out_prefix: PathBuf,
    /// Allowed deviation from the closed-form coefficients.
    #[arg(long, default_value_t = 1e-5)]
    tol_coeffs: f64,
}

/// Why a command did not succeed.
enum Failure {
    /// A check failed: exit 1.
    Check(String),
    /// Bad input or IO: exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonOrthogonalFamily(_)
            | Error::DegenerateBase
            | Error::InadmissibleFilter(_)
            | Error::DegenerateSpectrum(_)
            | Error::NonRealSpectrum(_) => Failure::Check(format!("{e:?}: {e}")),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Residual checks collected for one command.
#[derive(Default)]
struct Verdict {
    failed: Vec<String>,
}

impl Verdict {
    fn check(&mut self, name: &str, value: f64, threshold: f64) {
        if !(value <= threshold) {
            self.failed.push(format!("{name} = {} (threshold {threshold:e})", sig17(value)));
        }
    }

    fn extend(&mut self, fs: impl IntoIterator<Item = impl ToString>) {
        self.failed.extend(fs.into_iter().map(|f| f.to_string()));
    }

    fn names(&self) -> Value {
        json!(self.failed)
    }

    fn finish(self) -> Outcome {
        if self.failed.is_empty() {
            Ok(())
        } else {
            Err(Failure::Check(self.failed.join("; ")))
        }
    }
}

fn write_json(path: &Path, v: &Value) -> Outcome {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

fn print_json(v: &Value) -> Outcome {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn load_filter(path: &Path) -> Result<(String, FilterSequence<f64>), Failure> {
    let nf = read_filter_file::<f64>(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((nf.name, nf.filter))
}

fn load_signal(path: &Path) -> Result<SampledFunction<f64>, Failure> {
    read_function_file(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn analyze_filter(a: &AnalyzeArgs) -> Outcome {
    let (name, h) = load_filter(&a.filter)?;
    let adm = check_admissibility(&h);
    let quad = check_orthonormal_quadrature(&h, a.freq_points)?;
    let pou = check_pou_filter(&h);
    let shift = mrakit::wavelet::default_shift(&h);
    let g = cqf(&h, shift, 1);
    let suff = cqf_sufficiency(&g);
    let mut v = Verdict::default();
    v.check("admissibility", adm.residual, a.tol.tol_admissibility);
    v.check("orthonormal_quadrature.time", quad.time_residual, a.tol.tol_filter_quadrature);
    v.check("orthonormal_quadrature.freq", quad.freq_residual, a.tol.tol_filter_quadrature);
    v.check("pou_filter.alternating", pou.alternating, a.tol.tol_pou_filter);
    v.check("pou_filter.even_minus", pou.even_minus, a.tol.tol_pou_filter);
    v.check("pou_filter.odd_minus", pou.odd_minus, a.tol.tol_pou_filter);
    v.check("cqf_sufficiency", suff.residual, a.tol.tol_cqf);
    let report = json!({
        "filter": filter_to_json(&name, &h),
        "admissibility_residual": sig17(adm.residual),
        "admissibility_dtft_residual": sig17(adm.dtft_residual),
        "admissibility_z_residual": sig17(adm.z_residual),
        "orthonormal_quadrature": {
            "time_residual": sig17(quad.time_residual),
            "freq_residual": sig17(quad.freq_residual),
        },
        "pou_filter_residuals": {
            "alternating": sig17(pou.alternating),
            "even_minus": sig17(pou.even_minus),
            "odd_minus": sig17(pou.odd_minus),
        },
        "cqf": {
            "shift": shift,
            "sign": 1,
            "g": filter_to_json("cqf", &g),
            "g_at_pi": [sig17(suff.g_at_pi.re), sig17(suff.g_at_pi.im)],
            "residual": sig17(suff.residual),
            "z_agreement": sig17(suff.z_agreement),
        },
        "failures": v.names(),
    });
    print_json(&report)?;
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    v.finish()
}

fn build_scaling(a: &ScalingArgs) -> Outcome {
    let (name, h) = load_filter(&a.filter)?;
    let sidecar = a.out.with_extension("report.json");
    match a.method {
        ScalingMethod::Cascade => {
            let t = a.tol.thresholds();
            let sys = MraSystem::build(&h, &a.system.params(&a.tol));
            write_function_file(&sys.phi, &a.out)?;
            let mut report = sys.report.to_json(&t);
            report["filter"] = filter_to_json(&name, &h);
            report["method"] = json!("cascade");
            write_json(&sidecar, &report)?;
            let mut v = Verdict::default();
            v.extend(sys.report.failures(&t));
            v.finish()
        }
        ScalingMethod::Product => {
            let adm = check_admissibility(&h).residual;
            let om = uniform_omegas(a.freq_span * PI, a.system.freq_points);
            let levels = a.levels.max(1);
            let phi = scaling_fn_freq(&h, &om, levels)?;
            let deeper = scaling_fn_freq(&h, &om, levels + 4)?;
            let tail = phi.max_abs_diff(&deeper);
            write_fourier_csv(&phi, std::io::BufWriter::new(std::fs::File::create(&a.out)?))?;
            let mut v = Verdict::default();
            v.check("admissibility", adm, a.tol.tol_admissibility);
            v.check("product_tail", tail, a.tol.tol_dilation);
            let report = json!({
                "filter": filter_to_json(&name, &h),
                "method": "product",
                "levels": levels,
                "admissibility_residual": sig17(adm),
                "product_tail": sig17(tail),
                "converged": tail <= a.tol.tol_dilation,
                "failures": v.names(),
            });
            write_json(&sidecar, &report)?;
            v.finish()
        }
    }
}

fn build_wavelet_cmd(a: &WaveletArgs) -> Outcome {
    if a.sign != 1 && a.sign != -1 {
        return Err(Failure::Usage(format!("--sign must be 1 or -1, got {}", a.sign)));
    }
    let (name, h) = load_filter(&a.filter)?;
    let g_named = a.wavelet_filter.as_deref().map(load_filter).transpose()?;
    let t = a.tol.thresholds();
    let sys = MraSystem::build(&h, &a.system.params(&a.tol));
    let phi_path = with_suffix(&a.out_prefix, "_phi.csv");
    write_function_file(&sys.phi, &phi_path)?;
    let ws = match &g_named {
        Some((_, g)) => build_wavelet(&sys, g),
        None => build_cqf_wavelet(&sys, a.shift, a.sign),
    }?;
    let psi_path = with_suffix(&a.out_prefix, "_psi.csv");
    write_function_file(&ws.psi, &psi_path)?;
    let q = check_wavelet_quadrature_freq(&ws, a.system.freq_points, a.system.trunc)?;
    let suff = cqf_sufficiency(&ws.g);
    let mut v = Verdict::default();
    v.extend(sys.report.failures(&t));
    v.check("wavelet_quadrature.hh", q.hh, t.quadrature);
    v.check("wavelet_quadrature.gg", q.gg, t.quadrature);
    v.check("wavelet_quadrature.hg", q.hg, t.quadrature);
    let g_name = g_named.map(|(n, _)| n).unwrap_or_else(|| format!("cqf({name})"));
    let file_name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let system = json!({
        "h": filter_to_json(&name, &h),
        "g": filter_to_json(&g_name, &ws.g),
        "cqf": ws.cqf.map(|(n, s)| json!({"shift": n, "sign": s})),
        "phi_csv": file_name(&phi_path),
        "psi_csv": file_name(&psi_path),
        "report": sys.report.to_json(&t),
        "wavelet_quadrature_freq": {
            "hh": sig17(q.hh),
            "gg": sig17(q.gg),
            "hg": sig17(q.hg),
        },
        "cqf_sufficiency": {
            "residual": sig17(suff.residual),
            "g_at_pi": [sig17(suff.g_at_pi.re), sig17(suff.g_at_pi.im)],
        },
        "rebuild_residual": sig17(ws.rebuild_residual),
        "failures": v.names(),
    });
    write_json(&with_suffix(&a.out_prefix, "_system.json"), &system)?;
    v.finish()
}

/// Projects `f` at each level and writes the coefficient and
/// approximation files; returns the coefficients per level.
fn project_levels(
    f: &SampledFunction<f64>,
    sys: &MraSystem<f64>,
    levels: &[i32],
    prefix: &Path,
) -> Result<Vec<(i32, FilterSequence<f64>, f64)>, Failure> {
    let mut out = Vec::new();
    for &j in levels {
        let p = project(f, sys, j)?;
        let coeffs = std::fs::File::create(with_suffix(prefix, &format!("_coeffs_{j}.csv")))?;
        write_sequence_csv(&p.coeffs, std::io::BufWriter::new(coeffs))?;
        write_function_file(&p.approximation, &with_suffix(prefix, &format!("_approx_{j}.csv")))?;
        let err = f.resample(p.approximation.resolution())?.sub(&p.approximation)?.norm();
        out.push((j, p.coeffs, err));
    }
    Ok(out)
}

fn project_cmd(a: &ProjectArgs) -> Outcome {
    let (_, h) = load_filter(&a.filter)?;
    let f = load_signal(&a.signal)?;
    let sys = MraSystem::build(&h, &a.system.params(&a.tol));
    let results = project_levels(&f, &sys, &a.levels, &a.out_prefix)?;
    let summary: Vec<Value> = results
        .iter()
        .map(|(j, c, err)| json!({"level": j, "coefficients": c.len(), "error_norm": sig17(*err)}))
        .collect();
    print_json(&json!({ "levels": summary }))
}

fn check_pou_cmd(a: &PouArgs) -> Outcome {
    let f = load_signal(&a.signal)?;
    let p = check_pou_function(&f, a.trunc)?;
    let mut v = Verdict::default();
    v.check("pou_function", p.residual, a.tol.tol_pou_function);
    print_json(&json!({
        "time_residual": sig17(p.time_residual),
        "freq_residual": sig17(p.freq_residual),
        "residual": sig17(p.residual),
        "c": sig17(p.c),
        "failures": v.names(),
    }))?;
    v.finish()
}

fn spectrum_cmd(a: &SpectrumArgs) -> Outcome {
    let f = load_signal(&a.signal)?;
    let g = match &a.signal2 {
        Some(p) => load_signal(p)?,
        None => f.clone(),
    };
    let j = f.resolution().max(g.resolution());
    let (f, g) = (f.resample(j)?, g.resample(j)?);
    let s = match a.method {
        SpectrumMethod::Time => power_spectrum_time(&f, &g, a.trunc.unwrap_or(16), a.freq_points)?,
        SpectrumMethod::Freq => power_spectrum_freq(&f, &g, a.freq_points, a.trunc)?,
    };
    write_spectrum_csv(&s, std::io::BufWriter::new(std::fs::File::create(&a.out)?))?;
    print_json(&json!({
        "points": s.points(),
        "min": sig17(s.min_re()),
        "max": sig17(s.max_re()),
        "max_abs_im": sig17(s.max_abs_im()),
    }))
}

fn fig4(a: &Fig4Args) -> Outcome {
    if a.grid_j < 0 {
        return Err(Failure::Usage("--grid-J must be non-negative".into()));
    }
    let sys = MraSystem::build(&mrakit::fixtures::haar_filter::<f64>(), &CheckParams::default());
    let f = mrakit::fixtures::sine::<f64>(a.grid_j, Dyadic::ZERO, Dyadic::from_int(1));
    let results = project_levels(&f, &sys, &a.levels, &a.out_prefix)?;
    let mut v = Verdict::default();
    let mut summary = Vec::new();
    for (j, c, err) in &results {
        let s = 2f64.powi(-j);
        let dev = max_of(c.iter().map(|(n, cn)| {
            let want = 2f64.powf(*j as f64 / 2.0) / PI * ((s * n as f64 * PI).cos() - (s * (n + 1) as f64 * PI).cos());
            (cn - Complex::new(want, 0.0)).norm()
        }));
        v.check(&format!("fig4_coefficients_{j}"), dev, a.tol_coeffs);
        summary.push(json!({"level": j, "max_coefficient_error": sig17(dev), "error_norm": sig17(*err)}));
    }
    print_json(&json!({ "levels": summary, "failures": v.names() }))?;
    v.finish()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::AnalyzeFilter(a) => analyze_filter(a),
        Command::BuildScaling(a) => build_scaling(a),
        Command::BuildWavelet(a) => build_wavelet_cmd(a),
        Command::Project(a) => project_cmd(a),
        Command::CheckPou(a) => check_pou_cmd(a),
        Command::Spectrum(a) => spectrum_cmd(a),
        Command::Fig4(a) => fig4(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
