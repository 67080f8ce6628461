//! Command-line front end. Every subcommand prints its CSV (or, for
//! `systole`, the length) to stdout; with `--out DIR` the CSVs are also
//! written there next to a `manifest.txt`.

use crate::builders;
use crate::complex::{MetricComplex, PiOneData};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::growth::{
    entropy_estimate, fmt_f64, free_product_csv, free_product_limit, growth_table,
};
use crate::invariants::{
    phi_systole_with, stable_systole, volume_entropy, GeodesicOptions, SystoleMode,
};
use crate::norm::Norm;
use crate::optimize::{
    entropy_systole_scan, optimize_ratio, scan_csv, trace_csv, OptimizeConfig, ScanMember,
};
use crate::search::Budget;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "systolab",
    version,
    about = "Growth, entropy and systoles of groups and metric complexes"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Directory for CSV outputs and the run manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ball counts beta(r) at r = 0, step, 2 step, ..., rmax.
    Growth(GrowthArgs),
    /// Entropy estimate from geometrically sampled radii.
    Entropy(EntropyArgs),
    /// Entropy of L_G * rho L_H on G * H for a list of scales.
    FreeProductLimit(FreeProductArgs),
    /// Shortest loop with nontrivial phi image.
    Systole(SystoleArgs),
    /// Stable norm of a class in the torsion-free abelianization.
    StableSystole(StableArgs),
    /// Volume entropy of the phi-cover.
    VolumeEntropy(VolumeEntropyArgs),
    /// Pattern search on edge lengths minimizing Vol / sys^n.
    Optimize(OptimizeArgs),
    /// Systolic ratio next to volume entropy over a family.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct GrowthArgs {
    /// Group spec, e.g. "free 2".
    #[arg(long)]
    group: String,
    /// Norm spec, e.g. "word".
    #[arg(long, default_value = "word")]
    norm: String,
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value = "word")]
    norm: String,
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
}

#[derive(Args, Debug)]
struct FreeProductArgs {
    /// Left factor G.
    #[arg(long, default_value = "abelian 1")]
    left: String,
    /// Right factor H.
    #[arg(long, default_value = "abelian 1")]
    right: String,
    #[arg(long, default_value = "word")]
    left_norm: String,
    #[arg(long, default_value = "word")]
    right_norm: String,
    /// Increasing scales on the right factor.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 12.0)]
    rmax: f64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
}

#[derive(Args, Debug, Clone)]
struct ComplexArgs {
    /// Complex file (`v`, `e`, `t`, `base` lines).
    #[arg(long)]
    complex: PathBuf,
    /// Phi file (`target`, `map` lines).
    #[arg(long)]
    phi: PathBuf,
}

#[derive(Args, Debug, Clone, Copy)]
struct ModeArgs {
    /// Measure systoles by straightened flat geodesics instead of edge paths.
    #[arg(long)]
    geodesic: bool,
    /// Interior Steiner points per edge in geodesic mode.
    #[arg(long, default_value_t = GeodesicOptions::default().steiner_points)]
    steiner: usize,
}

impl ModeArgs {
    fn mode(&self) -> SystoleMode {
        if self.geodesic {
            SystoleMode::Geodesic(GeodesicOptions {
                steiner_points: self.steiner,
                ..Default::default()
            })
        } else {
            SystoleMode::EdgePath
        }
    }
}

#[derive(Args, Debug)]
struct SystoleArgs {
    #[command(flatten)]
    input: ComplexArgs,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args, Debug)]
struct StableArgs {
    #[command(flatten)]
    input: ComplexArgs,
    /// Class coordinates in the torsion-free abelianization, e.g. 1,0.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    class: Vec<i64>,
    #[arg(long, default_value_t = 8)]
    kmax: usize,
}

#[derive(Args, Debug)]
struct VolumeEntropyArgs {
    #[command(flatten)]
    input: ComplexArgs,
    #[arg(long)]
    rmax: f64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Radius R of the generator-norm comparison.
    #[arg(long)]
    sandwich: Option<f64>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[command(flatten)]
    input: ComplexArgs,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 1.10)]
    step: f64,
    #[arg(long, default_value_t = 1.001)]
    min_step: f64,
    #[arg(long, default_value_t = 0.5)]
    shrink: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the volume at 1.
    #[arg(long)]
    normalize: bool,
    /// Barycentric subdivision rounds.
    #[arg(long, default_value_t = 0)]
    subdivide: usize,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Built-in family: `wedges`, `tori` or `circle`.
    #[arg(long)]
    family: Vec<String>,
    /// Extra member as NAME,COMPLEX,PHI.
    #[arg(long)]
    member: Vec<String>,
    #[arg(long, default_value_t = 12.0)]
    rmax: f64,
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[command(flatten)]
    mode: ModeArgs,
}

/// What a run did, written as `manifest.txt` next to its CSVs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: Vec<(String, String)>,
    /// `(path, sha256 hex)` of every input file.
    pub inputs: Vec<(String, String)>,
    pub version: String,
    pub wall_seconds: f64,
}

impl RunManifest {
    fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: Vec::new(),
            inputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_seconds: 0.0,
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((
            path.display().to_string(),
            hex::encode(Sha256::digest(bytes)),
        ));
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("subcommand {}\nversion {}\n", self.subcommand, self.version);
        for (k, v) in &self.parameters {
            s.push_str(&format!("param {k} {v}\n"));
        }
        for (p, d) in &self.inputs {
            s.push_str(&format!("input {p} sha256 {d}\n"));
        }
        s.push_str(&format!("wall_seconds {:.3}\n", self.wall_seconds));
        s
    }
}

/// Files produced by a subcommand: `(name, contents)`.
struct Output {
    stdout: String,
    files: Vec<(String, String)>,
    /// Files written even without `--out`, into the current directory.
    always: bool,
}

/// Runs `argv` (without the program name) and returns the exit code.
pub fn dispatch(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit streams.
pub fn dispatch_to(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(
        std::iter::once("systolab".to_string()).chain(argv.iter().cloned()),
    ) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let budget = Budget::from_env();
    let result = pool.install(|| run(&cli.command, budget));
    let (mut manifest, output) = match result {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if e.is_budget() {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_INPUT
            };
        }
    };
    manifest.param("threads", cli.threads);
    manifest.param("budget", budget.nodes);
    manifest.wall_seconds = start.elapsed().as_secs_f64();
    let _ = write!(out, "{}", output.stdout);
    let dir = match (&cli.out, output.always) {
        (Some(d), _) => Some(d.clone()),
        (None, true) => Some(PathBuf::from(".")),
        (None, false) => None,
    };
    if let Some(dir) = dir {
        if let Err(e) = write_outputs(&dir, &manifest, &output.files) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    }
    EXIT_OK
}

fn write_outputs(dir: &Path, manifest: &RunManifest, files: &[(String, String)]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text).map_err(io)?;
    }
    std::fs::write(dir.join("manifest.txt"), manifest.to_text()).map_err(io)
}

fn read(path: &Path, manifest: &mut RunManifest) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    manifest.input(path, &bytes);
    String::from_utf8(bytes).map_err(|_| Error::Io(format!("{}: not UTF-8", path.display())))
}

fn load(input: &ComplexArgs, manifest: &mut RunManifest) -> Result<(MetricComplex, PiOneData)> {
    let x = MetricComplex::parse(&read(&input.complex, manifest)?)?;
    let p = PiOneData::parse_phi(&x, &read(&input.phi, manifest)?)?;
    Ok((x, p))
}

fn mode_params(m: &mut RunManifest, mode: &ModeArgs) {
    m.param("geodesic", mode.geodesic);
    if mode.geodesic {
        m.param("steiner", mode.steiner);
    }
}

fn csv_output(name: &str, csv: String) -> Output {
    Output {
        stdout: csv.clone(),
        files: vec![(name.to_string(), csv)],
        always: false,
    }
}

fn run(command: &Command, budget: Budget) -> Result<(RunManifest, Output)> {
    match command {
        Command::Growth(a) => {
            let mut m = RunManifest::new("growth");
            m.param("group", &a.group);
            m.param("norm", &a.norm);
            m.param("rmax", fmt_f64(a.rmax));
            m.param("step", fmt_f64(a.step));
            if !(a.rmax >= 0.0 && a.step > 0.0) {
                return Err(Error::InvalidArgument("need rmax >= 0 and step > 0".into()));
            }
            let group = GroupSpec::parse(&a.group)?;
            let norm = Norm::parse(&a.norm, &group, budget)?;
            let n = (a.rmax / a.step + 1e-9).floor() as usize;
            let radii: Vec<f64> = (0..=n).map(|i| i as f64 * a.step).collect();
            let table = growth_table(&group, &norm, &radii, budget)?;
            Ok((m, csv_output("growth.csv", table.to_csv())))
        }
        Command::Entropy(a) => {
            let mut m = RunManifest::new("entropy");
            m.param("group", &a.group);
            m.param("norm", &a.norm);
            m.param("rmax", fmt_f64(a.rmax));
            m.param("samples", a.samples);
            let group = GroupSpec::parse(&a.group)?;
            let norm = Norm::parse(&a.norm, &group, budget)?;
            let est = entropy_estimate(&group, &norm, a.rmax, a.samples, budget)?;
            if !est.diagnostics.exhaustive {
                return Err(Error::BudgetExceeded {
                    budget: budget.nodes,
                    lower_bound: est.diagnostics.exhaustive_up_to,
                });
            }
            let mut csv = est.to_csv();
            csv.push_str(&format!(
                "# point_estimate {} upper_bound {} converged {}\n",
                fmt_f64(est.point_estimate),
                est.upper_bound.map_or("none".into(), fmt_f64),
                est.diagnostics.converged
            ));
            let mut out = csv_output("entropy.csv", est.to_csv());
            out.stdout = csv;
            Ok((m, out))
        }
        Command::FreeProductLimit(a) => {
            let mut m = RunManifest::new("free-product-limit");
            m.param("left", &a.left);
            m.param("right", &a.right);
            m.param("left_norm", &a.left_norm);
            m.param("right_norm", &a.right_norm);
            m.param(
                "rhos",
                a.rhos
                    .iter()
                    .map(|&r| fmt_f64(r))
                    .collect::<Vec<_>>()
                    .join(","),
            );
            m.param("rmax", fmt_f64(a.rmax));
            m.param("samples", a.samples);
            let g = GroupSpec::parse(&a.left)?;
            let h = GroupSpec::parse(&a.right)?;
            let lg = Norm::parse(&a.left_norm, &g, budget)?;
            let lh = Norm::parse(&a.right_norm, &h, budget)?;
            let rows = free_product_limit(&g, &h, &lg, &lh, &a.rhos, a.rmax, a.samples, budget)?;
            Ok((m, csv_output("free_product.csv", free_product_csv(&rows))))
        }
        Command::Systole(a) => {
            let mut m = RunManifest::new("systole");
            mode_params(&mut m, &a.mode);
            let (x, p) = load(&a.input, &mut m)?;
            let sys = phi_systole_with(&x, &p, a.mode.mode(), budget)?;
            if !sys.is_finite() {
                return Err(Error::NotEssential);
            }
            let csv = sys.to_csv(&x, &p.phi()?.target);
            Ok((
                m,
                Output {
                    stdout: format!("{}\n", fmt_f64(sys.length)),
                    files: vec![("systole.csv".into(), csv)],
                    always: false,
                },
            ))
        }
        Command::StableSystole(a) => {
            let mut m = RunManifest::new("stable-systole");
            m.param(
                "class",
                a.class
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            m.param("kmax", a.kmax);
            let (x, p) = load(&a.input, &mut m)?;
            let res = stable_systole(&x, &p, &a.class, a.kmax, budget)?;
            let mut out = csv_output("stable_systole.csv", res.to_csv());
            out.stdout.push_str(&format!(
                "# bracket [{}, {}] diameter {} complete {}\n",
                fmt_f64(res.lower),
                fmt_f64(res.upper),
                fmt_f64(res.diameter),
                res.complete
            ));
            Ok((m, out))
        }
        Command::VolumeEntropy(a) => {
            let mut m = RunManifest::new("volume-entropy");
            m.param("rmax", fmt_f64(a.rmax));
            m.param("samples", a.samples);
            if let Some(r) = a.sandwich {
                m.param("sandwich", fmt_f64(r));
            }
            let (x, p) = load(&a.input, &mut m)?;
            let ve = volume_entropy(&x, &p, a.rmax, a.samples, a.sandwich, budget)?;
            let d = &ve.estimate.diagnostics;
            if !d.exhaustive {
                return Err(Error::BudgetExceeded {
                    budget: budget.nodes,
                    lower_bound: d.exhaustive_up_to,
                });
            }
            let mut out = csv_output("volume_entropy.csv", ve.estimate.to_csv());
            out.stdout.push_str(&format!(
                "# point_estimate {} polynomial_growth {} converged {}\n",
                fmt_f64(ve.estimate.point_estimate),
                d.polynomial_growth,
                d.converged
            ));
            if let Some(s) = &ve.sandwich {
                out.stdout.push_str(&format!(
                    "# sandwich generators {} generator_entropy {} factor {} upper_estimate {}\n",
                    s.generator_count,
                    fmt_f64(s.generator_entropy),
                    fmt_f64(s.factor),
                    fmt_f64(s.upper_estimate)
                ));
            }
            Ok((m, out))
        }
        Command::Optimize(a) => {
            let mut m = RunManifest::new("optimize");
            m.param("iters", a.iters);
            m.param("step", fmt_f64(a.step));
            m.param("min_step", fmt_f64(a.min_step));
            m.param("shrink", fmt_f64(a.shrink));
            m.param("seed", a.seed);
            m.param("normalize", a.normalize);
            m.param("subdivide", a.subdivide);
            mode_params(&mut m, &a.mode);
            let (x, p) = load(&a.input, &mut m)?;
            let cfg = OptimizeConfig {
                max_iters: a.iters,
                initial_step: a.step,
                shrink: a.shrink,
                min_step: a.min_step,
                seed: a.seed,
                normalize: a.normalize,
                subdivisions: a.subdivide,
                mode: a.mode.mode(),
                budget,
            };
            let res = optimize_ratio(&x, &p, &cfg)?;
            let stdout = format!(
                "ratio {}\nverified_ratio {}\nsystole {}\naccepted {}\nstalled {}\n",
                fmt_f64(res.ratio),
                fmt_f64(res.verified_ratio),
                fmt_f64(res.systole),
                res.accepted,
                res.stalled
            );
            let files = vec![
                ("trace.csv".into(), trace_csv(&res.trace)),
                ("best_metric.txt".into(), res.best.to_text()),
                ("best_phi.txt".into(), res.phi.phi_to_text(&res.best)?),
            ];
            Ok((
                m,
                Output {
                    stdout,
                    files,
                    always: true,
                },
            ))
        }
        Command::Scan(a) => {
            let mut m = RunManifest::new("scan");
            m.param("rmax", fmt_f64(a.rmax));
            m.param("samples", a.samples);
            mode_params(&mut m, &a.mode);
            if a.family.is_empty() && a.member.is_empty() {
                return Err(Error::InvalidArgument(
                    "scan needs --family or --member".into(),
                ));
            }
            let mut family = Vec::new();
            for f in &a.family {
                m.param("family", f);
                family.extend(builtin_family(f)?);
            }
            for spec in &a.member {
                m.param("member", spec);
                let parts: Vec<&str> = spec.split(',').collect();
                let [name, complex, phi] = parts.as_slice() else {
                    return Err(Error::InvalidArgument(format!(
                        "member `{spec}` is not NAME,COMPLEX,PHI"
                    )));
                };
                let input = ComplexArgs {
                    complex: complex.into(),
                    phi: phi.into(),
                };
                let (x, p) = load(&input, &mut m)?;
                family.push(ScanMember {
                    name: name.to_string(),
                    complex: x,
                    phi: p,
                });
            }
            let rows = entropy_systole_scan(&family, a.rmax, a.samples, a.mode.mode(), budget)?;
            Ok((m, csv_output("scan.csv", scan_csv(&rows))))
        }
    }
}

/// Named families for `scan --family`.
pub fn builtin_family(name: &str) -> Result<Vec<ScanMember>> {
    let member = |name: String, (complex, phi): (MetricComplex, PiOneData)| ScanMember {
        name,
        complex,
        phi,
    };
    match name {
        "wedges" => (1..=8)
            .map(|rho| {
                Ok(member(
                    format!("wedge_1_{rho}"),
                    builders::wedge_with_phi(&[1.0, rho as f64])?,
                ))
            })
            .collect(),
        "tori" => [(3, 3), (3, 4), (4, 4), (4, 6)]
            .into_iter()
            .map(|(a, b)| {
                Ok(member(
                    format!("torus_{a}x{b}"),
                    builders::grid_torus_with_phi(a, b, 1.0)?,
                ))
            })
            .collect(),
        "circle" => Ok(vec![member(
            "circle".into(),
            builders::circle_with_phi(1.0, 0)?,
        )]),
        _ => Err(Error::InvalidArgument(format!(
            "unknown family `{name}`; use wedges, tori or circle"
        ))),
    }
}
