//! Batch front end: flags or a JSON config in, field CSVs, comparison
//! reports and a checksummed manifest out.
//!
//! Exit codes: 0 success, 1 tolerance failure, 2 invalid configuration or
//! CFL violation, 3 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field_io::field_to_string;
use crate::lattice::LatticeGrid;
use crate::solvers::{
    kernel, solve, subordination_trajectory, InitialDatum, ModeStatus, SolveConfig, SolverKind,
    SubordinationReport, Trajectory,
};
use crate::spectral::{cfl_max_tau, Propagator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Command-line flags. Every flag may also come from `--config FILE`
/// (JSON with the same kebab-case names); flags win.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "ck-lattice", version, about = "Lattice Cauchy-Kovalevskaya extension solvers")]
pub struct Args {
    /// Spatial dimension n
    #[arg(long)]
    pub dim: Option<usize>,
    /// Points per axis N (even, >= 4)
    #[arg(long)]
    pub points: Option<usize>,
    /// Lattice spacing h
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Time step tau
    #[arg(long)]
    pub tau: Option<f64>,
    /// Number of time steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// delta | gaussian:SIGMA | planewave:K[,K2..] | file:PATH
    #[arg(long)]
    pub initial: Option<String>,
    /// leapfrog | spectral | series:K | convolution | subordination:P,MP,MW
    #[arg(long)]
    pub solver: Option<String>,
    /// Compare two solvers slice by slice, e.g. leapfrog,spectral
    #[arg(long)]
    pub compare: Option<String>,
    /// Tolerance for --compare
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the kernel table at the final time
    #[arg(long)]
    pub emit_kernel: bool,
    /// Write manifest.json with checksums
    #[arg(long)]
    pub manifest: bool,
    /// JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// The JSON form of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compare: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit_kernel: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub manifest: Option<bool>,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub solve: SolveConfig,
    pub compare: Option<(SolverKind, SolverKind)>,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub emit_kernel: bool,
    pub manifest: bool,
}

impl RunConfig {
    /// Configuration echo with the same names as the flags.
    pub fn echo(&self) -> ConfigFile {
        let g = &self.solve.grid;
        ConfigFile {
            dim: Some(g.dim()),
            points: Some(g.points()),
            spacing: Some(g.spacing()),
            tau: Some(self.solve.tau),
            steps: Some(self.solve.steps),
            initial: Some(self.solve.initial.to_string()),
            solver: Some(self.solve.solver.to_string()),
            compare: self.compare.map(|(a, b)| format!("{a},{b}")),
            tol: Some(self.tol),
            out: self.out.clone(),
            emit_kernel: Some(self.emit_kernel),
            manifest: Some(self.manifest),
        }
    }
}

fn parse_compare(s: &str) -> Result<(SolverKind, SolverKind)> {
    // subordination parameters contain commas, so split at a solver name
    let names = ["leapfrog", "spectral", "series", "convolution", "subordination"];
    let split = s
        .char_indices()
        .filter(|&(i, c)| c == ',' && names.iter().any(|n| s[i + 1..].trim_start().starts_with(n)))
        .map(|(i, _)| i)
        .next()
        .ok_or_else(|| Error::Parse(format!("--compare expects two solvers, got '{s}'")))?;
    Ok((s[..split].trim().parse()?, s[split + 1..].trim().parse()?))
}

/// Merges flags over an optional config file and validates the result,
/// including the CFL bound.
pub fn parse_config(args: &Args) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<ConfigFile>(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let dim = args.dim.or(file.dim).unwrap_or(1);
    let points = args.points.or(file.points).unwrap_or(16);
    let spacing = args.spacing.or(file.spacing).unwrap_or(1.0);
    let grid = LatticeGrid::new(dim, points, spacing)?;
    let tau = args.tau.or(file.tau).unwrap_or(0.2);
    let steps = args.steps.or(file.steps).unwrap_or(10);
    let initial: InitialDatum = args
        .initial
        .clone()
        .or(file.initial)
        .unwrap_or_else(|| "delta".into())
        .parse()?;
    let solver: SolverKind = args
        .solver
        .clone()
        .or(file.solver)
        .unwrap_or_else(|| "spectral".into())
        .parse()?;
    let compare = args.compare.clone().or(file.compare).map(|s| parse_compare(&s)).transpose()?;
    let tol = args.tol.or(file.tol).unwrap_or(1e-9);
    if !(tol >= 0.0) {
        return Err(Error::Parse(format!("--tol must be nonnegative, got {tol}")));
    }
    let solve = SolveConfig {
        grid,
        tau,
        steps,
        initial,
        solver,
    };
    solve.validate()?;
    for kind in compare.iter().flat_map(|(a, b)| [a, b]) {
        SolveConfig {
            solver: *kind,
            ..solve.clone()
        }
        .validate()?;
    }
    Ok(RunConfig {
        solve,
        compare,
        tol,
        out: args.out.clone().or(file.out),
        emit_kernel: args.emit_kernel || file.emit_kernel.unwrap_or(false),
        manifest: args.manifest || file.manifest.unwrap_or(false),
    })
}

/// One emitted file and its SHA-256.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceResult {
    pub solvers: [String; 2],
    pub tol: f64,
    pub max_gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ConfigFile,
    pub solvers: Vec<String>,
    pub wall_time_s: f64,
    pub cfl_max_tau: f64,
    pub tolerance: Vec<ToleranceResult>,
    pub files: Vec<FileEntry>,
}

/// Per-slice gaps between two solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub solvers: (SolverKind, SolverKind),
    pub gaps: Vec<f64>,
    pub tol: f64,
}

impl CompareReport {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_gap() <= self.tol
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,gap\n");
        for (k, g) in self.gaps.iter().enumerate() {
            s.push_str(&format!("{k},{g:.16e}\n"));
        }
        s
    }
}

pub fn compare(cfg: &SolveConfig, a: SolverKind, b: SolverKind, tol: f64) -> Result<CompareReport> {
    let ta = solve(&SolveConfig { solver: a, ..cfg.clone() })?;
    let tb = solve(&SolveConfig { solver: b, ..cfg.clone() })?;
    Ok(CompareReport {
        solvers: (a, b),
        gaps: ta.gaps(&tb)?,
        tol,
    })
}

fn subordination_csv(report: &SubordinationReport) -> String {
    let dim = report.modes.first().map_or(0, |m| m.labels.len());
    let mut cols: Vec<String> = (1..=dim).map(|j| format!("k{j}")).collect();
    cols.extend(["lambda", "status", "s_max", "band_nodes"].map(String::from));
    let mut s = cols.join(",") + "\n";
    for m in &report.modes {
        let labels: Vec<String> = m.labels.iter().map(|k| k.to_string()).collect();
        let (status, s_max) = match m.status {
            ModeStatus::Subordinated { s_max } => ("subordinated", s_max),
            ModeStatus::DirectOnly => ("direct", 0.0),
            ModeStatus::NonConvergent => ("nonconvergent", 0.0),
        };
        s.push_str(&format!(
            "{},{:.16e},{status},{s_max:.16e},{}\n",
            labels.join(","),
            m.lambda,
            m.band_nodes
        ));
    }
    s
}

struct Writer {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.files.push(FileEntry {
            path: name.to_string(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
        });
        Ok(())
    }

    fn trajectory(&mut self, prefix: &str, traj: &Trajectory) -> Result<()> {
        for (k, slice) in traj.slices.iter().enumerate() {
            self.write(&format!("{prefix}_{k:04}.csv"), &field_to_string(slice))?;
        }
        Ok(())
    }
}

/// Outcome of [`run`]: the manifest and whether every tolerance held.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub pass: bool,
    pub summary: String,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut writer = cfg.out.as_deref().map(Writer::new).transpose()?;
    let mut summary = String::new();
    let mut tolerance = Vec::new();
    let mut solvers = Vec::new();

    if let Some((a, b)) = cfg.compare {
        let report = compare(&cfg.solve, a, b, cfg.tol)?;
        summary.push_str(&format!(
            "compare {a} vs {b}: max gap {:.3e} (tol {:.3e}) {}\n",
            report.max_gap(),
            cfg.tol,
            if report.pass() { "PASS" } else { "FAIL" }
        ));
        if let Some(w) = writer.as_mut() {
            w.write("compare.csv", &report.to_csv())?;
        }
        solvers.extend([a.to_string(), b.to_string()]);
        tolerance.push(ToleranceResult {
            solvers: [a.to_string(), b.to_string()],
            tol: cfg.tol,
            max_gap: report.max_gap(),
            pass: report.pass(),
        });
    } else {
        let traj = match cfg.solve.solver {
            SolverKind::Subordination(p) => {
                let phi0 = cfg.solve.initial.realize(cfg.solve.grid)?;
                let (traj, report) = subordination_trajectory(&phi0, cfg.solve.tau, cfg.solve.steps, &p)?;
                summary.push_str(&format!(
                    "non-convergent modes: {}\n",
                    report.non_convergent().len()
                ));
                if let Some(w) = writer.as_mut() {
                    w.write("subordination_modes.csv", &subordination_csv(&report))?;
                }
                traj
            }
            _ => solve(&cfg.solve)?,
        };
        for (k, slice) in traj.slices.iter().enumerate() {
            summary.push_str(&format!("step {k}: sup norm {:.6e}\n", slice.sup_norm()));
        }
        if let Some(w) = writer.as_mut() {
            w.trajectory("psi", &traj)?;
        }
        solvers.push(cfg.solve.solver.to_string());
    }

    if cfg.emit_kernel {
        let k = kernel(&cfg.solve.grid, cfg.solve.tau, cfg.solve.steps, Propagator::Extension)?;
        if let Some(w) = writer.as_mut() {
            w.write(&format!("kernel_{:04}.csv", cfg.solve.steps), &field_to_string(&k))?;
        } else {
            summary.push_str(&format!("kernel sup norm {:.6e}\n", k.sup_norm()));
        }
    }

    let manifest = RunManifest {
        config: cfg.echo(),
        solvers,
        wall_time_s: start.elapsed().as_secs_f64(),
        cfl_max_tau: cfl_max_tau(&cfg.solve.grid),
        tolerance,
        files: writer.as_ref().map(|w| w.files.clone()).unwrap_or_default(),
    };
    let pass = manifest.tolerance.iter().all(|t| t.pass);
    if cfg.manifest {
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        match &writer {
            Some(w) => {
                let path = w.dir.join("manifest.json");
                fs::write(&path, json + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            None => summary.push_str(&(json + "\n")),
        }
    }
    Ok(RunOutcome {
        manifest,
        pass,
        summary,
    })
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Parses `argv`, runs, prints the summary, and returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = parse_config(&args).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(o) => {
            print!("{}", o.summary);
            if o.pass {
                EXIT_OK
            } else {
                EXIT_TOLERANCE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Args {
        Args::try_parse_from(std::iter::once("ck-lattice").chain(s.split_whitespace())).unwrap()
    }

    #[test]
    fn parses_flag_examples() {
        let cfg = parse_config(&args(
            "--dim 1 --points 16 --spacing 1.0 --tau 0.2 --steps 10 --initial delta --solver spectral",
        ))
        .unwrap();
        assert_eq!(cfg.solve.solver, SolverKind::Spectral);
        assert_eq!(cfg.solve.steps, 10);

        let err = parse_config(&args("--dim 1 --spacing 1 --tau 0.5")).unwrap_err();
        assert!(matches!(err, Error::Cfl { .. }));
        assert!(err.to_string().contains("2(sqrt(2)-1)"));
        assert_eq!(exit_code(&err), EXIT_CONFIG);

        let cfg = parse_config(&args("--solver series:20")).unwrap();
        assert_eq!(cfg.solve.solver, SolverKind::Series { terms: 20 });
        assert!(parse_config(&args("--solver warp")).is_err());
    }

    #[test]
    fn compare_pairs_split_on_solver_names() {
        let (a, b) = parse_compare("subordination:40,64,256,spectral").unwrap();
        assert!(matches!(a, SolverKind::Subordination(_)));
        assert_eq!(b, SolverKind::Spectral);
        assert_eq!(parse_compare("leapfrog, series:5").unwrap().1, SolverKind::Series { terms: 5 });
        assert!(parse_compare("leapfrog").is_err());
    }

    #[test]
    fn missing_config_file_is_io() {
        let err = parse_config(&args("--config /nonexistent/cfg.json")).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_IO);
    }
}
