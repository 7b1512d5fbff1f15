//! Kernel-dimension and eigenvalue convergence studies over mesh families,
//! with CSV and Markdown report formatting.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::{assemble, GlobalDofMap};
use crate::eigensolve::{
    exact_eigenvalues_over_pi2, kernel_dimension, solve_pencil, solve_source, EigenOptions, SolverKind,
    SourceProblem, DEFAULT_DENSE_LIMIT,
};
use crate::mesh::{MeshFamily, MeshKind, PolygonalMesh};
use crate::vem::{DEFAULT_ALPHA, MAX_DEGREE};
use crate::{Error, Point, Result};

/// Errors below this are reported as sitting at the precision floor.
pub const PRECISION_FLOOR: f64 = 1e-11;

/// Cases with more interior DOFs than this need `large = true`.
pub const LARGE_DOFS: usize = 30_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            _ => Err(Error::Parameter(format!("unknown format {s:?} (expected csv or md)"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub family: MeshKind,
    /// `N` for triangles, squares and dyadic meshes, rows `m` for hexagons,
    /// generator count `P` for Voronoi meshes.
    pub levels: Vec<usize>,
    pub degrees: Vec<usize>,
    pub num_eigs: usize,
    pub alpha: f64,
    pub seed: u64,
    pub format: OutputFormat,
    pub dense_limit: usize,
    pub large: bool,
}

impl StudyConfig {
    pub fn new(family: MeshKind, levels: Vec<usize>, degrees: Vec<usize>) -> Self {
        StudyConfig {
            family,
            levels,
            degrees,
            num_eigs: 10,
            alpha: DEFAULT_ALPHA,
            seed: 1,
            format: OutputFormat::Csv,
            dense_limit: DEFAULT_DENSE_LIMIT,
            large: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::Parameter("no levels given".into()));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "levels must be strictly increasing, got {:?}",
                self.levels
            )));
        }
        if self.degrees.is_empty() || self.degrees.iter().any(|k| !(1..=MAX_DEGREE).contains(k)) {
            return Err(Error::Parameter(format!(
                "degrees must lie in 1..={MAX_DEGREE}, got {:?}",
                self.degrees
            )));
        }
        if self.num_eigs == 0 {
            return Err(Error::Parameter("num_eigs must be positive".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Parameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }

    fn mesh(&self, level: usize) -> Result<PolygonalMesh> {
        MeshFamily::from_level(self.family, level, self.seed).generate()
    }
}

/// Reference-layout presets: `tk1`..`tk4`, `sk*`, `vk*`, `hk*`, `dk*` for
/// eigenvalue tables and `kernelT`, `kernelS`, `kernelV`, `kernelH`,
/// `kernelD` for kernel tables. Returns the config and whether it is a
/// kernel table.
pub fn table_preset(name: &str) -> Result<(StudyConfig, bool)> {
    let lower = name.to_ascii_lowercase();
    let levels_for = |kind: MeshKind| match kind {
        MeshKind::Voronoi => vec![50, 100, 200, 400, 800],
        MeshKind::Hexagon => vec![10, 20, 30, 40, 50, 60, 70, 80],
        _ => vec![4, 8, 16, 32, 64],
    };
    if let Some(fam) = lower.strip_prefix("kernel") {
        let kind: MeshKind = fam.parse()?;
        return Ok((StudyConfig::new(kind, levels_for(kind), vec![1, 2, 3, 4]), true));
    }
    let bad = || Error::Parameter(format!("unknown table preset {name:?}"));
    let mut chars = lower.chars();
    let kind: MeshKind = chars.next().ok_or_else(bad)?.to_string().parse().map_err(|_| bad())?;
    if chars.next() != Some('k') {
        return Err(bad());
    }
    let k: usize = chars.as_str().parse().map_err(|_| bad())?;
    if !(1..=MAX_DEGREE).contains(&k) {
        return Err(bad());
    }
    let levels = match kind {
        MeshKind::Hexagon => vec![10, 20, 40, 60, 80],
        _ => levels_for(kind),
    };
    Ok((StudyConfig::new(kind, levels, vec![k]), false))
}

fn level_label(kind: MeshKind, level: usize) -> String {
    match kind {
        MeshKind::Hexagon => format!("{}x{}", crate::mesh::default_hex_columns(level), level),
        _ => level.to_string(),
    }
}

fn level_header(kind: MeshKind) -> &'static str {
    match kind {
        MeshKind::Hexagon => "n x m",
        MeshKind::Voronoi => "P",
        _ => "N",
    }
}

fn check_size(cfg: &StudyConfig, level: usize, k: usize, n: usize) -> Result<()> {
    if n > LARGE_DOFS && !cfg.large {
        return Err(Error::Parameter(format!(
            "{} level {} with k = {k} has {n} DOFs (more than {LARGE_DOFS}); pass --large to run it",
            cfg.family.name(),
            level_label(cfg.family, level)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelEntry {
    pub level: usize,
    pub k: usize,
    pub kernel_dim: usize,
    pub n_dofs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelTable {
    pub family: MeshKind,
    pub levels: Vec<usize>,
    pub degrees: Vec<usize>,
    /// Row-major over `levels` then `degrees`.
    pub entries: Vec<KernelEntry>,
}

impl KernelTable {
    pub fn get(&self, level: usize, k: usize) -> Option<&KernelEntry> {
        self.entries.iter().find(|e| e.level == level && e.k == k)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("family,level,k,kernel_dim,dim_Vh\n");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                self.family.name(),
                level_label(self.family, e.level),
                e.k,
                e.kernel_dim,
                e.n_dofs
            );
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("#### {} mesh: dim ker B (dim V_h)\n\n", self.family.name());
        let _ = write!(s, "| {} |", level_header(self.family));
        for k in &self.degrees {
            let _ = write!(s, " k={k} |");
        }
        s.push_str("\n|---:|");
        s.push_str(&"---:|".repeat(self.degrees.len()));
        s.push('\n');
        for &level in &self.levels {
            let _ = write!(s, "| {} |", level_label(self.family, level));
            for &k in &self.degrees {
                let e = self.get(level, k).expect("all cases computed");
                let _ = write!(s, " {} ({}) |", e.kernel_dim, e.n_dofs);
            }
            s.push('\n');
        }
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

pub fn run_kernel_study(cfg: &StudyConfig) -> Result<KernelTable> {
    cfg.validate()?;
    let cases: Vec<(usize, usize)> = cfg
        .levels
        .iter()
        .flat_map(|&l| cfg.degrees.iter().map(move |&k| (l, k)))
        .collect();
    let entries = cases
        .par_iter()
        .map(|&(level, k)| {
            let mesh = cfg.mesh(level)?;
            let n = GlobalDofMap::new(&mesh, k)?.n_free;
            check_size(cfg, level, k, n)?;
            let pencil = assemble(&mesh, k, cfg.alpha)?;
            let kernel_dim = kernel_dimension(&pencil.b)?;
            log::info!("{} level {level} k={k}: dim ker B = {kernel_dim} of {n}", cfg.family.name());
            Ok(KernelEntry {
                level,
                k,
                kernel_dim,
                n_dofs: n,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelTable {
        family: cfg.family,
        levels: cfg.levels.clone(),
        degrees: cfg.degrees.clone(),
        entries,
    })
}

/// Observed order between two levels.
pub fn rate(e_prev: f64, e: f64, h_prev: f64, h: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelResult {
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub kernel_dim: usize,
    /// Computed `λ_h / π²`, ascending.
    pub eigenvalues: Vec<f64>,
    /// `|λ_h - λ| / π²`.
    pub errors: Vec<f64>,
    pub max_residual: f64,
    pub dense: bool,
    /// Spectral gap ratio around the kernel cluster (dense solves only).
    pub gap_ratio: Option<f64>,
    /// All finite `λ_h / π²` up to [`SPURIOUS_WINDOW`] (dense solves only).
    pub low_spectrum: Option<Vec<f64>>,
    pub seconds: f64,
}

/// Upper end of the `λ/π²` window scanned for spurious modes.
pub const SPURIOUS_WINDOW: f64 = 20.0;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub family: MeshKind,
    pub k: usize,
    pub exact: Vec<f64>,
    pub levels: Vec<LevelResult>,
}

impl ConvergenceTable {
    /// `rates[i][l]`, `None` at the first level and wherever either level has
    /// fewer than `i + 1` eigenvalues.
    pub fn rates(&self) -> Vec<Vec<Option<f64>>> {
        (0..self.exact.len())
            .map(|i| {
                (0..self.levels.len())
                    .map(|l| {
                        let (p, c) = (self.levels.get(l.wrapping_sub(1))?, &self.levels[l]);
                        Some(rate(*p.errors.get(i)?, *c.errors.get(i)?, p.h, c.h))
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub tables: Vec<ConvergenceTable>,
}

fn solve_level(cfg: &StudyConfig, level: usize, k: usize) -> Result<LevelResult> {
    let start = std::time::Instant::now();
    let mesh = cfg.mesh(level)?;
    let n = GlobalDofMap::new(&mesh, k)?.n_free;
    check_size(cfg, level, k, n)?;
    let pencil = assemble(&mesh, k, cfg.alpha)?;
    let kernel_dim = kernel_dimension(&pencil.b)?;
    let wanted = cfg.num_eigs.min(n - kernel_dim);
    let opts = EigenOptions {
        n_eigs: wanted,
        dense_limit: cfg.dense_limit,
        ..EigenOptions::default()
    };
    let sol = solve_pencil(&pencil.a, &pencil.b, &opts)?;
    let pi2 = std::f64::consts::PI.powi(2);
    let exact = exact_eigenvalues_over_pi2(wanted);
    let eigenvalues: Vec<f64> = sol.eigenvalues.iter().map(|l| l / pi2).collect();
    let errors = eigenvalues.iter().zip(&exact).map(|(a, b)| (a - b).abs()).collect();
    let low_spectrum = sol.spectrum.as_ref().map(|s| {
        s.mu.iter()
            .filter(|&&m| m > 0.0)
            .map(|m| 1.0 / (m * pi2))
            .filter(|&l| l <= SPURIOUS_WINDOW)
            .collect()
    });
    log::info!(
        "{} level {level} k={k}: N_h = {n}, ker = {kernel_dim}, solver {:?}",
        cfg.family.name(),
        sol.solver
    );
    Ok(LevelResult {
        level,
        h: mesh.h_max(),
        n_dofs: n,
        kernel_dim,
        eigenvalues,
        errors,
        max_residual: sol.residuals.iter().copied().fold(0.0, f64::max),
        dense: sol.solver == SolverKind::Dense,
        gap_ratio: sol.spectrum.as_ref().map(|s| s.gap_ratio),
        low_spectrum,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_convergence(cfg: &StudyConfig) -> Result<SpectralReport> {
    cfg.validate()?;
    let cases: Vec<(usize, usize)> = cfg
        .degrees
        .iter()
        .flat_map(|&k| cfg.levels.iter().map(move |&l| (k, l)))
        .collect();
    let results = cases
        .par_iter()
        .map(|&(k, level)| solve_level(cfg, level, k))
        .collect::<Result<Vec<_>>>()?;
    let mut it = results.into_iter();
    let tables = cfg
        .degrees
        .iter()
        .map(|&k| {
            let levels: Vec<LevelResult> = it.by_ref().take(cfg.levels.len()).collect();
            let count = levels.iter().map(|l| l.errors.len()).max().unwrap_or(0);
            ConvergenceTable {
                family: cfg.family,
                k,
                exact: exact_eigenvalues_over_pi2(count),
                levels,
            }
        })
        .collect();
    Ok(SpectralReport { tables })
}

fn fmt_err(e: f64) -> String {
    let s = format!("{e:.1e}");
    // Rust prints `3.2e-1`; pad the exponent to two digits
    match s.split_once('e') {
        Some((m, x)) => {
            let (sign, digits) = match x.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', x),
            };
            format!("{m}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

impl SpectralReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("family,k,level,h,eig_index,exact_over_pi2,error_over_pi2,rate,kernel_dim,dim_Vh\n");
        for t in &self.tables {
            let rates = t.rates();
            for (l, lr) in t.levels.iter().enumerate() {
                for (i, ex) in t.exact.iter().enumerate().take(lr.errors.len()) {
                    let rate = rates[i][l].map(|r| format!("{r:.6}")).unwrap_or_default();
                    let _ = writeln!(
                        s,
                        "{},{},{},{:.12e},{},{},{:.6e},{},{},{}",
                        t.family.name(),
                        t.k,
                        level_label(t.family, lr.level),
                        lr.h,
                        i + 1,
                        ex,
                        lr.errors[i],
                        rate,
                        lr.kernel_dim,
                        lr.n_dofs
                    );
                }
            }
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        for t in &self.tables {
            let rates = t.rates();
            let nl = t.levels.len();
            let _ = writeln!(s, "#### {} mesh, k = {}\n", t.family.name(), t.k);
            let _ = writeln!(s, "| Exact | Errors (rate) |{}", " |".repeat(nl - 1));
            let _ = writeln!(s, "|---:|{}", "---:|".repeat(nl));
            let mut floor = false;
            for (i, ex) in t.exact.iter().enumerate() {
                let _ = write!(s, "| {ex} |");
                for l in 0..nl {
                    let Some(&e) = t.levels[l].errors.get(i) else {
                        s.push_str(" - |");
                        continue;
                    };
                    let mark = if e < PRECISION_FLOOR {
                        floor = true;
                        "*"
                    } else {
                        ""
                    };
                    match rates[i][l] {
                        Some(r) => {
                            let _ = write!(s, " {}{mark} ({r:.2}) |", fmt_err(e));
                        }
                        None => {
                            let _ = write!(s, " {}{mark} |", fmt_err(e));
                        }
                    }
                }
                s.push('\n');
            }
            let _ = write!(s, "| {} |", level_header(t.family));
            for lr in &t.levels {
                let _ = write!(s, " {} |", level_label(t.family, lr.level));
            }
            s.push_str("\n| dim ker B (dim V_h) |");
            for lr in &t.levels {
                let _ = write!(s, " {} ({}) |", lr.kernel_dim, lr.n_dofs);
            }
            s.push('\n');
            if floor {
                let _ = writeln!(s, "\n\\* precision floor: error below {PRECISION_FLOOR:e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

/// Eigenvalue listing for a single mesh.
pub fn eigen_csv(computed_over_pi2: &[f64]) -> String {
    let exact = exact_eigenvalues_over_pi2(computed_over_pi2.len());
    let mut s = String::from("index,exact_over_pi2,computed_over_pi2,abs_error_over_pi2\n");
    for (i, (c, e)) in computed_over_pi2.iter().zip(&exact).enumerate() {
        let _ = writeln!(s, "{},{},{:.15e},{:.6e}", i + 1, e, c, (c - e).abs());
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct SourceRow {
    pub level: usize,
    pub h: f64,
    pub n_dofs: usize,
    pub h1_error: f64,
    pub l2_error: f64,
    pub h1_rate: Option<f64>,
    pub l2_rate: Option<f64>,
}

fn sine_u(x: Point) -> f64 {
    let pi = std::f64::consts::PI;
    (pi * x[0]).sin() * (pi * x[1]).sin()
}

fn sine_grad(x: Point) -> Point {
    let pi = std::f64::consts::PI;
    [
        pi * (pi * x[0]).cos() * (pi * x[1]).sin(),
        pi * (pi * x[0]).sin() * (pi * x[1]).cos(),
    ]
}

fn sine_f(x: Point) -> f64 {
    2.0 * std::f64::consts::PI.powi(2) * sine_u(x)
}

/// Manufactured solution `u = sin(πx) sin(πy)` for each level and degree.
pub fn run_source_study(cfg: &StudyConfig) -> Result<Vec<(usize, Vec<SourceRow>)>> {
    cfg.validate()?;
    let problem = SourceProblem {
        f: &sine_f,
        u: &sine_u,
        grad_u: &sine_grad,
    };
    cfg.degrees
        .iter()
        .map(|&k| {
            let mut rows: Vec<SourceRow> = Vec::new();
            for &level in &cfg.levels {
                let mesh = cfg.mesh(level)?;
                let n = GlobalDofMap::new(&mesh, k)?.n_free;
                check_size(cfg, level, k, n)?;
                let sol = solve_source(&mesh, k, cfg.alpha, &problem)?;
                let (h1_rate, l2_rate) = match rows.last() {
                    Some(p) => (
                        Some(rate(p.h1_error, sol.h1_error, p.h, sol.h_max)),
                        Some(rate(p.l2_error, sol.l2_error, p.h, sol.h_max)),
                    ),
                    None => (None, None),
                };
                rows.push(SourceRow {
                    level,
                    h: sol.h_max,
                    n_dofs: sol.n_dofs,
                    h1_error: sol.h1_error,
                    l2_error: sol.l2_error,
                    h1_rate,
                    l2_rate,
                });
            }
            Ok((k, rows))
        })
        .collect()
}

pub fn source_report(family: MeshKind, rows: &[(usize, Vec<SourceRow>)], format: OutputFormat) -> String {
    let mut s = String::new();
    match format {
        OutputFormat::Csv => {
            s.push_str("family,k,level,h,dim_Vh,h1_error,h1_rate,l2_error,l2_rate\n");
            for (k, rs) in rows {
                for r in rs {
                    let f = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
                    let _ = writeln!(
                        s,
                        "{},{k},{},{:.12e},{},{:.6e},{},{:.6e},{}",
                        family.name(),
                        level_label(family, r.level),
                        r.h,
                        r.n_dofs,
                        r.h1_error,
                        f(r.h1_rate),
                        r.l2_error,
                        f(r.l2_rate)
                    );
                }
            }
        }
        OutputFormat::Markdown => {
            for (k, rs) in rows {
                let _ = writeln!(s, "#### {} mesh, k = {k}, u = sin(πx) sin(πy)\n", family.name());
                let _ = writeln!(s, "| {} | h | dim V_h | H1 error (rate) | L2 error (rate) |", level_header(family));
                s.push_str("|---:|---:|---:|---:|---:|\n");
                for r in rs {
                    let cell = |e: f64, r: Option<f64>| match r {
                        Some(r) => format!("{} ({r:.2})", fmt_err(e)),
                        None => fmt_err(e),
                    };
                    let _ = writeln!(
                        s,
                        "| {} | {:.4} | {} | {} | {} |",
                        level_label(family, r.level),
                        r.h,
                        r.n_dofs,
                        cell(r.h1_error, r.h1_rate),
                        cell(r.l2_error, r.l2_rate)
                    );
                }
                s.push('\n');
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_of_power_law() {
        let (c, p) = (3.7, 4.0);
        let hs = [0.5, 0.25, 0.125];
        let es: Vec<f64> = hs.iter().map(|h: &f64| c * h.powf(p)).collect();
        for i in 1..3 {
            assert!((rate(es[i - 1], es[i], hs[i - 1], hs[i]) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn error_formatting() {
        assert_eq!(fmt_err(0.32), "3.2e-01");
        assert_eq!(fmt_err(12.9), "1.3e+01");
        assert_eq!(fmt_err(3.9e-12), "3.9e-12");
    }

    #[test]
    fn presets() {
        let (c, kernel) = table_preset("tk1").unwrap();
        assert!(!kernel);
        assert_eq!(c.family, MeshKind::Triangle);
        assert_eq!(c.levels, vec![4, 8, 16, 32, 64]);
        assert_eq!(c.degrees, vec![1]);
        let (c, kernel) = table_preset("kernelD").unwrap();
        assert!(kernel);
        assert_eq!(c.family, MeshKind::Dyadic);
        assert!(table_preset("xk1").is_err());
        assert!(table_preset("tk5").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = StudyConfig::new(MeshKind::Square, vec![4, 8], vec![1]);
        assert!(c.validate().is_ok());
        c.levels = vec![8, 4];
        assert!(c.validate().is_err());
        c.levels = vec![4];
        c.degrees = vec![5];
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_square_study_and_reports() {
        let mut c = StudyConfig::new(MeshKind::Square, vec![4, 8], vec![2]);
        c.num_eigs = 4;
        let r = run_convergence(&c).unwrap();
        let t = &r.tables[0];
        assert_eq!(t.levels[0].n_dofs, 49);
        assert!((t.levels[0].errors[0] - 7.6e-4).abs() < 0.05e-4);
        let csv = r.to_csv();
        assert!(csv.starts_with("family,k,level,h,eig_index,exact_over_pi2,error_over_pi2,rate,kernel_dim,dim_Vh\n"));
        assert_eq!(csv.lines().count(), 1 + 2 * 4);
        assert_eq!(csv, run_convergence(&c).unwrap().to_csv());
        let md = r.to_markdown();
        assert!(md.contains("Errors (rate)"));
        let k = run_kernel_study(&c).unwrap();
        assert_eq!(k.get(8, 2).unwrap().n_dofs, 225);
        assert!(k.to_markdown().contains("0 (225)"));
    }

    #[test]
    fn coarse_level_with_fewer_eigenvalues() {
        // the N = 4 triangle mesh with k = 1 has only 9 interior DOFs
        let c = StudyConfig::new(MeshKind::Triangle, vec![4, 8], vec![1]);
        let r = run_convergence(&c).unwrap();
        let t = &r.tables[0];
        assert_eq!(t.exact.len(), 10);
        assert_eq!(t.levels[0].errors.len(), 9);
        assert_eq!(t.levels[1].errors.len(), 10);
        let rates = t.rates();
        assert!(rates[9][1].is_none());
        assert!(rates[8][1].is_some());
        assert_eq!(r.to_csv().lines().count(), 1 + 9 + 10);
        assert!(r.to_markdown().contains("| 17 | - |"));
    }

    #[test]
    fn large_cases_are_gated() {
        let c = StudyConfig::new(MeshKind::Square, vec![64], vec![4]);
        assert!(matches!(run_kernel_study(&c), Err(Error::Parameter(_))));
    }
}
