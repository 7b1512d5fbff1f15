//! Command-line driver: mesh generation, kernel and eigenvalue studies.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vemeig::assembly::assemble;
use vemeig::eigensolve::{kernel_dimension, solve_pencil, solve_source, EigenOptions, SourceProblem, DEFAULT_DENSE_LIMIT};
use vemeig::mesh::{mesh_stats, read_mesh, write_mesh, MeshFamily, MeshKind, PolygonalMesh};
use vemeig::study::{
    eigen_csv, table_preset, run_convergence, run_kernel_study, run_source_study, source_report, OutputFormat,
    StudyConfig,
};
use vemeig::vem::DEFAULT_ALPHA;
use vemeig::{Error, Result};

#[derive(Parser)]
#[command(name = "vemeig", version, about = "Virtual element eigenvalues of the Dirichlet Laplacian on the unit square")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, validate or summarize meshes.
    Mesh {
        #[command(subcommand)]
        action: MeshAction,
    },
    /// Dimension of the mass-matrix kernel for a mesh or a family.
    Kernel(KernelArgs),
    /// Smallest eigenvalues on one mesh.
    Eig(EigArgs),
    /// Eigenvalue convergence study over mesh levels.
    Study(StudyArgs),
    /// Source problem with u = sin(πx) sin(πy).
    Source(SourceArgs),
}

#[derive(Subcommand)]
enum MeshAction {
    /// Write a family member to a JSON mesh file.
    Gen {
        /// triangle, square, dyadic, hexagon or voronoi.
        #[arg(long)]
        kind: MeshKind,
        /// N for triangle/square/dyadic, rows m for hexagon, generators P for voronoi.
        #[arg(long)]
        n: usize,
        /// Hexagon columns (default: nearest even integer to m·√3/2).
        #[arg(long)]
        columns: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Lloyd sweeps for voronoi meshes.
        #[arg(long, default_value_t = vemeig::mesh::DEFAULT_LLOYD_ITERS)]
        lloyd: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a mesh file for validity.
    Validate { file: PathBuf },
    /// Print mesh statistics.
    Stats {
        file: PathBuf,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone)]
struct MeshSource {
    /// Mesh file written by `mesh gen`.
    #[arg(long, conflicts_with_all = ["family", "level"])]
    mesh: Option<PathBuf>,
    /// Mesh family, used with --level (one mesh) or --levels (a table).
    #[arg(long)]
    family: Option<MeshKind>,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl MeshSource {
    fn load(&self) -> Result<PolygonalMesh> {
        match (&self.mesh, self.family, self.level) {
            (Some(p), _, _) => read_mesh(p),
            (None, Some(kind), Some(level)) => MeshFamily::from_level(kind, level, self.seed).generate(),
            _ => Err(Error::Parameter("give --mesh FILE or --family KIND --level L".into())),
        }
    }
}

fn degree_parser() -> clap::builder::RangedU64ValueParser<usize> {
    clap::builder::RangedU64ValueParser::<usize>::new().range(1..=4)
}

#[derive(Args)]
struct KernelArgs {
    #[command(flatten)]
    source: MeshSource,
    /// Polynomial degrees (1..=4), comma separated; with --levels, runs a family table.
    #[arg(long, value_delimiter = ',', value_parser = degree_parser(), default_values_t = [1usize, 2, 3, 4])]
    degree: Vec<usize>,
    /// Family levels for a kernel table (needs --family).
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Preset kernel table: kernelT, kernelS, kernelD, kernelV, kernelH.
    #[arg(long = "paper-table")]
    preset: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Allow cases above the desk-scale size limit.
    #[arg(long)]
    large: bool,
}

#[derive(Args)]
struct EigArgs {
    #[command(flatten)]
    source: MeshSource,
    #[arg(long, value_parser = degree_parser())]
    degree: usize,
    #[arg(long, default_value_t = 10)]
    num_eigs: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Use the dense solver up to this many DOFs.
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
    /// Write A.mtx and B.mtx (Matrix Market) into this directory.
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long, required_unless_present = "preset")]
    family: Option<MeshKind>,
    #[arg(long, value_delimiter = ',', value_parser = degree_parser())]
    degree: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    levels: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    num_eigs: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Voronoi generator seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Preset: tk1..tk4, sk*, dk*, vk*, hk* (eigenvalues) or kernelT/S/D/V/H.
    #[arg(long = "paper-table")]
    preset: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    dense_limit: usize,
    #[arg(long)]
    large: bool,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SourceArgs {
    #[command(flatten)]
    source: MeshSource,
    #[arg(long, value_delimiter = ',', value_parser = degree_parser())]
    degree: Vec<usize>,
    /// Family levels (needs --family); otherwise a single mesh is solved.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    large: bool,
}

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($t:tt)*) => { writeln!(std::io::stdout(), $($t)*)? };
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text)?,
        None => write!(std::io::stdout(), "{text}")?,
    }
    Ok(())
}

fn run_mesh(action: MeshAction) -> Result<()> {
    match action {
        MeshAction::Gen {
            kind,
            n,
            columns,
            seed,
            lloyd,
            output,
        } => {
            let family = match (kind, columns) {
                (MeshKind::Hexagon, Some(c)) => MeshFamily::Hexagon { n: c, m: n },
                (MeshKind::Voronoi, _) => MeshFamily::Voronoi {
                    p: n,
                    seed,
                    lloyd_iters: lloyd,
                },
                (_, Some(_)) => return Err(Error::Parameter("--columns only applies to hexagon meshes".into())),
                (kind, None) => MeshFamily::from_level(kind, n, seed),
            };
            let mesh = family.generate()?;
            write_mesh(&mesh, &output)?;
            out!(
                "wrote {}: {} vertices, {} cells",
                output.display(),
                mesh.num_vertices(),
                mesh.num_cells()
            );
        }
        MeshAction::Validate { file } => {
            let mesh = read_mesh(&file)?;
            out!("valid: {} vertices, {} cells", mesh.num_vertices(), mesh.num_cells());
        }
        MeshAction::Stats { file, json } => {
            let s = mesh_stats(&read_mesh(&file)?);
            if json {
                out!("{}", serde_json::to_string_pretty(&s).expect("stats serialize"));
            } else {
                out!("vertices: {}", s.num_vertices);
                out!("cells: {}", s.num_cells);
                out!("edges: {}", s.num_edges);
                out!("boundary vertices: {}", s.num_boundary_vertices);
                out!("h_max: {:.6}", s.h_max);
                out!("min edge / diameter: {:.6}", s.min_edge_to_h);
                out!("min area: {:.6e}", s.min_area);
                for (nv, count) in &s.cell_edge_histogram {
                    out!("{nv}-gons: {count}");
                }
            }
        }
    }
    Ok(())
}

fn run_kernel(args: KernelArgs) -> Result<()> {
    let preset = args.preset.as_deref().map(table_preset).transpose()?;
    let family_cfg = match (preset, &args.levels) {
        (Some((_, false)), _) => {
            return Err(Error::Parameter("kernel presets are kernelT, kernelS, kernelD, kernelV, kernelH".into()))
        }
        (Some((cfg, true)), _) => Some(cfg),
        (None, Some(levels)) => {
            let family = args
                .source
                .family
                .ok_or_else(|| Error::Parameter("--levels needs --family".into()))?;
            Some(StudyConfig::new(family, levels.clone(), args.degree.clone()))
        }
        (None, None) => None,
    };
    if let Some(mut cfg) = family_cfg {
        cfg.alpha = args.alpha;
        cfg.seed = args.source.seed;
        cfg.large = args.large;
        return emit(&run_kernel_study(&cfg)?.render(args.format), None);
    }
    let mesh = args.source.load()?;
    out!("k,kernel_dim,dim_Vh");
    for &k in &args.degree {
        let pencil = assemble(&mesh, k, args.alpha)?;
        out!("{k},{},{}", kernel_dimension(&pencil.b)?, pencil.n());
    }
    Ok(())
}

fn run_eig(args: EigArgs) -> Result<()> {
    let mesh = args.source.load()?;
    let pencil = assemble(&mesh, args.degree, args.alpha)?;
    if let Some(dir) = &args.export {
        std::fs::create_dir_all(dir)?;
        for (name, m) in [("A.mtx", &pencil.a), ("B.mtx", &pencil.b)] {
            m.write_matrix_market(std::io::BufWriter::new(std::fs::File::create(dir.join(name))?))?;
        }
    }
    let kernel = kernel_dimension(&pencil.b)?;
    let n_eigs = args.num_eigs.min(pencil.n() - kernel);
    let opts = EigenOptions {
        n_eigs,
        dense_limit: args.dense_limit,
        ..EigenOptions::default()
    };
    let sol = solve_pencil(&pencil.a, &pencil.b, &opts)?;
    log::info!("dim V_h = {}, dim ker B = {kernel}, solver {:?}", pencil.n(), sol.solver);
    let pi2 = std::f64::consts::PI.powi(2);
    let over: Vec<f64> = sol.eigenvalues.iter().map(|l| l / pi2).collect();
    write!(std::io::stdout(), "{}", eigen_csv(&over))?;
    Ok(())
}

fn run_study(args: StudyArgs) -> Result<()> {
    let (mut cfg, kernel_table) = match &args.preset {
        Some(name) => table_preset(name)?,
        None => {
            let family = args.family.expect("clap enforces --family");
            (StudyConfig::new(family, args.levels.clone(), args.degree.clone()), false)
        }
    };
    if args.preset.is_some() {
        if !args.levels.is_empty() {
            cfg.levels = args.levels.clone();
        }
        if !args.degree.is_empty() {
            cfg.degrees = args.degree.clone();
        }
    }
    cfg.num_eigs = args.num_eigs;
    cfg.alpha = args.alpha;
    cfg.seed = args.seed;
    cfg.format = args.format;
    cfg.dense_limit = args.dense_limit;
    cfg.large = args.large;
    let text = if kernel_table {
        run_kernel_study(&cfg)?.render(cfg.format)
    } else {
        run_convergence(&cfg)?.render(cfg.format)
    };
    emit(&text, args.output.as_ref())
}

fn run_source(args: SourceArgs) -> Result<()> {
    if args.degree.is_empty() {
        return Err(Error::Parameter("--degree is required".into()));
    }
    if let Some(levels) = &args.levels {
        let family = args
            .source
            .family
            .ok_or_else(|| Error::Parameter("--levels needs --family".into()))?;
        let mut cfg = StudyConfig::new(family, levels.clone(), args.degree.clone());
        cfg.alpha = args.alpha;
        cfg.seed = args.source.seed;
        cfg.large = args.large;
        let rows = run_source_study(&cfg)?;
        return emit(&source_report(family, &rows, args.format), None);
    }
    let mesh = args.source.load()?;
    let pi = std::f64::consts::PI;
    let u = |x: [f64; 2]| (pi * x[0]).sin() * (pi * x[1]).sin();
    let f = |x: [f64; 2]| 2.0 * pi * pi * u(x);
    let g = |x: [f64; 2]| {
        [
            pi * (pi * x[0]).cos() * (pi * x[1]).sin(),
            pi * (pi * x[0]).sin() * (pi * x[1]).cos(),
        ]
    };
    let problem = SourceProblem {
        f: &f,
        u: &u,
        grad_u: &g,
    };
    out!("k,h,dim_Vh,h1_error,l2_error");
    for &k in &args.degree {
        let s = solve_source(&mesh, k, args.alpha, &problem)?;
        out!("{k},{:.12e},{},{:.6e},{:.6e}", s.h_max, s.n_dofs, s.h1_error, s.l2_error);
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    vemeig::init_thread_pool();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Mesh { action } => run_mesh(action),
        Command::Kernel(a) => run_kernel(a),
        Command::Eig(a) => run_eig(a),
        Command::Study(a) => run_study(a),
        Command::Source(a) => run_source(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // closed pipe, e.g. `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
