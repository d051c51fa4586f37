use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lightcone::correspondence::{
    cone_to_decorated, decorated_to_cone, discretely_conformal_test, tstar_membership, vertex_scale_cone,
    vertex_scale_decorated,
};
use lightcone::hull::{epstein_penner_faces, export_mesh, lifted_polygons, matches_decomposition, Chart};
use lightcone::io::{read_surface_file, write_surface_file, Surface};
use lightcone::surface::{delaunay_decomposition, make_delaunay_records, SurfaceMetric};
use lightcone::uniformize::{uniformize_with, SolverOptions};
use lightcone::{Curvature, DecoratedMetric, EdgeStatus, Error, Result};

#[derive(Parser)]
#[command(
    name = "lightcone",
    version,
    about = "Decorated surfaces, cone metrics and their light-cone hulls"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Cone,
    Decorated,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartArg {
    Minkowski,
    Cylinder,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert between a decorated metric and a cone metric.
    Convert {
        #[arg(long)]
        to: Target,
        /// Curvature of the cone metric.
        #[arg(short = 'K', allow_negative_numbers = true)]
        k: Option<i64>,
        /// Euclidean dictionary lambda = length.
        #[arg(long)]
        bps_convention: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Flip to a Delaunay triangulation and report the decomposition.
    Delaunay {
        input: PathBuf,
        output: PathBuf,
        /// Write the flipped edge ids here, one per line.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Vertex scaling by the given factors.
    Scale {
        #[arg(short = 'u', value_delimiter = ',', allow_negative_numbers = true, required = true)]
        u: Vec<f64>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Find the vertex scaling with prescribed singular curvature.
    Uniformize {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        kappa: Vec<f64>,
        #[arg(short = 'K', allow_negative_numbers = true)]
        k: i64,
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
    },
    /// Diagnostics; exit status 0 if the check passes, 1 if not.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Convex hull of a finite orbit, written as an OBJ mesh.
    Hull {
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, value_enum, default_value = "minkowski")]
        chart: ChartArg,
        #[arg(long, default_value_t = 10.0)]
        ray_cap: f64,
        input: PathBuf,
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Gauss-Bonnet residual of a cone metric.
    GaussBonnet { input: PathBuf },
    /// Whether a decorated metric has a spherical counterpart.
    Tstar { input: PathBuf },
    /// Whether two metrics are discretely conformally equivalent.
    Equivalent { a: PathBuf, b: PathBuf },
}

fn curvature(k: i64) -> Result<Curvature> {
    Curvature::from_sign(k)
}

fn as_decorated(s: Surface) -> Result<DecoratedMetric> {
    match s {
        Surface::Decorated(d) => Ok(d),
        Surface::Cone(m) => cone_to_decorated(&m, false),
    }
}

fn status_counts<M: SurfaceMetric>(m: &M) -> Result<(usize, usize)> {
    let mut counts = (0, 0);
    for e in 0..m.tri().num_edges() {
        match m.edge_status_loose(e)? {
            EdgeStatus::Strict => counts.0 += 1,
            EdgeStatus::Flat => counts.1 += 1,
            EdgeStatus::Violated => {}
        }
    }
    Ok(counts)
}

fn delaunay<M: SurfaceMetric>(m: &M, log: Option<&PathBuf>) -> Result<M> {
    let (out, records) = make_delaunay_records(m)?;
    let (strict, flat) = status_counts(&out)?;
    let faces = delaunay_decomposition(&out)?;
    println!("flips: {}", records.len());
    println!("strict edges: {strict}");
    println!("flat edges: {flat}");
    println!("decomposition faces: {}", faces.len());
    if let Some(path) = log {
        let text: String = records.iter().map(|r| format!("{}\n", r.edge)).collect();
        std::fs::write(path, text).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Convert {
            to,
            k,
            bps_convention,
            input,
            output,
        } => {
            let s = read_surface_file(&input)?;
            let out = match (to, s) {
                (Target::Cone, Surface::Decorated(d)) => {
                    let k = k.ok_or_else(|| Error::Domain("converting to a cone metric needs -K".into()))?;
                    Surface::Cone(decorated_to_cone(&d, curvature(k)?)?)
                }
                (Target::Decorated, Surface::Cone(m)) => {
                    if let Some(k) = k {
                        if curvature(k)? != m.k {
                            return Err(Error::Domain(format!("input has curvature {}, not {k}", m.k.sign())));
                        }
                    }
                    Surface::Decorated(cone_to_decorated(&m, bps_convention)?)
                }
                (Target::Cone, Surface::Cone(_)) => return Err(Error::Domain("input is already a cone metric".into())),
                (Target::Decorated, Surface::Decorated(_)) => {
                    return Err(Error::Domain("input is already a decorated metric".into()))
                }
            };
            write_surface_file(&output, &out)?;
        }
        Cmd::Delaunay { input, output, log } => {
            let out = match read_surface_file(&input)? {
                Surface::Decorated(d) => Surface::Decorated(delaunay(&d, log.as_ref())?),
                Surface::Cone(m) => Surface::Cone(delaunay(&m, log.as_ref())?),
            };
            write_surface_file(&output, &out)?;
        }
        Cmd::Scale { u, input, output } => {
            let out = match read_surface_file(&input)? {
                Surface::Decorated(d) => Surface::Decorated(vertex_scale_decorated(&d, &u)?),
                Surface::Cone(m) => Surface::Cone(vertex_scale_cone(&m, &u)?),
            };
            write_surface_file(&output, &out)?;
        }
        Cmd::Uniformize {
            kappa,
            k,
            input,
            output,
            max_iter,
        } => {
            let k = curvature(k)?;
            let m = match read_surface_file(&input)? {
                Surface::Cone(m) => m,
                Surface::Decorated(d) => decorated_to_cone(&d, k)?,
            };
            let opts = SolverOptions {
                max_iter,
                ..Default::default()
            };
            let r = match uniformize_with(&m, &kappa, k, &opts) {
                Ok(r) => r,
                Err(e) => {
                    if let Error::NoConvergence { history, .. } = &e {
                        for (i, h) in history.iter().enumerate() {
                            println!("iteration {i}: residual {h:e}");
                        }
                    }
                    return Err(e);
                }
            };
            for (i, (h, f)) in r.history.iter().zip(&r.flips).enumerate() {
                println!("iteration {i}: residual {h:e}, flips {f}");
            }
            let u: Vec<String> = r.u.iter().map(|x| x.to_string()).collect();
            println!("u = {}", u.join(","));
            write_surface_file(&output, &Surface::Cone(r.metric))?;
        }
        Cmd::Check { what } => match what {
            CheckCmd::GaussBonnet { input } => {
                let m = match read_surface_file(&input)? {
                    Surface::Cone(m) => m,
                    Surface::Decorated(d) => decorated_to_cone(&d, Curvature::Hyperbolic)?,
                };
                let r = m.gauss_bonnet_residual()?;
                println!("gauss-bonnet residual: {r:e}");
                return Ok(r.abs() < 1e-9);
            }
            CheckCmd::Tstar { input } => {
                let d = as_decorated(read_surface_file(&input)?)?;
                let rep = tstar_membership(&d)?;
                println!("max circumparameter: {}", rep.max_rho_hat);
                println!("member: {}", rep.member);
                return Ok(rep.member);
            }
            CheckCmd::Equivalent { a, b } => {
                let to_cone = |s: Surface| match s {
                    Surface::Cone(m) => Ok(m),
                    Surface::Decorated(d) => decorated_to_cone(&d, Curvature::Euclidean),
                };
                let ma = to_cone(read_surface_file(&a)?)?;
                let mb = to_cone(read_surface_file(&b)?)?;
                let eq = discretely_conformal_test(&ma, &mb)?;
                println!("equivalent: {eq}");
                return Ok(eq);
            }
        },
        Cmd::Hull {
            depth,
            chart,
            ray_cap,
            input,
            output,
        } => {
            let d = as_decorated(read_surface_file(&input)?)?;
            let r = epstein_penner_faces(&d, depth)?;
            println!("orbit points: {}", r.orbit_size);
            println!("validated faces: {}", r.faces.len());
            println!("unvalidated faces: {}", r.unvalidated.len());
            println!("quotient faces: {}", r.quotient.len());
            println!(
                "matches flip decomposition: {}",
                matches_decomposition(&r.quotient, &d)?
            );
            let chart = match chart {
                ChartArg::Minkowski => Chart::Minkowski,
                ChartArg::Cylinder => Chart::Cylinder,
            };
            let text = export_mesh(&lifted_polygons(&r), chart, ray_cap);
            std::fs::write(&output, text).map_err(|e| Error::Domain(format!("{}: {e}", output.display())))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
