mod config;
mod report;
mod value;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use origami_ring::backend::{AngleSpec, BackendError, BackendRegistry};
use origami_ring::construction::{
    closure_to_depth, elementary_monomials, projection_set, representatives, ConstructionConfig,
    ConstructionError, GenerationSet, DEFAULT_MAX_POINTS,
};
use origami_ring::density::{approximate, DensityError};
use origami_ring::export::{point_rows, render_svg, write_csv, Viewport};
use origami_ring::geometry::{intersect, AngleSet, GeometryError};
use origami_ring::ring::{
    check_ring, same_lattice, verify_certificate, Certificate, RingContext, RingError, RingVerdict,
    SolverRegistry, DEFAULT_DEGREE_BOUND,
};
use origami_ring::scalar::interval::parse_decimal;
use origami_ring::scalar::{BackendKind, ExactScalar, ScalarError, MIN_PRECISION};

use config::{Header, RunConfig};
use report::{to_value, Render};

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_CAP: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "origami-ring", version, about = "Exact line-intersection closures and their ring structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SetArgs {
    /// Comma separated angles: 0, pi*p/q, deg:r or param:k
    #[arg(long, value_delimiter = ',', required = true)]
    angles: Vec<AngleSpec>,
    /// Scalar backend: auto, cyclotomic or param
    #[arg(long, default_value = "auto")]
    backend: String,
    /// Interval precision in bits for printed enclosures
    #[arg(long, default_value_t = 64)]
    precision: u32,
    /// Argument of t = e^{i theta} (radians) when printing param values
    #[arg(long, default_value = "1")]
    theta: String,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output file; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct PlotArgs {
    /// Circle radius in plane units
    #[arg(long, default_value_t = 0.02)]
    radius: f64,
    /// Visible region x_min,y_min,x_max,y_max; fitted to the points if omitted
    #[arg(long)]
    viewport: Option<Viewport>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build generations S_0..S_depth and export their points
    Construct {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        plot: PlotArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// List the elementary monomials I(a,b)(0,1)
    Elementary {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Real projections of elementary monomials and the coefficient basis
    Projections {
        #[command(flatten)]
        set: SetArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Decide or certify closure under multiplication
    CheckRing {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        degree_bound: usize,
        /// Integer solver: hermite or enumerate
        #[arg(long, default_value = "hermite")]
        solver: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-check the certificates in a check-ring output
    Verify {
        /// JSON file written by check-ring
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        precision: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare the lattices Z + xZ and Z + yZ
    LatticeEq {
        /// Value expression, e.g. "1/2 + e(1/3)" or "2*i"
        #[arg(long, required_unless_present = "x_angles", conflicts_with = "x_angles")]
        x: Option<String>,
        #[arg(long, required_unless_present = "y_angles", conflicts_with = "y_angles")]
        y: Option<String>,
        /// Three angles with 0; x is the intersection of the other two through 0 and 1
        #[arg(long, value_delimiter = ',')]
        x_angles: Option<Vec<AngleSpec>>,
        #[arg(long, value_delimiter = ',')]
        y_angles: Option<Vec<AngleSpec>>,
        #[arg(long, default_value_t = 64)]
        precision: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Approximate a target by a constructible point
    Density {
        #[command(flatten)]
        set: SetArgs,
        /// Target as re,im (decimals or fractions)
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// SVG scatter plot of a generation
    Plot {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: usize,
        #[command(flatten)]
        plot: PlotArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<BackendError> for Failure {
    fn from(e: BackendError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Scalar(s) => s.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::PrecisionTooLow(_) | ScalarError::BackendMismatch(..) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Geometry(g) => g.into(),
            ConstructionError::TooFewAngles(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::Unsupported(_) | RingError::DegenerateReal(_) => Failure::Usage(e.to_string()),
            RingError::Construction(c) => c.into(),
            RingError::Geometry(g) => g.into(),
            RingError::Scalar(s) => s.into(),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<DensityError> for Failure {
    fn from(e: DensityError) -> Self {
        match e {
            DensityError::Unsupported(_) | DensityError::NonPositiveEpsilon => Failure::Usage(e.to_string()),
            DensityError::Ring(r) => r.into(),
            DensityError::Scalar(s) => s.into(),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

/// A validated angle set with the config fields it contributes.
struct Prepared {
    set: AngleSet,
    cfg: RunConfig,
    theta: Option<BigRational>,
}

fn check_precision(p: u32) -> Result<(), Failure> {
    if p < MIN_PRECISION {
        return Err(Failure::Usage(format!("precision must be at least {MIN_PRECISION} bits")));
    }
    Ok(())
}

fn prepare(command: &str, args: &SetArgs, out: &OutArgs) -> Result<Prepared, Failure> {
    check_precision(args.precision)?;
    let registry = BackendRegistry::default();
    let backend = if args.backend == "auto" {
        registry.select(&args.angles)?
    } else {
        registry.get(&args.backend)?
    };
    let set = registry.build(backend.name(), &args.angles)?;
    let mut specs = args.angles.clone();
    specs.sort();
    let theta = if backend.kind() == BackendKind::Param {
        Some(parse_decimal(&args.theta).ok_or_else(|| Failure::Usage(format!("invalid theta {:?}", args.theta)))?)
    } else {
        None
    };
    let cfg = RunConfig {
        command: command.into(),
        angles: specs,
        backend: Some(backend.name().into()),
        precision: args.precision,
        theta: theta.as_ref().map(|_| args.theta.clone()),
        out: out.out.clone(),
        ..RunConfig::default()
    };
    Ok(Prepared { set, cfg, theta })
}

fn emit(out: &OutArgs, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_document(cfg: &RunConfig, result: Value) -> String {
    let mut doc = to_value(&cfg.header());
    doc["result"] = result;
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn three_angle_generator(set: &AngleSet) -> Result<Option<ExactScalar>, Failure> {
    if set.len() != 3 || !set.contains_one() {
        return Ok(None);
    }
    Ok(representatives(set)?.into_iter().next().map(|r| r.value))
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    set_args: &SetArgs,
    depth: usize,
    max_points: usize,
    format: Format,
    plot: &PlotArgs,
    out: &OutArgs,
    command: &str,
) -> Result<u8, Failure> {
    let Prepared { set, mut cfg, theta } = prepare(command, set_args, out)?;
    if max_points < 2 {
        return Err(Failure::Usage("max-points must be at least 2".into()));
    }
    cfg.depth = Some(depth);
    cfg.max_points = Some(max_points);
    if format == Format::Svg {
        cfg.radius = Some(plot.radius);
        cfg.viewport = plot
            .viewport
            .map(|v| format!("{},{},{},{}", v.x_min, v.y_min, v.x_max, v.y_max));
    }
    if command == "construct" {
        cfg.format = Some(format!("{format:?}").to_lowercase());
    }

    let config = ConstructionConfig::new(set.clone())
        .with_depth(depth)
        .with_max_points(max_points);
    let (gens, cap): (Vec<GenerationSet>, Option<(usize, usize)>) = match closure_to_depth(&config) {
        Ok(g) => (g, None),
        Err(ConstructionError::CapExceeded {
            depth,
            cap,
            partial,
            mut completed,
        }) => {
            completed.push(*partial);
            (completed, Some((depth, cap)))
        }
        Err(e) => return Err(e.into()),
    };
    let lattice_x = three_angle_generator(&set)?;
    let rows = point_rows(&gens, cfg.precision, theta.as_ref(), lattice_x.as_ref())?;

    let text = match format {
        Format::Json => {
            let render = Render {
                precision: cfg.precision,
                theta: theta.as_ref(),
            };
            let mut result = json!({
                "generations": gens.iter().map(|g| json!({"depth": g.depth(), "size": g.len()})).collect::<Vec<_>>(),
                "points": to_value(&rows),
            });
            if let Some(x) = &lattice_x {
                result["lattice_generator"] = render.scalar(x)?;
            }
            if let Some((d, c)) = cap {
                result["cap_exceeded"] = json!({"depth": d, "cap": c});
            }
            json_document(&cfg, result)
        }
        Format::Csv => {
            let mut buf = format!("# {}\n", cfg.header_line()).into_bytes();
            write_csv(&rows, &mut buf).map_err(|e| Failure::Runtime(e.to_string()))?;
            String::from_utf8(buf).expect("utf-8 csv")
        }
        Format::Svg => {
            let vp = plot.viewport.unwrap_or_else(|| Viewport::fit(&rows));
            format!(
                "<!-- {} -->\n{}",
                cfg.header_line().replace("--", "- -"),
                render_svg(&rows, vp, plot.radius)
            )
        }
    };
    emit(out, &text)?;
    if let Some((d, c)) = cap {
        eprintln!("generation {d} exceeds the cap of {c} points; output holds the partial set");
        return Ok(EXIT_CAP);
    }
    Ok(0)
}

fn cmd_elementary(set_args: &SetArgs, out: &OutArgs) -> Result<u8, Failure> {
    let Prepared { set, cfg, theta } = prepare("elementary", set_args, out)?;
    let render = Render {
        precision: cfg.precision,
        theta: theta.as_ref(),
    };
    let list = |ms: Vec<origami_ring::construction::ElementaryMonomial>| -> Result<Vec<Value>, Failure> {
        ms.iter()
            .map(|m| {
                Ok(json!({
                    "monomial": Render::pair(&set, (m.alpha, m.beta)),
                    "value": render.scalar(&m.value)?,
                }))
            })
            .collect()
    };
    let result = json!({
        "monomials": list(elementary_monomials(&set)?)?,
        "representatives": list(representatives(&set)?)?,
    });
    emit(out, &json_document(&cfg, result))?;
    Ok(0)
}

fn cmd_projections(set_args: &SetArgs, out: &OutArgs) -> Result<u8, Failure> {
    let Prepared { set, cfg, theta } = prepare("projections", set_args, out)?;
    let render = Render {
        precision: cfg.precision,
        theta: theta.as_ref(),
    };
    let result = render.projection_set(&set, &projection_set(&set)?)?;
    emit(out, &json_document(&cfg, result))?;
    Ok(0)
}

fn cmd_check_ring(set_args: &SetArgs, degree_bound: usize, solver: &str, out: &OutArgs) -> Result<u8, Failure> {
    let Prepared { set, mut cfg, theta } = prepare("check-ring", set_args, out)?;
    cfg.degree_bound = Some(degree_bound);
    cfg.solver = Some(solver.into());
    let registry = SolverRegistry::default();
    let solver = registry.get(solver).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown solver {solver:?}; available: {}",
            registry.names().join(", ")
        ))
    })?;
    let ctx = RingContext::new(&set)?;
    let verdict = check_ring(&ctx, degree_bound, solver.as_ref())?;
    let render = Render {
        precision: cfg.precision,
        theta: theta.as_ref(),
    };
    emit(out, &json_document(&cfg, render.verdict(&ctx, &verdict)?))?;
    Ok(match verdict {
        RingVerdict::RingLattice(_) | RingVerdict::RingModule(_) => 0,
        RingVerdict::NotRing(_) => EXIT_NEGATIVE,
        RingVerdict::Unknown { .. } => EXIT_UNKNOWN,
    })
}

fn cmd_verify(input: &PathBuf, precision: u32, out: &OutArgs) -> Result<u8, Failure> {
    check_precision(precision)?;
    let text = fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let header: Header =
        serde_json::from_value(doc.clone()).map_err(|e| Failure::Usage(format!("missing run header: {e}")))?;
    let certs: Vec<Certificate> = serde_json::from_value(doc["result"]["certificates"].clone())
        .map_err(|e| Failure::Usage(format!("malformed certificates: {e}")))?;
    let source = header.config;
    let registry = BackendRegistry::default();
    let set = registry.build(source.backend.as_deref().unwrap_or("auto"), &source.angles)?;
    let ctx = RingContext::new(&set)?;

    // the listings in the file must describe the same generators
    let keys = |v: &Value| -> Vec<String> {
        v.as_array()
            .map(|a| a.iter().filter_map(|g| g["value"]["key"].as_str().map(String::from)).collect())
            .unwrap_or_default()
    };
    let ours: Vec<String> = ctx.generators.iter().map(|g| g.canonical_key().to_string()).collect();
    let context_matches = keys(&doc["result"]["generators"]) == ours
        && keys(&doc["result"]["projections"])
            == ctx
                .projection_basis()
                .iter()
                .map(|p| p.canonical_key().to_string())
                .collect::<Vec<_>>();

    let mut results = Vec::new();
    let mut all_valid = context_matches;
    for c in &certs {
        let valid = match verify_certificate(c, &ctx) {
            Ok(v) => v,
            Err(RingError::UnknownGenerator(_) | RingError::UnknownProjection(_)) => false,
            Err(e) => return Err(e.into()),
        };
        all_valid &= valid;
        results.push(json!({"product": c.product, "valid": valid}));
    }
    let cfg = RunConfig {
        command: "verify".into(),
        precision,
        input: Some(input.clone()),
        out: out.out.clone(),
        ..RunConfig::default()
    };
    let result = json!({
        "source": to_value(&source),
        "context_matches": context_matches,
        "certificates": results,
        "all_valid": all_valid,
    });
    emit(out, &json_document(&cfg, result))?;
    Ok(if all_valid { 0 } else { EXIT_NEGATIVE })
}

fn lattice_value(expr: &Option<String>, angles: &Option<Vec<AngleSpec>>) -> Result<(ExactScalar, String), Failure> {
    match (expr, angles) {
        (Some(e), _) => Ok((value::parse_value(e).map_err(Failure::Usage)?, e.clone())),
        (None, Some(specs)) => {
            let set = BackendRegistry::default().build("cyclotomic", specs)?;
            if set.len() != 3 || !set.contains_one() {
                return Err(Failure::Usage("lattice angles must be three angles including 0".into()));
            }
            let x = intersect(set.get(1), set.get(2), &set.constant(0), &set.constant(1))?;
            let label = specs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            Ok((x, format!("angles:{label}")))
        }
        (None, None) => Err(Failure::Usage("a value or an angle list is required".into())),
    }
}

fn cmd_lattice_eq(
    x: &Option<String>,
    y: &Option<String>,
    x_angles: &Option<Vec<AngleSpec>>,
    y_angles: &Option<Vec<AngleSpec>>,
    precision: u32,
    out: &OutArgs,
) -> Result<u8, Failure> {
    check_precision(precision)?;
    let (xv, xs) = lattice_value(x, x_angles)?;
    let (yv, ys) = lattice_value(y, y_angles)?;
    let equal = same_lattice(&xv, &yv)?;
    let cfg = RunConfig {
        command: "lattice-eq".into(),
        precision,
        x: Some(xs),
        y: Some(ys),
        out: out.out.clone(),
        ..RunConfig::default()
    };
    let render = Render { precision, theta: None };
    let result = json!({
        "x": render.scalar(&xv)?,
        "y": render.scalar(&yv)?,
        "same_lattice": equal,
    });
    emit(out, &json_document(&cfg, result))?;
    Ok(if equal { 0 } else { EXIT_NEGATIVE })
}

fn parse_rational(s: &str, what: &str) -> Result<BigRational, Failure> {
    parse_decimal(s.trim()).ok_or_else(|| Failure::Usage(format!("invalid {what} {s:?}")))
}

fn cmd_density(set_args: &SetArgs, target: &str, epsilon: &str, out: &OutArgs) -> Result<u8, Failure> {
    let Prepared { set, mut cfg, theta } = prepare("density", set_args, out)?;
    let (re, im) = target
        .split_once(',')
        .ok_or_else(|| Failure::Usage("target must be re,im".into()))?;
    let target = (parse_rational(re, "target")?, parse_rational(im, "target")?);
    let eps = parse_rational(epsilon, "epsilon")?;
    cfg.target = Some([target.0.to_string(), target.1.to_string()]);
    cfg.epsilon = Some(eps.to_string());
    let w = approximate(&set, target, eps)?;
    let render = Render {
        precision: cfg.precision,
        theta: theta.as_ref(),
    };
    emit(out, &json_document(&cfg, render.witness(&set, &w)?))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Construct {
            set,
            depth,
            max_points,
            format,
            plot,
            out,
        } => cmd_construct(set, *depth, *max_points, *format, plot, out, "construct"),
        Command::Plot {
            set,
            depth,
            max_points,
            plot,
            out,
        } => cmd_construct(set, *depth, *max_points, Format::Svg, plot, out, "plot"),
        Command::Elementary { set, out } => cmd_elementary(set, out),
        Command::Projections { set, out } => cmd_projections(set, out),
        Command::CheckRing {
            set,
            degree_bound,
            solver,
            out,
        } => cmd_check_ring(set, *degree_bound, solver, out),
        Command::Verify { input, precision, out } => cmd_verify(input, *precision, out),
        Command::LatticeEq {
            x,
            y,
            x_angles,
            y_angles,
            precision,
            out,
        } => cmd_lattice_eq(x, y, x_angles, y_angles, *precision, out),
        Command::Density {
            set,
            target,
            epsilon,
            out,
        } => cmd_density(set, target, epsilon, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
