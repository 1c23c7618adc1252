mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polyforge::arith::{parse_scalar, ArithError, Hyperplane, Scalar, Vector};
use polyforge::decomp::{
    certify_with, check_main_theorem_instance, extract_summands, is_decomposable, verify_certificate, Certificate,
    DecompError, DEFAULT_BUDGET,
};
use polyforge::equiv::{combinatorially_equivalent, verify_lemma1, EquivError};
use polyforge::families::{build_family, minkowski_sum, ConstructionParams, FamilyError, FamilyId};
use polyforge::hull::{convex_hull, cross_section, face_lattice, HullError, VPolytope};
use polyforge::io::{emit_hpoly, emit_vpoly, parse_vpoly, FormatError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use render::{render_svg, Projection, RenderError, RenderSpec};

#[derive(Parser)]
#[command(name = "polyforge", version, about = "Exact polytope hulls, equivalence and Minkowski decomposability")]
struct Cli {
    /// Search cap for chain and gluing searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Seed for commands that draw random choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a family member as a .vpoly file.
    Build {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long)]
        dim: usize,
        /// Perturbation for primed families, e.g. 1/10.
        #[arg(long, value_parser = parse_rational)]
        eps: Option<Scalar>,
        /// Stacking height for the stacked families.
        #[arg(long, value_parser = parse_rational)]
        height: Option<Scalar>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Facet inequalities as a .hpoly file.
    Hull {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Face lattice, one face per line.
    Lattice {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Combinatorial equivalence with the vertex bijection.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Write the isomorphism as JSON.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Decomposability verdict from the summand space.
    Decide { input: PathBuf },
    /// JSON certificate: summands if decomposable, a proof of indecomposability otherwise.
    Certify {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a certificate against a polytope. Exits 1 if it is invalid.
    Verify { input: PathBuf, certificate: PathBuf },
    /// Minkowski sum of two polytopes.
    Sum {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-section by a hyperplane "a1,...,ad=c".
    Slice {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        hyperplane: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that P + [0,a] and P + [0,k a] correspond vertex by vertex and facet by facet.
    Lemma1 {
        input: PathBuf,
        /// Segment direction "a1,...,ad"; random from --seed if omitted.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        #[arg(long, value_parser = parse_rational, default_value = "2")]
        k: Scalar,
    },
    /// Run the segment-summand argument step by step on one polytope.
    Maintheorem { input: PathBuf },
    /// Render the edge graph as SVG.
    Figure {
        input: PathBuf,
        /// coords(i,j,k) or schlegel(facet index)
        #[arg(long, default_value = "coords(1,2,3)")]
        projection: Projection,
        #[arg(long, default_value = "#333")]
        stroke: String,
        #[arg(long)]
        no_labels: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<HullError> for Failure {
    fn from(e: HullError) -> Self {
        match e {
            HullError::InconsistentIncidence(_) | HullError::LabelMismatch => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Hull(h) => h.into(),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<EquivError> for Failure {
    fn from(e: EquivError) -> Self {
        match e {
            EquivError::Hull(h) => h.into(),
            EquivError::Family(f) => f.into(),
            EquivError::Lemma1(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<DecompError> for Failure {
    fn from(e: DecompError) -> Self {
        match e {
            DecompError::Hull(h) => h.into(),
            DecompError::Family(f) => f.into(),
            DecompError::Equiv(q) => q.into(),
            DecompError::Disconnected | DecompError::DegenerateEdge(..) | DecompError::ExtractionFailed(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ArithError> for Failure {
    fn from(e: ArithError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Decomp(d) => d.into(),
            RenderError::Projection(_) => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    s.parse()
}

fn parse_rational(s: &str) -> Result<Scalar, String> {
    parse_scalar(s).map_err(|e| e.to_string())
}

fn parse_vector(s: &str, d: usize) -> Result<Vector, Failure> {
    let coords = s.split(',').map(|t| parse_scalar(t.trim())).collect::<Result<Vec<_>, _>>()?;
    if coords.len() != d {
        return Err(Failure::Usage(format!("expected {d} entries in {s:?}, found {}", coords.len())));
    }
    Ok(Vector(coords))
}

fn parse_hyperplane(s: &str, d: usize) -> Result<Hyperplane, Failure> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("hyperplane {s:?} must look like \"a1,...,ad=c\"")))?;
    Ok(Hyperplane::new(parse_vector(lhs, d)?, parse_scalar(rhs.trim())?)?)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<VPolytope, Failure> {
    parse_vpoly(&read(path)?).map_err(|e: FormatError| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path` through a temporary file, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));
    let Some(path) = path else {
        std::io::stdout().write_all(text.as_bytes()).map_err(io)?;
        return Ok(());
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Build {
            family,
            dim,
            eps,
            height,
            output,
        } => {
            let mut params = ConstructionParams::new(dim);
            if let Some(eps) = eps {
                params = params.with_eps(eps);
            }
            if let Some(h) = height {
                params.stack_height = h;
            }
            let p = build_family(family, &params)?;
            emit(output.as_deref(), &emit_vpoly(&p))?;
        }
        Command::Hull { input, output } => {
            let hull = convex_hull(&load(&input)?)?;
            if !hull.redundant.is_empty() {
                eprintln!("note: not vertices: {}", hull.redundant.join(" "));
            }
            emit(output.as_deref(), &emit_hpoly(&hull.hpoly))?;
        }
        Command::Lattice { input, output } => {
            let lat = face_lattice(&convex_hull(&load(&input)?)?.incidence)?;
            let f: Vec<String> = lat.f_vector().iter().map(|n| n.to_string()).collect();
            let mut text = format!("f-vector {}\n", f.join(" "));
            for face in &lat.faces {
                let labels: Vec<String> = lat.face_labels(face).into_iter().collect();
                let line = format!("{} {}", face.rank, labels.join(" "));
                text.push_str(line.trim_end());
                text.push('\n');
            }
            emit(output.as_deref(), &text)?;
        }
        Command::Equiv { first, second, map } => {
            let (a, b) = (load(&first)?, load(&second)?);
            match combinatorially_equivalent(&a, &b)? {
                Some(iso) => {
                    if let Some(path) = map {
                        emit(Some(&path), &json(&iso)?)?;
                    }
                    let mut text = String::from("equivalent\n");
                    for (from, to) in iso.moved() {
                        text.push_str(&format!("{from} -> {to}\n"));
                    }
                    emit(None, &text)?;
                }
                None => emit(None, "not equivalent\n")?,
            }
        }
        Command::Decide { input } => {
            let p = load(&input)?;
            let (dec, space) = is_decomposable(&p)?;
            let text = if dec {
                format!(
                    "decomposable: summand space has dimension {} > d+1 = {}\n",
                    space.dimension(),
                    p.dim + 1
                )
            } else {
                format!("indecomposable: summand space has dimension {} = d+1\n", space.dimension())
            };
            emit(None, &text)?;
        }
        Command::Certify { input, output } => {
            let p = load(&input)?;
            let cert = if is_decomposable(&p)?.0 {
                let (q, r) = extract_summands(&p)?;
                Certificate::SummandPair { q, r }
            } else {
                certify_with(&p, cli.budget)?
            };
            emit(output.as_deref(), &json(&cert)?)?;
        }
        Command::Verify { input, certificate } => {
            let p = load(&input)?;
            let text = read(&certificate)?;
            let cert: Certificate = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", certificate.display())))?;
            match verify_certificate(&cert, &p) {
                Ok(()) => emit(None, &format!("valid: {} certificate, {:?}\n", cert.kind(), cert.claim()))?,
                Err(e @ (DecompError::Hull(_) | DecompError::Arith(_))) => return Err(e.into()),
                Err(e) => {
                    emit(None, &format!("invalid: {e}\n"))?;
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Sum { first, second, output } => {
            let s = minkowski_sum(&load(&first)?, &load(&second)?)?;
            emit(output.as_deref(), &emit_vpoly(&s))?;
        }
        Command::Slice {
            input,
            hyperplane,
            output,
        } => {
            let p = load(&input)?;
            let h = parse_hyperplane(&hyperplane, p.dim)?;
            emit(output.as_deref(), &emit_vpoly(&cross_section(&p, &h)?))?;
        }
        Command::Lemma1 { input, direction, k } => {
            let p = load(&input)?;
            let a = match direction {
                Some(s) => parse_vector(&s, p.dim)?,
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    loop {
                        let v = Vector::from_ints(&(0..p.dim).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
                        if !v.is_zero() {
                            break v;
                        }
                    }
                }
            };
            let r = verify_lemma1(&p, &a, &k)?;
            let dir: Vec<String> = a.0.iter().map(|c| c.to_string()).collect();
            emit(
                None,
                &format!(
                    "direction {}\nk {k}\nvertices {}\nbase facets {}\ntop facets {}\nside facets {}\ncorrespondence verified\n",
                    dir.join(","),
                    r.vertices,
                    r.base_facets,
                    r.top_facets,
                    r.side_facets
                ),
            )?;
        }
        Command::Maintheorem { input } => {
            let report = check_main_theorem_instance(&load(&input)?, cli.budget)?;
            let verdict = if report.passed() {
                "all steps passed"
            } else if report.precondition_failed() {
                "precondition failed"
            } else {
                "argument does not apply"
            };
            emit(None, &format!("{report}{verdict}\n"))?;
        }
        Command::Figure {
            input,
            projection,
            stroke,
            no_labels,
            output,
        } => {
            let mut spec = RenderSpec::new(projection);
            spec.stroke = stroke;
            spec.labels = !no_labels;
            emit(output.as_deref(), &render_svg(&load(&input)?, &spec)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Internal(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
