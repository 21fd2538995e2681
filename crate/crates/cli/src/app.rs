use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use padiq::digit_squeeze::{iterated_squeeze, iterated_squeeze_inverse, phi_forward, phi_image_formulas, phi_inverse};
use padiq::ellipsoid::{ellipsoid_containment, ellipsoid_width, farkas_certificate, verify_farkas, Ellipsoid, FarkasCertificate};
use padiq::equivariant::{
    embed_polar, embed_polar_inverse, equivariant_embed, equivariant_inverse, gromov_width, semitoric_embed,
    semitoric_inverse, semitoric_polar, semitoric_polar_inverse, EmbedTrace, WidthMode,
};
use padiq::linalg::{matrix_to_json, PadicMatrix};
use padiq::polar::{from_polar, to_polar, PolarCoords};
use padiq::render::{render_ascii, render_svg};
use padiq::shape::{parse_shape, Capacity, Radius};
use padiq::squeeze::{is_width_preserving, matrix_verdict, Verdict};
use padiq::{PadicContext, PadicNumber};

use crate::fixtures;

#[derive(Parser, Debug)]
#[command(name = "padiq", version, about = "Exact p-adic linear and digit-shuffling symplectic geometry")]
pub struct Cli {
    /// The prime p.
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    /// Relative precision in p-adic digits.
    #[arg(long, global = true, default_value_t = 24)]
    pub precision: u32,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Decide whether a matrix squeezes, with a witness pair when it does.
    ClassifyMatrix {
        /// JSON rows, or a path to a JSON file.
        #[arg(long)]
        matrix: String,
        /// Residue depth for the witness search.
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Linear symplectic width of `{ |A v| <= 1 }`.
    WidthEllipsoid {
        #[arg(long)]
        matrix: String,
    },
    /// Integral solution of `A x = b` or an obstruction `y`.
    Farkas {
        #[arg(long)]
        matrix: String,
        /// JSON array or comma-separated literals.
        #[arg(long)]
        rhs: String,
    },
    /// Whether the inner ellipsoid lies in the outer one.
    Contain {
        #[arg(long)]
        inner: String,
        #[arg(long)]
        inner_center: Option<String>,
        #[arg(long)]
        outer: String,
        #[arg(long)]
        outer_center: Option<String>,
    },
    /// The digit-interleaving map on a point, or its image formulas on a ball.
    Squeeze {
        /// Comma-separated coordinates.
        #[arg(long, conflicts_with = "ball")]
        point: Option<String>,
        /// Radius of a ball whose image is described.
        #[arg(long)]
        ball: Option<String>,
        /// Dimension 2n of the ball.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long)]
        inverse: bool,
        /// Apply the map to successive pairs.
        #[arg(long)]
        iterated: bool,
    },
    /// Polar coordinates of a point `x,y`.
    Polar {
        #[arg(long)]
        point: String,
    },
    /// Cartesian point from `z;k1;k2;a,b;t`.
    Unpolar {
        #[arg(long)]
        coords: String,
    },
    /// The equivariant embedding into the cylinder of radius 1.
    EquivariantEmbed {
        /// Cartesian coordinates, or with --polar `z;k1;k2;a,b;t|z;k1;k2;a,b;t`
        /// (`z;k1;k2;a,b;t|x` with --semitoric).
        #[arg(long)]
        coords: String,
        #[arg(long)]
        polar: bool,
        #[arg(long)]
        inverse: bool,
        /// Use x_{s+1} as second carrier.
        #[arg(long)]
        semitoric: Option<usize>,
        /// Print the digit trace.
        #[arg(long)]
        trace: bool,
    },
    /// Gromov width of a shape.
    Width {
        /// ball:R[:dim], cyl:R[:dim], T:n, full:dim or diag:a1,...,an.
        #[arg(long)]
        shape: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Equivariant)]
        mode: ModeArg,
    },
    /// Ball diagram of a ball or cylinder.
    Render {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Svg)]
        format: Format,
    },
    /// Run the bundled golden vectors.
    VerifyFixtures {
        /// Alternative fixture file.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Equivariant,
    Linear,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Svg,
    Ascii,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(padiq::Error),
    Failed(String),
}

impl From<padiq::Error> for CliError {
    fn from(e: padiq::Error) -> Self {
        match e {
            padiq::Error::Parse(..) | padiq::Error::Invalid(_) => CliError::Usage(e.to_string()),
            e => CliError::Math(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) | CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {}", m),
            CliError::Math(e) => format!("error: {}", e),
            CliError::Failed(m) => m.clone(),
        }
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Output { json, text: text.into() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one invocation; returns the exit code and the text for stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 { (0, rendered, String::new()) } else { (2, String::new(), rendered) };
        }
    };
    let as_json = cli.json;
    match execute(&cli) {
        Ok(out) => {
            let s = if as_json { serde_json::to_string_pretty(&out.json).unwrap() + "\n" } else { out.text };
            let code = if out.json.get("all_passed") == Some(&Value::Bool(false)) { 1 } else { 0 };
            (code, s, String::new())
        }
        Err(e) => (e.exit_code(), String::new(), e.message() + "\n"),
    }
}

fn context(cli: &Cli) -> CliResult<PadicContext> {
    let p = cli.prime.ok_or_else(|| CliError::Usage("--prime is required".into()))?;
    PadicContext::new(p, cli.precision).map_err(|e| CliError::Usage(e.to_string()))
}

fn read_matrix(ctx: PadicContext, arg: &str) -> CliResult<PadicMatrix> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {}: {}", arg, e)))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad matrix JSON: {}", e)))?;
    Ok(PadicMatrix::from_json(ctx, &v)?)
}

fn read_vector(ctx: PadicContext, arg: &str) -> CliResult<Vec<PadicNumber>> {
    let arg = arg.trim();
    if arg.starts_with('[') {
        let v: Value = serde_json::from_str(arg).map_err(|e| CliError::Usage(format!("bad vector JSON: {}", e)))?;
        let items = v.as_array().ok_or_else(|| CliError::Usage("vector must be a JSON array".into()))?;
        return Ok(items.iter().map(|e| padiq::linalg::json_entry(ctx, e)).collect::<padiq::Result<_>>()?);
    }
    Ok(arg.split(',').map(|s| ctx.parse(s)).collect::<padiq::Result<_>>()?)
}

fn lits(v: &[PadicNumber]) -> Vec<String> {
    v.iter().map(|x| x.to_literal()).collect()
}

fn rational_string(x: &PadicNumber) -> Option<String> {
    x.exact_value().map(|q| if q.is_integer() { q.numer().to_string() } else { q.to_string() })
}

fn matrix_text(m: &PadicMatrix) -> String {
    m.to_rows().iter().map(|r| lits(r).join(" ")).collect::<Vec<_>>().join("\n")
}

fn capacity_json(c: &Capacity, p: u32) -> Value {
    let exponent = match c {
        Capacity::Power(e) => json!(e),
        _ => Value::Null,
    };
    json!({ "width": c.to_value(p), "exponent": exponent })
}

fn execute(cli: &Cli) -> CliResult<Output> {
    match &cli.cmd {
        Cmd::VerifyFixtures { file } => fixtures::verify(file.as_deref()),
        Cmd::ClassifyMatrix { matrix, depth } => {
            let ctx = context(cli)?;
            let a = read_matrix(ctx, matrix)?;
            let verdict = matrix_verdict(&a, *depth)?;
            let mut j = verdict.to_json();
            let mut text = format!("class: {}", j["class"].as_str().unwrap());
            if let Verdict::BothNonSqueezing(c) = &verdict {
                let wp = is_width_preserving(&a)?;
                j["c_rational"] = json!(rational_string(c));
                j["width_preserving"] = json!(wp);
                text += &format!("\nc: {}\nwidth preserving: {}", c.to_literal(), wp);
            }
            if let Verdict::Squeezing(w) | Verdict::InverseSqueezing(w) = &verdict {
                text += &format!(
                    "\nu: {}\nv: {}\ngap: {}",
                    lits(&w.u).join(","),
                    lits(&w.v).join(","),
                    w.gap.map_or("inf".into(), |g| g.to_string())
                );
            }
            Ok(Output::new(j, text + "\n"))
        }
        Cmd::WidthEllipsoid { matrix } => {
            let ctx = context(cli)?;
            let e = Ellipsoid::centered(read_matrix(ctx, matrix)?)?;
            let w = ellipsoid_width(&e)?;
            Ok(Output::new(capacity_json(&w, ctx.p()), format!("width: {}\n", w.to_value(ctx.p()))))
        }
        Cmd::Farkas { matrix, rhs } => {
            let ctx = context(cli)?;
            let a = read_matrix(ctx, matrix)?;
            let b = read_vector(ctx, rhs)?;
            let cert = farkas_certificate(&a, &b)?;
            let verified = verify_farkas(&a, &b, &cert)?;
            let (kind, v) = match &cert {
                FarkasCertificate::Solution(x) => ("solution", x),
                FarkasCertificate::Obstruction(y) => ("obstruction", y),
            };
            let key = if kind == "solution" { "x" } else { "y" };
            Ok(Output::new(
                json!({ "result": kind, key: lits(v), "verified": verified }),
                format!("{}: {}\nverified: {}\n", kind, lits(v).join(","), verified),
            ))
        }
        Cmd::Contain { inner, inner_center, outer, outer_center } => {
            let ctx = context(cli)?;
            let m1 = read_matrix(ctx, inner)?;
            let m2 = read_matrix(ctx, outer)?;
            let c1 = match inner_center {
                Some(c) => read_vector(ctx, c)?,
                None => vec![ctx.zero(); m1.rows()],
            };
            let c2 = match outer_center {
                Some(c) => read_vector(ctx, c)?,
                None => vec![ctx.zero(); m2.rows()],
            };
            let res = ellipsoid_containment(&Ellipsoid::new(m1, c1)?, &Ellipsoid::new(m2, c2)?)?;
            Ok(Output::new(
                json!({
                    "contained": res.contained,
                    "center_inside": res.center_inside,
                    "transform": matrix_to_json(&res.transform),
                }),
                format!(
                    "contained: {}\ncenter inside: {}\ntransform:\n{}\n",
                    res.contained,
                    res.center_inside,
                    matrix_text(&res.transform)
                ),
            ))
        }
        Cmd::Squeeze { point, ball, dim, inverse, iterated } => {
            let ctx = context(cli)?;
            if let Some(r) = ball {
                if *dim < 4 || dim % 2 != 0 {
                    return Err(CliError::Usage("--dim must be even and at least 4".into()));
                }
                let r = Radius::parse(r, ctx)?;
                let factors = phi_image_formulas(r, dim / 2, *inverse);
                let text = factors
                    .iter()
                    .map(|f| format!("Ball^{}({}^{})", f.dim, ctx.p(), f.radius.0))
                    .collect::<Vec<_>>()
                    .join(" x ");
                let j: Vec<Value> = factors.iter().map(|f| json!({ "dim": f.dim, "radius_exponent": f.radius.0 })).collect();
                return Ok(Output::new(json!({ "image": j }), text + "\n"));
            }
            let point = point.as_ref().ok_or_else(|| CliError::Usage("give --point or --ball".into()))?;
            let m = read_vector(ctx, point)?;
            let out = match (*iterated, *inverse) {
                (false, false) => phi_forward(&m)?,
                (false, true) => phi_inverse(&m)?,
                (true, false) => iterated_squeeze(&m)?,
                (true, true) => iterated_squeeze_inverse(&m)?,
            };
            Ok(Output::new(json!({ "point": lits(&out) }), lits(&out).join(",") + "\n"))
        }
        Cmd::Polar { point } => {
            let ctx = context(cli)?;
            let v = read_vector(ctx, point)?;
            if v.len() != 2 {
                return Err(CliError::Usage("--point takes exactly two coordinates".into()));
            }
            let pc = to_polar(&v[0], &v[1])?;
            Ok(Output::new(pc.to_json(), pc.to_text() + "\n"))
        }
        Cmd::Unpolar { coords } => {
            let ctx = context(cli)?;
            let pc = PolarCoords::parse(coords, ctx)?;
            let (x, y) = from_polar(&pc)?;
            Ok(Output::new(json!({ "point": [x.to_literal(), y.to_literal()] }), format!("{},{}\n", x, y)))
        }
        Cmd::EquivariantEmbed { coords, polar, inverse, semitoric, trace } => {
            let ctx = context(cli)?;
            if *polar {
                embed_polar_cmd(ctx, coords, *inverse, *semitoric, *trace)
            } else {
                embed_cartesian_cmd(ctx, coords, *inverse, *semitoric, *trace)
            }
        }
        Cmd::Width { shape, mode } => {
            let ctx = context(cli)?;
            let shape = parse_shape(shape, ctx)?;
            let mode = match mode {
                ModeArg::Equivariant => WidthMode::Equivariant,
                ModeArg::Linear => WidthMode::Linear,
            };
            let rep = gromov_width(&shape, mode)?;
            let mut j = capacity_json(&rep.value, ctx.p());
            j["mode"] = serde_json::to_value(mode).unwrap();
            j["note"] = json!(rep.note);
            let mut text = format!("width: {}\n", rep.value.to_value(ctx.p()));
            if let Some(n) = &rep.note {
                text += &format!("note: {}\n", n);
            }
            Ok(Output::new(j, text))
        }
        Cmd::Render { shape, depth, format } => {
            let ctx = context(cli)?;
            let shape = parse_shape(shape, ctx)?;
            let body = match format {
                Format::Svg => render_svg(&shape, ctx, *depth)?,
                Format::Ascii => render_ascii(&shape, ctx, *depth)?,
            };
            Ok(Output::new(json!({ "format": format!("{:?}", format).to_lowercase(), "document": body }), body))
        }
    }
}

fn trace_parts(t: &EmbedTrace, show: bool, j: &mut Value, text: &mut String) {
    j["branch"] = serde_json::to_value(t.branch).unwrap();
    if show {
        j["trace"] = serde_json::to_value(t).unwrap();
        text.push_str(&t.render());
    }
}

fn embed_polar_cmd(ctx: PadicContext, coords: &str, inverse: bool, semitoric: Option<usize>, show: bool) -> CliResult<Output> {
    let (first, second) =
        coords.split_once('|').ok_or_else(|| CliError::Usage("polar form needs two parts separated by |".into()))?;
    let c1 = PolarCoords::parse(first, ctx)?;
    if semitoric.is_some() {
        let w = ctx.parse(second)?;
        if inverse {
            let (b1, bw) = semitoric_polar_inverse(&c1, &w)?;
            return Ok(Output::new(
                json!({ "coords": [b1.to_json(), { "x": bw.to_literal() }] }),
                format!("{}|{}\n", b1.to_text(), bw.to_literal()),
            ));
        }
        let ((o1, ow), t) = semitoric_polar(&c1, &w)?;
        let mut j = json!({ "coords": [o1.to_json(), { "x": ow.to_literal() }] });
        let mut text = format!("{}|{}\n", o1.to_text(), ow.to_literal());
        trace_parts(&t, show, &mut j, &mut text);
        return Ok(Output::new(j, text));
    }
    let c2 = PolarCoords::parse(second, ctx)?;
    if inverse {
        let (b1, b2) = embed_polar_inverse(&c1, &c2)?;
        return Ok(Output::new(
            json!({ "coords": [b1.to_json(), b2.to_json()] }),
            format!("{}|{}\n", b1.to_text(), b2.to_text()),
        ));
    }
    let (o1, o2, t) = embed_polar(&c1, &c2)?;
    let mut j = json!({ "coords": [o1.to_json(), o2.to_json()] });
    let mut text = format!("{}|{}\n", o1.to_text(), o2.to_text());
    trace_parts(&t, show, &mut j, &mut text);
    Ok(Output::new(j, text))
}

fn embed_cartesian_cmd(ctx: PadicContext, coords: &str, inverse: bool, semitoric: Option<usize>, show: bool) -> CliResult<Output> {
    let m = read_vector(ctx, coords)?;
    let (out, t) = match (semitoric, inverse) {
        (None, false) => {
            let (o, t) = equivariant_embed(&m)?;
            (o, Some(t))
        }
        (None, true) => (equivariant_inverse(&m)?, None),
        (Some(s), false) => {
            let (o, t) = semitoric_embed(&m, s)?;
            (o, Some(t))
        }
        (Some(s), true) => (semitoric_inverse(&m, s)?, None),
    };
    let mut j = json!({ "point": lits(&out) });
    let mut text = lits(&out).join(",") + "\n";
    if let Some(t) = t {
        trace_parts(&t, show, &mut j, &mut text);
    }
    Ok(Output::new(j, text))
}
