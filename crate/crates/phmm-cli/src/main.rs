//! `phmm` command-line front end.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use phmm::document::{moments_json, parse_document, report_json, write_document, DomainObject, Document, Json};
use phmm::linalg::{c64, Matrix};
use phmm::moments::{moments_finite, moments_markov, MomentKind};
use phmm::reduction::{
    ph_gain, reduce_descriptor_markov, reduce_ph_finite, reduce_ph_krylov, reduce_ph_markov, Certified,
    DescriptorVariant, MarkovVariant, ModelRef, ReducedFamilyLeft, ReducedFamilyRight, ReducedModel,
};
use phmm::simulation::{simulate_left, simulate_right, InputKind, LeftForm, RightForm};
use phmm::systems::{
    ladder_system, ladder_with_q, smib_system_with, Generator, LtiSystem, PortHamiltonianSystem, Transfer,
    SMIB_DEFAULT_DELTA, SMIB_DEFAULT_L55,
};
use phmm::verification::{
    passivity_check, verify_certificate, verify_finite_match, verify_markov_match, InterpolationCondition,
    MarkovSource, MatchSide, PassivityData, DEFAULT_TOL,
};
use phmm::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "phmm", version, about = "Moment matching reduction for port-Hamiltonian systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    SigmaG,
    SigmaH,
    PhFinite,
    PhMarkov,
    Descriptor,
    PhKrylov,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Finite,
    Markov,
    Certificate,
    Passivity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Ladder,
    Smib,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Standard,
    ImplicitOutput,
    DerivativeInput,
    Finite,
    Descriptor,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputArg {
    Impulse,
    Step,
}

#[derive(Subcommand)]
enum Command {
    /// Moments of a system for a signal generator, as JSON on stdout.
    Moments {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        generator: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        /// finite, pi, pi_bar, pi_tilde, upsilon or upsilon_hat
        #[arg(long, default_value = "finite")]
        variant: String,
    },
    /// Reduced model plus certificate (written next to it as `<out>.cert.json`).
    Reduce {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        generator: Option<PathBuf>,
        #[arg(long, value_enum)]
        method: Method,
        /// Markov construction (pi, pi_bar, pi_tilde, upsilon, upsilon_hat) or descriptor variant 1-4.
        #[arg(long)]
        variant: Option<String>,
        /// JSON array of rows holding the free gain G or H.
        #[arg(long)]
        gain: Option<PathBuf>,
        /// Comma-separated interpolation points, e.g. `0.5,1+2i,1-2i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
        /// JSON array with one tangent direction per point.
        #[arg(long)]
        tangents: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verification report as JSON on stdout; exit status 0 iff every check passes.
    Verify {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        reduced: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Generator whose points are checked in finite mode.
        #[arg(long)]
        generator: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Certificate file; defaults to `<reduced>.cert.json`.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Time series of plant and generator as CSV.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        generator: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        #[arg(long)]
        horizon: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        /// Initial generator state for right-side runs (default e₁).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w0: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "impulse")]
        input: InputArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Magnitude (dB) and phase (degrees) on a logarithmic grid as CSV.
    Bode {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        wmin: f64,
        #[arg(long)]
        wmax: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Writes one of the shipped example systems.
    Example {
        #[arg(value_enum)]
        which: Example,
        /// Ladder: r1,r2,r3,c1,c2,l1,l2. SMIB: delta[,l55].
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<f64>>,
        /// Ladder energy weights q1,q2,q3,q4 (unit circuit parameters).
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit_error("UsageError", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::from(2)
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    let body = Json::obj(vec![("error", Json::str(kind)), ("message", Json::str(message.trim_end()))]);
    eprint!("{}", body.render());
}

fn tolerance() -> Result<f64> {
    match std::env::var("PHMM_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| Error::InvalidArgument(format!("PHMM_TOL must be a positive number, got `{v}`"))),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document> {
    parse_document(&read(path)?)
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn certificate_path(model: &Path) -> PathBuf {
    model.with_extension("cert.json")
}

fn plant(obj: &DomainObject) -> Result<LtiSystem> {
    match obj {
        DomainObject::Ph(s) => Ok(s.to_lti()),
        DomainObject::Lti(s) => Ok(s.clone()),
        DomainObject::Descriptor(s) => s.to_lti(),
        other => Err(Error::Schema(format!("expected a system, found `{}`", other.kind_name()))),
    }
}

fn ph(obj: &DomainObject) -> Result<&PortHamiltonianSystem> {
    match obj {
        DomainObject::Ph(s) => Ok(s),
        other => Err(Error::Schema(format!("method needs a `ph` system, found `{}`", other.kind_name()))),
    }
}

fn generator(obj: DomainObject) -> Result<Generator> {
    match obj {
        DomainObject::GeneratorRight(g) => Ok(Generator::Right(g)),
        DomainObject::GeneratorLeft(g) => Ok(Generator::Left(g)),
        other => Err(Error::Schema(format!("expected a generator, found `{}`", other.kind_name()))),
    }
}

fn transfer_of(obj: &DomainObject) -> Result<&dyn Transfer> {
    match obj {
        DomainObject::Ph(s) => Ok(s),
        DomainObject::Lti(s) => Ok(s),
        DomainObject::Descriptor(s) => Ok(s),
        other => Err(Error::Schema(format!("expected a system, found `{}`", other.kind_name()))),
    }
}

fn markov_source(obj: &DomainObject) -> Result<&dyn MarkovSource> {
    match obj {
        DomainObject::Ph(s) => Ok(s),
        DomainObject::Lti(s) => Ok(s),
        DomainObject::Descriptor(s) => Ok(s),
        other => Err(Error::Schema(format!("expected a system, found `{}`", other.kind_name()))),
    }
}

fn model_ref(obj: &DomainObject) -> Result<ModelRef<'_>> {
    match obj {
        DomainObject::Ph(s) => Ok(ModelRef::Ph(s)),
        DomainObject::Lti(s) => Ok(ModelRef::Lti(s)),
        DomainObject::Descriptor(s) => Ok(ModelRef::Descriptor(s)),
        other => Err(Error::Schema(format!("expected a reduced model, found `{}`", other.kind_name()))),
    }
}

/// A bare JSON array of rows, as used for gains and tangents.
fn load_rows(path: &Path) -> Result<Matrix> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    let rows = value.as_array().ok_or_else(|| Error::Schema(format!("{}: expected an array of rows", path.display())))?;
    let mut data = Vec::new();
    for row in rows {
        let entries = row.as_array().ok_or_else(|| Error::Schema(format!("{}: each row must be an array", path.display())))?;
        let mut out = Vec::new();
        for e in entries {
            out.push(match e {
                serde_json::Value::Number(n) => c64(n.as_f64().unwrap_or(f64::NAN), 0.0),
                serde_json::Value::Array(p) if p.len() == 2 => {
                    c64(p[0].as_f64().unwrap_or(f64::NAN), p[1].as_f64().unwrap_or(f64::NAN))
                }
                _ => return Err(Error::Schema(format!("{}: bad entry {e}", path.display()))),
            });
        }
        data.push(out);
    }
    let nc = data.first().map_or(0, Vec::len);
    if data.iter().any(|r| r.len() != nc) {
        return Err(Error::DimensionMismatch(format!("{}: ragged rows", path.display())));
    }
    Ok(Matrix::from_fn(data.len(), nc, |i, j| data[i][j]))
}

fn parse_point(s: &str) -> Result<Complex64> {
    let t = s.trim().replace('j', "i");
    t.parse::<Complex64>().map_err(|_| Error::InvalidArgument(format!("cannot parse point `{s}`")))
}

fn moment_kind(name: &str) -> Result<MomentKind> {
    Ok(match name {
        "finite" => MomentKind::Finite,
        "pi" => MomentKind::MarkovPi,
        "pi_bar" => MomentKind::MarkovPiBar,
        "pi_tilde" => MomentKind::MarkovPiTilde,
        "upsilon" => MomentKind::MarkovUpsilon,
        "upsilon_hat" => MomentKind::MarkovUpsilonHat,
        _ => return Err(Error::InvalidArgument(format!("unknown moment variant `{name}`"))),
    })
}

fn markov_variant(name: &str) -> Result<MarkovVariant> {
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| Error::InvalidArgument(format!("unknown Markov variant `{name}`")))
}

fn descriptor_variant(name: &str) -> Result<DescriptorVariant> {
    if let Ok(i) = name.parse::<u8>() {
        return DescriptorVariant::from_index(i);
    }
    serde_json::from_value(serde_json::Value::String(name.to_string()))
        .map_err(|_| Error::InvalidArgument(format!("unknown descriptor variant `{name}`")))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Moments { system, generator: gen_path, side, variant } => {
            let sys = plant(&load(&system)?.object)?;
            let gen = generator(load(&gen_path)?.object)?;
            match (side, &gen) {
                (SideArg::Right, Generator::Left(_)) | (SideArg::Left, Generator::Right(_)) => {
                    return Err(Error::InvalidArgument("--side does not match the generator kind".into()))
                }
                _ => {}
            }
            let kind = moment_kind(&variant)?;
            let (mv, _) = if kind == MomentKind::Finite {
                moments_finite(&sys, &gen)?
            } else {
                moments_markov(&sys, &gen, kind)?
            };
            print!("{}", moments_json(&mv).render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce { system, generator: gen_path, method, variant, gain, points, tangents, out } => {
            let doc = load(&system)?;
            let gen = match &gen_path {
                Some(p) => Some(generator(load(p)?.object)?),
                None => None,
            };
            let need_gen = || gen.clone().ok_or_else(|| Error::InvalidArgument("--generator is required".into()));
            let gain_matrix = match &gain {
                Some(p) => Some(load_rows(p)?),
                None => None,
            };
            let (model, certificate) = match method {
                Method::SigmaG => {
                    let g = need_gen()?;
                    let family = ReducedFamilyRight::new(&plant(&doc.object)?, g.as_right()?)?;
                    let gain = match (gain_matrix, &doc.object) {
                        (Some(m), _) => m,
                        (None, DomainObject::Ph(s)) => ph_gain(s, &g)?,
                        (None, _) => return Err(Error::InvalidArgument("--gain is required".into())),
                    };
                    split(family.certified_member(&gain)?, ReducedModel::Lti)
                }
                Method::SigmaH => {
                    let g = need_gen()?;
                    let family = ReducedFamilyLeft::new(&plant(&doc.object)?, g.as_left()?)?;
                    let gain = gain_matrix.ok_or_else(|| Error::InvalidArgument("--gain is required".into()))?;
                    split(family.certified_member(&gain)?, ReducedModel::Lti)
                }
                Method::PhFinite => split(reduce_ph_finite(ph(&doc.object)?, &need_gen()?)?, ReducedModel::Ph),
                Method::PhMarkov => {
                    let v = markov_variant(variant.as_deref().unwrap_or("pi"))?;
                    split(reduce_ph_markov(ph(&doc.object)?, &need_gen()?, v)?, ReducedModel::Ph)
                }
                Method::Descriptor => {
                    let v = descriptor_variant(variant.as_deref().unwrap_or("1"))?;
                    let g = need_gen()?;
                    let h = gain_matrix.ok_or_else(|| Error::InvalidArgument("--gain is required".into()))?;
                    split(reduce_descriptor_markov(&plant(&doc.object)?, g.as_left()?, v, &h)?, ReducedModel::Descriptor)
                }
                Method::PhKrylov => {
                    let pts = points.ok_or_else(|| Error::InvalidArgument("--points is required".into()))?;
                    let pts: Vec<Complex64> = pts.iter().map(|s| parse_point(s)).collect::<Result<_>>()?;
                    let sys = ph(&doc.object)?;
                    let m = sys.b().ncols();
                    let dirs: Vec<Matrix> = match &tangents {
                        Some(p) => {
                            let rows = load_rows(p)?;
                            if rows.nrows() != pts.len() || rows.ncols() != m {
                                return Err(Error::DimensionMismatch(format!(
                                    "tangents must be {}x{m}, one row per point",
                                    pts.len()
                                )));
                            }
                            (0..rows.nrows()).map(|i| Matrix::from_iterator(m, 1, rows.row(i).iter().copied())).collect()
                        }
                        None if m == 1 => vec![Matrix::from_element(1, 1, c64(1.0, 0.0)); pts.len()],
                        None => return Err(Error::InvalidArgument("--tangents is required for multi-input systems".into())),
                    };
                    split(reduce_ph_krylov(sys, &pts, &dirs)?, ReducedModel::Ph)
                }
            };
            let name = format!("{}-{}", if doc.name.is_empty() { "system" } else { &doc.name }, method_name(method));
            write_atomic(&out, &write_document(&Document { name: name.clone(), object: model.into() }))?;
            let cert_doc = Document { name: format!("{name}-certificate"), object: DomainObject::Certificate(certificate) };
            write_atomic(&certificate_path(&out), &write_document(&cert_doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { original, reduced, mode, generator: gen_path, count, certificate } => {
            let tol = tolerance()?;
            let orig = load(&original)?.object;
            let red = load(&reduced)?.object;
            let report = match mode {
                Mode::Finite => {
                    let path = gen_path.ok_or_else(|| Error::InvalidArgument("--generator is required".into()))?;
                    let gen = generator(load(&path)?.object)?;
                    let (conditions, side) = finite_conditions(&gen)?;
                    verify_finite_match(&plant(&orig)?, &plant(&red)?, &conditions, side, tol)?
                }
                Mode::Markov => verify_markov_match(markov_source(&orig)?, markov_source(&red)?, count, tol)?,
                Mode::Certificate => {
                    let path = certificate.unwrap_or_else(|| certificate_path(&reduced));
                    let cert = match load(&path)?.object {
                        DomainObject::Certificate(c) => c,
                        other => return Err(Error::Schema(format!("expected a certificate, found `{}`", other.kind_name()))),
                    };
                    verify_certificate(model_ref(&red)?, &cert, tol)?
                }
                Mode::Passivity => match &red {
                    DomainObject::Ph(s) => passivity_check(PassivityData::Lti(&s.to_lti()), s.q(), tol)?,
                    DomainObject::Lti(s) => {
                        let path = certificate.unwrap_or_else(|| certificate_path(&reduced));
                        let cert = match load(&path)?.object {
                            DomainObject::Certificate(c) => c,
                            other => {
                                return Err(Error::Schema(format!("expected a certificate, found `{}`", other.kind_name())))
                            }
                        };
                        passivity_check(PassivityData::Lti(s), &cert.p, tol)?
                    }
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "passivity mode needs a ph or lti model, found `{}`",
                            other.kind_name()
                        )))
                    }
                },
            };
            print!("{}", report_json(&report).render());
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Simulate { system, generator: gen_path, side, horizon, dt, form, w0, input, out } => {
            let sys = plant(&load(&system)?.object)?;
            let gen = generator(load(&gen_path)?.object)?;
            let result = match (side, &gen) {
                (SideArg::Right, Generator::Right(g)) => {
                    let form = match form.unwrap_or(FormArg::Standard) {
                        FormArg::Standard => RightForm::Standard,
                        FormArg::ImplicitOutput => RightForm::ImplicitOutput,
                        FormArg::DerivativeInput => RightForm::DerivativeInput,
                        _ => return Err(Error::InvalidArgument("right-side forms: standard, implicit-output, derivative-input".into())),
                    };
                    let w0 = w0.unwrap_or_else(|| {
                        let mut e = vec![0.0; g.order()];
                        e[0] = 1.0;
                        e
                    });
                    simulate_right(&sys, g, &w0, horizon, dt, form)?
                }
                (SideArg::Left, Generator::Left(g)) => {
                    let form = match form.unwrap_or(FormArg::Finite) {
                        FormArg::Finite => LeftForm::Finite,
                        FormArg::Descriptor => LeftForm::Descriptor,
                        _ => return Err(Error::InvalidArgument("left-side forms: finite, descriptor".into())),
                    };
                    let input = match input {
                        InputArg::Impulse => InputKind::Impulse,
                        InputArg::Step => InputKind::Step,
                    };
                    simulate_left(&sys, g, form, input, horizon, dt)?
                }
                _ => return Err(Error::InvalidArgument("--side does not match the generator kind".into())),
            };
            write_atomic(&out, &result.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bode { system, wmin, wmax, points, out } => {
            if !(wmin > 0.0 && wmax > wmin && points >= 2) {
                return Err(Error::InvalidArgument("need 0 < wmin < wmax and at least 2 points".into()));
            }
            let doc = load(&system)?;
            let t = transfer_of(&doc.object)?;
            write_atomic(&out, &bode_csv(t, wmin, wmax, points)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { which, params, q, out } => {
            let (name, sys) = match which {
                Example::Ladder => match (params, q) {
                    (Some(_), Some(_)) => return Err(Error::InvalidArgument("use either --params or --q".into())),
                    (None, Some(q)) => {
                        let q: [f64; 4] = q
                            .try_into()
                            .map_err(|_| Error::InvalidArgument("--q takes four values".into()))?;
                        ("ladder", ladder_with_q(q)?)
                    }
                    (Some(p), None) => {
                        if p.len() != 7 {
                            return Err(Error::InvalidArgument("--params takes r1,r2,r3,c1,c2,l1,l2".into()));
                        }
                        ("ladder", ladder_system([p[0], p[1], p[2]], [p[3], p[4]], [p[5], p[6]])?)
                    }
                    (None, None) => ("ladder", ladder_system([1.0; 3], [1.0; 2], [1.0; 2])?),
                },
                Example::Smib => {
                    if q.is_some() {
                        return Err(Error::InvalidArgument("--q applies to the ladder only".into()));
                    }
                    let p = params.unwrap_or_default();
                    if p.len() > 2 {
                        return Err(Error::InvalidArgument("--params takes delta[,l55]".into()));
                    }
                    let delta = p.first().copied().unwrap_or(SMIB_DEFAULT_DELTA);
                    let l55 = p.get(1).copied().unwrap_or(SMIB_DEFAULT_L55);
                    ("smib", smib_system_with(delta, l55)?)
                }
            };
            write_atomic(&out, &write_document(&Document { name: name.into(), object: DomainObject::Ph(sys) }))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn split<M>(c: Certified<M>, wrap: fn(M) -> ReducedModel) -> (ReducedModel, phmm::reduction::MatchCertificate) {
    (wrap(c.model), c.certificate)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::SigmaG => "sigma-g",
        Method::SigmaH => "sigma-h",
        Method::PhFinite => "ph-finite",
        Method::PhMarkov => "ph-markov",
        Method::Descriptor => "descriptor",
        Method::PhKrylov => "ph-krylov",
    }
}

/// Points of the generator, with tangent directions when the spectrum is
/// diagonal and the ports are plural.
fn finite_conditions(gen: &Generator) -> Result<(Vec<InterpolationCondition>, MatchSide)> {
    let (m, data, side) = match gen {
        Generator::Right(g) => (g.s(), g.l().clone(), MatchSide::Right),
        Generator::Left(g) => (g.q(), g.r().transpose(), MatchSide::Left),
    };
    let points = gen_points(gen)?;
    let ports = data.nrows();
    if ports == 1 {
        return Ok((InterpolationCondition::from_points(&points, None), side));
    }
    let k = m.nrows();
    let diagonal = (0..k).all(|i| (0..k).all(|j| i == j || m[(i, j)].norm() == 0.0));
    if !diagonal {
        return Err(Error::InvalidArgument("tangential checks need a diagonal generator".into()));
    }
    let dirs: Vec<Matrix> = (0..k)
        .map(|j| match side {
            MatchSide::Right => Matrix::from_iterator(ports, 1, data.column(j).iter().copied()),
            MatchSide::Left => Matrix::from_iterator(1, ports, data.column(j).iter().copied()),
        })
        .collect();
    let diag: Vec<Complex64> = (0..k).map(|i| m[(i, i)]).collect();
    Ok((diag.iter().zip(&dirs).map(|(&p, d)| InterpolationCondition { point: p, order: 1, direction: Some(d.clone()) }).collect(), side))
}

fn gen_points(gen: &Generator) -> Result<Vec<Complex64>> {
    match gen {
        Generator::Right(g) => g.points(),
        Generator::Left(g) => g.points(),
    }
}

fn bode_csv(t: &dyn Transfer, wmin: f64, wmax: f64, points: usize) -> Result<String> {
    let (p, m) = (t.outputs(), t.inputs());
    let mut out = String::from("omega");
    for i in 1..=p {
        for j in 1..=m {
            out.push_str(&format!(",mag_db_{i}_{j},phase_deg_{i}_{j}"));
        }
    }
    out.push('\n');
    let (lo, hi) = (wmin.log10(), wmax.log10());
    for k in 0..points {
        let w = 10f64.powf(lo + (hi - lo) * k as f64 / (points - 1) as f64);
        let kw = t.transfer(c64(0.0, w))?;
        out.push_str(&format!("{w:.16e}"));
        for i in 0..p {
            for j in 0..m {
                let z = kw[(i, j)];
                out.push_str(&format!(",{:.16e},{:.16e}", 20.0 * z.norm().log10(), z.arg().to_degrees()));
            }
        }
        out.push('\n');
    }
    Ok(out)
}
