//! Dispatch from parsed arguments to the library, producing reports.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellsurf_core::configs::{
    base_change_map, dessin_search, extremal_groups, extremal_res_classify, k3_length_check,
    rank_one_unimodular_search, torsion_admissible, twist_map, ConfigError, Configuration, LengthVerdict,
};
use ellsurf_core::funcfield::{parse_poly, parse_ratfunc, Rational};
use ellsurf_core::kodaira::{analyze, classify_fibre, szpiro_check, FibreData, KodairaError, KodairaType, SurfaceAnalysis};
use ellsurf_core::lattices::{disc_form, disc_group, root_gram, AbelianGroup, Lattice, LatticeError};
use ellsurf_core::mordell_weil::{
    ns_discriminant, rational_determinant, ComponentLabel, EllipticSurface, MordellWeilError, Section,
};
use ellsurf_core::weierstrass::{WeierstrassError, WeierstrassModel};
use serde::Serialize;
use thiserror::Error;

use crate::input::{parse_gram, parse_model, parse_place, parse_root, parse_sections, InputError};
use crate::report::*;

#[derive(Parser, Debug)]
#[command(name = "ellsurf", version, about = "Elliptic surfaces over Q(t): fibres, heights, lattices, configurations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Where the Weierstrass model comes from.
#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// File with `a1=… a2=… a3=… a4=… a6=…`.
    #[arg(value_name = "MODEL_FILE", conflicts_with_all = ["model", "equation"])]
    pub file: Option<PathBuf>,
    /// Same as the positional model file.
    #[arg(long, value_name = "FILE", conflicts_with = "equation")]
    pub model: Option<PathBuf>,
    /// Model given inline, e.g. "a4=-3*t^4 a6=t^5".
    #[arg(long, short = 'e', value_name = "TEXT")]
    pub equation: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SectionArgs {
    /// File with one `NAME = (x, y)` per line.
    #[arg(long, value_name = "FILE")]
    pub sections: Option<PathBuf>,
    /// A single section `NAME = (x, y)`; may be repeated.
    #[arg(long = "section", value_name = "TEXT")]
    pub section: Vec<String>,
    /// Order of the torsion subgroup, used for the Néron-Severi discriminant.
    #[arg(long, default_value_t = 1)]
    pub torsion_order: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal model, singular fibres and global invariants.
    Analyze {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// The fibre over one place.
    Fibre {
        #[command(flatten)]
        model: ModelArgs,
        /// `inf` or a monic irreducible polynomial in t.
        #[arg(long)]
        place: String,
    },
    /// Heights, components and the Gram matrix of sections.
    Height {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sections: SectionArgs,
    },
    /// Gram matrix of the height pairing and the Néron-Severi discriminant.
    Gram {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sections: SectionArgs,
    },
    /// Quadratic twist of a model, or the effect of a twist on a fibre type.
    Twist {
        #[command(flatten)]
        model: ModelArgs,
        /// Twisting polynomial d(t).
        #[arg(long, value_name = "POLY", conflicts_with = "kodaira")]
        by: Option<String>,
        /// Fibre type such as I2 or IV*.
        #[arg(long = "type", value_name = "TYPE")]
        kodaira: Option<String>,
        /// The twist is unramified at the fibre.
        #[arg(long, requires = "kodaira")]
        even: bool,
    },
    /// Pull back along t ↦ φ(t), or the effect of ramification on a fibre type.
    Basechange {
        #[command(flatten)]
        model: ModelArgs,
        /// The map φ(t).
        #[arg(long, value_name = "RATFUNC", conflicts_with = "kodaira")]
        map: Option<String>,
        /// Fibre type such as II*.
        #[arg(long = "type", value_name = "TYPE", requires = "degree")]
        kodaira: Option<String>,
        /// Ramification index.
        #[arg(long, requires = "kodaira")]
        degree: Option<u32>,
    },
    /// Determinant, discriminant group and discriminant form of a lattice.
    Lattice {
        /// JSON file holding the Gram matrix as integer rows.
        #[arg(long, value_name = "FILE", conflicts_with = "root")]
        gram: Option<PathBuf>,
        /// Root lattice name such as A4, D6 or E8.
        #[arg(long)]
        root: Option<String>,
    },
    /// Existence tests for configurations of singular fibres.
    Config {
        /// Configuration such as "[1,2,2,2,5]" or "[II, II*]".
        #[arg(long, value_name = "CONFIG")]
        check: Option<String>,
        /// List the extremal rational elliptic surfaces.
        #[arg(long, conflicts_with_all = ["check", "dessin"])]
        classify_extremal_res: bool,
        /// Search monodromy tuples for a semi-stable configuration.
        #[arg(long, value_name = "CONFIG", conflicts_with = "check")]
        dessin: Option<String>,
        /// Arithmetic genus for the monodromy search.
        #[arg(long, default_value_t = 1)]
        chi: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Fibre { .. } => "fibre",
            Command::Height { .. } => "height",
            Command::Gram { .. } => "gram",
            Command::Twist { .. } => "twist",
            Command::Basechange { .. } => "basechange",
            Command::Lattice { .. } => "lattice",
            Command::Config { .. } => "config",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    MordellWeil(#[from] MordellWeilError),
    #[error(transparent)]
    Kodaira(#[from] KodairaError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl CliError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(InputError::Parse(_)) => "parse_error",
            CliError::Input(InputError::Validation(_)) => "validation_error",
            CliError::Input(InputError::Format(_)) => "format_error",
            CliError::Io { .. } => "io_error",
            CliError::MordellWeil(_) => "mordell_weil_error",
            CliError::Kodaira(_) => "kodaira_error",
            CliError::Weierstrass(_) => "weierstrass_error",
            CliError::Lattice(_) => "lattice_error",
            CliError::Config(ConfigError::Parse(_)) => "parse_error",
            CliError::Config(_) => "config_error",
        }
    }

    /// 2 for malformed invocations or input text, 1 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::Io { .. }
            | CliError::Input(InputError::Parse(_) | InputError::Format(_))
            | CliError::Config(ConfigError::Parse(_)) => 2,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn load_model(args: &ModelArgs) -> Result<WeierstrassModel, CliError> {
    let text = match (&args.file, &args.model, &args.equation) {
        (Some(p), _, _) | (None, Some(p), _) => read(p)?,
        (None, None, Some(e)) => e.clone(),
        (None, None, None) => return Err(CliError::Usage("a model is required (file, --model or --equation)".into())),
    };
    Ok(parse_model(&text)?)
}

fn load_sections(args: &SectionArgs) -> Result<Vec<(String, Section)>, CliError> {
    let mut out = Vec::new();
    if let Some(p) = &args.sections {
        out.extend(parse_sections(&read(p)?)?);
    }
    for s in &args.section {
        out.extend(parse_sections(s)?);
    }
    Ok(out)
}

fn parse_type(text: &str) -> Result<KodairaType, CliError> {
    text.parse().map_err(|e: KodairaError| CliError::Usage(e.to_string()))
}

fn fibre_row(f: &FibreData) -> FibreRow {
    FibreRow {
        place: f.place.to_string(),
        degree: f.degree(),
        kodaira: f.kodaira.to_string(),
        m: f.components,
        e: f.euler,
        group: f.group.to_string(),
        root: f.root.map(|r| r.to_string()),
        split: f.split.to_string(),
    }
}

fn surface_payload(input: &WeierstrassModel, a: &SurfaceAnalysis) -> SurfacePayload {
    let szpiro = szpiro_check(a).ok().map(|s| Szpiro { lhs: s.lhs, rhs: s.rhs, holds: s.holds });
    SurfacePayload {
        model: input.to_string(),
        minimal_model: a.model.to_string(),
        discriminant: a.model.discriminant().to_string(),
        j_invariant: a.model.j_invariant().to_string(),
        chi: a.chi,
        euler: a.euler,
        classification: a.classification.to_string(),
        fibres: a.fibres.iter().map(fibre_row).collect(),
        conductor: a.conductor_degree,
        trivial_rank: a.trivial_rank,
        b2: a.b2,
        h11: a.h11,
        pg: a.pg,
        isotrivial: a.isotrivial,
        szpiro,
    }
}

fn rationals(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// `ℤ/2 × ℤ/4`, or `{0}` for the trivial group.
fn group_name(g: &AbelianGroup) -> String {
    if g.is_trivial() {
        return "{0}".into();
    }
    g.invariants().iter().map(|d| format!("ℤ/{d}")).collect::<Vec<_>>().join(" × ")
}

/// A rendered report.
pub struct Output {
    pub text: String,
}

fn emit<P: Serialize + Render>(command: &str, payload: P, warnings: Vec<String>, format: Format) -> Output {
    let text = match format {
        Format::Json => {
            let report = Report::new(command, payload, warnings);
            serde_json::to_string_pretty(&report).expect("reports serialise") + "\n"
        }
        Format::Text => {
            let mut text = payload.render();
            for w in &warnings {
                text += &format!("warning: {w}\n");
            }
            text
        }
    };
    Output { text }
}

pub fn error_output(command: &str, err: &CliError, format: Format) -> String {
    match format {
        Format::Json => {
            let report = ErrorReport {
                schema_version: SCHEMA_VERSION.to_string(),
                command: command.to_string(),
                error: ErrorBody { code: err.code().to_string(), message: err.to_string() },
            };
            serde_json::to_string_pretty(&report).expect("reports serialise") + "\n"
        }
        Format::Text => format!("error [{}]: {err}\n", err.code()),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let format = cli.format;
    let name = cli.command.name();
    match &cli.command {
        Command::Analyze { model } => {
            let m = load_model(model)?;
            let a = analyze(&m)?;
            Ok(emit(name, surface_payload(&m, &a), Vec::new(), format))
        }
        Command::Fibre { model, place } => {
            let m = load_model(model)?;
            let place = parse_place(place)?;
            let minimal = m.globally_minimal()?;
            let f = classify_fibre(&minimal, &place)?;
            Ok(emit(name, fibre_row(&f), Vec::new(), format))
        }
        Command::Height { model, sections } => height(name, model, sections, format),
        Command::Gram { model, sections } => gram(name, model, sections, format),
        Command::Twist { model, by, kodaira, even } => {
            if let Some(k) = kodaira {
                let k = parse_type(k)?;
                let payload = TypeMapPayload {
                    input: k.to_string(),
                    parameter: if *even { "even".into() } else { "odd".into() },
                    output: twist_map(k, !even).to_string(),
                };
                return Ok(emit(name, payload, Vec::new(), format));
            }
            let by = by.as_deref().ok_or_else(|| CliError::Usage("twist needs --by or --type".into()))?;
            let m = load_model(model)?;
            let d = parse_poly(by).map_err(InputError::from)?;
            let (twisted, note) = m.quadratic_twist_reduced(&d)?;
            let a = analyze(&twisted)?;
            Ok(emit(name, surface_payload(&twisted, &a), note.into_iter().collect(), format))
        }
        Command::Basechange { model, map, kodaira, degree } => {
            if let (Some(k), Some(d)) = (kodaira, degree) {
                if *d == 0 {
                    return Err(CliError::Usage("ramification index must be positive".into()));
                }
                let k = parse_type(k)?;
                let payload =
                    TypeMapPayload { input: k.to_string(), parameter: format!("d={d}"), output: base_change_map(k, *d).to_string() };
                return Ok(emit(name, payload, Vec::new(), format));
            }
            let map = map.as_deref().ok_or_else(|| CliError::Usage("basechange needs --map or --type".into()))?;
            let m = load_model(model)?;
            let phi = parse_ratfunc(map).map_err(InputError::from)?;
            let pulled = m.base_change(&phi)?;
            let a = analyze(&pulled)?;
            Ok(emit(name, surface_payload(&pulled, &a), Vec::new(), format))
        }
        Command::Lattice { gram, root } => {
            let l = match (gram, root) {
                (Some(p), _) => parse_gram(&read(p)?)?,
                (None, Some(r)) => root_gram(parse_root(r)?)?,
                (None, None) => return Err(CliError::Usage("lattice needs --gram or --root".into())),
            };
            lattice(name, &l, format)
        }
        Command::Config { check, classify_extremal_res, dessin, chi } => {
            if *classify_extremal_res {
                let rows = extremal_res_classify()
                    .into_iter()
                    .map(|(c, g)| ClassificationRow { configuration: c.to_string(), group: group_name(&g) })
                    .collect();
                return Ok(emit(name, ClassificationPayload { rows }, Vec::new(), format));
            }
            if let Some(c) = dessin {
                let c: Configuration = c.parse()?;
                let tuple = dessin_search(&c, *chi)?;
                let payload = DessinPayload {
                    configuration: c.to_string(),
                    degree: 12 * chi,
                    found: tuple.is_some(),
                    sigma0: tuple.as_ref().map(|t| t.sigma0.to_string()),
                    sigma1: tuple.as_ref().map(|t| t.sigma1.to_string()),
                    sigma_inf: tuple.as_ref().map(|t| t.sigma_inf.to_string()),
                    taus: tuple.iter().flat_map(|t| t.taus.iter().map(ToString::to_string)).collect(),
                };
                return Ok(emit(name, payload, Vec::new(), format));
            }
            let c = check.as_deref().ok_or_else(|| {
                CliError::Usage("config needs --check, --dessin or --classify-extremal-res".into())
            })?;
            let (payload, warnings) = check_configuration(&c.parse()?)?;
            Ok(emit(name, payload, warnings, format))
        }
    }
}

fn section_rows(
    surface: &EllipticSurface,
    sections: &[(String, Section)],
) -> Result<Vec<SectionRow>, CliError> {
    let mut rows = Vec::new();
    for (name, p) in sections {
        let report = surface.height(p)?;
        let components = surface
            .components(p)?
            .into_iter()
            .filter(|c| c.label != ComponentLabel::Zero)
            .map(|c| (c.place.to_string(), c.label.to_string()))
            .collect();
        let (x, y) = p.coords().ok_or(MordellWeilError::FinitePointRequired)?;
        rows.push(SectionRow {
            name: name.clone(),
            x: x.to_string(),
            y: y.to_string(),
            height: report.height.to_string(),
            contact_o: report.contact_o,
            components,
            contributions: report.contributions.iter().map(|(v, c)| (v.to_string(), c.to_string())).collect(),
            torsion: surface.is_torsion(p)?,
            narrow: surface.is_narrow(p)?,
            integral: surface.is_integral(p)?,
        });
    }
    Ok(rows)
}

/// Gram matrix, its determinant and the NS discriminant when the matrix is regular.
fn gram_data(
    surface: &EllipticSurface,
    sections: &[Section],
    torsion_order: u64,
    warnings: &mut Vec<String>,
) -> Result<(Vec<Vec<Rational>>, Rational, Option<Rational>), CliError> {
    if sections.is_empty() {
        warnings.push("no sections given; the Gram matrix is empty".into());
        return Ok((Vec::new(), Rational::from_integer(1.into()), None));
    }
    let g = surface.gram_matrix(sections)?;
    let det = rational_determinant(&g);
    let ns = match ns_discriminant(surface.analysis(), &g, torsion_order) {
        Ok(d) => Some(d),
        Err(MordellWeilError::SingularGram) => {
            warnings.push("Gram matrix is singular: the sections are dependent".into());
            None
        }
        Err(e) => return Err(e.into()),
    };
    Ok((g, det, ns))
}

fn height(name: &str, model: &ModelArgs, args: &SectionArgs, format: Format) -> Result<Output, CliError> {
    let m = load_model(model)?;
    let surface = EllipticSurface::new(&m)?;
    let sections = load_sections(args)?;
    let rows = section_rows(&surface, &sections)?;
    let mut warnings = Vec::new();
    let points: Vec<Section> = sections.into_iter().map(|(_, p)| p).collect();
    let (g, _, ns) = gram_data(&surface, &points, args.torsion_order, &mut warnings)?;
    let payload = HeightPayload { sections: rows, gram: rationals(&g), ns_disc: ns.map(|d| d.to_string()) };
    Ok(emit(name, payload, warnings, format))
}

fn gram(name: &str, model: &ModelArgs, args: &SectionArgs, format: Format) -> Result<Output, CliError> {
    let m = load_model(model)?;
    let surface = EllipticSurface::new(&m)?;
    let sections = load_sections(args)?;
    let names = sections.iter().map(|(n, _)| n.clone()).collect();
    let points: Vec<Section> = sections.into_iter().map(|(_, p)| p).collect();
    let mut warnings = Vec::new();
    let (g, det, ns) = gram_data(&surface, &points, args.torsion_order, &mut warnings)?;
    let payload =
        GramPayload { sections: names, gram: rationals(&g), det: det.to_string(), ns_disc: ns.map(|d| d.to_string()) };
    Ok(emit(name, payload, warnings, format))
}

fn lattice(name: &str, l: &Lattice, format: Format) -> Result<Output, CliError> {
    let det = l.determinant();
    let mut warnings = Vec::new();
    let invariant_factors = if det == 0.into() {
        warnings.push("lattice is degenerate; no discriminant group".into());
        Vec::new()
    } else {
        disc_group(l)?.invariants().to_vec()
    };
    let form = if l.is_even() && det != 0.into() {
        let f = disc_form(l)?;
        Some(DiscFormRow {
            orders: f.orders.clone(),
            values: f.values.iter().map(ToString::to_string).collect(),
            linkings: rationals(&f.linkings),
        })
    } else {
        if det != 0.into() {
            warnings.push("lattice is odd; the discriminant form is not defined".into());
        }
        None
    };
    let payload =
        LatticePayload { rank: l.rank(), det: det.to_string(), even: l.is_even(), invariant_factors, disc_form: form };
    Ok(emit(name, payload, warnings, format))
}

/// Torsion orders tried by `config --check`.
const TORSION_ORDERS: std::ops::RangeInclusive<u64> = 2..=12;

pub fn check_configuration(c: &Configuration) -> Result<(ConfigPayload, Vec<String>), CliError> {
    let mut warnings = Vec::new();
    let (euler, rank_t) = (c.euler(), c.rank_t());
    let chi = c.chi();
    let torsion: Vec<u64> = TORSION_ORDERS.filter(|&m| torsion_admissible(c, m)).collect();
    let mut payload = ConfigPayload {
        configuration: c.to_string(),
        euler,
        rank_t,
        disc_product: c.disc_product(),
        torsion_admissible: torsion.clone(),
        extremal_group: None,
        rank1_unimodular: None,
        rank1_witness: None,
        dessin: "not applicable".into(),
        k3_length: None,
        verdict: "undetermined".into(),
    };
    let Some(chi) = chi else {
        payload.verdict = "does not exist (Euler number is not a positive multiple of 12)".into();
        return Ok((payload, warnings));
    };
    if c.is_semistable() {
        payload.dessin = match dessin_search(c, chi) {
            Ok(Some(_)) => "found".into(),
            Ok(None) => "absent".into(),
            Err(ConfigError::DegreeTooLarge { degree, max }) => {
                warnings.push(format!("monodromy search skipped: degree {degree} exceeds {max}"));
                "skipped".into()
            }
            Err(e) => return Err(e.into()),
        };
    }
    if euler == 24 {
        payload.k3_length = Some(match k3_length_check(c)? {
            LengthVerdict::Consistent => "consistent".into(),
            LengthVerdict::ForcesTorsion(p) => format!("forces {p}-torsion"),
            LengthVerdict::Contradiction => "contradiction".into(),
        });
    }
    let mut verdict = None;
    if rank_t > 10 * chi {
        verdict = Some("does not exist (trivial lattice rank exceeds h11)".to_string());
    } else if chi == 1 && rank_t == 10 {
        let groups = extremal_groups(c);
        verdict = Some(match groups.as_slice() {
            [] => "does not exist (no admissible Mordell-Weil group)".into(),
            [g] => {
                payload.extremal_group = Some(group_name(g));
                format!("exists (extremal, {})", group_name(g))
            }
            _ => {
                warnings.push("several Mordell-Weil groups pass the torsion tests".into());
                "undetermined".into()
            }
        });
    } else if chi == 1 && rank_t == 9 {
        let witness = rank_one_unimodular_search(c)?;
        payload.rank1_unimodular = Some(witness.is_some());
        payload.rank1_witness = witness.map(|w| RankOneRow {
            contact: w.contact,
            labels: w.labels.iter().map(ToString::to_string).collect(),
            height: w.height.to_string(),
        });
        if payload.rank1_unimodular == Some(false) && torsion.is_empty() {
            verdict = Some("does not exist (no unimodular Néron-Severi lattice)".into());
        }
    }
    if payload.k3_length.as_deref() == Some("contradiction") {
        verdict = Some("does not exist (length criterion and 2-isogeny)".into());
    }
    if verdict.is_none() && payload.dessin == "found" {
        verdict = Some("exists".into());
    }
    if let Some(v) = verdict {
        payload.verdict = v;
    }
    Ok((payload, warnings))
}
