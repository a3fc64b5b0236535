//! Command-line front end: `analyze`, `proprify`, `spectrum`, `classify` and
//! `render`, with JSON or plain-text reports.
//!
//! Exit codes: 0 success, 2 input error, 3 input outside the scope of the
//! analysis, 4 internal guard (budget, path explosion, numerical failure).

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::exact::{char_poly, factor_rational, is_pisot_unit, is_pseudo_unimodular, FieldElement};
use crate::exact::{IntMatrix, ModulusClass, RootBox};
use crate::geometry::{
    exchange_check, psi_base_projection, psi_graph, rauzy_cloud, render_svg, usual_projection,
    witness_projection, write_csv, ExchangeConfig, GeometryError, Panel, PointCloud, Projection,
    RenderConfig,
};
use crate::proprify::{proprify, return_word_name, Proprification, ProprifyError};
use crate::spectrum::{
    classify, pisot_rank_bound_check, rat_to_f64, spectral_decomposition, weakly_irreducible_pisot,
    working_substitution, AlphaLattice, ClassKind, EigenLattice, SKind, SpectrumError, Working,
    PROPER_POWER_SEARCH,
};
use crate::substitution::{parse_substitution, Substitution, SubstitutionError};

pub const THREADS_ENV: &str = "SUBST_SPECTRA_THREADS";

/// Residual below which `V'Π` is accepted as the base projection of `ψ`.
const PSI_RESIDUAL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "subst-spectra",
    version,
    about = "Eigenvalues and Rauzy fractals of substitution subshifts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Substitution rules, e.g. "a->ab b->a".
    #[arg(long, global = true, conflicts_with = "file")]
    pub rules: Option<String>,
    /// File holding the rules (text or JSON).
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Worm points for `render`.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub points: usize,
    /// Output directory for `render`.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Work on the input even when no power of it is left-proper.
    #[arg(long, global = true)]
    pub no_proprify: bool,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exchange containment tolerance as a fraction of the cloud diameter.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub tolerance: f64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Primitivity, properness, characteristic polynomial and Pisot flags.
    Analyze,
    /// Return substitution and left-proper recoding.
    Proprify,
    /// Eigenvalue lattice of the subshift.
    Spectrum,
    /// Weakly mixing power, finite extension of a torus translation, or
    /// intermediate.
    Classify,
    /// SVG figures and a JSON report of geometric checks.
    Render {
        /// Figure to draw.
        #[arg(long, value_enum, default_value_t = Mode::Fractal)]
        mode: Mode,
        /// Also write the point cloud as CSV.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Fractal,
    Exchange,
    Torus,
    Psi,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Fractal => "fractal",
            Mode::Exchange => "exchange",
            Mode::Torus => "torus",
            Mode::Psi => "psi",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Scope(String),
    Guard(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Scope(_) => 3,
            CliError::Guard(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Scope(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<SubstitutionError> for CliError {
    fn from(e: SubstitutionError) -> Self {
        let m = e.to_string();
        match e {
            SubstitutionError::Parse(_)
            | SubstitutionError::Erasing(_)
            | SubstitutionError::UnknownLetter(_)
            | SubstitutionError::DuplicateLetter(_) => CliError::Input(m),
            SubstitutionError::NotPrimitive
            | SubstitutionError::NoFixedPoint(_)
            | SubstitutionError::BadSeed(_) => CliError::Scope(m),
            SubstitutionError::OutOfRange(_) => CliError::Guard(m),
        }
    }
}

impl From<ProprifyError> for CliError {
    fn from(e: ProprifyError) -> Self {
        let m = e.to_string();
        match e {
            ProprifyError::Substitution(e) => e.into(),
            ProprifyError::Periodic(_) => CliError::Scope(m),
            ProprifyError::Exact(_) | ProprifyError::ShortImages(_) => CliError::Guard(m),
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        let m = e.to_string();
        match e {
            SpectrumError::Proprify(e) => e.into(),
            SpectrumError::Exact(_) => CliError::Guard(m),
            _ => CliError::Scope(m),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        let m = e.to_string();
        match e {
            GeometryError::Spectrum(e) => e.into(),
            GeometryError::Substitution(e) => e.into(),
            GeometryError::NotPisotUnit
            | GeometryError::NoContraction
            | GeometryError::Dimension { .. } => CliError::Scope(m),
            GeometryError::Exact(_) | GeometryError::Budget { .. } => CliError::Guard(m),
            GeometryError::Io(_) => CliError::Input(m),
        }
    }
}

/// Runs one command; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {}", e.message());
        return e.code();
    }
    match execute(&cli) {
        Ok((text, status)) => {
            let _ = write!(out, "{text}");
            match status {
                None => 0,
                Some(e) => {
                    let _ = writeln!(err, "error: {}", e.message());
                    e.code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::Input(format!(
            "{THREADS_ENV} must be a positive integer, got {v:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::Input(format!("{THREADS_ENV} must be positive")));
    }
    // A pool built by an earlier call in the same process stays in place.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn read_input(cli: &Cli) -> Result<Substitution, CliError> {
    let text = match (&cli.rules, &cli.file) {
        (Some(r), _) => r.clone(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?,
        (None, None) => {
            return Err(CliError::Input(
                "one of --rules or --file is required".into(),
            ))
        }
    };
    Ok(parse_substitution(&text)?)
}

/// Report text, JSON or plain, and the error a partial report ends with.
pub fn execute(cli: &Cli) -> Result<(String, Option<CliError>), CliError> {
    let s = read_input(cli)?;
    let report = match &cli.command {
        Command::Analyze => analyze(cli, &s)?,
        Command::Proprify => cmd_proprify(cli, &s)?,
        Command::Spectrum => cmd_spectrum(cli, &s)?,
        Command::Classify => cmd_classify(cli, &s)?,
        Command::Render { mode, csv } => cmd_render(cli, &s, *mode, *csv)?,
    };
    let text = if cli.json {
        let mut t = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
        t.push('\n');
        t
    } else {
        report.text
    };
    Ok((text, report.status))
}

struct Report {
    json: Value,
    text: String,
    status: Option<CliError>,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report {
            json,
            text,
            status: None,
        }
    }
}

fn config_json(cli: &Cli, s: &Substitution) -> Value {
    let (command, mode) = match &cli.command {
        Command::Analyze => ("analyze", None),
        Command::Proprify => ("proprify", None),
        Command::Spectrum => ("spectrum", None),
        Command::Classify => ("classify", None),
        Command::Render { mode, .. } => ("render", Some(mode.name())),
    };
    let mut c = json!({
        "command": command,
        "rules": s.to_rules_string(),
        "proprify": !cli.no_proprify,
        "proper_power_search": PROPER_POWER_SEARCH,
    });
    if let Some(m) = mode {
        let o = c.as_object_mut().unwrap();
        o.insert("mode".into(), json!(m));
        o.insert("points".into(), json!(cli.points));
        o.insert("tolerance".into(), num(cli.tolerance));
        o.insert("out".into(), json!(cli.out.display().to_string()));
    }
    c
}

/// Floats with 12 significant digits; non-finite values become `null`.
fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(r)
}

fn int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn matrix_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| int_vec(m.row(i))).collect())
}

fn element_json(x: &FieldElement) -> Value {
    json!({
        "value": x.to_string(),
        "coords": x.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "approx": num(x.to_complex().re),
    })
}

fn root_json(r: &RootBox) -> Value {
    json!({ "re": num(rat_to_f64(&r.center.re)), "im": num(rat_to_f64(&r.center.im)) })
}

fn modulus_str(m: ModulusClass) -> &'static str {
    match m {
        ModulusClass::Less => "<1",
        ModulusClass::Equal => "=1",
        ModulusClass::Greater => ">1",
    }
}

/// Letter → image; images are strings when every letter is one character.
fn images_json(s: &Substitution) -> Value {
    let compact = s.letters().iter().all(|l| l.chars().count() == 1);
    let mut o = Map::new();
    for a in 0..s.size() {
        let v = if compact {
            json!(s.image_string(a))
        } else {
            json!(s.image(a).iter().map(|&b| s.letter(b)).collect::<Vec<_>>())
        };
        o.insert(s.letter(a).to_string(), v);
    }
    Value::Object(o)
}

fn substitution_json(s: &Substitution) -> Value {
    json!({ "letters": s.letters(), "images": images_json(s), "rules": s.to_rules_string() })
}

fn field_json(l: &EigenLattice) -> Value {
    json!({
        "polynomial": l.field.min_poly().to_string(),
        "generator": "b",
        "generator_approx": num(l.field.root_approx().re),
    })
}

fn lattice_json(a: &AlphaLattice) -> Value {
    json!({
        "text": a.to_string(),
        "denominator": int(&a.denominator),
        "hnf_rows": a.rows.iter().map(|r| int_vec(r)).collect::<Vec<_>>(),
        "generators": a.generators().iter().map(element_json).collect::<Vec<_>>(),
        "rank": a.rank(),
        "independent_rank": a.independent_rank(),
    })
}

fn analyze(cli: &Cli, s: &Substitution) -> Result<Report, CliError> {
    let m = s.incidence_matrix();
    let prim = s.is_primitive();
    let lpp = s.proper_power(PROPER_POWER_SEARCH);
    let (left, right) = (s.is_left_proper(), s.is_right_proper());
    let cp = char_poly(&m).map_err(|e| CliError::Guard(e.to_string()))?;
    let factors = factor_rational(&cp).map_err(|e| CliError::Guard(e.to_string()))?;
    let pu = is_pseudo_unimodular(&m).map_err(|e| CliError::Guard(e.to_string()))?;
    let mut j = json!({
        "config": config_json(cli, s),
        "substitution": substitution_json(s),
        "incidence_matrix": matrix_json(&m),
        "primitive": prim.primitive,
        "primitivity_witness": prim.witness_power,
        "left_proper": left,
        "right_proper": right,
        "proper": left && right,
        "left_proper_power": lpp,
        "char_poly": cp.to_string(),
        "pseudo_unimodular": pu,
    });
    let mut text = String::new();
    let _ = writeln!(text, "substitution: {s}");
    let _ = writeln!(
        text,
        "primitive: {}{}",
        prim.primitive,
        prim.witness_power
            .map(|k| format!(" (M^{k} > 0)"))
            .unwrap_or_default()
    );
    let _ = writeln!(
        text,
        "left proper: {left}, right proper: {right}, proper: {}",
        left && right
    );
    let _ = writeln!(
        text,
        "least left-proper power: {}",
        lpp.map(|k| k.to_string())
            .unwrap_or_else(|| format!("none up to {PROPER_POWER_SEARCH}"))
    );
    let _ = writeln!(text, "characteristic polynomial: {cp}");
    let _ = writeln!(text, "pseudo-unimodular: {pu}");
    if !prim.primitive {
        let o = j.as_object_mut().unwrap();
        o.insert(
            "factors".into(),
            Value::Array(
                factors
                    .iter()
                    .map(|(p, e)| json!({ "poly": p.to_string(), "multiplicity": e }))
                    .collect(),
            ),
        );
        let _ = writeln!(text, "spectral data skipped");
        return Ok(Report {
            json: j,
            text,
            status: Some(SubstitutionError::NotPrimitive.into()),
        });
    }
    let dec = spectral_decomposition(&m)?;
    let pisot = is_pisot_unit(dec.perron_poly()).map_err(|e| CliError::Guard(e.to_string()))?;
    let wip = weakly_irreducible_pisot(&dec)?;
    let o = j.as_object_mut().unwrap();
    o.insert(
        "factors".into(),
        Value::Array(
            dec.factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    json!({
                        "poly": f.poly.to_string(),
                        "multiplicity": f.multiplicity,
                        "perron": i == dec.perron_factor,
                        "roots": f.roots.iter().map(root_json).collect::<Vec<_>>(),
                        "modulus": f.modulus.iter().map(|&c| modulus_str(c)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        ),
    );
    o.insert(
        "perron".into(),
        json!({
            "poly": dec.perron_poly().to_string(),
            "degree": dec.perron.degree(),
            "root": num(dec.perron.root_approx().re),
            "irreducible_char_poly": dec.factors.len() == 1 && dec.factors[0].multiplicity == 1,
        }),
    );
    o.insert("pisot".into(), json!(pisot.pisot));
    o.insert("unit".into(), json!(pisot.unit));
    o.insert("pisot_unit".into(), json!(pisot.pisot && pisot.unit));
    o.insert("weakly_irreducible_pisot".into(), json!(wip));
    for (i, f) in dec.factors.iter().enumerate() {
        let mods: Vec<&str> = f.modulus.iter().map(|&c| modulus_str(c)).collect();
        let _ = writeln!(
            text,
            "  factor ({})^{}{}: moduli {}",
            f.poly,
            f.multiplicity,
            if i == dec.perron_factor {
                " [Perron]"
            } else {
                ""
            },
            mods.join(" ")
        );
    }
    let _ = writeln!(
        text,
        "Perron root: {:.12} (degree {})",
        dec.perron.root_approx().re,
        dec.perron.degree()
    );
    let _ = writeln!(text, "Pisot: {}, unit: {}", pisot.pisot, pisot.unit);
    let _ = writeln!(text, "weakly irreducible Pisot: {wip}");
    Ok(Report::ok(j, text))
}

fn require_primitive(s: &Substitution) -> Result<(), CliError> {
    if s.is_primitive().primitive {
        Ok(())
    } else {
        Err(SubstitutionError::NotPrimitive.into())
    }
}

fn proprification_json(p: &Proprification) -> Result<Value, CliError> {
    let s = &p.original;
    let rw = &p.return_words;
    let prefix = s.pow(p.power_k).fixed_point_prefix(rw.letter, 40)?;
    let mut words = Map::new();
    for (i, w) in rw.words.iter().enumerate() {
        words.insert(return_word_name(i), json!(s.word_string(w)));
    }
    let mut letter_map = Map::new();
    let mut positions = Map::new();
    for (x, &a) in p.letter_map.iter().enumerate() {
        letter_map.insert(p.xi.letter(x).to_string(), json!(s.letter(a)));
        let (r, q) = p.positions[x];
        positions.insert(p.xi.letter(x).to_string(), json!([return_word_name(r), q]));
    }
    Ok(json!({
        "power_k": p.power_k,
        "fixed_point_prefix": s.word_string(&prefix),
        "return_letter": s.letter(rw.letter),
        "return_words": words,
        "tau": substitution_json(&p.tau),
        "tau_power": p.tau_power,
        "xi": substitution_json(&p.xi),
        "letter_map": letter_map,
        "positions": positions,
        "left_proper_power": p.left_proper_power,
        "eigen_witness": p.eigen_witness,
    }))
}

fn cmd_proprify(cli: &Cli, s: &Substitution) -> Result<Report, CliError> {
    require_primitive(s)?;
    let p = proprify(s)?;
    let body = proprification_json(&p)?;
    let mut text = String::new();
    let _ = writeln!(text, "substitution: {s}");
    let _ = writeln!(text, "power: {}", p.power_k);
    let _ = writeln!(
        text,
        "fixed point prefix: {}",
        body["fixed_point_prefix"].as_str().unwrap()
    );
    let words: Vec<String> = p
        .return_words
        .words
        .iter()
        .map(|w| s.word_string(w))
        .collect();
    let _ = writeln!(
        text,
        "return words on {}: {}",
        s.letter(p.return_words.letter),
        words.join(", ")
    );
    let _ = writeln!(text, "tau: {}", p.tau);
    if p.tau_power > 1 {
        let _ = writeln!(text, "xi built from tau^{}", p.tau_power);
    }
    let _ = writeln!(text, "xi ({} letters): {}", p.xi.size(), p.xi);
    let _ = writeln!(
        text,
        "left-proper power of xi: {}",
        p.left_proper_power
            .map(|k| k.to_string())
            .unwrap_or_else(|| "none".into())
    );
    let mut j = json!({ "config": config_json(cli, s), "substitution": substitution_json(s) });
    j.as_object_mut()
        .unwrap()
        .extend(body.as_object().unwrap().clone());
    Ok(Report::ok(j, text))
}

fn skind_json(k: &SKind) -> Value {
    match k {
        SKind::RationalSumZero => json!({ "kind": "rational_sum_zero" }),
        SKind::SumZero { root } => json!({ "kind": "sum_zero", "root": root }),
        SKind::Difference { root } => json!({ "kind": "difference", "root": root }),
    }
}

fn working_json(l: &EigenLattice) -> Result<Value, CliError> {
    Ok(match &l.working {
        Working::Original { left_proper_power } => json!({
            "kind": "original",
            "left_proper_power": left_proper_power,
        }),
        Working::Proprified(p) => json!({
            "kind": "proprified",
            "left_proper_power": p.left_proper_power,
            "proprification": proprification_json(p)?,
        }),
    })
}

fn spectrum_json(l: &EigenLattice) -> Result<Value, CliError> {
    let dec = &l.data.decomposition;
    let s_vectors: Vec<Value> = l
        .data
        .s
        .iter()
        .map(|v| {
            json!({
                "factor": dec.factors[v.factor].poly.to_string(),
                "type": skind_json(&v.kind),
                "field": v.entries.first().map(|e| e.field().min_poly().to_string()),
                "entries": v.entries.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "field": field_json(l),
        "working": working_json(l)?,
        "complete": l.complete(),
        "working_matrix": matrix_json(l.working_matrix()),
        "working_char_poly": dec.char_poly.to_string(),
        "s_vectors": s_vectors,
        "ms": matrix_json(&l.data.ms),
        "kernel_basis": l.kernel_basis.basis.iter().map(|r| int_vec(r)).collect::<Vec<_>>(),
        "witnesses": l.witnesses.iter().map(|(w, a)| json!({ "w": int_vec(w), "alpha": element_json(a) })).collect::<Vec<_>>(),
        "lattice": lattice_json(&l.alpha),
    }))
}

fn working_text(l: &EigenLattice) -> String {
    match &l.working {
        Working::Original {
            left_proper_power: Some(k),
        } => format!("input (power {k} is left-proper)"),
        Working::Original {
            left_proper_power: None,
        } => "input, no left-proper power found: the lattice may be incomplete".into(),
        Working::Proprified(p) => format!("proprified, {} letters: {}", p.xi.size(), p.xi),
    }
}

fn cmd_spectrum(cli: &Cli, s: &Substitution) -> Result<Report, CliError> {
    require_primitive(s)?;
    let l = crate::spectrum::eigenvalue_lattice(s, !cli.no_proprify)?;
    let mut j = json!({ "config": config_json(cli, s), "substitution": substitution_json(s) });
    j.as_object_mut()
        .unwrap()
        .extend(spectrum_json(&l)?.as_object().unwrap().clone());
    let mut text = String::new();
    let _ = writeln!(text, "substitution: {s}");
    let _ = writeln!(
        text,
        "field: Q(b), b root of {}, b = {:.12}",
        l.field.min_poly(),
        l.field.root_approx().re
    );
    let _ = writeln!(text, "working system: {}", working_text(&l));
    let _ = writeln!(text, "kernel of M_S:");
    for r in &l.kernel_basis.basis {
        let v: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "  ({})", v.join(", "));
    }
    let _ = writeln!(text, "eigenvalue lattice: {}", l.alpha);
    let _ = writeln!(text, "independent rank: {}", l.alpha.independent_rank());
    Ok(Report::ok(j, text))
}

fn cmd_classify(cli: &Cli, s: &Substitution) -> Result<Report, CliError> {
    require_primitive(s)?;
    let c = classify(s, !cli.no_proprify)?;
    let parameter = match &c.kind {
        ClassKind::WeaklyMixingPower(n) => int(n),
        ClassKind::FiniteExtension(d) | ClassKind::TorusExtension(d) => json!(d),
        ClassKind::Intermediate => Value::Null,
    };
    let pisot =
        is_pisot_unit(c.lattice.field.min_poly()).map_err(|e| CliError::Guard(e.to_string()))?;
    let rank_check = if pisot.pisot {
        Value::Null
    } else {
        let r = pisot_rank_bound_check(s, !cli.no_proprify)?;
        json!({ "rank": r.rank, "independent_rank": r.independent_rank, "degree": r.degree, "holds": r.holds })
    };
    let label = c.kind.label();
    let j = json!({
        "config": config_json(cli, s),
        "substitution": substitution_json(s),
        "label": label,
        "parameter": parameter,
        "perron_degree": c.perron_degree,
        "pisot_unit": c.pisot_unit,
        "weakly_irreducible_pisot": c.weakly_irreducible_pisot,
        "hypothesis": c.hypothesis.as_ref().map(|h| json!({
            "holds": h.holds,
            "failing_factor": h.failing_factor.as_ref().map(|f| f.to_string()),
        })),
        "pisot_rank_check": rank_check,
        "evidence": c.evidence,
        "field": field_json(&c.lattice),
        "lattice": lattice_json(&c.lattice.alpha),
    });
    let mut text = String::new();
    let _ = writeln!(text, "substitution: {s}");
    let p = match &c.kind {
        ClassKind::Intermediate => String::new(),
        _ => format!("({parameter})"),
    };
    let _ = writeln!(text, "class: {label}{p}");
    for e in &c.evidence {
        let _ = writeln!(text, "  {e}");
    }
    if let Value::Object(r) = &j["pisot_rank_check"] {
        let _ = writeln!(
            text,
            "  non-Pisot rank bound: rank {} < degree {}: {}",
            r["rank"], r["degree"], r["holds"]
        );
    }
    Ok(Report::ok(j, text))
}

fn cloud_stats(c: &PointCloud) -> Value {
    let bbox: Vec<Value> = c
        .bounding_box()
        .iter()
        .map(|(lo, hi)| json!([num(*lo), num(*hi)]))
        .collect();
    json!({ "points": c.len(), "dim": c.dim, "diameter": num(c.diameter()), "bounding_box": bbox })
}

fn projection_json(p: &Projection) -> Value {
    json!({
        "dim": p.dim(),
        "matrix": p.rows().iter().map(|r| r.iter().map(|&x| num(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "residual": num(p.residual),
        "det_abs": p.det_abs.map(num),
    })
}

fn exchange_json(cloud: &PointCloud, proj: &Projection, tol: f64) -> Value {
    let r = exchange_check(
        cloud,
        proj,
        &ExchangeConfig {
            tolerance_fraction: tol,
            ..Default::default()
        },
    );
    json!({
        "translations": r.translations.iter().map(|t| t.iter().map(|&x| num(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "telescoping_error": num(r.telescoping_error),
        "tolerance": num(r.tolerance),
        "containment_ratio": num(r.containment_ratio),
        "grid_side": num(r.grid_side),
        "overlap": num(r.overlap),
        "overlap_refined": num(r.overlap_refined),
    })
}

fn translated(cloud: &PointCloud, proj: &Projection) -> PointCloud {
    let cols: Vec<Vec<f64>> = (0..proj.letters()).map(|a| proj.column(a)).collect();
    let mut out = cloud.clone();
    for (i, &t) in cloud.tags.iter().enumerate() {
        for k in 0..cloud.dim {
            out.coords[i * cloud.dim + k] += cols[t][k];
        }
    }
    out
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn cmd_render(cli: &Cli, s: &Substitution, mode: Mode, csv: bool) -> Result<Report, CliError> {
    require_primitive(s)?;
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", cli.out.display())))?;
    let allow = !cli.no_proprify;
    let mut stats = Map::new();
    let (ws, proprified, panels, cloud) = match mode {
        Mode::Fractal | Mode::Exchange => {
            let (ws, working) = working_substitution(s, allow)?;
            let proj = usual_projection(&ws)?;
            let cloud = rauzy_cloud(&ws, &proj, cli.points)?;
            stats.insert("projection".into(), projection_json(&proj));
            stats.insert(
                "exchange".into(),
                exchange_json(&cloud, &proj, cli.tolerance),
            );
            let mut panels = vec![Panel::from_cloud("Rauzy fractal", &cloud)];
            if mode == Mode::Exchange {
                panels.push(Panel::from_cloud(
                    "after exchange",
                    &translated(&cloud, &proj),
                ));
            }
            (ws, matches!(working, Working::Proprified(_)), panels, cloud)
        }
        Mode::Torus | Mode::Psi => {
            let l = crate::spectrum::eigenvalue_lattice(s, allow)?;
            if l.alpha.independent_rank() == 0 {
                return Err(CliError::Scope(
                    "every eigenvalue is rational: there is no torus factor".into(),
                ));
            }
            let ws = match &l.working {
                Working::Proprified(p) => p.xi.clone(),
                Working::Original { .. } => s.clone(),
            };
            let vp = witness_projection(&l)?;
            stats.insert("lattice".into(), lattice_json(&l.alpha));
            stats.insert("torus_projection".into(), projection_json(&vp));
            let proprified = matches!(l.working, Working::Proprified(_));
            if mode == Mode::Torus {
                let cloud = rauzy_cloud(&ws, &vp, cli.points)?;
                let panels = vec![Panel::torus_reduced("torus coordinates mod 1", &cloud)];
                (ws, proprified, panels, cloud)
            } else {
                let mut v = psi_base_projection(l.working_matrix(), &vp);
                let mut base = "projected_torus";
                if !(v.residual < PSI_RESIDUAL) {
                    v = usual_projection(&ws)?;
                    base = "usual";
                }
                stats.insert("base".into(), json!(base));
                stats.insert("base_projection".into(), projection_json(&v));
                let g = psi_graph(&ws, &v, &vp, cli.points)?;
                stats.insert("digit_classes".into(), json!(g.digit_classes));
                stats.insert(
                    "max_translation_deviation".into(),
                    num(g.max_translation_deviation),
                );
                stats.insert("image".into(), cloud_stats(&g.image));
                let panels = vec![
                    Panel::from_cloud("base", &g.base),
                    Panel::from_cloud("image", &g.image),
                    Panel::graph("graph of psi (first coordinates)", &g.base, &g.image),
                ];
                (ws, proprified, panels, g.base)
            }
        }
    };
    stats.insert("cloud".into(), cloud_stats(&cloud));
    let stem = if proprified {
        format!("{}-proprified", mode.name())
    } else {
        mode.name().to_string()
    };
    let svg_path = cli.out.join(format!("{stem}.svg"));
    let json_path = cli.out.join(format!("{stem}.json"));
    write_file(
        &svg_path,
        render_svg(&panels, ws.letters(), &RenderConfig::default()).as_bytes(),
    )?;
    let mut files = vec![
        svg_path.display().to_string(),
        json_path.display().to_string(),
    ];
    if csv {
        let csv_path = cli.out.join(format!("{stem}.csv"));
        let mut buf = Vec::new();
        write_csv(&cloud, &mut buf).map_err(|e| CliError::Input(e.to_string()))?;
        write_file(&csv_path, &buf)?;
        files.push(csv_path.display().to_string());
    }
    let j = json!({
        "config": config_json(cli, s),
        "substitution": substitution_json(s),
        "working": substitution_json(&ws),
        "proprified": proprified,
        "stats": Value::Object(stats),
        "files": files,
    });
    let mut report = serde_json::to_string_pretty(&j).expect("JSON values serialize");
    report.push('\n');
    write_file(&json_path, report.as_bytes())?;
    let mut text = String::new();
    let _ = writeln!(text, "substitution: {s}");
    if proprified {
        let _ = writeln!(text, "working system: proprified, {} letters", ws.size());
    }
    let _ = writeln!(text, "points: {}, dimension: {}", cloud.len(), cloud.dim);
    if let Some(e) = j["stats"].get("exchange") {
        let _ = writeln!(
            text,
            "exchange containment: {}, overlap: {} (grid {}), {} (grid halved)",
            e["containment_ratio"], e["overlap"], e["grid_side"], e["overlap_refined"]
        );
    }
    if let Some(d) = j["stats"].get("max_translation_deviation") {
        let _ = writeln!(
            text,
            "psi base: {}, translation deviation: {d}",
            j["stats"]["base"]
        );
    }
    for f in &files {
        let _ = writeln!(text, "wrote {f}");
    }
    Ok(Report::ok(j, text))
}
