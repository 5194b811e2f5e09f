//! The `torex` command line.

pub mod figure;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use torex_core::bigjson::rat_to_string;
use torex_core::cohomology::{non_acyclic_subsets, CohomologyEngine};
use torex_core::collections::{
    build_collection_with, closure, closure_window, replay, verify_strong_exceptional, ExceptionalCollection,
    VerificationReport,
};
use torex_core::exactlin::Rat;
use torex_core::windows::{build_window, classes_in, generic_shift, WindowKind};
use torex_core::{FanClass, PicClass, PicardGroup, StackyFan, TorexError};

use crate::input::{parse_classes, FanDocument, InputError};
use crate::report::*;

#[derive(Parser, Debug)]
#[command(name = "torex", version, about = "Exceptional collections of line bundles on toric stacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Fan JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    fan: Option<PathBuf>,
    /// A class {"free": [...], "torsion": [...]} or an array of them; repeatable.
    #[arg(long = "class", global = true, value_name = "JSON")]
    classes: Vec<String>,
    /// Seed for the generic shift.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Output file (the SVG for `figure`).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Check the fan and list every violated invariant.
    Validate,
    /// Fano, nef-Fano or neither.
    Classify,
    /// Picard group, ray classes and canonical class.
    Picard,
    /// Cohomology dimensions of each --class.
    Cohom,
    /// Acyclicity and strong acyclicity of each --class.
    Acyclic,
    /// Non-acyclic subsets and forbidden cones.
    Forbidden,
    /// The window, its generic shift and the classes inside.
    Window {
        /// rank1, rank2 or delpezzo; defaults to the one that fits the fan.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Build and verify the full strong exceptional collection.
    Collection,
    /// Verify --class (or the built collection) by full cohomology.
    Verify,
    /// Koszul closure of --class (or the collection) in the enlarged window.
    Closure,
    /// SVG of the window plane.
    Figure {
        /// xmin,ymin,xmax,ymax; fractions allowed.
        #[arg(long)]
        viewport: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Classify => "classify",
            Command::Picard => "picard",
            Command::Cohom => "cohom",
            Command::Acyclic => "acyclic",
            Command::Forbidden => "forbidden",
            Command::Window { .. } => "window",
            Command::Collection => "collection",
            Command::Verify => "verify",
            Command::Closure => "closure",
            Command::Figure { .. } => "figure",
        }
    }
}

enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1.
    Report(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<TorexError> for Failure {
    fn from(e: TorexError) -> Self {
        match e {
            TorexError::CertificateFailure(_)
            | TorexError::HomCycle(..)
            | TorexError::GenericityFailure(_)
            | TorexError::NonGenericShift
            | TorexError::UnsupportedDimension(_) => Failure::Report(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    result: Value,
    witnesses: Value,
    text: String,
    ok: bool,
    /// Written to `--out` in place of the report (figures).
    artifact: Option<String>,
}

impl Output {
    fn new(result: &impl Serialize, witnesses: Value, text: String, ok: bool) -> Self {
        Output {
            result: to_value(result),
            witnesses,
            text,
            ok,
            artifact: None,
        }
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn class_str(c: &PicClass) -> String {
    serde_json::to_string(c).expect("classes serialize")
}

fn rats(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(rat_to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Report(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let path = cli
        .fan
        .as_deref()
        .ok_or_else(|| Failure::Input("--fan PATH is required".into()))?;
    let doc = FanDocument::read(path)?;
    let fan_name = doc.display_name(path);
    let out = match &cli.command {
        Command::Validate => validate(&doc)?,
        command => {
            let (fan, warnings) = doc.to_fan()?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let classes = parse_classes(&cli.classes)?;
            dispatch(command, cli, &fan, classes)?
        }
    };
    let report = Report {
        torex_version: torex_core::VERSION.to_string(),
        command: cli.command.name().to_string(),
        fan_name,
        result: out.result,
        witnesses: out.witnesses,
    };
    let rendered = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        out.text
    };
    match (&out.artifact, &cli.out) {
        (Some(bytes), Some(p)) => {
            write_file(p, bytes)?;
            print!("{rendered}");
        }
        (Some(_), None) if cli.json => print!("{rendered}"),
        (Some(bytes), None) => print!("{bytes}"),
        // a figure that could not be drawn leaves no file behind
        (None, Some(_)) if matches!(cli.command, Command::Figure { .. }) => print!("{rendered}"),
        (None, Some(p)) => write_file(p, &rendered)?,
        (None, None) => print!("{rendered}"),
    }
    Ok(if out.ok { 0 } else { 1 })
}

fn write_file(p: &Path, s: &str) -> Result<(), Failure> {
    std::fs::write(p, s).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display())))
}

fn dispatch(command: &Command, cli: &Cli, fan: &StackyFan, classes: Vec<PicClass>) -> Result<Output, Failure> {
    match command {
        Command::Validate => unreachable!("handled before the fan is validated"),
        Command::Classify => classify(fan),
        Command::Picard => picard(fan),
        Command::Cohom => cohom(fan, &classes),
        Command::Acyclic => acyclic(fan, &classes),
        Command::Forbidden => forbidden(fan),
        Command::Window { kind } => window(fan, kind.as_deref(), cli.seed),
        Command::Collection => collection(fan, cli.seed),
        Command::Verify => verify(fan, classes, cli.seed),
        Command::Closure => closure_cmd(fan, classes, cli.seed),
        Command::Figure { viewport } => figure_cmd(fan, viewport.as_deref(), cli.seed, cli.out.as_deref()),
    }
}

fn validate(doc: &FanDocument) -> Result<Output, Failure> {
    let fan = doc.to_unchecked()?;
    let diagnostics = fan.validate();
    let valid = diagnostics.is_empty();
    let mut text = String::new();
    if valid {
        text.push_str("valid\n");
    } else {
        text.push_str("invalid\n");
        for d in &diagnostics {
            let _ = writeln!(text, "  {d}");
        }
    }
    Ok(Output::new(&ValidateResult { valid, diagnostics }, Value::Null, text, valid))
}

fn classify(fan: &StackyFan) -> Result<Output, Failure> {
    let class = fan.classify()?;
    let normalized_volume = match class {
        FanClass::Neither => None,
        _ => Some(fan.normalized_volume()?),
    };
    let name = match class {
        FanClass::Fano => "fano",
        FanClass::NefFano => "nef-fano",
        FanClass::Neither => "neither",
    };
    let text = match &normalized_volume {
        Some(v) => format!("{name}, normalized volume {}\n", rat_to_string(v)),
        None => format!("{name}\n"),
    };
    Ok(Output::new(&ClassifyResult { class, normalized_volume }, Value::Null, text, true))
}

fn picard(fan: &StackyFan) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let summary = PicardSummary {
        n: pic.n(),
        d: pic.d(),
        rank: pic.k(),
        torsion: pic.torsion().to_vec(),
        ray_classes: (0..pic.n()).map(|i| pic.e(i)).collect(),
        canonical_class: pic.canonical_class(),
    };
    let mut text = format!("Pic = Z^{}", summary.rank);
    for t in &summary.torsion {
        let _ = write!(text, " + Z/{t}");
    }
    text.push('\n');
    for (i, c) in summary.ray_classes.iter().enumerate() {
        let _ = writeln!(text, "E_{i} = {}", class_str(c));
    }
    let _ = writeln!(text, "K = {}", class_str(&summary.canonical_class));
    Ok(Output::new(&summary, Value::Null, text, true))
}

fn need_classes(classes: &[PicClass], pic: &PicardGroup) -> Result<(), Failure> {
    if classes.is_empty() {
        return Err(Failure::Input("this command needs at least one --class".into()));
    }
    for c in classes {
        pic.check_class(c)?;
    }
    Ok(())
}

fn cohom(fan: &StackyFan, classes: &[PicClass]) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    need_classes(classes, &pic)?;
    let engine = CohomologyEngine::new(&pic)?;
    let mut results = Vec::new();
    let mut text = String::new();
    for c in classes {
        let table = engine.cohomology(c)?;
        let _ = writeln!(
            text,
            "{}: dims {:?}, euler characteristic {}",
            class_str(c),
            table.dims,
            table.euler_characteristic()
        );
        results.push(CohomResult { class: c.clone(), table });
    }
    Ok(Output::new(&results, Value::Null, text, true))
}

fn acyclic(fan: &StackyFan, classes: &[PicClass]) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    need_classes(classes, &pic)?;
    let engine = CohomologyEngine::new(&pic)?;
    let mut results = Vec::new();
    let mut text = String::new();
    for c in classes {
        let r = AcyclicResult {
            class: c.clone(),
            acyclic: engine.is_acyclic(c)?,
            strongly_acyclic: engine.is_strongly_acyclic_class(c),
        };
        let _ = writeln!(
            text,
            "{}: acyclic {}, strongly acyclic {}",
            class_str(c),
            r.acyclic,
            r.strongly_acyclic
        );
        results.push(r);
    }
    Ok(Output::new(&results, Value::Null, text, true))
}

fn forbidden(fan: &StackyFan) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let engine = CohomologyEngine::new(&pic)?;
    let result = ForbiddenResult {
        non_acyclic: non_acyclic_subsets(fan)?,
        cones: engine.forbidden_cones().to_vec(),
    };
    let mut text = format!(
        "{} non-acyclic subsets, {} forbidden cones\n",
        result.non_acyclic.len(),
        result.cones.len()
    );
    for c in &result.cones {
        let mut gens: Vec<String> = Vec::new();
        for g in c.generators.iter().map(|g| rats(g)) {
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        let _ = writeln!(text, "  I = {}: {} + cone({})", c.subset, rats(&c.apex), gens.join(", "));
    }
    Ok(Output::new(&result, Value::Null, text, true))
}

fn window(fan: &StackyFan, kind: Option<&str>, seed: u64) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let kind = match kind {
        Some(k) => k.parse::<WindowKind>()?,
        None => WindowKind::for_fan(fan)?,
    };
    let window = build_window(&pic, kind)?;
    let shift = generic_shift(&window, seed)?;
    let classes = classes_in(&pic, &shift.p, &window)?;
    let text = format!(
        "{kind} window with {} generators, shift {} (seed {seed}), {} classes\n",
        window.zonotope.generators.len(),
        rats(&shift.p),
        classes.len()
    );
    let result = WindowResult {
        kind,
        window,
        shift,
        classes,
    };
    Ok(Output::new(&result, Value::Null, text, true))
}

fn build(pic: &PicardGroup, seed: u64) -> Result<ExceptionalCollection, Failure> {
    Ok(build_collection_with(pic, seed)?)
}

fn verification_text(report: &VerificationReport) -> String {
    let mut text = format!("verification: {}\n", if report.passed { "passed" } else { "failed" });
    for f in &report.failures {
        let _ = writeln!(text, "  Ext from {} to {}: dims {:?}", f.from, f.to, f.dims);
    }
    if !report.strong_implies_acyclic {
        text.push_str("  a strongly acyclic difference was not acyclic\n");
    }
    text
}

fn collection(fan: &StackyFan, seed: u64) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let c = build(&pic, seed)?;
    let engine = CohomologyEngine::new(&pic)?;
    let verification = verify_strong_exceptional(&engine, &c.classes)?;
    let count_check = c.count_check();
    let mut text = format!("{} classes, count_check: {count_check}\n", c.classes.len());
    for cl in &c.classes {
        let _ = writeln!(text, "  {}", class_str(cl));
    }
    text.push_str(&verification_text(&verification));
    let ok = count_check && verification.passed;
    let witnesses = to_value(&CollectionWitnesses {
        count_check,
        verification,
    });
    Ok(Output::new(&c, witnesses, text, ok))
}

fn verify(fan: &StackyFan, classes: Vec<PicClass>, seed: u64) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let classes = if classes.is_empty() {
        build(&pic, seed)?.classes
    } else {
        need_classes(&classes, &pic)?;
        classes
    };
    let engine = CohomologyEngine::new(&pic)?;
    let report = verify_strong_exceptional(&engine, &classes)?;
    let text = format!("{} classes\n{}", classes.len(), verification_text(&report));
    let ok = report.passed;
    Ok(Output::new(&VerifyResult { classes, report }, Value::Null, text, ok))
}

fn closure_cmd(fan: &StackyFan, classes: Vec<PicClass>, seed: u64) -> Result<Output, Failure> {
    let pic = PicardGroup::new(fan)?;
    let c = build(&pic, seed)?;
    let start = if classes.is_empty() {
        c.classes.clone()
    } else {
        need_classes(&classes, &pic)?;
        classes
    };
    let w = closure_window(&c)?;
    let trace = closure(&pic, &start, &w);
    let known = trace.known();
    let (replay_ok, replay_error) = match replay(&pic, &trace) {
        Ok(set) => (set == known, None),
        Err(e) => (false, Some(e.to_string())),
    };
    let witnesses = ClosureWitnesses {
        replay_ok,
        replay_error,
        known: known.len(),
        target_count: trace.target_count,
    };
    let text = format!(
        "{}: {}/{} classes after {} rounds, replay {}\n",
        if trace.complete { "complete" } else { "incomplete" },
        known.len(),
        trace.target_count,
        trace.rounds,
        if replay_ok { "ok" } else { "failed" }
    );
    let ok = trace.complete && replay_ok;
    Ok(Output::new(&trace, to_value(&witnesses), text, ok))
}

fn figure_cmd(fan: &StackyFan, viewport: Option<&str>, seed: u64, out: Option<&Path>) -> Result<Output, Failure> {
    let viewport = viewport.map(figure::Viewport::parse).transpose()?;
    let pic = PicardGroup::new(fan)?;
    let engine = CohomologyEngine::new(&pic)?;
    let built = build(&pic, seed).and_then(|c| Ok(figure::build_figure(&engine, &c, viewport)?));
    let fig = match built {
        Ok(f) => f,
        Err(Failure::Report(m)) => {
            let text = format!("no figure: {m}\n");
            return Ok(Output::new(&Unsupported { error: m }, Value::Null, text, false));
        }
        Err(e) => return Err(e),
    };
    let svg = figure::render_svg(&fig);
    let text = format!(
        "{}{} polygons, {} wedges, {} class dots, {} collection points\n",
        out.map(|p| format!("wrote {}: ", p.display())).unwrap_or_default(),
        fig.polygons.len(),
        fig.wedges.len(),
        fig.dots.len(),
        fig.collection.len()
    );
    let mut o = Output::new(&fig, Value::Null, text, true);
    o.artifact = Some(svg);
    Ok(o)
}
