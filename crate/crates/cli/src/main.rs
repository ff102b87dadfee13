mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contact_atlas::classify::{self, CensusRange, Torsion};
use contact_atlas::decor;
use contact_atlas::euler;
use contact_atlas::surgery::{self, homology, linking_matrix};
use contact_atlas::{BlockSequence, Error, LutzKind, SurgeryDiagram, TorusKnot};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_DOMAIN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DIAGRAM: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser, Debug)]
#[command(
    name = "contact-atlas",
    version,
    about = "Non-loose torus knots in contact S1xS2",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// m, n, l, t, k_e and the tight-structure counts
    Counts(KnotArgs),
    /// Farey paths and their continued fraction blocks
    Paths(KnotArgs),
    /// Every decoration with its consistency level and Euler class
    Decorations(KnotArgs),
    /// Euler class values and their support by torsion kind
    Euler(KnotArgs),
    /// Full Legendrian and transverse census
    Classify(CensusArgs),
    /// Mountain range geometry, as data or a figure
    Mountain(CensusArgs),
    /// Surgery diagram homology and Euler class
    Surgery(SurgeryArgs),
    /// Euler class after a Lutz twist
    Lutz(LutzArgs),
    /// Representative with -q > p > 0
    Normalize(KnotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Args, Debug, Clone, Serialize)]
struct KnotArgs {
    #[arg(short = 'p', allow_hyphen_values = true)]
    p: i64,
    #[arg(short = 'q', allow_hyphen_values = true)]
    q: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Replace p by the representative of ±p mod 2q in (0, -q)
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
struct CensusArgs {
    #[command(flatten)]
    #[serde(flatten)]
    knot: KnotArgs,
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    tw_min: i64,
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    tw_max: i64,
    /// Largest torsion, a non-negative half-integer such as 3/2 or 1.5
    #[arg(long, default_value = "2")]
    tor_max: String,
    /// Height at which figures cut the infinite rays
    #[arg(long, default_value_t = 3)]
    clip: i64,
}

#[derive(Args, Debug, Clone, Serialize)]
struct SurgeryArgs {
    #[arg(
        short = 'p',
        allow_hyphen_values = true,
        required_unless_present = "input"
    )]
    p: Option<i64>,
    #[arg(
        short = 'q',
        allow_hyphen_values = true,
        required_unless_present = "input"
    )]
    q: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    normalize: bool,
    /// Diagram JSON file (components + linking matrix)
    #[arg(long, conflicts_with_all = ["p", "q"])]
    input: Option<String>,
    /// Positive edges per block, e.g. 1,0,2,1; selects the decorated tw = 0 diagram
    #[arg(long, value_delimiter = ',')]
    positives: Option<Vec<usize>>,
    /// Surgery coefficient r/s on the knot, to name the resulting manifold
    #[arg(long)]
    coefficient: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum LutzArg {
    HalfPlus,
    HalfMinus,
    Full,
}

#[derive(Args, Debug, Clone, Serialize)]
struct LutzArgs {
    #[arg(short = 'q', allow_hyphen_values = true)]
    q: i64,
    #[arg(long, allow_hyphen_values = true)]
    euler: i64,
    #[arg(long, value_enum)]
    kind: LutzArg,
    #[arg(long, default_value = "0")]
    tor: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    tool_version: &'static str,
    input: Value,
    payload: &'a Value,
    warnings: &'a [String],
}

/// What a subcommand hands back: data, plus optional figures.
struct Output {
    payload: Value,
    warnings: Vec<String>,
    ascii: Option<String>,
    svg: Option<String>,
}

impl Output {
    fn data(payload: Value, warnings: Vec<String>) -> Self {
        Output {
            payload,
            warnings,
            ascii: None,
            svg: None,
        }
    }
}

enum Failure {
    Domain(Error),
    Diagram(String, String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Diagram(_) => Failure::Diagram(e.kind().to_string(), e.to_string()),
            e => Failure::Domain(e),
        }
    }
}

fn to_value<S: Serialize>(v: &S) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn resolve(
    p: i64,
    q: i64,
    normalize: bool,
    warnings: &mut Vec<String>,
) -> Result<TorusKnot, Failure> {
    if !normalize {
        return Ok(TorusKnot::from_i64(p, q)?);
    }
    let knot = classify::normalize(p, q)?;
    if *knot.p() != p {
        warnings.push(format!("normalized ({p}, {q}) to {knot}"));
    }
    Ok(knot)
}

fn sequence(a: &KnotArgs, warnings: &mut Vec<String>) -> Result<BlockSequence, Failure> {
    let knot = resolve(a.p, a.q, a.normalize, warnings)?;
    Ok(BlockSequence::new(&knot)?)
}

fn census_range(a: &CensusArgs) -> Result<CensusRange, Failure> {
    let tor_max: Torsion = a
        .tor_max
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    if a.tw_min > a.tw_max {
        return Err(Failure::Usage(format!(
            "--tw-min {} exceeds --tw-max {}",
            a.tw_min, a.tw_max
        )));
    }
    Ok(CensusRange {
        tw_min: a.tw_min,
        tw_max: a.tw_max,
        tor_max,
    })
}

fn cmd_counts(a: &KnotArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let seq = sequence(a, &mut w)?;
    let counts = classify::counts(&seq)?;
    let tight = classify::tight_counts(seq.knot())?;
    let payload =
        json!({ "pq": [seq.knot().p(), seq.knot().q()], "counts": counts, "tight_counts": tight });
    Ok(Output::data(payload, w))
}

fn cmd_paths(a: &KnotArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let seq = sequence(a, &mut w)?;
    let knot = seq.knot();
    let verts =
        |vs: &[contact_atlas::Slope]| vs.iter().map(ToString::to_string).collect::<Vec<_>>();
    let payload = json!({
        "pq": [knot.p(), knot.q()],
        "cw": knot.cw()?.to_string(),
        "acw": knot.acw()?.to_string(),
        "a_expansion": knot.a_expansion()?.to_string(),
        "b_expansion": knot.b_expansion()?.to_string(),
        "p1": verts(seq.p1().vertices()),
        "p2": verts(seq.p2().vertices()),
        "sequence": seq,
    });
    Ok(Output::data(payload, w))
}

fn cmd_decorations(a: &KnotArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let seq = sequence(a, &mut w)?;
    let mut rows = Vec::new();
    for d in decor::enumerate(&seq) {
        let level = decor::consistency_level(&seq, &d)?;
        let e = euler::euler_class(&seq, &d)?;
        let side = euler::side_of(&seq, &d).ok();
        rows.push(json!({
            "positives": d.positives(),
            "level": level,
            "totally_2_inconsistent": decor::is_totally_k_inconsistent(&seq, &d, 2)?,
            "euler": e,
            "side": side,
        }));
    }
    let payload = json!({
        "pq": [seq.knot().p(), seq.knot().q()],
        "block_lengths": seq.lengths(),
        "m_values": decor::m_values(&seq)?,
        "decorations": rows,
    });
    Ok(Output::data(payload, w))
}

fn cmd_euler(a: &KnotArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let seq = sequence(a, &mut w)?;
    let values: Vec<Value> = euler::euler_value_set(&seq)?
        .into_iter()
        .map(|e| {
            if e == 0 {
                json!({ "e": e, "note": "tight (ξ_std)" })
            } else {
                json!({ "e": e })
            }
        })
        .collect();
    let support = json!({
        "zero": euler::euler_support(&seq, euler::TorsionKind::Zero)?,
        "integer": euler::euler_support(&seq, euler::TorsionKind::Integer)?,
        "half_integer": euler::euler_support(&seq, euler::TorsionKind::HalfInteger)?,
    });
    let payload = json!({
        "pq": [seq.knot().p(), seq.knot().q()],
        "values": values,
        "k_e": euler::k_e(&seq)?,
        "totally_2_inconsistent_values": euler::totally2_euler_set(&seq)?,
        "support": support,
    });
    Ok(Output::data(payload, w))
}

fn cmd_classify(a: &CensusArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let knot = resolve(a.knot.p, a.knot.q, a.knot.normalize, &mut w)?;
    let report = classify::classify(&knot, census_range(a)?)?;
    Ok(Output::data(to_value(&report), w))
}

fn cmd_mountain(a: &CensusArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let seq = sequence(&a.knot, &mut w)?;
    let range = census_range(a)?;
    let mountain = classify::mountain_range(&seq)?;
    let records = classify::legendrian_census(&seq, &mountain, &range)?;
    let view = render::View {
        clip: a.clip.min(range.tw_max),
        tw_min: range.tw_min,
    };
    let ascii = render::ascii(&mountain, &view, render::color_enabled());
    let svg = render::svg(&mountain, &view);
    let payload = json!({
        "pq": [seq.knot().p(), seq.knot().q()],
        "mountain": mountain,
        "legendrian": records.iter().filter(|r| r.tor == Torsion::ZERO).collect::<Vec<_>>(),
    });
    Ok(Output {
        payload,
        warnings: w,
        ascii: Some(ascii),
        svg: Some(svg),
    })
}

fn cmd_surgery(a: &SurgeryArgs) -> Result<Output, Failure> {
    let mut w = Vec::new();
    let mut payload = serde_json::Map::new();
    let (diagram, path_euler) = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Failure::Diagram(
                    "malformed_diagram".into(),
                    format!("cannot read {path}: {e}"),
                )
            })?;
            (SurgeryDiagram::from_json(&text)?, None)
        }
        None => {
            let (p, q) = (
                a.p.expect("clap enforces -p"),
                a.q.expect("clap enforces -q"),
            );
            let knot = resolve(p, q, a.normalize, &mut w)?;
            payload.insert("pq".into(), json!([knot.p(), knot.q()]));
            if let Some(c) = &a.coefficient {
                let (r, s) = parse_coefficient(c)?;
                let m = classify::surgered_manifold(&knot, r, s)?;
                payload.insert("surgered_manifold".into(), to_value(&m));
            }
            match &a.positives {
                Some(pos) => {
                    let seq = BlockSequence::new(&knot)?;
                    let dec = decor::Decoration::new(&seq, pos.clone())?;
                    let e = euler::euler_class(&seq, &dec)?;
                    (surgery::decorated_diagram(&seq, &dec)?, Some(e))
                }
                None => (surgery::tw0_diagram(&knot)?, None),
            }
        }
    };
    let expanded = surgery::dg_expand(&diagram)?;
    let h = homology(&linking_matrix(&expanded)?)?;
    payload.insert("diagram".into(), to_value(&expanded));
    payload.insert("homology".into(), to_value(&h));
    match surgery::pd_euler(&expanded) {
        Ok(e) => {
            payload.insert("pd_euler".into(), json!(e));
        }
        Err(e @ (Error::UnassignedSlots(_) | Error::FreeRank(_))) => {
            w.push(format!("Euler class not computed: {e}"));
        }
        Err(e) => return Err(e.into()),
    }
    if let Some(e) = path_euler {
        payload.insert("path_euler".into(), json!(e));
    }
    Ok(Output::data(Value::Object(payload), w))
}

/// `r/s` or `r`; `s = 0` is allowed here, unlike contact coefficients.
fn parse_coefficient(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("surgery coefficient must be r/s, got {text:?}"));
    let (r, s) = text.split_once('/').unwrap_or((text, "1"));
    Ok((
        r.trim().parse().map_err(|_| bad())?,
        s.trim().parse().map_err(|_| bad())?,
    ))
}

fn cmd_lutz(a: &LutzArgs) -> Result<Output, Failure> {
    let tor: Torsion = a
        .tor
        .parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let (kind, after) = match a.kind {
        LutzArg::HalfPlus => (LutzKind::HalfOnPlusSide, tor.half_twist()),
        LutzArg::HalfMinus => (LutzKind::HalfOnMinusSide, tor.half_twist()),
        LutzArg::Full => (LutzKind::Full, tor.full_twist()),
    };
    if a.q >= 0 {
        return Err(Error::PositiveQ(a.q.to_string()).into());
    }
    let e = surgery::lutz(&a.euler, &a.q, kind)?;
    let payload = json!({ "q": a.q, "kind": kind, "euler_before": a.euler, "euler_after": e, "tor_before": tor, "tor_after": after });
    Ok(Output::data(payload, Vec::new()))
}

fn cmd_normalize(a: &KnotArgs) -> Result<Output, Failure> {
    let knot = classify::normalize(a.p, a.q)?;
    Ok(Output::data(
        json!({ "p": knot.p(), "q": knot.q() }),
        Vec::new(),
    ))
}

fn run(cli: &Cli) -> Result<(Value, Format, Output), Failure> {
    let (name, input, format) = match &cli.command {
        Command::Counts(a) => ("counts", to_value(a), a.format),
        Command::Paths(a) => ("paths", to_value(a), a.format),
        Command::Decorations(a) => ("decorations", to_value(a), a.format),
        Command::Euler(a) => ("euler", to_value(a), a.format),
        Command::Classify(a) => ("classify", to_value(a), a.knot.format),
        Command::Mountain(a) => ("mountain", to_value(a), a.knot.format),
        Command::Surgery(a) => ("surgery", to_value(a), a.format),
        Command::Lutz(a) => ("lutz", to_value(a), a.format),
        Command::Normalize(a) => ("normalize", to_value(a), a.format),
    };
    if format == Format::Svg && name != "mountain" {
        return Err(Failure::Usage(format!(
            "svg output is only available for mountain, not {name}"
        )));
    }
    let out = match &cli.command {
        Command::Counts(a) => cmd_counts(a),
        Command::Paths(a) => cmd_paths(a),
        Command::Decorations(a) => cmd_decorations(a),
        Command::Euler(a) => cmd_euler(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Mountain(a) => cmd_mountain(a),
        Command::Surgery(a) => cmd_surgery(a),
        Command::Lutz(a) => cmd_lutz(a),
        Command::Normalize(a) => cmd_normalize(a),
    }?;
    let mut input = input;
    if let Value::Object(m) = &mut input {
        m.insert("subcommand".into(), json!(name));
        m.remove("format");
    }
    Ok((input, format, out))
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn emit(text: &str) -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = writeln!(stdout, "{text}");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|info| {
        eprintln!("{}", error_json("internal", &info.to_string()));
    }));
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    eprintln!("{}", error_json("usage", e.render().to_string().trim()));
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    match result {
        Err(_) => ExitCode::from(EXIT_INTERNAL),
        Ok(Err(Failure::Domain(e))) => {
            eprintln!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(EXIT_DOMAIN)
        }
        Ok(Err(Failure::Diagram(kind, msg))) => {
            eprintln!("{}", error_json(&kind, &msg));
            ExitCode::from(EXIT_DIAGRAM)
        }
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("{}", error_json("usage", &msg));
            ExitCode::from(EXIT_USAGE)
        }
        Ok(Ok((input, format, out))) => match format {
            Format::Json => {
                let env = ReportEnvelope {
                    tool_version: env!("CARGO_PKG_VERSION"),
                    input,
                    payload: &out.payload,
                    warnings: &out.warnings,
                };
                emit(&serde_json::to_string_pretty(&env).expect("envelope serializes"))
            }
            Format::Ascii => {
                for warning in &out.warnings {
                    eprintln!("warning: {warning}");
                }
                let text = out.ascii.unwrap_or_else(|| render::text(&out.payload));
                emit(text.trim_end())
            }
            Format::Svg => emit(out.svg.as_deref().unwrap_or_default().trim_end()),
        },
    }
}
