//! Command-line front end: Vietoris-Rips construction, persistence,
//! Morse complexity profiles, spike detection, and the desk-scale exact
//! oracles, over the filtration file format.
//!
//! Machine output goes to `--output` when given (human summary on stdout),
//! otherwise to stdout (summary on stderr). Exit codes: 0 success, 2 parse
//! errors, 3 validation errors, 1 anything else.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use morseprof::{
    assemble_profile, catalog, collapse_search, detect_spikes, exact_min_morse,
    greedy_incremental, morse_complexity_profile, reduce, vietoris_rips, ClosureMode,
    CollapseCertificate, Filtration, FiltrationError, MorseError, PointCloud, ProfileReport,
    RipsScale, DEFAULT_EXACT_CAP, DEFAULT_NODE_BUDGET,
};


#[derive(Parser)]
#[command(name = "morseprof", version, about = "Morse complexity profiles and persistent homology of filtered simplicial complexes", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a Vietoris-Rips filtration from a point cloud or distance matrix.
    Rips(RipsArgs),
    /// Compute the Morse complexity profile, barcode, and spikes.
    Profile(AnalyzeArgs),
    /// Report Morse spikes only.
    Spikes(AnalyzeArgs),
    /// Compute the persistence barcode.
    Homology(AnalyzeArgs),
    /// Run the exhaustive collapsibility search on the full complex.
    Collapse(CollapseArgs),
    /// Run the exact minimal-Morse search on the full complex.
    ExactMorse(ExactArgs),
    /// Write a named example filtration and its expected results.
    Example(ExampleArgs),
}

#[derive(Args)]
struct RipsArgs {
    /// Point-cloud CSV (one point per row) or, with --distance-matrix,
    /// a full symmetric matrix (one row per line).
    input: PathBuf,
    /// Treat the input as a distance matrix instead of coordinates.
    #[arg(long)]
    distance_matrix: bool,
    /// Largest simplex dimension to build.
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    /// Comma-separated grade thresholds, or "all" to grade each simplex
    /// by its diameter.
    #[arg(long, default_value = "all")]
    thresholds: String,
    /// Write the filtration file here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Filtration file to read.
    input: Option<PathBuf>,
    /// Use a built-in example instead of a file: point, circle, dunce-hat,
    /// dunce-hat-filtration, pentagon-rips.
    #[arg(long, conflicts_with = "input")]
    catalog: Option<String>,
    /// Insert missing faces at the smallest grade of their listed cofaces.
    #[arg(long)]
    auto_close: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Size cap under which levels get exact minimal Morse numbers.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write machine output here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CollapseArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Node budget for the backtracking search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Refuse complexes with more simplices than this.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    simplex_cap: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    /// One of: point, pentagon, dunce-hat (or any catalog name).
    name: String,
    /// Directory receiving <name>.filt and <name>.expected.json.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Errors mapped to process exit codes.
enum CliError {
    Parse(String),
    Validation(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Io(m) => m,
        }
    }
}

impl From<FiltrationError> for CliError {
    fn from(e: FiltrationError) -> Self {
        match e {
            FiltrationError::Parse { .. } => CliError::Parse(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rips(args) => cmd_rips(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Spikes(args) => cmd_spikes(args),
        Command::Homology(args) => cmd_homology(args),
        Command::Collapse(args) => cmd_collapse(args),
        Command::ExactMorse(args) => cmd_exact_morse(args),
        Command::Example(args) => cmd_example(args),
    }
}

/// Reads numeric rows, accepting comma or whitespace separators.
fn parse_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(|c: char| c == ',' || c.is_whitespace()) {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let value: f64 = field.parse().map_err(|_| {
                CliError::Parse(format!("line {}: bad number {field:?}", lineno + 1))
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn emit(output: &Option<PathBuf>, machine: &str, summary: &str) -> Result<(), CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, machine)?;
            println!("{summary}");
            println!("wrote {}", path.display());
        }
        None => {
            print!("{machine}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn load_filtration(args: &InputArgs) -> Result<Filtration, CliError> {
    let mode = if args.auto_close {
        ClosureMode::AutoClose
    } else {
        ClosureMode::Strict
    };
    let filtration = match (&args.input, &args.catalog) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            Filtration::parse(&text, mode)?
        }
        (None, Some(name)) => catalog(name)?,
        _ => {
            return Err(CliError::Validation(
                "exactly one input source: a filtration file or --catalog".into(),
            ))
        }
    };
    if filtration.is_empty() {
        return Err(CliError::Validation("filtration is empty".into()));
    }
    Ok(filtration)
}

fn cmd_rips(args: RipsArgs) -> Result<(), CliError> {
    let rows = parse_rows(&args.input)?;
    let cloud = if args.distance_matrix {
        PointCloud::from_distance_matrix(rows)?
    } else {
        PointCloud::from_points(rows)?
    };
    let scale = if args.thresholds.trim() == "all" {
        RipsScale::AllDistances
    } else {
        let mut thresholds = Vec::new();
        for field in args.thresholds.split(',') {
            let t: f64 = field
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("bad threshold {:?}", field.trim())))?;
            thresholds.push(t);
        }
        RipsScale::Thresholds(thresholds)
    };
    let filtration = vietoris_rips(&cloud, args.max_dim, &scale)?;
    let summary = format!(
        "N = {} simplices over {} levels (max dim {})",
        filtration.len(),
        filtration.num_levels(),
        filtration.complex().dim()
    );
    emit(&args.output, &filtration.to_file_string(), &summary)
}

fn profile_pipeline(
    filtration: &Filtration,
    exact_cap: usize,
) -> (ProfileReport, String) {
    let t0 = Instant::now();
    let pairing = reduce(filtration);
    let persistence_time = t0.elapsed();
    let t1 = Instant::now();
    let greedy = greedy_incremental(filtration);
    let matching_time = t1.elapsed();
    let profile = assemble_profile(filtration, &pairing, &greedy, exact_cap)
        .expect("pipeline inputs are consistent");
    let spikes = detect_spikes(&profile, &pairing).expect("pipeline inputs are consistent");
    let total = t0.elapsed();
    let mut summary = format!(
        "levels: {}  simplices: {}  spikes: {}\n",
        profile.levels.len(),
        filtration.len(),
        spikes.spikes.len()
    );
    write!(
        summary,
        "phase times: persistence {:.3} ms, matching {:.3} ms, total {:.3} ms",
        persistence_time.as_secs_f64() * 1e3,
        matching_time.as_secs_f64() * 1e3,
        total.as_secs_f64() * 1e3
    )
    .unwrap();
    (ProfileReport::new(profile, spikes), summary)
}

fn cmd_profile(args: AnalyzeArgs) -> Result<(), CliError> {
    let filtration = load_filtration(&args.input)?;
    let (report, summary) = profile_pipeline(&filtration, args.exact_cap);
    let machine = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Combined<'a> {
                profile: &'a ProfileReport,
                barcode: serde_json::Value,
            }
            let pairing = reduce(&filtration);
            let barcode: serde_json::Value =
                serde_json::from_str(&pairing.barcode_json()).expect("own json");
            let mut s = serde_json::to_string_pretty(&Combined {
                profile: &report,
                barcode,
            })
            .expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(),
    };
    emit(&args.output, &machine, &summary)
}

fn cmd_spikes(args: AnalyzeArgs) -> Result<(), CliError> {
    let filtration = load_filtration(&args.input)?;
    let pairing = reduce(&filtration);
    let greedy = greedy_incremental(&filtration);
    let profile = assemble_profile(&filtration, &pairing, &greedy, args.exact_cap)
        .expect("pipeline inputs are consistent");
    let spikes = detect_spikes(&profile, &pairing).expect("pipeline inputs are consistent");
    let summary = format!("{} spike(s)", spikes.spikes.len());
    let machine = match args.format {
        Format::Json => {
            let mut s = spikes.to_json();
            s.push('\n');
            s
        }
        Format::Csv => spikes.to_csv(),
    };
    emit(&args.output, &machine, &summary)
}

fn cmd_homology(args: AnalyzeArgs) -> Result<(), CliError> {
    let filtration = load_filtration(&args.input)?;
    let pairing = reduce(&filtration);
    let machine = match args.format {
        Format::Json => {
            let mut s = pairing.barcode_json();
            s.push('\n');
            s
        }
        Format::Csv => pairing.barcode_csv(),
    };
    let summary = format!(
        "{} finite pair(s), {} essential class(es)",
        pairing.pairs().len(),
        pairing.essentials().len()
    );
    emit(&args.output, &machine, &summary)
}

fn cmd_collapse(args: CollapseArgs) -> Result<(), CliError> {
    let filtration = load_filtration(&args.input)?;
    let complex = filtration.complex();
    match collapse_search(complex, args.node_budget) {
        Ok(cert) => {
            let summary = match &cert {
                CollapseCertificate::Collapsible { pairs } => {
                    format!("collapsible in {} elementary collapses", pairs.len())
                }
                CollapseCertificate::NotCollapsible { states_visited } => {
                    format!("not collapsible (definite; {states_visited} states visited)")
                }
            };
            let mut machine = cert.to_json();
            machine.push('\n');
            emit(&args.output, &machine, &summary)
        }
        Err(MorseError::BudgetExhausted { states_visited }) => {
            #[derive(Serialize)]
            struct Inconclusive {
                collapsible: Option<bool>,
                inconclusive: bool,
                states_visited: u64,
            }
            let mut machine = serde_json::to_string_pretty(&Inconclusive {
                collapsible: None,
                inconclusive: true,
                states_visited,
            })
            .expect("serializes");
            machine.push('\n');
            emit(
                &args.output,
                &machine,
                &format!("inconclusive: budget exhausted after {states_visited} states"),
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_exact_morse(args: ExactArgs) -> Result<(), CliError> {
    let filtration = load_filtration(&args.input)?;
    let complex = filtration.complex();
    let result = exact_min_morse(complex, args.simplex_cap)?;
    #[derive(Serialize)]
    struct Out {
        total: usize,
        per_dim: Vec<usize>,
        pairs: Vec<(usize, usize)>,
        critical: Vec<usize>,
    }
    let mut machine = serde_json::to_string_pretty(&Out {
        total: result.total,
        per_dim: result.per_dim.clone(),
        pairs: result.witness.pairs(),
        critical: result.witness.critical(),
    })
    .expect("serializes");
    machine.push('\n');
    let summary = format!("M = {}, per-dim minima {:?}", result.total, result.per_dim);
    emit(&args.output, &machine, &summary)
}

/// Expected-results schema written next to each example filtration.
#[derive(Serialize)]
struct Expected {
    name: String,
    greedy: Vec<usize>,
    /// Exact minimal Morse numbers per level when every level fits under
    /// the example's cap, else null.
    profile: Option<Vec<usize>>,
    spikes: Vec<usize>,
}

fn cmd_example(args: ExampleArgs) -> Result<(), CliError> {
    let (catalog_name, cap) = match args.name.as_str() {
        "point" => ("point", 25),
        "pentagon" | "pentagon-rips" => ("pentagon-rips", 64),
        "dunce-hat" | "dunce-hat-filtration" => ("dunce-hat-filtration", 128),
        "circle" => ("circle", 25),
        other => {
            return Err(CliError::Parse(format!(
                "unknown example {other:?} (try point, pentagon, dunce-hat)"
            )))
        }
    };
    let filtration = catalog(catalog_name).expect("catalog names are valid");
    let pairing = reduce(&filtration);
    let profile = morse_complexity_profile(&filtration, cap);
    let spikes = detect_spikes(&profile, &pairing).expect("pipeline inputs are consistent");
    let exact: Option<Vec<usize>> = profile
        .exact_totals()
        .into_iter()
        .collect::<Option<Vec<_>>>();
    let expected = Expected {
        name: args.name.clone(),
        greedy: profile.greedy_totals(),
        profile: exact,
        spikes: spikes.spikes.iter().map(|s| s.level).collect(),
    };

    std::fs::create_dir_all(&args.out_dir)?;
    let filt_path = args.out_dir.join(format!("{}.filt", args.name));
    let expected_path = args.out_dir.join(format!("{}.expected.json", args.name));
    std::fs::write(&filt_path, filtration.to_file_string())?;
    let mut expected_json = serde_json::to_string_pretty(&expected).expect("serializes");
    expected_json.push('\n');
    std::fs::write(&expected_path, expected_json)?;
    println!(
        "wrote {} and {}",
        filt_path.display(),
        expected_path.display()
    );
    Ok(())
}
