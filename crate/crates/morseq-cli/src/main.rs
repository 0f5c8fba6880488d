//! Command line front end for Morse sequences on simplicial complexes.
//!
//! Every command reads a complex from a facet-list file, optionally runs a
//! construction scheme or loads a stored sequence, and emits a single JSON
//! report on standard output. Diagnostics go to standard error. The exit
//! code is 0 on success, 1 when a domain check fails, and 2 on usage or
//! input errors. Identical invocations produce byte-identical output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morseq::flow::{
    coextension_map, composite_walk_defect, extension_chain_map_defect, extension_complex,
    extension_map, flow_decomposition_defect, flow_fixed_point_reports, parity_defect,
    retraction_defect, FlowOperator,
};
use morseq::functions::{
    basic_function_to_sequence, canonical_morse_function, field_to_morse_sequence,
    is_basic_function, is_morse_function_on_sequence,
};
use morseq::reference::{
    chain_map_defect, cochain_map_defect, coreference_map, critical_complex, reference_map,
    CriticalComplex,
};
use morseq::{
    io, Chain, Complex, Error, Frame, MorseSequence, PresentedChainComplex, Tiebreak,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "morseq",
    version,
    about = "Morse sequences on finite simplicial complexes",
    after_help = "Complexes are facet lists: one facet per line as whitespace-separated \
                  vertex numbers, with # comments. Reports are single JSON documents on \
                  standard output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a complex and report its face counts
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Write the normalized facet list to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a construction scheme and report the sequence
    Morse {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Write the sequence in JSON lines to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Betti numbers of the complex, its critical complex, and its
    /// extension complex
    Betti {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reference and coreference maps with the critical complex
    Reference {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Stabilized gradient flow of every face
    Flow {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Convert between vector fields and Morse sequences
    ConvertVf {
        #[command(flatten)]
        input: InputArgs,
        /// Vector field JSON file to turn into a sequence
        #[arg(long, conflicts_with = "sequence")]
        field: Option<PathBuf>,
        /// Stored sequence to turn into a vector field
        #[arg(long)]
        sequence: Option<PathBuf>,
        /// Write the converted artifact to a file
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every invariant check and report a per-check breakdown
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Export the gradient field or the extension tables
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the export to a file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Facet-list file describing the complex
    input: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Construction scheme
    #[arg(long, value_enum, default_value_t = Scheme::IncMax)]
    scheme: Scheme,
    /// Tie-break policy of the scheme
    #[arg(long, value_enum, default_value_t = TieBreak::Lex)]
    tiebreak: TieBreak,
    /// Seed for the seeded tie-break
    #[arg(long)]
    seed: Option<u64>,
    /// Replay a stored JSON-lines sequence instead of running a scheme
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    /// Maximal increasing: fill only when no expansion applies
    IncMax,
    /// Maximal decreasing: perforate only when no collapse applies
    DecMax,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieBreak {
    /// Smallest candidate first
    Lex,
    /// Reproducible random choice driven by --seed
    Seeded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Extension and coextension tables as JSON
    Json,
    /// Gradient field as a DOT digraph
    Dot,
    /// Normalized facet list
    Text,
}

/// A command failure with its exit code.
enum Failure {
    /// Exit 2: bad flags or unreadable input.
    Usage(String),
    /// Exit 1: a domain check failed.
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("morseq: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build { input, output } => cmd_build(&input, output.as_deref()),
        Command::Morse { input, run, output } => cmd_morse(&input, &run, output.as_deref()),
        Command::Betti { input, run } => cmd_betti(&input, &run),
        Command::Reference { input, run } => cmd_reference(&input, &run),
        Command::Flow { input, run } => cmd_flow(&input, &run),
        Command::ConvertVf {
            input,
            field,
            sequence,
            output,
        } => cmd_convert_vf(&input, field.as_deref(), sequence.as_deref(), output.as_deref()),
        Command::Check { input, run } => cmd_check(&input, &run),
        Command::Export {
            input,
            run,
            format,
            output,
        } => cmd_export(&input, &run, format, output.as_deref()),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_complex(input: &InputArgs) -> Result<Complex, Failure> {
    let text = read_file(&input.input)?;
    io::parse_complex(&text).map_err(|e| {
        Failure::Usage(format!("{}: {e}", input.input.display()))
    })
}

/// Builds or loads the sequence selected by the run flags.
fn obtain_sequence(k: &Complex, run: &RunArgs) -> Result<MorseSequence, Failure> {
    if let Some(path) = &run.sequence {
        let text = read_file(path)?;
        return io::parse_sequence(&text, k).map_err(|e| match e {
            Error::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
            other => Failure::Domain(format!("{}: {other}", path.display())),
        });
    }
    let tiebreak = match (run.tiebreak, run.seed) {
        (TieBreak::Lex, None) => Tiebreak::Lex,
        (TieBreak::Lex, Some(_)) => {
            return Err(Failure::Usage(
                "--seed needs --tiebreak seeded".into(),
            ));
        }
        (TieBreak::Seeded, Some(seed)) => Tiebreak::Seeded(seed),
        (TieBreak::Seeded, None) => {
            return Err(Failure::Usage(
                "--tiebreak seeded needs --seed".into(),
            ));
        }
    };
    Ok(match run.scheme {
        Scheme::IncMax => morseq::increasing_scheme(k, tiebreak),
        Scheme::DecMax => morseq::decreasing_scheme(k, tiebreak),
    })
}

/// Everything the report commands derive from one sequence.
struct Derived {
    seq: MorseSequence,
    reference: Frame,
    coreference: Frame,
    critical: CriticalComplex,
    extension: Frame,
    coextension: Frame,
}

fn derive(seq: MorseSequence) -> Result<Derived, Failure> {
    let reference = reference_map(&seq);
    let coreference = coreference_map(&seq);
    let critical = critical_complex(&seq, &reference, &coreference)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    let extension = extension_map(&seq, &coreference);
    let coextension = coextension_map(&seq, &reference);
    Ok(Derived {
        seq,
        reference,
        coreference,
        critical,
        extension,
        coextension,
    })
}

fn print_report(report: &Value) {
    println!("{:#}", report);
}

fn chain_json(c: &Chain) -> Value {
    Value::Array(
        c.iter()
            .map(|s| serde_json::to_value(s).expect("simplices serialize"))
            .collect(),
    )
}

fn frame_json(f: &Frame) -> Value {
    let mut table = serde_json::Map::new();
    for (key, value) in f.iter() {
        table.insert(key.to_string(), chain_json(value));
    }
    Value::Object(table)
}

fn sequence_json(seq: &MorseSequence) -> Value {
    let items: Vec<Value> = io::format_sequence(seq)
        .lines()
        .map(|line| serde_json::from_str(line).expect("items serialize"))
        .collect();
    Value::Array(items)
}

fn cmd_build(input: &InputArgs, output: Option<&Path>) -> Result<(), Failure> {
    let k = load_complex(input)?;
    if let Some(path) = output {
        write_file(path, &io::format_complex(&k))?;
    }
    let facets = k.facets();
    print_report(&json!({
        "dimension": k.dim(),
        "face_counts": k.face_counts(),
        "faces": k.face_count(),
        "facets": facets.len(),
        "euler_characteristic": k.euler_characteristic(),
    }));
    Ok(())
}

fn cmd_morse(input: &InputArgs, run: &RunArgs, output: Option<&Path>) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let seq = obtain_sequence(&k, run)?;
    if let Some(path) = output {
        write_file(path, &io::format_sequence(&seq))?;
    }
    let counts = seq.critical_counts();
    let betti = PresentedChainComplex::of_complex(&k).betti_numbers();
    let satisfied = betti
        .iter()
        .enumerate()
        .all(|(p, b)| counts.get(p).copied().unwrap_or(0) >= *b);
    print_report(&json!({
        "items": seq.len(),
        "critical_counts": counts,
        "betti": betti,
        "morse_inequalities": satisfied,
        "sequence": sequence_json(&seq),
    }));
    if satisfied {
        Ok(())
    } else {
        Err(Failure::Domain("critical counts fall below the Betti numbers".into()))
    }
}

fn cmd_betti(input: &InputArgs, run: &RunArgs) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let derived = derive(obtain_sequence(&k, run)?)?;
    let of_complex = PresentedChainComplex::of_complex(&k).betti_numbers();
    let of_critical = derived.critical.betti_numbers();
    let of_extension = extension_complex(&derived.seq, &derived.reference, &derived.extension)
        .map_err(|e| Failure::Domain(e.to_string()))?
        .betti_numbers();
    let width = of_complex.len().max(of_critical.len()).max(of_extension.len());
    let pad = |v: &[usize]| {
        let mut v = v.to_vec();
        v.resize(width, 0);
        v
    };
    let agree = pad(&of_complex) == pad(&of_critical) && pad(&of_complex) == pad(&of_extension);
    print_report(&json!({
        "betti": of_complex,
        "critical_complex": of_critical,
        "extension_complex": of_extension,
        "agree": agree,
    }));
    if agree {
        Ok(())
    } else {
        Err(Failure::Domain("the three Betti computations disagree".into()))
    }
}

fn cmd_reference(input: &InputArgs, run: &RunArgs) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let derived = derive(obtain_sequence(&k, run)?)?;
    print_report(&json!({
        "critical_counts": derived.seq.critical_counts(),
        "reference": frame_json(&derived.reference),
        "coreference": frame_json(&derived.coreference),
        "critical_complex": io::presented_complex_json(derived.critical.presented()),
    }));
    Ok(())
}

fn cmd_flow(input: &InputArgs, run: &RunArgs) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let derived = derive(obtain_sequence(&k, run)?)?;
    let flow = FlowOperator::new(&derived.seq);
    let mut forward = serde_json::Map::new();
    let mut backward = serde_json::Map::new();
    for nu in k.faces() {
        let single = Chain::from(nu.clone());
        let (stable, iterations) = flow
            .stabilize(&single)
            .map_err(|e| Failure::Domain(e.to_string()))?;
        forward.insert(
            nu.to_string(),
            json!({ "stable": chain_json(&stable), "iterations": iterations }),
        );
        let (costable, iterations) = flow
            .costabilize(&single)
            .map_err(|e| Failure::Domain(e.to_string()))?;
        backward.insert(
            nu.to_string(),
            json!({ "stable": chain_json(&costable), "iterations": iterations }),
        );
    }
    let defects = flow_decomposition_defect(
        &derived.seq,
        &derived.reference,
        &derived.coreference,
        &derived.extension,
        &derived.coextension,
    )
    .map_err(|e| Failure::Domain(e.to_string()))?;
    print_report(&json!({
        "flow": Value::Object(forward),
        "coflow": Value::Object(backward),
        "decomposition_defects": defects,
    }));
    if defects == 0 {
        Ok(())
    } else {
        Err(Failure::Domain(format!(
            "the stabilized flow disagrees with the extension maps on {defects} faces"
        )))
    }
}

fn cmd_convert_vf(
    input: &InputArgs,
    field: Option<&Path>,
    sequence: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let k = load_complex(input)?;
    match (field, sequence) {
        (Some(field_path), None) => {
            let text = read_file(field_path)?;
            let field = io::parse_field(&text, &k).map_err(|e| match e {
                Error::Parse { .. } => Failure::Usage(format!("{}: {e}", field_path.display())),
                other => Failure::Domain(format!("{}: {other}", field_path.display())),
            })?;
            let seq = field_to_morse_sequence(&k, &field)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            if let Some(path) = output {
                write_file(path, &io::format_sequence(&seq))?;
            }
            print_report(&json!({
                "converted": "field to sequence",
                "items": seq.len(),
                "critical_counts": seq.critical_counts(),
                "sequence": sequence_json(&seq),
            }));
            Ok(())
        }
        (None, Some(sequence_path)) => {
            let run = RunArgs {
                scheme: Scheme::IncMax,
                tiebreak: TieBreak::Lex,
                seed: None,
                sequence: Some(sequence_path.to_path_buf()),
            };
            let seq = obtain_sequence(&k, &run)?;
            let field = seq.gradient_vector_field();
            let rendered = io::format_field(&field);
            if let Some(path) = output {
                write_file(path, &rendered)?;
            }
            print_report(&json!({
                "converted": "sequence to field",
                "pairs": field.len(),
                "critical_counts": seq.critical_counts(),
                "field": serde_json::from_str::<Value>(&rendered).expect("round trip"),
            }));
            Ok(())
        }
        _ => Err(Failure::Usage(
            "convert-vf needs exactly one of --field or --sequence".into(),
        )),
    }
}

fn cmd_check(input: &InputArgs, run: &RunArgs) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let mut checks: Vec<Value> = Vec::new();
    let mut all_pass = true;
    let mut record = |name: &str, pass: bool, detail: Option<String>| {
        all_pass &= pass;
        let status = if pass { "pass" } else { "fail" };
        checks.push(match detail {
            Some(detail) => json!({ "name": name, "status": status, "detail": detail }),
            None => json!({ "name": name, "status": status }),
        });
    };
    let seq = match obtain_sequence(&k, run) {
        Ok(seq) => {
            record("sequence replay", true, None);
            seq
        }
        Err(Failure::Domain(detail)) => {
            record("sequence replay", false, Some(detail));
            print_report(&json!({ "checks": checks, "status": "fail" }));
            return Err(Failure::Domain("the sequence does not build the complex".into()));
        }
        Err(usage) => return Err(usage),
    };
    let derived = derive(seq)?;
    let seq = &derived.seq;

    record(
        "critical boundary squares to zero",
        true,
        None,
    );
    record("boundary duality", derived.critical.duality_defect() == 0, None);
    let defect = chain_map_defect(seq, &derived.reference, &derived.critical)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    record("reference chain map", defect == 0, None);
    let defect = cochain_map_defect(seq, &derived.coreference, &derived.critical)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    record("coreference cochain map", defect == 0, None);
    record(
        "extension retraction",
        retraction_defect(
            seq,
            &derived.reference,
            &derived.coreference,
            &derived.extension,
            &derived.coextension,
        ) == 0,
        None,
    );
    let defect = extension_chain_map_defect(
        seq,
        &derived.critical,
        &derived.extension,
        &derived.coextension,
    )
    .map_err(|e| Failure::Domain(e.to_string()))?;
    record("extension chain maps", defect == 0, None);
    let defect = flow_decomposition_defect(
        seq,
        &derived.reference,
        &derived.coreference,
        &derived.extension,
        &derived.coextension,
    )
    .map_err(|e| Failure::Domain(e.to_string()))?;
    record("flow decomposition", defect == 0, None);
    record(
        "path parity",
        parity_defect(seq, &derived.reference, &derived.coreference) == 0,
        None,
    );
    let defect = composite_walk_defect(seq).map_err(|e| Failure::Domain(e.to_string()))?;
    record("composite walks", defect == 0, None);
    let reports = flow_fixed_point_reports(
        seq,
        &derived.reference,
        &derived.coreference,
        &derived.extension,
        &derived.coextension,
        10,
    )
    .map_err(|e| Failure::Domain(e.to_string()))?;
    record(
        "flow fixed points",
        reports.iter().all(|r| r.defects == 0),
        None,
    );
    match seq.skeleton_collapses() {
        Ok(witnesses) => record(
            "skeleton collapses",
            witnesses.len() == k.dim().map_or(0, |d| d + 1),
            None,
        ),
        Err(e) => record("skeleton collapses", false, Some(e.to_string())),
    }
    let counts = seq.critical_counts();
    let betti = PresentedChainComplex::of_complex(&k).betti_numbers();
    record(
        "morse inequalities",
        betti
            .iter()
            .enumerate()
            .all(|(p, b)| counts.get(p).copied().unwrap_or(0) >= *b),
        None,
    );
    let of_critical = derived.critical.betti_numbers();
    let width = betti.len().max(of_critical.len());
    let pad = |v: &[usize]| {
        let mut v = v.to_vec();
        v.resize(width, 0);
        v
    };
    record("betti agreement", pad(&betti) == pad(&of_critical), None);
    match field_to_morse_sequence(&k, &seq.gradient_vector_field()) {
        Ok(rebuilt) => record(
            "field round trip",
            rebuilt.equivalent(seq).unwrap_or(false),
            None,
        ),
        Err(e) => record("field round trip", false, Some(e.to_string())),
    }
    let f = canonical_morse_function(seq);
    let function_trip = is_morse_function_on_sequence(&f, seq)
        && is_basic_function(&k, &f)
        && basic_function_to_sequence(&k, &f)
            .map(|s| s.items() == seq.items())
            .unwrap_or(false);
    record("canonical function round trip", function_trip, None);
    let arranged = seq.arrange();
    record(
        "arrangement",
        arranged.is_arranged()
            && arranged.equivalent(seq).unwrap_or(false)
            && reference_map(&arranged) == derived.reference
            && coreference_map(&arranged) == derived.coreference,
        None,
    );

    let status = if all_pass { "pass" } else { "fail" };
    print_report(&json!({ "checks": checks, "status": status }));
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Domain("some checks failed".into()))
    }
}

fn cmd_export(
    input: &InputArgs,
    run: &RunArgs,
    format: Format,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let k = load_complex(input)?;
    let rendered = match format {
        Format::Text => io::format_complex(&k),
        Format::Dot => {
            let seq = obtain_sequence(&k, run)?;
            io::field_to_dot(&k, &seq.gradient_vector_field())
        }
        Format::Json => {
            let derived = derive(obtain_sequence(&k, run)?)?;
            let mut text = serde_json::to_string_pretty(&json!({
                "extension": frame_json(&derived.extension),
                "coextension": frame_json(&derived.coextension),
            }))
            .expect("tables serialize");
            text.push('\n');
            text
        }
    };
    match output {
        Some(path) => write_file(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}
