use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lalg::constructions::{
    enumerate_all, fixture, fixture_names, fixtures, ordered_sum, poset_algebra, product, Expected,
    MAX_ENUMERATION_SIZE,
};
use lalg::io::{
    parse_poset, read_algebra, render_document, serialize_report, AlgebraDocument, IoError,
    ReportFormat,
};
use lalg::laws::{all_passed, law, run_suite, Corpus, Law, LAWS};
use lalg::spectrum::{prime_element_report, prime_ideals, topology_report};
use lalg::{enumerate_ideals, generate_ideal, quotient, Error, FiniteLAlgebra, Subset};

#[derive(Parser)]
#[command(
    name = "lalg",
    version,
    about = "Ideals, spectra and law checks for finite L-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms and print the structure flags.
    Validate { file: PathBuf },
    /// List the ideals.
    Ideals {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List the prime ideals and prime elements.
    Spectrum {
        file: PathBuf,
        /// Also report T0, sobriety, generic points and generators.
        #[arg(long)]
        topology: bool,
    },
    /// Run the law suite.
    Laws(LawsArgs),
    /// Build a new algebra.
    #[command(subcommand)]
    Construct(Construct),
    /// Write the quotient by an ideal.
    Quotient {
        file: PathBuf,
        /// Comma-separated element labels.
        #[arg(long)]
        ideal: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List or print the built-in fixtures.
    Fixtures {
        #[arg(long, conflicts_with = "emit")]
        list: bool,
        #[arg(long)]
        emit: Option<String>,
        #[arg(short, long, requires = "emit")]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LawsArgs {
    /// Algebra files, one corpus each. Defaults to the fixtures.
    files: Vec<PathBuf>,
    /// Use every algebra with N elements.
    #[arg(long, value_name = "N", conflicts_with = "files")]
    enumerate: Option<usize>,
    /// Only one algebra per isomorphism class.
    #[arg(long, requires = "enumerate")]
    iso: bool,
    /// Restrict to these law ids.
    #[arg(long = "law", value_name = "ID")]
    laws: Vec<String>,
    #[arg(long)]
    json: bool,
    /// Leave out timing so output is reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Print the registered laws and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand)]
enum Construct {
    /// Direct product A×B.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A below B, with the units identified.
    OrderedSum {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The implication algebra of a poset with a top.
    Poset {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Exit status 1 for failed checks, 2 for bad input.
enum Failure {
    Failed(String),
    Usage(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Algebra(e) => Failure::from(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownLabel(_) | Error::InvalidPoset(_) | Error::SizeTooLarge { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Failed(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Ideals { file, json } => ideals(&file, json),
        Command::Spectrum { file, topology } => spectrum(&file, topology),
        Command::Laws(args) => laws(args),
        Command::Construct(c) => construct(c),
        Command::Quotient {
            file,
            ideal,
            output,
        } => quotient_cmd(&file, &ideal, output.as_deref()),
        Command::Fixtures { list, emit, output } => fixtures_cmd(list, emit, output.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn mark(b: bool) -> &'static str {
    if b {
        "✓"
    } else {
        "✗"
    }
}

fn load(path: &Path) -> Result<FiniteLAlgebra, Failure> {
    Ok(read_algebra(path)?)
}

fn validate(path: &Path) -> Outcome {
    let doc = lalg::io::read_document(path)?;
    let x = match doc.to_algebra() {
        Ok(x) => x,
        Err(Error::AxiomViolations(vs)) => {
            println!("{}: not an L-algebra, {} violation(s)", doc.name, vs.len());
            for v in &vs {
                let w: Vec<&str> = v
                    .witness
                    .iter()
                    .map(|&i| doc.elements[i].as_str())
                    .collect();
                println!("  {} fails at ({})", v.equation, w.join(", "));
            }
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    println!("{}: valid L-algebra with {} element(s)", x.name(), x.size());
    let covers: Vec<String> = x
        .order()
        .covers()
        .into_iter()
        .map(|(a, b)| format!("{} < {}", x.label(a), x.label(b)))
        .collect();
    println!("covers: {}", covers.join(", "));
    let f = x.structure_flags();
    println!("sharp: {}", f.sharp);
    println!("discrete: {}", f.discrete);
    println!("brouwerian: {}", f.brouwerian);
    println!("meet-closed: {}", f.meet_closed);
    println!("self-similar: {}", f.self_similar);

    let mut ok = true;
    if !doc.metadata.expected.is_empty() {
        let l = enumerate_ideals(&x)?;
        let s = prime_ideals(&l)?;
        for (key, want) in &doc.metadata.expected {
            let got = match key.as_str() {
                "ideals" => l.len().to_string(),
                "spectrum" => s.len().to_string(),
                "brouwerian" => f.brouwerian.to_string(),
                "meet-closed" => f.meet_closed.to_string(),
                _ => {
                    println!("expect {key}: unknown key, skipped");
                    continue;
                }
            };
            let hit = &got == want;
            ok &= hit;
            println!(
                "expect {key}: {want} {}",
                if hit {
                    mark(true).to_string()
                } else {
                    format!("✗ (got {got})")
                }
            );
        }
    }
    Ok(ok)
}

fn ideals(path: &Path, as_json: bool) -> Outcome {
    let x = load(path)?;
    let l = enumerate_ideals(&x)?;
    let generators = |i: usize| -> Vec<&str> {
        x.elements()
            .filter(|&e| l.principal(e) == i)
            .map(|e| x.label(e))
            .collect()
    };
    if as_json {
        let rows: Vec<_> = (0..l.len())
            .map(
                |i| json!({"elements": x.subset_labels(l.ideal(i)), "generated_by": generators(i)}),
            )
            .collect();
        println!("{}", json!({"algebra": x.name(), "ideals": rows}));
    } else {
        println!("{}: {} ideal(s)", x.name(), l.len());
        for i in 0..l.len() {
            let g = generators(i);
            if g.is_empty() {
                println!("I{i} {}", l.format_ideal(i));
            } else {
                println!("I{i} {}  generated by {}", l.format_ideal(i), g.join(" "));
            }
        }
    }
    Ok(true)
}

fn spectrum(path: &Path, topology: bool) -> Outcome {
    let x = load(path)?;
    let l = enumerate_ideals(&x)?;
    let s = prime_ideals(&l)?;
    println!("{}: {} point(s)", x.name(), s.len());
    for (k, &p) in s.points().iter().enumerate() {
        println!("P{k} {}", l.format_ideal(p));
    }
    let r = prime_element_report(&l, &s)?;
    println!("prime elements: {}", x.format_subset(r.primes));
    println!("quasi-prime elements: {}", x.format_subset(r.quasi_primes));
    for a in &r.attachments {
        let targets: Vec<String> = a.maximal.iter().map(|&m| l.format_ideal(m)).collect();
        println!("P_{} = {}", x.label(a.element), targets.join(" or "));
    }
    if !topology {
        return Ok(true);
    }
    let t = topology_report(&l, &s);
    println!("T0 {}", mark(t.t0));
    println!("sober {}", mark(t.sober));
    println!(
        "closure is specialization {}",
        mark(t.closure_is_specialization)
    );
    println!("I -> U_I injective {}", mark(t.open_map_injective));
    println!("frame homomorphism {}", mark(t.frame_homomorphism));
    println!("quasi-compact {}", mark(t.quasi_compact));
    println!("generalized spectral {}", mark(t.generalized_spectral));
    for (closed, generic) in &t.generic_points {
        let pts: Vec<String> = closed.iter().map(|k| format!("P{k}")).collect();
        let gen: Vec<String> = generic.iter().map(|k| format!("P{k}")).collect();
        println!("closed {{{}}} generic {}", pts.join(", "), gen.join(" "));
    }
    for g in &t.generators {
        let exact = if g.exact { "" } else { " (upper bound)" };
        println!("I{} needs {} generator(s){exact}", g.ideal, g.count);
    }
    for note in &t.notes {
        println!("note: {note}");
    }
    Ok(t.ok())
}

fn laws(args: LawsArgs) -> Outcome {
    if args.list {
        for l in LAWS {
            println!("{:<28} {}", l.id, l.description);
        }
        return Ok(true);
    }
    let selected: Vec<&Law> = if args.laws.is_empty() {
        LAWS.iter().collect()
    } else {
        args.laws
            .iter()
            .map(|id| {
                law(id).ok_or_else(|| {
                    Failure::Usage(format!("unknown law {id:?}; see `lalg laws --list`"))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let corpora = if let Some(n) = args.enumerate {
        if n == 0 || n > MAX_ENUMERATION_SIZE {
            return Err(Failure::Usage(format!(
                "--enumerate takes 1..={MAX_ENUMERATION_SIZE}"
            )));
        }
        let id = if args.iso {
            format!("enumerate-{n}-iso")
        } else {
            format!("enumerate-{n}")
        };
        vec![Corpus {
            id,
            algebras: enumerate_all(n, args.iso)?,
        }]
    } else if args.files.is_empty() {
        vec![Corpus {
            id: "fixtures".into(),
            algebras: fixtures()?.into_iter().map(|f| f.algebra).collect(),
        }]
    } else {
        args.files
            .iter()
            .map(|p| {
                Ok(Corpus {
                    id: p.display().to_string(),
                    algebras: vec![load(p)?],
                })
            })
            .collect::<Result<_, Failure>>()?
    };
    if args.jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be positive".into()));
    }
    let reports = run_suite(&corpora, &selected, args.jobs);
    let format = if args.json {
        ReportFormat::Json
    } else {
        ReportFormat::Text
    };
    let out = serialize_report(&reports, format, !args.no_timing);
    if args.json {
        println!("{out}");
    } else {
        print!("{out}");
    }
    Ok(all_passed(&reports))
}

fn emit(doc: &AlgebraDocument, output: Option<&Path>) -> Outcome {
    let text = render_document(doc, output);
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => print!("{text}"),
    }
    Ok(true)
}

fn construct(c: Construct) -> Outcome {
    let (x, output) = match c {
        Construct::Product { a, b, output } => (product(&load(&a)?, &load(&b)?)?.algebra, output),
        Construct::OrderedSum { a, b, output } => (ordered_sum(&load(&a)?, &load(&b)?)?, output),
        Construct::Poset { file, output } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let spec = parse_poset(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            (poset_algebra(&spec)?, output)
        }
    };
    emit(&AlgebraDocument::from_algebra(&x), output.as_deref())
}

/// Splits on commas that are not inside parentheses, so product labels
/// such as `(a,b)` survive.
fn split_labels(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|l| !l.is_empty());
    out
}

fn quotient_cmd(path: &Path, ideal: &str, output: Option<&Path>) -> Outcome {
    let x = load(path)?;
    let mut s = Subset::EMPTY;
    for label in split_labels(ideal) {
        let e = x
            .index_of(label)
            .ok_or_else(|| Failure::Usage(format!("unknown element {label:?}")))?;
        s.insert(e);
    }
    if generate_ideal(&x, s) != s {
        return Err(Failure::Failed(format!(
            "{} is not an ideal; it generates {}",
            x.format_subset(s),
            x.format_subset(generate_ideal(&x, s))
        )));
    }
    let q = quotient(&x, s)?;
    emit(&AlgebraDocument::from_algebra(&q.algebra), output)
}

fn fixtures_cmd(list: bool, name: Option<String>, output: Option<&Path>) -> Outcome {
    if let Some(name) = name {
        let f = fixtures()?
            .into_iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Failure::Usage(format!("no fixture named {name:?}")))?;
        let mut doc = AlgebraDocument::from_algebra(&f.algebra);
        let Expected {
            ideals,
            spectrum,
            brouwerian,
            meet_closed,
        } = f.expected;
        let exp = &mut doc.metadata.expected;
        if let Some(v) = ideals {
            exp.insert("ideals".into(), v.to_string());
        }
        if let Some(v) = spectrum {
            exp.insert("spectrum".into(), v.to_string());
        }
        if let Some(v) = brouwerian {
            exp.insert("brouwerian".into(), v.to_string());
        }
        if let Some(v) = meet_closed {
            exp.insert("meet-closed".into(), v.to_string());
        }
        return emit(&doc, output);
    }
    if !list {
        return Err(Failure::Usage("pass --list or --emit NAME".into()));
    }
    for name in fixture_names() {
        println!("{name:<12} {} elements", fixture(name)?.size());
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::split_labels;

    #[test]
    fn splits_outside_parentheses() {
        assert_eq!(split_labels("1,a, b"), ["1", "a", "b"]);
        assert_eq!(split_labels("(1,1),(0,1)"), ["(1,1)", "(0,1)"]);
        assert_eq!(split_labels(""), Vec::<&str>::new());
    }
}
