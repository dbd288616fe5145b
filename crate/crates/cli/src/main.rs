use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qcube::circuit::{self, Circuit, ExactReport, SampleReport};
use qcube::equivalence::{run_suite, SuiteConfig};
use qcube::rational;
use qcube::RotationGroup;

/// Quantum cube simulator: exact branch evaluation, ontic sampling and equivalence checks.
#[derive(Debug, Parser)]
#[command(name = "qcube", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact outcome distribution of a circuit.
    Run {
        file: PathBuf,
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Aligned table (the default).
        #[arg(long)]
        table: bool,
    },
    /// Simulate single systems shot by shot and count outcome sequences.
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, env = "QCUBE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check the cube against the qubit description.
    Verify {
        /// Number of seeded random octahedron states.
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, env = "QCUBE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Inspect the rotation group.
    Group(GroupArgs),
    /// Parse a circuit and print it back in canonical form.
    Parse { file: PathBuf },
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Conjugacy classes instead of the element list.
    #[arg(long, conflicts_with = "table")]
    classes: bool,
    /// Cayley table: entry (i, j) is the index of element i ∘ element j.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Syntax(String),
    Io(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Syntax(_) => 1,
            Failure::Io(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Syntax(m) | Failure::Io(m) | Failure::Verification(m) => m,
        }
    }
}

fn load(path: &Path) -> Result<Circuit, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    circuit::parse(&text).map_err(|e| Failure::Syntax(format!("{}:{e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn sequence_label(key: &str) -> &str {
    if key.is_empty() {
        "(none)"
    } else {
        key
    }
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn run(file: &Path, as_json: bool) -> Result<String, Failure> {
    let c = load(file)?;
    let branches = circuit::eval_exact(&c);
    if as_json {
        return Ok(json(&ExactReport::new(&c, &branches)));
    }
    let rows: Vec<Vec<String>> = branches
        .iter()
        .map(|b| {
            let r = b.final_state.bloch();
            vec![
                sequence_label(&b.key()).to_string(),
                rational::to_string(&b.probability),
                format!("({}, {}, {})", r[0], r[1], r[2]),
            ]
        })
        .collect();
    Ok(table(&["outcomes", "probability", "final bloch"], &rows))
}

fn sample(file: &Path, shots: u64, seed: u64, as_json: bool) -> Result<String, Failure> {
    let c = load(file)?;
    let report: SampleReport = circuit::sample(&c, shots, seed);
    if as_json {
        return Ok(json(&report));
    }
    let rows: Vec<Vec<String>> = report
        .counts
        .iter()
        .map(|(k, n)| {
            let freq = *n as f64 / shots as f64;
            vec![sequence_label(k).to_string(), n.to_string(), format!("{freq:.5}")]
        })
        .collect();
    let mut out = format!("{shots} shots, seed {seed}\n");
    out.push_str(&table(&["outcomes", "count", "frequency"], &rows));
    Ok(out)
}

fn verify(random: usize, seed: u64, as_json: bool) -> Result<String, Failure> {
    let report = run_suite(&SuiteConfig { random_states: random, seed, ..SuiteConfig::default() });
    let out = if as_json { json(&report) } else { format!("{report}\n") };
    if report.is_clean() {
        Ok(out)
    } else {
        // The report itself goes to stdout; the failure line to stderr.
        print!("{out}");
        Err(Failure::Verification(format!("verification failed: {report}")))
    }
}

#[derive(Serialize)]
struct ElementJson {
    index: usize,
    name: String,
    order: usize,
    kind: &'static str,
    perm: String,
    matrix: [[i8; 3]; 3],
    diagonals: [u8; 4],
}

#[derive(Serialize)]
struct ClassJson {
    kind: &'static str,
    size: usize,
    members: Vec<String>,
}

fn group(args: &GroupArgs) -> String {
    let g = RotationGroup::canonical();
    let names: Vec<String> = g.elements().iter().map(|t| t.name()).collect();
    if args.table {
        let cayley = g.cayley_table();
        if args.json {
            return json(&serde_json::json!({ "elements": names, "table": cayley }));
        }
        let header: Vec<String> = std::iter::once("∘".to_string()).chain((0..g.len()).map(|j| j.to_string())).collect();
        let rows: Vec<Vec<String>> = cayley
            .iter()
            .enumerate()
            .map(|(i, row)| std::iter::once(i.to_string()).chain(row.iter().map(|k| k.to_string())).collect())
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let mut out = String::new();
        for (i, name) in names.iter().enumerate() {
            let _ = writeln!(out, "{i:>2} = {name}");
        }
        out.push('\n');
        out.push_str(&table(&header, &rows));
        return out;
    }
    if args.classes {
        let classes: Vec<ClassJson> = g
            .conjugacy_classes()
            .into_iter()
            .map(|c| ClassJson {
                kind: c.kind.describe(),
                size: c.members.len(),
                members: c.members.iter().map(|&i| names[i].clone()).collect(),
            })
            .collect();
        if args.json {
            return json(&classes);
        }
        let rows: Vec<Vec<String>> = classes
            .iter()
            .map(|c| vec![c.kind.to_string(), c.size.to_string(), c.members.join(" ")])
            .collect();
        return table(&["class", "size", "members"], &rows);
    }
    let elements: Vec<ElementJson> = g
        .elements()
        .iter()
        .enumerate()
        .map(|(index, t)| ElementJson {
            index,
            name: names[index].clone(),
            order: t.order(),
            kind: t.kind().describe(),
            perm: t.perm().to_string(),
            matrix: t.matrix().0,
            diagonals: t.diagonal_action(),
        })
        .collect();
    if args.json {
        return json(&elements);
    }
    let rows: Vec<Vec<String>> = elements
        .iter()
        .map(|e| {
            vec![
                e.index.to_string(),
                e.name.clone(),
                e.order.to_string(),
                e.kind.to_string(),
                e.perm.clone(),
                g.element(e.index).matrix().to_string(),
            ]
        })
        .collect();
    table(&["#", "name", "order", "kind", "vertices", "matrix"], &rows)
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Run { file, json, .. } => run(file, *json),
        Command::Sample { file, shots, seed, json } => sample(file, *shots, *seed, *json),
        Command::Verify { random, seed, json } => verify(*random, *seed, *json),
        Command::Group(args) => Ok(group(args)),
        Command::Parse { file } => load(file).map(|c| c.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qcube: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
