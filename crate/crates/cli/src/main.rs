use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symjoin::homology::{verify_connectivity_homology, HasChains};
use symjoin::joins::{estimate_cells, JoinKind};
use symjoin::morse::{to_dot, DEFAULT_PATH_BUDGET};
use symjoin::unavoidability::{
    classify_deficiency, is_collectively_unavoidable, is_collectively_unavoidable_bruteforce,
};
use symjoin::{Complex, Family, JoinComplex, VertexSet};

use symjoin_cli::inputs::{emit, load, load_family, pretty, read_input, write_atomic, Input};
use symjoin_cli::pipeline::{analyse, describe_profile, morse_json};
use symjoin_cli::repro::{self, ReproOptions};
use symjoin_cli::{CliError, ExitClass};

const DEFAULT_MAX_CELLS: u64 = 2_000_000;

#[derive(Parser)]
#[command(
    name = "symjoin",
    version,
    about = "Deleted joins, discrete Morse certificates, unavoidability and exact homology",
    after_help = "Exit codes: 0 success, 2 usage, 3 unreadable or malformed input, \
                  4 cell cap exceeded, 5 failed certificate."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a simplicial complex (or an r-fold family of it).
    Complex {
        #[command(subcommand)]
        what: ComplexCmd,
    },
    /// Decide a property of a complex or family.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Materialize a deleted or symmetrized deleted join.
    Join {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pivot matching and report its critical cells.
    Morse {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = KindArg::Symmetric)]
        kind: KindArg,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: u64,
        /// Write the modified Hasse diagram as Graphviz DOT.
        #[arg(long, value_name = "PATH")]
        emit_dot: Option<PathBuf>,
        /// Cap on gradient-path segments inspected by the passport check; 0 skips it.
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        budget: usize,
        /// Include every matched pair in the report.
        #[arg(long)]
        pairs: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact reduced integral homology.
    Homology {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = KindArg::Symmetric)]
        kind: KindArg,
        #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
        max_cells: u64,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Fail with exit code 5 unless homology vanishes through degree C.
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
        /// Write each boundary matrix as `d<p>.txt` triplets into this directory.
        #[arg(long, value_name = "DIR")]
        dump_matrices: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named end-to-end reproduction.
    Repro {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(repro::TARGETS))]
        name: String,
        #[arg(long, default_value_t = repro::DEFAULT_SEED)]
        seed: u64,
        /// Random complexes per ground-set size, where sampling applies.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// A complex, family or join complex JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// A built-in instance.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(symjoin_cli::inputs::FIXTURES))]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum ComplexCmd {
    /// All subsets of [m] with at most k elements.
    Skeleton {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Emit a family of r copies instead of a single complex.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Alexander dual of a complex file.
    Dual {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The six-vertex projective plane.
    Rp2 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A complex from facets written like "1 2 3; 3 4".
    FromFacets {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        facets: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Whether every complex is (m,k)-balanced.
    Balanced {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Collective unavoidability with a JSON certificate.
    Unavoidable {
        #[arg(long)]
        input: PathBuf,
        /// Balance parameter; inferred when omitted.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Deleted,
    Symmetric,
}

impl From<KindArg> for JoinKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Deleted => JoinKind::Deleted,
            KindArg::Symmetric => JoinKind::Symmetrized,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Deficiency,
    Auto,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("symjoin: {e}");
            ExitCode::from(e.class.code() as u8)
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Complex { what } => complex_cmd(what),
        Command::Check { what } => check_cmd(what),
        Command::Join {
            kind,
            input,
            max_cells,
            out,
        } => {
            let fam = load_family(&input)?;
            let j = JoinComplex::build_capped(&fam, kind.into(), max_cells)?;
            if out.is_some() {
                eprintln!("{} cells, counts by dimension {:?}", j.len(), j.counts());
            }
            emit(out.as_deref(), &pretty(&j.to_file()))
        }
        Command::Morse {
            source,
            kind,
            max_cells,
            emit_dot,
            budget,
            pairs,
            out,
        } => {
            let j = join_from(load_source(&source)?, kind, max_cells)?;
            let o = analyse(&j, (budget > 0).then_some(budget))?;
            if let Some(path) = &emit_dot {
                write_atomic(path, &to_dot(&j, &o.field))?;
            }
            emit(out.as_deref(), &pretty(&morse_json(&j, &o, pairs)))?;
            if !o.certified() {
                return Err(CliError::certificate(
                    "the matching is invalid, cyclic or leaves small critical cells",
                ));
            }
            Ok(())
        }
        Command::Homology {
            source,
            kind,
            max_cells,
            max_dim,
            c,
            dump_matrices,
            out,
        } => homology_cmd(
            load_source(&source)?,
            kind,
            max_cells,
            max_dim,
            c,
            dump_matrices.as_deref(),
            out.as_deref(),
        ),
        Command::Repro {
            name,
            seed,
            samples,
            out,
        } => {
            let rep = repro::run(&name, &ReproOptions { seed, samples })?;
            print!("{}", rep.render());
            if let Some(path) = out {
                write_atomic(&path, &pretty(&rep))?;
            }
            if !rep.passed {
                return Err(CliError::certificate(format!("{name}: some checks failed")));
            }
            Ok(())
        }
    }
}

fn load_source(s: &Source) -> Result<Input, CliError> {
    load(s.input.as_deref(), s.fixture.as_deref())
}

fn join_from(input: Input, kind: KindArg, max_cells: u64) -> Result<JoinComplex, CliError> {
    match input {
        Input::Join(j) => Ok(j),
        Input::Family(f) => Ok(JoinComplex::build_capped(&f, kind.into(), max_cells)?),
        Input::Complex(c) => Ok(JoinComplex::build_capped(
            &Family::new(vec![c])?,
            kind.into(),
            max_cells,
        )?),
    }
}

fn parse_facets(m: usize, text: &str) -> Result<Vec<VertexSet>, CliError> {
    text.split(';')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| {
            let vs = f
                .split(|ch: char| ch == ',' || ch.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| CliError::usage(format!("'{t}' is not a vertex")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(VertexSet::new(m, &vs)?)
        })
        .collect()
}

fn complex_cmd(what: ComplexCmd) -> Result<(), CliError> {
    let (complex, out, copies) = match what {
        ComplexCmd::Skeleton { m, k, r, out } => (Complex::skeleton(m, k)?, out, r),
        ComplexCmd::Dual { input, out } => match read_input(&input)? {
            Input::Complex(c) => (c.alexander_dual(), out, None),
            _ => return Err(CliError::usage("dual expects a single complex file")),
        },
        ComplexCmd::Rp2 { out } => (Complex::rp2_minimal(), out, None),
        ComplexCmd::FromFacets { m, facets, out } => {
            (Complex::from_facets(m, &parse_facets(m, &facets)?)?, out, None)
        }
    };
    let text = match copies {
        None => pretty(&complex.to_file()),
        Some(r) => {
            if r == 0 {
                return Err(CliError::usage("--r must be at least 1"));
            }
            pretty(&Family::new(vec![complex; r])?.to_file())
        }
    };
    emit(out.as_deref(), &text)
}

#[derive(Serialize)]
struct BalancedJson {
    m: usize,
    k: usize,
    balanced: bool,
}

#[derive(Serialize)]
struct UnavoidableJson {
    verdict: bool,
    method: symjoin::Method,
    witness: Option<symjoin::unavoidability::WitnessFile>,
    k: Option<usize>,
    deficiency: Option<i64>,
    case: Option<String>,
}

fn check_cmd(what: CheckCmd) -> Result<(), CliError> {
    match what {
        CheckCmd::Balanced { input, k } => {
            let fam = load_family(&input)?;
            let report = BalancedJson {
                m: fam.ground(),
                k,
                balanced: fam.is_balanced(k),
            };
            emit(None, &pretty(&report))
        }
        CheckCmd::Unavoidable {
            input,
            k,
            method,
            out,
        } => {
            let fam = load_family(&input)?;
            let k = k.filter(|&k| fam.is_balanced(k)).or_else(|| match k {
                Some(_) => None,
                None => (0..fam.ground()).find(|&k| fam.is_balanced(k)),
            });
            if method == MethodArg::Deficiency && k.is_none() {
                return Err(CliError::new(
                    ExitClass::Input,
                    "the deficiency method needs an (m,k)-balanced family",
                ));
            }
            let (cert, class) = match (method, k) {
                (MethodArg::Brute, _) | (MethodArg::Auto, None) => {
                    (is_collectively_unavoidable_bruteforce(&fam), None)
                }
                (_, Some(k)) => (
                    is_collectively_unavoidable(&fam, k),
                    Some(classify_deficiency(&fam, k)),
                ),
                (MethodArg::Deficiency, None) => unreachable!("rejected above"),
            };
            let file = cert.to_file();
            let report = UnavoidableJson {
                verdict: file.verdict,
                method: file.method,
                witness: file.witness,
                k,
                deficiency: class.map(|c| c.d),
                case: class.map(|c| format!("{:?}", c.case)),
            };
            emit(out.as_deref(), &pretty(&report))
        }
    }
}

#[derive(Serialize)]
struct HomologyJson {
    betti: Vec<usize>,
    torsion: Vec<Vec<String>>,
    reduced_minus_one: usize,
    void: bool,
    cell_counts: Vec<usize>,
    summary: String,
    connectivity_checked: Option<i64>,
    connectivity_holds: Option<bool>,
}

fn homology_cmd(
    input: Input,
    kind: KindArg,
    max_cells: u64,
    max_dim: Option<usize>,
    c: Option<i64>,
    dump: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let chains: Box<dyn HasChains> = match input {
        Input::Complex(k) => {
            if estimate_cells(k.ground(), 1) > max_cells {
                return Err(symjoin::Error::CapExceeded {
                    estimate: estimate_cells(k.ground(), 1),
                    cap: max_cells,
                }
                .into());
            }
            Box::new(k)
        }
        other => Box::new(join_from(other, kind, max_cells)?),
    };
    let cc = chains.chain_complex();
    if let Some(dir) = dump {
        std::fs::create_dir_all(dir)?;
        let mut p = 0;
        while let Some(b) = cc.boundary(p) {
            write_atomic(&dir.join(format!("d{p}.txt")), &b.to_triplets())?;
            p += 1;
        }
    }
    let profile = cc.homology(max_dim)?;
    let holds = match c {
        Some(c) if c < -1 => return Err(CliError::usage("--c must be at least -1")),
        Some(c) => Some(verify_connectivity_homology(chains.as_ref(), c)?),
        None => None,
    };
    let file = profile.to_file();
    let report = HomologyJson {
        betti: file.betti,
        torsion: file.torsion,
        reduced_minus_one: profile.minus_one,
        void: profile.void,
        cell_counts: cc.counts().to_vec(),
        summary: describe_profile(&profile),
        connectivity_checked: c,
        connectivity_holds: holds,
    };
    emit(out, &pretty(&report))?;
    if holds == Some(false) {
        return Err(CliError::certificate(format!(
            "reduced homology does not vanish through degree {}",
            c.unwrap_or_default()
        )));
    }
    Ok(())
}
