use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cqa_core::aspeval::{ground_cap_from_env, AspError};
use cqa_core::encode::{encode_general, EncodeError};
use cqa_core::mapping::{retrieve, MappingError};
use cqa_core::model::{classify_ind, decidability_gate, Database, Schema, SchemaError, Semantics};
use cqa_core::optimize::encode_optimized;
use cqa_core::oracle::{enumerate_repairs_cm, enumerate_repairs_ls_le, OracleError};
use cqa_core::pipeline::{run, Engine, EngineError, Outcome};
use cqa_core::synth::{gen_synthetic, BenchConfig, IndMode};
use cqa_core::textio::{emit_asp, parse_facts, parse_mapping, parse_query, parse_schema, ParseError, SourceText};

#[derive(Parser)]
#[command(name = "cqa", version, about = "Consistent query answering over inconsistent databases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Consistent answers to a query.
    Answer {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value = "cm")]
        semantics: Semantics,
        #[arg(long, default_value = "oracle")]
        engine: Engine,
    },
    /// Repairs of the database.
    Repairs {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "cm")]
        semantics: Semantics,
    },
    /// Evaluates a GAV mapping over source facts.
    Retrieve {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        sources: PathBuf,
    },
    /// IND classes and the complexity verdict per semantics.
    Classify {
        #[arg(long)]
        schema: PathBuf,
    },
    /// Prints the logic program for a query.
    Encode {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value = "cm")]
        semantics: Semantics,
        /// Use the query-driven optimized encoding.
        #[arg(long)]
        optimized: bool,
        /// Facts, needed for loosely-exact over keys and foreign keys.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Writes a synthetic instance: schema.txt, data.txt and query.txt.
    Gen {
        #[arg(long, default_value = "acyclic")]
        mode: IndMode,
        #[arg(long, default_value_t = 2)]
        violations: usize,
        /// Percentage of r1 and r3 tuples removed: 0 or 10.
        #[arg(long, default_value_t = 0, value_parser = parse_pct)]
        removal: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        tuples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// The global database: facts directly, or a mapping over sources.
#[derive(Args)]
struct Input {
    #[arg(long)]
    schema: PathBuf,
    #[arg(long, conflicts_with_all = ["mapping", "sources"], required_unless_present = "mapping")]
    data: Option<PathBuf>,
    #[arg(long, requires = "sources")]
    mapping: Option<PathBuf>,
    #[arg(long, requires = "mapping")]
    sources: Option<PathBuf>,
}

fn parse_pct(s: &str) -> Result<u32, String> {
    match s {
        "0" => Ok(0),
        "10" => Ok(10),
        _ => Err("removal percentage must be 0 or 10".into()),
    }
}

/// An error message and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

const GATE: u8 = 2;
const INPUT: u8 = 3;
const CAP: u8 = 4;

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(INPUT, e)
    }
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::new(INPUT, e)
    }
}

impl From<MappingError> for Failure {
    fn from(e: MappingError) -> Self {
        Failure::new(INPUT, e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SearchLimit(_) => Failure::new(CAP, e),
            _ => Failure::new(GATE, e),
        }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::Schema(_) => Failure::new(INPUT, e),
            _ => Failure::new(GATE, e),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Oracle(e) => e.into(),
            EngineError::Encode(e) => e.into(),
            EngineError::Asp(AspError::CapExceeded { .. }) => Failure::new(CAP, e),
            EngineError::Asp(_) => Failure::new(GATE, e),
        }
    }
}

fn read(path: &Path) -> Result<SourceText, Failure> {
    SourceText::from_file(path).map_err(|e| Failure::new(INPUT, format!("{}: {e}", path.display())))
}

fn load_schema(path: &Path) -> Result<Schema, Failure> {
    Ok(parse_schema(&read(path)?)?)
}

fn load_database(input: &Input, schema: &Schema) -> Result<Database, Failure> {
    match (&input.data, &input.mapping, &input.sources) {
        (Some(data), _, _) => Ok(parse_facts(&read(data)?, Some(schema))?),
        (None, Some(mapping), Some(sources)) => {
            let db = retrieve(&parse_mapping(&read(mapping)?)?, &parse_facts(&read(sources)?, None)?)?;
            for f in db.iter() {
                let sig = schema.relation(&f.relation)?;
                if sig.arity != f.tuple.len() {
                    return Err(Failure::new(
                        INPUT,
                        format!(
                            "mapping for {} yields arity {}, the schema declares {}",
                            f.relation,
                            f.tuple.len(),
                            sig.arity
                        ),
                    ));
                }
            }
            Ok(db)
        }
        _ => Err(Failure::new(INPUT, "either --data or --mapping with --sources is required")),
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Answer { input, query, semantics, engine } => {
            let schema = load_schema(&input.schema)?;
            let db = load_database(&input, &schema)?;
            let q = parse_query(&read(&query)?)?;
            schema.check_query(&q)?;
            match run(&schema, &db, &q, semantics, engine, ground_cap_from_env())? {
                Outcome::Answers(a) => Ok(a.to_string()),
                Outcome::Program(p) => Ok(p),
            }
        }
        Command::Repairs { input, semantics } => {
            let schema = load_schema(&input.schema)?;
            let db = load_database(&input, &schema)?;
            let set = match semantics {
                Semantics::CmComplete => enumerate_repairs_cm(&db, &schema)?,
                _ => enumerate_repairs_ls_le(&db, &schema, semantics)?,
            };
            let mut out = format!("% {} {semantics} repairs over {}\n", set.repairs.len(), set.search_space);
            for (i, b) in set.repairs.iter().enumerate() {
                let _ = writeln!(out, "% repair {}", i + 1);
                out.push_str(&b.to_string());
            }
            Ok(out)
        }
        Command::Retrieve { mapping, sources } => {
            let db = retrieve(&parse_mapping(&read(&mapping)?)?, &parse_facts(&read(&sources)?, None)?)?;
            Ok(db.to_string())
        }
        Command::Classify { schema } => {
            let schema = load_schema(&schema)?;
            let mut out = String::new();
            for d in schema.inds() {
                let _ = writeln!(out, "{d} {}", classify_ind(&schema, d)?);
            }
            for sem in Semantics::ALL {
                let _ = writeln!(out, "{sem}: {}", decidability_gate(&schema, sem));
            }
            Ok(out)
        }
        Command::Encode { schema, query, semantics, optimized, data } => {
            let schema = load_schema(&schema)?;
            let q = parse_query(&read(&query)?)?;
            let db = match data {
                Some(path) => Some(parse_facts(&read(&path)?, Some(&schema))?),
                None => None,
            };
            let p = if optimized {
                encode_optimized(&schema, &q, semantics, db.as_ref())?
            } else {
                encode_general(&schema, &q, semantics, db.as_ref())?
            };
            Ok(emit_asp(&p))
        }
        Command::Gen { mode, violations, removal, seed, tuples, out } => {
            let config = BenchConfig {
                ind_mode: mode,
                key_violations: violations,
                ind_removal_pct: removal,
                seed,
                base_tuples: tuples,
            };
            let (schema, db, q) = gen_synthetic(&config);
            let write = |name: &str, text: String| {
                std::fs::write(out.join(name), text)
                    .map_err(|e| Failure::new(INPUT, format!("{}: {e}", out.join(name).display())))
            };
            std::fs::create_dir_all(&out).map_err(|e| Failure::new(INPUT, format!("{}: {e}", out.display())))?;
            write("schema.txt", schema.to_string())?;
            write("data.txt", db.to_string())?;
            write("query.txt", q.to_string())?;
            Ok(format!("wrote {} facts to {}\n", db.len(), out.display()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(INPUT);
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("cqa: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
