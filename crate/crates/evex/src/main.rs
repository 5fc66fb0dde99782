//! Thin command-line front end over the library pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use evex::eval::{f_measure, precision, recall, percent};
use evex::ner::EntityType;
use evex::ontology::OntologySchema;
use evex::pipeline::{run_eval, run_extract, OutputFormat, PipelineError, RunConfig};
use evex::rules::{parse_rules, validate_rules};

#[derive(Parser)]
#[command(name = "evex", version, about = "Event extraction from text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Extract event records from text files or pre-extracted triples.
    Extract {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        gazetteers: PathBuf,
        /// Input text files, one document each (conflicts with --triples).
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
        /// Pre-extracted triples file (one document).
        #[arg(long)]
        triples: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Emit one JSON line per adaptation decision on stderr.
        #[arg(long)]
        trace_adaptation: bool,
        /// Relation-frequency table for the lexical filter.
        #[arg(long)]
        lexical_filter: Option<PathBuf>,
        /// Minimum distinct-argument-pair count a relation must reach.
        #[arg(long, default_value_t = 1)]
        threshold: u64,
        /// Comma list overriding the entity-type tie-break order.
        #[arg(long)]
        ner_priority: Option<String>,
    },
    /// Score a predictions file against gold annotations.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        /// Write the per-file CSV report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Schema whose roles complete the per-role table.
        #[arg(long)]
        schema: Option<PathBuf>,
    },
    /// Check that a rule file resolves against a schema.
    Validate {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        rules: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not errors.
            if err.use_stderr() {
                eprintln!("{err}");
                return ExitCode::from(1);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), PipelineError> {
    match command {
        Command::Extract {
            schema,
            rules,
            gazetteers,
            inputs,
            triples,
            output,
            format,
            trace_adaptation,
            lexical_filter,
            threshold,
            ner_priority,
        } => {
            let ner_priority = match ner_priority {
                Some(list) => Some(parse_priority(&list)?),
                None => None,
            };
            let config = RunConfig {
                schema,
                rules,
                gazetteers,
                inputs,
                triples,
                output: output.clone(),
                format: match format {
                    Format::Json => OutputFormat::Json,
                    Format::Tsv => OutputFormat::Tsv,
                },
                trace_adaptation,
                lexical_filter,
                threshold,
                ner_priority,
            };
            let records = run_extract(&config)?;
            eprintln!("wrote {} record(s) to {}", records.len(), output.display());
            Ok(())
        }
        Command::Eval {
            pred,
            gold,
            report,
            schema,
        } => {
            let eval_report = run_eval(&pred, &gold, report.as_deref(), schema.as_deref())?;
            print!("{}", eval_report.render_text(0));
            println!(
                "\nTotal: P={} R={} F={}",
                percent(precision(&eval_report.total), 0),
                percent(recall(&eval_report.total), 0),
                percent(f_measure(&eval_report.total), 0),
            );
            Ok(())
        }
        Command::Validate { schema, rules } => {
            let schema_text =
                std::fs::read_to_string(&schema).map_err(|source| PipelineError::Io {
                    path: schema.display().to_string(),
                    source,
                })?;
            let rules_text =
                std::fs::read_to_string(&rules).map_err(|source| PipelineError::Io {
                    path: rules.display().to_string(),
                    source,
                })?;
            let schema = OntologySchema::parse(&schema_text).map_err(PipelineError::Schema)?;
            let parsed = parse_rules(&rules_text).map_err(PipelineError::Rules)?;
            validate_rules(&schema, &parsed).map_err(PipelineError::Rules)?;
            println!(
                "ok: {} classes, {} roles, {} relations, {} rules",
                schema.class_count(),
                schema.role_count(),
                schema.relations().count(),
                parsed.len(),
            );
            Ok(())
        }
    }
}

fn parse_priority(list: &str) -> Result<Vec<EntityType>, PipelineError> {
    list.split(',')
        .map(|part| {
            part.trim()
                .parse::<EntityType>()
                .map_err(PipelineError::Config)
        })
        .collect()
}
