//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::corpus_io::{parse_document, write_report_tsv, Parsed, Severity};
use crate::evaluation::{
    antecedent_typology, classify_errors, corpus_stats, score, ErrorTaxonomy, ScoreRow,
};
use crate::model::Document;
use crate::resolution::{resolve_document, ResolutionConfig, ResolutionReport, Strategy};
use crate::tables::{score_table, stats_table, taxonomy_table, typology_table, Style, Table};

#[derive(Debug, Parser)]
#[command(
    name = "centerline",
    version,
    about = "Centering-based anaphora resolution and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and check annotation files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Distribution of text- and sentence-level anaphors.
    Stats(Common),
    /// Resolve anaphors and print one row per anaphor.
    Resolve {
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        #[command(flatten)]
        flags: Flags,
        #[command(flatten)]
        common: Common,
    },
    /// Success rate of one strategy.
    Evaluate {
        #[arg(long, value_parser = parse_strategy)]
        strategy: Strategy,
        #[command(flatten)]
        flags: Flags,
        #[command(flatten)]
        common: Common,
    },
    /// Success rates of all four strategies, without and with semantics.
    Compare {
        #[arg(long)]
        no_binding: bool,
        #[arg(long)]
        chain_correct: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Types of antecedents of sentence-internal anaphors.
    Typology(Common),
}

#[derive(Debug, Args)]
struct Flags {
    /// Enforce semantic type agreement.
    #[arg(long)]
    semantics: bool,
    /// Disable clause-mate exclusion for pronouns.
    #[arg(long)]
    no_binding: bool,
    /// Carry gold entities forward after each resolution.
    #[arg(long)]
    chain_correct: bool,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Tsv,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
        .map_err(|e: crate::resolution::UnknownStrategy| e.to_string())
}

impl Flags {
    fn config(&self, strategy: Strategy) -> ResolutionConfig {
        ResolutionConfig::new(strategy)
            .with_semantics(self.semantics)
            .with_binding(!self.no_binding)
            .with_chain_correction(self.chain_correct)
    }
}

/// Failure that ends the run with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on
/// unreadable or invalid input, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn read_all(files: &[PathBuf]) -> Result<Vec<Parsed>, Failure> {
    files
        .par_iter()
        .map(|p| {
            std::fs::read_to_string(p)
                .map(|text| parse_document(&text))
                .map_err(|e| Failure(format!("cannot read {}: {e}", p.display())))
        })
        .collect()
}

fn load(files: &[PathBuf]) -> Result<Vec<Document>, Failure> {
    let parsed = read_all(files)?;
    let mut docs = Vec::with_capacity(parsed.len());
    let mut bad = Vec::new();
    for (path, p) in files.iter().zip(parsed) {
        if p.has_errors() {
            bad.extend(
                p.errors()
                    .map(|d| format!("{}:{}: {}", path.display(), d.line, d.message)),
            );
        } else {
            docs.push(p.document);
        }
    }
    if bad.is_empty() {
        Ok(docs)
    } else {
        Err(Failure(format!("invalid input\n{}", bad.join("\n"))))
    }
}

fn emit(common: &Common, text: String) -> Result<i32, Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(0)
}

fn render(tables: &[Table], format: Format) -> String {
    let style = Style::from_env();
    tables
        .iter()
        .map(|t| match format {
            Format::Table => t.render(style),
            Format::Tsv => t.render_tsv(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn resolve_all(docs: &[Document], cfg: ResolutionConfig) -> Result<Vec<ResolutionReport>, Failure> {
    docs.par_iter()
        .map(|d| resolve_document(d, &cfg).map_err(Failure::from))
        .collect()
}

fn scores(docs: &[Document], configs: &[ResolutionConfig]) -> Result<Vec<ScoreRow>, Failure> {
    let mut rows: Vec<ScoreRow> = Vec::new();
    for cfg in configs {
        let reports = resolve_all(docs, *cfg)?;
        for (i, (doc, report)) in docs.iter().zip(&reports).enumerate() {
            let row = score(report, doc)?;
            match rows.get_mut(i) {
                Some(r) => *r = r.clone().merge(row),
                None => rows.push(row),
            }
        }
    }
    let total = ScoreRow::total("Σ", &rows);
    rows.push(total);
    Ok(rows)
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Validate { files } => validate(&files),
        Command::Stats(common) => {
            let docs = load(&common.files)?;
            let table = stats_table(&corpus_stats(&docs));
            let format = common.format.unwrap_or(Format::Table);
            emit(&common, render(&[table], format))
        }
        Command::Typology(common) => {
            let docs = load(&common.files)?;
            let mut rows: Vec<_> = docs
                .iter()
                .map(|d| (d.id.clone(), antecedent_typology(d)))
                .collect();
            let total = rows.iter().fold(Default::default(), |acc, (_, r)| acc + *r);
            rows.push(("Σ".to_string(), total));
            let format = common.format.unwrap_or(Format::Table);
            emit(&common, render(&[typology_table(&rows)], format))
        }
        Command::Resolve {
            strategy,
            flags,
            common,
        } => {
            let docs = load(&common.files)?;
            let reports = resolve_all(&docs, flags.config(strategy))?;
            let format = common.format.unwrap_or(Format::Tsv);
            let text = match format {
                Format::Tsv => reports.iter().map(write_report_tsv).collect(),
                Format::Table => render(&[report_table(&reports)], format),
            };
            emit(&common, text)
        }
        Command::Evaluate {
            strategy,
            flags,
            common,
        } => {
            let docs = load(&common.files)?;
            let rows = scores(&docs, &[flags.config(strategy)])?;
            let format = common.format.unwrap_or(Format::Table);
            emit(&common, render(&[score_table(&rows, &[strategy])], format))
        }
        Command::Compare {
            no_binding,
            chain_correct,
            common,
        } => {
            let docs = load(&common.files)?;
            let mut tables = Vec::new();
            for (semantics, title) in [
                (false, "Success rate without semantic constraints"),
                (true, "Success rate with semantic constraints"),
            ] {
                let configs: Vec<_> = Strategy::TABLE_ORDER
                    .iter()
                    .map(|s| {
                        ResolutionConfig::new(*s)
                            .with_semantics(semantics)
                            .with_binding(!no_binding)
                            .with_chain_correction(chain_correct)
                    })
                    .collect();
                let rows = scores(&docs, &configs)?;
                tables.push(score_table(&rows, &Strategy::TABLE_ORDER).titled(title));
                if !semantics {
                    tables.push(
                        taxonomy(&docs, &configs)?.titled("Errors without semantic constraints"),
                    );
                }
            }
            let format = common.format.unwrap_or(Format::Table);
            emit(&common, render(&tables, format))
        }
    }
}

fn taxonomy(docs: &[Document], configs: &[ResolutionConfig]) -> Result<Table, Failure> {
    let mut totals: Vec<(Strategy, ErrorTaxonomy)> = configs
        .iter()
        .map(|c| (c.strategy, ErrorTaxonomy::default()))
        .collect();
    for doc in docs {
        let reports = configs
            .iter()
            .map(|c| resolve_document(doc, c))
            .collect::<Result<Vec<_>, _>>()?;
        for ((_, acc), (_, t)) in totals.iter_mut().zip(classify_errors(&reports, doc)?) {
            acc.prepositional += t.prepositional;
            acc.plural += t.plural;
            acc.set_member += t.set_member;
            acc.sentence_anaphor += t.sentence_anaphor;
            acc.global_focus += t.global_focus;
            acc.any_strategy_wrong += t.any_strategy_wrong;
            acc.strategy_specific += t.strategy_specific;
            acc.false_positive += t.false_positive;
        }
    }
    Ok(taxonomy_table(&totals))
}

fn report_table(reports: &[ResolutionReport]) -> Table {
    let mut t = Table::new([
        "doc",
        "markable",
        "strategy",
        "predicted",
        "gold",
        "stage",
        "outcome",
        "fp",
    ]);
    for r in reports {
        for row in &r.rows {
            t.push(vec![
                r.doc_id.clone(),
                row.mark_id.clone(),
                r.config.strategy.to_string(),
                row.predicted.as_ref().map_or("-".into(), |e| e.to_string()),
                row.gold.to_string(),
                row.stage.map_or("-".into(), |s| s.to_string()),
                row.outcome.as_str().to_string(),
                if row.false_positive { "fp" } else { "-" }.to_string(),
            ]);
        }
    }
    t
}

fn validate(files: &[PathBuf]) -> Result<i32, Failure> {
    let parsed = read_all(files)?;
    let mut failed = false;
    let mut out = String::new();
    for (path, p) in files.iter().zip(&parsed) {
        failed |= p.has_errors();
        report_diagnostics(&mut out, path, p);
    }
    print!("{out}");
    Ok(i32::from(failed))
}

fn report_diagnostics(out: &mut String, path: &Path, p: &Parsed) {
    if p.diagnostics.is_empty() {
        out.push_str(&format!("{}: ok\n", path.display()));
    }
    for d in &p.diagnostics {
        let sev = match d.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        out.push_str(&format!(
            "{}:{}: {}: {}\n",
            path.display(),
            d.line,
            sev,
            d.message
        ));
    }
}
