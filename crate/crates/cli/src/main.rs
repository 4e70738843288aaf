use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nefocal::evaluation::{parse_gold, score_annotations, PrReport, PrScores};
use nefocal::pipeline::{AnnotationRecord, ResolutionRecord};
use nefocal::{Document, GoldAnnotation, MatchMode, ResourcePaths, Resources, ScoreKeys};
use rayon::prelude::*;
use serde_json::json;

/// Named-entity recognition with contextual focalization, template lookup
/// and definite-description resolution for French text.
#[derive(Parser)]
#[command(name = "nefocal", version)]
struct Cli {
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(subcommand)]
    command: Command,
}

/// Resource files; each defaults to the bundled one.
#[derive(Args)]
struct ResourceArgs {
    #[arg(long, global = true, value_name = "FILE")]
    hierarchy: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    gazetteer: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    markers: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    triggers: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    templates: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    heads: Option<PathBuf>,
    /// General-language word list; listed words never take a marker's type.
    #[arg(long, global = true, value_name = "FILE")]
    dictionary: Option<PathBuf>,
}

impl ResourceArgs {
    fn load(&self) -> Result<Resources> {
        let paths = ResourcePaths {
            hierarchy: self.hierarchy.clone(),
            gazetteer: self.gazetteer.clone(),
            markers: self.markers.clone(),
            triggers: self.triggers.clone(),
            templates: self.templates.clone(),
            heads: self.heads.clone(),
            dictionary: self.dictionary.clone(),
        };
        Resources::load(&paths).context("loading resources")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Recognize and focalize entity mentions, one record per mention.
    Annotate {
        /// Text files, or `-` for standard input.
        #[arg(default_value = "-")]
        inputs: Vec<String>,
        /// Include the fired and competing trigger rules.
        #[arg(long)]
        trace: bool,
        /// Print `Entity{...}` blocks instead of JSON lines.
        #[arg(long)]
        pretty: bool,
        /// Attach the entity's template when the KB has one.
        #[arg(long)]
        with_template: bool,
    },
    /// Resolve definite descriptions such as `l'organisation de X`.
    Resolve {
        #[arg(default_value = "-")]
        inputs: Vec<String>,
        #[arg(long)]
        pretty: bool,
    },
    /// Compare system annotations with a gold file.
    Score {
        /// Gold-format TSV, or `annotate` JSON lines.
        system: PathBuf,
        gold: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: MatchMode,
        #[arg(long, default_value = "facet")]
        keys: ScoreKeys,
        /// Also write the report as JSON.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Query the entity template store.
    #[command(subcommand)]
    Kb(KbCommand),
}

#[derive(Subcommand)]
enum KbCommand {
    /// Print one template.
    Lookup {
        id: String,
        #[arg(long)]
        pretty: bool,
    },
    /// List the entities carrying a value under an attribute.
    Invert { attribute: String, value: String },
}

struct Input {
    doc_id: String,
    text: io::Result<String>,
}

/// Document id of an input: the file stem, or `stdin`.
fn doc_id(input: &str) -> String {
    if input == "-" {
        return "stdin".to_string();
    }
    Path::new(input)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.to_string())
}

fn read_inputs(inputs: &[String]) -> Vec<Input> {
    let mut stdin: Option<String> = None;
    inputs
        .iter()
        .map(|i| {
            let text = if i == "-" {
                match &stdin {
                    Some(s) => Ok(s.clone()),
                    None => {
                        let mut s = String::new();
                        io::stdin().read_to_string(&mut s).map(|_| {
                            stdin = Some(s.clone());
                            s
                        })
                    }
                }
            } else {
                fs::read_to_string(i)
            };
            Input {
                doc_id: doc_id(i),
                text,
            }
        })
        .collect()
}

/// Processes every input in parallel and writes the per-document outputs in
/// input order. Returns false if any input failed.
fn run_documents<F>(inputs: &[String], pretty: bool, process: F) -> Result<bool>
where
    F: Fn(&Document) -> Vec<String> + Sync,
{
    let docs = read_inputs(inputs);
    let outputs: Vec<Result<Vec<String>, String>> = docs
        .par_iter()
        .map(|d| match &d.text {
            Ok(text) => Ok(process(&Document::new(d.doc_id.clone(), text.clone()))),
            Err(e) => Err(e.to_string()),
        })
        .collect();

    let mut out = BufWriter::new(io::stdout().lock());
    let mut ok = true;
    for (d, result) in docs.iter().zip(outputs) {
        match result {
            Ok(lines) => {
                for line in lines {
                    out.write_all(line.as_bytes())?;
                    if !pretty {
                        out.write_all(b"\n")?;
                    }
                }
            }
            Err(error) => {
                ok = false;
                eprintln!("nefocal: {}: {error}", d.doc_id);
                let record = json!({ "doc_id": d.doc_id, "error": error });
                writeln!(out, "{record}")?;
            }
        }
    }
    out.flush()?;
    Ok(ok)
}

fn annotate(
    res: &Resources,
    doc: &Document,
    trace: bool,
    pretty: bool,
    with_template: bool,
) -> Vec<String> {
    res.annotate(doc)
        .iter()
        .map(|a| {
            let template = with_template
                .then(|| res.templates.lookup(&a.mention.lexical_unit))
                .flatten();
            let record = AnnotationRecord::new(a, trace, template);
            if pretty {
                record.pretty()
            } else {
                serde_json::to_string(&record).expect("records serialize")
            }
        })
        .collect()
}

fn resolve(res: &Resources, doc: &Document, pretty: bool) -> Vec<String> {
    res.resolve(doc)
        .iter()
        .map(|r| {
            let record = ResolutionRecord::new(&doc.id, r);
            if pretty {
                record.pretty()
            } else {
                serde_json::to_string(&record).expect("records serialize")
            }
        })
        .collect()
}

/// Reads system annotations: `annotate` JSON lines when the first
/// non-blank character is `{`, gold-format TSV otherwise.
fn read_system(path: &Path) -> Result<Vec<GoldAnnotation>> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if !src.trim_start().starts_with('{') {
        return read_gold_src(path, &src);
    }
    let mut out = Vec::new();
    for (n, line) in src.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: AnnotationRecord = serde_json::from_str(line).with_context(|| {
            format!(
                "{}: line {}: not an annotation record",
                path.display(),
                n + 1
            )
        })?;
        out.push(record.to_gold());
    }
    Ok(out)
}

fn read_gold_src(path: &Path, src: &str) -> Result<Vec<GoldAnnotation>> {
    parse_gold(src).map_err(|source| {
        nefocal::Error::Evaluation {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

fn scores_json(s: &PrScores<f64>) -> serde_json::Value {
    json!({
        "precision": s.precision,
        "recall": s.recall,
        "p_and_r": s.combined,
        "counts": s.counts,
    })
}

fn print_report(r: &PrReport<f64>) {
    println!("mode: {}  keys: {}", r.mode, r.keys);
    println!(
        "{:<16} {:>9} {:>9} {:>9} {:>6} {:>6} {:>6}",
        "", "P", "R", "P&R", "tp", "sys", "gold"
    );
    let row = |name: &str, s: &PrScores<f64>| {
        println!(
            "{:<16} {:>9.4} {:>9.4} {:>9.4} {:>6} {:>6} {:>6}",
            name,
            s.precision,
            s.recall,
            s.combined,
            s.counts.true_positive,
            s.counts.system_total,
            s.counts.gold_total
        );
    };
    row("overall", &r.overall);
    for (ty, s) in &r.per_type {
        row(ty, s);
    }
}

fn score(
    system: &Path,
    gold: &Path,
    mode: MatchMode,
    keys: ScoreKeys,
    report: Option<&Path>,
) -> Result<()> {
    let sys = read_system(system)?;
    let gold_src =
        fs::read_to_string(gold).with_context(|| format!("reading {}", gold.display()))?;
    let gold = read_gold_src(gold, &gold_src)?;
    let r = score_annotations::<f64>(&sys, &gold, mode, keys);
    print_report(&r);
    if let Some(path) = report {
        let per_type: serde_json::Map<String, serde_json::Value> = r
            .per_type
            .iter()
            .map(|(t, s)| (t.clone(), scores_json(s)))
            .collect();
        let value = json!({
            "mode": r.mode.to_string(),
            "keys": r.keys.to_string(),
            "overall": scores_json(&r.overall),
            "per_type": per_type,
        });
        let text = serde_json::to_string_pretty(&value)? + "\n";
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn kb(res: &Resources, cmd: &KbCommand) -> Result<()> {
    match cmd {
        KbCommand::Lookup { id, pretty } => {
            let Some(t) = res.templates.lookup(id) else {
                bail!("no template for `{id}`");
            };
            if *pretty {
                println!("EntityTemplate {} ({}) {{", t.entity_id, t.entity_type);
                for (name, values) in &t.attributes {
                    println!("  {} = {};", name, values.join(" && "));
                }
                println!("}}");
            } else {
                println!("{}", serde_json::to_string(t)?);
            }
        }
        KbCommand::Invert { attribute, value } => {
            let ids: Vec<&str> = res.templates.invert(attribute, value).into_iter().collect();
            println!(
                "{}",
                json!({ "attribute": attribute, "value": value, "entities": ids })
            );
        }
    }
    Ok(())
}

/// Runs the command; `Ok(false)` means some input failed.
fn run(cli: &Cli) -> Result<bool> {
    Ok(match &cli.command {
        Command::Annotate {
            inputs,
            trace,
            pretty,
            with_template,
        } => {
            let res = cli.resources.load()?;
            run_documents(inputs, *pretty, |d| {
                annotate(&res, d, *trace, *pretty, *with_template)
            })?
        }
        Command::Resolve { inputs, pretty } => {
            let res = cli.resources.load()?;
            run_documents(inputs, *pretty, |d| resolve(&res, d, *pretty))?
        }
        Command::Score {
            system,
            gold,
            mode,
            keys,
            report,
        } => {
            score(system, gold, *mode, *keys, report.as_deref())?;
            true
        }
        Command::Kb(cmd) => {
            kb(&cli.resources.load()?, cmd)?;
            true
        }
    })
}

fn main() -> ExitCode {
    match run(&Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nefocal: {e:#}");
            ExitCode::from(2)
        }
    }
}
