use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use serde::Serialize;

use snex_core::assoc::read_records_file;
use snex_core::cooccur::scores_from_csv;
use snex_core::cooccur::scores_to_csv;
use snex_core::corpus::{read_dir, read_jsonl_file};
use snex_core::eval::{compare_graphs, coverage_report, CoverageReport, GraphComparison};
use snex_core::keywords::{extract_keywords, reports_to_csv, QueryMode};
use snex_core::network::{extract_network, parse_seeds, GraphFormat, Method};
use snex_core::text::normalize_name;
use snex_core::{Actor, Corpus, Execution, RunConfig, SocialNetwork};

use crate::failure::Failure;
use crate::{
    EvaluateArgs, ExecutionArg, ExtractArgs, GraphFormatArg, IngestArgs, KeywordFormat, KeywordsArgs, MethodArg, ModeArg,
    ReportFormat,
};

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(e).context(format!("reading {}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(e).context(format!("writing {}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Loads the TOML config, resolving its relative paths against the file's
/// directory. No file gives the defaults.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let mut cfg = RunConfig::from_toml(&read_text(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let resolve = |p: &mut Option<PathBuf>| {
        if let Some(rel) = p.as_ref().filter(|p| p.is_relative()) {
            *p = Some(base.join(rel));
        }
    };
    resolve(&mut cfg.corpus);
    resolve(&mut cfg.seeds);
    resolve(&mut cfg.records);
    resolve(&mut cfg.output.graph);
    resolve(&mut cfg.output.scores);
    Ok(cfg)
}

pub fn ingest(args: &IngestArgs) -> Result<(), Failure> {
    let mut documents = Vec::new();
    for input in &args.inputs {
        if input.is_dir() && input.join("corpus.json").is_file() {
            documents.extend(Corpus::load(input)?.documents().iter().cloned());
        } else if input.is_dir() {
            documents.extend(read_dir(input)?);
        } else {
            documents.extend(read_jsonl_file(input)?);
        }
    }
    let corpus = Corpus::ingest(documents)?;
    let manifest = corpus.save(&args.out)?;
    info!("ingested {} documents into {}", manifest.documents, args.out.display());
    println!("{}", serde_json::to_string_pretty(&manifest).expect("manifest serializes"));
    Ok(())
}

fn method_of(m: MethodArg) -> Method {
    match m {
        MethodArg::Srs => Method::Srs,
        MethodArg::Usr => Method::Usr,
        MethodArg::Ars => Method::Ars,
    }
}

fn mode_of(m: ModeArg) -> QueryMode {
    match m {
        ModeArg::NoK => QueryMode::NoK,
        ModeArg::K1 => QueryMode::K1,
        ModeArg::K2 => QueryMode::K2,
        ModeArg::K1K2 => QueryMode::K1K2,
    }
}

fn graph_format_of(f: GraphFormatArg) -> GraphFormat {
    match f {
        GraphFormatArg::Graphml => GraphFormat::Graphml,
        GraphFormatArg::Json => GraphFormat::Json,
        GraphFormatArg::Edgelist => GraphFormat::Edgelist,
    }
}

fn load_seeds(path: Option<&Path>) -> Result<Vec<Actor>, Failure> {
    let path = path.ok_or_else(|| Failure::usage("no seed list given (--seeds or `seeds` in the config)"))?;
    let seeds = parse_seeds(&read_text(path)?).map_err(|e| Failure::data(e).context(path.display().to_string()))?;
    if seeds.is_empty() {
        return Err(Failure::usage(format!("seed list {} is empty", path.display())));
    }
    Ok(seeds)
}

pub fn extract(mut cfg: RunConfig, args: &ExtractArgs) -> Result<(), Failure> {
    if let Some(m) = args.method {
        cfg.method = method_of(m);
    }
    if let Some(a) = args.alpha {
        cfg.alpha.set(cfg.method, a);
    }
    if let Some(m) = args.mode {
        cfg.mode = mode_of(m);
    }
    if let Some(k) = &args.keyword {
        cfg.ars_keyword = k.clone();
    }
    if let Some(e) = args.execution {
        cfg.execution = match e {
            ExecutionArg::Sequential => Execution::Sequential,
            ExecutionArg::Parallel => Execution::Parallel,
        };
    }
    for (flag, slot) in [
        (&args.corpus, &mut cfg.corpus),
        (&args.seeds, &mut cfg.seeds),
        (&args.records, &mut cfg.records),
        (&args.out, &mut cfg.output.graph),
        (&args.scores, &mut cfg.output.scores),
    ] {
        if flag.is_some() {
            slot.clone_from(flag);
        }
    }
    if let Some(f) = args.format {
        cfg.output.format = graph_format_of(f);
    } else if let Some(f) = args.out.as_deref().and_then(GraphFormat::from_path) {
        cfg.output.format = f;
    }
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;

    let seeds = load_seeds(cfg.seeds.as_deref())?;
    let corpus = match (&cfg.corpus, cfg.method) {
        (Some(path), _) => Corpus::open(path)?,
        (None, Method::Ars) => Corpus::ingest(Vec::new())?,
        (None, m) => return Err(Failure::usage(format!("method {m} needs a corpus (--corpus)"))),
    };
    let records = match (&cfg.records, cfg.method) {
        (Some(path), Method::Ars) => Some(read_records_file(path)?),
        (None, Method::Ars) => return Err(Failure::usage("method ARS needs bibliographic records (--records)")),
        _ => None,
    };
    let ex = extract_network(&corpus, &seeds, cfg.method, &cfg, records.as_deref())?;
    info!(
        "{}: {} nodes, {} edges from {} scored pairs (alpha {})",
        cfg.method,
        ex.network.node_count(),
        ex.network.edge_count(),
        ex.scores.len(),
        cfg.alpha()
    );
    write_or_print(cfg.output.graph.as_deref(), &ex.network.export(cfg.output.format))?;
    if let Some(path) = &cfg.output.scores {
        write_or_print(Some(path), &scores_to_csv(&ex.scores))?;
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<SocialNetwork, Failure> {
    SocialNetwork::read_file(path).map_err(|e| Failure::from(e).context(path.display().to_string()))
}

#[derive(Serialize)]
struct EvaluationReport {
    comparison: GraphComparison,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    coverage: Vec<CoverageReport>,
}

fn coverage(cfg: &RunConfig, args: &EvaluateArgs) -> Result<Vec<CoverageReport>, Failure> {
    let Some(path) = &args.scores else {
        return Ok(Vec::new());
    };
    let scores = scores_from_csv(&read_text(path)?).map_err(|e| Failure::data(anyhow::anyhow!("{}: {e}", path.display())))?;
    let actors: BTreeSet<String> = scores.iter().flat_map(|s| [normalize_name(&s.actor_a), normalize_name(&s.actor_b)]).collect();
    let n = actors.len() as u64;
    let potential = args.potential.unwrap_or(n * n.saturating_sub(1) / 2);
    if potential == 0 {
        return Err(Failure::data(anyhow::anyhow!("{}: no actor pairs to cover", path.display())));
    }
    let methods: BTreeSet<Method> = scores.iter().map(|s| s.method).collect();
    Ok(methods
        .into_iter()
        .map(|m| {
            let of_method: Vec<_> = scores.iter().filter(|s| s.method == m).cloned().collect();
            let alpha = args.alpha.unwrap_or_else(|| cfg.alpha.get(m));
            coverage_report(&of_method, alpha, potential, cfg.strict_threshold)
        })
        .collect())
}

pub fn evaluate(cfg: &RunConfig, args: &EvaluateArgs) -> Result<(), Failure> {
    let g1 = read_graph(&args.extracted)?;
    let g2 = read_graph(&args.benchmark)?;
    let report = EvaluationReport { comparison: compare_graphs(&g1, &g2), coverage: coverage(cfg, args)? };
    let text = match args.format {
        ReportFormat::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        ReportFormat::Table => {
            let mut s = report.comparison.to_table();
            for c in &report.coverage {
                s.push('\n');
                s.push_str(&c.to_table());
            }
            s
        }
        ReportFormat::Csv => {
            let mut s = format!("{}\n{}\n", GraphComparison::CSV_HEADER, report.comparison.to_csv_row());
            if !report.coverage.is_empty() {
                s.push_str("\nmethod,alpha,potential_pairs,scored,above_threshold,undefined,fraction\n");
                for c in &report.coverage {
                    for m in &c.methods {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{}\n",
                            m.method, c.alpha, c.potential_pairs, m.scored, m.above_threshold, m.undefined, m.fraction
                        ));
                    }
                }
            }
            s
        }
    };
    write_or_print(args.out.as_deref(), &text)
}

pub fn keywords(mut cfg: RunConfig, args: &KeywordsArgs) -> Result<(), Failure> {
    if args.corpus.is_some() {
        cfg.corpus.clone_from(&args.corpus);
    }
    let path = cfg.corpus.as_deref().ok_or_else(|| Failure::usage("no corpus given (--corpus)"))?;
    let mut actors: Vec<Actor> = args.actors.iter().map(|a| Actor::new(a.clone())).collect();
    if let Some(seeds) = &args.seeds {
        actors.extend(load_seeds(Some(seeds))?);
    }
    if actors.is_empty() {
        return Err(Failure::usage("no actors given (--actor or --seeds)"));
    }
    let corpus = Corpus::open(path)?;
    let opts = cfg.keyword_options();
    let mut reports = Vec::with_capacity(actors.len());
    for a in &actors {
        let report = extract_keywords(&corpus, a, &opts).map_err(|e| Failure::data(e).context(a.name.clone()))?;
        if report.candidates.is_empty() {
            log::warn!("{}: no keywords (the name has no hits)", a.name);
        }
        reports.push(report);
    }
    let text = match args.format {
        KeywordFormat::Csv => reports_to_csv(&reports),
        KeywordFormat::Json => serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n",
    };
    write_or_print(args.out.as_deref(), &text)
}
