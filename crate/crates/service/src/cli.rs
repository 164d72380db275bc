//! Command-line entry points. Each subcommand reads its inputs, calls into
//! the library and writes tab-separated output to stdout.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use relmap::baseline::{baseline_stats, load_page_dump, multilingual_subset, parse_relations, write_relations};
use relmap::evaluator::{compare_modes, evaluate, format_comparison, format_report, Averaging, EvalConfig};
use relmap::layout::{export_coords, export_dot, kamada_kawai_layout, neighborhood_graph, LayoutParams};
use relmap::linker::ranked;
use relmap::recognizer::{
    attribute_titles, harvest_contexts, parse_first_names, parse_pattern_pack, Recognizer, RecognizerConfig,
};
use relmap::store::{parse_entities, write_titles, UnknownSurface};
use relmap::{EntityCatalog, EntityId, Lang, RankMode, Snapshot, TitleTable};

use crate::api::{serve, AppState};

#[derive(Debug, Parser)]
#[command(name = "relmap", version, about = "Entity relations mined from daily news clusters")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SnapshotArg {
    /// Snapshot file written by `ingest`.
    #[arg(long, env = "RELMAP_SNAPSHOT")]
    pub snapshot: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a snapshot from tab-separated entity, cluster and occurrence files.
    Ingest {
        #[arg(long)]
        entities: PathBuf,
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        occurrences: PathBuf,
        #[arg(long)]
        titles: Option<PathBuf>,
        /// Fail on occurrence names missing from the entity file instead of
        /// registering them as new persons.
        #[arg(long)]
        reject_unknown: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find person names in a text file, one document per line.
    Recognize(RecognizeArgs),
    /// Print a ranked partner list.
    Link {
        #[arg(value_enum)]
        mode: ModeArg,
        #[arg(long)]
        entity: u32,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        snapshot: SnapshotArg,
    },
    /// Lay out an entity's neighbourhood.
    Map {
        #[arg(long)]
        entity: u32,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Emit DOT (the default).
        #[arg(long, conflicts_with = "coords")]
        dot: bool,
        /// Emit `entity_id, x, y` lines instead of DOT.
        #[arg(long)]
        coords: bool,
        #[command(flatten)]
        snapshot: SnapshotArg,
    },
    /// Confirm person relations from a dump of encyclopedia pages laid out
    /// as `<lang>/<entity_id>.html`.
    Baseline {
        #[arg(long)]
        pages: PathBuf,
        /// Entity file used to resolve link targets.
        #[arg(long)]
        entities: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_languages: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score ranked lists against a baseline at several cut-offs.
    Eval {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long, value_enum, default_value_t = EvalMode::Both)]
        mode: EvalMode,
        #[arg(long, value_delimiter = ',', default_values_t = relmap::evaluator::DEFAULT_RANKS)]
        ranks: Vec<usize>,
        /// Pool counts over persons instead of averaging per person.
        #[arg(long)]
        micro: bool,
        #[command(flatten)]
        snapshot: SnapshotArg,
    },
    /// Serve the read-only HTTP API. SIGHUP reloads the snapshot.
    Serve {
        #[arg(long, env = "RELMAP_BIND", default_value = "127.0.0.1:8080")]
        bind: String,
        #[command(flatten)]
        snapshot: SnapshotArg,
    },
}

#[derive(Debug, Args)]
pub struct RecognizeArgs {
    #[arg(long)]
    pub lang: String,
    /// Trigger pattern pack for `--lang`.
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    #[arg(long)]
    pub first_names: Option<PathBuf>,
    /// Known names come from this entity file...
    #[arg(long, conflicts_with = "snapshot")]
    pub entities: Option<PathBuf>,
    /// ...or from a snapshot's catalog.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Count contexts around known names with this window instead of
    /// recognizing.
    #[arg(long)]
    pub harvest: Option<usize>,
    /// Write title attributions for resolved mentions here.
    #[arg(long)]
    pub titles_out: Option<PathBuf>,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Related,
    Associated,
}

impl From<ModeArg> for RankMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Related => RankMode::Related,
            ModeArg::Associated => RankMode::Associated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    Related,
    Associated,
    Both,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_snapshot(path: &Path) -> Result<Snapshot> {
    Snapshot::load(path).with_context(|| format!("cannot load snapshot {}", path.display()))
}

fn load_catalog(path: &Path) -> Result<EntityCatalog> {
    Ok(parse_entities(&read(path)?, &path.display().to_string())?)
}

fn subject(snap: &Snapshot, raw: u32) -> Result<EntityId> {
    let id = EntityId(raw);
    if snap.catalog.get(id).is_none() || !snap.index.contains(id) {
        bail!("no entity {id} in the snapshot");
    }
    Ok(id)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Ingest {
            entities,
            clusters,
            occurrences,
            titles,
            reject_unknown,
            out: dest,
        } => {
            let policy = if reject_unknown { UnknownSurface::Reject } else { UnknownSurface::Create };
            let snap = Snapshot::from_files(&entities, &clusters, &occurrences, titles.as_deref(), policy)?;
            snap.save(&dest).with_context(|| format!("cannot write {}", dest.display()))?;
            eprintln!(
                "{} entities, {} clusters, {} occurrences -> {}",
                snap.catalog.len(),
                snap.index.clusters().len(),
                snap.index.occurrence_count(),
                dest.display()
            );
        }
        Command::Recognize(args) => recognize(args, out)?,
        Command::Link {
            mode,
            entity,
            top,
            snapshot,
        } => {
            let snap = load_snapshot(&snapshot.snapshot)?;
            let id = subject(&snap, entity)?;
            let list = ranked(&snap.index, id, top, mode.into())?;
            for (i, e) in list.entries.iter().enumerate() {
                let name = crate::views::name_of(&snap.catalog, e.entity);
                match list.mode {
                    RankMode::Related => writeln!(out, "{}\t{}\t{}\t{}", i + 1, e.entity, name, e.co_count)?,
                    RankMode::Associated => writeln!(out, "{}\t{}\t{}\t{:.6}", i + 1, e.entity, name, e.score)?,
                }
            }
        }
        Command::Map {
            entity,
            top,
            dot: _,
            coords,
            snapshot,
        } => {
            let snap = load_snapshot(&snapshot.snapshot)?;
            let id = subject(&snap, entity)?;
            let graph = neighborhood_graph(&snap.index, &snap.catalog, id, top)?;
            let (laid, report) = kamada_kawai_layout(&graph, &LayoutParams::default())?;
            if !report.converged {
                eprintln!(
                    "layout stopped after {} moves, max gradient {:.3e}",
                    report.moves, report.max_gradient
                );
            }
            out.write_all(if coords { export_coords(&laid) } else { export_dot(&laid) }.as_bytes())?;
        }
        Command::Baseline {
            pages,
            entities,
            min_languages,
            out: dest,
        } => {
            let catalog = load_catalog(&entities)?;
            let (person_pages, errors) = load_page_dump(&pages, &catalog)?;
            for e in &errors {
                eprintln!("skipped {}: {}", e.path, e.message);
            }
            let confirmed = relmap::baseline::confirm_relations(&person_pages);
            let relations = multilingual_subset(&confirmed, min_languages)?;
            let stats = baseline_stats(&relations);
            eprintln!(
                "{} pages, {} relations over {} persons (mean {:.2}, min {}, max {})",
                person_pages.len(),
                stats.relations,
                stats.persons,
                stats.mean_per_person,
                stats.min_per_person,
                stats.max_per_person
            );
            let text = write_relations(&relations);
            match dest {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Eval {
            baseline,
            mode,
            ranks,
            micro,
            snapshot,
        } => {
            let relations = parse_relations(&read(&baseline)?, &baseline.display().to_string())?;
            let snap = load_snapshot(&snapshot.snapshot)?;
            let config = EvalConfig {
                ranks,
                averaging: if micro { Averaging::Micro } else { Averaging::Macro },
                ..EvalConfig::default()
            };
            let text = match mode {
                EvalMode::Both => {
                    let (r, a) = compare_modes(&snap.index, &snap.catalog, &relations, &config)?;
                    format_comparison(&r, &a)
                }
                EvalMode::Related | EvalMode::Associated => {
                    let m = if mode == EvalMode::Related { RankMode::Related } else { RankMode::Associated };
                    format_report(&evaluate(&snap.index, &snap.catalog, &relations, &EvalConfig { mode: m, ..config })?)
                }
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Serve { bind, snapshot } => {
            let snap = load_snapshot(&snapshot.snapshot)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(AppState::new(snap), &bind, snapshot.snapshot))?;
        }
    }
    Ok(())
}

fn recognize(args: RecognizeArgs, out: &mut dyn Write) -> Result<()> {
    let lang = Lang::new(&args.lang)?;
    let catalog = match (&args.entities, &args.snapshot) {
        (Some(p), _) => load_catalog(p)?,
        (None, Some(p)) => load_snapshot(p)?.catalog,
        (None, None) => EntityCatalog::new(),
    };
    let text = read(&args.input)?;
    let docs: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();

    if let Some(window) = args.harvest {
        for c in harvest_contexts(&docs, catalog.variants(), window)? {
            writeln!(out, "{}\t{}\t{}", c.phrase, c.side, c.count)?;
        }
        return Ok(());
    }

    let triggers = match &args.patterns {
        Some(p) => parse_pattern_pack(&read(p)?, lang, &p.display().to_string())?,
        None => Vec::new(),
    };
    let first_names = match &args.first_names {
        Some(p) => parse_first_names(&read(p)?),
        None => Default::default(),
    };
    let recognizer = Recognizer::new(RecognizerConfig {
        known_names: catalog.variants().clone(),
        first_names,
        triggers,
        ..RecognizerConfig::default()
    })?;

    let mut table = TitleTable::new();
    for (doc, line) in docs.iter().enumerate() {
        let mentions = recognizer.recognize(line);
        for m in &mentions {
            let entity = m.entity.map_or_else(|| "-".to_string(), |e| e.to_string());
            let titles: BTreeSet<&str> = m.titles.iter().map(String::as_str).collect();
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                doc + 1,
                m.start,
                m.end,
                m.surface,
                m.method.as_str(),
                entity,
                titles.into_iter().collect::<Vec<_>>().join(";")
            )?;
        }
        attribute_titles(&mentions, &catalog, lang, &mut table);
    }
    if let Some(p) = &args.titles_out {
        std::fs::write(p, write_titles(&table)).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}
