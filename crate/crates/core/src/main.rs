use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tricover::cover::{enumerate_sections, is_minimal, require_cover, TripletCover};
use tricover::formats::{CoverFile, DistanceFile, ShellingFile, TreeDump};
use tricover::graph::decomposition_from_section;
use tricover::lab::{random_instance, search_fixture, CoverPolicy, FixturePredicate, InstanceRecord, SearchBudget};
use tricover::newick::{parse_newick, write_newick};
use tricover::reconstruction::{reconstruct, PartialDistances};
use tricover::report::{analyze, shelling_report, DecompositionReport, Limits};
use tricover::shelling::verify_shelling;
use tricover::tree::PhyloTree;
use tricover::Error;

const FORMATS: &str = "\
FILE FORMATS
  tree        Newick, unrooted binary, positive rational lengths:
                ((a:1,b:1):1,c:1,(d:1,e:1):1);
  cover       {\"taxa\": [\"a\",\"b\",\"c\"], \"cords\": [[\"a\",\"b\"], [\"a\",\"c\"], [\"b\",\"c\"]]}
  distances   {\"taxa\": [\"a\",\"b\",\"c\"], \"distances\": [[\"a\",\"b\",\"2\"], [\"a\",\"c\",\"7/2\"], [\"b\",\"c\",\"0.5\"]]}
  shelling    {\"steps\": [{\"cord\": [\"a\",\"e\"], \"witness_pair\": [\"b\",\"c\"], \"quartet\": \"ba|ce\"}]}
Rationals are strings (\"7/2\", \"3\", \"0.25\"); reports never use floats.

EXIT CODES
  0  success
  1  I/O, parse or format error
  2  the cords are not a triplet cover of the tree
  3  the distances are not realizable over the cover
  4  a shelling was rejected";

/// Triplet covers of binary phylogenetic trees: classification,
/// reconstruction from partial distances, cover graphs and shellings.
#[derive(Parser)]
#[command(name = "tricover", version, after_help = FORMATS)]
struct Cli {
    #[command(flatten)]
    limits: LimitArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LimitArgs {
    /// Most sections enumerated by any analysis.
    #[arg(long, global = true, default_value_t = tricover::shelling::DEFAULT_SECTION_LIMIT)]
    limit_sections: usize,
    /// Most triples in a section the hierarchy search accepts.
    #[arg(long, global = true, default_value_t = tricover::shelling::DEFAULT_AMPLE_CAP)]
    ample_cap: usize,
    /// Most triples the subset-union check accepts.
    #[arg(long, global = true, default_value_t = tricover::cover::DEFAULT_HALL_CAP)]
    hall_cap: usize,
    /// Worker threads for fixture sweeps; everything else is single-threaded.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            sections: self.limit_sections,
            ample_cap: self.ample_cap,
            hall_cap: self.hall_cap,
        }
    }
}

#[derive(Args)]
struct Instance {
    /// Newick tree file.
    #[arg(long)]
    tree: PathBuf,
    /// Cover file.
    #[arg(long)]
    cover: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a cover against a tree (JSON report).
    Analyze {
        #[command(flatten)]
        input: Instance,
        /// Write the report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Rebuild the tree from distances on the cords of a cover.
    Reconstruct {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        dist: PathBuf,
        /// Newick output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the cherry reductions to standard error.
        #[arg(long)]
        log: bool,
    },
    /// 2-tree decompositions of the cover graph, one per section.
    Decompose {
        #[command(flatten)]
        input: Instance,
        /// Report every section (up to --limit-sections), not just the first.
        #[arg(long)]
        all_sections: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the cord closure and emit the shelling it finds.
    Shell {
        #[command(flatten)]
        input: Instance,
        /// Write the shelling file (steps only) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a shelling file against a tree and cover.
    VerifyShelling {
        #[command(flatten)]
        input: Instance,
        #[arg(long)]
        shelling: PathBuf,
    },
    /// Seeded random tree with a cover and its distances.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// least-label, random, balanced, union-minimal or padded.
        #[arg(long, default_value = "least-label")]
        cover_policy: CoverPolicy,
        /// Writes tree.nwk, cover.json and dist.json here.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Dump a tree's vertices and exact edge lengths as JSON.
    Dump {
        #[arg(long)]
        tree: PathBuf,
    },
    /// Search for and check stored fixture instances.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Find the first instance satisfying a predicate and store it.
    Search {
        /// minimal-not-sparse, sparse-minimal-mu4, sparse-not-shellable,
        /// shellable-not-ample or minimum.
        #[arg(long)]
        predicate: FixturePredicate,
        #[arg(long, default_value_t = 4)]
        min_n: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Seeds per taxon count beyond the exhaustive range.
        #[arg(long, default_value_t = 2000)]
        seeds: u64,
        /// Largest taxon count searched exhaustively.
        #[arg(long, default_value_t = 6)]
        exhaustive_max_n: usize,
        /// Store directory; records go to <predicate>/<n>/<seed>.json.
        #[arg(long)]
        store: PathBuf,
    },
    /// Recompute and check the flags of every record in a store.
    Check {
        #[arg(long)]
        store: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::NotACover(_)) => 2,
            Failure::Lib(Error::Unrealizable { .. }) => 3,
            Failure::Lib(Error::InvalidShelling { .. }) => 4,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(msg) => f.write_str(msg),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// Writes to `path`, or standard output when absent.
fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => write(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn load_instance(input: &Instance) -> std::result::Result<(PhyloTree, TripletCover), Failure> {
    let tree = parse_newick(&read(&input.tree)?)?;
    let cover = read_json::<CoverFile>(&input.cover)?.to_cover()?;
    if cover.taxa() != tree.taxa() {
        return Err(Error::TaxonMismatch.into());
    }
    Ok((tree, cover))
}

fn run(cli: Cli) -> Outcome {
    let limits = cli.limits.limits();
    match cli.command {
        Command::Analyze { input, json } => {
            let (tree, cover) = load_instance(&input)?;
            emit(json.as_deref(), &to_json(&analyze(&tree, &cover, limits)?))
        }
        Command::Reconstruct { cover, dist, out, log } => {
            let cover = read_json::<CoverFile>(&cover)?.to_cover()?;
            let dist = read_json::<DistanceFile>(&dist)?.to_distances()?;
            let result = reconstruct(&cover, &dist)?;
            if log {
                for s in &result.cherry_log {
                    eprintln!(
                        "cherry {}{}: removed {} (pendant {}), kept {} (pendant {})",
                        s.removed, s.kept, s.removed, s.removed_length, s.kept, s.kept_length
                    );
                }
            }
            emit(out.as_deref(), &(write_newick(&result.tree) + "\n"))
        }
        Command::Decompose { input, all_sections, json } => {
            let (tree, cover) = load_instance(&input)?;
            let support = require_cover(&tree, &cover)?;
            let minimal = is_minimal(&tree, &cover)?;
            let sections = if all_sections {
                enumerate_sections(&support, limits.sections)?
            } else {
                support.sections()?.take(1).collect()
            };
            let reports = sections
                .iter()
                .map(|s| DecompositionReport::new(tree.taxa(), &cover, s, &decomposition_from_section(s)?, minimal))
                .collect::<tricover::Result<Vec<_>>>()?;
            emit(json.as_deref(), &to_json(&reports))
        }
        Command::Shell { input, out } => {
            let (tree, cover) = load_instance(&input)?;
            require_cover(&tree, &cover)?;
            let report = shelling_report(&tree, &cover)?;
            if let Some(path) = out {
                write(&path, &to_json(&report.witness))?;
            }
            emit(None, &to_json(&report))
        }
        Command::VerifyShelling { input, shelling } => {
            let (tree, cover) = load_instance(&input)?;
            require_cover(&tree, &cover)?;
            let steps = read_json::<ShellingFile>(&shelling)?.to_steps(tree.taxa())?;
            verify_shelling(&tree, &cover, &steps)?;
            println!("shelling accepted: {} steps", steps.len());
            Ok(())
        }
        Command::Generate { n, seed, cover_policy, out_dir } => {
            let (tree, cover) = random_instance(n, seed, cover_policy)?;
            let dist = PartialDistances::from_tree(&tree, &cover)?;
            fs::create_dir_all(&out_dir).map_err(|e| Failure::Io(format!("{}: {e}", out_dir.display())))?;
            write(&out_dir.join("tree.nwk"), &(write_newick(&tree) + "\n"))?;
            write(&out_dir.join("cover.json"), &to_json(&CoverFile::from_cover(&cover)))?;
            write(&out_dir.join("dist.json"), &to_json(&DistanceFile::from_distances(&dist)))
        }
        Command::Dump { tree } => {
            let tree = parse_newick(&read(&tree)?)?;
            emit(None, &to_json(&TreeDump::new(&tree)))
        }
        Command::Fixtures { action } => fixtures(action, cli.limits.jobs),
    }
}

fn fixtures(action: FixtureAction, jobs: usize) -> Outcome {
    match action {
        FixtureAction::Search {
            predicate,
            min_n,
            max_n,
            seeds,
            exhaustive_max_n,
            store,
        } => {
            let budget = SearchBudget {
                exhaustive_max_n,
                seeds_per_n: seeds,
                jobs,
            };
            match search_fixture(predicate, min_n..=max_n, budget)? {
                Some(record) => {
                    let path = record
                        .save(&store)
                        .map_err(|e| Failure::Io(format!("{}: {e}", store.display())))?;
                    println!("{predicate}: found {}", path.display());
                }
                None => println!("{predicate}: not found for n in {min_n}..={max_n} with {seeds} seeds per n"),
            }
            Ok(())
        }
        FixtureAction::Check { store } => {
            let mut paths = Vec::new();
            collect_json(&store, &mut paths)?;
            paths.sort();
            let mut bad = 0;
            for path in &paths {
                match InstanceRecord::load(path).and_then(|r| r.verify()) {
                    Ok(_) => println!("ok   {}", path.display()),
                    Err(e) => {
                        bad += 1;
                        println!("FAIL {}: {e}", path.display());
                    }
                }
            }
            if bad > 0 {
                return Err(Failure::Io(format!("{bad} of {} records failed", paths.len())));
            }
            Ok(())
        }
    }
}

fn collect_json(dir: &Path, out: &mut Vec<PathBuf>) -> Outcome {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry.map_err(|e| Failure::Io(e.to_string()))?.path();
        if path.is_dir() {
            collect_json(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
