use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pfq::engine::{self, RunConfig, Stage};
use pfq::fpgroups::{parse_corpus, Presentation};
use pfq::invariants;
use pfq::permgrp;
use pfq::zlinalg;
use pfq::{homsearch, Error};

#[derive(Parser)]
#[command(name = "pfq", about = "Distinguish finitely presented groups by finite-quotient invariants", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a corpus file
    Validate { corpus: PathBuf },
    /// Print the abelianization of each group
    H1 {
        corpus: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
    /// Print the FIA fingerprint of each group
    Fia {
        corpus: PathBuf,
        #[arg(long)]
        max_index: usize,
        #[arg(long)]
        group: Option<String>,
    },
    /// Count surjections onto a catalog simple group
    Simples {
        corpus: PathBuf,
        #[arg(long)]
        target: String,
        /// Also print the kernel abelianization multiset
        #[arg(long)]
        kernels: bool,
        #[arg(long)]
        group: Option<String>,
    },
    /// Run the staged refinement pipeline
    Distinguish {
        corpus: PathBuf,
        /// File with one stage name per line (default: the 21 built-in stages)
        #[arg(long)]
        stages: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = ".pfq-cache")]
        cache: PathBuf,
        /// Write PREFIXstages.csv and PREFIXavc.csv instead of printing
        #[arg(long)]
        report: Option<String>,
    },
    /// Entropy of the partition induced by one cached invariant
    Entropy {
        #[arg(long)]
        cache: PathBuf,
        #[arg(long)]
        descriptor: String,
    },
}

fn load_corpus(path: &PathBuf) -> pfq::Result<Vec<Presentation>> {
    let text = std::fs::read_to_string(path)?;
    parse_corpus(&text)
}

fn select<'a>(
    corpus: &'a [Presentation],
    group: &Option<String>,
) -> pfq::Result<Vec<&'a Presentation>> {
    match group {
        None => Ok(corpus.iter().collect()),
        Some(name) => {
            let p = corpus
                .iter()
                .find(|p| p.name() == name)
                .ok_or_else(|| Error::Validation(format!("no group named {name:?} in corpus")))?;
            Ok(vec![p])
        }
    }
}

fn run(cli: Cli) -> pfq::Result<ExitCode> {
    match cli.command {
        Command::Validate { corpus } => {
            let groups = load_corpus(&corpus)?;
            println!("ok: {} group(s)", groups.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::H1 { corpus, group } => {
            let groups = load_corpus(&corpus)?;
            for p in select(&groups, &group)? {
                let a = zlinalg::abelian_invariants(&p.exponent_sum_matrix(), p.ngens())?;
                println!("{}: {}", p.name(), a.canonical_string());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fia {
            corpus,
            max_index,
            group,
        } => {
            let groups = load_corpus(&corpus)?;
            for p in select(&groups, &group)? {
                println!("{}: {}", p.name(), invariants::fia_fingerprint(p, max_index)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simples {
            corpus,
            target,
            kernels,
            group,
        } => {
            let groups = load_corpus(&corpus)?;
            let entry = permgrp::catalog(&target)?;
            for p in select(&groups, &group)? {
                let classes = homsearch::enumerate_surjections(p, &entry.group)?;
                if kernels {
                    let mut invs = Vec::with_capacity(classes.len());
                    for k in &classes {
                        let t = homsearch::kernel_table(p, &entry.group, k)?;
                        invs.push(pfq::cosets::subgroup_h1(p, &t)?);
                    }
                    println!(
                        "{}: {} kernel class(es) {}",
                        p.name(),
                        classes.len(),
                        invariants::multiset_string(&invs)
                    );
                } else {
                    println!("{}: {} kernel class(es)", p.name(), classes.len());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Distinguish {
            corpus,
            stages,
            jobs,
            cache,
            report,
        } => {
            let groups = load_corpus(&corpus)?;
            let stage_list: Vec<Stage> = match stages {
                None => engine::default_stages(),
                Some(path) => std::fs::read_to_string(&path)?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(Stage::parse)
                    .collect::<pfq::Result<_>>()?,
            };
            let mut cfg = RunConfig::new(cache);
            cfg.jobs = jobs;
            let state = engine::run(&groups, &stage_list, &cfg)?;
            let (stage_csv, avc_csv) = engine::report(&groups, &state);
            match report {
                Some(prefix) => {
                    std::fs::write(format!("{prefix}stages.csv"), &stage_csv)?;
                    std::fs::write(format!("{prefix}avc.csv"), &avc_csv)?;
                }
                None => {
                    print!("{stage_csv}");
                }
            }
            for block in state.partition.blocks() {
                if block.len() > 1 {
                    eprintln!("unresolved block: {}", block.join(" "));
                }
            }
            if state.partition.is_discrete() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Entropy { cache, descriptor } => {
            invariants::InvariantDescriptor::parse(&descriptor)?;
            let path = cache.join("records.jsonl");
            let text = std::fs::read_to_string(&path)?;
            let mut by_value: HashMap<String, usize> = HashMap::new();
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: invariants::InvariantRecord = serde_json::from_str(line)
                    .map_err(|e| Error::Cache(format!("line {}: {e}", i + 1)))?;
                if rec.descriptor == descriptor && rec.status == invariants::RecordStatus::OK {
                    *by_value.entry(rec.value).or_default() += 1;
                }
            }
            if by_value.is_empty() {
                return Err(Error::Cache(format!(
                    "no OK records for descriptor {descriptor:?} in {}",
                    path.display()
                )));
            }
            let sizes: Vec<usize> = by_value.values().copied().collect();
            println!("{:.6}", invariants::entropy(&sizes)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
