//! Staged refinement pipeline: runs invariant stages over a corpus,
//! refines the partition after each stage, caches records as JSON
//! lines, and emits CSV reports.
//!
//! Determinism contract: the final partition, tallies, and reports are
//! identical for any worker count and across interrupted and resumed
//! runs. Workers consume a fixed task list; results are merged in
//! (group, descriptor) order, never completion order.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::cosets::{self, AbelianCover, DEFAULT_NODE_BUDGET};
use crate::fpgroups::Presentation;
use crate::homsearch::{self, DEFAULT_WORK_BUDGET};
use crate::invariants::{
    self, InvariantDescriptor, InvariantKind, InvariantRecord, Partition, RecordStatus,
};
use crate::permgrp::{self, CATALOG_NAMES};
use crate::zlinalg::{self, AbelianInvariants};
use crate::{Error, Result};

/// Default cap on abelian cover order; larger covers fail the record.
pub const DEFAULT_COVER_CAP: u64 = 512;
/// Largest cyclic cover degree in the composite covers stage.
pub const MAX_CYCLIC_COVER: u64 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    H1,
    Fia(usize),
    /// Composite: abelian cover when H1 is finite, cyclic covers
    /// 2..=10 when H1 is infinite cyclic, nothing otherwise.
    Covers,
    SimpleCovers(String),
}

impl Stage {
    pub fn name(&self) -> String {
        match self {
            Stage::H1 => "H1".to_string(),
            Stage::Fia(n) => format!("FIA({n})"),
            Stage::Covers => "COVERS".to_string(),
            Stage::SimpleCovers(g) => format!("SIMPLE_COVERS({g})"),
        }
    }

    pub fn parse(s: &str) -> Result<Stage> {
        let bad = || Error::Validation(format!("bad stage name: {s:?}"));
        if s == "H1" {
            Ok(Stage::H1)
        } else if s == "COVERS" {
            Ok(Stage::Covers)
        } else if let Some(arg) = s.strip_prefix("FIA(").and_then(|r| r.strip_suffix(')')) {
            let n: usize = arg.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(Stage::Fia(n))
        } else if let Some(arg) = s
            .strip_prefix("SIMPLE_COVERS(")
            .and_then(|r| r.strip_suffix(')'))
        {
            if !CATALOG_NAMES.contains(&arg) {
                return Err(Error::UnknownCatalogGroup(arg.to_string()));
            }
            Ok(Stage::SimpleCovers(arg.to_string()))
        } else {
            Err(bad())
        }
    }

    /// Descriptor heads this stage may record under.
    fn descriptor_heads(&self) -> Vec<InvariantKind> {
        match self {
            Stage::H1 => vec![InvariantKind::H1],
            Stage::Fia(n) => vec![InvariantKind::Fia(*n)],
            Stage::Covers => vec![
                InvariantKind::AbelianCover,
                InvariantKind::CyclicCovers(MAX_CYCLIC_COVER),
            ],
            Stage::SimpleCovers(g) => vec![InvariantKind::SimpleCovers(g.clone())],
        }
    }
}

/// The 21 default stages: H1, FIA(2)..FIA(7), the composite covers
/// stage, then the 13 simple-cover stages in catalog order.
pub fn default_stages() -> Vec<Stage> {
    let mut stages = vec![Stage::H1];
    for n in 2..=7 {
        stages.push(Stage::Fia(n));
    }
    stages.push(Stage::Covers);
    for name in CATALOG_NAMES {
        stages.push(Stage::SimpleCovers(name.to_string()));
    }
    stages
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub jobs: usize,
    pub cache_dir: PathBuf,
    pub node_budget: u64,
    pub work_budget: u64,
    pub cover_cap: u64,
}

impl RunConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            jobs: 1,
            cache_dir: cache_dir.into(),
            node_budget: DEFAULT_NODE_BUDGET,
            work_budget: DEFAULT_WORK_BUDGET,
            cover_cap: DEFAULT_COVER_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageTally {
    pub stage: String,
    pub distinguished: usize,
    pub remaining: usize,
    pub entropy_bits: f64,
}

pub struct RunState {
    pub partition: Partition,
    pub tallies: Vec<StageTally>,
    /// All records per group, sorted by descriptor.
    pub records: BTreeMap<String, Vec<InvariantRecord>>,
}

fn cache_path(dir: &Path) -> PathBuf {
    dir.join("records.jsonl")
}

fn known_convention(desc: &InvariantDescriptor) -> bool {
    desc.convention == desc.kind.default_convention()
}

fn load_cache(dir: &Path) -> Result<BTreeMap<String, Vec<InvariantRecord>>> {
    let mut out: BTreeMap<String, Vec<InvariantRecord>> = BTreeMap::new();
    let path = cache_path(dir);
    if !path.exists() {
        return Ok(out);
    }
    let file = std::fs::File::open(&path)?;
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: InvariantRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Cache(format!("line {}: {e}", i + 1)))?;
        let desc = InvariantDescriptor::parse(&rec.descriptor)
            .map_err(|e| Error::Cache(format!("line {}: {e}", i + 1)))?;
        if !known_convention(&desc) {
            return Err(Error::Cache(format!(
                "record for {} uses convention tag {:?}, this build computes {:?}",
                rec.group,
                desc.convention,
                desc.kind.default_convention()
            )));
        }
        let entry = out.entry(rec.group.clone()).or_default();
        if let Some(prev) = entry.iter().find(|r| r.descriptor == rec.descriptor) {
            if prev.value != rec.value || prev.status != rec.status {
                return Err(Error::Cache(format!(
                    "conflicting cached records for {} / {}",
                    rec.group, rec.descriptor
                )));
            }
            continue;
        }
        entry.push(rec);
    }
    for recs in out.values_mut() {
        recs.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));
    }
    Ok(out)
}

fn append_cache(dir: &Path, records: &[InvariantRecord]) -> Result<()> {
    if records.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(cache_path(dir))?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).expect("record serializes"));
        buf.push('\n');
    }
    f.write_all(buf.as_bytes())?;
    f.flush()?;
    Ok(())
}

fn h1_of(p: &Presentation) -> Result<AbelianInvariants> {
    zlinalg::abelian_invariants(&p.exponent_sum_matrix(), p.ngens())
}

fn is_budget_failure(e: &Error) -> bool {
    matches!(e, Error::BudgetExhausted(_) | Error::BoundExceeded(_))
}

/// Compute one stage's records for one group. Budget failures become
/// FAILED records; everything else propagates.
fn compute_stage(p: &Presentation, stage: &Stage, cfg: &RunConfig) -> Result<Vec<InvariantRecord>> {
    let start = std::time::Instant::now();
    let finish = |descriptor: InvariantDescriptor, value: Result<String>| -> Result<Option<InvariantRecord>> {
        let cpu_ms = start.elapsed().as_millis() as u64;
        match value {
            Ok(v) => Ok(Some(InvariantRecord {
                group: p.name().to_string(),
                descriptor: descriptor.to_string_form(),
                value: v,
                cpu_ms,
                status: RecordStatus::OK,
            })),
            Err(e) if is_budget_failure(&e) => Ok(Some(InvariantRecord {
                group: p.name().to_string(),
                descriptor: descriptor.to_string_form(),
                value: String::new(),
                cpu_ms,
                status: RecordStatus::FAILED,
            })),
            Err(e) => Err(e),
        }
    };

    match stage {
        Stage::H1 => {
            let d = InvariantDescriptor::new(InvariantKind::H1);
            let v = h1_of(p).map(|a| a.canonical_string());
            Ok(finish(d, v)?.into_iter().collect())
        }
        Stage::Fia(n) => {
            let d = InvariantDescriptor::new(InvariantKind::Fia(*n));
            let v = invariants::fia_fingerprint_with_budget(p, *n, cfg.node_budget);
            Ok(finish(d, v)?.into_iter().collect())
        }
        Stage::Covers => {
            let h1 = h1_of(p)?;
            if h1.is_finite() {
                let d = InvariantDescriptor::new(InvariantKind::AbelianCover);
                let v = (|| {
                    match cosets::abelian_cover_table(p, cfg.cover_cap)? {
                        AbelianCover::Table(t) => {
                            Ok(cosets::subgroup_h1(p, &t)?.canonical_string())
                        }
                        AbelianCover::InfiniteH1 => {
                            Err(Error::Validation("guard said H1 finite".into()))
                        }
                    }
                })();
                Ok(finish(d, v)?.into_iter().collect())
            } else if h1.is_infinite_cyclic() {
                let d = InvariantDescriptor::new(InvariantKind::CyclicCovers(MAX_CYCLIC_COVER));
                let v = (|| {
                    let mut parts = Vec::new();
                    for n in 2..=MAX_CYCLIC_COVER {
                        let t = cosets::cyclic_cover_table(p, n)?;
                        parts.push(format!(
                            "{n}:{}",
                            cosets::subgroup_h1(p, &t)?.canonical_string()
                        ));
                    }
                    Ok(format!("{{{}}}", parts.join(";")))
                })();
                Ok(finish(d, v)?.into_iter().collect())
            } else {
                Ok(Vec::new())
            }
        }
        Stage::SimpleCovers(name) => {
            let d = InvariantDescriptor::new(InvariantKind::SimpleCovers(name.clone()));
            let v = (|| {
                let entry = permgrp::catalog(name)?;
                let (classes, _stats) =
                    homsearch::enumerate_surjections_with_stats(p, &entry.group, cfg.work_budget)?;
                let mut invs = Vec::with_capacity(classes.len());
                for k in &classes {
                    let t = homsearch::kernel_table(p, &entry.group, k)?;
                    invs.push(cosets::subgroup_h1(p, &t)?);
                }
                Ok(invariants::multiset_string(&invs))
            })();
            Ok(finish(d, v)?.into_iter().collect())
        }
    }
}

/// True if the cache already holds this stage's output for the group.
fn stage_cached(records: &[InvariantRecord], stage: &Stage) -> bool {
    let heads: Vec<String> = stage
        .descriptor_heads()
        .iter()
        .map(|k| InvariantDescriptor::new(k.clone()).to_string_form())
        .collect();
    match stage {
        // the covers stage legitimately produces no record for some
        // groups; recomputing that case is cheap, so only a present
        // record short-circuits
        Stage::Covers => records.iter().any(|r| heads.contains(&r.descriptor)),
        _ => records.iter().any(|r| heads.contains(&r.descriptor)),
    }
}

/// Run the pipeline. An existing compatible cache under
/// `cfg.cache_dir` is reused, so this doubles as resume.
pub fn run(corpus: &[Presentation], stages: &[Stage], cfg: &RunConfig) -> Result<RunState> {
    if corpus.is_empty() {
        return Err(Error::Precondition("empty corpus".into()));
    }
    let names: Vec<String> = corpus.iter().map(|p| p.name().to_string()).collect();
    let by_name: HashMap<&str, &Presentation> =
        corpus.iter().map(|p| (p.name(), p)).collect();
    let mut records = load_cache(&cfg.cache_dir)?;
    let mut partition = Partition::single_block(&names)?;
    let mut tallies = Vec::new();

    for stage in stages {
        if partition.is_discrete() {
            break;
        }
        let active: Vec<String> = partition
            .blocks()
            .iter()
            .filter(|b| b.len() >= 2)
            .flatten()
            .cloned()
            .collect();
        let todo: Vec<&Presentation> = active
            .iter()
            .filter(|n| {
                !records
                    .get(*n)
                    .is_some_and(|rs| stage_cached(rs, stage))
            })
            .map(|n| by_name[n.as_str()])
            .collect();

        // deterministic task list, bounded worker pool
        let queue: Mutex<VecDeque<usize>> = Mutex::new((0..todo.len()).collect());
        let results: Mutex<Vec<Option<Result<Vec<InvariantRecord>>>>> =
            Mutex::new((0..todo.len()).map(|_| None).collect());
        let workers = cfg.jobs.max(1).min(todo.len().max(1));
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let Some(i) = queue.lock().unwrap().pop_front() else {
                        break;
                    };
                    let r = compute_stage(todo[i], stage, cfg);
                    results.lock().unwrap()[i] = Some(r);
                });
            }
        });
        let mut fresh: Vec<InvariantRecord> = Vec::new();
        for r in results.into_inner().unwrap() {
            fresh.extend(r.expect("worker filled every slot")?);
        }
        fresh.sort_by(|a, b| (&a.group, &a.descriptor).cmp(&(&b.group, &b.descriptor)));
        append_cache(&cfg.cache_dir, &fresh)?;
        for r in fresh {
            let entry = records.entry(r.group.clone()).or_default();
            entry.push(r);
            entry.sort_by(|a, b| a.descriptor.cmp(&b.descriptor));
        }

        // stage keys: OK records only; a FAILED record leaves the
        // group keyless, which pins its whole block in place
        let heads: Vec<String> = stage
            .descriptor_heads()
            .iter()
            .map(|k| InvariantDescriptor::new(k.clone()).to_string_form())
            .collect();
        let mut keys: HashMap<String, String> = HashMap::new();
        for n in &active {
            let Some(rs) = records.get(n) else { continue };
            let stage_recs: Vec<&InvariantRecord> = rs
                .iter()
                .filter(|r| heads.contains(&r.descriptor))
                .collect();
            if stage_recs.iter().any(|r| r.status == RecordStatus::FAILED) {
                continue;
            }
            let key: String = stage_recs
                .iter()
                .map(|r| format!("{}={};", r.descriptor, r.value))
                .collect();
            keys.insert(n.clone(), key);
        }
        let singles_before = partition.blocks().iter().filter(|b| b.len() == 1).count();
        partition = partition.refine(&keys);
        let singles_after = partition.blocks().iter().filter(|b| b.len() == 1).count();
        tallies.push(StageTally {
            stage: stage.name(),
            distinguished: singles_after - singles_before,
            remaining: names.len() - singles_after,
            entropy_bits: partition.entropy_bits(),
        });
    }

    Ok(RunState {
        partition,
        tallies,
        records,
    })
}

/// Resume a prior run from its cache. Identical to `run`; the cache
/// under `cfg.cache_dir` supplies every completed record.
pub fn resume(corpus: &[Presentation], stages: &[Stage], cfg: &RunConfig) -> Result<RunState> {
    run(corpus, stages, cfg)
}

/// (stage table CSV, AVC table CSV).
pub fn report(corpus: &[Presentation], state: &RunState) -> (String, String) {
    let mut stage_csv = String::from("stage,distinguished,remaining,entropy_bits\n");
    for t in &state.tallies {
        stage_csv.push_str(&format!(
            "{},{},{},{:.6}\n",
            t.stage, t.distinguished, t.remaining, t.entropy_bits
        ));
    }
    let mut avc_csv = String::from("group,quotient,avc_ratio\n");
    for p in corpus {
        let Some(vol) = p.volume() else { continue };
        let Some(rs) = state.records.get(p.name()) else {
            continue;
        };
        for q in CATALOG_NAMES {
            let desc =
                InvariantDescriptor::new(InvariantKind::SimpleCovers(q.to_string()))
                    .to_string_form();
            let Some(r) = rs
                .iter()
                .find(|r| r.descriptor == desc && r.status == RecordStatus::OK)
            else {
                continue;
            };
            let Some(max_log) = parse_multiset(&r.value)
                .into_iter()
                .map(|a| a.torsion_order_log())
                .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))))
            else {
                continue;
            };
            let order = permgrp::catalog(q).map(|e| e.order).unwrap_or(0);
            if order == 0 {
                continue;
            }
            let ratio = invariants::avc_ratio(vol, order, max_log).unwrap_or(0.0);
            avc_csv.push_str(&format!("{},{},{:.6}\n", p.name(), q, ratio));
        }
    }
    (stage_csv, avc_csv)
}

fn parse_multiset(s: &str) -> Vec<AbelianInvariants> {
    let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) else {
        return Vec::new();
    };
    if inner.is_empty() {
        return Vec::new();
    }
    inner
        .split(';')
        .filter_map(|part| AbelianInvariants::parse(part).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroups::Word;

    fn pres(name: &str, ngens: usize, relators: &[&[i32]]) -> Presentation {
        Presentation::new(
            name,
            ngens,
            relators
                .iter()
                .map(|ls| Word::new(ls.to_vec()).unwrap())
                .collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn default_stage_list() {
        let stages = default_stages();
        assert_eq!(stages.len(), 21);
        assert_eq!(stages[0], Stage::H1);
        assert_eq!(stages[1], Stage::Fia(2));
        assert_eq!(stages[7], Stage::Covers);
        assert_eq!(
            stages.last().unwrap(),
            &Stage::SimpleCovers("PSL(2,23)".to_string())
        );
    }

    #[test]
    fn stage_name_round_trip() {
        for s in default_stages() {
            assert_eq!(Stage::parse(&s.name()).unwrap(), s);
        }
        assert!(Stage::parse("FIA(0)").is_err());
        assert!(Stage::parse("SIMPLE_COVERS(M11)").is_err());
        assert!(Stage::parse("junk").is_err());
    }

    #[test]
    fn h1_separates_free_groups() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = vec![pres("F2", 2, &[]), pres("Z", 1, &[])];
        let cfg = RunConfig::new(dir.path());
        let state = run(&corpus, &default_stages(), &cfg).unwrap();
        assert!(state.partition.is_discrete());
        assert_eq!(state.tallies.len(), 1);
        let t = &state.tallies[0];
        assert_eq!((t.stage.as_str(), t.distinguished, t.remaining), ("H1", 2, 0));
        assert_eq!(t.entropy_bits, 1.0);
        let (stage_csv, avc_csv) = report(&corpus, &state);
        assert_eq!(
            stage_csv,
            "stage,distinguished,remaining,entropy_bits\nH1,2,0,1.000000\n"
        );
        assert_eq!(avc_csv, "group,quotient,avc_ratio\n");
    }

    #[test]
    fn covers_guard_skips_rank2() {
        // H1 = Z^2: neither cover guard applies
        let dir = tempfile::tempdir().unwrap();
        let corpus = vec![pres("F2", 2, &[]), pres("F2b", 2, &[&[1, 2, -1, -2]])];
        let cfg = RunConfig::new(dir.path());
        let state = run(&corpus, &[Stage::Covers], &cfg).unwrap();
        for rs in state.records.values() {
            assert!(rs.is_empty());
        }
        // same H1 and no cover records: still one block
        assert_eq!(state.partition.blocks().len(), 1);
    }

    #[test]
    fn failed_records_never_split() {
        let dir = tempfile::tempdir().unwrap();
        // different groups that FIA(3) would separate
        let corpus = vec![pres("F2", 2, &[]), pres("K", 2, &[&[1, 2, 1, -2]])];
        let mut cfg = RunConfig::new(dir.path());
        cfg.node_budget = 3; // guarantees budget exhaustion
        let state = run(&corpus, &[Stage::Fia(3)], &cfg).unwrap();
        assert_eq!(state.partition.blocks().len(), 1);
        assert!(state
            .records
            .values()
            .flatten()
            .all(|r| r.status == RecordStatus::FAILED));
    }

    #[test]
    fn determinism_across_jobs_and_resume() {
        let corpus: Vec<Presentation> = vec![
            pres("F2", 2, &[]),
            pres("Z", 1, &[]),
            pres("K4", 2, &[&[1, 1], &[2, 2], &[1, 2, 1, 2]]),
            pres("C6", 1, &[&[1; 6]]),
            pres("C5", 1, &[&[1; 5]]),
            pres("KB", 2, &[&[1, 2, 1, -2]]),
        ];
        let stages: Vec<Stage> = vec![
            Stage::H1,
            Stage::Fia(2),
            Stage::Fia(3),
            Stage::Covers,
            Stage::SimpleCovers("A5".to_string()),
        ];
        let d1 = tempfile::tempdir().unwrap();
        let cfg1 = RunConfig::new(d1.path());
        let s1 = run(&corpus, &stages, &cfg1).unwrap();
        let r1 = report(&corpus, &s1);

        let d2 = tempfile::tempdir().unwrap();
        let mut cfg2 = RunConfig::new(d2.path());
        cfg2.jobs = 8;
        let s2 = run(&corpus, &stages, &cfg2).unwrap();
        let r2 = report(&corpus, &s2);
        assert_eq!(r1, r2);
        assert_eq!(s1.partition, s2.partition);

        // interrupted run: first two stages, then resume with all
        let d3 = tempfile::tempdir().unwrap();
        let cfg3 = RunConfig::new(d3.path());
        run(&corpus, &stages[..2], &cfg3).unwrap();
        let s3 = resume(&corpus, &stages, &cfg3).unwrap();
        let r3 = report(&corpus, &s3);
        assert_eq!(r1, r3);

        // replaying a complete cache recomputes nothing: cache file
        // unchanged after a second full run
        let bytes_before = std::fs::read(cache_path(d3.path())).unwrap();
        resume(&corpus, &stages, &cfg3).unwrap();
        let bytes_after = std::fs::read(cache_path(d3.path())).unwrap();
        assert_eq!(bytes_before, bytes_after);
    }

    #[test]
    fn convention_mismatch_refuses_resume() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path()).unwrap();
        std::fs::write(
            cache_path(dir.path()),
            "{\"group\":\"F2\",\"descriptor\":\"H1#other-tag\",\"value\":\"Z^2\",\"cpu_ms\":0,\"status\":\"OK\"}\n",
        )
        .unwrap();
        let corpus = vec![pres("F2", 2, &[]), pres("Z", 1, &[])];
        let cfg = RunConfig::new(dir.path());
        assert!(matches!(
            run(&corpus, &default_stages(), &cfg),
            Err(Error::Cache(_))
        ));
    }

    #[test]
    fn avc_report_row() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"{"name":"t05599","gens":3,"relators":["aabbbbbaabbCC","aaaaacccBB"],"volume":4.0}
{"name":"Z","gens":1,"relators":[]}"#;
        let corpus = crate::fpgroups::parse_corpus(text).unwrap();
        let cfg = RunConfig::new(dir.path());
        let state = run(&corpus, &[Stage::SimpleCovers("A5".to_string())], &cfg).unwrap();
        let (_, avc) = report(&corpus, &state);
        let expected = 6.0 * std::f64::consts::PI * 2f64.ln() / (60.0 * 4.0);
        assert_eq!(
            avc,
            format!("group,quotient,avc_ratio\nt05599,A5,{expected:.6}\n")
        );
    }
}
