//! Canonical invariant descriptors, fingerprints, partition refinement,
//! entropy, and the AVC ratio diagnostic.
//!
//! Descriptor strings look like `FIA(3)#all-subgroups-multiset`: the
//! kind, then a convention tag after `#`. The tag names the exact
//! convention the value was computed under, so caches produced under a
//! different convention can never be compared silently.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::cosets::{self, DEFAULT_NODE_BUDGET};
use crate::fpgroups::Presentation;
use crate::zlinalg::AbelianInvariants;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantKind {
    H1,
    Fia(usize),
    AbelianCover,
    CyclicCovers(u64),
    SimpleCovers(String),
}

impl InvariantKind {
    /// The convention tag this crate computes the kind under.
    pub fn default_convention(&self) -> &'static str {
        match self {
            InvariantKind::H1 => "exponent-matrix",
            InvariantKind::Fia(_) => "all-subgroups-multiset",
            InvariantKind::AbelianCover => "finite-h1-regular-action",
            InvariantKind::CyclicCovers(_) => "infinite-cyclic-h1-only",
            InvariantKind::SimpleCovers(_) => "kernel-h1-multiset",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantDescriptor {
    pub kind: InvariantKind,
    pub convention: String,
}

impl InvariantDescriptor {
    pub fn new(kind: InvariantKind) -> Self {
        let convention = kind.default_convention().to_string();
        InvariantDescriptor { kind, convention }
    }

    pub fn to_string_form(&self) -> String {
        let head = match &self.kind {
            InvariantKind::H1 => "H1".to_string(),
            InvariantKind::Fia(n) => format!("FIA({n})"),
            InvariantKind::AbelianCover => "ABELIAN_COVER".to_string(),
            InvariantKind::CyclicCovers(n) => format!("CYCLIC_COVERS({n})"),
            InvariantKind::SimpleCovers(name) => format!("SIMPLE_COVERS({name})"),
        };
        format!("{head}#{}", self.convention)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("bad invariant descriptor: {s:?}"));
        let (head, convention) = s.split_once('#').ok_or_else(bad)?;
        if convention.is_empty() {
            return Err(bad());
        }
        let kind = if head == "H1" {
            InvariantKind::H1
        } else if head == "ABELIAN_COVER" {
            InvariantKind::AbelianCover
        } else if let Some(arg) = head.strip_prefix("FIA(").and_then(|r| r.strip_suffix(')')) {
            InvariantKind::Fia(arg.parse().map_err(|_| bad())?)
        } else if let Some(arg) = head
            .strip_prefix("CYCLIC_COVERS(")
            .and_then(|r| r.strip_suffix(')'))
        {
            InvariantKind::CyclicCovers(arg.parse().map_err(|_| bad())?)
        } else if let Some(arg) = head
            .strip_prefix("SIMPLE_COVERS(")
            .and_then(|r| r.strip_suffix(')'))
        {
            if arg.is_empty() {
                return Err(bad());
            }
            InvariantKind::SimpleCovers(arg.to_string())
        } else {
            return Err(bad());
        };
        Ok(InvariantDescriptor {
            kind,
            convention: convention.to_string(),
        })
    }
}

impl std::fmt::Display for InvariantDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_string_form())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecordStatus {
    OK,
    FAILED,
}

/// One computed (group, invariant) value; the unit of the cache.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub group: String,
    pub descriptor: String,
    pub value: String,
    pub cpu_ms: u64,
    pub status: RecordStatus,
}

/// Canonical multiset string over abelian invariants: entries sorted,
/// `;`-separated, wrapped in braces. The empty multiset is `{}`.
pub fn multiset_string(invs: &[AbelianInvariants]) -> String {
    let mut parts: Vec<String> = invs.iter().map(|a| a.canonical_string()).collect();
    parts.sort();
    format!("{{{}}}", parts.join(";"))
}

/// Canonical FIA string: `{index:invariants;...}` over ALL subgroups of
/// index <= max_index, as a sorted multiset of (index, value) pairs.
pub fn fia_fingerprint(p: &Presentation, max_index: usize) -> Result<String> {
    fia_fingerprint_with_budget(p, max_index, DEFAULT_NODE_BUDGET)
}

pub fn fia_fingerprint_with_budget(
    p: &Presentation,
    max_index: usize,
    node_budget: u64,
) -> Result<String> {
    let tables = cosets::low_index_subgroups(p, max_index, node_budget)?;
    let mut parts: Vec<(usize, String)> = Vec::with_capacity(tables.len());
    for t in &tables {
        let h1 = cosets::subgroup_h1(p, t)?;
        parts.push((t.index(), h1.canonical_string()));
    }
    parts.sort();
    let joined: Vec<String> = parts
        .into_iter()
        .map(|(n, v)| format!("{n}:{v}"))
        .collect();
    Ok(format!("{{{}}}", joined.join(";")))
}

/// Shannon entropy of a block-size profile, in bits.
pub fn entropy(block_sizes: &[usize]) -> Result<f64> {
    if block_sizes.is_empty() {
        return Err(Error::Precondition("entropy of an empty partition".into()));
    }
    if block_sizes.iter().any(|&s| s == 0) {
        return Err(Error::Precondition("empty block in partition".into()));
    }
    let total: usize = block_sizes.iter().sum();
    let n = total as f64;
    let h: f64 = block_sizes
        .iter()
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.log2()
        })
        .sum();
    // a single block yields -0.0; normalize so reports print 0.000000
    Ok(h.max(0.0))
}

/// 6 pi log|torsion| / (|Q| Vol): the normalized torsion growth that
/// the asymptotic volume conjecture predicts tends to 1.
pub fn avc_ratio(volume: f64, quotient_order: u64, torsion_log: f64) -> Result<f64> {
    if !(volume > 0.0) {
        return Err(Error::Precondition("volume must be positive".into()));
    }
    if quotient_order == 0 {
        return Err(Error::Precondition("quotient order must be >= 1".into()));
    }
    if torsion_log < 0.0 {
        return Err(Error::Precondition("torsion log must be nonnegative".into()));
    }
    Ok(6.0 * std::f64::consts::PI * torsion_log / (quotient_order as f64 * volume))
}

/// Join one group's records into its running fingerprint. Records must
/// be sorted by descriptor; FAILED records contribute nothing, so a
/// budget exhaustion can never create a distinction.
pub fn accumulate_fingerprint(records: &[InvariantRecord]) -> Result<String> {
    let mut seen: HashMap<&str, &str> = HashMap::new();
    let mut out = String::new();
    for w in records.windows(2) {
        if w[0].descriptor > w[1].descriptor {
            return Err(Error::Precondition(
                "records must be sorted by descriptor".into(),
            ));
        }
    }
    for r in records {
        if let Some(&prev) = seen.get(r.descriptor.as_str()) {
            if prev != r.value {
                return Err(Error::Validation(format!(
                    "conflicting records for descriptor {}",
                    r.descriptor
                )));
            }
            continue;
        }
        seen.insert(&r.descriptor, &r.value);
        if r.status == RecordStatus::FAILED {
            continue;
        }
        out.push_str(&r.descriptor);
        out.push('=');
        out.push_str(&r.value);
        out.push('|');
    }
    Ok(out)
}

/// Disjoint blocks of group names, refined stage by stage. Blocks never
/// merge; names keep their original corpus order within a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn single_block(names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Precondition("empty corpus".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in names {
            if !seen.insert(n) {
                return Err(Error::Validation(format!("duplicate group name {n:?}")));
            }
        }
        Ok(Partition {
            blocks: vec![names.to_vec()],
        })
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy(&self.block_sizes()).expect("partition is never empty")
    }

    /// Split every block whose members all have a key, grouping by
    /// equal key. Blocks with any member missing from `keys` are left
    /// whole. Sub-blocks are ordered by key string; block order is
    /// otherwise preserved. Never merges.
    pub fn refine(&self, keys: &HashMap<String, String>) -> Partition {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            if block.len() == 1 || !block.iter().all(|n| keys.contains_key(n)) {
                blocks.push(block.clone());
                continue;
            }
            let mut by_key: Vec<(&String, Vec<String>)> = Vec::new();
            for name in block {
                let k = &keys[name];
                match by_key.iter_mut().find(|(bk, _)| *bk == k) {
                    Some((_, names)) => names.push(name.clone()),
                    None => by_key.push((k, vec![name.clone()])),
                }
            }
            by_key.sort_by(|a, b| a.0.cmp(b.0));
            blocks.extend(by_key.into_iter().map(|(_, names)| names));
        }
        Partition { blocks }
    }
}
