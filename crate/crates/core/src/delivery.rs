//! Channel-block delivery plans and the per-receiver signal-dimension ledger.
//!
//! A block is built from a set `S` of cache offsets and a set `Z` of
//! zero-forcing offsets, both drawn from `{1, .., K_R-1}`. Receiver `j` is
//! served the subfiles `W_{d_j}[X, j+S]` for every transmitter set `X`, each
//! precoded by the transmitters in `X` to vanish at receivers `j+Z` (indices
//! mod `K_R`). Because the offsets are the same for every destination, each
//! receiver sits in the cache set of exactly `|S|` foreign groups and in the
//! zero-forcing set of exactly `|Z|` of them; the remaining
//! `K_R - 1 - |S| - |Z|` groups interfere and are aligned, one dimension each.
//!
//! Running `S` over every `t`-subset of the offsets reaches every receiver
//! subset of size `t` not containing the destination exactly once.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::combinatorics::{enumerate_subsets, NodeSet};
use crate::error::{Error, Result};
use crate::model::{DemandVector, SubfileId};
use crate::placement::{CentralizedPlacement, DecentralizedLayout, SubfileUniverse};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanMode {
    Centralized,
    /// Decentralized subfiles cached by exactly `t` receivers other than the
    /// destination.
    DecentralizedTier(usize),
}

impl fmt::Display for PlanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanMode::Centralized => f.write_str("centralized"),
            PlanMode::DecentralizedTier(t) => write!(f, "decentralized-tier({t})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScheduledSubfile {
    pub subfile: SubfileId,
    pub dest: usize,
    pub zf_targets: NodeSet,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryPlan {
    pub mode: PlanMode,
    pub blocks: Vec<Vec<ScheduledSubfile>>,
}

impl DeliveryPlan {
    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(Vec::is_empty)
    }

    pub fn transmissions(&self) -> impl Iterator<Item = &ScheduledSubfile> {
        self.blocks.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Line-oriented serialization, 1-based indices throughout.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.mode {
            PlanMode::Centralized => out.push_str("# mode=centralized\n"),
            PlanMode::DecentralizedTier(t) => {
                let _ = writeln!(out, "# mode=decentralized-tier t={t}");
            }
        }
        for s in self.transmissions() {
            let _ = writeln!(
                out,
                "block={} file={} tx={} cachedRx={} zf={} dest={}",
                s.block + 1,
                s.subfile.file + 1,
                s.subfile.tx_set.braced(),
                s.subfile.rx_set.braced(),
                s.zf_targets.braced(),
                s.dest + 1
            );
        }
        out
    }
}

/// Serializes several plans (e.g. all decentralized tiers) back to back.
pub fn plans_to_text(plans: &[DeliveryPlan]) -> String {
    plans.iter().map(DeliveryPlan::to_text).collect()
}

/// Parses the output of [`plans_to_text`]. A `# mode=` header starts a new
/// plan; lines before any header belong to a centralized plan.
pub fn parse_plans(text: &str) -> Result<Vec<DeliveryPlan>> {
    let mut plans: Vec<DeliveryPlan> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(mode) = comment.strip_prefix("mode=") {
                let mode = if mode == "centralized" {
                    PlanMode::Centralized
                } else if let Some(t) = mode.strip_prefix("decentralized-tier t=") {
                    PlanMode::DecentralizedTier(t.trim().parse().map_err(|_| err(format!("bad tier {t:?}")))?)
                } else {
                    return Err(err(format!("unknown mode {mode:?}")));
                };
                plans.push(DeliveryPlan { mode, blocks: Vec::new() });
            }
            continue;
        }
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| err(format!("expected key=value, got {tok:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing field {k}")));
        let one_based = |k: &str| -> Result<usize> {
            let v: usize = get(k)?.parse().map_err(|_| err(format!("bad {k}")))?;
            v.checked_sub(1).ok_or_else(|| err(format!("{k} is 1-based")))
        };
        let block = one_based("block")?;
        let file = one_based("file")?;
        let dest = one_based("dest")?;
        let tx_set = NodeSet::parse_braced(get("tx")?)?;
        let rx_set = NodeSet::parse_braced(get("cachedRx")?)?;
        let zf_targets = NodeSet::parse_braced(get("zf")?)?;
        if plans.is_empty() {
            plans.push(DeliveryPlan { mode: PlanMode::Centralized, blocks: Vec::new() });
        }
        let plan = plans.last_mut().expect("pushed above");
        if plan.blocks.len() <= block {
            plan.blocks.resize(block + 1, Vec::new());
        }
        plan.blocks[block].push(ScheduledSubfile {
            subfile: SubfileId::new(file, tx_set, rx_set),
            dest,
            zf_targets,
            block,
        });
    }
    Ok(plans)
}

/// Zero-forcing offsets for cache offsets `cache`: the next free offsets in
/// cyclic order after the largest cache offset.
fn zf_offsets(k_r: usize, cache: &NodeSet, count: usize) -> NodeSet {
    let mut out = NodeSet::EMPTY;
    if k_r < 2 {
        return out;
    }
    let ring = k_r - 1;
    // 0-based ring position of the largest cache offset (offset 0 if none).
    let base = (cache.iter().last().unwrap_or(0) + ring - 1) % ring;
    for step in 1..=ring {
        if out.len() == count {
            break;
        }
        let off = (base + step) % ring + 1;
        if !cache.contains(off) {
            out.insert(off);
        }
    }
    out
}

/// Blocks delivering, to every receiver, the subfiles cached at `t` other
/// receivers, with ZF across `t_t` transmitters.
fn tier_blocks(
    k_r: usize,
    t_t: usize,
    t: usize,
    tx_sets: &[NodeSet],
    demand: &DemandVector,
) -> Result<Vec<Vec<ScheduledSubfile>>> {
    if t >= k_r {
        return Ok(Vec::new());
    }
    let zf_count = t_t.saturating_sub(1).min(k_r - 1 - t);
    let mut blocks = Vec::new();
    for (b, raw) in enumerate_subsets(k_r - 1, t)?.into_iter().enumerate() {
        // Offsets live in 1..K_R.
        let cache_offsets = raw.rotate(1, k_r);
        let zf = zf_offsets(k_r, &cache_offsets, zf_count);
        let mut block = Vec::with_capacity(k_r * tx_sets.len());
        for dest in 0..k_r {
            let rx_set = cache_offsets.rotate(dest, k_r);
            let zf_targets = zf.rotate(dest, k_r);
            for &x in tx_sets {
                block.push(ScheduledSubfile {
                    subfile: SubfileId::new(demand.file_of(dest), x, rx_set),
                    dest,
                    zf_targets,
                    block: b,
                });
            }
        }
        blocks.push(block);
    }
    Ok(blocks)
}

pub fn build_centralized_plan(placement: &CentralizedPlacement, demand: &DemandVector) -> Result<DeliveryPlan> {
    check_demand(placement, demand)?;
    let k_r = placement.k_r();
    if placement.t_r() < k_r && placement.t_t() == 0 {
        return Err(Error::InvalidConfig("t_T = 0 leaves uncached subfiles with no transmitter holding them".into()));
    }
    let blocks = tier_blocks(k_r, placement.t_t(), placement.t_r(), placement.tx_sets(), demand)?;
    Ok(DeliveryPlan { mode: PlanMode::Centralized, blocks })
}

/// One plan per tier `t = 0 .. K_R-1`; the last tier is a pure broadcast
/// where every other receiver cancels the interference from its cache.
pub fn build_decentralized_plan(layout: &DecentralizedLayout, demand: &DemandVector) -> Result<Vec<DeliveryPlan>> {
    check_demand(layout, demand)?;
    let k_r = layout.k_r();
    (0..k_r)
        .map(|t| {
            Ok(DeliveryPlan {
                mode: PlanMode::DecentralizedTier(t),
                blocks: tier_blocks(k_r, layout.t_t(), t, layout.tx_sets(), demand)?,
            })
        })
        .collect()
}

fn check_demand(universe: &impl SubfileUniverse, demand: &DemandVector) -> Result<()> {
    if demand.len() != universe.k_r() {
        return Err(Error::Demand(format!("demand has {} entries for {} receivers", demand.len(), universe.k_r())));
    }
    if demand.as_slice().iter().any(|&d| d >= universe.n_files()) {
        return Err(Error::Demand("file index outside library".into()));
    }
    Ok(())
}

/// Interfering transmissions sharing a label collapse into one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlignmentGroup {
    pub dest: usize,
    pub rx_set: NodeSet,
    pub zf_targets: NodeSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReceiverLedger {
    pub desired_dims: usize,
    pub zf_removed: usize,
    pub ic_removed: usize,
    /// Interfering transmissions before alignment.
    pub interfering: usize,
    /// Residual interference dimensions after alignment.
    pub aligned_dims: usize,
    pub groups: Vec<(AlignmentGroup, usize)>,
}

impl ReceiverLedger {
    pub fn total_dims(&self) -> usize {
        self.desired_dims + self.aligned_dims
    }

    pub fn dof(&self) -> Rational {
        match self.total_dims() {
            0 => Rational::ZERO,
            total => Rational::new(self.desired_dims as i128, total as i128),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceLedger {
    pub block: usize,
    pub transmissions: usize,
    pub receivers: Vec<ReceiverLedger>,
}

impl SubspaceLedger {
    /// Block length in signal dimensions: the busiest receiver.
    pub fn duration(&self) -> usize {
        self.receivers.iter().map(ReceiverLedger::total_dims).max().unwrap_or(0)
    }

    pub fn desired_total(&self) -> usize {
        self.receivers.iter().map(|r| r.desired_dims).sum()
    }

    /// Delivered subfiles per signal dimension of the block. Equal to the sum
    /// of per-receiver DoF when every receiver is equally loaded.
    pub fn sdof(&self) -> Rational {
        match self.duration() {
            0 => Rational::ZERO,
            d => Rational::new(self.desired_total() as i128, d as i128),
        }
    }

    /// Every transmission is accounted exactly once at every receiver.
    pub fn is_conserved(&self) -> bool {
        self.receivers
            .iter()
            .all(|r| r.desired_dims + r.zf_removed + r.ic_removed + r.interfering == self.transmissions)
    }
}

/// Classifies every transmission of `block` at every receiver.
pub fn account_block(
    block: &[ScheduledSubfile],
    universe: &impl SubfileUniverse,
    demand: &DemandVector,
) -> Result<SubspaceLedger> {
    let k_r = universe.k_r();
    let mut receivers = vec![ReceiverLedger::default(); k_r];
    let mut groups: Vec<BTreeMap<AlignmentGroup, usize>> = vec![BTreeMap::new(); k_r];
    for s in block {
        let label = format!("{} -> Rx{}", s.subfile, s.dest + 1);
        if s.dest >= k_r || s.zf_targets.iter().any(|z| z >= k_r) || s.subfile.rx_set.iter().any(|r| r >= k_r) {
            return Err(Error::MalformedPlan(format!("{label}: receiver index out of range")));
        }
        if s.subfile.file != demand.file_of(s.dest) {
            return Err(Error::MalformedPlan(format!("{label}: destination did not request this file")));
        }
        if universe.is_cached_at(s.dest, &s.subfile) {
            return Err(Error::MalformedPlan(format!("{label}: destination already caches it")));
        }
        if s.zf_targets.contains(s.dest) {
            return Err(Error::MalformedPlan(format!("{label}: zero-forced at its own destination")));
        }
        if !s.zf_targets.is_disjoint(&s.subfile.rx_set) {
            return Err(Error::MalformedPlan(format!("{label}: zero-forced at a caching receiver")));
        }
        if !s.zf_targets.is_empty() && s.zf_targets.len() >= s.subfile.tx_set.len() {
            return Err(Error::MalformedPlan(format!(
                "{label}: {} transmitters cannot null {} receivers",
                s.subfile.tx_set.len(),
                s.zf_targets.len()
            )));
        }
        for (r, ledger) in receivers.iter_mut().enumerate() {
            if r == s.dest {
                ledger.desired_dims += 1;
            } else if universe.is_cached_at(r, &s.subfile) {
                ledger.ic_removed += 1;
            } else if s.zf_targets.contains(r) {
                ledger.zf_removed += 1;
            } else {
                ledger.interfering += 1;
                let g = AlignmentGroup { dest: s.dest, rx_set: s.subfile.rx_set, zf_targets: s.zf_targets };
                *groups[r].entry(g).or_default() += 1;
            }
        }
    }
    for (ledger, g) in receivers.iter_mut().zip(groups) {
        ledger.aligned_dims = g.len();
        ledger.groups = g.into_iter().collect();
    }
    let block_index = block.first().map_or(0, |s| s.block);
    Ok(SubspaceLedger { block: block_index, transmissions: block.len(), receivers })
}

/// Ledgers of every block of a plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanLedger {
    pub mode: PlanMode,
    pub blocks: Vec<SubspaceLedger>,
}

impl PlanLedger {
    /// Total delivered subfiles over total signal dimensions. `None` for an
    /// empty plan.
    pub fn sdof(&self) -> Option<Rational> {
        let dims: usize = self.blocks.iter().map(SubspaceLedger::duration).sum();
        let desired: usize = self.blocks.iter().map(SubspaceLedger::desired_total).sum();
        (dims > 0).then(|| Rational::new(desired as i128, dims as i128))
    }

    pub fn is_conserved(&self) -> bool {
        self.blocks.iter().all(SubspaceLedger::is_conserved)
    }
}

pub fn account_plan(plan: &DeliveryPlan, universe: &impl SubfileUniverse, demand: &DemandVector) -> Result<PlanLedger> {
    let blocks = plan
        .blocks
        .iter()
        .filter(|b| !b.is_empty())
        .map(|b| account_block(b, universe, demand))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlanLedger { mode: plan.mode, blocks })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompletenessReport {
    /// (receiver, subfile) pairs that are needed but never scheduled.
    pub missing: Vec<(usize, SubfileId)>,
    /// (receiver, subfile, times scheduled) for anything sent more than once.
    pub duplicates: Vec<(usize, SubfileId, usize)>,
    /// Transmissions of subfiles the destination caches or did not request.
    pub unneeded: Vec<ScheduledSubfile>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.missing.is_empty() && self.duplicates.is_empty() && self.unneeded.is_empty()
    }

    pub fn missing_for(&self, receiver: usize) -> usize {
        self.missing.iter().filter(|(r, _)| *r == receiver).count()
    }
}

/// Checks that every demanded subfile is cached at its destination or
/// scheduled exactly once across `plans`.
pub fn verify_completeness(
    plans: &[DeliveryPlan],
    universe: &impl SubfileUniverse,
    demand: &DemandVector,
) -> CompletenessReport {
    let mut scheduled: BTreeMap<(usize, SubfileId), usize> = BTreeMap::new();
    let mut report = CompletenessReport::default();
    for s in plans.iter().flat_map(DeliveryPlan::transmissions) {
        let wanted = s.dest < demand.len()
            && s.subfile.file == demand.file_of(s.dest)
            && !universe.is_cached_at(s.dest, &s.subfile);
        if wanted {
            *scheduled.entry((s.dest, s.subfile)).or_default() += 1;
        } else {
            report.unneeded.push(*s);
        }
    }
    for r in 0..universe.k_r() {
        for sub in universe.subfile_classes(demand.file_of(r)) {
            if universe.is_cached_at(r, &sub) {
                continue;
            }
            match scheduled.get(&(r, sub)).copied().unwrap_or(0) {
                0 => report.missing.push((r, sub)),
                1 => {}
                n => report.duplicates.push((r, sub, n)),
            }
        }
    }
    // Anything scheduled for a class the placement does not know about.
    for ((r, sub), _) in scheduled {
        let known = universe.subfile_classes(sub.file).contains(&sub);
        if !known {
            report
                .unneeded
                .extend(plans.iter().flat_map(DeliveryPlan::transmissions).filter(|s| s.dest == r && s.subfile == sub));
        }
    }
    report
}
