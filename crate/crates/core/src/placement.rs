//! Cache placement at both ends of the network.
//!
//! The centralized placement splits every file into `C(K_T,t_T) * C(K_R,t_R)`
//! equal subfiles `W_{X,Y}` with `|X| = t_T`, `|Y| = t_R`. The decentralized
//! placement keeps the transmitter-side split into `C(K_T,t_T)` partitions but
//! lets every receiver cache `floor(M_R F / N)` uniformly random bits of each
//! file, which refines each partition into `2^K_R` classes by the exact set
//! of receivers holding a bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{binomial, enumerate_all_subsets, enumerate_subsets, NodeSet};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, SubfileId};
use crate::rational::Rational;

/// Identifier of the receiver-side sampler, recorded in every export.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64, stream=receiver*N+file)+partial_fisher_yates";

/// Largest receiver count the decentralized placement supports (the subset
/// profile is tabulated over all `2^K_R` receiver subsets).
pub const MAX_DECENTRALIZED_RECEIVERS: usize = 20;

/// The subfile classes a placement splits each file into, and which receivers
/// hold each class.
pub trait SubfileUniverse {
    fn k_t(&self) -> usize;
    fn k_r(&self) -> usize;
    fn n_files(&self) -> usize;

    /// Every subfile class of `file` in canonical order.
    fn subfile_classes(&self, file: usize) -> Vec<SubfileId>;

    fn is_cached_at(&self, receiver: usize, subfile: &SubfileId) -> bool {
        subfile.rx_set.contains(receiver)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizedPlacement {
    k_t: usize,
    k_r: usize,
    n_files: usize,
    t_t: usize,
    t_r: usize,
    tx_sets: Vec<NodeSet>,
    rx_sets: Vec<NodeSet>,
    tx_cache: Vec<BTreeSet<SubfileId>>,
    rx_cache: Vec<BTreeSet<SubfileId>>,
    subfile_fraction: Rational,
}

pub fn place_centralized(cfg: &NetworkConfig) -> Result<CentralizedPlacement> {
    let t_t = cfg.t_t_count()?;
    let t_r = cfg.t_r_count()?;
    let tx_sets = enumerate_subsets(cfg.k_t(), t_t)?;
    let rx_sets = enumerate_subsets(cfg.k_r(), t_r)?;
    let per_file = tx_sets.len() * rx_sets.len();
    let subfile_fraction = Rational::new(1, per_file as i128);

    let mut tx_cache = vec![BTreeSet::new(); cfg.k_t()];
    let mut rx_cache = vec![BTreeSet::new(); cfg.k_r()];
    for file in 0..cfg.n_files() {
        for &x in &tx_sets {
            for &y in &rx_sets {
                let s = SubfileId::new(file, x, y);
                for i in x.iter() {
                    tx_cache[i].insert(s);
                }
                for j in y.iter() {
                    rx_cache[j].insert(s);
                }
            }
        }
    }
    Ok(CentralizedPlacement {
        k_t: cfg.k_t(),
        k_r: cfg.k_r(),
        n_files: cfg.n_files(),
        t_t,
        t_r,
        tx_sets,
        rx_sets,
        tx_cache,
        rx_cache,
        subfile_fraction,
    })
}

impl CentralizedPlacement {
    pub fn t_t(&self) -> usize {
        self.t_t
    }

    pub fn t_r(&self) -> usize {
        self.t_r
    }

    pub fn tx_sets(&self) -> &[NodeSet] {
        &self.tx_sets
    }

    pub fn rx_sets(&self) -> &[NodeSet] {
        &self.rx_sets
    }

    /// Size of every subfile as a fraction of the file.
    pub fn subfile_fraction(&self) -> Rational {
        self.subfile_fraction
    }

    pub fn subfiles_per_file(&self) -> usize {
        self.tx_sets.len() * self.rx_sets.len()
    }

    pub fn tx_cache(&self, tx: usize) -> &BTreeSet<SubfileId> {
        &self.tx_cache[tx]
    }

    pub fn rx_cache(&self, rx: usize) -> &BTreeSet<SubfileId> {
        &self.rx_cache[rx]
    }

    /// Cache occupancy of a transmitter, in files.
    pub fn tx_load(&self, tx: usize) -> Rational {
        Rational::from(self.tx_cache[tx].len()) * self.subfile_fraction
    }

    /// Cache occupancy of a receiver, in files.
    pub fn rx_load(&self, rx: usize) -> Rational {
        Rational::from(self.rx_cache[rx].len()) * self.subfile_fraction
    }

    /// Text listing of every node's cache, 1-based.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# placement=centralized K_T={} K_R={} N={} t_T={} t_R={} subfile_fraction={}",
            self.k_t, self.k_r, self.n_files, self.t_t, self.t_r, self.subfile_fraction
        );
        for (i, cache) in self.tx_cache.iter().enumerate() {
            let items: Vec<String> = cache.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "tx {}: {}", i + 1, items.join(" "));
        }
        for (j, cache) in self.rx_cache.iter().enumerate() {
            let items: Vec<String> = cache.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "rx {}: {}", j + 1, items.join(" "));
        }
        out
    }
}

impl SubfileUniverse for CentralizedPlacement {
    fn k_t(&self) -> usize {
        self.k_t
    }

    fn k_r(&self) -> usize {
        self.k_r
    }

    fn n_files(&self) -> usize {
        self.n_files
    }

    fn subfile_classes(&self, file: usize) -> Vec<SubfileId> {
        self.tx_sets.iter().flat_map(|&x| self.rx_sets.iter().map(move |&y| SubfileId::new(file, x, y))).collect()
    }
}

/// One transmitter-side partition of a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TxPartition {
    pub file: usize,
    pub tx_set: NodeSet,
}

/// Subfile classes of the decentralized scheme: `C(K_T,t_T)` transmitter
/// partitions, each refined by every receiver subset. Independent of the
/// sampled bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecentralizedLayout {
    k_t: usize,
    k_r: usize,
    n_files: usize,
    t_t: usize,
    tx_sets: Vec<NodeSet>,
}

impl DecentralizedLayout {
    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        let t_t = cfg.t_t_count()?;
        if cfg.k_r() > MAX_DECENTRALIZED_RECEIVERS {
            return Err(Error::InvalidConfig(format!(
                "decentralized placement supports at most {MAX_DECENTRALIZED_RECEIVERS} receivers"
            )));
        }
        Ok(DecentralizedLayout {
            k_t: cfg.k_t(),
            k_r: cfg.k_r(),
            n_files: cfg.n_files(),
            t_t,
            tx_sets: enumerate_subsets(cfg.k_t(), t_t)?,
        })
    }

    pub fn t_t(&self) -> usize {
        self.t_t
    }

    pub fn tx_sets(&self) -> &[NodeSet] {
        &self.tx_sets
    }
}

impl SubfileUniverse for DecentralizedLayout {
    fn k_t(&self) -> usize {
        self.k_t
    }

    fn k_r(&self) -> usize {
        self.k_r
    }

    fn n_files(&self) -> usize {
        self.n_files
    }

    fn subfile_classes(&self, file: usize) -> Vec<SubfileId> {
        let rx_subsets = enumerate_all_subsets(self.k_r).expect("k_r checked at construction");
        self.tx_sets.iter().flat_map(|&x| rx_subsets.iter().map(move |&y| SubfileId::new(file, x, y))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecentralizedPlacement {
    layout: DecentralizedLayout,
    file_bits: u64,
    padded_bits: u64,
    tx_cache: Vec<BTreeSet<TxPartition>>,
    /// `rx_bits[receiver][file]`: sorted indices of cached bits.
    rx_bits: Vec<Vec<Vec<u32>>>,
    seed: u64,
}

pub fn place_decentralized(cfg: &NetworkConfig, seed: u64) -> Result<DecentralizedPlacement> {
    let layout = DecentralizedLayout::new(cfg)?;
    let file_bits = cfg.file_bits().ok_or(Error::MissingFileBits)?;
    if file_bits > u32::MAX as u64 {
        return Err(Error::InvalidConfig(format!("file_bits {file_bits} exceeds the supported {}", u32::MAX)));
    }
    let tx_sets = layout.tx_sets.clone();
    let parts = tx_sets.len() as u64;
    let padded_bits = file_bits.div_ceil(parts) * parts;

    let mut tx_cache = vec![BTreeSet::new(); cfg.k_t()];
    for file in 0..cfg.n_files() {
        for &x in &tx_sets {
            for i in x.iter() {
                tx_cache[i].insert(TxPartition { file, tx_set: x });
            }
        }
    }

    let per_file = (cfg.m_r() * Rational::from(file_bits) / Rational::from(cfg.n_files())).floor() as usize;
    let n_files = cfg.n_files();
    let streams: Vec<(usize, usize)> = (0..cfg.k_r()).flat_map(|j| (0..n_files).map(move |f| (j, f))).collect();
    let sampled: Vec<Vec<u32>> = streams
        .par_iter()
        .map(|&(j, f)| sample_bits(seed, (j * n_files + f) as u64, file_bits as u32, per_file))
        .collect();
    let mut rx_bits = vec![Vec::with_capacity(n_files); cfg.k_r()];
    for ((j, _), bits) in streams.into_iter().zip(sampled) {
        rx_bits[j].push(bits);
    }

    Ok(DecentralizedPlacement { layout, file_bits, padded_bits, tx_cache, rx_bits, seed })
}

/// `amount` distinct bit indices out of `len`, sorted.
fn sample_bits(seed: u64, stream: u64, len: u32, amount: usize) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut idx: Vec<u32> = (0..len).collect();
    let (chosen, _) = idx.partial_shuffle(&mut rng, amount);
    let mut chosen = chosen.to_vec();
    chosen.sort_unstable();
    chosen
}

impl DecentralizedPlacement {
    pub fn layout(&self) -> &DecentralizedLayout {
        &self.layout
    }

    pub fn t_t(&self) -> usize {
        self.layout.t_t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn file_bits(&self) -> u64 {
        self.file_bits
    }

    /// File length after zero-padding to a multiple of the partition count.
    pub fn padded_bits(&self) -> u64 {
        self.padded_bits
    }

    pub fn tx_sets(&self) -> &[NodeSet] {
        &self.layout.tx_sets
    }

    pub fn tx_cache(&self, tx: usize) -> &BTreeSet<TxPartition> {
        &self.tx_cache[tx]
    }

    pub fn rx_bits(&self, rx: usize, file: usize) -> &[u32] {
        &self.rx_bits[rx][file]
    }

    /// Real (non-padding) bit range of transmitter partition `p`.
    pub fn partition_range(&self, p: usize) -> Range<u64> {
        let width = self.padded_bits / self.layout.tx_sets.len() as u64;
        let start = (p as u64 * width).min(self.file_bits);
        let end = ((p as u64 + 1) * width).min(self.file_bits);
        start..end
    }

    /// Groups the bits of `file` by transmitter partition and the exact set
    /// of receivers caching them.
    pub fn subset_profile(&self, file: usize) -> Result<SubsetProfile> {
        if file >= self.layout.n_files {
            return Err(Error::Domain(format!("file index {} outside library", file + 1)));
        }
        let mut mask = vec![0u32; self.file_bits as usize];
        for j in 0..self.layout.k_r {
            for &b in &self.rx_bits[j][file] {
                mask[b as usize] |= 1 << j;
            }
        }
        let rx_subsets = enumerate_all_subsets(self.layout.k_r)?;
        let mut counts = BTreeMap::new();
        for (p, &x) in self.layout.tx_sets.iter().enumerate() {
            let mut hist = vec![0u64; 1 << self.layout.k_r];
            let range = self.partition_range(p);
            for &m in &mask[range.start as usize..range.end as usize] {
                hist[m as usize] += 1;
            }
            for &y in &rx_subsets {
                counts.insert((x, y), hist[y.bits() as usize]);
            }
        }
        Ok(SubsetProfile { k_r: self.layout.k_r, file_bits: self.file_bits, counts })
    }

    /// Text listing: transmitter partitions and per-(receiver, file) bit ranges.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# placement=decentralized K_T={} K_R={} N={} t_T={} F={} padded_F={} seed={} rng={}",
            self.layout.k_t,
            self.layout.k_r,
            self.layout.n_files,
            self.layout.t_t,
            self.file_bits,
            self.padded_bits,
            self.seed,
            RNG_ALGORITHM
        );
        for (i, cache) in self.tx_cache.iter().enumerate() {
            let items: Vec<String> =
                cache.iter().map(|p| format!("W{}_{{{}}}", p.file + 1, p.tx_set.compact())).collect();
            let _ = writeln!(out, "tx {}: {}", i + 1, items.join(" "));
        }
        for j in 0..self.layout.k_r {
            for f in 0..self.layout.n_files {
                let _ = writeln!(out, "rx {} file {}: {}", j + 1, f + 1, format_ranges(&self.rx_bits[j][f]));
            }
        }
        out
    }
}

impl SubfileUniverse for DecentralizedPlacement {
    fn k_t(&self) -> usize {
        self.layout.k_t
    }

    fn k_r(&self) -> usize {
        self.layout.k_r
    }

    fn n_files(&self) -> usize {
        self.layout.n_files
    }

    fn subfile_classes(&self, file: usize) -> Vec<SubfileId> {
        self.layout.subfile_classes(file)
    }
}

/// `0-4,7,9-10` for a sorted index list.
fn format_ranges(bits: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < bits.len() {
        let start = bits[i];
        let mut end = start;
        while i + 1 < bits.len() && bits[i + 1] == end + 1 {
            i += 1;
            end = bits[i];
        }
        parts.push(if start == end { start.to_string() } else { format!("{start}-{end}") });
        i += 1;
    }
    parts.join(",")
}

/// Bit counts of one file per (transmitter partition, exact receiver subset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetProfile {
    k_r: usize,
    file_bits: u64,
    counts: BTreeMap<(NodeSet, NodeSet), u64>,
}

impl SubsetProfile {
    pub fn count(&self, tx_set: NodeSet, rx_set: NodeSet) -> u64 {
        self.counts.get(&(tx_set, rx_set)).copied().unwrap_or(0)
    }

    /// Number of (partition, receiver subset) classes, empty ones included.
    pub fn class_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn file_bits(&self) -> u64 {
        self.file_bits
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(NodeSet, NodeSet), &u64)> {
        self.counts.iter()
    }

    /// Bits of partition `tx_set` held by exactly `t` receivers.
    pub fn bits_cached_by(&self, tx_set: NodeSet, t: usize) -> u64 {
        self.counts.iter().filter(|((x, y), _)| *x == tx_set && y.len() == t).map(|(_, c)| c).sum()
    }

    pub fn k_r(&self) -> usize {
        self.k_r
    }
}

/// Asymptotic fraction of a file cached by one particular set of `t`
/// receivers and by no other receiver: `p^t (1-p)^(K_R-t)`, `p = M_R/N`.
pub fn expected_fraction(cfg: &NetworkConfig, t: usize) -> Result<Rational> {
    if t > cfg.k_r() {
        return Err(Error::Domain(format!("t = {t} exceeds K_R = {}", cfg.k_r())));
    }
    let p = cfg.rx_fraction();
    Ok(p.pow(t as u32) * (Rational::ONE - p).pow((cfg.k_r() - t) as u32))
}

/// Asymptotic size of one decentralized class `W_{X,Y}` with `|Y| = t`.
pub fn expected_class_fraction(cfg: &NetworkConfig, t: usize) -> Result<Rational> {
    let parts = binomial(cfg.k_t(), cfg.t_t_count()?)?;
    Ok(expected_fraction(cfg, t)? / Rational::from(parts))
}
