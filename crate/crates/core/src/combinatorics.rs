//! Node subsets, binomial coefficients and lexicographic subset enumeration.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set a [`NodeSet`] can index.
pub const MAX_NODES: usize = 64;

/// A set of transmitter or receiver indices, 0-based internally.
///
/// Ordering is lexicographic on the sorted member lists, so `{0,1} < {0,2} <
/// {1,2}` and the empty set sorts first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut bits = 0u64;
        for i in indices {
            if i >= MAX_NODES {
                return Err(Error::Domain(format!("node index {i} exceeds {MAX_NODES}")));
            }
            bits |= 1 << i;
        }
        Ok(NodeSet(bits))
    }

    /// Builds a set from 1-based indices as written in reports.
    pub fn from_one_based<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let mut zero_based = Vec::new();
        for i in indices {
            if i == 0 {
                return Err(Error::Domain("1-based node index 0".into()));
            }
            zero_based.push(i - 1);
        }
        Self::from_indices(zero_based)
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_NODES);
        NodeSet(1 << i)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < MAX_NODES && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_NODES);
        self.0 |= 1 << i;
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..MAX_NODES).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{1,2}` style, 1-based.
    pub fn braced(&self) -> String {
        let inner: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Concatenated 1-based members (`12`), `∅` when empty. Only unambiguous
    /// for ground sets of at most nine nodes.
    pub fn compact(&self) -> String {
        if self.is_empty() {
            "∅".into()
        } else {
            self.iter().map(|i| (i + 1).to_string()).collect()
        }
    }

    /// Parses `{1,2}` or `{}` (1-based).
    pub fn parse_braced(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected {{..}} set, got {s:?}")))?;
        let mut members = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = tok.parse().map_err(|_| Error::Parse(format!("bad set member {tok:?}")))?;
            members.push(v);
        }
        Self::from_one_based(members)
    }

    /// Adds `shift` to every member modulo `ground`.
    pub fn rotate(&self, shift: usize, ground: usize) -> NodeSet {
        let mut out = NodeSet::EMPTY;
        for i in self.iter() {
            out.insert((i + shift) % ground);
        }
        out
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.braced())
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.braced())
    }
}

/// Exact binomial coefficient `n choose k`.
pub fn binomial(n: usize, k: usize) -> Result<u64> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) with k > n")));
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Domain(format!("binomial({n}, {k}) overflows u64")));
        }
    }
    Ok(acc as u64)
}

/// All `size`-subsets of a `ground`-element set in lexicographic order.
pub fn enumerate_subsets(ground: usize, size: usize) -> Result<Vec<NodeSet>> {
    if size > ground {
        return Err(Error::Domain(format!("cannot choose {size} elements out of {ground}")));
    }
    if ground > MAX_NODES {
        return Err(Error::Domain(format!("ground set {ground} exceeds {MAX_NODES}")));
    }
    let mut out = Vec::with_capacity(binomial(ground, size)? as usize);
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(NodeSet::from_indices(idx.iter().copied())?);
        // Advance the rightmost index that still has room.
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < ground - size + p) else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..size {
            idx[p] = idx[p - 1] + 1;
        }
    }
    Ok(out)
}

/// All subsets of a `ground`-element set, by size then lexicographically.
pub fn enumerate_all_subsets(ground: usize) -> Result<Vec<NodeSet>> {
    let mut out = Vec::new();
    for size in 0..=ground {
        out.extend(enumerate_subsets(ground, size)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sets(v: &[&[usize]]) -> Vec<NodeSet> {
        v.iter().map(|s| NodeSet::from_one_based(s.iter().copied()).unwrap()).collect()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(4, 1).unwrap(), 4);
        assert_eq!(binomial(3, 2).unwrap(), 3);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(60, 30).unwrap(), 118_264_581_564_861_424);
        assert!(matches!(binomial(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(enumerate_subsets(3, 2).unwrap(), sets(&[&[1, 2], &[1, 3], &[2, 3]]));
        let four = enumerate_subsets(4, 2).unwrap();
        assert_eq!(four.len(), 6);
        assert_eq!(four[0], sets(&[&[1, 2]])[0]);
        assert_eq!(four[5], sets(&[&[3, 4]])[0]);
        assert_eq!(enumerate_subsets(2, 0).unwrap(), vec![NodeSet::EMPTY]);
        assert!(enumerate_subsets(2, 3).is_err());
    }

    #[test]
    fn braced_round_trip_and_compact() {
        let s = NodeSet::from_one_based([1, 3]).unwrap();
        assert_eq!(s.braced(), "{1,3}");
        assert_eq!(NodeSet::parse_braced("{1,3}").unwrap(), s);
        assert_eq!(NodeSet::parse_braced("{}").unwrap(), NodeSet::EMPTY);
        assert_eq!(s.compact(), "13");
        assert_eq!(NodeSet::EMPTY.compact(), "∅");
        assert!(NodeSet::parse_braced("1,3").is_err());
    }

    #[test]
    fn rotation_wraps() {
        let s = NodeSet::from_indices([0, 3]).unwrap();
        assert_eq!(s.rotate(1, 4), NodeSet::from_indices([0, 1]).unwrap());
    }

    proptest! {
        #[test]
        fn enumeration_is_sorted_unique_and_complete(ground in 0usize..10, size in 0usize..10) {
            prop_assume!(size <= ground);
            let subs = enumerate_subsets(ground, size).unwrap();
            prop_assert_eq!(subs.len() as u64, binomial(ground, size).unwrap());
            for w in subs.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for s in &subs {
                prop_assert_eq!(s.len(), size);
                prop_assert!(s.iter().all(|i| i < ground));
            }
        }

        #[test]
        fn pascal_rule(n in 1usize..40, k in 1usize..40) {
            prop_assume!(k <= n);
            prop_assert_eq!(
                binomial(n, k).unwrap(),
                binomial(n - 1, k - 1).unwrap() + if k < n { binomial(n - 1, k).unwrap() } else { 0 }
            );
        }
    }
}
