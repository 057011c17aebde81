//! Network parameters, subfile labels and demand vectors.

use std::fmt;

use crate::combinatorics::{NodeSet, MAX_NODES};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A `K_T x K_R` interference network with caches at both ends.
///
/// Cache sizes are measured in files and may be fractional. Values above the
/// library size are clamped to `n_files`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkConfig {
    k_t: usize,
    k_r: usize,
    n_files: usize,
    m_t: Rational,
    m_r: Rational,
    file_bits: Option<u64>,
}

/// Normalized replication factors `t_T = K_T M_T / N` and `t_R = K_R M_R / N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TParams {
    pub t_t: Rational,
    pub t_r: Rational,
}

impl TParams {
    pub fn t_t_integral(&self) -> bool {
        self.t_t.is_integer()
    }

    pub fn t_r_integral(&self) -> bool {
        self.t_r.is_integer()
    }
}

impl NetworkConfig {
    pub fn new(k_t: usize, k_r: usize, n_files: usize, m_t: Rational, m_r: Rational) -> Result<Self> {
        if k_t == 0 || k_r == 0 || n_files == 0 {
            return Err(Error::InvalidConfig(format!(
                "K_T, K_R and N must be at least 1 (got K_T={k_t}, K_R={k_r}, N={n_files})"
            )));
        }
        if k_t > MAX_NODES || k_r > MAX_NODES {
            return Err(Error::InvalidConfig(format!("at most {MAX_NODES} transmitters and receivers are supported")));
        }
        if m_t.is_negative() || m_r.is_negative() {
            return Err(Error::InvalidConfig("cache sizes must be non-negative".into()));
        }
        let n = Rational::from(n_files);
        let m_t = m_t.min(n);
        let m_r = m_r.min(n);
        if Rational::from(k_t) * m_t + m_r < n {
            return Err(Error::InvalidConfig(format!(
                "K_T*M_T + M_R = {} is below N = {n_files}; the library cannot be served",
                Rational::from(k_t) * m_t + m_r
            )));
        }
        Ok(NetworkConfig { k_t, k_r, n_files, m_t, m_r, file_bits: None })
    }

    /// Convenience constructor for integer cache sizes.
    pub fn with_integers(k_t: usize, k_r: usize, n_files: usize, m_t: i128, m_r: i128) -> Result<Self> {
        Self::new(k_t, k_r, n_files, Rational::integer(m_t), Rational::integer(m_r))
    }

    pub fn with_file_bits(mut self, bits: u64) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidConfig("file_bits must be positive".into()));
        }
        self.file_bits = Some(bits);
        Ok(self)
    }

    pub fn k_t(&self) -> usize {
        self.k_t
    }

    pub fn k_r(&self) -> usize {
        self.k_r
    }

    pub fn n_files(&self) -> usize {
        self.n_files
    }

    pub fn m_t(&self) -> Rational {
        self.m_t
    }

    pub fn m_r(&self) -> Rational {
        self.m_r
    }

    pub fn file_bits(&self) -> Option<u64> {
        self.file_bits
    }

    /// Fraction of every file a receiver caches, `M_R / N`.
    pub fn rx_fraction(&self) -> Rational {
        self.m_r / Rational::from(self.n_files)
    }

    pub fn t_params(&self) -> TParams {
        derive_t_params(self)
    }

    /// `t_T` as a count, or the non-integral error.
    pub fn t_t_count(&self) -> Result<usize> {
        let t = self.t_params().t_t;
        t.to_count().ok_or(Error::NonIntegral { param: "t_T", value: t })
    }

    pub fn t_r_count(&self) -> Result<usize> {
        let t = self.t_params().t_r;
        t.to_count().ok_or(Error::NonIntegral { param: "t_R", value: t })
    }

    /// Same network with a different receiver cache size.
    pub fn with_m_r(&self, m_r: Rational) -> Result<Self> {
        let mut cfg = Self::new(self.k_t, self.k_r, self.n_files, self.m_t, m_r)?;
        cfg.file_bits = self.file_bits;
        Ok(cfg)
    }

    pub fn with_m_t(&self, m_t: Rational) -> Result<Self> {
        let mut cfg = Self::new(self.k_t, self.k_r, self.n_files, m_t, self.m_r)?;
        cfg.file_bits = self.file_bits;
        Ok(cfg)
    }
}

impl fmt::Display for NetworkConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K_T={} K_R={} N={} M_T={} M_R={}", self.k_t, self.k_r, self.n_files, self.m_t, self.m_r)?;
        if let Some(bits) = self.file_bits {
            write!(f, " F={bits}")?;
        }
        Ok(())
    }
}

pub fn derive_t_params(cfg: &NetworkConfig) -> TParams {
    let n = Rational::from(cfg.n_files);
    TParams { t_t: Rational::from(cfg.k_t) * cfg.m_t / n, t_r: Rational::from(cfg.k_r) * cfg.m_r / n }
}

/// The part of `file` cached at transmitters `tx_set` and receivers `rx_set`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubfileId {
    pub file: usize,
    pub tx_set: NodeSet,
    pub rx_set: NodeSet,
}

impl SubfileId {
    pub fn new(file: usize, tx_set: NodeSet, rx_set: NodeSet) -> Self {
        SubfileId { file, tx_set, rx_set }
    }
}

/// `W3_{12,2}` style label; files are numbered from 1.
impl fmt::Display for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}_{{{},{}}}", self.file + 1, self.tx_set.compact(), self.rx_set.compact())
    }
}

/// File requested by each receiver, 0-based file indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DemandVector(Vec<usize>);

impl DemandVector {
    pub fn new(demands: Vec<usize>, cfg: &NetworkConfig) -> Result<Self> {
        if demands.len() != cfg.k_r() {
            return Err(Error::Demand(format!("expected {} entries, got {}", cfg.k_r(), demands.len())));
        }
        if let Some(bad) = demands.iter().find(|&&d| d >= cfg.n_files()) {
            return Err(Error::Demand(format!(
                "file index {} outside the library of {} files",
                bad + 1,
                cfg.n_files()
            )));
        }
        Ok(DemandVector(demands))
    }

    /// Receiver `j` requests file `j mod N`.
    pub fn default_for(cfg: &NetworkConfig) -> Self {
        DemandVector((0..cfg.k_r()).map(|j| j % cfg.n_files()).collect())
    }

    /// Parses comma-separated 1-based file indices.
    pub fn parse(s: &str, cfg: &NetworkConfig) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = tok.parse().map_err(|_| Error::Parse(format!("bad demand entry {tok:?}")))?;
            if v == 0 {
                return Err(Error::Demand("file indices are 1-based".into()));
            }
            out.push(v - 1);
        }
        Self::new(out, cfg)
    }

    pub fn file_of(&self, receiver: usize) -> usize {
        self.0[receiver]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All receivers request different files.
    pub fn is_worst_case(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.0.iter().all(|d| seen.insert(*d))
    }
}

impl fmt::Display for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| (d + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn t_params_of_worked_examples() {
        let c = NetworkConfig::with_integers(4, 4, 4, 2, 1).unwrap();
        assert_eq!(c.t_params(), TParams { t_t: q(2, 1), t_r: q(1, 1) });
        let c = NetworkConfig::with_integers(3, 3, 3, 2, 1).unwrap();
        assert_eq!(c.t_params(), TParams { t_t: q(2, 1), t_r: q(1, 1) });
        let c = NetworkConfig::with_integers(2, 2, 2, 0, 2).unwrap();
        assert_eq!(c.t_params(), TParams { t_t: q(0, 1), t_r: q(2, 1) });
    }

    #[test]
    fn non_integral_t_is_flagged() {
        let c = NetworkConfig::new(4, 4, 4, q(2, 1), q(1, 2)).unwrap();
        let t = c.t_params();
        assert!(t.t_t_integral());
        assert!(!t.t_r_integral());
        assert!(matches!(c.t_r_count(), Err(Error::NonIntegral { param: "t_R", .. })));
    }

    #[test]
    fn rejects_infeasible_and_degenerate() {
        assert!(NetworkConfig::with_integers(0, 3, 3, 1, 1).is_err());
        assert!(NetworkConfig::with_integers(3, 3, 3, -1, 1).is_err());
        // 2*1 + 0 < 3
        assert!(matches!(NetworkConfig::with_integers(2, 3, 3, 1, 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn cache_sizes_clamp_to_library() {
        let c = NetworkConfig::with_integers(2, 2, 2, 5, 7).unwrap();
        assert_eq!(c.m_t(), q(2, 1));
        assert_eq!(c.m_r(), q(2, 1));
    }

    #[test]
    fn demand_parsing_and_worst_case() {
        let c = NetworkConfig::with_integers(3, 3, 3, 2, 1).unwrap();
        let d = DemandVector::parse("1,2,3", &c).unwrap();
        assert_eq!(d.as_slice(), &[0, 1, 2]);
        assert!(d.is_worst_case());
        assert!(!DemandVector::parse("1,1,3", &c).unwrap().is_worst_case());
        assert!(DemandVector::parse("1,2", &c).is_err());
        assert!(DemandVector::parse("1,2,4", &c).is_err());
        assert_eq!(DemandVector::default_for(&c), d);
    }

    #[test]
    fn subfile_label() {
        let s = SubfileId::new(0, NodeSet::from_one_based([1, 2]).unwrap(), NodeSet::singleton(1));
        assert_eq!(s.to_string(), "W1_{12,2}");
    }

    proptest! {
        #[test]
        fn integral_t_params_lie_in_range(k_t in 1usize..7, k_r in 1usize..7, n in 1usize..7, m_t in 0i128..8, m_r in 0i128..8) {
            if let Ok(cfg) = NetworkConfig::with_integers(k_t, k_r, n, m_t, m_r) {
                let t = cfg.t_params();
                prop_assert!(t.t_t >= 0 && t.t_t <= k_t as i128);
                prop_assert!(t.t_r >= 0 && t.t_r <= k_r as i128);
            }
        }
    }
}
