//! Numeric checks of the zero-forcing and cancellation claims on sampled
//! channels.
//!
//! A subfile held by transmitters `X` and nulled at receivers `Z` (`|Z| <
//! |X|`) is precoded with the cofactor vector of `H[Z, X']`, where `X'` is the
//! first `|Z|+1` members of `X`:
//!
//! ```text
//! w_k = (-1)^k det H[Z, X' \ {x_k}]
//! ```
//!
//! The equivalent gain at receiver `r` is then `det H[{r} ∪ Z, X']` by
//! Laplace expansion, which vanishes for `r ∈ Z` and is a channel minor
//! otherwise. Interference alignment is not constructed here; the ledger's
//! dimension count is reported as an assumption.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::combinatorics::{binomial, enumerate_subsets, NodeSet};
use crate::delivery::{account_block, DeliveryPlan, ScheduledSubfile};
use crate::error::{Error, Result};
use crate::model::DemandVector;
use crate::placement::SubfileUniverse;

/// Minors with smaller magnitude are treated as zero when sampling.
pub const GENERICITY_THRESHOLD: f64 = 1e-9;
/// Default bound on |gain at a ZF target| / max |gain| of the same subfile.
pub const ZF_TOLERANCE: f64 = 1e-9;
pub const MAX_SAMPLING_ATTEMPTS: u32 = 16;
pub const CHANNEL_DISTRIBUTION: &str = "iid CN(0,1): re,im ~ N(0,1/2) via ChaCha8Rng(seed_from_u64)";

/// Above this many square submatrices, sampling only checks orders 1..=3.
const FULL_MINOR_CHECK_LIMIT: u64 = 20_000;

/// `K_R x K_T` complex channel gains, row `j` = receiver, column `i` = transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    k_r: usize,
    k_t: usize,
    entries: Vec<Complex64>,
    seed: u64,
    attempts: u32,
}

impl ChannelMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let k_r = rows.len();
        let k_t = rows.first().map_or(0, Vec::len);
        if k_r == 0 || k_t == 0 || rows.iter().any(|r| r.len() != k_t) {
            return Err(Error::Domain("channel matrix rows must be non-empty and equal length".into()));
        }
        Ok(ChannelMatrix { k_r, k_t, entries: rows.into_iter().flatten().collect(), seed: 0, attempts: 0 })
    }

    pub fn k_r(&self) -> usize {
        self.k_r
    }

    pub fn k_t(&self) -> usize {
        self.k_t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Draws needed before the sample passed the genericity check.
    pub fn attempts(&self) -> u32 {
        self.attempts
    }

    pub fn get(&self, rx: usize, tx: usize) -> Complex64 {
        self.entries[rx * self.k_t + tx]
    }

    /// Determinant of the submatrix keeping `rows` and `cols` (in the given order).
    pub fn submatrix_det(&self, rows: &[usize], cols: &[usize]) -> Result<Complex64> {
        if rows.len() != cols.len() {
            return Err(Error::Domain(format!(
                "submatrix with {} rows and {} columns is not square",
                rows.len(),
                cols.len()
            )));
        }
        if rows.iter().any(|&r| r >= self.k_r) || cols.iter().any(|&c| c >= self.k_t) {
            return Err(Error::Domain("submatrix index out of range".into()));
        }
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for &r in rows {
            for &c in cols {
                a.push(self.get(r, c));
            }
        }
        Ok(determinant(a, n))
    }

    /// Smallest |det| over the square submatrices checked for genericity.
    pub fn min_minor_magnitude(&self) -> f64 {
        let max_order = self.k_r.min(self.k_t);
        let total: u64 = (1..=max_order)
            .map(|k| {
                let rows = binomial(self.k_r, k).unwrap_or(u64::MAX);
                rows.saturating_mul(binomial(self.k_t, k).unwrap_or(u64::MAX))
            })
            .fold(0u64, u64::saturating_add);
        let max_order = if total > FULL_MINOR_CHECK_LIMIT { max_order.min(3) } else { max_order };
        let mut min = f64::INFINITY;
        for k in 1..=max_order {
            let row_sets = enumerate_subsets(self.k_r, k).expect("k <= k_r");
            let col_sets = enumerate_subsets(self.k_t, k).expect("k <= k_t");
            for rs in &row_sets {
                let rows = rs.to_vec();
                for cs in &col_sets {
                    let d = self.submatrix_det(&rows, &cs.to_vec()).expect("square by construction");
                    min = min.min(d.norm());
                }
            }
        }
        min
    }
}

/// Determinant by LU decomposition with partial pivoting; `a` is row-major `n x n`.
pub fn determinant(mut a: Vec<Complex64>, n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm())).expect("non-empty range");
        if a[pivot * n + col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[row * n + k] -= factor * v;
            }
        }
    }
    det
}

/// Samples a generic channel; retries from the same stream if a checked minor
/// is below [`GENERICITY_THRESHOLD`].
pub fn sample_channel(k_r: usize, k_t: usize, seed: u64) -> Result<ChannelMatrix> {
    if k_r == 0 || k_t == 0 {
        return Err(Error::Domain("channel dimensions must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for attempt in 1..=MAX_SAMPLING_ATTEMPTS {
        let entries: Vec<Complex64> = (0..k_r * k_t)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re * scale, im * scale)
            })
            .collect();
        let h = ChannelMatrix { k_r, k_t, entries, seed, attempts: attempt };
        if h.min_minor_magnitude() >= GENERICITY_THRESHOLD {
            return Ok(h);
        }
    }
    Err(Error::NonGeneric(format!(
        "no generic {k_r}x{k_t} sample within {MAX_SAMPLING_ATTEMPTS} attempts for seed {seed}"
    )))
}

/// Determinant of `h` with the given rows and columns deleted. No cofactor
/// sign is applied; see [`cofactor_sign`].
pub fn minor(h: &ChannelMatrix, rows_removed: NodeSet, cols_removed: NodeSet) -> Result<Complex64> {
    if rows_removed.iter().any(|r| r >= h.k_r) || cols_removed.iter().any(|c| c >= h.k_t) {
        return Err(Error::Domain("removed index out of range".into()));
    }
    let rows: Vec<usize> = (0..h.k_r).filter(|r| !rows_removed.contains(*r)).collect();
    let cols: Vec<usize> = (0..h.k_t).filter(|c| !cols_removed.contains(*c)).collect();
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::Domain(format!(
            "removing {} rows and {} columns leaves a {}x{} matrix",
            rows_removed.len(),
            cols_removed.len(),
            rows.len(),
            cols.len()
        )));
    }
    h.submatrix_det(&rows, &cols)
}

/// `(-1)^(sum of removed row and column indices)`, the factor turning a
/// minor into a cofactor.
pub fn cofactor_sign(rows_removed: NodeSet, cols_removed: NodeSet) -> f64 {
    let s: usize = rows_removed.iter().chain(cols_removed.iter()).sum();
    if s & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingVector {
    pub tx_set: NodeSet,
    /// One weight per member of `tx_set`, in increasing transmitter order.
    pub weights: Vec<(usize, Complex64)>,
}

impl PrecodingVector {
    pub fn scaled(&self, c: Complex64) -> PrecodingVector {
        PrecodingVector { tx_set: self.tx_set, weights: self.weights.iter().map(|&(i, w)| (i, w * c)).collect() }
    }

    pub fn weight(&self, tx: usize) -> Option<Complex64> {
        self.weights.iter().find(|(i, _)| *i == tx).map(|(_, w)| *w)
    }
}

/// Precoder over `tx_set` whose signal vanishes at every receiver in
/// `zf_targets`. Normalized so the largest weight has magnitude 1.
pub fn zf_weights(h: &ChannelMatrix, tx_set: NodeSet, zf_targets: NodeSet) -> Result<PrecodingVector> {
    if tx_set.is_empty() {
        return Err(Error::Domain("precoder needs at least one transmitter".into()));
    }
    if tx_set.iter().any(|i| i >= h.k_t) || zf_targets.iter().any(|j| j >= h.k_r) {
        return Err(Error::Domain("precoder index out of range".into()));
    }
    let m = zf_targets.len();
    if m >= tx_set.len() {
        return Err(Error::Domain(format!("{} transmitters cannot zero-force at {m} receivers", tx_set.len())));
    }
    let members = tx_set.to_vec();
    let active = &members[..m + 1];
    let targets = zf_targets.to_vec();
    let mut raw = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let cols: Vec<usize> = active.iter().enumerate().filter(|(c, _)| *c != k).map(|(_, &x)| x).collect();
        let cof = if m == 0 { Complex64::new(1.0, 0.0) } else { h.submatrix_det(&targets, &cols)? };
        raw.push(if k % 2 == 0 { cof } else { -cof });
    }
    let largest = raw.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let entry_scale = targets
        .iter()
        .flat_map(|&r| active.iter().map(move |&c| (r, c)))
        .map(|(r, c)| h.get(r, c).norm())
        .fold(0.0, f64::max);
    if largest <= GENERICITY_THRESHOLD * entry_scale.powi(m as i32) || largest == 0.0 {
        return Err(Error::NonGeneric(format!("H[{}, {}] is rank deficient", zf_targets.braced(), tx_set.braced())));
    }
    let mut weights: Vec<(usize, Complex64)> = members.iter().map(|&i| (i, Complex64::new(0.0, 0.0))).collect();
    for (k, w) in raw.into_iter().enumerate() {
        weights[k].1 = w / largest;
    }
    Ok(PrecodingVector { tx_set, weights })
}

/// Per-receiver equivalent gain of one precoded stream.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector(pub Vec<Complex64>);

impl GainVector {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|g| g.norm()).fold(0.0, f64::max)
    }

    /// |gain at `rx`| relative to the strongest receiver.
    pub fn relative(&self, rx: usize) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            0.0
        } else {
            self.0[rx].norm() / max
        }
    }
}

pub fn equivalent_gains(h: &ChannelMatrix, p: &PrecodingVector) -> GainVector {
    GainVector((0..h.k_r).map(|j| p.weights.iter().map(|&(i, w)| h.get(j, i) * w).sum()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Non-negligible gain at a receiver the plan zero-forces.
    ZfResidual,
    /// Desired signal too weak at its destination.
    WeakDesired,
    /// Interference assigned to an alignment group is (nearly) absent, which
    /// contradicts the genericity the alignment count relies on.
    WeakInterference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhyViolation {
    pub kind: ViolationKind,
    pub channel_seed: u64,
    pub block: usize,
    pub transmission: ScheduledSubfile,
    pub receiver: usize,
    pub relative_gain: f64,
}

impl std::fmt::Display for PhyViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?}: seed={} block={} {} -> Rx{} at Rx{} relative_gain={:.3e}",
            self.kind,
            self.channel_seed,
            self.block + 1,
            self.transmission.subfile,
            self.transmission.dest + 1,
            self.receiver + 1,
            self.relative_gain
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhyReport {
    pub channels: usize,
    pub transmissions_checked: usize,
    pub zf_checks: usize,
    pub max_zf_residual: f64,
    /// Receiver/transmission pairs removed by cache-side cancellation; their
    /// gain is irrelevant and not asserted.
    pub ic_flagged: usize,
    /// Alignment groups whose collapse into one dimension is assumed.
    pub alignment_groups_assumed: usize,
    pub violations: Vec<PhyViolation>,
}

impl PhyReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn zf_violations(&self) -> usize {
        self.violations.iter().filter(|v| v.kind == ViolationKind::ZfResidual).count()
    }

    fn merge(&mut self, other: PhyReport) {
        self.channels += other.channels;
        self.transmissions_checked += other.transmissions_checked;
        self.zf_checks += other.zf_checks;
        self.max_zf_residual = self.max_zf_residual.max(other.max_zf_residual);
        self.ic_flagged += other.ic_flagged;
        self.alignment_groups_assumed += other.alignment_groups_assumed;
        self.violations.extend(other.violations);
    }
}

/// Zero-forcing precoders for every transmission of `block`, in order.
pub fn design_precoders(h: &ChannelMatrix, block: &[ScheduledSubfile]) -> Result<Vec<PrecodingVector>> {
    block.iter().map(|s| zf_weights(h, s.subfile.tx_set, s.zf_targets)).collect()
}

/// Checks `precoders` (one per transmission) against the block's claims.
pub fn check_precoders(
    h: &ChannelMatrix,
    block: &[ScheduledSubfile],
    precoders: &[PrecodingVector],
    universe: &impl SubfileUniverse,
    demand: &DemandVector,
    tol: f64,
) -> Result<PhyReport> {
    if block.len() != precoders.len() {
        return Err(Error::Domain("one precoder per transmission required".into()));
    }
    let ledger = account_block(block, universe, demand)?;
    let mut report = PhyReport {
        channels: 1,
        transmissions_checked: block.len(),
        alignment_groups_assumed: ledger.receivers.iter().map(|r| r.aligned_dims).sum(),
        ..PhyReport::default()
    };
    for (s, p) in block.iter().zip(precoders) {
        let gains = equivalent_gains(h, p);
        let mut violation = |kind, receiver, relative_gain| {
            report.violations.push(PhyViolation {
                kind,
                channel_seed: h.seed,
                block: s.block,
                transmission: *s,
                receiver,
                relative_gain,
            })
        };
        for r in 0..h.k_r {
            let rel = gains.relative(r);
            if r == s.dest {
                if rel < GENERICITY_THRESHOLD {
                    violation(ViolationKind::WeakDesired, r, rel);
                }
            } else if universe.is_cached_at(r, &s.subfile) {
                report.ic_flagged += 1;
            } else if s.zf_targets.contains(r) {
                report.zf_checks += 1;
                report.max_zf_residual = report.max_zf_residual.max(rel);
                if rel >= tol {
                    violation(ViolationKind::ZfResidual, r, rel);
                }
            } else if rel < GENERICITY_THRESHOLD {
                violation(ViolationKind::WeakInterference, r, rel);
            }
        }
    }
    Ok(report)
}

pub fn verify_block_phy(
    h: &ChannelMatrix,
    block: &[ScheduledSubfile],
    universe: &impl SubfileUniverse,
    demand: &DemandVector,
    tol: f64,
) -> Result<PhyReport> {
    let precoders = design_precoders(h, block)?;
    check_precoders(h, block, &precoders, universe, demand, tol)
}

/// Verifies every block of `plans` over channels sampled with each seed in
/// `seeds`; per-seed reports are merged in seed order.
pub fn verify_plans_phy<U: SubfileUniverse + Sync>(
    plans: &[DeliveryPlan],
    universe: &U,
    demand: &DemandVector,
    seeds: &[u64],
    tol: f64,
) -> Result<PhyReport> {
    let per_seed: Vec<Result<PhyReport>> = seeds
        .par_iter()
        .map(|&seed| {
            let h = sample_channel(universe.k_r(), universe.k_t(), seed)?;
            let mut rep = PhyReport::default();
            for block in plans.iter().flat_map(|p| p.blocks.iter()).filter(|b| !b.is_empty()) {
                rep.merge(verify_block_phy(&h, block, universe, demand, tol)?);
            }
            rep.channels = 1;
            Ok(rep)
        })
        .collect();
    let mut total = PhyReport::default();
    for r in per_seed {
        total.merge(r?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::from_one_based(v.iter().copied()).unwrap()
    }

    #[test]
    fn sampling_is_deterministic_and_generic() {
        let a = sample_channel(4, 4, 1).unwrap();
        let b = sample_channel(4, 4, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_channel(4, 4, 2).unwrap());
        assert!(a.min_minor_magnitude() >= GENERICITY_THRESHOLD);
        let one = sample_channel(1, 1, 9).unwrap();
        assert!(one.get(0, 0).norm() > 0.0);
        assert!(sample_channel(0, 2, 0).is_err());
    }

    #[test]
    fn small_minors() {
        let h = ChannelMatrix::from_rows(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 1.0)]]).unwrap();
        assert_eq!(minor(&h, set(&[2]), set(&[2])).unwrap(), c(1.0, 0.0));
        assert_eq!(minor(&h, NodeSet::EMPTY, NodeSet::EMPTY).unwrap(), c(-2.0, 1.0));
        assert!(minor(&h, set(&[1]), NodeSet::EMPTY).is_err());
        assert!(minor(&h, set(&[1, 2]), set(&[1, 2])).is_err());
        assert_eq!(cofactor_sign(set(&[1]), set(&[2])), -1.0);
        assert_eq!(cofactor_sign(set(&[2, 4]), set(&[3, 4])), -1.0);
        assert_eq!(cofactor_sign(set(&[1, 4]), set(&[3, 4])), 1.0);
    }

    #[test]
    fn diagonal_fixture_minors() {
        // diag(2, 3, 5) plus a single off-diagonal entry.
        let z = c(0.0, 0.0);
        let h = ChannelMatrix::from_rows(vec![
            vec![c(2.0, 0.0), z, c(1.0, 0.0)],
            vec![z, c(3.0, 0.0), z],
            vec![z, z, c(5.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(minor(&h, NodeSet::EMPTY, NodeSet::EMPTY).unwrap(), c(30.0, 0.0));
        assert_eq!(minor(&h, set(&[2]), set(&[2])).unwrap(), c(10.0, 0.0));
        assert_eq!(minor(&h, set(&[3]), set(&[1])).unwrap(), c(-3.0, 0.0));
        assert_eq!(minor(&h, set(&[1, 2]), set(&[1, 2])).unwrap(), c(5.0, 0.0));
    }

    #[test]
    fn two_transmitter_weights_match_channel_entries() {
        let h = sample_channel(4, 4, 5).unwrap();
        let p = zf_weights(&h, set(&[1, 2]), set(&[3])).unwrap();
        let w1 = p.weight(0).unwrap();
        let w2 = p.weight(1).unwrap();
        // (w1, w2) ∝ (h32, -h31)
        let ratio = w1 / h.get(2, 1);
        assert!((w2 - ratio * -h.get(2, 0)).norm() < 1e-12);
        let max = p.weights.iter().map(|(_, w)| w.norm()).fold(0.0, f64::max);
        assert!((max - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_transmitter_and_three_transmitter_precoders() {
        let h = sample_channel(4, 4, 6).unwrap();
        let p = zf_weights(&h, set(&[3]), NodeSet::EMPTY).unwrap();
        assert_eq!(p.weights, vec![(2, c(1.0, 0.0))]);

        let p = zf_weights(&h, set(&[1, 2, 4]), set(&[2, 3])).unwrap();
        let g = equivalent_gains(&h, &p);
        assert!(g.relative(1) < 1e-9);
        assert!(g.relative(2) < 1e-9);
        assert!(g.relative(0) > 1e-12);
        assert!(g.relative(3) > 1e-12);
        assert!(zf_weights(&h, set(&[1, 2]), set(&[1, 2])).is_err());
    }

    #[test]
    fn rank_deficient_target_rows_are_rejected() {
        let z = c(0.0, 0.0);
        let h = ChannelMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)],
            vec![z, c(1.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(zf_weights(&h, set(&[1, 2, 3]), set(&[1, 2])), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn gain_matches_minor_from_example() {
        let h = sample_channel(4, 4, 42).unwrap();
        let p = zf_weights(&h, set(&[1, 2]), set(&[3])).unwrap();
        let g = equivalent_gains(&h, &p);
        // Undo normalization with the raw weight h32.
        let scale = h.get(2, 1) / p.weight(0).unwrap();
        let at_rx1 = g.0[0] * scale;
        let expect = h.get(0, 0) * h.get(2, 1) - h.get(0, 1) * h.get(2, 0);
        assert!((at_rx1 - expect).norm() <= 1e-12 * expect.norm());
        let m = minor(&h, set(&[2, 4]), set(&[3, 4])).unwrap();
        assert!((at_rx1 - m).norm() <= 1e-12 * m.norm());
        assert!((g.0[2] * scale).norm() < 1e-12);
    }

    #[test]
    fn corrupted_zf_target_is_reported() {
        use crate::delivery::build_centralized_plan;
        use crate::model::NetworkConfig;
        use crate::placement::place_centralized;

        let cfg = NetworkConfig::with_integers(4, 4, 4, 2, 1).unwrap();
        let placement = place_centralized(&cfg).unwrap();
        let demand = DemandVector::default_for(&cfg);
        let plan = build_centralized_plan(&placement, &demand).unwrap();
        let block = &plan.blocks[0];
        let h = sample_channel(4, 4, 7).unwrap();
        assert!(verify_block_phy(&h, block, &placement, &demand, ZF_TOLERANCE).unwrap().is_clean());

        // Precoders designed for a block whose first entry nulls Rx4 instead of Rx3.
        let mut wrong = block.clone();
        assert_eq!(wrong[0].zf_targets, set(&[3]));
        wrong[0].zf_targets = set(&[4]);
        let precoders = design_precoders(&h, &wrong).unwrap();
        let report = check_precoders(&h, block, &precoders, &placement, &demand, ZF_TOLERANCE).unwrap();
        assert_eq!(report.zf_violations(), 1);
        let v = &report.violations[0];
        assert_eq!((v.receiver, v.block), (2, 0));
        assert!(v.relative_gain > 1e-3);
        // The stream now vanishes at Rx4, where the plan counts it as aligned interference.
        assert!(report.violations.iter().any(|v| v.kind == ViolationKind::WeakInterference && v.receiver == 3));
    }
}
