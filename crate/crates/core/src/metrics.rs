//! Closed-form sDoF and NDT, the scheme-accounting NDT oracle, its
//! Monte-Carlo estimate, memory-sharing and figure sweeps.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::combinatorics::{binomial, NodeSet};
use crate::delivery::{account_plan, build_decentralized_plan, verify_completeness, DeliveryPlan, PlanMode};
use crate::error::{Error, Result};
use crate::model::{DemandVector, NetworkConfig};
use crate::placement::{
    expected_class_fraction, expected_fraction, place_decentralized, DecentralizedLayout, SubfileUniverse,
};
use crate::rational::Rational;

/// An sDoF value and whether the `K_R` cap decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SdofValue {
    pub value: Rational,
    pub capped: bool,
}

fn integral_t(cfg: &NetworkConfig) -> Result<(usize, usize)> {
    Ok((cfg.t_t_count()?, cfg.t_r_count()?))
}

/// `min{ C(K_T,t_T) K_R / (C(K_T,t_T) + K_R - t_T - t_R), K_R }`.
pub fn sdof_theorem1(cfg: &NetworkConfig) -> Result<SdofValue> {
    let (t_t, t_r) = integral_t(cfg)?;
    if t_t == 0 {
        return Err(Error::Domain("the ZF/IA sDoF expression needs t_T >= 1".into()));
    }
    let k_r = cfg.k_r() as i128;
    let c = binomial(cfg.k_t(), t_t)? as i128;
    let denom = c + k_r - t_t as i128 - t_r as i128;
    // denom <= c means the uncapped value already reaches K_R.
    if denom <= c {
        return Ok(SdofValue { value: Rational::integer(k_r), capped: true });
    }
    let value = Rational::new(c * k_r, denom);
    Ok(SdofValue { value, capped: false })
}

/// ZF + IC only: `min{t_T + t_R, K_R}`.
pub fn sdof_baseline(cfg: &NetworkConfig) -> Result<SdofValue> {
    let (t_t, t_r) = integral_t(cfg)?;
    let sum = t_t + t_r;
    Ok(SdofValue { value: Rational::from(sum.min(cfg.k_r())), capped: sum >= cfg.k_r() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofReport {
    pub proposed: Rational,
    pub baseline: Rational,
    pub per_user: Rational,
    pub capped: bool,
}

pub fn dof_report(cfg: &NetworkConfig) -> Result<DofReport> {
    let p = sdof_theorem1(cfg)?;
    let b = sdof_baseline(cfg)?;
    Ok(DofReport {
        proposed: p.value,
        baseline: b.value,
        per_user: p.value / Rational::from(cfg.k_r()),
        capped: p.capped,
    })
}

/// The two parts of the decentralized closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Terms {
    /// `(t, contribution)` of the sum over `t = 0 .. K_R-1`, already scaled by `K_R`.
    pub per_t: Vec<(usize, Rational)>,
    /// The `(max{M_R,1} - M_R)` correction term.
    pub correction: Rational,
}

impl Theorem2Terms {
    pub fn total(&self) -> Rational {
        self.per_t.iter().map(|(_, v)| *v).sum::<Rational>() + self.correction
    }
}

pub fn ndt_theorem2_terms(cfg: &NetworkConfig) -> Result<Theorem2Terms> {
    let t_t = cfg.t_t_count()? as i128;
    let k_t = cfg.k_t() as i128;
    let k_r = cfg.k_r() as i128;
    let k_r_q = Rational::integer(k_r);
    let mut per_t = Vec::with_capacity(cfg.k_r());
    for t in 0..cfg.k_r() {
        let count = binomial(cfg.k_r(), t)? as i128 - t as i128;
        let size = expected_fraction(cfg, t)?;
        // K_T + K_R - t_T - t >= 1 because t_T <= K_T and t < K_R.
        let sdof = Rational::new(k_t * k_r, k_t + k_r - t_t - t as i128).min(k_r_q);
        per_t.push((t, k_r_q * Rational::integer(count) * size / sdof));
    }
    let sdof_zero = Rational::new(k_t * k_r, k_t + k_r - t_t).min(k_r_q);
    let correction = k_r_q * cfg.m_t() / sdof_zero * (cfg.m_r().max(Rational::ONE) - cfg.m_r());
    Ok(Theorem2Terms { per_t, correction })
}

/// Closed-form decentralized NDT, evaluated term by term.
pub fn ndt_theorem2(cfg: &NetworkConfig) -> Result<Rational> {
    Ok(ndt_theorem2_terms(cfg)?.total())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TierContribution {
    pub t: usize,
    /// Delivered volume in files, summed over receivers.
    pub load: Rational,
    /// sDoF of the tier's plan from the dimension ledger.
    pub sdof: Rational,
    /// `load / sdof`.
    pub ndt: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleNdt {
    pub total: Rational,
    pub tiers: Vec<TierContribution>,
}

fn tier_of(plan: &DeliveryPlan) -> usize {
    match plan.mode {
        PlanMode::DecentralizedTier(t) => t,
        PlanMode::Centralized => 0,
    }
}

/// Sums `load(tier) / sdof(tier)` where `load` is supplied per scheduled
/// transmission.
fn oracle_sum<U: SubfileUniverse>(
    plans: &[DeliveryPlan],
    universe: &U,
    demand: &DemandVector,
    mut load_of: impl FnMut(&crate::delivery::ScheduledSubfile) -> Result<Rational>,
) -> Result<OracleNdt> {
    let report = verify_completeness(plans, universe, demand);
    if !report.is_complete() {
        return Err(Error::MalformedPlan(format!(
            "plan is incomplete: {} missing, {} duplicated, {} unneeded",
            report.missing.len(),
            report.duplicates.len(),
            report.unneeded.len()
        )));
    }
    let mut tiers = Vec::new();
    for plan in plans {
        let mut load = Rational::ZERO;
        for s in plan.transmissions() {
            load += load_of(s)?;
        }
        let ledger = account_plan(plan, universe, demand)?;
        let Some(sdof) = ledger.sdof() else {
            continue;
        };
        if sdof.is_zero() {
            return Err(Error::MalformedPlan("tier delivers nothing".into()));
        }
        tiers.push(TierContribution { t: tier_of(plan), load, sdof, ndt: load / sdof });
    }
    Ok(OracleNdt { total: tiers.iter().map(|t| t.ndt).sum(), tiers })
}

/// Asymptotic NDT of the tiered decentralized scheme: every class `W_{X,Y}`
/// carries its law-of-large-numbers share of the file.
pub fn ndt_oracle(
    cfg: &NetworkConfig,
    plans: &[DeliveryPlan],
    layout: &DecentralizedLayout,
    demand: &DemandVector,
) -> Result<OracleNdt> {
    let shares: Vec<Rational> = (0..=cfg.k_r()).map(|t| expected_class_fraction(cfg, t)).collect::<Result<_>>()?;
    oracle_sum(plans, layout, demand, |s| Ok(shares[s.subfile.rx_set.len()]))
}

/// Builds the tier plans for `cfg` and evaluates [`ndt_oracle`].
pub fn ndt_oracle_for(cfg: &NetworkConfig, demand: &DemandVector) -> Result<OracleNdt> {
    let layout = DecentralizedLayout::new(cfg)?;
    let plans = build_decentralized_plan(&layout, demand)?;
    ndt_oracle(cfg, &plans, &layout, demand)
}

/// Finite-`F` NDT of one sampled placement, from actual bit counts.
pub fn ndt_oracle_finite(cfg: &NetworkConfig, seed: u64, demand: &DemandVector) -> Result<OracleNdt> {
    let placement = place_decentralized(cfg, seed)?;
    let plans = build_decentralized_plan(placement.layout(), demand)?;
    let f = Rational::from(placement.file_bits());
    let mut profiles = std::collections::BTreeMap::new();
    for &file in demand.as_slice() {
        if let std::collections::btree_map::Entry::Vacant(e) = profiles.entry(file) {
            e.insert(placement.subset_profile(file)?);
        }
    }
    oracle_sum(&plans, placement.layout(), demand, |s| {
        let bits = profiles[&s.subfile.file].count(s.subfile.tx_set, s.subfile.rx_set);
        Ok(Rational::from(bits) / f)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloNdt {
    pub file_bits: u64,
    pub seeds: Vec<u64>,
    pub samples: Vec<Rational>,
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation / sqrt(n)).
    pub stderr: f64,
}

/// Finite-`F` oracle NDT over independent placements, one per seed. Seeds run
/// concurrently; samples are kept in seed order.
pub fn ndt_monte_carlo(cfg: &NetworkConfig, demand: &DemandVector, seeds: &[u64]) -> Result<MonteCarloNdt> {
    let file_bits = cfg.file_bits().ok_or(Error::MissingFileBits)?;
    if seeds.is_empty() {
        return Err(Error::Domain("Monte-Carlo needs at least one seed".into()));
    }
    let samples: Vec<Rational> =
        seeds.par_iter().map(|&seed| ndt_oracle_finite(cfg, seed, demand).map(|o| o.total)).collect::<Result<_>>()?;
    let n = samples.len() as f64;
    let values: Vec<f64> = samples.iter().map(Rational::to_f64).collect();
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if samples.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloNdt { file_bits, seeds: seeds.to_vec(), samples, mean, stderr })
}

/// Which sDoF the centralized NDT conversion uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralizedScheme {
    /// ZF + IA + IC.
    Proposed,
    /// ZF + IC, `min{t_T + t_R, K_R}`.
    Baseline,
}

/// Total non-cached demand over the sum rate: `K_R (1 - M_R/N) / sDoF`.
pub fn ndt_centralized(cfg: &NetworkConfig, scheme: CentralizedScheme) -> Result<Rational> {
    let sdof = match scheme {
        CentralizedScheme::Proposed => sdof_theorem1(cfg)?,
        CentralizedScheme::Baseline => sdof_baseline(cfg)?,
    };
    let load = Rational::from(cfg.k_r()) * (Rational::ONE - cfg.rx_fraction());
    if load.is_zero() {
        return Ok(Rational::ZERO);
    }
    if sdof.value.is_zero() {
        return Err(Error::Domain("sDoF is zero; nothing can be delivered".into()));
    }
    Ok(load / sdof.value)
}

/// Value on the lower convex envelope of `points` at `query`.
pub fn memory_share(points: &[(Rational, Rational)], query: Rational) -> Result<Rational> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    if pts.len() < 2 {
        return Err(Error::Domain("memory-sharing needs at least two corner points".into()));
    }
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Domain("memory-sharing corner points must have distinct cache sizes".into()));
    }
    let (lo, hi) = (pts[0].0, pts[pts.len() - 1].0);
    if query < lo || query > hi {
        return Err(Error::Domain(format!("{query} lies outside the corner range [{lo}, {hi}]")));
    }
    // Lower hull, monotone chain.
    let mut hull: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= Rational::ZERO {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if query >= x0 && query <= x1 {
            return Ok(y0 + (y1 - y0) * (query - x0) / (x1 - x0));
        }
    }
    unreachable!("query inside [lo, hi] falls in some hull segment")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `1/sDoF` of the ZF+IA+IC scheme against the ZF+IC baseline.
    InverseSdof,
    /// Decentralized NDT closed form against the centralized ZF+IC NDT.
    Ndt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    ReceiverCache,
    TransmitterCache,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRow {
    pub axis_value: Rational,
    pub proposed: Rational,
    pub baseline: Rational,
}

fn at_axis(template: &NetworkConfig, axis: SweepAxis, m: Rational) -> Result<NetworkConfig> {
    match axis {
        SweepAxis::ReceiverCache => template.with_m_r(m),
        SweepAxis::TransmitterCache => template.with_m_t(m),
    }
}

/// Evaluates `metric` at `m`, memory-sharing between the integer-`t` corners
/// of the axis when `m` is not itself a corner.
fn shared(
    template: &NetworkConfig,
    axis: SweepAxis,
    m: Rational,
    metric: &dyn Fn(&NetworkConfig) -> Result<Rational>,
) -> Result<Rational> {
    let cfg = at_axis(template, axis, m)?;
    match metric(&cfg) {
        Err(Error::NonIntegral { .. }) => {}
        other => return other,
    }
    let (nodes, n) = match axis {
        SweepAxis::ReceiverCache => (template.k_r(), template.n_files()),
        SweepAxis::TransmitterCache => (template.k_t(), template.n_files()),
    };
    let mut corners = Vec::new();
    for k in 0..=nodes {
        let corner_m = Rational::new((k * n) as i128, nodes as i128);
        let Ok(corner_cfg) = at_axis(template, axis, corner_m) else {
            continue;
        };
        if let Ok(v) = metric(&corner_cfg) {
            corners.push((corner_m, v));
        }
    }
    memory_share(&corners, m)
}

type Metric = Box<dyn Fn(&NetworkConfig) -> Result<Rational> + Sync>;

pub fn sweep_figure(
    template: &NetworkConfig,
    figure: Figure,
    axis: SweepAxis,
    values: &[Rational],
) -> Result<Vec<SweepRow>> {
    let inv = |s: SdofValue| s.value.recip().ok_or_else(|| Error::Domain("zero sDoF".into()));
    let (proposed, baseline): (Metric, Metric) = match figure {
        Figure::InverseSdof => (Box::new(move |c| inv(sdof_theorem1(c)?)), Box::new(move |c| inv(sdof_baseline(c)?))),
        Figure::Ndt => (Box::new(ndt_theorem2), Box::new(|c| ndt_centralized(c, CentralizedScheme::Baseline))),
    };
    values
        .par_iter()
        .map(|&m| {
            Ok(SweepRow {
                axis_value: m,
                proposed: shared(template, axis, m, &*proposed)?,
                baseline: shared(template, axis, m, &*baseline)?,
            })
        })
        .collect()
}

pub fn csv_header(figure: Figure, axis: SweepAxis) -> &'static str {
    match (figure, axis) {
        (Figure::InverseSdof, SweepAxis::ReceiverCache) => "m_r,inv_sdof_proposed,inv_sdof_baseline",
        (Figure::InverseSdof, SweepAxis::TransmitterCache) => "m_t,inv_sdof_proposed,inv_sdof_baseline",
        (Figure::Ndt, SweepAxis::ReceiverCache) => "m_r,ndt_decentralized,ndt_centralized",
        (Figure::Ndt, SweepAxis::TransmitterCache) => "m_t,ndt_decentralized,ndt_centralized",
    }
}

/// `(decimal CSV, exact CSV)`; LF line endings, header row first.
pub fn sweep_csv(rows: &[SweepRow], figure: Figure, axis: SweepAxis) -> (String, String) {
    let mut decimal = String::new();
    let mut exact = String::new();
    let header = csv_header(figure, axis);
    let _ = writeln!(decimal, "{header}");
    let _ = writeln!(exact, "{header}");
    for r in rows {
        let _ = writeln!(
            decimal,
            "{},{},{}",
            r.axis_value.to_decimal(12),
            r.proposed.to_decimal(12),
            r.baseline.to_decimal(12)
        );
        let _ = writeln!(exact, "{},{},{}", r.axis_value, r.proposed, r.baseline);
    }
    (decimal, exact)
}

/// Cross-check of the published 3x3 decentralized example
/// (`K_T = K_R = N = 3`, `M_T = 2`, `M_R = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkedExampleCheck {
    /// Value printed as the example's result.
    pub stated: Rational,
    /// The example's own expression `3 (3 (2/3)^3 / (9/4) + (2 (1/3)(4/9) + (1/9)(2/3)) / 3)`.
    pub inline_expression: Rational,
    pub closed_form: Rational,
    pub oracle: Rational,
}

impl WorkedExampleCheck {
    /// The stated value agrees with neither its expression nor the closed form.
    pub fn stated_is_inconsistent(&self) -> bool {
        self.stated != self.inline_expression && self.stated != self.closed_form
    }
}

pub fn worked_example_check(cfg: &NetworkConfig) -> Result<Option<WorkedExampleCheck>> {
    let is_example = cfg.k_t() == 3
        && cfg.k_r() == 3
        && cfg.n_files() == 3
        && cfg.m_t() == Rational::integer(2)
        && cfg.m_r() == Rational::integer(1);
    if !is_example {
        return Ok(None);
    }
    let q = Rational::new;
    let inline_expression =
        q(3, 1) * (q(3, 1) * q(2, 3).pow(3) / q(9, 4) + (q(2, 1) * q(1, 3) * q(4, 9) + q(1, 9) * q(2, 3)) / q(3, 1));
    Ok(Some(WorkedExampleCheck {
        stated: q(147, 95),
        inline_expression,
        closed_form: ndt_theorem2(cfg)?,
        oracle: ndt_oracle_for(cfg, &DemandVector::default_for(cfg))?.total,
    }))
}

/// Per-tier NDT contributions predicted by the closed form's per-`t`
/// structure with `C(K_T,t_T)` desired streams and `C(K_R-1,t)` subsets per
/// receiver. Used to explain where closed form and oracle part ways.
pub fn tier_sdof_prediction(cfg: &NetworkConfig, t: usize) -> Result<Rational> {
    let t_t = cfg.t_t_count()?;
    let c = binomial(cfg.k_t(), t_t)? as i128;
    let interfering = (cfg.k_r() as i128 - t_t as i128 - t as i128).max(0);
    Ok(Rational::new(c * cfg.k_r() as i128, c + interfering))
}

/// Receiver sets that never appear in a tier: `t = K_R` (cached everywhere).
pub fn fully_cached_set(k_r: usize) -> NodeSet {
    NodeSet::from_indices(0..k_r).expect("k_r within NodeSet range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn cfg(k_t: usize, k_r: usize, n: usize, m_t: i128, m_r: i128) -> NetworkConfig {
        NetworkConfig::with_integers(k_t, k_r, n, m_t, m_r).unwrap()
    }

    #[test]
    fn theorem1_spot_values() {
        assert_eq!(sdof_theorem1(&cfg(4, 4, 4, 2, 1)).unwrap(), SdofValue { value: q(24, 7), capped: false });
        assert_eq!(sdof_theorem1(&cfg(3, 3, 3, 2, 0)).unwrap().value, q(9, 4));
        let capped = sdof_theorem1(&cfg(4, 4, 4, 2, 3)).unwrap();
        assert_eq!(capped, SdofValue { value: q(4, 1), capped: true });
        // Tie at exactly K_R reports the cap.
        assert!(sdof_theorem1(&cfg(4, 4, 4, 2, 2)).unwrap().capped);
        let frac = NetworkConfig::new(4, 4, 4, q(2, 1), q(1, 2)).unwrap();
        assert!(matches!(sdof_theorem1(&frac), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn baseline_values() {
        assert_eq!(sdof_baseline(&cfg(4, 4, 4, 2, 1)).unwrap().value, q(3, 1));
        assert_eq!(sdof_baseline(&cfg(4, 4, 4, 2, 2)).unwrap().value, q(4, 1));
        assert_eq!(sdof_baseline(&cfg(4, 4, 4, 3, 4)).unwrap().value, q(4, 1));
    }

    #[test]
    fn dof_report_fields() {
        let r = dof_report(&cfg(4, 4, 4, 2, 1)).unwrap();
        assert_eq!(r.per_user, q(6, 7));
        assert!(!r.capped);
    }

    #[test]
    fn theorem2_values() {
        let c = cfg(3, 3, 3, 2, 1);
        assert_eq!(ndt_theorem2(&c).unwrap(), q(62, 81));
        assert_eq!(ndt_theorem2(&cfg(3, 3, 3, 2, 3)).unwrap(), Rational::ZERO);
        assert_eq!(ndt_theorem2(&cfg(3, 3, 3, 2, 0)).unwrap(), q(4, 1));
        let terms = ndt_theorem2_terms(&c).unwrap();
        assert_eq!(terms.correction, Rational::ZERO);
        assert_eq!(terms.per_t, vec![(0, q(32, 81)), (1, q(8, 27)), (2, q(2, 27))]);
    }

    #[test]
    fn oracle_on_three_by_three() {
        let c = cfg(3, 3, 3, 2, 1);
        let o = ndt_oracle_for(&c, &DemandVector::default_for(&c)).unwrap();
        assert_eq!(o.total, q(62, 81));
        let per: Vec<(usize, Rational, Rational)> = o.tiers.iter().map(|t| (t.t, t.sdof, t.ndt)).collect();
        assert_eq!(per, vec![(0, q(9, 4), q(32, 81)), (1, q(3, 1), q(8, 27)), (2, q(3, 1), q(2, 27))]);
        let full = cfg(3, 3, 3, 2, 3);
        assert_eq!(ndt_oracle_for(&full, &DemandVector::default_for(&full)).unwrap().total, Rational::ZERO);
        // Without receiver caches only tier 0 carries load.
        let none = cfg(3, 3, 3, 2, 0);
        assert_eq!(ndt_oracle_for(&none, &DemandVector::default_for(&none)).unwrap().total, q(4, 3));
    }

    #[test]
    fn oracle_rejects_incomplete_plans() {
        let c = cfg(3, 3, 3, 2, 1);
        let layout = DecentralizedLayout::new(&c).unwrap();
        let d = DemandVector::default_for(&c);
        let mut plans = build_decentralized_plan(&layout, &d).unwrap();
        plans.pop();
        assert!(matches!(ndt_oracle(&c, &plans, &layout, &d), Err(Error::MalformedPlan(_))));
    }

    #[test]
    fn finite_oracle_is_close_at_moderate_f() {
        let c = cfg(3, 3, 3, 2, 1).with_file_bits(30_000).unwrap();
        let o = ndt_oracle_finite(&c, 3, &DemandVector::default_for(&c)).unwrap();
        assert!((o.total.to_f64() - 62.0 / 81.0).abs() < 0.02);
    }

    #[test]
    fn centralized_ndt() {
        let c = cfg(4, 4, 4, 2, 1);
        assert_eq!(ndt_centralized(&c, CentralizedScheme::Proposed).unwrap(), q(7, 8));
        assert_eq!(ndt_centralized(&c, CentralizedScheme::Baseline).unwrap(), q(1, 1));
        assert_eq!(ndt_centralized(&cfg(4, 4, 4, 2, 4), CentralizedScheme::Proposed).unwrap(), Rational::ZERO);
    }

    #[test]
    fn memory_sharing() {
        let pts = [(q(0, 1), q(1, 1)), (q(1, 1), q(1, 2)), (q(2, 1), q(1, 4))];
        assert_eq!(memory_share(&pts, q(1, 1)).unwrap(), q(1, 2));
        assert_eq!(memory_share(&pts, q(1, 2)).unwrap(), q(3, 4));
        // Dominated middle corner is skipped: (1, 1) lies above the chord.
        let dominated = [(q(0, 1), q(1, 1)), (q(1, 1), q(1, 1)), (q(2, 1), q(0, 1))];
        assert_eq!(memory_share(&dominated, q(1, 1)).unwrap(), q(1, 2));
        assert!(memory_share(&pts, q(3, 1)).is_err());
        assert!(memory_share(&pts[..1], q(0, 1)).is_err());
        assert!(memory_share(&[(q(1, 1), q(1, 1)), (q(1, 1), q(2, 1))], q(1, 1)).is_err());
    }

    #[test]
    fn inverse_sdof_sweep() {
        let t = cfg(4, 4, 4, 2, 0);
        let values: Vec<Rational> = (0..=4).map(|m| q(m, 1)).collect();
        let rows = sweep_figure(&t, Figure::InverseSdof, SweepAxis::ReceiverCache, &values).unwrap();
        let p: Vec<Rational> = rows.iter().map(|r| r.proposed).collect();
        let b: Vec<Rational> = rows.iter().map(|r| r.baseline).collect();
        assert_eq!(p, vec![q(1, 3), q(7, 24), q(1, 4), q(1, 4), q(1, 4)]);
        assert_eq!(b, vec![q(1, 2), q(1, 3), q(1, 4), q(1, 4), q(1, 4)]);
        let (dec, exact) = sweep_csv(&rows, Figure::InverseSdof, SweepAxis::ReceiverCache);
        assert!(
            dec.starts_with("m_r,inv_sdof_proposed,inv_sdof_baseline\n0.000000000000,0.333333333333,0.500000000000\n")
        );
        assert!(exact.contains("\n1,7/24,1/3\n"));
    }

    #[test]
    fn fractional_sweep_point_is_memory_shared() {
        let t = cfg(4, 4, 4, 2, 0);
        let rows = sweep_figure(&t, Figure::InverseSdof, SweepAxis::ReceiverCache, &[q(1, 2)]).unwrap();
        assert_eq!(rows[0].proposed, (q(1, 3) + q(7, 24)) / q(2, 1));
        let ndt = sweep_figure(&cfg(3, 3, 3, 2, 0), Figure::Ndt, SweepAxis::ReceiverCache, &[q(1, 2)]).unwrap();
        // Closed form applies directly; the centralized side is shared between M_R = 0 and 1.
        assert_eq!(ndt[0].proposed, ndt_theorem2(&cfg(3, 3, 3, 2, 0).with_m_r(q(1, 2)).unwrap()).unwrap());
        let c0 = ndt_centralized(&cfg(3, 3, 3, 2, 0), CentralizedScheme::Baseline).unwrap();
        let c1 = ndt_centralized(&cfg(3, 3, 3, 2, 1), CentralizedScheme::Baseline).unwrap();
        assert_eq!(ndt[0].baseline, (c0 + c1) / q(2, 1));
    }

    #[test]
    fn worked_example() {
        let w = worked_example_check(&cfg(3, 3, 3, 2, 1)).unwrap().unwrap();
        assert_eq!(w.inline_expression, q(14, 9));
        assert_eq!(w.closed_form, q(62, 81));
        assert_eq!(w.oracle, q(62, 81));
        assert!(w.stated_is_inconsistent());
        assert!(worked_example_check(&cfg(4, 4, 4, 2, 1)).unwrap().is_none());
    }

    #[test]
    fn tier_prediction_matches_ledger_on_example() {
        let c = cfg(3, 3, 3, 2, 1);
        assert_eq!(tier_sdof_prediction(&c, 0).unwrap(), q(9, 4));
        assert_eq!(tier_sdof_prediction(&c, 1).unwrap(), q(3, 1));
        assert_eq!(tier_sdof_prediction(&c, 2).unwrap(), q(3, 1));
    }
}
