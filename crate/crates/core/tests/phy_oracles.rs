use cachenet::delivery::{build_centralized_plan, build_decentralized_plan};
use cachenet::phy::{
    equivalent_gains, minor, sample_channel, verify_plans_phy, zf_weights, ChannelMatrix, ZF_TOLERANCE,
};
use cachenet::placement::{place_centralized, DecentralizedLayout};
use cachenet::{DemandVector, NetworkConfig, NodeSet, Rational};
use num_complex::Complex64;
use proptest::prelude::*;

fn brute_det(m: &[Vec<Complex64>]) -> Complex64 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|c| {
            let sub: Vec<Vec<Complex64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
                .collect();
            let term = m[0][c] * brute_det(&sub);
            if c % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn sub(h: &ChannelMatrix, rows: &[usize], cols: &[usize]) -> Vec<Vec<Complex64>> {
    rows.iter().map(|&r| cols.iter().map(|&c| h.get(r, c)).collect()).collect()
}

fn complement(set: &[usize], n: usize) -> NodeSet {
    NodeSet::from_indices((0..n).filter(|i| !set.contains(i))).unwrap()
}

fn cfg(k_t: usize, k_r: usize, n: usize, m_t: i128, m_r: i128) -> NetworkConfig {
    NetworkConfig::new(k_t, k_r, n, Rational::integer(m_t), Rational::integer(m_r)).unwrap()
}

#[test]
fn three_transmitter_gains_are_three_by_three_minors() {
    // t_T = 3, t_R = 0: every stream nulls two receivers.
    let c = cfg(4, 4, 4, 3, 0);
    let placement = place_centralized(&c).unwrap();
    let demand = DemandVector::default_for(&c);
    let plan = build_centralized_plan(&placement, &demand).unwrap();
    assert!(plan.transmissions().all(|s| s.zf_targets.len() == 2));
    let seeds: Vec<u64> = (0..100).collect();
    let report = verify_plans_phy(std::slice::from_ref(&plan), &placement, &demand, &seeds, ZF_TOLERANCE).unwrap();
    assert!(report.is_clean(), "{}", report.violations[0]);
    for &seed in &seeds[..20] {
        let h = sample_channel(4, 4, seed).unwrap();
        for s in plan.transmissions() {
            let x = s.subfile.tx_set.to_vec();
            let z = s.zf_targets.to_vec();
            let p = zf_weights(&h, s.subfile.tx_set, s.zf_targets).unwrap();
            let g = equivalent_gains(&h, &p);
            // Raw cofactor weights, largest magnitude used for normalization.
            let scale = (0..3)
                .map(|k| {
                    let cols: Vec<usize> = x.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &v)| v).collect();
                    brute_det(&sub(&h, &z, &cols)).norm()
                })
                .fold(0.0, f64::max);
            for r in (0..4).filter(|r| !z.contains(r)) {
                let rows = [vec![r], z.clone()].concat();
                let direct = brute_det(&sub(&h, &rows, &x));
                let mut sorted = rows.clone();
                sorted.sort_unstable();
                let m = minor(&h, complement(&sorted, 4), complement(&x, 4)).unwrap();
                let err = |v: Complex64| (direct - v).norm().min((direct + v).norm()) / direct.norm();
                assert!(err(m) < 1e-12);
                assert!(err(g.0[r] * scale) < 1e-12);
            }
        }
    }
}

#[test]
fn decentralized_tier_plans_zero_force_cleanly() {
    for (k_t, k_r, n, m_t) in [(3, 3, 3, 2), (4, 4, 4, 2), (4, 5, 4, 3)] {
        let c = cfg(k_t, k_r, n, m_t, 1);
        let layout = DecentralizedLayout::new(&c).unwrap();
        let demand = DemandVector::default_for(&c);
        let plans = build_decentralized_plan(&layout, &demand).unwrap();
        let seeds: Vec<u64> = (0..30).collect();
        let report = verify_plans_phy(&plans, &layout, &demand, &seeds, ZF_TOLERANCE).unwrap();
        assert!(report.is_clean(), "{c}: {}", report.violations[0]);
        assert!(report.max_zf_residual < ZF_TOLERANCE);
    }
}

#[test]
fn verification_is_seed_ordered_and_repeatable() {
    let c = cfg(4, 4, 4, 2, 1);
    let placement = place_centralized(&c).unwrap();
    let demand = DemandVector::default_for(&c);
    let plan = build_centralized_plan(&placement, &demand).unwrap();
    let seeds: Vec<u64> = (10..40).collect();
    let a = verify_plans_phy(std::slice::from_ref(&plan), &placement, &demand, &seeds, ZF_TOLERANCE).unwrap();
    let b = verify_plans_phy(std::slice::from_ref(&plan), &placement, &demand, &seeds, ZF_TOLERANCE).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.channels, 30);
    // 4 receivers see 72 transmissions: 18 desired, 18 nulled, 18 cancelled, 18 aligned.
    assert_eq!(a.zf_checks, 30 * 72);
    assert_eq!(a.ic_flagged, 30 * 72);
}

proptest! {
    #[test]
    fn minor_agrees_with_cofactor_expansion(
        (k_r, k_t, keep_r, keep_c) in (1usize..=5, 1usize..=5).prop_flat_map(|(k_r, k_t)| {
            (1..=k_r.min(k_t)).prop_flat_map(move |size| {
                (
                    Just(k_r),
                    Just(k_t),
                    proptest::sample::subsequence((0..k_r).collect::<Vec<_>>(), size),
                    proptest::sample::subsequence((0..k_t).collect::<Vec<_>>(), size),
                )
            })
        }),
        entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
    ) {
        let rows: Vec<Vec<Complex64>> = (0..k_r)
            .map(|r| (0..k_t).map(|c| { let (a, b) = entries[r * 5 + c]; Complex64::new(a, b) }).collect())
            .collect();
        let h = ChannelMatrix::from_rows(rows).unwrap();
        let want = brute_det(&sub(&h, &keep_r, &keep_c));
        let got = minor(&h, complement(&keep_r, k_r), complement(&keep_c, k_t)).unwrap();
        let scale = want.norm().max(got.norm()).max(1e-300);
        prop_assert!((want - got).norm() / scale < 1e-10 || (want - got).norm() < 1e-14);
    }

    #[test]
    fn sampled_channels_are_generic(seed in 0u64..10_000) {
        let h = sample_channel(3, 3, seed).unwrap();
        prop_assert!(h.min_minor_magnitude() >= 1e-9);
        prop_assert_eq!(h.seed(), seed);
    }
}

#[test]
fn channel_entries_have_unit_power() {
    let mut power = 0.0;
    let mut count = 0.0;
    for seed in 0..2000 {
        let h = sample_channel(4, 4, seed).unwrap();
        for r in 0..4 {
            for t in 0..4 {
                power += h.get(r, t).norm_sqr();
                count += 1.0;
            }
        }
    }
    assert!((power / count - 1.0).abs() < 0.03);
}
