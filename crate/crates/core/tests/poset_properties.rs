use proptest::prelude::*;

use sdepth_core::certificate::{verify_partition, PartitionCertificate};
use sdepth_core::monomial::{cycle_ideal, line_ideal, minimalize, Monomial, MonomialIdeal};
use sdepth_core::poset::{poset_of_ideal, poset_of_quotient, Interval};
use sdepth_core::{decide_at_least, sdepth_exact, SearchOptions};

fn squarefree_ideal(n: usize, masks: &[u64]) -> MonomialIdeal {
    let gens = masks
        .iter()
        .map(|&m| Monomial::from_mask(n, m & ((1 << n) - 1)))
        .collect();
    minimalize(gens, n).unwrap()
}

fn ideal_strategy(max_n: usize) -> impl Strategy<Value = MonomialIdeal> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(1u64..(1 << n), 1..6).prop_map(move |m| squarefree_ideal(n, &m))
    })
}

/// Independent sets of a graph on `[n]`, counted vertex by vertex.
fn count_independent_sets(n: usize, edges: &[(usize, usize)]) -> u64 {
    fn go(v: usize, n: usize, chosen: &mut Vec<usize>, edges: &[(usize, usize)]) -> u64 {
        if v > n {
            return 1;
        }
        let mut total = go(v + 1, n, chosen, edges);
        let clash = chosen
            .iter()
            .any(|&u| edges.contains(&(u, v)) || edges.contains(&(v, u)));
        if !clash {
            chosen.push(v);
            total += go(v + 1, n, chosen, edges);
            chosen.pop();
        }
        total
    }
    go(1, n, &mut Vec::new(), edges)
}

#[test]
fn quotient_sizes_count_independent_sets() {
    for n in 3..=16 {
        let path: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        let mut cycle = path.clone();
        cycle.push((n, 1));
        let p = poset_of_quotient(&line_ideal(n).unwrap()).unwrap();
        assert_eq!(
            p.len() as u64,
            count_independent_sets(n, &path),
            "path n={n}"
        );
        let c = poset_of_quotient(&cycle_ideal(n).unwrap()).unwrap();
        assert_eq!(
            c.len() as u64,
            count_independent_sets(n, &cycle),
            "cycle n={n}"
        );
    }
}

proptest! {
    #[test]
    fn minimalize_preserves_membership(n in 1usize..7, raw in prop::collection::vec(0u64..64, 1..8)) {
        let gens: Vec<Monomial> = raw.iter().map(|&m| Monomial::from_mask(n, m & ((1 << n) - 1))).collect();
        let ideal = minimalize(gens.clone(), n).unwrap();
        for m in 0u64..(1 << n) {
            let mono = Monomial::from_mask(n, m);
            let direct = gens.iter().any(|g| g.divides(&mono));
            prop_assert_eq!(ideal.contains(&mono).unwrap(), direct);
        }
        for (a, b) in ideal.generators().iter().zip(ideal.generators().iter().skip(1)) {
            prop_assert!(!a.divides(b) && !b.divides(a));
        }
    }

    #[test]
    fn ideal_and_quotient_posets_are_complementary(ideal in ideal_strategy(10)) {
        let n = ideal.n();
        let up = poset_of_ideal(&ideal).unwrap();
        let down = poset_of_quotient(&ideal).unwrap();
        for m in 0u32..(1 << n) {
            prop_assert!(up.contains(m) ^ down.contains(m));
        }
        let counts: u64 = up.level_counts().iter().sum();
        prop_assert_eq!(counts as usize, up.len());
        prop_assert_eq!(up.len() + down.len(), 1 << n);
    }

    #[test]
    fn closure_directions(ideal in ideal_strategy(9)) {
        let n = ideal.n();
        let up = poset_of_ideal(&ideal).unwrap();
        let down = poset_of_quotient(&ideal).unwrap();
        for m in up.members() {
            for i in 0..n {
                prop_assert!(up.contains(m | 1 << i));
            }
        }
        for m in down.members() {
            for i in 0..n {
                prop_assert!(down.contains(m & !(1 << i)));
            }
        }
    }

    #[test]
    fn single_bit_corruptions_are_rejected(
        ideal in ideal_strategy(6),
        pick in any::<prop::sample::Index>(),
        bit in 0usize..6,
        hit_top in any::<bool>(),
    ) {
        let n = ideal.n();
        let poset = poset_of_quotient(&ideal).unwrap();
        prop_assume!(!poset.is_empty());
        let result = sdepth_exact(&poset, None, &SearchOptions::default());
        let cert = result.certificate.expect("finite poset has a certificate");
        prop_assert_eq!(verify_partition(&poset, &cert), Ok(()));
        let mut bad = cert.clone();
        let idx = pick.index(bad.intervals.len());
        let flip = 1u32 << (bit % n);
        let iv = &mut bad.intervals[idx];
        if hit_top { iv.top ^= flip } else { iv.bottom ^= flip }
        prop_assert!(verify_partition(&poset, &bad).is_err());
    }
}

#[test]
fn certificates_with_dropped_or_merged_intervals_fail() {
    let poset = poset_of_quotient(&line_ideal(6).unwrap()).unwrap();
    let report = decide_at_least(&poset, 2, &SearchOptions::default()).unwrap();
    let sdepth_core::Decision::Certificate(cert) = report.decision else {
        panic!("S/I_6 has depth 2");
    };
    assert_eq!(cert.claimed_sdepth, 2);
    let mut dropped = cert.clone();
    dropped.intervals.pop();
    assert_eq!(
        verify_partition(&poset, &dropped).unwrap_err().kind(),
        "coverage"
    );
    let mut doubled = cert.clone();
    doubled.intervals.push(cert.intervals[0]);
    assert_eq!(
        verify_partition(&poset, &doubled).unwrap_err().kind(),
        "overlap"
    );
    let mut inflated = cert;
    inflated.claimed_sdepth += 1;
    assert_eq!(
        verify_partition(&poset, &inflated).unwrap_err().kind(),
        "claim"
    );
    let outside = PartitionCertificate::from_intervals(6, vec![Interval::new(0, 0b11)]);
    assert_eq!(
        verify_partition(&poset, &outside).unwrap_err().kind(),
        "outside"
    );
}
