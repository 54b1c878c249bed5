use proptest::prelude::*;

use toppling::bijections::{callan_to_vesztergombi, phi_checked, phi_inverse, vesztergombi_to_callan};
use toppling::characterize::is_p_toppleable;
use toppling::families::{is_vesztergombi, CallanWord};
use toppling::scalar::binomial;
use toppling::{
    lift, resultant, stabilize, stabilize_passes, stabilize_random, Configuration, Direction, Natural,
    Permutation, PolyBernoulli, PolyBernoulliTable,
};

fn config(max_n: usize) -> impl Strategy<Value = Configuration> {
    (1..=max_n).prop_flat_map(|n| {
        (1..=n, Just((1..=n + 1).collect::<Vec<usize>>()).prop_shuffle())
            .prop_map(move |(p, chips)| Configuration::from_flat(n, p, chips).unwrap())
    })
}

fn permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n).prop_flat_map(|n| {
        Just((1..=n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap())
    })
}

/// A random `(u,o)`-Callan word: shuffle, then sort each maximal run of one
/// class into the required direction.
fn callan_word(max_len: usize) -> impl Strategy<Value = CallanWord> {
    (1..=max_len).prop_flat_map(|m| {
        (0..=m, Just((1..=m).collect::<Vec<usize>>()).prop_shuffle()).prop_map(move |(u, mut v)| {
            let mut start = 0;
            while start < m {
                let under = v[start] <= u;
                let end = (start..m).find(|&i| (v[i] <= u) != under).unwrap_or(m);
                if under {
                    v[start..end].sort_unstable();
                } else {
                    v[start..end].sort_unstable_by(|a, b| b.cmp(a));
                }
                start = end;
            }
            CallanWord::new(Permutation::new(v).unwrap(), u, m - u).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn schedule_does_not_matter(c in config(12), seed in any::<u64>()) {
        let (passes, trace) = stabilize_passes(&c);
        prop_assert_eq!(&stabilize_random(&c, seed).0, &passes);
        prop_assert_eq!(trace.len(), c.p().min(c.n() - c.p() + 1));
        prop_assert_eq!(passes.empty_site(), c.n() - c.p() + 1);
    }

    #[test]
    fn reverse_complement_commutes_with_resultant(c in config(12)) {
        let rc = c.reverse_complement();
        prop_assert_eq!(rc.p(), c.n() + 1 - c.p());
        prop_assert_eq!(&rc.reverse_complement(), &c);
        prop_assert_eq!(resultant(&rc).0, resultant(&c).0.reverse_complement());
        prop_assert_eq!(is_p_toppleable(&rc), is_p_toppleable(&c));
    }

    #[test]
    fn window_agrees_with_dynamics(c in config(12)) {
        prop_assert_eq!(is_p_toppleable(&c), stabilize(&c).is_sorted());
    }

    #[test]
    fn lift_and_unlift(c in config(12)) {
        for (pi, r) in c.unlift() {
            let marked = lift(&pi, r, c.p()).unwrap();
            prop_assert_eq!(marked.config(), &c);
            prop_assert_eq!(marked.unlift(), pi);
            prop_assert_eq!(marked.map_w().len(), c.n() + 1);
        }
    }

    #[test]
    fn inverse_swaps_record_kinds(pi in permutation(30)) {
        let inv = pi.inverse();
        prop_assert_eq!(&inv.inverse(), &pi);
        let mut values: Vec<usize> = pi.records(Direction::LeftMax).values().collect();
        values.sort_unstable();
        let positions: Vec<usize> = inv.records(Direction::RightMin).positions().collect();
        prop_assert_eq!(values, positions);
        prop_assert_eq!(pi.reverse_complement().reverse_complement(), pi);
    }

    #[test]
    fn callan_roundtrip(w in callan_word(14)) {
        let sigma = callan_to_vesztergombi(&w);
        prop_assert!(is_vesztergombi(&sigma, w.u(), w.o()).unwrap());
        prop_assert_eq!(vesztergombi_to_callan(&sigma, w.u(), w.o()).unwrap(), w);
    }

    #[test]
    fn phi_roundtrip(c in config(9)) {
        let (img, pi) = phi_checked(&c).unwrap();
        prop_assert!(is_p_toppleable(&img));
        prop_assert_eq!(phi_inverse(&img, &pi, c.p()).unwrap(), c);
    }

    #[test]
    fn machine_and_big_integers_agree(n in 0usize..=9, k in 0usize..=9) {
        let small = PolyBernoulliTable::<i64>::new();
        let big = PolyBernoulli::new();
        prop_assert_eq!(Natural::from(small.b(n, k)), big.b(n, k));
        prop_assert_eq!(Natural::from(small.c(n, k)), big.c(n, k));
        prop_assert_eq!(Natural::from(small.stirling2(n, k)), big.stirling2(n, k));
    }

    #[test]
    fn poly_bernoulli_relations(n in 0usize..=12, k in 0usize..=12) {
        let pb = PolyBernoulli::new();
        prop_assert_eq!(pb.b(n, k), pb.b(k, n));
        prop_assert_eq!(pb.c(n + 1, k), pb.c(k + 1, n));
        let from_c: Natural = (0..=k).map(|i| binomial::<Natural>(k, i) * pb.c(n, i)).sum();
        prop_assert_eq!(pb.b(n, k), from_c);
        let from_b: Natural = (0..=k)
            .map(|i| {
                let t = binomial::<Natural>(k, i) * pb.b(n, i);
                if (k - i) % 2 == 0 { t } else { -t }
            })
            .sum();
        prop_assert_eq!(pb.c(n, k), from_b);
        // Alternating over the first index yields the transposed entry.
        let first: Natural = (0..=n)
            .map(|i| {
                let t = binomial::<Natural>(n, i) * pb.b(i, k);
                if (n - i) % 2 == 0 { t } else { -t }
            })
            .sum();
        prop_assert_eq!(pb.c(k, n), first);
        if k >= 1 {
            prop_assert_eq!(pb.b(n, k), pb.c(n, k) + pb.c(n + 1, k - 1));
        }
        if n >= 1 && k >= 1 {
            prop_assert_eq!(pb.b(n, k) % Natural::from(2), Natural::from(0));
        }
        prop_assert_eq!(pb.b(n, 1), Natural::from(1u64 << n));
    }
}
