use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsbirch::birch::{enumerate_reps, Level, RepSet};
use rsbirch::localgroup::{decompose, random, WeylElement};
use rsbirch::measures::{all_characters, check_relation, fourier_inverse, integrate_characters, PAdicDistribution};
use rsbirch::scalars::Cyclotomic;

// Integer combination of 12th roots of unity.
fn cyc() -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((-3i64..=3, 0i64..12), 0..5).prop_map(|terms| {
        terms.iter().fold(Cyclotomic::zero(), |acc, &(c, k)| {
            &acc + &(&Cyclotomic::from_int(c) * &Cyclotomic::root_of_unity(12, k))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(a.conj().conj(), a.clone());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn decomposition_recovers_coset(seed in any::<u64>(), n in 1usize..=3, p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, e, w) = random::assembled(&mut rng, n, p);
        let d = decompose(&g).unwrap();
        prop_assert_eq!(&d.e, &e);
        prop_assert_eq!(&d.omega, &w);
        prop_assert_eq!(d.reconstruct(), g);
    }

    #[test]
    fn summed_distributions_are_distributions(vals in prop::collection::vec(-20i64..20, 18)) {
        let mu = PAdicDistribution::from_top(3, 3, |x| Cyclotomic::from_int(vals[(x % 18) as usize])).unwrap();
        prop_assert!(check_relation(&mu).unwrap().holds);
        let back = PAdicDistribution::from_repr(&mu.to_repr()).unwrap();
        prop_assert_eq!(back, mu);
    }

    #[test]
    fn fourier_round_trip(vals in prop::collection::vec(-9i64..9, 6)) {
        let mu = PAdicDistribution::from_top(3, 2, |x| Cyclotomic::from_int(vals[(x % 6) as usize])).unwrap();
        let chars = all_characters(3, 2);
        let ints = integrate_characters(&mu, &chars).unwrap();
        let targets: Vec<_> = chars.into_iter().zip(ints).collect();
        prop_assert_eq!(fourier_inverse(3, 2, &targets).unwrap(), mu);
    }

    #[test]
    fn rep_indexing_round_trips(seed in any::<u64>()) {
        let set = enumerate_reps(2, 4, 1, 3, &WeylElement::identity(2)).unwrap();
        let idx = seed % set.count();
        let r = set.entries(idx);
        prop_assert_eq!(set.index_of(&r), Some(idx));
    }
}

#[test]
fn rep_sets_are_deterministic() {
    let w = WeylElement::longest(2);
    let a = RepSet::new(2, Level::new(2, 1, 4), &w).unwrap();
    let b = RepSet::new(2, Level::new(2, 1, 4), &w).unwrap();
    assert_eq!(a.count(), b.count());
    assert!((0..a.count()).all(|i| a.entries(i) == b.entries(i)));
}
