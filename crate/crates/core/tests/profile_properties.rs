use num_bigint::BigUint;
use proptest::prelude::*;
use spmat::profile::{
    binomial, canonicalize, class_count, decode, enumerate_classes, row_code, split_ranks, ClassRange, Guard,
    RowCode,
};

proptest! {
    #[test]
    fn encoding_is_bijective(n in 1usize..7, raw in proptest::collection::vec(any::<u32>(), 7)) {
        let codes: Vec<u32> = raw[..n].iter().map(|c| c & ((1 << n) - 1)).collect();
        let x = RowCode::new(n, codes).unwrap();
        prop_assert_eq!(&row_code(&decode(&x)).unwrap(), &x);
    }

    #[test]
    fn profile_is_row_permutation_invariant(
        n in 1usize..7,
        raw in proptest::collection::vec(any::<u32>(), 7),
        shuffle in any::<u64>(),
    ) {
        let mut codes: Vec<u32> = raw[..n].iter().map(|c| c & ((1 << n) - 1)).collect();
        let x = RowCode::new(n, codes.clone()).unwrap();
        let rot = (shuffle as usize) % n;
        codes.rotate_left(rot);
        if shuffle & 1 == 1 {
            codes.reverse();
        }
        let y = RowCode::new(n, codes).unwrap();
        prop_assert_eq!(x.profile(), canonicalize(&x).profile());
        prop_assert_eq!(x.profile(), y.profile());
        prop_assert_eq!(canonicalize(&x), canonicalize(&y));

        let p = x.profile();
        prop_assert_eq!(p.r.iter().sum::<usize>(), n);
        prop_assert_eq!(p.c.iter().sum::<usize>(), n);
        prop_assert_eq!(p.psi.iter().sum::<usize>(), 2 * n);
        prop_assert_eq!(p.r.iter().enumerate().map(|(k, v)| k * v).sum::<usize>(), p.eps);
        prop_assert_eq!(p.c.iter().enumerate().map(|(k, v)| k * v).sum::<usize>(), p.eps);
        prop_assert_eq!(p.eps, decode(&x).ones());
    }

    #[test]
    fn splits_concatenate_to_the_stream(n in 1usize..5, parts in 1usize..40) {
        let full: Vec<_> = ClassRange::full(n).iter().collect();
        let pieces: Vec<_> = split_ranks(n, 0, class_count(n), parts)
            .unwrap()
            .iter()
            .flat_map(|r| r.iter())
            .collect();
        prop_assert_eq!(full, pieces);
    }
}

#[test]
fn stream_is_strictly_increasing() {
    for n in 1..=4 {
        let classes: Vec<_> = enumerate_classes(n, Guard::default()).unwrap().collect();
        assert_eq!(classes.len() as u128, class_count(n));
        assert!(classes.windows(2).all(|w| w[0].codes() < w[1].codes()));
        for c in &classes {
            assert!(c.codes().windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(c.group_sizes().iter().sum::<usize>(), n);
        }
    }
}

#[test]
fn multiplicities_cover_all_matrices() {
    for n in 1..=4 {
        let total: BigUint = enumerate_classes(n, Guard::default()).unwrap().map(|c| c.multiplicity()).sum();
        assert_eq!(total, BigUint::from(2u32).pow((n * n) as u32), "n={n}");
    }
}

#[test]
fn multiplicities_by_weight_are_binomials() {
    for n in 1..=3 {
        let mut by_weight = vec![BigUint::from(0u32); n * n + 1];
        for c in enumerate_classes(n, Guard::default()).unwrap() {
            by_weight[c.profile().eps] += c.multiplicity();
        }
        for (k, v) in by_weight.iter().enumerate() {
            assert_eq!(*v, BigUint::from(binomial((n * n) as u128, k as u128)), "n={n} k={k}");
        }
    }
}

#[test]
fn canonical_images_at_two() {
    let mut images = std::collections::HashSet::new();
    for bits in 0u32..16 {
        let a = spmat::BinaryMatrix::from_fn(2, |i, j| (bits >> (2 * i + j)) & 1 == 1).unwrap();
        images.insert(canonicalize(&row_code(&a).unwrap()));
    }
    assert_eq!(images.len() as u128, class_count(2));
}
