use num_traits::{Signed, Zero};
use proptest::prelude::*;

use qchar_core::fermionic::{parafermionic_form, parafermionic_sum, principal_form, principal_sum, prop01_sum};
use qchar_core::oracle::MultTable;
use qchar_core::qpbasis::{check_admissible, enumerate_basis, parafermionic_energy, CensusFilter};
use qchar_core::rational::int;
use qchar_core::theta::{assemble_character, theta_direct, theta_series};
use qchar_core::{
    AdmissibilityContext, DominantWeight, Grading, HighestWeight, LatticeContext, Rational, Search, WeightVec,
};

/// `(n, k, k0, j, kj)` with `k0 + kj = k`.
fn module(max_n: usize, max_k: usize) -> impl Strategy<Value = HighestWeight> {
    (1..=max_n, 1..=max_k)
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 0..=k, 1..=n))
        .prop_map(|(n, k, kj, j)| {
            let j = (kj > 0).then_some(j);
            HighestWeight::new(n, k - kj, j, kj).expect("valid shape")
        })
}

fn tuples(dim: usize) -> Vec<Vec<i64>> {
    (0..dim).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                (0..=3).map(move |v| {
                    let mut x = p.clone();
                    x.push(v);
                    x
                })
            })
            .collect()
    })
}

#[test]
fn exponent_forms_are_positive_on_small_tuples() {
    for n in 1..=4 {
        for k in 2..=4 {
            for hw in [
                HighestWeight::vacuum(n, k).unwrap(),
                HighestWeight::new(n, k - 1, Some(n), 1).unwrap(),
            ] {
                let principal = principal_form(&hw, k - 1).unwrap();
                let para = parafermionic_form(&hw).unwrap();
                let dim = principal.dim();
                if 4usize.pow(dim as u32) > 70_000 {
                    continue;
                }
                for x in tuples(dim).into_iter().filter(|x| x.iter().any(|&v| v != 0)) {
                    assert!(principal.evaluate(&x) > int(0), "{hw} principal {x:?}");
                    // The linear term can cancel the quadratic one; only the vacuum is strict.
                    let linear: Rational = para.linear.iter().zip(&x).map(|(l, &v)| l * int(v)).sum();
                    let value = para.evaluate(&x);
                    assert!(value - linear > int(0), "{hw} parafermionic quadratic {x:?}");
                    assert!(value >= int(0), "{hw} parafermionic {x:?}");
                    if hw.is_vacuum() {
                        assert!(value > int(0), "{hw} parafermionic {x:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn particle_antiparticle_sum_matches_assembly_at_higher_rank() {
    for (n, k) in [(3, 1), (4, 1), (5, 1), (4, 2)] {
        let order = int(3);
        let p = prop01_sum(n, k, order, Search::Tight).unwrap();
        let hw = HighestWeight::vacuum(n, k).unwrap();
        let a = assemble_character(&hw, order, false, Search::Tight).unwrap().collapse();
        assert_eq!(p, a, "n={n} k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sums_have_nonnegative_integer_coefficients(hw in module(2, 3), order in 0i64..6) {
        let order = int(order);
        let p = principal_sum(&hw, hw.level(), order, Search::Tight).unwrap();
        prop_assert!(p.has_nonnegative_coefficients() && p.has_integer_exponents());
        if hw.level() >= 2 {
            let pf = parafermionic_sum(&hw, order, None, Search::Tight).unwrap();
            prop_assert!(pf.has_nonnegative_coefficients());
        }
        let ch = assemble_character(&hw, order, true, Search::Tight).unwrap();
        prop_assert!(ch.components().values().all(|s| s.has_nonnegative_coefficients()));
    }

    #[test]
    fn doubling_the_radius_changes_nothing(hw in module(2, 3), order in 0i64..7) {
        let order = int(order);
        prop_assert_eq!(
            principal_sum(&hw, hw.level(), order, Search::Tight).unwrap(),
            principal_sum(&hw, hw.level(), order, Search::Doubled).unwrap()
        );
        if hw.level() >= 2 {
            let ctx = AdmissibilityContext::new(hw.clone()).unwrap();
            let filter = CensusFilter::default();
            let tight = enumerate_basis(&ctx, order, Grading::Parafermionic, &filter, false, Search::Tight).unwrap();
            let doubled = enumerate_basis(&ctx, order, Grading::Parafermionic, &filter, false, Search::Doubled).unwrap();
            prop_assert_eq!(tight.counts, doubled.counts);
        }
    }

    #[test]
    fn listed_monomials_are_admissible_with_their_grade(hw in module(2, 3), twice in 0i64..8) {
        prop_assume!(hw.level() >= 2);
        let max_energy = qchar_core::rational::frac(twice, 2);
        let ctx = AdmissibilityContext::new(hw).unwrap();
        let census = enumerate_basis(&ctx, max_energy, Grading::Parafermionic, &CensusFilter::default(), true, Search::Tight).unwrap();
        let listing = census.monomials.as_ref().unwrap();
        prop_assert_eq!(listing.len() as u64, census.total());
        for gm in listing {
            prop_assert!(check_admissible(&gm.monomial, &ctx));
            prop_assert_eq!(parafermionic_energy(&gm.monomial, &ctx), gm.grade);
            prop_assert!(gm.grade <= max_energy);
        }
    }

    #[test]
    fn theta_enumerator_matches_box_scan(n in 1usize..=3, k in 1usize..=3, labels in prop::collection::vec(-3i64..=3, 3), order in 0i64..6) {
        let ctx = LatticeContext::new(n).unwrap();
        let mu = WeightVec::from_ints(&labels[..n]);
        let order = int(order);
        let fast = theta_series(&ctx, &mu, k, order, false, Search::Tight).unwrap().collapse();
        prop_assert_eq!(fast, theta_direct(&ctx, &mu, k, order).unwrap());
    }

    #[test]
    fn oracle_is_weyl_invariant_and_order_independent(labels in prop::collection::vec(0usize..=2, 3), seed in any::<u64>()) {
        prop_assume!(labels.iter().sum::<usize>() > 0);
        let weight = DominantWeight::new(labels).unwrap();
        let table = MultTable::build(&weight, 3).unwrap();
        let scrambled = MultTable::build_with(&weight, 3, Some(seed)).unwrap();
        let ctx = LatticeContext::new(2).unwrap();
        for d in 0..=3 {
            prop_assert_eq!(table.depth_dimension(d), scrambled.depth_dimension(d));
            prop_assert!(table.depth_dimension(d) > Zero::zero());
        }
        for (aw, mult) in table.entries() {
            prop_assert!(mult.is_positive());
            for i in 1..=2 {
                // s_i μ = μ - ⟨μ, α_i⟩ α_i
                let alpha = ctx.simple_root(i).unwrap();
                let pairing = ctx.inner_product(&aw.finite, &alpha).unwrap();
                let image = aw.finite.sub(&alpha.scale(pairing));
                let reflected = qchar_core::AffineWeight { finite: image, depth: aw.depth };
                prop_assert_eq!(&table.mult(&reflected), mult);
            }
        }
    }
}
