//! Property tests for the algebraic invariants the rest of the crate relies on.

mod common;

use std::sync::Arc;

use common::{gf, random_poly};
use evohopf::fields::FieldSpec;
use evohopf::groebner::{buchberger, StarIdeal};
use evohopf::hopf::{self, CatalogName};
use evohopf::poly::{MonomialOrder, PolyRing, Polynomial, Ring, VariableSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(gf(2)),
        Just(gf(3)),
        Just(gf(7)),
        Just(gf(13)),
    ]
}

fn starred_ring(field: FieldSpec) -> Ring {
    Arc::new(PolyRing {
        vars: VariableSet::starred(&["x", "y"]),
        field,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_are_consistent(field in field_strategy(), a in -40i64..40, b in -40i64..40, c in -40i64..40) {
        let (a, b, c) = (field.element(a), field.element(b), field.element(c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), field.one());
            prop_assert_eq!(a.pow(3), &(&a * &a) * &a);
        }
    }

    #[test]
    fn involution_is_an_involutive_automorphism(field in field_strategy(), seed in any::<u64>()) {
        let ring = starred_ring(field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, &ring, 5, 3);
        let g = random_poly(&mut rng, &ring, 5, 3);
        prop_assert_eq!(f.apply_involution().apply_involution(), f.clone());
        prop_assert_eq!((&f * &g).apply_involution(), &f.apply_involution() * &g.apply_involution());
    }

    #[test]
    fn parse_display_round_trip(field in field_strategy(), seed in any::<u64>()) {
        let ring = starred_ring(field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, &ring, 6, 4);
        prop_assert_eq!(Polynomial::parse(&ring, &f.to_string()).unwrap(), f);
    }

    #[test]
    fn reduced_basis_ignores_generator_order(seed in any::<u64>()) {
        let ring = starred_ring(gf(7));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gens: Vec<Polynomial> = (0..3).map(|_| random_poly(&mut rng, &ring, 3, 3)).collect();
        let first = buchberger(&ring, &gens, &MonomialOrder::DegRevLex).unwrap();
        gens.shuffle(&mut rng);
        let second = buchberger(&ring, &gens, &MonomialOrder::DegRevLex).unwrap();
        prop_assert!(first.is_reduced() && first.satisfies_buchberger_criterion());
        prop_assert_eq!(first, second);
    }

    #[test]
    fn generators_are_members_and_normal_forms_are_canonical(seed in any::<u64>()) {
        let ring = starred_ring(gf(5));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<Polynomial> = (0..2).map(|_| random_poly(&mut rng, &ring, 3, 3)).collect();
        let ideal = StarIdeal::star_generated(&ring, gens.clone(), MonomialOrder::DegRevLex).unwrap();
        let gb = ideal.groebner();
        prop_assert!(gb.is_star_stable());
        for g in &gens {
            prop_assert!(ideal.member(g).unwrap());
            prop_assert!(ideal.member(&g.apply_involution()).unwrap());
        }
        let f = random_poly(&mut rng, &ring, 5, 4);
        let h = random_poly(&mut rng, &ring, 3, 2);
        let nf = gb.normal_form(&f).unwrap();
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        prop_assert_eq!(gb.normal_form(&(&f + &(&gens[0] * &h))).unwrap(), nf);
    }

    #[test]
    fn perturbed_comultiplication_is_rejected(term in 0usize..8, shift in 1i64..7) {
        let field = gf(7);
        let h = hopf::catalog(CatalogName::H2, field, &[field.one()]).unwrap();
        prop_assert!(hopf::verify_hopf(&h).unwrap().all_passed());
        let bad = h.with_shifted_delta_coefficient(0, term, &field.element(shift)).unwrap();
        prop_assert!(!hopf::verify_hopf(&bad).map(|r| r.all_passed()).unwrap_or(false));
    }
}
