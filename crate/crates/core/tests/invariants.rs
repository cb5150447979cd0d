use biprod::abelian_group::{dual_inverse, fixed_subgroup, FiniteAbelianGroup};
use biprod::hopf_biproduct::{Biproduct, BiproductSpec};
use biprod::perm_search::{
    all_automorphisms, aut_sigma_elements, containment_chain, enumerate, gamma_witnesses, nu_fiber, validate, BruteCap,
    SigmaContext, Strategy as Search, Target,
};
use proptest::prelude::*;

const GROUPS: &[&[u64]] = &[&[2], &[3], &[4], &[5], &[6], &[7], &[8], &[9], &[2, 2], &[2, 4], &[3, 3], &[2, 2, 2], &[12], &[2, 6]];

fn instance() -> impl Strategy<Value = SigmaContext> {
    (0..GROUPS.len(), any::<usize>()).prop_map(|(gi, k)| {
        let g = FiniteAbelianGroup::new(GROUPS[gi]).unwrap();
        let autos = all_automorphisms(&g).unwrap();
        SigmaContext::new(&autos[k % autos.len()]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chain_of_inclusions(ctx in instance()) {
        let c = containment_chain(&ctx, Search::Constrained, BruteCap::default()).unwrap();
        prop_assert!(c.holds());
        prop_assert!(c.aut_order <= c.gamma_order && c.gamma_order <= c.sym_order);
    }

    #[test]
    fn each_gamma_element_has_one_character(ctx in instance()) {
        let g = &ctx.group;
        for w in gamma_witnesses(&ctx, Search::Constrained, BruteCap::default(), 1).unwrap() {
            prop_assert_eq!(nu_fiber(&ctx, &w.tau).unwrap(), vec![w.alpha.clone()]);
            // τ preserves Ker(α) and is additive there.
            let kernel = w.alpha.kernel();
            for &x in &kernel {
                prop_assert!(kernel.contains(&w.tau.apply(x)));
                for &y in &kernel {
                    prop_assert_eq!(w.tau.apply(g.add_idx(x, y)), g.add_idx(w.tau.apply(x), w.tau.apply(y)));
                }
            }
        }
    }

    #[test]
    fn sym_members_fix_zero_and_fixed_subgroup(ctx in instance()) {
        let fixed = fixed_subgroup(&ctx.sigma);
        for tau in enumerate(&ctx, Target::SymMinus, Search::Constrained, BruteCap::default()).unwrap() {
            prop_assert_eq!(tau.apply(0), 0);
            prop_assert!(validate::commutes_with_sigma(&ctx, &tau));
            for &x in fixed.members() {
                prop_assert!(fixed.contains(tau.apply(x)));
            }
        }
    }

    #[test]
    fn aut_sigma_is_a_group(ctx in instance()) {
        let aut = aut_sigma_elements(&ctx).unwrap();
        for a in &aut {
            prop_assert!(aut.contains(&a.inverse()));
            for b in &aut {
                prop_assert!(aut.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn dual_inverse_is_an_involution(ctx in instance()) {
        let theta = dual_inverse(&ctx.sigma).unwrap();
        prop_assert_eq!(dual_inverse(&theta).unwrap(), ctx.sigma.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn a_prime_identity_and_pairs(gi in 0usize..4, k in any::<usize>()) {
        let moduli: [&[u64]; 4] = [&[2, 2], &[4], &[3], &[2, 4]];
        let g = FiniteAbelianGroup::new(moduli[gi]).unwrap();
        let autos = all_automorphisms(&g).unwrap();
        let theta = &autos[k % autos.len()];
        let a = Biproduct::build(BiproductSpec::a_prime(theta).unwrap()).unwrap();
        prop_assert!(a.verify_bialgebra().all_pass());
        let ctx = SigmaContext::new(&a.sigma).unwrap();
        for w in gamma_witnesses(&ctx, Search::Constrained, BruteCap::default(), 1).unwrap() {
            let f = a.automorphism_from_pair(&w.tau, &w.alpha).unwrap();
            prop_assert!(a.is_hopf_endo_fixing_pi(&f).unwrap().holds());
            let (tau, alpha) = a.pair_from_automorphism(&f).unwrap();
            prop_assert_eq!(tau, w.tau);
            prop_assert_eq!(alpha, w.alpha);
        }
    }
}
