use num_bigint::BigInt;
use proptest::prelude::*;

use twistzeta_core::chars::character_table;
use twistzeta_core::cyclo::factorize;
use twistzeta_core::group::{center, images_to_cycles, sylow_over, FiniteGroup, Subgroup, DEFAULT_SIZE_CAP};
use twistzeta_core::inv::Context;
use twistzeta_core::zeta::{brute_twist_zeta, rep_zeta, twist_zeta};

fn perm(points: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..points as u32).collect::<Vec<u32>>()).prop_shuffle()
}

fn group_from(gens: &[Vec<u32>]) -> FiniteGroup {
    let cycles: Vec<_> = gens.iter().map(|g| images_to_cycles(g)).collect();
    FiniteGroup::from_permutations(gens[0].len(), &cycles, DEFAULT_SIZE_CAP).unwrap()
}

/// The `p`-elements of the center together with the Sylow subgroup when it
/// is normal.
fn normal_p_subgroups(g: &FiniteGroup, p: u64) -> Vec<Subgroup> {
    let z = center(g);
    let zp: Vec<usize> = z
        .iter()
        .filter(|&x| factorize(g.elem_order(x)).iter().all(|&(q, _)| q == p))
        .collect();
    let mut out = vec![Subgroup::trivial(g), Subgroup::closure(g, &zp)];
    let whole = Subgroup::whole(g);
    let s = sylow_over(g, &Subgroup::trivial(g), &whole, p);
    if s.is_normal(g) {
        out.push(s);
    }
    out.sort();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn assembly_matches_brute_force(gens in (2usize..6).prop_flat_map(|n| proptest::collection::vec(perm(n), 2))) {
        let g = group_from(&gens);
        let brute = brute_twist_zeta(&g).unwrap();

        let reps = rep_zeta(&character_table(&g, &Subgroup::whole(&g)).unwrap());
        let sum: BigInt = reps.terms().map(|(n, a)| a * BigInt::from(n * n)).sum();
        prop_assert_eq!(sum, BigInt::from(g.order()));

        for (p, _) in factorize(g.order() as u64).into_iter().chain([(2, 1)]) {
            for n in normal_p_subgroups(&g, p) {
                let ctx = Context::new(g.clone(), n.clone(), p, 1).unwrap();
                let assembled = twist_zeta(&ctx).unwrap().zeta;
                prop_assert_eq!(&assembled, &brute, "order {} with |N| = {} and p = {}", g.order(), n.order(), p);
            }
        }
    }
}
