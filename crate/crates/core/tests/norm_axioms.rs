//! Norm axioms on random pairs, for every norm kind on every group class.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check(class: &str, seed: u64, len_g: usize, len_h: usize) -> Result<(), TestCaseError> {
    let (_, group) = common::group_classes()
        .into_iter()
        .find(|(n, _)| *n == class)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = group.random_word(&mut rng, len_g);
    let h = group.random_word(&mut rng, len_h);
    for (kind, norm) in common::norms_for(class, &group) {
        if let Some(v) = common::axiom_violation(&group, &norm, &g, &h) {
            return Err(TestCaseError::fail(format!("{kind} on {class}: {v}")));
        }
    }
    Ok(())
}

macro_rules! axioms {
    ($name:ident, $class:literal) => {
        proptest! {
            #![proptest_config(ProptestConfig { cases: 10_000, ..ProptestConfig::default() })]
            #[test]
            fn $name(seed in any::<u64>(), len_g in 0usize..6, len_h in 0usize..6) {
                check($class, seed, len_g, len_h)?;
            }
        }
    };
}

axioms!(trivial_group, "trivial");
axioms!(free_group, "free");
axioms!(free_abelian_group, "abelian");
axioms!(finite_group, "finite");
axioms!(free_product_group, "product");
