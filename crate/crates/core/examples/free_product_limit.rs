//! Entropy of `word ∗ ρ·word` on ℤ∗ℤ as the scale on the second factor grows.
//!
//! The entropy decays towards the entropy of the first factor, which is zero
//! for ℤ.

use systolab::growth::{free_product_csv, free_product_limit};
use systolab::{Budget, GroupSpec, Norm};

fn main() -> systolab::Result<()> {
    let z = GroupSpec::free_abelian(1);
    let rhos = [1.0, 2.0, 4.0, 8.0, 16.0];
    let rows = free_product_limit(
        &z,
        &z,
        &Norm::word(),
        &Norm::word(),
        &rhos,
        12.0,
        5,
        Budget::default(),
    )?;
    print!("{}", free_product_csv(&rows));
    Ok(())
}
