//! Volume entropy of the universal cover of a wedge of two circles with
//! lengths 1 and ρ, against the entropy of `word ∗ ρ·word` on ℤ∗ℤ.

use systolab::growth::entropy_estimate;
use systolab::invariants::volume_entropy;
use systolab::{builders, Budget, GroupSpec, Norm};

fn main() -> systolab::Result<()> {
    let b = Budget::default();
    let zz = GroupSpec::parse("product { abelian 1 ; abelian 1 }")?;
    println!("rho,cover,free_product,sandwich_upper");
    for rho in [1.0, 2.0, 4.0] {
        let (x, p) = builders::wedge_with_phi(&[1.0, rho])?;
        let v = volume_entropy(&x, &p, 12.0, 5, Some(4.0), b)?;
        let norm = Norm::parse(&format!("freeprod word {rho} word"), &zz, b)?;
        let alg = entropy_estimate(&zz, &norm, 12.0, 5, b)?;
        let upper = v.sandwich.map(|s| s.upper_estimate).unwrap_or(f64::NAN);
        println!(
            "{rho},{:.6},{:.6},{upper:.6}",
            v.estimate.point_estimate, alg.point_estimate
        );
    }
    Ok(())
}
