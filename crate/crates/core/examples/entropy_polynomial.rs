//! Entropy estimates for a group of polynomial growth and one of exponential
//! growth. For ℤ² the octave quotients tend to zero like `log 4 / r`.

use systolab::growth::entropy_estimate;
use systolab::{Budget, GroupSpec, Norm};

fn main() -> systolab::Result<()> {
    for (text, r_max) in [("abelian 2", 200.0), ("free 2", 12.0)] {
        let g = GroupSpec::parse(text)?;
        let e = entropy_estimate(&g, &Norm::word(), r_max, 5, Budget::default())?;
        println!("{text}: estimate {:.5} at r_max {r_max}", e.point_estimate);
        for (r, v) in &e.lower_sequence {
            println!("  r {r:>6.1}  (1/r) log beta {v:.5}");
        }
        if let Some(u) = e.upper_bound {
            println!("  upper bound {u:.5}");
        }
    }
    Ok(())
}
