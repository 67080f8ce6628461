//! Stable norm of homology classes: `l(k·a)/k` with the bracket from the
//! diameter correction, on a grid torus and on a wedge of two circles.

use systolab::invariants::stable_systole;
use systolab::{builders, Budget};

fn main() -> systolab::Result<()> {
    let (torus, ab) = builders::grid_torus_with_phi(3, 4, 1.0)?;
    for class in [[1, 0], [0, 1], [1, 1]] {
        let s = stable_systole(&torus, &ab, &class, 6, Budget::default())?;
        println!("torus {class:?}: [{:.4}, {:.4}]", s.lower, s.upper);
        print!("{}", s.to_csv());
    }
    let (wedge, free) = builders::wedge_with_phi(&[1.0, 1.0])?;
    let s = stable_systole(&wedge, &free, &[1, 1], 8, Budget::default())?;
    println!("wedge [1, 1]: [{:.4}, {:.4}]", s.lower, s.upper);
    Ok(())
}
