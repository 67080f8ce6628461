//! Shortest loops with nontrivial image on a flat torus built from a 3×4
//! grid of unit squares, per basepoint.

use systolab::invariants::{phi_systole, systolic_ratio};
use systolab::{builders, Budget};

fn main() -> systolab::Result<()> {
    let (x, p) = builders::grid_torus_with_phi(3, 4, 1.0)?;
    let sys = phi_systole(&x, &p, Budget::default())?;
    let target = &p.phi()?.target;
    print!("{}", sys.to_csv(&x, target));
    println!(
        "# systole {} area {} ratio {}",
        sys.length,
        x.volume()?,
        systolic_ratio(&x, &p, Budget::default())?
    );
    Ok(())
}
