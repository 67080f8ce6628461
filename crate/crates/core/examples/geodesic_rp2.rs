//! Edge-path and straightened geodesic systoles of the regular
//! hemi-icosahedron, a triangulated projective plane.

use systolab::invariants::{phi_systole_with, systolic_ratio_with, GeodesicOptions, SystoleMode};
use systolab::{builders, Budget};

fn main() -> systolab::Result<()> {
    let (x, p) = builders::hemi_icosahedron(1.0)?;
    let b = Budget::default();
    let modes = [
        ("edge paths", SystoleMode::EdgePath),
        (
            "geodesic",
            SystoleMode::Geodesic(GeodesicOptions::default()),
        ),
    ];
    for (name, mode) in modes {
        let sys = phi_systole_with(&x, &p, mode, b)?;
        let ratio = systolic_ratio_with(&x, &p, mode, b)?;
        println!("{name:>10}: systole {:.6} ratio {:.6}", sys.length, ratio);
    }
    println!("2/pi = {:.6}", 2.0 / std::f64::consts::PI);
    Ok(())
}
