//! Minimizes Area / sys^2 on the antipodal quotient of the icosahedron,
//! measuring systoles by flat geodesics, with two subdivision rounds.

use systolab::builders::hemi_icosahedron;
use systolab::invariants::{GeodesicOptions, SystoleMode};
use systolab::optimize::{optimize_ratio, trace_csv, OptimizeConfig};

fn main() -> systolab::Result<()> {
    let (x, p) = hemi_icosahedron(1.0)?;
    let cfg = OptimizeConfig {
        max_iters: 400,
        initial_step: 1.10,
        shrink: 0.5,
        min_step: 1.002,
        subdivisions: 2,
        mode: SystoleMode::Geodesic(GeodesicOptions {
            steiner_points: 4,
            candidates: 16,
            slack: 0.25,
            ..Default::default()
        }),
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let out = optimize_ratio(&x, &p, &cfg)?;
    print!("{}", trace_csv(&out.trace));
    let pu = 2.0 / std::f64::consts::PI;
    println!(
        "final ratio {:.6}, verified {:.6}, 2/pi = {pu:.6}",
        out.ratio, out.verified_ratio
    );
    println!(
        "relative excess {:.4} after {:.0?}",
        out.ratio / pu - 1.0,
        start.elapsed()
    );
    Ok(())
}
