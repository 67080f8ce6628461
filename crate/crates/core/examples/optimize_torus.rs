//! Pattern search on the edge lengths of a 3×3 grid torus, measuring
//! systoles geodesically. The ratio stays above the hexagonal torus value
//! `√3/2`.

use systolab::builders;
use systolab::invariants::{GeodesicOptions, SystoleMode};
use systolab::optimize::{optimize_ratio, trace_csv, OptimizeConfig};

fn main() -> systolab::Result<()> {
    let (x, p) = builders::grid_torus_with_phi(3, 3, 1.0)?;
    let cfg = OptimizeConfig {
        max_iters: 60,
        normalize: true,
        mode: SystoleMode::Geodesic(GeodesicOptions::default()),
        ..Default::default()
    };
    let out = optimize_ratio(&x, &p, &cfg)?;
    print!("{}", trace_csv(&out.trace));
    println!(
        "# ratio {:.6} (recheck {:.6}), floor {:.6}",
        out.ratio,
        out.verified_ratio,
        3f64.sqrt() / 2.0
    );
    Ok(())
}
