//! Systolic ratio and volume entropy across a family of wedges and tori.

use systolab::cli::builtin_family;
use systolab::invariants::SystoleMode;
use systolab::optimize::{entropy_systole_scan, scan_csv};
use systolab::Budget;

fn main() -> systolab::Result<()> {
    let mut family = builtin_family("wedges")?;
    family.extend(builtin_family("tori")?);
    let rows = entropy_systole_scan(&family, 10.0, 5, SystoleMode::EdgePath, Budget::default())?;
    print!("{}", scan_csv(&rows));
    Ok(())
}
