//! Ball sizes of the free group on two letters under the word norm, next to
//! the closed form `2·3^r - 1`.

use systolab::growth::growth_table;
use systolab::{Budget, GroupSpec, Norm};

fn main() -> systolab::Result<()> {
    let f2 = GroupSpec::parse("free 2")?;
    let radii: Vec<f64> = (0..=10).map(f64::from).collect();
    let table = growth_table(&f2, &Norm::word(), &radii, Budget::default())?;
    print!("{}", table.to_csv());
    for (r, &b) in table.counts.iter().enumerate() {
        assert_eq!(b, 2 * 3u64.pow(r as u32) - 1);
    }
    println!("# matches 2*3^r - 1 for r <= 10");
    Ok(())
}
