//! The norm kinds evaluated on a few elements: word length, the norm that is
//! one on every nontrivial element, a weighted generator norm, a free product
//! norm and the norm induced by a metric graph.

use systolab::invariants::induced_norm;
use systolab::{builders, Budget, GroupSpec, Norm};

fn main() -> systolab::Result<()> {
    let b = Budget::default();
    let f2 = GroupSpec::parse("free 2")?;
    let (x, p) = builders::wedge_with_phi(&[1.0, 2.5])?;
    let norms = [
        ("word", Norm::word()),
        ("one", Norm::parse("one", &f2, b)?),
        ("genorm", Norm::parse("genorm one [ a b a*b^2 ]", &f2, b)?),
        ("wedge (1, 2.5)", induced_norm(&x, &p)?),
    ];
    let elements = ["a", "b", "a*b^2", "a^-1*b*a", "a^3*b^-2"];
    for (name, norm) in &norms {
        let values: Vec<String> = elements
            .iter()
            .map(|t| Ok(format!("{t}={}", norm.eval(&f2, &f2.parse_element(t)?, b)?)))
            .collect::<systolab::Result<_>>()?;
        println!("{name:>15}: {}", values.join("  "));
    }
    let zz = GroupSpec::parse("product { abelian 1 ; abelian 1 }")?;
    let fp = Norm::parse("freeprod word 3 word", &zz, b)?;
    let g = zz.parse_element("a^2*b*a^-1")?;
    println!(
        "freeprod word 3 word on a^2*b*a^-1: {}",
        fp.eval(&zz, &g, b)?
    );
    Ok(())
}
