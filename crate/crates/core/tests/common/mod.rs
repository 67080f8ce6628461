#![allow(dead_code)]

use systolab::builders;
use systolab::group::FiniteTable;
use systolab::invariants::induced_norm;
use systolab::{Budget, GroupElement, GroupSpec, MetricComplex, Norm, PiOneData};

/// S3 as permutations of {0, 1, 2}, composed right to left.
pub fn s3() -> GroupSpec {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [2, 1, 0],
        [1, 2, 0],
        [2, 0, 1],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let table = perms
        .iter()
        .flat_map(|a| perms.iter().map(move |b| idx([a[b[0]], a[b[1]], a[b[2]]])))
        .collect();
    GroupSpec::finite(FiniteTable::new(6, table, 0).unwrap())
}

/// One representative per group class.
pub fn group_classes() -> Vec<(&'static str, GroupSpec)> {
    vec![
        ("trivial", GroupSpec::trivial()),
        ("free", GroupSpec::parse("free 2").unwrap()),
        ("abelian", GroupSpec::parse("abelian 2").unwrap()),
        ("finite", s3()),
        (
            "product",
            GroupSpec::parse("product { abelian 1 ; finite 2 0 1 1 0 0 }").unwrap(),
        ),
    ]
}

fn el(g: &GroupSpec, text: &str) -> GroupElement {
    g.parse_element(text).unwrap()
}

/// Wedge of circles of the given lengths with the `i`-th loop sent to `images[i]`.
pub fn wedge_onto(
    group: &GroupSpec,
    lengths: &[f64],
    images: Vec<GroupElement>,
) -> (MetricComplex, PiOneData) {
    let x = builders::wedge_of_circles(lengths).unwrap();
    let mut p = PiOneData::new(&x);
    p.attach_phi(&x, group.clone(), images).unwrap();
    (x, p)
}

/// A complex whose deck group is `group`, for the induced norm.
pub fn geometric_model(name: &str, group: &GroupSpec) -> (MetricComplex, PiOneData) {
    match name {
        "trivial" => wedge_onto(group, &[1.3], vec![group.identity()]),
        "free" => builders::wedge_with_phi(&[1.0, 1.7]).unwrap(),
        "abelian" => builders::lattice_torus(3, 3, [2.0, 0.0], [0.5, 1.5]).unwrap(),
        "finite" => wedge_onto(
            group,
            &[1.0, 1.5],
            vec![GroupElement::Finite(1), GroupElement::Finite(4)],
        ),
        "product" => wedge_onto(group, &[1.0, 0.8], vec![el(group, "a"), el(group, "b.1")]),
        _ => unreachable!("unknown class {name}"),
    }
}

/// Every norm kind that applies to the class.
pub fn norms_for(name: &str, group: &GroupSpec) -> Vec<(&'static str, Norm)> {
    let b = Budget::default();
    let mut out = vec![
        ("word", Norm::word()),
        ("one", Norm::parse("one", group, b).unwrap()),
    ];
    let genorm = match name {
        "trivial" => None,
        "free" => Some("genorm word [ a b a*b^2 ]"),
        "abelian" => Some("genorm word [ a b a*b^-3 ]"),
        "finite" => Some("genorm word [ a.1 a.4 ]"),
        "product" => Some("genorm word [ a^2 b.1 a*b.1 ]"),
        _ => unreachable!(),
    };
    if let Some(text) = genorm {
        out.push(("genorm", Norm::parse(text, group, b).unwrap()));
    }
    if name == "product" {
        out.push((
            "freeprod",
            Norm::parse("freeprod word 2.5 word", group, b).unwrap(),
        ));
    }
    let (x, p) = geometric_model(name, group);
    out.push(("geometric", induced_norm(&x, &p).unwrap()));
    out
}

/// Checks positivity, symmetry and the triangle inequality on one pair.
pub fn axiom_violation(
    group: &GroupSpec,
    norm: &Norm,
    g: &GroupElement,
    h: &GroupElement,
) -> Option<String> {
    let b = Budget::default();
    let l = |x: &GroupElement| norm.eval(group, x, b).unwrap();
    let (lg, lh) = (l(g), l(h));
    let tol = 1e-9 * (1.0 + lg + lh);
    if lg < 0.0 || (lg == 0.0) != group.is_identity(g) {
        return Some(format!("L({g:?}) = {lg}"));
    }
    let li = l(&group.inverse(g).unwrap());
    if (li - lg).abs() > tol {
        return Some(format!("L({g:?}) = {lg} but L(inverse) = {li}"));
    }
    let lgh = l(&group.multiply(g, h).unwrap());
    if lgh > lg + lh + tol {
        return Some(format!("L(gh) = {lgh} > {lg} + {lh} for {g:?}, {h:?}"));
    }
    None
}
