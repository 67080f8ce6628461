//! Standard complexes, optionally with a homomorphism attached.

use crate::complex::{Edge, MetricComplex, PiOneData};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// One vertex with a loop edge of the given length.
pub fn circle(length: f64) -> Result<MetricComplex> {
    wedge_of_circles(&[length])
}

/// A cycle of `n` edges, each of length `total / n`.
pub fn polygon(n: usize, total: f64) -> Result<MetricComplex> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "polygon needs at least one edge".into(),
        ));
    }
    let edges = (0..n)
        .map(|i| Edge {
            id: i as i64,
            ends: [i, (i + 1) % n],
            length: total / n as f64,
        })
        .collect();
    MetricComplex::new((0..n as i64).collect(), edges, Vec::new(), 0)
}

/// One vertex with a loop edge per length.
pub fn wedge_of_circles(lengths: &[f64]) -> Result<MetricComplex> {
    let edges = lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| Edge {
            id: i as i64,
            ends: [0, 0],
            length: l,
        })
        .collect();
    MetricComplex::new(vec![0], edges, Vec::new(), 0)
}

/// Sends the `i`-th chord of a graph to the `i`-th generator of the free
/// group on the chords; an isomorphism on the fundamental group.
pub fn free_phi(x: &MetricComplex) -> Result<PiOneData> {
    let mut p = PiOneData::new(x);
    let target = GroupSpec::free(p.generator_count());
    let images = (0..p.generator_count())
        .map(|i| GroupElement::Free(vec![i as i32 + 1]))
        .collect();
    p.attach_phi(x, target, images)?;
    Ok(p)
}

/// Circle with `phi` onto `Z` (`cyclic == 0`) or `Z/cyclic`.
pub fn circle_with_phi(length: f64, cyclic: usize) -> Result<(MetricComplex, PiOneData)> {
    let x = circle(length)?;
    let mut p = PiOneData::new(&x);
    let (target, image) = if cyclic == 0 {
        (GroupSpec::free_abelian(1), GroupElement::Abelian(vec![1]))
    } else {
        (
            GroupSpec::cyclic(cyclic)?,
            GroupElement::Finite(1 % cyclic as u16),
        )
    };
    p.attach_phi(&x, target, vec![image])?;
    Ok((x, p))
}

/// Wedge of circles with the free isomorphism attached.
pub fn wedge_with_phi(lengths: &[f64]) -> Result<(MetricComplex, PiOneData)> {
    let x = wedge_of_circles(lengths)?;
    let p = free_phi(&x)?;
    Ok((x, p))
}

/// Flat torus `R^2 / (Z u + Z v)` triangulated by an `m x n` grid of
/// parallelograms, each cut along its `u/m + v/n` diagonal.
pub fn lattice_torus(
    m: usize,
    n: usize,
    u: [f64; 2],
    v: [f64; 2],
) -> Result<(MetricComplex, PiOneData)> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidArgument(
            "lattice torus needs m, n >= 2".into(),
        ));
    }
    let p = [u[0] / m as f64, u[1] / m as f64];
    let q = [v[0] / n as f64, v[1] / n as f64];
    let norm = |a: [f64; 2]| a[0].hypot(a[1]);
    let lens = [norm(p), norm(q), norm([p[0] + q[0], p[1] + q[1]])];
    let idx = |i: usize, j: usize| (i % m) + m * (j % n);
    let mut edges = Vec::with_capacity(3 * m * n);
    let mut labels = Vec::with_capacity(3 * m * n);
    for j in 0..n {
        for i in 0..m {
            let wi = i64::from(i + 1 == m);
            let wj = i64::from(j + 1 == n);
            let here = idx(i, j);
            let steps = [
                (idx(i + 1, j), [wi, 0]),
                (idx(i, j + 1), [0, wj]),
                (idx(i + 1, j + 1), [wi, wj]),
            ];
            for (k, (to, w)) in steps.into_iter().enumerate() {
                edges.push(Edge {
                    id: 3 * here as i64 + k as i64,
                    ends: [here, to],
                    length: lens[k],
                });
                labels.push(GroupElement::Abelian(w.to_vec()));
            }
        }
    }
    let e = |i: usize, j: usize, k: usize| 3 * idx(i, j) + k;
    let mut tris = Vec::with_capacity(2 * m * n);
    for j in 0..n {
        for i in 0..m {
            tris.push([e(i, j, 0), e(i + 1, j, 1), e(i, j, 2)]);
            tris.push([e(i, j, 1), e(i, j + 1, 0), e(i, j, 2)]);
        }
    }
    let x = MetricComplex::new((0..(m * n) as i64).collect(), edges, tris, 0)?;
    let phi = PiOneData::from_edge_labels(&x, GroupSpec::free_abelian(2), &labels)?;
    Ok((x, phi))
}

/// `m x n` square grid torus with unit cells of side `side`.
pub fn grid_torus(m: usize, n: usize, side: f64) -> Result<MetricComplex> {
    Ok(grid_torus_with_phi(m, n, side)?.0)
}

/// [`grid_torus`] with the abelianization `pi_1 -> Z^2` attached.
pub fn grid_torus_with_phi(m: usize, n: usize, side: f64) -> Result<(MetricComplex, PiOneData)> {
    lattice_torus(m, n, [m as f64 * side, 0.0], [0.0, n as f64 * side])
}

/// Two equilateral triangles of side `side` sharing an edge.
pub fn rhombus(side: f64) -> Result<MetricComplex> {
    let edges = [[0, 1], [1, 2], [2, 0], [1, 3], [3, 2]]
        .into_iter()
        .enumerate()
        .map(|(i, ends)| Edge {
            id: i as i64,
            ends,
            length: side,
        })
        .collect();
    MetricComplex::new(vec![0, 1, 2, 3], edges, vec![[0, 1, 2], [1, 3, 4]], 0)
}

/// A single flat triangle with the given side lengths.
pub fn triangle(lengths: [f64; 3]) -> Result<MetricComplex> {
    let edges = [[0, 1], [1, 2], [2, 0]]
        .into_iter()
        .zip(lengths)
        .enumerate()
        .map(|(i, (ends, length))| Edge {
            id: i as i64,
            ends,
            length,
        })
        .collect();
    MetricComplex::new(vec![0, 1, 2], edges, vec![[0, 1, 2]], 0)
}

/// Antipodal quotient of the regular icosahedron with edge length `side`:
/// a six-vertex triangulation of the real projective plane, with
/// `pi_1 -> Z/2` attached.
pub fn hemi_icosahedron(side: f64) -> Result<(MetricComplex, PiOneData)> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    // one representative of each antipodal pair; icosahedron edges have length 2
    let reps: [[f64; 3]; 6] = [
        [0.0, 1.0, phi],
        [0.0, 1.0, -phi],
        [1.0, phi, 0.0],
        [1.0, -phi, 0.0],
        [phi, 0.0, 1.0],
        [phi, 0.0, -1.0],
    ];
    let dist = |a: [f64; 3], b: [f64; 3], s: f64| {
        ((a[0] - s * b[0]).powi(2) + (a[1] - s * b[1]).powi(2) + (a[2] - s * b[2]).powi(2)).sqrt()
    };
    let adjacent = |a, b, s| (dist(a, b, s) - 2.0).abs() < 1e-9;
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    let mut edge_of = [[usize::MAX; 6]; 6];
    for i in 0..6 {
        for j in i + 1..6 {
            let crossing = if adjacent(reps[i], reps[j], 1.0) {
                0
            } else if adjacent(reps[i], reps[j], -1.0) {
                1
            } else {
                continue;
            };
            edge_of[i][j] = edges.len();
            edge_of[j][i] = edges.len();
            edges.push(Edge {
                id: edges.len() as i64,
                ends: [i, j],
                length: side,
            });
            labels.push(GroupElement::Finite(crossing));
        }
    }
    let mut tris = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let face = [1.0, -1.0].iter().any(|&sj| {
                    [1.0, -1.0].iter().any(|&sk| {
                        let b = reps[j].map(|c| sj * c);
                        let c = reps[k].map(|c| sk * c);
                        adjacent(reps[i], b, 1.0)
                            && adjacent(reps[i], c, 1.0)
                            && adjacent(b, c, 1.0)
                    })
                });
                if face {
                    tris.push([edge_of[i][j], edge_of[j][k], edge_of[i][k]]);
                }
            }
        }
    }
    let x = MetricComplex::new((0..6).collect(), edges, tris, 0)?;
    let p = PiOneData::from_edge_labels(&x, GroupSpec::cyclic(2)?, &labels)?;
    Ok((x, p))
}
