//! Small named instances used by tests, benchmarks and the command line.

use crate::linalg::{q, QMatrix, QVector};
use crate::space::{make_custom, CustomBall, PolyhedralSpace};

fn symmetric(points: Vec<QVector>) -> Vec<QVector> {
    points.iter().flat_map(|p| [p.clone(), p.neg()]).collect()
}

fn rows(r: &[[(i64, i64); 3]]) -> QMatrix {
    QMatrix::new(
        r.iter()
            .map(|row| row.iter().map(|&(a, b)| q(a, b)).collect())
            .collect(),
    )
}

/// The twelve vertices of a right prism over a hexagon with corners
/// `(±1, 0)` and `(±½, ±½)`, of height 2.
pub fn prism_vertices() -> Vec<QVector> {
    let v = |a: (i64, i64), b: (i64, i64)| QVector::new(vec![q(a.0, a.1), q(b.0, b.1), q(1, 1)]);
    symmetric(vec![
        v((1, 1), (0, 1)),
        v((-1, 1), (0, 1)),
        v((1, 2), (1, 2)),
        v((-1, 2), (1, 2)),
        v((-1, 2), (-1, 2)),
        v((1, 2), (-1, 2)),
    ])
}

pub fn prism_space() -> PolyhedralSpace {
    make_custom(CustomBall::Vertices(prism_vertices())).expect("prism is a valid ball")
}

/// The base plane `z = 0` of the prism.
pub fn prism_base_plane() -> QMatrix {
    QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]])
}

/// A plane meeting four side facets and both caps of the prism.
pub fn prism_anti_plane() -> QMatrix {
    rows(&[[(3, 4), (-1, 4), (1, 1)], [(-3, 4), (-1, 4), (1, 1)]])
}

/// A plane meeting the interior of every facet of the prism.
pub fn prism_strong_plane() -> QMatrix {
    rows(&[[(7, 8), (1, 8), (1, 1)], [(7, 8), (-1, 8), (1, 1)]])
}

/// A strongly anti-coproximinal plane of ℓ∞³.
pub fn linf3_strong_basis() -> QMatrix {
    QMatrix::from_i64(&[&[3, 0, 2], &[0, 3, 2]])
}

/// A plane of ℓ∞³ whose first two components coincide.
pub fn linf3_repeated_basis() -> QMatrix {
    QMatrix::from_i64(&[&[1, 1, 2], &[2, 2, 1]])
}

/// A strongly anti-coproximinal three-dimensional subspace of ℓ∞⁵.
pub fn linf5_strong_basis() -> QMatrix {
    QMatrix::from_i64(&[&[-4, 2, 3, 1, 3], &[1, -5, 4, 2, -3], &[1, 3, -7, 4, 6]])
}

/// [`linf5_strong_basis`] padded with a zero sixth coordinate.
pub fn linf6_padded_basis() -> QMatrix {
    QMatrix::new(
        linf5_strong_basis()
            .rows()
            .iter()
            .map(|r| r.iter().cloned().chain([q(0, 1)]).collect())
            .collect(),
    )
}

/// An anti-coproximinal plane of ℓ₁³ with six norming sign vectors.
pub fn l1_3_anti_basis() -> QMatrix {
    QMatrix::from_i64(&[&[0, 1, 1], &[-1, 0, 1]])
}
