//! Subspaces of a polyhedral space and the unit balls they inherit.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, solve_linear, LpOutcome, LpProblem, QMatrix, QVector, Rational, Relation, Sense, Solution};
use crate::polytope::{FaceDescriptor, Polytope};
use crate::space::PolyhedralSpace;

/// `span` of the rows of a basis matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subspace {
    basis: QMatrix,
}

impl Subspace {
    pub fn new(basis: QMatrix) -> Result<Self> {
        if basis.nrows() == 0 {
            return Err(Error::DegenerateInput("empty basis".into()));
        }
        if rank(&basis) < basis.nrows() {
            return Err(Error::DependentBasis);
        }
        Ok(Subspace { basis })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(QMatrix::from_i64(rows))
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `Σ α_k a_k`
    pub fn point(&self, alpha: &QVector) -> QVector {
        self.basis.combine_rows(alpha)
    }

    /// Coordinates of `x` in the basis, or `None` if `x ∉ Y`.
    pub fn coordinates(&self, x: &QVector) -> Option<QVector> {
        match solve_linear(&self.basis.transpose(), x) {
            Solution::Unique(alpha) => Some(alpha),
            Solution::Inconsistent => None,
            Solution::Affine { .. } => unreachable!("basis rows are independent"),
        }
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.coordinates(x).is_some()
    }
}

/// A face `G` of the unit ball of `Y` together with `D(G)`: the extreme
/// functionals of `X*` equal to 1 on all of `G`. `J(y) = conv D(G)` for every
/// `y` in the relative interior of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedFace {
    pub face: FaceDescriptor,
    /// Indices into the ambient space's `dual_extreme`.
    pub dual_face: Vec<usize>,
    /// A relative-interior point of the face, in ambient coordinates.
    pub point: QVector,
}

impl InducedFace {
    pub fn is_facet(&self) -> bool {
        self.face.is_facet()
    }
}

/// `B_Y = B_X ∩ Y` in basis coordinates, with the face map into `X`.
#[derive(Debug, Clone)]
pub struct InducedBall {
    subspace: Subspace,
    restricted: Vec<QVector>,
    ball: Polytope,
    faces: Vec<InducedFace>,
}

pub fn induced_ball(space: &PolyhedralSpace, subspace: &Subspace) -> Result<InducedBall> {
    InducedBall::new(space, subspace.clone())
}

impl InducedBall {
    pub fn new(space: &PolyhedralSpace, subspace: Subspace) -> Result<Self> {
        if subspace.ambient_dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: subspace.ambient_dim(),
            });
        }
        let restricted: Vec<QVector> = space
            .dual_extreme()
            .iter()
            .map(|g| subspace.basis().mul_vec(g))
            .collect();
        let mut normals: Vec<QVector> = restricted.iter().filter(|r| !r.is_zero()).cloned().collect();
        normals.sort();
        normals.dedup();
        let ball = Polytope::from_facets(normals)?;
        let faces = ball
            .enumerate_faces()
            .into_iter()
            .map(|face| {
                let dual_face = (0..restricted.len())
                    .filter(|&g| {
                        face.vertices
                            .iter()
                            .all(|&v| restricted[g].dot(&ball.vertices()[v]).is_one())
                    })
                    .collect();
                let point = subspace.point(&ball.face_centroid(&face));
                InducedFace {
                    face,
                    dual_face,
                    point,
                }
            })
            .collect();
        Ok(InducedBall {
            subspace,
            restricted,
            ball,
            faces,
        })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    /// The ball of `Y` in basis coordinates.
    pub fn ball(&self) -> &Polytope {
        &self.ball
    }

    /// `(⟨g, a_k⟩)_k` for the `i`-th extreme functional `g`.
    pub fn restricted(&self, i: usize) -> &QVector {
        &self.restricted[i]
    }

    pub fn faces(&self) -> &[InducedFace] {
        &self.faces
    }

    pub fn facets(&self) -> impl Iterator<Item = &InducedFace> {
        self.faces.iter().filter(|f| f.is_facet())
    }

    /// Vertices of the ball of `Y` in ambient coordinates.
    pub fn ambient_vertices(&self) -> Vec<QVector> {
        self.ball
            .vertices()
            .iter()
            .map(|a| self.subspace.point(a))
            .collect()
    }
}

/// Witness that a functional belongs to `𝒥_Y`: a smooth unit vector of `Y`
/// normed by it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JyMember {
    pub functional: usize,
    pub witness: QVector,
    /// Margin `t* > 0` by which every other functional stays below 1.
    pub margin: Rational,
}

/// `𝒥_Y`, sorted by functional index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JySet {
    pub members: Vec<JyMember>,
}

impl JySet {
    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.functional).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search_by_key(&i, |m| m.functional).is_ok()
    }
}

/// Decides whether `Y` meets the interior of the facet of `g_i` by
/// maximizing `t` subject to `⟨g_i, y⟩ = 1` and `⟨g', y⟩ ≤ 1 - t` for
/// every other functional `g'`.
pub fn facet_interior_witness(yb: &InducedBall, i: usize) -> Option<JyMember> {
    let m = yb.subspace.dim();
    let target = &yb.restricted[i];
    if target.is_zero() {
        return None;
    }
    let others: BTreeSet<&QVector> = yb
        .restricted
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, r)| r)
        .collect();
    let with_t = |r: &QVector, t: i64| -> QVector {
        r.iter().cloned().chain([Rational::from(t)]).collect()
    };
    let mut lp = LpProblem::new(m + 1).with_objective(QVector::unit(m + 1, m));
    lp.add_constraint(with_t(target, 0), Relation::Eq, Rational::one());
    for r in others {
        lp.add_constraint(with_t(r, 1), Relation::Le, Rational::one());
    }
    match lp.solve(Sense::Maximize) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let alpha: QVector = point.iter().take(m).cloned().collect();
            Some(JyMember {
                functional: i,
                witness: yb.subspace.point(&alpha),
                margin: value,
            })
        }
        LpOutcome::Unbounded => unreachable!("t is bounded by the constraint of -g"),
        _ => None,
    }
}

pub fn jy_set(space: &PolyhedralSpace, yb: &InducedBall) -> JySet {
    let members = (0..space.dual_extreme().len())
        .into_par_iter()
        .filter_map(|i| facet_interior_witness(yb, i))
        .collect();
    JySet { members }
}

/// First extreme functional (by index) not in `𝒥_Y`, if any.
pub fn first_missing_from_jy(space: &PolyhedralSpace, yb: &InducedBall) -> Option<usize> {
    (0..space.dual_extreme().len())
        .into_par_iter()
        .find_first(|&i| facet_interior_witness(yb, i).is_none())
}

/// True iff the relative interior of every facet of `B_Y` consists of smooth
/// points of `X`.
pub fn smooth_dense_in(yb: &InducedBall) -> bool {
    yb.facets().all(|f| f.dual_face.len() == 1)
}
