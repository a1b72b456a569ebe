//! Finite-dimensional normed spaces whose unit ball is a symmetric polytope.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{QVector, Rational};
use crate::polytope::{FaceDescriptor, Polytope};

/// Largest `n` for which the `2ⁿ`-element side of an ℓ∞ⁿ or ℓ₁ⁿ ball is
/// materialized.
pub const MAX_CUBE_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Linf,
    L1,
    Custom,
}

/// A custom unit ball, given by either description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CustomBall {
    Vertices(Vec<QVector>),
    Facets(Vec<QVector>),
}

/// JSON description of a space: `{"type": "linf", "n": 5}`,
/// `{"type": "l1", "n": 3}`, or `{"type": "custom", "vertices": [...]}` /
/// `{"type": "custom", "facets": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Linf {
        n: usize,
    },
    L1 {
        n: usize,
    },
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertices: Option<Vec<QVector>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        facets: Option<Vec<QVector>>,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<PolyhedralSpace> {
        match self {
            SpaceSpec::Linf { n } => make_linf(*n),
            SpaceSpec::L1 { n } => make_l1(*n),
            SpaceSpec::Custom {
                vertices: Some(v),
                facets: None,
            } => make_custom(CustomBall::Vertices(v.clone())),
            SpaceSpec::Custom {
                vertices: None,
                facets: Some(f),
            } => make_custom(CustomBall::Facets(f.clone())),
            SpaceSpec::Custom { .. } => Err(Error::DegenerateInput(
                "a custom space needs exactly one of \"vertices\" and \"facets\"".into(),
            )),
        }
    }
}

/// A polyhedral norm on ℚⁿ.
///
/// The extreme points of the dual ball are the facet normals of the unit
/// ball: a normal `f` of the facet `{⟨f, x⟩ = 1}` already has dual norm 1.
#[derive(Debug)]
pub struct PolyhedralSpace {
    kind: SpaceKind,
    ball: Polytope,
    negation: Vec<usize>,
    faces: OnceLock<Vec<FaceDescriptor>>,
}

impl Clone for PolyhedralSpace {
    fn clone(&self) -> Self {
        let faces = OnceLock::new();
        if let Some(f) = self.faces.get() {
            let _ = faces.set(f.clone());
        }
        PolyhedralSpace {
            kind: self.kind,
            ball: self.ball.clone(),
            negation: self.negation.clone(),
            faces,
        }
    }
}

/// Indices of the extreme dual functionals norming a vector, in increasing
/// order. `J(x)` is their convex hull.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSet {
    pub indices: Vec<usize>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

fn sign_vectors(n: usize) -> Vec<QVector> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| {
                    if mask >> (n - 1 - i) & 1 == 1 {
                        -Rational::one()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect()
}

fn signed_units(n: usize) -> Vec<QVector> {
    (0..n)
        .flat_map(|i| {
            let e = QVector::unit(n, i);
            [e.neg(), e]
        })
        .collect()
}

fn check_builder_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::DegenerateInput(format!("dimension must be at least 2, got {n}")));
    }
    if n > MAX_CUBE_DIM {
        return Err(Error::TooLarge(format!(
            "dimension {n} exceeds {MAX_CUBE_DIM}; the ball has 2^{n} extreme points"
        )));
    }
    Ok(())
}

pub fn make_linf(n: usize) -> Result<PolyhedralSpace> {
    check_builder_dim(n)?;
    let ball = Polytope::from_parts_unchecked(sign_vectors(n), signed_units(n));
    Ok(PolyhedralSpace::from_ball(SpaceKind::Linf, ball))
}

pub fn make_l1(n: usize) -> Result<PolyhedralSpace> {
    check_builder_dim(n)?;
    let ball = Polytope::from_parts_unchecked(signed_units(n), sign_vectors(n));
    Ok(PolyhedralSpace::from_ball(SpaceKind::L1, ball))
}

pub fn make_custom(ball: CustomBall) -> Result<PolyhedralSpace> {
    let ball = match ball {
        CustomBall::Vertices(v) => Polytope::from_vertices(v)?,
        CustomBall::Facets(f) => Polytope::from_facets(f)?,
    };
    Ok(PolyhedralSpace::from_ball(SpaceKind::Custom, ball))
}

impl PolyhedralSpace {
    fn from_ball(kind: SpaceKind, ball: Polytope) -> Self {
        let facets = ball.facets();
        let negation = facets
            .iter()
            .map(|f| {
                facets
                    .binary_search(&f.neg())
                    .expect("facet list is symmetric")
            })
            .collect();
        PolyhedralSpace {
            kind,
            ball,
            negation,
            faces: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    pub fn ball(&self) -> &Polytope {
        &self.ball
    }

    pub fn vertices(&self) -> &[QVector] {
        self.ball.vertices()
    }

    /// Extreme points of the dual unit ball, sorted.
    pub fn dual_extreme(&self) -> &[QVector] {
        self.ball.facets()
    }

    pub fn functional(&self, i: usize) -> &QVector {
        &self.ball.facets()[i]
    }

    /// Index of `-g_i` in [`Self::dual_extreme`].
    pub fn negation_of(&self, i: usize) -> usize {
        self.negation[i]
    }

    pub fn index_of(&self, g: &QVector) -> Option<usize> {
        self.dual_extreme().binary_search(g).ok()
    }

    /// Faces of the unit ball, computed on first use.
    pub fn faces(&self) -> &[FaceDescriptor] {
        self.faces.get_or_init(|| self.ball.enumerate_faces())
    }

    pub fn check_dim(&self, x: &QVector) -> Result<()> {
        if x.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            })
        }
    }

    pub fn norm(&self, x: &QVector) -> Rational {
        match self.kind {
            SpaceKind::Linf => x.max_abs(),
            SpaceKind::L1 => x.iter().map(Rational::abs).sum(),
            SpaceKind::Custom => self.ball.gauge(x),
        }
    }

    pub fn support_set(&self, x: &QVector) -> Result<SupportSet> {
        self.check_dim(x)?;
        if x.is_zero() {
            return Err(Error::ZeroVector);
        }
        let values: Vec<Rational> = self.dual_extreme().iter().map(|g| g.dot(x)).collect();
        let top = values.iter().max().expect("nonempty");
        let indices = (0..values.len()).filter(|&i| values[i] == *top).collect();
        Ok(SupportSet { indices })
    }

    pub fn is_smooth(&self, x: &QVector) -> Result<bool> {
        Ok(self.support_set(x)?.len() == 1)
    }

    /// The space whose unit ball is the dual ball of this one.
    pub fn dual_space(&self) -> PolyhedralSpace {
        let ball = Polytope::from_parts_unchecked(
            self.ball.facets().to_vec(),
            self.ball.vertices().to_vec(),
        );
        let kind = match self.kind {
            SpaceKind::Linf => SpaceKind::L1,
            SpaceKind::L1 => SpaceKind::Linf,
            SpaceKind::Custom => SpaceKind::Custom,
        };
        PolyhedralSpace::from_ball(kind, ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    pub(crate) fn prism() -> PolyhedralSpace {
        let half = |a: i64, b: i64| QVector::new(vec![q(a, 2), q(b, 2), q(1, 1)]);
        let base = [
            QVector::from_i64(&[1, 0, 1]),
            QVector::from_i64(&[-1, 0, 1]),
            half(1, 1),
            half(-1, 1),
            half(-1, -1),
            half(1, -1),
        ];
        let all = base.iter().flat_map(|v| [v.clone(), v.neg()]).collect();
        make_custom(CustomBall::Vertices(all)).unwrap()
    }

    #[test]
    fn builders() {
        let s = make_linf(3).unwrap();
        assert_eq!((s.dual_extreme().len(), s.vertices().len()), (6, 8));
        let s = make_l1(3).unwrap();
        assert_eq!((s.dual_extreme().len(), s.vertices().len()), (8, 6));
        assert_eq!(prism().dual_extreme().len(), 8);
        assert!(matches!(make_linf(1), Err(Error::DegenerateInput(_))));
        assert!(matches!(make_l1(13), Err(Error::TooLarge(_))));
    }

    #[test]
    fn closed_forms_match_conversion() {
        for n in 2..=4 {
            for s in [make_linf(n).unwrap(), make_l1(n).unwrap()] {
                let p = Polytope::from_vertices(s.vertices().to_vec()).unwrap();
                assert_eq!(p.facets(), s.dual_extreme());
                assert_eq!(p.vertices(), s.vertices());
            }
        }
    }

    #[test]
    fn norms() {
        assert_eq!(make_linf(3).unwrap().norm(&QVector::from_i64(&[3, 0, 2])), q(3, 1));
        let x = QVector::new(vec![q(1, 1), q(-1, 1), q(1, 2)]);
        assert_eq!(make_l1(3).unwrap().norm(&x), q(5, 2));
        assert_eq!(prism().norm(&QVector::from_i64(&[1, 0, 1])), q(1, 1));
    }

    #[test]
    fn support_sets() {
        let linf = make_linf(3).unwrap();
        let j = linf.support_set(&QVector::from_i64(&[1, 0, 0])).unwrap();
        assert_eq!(j.len(), 1);
        assert_eq!(linf.functional(j.indices[0]), &QVector::from_i64(&[1, 0, 0]));

        let l1 = make_l1(3).unwrap();
        let j = l1.support_set(&QVector::from_i64(&[1, 0, 0])).unwrap();
        assert_eq!(j.len(), 4);
        assert!(j.indices.iter().all(|&i| l1.functional(i)[0] == q(1, 1)));

        let p = prism();
        let x = QVector::new(vec![q(11, 16), q(5, 16), q(11, 14)]);
        let j = p.support_set(&x).unwrap();
        assert_eq!(j.indices.len(), 1);
        assert_eq!(p.functional(j.indices[0]), &QVector::from_i64(&[1, 1, 0]));
        assert_eq!(linf.support_set(&QVector::zeros(3)), Err(Error::ZeroVector));
    }

    #[test]
    fn prism_dual_ball_is_normalized() {
        // Every facet normal attains exactly 1 on the ball; 2y is the normal
        // of the y = 1/2 facet.
        let p = prism();
        for g in p.dual_extreme() {
            let top = p.vertices().iter().map(|v| g.dot(v)).max().unwrap();
            assert_eq!(top, q(1, 1));
        }
        assert!(p.index_of(&QVector::from_i64(&[0, 2, 0])).is_some());
        assert!(p.index_of(&QVector::from_i64(&[0, 1, 0])).is_none());
    }

    #[test]
    fn smoothness() {
        let linf = make_linf(3).unwrap();
        assert!(linf.is_smooth(&QVector::new(vec![q(1, 1), q(1, 2), q(0, 1)])).unwrap());
        assert!(!linf.is_smooth(&QVector::from_i64(&[1, 1, 0])).unwrap());
        assert!(!make_l1(3).unwrap().is_smooth(&QVector::from_i64(&[1, 0, 0])).unwrap());
    }

    #[test]
    fn negation_and_dual() {
        let p = prism();
        for i in 0..p.dual_extreme().len() {
            assert_eq!(p.functional(p.negation_of(i)), &p.functional(i).neg());
        }
        let d = p.dual_space();
        let back = Polytope::from_vertices(d.dual_extreme().to_vec()).unwrap();
        assert_eq!(back.vertices(), p.vertices());
        assert_eq!(make_linf(3).unwrap().dual_space().kind(), SpaceKind::L1);
    }

    #[test]
    fn json_descriptions() {
        let spec: SpaceSpec = serde_json::from_str(r#"{"type":"linf","n":5}"#).unwrap();
        assert_eq!(spec.build().unwrap().dim(), 5);
        let spec: SpaceSpec =
            serde_json::from_str(r#"{"type":"custom","facets":[[1,0],[-1,0],[0,1],[0,-1]]}"#).unwrap();
        assert_eq!(spec.build().unwrap().vertices().len(), 4);
        let spec: SpaceSpec = serde_json::from_str(r#"{"type":"custom"}"#).unwrap();
        assert!(matches!(spec.build(), Err(Error::DegenerateInput(_))));
        assert!(serde_json::from_str::<SpaceSpec>(r#"{"type":"l2","n":2}"#).is_err());
    }

    #[test]
    fn face_counts_are_lazy() {
        let s = make_linf(3).unwrap();
        assert_eq!(s.faces().len(), 26);
    }
}
