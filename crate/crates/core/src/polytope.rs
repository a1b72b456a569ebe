//! Origin-symmetric, full-dimensional polytopes in vertex form and in
//! facet form (`{x : ⟨f, x⟩ ≤ 1}` for every facet normal `f`).
//!
//! Both conversions reduce to one primitive: enumerating the vertices of
//! `{x : ⟨p, x⟩ ≤ 1 ∀p ∈ P}`. Applied to a facet list it yields vertices;
//! applied to a vertex list it yields the vertices of the polar body, which
//! are exactly the facet normals. The primitive is a double-description
//! run on the homogenized cone `{(t, x) : t ≥ ⟨p, x⟩, t ≥ 0}`.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{common_denominator, rank, solve_linear, QMatrix, QVector, Rational, Solution};

/// Vertex description of a symmetric polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VRep {
    pub vertices: Vec<QVector>,
}

/// Facet description `{x : ⟨f, x⟩ ≤ 1}` of a symmetric polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HRep {
    pub facets: Vec<QVector>,
}

impl VRep {
    /// Deduplicates and validates a symmetric point list that spans ℚⁿ.
    /// Points strictly inside the hull are kept; see [`Polytope`] for the
    /// filtered form.
    pub fn new(points: Vec<QVector>) -> Result<Self> {
        Ok(VRep {
            vertices: validate_symmetric(points, "vertex")?,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }
}

impl HRep {
    pub fn new(normals: Vec<QVector>) -> Result<Self> {
        Ok(HRep {
            facets: validate_symmetric(normals, "facet")?,
        })
    }

    pub fn dim(&self) -> usize {
        self.facets[0].dim()
    }
}

fn validate_symmetric(points: Vec<QVector>, what: &str) -> Result<Vec<QVector>> {
    let Some(first) = points.first() else {
        return Err(Error::DegenerateInput(format!("empty {what} list")));
    };
    let n = first.dim();
    if n == 0 {
        return Err(Error::DegenerateInput("zero-dimensional ambient space".into()));
    }
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: bad.dim(),
        });
    }
    let set: BTreeSet<QVector> = points.into_iter().collect();
    if let Some(p) = set.iter().find(|p| p.is_zero()) {
        return Err(Error::DegenerateInput(format!("{what} list contains the origin {p}")));
    }
    if let Some(p) = set.iter().find(|p| !set.contains(&p.neg())) {
        return Err(Error::Asymmetric(format!("{what} {p} has no antipode")));
    }
    let pts: Vec<QVector> = set.into_iter().collect();
    if rank(&QMatrix::from_rows(pts.clone(), n)) < n {
        return Err(Error::DegenerateInput(format!(
            "{what} list does not span a {n}-dimensional space"
        )));
    }
    Ok(pts)
}

/// Converts a vertex list into its irredundant facet normals.
pub fn v_to_h(v: &VRep) -> Result<HRep> {
    let n = v.dim();
    if rank(&QMatrix::from_rows(v.vertices.clone(), n)) < n {
        return Err(Error::DegenerateInput("vertices do not span the space".into()));
    }
    let facets = polar_vertices(&v.vertices, n)?;
    Ok(HRep { facets })
}

/// Converts a facet list into the vertices of the bounded intersection.
pub fn h_to_v(h: &HRep) -> Result<VRep> {
    let n = h.dim();
    let vertices = polar_vertices(&h.facets, n)?;
    Ok(VRep { vertices })
}

/// A symmetric polytope held in both descriptions, with facet-vertex
/// incidences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<QVector>,
    facets: Vec<QVector>,
    facet_vertices: Vec<Vec<usize>>,
    dropped: usize,
}

impl Polytope {
    /// Builds the hull of `points`. Points that are not vertices of the hull
    /// are dropped and counted in [`Polytope::dropped_inputs`].
    pub fn from_vertices(points: Vec<QVector>) -> Result<Self> {
        let v = VRep::new(points)?;
        let h = v_to_h(&v)?;
        let n = v.dim();
        let given = v.vertices.len();
        let vertices: Vec<QVector> = v
            .vertices
            .into_iter()
            .filter(|p| {
                let tight: Vec<QVector> = h
                    .facets
                    .iter()
                    .filter(|f| f.dot(p).is_one())
                    .cloned()
                    .collect();
                !tight.is_empty() && rank(&QMatrix::from_rows(tight, n)) == n
            })
            .collect();
        let dropped = given - vertices.len();
        Ok(Self::assemble(n, vertices, h.facets, dropped))
    }

    /// Builds the polytope `{x : ⟨f, x⟩ ≤ 1}`. Redundant normals are dropped
    /// and counted in [`Polytope::dropped_inputs`].
    pub fn from_facets(normals: Vec<QVector>) -> Result<Self> {
        let h = HRep::new(normals)?;
        let given = h.facets.len();
        let v = h_to_v(&h)?;
        let n = v.dim();
        let facets = polar_vertices(&v.vertices, n)?;
        let dropped = given - facets.len();
        Ok(Self::assemble(n, v.vertices, facets, dropped))
    }

    /// Trusts that both descriptions are irredundant and describe the same
    /// body; used by the closed-form constructors.
    pub(crate) fn from_parts_unchecked(vertices: Vec<QVector>, facets: Vec<QVector>) -> Self {
        let n = vertices[0].dim();
        Self::assemble(n, vertices, facets, 0)
    }

    fn assemble(dim: usize, mut vertices: Vec<QVector>, mut facets: Vec<QVector>, dropped: usize) -> Self {
        vertices.sort();
        facets.sort();
        let facet_vertices = facets
            .iter()
            .map(|f| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| f.dot(v).is_one())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Polytope {
            dim,
            vertices,
            facets,
            facet_vertices,
            dropped,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[QVector] {
        &self.facets
    }

    /// Indices of the vertices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> &[usize] {
        &self.facet_vertices[i]
    }

    /// Number of input points or normals discarded as redundant.
    pub fn dropped_inputs(&self) -> usize {
        self.dropped
    }

    pub fn vrep(&self) -> VRep {
        VRep {
            vertices: self.vertices.clone(),
        }
    }

    pub fn hrep(&self) -> HRep {
        HRep {
            facets: self.facets.clone(),
        }
    }

    /// `max_f ⟨f, x⟩`, the gauge of the polytope.
    pub fn gauge(&self, x: &QVector) -> Rational {
        self.facets
            .iter()
            .map(|f| f.dot(x))
            .max()
            .expect("polytope has facets")
    }

    pub fn enumerate_faces(&self) -> Vec<FaceDescriptor> {
        faces_from_incidence(self.dim, &self.facets, &self.facet_vertices)
    }

    /// Mean of the face's vertices, a point of its relative interior.
    pub fn face_centroid(&self, face: &FaceDescriptor) -> QVector {
        centroid(face.vertices.iter().map(|&i| &self.vertices[i]), self.dim)
    }
}

pub(crate) fn centroid<'a>(points: impl Iterator<Item = &'a QVector>, dim: usize) -> QVector {
    let mut sum = QVector::zeros(dim);
    let mut count = 0i64;
    for p in points {
        sum = sum.add(p);
        count += 1;
    }
    assert!(count > 0, "centroid of an empty set");
    sum.scale(&Rational::new(1, count))
}

/// A nonempty proper face, identified by the facets active on it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceDescriptor {
    /// Indices of facets containing the face.
    pub active: Vec<usize>,
    pub dim: usize,
    /// Indices of the vertices lying on the face.
    pub vertices: Vec<usize>,
}

impl FaceDescriptor {
    pub fn is_facet(&self) -> bool {
        self.active.len() == 1
    }
}

/// All nonempty proper faces of the polytope described by `v` and `h`,
/// sorted by decreasing dimension.
pub fn enumerate_faces(v: &VRep, h: &HRep) -> Vec<FaceDescriptor> {
    let incidence: Vec<Vec<usize>> = h
        .facets
        .iter()
        .map(|f| {
            v.vertices
                .iter()
                .enumerate()
                .filter(|(_, p)| f.dot(p).is_one())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    faces_from_incidence(v.dim(), &h.facets, &incidence)
}

fn faces_from_incidence(
    n: usize,
    facets: &[QVector],
    incidence: &[Vec<usize>],
) -> Vec<FaceDescriptor> {
    let facet_sets: Vec<BTreeSet<usize>> = incidence
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue: Vec<BTreeSet<usize>> = Vec::new();
    for s in &facet_sets {
        if seen.insert(s.iter().copied().collect()) {
            queue.push(s.clone());
        }
    }
    let mut all = Vec::new();
    while let Some(s) = queue.pop() {
        for f in &facet_sets {
            let t: BTreeSet<usize> = s.intersection(f).copied().collect();
            if !t.is_empty() && t.len() < s.len() {
                let key: Vec<usize> = t.iter().copied().collect();
                if seen.insert(key) {
                    queue.push(t);
                }
            }
        }
        all.push(s);
    }
    let mut faces: Vec<FaceDescriptor> = all
        .into_iter()
        .map(|s| {
            let active: Vec<usize> = (0..facets.len())
                .filter(|&i| s.is_subset(&facet_sets[i]))
                .collect();
            let normals = QMatrix::from_rows(active.iter().map(|&i| facets[i].clone()).collect(), n);
            FaceDescriptor {
                dim: n - rank(&normals),
                active,
                vertices: s.into_iter().collect(),
            }
        })
        .collect();
    faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.active.cmp(&b.active)));
    faces
}

/// True iff `x` lies in the relative interior of `face`: exactly the
/// face's active facets are tight at `x`.
pub fn relative_interior_membership(
    face: &FaceDescriptor,
    x: &QVector,
    _v: &VRep,
    h: &HRep,
) -> Result<bool> {
    if x.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: x.dim(),
        });
    }
    let values: Vec<Rational> = h.facets.iter().map(|f| f.dot(x)).collect();
    if !values.iter().max().is_some_and(Rational::is_one) {
        return Err(Error::NotOnBoundary);
    }
    let tight: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_one()).collect();
    Ok(tight == face.active)
}

/// Scales `v` to the primitive integer vector on the same ray.
fn primitive(v: &QVector) -> QVector {
    let d = common_denominator(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints.into_iter().map(Rational::from).collect();
    }
    ints.into_iter().map(|x| Rational::from(x / &g)).collect()
}

struct Ray {
    v: QVector,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

/// Vertices of `{x : ⟨p, x⟩ ≤ 1 ∀p ∈ points}`, sorted. Fails with
/// `UnboundedInput` when the region is unbounded.
fn polar_vertices(points: &[QVector], n: usize) -> Result<Vec<QVector>> {
    let d = n + 1;
    // Row 0 is t ≥ 0; row k ≥ 1 is t - ⟨p_k, x⟩ ≥ 0.
    let mut rows: Vec<QVector> = Vec::with_capacity(points.len() + 1);
    rows.push(QVector::unit(d, 0));
    for p in points {
        let row: QVector = std::iter::once(Rational::one())
            .chain(p.iter().map(|x| -x))
            .collect();
        rows.push(primitive(&row));
    }
    let words = rows.len().div_ceil(64);

    // Initial simplicial cone from d independent rows.
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    for i in 0..rows.len() {
        let mut trial: Vec<QVector> = chosen.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if rank(&QMatrix::from_rows(trial, d)) == chosen.len() + 1 {
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        }
    }
    if chosen.len() < d {
        return Err(Error::UnboundedInput);
    }
    let basis = QMatrix::from_rows(chosen.iter().map(|&j| rows[j].clone()).collect(), d);
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for j in 0..d {
        let Solution::Unique(r) = solve_linear(&basis, &QVector::unit(d, j)) else {
            unreachable!("chosen rows are independent");
        };
        let mut zeros = vec![0u64; words];
        for (k, &row) in chosen.iter().enumerate() {
            if k != j {
                bit_set(&mut zeros, row);
            }
        }
        rays.push(Ray {
            v: primitive(&r),
            zeros,
        });
    }

    let done: HashSet<usize> = chosen.iter().copied().collect();
    for (k, h) in rows.iter().enumerate() {
        if done.contains(&k) {
            continue;
        }
        let vals: Vec<Rational> = rays.iter().map(|r| h.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    bit_set(&mut r.zeros, k);
                }
            }
            continue;
        }
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common: Vec<u64> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[q].zeros)
                    .map(|(a, b)| a & b)
                    .collect();
                if (popcount(&common) as usize) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(w, r)| w == p || w == q || !is_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let v = rays[p].v.scale(&-&vals[q]).add(&rays[q].v.scale(&vals[p]));
                let mut zeros = common;
                bit_set(&mut zeros, k);
                fresh.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                bit_set(&mut r.zeros, k);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let t = &r.v[0];
        if !t.is_positive() {
            return Err(Error::UnboundedInput);
        }
        out.push(r.v.iter().skip(1).map(|x| x / t).collect::<QVector>());
    }
    out.sort();
    out.dedup();
    Ok(out)
}
