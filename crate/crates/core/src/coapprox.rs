//! Birkhoff–James orthogonality, best coapproximation and the generic
//! classification of subspaces.
//!
//! A statement "for every `y ∈ Y`" is checked face by face on the unit ball
//! of `Y`: the support set `J(y)` is constant on each relative interior, and
//! equal to `conv D(G)` there.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    nullspace, rank, solve_linear, LpOutcome, LpProblem, QMatrix, QVector, Rational, Relation,
    Sense, Solution,
};
use crate::polytope::centroid;
use crate::space::PolyhedralSpace;
use crate::subspace::{first_missing_from_jy, jy_set, smooth_dense_in, InducedBall};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A tolerance `ε ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct EpsilonValue(Rational);

impl EpsilonValue {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value >= Rational::one() {
            return Err(Error::EpsilonOutOfRange(value.to_string()));
        }
        Ok(EpsilonValue(value))
    }

    pub fn zero() -> Self {
        EpsilonValue(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl<'de> Deserialize<'de> for EpsilonValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        EpsilonValue::new(Rational::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Distance from 0 to the interval `[lo, hi]`.
fn distance_to_zero(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_positive() {
        lo.clone()
    } else if hi.is_negative() {
        -hi
    } else {
        Rational::zero()
    }
}

/// `[min, max]` of `⟨g, v⟩` over the listed functionals.
fn range(space: &PolyhedralSpace, indices: &[usize], v: &QVector) -> (Rational, Rational) {
    let mut values = indices.iter().map(|&i| space.functional(i).dot(v));
    let first = values.next().expect("nonempty functional set");
    values.fold((first.clone(), first), |(lo, hi), x| {
        (lo.min(x.clone()), hi.max(x))
    })
}

fn check_dims(space: &PolyhedralSpace, vs: &[&QVector]) -> Result<()> {
    vs.iter().try_for_each(|v| space.check_dim(v))
}

/// `x ⊥ y`: some `f ∈ J(x)` annihilates `y`.
pub fn bj_orthogonal(space: &PolyhedralSpace, x: &QVector, y: &QVector) -> Result<bool> {
    check_dims(space, &[x, y])?;
    let j = space.support_set(x)?;
    let (lo, hi) = range(space, &j.indices, y);
    Ok(!lo.is_positive() && !hi.is_negative())
}

/// `min_λ ‖x + λy‖` and a minimizer, by linear programming over all extreme
/// functionals.
pub fn min_along_line(space: &PolyhedralSpace, x: &QVector, y: &QVector) -> (Rational, Rational) {
    let mut lp = LpProblem::new(2).with_objective(QVector::unit(2, 1));
    for g in space.dual_extreme() {
        lp.add_constraint(
            QVector::new(vec![g.dot(y), -Rational::one()]),
            Relation::Le,
            -g.dot(x),
        );
    }
    match lp.solve(Sense::Minimize) {
        LpOutcome::Optimal { value, point } => (value, point[0].clone()),
        other => unreachable!("a norm is bounded below: {other:?}"),
    }
}

/// `x ⊥ y` decided from the definition: `‖x + λy‖ ≥ ‖x‖` for all `λ`.
pub fn bj_orthogonal_lambda_oracle(space: &PolyhedralSpace, x: &QVector, y: &QVector) -> Result<bool> {
    check_dims(space, &[x, y])?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(min_along_line(space, x, y).0 == space.norm(x))
}

/// Some `f ∈ J(x)` has `|f(y)| ≤ ε‖y‖`.
pub fn eps_bj_orthogonal(
    space: &PolyhedralSpace,
    x: &QVector,
    y: &QVector,
    eps: &EpsilonValue,
) -> Result<bool> {
    check_dims(space, &[x, y])?;
    let j = space.support_set(x)?;
    let (lo, hi) = range(space, &j.indices, y);
    Ok(distance_to_zero(&lo, &hi) <= eps.value() * space.norm(y))
}

fn offset_from_subspace(yb: &InducedBall, x: &QVector, y0: &QVector) -> Result<QVector> {
    if !yb.subspace().contains(y0) {
        return Err(Error::BasisMismatch(y0.to_string()));
    }
    Ok(x.sub(y0))
}

/// Whether `y₀ ∈ Y` is a best coapproximation to `x`: `Y ⊥ (x − y₀)`.
///
/// Only facets of `B_Y` are inspected: a face inside a facet has a larger
/// dual face, so its condition follows from the facet's.
pub fn is_best_coapprox(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
    y0: &QVector,
) -> Result<bool> {
    check_dims(space, &[x, y0])?;
    let d = offset_from_subspace(yb, x, y0)?;
    if d.is_zero() {
        return Ok(true);
    }
    Ok(yb.facets().all(|f| {
        let (lo, hi) = range(space, &f.dual_face, &d);
        !lo.is_positive() && !hi.is_negative()
    }))
}

/// The least `δ` such that `y₀` is a `δ`-best coapproximation to `x`.
pub fn eps_coapprox_defect(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
    y0: &QVector,
) -> Result<Rational> {
    check_dims(space, &[x, y0])?;
    let d = offset_from_subspace(yb, x, y0)?;
    if d.is_zero() {
        return Err(Error::DegenerateQuery("x equals y0".into()));
    }
    let worst = yb
        .facets()
        .map(|f| {
            let (lo, hi) = range(space, &f.dual_face, &d);
            distance_to_zero(&lo, &hi)
        })
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(worst / space.norm(&d))
}

pub fn is_eps_best_coapprox(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
    y0: &QVector,
    eps: &EpsilonValue,
) -> Result<bool> {
    if x == y0 {
        offset_from_subspace(yb, x, y0)?;
        return Ok(true);
    }
    Ok(eps_coapprox_defect(space, yb, x, y0)? <= *eps.value())
}

/// One constraint on `y₀ = Σ α_k a_k`: the values `c_g − ⟨r_g, α⟩` over the
/// listed functionals must straddle zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCondition {
    pub functionals: Vec<usize>,
    pub rows: Vec<QVector>,
    pub values: Vec<Rational>,
}

impl WitnessCondition {
    pub fn holds_at(&self, alpha: &QVector) -> bool {
        let slack: Vec<Rational> = self
            .rows
            .iter()
            .zip(&self.values)
            .map(|(r, c)| c - r.dot(alpha))
            .collect();
        slack.iter().any(|s| !s.is_positive()) && slack.iter().any(|s| !s.is_negative())
    }
}

/// The set of all best coapproximations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    /// `{particular + Σ c_i directions_i}`, in ambient coordinates.
    Affine {
        particular: QVector,
        directions: Vec<QVector>,
    },
    /// Points `Σ α_k a_k` whose coordinates satisfy every condition.
    Conditions { conditions: Vec<WitnessCondition> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoapproxResult {
    Exists { y0: QVector, region: Region },
    /// No `y₀` works; `blocking` lists functionals whose joint condition
    /// could not be met.
    NotExists { blocking: Vec<QVector> },
}

impl CoapproxResult {
    pub fn exists(&self) -> bool {
        matches!(self, CoapproxResult::Exists { .. })
    }

    pub fn y0(&self) -> Option<&QVector> {
        match self {
            CoapproxResult::Exists { y0, .. } => Some(y0),
            CoapproxResult::NotExists { .. } => None,
        }
    }
}

fn affine_region(yb: &InducedBall, particular: &QVector, null: &QMatrix) -> Region {
    Region::Affine {
        particular: yb.subspace().point(particular),
        directions: null.rows().iter().map(|v| yb.subspace().point(v)).collect(),
    }
}

/// Best-coapproximation conditions of `Y ⊥ (x − y₀)`, with duplicates,
/// negations and implied conditions removed.
fn coapprox_conditions(space: &PolyhedralSpace, yb: &InducedBall) -> Vec<Vec<usize>> {
    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in yb.facets() {
        let mut neg: Vec<usize> = f.dual_face.iter().map(|&i| space.negation_of(i)).collect();
        neg.sort();
        keys.insert(f.dual_face.clone().min(neg));
    }
    let sets: Vec<Vec<usize>> = keys.into_iter().collect();
    let covers = |a: &[usize], b: &[usize]| {
        let b: BTreeSet<usize> = b.iter().copied().collect();
        let bneg: BTreeSet<usize> = b.iter().map(|&i| space.negation_of(i)).collect();
        a.iter().all(|i| b.contains(i)) || a.iter().all(|i| bneg.contains(i))
    };
    let mut minimal: Vec<Vec<usize>> = sets
        .iter()
        .enumerate()
        .filter(|(i, s)| {
            !sets
                .iter()
                .enumerate()
                .any(|(j, t)| j != *i && t.len() < s.len() && covers(t, s))
        })
        .map(|(_, s)| s.clone())
        .collect();
    minimal.sort_by_key(|s| s.len());
    minimal
}

struct Search<'a> {
    space: &'a PolyhedralSpace,
    yb: &'a InducedBall,
    x: &'a QVector,
    conditions: &'a [Vec<usize>],
    budget: u64,
    used: u64,
    deepest: usize,
}

enum Choice {
    Le(usize),
    Ge(usize),
}

impl Search<'_> {
    fn feasible(&mut self, base: &LpProblem) -> Result<Option<QVector>> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::BudgetExceeded { cap: self.budget });
        }
        Ok(match base.solve(Sense::Maximize) {
            LpOutcome::Optimal { point, .. } => Some(point),
            LpOutcome::Unbounded => unreachable!("zero objective"),
            LpOutcome::Infeasible => None,
        })
    }

    fn condition_holds(&self, k: usize, alpha: &QVector) -> bool {
        let (lo, hi) = self.conditions[k].iter().fold((false, false), |(lo, hi), &g| {
            let v = self.space.functional(g).dot(self.x) - self.yb.restricted(g).dot(alpha);
            (lo || !v.is_positive(), hi || !v.is_negative())
        });
        lo && hi
    }

    fn add(&self, lp: &mut LpProblem, choice: Choice) {
        let (g, rel) = match choice {
            // c_g − ⟨r_g, α⟩ ≤ 0
            Choice::Le(g) => (g, Relation::Ge),
            Choice::Ge(g) => (g, Relation::Le),
        };
        lp.add_constraint(
            self.yb.restricted(g).clone(),
            rel,
            self.space.functional(g).dot(self.x),
        );
    }

    /// Depth-first over witness choices; `k` indexes the next condition
    /// and `point` is feasible for the constraints chosen so far.
    fn run(&mut self, lp: &LpProblem, point: &QVector, k: usize) -> Result<Option<QVector>> {
        self.deepest = self.deepest.max(k);
        if (k..self.conditions.len()).all(|j| self.condition_holds(j, point)) {
            return Ok(Some(point.clone()));
        }
        let set = self.conditions[k].clone();
        for &below in &set {
            let mut lp1 = lp.clone();
            self.add(&mut lp1, Choice::Le(below));
            if self.feasible(&lp1)?.is_none() {
                continue;
            }
            for &above in &set {
                let mut lp2 = lp1.clone();
                self.add(&mut lp2, Choice::Ge(above));
                if let Some(p) = self.feasible(&lp2)? {
                    if let Some(found) = self.run(&lp2, &p, k + 1)? {
                        return Ok(Some(found));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Finds a best coapproximation to `x` out of `Y`, if one exists, and an
/// exact description of all of them.
///
/// `budget` caps the number of linear programs solved.
pub fn solve_best_coapprox(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
    budget: u64,
) -> Result<CoapproxResult> {
    space.check_dim(x)?;
    if yb.subspace().contains(x) {
        return Ok(CoapproxResult::Exists {
            y0: x.clone(),
            region: Region::Affine {
                particular: x.clone(),
                directions: Vec::new(),
            },
        });
    }
    let m = yb.subspace().dim();
    let conditions = coapprox_conditions(space, yb);
    let singles: Vec<usize> = conditions
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    let eq_rows: Vec<QVector> = singles.iter().map(|&g| yb.restricted(g).clone()).collect();
    let eq_rhs: QVector = singles.iter().map(|&g| space.functional(g).dot(x)).collect();

    if singles.len() == conditions.len() {
        // Every condition is an equation.
        return Ok(match solve_linear(&QMatrix::from_rows(eq_rows, m), &eq_rhs) {
            Solution::Unique(alpha) => CoapproxResult::Exists {
                y0: yb.subspace().point(&alpha),
                region: affine_region(yb, &alpha, &QMatrix::zeros(0, m)),
            },
            Solution::Affine {
                particular,
                nullspace,
            } => CoapproxResult::Exists {
                y0: yb.subspace().point(&particular),
                region: affine_region(yb, &particular, &nullspace),
            },
            Solution::Inconsistent => CoapproxResult::NotExists {
                blocking: singles.iter().map(|&g| space.functional(g).clone()).collect(),
            },
        });
    }

    let mut lp = LpProblem::new(m);
    for (r, c) in eq_rows.iter().zip(eq_rhs.iter()) {
        lp.add_constraint(r.clone(), Relation::Eq, c.clone());
    }
    let rest: Vec<Vec<usize>> = conditions.iter().filter(|c| c.len() > 1).cloned().collect();
    let mut search = Search {
        space,
        yb,
        x,
        conditions: &rest,
        budget,
        used: 0,
        deepest: 0,
    };
    let Some(start) = search.feasible(&lp)? else {
        return Ok(CoapproxResult::NotExists {
            blocking: singles.iter().map(|&g| space.functional(g).clone()).collect(),
        });
    };
    match search.run(&lp, &start, 0)? {
        Some(alpha) => {
            let conditions = conditions
                .iter()
                .map(|c| WitnessCondition {
                    functionals: c.clone(),
                    rows: c.iter().map(|&g| yb.restricted(g).clone()).collect(),
                    values: c.iter().map(|&g| space.functional(g).dot(x)).collect(),
                })
                .collect();
            Ok(CoapproxResult::Exists {
                y0: yb.subspace().point(&alpha),
                region: Region::Conditions { conditions },
            })
        }
        None => {
            let k = search.deepest.min(rest.len() - 1);
            Ok(CoapproxResult::NotExists {
                blocking: rest[k].iter().map(|&g| space.functional(g).clone()).collect(),
            })
        }
    }
}

fn check_proper(yb: &InducedBall) -> Result<()> {
    let (m, n) = (yb.subspace().dim(), yb.subspace().ambient_dim());
    if m <= 1 || m >= n {
        return Err(Error::DimensionOutOfRange { m, n });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum AntiVerdict {
    /// `𝒥_Y` spans the dual space.
    Yes { rank: usize },
    /// `y0` is a best coapproximation to `x ∉ Y`.
    No { x: QVector, y0: QVector },
    /// The rank test is inconclusive because smooth points are not dense in
    /// `Y`, and no counterexample turned up among `tried` candidates.
    Undecided { rank: usize, tried: usize },
}

impl AntiVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, AntiVerdict::Yes { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntiOptions {
    pub seed: u64,
    pub random_samples: usize,
    pub budget: u64,
}

impl Default for AntiOptions {
    fn default() -> Self {
        AntiOptions {
            seed: 0,
            random_samples: 32,
            budget: DEFAULT_BUDGET,
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> QVector {
    (0..n)
        .map(|_| Rational::new(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4)))
        .collect()
}

pub fn is_anti_coproximinal(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    opts: &AntiOptions,
) -> Result<AntiVerdict> {
    check_proper(yb)?;
    let n = space.dim();
    let jy = jy_set(space, yb);
    let rows: Vec<QVector> = jy
        .indices()
        .iter()
        .map(|&i| space.functional(i).clone())
        .collect();
    let j = QMatrix::from_rows(rows, n);
    let r = rank(&j);
    if r == n {
        return Ok(AntiVerdict::Yes { rank: r });
    }
    let kernel = nullspace(&j);
    if smooth_dense_in(yb) {
        // A vector killed by 𝒥_Y has 0 as a best coapproximation, and no
        // nonzero vector of Y is killed by 𝒥_Y.
        let x = kernel.row(0).clone();
        debug_assert!(is_best_coapprox(space, yb, &x, &QVector::zeros(n)).unwrap_or(false));
        return Ok(AntiVerdict::No {
            x,
            y0: QVector::zeros(n),
        });
    }
    let mut candidates: Vec<QVector> = kernel.rows().to_vec();
    candidates.extend((0..n).map(|i| QVector::unit(n, i)));
    for (i, _) in space.dual_extreme().iter().enumerate() {
        if !jy.contains(i) {
            let verts = space.ball().facet_vertices(i);
            candidates.push(centroid(verts.iter().map(|&v| &space.vertices()[v]), n));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    candidates.extend((0..opts.random_samples).map(|_| random_vector(&mut rng, n)));
    let mut tried = 0;
    for x in candidates {
        if yb.subspace().contains(&x) {
            continue;
        }
        tried += 1;
        if let CoapproxResult::Exists { y0, .. } = solve_best_coapprox(space, yb, &x, opts.budget)? {
            return Ok(AntiVerdict::No { x, y0 });
        }
    }
    Ok(AntiVerdict::Undecided { rank: r, tried })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StrongVerdict {
    Yes,
    /// `Y` misses the interior of the facet of `functional`; `0` is an
    /// `epsilon0`-best coapproximation to the facet point `x`.
    No {
        facet: usize,
        functional: QVector,
        x: QVector,
        epsilon0: Rational,
    },
}

impl StrongVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, StrongVerdict::Yes)
    }
}

pub fn is_strongly_anti_coproximinal(space: &PolyhedralSpace, yb: &InducedBall) -> Result<StrongVerdict> {
    check_proper(yb)?;
    let Some(g) = first_missing_from_jy(space, yb) else {
        return Ok(StrongVerdict::Yes);
    };
    let n = space.dim();
    let verts = space.ball().facet_vertices(g);
    let x = centroid(verts.iter().map(|&v| &space.vertices()[v]), n);
    let neg = space.negation_of(g);
    let epsilon0 = (0..space.dual_extreme().len())
        .filter(|&i| i != g && i != neg)
        .map(|i| space.functional(i).dot(&x).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(StrongVerdict::No {
        facet: g,
        functional: space.functional(g).clone(),
        x,
        epsilon0,
    })
}

/// Some `y ∈ Y` has `J(y) ⊆ J(x) ∪ J(−x)`. Since `J(y)` is convex and the
/// two faces are disjoint, this means `J(y)` lies in one of them.
pub fn sufficient_condition_strong(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
) -> Result<bool> {
    space.check_dim(x)?;
    if yb.subspace().contains(x) {
        return Err(Error::PointInSubspace);
    }
    let plus = space.support_set(x)?;
    let minus = space.support_set(&x.neg())?;
    Ok(yb.faces().iter().any(|f| {
        f.dual_face.iter().all(|&i| plus.contains(i)) || f.dual_face.iter().all(|&i| minus.contains(i))
    }))
}

/// Some `y ∈ Y` has `J(y) ∩ J(x) ≠ ∅`.
pub fn necessary_condition_check(
    space: &PolyhedralSpace,
    yb: &InducedBall,
    x: &QVector,
) -> Result<bool> {
    space.check_dim(x)?;
    let j = space.support_set(x)?;
    Ok(yb
        .faces()
        .iter()
        .any(|f| f.dual_face.iter().any(|&i| j.contains(i))))
}
