//! Closed-form machinery for subspaces of ℓ₁ⁿ.
//!
//! The extreme functionals of ℓ₁ⁿ are the sign vectors `s ∈ {±1}ⁿ`. Those
//! norming some vector of `Y = span(a_1, …, a_m)` correspond to the open
//! cells of the central arrangement of hyperplanes `⟨β, c_i⟩ = 0` in ℚᵐ,
//! where `c_i` is the `i`-th component of the basis.

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::coapprox::{is_strongly_anti_coproximinal, CoapproxResult, Region, StrongVerdict};
use crate::error::{Error, Result};
use crate::linalg::{
    nullspace, rank, solve_linear, strict_feasibility, QMatrix, QVector, Rational, Solution,
    StrictFeasibility,
};
use crate::space::make_l1;
use crate::subspace::{InducedBall, Subspace};

fn components(basis: &QMatrix) -> Result<Vec<QVector>> {
    if basis.nrows() == 0 || rank(basis) < basis.nrows() {
        return Err(Error::DependentBasis);
    }
    Ok((0..basis.ncols()).map(|i| basis.column(i)).collect())
}

/// Indices whose component is zero.
pub fn zero_set(basis: &QMatrix) -> Result<Vec<usize>> {
    Ok(components(basis)?
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_zero())
        .map(|(i, _)| i)
        .collect())
}

/// The sign vectors norming some vector of `Y`, stored one per `±` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormingSet {
    /// Sign vectors with first entry `+1`, in lexicographic order with `+1`
    /// before `−1`.
    pub representatives: Vec<QVector>,
    /// `β` with `sign⟨β, c_i⟩ = s_i` for each representative `s`.
    pub witnesses: Vec<QVector>,
}

impl NormingSet {
    pub fn len(&self) -> usize {
        2 * self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// All elements: `r_1, −r_1, r_2, −r_2, …`.
    pub fn elements(&self) -> Vec<QVector> {
        self.representatives
            .iter()
            .flat_map(|r| [r.clone(), r.neg()])
            .collect()
    }

    pub fn contains(&self, s: &QVector) -> bool {
        self.representatives.contains(s) || self.representatives.contains(&s.neg())
    }
}

fn signed(c: &QVector, plus: bool) -> QVector {
    if plus {
        c.clone()
    } else {
        c.neg()
    }
}

/// Walks sign prefixes, extending only those whose open cone is nonempty.
fn cells(comps: &[QVector], m: usize, prefix: &mut Vec<bool>, rows: &mut Vec<QVector>, out: &mut NormingSet, witness: QVector) {
    let k = prefix.len();
    if k == comps.len() {
        out.representatives.push(
            prefix
                .iter()
                .map(|&p| if p { Rational::one() } else { -Rational::one() })
                .collect(),
        );
        out.witnesses.push(witness);
        return;
    }
    for plus in [true, false] {
        rows.push(signed(&comps[k], plus));
        if let StrictFeasibility::Feasible(beta) = strict_feasibility(&QMatrix::from_rows(rows.clone(), m)) {
            prefix.push(plus);
            cells(comps, m, prefix, rows, out, beta);
            prefix.pop();
        }
        rows.pop();
    }
}

/// The minimal norming set of `Y`; unique when no component vanishes.
pub fn minimal_norming_set(basis: &QMatrix) -> Result<NormingSet> {
    let comps = components(basis)?;
    let zeros = zero_set(basis)?;
    if !zeros.is_empty() {
        return Err(Error::NonEmptyZeroSet(zeros));
    }
    let m = basis.nrows();
    let mut out = NormingSet {
        representatives: Vec::new(),
        witnesses: Vec::new(),
    };
    let mut rows = vec![comps[0].clone()];
    let mut prefix = vec![true];
    let StrictFeasibility::Feasible(beta) = strict_feasibility(&QMatrix::from_rows(rows.clone(), m)) else {
        unreachable!("a nonzero component has an open half-space");
    };
    cells(&comps, m, &mut prefix, &mut rows, &mut out, beta);
    Ok(out)
}

/// `2 · Σ_{k<m} C(n−1, k)`, the most cells `n` central hyperplanes can cut
/// ℚᵐ into.
pub fn norming_bound(n: usize, m: usize) -> u64 {
    2 * (0..m).map(|k| binomial((n - 1) as u64, k as u64)).sum::<u64>()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum L1Reason {
    /// Component `index` vanishes; `y0` is a best coapproximation to `x`.
    ZeroSet { index: usize, x: QVector, y0: QVector },
    /// The norming set spans only `rank` dimensions; `x` is annihilated by
    /// it, so `0` is a best coapproximation to `x`.
    Rank { rank: usize, x: QVector },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum L1Verdict {
    Yes { norming_set: NormingSet },
    No { reason: L1Reason },
}

impl L1Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, L1Verdict::Yes { .. })
    }
}

fn check_proper(basis: &QMatrix) -> Result<()> {
    let (m, n) = (basis.nrows(), basis.ncols());
    if m <= 1 || m >= n {
        return Err(Error::DimensionOutOfRange { m, n });
    }
    Ok(())
}

pub fn l1_is_anti_coproximinal(basis: &QMatrix) -> Result<L1Verdict> {
    let n = basis.ncols();
    let zeros = zero_set(basis)?;
    check_proper(basis)?;
    if let Some(&j) = zeros.first() {
        return Ok(L1Verdict::No {
            reason: L1Reason::ZeroSet {
                index: j,
                x: QVector::unit(n, j),
                y0: QVector::zeros(n),
            },
        });
    }
    let norming = minimal_norming_set(basis)?;
    let reps = QMatrix::from_rows(norming.representatives.clone(), n);
    let r = rank(&reps);
    if r == n {
        Ok(L1Verdict::Yes { norming_set: norming })
    } else {
        Ok(L1Verdict::No {
            reason: L1Reason::Rank {
                rank: r,
                x: nullspace(&reps).row(0).clone(),
            },
        })
    }
}

/// Best coapproximations to `b` out of `Y`: the `y₀ ∈ Y` with
/// `⟨y₀, s⟩ = ⟨b, s⟩` for every norming sign vector `s`.
pub fn l1_best_coapprox(basis: &QMatrix, b: &QVector) -> Result<CoapproxResult> {
    if b.dim() != basis.ncols() {
        return Err(Error::DimensionMismatch {
            expected: basis.ncols(),
            got: b.dim(),
        });
    }
    let norming = minimal_norming_set(basis)?;
    let m = basis.nrows();
    let system = QMatrix::from_rows(
        norming
            .representatives
            .iter()
            .map(|s| basis.mul_vec(s))
            .collect(),
        m,
    );
    let rhs: QVector = norming.representatives.iter().map(|s| b.dot(s)).collect();
    Ok(match solve_linear(&system, &rhs) {
        Solution::Unique(alpha) => {
            let y0 = basis.combine_rows(&alpha);
            CoapproxResult::Exists {
                region: Region::Affine {
                    particular: y0.clone(),
                    directions: Vec::new(),
                },
                y0,
            }
        }
        Solution::Affine {
            particular,
            nullspace,
        } => {
            let y0 = basis.combine_rows(&particular);
            CoapproxResult::Exists {
                region: Region::Affine {
                    particular: y0.clone(),
                    directions: nullspace.rows().iter().map(|v| basis.combine_rows(v)).collect(),
                },
                y0,
            }
        }
        Solution::Inconsistent => CoapproxResult::NotExists {
            blocking: norming.representatives,
        },
    })
}

/// Evidence that `Y` is not strongly anti-coproximinal in ℓ₁ⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoStrongReport {
    pub zero_set: Vec<usize>,
    /// `|𝒩|`, when the norming set is unique.
    pub norming_size: Option<usize>,
    pub bound: u64,
    pub sign_vectors: u64,
    pub generic: StrongVerdict,
    /// The generic verdict is negative and `|𝒩| ≤ bound < 2ⁿ`.
    pub confirmed: bool,
}

pub fn l1_never_strongly_anti(basis: &QMatrix) -> Result<NoStrongReport> {
    let zeros = zero_set(basis)?;
    check_proper(basis)?;
    let (m, n) = (basis.nrows(), basis.ncols());
    let norming_size = if zeros.is_empty() {
        Some(minimal_norming_set(basis)?.len())
    } else {
        None
    };
    let space = make_l1(n)?;
    let yb = InducedBall::new(&space, Subspace::new(basis.clone())?)?;
    let generic = is_strongly_anti_coproximinal(&space, &yb)?;
    let bound = norming_bound(n, m);
    let sign_vectors = 1u64 << n;
    let confirmed = !generic.is_yes()
        && bound < sign_vectors
        && norming_size.is_none_or(|k| k as u64 <= bound);
    Ok(NoStrongReport {
        zero_set: zeros,
        norming_size,
        bound,
        sign_vectors,
        generic,
        confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn signs(rows: &[&[i64]]) -> Vec<QVector> {
        rows.iter().map(|r| QVector::from_i64(r)).collect()
    }

    #[test]
    fn zero_sets() {
        assert!(zero_set(&fixtures::l1_3_anti_basis()).unwrap().is_empty());
        assert_eq!(zero_set(&QMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]])).unwrap(), vec![0]);
        assert!(zero_set(&QMatrix::identity(2)).unwrap().is_empty());
    }

    #[test]
    fn fixture_norming_set() {
        let ns = minimal_norming_set(&fixtures::l1_3_anti_basis()).unwrap();
        assert_eq!(
            ns.representatives,
            signs(&[&[1, 1, 1], &[1, 1, -1], &[1, -1, -1]])
        );
        let mut expected = signs(&[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
        expected.extend(expected.clone().iter().map(QVector::neg).collect::<Vec<_>>());
        let mut got = ns.elements();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(ns.len(), 6);
        assert_eq!(norming_bound(3, 2), 6);
        let a = fixtures::l1_3_anti_basis();
        for (s, beta) in ns.representatives.iter().zip(&ns.witnesses) {
            for i in 0..3 {
                let v = a.column(i).dot(beta);
                assert_eq!(v.signum(), s[i].signum());
            }
        }
    }

    #[test]
    fn coordinate_plane_has_all_sign_vectors() {
        let ns = minimal_norming_set(&QMatrix::identity(2)).unwrap();
        assert_eq!(ns.representatives, signs(&[&[1, 1], &[1, -1]]));
    }

    #[test]
    fn verdicts() {
        assert!(l1_is_anti_coproximinal(&fixtures::l1_3_anti_basis()).unwrap().is_yes());
        assert_eq!(
            l1_is_anti_coproximinal(&QMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]])).unwrap(),
            L1Verdict::No {
                reason: L1Reason::ZeroSet {
                    index: 0,
                    x: QVector::from_i64(&[1, 0, 0]),
                    y0: QVector::zeros(3)
                }
            }
        );
        match l1_is_anti_coproximinal(&QMatrix::from_i64(&[&[1, 1, 0], &[0, 0, 1]])).unwrap() {
            L1Verdict::No {
                reason: L1Reason::Rank { rank, x },
            } => {
                assert_eq!(rank, 2);
                assert_eq!(x.dot(&QVector::from_i64(&[1, 1, 1])), Rational::zero());
            }
            other => panic!("expected a rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn coapproximations() {
        let a = fixtures::l1_3_anti_basis();
        assert!(!l1_best_coapprox(&a, &QVector::from_i64(&[1, 0, 0])).unwrap().exists());
        let b = QVector::from_i64(&[-2, 3, 5]);
        assert_eq!(l1_best_coapprox(&a, &b).unwrap().y0(), Some(&b));
        assert_eq!(
            l1_best_coapprox(&QMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]), &b),
            Err(Error::NonEmptyZeroSet(vec![2]))
        );
    }

    #[test]
    fn no_strong_report() {
        let r = l1_never_strongly_anti(&fixtures::l1_3_anti_basis()).unwrap();
        assert_eq!((r.norming_size, r.bound, r.sign_vectors), (Some(6), 6, 8));
        assert!(r.confirmed);
    }
}
