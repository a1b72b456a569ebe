//! Closed-form classification of subspaces of ℓ∞ⁿ.
//!
//! The `i`-th component of a basis `a_1, …, a_m` is the column
//! `(a_1[i], …, a_m[i])`. Indices are 0-based throughout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, strict_feasibility, QMatrix, QVector, StrictFeasibility};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTable {
    pub components: Vec<QVector>,
    /// Indices whose component equals component `i`.
    pub p_plus: Vec<Vec<usize>>,
    /// Indices whose component equals minus component `i`.
    pub p_minus: Vec<Vec<usize>>,
}

impl ComponentTable {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `P⁺(i) ∪ P⁻(i)`, sorted.
    pub fn associated(&self, i: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.p_plus[i].iter().chain(&self.p_minus[i]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

pub fn component_table(basis: &QMatrix) -> Result<ComponentTable> {
    if basis.nrows() == 0 || rank(basis) < basis.nrows() {
        return Err(Error::DependentBasis);
    }
    let components: Vec<QVector> = (0..basis.ncols()).map(|i| basis.column(i)).collect();
    let collect = |target: &QVector| -> Vec<usize> {
        (0..components.len())
            .filter(|&j| components[j] == *target)
            .collect()
    };
    let p_plus = components.iter().map(collect).collect();
    let p_minus = components.iter().map(|c| collect(&c.neg())).collect();
    Ok(ComponentTable {
        components,
        p_plus,
        p_minus,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", content = "witness", rename_all = "snake_case")]
pub enum StarResult {
    /// `|⟨β, c_i⟩| > |⟨β, c_j⟩|` for every unassociated `j`.
    Holds(QVector),
    Fails,
}

impl StarResult {
    pub fn holds(&self) -> bool {
        matches!(self, StarResult::Holds(_))
    }
}

impl ComponentTable {
    /// Whether some `β` makes `|⟨β, c_i⟩|` strictly dominate every
    /// unassociated component. With `⟨β, c_i⟩ > 0` this is the strict
    /// system `⟨β, c_i ± c_j⟩ > 0`.
    pub fn star_property(&self, i: usize) -> StarResult {
        let c = &self.components[i];
        let assoc = self.associated(i);
        let outside: Vec<usize> = (0..self.len()).filter(|j| !assoc.contains(j)).collect();
        if outside.is_empty() {
            return if c.is_zero() {
                StarResult::Fails
            } else {
                StarResult::Holds(c.clone())
            };
        }
        let mut rows = vec![c.clone()];
        for &j in &outside {
            rows.push(c.add(&self.components[j]));
            rows.push(c.sub(&self.components[j]));
        }
        match strict_feasibility(&QMatrix::from_rows(rows, c.dim())) {
            StrictFeasibility::Feasible(beta) => StarResult::Holds(beta),
            StrictFeasibility::Infeasible => StarResult::Fails,
        }
    }
}

pub fn star_property(basis: &QMatrix, i: usize) -> Result<StarResult> {
    let table = component_table(basis)?;
    if i >= table.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: table.len(),
        });
    }
    Ok(table.star_property(i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum LinfReason {
    /// Component `component` is equal or opposite to the others listed.
    PClause {
        component: usize,
        associated: Vec<usize>,
    },
    StarProperty { component: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LinfVerdict {
    /// One `β` witness per component.
    StronglyAnti { witnesses: Vec<QVector> },
    NotStronglyAnti { reason: LinfReason },
}

impl LinfVerdict {
    pub fn is_strongly_anti(&self) -> bool {
        matches!(self, LinfVerdict::StronglyAnti { .. })
    }
}

/// Decides strong anti-coproximinality of `span(basis)` in ℓ∞ⁿ. In ℓ∞ⁿ this
/// coincides with anti-coproximinality.
pub fn linf_classify(basis: &QMatrix) -> Result<LinfVerdict> {
    let table = component_table(basis)?;
    let (m, n) = (basis.nrows(), basis.ncols());
    if m <= 1 || m >= n {
        return Err(Error::DimensionOutOfRange { m, n });
    }
    let stars: Vec<StarResult> = (0..n).into_par_iter().map(|i| table.star_property(i)).collect();
    let mut witnesses = Vec::with_capacity(n);
    for (i, star) in stars.into_iter().enumerate() {
        let assoc = table.associated(i);
        if assoc.len() != 1 {
            return Ok(LinfVerdict::NotStronglyAnti {
                reason: LinfReason::PClause {
                    component: i,
                    associated: assoc,
                },
            });
        }
        match star {
            StarResult::Holds(beta) => witnesses.push(beta),
            StarResult::Fails => {
                return Ok(LinfVerdict::NotStronglyAnti {
                    reason: LinfReason::StarProperty { component: i },
                })
            }
        }
    }
    Ok(LinfVerdict::StronglyAnti { witnesses })
}
