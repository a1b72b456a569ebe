//! Exact linear programming by the two-phase simplex method.
//!
//! The tableau is dense and every entry is an exact rational. Pivot
//! selection follows Bland's rule (lowest eligible index for both the
//! entering and the leaving variable), so the method terminates on
//! degenerate problems without any perturbation.

use serde::{Deserialize, Serialize};

use super::matrix::{QMatrix, QVector};
use super::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: QVector,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: QVector, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn is_satisfied_by(&self, x: &QVector) -> bool {
        self.relation.holds(&self.coeffs.dot(x), &self.rhs)
    }
}

/// Closed interval for one variable; `None` means unbounded on that side.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn free() -> Self {
        Bound::default()
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Bound {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| l <= x) && self.upper.as_ref().is_none_or(|u| x <= u)
    }
}

/// A linear program over variables that are free unless bounded explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: QVector,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: QVector },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LpProblem {
    /// A feasibility problem (zero objective) over `nvars` free variables.
    pub fn new(nvars: usize) -> Self {
        LpProblem {
            objective: QVector::zeros(nvars),
            constraints: Vec::new(),
            bounds: vec![Bound::free(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.objective.dim()
    }

    pub fn with_objective(mut self, objective: QVector) -> Self {
        assert_eq!(objective.dim(), self.nvars());
        self.objective = objective;
        self
    }

    pub fn add_constraint(&mut self, coeffs: QVector, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.dim(), self.nvars(), "constraint has wrong length");
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn set_bound(&mut self, var: usize, bound: Bound) {
        self.bounds[var] = bound;
    }

    /// Checks every constraint and bound exactly.
    pub fn is_feasible_point(&self, x: &QVector) -> bool {
        x.dim() == self.nvars()
            && self.constraints.iter().all(|c| c.is_satisfied_by(x))
            && self.bounds.iter().zip(x.iter()).all(|(b, v)| b.contains(v))
    }

    pub fn solve(&self, sense: Sense) -> LpOutcome {
        lp_solve(self, sense)
    }
}

/// How an original variable is expressed through nonnegative columns.
enum VarMap {
    /// x = offset + z
    Shift { col: usize, offset: Rational },
    /// x = offset - z
    Flip { col: usize, offset: Rational },
    /// x = z⁺ - z⁻
    Split { pos: usize, neg: usize },
}

struct StdRow {
    coeffs: Vec<Rational>,
    relation: Relation,
    rhs: Rational,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [Rational]) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (0..=self.ncols)
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [Rational]| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &support {
                row[j] -= &f * &pivot_row[j];
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(cost);
        self.basis[r] = c;
    }

    /// Runs simplex iterations with Bland's rule. `cost` holds reduced
    /// costs followed by the negated objective value.
    fn optimize(&mut self, cost: &mut [Rational], allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let Some(enter) = (0..self.ncols).find(|&j| allowed(j) && cost[j].is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter, cost);
        }
    }
}

/// Solves `p` exactly. Unbounded and infeasible problems are reported as
/// such; optimal points satisfy every constraint with exact equality where
/// tight.
pub fn lp_solve(p: &LpProblem, sense: Sense) -> LpOutcome {
    let nvars = p.nvars();
    assert_eq!(p.bounds.len(), nvars);

    // Map original variables onto nonnegative structural columns.
    let mut maps = Vec::with_capacity(nvars);
    let mut nstruct = 0usize;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &p.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    extra_rows.push((nstruct, u - l));
                }
                maps.push(VarMap::Shift {
                    col: nstruct,
                    offset: l.clone(),
                });
                nstruct += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Flip {
                    col: nstruct,
                    offset: u.clone(),
                });
                nstruct += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split {
                    pos: nstruct,
                    neg: nstruct + 1,
                });
                nstruct += 2;
            }
        }
    }

    let translate = |coeffs: &QVector| -> (Vec<Rational>, Rational) {
        let mut row = vec![Rational::zero(); nstruct];
        let mut shift = Rational::zero();
        for (a, m) in coeffs.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match m {
                VarMap::Shift { col, offset } => {
                    row[*col] += a;
                    shift += a * offset;
                }
                VarMap::Flip { col, offset } => {
                    row[*col] -= a;
                    shift += a * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        (row, shift)
    };

    let mut std_rows: Vec<StdRow> = p
        .constraints
        .iter()
        .map(|c| {
            let (coeffs, shift) = translate(&c.coeffs);
            StdRow {
                coeffs,
                relation: c.relation,
                rhs: &c.rhs - shift,
            }
        })
        .collect();
    for (col, width) in extra_rows {
        let mut coeffs = vec![Rational::zero(); nstruct];
        coeffs[col] = Rational::one();
        std_rows.push(StdRow {
            coeffs,
            relation: Relation::Le,
            rhs: width,
        });
    }

    let (mut cost_std, _) = translate(&p.objective);
    if sense == Sense::Maximize {
        for c in cost_std.iter_mut() {
            *c = -&*c;
        }
    }

    // Column layout: structural | slacks | artificials | rhs.
    let nslack = std_rows
        .iter()
        .filter(|r| r.relation != Relation::Eq)
        .count();
    let m = std_rows.len();
    let mut slack_of_row = vec![None; m];
    let mut next_slack = nstruct;
    for (i, r) in std_rows.iter().enumerate() {
        if r.relation != Relation::Eq {
            slack_of_row[i] = Some(next_slack);
            next_slack += 1;
        }
    }
    let first_art = nstruct + nslack;

    // Rows that need an artificial variable: those without a +1 slack once
    // the right-hand side has been made nonnegative.
    let mut needs_art = vec![false; m];
    let mut flip = vec![false; m];
    for (i, r) in std_rows.iter().enumerate() {
        flip[i] = r.rhs.is_negative();
        let slack_sign_positive = match r.relation {
            Relation::Le => !flip[i],
            Relation::Ge => flip[i],
            Relation::Eq => false,
        };
        needs_art[i] = !slack_sign_positive;
    }
    let nart = needs_art.iter().filter(|&&b| b).count();
    let ncols = first_art + nart;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = first_art;
    for (i, r) in std_rows.into_iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in r.coeffs.into_iter().enumerate() {
            row[j] = a;
        }
        if let Some(s) = slack_of_row[i] {
            row[s] = if r.relation == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
        }
        row[ncols] = r.rhs;
        if flip[i] {
            for x in row.iter_mut() {
                if !x.is_zero() {
                    *x = -&*x;
                }
            }
        }
        if needs_art[i] {
            row[next_art] = Rational::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack_of_row[i].expect("row without artificial has a slack"));
        }
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        basis,
        ncols,
    };

    // Phase one: minimize the sum of artificials.
    if nart > 0 {
        let mut cost = vec![Rational::zero(); ncols + 1];
        for c in cost.iter_mut().take(ncols).skip(first_art) {
            *c = Rational::one();
        }
        for i in 0..m {
            if tab.basis[i] >= first_art {
                for (c, a) in cost.iter_mut().zip(&tab.rows[i]) {
                    if !a.is_zero() {
                        *c -= a;
                    }
                }
            }
        }
        let bounded = tab.optimize(&mut cost, |_| true);
        debug_assert!(bounded, "phase one is always bounded");
        if (-&cost[ncols]).is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining artificials (all at level zero) out of the basis.
        let mut redundant = Vec::new();
        for i in 0..tab.rows.len() {
            if tab.basis[i] < first_art {
                continue;
            }
            match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j, &mut cost),
                None => redundant.push(i),
            }
        }
        for &i in redundant.iter().rev() {
            tab.rows.remove(i);
            tab.basis.remove(i);
        }
    }

    // Phase two on the original objective.
    let mut cost = vec![Rational::zero(); ncols + 1];
    for (j, c) in cost_std.iter().enumerate() {
        cost[j] = c.clone();
    }
    for i in 0..tab.rows.len() {
        let cb = cost[tab.basis[i]].clone();
        if cb.is_zero() {
            continue;
        }
        for (c, a) in cost.iter_mut().zip(&tab.rows[i]) {
            if !a.is_zero() {
                *c -= &cb * a;
            }
        }
    }
    if !tab.optimize(&mut cost, |j| j < first_art) {
        return LpOutcome::Unbounded;
    }

    let mut z = vec![Rational::zero(); ncols];
    for (i, &b) in tab.basis.iter().enumerate() {
        z[b] = tab.rhs(i).clone();
    }
    let point: QVector = maps
        .iter()
        .map(|m| match m {
            VarMap::Shift { col, offset } => offset + &z[*col],
            VarMap::Flip { col, offset } => offset - &z[*col],
            VarMap::Split { pos, neg } => &z[*pos] - &z[*neg],
        })
        .collect();
    let value = p.objective.dot(&point);
    LpOutcome::Optimal { value, point }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictFeasibility {
    Feasible(QVector),
    Infeasible,
}

impl StrictFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, StrictFeasibility::Feasible(_))
    }
}

/// Decides whether some `β` has `⟨c, β⟩ > 0` for every row `c` of `rows`.
///
/// Solved as `max t` subject to `C β ≥ t·1` and `-1 ≤ β ≤ 1`; the system
/// is homogeneous so the box loses nothing, and it is strictly feasible
/// exactly when the optimum is positive.
pub fn strict_feasibility(rows: &QMatrix) -> StrictFeasibility {
    assert!(rows.nrows() > 0, "strict feasibility needs at least one row");
    let m = rows.ncols();
    let mut objective = QVector::zeros(m + 1);
    objective[m] = Rational::one();
    let mut lp = LpProblem::new(m + 1).with_objective(objective);
    for c in rows.rows() {
        let mut coeffs: Vec<Rational> = c.entries().to_vec();
        coeffs.push(-Rational::one());
        lp.add_constraint(QVector::new(coeffs), Relation::Ge, Rational::zero());
    }
    for j in 0..m {
        lp.set_bound(j, Bound::between(-Rational::one(), Rational::one()));
    }
    match lp_solve(&lp, Sense::Maximize) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let beta: QVector = point.iter().take(m).cloned().collect();
            debug_assert!(rows.mul_vec(&beta).iter().all(Rational::is_positive));
            StrictFeasibility::Feasible(beta)
        }
        LpOutcome::Optimal { .. } => StrictFeasibility::Infeasible,
        other => unreachable!("strict feasibility LP is feasible and bounded, got {other:?}"),
    }
}
