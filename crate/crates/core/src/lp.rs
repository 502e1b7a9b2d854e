//! Exact two-phase primal simplex over rationals.
//!
//! Entering and leaving variables follow Bland's rule, so the method
//! terminates on degenerate problems and is deterministic. Every optimal
//! answer carries a dual certificate that [`LpSolution::verify`] checks by
//! exact substitution.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyhedron::{Coefficients, Polyhedron, Relation, VariableId};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    /// Optimal value, if any.
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal(s) => Some(&s.value),
            _ => None,
        }
    }

    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    /// Value of every declared variable at an optimal vertex.
    pub point: BTreeMap<VariableId, Rational>,
    /// One multiplier per constraint of the polyhedron, in order:
    /// nonnegative on `≤` rows, and `Σ dual_i · row_i = objective` with
    /// `Σ dual_i · rhs_i = value`.
    pub dual: Vec<Rational>,
}

impl LpSolution {
    /// Checks primal feasibility, dual feasibility and equal objective values.
    pub fn verify(&self, objective: &Coefficients, p: &Polyhedron) -> bool {
        if !p.contains(&self.point) {
            return false;
        }
        let primal: Rational = objective
            .iter()
            .map(|(v, c)| c * self.point.get(v).cloned().unwrap_or_else(Rational::zero))
            .sum();
        if primal != self.value || self.dual.len() != p.constraints().len() {
            return false;
        }
        let mut combo: BTreeMap<VariableId, Rational> = BTreeMap::new();
        let mut bound = Rational::zero();
        for (y, row) in self.dual.iter().zip(p.constraints()) {
            if row.relation == Relation::Le && y.is_negative() {
                return false;
            }
            if y.is_zero() {
                continue;
            }
            for (v, a) in &row.coefficients {
                *combo.entry(*v).or_insert_with(Rational::zero) += y * a;
            }
            bound += y * &row.rhs;
        }
        combo.retain(|_, c| !c.is_zero());
        let mut target = objective.clone();
        target.retain(|_, c| !c.is_zero());
        combo == target && bound == self.value
    }
}

/// Maximizes `objective · x` over `p`.
pub fn lp_max(objective: &Coefficients, p: &Polyhedron) -> Result<LpOutcome> {
    if let Some(v) = objective.keys().find(|v| !p.is_declared(v)) {
        return Err(Error::UndeclaredVariable(alloc::string::ToString::to_string(v)));
    }
    let outcome = Solver::new(objective, p).solve();
    debug_assert!(match &outcome {
        LpOutcome::Optimal(s) => s.verify(objective, p),
        _ => true,
    });
    Ok(outcome)
}

/// Convenience wrapper: the optimal value, or `None` when unbounded or infeasible.
pub fn support_value(objective: &Coefficients, p: &Polyhedron) -> Result<Option<Rational>> {
    Ok(lp_max(objective, p)?.optimal().map(|s| s.value))
}

struct Row {
    terms: Vec<(usize, Rational)>,
    relation: Relation,
    rhs: Rational,
}

struct Solver {
    nvars: usize,
    variables: Vec<VariableId>,
    cost: Vec<Rational>,
    rows: Vec<Row>,
}

enum RowRole {
    // Row went into the tableau as tableau row `usize`; `bool` = sign flipped.
    Tableau(usize, bool),
    // Row is `x_k ≥ 0` and became the bound of column `usize`.
    Bound(usize),
    // Row fixed a variable during presolve.
    Fixing,
    // Row had no free variables left; its multiplier is zero.
    Inert,
}

impl Solver {
    fn new(objective: &Coefficients, p: &Polyhedron) -> Self {
        let variables = p.variables().to_vec();
        let index: BTreeMap<VariableId, usize> =
            variables.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut cost = vec![Rational::zero(); variables.len()];
        for (v, c) in objective {
            cost[index[v]] = c.clone();
        }
        let rows = p
            .constraints()
            .iter()
            .map(|c| Row {
                terms: c
                    .coefficients
                    .iter()
                    .map(|(v, a)| (index[v], a.clone()))
                    .collect(),
                relation: c.relation,
                rhs: c.rhs.clone(),
            })
            .collect();
        Solver {
            nvars: variables.len(),
            variables,
            cost,
            rows,
        }
    }

    fn solve(self) -> LpOutcome {
        let nrows = self.rows.len();
        let mut role: Vec<Option<RowRole>> = (0..nrows).map(|_| None).collect();
        let mut fixed: Vec<Option<Rational>> = vec![None; self.nvars];
        let mut fix_order: Vec<(usize, usize)> = Vec::new();

        // Presolve: equalities with a single unfixed variable pin that variable.
        loop {
            let mut progressed = false;
            for (i, row) in self.rows.iter().enumerate() {
                if role[i].is_some() || row.relation != Relation::Eq {
                    continue;
                }
                let mut free = row.terms.iter().filter(|(k, _)| fixed[*k].is_none());
                let (Some((k, a)), None) = (free.next(), free.next()) else {
                    continue;
                };
                let rest: Rational = row
                    .terms
                    .iter()
                    .filter_map(|(j, c)| fixed[*j].as_ref().map(|x| c * x))
                    .sum();
                fixed[*k] = Some((&row.rhs - rest) / a);
                role[i] = Some(RowRole::Fixing);
                fix_order.push((i, *k));
                progressed = true;
            }
            if !progressed {
                break;
            }
        }

        // Reduced rows with fixed variables substituted.
        let mut reduced: Vec<Option<(Vec<(usize, Rational)>, Rational)>> = Vec::with_capacity(nrows);
        for (i, row) in self.rows.iter().enumerate() {
            if role[i].is_some() {
                reduced.push(None);
                continue;
            }
            let mut rhs = row.rhs.clone();
            let mut terms = Vec::new();
            for (k, a) in &row.terms {
                match &fixed[*k] {
                    Some(x) => rhs -= a * x,
                    None => terms.push((*k, a.clone())),
                }
            }
            if terms.is_empty() {
                let holds = match row.relation {
                    Relation::Le => !rhs.is_negative(),
                    Relation::Eq => rhs.is_zero(),
                };
                if !holds {
                    return LpOutcome::Infeasible;
                }
                role[i] = Some(RowRole::Inert);
                reduced.push(None);
                continue;
            }
            reduced.push(Some((terms, rhs)));
        }

        // Sign bounds: a row `-c·x_k ≤ 0` (c > 0) makes x_k a nonnegative column.
        let mut bounded = vec![false; self.nvars];
        for (i, row) in self.rows.iter().enumerate() {
            let Some((terms, rhs)) = &reduced[i] else {
                continue;
            };
            if row.relation == Relation::Le
                && rhs.is_zero()
                && terms.len() == 1
                && terms[0].1.is_negative()
            {
                let k = terms[0].0;
                if bounded[k] {
                    role[i] = Some(RowRole::Inert);
                } else {
                    bounded[k] = true;
                    role[i] = Some(RowRole::Bound(k));
                }
            }
        }

        // Structural columns: one per bounded variable, a +/- pair per free one.
        let mut col_of: Vec<Option<(usize, Option<usize>)>> = vec![None; self.nvars];
        let mut ncols = 0;
        for k in 0..self.nvars {
            if fixed[k].is_some() {
                continue;
            }
            if bounded[k] {
                col_of[k] = Some((ncols, None));
                ncols += 1;
            } else {
                col_of[k] = Some((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }

        // Tableau rows, each with a slack or surplus+artificial auxiliary.
        struct Pending {
            src: usize,
            flip: bool,
            terms: Vec<(usize, Rational)>,
            rhs: Rational,
            kind: Aux,
        }
        #[derive(Clone, Copy, PartialEq)]
        enum Aux {
            Slack,
            SurplusArtificial,
            Artificial,
        }
        let mut pending = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if role[i].is_some() {
                continue;
            }
            let (terms, rhs) = reduced[i].take().expect("reduced row");
            let flip = rhs.is_negative();
            let kind = match (row.relation, flip) {
                (Relation::Le, false) => Aux::Slack,
                (Relation::Le, true) => Aux::SurplusArtificial,
                (Relation::Eq, _) => Aux::Artificial,
            };
            pending.push(Pending {
                src: i,
                flip,
                terms,
                rhs,
                kind,
            });
        }
        let m = pending.len();
        let mut identity_col = vec![0usize; m];
        let mut surplus_col = vec![None; m];
        for (r, pr) in pending.iter().enumerate() {
            if pr.kind == Aux::SurplusArtificial {
                surplus_col[r] = Some(ncols);
                ncols += 1;
            }
        }
        let mut artificial = vec![false; ncols];
        for (r, pr) in pending.iter().enumerate() {
            identity_col[r] = ncols;
            ncols += 1;
            artificial.push(pr.kind != Aux::Slack);
        }
        let width = ncols + 1;
        let mut t = Tableau {
            rows: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            ncols,
            artificial,
        };
        for (r, pr) in pending.iter().enumerate() {
            let sign = if pr.flip { -Rational::one() } else { Rational::one() };
            let mut line = vec![Rational::zero(); width];
            for (k, a) in &pr.terms {
                let a = a * &sign;
                let (pos, neg) = col_of[*k].expect("unfixed variable has a column");
                if let Some(neg) = neg {
                    line[neg] = -a.clone();
                }
                line[pos] = a;
            }
            if let Some(s) = surplus_col[r] {
                line[s] = -Rational::one();
            }
            line[identity_col[r]] = Rational::one();
            line[ncols] = &pr.rhs * &sign;
            t.rows.push(line);
            t.basis.push(identity_col[r]);
            role[pr.src] = Some(RowRole::Tableau(r, pr.flip));
        }

        // Phase I: maximize minus the sum of artificials.
        if t.artificial.iter().any(|a| *a) {
            let mut obj = vec![Rational::zero(); width];
            for j in 0..ncols {
                if t.artificial[j] {
                    obj[j] = Rational::one();
                }
            }
            for r in 0..m {
                if t.artificial[t.basis[r]] {
                    for j in 0..width {
                        if !t.rows[r][j].is_zero() {
                            obj[j] -= &t.rows[r][j];
                        }
                    }
                }
            }
            if t.optimize(&mut obj).is_err() {
                unreachable!("phase one objective is bounded by zero");
            }
            if obj[ncols].is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis where possible.
            for r in 0..m {
                if !t.artificial[t.basis[r]] {
                    continue;
                }
                if let Some(j) = (0..ncols).find(|&j| !t.artificial[j] && !t.rows[r][j].is_zero()) {
                    t.pivot(r, j, &mut obj);
                }
            }
        }

        // Phase II.
        let mut col_cost = vec![Rational::zero(); ncols];
        for k in 0..self.nvars {
            if let Some((pos, neg)) = col_of[k] {
                col_cost[pos] = self.cost[k].clone();
                if let Some(neg) = neg {
                    col_cost[neg] = -self.cost[k].clone();
                }
            }
        }
        let mut obj = vec![Rational::zero(); width];
        for j in 0..ncols {
            obj[j] = -col_cost[j].clone();
        }
        for r in 0..m {
            let cb = &col_cost[t.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..width {
                if !t.rows[r][j].is_zero() {
                    obj[j] += cb * &t.rows[r][j];
                }
            }
        }
        if t.optimize(&mut obj).is_err() {
            return LpOutcome::Unbounded;
        }

        // Primal point.
        let mut colval = vec![Rational::zero(); ncols];
        for r in 0..m {
            colval[t.basis[r]] = t.rows[r][ncols].clone();
        }
        let mut value = vec![Rational::zero(); self.nvars];
        for k in 0..self.nvars {
            value[k] = match (&fixed[k], col_of[k]) {
                (Some(x), _) => x.clone(),
                (None, Some((pos, None))) => colval[pos].clone(),
                (None, Some((pos, Some(neg)))) => &colval[pos] - &colval[neg],
                (None, None) => unreachable!(),
            };
        }
        let objective_value: Rational = (0..self.nvars).map(|k| &self.cost[k] * &value[k]).sum();

        // Duals: tableau rows read off the objective row under their identity
        // columns; bounds get the reduced cost; fixings are back-solved.
        let mut dual = vec![Rational::zero(); nrows];
        for i in 0..nrows {
            if let Some(RowRole::Tableau(r, flip)) = role[i] {
                let y = obj[identity_col[r]].clone();
                dual[i] = if flip { -y } else { y };
            }
        }
        for i in 0..nrows {
            if let Some(RowRole::Bound(k)) = role[i] {
                let (pos, _) = col_of[k].expect("bounded column");
                // Row is -c x_k <= 0 with c > 0.
                let c = -self.rows[i].terms[0].1.clone();
                dual[i] = &obj[pos] / c;
            }
        }
        for &(i, k) in fix_order.iter().rev() {
            let mut acc = self.cost[k].clone();
            let mut own = Rational::zero();
            for (j, row) in self.rows.iter().enumerate() {
                if let Some((_, a)) = row.terms.iter().find(|(kk, _)| *kk == k) {
                    if j == i {
                        own = a.clone();
                    } else {
                        acc -= &dual[j] * a;
                    }
                }
            }
            dual[i] = acc / own;
        }

        LpOutcome::Optimal(LpSolution {
            value: objective_value,
            point: self.variables.iter().copied().zip(value).collect(),
            dual,
        })
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    artificial: Vec<bool>,
}

struct Unbounded;

impl Tableau {
    /// Runs simplex iterations on objective row `obj` (entries are `z_j - c_j`
    /// for maximization) until optimal.
    fn optimize(&mut self, obj: &mut [Rational]) -> core::result::Result<(), Unbounded> {
        let rhs = self.ncols;
        loop {
            let Some(enter) =
                (0..self.ncols).find(|&j| !self.artificial[j] && obj[j].is_negative())
            else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((best, br)) => {
                        ratio < *br || (ratio == *br && self.basis[r] < self.basis[*best])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(Unbounded);
            };
            self.pivot(r, enter, obj);
        }
    }

    fn pivot(&mut self, r: usize, e: usize, obj: &mut [Rational]) {
        let piv = self.rows[r][e].clone();
        let nz: Vec<usize> = (0..=self.ncols)
            .filter(|&j| !self.rows[r][j].is_zero())
            .collect();
        for &j in &nz {
            self.rows[r][j] /= &piv;
        }
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        let eliminate = |line: &mut [Rational]| {
            let f = line[e].clone();
            if f.is_zero() {
                return;
            }
            for (j, v) in &prow {
                line[*j] -= &f * v;
            }
        };
        for (i, line) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(line);
            }
        }
        eliminate(obj);
        self.basis[r] = e;
    }
}
