//! Projection by Fourier–Motzkin elimination, LP-certified redundancy
//! removal, and support-function comparison of regions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{lp_max, LpOutcome};
use crate::polyhedron::{Coefficients, LinearInequality, Polyhedron, Relation, VariableId};
use crate::rational::Rational;

/// The row `0 ≤ -1`, used to represent an empty region.
pub fn contradiction() -> LinearInequality {
    LinearInequality::le(core::iter::empty(), -Rational::one())
}

fn is_infeasible(p: &Polyhedron) -> bool {
    matches!(lp_max(&Coefficients::new(), p), Ok(LpOutcome::Infeasible))
}

/// Normalizes rows, drops satisfied constant rows, and keeps one row per
/// half-space direction (the tightest). Returns `None` if a constant row fails.
fn tidy(rows: Vec<LinearInequality>) -> Option<Vec<LinearInequality>> {
    let mut out: Vec<LinearInequality> = Vec::with_capacity(rows.len());
    let mut by_lhs: BTreeMap<(Relation, Vec<(VariableId, Rational)>), usize> = BTreeMap::new();
    for row in rows {
        if row.is_constant() {
            if row.constant_holds() {
                continue;
            }
            return None;
        }
        let row = row.normalized();
        let key = (
            row.relation,
            row.coefficients
                .iter()
                .map(|(v, c)| (*v, c.clone()))
                .collect::<Vec<_>>(),
        );
        match by_lhs.get(&key) {
            Some(&at) => {
                let kept = &mut out[at];
                match row.relation {
                    Relation::Le => {
                        if row.rhs < kept.rhs {
                            kept.rhs = row.rhs;
                        }
                    }
                    Relation::Eq => {
                        if row.rhs != kept.rhs {
                            return None;
                        }
                    }
                }
            }
            None => {
                by_lhs.insert(key, out.len());
                out.push(row);
            }
        }
    }
    Some(out)
}

/// Removes every inequality implied by the others, one LP per row. Equalities
/// are kept. Rows are also normalized to coprime integer coefficients and
/// exact duplicates merged.
pub fn remove_redundant(p: &Polyhedron) -> Result<Polyhedron> {
    if is_infeasible(p) {
        return Err(Error::Infeasible);
    }
    let rows = tidy(p.constraints().to_vec()).ok_or(Error::Infeasible)?;
    let mut keep: Vec<bool> = alloc::vec![true; rows.len()];
    for i in 0..rows.len() {
        if rows[i].relation == Relation::Eq {
            continue;
        }
        let others: Vec<LinearInequality> = rows
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i && keep[*k])
            .map(|(_, r)| r.clone())
            .collect();
        let rest = p.with_constraints(others);
        match lp_max(&rows[i].coefficients, &rest)? {
            LpOutcome::Optimal(s) if s.value <= rows[i].rhs => keep[i] = false,
            LpOutcome::Infeasible => unreachable!("relaxation of a feasible system"),
            _ => {}
        }
    }
    Ok(p.with_constraints(
        rows.into_iter()
            .zip(keep)
            .filter_map(|(r, k)| k.then_some(r))
            .collect(),
    ))
}

/// Projects `p` onto the variables not in `drop`.
///
/// Equalities mentioning a dropped variable are solved and substituted first;
/// the remaining variables are eliminated one at a time, cheapest first (fewest
/// `positive × negative` row pairs), with redundant rows removed after every
/// step. An empty projection is returned as the single row `0 ≤ -1`.
pub fn fm_eliminate(p: &Polyhedron, drop: &BTreeSet<VariableId>) -> Result<Polyhedron> {
    if let Some(v) = drop.iter().find(|v| !p.is_declared(v)) {
        return Err(Error::UndeclaredVariable(v.to_string()));
    }
    let retained: Vec<VariableId> = p
        .variables()
        .iter()
        .copied()
        .filter(|v| !drop.contains(v))
        .collect();
    let empty = || Polyhedron::from_parts(retained.clone(), alloc::vec![contradiction()]);

    let mut rows: Vec<LinearInequality> = p.constraints().to_vec();
    let mut remaining: BTreeSet<VariableId> = drop.clone();

    // Equality substitution.
    while let Some((at, var)) = rows.iter().enumerate().find_map(|(i, r)| {
        (r.relation == Relation::Eq)
            .then(|| r.coefficients.keys().find(|v| remaining.contains(v)).map(|v| (i, *v)))
            .flatten()
    }) {
        let eq = rows.swap_remove(at);
        let a = eq.coefficient(&var);
        rows = rows
            .into_iter()
            .map(|r| substitute(r, &eq, var, &a))
            .collect();
        remaining.remove(&var);
    }
    let Some(mut rows) = tidy(rows) else {
        return empty();
    };

    let mut live: Vec<VariableId> = p.variables().to_vec();
    while !remaining.is_empty() {
        let var = *remaining
            .iter()
            .min_by_key(|v| {
                let pos = rows.iter().filter(|r| r.coefficient(v).is_positive()).count();
                let neg = rows.iter().filter(|r| r.coefficient(v).is_negative()).count();
                pos * neg
            })
            .expect("nonempty");
        remaining.remove(&var);
        live.retain(|v| *v != var);

        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            let c = r.coefficient(&var);
            if c.is_positive() {
                pos.push(r);
            } else if c.is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for up in &pos {
            let a_up = up.coefficient(&var);
            for down in &neg {
                let a_down = -down.coefficient(&var);
                rest.push(combine(up, &a_down, down, &a_up));
            }
        }
        let Some(tidied) = tidy(rest) else {
            return empty();
        };
        let system = Polyhedron::from_parts(live.clone(), tidied)?;
        rows = match remove_redundant(&system) {
            Ok(q) => q.constraints().to_vec(),
            Err(Error::Infeasible) => return empty(),
            Err(e) => return Err(e),
        };
    }
    let projected = Polyhedron::from_parts(retained.clone(), rows)?;
    match remove_redundant(&projected) {
        Ok(q) => Ok(q),
        Err(Error::Infeasible) => empty(),
        Err(e) => Err(e),
    }
}

// `lhs_scale * up + rhs_scale * down`, both scales positive.
fn combine(
    up: &LinearInequality,
    up_scale: &Rational,
    down: &LinearInequality,
    down_scale: &Rational,
) -> LinearInequality {
    let terms = up
        .coefficients
        .iter()
        .map(|(v, c)| (*v, c * up_scale))
        .chain(down.coefficients.iter().map(|(v, c)| (*v, c * down_scale)));
    let mut row = LinearInequality::le(terms, &up.rhs * up_scale + &down.rhs * down_scale);
    if up.origin.is_some() && up.origin == down.origin {
        row.origin = up.origin.clone();
    }
    row
}

// Replaces `var` in `row` using `eq` (whose coefficient on `var` is `a`).
fn substitute(
    row: LinearInequality,
    eq: &LinearInequality,
    var: VariableId,
    a: &Rational,
) -> LinearInequality {
    let c = row.coefficient(&var);
    if c.is_zero() {
        return row;
    }
    // row - (c / a) * eq
    let f = &c / a;
    let terms = row
        .coefficients
        .iter()
        .map(|(v, k)| (*v, k.clone()))
        .chain(eq.coefficients.iter().map(|(v, k)| (*v, -(k * &f))));
    let mut out = LinearInequality::new(terms, row.relation, &row.rhs - &eq.rhs * &f);
    out.coefficients.remove(&var);
    out.origin = row.origin;
    out
}

/// True when `lp_max` gives the same outcome on both regions for every direction.
pub fn support_equal(a: &Polyhedron, b: &Polyhedron, directions: &[Coefficients]) -> Result<bool> {
    for w in directions {
        if lp_max(w, a)?.value() != lp_max(w, b)?.value() {
            return Ok(false);
        }
        // Distinguish unbounded from infeasible.
        let ka = matches!(lp_max(w, a)?, LpOutcome::Unbounded);
        let kb = matches!(lp_max(w, b)?, LpOutcome::Unbounded);
        if ka != kb {
            return Ok(false);
        }
    }
    Ok(true)
}
