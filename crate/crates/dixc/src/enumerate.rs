//! The `enumerate` command.

use dixc_core::lp::support_value;
use dixc_core::outer::rate_direction;
use dixc_core::{
    enumerate_problems, outer_region, scheme_joint, Decoding, OuterBoundKind, Polyhedron,
    ProblemInstance, Rational, ServerGrouping, SubsetId,
};
use dixc_core::inner::search_space;
use rayon::prelude::*;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regions {
    /// Outer bound with the custom cut, redundant rows removed.
    pub outer: Polyhedron,
    /// Per 0/1 direction `Σ_{j∈S} R_j`: (S, joint-coding value, outer value).
    pub values: Vec<(SubsetId, Rational, Rational)>,
}

impl Regions {
    pub fn coincide(&self) -> bool {
        self.values.iter().all(|(_, inner, outer)| inner == outer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listing {
    pub problem: ProblemInstance,
    pub regions: Option<Regions>,
}

fn directions(n: usize) -> Vec<(SubsetId, Vec<Rational>)> {
    SubsetId::all_nonempty(n)
        .map(|s| {
            let w = (0..n)
                .map(|j| dixc_core::rational::int(i64::from(s.contains(j))))
                .collect();
            (s, w)
        })
        .collect()
}

/// Lists problems and optionally compares joint composite coding (with
/// decoding-set search) against the outer bound on every 0/1 direction.
/// `budget` caps the total number of decoding configurations visited.
pub fn run_enumerate(n: usize, up_to_iso: bool, with_regions: bool, budget: u128) -> Result<Vec<Listing>> {
    let problems = enumerate_problems(n, up_to_iso)?;
    if !with_regions {
        return Ok(problems.into_iter().map(|problem| Listing { problem, regions: None }).collect());
    }
    let dirs = directions(n);
    let single = ServerGrouping::single(n);
    let required: u128 = problems
        .iter()
        .map(|p| search_space(p, &single) * dirs.len() as u128)
        .sum();
    if required > budget {
        return Err(dixc_core::Error::BudgetExceeded { required, budget }.into());
    }
    problems
        .into_par_iter()
        .map(|problem| {
            let outer = outer_region(&problem, OuterBoundKind::PolymatroidPlusCustom)?;
            let mut values = Vec::with_capacity(dirs.len());
            for (s, w) in &dirs {
                let inner = scheme_joint(&problem, &Decoding::Search, w, budget)?.value;
                let bound = support_value(&rate_direction(w), &outer)?
                    .expect("outer regions are bounded and contain 0");
                values.push((*s, inner, bound));
            }
            Ok(Listing {
                problem,
                regions: Some(Regions { outer, values }),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_receivers_up_to_isomorphism() {
        let list = run_enumerate(2, true, true, 1_000_000).unwrap();
        assert_eq!(list.len(), 3);
        assert!(list.iter().all(|l| l.regions.as_ref().unwrap().coincide()));
    }

    #[test]
    fn budget_covers_the_whole_listing() {
        assert!(run_enumerate(3, false, true, 100).is_err());
        assert_eq!(run_enumerate(3, false, false, 100).unwrap().len(), 64);
    }
}
