//! Outer bounds on the capacity region.
//!
//! * [`build_mais`]: for every set `S` of receivers whose induced
//!   side-information subgraph is acyclic, `Σ_{j∈S} R_j ≤ Σ_{J∩S≠∅} C_J`.
//! * [`build_polymatroid`]: for every nonempty `T` a normalized, monotone,
//!   submodular set function `f_T` on the subsets of `T` with
//!   `f_T(T) = Σ_{J∩T≠∅} C_J` and `R_j ≤ f_T((B_j∩T)∪{j}) − f_T(B_j∩T)`.
//! * [`custom_cuts`]: the sum-rate cut for problems shaped like
//!   `(1);(2|3);(3|2)`, which the polymatroidal LP cannot derive.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fm::{fm_eliminate, remove_redundant};
use crate::lp::{lp_max, LpOutcome, LpSolution};
use crate::polyhedron::{Coefficients, LinearInequality, Polyhedron, Relation, VariableId};
use crate::problem::ProblemInstance;
use crate::rational::Rational;
use crate::subset::SubsetId;

pub const ORIGIN_POLYMATROID: &str = "polymatroid";
pub const ORIGIN_CUSTOM: &str = "custom:appendixB";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OuterBoundKind {
    Mais,
    Polymatroid,
    PolymatroidPlusCustom,
}

/// `R_1, …, R_n`.
pub fn rate_vars(n: usize) -> Vec<VariableId> {
    (0..n).map(VariableId::Rate).collect()
}

/// Objective `Σ w_j R_j`.
pub fn rate_direction(weights: &[Rational]) -> Coefficients {
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(j, w)| (VariableId::Rate(j), w.clone()))
        .collect()
}

/// Generalized MAIS region over `R_1..R_n`, redundant rows removed.
pub fn build_mais(p: &ProblemInstance) -> Result<Polyhedron> {
    remove_redundant(&mais_rows(p))
}

fn mais_rows(p: &ProblemInstance) -> Polyhedron {
    let mut region = Polyhedron::nonnegative(rate_vars(p.n()));
    for s in SubsetId::all_nonempty(p.n()) {
        if !p.is_acyclic_induced(s) {
            continue;
        }
        let row = LinearInequality::sum_le(s.elements().map(VariableId::Rate), p.capacity_meeting(s))
            .with_origin(format!("mais:S={}", s.key()));
        region.push_unchecked(row);
    }
    region
}

fn f(domain: SubsetId, arg: SubsetId) -> VariableId {
    VariableId::SetFn { domain, arg }
}

/// Polymatroidal constraints attached to one set `T`, over `R_j (j ∈ T)` and
/// `f_T(S) (S ⊆ T)`.
pub fn polymatroid_block(p: &ProblemInstance, t: SubsetId) -> Polyhedron {
    let one = Rational::one;
    let mut vars: Vec<VariableId> = t.elements().map(VariableId::Rate).collect();
    vars.extend(t.subsets().map(|s| f(t, s)));
    let mut block = Polyhedron::new(vars);
    let tag = |row: LinearInequality| row.with_origin(ORIGIN_POLYMATROID);

    for j in t.elements() {
        block.push_unchecked(LinearInequality::nonnegative(VariableId::Rate(j)));
    }
    // Implied by normalization and monotonicity; stated so the LP sees sign bounds.
    for s in t.subsets() {
        block.push_unchecked(tag(LinearInequality::nonnegative(f(t, s))));
    }
    block.push_unchecked(tag(LinearInequality::eq(
        [(f(t, SubsetId::EMPTY), one())],
        Rational::zero(),
    )));
    block.push_unchecked(tag(LinearInequality::eq(
        [(f(t, t), one())],
        p.capacity_meeting(t),
    )));
    for s in t.subsets() {
        let outside = t.difference(s);
        for i in outside.elements() {
            // f(S) ≤ f(S ∪ {i})
            block.push_unchecked(tag(LinearInequality::le(
                [(f(t, s), one()), (f(t, s.with(i)), -one())],
                Rational::zero(),
            )));
            for k in outside.elements().filter(|&k| k > i) {
                // f(S∪{i,k}) + f(S) ≤ f(S∪{i}) + f(S∪{k})
                block.push_unchecked(tag(LinearInequality::le(
                    [
                        (f(t, s.with(i).with(k)), one()),
                        (f(t, s), one()),
                        (f(t, s.with(i)), -one()),
                        (f(t, s.with(k)), -one()),
                    ],
                    Rational::zero(),
                )));
            }
        }
    }
    for j in t.elements() {
        let b = p.interfering(j).intersection(t);
        // R_j ≤ f_T(B ∪ {j}) − f_T(B)
        block.push_unchecked(tag(LinearInequality::le(
            [
                (VariableId::Rate(j), one()),
                (f(t, b.with(j)), -one()),
                (f(t, b), one()),
            ],
            Rational::zero(),
        )));
    }
    block
}

/// The full polymatroidal LP: rates `R_j ≥ 0` plus every block.
pub fn build_polymatroid(p: &ProblemInstance) -> Polyhedron {
    let mut lifted = Polyhedron::nonnegative(rate_vars(p.n()));
    for t in SubsetId::all_nonempty(p.n()) {
        let block = polymatroid_block(p, t);
        lifted = lifted.intersect(&block.with_constraints(
            block
                .constraints()
                .iter()
                .filter(|r| !r.nonnegativity_of().is_some_and(|v| v.is_rate()))
                .cloned()
                .collect(),
        ));
    }
    lifted
}

/// Sum-rate cuts for three-receiver problems in which one receiver has no
/// side information and the other two know each other's messages:
/// `R_1+R_2+R_3 ≤ Σ_J C_J + C_{b,c} + C_{1,2,3}` for the 2-cycle `{b, c}`.
pub fn custom_cuts(p: &ProblemInstance) -> Vec<LinearInequality> {
    if p.n() != 3 {
        return Vec::new();
    }
    let mut cuts = Vec::new();
    let mut seen = BTreeSet::new();
    let total: Rational = p.servers().map(|j| p.capacity(j)).sum();
    for a in 0..3 {
        if !p.side_info(a).is_empty() {
            continue;
        }
        let (b, c) = match a {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if !(p.side_info(b).contains(c) && p.side_info(c).contains(b)) {
            continue;
        }
        let pair = SubsetId::singleton(b).with(c);
        let rhs = &total + p.capacity(pair) + p.capacity(SubsetId::full(3));
        if seen.insert(rhs.clone()) {
            cuts.push(
                LinearInequality::sum_le(rate_vars(3), rhs).with_origin(ORIGIN_CUSTOM),
            );
        }
    }
    cuts
}

/// True when a custom cut applies to a problem whose capacities are not all
/// one: the cut is then the capacity-general reading of the unit-capacity
/// argument rather than a separately established bound.
pub fn custom_cut_is_generalized(p: &ProblemInstance) -> bool {
    !p.has_unit_capacities() && !custom_cuts(p).is_empty()
}

/// Explicit outer region over `R_1..R_n`, redundant rows removed.
pub fn outer_region(p: &ProblemInstance, kind: OuterBoundKind) -> Result<Polyhedron> {
    match kind {
        OuterBoundKind::Mais => build_mais(p),
        OuterBoundKind::Polymatroid | OuterBoundKind::PolymatroidPlusCustom => {
            let mut region = Polyhedron::nonnegative(rate_vars(p.n()));
            // Blocks share only rate variables, so the projection of their
            // intersection is the intersection of their projections.
            for t in SubsetId::all_nonempty(p.n()) {
                let block = polymatroid_block(p, t);
                let drop: BTreeSet<VariableId> = t.subsets().map(|s| f(t, s)).collect();
                let projected = fm_eliminate(&block, &drop)?;
                for row in projected.constraints() {
                    region.push_unchecked(row.clone().with_origin(ORIGIN_POLYMATROID));
                }
            }
            if kind == OuterBoundKind::PolymatroidPlusCustom {
                for cut in custom_cuts(p) {
                    region.push_unchecked(cut);
                }
            }
            remove_redundant(&region)
        }
    }
}

/// `max w·R` over the outer bound, solved on the lifted LP (no projection).
pub fn outer_support(p: &ProblemInstance, kind: OuterBoundKind, weights: &[Rational]) -> Result<Rational> {
    Ok(outer_lp(p, kind, weights)?.value)
}

/// Like [`outer_support`], also returning the optimal rate tuple.
pub fn outer_lp(p: &ProblemInstance, kind: OuterBoundKind, weights: &[Rational]) -> Result<LpSolution> {
    if weights.len() != p.n() {
        return Err(Error::ReceiverOutOfRange {
            index: weights.len(),
            n: p.n(),
        });
    }
    let objective = rate_direction(weights);
    let region = match kind {
        OuterBoundKind::Mais => mais_rows(p),
        OuterBoundKind::Polymatroid => build_polymatroid(p),
        OuterBoundKind::PolymatroidPlusCustom => {
            let mut lifted = build_polymatroid(p);
            for cut in custom_cuts(p) {
                lifted.push_unchecked(cut);
            }
            lifted
        }
    };
    match lp_max(&objective, &region)? {
        LpOutcome::Optimal(s) => Ok(s),
        // Weights of any sign: R = 0 is feasible and every R_j is capped.
        other => unreachable!("outer bound LP returned {other:?}"),
    }
}

/// Rows of `region` that read `Σ_{j∈S} R_j ≤ rhs` with unit coefficients,
/// keyed by `S`. Helper for comparing against tabulated regions.
pub fn unit_rows(region: &Polyhedron) -> Vec<(SubsetId, Rational)> {
    region
        .constraints()
        .iter()
        .filter(|r| r.relation == Relation::Le)
        .filter_map(|r| {
            let mut s = SubsetId::EMPTY;
            for (v, c) in &r.coefficients {
                match v {
                    VariableId::Rate(j) if c.is_one() => s = s.with(*j),
                    _ => return None,
                }
            }
            Some((s, r.rhs.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;
    use crate::rational::int;
    use alloc::vec;

    fn p(text: &str) -> ProblemInstance {
        parse_problem(text, &[]).unwrap()
    }

    fn set(ids: &[usize]) -> SubsetId {
        SubsetId::from_indices(ids.iter().map(|i| i - 1))
    }

    #[test]
    fn example_one_mais_region() {
        let region = build_mais(&p("(1);(2|3);(3|2)")).unwrap();
        let mut rows = unit_rows(&region);
        rows.sort();
        assert_eq!(
            rows,
            vec![
                (set(&[1]), int(4)),
                (set(&[2]), int(4)),
                (set(&[1, 2]), int(6)),
                (set(&[3]), int(4)),
                (set(&[1, 3]), int(6)),
            ]
        );
        // Plus the three nonnegativity rows, nothing else.
        assert_eq!(region.constraints().len(), 8);
    }

    #[test]
    fn single_receiver_polymatroid() {
        let q = parse_problem("(1)", &[(set(&[1]), crate::rational::frac(7, 3))]).unwrap();
        for kind in [OuterBoundKind::Mais, OuterBoundKind::Polymatroid] {
            assert_eq!(
                outer_support(&q, kind, &[int(1)]).unwrap(),
                crate::rational::frac(7, 3)
            );
        }
    }

    #[test]
    fn polymatroid_sum_rates() {
        let ones = [int(1), int(1), int(1)];
        assert_eq!(
            outer_support(&p("(1|3);(2|1);(3|2)"), OuterBoundKind::Polymatroid, &ones).unwrap(),
            int(9)
        );
        assert_eq!(
            outer_support(&p("(1);(2|3);(3|2)"), OuterBoundKind::Polymatroid, &ones).unwrap(),
            int(10)
        );
        assert_eq!(
            outer_support(&p("(1);(2|3);(3|2)"), OuterBoundKind::PolymatroidPlusCustom, &ones)
                .unwrap(),
            int(9)
        );
    }

    #[test]
    fn custom_cut_pattern() {
        let cuts = custom_cuts(&p("(1);(2|3);(3|2)"));
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].rhs, int(9));
        assert!(custom_cuts(&p("(1|2,3);(2|1,3);(3|1,2)")).is_empty());
        assert_eq!(custom_cuts(&p("(1);(2|1,3);(3|2)"))[0].rhs, int(9));
        // Relabeled pattern: receiver 2 is the one without side information.
        assert_eq!(custom_cuts(&p("(1|3);(2);(3|1)"))[0].rhs, int(9));
        assert!(custom_cuts(&p("(1);(2|3);(3)")).is_empty());
        assert!(custom_cuts(&p("(1);(2)")).is_empty());
    }

    #[test]
    fn zero_capacities_collapse_everything() {
        let mut q = p("(1);(2|3);(3|2)");
        for s in SubsetId::all_nonempty(3) {
            q.set_capacity(s, int(0)).unwrap();
        }
        for kind in [
            OuterBoundKind::Mais,
            OuterBoundKind::Polymatroid,
            OuterBoundKind::PolymatroidPlusCustom,
        ] {
            let region = outer_region(&q, kind).unwrap();
            for j in 0..3 {
                let mut w = vec![int(0); 3];
                w[j] = int(1);
                assert_eq!(
                    crate::lp::lp_max(&rate_direction(&w), &region)
                        .unwrap()
                        .value()
                        .cloned(),
                    Some(int(0))
                );
            }
        }
    }
}
