//! Distributed composite coding inner bounds.
//!
//! Servers are split into groups. Within a group `P` (message union `J'`),
//! every server `J ∈ P` runs virtual encoders at composite rates `C_{K,J}`,
//! `∅ ≠ K ⊆ J`, subject to the link budget
//! `Σ_{K⊆J, K⊄A_j} C_{K,J} ≤ C_J` for each receiver `j ∈ J'`. Receiver `j`
//! picks a decoding set `D_j ∋ j` and needs, for each nonempty
//! `L ⊆ D_j \ A_j`,
//! `Σ_{i∈L} R_{i,P} ≤ Σ_{K⊆D_j∪A_j, K∩L≠∅} Σ_{J∈P, K⊆J} C_{K,J}`.
//! Group regions add up (Minkowski sum) to the achievable region.
//!
//! Separate coding per server is the singleton grouping; joint coding across
//! all servers is the single group `N`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fm::fm_eliminate;
use crate::lp::{lp_max, LpOutcome};
use crate::outer::{custom_cuts, rate_vars};
use crate::polyhedron::{Coefficients, LinearInequality, Polyhedron, VariableId};
use crate::problem::ProblemInstance;
use crate::rational::Rational;
use crate::subset::SubsetId;

/// Default cap on the number of decoding configurations a search may visit.
pub const DEFAULT_SEARCH_BUDGET: u128 = 10_000_000;

/// Largest `n` for which [`search_groupings`] enumerates server partitions.
pub const MAX_GROUPING_SEARCH: usize = 3;

/// Decoding set `D_j` per receiver (zero-based receivers and messages).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecodingConfig(BTreeMap<usize, SubsetId>);

impl DecodingConfig {
    pub fn new() -> Self {
        DecodingConfig(BTreeMap::new())
    }

    pub fn from_sets<I: IntoIterator<Item = (usize, SubsetId)>>(sets: I) -> Self {
        DecodingConfig(sets.into_iter().collect())
    }

    pub fn insert(&mut self, receiver: usize, set: SubsetId) {
        self.0.insert(receiver, set);
    }

    pub fn get(&self, receiver: usize) -> Option<SubsetId> {
        self.0.get(&receiver).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, SubsetId)> + '_ {
        self.0.iter().map(|(j, d)| (*j, *d))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `D_j = [n] \ A_j` for every receiver.
    pub fn complement_rule(p: &ProblemInstance) -> Self {
        let full = SubsetId::full(p.n());
        Self::from_sets((0..p.n()).map(|j| (j, full.difference(p.side_info(j)))))
    }

    /// The decoding rule tabulated for three-receiver unit-capacity problems:
    /// `D_j = [n] \ A_j`, except that in problems where one receiver has no side
    /// information and the other two know each other's message, a receiver with
    /// `A_j = ∅` decodes only `{j}`.
    pub fn table2_rule(p: &ProblemInstance) -> Self {
        let mut config = Self::complement_rule(p);
        if !custom_cuts(p).is_empty() {
            for j in 0..p.n() {
                if p.side_info(j).is_empty() {
                    config.insert(j, SubsetId::singleton(j));
                }
            }
        }
        config
    }

    /// Keeps receivers in `scope` and intersects their sets with it.
    pub fn restricted_to(&self, scope: SubsetId) -> Self {
        Self::from_sets(
            self.iter()
                .filter(|(j, _)| scope.contains(*j))
                .map(|(j, d)| (j, d.intersection(scope))),
        )
    }

    /// Removes side information from each decoding set (`D_j \ A_j`); the
    /// region is unchanged.
    pub fn normalized(&self, p: &ProblemInstance) -> Self {
        Self::from_sets(self.iter().map(|(j, d)| (j, d.difference(p.side_info(j)))))
    }

    fn validate(&self, scope: SubsetId) -> Result<()> {
        for j in scope.elements() {
            let Some(d) = self.get(j) else {
                return Err(invalid(j, "missing decoding set"));
            };
            if !d.contains(j) {
                return Err(invalid(j, "decoding set must contain the wanted message"));
            }
            if !d.is_subset_of(scope) {
                return Err(invalid(j, "decoding set exceeds the messages held by the group"));
            }
        }
        if let Some(j) = self.0.keys().find(|j| !scope.contains(**j)) {
            return Err(invalid(*j, "receiver's message is not held by the group"));
        }
        Ok(())
    }
}

fn invalid(receiver: usize, reason: &str) -> Error {
    Error::InvalidDecoding {
        receiver: receiver + 1,
        reason: String::from(reason),
    }
}

/// A partition of the `2^n − 1` servers into groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ServerGrouping {
    n: usize,
    groups: Vec<Vec<SubsetId>>,
}

impl ServerGrouping {
    /// Validates that `groups` partitions the nonempty subsets of `[n]` and
    /// sorts servers within groups and groups by their smallest server.
    pub fn new(n: usize, groups: Vec<Vec<SubsetId>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut groups = groups;
        for g in &mut groups {
            if g.is_empty() {
                return Err(Error::InvalidGrouping(String::from("empty group")));
            }
            for s in g.iter() {
                if s.is_empty() || !s.fits(n) {
                    return Err(Error::InvalidGrouping(format!(
                        "{{{}}} is not a server of a {n}-receiver problem",
                        s.key()
                    )));
                }
                if !seen.insert(*s) {
                    return Err(Error::InvalidGrouping(format!(
                        "server {{{}}} appears in more than one group",
                        s.key()
                    )));
                }
            }
            g.sort();
        }
        if let Some(missing) = SubsetId::all_nonempty(n).find(|s| !seen.contains(s)) {
            return Err(Error::InvalidGrouping(format!(
                "server {{{}}} is not in any group",
                missing.key()
            )));
        }
        groups.sort();
        Ok(ServerGrouping { n, groups })
    }

    /// Every server in its own group.
    pub fn singletons(n: usize) -> Self {
        ServerGrouping {
            n,
            groups: SubsetId::all_nonempty(n).map(|s| vec![s]).collect(),
        }
    }

    /// All servers in one group.
    pub fn single(n: usize) -> Self {
        ServerGrouping {
            n,
            groups: vec![SubsetId::all_nonempty(n).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn groups(&self) -> &[Vec<SubsetId>] {
        &self.groups
    }
}

/// Union of the message sets held by a group of servers.
pub fn messages_of(servers: &[SubsetId]) -> SubsetId {
    servers.iter().fold(SubsetId::EMPTY, |acc, s| acc.union(*s))
}

fn composite(part: SubsetId, server: SubsetId) -> VariableId {
    VariableId::Composite { part, server }
}

fn group_rate(receiver: usize, group: usize) -> VariableId {
    VariableId::GroupRate { receiver, group }
}

/// Unprojected polyhedron of one group over `R_{j,P}` (`j ∈ J'`) and the
/// composite rates `C_{K,J}` (`J ∈ P`). `group` numbers the `R_{j,P}` variables.
pub fn group_polyhedron(
    p: &ProblemInstance,
    servers: &[SubsetId],
    config: &DecodingConfig,
    group: usize,
) -> Result<Polyhedron> {
    let scope = messages_of(servers);
    config.validate(scope)?;
    let mut vars: Vec<VariableId> = scope.elements().map(|j| group_rate(j, group)).collect();
    for &server in servers {
        vars.extend(server.nonempty_subsets().map(|k| composite(k, server)));
    }
    let mut region = Polyhedron::nonnegative(vars);

    for j in scope.elements() {
        let known = p.side_info(j).intersection(scope);
        let decode = config.get(j).expect("validated");
        let visible = decode.union(known);
        for l in decode.difference(known).nonempty_subsets() {
            let mut terms: Vec<(VariableId, Rational)> = l
                .elements()
                .map(|i| (group_rate(i, group), Rational::one()))
                .collect();
            for k in visible.nonempty_subsets().filter(|k| k.intersects(l)) {
                for &server in servers.iter().filter(|s| k.is_subset_of(**s)) {
                    terms.push((composite(k, server), -Rational::one()));
                }
            }
            region.push_unchecked(LinearInequality::le(terms, Rational::zero()));
        }
    }
    for j in scope.elements() {
        for &server in servers {
            let terms: Vec<(VariableId, Rational)> = server
                .nonempty_subsets()
                .filter(|k| !k.is_subset_of(p.side_info(j)))
                .map(|k| (composite(k, server), Rational::one()))
                .collect();
            if !terms.is_empty() {
                region.push_unchecked(LinearInequality::le(terms, p.capacity(server)));
            }
        }
    }
    Ok(region)
}

/// Achievable region of one group projected onto `R_{j,P}`, `j ∈ J'`.
/// Rates of receivers outside `J'` are implicitly zero.
pub fn group_region(
    p: &ProblemInstance,
    servers: &[SubsetId],
    config: &DecodingConfig,
    group: usize,
) -> Result<Polyhedron> {
    let lifted = group_polyhedron(p, servers, config, group)?;
    let drop: BTreeSet<VariableId> = lifted
        .variables()
        .iter()
        .copied()
        .filter(|v| matches!(v, VariableId::Composite { .. }))
        .collect();
    fm_eliminate(&lifted, &drop)
}

/// `max Σ_j w_j R_{j,P}` over one group's region with a fixed configuration.
pub fn group_support(
    p: &ProblemInstance,
    servers: &[SubsetId],
    config: &DecodingConfig,
    weights: &[Rational],
) -> Result<(Rational, Vec<Rational>)> {
    let lifted = group_polyhedron(p, servers, config, 0)?;
    let scope = messages_of(servers);
    let objective: Coefficients = scope
        .elements()
        .filter(|&j| !weights[j].is_zero())
        .map(|j| (group_rate(j, 0), weights[j].clone()))
        .collect();
    match lp_max(&objective, &lifted)? {
        LpOutcome::Optimal(s) => {
            let rates = (0..p.n())
                .map(|j| {
                    s.point
                        .get(&group_rate(j, 0))
                        .cloned()
                        .unwrap_or_else(Rational::zero)
                })
                .collect();
            Ok((s.value, rates))
        }
        // Zero rates are always achievable and composite rates are capped by C_J.
        other => unreachable!("group LP returned {other:?}"),
    }
}

/// Per-receiver decoding-set choices within a group: `j ∈ D_j ⊆ J' \ A_j`.
fn choices(p: &ProblemInstance, scope: SubsetId) -> Vec<(usize, Vec<SubsetId>)> {
    scope
        .elements()
        .map(|j| {
            let free = scope.difference(p.side_info(j)).without(j);
            (j, free.subsets().map(|s| s.with(j)).collect())
        })
        .collect()
}

fn config_count(p: &ProblemInstance, scope: SubsetId) -> u128 {
    choices(p, scope)
        .iter()
        .map(|(_, c)| c.len() as u128)
        .product()
}

/// Best configuration of one group in direction `weights`, exhaustive over
/// normalized decoding sets. Ties go to the lexicographically smallest
/// configuration (receivers ascending, sets by bitmask).
pub fn search_group(
    p: &ProblemInstance,
    servers: &[SubsetId],
    weights: &[Rational],
) -> Result<(Rational, DecodingConfig, Vec<Rational>)> {
    let scope = messages_of(servers);
    let options = choices(p, scope);
    let mut odometer = vec![0usize; options.len()];
    let mut best: Option<(Rational, DecodingConfig, Vec<Rational>)> = None;
    loop {
        let config = DecodingConfig::from_sets(
            options
                .iter()
                .zip(&odometer)
                .map(|((j, sets), &at)| (*j, sets[at])),
        );
        let (value, rates) = group_support(p, servers, &config, weights)?;
        if best.as_ref().is_none_or(|(b, _, _)| value > *b) {
            best = Some((value, config, rates));
        }
        // Advance with the last receiver varying fastest.
        let mut pos = options.len();
        loop {
            if pos == 0 {
                return Ok(best.expect("at least one configuration"));
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < options[pos].1.len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// How decoding sets are chosen for each group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoding {
    /// One configuration per group, in grouping order.
    Fixed(Vec<DecodingConfig>),
    /// Exhaustive search per group and direction.
    Search,
}

/// Support value of a scheme in one direction, with what achieved it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeValue {
    pub value: Rational,
    /// Configuration used by each group.
    pub configs: Vec<DecodingConfig>,
    /// An achieving rate tuple `R_j = Σ_P R_{j,P}`.
    pub point: Vec<Rational>,
}

fn check_weights(p: &ProblemInstance, weights: &[Rational]) -> Result<()> {
    if weights.len() != p.n() {
        return Err(Error::ReceiverOutOfRange {
            index: weights.len(),
            n: p.n(),
        });
    }
    Ok(())
}

/// Number of configurations an exhaustive search over `grouping` visits.
pub fn search_space(p: &ProblemInstance, grouping: &ServerGrouping) -> u128 {
    grouping
        .groups()
        .iter()
        .map(|g| config_count(p, messages_of(g)))
        .sum()
}

/// Exhaustive decoding-set search for every group of `grouping`. The union
/// over configurations is taken per direction and groups are independent, so
/// each group is maximized on its own.
pub fn search_decoding_sets(
    p: &ProblemInstance,
    grouping: &ServerGrouping,
    weights: &[Rational],
    budget: u128,
) -> Result<SchemeValue> {
    scheme_grouped(p, grouping, &Decoding::Search, weights, budget)
}

/// Support value of the grouped scheme: the sum over groups of each group's
/// support value (Minkowski sum of the group regions).
pub fn scheme_grouped(
    p: &ProblemInstance,
    grouping: &ServerGrouping,
    decoding: &Decoding,
    weights: &[Rational],
    budget: u128,
) -> Result<SchemeValue> {
    check_weights(p, weights)?;
    if grouping.n() != p.n() {
        return Err(Error::InvalidGrouping(format!(
            "grouping is for n = {}, problem has n = {}",
            grouping.n(),
            p.n()
        )));
    }
    let mut total = Rational::zero();
    let mut point = vec![Rational::zero(); p.n()];
    let mut used = Vec::with_capacity(grouping.groups().len());
    match decoding {
        Decoding::Fixed(configs) => {
            if configs.len() != grouping.groups().len() {
                return Err(Error::InvalidGrouping(format!(
                    "{} decoding configurations for {} groups",
                    configs.len(),
                    grouping.groups().len()
                )));
            }
            for (servers, config) in grouping.groups().iter().zip(configs) {
                let (v, rates) = group_support(p, servers, config, weights)?;
                total += v;
                add_into(&mut point, &rates);
                used.push(config.clone());
            }
        }
        Decoding::Search => {
            check_nonnegative(weights)?;
            let required = search_space(p, grouping);
            if required > budget {
                return Err(Error::BudgetExceeded { required, budget });
            }
            for servers in grouping.groups() {
                let (v, config, rates) = search_group(p, servers, weights)?;
                total += v;
                add_into(&mut point, &rates);
                used.push(config);
            }
        }
    }
    Ok(SchemeValue {
        value: total,
        configs: used,
        point,
    })
}

fn check_nonnegative(weights: &[Rational]) -> Result<()> {
    match weights.iter().find(|w| w.is_negative()) {
        Some(w) => Err(Error::NegativeWeight(format!("{w}"))),
        None => Ok(()),
    }
}

fn add_into(acc: &mut [Rational], rates: &[Rational]) {
    for (a, r) in acc.iter_mut().zip(rates) {
        *a += r;
    }
}

/// Separate composite coding at every server (singleton grouping).
pub fn scheme_separate(
    p: &ProblemInstance,
    decoding: &Decoding,
    weights: &[Rational],
    budget: u128,
) -> Result<SchemeValue> {
    scheme_grouped(p, &ServerGrouping::singletons(p.n()), decoding, weights, budget)
}

/// Joint composite coding across all servers with one decoding set per receiver.
pub fn scheme_joint(
    p: &ProblemInstance,
    decoding: &Decoding,
    weights: &[Rational],
    budget: u128,
) -> Result<SchemeValue> {
    scheme_grouped(p, &ServerGrouping::single(p.n()), decoding, weights, budget)
}

/// Explicit achievable region over `R_1..R_n` for fixed configurations: each
/// group is projected onto its own rates, the rates are linked by
/// `R_j = Σ_P R_{j,P}`, and the group rates are eliminated.
pub fn grouped_region(
    p: &ProblemInstance,
    grouping: &ServerGrouping,
    configs: &[DecodingConfig],
) -> Result<Polyhedron> {
    if configs.len() != grouping.groups().len() {
        return Err(Error::InvalidGrouping(format!(
            "{} decoding configurations for {} groups",
            configs.len(),
            grouping.groups().len()
        )));
    }
    let mut joint = Polyhedron::nonnegative(rate_vars(p.n()));
    let mut members: Vec<Vec<VariableId>> = vec![Vec::new(); p.n()];
    for (g, (servers, config)) in grouping.groups().iter().zip(configs).enumerate() {
        let region = group_region(p, servers, config, g)?;
        for j in messages_of(servers).elements() {
            members[j].push(group_rate(j, g));
        }
        joint = joint.intersect(&region);
    }
    let mut drop = BTreeSet::new();
    for (j, parts) in members.iter().enumerate() {
        let terms = core::iter::once((VariableId::Rate(j), Rational::one()))
            .chain(parts.iter().map(|v| (*v, -Rational::one())));
        joint.push_unchecked(LinearInequality::eq(terms, Rational::zero()));
        drop.extend(parts.iter().copied());
    }
    fm_eliminate(&joint, &drop)
}

/// Best grouping found by exhaustive search over all partitions of the
/// servers (with decoding-set search inside each group).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupingValue {
    pub value: Rational,
    pub grouping: ServerGrouping,
    pub configs: Vec<DecodingConfig>,
}

/// Maximizes the grouped scheme over every server partition, `n ≤ 3`.
///
/// The objective is additive over groups, so the best partition of a server
/// set `S` is the best first group `B ∋ min S` plus the best partition of
/// `S \ B`; every partition is covered without listing them.
pub fn search_groupings(
    p: &ProblemInstance,
    weights: &[Rational],
    budget: u128,
) -> Result<GroupingValue> {
    check_weights(p, weights)?;
    check_nonnegative(weights)?;
    if p.n() > MAX_GROUPING_SEARCH {
        return Err(Error::UnsupportedSize {
            n: p.n(),
            max: MAX_GROUPING_SEARCH,
        });
    }
    let servers: Vec<SubsetId> = p.servers().collect();
    let count = servers.len();
    let full: u32 = (1u32 << count) - 1;
    let blocks_of = |mask: u32| -> Vec<SubsetId> {
        (0..count).filter(|i| mask & (1 << i) != 0).map(|i| servers[i]).collect()
    };
    let required: u128 = (1..=full)
        .map(|m| config_count(p, messages_of(&blocks_of(m))))
        .sum();
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut block_best: Vec<Option<(Rational, DecodingConfig)>> = vec![None; full as usize + 1];
    for mask in 1..=full {
        let (v, config, _) = search_group(p, &blocks_of(mask), weights)?;
        block_best[mask as usize] = Some((v, config));
    }
    // best[m] = (value, chosen first block) for the server subset m.
    let mut best: Vec<Option<(Rational, u32)>> = vec![None; full as usize + 1];
    best[0] = Some((Rational::zero(), 0));
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        // Blocks: low plus any submask of the rest, ascending.
        let mut sub = 0u32;
        loop {
            let block = low | sub;
            let v = &block_best[block as usize].as_ref().expect("filled").0
                + &best[(mask & !block) as usize].as_ref().expect("filled").0;
            if best[mask as usize].as_ref().is_none_or(|(b, _)| v > *b) {
                best[mask as usize] = Some((v, block));
            }
            if sub == rest {
                break;
            }
            sub = (sub | !rest).wrapping_add(1) & rest;
        }
    }
    let mut groups = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let block = best[mask as usize].as_ref().expect("filled").1;
        groups.push(block);
        mask &= !block;
    }
    let grouping = ServerGrouping::new(p.n(), groups.iter().map(|&b| blocks_of(b)).collect())?;
    let configs = grouping
        .groups()
        .iter()
        .map(|g| {
            let mask = servers
                .iter()
                .enumerate()
                .filter(|(_, s)| g.contains(s))
                .fold(0u32, |m, (i, _)| m | (1 << i));
            block_best[mask as usize].as_ref().expect("filled").1.clone()
        })
        .collect();
    Ok(GroupingValue {
        value: best[full as usize].as_ref().expect("filled").0.clone(),
        grouping,
        configs,
    })
}

/// Server grouping and decoding sets used for `(1|4);(2|3,4);(3|1,2);(4|2,3)`
/// in the published capacity-achieving construction.
pub fn table3_preset() -> (ServerGrouping, Vec<DecodingConfig>) {
    let s = |ids: &[usize]| SubsetId::from_indices(ids.iter().map(|i| i - 1));
    let d = |sets: &[(usize, &[usize])]| {
        DecodingConfig::from_sets(sets.iter().map(|(j, ids)| (j - 1, s(ids))))
    };
    let rows: Vec<(Vec<SubsetId>, DecodingConfig)> = vec![
        (vec![s(&[1])], d(&[(1, &[1])])),
        (vec![s(&[2])], d(&[(2, &[2])])),
        (vec![s(&[3])], d(&[(3, &[3])])),
        (vec![s(&[4])], d(&[(4, &[4])])),
        (vec![s(&[1, 2])], d(&[(1, &[1, 2]), (2, &[1, 2])])),
        (
            vec![s(&[1, 3]), s(&[3, 4])],
            d(&[(1, &[1, 3]), (3, &[3, 4]), (4, &[1, 4])]),
        ),
        (
            vec![s(&[2, 3]), s(&[2, 4])],
            d(&[(2, &[2]), (3, &[3, 4]), (4, &[4])]),
        ),
        (
            vec![
                s(&[1, 4]),
                s(&[1, 2, 3, 4]),
                s(&[1, 2, 3]),
                s(&[1, 2, 4]),
                s(&[1, 3, 4]),
                s(&[2, 3, 4]),
            ],
            d(&[(1, &[1]), (2, &[1, 2]), (3, &[3, 4]), (4, &[1, 4])]),
        ),
    ];
    align(4, rows).expect("preset is a valid partition")
}

/// Builds a grouping from `(servers, config)` pairs and reorders the
/// configurations to follow the grouping's canonical group order.
pub fn align(
    n: usize,
    rows: Vec<(Vec<SubsetId>, DecodingConfig)>,
) -> Result<(ServerGrouping, Vec<DecodingConfig>)> {
    let grouping = ServerGrouping::new(n, rows.iter().map(|(g, _)| g.clone()).collect())?;
    let configs = grouping
        .groups()
        .iter()
        .map(|g| {
            let mut sorted = g.clone();
            sorted.sort();
            rows.iter()
                .find(|(h, _)| {
                    let mut h = h.clone();
                    h.sort();
                    h == sorted
                })
                .map(|(_, c)| c.clone())
                .expect("every group has a configuration")
        })
        .collect();
    Ok((grouping, configs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;
    use crate::rational::{frac, int};

    fn p(text: &str) -> ProblemInstance {
        parse_problem(text, &[]).unwrap()
    }

    fn s(ids: &[usize]) -> SubsetId {
        SubsetId::from_indices(ids.iter().map(|i| i - 1))
    }

    fn ones(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn centralized_three_cycle_group() {
        let q = p("(1|3);(2|1);(3|2)");
        let servers = [s(&[1, 2, 3])];
        let config = DecodingConfig::complement_rule(&q);
        let (v, _) = group_support(&q, &servers, &config, &ones(3)).unwrap();
        assert_eq!(v, frac(3, 2));
    }

    #[test]
    fn single_message_server() {
        let q = p("(1|3);(2|1);(3|2)");
        let config = DecodingConfig::from_sets([(0, s(&[1]))]);
        let region = group_region(&q, &[s(&[1])], &config, 0).unwrap();
        let rows: Vec<String> = region.constraints().iter().map(|r| alloc::string::ToString::to_string(r)).collect();
        assert_eq!(rows, ["-R_1@P1 <= 0", "R_1@P1 <= 1"]);
    }

    #[test]
    fn invalid_configs_rejected() {
        let q = p("(1|3);(2|1);(3|2)");
        let servers = [s(&[1, 2])];
        let missing = DecodingConfig::from_sets([(0, s(&[1]))]);
        assert!(group_polyhedron(&q, &servers, &missing, 0).is_err());
        let no_self = DecodingConfig::from_sets([(0, s(&[2])), (1, s(&[2]))]);
        assert!(group_polyhedron(&q, &servers, &no_self, 0).is_err());
        let outside = DecodingConfig::from_sets([(0, s(&[1, 3])), (1, s(&[2]))]);
        assert!(group_polyhedron(&q, &servers, &outside, 0).is_err());
        let extra = DecodingConfig::from_sets([(0, s(&[1])), (1, s(&[2])), (2, s(&[3]))]);
        assert!(group_polyhedron(&q, &servers, &extra, 0).is_err());
    }

    #[test]
    fn joint_scheme_reaches_nine() {
        let q = p("(1|3);(2|1);(3|2)");
        let fixed = Decoding::Fixed(vec![DecodingConfig::complement_rule(&q)]);
        let v = scheme_joint(&q, &fixed, &ones(3), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(v.value, int(9));
        let searched = scheme_joint(&q, &Decoding::Search, &ones(3), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(searched.value, int(9));
    }

    #[test]
    fn separate_scheme_table_one_sums() {
        let q = p("(1|3);(2|1);(3|2)");
        let v = scheme_separate(&q, &Decoding::Search, &ones(3), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(v.value, frac(15, 2));
        let pair = scheme_separate(
            &q,
            &Decoding::Search,
            &[int(1), int(1), int(0)],
            DEFAULT_SEARCH_BUDGET,
        )
        .unwrap();
        assert_eq!(pair.value, int(6));
    }

    #[test]
    fn single_receiver_schemes() {
        let q = parse_problem("(1)", &[(s(&[1]), frac(5, 2))]).unwrap();
        for v in [
            scheme_separate(&q, &Decoding::Search, &[int(1)], 10).unwrap(),
            scheme_joint(&q, &Decoding::Search, &[int(1)], 10).unwrap(),
        ] {
            assert_eq!(v.value, frac(5, 2));
            assert_eq!(v.configs[0].get(0), Some(s(&[1])));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let q = p("(1);(2);(3)");
        let err = scheme_joint(&q, &Decoding::Search, &ones(3), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { required: 64, budget: 3 }));
    }

    #[test]
    fn grouping_validation() {
        assert!(ServerGrouping::new(2, vec![vec![s(&[1])], vec![s(&[2])]]).is_err());
        assert!(ServerGrouping::new(
            2,
            vec![vec![s(&[1]), s(&[2])], vec![s(&[1, 2]), s(&[1])]]
        )
        .is_err());
        assert!(ServerGrouping::new(1, vec![vec![s(&[1])], vec![]]).is_err());
        assert!(ServerGrouping::new(1, vec![vec![s(&[2])]]).is_err());
        let g = ServerGrouping::new(2, vec![vec![s(&[1, 2]), s(&[2])], vec![s(&[1])]]).unwrap();
        assert_eq!(g.groups()[0], vec![s(&[1])]);
        assert_eq!(g.groups()[1], vec![s(&[2]), s(&[1, 2])]);
    }

    #[test]
    fn table2_rule_picks_singleton_for_isolated_receiver() {
        let q = p("(1);(2|3);(3|2)");
        let rule = DecodingConfig::table2_rule(&q);
        assert_eq!(rule.get(0), Some(s(&[1])));
        assert_eq!(rule.get(1), Some(s(&[1, 2])));
        assert_eq!(rule.get(2), Some(s(&[1, 3])));
        let other = DecodingConfig::table2_rule(&p("(1);(2);(3)"));
        assert_eq!(other.get(0), Some(s(&[1, 2, 3])));
    }

    #[test]
    fn explicit_group_region_for_cycle_pair() {
        let q = p("(1|4);(2|3,4);(3|1,2);(4|2,3)");
        let (grouping, configs) = table3_preset();
        let at = grouping
            .groups()
            .iter()
            .position(|g| g == &vec![s(&[1, 3]), s(&[3, 4])])
            .unwrap();
        let region = group_region(&q, &grouping.groups()[at], &configs[at], 0).unwrap();
        let mut rows: Vec<(Vec<usize>, Rational)> = region
            .constraints()
            .iter()
            .filter(|r| r.coefficients.values().all(|c| c.is_positive()))
            .map(|r| {
                (
                    r.coefficients
                        .keys()
                        .map(|v| match v {
                            VariableId::GroupRate { receiver, .. } => receiver + 1,
                            _ => unreachable!(),
                        })
                        .collect(),
                    r.rhs.clone(),
                )
            })
            .collect();
        rows.sort();
        // R_1 ≤ 1, R_3 ≤ 2 (implied), R_4 ≤ 1, R_1+R_3 ≤ 2, R_3+R_4 ≤ 2.
        assert!(rows.contains(&(vec![1], int(1))));
        assert!(rows.contains(&(vec![4], int(1))));
        assert!(rows.contains(&(vec![1, 3], int(2))));
        assert!(rows.contains(&(vec![3, 4], int(2))));
    }

    #[test]
    fn grouping_search_small() {
        let q = p("(1);(2|1)");
        let best = search_groupings(&q, &ones(2), DEFAULT_SEARCH_BUDGET).unwrap();
        let joint = scheme_joint(&q, &Decoding::Search, &ones(2), DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(best.value >= joint.value);
        let regrouped = scheme_grouped(
            &q,
            &best.grouping,
            &Decoding::Fixed(best.configs.clone()),
            &ones(2),
            DEFAULT_SEARCH_BUDGET,
        )
        .unwrap();
        assert_eq!(regrouped.value, best.value);
    }
}
