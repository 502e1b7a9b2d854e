//! The `bound` command: one bound, one problem, one direction or the region.

use std::fmt;
use std::str::FromStr;

use dixc_core::inner::{align, grouped_region, search_groupings};
use dixc_core::outer::{custom_cut_is_generalized, outer_lp};
use dixc_core::{
    scheme_grouped, DecodingConfig, Decoding, OuterBoundKind, Polyhedron, ProblemInstance,
    Rational, ServerGrouping, SubsetId, VariableId,
};

use crate::error::{Error, Result};
use crate::format::{shared_per_group, DecodingDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Mais,
    Polymatroid,
    PolymatroidCustom,
    CcSeparate,
    CcJoint,
    CcGrouped,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Mais,
        Scheme::Polymatroid,
        Scheme::PolymatroidCustom,
        Scheme::CcSeparate,
        Scheme::CcJoint,
        Scheme::CcGrouped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Mais => "mais",
            Scheme::Polymatroid => "polymatroid",
            Scheme::PolymatroidCustom => "polymatroid+custom",
            Scheme::CcSeparate => "cc-separate",
            Scheme::CcJoint => "cc-joint",
            Scheme::CcGrouped => "cc-grouped",
        }
    }

    pub fn outer_kind(self) -> Option<OuterBoundKind> {
        match self {
            Scheme::Mais => Some(OuterBoundKind::Mais),
            Scheme::Polymatroid => Some(OuterBoundKind::Polymatroid),
            Scheme::PolymatroidCustom => Some(OuterBoundKind::PolymatroidPlusCustom),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown scheme {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Direction(Vec<Rational>),
    Region,
}

/// Where decoding sets come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodingChoice {
    Search,
    Table2Rule,
    /// A decoding document; per-group documents follow `raw_groups` order.
    Document(DecodingDoc),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupingChoice {
    /// Groups in the order they were written, so per-group decoding
    /// documents can be matched up.
    Groups(Vec<Vec<SubsetId>>),
    Search,
}

#[derive(Clone, Debug)]
pub struct BoundRequest {
    pub problem: ProblemInstance,
    pub scheme: Scheme,
    pub query: Query,
    pub grouping: Option<GroupingChoice>,
    pub decoding: DecodingChoice,
    pub budget: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub scheme: Scheme,
    pub problem: ProblemInstance,
    pub direction: Option<Vec<Rational>>,
    pub value: Option<Rational>,
    pub region: Option<Polyhedron>,
    pub point: Option<Vec<Rational>>,
    pub grouping: Option<ServerGrouping>,
    pub configs: Vec<DecodingConfig>,
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(req: &BoundRequest) -> Self {
        BoundResult {
            scheme: req.scheme,
            problem: req.problem.clone(),
            direction: match &req.query {
                Query::Direction(w) => Some(w.clone()),
                Query::Region => None,
            },
            value: None,
            region: None,
            point: None,
            grouping: None,
            configs: Vec::new(),
            notes: Vec::new(),
        }
    }
}

const GENERALIZED_CUT_NOTE: &str =
    "custom sum-rate cut uses its capacity-general form; it is established only for unit capacities";

pub fn run_bound(req: &BoundRequest) -> Result<BoundResult> {
    let p = &req.problem;
    let mut out = BoundResult::new(req);
    if let Some(kind) = req.scheme.outer_kind() {
        if req.grouping.is_some() || req.decoding != DecodingChoice::Search {
            return Err(Error::Usage(format!(
                "--grouping and --decoding do not apply to {}",
                req.scheme
            )));
        }
        if kind == OuterBoundKind::PolymatroidPlusCustom && custom_cut_is_generalized(p) {
            out.notes.push(GENERALIZED_CUT_NOTE.into());
        }
        match &req.query {
            Query::Direction(w) => {
                let solution = outer_lp(p, kind, w)?;
                out.point = Some(
                    (0..p.n())
                        .map(|j| solution.point[&VariableId::Rate(j)].clone())
                        .collect(),
                );
                out.value = Some(solution.value);
            }
            Query::Region => out.region = Some(dixc_core::outer_region(p, kind)?),
        }
        return Ok(out);
    }

    let grouping_choice = match req.scheme {
        Scheme::CcSeparate | Scheme::CcJoint if req.grouping.is_some() => {
            return Err(Error::Usage(format!("--grouping does not apply to {}", req.scheme)));
        }
        Scheme::CcSeparate => GroupingChoice::Groups(
            SubsetId::all_nonempty(p.n()).map(|s| vec![s]).collect(),
        ),
        Scheme::CcJoint => GroupingChoice::Groups(vec![SubsetId::all_nonempty(p.n()).collect()]),
        _ => req.grouping.clone().ok_or_else(|| {
            Error::Usage("cc-grouped needs --grouping FILE|preset:table3 or --search-groupings".into())
        })?,
    };

    let raw_groups = match grouping_choice {
        GroupingChoice::Groups(groups) => groups,
        GroupingChoice::Search => {
            let Query::Direction(w) = &req.query else {
                return Err(Error::Usage("--search-groupings needs --weights".into()));
            };
            if req.decoding != DecodingChoice::Search {
                return Err(Error::Usage(
                    "--search-groupings searches decoding sets too; drop --decoding".into(),
                ));
            }
            let best = search_groupings(p, w, req.budget)?;
            out.value = Some(best.value);
            out.grouping = Some(best.grouping.clone());
            let fixed = Decoding::Fixed(best.configs.clone());
            out.point = Some(scheme_grouped(p, &best.grouping, &fixed, w, req.budget)?.point);
            out.configs = best.configs;
            return Ok(out);
        }
    };

    let (grouping, fixed) = resolve(p, raw_groups, &req.decoding)?;
    out.grouping = Some(grouping.clone());
    match &req.query {
        Query::Direction(w) => {
            let decoding = match &fixed {
                Some(configs) => Decoding::Fixed(configs.clone()),
                None => Decoding::Search,
            };
            let v = scheme_grouped(p, &grouping, &decoding, w, req.budget)?;
            out.value = Some(v.value);
            out.point = Some(v.point);
            out.configs = v.configs;
        }
        Query::Region => {
            let configs = fixed.ok_or_else(|| {
                Error::Usage(
                    "--region needs fixed decoding sets (--decoding FILE or rule:table2); \
                     searched decoding sets only have support values"
                        .into(),
                )
            })?;
            out.region = Some(grouped_region(p, &grouping, &configs)?);
            out.configs = configs;
        }
    }
    Ok(out)
}

/// Canonical grouping plus, unless searching, one configuration per group.
fn resolve(
    p: &ProblemInstance,
    raw_groups: Vec<Vec<SubsetId>>,
    decoding: &DecodingChoice,
) -> Result<(ServerGrouping, Option<Vec<DecodingConfig>>)> {
    match decoding {
        DecodingChoice::Search => Ok((ServerGrouping::new(p.n(), raw_groups)?, None)),
        DecodingChoice::Table2Rule => {
            let grouping = ServerGrouping::new(p.n(), raw_groups)?;
            let configs = shared_per_group(&DecodingConfig::table2_rule(p), &grouping);
            Ok((grouping, Some(configs)))
        }
        DecodingChoice::Document(DecodingDoc::Shared(config)) => {
            let grouping = ServerGrouping::new(p.n(), raw_groups)?;
            let configs = shared_per_group(config, &grouping);
            Ok((grouping, Some(configs)))
        }
        DecodingChoice::Document(DecodingDoc::PerGroup(configs)) => {
            if configs.len() != raw_groups.len() {
                return Err(Error::Usage(format!(
                    "decoding file lists {} groups, grouping has {}",
                    configs.len(),
                    raw_groups.len()
                )));
            }
            let (grouping, configs) = align(p.n(), raw_groups.into_iter().zip(configs.iter().cloned()).collect())?;
            Ok((grouping, Some(configs)))
        }
    }
}
