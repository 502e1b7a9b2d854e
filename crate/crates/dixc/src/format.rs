//! JSON documents: problems, polyhedra, server groupings and decoding sets.
//!
//! Receivers, messages and subset keys are 1-based in every document.

use std::collections::BTreeSet;

use dixc_core::inner::messages_of;
use dixc_core::problem::MAX_RECEIVERS;
use dixc_core::rational::{parse as parse_rational, render};
use dixc_core::{
    DecodingConfig, LinearInequality, Polyhedron, ProblemInstance, Rational, Relation,
    ServerGrouping, SubsetId, VariableId,
};
use serde_json::{json, Map, Value};

use crate::error::{format_err, Result};

/// Servers of an `n`-receiver problem ordered by size, then lexicographically.
pub fn server_order(n: usize) -> Vec<SubsetId> {
    let mut servers: Vec<SubsetId> = SubsetId::all_nonempty(n).collect();
    servers.sort_by_key(|s| (s.len(), s.elements().collect::<Vec<_>>()));
    servers
}

fn rational_value(v: &Value, what: &str) -> Result<Rational> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(dixc_core::rational::int),
        _ => None,
    };
    parsed.ok_or_else(|| format_err(format!("{what}: expected a rational such as \"3/2\", got {v}")))
}

fn index_list(v: &Value, n: usize, what: &str) -> Result<SubsetId> {
    let items = v
        .as_array()
        .ok_or_else(|| format_err(format!("{what}: expected a list of message indices")))?;
    let mut set = SubsetId::EMPTY;
    for item in items {
        let i = item
            .as_u64()
            .filter(|i| (1..=n as u64).contains(i))
            .ok_or_else(|| format_err(format!("{what}: {item} is not a message index in 1..={n}")))?;
        set = set.with(i as usize - 1);
    }
    Ok(set)
}

fn receiver_key(key: &str, n: usize, what: &str) -> Result<usize> {
    key.trim()
        .parse::<usize>()
        .ok()
        .filter(|j| (1..=n).contains(j))
        .map(|j| j - 1)
        .ok_or_else(|| format_err(format!("{what}: {key:?} is not a receiver in 1..={n}")))
}

fn server_key(key: &str, n: usize) -> Result<SubsetId> {
    SubsetId::parse_key(key)
        .filter(|s| !s.is_empty() && s.fits(n))
        .ok_or_else(|| dixc_core::Error::BadCapacityKey(key.to_string()).into())
}

/// Parses a problem document. Omitted capacities default to 1.
pub fn problem_from_json(text: &str) -> Result<ProblemInstance> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| format_err("problem document must be a JSON object"))?;
    if let Some(extra) = obj.keys().find(|k| !["n", "side_info", "capacities"].contains(&k.as_str())) {
        return Err(format_err(format!("unknown problem field {extra:?}")));
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| format_err("problem document needs an integer \"n\""))? as usize;
    if n == 0 || n > MAX_RECEIVERS {
        return Err(dixc_core::Error::UnsupportedSize { n, max: MAX_RECEIVERS }.into());
    }
    let sides = obj
        .get("side_info")
        .and_then(Value::as_object)
        .ok_or_else(|| format_err("problem document needs a \"side_info\" object"))?;
    let mut side_info = vec![None; n];
    for (key, value) in sides {
        let j = receiver_key(key, n, "side_info")?;
        if side_info[j].is_some() {
            return Err(dixc_core::Error::DuplicateReceiver(j + 1).into());
        }
        side_info[j] = Some(index_list(value, n, &format!("side_info of receiver {}", j + 1))?);
    }
    let side_info = side_info
        .into_iter()
        .enumerate()
        .map(|(j, a)| a.ok_or(dixc_core::Error::MissingReceiver(j + 1)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut p = ProblemInstance::unit(n, side_info)?;
    if let Some(caps) = obj.get("capacities") {
        let caps = caps
            .as_object()
            .ok_or_else(|| format_err("\"capacities\" must be an object"))?;
        for (key, value) in caps {
            let server = server_key(key, n)?;
            p.set_capacity(server, rational_value(value, &format!("capacity {key:?}"))?)?;
        }
    }
    Ok(p)
}

pub fn problem_to_json(p: &ProblemInstance) -> Value {
    let mut sides = Map::new();
    for j in 0..p.n() {
        let list: Vec<usize> = p.side_info(j).elements().map(|i| i + 1).collect();
        sides.insert((j + 1).to_string(), json!(list));
    }
    let mut caps = Map::new();
    for s in server_order(p.n()) {
        caps.insert(s.key(), json!(render(&p.capacity(s))));
    }
    json!({ "n": p.n(), "side_info": sides, "capacities": caps })
}

/// Parses `--cap K=V` overrides.
pub fn parse_cap(text: &str) -> Result<(SubsetId, Rational)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| format_err(format!("capacity override {text:?} must look like 2,3=1/2")))?;
    let server = SubsetId::parse_key(key)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| dixc_core::Error::BadCapacityKey(key.to_string()))?;
    let value = parse_rational(value).ok_or_else(|| dixc_core::Error::BadRational(value.to_string()))?;
    Ok((server, value))
}

/// Parses a comma-separated weight vector such as `1,1/2,0`.
pub fn parse_weights(text: &str, n: usize) -> Result<Vec<Rational>> {
    let weights = text
        .split(',')
        .map(|w| parse_rational(w).ok_or_else(|| dixc_core::Error::BadRational(w.trim().to_string()).into()))
        .collect::<Result<Vec<_>>>()?;
    if weights.len() != n {
        return Err(format_err(format!(
            "--weights has {} entries but the problem has {n} receivers",
            weights.len()
        )));
    }
    Ok(weights)
}

pub fn inequality_to_json(row: &LinearInequality) -> Value {
    let mut lhs = Map::new();
    for (v, c) in &row.coefficients {
        lhs.insert(v.to_string(), json!(render(c)));
    }
    let mut out = Map::new();
    out.insert("lhs".into(), Value::Object(lhs));
    out.insert("rel".into(), json!(row.relation.symbol()));
    out.insert("rhs".into(), json!(render(&row.rhs)));
    if let Some(origin) = &row.origin {
        out.insert("origin".into(), json!(origin));
    }
    Value::Object(out)
}

pub fn polyhedron_to_json(poly: &Polyhedron) -> Value {
    let vars: Vec<String> = poly.variables().iter().map(|v| v.to_string()).collect();
    let cons: Vec<Value> = poly.constraints().iter().map(inequality_to_json).collect();
    json!({ "vars": vars, "cons": cons })
}

pub fn polyhedron_from_json(text: &str) -> Result<Polyhedron> {
    let doc: Value = serde_json::from_str(text)?;
    let var = |v: &str| -> Result<VariableId> { Ok(v.parse::<VariableId>()?) };
    let vars = doc
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| format_err("polyhedron needs a \"vars\" list"))?
        .iter()
        .map(|v| var(v.as_str().ok_or_else(|| format_err("variable names are strings"))?))
        .collect::<Result<Vec<_>>>()?;
    let mut poly = Polyhedron::new(vars);
    let cons = doc
        .get("cons")
        .and_then(Value::as_array)
        .ok_or_else(|| format_err("polyhedron needs a \"cons\" list"))?;
    for c in cons {
        let lhs = c
            .get("lhs")
            .and_then(Value::as_object)
            .ok_or_else(|| format_err("constraint needs an \"lhs\" object"))?;
        let mut terms = Vec::new();
        for (name, coef) in lhs {
            terms.push((var(name)?, rational_value(coef, name)?));
        }
        let relation = match c.get("rel").and_then(Value::as_str) {
            Some("<=") => Relation::Le,
            Some("=") => Relation::Eq,
            other => return Err(format_err(format!("unknown relation {other:?}"))),
        };
        let rhs = rational_value(c.get("rhs").unwrap_or(&Value::Null), "rhs")?;
        let mut row = LinearInequality::new(terms, relation, rhs);
        if let Some(origin) = c.get("origin").and_then(Value::as_str) {
            row = row.with_origin(origin);
        }
        poly.push(row)?;
    }
    Ok(poly)
}

/// Raw groups in file order; [`ServerGrouping::new`] validates the partition.
pub fn groups_from_json(text: &str, n: usize) -> Result<Vec<Vec<SubsetId>>> {
    let doc: Value = serde_json::from_str(text)?;
    let groups = doc
        .as_array()
        .ok_or_else(|| format_err("grouping must be a list of lists of server keys"))?;
    groups
        .iter()
        .map(|g| {
            g.as_array()
                .ok_or_else(|| format_err("each group must be a list of server keys"))?
                .iter()
                .map(|k| {
                    let key = k.as_str().ok_or_else(|| format_err("server keys are strings such as \"1,3\""))?;
                    SubsetId::parse_key(key)
                        .filter(|s| !s.is_empty() && s.fits(n))
                        .ok_or_else(|| format_err(format!("{key:?} is not a server of a {n}-receiver problem")))
                })
                .collect()
        })
        .collect()
}

pub fn grouping_to_json(g: &ServerGrouping) -> Value {
    Value::Array(
        g.groups()
            .iter()
            .map(|servers| json!(servers.iter().map(|s| s.key()).collect::<Vec<_>>()))
            .collect(),
    )
}

/// Decoding-set document: one map for every group, or one map per group in
/// the order of the grouping file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodingDoc {
    Shared(DecodingConfig),
    PerGroup(Vec<DecodingConfig>),
}

fn config_from_value(v: &Value, n: usize) -> Result<DecodingConfig> {
    let obj = v
        .as_object()
        .ok_or_else(|| format_err("decoding sets map receivers to lists of messages"))?;
    let mut config = DecodingConfig::new();
    let mut seen = BTreeSet::new();
    for (key, value) in obj {
        let j = receiver_key(key, n, "decoding")?;
        if !seen.insert(j) {
            return Err(dixc_core::Error::DuplicateReceiver(j + 1).into());
        }
        config.insert(j, index_list(value, n, &format!("decoding set of receiver {}", j + 1))?);
    }
    Ok(config)
}

pub fn decoding_from_json(text: &str, n: usize) -> Result<DecodingDoc> {
    let doc: Value = serde_json::from_str(text)?;
    match &doc {
        Value::Array(items) => Ok(DecodingDoc::PerGroup(
            items.iter().map(|v| config_from_value(v, n)).collect::<Result<_>>()?,
        )),
        _ => Ok(DecodingDoc::Shared(config_from_value(&doc, n)?)),
    }
}

pub fn config_to_json(config: &DecodingConfig) -> Value {
    let mut out = Map::new();
    for (j, d) in config.iter() {
        out.insert((j + 1).to_string(), json!(d.elements().map(|i| i + 1).collect::<Vec<_>>()));
    }
    Value::Object(out)
}

/// Restricts a shared configuration to each group's messages.
pub fn shared_per_group(config: &DecodingConfig, grouping: &ServerGrouping) -> Vec<DecodingConfig> {
    grouping
        .groups()
        .iter()
        .map(|g| config.restricted_to(messages_of(g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dixc_core::parse_problem;
    use dixc_core::rational::{frac, int};

    #[test]
    fn problem_document_round_trip() {
        let p = parse_problem("(1|4);(2|3,4);(3|1,2);(4|2,3)", &[(SubsetId::from_indices([1, 2]), frac(1, 2))]).unwrap();
        let text = problem_to_json(&p).to_string();
        assert_eq!(problem_from_json(&text).unwrap(), p);
    }

    #[test]
    fn capacities_default_to_one_and_print_by_size() {
        let p = problem_from_json(r#"{"n":3,"side_info":{"1":[],"2":[3],"3":[2]},"capacities":{"2,3":"1/2"}}"#).unwrap();
        assert_eq!(p.capacity(SubsetId::from_indices([1, 2])), frac(1, 2));
        assert_eq!(p.capacity(SubsetId::full(3)), int(1));
        let keys: Vec<String> = problem_to_json(&p)["capacities"]
            .as_object()
            .unwrap()
            .keys()
            .cloned()
            .collect();
        assert_eq!(keys, ["1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]);
    }

    #[test]
    fn problem_document_errors() {
        for bad in [
            r#"{"n":2,"side_info":{"1":[]}}"#,
            r#"{"n":2,"side_info":{"1":[1],"2":[]}}"#,
            r#"{"n":2,"side_info":{"1":[],"2":[]},"capacities":{"3":"1"}}"#,
            r#"{"n":2,"side_info":{"1":[],"2":[]},"capacities":{"1":"-1"}}"#,
            r#"{"n":2,"side_info":{"1":[],"2":[]},"capacities":{"1":"1/0"}}"#,
            r#"{"n":2,"side_info":{"1":[],"2":[3]}}"#,
            r#"{"n":0,"side_info":{}}"#,
            r#"[1,2]"#,
        ] {
            assert!(problem_from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn polyhedron_round_trip_keeps_origins() {
        let p = parse_problem("(1);(2|3);(3|2)", &[]).unwrap();
        let region = dixc_core::outer_region(&p, dixc_core::OuterBoundKind::Mais).unwrap();
        let text = polyhedron_to_json(&region).to_string();
        assert!(text.contains("\"origin\":\"mais:S=1,2\""));
        assert_eq!(polyhedron_from_json(&text).unwrap(), region);
    }

    #[test]
    fn decoding_documents() {
        let shared = decoding_from_json(r#"{"1":[1],"2":[1,2]}"#, 2).unwrap();
        let DecodingDoc::Shared(c) = shared else { panic!() };
        assert_eq!(c.get(1), Some(SubsetId::from_indices([0, 1])));
        let per = decoding_from_json(r#"[{"1":[1]},{"2":[2]}]"#, 2).unwrap();
        assert!(matches!(per, DecodingDoc::PerGroup(v) if v.len() == 2));
        assert!(decoding_from_json(r#"{"3":[1]}"#, 2).is_err());
    }

    #[test]
    fn weights_and_caps() {
        assert_eq!(parse_weights("1, 1/2,0", 3).unwrap(), vec![int(1), frac(1, 2), int(0)]);
        assert!(parse_weights("1,1", 3).is_err());
        assert_eq!(parse_cap("2,3=1/2").unwrap(), (SubsetId::from_indices([1, 2]), frac(1, 2)));
        assert!(parse_cap("2,3").is_err());
        assert!(parse_cap("0=1").is_err());
    }
}
