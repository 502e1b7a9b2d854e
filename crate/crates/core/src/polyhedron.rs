//! Linear constraint systems over named variables with exact coefficients.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::subset::SubsetId;

/// Identifies a variable of a region. Receiver indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableId {
    /// Message rate `R_j`.
    Rate(usize),
    /// Rate of message `j` carried by server group number `group`.
    GroupRate { receiver: usize, group: usize },
    /// Composite rate `C_{K,J}` of the virtual encoder for `K ⊆ J` at server `J`.
    Composite { part: SubsetId, server: SubsetId },
    /// Value `f_T(S)` of the set function attached to `T`.
    SetFn { domain: SubsetId, arg: SubsetId },
}

impl VariableId {
    pub fn is_rate(self) -> bool {
        matches!(self, VariableId::Rate(_))
    }

    /// Image under a relabeling of receivers (`i ↦ perm[i]`); group numbers are kept.
    pub fn permute(self, perm: &[usize]) -> VariableId {
        match self {
            VariableId::Rate(j) => VariableId::Rate(perm[j]),
            VariableId::GroupRate { receiver, group } => VariableId::GroupRate {
                receiver: perm[receiver],
                group,
            },
            VariableId::Composite { part, server } => VariableId::Composite {
                part: part.permute(perm),
                server: server.permute(perm),
            },
            VariableId::SetFn { domain, arg } => VariableId::SetFn {
                domain: domain.permute(perm),
                arg: arg.permute(perm),
            },
        }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableId::Rate(j) => write!(f, "R_{}", j + 1),
            VariableId::GroupRate { receiver, group } => {
                write!(f, "R_{}@P{}", receiver + 1, group + 1)
            }
            VariableId::Composite { part, server } => {
                write!(f, "C_{{{}|{}}}", part.key(), server.key())
            }
            VariableId::SetFn { domain, arg } => {
                write!(f, "f_{{{}}}({})", domain.key(), arg.key())
            }
        }
    }
}

impl FromStr for VariableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UndeclaredVariable(s.to_string());
        let index = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(bad()),
            }
        };
        if let Some(rest) = s.strip_prefix("R_") {
            return match rest.split_once("@P") {
                Some((j, g)) => Ok(VariableId::GroupRate {
                    receiver: index(j)?,
                    group: index(g)?,
                }),
                None => Ok(VariableId::Rate(index(rest)?)),
            };
        }
        if let Some(rest) = s.strip_prefix("C_{").and_then(|r| r.strip_suffix('}')) {
            let (k, j) = rest.split_once('|').ok_or_else(bad)?;
            let part = SubsetId::parse_key(k).ok_or_else(bad)?;
            let server = SubsetId::parse_key(j).ok_or_else(bad)?;
            return Ok(VariableId::Composite { part, server });
        }
        if let Some(rest) = s.strip_prefix("f_{").and_then(|r| r.strip_suffix(')')) {
            let (t, arg) = rest.split_once("}(").ok_or_else(bad)?;
            let domain = SubsetId::parse_key(t).ok_or_else(bad)?;
            let arg = SubsetId::parse_key(arg).ok_or_else(bad)?;
            return Ok(VariableId::SetFn { domain, arg });
        }
        Err(bad())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Le,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

pub type Coefficients = BTreeMap<VariableId, Rational>;

/// `Σ coeff·var (≤ | =) rhs`, stored sparsely (no zero coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearInequality {
    pub coefficients: Coefficients,
    pub relation: Relation,
    pub rhs: Rational,
    /// Where the row came from, e.g. `"mais:S=1,2"`. Not part of the math.
    pub origin: Option<String>,
}

impl LinearInequality {
    pub fn new<I>(terms: I, relation: Relation, rhs: Rational) -> Self
    where
        I: IntoIterator<Item = (VariableId, Rational)>,
    {
        let mut coefficients = Coefficients::new();
        for (v, c) in terms {
            *coefficients.entry(v).or_insert_with(Rational::zero) += c;
        }
        coefficients.retain(|_, c| !c.is_zero());
        LinearInequality {
            coefficients,
            relation,
            rhs,
            origin: None,
        }
    }

    pub fn le<I>(terms: I, rhs: Rational) -> Self
    where
        I: IntoIterator<Item = (VariableId, Rational)>,
    {
        Self::new(terms, Relation::Le, rhs)
    }

    pub fn eq<I>(terms: I, rhs: Rational) -> Self
    where
        I: IntoIterator<Item = (VariableId, Rational)>,
    {
        Self::new(terms, Relation::Eq, rhs)
    }

    /// `Σ vars ≤ rhs` with unit coefficients.
    pub fn sum_le<I: IntoIterator<Item = VariableId>>(vars: I, rhs: Rational) -> Self {
        Self::le(vars.into_iter().map(|v| (v, Rational::one())), rhs)
    }

    /// `-var ≤ 0`.
    pub fn nonnegative(var: VariableId) -> Self {
        Self::le([(var, -Rational::one())], Rational::zero())
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }

    pub fn coefficient(&self, var: &VariableId) -> Rational {
        self.coefficients
            .get(var)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// True for the row `-x ≤ 0` on a single variable.
    pub fn nonnegativity_of(&self) -> Option<VariableId> {
        if self.relation != Relation::Le || !self.rhs.is_zero() || self.coefficients.len() != 1 {
            return None;
        }
        let (v, c) = self.coefficients.iter().next()?;
        c.is_negative().then_some(*v)
    }

    /// Left-hand side evaluated at `point`; missing variables read as zero.
    pub fn lhs_at(&self, point: &BTreeMap<VariableId, Rational>) -> Rational {
        self.coefficients
            .iter()
            .filter_map(|(v, c)| point.get(v).map(|x| c * x))
            .sum()
    }

    pub fn is_satisfied_by(&self, point: &BTreeMap<VariableId, Rational>) -> bool {
        let lhs = self.lhs_at(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Scales by a positive factor so the coefficients and rhs are coprime
    /// integers. Rows describing the same half-space normalize identically.
    pub fn normalized(&self) -> LinearInequality {
        let mut lcm = BigInt::one();
        for c in self.coefficients.values().chain(core::iter::once(&self.rhs)) {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.coefficients.values() {
            gcd = gcd.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        if self.coefficients.is_empty() {
            gcd = (self.rhs.numer() * (&lcm / self.rhs.denom())).abs();
        }
        if gcd.is_zero() {
            gcd = BigInt::one();
        }
        let mut scale = Rational::new(lcm, gcd);
        if self.relation == Relation::Eq {
            // Fix the sign of an equality by its leading coefficient.
            if let Some((_, c)) = self.coefficients.iter().next() {
                if c.is_negative() {
                    scale = -scale;
                }
            }
        }
        LinearInequality {
            coefficients: self
                .coefficients
                .iter()
                .map(|(v, c)| (*v, c * &scale))
                .collect(),
            relation: self.relation,
            rhs: &self.rhs * &scale,
            origin: self.origin.clone(),
        }
    }

    /// True when the row has no variables (it reads `0 ≤ rhs` or `0 = rhs`).
    pub fn is_constant(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Whether a constant row holds.
    pub fn constant_holds(&self) -> bool {
        match self.relation {
            Relation::Le => !self.rhs.is_negative(),
            Relation::Eq => self.rhs.is_zero(),
        }
    }

    pub fn permute(&self, perm: &[usize]) -> LinearInequality {
        LinearInequality {
            coefficients: self
                .coefficients
                .iter()
                .map(|(v, c)| (v.permute(perm), c.clone()))
                .collect(),
            relation: self.relation,
            rhs: self.rhs.clone(),
            origin: self.origin.clone(),
        }
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            f.write_str("0")?;
        }
        for (pos, (v, c)) in self.coefficients.iter().enumerate() {
            let mag = c.abs();
            match (pos, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", rational::render(&mag))?;
            }
            write!(f, "{v}")?;
        }
        write!(f, " {} {}", self.relation.symbol(), rational::render(&self.rhs))
    }
}

/// A finite system of linear constraints over an ordered list of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polyhedron {
    variables: Vec<VariableId>,
    constraints: Vec<LinearInequality>,
}

impl Polyhedron {
    pub fn new(variables: Vec<VariableId>) -> Self {
        let mut seen = variables.clone();
        seen.sort();
        seen.dedup();
        debug_assert_eq!(seen.len(), variables.len(), "duplicate variables");
        Polyhedron {
            variables,
            constraints: Vec::new(),
        }
    }

    /// Declares the variables and adds `var ≥ 0` for each.
    pub fn nonnegative(variables: Vec<VariableId>) -> Self {
        let mut p = Polyhedron::new(variables);
        for v in p.variables.clone() {
            p.constraints.push(LinearInequality::nonnegative(v));
        }
        p
    }

    pub fn from_parts(
        variables: Vec<VariableId>,
        constraints: Vec<LinearInequality>,
    ) -> Result<Self> {
        let mut p = Polyhedron::new(variables);
        for c in constraints {
            p.push(c)?;
        }
        Ok(p)
    }

    pub fn variables(&self) -> &[VariableId] {
        &self.variables
    }

    pub fn constraints(&self) -> &[LinearInequality] {
        &self.constraints
    }

    pub fn is_declared(&self, var: &VariableId) -> bool {
        self.variables.contains(var)
    }

    /// Adds a constraint after checking that it only uses declared variables.
    pub fn push(&mut self, row: LinearInequality) -> Result<()> {
        if let Some(v) = row.coefficients.keys().find(|v| !self.is_declared(v)) {
            return Err(Error::UndeclaredVariable(v.to_string()));
        }
        self.constraints.push(row);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, row: LinearInequality) {
        debug_assert!(row.coefficients.keys().all(|v| self.is_declared(v)));
        self.constraints.push(row);
    }

    pub fn contains(&self, point: &BTreeMap<VariableId, Rational>) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    /// Same variables, constraints replaced.
    pub fn with_constraints(&self, constraints: Vec<LinearInequality>) -> Polyhedron {
        Polyhedron {
            variables: self.variables.clone(),
            constraints,
        }
    }

    /// Constraints of both systems over the union of their variables.
    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut variables = self.variables.clone();
        for v in &other.variables {
            if !variables.contains(v) {
                variables.push(*v);
            }
        }
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        Polyhedron {
            variables,
            constraints,
        }
    }

    /// Image under a relabeling of receivers.
    pub fn permute(&self, perm: &[usize]) -> Polyhedron {
        Polyhedron {
            variables: self.variables.iter().map(|v| v.permute(perm)).collect(),
            constraints: self.constraints.iter().map(|c| c.permute(perm)).collect(),
        }
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn variable_names_round_trip() {
        let vars = [
            VariableId::Rate(0),
            VariableId::GroupRate {
                receiver: 2,
                group: 4,
            },
            VariableId::Composite {
                part: SubsetId::from_indices([0]),
                server: SubsetId::from_indices([0, 2]),
            },
            VariableId::SetFn {
                domain: SubsetId::from_indices([0, 1]),
                arg: SubsetId::EMPTY,
            },
        ];
        for v in vars {
            let name = v.to_string();
            assert_eq!(name.parse::<VariableId>().unwrap(), v, "{name}");
        }
        assert_eq!(VariableId::Rate(0).to_string(), "R_1");
        assert!("R_0".parse::<VariableId>().is_err());
        assert!("x".parse::<VariableId>().is_err());
    }

    #[test]
    fn normalization_is_scale_invariant() {
        let x = VariableId::Rate(0);
        let y = VariableId::Rate(1);
        let a = LinearInequality::le([(x, frac(1, 2)), (y, frac(3, 2))], int(2));
        let b = LinearInequality::le([(x, int(2)), (y, int(6))], int(8));
        assert_eq!(a.normalized(), b.normalized());
        assert_eq!(a.normalized().coefficient(&y), int(3));
        let e = LinearInequality::eq([(x, int(-2))], int(4)).normalized();
        assert_eq!(e.coefficient(&x), int(1));
        assert_eq!(e.rhs, int(-2));
    }

    #[test]
    fn push_rejects_undeclared() {
        let mut p = Polyhedron::new(alloc::vec![VariableId::Rate(0)]);
        assert!(p
            .push(LinearInequality::nonnegative(VariableId::Rate(1)))
            .is_err());
        assert!(p.push(LinearInequality::nonnegative(VariableId::Rate(0))).is_ok());
    }

    #[test]
    fn display_is_readable() {
        let row = LinearInequality::le(
            [(VariableId::Rate(0), int(1)), (VariableId::Rate(1), int(-2))],
            frac(3, 2),
        );
        assert_eq!(row.to_string(), "R_1 - 2*R_2 <= 3/2");
    }
}
