//! Distributed index coding problem instances.
//!
//! Receivers and messages are zero-based in the API (`0..n`) and 1-based in
//! every textual form. Receiver `j` wants message `j` and knows the messages
//! in its side-information set `A_j`; server `J` holds the messages in `J`
//! and owns a broadcast link of capacity `C_J`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subset::SubsetId;

/// Largest supported receiver count.
pub const MAX_RECEIVERS: usize = 6;

/// Largest `n` accepted by [`enumerate_problems`].
pub const MAX_ENUMERATE: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    n: usize,
    side_info: Vec<SubsetId>,
    // Indexed by server mask - 1.
    capacities: Vec<Rational>,
}

impl ProblemInstance {
    /// Validates and builds an instance. `capacities[mask - 1]` is `C_J` for the
    /// server whose message set has bitmask `mask`.
    pub fn new(n: usize, side_info: Vec<SubsetId>, capacities: Vec<Rational>) -> Result<Self> {
        if n == 0 || n > MAX_RECEIVERS {
            return Err(Error::UnsupportedSize {
                n,
                max: MAX_RECEIVERS,
            });
        }
        if side_info.len() != n {
            return Err(Error::MissingReceiver(side_info.len().min(n) + 1));
        }
        for (j, a) in side_info.iter().enumerate() {
            if a.contains(j) {
                return Err(Error::SelfSideInfo(j + 1));
            }
            if let Some(bad) = a.difference(SubsetId::full(n)).first() {
                return Err(Error::SideInfoOutOfRange {
                    receiver: j + 1,
                    message: bad + 1,
                });
            }
        }
        if capacities.len() != (1 << n) - 1 {
            return Err(Error::BadCapacityKey(alloc::format!(
                "expected {} capacities, got {}",
                (1usize << n) - 1,
                capacities.len()
            )));
        }
        for (idx, c) in capacities.iter().enumerate() {
            if c.is_negative() {
                return Err(Error::NegativeCapacity(
                    SubsetId::from_mask((idx + 1) as u16).key(),
                ));
            }
        }
        Ok(ProblemInstance {
            n,
            side_info,
            capacities,
        })
    }

    /// Instance with every `C_J = 1`.
    pub fn unit(n: usize, side_info: Vec<SubsetId>) -> Result<Self> {
        let caps = vec![Rational::one(); (1usize << n.min(MAX_RECEIVERS)) - 1];
        Self::new(n, side_info, caps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side_info(&self, j: usize) -> SubsetId {
        self.side_info[j]
    }

    pub fn side_infos(&self) -> &[SubsetId] {
        &self.side_info
    }

    /// `C_J`; zero for the empty set.
    pub fn capacity(&self, server: SubsetId) -> Rational {
        if server.is_empty() {
            Rational::zero()
        } else {
            self.capacities[server.mask() as usize - 1].clone()
        }
    }

    pub fn capacities(&self) -> &[Rational] {
        &self.capacities
    }

    /// Replaces `C_J`. Fails for an empty or out-of-range key or a negative value.
    pub fn set_capacity(&mut self, server: SubsetId, value: Rational) -> Result<()> {
        if server.is_empty() || !server.fits(self.n) {
            return Err(Error::BadCapacityKey(server.key()));
        }
        if value.is_negative() {
            return Err(Error::NegativeCapacity(server.key()));
        }
        self.capacities[server.mask() as usize - 1] = value;
        Ok(())
    }

    /// Every server `J` (nonempty subset of `[n]`), ascending by mask.
    pub fn servers(&self) -> impl Iterator<Item = SubsetId> {
        SubsetId::all_nonempty(self.n)
    }

    /// `Σ_{J : J ∩ S ≠ ∅} C_J`, the total capacity of servers touching `S`.
    pub fn capacity_meeting(&self, set: SubsetId) -> Rational {
        self.servers()
            .filter(|j| j.intersects(set))
            .map(|j| self.capacity(j))
            .sum()
    }

    /// True when every capacity equals one.
    pub fn has_unit_capacities(&self) -> bool {
        self.capacities.iter().all(|c| c.is_one())
    }

    /// Interfering messages of receiver `j`: `[n] \ (A_j ∪ {j})`.
    pub fn interfering_set(&self, j: usize) -> Result<SubsetId> {
        if j >= self.n {
            return Err(Error::ReceiverOutOfRange {
                index: j,
                n: self.n,
            });
        }
        Ok(self.interfering(j))
    }

    pub(crate) fn interfering(&self, j: usize) -> SubsetId {
        SubsetId::full(self.n)
            .difference(self.side_info[j])
            .without(j)
    }

    /// True when the side-information graph restricted to `set` has no
    /// directed cycle. The graph has an edge `i → j` whenever `i ∈ A_j`.
    pub fn is_acyclic_induced(&self, set: SubsetId) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done.
        let mut state = [0u8; MAX_RECEIVERS];
        for start in set.elements() {
            if state[start] == 0 && self.has_cycle_from(start, set, &mut state) {
                return false;
            }
        }
        true
    }

    fn has_cycle_from(&self, v: usize, set: SubsetId, state: &mut [u8; MAX_RECEIVERS]) -> bool {
        state[v] = 1;
        // Successors of v: receivers w in the set that know message v.
        for w in set.elements() {
            if !self.side_info[w].contains(v) {
                continue;
            }
            if state[w] == 1 || (state[w] == 0 && self.has_cycle_from(w, set, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }

    /// Relabels receivers and messages: label `i` becomes `perm[i]`. Capacity
    /// keys move with the relabeling, so `C'_{σ(J)} = C_J`.
    pub fn permuted(&self, perm: &[usize]) -> ProblemInstance {
        debug_assert!(is_permutation(perm, self.n));
        let mut side_info = vec![SubsetId::EMPTY; self.n];
        for (j, a) in self.side_info.iter().enumerate() {
            side_info[perm[j]] = a.permute(perm);
        }
        let mut capacities = vec![Rational::zero(); self.capacities.len()];
        for server in self.servers() {
            capacities[server.permute(perm).mask() as usize - 1] = self.capacity(server);
        }
        ProblemInstance {
            n: self.n,
            side_info,
            capacities,
        }
    }

    /// Compact notation, receivers in order: `(1|3);(2|1);(3|2)`.
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        for (j, a) in self.side_info.iter().enumerate() {
            if j > 0 {
                out.push(';');
            }
            out.push('(');
            out.push_str(&(j + 1).to_string());
            if !a.is_empty() {
                out.push('|');
                out.push_str(&a.key());
            }
            out.push(')');
        }
        out
    }

    fn encoding_cmp(&self, other: &Self) -> Ordering {
        self.side_info
            .iter()
            .map(|s| s.mask())
            .cmp(other.side_info.iter().map(|s| s.mask()))
            .then_with(|| self.capacities.cmp(&other.capacities))
    }

    /// Lexicographically smallest relabeling together with the permutation
    /// producing it (`canonical == self.permuted(&perm)`). Two instances are
    /// isomorphic exactly when their canonical forms coincide.
    pub fn canonical_form(&self) -> (ProblemInstance, Vec<usize>) {
        let mut best: Option<(ProblemInstance, Vec<usize>)> = None;
        for perm in permutations(self.n) {
            let cand = self.permuted(&perm);
            let better = match &best {
                None => true,
                Some((b, _)) => cand.encoding_cmp(b) == Ordering::Less,
            };
            if better {
                best = Some((cand, perm));
            }
        }
        best.expect("n >= 1 has at least one permutation")
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

/// Nonnegative rate tuple `(R_1, …, R_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateVector(Vec<Rational>);

impl RateVector {
    pub fn new(rates: Vec<Rational>) -> Option<Self> {
        rates
            .iter()
            .all(|r| !r.is_negative())
            .then_some(RateVector(rates))
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

/// Parses compact notation such as `"(1);(2|3);(3|2)"`. Capacities default to
/// one; `overrides` replaces individual `C_J`.
pub fn parse_problem(text: &str, overrides: &[(SubsetId, Rational)]) -> Result<ProblemInstance> {
    let receivers = Parser::new(text).receivers()?;
    let n = receivers.len();
    if n > MAX_RECEIVERS {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_RECEIVERS,
        });
    }
    let mut side_info = vec![None; n];
    for (id, known) in receivers {
        if id == 0 || id > n {
            return Err(Error::MissingReceiver(
                (1..=n)
                    .find(|k| side_info[k - 1].is_none())
                    .unwrap_or(n),
            ));
        }
        if side_info[id - 1].is_some() {
            return Err(Error::DuplicateReceiver(id));
        }
        let mut set = SubsetId::EMPTY;
        for m in known {
            if m == id {
                return Err(Error::SelfSideInfo(id));
            }
            if m == 0 || m > n {
                return Err(Error::SideInfoOutOfRange {
                    receiver: id,
                    message: m,
                });
            }
            set = set.with(m - 1);
        }
        side_info[id - 1] = Some(set);
    }
    let side_info: Vec<SubsetId> = side_info
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.ok_or(Error::MissingReceiver(k + 1)))
        .collect::<Result<_>>()?;
    let mut problem = ProblemInstance::unit(n, side_info)?;
    for (server, value) in overrides {
        problem.set_capacity(*server, value.clone())?;
    }
    Ok(problem)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn fail<T>(&self, reason: &str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            reason: reason.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a receiver or message index");
        }
        let digits = core::str::from_utf8(&self.text[start..self.pos]).unwrap_or("");
        match digits.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.fail("index too large"),
        }
    }

    fn receiver(&mut self) -> Result<(usize, Vec<usize>)> {
        if !self.eat(b'(') {
            return self.fail("expected '('");
        }
        let id = self.number()?;
        let mut known = Vec::new();
        if self.eat(b'|') {
            known.push(self.number()?);
            while self.eat(b',') {
                known.push(self.number()?);
            }
        }
        if !self.eat(b')') {
            return self.fail("expected ')'");
        }
        let mut sorted = known.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return self.fail("repeated side-information index");
        }
        Ok((id, known))
    }

    fn receivers(mut self) -> Result<Vec<(usize, Vec<usize>)>> {
        let mut out = vec![self.receiver()?];
        while self.eat(b';') {
            out.push(self.receiver()?);
        }
        self.skip_ws();
        if self.pos != self.text.len() {
            return self.fail("trailing input");
        }
        Ok(out)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let pivot = i - 1;
        let k = (i..n).rev().find(|&k| cur[k] > cur[pivot]).unwrap();
        cur.swap(pivot, k);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    perm.len() == n && SubsetId::from_indices(perm.iter().copied()) == SubsetId::full(n)
}

/// Every unit-capacity problem on `n` receivers, or one canonical
/// representative per isomorphism class (sorted by canonical encoding).
pub fn enumerate_problems(n: usize, up_to_iso: bool) -> Result<Vec<ProblemInstance>> {
    if n == 0 || n > MAX_ENUMERATE {
        return Err(Error::UnsupportedSize {
            n,
            max: MAX_ENUMERATE,
        });
    }
    let per = 1usize << (n - 1);
    let total = per.pow(n as u32);
    let mut all = Vec::with_capacity(total);
    for code in 0..total {
        let mut rest = code;
        let side_info = (0..n)
            .map(|j| {
                let digit = rest % per;
                rest /= per;
                spread_skipping(digit, j)
            })
            .collect();
        all.push(ProblemInstance::unit(n, side_info)?);
    }
    if !up_to_iso {
        return Ok(all);
    }
    let mut reps: Vec<ProblemInstance> = all.iter().map(|p| p.canonical_form().0).collect();
    reps.sort_by(|a, b| a.encoding_cmp(b));
    reps.dedup();
    Ok(reps)
}

// Maps the bits of `digit` onto positions other than `skip`.
fn spread_skipping(digit: usize, skip: usize) -> SubsetId {
    let mut set = SubsetId::EMPTY;
    let mut pos = 0;
    let mut bits = digit;
    while bits != 0 {
        if pos == skip {
            pos += 1;
            continue;
        }
        if bits & 1 == 1 {
            set = set.with(pos);
        }
        bits >>= 1;
        pos += 1;
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(text: &str) -> ProblemInstance {
        parse_problem(text, &[]).unwrap()
    }

    fn set(ids: &[usize]) -> SubsetId {
        SubsetId::from_indices(ids.iter().map(|i| i - 1))
    }

    #[test]
    fn parses_compact_notation() {
        let q = p("(1);(2|3);(3|2)");
        assert_eq!(q.n(), 3);
        assert_eq!(q.side_infos(), &[set(&[]), set(&[3]), set(&[2])]);
        assert!(q.has_unit_capacities());
        assert_eq!(q.capacities().len(), 7);

        let single = p("(1)");
        assert_eq!(single.n(), 1);
        assert_eq!(single.capacity(set(&[1])), int(1));

        // Order of receivers and whitespace are free.
        assert_eq!(p(" (2 | 3) ; (3|2);(1) "), q);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(parse_problem("(1", &[]), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("", &[]), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("(1);(2)x", &[]), Err(Error::Syntax { .. })));
        assert!(matches!(parse_problem("(1|)", &[]), Err(Error::Syntax { .. })));
        assert_eq!(
            parse_problem("(1);(1)", &[]),
            Err(Error::DuplicateReceiver(1))
        );
        assert_eq!(
            parse_problem("(1);(3)", &[]),
            Err(Error::MissingReceiver(2))
        );
        assert_eq!(parse_problem("(1|1)", &[]), Err(Error::SelfSideInfo(1)));
        assert!(matches!(
            parse_problem("(1|4);(2)", &[]),
            Err(Error::SideInfoOutOfRange { .. })
        ));
        assert!(matches!(
            parse_problem("(1);(2)", &[(set(&[1]), int(-1))]),
            Err(Error::NegativeCapacity(_))
        ));
        assert!(matches!(
            parse_problem("(1);(2)", &[(set(&[3]), int(1))]),
            Err(Error::BadCapacityKey(_))
        ));
        assert!(matches!(
            parse_problem("(1);(2)", &[(SubsetId::EMPTY, int(1))]),
            Err(Error::BadCapacityKey(_))
        ));
    }

    #[test]
    fn overrides_apply() {
        let q = parse_problem("(1);(2|1)", &[(set(&[1, 2]), frac(1, 2))]).unwrap();
        assert_eq!(q.capacity(set(&[1, 2])), frac(1, 2));
        assert_eq!(q.capacity(set(&[1])), int(1));
    }

    #[test]
    fn compact_round_trip() {
        for text in ["(1|4);(2|3,4);(3|1,2);(4|2,3)", "(1)", "(1);(2|3);(3|2)"] {
            let q = p(text);
            assert_eq!(q.to_compact(), text);
            assert_eq!(p(&q.to_compact()), q);
        }
    }

    #[test]
    fn interfering_sets() {
        assert_eq!(p("(1);(2|3);(3|2)").interfering_set(0).unwrap(), set(&[2, 3]));
        assert_eq!(
            p("(1|2,3);(2|1,3);(3|1,2)").interfering_set(1).unwrap(),
            SubsetId::EMPTY
        );
        assert_eq!(
            p("(1|4);(2|3,4);(3|1,2);(4|2,3)").interfering_set(1).unwrap(),
            set(&[1])
        );
        assert!(matches!(
            p("(1)").interfering_set(1),
            Err(Error::ReceiverOutOfRange { .. })
        ));
    }

    #[test]
    fn acyclicity() {
        let q = p("(1);(2|3);(3|2)");
        assert!(!q.is_acyclic_induced(set(&[2, 3])));
        assert!(q.is_acyclic_induced(set(&[1, 2])));
        assert!(q.is_acyclic_induced(SubsetId::EMPTY));
        let cyc = p("(1|3);(2|1);(3|2)");
        assert!(!cyc.is_acyclic_induced(set(&[1, 2, 3])));
        for pair in [[1, 2], [1, 3], [2, 3]] {
            assert!(cyc.is_acyclic_induced(set(&pair)));
        }
        for i in 1..=3 {
            assert!(cyc.is_acyclic_induced(set(&[i])));
        }
    }

    #[test]
    fn permutations_count_and_order() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms[0], [0, 1, 2]);
        assert_eq!(perms[5], [2, 1, 0]);
        assert_eq!(permutations(1), [[0]]);
    }

    #[test]
    fn canonical_forms() {
        let (a, pa) = p("(1|2);(2);(3)").canonical_form();
        let (b, _) = p("(1);(2|3);(3)").canonical_form();
        assert_eq!(a, b);
        assert_eq!(p("(1|2);(2);(3)").permuted(&pa), a);
        assert_ne!(
            p("(1);(2|3);(3|2)").canonical_form().0,
            p("(1|3);(2|3);(3|2)").canonical_form().0
        );
    }

    #[test]
    fn permuted_moves_capacities() {
        let q = parse_problem("(1);(2)", &[(set(&[1]), int(5))]).unwrap();
        let r = q.permuted(&[1, 0]);
        assert_eq!(r.capacity(set(&[2])), int(5));
        assert_eq!(r.capacity(set(&[1])), int(1));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_problems(1, false).unwrap().len(), 1);
        assert_eq!(enumerate_problems(3, false).unwrap().len(), 64);
        assert_eq!(enumerate_problems(2, true).unwrap().len(), 3);
        assert_eq!(enumerate_problems(4, false).unwrap().len(), 4096);
        assert!(enumerate_problems(5, false).is_err());
        assert!(enumerate_problems(0, true).is_err());
    }

    #[test]
    fn capacity_meeting_sums_touching_servers() {
        let q = p("(1);(2|3);(3|2)");
        assert_eq!(q.capacity_meeting(set(&[1])), int(4));
        assert_eq!(q.capacity_meeting(set(&[1, 2])), int(6));
        assert_eq!(q.capacity_meeting(set(&[1, 2, 3])), int(7));
    }
}
