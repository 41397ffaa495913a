//! BNSI problem instances: `m` users over `n` messages, user `i` demanding
//! `X_i` and holding a copy of `x_{X_i}` with at most `delta_s` symbol errors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::sets::{IndexSet, MAX_INDEX};
use crate::space::{self, all_vectors, support};

/// Largest `q^n` for which the interfering set is enumerated.
pub const INTERFERING_GUARD: u128 = 1 << 28;

#[derive(Clone, PartialEq, Eq)]
pub struct BnsiProblem {
    field: Field,
    n: usize,
    demands: Vec<IndexSet>,
    delta_s: usize,
}

/// One failed invariant, located by a path such as `demands[2]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Problem as written in a file, before validation. Indices are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProblem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    pub n: i64,
    pub delta_s: i64,
    pub demands: Vec<Vec<i64>>,
}

/// Check every invariant of a raw problem, collecting all violations.
pub fn validate_problem(raw: &RawProblem) -> std::result::Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    match (raw.q, raw.p, raw.k) {
        (Some(q), None, None) => {
            if let Err(e) = u32::try_from(q).map_err(|_| Error::UnsupportedField(format!("q = {q}"))).and_then(FieldSpec::from_order) {
                v.push(Violation::new("q", e.to_string()));
            }
        }
        (None, Some(p), Some(k)) => {
            let spec = u32::try_from(p)
                .and_then(|p| u32::try_from(k).map(|k| (p, k)))
                .map_err(|_| Error::UnsupportedField(format!("p = {p}, k = {k}")))
                .and_then(|(p, k)| FieldSpec::new(p, k));
            if let Err(e) = spec {
                v.push(Violation::new("p,k", e.to_string()));
            }
        }
        (Some(_), _, _) => v.push(Violation::new("q", "give either q or the pair p, k, not both")),
        _ => v.push(Violation::new("q", "missing field size (q, or p and k)")),
    }
    if raw.n < 1 {
        v.push(Violation::new("n", "message count must be at least 1"));
    } else if raw.n as usize > MAX_INDEX {
        v.push(Violation::new("n", format!("message count {} exceeds the supported maximum {MAX_INDEX}", raw.n)));
    }
    if raw.delta_s < 0 {
        v.push(Violation::new("delta_s", "must be non-negative"));
    }
    for (i, x) in raw.demands.iter().enumerate() {
        let path = format!("demands[{}]", i + 1);
        if x.is_empty() {
            v.push(Violation::new(&path, "empty demand set"));
        }
        for &j in x {
            if j < 1 || j > raw.n {
                v.push(Violation::new(&path, format!("index {j} out of range 1..={}", raw.n)));
            }
        }
        let mut sorted = x.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            v.push(Violation::new(&path, format!("duplicate index {}", w[0])));
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

impl BnsiProblem {
    /// Build from 0-based demand sets.
    pub fn new(field: Field, n: usize, demands: Vec<IndexSet>, delta_s: usize) -> Result<Self> {
        let mut v = Vec::new();
        if n == 0 || n > MAX_INDEX {
            v.push(Violation::new("n", format!("message count must be in 1..={MAX_INDEX}")));
        }
        let all = if n <= MAX_INDEX { IndexSet::full(n) } else { IndexSet::full(MAX_INDEX) };
        for (i, x) in demands.iter().enumerate() {
            let path = format!("demands[{}]", i + 1);
            if x.is_empty() {
                v.push(Violation::new(&path, "empty demand set"));
            }
            if let Some(j) = x.difference(all).min() {
                v.push(Violation::new(&path, format!("index {} out of range 1..={n}", j + 1)));
            }
        }
        if !v.is_empty() {
            return Err(Error::InvalidProblem(v));
        }
        Ok(BnsiProblem { field, n, demands, delta_s })
    }

    /// Build from 1-based demand lists over `GF(q)`; handy for tests and examples.
    pub fn from_one_based(q: u32, n: usize, demands: &[&[usize]], delta_s: usize) -> Result<Self> {
        let raw = RawProblem {
            q: Some(q as i64),
            n: n as i64,
            delta_s: delta_s as i64,
            demands: demands.iter().map(|x| x.iter().map(|&j| j as i64).collect()).collect(),
            ..RawProblem::default()
        };
        BnsiProblem::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawProblem) -> Result<Self> {
        validate_problem(raw).map_err(Error::InvalidProblem)?;
        let spec = match raw.q {
            Some(q) => FieldSpec::from_order(q as u32)?,
            None => FieldSpec::new(raw.p.unwrap_or(0) as u32, raw.k.unwrap_or(0) as u32)?,
        };
        let demands = raw
            .demands
            .iter()
            .map(|x| x.iter().map(|&j| j as usize - 1).collect())
            .collect();
        BnsiProblem::new(Field::new(spec), raw.n as usize, demands, raw.delta_s as usize)
    }

    /// Canonical raw form: `q` key, each demand list sorted ascending.
    pub fn to_raw(&self) -> RawProblem {
        RawProblem {
            q: Some(self.field.order() as i64),
            p: None,
            k: None,
            n: self.n as i64,
            delta_s: self.delta_s as i64,
            demands: self
                .demands
                .iter()
                .map(|x| x.to_one_based().into_iter().map(|j| j as i64).collect())
                .collect(),
        }
    }

    /// Parse the TOML problem format; errors carry 1-based line numbers.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawProblem = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(1, |s| line_of(text, s.start)),
            message: e.message().to_string(),
        })?;
        BnsiProblem::from_raw(&raw)
    }

    pub fn to_toml(&self) -> String {
        let demands: Vec<String> = self
            .demands
            .iter()
            .map(|x| {
                let items: Vec<String> = x.to_one_based().iter().map(|j| j.to_string()).collect();
                format!("  [{}],", items.join(", "))
            })
            .collect();
        format!(
            "q = {}\nn = {}\ndelta_s = {}\ndemands = [\n{}\n]\n",
            self.field.order(),
            self.n,
            self.delta_s,
            demands.join("\n")
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.demands.len()
    }

    pub fn delta_s(&self) -> usize {
        self.delta_s
    }

    /// `2 * delta_s`, the weight window of the interfering set.
    pub fn two_delta(&self) -> usize {
        2 * self.delta_s
    }

    pub fn demands(&self) -> &[IndexSet] {
        &self.demands
    }

    /// `X_i` (0-based user index).
    pub fn demand(&self, i: usize) -> IndexSet {
        self.demands[i]
    }

    /// `Y_i = [n] \ X_i`.
    pub fn interference(&self, i: usize) -> IndexSet {
        self.all().difference(self.demands[i])
    }

    pub fn all(&self) -> IndexSet {
        IndexSet::full(self.n)
    }

    /// Same problem over a different field.
    pub fn with_field(&self, field: Field) -> BnsiProblem {
        BnsiProblem { field, ..self.clone() }
    }

    /// Non-fatal remarks: users with identical demand sets.
    pub fn lints(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in 0..self.m() {
            if let Some(j) = (0..i).find(|&j| self.demands[j] == self.demands[i]) {
                out.push(format!("user {} has the same demand set as user {}", i + 1, j + 1));
            }
        }
        let demanded = self.demands.iter().fold(IndexSet::EMPTY, |a, &x| a.union(x));
        for j in self.all().difference(demanded).iter() {
            out.push(format!("message {} is demanded by no user", j + 1));
        }
        out
    }

    pub fn bipartite(&self) -> BipartiteView {
        let users: Vec<Vec<usize>> = self.demands.iter().map(|x| x.to_vec()).collect();
        let mut packets = vec![Vec::new(); self.n];
        for (i, x) in self.demands.iter().enumerate() {
            for j in x.iter() {
                packets[j].push(i);
            }
        }
        BipartiteView { users, packets }
    }

    /// Whether some `z` with this support lies in the interfering set.
    /// Membership depends only on the support.
    pub fn support_interferes(&self, supp: IndexSet) -> bool {
        let hi = self.two_delta();
        self.demands.iter().any(|x| {
            let w = x.intersection(supp).len();
            w >= 1 && w <= hi
        })
    }

    /// Enumerate `I = U_i { z : 1 <= wt(z_{X_i}) <= 2 delta_s }` lexicographically.
    pub fn interfering_set(&self) -> Result<impl Iterator<Item = Vec<crate::field::Elem>> + '_> {
        space::guard_space("interfering set (q^n)", self.q(), self.n, INTERFERING_GUARD)?;
        Ok(all_vectors(self.q(), self.n).filter(move |z| self.support_interferes(support(z))))
    }

    /// Restrict to the messages in `keep`, re-indexed in ascending order.
    /// Users whose demands miss `keep` entirely are dropped.
    pub fn induced_subproblem(&self, keep: IndexSet) -> Result<Induced> {
        let keep = keep.intersection(self.all());
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut index_map = vec![None; self.n];
        for (new, old) in keep.iter().enumerate() {
            index_map[old] = Some(new);
        }
        let mut demands = Vec::new();
        let mut users = Vec::new();
        for (i, x) in self.demands.iter().enumerate() {
            let kept = x.intersection(keep);
            if !kept.is_empty() {
                demands.push(kept.iter().map(|j| index_map[j].unwrap()).collect());
                users.push(i);
            }
        }
        let problem = BnsiProblem { field: self.field.clone(), n: keep.len(), demands, delta_s: self.delta_s };
        Ok(Induced { problem, index_map, users })
    }
}

/// An induced subproblem plus the maps back to the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub problem: BnsiProblem,
    /// `index_map[old] = Some(new)` for kept messages.
    pub index_map: Vec<Option<usize>>,
    /// Parent index of each retained user.
    pub users: Vec<usize>,
}

/// The bipartite graph `B = (U, P, E)` with adjacency in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteView {
    /// Packets demanded by each user.
    pub users: Vec<Vec<usize>>,
    /// Users demanding each packet.
    pub packets: Vec<Vec<usize>>,
}

impl BipartiteView {
    pub fn edge_count(&self) -> usize {
        self.users.iter().map(Vec::len).sum()
    }

    pub fn user_degree(&self, i: usize) -> usize {
        self.users[i].len()
    }
}

impl fmt::Debug for BnsiProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BnsiProblem")
            .field("field", &self.field)
            .field("n", &self.n)
            .field("delta_s", &self.delta_s)
            .field("demands", &self.demands)
            .finish()
    }
}

impl fmt::Display for BnsiProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BNSI over {}: m = {}, n = {}, delta_s = {}", self.field, self.m(), self.n, self.delta_s)?;
        for (i, x) in self.demands.iter().enumerate() {
            write!(f, "\n  X_{} = {}", i + 1, x)?;
        }
        Ok(())
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_users() -> BnsiProblem {
        BnsiProblem::from_one_based(2, 4, &[&[1, 2, 3], &[2, 3, 4], &[1, 3, 4]], 1).unwrap()
    }

    fn raw(demands: Vec<Vec<i64>>) -> RawProblem {
        RawProblem { q: Some(2), n: 4, delta_s: 1, demands, ..RawProblem::default() }
    }

    #[test]
    fn validation() {
        assert!(validate_problem(&three_users().to_raw()).is_ok());
        let errs = validate_problem(&raw(vec![vec![1], vec![]])).unwrap_err();
        assert_eq!(errs, vec![Violation::new("demands[2]", "empty demand set")]);
        let errs = validate_problem(&raw(vec![vec![1, 5]])).unwrap_err();
        assert!(errs[0].message.contains("index 5 out of range"));
        let errs = validate_problem(&raw(vec![vec![2, 2]])).unwrap_err();
        assert!(errs[0].message.contains("duplicate index 2"));
        let mut bad = raw(vec![vec![1]]);
        bad.q = Some(6);
        bad.delta_s = -1;
        let errs = validate_problem(&bad).unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].path, "q");
        assert_eq!(errs[1].path, "delta_s");
    }

    #[test]
    fn interfering_set_examples() {
        let p = three_users();
        let i: Vec<_> = p.interfering_set().unwrap().collect();
        assert_eq!(i.len(), 14);
        assert!(!i.contains(&vec![0, 0, 0, 0]) && !i.contains(&vec![1, 1, 1, 1]));

        let p0 = BnsiProblem::from_one_based(2, 4, &[&[1, 2, 3]], 0).unwrap();
        assert_eq!(p0.interfering_set().unwrap().count(), 0);

        let small = BnsiProblem::from_one_based(2, 2, &[&[1, 2]], 1).unwrap();
        let i: Vec<_> = small.interfering_set().unwrap().collect();
        assert_eq!(i, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);

        let huge = BnsiProblem::from_one_based(2, 30, &[&[1]], 1).unwrap();
        assert!(matches!(huge.interfering_set(), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn induced_examples() {
        let p = three_users();
        let ind = p.induced_subproblem(IndexSet::from_one_based(&[2, 3, 4])).unwrap();
        assert_eq!(ind.problem.m(), 3);
        let d: Vec<_> = ind.problem.demands().iter().map(|x| x.to_one_based()).collect();
        assert_eq!(d, vec![vec![1, 2], vec![1, 2, 3], vec![2, 3]]);
        assert_eq!(ind.index_map, vec![None, Some(0), Some(1), Some(2)]);

        let same = p.induced_subproblem(p.all()).unwrap();
        assert_eq!(same.problem, p);
        assert_eq!(same.index_map, vec![Some(0), Some(1), Some(2), Some(3)]);

        let drop = p.induced_subproblem(p.interference(0)).unwrap();
        assert_eq!(drop.problem.m(), 2);
        assert_eq!(drop.users, vec![1, 2]);

        assert_eq!(p.induced_subproblem(IndexSet::EMPTY), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn toml_roundtrip() {
        let p = three_users();
        let text = p.to_toml();
        assert_eq!(BnsiProblem::from_toml(&text).unwrap(), p);
        let ext = BnsiProblem::from_toml("p = 2\nk = 4\nn = 3\ndelta_s = 1\ndemands = [[3, 1]]\n").unwrap();
        assert_eq!(ext.q(), 16);
        assert_eq!(ext.demand(0).to_one_based(), vec![1, 3]);
        let err = BnsiProblem::from_toml("n = 3\ndelta_s = 1\nq = \"two\"\ndemands = [[1]]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        assert!(matches!(
            BnsiProblem::from_toml("q = 6\nn = 3\ndelta_s = 1\ndemands = [[1]]\n"),
            Err(Error::InvalidProblem(_))
        ));
    }

    #[test]
    fn bipartite_and_lints() {
        let p = BnsiProblem::from_one_based(2, 4, &[&[1, 2], &[3], &[1, 2]], 1).unwrap();
        let b = p.bipartite();
        assert_eq!(b.edge_count(), 5);
        assert_eq!(b.user_degree(0), 2);
        assert_eq!(b.packets[0], vec![0, 2]);
        assert_eq!(
            p.lints(),
            vec!["user 3 has the same demand set as user 1".to_string(), "message 4 is demanded by no user".to_string()]
        );
    }
}
