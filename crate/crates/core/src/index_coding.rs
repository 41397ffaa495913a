//! Reduction from BNSI to index coding.
//!
//! Each BNSI user `i`, each demanded `p` in `X_i` and each `Q` in
//! `X_i \ {p}` of size `min(|X_i| - 1, 2 delta_s - 1)` becomes an
//! index-coding user demanding `x_p` with clean side information
//! `X_i \ (Q ∪ {p})`. The two problems share the interfering set and hence
//! the set of valid linear encoders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Matrix;
use crate::problem::{BnsiProblem, INTERFERING_GUARD};
use crate::sets::{binomial, combinations_colex, IndexSet, MAX_INDEX};
use crate::space::{self, all_vectors, support};

/// Largest `2^n` for the acyclic-subgraph search.
pub const ACYCLIC_GUARD: u128 = 1 << 20;

/// Which BNSI user, packet and `Q` produced an index-coding user.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub user: usize,
    pub packet: usize,
    pub q: IndexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcUser {
    pub demand: usize,
    pub side_info: IndexSet,
    pub provenance: Option<Provenance>,
}

impl IcUser {
    fn key(&self) -> (usize, IndexSet) {
        (self.demand, self.side_info)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCodingProblem {
    n: usize,
    /// Every generated user, in generation order.
    generated: Vec<IcUser>,
    /// First occurrence of each distinct (demand, side information) pair.
    distinct: Vec<IcUser>,
    m_hat_formula: u128,
}

impl IndexCodingProblem {
    pub fn new(n: usize, users: Vec<IcUser>) -> Result<Self> {
        if n == 0 || n > MAX_INDEX {
            return Err(Error::PreconditionViolated(format!("message count {n} outside 1..={MAX_INDEX}")));
        }
        for (j, u) in users.iter().enumerate() {
            if u.demand >= n || !u.side_info.is_subset(IndexSet::full(n)) {
                return Err(Error::PreconditionViolated(format!("user {} refers to a message beyond n = {n}", j + 1)));
            }
            if u.side_info.contains(u.demand) {
                return Err(Error::PreconditionViolated(format!("user {} has its demand in its side information", j + 1)));
            }
        }
        let mut distinct: Vec<IcUser> = Vec::new();
        for u in &users {
            if !distinct.iter().any(|d| d.key() == u.key()) {
                distinct.push(*u);
            }
        }
        let m_hat_formula = users.len() as u128;
        Ok(IndexCodingProblem { n, generated: users, distinct, m_hat_formula })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generated(&self) -> &[IcUser] {
        &self.generated
    }

    pub fn users(&self) -> &[IcUser] {
        &self.distinct
    }

    /// `m̂` as given by the closed-form count.
    pub fn m_hat_formula(&self) -> u128 {
        self.m_hat_formula
    }

    pub fn m_generated(&self) -> usize {
        self.generated.len()
    }

    pub fn m_distinct(&self) -> usize {
        self.distinct.len()
    }

    /// Some `z` with this support lies in `I_IC`.
    pub fn support_interferes(&self, supp: IndexSet) -> bool {
        self.distinct
            .iter()
            .any(|u| supp.contains(u.demand) && supp.is_disjoint(u.side_info))
    }

    pub fn to_toml(&self) -> String {
        let mut s = format!("n = {}\nm_hat_formula = {}\nm_distinct = {}\n", self.n, self.m_hat_formula, self.m_distinct());
        for u in &self.generated {
            s.push_str(&format!("\n[[users]]\ndemand = {}\nside_info = {:?}\n", u.demand + 1, u.side_info.to_one_based()));
            if let Some(pv) = u.provenance {
                s.push_str(&format!(
                    "provenance = {{ user = {}, packet = {}, q = {:?} }}\n",
                    pv.user + 1,
                    pv.packet + 1,
                    pv.q.to_one_based()
                ));
            }
        }
        s
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawProvenance {
            user: usize,
            packet: usize,
            q: IndexSet,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct RawUser {
            demand: usize,
            side_info: IndexSet,
            provenance: Option<RawProvenance>,
        }
        #[derive(Deserialize)]
        struct RawIc {
            n: usize,
            m_hat_formula: Option<u64>,
            #[serde(default)]
            users: Vec<RawUser>,
        }
        let raw: RawIc = toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(1, |s| text[..s.start.min(text.len())].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?;
        let mut users = Vec::with_capacity(raw.users.len());
        for (j, u) in raw.users.into_iter().enumerate() {
            if u.demand == 0 || u.provenance.as_ref().map_or(false, |p| p.user == 0 || p.packet == 0) {
                return Err(Error::PreconditionViolated(format!("user {}: indices are 1-based", j + 1)));
            }
            users.push(IcUser {
                demand: u.demand - 1,
                side_info: u.side_info,
                provenance: u.provenance.map(|p| Provenance { user: p.user - 1, packet: p.packet - 1, q: p.q }),
            });
        }
        let mut ic = IndexCodingProblem::new(raw.n, users)?;
        if let Some(m) = raw.m_hat_formula {
            ic.m_hat_formula = m as u128;
        }
        Ok(ic)
    }
}

/// `m̂ = sum_i |X_i| C(|X_i| - 1, 2 delta_s - 1)` when `|X_i| >= 2 delta_s`;
/// users with `|X_i| < 2 delta_s` contribute `|X_i|` (one `Q`, all of
/// `X_i \ {p}`, per packet).
pub fn m_hat(p: &BnsiProblem) -> u128 {
    let td = p.two_delta() as i64;
    p.demands()
        .iter()
        .map(|x| {
            let s = x.len() as i64;
            if td == 0 {
                0
            } else if s >= td {
                s as u128 * binomial(s - 1, td - 1)
            } else {
                s as u128
            }
        })
        .sum()
}

/// Users ascending, then `p` ascending, then `Q` in colex order.
pub fn reduce_to_ic(p: &BnsiProblem) -> IndexCodingProblem {
    let mut users = Vec::new();
    if p.delta_s() > 0 {
        for (i, x) in p.demands().iter().enumerate() {
            let t = (x.len() - 1).min(p.two_delta() - 1);
            for pk in x.iter() {
                let rest = x.without(pk).to_vec();
                for q in combinations_colex(&rest, t) {
                    let q: IndexSet = q.into_iter().collect();
                    users.push(IcUser {
                        demand: pk,
                        side_info: x.without(pk).difference(q),
                        provenance: Some(Provenance { user: i, packet: pk, q }),
                    });
                }
            }
        }
    }
    let mut ic = IndexCodingProblem::new(p.n(), users).expect("reduction output is well formed");
    ic.m_hat_formula = m_hat(p);
    ic
}

/// `I_IC = U_j { z : z_{X_j} = 0, z_{f(j)} != 0 }`, lexicographically.
pub fn ic_interfering_set<'a>(ic: &'a IndexCodingProblem, f: &Field) -> Result<impl Iterator<Item = Vec<Elem>> + 'a> {
    space::guard_space("index-coding interfering set (q^n)", f.order(), ic.n, INTERFERING_GUARD)?;
    Ok(all_vectors(f.order(), ic.n).filter(move |z| ic.support_interferes(support(z))))
}

/// `zL != 0` for every `z` in `I_IC`.
pub fn ic_is_valid(ic: &IndexCodingProblem, l: &Matrix) -> Result<bool> {
    if l.rows() != ic.n {
        return Err(Error::DimensionMismatch(format!("encoder has {} rows, n = {}", l.rows(), ic.n)));
    }
    space::guard_space("index-coding interfering set (q^n)", l.field().order(), ic.n, INTERFERING_GUARD)?;
    Ok(space::least_kernel_vector(l, |s| ic.support_interferes(s)).is_none())
}

/// Largest message set `T` such that, choosing one user demanding each
/// message of `T`, the side-information digraph induced on `T` is acyclic.
/// Giving every other message to all users and dropping the remaining
/// users only lowers the optimum, and an acyclic instance needs `|T|`
/// transmissions, so `N_opt >= |T|`.
pub fn ic_acyclic_lower_bound(ic: &IndexCodingProblem) -> Result<IndexSet> {
    let size = 1u128 << ic.n;
    if size > ACYCLIC_GUARD {
        return Err(Error::too_large("acyclic subgraph search (2^n)", size, ACYCLIC_GUARD));
    }
    let mut by_demand = vec![Vec::new(); ic.n];
    for u in &ic.distinct {
        by_demand[u.demand].push(u.side_info);
    }
    let demanded: IndexSet = (0..ic.n).filter(|&j| !by_demand[j].is_empty()).collect();
    let acyclic = |t: IndexSet| {
        // peel messages whose chosen user needs nothing unplaced from T
        let mut placed = IndexSet::EMPTY;
        loop {
            let ready = t
                .difference(placed)
                .iter()
                .find(|&j| by_demand[j].iter().any(|s| s.intersection(t).is_subset(placed)));
            match ready {
                Some(j) => placed = placed.with(j),
                None => return placed == t,
            }
        }
    };
    for k in (0..=demanded.len()).rev() {
        if let Some(t) = crate::sets::subsets_of_size(demanded, k).find(|&t| acyclic(t)) {
            return Ok(t);
        }
    }
    Ok(IndexSet::EMPTY)
}
