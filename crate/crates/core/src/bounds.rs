//! Encoder constructions and bounds on the optimal codelength `N_opt`.
//!
//! Every construction returns its matrix so callers can re-check validity
//! independently; the bound is simply the matrix's column count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::index_coding::{ic_acyclic_lower_bound, reduce_to_ic};
use crate::matrix::Matrix;
use crate::oracle::optimal_codelength_subspace;
use crate::problem::BnsiProblem;
use crate::sets::IndexSet;
use crate::structure::{b_max, block_dimension, c_max, disjoint_phi_collection, DisjointCollection, SearchMode};
use crate::validity::EncoderMatrix;

/// Largest `q^k` for brute-force minimum distance.
pub const MIN_DISTANCE_GUARD: u128 = 1 << 24;
/// Largest `|C_max|` for the exact partition search (Bell(12) ~ 4.2M).
pub const PARTITION_EXACT_CAP: usize = 12;

/// A linear code given by a full-rank parity-check matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCodeSpec {
    h: Matrix,
    /// Distance claimed by whoever built the code; `None` when unknown.
    pub claimed_distance: Option<usize>,
}

impl LinearCodeSpec {
    pub fn new(h: Matrix) -> Result<Self> {
        if h.rank() != h.rows() {
            return Err(Error::DegenerateCode(format!(
                "parity check has rank {} but {} rows",
                h.rank(),
                h.rows()
            )));
        }
        Ok(LinearCodeSpec { h, claimed_distance: None })
    }

    /// The code spanned by the rows of `g`.
    pub fn from_generator(g: &Matrix) -> Result<Self> {
        LinearCodeSpec::new(g.parity_check_of_rowspace()?)
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }

    pub fn blocklength(&self) -> usize {
        self.h.cols()
    }

    pub fn dimension(&self) -> usize {
        self.h.cols() - self.h.rows()
    }

    /// A generator matrix (reduced echelon basis of the code).
    pub fn generator(&self) -> Matrix {
        self.h.right_null_space()
    }
}

/// Minimum nonzero codeword weight by enumerating the code; `None` stands
/// for the infinite distance of the zero code.
pub fn min_distance(c: &LinearCodeSpec) -> Result<Option<usize>> {
    let g = c.generator();
    let f = g.field().clone();
    let (k, n) = (g.rows(), g.cols());
    if k == 0 {
        return Ok(None);
    }
    let size = crate::space::space_size(f.order(), k);
    if size > MIN_DISTANCE_GUARD {
        return Err(Error::too_large("codewords (q^k)", size, MIN_DISTANCE_GUARD));
    }
    // codewords are scale invariant in weight: fix the leading coefficient to 1
    let mut best = n;
    for lead in 0..k {
        let tail = k - lead - 1;
        for code in 0..crate::space::space_size(f.order(), tail) as u64 {
            let mut u = vec![0; k];
            u[lead] = 1;
            u[lead + 1..].copy_from_slice(&crate::space::unrank(code, f.order(), tail));
            let w = g.left_mul_vec(&u)?.iter().filter(|&&x| x != 0).count();
            best = best.min(w);
        }
    }
    Ok(Some(best))
}

/// Generalised Reed-Solomon parity check: the `(d-1) x n` Vandermonde
/// matrix on the points `0, 1, ..., n-1`, an MDS code with distance `d`
/// and dimension `n - d + 1`.
pub fn grs_parity_check(field: &Field, n: usize, d: usize) -> Result<LinearCodeSpec> {
    if d < 2 || d > n + 1 {
        return Err(Error::PreconditionViolated(format!("target distance {d} outside 2..={}", n + 1)));
    }
    if d == n + 1 {
        return Err(Error::DegenerateCode(format!("distance {d} leaves dimension 0")));
    }
    if (field.order() as usize) < n {
        return Err(Error::FieldTooSmall { q: field.order(), n });
    }
    let mut c = LinearCodeSpec::new(vandermonde(field, d - 1, n))?;
    c.claimed_distance = Some(d);
    Ok(c)
}

fn vandermonde(field: &Field, rows: usize, n: usize) -> Matrix {
    let mut h = Matrix::zeros(field, rows, n);
    for j in 0..n {
        let mut x = 1;
        for r in 0..rows {
            h.set(r, j, x);
            x = field.mul(x, j as Elem);
        }
    }
    h
}

/// `L = [I_{n-1}; 1]`, valid when every user demands at least
/// `2 delta_s + 1` messages.
pub fn simple_scheme(p: &BnsiProblem) -> Result<EncoderMatrix> {
    let lo = p.two_delta() + 1;
    let short: Vec<String> = (0..p.m())
        .filter(|&i| p.demand(i).len() < lo)
        .map(|i| format!("user {} demands {} < {lo}", i + 1, p.demand(i).len()))
        .collect();
    if !short.is_empty() {
        return Err(Error::PreconditionViolated(short.join(", ")));
    }
    EncoderMatrix::new(p, simple_block(p.field(), p.n()))
}

fn simple_block(field: &Field, size: usize) -> Matrix {
    let mut l = Matrix::zeros(field, size, size.saturating_sub(1));
    for r in 0..size.saturating_sub(1) {
        l.set(r, r, 1);
        l.set(size - 1, r, 1);
    }
    l
}

/// `L = H^T` for a code of blocklength `n` with `d_min >= eta + 1`, where
/// `eta = 2 delta_s + max_i |Y_i|`.
pub fn ecc_based_encoder(p: &BnsiProblem, c: &LinearCodeSpec) -> Result<EncoderMatrix> {
    if c.blocklength() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "code has blocklength {}, problem has n = {}",
            c.blocklength(),
            p.n()
        )));
    }
    let required = eta(p) + 1;
    if let Some(actual) = min_distance(c)? {
        if actual < required {
            return Err(Error::DistanceTooSmall { required, actual });
        }
    }
    EncoderMatrix::new(p, c.parity_check().transpose())
}

/// `2 delta_s + max_i |Y_i|`.
pub fn eta(p: &BnsiProblem) -> usize {
    p.two_delta() + (0..p.m()).map(|i| p.interference(i).len()).max().unwrap_or(0)
}

/// `|X_S| + min(2 delta_s, n' - |X_S|)` with `S` the users demanding at
/// most `2 delta_s` messages and `n'` the number of demanded messages.
/// Messages nobody demands need no transmissions, so they are left out of
/// `n'`; with every message demanded `n' = n`.
pub fn lower_bound_size(p: &BnsiProblem) -> usize {
    let xs = p
        .demands()
        .iter()
        .filter(|x| x.len() <= p.two_delta())
        .fold(IndexSet::EMPTY, |a, &x| a.union(x))
        .len();
    let demanded = p.demands().iter().fold(IndexSet::EMPTY, |a, &x| a.union(x)).len();
    xs + p.two_delta().min(demanded - xs)
}

/// `|B_max|`.
pub fn lower_bound_bmax(p: &BnsiProblem) -> Result<usize> {
    Ok(b_max(p)?.len())
}

/// A coded block: the messages it covers and the transmissions it saves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub set: IndexSet,
    pub saved: usize,
}

/// A valid encoder with its codelength and block structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub encoder: EncoderMatrix,
    pub blocks: Vec<Block>,
}

impl Construction {
    pub fn length(&self) -> usize {
        self.encoder.codelength()
    }
}

/// Why a bound could not be produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Unavailable(pub String);

/// `n - min_i (|X_i| - 2 delta_s)^+` from a GRS code on all `n` messages;
/// needs `q >= n`.
pub fn upper_bound_mds(p: &BnsiProblem) -> std::result::Result<Construction, Unavailable> {
    let k = (0..p.m())
        .map(|i| p.demand(i).len().saturating_sub(p.two_delta()))
        .min()
        .unwrap_or(p.n());
    if k == 0 {
        return Ok(assemble(p, Vec::new()));
    }
    if (p.q() as usize) < p.n() {
        return Err(Unavailable(format!("needs q >= n = {}, field has q = {}", p.n(), p.q())));
    }
    let block = mds_block(p.field(), p.n(), k).expect("q >= n");
    Ok(assemble(p, vec![(p.all(), k, block)]))
}

/// `n - |c|`: the simple scheme on each element of a largest disjoint
/// collection, identity elsewhere.
pub fn upper_bound_disjoint(p: &BnsiProblem) -> (Construction, DisjointCollection) {
    let coll = disjoint_phi_collection(p);
    let blocks = coll.sets.iter().map(|&c| (c, 1, simple_block(p.field(), c.len()))).collect();
    (assemble(p, blocks), coll)
}

/// `n - sum d_C`: an MDS block of dimension `d_C` on each element of the
/// collection; needs `q >= max |C|`.
pub fn upper_bound_mds_disjoint(p: &BnsiProblem) -> std::result::Result<(Construction, DisjointCollection), Unavailable> {
    let coll = disjoint_phi_collection(p);
    let largest = coll.sets.iter().map(|c| c.len()).max().unwrap_or(0);
    if (p.q() as usize) < largest {
        return Err(Unavailable(format!("needs q >= {largest}, field has q = {}", p.q())));
    }
    let blocks = coll
        .sets
        .iter()
        .map(|&c| {
            let k = block_dimension(p, c);
            (c, k, mds_block(p.field(), c.len(), k).expect("q >= |C|"))
        })
        .collect();
    Ok((assemble(p, blocks), coll))
}

/// Outcome of [`partition_optimizer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub d_sum: usize,
    pub parts: Vec<IndexSet>,
    pub mode: SearchMode,
    pub construction: Construction,
}

/// Transmissions a block on `s` can save over this field: `d_s` with an
/// MDS code when one exists (`|s| <= q`), otherwise 1 with the simple
/// scheme when `d_s >= 1`. A block no user touches saves everything.
pub fn realizable_saving(p: &BnsiProblem, s: IndexSet) -> usize {
    let d = block_dimension(p, s);
    let untouched = p.demands().iter().all(|x| x.is_disjoint(s));
    if untouched || d <= 1 || s.len() <= p.q() as usize {
        d
    } else {
        1
    }
}

/// Partition `C_max` to maximise the total saving.
///
/// Exact over all set partitions (restricted growth strings, ties to the
/// lexicographically least string) when `|C_max| <= 12`; otherwise a
/// greedy refinement of the disjoint collection, flagged as such. Block
/// savings follow [`realizable_saving`], so the result is achievable over
/// the problem's field.
pub fn partition_optimizer(p: &BnsiProblem) -> std::result::Result<PartitionResult, Unavailable> {
    let cmax = c_max(p).ok_or_else(|| Unavailable("Phi(B) is empty, so C_max does not exist".into()))?;
    let (parts, mode) = if cmax.len() <= PARTITION_EXACT_CAP {
        (exact_partition(p, cmax), SearchMode::Exact)
    } else {
        (greedy_partition(p, cmax), SearchMode::Greedy)
    };
    let d_sum = parts.iter().map(|&s| realizable_saving(p, s)).sum();
    let blocks = parts
        .iter()
        .filter_map(|&s| {
            let k = realizable_saving(p, s);
            (k > 0).then(|| (s, k, saving_block(p, s, k)))
        })
        .collect();
    Ok(PartitionResult { d_sum, parts, mode, construction: assemble(p, blocks) })
}

fn exact_partition(p: &BnsiProblem, cmax: IndexSet) -> Vec<IndexSet> {
    let elems = cmax.to_vec();
    let s = elems.len();
    let value: Vec<usize> = (0u64..1 << s)
        .map(|local| {
            let set: IndexSet = (0..s).filter(|b| local >> b & 1 == 1).map(|b| elems[b]).collect();
            if set.is_empty() {
                0
            } else {
                realizable_saving(p, set)
            }
        })
        .collect();
    struct Rgs<'a> {
        value: &'a [usize],
        s: usize,
        parts: Vec<u64>,
        best: (usize, Vec<u64>),
    }
    impl Rgs<'_> {
        fn go(&mut self, i: usize) {
            if i == self.s {
                let total = self.parts.iter().map(|&m| self.value[m as usize]).sum();
                if total > self.best.0 || self.best.1.is_empty() {
                    self.best = (total, self.parts.clone());
                }
                return;
            }
            for b in 0..self.parts.len() {
                self.parts[b] |= 1 << i;
                self.go(i + 1);
                self.parts[b] &= !(1 << i);
            }
            self.parts.push(1 << i);
            self.go(i + 1);
            self.parts.pop();
        }
    }
    let mut r = Rgs { value: &value, s, parts: Vec::new(), best: (0, Vec::new()) };
    r.go(0);
    r.best
        .1
        .iter()
        .map(|&m| (0..s).filter(|b| m >> b & 1 == 1).map(|b| elems[b]).collect())
        .collect()
}

fn greedy_partition(p: &BnsiProblem, cmax: IndexSet) -> Vec<IndexSet> {
    let total = |parts: &[IndexSet]| parts.iter().map(|&s| realizable_saving(p, s)).sum::<usize>();
    let mut parts = disjoint_phi_collection(p).sets;
    let leftover = cmax.difference(parts.iter().fold(IndexSet::EMPTY, |a, &s| a.union(s)));
    parts.extend(leftover.iter().map(IndexSet::singleton));
    loop {
        let current = total(&parts);
        let mut improved = None;
        'search: for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                let mut merged: Vec<IndexSet> = parts.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, &s)| s).collect();
                merged.push(parts[a].union(parts[b]));
                if total(&merged) > current {
                    improved = Some(merged);
                    break 'search;
                }
            }
        }
        match improved {
            Some(next) => parts = next,
            None => break,
        }
    }
    if realizable_saving(p, cmax) >= total(&parts) {
        return vec![cmax];
    }
    parts.retain(|s| !s.is_empty());
    parts.sort_by(|a, b| a.lex_cmp(*b));
    parts
}

/// Encoder block on `s` saving `k` transmissions.
fn saving_block(p: &BnsiProblem, s: IndexSet, k: usize) -> Matrix {
    if k == 1 {
        simple_block(p.field(), s.len())
    } else {
        mds_block(p.field(), s.len(), k).expect("realizable saving fits the field")
    }
}

/// `H^T` of a length-`size`, dimension-`k` GRS code: `size x (size - k)`.
/// `None` when the field has too few points.
fn mds_block(field: &Field, size: usize, k: usize) -> Option<Matrix> {
    let rows = size - k;
    if rows >= 2 && (field.order() as usize) < size {
        return None;
    }
    Some(vandermonde(field, rows, size).transpose())
}

/// Block-diagonal encoder: each block's rows sit at its message indices,
/// columns follow in block order; uncovered messages go uncoded at the end.
fn assemble(p: &BnsiProblem, blocks: Vec<(IndexSet, usize, Matrix)>) -> Construction {
    let covered = blocks.iter().fold(IndexSet::EMPTY, |a, (s, _, _)| a.union(*s));
    let rest = p.all().difference(covered);
    let cols = blocks.iter().map(|(_, _, b)| b.cols()).sum::<usize>() + rest.len();
    let mut l = Matrix::zeros(p.field(), p.n(), cols);
    let mut off = 0;
    for (s, _, b) in &blocks {
        for (r, j) in s.iter().enumerate() {
            for c in 0..b.cols() {
                l.set(j, off + c, b.get(r, c));
            }
        }
        off += b.cols();
    }
    for j in rest.iter() {
        l.set(j, off, 1);
        off += 1;
    }
    Construction {
        encoder: EncoderMatrix::wrap(l),
        blocks: blocks.into_iter().map(|(set, saved, _)| Block { set, saved }).collect(),
    }
}

/// One bound with its origin and a witness that can be re-checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: &'static str,
    pub value: Option<usize>,
    pub source: &'static str,
    pub witness: String,
}

/// Every bound within its guard, plus the exact optimum when requested and
/// feasible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub q: u32,
    pub lower_size: usize,
    pub lower_bmax: Option<usize>,
    pub lower_ic_acyclic: Option<usize>,
    pub upper_trivial: usize,
    pub upper_ecc: Option<usize>,
    pub upper_disjoint: usize,
    pub upper_mds_disjoint: Option<usize>,
    pub upper_partition: Option<usize>,
    pub oracle: Option<usize>,
    pub entries: Vec<BoundEntry>,
    /// Every known lower bound is at most every known upper bound.
    pub consistent: bool,
}

impl BoundsReport {
    pub fn best_lower(&self) -> usize {
        self.lowers().max().unwrap_or(0)
    }

    pub fn best_upper(&self) -> usize {
        self.uppers().min().unwrap_or(self.n)
    }

    fn lowers(&self) -> impl Iterator<Item = usize> + '_ {
        [Some(self.lower_size), self.lower_bmax, self.lower_ic_acyclic].into_iter().flatten()
    }

    fn uppers(&self) -> impl Iterator<Item = usize> + '_ {
        [
            Some(self.upper_trivial),
            self.upper_ecc,
            Some(self.upper_disjoint),
            self.upper_mds_disjoint,
            self.upper_partition,
        ]
        .into_iter()
        .flatten()
    }
}

pub fn bounds_report(p: &BnsiProblem, with_oracle: bool) -> BoundsReport {
    let mut entries = Vec::new();
    let mut entry = |name, value: Option<usize>, source, witness: String| {
        entries.push(BoundEntry { name, value, source, witness });
        value
    };
    let lower_size = lower_bound_size(p);
    entry("lower_size", Some(lower_size), "demand-size bound |X_S| + min(2 delta_s, n - |X_S|)", String::new());
    let lower_bmax = match b_max(p) {
        Ok(b) => entry("lower_bmax", Some(b.len()), "B_max bound", format!("B_max = {b}")),
        Err(e) => entry("lower_bmax", None, "B_max bound", e.to_string()),
    };
    let ic = reduce_to_ic(p);
    let lower_ic_acyclic = match ic_acyclic_lower_bound(&ic) {
        Ok(b) => entry("lower_ic_acyclic", Some(b.len()), "acyclic induced subgraph of the index-coding reduction", format!("messages {b}")),
        Err(e) => entry("lower_ic_acyclic", None, "acyclic induced subgraph of the index-coding reduction", e.to_string()),
    };
    entry("upper_trivial", Some(p.n()), "uncoded transmission", String::new());
    let upper_ecc = match upper_bound_mds(p) {
        Ok(c) => entry("upper_ecc", Some(c.length()), "MDS code on all messages", blocks_text(&c.blocks)),
        Err(u) => entry("upper_ecc", None, "MDS code on all messages", u.0),
    };
    let (dis, coll) = upper_bound_disjoint(p);
    let upper_disjoint = entry(
        "upper_disjoint",
        Some(dis.length()),
        "simple scheme on disjoint Phi elements",
        format!("{} ({:?})", sets_text(&coll.sets), coll.mode).to_lowercase(),
    )
    .unwrap();
    let upper_mds_disjoint = match upper_bound_mds_disjoint(p) {
        Ok((c, _)) => entry("upper_mds_disjoint", Some(c.length()), "MDS codes on disjoint Phi elements", blocks_text(&c.blocks)),
        Err(u) => entry("upper_mds_disjoint", None, "MDS codes on disjoint Phi elements", u.0),
    };
    let upper_partition = match partition_optimizer(p) {
        Ok(r) => entry(
            "upper_partition",
            Some(r.construction.length()),
            "optimal partition of C_max",
            format!("{} ({:?})", sets_text(&r.parts), r.mode).to_lowercase(),
        ),
        Err(u) => entry("upper_partition", None, "optimal partition of C_max", u.0),
    };
    let oracle = if with_oracle {
        match optimal_codelength_subspace(p) {
            Ok(o) => entry("oracle", Some(o.n_opt), "exhaustive subspace search", String::new()),
            Err(e) => entry("oracle", None, "exhaustive subspace search", e.to_string()),
        }
    } else {
        None
    };
    let mut report = BoundsReport {
        n: p.n(),
        q: p.q(),
        lower_size,
        lower_bmax,
        lower_ic_acyclic,
        upper_trivial: p.n(),
        upper_ecc,
        upper_disjoint,
        upper_mds_disjoint,
        upper_partition,
        oracle,
        entries,
        consistent: true,
    };
    let lo = report.best_lower();
    let hi = report.best_upper();
    report.consistent = lo <= hi && oracle.map_or(true, |o| lo <= o && o <= hi);
    report
}

fn sets_text(sets: &[IndexSet]) -> String {
    let items: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn blocks_text(blocks: &[Block]) -> String {
    let items: Vec<String> = blocks.iter().map(|b| format!("{} saves {}", b.set, b.saved)).collect();
    format!("[{}]", items.join(", "))
}
