//! Encoder validity: `L` is valid iff `zL != 0` for every `z` in the
//! interfering set.
//!
//! Two independent deciders are provided. [`is_valid_by_enumeration`] walks
//! the interfering set directly. [`is_valid_by_rank`] checks, for every user
//! `i` and every `S` in `X_i` of size `min(2 delta_s, |X_i|)`, that the rows
//! `L_S` are independent modulo `rowspan(L_{Y_i})`. Smaller supports need no
//! separate check: a subfamily of a family independent modulo a subspace is
//! itself independent modulo that subspace.

use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::matrix::Matrix;
use crate::problem::{BnsiProblem, INTERFERING_GUARD};
use crate::sets::{binomial, subsets_of_size, IndexSet};
use crate::space;

/// Largest number of subset rank checks [`is_valid_by_rank`] performs.
pub const RANK_GUARD: u128 = 1 << 24;

/// An `n x N` matrix over the problem's field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncoderMatrix(Matrix);

impl EncoderMatrix {
    pub fn new(problem: &BnsiProblem, l: Matrix) -> Result<Self> {
        if l.rows() != problem.n() {
            return Err(Error::DimensionMismatch(format!(
                "encoder has {} rows, problem has n = {}",
                l.rows(),
                problem.n()
            )));
        }
        if l.field() != problem.field() {
            return Err(Error::DimensionMismatch(format!(
                "encoder is over {}, problem over {}",
                l.field(),
                problem.field()
            )));
        }
        Ok(EncoderMatrix(l))
    }

    /// Wrap without a problem at hand; used by constructions that size `L`
    /// themselves.
    pub(crate) fn wrap(l: Matrix) -> Self {
        EncoderMatrix(l)
    }

    /// The codelength `N`.
    pub fn codelength(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }
}

impl Deref for EncoderMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// Outcome of a validity check, with a canonical witness on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict<W> {
    Valid,
    Invalid(W),
}

impl<W> Verdict<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(w) => Some(w),
        }
    }
}

/// A user and a demand subset whose rows fall into `rowspan(L_{Y_i})`
/// (or are dependent among themselves).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub user: usize,
    pub subset: IndexSet,
}

/// Least `z` (lexicographically) in the interfering set with `zL = 0`.
pub fn is_valid_by_enumeration(p: &BnsiProblem, l: &EncoderMatrix) -> Result<Verdict<Vec<Elem>>> {
    space::guard_space("interfering set (q^n)", p.q(), p.n(), INTERFERING_GUARD)?;
    if p.delta_s() == 0 {
        return Ok(Verdict::Valid);
    }
    Ok(match space::least_kernel_vector(l, |s| p.support_interferes(s)) {
        None => Verdict::Valid,
        Some(z) => Verdict::Invalid(z),
    })
}

/// Rank criterion; the witness is the least user, then the
/// lexicographically least subset.
pub fn is_valid_by_rank(p: &BnsiProblem, l: &EncoderMatrix) -> Result<Verdict<RankWitness>> {
    let work = rank_work(p);
    if work > RANK_GUARD {
        return Err(Error::too_large("rank-check subsets", work, RANK_GUARD));
    }
    for i in 0..p.m() {
        let ly = l.select_rows(p.interference(i).iter());
        if let Some(subset) = first_dependent_subset(p, l, &ly, i) {
            return Ok(Verdict::Invalid(RankWitness { user: i, subset }));
        }
    }
    Ok(Verdict::Valid)
}

/// Every `min(2 delta_s, |X_i|)` rows of `L_{X_i}` are independent.
/// Necessary for validity, not sufficient.
pub fn necessary_check(p: &BnsiProblem, l: &EncoderMatrix) -> bool {
    (0..p.m()).all(|i| {
        let empty = Matrix::zeros(l.field(), 0, l.cols());
        first_dependent_subset(p, l, &empty, i).is_none()
    })
}

fn subset_size(p: &BnsiProblem, i: usize) -> usize {
    p.two_delta().min(p.demand(i).len())
}

fn rank_work(p: &BnsiProblem) -> u128 {
    (0..p.m())
        .map(|i| binomial(p.demand(i).len() as i64, subset_size(p, i) as i64))
        .fold(0u128, u128::saturating_add)
}

/// First `S` (lexicographic) whose rows are dependent modulo `rowspan(base)`.
fn first_dependent_subset(p: &BnsiProblem, l: &Matrix, base: &Matrix, i: usize) -> Option<IndexSet> {
    let s = subset_size(p, i);
    if s == 0 {
        return None;
    }
    let residual = Residuals::new(base, l, p.demand(i));
    subsets_of_size(p.demand(i), s).find(|set| residual.rank_of(set) < s)
}

/// Rows of `L` reduced modulo the row space of a base matrix, so that a
/// subset rank check only touches `|S|` short vectors.
struct Residuals {
    rows: Vec<Option<Vec<Elem>>>,
    field: crate::field::Field,
    cols: usize,
}

impl Residuals {
    fn new(base: &Matrix, l: &Matrix, which: IndexSet) -> Self {
        let f = l.field().clone();
        let ech = base.echelon();
        let mut rows = vec![None; l.rows()];
        for j in which.iter() {
            let mut v = l.row(j).to_vec();
            for (r, &pc) in ech.pivots.iter().enumerate() {
                let factor = v[pc];
                if factor != 0 {
                    for (c, x) in v.iter_mut().enumerate() {
                        *x = f.sub(*x, f.mul(factor, ech.reduced.get(r, c)));
                    }
                }
            }
            rows[j] = Some(v);
        }
        Residuals { rows, field: f, cols: l.cols() }
    }

    fn rank_of(&self, set: &IndexSet) -> usize {
        let rows: Vec<Vec<Elem>> = set.iter().map(|j| self.rows[j].clone().unwrap()).collect();
        Matrix::from_rows_with_cols(&self.field, &rows, self.cols)
            .expect("residual rows are well formed")
            .rank()
    }
}
