//! Dense matrices over a [`Field`] and the linear algebra the rest of the
//! crate needs.
//!
//! All echelon forms are fully reduced with unit pivots, choosing the
//! leftmost pivot column and the topmost available row, so null-space bases
//! and parity-check matrices come out the same on every run.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
    field: Field,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows only, one per pivot.
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`Matrix::from_rows`], but keeps the column count for zero-row input.
    pub fn from_rows_with_cols(field: &Field, rows: &[Vec<Elem>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| !field.contains(x)) {
                return Err(Error::DimensionMismatch(format!(
                    "entry {bad} in row {r} is not an element of {field}"
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, data, field: field.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Rows at the given indices, in the given order.
    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> Matrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for r in idx {
            data.extend_from_slice(self.row(r));
            rows += 1;
        }
        Matrix { rows, cols: self.cols, data, field: self.field.clone() }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data, field: self.field.clone() })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(a, self.get(r, c)));
            }
        }
        Ok(out)
    }

    /// Matrix times column vector: `self * v^T`, returned as a row.
    pub fn mul_col_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row-echelon form: leftmost pivot, topmost row, pivots scaled to 1.
    pub fn echelon(&self) -> Echelon {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..m.cols {
            if top == m.rows {
                break;
            }
            let Some(pr) = (top..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(top, pr);
            let inv = f.inv(m.get(top, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(top, j), inv);
                m.set(top, j, v);
            }
            for r in 0..m.rows {
                if r == top {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(top, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            top += 1;
        }
        m.data.truncate(top * m.cols);
        m.rows = top;
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Whether `v` lies in the row space, decided by `rank([M; v]) = rank(M)`.
    pub fn rowspan_contains(&self, v: &[Elem]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let single = Matrix::from_rows_with_cols(&self.field, &[v.to_vec()], self.cols)?;
        Ok(self.vstack(&single)?.rank() == self.rank())
    }

    /// Basis (in reduced echelon form) of `{ x : self * x^T = 0 }`.
    pub fn right_null_space(&self) -> Matrix {
        let f = &self.field;
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(ech.reduced.get(r, fc));
            }
            basis.push(v);
        }
        let b = Matrix::from_rows_with_cols(f, &basis, self.cols).expect("well-formed rows");
        b.echelon().reduced
    }

    /// Basis (in reduced echelon form) of `{ z : z * self = 0 }`; it has
    /// `rows - rank` rows.
    pub fn left_null_space(&self) -> Matrix {
        self.transpose().right_null_space()
    }

    /// Parity-check matrix of the row space of `self`: `H * self^T = 0` with
    /// `cols - rows` independent rows, in reduced echelon form.
    pub fn parity_check_of_rowspace(&self) -> Result<Matrix> {
        if self.rank() < self.rows {
            return Err(Error::DependentRows);
        }
        Ok(self.right_null_space())
    }

    /// Block-diagonal matrix from the given blocks.
    pub fn block_diagonal(field: &Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Text format: a header `rows cols q` (or `rows cols p k`) followed by
    /// one line of space-separated entries per row. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
        let nums = parse_numbers(hline, header)?;
        let (rows, cols, field) = match nums.as_slice() {
            [r, c, q] => (*r as usize, *c as usize, Field::with_order(*q as u32)),
            [r, c, p, k] => (
                *r as usize,
                *c as usize,
                crate::field::FieldSpec::new(*p as u32, *k as u32).map(Field::new),
            ),
            _ => {
                return Err(Error::Parse {
                    line: hline,
                    message: "header must be `rows cols q` or `rows cols p k`".into(),
                })
            }
        };
        let field = field.map_err(|e| Error::Parse { line: hline, message: e.to_string() })?;
        let mut data = Vec::with_capacity(rows * cols);
        // zero-width rows have no text
        let text_rows = if cols == 0 { 0 } else { rows };
        for r in 0..text_rows {
            let (ln, l) = lines.next().ok_or(Error::Parse {
                line: hline + r + 1,
                message: format!("expected {rows} rows, found {r}"),
            })?;
            let vals = parse_numbers(ln, l)?;
            if vals.len() != cols {
                return Err(Error::Parse { line: ln, message: format!("expected {cols} entries, found {}", vals.len()) });
            }
            for v in vals {
                if v >= field.order() as u64 {
                    return Err(Error::Parse { line: ln, message: format!("{v} is not an element of {field}") });
                }
                data.push(v as Elem);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, message: "trailing content after matrix rows".into() });
        }
        Ok(Matrix { rows, cols, data, field })
    }

    /// Inverse of [`Matrix::parse`]; prime fields use the `q` header,
    /// extension fields the `p k` header.
    pub fn to_text(&self) -> String {
        let spec = self.field.spec();
        let mut s = if spec.degree() == 1 {
            format!("{} {} {}\n", self.rows, self.cols, spec.order())
        } else {
            format!("{} {} {} {}\n", self.rows, self.cols, spec.characteristic(), spec.degree())
        };
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse { line, message: format!("`{t}` is not a non-negative integer") })
        })
        .collect()
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
