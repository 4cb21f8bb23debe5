//! Dense exact linear algebra over any [`Field`].

use std::fmt;

use crate::exact::{sum, Field};
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> FieldMatrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(FieldMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_columns(columns: &[Vec<F>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Column vector.
    pub fn column_vector(v: &[F]) -> Self {
        FieldMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<F>> = idx.iter().map(|&j| self.column(j)).collect();
        let mut m = Self::from_columns(&cols).expect("columns share a length");
        m.rows = self.rows;
        if cols.is_empty() {
            m.data.clear();
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let data = idx.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        FieldMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Appends `other`'s columns on the right.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Self::new(self.rows, self.cols + other.cols, data)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> FieldMatrix<G> {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[F]) -> Result<Vec<F>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows).map(|i| crate::exact::dot(self.row(i), x)).collect())
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, x: &[F]) -> Result<Vec<F>> {
        self.transpose().mul_vec(x)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    /// First negative entry, if any.
    pub fn find_negative(&self) -> Option<(usize, usize)> {
        let k = self.data.iter().position(F::is_negative)?;
        Some((k / self.cols, k % self.cols))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.find_negative().is_none()
    }

    pub fn column_sums(&self) -> Vec<F> {
        (0..self.cols).map(|j| sum(&self.column(j))).collect()
    }

    pub fn row_sums(&self) -> Vec<F> {
        (0..self.rows).map(|i| sum(self.row(i))).collect()
    }

    pub fn is_column_stochastic(&self) -> bool {
        self.is_nonnegative() && self.column_sums().iter().all(|s| *s == F::one())
    }

    pub fn is_row_stochastic(&self) -> bool {
        self.is_nonnegative() && self.row_sums().iter().all(|s| *s == F::one())
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Columns are scanned left to right; the pivot in each column is the
    /// first nonzero entry at or below the current row.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j).clone() * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Greedy left-to-right maximal independent column set (lexicographically
    /// first), i.e. the pivot columns of the RREF.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }
}

impl<F: fmt::Debug> fmt::Debug for FieldMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A particular solution of `A x = b` plus a basis of the kernel of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution<F> {
    pub particular: Vec<F>,
    pub kernel: Vec<Vec<F>>,
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
pub fn solve_linear<F: Field>(a: &FieldMatrix<F>, b: &[F]) -> Result<Option<LinearSolution<F>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let augmented = a.hstack(&FieldMatrix::column_vector(b))?;
    let (r, pivots) = augmented.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = vec![F::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r.get(row, n).clone();
    }
    let free: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect();
    Ok(Some(LinearSolution { particular, kernel }))
}

/// Result of dropping zero columns and scaling the rest to sum 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticNormalization<F> {
    pub normalized: FieldMatrix<F>,
    /// Indices into the original columns, in order.
    pub kept_columns: Vec<usize>,
    /// Column sum of each kept original column.
    pub scale_factors: Vec<F>,
    pub original_cols: usize,
}

impl<F: Field> StochasticNormalization<F> {
    /// Rebuilds the original matrix, zero columns included.
    pub fn denormalize(&self) -> FieldMatrix<F> {
        let mut out = FieldMatrix::zeros(self.normalized.rows(), self.original_cols);
        for (k, (&j, s)) in self.kept_columns.iter().zip(&self.scale_factors).enumerate() {
            for i in 0..out.rows() {
                out.set(i, j, self.normalized.get(i, k).clone() * s);
            }
        }
        out
    }
}

pub fn column_stochastic_normalize<F: Field>(
    m: &FieldMatrix<F>,
) -> Result<StochasticNormalization<F>> {
    if let Some((row, col)) = m.find_negative() {
        return Err(Error::NegativeEntry { row, col });
    }
    let mut kept = Vec::new();
    let mut scales = Vec::new();
    let mut cols = Vec::new();
    for j in 0..m.cols() {
        let c = m.column(j);
        let s = sum(&c);
        if s.is_zero() {
            continue;
        }
        let inv = s.inv()?;
        cols.push(c.into_iter().map(|v| v * &inv).collect::<Vec<_>>());
        kept.push(j);
        scales.push(s);
    }
    let mut normalized = FieldMatrix::from_columns(&cols)?;
    if cols.is_empty() {
        normalized = FieldMatrix::zeros(m.rows(), 0);
    }
    Ok(StochasticNormalization {
        normalized,
        kept_columns: kept,
        scale_factors: scales,
        original_cols: m.cols(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn mat(rows: &[&[&str]]) -> FieldMatrix<Rational> {
        FieldMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn cube() -> FieldMatrix<Rational> {
        crate::data::cube_matrix()
    }

    #[test]
    fn identity_product() {
        let m = mat(&[&["1/4", "1/2", "3/4"], &["3/4", "1/2", "1/4"]]);
        assert_eq!(FieldMatrix::identity(2).mul(&m).unwrap(), m);
    }

    #[test]
    fn small_product() {
        let a = mat(&[&["1", "1"], &["0", "1"]]);
        let b = mat(&[&["1", "0"], &["1", "1"]]);
        assert_eq!(a.mul(&b).unwrap(), mat(&[&["2", "1"], &["1", "1"]]));
        assert!(a.mul(&FieldMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(cube().rank(), 4);
        assert_eq!(FieldMatrix::<Rational>::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn solve_cases() {
        let s = solve_linear(&FieldMatrix::identity(2), &[Rational::new(1, 3), Rational::new(2, 3)])
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![Rational::new(1, 3), Rational::new(2, 3)]);
        assert!(s.kernel.is_empty());

        let s = solve_linear(&mat(&[&["1", "1"]]), &[Rational::one()]).unwrap().unwrap();
        assert_eq!(s.particular, vec![Rational::one(), Rational::zero()]);
        assert_eq!(s.kernel, vec![vec![Rational::from_int(-1), Rational::one()]]);

        let none = solve_linear(&mat(&[&["1"], &["1"]]), &[Rational::zero(), Rational::one()]).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn independent_column_selection() {
        assert_eq!(mat(&[&["1", "2"], &["2", "4"]]).independent_columns(), vec![0]);
        assert_eq!(FieldMatrix::<Rational>::identity(3).independent_columns(), vec![0, 1, 2]);
        let idx = cube().independent_columns();
        assert_eq!(idx.len(), 4);
        assert_eq!(idx[0], 0);
        assert_eq!(cube().select_columns(&idx).rank(), 4);
    }

    #[test]
    fn normalize_cube() {
        let n = column_stochastic_normalize(&cube()).unwrap();
        assert!(n.normalized.is_column_stochastic());
        assert!(n.scale_factors.iter().all(|s| *s == Rational::from_int(3)));
        assert_eq!(n.denormalize(), cube());
    }

    #[test]
    fn normalize_already_stochastic() {
        let m = mat(&[&["1/4", "1/2", "3/4"], &["3/4", "1/2", "1/4"]]);
        let n = column_stochastic_normalize(&m).unwrap();
        assert_eq!(n.normalized, m);
        assert!(n.scale_factors.iter().all(|s| *s == Rational::one()));
    }

    #[test]
    fn normalize_drops_zero_columns() {
        let m = mat(&[&["1", "0", "2"], &["1", "0", "2"]]);
        let n = column_stochastic_normalize(&m).unwrap();
        assert_eq!(n.kept_columns, vec![0, 2]);
        assert_eq!(n.normalized.cols(), 2);
        assert_eq!(n.denormalize(), m);
        assert!(matches!(
            column_stochastic_normalize(&mat(&[&["-1"]])),
            Err(Error::NegativeEntry { row: 0, col: 0 })
        ));
    }
}
