use std::collections::BTreeMap;

use super::{Field, FieldScalar, LinalgError};

/// A coordinate-list matrix over a single field.
///
/// Entries are stored row-major without duplicates or explicit zeros. Basis labels are
/// optional and opaque; they travel with the matrix through serialization only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<(usize, usize, FieldScalar)>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl SparseMatrix {
    /// Strict constructor: rejects zeros, duplicates, out-of-range indices and foreign scalars.
    /// The entries are sorted into row-major order.
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, FieldScalar)>,
    ) -> Result<Self, LinalgError> {
        for (r, c, v) in &entries {
            if *r >= rows || *c >= cols {
                return Err(LinalgError::IndexOutOfBounds {
                    row: *r,
                    col: *c,
                    rows,
                    cols,
                });
            }
            if v.field() != field {
                return Err(LinalgError::FieldMismatch {
                    expected: field,
                    found: v.field(),
                });
            }
            if v.is_zero() {
                return Err(LinalgError::ExplicitZero { row: *r, col: *c });
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(LinalgError::DuplicateEntry {
                row: w[0].0,
                col: w[0].1,
            });
        }
        Ok(SparseMatrix {
            rows,
            cols,
            field,
            entries,
            row_labels: None,
            col_labels: None,
        })
    }

    /// Lenient constructor: duplicate coordinates are summed and zeros dropped.
    /// Panics on out-of-range indices or foreign scalars (a programming error here).
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, FieldScalar)>,
    ) -> Self {
        let mut acc: BTreeMap<(usize, usize), FieldScalar> = BTreeMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            assert_eq!(v.field(), field, "foreign scalar in from_triplets");
            match acc.get_mut(&(r, c)) {
                Some(x) => *x = &*x + &v,
                None => {
                    acc.insert((r, c), v);
                }
            }
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        SparseMatrix {
            rows,
            cols,
            field,
            entries,
            row_labels: None,
            col_labels: None,
        }
    }

    /// Builds a matrix from small integer triplets.
    pub fn from_i64_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        Self::from_triplets(
            field,
            rows,
            cols,
            triplets.into_iter().map(|(r, c, v)| (r, c, field.from_i64(v))),
        )
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            field,
            entries: Vec::new(),
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            field,
            entries: (0..n).map(|i| (i, i, field.one())).collect(),
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_dense(field: Field, rows: &[Vec<FieldScalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            field,
            rows.len(),
            cols,
            rows.iter().enumerate().flat_map(|(r, row)| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<FieldScalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_dense(field, &dense)
    }

    /// A single column.
    pub fn column(field: Field, values: &[FieldScalar]) -> Self {
        Self::from_triplets(
            field,
            values.len(),
            1,
            values.iter().enumerate().map(|(i, v)| (i, 0, v.clone())),
        )
    }

    pub fn with_labels(mut self, rows: Option<Vec<String>>, cols: Option<Vec<String>>) -> Self {
        if let Some(l) = &rows {
            assert_eq!(l.len(), self.rows);
        }
        if let Some(l) = &cols {
            assert_eq!(l.len(), self.cols);
        }
        self.row_labels = rows;
        self.col_labels = cols;
        self
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

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[(usize, usize, FieldScalar)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> FieldScalar {
        match self.entries.binary_search_by_key(&(row, col), |e| (e.0, e.1)) {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<FieldScalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            out[*r][*c] = v.clone();
        }
        out
    }

    /// Row lists `(col, value)`, each sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(usize, FieldScalar)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (r, c, v) in &self.entries {
            out[*r].push((*c, v.clone()));
        }
        out
    }

    /// Column lists `(row, value)`, each sorted by row.
    pub fn col_lists(&self) -> Vec<Vec<(usize, FieldScalar)>> {
        let mut out = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            out[*c].push((*r, v.clone()));
        }
        out
    }

    /// Dense column `j`.
    pub fn column_vec(&self, j: usize) -> Vec<FieldScalar> {
        let mut out = vec![self.field.zero(); self.rows];
        for (r, c, v) in &self.entries {
            if *c == j {
                out[*r] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    fn check_field(&self, other: &SparseMatrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rhs = other.row_lists();
        let mut triplets = Vec::new();
        let mut current_row = usize::MAX;
        let mut acc: BTreeMap<usize, FieldScalar> = BTreeMap::new();
        let flush = |row: usize, acc: &mut BTreeMap<usize, FieldScalar>, out: &mut Vec<_>| {
            for (c, v) in std::mem::take(acc) {
                if !v.is_zero() {
                    out.push((row, c, v));
                }
            }
        };
        for (r, k, a) in &self.entries {
            if *r != current_row {
                if current_row != usize::MAX {
                    flush(current_row, &mut acc, &mut triplets);
                }
                current_row = *r;
            }
            for (c, b) in &rhs[*k] {
                let prod = a * b;
                match acc.get_mut(c) {
                    Some(x) => *x = &*x + &prod,
                    None => {
                        acc.insert(*c, prod);
                    }
                }
            }
        }
        if current_row != usize::MAX {
            flush(current_row, &mut acc, &mut triplets);
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            entries: triplets,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn mul_vec(&self, v: &[FieldScalar]) -> Result<Vec<FieldScalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let mut out = vec![self.field.zero(); self.rows];
        for (r, c, a) in &self.entries {
            if v[*c].field() != self.field {
                return Err(LinalgError::FieldMismatch {
                    expected: self.field,
                    found: v[*c].field(),
                });
            }
            out[*r] = &out[*r] + &(a * &v[*c]);
        }
        Ok(out)
    }

    fn combine(&self, other: &SparseMatrix, sign: i64) -> Result<SparseMatrix, LinalgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let s = self.field.from_i64(sign);
        Ok(SparseMatrix::from_triplets(
            self.field,
            self.rows,
            self.cols,
            self.entries
                .iter()
                .cloned()
                .chain(other.entries.iter().map(|(r, c, v)| (*r, *c, v * &s))),
        ))
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.combine(other, -1)
    }

    pub fn scale(&self, s: &FieldScalar) -> SparseMatrix {
        assert_eq!(s.field(), self.field);
        if s.is_zero() {
            return SparseMatrix::zeros(self.field, self.rows, self.cols);
        }
        SparseMatrix {
            entries: self.entries.iter().map(|(r, c, v)| (*r, *c, v * s)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&self.field.from_i64(-1))
    }

    /// Kronecker product; row `(i, k)` of the result is `i * other.rows + k`.
    pub fn kron(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        self.check_field(other)?;
        let mut triplets = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, a) in &self.entries {
            for (r2, c2, b) in &other.entries {
                triplets.push((r1 * other.rows + r2, c1 * other.cols + c2, a * b));
            }
        }
        let mut m = SparseMatrix {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            field: self.field,
            entries: triplets,
            row_labels: None,
            col_labels: None,
        };
        m.entries.sort_by_key(|e| (e.0, e.1));
        Ok(m)
    }

    /// Places blocks into a larger zero matrix at the given offsets. Overlapping blocks are summed.
    pub fn assemble(field: Field, rows: usize, cols: usize, blocks: &[(usize, usize, &SparseMatrix)]) -> SparseMatrix {
        SparseMatrix::from_triplets(
            field,
            rows,
            cols,
            blocks.iter().flat_map(|(ro, co, m)| {
                assert!(ro + m.rows <= rows && co + m.cols <= cols, "block overflows");
                m.entries.iter().map(move |(r, c, v)| (r + ro, c + co, v.clone()))
            }),
        )
    }

    pub fn hstack(parts: &[&SparseMatrix]) -> Result<SparseMatrix, LinalgError> {
        let first = parts.first().ok_or(LinalgError::Empty)?;
        let rows = first.rows;
        let mut offset = 0;
        let mut blocks = Vec::new();
        for p in parts {
            first.check_field(p)?;
            if p.rows != rows {
                return Err(LinalgError::ShapeMismatch {
                    op: "hstack",
                    left: first.shape(),
                    right: p.shape(),
                });
            }
            blocks.push((0, offset, *p));
            offset += p.cols;
        }
        Ok(Self::assemble(first.field, rows, offset, &blocks))
    }

    pub fn vstack(parts: &[&SparseMatrix]) -> Result<SparseMatrix, LinalgError> {
        let first = parts.first().ok_or(LinalgError::Empty)?;
        let cols = first.cols;
        let mut offset = 0;
        let mut blocks = Vec::new();
        for p in parts {
            first.check_field(p)?;
            if p.cols != cols {
                return Err(LinalgError::ShapeMismatch {
                    op: "vstack",
                    left: first.shape(),
                    right: p.shape(),
                });
            }
            blocks.push((offset, 0, *p));
            offset += p.rows;
        }
        Ok(Self::assemble(first.field, offset, cols, &blocks))
    }

    pub fn block_diag(field: Field, parts: &[&SparseMatrix]) -> SparseMatrix {
        let (mut ro, mut co) = (0, 0);
        let mut blocks = Vec::new();
        for p in parts {
            assert_eq!(p.field, field);
            blocks.push((ro, co, *p));
            ro += p.rows;
            co += p.cols;
        }
        Self::assemble(field, ro, co, &blocks)
    }

    pub fn select_cols(&self, cols: &[usize]) -> SparseMatrix {
        let pos: BTreeMap<usize, Vec<usize>> = cols.iter().enumerate().fold(BTreeMap::new(), |mut m, (new, &old)| {
            m.entry(old).or_insert_with(Vec::new).push(new);
            m
        });
        SparseMatrix::from_triplets(
            self.field,
            self.rows,
            cols.len(),
            self.entries
                .iter()
                .flat_map(|(r, c, v)| pos.get(c).into_iter().flatten().map(move |&n| (*r, n, v.clone()))),
        )
    }

    pub fn select_rows(&self, rows: &[usize]) -> SparseMatrix {
        self.transpose().select_cols(rows).transpose()
    }

    /// Flattens row-major into a single column of length `rows * cols`.
    pub fn vectorize(&self) -> Vec<(usize, FieldScalar)> {
        self.entries
            .iter()
            .map(|(r, c, v)| (r * self.cols + c, v.clone()))
            .collect()
    }

    /// Inverse of [`SparseMatrix::vectorize`].
    pub fn unvectorize(field: Field, rows: usize, cols: usize, v: &[FieldScalar]) -> SparseMatrix {
        assert_eq!(v.len(), rows * cols);
        SparseMatrix::from_triplets(
            field,
            rows,
            cols,
            v.iter()
                .enumerate()
                .map(|(i, x)| (i / cols.max(1), i % cols.max(1), x.clone())),
        )
    }

    pub fn nonzero_structure(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().map(|(r, c, _)| (*r, *c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn strict_constructor_validates() {
        let f = Field::Prime(7);
        assert!(SparseMatrix::new(f, 2, 2, vec![(2, 0, f.one())]).is_err());
        assert!(SparseMatrix::new(f, 2, 2, vec![(0, 0, f.zero())]).is_err());
        assert!(SparseMatrix::new(f, 2, 2, vec![(0, 0, f.one()), (0, 0, f.one())]).is_err());
        assert!(matches!(
            SparseMatrix::new(f, 2, 2, vec![(0, 0, q().one())]),
            Err(LinalgError::FieldMismatch { .. })
        ));
        let m = SparseMatrix::new(f, 2, 2, vec![(1, 0, f.one()), (0, 1, f.one())]).unwrap();
        assert_eq!(m.entries()[0].0, 0);
    }

    #[test]
    fn product_and_kron() {
        let a = SparseMatrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        let b = SparseMatrix::from_i64_rows(q(), &[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, SparseMatrix::from_i64_rows(q(), &[&[2, 1], &[4, 3]]));
        let k = SparseMatrix::identity(q(), 2).kron(&b).unwrap();
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(2, 3), q().one());
        assert!(a.mul(&SparseMatrix::zeros(q(), 3, 1)).is_err());
    }

    #[test]
    fn stacking_and_selection() {
        let a = SparseMatrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        let h = SparseMatrix::hstack(&[&a, &a]).unwrap();
        assert_eq!(h.shape(), (2, 4));
        assert_eq!(h.get(1, 3), q().from_i64(4));
        let v = SparseMatrix::vstack(&[&a, &a]).unwrap();
        assert_eq!(v.select_rows(&[3]), SparseMatrix::from_i64_rows(q(), &[&[3, 4]]));
        assert_eq!(a.select_cols(&[1, 1]).get(0, 1), q().from_i64(2));
    }
}
