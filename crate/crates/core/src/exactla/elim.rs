//! Row reduction. Rows are reduced one at a time against a sparse pivot table. Over F_p
//! the work row is a dense residue buffer; over Q rows stay sparse, integral and
//! primitive, and rationals appear only when the finished rows are normalized.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{abs_gcd, integer_row, inv_mod};
use super::{Field, FieldScalar, LinalgError, SparseMatrix};

/// Reduced row echelon form of a matrix: pivot rows with unit pivots and zeros in every
/// other pivot column. Rows are ordered by pivot column.
#[derive(Clone, Debug)]
pub struct Rref {
    field: Field,
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<(usize, FieldScalar)>>,
}

impl Rref {
    pub fn of(m: &SparseMatrix) -> Rref {
        match m.field() {
            Field::Prime(p) => {
                let (pivots, rows) = fp_rref(m, p);
                Rref {
                    field: m.field(),
                    cols: m.cols(),
                    pivots,
                    rows: rows
                        .into_iter()
                        .map(|r| {
                            r.into_iter()
                                .map(|(c, v)| (c as usize, FieldScalar::Modular { residue: v, modulus: p }))
                                .collect()
                        })
                        .collect(),
                }
            }
            Field::Rational => {
                let (pivots, rows) = q_rref(m);
                Rref {
                    field: m.field(),
                    cols: m.cols(),
                    pivots,
                    rows: rows
                        .into_iter()
                        .map(|r| r.into_iter().map(|(c, v)| (c, FieldScalar::Rational(v))).collect())
                        .collect(),
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<(usize, FieldScalar)>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces a dense vector modulo the row space; the result vanishes in every pivot column.
    pub fn reduce(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = v.to_vec();
        for (p, row) in self.pivots.iter().zip(&self.rows) {
            let f = out[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (c, x) in row {
                out[*c] = &out[*c] - &(&f * x);
            }
        }
        out
    }

    pub fn contains(&self, v: &[FieldScalar]) -> bool {
        self.reduce(v).iter().all(FieldScalar::is_zero)
    }

    /// Kernel basis of the original matrix: one column per free variable.
    pub fn kernel(&self) -> SparseMatrix {
        let free = self.free_columns();
        let mut triplets = Vec::new();
        let neg_one = self.field.from_i64(-1);
        for (k, &f) in free.iter().enumerate() {
            triplets.push((f, k, self.field.one()));
            for (p, row) in self.pivots.iter().zip(&self.rows) {
                if let Ok(i) = row.binary_search_by_key(&f, |e| e.0) {
                    triplets.push((*p, k, &row[i].1 * &neg_one));
                }
            }
        }
        SparseMatrix::from_triplets(self.field, self.cols, free.len(), triplets)
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    match m.field() {
        Field::Prime(p) => fp_echelon(m, p).0.len(),
        Field::Rational => q_echelon(m).len(),
    }
}

/// Columns form a basis of the null space of `m`.
pub fn kernel_basis(m: &SparseMatrix) -> SparseMatrix {
    Rref::of(m).kernel()
}

/// Some exact solution of `a x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero, so the answer is a function of the input alone.
pub fn solve_feasible(a: &SparseMatrix, b: &[FieldScalar]) -> Result<Option<Vec<FieldScalar>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::ShapeMismatch {
            op: "solve",
            left: a.shape(),
            right: (b.len(), 1),
        });
    }
    if let Some(x) = b.iter().find(|x| x.field() != a.field()) {
        return Err(LinalgError::FieldMismatch {
            expected: a.field(),
            found: x.field(),
        });
    }
    let n = a.cols();
    let rhs = SparseMatrix::column(a.field(), b);
    let aug = SparseMatrix::hstack(&[a, &rhs])?;
    let r = Rref::of(&aug);
    if r.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![a.field().zero(); n];
    for (p, row) in r.pivots.iter().zip(&r.rows) {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[*p] = v.clone();
            }
        }
    }
    Ok(Some(x))
}

/// Column indices of `m` that form a basis of its column space (first independent columns).
pub fn column_basis(m: &SparseMatrix) -> Vec<usize> {
    Rref::of(m).pivots.clone()
}

/// Inverse of a square matrix.
pub fn inverse(m: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::ShapeMismatch {
            op: "inverse",
            left: m.shape(),
            right: m.shape(),
        });
    }
    let n = m.rows();
    let aug = SparseMatrix::hstack(&[m, &SparseMatrix::identity(m.field(), n)])?;
    let r = Rref::of(&aug);
    if r.rank() < n || r.pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    Ok(SparseMatrix::from_triplets(
        m.field(),
        n,
        n,
        r.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(|(c, _)| *c >= n)
                .map(move |(c, v)| (i, c - n, v.clone()))
        }),
    ))
}

type FpRow = Vec<(u32, u64)>;

/// Echelon form over F_p: pivot columns (in discovery order) and monic pivot rows whose
/// leading entry sits in the pivot column.
fn fp_echelon(m: &SparseMatrix, p: u64) -> (Vec<usize>, Vec<FpRow>) {
    let cols = m.cols();
    let mut pivot_row: Vec<Option<usize>> = vec![None; cols];
    let mut pivots = Vec::new();
    let mut rows: Vec<FpRow> = Vec::new();
    let mut work = vec![0u64; cols];
    let mut entries = m.entries().iter().peekable();
    while let Some(&&(r, lo, _)) = entries.peek() {
        while let Some((rr, c, v)) = entries.peek() {
            if *rr != r {
                break;
            }
            work[*c] = v.residue();
            entries.next();
        }
        let mut lead = None;
        for c in lo..cols {
            let x = work[c];
            if x == 0 {
                continue;
            }
            match pivot_row[c] {
                Some(i) => {
                    let f = p - x;
                    for &(cc, y) in &rows[i] {
                        let cc = cc as usize;
                        work[cc] = (work[cc] + f * y) % p;
                    }
                }
                None => {
                    lead = Some(c);
                    break;
                }
            }
        }
        if let Some(l) = lead {
            let inv = inv_mod(work[l], p);
            let mut row = Vec::new();
            for (c, w) in work.iter_mut().enumerate().take(cols).skip(l) {
                if *w != 0 {
                    row.push((c as u32, *w * inv % p));
                    *w = 0;
                }
            }
            pivot_row[l] = Some(rows.len());
            pivots.push(l);
            rows.push(row);
        }
    }
    (pivots, rows)
}

fn fp_rref(m: &SparseMatrix, p: u64) -> (Vec<usize>, Vec<FpRow>) {
    let (pivots, rows) = fp_echelon(m, p);
    let cols = m.cols();
    let mut order: Vec<usize> = (0..pivots.len()).collect();
    order.sort_by_key(|&i| pivots[i]);
    let mut pivot_row: Vec<Option<usize>> = vec![None; cols];
    for &i in &order {
        pivot_row[pivots[i]] = Some(i);
    }
    let mut reduced: Vec<Option<FpRow>> = vec![None; rows.len()];
    let mut work = vec![0u64; cols];
    for &i in order.iter().rev() {
        let lead = pivots[i];
        for &(c, v) in &rows[i] {
            work[c as usize] = v;
        }
        for c in lead + 1..cols {
            let x = work[c];
            if x == 0 {
                continue;
            }
            if let Some(j) = pivot_row[c] {
                let f = p - x;
                for &(cc, y) in reduced[j].as_ref().expect("later pivots reduced first") {
                    let cc = cc as usize;
                    work[cc] = (work[cc] + f * y) % p;
                }
            }
        }
        let mut row = Vec::new();
        for (c, w) in work.iter_mut().enumerate().take(cols).skip(lead) {
            if *w != 0 {
                row.push((c as u32, *w));
                *w = 0;
            }
        }
        reduced[i] = Some(row);
    }
    let piv = order.iter().map(|&i| pivots[i]).collect();
    let rows = order
        .iter()
        .map(|&i| reduced[i].take().expect("every row reduced"))
        .collect();
    (piv, rows)
}

/// Fraction-free echelon form over Q. Returns `(pivot column, integer row)` pairs in
/// pivot order; each row is a nonzero multiple of an echelon row of the input.
type ZRow = Vec<(usize, BigInt)>;

fn make_primitive(row: &mut ZRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| abs_gcd(&acc, x));
    let neg = row.first().is_some_and(|(_, x)| x.is_negative());
    if !g.is_one() || neg {
        let g = if neg { -g } else { g };
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `(p/g)·row − (f/g)·pivot`, `f` the entry of `row` in the pivot's leading column `c`,
/// `p` the pivot's leading entry and `g = gcd(p, f)`; the result is made primitive.
fn eliminate(row: &ZRow, pivot: &ZRow, c: usize) -> ZRow {
    let p = &pivot[0].1;
    let f = &row.iter().find(|e| e.0 == c).expect("entry present").1;
    let g = abs_gcd(p, f);
    let (sp, sf) = (p / &g, f / &g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, &sp * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&sf * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &sp * &row[i - 1].1 - &sf * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    make_primitive(&mut out);
    out
}

/// Echelon form over Z of the integer-scaled rows: each row is primitive and has a
/// distinct leading column. Rows are fed sparsest first to limit fill-in.
fn q_echelon(m: &SparseMatrix) -> Vec<ZRow> {
    let mut input: Vec<ZRow> = m
        .row_lists()
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let vals: Vec<BigRational> = r
                .iter()
                .map(|(_, v)| v.as_rational().expect("rational entry").clone())
                .collect();
            let mut row: ZRow = r.iter().map(|e| e.0).zip(integer_row(&vals)).collect();
            make_primitive(&mut row);
            row
        })
        .collect();
    input.sort_by_key(Vec::len);
    let mut pivot_of: Vec<Option<usize>> = vec![None; m.cols()];
    let mut rows: Vec<ZRow> = Vec::new();
    for mut row in input {
        while let Some(&(lo, _)) = row.first() {
            match pivot_of[lo] {
                Some(k) => row = eliminate(&row, &rows[k], lo),
                None => {
                    pivot_of[lo] = Some(rows.len());
                    rows.push(row);
                    break;
                }
            }
        }
    }
    rows
}

fn q_rref(m: &SparseMatrix) -> (Vec<usize>, Vec<Vec<(usize, BigRational)>>) {
    let mut rows = q_echelon(m);
    rows.sort_by_key(|r| r[0].0);
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let mut slot: Vec<Option<usize>> = vec![None; m.cols()];
    for (i, &c) in pivots.iter().enumerate() {
        slot[c] = Some(i);
    }
    // rows below i are already reduced, so they carry no other pivot column
    for i in (0..rows.len()).rev() {
        let targets: Vec<usize> = rows[i][1..].iter().filter_map(|(c, _)| slot[*c]).collect();
        for k in targets {
            let reduced = eliminate(&rows[i], &rows[k], pivots[k]);
            rows[i] = reduced;
        }
    }
    let out = rows
        .into_iter()
        .map(|r| {
            let lead = r[0].1.clone();
            r.into_iter()
                .map(|(c, x)| (c, BigRational::new(x, lead.clone())))
                .collect()
        })
        .collect();
    (pivots, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        let f = Field::Prime(101);
        assert_eq!(rank(&SparseMatrix::identity(f, 2)), 2);
        assert_eq!(rank(&SparseMatrix::zeros(f, 3, 5)), 0);
        let q = Field::Rational;
        assert_eq!(rank(&SparseMatrix::from_i64_rows(q, &[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_of_single_row() {
        let q = Field::Rational;
        let m = SparseMatrix::from_i64_rows(q, &[&[1, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(kernel_basis(&SparseMatrix::identity(q, 2)).cols(), 0);
        assert_eq!(kernel_basis(&SparseMatrix::zeros(q, 2, 3)).cols(), 3);
    }

    #[test]
    fn solving() {
        let q = Field::Rational;
        let a = SparseMatrix::from_i64_rows(q, &[&[1, 1]]);
        let x = solve_feasible(&a, &[q.from_i64(3)]).unwrap().unwrap();
        assert_eq!(&x[0] + &x[1], q.from_i64(3));
        let z = SparseMatrix::zeros(q, 1, 2);
        assert!(solve_feasible(&z, &[q.one()]).unwrap().is_none());
        let id = SparseMatrix::identity(q, 3);
        let b = vec![q.from_i64(4), q.from_i64(-2), q.from_ratio(1, 3).unwrap()];
        assert_eq!(solve_feasible(&id, &b).unwrap().unwrap(), b);
        assert!(solve_feasible(&id, &b[..2]).is_err());
    }

    #[test]
    fn rref_is_reduced_over_both_fields() {
        for f in [Field::Rational, Field::Prime(7)] {
            let m = SparseMatrix::from_i64_rows(f, &[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2]]);
            let r = Rref::of(&m);
            assert_eq!(r.rank(), 2);
            assert_eq!(r.pivots(), &[0, 1]);
            for (p, row) in r.pivots().iter().zip(r.rows()) {
                assert_eq!(row[0].0, *p);
                assert!(row[0].1.is_one());
                for q in r.pivots() {
                    if q != p {
                        assert!(row.iter().all(|(c, _)| c != q));
                    }
                }
            }
        }
    }

    #[test]
    fn bareiss_handles_fractions() {
        let q = Field::Rational;
        let h = |n, d| q.from_ratio(n, d).unwrap();
        let m = SparseMatrix::from_dense(
            q,
            &[
                vec![h(1, 1), h(1, 2), h(1, 3)],
                vec![h(1, 2), h(1, 3), h(1, 4)],
                vec![h(1, 3), h(1, 4), h(1, 5)],
            ],
        );
        assert_eq!(rank(&m), 3);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), SparseMatrix::identity(q, 3));
        assert_eq!(inv.get(0, 0), q.from_i64(9));
    }

    #[test]
    fn singular_inverse_is_rejected() {
        let f = Field::Prime(5);
        let m = SparseMatrix::from_i64_rows(f, &[&[1, 2], &[2, 4]]);
        assert!(matches!(inverse(&m), Err(LinalgError::Singular)));
    }
}
