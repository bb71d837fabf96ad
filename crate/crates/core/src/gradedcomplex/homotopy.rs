use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Bidegree, BigradedComplex, GradedError};
use crate::exactla::{kernel_basis, solve_feasible, Field, SparseMatrix};

/// Action matrices per bidegree. Every term must carry the same number of generators;
/// a homotopy is admissible when each of its blocks intertwines the actions.
#[derive(Clone, Debug, Default)]
pub struct Equivariance {
    pub actions: BTreeMap<Bidegree, Vec<SparseMatrix>>,
}

impl Equivariance {
    pub fn new(actions: BTreeMap<Bidegree, Vec<SparseMatrix>>) -> Equivariance {
        Equivariance { actions }
    }

    fn at(&self, x: &BigradedComplex, b: Bidegree) -> Result<&[SparseMatrix], GradedError> {
        match self.actions.get(&b) {
            Some(a) => {
                if let Some(m) = a.iter().find(|m| m.shape() != (x.dim(b.0, b.1), x.dim(b.0, b.1))) {
                    return Err(GradedError::Invalid(format!(
                        "action at ({}, {}) has shape {:?}",
                        b.0,
                        b.1,
                        m.shape()
                    )));
                }
                Ok(a)
            }
            None => Err(GradedError::Invalid(format!(
                "no action matrices supplied at ({}, {})",
                b.0, b.1
            ))),
        }
    }
}

/// Columns span the row-major vectorizations of all `H` with `tgt[g]·H = H·src[g]` for
/// every generator `g`.
pub fn commutant_basis(
    field: Field,
    src: &[SparseMatrix],
    tgt: &[SparseMatrix],
    src_dim: usize,
    tgt_dim: usize,
) -> SparseMatrix {
    assert_eq!(src.len(), tgt.len(), "generator counts differ");
    if src.is_empty() {
        return SparseMatrix::identity(field, src_dim * tgt_dim);
    }
    let id_s = SparseMatrix::identity(field, src_dim);
    let id_t = SparseMatrix::identity(field, tgt_dim);
    let eqs: Vec<SparseMatrix> = src
        .iter()
        .zip(tgt)
        .map(|(s, t)| {
            t.kron(&id_s)
                .and_then(|a| a.sub(&id_t.kron(&s.transpose())?))
                .expect("square actions")
        })
        .collect();
    let refs: Vec<&SparseMatrix> = eqs.iter().collect();
    kernel_basis(&SparseMatrix::vstack(&refs).expect("equal widths"))
}

/// Blocks `h^{p,t}: X^{p,t} → X^{p−1,t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub blocks: BTreeMap<Bidegree, SparseMatrix>,
}

impl Homotopy {
    pub fn block(&self, x: &BigradedComplex, p: i64, t: i64) -> SparseMatrix {
        self.blocks
            .get(&(p, t))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(x.field(), x.dim(p - 1, t), x.dim(p, t)))
    }

    /// Exact check of `d h + h d = id` on every slice.
    pub fn verify(&self, x: &BigradedComplex) -> bool {
        x.support().into_iter().all(|(p, t)| {
            let a = x.d(p - 1, t).mul(&self.block(x, p, t)).expect("shapes");
            let b = self.block(x, p + 1, t).mul(&x.d(p, t)).expect("shapes");
            a.add(&b).expect("shapes") == SparseMatrix::identity(x.field(), x.dim(p, t))
        })
    }

    /// True when every block intertwines the given actions.
    pub fn is_equivariant(&self, x: &BigradedComplex, eq: &Equivariance) -> bool {
        self.blocks.iter().all(|(&(p, t), h)| {
            let (Some(src), Some(tgt)) = (eq.actions.get(&(p, t)), eq.actions.get(&(p - 1, t))) else {
                return false;
            };
            src.iter()
                .zip(tgt)
                .all(|(s, g)| g.mul(h).expect("shapes") == h.mul(s).expect("shapes"))
                && h.shape() == (x.dim(p - 1, t), x.dim(p, t))
        })
    }
}

/// Searches for a contracting homotopy, one linear system per internal degree. With
/// `equivariance`, each block is confined to the commutant of the actions first.
pub fn null_homotopy(
    x: &BigradedComplex,
    equivariance: Option<&Equivariance>,
) -> Result<Option<Homotopy>, GradedError> {
    if !x.window().is_position_bounded() {
        return Err(GradedError::Unbounded);
    }
    let mut bases = BTreeMap::new();
    if let Some(eq) = equivariance {
        for (p, t) in x.support() {
            if x.dim(p - 1, t) == 0 {
                continue;
            }
            let src = eq.at(x, (p, t))?;
            let tgt = eq.at(x, (p - 1, t))?;
            if src.len() != tgt.len() {
                return Err(GradedError::Invalid(format!(
                    "generator counts differ between ({p}, {t}) and ({}, {t})",
                    p - 1
                )));
            }
            bases.insert(
                (p, t),
                commutant_basis(x.field(), src, tgt, x.dim(p, t), x.dim(p - 1, t)),
            );
        }
        solve(x, Some(&bases))
    } else {
        solve(x, None)
    }
}

/// Like [`null_homotopy`], but each block `h^{p,t}` must lie in the span of the columns of
/// `bases[(p,t)]` (row-major vectorizations). Blocks without a basis are forced to zero.
pub fn null_homotopy_spanned(
    x: &BigradedComplex,
    bases: &BTreeMap<Bidegree, SparseMatrix>,
) -> Result<Option<Homotopy>, GradedError> {
    if !x.window().is_position_bounded() {
        return Err(GradedError::Unbounded);
    }
    for (&(p, t), k) in bases {
        if k.rows() != x.dim(p, t) * x.dim(p - 1, t) {
            return Err(GradedError::Invalid(format!(
                "homotopy basis at ({p}, {t}) has {} rows, expected {}",
                k.rows(),
                x.dim(p, t) * x.dim(p - 1, t)
            )));
        }
    }
    solve(x, Some(bases))
}

fn solve(
    x: &BigradedComplex,
    bases: Option<&BTreeMap<Bidegree, SparseMatrix>>,
) -> Result<Option<Homotopy>, GradedError> {
    let degrees = x.occupied_degrees();
    let per_degree: Vec<Option<BTreeMap<Bidegree, SparseMatrix>>> = degrees
        .par_iter()
        .map(|&t| solve_slice(x, t, bases))
        .collect::<Result<_, _>>()?;
    let mut blocks = BTreeMap::new();
    for r in per_degree {
        match r {
            Some(b) => blocks.extend(b),
            None => return Ok(None),
        }
    }
    let h = Homotopy { blocks };
    debug_assert!(h.verify(x));
    Ok(Some(h))
}

fn solve_slice(
    x: &BigradedComplex,
    t: i64,
    bases: Option<&BTreeMap<Bidegree, SparseMatrix>>,
) -> Result<Option<BTreeMap<Bidegree, SparseMatrix>>, GradedError> {
    let field = x.field();
    let positions: Vec<i64> = x.support().into_iter().filter(|b| b.1 == t).map(|b| b.0).collect();
    // unknown blocks and their parameter columns
    let mut params: BTreeMap<i64, (usize, Option<SparseMatrix>, usize)> = BTreeMap::new();
    let mut n_params = 0;
    for &p in &positions {
        let raw = x.dim(p, t) * x.dim(p - 1, t);
        if raw == 0 {
            continue;
        }
        let basis = bases.map(|b| {
            b.get(&(p, t))
                .cloned()
                .unwrap_or_else(|| SparseMatrix::zeros(field, raw, 0))
        });
        let width = basis.as_ref().map_or(raw, SparseMatrix::cols);
        params.insert(p, (n_params, basis, width));
        n_params += width;
    }
    let mut row_offset = BTreeMap::new();
    let mut n_rows = 0;
    for &p in &positions {
        row_offset.insert(p, n_rows);
        n_rows += x.dim(p, t) * x.dim(p, t);
    }
    let mut triplets = Vec::new();
    let mut place = |m: SparseMatrix, r0: usize, p: i64| {
        let (c0, basis, _) = &params[&p];
        let m = match basis {
            Some(k) => m.mul(k).expect("basis rows match"),
            None => m,
        };
        triplets.extend(m.entries().iter().map(|(r, c, v)| (r + r0, c + c0, v.clone())));
    };
    for &p in &positions {
        let n = x.dim(p, t);
        let r0 = row_offset[&p];
        if params.contains_key(&p) {
            // d^{p−1} h^p
            let m = x.d(p - 1, t).kron(&SparseMatrix::identity(field, n))?;
            place(m, r0, p);
        }
        if params.contains_key(&(p + 1)) {
            // h^{p+1} d^p
            let m = SparseMatrix::identity(field, n).kron(&x.d(p, t).transpose())?;
            place(m, r0, p + 1);
        }
    }
    let system = SparseMatrix::from_triplets(field, n_rows, n_params, triplets);
    let mut rhs = vec![field.zero(); n_rows];
    for &p in &positions {
        let n = x.dim(p, t);
        for i in 0..n {
            rhs[row_offset[&p] + i * n + i] = field.one();
        }
    }
    let Some(sol) = solve_feasible(&system, &rhs)? else {
        return Ok(None);
    };
    let mut out = BTreeMap::new();
    for (p, (c0, basis, width)) in params {
        let coeffs = &sol[c0..c0 + width];
        let raw: Vec<_> = match &basis {
            Some(k) => k.mul_vec(coeffs)?,
            None => coeffs.to_vec(),
        };
        let h = SparseMatrix::unvectorize(field, x.dim(p - 1, t), x.dim(p, t), &raw);
        if !h.is_zero() {
            out.insert((p, t), h);
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcomplex::{ComplexBuilder, Slice, Window};

    #[test]
    fn identity_complex_contracts() {
        let f = Field::Prime(101);
        let mut b = ComplexBuilder::new(f, Window::closed((0, 1), (0, 0)));
        b.slice(0, 0, Slice::anonymous(1, "a"))
            .slice(1, 0, Slice::anonymous(1, "b"))
            .differential(0, 0, SparseMatrix::identity(f, 1));
        let x = b.build().unwrap();
        let h = null_homotopy(&x, None).unwrap().unwrap();
        assert!(h.verify(&x));
    }

    #[test]
    fn single_term_does_not_contract() {
        let x = BigradedComplex::unit(Field::Rational, (0, 0));
        assert!(null_homotopy(&x, None).unwrap().is_none());
    }

    #[test]
    fn commutant_of_scalar_action_is_everything() {
        let f = Field::Prime(7);
        let s = vec![SparseMatrix::identity(f, 2)];
        let k = commutant_basis(f, &s, &s, 2, 2);
        assert_eq!(k.cols(), 4);
    }

    #[test]
    fn dual_numbers_block_equivariant_contraction() {
        // 0 → k → S → k → 0 with S = k[ε]/ε², basis (1, ε); exact but not split over S
        let f = Field::Prime(101);
        let mut b = ComplexBuilder::new(f, Window::closed((-1, 1), (0, 0)));
        b.slice(-1, 0, Slice::anonymous(1, "k"))
            .slice(0, 0, Slice::new(vec!["1".into(), "ε".into()]))
            .slice(1, 0, Slice::anonymous(1, "k"))
            .differential(-1, 0, SparseMatrix::from_i64_rows(f, &[&[0], &[1]]))
            .differential(0, 0, SparseMatrix::from_i64_rows(f, &[&[1, 0]]));
        let x = b.build().unwrap();
        assert!(null_homotopy(&x, None).unwrap().is_some());
        let eps_k = SparseMatrix::zeros(f, 1, 1);
        let eps_s = SparseMatrix::from_i64_rows(f, &[&[0, 0], &[1, 0]]);
        let eq = Equivariance::new(BTreeMap::from([
            ((-1, 0), vec![eps_k.clone()]),
            ((0, 0), vec![eps_s]),
            ((1, 0), vec![eps_k]),
        ]));
        assert!(null_homotopy(&x, Some(&eq)).unwrap().is_none());
    }
}
