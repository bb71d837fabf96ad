use serde::{Deserialize, Serialize};

use super::TransferError;
use crate::basis::monomials;
use crate::exactla::{column_basis, inverse, Field, FieldScalar, SparseMatrix};
use crate::gradedcomplex::commutant_basis;
use crate::symcoalgebra::Coproduct;

/// A finite-dimensional vector space with the action of a fixed list of algebra
/// generators. Morphisms are the linear maps intertwining the actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Object {
    pub label: String,
    pub dim: usize,
    pub actions: Vec<SparseMatrix>,
}

impl Object {
    pub fn new(label: impl Into<String>, dim: usize, actions: Vec<SparseMatrix>) -> Result<Object, TransferError> {
        if actions.iter().any(|a| a.shape() != (dim, dim)) {
            return Err(TransferError::Invalid(
                "action matrices must be square of the object's dimension".into(),
            ));
        }
        Ok(Object {
            label: label.into(),
            dim,
            actions,
        })
    }

    /// `k^n` with `generators` zero actions.
    pub fn vector_space(field: Field, n: usize, generators: usize) -> Object {
        Object {
            label: format!("k^{n}"),
            dim: n,
            actions: vec![SparseMatrix::zeros(field, n, n); generators],
        }
    }

    /// `C_{≤d} ⊗ k^s` for `C = Sym(W)`, `dim W = a`, as a module over the dual algebra:
    /// `x_i` sends a monomial `u` to `coef · u/w_i`. Basis: copy-major, then monomials by
    /// degree.
    pub fn truncated_cofree(field: Field, a: usize, d: usize, s: usize, coproduct: Coproduct) -> Object {
        let monos: Vec<Vec<u32>> = (0..=d as i64).flat_map(|j| monomials(a, j)).collect();
        let n = monos.len();
        let index: std::collections::HashMap<&Vec<u32>, usize> =
            monos.iter().enumerate().map(|(i, u)| (u, i)).collect();
        let actions = (0..a)
            .map(|i| {
                let mut e = vec![0; a];
                e[i] = 1;
                let mut trip = Vec::new();
                for (c, u) in monos.iter().enumerate().filter(|(_, u)| u[i] > 0) {
                    let mut rest = u.clone();
                    rest[i] -= 1;
                    let coef = coproduct.coefficient(field, u, &e);
                    for k in 0..s {
                        trip.push((k * n + index[&rest], k * n + c, coef.clone()));
                    }
                }
                SparseMatrix::from_triplets(field, n * s, n * s, trip)
            })
            .collect();
        Object {
            label: format!("C≤{d}⊗k^{s}"),
            dim: n * s,
            actions,
        }
    }

    pub fn field(&self) -> Option<Field> {
        self.actions.first().map(SparseMatrix::field)
    }

    pub fn direct_sum(parts: &[&Object]) -> Result<Object, TransferError> {
        let g = parts.first().map_or(0, |o| o.actions.len());
        if parts.iter().any(|o| o.actions.len() != g) {
            return Err(TransferError::Invalid(
                "summands act through different generator lists".into(),
            ));
        }
        let field = parts.iter().find_map(|o| o.field());
        let actions = (0..g)
            .map(|i| {
                let blocks: Vec<&SparseMatrix> = parts.iter().map(|o| &o.actions[i]).collect();
                SparseMatrix::block_diag(field.expect("some summand acts"), &blocks)
            })
            .collect();
        Ok(Object {
            label: parts.iter().map(|o| o.label.as_str()).collect::<Vec<_>>().join("⊕"),
            dim: parts.iter().map(|o| o.dim).sum(),
            actions,
        })
    }

    pub fn power(&self, r: usize) -> Object {
        let parts = vec![self; r];
        let mut o = Object::direct_sum(&parts).unwrap_or_else(|_| unreachable!("equal summands"));
        if r == 0 {
            o.actions = self
                .actions
                .iter()
                .map(|a| SparseMatrix::zeros(a.field(), 0, 0))
                .collect();
        }
        o.label = format!("({})^{r}", self.label);
        o
    }

    /// Whether `f: self → other` intertwines the actions.
    pub fn is_morphism(&self, other: &Object, f: &SparseMatrix) -> bool {
        f.shape() == (other.dim, self.dim)
            && self
                .actions
                .iter()
                .zip(&other.actions)
                .all(|(s, t)| t.mul(f).ok() == f.mul(s).ok())
    }
}

/// A subspace of `k^n` with a basis (columns) and a fast coordinate map.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub basis: SparseMatrix,
    pick: Vec<usize>,
    pick_inverse: SparseMatrix,
}

impl Subspace {
    /// `basis` must have independent columns.
    pub fn new(basis: SparseMatrix) -> Subspace {
        let pick = column_basis(&basis.transpose());
        assert_eq!(pick.len(), basis.cols(), "basis columns must be independent");
        let pick_inverse = inverse(&basis.select_rows(&pick)).expect("independent rows are invertible");
        Subspace {
            basis,
            pick,
            pick_inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    /// Coordinates of a vector assumed to lie in the subspace.
    pub fn coords(&self, v: &[FieldScalar]) -> Vec<FieldScalar> {
        let sub: Vec<FieldScalar> = self.pick.iter().map(|&i| v[i].clone()).collect();
        self.pick_inverse.mul_vec(&sub).expect("square pick")
    }

    /// Coordinates, or `None` when `v` is outside the subspace.
    pub fn try_coords(&self, v: &[FieldScalar]) -> Option<Vec<FieldScalar>> {
        let c = self.coords(v);
        (self.basis.mul_vec(&c).expect("shapes") == v).then_some(c)
    }

    pub fn vector(&self, k: usize) -> Vec<FieldScalar> {
        self.basis.column_vec(k)
    }
}

/// `Hom(X, Y)` with elements vectorized row-major as `dim Y × dim X` matrices.
pub fn hom_space(x: &Object, y: &Object, field: Field) -> Subspace {
    Subspace::new(commutant_basis(field, &x.actions, &y.actions, x.dim, y.dim))
}

pub(crate) fn as_matrix(field: Field, rows: usize, cols: usize, v: &[FieldScalar]) -> SparseMatrix {
    SparseMatrix::unvectorize(field, rows, cols, v)
}

pub(crate) fn as_vector(m: &SparseMatrix) -> Vec<FieldScalar> {
    let mut v = vec![m.field().zero(); m.rows() * m.cols()];
    for (i, x) in m.vectorize() {
        v[i] = x;
    }
    v
}

/// A finite-dimensional associative unital algebra given by structure constants:
/// `left[i]` is the matrix of left multiplication by basis element `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FinAlgebraRep {
    pub field: Field,
    pub left: Vec<SparseMatrix>,
    pub unit: Vec<FieldScalar>,
    /// Basis indices that generate the algebra.
    pub generators: Vec<usize>,
    /// For an endomorphism algebra: the endomorphism behind each basis element.
    pub maps: Option<Vec<SparseMatrix>>,
    pub opposite: bool,
}

impl FinAlgebraRep {
    /// From left-multiplication matrices and a unit; checks the axioms.
    pub fn from_structure(
        field: Field,
        left: Vec<SparseMatrix>,
        unit: Vec<FieldScalar>,
    ) -> Result<FinAlgebraRep, TransferError> {
        let n = left.len();
        if unit.len() != n || left.iter().any(|l| l.shape() != (n, n)) {
            return Err(TransferError::Invalid(
                "structure constants do not match the dimension".into(),
            ));
        }
        let mut s = FinAlgebraRep {
            field,
            left,
            unit,
            generators: Vec::new(),
            maps: None,
            opposite: false,
        };
        if !s.verify() {
            return Err(TransferError::Invalid("not an associative unital algebra".into()));
        }
        s.find_generators();
        Ok(s)
    }

    /// `k[ε]/εⁿ` on the basis `1, ε, …, εⁿ⁻¹`.
    pub fn truncated_polynomial(field: Field, n: usize) -> FinAlgebraRep {
        let left = (0..n)
            .map(|i| {
                SparseMatrix::from_triplets(field, n, n, (0..n.saturating_sub(i)).map(|j| (i + j, j, field.one())))
            })
            .collect();
        let mut unit = vec![field.zero(); n];
        if n > 0 {
            unit[0] = field.one();
        }
        FinAlgebraRep::from_structure(field, left, unit).expect("truncated polynomial ring")
    }

    pub fn dim(&self) -> usize {
        self.left.len()
    }

    pub fn mul(&self, x: &[FieldScalar], y: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let prod = self.left[i].mul_vec(y).expect("shapes");
            for (o, p) in out.iter_mut().zip(prod) {
                *o = &*o + &(xi * &p);
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<FieldScalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    /// Associativity on all basis triples and the unit laws on all basis elements.
    pub fn verify(&self) -> bool {
        let n = self.dim();
        let l_unit: SparseMatrix = self.combination(&self.unit);
        if l_unit != SparseMatrix::identity(self.field, n) {
            return false;
        }
        (0..n).all(|i| {
            self.left[i].mul_vec(&self.unit).ok() == Some(self.basis_vector(i))
                && (0..n).all(|j| {
                    let prod = self.left[i].column_vec(j);
                    self.left[i].mul(&self.left[j]).ok() == Some(self.combination(&prod))
                })
        })
    }

    /// Left multiplication by an arbitrary element.
    pub fn combination(&self, x: &[FieldScalar]) -> SparseMatrix {
        let mut acc = SparseMatrix::zeros(self.field, self.dim(), self.dim());
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            acc = acc.add(&self.left[i].scale(c)).expect("shapes");
        }
        acc
    }

    /// The opposite algebra on the same basis.
    pub fn opposite(&self) -> FinAlgebraRep {
        let n = self.dim();
        let left = (0..n)
            .map(|i| {
                let cols: Vec<Vec<FieldScalar>> = (0..n).map(|j| self.left[j].column_vec(i)).collect();
                let trip = cols
                    .iter()
                    .enumerate()
                    .flat_map(|(j, col)| col.iter().enumerate().map(move |(r, v)| (r, j, v.clone())))
                    .collect::<Vec<_>>();
                SparseMatrix::from_triplets(self.field, n, n, trip)
            })
            .collect();
        FinAlgebraRep {
            field: self.field,
            left,
            unit: self.unit.clone(),
            generators: self.generators.clone(),
            maps: self.maps.clone(),
            opposite: !self.opposite,
        }
    }

    /// Extends `span` to the subalgebra generated by its vectors and `gens`.
    fn close(&self, span: &mut Echelon, gens: &[usize]) {
        let mut frontier: Vec<Vec<FieldScalar>> = span.vectors.clone();
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.left[g].mul_vec(&v).expect("shapes");
                if span.insert(&w) {
                    frontier.push(w);
                }
            }
        }
    }

    /// Greedy generating set among the basis elements, skipping those already generated.
    fn find_generators(&mut self) {
        let mut span = Echelon::default();
        span.insert(&self.unit);
        let mut gens = Vec::new();
        for i in 0..self.dim() {
            if span.len() == self.dim() {
                break;
            }
            if span.insert(&self.basis_vector(i)) {
                gens.push(i);
                // the new generator times everything already generated, and so on
                self.close(&mut span, &gens);
            }
        }
        self.generators = gens;
    }
}

/// Incrementally built row echelon form over dense vectors.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<FieldScalar>)>,
    vectors: Vec<Vec<FieldScalar>>,
}

impl Echelon {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of what is there; reports whether it was.
    fn insert(&mut self, v: &[FieldScalar]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (x, r) in w.iter_mut().zip(row) {
                    *x = &*x - &(&f * r);
                }
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w: Vec<FieldScalar> = w.iter().map(|x| x * &inv).collect();
        self.rows.push((p, w));
        self.vectors.push(v.to_vec());
        true
    }
}

/// `End(M)` with product `f·g = f ∘ g`, or its opposite.
pub fn endomorphism_algebra(m: &Object, field: Field, opposite: bool) -> FinAlgebraRep {
    let space = hom_space(m, m, field);
    let n = space.dim();
    let maps: Vec<SparseMatrix> = (0..n)
        .map(|k| as_matrix(field, m.dim, m.dim, &space.vector(k)))
        .collect();
    let left = maps
        .iter()
        .map(|f| {
            let cols: Vec<Vec<FieldScalar>> = maps
                .iter()
                .map(|g| space.coords(&as_vector(&f.mul(g).expect("square"))))
                .collect();
            let trip = cols
                .iter()
                .enumerate()
                .flat_map(|(j, col)| col.iter().enumerate().map(move |(r, v)| (r, j, v.clone())))
                .collect::<Vec<_>>();
            SparseMatrix::from_triplets(field, n, n, trip)
        })
        .collect();
    let unit = space.coords(&as_vector(&SparseMatrix::identity(field, m.dim)));
    let mut s = FinAlgebraRep {
        field,
        left,
        unit,
        generators: Vec::new(),
        maps: Some(maps),
        opposite: false,
    };
    s.find_generators();
    if opposite {
        s.opposite()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F: Field = Field::Prime(101);

    #[test]
    fn matrix_algebra_and_ground_field() {
        let s = endomorphism_algebra(&Object::vector_space(F, 2, 0), F, false);
        assert_eq!(s.dim(), 4);
        assert!(s.verify());
        let k = endomorphism_algebra(&Object::vector_space(F, 1, 0), F, true);
        assert_eq!((k.dim(), k.generators.len()), (1, 0));
    }

    #[test]
    fn truncated_cofree_endomorphisms() {
        for (a, d, s) in [(1, 2, 2), (2, 2, 2), (2, 1, 1)] {
            let m = Object::truncated_cofree(F, a, d, s, Coproduct::Multiplicity);
            let e = endomorphism_algebra(&m, F, false);
            // comodule maps C ⊗ V → C ⊗ V are determined by C ⊗ V → V
            assert_eq!(e.dim(), m.dim * s, "a={a} d={d} s={s}");
            assert!(e.verify());
            assert!(!e.generators.is_empty());
        }
    }

    #[test]
    fn truncated_polynomial_ring() {
        let q = Field::Rational;
        let s = FinAlgebraRep::truncated_polynomial(q, 3);
        let eps = s.basis_vector(1);
        assert_eq!(s.mul(&eps, &eps), s.basis_vector(2));
        assert!(s.mul(&s.mul(&eps, &eps), &eps).iter().all(FieldScalar::is_zero));
        assert_eq!(s.generators, vec![1]);
        assert_eq!(s.opposite().left, s.left);
    }

    #[test]
    fn broken_structure_constants_are_rejected() {
        let q = Field::Rational;
        let left = vec![SparseMatrix::identity(q, 2), SparseMatrix::identity(q, 2)];
        assert!(FinAlgebraRep::from_structure(q, left, vec![q.one(), q.zero()]).is_err());
    }

    #[test]
    fn opposite_is_an_involution() {
        let m = Object::truncated_cofree(F, 1, 2, 2, Coproduct::OrbitSum);
        let e = endomorphism_algebra(&m, F, false);
        let op = e.opposite();
        assert!(op.verify());
        assert_ne!(op.left, e.left);
        assert_eq!(op.opposite(), e);
    }

    #[test]
    fn subspace_coordinates() {
        let b = SparseMatrix::from_i64_rows(F, &[&[1, 0], &[1, 1], &[0, 2]]);
        let s = Subspace::new(b);
        let v = vec![F.from_i64(3), F.from_i64(5), F.from_i64(4)];
        assert_eq!(s.try_coords(&v), Some(vec![F.from_i64(3), F.from_i64(2)]));
        assert_eq!(s.try_coords(&[F.one(), F.zero(), F.zero()]), None);
    }
}
