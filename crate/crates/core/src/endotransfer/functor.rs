use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::algebra::{as_matrix, as_vector, endomorphism_algebra, hom_space, FinAlgebraRep, Object, Subspace};
use super::TransferError;
use crate::exactla::{rank, Field, FieldScalar, SparseMatrix};
use crate::gradedcomplex::{BigradedComplex, ComplexBuilder, Equivariance, Slice, Window};
use crate::symcoalgebra::TruncatedComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    /// `Hom(M, −)`, landing in left modules over `End(M)^op`.
    Covariant,
    /// `Hom(−, M)`, landing in left modules over `End(M)`; positions are reversed.
    Contravariant,
}

/// An object of `add(M)` with its certificate: `π ∘ ι = id` for morphisms
/// `ι: X → M^r` and `π: M^r → X`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitTerm {
    pub object: Object,
    pub r: usize,
    pub iota: SparseMatrix,
    pub pi: SparseMatrix,
}

impl SplitTerm {
    pub fn new(
        m: &Object,
        object: Object,
        r: usize,
        iota: SparseMatrix,
        pi: SparseMatrix,
    ) -> Result<SplitTerm, TransferError> {
        let mr = m.power(r);
        if !object.is_morphism(&mr, &iota) || !mr.is_morphism(&object, &pi) {
            return Err(TransferError::NotInAddM(format!(
                "{}: splitting maps are not morphisms",
                object.label
            )));
        }
        if pi.mul(&iota)? != SparseMatrix::identity(iota.field(), object.dim) {
            return Err(TransferError::NotInAddM(format!("{}: π ∘ ι ≠ id", object.label)));
        }
        Ok(SplitTerm { object, r, iota, pi })
    }

    /// `X` sitting inside `M^r` as the leading coordinates.
    pub fn leading(m: &Object, object: Object, r: usize, field: Field) -> Result<SplitTerm, TransferError> {
        let (n, big) = (object.dim, m.dim * r);
        if n > big {
            return Err(TransferError::NotInAddM(format!(
                "{} is larger than M^{r}",
                object.label
            )));
        }
        let iota = SparseMatrix::from_triplets(field, big, n, (0..n).map(|i| (i, i, field.one())));
        let pi = iota.transpose();
        SplitTerm::new(m, object, r, iota, pi)
    }

    /// The idempotent `ι ∘ π` on `M^r`.
    pub fn idempotent(&self) -> SparseMatrix {
        self.iota.mul(&self.pi).expect("shapes")
    }
}

/// A bounded complex in `add(M)`; `differentials[p]` maps position `p` to `p + 1`.
#[derive(Clone, Debug)]
pub struct AddMComplex {
    pub field: Field,
    pub m: Object,
    pub terms: BTreeMap<i64, SplitTerm>,
    pub differentials: BTreeMap<i64, SparseMatrix>,
}

impl AddMComplex {
    pub fn new(
        field: Field,
        m: Object,
        terms: BTreeMap<i64, SplitTerm>,
        differentials: BTreeMap<i64, SparseMatrix>,
    ) -> Result<AddMComplex, TransferError> {
        for (&p, d) in &differentials {
            let (Some(s), Some(t)) = (terms.get(&p), terms.get(&(p + 1))) else {
                return Err(TransferError::Invalid(format!("differential at {p} lacks a term")));
            };
            if !s.object.is_morphism(&t.object, d) {
                return Err(TransferError::Invalid(format!("differential at {p} is not a morphism")));
            }
            if let Some(d1) = differentials.get(&(p + 1)) {
                if !d1.mul(d)?.is_zero() {
                    return Err(TransferError::Invalid(format!("d ∘ d ≠ 0 at {p}")));
                }
            }
        }
        Ok(AddMComplex {
            field,
            m,
            terms,
            differentials,
        })
    }

    /// Takes `M` to be the sum of the terms, each split off as its own summand.
    pub fn over_sum_of_terms(t: &TruncatedComplex) -> Result<AddMComplex, TransferError> {
        let field = t.field;
        let objects: Vec<(i64, Object)> = t
            .terms
            .iter()
            .map(|(&p, term)| Object::new(format!("X{p}"), term.labels.len(), term.actions.clone()).map(|o| (p, o)))
            .collect::<Result<_, _>>()?;
        let refs: Vec<&Object> = objects.iter().map(|(_, o)| o).collect();
        let mut m = Object::direct_sum(&refs)?;
        m.label = "M".into();
        let mut terms = BTreeMap::new();
        let mut offset = 0;
        for (p, o) in objects {
            let n = o.dim;
            let iota = SparseMatrix::from_triplets(field, m.dim, n, (0..n).map(|i| (offset + i, i, field.one())));
            let pi = iota.transpose();
            offset += n;
            terms.insert(p, SplitTerm::new(&m, o, 1, iota, pi)?);
        }
        AddMComplex::new(field, m, terms, t.differentials.clone())
    }

    fn window(&self) -> Window {
        let lo = self.terms.keys().next().copied().unwrap_or(0);
        let hi = self.terms.keys().next_back().copied().unwrap_or(0);
        Window::closed((lo, hi), (0, 0))
    }

    /// The underlying complex of vector spaces, all in internal degree 0.
    pub fn to_complex(&self) -> BigradedComplex {
        let mut b = ComplexBuilder::new(self.field, self.window());
        for (&p, t) in self.terms.iter().filter(|(_, t)| t.object.dim > 0) {
            b.slice(p, 0, Slice::anonymous(t.object.dim, &format!("{}_", t.object.label)));
        }
        for (&p, d) in &self.differentials {
            if !d.is_zero() {
                b.differential(p, 0, d.clone());
            }
        }
        b.build().expect("validated complex")
    }

    /// Generator actions per position, for homotopies inside `add(M)`.
    pub fn equivariance(&self) -> Equivariance {
        Equivariance::new(
            self.terms
                .iter()
                .filter(|(_, t)| t.object.dim > 0)
                .map(|(&p, t)| ((p, 0), t.object.actions.clone()))
                .collect(),
        )
    }
}

/// Certificate that a module is `S^r · e` for an idempotent `e ∈ Mat_r(End(M))`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveWitness {
    pub r: usize,
    /// `entries[i][j]`: coordinates of `e_ij` in the basis of `End(M)`.
    pub entries: Vec<Vec<Vec<FieldScalar>>>,
    /// Matrix of `e` acting on `End(M)^r` (the free module of rank `r`).
    pub action: SparseMatrix,
    /// Module → free module (induced by `ι`) and back (induced by `π`).
    pub to_free: SparseMatrix,
    pub from_free: SparseMatrix,
    pub module_dim: usize,
}

impl ProjectiveWitness {
    pub fn is_cyclic(&self) -> bool {
        self.r == 1
    }

    /// `e² = e` through the structure constants, the dimension counts, and the two
    /// isomorphism matrices.
    pub fn verify(&self, end: &FinAlgebraRep) -> bool {
        let r = self.r;
        let squares = (0..r).all(|i| {
            (0..r).all(|j| {
                let mut acc = vec![end.field.zero(); end.dim()];
                for k in 0..r {
                    let p = end.mul(&self.entries[i][k], &self.entries[k][j]);
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a = &*a + &b;
                    }
                }
                acc == self.entries[i][j]
            })
        });
        let n = r * end.dim();
        let id = SparseMatrix::identity(end.field, n);
        let complement = id.sub(&self.action).expect("square");
        squares
            && rank(&self.action) == self.module_dim
            && rank(&self.action) + rank(&complement) == n
            && self.from_free.mul(&self.to_free).ok() == Some(SparseMatrix::identity(end.field, self.module_dim))
            && self.to_free.mul(&self.from_free).ok().as_ref() == Some(&self.action)
    }
}

/// `add(M)` together with `End(M)`.
#[derive(Clone, Debug)]
pub struct AddM {
    pub field: Field,
    pub m: Object,
    /// `End(M)` with product `f·g = f ∘ g`.
    pub end: FinAlgebraRep,
    end_space: Subspace,
}

/// The image of a complex under `Hom(M, −)` or `Hom(−, M)`.
#[derive(Clone, Debug)]
pub struct SModuleComplex {
    pub variance: Variance,
    /// The ring acting on the left: `End(M)^op` (covariant) or `End(M)` (contravariant).
    pub algebra: FinAlgebraRep,
    pub complex: BigradedComplex,
    /// Hom spaces per image position, as vectorized maps.
    pub spaces: BTreeMap<i64, Subspace>,
    /// Action of every basis element of the algebra, per image position.
    pub actions: BTreeMap<i64, Vec<SparseMatrix>>,
    pub witnesses: BTreeMap<i64, ProjectiveWitness>,
}

impl SModuleComplex {
    /// Generator actions, the constraint set for `S`-linear homotopies.
    pub fn equivariance(&self) -> Equivariance {
        Equivariance::new(
            self.actions
                .iter()
                .filter(|(&p, _)| self.complex.dim(p, 0) > 0)
                .map(|(&p, acts)| {
                    (
                        (p, 0),
                        self.algebra.generators.iter().map(|&g| acts[g].clone()).collect(),
                    )
                })
                .collect(),
        )
    }

    /// Module axioms on generator pairs, `S`-linearity of the differential, witnesses.
    pub fn verify(&self, end: &FinAlgebraRep) -> bool {
        let s = &self.algebra;
        let modules = self.actions.values().all(|acts| {
            s.generators.iter().all(|&i| {
                s.generators.iter().all(|&j| {
                    let prod = s.left[i].column_vec(j);
                    let mut want = SparseMatrix::zeros(s.field, acts[0].rows(), acts[0].cols());
                    for (k, c) in prod.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        want = want.add(&acts[k].scale(c)).expect("shapes");
                    }
                    acts[i].mul(&acts[j]).ok() == Some(want)
                })
            }) && s.combination_acts_as_identity(acts)
        });
        let linear = self.complex.differentials().iter().all(|(&(p, t), d)| {
            let (src, tgt) = (&self.actions[&p], &self.actions[&(p + 1)]);
            let _ = t;
            src.iter().zip(tgt).all(|(a, b)| d.mul(a).ok() == b.mul(d).ok())
        });
        modules && linear && self.witnesses.values().all(|w| w.verify(end))
    }
}

impl FinAlgebraRep {
    fn combination_acts_as_identity(&self, acts: &[SparseMatrix]) -> bool {
        let n = acts.first().map_or(0, SparseMatrix::rows);
        let mut acc = SparseMatrix::zeros(self.field, n, n);
        for (k, c) in self.unit.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            acc = acc.add(&acts[k].scale(c)).expect("shapes");
        }
        acc == SparseMatrix::identity(self.field, n)
    }
}

/// Matrix of a linear map between two Hom subspaces, given on vectorized elements.
fn induced(
    field: Field,
    src: &Subspace,
    src_shape: (usize, usize),
    tgt: &Subspace,
    f: impl Fn(&SparseMatrix) -> SparseMatrix,
) -> SparseMatrix {
    let mut trip = Vec::new();
    for k in 0..src.dim() {
        let x = as_matrix(field, src_shape.0, src_shape.1, &src.vector(k));
        let img = as_vector(&f(&x));
        let c = tgt.coords(&img);
        debug_assert!(tgt.try_coords(&img).is_some(), "image leaves the target Hom space");
        trip.extend(
            c.into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (r, k, v)),
        );
    }
    SparseMatrix::from_triplets(field, tgt.dim(), src.dim(), trip)
}

impl AddM {
    pub fn new(field: Field, m: Object) -> AddM {
        let end = endomorphism_algebra(&m, field, false);
        let end_space = Subspace::new(
            SparseMatrix::hstack(
                &end.maps
                    .as_ref()
                    .expect("endomorphism algebra")
                    .iter()
                    .map(|e| SparseMatrix::column(field, &as_vector(e)))
                    .collect::<Vec<_>>()
                    .iter()
                    .collect::<Vec<_>>(),
            )
            .expect("equal heights"),
        );
        AddM {
            field,
            m,
            end,
            end_space,
        }
    }

    pub fn end_maps(&self) -> &[SparseMatrix] {
        self.end.maps.as_deref().expect("endomorphism algebra")
    }

    /// The ring the image lands over.
    pub fn algebra(&self, variance: Variance) -> FinAlgebraRep {
        match variance {
            Variance::Covariant => self.end.opposite(),
            Variance::Contravariant => self.end.clone(),
        }
    }

    /// `Hom(M, X)` (covariant) or `Hom(X, M)` (contravariant) as a subspace of maps.
    pub fn module_space(&self, x: &Object, variance: Variance) -> Subspace {
        match variance {
            Variance::Covariant => hom_space(&self.m, x, self.field),
            Variance::Contravariant => hom_space(x, &self.m, self.field),
        }
    }

    fn shape(&self, x: &Object, variance: Variance) -> (usize, usize) {
        match variance {
            Variance::Covariant => (x.dim, self.m.dim),
            Variance::Contravariant => (self.m.dim, x.dim),
        }
    }

    /// Matrices of all basis elements of the algebra acting on the image of `x`.
    pub fn module_actions(&self, x: &Object, space: &Subspace, variance: Variance) -> Vec<SparseMatrix> {
        let shape = self.shape(x, variance);
        self.end_maps()
            .iter()
            .map(|e| {
                induced(self.field, space, shape, space, |f| match variance {
                    Variance::Covariant => f.mul(e).expect("shapes"),
                    Variance::Contravariant => e.mul(f).expect("shapes"),
                })
            })
            .collect()
    }

    /// The matrix of `F(f)` for a morphism `f: x → y`.
    pub fn functor_on_map(
        &self,
        f: &SparseMatrix,
        (x, sx): (&Object, &Subspace),
        (y, sy): (&Object, &Subspace),
        variance: Variance,
    ) -> SparseMatrix {
        match variance {
            Variance::Covariant => induced(self.field, sx, self.shape(x, variance), sy, |g| {
                f.mul(g).expect("shapes")
            }),
            Variance::Contravariant => induced(self.field, sy, self.shape(y, variance), sx, |g| {
                g.mul(f).expect("shapes")
            }),
        }
    }

    fn end_coords(&self, e: &SparseMatrix) -> Vec<FieldScalar> {
        self.end_space.coords(&as_vector(e))
    }

    /// Idempotent witness for the image of a split term.
    pub fn witness(&self, term: &SplitTerm, space: &Subspace, variance: Variance) -> ProjectiveWitness {
        let (field, dm, r, n) = (self.field, self.m.dim, term.r, self.end.dim());
        let e = term.idempotent();
        let block = |i: usize, j: usize| -> SparseMatrix {
            let rows: Vec<usize> = (i * dm..(i + 1) * dm).collect();
            let cols: Vec<usize> = (j * dm..(j + 1) * dm).collect();
            e.select_rows(&rows).select_cols(&cols)
        };
        let entries: Vec<Vec<Vec<FieldScalar>>> = (0..r)
            .map(|i| (0..r).map(|j| self.end_coords(&block(i, j))).collect())
            .collect();
        // the free module End(M)^r: column vectors (covariant) or row vectors (contravariant)
        let right = |x: &[FieldScalar]| -> SparseMatrix {
            let cols: Vec<Vec<FieldScalar>> = (0..n).map(|k| self.end.left[k].mul_vec(x).expect("shapes")).collect();
            let trip: Vec<_> = cols
                .iter()
                .enumerate()
                .flat_map(|(k, c)| c.iter().enumerate().map(move |(row, v)| (row, k, v.clone())))
                .collect();
            SparseMatrix::from_triplets(field, n, n, trip)
        };
        let mut parts = Vec::new();
        for (i, row) in entries.iter().enumerate().take(r) {
            for (j, e) in row.iter().enumerate().take(r) {
                let m = match variance {
                    Variance::Covariant => (i, j, self.end.combination(e)),
                    Variance::Contravariant => (j, i, right(e)),
                };
                parts.push(m);
            }
        }
        let refs: Vec<(usize, usize, &SparseMatrix)> = parts.iter().map(|(i, j, m)| (i * n, j * n, m)).collect();
        let action = SparseMatrix::assemble(field, r * n, r * n, &refs);
        let shape = self.shape(&term.object, variance);
        let mut to_free_cols = Vec::new();
        for k in 0..space.dim() {
            let g = as_matrix(field, shape.0, shape.1, &space.vector(k));
            let mut col = Vec::new();
            for i in 0..r {
                let comp = match variance {
                    // P_i ∘ ι ∘ g
                    Variance::Covariant => {
                        let rows: Vec<usize> = (i * dm..(i + 1) * dm).collect();
                        term.iota.select_rows(&rows).mul(&g).expect("shapes")
                    }
                    // g ∘ π ∘ J_i
                    Variance::Contravariant => {
                        let cols: Vec<usize> = (i * dm..(i + 1) * dm).collect();
                        g.mul(&term.pi.select_cols(&cols)).expect("shapes")
                    }
                };
                col.extend(self.end_coords(&comp));
            }
            to_free_cols.push(col);
        }
        let to_free = SparseMatrix::from_triplets(
            field,
            r * n,
            space.dim(),
            to_free_cols
                .iter()
                .enumerate()
                .flat_map(|(k, c)| c.iter().enumerate().map(move |(row, v)| (row, k, v.clone())))
                .collect::<Vec<_>>(),
        );
        let mut from_free_cols = Vec::new();
        for i in 0..r {
            for k in 0..n {
                let basis = &self.end_maps()[k];
                let img = match variance {
                    // π ∘ J_i ∘ b
                    Variance::Covariant => {
                        let cols: Vec<usize> = (i * dm..(i + 1) * dm).collect();
                        term.pi.select_cols(&cols).mul(basis).expect("shapes")
                    }
                    // b ∘ P_i ∘ ι
                    Variance::Contravariant => {
                        let rows: Vec<usize> = (i * dm..(i + 1) * dm).collect();
                        basis.mul(&term.iota.select_rows(&rows)).expect("shapes")
                    }
                };
                from_free_cols.push(space.coords(&as_vector(&img)));
            }
        }
        let from_free = SparseMatrix::from_triplets(
            field,
            space.dim(),
            r * n,
            from_free_cols
                .iter()
                .enumerate()
                .flat_map(|(k, c)| c.iter().enumerate().map(move |(row, v)| (row, k, v.clone())))
                .collect::<Vec<_>>(),
        );
        ProjectiveWitness {
            r,
            entries,
            action,
            to_free,
            from_free,
            module_dim: space.dim(),
        }
    }

    /// Applies `Hom(M, −)` or `Hom(−, M)` to a complex in `add(M)`.
    pub fn hom_functor(&self, x: &AddMComplex, variance: Variance) -> Result<SModuleComplex, TransferError> {
        if x.m != self.m {
            return Err(TransferError::Invalid(
                "complex lives in add of a different object".into(),
            ));
        }
        let image_pos = |p: i64| match variance {
            Variance::Covariant => p,
            Variance::Contravariant => -p,
        };
        let mut spaces = BTreeMap::new();
        let mut actions = BTreeMap::new();
        let mut witnesses = BTreeMap::new();
        for (&p, term) in &x.terms {
            let space = self.module_space(&term.object, variance);
            actions.insert(image_pos(p), self.module_actions(&term.object, &space, variance));
            witnesses.insert(image_pos(p), self.witness(term, &space, variance));
            spaces.insert(image_pos(p), space);
        }
        let lo = spaces.keys().next().copied().unwrap_or(0);
        let hi = spaces.keys().next_back().copied().unwrap_or(0);
        let mut b = ComplexBuilder::new(self.field, Window::closed((lo, hi), (0, 0)));
        for (&q, s) in &spaces {
            if s.dim() > 0 {
                b.slice(q, 0, Slice::anonymous(s.dim(), &format!("h{q}_")));
            }
        }
        for (&p, d) in &x.differentials {
            let (xs, xt) = (&x.terms[&p].object, &x.terms[&(p + 1)].object);
            let (ss, st) = (&spaces[&image_pos(p)], &spaces[&image_pos(p + 1)]);
            let m = self.functor_on_map(d, (xs, ss), (xt, st), variance);
            let at = match variance {
                Variance::Covariant => p,
                Variance::Contravariant => -(p + 1),
            };
            if !m.is_zero() {
                b.differential(at, 0, m);
            }
        }
        Ok(SModuleComplex {
            variance,
            algebra: self.algebra(variance),
            complex: b.build()?,
            spaces,
            actions,
            witnesses,
        })
    }
}
