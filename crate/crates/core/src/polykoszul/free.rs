use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Poly, PolyError, PolyMatrix};
use crate::basis::{monomial_label, MonomialBasis};
use crate::exactla::{Field, SparseMatrix};
use crate::gradedcomplex::{BigradedComplex, BigradedTerm, OpenEdges, Slice, Window};

/// Slices and differential blocks of one internal degree.
type DegreePiece = (Vec<(i64, Slice)>, Vec<((i64, i64), SparseMatrix)>);

/// Ordered, duplicate-free variable names of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableSet {
    names: Vec<String>,
}

impl VariableSet {
    pub fn new(names: Vec<String>) -> Result<VariableSet, PolyError> {
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PolyError::Invalid(format!("variable {n} listed twice")));
            }
        }
        Ok(VariableSet { names })
    }

    /// `x1, ..., xm`.
    pub fn standard(m: usize) -> VariableSet {
        VariableSet {
            names: (1..=m).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Positions of `self`'s variables inside `larger`, or an error if one is missing.
    pub fn embedding_into(&self, larger: &VariableSet) -> Result<Vec<usize>, PolyError> {
        self.names
            .iter()
            .map(|n| {
                larger
                    .names
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| PolyError::Invalid(format!("variable {n} not in the larger set")))
            })
            .collect()
    }
}

/// Free graded module: generator `i` sits in internal degree `generators[i].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeModule {
    pub generators: Vec<(String, i64)>,
}

impl GradedFreeModule {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn shifts(&self) -> impl Iterator<Item = i64> + '_ {
        self.generators.iter().map(|g| g.1)
    }
}

/// Complex of graded free modules over `k[vars]`, with polynomial differentials of
/// internal degree zero. `differentials[p]` maps the term at `p` to the term at `p + 1`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub field: Field,
    pub vars: VariableSet,
    pub terms: BTreeMap<i64, GradedFreeModule>,
    pub differentials: BTreeMap<i64, PolyMatrix>,
}

impl FreeComplex {
    /// Checks shapes, homogeneity and `d∘d = 0` over the polynomial ring.
    pub fn new(
        field: Field,
        vars: VariableSet,
        terms: BTreeMap<i64, GradedFreeModule>,
        differentials: BTreeMap<i64, PolyMatrix>,
    ) -> Result<FreeComplex, PolyError> {
        let c = FreeComplex {
            field,
            vars,
            terms,
            differentials,
        };
        for (&p, d) in &c.differentials {
            let (src, tgt) = (c.rank(p), c.rank(p + 1));
            if (d.rows, d.cols) != (tgt, src) {
                return Err(PolyError::Invalid(format!(
                    "differential at {p} is {}x{}, expected {tgt}x{src}",
                    d.rows, d.cols
                )));
            }
            for (&(r, col), poly) in &d.entries {
                if poly.field() != field || poly.nvars() != c.vars.len() {
                    return Err(PolyError::Invalid(format!(
                        "entry ({r},{col}) at {p} lives in another ring"
                    )));
                }
                let want = c.terms[&p].generators[col].1 - c.terms[&(p + 1)].generators[r].1;
                match poly.homogeneous_degree() {
                    Ok(Some(d)) if d == want => {}
                    _ => {
                        return Err(PolyError::Inhomogeneous {
                            position: p,
                            row: r,
                            col,
                        })
                    }
                }
            }
        }
        for (&p, d) in &c.differentials {
            if let Some(d1) = c.differentials.get(&(p + 1)) {
                if !d1.mul(d, field, c.vars.len()).is_zero() {
                    return Err(PolyError::Invalid(format!("d∘d ≠ 0 starting at {p}")));
                }
            }
        }
        Ok(c)
    }

    pub fn rank(&self, p: i64) -> usize {
        self.terms.get(&p).map_or(0, GradedFreeModule::rank)
    }

    fn min_shift(&self) -> i64 {
        self.terms
            .values()
            .flat_map(GradedFreeModule::shifts)
            .min()
            .unwrap_or(0)
    }

    /// Internal-degree slices `t ∈ [min generator degree, max_deg]`. The complex is
    /// bounded in position; its degrees continue above `max_deg`.
    pub fn realize(&self, max_deg: i64) -> BigradedComplex {
        self.realize_range(self.min_shift(), max_deg)
    }

    pub fn realize_range(&self, min_deg: i64, max_deg: i64) -> BigradedComplex {
        let m = self.vars.len();
        let positions: Vec<i64> = self.terms.keys().copied().collect();
        let (pmin, pmax) = (
            positions.first().copied().unwrap_or(0),
            positions.last().copied().unwrap_or(0),
        );
        let window = Window::closed((pmin, pmax), (min_deg, max_deg)).with_open(OpenEdges {
            deg_above: true,
            deg_below: min_deg > self.min_shift(),
            ..Default::default()
        });
        let degrees: Vec<i64> = (min_deg..=max_deg).collect();
        let per_degree: Vec<DegreePiece> = degrees
            .par_iter()
            .map(|&t| {
                let bases: BTreeMap<i64, Vec<MonomialBasis>> = self
                    .terms
                    .iter()
                    .map(|(&p, g)| (p, g.shifts().map(|s| MonomialBasis::new(m, t - s)).collect()))
                    .collect();
                let mut slices = Vec::new();
                for (&p, g) in &self.terms {
                    let mut labels = Vec::new();
                    for ((name, _), mb) in g.generators.iter().zip(&bases[&p]) {
                        for e in &mb.list {
                            labels.push(format!("{}·{}", monomial_label(e, self.vars.names()), name));
                        }
                    }
                    slices.push((p, Slice::new(labels)));
                }
                let mut diffs = Vec::new();
                for (&p, d) in &self.differentials {
                    if let (Some(src), Some(tgt)) = (bases.get(&p), bases.get(&(p + 1))) {
                        diffs.push(((p, t), realize_block(self.field, d, src, tgt)));
                    }
                }
                (slices, diffs)
            })
            .collect();
        let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for ((slices, diffs), &t) in per_degree.into_iter().zip(&degrees) {
            for (p, s) in slices {
                terms
                    .entry(p)
                    .or_insert_with(|| BigradedTerm {
                        position: p,
                        slices: BTreeMap::new(),
                    })
                    .slices
                    .insert(t, s);
            }
            differentials.extend(diffs);
        }
        BigradedComplex::build(self.field, window, terms.into_values(), differentials)
            .expect("realization of a valid free complex is valid")
    }

    /// Tensor product over the polynomial ring with the Koszul sign rule. Generators of a
    /// term are the pairs `(g, h)` ordered by position of `g`, then `g`, then `h`.
    pub fn tensor(&self, other: &FreeComplex) -> Result<FreeComplex, PolyError> {
        if self.vars != other.vars || self.field != other.field {
            return Err(PolyError::Invalid("tensor factors live over different rings".into()));
        }
        let field = self.field;
        let nv = self.vars.len();
        // layout[n] = list of (p, q, offset)
        let mut layout: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
        let mut terms: BTreeMap<i64, GradedFreeModule> = BTreeMap::new();
        for (&p, g) in &self.terms {
            for (&q, h) in &other.terms {
                let t = terms
                    .entry(p + q)
                    .or_insert_with(|| GradedFreeModule { generators: Vec::new() });
                let off = t.generators.len();
                for (gn, gs) in &g.generators {
                    for (hn, hs) in &h.generators {
                        t.generators.push((format!("{gn}⊗{hn}"), gs + hs));
                    }
                }
                layout.entry(p + q).or_default().push((p, q, off));
            }
        }
        let offset = |n: i64, p: i64, q: i64| -> Option<usize> {
            layout.get(&n)?.iter().find(|e| e.0 == p && e.1 == q).map(|e| e.2)
        };
        let mut differentials = BTreeMap::new();
        for (&n, summands) in &layout {
            if !terms.contains_key(&(n + 1)) {
                continue;
            }
            let mut d = PolyMatrix::zeros(terms[&(n + 1)].rank(), terms[&n].rank());
            for &(p, q, off) in summands {
                let (rg, rh) = (self.rank(p), other.rank(q));
                if let (Some(dg), Some(to)) = (self.differentials.get(&p), offset(n + 1, p + 1, q)) {
                    for (&(r, c), poly) in &dg.entries {
                        for j in 0..rh {
                            d.set(to + r * rh + j, off + c * rh + j, poly.clone());
                        }
                    }
                }
                if let (Some(dh), Some(to)) = (other.differentials.get(&q), offset(n + 1, p, q + 1)) {
                    let s = field.from_i64(if p.rem_euclid(2) == 0 { 1 } else { -1 });
                    let rh1 = other.rank(q + 1);
                    for i in 0..rg {
                        for (&(r, c), poly) in &dh.entries {
                            let row = to + i * rh1 + r;
                            let col = off + i * rh + c;
                            let cur = d.get(row, col).cloned().unwrap_or_else(|| Poly::zero(field, nv));
                            d.set(row, col, cur.add(&poly.scale(&s)));
                        }
                    }
                }
            }
            differentials.insert(n, d);
        }
        FreeComplex::new(field, self.vars.clone(), terms, differentials)
    }
}

/// Matrix of a polynomial map between two degree slices: the source basis is generator
/// by generator, each followed by its monomials.
pub(crate) fn realize_block(
    field: Field,
    d: &PolyMatrix,
    src: &[MonomialBasis],
    tgt: &[MonomialBasis],
) -> SparseMatrix {
    let src_off: Vec<usize> = offsets(src);
    let tgt_off: Vec<usize> = offsets(tgt);
    let rows = tgt.iter().map(MonomialBasis::len).sum();
    let cols = src.iter().map(MonomialBasis::len).sum();
    let mut triplets = Vec::new();
    for (&(r, c), poly) in &d.entries {
        for (ui, u) in src[c].list.iter().enumerate() {
            for (v, coef) in poly.terms() {
                let w: Vec<u32> = u.iter().zip(v).map(|(a, b)| a + b).collect();
                let wi = tgt[r]
                    .index_of(&w)
                    .expect("homogeneous entry lands in the target slice");
                triplets.push((tgt_off[r] + wi, src_off[c] + ui, coef.clone()));
            }
        }
    }
    SparseMatrix::from_triplets(field, rows, cols, triplets)
}

fn offsets(bases: &[MonomialBasis]) -> Vec<usize> {
    let mut acc = 0;
    bases
        .iter()
        .map(|b| {
            let o = acc;
            acc += b.len();
            o
        })
        .collect()
}
