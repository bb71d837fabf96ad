use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FreeComplex, GradedFreeModule, Poly, PolyError, PolyMatrix, VariableSet};
use crate::basis::{monomial_label, MonomialBasis};
use crate::exactla::{Field, Rref, SparseMatrix};
use crate::gradedcomplex::{cohomology, BigradedComplex, BigradedTerm, OpenEdges, Slice, Window};

use super::free::realize_block;

/// Graded module `coker(F_1 → F_0)` given by a homogeneous presentation. Column `j` of
/// `presentation` is the image of relation generator `j`.
#[derive(Clone, Debug)]
pub struct FPGradedModule {
    pub field: Field,
    pub vars: VariableSet,
    pub generators: GradedFreeModule,
    pub relations: GradedFreeModule,
    pub presentation: PolyMatrix,
}

impl FPGradedModule {
    pub fn new(
        field: Field,
        vars: VariableSet,
        generators: GradedFreeModule,
        relations: GradedFreeModule,
        presentation: PolyMatrix,
    ) -> Result<FPGradedModule, PolyError> {
        if (presentation.rows, presentation.cols) != (generators.rank(), relations.rank()) {
            return Err(PolyError::Invalid("presentation shape differs from ranks".into()));
        }
        for (&(r, c), p) in &presentation.entries {
            if p.field() != field || p.nvars() != vars.len() {
                return Err(PolyError::Invalid(format!("entry ({r},{c}) lives in another ring")));
            }
            let want = relations.generators[c].1 - generators.generators[r].1;
            match p.homogeneous_degree() {
                Ok(Some(d)) if d == want => {}
                _ => {
                    return Err(PolyError::Inhomogeneous {
                        position: 0,
                        row: r,
                        col: c,
                    })
                }
            }
        }
        Ok(FPGradedModule {
            field,
            vars,
            generators,
            relations,
            presentation,
        })
    }

    /// The ring itself: one generator in degree 0, no relations.
    pub fn free_rank_one(field: Field, vars: &VariableSet) -> FPGradedModule {
        FPGradedModule::new(
            field,
            vars.clone(),
            GradedFreeModule {
                generators: vec![("1".into(), 0)],
            },
            GradedFreeModule { generators: vec![] },
            PolyMatrix::zeros(1, 0),
        )
        .expect("free module is valid")
    }

    /// `R/(x_i : i ∈ which)`.
    pub fn quotient_by_variables(field: Field, vars: &VariableSet, which: &[usize]) -> FPGradedModule {
        let mut pres = PolyMatrix::zeros(1, which.len());
        for (j, &i) in which.iter().enumerate() {
            pres.set(0, j, Poly::var(field, vars.len(), i));
        }
        FPGradedModule::new(
            field,
            vars.clone(),
            GradedFreeModule {
                generators: vec![("1".into(), 0)],
            },
            GradedFreeModule {
                generators: which.iter().map(|&i| (vars.names()[i].clone(), 1)).collect(),
            },
            pres,
        )
        .expect("variable quotient is valid")
    }

    /// The presentation `F_1 → F_0` as a free complex at positions −1, 0.
    pub fn presentation_complex(&self) -> FreeComplex {
        let mut terms = BTreeMap::new();
        terms.insert(-1, self.relations.clone());
        terms.insert(0, self.generators.clone());
        let mut differentials = BTreeMap::new();
        differentials.insert(-1, self.presentation.clone());
        FreeComplex::new(self.field, self.vars.clone(), terms, differentials).expect("presentation is a complex")
    }

    /// Dimension of the degree-`t` component.
    pub fn component_dim(&self, t: i64) -> usize {
        let m = self.vars.len();
        let g: Vec<MonomialBasis> = self.generators.shifts().map(|s| MonomialBasis::new(m, t - s)).collect();
        let r: Vec<MonomialBasis> = self.relations.shifts().map(|s| MonomialBasis::new(m, t - s)).collect();
        let total: usize = g.iter().map(MonomialBasis::len).sum();
        let img = realize_block(self.field, &self.presentation, &r, &g);
        total - crate::exactla::rank(&img)
    }

    pub fn to_payload(&self) -> FPModulePayload {
        FPModulePayload {
            field: self.field,
            variables: self.vars.names().to_vec(),
            generators: self
                .generators
                .generators
                .iter()
                .map(|(l, s)| GeneratorPayload {
                    label: l.clone(),
                    shift: *s,
                })
                .collect(),
            relations: (0..self.relations.rank())
                .map(|c| RelationPayload {
                    shift: self.relations.generators[c].1,
                    entries: (0..self.generators.rank())
                        .filter_map(|r| {
                            self.presentation.get(r, c).map(|p| RelationEntry {
                                generator: r,
                                terms: p.terms().iter().map(|(e, v)| (e.clone(), v.to_string())).collect(),
                            })
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_payload(p: FPModulePayload) -> Result<FPGradedModule, PolyError> {
        let vars = VariableSet::new(p.variables)?;
        let generators = GradedFreeModule {
            generators: p.generators.iter().map(|g| (g.label.clone(), g.shift)).collect(),
        };
        let relations = GradedFreeModule {
            generators: p
                .relations
                .iter()
                .enumerate()
                .map(|(j, r)| (format!("r{j}"), r.shift))
                .collect(),
        };
        let mut pres = PolyMatrix::zeros(generators.rank(), relations.rank());
        for (c, rel) in p.relations.iter().enumerate() {
            for e in &rel.entries {
                if e.generator >= generators.rank() {
                    return Err(PolyError::Invalid(format!("unknown generator {}", e.generator)));
                }
                let mut terms = Vec::new();
                for (exp, coef) in &e.terms {
                    if exp.len() != vars.len() {
                        return Err(PolyError::Invalid("exponent vector length".into()));
                    }
                    terms.push((exp.clone(), p.field.parse_scalar(coef)?));
                }
                pres.set(e.generator, c, Poly::from_terms(p.field, vars.len(), terms));
            }
        }
        FPGradedModule::new(p.field, vars, generators, relations, pres)
    }

    pub fn from_json(s: &str) -> Result<FPGradedModule, PolyError> {
        let p: FPModulePayload = serde_json::from_str(s).map_err(|e| PolyError::Invalid(e.to_string()))?;
        FPGradedModule::from_payload(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_payload()).expect("module serialization is infallible")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FPModulePayload {
    pub field: Field,
    pub variables: Vec<String>,
    pub generators: Vec<GeneratorPayload>,
    pub relations: Vec<RelationPayload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorPayload {
    pub label: String,
    pub shift: i64,
}

/// One relation: its degree and its image, listed per generator as
/// `exponent vector → coefficient` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationPayload {
    pub shift: i64,
    pub entries: Vec<RelationEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub generator: usize,
    pub terms: Vec<(Vec<u32>, String)>,
}

/// `M ⊗_R X` realized slice by slice on internal degrees `[min_deg, max_deg]`: each slice is
/// the cokernel of the relations tensored with the free term, and the differential is
/// `id_M ⊗ d_X` pushed through the quotient.
pub fn tensor_fp_module(
    m: &FPGradedModule,
    x: &FreeComplex,
    min_deg: i64,
    max_deg: i64,
) -> Result<BigradedComplex, PolyError> {
    if m.vars != x.vars || m.field != x.field {
        return Err(PolyError::Invalid(
            "module and complex live over different rings".into(),
        ));
    }
    let field = m.field;
    let nv = m.vars.len();
    // generators of F_0 ⊗ X^q and F_1 ⊗ X^q, generator-of-M outer
    let pair = |a: &GradedFreeModule, b: &GradedFreeModule| -> GradedFreeModule {
        GradedFreeModule {
            generators: a
                .generators
                .iter()
                .flat_map(|(la, sa)| b.generators.iter().map(move |(lb, sb)| (format!("{la}⊗{lb}"), sa + sb)))
                .collect(),
        }
    };
    let kron_id = |p: &PolyMatrix, n: usize| -> PolyMatrix {
        let mut out = PolyMatrix::zeros(p.rows * n, p.cols * n);
        for (&(r, c), poly) in &p.entries {
            for j in 0..n {
                out.set(r * n + j, c * n + j, poly.clone());
            }
        }
        out
    };
    let id_kron = |n: usize, p: &PolyMatrix| -> PolyMatrix {
        let mut out = PolyMatrix::zeros(n * p.rows, n * p.cols);
        for i in 0..n {
            for (&(r, c), poly) in &p.entries {
                out.set(i * p.rows + r, i * p.cols + c, poly.clone());
            }
        }
        out
    };
    let mut free_terms = BTreeMap::new();
    let mut rel_terms = BTreeMap::new();
    let mut rel_maps = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (&q, g) in &x.terms {
        free_terms.insert(q, pair(&m.generators, g));
        rel_terms.insert(q, pair(&m.relations, g));
        rel_maps.insert(q, kron_id(&m.presentation, g.rank()));
        if let Some(d) = x.differentials.get(&q) {
            diffs.insert(q, id_kron(m.generators.rank(), d));
        }
    }
    let degrees: Vec<i64> = (min_deg..=max_deg).collect();
    type SliceData = (i64, Vec<String>, SparseMatrix, SparseMatrix);
    let per_degree: Vec<Vec<SliceData>> = degrees
        .par_iter()
        .map(|&t| {
            // per position: (labels, projection F→Q, section Q→F)
            free_terms
                .keys()
                .map(|&q| {
                    let fb: Vec<MonomialBasis> =
                        free_terms[&q].shifts().map(|s| MonomialBasis::new(nv, t - s)).collect();
                    let rb: Vec<MonomialBasis> =
                        rel_terms[&q].shifts().map(|s| MonomialBasis::new(nv, t - s)).collect();
                    let img = realize_block(field, &rel_maps[&q], &rb, &fb);
                    let rref = Rref::of(&img.transpose());
                    let free_cols = rref.free_columns();
                    let dim_f = img.rows();
                    let mut labels_f = Vec::with_capacity(dim_f);
                    for ((name, _), mb) in free_terms[&q].generators.iter().zip(&fb) {
                        for e in &mb.list {
                            labels_f.push(format!("{}·{}", monomial_label(e, m.vars.names()), name));
                        }
                    }
                    let labels = free_cols.iter().map(|&c| labels_f[c].clone()).collect();
                    let section = SparseMatrix::from_triplets(
                        field,
                        dim_f,
                        free_cols.len(),
                        free_cols.iter().enumerate().map(|(j, &c)| (c, j, field.one())),
                    );
                    // projection: reduce each unit vector, then read the free coordinates
                    let mut trip = Vec::new();
                    for i in 0..dim_f {
                        let mut v = vec![field.zero(); dim_f];
                        v[i] = field.one();
                        let red = rref.reduce(&v);
                        for (j, &c) in free_cols.iter().enumerate() {
                            if !red[c].is_zero() {
                                trip.push((j, i, red[c].clone()));
                            }
                        }
                    }
                    let proj = SparseMatrix::from_triplets(field, free_cols.len(), dim_f, trip);
                    (q, labels, proj, section)
                })
                .collect()
        })
        .collect();
    let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for (data, &t) in per_degree.iter().zip(&degrees) {
        let by_q: BTreeMap<i64, &SliceData> = data.iter().map(|d| (d.0, d)).collect();
        for (q, labels, _, _) in data {
            terms
                .entry(*q)
                .or_insert_with(|| BigradedTerm {
                    position: *q,
                    slices: BTreeMap::new(),
                })
                .slices
                .insert(t, Slice::new(labels.clone()));
        }
        for (&q, d) in &diffs {
            let (Some(src), Some(tgt)) = (by_q.get(&q), by_q.get(&(q + 1))) else {
                continue;
            };
            let sb: Vec<MonomialBasis> = free_terms[&q].shifts().map(|s| MonomialBasis::new(nv, t - s)).collect();
            let tb: Vec<MonomialBasis> = free_terms[&(q + 1)]
                .shifts()
                .map(|s| MonomialBasis::new(nv, t - s))
                .collect();
            let dm = realize_block(field, d, &sb, &tb);
            let block = tgt.2.mul(&dm)?.mul(&src.3)?;
            differentials.insert((q, t), block);
        }
    }
    let positions: Vec<i64> = x.terms.keys().copied().collect();
    let window = Window::closed(
        (positions[0], *positions.last().expect("nonempty complex")),
        (min_deg, max_deg),
    )
    .with_open(OpenEdges {
        deg_above: true,
        deg_below: true,
        ..Default::default()
    });
    Ok(BigradedComplex::build(
        field,
        window,
        terms.into_values(),
        differentials,
    )?)
}

/// Outcome of comparing `H(M ⊗ X)` with `H(G ⊗ X)` for a free resolution `G` of `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub compared_bidegrees: usize,
    pub mismatches: Vec<(i64, i64, usize, usize)>,
    pub module_side_total: usize,
    pub resolution_side_total: usize,
    pub pass: bool,
}

/// Compares cohomology of `M ⊗_R X` and `G ⊗_R X` per bidegree on internal degrees
/// `[min_deg, max_deg]`.
pub fn compare_module_with_resolution(
    m: &FPGradedModule,
    g: &FreeComplex,
    x: &FreeComplex,
    min_deg: i64,
    max_deg: i64,
) -> Result<QuasiIsoReport, PolyError> {
    let lhs = cohomology(&tensor_fp_module(m, x, min_deg, max_deg)?);
    let rhs = cohomology(&g.tensor(x)?.realize_range(min_deg, max_deg));
    let mut keys: Vec<(i64, i64)> = lhs
        .entries
        .iter()
        .chain(&rhs.entries)
        .filter(|e| !e.boundary_flag)
        .map(|e| (e.position, e.internal_degree))
        .collect();
    keys.sort();
    keys.dedup();
    let mismatches: Vec<_> = keys
        .iter()
        .filter(|&&(p, t)| lhs.dim(p, t) != rhs.dim(p, t))
        .map(|&(p, t)| (p, t, lhs.dim(p, t), rhs.dim(p, t)))
        .collect();
    Ok(QuasiIsoReport {
        compared_bidegrees: keys.len(),
        pass: mismatches.is_empty(),
        mismatches,
        module_side_total: lhs.total(),
        resolution_side_total: rhs.total(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polykoszul::{dual_koszul_complex, koszul_complex};

    #[test]
    fn free_module_leaves_complex_unchanged() {
        let f = Field::Prime(101);
        let v = VariableSet::standard(2);
        let x = koszul_complex(f, &v);
        let mx = tensor_fp_module(&FPGradedModule::free_rank_one(f, &v), &x, 0, 5).unwrap();
        let plain = x.realize_range(0, 5);
        for (p, t) in plain.support() {
            assert_eq!(mx.dim(p, t), plain.dim(p, t));
            assert_eq!(mx.d(p, t), plain.d(p, t));
        }
    }

    #[test]
    fn residue_field_kills_differential() {
        let f = Field::Rational;
        let v = VariableSet::standard(1);
        let k = FPGradedModule::quotient_by_variables(f, &v, &[0]);
        let mx = tensor_fp_module(&k, &koszul_complex(f, &v), 0, 4).unwrap();
        assert!(mx.differentials().is_empty());
        assert_eq!(mx.total_dim(), 2);
        assert_eq!((mx.dim(0, 0), mx.dim(-1, 1)), (1, 1));
    }

    #[test]
    fn component_dims_of_quotient() {
        let f = Field::Prime(5);
        let v = VariableSet::standard(2);
        let m = FPGradedModule::quotient_by_variables(f, &v, &[0]);
        assert_eq!((m.component_dim(0), m.component_dim(3)), (1, 1));
    }

    #[test]
    fn quotient_matches_its_resolution() {
        let f = Field::Prime(101);
        let v = VariableSet::standard(2);
        let m = FPGradedModule::quotient_by_variables(f, &v, &[0]);
        let r =
            compare_module_with_resolution(&m, &m.presentation_complex(), &dual_koszul_complex(f, &v), -2, 5).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.module_side_total > 0);
    }

    #[test]
    fn json_round_trip() {
        let f = Field::Rational;
        let v = VariableSet::standard(2);
        let m = FPGradedModule::quotient_by_variables(f, &v, &[0, 1]);
        let back = FPGradedModule::from_json(&m.to_json()).unwrap();
        assert_eq!(back.presentation, m.presentation);
        assert_eq!(back.relations.generators.len(), 2);
    }
}
