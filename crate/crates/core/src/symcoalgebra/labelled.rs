use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Coproduct, SymError};
use crate::basis::{monomial_count, monomial_label, monomials, MonomialBasis};
use crate::exactla::{Field, FieldScalar, SparseMatrix};
use crate::gradedcomplex::{BigradedComplex, BigradedTerm, ChainMap, OpenEdges, Slice, Window};

/// Whether a term is the cofree comodule `C ⊗ V` or the free contramodule `Hom(C, V)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Cofree,
    Free,
}

/// `Ψ: C ⊗ V ↦ Hom(C, V)` or `Φ: Hom(C, V) ↦ C ⊗ V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Psi,
    Phi,
}

/// Graded multiplicity space with a labelled basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
}

impl GradedSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Complex of cofree comodules or free contramodules over `C = Sym(W)`, `dim W = a`.
///
/// A morphism between `C ⊗ V` and `C ⊗ U` (or between `Hom(C, V)` and `Hom(C, U)`) is
/// determined by a linear map `K: C ⊗ V → U`; `kernels[p][j]` is its component on
/// `Sym_j(W) ⊗ V_p`, columns indexed `v · dim Sym_j + u`. Homogeneity means `K_j` sends
/// degree `d` to degree `d + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelledComplex {
    field: Field,
    a: usize,
    coproduct: Coproduct,
    carrier: Carrier,
    terms: BTreeMap<i64, GradedSpace>,
    kernels: BTreeMap<i64, BTreeMap<i64, SparseMatrix>>,
}

type SliceBasis = Vec<(usize, Vec<u32>)>;
/// Internal degree of a kernel component, its monomial basis and its column lists.
type KernelColumns = (i64, MonomialBasis, Vec<Vec<(usize, FieldScalar)>>);

impl LabelledComplex {
    pub fn new(
        field: Field,
        a: usize,
        coproduct: Coproduct,
        carrier: Carrier,
        terms: BTreeMap<i64, GradedSpace>,
        kernels: BTreeMap<i64, BTreeMap<i64, SparseMatrix>>,
    ) -> Result<LabelledComplex, SymError> {
        for (p, v) in &terms {
            if v.labels.len() != v.degrees.len() {
                return Err(SymError::Invalid(format!(
                    "term {p}: labels and degrees differ in length"
                )));
            }
        }
        for (&p, comps) in &kernels {
            let (Some(src), Some(tgt)) = (terms.get(&p), terms.get(&(p + 1))) else {
                return Err(SymError::Invalid(format!(
                    "kernel at {p} lacks a source or target term"
                )));
            };
            for (&j, k) in comps {
                if j < 0 {
                    return Err(SymError::Invalid(format!("kernel at {p} has negative degree {j}")));
                }
                if k.field() != field {
                    return Err(SymError::Invalid(format!("kernel at {p} lives over another field")));
                }
                let n = monomial_count(a, j);
                if k.shape() != (tgt.dim(), src.dim() * n) {
                    return Err(SymError::Invalid(format!(
                        "kernel at {p}, degree {j}: shape {:?}, expected {:?}",
                        k.shape(),
                        (tgt.dim(), src.dim() * n)
                    )));
                }
                for &(r, c, _) in k.entries() {
                    if tgt.degrees[r] != src.degrees[c / n] + j {
                        return Err(SymError::Invalid(format!(
                            "kernel at {p}, degree {j}: entry ({r},{c}) is not homogeneous"
                        )));
                    }
                }
            }
        }
        Ok(LabelledComplex {
            field,
            a,
            coproduct,
            carrier,
            terms,
            kernels,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn coproduct(&self) -> Coproduct {
        self.coproduct
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn terms(&self) -> &BTreeMap<i64, GradedSpace> {
        &self.terms
    }

    pub fn kernels(&self) -> &BTreeMap<i64, BTreeMap<i64, SparseMatrix>> {
        &self.kernels
    }

    /// The comodule–contramodule correspondence on (co)free terms: switches the carrier
    /// and keeps multiplicity spaces and kernels.
    pub fn co_contra(&self, direction: Direction) -> Result<LabelledComplex, SymError> {
        let (need, to) = match direction {
            Direction::Psi => (Carrier::Cofree, Carrier::Free),
            Direction::Phi => (Carrier::Free, Carrier::Cofree),
        };
        if self.carrier != need {
            return Err(SymError::WrongCarrier {
                expected: need,
                found: self.carrier,
            });
        }
        Ok(LabelledComplex {
            carrier: to,
            ..self.clone()
        })
    }

    fn sym_degree(&self, v_deg: i64, t: i64) -> i64 {
        match self.carrier {
            Carrier::Cofree => t - v_deg,
            Carrier::Free => v_deg - t,
        }
    }

    fn slice_basis(&self, p: i64, t: i64, m: usize) -> SliceBasis {
        let mut out = Vec::new();
        for (vi, &d) in self.terms[&p].degrees.iter().enumerate() {
            for mut u in monomials(m, self.sym_degree(d, t)) {
                u.resize(self.a, 0);
                out.push((vi, u));
            }
        }
        out
    }

    fn slice_labels(&self, p: i64, basis: &SliceBasis) -> Vec<String> {
        let names: Vec<String> = (1..=self.a).map(|i| format!("w{i}")).collect();
        let v = &self.terms[&p];
        basis
            .iter()
            .map(|(vi, u)| {
                let mono = monomial_label(u, &names);
                match self.carrier {
                    Carrier::Cofree => format!("{mono}⊗{}", v.labels[*vi]),
                    Carrier::Free => format!("δ[{mono}]⊗{}", v.labels[*vi]),
                }
            })
            .collect()
    }

    fn window(&self, degrees: (i64, i64)) -> Window {
        let pmin = self.terms.keys().next().copied().unwrap_or(0);
        let pmax = self.terms.keys().next_back().copied().unwrap_or(0);
        let all = self.terms.values().flat_map(|v| v.degrees.iter().copied());
        let (lo, hi) = (all.clone().min().unwrap_or(0), all.max().unwrap_or(0));
        let open = match self.carrier {
            Carrier::Cofree => OpenEdges {
                deg_below: degrees.0 > lo,
                deg_above: true,
                ..Default::default()
            },
            Carrier::Free => OpenEdges {
                deg_below: true,
                deg_above: degrees.1 < hi,
                ..Default::default()
            },
        };
        Window::closed((pmin, pmax), degrees).with_open(open)
    }

    /// Realization on internal degrees `[degrees.0, degrees.1]`.
    pub fn realize(&self, degrees: (i64, i64)) -> BigradedComplex {
        self.realize_stage(self.a, degrees).expect("full stage exists")
    }

    /// Realization with `C` replaced by `C_B = Sym(w_1..w_m)`: the cotensor subcomplex for
    /// cofree terms, the `Cohom` quotient for free terms.
    pub fn realize_stage(&self, m: usize, degrees: (i64, i64)) -> Result<BigradedComplex, SymError> {
        if m > self.a {
            return Err(SymError::StageTooLarge { m, a: self.a });
        }
        let field = self.field;
        let kcols: BTreeMap<i64, Vec<KernelColumns>> = self
            .kernels
            .iter()
            .map(|(&p, comps)| {
                let v = comps
                    .iter()
                    .map(|(&j, k)| (j, MonomialBasis::new(self.a, j), k.col_lists()))
                    .collect();
                (p, v)
            })
            .collect();
        let degs: Vec<i64> = (degrees.0..=degrees.1).collect();
        type Out = (Vec<(i64, Slice)>, Vec<((i64, i64), SparseMatrix)>);
        let per_degree: Vec<Out> = degs
            .par_iter()
            .map(|&t| {
                let bases: BTreeMap<i64, SliceBasis> =
                    self.terms.keys().map(|&p| (p, self.slice_basis(p, t, m))).collect();
                let slices = bases
                    .iter()
                    .filter(|(_, b)| !b.is_empty())
                    .map(|(&p, b)| (p, Slice::new(self.slice_labels(p, b))))
                    .collect();
                let mut diffs = Vec::new();
                for (&p, comps) in &kcols {
                    let (src, tgt) = (&bases[&p], &bases[&(p + 1)]);
                    if src.is_empty() || tgt.is_empty() {
                        continue;
                    }
                    let block = match self.carrier {
                        Carrier::Cofree => self.cofree_block(comps, src, tgt),
                        Carrier::Free => self.free_block(comps, src, tgt, m),
                    };
                    if !block.is_zero() {
                        diffs.push(((p, t), block));
                    }
                }
                (slices, diffs)
            })
            .collect();
        let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for ((slices, diffs), &t) in per_degree.into_iter().zip(&degs) {
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
        Ok(BigradedComplex::build(
            field,
            self.window(degrees),
            terms.into_values(),
            differentials,
        )?)
    }

    /// `u ⊗ v ↦ Σ coef · u' ⊗ K(u'' ⊗ v)` over the splittings `u = u' u''`.
    fn cofree_block(&self, comps: &[KernelColumns], src: &SliceBasis, tgt: &SliceBasis) -> SparseMatrix {
        let index = index_of(tgt);
        let mut trip = Vec::new();
        for (ci, (vi, u)) in src.iter().enumerate() {
            for (_, mb, cols) in comps {
                for (k, part) in mb.list.iter().enumerate() {
                    if part.iter().zip(u).any(|(a, b)| a > b) {
                        continue;
                    }
                    let col = &cols[vi * mb.len() + k];
                    if col.is_empty() {
                        continue;
                    }
                    let coef = self.coproduct.coefficient(self.field, u, part);
                    if coef.is_zero() {
                        continue;
                    }
                    let rest: Vec<u32> = u.iter().zip(part).map(|(a, b)| a - b).collect();
                    for (w, val) in col {
                        let r = index[&(*w, rest.clone())];
                        trip.push((r, ci, &coef * val));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(self.field, tgt.len(), src.len(), trip)
    }

    /// `δ_w ⊗ v ↦ Σ coef · δ_{w c''} ⊗ K(c'' ⊗ v)` with `c''` supported on the stage.
    fn free_block(&self, comps: &[KernelColumns], src: &SliceBasis, tgt: &SliceBasis, m: usize) -> SparseMatrix {
        let index = index_of(tgt);
        let mut trip = Vec::new();
        for (ci, (vi, w)) in src.iter().enumerate() {
            for (_, mb, cols) in comps {
                for (k, part) in mb.list.iter().enumerate() {
                    if part[m..].iter().any(|&e| e > 0) {
                        continue;
                    }
                    let col = &cols[vi * mb.len() + k];
                    if col.is_empty() {
                        continue;
                    }
                    let c: Vec<u32> = w.iter().zip(part).map(|(a, b)| a + b).collect();
                    let coef = self.coproduct.coefficient(self.field, &c, part);
                    if coef.is_zero() {
                        continue;
                    }
                    for (u, val) in col {
                        // absent only in a degree-truncated quotient, where the term dies
                        if let Some(&r) = index.get(&(*u, c.clone())) {
                            trip.push((r, ci, &coef * val));
                        }
                    }
                }
            }
        }
        SparseMatrix::from_triplets(self.field, tgt.len(), src.len(), trip)
    }

    /// Transition map between stages `small ≤ large`: the inclusion of subcomplexes
    /// (cofree) or the restriction between quotients (free, from `large` to `small`).
    pub fn stage_map(&self, small: usize, large: usize, degrees: (i64, i64)) -> Result<ChainMap, SymError> {
        if small.max(large) > self.a {
            return Err(SymError::StageTooLarge {
                m: small.max(large),
                a: self.a,
            });
        }
        if small > large {
            return Err(SymError::Invalid(format!("stages {small} > {large} are not nested")));
        }
        let xs = Arc::new(self.realize_stage(small, degrees)?);
        let xl = Arc::new(self.realize_stage(large, degrees)?);
        let mut blocks = BTreeMap::new();
        for &p in self.terms.keys() {
            for t in degrees.0..=degrees.1 {
                let bs = self.slice_basis(p, t, small);
                if bs.is_empty() {
                    continue;
                }
                let il = index_of(&self.slice_basis(p, t, large));
                let pairs = bs.iter().enumerate().map(|(i, e)| (il[e], i));
                let (n_s, n_l) = (bs.len(), il.len());
                let block = match self.carrier {
                    Carrier::Cofree => {
                        SparseMatrix::from_triplets(self.field, n_l, n_s, pairs.map(|(l, s)| (l, s, self.field.one())))
                    }
                    Carrier::Free => {
                        SparseMatrix::from_triplets(self.field, n_s, n_l, pairs.map(|(l, s)| (s, l, self.field.one())))
                    }
                };
                blocks.insert((p, t), block);
            }
        }
        Ok(match self.carrier {
            Carrier::Cofree => ChainMap::new(xs, xl, blocks)?,
            Carrier::Free => ChainMap::new(xl, xs, blocks)?,
        })
    }

    /// The complex over the truncated coalgebra `C_{≤d}`: every term is finite-dimensional,
    /// cofree terms become subcomplexes `C_{≤d} ⊗ V` and free terms quotients `Hom(C_{≤d}, V)`.
    /// Each term carries the action of the dual algebra `k[x_1..x_a]/(x)^{d+1}`.
    pub fn truncate(&self, d: usize) -> TruncatedComplex {
        let bases: BTreeMap<i64, SliceBasis> = self
            .terms
            .iter()
            .map(|(&p, v)| {
                let mut b = Vec::new();
                for vi in 0..v.dim() {
                    for j in 0..=d as i64 {
                        b.extend(monomials(self.a, j).into_iter().map(|u| (vi, u)));
                    }
                }
                (p, b)
            })
            .collect();
        let kcols: BTreeMap<i64, Vec<KernelColumns>> = self
            .kernels
            .iter()
            .map(|(&p, comps)| {
                let v = comps
                    .iter()
                    .map(|(&j, k)| (j, MonomialBasis::new(self.a, j), k.col_lists()))
                    .collect();
                (p, v)
            })
            .collect();
        let differentials = kcols
            .iter()
            .map(|(&p, comps)| {
                let (src, tgt) = (&bases[&p], &bases[&(p + 1)]);
                let block = match self.carrier {
                    Carrier::Cofree => self.cofree_block(comps, src, tgt),
                    Carrier::Free => self.free_block(comps, src, tgt, self.a),
                };
                (p, block)
            })
            .collect();
        let names: Vec<String> = (1..=self.a).map(|i| format!("w{i}")).collect();
        let terms = bases
            .iter()
            .map(|(&p, b)| {
                let index = index_of(b);
                let actions = (0..self.a)
                    .map(|i| {
                        let mut e = vec![0; self.a];
                        e[i] = 1;
                        // x_i sends u to coef · u/w_i on C; Hom(C, V) gets the transpose
                        let trip = b.iter().enumerate().filter(|(_, (_, u))| u[i] > 0).map(|(c, (vi, u))| {
                            let mut rest = u.clone();
                            rest[i] -= 1;
                            let r = index[&(*vi, rest)];
                            let coef = self.coproduct.coefficient(self.field, u, &e);
                            match self.carrier {
                                Carrier::Cofree => (r, c, coef),
                                Carrier::Free => (c, r, coef),
                            }
                        });
                        SparseMatrix::from_triplets(self.field, b.len(), b.len(), trip.collect::<Vec<_>>())
                    })
                    .collect();
                let labels = b
                    .iter()
                    .map(|(vi, u)| {
                        let mono = monomial_label(u, &names);
                        match self.carrier {
                            Carrier::Cofree => format!("{mono}⊗{}", self.terms[&p].labels[*vi]),
                            Carrier::Free => format!("δ[{mono}]⊗{}", self.terms[&p].labels[*vi]),
                        }
                    })
                    .collect();
                (p, TruncatedTerm { labels, actions })
            })
            .collect();
        TruncatedComplex {
            field: self.field,
            terms,
            differentials,
        }
    }

    pub fn to_payload(&self) -> LabelledPayload {
        LabelledPayload {
            field: self.field,
            a: self.a,
            coproduct: self.coproduct,
            terms: self
                .terms
                .iter()
                .map(|(&position, v)| TermPayload {
                    position,
                    carrier: self.carrier,
                    labels: v.labels.clone(),
                    degrees: v.degrees.clone(),
                })
                .collect(),
            kernels: self
                .kernels
                .iter()
                .flat_map(|(&position, comps)| {
                    comps.iter().map(move |(&sym_degree, k)| KernelPayload {
                        position,
                        sym_degree,
                        matrix: k.clone(),
                    })
                })
                .collect(),
        }
    }

    pub fn from_payload(p: LabelledPayload) -> Result<LabelledComplex, SymError> {
        let carrier = p
            .terms
            .first()
            .map(|t| t.carrier)
            .ok_or_else(|| SymError::Invalid("no terms".into()))?;
        let mut terms = BTreeMap::new();
        for t in p.terms {
            if t.carrier != carrier {
                return Err(SymError::WrongCarrier {
                    expected: carrier,
                    found: t.carrier,
                });
            }
            let space = GradedSpace {
                labels: t.labels,
                degrees: t.degrees,
            };
            if terms.insert(t.position, space).is_some() {
                return Err(SymError::Invalid(format!("term {} listed twice", t.position)));
            }
        }
        let mut kernels: BTreeMap<i64, BTreeMap<i64, SparseMatrix>> = BTreeMap::new();
        for k in p.kernels {
            if kernels
                .entry(k.position)
                .or_default()
                .insert(k.sym_degree, k.matrix)
                .is_some()
            {
                return Err(SymError::Invalid(format!(
                    "kernel ({}, {}) listed twice",
                    k.position, k.sym_degree
                )));
            }
        }
        LabelledComplex::new(p.field, p.a, p.coproduct, carrier, terms, kernels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_payload()).expect("labelled complex serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<LabelledComplex, SymError> {
        let p: LabelledPayload = serde_json::from_str(s).map_err(|e| SymError::Invalid(e.to_string()))?;
        LabelledComplex::from_payload(p)
    }
}

/// A complex of finite-dimensional modules over the truncated dual algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedComplex {
    pub field: Field,
    pub terms: BTreeMap<i64, TruncatedTerm>,
    /// `differentials[p]` maps the term at `p` to the term at `p + 1`.
    pub differentials: BTreeMap<i64, SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedTerm {
    pub labels: Vec<String>,
    /// Action of `x_1, …, x_a`.
    pub actions: Vec<SparseMatrix>,
}

fn index_of(basis: &SliceBasis) -> HashMap<(usize, Vec<u32>), usize> {
    basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelledPayload {
    pub field: Field,
    pub a: usize,
    #[serde(default)]
    pub coproduct: Coproduct,
    pub terms: Vec<TermPayload>,
    pub kernels: Vec<KernelPayload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermPayload {
    pub position: i64,
    pub carrier: Carrier,
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelPayload {
    pub position: i64,
    pub sym_degree: i64,
    pub matrix: SparseMatrix,
}
