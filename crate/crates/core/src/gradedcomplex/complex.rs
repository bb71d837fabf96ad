use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GradedError;
use crate::exactla::{Field, MatrixPayload, SparseMatrix};

/// Bidegree `(position, internal degree)`.
pub type Bidegree = (i64, i64);

/// One internal-degree piece of a term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub dim: usize,
    pub labels: Vec<String>,
}

impl Slice {
    pub fn new(labels: Vec<String>) -> Slice {
        Slice {
            dim: labels.len(),
            labels,
        }
    }

    /// A slice with generated labels `prefix0, prefix1, ...`.
    pub fn anonymous(dim: usize, prefix: &str) -> Slice {
        Slice::new((0..dim).map(|i| format!("{prefix}{i}")).collect())
    }
}

/// The term at one cohomological position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedTerm {
    pub position: i64,
    pub slices: BTreeMap<i64, Slice>,
}

impl BigradedTerm {
    pub fn total_dim(&self) -> usize {
        self.slices.values().map(|s| s.dim).sum()
    }
}

/// Finite rectangle of bidegrees, together with which of its edges cut off a larger
/// complex. An open position edge makes cohomology at that edge unreliable; an open
/// degree edge only matters when degrees get mixed (tensor, Hom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub min_pos: i64,
    pub max_pos: i64,
    pub min_deg: i64,
    pub max_deg: i64,
    #[serde(default)]
    pub open: OpenEdges,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenEdges {
    pub pos_below: bool,
    pub pos_above: bool,
    pub deg_below: bool,
    pub deg_above: bool,
}

impl Window {
    pub fn closed(pos: (i64, i64), deg: (i64, i64)) -> Window {
        Window {
            min_pos: pos.0,
            max_pos: pos.1,
            min_deg: deg.0,
            max_deg: deg.1,
            open: OpenEdges::default(),
        }
    }

    pub fn with_open(mut self, open: OpenEdges) -> Window {
        self.open = open;
        self
    }

    pub fn contains(&self, (p, t): Bidegree) -> bool {
        self.min_pos <= p && p <= self.max_pos && self.min_deg <= t && t <= self.max_deg
    }

    pub fn positions(&self) -> std::ops::RangeInclusive<i64> {
        self.min_pos..=self.max_pos
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_deg..=self.max_deg
    }

    pub fn is_position_bounded(&self) -> bool {
        !self.open.pos_below && !self.open.pos_above
    }

    /// True when the cohomology at position `p` may be altered by terms outside the window.
    pub fn is_boundary(&self, p: i64) -> bool {
        (p == self.min_pos && self.open.pos_below) || (p == self.max_pos && self.open.pos_above)
    }

    pub fn is_empty(&self) -> bool {
        self.min_pos > self.max_pos || self.min_deg > self.max_deg
    }
}

/// A complex of finite-dimensional bigraded spaces whose differential has bidegree (1, 0).
///
/// The differential block at `(p, t)` maps the slice at `(p, t)` to the slice at
/// `(p + 1, t)`; missing blocks are zero and missing slices have dimension zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedComplex {
    field: Field,
    window: Window,
    terms: BTreeMap<i64, BigradedTerm>,
    differentials: BTreeMap<Bidegree, SparseMatrix>,
}

impl BigradedComplex {
    /// Validates shapes, window membership and `d∘d = 0`. Zero-dimensional slices and zero
    /// differential blocks are dropped.
    pub fn build(
        field: Field,
        window: Window,
        terms: impl IntoIterator<Item = BigradedTerm>,
        differentials: BTreeMap<Bidegree, SparseMatrix>,
    ) -> Result<BigradedComplex, GradedError> {
        let mut term_map: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
        for term in terms {
            let entry = term_map.entry(term.position).or_insert_with(|| BigradedTerm {
                position: term.position,
                slices: BTreeMap::new(),
            });
            for (t, s) in term.slices {
                if s.labels.len() != s.dim {
                    return Err(GradedError::Invalid(format!(
                        "slice ({}, {t}) has {} labels for dimension {}",
                        term.position,
                        s.labels.len(),
                        s.dim
                    )));
                }
                if s.dim == 0 {
                    continue;
                }
                if !window.contains((term.position, t)) {
                    return Err(GradedError::OutsideWindow {
                        position: term.position,
                        degree: t,
                    });
                }
                if entry.slices.insert(t, s).is_some() {
                    return Err(GradedError::Invalid(format!(
                        "slice ({}, {t}) given twice",
                        term.position
                    )));
                }
            }
        }
        term_map.retain(|_, t| !t.slices.is_empty());
        let mut c = BigradedComplex {
            field,
            window,
            terms: term_map,
            differentials: BTreeMap::new(),
        };
        for ((p, t), m) in differentials {
            if m.field() != field {
                return Err(GradedError::FieldMismatch {
                    expected: field,
                    found: m.field(),
                });
            }
            let expected = (c.dim(p + 1, t), c.dim(p, t));
            if m.shape() != expected {
                return Err(GradedError::ShapeMismatch {
                    position: p,
                    degree: t,
                    expected,
                    found: m.shape(),
                });
            }
            if !m.is_zero() {
                c.differentials.insert((p, t), m);
            }
        }
        c.check_square_zero()?;
        Ok(c)
    }

    fn check_square_zero(&self) -> Result<(), GradedError> {
        let bad: Vec<Bidegree> = self
            .differentials
            .par_iter()
            .filter_map(|(&(p, t), d0)| {
                let d1 = self.differentials.get(&(p + 1, t))?;
                let comp = d1.mul(d0).expect("shapes validated");
                (!comp.is_zero()).then_some((p, t))
            })
            .collect();
        match bad.into_iter().min() {
            Some((position, degree)) => Err(GradedError::NonzeroComposition { position, degree }),
            None => Ok(()),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigradedTerm> {
        &self.terms
    }

    pub fn differentials(&self) -> &BTreeMap<Bidegree, SparseMatrix> {
        &self.differentials
    }

    pub fn slice(&self, p: i64, t: i64) -> Option<&Slice> {
        self.terms.get(&p).and_then(|term| term.slices.get(&t))
    }

    pub fn dim(&self, p: i64, t: i64) -> usize {
        self.slice(p, t).map_or(0, |s| s.dim)
    }

    pub fn labels(&self, p: i64, t: i64) -> &[String] {
        self.slice(p, t).map_or(&[], |s| &s.labels)
    }

    /// Differential block at `(p, t)`, materializing zero blocks.
    pub fn d(&self, p: i64, t: i64) -> SparseMatrix {
        self.differentials
            .get(&(p, t))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.field, self.dim(p + 1, t), self.dim(p, t)))
    }

    pub fn d_ref(&self, p: i64, t: i64) -> Option<&SparseMatrix> {
        self.differentials.get(&(p, t))
    }

    /// Internal degrees carrying at least one nonzero slice, ascending.
    pub fn occupied_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.terms.values().flat_map(|t| t.slices.keys().copied()).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Bidegrees with nonzero slices, sorted.
    pub fn support(&self) -> Vec<Bidegree> {
        self.terms
            .iter()
            .flat_map(|(p, term)| term.slices.keys().map(move |t| (*p, *t)))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.terms.values().map(BigradedTerm::total_dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Same data, different window. The new window must contain every nonzero slice.
    pub fn with_window(&self, window: Window) -> Result<BigradedComplex, GradedError> {
        if let Some(&(position, degree)) = self.support().iter().find(|b| !window.contains(**b)) {
            return Err(GradedError::OutsideWindow { position, degree });
        }
        Ok(BigradedComplex { window, ..self.clone() })
    }

    /// Keeps only the bidegrees inside `window` (a brutal truncation). Edges of the new
    /// window that cut off nonzero data are marked open.
    pub fn restrict(&self, window: Window) -> BigradedComplex {
        let mut open = window.open;
        let support = self.support();
        open.pos_below |= self.window.open.pos_below || support.iter().any(|&(p, _)| p < window.min_pos);
        open.pos_above |= self.window.open.pos_above || support.iter().any(|&(p, _)| p > window.max_pos);
        open.deg_below |= self.window.open.deg_below || support.iter().any(|&(_, t)| t < window.min_deg);
        open.deg_above |= self.window.open.deg_above || support.iter().any(|&(_, t)| t > window.max_deg);
        let window = window.with_open(open);
        let terms: Vec<BigradedTerm> = self
            .terms
            .iter()
            .filter(|(p, _)| window.positions().contains(p))
            .map(|(p, term)| BigradedTerm {
                position: *p,
                slices: term
                    .slices
                    .iter()
                    .filter(|(t, _)| window.degrees().contains(t))
                    .map(|(t, s)| (*t, s.clone()))
                    .collect(),
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .filter(|(&(p, t), _)| window.contains((p, t)) && window.contains((p + 1, t)))
            .map(|(k, m)| (*k, m.clone()))
            .collect();
        BigradedComplex::build(self.field, window, terms, differentials)
            .expect("restriction of a valid complex is valid")
    }

    /// Replaces every basis label; `f` receives the bidegree, index and old label.
    pub fn relabel(&self, f: impl Fn(Bidegree, usize, &str) -> String) -> BigradedComplex {
        let mut c = self.clone();
        for (p, term) in c.terms.iter_mut() {
            for (t, s) in term.slices.iter_mut() {
                s.labels = s.labels.iter().enumerate().map(|(i, l)| f((*p, *t), i, l)).collect();
            }
        }
        c
    }

    /// Complex with the given slice dimensions and zero differential.
    pub fn zero_differential(
        field: Field,
        window: Window,
        slices: impl IntoIterator<Item = (Bidegree, Slice)>,
    ) -> Result<BigradedComplex, GradedError> {
        let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
        for ((p, t), s) in slices {
            terms
                .entry(p)
                .or_insert_with(|| BigradedTerm {
                    position: p,
                    slices: BTreeMap::new(),
                })
                .slices
                .insert(t, s);
        }
        BigradedComplex::build(field, window, terms.into_values(), BTreeMap::new())
    }

    /// The ground field placed at a single bidegree.
    pub fn unit(field: Field, at: Bidegree) -> BigradedComplex {
        BigradedComplex::zero_differential(
            field,
            Window::closed((at.0, at.0), (at.1, at.1)),
            [(at, Slice::new(vec!["1".into()]))],
        )
        .expect("single slice is valid")
    }

    pub fn to_payload(&self) -> ComplexPayload {
        ComplexPayload {
            field: self.field,
            window: self.window,
            slices: self
                .terms
                .iter()
                .flat_map(|(p, term)| {
                    term.slices.iter().map(move |(t, s)| SlicePayload {
                        position: *p,
                        degree: *t,
                        dim: s.dim,
                        labels: s.labels.clone(),
                    })
                })
                .collect(),
            differentials: self
                .differentials
                .iter()
                .map(|(&(p, t), m)| DifferentialPayload {
                    position: p,
                    degree: t,
                    matrix: MatrixPayload::from(m),
                })
                .collect(),
        }
    }

    pub fn from_payload(p: ComplexPayload) -> Result<BigradedComplex, GradedError> {
        let slices = p.slices.into_iter().map(|s| {
            (
                (s.position, s.degree),
                Slice {
                    dim: s.dim,
                    labels: s.labels,
                },
            )
        });
        let mut terms: BTreeMap<i64, BigradedTerm> = BTreeMap::new();
        for ((pos, t), s) in slices {
            if terms
                .entry(pos)
                .or_insert_with(|| BigradedTerm {
                    position: pos,
                    slices: BTreeMap::new(),
                })
                .slices
                .insert(t, s)
                .is_some()
            {
                return Err(GradedError::Invalid(format!("slice ({pos}, {t}) given twice")));
            }
        }
        let mut diffs = BTreeMap::new();
        for d in p.differentials {
            let m = SparseMatrix::try_from(d.matrix)?;
            if diffs.insert((d.position, d.degree), m).is_some() {
                return Err(GradedError::Invalid(format!(
                    "differential ({}, {}) given twice",
                    d.position, d.degree
                )));
            }
        }
        BigradedComplex::build(p.field, p.window, terms.into_values(), diffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_payload()).expect("complex serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<BigradedComplex, GradedError> {
        let p: ComplexPayload = serde_json::from_str(s).map_err(|e| GradedError::Invalid(e.to_string()))?;
        BigradedComplex::from_payload(p)
    }
}

/// Wire form of a [`BigradedComplex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPayload {
    pub field: Field,
    pub window: Window,
    pub slices: Vec<SlicePayload>,
    pub differentials: Vec<DifferentialPayload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicePayload {
    pub position: i64,
    pub degree: i64,
    pub dim: usize,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialPayload {
    pub position: i64,
    pub degree: i64,
    pub matrix: MatrixPayload,
}

/// Incremental construction of a complex.
pub struct ComplexBuilder {
    field: Field,
    window: Window,
    terms: BTreeMap<i64, BigradedTerm>,
    differentials: BTreeMap<Bidegree, SparseMatrix>,
}

impl ComplexBuilder {
    pub fn new(field: Field, window: Window) -> ComplexBuilder {
        ComplexBuilder {
            field,
            window,
            terms: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    pub fn slice(&mut self, p: i64, t: i64, slice: Slice) -> &mut Self {
        self.terms
            .entry(p)
            .or_insert_with(|| BigradedTerm {
                position: p,
                slices: BTreeMap::new(),
            })
            .slices
            .insert(t, slice);
        self
    }

    pub fn differential(&mut self, p: i64, t: i64, m: SparseMatrix) -> &mut Self {
        self.differentials.insert((p, t), m);
        self
    }

    pub fn build(self) -> Result<BigradedComplex, GradedError> {
        BigradedComplex::build(self.field, self.window, self.terms.into_values(), self.differentials)
    }
}
