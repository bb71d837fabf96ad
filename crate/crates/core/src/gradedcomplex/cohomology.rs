use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Bidegree, BigradedComplex, Window};
use crate::exactla::rank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyEntry {
    pub position: i64,
    pub internal_degree: i64,
    pub dim: usize,
    /// Set when a neighbouring term lies outside the window, so `dim` may be wrong.
    pub boundary_flag: bool,
}

/// Cohomology dimensions at every bidegree where the complex has a nonzero slice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub window: Window,
    pub entries: Vec<CohomologyEntry>,
}

impl CohomologyTable {
    pub fn get(&self, p: i64, t: i64) -> Option<&CohomologyEntry> {
        self.entries
            .binary_search_by_key(&(p, t), |e| (e.position, e.internal_degree))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// Dimension at a bidegree; zero where the complex has no slice.
    pub fn dim(&self, p: i64, t: i64) -> usize {
        self.get(p, t).map_or(0, |e| e.dim)
    }

    pub fn is_flagged(&self, p: i64, t: i64) -> bool {
        self.get(p, t).is_some_and(|e| e.boundary_flag) || self.window.is_boundary(p)
    }

    /// Nonzero entries that are not boundary-flagged.
    pub fn nonzero(&self) -> Vec<CohomologyEntry> {
        self.entries
            .iter()
            .filter(|e| e.dim > 0 && !e.boundary_flag)
            .copied()
            .collect()
    }

    /// Sum over internal degrees at one position, unflagged entries only.
    pub fn total_at(&self, p: i64) -> usize {
        self.entries
            .iter()
            .filter(|e| e.position == p && !e.boundary_flag)
            .map(|e| e.dim)
            .sum()
    }

    pub fn total(&self) -> usize {
        self.nonzero().iter().map(|e| e.dim).sum()
    }

    /// Per-position totals over unflagged entries, including zero positions of the window.
    pub fn position_totals(&self) -> BTreeMap<i64, usize> {
        self.window
            .positions()
            .filter(|p| !self.window.is_boundary(*p))
            .map(|p| (p, self.total_at(p)))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.nonzero().is_empty()
    }

    pub fn flagged(&self) -> Vec<Bidegree> {
        self.entries
            .iter()
            .filter(|e| e.boundary_flag)
            .map(|e| (e.position, e.internal_degree))
            .collect()
    }

    /// CSV rows `position,internal_degree,dim,boundary_flag` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("position,internal_degree,dim,boundary_flag\n");
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{}",
                e.position, e.internal_degree, e.dim, e.boundary_flag
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn from_csv(window: Window, csv: &str) -> Result<CohomologyTable, String> {
        let mut entries = Vec::new();
        for (i, line) in csv.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(format!("line {}: expected 4 fields", i + 1));
            }
            let bad = |what: &str| format!("line {}: bad {what}", i + 1);
            entries.push(CohomologyEntry {
                position: f[0].parse().map_err(|_| bad("position"))?,
                internal_degree: f[1].parse().map_err(|_| bad("internal degree"))?,
                dim: f[2].parse().map_err(|_| bad("dim"))?,
                boundary_flag: f[3].parse().map_err(|_| bad("flag"))?,
            });
        }
        entries.sort_by_key(|e| (e.position, e.internal_degree));
        Ok(CohomologyTable { window, entries })
    }
}

/// `dim ker d^p − rank d^{p−1}` at every occupied bidegree. Slices are independent and
/// their ranks are computed in parallel.
pub fn cohomology(c: &BigradedComplex) -> CohomologyTable {
    let ranks: BTreeMap<Bidegree, usize> = c.differentials().par_iter().map(|(k, m)| (*k, rank(m))).collect();
    let r = |p: i64, t: i64| ranks.get(&(p, t)).copied().unwrap_or(0);
    let window = *c.window();
    let entries = c
        .support()
        .into_iter()
        .map(|(p, t)| CohomologyEntry {
            position: p,
            internal_degree: t,
            dim: c.dim(p, t) - r(p, t) - r(p - 1, t),
            boundary_flag: window.is_boundary(p),
        })
        .collect();
    CohomologyTable { window, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{Field, SparseMatrix};
    use crate::gradedcomplex::{ComplexBuilder, Slice};

    #[test]
    fn identity_complex_is_acyclic() {
        let f = Field::Prime(101);
        let mut b = ComplexBuilder::new(f, Window::closed((0, 1), (0, 0)));
        b.slice(0, 0, Slice::anonymous(1, "a"))
            .slice(1, 0, Slice::anonymous(1, "b"))
            .differential(0, 0, SparseMatrix::identity(f, 1));
        let h = cohomology(&b.build().unwrap());
        assert!(h.is_acyclic());
        assert_eq!(h.entries.len(), 2);
    }

    #[test]
    fn zero_differential_reports_dimensions() {
        let f = Field::Rational;
        let c = BigradedComplex::zero_differential(
            f,
            Window::closed((0, 2), (0, 0)),
            [(0, 1), (1, 2), (2, 1)].map(|(p, d)| ((p, 0), Slice::anonymous(d, "e"))),
        )
        .unwrap();
        let h = cohomology(&c);
        assert_eq!((h.dim(0, 0), h.dim(1, 0), h.dim(2, 0)), (1, 2, 1));
        let back = CohomologyTable::from_csv(h.window, &h.to_csv()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn open_edges_flag_their_positions() {
        let f = Field::Rational;
        let w = Window::closed((0, 1), (0, 0)).with_open(crate::gradedcomplex::OpenEdges {
            pos_above: true,
            ..Default::default()
        });
        let c = BigradedComplex::zero_differential(
            f,
            w,
            [((0, 0), Slice::anonymous(1, "a")), ((1, 0), Slice::anonymous(1, "b"))],
        )
        .unwrap();
        let h = cohomology(&c);
        assert!(h.is_flagged(1, 0));
        assert_eq!(h.nonzero().len(), 1);
    }
}
