use std::collections::BTreeMap;
use std::sync::Arc;

use super::{cohomology, Bidegree, BigradedComplex, GradedError};
use crate::exactla::{kernel_basis, rank, SparseMatrix};

/// A degree-(0,0) map of complexes, stored as one block per bidegree of the source.
/// Missing blocks are zero.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<BigradedComplex>,
    target: Arc<BigradedComplex>,
    blocks: BTreeMap<Bidegree, SparseMatrix>,
}

impl ChainMap {
    /// Checks block shapes and `d_Y f = f d_X` at every bidegree.
    pub fn new(
        source: Arc<BigradedComplex>,
        target: Arc<BigradedComplex>,
        blocks: BTreeMap<Bidegree, SparseMatrix>,
    ) -> Result<ChainMap, GradedError> {
        for (&(p, t), m) in &blocks {
            let expected = (target.dim(p, t), source.dim(p, t));
            if m.shape() != expected {
                return Err(GradedError::ShapeMismatch {
                    position: p,
                    degree: t,
                    expected,
                    found: m.shape(),
                });
            }
        }
        let blocks = blocks.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let f = ChainMap { source, target, blocks };
        f.check_commutes()?;
        Ok(f)
    }

    pub fn identity(x: Arc<BigradedComplex>) -> ChainMap {
        let blocks = x
            .support()
            .into_iter()
            .map(|(p, t)| ((p, t), SparseMatrix::identity(x.field(), x.dim(p, t))))
            .collect();
        ChainMap {
            source: x.clone(),
            target: x,
            blocks,
        }
    }

    fn check_commutes(&self) -> Result<(), GradedError> {
        let mut keys: Vec<Bidegree> = self.source.support();
        keys.extend(self.target.support().into_iter().map(|(p, t)| (p - 1, t)));
        keys.sort();
        keys.dedup();
        for (p, t) in keys {
            let lhs = self.target.d(p, t).mul(&self.block(p, t))?;
            let rhs = self.block(p + 1, t).mul(&self.source.d(p, t))?;
            if lhs != rhs {
                return Err(GradedError::NotChainMap { position: p, degree: t });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<BigradedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<BigradedComplex> {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<Bidegree, SparseMatrix> {
        &self.blocks
    }

    pub fn block(&self, p: i64, t: i64) -> SparseMatrix {
        self.blocks
            .get(&(p, t))
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.source.field(), self.target.dim(p, t), self.source.dim(p, t)))
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &ChainMap) -> Result<ChainMap, GradedError> {
        if self.target.as_ref() != g.source.as_ref() {
            return Err(GradedError::Invalid(
                "composed maps do not share the middle complex".into(),
            ));
        }
        let mut blocks = BTreeMap::new();
        for (&(p, t), f) in &self.blocks {
            if let Some(gb) = g.blocks.get(&(p, t)) {
                blocks.insert((p, t), gb.mul(f)?);
            }
        }
        ChainMap::new(self.source.clone(), g.target.clone(), blocks)
    }

    /// Rank of the map induced on cohomology at `(p, t)`: the image of the source cycles
    /// in the target cycles modulo the target boundaries.
    pub fn induced_rank(&self, p: i64, t: i64) -> usize {
        let (ds, dt) = (self.source.dim(p, t), self.target.dim(p, t));
        if ds == 0 || dt == 0 {
            return 0;
        }
        let z = kernel_basis(&self.source.d(p, t));
        let fz = self.block(p, t).mul(&z).expect("shapes agree");
        let b = self.target.d(p - 1, t);
        let both = SparseMatrix::hstack(&[&fz, &b]).expect("same row count");
        rank(&both) - rank(&b)
    }

    /// True when the induced map on cohomology vanishes at every unflagged bidegree of
    /// the source whose position satisfies `pred`.
    pub fn induces_zero_where(&self, pred: impl Fn(i64) -> bool) -> bool {
        let h = cohomology(&self.source);
        h.entries
            .iter()
            .filter(|e| !e.boundary_flag && e.dim > 0 && pred(e.position))
            .all(|e| self.induced_rank(e.position, e.internal_degree) == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;
    use crate::gradedcomplex::{ComplexBuilder, Slice, Window};

    #[test]
    fn identity_induces_identity() {
        let f = Field::Rational;
        let x = Arc::new(BigradedComplex::unit(f, (0, 0)));
        let id = ChainMap::identity(x);
        assert_eq!(id.induced_rank(0, 0), 1);
        assert!(!id.induces_zero_where(|_| true));
    }

    #[test]
    fn non_commuting_blocks_are_rejected() {
        let f = Field::Prime(5);
        let mut b = ComplexBuilder::new(f, Window::closed((0, 1), (0, 0)));
        b.slice(0, 0, Slice::anonymous(1, "a"))
            .slice(1, 0, Slice::anonymous(1, "b"))
            .differential(0, 0, SparseMatrix::identity(f, 1));
        let x = Arc::new(b.build().unwrap());
        let mut blocks = BTreeMap::new();
        blocks.insert((0, 0), SparseMatrix::identity(f, 1));
        assert!(matches!(
            ChainMap::new(x.clone(), x.clone(), blocks.clone()),
            Err(GradedError::NotChainMap { .. })
        ));
        blocks.insert((1, 0), SparseMatrix::identity(f, 1));
        let g = ChainMap::new(x.clone(), x, blocks).unwrap();
        assert_eq!(g.induced_rank(0, 0), 0);
    }
}
