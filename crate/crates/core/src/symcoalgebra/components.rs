use serde::{Deserialize, Serialize};

use crate::basis::{binomial, monomial_count, MonomialBasis, SubsetBasis};
use crate::exactla::{Field, FieldScalar, SparseMatrix};

/// Monomial bases of the components `Sym_n(W)`, `dim W = a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymBasis {
    pub a: usize,
}

impl SymBasis {
    pub fn dim(&self, n: i64) -> usize {
        monomial_count(self.a, n)
    }

    pub fn component(&self, n: i64) -> MonomialBasis {
        MonomialBasis::new(self.a, n)
    }
}

/// Bases of the exterior powers `Λ^n(W)`: increasing index tuples, colex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtBasis {
    pub a: usize,
}

impl ExtBasis {
    pub fn dim(&self, n: usize) -> usize {
        binomial(self.a as u64, n as u64) as usize
    }

    pub fn component(&self, n: usize) -> SubsetBasis {
        SubsetBasis::new(self.a, n)
    }
}

/// How the coproduct of `Sym(W)` acts on monomials.
///
/// `Multiplicity` is the coproduct of the symmetric algebra, `x^c ↦ Σ C(c, c'') x^{c−c''} ⊗ x^{c''}`.
/// `OrbitSum` reads monomials as orbit sums of symmetric tensors and splits with
/// coefficient 1; it is the graded dual of polynomial multiplication.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coproduct {
    #[default]
    Multiplicity,
    OrbitSum,
}

impl Coproduct {
    /// Coefficient of `x^{c−c''} ⊗ x^{c''}` in `Δ(x^c)`; assumes `c'' ≤ c`.
    pub fn coefficient(self, field: Field, c: &[u32], part: &[u32]) -> FieldScalar {
        match self {
            Coproduct::OrbitSum => field.one(),
            Coproduct::Multiplicity => {
                let mut acc = field.one();
                for (&n, &k) in c.iter().zip(part) {
                    acc = &acc * &field.from_u64(binomial(n as u64, k as u64));
                }
                acc
            }
        }
    }
}

/// `(−1)^{#{s ∈ t : s < i}}`: the sign of moving `w_i` into the sorted tuple `t`.
pub(crate) fn insertion_sign(i: usize, t: &[usize]) -> i64 {
    if t.iter().filter(|&&s| s < i).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Sym_j(W) → Sym_{j−1}(W) ⊗ W`, target index `u' · a + i`.
pub fn comult_component(field: Field, a: usize, j: i64, coproduct: Coproduct) -> SparseMatrix {
    let src = MonomialBasis::new(a, j);
    let tgt = MonomialBasis::new(a, j - 1);
    let mut trip = Vec::new();
    for (ci, u) in src.list.iter().enumerate() {
        for i in 0..a {
            if u[i] == 0 {
                continue;
            }
            let mut rest = u.clone();
            rest[i] -= 1;
            let mut e = vec![0; a];
            e[i] = 1;
            let r = tgt.index_of(&rest).expect("lower monomial");
            trip.push((r * a + i, ci, coproduct.coefficient(field, u, &e)));
        }
    }
    SparseMatrix::from_triplets(field, tgt.len() * a, src.len(), trip)
}

/// `W ⊗ Λ^n(W) → Λ^{n+1}(W)`, `w_i ⊗ e_T ↦ (−1)^{#{t<i}} e_{T∪i}`; source index `i · C(a,n) + T`.
pub fn wedge_component(field: Field, a: usize, n: usize) -> SparseMatrix {
    let src = SubsetBasis::new(a, n);
    let tgt = SubsetBasis::new(a, n + 1);
    let mut trip = Vec::new();
    for i in 0..a {
        for (ti, t) in src.list.iter().enumerate() {
            if t.contains(&i) {
                continue;
            }
            let mut s = t.clone();
            s.push(i);
            s.sort_unstable();
            let r = tgt.index_of(&s).expect("larger subset");
            trip.push((r, i * src.len() + ti, field.from_i64(insertion_sign(i, t))));
        }
    }
    SparseMatrix::from_triplets(field, tgt.len(), a * src.len(), trip)
}
