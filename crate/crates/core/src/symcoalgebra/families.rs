use std::collections::BTreeMap;

use super::components::insertion_sign;
use super::{Carrier, Coproduct, Direction, GradedSpace, LabelledComplex, SymError};
use crate::basis::{subset_label, SubsetBasis};
use crate::exactla::{Field, SparseMatrix};
use crate::gradedcomplex::{attach_unit, BigradedComplex, ChainMap};

fn exterior(a: usize, n: usize, dual: bool) -> GradedSpace {
    let b = SubsetBasis::new(a, n);
    GradedSpace {
        labels: b
            .list
            .iter()
            .map(|s| {
                let l = subset_label(s, "e");
                if dual {
                    format!("{l}*")
                } else {
                    l
                }
            })
            .collect(),
        degrees: vec![if dual { -(n as i64) } else { n as i64 }; b.len()],
    }
}

/// `W ⊗ Λ^n → Λ^{n+1}` as a kernel on `Sym_1 ⊗ Λ^n` (column `T · a + i`).
fn wedge_kernel(field: Field, a: usize, n: usize) -> SparseMatrix {
    let src = SubsetBasis::new(a, n);
    let tgt = SubsetBasis::new(a, n + 1);
    let mut trip = Vec::new();
    for (ti, t) in src.list.iter().enumerate() {
        for i in (0..a).filter(|i| !t.contains(i)) {
            let mut s = t.clone();
            s.push(i);
            s.sort_unstable();
            trip.push((
                tgt.index_of(&s).expect("larger subset"),
                ti * a + i,
                field.from_i64(insertion_sign(i, t)),
            ));
        }
    }
    SparseMatrix::from_triplets(field, tgt.len(), src.len() * a, trip)
}

/// Contraction `W ⊗ Λ^n(W)* → Λ^{n−1}(W)*`, the transpose of [`wedge_kernel`].
fn contraction_kernel(field: Field, a: usize, n: usize) -> SparseMatrix {
    let src = SubsetBasis::new(a, n);
    let tgt = SubsetBasis::new(a, n - 1);
    let mut trip = Vec::new();
    for (ti, t) in src.list.iter().enumerate() {
        for (k, &i) in t.iter().enumerate() {
            let mut s = t.clone();
            s.remove(k);
            trip.push((
                tgt.index_of(&s).expect("smaller subset"),
                ti * a + i,
                field.from_i64(insertion_sign(i, &s)),
            ));
        }
    }
    SparseMatrix::from_triplets(field, tgt.len(), src.len() * a, trip)
}

/// Cofree coresolution `C → C ⊗ W → C ⊗ Λ^2(W) → …` of the trivial comodule, without the
/// augmentation; `C ⊗ Λ^n(W)` sits at position `n`.
pub fn comodule_coresolution(field: Field, a: usize, coproduct: Coproduct) -> LabelledComplex {
    let terms = (0..=a).map(|n| (n as i64, exterior(a, n, false))).collect();
    let kernels = (0..a)
        .map(|n| (n as i64, BTreeMap::from([(1, wedge_kernel(field, a, n))])))
        .collect();
    LabelledComplex::new(field, a, coproduct, Carrier::Cofree, terms, kernels).expect("coresolution is valid")
}

/// Free resolution `… → Hom(C, Λ^2(W)*) → Hom(C, W*) → Hom(C, k)` of the trivial
/// contramodule, without the augmentation; `Hom(C, Λ^n(W)*)` sits at position `−n`.
pub fn contramodule_resolution(field: Field, a: usize, coproduct: Coproduct) -> LabelledComplex {
    let terms = (0..=a).map(|n| (-(n as i64), exterior(a, n, true))).collect();
    let kernels = (1..=a)
        .map(|n| (-(n as i64), BTreeMap::from([(1, contraction_kernel(field, a, n))])))
        .collect();
    LabelledComplex::new(field, a, coproduct, Carrier::Free, terms, kernels).expect("resolution is valid")
}

/// `0 ← C ← C ⊗ W* ← C ⊗ Λ^2(W)* ← …`: `Φ` of the contramodule resolution.
pub fn acyclic_comodule_complex(field: Field, a: usize, coproduct: Coproduct) -> LabelledComplex {
    contramodule_resolution(field, a, coproduct)
        .co_contra(Direction::Phi)
        .expect("resolution is free")
}

/// `0 → Hom(C, k) → Hom(C, W) → Hom(C, Λ^2(W)) → …`: `Ψ` of the comodule coresolution.
pub fn acyclic_contramodule_complex(field: Field, a: usize, coproduct: Coproduct) -> LabelledComplex {
    comodule_coresolution(field, a, coproduct)
        .co_contra(Direction::Psi)
        .expect("coresolution is cofree")
}

/// Adds the ground field at `(at, 0)` joined to the degree-0 slice of the adjacent
/// position by the map `1 ↦ 1`. `at` must be one step outside the position range.
/// `0 → k → C → C ⊗ W → …` realized on `degrees` (which must contain 0); `k` sits at
/// position `−1`.
pub fn augmented_coresolution(
    field: Field,
    a: usize,
    coproduct: Coproduct,
    degrees: (i64, i64),
) -> Result<BigradedComplex, SymError> {
    Ok(attach_unit(
        &comodule_coresolution(field, a, coproduct).realize(degrees),
        -1,
    )?)
}

/// `… → Hom(C, W*) → Hom(C, k) → k → 0` realized on `degrees`; `k` sits at position `1`.
pub fn augmented_contramodule_resolution(
    field: Field,
    a: usize,
    coproduct: Coproduct,
    degrees: (i64, i64),
) -> Result<BigradedComplex, SymError> {
    Ok(attach_unit(
        &contramodule_resolution(field, a, coproduct).realize(degrees),
        1,
    )?)
}

/// `C_B □_C X` for a cofree complex `X`, `B` the first `m` basis vectors of `W`, with its
/// inclusion into `X`.
pub fn cotensor_subcomplex(x: &LabelledComplex, m: usize, degrees: (i64, i64)) -> Result<ChainMap, SymError> {
    if x.carrier() != Carrier::Cofree {
        return Err(SymError::WrongCarrier {
            expected: Carrier::Cofree,
            found: x.carrier(),
        });
    }
    x.stage_map(m, x.a(), degrees)
}

/// `Cohom_C(C_B, X)` for a free complex `X`, with the projection from `X`.
pub fn cohom_quotient(x: &LabelledComplex, m: usize, degrees: (i64, i64)) -> Result<ChainMap, SymError> {
    if x.carrier() != Carrier::Free {
        return Err(SymError::WrongCarrier {
            expected: Carrier::Free,
            found: x.carrier(),
        });
    }
    x.stage_map(m, x.a(), degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::MonomialBasis;
    use crate::gradedcomplex::{cohomology, dualize, reflect_internal};
    use crate::polykoszul::{koszul_complex, VariableSet};
    use crate::symcoalgebra::{comult_component, wedge_component};

    const Q: Field = Field::Rational;

    #[test]
    fn coresolution_differential_is_wedge_after_comultiplication() {
        let a = 3;
        let x = comodule_coresolution(Q, a, Coproduct::Multiplicity).realize((0, 4));
        for n in 0..a {
            let (src, tgt) = (SubsetBasis::new(a, n), SubsetBasis::new(a, n + 1));
            for t in (n as i64 + 1)..=4 {
                let j = t - n as i64;
                let (su, tu) = (MonomialBasis::new(a, j), MonomialBasis::new(a, j - 1));
                let comult = comult_component(Q, a, j, Coproduct::Multiplicity);
                let wedge = wedge_component(Q, a, n);
                let mut trip = Vec::new();
                for (ti, _) in src.list.iter().enumerate() {
                    for ui in 0..su.len() {
                        for (r, c) in comult.col_lists()[ui].iter() {
                            let (u2, i) = (r / a, r % a);
                            for (s, w) in &wedge.col_lists()[i * src.len() + ti] {
                                trip.push((s * tu.len() + u2, ti * su.len() + ui, c * w));
                            }
                        }
                    }
                }
                let oracle = SparseMatrix::from_triplets(Q, tgt.len() * tu.len(), src.len() * su.len(), trip);
                assert_eq!(x.d(n as i64, t), oracle, "n = {n}, t = {t}");
            }
        }
    }

    #[test]
    fn augmented_coresolution_is_exact() {
        for a in 1..=3 {
            let x = augmented_coresolution(Q, a, Coproduct::Multiplicity, (0, 5)).unwrap();
            assert!(cohomology(&x).is_acyclic(), "a = {a}");
        }
        let x = augmented_coresolution(Q, 2, Coproduct::Multiplicity, (0, 3)).unwrap();
        let euler: i64 = (-1..=2)
            .map(|p| if p % 2 == 0 { 1 } else { -1 } * x.dim(p, 2) as i64)
            .sum();
        assert_eq!(euler, 0);
    }

    #[test]
    fn contramodule_resolution_is_the_dual() {
        for cp in [Coproduct::Multiplicity, Coproduct::OrbitSum] {
            let co = comodule_coresolution(Q, 3, cp).realize((0, 4));
            let contra = contramodule_resolution(Q, 3, cp).realize((-4, 0));
            let d = dualize(&co);
            assert_eq!(d.support(), contra.support());
            assert_eq!(d.differentials(), contra.differentials());
        }
        let x = augmented_contramodule_resolution(Q, 2, Coproduct::Multiplicity, (-5, 0)).unwrap();
        assert!(cohomology(&x).is_acyclic());
    }

    #[test]
    fn acyclic_comodule_complex_concentrates_at_minus_a() {
        for a in 1..=3 {
            let h = cohomology(&acyclic_comodule_complex(Q, a, Coproduct::Multiplicity).realize((-(a as i64), 5)));
            let nz = h.nonzero();
            assert_eq!(nz.len(), 1, "a = {a}");
            assert_eq!(
                (nz[0].position, nz[0].internal_degree, nz[0].dim),
                (-(a as i64), -(a as i64), 1)
            );
        }
    }

    #[test]
    fn acyclic_contramodule_complex_concentrates_at_a() {
        for a in 1..=3 {
            let h = cohomology(&acyclic_contramodule_complex(Q, a, Coproduct::Multiplicity).realize((-5, a as i64)));
            let nz = h.nonzero();
            assert_eq!(nz.len(), 1, "a = {a}");
            assert_eq!((nz[0].position, nz[0].dim), (a as i64, 1));
        }
    }

    #[test]
    fn cotensor_subcomplex_of_four_variables() {
        let x = acyclic_comodule_complex(Q, 4, Coproduct::Multiplicity);
        let inc = cotensor_subcomplex(&x, 2, (-4, 4)).unwrap();
        let h = cohomology(inc.source());
        let totals = h.position_totals();
        let dims: Vec<usize> = [-2, -3, -4]
            .iter()
            .map(|p| totals.get(p).copied().unwrap_or(0))
            .collect();
        assert_eq!(dims, vec![1, 2, 1]);
        assert!((-1..=0).all(|p| h.total_at(p) == 0));
        let full = cotensor_subcomplex(&x, 4, (-4, 2)).unwrap();
        assert_eq!(full.source().as_ref(), full.target().as_ref());
        assert!(
            cohomology(
                cotensor_subcomplex(&acyclic_comodule_complex(Q, 2, Coproduct::Multiplicity), 1, (-2, 4))
                    .unwrap()
                    .source()
            )
            .total_at(0)
                == 0
        );
    }

    #[test]
    fn cohom_quotient_of_four_variables() {
        let x = acyclic_contramodule_complex(Q, 4, Coproduct::Multiplicity);
        let proj = cohom_quotient(&x, 2, (-4, 4)).unwrap();
        let h = cohomology(proj.target());
        assert!(h.total() > 0);
        assert!(h.nonzero().iter().all(|e| e.position >= 2));
        assert!(cotensor_subcomplex(&x, 2, (0, 1)).is_err());
        assert!(matches!(
            cohom_quotient(&x, 5, (0, 1)),
            Err(SymError::StageTooLarge { .. })
        ));
    }

    #[test]
    fn psi_and_phi_are_inverse_on_labels() {
        let x = comodule_coresolution(Field::Prime(101), 3, Coproduct::OrbitSum);
        let y = x.co_contra(Direction::Psi).unwrap();
        assert_eq!(y.carrier(), Carrier::Free);
        assert_eq!(y.co_contra(Direction::Phi).unwrap(), x);
        assert!(x.co_contra(Direction::Phi).is_err());
        assert_eq!(LabelledComplex::from_json(&y.to_json()).unwrap(), y);
    }

    #[test]
    fn dual_of_koszul_complex_is_the_orbit_sum_coresolution() {
        for m in 1..=3 {
            let k = koszul_complex(Q, &VariableSet::standard(m)).realize_range(0, 5);
            let lhs = reflect_internal(&dualize(&k));
            let rhs = comodule_coresolution(Q, m, Coproduct::OrbitSum).realize((0, 5));
            assert_eq!(lhs.differentials(), rhs.differentials(), "m = {m}");
            let mult = comodule_coresolution(Q, m, Coproduct::Multiplicity).realize((0, 5));
            assert_ne!(lhs.differentials(), mult.differentials());
        }
    }

    #[test]
    fn truncations_are_complexes_of_modules() {
        for cp in [Coproduct::Multiplicity, Coproduct::OrbitSum] {
            for x in [comodule_coresolution(Q, 2, cp), contramodule_resolution(Q, 2, cp)] {
                let t = x.truncate(2);
                for (p, d) in &t.differentials {
                    let (src, tgt) = (&t.terms[p], &t.terms[&(p + 1)]);
                    for (s, g) in src.actions.iter().zip(&tgt.actions) {
                        assert_eq!(d.mul(s).unwrap(), g.mul(d).unwrap());
                    }
                    if let Some(d1) = t.differentials.get(&(p + 1)) {
                        assert!(d1.mul(d).unwrap().is_zero());
                    }
                }
                // actions commute: the dual algebra is commutative
                let a = &t.terms[&0].actions;
                assert_eq!(a[0].mul(&a[1]).unwrap(), a[1].mul(&a[0]).unwrap());
                assert_eq!(t.terms[&0].labels.len(), 6);
            }
        }
    }
}
