use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FreeComplex, GradedFreeModule, Poly, PolyError, PolyMatrix, VariableSet};
use crate::basis::{MonomialBasis, SubsetBasis};
use crate::exactla::{Field, SparseMatrix};
use crate::gradedcomplex::{attach_unit, cohomology, BigradedComplex, ChainMap, CohomologyTable};

/// Koszul complex of the variables `which` (indices into `ring`) over `k[ring]`.
///
/// The term at position `−n` is free on the `n`-subsets of `which` (colex order), each
/// generator in internal degree `n`, and
/// `d(e_{i_1…i_n}) = Σ_k (−1)^{k+1} x_{i_k} e_{…î_k…}`.
pub fn koszul_on(field: Field, ring: &VariableSet, which: &[usize]) -> FreeComplex {
    let m = which.len();
    let nv = ring.len();
    let names: Vec<&str> = which.iter().map(|&i| ring.names()[i].as_str()).collect();
    let label = |s: &[usize]| {
        if s.is_empty() {
            "e∅".to_string()
        } else {
            format!("e{}", s.iter().map(|&i| names[i]).collect::<Vec<_>>().join("∧"))
        }
    };
    let mut terms = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for n in 0..=m {
        let basis = SubsetBasis::new(m, n);
        terms.insert(
            -(n as i64),
            GradedFreeModule {
                generators: basis.list.iter().map(|s| (label(s), n as i64)).collect(),
            },
        );
        if n == 0 {
            continue;
        }
        let lower = SubsetBasis::new(m, n - 1);
        let mut d = PolyMatrix::zeros(lower.len(), basis.len());
        for (c, s) in basis.list.iter().enumerate() {
            for k in 0..n {
                let mut rest = s.clone();
                let i = rest.remove(k);
                let r = lower.index_of(&rest).expect("face is a subset");
                let sign = if k % 2 == 0 { 1 } else { -1 };
                d.set(r, c, Poly::var(field, nv, which[i]).scale(&field.from_i64(sign)));
            }
        }
        differentials.insert(-(n as i64), d);
    }
    FreeComplex::new(field, ring.clone(), terms, differentials).expect("Koszul complex is valid")
}

/// Koszul complex of all variables of `vars`.
pub fn koszul_complex(field: Field, vars: &VariableSet) -> FreeComplex {
    let all: Vec<usize> = (0..vars.len()).collect();
    koszul_on(field, vars, &all)
}

/// `K → k → 0`: the Koszul complex realized on degrees `0..=max_deg` with `k` attached at
/// position 1 by the augmentation.
pub fn augmented_koszul_complex(field: Field, vars: &VariableSet, max_deg: i64) -> Result<BigradedComplex, PolyError> {
    Ok(attach_unit(&koszul_complex(field, vars).realize_range(0, max_deg), 1)?)
}

/// `Hom_R(K, R)`: position `n` is free on the dual basis of `n`-subsets, generators in
/// internal degree `−n`; the differential is the transposed Koszul matrix, same signs.
pub fn dual_koszul_complex(field: Field, vars: &VariableSet) -> FreeComplex {
    let k = koszul_complex(field, vars);
    let terms = k
        .terms
        .iter()
        .map(|(&p, g)| {
            (
                -p,
                GradedFreeModule {
                    generators: g.generators.iter().map(|(l, s)| (format!("{l}*"), -s)).collect(),
                },
            )
        })
        .collect();
    let differentials = k.differentials.iter().map(|(&p, d)| (-p - 1, d.transpose())).collect();
    FreeComplex::new(field, vars.clone(), terms, differentials).expect("dual Koszul complex is valid")
}

/// Cohomology of the realized dual Koszul complex, i.e. graded `Ext_R(k, R)`.
pub fn graded_ext_k_r(field: Field, vars: &VariableSet, max_deg: i64) -> CohomologyTable {
    cohomology(&dual_koszul_complex(field, vars).realize(max_deg))
}

/// Number of generators of `K_n` for each `n = 0..=m`.
pub fn koszul_ranks(m: usize) -> Vec<usize> {
    (0..=m).map(|n| SubsetBasis::new(m, n).len()).collect()
}

/// The map `K^{small}(k[small]) → K^{large}(k[large])` induced by the inclusion of
/// variable sets, realized on internal degrees `0..=max_deg`.
pub fn koszul_inclusion(
    field: Field,
    small: &VariableSet,
    large: &VariableSet,
    max_deg: i64,
) -> Result<ChainMap, PolyError> {
    let emb = small.embedding_into(large)?;
    let ks = koszul_complex(field, small).realize_range(0, max_deg);
    let kl = koszul_complex(field, large).realize_range(0, max_deg);
    let (ms, ml) = (small.len(), large.len());
    let mut blocks = BTreeMap::new();
    for (p, t) in ks.support() {
        let n = (-p) as usize;
        let large_subsets = SubsetBasis::new(ml, n);
        let small_subsets = SubsetBasis::new(ms, n);
        let large_monos = MonomialBasis::new(ml, t - n as i64);
        let small_monos = MonomialBasis::new(ms, t - n as i64);
        let mut triplets = Vec::new();
        for (si, s) in small_subsets.list.iter().enumerate() {
            let mut image: Vec<usize> = s.iter().map(|&i| emb[i]).collect();
            let sorted = {
                let mut v = image.clone();
                v.sort_unstable();
                v
            };
            if sorted != image {
                return Err(PolyError::Invalid(
                    "the smaller variable set must appear in the same order".into(),
                ));
            }
            image = sorted;
            let li = large_subsets.index_of(&image).expect("image is a subset");
            for (ui, u) in small_monos.list.iter().enumerate() {
                let mut w = vec![0; ml];
                for (i, k) in u.iter().enumerate() {
                    w[emb[i]] = *k;
                }
                let wi = large_monos.index_of(&w).expect("embedded monomial");
                triplets.push((li * large_monos.len() + wi, si * small_monos.len() + ui, field.one()));
            }
        }
        blocks.insert(
            (p, t),
            SparseMatrix::from_triplets(field, kl.dim(p, t), ks.dim(p, t), triplets),
        );
    }
    Ok(ChainMap::new(Arc::new(ks), Arc::new(kl), blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_binomial() {
        assert_eq!(koszul_ranks(3), vec![1, 3, 3, 1]);
    }

    #[test]
    fn one_variable_is_multiplication_by_x() {
        let f = Field::Prime(101);
        let k = koszul_complex(f, &VariableSet::standard(1));
        assert_eq!(k.terms.len(), 2);
        let d = &k.differentials[&-1];
        assert_eq!(d.get(0, 0), Some(&Poly::var(f, 1, 0)));
    }

    #[test]
    fn two_variable_resolution_has_single_class() {
        let f = Field::Prime(101);
        let h = cohomology(&koszul_complex(f, &VariableSet::standard(2)).realize(6));
        let nz = h.nonzero();
        assert_eq!(nz.len(), 1);
        assert_eq!((nz[0].position, nz[0].internal_degree, nz[0].dim), (0, 0, 1));
    }

    #[test]
    fn augmented_resolution_is_exact() {
        for m in 1..=3 {
            let x = augmented_koszul_complex(Field::Rational, &VariableSet::standard(m), 5).unwrap();
            assert!(cohomology(&x).is_acyclic(), "m = {m}");
            assert_eq!(x.d(0, 0).shape(), (1, 1));
        }
    }

    #[test]
    fn dual_koszul_concentrates_in_top_position() {
        let f = Field::Rational;
        for m in 1..=3 {
            let h = graded_ext_k_r(f, &VariableSet::standard(m), 6);
            let nz = h.nonzero();
            assert_eq!(nz.len(), 1, "m = {m}");
            assert_eq!(nz[0].position, m as i64);
            assert_eq!(nz[0].internal_degree, -(m as i64));
        }
    }

    #[test]
    fn inclusion_is_a_chain_map() {
        let f = Field::Prime(7);
        let g = koszul_inclusion(f, &VariableSet::standard(1), &VariableSet::standard(3), 4).unwrap();
        assert_eq!(g.induced_rank(0, 0), 1);
    }
}
