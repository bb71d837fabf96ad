use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::words::{normal_form, TruncatedAlgebra};
use super::MonomialError;
use crate::endotransfer::FinAlgebraRep;
use crate::exactla::{kernel_basis, rank, Field, FieldScalar, Rref, SparseMatrix};
use crate::gradedcomplex::{cohomology, BigradedComplex, ComplexBuilder, OpenEdges, Slice, Window};

/// `w ↦ w·x_n` from length `len` to length `len + 1`.
pub fn right_mult_operator(
    alg: &TruncatedAlgebra,
    n: u32,
    len: usize,
    field: Field,
) -> Result<SparseMatrix, MonomialError> {
    if n > alg.n_gens {
        return Err(MonomialError::OutOfRange(format!(
            "x{n} is not among x0..x{}",
            alg.n_gens
        )));
    }
    if len + 1 > alg.max_length {
        return Err(MonomialError::OutOfRange(format!(
            "length {} exceeds the truncation {}",
            len + 1,
            alg.max_length
        )));
    }
    let x = normal_form(&[n]).expect("single letter");
    let (src, tgt) = (alg.words(len), alg.words(len + 1));
    let trip: Vec<_> = src
        .iter()
        .enumerate()
        .filter_map(|(j, w)| {
            w.mul(&x)
                .map(|p| (alg.position(&p).expect("basis word"), j, field.one()))
        })
        .collect();
    Ok(SparseMatrix::from_triplets(field, tgt.len(), src.len(), trip))
}

/// Exactness at position `p` and word length `len`: kernel of `·x_p` against image of `·x_{p−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessCell {
    pub position: u32,
    pub length: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    /// Words of this length ending in `x_{p−1}`.
    pub oracle_dim: usize,
    pub exact: bool,
    pub oracle_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub n_gens: u32,
    pub max_length: usize,
    pub field: Field,
    pub cells: Vec<ExactnessCell>,
    /// Lengths where the kernel cannot be computed inside the truncation.
    pub flagged_lengths: Vec<usize>,
    pub pass: bool,
}

fn unit_vector(field: Field, n: usize, i: usize) -> Vec<FieldScalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

fn exactness_cell(alg: &TruncatedAlgebra, field: Field, p: u32, len: usize) -> ExactnessCell {
    let out = right_mult_operator(alg, p, len, field).expect("complete length");
    let kernel = kernel_basis(&out);
    let n = alg.words(len).len();
    let incoming = (p > 0 && len > 0).then(|| right_mult_operator(alg, p - 1, len - 1, field).expect("in range"));
    let image_dim = incoming.as_ref().map_or(0, rank);
    let composes_to_zero = incoming.as_ref().is_none_or(|d| out.mul(d).expect("shapes").is_zero());
    let oracle: Vec<usize> = match p {
        0 => Vec::new(),
        _ => alg
            .words(len)
            .iter()
            .enumerate()
            .filter(|(_, w)| w.last() == Some(p - 1))
            .map(|(i, _)| i)
            .collect(),
    };
    let in_kernel = Rref::of(&kernel.transpose());
    let in_image = incoming.as_ref().map(|d| Rref::of(&d.transpose()));
    let oracle_agrees = oracle.len() == kernel.cols()
        && oracle.iter().all(|&i| {
            let v = unit_vector(field, n, i);
            in_kernel.contains(&v) && in_image.as_ref().is_some_and(|r| r.contains(&v))
        });
    ExactnessCell {
        position: p,
        length: len,
        kernel_dim: kernel.cols(),
        image_dim,
        oracle_dim: oracle.len(),
        exact: composes_to_zero && kernel.cols() == image_dim,
        oracle_agrees,
    }
}

/// Exactness of `0 → S → S → …` (differentials `·x₀, ·x₁, …`) at positions `0..=N` and
/// every complete length `< L`.
pub fn verify_exactness(n_gens: u32, max_length: usize, field: Field) -> ExactnessReport {
    let alg = TruncatedAlgebra::new(n_gens, max_length);
    let tasks: Vec<(u32, usize)> = (0..=n_gens)
        .flat_map(|p| (0..max_length).map(move |l| (p, l)))
        .collect();
    let cells: Vec<ExactnessCell> = tasks
        .par_iter()
        .map(|&(p, l)| exactness_cell(&alg, field, p, l))
        .collect();
    let pass = cells.iter().all(|c| c.exact && c.oracle_agrees);
    ExactnessReport {
        n_gens,
        max_length,
        field,
        cells,
        flagged_lengths: vec![max_length],
        pass,
    }
}

/// `k ⊗ (S → S → …)` with every `x_n` acting by zero on `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationCertificate {
    pub n_gens: u32,
    pub differential_zero: bool,
    /// `ε ∘ (·x_n) = 0` on the truncated algebra for every `n`.
    pub functoriality: bool,
    /// Cohomology dimension per position; the last position is a truncation edge.
    pub cohomology: BTreeMap<i64, usize>,
    pub flagged_positions: Vec<i64>,
    pub nonacyclic_everywhere: bool,
}

pub fn augmentation_certificate(n_gens: u32, field: Field) -> Result<AugmentationCertificate, MonomialError> {
    let alg = TruncatedAlgebra::new(n_gens, 2);
    let s = alg.to_algebra(field);
    // ε: S → k reads off the coefficient of the empty word
    let augmentation = SparseMatrix::from_triplets(field, 1, s.dim(), [(0, 0, field.one())]);
    let generator = |n: u32| {
        let w = normal_form(&[n]).expect("single letter");
        unit_vector(field, s.dim(), alg.basis_index(&w).expect("basis word"))
    };
    let right_mult = |z: &[FieldScalar]| {
        let cols: Vec<SparseMatrix> = (0..s.dim())
            .map(|j| SparseMatrix::column(field, &s.left[j].mul_vec(z).expect("shapes")))
            .collect();
        SparseMatrix::hstack(&cols.iter().collect::<Vec<_>>()).expect("equal heights")
    };
    let functoriality = (0..=n_gens).all(|n| augmentation.mul(&right_mult(&generator(n))).expect("shapes").is_zero());
    // k ⊗ (·x_n) is multiplication by ε(x_n)
    let eps = |n: u32| -> SparseMatrix {
        let v = augmentation.mul_vec(&generator(n)).expect("shapes");
        SparseMatrix::from_triplets(field, 1, 1, [(0, 0, v[0].clone())])
    };
    let top = n_gens as i64 + 1;
    let window = Window::closed((0, top), (0, 0)).with_open(OpenEdges {
        pos_above: true,
        ..OpenEdges::default()
    });
    let mut b = ComplexBuilder::new(field, window);
    for p in 0..=top {
        b.slice(p, 0, Slice::new(vec![format!("k·e{p}")]));
    }
    let diffs: Vec<SparseMatrix> = (0..=n_gens).map(eps).collect();
    let differential_zero = diffs.iter().all(SparseMatrix::is_zero);
    for (p, d) in diffs.into_iter().enumerate() {
        if !d.is_zero() {
            b.differential(p as i64, 0, d);
        }
    }
    let x = b.build()?;
    let table = cohomology(&x);
    let cohomology: BTreeMap<i64, usize> = (0..=top).map(|p| (p, table.dim(p, 0))).collect();
    let flagged_positions: Vec<i64> = (0..=top).filter(|&p| table.is_flagged(p, 0)).collect();
    let nonacyclic_everywhere = cohomology.iter().all(|(p, &d)| flagged_positions.contains(p) || d == 1);
    Ok(AugmentationCertificate {
        n_gens,
        differential_zero,
        functoriality,
        cohomology,
        flagged_positions,
        nonacyclic_everywhere,
    })
}

/// The image of the universal complex under `x_n ↦ z_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Specialization {
    pub images: Vec<Vec<FieldScalar>>,
    /// `S → S → …` with differentials `y ↦ y·z_n`, positions `0..=len(z)`.
    pub complex: BigradedComplex,
}

/// Checks `z_n z_{n+1} = 0` and builds the specialized complex.
pub fn specialize(target: &FinAlgebraRep, z: &[Vec<FieldScalar>]) -> Result<Specialization, MonomialError> {
    let field = target.field;
    if let Some(bad) = z.iter().position(|v| v.len() != target.dim()) {
        return Err(MonomialError::Invalid(format!("z_{bad} has the wrong length")));
    }
    for n in 0..z.len().saturating_sub(1) {
        if target.mul(&z[n], &z[n + 1]).iter().any(|c| !c.is_zero()) {
            return Err(MonomialError::RelationViolated { n });
        }
    }
    let s = target.dim();
    let top = z.len() as i64;
    let window = Window::closed((0, top), (0, 0)).with_open(OpenEdges {
        pos_above: true,
        ..OpenEdges::default()
    });
    let mut b = ComplexBuilder::new(field, window);
    for p in 0..=top {
        if s > 0 {
            b.slice(p, 0, Slice::anonymous(s, &format!("s{p}_")));
        }
    }
    for (n, zn) in z.iter().enumerate() {
        // column j: b_j · z_n
        let trip: Vec<_> = (0..s)
            .flat_map(|j| {
                let col = target.left[j].mul_vec(zn).expect("shapes");
                col.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(i, v)| (i, j, v))
            })
            .collect();
        let d = SparseMatrix::from_triplets(field, s, s, trip);
        if !d.is_zero() {
            b.differential(n as i64, 0, d);
        }
    }
    Ok(Specialization {
        images: z.to_vec(),
        complex: b.build()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedcomplex::cohomology;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn right_multiplication_entries() {
        let alg = TruncatedAlgebra::new(2, 3);
        let d0 = right_mult_operator(&alg, 0, 0, f2()).unwrap();
        assert_eq!(d0.shape(), (3, 1));
        assert_eq!(d0.get(0, 0), f2().one());
        // x0 · x1 vanishes: the column of x0 under ·x1 is empty
        let d1 = right_mult_operator(&alg, 1, 1, f2()).unwrap();
        assert!(d1.column_vec(0).iter().all(FieldScalar::is_zero));
        assert!(right_mult_operator(&alg, 3, 0, f2()).is_err());
        assert!(right_mult_operator(&alg, 0, 3, f2()).is_err());
    }

    #[test]
    fn consecutive_operators_compose_to_zero() {
        let alg = TruncatedAlgebra::new(4, 6);
        for n in 0..4 {
            for l in 0..5 {
                let a = right_mult_operator(&alg, n, l, f2()).unwrap();
                let b = right_mult_operator(&alg, n + 1, l + 1, f2()).unwrap();
                assert!(b.mul(&a).unwrap().is_zero(), "n={n} ℓ={l}");
            }
        }
    }

    #[test]
    fn exactness_small_and_over_q() {
        let r = verify_exactness(3, 5, f2());
        assert!(r.pass);
        assert_eq!(r.cells.len(), 4 * 5);
        assert_eq!(r.flagged_lengths, vec![5]);
        assert!(r.cells.iter().filter(|c| c.position == 0).all(|c| c.kernel_dim == 0));
        assert!(verify_exactness(2, 4, Field::Rational).pass);
    }

    #[test]
    fn kernel_oracle_counts_words_ending_in_previous_letter() {
        let r = verify_exactness(2, 3, f2());
        let alg = TruncatedAlgebra::new(2, 3);
        for c in r.cells.iter().filter(|c| c.position > 0) {
            let direct = alg
                .words(c.length)
                .iter()
                .filter(|w| w.letters().last() == Some(&(c.position - 1)))
                .count();
            assert_eq!(c.oracle_dim, direct);
            assert_eq!(c.kernel_dim, direct);
        }
    }

    #[test]
    fn augmentation_has_zero_differential() {
        let cert = augmentation_certificate(4, f2()).unwrap();
        assert!(cert.differential_zero && cert.functoriality && cert.nonacyclic_everywhere);
        assert_eq!(cert.cohomology.len(), 6);
        assert!(cert.cohomology.values().all(|&d| d == 1));
    }

    #[test]
    fn specialize_to_zero_and_dual_numbers() {
        let q = Field::Rational;
        let eps = FinAlgebraRep::truncated_polynomial(q, 2);
        let zero = vec![q.zero(); 2];
        let sp = specialize(&eps, &[zero.clone(), zero.clone(), zero]).unwrap();
        assert!(sp.complex.differentials().is_empty());

        let e = eps.basis_vector(1);
        let sp = specialize(&eps, &vec![e; 4]).unwrap();
        let want = SparseMatrix::from_triplets(q, 2, 2, [(1, 0, q.one())]);
        assert!((0..4).all(|p| sp.complex.d(p, 0) == want));
        let h = cohomology(&sp.complex);
        // bounded below: only the first position sees ker ε = (ε)
        assert_eq!(h.dim(0, 0), 1);
        assert!((1..4).all(|p| h.dim(p, 0) == 0));
    }

    #[test]
    fn specialize_rejects_violated_relation() {
        let q = Field::Rational;
        let s = FinAlgebraRep::truncated_polynomial(q, 3);
        let e = s.basis_vector(1);
        assert_eq!(
            specialize(&s, &[e.clone(), e]).unwrap_err(),
            MonomialError::RelationViolated { n: 0 }
        );
    }

    #[test]
    fn specializing_to_the_truncated_algebra_recovers_the_operators() {
        let (n_gens, l) = (2, 3);
        let alg = TruncatedAlgebra::new(n_gens, l);
        let s = alg.to_algebra(f2());
        let z: Vec<Vec<FieldScalar>> = (0..=n_gens)
            .map(|n| unit_vector(f2(), s.dim(), alg.basis_index(&normal_form(&[n]).unwrap()).unwrap()))
            .collect();
        let sp = specialize(&s, &z).unwrap();
        for n in 0..=n_gens {
            let d = sp.complex.d(n as i64, 0);
            for len in 0..l {
                let rows: Vec<usize> = alg.words(len + 1).iter().map(|w| alg.basis_index(w).unwrap()).collect();
                let cols: Vec<usize> = alg.words(len).iter().map(|w| alg.basis_index(w).unwrap()).collect();
                let block = d.select_rows(&rows).select_cols(&cols);
                assert_eq!(block, right_mult_operator(&alg, n, len, f2()).unwrap());
            }
        }
    }
}
