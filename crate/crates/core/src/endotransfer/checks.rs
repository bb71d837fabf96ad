use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::{as_matrix, Object};
use super::functor::{AddM, AddMComplex, SplitTerm, Variance};
use super::TransferError;
use crate::exactla::{rank, Field, SparseMatrix};
use crate::gradedcomplex::{cohomology, commutant_basis, null_homotopy, Homotopy};
use crate::symcoalgebra::{comodule_coresolution, contramodule_resolution, Coproduct};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub source: String,
    pub target: String,
    pub hom_dim: usize,
    pub module_hom_dim: usize,
    pub induced_rank: usize,
    pub contained: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullyFaithfulReport {
    pub variance: Variance,
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

/// Compares `Hom(X, Y)` with the `S`-linear maps between the images, over all ordered pairs
/// of samples.
pub fn fully_faithful_check(ctx: &AddM, samples: &[SplitTerm], variance: Variance) -> FullyFaithfulReport {
    let field = ctx.field;
    let images: Vec<_> = samples
        .iter()
        .map(|t| {
            let space = ctx.module_space(&t.object, variance);
            let acts = ctx.module_actions(&t.object, &space, variance);
            let gens: Vec<SparseMatrix> = ctx.end.generators.iter().map(|&g| acts[g].clone()).collect();
            (space, gens)
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        for (j, y) in samples.iter().enumerate() {
            let hom = super::hom_space(&x.object, &y.object, field);
            let ((sx, gx), (sy, gy)) = (&images[i], &images[j]);
            // F(f) runs from F(X) to F(Y), or backwards for the contravariant functor
            let (from, to) = match variance {
                Variance::Covariant => ((sx, gx), (sy, gy)),
                Variance::Contravariant => ((sy, gy), (sx, gx)),
            };
            let module_hom = commutant_basis(field, from.1, to.1, from.0.dim(), to.0.dim());
            let module_space = super::Subspace::new(module_hom);
            let mut contained = true;
            let cols: Vec<SparseMatrix> = (0..hom.dim())
                .map(|k| {
                    let f = as_matrix(field, y.object.dim, x.object.dim, &hom.vector(k));
                    let img = ctx.functor_on_map(&f, (&x.object, sx), (&y.object, sy), variance);
                    let v = super::algebra::as_vector(&img);
                    contained &= module_space.try_coords(&v).is_some();
                    SparseMatrix::column(field, &v)
                })
                .collect();
            let induced_rank = if cols.is_empty() {
                0
            } else {
                rank(&SparseMatrix::hstack(&cols.iter().collect::<Vec<_>>()).expect("equal heights"))
            };
            let (hom_dim, module_hom_dim) = (hom.dim(), module_space.dim());
            pairs.push(PairCheck {
                source: x.object.label.clone(),
                target: y.object.label.clone(),
                hom_dim,
                module_hom_dim,
                induced_rank,
                contained,
                pass: contained && hom_dim == module_hom_dim && induced_rank == hom_dim,
            });
        }
    }
    let pass = pairs.iter().all(|p| p.pass);
    FullyFaithfulReport { variance, pairs, pass }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub variance: Variance,
    pub contractible_in_add_m: bool,
    pub contractible_over_s: bool,
    /// Whether the image of the `add(M)` homotopy is an `S`-linear contraction.
    pub image_homotopy_verified: Option<bool>,
    pub pass: bool,
}

fn image_homotopy(ctx: &AddM, x: &AddMComplex, h: &Homotopy, variance: Variance) -> Homotopy {
    let mut blocks = BTreeMap::new();
    for (&(p, _), m) in &h.blocks {
        let (Some(s), Some(t)) = (x.terms.get(&p), x.terms.get(&(p - 1))) else {
            continue;
        };
        let ss = ctx.module_space(&s.object, variance);
        let st = ctx.module_space(&t.object, variance);
        let img = ctx.functor_on_map(m, (&s.object, &ss), (&t.object, &st), variance);
        let at = match variance {
            Variance::Covariant => p,
            Variance::Contravariant => 1 - p,
        };
        blocks.insert((at, 0), img);
    }
    Homotopy { blocks }
}

/// Looks for a contraction on both sides of the functor and compares the verdicts.
pub fn contractibility_transfer_check(
    ctx: &AddM,
    x: &AddMComplex,
    variance: Variance,
) -> Result<TransferReport, TransferError> {
    let own = x.to_complex();
    let h = null_homotopy(&own, Some(&x.equivariance()))?;
    let image = ctx.hom_functor(x, variance)?;
    let hs = null_homotopy(&image.complex, Some(&image.equivariance()))?;
    let image_homotopy_verified = h.as_ref().map(|h| {
        let fh = image_homotopy(ctx, x, h, variance);
        fh.verify(&image.complex) && fh.is_equivariant(&image.complex, &image.equivariance())
    });
    let pass = h.is_some() == hs.is_some() && image_homotopy_verified != Some(false);
    Ok(TransferReport {
        variance,
        contractible_in_add_m: h.is_some(),
        contractible_over_s: hs.is_some(),
        image_homotopy_verified,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Cohomology of the preimage at this bidegree.
    Cohomology { position: i64, degree: i64, dim: usize },
    /// The preimage is acyclic but admits no contraction inside `add(M)`.
    HomotopyInfeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub variance: Variance,
    pub evidence: Evidence,
    pub fully_faithful: bool,
    /// The image complex of `S`-modules is not contractible.
    pub noncontractible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Certifies that `image` is noncontractible, using its preimage in `add(M)`. Returns
/// `None` when the preimage is contractible.
pub fn noncontractibility_certificate(
    ctx: &AddM,
    image: &super::SModuleComplex,
    preimage: &AddMComplex,
    master_seed: Option<u64>,
) -> Result<Option<Certificate>, TransferError> {
    let recomputed = ctx.hom_functor(preimage, image.variance)?;
    if recomputed.complex != image.complex {
        return Err(TransferError::ImageMismatch);
    }
    let own = preimage.to_complex();
    let table = cohomology(&own);
    let evidence = match table
        .nonzero()
        .into_iter()
        .find(|e| !table.is_flagged(e.position, e.internal_degree))
    {
        Some(e) => Evidence::Cohomology {
            position: e.position,
            degree: e.internal_degree,
            dim: e.dim,
        },
        None => match null_homotopy(&own, Some(&preimage.equivariance()))? {
            Some(_) => return Ok(None),
            None => Evidence::HomotopyInfeasible,
        },
    };
    let samples: Vec<SplitTerm> = preimage.terms.values().cloned().collect();
    let fully_faithful = fully_faithful_check(ctx, &samples, image.variance).pass;
    Ok(Some(Certificate {
        variance: image.variance,
        evidence,
        fully_faithful,
        noncontractible: fully_faithful,
        master_seed,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncatedFamily {
    ComoduleCoresolution,
    ContramoduleResolution,
}

/// A truncated coresolution or resolution, with `M` the sum of its terms.
pub fn truncated_example(
    field: Field,
    family: TruncatedFamily,
    a: usize,
    d: usize,
    coproduct: Coproduct,
) -> Result<(AddM, AddMComplex), TransferError> {
    let lc = match family {
        TruncatedFamily::ComoduleCoresolution => comodule_coresolution(field, a, coproduct),
        TruncatedFamily::ContramoduleResolution => contramodule_resolution(field, a, coproduct),
    };
    let x = AddMComplex::over_sum_of_terms(&lc.truncate(d))?;
    Ok((AddM::new(field, x.m.clone()), x))
}

/// `0 → k → k[ε]/ε² → k → 0` over the dual numbers, with `M = k[ε]/ε² ⊕ k`: exact, yet
/// not contractible.
pub fn dual_numbers_example(field: Field) -> Result<(AddM, AddMComplex), TransferError> {
    let one = field.one();
    let k = Object::new("k", 1, vec![SparseMatrix::zeros(field, 1, 1)])?;
    let eps = SparseMatrix::from_triplets(field, 2, 2, [(1, 0, one.clone())]);
    let s = Object::new("S", 2, vec![eps])?;
    let mut m = Object::direct_sum(&[&s, &k])?;
    m.label = "M".into();
    let embed = |rows: &[usize], n: usize| {
        SparseMatrix::from_triplets(field, 3, n, rows.iter().enumerate().map(|(c, &r)| (r, c, one.clone())))
    };
    let split = |o: Object, rows: &[usize]| {
        let iota = embed(rows, o.dim);
        let pi = iota.transpose();
        SplitTerm::new(&m, o, 1, iota, pi)
    };
    let terms = BTreeMap::from([
        (0, split(k.clone(), &[2])?),
        (1, split(s, &[0, 1])?),
        (2, split(k, &[2])?),
    ]);
    let differentials = BTreeMap::from([
        (0, SparseMatrix::from_triplets(field, 2, 1, [(1, 0, one.clone())])),
        (1, SparseMatrix::from_triplets(field, 1, 2, [(0, 0, one.clone())])),
    ]);
    let x = AddMComplex::new(field, m.clone(), terms, differentials)?;
    Ok((AddM::new(field, m), x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    /// `N^s → N^s` by an automorphism.
    Isomorphism,
    /// `N^s → N^s` by an automorphism composed with a nilpotent action.
    Degenerate,
    /// `N^s → N^t` with `s ≠ t`.
    Mismatched,
    /// `N → N² → N` split exact after a random automorphism of `N²`.
    SplitThreeTerm,
    /// Same, with the first map spoiled by a nilpotent action.
    SpoiledThreeTerm,
}

impl ComplexKind {
    pub const ALL: [ComplexKind; 5] = [
        ComplexKind::Isomorphism,
        ComplexKind::Degenerate,
        ComplexKind::Mismatched,
        ComplexKind::SplitThreeTerm,
        ComplexKind::SpoiledThreeTerm,
    ];

    pub fn expected_contractible(self) -> bool {
        matches!(self, ComplexKind::Isomorphism | ComplexKind::SplitThreeTerm)
    }
}

fn random_morphism(field: Field, x: &Object, y: &Object, rng: &mut ChaCha8Rng) -> SparseMatrix {
    let hom = super::hom_space(x, y, field);
    let p = field.characteristic() as i64;
    let coeffs: Vec<_> = (0..hom.dim())
        .map(|_| field.from_i64(rng.gen_range(0..p.max(7))))
        .collect();
    let v = hom.basis.mul_vec(&coeffs).expect("shapes");
    as_matrix(field, y.dim, x.dim, &v)
}

fn random_automorphism(field: Field, x: &Object, rng: &mut ChaCha8Rng) -> (SparseMatrix, SparseMatrix) {
    loop {
        let f = random_morphism(field, x, x, rng);
        if let Ok(inv) = crate::exactla::inverse(&f) {
            return (f, inv);
        }
    }
}

/// A seeded random bounded complex in `add(M)` for `M = N ⊕ N`, `N` the truncated cofree
/// comodule `C≤2` over two variables; terms are powers of `N` split into powers of `M`.
pub fn random_add_m_complex(field: Field, kind: ComplexKind, seed: u64) -> Result<AddMComplex, TransferError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_obj = Object::truncated_cofree(field, 2, 2, 1, Coproduct::Multiplicity);
    let m = Object::truncated_cofree(field, 2, 2, 2, Coproduct::Multiplicity);
    let term = |s: usize| -> Result<SplitTerm, TransferError> {
        let mut o = n_obj.power(s);
        o.label = format!("N^{s}");
        SplitTerm::leading(&m, o, s.div_ceil(2), field)
    };
    let nilpotent = |o: &Object, rng: &mut ChaCha8Rng| -> SparseMatrix {
        // x_i acting diagonally on every copy commutes with all morphisms between powers of N
        o.actions[rng.gen_range(0..o.actions.len())].clone()
    };
    let (terms, differentials) = match kind {
        ComplexKind::Isomorphism | ComplexKind::Degenerate => {
            let s = rng.gen_range(1..=2);
            let (t0, t1) = (term(s)?, term(s)?);
            let (mut f, _) = random_automorphism(field, &t0.object, &mut rng);
            if kind == ComplexKind::Degenerate {
                f = f.mul(&nilpotent(&t0.object, &mut rng))?;
            }
            (vec![(0, t0), (1, t1)], vec![(0, f)])
        }
        ComplexKind::Mismatched => {
            let s = rng.gen_range(1..=2);
            let t = if rng.gen_bool(0.5) { s + 1 } else { s.max(2) - 1 };
            let t = if t == s { s + 1 } else { t };
            let (t0, t1) = (term(s)?, term(t)?);
            let f = random_morphism(field, &t0.object, &t1.object, &mut rng);
            (vec![(0, t0), (1, t1)], vec![(0, f)])
        }
        ComplexKind::SplitThreeTerm | ComplexKind::SpoiledThreeTerm => {
            let (t0, t1, t2) = (term(1)?, term(2)?, term(1)?);
            let (a, a_inv) = random_automorphism(field, &t1.object, &mut rng);
            let n = t0.object.dim;
            let first = SparseMatrix::from_triplets(field, 2 * n, n, (0..n).map(|i| (i, i, field.one())));
            let second = SparseMatrix::from_triplets(field, n, 2 * n, (0..n).map(|i| (i, n + i, field.one())));
            let mut f = a.mul(&first)?;
            if kind == ComplexKind::SpoiledThreeTerm {
                f = f.mul(&nilpotent(&t0.object, &mut rng))?;
            }
            let g = second.mul(&a_inv)?;
            (vec![(0, t0), (1, t1), (2, t2)], vec![(0, f), (1, g)])
        }
    };
    AddMComplex::new(
        field,
        m,
        terms.into_iter().collect(),
        differentials.into_iter().collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub kind: ComplexKind,
    pub expected_contractible: bool,
    pub covariant: TransferReport,
    pub contravariant: TransferReport,
    /// Fully-faithful checks on all pairs of the trial's terms, both variances.
    pub fully_faithful: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferSuiteReport {
    pub master_seed: u64,
    pub field: crate::exactla::Field,
    pub trials: Vec<TrialOutcome>,
    pub agreements: usize,
    pub pass: bool,
}

/// Seeded random complexes, cycling through the kinds; per-trial seeds come from the master seed.
pub fn transfer_suite(field: Field, master_seed: u64, trials: usize) -> Result<TransferSuiteReport, TransferError> {
    let mut master = ChaCha8Rng::seed_from_u64(master_seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.gen()).collect();
    let m = Object::truncated_cofree(field, 2, 2, 2, Coproduct::Multiplicity);
    let ctx = AddM::new(field, m);
    let outcomes: Vec<TrialOutcome> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let kind = ComplexKind::ALL[i % ComplexKind::ALL.len()];
            let x = random_add_m_complex(field, kind, seed)?;
            let covariant = contractibility_transfer_check(&ctx, &x, Variance::Covariant)?;
            let contravariant = contractibility_transfer_check(&ctx, &x, Variance::Contravariant)?;
            let expected = kind.expected_contractible();
            let samples: Vec<SplitTerm> = x.terms.values().cloned().collect();
            let fully_faithful = [Variance::Covariant, Variance::Contravariant]
                .into_iter()
                .all(|v| fully_faithful_check(&ctx, &samples, v).pass);
            let pass = fully_faithful
                && covariant.pass
                && contravariant.pass
                && covariant.contractible_in_add_m == expected
                && contravariant.contractible_in_add_m == expected;
            Ok(TrialOutcome {
                seed,
                kind,
                expected_contractible: expected,
                covariant,
                contravariant,
                fully_faithful,
                pass,
            })
        })
        .collect::<Result<_, TransferError>>()?;
    let agreements = outcomes.iter().filter(|o| o.pass).count();
    Ok(TransferSuiteReport {
        master_seed,
        field,
        pass: agreements == outcomes.len(),
        trials: outcomes,
        agreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::inverse;

    fn q() -> Field {
        Field::Rational
    }

    fn f101() -> Field {
        Field::prime(101).unwrap()
    }

    fn two_term(m: &Object, d: Option<SparseMatrix>) -> AddMComplex {
        let t = SplitTerm::leading(m, m.clone(), 1, m.field().unwrap_or(q())).unwrap();
        let field = t.iota.field();
        let mut terms = BTreeMap::from([(0, t.clone())]);
        let mut diffs = BTreeMap::new();
        if let Some(d) = d {
            terms.insert(1, t);
            diffs.insert(0, d);
        }
        AddMComplex::new(field, m.clone(), terms, diffs).unwrap()
    }

    /// Commutant dimension for nilpotent Jordan type `λ`: `Σ min(λ_i, λ_j)`.
    fn jordan_commutant_dim(blocks: &[usize]) -> usize {
        blocks.iter().flat_map(|&a| blocks.iter().map(move |&b| a.min(b))).sum()
    }

    #[test]
    fn endomorphism_dims_match_jordan_count() {
        // one variable: C≤d is a single nilpotent Jordan block of size d + 1
        for (d, s) in [(2, 2), (1, 3), (3, 1)] {
            let m = Object::truncated_cofree(q(), 1, d, s, Coproduct::Multiplicity);
            let ctx = AddM::new(q(), m);
            assert_eq!(ctx.end.dim(), jordan_commutant_dim(&vec![d + 1; s]));
            assert!(ctx.end.verify());
        }
    }

    #[test]
    fn identity_contracts_on_both_sides() {
        let m = Object::truncated_cofree(q(), 2, 1, 1, Coproduct::Multiplicity);
        let ctx = AddM::new(q(), m.clone());
        let x = two_term(&m, Some(SparseMatrix::identity(q(), m.dim)));
        for v in [Variance::Covariant, Variance::Contravariant] {
            let r = contractibility_transfer_check(&ctx, &x, v).unwrap();
            assert!(r.contractible_in_add_m && r.contractible_over_s);
            assert_eq!(r.image_homotopy_verified, Some(true));
            assert!(r.pass);
        }
    }

    #[test]
    fn lone_term_contracts_on_neither_side() {
        let m = Object::truncated_cofree(q(), 2, 1, 1, Coproduct::Multiplicity);
        let ctx = AddM::new(q(), m.clone());
        let x = two_term(&m, None);
        let r = contractibility_transfer_check(&ctx, &x, Variance::Covariant).unwrap();
        assert!(!r.contractible_in_add_m && !r.contractible_over_s && r.pass);
    }

    #[test]
    fn fully_faithful_on_m_and_m_squared() {
        let m = Object::truncated_cofree(q(), 1, 2, 1, Coproduct::Multiplicity);
        let ctx = AddM::new(q(), m.clone());
        let samples = [
            SplitTerm::leading(&m, m.clone(), 1, q()).unwrap(),
            SplitTerm::leading(&m, m.power(2), 2, q()).unwrap(),
        ];
        for v in [Variance::Covariant, Variance::Contravariant] {
            let r = fully_faithful_check(&ctx, &samples, v);
            assert!(r.pass);
            let e = ctx.end.dim();
            let dims: Vec<usize> = r.pairs.iter().map(|p| p.hom_dim).collect();
            assert_eq!(dims, vec![e, 2 * e, 2 * e, 4 * e]);
        }
    }

    #[test]
    fn fully_faithful_on_random_summands_of_m_cubed() {
        let f = f101();
        let n = Object::truncated_cofree(f, 1, 2, 1, Coproduct::Multiplicity);
        let m = Object::truncated_cofree(f, 1, 2, 2, Coproduct::Multiplicity);
        let ctx = AddM::new(f, m.clone());
        let big = m.power(3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let samples: Vec<SplitTerm> = (1..=3)
            .map(|k| {
                let (a, a_inv) = random_automorphism(f, &big, &mut rng);
                let dim = k * n.dim;
                let first = SparseMatrix::from_triplets(f, big.dim, dim, (0..dim).map(|i| (i, i, f.one())));
                let iota = a.mul(&first).unwrap();
                let pi = first.transpose().mul(&a_inv).unwrap();
                SplitTerm::new(&m, n.power(k), 3, iota, pi).unwrap()
            })
            .collect();
        assert!(inverse(&samples[0].pi.mul(&samples[0].iota).unwrap()).is_ok());
        for v in [Variance::Covariant, Variance::Contravariant] {
            assert!(fully_faithful_check(&ctx, &samples, v).pass);
        }
    }

    #[test]
    fn random_kinds_have_expected_contractibility() {
        let f = f101();
        let m = Object::truncated_cofree(f, 2, 2, 2, Coproduct::Multiplicity);
        let ctx = AddM::new(f, m);
        assert_eq!(ctx.end.dim(), 24);
        for (i, kind) in ComplexKind::ALL.into_iter().enumerate() {
            let x = random_add_m_complex(f, kind, 100 + i as u64).unwrap();
            let r = contractibility_transfer_check(&ctx, &x, Variance::Covariant).unwrap();
            assert_eq!(r.contractible_in_add_m, kind.expected_contractible(), "{kind:?}");
            assert!(r.pass, "{kind:?}");
        }
    }

    #[test]
    fn suite_is_reproducible() {
        let a = transfer_suite(f101(), 11, 5).unwrap();
        let b = transfer_suite(f101(), 11, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.pass);
        assert_eq!(a.agreements, 5);
    }

    #[test]
    fn certificate_for_truncated_coresolution() {
        let (ctx, x) = truncated_example(
            q(),
            TruncatedFamily::ComoduleCoresolution,
            1,
            2,
            Coproduct::Multiplicity,
        )
        .unwrap();
        let img = ctx.hom_functor(&x, Variance::Covariant).unwrap();
        let cert = noncontractibility_certificate(&ctx, &img, &x, Some(3))
            .unwrap()
            .unwrap();
        assert!(matches!(
            cert.evidence,
            Evidence::Cohomology {
                position: 0,
                dim: 1,
                ..
            }
        ));
        assert!(cert.fully_faithful && cert.noncontractible);
        let back: Certificate = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn certificate_for_truncated_contramodule_resolution() {
        let (ctx, x) = truncated_example(
            q(),
            TruncatedFamily::ContramoduleResolution,
            1,
            2,
            Coproduct::Multiplicity,
        )
        .unwrap();
        let img = ctx.hom_functor(&x, Variance::Contravariant).unwrap();
        let cert = noncontractibility_certificate(&ctx, &img, &x, None).unwrap().unwrap();
        assert!(matches!(cert.evidence, Evidence::Cohomology { dim: 1, .. }));
        assert!(cert.noncontractible);
    }

    #[test]
    fn no_certificate_for_identity() {
        let m = Object::truncated_cofree(q(), 1, 1, 1, Coproduct::Multiplicity);
        let ctx = AddM::new(q(), m.clone());
        let x = two_term(&m, Some(SparseMatrix::identity(q(), m.dim)));
        let img = ctx.hom_functor(&x, Variance::Covariant).unwrap();
        assert_eq!(noncontractibility_certificate(&ctx, &img, &x, None).unwrap(), None);
    }

    #[test]
    fn dual_numbers_certificate_needs_homotopy_infeasibility() {
        let (ctx, x) = dual_numbers_example(q()).unwrap();
        assert!(cohomology(&x.to_complex()).is_acyclic());
        for v in [Variance::Covariant, Variance::Contravariant] {
            let img = ctx.hom_functor(&x, v).unwrap();
            let cert = noncontractibility_certificate(&ctx, &img, &x, None).unwrap().unwrap();
            assert_eq!(cert.evidence, Evidence::HomotopyInfeasible);
            assert!(cert.noncontractible);
            let r = contractibility_transfer_check(&ctx, &x, v).unwrap();
            assert!(!r.contractible_over_s && r.pass);
        }
    }

    #[test]
    fn mismatched_image_is_rejected() {
        let (ctx, x) = dual_numbers_example(q()).unwrap();
        let img = ctx.hom_functor(&x, Variance::Covariant).unwrap();
        let m = ctx.m.clone();
        let y = two_term(&m, Some(SparseMatrix::identity(q(), m.dim)));
        assert!(matches!(
            noncontractibility_certificate(&ctx, &img, &y, None),
            Err(TransferError::ImageMismatch)
        ));
    }
}
