//! Shared generators, oracles and property checks for the integration tests.
#![allow(dead_code)]

use acyclica::endotransfer::{random_add_m_complex, AddM, ComplexKind, FinAlgebraRep, Object, Variance};
use acyclica::exactla::{kernel_basis, rank, Field, SparseMatrix};
use acyclica::gradedcomplex::{cohomology, dualize, tensor, BigradedComplex, ComplexBuilder, Slice, Window};
use acyclica::monomialalg::{specialize, TruncatedAlgebra};
use acyclica::polykoszul::{
    augmented_koszul_complex, dual_koszul_complex, koszul_complex, tensor_fp_module, FPGradedModule, VariableSet,
};
use acyclica::symcoalgebra::{
    acyclic_comodule_complex, acyclic_contramodule_complex, augmented_contramodule_resolution, augmented_coresolution,
    cohom_quotient, comodule_coresolution, contramodule_resolution, cotensor_subcomplex, Coproduct, Direction,
    LabelledComplex,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub const FIELDS: [Field; 4] = [Field::Rational, Field::Prime(2), Field::Prime(3), Field::Prime(101)];

pub fn random_grid(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
        .collect()
}

fn from_grid(field: Field, g: &[Vec<i64>], cols: usize) -> SparseMatrix {
    let trip = g
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v)))
        .filter(|&(_, _, v)| v != 0);
    SparseMatrix::from_i64_triplets(field, g.len(), cols, trip)
}

/// Dense Gaussian elimination on an integer grid, over `Q` or `F_p`.
pub fn oracle_rank(field: Field, g: &[Vec<i64>]) -> usize {
    match field {
        Field::Rational => {
            let mut a: Vec<Vec<BigRational>> = g
                .iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
                .collect();
            let cols = a.first().map_or(0, Vec::len);
            let mut r = 0;
            for c in 0..cols {
                let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                    continue;
                };
                a.swap(r, piv);
                let inv = BigRational::one() / a[r][c].clone();
                let pivot = a[r].clone();
                for (i, row) in a.iter_mut().enumerate() {
                    if i != r && !row[c].is_zero() {
                        let f = row[c].clone() * inv.clone();
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x -= y.clone() * f.clone();
                        }
                    }
                }
                r += 1;
            }
            r
        }
        Field::Prime(p) => {
            let p = p as i64;
            let mut a: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|&v| v.rem_euclid(p)).collect()).collect();
            let cols = a.first().map_or(0, Vec::len);
            let pow = |mut b: i64, mut e: i64| {
                let mut acc = 1i64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                acc
            };
            let mut r = 0;
            for c in 0..cols {
                let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
                    continue;
                };
                a.swap(r, piv);
                let inv = pow(a[r][c], p - 2);
                let pivot = a[r].clone();
                for (i, row) in a.iter_mut().enumerate() {
                    if i != r && row[c] != 0 {
                        let f = row[c] * inv % p;
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x = (*x - f * y).rem_euclid(p);
                        }
                    }
                }
                r += 1;
            }
            r
        }
    }
}

/// Library rank and kernel against the dense oracle on a random integer matrix.
pub fn check_rank_oracle(field: Field, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rows, cols) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
    let mut g = random_grid(&mut rng, rows, cols);
    // force some dependence now and then
    if rows > 2 && rng.gen_bool(0.5) {
        let (a, b) = (g[0].clone(), g[1].clone());
        g[rows - 1] = a.iter().zip(&b).map(|(x, y)| x - 2 * y).collect();
    }
    let m = from_grid(field, &g, cols);
    let (lib, oracle) = (rank(&m), oracle_rank(field, &g));
    if lib != oracle {
        return Err(format!("rank {lib} vs oracle {oracle} over {field} for {g:?}"));
    }
    let k = kernel_basis(&m);
    if k.cols() != cols - lib || !m.mul(&k).map_err(|e| e.to_string())?.is_zero() || rank(&k) != k.cols() {
        return Err(format!("kernel basis is wrong over {field} for {g:?}"));
    }
    Ok(())
}

/// A random bounded complex with slices in internal degrees 0 and 1, built so that
/// each differential kills the image of the previous one.
pub fn random_complex(field: Field, seed: u64) -> BigradedComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(1..=4usize);
    let start: i64 = rng.gen_range(-2..=1);
    let mut b = ComplexBuilder::new(field, Window::closed((start, start + len as i64 - 1), (0, 1)));
    for t in 0..=1 {
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=3)).collect();
        for (i, &d) in dims.iter().enumerate() {
            if d > 0 {
                b.slice(start + i as i64, t, Slice::anonymous(d, &format!("v{t}_")));
            }
        }
        let mut prev: Option<SparseMatrix> = None;
        for i in 0..len.saturating_sub(1) {
            let (src, tgt) = (dims[i], dims[i + 1]);
            let rand_mat = |rng: &mut ChaCha8Rng, r: usize, c: usize| from_grid(field, &random_grid(rng, r, c), c);
            let d = match &prev {
                None => rand_mat(&mut rng, tgt, src),
                Some(p) => {
                    // rows of `left` annihilate the image of the previous map
                    let left = kernel_basis(&p.transpose()).transpose();
                    if left.rows() == 0 {
                        SparseMatrix::zeros(field, tgt, src)
                    } else {
                        rand_mat(&mut rng, tgt, left.rows()).mul(&left).expect("shapes")
                    }
                }
            };
            if src > 0 && tgt > 0 && !d.is_zero() {
                b.differential(start + i as i64, t, d.clone());
            }
            prev = Some(d);
        }
    }
    b.build().expect("random complex is valid")
}

pub fn d_squared_zero(x: &BigradedComplex) -> bool {
    x.differentials().iter().all(|(&(p, t), d)| match x.d_ref(p + 1, t) {
        Some(next) => next.mul(d).map(|m| m.is_zero()).unwrap_or(false),
        None => true,
    })
}

/// Every kind of complex the library constructs, at small parameters.
pub fn catalogue(field: Field, a: usize, seed: u64) -> Vec<(String, BigradedComplex)> {
    let vars = VariableSet::standard(a);
    let cp = if seed.is_multiple_of(2) {
        Coproduct::Multiplicity
    } else {
        Coproduct::OrbitSum
    };
    let mut out = vec![
        ("koszul".to_string(), koszul_complex(field, &vars).realize(4)),
        (
            "augmented koszul".into(),
            augmented_koszul_complex(field, &vars, 4).unwrap(),
        ),
        (
            "dual koszul".into(),
            dual_koszul_complex(field, &vars).realize_range(-4, 2),
        ),
        (
            "coresolution".into(),
            comodule_coresolution(field, a, cp).realize((0, 4)),
        ),
        (
            "contramodule resolution".into(),
            contramodule_resolution(field, a, cp).realize((-4, 0)),
        ),
        (
            "acyclic comodule".into(),
            acyclic_comodule_complex(field, a, cp).realize((-4, 3)),
        ),
        (
            "acyclic contramodule".into(),
            acyclic_contramodule_complex(field, a, cp).realize((-3, 4)),
        ),
        (
            "augmented coresolution".into(),
            augmented_coresolution(field, a, cp, (0, 3)).unwrap(),
        ),
        (
            "augmented contramodule".into(),
            augmented_contramodule_resolution(field, a, cp, (-3, 0)).unwrap(),
        ),
        ("random".into(), random_complex(field, seed)),
    ];
    let m = 1 + (seed as usize) % a;
    let sub = cotensor_subcomplex(&acyclic_comodule_complex(field, a, cp), m, (-3, 3)).unwrap();
    out.push(("cotensor subcomplex".into(), sub.source().as_ref().clone()));
    let quo = cohom_quotient(&acyclic_contramodule_complex(field, a, cp), m, (-3, 3)).unwrap();
    out.push(("cohom quotient".into(), quo.target().as_ref().clone()));
    let fp = FPGradedModule::quotient_by_variables(field, &vars, &[0]);
    out.push((
        "module tensor".into(),
        tensor_fp_module(&fp, &dual_koszul_complex(field, &vars), -3, 3).unwrap(),
    ));
    let eps = FinAlgebraRep::truncated_polynomial(field, 2);
    out.push((
        "dual numbers".into(),
        specialize(&eps, &vec![eps.basis_vector(1); 3]).unwrap().complex,
    ));
    let alg = TruncatedAlgebra::new(2, 2).to_algebra(field);
    let z: Vec<_> = (1..=3).map(|i| alg.basis_vector(i)).collect();
    out.push(("universal".into(), specialize(&alg, &z).unwrap().complex));
    out
}

/// Complexes living in add(M) and their images; kept apart because they need a prime field.
pub fn transfer_catalogue(seed: u64) -> Vec<(String, BigradedComplex)> {
    let f = Field::Prime(101);
    let kind = ComplexKind::ALL[(seed % 5) as usize];
    let x = random_add_m_complex(f, kind, seed).unwrap();
    let ctx = AddM::new(f, Object::truncated_cofree(f, 2, 2, 2, Coproduct::Multiplicity));
    let v = if seed.is_multiple_of(2) {
        Variance::Covariant
    } else {
        Variance::Contravariant
    };
    let img = ctx.hom_functor(&x, v).unwrap();
    vec![
        ("add(M) complex".into(), x.to_complex()),
        ("functor image".into(), img.complex),
    ]
}

pub fn check_d_squared(field: Field, a: usize, seed: u64) -> Check {
    for (name, x) in catalogue(field, a, seed) {
        if !d_squared_zero(&x) {
            return Err(format!("d² ≠ 0 on {name} (a = {a}, {field})"));
        }
    }
    Ok(())
}

/// `H(X ⊗ Y)` against the convolution of `H(X)` and `H(Y)`.
pub fn check_kunneth(field: Field, seed: u64) -> Check {
    let x = random_complex(field, seed);
    let y = random_complex(field, seed.wrapping_mul(0x9e37_79b9).wrapping_add(1));
    let xy = tensor(&x, &y).map_err(|e| e.to_string())?;
    let (hx, hy, hxy) = (cohomology(&x), cohomology(&y), cohomology(&xy));
    let w = xy.window();
    for n in w.min_pos..=w.max_pos {
        for t in w.min_deg..=w.max_deg {
            let mut want = 0;
            for (p, s) in x.support() {
                want += hx.dim(p, s) * hy.dim(n - p, t - s);
            }
            if hxy.dim(n, t) != want {
                return Err(format!("Künneth fails at ({n}, {t}): {} vs {want}", hxy.dim(n, t)));
            }
        }
    }
    Ok(())
}

/// `X** = X`, and `H(X*)` mirrors `H(X)`.
pub fn check_dual_involution(field: Field, seed: u64) -> Check {
    let mut xs = vec![random_complex(field, seed)];
    xs.push(comodule_coresolution(field, 1 + (seed % 3) as usize, Coproduct::Multiplicity).realize((0, 3)));
    for x in xs {
        let d = dualize(&x);
        if dualize(&d) != x {
            return Err("dualize is not an involution".into());
        }
        let (h, hd) = (cohomology(&x), cohomology(&d));
        if let Some((p, t)) = x.support().into_iter().find(|&(p, t)| h.dim(p, t) != hd.dim(-p, -t)) {
            return Err(format!("cohomology of the dual differs at ({p}, {t})"));
        }
    }
    Ok(())
}

/// `Φ ∘ Ψ` and `Ψ ∘ Φ` are identities, and JSON round trips.
pub fn check_psi_phi(field: Field, a: usize, seed: u64) -> Check {
    let cp = if seed.is_multiple_of(2) {
        Coproduct::Multiplicity
    } else {
        Coproduct::OrbitSum
    };
    let cofree = [
        comodule_coresolution(field, a, cp),
        acyclic_comodule_complex(field, a, cp),
    ];
    let free = [
        contramodule_resolution(field, a, cp),
        acyclic_contramodule_complex(field, a, cp),
    ];
    let round = |x: &LabelledComplex, first: Direction, second: Direction| -> Check {
        let back = x
            .co_contra(first)
            .and_then(|y| y.co_contra(second))
            .map_err(|e| e.to_string())?;
        if &back != x {
            return Err(format!(
                "round trip {first:?} then {second:?} changed the complex (a = {a})"
            ));
        }
        if &LabelledComplex::from_json(&x.to_json()).map_err(|e| e.to_string())? != x {
            return Err("JSON round trip failed".into());
        }
        Ok(())
    };
    for x in &cofree {
        round(x, Direction::Psi, Direction::Phi)?;
        if x.co_contra(Direction::Phi).is_ok() {
            return Err("Φ accepted a cofree complex".into());
        }
    }
    for x in &free {
        round(x, Direction::Phi, Direction::Psi)?;
    }
    Ok(())
}
