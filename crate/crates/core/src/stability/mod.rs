//! Finite sweeps over growing variable sets standing in for the direct and inverse limits:
//! where cohomology vanishes as the parameter grows, whether transition maps kill it, and
//! surjectivity of the restriction maps in the inverse system.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactla::{rank, Field};
use crate::gradedcomplex::{cohomology, BigradedComplex};
use crate::polykoszul::{dual_koszul_complex, VariableSet};
use crate::symcoalgebra::{
    acyclic_comodule_complex, acyclic_contramodule_complex, Coproduct, LabelledComplex, SymError,
};

/// Which complex a sweep parameter builds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum Family {
    /// `Hom_R(K, R)` over `m` variables.
    KoszulDual,
    /// The cofree complex `C ⊗ Λ(W)*` with `dim W = a`.
    Comodule,
    /// The free complex `Hom(C, Λ(W))` with `dim W = a`.
    Contramodule,
    /// The cotensor subcomplex over the first `m` of `a` basis vectors.
    Subcomplex { a: usize },
    /// The `Cohom` quotient over the first `m` of `a` basis vectors.
    Quotient { a: usize },
}

impl Family {
    /// Whether the family's concentration bound forces `H^n = 0` at this parameter.
    pub fn forces_vanishing(self, parameter: usize, n: i64) -> bool {
        let k = parameter as i64;
        match self {
            Family::KoszulDual => k > n,
            Family::Comodule | Family::Contramodule => k > n.abs(),
            Family::Subcomplex { .. } => k > -n,
            Family::Quotient { .. } => k > n,
        }
    }

    fn build(self, field: Field, parameter: usize, degrees: (i64, i64)) -> Result<BigradedComplex, SymError> {
        let cp = Coproduct::Multiplicity;
        Ok(match self {
            Family::KoszulDual => {
                dual_koszul_complex(field, &VariableSet::standard(parameter)).realize_range(degrees.0, degrees.1)
            }
            Family::Comodule => acyclic_comodule_complex(field, parameter, cp).realize(degrees),
            Family::Contramodule => acyclic_contramodule_complex(field, parameter, cp).realize(degrees),
            Family::Subcomplex { a } => acyclic_comodule_complex(field, a, cp).realize_stage(parameter, degrees)?,
            Family::Quotient { a } => acyclic_contramodule_complex(field, a, cp).realize_stage(parameter, degrees)?,
        })
    }
}

/// A family evaluated at increasing parameters over one fixed window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSweep {
    #[serde(flatten)]
    pub family: Family,
    pub field: Field,
    pub parameters: Vec<usize>,
    pub positions: (i64, i64),
    pub degrees: (i64, i64),
}

impl ParameterSweep {
    pub fn validate(&self) -> Result<(), SymError> {
        if self.parameters.is_empty() || self.parameters.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SymError::Invalid(
                "parameters must be nonempty and strictly increasing".into(),
            ));
        }
        if self.positions.0 > self.positions.1 || self.degrees.0 > self.degrees.1 {
            return Err(SymError::Invalid("empty window".into()));
        }
        if let Family::Subcomplex { a } | Family::Quotient { a } = self.family {
            if let Some(&m) = self.parameters.iter().find(|&&m| m > a) {
                return Err(SymError::StageTooLarge { m, a });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    pub parameter: usize,
    pub position: i64,
    /// Total cohomology at this position over the degree window.
    pub dim: usize,
    pub forced_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableRangeReport {
    pub sweep: ParameterSweep,
    pub cells: Vec<SweepCell>,
    /// Positions with a cell that should vanish and does not.
    pub violations: Vec<(usize, i64)>,
    pub pass: bool,
}

impl StableRangeReport {
    pub fn dim(&self, parameter: usize, position: i64) -> Option<usize> {
        self.cells
            .iter()
            .find(|c| c.parameter == parameter && c.position == position)
            .map(|c| c.dim)
    }

    /// Smallest parameter from which `H^n` stays zero to the end of the sweep.
    pub fn vanishing_onset(&self, position: i64) -> Option<usize> {
        let mut onset = None;
        for &k in self.sweep.parameters.iter().rev() {
            match self.dim(k, position) {
                Some(0) => onset = Some(k),
                _ => break,
            }
        }
        onset
    }
}

/// Cohomology per (parameter, position) and the verdict of the family's threshold.
pub fn stable_range_report(sweep: &ParameterSweep) -> Result<StableRangeReport, SymError> {
    sweep.validate()?;
    let per_param: Vec<Result<Vec<SweepCell>, SymError>> = sweep
        .parameters
        .par_iter()
        .map(|&k| {
            let h = cohomology(&sweep.family.build(sweep.field, k, sweep.degrees)?);
            Ok((sweep.positions.0..=sweep.positions.1)
                .map(|n| SweepCell {
                    parameter: k,
                    position: n,
                    dim: h.total_at(n),
                    forced_zero: sweep.family.forces_vanishing(k, n),
                })
                .collect())
        })
        .collect();
    let mut cells = Vec::new();
    for r in per_param {
        cells.extend(r?);
    }
    let violations: Vec<(usize, i64)> = cells
        .iter()
        .filter(|c| c.forced_zero && c.dim > 0)
        .map(|c| (c.parameter, c.position))
        .collect();
    Ok(StableRangeReport {
        sweep: sweep.clone(),
        pass: violations.is_empty(),
        cells,
        violations,
    })
}

fn stage_family(family: Family, field: Field) -> Result<(LabelledComplex, usize), SymError> {
    match family {
        Family::Subcomplex { a } => Ok((acyclic_comodule_complex(field, a, Coproduct::Multiplicity), a)),
        Family::Quotient { a } => Ok((acyclic_contramodule_complex(field, a, Coproduct::Multiplicity), a)),
        _ => Err(SymError::Invalid(
            "transition maps exist for subcomplex and quotient families".into(),
        )),
    }
}

/// Whether the transition map between stages `small ≤ large` is zero on cohomology at
/// every position where the larger stage is forced to vanish.
pub fn transition_vanishing_check(
    family: Family,
    field: Field,
    small: usize,
    large: usize,
    degrees: (i64, i64),
) -> Result<bool, SymError> {
    let (x, a) = stage_family(family, field)?;
    if small > large || large > a {
        return Err(SymError::Invalid(format!("stages {small} ≤ {large} ≤ {a} violated")));
    }
    let map = x.stage_map(small, large, degrees)?;
    Ok(map.induces_zero_where(|n| family.forces_vanishing(large, n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MittagLefflerReport {
    pub a: usize,
    pub exterior_degree: usize,
    pub stages: Vec<usize>,
    pub degrees: (i64, i64),
    pub maps_checked: usize,
    pub failures: Vec<(usize, usize, i64)>,
    pub pass: bool,
}

/// Surjectivity, slice by slice, of every restriction `Hom(C_{m''}, Λ^n(W)) → Hom(C_{m'}, Λ^n(W))`
/// between the given stages.
pub fn mittag_leffler_check(
    field: Field,
    n: usize,
    a: usize,
    stages: &[usize],
    degrees: (i64, i64),
) -> Result<MittagLefflerReport, SymError> {
    if stages.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SymError::Invalid("stages must be strictly increasing".into()));
    }
    if n > a {
        return Err(SymError::Invalid(format!("Λ^{n} vanishes for dim W = {a}")));
    }
    let x = acyclic_contramodule_complex(field, a, Coproduct::Multiplicity);
    let mut maps_checked = 0;
    let mut failures = Vec::new();
    for (i, &s) in stages.iter().enumerate() {
        for &l in &stages[i + 1..] {
            let map = x.stage_map(s, l, degrees)?;
            for t in degrees.0..=degrees.1 {
                let rows = map.target().dim(n as i64, t);
                if rows == 0 {
                    continue;
                }
                maps_checked += 1;
                if rank(&map.block(n as i64, t)) != rows {
                    failures.push((l, s, t));
                }
            }
        }
    }
    Ok(MittagLefflerReport {
        a,
        exterior_degree: n,
        stages: stages.to_vec(),
        degrees,
        maps_checked,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sweep(family: Family, parameters: Vec<usize>, positions: (i64, i64), degrees: (i64, i64)) -> StableRangeReport {
        stable_range_report(&ParameterSweep {
            family,
            field: Q,
            parameters,
            positions,
            degrees,
        })
        .unwrap()
    }

    #[test]
    fn comodule_family_leaves_minus_one() {
        let r = sweep(Family::Comodule, vec![1, 2, 3, 4], (-2, 0), (-5, 3));
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.dim(1, -1), Some(1));
        assert!((2..=4).all(|a| r.dim(a, -1) == Some(0)));
        assert_eq!(r.vanishing_onset(-1), Some(2));
        assert_eq!(r.vanishing_onset(-2), Some(3));
    }

    #[test]
    fn contramodule_and_koszul_dual_families() {
        let r = sweep(Family::Contramodule, vec![1, 2, 3], (0, 2), (-3, 3));
        assert!(r.pass);
        assert_eq!((r.dim(1, 1), r.dim(2, 1)), (Some(1), Some(0)));
        let k = sweep(Family::KoszulDual, vec![1, 2, 3], (0, 2), (-3, 4));
        assert!(k.pass);
        assert_eq!((k.dim(1, 1), k.dim(2, 1), k.dim(3, 1)), (Some(1), Some(0), Some(0)));
    }

    #[test]
    fn invalid_sweeps_are_rejected() {
        let bad = ParameterSweep {
            family: Family::Comodule,
            field: Q,
            parameters: vec![2, 2],
            positions: (0, 0),
            degrees: (0, 0),
        };
        assert!(stable_range_report(&bad).is_err());
    }

    #[test]
    fn transition_maps_die() {
        assert!(transition_vanishing_check(Family::Subcomplex { a: 3 }, Q, 1, 2, (-3, 3)).unwrap());
        assert!(transition_vanishing_check(Family::Subcomplex { a: 4 }, Q, 2, 3, (-4, 2)).unwrap());
        // equal stages: the identity is zero only because the forced range is already zero
        assert!(transition_vanishing_check(Family::Subcomplex { a: 3 }, Q, 2, 2, (-3, 3)).unwrap());
        let id = acyclic_comodule_complex(Q, 3, Coproduct::Multiplicity)
            .stage_map(2, 2, (-3, 3))
            .unwrap();
        assert_eq!(id.induced_rank(-2, -2), 1);
        assert!(transition_vanishing_check(Family::Subcomplex { a: 2 }, Q, 2, 1, (0, 1)).is_err());
    }

    #[test]
    fn restriction_maps_are_surjective() {
        let r = mittag_leffler_check(Q, 1, 3, &[1, 2, 3], (-4, 1)).unwrap();
        assert!(r.pass && r.maps_checked > 0);
        assert!(mittag_leffler_check(Q, 1, 3, &[2], (-4, 1)).unwrap().pass);
    }
}
