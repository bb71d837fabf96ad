//! Each suite delegates to the core library and turns its results into checks and tables.

use std::time::Instant;

use acyclica::endotransfer::transfer_suite;
use acyclica::exactla::Field;
use acyclica::gradedcomplex::{cohomology, tensor, BigradedComplex, CohomologyTable, ComplexBuilder, Slice, Window};
use acyclica::monomialalg::{augmentation_certificate, verify_exactness};
use acyclica::polykoszul::{
    augmented_koszul_complex, compare_module_with_resolution, dual_koszul_complex, graded_ext_k_r, koszul_complex,
    FPGradedModule, VariableSet,
};
use acyclica::stability::{
    mittag_leffler_check, stable_range_report, transition_vanishing_check, Family, ParameterSweep,
};
use acyclica::symcoalgebra::{
    acyclic_comodule_complex, acyclic_contramodule_complex, cohom_quotient, cotensor_subcomplex, Coproduct,
};
use anyhow::Result;

use crate::config::{SuiteConfig, SuiteId};
use crate::report::{seconds, Report, SuiteReport, Table};
use crate::row;

const F101: Field = Field::Prime(101);
const F2: Field = Field::Prime(2);
const CP: Coproduct = Coproduct::Multiplicity;

fn cohomology_table(name: &str, h: &CohomologyTable) -> Table {
    let mut t = Table::new(name, &["position", "internal_degree", "dim", "flagged"]);
    for e in &h.entries {
        t.push(row![e.position, e.internal_degree, e.dim, e.boundary_flag]);
    }
    t
}

fn describe(h: &CohomologyTable) -> String {
    let nz = h.nonzero();
    if nz.is_empty() {
        return "no classes".into();
    }
    nz.iter()
        .map(|e| format!("dim {} at ({}, {})", e.dim, e.position, e.internal_degree))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A single one-dimensional class at `position`, nothing else outside flagged cells.
fn single_class_at(h: &CohomologyTable, position: i64) -> bool {
    let nz = h.nonzero();
    nz.len() == 1 && nz[0].position == position && nz[0].dim == 1
}

fn koszul(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, m, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.m.unwrap_or(2),
        cfg.max_internal_degree.unwrap_or(8),
    );
    let mut r = SuiteReport::new("koszul");
    r.param("field", field).param("m", m).param("max_internal_degree", deg);
    let vars = VariableSet::standard(m);
    let aug = cohomology(&augmented_koszul_complex(field, &vars, deg)?);
    r.check("augmented resolution exact", aug.is_acyclic(), describe(&aug));
    let h = cohomology(&koszul_complex(field, &vars).realize(deg));
    let nz = h.nonzero();
    let ok = nz.len() == 1 && (nz[0].position, nz[0].internal_degree, nz[0].dim) == (0, 0, 1);
    r.check("H of K is k in degree 0", ok, describe(&h));
    r.tables.push(cohomology_table("cohomology", &h));
    Ok(r)
}

fn ext(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, m, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.m.unwrap_or(2),
        cfg.max_internal_degree.unwrap_or(8),
    );
    let mut r = SuiteReport::new("ext");
    r.param("field", field).param("m", m).param("max_internal_degree", deg);
    let h = graded_ext_k_r(field, &VariableSet::standard(m), deg);
    let mut t = Table::new("ext", &["n", "dim"]);
    for (n, d) in h.position_totals() {
        t.push(row![n, d]);
    }
    r.check(
        "Ext(k, R) is k in degree m",
        single_class_at(&h, m as i64),
        describe(&h),
    );
    r.tables.push(t);
    Ok(r)
}

fn dual_koszul(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, m, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.m.unwrap_or(2),
        cfg.max_internal_degree.unwrap_or(6),
    );
    let mut r = SuiteReport::new("dual-koszul");
    r.param("field", field).param("m", m).param("max_internal_degree", deg);
    let h = cohomology(&dual_koszul_complex(field, &VariableSet::standard(m)).realize(deg));
    r.check(
        "single class at position m",
        single_class_at(&h, m as i64),
        describe(&h),
    );
    r.tables.push(cohomology_table("cohomology", &h));
    Ok(r)
}

fn coresolution(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, a, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.a.unwrap_or(3),
        cfg.max_internal_degree.unwrap_or(4),
    );
    let mut r = SuiteReport::new("coresolution");
    r.param("field", field).param("a", a).param("max_internal_degree", deg);
    let co = cohomology(&acyclic_comodule_complex(field, a, CP).realize((-(a as i64), deg)));
    r.check(
        "comodule complex: single class at -a",
        single_class_at(&co, -(a as i64)),
        describe(&co),
    );
    let contra = cohomology(&acyclic_contramodule_complex(field, a, CP).realize((-deg, a as i64)));
    r.check(
        "contramodule complex: single class at a",
        single_class_at(&contra, a as i64),
        describe(&contra),
    );
    r.tables.push(cohomology_table("comodule", &co));
    r.tables.push(cohomology_table("contramodule", &contra));
    Ok(r)
}

/// `Λ(W/B)*` with zero differential, the Künneth cofactor of the subcomplex.
fn exterior_dual(field: Field, r: usize) -> Result<BigradedComplex> {
    let lo = -(r as i64);
    let mut b = ComplexBuilder::new(field, Window::closed((lo, 0), (lo, 0)));
    let mut binom = 1usize;
    for j in 0..=r {
        b.slice(-(j as i64), -(j as i64), Slice::anonymous(binom, &format!("e{j}_")));
        binom = binom * (r - j) / (j + 1);
    }
    Ok(b.build()?)
}

fn concentration(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let field = cfg.field.unwrap_or(F101);
    let (a, m, deg) = (
        cfg.a.unwrap_or(4),
        cfg.m.unwrap_or(2),
        cfg.max_internal_degree.unwrap_or(4),
    );
    anyhow::ensure!(m <= a, "m = {m} exceeds a = {a}");
    let mut r = SuiteReport::new("concentration");
    r.param("field", field)
        .param("a", a)
        .param("m", m)
        .param("max_internal_degree", deg);
    let (mi, degrees) = (m as i64, (-deg, deg));
    let inc = cotensor_subcomplex(&acyclic_comodule_complex(field, a, CP), m, degrees)?;
    let h = cohomology(inc.source());
    let above: Vec<_> = h.nonzero().into_iter().filter(|e| e.position > -mi).collect();
    r.check("subcomplex vanishes above -m", above.is_empty(), describe(&h));
    let b_part = acyclic_comodule_complex(field, m, CP).realize((-deg, deg + 2));
    let oracle = cohomology(&tensor(&b_part, &exterior_dual(field, a - m)?)?);
    let mismatches: Vec<_> = inc
        .source()
        .support()
        .into_iter()
        .filter(|&(p, t)| !h.is_flagged(p, t) && h.dim(p, t) != oracle.dim(p, t))
        .collect();
    r.check(
        "subcomplex matches Künneth",
        mismatches.is_empty(),
        format!("mismatches at {mismatches:?}"),
    );
    let mut totals = Table::new("subcomplex_totals", &["position", "dim", "kunneth_dim"]);
    for (p, d) in h.position_totals() {
        let o: usize = (degrees.0..=degrees.1).map(|t| oracle.dim(p, t)).sum();
        totals.push(row![p, d, o]);
    }
    let proj = cohom_quotient(&acyclic_contramodule_complex(field, a, CP), m, degrees)?;
    let hq = cohomology(proj.target());
    let below: Vec<_> = hq.nonzero().into_iter().filter(|e| e.position < mi).collect();
    r.check(
        "quotient vanishes below m",
        below.is_empty() && hq.total() > 0,
        describe(&hq),
    );
    let mut qt = Table::new("quotient_totals", &["position", "dim"]);
    for (p, d) in hq.position_totals() {
        qt.push(row![p, d]);
    }
    r.tables.extend([totals, qt]);
    Ok(r)
}

fn stable_range(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let field = cfg.field.unwrap_or(F101);
    let a = cfg.a.unwrap_or(5);
    let positions = (cfg.positions.0.unwrap_or(-2), cfg.positions.1.unwrap_or(2));
    let deg = cfg.max_internal_degree.unwrap_or(a as i64);
    let mut r = SuiteReport::new("stable-range");
    r.param("field", field)
        .param("max_parameter", a)
        .param("min_pos", positions.0)
        .param("max_pos", positions.1)
        .param("max_internal_degree", deg);
    let mut cells = Table::new("cells", &["family", "parameter", "position", "dim", "forced_zero"]);
    for (name, family, degrees) in [
        ("comodule", Family::Comodule, (-deg, 2)),
        ("contramodule", Family::Contramodule, (-2, deg)),
        ("koszul-dual", Family::KoszulDual, (-deg, 2)),
    ] {
        let rep = stable_range_report(&ParameterSweep {
            family,
            field,
            parameters: (1..=a).collect(),
            positions,
            degrees,
        })?;
        r.check(
            &format!("{name}: vanishing where forced"),
            rep.pass,
            format!("violations {:?}", rep.violations),
        );
        for c in &rep.cells {
            cells.push(row![name, c.parameter, c.position, c.dim, c.forced_zero]);
        }
    }
    let mut transitions = Table::new("transitions", &["family", "from", "to", "vanishes"]);
    for (name, family, degrees) in [
        ("subcomplex", Family::Subcomplex { a }, (-deg, 2)),
        ("quotient", Family::Quotient { a }, (-2, deg)),
    ] {
        let mut all = true;
        for small in 1..=a {
            for large in small..=a {
                let ok = transition_vanishing_check(family, field, small, large, degrees)?;
                all &= ok;
                transitions.push(row![name, small, large, ok]);
            }
        }
        r.check(&format!("{name}: transition maps vanish where forced"), all, "");
    }
    r.tables.extend([cells, transitions]);
    Ok(r)
}

fn mittag_leffler(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, a, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.a.unwrap_or(3),
        cfg.max_internal_degree.unwrap_or(8),
    );
    let mut r = SuiteReport::new("mittag-leffler");
    r.param("field", field).param("a", a).param("max_internal_degree", deg);
    let stages: Vec<usize> = (1..=a).collect();
    let mut t = Table::new("restrictions", &["exterior_degree", "maps_checked", "failures"]);
    for n in 0..=a.min(2) {
        let rep = mittag_leffler_check(field, n, a, &stages, (-deg, 2))?;
        r.check(
            &format!("n = {n}: restrictions surjective"),
            rep.pass && rep.maps_checked > 0,
            format!("failures {:?}", rep.failures),
        );
        t.push(row![n, rep.maps_checked, rep.failures.len()]);
    }
    r.tables.push(t);
    Ok(r)
}

fn dress(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, trials) = (cfg.field.unwrap_or(F101), cfg.trials.unwrap_or(100));
    let mut r = SuiteReport::new("dress");
    r.param("field", field)
        .param("trials", trials)
        .param("master_seed", &cfg.seed_text);
    let rep = transfer_suite(field, cfg.seed, trials)?;
    r.check(
        "contractible in add(M) iff over End(M)",
        rep.agreements == trials,
        format!("{}/{trials} agree", rep.agreements),
    );
    let ff = rep.trials.iter().filter(|t| t.fully_faithful).count();
    r.check(
        "fully faithful on sampled pairs",
        ff == trials,
        format!("{ff}/{trials}"),
    );
    let mut t = Table::new(
        "trials",
        &[
            "trial",
            "seed",
            "kind",
            "expected_contractible",
            "covariant",
            "contravariant",
            "fully_faithful",
            "pass",
        ],
    );
    for (i, o) in rep.trials.iter().enumerate() {
        t.push(row![
            i,
            o.seed,
            format!("{:?}", o.kind),
            o.expected_contractible,
            o.covariant.pass,
            o.contravariant.pass,
            o.fully_faithful,
            o.pass
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

fn universal(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, n, len) = (
        cfg.field.unwrap_or(F2),
        cfg.n_gens.unwrap_or(4),
        cfg.max_length.unwrap_or(6),
    );
    let mut r = SuiteReport::new("universal");
    r.param("field", field).param("n_gens", n).param("max_length", len);
    let rep = verify_exactness(n, len, field);
    let injective = rep.cells.iter().filter(|c| c.position == 0).all(|c| c.kernel_dim == 0);
    r.check("right multiplication by x0 injective", injective, "");
    r.check(
        "exact at every complete length",
        rep.cells.iter().all(|c| c.exact),
        format!("flagged lengths {:?}", rep.flagged_lengths),
    );
    r.check("kernel oracle agrees", rep.cells.iter().all(|c| c.oracle_agrees), "");
    let cert = augmentation_certificate(n, field)?;
    r.check(
        "augmentation: zero differential",
        cert.differential_zero && cert.functoriality,
        "",
    );
    r.check(
        "augmentation: nonacyclic at every position",
        cert.nonacyclic_everywhere,
        format!("flagged positions {:?}", cert.flagged_positions),
    );
    let mut t = Table::new(
        "exactness",
        &["position", "length", "kernel_dim", "image_dim", "oracle_dim", "exact"],
    );
    for c in &rep.cells {
        t.push(row![
            c.position,
            c.length,
            c.kernel_dim,
            c.image_dim,
            c.oracle_dim,
            c.exact
        ]);
    }
    let mut a = Table::new("augmentation", &["position", "dim", "flagged"]);
    for (p, d) in &cert.cohomology {
        a.push(row![p, d, cert.flagged_positions.contains(p)]);
    }
    r.tables.extend([t, a]);
    Ok(r)
}

fn quasi_iso(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (field, m, deg) = (
        cfg.field.unwrap_or(F101),
        cfg.m.unwrap_or(2),
        cfg.max_internal_degree.unwrap_or(6),
    );
    let mut r = SuiteReport::new("remark83");
    r.param("field", field).param("m", m).param("max_internal_degree", deg);
    let vars = VariableSet::standard(m);
    let module = FPGradedModule::quotient_by_variables(field, &vars, &[0]);
    let rep = compare_module_with_resolution(
        &module,
        &module.presentation_complex(),
        &dual_koszul_complex(field, &vars),
        -(m as i64),
        deg,
    )?;
    r.check(
        "H(M ⊗ X) = H(G ⊗ X) per bidegree",
        rep.pass && rep.module_side_total > 0,
        format!("{} bidegrees, mismatches {:?}", rep.compared_bidegrees, rep.mismatches),
    );
    let mut t = Table::new("totals", &["side", "total_dim"]);
    t.push(row!["module", rep.module_side_total]);
    t.push(row!["resolution", rep.resolution_side_total]);
    r.tables.push(t);
    Ok(r)
}

fn run_one(id: SuiteId, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match id {
        SuiteId::Koszul => koszul(cfg),
        SuiteId::Ext => ext(cfg),
        SuiteId::Coresolution => coresolution(cfg),
        SuiteId::DualKoszul => dual_koszul(cfg),
        SuiteId::Concentration => concentration(cfg),
        SuiteId::StableRange => stable_range(cfg),
        SuiteId::MittagLeffler => mittag_leffler(cfg),
        SuiteId::Dress => dress(cfg),
        SuiteId::Universal => universal(cfg),
        SuiteId::QuasiIso => quasi_iso(cfg),
        SuiteId::All => unreachable!("expanded by run_suite"),
    }
}

fn config_entries(cfg: &SuiteConfig) -> Vec<(&'static str, Option<String>)> {
    vec![
        ("suite", Some(cfg.suite.to_string())),
        ("field", cfg.field.map(|f| f.to_string())),
        ("m", cfg.m.map(|x| x.to_string())),
        ("a", cfg.a.map(|x| x.to_string())),
        ("min_pos", cfg.positions.0.map(|x| x.to_string())),
        ("max_pos", cfg.positions.1.map(|x| x.to_string())),
        ("max_internal_degree", cfg.max_internal_degree.map(|x| x.to_string())),
        ("n_gens", cfg.n_gens.map(|x| x.to_string())),
        ("max_length", cfg.max_length.map(|x| x.to_string())),
        ("trials", cfg.trials.map(|x| x.to_string())),
    ]
}

/// Runs the configured suite, or every suite in a fixed order for `all`. Suites run
/// sequentially; parallelism lives inside each computation.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let ids: Vec<SuiteId> = match cfg.suite {
        SuiteId::All => SuiteId::EACH.to_vec(),
        id => vec![id],
    };
    let mut report = Report::empty();
    report.body.master_seed = cfg.seed_text.clone();
    report.body.config = config_entries(cfg)
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect();
    let start = Instant::now();
    for id in ids {
        let t = Instant::now();
        let suite = run_one(id, cfg)?;
        report.timing.suites.insert(id.to_string(), seconds(t.elapsed()));
        report.body.pass &= suite.pass;
        report.body.suites.push(suite);
    }
    report.timing.total_seconds = seconds(start.elapsed());
    Ok(report)
}
