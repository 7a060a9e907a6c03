//! Build core objects from scenario payloads and run the kind-appropriate
//! checker suites, collecting one flat report with prefixed check names.

use std::time::Instant;

use polysym_core::avcourant::{extract, graph, AVSection, AVSubbundle};
use polysym_core::cartan::{CoSection, KForm, PolyMap, VectorField};
use polysym_core::exact::{Poly, SamplePlan, Vars};
use polysym_core::foliation::{structure_from_foliation, Distribution, ReconstructionMode};
use polysym_core::groupoid::{
    build_coadjoint_model, build_covelocity_model, build_pair_model, check_compatibility,
    check_im_form, check_multiplicative, check_unit_inv, induced_structure, GroupoidModel,
};
use polysym_core::liealg::StructureConstants;
use polysym_core::polypoisson::{
    equivalent, from_polysymplectic, lie_poisson_direct_sum, product_of_poisson,
    to_algebroid, PoissonFactor, PolyPoissonStruct,
};
use polysym_core::polysymp::PolySympForm;
use polysym_core::reduction::setups::{
    cotangent_translation, covelocity_translation_groupoid, degenerate_level,
    nilpotent_group_reduction, pair_translation_groupoid, product_two_planes,
    trivial_group_groupoid, GroupoidReductionSetup, ReductionSetup,
};
use polysym_core::reduction::{
    check_moment, check_reducible, compare_leaf, level_reduce, moment_is_morphism,
    reduce_groupoid, reduce_structure,
};
use polysym_core::report::{Check, Report, Verdict};

use crate::expr::parse_poly;
use crate::render::ScenarioReport;
use crate::scenario::*;

/// Which check groups to run; a group is the first dot-separated segment
/// of a check name.
#[derive(Debug, Clone)]
pub struct SuiteFilter(Option<Vec<String>>);

impl SuiteFilter {
    pub fn all() -> Self {
        SuiteFilter(None)
    }

    pub fn named(groups: Vec<String>) -> Self {
        if groups.iter().any(|g| g == "all") {
            SuiteFilter(None)
        } else {
            SuiteFilter(Some(groups))
        }
    }

    fn selects(&self, group: &str) -> bool {
        match &self.0 {
            None => true,
            Some(gs) => gs.iter().any(|g| g == group),
        }
    }
}

fn plan_of(sample: &SampleConfig) -> SamplePlan {
    SamplePlan::new(sample.seed, sample.count, sample.box_bound)
}

fn parse_vars(names: &[String]) -> Result<Vars, String> {
    if names.is_empty() {
        return Err("empty coordinate list".to_string());
    }
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(format!("duplicate coordinate name '{n}'"));
        }
    }
    Ok(Vars::named(names))
}

fn parse_vector(vars: &Vars, comps: &[String]) -> Result<VectorField, String> {
    if comps.len() != vars.len() {
        return Err(format!(
            "vector field needs {} components, got {}",
            vars.len(),
            comps.len()
        ));
    }
    let polys: Result<Vec<Poly>, String> =
        comps.iter().map(|s| parse_poly(s, vars)).collect();
    Ok(VectorField::new(vars, polys?))
}

fn parse_grid(vars: &Vars, grid: &[Vec<String>], k: usize) -> Result<CoSection, String> {
    if grid.len() != k {
        return Err(format!("cosection needs {k} slots, got {}", grid.len()));
    }
    let mut rows = Vec::with_capacity(k);
    for row in grid {
        if row.len() != vars.len() {
            return Err(format!(
                "cosection slot needs {} coefficients, got {}",
                vars.len(),
                row.len()
            ));
        }
        let polys: Result<Vec<Poly>, String> =
            row.iter().map(|s| parse_poly(s, vars)).collect();
        rows.push(polys?);
    }
    Ok(CoSection::from_grid(vars, rows))
}

fn parse_two_form(vars: &Vars, slots: &[FormSlot], k: usize) -> Result<KForm, String> {
    if slots.len() != k {
        return Err(format!("form needs {k} slots, got {}", slots.len()));
    }
    let mut terms = Vec::new();
    for (j, slot) in slots.iter().enumerate() {
        for term in slot {
            if term.on.len() != 2 {
                return Err("2-form terms wedge exactly two coordinates".to_string());
            }
            let mut idx = Vec::with_capacity(2);
            for name in &term.on {
                let i = vars
                    .index_of(name)
                    .ok_or_else(|| format!("unknown coordinate '{name}' in a wedge term"))?;
                idx.push(i);
            }
            terms.push((j, idx, parse_poly(&term.coeff, vars)?));
        }
    }
    Ok(KForm::from_terms(vars, 2, k, terms))
}

fn build_algebra(cfg: &AlgebraConfig) -> Result<StructureConstants, String> {
    match cfg {
        AlgebraConfig::Heisenberg => Ok(StructureConstants::heisenberg()),
        AlgebraConfig::So3 => Ok(StructureConstants::so3()),
        AlgebraConfig::Filiform4 => Ok(StructureConstants::filiform4()),
        AlgebraConfig::Abelian { dim } => Ok(StructureConstants::abelian(*dim)),
        AlgebraConfig::Custom { dim, brackets } => {
            let scratch = Vars::named(&["c"]);
            let mut entries = Vec::new();
            for b in brackets {
                if b.i == 0 || b.j == 0 || b.l == 0 {
                    return Err("bracket indices are 1-based".to_string());
                }
                let c = parse_poly(&b.c, &scratch)?;
                if !c.is_constant() {
                    return Err("structure constants must be rational literals".to_string());
                }
                entries.push((b.i - 1, b.j - 1, b.l - 1, c.constant_term()));
            }
            StructureConstants::new(*dim, &entries).map_err(|e| e.to_string())
        }
    }
}

fn build_polysymp(payload: &PolysympPayload, plan: &SamplePlan) -> Result<PolySympForm, String> {
    match payload {
        PolysympPayload::Covelocities { nq, k } => {
            if *nq == 0 || *k == 0 {
                return Err("covelocities needs nq >= 1 and k >= 1".to_string());
            }
            Ok(polysym_core::polysymp::covelocities(*nq, *k))
        }
        PolysympPayload::Explicit { vars, k, omega } => {
            let v = parse_vars(vars)?;
            Ok(PolySympForm::new(parse_two_form(&v, omega, *k)?))
        }
        PolysympPayload::Product { total_vars, factors } => {
            let total = parse_vars(total_vars)?;
            let mut built = Vec::new();
            for f in factors {
                let form = build_polysymp(&f.form, plan)?;
                let comps: Result<Vec<Poly>, String> =
                    f.projection.iter().map(|s| parse_poly(s, &total)).collect();
                let proj = PolyMap::new(&total, form.vars(), comps?);
                built.push((form, proj));
            }
            PolySympForm::product(&total, &built).map_err(|e| e.to_string())
        }
    }
}

fn build_polypoisson(
    payload: &PolypoissonPayload,
    plan: &SamplePlan,
) -> Result<PolyPoissonStruct, String> {
    match payload {
        PolypoissonPayload::FromPolysymplectic { form } => {
            let f = build_polysymp(form, plan)?;
            from_polysymplectic(&f, plan).map_err(|e| e.to_string())
        }
        PolypoissonPayload::DirectSum { algebra, k } => {
            let sc = build_algebra(algebra)?;
            lie_poisson_direct_sum(&sc, *k, plan).map_err(|e| e.to_string())
        }
        PolypoissonPayload::ProductOfPoisson { factors } => {
            let mut built = Vec::new();
            for f in factors {
                let v = parse_vars(&f.vars)?;
                let n = v.len();
                if f.pi.len() != n {
                    return Err(format!("bivector matrix must be {n} x {n}"));
                }
                let mut pi = Vec::with_capacity(n);
                for row in &f.pi {
                    if row.len() != n {
                        return Err(format!("bivector matrix must be {n} x {n}"));
                    }
                    let polys: Result<Vec<Poly>, String> =
                        row.iter().map(|s| parse_poly(s, &v)).collect();
                    pi.push(polys?);
                }
                built.push(PoissonFactor { vars: v, pi });
            }
            product_of_poisson(&built, plan).map_err(|e| e.to_string())
        }
        PolypoissonPayload::Explicit { vars, k, frame, anchors } => {
            let v = parse_vars(vars)?;
            if frame.len() != anchors.len() {
                return Err("frame and anchor lists must have equal length".to_string());
            }
            let mut fr = Vec::new();
            for g in frame {
                fr.push(parse_grid(&v, g, *k)?);
            }
            let mut an = Vec::new();
            for a in anchors {
                an.push(parse_vector(&v, a)?);
            }
            PolyPoissonStruct::new(&v, *k, fr, an, plan.clone()).map_err(|e| e.to_string())
        }
    }
}

/// The full coframe with zero anchors on a chart.
fn trivial_structure(vars: &Vars, k: usize, plan: &SamplePlan) -> PolyPoissonStruct {
    let n = vars.len();
    let mut frame = Vec::new();
    for j in 0..k {
        for i in 0..n {
            let mut grid = vec![vec![Poly::zero(vars); n]; k];
            grid[j][i] = Poly::one(vars);
            frame.push(CoSection::from_grid(vars, grid));
        }
    }
    let anchors = vec![VectorField::zero(vars); k * n];
    PolyPoissonStruct::new(vars, k, frame, anchors, plan.clone())
        .expect("the full coframe is free")
}

struct Collector {
    checks: Vec<Check>,
}

impl Collector {
    fn new() -> Self {
        Collector { checks: Vec::new() }
    }

    fn group(&mut self, filter: &SuiteFilter, name: &str, f: impl FnOnce() -> Report) {
        if !filter.selects(name.split('.').next().unwrap_or(name)) {
            return;
        }
        let start = Instant::now();
        let report = f();
        let elapsed = start.elapsed();
        for mut c in report.checks {
            c.name = format!("{name}.{}", c.name);
            c.elapsed = elapsed;
            self.checks.push(c);
        }
    }

    fn single(&mut self, filter: &SuiteFilter, name: &str, f: impl FnOnce() -> (Verdict, Option<String>)) {
        if !filter.selects(name.split('.').next().unwrap_or(name)) {
            return;
        }
        let start = Instant::now();
        let (verdict, witness) = f();
        self.checks.push(Check {
            name: name.to_string(),
            verdict,
            witness,
            elapsed: start.elapsed(),
        });
    }

    fn passed(&self, prefix: &str) -> bool {
        self.checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .all(|c| !matches!(c.verdict, Verdict::Fail | Verdict::Error))
    }
}

/// Run every selected check of a scenario; payload construction errors
/// surface as `Err` (exit code 2 territory), checker outcomes as verdicts.
pub fn run_scenario(sc: &Scenario, filter: &SuiteFilter) -> Result<ScenarioReport, String> {
    let plan = plan_of(&sc.sample);
    let mut col = Collector::new();
    let kind = match &sc.payload {
        Payload::Polysymplectic(p) => {
            run_polysymplectic(p, &plan, filter, &mut col)?;
            "polysymplectic"
        }
        Payload::Polypoisson(p) => {
            run_polypoisson(p, &plan, filter, &mut col)?;
            "polypoisson"
        }
        Payload::Avcourant(p) => {
            run_avcourant(p, &plan, filter, &mut col)?;
            "avcourant"
        }
        Payload::Foliation(p) => {
            run_foliation(p, &plan, filter, &mut col)?;
            "foliation"
        }
        Payload::Groupoid(p) => {
            run_groupoid(p, &plan, filter, &mut col)?;
            "groupoid"
        }
        Payload::Reduction(p) => {
            run_reduction(p, &plan, filter, &mut col)?;
            "reduction"
        }
    };
    Ok(ScenarioReport::new(
        sc.name.clone(),
        kind.to_string(),
        sc.sample.seed,
        col.checks,
        sc.expect.clone(),
    ))
}

fn run_polysymplectic(
    payload: &PolysympPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    let form = build_polysymp(payload, plan)?;
    col.group(filter, "symp", || form.is_polysymplectic(plan));
    Ok(())
}

fn run_polypoisson(
    payload: &PolypoissonPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    let pp = build_polypoisson(payload, plan)?;
    col.group(filter, "structure", || pp.check_structure());
    col.group(filter, "weak", || pp.check_weak());
    let structure_ok = pp.check_structure().passed();
    if structure_ok {
        col.single(filter, "algebroid.export", || match to_algebroid(&pp) {
            Ok(alg) => {
                let rep = alg.validate();
                if rep.passed() {
                    (Verdict::Pass, None)
                } else {
                    (Verdict::Fail, rep.first_failure().map(|c| c.name.clone()))
                }
            }
            Err(e) => (Verdict::Error, Some(e.to_string())),
        });
        col.group(filter, "graph", || match graph(&pp) {
            Ok(l) => l.classify(),
            Err(e) => {
                let mut r = Report::new();
                r.push("build", Verdict::Error, Some(e.to_string()));
                r
            }
        });
        col.single(filter, "graph.extract-roundtrip", || {
            match graph(&pp).and_then(|l| extract(&l)) {
                Ok(back) => {
                    if back.frame() == pp.frame() && back.anchor() == pp.anchor() {
                        (Verdict::Pass, None)
                    } else {
                        (Verdict::Fail, Some("extract(graph) differs from the input".to_string()))
                    }
                }
                Err(e) => (Verdict::Error, Some(e.to_string())),
            }
        });
        col.group(filter, "foliation", || {
            match polysym_core::foliation::distribution(&pp) {
                Ok((dist, mut rep)) => {
                    // leafwise data at every regular sample point
                    let mut witness = None;
                    if pp.dim() > 0 {
                        if let Ok(points) = plan.sample_points(pp.dim()) {
                            let p_generic = dist.generic_rank();
                            for point in &points {
                                let vals = dist.values_at(point);
                                let rank = polysym_core::exact::RMat::new(vals).rank();
                                if rank != p_generic {
                                    continue;
                                }
                                if let Err(e) =
                                    polysym_core::foliation::leafwise_form_at(&pp, point)
                                {
                                    witness = Some(e.to_string());
                                    break;
                                }
                            }
                        }
                    }
                    rep.assert_check("leafwise", witness.is_none(), || witness.unwrap());
                    rep
                }
                Err(e) => {
                    let mut r = Report::new();
                    r.push("distribution", Verdict::Error, Some(e.to_string()));
                    r
                }
            }
        });
    }
    Ok(())
}

fn run_avcourant(
    payload: &AvcourantPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    let (bundle, from_structure): (AVSubbundle, Option<PolyPoissonStruct>) = match payload {
        AvcourantPayload::GraphOf { structure } => {
            let pp = build_polypoisson(structure, plan)?;
            let l = graph(&pp).map_err(|e| e.to_string())?;
            (l, Some(pp))
        }
        AvcourantPayload::Explicit { vars, k, sections } => {
            let v = parse_vars(vars)?;
            let mut frame = Vec::new();
            for s in sections {
                let x = parse_vector(&v, &s.x)?;
                let eta = parse_grid(&v, &s.eta, *k)?;
                frame.push(AVSection::new(x, eta));
            }
            (
                AVSubbundle::new(&v, *k, frame, plan.clone()).map_err(|e| e.to_string())?,
                None,
            )
        }
    };
    col.group(filter, "classify", || bundle.classify());
    if let Some(pp) = from_structure {
        col.single(filter, "extract.roundtrip", || match extract(&bundle) {
            Ok(back) => {
                if back.frame() == pp.frame() && back.anchor() == pp.anchor() {
                    (Verdict::Pass, None)
                } else {
                    (Verdict::Fail, Some("extraction differs from the source".to_string()))
                }
            }
            Err(e) => (Verdict::Error, Some(e.to_string())),
        });
    }
    Ok(())
}

fn run_foliation(
    payload: &FoliationPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    let v = parse_vars(&payload.vars)?;
    let gens: Result<Vec<VectorField>, String> =
        payload.gens.iter().map(|g| parse_vector(&v, g)).collect();
    let dist = Distribution {
        vars: v.clone(),
        gens: gens?,
        plan: plan.clone(),
    };
    let omega = parse_two_form(&v, &payload.omega, payload.k)?;
    let mode = match &payload.complement {
        None => ReconstructionMode::Pointwise,
        Some(fields) => {
            let parsed: Result<Vec<VectorField>, String> =
                fields.iter().map(|g| parse_vector(&v, g)).collect();
            ReconstructionMode::Framed { complement: parsed? }
        }
    };
    let framed = payload.complement.is_some();
    col.group(filter, "foliation", || {
        match structure_from_foliation(&dist, &omega, mode) {
            Ok(rec) => {
                let mut rep = rec.report;
                if framed {
                    if let Some(pp) = rec.framed {
                        let srep = pp.check_structure();
                        rep.assert_check("framed-passes", srep.passed(), || {
                            srep.first_failure()
                                .map(|c| c.name.clone())
                                .unwrap_or_default()
                        });
                    }
                }
                rep
            }
            Err(e) => {
                let mut r = Report::new();
                r.push("reconstruction", Verdict::Error, Some(e.to_string()));
                r
            }
        }
    });
    Ok(())
}

fn corrupt_model(model: &mut GroupoidModel, how: &str) -> Result<(), String> {
    match how {
        "multiplication-sign" => {
            let comps: Vec<Poly> = model
                .chart
                .comp_m
                .comps()
                .iter()
                .enumerate()
                .map(|(i, c)| if i == 0 { -c } else { c.clone() })
                .collect();
            model.chart.comp_m = PolyMap::new(&model.chart.comp, &model.chart.arrow, comps);
            Ok(())
        }
        "plus-form" => {
            // replace theta by t*omega + s*omega style corruption: negate
            // the pullback along the source in pair-type models is not
            // recoverable generically, so flip the sign of omega on the
            // second half instead: add 2 s*mu-type terms is model specific;
            // here we simply negate omega's first slot, breaking the unit
            // and inversion identities while keeping it closed
            model.omega = {
                let first = model.omega.component(0).neg();
                let mut slots = vec![first];
                for j in 1..model.omega.mult() {
                    slots.push(model.omega.component(j));
                }
                KForm::concat_slots(&slots)
            };
            Ok(())
        }
        other => Err(format!("unknown corruption '{other}'")),
    }
}

fn run_groupoid(
    payload: &GroupoidPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    let (mut model, target, corrupt): (GroupoidModel, PolyPoissonStruct, &Option<String>) =
        match payload {
            GroupoidPayload::Pair { form, corrupt } => {
                let f = build_polysymp(form, plan)?;
                let model = build_pair_model(&f, plan).map_err(|e| e.to_string())?;
                let target = from_polysymplectic(&f, plan).map_err(|e| e.to_string())?;
                (model, target, corrupt)
            }
            GroupoidPayload::Covelocity { nq, k, corrupt } => {
                let model = build_covelocity_model(*nq, *k, plan);
                let target = trivial_structure(&model.chart.base, *k, plan);
                (model, target, corrupt)
            }
            GroupoidPayload::Coadjoint { algebra, k, corrupt } => {
                let sc = build_algebra(algebra)?;
                let model = build_coadjoint_model(&sc, *k, plan).map_err(|e| e.to_string())?;
                let target = lie_poisson_direct_sum(&sc, *k, plan).map_err(|e| e.to_string())?;
                (model, target, corrupt)
            }
        };
    if let Some(how) = corrupt {
        corrupt_model(&mut model, how)?;
    }
    col.group(filter, "axioms", || model.chart.check_axioms());
    col.group(filter, "mult", || check_multiplicative(&model.chart, &model.omega));
    col.group(filter, "unitinv", || check_unit_inv(&model.chart, &model.omega));
    col.group(filter, "im", || {
        check_im_form(&model.algebroid, &model.mu, &model.plan_base)
    });
    col.group(filter, "compat", || check_compatibility(&model));
    col.group(filter, "symp", || {
        PolySympForm::new(model.omega.clone()).is_polysymplectic(&model.plan_arrow)
    });
    let gates_ok = ["axioms", "mult", "im", "compat", "symp"]
        .iter()
        .all(|p| col.passed(p));
    if gates_ok {
        // induced_structure re-verifies every gate, the structure checker on
        // its output, and that the target map is a morphism onto it
        col.single(filter, "induced.matches-target", || {
            match induced_structure(&model) {
                Ok(ind) => {
                    if equivalent(&ind, &target) {
                        (Verdict::Pass, None)
                    } else {
                        (
                            Verdict::Fail,
                            Some("induced structure differs from the expected target".to_string()),
                        )
                    }
                }
                Err(e) => (Verdict::Error, Some(e.to_string())),
            }
        });
    }
    Ok(())
}

fn run_reduction_setup(
    setup: &ReductionSetup,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) {
    col.group(filter, "action", || {
        setup.action.validate(setup.form.vars(), plan)
    });
    col.group(filter, "reducible", || {
        match check_reducible(&setup.pp, &setup.action) {
            Ok(r) => r,
            Err(e) => {
                let mut r = Report::new();
                r.push("run", Verdict::Error, Some(e.to_string()));
                r
            }
        }
    });
    let reducible_ok = col.passed("reducible");
    let mut reduced: Option<PolyPoissonStruct> = None;
    if reducible_ok {
        col.group(filter, "reduction", || {
            match reduce_structure(
                &setup.pp,
                &setup.action,
                &setup.quotient,
                setup.invariant_frame.as_deref(),
            ) {
                Ok((pp, rep)) => {
                    reduced = Some(pp);
                    rep
                }
                Err(e) => {
                    let mut r = Report::new();
                    r.push("run", Verdict::Error, Some(e.to_string()));
                    r
                }
            }
        });
    }
    col.group(filter, "moment", || {
        check_moment(&setup.form, &setup.action, &setup.moment)
    });
    if let Some((sc, k)) = &setup.morphism_target {
        col.group(filter, "dualmorphism", || {
            match moment_is_morphism(&setup.form, &setup.moment, sc, *k, plan) {
                Ok(r) => r,
                Err(e) => {
                    let mut r = Report::new();
                    r.push("run", Verdict::Error, Some(e.to_string()));
                    r
                }
            }
        });
    }
    let mut omega_red: Option<KForm> = None;
    col.group(filter, "level", || {
        match level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level) {
            Ok((om, rep)) => {
                omega_red = Some(om);
                rep
            }
            Err(e) => {
                let mut r = Report::new();
                r.push("run", Verdict::Error, Some(e.to_string()));
                r
            }
        }
    });
    if let (Some(pp_red), Some(om), false) = (&reduced, &omega_red, setup.leaf_points.is_empty()) {
        col.group(filter, "leaf", || {
            compare_leaf(pp_red, &setup.into_quotient, om, &setup.leaf_points)
        });
    }
}

fn run_groupoid_reduction_setup(
    setup: &GroupoidReductionSetup,
    filter: &SuiteFilter,
    col: &mut Collector,
) {
    col.group(filter, "greduction", || {
        match reduce_groupoid(&setup.model, &setup.lifted, &setup.j_groupoid, &setup.data) {
            Ok((_, rep)) => rep,
            Err(e) => {
                let mut r = Report::new();
                r.push("run", Verdict::Error, Some(e.to_string()));
                r
            }
        }
    });
}

fn run_reduction(
    payload: &ReductionPayload,
    plan: &SamplePlan,
    filter: &SuiteFilter,
    col: &mut Collector,
) -> Result<(), String> {
    match payload {
        ReductionPayload::CotangentTranslation { nq, k, axis } => {
            if *axis >= *nq {
                return Err("axis out of range".to_string());
            }
            let setup = cotangent_translation(*nq, *k, *axis, plan);
            run_reduction_setup(&setup, plan, filter, col);
        }
        ReductionPayload::NilpotentGroup { algebra, k, level, residual_axes } => {
            let sc = build_algebra(algebra)?;
            let scratch = Vars::named(&["c"]);
            let mut zeta = Vec::new();
            for s in level {
                let p = parse_poly(s, &scratch)?;
                if !p.is_constant() {
                    return Err("level values must be rational literals".to_string());
                }
                zeta.push(p.constant_term());
            }
            if zeta.len() != sc.dim() * *k {
                return Err(format!(
                    "level needs {} values for this algebra and multiplicity",
                    sc.dim() * *k
                ));
            }
            let setup = nilpotent_group_reduction(&sc, *k, zeta, residual_axes.clone(), plan)
                .map_err(|e| e.to_string())?;
            run_reduction_setup(&setup, plan, filter, col);
        }
        ReductionPayload::ProductPlanes {} => {
            let setup = product_two_planes(plan);
            run_reduction_setup(&setup, plan, filter, col);
        }
        ReductionPayload::DegenerateLevel {} => {
            let setup = degenerate_level(plan);
            run_reduction_setup(&setup, plan, filter, col);
        }
        ReductionPayload::CovelocityGroupoid { nq, k, axis } => {
            if *nq < 2 || *axis >= *nq {
                return Err("covelocity groupoid reduction needs nq >= 2 and a valid axis".to_string());
            }
            let setup = covelocity_translation_groupoid(*nq, *k, *axis, plan);
            run_groupoid_reduction_setup(&setup, filter, col);
        }
        ReductionPayload::PairGroupoid {} => {
            let setup = pair_translation_groupoid(plan).map_err(|e| e.to_string())?;
            run_groupoid_reduction_setup(&setup, filter, col);
        }
        ReductionPayload::TrivialGroupoid { nq, k } => {
            let setup = trivial_group_groupoid(*nq, *k, plan);
            run_groupoid_reduction_setup(&setup, filter, col);
        }
    }
    Ok(())
}
