//! Polynomially charted Lie groupoids: the composable set is presented by
//! an explicit polynomial parametrization, so multiplicativity and every
//! structure identity are decided as exact identities on an affine
//! parameter chart.
//!
//! The three built-in models are the pair groupoid of a poly-symplectic
//! chart, the covelocity bundle under fibrewise addition, and the
//! coadjoint action groupoid of a nilpotent group in exponential
//! coordinates.

use num_traits::Zero;

use crate::cartan::{ext_d, interior, lie_derivative, pullback, CoSection, KForm, PolyMap, VectorField};
use crate::error::{Error, Result};
use crate::exact::{generic_rank, numeric_rank, Mat, Poly, RatFun, SamplePlan, Vars};
use crate::liealg::{NilpotentGroup, StructureConstants};
use crate::polypoisson::{from_polysymplectic, is_morphism, LieAlgebroidData, PolyPoissonStruct};
use crate::polysymp::{covelocities, covelocity_vars, PolySympForm};
use crate::report::Report;

/// Polynomial structure maps of a Lie groupoid, with a parametrized
/// composable set. The optional unit insertions send an arrow g to the
/// composable pairs (eps(t(g)), g) and (g, eps(s(g))).
#[derive(Clone, Debug)]
pub struct GroupoidChart {
    pub arrow: Vars,
    pub base: Vars,
    pub source: PolyMap,
    pub target: PolyMap,
    pub unit: PolyMap,
    pub inverse: PolyMap,
    pub comp: Vars,
    pub comp_pr1: PolyMap,
    pub comp_pr2: PolyMap,
    pub comp_m: PolyMap,
    pub unit_left: Option<PolyMap>,
    pub unit_right: Option<PolyMap>,
}

impl GroupoidChart {
    fn maps_eq(a: &PolyMap, b: &PolyMap) -> bool {
        a.comps() == b.comps()
    }

    /// All chart identities as exact polynomial identities, plus the unit
    /// laws through the provided insertions.
    pub fn check_axioms(&self) -> Report {
        let mut report = Report::new();
        report.assert_check(
            "axioms.composable",
            Self::maps_eq(&self.source.after(&self.comp_pr1), &self.target.after(&self.comp_pr2)),
            || "s(pr1) != t(pr2) on the parameter chart".to_string(),
        );
        let id_base = PolyMap::identity(&self.base);
        report.assert_check(
            "axioms.units-section",
            Self::maps_eq(&self.source.after(&self.unit), &id_base)
                && Self::maps_eq(&self.target.after(&self.unit), &id_base),
            || "s(eps) or t(eps) differs from the identity".to_string(),
        );
        report.assert_check(
            "axioms.multiplication",
            Self::maps_eq(&self.source.after(&self.comp_m), &self.source.after(&self.comp_pr2))
                && Self::maps_eq(&self.target.after(&self.comp_m), &self.target.after(&self.comp_pr1)),
            || "s(m) != s(pr2) or t(m) != t(pr1)".to_string(),
        );
        report.assert_check(
            "axioms.inversion",
            Self::maps_eq(&self.source.after(&self.inverse), &self.target)
                && Self::maps_eq(&self.target.after(&self.inverse), &self.source),
            || "s(inv) != t or t(inv) != s".to_string(),
        );
        let id_arrow = PolyMap::identity(&self.arrow);
        let mut unit_law = true;
        let mut witness = String::new();
        if let Some(ul) = &self.unit_left {
            let pr1 = self.comp_pr1.after(ul);
            let pr2 = self.comp_pr2.after(ul);
            let m = self.comp_m.after(ul);
            let want1 = self.unit.after(&self.target);
            if !Self::maps_eq(&pr1, &want1) || !Self::maps_eq(&pr2, &id_arrow) || !Self::maps_eq(&m, &id_arrow) {
                unit_law = false;
                witness = "left unit law fails".to_string();
            }
        }
        if let Some(ur) = &self.unit_right {
            let pr1 = self.comp_pr1.after(ur);
            let pr2 = self.comp_pr2.after(ur);
            let m = self.comp_m.after(ur);
            let want2 = self.unit.after(&self.source);
            if !Self::maps_eq(&pr1, &id_arrow) || !Self::maps_eq(&pr2, &want2) || !Self::maps_eq(&m, &id_arrow) {
                unit_law = false;
                witness = "right unit law fails".to_string();
            }
        }
        report.assert_check("axioms.unit-laws", unit_law, || witness);
        report
    }
}

/// Multiplicativity of a form on the arrow chart:
/// `m* theta = pr1* theta + pr2* theta` exactly on the parameter chart.
pub fn check_multiplicative(chart: &GroupoidChart, theta: &KForm) -> Report {
    let mut report = Report::new();
    let lhs = pullback(&chart.comp_m, theta);
    let rhs = pullback(&chart.comp_pr1, theta).add(&pullback(&chart.comp_pr2, theta));
    let diff = lhs.sub(&rhs);
    report.assert_check("multiplicative", diff.is_zero(), || {
        format!("m*theta - pr1*theta - pr2*theta = {}", diff.render())
    });
    report
}

/// The unit and inversion identities of a multiplicative form:
/// `eps* theta = 0` and `inv* theta = -theta`, both exact.
pub fn check_unit_inv(chart: &GroupoidChart, theta: &KForm) -> Report {
    let mut report = Report::new();
    let eps_pull = pullback(&chart.unit, theta);
    report.assert_check("unit.pullback", eps_pull.is_zero(), || {
        format!("eps*theta = {}", eps_pull.render())
    });
    let inv_sum = pullback(&chart.inverse, theta).add(theta);
    report.assert_check("inversion.pullback", inv_sum.is_zero(), || {
        format!("inv*theta + theta = {}", inv_sum.render())
    });
    report
}

/// A bundle map from an algebroid frame into cosections of the base.
#[derive(Clone, Debug)]
pub struct IMForm {
    pub mu: Vec<CoSection>,
}

/// The infinitesimal equations of a multiplicative nondegenerate form:
/// skewness of the contraction, the derivation identity along the bracket,
/// injectivity, and the trivial annihilator of the image.
pub fn check_im_form(alg: &LieAlgebroidData, mu: &IMForm, plan: &SamplePlan) -> Report {
    let mut report = Report::new();
    let r = alg.rank;
    assert_eq!(mu.mu.len(), r, "one cosection per algebroid frame element");
    let vars = &alg.vars;
    let n = vars.len();
    let k = if r > 0 { mu.mu[0].mult() } else { 0 };

    // skewness: i_{rho(u)} mu(v) + i_{rho(v)} mu(u) = 0
    let mut skew = None;
    'sk: for u in 0..r {
        for v in u..r {
            let a = mu.mu[v].pair(&alg.anchor[u]);
            let b = mu.mu[u].pair(&alg.anchor[v]);
            for j in 0..k {
                let s = &a[j] + &b[j];
                if !s.is_zero() {
                    skew = Some(format!("pairs ({u},{v}) slot {j}: residual {}", s.render()));
                    break 'sk;
                }
            }
        }
    }
    report.assert_check("im.skew", skew.is_none(), || skew.unwrap());

    // derivation identity: mu([u,v]) = L_{rho(u)} mu(v) - i_{rho(v)} d mu(u)
    let mut deriv = None;
    'dv: for u in 0..r {
        for v in u + 1..r {
            // left side through the structure table
            let mut lhs = vec![vec![RatFun::zero(vars); n]; k];
            for e in 0..r {
                let c = &alg.structure[u][v][e];
                if c.is_zero() {
                    continue;
                }
                for (j, row) in mu.mu[e].grid().into_iter().enumerate() {
                    for (i, p) in row.into_iter().enumerate() {
                        if !p.is_zero() {
                            lhs[j][i] = &lhs[j][i] + &(c * &p);
                        }
                    }
                }
            }
            let rhs_form = lie_derivative(&alg.anchor[u], mu.mu[v].form())
                .sub(&interior(&alg.anchor[v], &ext_d(mu.mu[u].form())));
            let rhs = CoSection::new(rhs_form).grid();
            for j in 0..k {
                for i in 0..n {
                    if lhs[j][i] != RatFun::from_poly(rhs[j][i].clone()) {
                        deriv = Some(format!(
                            "pairs ({u},{v}) slot {j} coefficient {i}: residual {}",
                            (&lhs[j][i] - &RatFun::from_poly(rhs[j][i].clone())).render()
                        ));
                        break 'dv;
                    }
                }
            }
        }
    }
    report.assert_check("im.derivation", deriv.is_none(), || deriv.unwrap());

    // injectivity: the r x (k n) coefficient matrix has rank r
    let rows: Vec<Vec<Poly>> = mu.mu.iter().map(|s| s.flatten()).collect();
    let mu_mat = Mat::from_poly_rows(rows);
    let g = generic_rank(&mu_mat);
    let mut kernel_ok = g == r;
    let mut kernel_witness = format!("generic rank {g} < {r}");
    if kernel_ok && n > 0 {
        if let Ok(points) = plan.sample_points(n) {
            for p in &points {
                let pr = numeric_rank(&mu_mat, p).expect("polynomial entries");
                if pr != r {
                    kernel_ok = false;
                    kernel_witness = format!("rank {pr} < {r} at a sample point");
                    break;
                }
            }
        }
    }
    report.assert_check("im.kernel", kernel_ok, || kernel_witness);

    // trivial annihilator of the image: stacked (r k) x n matrix has rank n
    let mut stacked = Vec::new();
    for s in &mu.mu {
        for row in s.grid() {
            stacked.push(row);
        }
    }
    let span_mat = Mat::from_poly_rows(stacked);
    let gs = if r > 0 { generic_rank(&span_mat) } else { 0 };
    let mut span_ok = gs == n;
    let mut span_witness = format!("stacked matrix has generic rank {gs} < {n}");
    if span_ok && n > 0 {
        if let Ok(points) = plan.sample_points(n) {
            for p in &points {
                let pr = numeric_rank(&span_mat, p).expect("polynomial entries");
                if pr != n {
                    span_ok = false;
                    span_witness = format!("stacked rank {pr} < {n} at a sample point");
                    break;
                }
            }
        }
    }
    report.assert_check("im.span", span_ok, || span_witness);
    report
}

/// A charted groupoid with its candidate multiplicative form and the
/// infinitesimal data: algebroid, bundle map, and the right-invariant
/// extensions of the algebroid frame.
#[derive(Clone, Debug)]
pub struct GroupoidModel {
    pub chart: GroupoidChart,
    pub omega: KForm,
    pub algebroid: LieAlgebroidData,
    pub mu: IMForm,
    pub u_r: Vec<VectorField>,
    pub plan_base: SamplePlan,
    pub plan_arrow: SamplePlan,
}

impl GroupoidModel {
    pub fn mult(&self) -> usize {
        self.omega.mult()
    }
}

/// The compatibility between the form and the infinitesimal data:
/// `i_{u^R} omega = t*(mu(u))` exactly, and along units the target
/// differential carries `u^R` to the algebroid anchor.
pub fn check_compatibility(model: &GroupoidModel) -> Report {
    let mut report = Report::new();
    let r = model.algebroid.rank;
    let mut contraction = None;
    for a in 0..r {
        let lhs = interior(&model.u_r[a], &model.omega);
        let rhs = pullback(&model.chart.target, model.mu.mu[a].form());
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            contraction = Some(format!(
                "frame element {a}: i_uR omega - t*mu = {}",
                diff.render()
            ));
            break;
        }
    }
    report.assert_check("compatibility.contraction", contraction.is_none(), || {
        contraction.unwrap()
    });

    let mut anchor = None;
    let jac_t = model.chart.target.jacobian();
    let base = &model.chart.base;
    'anch: for a in 0..r {
        // dt(u^R) composed with the unit section, against the anchor
        for i in 0..base.len() {
            let mut pushed = Poly::zero(&model.chart.arrow);
            for (jj, comp) in model.u_r[a].comps().iter().enumerate() {
                if !comp.is_zero() && !jac_t[i][jj].is_zero() {
                    pushed = &pushed + &(&jac_t[i][jj] * comp);
                }
            }
            let along_units = pushed.compose(model.chart.unit.comps(), base);
            if along_units != model.algebroid.anchor[a].comps()[i] {
                anchor = Some(format!(
                    "frame element {a}: dt(u^R) along units differs from the anchor in component {i}"
                ));
                break 'anch;
            }
        }
    }
    report.assert_check("compatibility.anchor", anchor.is_none(), || anchor.unwrap());
    report
}

/// The structure induced on the base: frame from the bundle map, anchor
/// from the algebroid. All model checks are re-run and the target map is
/// verified to be a morphism onto the output; any failure is an error.
pub fn induced_structure(model: &GroupoidModel) -> Result<PolyPoissonStruct> {
    let mut gate = Report::new();
    gate.merge_prefixed("axioms", model.chart.check_axioms());
    gate.merge_prefixed("mult", check_multiplicative(&model.chart, &model.omega));
    gate.merge_prefixed(
        "im",
        check_im_form(&model.algebroid, &model.mu, &model.plan_base),
    );
    gate.merge_prefixed("compat", check_compatibility(model));
    let arrow_form = PolySympForm::new(model.omega.clone());
    gate.merge_prefixed("symp", arrow_form.is_polysymplectic(&model.plan_arrow));
    if !gate.passed() {
        return Err(Error::CheckFailed(format!(
            "model checks failed: {}",
            gate.first_failure().map(|c| c.name.clone()).unwrap_or_default()
        )));
    }
    let pp = PolyPoissonStruct::new(
        &model.chart.base,
        model.mult(),
        model.mu.mu.clone(),
        model.algebroid.anchor.clone(),
        model.plan_base.clone(),
    )?;
    let rep = pp.check_structure();
    if !rep.passed() {
        return Err(Error::CheckFailed(format!(
            "induced structure fails its checker: {}",
            rep.first_failure().map(|c| c.name.clone()).unwrap_or_default()
        )));
    }
    let arrows_pp = from_polysymplectic(&arrow_form, &model.plan_arrow)?;
    let morph = is_morphism(&model.chart.target, &arrows_pp, &pp);
    if !morph.passed() {
        return Err(Error::CheckFailed(
            "target map is not a morphism onto the induced structure".to_string(),
        ));
    }
    Ok(pp)
}

/// Run every check of this module on a model and collect one report.
pub fn check_model(model: &GroupoidModel) -> Report {
    let mut report = Report::new();
    report.merge_prefixed("axioms", model.chart.check_axioms());
    report.merge_prefixed("mult", check_multiplicative(&model.chart, &model.omega));
    report.merge_prefixed("unitinv", check_unit_inv(&model.chart, &model.omega));
    report.merge_prefixed(
        "im",
        check_im_form(&model.algebroid, &model.mu, &model.plan_base),
    );
    report.merge_prefixed("compat", check_compatibility(model));
    report.merge_prefixed(
        "symp",
        PolySympForm::new(model.omega.clone()).is_polysymplectic(&model.plan_arrow),
    );
    report
}

fn zero_structure_table(vars: &Vars, r: usize) -> Vec<Vec<Vec<RatFun>>> {
    vec![vec![vec![RatFun::zero(vars); r]; r]; r]
}

/// The pair groupoid of a poly-symplectic chart, with the difference form
/// `t* omega - s* omega`.
pub fn build_pair_model(form: &PolySympForm, plan: &SamplePlan) -> Result<GroupoidModel> {
    let rep = form.is_polysymplectic(plan);
    if !rep.passed() {
        return Err(Error::Precondition(
            "pair model needs a valid poly-symplectic form".to_string(),
        ));
    }
    let base = form.vars().clone();
    let n = base.len();
    let suffixed = |prefix: &str| -> Vec<String> {
        base.names().iter().map(|s| format!("{prefix}{s}")).collect()
    };
    let mut arrow_names = suffixed("l_");
    arrow_names.extend(suffixed("r_"));
    let arrow = Vars::named(&arrow_names);
    let mut comp_names = suffixed("c1_");
    comp_names.extend(suffixed("c2_"));
    comp_names.extend(suffixed("c3_"));
    let comp = Vars::named(&comp_names);
    let block = |vars: &Vars, start: usize, len: usize| -> Vec<Poly> {
        (start..start + len).map(|i| Poly::var(vars, i)).collect()
    };
    let target = PolyMap::new(&arrow, &base, block(&arrow, 0, n));
    let source = PolyMap::new(&arrow, &base, block(&arrow, n, n));
    let unit = {
        let mut comps = block(&base, 0, n);
        comps.extend(block(&base, 0, n));
        PolyMap::new(&base, &arrow, comps)
    };
    let inverse = {
        let mut comps = block(&arrow, n, n);
        comps.extend(block(&arrow, 0, n));
        PolyMap::new(&arrow, &arrow, comps)
    };
    let comp_pr1 = {
        let mut comps = block(&comp, 0, n);
        comps.extend(block(&comp, n, n));
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_pr2 = {
        let mut comps = block(&comp, n, n);
        comps.extend(block(&comp, 2 * n, n));
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_m = {
        let mut comps = block(&comp, 0, n);
        comps.extend(block(&comp, 2 * n, n));
        PolyMap::new(&comp, &arrow, comps)
    };
    let unit_left = {
        // g = (x, y) -> (x, x, y)
        let mut comps = block(&arrow, 0, n);
        comps.extend(block(&arrow, 0, n));
        comps.extend(block(&arrow, n, n));
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let unit_right = {
        // g = (x, y) -> (x, y, y)
        let mut comps = block(&arrow, 0, n);
        comps.extend(block(&arrow, n, n));
        comps.extend(block(&arrow, n, n));
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let chart = GroupoidChart {
        arrow: arrow.clone(),
        base: base.clone(),
        source: source.clone(),
        target: target.clone(),
        unit,
        inverse,
        comp,
        comp_pr1,
        comp_pr2,
        comp_m,
        unit_left,
        unit_right,
    };
    let omega = pullback(&target, form.omega()).sub(&pullback(&source, form.omega()));
    let anchor: Vec<VectorField> = (0..n).map(|i| VectorField::coordinate(&base, i)).collect();
    let algebroid = LieAlgebroidData {
        vars: base.clone(),
        rank: n,
        anchor,
        structure: zero_structure_table(&base, n),
    };
    let mu = IMForm {
        mu: (0..n).map(|i| form.flat_of_coordinate(i)).collect(),
    };
    let u_r: Vec<VectorField> = (0..n)
        .map(|i| VectorField::coordinate(&arrow, i))
        .collect();
    Ok(GroupoidModel {
        chart,
        omega,
        algebroid,
        mu,
        u_r,
        plan_base: plan.clone(),
        plan_arrow: plan.clone(),
    })
}

/// The covelocity bundle as a groupoid under fibrewise addition.
pub fn build_covelocity_model(nq: usize, k: usize, plan: &SamplePlan) -> GroupoidModel {
    let base = Vars::named(&(1..=nq).map(|i| format!("q{i}")).collect::<Vec<_>>());
    let arrow = covelocity_vars(nq, k);
    let fiber = k * nq;
    let mut comp_names: Vec<String> = (1..=nq).map(|i| format!("q{i}")).collect();
    for j in 1..=k {
        for i in 1..=nq {
            comp_names.push(format!("u{j}_{i}"));
        }
    }
    for j in 1..=k {
        for i in 1..=nq {
            comp_names.push(format!("w{j}_{i}"));
        }
    }
    let comp = Vars::named(&comp_names);
    let qpart = |vars: &Vars| -> Vec<Poly> { (0..nq).map(|i| Poly::var(vars, i)).collect() };
    let source = PolyMap::new(&arrow, &base, qpart(&arrow));
    let target = source.clone();
    let unit = {
        let mut comps = qpart(&base);
        comps.extend(vec![Poly::zero(&base); fiber]);
        PolyMap::new(&base, &arrow, comps)
    };
    let inverse = {
        let mut comps = qpart(&arrow);
        for i in 0..fiber {
            comps.push(-&Poly::var(&arrow, nq + i));
        }
        PolyMap::new(&arrow, &arrow, comps)
    };
    let comp_pr1 = {
        let mut comps = qpart(&comp);
        for i in 0..fiber {
            comps.push(Poly::var(&comp, nq + i));
        }
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_pr2 = {
        let mut comps = qpart(&comp);
        for i in 0..fiber {
            comps.push(Poly::var(&comp, nq + fiber + i));
        }
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_m = {
        let mut comps = qpart(&comp);
        for i in 0..fiber {
            comps.push(&Poly::var(&comp, nq + i) + &Poly::var(&comp, nq + fiber + i));
        }
        PolyMap::new(&comp, &arrow, comps)
    };
    let unit_left = {
        let mut comps = qpart(&arrow);
        comps.extend(vec![Poly::zero(&arrow); fiber]);
        for i in 0..fiber {
            comps.push(Poly::var(&arrow, nq + i));
        }
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let unit_right = {
        let mut comps = qpart(&arrow);
        for i in 0..fiber {
            comps.push(Poly::var(&arrow, nq + i));
        }
        comps.extend(vec![Poly::zero(&arrow); fiber]);
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let chart = GroupoidChart {
        arrow: arrow.clone(),
        base: base.clone(),
        source,
        target,
        unit,
        inverse,
        comp,
        comp_pr1,
        comp_pr2,
        comp_m,
        unit_left,
        unit_right,
    };
    let omega = covelocities(nq, k).omega().clone();
    // algebroid frame indexed by (slot j, base index i), flattened j*nq + i
    let anchor = vec![VectorField::zero(&base); fiber];
    let algebroid = LieAlgebroidData {
        vars: base.clone(),
        rank: fiber,
        anchor,
        structure: zero_structure_table(&base, fiber),
    };
    let mut mu = Vec::with_capacity(fiber);
    for j in 0..k {
        for i in 0..nq {
            let mut grid = vec![vec![Poly::zero(&base); nq]; k];
            grid[j][i] = Poly::one(&base);
            mu.push(CoSection::from_grid(&base, grid));
        }
    }
    // fibre translation fields oriented so that i_{u^R} omega = t* mu
    let mut u_r = Vec::with_capacity(fiber);
    for idx in 0..fiber {
        let mut comps = vec![Poly::zero(&arrow); arrow.len()];
        comps[nq + idx] = -&Poly::one(&arrow);
        u_r.push(VectorField::new(&arrow, comps));
    }
    GroupoidModel {
        chart,
        omega,
        algebroid,
        mu: IMForm { mu },
        u_r,
        plan_base: plan.clone(),
        plan_arrow: plan.clone(),
    }
}

/// The coadjoint action groupoid of a nilpotent group on the k-fold dual,
/// carrying the canonical covelocity form in the chart where the source is
/// the projection and the target is the diagonal coadjoint action.
pub fn build_coadjoint_model(
    sc: &StructureConstants,
    k: usize,
    plan: &SamplePlan,
) -> Result<GroupoidModel> {
    let group = NilpotentGroup::new(sc.clone())?;
    let m = group.dim();
    let base = crate::polypoisson::direct_sum_vars(m, k);
    let mut arrow_names: Vec<String> = (1..=m).map(|i| format!("g{i}")).collect();
    arrow_names.extend(base.names().iter().cloned());
    let arrow = Vars::named(&arrow_names);
    let g_idx: Vec<usize> = (0..m).collect();
    // comp chart: (g, h, eta)
    let mut comp_names: Vec<String> = (1..=m).map(|i| format!("g{i}")).collect();
    comp_names.extend((1..=m).map(|i| format!("h{i}")));
    for j in 1..=k {
        for l in 1..=m {
            comp_names.push(format!("e{j}_{l}"));
        }
    }
    let comp = Vars::named(&comp_names);
    let h_idx: Vec<usize> = (m..2 * m).collect();

    // coadjoint matrix applied diagonally to a zeta block
    let coad_apply = |vars: &Vars, gi: &[usize], zeta_start: usize| -> Vec<Poly> {
        let mat = group.coadjoint_matrix(vars, gi);
        let mut out = Vec::with_capacity(k * m);
        for j in 0..k {
            for l in 0..m {
                let mut acc = Poly::zero(vars);
                for a in 0..m {
                    if !mat[l][a].is_zero() {
                        acc = &acc + &(&mat[l][a] * &Poly::var(vars, zeta_start + j * m + a));
                    }
                }
                out.push(acc);
            }
        }
        out
    };

    let source = PolyMap::new(
        &arrow,
        &base,
        (m..m + k * m).map(|i| Poly::var(&arrow, i)).collect(),
    );
    let target = PolyMap::new(&arrow, &base, coad_apply(&arrow, &g_idx, m));
    let unit = {
        let mut comps = vec![Poly::zero(&base); m];
        comps.extend((0..k * m).map(|i| Poly::var(&base, i)));
        PolyMap::new(&base, &arrow, comps)
    };
    let inverse = {
        let mut comps: Vec<Poly> = (0..m).map(|i| -&Poly::var(&arrow, i)).collect();
        comps.extend(coad_apply(&arrow, &g_idx, m));
        PolyMap::new(&arrow, &arrow, comps)
    };
    let comp_pr1 = {
        let mut comps: Vec<Poly> = (0..m).map(|i| Poly::var(&comp, i)).collect();
        comps.extend(coad_apply(&comp, &h_idx, 2 * m));
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_pr2 = {
        let mut comps: Vec<Poly> = (m..2 * m).map(|i| Poly::var(&comp, i)).collect();
        comps.extend((2 * m..2 * m + k * m).map(|i| Poly::var(&comp, i)));
        PolyMap::new(&comp, &arrow, comps)
    };
    let comp_m = {
        let mut comps = group.multiply(&comp, &g_idx, &h_idx);
        comps.extend((2 * m..2 * m + k * m).map(|i| Poly::var(&comp, i)));
        PolyMap::new(&comp, &arrow, comps)
    };
    let unit_left = {
        // (g, zeta) -> (0, g, zeta)
        let mut comps = vec![Poly::zero(&arrow); m];
        comps.extend((0..m).map(|i| Poly::var(&arrow, i)));
        comps.extend((m..m + k * m).map(|i| Poly::var(&arrow, i)));
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let unit_right = {
        // (g, zeta) -> (g, 0, zeta)
        let mut comps: Vec<Poly> = (0..m).map(|i| Poly::var(&arrow, i)).collect();
        comps.extend(vec![Poly::zero(&arrow); m]);
        comps.extend((m..m + k * m).map(|i| Poly::var(&arrow, i)));
        Some(PolyMap::new(&arrow, &comp, comps))
    };
    let chart = GroupoidChart {
        arrow: arrow.clone(),
        base: base.clone(),
        source,
        target,
        unit,
        inverse,
        comp,
        comp_pr1,
        comp_pr2,
        comp_m,
        unit_left,
        unit_right,
    };

    // canonical one-form in this chart: theta_j = <zeta_j, lambda> with the
    // left Maurer-Cartan form; omega = -d theta
    let lambda = group.left_maurer_cartan(&arrow, &g_idx);
    let mut theta_terms = Vec::new();
    for j in 0..k {
        for l in 0..m {
            let z = Poly::var(&arrow, m + j * m + l);
            for i in 0..m {
                if !lambda[l][i].is_zero() {
                    theta_terms.push((j, vec![i], &z * &lambda[l][i]));
                }
            }
        }
    }
    let theta = KForm::from_terms(&arrow, 1, k, theta_terms);
    let omega = ext_d(&theta).neg();

    // infinitesimal data: the direct-sum structure's frame and anchors,
    // with the bracket table carrying the opposite structure constants
    let direct_sum = crate::polypoisson::lie_poisson_direct_sum(sc, k, plan)?;
    let mut structure = zero_structure_table(&base, m);
    for a in 0..m {
        for b in 0..m {
            for e in 0..m {
                let c = sc.constant(a, b, e);
                if !c.is_zero() {
                    structure[a][b][e] = RatFun::constant(&base, -c.clone());
                }
            }
        }
    }
    let algebroid = LieAlgebroidData {
        vars: base.clone(),
        rank: m,
        anchor: direct_sum.anchor().to_vec(),
        structure,
    };
    let mu = IMForm { mu: direct_sum.frame().to_vec() };
    // right-invariant fields: the right frame in the group block, zero on
    // the dual block
    let rframe = group.right_invariant_frame(&arrow, &g_idx);
    let mut u_r = Vec::with_capacity(m);
    for a in 0..m {
        let mut comps = vec![Poly::zero(&arrow); arrow.len()];
        for i in 0..m {
            comps[i] = rframe[i][a].clone();
        }
        u_r.push(VectorField::new(&arrow, comps));
    }
    Ok(GroupoidModel {
        chart,
        omega,
        algebroid,
        mu,
        u_r,
        plan_base: plan.clone(),
        plan_arrow: plan.clone(),
    })
}

/// Product of two charts on disjointly named coordinates: all structure
/// maps act blockwise.
pub fn product_chart(a: &GroupoidChart, b: &GroupoidChart) -> GroupoidChart {
    let arrow = a.arrow.concat(&b.arrow);
    let base = a.base.concat(&b.base);
    let comp = a.comp.concat(&b.comp);
    let join = |fa: &PolyMap, fb: &PolyMap, dom: &Vars, cod: &Vars, a_dom: &Vars| -> PolyMap {
        let a_len = a_dom.len();
        let args_a: Vec<Poly> = (0..a_len).map(|i| Poly::var(dom, i)).collect();
        let args_b: Vec<Poly> = (a_len..dom.len()).map(|i| Poly::var(dom, i)).collect();
        let mut comps: Vec<Poly> = fa.comps().iter().map(|c| c.compose(&args_a, dom)).collect();
        comps.extend(fb.comps().iter().map(|c| c.compose(&args_b, dom)));
        PolyMap::new(dom, cod, comps)
    };
    GroupoidChart {
        arrow: arrow.clone(),
        base: base.clone(),
        source: join(&a.source, &b.source, &arrow, &base, &a.arrow),
        target: join(&a.target, &b.target, &arrow, &base, &a.arrow),
        unit: join(&a.unit, &b.unit, &base, &arrow, &a.base),
        inverse: join(&a.inverse, &b.inverse, &arrow, &arrow, &a.arrow),
        comp: comp.clone(),
        comp_pr1: join(&a.comp_pr1, &b.comp_pr1, &comp, &arrow, &a.comp),
        comp_pr2: join(&a.comp_pr2, &b.comp_pr2, &comp, &arrow, &a.comp),
        comp_m: join(&a.comp_m, &b.comp_m, &comp, &arrow, &a.comp),
        unit_left: match (&a.unit_left, &b.unit_left) {
            (Some(ua), Some(ub)) => Some(join(ua, ub, &arrow, &comp, &a.arrow)),
            _ => None,
        },
        unit_right: match (&a.unit_right, &b.unit_right) {
            (Some(ua), Some(ub)) => Some(join(ua, ub, &arrow, &comp, &a.arrow)),
            _ => None,
        },
    }
}

/// Arrow-space projections of a product chart onto its factors.
pub fn product_arrow_projections(
    prod: &GroupoidChart,
    a_arrow: &Vars,
    b_arrow: &Vars,
) -> (PolyMap, PolyMap) {
    let na = a_arrow.len();
    let pa = PolyMap::new(
        &prod.arrow,
        a_arrow,
        (0..na).map(|i| Poly::var(&prod.arrow, i)).collect(),
    );
    let pb = PolyMap::new(
        &prod.arrow,
        b_arrow,
        (na..prod.arrow.len()).map(|i| Poly::var(&prod.arrow, i)).collect(),
    );
    (pa, pb)
}
