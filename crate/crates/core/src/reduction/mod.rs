//! Symmetries and reduction at chart level: reducibility of an action,
//! quotient structures through an explicit invariant submersion with a
//! polynomial section, moment maps, level-set reduction, leafwise
//! comparison, and reduction of charted groupoid models.
//!
//! Quotients are never abstract orbit spaces: every fixture supplies the
//! submersion, its section, and (for level sets) a polynomial
//! parametrization, and every claimed property is re-verified exactly or
//! at sample points.

pub mod setups;

use num_traits::Zero;

use crate::cartan::{
    ext_d, interior, lie_derivative, pullback, CoSection, KForm, PolyMap, VectorField,
};
use crate::error::{Error, Result};
use crate::exact::{
    generic_rank, nullspace_sym, numeric_rank, span_contained, span_intersection, Mat, Poly, Rat,
    RatFun, RMat, SamplePlan, Vars,
};
use crate::groupoid::{check_model, induced_structure, GroupoidChart, GroupoidModel, IMForm};
use crate::liealg::StructureConstants;
use crate::polypoisson::{from_polysymplectic, is_morphism, lie_poisson_direct_sum, PolyPoissonStruct};
use crate::polysymp::PolySympForm;
use crate::report::Report;

/// A group action presented by its infinitesimal generators, optionally
/// with the action map itself (group coordinates centred at the identity)
/// and the coadjoint matrices for equivariance checks.
#[derive(Clone, Debug)]
pub struct ActionData {
    pub group_dim: usize,
    pub generators: Vec<VectorField>,
    /// The action in n + m variables (base block first); its group-partials
    /// at the identity must reproduce the generators.
    pub action_family: Option<PolyMap>,
    /// Diagonal coadjoint matrices on the family chart, entries in the
    /// group block.
    pub coadjoint_rep: Option<Vec<Vec<Poly>>>,
}

impl ActionData {
    pub fn translations(vars: &Vars, axes: &[usize]) -> Self {
        ActionData {
            group_dim: axes.len(),
            generators: axes.iter().map(|&i| VectorField::coordinate(vars, i)).collect(),
            action_family: None,
            coadjoint_rep: None,
        }
    }

    /// Constant-rank of the generator span at samples, and consistency of
    /// the family with the generators.
    pub fn validate(&self, vars: &Vars, plan: &SamplePlan) -> Report {
        let mut report = Report::new();
        let n = vars.len();
        if self.generators.is_empty() {
            report.pass("action.generators");
        } else {
            let gen_mat = Mat::from_poly_rows(
                (0..n)
                    .map(|i| self.generators.iter().map(|g| g.comps()[i].clone()).collect())
                    .collect(),
            );
            let g = generic_rank(&gen_mat);
            let mut ok = true;
            let mut witness = String::new();
            if let Ok(points) = plan.sample_points(n) {
                for p in &points {
                    let r = numeric_rank(&gen_mat, p).expect("polynomial generators");
                    if r != g {
                        ok = false;
                        witness = format!("generator rank drops to {r} (generic {g})");
                        break;
                    }
                }
            }
            report.assert_check("action.generators", ok, || witness);
        }
        if let Some(family) = &self.action_family {
            let m = self.group_dim;
            assert_eq!(family.domain().len(), n + m, "family chart is base + group");
            // substitute the identity g = 0 into the group partials
            let embed: Vec<Poly> = (0..n)
                .map(|i| Poly::var(vars, i))
                .chain((0..m).map(|_| Poly::zero(vars)))
                .collect();
            let mut ok = true;
            'outer: for (a, gen) in self.generators.iter().enumerate() {
                for i in 0..n {
                    let d = family.comps()[i].deriv(n + a).compose(&embed, vars);
                    if d != gen.comps()[i] {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            report.assert_check("action.family-generators", ok, || {
                "group partials of the family at the identity differ from the generators".to_string()
            });
        }
        report
    }
}

/// An invariant submersion with a polynomial section.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    pub pi: PolyMap,
    pub sigma: PolyMap,
}

impl QuotientModel {
    pub fn identity(vars: &Vars) -> Self {
        QuotientModel {
            pi: PolyMap::identity(vars),
            sigma: PolyMap::identity(vars),
        }
    }

    /// `pi(sigma) = id` exactly and invariance of every component of `pi`
    /// along the given generators.
    pub fn validate(&self, generators: &[VectorField]) -> Result<()> {
        let composed = self.pi.after(&self.sigma);
        let id = PolyMap::identity(self.pi.codomain());
        if composed.comps() != id.comps() {
            return Err(Error::Precondition("pi(sigma) differs from the identity".to_string()));
        }
        for gen in generators {
            for c in self.pi.comps() {
                if !gen.apply(c).is_zero() {
                    return Err(Error::Precondition(
                        "quotient map is not invariant along a generator".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A moment map as a polynomial map to the k-fold dual, component
/// `j*m + a` carrying the a-th group pairing of slot j.
#[derive(Clone, Debug)]
pub struct MomentData {
    pub j: PolyMap,
}

impl MomentData {
    /// The k-tuple of components paired against generator index `a`.
    pub fn tuple_for_generator(&self, a: usize, group_dim: usize, k: usize) -> Vec<Poly> {
        (0..k).map(|j| self.j.comps()[j * group_dim + a].clone()).collect()
    }
}

/// A clean level of a moment map: a parametrization of the fibre and the
/// residual quotient for the stabilizer action on the parameter chart.
#[derive(Clone, Debug)]
pub struct LevelSetModel {
    pub zeta: Vec<Rat>,
    pub psi: PolyMap,
    pub residual_generators: Vec<VectorField>,
    pub residual_quotient: QuotientModel,
    pub plan: SamplePlan,
}

impl LevelSetModel {
    /// `J(psi) = zeta` exactly, full-rank parametrization, and a residual
    /// quotient that is invariant with vertical generators.
    pub fn validate(&self, moment: &MomentData, m_gens: &[VectorField]) -> Result<()> {
        let j_on_level = moment.j.after(&self.psi);
        let params = self.psi.domain();
        for (c, comp) in j_on_level.comps().iter().enumerate() {
            let want = Poly::constant(params, self.zeta[c].clone());
            if *comp != want {
                return Err(Error::Precondition(format!(
                    "J(psi) component {c} differs from the level value"
                )));
            }
        }
        let d = params.len();
        if d > 0 {
            let jac = self.psi.jacobian();
            let jac_mat = Mat::from_poly_rows(jac);
            if generic_rank(&jac_mat) != d {
                return Err(Error::Precondition("parametrization drops rank".to_string()));
            }
            for p in self.plan.sample_points(d)? {
                if numeric_rank(&jac_mat, &p).expect("polynomial entries") != d {
                    return Err(Error::Precondition(
                        "parametrization drops rank at a sample point".to_string(),
                    ));
                }
            }
        }
        self.residual_quotient.validate(&self.residual_generators)?;
        // residual generators push into the vertical bundle along psi
        if !self.residual_generators.is_empty() && d > 0 {
            for p in self.plan.sample_points(d)? {
                let x = self.psi.eval(&p);
                let verticals: Vec<Vec<Rat>> = m_gens.iter().map(|g| g.eval(&x)).collect();
                for rg in &self.residual_generators {
                    let pushed: Vec<Rat> = self
                        .psi
                        .push_components(rg)
                        .iter()
                        .map(|c| c.eval(&p))
                        .collect();
                    if !span_contained(&[pushed], &verticals) {
                        return Err(Error::Precondition(
                            "a residual generator does not push into the vertical bundle".to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Multiply away denominators: `cleared_i = num_i * prod_{j != i} den_j`.
fn clear_denominators(coeffs: &[RatFun], vars: &Vars) -> Vec<Poly> {
    let mut out = Vec::with_capacity(coeffs.len());
    for i in 0..coeffs.len() {
        let mut p = coeffs[i].num().clone();
        for (j, c) in coeffs.iter().enumerate() {
            if j != i && !c.den().is_constant() {
                p = &p * c.den();
            } else if j != i {
                p = p.scale(&c.den().constant_term());
            }
        }
        out.push(p);
    }
    let _ = vars;
    out
}

/// The intersection of the span with the annihilator tuples of the
/// vertical bundle: a generating set of coefficient vectors over the frame
/// (denominators cleared), the resulting cosections, and a constant-rank
/// report.
pub struct VerticalIntersection {
    /// polynomial coefficient vectors over the structure frame
    pub coefficients: Vec<Vec<Poly>>,
    pub elements: Vec<CoSection>,
    pub report: Report,
}

pub fn ann_vertical_intersection(
    pp: &PolyPoissonStruct,
    action: &ActionData,
) -> Result<VerticalIntersection> {
    let r = pp.rank();
    let k = pp.mult();
    let vars = pp.vars().clone();
    let mut report = Report::new();
    // constraint rows: (generator, slot) against frame coefficients
    let kernel: Vec<Vec<RatFun>> = if action.generators.is_empty() {
        (0..r)
            .map(|a| {
                let mut v = vec![RatFun::zero(&vars); r];
                v[a] = RatFun::one(&vars);
                v
            })
            .collect()
    } else {
        let mut rows = Vec::new();
        for gen in &action.generators {
            for j in 0..k {
                let row: Vec<Poly> = pp.frame().iter().map(|s| s.pair(gen)[j].clone()).collect();
                rows.push(row);
            }
        }
        let c_mat = Mat::from_poly_rows(rows);
        let generic_c = generic_rank(&c_mat);
        // constant rank: the constraint matrix keeps its generic rank at samples
        let mut drop = None;
        for p in pp.plan().sample_points(vars.len())? {
            let rr = numeric_rank(&c_mat, &p).expect("polynomial constraints");
            if rr != generic_c {
                drop = Some(format!(
                    "constraint rank {rr} (generic {generic_c}) at a sample point"
                ));
                break;
            }
        }
        report.assert_check("intersection.constant-rank", drop.is_none(), || drop.unwrap());
        nullspace_sym(&c_mat)
    };
    if action.generators.is_empty() {
        report.pass("intersection.constant-rank");
    }
    let mut coefficients = Vec::new();
    let mut elements = Vec::new();
    for kv in &kernel {
        let cleared = clear_denominators(kv, &vars);
        let mut acc = KForm::zero(&vars, 1, k);
        for (a, c) in cleared.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&pp.frame()[a].form().scale(c));
            }
        }
        coefficients.push(cleared);
        elements.push(CoSection::new(acc));
    }
    report.push(
        "intersection.rank",
        crate::report::Verdict::Pass,
        Some(format!("rank {}", elements.len())),
    );
    Ok(VerticalIntersection { coefficients, elements, report })
}

/// Reducibility of an action: the intersection has constant rank and its
/// pointwise annihilator sits inside the vertical bundle.
pub fn check_reducible(pp: &PolyPoissonStruct, action: &ActionData) -> Result<Report> {
    let inter = ann_vertical_intersection(pp, action)?;
    let mut report = inter.report;
    let n = pp.dim();
    let mut witness = None;
    for point in pp.plan().sample_points(n)? {
        // kernel of the stacked intersection matrix at the point
        let kernel: Vec<Vec<Rat>> = if inter.elements.is_empty() {
            (0..n)
                .map(|i| {
                    let mut e = vec![Rat::zero(); n];
                    e[i] = Rat::from_integer(1.into());
                    e
                })
                .collect()
        } else {
            let mut rows = Vec::new();
            for s in &inter.elements {
                for row in s.grid() {
                    rows.push(row.iter().map(|c| c.eval(&point)).collect::<Vec<Rat>>());
                }
            }
            RMat::new(rows).nullspace()
        };
        let verticals: Vec<Vec<Rat>> = action.generators.iter().map(|g| g.eval(&point)).collect();
        if !span_contained(&kernel, &verticals) {
            witness = Some(format!(
                "annihilator of the intersection leaves the vertical bundle at {}",
                render_point(&point)
            ));
            break;
        }
    }
    report.assert_check("reducible.annihilator-vertical", witness.is_none(), || {
        witness.unwrap()
    });
    Ok(report)
}

/// The quotient structure: frame pulled back along the section of an
/// invariant intersection frame, anchors pushed through the submersion.
/// The output is re-checked and the submersion is verified to be a
/// morphism onto it.
pub fn reduce_structure(
    pp: &PolyPoissonStruct,
    action: &ActionData,
    qm: &QuotientModel,
    invariant_frame: Option<&[CoSection]>,
) -> Result<(PolyPoissonStruct, Report)> {
    let reducible = check_reducible(pp, action)?;
    if !reducible.passed() {
        return Err(Error::Precondition("the action is not reducible".to_string()));
    }
    qm.validate(&action.generators)?;
    let inter = ann_vertical_intersection(pp, action)?;
    let (elements, coefficients): (Vec<CoSection>, Vec<Vec<Poly>>) = match invariant_frame {
        None => (inter.elements.clone(), inter.coefficients.clone()),
        Some(supplied) => {
            // supplied frame must span the same subbundle: each element in
            // the structure frame span and the ranks match
            let mut coeffs = Vec::new();
            for s in supplied {
                let Some(c) = pp.express_in_frame(s) else {
                    return Err(Error::Precondition(
                        "supplied invariant frame leaves the structure span".to_string(),
                    ));
                };
                coeffs.push(clear_denominators(&c, pp.vars()));
            }
            if supplied.len() != inter.elements.len() {
                return Err(Error::Precondition(format!(
                    "supplied frame has rank {} but the intersection has rank {}",
                    supplied.len(),
                    inter.elements.len()
                )));
            }
            let mut all_rows: Vec<Vec<Poly>> =
                inter.elements.iter().map(|s| s.flatten()).collect();
            let base_rank = generic_rank(&Mat::from_poly_rows(all_rows.clone()));
            all_rows.extend(supplied.iter().map(|s| s.flatten()));
            if generic_rank(&Mat::from_poly_rows(all_rows)) != base_rank {
                return Err(Error::Precondition(
                    "supplied frame does not span the intersection".to_string(),
                ));
            }
            // each supplied element must annihilate the generators
            for s in supplied {
                for gen in &action.generators {
                    if s.pair(gen).iter().any(|p| !p.is_zero()) {
                        return Err(Error::Precondition(
                            "supplied frame does not annihilate the vertical bundle".to_string(),
                        ));
                    }
                }
            }
            (supplied.to_vec(), coeffs)
        }
    };
    // the frame must be invariant: vanishing derivative along each generator
    for (idx, s) in elements.iter().enumerate() {
        for gen in &action.generators {
            let lie = lie_derivative(gen, s.form());
            if !lie.is_zero() {
                return Err(Error::Precondition(format!(
                    "no invariant frame available: element {idx} moves along a generator"
                )));
            }
        }
    }
    let mut report = Report::new();
    report.pass("reduction.invariant-frame");
    // reduced frame and anchors
    let reduced_vars = qm.pi.codomain().clone();
    let mut red_frame = Vec::with_capacity(elements.len());
    let mut red_anchor = Vec::with_capacity(elements.len());
    for (s, coeff) in elements.iter().zip(&coefficients) {
        red_frame.push(s.pullback(&qm.sigma));
        // anchor: P(element) pushed through pi, restricted along sigma
        let mut upstairs = vec![Poly::zero(pp.vars()); pp.dim()];
        for (a, c) in coeff.iter().enumerate() {
            if !c.is_zero() {
                for (i, comp) in pp.anchor()[a].comps().iter().enumerate() {
                    upstairs[i] = &upstairs[i] + &(c * comp);
                }
            }
        }
        let field = VectorField::new(pp.vars(), upstairs);
        let pushed = qm.pi.push_components(&field);
        let comps: Vec<Poly> = pushed
            .iter()
            .map(|c| c.compose(qm.sigma.comps(), &reduced_vars))
            .collect();
        red_anchor.push(VectorField::new(&reduced_vars, comps));
    }
    let mut red_plan = pp.plan().clone();
    red_plan.avoid = Vec::new();
    let reduced = PolyPoissonStruct::new(&reduced_vars, pp.mult(), red_frame, red_anchor, red_plan)?;
    let rep = reduced.check_structure();
    report.assert_check("reduction.structure", rep.passed(), || {
        format!(
            "reduced structure fails: {}",
            rep.first_failure().map(|c| c.name.clone()).unwrap_or_default()
        )
    });
    let morph = is_morphism(&qm.pi, pp, &reduced);
    report.assert_check("reduction.morphism", morph.passed(), || {
        format!(
            "quotient map is not a morphism: {}",
            morph.first_failure().map(|c| c.name.clone()).unwrap_or_default()
        )
    });
    Ok((reduced, report))
}

/// The moment conditions: `i_{u_M} omega = d<J, u>` exactly per generator,
/// and equivariance through the action family when present.
pub fn check_moment(form: &PolySympForm, action: &ActionData, moment: &MomentData) -> Report {
    let mut report = Report::new();
    let k = form.mult();
    let m = action.group_dim;
    let vars = form.vars();
    let mut hamil = None;
    for (a, gen) in action.generators.iter().enumerate() {
        let lhs = interior(gen, form.omega());
        let tuple = moment.tuple_for_generator(a, m, k);
        let rhs = ext_d(&KForm::functions(vars, tuple));
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            hamil = Some(format!(
                "generator {a}: i_u omega - d<J,u> = {}",
                diff.render()
            ));
            break;
        }
    }
    report.assert_check("moment.hamiltonian", hamil.is_none(), || hamil.unwrap());
    if let (Some(family), Some(rep)) = (&action.action_family, &action.coadjoint_rep) {
        let family_vars = family.domain();
        let n = vars.len();
        // J written on the family chart
        let embed: Vec<Poly> = (0..n).map(|i| Poly::var(family_vars, i)).collect();
        let j_embedded: Vec<Poly> = moment
            .j
            .comps()
            .iter()
            .map(|c| c.compose(&embed, family_vars))
            .collect();
        let j_after: Vec<Poly> = moment
            .j
            .comps()
            .iter()
            .map(|c| c.compose(family.comps(), family_vars))
            .collect();
        let mut equiv = None;
        'eq: for j in 0..k {
            for l in 0..m {
                let mut rhs = Poly::zero(family_vars);
                for a in 0..m {
                    if !rep[l][a].is_zero() {
                        rhs = &rhs + &(&rep[l][a] * &j_embedded[j * m + a]);
                    }
                }
                let lhs = &j_after[j * m + l];
                if *lhs != rhs {
                    equiv = Some(format!(
                        "slot {j} component {l}: J(phi) - Ad*J = {}",
                        (lhs - &rhs).render()
                    ));
                    break 'eq;
                }
            }
        }
        report.assert_check("moment.equivariance", equiv.is_none(), || equiv.unwrap());
    }
    report
}

/// The moment map as a morphism onto the direct-sum structure.
pub fn moment_is_morphism(
    form: &PolySympForm,
    moment: &MomentData,
    sc: &StructureConstants,
    k: usize,
    plan: &SamplePlan,
) -> Result<Report> {
    let source = from_polysymplectic(form, plan)?;
    let target = lie_poisson_direct_sum(sc, k, plan)?;
    Ok(is_morphism(&moment.j, &source, &target))
}

/// Level-set reduction: pull the form onto the fibre parametrization, then
/// along the residual section. Reports cleanness, basicness, closedness,
/// the pointwise kernel criterion, and nondegeneracy of the result.
pub fn level_reduce(
    form: &PolySympForm,
    action: &ActionData,
    moment: &MomentData,
    lsm: &LevelSetModel,
) -> Result<(KForm, Report)> {
    lsm.validate(moment, &action.generators)?;
    let mut report = Report::new();
    report.pass("level.parametrization");
    let n = form.dim();
    let params = lsm.psi.domain();
    let d = params.len();
    // cleanness: dJ along psi has rank n - d at the sample points
    let dj = moment.j.jacobian();
    let dj_on_level: Vec<Vec<Poly>> = dj
        .iter()
        .map(|row| row.iter().map(|e| e.compose(lsm.psi.comps(), params)).collect())
        .collect();
    let dj_mat = Mat::from_poly_rows(dj_on_level);
    let mut clean_witness = None;
    if d > 0 {
        for p in lsm.plan.sample_points(d)? {
            let r = numeric_rank(&dj_mat, &p).expect("polynomial entries");
            if r != n - d {
                clean_witness = Some(format!(
                    "rank of dJ along the level is {r}, expected {} at {}",
                    n - d,
                    render_point(&p)
                ));
                break;
            }
        }
    }
    if let Some(w) = clean_witness {
        report.fail("level.clean", w);
        return Err(Error::Precondition("the level value is not clean".to_string()));
    }
    report.pass("level.clean");
    let omega_level = pullback(&lsm.psi, form.omega());
    let reduced = pullback(&lsm.residual_quotient.sigma, &omega_level);
    // basic: the reduced form pulls back to the restriction
    let back = pullback(&lsm.residual_quotient.pi, &reduced);
    let basic_diff = back.sub(&omega_level);
    report.assert_check("level.basic", basic_diff.is_zero(), || {
        format!("pi* omega_red - i* omega = {}", basic_diff.render())
    });
    let d_red = ext_d(&reduced);
    report.assert_check("level.closed", d_red.is_zero(), || {
        format!("d omega_red = {}", d_red.render())
    });
    // pointwise kernel criterion at sample points on the level
    let m_plan = SamplePlan::new(lsm.plan.seed, lsm.plan.count, lsm.plan.box_bound);
    let pp = from_polysymplectic(form, &m_plan)?;
    let inter = ann_vertical_intersection(&pp, action)?;
    let mut criterion = None;
    if d > 0 {
        for u in lsm.plan.sample_points(d)? {
            let x = lsm.psi.eval(&u);
            // annihilator of the intersection at x
            let kernel: Vec<Vec<Rat>> = if inter.elements.is_empty() {
                (0..n)
                    .map(|i| {
                        let mut e = vec![Rat::zero(); n];
                        e[i] = Rat::from_integer(1.into());
                        e
                    })
                    .collect()
            } else {
                let mut rows = Vec::new();
                for s in &inter.elements {
                    for row in s.grid() {
                        rows.push(row.iter().map(|c| c.eval(&x)).collect::<Vec<Rat>>());
                    }
                }
                RMat::new(rows).nullspace()
            };
            // tangent of the level: image of d psi
            let jac = lsm.psi.jacobian();
            let tangent: Vec<Vec<Rat>> = (0..d)
                .map(|c| (0..n).map(|r| jac[r][c].eval(&u)).collect())
                .collect();
            let lhs = span_intersection(&kernel, &tangent);
            let verticals: Vec<Vec<Rat>> = action.generators.iter().map(|g| g.eval(&x)).collect();
            let vzeta = span_intersection(&verticals, &tangent);
            if !span_contained(&lhs, &vzeta) {
                criterion = Some(format!(
                    "kernel criterion fails at parameter point {}",
                    render_point(&u)
                ));
                break;
            }
        }
    }
    report.assert_check("level.kernel-criterion", criterion.is_none(), || {
        criterion.unwrap()
    });
    // nondegeneracy of the reduced form
    let red_plan = SamplePlan::new(lsm.plan.seed, lsm.plan.count, lsm.plan.box_bound);
    let red_report = PolySympForm::new(reduced.clone()).is_polysymplectic(&red_plan);
    report.assert_check("level.nondegenerate", red_report.passed(), || {
        format!(
            "reduced form is not poly-symplectic: {}",
            red_report
                .first_failure()
                .map(|c| c.name.clone())
                .unwrap_or_default()
        )
    });
    Ok((reduced, report))
}

/// Compare the reduced level against the leaf data of the quotient
/// structure at the given points of the reduced level chart: the image
/// tangent space must be the anchor image, and the leafwise form values
/// must agree entrywise with the reduced form.
pub fn compare_leaf(
    pp_red: &PolyPoissonStruct,
    into_quotient: &PolyMap,
    omega_red: &KForm,
    points: &[Vec<Rat>],
) -> Report {
    let mut report = Report::new();
    let mut tangent_witness = None;
    let mut value_witness = None;
    for w in points {
        let y = into_quotient.eval(w);
        let leaf = match crate::foliation::leafwise_form_at(pp_red, &y) {
            Ok(l) => l,
            Err(e) => {
                report.push(
                    "leaf.tangent-span",
                    crate::report::Verdict::Error,
                    Some(e.to_string()),
                );
                return report;
            }
        };
        // tangent of the reduced level pushed into the quotient
        let jac = into_quotient.jacobian();
        let d = into_quotient.domain().len();
        let n_q = into_quotient.codomain().len();
        let pushed: Vec<Vec<Rat>> = (0..d)
            .map(|c| (0..n_q).map(|r| jac[r][c].eval(w)).collect())
            .collect();
        let anchors: Vec<Vec<Rat>> = pp_red.anchor().iter().map(|a| a.eval(&y)).collect();
        if tangent_witness.is_none()
            && !(span_contained(&pushed, &anchors) && span_contained(&anchors, &pushed))
        {
            tangent_witness = Some(format!(
                "tangent space differs from the anchor image at {}",
                render_point(w)
            ));
        }
        // express the leaf basis through the pushed tangent frame
        let push_mat = RMat::from_cols(pushed.clone());
        let mut c_vectors = Vec::new();
        let mut solvable = true;
        for b in &leaf.basis {
            match push_mat.solve(b) {
                Some(c) => c_vectors.push(c),
                None => {
                    solvable = false;
                    break;
                }
            }
        }
        if !solvable {
            if value_witness.is_none() {
                value_witness = Some(format!(
                    "leaf basis does not lift through the level at {}",
                    render_point(w)
                ));
            }
            continue;
        }
        'vals: for j in 0..omega_red.mult() {
            for alpha in 0..leaf.leaf_dim {
                for beta in 0..leaf.leaf_dim {
                    let got = omega_red.eval_on(
                        j,
                        &[c_vectors[alpha].clone(), c_vectors[beta].clone()],
                        w,
                    );
                    if got != leaf.values[j][alpha][beta] && value_witness.is_none() {
                        value_witness = Some(format!(
                            "slot {j} entry ({alpha},{beta}): reduced form {} vs leaf {} at {}",
                            got,
                            leaf.values[j][alpha][beta],
                            render_point(w)
                        ));
                        break 'vals;
                    }
                }
            }
        }
    }
    report.assert_check("leaf.tangent-span", tangent_witness.is_none(), || {
        tangent_witness.unwrap()
    });
    report.assert_check("leaf.form-values", value_witness.is_none(), || {
        value_witness.unwrap()
    });
    report
}

/// Everything a groupoid reduction needs beyond the model: the arrow-level
/// clean zero level with a retraction, the base action and quotient, and a
/// polynomial lift of the reduced composable parameters.
#[derive(Clone, Debug)]
pub struct GroupoidReductionData {
    pub lsm: LevelSetModel,
    pub arrow_retract: PolyMap,
    pub base_action: ActionData,
    pub base_quotient: QuotientModel,
    pub reduced_comp: Vars,
    pub comp_lift: PolyMap,
    pub invariant_frame: Option<Vec<CoSection>>,
}

/// Reduce a groupoid model by a hamiltonian action at level zero. The
/// reduced chart is assembled through the supplied quotient data, and the
/// entire model checker is re-run on the output; the induced structure of
/// the output must agree with the quotient structure of the base.
pub fn reduce_groupoid(
    model: &GroupoidModel,
    lifted: &ActionData,
    j_groupoid: &MomentData,
    data: &GroupoidReductionData,
) -> Result<(GroupoidModel, Report)> {
    let mut report = Report::new();
    let arrow_form = PolySympForm::new(model.omega.clone());
    let moment_rep = check_moment(&arrow_form, lifted, j_groupoid);
    if !moment_rep.passed() {
        return Err(Error::Precondition(
            "the lifted action is not hamiltonian for the supplied moment map".to_string(),
        ));
    }
    report.merge_prefixed("moment", moment_rep);
    let (omega_red, level_rep) = level_reduce(&arrow_form, lifted, j_groupoid, &data.lsm)?;
    if !level_rep.passed() {
        return Err(Error::CheckFailed(
            "level reduction of the arrow space failed".to_string(),
        ));
    }
    report.merge_prefixed("level", level_rep);

    // reduced arrow chart maps
    let pi_a = data.lsm.residual_quotient.pi.after(&data.arrow_retract);
    let iota_a = data.lsm.psi.after(&data.lsm.residual_quotient.sigma);
    let chart = &model.chart;
    let s_red = data.base_quotient.pi.after(&chart.source.after(&iota_a));
    let t_red = data.base_quotient.pi.after(&chart.target.after(&iota_a));
    let eps_red = pi_a.after(&chart.unit.after(&data.base_quotient.sigma));
    let inv_red = pi_a.after(&chart.inverse.after(&iota_a));
    // composable parametrization through the lift
    let pr1_red = pi_a.after(&chart.comp_pr1.after(&data.comp_lift));
    let pr2_red = pi_a.after(&chart.comp_pr2.after(&data.comp_lift));
    let m_red = pi_a.after(&chart.comp_m.after(&data.comp_lift));
    // the lift must stay inside the zero level
    let mut level_ok = true;
    for map in [&chart.comp_pr1, &chart.comp_pr2, &chart.comp_m] {
        let j_there = j_groupoid.j.after(&map.after(&data.comp_lift));
        if j_there.comps().iter().any(|c| !c.is_zero()) {
            level_ok = false;
            break;
        }
    }
    report.assert_check("greduction.level-composability", level_ok, || {
        "the composable lift leaves the zero level".to_string()
    });
    let reduced_chart = GroupoidChart {
        arrow: pi_a.codomain().clone(),
        base: data.base_quotient.pi.codomain().clone(),
        source: s_red,
        target: t_red,
        unit: eps_red,
        inverse: inv_red,
        comp: data.reduced_comp.clone(),
        comp_pr1: pr1_red,
        comp_pr2: pr2_red,
        comp_m: m_red,
        unit_left: None,
        unit_right: None,
    };

    // quotient structure on the base and the reduced infinitesimal data
    let base_pp = induced_structure(model)?;
    let (pp_red, red_rep) = reduce_structure(
        &base_pp,
        &data.base_action,
        &data.base_quotient,
        data.invariant_frame.as_deref(),
    )?;
    if !red_rep.passed() {
        return Err(Error::CheckFailed("base reduction failed".to_string()));
    }
    let algebroid = crate::polypoisson::to_algebroid(&pp_red)?;
    // reduced right-invariant fields: push the lifted combination through
    // the arrow quotient and restrict along its section
    let inter = match &data.invariant_frame {
        Some(frame) => {
            let mut coeffs = Vec::new();
            for s in frame {
                let c = base_pp
                    .express_in_frame(s)
                    .ok_or_else(|| Error::Precondition("invariant frame outside the span".to_string()))?;
                coeffs.push(clear_denominators(&c, base_pp.vars()));
            }
            coeffs
        }
        None => ann_vertical_intersection(&base_pp, &data.base_action)?.coefficients,
    };
    let mut u_r_red = Vec::with_capacity(inter.len());
    let reduced_arrow = pi_a.codomain().clone();
    for coeff in &inter {
        // X = sum_a (c_a o t) u^R_a on the original arrows
        let mut comps = vec![Poly::zero(&chart.arrow); chart.arrow.len()];
        for (a, c) in coeff.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c_on_arrows = c.compose(chart.target.comps(), &chart.arrow);
            for (i, u) in model.u_r[a].comps().iter().enumerate() {
                if !u.is_zero() {
                    comps[i] = &comps[i] + &(&c_on_arrows * u);
                }
            }
        }
        let field = VectorField::new(&chart.arrow, comps);
        let pushed = pi_a.push_components(&field);
        let restricted: Vec<Poly> = pushed
            .iter()
            .map(|c| c.compose(iota_a.comps(), &reduced_arrow))
            .collect();
        u_r_red.push(VectorField::new(&reduced_arrow, restricted));
    }
    let reduced_model = GroupoidModel {
        chart: reduced_chart,
        omega: omega_red.transplant(&reduced_arrow),
        algebroid,
        mu: IMForm { mu: pp_red.frame().to_vec() },
        u_r: u_r_red,
        plan_base: SamplePlan::new(
            model.plan_base.seed,
            model.plan_base.count,
            model.plan_base.box_bound,
        ),
        plan_arrow: SamplePlan::new(
            model.plan_arrow.seed,
            model.plan_arrow.count,
            model.plan_arrow.box_bound,
        ),
    };
    let model_rep = check_model(&reduced_model);
    report.assert_check("greduction.model", model_rep.passed(), || {
        format!(
            "reduced model fails: {}",
            model_rep
                .first_failure()
                .map(|c| c.name.clone())
                .unwrap_or_default()
        )
    });
    let integrates = induced_structure(&reduced_model)
        .map(|ind| crate::polypoisson::equivalent(&ind, &pp_red))
        .unwrap_or(false);
    report.assert_check("greduction.integrates", integrates, || {
        "induced structure of the reduced model differs from the reduced base structure".to_string()
    });
    Ok((reduced_model, report))
}

fn render_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::setups::*;
    use super::*;
    use crate::exact::rat;
    use crate::groupoid::build_covelocity_model;
    use crate::polypoisson::equivalent;
    use crate::polysymp::{covelocities, covelocity_vars};
    use crate::report::Verdict;

    fn plan() -> SamplePlan {
        SamplePlan::new(7, 5, 5)
    }

    #[test]
    fn translation_intersection_rank() {
        let setup = cotangent_translation(2, 2, 0, &plan());
        let inter = ann_vertical_intersection(&setup.pp, &setup.action).unwrap();
        // rank = dim S - k = 6 - 2
        assert_eq!(inter.elements.len(), 4);
        assert!(inter.report.passed());
        // every element annihilates the generator in both slots
        for s in &inter.elements {
            for gen in &setup.action.generators {
                assert!(s.pair(gen).iter().all(Poly::is_zero));
            }
        }
    }

    #[test]
    fn trivial_action_keeps_everything() {
        let pp = from_polysymplectic(&covelocities(1, 2), &plan()).unwrap();
        let action = ActionData {
            group_dim: 0,
            generators: Vec::new(),
            action_family: None,
            coadjoint_rep: None,
        };
        let inter = ann_vertical_intersection(&pp, &action).unwrap();
        assert_eq!(inter.elements.len(), pp.rank());
    }

    #[test]
    fn full_vertical_action_empties_intersection() {
        let pp = from_polysymplectic(&covelocities(1, 1), &plan()).unwrap();
        let vars = pp.vars().clone();
        let action = ActionData::translations(&vars, &[0, 1]);
        let inter = ann_vertical_intersection(&pp, &action).unwrap();
        assert_eq!(inter.elements.len(), 0);
    }

    #[test]
    fn translation_setup_reduces() {
        let setup = cotangent_translation(2, 2, 0, &plan());
        let red = check_reducible(&setup.pp, &setup.action).unwrap();
        assert!(red.passed(), "{red}");
        let (reduced, rep) =
            reduce_structure(&setup.pp, &setup.action, &setup.quotient, None).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(reduced.dim(), 5);
        assert_eq!(reduced.rank(), 4);
        assert!(reduced.check_structure().passed());
    }

    #[test]
    fn translation_moment_and_level() {
        let setup = cotangent_translation(2, 2, 0, &plan());
        let mrep = check_moment(&setup.form, &setup.action, &setup.moment);
        assert!(mrep.passed(), "{mrep}");
        // perturbing one moment component breaks the contraction identity
        let mut bad_comps = setup.moment.j.comps().to_vec();
        bad_comps[0] = &bad_comps[0] + &Poly::var(setup.form.vars(), 0);
        let bad = MomentData {
            j: PolyMap::new(setup.form.vars(), setup.moment.j.codomain(), bad_comps),
        };
        let bad_rep = check_moment(&setup.form, &setup.action, &bad);
        assert_eq!(bad_rep.verdict_of("moment.hamiltonian"), Some(Verdict::Fail));
        // morphism onto the abelian dual
        let (sc, k) = setup.morphism_target.clone().unwrap();
        let morph = moment_is_morphism(&setup.form, &setup.moment, &sc, k, &plan()).unwrap();
        assert!(morph.passed(), "{morph}");
        // level reduction at zero reproduces the canonical form one base
        // dimension down, exactly after relabelling
        let (omega_red, lrep) =
            level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level).unwrap();
        assert!(lrep.passed(), "{lrep}");
        let want = covelocities(1, 2);
        assert_eq!(
            omega_red,
            want.omega().transplant(omega_red.vars())
        );
        let _ = covelocity_vars(1, 2);
        // leafwise comparison at the shipped points
        let (pp_red, _) =
            reduce_structure(&setup.pp, &setup.action, &setup.quotient, None).unwrap();
        let leaf = compare_leaf(&pp_red, &setup.into_quotient, &omega_red, &setup.leaf_points);
        assert!(leaf.passed(), "{leaf}");
    }

    #[test]
    fn nilpotent_setup_reduces_to_direct_sum() {
        let sc = StructureConstants::heisenberg();
        let zeta0 = vec![rat(0), rat(0), rat(1), rat(0), rat(0), rat(0)];
        let setup = nilpotent_group_reduction(&sc, 2, zeta0, vec![2], &plan()).unwrap();
        let red = check_reducible(&setup.pp, &setup.action).unwrap();
        assert!(red.passed(), "{red}");
        let (reduced, rep) = reduce_structure(
            &setup.pp,
            &setup.action,
            &setup.quotient,
            setup.invariant_frame.as_deref(),
        )
        .unwrap();
        assert!(rep.passed(), "{rep}");
        let want = lie_poisson_direct_sum(&sc, 2, &plan()).unwrap();
        assert!(equivalent(&reduced, &want));
        assert_eq!(reduced.frame(), want.frame());
        assert_eq!(reduced.anchor(), want.anchor());
    }

    #[test]
    fn nilpotent_moment_level_and_leaf() {
        let sc = StructureConstants::heisenberg();
        let zeta0 = vec![rat(0), rat(0), rat(1), rat(0), rat(0), rat(0)];
        let setup = nilpotent_group_reduction(&sc, 2, zeta0, vec![2], &plan()).unwrap();
        let mrep = check_moment(&setup.form, &setup.action, &setup.moment);
        assert!(mrep.passed(), "{mrep}");
        let (sc_t, k) = setup.morphism_target.clone().unwrap();
        let morph = moment_is_morphism(&setup.form, &setup.moment, &sc_t, k, &plan()).unwrap();
        assert!(morph.passed(), "{morph}");
        let (omega_red, lrep) =
            level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level).unwrap();
        assert!(lrep.passed(), "{lrep}");
        let (pp_red, _) = reduce_structure(
            &setup.pp,
            &setup.action,
            &setup.quotient,
            setup.invariant_frame.as_deref(),
        )
        .unwrap();
        let leaf = compare_leaf(&pp_red, &setup.into_quotient, &omega_red, &setup.leaf_points);
        assert!(leaf.passed(), "{leaf}");
    }

    #[test]
    fn product_planes_reduce_to_a_point() {
        let setup = product_two_planes(&plan());
        assert!(check_moment(&setup.form, &setup.action, &setup.moment).passed());
        assert!(check_reducible(&setup.pp, &setup.action).unwrap().passed());
        let (omega_red, lrep) =
            level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level).unwrap();
        assert!(lrep.passed(), "{lrep}");
        assert_eq!(omega_red.dim(), 0);
        assert!(omega_red.is_zero());
    }

    #[test]
    fn degenerate_level_fails_criterion() {
        let setup = degenerate_level(&plan());
        assert!(check_moment(&setup.form, &setup.action, &setup.moment).passed());
        // the action is not reducible: the annihilator of the intersection
        // leaves the vertical bundle
        let red = check_reducible(&setup.pp, &setup.action).unwrap();
        assert_eq!(
            red.verdict_of("reducible.annihilator-vertical"),
            Some(Verdict::Fail)
        );
        let (omega_red, lrep) =
            level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level).unwrap();
        assert_eq!(lrep.verdict_of("level.kernel-criterion"), Some(Verdict::Fail));
        assert_eq!(lrep.verdict_of("level.nondegenerate"), Some(Verdict::Fail));
        assert!(omega_red.is_zero());
    }

    #[test]
    fn reducible_implies_level_criterion() {
        // across the shipped fixtures: a passing annihilator-vertical clause
        // forces a passing kernel criterion at the level
        let sc = StructureConstants::heisenberg();
        let zeta0 = vec![rat(0), rat(0), rat(1), rat(0), rat(0), rat(0)];
        let setups = vec![
            cotangent_translation(2, 2, 0, &plan()),
            nilpotent_group_reduction(&sc, 2, zeta0, vec![2], &plan()).unwrap(),
            product_two_planes(&plan()),
            degenerate_level(&plan()),
        ];
        for setup in &setups {
            let red = check_reducible(&setup.pp, &setup.action).unwrap();
            if red.verdict_of("reducible.annihilator-vertical") == Some(Verdict::Pass) {
                let (_, lrep) =
                    level_reduce(&setup.form, &setup.action, &setup.moment, &setup.level).unwrap();
                assert_eq!(
                    lrep.verdict_of("level.kernel-criterion"),
                    Some(Verdict::Pass)
                );
            }
        }
    }

    #[test]
    fn covelocity_groupoid_reduction() {
        let setup = covelocity_translation_groupoid(2, 2, 0, &plan());
        let (reduced, rep) =
            reduce_groupoid(&setup.model, &setup.lifted, &setup.j_groupoid, &setup.data).unwrap();
        assert!(rep.passed(), "{rep}");
        // the reduced model is the covelocity model one dimension down
        let want = build_covelocity_model(1, 2, &plan());
        assert_eq!(
            reduced.omega,
            want.omega.transplant(reduced.omega.vars())
        );
        assert_eq!(reduced.chart.base.len(), 1);
    }

    #[test]
    fn pair_groupoid_reduction() {
        let setup = pair_translation_groupoid(&plan()).unwrap();
        // additive moment identities at the chart level
        let j = &setup.j_groupoid.j;
        let chart = &setup.model.chart;
        let m_side = j.after(&chart.comp_m);
        let pr_sum: Vec<Poly> = j
            .after(&chart.comp_pr1)
            .comps()
            .iter()
            .zip(j.after(&chart.comp_pr2).comps())
            .map(|(a, b)| a + b)
            .collect();
        assert_eq!(m_side.comps(), &pr_sum[..]);
        let on_units = j.after(&chart.unit);
        assert!(on_units.comps().iter().all(Poly::is_zero));
        // the reduction itself
        let (reduced, rep) =
            reduce_groupoid(&setup.model, &setup.lifted, &setup.j_groupoid, &setup.data).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(reduced.chart.base.len(), 1);
        assert_eq!(reduced.chart.arrow.len(), 2);
    }

    #[test]
    fn trivial_group_reduction_returns_input() {
        let setup = trivial_group_groupoid(1, 2, &plan());
        let (reduced, rep) =
            reduce_groupoid(&setup.model, &setup.lifted, &setup.j_groupoid, &setup.data).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(
            reduced.omega,
            setup.model.omega.transplant(reduced.omega.vars())
        );
        assert_eq!(reduced.chart.arrow.len(), setup.model.chart.arrow.len());
    }
}
