//! Ready-made reduction pipelines: the cotangent-lifted translation on a
//! covelocity space, the lifted left multiplication of a nilpotent group
//! on its covelocity space, the product of two hamiltonian planes, a
//! degenerate level whose reduced form collapses, and the two groupoid
//! reduction pipelines (covelocity and pair).

use num_traits::Zero;

use super::{
    ActionData, GroupoidReductionData, LevelSetModel, MomentData, QuotientModel,
};
use crate::cartan::{interior, CoSection, PolyMap, VectorField};
use crate::error::Result;
use crate::exact::{rat, Poly, Rat, SamplePlan, Vars};
use crate::groupoid::{build_covelocity_model, build_pair_model, GroupoidModel};
use crate::liealg::{NilpotentGroup, StructureConstants};
use crate::polypoisson::{direct_sum_vars, from_polysymplectic, PolyPoissonStruct};
use crate::polysymp::{covelocities, covelocity_vars, PolySympForm};

/// One full hamiltonian-reduction pipeline on a poly-symplectic chart.
pub struct ReductionSetup {
    pub form: PolySympForm,
    pub pp: PolyPoissonStruct,
    pub action: ActionData,
    pub quotient: QuotientModel,
    pub moment: MomentData,
    pub level: LevelSetModel,
    /// invariant intersection frame when the canonical one is not invariant
    pub invariant_frame: Option<Vec<CoSection>>,
    /// the composite reduced-level chart -> quotient chart
    pub into_quotient: PolyMap,
    pub leaf_points: Vec<Vec<Rat>>,
    /// structure constants and multiplicity of the expected dual target
    pub morphism_target: Option<(StructureConstants, usize)>,
}

/// Keep the named coordinates of `vars` except those in `dropped`, in order.
fn drop_vars(vars: &Vars, dropped: &[usize]) -> Vars {
    let names: Vec<String> = vars
        .names()
        .iter()
        .enumerate()
        .filter(|(i, _)| !dropped.contains(i))
        .map(|(_, n)| n.clone())
        .collect();
    Vars::named(&names)
}

/// The projection dropping the given coordinates and the section that
/// re-inserts them as zeros.
fn drop_quotient(vars: &Vars, dropped: &[usize]) -> QuotientModel {
    let reduced = drop_vars(vars, dropped);
    let pi = PolyMap::new(
        vars,
        &reduced,
        (0..vars.len())
            .filter(|i| !dropped.contains(i))
            .map(|i| Poly::var(vars, i))
            .collect(),
    );
    let mut kept = Vec::new();
    for i in 0..vars.len() {
        if !dropped.contains(&i) {
            kept.push(i);
        }
    }
    let sigma = PolyMap::new(
        &reduced,
        vars,
        (0..vars.len())
            .map(|i| match kept.iter().position(|&kk| kk == i) {
                Some(pos) => Poly::var(&reduced, pos),
                None => Poly::zero(&reduced),
            })
            .collect(),
    );
    QuotientModel { pi, sigma }
}

/// The lifted translation along one base axis of the covelocity space:
/// the generator is the base translation, the moment map collects the
/// conjugate fibre coordinates, and level zero kills those fibres.
pub fn cotangent_translation(nq: usize, k: usize, axis: usize, plan: &SamplePlan) -> ReductionSetup {
    assert!(axis < nq);
    let form = covelocities(nq, k);
    let vars = form.vars().clone();
    let n = vars.len();
    let pp = from_polysymplectic(&form, plan).expect("covelocity form is valid");
    // action: translation of q_axis, trivial coadjoint representation
    let family_vars = {
        let mut names = vars.names().to_vec();
        names.push("s".to_string());
        Vars::named(&names)
    };
    let mut family_comps: Vec<Poly> = (0..n).map(|i| Poly::var(&family_vars, i)).collect();
    family_comps[axis] = &family_comps[axis] + &Poly::var(&family_vars, n);
    let action = ActionData {
        group_dim: 1,
        generators: vec![VectorField::coordinate(&vars, axis)],
        action_family: Some(PolyMap::new(&family_vars, &vars, family_comps)),
        coadjoint_rep: Some(vec![vec![Poly::one(&family_vars)]]),
    };
    let quotient = drop_quotient(&vars, &[axis]);
    // moment: the conjugate fibre coordinates p{j}_axis
    let dual = direct_sum_vars(1, k);
    let moment = MomentData {
        j: PolyMap::new(
            &vars,
            &dual,
            (0..k).map(|j| Poly::var(&vars, nq + j * nq + axis)).collect(),
        ),
    };
    // level zero: drop the conjugate fibres, then quotient the base axis
    let fibre_axes: Vec<usize> = (0..k).map(|j| nq + j * nq + axis).collect();
    let level_params = drop_vars(&vars, &fibre_axes);
    let kept: Vec<usize> = (0..n).filter(|i| !fibre_axes.contains(i)).collect();
    let psi = PolyMap::new(
        &level_params,
        &vars,
        (0..n)
            .map(|i| match kept.iter().position(|&kk| kk == i) {
                Some(pos) => Poly::var(&level_params, pos),
                None => Poly::zero(&level_params),
            })
            .collect(),
    );
    let residual_axis = kept.iter().position(|&kk| kk == axis).expect("axis survives");
    let level = LevelSetModel {
        zeta: vec![Rat::zero(); k],
        psi,
        residual_generators: vec![VectorField::coordinate(&level_params, residual_axis)],
        residual_quotient: drop_quotient(&level_params, &[residual_axis]),
        plan: plan.clone(),
    };
    let into_quotient = quotient
        .pi
        .after(&level.psi.after(&level.residual_quotient.sigma));
    let leaf_points = vec![
        vec![rat(1); n - k - 1],
        (0..n - k - 1).map(|i| rat(i as i64 - 2)).collect(),
        (0..n - k - 1).map(|i| rat(2 * i as i64 + 1)).collect(),
    ];
    ReductionSetup {
        form,
        pp,
        action,
        quotient,
        moment,
        level,
        invariant_frame: None,
        into_quotient,
        leaf_points,
        morphism_target: Some((StructureConstants::abelian(1), k)),
    }
}

/// The multiplication action of a nilpotent group on its k-fold
/// covelocity space, in the chart where the dual block is the left
/// momentum: the action `(g, zeta) -> (g h^-1, Ad*_h zeta)` has vertical
/// bundle the right-invariant frame directions, its moment map is minus
/// the dual projection, and the quotient map is the diagonal coadjoint
/// evaluation, which lands exactly on the direct-sum structure of the
/// dual. A generic level reduces to a coadjoint orbit.
pub fn nilpotent_group_reduction(
    sc: &StructureConstants,
    k: usize,
    level_value: Vec<Rat>,
    residual_axes: Vec<usize>,
    plan: &SamplePlan,
) -> Result<ReductionSetup> {
    let group = NilpotentGroup::new(sc.clone())?;
    let m = group.dim();
    let model = crate::groupoid::build_coadjoint_model(sc, k, plan)?;
    let vars = model.chart.arrow.clone();
    let form = PolySympForm::new(model.omega.clone());
    let pp = from_polysymplectic(&form, plan)?;
    let g_idx: Vec<usize> = (0..m).collect();

    // generators: minus the left-invariant frame in the group block plus
    // the diagonal coadjoint fields on the dual block
    let lframe = group.left_invariant_frame(&vars, &g_idx);
    let rframe = group.right_invariant_frame(&vars, &g_idx);
    let mut generators = Vec::with_capacity(m);
    for a in 0..m {
        let mut comps = vec![Poly::zero(&vars); vars.len()];
        for i in 0..m {
            comps[i] = -&lframe[i][a];
        }
        // dual block: <ad*_{e_a} zeta_j, e_l> = -c[a][l]^b z_{j,b}
        for j in 0..k {
            for l in 0..m {
                let mut acc = Poly::zero(&vars);
                for b in 0..m {
                    let c = sc.constant(a, l, b);
                    if !c.is_zero() {
                        acc = &acc + &Poly::var(&vars, m + j * m + b).scale(&(-c.clone()));
                    }
                }
                comps[m + j * m + l] = acc;
            }
        }
        generators.push(VectorField::new(&vars, comps));
    }
    // the action family: (g, zeta; h) -> (g h^-1, Ad*_h zeta)
    let mut fam_names = vars.names().to_vec();
    fam_names.extend((1..=m).map(|i| format!("h{i}")));
    let fam_vars = Vars::named(&fam_names);
    let h_idx: Vec<usize> = (vars.len()..vars.len() + m).collect();
    let (scratch_law, xs, ys) = {
        let names: Vec<String> = (0..2 * m)
            .map(|i| if i < m { format!("sa{i}") } else { format!("sb{}", i - m) })
            .collect();
        let sv = Vars::named(&names);
        let xs: Vec<usize> = (0..m).collect();
        let ys: Vec<usize> = (m..2 * m).collect();
        (group.multiply(&sv, &xs, &ys), xs, ys)
    };
    let _ = (xs, ys);
    let mut law_args: Vec<Poly> = (0..m).map(|i| Poly::var(&fam_vars, i)).collect();
    law_args.extend(h_idx.iter().map(|&i| -&Poly::var(&fam_vars, i)));
    let mut fam_comps: Vec<Poly> = scratch_law
        .iter()
        .map(|c| c.compose(&law_args, &fam_vars))
        .collect();
    let coad_h = group.coadjoint_matrix(&fam_vars, &h_idx);
    for j in 0..k {
        for l in 0..m {
            let mut acc = Poly::zero(&fam_vars);
            for a in 0..m {
                if !coad_h[l][a].is_zero() {
                    acc = &acc + &(&coad_h[l][a] * &Poly::var(&fam_vars, m + j * m + a));
                }
            }
            fam_comps.push(acc);
        }
    }
    let action = ActionData {
        group_dim: m,
        generators,
        action_family: Some(PolyMap::new(&fam_vars, &vars, fam_comps)),
        coadjoint_rep: Some(coad_h),
    };

    // quotient: the target-type map (g, zeta) -> Ad*_g zeta; the section
    // re-inserts the group identity
    let dual = direct_sum_vars(m, k);
    let coad_g = group.coadjoint_matrix(&vars, &g_idx);
    let mut pi_comps = Vec::with_capacity(k * m);
    for j in 0..k {
        for l in 0..m {
            let mut acc = Poly::zero(&vars);
            for a in 0..m {
                if !coad_g[l][a].is_zero() {
                    acc = &acc + &(&coad_g[l][a] * &Poly::var(&vars, m + j * m + a));
                }
            }
            pi_comps.push(acc);
        }
    }
    let quotient = QuotientModel {
        pi: PolyMap::new(&vars, &dual, pi_comps),
        sigma: PolyMap::new(
            &dual,
            &vars,
            (0..m)
                .map(|_| Poly::zero(&dual))
                .chain((0..k * m).map(|i| Poly::var(&dual, i)))
                .collect(),
        ),
    };
    // invariant intersection frame: contractions with the right-invariant
    // frame fields in the group block
    let mut invariant_frame = Vec::with_capacity(m);
    for a in 0..m {
        let mut comps = vec![Poly::zero(&vars); vars.len()];
        for i in 0..m {
            comps[i] = rframe[i][a].clone();
        }
        let field = VectorField::new(&vars, comps);
        invariant_frame.push(CoSection::new(interior(&field, form.omega())));
    }

    // moment: minus the dual projection
    let moment = MomentData {
        j: PolyMap::new(
            &vars,
            &dual,
            (m..vars.len()).map(|i| -&Poly::var(&vars, i)).collect(),
        ),
    };
    // the level at the given value: parameters are the group coordinates,
    // the dual block is pinned at minus the value
    let params = Vars::named(&(1..=m).map(|i| format!("g{i}")).collect::<Vec<_>>());
    let psi = PolyMap::new(
        &params,
        &vars,
        (0..m)
            .map(|i| Poly::var(&params, i))
            .chain(level_value.iter().map(|z| Poly::constant(&params, -z.clone())))
            .collect(),
    );
    let lframe_params = group.left_invariant_frame(&params, &(0..m).collect::<Vec<_>>());
    let residual_generators: Vec<VectorField> = residual_axes
        .iter()
        .map(|&a| {
            let comps: Vec<Poly> = (0..m).map(|i| -&lframe_params[i][a]).collect();
            VectorField::new(&params, comps)
        })
        .collect();
    let level = LevelSetModel {
        zeta: level_value,
        psi,
        residual_generators,
        residual_quotient: drop_quotient(&params, &residual_axes),
        plan: plan.clone(),
    };
    let into_quotient = quotient
        .pi
        .after(&level.psi.after(&level.residual_quotient.sigma));
    let leaf_dim = m - residual_axes.len();
    let leaf_points = vec![
        vec![rat(1); leaf_dim],
        (0..leaf_dim).map(|i| rat(i as i64 - 3)).collect(),
        (0..leaf_dim).map(|i| rat(2 * i as i64 + 1)).collect(),
    ];
    Ok(ReductionSetup {
        form,
        pp,
        action,
        quotient,
        moment,
        level,
        invariant_frame: Some(invariant_frame),
        into_quotient,
        leaf_points,
        morphism_target: Some((sc.clone(), k)),
    })
}

/// Two symplectic planes with commuting translations: the zero level is a
/// product of two full fibres, so the reduced space is a point.
pub fn product_two_planes(plan: &SamplePlan) -> ReductionSetup {
    let vars = Vars::named(&["x1", "y1", "x2", "y2"]);
    let one = Poly::one(&vars);
    let form = PolySympForm::new(crate::cartan::KForm::from_terms(
        &vars,
        2,
        2,
        [
            (0, vec![0, 1], one.clone()),
            (1, vec![2, 3], one.clone()),
        ],
    ));
    let pp = from_polysymplectic(&form, plan).expect("product form is valid");
    let action = ActionData::translations(&vars, &[0, 2]);
    let quotient = drop_quotient(&vars, &[0, 2]);
    let dual = direct_sum_vars(2, 2);
    // J(m) = ((J_1, 0), (0, J_2)) with J_j the factor moments y_j
    let moment = MomentData {
        j: PolyMap::new(
            &vars,
            &dual,
            vec![
                Poly::var(&vars, 1),
                Poly::zero(&vars),
                Poly::zero(&vars),
                Poly::var(&vars, 3),
            ],
        ),
    };
    let params = Vars::named(&["u1", "u2"]);
    let psi = PolyMap::new(
        &params,
        &vars,
        vec![
            Poly::var(&params, 0),
            Poly::zero(&params),
            Poly::var(&params, 1),
            Poly::zero(&params),
        ],
    );
    let level = LevelSetModel {
        zeta: vec![Rat::zero(); 4],
        psi,
        residual_generators: vec![
            VectorField::coordinate(&params, 0),
            VectorField::coordinate(&params, 1),
        ],
        residual_quotient: drop_quotient(&params, &[0, 1]),
        plan: plan.clone(),
    };
    let into_quotient = quotient
        .pi
        .after(&level.psi.after(&level.residual_quotient.sigma));
    ReductionSetup {
        form,
        pp,
        action,
        quotient,
        moment,
        level,
        invariant_frame: None,
        into_quotient,
        leaf_points: Vec::new(),
        morphism_target: None,
    }
}

/// A two-slot form whose zero level is isotropic beyond the orbit
/// directions: the reduced form collapses, so the kernel criterion and the
/// nondegeneracy verdicts fail (and the action is not reducible).
pub fn degenerate_level(plan: &SamplePlan) -> ReductionSetup {
    let vars = Vars::named(&["q", "p", "a", "b"]);
    let one = Poly::one(&vars);
    let form = PolySympForm::new(crate::cartan::KForm::from_terms(
        &vars,
        2,
        2,
        [
            (0, vec![0, 1], one.clone()),
            (0, vec![2, 3], one.clone()),
            (1, vec![0, 3], one.clone()),
            (1, vec![1, 2], one.clone()),
        ],
    ));
    let pp = from_polysymplectic(&form, plan).expect("the form itself is valid");
    let action = ActionData::translations(&vars, &[0]);
    let quotient = drop_quotient(&vars, &[0]);
    let dual = direct_sum_vars(1, 2);
    let moment = MomentData {
        j: PolyMap::new(&vars, &dual, vec![Poly::var(&vars, 1), Poly::var(&vars, 3)]),
    };
    let params = Vars::named(&["u1", "u2"]);
    let psi = PolyMap::new(
        &params,
        &vars,
        vec![
            Poly::var(&params, 0),
            Poly::zero(&params),
            Poly::var(&params, 1),
            Poly::zero(&params),
        ],
    );
    let level = LevelSetModel {
        zeta: vec![Rat::zero(); 2],
        psi,
        residual_generators: vec![VectorField::coordinate(&params, 0)],
        residual_quotient: drop_quotient(&params, &[0]),
        plan: plan.clone(),
    };
    let into_quotient = quotient
        .pi
        .after(&level.psi.after(&level.residual_quotient.sigma));
    ReductionSetup {
        form,
        pp,
        action,
        quotient,
        moment,
        level,
        invariant_frame: None,
        into_quotient,
        leaf_points: Vec::new(),
        morphism_target: None,
    }
}

/// A groupoid model together with everything its reduction needs.
pub struct GroupoidReductionSetup {
    pub model: GroupoidModel,
    pub lifted: ActionData,
    pub j_groupoid: MomentData,
    pub data: GroupoidReductionData,
}

/// Reduction of the covelocity groupoid by a lifted base translation.
pub fn covelocity_translation_groupoid(
    nq: usize,
    k: usize,
    axis: usize,
    plan: &SamplePlan,
) -> GroupoidReductionSetup {
    assert!(nq >= 2 && axis < nq);
    let model = build_covelocity_model(nq, k, plan);
    let arrow = model.chart.arrow.clone();
    let base = model.chart.base.clone();
    let n = arrow.len();
    let lifted = ActionData::translations(&arrow, &[axis]);
    let dual = direct_sum_vars(1, k);
    let j_groupoid = MomentData {
        j: PolyMap::new(
            &arrow,
            &dual,
            (0..k).map(|j| Poly::var(&arrow, nq + j * nq + axis)).collect(),
        ),
    };
    let fibre_axes: Vec<usize> = (0..k).map(|j| nq + j * nq + axis).collect();
    let level_params = drop_vars(&arrow, &fibre_axes);
    let kept: Vec<usize> = (0..n).filter(|i| !fibre_axes.contains(i)).collect();
    let psi = PolyMap::new(
        &level_params,
        &arrow,
        (0..n)
            .map(|i| match kept.iter().position(|&kk| kk == i) {
                Some(pos) => Poly::var(&level_params, pos),
                None => Poly::zero(&level_params),
            })
            .collect(),
    );
    let arrow_retract = PolyMap::new(
        &arrow,
        &level_params,
        kept.iter().map(|&i| Poly::var(&arrow, i)).collect(),
    );
    let residual_axis = kept.iter().position(|&kk| kk == axis).expect("axis survives");
    let lsm = LevelSetModel {
        zeta: vec![Rat::zero(); k],
        psi,
        residual_generators: vec![VectorField::coordinate(&level_params, residual_axis)],
        residual_quotient: drop_quotient(&level_params, &[residual_axis]),
        plan: plan.clone(),
    };
    let base_action = ActionData::translations(&base, &[axis]);
    let base_quotient = drop_quotient(&base, &[axis]);
    // reduced composable chart: the covelocity composable chart one base
    // dimension down; lift by inserting zeros at the dropped axes
    let reduced_model_shape = build_covelocity_model(nq - 1, k, plan);
    let reduced_comp = reduced_model_shape.chart.comp.clone();
    let comp = model.chart.comp.clone();
    // comp layout: (q, u-block, w-block); dropped indices in comp terms
    let mut dropped_comp: Vec<usize> = vec![axis];
    for j in 0..k {
        dropped_comp.push(nq + j * nq + axis); // u block
    }
    for j in 0..k {
        dropped_comp.push(nq + k * nq + j * nq + axis); // w block
    }
    let kept_comp: Vec<usize> = (0..comp.len()).filter(|i| !dropped_comp.contains(i)).collect();
    assert_eq!(kept_comp.len(), reduced_comp.len());
    let comp_lift = PolyMap::new(
        &reduced_comp,
        &comp,
        (0..comp.len())
            .map(|i| match kept_comp.iter().position(|&kk| kk == i) {
                Some(pos) => Poly::var(&reduced_comp, pos),
                None => Poly::zero(&reduced_comp),
            })
            .collect(),
    );
    GroupoidReductionSetup {
        model,
        lifted,
        j_groupoid,
        data: GroupoidReductionData {
            lsm,
            arrow_retract,
            base_action,
            base_quotient,
            reduced_comp,
            comp_lift,
            invariant_frame: None,
        },
    }
}

/// Reduction of the pair groupoid of a two-slot plane by the diagonal
/// lift of a base translation, with the difference moment map.
pub fn pair_translation_groupoid(plan: &SamplePlan) -> Result<GroupoidReductionSetup> {
    let base = Vars::named(&["x", "y"]);
    let one = Poly::one(&base);
    let form = PolySympForm::new(crate::cartan::KForm::from_terms(
        &base,
        2,
        2,
        [
            (0, vec![0, 1], one.clone()),
            (1, vec![0, 1], one.scale(&rat(2))),
        ],
    ));
    let model = build_pair_model(&form, plan)?;
    let arrow = model.chart.arrow.clone(); // (l_x, l_y, r_x, r_y)
    let diag = VectorField::new(
        &arrow,
        vec![
            Poly::one(&arrow),
            Poly::zero(&arrow),
            Poly::one(&arrow),
            Poly::zero(&arrow),
        ],
    );
    let lifted = ActionData {
        group_dim: 1,
        generators: vec![diag],
        action_family: None,
        coadjoint_rep: None,
    };
    // J = t*J0 - s*J0 with J0 = (y, 2y)
    let dual = direct_sum_vars(1, 2);
    let ly = Poly::var(&arrow, 1);
    let ry = Poly::var(&arrow, 3);
    let j_groupoid = MomentData {
        j: PolyMap::new(
            &arrow,
            &dual,
            vec![&ly - &ry, (&ly - &ry).scale(&rat(2))],
        ),
    };
    // level zero: l_y = r_y, parametrized by (u1, u2, u3) = (l_x, r_x, y)
    let params = Vars::named(&["u1", "u2", "u3"]);
    let psi = PolyMap::new(
        &params,
        &arrow,
        vec![
            Poly::var(&params, 0),
            Poly::var(&params, 2),
            Poly::var(&params, 1),
            Poly::var(&params, 2),
        ],
    );
    let arrow_retract = PolyMap::new(
        &arrow,
        &params,
        vec![
            Poly::var(&arrow, 0),
            Poly::var(&arrow, 2),
            Poly::var(&arrow, 3),
        ],
    );
    // residual diagonal translation of (u1, u2); quotient to (u1 - u2, u3)
    let reduced_arrow = Vars::named(&["v1", "v2"]);
    let residual_quotient = QuotientModel {
        pi: PolyMap::new(
            &params,
            &reduced_arrow,
            vec![
                &Poly::var(&params, 0) - &Poly::var(&params, 1),
                Poly::var(&params, 2),
            ],
        ),
        sigma: PolyMap::new(
            &reduced_arrow,
            &params,
            vec![
                Poly::var(&reduced_arrow, 0),
                Poly::zero(&reduced_arrow),
                Poly::var(&reduced_arrow, 1),
            ],
        ),
    };
    let lsm = LevelSetModel {
        zeta: vec![Rat::zero(); 2],
        psi,
        residual_generators: vec![VectorField::new(
            &params,
            vec![Poly::one(&params), Poly::one(&params), Poly::zero(&params)],
        )],
        residual_quotient,
        plan: plan.clone(),
    };
    let base_action = ActionData::translations(&base, &[0]);
    let base_quotient = drop_quotient(&base, &[0]);
    // reduced composable chart (v1, w1, c) -> original triple chart
    let reduced_comp = Vars::named(&["cv1", "cw1", "cc"]);
    let comp = model.chart.comp.clone(); // (c1_x, c1_y, c2_x, c2_y, c3_x, c3_y)
    let v1 = Poly::var(&reduced_comp, 0);
    let w1 = Poly::var(&reduced_comp, 1);
    let cc = Poly::var(&reduced_comp, 2);
    let comp_lift = PolyMap::new(
        &reduced_comp,
        &comp,
        vec![
            &v1 + &w1,
            cc.clone(),
            w1.clone(),
            cc.clone(),
            Poly::zero(&reduced_comp),
            cc.clone(),
        ],
    );
    Ok(GroupoidReductionSetup {
        model,
        lifted,
        j_groupoid,
        data: GroupoidReductionData {
            lsm,
            arrow_retract,
            base_action,
            base_quotient,
            reduced_comp,
            comp_lift,
            invariant_frame: None,
        },
    })
}

/// The trivial group acting on the covelocity groupoid: reduction returns
/// a model isomorphic to the input.
pub fn trivial_group_groupoid(nq: usize, k: usize, plan: &SamplePlan) -> GroupoidReductionSetup {
    let model = build_covelocity_model(nq, k, plan);
    let arrow = model.chart.arrow.clone();
    let base = model.chart.base.clone();
    let dual = Vars::named::<&str>(&[]);
    let lifted = ActionData {
        group_dim: 0,
        generators: Vec::new(),
        action_family: None,
        coadjoint_rep: None,
    };
    let j_groupoid = MomentData {
        j: PolyMap::new(&arrow, &dual, Vec::new()),
    };
    let lsm = LevelSetModel {
        zeta: Vec::new(),
        psi: PolyMap::identity(&arrow),
        residual_generators: Vec::new(),
        residual_quotient: QuotientModel::identity(&arrow),
        plan: plan.clone(),
    };
    GroupoidReductionSetup {
        model: model.clone(),
        lifted,
        j_groupoid,
        data: GroupoidReductionData {
            lsm,
            arrow_retract: PolyMap::identity(&arrow),
            base_action: ActionData {
                group_dim: 0,
                generators: Vec::new(),
                action_family: None,
                coadjoint_rep: None,
            },
            base_quotient: QuotientModel::identity(&base),
            reduced_comp: model.chart.comp.clone(),
            comp_lift: PolyMap::identity(&model.chart.comp),
            invariant_frame: None,
        },
    }
}

/// The covelocity chart relabelling used to compare a reduced level with
/// the canonical form one dimension down.
pub fn covelocity_relabel(nq: usize, k: usize) -> Vars {
    covelocity_vars(nq, k)
}
