//! Cross-module fixture suites: the shared-foliation trio, the double
//! bundle invariants over every passing structure, and the moment-map
//! consequence identities.

use num_traits::Zero;

use polysym_core::avcourant::{extract, graph};
use polysym_core::cartan::{ext_d, interior, CoSection, KForm, VectorField};
use polysym_core::exact::{rat, Poly, SamplePlan, Vars};
use polysym_core::foliation::{distribution, leafwise_form_at};
use polysym_core::liealg::StructureConstants;
use polysym_core::polypoisson::{
    equivalent, from_polysymplectic, lie_poisson_direct_sum, PolyPoissonStruct,
};
use polysym_core::polysymp::covelocities;
use polysym_core::report::Verdict;

fn plan() -> SamplePlan {
    SamplePlan::new(7, 5, 5)
}

/// Three distinct structures on R^2 x R sharing the same underlying
/// distribution and leafwise data: the transverse slots are filled with
/// all, equal, or first-only covectors.
fn shared_foliation_trio() -> Vec<PolyPoissonStruct> {
    let v = Vars::named(&["x", "y", "t"]);
    let one = Poly::one(&v);
    let zero = Poly::zero(&v);
    let a_x = CoSection::from_grid(
        &v,
        vec![
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), one.scale(&rat(2)), zero.clone()],
        ],
    );
    let a_y = CoSection::from_grid(
        &v,
        vec![
            vec![-&one, zero.clone(), zero.clone()],
            vec![one.scale(&rat(-2)), zero.clone(), zero.clone()],
        ],
    );
    let dt_slot = |slots: &[usize]| {
        let mut grid = vec![vec![zero.clone(); 3]; 2];
        for &j in slots {
            grid[j][2] = one.clone();
        }
        CoSection::from_grid(&v, grid)
    };
    let ddx = VectorField::coordinate(&v, 0);
    let ddy = VectorField::coordinate(&v, 1);
    let z = VectorField::zero(&v);
    let s1 = PolyPoissonStruct::new(
        &v,
        2,
        vec![a_x.clone(), a_y.clone(), dt_slot(&[0]), dt_slot(&[1])],
        vec![ddx.clone(), ddy.clone(), z.clone(), z.clone()],
        plan(),
    )
    .unwrap();
    let s2 = PolyPoissonStruct::new(
        &v,
        2,
        vec![a_x.clone(), a_y.clone(), dt_slot(&[0, 1])],
        vec![ddx.clone(), ddy.clone(), z.clone()],
        plan(),
    )
    .unwrap();
    let s3 = PolyPoissonStruct::new(
        &v,
        2,
        vec![a_x, a_y, dt_slot(&[0])],
        vec![ddx, ddy, z],
        plan(),
    )
    .unwrap();
    vec![s1, s2, s3]
}

#[test]
fn trio_passes_and_shares_its_foliation() {
    let trio = shared_foliation_trio();
    for (i, s) in trio.iter().enumerate() {
        let rep = s.check_structure();
        assert!(rep.passed(), "structure {i}: {rep}");
    }
    // identical distributions and identical leafwise data at shared points
    let points = plan().sample_points(3).unwrap();
    let ranks: Vec<usize> = trio
        .iter()
        .map(|s| distribution(s).unwrap().0.generic_rank())
        .collect();
    assert_eq!(ranks, vec![2, 2, 2]);
    for p in &points {
        let leaves: Vec<_> = trio.iter().map(|s| leafwise_form_at(s, p).unwrap()).collect();
        for l in &leaves[1..] {
            assert_eq!(l.leaf_dim, leaves[0].leaf_dim);
            assert_eq!(l.basis, leaves[0].basis);
            assert_eq!(l.values, leaves[0].values);
        }
    }
    // yet they differ as structures
    assert_ne!(trio[0].rank(), trio[1].rank());
    assert!(!equivalent(&trio[1], &trio[2]));
    assert!(!equivalent(&trio[0], &trio[1]));
}

#[test]
fn graph_invariants_across_passing_structures() {
    let sc = StructureConstants::heisenberg();
    let structures = vec![
        from_polysymplectic(&covelocities(1, 1), &plan()).unwrap(),
        from_polysymplectic(&covelocities(2, 2), &plan()).unwrap(),
        lie_poisson_direct_sum(&sc, 2, &plan()).unwrap(),
        lie_poisson_direct_sum(&StructureConstants::so3(), 1, &plan()).unwrap(),
    ];
    for pp in &structures {
        let l = graph(pp).unwrap();
        let rep = l.classify();
        assert_eq!(rep.verdict_of("isotropic"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("involutive"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("relaxed"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("perp-tangent.trivial"), Some(Verdict::Pass));
        // round trip on the nose
        let back = extract(&l).unwrap();
        assert_eq!(back.frame(), pp.frame());
        assert_eq!(back.anchor(), pp.anchor());
    }
}

#[test]
fn flat_kernel_pointwise_on_passing_forms() {
    use polysym_core::exact::{numeric_rank, RMat};
    let forms = vec![covelocities(1, 2), covelocities(2, 2)];
    for form in &forms {
        assert!(form.is_polysymplectic(&plan()).passed());
        let flat = form.flat_matrix();
        let n = form.dim();
        for p in plan().sample_points(n).unwrap() {
            assert_eq!(numeric_rank(&flat, &p).unwrap(), n);
            let vals = flat.eval(&p).unwrap();
            assert!(RMat::new(vals).nullspace().is_empty());
        }
    }
}

#[test]
fn moment_contractions_are_closed() {
    // for a hamiltonian generator, i_u omega = d<J,u> forces the
    // contraction to be closed; assert it on the shipped setups
    use polysym_core::reduction::setups::{cotangent_translation, nilpotent_group_reduction};
    use polysym_core::reduction::check_moment;
    let setups = vec![
        cotangent_translation(2, 2, 0, &plan()),
        nilpotent_group_reduction(
            &StructureConstants::heisenberg(),
            2,
            vec![rat(0), rat(0), rat(1), rat(0), rat(0), rat(0)],
            vec![2],
            &plan(),
        )
        .unwrap(),
    ];
    for setup in &setups {
        assert!(check_moment(&setup.form, &setup.action, &setup.moment).passed());
        for gen in &setup.action.generators {
            let contraction = interior(gen, setup.form.omega());
            assert!(ext_d(&contraction).is_zero());
        }
    }
}

#[test]
fn covelocity_groupoid_moment_is_chart_morphism() {
    // additive moment maps of the shipped groupoid fixtures respect the
    // parametrized multiplication and vanish along units
    use polysym_core::reduction::setups::covelocity_translation_groupoid;
    let setup = covelocity_translation_groupoid(2, 2, 0, &plan());
    let j = &setup.j_groupoid.j;
    let chart = &setup.model.chart;
    let lhs = j.after(&chart.comp_m);
    let rhs: Vec<Poly> = j
        .after(&chart.comp_pr1)
        .comps()
        .iter()
        .zip(j.after(&chart.comp_pr2).comps())
        .map(|(a, b)| a + b)
        .collect();
    assert_eq!(lhs.comps(), &rhs[..]);
    assert!(j.after(&chart.unit).comps().iter().all(Poly::is_zero));
}

#[test]
fn weak_structure_from_constant_family() {
    // the transverse-zero structure passes the weak checker, fails the
    // full annihilator clause, and shares the trio's foliation
    let v = Vars::named(&["x", "y", "t"]);
    let one = Poly::one(&v);
    let zero = Poly::zero(&v);
    let a_x = CoSection::from_grid(
        &v,
        vec![
            vec![zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), one.scale(&rat(2)), zero.clone()],
        ],
    );
    let a_y = CoSection::from_grid(
        &v,
        vec![
            vec![-&one, zero.clone(), zero.clone()],
            vec![one.scale(&rat(-2)), zero.clone(), zero.clone()],
        ],
    );
    let s0 = PolyPoissonStruct::new(
        &v,
        2,
        vec![a_x, a_y],
        vec![VectorField::coordinate(&v, 0), VectorField::coordinate(&v, 1)],
        plan(),
    )
    .unwrap();
    assert!(s0.check_weak().passed());
    assert_eq!(
        s0.check_structure().verdict_of("annihilator.trivial"),
        Some(Verdict::Fail)
    );
    let trio = shared_foliation_trio();
    let p = vec![rat(1), rat(-2), rat(3)];
    let l0 = leafwise_form_at(&s0, &p).unwrap();
    let l1 = leafwise_form_at(&trio[0], &p).unwrap();
    assert_eq!(l0.values, l1.values);
}

#[test]
fn framed_reconstruction_recovers_the_maximal_structure() {
    // the scaled family on R^2 x R: reconstruction from the foliation
    // equals the all-transverse structure built over the same form
    use polysym_core::foliation::{structure_from_foliation, Distribution, ReconstructionMode};
    let v = Vars::named(&["x", "y", "t"]);
    let t = Poly::var(&v, 2);
    let c = &Poly::one(&v) + &(&t * &t);
    let om = KForm::from_terms(
        &v,
        2,
        2,
        [
            (0, vec![0, 1], c.clone()),
            (1, vec![0, 1], c.scale(&rat(2))),
        ],
    );
    let d = Distribution {
        vars: v.clone(),
        gens: vec![VectorField::coordinate(&v, 0), VectorField::coordinate(&v, 1)],
        plan: plan(),
    };
    let rec = structure_from_foliation(
        &d,
        &om,
        ReconstructionMode::Framed {
            complement: vec![VectorField::coordinate(&v, 2)],
        },
    )
    .unwrap();
    let got = rec.framed.unwrap();
    assert_eq!(got.rank(), 4);
    // maximal structure over the same family
    let one = Poly::one(&v);
    let zero = Poly::zero(&v);
    let a_x = CoSection::from_grid(
        &v,
        vec![
            vec![zero.clone(), c.clone(), zero.clone()],
            vec![zero.clone(), c.scale(&rat(2)), zero.clone()],
        ],
    );
    let a_y = CoSection::from_grid(
        &v,
        vec![
            vec![-&c, zero.clone(), zero.clone()],
            vec![c.scale(&rat(-2)), zero.clone(), zero.clone()],
        ],
    );
    let dt0 = CoSection::from_grid(
        &v,
        vec![
            vec![zero.clone(), zero.clone(), one.clone()],
            vec![zero.clone(), zero.clone(), zero.clone()],
        ],
    );
    let dt1 = CoSection::from_grid(
        &v,
        vec![
            vec![zero.clone(), zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), one.clone()],
        ],
    );
    let maximal = PolyPoissonStruct::new(
        &v,
        2,
        vec![a_x, a_y, dt0, dt1],
        vec![
            VectorField::coordinate(&v, 0),
            VectorField::coordinate(&v, 1),
            VectorField::zero(&v),
            VectorField::zero(&v),
        ],
        plan(),
    )
    .unwrap();
    assert!(maximal.check_structure().passed());
    assert!(equivalent(&got, &maximal));
}
