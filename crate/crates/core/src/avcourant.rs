//! The vector-valued Courant algebroid `TM (+) (+_k T*M)`: the R^k-valued
//! fibrewise pairing `<X(+)eta, Y(+)gamma> = i_X gamma + i_Y eta`, the
//! Dorfman-type bracket `[[X(+)eta, Y(+)gamma]] = [X,Y] (+) L_X gamma -
//! i_Y d eta`, orthogonals, and the subbundle classifier.
//!
//! Orthogonality is with respect to the full R^k-valued pairing: a section
//! is orthogonal to a subbundle only when every slot of the pairing
//! vanishes.

use num_traits::Zero;

use crate::cartan::{ext_d, interior, lie_bracket, lie_derivative, CoSection, VectorField};
use crate::error::{Error, Result};
use crate::exact::{
    generic_rank, numeric_rank, solve_membership, span_contained, span_intersection, Mat, Poly,
    Rat, RatFun, RMat, SamplePlan, Vars,
};
use crate::polypoisson::PolyPoissonStruct;
use crate::report::Report;

/// A section `X (+) eta` of the double bundle.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AVSection {
    pub x: VectorField,
    pub eta: CoSection,
}

impl AVSection {
    pub fn new(x: VectorField, eta: CoSection) -> Self {
        assert_eq!(x.vars(), eta.vars(), "tangent and cotangent parts on different charts");
        AVSection { x, eta }
    }

    pub fn vars(&self) -> &Vars {
        self.x.vars()
    }

    pub fn mult(&self) -> usize {
        self.eta.mult()
    }

    /// Flattened as `(X components, slot-major eta components)`.
    pub fn flatten(&self) -> Vec<Poly> {
        let mut v = self.x.comps().to_vec();
        v.extend(self.eta.flatten());
        v
    }

    pub fn eval(&self, point: &[Rat]) -> Vec<Rat> {
        self.flatten().iter().map(|p| p.eval(point)).collect()
    }

    pub fn scale(&self, f: &Poly) -> AVSection {
        AVSection {
            x: self.x.scale(f),
            eta: self.eta.scale(f),
        }
    }

    pub fn add(&self, other: &AVSection) -> AVSection {
        AVSection {
            x: self.x.add(&other.x),
            eta: self.eta.add(&other.eta),
        }
    }
}

/// The R^k-valued pairing of two sections.
pub fn pairing(v: &AVSection, w: &AVSection) -> Vec<Poly> {
    assert_eq!(v.vars(), w.vars());
    assert_eq!(v.mult(), w.mult());
    let a = w.eta.pair(&v.x);
    let b = v.eta.pair(&w.x);
    a.iter().zip(&b).map(|(p, q)| p + q).collect()
}

/// The Dorfman-type bracket.
pub fn dorfman(v: &AVSection, w: &AVSection) -> AVSection {
    assert_eq!(v.vars(), w.vars());
    assert_eq!(v.mult(), w.mult());
    let x = lie_bracket(&v.x, &w.x);
    let lie = lie_derivative(&v.x, w.eta.form());
    let corr = interior(&w.x, &ext_d(v.eta.form()));
    AVSection {
        x,
        eta: CoSection::new(lie.sub(&corr)),
    }
}

/// A subbundle presented by a frame of sections, of constant rank at the
/// sampled points.
#[derive(Clone, Debug)]
pub struct AVSubbundle {
    vars: Vars,
    mult: usize,
    frame: Vec<AVSection>,
    plan: SamplePlan,
}

impl AVSubbundle {
    pub fn new(vars: &Vars, mult: usize, frame: Vec<AVSection>, plan: SamplePlan) -> Result<Self> {
        for s in &frame {
            if s.vars() != vars || s.mult() != mult {
                return Err(Error::DimensionMismatch(
                    "section on a different chart or multiplicity".to_string(),
                ));
            }
        }
        let sub = AVSubbundle { vars: vars.clone(), mult, frame, plan };
        let r = sub.frame.len();
        if r > 0 {
            let m = sub.frame_row_matrix();
            let g = generic_rank(&m);
            if g != r {
                return Err(Error::Precondition(format!(
                    "frame is not free: generic rank {g} < {r}"
                )));
            }
            for p in sub.plan.sample_points(vars.len())? {
                let pr = numeric_rank(&m, &p).expect("polynomial frame");
                if pr != r {
                    return Err(Error::Precondition(format!(
                        "frame rank drops to {pr} at a sample point"
                    )));
                }
            }
        }
        Ok(sub)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    pub fn frame(&self) -> &[AVSection] {
        &self.frame
    }

    pub fn plan(&self) -> &SamplePlan {
        &self.plan
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    fn frame_row_matrix(&self) -> Mat {
        Mat::from_poly_rows(self.frame.iter().map(|s| s.flatten()).collect())
    }

    fn frame_col_matrix(&self) -> Mat {
        let flat: Vec<Vec<Poly>> = self.frame.iter().map(|s| s.flatten()).collect();
        let total = self.vars.len() * (1 + self.mult);
        Mat::from_poly_rows(
            (0..total)
                .map(|row| flat.iter().map(|f| f[row].clone()).collect())
                .collect(),
        )
    }

    /// Frame values at a point, as vectors in R^{n + k n}.
    pub fn values_at(&self, point: &[Rat]) -> Vec<Vec<Rat>> {
        self.frame.iter().map(|s| s.eval(point)).collect()
    }

    /// The matrix of the pairing with the frame at a point: row (a, j) pairs
    /// slot j against frame element a, columns index R^{n + k n}.
    fn pairing_rows_at(&self, point: &[Rat]) -> Vec<Vec<Rat>> {
        let n = self.vars.len();
        let k = self.mult;
        let mut rows = Vec::with_capacity(self.frame.len() * k);
        for s in &self.frame {
            let xv = s.x.eval(point);
            let grid = s.eta.grid();
            for j in 0..k {
                let mut row = vec![Rat::zero(); n * (1 + k)];
                // <w, s> slot j = gamma_j(X_s) + eta_s_j(Y)
                for i in 0..n {
                    row[i] = grid[j][i].eval(point); // Y coefficients
                }
                for i in 0..n {
                    row[n + j * n + i] = xv[i].clone(); // gamma_j coefficients
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Basis of the orthogonal complement at a sample-regular point.
    pub fn perp_at(&self, point: &[Rat]) -> Result<Vec<Vec<Rat>>> {
        let m = self.frame_row_matrix();
        let g = generic_rank(&m);
        let here = numeric_rank(&m, point).expect("polynomial frame");
        if here != g {
            return Err(Error::Precondition(format!(
                "frame rank drops to {here} at the requested point"
            )));
        }
        Ok(RMat::new(self.pairing_rows_at(point)).nullspace())
    }

    /// Express a section in the frame over the fraction field.
    pub fn express_in_frame(&self, target: &AVSection) -> Option<Vec<RatFun>> {
        let m = self.frame_col_matrix();
        let v: Vec<RatFun> = target.flatten().into_iter().map(RatFun::from_poly).collect();
        solve_membership(&m, &v)
    }

    /// The full classifier: exact isotropy and involutivity, and the
    /// rank-based clauses at every sample point.
    pub fn classify(&self) -> Report {
        let mut report = Report::new();
        let n = self.vars.len();
        let k = self.mult;
        let r = self.frame.len();

        // isotropic: all pairings vanish identically
        let mut iso = None;
        'iso: for a in 0..r {
            for b in a..r {
                let p = pairing(&self.frame[a], &self.frame[b]);
                for (j, comp) in p.iter().enumerate() {
                    if !comp.is_zero() {
                        iso = Some(format!(
                            "<v_{a}, v_{b}> slot {j} = {}",
                            comp.render()
                        ));
                        break 'iso;
                    }
                }
            }
        }
        report.assert_check("isotropic", iso.is_none(), || iso.unwrap());

        // involutive: brackets of frame pairs stay in the span
        let mut invol = None;
        let mut denomwarn: Option<String> = None;
        let points = self.plan.sample_points(n).unwrap_or_default();
        'inv: for a in 0..r {
            for b in a + 1..r {
                let d = dorfman(&self.frame[a], &self.frame[b]);
                let Some(coeffs) = self.express_in_frame(&d) else {
                    invol = Some(format!("[[v_{a}, v_{b}]] lies outside the span"));
                    break 'inv;
                };
                if denomwarn.is_none() {
                    for c in &coeffs {
                        if c.den().is_constant() {
                            continue;
                        }
                        for p in &points {
                            if c.den().eval(p).is_zero() {
                                denomwarn = Some(format!(
                                    "bracket coefficient denominator {} vanishes at a sample point",
                                    c.den().render()
                                ));
                                break;
                            }
                        }
                    }
                }
            }
        }
        report.assert_check("involutive", invol.is_none(), || invol.unwrap());
        if let Some(w) = denomwarn {
            report.warn("involutive.denominators", w);
        }

        // pointwise rank clauses
        let mut lagr = None;
        let mut relaxed = None;
        let mut tangent_trivial = None;
        let mut perp_tangent = None;
        let mut cotangent_trivial = None;
        for point in &points {
            let vals = self.values_at(point);
            let perp = RMat::new(self.pairing_rows_at(point)).nullspace();
            // lagrangian: L = L_perp
            if lagr.is_none() {
                let ok = perp.len() == r && span_contained(&vals, &perp);
                if !ok {
                    lagr = Some(format!(
                        "dim L = {r}, dim L-perp = {} at {}",
                        perp.len(),
                        render_point(point)
                    ));
                }
            }
            // relaxed: L = L_perp cap (L + TM)
            if relaxed.is_none() {
                let mut l_plus_tm = vals.clone();
                for i in 0..n {
                    let mut e = vec![Rat::zero(); n * (1 + k)];
                    e[i] = Rat::from_integer(1.into());
                    l_plus_tm.push(e);
                }
                let inter = span_intersection(&perp, &l_plus_tm);
                let ok = inter.len() == r && span_contained(&vals, &inter);
                if !ok {
                    relaxed = Some(format!(
                        "dim L-perp cap (L + TM) = {} vs dim L = {r} at {}",
                        inter.len(),
                        render_point(point)
                    ));
                }
            }
            // L cap TM = 0: the cotangent projection keeps full rank
            if tangent_trivial.is_none() {
                let cot: Vec<Vec<Rat>> = vals.iter().map(|v| v[n..].to_vec()).collect();
                if RMat::new(cot).rank() != r {
                    tangent_trivial = Some(format!(
                        "L meets TM at {}",
                        render_point(point)
                    ));
                }
            }
            // L-perp cap TM = 0: stacked cotangent parts pair injectively
            if perp_tangent.is_none() {
                let mut rows = Vec::new();
                for s in &self.frame {
                    for row in s.eta.grid() {
                        rows.push(row.iter().map(|c| c.eval(point)).collect::<Vec<Rat>>());
                    }
                }
                if RMat::new(rows).rank() != n {
                    perp_tangent = Some(format!(
                        "L-perp meets TM at {}",
                        render_point(point)
                    ));
                }
            }
            // L cap (+_k T*M) = 0: the tangent projection keeps full rank
            if cotangent_trivial.is_none() {
                let tan: Vec<Vec<Rat>> = vals.iter().map(|v| v[..n].to_vec()).collect();
                if RMat::new(tan).rank() != r {
                    cotangent_trivial = Some(format!(
                        "L meets the cotangent summand at {}",
                        render_point(point)
                    ));
                }
            }
        }
        report.assert_check("lagrangian", lagr.is_none(), || lagr.unwrap());
        report.assert_check("relaxed", relaxed.is_none(), || relaxed.unwrap());
        report.assert_check("tangent.trivial", tangent_trivial.is_none(), || {
            tangent_trivial.unwrap()
        });
        report.assert_check("perp-tangent.trivial", perp_tangent.is_none(), || {
            perp_tangent.unwrap()
        });
        report.assert_check("cotangent.trivial", cotangent_trivial.is_none(), || {
            cotangent_trivial.unwrap()
        });
        report
    }
}

/// The graph of a passing structure: frame `P(sigma_a) (+) sigma_a`.
pub fn graph(pp: &PolyPoissonStruct) -> Result<AVSubbundle> {
    let rep = pp.check_structure();
    if !rep.passed() {
        return Err(Error::CheckFailed(format!(
            "structure checker failed: {}",
            rep.first_failure().map(|c| c.name.clone()).unwrap_or_default()
        )));
    }
    let frame = pp
        .anchor()
        .iter()
        .zip(pp.frame())
        .map(|(x, s)| AVSection::new(x.clone(), s.clone()))
        .collect();
    AVSubbundle::new(pp.vars(), pp.mult(), frame, pp.plan().clone())
}

/// Recover a structure from a subbundle whose cotangent projection is
/// injective: the cosection parts frame the bundle and the tangent parts
/// are the anchors.
pub fn extract(l: &AVSubbundle) -> Result<PolyPoissonStruct> {
    let r = l.rank();
    let cot_rows: Vec<Vec<Poly>> = l.frame().iter().map(|s| s.eta.flatten()).collect();
    let g = generic_rank(&Mat::from_poly_rows(cot_rows));
    if g != r {
        return Err(Error::Precondition(format!(
            "cotangent projection drops rank ({g} < {r}): the subbundle meets TM"
        )));
    }
    let frame: Vec<CoSection> = l.frame().iter().map(|s| s.eta.clone()).collect();
    let anchor: Vec<VectorField> = l.frame().iter().map(|s| s.x.clone()).collect();
    PolyPoissonStruct::new(l.vars(), l.mult(), frame, anchor, l.plan().clone())
}

fn render_point(p: &[Rat]) -> String {
    let parts: Vec<String> = p.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::liealg::StructureConstants;
    use crate::polypoisson::{equivalent, from_polysymplectic, lie_poisson_direct_sum};
    use crate::polysymp::covelocities;
    use crate::report::Verdict;

    fn plan() -> SamplePlan {
        SamplePlan::new(7, 5, 5)
    }

    fn xy() -> Vars {
        Vars::named(&["x", "y"])
    }

    #[test]
    fn pairing_cases() {
        let v = xy();
        // tangent parts are isotropic
        let a = AVSection::new(VectorField::coordinate(&v, 0), CoSection::zero(&v, 2));
        let b = AVSection::new(VectorField::coordinate(&v, 1), CoSection::zero(&v, 2));
        assert!(pairing(&a, &b).iter().all(Poly::is_zero));
        // <d/dx (+) (dy, 0), d/dy (+) (0, dx)> = (1, 1)
        let s1 = AVSection::new(
            VectorField::coordinate(&v, 0),
            CoSection::from_grid(&v, vec![
                vec![Poly::zero(&v), Poly::one(&v)],
                vec![Poly::zero(&v), Poly::zero(&v)],
            ]),
        );
        let s2 = AVSection::new(
            VectorField::coordinate(&v, 1),
            CoSection::from_grid(&v, vec![
                vec![Poly::zero(&v), Poly::zero(&v)],
                vec![Poly::one(&v), Poly::zero(&v)],
            ]),
        );
        let p = pairing(&s1, &s2);
        assert_eq!(p[0], Poly::one(&v));
        assert_eq!(p[1], Poly::one(&v));
        // <v, v> for v = d/dx (+) (dx, 2dx) = (2, 4)
        let s3 = AVSection::new(
            VectorField::coordinate(&v, 0),
            CoSection::from_grid(&v, vec![
                vec![Poly::one(&v), Poly::zero(&v)],
                vec![Poly::constant(&v, rat(2)), Poly::zero(&v)],
            ]),
        );
        let p = pairing(&s3, &s3);
        assert_eq!(p[0], Poly::constant(&v, rat(2)));
        assert_eq!(p[1], Poly::constant(&v, rat(4)));
        // symmetry
        assert_eq!(pairing(&s1, &s2), pairing(&s2, &s1));
    }

    #[test]
    fn dorfman_cases() {
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        // coordinate fields with no forms commute
        let a = AVSection::new(VectorField::coordinate(&v, 0), CoSection::zero(&v, 2));
        let b = AVSection::new(VectorField::coordinate(&v, 1), CoSection::zero(&v, 2));
        let d = dorfman(&a, &b);
        assert!(d.x.is_zero() && d.eta.is_zero());
        // [[d/dx (+) (x dy, 0), d/dy (+) 0]] = 0 (+) (dx, 0)
        let s1 = AVSection::new(
            VectorField::coordinate(&v, 0),
            CoSection::from_grid(&v, vec![
                vec![Poly::zero(&v), x.clone()],
                vec![Poly::zero(&v), Poly::zero(&v)],
            ]),
        );
        let d = dorfman(&s1, &b);
        assert!(d.x.is_zero());
        let want = CoSection::from_grid(&v, vec![
            vec![Poly::one(&v), Poly::zero(&v)],
            vec![Poly::zero(&v), Poly::zero(&v)],
        ]);
        assert_eq!(d.eta, want);
        // [[v, v]] for v = d/dx (+) (y dx, 0) = 0 (+) (dy, 0)
        let s2 = AVSection::new(
            VectorField::coordinate(&v, 0),
            CoSection::from_grid(&v, vec![
                vec![y.clone(), Poly::zero(&v)],
                vec![Poly::zero(&v), Poly::zero(&v)],
            ]),
        );
        let d = dorfman(&s2, &s2);
        assert!(d.x.is_zero());
        let want = CoSection::from_grid(&v, vec![
            vec![Poly::zero(&v), Poly::one(&v)],
            vec![Poly::zero(&v), Poly::zero(&v)],
        ]);
        assert_eq!(d.eta, want);
    }

    #[test]
    fn dorfman_leibniz_rule() {
        // [[u, f v]] = f [[u, v]] + (X_u f) v on assorted sections
        let v = xy();
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        let u = AVSection::new(
            VectorField::new(&v, vec![y.clone(), x.clone()]),
            CoSection::from_grid(&v, vec![
                vec![x.clone(), Poly::zero(&v)],
                vec![Poly::zero(&v), y.clone()],
            ]),
        );
        let w = AVSection::new(
            VectorField::new(&v, vec![&x * &x, Poly::one(&v)]),
            CoSection::from_grid(&v, vec![
                vec![Poly::zero(&v), &x * &y],
                vec![Poly::one(&v), Poly::zero(&v)],
            ]),
        );
        let f = &(&x * &y) + &Poly::one(&v);
        let lhs = dorfman(&u, &w.scale(&f));
        let term1 = dorfman(&u, &w).scale(&f);
        let xf = u.x.apply(&f);
        let term2 = w.scale(&xf);
        let rhs = term1.add(&term2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn symplectic_graph_is_lagrangian() {
        let pp = from_polysymplectic(&covelocities(1, 1), &plan()).unwrap();
        let l = graph(&pp).unwrap();
        let rep = l.classify();
        assert_eq!(rep.verdict_of("isotropic"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("lagrangian"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("relaxed"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("tangent.trivial"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("perp-tangent.trivial"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("cotangent.trivial"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("involutive"), Some(Verdict::Pass));
        // perp at a point literally equals the graph
        let point = vec![rat(1), rat(2)];
        let perp = l.perp_at(&point).unwrap();
        assert_eq!(perp.len(), 2);
        assert!(span_contained(&perp, &l.values_at(&point)));
    }

    #[test]
    fn tangent_bundle_classification() {
        // L = TM (+) 0 with k = 1
        let v = xy();
        let frame = vec![
            AVSection::new(VectorField::coordinate(&v, 0), CoSection::zero(&v, 1)),
            AVSection::new(VectorField::coordinate(&v, 1), CoSection::zero(&v, 1)),
        ];
        let l = AVSubbundle::new(&v, 1, frame, plan()).unwrap();
        let rep = l.classify();
        assert_eq!(rep.verdict_of("isotropic"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("involutive"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("tangent.trivial"), Some(Verdict::Fail));
        assert_eq!(rep.verdict_of("perp-tangent.trivial"), Some(Verdict::Fail));
        // for k = 1 the lagrangian and relaxed verdicts coincide
        assert_eq!(rep.verdict_of("lagrangian"), rep.verdict_of("relaxed"));
        // extraction must refuse: the cotangent projection collapses
        assert!(extract(&l).is_err());
    }

    #[test]
    fn direct_sum_graph_is_properly_isotropic() {
        let pp = lie_poisson_direct_sum(&StructureConstants::heisenberg(), 2, &plan()).unwrap();
        let l = graph(&pp).unwrap();
        let rep = l.classify();
        assert_eq!(rep.verdict_of("isotropic"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("involutive"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("relaxed"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("perp-tangent.trivial"), Some(Verdict::Pass));
        assert_eq!(rep.verdict_of("lagrangian"), Some(Verdict::Fail));
        // at zeta = 0 the orthogonal contains the whole cotangent summand
        let zero = vec![rat(0); 6];
        let perp = l.perp_at(&zero).unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(perp.len(), 12);
        let mut cot_basis = Vec::new();
        for i in 0..12 {
            let mut e = vec![rat(0); 18];
            e[6 + i] = rat(1);
            cot_basis.push(e);
        }
        assert!(span_contained(&cot_basis, &perp));
    }

    #[test]
    fn k1_lagrangian_equals_relaxed_on_fixtures() {
        let fixtures: Vec<AVSubbundle> = vec![
            graph(&from_polysymplectic(&covelocities(1, 1), &plan()).unwrap()).unwrap(),
            graph(&lie_poisson_direct_sum(&StructureConstants::heisenberg(), 1, &plan()).unwrap())
                .unwrap(),
        ];
        for l in fixtures {
            let rep = l.classify();
            assert_eq!(rep.verdict_of("lagrangian"), rep.verdict_of("relaxed"));
            assert_eq!(rep.verdict_of("lagrangian"), Some(Verdict::Pass));
        }
    }

    #[test]
    fn graph_extract_roundtrip() {
        let pp = lie_poisson_direct_sum(&StructureConstants::heisenberg(), 2, &plan()).unwrap();
        let l = graph(&pp).unwrap();
        let back = extract(&l).unwrap();
        // fields are identical, not merely equivalent
        assert_eq!(back.frame(), pp.frame());
        assert_eq!(back.anchor(), pp.anchor());
        assert!(equivalent(&back, &pp));
        // graph of the extraction spans the same subbundle pointwise
        let l2 = graph(&back).unwrap();
        for p in plan().sample_points(6).unwrap() {
            let a = l.values_at(&p);
            let b = l2.values_at(&p);
            assert!(span_contained(&a, &b) && span_contained(&b, &a));
        }
    }

    #[test]
    fn graph_of_trivial_structure_is_cotangent_bundle() {
        let v = xy();
        let mut frame = Vec::new();
        for j in 0..2 {
            for i in 0..2 {
                let mut grid = vec![vec![Poly::zero(&v); 2]; 2];
                grid[j][i] = Poly::one(&v);
                frame.push(CoSection::from_grid(&v, grid));
            }
        }
        let pp = PolyPoissonStruct::new(&v, 2, frame, vec![VectorField::zero(&v); 4], plan()).unwrap();
        let l = graph(&pp).unwrap();
        for s in l.frame() {
            assert!(s.x.is_zero());
        }
        assert_eq!(l.rank(), 4);
    }
}
