//! Vector-valued symplectic forms: the flat map, the validity checker
//! (closed plus trivial joint kernel), products, and the covelocity model.

use crate::cartan::{ext_d, interior, CoSection, KForm, PolyMap, VectorField};
use crate::error::{Error, Result};
use crate::exact::{generic_rank, numeric_rank, Mat, SamplePlan, Vars};
use crate::report::Report;

/// A candidate poly-symplectic form: an R^k-valued 2-form. Validity is
/// established by [`PolySympForm::is_polysymplectic`], never assumed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySympForm {
    omega: KForm,
}

impl PolySympForm {
    pub fn new(omega: KForm) -> Self {
        assert_eq!(omega.degree(), 2, "a poly-symplectic candidate has degree 2");
        PolySympForm { omega }
    }

    pub fn omega(&self) -> &KForm {
        &self.omega
    }

    pub fn vars(&self) -> &Vars {
        self.omega.vars()
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn mult(&self) -> usize {
        self.omega.mult()
    }

    /// The contraction `i_{d/dx_i} omega` as a cosection.
    pub fn flat_of_coordinate(&self, i: usize) -> CoSection {
        CoSection::new(interior(
            &VectorField::coordinate(self.vars(), i),
            &self.omega,
        ))
    }

    /// Matrix of the flat map `TM -> (+_k) T*M` in coordinate frames:
    /// column i is the slot-major flattening of `i_{d/dx_i} omega`, so the
    /// kernel at a point is the joint kernel of the components there.
    pub fn flat_matrix(&self) -> Mat {
        let n = self.dim();
        let k = self.mult();
        let cols: Vec<Vec<crate::exact::Poly>> =
            (0..n).map(|i| self.flat_of_coordinate(i).flatten()).collect();
        Mat::from_poly_rows(
            (0..k * n)
                .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
                .collect(),
        )
    }

    /// PASS iff the form is exactly closed, the flat matrix has generic rank
    /// n, and the pointwise rank stays n at every sample point.
    pub fn is_polysymplectic(&self, plan: &SamplePlan) -> Report {
        let mut report = Report::new();
        let n = self.dim();
        let d = ext_d(&self.omega);
        report.assert_check("closed", d.is_zero(), || format!("d(omega) = {}", d.render()));
        let flat = self.flat_matrix();
        let grank = generic_rank(&flat);
        report.assert_check("nondegenerate.generic", grank == n, || {
            format!("generic rank {grank} < {n}")
        });
        if grank == n && n > 0 {
            match plan.sample_points(n) {
                Ok(points) => {
                    let mut bad = None;
                    for p in &points {
                        let r = numeric_rank(&flat, p).expect("polynomial matrix has no poles");
                        if r != n {
                            bad = Some((p.clone(), r));
                            break;
                        }
                    }
                    report.assert_check("nondegenerate.pointwise", bad.is_none(), || {
                        let (p, r) = bad.unwrap();
                        format!("rank {r} < {n} at {}", render_point(&p))
                    });
                }
                Err(e) => report.push(
                    "nondegenerate.pointwise",
                    crate::report::Verdict::Error,
                    Some(e.to_string()),
                ),
            }
        } else if n == 0 {
            report.pass("nondegenerate.pointwise");
        }
        report
    }

    /// Concatenate pulled-back factors into one form on the total chart.
    /// Only dimension mismatches error here; validity of the output is
    /// re-checked by `is_polysymplectic`, not assumed.
    pub fn product(total: &Vars, factors: &[(PolySympForm, PolyMap)]) -> Result<PolySympForm> {
        let mut pulled = Vec::new();
        for (form, proj) in factors {
            if proj.domain() != total {
                return Err(Error::DimensionMismatch(format!(
                    "projection domain {:?} is not the total chart {:?}",
                    proj.domain(),
                    total
                )));
            }
            if proj.codomain() != form.vars() {
                return Err(Error::DimensionMismatch(format!(
                    "projection codomain {:?} does not match the factor chart {:?}",
                    proj.codomain(),
                    form.vars()
                )));
            }
            pulled.push(crate::cartan::pullback(proj, form.omega()));
        }
        if pulled.is_empty() {
            return Err(Error::DimensionMismatch("empty factor list".to_string()));
        }
        Ok(PolySympForm::new(KForm::concat_slots(&pulled)))
    }
}

/// The covelocity chart: coordinates `(q_1..q_nq, p1_1..p1_nq, ..., pk_*)`.
pub fn covelocity_vars(nq: usize, k: usize) -> Vars {
    let mut names: Vec<String> = (1..=nq).map(|i| format!("q{i}")).collect();
    for j in 1..=k {
        for i in 1..=nq {
            names.push(format!("p{j}_{i}"));
        }
    }
    Vars::named(&names)
}

/// The canonical form on the k-fold covelocity space of R^nq: component j
/// is `sum_i dq_i ^ dp{j}_i`.
pub fn covelocities(nq: usize, k: usize) -> PolySympForm {
    assert!(nq >= 1 && k >= 1);
    let vars = covelocity_vars(nq, k);
    let mut terms = Vec::new();
    for j in 0..k {
        for i in 0..nq {
            let p_idx = nq + j * nq + i;
            terms.push((j, vec![i, p_idx], crate::exact::Poly::one(&vars)));
        }
    }
    PolySympForm::new(KForm::from_terms(&vars, 2, k, terms))
}

fn render_point(p: &[crate::exact::Rat]) -> String {
    let parts: Vec<String> = p.iter().map(|r| r.to_string()).collect();
    format!("({})", parts.join(", "))
}
