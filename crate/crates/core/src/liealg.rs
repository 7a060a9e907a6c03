//! Lie algebra structure constants and polynomial charts for nilpotent
//! groups: exponential coordinates, the group law, adjoint and coadjoint
//! matrices, invariant frames and the right Maurer-Cartan form.
//!
//! Sign conventions: the group coadjoint action is the left action
//! `<Ad*_g zeta, v> = <zeta, Ad_{g^-1} v>`; its infinitesimal version is
//! `<ad*_u zeta, v> = -<zeta, [u, v]>`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat, ratio, Poly, Rat, Vars};

/// Structure constants of a finite-dimensional Lie algebra:
/// `[e_i, e_j] = sum_l c[i][j][l] e_l`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Vec<Vec<Rat>>>,
}

impl StructureConstants {
    /// Build from the entries with i < j; antisymmetry fills the rest.
    /// Validates antisymmetry and the Jacobi identity over basis triples.
    pub fn new(dim: usize, entries: &[(usize, usize, usize, Rat)]) -> Result<Self> {
        let mut c = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for (i, j, l, v) in entries {
            if *i >= dim || *j >= dim || *l >= dim {
                return Err(Error::StructureConstants(format!(
                    "index out of range in c[{i}][{j}]^{l}"
                )));
            }
            if i == j {
                return Err(Error::StructureConstants(format!(
                    "diagonal bracket [e_{i}, e_{i}] must vanish"
                )));
            }
            c[*i][*j][*l] = v.clone();
            c[*j][*i][*l] = -v.clone();
        }
        let sc = StructureConstants { dim, c };
        sc.check_jacobi()?;
        Ok(sc)
    }

    pub fn abelian(dim: usize) -> Self {
        StructureConstants {
            dim,
            c: vec![vec![vec![Rat::zero(); dim]; dim]; dim],
        }
    }

    /// The Heisenberg algebra h3: `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        StructureConstants::new(3, &[(0, 1, 2, rat(1))]).expect("h3 satisfies Jacobi")
    }

    /// so(3): `[e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2`.
    pub fn so3() -> Self {
        StructureConstants::new(3, &[(0, 1, 2, rat(1)), (1, 2, 0, rat(1)), (2, 0, 1, rat(1))])
            .expect("so3 satisfies Jacobi")
    }

    /// The 4-dimensional filiform algebra: `[e1,e2] = e3, [e1,e3] = e4`.
    pub fn filiform4() -> Self {
        StructureConstants::new(4, &[(0, 1, 2, rat(1)), (0, 2, 3, rat(1))])
            .expect("n4 satisfies Jacobi")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, l: usize) -> &Rat {
        &self.c[i][j][l]
    }

    pub fn check_jacobi(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for l in j + 1..self.dim {
                    let a = self.bracket_rat(
                        &self.basis_rat(i),
                        &self.bracket_rat(&self.basis_rat(j), &self.basis_rat(l)),
                    );
                    let b = self.bracket_rat(
                        &self.basis_rat(j),
                        &self.bracket_rat(&self.basis_rat(l), &self.basis_rat(i)),
                    );
                    let cc = self.bracket_rat(
                        &self.basis_rat(l),
                        &self.bracket_rat(&self.basis_rat(i), &self.basis_rat(j)),
                    );
                    for m in 0..self.dim {
                        let s = &a[m] + &b[m] + &cc[m];
                        if !s.is_zero() {
                            return Err(Error::StructureConstants(format!(
                                "Jacobi fails on (e_{i}, e_{j}, e_{l}) at component {m}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn basis_rat(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    pub fn bracket_rat(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                for l in 0..self.dim {
                    if !self.c[i][j][l].is_zero() {
                        out[l] += &x[i] * &y[j] * &self.c[i][j][l];
                    }
                }
            }
        }
        out
    }

    /// Bilinear extension of the bracket to polynomial coefficient vectors.
    pub fn bracket_poly(&self, vars: &Vars, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(vars); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let prod = &x[i] * &y[j];
                for l in 0..self.dim {
                    if !self.c[i][j][l].is_zero() {
                        out[l] = &out[l] + &prod.scale(&self.c[i][j][l]);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad_{e_i}`: entry `[l][j]` is the e_l coefficient of `[e_i, e_j]`.
    pub fn ad_basis(&self, i: usize) -> Vec<Vec<Rat>> {
        let mut m = vec![vec![Rat::zero(); self.dim]; self.dim];
        for j in 0..self.dim {
            for l in 0..self.dim {
                m[l][j] = self.c[i][j][l].clone();
            }
        }
        m
    }

    /// Nilpotency class via the lower central series, or `None`.
    pub fn nilpotency_class(&self) -> Option<usize> {
        use crate::exact::RMat;
        let mut layer: Vec<Vec<Rat>> = (0..self.dim).map(|i| self.basis_rat(i)).collect();
        for class in 1..=self.dim {
            let mut next = Vec::new();
            for i in 0..self.dim {
                for v in &layer {
                    let b = self.bracket_rat(&self.basis_rat(i), v);
                    if b.iter().any(|x| !x.is_zero()) {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() || RMat::new(next.clone()).rank() == 0 {
                return Some(class);
            }
            layer = next;
        }
        None
    }
}

/// A nilpotent Lie group in exponential coordinates with a polynomial
/// group law (Baker-Campbell-Hausdorff, exact for class <= 4).
#[derive(Clone, Debug)]
pub struct NilpotentGroup {
    sc: StructureConstants,
    class: usize,
}

impl NilpotentGroup {
    pub fn new(sc: StructureConstants) -> Result<Self> {
        sc.check_jacobi()?;
        let class = sc.nilpotency_class().ok_or(Error::NotNilpotent)?;
        if class > 4 {
            return Err(Error::NotNilpotent);
        }
        Ok(NilpotentGroup { sc, class })
    }

    pub fn sc(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn dim(&self) -> usize {
        self.sc.dim
    }

    /// Components of the product `exp(X)exp(Y) = exp(Z)` where `X`, `Y` are
    /// read off the chart coordinates `xs`, `ys`.
    pub fn multiply(&self, vars: &Vars, xs: &[usize], ys: &[usize]) -> Vec<Poly> {
        let m = self.dim();
        assert_eq!(xs.len(), m);
        assert_eq!(ys.len(), m);
        let x: Vec<Poly> = xs.iter().map(|&i| Poly::var(vars, i)).collect();
        let y: Vec<Poly> = ys.iter().map(|&i| Poly::var(vars, i)).collect();
        let br = |a: &[Poly], b: &[Poly]| self.sc.bracket_poly(vars, a, b);
        let xy = br(&x, &y);
        let mut z: Vec<Poly> = (0..m)
            .map(|l| &(&x[l] + &y[l]) + &xy[l].scale(&ratio(1, 2)))
            .collect();
        if self.class >= 3 {
            let xxy = br(&x, &xy);
            let yxy = br(&y, &xy);
            for l in 0..m {
                z[l] = &z[l] + &(&xxy[l].scale(&ratio(1, 12)) - &yxy[l].scale(&ratio(1, 12)));
            }
            if self.class >= 4 {
                let yxxy = br(&y, &xxy);
                for l in 0..m {
                    z[l] = &z[l] - &yxxy[l].scale(&ratio(1, 24));
                }
            }
        }
        z
    }

    /// Matrix of `exp(+-ad_X)` with polynomial entries; `X` is read off the
    /// chart coordinates `g_idx`.
    fn exp_ad(&self, vars: &Vars, g_idx: &[usize], negate: bool) -> Vec<Vec<Poly>> {
        let m = self.dim();
        let mut ad = vec![vec![Poly::zero(vars); m]; m];
        for (i, &gi) in g_idx.iter().enumerate() {
            let xi = Poly::var(vars, gi);
            let base = self.sc.ad_basis(i);
            for l in 0..m {
                for j in 0..m {
                    if !base[l][j].is_zero() {
                        ad[l][j] = &ad[l][j] + &xi.scale(&base[l][j]);
                    }
                }
            }
        }
        if negate {
            for row in ad.iter_mut() {
                for e in row.iter_mut() {
                    *e = -&*e;
                }
            }
        }
        let mut result: Vec<Vec<Poly>> = (0..m)
            .map(|r| {
                (0..m)
                    .map(|c| if r == c { Poly::one(vars) } else { Poly::zero(vars) })
                    .collect()
            })
            .collect();
        let mut power = result.clone();
        let mut factorial = Rat::one();
        for s in 1..self.class.max(1) {
            power = mat_mul_poly(vars, &power, &ad);
            factorial *= rat(s as i64);
            let inv = Rat::one() / factorial.clone();
            for r in 0..m {
                for c in 0..m {
                    result[r][c] = &result[r][c] + &power[r][c].scale(&inv);
                }
            }
        }
        result
    }

    /// Matrix `M(g)` with `(Ad*_g zeta)_l = sum_a M[l][a] zeta_a`, i.e. the
    /// transpose of `Ad_{g^-1} = exp(-ad_X)`.
    pub fn coadjoint_matrix(&self, vars: &Vars, g_idx: &[usize]) -> Vec<Vec<Poly>> {
        let e = self.exp_ad(vars, g_idx, true);
        let m = self.dim();
        (0..m)
            .map(|l| (0..m).map(|a| e[a][l].clone()).collect())
            .collect()
    }

    /// Columns are the values of the right-invariant frame fields at `g`:
    /// `col_a = d/dt|_0 exp(t e_a) exp(X)`.
    pub fn right_invariant_frame(&self, vars: &Vars, g_idx: &[usize]) -> Vec<Vec<Poly>> {
        self.translation_jacobian(vars, g_idx, true)
    }

    /// Columns are the values of the left-invariant frame fields at `g`.
    pub fn left_invariant_frame(&self, vars: &Vars, g_idx: &[usize]) -> Vec<Vec<Poly>> {
        self.translation_jacobian(vars, g_idx, false)
    }

    fn scratch_chart(m: usize) -> (Vars, Vec<usize>, Vec<usize>) {
        let names: Vec<String> = (0..2 * m)
            .map(|i| if i < m { format!("a{i}") } else { format!("b{}", i - m) })
            .collect();
        (Vars::named(&names), (0..m).collect(), (m..2 * m).collect())
    }

    /// Jacobian of multiplication in the first (right frame) or second
    /// (left frame) argument, evaluated at the unit of that argument.
    fn translation_jacobian(&self, vars: &Vars, g_idx: &[usize], first: bool) -> Vec<Vec<Poly>> {
        let m = self.dim();
        let (scratch, xs, ys) = Self::scratch_chart(m);
        let law = self.multiply(&scratch, &xs, &ys);
        let mut args = Vec::with_capacity(2 * m);
        for i in 0..2 * m {
            let in_first = i < m;
            let pos = if in_first { i } else { i - m };
            let arg = if in_first == first {
                Poly::zero(vars) // differentiate at the unit
            } else {
                Poly::var(vars, g_idx[pos])
            };
            args.push(arg);
        }
        let mut frame = vec![vec![Poly::zero(vars); m]; m];
        for l in 0..m {
            for a in 0..m {
                let slot = if first { a } else { m + a };
                frame[l][a] = law[l].deriv(slot).compose(&args, vars);
            }
        }
        frame
    }

    /// Coefficients of the right Maurer-Cartan form: `rho[l][i]` is the
    /// `dg_i` coefficient of the e_l component; equals the inverse of the
    /// right-invariant frame matrix, computed as `D_1 m (g, g^-1)`.
    pub fn right_maurer_cartan(&self, vars: &Vars, g_idx: &[usize]) -> Vec<Vec<Poly>> {
        self.maurer_cartan(vars, g_idx, true)
    }

    /// Coefficients of the left Maurer-Cartan form, `D_2 m (g^-1, g)`.
    pub fn left_maurer_cartan(&self, vars: &Vars, g_idx: &[usize]) -> Vec<Vec<Poly>> {
        self.maurer_cartan(vars, g_idx, false)
    }

    fn maurer_cartan(&self, vars: &Vars, g_idx: &[usize], right: bool) -> Vec<Vec<Poly>> {
        let m = self.dim();
        let (scratch, xs, ys) = Self::scratch_chart(m);
        let law = self.multiply(&scratch, &xs, &ys);
        // right form: vary the first slot, fix the second at g^-1;
        // left form: vary the second slot, fix the first at g^-1
        let mut args = Vec::with_capacity(2 * m);
        for block in 0..2 {
            let varying = (block == 0) == right;
            for i in 0..m {
                let v = Poly::var(vars, g_idx[i]);
                args.push(if varying { v } else { -&v });
            }
        }
        let mut rho = vec![vec![Poly::zero(vars); m]; m];
        for l in 0..m {
            for i in 0..m {
                let slot = if right { i } else { m + i };
                rho[l][i] = law[l].deriv(slot).compose(&args, vars);
            }
        }
        rho
    }
}

pub(crate) fn mat_mul_poly(vars: &Vars, a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = a.len();
    let p = b[0].len();
    let k = b.len();
    (0..n)
        .map(|r| {
            (0..p)
                .map(|c| {
                    let mut acc = Poly::zero(vars);
                    for i in 0..k {
                        if !a[r][i].is_zero() && !b[i][c].is_zero() {
                            acc = &acc + &(&a[r][i] * &b[i][c]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotency_classes() {
        assert_eq!(StructureConstants::heisenberg().nilpotency_class(), Some(2));
        assert_eq!(StructureConstants::abelian(2).nilpotency_class(), Some(1));
        assert_eq!(StructureConstants::filiform4().nilpotency_class(), Some(3));
        assert_eq!(StructureConstants::so3().nilpotency_class(), None);
        assert!(NilpotentGroup::new(StructureConstants::so3()).is_err());
    }

    #[test]
    fn rejects_non_jacobi() {
        let bad = StructureConstants::new(
            3,
            &[(0, 1, 0, rat(1)), (0, 2, 2, rat(1)), (1, 2, 1, rat(1))],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn heisenberg_group_law() {
        let g = NilpotentGroup::new(StructureConstants::heisenberg()).unwrap();
        let v = Vars::named(&["x1", "x2", "x3", "y1", "y2", "y3"]);
        let law = g.multiply(&v, &[0, 1, 2], &[3, 4, 5]);
        let p = [rat(1), rat(2), rat(0), rat(3), rat(5), rat(0)];
        assert_eq!(law[0].eval(&p), rat(4));
        assert_eq!(law[1].eval(&p), rat(7));
        assert_eq!(law[2].eval(&p), ratio(1 * 5 - 2 * 3, 2));
    }

    #[test]
    fn group_law_is_associative() {
        for sc in [
            StructureConstants::abelian(2),
            StructureConstants::heisenberg(),
            StructureConstants::filiform4(),
        ] {
            let m = sc.dim();
            let g = NilpotentGroup::new(sc).unwrap();
            let names: Vec<String> = (0..3 * m).map(|i| format!("t{i}")).collect();
            let v = Vars::named(&names);
            let a: Vec<usize> = (0..m).collect();
            let b: Vec<usize> = (m..2 * m).collect();
            let ab = g.multiply(&v, &a, &b);
            let (scratch, xs, ys) = NilpotentGroup::scratch_chart(m);
            let law = g.multiply(&scratch, &xs, &ys);
            let c_vars: Vec<Poly> = (2 * m..3 * m).map(|i| Poly::var(&v, i)).collect();
            let mut args_abc = ab.clone();
            args_abc.extend(c_vars.iter().cloned());
            let abc: Vec<Poly> = law.iter().map(|l| l.compose(&args_abc, &v)).collect();
            let bc = g.multiply(&v, &b, &(2 * m..3 * m).collect::<Vec<_>>());
            let mut args_a_bc: Vec<Poly> = (0..m).map(|i| Poly::var(&v, i)).collect();
            args_a_bc.extend(bc);
            let a_bc: Vec<Poly> = law.iter().map(|l| l.compose(&args_a_bc, &v)).collect();
            assert_eq!(abc, a_bc, "associativity of the exponential-chart law");
        }
    }

    #[test]
    fn heisenberg_coadjoint_is_unipotent() {
        let g = NilpotentGroup::new(StructureConstants::heisenberg()).unwrap();
        let v = Vars::named(&["x", "y", "z"]);
        let m = g.coadjoint_matrix(&v, &[0, 1, 2]);
        // Ad*_(x,y,z) (a, b, c) = (a + y c, b - x c, c)
        assert_eq!(m[0][0], Poly::one(&v));
        assert_eq!(m[0][2], Poly::var(&v, 1));
        assert_eq!(m[1][1], Poly::one(&v));
        assert_eq!(m[1][2], -&Poly::var(&v, 0));
        assert_eq!(m[2][2], Poly::one(&v));
        for (r, c) in [(0usize, 1usize), (1, 0), (2, 0), (2, 1)] {
            assert!(m[r][c].is_zero());
        }
    }

    #[test]
    fn coadjoint_inverse_cancels() {
        let g = NilpotentGroup::new(StructureConstants::filiform4()).unwrap();
        let v = Vars::named(&["x1", "x2", "x3", "x4"]);
        let idx = [0usize, 1, 2, 3];
        let m = g.coadjoint_matrix(&v, &idx);
        let neg_args: Vec<Poly> = idx.iter().map(|&i| -&Poly::var(&v, i)).collect();
        let m_inv: Vec<Vec<Poly>> = m
            .iter()
            .map(|row| row.iter().map(|e| e.compose(&neg_args, &v)).collect())
            .collect();
        let prod = mat_mul_poly(&v, &m_inv, &m);
        for r in 0..4 {
            for c in 0..4 {
                if r == c {
                    assert_eq!(prod[r][c], Poly::one(&v));
                } else {
                    assert!(prod[r][c].is_zero());
                }
            }
        }
    }

    #[test]
    fn maurer_cartan_inverts_matching_frame() {
        let g = NilpotentGroup::new(StructureConstants::heisenberg()).unwrap();
        let v = Vars::named(&["x", "y", "z"]);
        for right in [true, false] {
            let frame = if right {
                g.right_invariant_frame(&v, &[0, 1, 2])
            } else {
                g.left_invariant_frame(&v, &[0, 1, 2])
            };
            let rho = if right {
                g.right_maurer_cartan(&v, &[0, 1, 2])
            } else {
                g.left_maurer_cartan(&v, &[0, 1, 2])
            };
            let prod = mat_mul_poly(&v, &rho, &frame);
            for r in 0..3 {
                for c in 0..3 {
                    if r == c {
                        assert_eq!(prod[r][c], Poly::one(&v));
                    } else {
                        assert!(prod[r][c].is_zero(), "rho * frame != id at ({r},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn right_frame_commutes_with_left_frame() {
        use crate::cartan::{lie_bracket, VectorField};
        let g = NilpotentGroup::new(StructureConstants::heisenberg()).unwrap();
        let v = Vars::named(&["x", "y", "z"]);
        let r = g.right_invariant_frame(&v, &[0, 1, 2]);
        let l = g.left_invariant_frame(&v, &[0, 1, 2]);
        for a in 0..3 {
            for b in 0..3 {
                let ra = VectorField::new(&v, (0..3).map(|i| r[i][a].clone()).collect());
                let lb = VectorField::new(&v, (0..3).map(|i| l[i][b].clone()).collect());
                assert!(lie_bracket(&ra, &lb).is_zero());
            }
        }
    }
}
