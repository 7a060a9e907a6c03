//! Exterior calculus for vector-valued differential forms with polynomial
//! coefficients on a coordinate chart.
//!
//! A degree-r form with values in R^k is stored as k independent alternating
//! coefficient tables keyed by strictly increasing index tuples; there is no
//! wedge of two vector-valued forms, because none is needed. The interior
//! product contracts in the first slot:
//! `i_X(a ^ b) = (i_X a) ^ b + (-1)^deg(a) a ^ (i_X b)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exact::{Poly, Rat, Vars};

/// A polynomial vector field on a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    vars: Vars,
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(vars: &Vars, comps: Vec<Poly>) -> Self {
        assert_eq!(comps.len(), vars.len(), "component count must equal the dimension");
        for c in &comps {
            assert_eq!(c.vars(), vars, "component on a different chart");
        }
        VectorField { vars: vars.clone(), comps }
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField {
            vars: vars.clone(),
            comps: vec![Poly::zero(vars); vars.len()],
        }
    }

    /// The coordinate field `d/dx_i`.
    pub fn coordinate(vars: &Vars, i: usize) -> Self {
        let mut comps = vec![Poly::zero(vars); vars.len()];
        comps[i] = Poly::one(vars);
        VectorField { vars: vars.clone(), comps }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.vars, other.vars);
        VectorField {
            vars: self.vars.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, f: &Poly) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|c| c * f).collect(),
        }
    }

    /// Directional derivative of a function.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.vars);
        for (i, c) in self.comps.iter().enumerate() {
            acc = &acc + &(c * &f.deriv(i));
        }
        acc
    }

    pub fn eval(&self, point: &[Rat]) -> Vec<Rat> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})*d/d{}", c.render(), self.vars.name(i)))
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Bracket of vector fields: `[X,Y]^i = X(Y^i) - Y(X^i)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert_eq!(x.vars, y.vars, "bracket of fields on different charts");
    let comps = (0..x.vars.len())
        .map(|i| &x.apply(&y.comps[i]) - &y.apply(&x.comps[i]))
        .collect();
    VectorField { vars: x.vars.clone(), comps }
}

/// A polynomial map between coordinate charts.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMap {
    domain: Vars,
    codomain: Vars,
    comps: Vec<Poly>,
}

impl PolyMap {
    pub fn new(domain: &Vars, codomain: &Vars, comps: Vec<Poly>) -> Self {
        assert_eq!(comps.len(), codomain.len(), "one component per target coordinate");
        for c in &comps {
            assert_eq!(c.vars(), domain, "component on a different chart");
        }
        PolyMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            comps,
        }
    }

    pub fn identity(vars: &Vars) -> Self {
        PolyMap {
            domain: vars.clone(),
            codomain: vars.clone(),
            comps: (0..vars.len()).map(|i| Poly::var(vars, i)).collect(),
        }
    }

    pub fn domain(&self) -> &Vars {
        &self.domain
    }

    pub fn codomain(&self) -> &Vars {
        &self.codomain
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    /// `self` after `g`: the map `x -> self(g(x))`.
    pub fn after(&self, g: &PolyMap) -> PolyMap {
        assert_eq!(self.domain, g.codomain, "composition chart mismatch");
        let comps = self
            .comps
            .iter()
            .map(|c| c.compose(g.comps(), &g.domain))
            .collect();
        PolyMap {
            domain: g.domain.clone(),
            codomain: self.codomain.clone(),
            comps,
        }
    }

    pub fn eval(&self, point: &[Rat]) -> Vec<Rat> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }

    /// Jacobian grid: `jac[i][j] = d comps[i] / d u_j`.
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.comps
            .iter()
            .map(|c| (0..self.domain.len()).map(|j| c.deriv(j)).collect())
            .collect()
    }

    /// Push a vector field on the domain through the Jacobian; the result
    /// has codomain components expressed in domain coordinates.
    pub fn push_components(&self, x: &VectorField) -> Vec<Poly> {
        assert_eq!(*x.vars(), self.domain);
        let jac = self.jacobian();
        (0..self.codomain.len())
            .map(|i| {
                let mut acc = Poly::zero(&self.domain);
                for (j, xc) in x.comps().iter().enumerate() {
                    acc = &acc + &(&jac[i][j] * xc);
                }
                acc
            })
            .collect()
    }
}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.render()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// An R^k-valued degree-r differential form with polynomial coefficients.
///
/// For each slot `j < k` the map `comps[j]` sends a strictly increasing
/// r-tuple of coordinate indices to its coefficient; no zero coefficients
/// are stored. Degree 0 uses the empty tuple as its only key.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    vars: Vars,
    degree: usize,
    mult: usize,
    comps: Vec<BTreeMap<Vec<usize>, Poly>>,
}

impl KForm {
    pub fn zero(vars: &Vars, degree: usize, mult: usize) -> Self {
        KForm {
            vars: vars.clone(),
            degree,
            mult,
            comps: vec![BTreeMap::new(); mult],
        }
    }

    /// Degree-0 form from k functions.
    pub fn functions(vars: &Vars, funcs: Vec<Poly>) -> Self {
        let mult = funcs.len();
        let mut comps = vec![BTreeMap::new(); mult];
        for (j, f) in funcs.into_iter().enumerate() {
            assert_eq!(f.vars(), vars);
            if !f.is_zero() {
                comps[j].insert(Vec::new(), f);
            }
        }
        KForm { vars: vars.clone(), degree: 0, mult, comps }
    }

    /// Build from (slot, indices, coefficient) triples; indices need not be
    /// sorted, the alternating sign is applied. Terms with repeated indices
    /// or with degree above the dimension vanish.
    pub fn from_terms(
        vars: &Vars,
        degree: usize,
        mult: usize,
        terms: impl IntoIterator<Item = (usize, Vec<usize>, Poly)>,
    ) -> Self {
        let mut form = KForm::zero(vars, degree, mult);
        for (slot, idx, coeff) in terms {
            assert!(slot < mult, "slot out of range");
            assert_eq!(idx.len(), degree, "index tuple of wrong length");
            assert_eq!(coeff.vars(), vars);
            let Some((sorted, sign)) = sort_with_sign(&idx) else {
                continue;
            };
            if degree > vars.len() {
                continue;
            }
            let c = if sign < 0 { -&coeff } else { coeff };
            form.add_term(slot, sorted, c);
        }
        form
    }

    fn add_term(&mut self, slot: usize, idx: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.comps[slot].entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mult(&self) -> usize {
        self.mult
    }

    pub fn slot(&self, j: usize) -> &BTreeMap<Vec<usize>, Poly> {
        &self.comps[j]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(BTreeMap::is_empty)
    }

    pub fn add(&self, other: &KForm) -> KForm {
        self.check_shape(other);
        let mut out = self.clone();
        for j in 0..self.mult {
            for (idx, c) in &other.comps[j] {
                out.add_term(j, idx.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        KForm {
            vars: self.vars.clone(),
            degree: self.degree,
            mult: self.mult,
            comps: self
                .comps
                .iter()
                .map(|m| m.iter().map(|(i, c)| (i.clone(), -c)).collect())
                .collect(),
        }
    }

    /// Multiply every slot by the same function.
    pub fn scale(&self, f: &Poly) -> KForm {
        assert_eq!(f.vars(), &self.vars);
        let mut out = KForm::zero(&self.vars, self.degree, self.mult);
        for j in 0..self.mult {
            for (idx, c) in &self.comps[j] {
                out.add_term(j, idx.clone(), c * f);
            }
        }
        out
    }

    fn check_shape(&self, other: &KForm) {
        assert_eq!(self.vars, other.vars, "forms on different charts");
        assert_eq!(self.degree, other.degree, "forms of different degree");
        assert_eq!(self.mult, other.mult, "forms of different multiplicity");
    }

    /// Extract one slot as a multiplicity-1 form.
    pub fn component(&self, j: usize) -> KForm {
        KForm {
            vars: self.vars.clone(),
            degree: self.degree,
            mult: 1,
            comps: vec![self.comps[j].clone()],
        }
    }

    /// Concatenate the slots of several forms of equal degree.
    pub fn concat_slots(forms: &[KForm]) -> KForm {
        assert!(!forms.is_empty());
        let vars = forms[0].vars.clone();
        let degree = forms[0].degree;
        let mut comps = Vec::new();
        for f in forms {
            assert_eq!(f.vars, vars);
            assert_eq!(f.degree, degree);
            comps.extend(f.comps.iter().cloned());
        }
        KForm { vars, degree, mult: comps.len(), comps }
    }

    /// The same coefficient tables read on another chart of equal dimension.
    pub fn transplant(&self, new_vars: &Vars) -> KForm {
        KForm {
            vars: new_vars.clone(),
            degree: self.degree,
            mult: self.mult,
            comps: self
                .comps
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|(idx, c)| (idx.clone(), c.transplant(new_vars)))
                        .collect()
                })
                .collect(),
        }
    }

    /// Value of slot `j` on `degree` many tangent vectors at a point.
    pub fn eval_on(&self, j: usize, vectors: &[Vec<Rat>], point: &[Rat]) -> Rat {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = Rat::zero();
        for (idx, coeff) in &self.comps[j] {
            let minor: Vec<Vec<Rat>> = (0..self.degree)
                .map(|r| (0..self.degree).map(|c| vectors[c][idx[r]].clone()).collect())
                .collect();
            acc += coeff.eval(point) * det_rat(&minor);
        }
        acc
    }

    pub fn render(&self) -> String {
        let mut slots = Vec::new();
        for j in 0..self.mult {
            if self.comps[j].is_empty() {
                slots.push("0".to_string());
                continue;
            }
            let terms: Vec<String> = self.comps[j]
                .iter()
                .map(|(idx, c)| {
                    let basis: Vec<String> = idx
                        .iter()
                        .map(|&i| format!("d{}", self.vars.name(i)))
                        .collect();
                    if basis.is_empty() {
                        format!("({})", c.render())
                    } else {
                        format!("({})*{}", c.render(), basis.join("^"))
                    }
                })
                .collect();
            slots.push(terms.join(" + "));
        }
        format!("[{}]", slots.join(" ; "))
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    match n {
        0 => Rat::from_integer(1.into()),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = Rat::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Rat>> = (1..n)
                    .map(|r| (0..n).filter(|&cc| cc != c).map(|cc| m[r][cc].clone()).collect())
                    .collect();
                let term = &m[0][c] * &det_rat(&sub);
                if c % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn det_poly(m: &[Vec<Poly>], vars: &Vars) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(vars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = Poly::zero(vars);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<Poly>> = (1..n)
                    .map(|r| (0..n).filter(|&cc| cc != c).map(|cc| m[r][cc].clone()).collect())
                    .collect();
                let term = &m[0][c] * &det_poly(&sub, vars);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Sort an index tuple, counting transpositions; `None` on repeats.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// Componentwise exterior derivative.
pub fn ext_d(omega: &KForm) -> KForm {
    let n = omega.dim();
    let mut out = KForm::zero(omega.vars(), omega.degree() + 1, omega.mult());
    if omega.degree() + 1 > n {
        return out;
    }
    for j in 0..omega.mult() {
        for (idx, coeff) in omega.slot(j) {
            for v in 0..n {
                if idx.contains(&v) {
                    continue;
                }
                let dc = coeff.deriv(v);
                if dc.is_zero() {
                    continue;
                }
                let pos = idx.iter().filter(|&&i| i < v).count();
                let mut new_idx = idx.clone();
                new_idx.insert(pos, v);
                let signed = if pos % 2 == 1 { -&dc } else { dc };
                out.add_term(j, new_idx, signed);
            }
        }
    }
    out
}

/// Interior product in the first slot.
pub fn interior(x: &VectorField, omega: &KForm) -> KForm {
    assert_eq!(x.vars(), omega.vars(), "contraction across charts");
    assert!(omega.degree() >= 1, "cannot contract a function");
    let mut out = KForm::zero(omega.vars(), omega.degree() - 1, omega.mult());
    for j in 0..omega.mult() {
        for (idx, coeff) in omega.slot(j) {
            for (a, &i) in idx.iter().enumerate() {
                let xc = &x.comps()[i];
                if xc.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(a);
                let term = coeff * xc;
                let signed = if a % 2 == 1 { -&term } else { term };
                out.add_term(j, rest, signed);
            }
        }
    }
    out
}

/// Lie derivative by Cartan's formula: `L_X = d i_X + i_X d`.
pub fn lie_derivative(x: &VectorField, omega: &KForm) -> KForm {
    if omega.degree() == 0 {
        return interior(x, &ext_d(omega));
    }
    ext_d(&interior(x, omega)).add(&interior(x, &ext_d(omega)))
}

/// Pullback along a polynomial map; the result lives on the domain of `f`.
pub fn pullback(f: &PolyMap, omega: &KForm) -> KForm {
    assert_eq!(
        f.codomain().len(),
        omega.dim(),
        "pullback needs codomain dimension = form dimension"
    );
    let dom = f.domain().clone();
    let r = omega.degree();
    let mut out = KForm::zero(&dom, r, omega.mult());
    if r > dom.len() {
        return out;
    }
    let jac = f.jacobian();
    for j in 0..omega.mult() {
        for (idx, coeff) in omega.slot(j) {
            let pulled = coeff.compose(f.comps(), &dom);
            if pulled.is_zero() {
                continue;
            }
            if r == 0 {
                out.add_term(j, Vec::new(), pulled);
                continue;
            }
            for target in increasing_tuples(dom.len(), r) {
                let minor: Vec<Vec<Poly>> = idx
                    .iter()
                    .map(|&row| target.iter().map(|&col| jac[row][col].clone()).collect())
                    .collect();
                let d = det_poly(&minor, &dom);
                if d.is_zero() {
                    continue;
                }
                out.add_term(j, target.clone(), &pulled * &d);
            }
        }
    }
    out
}

/// All strictly increasing r-tuples from 0..n.
pub fn increasing_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (r - i) {
                cur[i] += 1;
                for j in i + 1..r {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A k-tuple of 1-forms: a degree-1 [`KForm`] by construction.
#[derive(Clone, PartialEq, Eq)]
pub struct CoSection(KForm);

impl CoSection {
    pub fn new(form: KForm) -> Self {
        assert_eq!(form.degree(), 1, "a cosection has degree exactly 1");
        CoSection(form)
    }

    /// Build from a k x n coefficient grid.
    pub fn from_grid(vars: &Vars, grid: Vec<Vec<Poly>>) -> Self {
        let mult = grid.len();
        let mut form = KForm::zero(vars, 1, mult);
        for (j, row) in grid.into_iter().enumerate() {
            assert_eq!(row.len(), vars.len());
            for (i, c) in row.into_iter().enumerate() {
                form.add_term(j, vec![i], c);
            }
        }
        CoSection(form)
    }

    pub fn zero(vars: &Vars, mult: usize) -> Self {
        CoSection(KForm::zero(vars, 1, mult))
    }

    pub fn form(&self) -> &KForm {
        &self.0
    }

    pub fn into_form(self) -> KForm {
        self.0
    }

    pub fn vars(&self) -> &Vars {
        self.0.vars()
    }

    pub fn mult(&self) -> usize {
        self.0.mult()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &CoSection) -> CoSection {
        CoSection(self.0.add(&other.0))
    }

    pub fn neg(&self) -> CoSection {
        CoSection(self.0.neg())
    }

    pub fn scale(&self, f: &Poly) -> CoSection {
        CoSection(self.0.scale(f))
    }

    /// The k x n coefficient grid.
    pub fn grid(&self) -> Vec<Vec<Poly>> {
        let n = self.0.dim();
        (0..self.0.mult())
            .map(|j| {
                (0..n)
                    .map(|i| {
                        self.0
                            .slot(j)
                            .get(&vec![i])
                            .cloned()
                            .unwrap_or_else(|| Poly::zero(self.0.vars()))
                    })
                    .collect()
            })
            .collect()
    }

    /// Slot-major flattening into a vector of length k*n.
    pub fn flatten(&self) -> Vec<Poly> {
        self.grid().into_iter().flatten().collect()
    }

    /// Pair with a vector field: the k-tuple of functions `eta_j(X)`.
    pub fn pair(&self, x: &VectorField) -> Vec<Poly> {
        let f = interior(x, &self.0);
        (0..self.0.mult())
            .map(|j| {
                f.slot(j)
                    .get(&Vec::new())
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(self.0.vars()))
            })
            .collect()
    }

    /// Componentwise pullback along `f`.
    pub fn pullback(&self, f: &PolyMap) -> CoSection {
        CoSection(pullback(f, &self.0))
    }
}

impl fmt::Debug for CoSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
