//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are keyed by dense exponent vectors in a `BTreeMap`, so iteration
//! order (and hence printing) is deterministic. The map never stores a zero
//! coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::Rat;

/// An ordered set of coordinate names, shared by all values on a chart.
///
/// Cloning is cheap; equality compares the name lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Arc<Vec<String>>,
}

impl Vars {
    pub fn named<S: AsRef<str>>(names: &[S]) -> Self {
        Vars {
            names: Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect()),
        }
    }

    /// Default coordinates `x1..xn`.
    pub fn xn(n: usize) -> Self {
        Vars {
            names: Arc::new((1..=n).map(|i| format!("x{i}")).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Concatenation, for product charts. Panics on duplicate names.
    pub fn concat(&self, other: &Vars) -> Vars {
        let mut names: Vec<String> = self.names.as_ref().clone();
        for n in other.names.iter() {
            assert!(!names.contains(n), "duplicate coordinate name {n}");
            names.push(n.clone());
        }
        Vars { names: Arc::new(names) }
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars({})", self.names.join(","))
    }
}

/// A sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        Poly { vars: vars.clone(), terms }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(vars: &Vars, i: usize) -> Self {
        assert!(i < vars.len(), "variable index {i} out of range");
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Rat::one());
        Poly { vars: vars.clone(), terms }
    }

    pub fn from_terms(vars: &Vars, it: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Poly::zero(vars);
        for (exp, c) in it {
            assert_eq!(exp.len(), vars.len(), "exponent arity mismatch");
            p.add_term(exp, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
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

    fn assert_same_vars(&self, other: &Poly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials over different charts: {:?} vs {:?}",
            self.vars, other.vars
        );
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.vars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to coordinate `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (exp, c) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = exp.clone();
            let k = e[i];
            e[i] -= 1;
            out.add_term(e, c * Rat::from_integer(k.into()));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len(), "point arity mismatch");
        let mut acc = Rat::zero();
        for (exp, c) in &self.terms {
            let mut m = c.clone();
            for (i, &k) in exp.iter().enumerate() {
                for _ in 0..k {
                    m *= &point[i];
                }
            }
            acc += m;
        }
        acc
    }

    /// Substitute the polynomial `args[i]` for variable `i`. All `args` must
    /// live on `target`, which becomes the chart of the result.
    pub fn compose(&self, args: &[Poly], target: &Vars) -> Poly {
        assert_eq!(args.len(), self.vars.len(), "composition arity mismatch");
        for a in args {
            assert_eq!(a.vars(), target, "composition arguments on mixed charts");
        }
        let mut acc = Poly::zero(target);
        for (exp, c) in &self.terms {
            let mut m = Poly::constant(target, c.clone());
            for (i, &k) in exp.iter().enumerate() {
                if k > 0 {
                    m = &m * &args[i].pow(k);
                }
            }
            acc = &acc + &m;
        }
        acc
    }

    /// Exact division: returns `Some(q)` with `self = q * d` when the
    /// division is exact, `None` otherwise.
    pub fn divexact(&self, d: &Poly) -> Option<Poly> {
        self.assert_same_vars(d);
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        let (dexp, dc) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rexp, rc) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
            let mut qexp = vec![0u32; rexp.len()];
            for i in 0..rexp.len() {
                if rexp[i] < dexp[i] {
                    return None;
                }
                qexp[i] = rexp[i] - dexp[i];
            }
            let qc = rc / &dc;
            let mono = Poly::from_terms(&self.vars, [(qexp.clone(), qc.clone())]);
            quot.add_term(qexp, qc);
            rem = &rem - &(&mono * d);
        }
        Some(quot)
    }

    /// The positive rational c such that `self / c` has integer coefficients
    /// with no common factor. Zero polynomial has content 1.
    pub fn content(&self) -> Rat {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }

    /// Sign of the leading coefficient in the term order.
    pub fn lead_sign(&self) -> i32 {
        match self.terms.values().next_back() {
            None => 0,
            Some(c) if c.is_positive() => 1,
            _ => -1,
        }
    }

    /// Greatest common monomial factor of all terms.
    pub fn monomial_gcd(&self) -> Vec<u32> {
        let n = self.vars.len();
        let mut g = vec![u32::MAX; n];
        for exp in self.terms.keys() {
            for i in 0..n {
                g[i] = g[i].min(exp[i]);
            }
        }
        if self.terms.is_empty() {
            vec![0; n]
        } else {
            g
        }
    }

    /// Divide out a monomial that divides every term.
    pub fn shift_down(&self, mono: &[u32]) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (exp, c) in &self.terms {
            let e: Vec<u32> = exp.iter().zip(mono).map(|(a, b)| a.checked_sub(*b).expect("monomial does not divide")).collect();
            out.add_term(e, c.clone());
        }
        out
    }

    /// The same terms read on another chart of equal dimension.
    pub fn transplant(&self, new_vars: &Vars) -> Poly {
        assert_eq!(new_vars.len(), self.vars.len(), "transplant must preserve arity");
        Poly { vars: new_vars.clone(), terms: self.terms.clone() }
    }

    /// Render with the chart's own names.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exp, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &k) in exp.iter().enumerate() {
                if k == 1 {
                    factors.push(self.vars.name(v).to_string());
                } else if k > 1 {
                    factors.push(format!("{}^{}", self.vars.name(v), k));
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rat(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&format_rat(&mag));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

pub(crate) fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.vars == other.vars).then(|| self.terms.cmp(&other.terms))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_same_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_same_vars(rhs);
        let mut out = Poly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}
