//! Rational functions num/den with a canonical cheap normalization.
//!
//! Normalization cancels the common monomial factor and rescales so the
//! denominator is integer-primitive with positive leading coefficient. Full
//! polynomial gcd reduction is deliberately not attempted; equality is
//! decided by cross-multiplication, which is exact regardless.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Poly, Vars};
use super::Rat;

#[derive(Clone)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert_eq!(num.vars(), den.vars(), "num/den on different charts");
        let mut r = RatFun { num, den };
        r.normalize();
        r
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.vars());
        RatFun { num: p, den: one }
    }

    pub fn zero(vars: &Vars) -> Self {
        RatFun { num: Poly::zero(vars), den: Poly::one(vars) }
    }

    pub fn one(vars: &Vars) -> Self {
        RatFun { num: Poly::one(vars), den: Poly::one(vars) }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        RatFun { num: Poly::constant(vars, c), den: Poly::one(vars) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The underlying polynomial when the denominator is constant.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            Some(self.num.scale(&(Rat::one() / c)))
        } else {
            None
        }
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.vars());
            return;
        }
        // Cancel the common monomial factor.
        let gn = self.num.monomial_gcd();
        let gd = self.den.monomial_gcd();
        let g: Vec<u32> = gn.iter().zip(&gd).map(|(a, b)| *a.min(b)).collect();
        if g.iter().any(|&k| k > 0) {
            self.num = self.num.shift_down(&g);
            self.den = self.den.shift_down(&g);
        }
        // Make the denominator integer-primitive with positive lead.
        let mut c = self.den.content();
        if self.den.lead_sign() < 0 {
            c = -c;
        }
        let inv = Rat::one() / c;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "inverting the zero rational function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone())
    }

    /// Partial derivative with respect to coordinate `i`.
    pub fn deriv(&self, i: usize) -> RatFun {
        let dn = self.num.deriv(i);
        let dd = self.den.deriv(i);
        if dd.is_zero() {
            return RatFun::new(dn, self.den.clone());
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        RatFun::new(num, &self.den * &self.den)
    }

    /// Exact evaluation; `None` when the denominator vanishes at the point.
    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn render(&self) -> String {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            self.num.render()
        } else if self.num.num_terms() <= 1 && self.den.num_terms() <= 1 {
            format!("{}/{}", self.num.render(), self.den.render())
        } else {
            format!("({})/({})", self.num.render(), self.den.render())
        }
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFun {}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.recip()
    }
}

/// Multiply a rational function by a polynomial.
impl Mul<&Poly> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &Poly) -> RatFun {
        RatFun::new(&self.num * rhs, self.den.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn normalization_is_canonical() {
        let v = Vars::named(&["x", "y"]);
        let x = Poly::var(&v, 0);
        let y = Poly::var(&v, 1);
        // (2xy) / (-4x) normalizes to -y/2 with positive primitive denominator
        let r = RatFun::new(&x * &y.scale(&rat(2)), x.scale(&rat(-4)));
        assert_eq!(r.den().render(), "1");
        assert_eq!(r.num().render(), "-1/2*y");
    }

    #[test]
    fn cross_multiplied_equality() {
        let v = Vars::named(&["x"]);
        let x = Poly::var(&v, 0);
        let one = Poly::one(&v);
        // (x^2 - 1)/(x - 1) == (x + 1)/1 without gcd reduction
        let a = RatFun::new(&(&x * &x) - &one, &x - &one);
        let b = RatFun::from_poly(&x + &one);
        assert_eq!(a, b);
    }

    #[test]
    fn field_ops_match_evaluation() {
        let v = Vars::named(&["x"]);
        let x = Poly::var(&v, 0);
        let one = Poly::one(&v);
        let a = RatFun::new(x.clone(), &x + &one);
        let b = RatFun::new(&x - &one, x.clone());
        let p = [rat(3)];
        let sum = &a + &b;
        let prod = &a * &b;
        assert_eq!(sum.eval(&p).unwrap(), a.eval(&p).unwrap() + b.eval(&p).unwrap());
        assert_eq!(prod.eval(&p).unwrap(), a.eval(&p).unwrap() * b.eval(&p).unwrap());
    }
}
