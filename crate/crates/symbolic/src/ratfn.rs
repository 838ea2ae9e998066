//! Rational functions `num / den` over [`Poly`].
//!
//! Normal form: the denominator has coprime integer coefficients and a
//! positive leading coefficient, common monomial factors are cancelled, and
//! whole-polynomial cancellation is applied when one side divides the other.
//! No multivariate gcd is computed, so two equal functions may carry
//! different pairs; [`RatFn::equals`] compares by cross-multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::SymbolicError;
use crate::poly::{Monomial, Poly};
use crate::sym::{Sym, NSYMS};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

/// Outcome of a limit: either a rational function or unbounded growth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Limit {
    Finite(RatFn),
    Unbounded,
}

impl Limit {
    pub fn finite(self) -> Option<RatFn> {
        match self {
            Limit::Finite(f) => Some(f),
            Limit::Unbounded => None,
        }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, SymbolicError> {
        if den.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFn::normalized(num, den))
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        if !den.is_constant() {
            if let Some(q) = num.exact_div(&den) {
                num = q;
                den = Poly::one();
            } else if !num.is_constant() {
                if let Some(q) = den.exact_div(&num) {
                    den = q;
                    num = Poly::one();
                }
            }
        }
        let mut c = den.content();
        if den.leading_sign() < 0 {
            c = -c;
        }
        if !c.is_one() {
            let inv = c.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFn { num, den }
    }

    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        RatFn::from_poly(Poly::int(n))
    }

    pub fn var(s: Sym) -> Self {
        RatFn::from_poly(Poly::var(s))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn::normalized(p, Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    /// Symbols occurring in numerator or denominator.
    pub fn symbols(&self) -> Vec<Sym> {
        Sym::ALL.into_iter().filter(|s| self.contains(*s)).collect()
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<RatFn, SymbolicError> {
        if rhs.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(RatFn::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<RatFn, SymbolicError> {
        RatFn::one().checked_div(self)
    }

    /// Parallel combination `a*b/(a+b)`.
    pub fn parallel(&self, rhs: &RatFn) -> Result<RatFn, SymbolicError> {
        let sum = self + rhs;
        (self * rhs).checked_div(&sum)
    }

    /// Exact equality as rational functions: `a.num*b.den - b.num*a.den == 0`.
    pub fn equals(&self, other: &RatFn) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }

    /// Simultaneous substitution of each listed symbol by a rational function.
    ///
    /// With `s -> p_s/q_s` and `n_s` the largest power of `s` in either
    /// polynomial, every monomial is multiplied through by `q_s^{n_s}`; the
    /// common factor cancels between numerator and denominator, so no
    /// intermediate rational additions are needed.
    pub fn substitute(&self, rules: &[(Sym, RatFn)]) -> RatFn {
        if rules.is_empty() {
            return self.clone();
        }
        let mut table: Vec<Option<(&RatFn, u16)>> = vec![None; NSYMS];
        for (s, image) in rules {
            let n = self.num.degree_in(*s).max(self.den.degree_in(*s));
            table[s.index()] = Some((image, n));
        }
        let mut cache = PowerCache::default();
        let num = substitute_poly(&self.num, &table, &mut cache);
        let den = substitute_poly(&self.den, &table, &mut cache);
        RatFn::normalized(num, den)
    }

    /// Replaces `ALPHA -> BETA/(BETA+1)` and `RPI -> BETA/GM`.
    pub fn eliminate_derived(&self) -> RatFn {
        if !self.contains(Sym::Alpha) && !self.contains(Sym::Rpi) {
            return self.clone();
        }
        self.substitute(&derived_rules())
    }

    /// Limit as `s -> +inf`, comparing the degrees in `s`.
    pub fn limit_at_infinity(&self, s: Sym) -> Limit {
        let nd = self.num.degree_in(s);
        let dd = self.den.degree_in(s);
        if self.num.is_zero() || nd < dd {
            return Limit::Finite(RatFn::zero());
        }
        if nd > dd {
            return Limit::Unbounded;
        }
        let a = self.num.coefficients_in(s).pop().unwrap_or_default();
        let b = self.den.coefficients_in(s).pop().unwrap_or_default();
        Limit::Finite(RatFn::normalized(a, b))
    }

    /// Limit as `s -> 0`, comparing the lowest powers of `s`.
    pub fn limit_at_zero(&self, s: Sym) -> Limit {
        if self.num.is_zero() {
            return Limit::Finite(RatFn::zero());
        }
        let nl = self.num.low_degree_in(s);
        let dl = self.den.low_degree_in(s);
        if nl > dl {
            return Limit::Finite(RatFn::zero());
        }
        if nl < dl {
            return Limit::Unbounded;
        }
        let a = self.num.coefficients_in(s).swap_remove(nl as usize);
        let b = self.den.coefficients_in(s).swap_remove(dl as usize);
        Limit::Finite(RatFn::normalized(a, b))
    }

    pub fn eval_rational(&self, point: &[BigRational; NSYMS]) -> Option<BigRational> {
        let d = self.den.eval_rational(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(point) / d)
    }

    /// Sizes used in verification reports.
    pub fn shape(&self) -> Shape {
        Shape {
            num_terms: self.num.len(),
            den_terms: self.den.len(),
            num_degree: self.num.total_degree(),
            den_degree: self.den.total_degree(),
        }
    }
}

/// Term counts and total degrees of a rational function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub num_terms: usize,
    pub den_terms: usize,
    pub num_degree: u32,
    pub den_degree: u32,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "num {} terms deg {}, den {} terms deg {}",
            self.num_terms, self.num_degree, self.den_terms, self.den_degree
        )
    }
}

pub fn derived_rules() -> Vec<(Sym, RatFn)> {
    let beta = RatFn::var(Sym::Beta);
    let alpha = beta
        .checked_div(&(&beta + &RatFn::one()))
        .expect("beta+1 is a nonzero polynomial");
    let rpi = beta
        .checked_div(&RatFn::var(Sym::Gm))
        .expect("gm is a nonzero polynomial");
    vec![(Sym::Alpha, alpha), (Sym::Rpi, rpi)]
}

#[derive(Default)]
struct PowerCache {
    num: Vec<Vec<Poly>>,
    den: Vec<Vec<Poly>>,
}

impl PowerCache {
    fn get(store: &mut Vec<Vec<Poly>>, idx: usize, base: &Poly, k: u16) -> Poly {
        if store.len() < NSYMS {
            store.resize(NSYMS, Vec::new());
        }
        let v = &mut store[idx];
        if v.is_empty() {
            v.push(Poly::one());
        }
        while v.len() <= k as usize {
            let next = &v[v.len() - 1] * base;
            v.push(next);
        }
        v[k as usize].clone()
    }
}

fn substitute_poly(p: &Poly, table: &[Option<(&RatFn, u16)>], cache: &mut PowerCache) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut rest = *m;
        let mut term = Poly::one();
        for (i, entry) in table.iter().enumerate() {
            if let Some((image, n)) = entry {
                let e = m.0[i];
                rest.0[i] = 0;
                if e > 0 {
                    term = &term * &PowerCache::get(&mut cache.num, i, &image.num, e);
                }
                if *n > e {
                    term = &term * &PowerCache::get(&mut cache.den, i, &image.den, *n - e);
                }
            }
        }
        out = &out + &term.mul_monomial(&rest).scale(c);
    }
    out
}

fn monomial_lcm_denominators(a: &Poly, b: &Poly) -> Option<(Monomial, BigRational, BigRational)> {
    if a.is_monomial() && b.is_monomial() {
        let (ma, ca) = a.leading()?;
        let (mb, cb) = b.leading()?;
        Some((ma.lcm(mb), ca.clone(), cb.clone()))
    } else {
        None
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if let Some((l, ca, cb)) = monomial_lcm_denominators(&self.den, &rhs.den) {
            let (ma, _) = self.den.leading().unwrap();
            let (mb, _) = rhs.den.leading().unwrap();
            let na = self.num.mul_monomial(&ma.quotient_of(&l)).scale(&ca.recip());
            let nb = rhs.num.mul_monomial(&mb.quotient_of(&l)).scale(&cb.recip());
            return RatFn::normalized(&na + &nb, Poly::monomial(l, BigRational::one()));
        }
        RatFn::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        RatFn::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFn {
    type Output = RatFn;
    fn add(self, rhs: RatFn) -> RatFn {
        &self + &rhs
    }
}

impl Sub for RatFn {
    type Output = RatFn;
    fn sub(self, rhs: RatFn) -> RatFn {
        &self - &rhs
    }
}

impl Mul for RatFn {
    type Output = RatFn;
    fn mul(self, rhs: RatFn) -> RatFn {
        &self * &rhs
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: Sym) -> RatFn {
        RatFn::var(s)
    }

    #[test]
    fn parallel_of_equal_halves() {
        let x = v(Sym::Rc);
        let half = x.parallel(&x).unwrap();
        assert!(half.equals(&(&x * &RatFn::one().checked_div(&RatFn::int(2)).unwrap())));
    }

    #[test]
    fn sum_of_reciprocals() {
        let (x, y) = (v(Sym::Rc), v(Sym::Rf));
        let s = &x.recip().unwrap() + &y.recip().unwrap();
        let expect = (&x + &y).checked_div(&(&x * &y)).unwrap();
        assert!(s.equals(&expect));
    }

    #[test]
    fn mul_div_round_trip() {
        let (x, y) = (v(Sym::Rc), v(Sym::Gm));
        let f = (&x + &RatFn::int(3)).checked_div(&(&y - &x)).unwrap();
        let g = &y * &y + RatFn::int(1);
        let back = (&f * &g).checked_div(&g).unwrap();
        assert!(back.equals(&f));
    }

    #[test]
    fn unequal_detected() {
        let (x, y) = (v(Sym::Rc), v(Sym::Rf));
        let a = x.checked_div(&y).unwrap();
        let b = (&x + &RatFn::one()).checked_div(&y).unwrap();
        assert!(!a.equals(&b));
    }

    #[test]
    fn divide_by_zero_rejected() {
        assert_eq!(
            v(Sym::Rc).checked_div(&RatFn::zero()),
            Err(SymbolicError::DivisionByZero)
        );
        assert!(v(Sym::Rc).parallel(&-v(Sym::Rc)).is_err());
    }

    #[test]
    fn substitution_eliminates_alpha_and_rpi() {
        // alpha * r_m -> beta / (gm (beta + 1))
        let f = v(Sym::Alpha).checked_div(&v(Sym::Gm)).unwrap();
        let g = f.eliminate_derived();
        let beta = v(Sym::Beta);
        let expect = beta
            .checked_div(&(&v(Sym::Gm) * &(&beta + &RatFn::one())))
            .unwrap();
        assert!(g.equals(&expect));
        // r_pi / (r_pi + RF) -> beta / (beta + gm RF)
        let rpi = v(Sym::Rpi);
        let h = rpi.checked_div(&(&rpi + &v(Sym::Rf))).unwrap().eliminate_derived();
        let expect = beta
            .checked_div(&(&beta + &(&v(Sym::Gm) * &v(Sym::Rf))))
            .unwrap();
        assert!(h.equals(&expect));
    }

    #[test]
    fn substitution_is_simultaneous() {
        // Swapping ro and RF in ro/RF yields RF/ro.
        let f = v(Sym::Ro).checked_div(&v(Sym::Rf)).unwrap();
        let g = f.substitute(&[(Sym::Ro, v(Sym::Rf)), (Sym::Rf, v(Sym::Ro))]);
        assert!(g.equals(&v(Sym::Rf).checked_div(&v(Sym::Ro)).unwrap()));
    }

    #[test]
    fn limits() {
        let (r, a, b, c, d) = (v(Sym::Rf), v(Sym::Gm), v(Sym::Beta), v(Sym::Rc), v(Sym::Ro));
        let f = (&(&a * &r) + &b).checked_div(&(&(&c * &r) + &d)).unwrap();
        assert_eq!(
            f.limit_at_infinity(Sym::Rf).finite().map(|x| x.equals(&a.checked_div(&c).unwrap())),
            Some(true)
        );
        let g = b.checked_div(&(&(&c * &r) + &d)).unwrap();
        assert!(g.limit_at_infinity(Sym::Rf).finite().unwrap().is_zero());
        assert_eq!(r.limit_at_infinity(Sym::Rf), Limit::Unbounded);
        // r/(r + r^2) -> 1 at zero, even though both sides vanish there.
        let h = r.checked_div(&(&r + &(&r * &r))).unwrap();
        assert!(h.limit_at_zero(Sym::Rf).finite().unwrap().equals(&RatFn::one()));
        assert_eq!(r.recip().unwrap().limit_at_zero(Sym::Rf), Limit::Unbounded);
    }
}
