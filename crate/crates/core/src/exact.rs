//! Exact arithmetic foundation: rationals, dense univariate polynomials over
//! Q, rational functions in canonical form, and the Möbius substitution
//! `p(x) -> (x-1)^d · p(x/(x-1))`.
//!
//! Polynomials are dense and low-degree throughout this crate; the zero
//! polynomial is the empty coefficient list, so `degree` is `None` exactly
//! for zero and there is no degree-of-zero ambiguity.

use rug::{Integer, Rational};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("moebius_substitute needs d >= deg(p): d = {d}, deg = {deg}")]
    DegreeBound { d: usize, deg: usize },
    #[error("rational function denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("evaluation point is a pole of the denominator")]
    PoleAtPoint,
    #[error("malformed rational literal: {0:?}")]
    BadLiteral(String),
}

/// `n/d` as an exact rational; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(n)
}

/// Exact `n!` as a rational scalar.
pub fn factorial(n: u32) -> Rational {
    let mut f = Integer::from(1);
    for k in 2..=n {
        f *= k;
    }
    Rational::from(f)
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::from(0);
    }
    let k = k.min(n - k);
    let mut num = Integer::from(1);
    let mut den = Integer::from(1);
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Rising factorial `(a)_n = a(a+1)···(a+n-1)`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::from(1);
    let mut t = a.clone();
    for _ in 0..n {
        acc *= &t;
        t += 1;
    }
    acc
}

/// Formats a rational as the canonical `"num/den"` literal used in JSON.
pub fn rational_to_literal(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` (or a bare integer) back into a rational.
pub fn rational_from_literal(s: &str) -> Result<Rational, ExactError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| ExactError::BadLiteral(s.to_string()))
}

/// Dense univariate polynomial over Q, lowest degree first.
///
/// Invariant: the highest-index coefficient is nonzero unless the polynomial
/// is zero (empty list).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rational::new(), Rational::from(1)])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Builds from coefficients (lowest degree first), trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from small integers, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// True when every coefficient has denominator 1.
    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(Rational::from(&self.coeff(i) + &other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(Rational::from(c * &Rational::from(i as u64)));
        }
        Poly::from_coeffs(out)
    }

    /// Formal derivative applied `order` times.
    pub fn derivative_n(&self, order: u32) -> Poly {
        let mut p = self.clone();
        for _ in 0..order {
            p = p.derivative();
        }
        p
    }

    /// Horner evaluation.
    pub fn eval(&self, x0: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x0;
            acc += c;
        }
        acc
    }

    /// `(x-1)^d · p(x/(x-1))`, exactly.
    ///
    /// Requires `d >= deg(p)` so the substitution clears to a polynomial;
    /// applying the map twice with the same `d` returns the original
    /// polynomial (x ↦ x/(x-1) is an involution).
    pub fn moebius_substitute(&self, d: usize) -> Result<Poly, ExactError> {
        if let Some(deg) = self.degree() {
            if d < deg {
                return Err(ExactError::DegreeBound { d, deg });
            }
        }
        // sum_i c_i x^i (x-1)^{d-i}
        let xm1 = Poly::from_ints(&[-1, 1]);
        let mut pow = Poly::one(); // (x-1)^0
        let mut powers = vec![pow.clone()];
        for _ in 0..d {
            pow = pow.mul(&xm1);
            powers.push(pow.clone());
        }
        let mut acc = Poly::zero();
        let mut xi = Poly::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.cmp0() != std::cmp::Ordering::Equal {
                acc = acc.add(&xi.mul(&powers[d - i]).scale(c));
            }
            xi = xi.mul(&Poly::x());
        }
        Ok(acc)
    }

    /// Canonical JSON form: `["num/den", ...]` lowest degree first.
    pub fn to_json_coeffs(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_to_literal).collect()
    }

    pub fn from_json_coeffs(items: &[String]) -> Result<Poly, ExactError> {
        let coeffs = items
            .iter()
            .map(|s| rational_from_literal(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

fn fmt_coeff_times_power(c: &Rational, i: usize, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = c.cmp0() == std::cmp::Ordering::Less;
    let mag = Rational::from(c.abs_ref());
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let coeff_str = if *mag.denom() == 1 {
        mag.numer().to_string()
    } else {
        format!("({}/{})", mag.numer(), mag.denom())
    };
    match i {
        0 => write!(f, "{coeff_str}"),
        _ => {
            if mag != 1u32 {
                write!(f, "{coeff_str}")?;
            }
            if i == 1 {
                write!(f, "x")
            } else {
                write!(f, "x^{i}")
            }
        }
    }
}

impl fmt::Display for Poly {
    /// Descending powers, e.g. `16x^2 - 16x + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            fmt_coeff_times_power(c, i, first, f)?;
            first = false;
        }
        Ok(())
    }
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = b.degree().expect("division by zero polynomial");
    let mut rem = a.clone();
    let mut quo = Poly::zero();
    let blead = b.leading().unwrap().clone();
    while let Some(dr) = rem.degree() {
        if dr < db {
            break;
        }
        let factor = Rational::from(rem.leading().unwrap() / &blead);
        let shift = dr - db;
        let mut term_coeffs = vec![Rational::new(); shift + 1];
        term_coeffs[shift] = factor;
        let term = Poly::from_coeffs(term_coeffs);
        quo = quo.add(&term);
        rem = rem.sub(&term.mul(b));
    }
    (quo, rem)
}

/// Monic gcd over Q[x].
fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut p = a.clone();
    let mut q = b.clone();
    while !q.is_zero() {
        let (_, r) = poly_divrem(&p, &q);
        p = q;
        q = r;
    }
    match p.leading() {
        Some(lc) => p.scale(&Rational::from(lc.recip_ref())),
        None => Poly::zero(),
    }
}

/// Quotient of polynomials in canonical form: monic denominator,
/// `gcd(num, den) = 1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        Ok(rf)
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = poly_gcd(&self.num, &self.den);
        if g.degree() != Some(0) {
            self.num = poly_divrem(&self.num, &g).0;
            self.den = poly_divrem(&self.den, &g).0;
        }
        let lc = self.den.leading().unwrap().clone();
        if lc != 1u32 {
            let inv = Rational::from(lc.recip_ref());
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
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

    /// `Some(num)` when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        (self.den == Poly::one()).then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        if other.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        RationalFunction::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunction::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Quotient-rule derivative.
    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFunction::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    pub fn eval(&self, x0: &Rational) -> Result<Rational, ExactError> {
        let d = self.den.eval(x0);
        if d.cmp0() == std::cmp::Ordering::Equal {
            return Err(ExactError::PoleAtPoint);
        }
        Ok(self.num.eval(x0) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schoolbook_square() {
        let p = Poly::from_ints(&[-1, 2]); // 2x - 1
        assert_eq!(p.mul(&p), Poly::from_ints(&[1, -4, 4]));
    }

    #[test]
    fn add_zero_is_identity() {
        let p = Poly::from_ints(&[1, -16, 16]);
        assert_eq!(p.add(&Poly::zero()), p);
    }

    #[test]
    fn cubic_expansion() {
        // (1+x)(1+14x+x^2) = 1 + 15x + 15x^2 + x^3
        let a = Poly::from_ints(&[1, 1]);
        let b = Poly::from_ints(&[1, 14, 1]);
        assert_eq!(a.mul(&b), Poly::from_ints(&[1, 15, 15, 1]));
    }

    #[test]
    fn derivative_power_rule() {
        let p = Poly::from_ints(&[1, -16, 16]);
        assert_eq!(p.derivative(), Poly::from_ints(&[-16, 32]));
        assert_eq!(Poly::from_ints(&[-1, 2]).derivative_n(2), Poly::zero());
        // d/dx x^3 at 1/2 = 3/4
        let cubic = Poly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(cubic.derivative().eval(&rat(1, 2)), rat(3, 4));
    }

    #[test]
    fn eval_at_half() {
        assert_eq!(Poly::from_ints(&[-1, 2]).eval(&rat(1, 2)), rat_int(0));
        assert_eq!(Poly::from_ints(&[1, -16, 16]).eval(&rat(1, 2)), rat_int(-3));
        assert_eq!(Poly::constant(rat(7, 3)).eval(&rat(9, 5)), rat(7, 3));
    }

    #[test]
    fn moebius_examples() {
        // q_4 = -8(1+x), d = 1  ->  -8(2x-1)
        let q4 = Poly::from_ints(&[-8, -8]);
        assert_eq!(q4.moebius_substitute(1).unwrap(), Poly::from_ints(&[8, -16]));
        // constants pass through with d = 0
        let c = Poly::constant(rat(5, 7));
        assert_eq!(c.moebius_substitute(0).unwrap(), c);
        // p = x, d = 1: (x-1)·x/(x-1) = x
        assert_eq!(Poly::x().moebius_substitute(1).unwrap(), Poly::x());
    }

    #[test]
    fn moebius_rejects_small_d() {
        let p = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(
            p.moebius_substitute(1),
            Err(ExactError::DegreeBound { d: 1, deg: 2 })
        );
    }

    #[test]
    fn rational_function_canonical_form() {
        // (2x^2-2)/(4x-4) reduces to (x+1)/2 with monic denominator
        let rf = RationalFunction::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[-4, 4])).unwrap();
        assert_eq!(rf.num(), &Poly::from_coeffs(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(rf.den(), &Poly::one());
        let pole = RationalFunction::new(Poly::one(), Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(pole.eval(&rat_int(1)), Err(ExactError::PoleAtPoint));
    }

    #[test]
    fn rational_function_derivative_quotient_rule() {
        // d/dx (1/x) = -1/x^2
        let inv = RationalFunction::new(Poly::one(), Poly::x()).unwrap();
        let d = inv.derivative();
        assert_eq!(d, RationalFunction::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn json_coeff_round_trip() {
        let p = Poly::from_coeffs(vec![rat(1, 3), rat_int(0), rat(-7, 2)]);
        let js = p.to_json_coeffs();
        assert_eq!(js, vec!["1/3", "0/1", "-7/2"]);
        assert_eq!(Poly::from_json_coeffs(&js).unwrap(), p);
    }

    #[test]
    fn display_style() {
        assert_eq!(Poly::from_ints(&[1, -16, 16]).to_string(), "16x^2 - 16x + 1");
        assert_eq!(Poly::from_ints(&[-1, 2]).to_string(), "2x - 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(
            Poly::from_coeffs(vec![rat(2, 45), rat(-17, 45), rat(17, 45)]).to_string(),
            "(17/45)x^2 - (17/45)x + (2/45)"
        );
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..5)
            .prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn arithmetic_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn moebius_is_involutive(p in small_poly()) {
            let d = p.degree().unwrap_or(0);
            let once = p.moebius_substitute(d).unwrap();
            // deg(once) <= d, so the bound holds for the second application
            let twice = once.moebius_substitute(d).unwrap();
            prop_assert_eq!(twice, p);
        }

        #[test]
        fn derivative_matches_monomial_rule(n in 1usize..8, x0n in -5i64..=5, x0d in 1i64..=3) {
            let mut cs = vec![Rational::new(); n + 1];
            cs[n] = Rational::from(1);
            let p = Poly::from_coeffs(cs);
            let x0 = rat(x0n, x0d);
            // d/dx x^n = n x^{n-1}
            let lhs = p.derivative().eval(&x0);
            let mut pow = Rational::from(1);
            for _ in 0..n - 1 {
                pow *= &x0;
            }
            let rhs = Rational::from(n as u64) * pow;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rational_function_cancellation(p in small_poly(), q in small_poly(), r in small_poly()) {
            prop_assume!(!q.is_zero() && !r.is_zero());
            let plain = RationalFunction::new(p.clone(), q.clone()).unwrap();
            let inflated = RationalFunction::new(p.mul(&r), q.mul(&r)).unwrap();
            prop_assert_eq!(plain, inflated);
        }
    }
}
