//! Differential algebra over Q(x) in the symbols `z, z', z'', z⁽³⁾, z⁽⁴⁾`
//! with a global `(x(1-x))^{s/2}` prefactor.
//!
//! An expression is a canonical sum of terms `c(x)·z^a·(z')^{e₁}(z'')^{e₂}
//! (z⁽³⁾)^{e₃}(z⁽⁴⁾)^{e₄}` with rational-function coefficients; `a` may be
//! negative (the derivative of `1/(x(1-x)z²)` introduces `1/z³` terms).
//!
//! `d/dx` acts by the Leibniz rule: the prefactor contributes
//! `(s/2)(1-2x)(x(1-x))^{s/2-1}`, coefficients differentiate by the quotient
//! rule, and each `z⁽ⁱ⁾` maps to `z⁽ⁱ⁺¹⁾` (capped at order 4, which suffices
//! for two nested second y-derivatives). `d/dy = -x(1-x)z² · d/dx`.
//!
//! The family builders produce, at generic `x ∈ (0,1)`, the eight
//! hyperbolic-sum families (all over `n ≥ 1` with `(-1)ⁿ`):
//!
//! - `C1(p) = Σ (-1)ⁿ(2n-1)^{2p-1}/cosh(ñy) = (-1)^p/2 · z^{2p}√(x(1-x)) p_{2p-1}(x)`
//! - `C3, S4, C5`: cosh powers 3, 4 (with sinh weight), 5, lifted from C1 by
//!   exact y-derivative bookkeeping
//! - `B1(m) = Σ (-1)ⁿn^{2m+1}/sinh(ny) = (2m)!/2^{2m+2} · z^{2m+2} x(x-1) R_{2m}(x)`
//! - `B3, K4, B5`: sinh powers 3, 4 (with cosh weight), 5, lifted from B1.
//!
//! The lifts use `d/dy[1/cosh] = -ñ·sinh/cosh²`, `cosh² = 1 + sinh²` and the
//! sinh analogues, giving Q-linear relations between family members and
//! y-derivatives of lower ones; each lift is derived here independently and
//! verified against direct series summation in the test suite.

use crate::exact::{rat, ExactError, Poly, RationalFunction};
use crate::series::{SeriesError, Tables};
use rug::{Float, Rational};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Highest z-derivative symbol carried by the algebra.
pub const DERIV_ORDER_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("half-power mismatch in add/sub: {a} vs {b}")]
    HalfPowerMismatch { a: i32, b: i32 },
    #[error("half-power parity change from {from} to {to} is not representable")]
    HalfPowerParity { from: i32, to: i32 },
    #[error("derivative order overflow: expression needs z^({0}) but the cap is {DERIV_ORDER_CAP}")]
    DerivOrderOverflow(usize),
    #[error("family index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("coefficient denominator vanishes at the evaluation point")]
    CoefficientPole,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Exponent vector of one monomial: `z^{z_exp} Π (z⁽ⁱ⁺¹⁾)^{dz[i]}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DiffKey {
    pub z_exp: i32,
    pub dz: [u8; DERIV_ORDER_CAP],
}

impl DiffKey {
    pub fn z(z_exp: i32) -> Self {
        DiffKey { z_exp, dz: [0; DERIV_ORDER_CAP] }
    }
}

/// Canonical element of the differential algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffExpr {
    half_power: i32,
    terms: BTreeMap<DiffKey, RationalFunction>,
}

impl DiffExpr {
    pub fn zero(half_power: i32) -> Self {
        DiffExpr { half_power, terms: BTreeMap::new() }
    }

    pub fn from_term(half_power: i32, key: DiffKey, coeff: RationalFunction) -> Self {
        let mut e = DiffExpr::zero(half_power);
        e.add_term(key, coeff);
        e
    }

    pub fn half_power(&self) -> i32 {
        self.half_power
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffKey, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: DiffKey, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = o.get().add(&coeff);
                if merged.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
    }

    /// Strict addition: both operands must share the half-power (normalize
    /// first with [`DiffExpr::with_half_power`]).
    pub fn add(&self, other: &Self) -> Result<Self, DiffError> {
        if self.half_power != other.half_power {
            return Err(DiffError::HalfPowerMismatch { a: self.half_power, b: other.half_power });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DiffError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DiffExpr {
            half_power: self.half_power,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// Product; half-powers add, exponent vectors add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = DiffExpr::zero(self.half_power + other.half_power);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut dz = ka.dz;
                for (d, s) in dz.iter_mut().zip(kb.dz.iter()) {
                    *d += s;
                }
                out.add_term(DiffKey { z_exp: ka.z_exp + kb.z_exp, dz }, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, f: &RationalFunction) -> Self {
        if f.is_zero() {
            return DiffExpr::zero(self.half_power);
        }
        DiffExpr {
            half_power: self.half_power,
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul(f))).collect(),
        }
    }

    pub fn scale_rat(&self, c: &Rational) -> Self {
        self.scale(&RationalFunction::constant(c.clone()))
    }

    /// Rewrites to a different prefactor half-power of the same parity by
    /// folding `(x(1-x))^{(s_old-s_new)/2}` into the coefficients.
    pub fn with_half_power(&self, s_new: i32) -> Result<Self, DiffError> {
        if (self.half_power - s_new) % 2 != 0 {
            return Err(DiffError::HalfPowerParity { from: self.half_power, to: s_new });
        }
        let k = (self.half_power - s_new) / 2;
        if k == 0 {
            let mut e = self.clone();
            e.half_power = s_new;
            return Ok(e);
        }
        let base = RationalFunction::from_poly(Poly::from_ints(&[0, 1, -1])); // x(1-x)
        let mut factor = RationalFunction::one();
        for _ in 0..k.unsigned_abs() {
            factor = factor.mul(&base);
        }
        if k < 0 {
            factor = RationalFunction::one().div(&factor)?;
        }
        let mut out = self.scale(&factor);
        out.half_power = s_new;
        Ok(out)
    }

    /// `d/dx`, lowering the half-power by 2:
    /// `(x(1-x))^{s/2} c·M  ↦  (x(1-x))^{(s-2)/2} [ (s/2)(1-2x)·c·M
    ///  + x(1-x)·(c'·M + c·dM) ]` with `dM` by the Leibniz rule on the
    /// z-symbols.
    pub fn d_dx(&self) -> Result<Self, DiffError> {
        let xx = RationalFunction::from_poly(Poly::from_ints(&[0, 1, -1])); // x(1-x)
        let one_minus_2x = RationalFunction::from_poly(Poly::from_ints(&[1, -2]));
        let mut out = DiffExpr::zero(self.half_power - 2);
        for (k, c) in &self.terms {
            if self.half_power != 0 {
                let pref = one_minus_2x.scale(&rat(self.half_power as i64, 2));
                out.add_term(*k, c.mul(&pref));
            }
            out.add_term(*k, c.derivative().mul(&xx));
            if k.z_exp != 0 {
                let mut key = *k;
                key.z_exp -= 1;
                key.dz[0] += 1;
                out.add_term(key, c.mul(&xx).scale(&rat(k.z_exp as i64, 1)));
            }
            for i in 0..DERIV_ORDER_CAP {
                if k.dz[i] == 0 {
                    continue;
                }
                if i + 1 == DERIV_ORDER_CAP {
                    return Err(DiffError::DerivOrderOverflow(DERIV_ORDER_CAP + 1));
                }
                let mut key = *k;
                key.dz[i] -= 1;
                key.dz[i + 1] += 1;
                out.add_term(key, c.mul(&xx).scale(&rat(k.dz[i] as i64, 1)));
            }
        }
        Ok(out)
    }

    /// `d/dy = (dx/dy)·d/dx` with `dx/dy = -x(1-x)z²`.
    pub fn d_dy(&self) -> Result<Self, DiffError> {
        let d = self.d_dx()?;
        let minus_xx = RationalFunction::from_poly(Poly::from_ints(&[0, -1, 1])); // x² - x
        let mut out = DiffExpr::zero(d.half_power);
        for (k, c) in &d.terms {
            let mut key = *k;
            key.z_exp += 2;
            out.add_term(key, c.mul(&minus_xx));
        }
        Ok(out)
    }

    /// Numeric value at `x0` given precomputed `z⁽ⁿ⁾(x0)` for n = 0..=4.
    pub fn eval_with_z(&self, x0: &Float, zd: &[Float; 5], prec: u32) -> Result<Float, DiffError> {
        use rug::ops::Pow;
        let sqrt_pref = {
            let t = Float::with_val(prec, x0 * &Float::with_val(prec, 1u32 - x0)).sqrt();
            Float::with_val(prec, (&t).pow(self.half_power))
        };
        let mut acc = Float::new(prec);
        for (k, c) in &self.terms {
            let cv = eval_rf_float(c, x0, prec).ok_or(DiffError::CoefficientPole)?;
            let mut term = cv;
            term *= Float::with_val(prec, (&zd[0]).pow(k.z_exp));
            for (i, &e) in k.dz.iter().enumerate() {
                if e > 0 {
                    term *= Float::with_val(prec, (&zd[i + 1]).pow(e as u32));
                }
            }
            acc += term;
        }
        Ok(acc * sqrt_pref)
    }

    /// LaTeX rendering in the display style of the worked examples.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        match self.half_power {
            0 => {}
            1 => s.push_str("\\sqrt{x(1-x)}\\,"),
            h => s.push_str(&format!("\\left(x(1-x)\\right)^{{{h}/2}}\\,")),
        }
        s.push_str("\\Big[");
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                s.push_str(" + ");
            }
            first = false;
            s.push_str(&format!("\\left({c}\\right)"));
            if k.z_exp != 0 {
                s.push_str(&format!("z^{{{}}}", k.z_exp));
            }
            for (i, &e) in k.dz.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let sym = match i {
                    0 => "z'".to_string(),
                    1 => "z''".to_string(),
                    j => format!("z^{{({})}}", j + 1),
                };
                if e == 1 {
                    s.push_str(&format!("\\,{sym}"));
                } else {
                    s.push_str(&format!("\\,({sym})^{{{e}}}"));
                }
            }
        }
        s.push_str("\\Big]");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "half_power": self.half_power,
            "terms": self.terms.iter().map(|(k, c)| json!({
                "z_exp": k.z_exp,
                "dz": k.dz,
                "num": c.num().to_json_coeffs(),
                "den": c.den().to_json_coeffs(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for DiffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.latex())
    }
}

fn eval_poly_float(p: &Poly, x0: &Float, prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for c in p.coeffs().iter().rev() {
        acc *= x0;
        acc += Float::with_val(prec, c);
    }
    acc
}

fn eval_rf_float(rf: &RationalFunction, x0: &Float, prec: u32) -> Option<Float> {
    let den = eval_poly_float(rf.den(), x0, prec);
    if den.is_zero() {
        return None;
    }
    Some(eval_poly_float(rf.num(), x0, prec) / den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoshFamily {
    /// `Σ (-1)ⁿ(2n-1)^{2p-1}/cosh(ñy)`
    C1,
    /// `Σ (-1)ⁿ(2n-1)^{2p+1}/cosh³(ñy)`
    C3,
    /// `Σ (-1)ⁿ(2n-1)^{2p+2}·sinh(ñy)/cosh⁴(ñy)`
    S4,
    /// `Σ (-1)ⁿ(2n-1)^{2p+3}/cosh⁵(ñy)`
    C5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SinhFamily {
    /// `Σ (-1)ⁿn^{2p+1}/sinh(ny)`
    B1,
    /// `Σ (-1)ⁿn^{2p+3}/sinh³(ny)`
    B3,
    /// `Σ (-1)ⁿn^{2p+4}·cosh(ny)/sinh⁴(ny)`
    K4,
    /// `Σ (-1)ⁿn^{2p+5}/sinh⁵(ny)`
    B5,
}

fn c1_expr(p: u32, tables: &Tables) -> Result<DiffExpr, DiffError> {
    if p < 1 {
        return Err(DiffError::IndexOutOfRange("C1 needs p >= 1".into()));
    }
    let poly = tables.p.get(p as usize - 1)?.clone();
    let sign = if p % 2 == 0 { rat(1, 2) } else { rat(-1, 2) };
    Ok(DiffExpr::from_term(
        1,
        DiffKey::z(2 * p as i32),
        RationalFunction::from_poly(poly.scale(&sign)),
    ))
}

fn b1_expr(m: u32, tables: &Tables) -> Result<DiffExpr, DiffError> {
    if m < 1 {
        return Err(DiffError::IndexOutOfRange("B1 needs p >= 1".into()));
    }
    let r = tables.r.get(m as usize)?.clone();
    let x_xm1 = Poly::from_ints(&[0, -1, 1]); // x(x-1)
    let scale = crate::exact::factorial(2 * m) * rat(1, 1i64 << (2 * m + 2));
    Ok(DiffExpr::from_term(
        0,
        DiffKey::z(2 * m as i32 + 2),
        RationalFunction::from_poly(r.mul(&x_xm1).scale(&scale)),
    ))
}

/// Symbolic expression for a cosh-power family at generic `x`, normalized to
/// half-power 1 (all coefficients stay polynomial after normalization).
pub fn cosh_family_expr(family: CoshFamily, p: u32, tables: &Tables) -> Result<DiffExpr, DiffError> {
    match family {
        CoshFamily::C1 => c1_expr(p, tables),
        CoshFamily::C3 => {
            // d/dy[1/cosh] = -ñ sinh/cosh²  and  d/dy[sinh/cosh²] = ñ(2/cosh³ - 1/cosh)
            // give C3(p) = -2·d²/dy² C1(p) + 1/2·C1(p+1).
            let dd = c1_expr(p, tables)?.d_dy()?.d_dy()?;
            let shifted = c1_expr(p + 1, tables)?.with_half_power(dd.half_power())?;
            dd.scale_rat(&rat(-2, 1))
                .add(&shifted.scale_rat(&rat(1, 2)))?
                .with_half_power(1)
        }
        CoshFamily::S4 => {
            // d/dy[1/cosh³] = -3ñ sinh/cosh⁴ gives S4(p) = -2/3·d/dy C3(p).
            let d = cosh_family_expr(CoshFamily::C3, p, tables)?.d_dy()?;
            d.scale_rat(&rat(-2, 3)).with_half_power(1)
        }
        CoshFamily::C5 => {
            // d/dy[sinh/cosh⁴] = ñ(4/cosh⁵ - 3/cosh³) gives
            // C5(p) = 1/2·d/dy S4(p) + 3/4·C3(p+1).
            let d = cosh_family_expr(CoshFamily::S4, p, tables)?.d_dy()?;
            let shifted = cosh_family_expr(CoshFamily::C3, p + 1, tables)?.with_half_power(d.half_power())?;
            d.scale_rat(&rat(1, 2))
                .add(&shifted.scale_rat(&rat(3, 4)))?
                .with_half_power(1)
        }
    }
}

/// Symbolic expression for a sinh-power family at generic `x`, normalized to
/// half-power 0 with explicit `x(x-1)` factors in the coefficients.
pub fn sinh_family_expr(family: SinhFamily, p: u32, tables: &Tables) -> Result<DiffExpr, DiffError> {
    match family {
        SinhFamily::B1 => b1_expr(p, tables),
        SinhFamily::B3 => {
            // d/dy[1/sinh] = -n cosh/sinh²  and  d/dy[cosh/sinh²] = -n(1/sinh + 2/sinh³)
            // give B3(p) = 1/2·(d²/dy² B1(p) - B1(p+1)).
            let dd = b1_expr(p, tables)?.d_dy()?.d_dy()?;
            let shifted = b1_expr(p + 1, tables)?.with_half_power(dd.half_power())?;
            dd.sub(&shifted)?.scale_rat(&rat(1, 2)).with_half_power(0)
        }
        SinhFamily::K4 => {
            // d/dy[1/sinh³] = -3n cosh/sinh⁴ gives K4(p) = -1/3·d/dy B3(p).
            let d = sinh_family_expr(SinhFamily::B3, p, tables)?.d_dy()?;
            d.scale_rat(&rat(-1, 3)).with_half_power(0)
        }
        SinhFamily::B5 => {
            // d/dy[cosh/sinh⁴] = -n(3/sinh³ + 4/sinh⁵) gives
            // B5(p) = 1/12·d²/dy² B3(p) - 3/4·B3(p+1).
            let dd = sinh_family_expr(SinhFamily::B3, p, tables)?.d_dy()?.d_dy()?;
            let shifted = sinh_family_expr(SinhFamily::B3, p + 1, tables)?.with_half_power(dd.half_power())?;
            dd.scale_rat(&rat(1, 12))
                .add(&shifted.scale_rat(&rat(-3, 4)))?
                .with_half_power(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;
    use proptest::prelude::*;

    fn rf_poly(ints: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Poly::from_ints(ints))
    }

    fn z_sym() -> DiffExpr {
        DiffExpr::from_term(0, DiffKey::z(1), RationalFunction::one())
    }

    #[test]
    fn d_dx_of_z_is_z_prime() {
        let d = z_sym().d_dx().unwrap();
        assert_eq!(d.half_power(), -2);
        // x(1-x)·z' at half-power -2 == z' at half-power 0
        let normalized = d.with_half_power(0).unwrap();
        let expected = DiffExpr::from_term(0, DiffKey { z_exp: 0, dz: [1, 0, 0, 0] }, RationalFunction::one());
        assert_eq!(normalized, expected);
    }

    #[test]
    fn d_dy_of_z() {
        // d/dy z = -x(1-x) z² z'
        let d = z_sym().d_dy().unwrap().with_half_power(0).unwrap();
        let expected = DiffExpr::from_term(0, DiffKey { z_exp: 2, dz: [1, 0, 0, 0] }, rf_poly(&[0, -1, 1]));
        assert_eq!(d, expected);
    }

    #[test]
    fn d_dy_of_constant_vanishes() {
        let c = DiffExpr::from_term(0, DiffKey::z(0), RationalFunction::constant(rat(5, 3)));
        assert!(c.d_dy().unwrap().is_zero());
    }

    #[test]
    fn prefactor_derivative() {
        // d/dx (√(x(1-x)) z²) = (x(1-x))^{-1/2}·[(1-2x)/2·z² + x(1-x)·2zz']
        let e = DiffExpr::from_term(1, DiffKey::z(2), RationalFunction::one());
        let d = e.d_dx().unwrap();
        assert_eq!(d.half_power(), -1);
        let mut expected = DiffExpr::zero(-1);
        expected.add_term(DiffKey::z(2), rf_poly(&[1, -2]).scale(&rat(1, 2)));
        expected.add_term(DiffKey { z_exp: 1, dz: [1, 0, 0, 0] }, rf_poly(&[0, 2, -2]));
        assert_eq!(d, expected);
    }

    #[test]
    fn mul_adds_exponents() {
        let zzp = DiffExpr::from_term(0, DiffKey { z_exp: 1, dz: [1, 0, 0, 0] }, RationalFunction::one());
        let sq = zzp.mul(&zzp);
        let expected = DiffExpr::from_term(0, DiffKey { z_exp: 2, dz: [2, 0, 0, 0] }, RationalFunction::one());
        assert_eq!(sq, expected);
    }

    #[test]
    fn add_requires_matching_half_power() {
        let a = DiffExpr::from_term(1, DiffKey::z(1), RationalFunction::one());
        let b = DiffExpr::from_term(-1, DiffKey::z(1), RationalFunction::one());
        assert!(matches!(a.add(&b), Err(DiffError::HalfPowerMismatch { .. })));
        assert!(a.add(&b.with_half_power(1).unwrap()).is_ok());
    }

    #[test]
    fn half_power_parity_is_enforced() {
        let a = DiffExpr::from_term(1, DiffKey::z(1), RationalFunction::one());
        assert!(matches!(a.with_half_power(0), Err(DiffError::HalfPowerParity { .. })));
    }

    #[test]
    fn deriv_order_overflow_is_reported() {
        let top = DiffExpr::from_term(0, DiffKey { z_exp: 0, dz: [0, 0, 0, 1] }, RationalFunction::one());
        assert!(matches!(top.d_dx(), Err(DiffError::DerivOrderOverflow(_))));
    }

    #[test]
    fn c1_base_case() {
        let t = Tables::generate(3);
        let c1 = cosh_family_expr(CoshFamily::C1, 1, &t).unwrap();
        assert_eq!(c1.half_power(), 1);
        let expected = DiffExpr::from_term(1, DiffKey::z(2), RationalFunction::constant(rat(-1, 2)));
        assert_eq!(c1, expected);
    }

    #[test]
    fn b1_base_case() {
        // B1(1) = z⁴ x(x-1)/8
        let t = Tables::generate(3);
        let b1 = sinh_family_expr(SinhFamily::B1, 1, &t).unwrap();
        let expected = DiffExpr::from_term(0, DiffKey::z(4), rf_poly(&[0, -1, 1]).scale(&rat(1, 8)));
        assert_eq!(b1, expected);
    }

    #[test]
    fn family_half_powers_and_polynomial_coefficients() {
        let t = Tables::generate(6);
        for f in [CoshFamily::C3, CoshFamily::S4, CoshFamily::C5] {
            let e = cosh_family_expr(f, 1, &t).unwrap();
            assert_eq!(e.half_power(), 1);
            for (_, c) in e.terms() {
                assert!(c.as_poly().is_some(), "non-polynomial coefficient {c}");
            }
        }
        for f in [SinhFamily::B3, SinhFamily::K4, SinhFamily::B5] {
            let e = sinh_family_expr(f, 1, &t).unwrap();
            assert_eq!(e.half_power(), 0);
            for (_, c) in e.terms() {
                assert!(c.as_poly().is_some(), "non-polynomial coefficient {c}");
            }
        }
    }

    /// C3(1), written out: the worked example block
    /// `-1/4·√(x(1-x)) z⁴ {2x-1 + z²(8x²-8x+1) + 24(x-1)²x²(z')²
    ///   + 4(x-1)xz[5(2x-1)z' + 2(x-1)xz'']}`
    /// negated for the n ≥ 1 (-1)ⁿ convention.
    #[test]
    fn c3_matches_transcribed_block() {
        let t = Tables::generate(4);
        let c3 = cosh_family_expr(CoshFamily::C3, 1, &t).unwrap();
        let mut block = DiffExpr::zero(1);
        // -1/4 z⁴ (2x-1)
        block.add_term(DiffKey::z(4), rf_poly(&[-1, 2]).scale(&rat(-1, 4)));
        // -1/4 z⁶ (8x²-8x+1)
        block.add_term(DiffKey::z(6), rf_poly(&[1, -8, 8]).scale(&rat(-1, 4)));
        // -6 (x-1)²x² z⁴ (z')²
        block.add_term(
            DiffKey { z_exp: 4, dz: [2, 0, 0, 0] },
            rf_poly(&[0, 0, 1, -2, 1]).scale(&rat(-6, 1)),
        );
        // -5 (x-1)x(2x-1) z⁵ z'
        block.add_term(
            DiffKey { z_exp: 5, dz: [1, 0, 0, 0] },
            rf_poly(&[0, -1, 1]).mul(&rf_poly(&[-1, 2])).scale(&rat(-5, 1)),
        );
        // -2 (x-1)²x² z⁵ z''
        block.add_term(
            DiffKey { z_exp: 5, dz: [0, 1, 0, 0] },
            rf_poly(&[0, 0, 1, -2, 1]).scale(&rat(-2, 1)),
        );
        assert_eq!(c3.neg(), block);
    }

    /// B3(1): the worked example `(x-1)x z⁶/16 {2x-1 + z²(6x²-6x+1)
    ///   + 20(x-1)²x²(z')² + 2(x-1)xz[7(2x-1)z' + 2(x-1)xz'']}`.
    #[test]
    fn b3_matches_transcribed_block() {
        let t = Tables::generate(4);
        let b3 = sinh_family_expr(SinhFamily::B3, 1, &t).unwrap();
        let xx1 = rf_poly(&[0, -1, 1]); // x(x-1) = x² - x
        let mut block = DiffExpr::zero(0);
        block.add_term(DiffKey::z(6), xx1.mul(&rf_poly(&[-1, 2])).scale(&rat(1, 16)));
        block.add_term(DiffKey::z(8), xx1.mul(&rf_poly(&[1, -6, 6])).scale(&rat(1, 16)));
        block.add_term(
            DiffKey { z_exp: 6, dz: [2, 0, 0, 0] },
            xx1.mul(&rf_poly(&[0, 0, 1, -2, 1])).scale(&rat(20, 16)),
        );
        block.add_term(
            DiffKey { z_exp: 7, dz: [1, 0, 0, 0] },
            xx1.mul(&xx1).mul(&rf_poly(&[-1, 2])).scale(&rat(14, 16)),
        );
        block.add_term(
            DiffKey { z_exp: 7, dz: [0, 1, 0, 0] },
            xx1.mul(&xx1).mul(&xx1).scale(&rat(4, 16)),
        );
        assert_eq!(b3, block);
    }

    /// The cosh³ lift must agree with the direct transcription of the
    /// second-derivative route:
    /// `-(-1)^m/4·z^{2m+4}√·p_{2m+3} + y''/(y')³·d/dx[(-1)^m z^{2m+2}√·p_{2m+1}]
    ///   - 4/(y')²·d²/dx²[(-1)^m/4·z^{2m+2}√·p_{2m+1}]`
    /// with `y' = -1/(x(1-x)z²)`; our C3(p) is the n ≥ 1 form, equal to minus
    /// the n ≥ 0 form, with m = p-1.
    #[test]
    fn c3_matches_second_derivative_transcription() {
        let tables = Tables::generate(6);
        for p in 1..=3u32 {
            let m = p - 1;
            let sign = if m % 2 == 0 { rat_int(1) } else { rat_int(-1) };

            // y' = -1/(x(1-x)z²) at half-power 0
            let y1 = DiffExpr::from_term(
                0,
                DiffKey::z(-2),
                RationalFunction::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 1, -1])).unwrap(),
            );
            let y2 = y1.d_dx().unwrap().with_half_power(0).unwrap(); // y''
            // dx/dy = -x(1-x)z²; 1/(y')² = (dx/dy)²; y''/(y')³ = y''·(dx/dy)³
            let dxdy = DiffExpr::from_term(0, DiffKey::z(2), rf_poly(&[0, -1, 1]));
            let dxdy2 = dxdy.mul(&dxdy);
            let dxdy3 = dxdy2.mul(&dxdy);

            // base(m) = (-1)^m z^{2m+2} √· p_{2m+1}
            let base = DiffExpr::from_term(
                1,
                DiffKey::z(2 * m as i32 + 2),
                RationalFunction::from_poly(tables.p.get(m as usize).unwrap().scale(&sign)),
            );
            let first = DiffExpr::from_term(
                1,
                DiffKey::z(2 * m as i32 + 4),
                RationalFunction::from_poly(
                    tables.p.get(m as usize + 1).unwrap().scale(&Rational::from(-&sign * rat(1, 4))),
                ),
            );

            let term2 = y2.mul(&dxdy3).mul(&base.d_dx().unwrap());
            let term3 = dxdy2
                .mul(&base.scale_rat(&rat(1, 4)).d_dx().unwrap().d_dx().unwrap())
                .scale_rat(&rat(-4, 1));
            let s = term2.half_power();
            let transcribed = first
                .with_half_power(s)
                .unwrap()
                .add(&term2)
                .unwrap()
                .add(&term3.with_half_power(s).unwrap())
                .unwrap()
                .with_half_power(1)
                .unwrap();

            let built = cosh_family_expr(CoshFamily::C3, p, &tables).unwrap();
            assert_eq!(built.neg(), transcribed, "p = {p}");
        }
    }

    proptest! {
        /// d/dx is a derivation: d(a·b) = da·b + a·db.
        #[test]
        fn d_dx_is_a_derivation(za in -2i32..3, zb in -2i32..3,
                                da in 0u8..2, db in 0u8..2,
                                ca in -4i64..5, cb in -4i64..5) {
            prop_assume!(ca != 0 && cb != 0);
            let a = DiffExpr::from_term(0, DiffKey { z_exp: za, dz: [da, 0, 0, 0] },
                RationalFunction::from_poly(Poly::from_ints(&[1, ca])));
            let b = DiffExpr::from_term(0, DiffKey { z_exp: zb, dz: [0, db, 0, 0] },
                RationalFunction::from_poly(Poly::from_ints(&[cb, 0, 1])));
            let lhs = a.mul(&b).d_dx().unwrap();
            let rhs = a.d_dx().unwrap().mul(&b).add(&a.mul(&b.d_dx().unwrap())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
