//! Arbitrary-precision numeric oracle, backed by MPFR floats.
//!
//! Everything here is independent of the symbolic pipeline: constants come
//! from the AGM, elliptic data from `K = π/(2·agm(1, k'))`, `z`-derivatives
//! from the ₂F₁ series, hyperbolic sums from direct summation with analytic
//! tail bounds, and integrals from composite Gauss–Legendre quadrature with
//! an incomplete-gamma tail bound. The verification suite compares these
//! values against the exact closed forms.
//!
//! Precision contract: every public operation returns a value with relative
//! error at most `10^(1 - target_digits)` (absolute for values within
//! `10^(-target_digits)` of zero). The working precision is
//! `target_digits·log₂10` bits plus `guard_bits`, and each operation carries
//! its own analytic error budget well inside the guard.

use crate::closedform::GammaPiExpr;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;
use thiserror::Error;

const LOG2_10: f64 = 3.321928094887362;

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("series did not converge within {max_terms} terms (x = {x})")]
    Convergence { max_terms: usize, x: String },
    #[error("argument out of range: {0}")]
    ArgumentOutOfRange(String),
    #[error("panel order escalation exceeded {max_order} on panel [{panel_lo}, {panel_lo}+1]")]
    PanelEscalation { max_order: u32, panel_lo: u32 },
}

/// Quadrature configuration: Gauss–Legendre order ladder per unit panel.
#[derive(Clone, Debug)]
pub struct QuadConfig {
    pub start_order: u32,
    pub max_order: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { start_order: 24, max_order: 256 }
    }
}

/// Immutable precision context passed to every numeric operation.
#[derive(Clone, Debug)]
pub struct NumericContext {
    pub target_digits: u32,
    pub guard_bits: u32,
    pub max_series_terms: usize,
    pub quad: QuadConfig,
}

impl NumericContext {
    pub fn new(target_digits: u32) -> Self {
        assert!(target_digits >= 10, "target_digits must be at least 10");
        NumericContext {
            target_digits,
            guard_bits: 50,
            max_series_terms: 100_000,
            quad: QuadConfig::default(),
        }
    }

    /// Working precision in bits.
    pub fn prec(&self) -> u32 {
        (self.target_digits as f64 * LOG2_10).ceil() as u32 + self.guard_bits
    }

    pub fn new_float(&self, v: f64) -> Float {
        Float::with_val(self.prec(), v)
    }

    pub fn from_rational(&self, r: &Rational) -> Float {
        Float::with_val(self.prec(), r)
    }

    /// `10^(-(target_digits + extra))`.
    pub fn eps(&self, extra: u32) -> Float {
        Float::with_val(self.prec(), 10).pow(-((self.target_digits + extra) as i32))
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec(), Constant::Pi)
    }
}

/// Arithmetic-geometric mean of two positive values.
pub fn agm(a: &Float, b: &Float, ctx: &NumericContext) -> Float {
    let prec = ctx.prec();
    let mut a = Float::with_val(prec, a);
    let mut b = Float::with_val(prec, b);
    let stop = Float::with_val(prec, &a * &b).sqrt() >> (prec - 8);
    loop {
        let am = Float::with_val(prec, &a + &b) / 2u32;
        let gm = Float::with_val(prec, &a * &b).sqrt();
        let diff = Float::with_val(prec, &am - &gm).abs();
        a = am;
        b = gm;
        if diff < stop {
            return (a + b) / 2u32;
        }
    }
}

/// `Γ(1/4)` via the lemniscatic identity `Γ(1/4)² = (2π)^{3/2} / agm(1, √2)`.
pub fn gamma_quarter(ctx: &NumericContext) -> Float {
    let prec = ctx.prec();
    let two_pi = ctx.pi() * 2u32;
    let sqrt2 = Float::with_val(prec, 2).sqrt();
    let m = agm(&Float::with_val(prec, 1), &sqrt2, ctx);
    let num = two_pi.pow(3u32).sqrt();
    (num / m).sqrt()
}

/// Ramanujan's numeric data at modulus `x = k²`:
/// `K`, `K' = K(1-x)`, `y = πK'/K`, `z = 2K/π`.
#[derive(Clone, Debug)]
pub struct EllipticData {
    pub x: Float,
    pub k_complete: Float,
    pub k_complement: Float,
    pub y: Float,
    pub z: Float,
}

/// Complete elliptic integral `K(x) = π / (2·agm(1, √(1-x)))` and friends.
pub fn elliptic_data(x: &Float, ctx: &NumericContext) -> Result<EllipticData, NumericsError> {
    let prec = ctx.prec();
    if !(x.is_finite() && *x > 0u32 && *x < 1u32) {
        return Err(NumericsError::ArgumentOutOfRange(format!("x = {x} not in (0,1)")));
    }
    let one = Float::with_val(prec, 1);
    let kp_mod = Float::with_val(prec, 1u32 - x).sqrt();
    let k_mod = Float::with_val(prec, x).sqrt();
    let pi = ctx.pi();
    let k_complete = Float::with_val(prec, &pi / (2u32 * agm(&one, &kp_mod, ctx)));
    let k_complement = Float::with_val(prec, &pi / (2u32 * agm(&one, &k_mod, ctx)));
    let y = Float::with_val(prec, &pi * &k_complement) / &k_complete;
    let z = Float::with_val(prec, 2u32 * &k_complete) / &pi;
    Ok(EllipticData { x: Float::with_val(prec, x), k_complete, k_complement, y, z })
}

/// `₂F₁(1/2+n, 1/2+n; 1+n; x)` by direct series with a geometric tail bound.
///
/// The term ratio is `x·(k+n+1/2)²/((k+n+1)(k+1)) → x`, monotone decreasing
/// once `k ≥ n`, so after each term the remaining tail is below
/// `term·ρ/(1-ρ)` with `ρ` the current ratio. Requires `x ≤ 0.7` so the
/// series budget stays reasonable.
pub fn hyp2f1_halfplus(n: u32, x: &Float, ctx: &NumericContext) -> Result<Float, NumericsError> {
    let prec = ctx.prec() + 16;
    if !(x.is_finite() && *x >= 0u32 && x.to_f64() <= 0.7) {
        return Err(NumericsError::ArgumentOutOfRange(format!(
            "x = {x} outside [0, 0.7] for the 2F1 series"
        )));
    }
    let x = Float::with_val(prec, x);
    let mut term = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 1);
    let eps = Float::with_val(prec, 1) >> (ctx.prec() + 8);
    for k in 0..ctx.max_series_terms {
        let kf = k as f64;
        let half = Float::with_val(prec, 0.5 + n as f64 + kf);
        let ratio = Float::with_val(prec, half.square() * &x)
            / Float::with_val(prec, (1.0 + n as f64 + kf) * (1.0 + kf));
        term *= &ratio;
        sum += &term;
        // every later ratio is at most x·(1 + n/(k+2)), so the tail is
        // geometric below that rate
        let rho = Float::with_val(prec, &x * Float::with_val(prec, 1.0 + n as f64 / (kf + 2.0)));
        if rho < 1u32 {
            let bound = Float::with_val(prec, &term * &rho) / Float::with_val(prec, 1u32 - &rho);
            if bound.abs() < eps {
                return Ok(Float::with_val(ctx.prec(), &sum));
            }
        }
    }
    Err(NumericsError::Convergence { max_terms: ctx.max_series_terms, x: x.to_string() })
}

/// Numeric `dⁿz/dxⁿ = ((1/2)ₙ²/n!)·₂F₁(1/2+n, 1/2+n; 1+n; x)` for n = 0..=4.
pub fn z_derivs_numeric(x: &Float, ctx: &NumericContext) -> Result<[Float; 5], NumericsError> {
    let prec = ctx.prec();
    let mut out = [
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
        Float::new(prec),
    ];
    for (n, slot) in out.iter_mut().enumerate() {
        let f = hyp2f1_halfplus(n as u32, x, ctx)?;
        let scale = crate::exact::pochhammer(&crate::exact::rat(1, 2), n as u32)
            .square()
            / crate::exact::factorial(n as u32);
        *slot = f * Float::with_val(prec, &scale);
    }
    Ok(out)
}

fn theta_q_powers(q: &Float, prec: u32, eps: &Float) -> (Vec<Float>, Vec<Float>) {
    // q^{n²} for n >= 1 and q^{n(n+1)} for n >= 0, truncated below eps
    let mut sq = Vec::new();
    let mut tr = vec![Float::with_val(prec, 1)];
    let mut n = 1u32;
    loop {
        let e_sq = Float::with_val(prec, q.pow(n * n));
        let e_tr = Float::with_val(prec, q.pow(n * (n + 1)));
        let done = e_sq < *eps && e_tr < *eps;
        sq.push(e_sq);
        tr.push(e_tr);
        n += 1;
        if done {
            return (sq, tr);
        }
    }
}

/// Jacobi elliptic `sn`, `cn`, `dn` at modulus `x = k²` via theta quotients
/// with nome `q = e^{-y}` and argument `v = u/z`.
pub fn jacobi_sn_cn_dn(
    u: &Float,
    x: &Float,
    ctx: &NumericContext,
) -> Result<(Float, Float, Float), NumericsError> {
    let prec = ctx.prec() + 16;
    let ed = elliptic_data(x, ctx)?;
    if !(u.clone().abs() < ed.k_complete) {
        return Err(NumericsError::ArgumentOutOfRange(format!(
            "|u| = {} must be below K = {}",
            u.clone().abs(),
            ed.k_complete
        )));
    }
    let q = Float::with_val(prec, (-ed.y.clone()).exp());
    let q4 = Float::with_val(prec, (Float::with_val(prec, -&ed.y) / 4u32).exp());
    let v = Float::with_val(prec, u / &ed.z);
    let eps = Float::with_val(prec, 1) >> (prec - 4);
    let (sq, tr) = theta_q_powers(&q, prec, &eps);

    let mut th1 = Float::new(prec);
    let mut th2 = Float::new(prec);
    let mut th20 = Float::new(prec);
    for (n, qn) in tr.iter().enumerate() {
        let ang = Float::with_val(prec, &v * (2 * n as u32 + 1));
        let s = Float::with_val(prec, ang.sin_ref());
        let c = ang.cos();
        if n % 2 == 0 {
            th1 += Float::with_val(prec, qn * &s);
        } else {
            th1 -= Float::with_val(prec, qn * &s);
        }
        th2 += Float::with_val(prec, qn * &c);
        th20 += qn;
    }
    th1 *= Float::with_val(prec, 2u32 * &q4);
    th2 *= Float::with_val(prec, 2u32 * &q4);
    th20 *= Float::with_val(prec, 2u32 * &q4);

    let mut th3 = Float::with_val(prec, 1);
    let mut th4 = Float::with_val(prec, 1);
    let mut th30 = Float::with_val(prec, 1);
    let mut th40 = Float::with_val(prec, 1);
    for (i, qn) in sq.iter().enumerate() {
        let n = i as u32 + 1;
        let c = Float::with_val(prec, &v * (2 * n)).cos();
        let qc = Float::with_val(prec, qn * &c);
        th3 += Float::with_val(prec, 2u32 * &qc);
        if n % 2 == 0 {
            th4 += Float::with_val(prec, 2u32 * &qc);
            th40 += Float::with_val(prec, 2u32 * qn);
        } else {
            th4 -= Float::with_val(prec, 2u32 * &qc);
            th40 -= Float::with_val(prec, 2u32 * qn);
        }
        th30 += Float::with_val(prec, 2u32 * qn);
    }

    let out = ctx.prec();
    let sn = Float::with_val(out, &th30 * &th1) / Float::with_val(prec, &th20 * &th4);
    let cn = Float::with_val(out, &th40 * &th2) / Float::with_val(prec, &th20 * &th4);
    let dn = Float::with_val(out, &th40 * &th3) / Float::with_val(prec, &th30 * &th4);
    Ok((sn, cn, dn))
}

/// `(sn, sd)` with `sd = sn/dn`, per the spec of the series oracle.
pub fn jacobi_sn_sd(u: &Float, x: &Float, ctx: &NumericContext) -> Result<(Float, Float), NumericsError> {
    let (sn, _, dn) = jacobi_sn_cn_dn(u, x, ctx)?;
    let sd = Float::with_val(ctx.prec(), &sn / &dn);
    Ok((sn, sd))
}

/// The ten summable hyperbolic families, all over `n ≥ 1` with `(-1)ⁿ`.
///
/// Cosh-type families weight `(2n-1)^A` against `cosh((2n-1)y/2)` powers;
/// sinh-type families weight `n^A` against `sinh(ny)` powers. `SinhCosh2`
/// and `CoshSinh2` are the intermediates produced by single y-derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumFamily {
    Cosh1,
    SinhCosh2,
    Cosh3,
    SinhCosh4,
    Cosh5,
    Sinh1,
    CoshSinh2,
    Sinh3,
    CoshSinh4,
    Sinh5,
}

impl NumFamily {
    fn is_cosh_type(self) -> bool {
        matches!(
            self,
            NumFamily::Cosh1 | NumFamily::SinhCosh2 | NumFamily::Cosh3 | NumFamily::SinhCosh4 | NumFamily::Cosh5
        )
    }

    /// Power of the cosh/sinh in the denominator.
    fn denom_power(self) -> u32 {
        match self {
            NumFamily::Cosh1 | NumFamily::Sinh1 => 1,
            NumFamily::SinhCosh2 | NumFamily::CoshSinh2 => 2,
            NumFamily::Cosh3 | NumFamily::Sinh3 => 3,
            NumFamily::SinhCosh4 | NumFamily::CoshSinh4 => 4,
            NumFamily::Cosh5 | NumFamily::Sinh5 => 5,
        }
    }

    /// True when the numerator carries one sinh (cosh-type) or cosh
    /// (sinh-type) factor.
    fn has_weight(self) -> bool {
        matches!(
            self,
            NumFamily::SinhCosh2 | NumFamily::SinhCosh4 | NumFamily::CoshSinh2 | NumFamily::CoshSinh4
        )
    }

    /// Exponential decay rate κ of one term relative to its argument.
    fn decay(self) -> u32 {
        self.denom_power() - self.has_weight() as u32
    }
}

/// Partial sum of a hyperbolic family with an analytic tail bound: terms are
/// dominated by `C·idx^A·e^{-κ·t}` and summation stops once
/// `C·idx^A·e^{-κt}/(1-ρ)` for the next term falls below
/// `10^-(target_digits+5)`.
pub fn sum_hyperbolic(family: NumFamily, exponent: u32, y: &Float, ctx: &NumericContext) -> Float {
    let prec = ctx.prec() + 24;
    let y = Float::with_val(prec, y);
    let kappa = family.decay();
    let c = family.denom_power();
    // C = 2^c for cosh-type; 2^c/(1-e^{-2y})^c (+1 weight headroom) otherwise
    let mut big_c = Float::with_val(prec, 1u32 << c);
    if !family.is_cosh_type() {
        let damp = Float::with_val(prec, 1u32) - Float::with_val(prec, (-Float::with_val(prec, 2u32 * &y)).exp());
        big_c /= damp.pow(c as i32);
    }
    let eps = ctx.eps(5);
    let mut sum = Float::new(prec);
    let mut n = 1u32;
    loop {
        let (idx, arg) = if family.is_cosh_type() {
            let idx = Float::with_val(prec, 2 * n - 1);
            let arg = Float::with_val(prec, &idx * &y) / 2u32;
            (idx, arg)
        } else {
            let idx = Float::with_val(prec, n);
            let arg = Float::with_val(prec, &idx * &y);
            (idx, arg)
        };
        let denom = if family.is_cosh_type() {
            Float::with_val(prec, arg.cosh_ref())
        } else {
            Float::with_val(prec, arg.sinh_ref())
        };
        let mut term = Float::with_val(prec, (&idx).pow(exponent)) / denom.pow(c as i32);
        if family.has_weight() {
            let w = if family.is_cosh_type() {
                Float::with_val(prec, arg.sinh_ref())
            } else {
                Float::with_val(prec, arg.cosh_ref())
            };
            term *= w;
        }
        if n % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }

        // bound for the next term and the geometric tail after it: arguments
        // advance by y per step in both index conventions
        let (next_idx, next_arg) = if family.is_cosh_type() {
            (2.0 * (n as f64 + 1.0) - 1.0, Float::with_val(prec, &y * (2 * n + 1)) / 2u32)
        } else {
            (n as f64 + 1.0, Float::with_val(prec, &y * (n + 1)))
        };
        let next_bound = Float::with_val(prec, &big_c * Float::with_val(prec, next_idx).pow(exponent as i32))
            * Float::with_val(prec, (-Float::with_val(prec, &next_arg * kappa)).exp());
        let growth = Float::with_val(prec, (next_idx + 2.0) / next_idx).pow(exponent as i32);
        let rho = Float::with_val(prec, (-Float::with_val(prec, &y * kappa)).exp()) * growth;
        if rho < 1u32 {
            let tail = Float::with_val(prec, &next_bound / (Float::with_val(prec, 1u32 - &rho)));
            if tail < eps {
                return Float::with_val(ctx.prec(), &sum);
            }
        }
        n += 1;
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre panels
// ---------------------------------------------------------------------------

fn legendre_rule(order: u32, prec: u32) -> std::sync::Arc<Vec<(Float, Float)>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), std::sync::Arc<Vec<(Float, Float)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(order, prec)) {
        return r.clone();
    }
    let rule = std::sync::Arc::new(compute_legendre_rule(order, prec));
    cache.lock().unwrap().insert((order, prec), rule.clone());
    rule
}

/// Legendre P_n(t) and P_{n-1}(t) by the three-term recurrence.
fn legendre_pair(n: u32, t: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, t);
    for k in 1..n {
        let kf = k as f64;
        let p2 = (Float::with_val(prec, t * &p1) * (2.0 * kf + 1.0) - Float::with_val(prec, &p0 * kf))
            / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn compute_legendre_rule(order: u32, prec: u32) -> Vec<(Float, Float)> {
    let n = order;
    let mut rule = Vec::with_capacity(n as usize);
    let half = (n as usize + 1) / 2;
    for i in 0..half {
        // Chebyshev-style seed, then Newton at full precision
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut t = Float::with_val(prec, seed);
        let one = Float::with_val(prec, 1);
        for _ in 0..60 {
            let (pn, pn1) = legendre_pair(n, &t, prec);
            // P'_n(t) = n (t P_n - P_{n-1}) / (t² - 1)
            let t2m1 = Float::with_val(prec, t.square_ref()) - &one;
            let dp = (Float::with_val(prec, &t * &pn) - &pn1) * n / &t2m1;
            let step = Float::with_val(prec, &pn / &dp);
            t -= &step;
            if step.abs() < Float::with_val(prec, 1) >> (prec - 6) {
                break;
            }
        }
        let (_, pn1) = legendre_pair(n, &t, prec);
        // w = 2 (1 - t²) / (n P_{n-1}(t))²
        let t2m1 = Float::with_val(prec, 1u32) - Float::with_val(prec, t.square_ref());
        let dnp = Float::with_val(prec, &pn1 * n);
        let w = Float::with_val(prec, 2u32 * &t2m1) / dnp.square();
        rule.push((t.clone(), w.clone()));
        if 2 * (i + 1) <= n as usize {
            rule.push((-t, w));
        }
    }
    rule
}

/// Integrates `f` over `[lo, lo+1]` with order escalation until two
/// successive rules agree below `tol`.
fn panel_integrate<F>(f: &F, lo: u32, tol: &Float, prec: u32, cfg: &QuadConfig) -> Result<Float, NumericsError>
where
    F: Fn(&Float, u32) -> Float,
{
    let a = Float::with_val(prec, lo);
    let mid = Float::with_val(prec, &a + Float::with_val(prec, 0.5));
    let mut prev: Option<Float> = None;
    let mut order = cfg.start_order;
    loop {
        let rule = legendre_rule(order, prec);
        let mut acc = Float::new(prec);
        for (node, weight) in rule.iter() {
            let xx = Float::with_val(prec, &mid + Float::with_val(prec, node / 2u32));
            acc += Float::with_val(prec, f(&xx, prec) * weight);
        }
        acc /= 2u32;
        if let Some(p) = prev {
            if Float::with_val(prec, &acc - &p).abs() < *tol {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        if order >= cfg.max_order {
            return Err(NumericsError::PanelEscalation { max_order: cfg.max_order, panel_lo: lo });
        }
        order = (order * 3 / 2).min(cfg.max_order);
    }
}

/// `∫_X^∞ x^a e^{-κx} dx` by the incomplete-gamma recurrence.
fn exp_poly_tail(a: u32, kappa: u32, x: &Float, prec: u32) -> Float {
    let e = Float::with_val(prec, (-Float::with_val(prec, kappa * x)).exp());
    let mut acc = Float::with_val(prec, &e / kappa);
    for k in 1..=a {
        acc = Float::with_val(prec, x.pow(k)) * &e / kappa + acc * k / kappa;
    }
    acc
}

/// Composite integrator over `[0, X]` unit panels, where `X` is chosen so the
/// supplied tail bound drops below `10^-(target_digits+5)`.
fn integrate_decaying<F, T>(
    f: F,
    tail_bound: T,
    magnitude_hint: f64,
    ctx: &NumericContext,
) -> Result<Float, NumericsError>
where
    F: Fn(&Float, u32) -> Float,
    T: Fn(u32, u32) -> Float,
{
    let prec = ctx.prec() + 32;
    let eps = ctx.eps(5);
    let mut x_cut = 8u32;
    loop {
        if tail_bound(x_cut, prec) < eps {
            break;
        }
        x_cut += 4;
        if x_cut > 100_000 {
            return Err(NumericsError::ArgumentOutOfRange("tail bound never met".into()));
        }
    }
    let tol = Float::with_val(prec, ctx.eps(7) * Float::with_val(prec, magnitude_hint.max(1.0)))
        / x_cut;
    let mut total = Float::new(prec);
    for lo in 0..x_cut {
        total += panel_integrate(&f, lo, &tol, prec, &ctx.quad)?;
    }
    Ok(Float::with_val(ctx.prec(), &total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralSign {
    Plus,
    Minus,
}

/// `(cosh x - cos x)/x²` by its even series, avoiding the catastrophic
/// cancellation of `cos x - cosh x` near zero.
fn cosh_minus_cos_over_x2(x: &Float, prec: u32) -> Float {
    let mut sum = Float::new(prec);
    let x4 = Float::with_val(prec, x.pow(4u32));
    let mut pw = Float::with_val(prec, 1);
    let mut j = 0u32;
    let eps = Float::with_val(prec, 1) >> (prec + 8);
    loop {
        let term = Float::with_val(prec, 2u32 * &pw) / crate::exact::factorial(4 * j + 2).numer();
        let done = term < eps;
        sum += term;
        if done {
            return sum;
        }
        pw *= &x4;
        j += 1;
    }
}

/// `∫₀^∞ x^a / (cos x ± cosh x)³ dx` by composite Gauss–Legendre with the
/// tail bound `8·∫_X^∞ x^a e^{-3x} dx · (1-e^{-X})^{-6}`.
///
/// The minus-sign integrand has a removable singularity at 0 and is evaluated
/// as `-x^{a-6}/g(x)³` with `g = (cosh x - cos x)/x²` on `[0, 1/4]`.
pub fn quad_berndt(a_exp: u32, sign: IntegralSign, ctx: &NumericContext) -> Result<Float, NumericsError> {
    match sign {
        IntegralSign::Plus => {
            if a_exp < 1 {
                return Err(NumericsError::ArgumentOutOfRange("plus sign needs a >= 1".into()));
            }
        }
        IntegralSign::Minus => {
            if a_exp < 6 {
                return Err(NumericsError::ArgumentOutOfRange("minus sign needs a >= 6".into()));
            }
        }
    }
    let tail = move |x_cut: u32, prec: u32| {
        let x = Float::with_val(prec, x_cut);
        let damp = Float::with_val(prec, 1u32) - Float::with_val(prec, -&x).exp();
        Float::with_val(prec, 8u32 * exp_poly_tail(a_exp, 3, &x, prec)) / damp.pow(6i32)
    };
    // peak of x^a e^{-3x}/8-ish integrand, good enough as a scale hint
    let xm = a_exp as f64 / 3.0;
    let hint = (a_exp as f64 * xm.ln() - 3.0 * xm).exp() * 8.0;
    let f = move |x: &Float, prec: u32| -> Float {
        match sign {
            IntegralSign::Plus => {
                let den = Float::with_val(prec, x.cos_ref()) + Float::with_val(prec, x.cosh_ref());
                Float::with_val(prec, x.pow(a_exp)) / den.pow(3i32)
            }
            IntegralSign::Minus => {
                if x.to_f64() < 0.25 {
                    let g = cosh_minus_cos_over_x2(x, prec);
                    -Float::with_val(prec, x.pow(a_exp - 6)) / g.pow(3i32)
                } else {
                    let den = Float::with_val(prec, x.cos_ref()) - Float::with_val(prec, x.cosh_ref());
                    Float::with_val(prec, x.pow(a_exp)) / den.pow(3i32)
                }
            }
        }
    };
    integrate_decaying(f, tail, hint, ctx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SanityKind {
    /// `∫₀^∞ sin(nx)/(x(cos x + cosh x)) dx` for odd n, equal to π/4.
    Ramanujan(u32),
    /// `∫_{-∞}^∞ dx/(cos(K√x) + cosh(K'√x))` at x = 1/2 modulus, equal to 2,
    /// folded by t = √x onto two half-lines.
    Ismail,
}

/// `sin(nx)/x`, series-evaluated below 1/4 to keep the removable point exact.
fn sinc_scaled(n: u32, x: &Float, prec: u32) -> Float {
    if x.to_f64() >= 0.25 {
        return Float::with_val(prec, (Float::with_val(prec, n * x)).sin() / x);
    }
    let nx = Float::with_val(prec, n * x);
    let nx2 = Float::with_val(prec, nx.square_ref());
    let mut term = Float::with_val(prec, n);
    let mut sum = term.clone();
    let mut k = 1u32;
    let eps = Float::with_val(prec, 1) >> (prec + 8);
    loop {
        term = -term * &nx2 / Float::with_val(prec, 2 * k * (2 * k + 1));
        sum += &term;
        if term.clone().abs() < eps {
            return sum;
        }
        k += 1;
    }
}

pub fn quad_sanity(kind: SanityKind, ctx: &NumericContext) -> Result<Float, NumericsError> {
    match kind {
        SanityKind::Ramanujan(n) => {
            if n % 2 == 0 {
                return Err(NumericsError::ArgumentOutOfRange("n must be odd".into()));
            }
            let tail = move |x_cut: u32, prec: u32| {
                let x = Float::with_val(prec, x_cut);
                let damp = Float::with_val(prec, 1u32) - Float::with_val(prec, -&x).exp();
                Float::with_val(prec, -&x).exp() * 2u32 / damp.pow(2i32) / x
            };
            let f = move |x: &Float, prec: u32| -> Float {
                let den = Float::with_val(prec, x.cos_ref()) + Float::with_val(prec, x.cosh_ref());
                sinc_scaled(n, x, prec) / den
            };
            integrate_decaying(f, tail, 1.0, ctx)
        }
        SanityKind::Ismail => {
            let half = ctx.new_float(0.5);
            let ed = elliptic_data(&half, ctx)?;
            let prec = ctx.prec() + 32;
            let k1 = Float::with_val(prec, &ed.k_complete);
            let k2 = Float::with_val(prec, &ed.k_complement);
            // x > 0 half-line: 2 ∫ t/(cos(K t) + cosh(K' t)) dt
            let mut total = Float::new(ctx.prec());
            for (kc, kh) in [(k1.clone(), k2.clone()), (k2, k1)] {
                let kh_f64 = kh.to_f64();
                let tail = move |x_cut: u32, prec: u32| {
                    let x = Float::with_val(prec, x_cut);
                    let kx = Float::with_val(prec, &x * kh_f64);
                    let damp = Float::with_val(prec, 1u32) - Float::with_val(prec, -&kx).exp();
                    let poly = Float::with_val(prec, &x / kh_f64) + 1.0 / (kh_f64 * kh_f64);
                    Float::with_val(prec, -&kx).exp() * 2u32 * poly / damp.pow(2i32)
                };
                let kc2 = kc.clone();
                let kh2 = kh.clone();
                let f = move |t: &Float, prec: u32| -> Float {
                    let c = Float::with_val(prec, (Float::with_val(prec, t * &kc2)).cos_ref());
                    let h = Float::with_val(prec, (Float::with_val(prec, t * &kh2)).cosh_ref());
                    Float::with_val(prec, t / (c + h))
                };
                total += 2u32 * integrate_decaying(f, tail, 1.0, ctx)?;
            }
            Ok(total)
        }
    }
}

/// One verification record: a symbolic value against an independent numeric
/// value, with digits of agreement and a pass/fail verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub kind: String,
    pub symbolic_latex: String,
    pub symbolic_json: serde_json::Value,
    /// Symbolic side, evaluated to a decimal string (empty for identity checks).
    pub lhs_value: String,
    /// Independent numeric side as a decimal string.
    pub numeric_value: String,
    pub abs_deviation: String,
    pub rel_deviation: String,
    pub digits_agreed: i64,
    pub tolerance_digits: i64,
    pub pass: bool,
    pub runtime_ms: u128,
    pub conjectural: bool,
}

/// Digits of agreement between two values; sentinel 10000 when they coincide
/// to working precision. Values both below `10^-target_digits` count as fully
/// agreed (absolute branch near zero).
pub fn digits_agreed(a: &Float, b: &Float, ctx: &NumericContext) -> i64 {
    let prec = ctx.prec();
    let diff = Float::with_val(prec, a - b).abs();
    if diff.is_zero() {
        return 10_000;
    }
    let scale = Float::with_val(prec, a.clone().abs().max(&b.clone().abs()));
    if scale < ctx.eps(0) {
        return if diff < ctx.eps(0) { 10_000 } else { 0 };
    }
    let rel = diff / scale;
    (-rel.log10().to_f64()).floor() as i64
}

/// Decimal string with the given number of significant digits.
pub fn to_decimal_string(f: &Float, digits: u32) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.to_string_radix(10, Some(digits as usize))
}

/// Compares a symbolic Γ–π expression against an independent numeric value.
pub fn compare(
    id: &str,
    kind: &str,
    symbolic: &GammaPiExpr,
    numeric: &Float,
    tolerance_digits: i64,
    conjectural: bool,
    ctx: &NumericContext,
) -> VerificationReport {
    let start = Instant::now();
    let prec = ctx.prec();
    let gamma = gamma_quarter(ctx);
    let pi = ctx.pi();
    let sym = symbolic.eval_numeric(&gamma, &pi, prec);
    let digits = digits_agreed(&sym, numeric, ctx);
    let abs_dev = Float::with_val(prec, &sym - numeric).abs();
    let scale = Float::with_val(prec, sym.clone().abs().max(&numeric.clone().abs()));
    let rel_dev = if scale.is_zero() { Float::new(prec) } else { Float::with_val(prec, &abs_dev / &scale) };
    VerificationReport {
        id: id.to_string(),
        kind: kind.to_string(),
        symbolic_latex: symbolic.latex(),
        symbolic_json: symbolic.to_json(),
        lhs_value: to_decimal_string(&sym, ctx.target_digits),
        numeric_value: to_decimal_string(numeric, ctx.target_digits),
        abs_deviation: to_decimal_string(&abs_dev, 3),
        rel_deviation: to_decimal_string(&rel_dev, 3),
        digits_agreed: digits,
        tolerance_digits,
        pass: digits >= tolerance_digits,
        runtime_ms: start.elapsed().as_millis(),
        conjectural,
    }
}

/// Numeric check of the residue-theorem corollaries: quadrature on the left,
/// four hyperbolic sums at y = π on the right.
pub fn contour_identity_check(
    sign: IntegralSign,
    p: u32,
    tolerance_digits: i64,
    ctx: &NumericContext,
) -> Result<VerificationReport, NumericsError> {
    let start = Instant::now();
    let prec = ctx.prec();
    let pi = ctx.pi();
    let (lhs, rhs, name) = match sign {
        IntegralSign::Plus => {
            let integral = quad_berndt(4 * p + 1, IntegralSign::Plus, ctx)?;
            let scale = Float::with_val(prec, Float::with_val(prec, -4).pow(p + 1))
                / Float::with_val(prec, (&pi).pow(4 * p));
            let lhs = Float::with_val(prec, &integral * &scale);
            let pi2 = Float::with_val(prec, pi.square_ref());
            let mut rhs = Float::new(prec);
            if p > 0 {
                rhs += Float::with_val(prec, 4 * p * (4 * p + 1))
                    * sum_hyperbolic(NumFamily::Cosh3, 4 * p - 1, &pi, ctx);
            }
            rhs += Float::with_val(prec, &pi2 * 5u32) / 2u32
                * sum_hyperbolic(NumFamily::Cosh3, 4 * p + 1, &pi, ctx);
            rhs -= Float::with_val(prec, &pi * (3 * (4 * p + 1)))
                * sum_hyperbolic(NumFamily::SinhCosh4, 4 * p, &pi, ctx);
            rhs -= Float::with_val(prec, &pi2 * 3u32) * sum_hyperbolic(NumFamily::Cosh5, 4 * p + 1, &pi, ctx);
            (lhs, rhs, format!("contour identity, plus sign, p = {p}"))
        }
        IntegralSign::Minus => {
            if p < 2 {
                return Err(NumericsError::ArgumentOutOfRange("minus contour identity needs p >= 2".into()));
            }
            let integral = quad_berndt(4 * p - 1, IntegralSign::Minus, ctx)?;
            let sgn = if (p - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let scale = Float::with_val(prec, sgn)
                / (Float::with_val(prec, (&pi).pow(4 * p - 2)) * Float::with_val(prec, 2).pow(2 * p - 3));
            let lhs = Float::with_val(prec, &integral * &scale);
            let pi2 = Float::with_val(prec, pi.square_ref());
            let mut rhs = Float::new(prec);
            rhs -= Float::with_val(prec, (4 * p - 1) * (2 * p - 1))
                * sum_hyperbolic(NumFamily::Sinh3, 4 * p - 3, &pi, ctx);
            rhs += Float::with_val(prec, &pi * (3 * (4 * p - 1)))
                * sum_hyperbolic(NumFamily::CoshSinh4, 4 * p - 2, &pi, ctx);
            rhs -= Float::with_val(prec, &pi2 * 5u32) * sum_hyperbolic(NumFamily::Sinh3, 4 * p - 1, &pi, ctx);
            rhs -= Float::with_val(prec, &pi2 * 6u32) * sum_hyperbolic(NumFamily::Sinh5, 4 * p - 1, &pi, ctx);
            (lhs, rhs, format!("contour identity, minus sign, p = {p}"))
        }
    };
    let digits = digits_agreed(&lhs, &rhs, ctx);
    let abs_dev = Float::with_val(prec, &lhs - &rhs).abs();
    let scale = Float::with_val(prec, lhs.clone().abs().max(&rhs.clone().abs()));
    let rel_dev = if scale.is_zero() { Float::new(prec) } else { Float::with_val(prec, &abs_dev / &scale) };
    Ok(VerificationReport {
        id: format!("contour/{}/p{}", if sign == IntegralSign::Plus { "plus" } else { "minus" }, p),
        kind: "contour-identity".into(),
        symbolic_latex: name,
        symbolic_json: serde_json::Value::Null,
        lhs_value: to_decimal_string(&lhs, ctx.target_digits),
        numeric_value: to_decimal_string(&rhs, ctx.target_digits),
        abs_deviation: to_decimal_string(&abs_dev, 3),
        rel_deviation: to_decimal_string(&rel_dev, 3),
        digits_agreed: digits,
        tolerance_digits,
        pass: digits >= tolerance_digits,
        runtime_ms: start.elapsed().as_millis(),
        conjectural: false,
    })
}
