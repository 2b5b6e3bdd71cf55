//! Maclaurin coefficient polynomial tables for the Jacobi elliptic functions
//! sd and sn: `sd(u) = Σ p_{2m+1}(x) u^{2m+1}/(2m+1)!` and
//! `sn(u) = Σ g_{2n-1}(x) u^{2n-1}/(2n-1)!` with `x = k²`, the Cauchy-product
//! polynomials `q_{2n}(x)` of `sn²`, and the transformed polynomials
//! `R_{2m}(x) = (x-1)^{m-1} q_{2m}(x/(x-1)) / (2m)!`.
//!
//! The `p` table is generated from the second-order ODE
//! `sd'' = (2x-1)·sd - 2x(1-x)·sd³`, which follows from
//! `(sd')² = (1-(1-x)sd²)(1+x·sd²)`; the integer coefficients drop out of the
//! recurrence automatically. The `g` table comes from the classical
//! `sn'' = -(1+x)·sn + 2x·sn³`.

use crate::exact::{binomial, factorial, rat, ExactError, Poly};
use rug::Rational;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("table {kind:?} generated with max_index {max}, index {index} requested")]
    IndexOutOfRange { kind: TableKind, max: usize, index: usize },
    #[error("q_{n} has degree {deg}, expected {expected}")]
    QDegree { n: usize, deg: usize, expected: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Hash)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    /// Entry m holds `p_{2m+1}` (m >= 0).
    SdP,
    /// Entry n holds `g_{2n-1}` (n >= 1).
    SnG,
    /// Entry n holds `q_{2n}` (n >= 1).
    Sn2Q,
    /// Entry m holds `R_{2m}` (m >= 1).
    SinhR,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::SdP => "sd_p",
            TableKind::SnG => "sn_g",
            TableKind::Sn2Q => "sn2_q",
            TableKind::SinhR => "sinh_R",
        }
    }

    pub fn parse(s: &str) -> Option<TableKind> {
        match s {
            "sd_p" => Some(TableKind::SdP),
            "sn_g" => Some(TableKind::SnG),
            "sn2_q" => Some(TableKind::Sn2Q),
            "sinh_R" => Some(TableKind::SinhR),
            _ => None,
        }
    }

    /// Index of the first entry (0 for sd_p, 1 for the rest).
    pub fn first_index(self) -> usize {
        match self {
            TableKind::SdP => 0,
            _ => 1,
        }
    }

    /// Symbol attached to entry `i`, e.g. `p_5`.
    pub fn symbol(self, i: usize) -> String {
        match self {
            TableKind::SdP => format!("p_{}", 2 * i + 1),
            TableKind::SnG => format!("g_{}", 2 * i - 1),
            TableKind::Sn2Q => format!("q_{}", 2 * i),
            TableKind::SinhR => format!("R_{}", 2 * i),
        }
    }
}

/// One generated coefficient table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesTable {
    kind: TableKind,
    polys: Vec<Poly>,
}

impl SeriesTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    /// Largest entry index present.
    pub fn max_index(&self) -> usize {
        self.kind.first_index() + self.polys.len() - 1
    }

    /// Entry access by table index (`m` for sd_p/sinh_R, `n` for sn_g/sn2_q).
    pub fn get(&self, index: usize) -> Result<&Poly, SeriesError> {
        let first = self.kind.first_index();
        index
            .checked_sub(first)
            .and_then(|i| self.polys.get(i))
            .ok_or(SeriesError::IndexOutOfRange {
                kind: self.kind,
                max: self.max_index(),
                index,
            })
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Poly)> {
        let first = self.kind.first_index();
        self.polys.iter().enumerate().map(move |(i, p)| (first + i, p))
    }

    pub fn from_parts(kind: TableKind, polys: Vec<Poly>) -> Self {
        SeriesTable { kind, polys }
    }
}

/// `p_1 .. p_{2M+1}`: Maclaurin coefficients of sd.
pub fn gen_sd_polys(max_m: usize) -> SeriesTable {
    let polys = odd_ode_table(max_m, &Poly::from_ints(&[-1, 2]), &Poly::from_ints(&[0, -2, 2]));
    SeriesTable { kind: TableKind::SdP, polys }
}

/// `g_1 .. g_{2M-1}`: Maclaurin coefficients of sn. `max_m >= 1`.
pub fn gen_sn_polys(max_m: usize) -> SeriesTable {
    assert!(max_m >= 1, "sn table needs at least g_1");
    let polys = odd_ode_table(max_m - 1, &Poly::from_ints(&[-1, -1]), &Poly::from_ints(&[0, 2]));
    SeriesTable { kind: TableKind::SnG, polys }
}

/// Shared recurrence for odd series `f(u) = Σ c_m(x) u^{2m+1}/(2m+1)!` obeying
/// `f'' = lin·f + cub·f³`: the coefficient of `u^{2m+1}/(2m+1)!` in `f³` is
/// `(2m+1)! Σ_{j+k+l=m-1} a_j a_k a_l` with `a_j = c_j/(2j+1)!`.
fn odd_ode_table(steps: usize, lin: &Poly, cub: &Poly) -> Vec<Poly> {
    let mut polys = vec![Poly::one()];
    let mut scaled = vec![Poly::one()]; // a_j = c_j / (2j+1)!
    for i in 1..=steps {
        let m = i - 1;
        let mut cube = Poly::zero();
        for j in 0..m {
            for k in 0..(m - j) {
                let l = m - 1 - j - k;
                cube = cube.add(&scaled[j].mul(&scaled[k]).mul(&scaled[l]));
            }
        }
        let next = lin
            .mul(&polys[i - 1])
            .add(&cub.mul(&cube).scale(&factorial(2 * m as u32 + 1)));
        scaled.push(next.scale(&Rational::from(factorial(2 * i as u32 + 1).recip())));
        polys.push(next);
    }
    polys
}

/// `q_2 .. q_{2M}` by the Cauchy product
/// `q_{2n} = Σ_{j=1}^{n} C(2n, 2j-1) g_{2j-1} g_{2n-2j+1}`.
pub fn gen_q_polys(g: &SeriesTable, max_n: usize) -> Result<SeriesTable, SeriesError> {
    assert_eq!(g.kind(), TableKind::SnG);
    let mut polys = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let mut acc = Poly::zero();
        for j in 1..=n {
            let c = Rational::from(binomial(2 * n as u32, 2 * j as u32 - 1));
            acc = acc.add(&g.get(j)?.mul(g.get(n - j + 1)?).scale(&c));
        }
        let expected = n - 1;
        if acc.degree() != Some(expected) {
            return Err(SeriesError::QDegree {
                n: 2 * n,
                deg: acc.degree().unwrap_or(0),
                expected,
            });
        }
        polys.push(acc);
    }
    Ok(SeriesTable { kind: TableKind::Sn2Q, polys })
}

/// `R_2 .. R_{2M}` via `R_{2m} = (x-1)^{m-1} q_{2m}(x/(x-1)) / (2m)!`.
pub fn gen_r_polys(q: &SeriesTable, max_m: usize) -> Result<SeriesTable, SeriesError> {
    assert_eq!(q.kind(), TableKind::Sn2Q);
    let mut polys = Vec::with_capacity(max_m);
    for m in 1..=max_m {
        let qm = q.get(m)?;
        // deg(q_{2m}) = m-1 is enforced at q generation, so the Möbius bound holds
        let sub = qm.moebius_substitute(m - 1)?;
        polys.push(sub.scale(&Rational::from(factorial(2 * m as u32).recip())));
    }
    Ok(SeriesTable { kind: TableKind::SinhR, polys })
}

/// All four tables, generated to a common bound `M`: `p_1..p_{2M+1}`,
/// `g_1..g_{2M-1}`, `q_2..q_{2M}`, `R_2..R_{2M}`.
#[derive(Clone, Debug)]
pub struct Tables {
    pub p: SeriesTable,
    pub g: SeriesTable,
    pub q: SeriesTable,
    pub r: SeriesTable,
}

impl Tables {
    pub fn generate(max_m: usize) -> Self {
        let max_m = max_m.max(1);
        let p = gen_sd_polys(max_m);
        let g = gen_sn_polys(max_m);
        let q = gen_q_polys(&g, max_m).expect("q degrees match the reflection identity");
        let r = gen_r_polys(&q, max_m).expect("R substitution clears exactly");
        Tables { p, g, q, r }
    }

    /// `p_n^{(k)}(1/2)` for odd `n`.
    pub fn p_at_half(&self, n: usize, k: u32) -> Result<Rational, SeriesError> {
        debug_assert!(n % 2 == 1);
        Ok(self.p.get((n - 1) / 2)?.derivative_n(k).eval(&rat(1, 2)))
    }

    /// `R_n^{(k)}(1/2)` for even `n`.
    pub fn r_at_half(&self, n: usize, k: u32) -> Result<Rational, SeriesError> {
        debug_assert!(n % 2 == 0);
        Ok(self.r.get(n / 2)?.derivative_n(k).eval(&rat(1, 2)))
    }

    /// `p_{2m+1}` by subscript `2m+1`.
    pub fn p_poly(&self, n: usize) -> Result<&Poly, SeriesError> {
        self.p.get((n - 1) / 2)
    }

    /// `R_{2m}` by subscript `2m`.
    pub fn r_poly(&self, n: usize) -> Result<&Poly, SeriesError> {
        self.r.get(n / 2)
    }
}

/// Outcome of one structural identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub index: usize,
    pub pass: bool,
    pub detail: String,
}

impl IdentityCheck {
    fn ok(identity: impl Into<String>, index: usize) -> Self {
        IdentityCheck { identity: identity.into(), index, pass: true, detail: String::new() }
    }

    fn fail(identity: impl Into<String>, index: usize, detail: String) -> Self {
        IdentityCheck { identity: identity.into(), index, pass: false, detail }
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.identity,
            self.index,
            if self.detail.is_empty() { String::new() } else { format!(": {}", self.detail) }
        )
    }
}

fn require_zero(out: &mut Vec<IdentityCheck>, identity: &str, index: usize, v: Rational) {
    if v.cmp0() == std::cmp::Ordering::Equal {
        out.push(IdentityCheck::ok(identity, index));
    } else {
        out.push(IdentityCheck::fail(identity, index, format!("value {v}")));
    }
}

/// Exact structural identity suite over the generated tables:
///
/// - reflections `g_{2n-1}(x) = x^{n-1} g_{2n-1}(1/x)` and
///   `q_{2n}(x) = x^{n-1} q_{2n}(1/x)` (coefficient palindromes);
/// - vanishings `q_{4m}(-1) = 0`, `q'_{4m-2}(-1) + (m-1) q_{4m-2}(-1) = 0`,
///   `q''_{4m}(-1) + 2(m-1) q'_{4m}(-1) = 0`;
/// - `p_{4m-1}(1/2) = p'_{4m+1}(1/2) = p'_{4m-3}(1/2) = p''_{4m-1}(1/2)
///   = p⁽⁴⁾_{4m-1}(1/2) = 0`;
/// - all `p_{2m+1}` lie in Z[x] (reported, never silently normalized);
/// - the degree pattern deg p_{2m+1} = m, deg g_{2n-1} = deg q_{2n} = n-1,
///   deg R_{2m} = m-1.
pub fn check_structural_identities(tables: &Tables, max_n: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let minus_one = rat(-1, 1);
    let t = tables;

    // reflection identities: deg = n-1 plus palindromic coefficients
    for n in 1..=max_n.min(t.g.max_index()) {
        let g = t.g.get(n).unwrap();
        out.push(if reflects(g, n - 1) {
            IdentityCheck::ok("g-reflection", n)
        } else {
            IdentityCheck::fail("g-reflection", n, format!("g_{} = {}", 2 * n - 1, g))
        });
        let q = t.q.get(n).unwrap();
        out.push(if reflects(q, n - 1) {
            IdentityCheck::ok("q-reflection", n)
        } else {
            IdentityCheck::fail("q-reflection", n, format!("q_{} = {}", 2 * n, q))
        });
    }

    // q vanishings at x = -1
    for m in 1..=(max_n.min(t.q.max_index()) / 2) {
        let q4m = t.q.get(2 * m).unwrap();
        require_zero(&mut out, "q_{4m}(-1)", m, q4m.eval(&minus_one));
        let q4m2 = t.q.get(2 * m - 1).unwrap();
        let v = q4m2.derivative().eval(&minus_one)
            + Rational::from(m as u64 - 1) * q4m2.eval(&minus_one);
        require_zero(&mut out, "q'_{4m-2}(-1)+(m-1)q_{4m-2}(-1)", m, v);
        let v = q4m.derivative_n(2).eval(&minus_one)
            + rat(2 * (m as i64 - 1), 1) * q4m.derivative().eval(&minus_one);
        require_zero(&mut out, "q''_{4m}(-1)+2(m-1)q'_{4m}(-1)", m, v);
    }

    // p-derivative vanishings at x = 1/2
    let half = rat(1, 2);
    let p_max = t.p.max_index();
    for m in 1..=max_n {
        // p_{4m-1} sits at table entry (4m-1-1)/2 = 2m-1
        if 2 * m - 1 <= p_max {
            let p = t.p.get(2 * m - 1).unwrap();
            require_zero(&mut out, "p_{4m-1}(1/2)", m, p.eval(&half));
            require_zero(&mut out, "p''_{4m-1}(1/2)", m, p.derivative_n(2).eval(&half));
            require_zero(&mut out, "p''''_{4m-1}(1/2)", m, p.derivative_n(4).eval(&half));
        }
        if 2 * m <= p_max {
            let p = t.p.get(2 * m).unwrap();
            require_zero(&mut out, "p'_{4m+1}(1/2)", m, p.derivative().eval(&half));
        }
        if 2 * m - 2 <= p_max {
            let p = t.p.get(2 * m - 2).unwrap();
            require_zero(&mut out, "p'_{4m-3}(1/2)", m, p.derivative().eval(&half));
        }
    }

    // p in Z[x]
    let mut all_integer = true;
    for (m, p) in t.p.entries() {
        if !p.has_integer_coeffs() {
            all_integer = false;
            out.push(IdentityCheck::fail(
                "p-integer-coefficients",
                m,
                format!("p_{} = {}", 2 * m + 1, p),
            ));
        }
    }
    if all_integer {
        out.push(IdentityCheck::ok("p-integer-coefficients", t.p.max_index()));
    }

    // degree pattern
    let mut deg_ok = true;
    for (m, p) in t.p.entries() {
        deg_ok &= p.degree() == Some(m);
    }
    for (n, g) in t.g.entries() {
        deg_ok &= g.degree() == Some(n - 1);
    }
    for (n, q) in t.q.entries() {
        deg_ok &= q.degree() == Some(n - 1);
    }
    for (m, r) in t.r.entries() {
        deg_ok &= r.degree() == Some(m - 1);
    }
    out.push(if deg_ok {
        IdentityCheck::ok("degree-pattern", max_n)
    } else {
        IdentityCheck::fail("degree-pattern", max_n, "degree mismatch".into())
    });

    out
}

/// `f(x) = x^d f(1/x)` for a polynomial of degree `d`, i.e. palindromic
/// coefficients within `d+1` slots.
fn reflects(p: &Poly, d: usize) -> bool {
    if p.degree() != Some(d) {
        return false;
    }
    (0..=d).all(|i| p.coeff(i) == p.coeff(d - i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    #[test]
    fn sd_table_first_entries() {
        let p = gen_sd_polys(2);
        assert_eq!(p.get(0).unwrap(), &Poly::one());
        assert_eq!(p.get(1).unwrap(), &Poly::from_ints(&[-1, 2]));
        assert_eq!(p.get(2).unwrap(), &Poly::from_ints(&[1, -16, 16]));
    }

    #[test]
    fn sn_table_first_entries() {
        let g = gen_sn_polys(3);
        assert_eq!(g.get(1).unwrap(), &Poly::one());
        assert_eq!(g.get(2).unwrap(), &Poly::from_ints(&[-1, -1]));
        assert_eq!(g.get(3).unwrap(), &Poly::from_ints(&[1, 14, 1]));
    }

    #[test]
    fn q_table_first_entries() {
        let g = gen_sn_polys(4);
        let q = gen_q_polys(&g, 4).unwrap();
        assert_eq!(q.get(1).unwrap(), &Poly::from_ints(&[2]));
        assert_eq!(q.get(2).unwrap(), &Poly::from_ints(&[-8, -8]));
        assert_eq!(q.get(3).unwrap(), &Poly::from_ints(&[32, 208, 32]));
        // q_8(-1) = 0
        assert_eq!(q.get(4).unwrap().eval(&rat(-1, 1)), rat_int(0));
    }

    #[test]
    fn r_table_first_entries() {
        let t = Tables::generate(4);
        assert_eq!(t.r.get(1).unwrap(), &Poly::one());
        assert_eq!(t.r.get(2).unwrap(), &Poly::from_coeffs(vec![rat(1, 3), rat(-2, 3)]));
        assert_eq!(
            t.r.get(3).unwrap(),
            &Poly::from_coeffs(vec![rat(2, 45), rat(-17, 45), rat(17, 45)])
        );
        // R_8(1/2) = 0 (m = 3 instance of R_{4m-4}(1/2) = 0)
        assert_eq!(t.r_at_half(8, 0).unwrap(), rat_int(0));
    }

    #[test]
    fn structural_identities_pass() {
        let t = Tables::generate(8);
        let checks = check_structural_identities(&t, 4);
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.pass, "{c}");
        }
    }

    #[test]
    fn p3_belongs_to_the_4m_minus_1_family_only_at_m_1() {
        // p_3 = 2x-1 vanishes at 1/2 because 3 = 4m-1 with m = 1; the check
        // indexes it there and nowhere else.
        let t = Tables::generate(2);
        let checks = check_structural_identities(&t, 1);
        let hits: Vec<_> = checks.iter().filter(|c| c.identity == "p_{4m-1}(1/2)").collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].index, 1);
        assert!(hits[0].pass);
    }

    #[test]
    fn p_coefficients_are_integers() {
        let t = Tables::generate(16);
        for (_, p) in t.p.entries() {
            assert!(p.has_integer_coeffs(), "non-integer coefficient in {p}");
        }
    }

    #[test]
    fn degrees_follow_the_index_pattern() {
        let t = Tables::generate(12);
        for (m, p) in t.p.entries() {
            assert_eq!(p.degree(), Some(m));
        }
        for (n, g) in t.g.entries() {
            assert_eq!(g.degree(), Some(n - 1));
        }
        for (n, q) in t.q.entries() {
            assert_eq!(q.degree(), Some(n - 1));
        }
        for (m, r) in t.r.entries() {
            assert_eq!(r.degree(), Some(m - 1));
        }
    }

    /// The square of the odd sn series must reproduce the q series exactly:
    /// the u^{2n} coefficient of (Σ g u^{2n-1}/(2n-1)!)² equals q_{2n}/(2n)!.
    #[test]
    fn cauchy_product_consistency() {
        let max = 8;
        let t = Tables::generate(max);
        for n in 1..=max {
            let mut acc = Poly::zero();
            for j in 1..=n {
                let c = (factorial(2 * j as u32 - 1) * factorial(2 * (n - j) as u32 + 1)).recip();
                acc = acc.add(&t.g.get(j).unwrap().mul(t.g.get(n - j + 1).unwrap()).scale(&c));
            }
            let expected = t.q.get(n).unwrap().scale(&factorial(2 * n as u32).recip());
            assert_eq!(acc, expected, "u^{} coefficient", 2 * n);
        }
    }

    #[test]
    fn failed_identity_is_reported_structurally() {
        // feed a deliberately wrong q table through the checker
        let g = gen_sn_polys(3);
        let good_q = gen_q_polys(&g, 3).unwrap();
        let r = gen_r_polys(&good_q, 3).unwrap();
        let mut polys: Vec<Poly> = good_q.entries().map(|(_, p)| p.clone()).collect();
        polys[1] = Poly::from_ints(&[-8, -7]); // breaks reflection
        let q = SeriesTable::from_parts(TableKind::Sn2Q, polys);
        let t = Tables { p: gen_sd_polys(3), g, q, r };
        let checks = check_structural_identities(&t, 3);
        assert!(checks.iter().any(|c| !c.pass && c.identity == "q-reflection" && c.index == 2));
    }
}
